//! Complete d-partite complexes with CRT facet labels, the subcomplexes
//! `K_A` and `K[T]`, oriented boundary matrices and reduced integer homology.
//!
//! A simplex is oriented by listing its vertices in ascending part order.
//! Deleting the vertex at position `i` contributes the sign `(-1)^i`. Faces of
//! each dimension are ordered lexicographically on their `(part, residue)`
//! sequences, which fixes the row and column layout of every boundary matrix.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlinalg::{self, HomologySummary, IntMatrix};
use crate::numtheory::{crt_combine, crt_split, euler_phi, squarefree_primes, ResidueVector};

/// Vertex `residue mod parts[part]`; `part` is a zero-based part index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub part: usize,
    pub residue: u64,
}

/// Vertices in strictly ascending part order. The empty simplex is the unique
/// face of dimension -1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OrientedSimplex(Vec<Vertex>);

impl OrientedSimplex {
    pub fn new(mut vertices: Vec<Vertex>) -> Result<Self> {
        vertices.sort();
        if vertices.windows(2).any(|w| w[0].part == w[1].part) {
            return Err(Error::InvalidArgument(
                "a simplex has at most one vertex per part".into(),
            ));
        }
        Ok(OrientedSimplex(vertices))
    }

    pub fn empty() -> Self {
        OrientedSimplex(Vec::new())
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> isize {
        self.0.len() as isize - 1
    }

    /// `(sign, face)` pairs of the oriented boundary.
    pub fn boundary(&self) -> impl Iterator<Item = (i64, OrientedSimplex)> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut v = self.0.clone();
            v.remove(i);
            (if i % 2 == 0 { 1 } else { -1 }, OrientedSimplex(v))
        })
    }

    pub fn is_face_of(&self, other: &OrientedSimplex) -> bool {
        self.0.iter().all(|v| other.0.binary_search(v).is_ok())
    }

    /// Residues indexed by part, `None` for parts the simplex avoids.
    pub fn residue_slots(&self, d: usize) -> Vec<Option<u64>> {
        let mut out = vec![None; d];
        for v in &self.0 {
            out[v.part] = Some(v.residue);
        }
        out
    }

    fn with_vertex(&self, v: Vertex) -> Result<Self> {
        let mut vs = self.0.clone();
        vs.push(v);
        Self::new(vs)
    }
}

/// Simplicial complex on the vertex set `K_{p_1} * ... * K_{p_d}`, generated
/// by an explicit facet list and optionally the full (d-2)-skeleton.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialComplex {
    parts: Vec<u64>,
    facets: BTreeSet<OrientedSimplex>,
    full_skeleton: bool,
}

/// Homology of one complex in every degree from -1 up to its dimension.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyProfile {
    /// Entry `k` holds the reduced homology in degree `k - 1`.
    pub groups: Vec<HomologySummary>,
}

impl HomologyProfile {
    /// Reduced homology in degree `i`, trivial outside the computed range.
    pub fn degree(&self, i: isize) -> HomologySummary {
        if i < -1 {
            return HomologySummary::trivial();
        }
        self.groups.get((i + 1) as usize).cloned().unwrap_or_default()
    }

    /// Degrees carrying nontrivial homology.
    pub fn support(&self) -> Vec<isize> {
        self.groups
            .iter()
            .enumerate()
            .filter(|(_, g)| !g.is_trivial())
            .map(|(k, _)| k as isize - 1)
            .collect()
    }
}

impl SimplicialComplex {
    pub fn new(parts: Vec<u64>, facets: impl IntoIterator<Item = OrientedSimplex>, full_skeleton: bool) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a complex needs at least one part".into()));
        }
        if parts.contains(&0) {
            return Err(Error::InvalidArgument("parts must be nonempty".into()));
        }
        let facets: BTreeSet<OrientedSimplex> = facets.into_iter().collect();
        for f in &facets {
            for v in f.vertices() {
                if v.part >= parts.len() || v.residue >= parts[v.part] {
                    return Err(Error::InvalidArgument(format!(
                        "vertex {} mod part {} out of range",
                        v.residue, v.part
                    )));
                }
            }
            if f.vertices().windows(2).any(|w| w[0].part >= w[1].part) {
                return Err(Error::InvalidArgument("facet not in ascending part order".into()));
            }
        }
        Ok(SimplicialComplex { parts, facets, full_skeleton })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn facets(&self) -> &BTreeSet<OrientedSimplex> {
        &self.facets
    }

    pub fn full_skeleton(&self) -> bool {
        self.full_skeleton
    }

    /// Dimension; -1 for the complex whose only face is the empty simplex.
    pub fn dim(&self) -> isize {
        let from_facets = self.facets.iter().map(|f| f.dim()).max().unwrap_or(-1);
        let from_skeleton = if self.full_skeleton { self.parts.len() as isize - 2 } else { -1 };
        from_facets.max(from_skeleton)
    }

    /// All faces of dimension `k`, lexicographically ordered.
    pub fn faces(&self, k: isize) -> Vec<OrientedSimplex> {
        if k < -1 {
            return Vec::new();
        }
        let size = (k + 1) as usize;
        let mut out = BTreeSet::new();
        for f in &self.facets {
            if f.0.len() >= size {
                for_each_subset(&f.0, size, &mut |s| {
                    out.insert(OrientedSimplex(s.to_vec()));
                });
            }
        }
        if self.full_skeleton && k <= self.parts.len() as isize - 2 {
            for s in full_faces(&self.parts, size) {
                out.insert(s);
            }
        }
        if k == -1 {
            out.insert(OrientedSimplex::empty());
        }
        out.into_iter().collect()
    }

    pub fn contains_face(&self, s: &OrientedSimplex) -> bool {
        if s.0.is_empty() {
            return true;
        }
        if self.full_skeleton && s.0.len() < self.parts.len() {
            return true;
        }
        self.facets.iter().any(|f| s.is_face_of(f))
    }

    /// Maximal faces. The complex `{empty}` reports the empty simplex.
    pub fn maximal_faces(&self) -> Vec<OrientedSimplex> {
        if !self.full_skeleton {
            if self.facets.is_empty() {
                return vec![OrientedSimplex::empty()];
            }
            return self
                .facets
                .iter()
                .filter(|f| !self.facets.iter().any(|g| g != *f && f.is_face_of(g)))
                .cloned()
                .collect();
        }
        let dim = self.dim();
        let mut all: Vec<OrientedSimplex> = Vec::new();
        for k in (-1..=dim).rev() {
            for s in self.faces(k) {
                if !all.iter().any(|big| s.is_face_of(big)) {
                    all.push(s);
                }
            }
        }
        all.sort();
        all
    }

    /// `boundary_k : C_k -> C_{k-1}`, rows and columns in face order.
    /// `k = 0` gives the augmentation onto the empty face.
    pub fn boundary_matrix(&self, k: isize) -> IntMatrix {
        boundary_between(&self.faces(k - 1), &self.faces(k))
    }

    pub fn reduced_homology(&self, i: isize) -> HomologySummary {
        if i < -1 || i > self.dim() {
            return HomologySummary::trivial();
        }
        let d_i = self.boundary_matrix(i);
        let d_next = self.boundary_matrix(i + 1);
        homology_from(&d_i, &d_next)
    }

    /// Reduced homology in every degree `-1..=dim`.
    pub fn homology_profile(&self) -> HomologyProfile {
        let dim = self.dim();
        let faces: Vec<Vec<OrientedSimplex>> = (-1..=dim).map(|k| self.faces(k)).collect();
        // ranks[k] and torsion[k] of boundary_{k-1+..}: index by degree + 1.
        let mut ranks = vec![0usize; faces.len() + 1];
        let mut torsion = vec![Vec::new(); faces.len() + 1];
        for k in 1..faces.len() {
            let b = boundary_between(&faces[k - 1], &faces[k]);
            let snf = exactlinalg::smith_normal_form(&b, false);
            ranks[k] = snf.rank;
            torsion[k] = snf.torsion();
        }
        let groups = (0..faces.len())
            .map(|k| HomologySummary {
                free_rank: faces[k].len() - ranks[k] - ranks[k + 1],
                torsion: torsion[k + 1].clone(),
            })
            .collect();
        HomologyProfile { groups }
    }

    /// Reduced Euler characteristic from face counts.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        (-1..=self.dim())
            .map(|k| if k.rem_euclid(2) == 0 { 1 } else { -1 } * self.faces(k).len() as i64)
            .sum()
    }

    /// Both complexes have exactly the same faces.
    pub fn same_faces(&self, other: &SimplicialComplex) -> bool {
        self.parts == other.parts
            && self.dim() == other.dim()
            && (-1..=self.dim()).all(|k| self.faces(k) == other.faces(k))
    }

    /// CRT residues of the full-dimensional facets.
    pub fn facet_residues(&self) -> Result<BTreeSet<u64>> {
        let d = self.parts.len();
        self.facets
            .iter()
            .filter(|f| f.0.len() == d)
            .map(|f| {
                let rv = ResidueVector(f.0.iter().map(|v| v.residue).collect());
                crt_combine(&rv, &self.parts)
            })
            .collect()
    }

    pub fn to_file(&self) -> ComplexFile {
        let d = self.parts.len();
        ComplexFile {
            parts: self.parts.clone(),
            facets: self.facets.iter().map(|f| f.residue_slots(d)).collect(),
            full_skeleton: self.full_skeleton,
        }
    }

    pub fn from_file(file: &ComplexFile) -> Result<Self> {
        let d = file.parts.len();
        let facets = file
            .facets
            .iter()
            .map(|slots| {
                if slots.len() != d {
                    return Err(Error::Parse(format!(
                        "facet {slots:?} needs one slot per part ({d})"
                    )));
                }
                OrientedSimplex::new(
                    slots
                        .iter()
                        .enumerate()
                        .filter_map(|(part, r)| r.map(|residue| Vertex { part, residue }))
                        .collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        SimplicialComplex::new(file.parts.clone(), facets, file.full_skeleton)
    }
}

/// JSON exchange form: one residue slot per part, `null` where a facet
/// avoids that part.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexFile {
    pub parts: Vec<u64>,
    pub facets: Vec<Vec<Option<u64>>>,
    #[serde(default)]
    pub full_skeleton: bool,
}

fn homology_from(d_i: &IntMatrix, d_next: &IntMatrix) -> HomologySummary {
    let r_i = exactlinalg::rank(d_i);
    let snf = exactlinalg::smith_normal_form(d_next, false);
    HomologySummary { free_rank: d_i.cols() - r_i - snf.rank, torsion: snf.torsion() }
}

/// Boundary matrix from `cols` (k-faces) to `rows` ((k-1)-faces). Faces of a
/// column missing from `rows` are dropped, which yields relative boundaries.
pub fn boundary_between(rows: &[OrientedSimplex], cols: &[OrientedSimplex]) -> IntMatrix {
    let index: HashMap<&OrientedSimplex, usize> = rows.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut m = IntMatrix::zeros(rows.len(), cols.len());
    for (j, s) in cols.iter().enumerate() {
        for (sign, face) in s.boundary() {
            if let Some(&i) = index.get(&face) {
                m.set(i, j, BigInt::from(sign));
            }
        }
    }
    m
}

fn for_each_subset<T: Clone>(items: &[T], size: usize, f: &mut impl FnMut(&[T])) {
    fn rec<T: Clone>(items: &[T], start: usize, size: usize, cur: &mut Vec<T>, f: &mut impl FnMut(&[T])) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in start..=items.len().saturating_sub(need) {
            if i >= items.len() {
                break;
            }
            cur.push(items[i].clone());
            rec(items, i + 1, size, cur, f);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(size);
    rec(items, 0, size, &mut cur, f);
}

/// Every simplex of `K_{p_1} * ... * K_{p_d}` with `size` vertices.
fn full_faces(parts: &[u64], size: usize) -> Vec<OrientedSimplex> {
    let idx: Vec<usize> = (0..parts.len()).collect();
    let mut out = Vec::new();
    for_each_subset(&idx, size, &mut |chosen| {
        let mut cur: Vec<Vertex> = Vec::with_capacity(size);
        product_rec(parts, chosen, 0, &mut cur, &mut out);
    });
    out.sort();
    out
}

fn product_rec(parts: &[u64], chosen: &[usize], k: usize, cur: &mut Vec<Vertex>, out: &mut Vec<OrientedSimplex>) {
    if k == chosen.len() {
        out.push(OrientedSimplex(cur.clone()));
        return;
    }
    let part = chosen[k];
    for residue in 0..parts[part] {
        cur.push(Vertex { part, residue });
        product_rec(parts, chosen, k + 1, cur, out);
        cur.pop();
    }
}

/// Number of `size`-vertex simplices of the complete d-partite complex.
pub fn full_face_count(parts: &[u64], size: usize) -> u64 {
    // Elementary symmetric polynomial e_size(p_1, ..., p_d).
    let mut e = vec![0u64; size + 1];
    e[0] = 1;
    for &p in parts {
        for k in (1..=size).rev() {
            e[k] += e[k - 1] * p;
        }
    }
    e[size]
}

/// The oriented facet `F_j = [j mod p_1, ..., j mod p_d]`.
pub fn facet_for_residue(primes: &[u64], j: u64) -> Result<OrientedSimplex> {
    let rv = crt_split(j, primes)?;
    Ok(OrientedSimplex(
        rv.0.iter()
            .enumerate()
            .map(|(part, &residue)| Vertex { part, residue })
            .collect(),
    ))
}

/// `K_{p_1} * ... * K_{p_d}`.
pub fn complete_dpartite(parts: &[u64]) -> Result<SimplicialComplex> {
    if parts.is_empty() {
        return Err(Error::InvalidArgument("complete d-partite complex needs d >= 1".into()));
    }
    let facets = full_faces(parts, parts.len());
    SimplicialComplex::new(parts.to_vec(), facets, false)
}

/// The complex generated by the facets `F_j` for the given residues mod n.
pub fn complex_from_residues(n: u64, residues: impl IntoIterator<Item = u64>, full_skeleton: bool) -> Result<SimplicialComplex> {
    let primes = squarefree_primes(n)?;
    let facets = residues
        .into_iter()
        .map(|j| {
            if j >= n {
                return Err(Error::InvalidArgument(format!("residue {j} out of range mod {n}")));
            }
            facet_for_residue(&primes, j)
        })
        .collect::<Result<Vec<_>>>()?;
    SimplicialComplex::new(primes, facets, full_skeleton)
}

/// `A_0 = {phi(n)+1, ..., n-1}`.
pub fn a_zero(n: u64) -> Vec<u64> {
    ((euler_phi(n) + 1)..n).collect()
}

/// `K_A`: generated by the facets `F_j` for `j` in `A ∪ A_0`. Fails if the
/// result misses any (d-2)-face of the complete complex.
pub fn subcomplex_ka(n: u64, a: &BTreeSet<u64>) -> Result<SimplicialComplex> {
    let phi = euler_phi(n);
    if let Some(&bad) = a.iter().find(|&&j| j > phi) {
        return Err(Error::InvalidArgument(format!("{bad} is outside 0..={phi}")));
    }
    let k = complex_from_residues(n, a.iter().copied().chain(a_zero(n)), false)?;
    let d = k.num_parts();
    let have = k.faces(d as isize - 2).len() as u64;
    let want = full_face_count(k.parts(), d - 1);
    if have != want {
        return Err(Error::Consistency(format!(
            "K_A for n = {n} has {have} of {want} codimension-one faces"
        )));
    }
    Ok(k)
}

/// `K[T]`: full (d-2)-skeleton plus the facets indexed by `T`,
/// `|T| = n - phi(n)`.
pub fn subcomplex_kt(n: u64, t: &BTreeSet<u64>) -> Result<SimplicialComplex> {
    let want = n - euler_phi(n);
    if t.len() as u64 != want {
        return Err(Error::InvalidArgument(format!(
            "|T| = {} but n - phi(n) = {want}",
            t.len()
        )));
    }
    complex_from_residues(n, t.iter().copied(), true)
}

/// Two-point suspension: a new first part `{0 mod 2, 1 mod 2}` is coned onto
/// every maximal face.
pub fn suspension(x: &SimplicialComplex) -> Result<SimplicialComplex> {
    let mut parts = vec![2];
    parts.extend_from_slice(x.parts());
    let shift = |s: &OrientedSimplex| {
        OrientedSimplex(
            s.0.iter()
                .map(|v| Vertex { part: v.part + 1, residue: v.residue })
                .collect(),
        )
    };
    let mut facets = Vec::new();
    for f in x.maximal_faces() {
        let shifted = shift(&f);
        for apex in 0..2 {
            facets.push(shifted.with_vertex(Vertex { part: 0, residue: apex })?);
        }
    }
    SimplicialComplex::new(parts, facets, false)
}

/// Dihedral element `j -> sign * j + shift (mod n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DihedralElement {
    pub sign: i8,
    pub shift: u64,
}

impl DihedralElement {
    pub fn rotation(k: u64) -> Self {
        DihedralElement { sign: 1, shift: k }
    }

    pub fn reflection() -> Self {
        DihedralElement { sign: -1, shift: 0 }
    }

    /// `t = r^{phi(n)} s`, swapping `F_j` and `F_{phi(n) - j}`.
    pub fn coefficient_involution(n: u64) -> Self {
        DihedralElement { sign: -1, shift: euler_phi(n) % n }
    }

    pub fn apply(&self, n: u64, j: u64) -> u64 {
        let j = j % n;
        let base = if self.sign < 0 { (n - j) % n } else { j };
        (base + self.shift % n) % n
    }

    /// `self` after `other`.
    pub fn compose(&self, other: &DihedralElement, n: u64) -> Self {
        // self(other(j)) = s1 (s2 j + t2) + t1
        let sign = self.sign * other.sign;
        let t2 = other.shift % n;
        let moved = if self.sign < 0 { (n - t2) % n } else { t2 };
        DihedralElement { sign, shift: (moved + self.shift) % n }
    }
}

pub fn dihedral_image(n: u64, g: DihedralElement, facets: &BTreeSet<u64>) -> Result<BTreeSet<u64>> {
    squarefree_primes(n)?;
    Ok(facets.iter().map(|&j| g.apply(n, j)).collect())
}

/// A cycle `sum_l b_l [F_l]` keyed by facet residue.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleVector {
    pub coefficients: BTreeMap<u64, BigInt>,
}

impl CycleVector {
    pub fn get(&self, l: u64) -> BigInt {
        self.coefficients.get(&l).cloned().unwrap_or_default()
    }
}

/// Top boundary matrix of `K_{p_1,...,p_d}` with column `j` equal to
/// `boundary[F_j]`. Rows are the (d-2)-faces in lexicographic order.
pub fn residue_boundary_matrix(n: u64) -> Result<(Vec<OrientedSimplex>, IntMatrix)> {
    let primes = squarefree_primes(n)?;
    let d = primes.len();
    let rows = full_faces(&primes, d - 1);
    let cols = (0..n)
        .map(|j| facet_for_residue(&primes, j))
        .collect::<Result<Vec<_>>>()?;
    let m = boundary_between(&rows, &cols);
    Ok((rows, m))
}

/// Generators of `ker(boundary_{d-1})` of the complex spanned by the facets
/// `F_l` for the given residues, as cycles keyed by residue.
pub fn top_cycles(n: u64, residues: &BTreeSet<u64>) -> Result<Vec<CycleVector>> {
    let (_, full) = residue_boundary_matrix(n)?;
    let cols: Vec<usize> = residues.iter().map(|&l| l as usize).collect();
    let sub = full.select_columns(&cols);
    Ok(exactlinalg::kernel_primitive_basis(&sub)
        .into_iter()
        .map(|v| CycleVector {
            coefficients: residues
                .iter()
                .zip(v)
                .filter(|(_, b)| !b.is_zero())
                .map(|(&l, b)| (l, b))
                .collect(),
        })
        .collect())
}
