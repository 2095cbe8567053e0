//! Checks of the homology/coefficient correspondences on concrete `n`,
//! producing reports with witnesses for every sub-case.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::complex::{
    a_zero, dihedral_image, suspension, subcomplex_ka, subcomplex_kt, top_cycles, residue_boundary_matrix,
    DihedralElement, HomologyProfile,
};
use crate::duality::{dual_pair, plucker_check};
use crate::error::{Error, Result};
use crate::exactlinalg::{self, HomologySummary, IntMatrix, IntegerSolver};
use crate::numtheory::{euler_phi, primitive_residues, squarefree_primes, squarefree_up_to};
use crate::polynomial::{cyclotomic, lattice_coefficient, primitive_basis_determinant, root_coordinate_matrix, IntPoly};

pub(crate) fn ser_bigint<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

pub(crate) fn ser_bigint_vec<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

pub(crate) fn ser_ratio<S: Serializer>(v: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn strs(v: &[BigInt]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CheckId {
    Main,
    Signs,
    KT,
    Attaching,
    Coboundary,
    Symmetry,
    Migotti,
    Tree,
    Basis,
}

impl CheckId {
    pub const ALL: [CheckId; 9] = [
        CheckId::Main,
        CheckId::Signs,
        CheckId::KT,
        CheckId::Attaching,
        CheckId::Coboundary,
        CheckId::Symmetry,
        CheckId::Migotti,
        CheckId::Tree,
        CheckId::Basis,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckId::Main => "main",
            CheckId::Signs => "signs",
            CheckId::KT => "kT",
            CheckId::Attaching => "attaching",
            CheckId::Coboundary => "coboundary",
            CheckId::Symmetry => "symmetry",
            CheckId::Migotti => "migotti",
            CheckId::Tree => "tree",
            CheckId::Basis => "basis",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CheckId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check '{s}'")))
    }
}

impl Serialize for CheckId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::NotApplicable => "not_applicable",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Case {
    pub id: String,
    pub status: Status,
    pub witness: Value,
}

impl Case {
    fn new(id: impl Into<String>, ok: bool, witness: Value) -> Self {
        Case { id: id.into(), status: if ok { Status::Pass } else { Status::Fail }, witness }
    }

    fn not_applicable(id: impl Into<String>, reason: &str) -> Self {
        Case { id: id.into(), status: Status::NotApplicable, witness: json!({ "reason": reason }) }
    }

    fn from_result(id: impl Into<String>, r: Result<(bool, Value)>) -> Self {
        match r {
            Ok((ok, w)) => Case::new(id, ok, w),
            Err(e) => Case::new(id, false, json!({ "error": e.to_string() })),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub n: u64,
    pub check_id: CheckId,
    pub cases: Vec<Case>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    /// Pass when no sub-case failed.
    pub fn status(&self) -> Status {
        if self.cases.iter().any(|c| c.status == Status::Fail) {
            Status::Fail
        } else if !self.cases.is_empty() && self.cases.iter().all(|c| c.status == Status::NotApplicable) {
            Status::NotApplicable
        } else {
            Status::Pass
        }
    }

    pub fn passed(&self) -> bool {
        self.status() != Status::Fail
    }

    pub fn failures(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| c.status == Status::Fail)
    }

    pub fn case(&self, id: &str) -> Option<&Case> {
        self.cases.iter().find(|c| c.id == id)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyOptions {
    /// Seed for the random `T` families.
    pub seed: u64,
    /// Run sub-cases on the current rayon pool.
    pub parallel: bool,
    /// Record wall-clock time; off keeps reports byte-reproducible.
    pub timing: bool,
    /// Number of random `T` per `n` in the `kT` and `tree` checks.
    pub random_t: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 0, parallel: false, timing: false, random_t: 20 }
    }
}

fn map_cases<T: Sync>(opts: &VerifyOptions, items: &[T], f: impl Fn(&T) -> Case + Sync + Send) -> Vec<Case> {
    if opts.parallel {
        items.par_iter().map(f).collect()
    } else {
        items.iter().map(f).collect()
    }
}

fn finish(n: u64, check_id: CheckId, cases: Vec<Case>, start: Instant, opts: &VerifyOptions) -> VerificationReport {
    let elapsed_ms = if opts.timing { start.elapsed().as_millis() as u64 } else { 0 };
    VerificationReport { n, check_id, cases, elapsed_ms }
}

fn profile_json(p: &HomologyProfile) -> Value {
    let map: serde_json::Map<String, Value> = p
        .groups
        .iter()
        .enumerate()
        .map(|(k, g)| ((k as isize - 1).to_string(), Value::String(g.to_string())))
        .collect();
    Value::Object(map)
}

fn num_parts(n: u64) -> Result<isize> {
    Ok(squarefree_primes(n)?.len() as isize)
}

/// Expected profile in degrees `-1..=d-1` for `K_{{j}}` given `c_j`.
fn expected_single(d: isize, c: &BigInt) -> Vec<HomologySummary> {
    (-1..d)
        .map(|i| {
            if i == d - 2 {
                HomologySummary::cyclic(c)
            } else if i == d - 1 && c.is_zero() {
                HomologySummary::cyclic(&BigInt::zero())
            } else {
                HomologySummary::trivial()
            }
        })
        .collect()
}

fn profile_matches(p: &HomologyProfile, expected: &[HomologySummary]) -> bool {
    let top = expected.len() as isize - 2;
    (-1..=top).all(|i| p.degree(i) == expected[(i + 1) as usize])
        && p.groups.len() <= expected.len()
}

/// `K_{{j}}` has `H_{d-2} = Z/c_j` and `H_{d-1} = Z` exactly when `c_j = 0`,
/// and nothing else; the cokernel of the companion lattice must agree.
pub fn verify_main(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let js: Vec<u64> = (0..=euler_phi(n)).collect();
    verify_main_at(n, &js, opts)
}

/// `verify_main` restricted to the given `j`.
pub fn verify_main_at(n: u64, js: &[u64], opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = num_parts(n)?;
    let phi_n = cyclotomic(n)?;
    if let Some(&bad) = js.iter().find(|&&j| j > euler_phi(n)) {
        return Err(Error::InvalidArgument(format!("j = {bad} exceeds phi({n})")));
    }
    let cases = map_cases(opts, js, |&j| {
        Case::from_result(format!("j={j}"), (|| {
            let c = phi_n.coeff(j as usize);
            let h = subcomplex_ka(n, &BTreeSet::from([j]))?.homology_profile();
            let lattice = lattice_coefficient(&phi_n, j as usize)?;
            let groups_ok = profile_matches(&h, &expected_single(d, &c));
            let lattice_ok = HomologySummary::cyclic(&lattice) == h.degree(d - 2);
            let low = h.degree(d - 2);
            Ok((
                groups_ok && lattice_ok,
                json!({
                    "j": j,
                    "c_j": c.to_string(),
                    "homology": profile_json(&h),
                    "free_rank": low.free_rank,
                    "torsion": strs(&low.torsion),
                    "top_free_rank": h.degree(d - 1).free_rank,
                    "lattice_order": lattice.to_string(),
                }),
            ))
        })())
    });
    Ok(finish(n, CheckId::Main, cases, start, opts))
}

/// Primitive generator of the top homology of `K_{{j, j'}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCycle {
    pub top: HomologySummary,
    pub b_j: BigInt,
    pub b_j_prime: BigInt,
}

pub fn pair_cycle(n: u64, j: u64, j_prime: u64) -> Result<PairCycle> {
    let pair = BTreeSet::from([j, j_prime]);
    let k = subcomplex_ka(n, &pair)?;
    let d = k.num_parts() as isize;
    let top = k.reduced_homology(d - 1);
    let residues: BTreeSet<u64> = pair.iter().copied().chain(a_zero(n)).collect();
    let cycles = top_cycles(n, &residues)?;
    if cycles.len() != 1 {
        return Err(Error::Consistency(format!(
            "K_{{{j},{j_prime}}} has {} independent top cycles",
            cycles.len()
        )));
    }
    Ok(PairCycle { top, b_j: cycles[0].get(j), b_j_prime: cycles[0].get(j_prime) })
}

fn sign_of(x: &BigInt) -> BigInt {
    x.signum()
}

/// Rebuilds `Phi_n` from homology only: `|c_j|` from the torsion of
/// `K_{{j}}`, zeros from its free part, signs from the top cycle of
/// `K_{{j, phi}}` anchored at `c_phi = +1`.
pub fn reconstruct_from_homology(n: u64) -> Result<IntPoly> {
    let phi = euler_phi(n);
    let d = num_parts(n)?;
    let mut coeffs = Vec::with_capacity(phi as usize + 1);
    for j in 0..=phi {
        let low = subcomplex_ka(n, &BTreeSet::from([j]))?.reduced_homology(d - 2);
        let magnitude = if low.free_rank > 0 { BigInt::zero() } else { low.torsion_order() };
        if j == phi || magnitude.is_zero() {
            coeffs.push(magnitude);
            continue;
        }
        let z = pair_cycle(n, j, phi)?;
        if z.b_j.is_zero() || z.b_j_prime.is_zero() {
            return Err(Error::Consistency(format!("cycle of K_{{{j},{phi}}} misses a facet")));
        }
        // c_j / c_phi = -b_phi / b_j with c_phi = 1.
        coeffs.push(-sign_of(&z.b_j_prime) * sign_of(&z.b_j) * magnitude);
    }
    Ok(IntPoly::new(coeffs))
}

/// Orientation identity `c_j b_j = -c_j' b_j'` on the cycle of `K_{{j,j'}}`
/// for each pair, plus full reconstruction of `Phi_n`.
pub fn verify_signs(n: u64, pairs: Option<&[(u64, u64)]>, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let phi = euler_phi(n);
    let f = cyclotomic(n)?;
    let pairs: Vec<(u64, u64)> = match pairs {
        Some(p) => {
            for &(j, jp) in p {
                if j > phi || jp > phi || j == jp {
                    return Err(Error::InvalidArgument(format!("bad pair ({j}, {jp})")));
                }
                if f.coeff(j as usize).is_zero() || f.coeff(jp as usize).is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "pair ({j}, {jp}) involves a zero coefficient"
                    )));
                }
            }
            p.to_vec()
        }
        None => (0..phi).filter(|&j| !f.coeff(j as usize).is_zero()).map(|j| (j, phi)).collect(),
    };
    let mut cases = map_cases(opts, &pairs, |&(j, jp)| {
        Case::from_result(format!("pair={j},{jp}"), (|| {
            let z = pair_cycle(n, j, jp)?;
            let (cj, cjp) = (f.coeff(j as usize), f.coeff(jp as usize));
            let top_ok = z.top == HomologySummary::cyclic(&BigInt::zero());
            let nonzero = !z.b_j.is_zero() && !z.b_j_prime.is_zero();
            let identity = &cj * &z.b_j == -(&cjp * &z.b_j_prime);
            let same_direction = nonzero && sign_of(&z.b_j) == sign_of(&z.b_j_prime);
            Ok((
                top_ok && nonzero && identity,
                json!({
                    "j": j,
                    "j_prime": jp,
                    "top_homology": z.top.to_string(),
                    "b_j": z.b_j.to_string(),
                    "b_j_prime": z.b_j_prime.to_string(),
                    "same_direction": same_direction,
                    "c_j": cj.to_string(),
                    "c_j_prime": cjp.to_string(),
                }),
            ))
        })())
    });
    cases.push(Case::from_result("reconstruction", (|| {
        let rebuilt = reconstruct_from_homology(n)?;
        Ok((
            rebuilt == *f,
            json!({ "rebuilt": rebuilt.to_decimal_strings(), "expected": f.to_decimal_strings() }),
        ))
    })()));
    Ok(finish(n, CheckId::Signs, cases, start, opts))
}

/// `count` uniformly random `(n - phi(n))`-subsets of residues mod n.
pub fn random_t_sets(n: u64, count: usize, seed: u64) -> Vec<BTreeSet<u64>> {
    let size = (n - euler_phi(n)) as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n.rotate_left(32));
    (0..count)
        .map(|_| {
            rand::seq::index::sample(&mut rng, n as usize, size)
                .into_iter()
                .map(|x| x as u64)
                .collect()
        })
        .collect()
}

/// `P_n^c`, every `A_0 ∪ {j}`, then `random` seeded subsets.
pub fn default_t_family(n: u64, random: usize, seed: u64) -> Vec<(String, BTreeSet<u64>)> {
    let prim: BTreeSet<u64> = primitive_residues(n).into_iter().collect();
    let mut out = vec![("nonprimitive".to_string(), (0..n).filter(|x| !prim.contains(x)).collect())];
    for j in 0..=euler_phi(n) {
        let mut t: BTreeSet<u64> = a_zero(n).into_iter().collect();
        t.insert(j);
        out.push((format!("A0+{j}"), t));
    }
    for (i, t) in random_t_sets(n, random, seed).into_iter().enumerate() {
        out.push((format!("random{i}"), t));
    }
    out
}

fn fmt_set(t: &BTreeSet<u64>) -> Vec<u64> {
    t.iter().copied().collect()
}

/// `H_{d-2}(K[T]) = coker M|_{T^c}`, `H_{d-1}(K[T])` free of rank equal
/// to the corank of `M|_{T^c}`, all else zero.
pub fn verify_kt(n: u64, ts: &[(String, BTreeSet<u64>)], opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = num_parts(n)?;
    let phi = euler_phi(n) as usize;
    let m = root_coordinate_matrix(n)?;
    for (_, t) in ts {
        if t.len() != n as usize - phi || t.iter().any(|&x| x >= n) {
            return Err(Error::InvalidArgument(format!("T must be an {}-subset mod {n}", n as usize - phi)));
        }
    }
    let cases = map_cases(opts, ts, |(id, t)| {
        Case::from_result(id.clone(), (|| {
            let h = subcomplex_kt(n, t)?.homology_profile();
            let tc: Vec<usize> = (0..n).filter(|x| !t.contains(x)).map(|x| x as usize).collect();
            let restricted = m.restrict(&tc);
            let coker = exactlinalg::cokernel_invariants(&restricted);
            let rank = exactlinalg::rank(&restricted);
            let top = HomologySummary { free_rank: phi - rank, torsion: vec![] };
            let others_zero = (-1..d).filter(|&i| i != d - 2 && i != d - 1).all(|i| h.degree(i).is_trivial());
            let ok = h.degree(d - 2) == coker && h.degree(d - 1) == top && others_zero;
            Ok((
                ok,
                json!({
                    "T": fmt_set(t),
                    "homology": profile_json(&h),
                    "lattice_cokernel": coker.to_string(),
                    "rank_m": rank,
                }),
            ))
        })())
    });
    Ok(finish(n, CheckId::KT, cases, start, opts))
}

/// Columns of the top boundary of the complete complex, as cycles.
fn boundary_cycles(n: u64) -> Result<IntMatrix> {
    Ok(residue_boundary_matrix(n)?.1)
}

fn coboundary_case(n: u64, boundary: &IntMatrix, f: &IntPoly) -> Case {
    Case::from_result("coboundary", (|| {
        let phi = euler_phi(n) as usize;
        let b: Vec<BigInt> = (0..n as usize)
            .map(|j| if j <= phi { f.coeff(j) } else { BigInt::zero() })
            .collect();
        let y = exactlinalg::solve_integer(&boundary.transpose(), &b)?;
        Ok((
            y.is_some(),
            json!({ "cochain": strs(&b), "preimage": y.map(|v| strs(&v)) }),
        ))
    })())
}

/// The cycles `z_l = ∂F_l` (`phi <= l < n`) form a basis of the cycle
/// lattice of `K_∅`'s codimension-one skeleton; expanding `z_j` in it puts
/// `c_j` on `z_phi`; the cochain `(c_0, ..., c_phi, 0, ...)` is an integral
/// coboundary.
pub fn verify_attaching(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = num_parts(n)?;
    if d < 2 {
        let cases = vec![Case::not_applicable("attaching", "n is prime")];
        return Ok(finish(n, CheckId::Attaching, cases, start, opts));
    }
    let phi = euler_phi(n) as usize;
    let f = cyclotomic(n)?;
    let boundary = boundary_cycles(n)?;
    let k_empty = subcomplex_ka(n, &BTreeSet::new())?;
    let lower = k_empty.boundary_matrix(d - 2);
    let mut cases = Vec::new();

    let basis_cols: Vec<usize> = (phi..n as usize).collect();
    let z = boundary.select_columns(&basis_cols);
    cases.push(Case::from_result("basis", (|| {
        let h = k_empty.reduced_homology(d - 2);
        let kernel_rank = lower.cols() - exactlinalg::rank(&lower);
        let snf = exactlinalg::smith_normal_form(&z, false);
        let saturated = snf.diagonal.iter().all(|x| x.is_one());
        let cycles = lower.mul(&z)?.is_zero();
        let ok = h == HomologySummary::cyclic(&BigInt::zero())
            && snf.rank == basis_cols.len()
            && kernel_rank == basis_cols.len()
            && saturated
            && cycles;
        Ok((
            ok,
            json!({
                "homology": h.to_string(),
                "cycle_rank": kernel_rank,
                "basis_size": basis_cols.len(),
                "saturated": saturated,
            }),
        ))
    })()));

    let solver = IntegerSolver::new(&z);
    let js: Vec<usize> = (0..=phi).collect();
    cases.extend(map_cases(opts, &js, |&j| {
        Case::from_result(format!("j={j}"), (|| {
            let x = solver
                .solve(&boundary.column(j))?
                .ok_or_else(|| Error::Consistency(format!("z_{j} is not an integer combination")))?;
            let c = f.coeff(j);
            Ok((x[0] == c, json!({ "j": j, "coefficient": x[0].to_string(), "c_j": c.to_string() })))
        })())
    }));
    cases.push(coboundary_case(n, &boundary, &f));
    Ok(finish(n, CheckId::Attaching, cases, start, opts))
}

pub fn verify_coboundary(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let f = cyclotomic(n)?;
    let boundary = boundary_cycles(n)?;
    let cases = vec![coboundary_case(n, &boundary, &f)];
    Ok(finish(n, CheckId::Coboundary, cases, start, opts))
}

fn migotti_case(d: isize, f: &IntPoly) -> Case {
    if d != 2 {
        return Case::not_applicable("migotti", "n does not have exactly two prime factors");
    }
    let ok = f.coeffs().iter().all(|c| c.abs() <= BigInt::one());
    Case::new("migotti", ok, json!({ "coefficients": f.to_decimal_strings() }))
}

pub fn verify_migotti(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = num_parts(n)?;
    let cases = vec![migotti_case(d, &*cyclotomic(n)?)];
    Ok(finish(n, CheckId::Migotti, cases, start, opts))
}

/// Coefficient bounds for two primes, the dihedral involution
/// `j -> phi - j` with palindromy, and for odd `n` the substitution
/// `x -> -x` together with the suspension into `K_{{j}}` for `2n`.
pub fn verify_symmetries(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    let d = num_parts(n)?;
    let phi = euler_phi(n);
    let f = cyclotomic(n)?;
    let mut cases = vec![migotti_case(d, &f)];
    let palindrome = (0..=phi as usize).all(|j| f.coeff(j) == f.coeff(phi as usize - j));
    cases.push(Case::new("palindromy", palindrome, json!({ "coefficients": f.to_decimal_strings() })));

    let t = DihedralElement::coefficient_involution(n);
    let js: Vec<u64> = (0..=phi).collect();
    cases.extend(map_cases(opts, &js, |&j| {
        Case::from_result(format!("dihedral j={j}"), (|| {
            let src = subcomplex_ka(n, &BTreeSet::from([j]))?.facet_residues()?;
            let dst = subcomplex_ka(n, &BTreeSet::from([phi - j]))?.facet_residues()?;
            let image = dihedral_image(n, t, &src)?;
            Ok((image == dst, json!({ "j": j, "image_of": j, "target": phi - j })))
        })())
    }));

    if n.is_multiple_of(2) {
        cases.push(Case::not_applicable("negation", "n is even"));
        return Ok(finish(n, CheckId::Symmetry, cases, start, opts));
    }
    let g = cyclotomic(2 * n)?;
    let negated = f.negate_variable();
    cases.push(Case::new(
        "negation",
        *g == negated,
        json!({ "phi_2n": g.to_decimal_strings(), "phi_n_of_minus_x": negated.to_decimal_strings() }),
    ));
    cases.extend(map_cases(opts, &js, |&j| {
        Case::from_result(format!("suspension j={j}"), (|| {
            let k = subcomplex_ka(n, &BTreeSet::from([j]))?;
            let k_hat = subcomplex_ka(2 * n, &BTreeSet::from([j]))?;
            let sk = suspension(&k)?;
            let contained = sk.facets().is_subset(k_hat.facets());
            let h = k.homology_profile();
            let h_hat = k_hat.homology_profile();
            let h_susp = sk.homology_profile();
            let torsion_ok = h_hat.degree(d - 1).torsion == h.degree(d - 2).torsion;
            let retract_ok = (-1..=d).all(|i| h_susp.degree(i) == h_hat.degree(i));
            let sign = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            let coeff_ok = g.coeff(j as usize) == sign * f.coeff(j as usize);
            Ok((
                contained && torsion_ok && retract_ok && coeff_ok,
                json!({
                    "j": j,
                    "contained": contained,
                    "torsion": strs(&h_hat.degree(d - 1).torsion),
                    "homology_2n": profile_json(&h_hat),
                    "c_hat_j": g.coeff(j as usize).to_string(),
                }),
            ))
        })())
    }));
    Ok(finish(n, CheckId::Symmetry, cases, start, opts))
}

/// Certified spanning tree, dual pair and minor identities on random `T`.
pub fn verify_tree(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    squarefree_primes(n)?;
    let pair = dual_pair(n)?;
    let cert = pair.tree.certify()?;
    let mut cases = vec![Case::new(
        "tree",
        cert.holds(),
        json!({
            "faces": pair.tree.s.len(),
            "tree_size": pair.tree.r.len(),
            "seed": pair.tree.seed,
            "certificate": cert,
        }),
    )];
    let ts = random_t_sets(n, opts.random_t, opts.seed);
    let items: Vec<(usize, BTreeSet<u64>)> = ts.into_iter().enumerate().collect();
    cases.extend(map_cases(opts, &items, |(i, t)| {
        Case::from_result(format!("plucker{i}"), (|| {
            let rec = plucker_check(&pair, t)?;
            Ok((rec.holds(), json!({ "T": fmt_set(t), "record": rec })))
        })())
    }));
    Ok(finish(n, CheckId::Tree, cases, start, opts))
}

/// Primitive roots form a basis and `K[P_n^c]` is acyclic.
pub fn verify_basis(n: u64, opts: &VerifyOptions) -> Result<VerificationReport> {
    let start = Instant::now();
    squarefree_primes(n)?;
    let det = primitive_basis_determinant(n)?;
    let mut cases = vec![Case::new("determinant", det.abs().is_one(), json!({ "det": det.to_string() }))];
    let prim: BTreeSet<u64> = primitive_residues(n).into_iter().collect();
    let nonprim: BTreeSet<u64> = (0..n).filter(|x| !prim.contains(x)).collect();
    cases.push(Case::from_result("acyclic", (|| {
        let h = subcomplex_kt(n, &nonprim)?.homology_profile();
        Ok((h.support().is_empty(), json!({ "homology": profile_json(&h) })))
    })()));
    Ok(finish(n, CheckId::Basis, cases, start, opts))
}

/// Runs one check with its default parameters; errors become a failed case.
pub fn run_check(n: u64, check: CheckId, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let r = match check {
        CheckId::Main => verify_main(n, opts),
        CheckId::Signs => verify_signs(n, None, opts),
        CheckId::KT => verify_kt(n, &default_t_family(n, opts.random_t, opts.seed), opts),
        CheckId::Attaching => verify_attaching(n, opts),
        CheckId::Coboundary => verify_coboundary(n, opts),
        CheckId::Symmetry => verify_symmetries(n, opts),
        CheckId::Migotti => verify_migotti(n, opts),
        CheckId::Tree => verify_tree(n, opts),
        CheckId::Basis => verify_basis(n, opts),
    };
    r.unwrap_or_else(|e| {
        let cases = vec![Case::new("error", false, json!({ "error": e.to_string() }))];
        finish(n, check, cases, start, opts)
    })
}

/// Selected checks over every squarefree `n` in `2..=max_n`, optionally only
/// those with `d` prime factors. Ordered by `n`, then by `checks`.
pub fn sweep(max_n: u64, checks: &[CheckId], d: Option<usize>, opts: &VerifyOptions) -> Vec<VerificationReport> {
    let items: Vec<(u64, CheckId)> = squarefree_up_to(max_n)
        .filter(|&n| d.is_none_or(|d| squarefree_primes(n).map(|p| p.len() == d).unwrap_or(false)))
        .flat_map(|n| checks.iter().map(move |&c| (n, c)))
        .collect();
    // Sub-cases stay sequential inside each report; parallelism is across
    // reports here.
    let inner = VerifyOptions { parallel: false, ..opts.clone() };
    if opts.parallel {
        items.par_iter().map(|&(n, c)| run_check(n, c, &inner)).collect()
    } else {
        items.iter().map(|&(n, c)| run_check(n, c, &inner)).collect()
    }
}

pub fn reports_to_json(reports: &[VerificationReport]) -> String {
    serde_json::to_string_pretty(reports).expect("reports serialize")
}

pub fn reports_to_csv(reports: &[VerificationReport]) -> String {
    let mut out = String::from("n,check_id,status,cases,failed,elapsed_ms\n");
    for r in reports {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.n,
            r.check_id,
            r.status(),
            r.cases.len(),
            r.failures().count(),
            r.elapsed_ms
        ));
    }
    out
}

pub fn reports_to_text(reports: &[VerificationReport]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!("n={} {}: {} ({} cases)\n", r.n, r.check_id, r.status(), r.cases.len()));
        for c in r.failures() {
            out.push_str(&format!("  FAIL {}: {}\n", c.id, c.witness));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> VerifyOptions {
        VerifyOptions::default()
    }

    #[test]
    fn main_n15() {
        let r = verify_main(15, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases.len(), 9);
        let w = &r.case("j=6").unwrap().witness;
        assert_eq!((w["free_rank"].as_u64(), w["top_free_rank"].as_u64()), (Some(1), Some(1)));
        assert_eq!(r.case("j=5").unwrap().witness["homology"]["0"], "0");
        assert_eq!(r.case("j=7").unwrap().witness["homology"]["0"], "0");
    }

    #[test]
    fn main_prime() {
        let r = verify_main(7, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.cases.len(), 7);
        assert!(verify_main(12, &opts()).is_err());
    }

    #[test]
    fn main_105_j7() {
        let r = verify_main(105, &opts()).unwrap();
        assert!(r.passed());
        assert_eq!(r.case("j=7").unwrap().witness["torsion"], json!(["2"]));
    }

    #[test]
    fn signs_n15() {
        let r = verify_signs(15, Some(&[(7, 8), (5, 8)]), &opts()).unwrap();
        assert!(r.passed(), "{}", reports_to_text(std::slice::from_ref(&r)));
        assert_eq!(r.case("pair=7,8").unwrap().witness["same_direction"], true);
        assert_eq!(r.case("pair=5,8").unwrap().witness["same_direction"], false);
        assert!(verify_signs(15, Some(&[(6, 8)]), &opts()).is_err());
        assert!(verify_signs(15, None, &opts()).unwrap().passed());
    }

    #[test]
    fn reconstruct_105() {
        let f = reconstruct_from_homology(105).unwrap();
        assert_eq!(f.coeff(7), BigInt::from(-2));
        assert_eq!(f, *cyclotomic(105).unwrap());
    }

    #[test]
    fn kt_n15() {
        let fam = default_t_family(15, 100, 7);
        let r = verify_kt(15, &fam, &opts()).unwrap();
        assert!(r.passed(), "{}", reports_to_text(std::slice::from_ref(&r)));
        assert_eq!(r.cases.len(), 1 + 9 + 100);
        assert!(verify_kt(15, &[("x".into(), BTreeSet::from([1]))], &opts()).is_err());
    }

    #[test]
    fn attaching_n15() {
        let r = verify_attaching(15, &opts()).unwrap();
        assert!(r.passed(), "{}", reports_to_text(std::slice::from_ref(&r)));
        assert_eq!(r.case("j=6").unwrap().witness["coefficient"], "0");
        assert_eq!(r.case("j=8").unwrap().witness["coefficient"], "1");
        assert_eq!(r.case("coboundary").unwrap().status, Status::Pass);
        let r = verify_attaching(13, &opts()).unwrap();
        assert_eq!(r.status(), Status::NotApplicable);
    }

    #[test]
    fn symmetry_n15() {
        let r = verify_symmetries(15, &opts()).unwrap();
        assert!(r.passed(), "{}", reports_to_text(std::slice::from_ref(&r)));
        assert_eq!(r.case("migotti").unwrap().status, Status::Pass);
        assert_eq!(r.case("suspension j=3").unwrap().status, Status::Pass);
    }

    #[test]
    fn tree_and_basis() {
        assert!(verify_tree(15, &opts()).unwrap().passed());
        assert!(verify_basis(15, &opts()).unwrap().passed());
        assert!(verify_basis(2, &opts()).unwrap().passed());
    }

    #[test]
    fn sweep_small() {
        assert!(sweep(1, &[CheckId::Main], None, &opts()).is_empty());
        let reps = sweep(35, &[CheckId::Main], None, &opts());
        assert!(reps.iter().all(|r| r.passed()));
        let reps = sweep(35, &[CheckId::Main], Some(2), &opts());
        assert_eq!(reps.iter().map(|r| r.n).collect::<Vec<_>>(), vec![6, 10, 14, 15, 21, 22, 26, 33, 34, 35]);
        let par = sweep(35, &[CheckId::Main], Some(2), &VerifyOptions { parallel: true, ..opts() });
        assert_eq!(reports_to_json(&reps), reports_to_json(&par));
    }

    #[test]
    fn check_names_round_trip() {
        for c in CheckId::ALL {
            assert_eq!(c.name().parse::<CheckId>().unwrap(), c);
        }
        assert!("bogus".parse::<CheckId>().is_err());
    }
}
