//! Exact integer linear algebra: Smith normal form, cokernels, rank and
//! determinant, primitive kernel bases and integer linear solves.

mod matrix;
mod snf;

pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SnfResult};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Free rank plus torsion invariant factors (> 1, divisibility chain) of a
/// finitely generated abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct HomologySummary {
    pub free_rank: usize,
    #[serde(with = "bigint_vec_str")]
    pub torsion: Vec<BigInt>,
}

impl HomologySummary {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion part.
    pub fn torsion_order(&self) -> BigInt {
        self.torsion.iter().fold(BigInt::one(), |acc, t| acc * t)
    }

    /// `Z / cZ`: trivial for `|c| = 1`, `Z` for `c = 0`.
    pub fn cyclic(c: &BigInt) -> Self {
        let c = c.abs();
        if c.is_zero() {
            HomologySummary { free_rank: 1, torsion: vec![] }
        } else if c.is_one() {
            Self::trivial()
        } else {
            HomologySummary { free_rank: 0, torsion: vec![c] }
        }
    }
}

impl std::fmt::Display for HomologySummary {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

pub(crate) mod bigint_vec_str {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        v.iter().map(|x| x.to_string()).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|s| s.parse().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// `Z^rows / im(A)`.
pub fn cokernel_invariants(a: &IntMatrix) -> HomologySummary {
    let snf = smith_normal_form(a, false);
    HomologySummary { free_rank: a.rows() - snf.rank, torsion: snf.torsion() }
}

/// Rank, and the determinant when `a` is square, by Bareiss elimination.
pub fn rank_and_det(a: &IntMatrix) -> (usize, Option<BigInt>) {
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<BigInt>> = (0..m).map(|i| a.row(i).to_vec()).collect();
    let mut prev = BigInt::one();
    let mut sign_flip = false;
    let mut rank = 0;
    for col in 0..n {
        if rank == m {
            break;
        }
        let Some(pr) = (rank..m).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        if pr != rank {
            w.swap(pr, rank);
            sign_flip = !sign_flip;
        }
        let (head, tail) = w.split_at_mut(rank + 1);
        let prow = &head[rank];
        let piv = &prow[col];
        for row in tail.iter_mut() {
            let f = row[col].clone();
            for j in (col + 1)..n {
                let x = &row[j] * piv - &f * &prow[j];
                row[j] = x / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = piv.clone();
        rank += 1;
    }
    let det = (m == n).then(|| {
        if rank < n {
            BigInt::zero()
        } else if n == 0 {
            BigInt::one()
        } else if sign_flip {
            -prev.clone()
        } else {
            prev.clone()
        }
    });
    (rank, det)
}

pub fn rank(a: &IntMatrix) -> usize {
    rank_and_det(a).0
}

/// Reduced row echelon form over Q; returns the pivot columns and rows.
fn rref(a: &IntMatrix) -> (Vec<usize>, Vec<Vec<BigRational>>) {
    let (m, n) = (a.rows(), a.cols());
    let mut w: Vec<Vec<BigRational>> = (0..m)
        .map(|i| a.row(i).iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let Some(pr) = (r..m).find(|&i| !w[i][col].is_zero()) else {
            continue;
        };
        w.swap(pr, r);
        let inv = w[r][col].recip();
        for x in w[r].iter_mut().skip(col) {
            *x *= &inv;
        }
        let prow = w[r].clone();
        for (i, row) in w.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for j in col..n {
                if !prow[j].is_zero() {
                    let d = &f * &prow[j];
                    row[j] -= d;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    w.truncate(r);
    (pivots, w)
}

/// Scales a rational vector to a primitive integer vector whose first
/// nonzero entry is positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect();
    normalize_primitive(ints)
}

/// Divides out the content and makes the first nonzero entry positive.
pub fn normalize_primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    let neg = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
    for x in v.iter_mut() {
        *x /= &g;
        if neg {
            *x = -&*x;
        }
    }
    v
}

/// Basis of `ker(A)` over Q, one primitive integer vector per free column,
/// each with its first nonzero entry positive.
pub fn kernel_primitive_basis(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let n = a.cols();
    let (pivots, r) = rref(a);
    let mut is_pivot = vec![None; n];
    for (i, &c) in pivots.iter().enumerate() {
        is_pivot[c] = Some(i);
    }
    (0..n)
        .filter(|&f| is_pivot[f].is_none())
        .map(|f| {
            let mut v = vec![BigRational::zero(); n];
            v[f] = BigRational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -r[i][f].clone();
            }
            primitive_integer_vector(&v)
        })
        .collect()
}

/// Solves `A y = b` over the integers for many right-hand sides, using one
/// Smith decomposition `U A V = D`.
#[derive(Debug, Clone)]
pub struct IntegerSolver {
    u: IntMatrix,
    v: IntMatrix,
    diagonal: Vec<BigInt>,
    rank: usize,
}

impl IntegerSolver {
    pub fn new(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a, true);
        let (u, v) = snf.transforms.expect("transforms requested");
        IntegerSolver { u, v, diagonal: snf.diagonal, rank: snf.rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// An integer solution, or `None` when none exists.
    pub fn solve(&self, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
        let ub = self.u.mul_vec(b)?;
        let mut w = vec![BigInt::zero(); self.v.rows()];
        for (i, x) in ub.iter().enumerate() {
            if i < self.rank {
                let (q, r) = x.div_rem(&self.diagonal[i]);
                if !r.is_zero() {
                    return Ok(None);
                }
                w[i] = q;
            } else if !x.is_zero() {
                return Ok(None);
            }
        }
        Ok(Some(self.v.mul_vec(&w)?))
    }
}

/// One-shot integer solve of `A y = b`.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "{} rows but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    IntegerSolver::new(a).solve(b)
}
