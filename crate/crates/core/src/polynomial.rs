//! Dense integer polynomials, the cyclotomic engine, the root-of-unity
//! coordinate matrix and the lattice-quotient reading of coefficients.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlinalg::{self, IntMatrix};
use crate::numtheory::{euler_phi, factorize, primitive_residues};

/// Dense polynomial over Z, constant term first. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); n + 1];
        coeffs[0] = BigInt::from(-1);
        coeffs[n] += 1;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^j` (zero past the degree).
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        IntPoly::new(out)
    }

    /// Quotient and remainder over Z. Requires the divisor's leading
    /// coefficient to divide every leading term met during the division.
    pub fn div_rem(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly)> {
        let dl = divisor
            .leading()
            .ok_or_else(|| Error::InvalidArgument("division by zero polynomial".into()))?;
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let lead = &rem[k + dd];
            if lead.is_zero() {
                continue;
            }
            let (q, r) = lead.div_rem(dl);
            if !r.is_zero() {
                return Err(Error::InexactDivision);
            }
            for (i, c) in divisor.coeffs.iter().enumerate() {
                if !c.is_zero() {
                    rem[k + i] -= &q * c;
                }
            }
            quot[k] = q;
        }
        Ok((IntPoly::new(quot), IntPoly::new(rem)))
    }

    /// `f / g` when the division is exact over Z.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly> {
        let (q, r) = self.div_rem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InexactDivision);
        }
        Ok(q)
    }

    /// `f(x^k)`.
    pub fn substitute_power(&self, k: usize) -> IntPoly {
        assert!(k >= 1);
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); (self.coeffs.len() - 1) * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        IntPoly::new(out)
    }

    /// `f(-x)`.
    pub fn negate_variable(&self) -> IntPoly {
        IntPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() })
                .collect(),
        )
    }

    /// Coefficients as decimal strings, constant term first.
    pub fn to_decimal_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl fmt::Display for IntPoly {
    /// Whitespace-separated coefficients, constant term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let s: Vec<String> = self.to_decimal_strings();
        write!(f, "{}", s.join(" "))
    }
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_decimal_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        let coeffs = strs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(IntPoly::new(coeffs))
    }
}

fn memo() -> &'static RwLock<HashMap<u64, Arc<IntPoly>>> {
    static MEMO: OnceLock<RwLock<HashMap<u64, Arc<IntPoly>>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// The cyclotomic polynomial `Phi_n`, by exact division of `x^n - 1` by
/// `Phi_d` for every proper divisor `d`. Results are memoized process-wide.
pub fn cyclotomic(n: u64) -> Result<Arc<IntPoly>> {
    if n == 0 {
        return Err(Error::InvalidArgument("cyclotomic polynomial needs n >= 1".into()));
    }
    if let Some(p) = memo().read().expect("memo lock").get(&n) {
        return Ok(p.clone());
    }
    let mut acc = IntPoly::x_pow_minus_one(n as usize);
    for d in divisors(n) {
        if d == n {
            continue;
        }
        acc = acc.exact_div(&*cyclotomic(d)?)?;
    }
    debug_assert_eq!(acc.degree(), Some(euler_phi(n) as usize));
    let p = Arc::new(acc);
    // A racing writer computed the same value; keep whichever landed first.
    let mut w = memo().write().expect("memo lock");
    Ok(w.entry(n).or_insert(p).clone())
}

/// `Phi_n(x) = Phi_{rad(n)}(x^{n / rad(n)})`.
pub fn radical_substitute(n: u64) -> Result<IntPoly> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let rad = factorize(n)?.radical();
    Ok(cyclotomic(rad)?.substitute_power((n / rad) as usize))
}

/// The `phi(n) x n` matrix whose column `j` holds `zeta^j` in the power basis
/// `1, zeta, ..., zeta^{phi(n)-1}` of `Z[zeta]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootCoordinateMatrix {
    pub n: u64,
    pub matrix: IntMatrix,
}

impl RootCoordinateMatrix {
    pub fn column(&self, j: usize) -> Vec<BigInt> {
        self.matrix.column(j)
    }

    /// Restriction to a set of columns, in the order given.
    pub fn restrict(&self, cols: &[usize]) -> IntMatrix {
        self.matrix.select_columns(cols)
    }
}

pub fn root_coordinate_matrix(n: u64) -> Result<RootCoordinateMatrix> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let phi = cyclotomic(n)?;
    let r = euler_phi(n) as usize;
    let n_us = n as usize;
    let mut m = IntMatrix::zeros(r, n_us);
    // x^j mod Phi_n, updated by multiplication by x.
    let mut cur = vec![BigInt::zero(); r];
    cur[0] = BigInt::one();
    for j in 0..n_us {
        for (i, c) in cur.iter().enumerate() {
            m.set(i, j, c.clone());
        }
        let top = cur[r - 1].clone();
        let mut next = vec![BigInt::zero(); r];
        next[1..r].clone_from_slice(&cur[..(r - 1)]);
        if !top.is_zero() {
            for (i, nx) in next.iter_mut().enumerate() {
                *nx -= &top * phi.coeff(i);
            }
        }
        cur = next;
    }
    Ok(RootCoordinateMatrix { n, matrix: m })
}

/// Order of `Z^r / Z A` where `A` is `{1, x, ..., x^r} \ {x^j}` written in the
/// basis of `Z[x]/(f)`; zero when the quotient is infinite. Equals `|c_j|`.
pub fn lattice_coefficient(f: &IntPoly, j: usize) -> Result<BigInt> {
    if !f.is_monic() {
        return Err(Error::NotMonic);
    }
    let r = f.degree().unwrap_or(0);
    if j > r {
        return Err(Error::InvalidArgument(format!("j = {j} exceeds degree {r}")));
    }
    // [ I | -c ]
    let mut full = IntMatrix::zeros(r, r + 1);
    for i in 0..r {
        full.set(i, i, BigInt::one());
        full.set(i, r, -f.coeff(i));
    }
    let cols: Vec<usize> = (0..=r).filter(|&c| c != j).collect();
    let coker = exactlinalg::cokernel_invariants(&full.select_columns(&cols));
    if coker.free_rank > 0 {
        return Ok(BigInt::zero());
    }
    Ok(coker.torsion.iter().fold(BigInt::one(), |acc, t| acc * t))
}

/// Determinant of the root-coordinate matrix restricted to the primitive
/// residues. Magnitude one exactly when the primitive roots form a Z-basis.
pub fn primitive_basis_determinant(n: u64) -> Result<BigInt> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    if !factorize(n)?.is_squarefree() {
        return Err(Error::NotSquarefree(n));
    }
    let m = root_coordinate_matrix(n)?;
    let cols: Vec<usize> = primitive_residues(n).into_iter().map(|c| c as usize).collect();
    let (_, det) = exactlinalg::rank_and_det(&m.restrict(&cols));
    det.ok_or_else(|| Error::Consistency("primitive minor is not square".into()))
}
