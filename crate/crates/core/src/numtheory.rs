//! Elementary number theory: trial-division factorization, Euler phi,
//! primitive residues and the CRT labeling of facets.

use num_integer::Integer;

use crate::error::{Error, Result};

/// Prime factorization `n = p_1^{e_1} ... p_d^{e_d}` with `p_1 < ... < p_d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Number of distinct prime factors.
    pub fn num_primes(&self) -> usize {
        self.factors.len()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.factors.iter().map(|&(p, _)| p).collect()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u64 {
        self.factors.iter().map(|&(p, _)| p).product()
    }
}

/// Residues `(j mod p_1, ..., j mod p_d)`, each normalized to `[0, p_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ResidueVector(pub Vec<u64>);

pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::InvalidArgument("cannot factor 0".into()));
    }
    let mut factors = Vec::new();
    let mut m = n;
    let mut p = 2u64;
    while p * p <= m {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m > 1 {
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

pub fn euler_phi(n: u64) -> u64 {
    let f = match factorize(n) {
        Ok(f) => f,
        Err(_) => return 0,
    };
    f.factors
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn is_squarefree(n: u64) -> bool {
    n >= 1 && factorize(n).map(|f| f.is_squarefree()).unwrap_or(false)
}

/// Distinct primes of a squarefree `n >= 2`.
pub fn squarefree_primes(n: u64) -> Result<Vec<u64>> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let f = factorize(n)?;
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(n));
    }
    Ok(f.primes())
}

/// Units of `Z/nZ` in ascending order. For `n = 1` the unit group is trivial
/// and is represented by the single residue 0.
pub fn primitive_residues(n: u64) -> Vec<u64> {
    if n == 1 {
        return vec![0];
    }
    (1..n).filter(|m| m.gcd(&n) == 1).collect()
}

fn check_moduli(primes: &[u64]) -> Result<()> {
    for (i, &p) in primes.iter().enumerate() {
        if p == 0 {
            return Err(Error::InvalidArgument("modulus 0".into()));
        }
        if primes[..i].contains(&p) {
            return Err(Error::RepeatedPrime(p));
        }
    }
    for (i, &p) in primes.iter().enumerate() {
        for &q in &primes[..i] {
            if p.gcd(&q) != 1 {
                return Err(Error::InvalidArgument(format!(
                    "moduli {q} and {p} are not coprime"
                )));
            }
        }
    }
    Ok(())
}

/// Direction of the CRT map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrtDirection {
    Split,
    Combine,
}

/// The CRT isomorphism `Z/p_1 x ... x Z/p_d -> Z/nZ` in either direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CrtValue {
    Residue(u64),
    Vector(ResidueVector),
}

pub fn crt_bijection(direction: CrtDirection, value: &CrtValue, primes: &[u64]) -> Result<CrtValue> {
    match (direction, value) {
        (CrtDirection::Split, CrtValue::Residue(j)) => crt_split(*j, primes).map(CrtValue::Vector),
        (CrtDirection::Combine, CrtValue::Vector(v)) => crt_combine(v, primes).map(CrtValue::Residue),
        _ => Err(Error::InvalidArgument(
            "CRT direction does not match value kind".into(),
        )),
    }
}

pub fn crt_split(j: u64, primes: &[u64]) -> Result<ResidueVector> {
    check_moduli(primes)?;
    let n: u64 = primes.iter().product();
    if j >= n {
        return Err(Error::InvalidArgument(format!("residue {j} out of range mod {n}")));
    }
    Ok(ResidueVector(primes.iter().map(|&p| j % p).collect()))
}

pub fn crt_combine(v: &ResidueVector, primes: &[u64]) -> Result<u64> {
    check_moduli(primes)?;
    if v.0.len() != primes.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} residues for {} moduli",
            v.0.len(),
            primes.len()
        )));
    }
    let n: u64 = primes.iter().product();
    let mut j: u128 = 0;
    for (&r, &p) in v.0.iter().zip(primes) {
        if r >= p {
            return Err(Error::InvalidArgument(format!("residue {r} out of range mod {p}")));
        }
        let m = n / p;
        let inv = mod_inverse(m % p, p).expect("coprime moduli");
        j = (j + r as u128 * m as u128 % n as u128 * inv as u128) % n as u128;
    }
    Ok(j as u64)
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(m as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m as i128) as u64)
}

/// All squarefree integers in `[2, max_n]`.
pub fn squarefree_up_to(max_n: u64) -> impl Iterator<Item = u64> {
    (2..=max_n).filter(|&n| is_squarefree(n))
}
