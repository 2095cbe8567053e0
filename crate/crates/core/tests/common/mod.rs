//! Oracles written independently of the library code they check.
#![allow(dead_code)]

use num_bigint::BigInt;

pub fn mobius(n: u64) -> i64 {
    let (mut m, mut sign, mut p) = (n, 1i64, 2u64);
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

pub fn totient(n: u64) -> u64 {
    (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64
}

/// Phi_n as `prod_{d | n} (1 - x^d)^{mu(n/d)}` expanded as a power series
/// truncated at degree phi(n). Valid for n >= 2.
pub fn oracle_cyclotomic(n: u64) -> Vec<i64> {
    let deg = totient(n) as usize;
    let mut s = vec![0i128; deg + 1];
    s[0] = 1;
    for d in (1..=n).filter(|&d| n.is_multiple_of(d)) {
        let d_us = d as usize;
        match mobius(n / d) {
            1 => {
                // multiply by (1 - x^d)
                for i in (d_us..=deg).rev() {
                    s[i] -= s[i - d_us];
                }
            }
            -1 => {
                // divide by (1 - x^d): multiply by 1 + x^d + x^{2d} + ...
                for i in d_us..=deg {
                    s[i] += s[i - d_us];
                }
            }
            _ => {}
        }
    }
    s.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
}

pub fn big(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

/// Determinant by cofactor expansion.
pub fn det(m: &[Vec<i64>]) -> i128 {
    let k = m.len();
    if k == 0 {
        return 1;
    }
    if k == 1 {
        return m[0][0] as i128;
    }
    let mut total = 0i128;
    for c in 0..k {
        if m[0][c] == 0 {
            continue;
        }
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect())
            .collect();
        let sign = if c % 2 == 0 { 1 } else { -1 };
        total += sign * m[0][c] as i128 * det(&minor);
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// gcd of all k x k minors, the product of the first k invariant factors.
pub fn gcd_of_minors(m: &[Vec<i64>], k: usize) -> i128 {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut g = 0i128;
    for rs in subsets(rows, k) {
        for cs in subsets(cols, k) {
            let sub: Vec<Vec<i64>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c]).collect()).collect();
            g = gcd(g, det(&sub));
        }
    }
    g
}
