//! Smith normal form by fraction-free elimination.
//!
//! Two paths share the pivot rule (smallest nonzero magnitude, ties by lowest
//! column then lowest row): a sparse row-oriented path that only tracks the
//! invariant factors, and a dense path that also accumulates the unimodular
//! transforms.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Diagonal `d_1 | d_2 | ... | d_k` with `k = min(rows, cols)` and, on
/// request, unimodular `U`, `V` with `U * A * V = diag(d)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub diagonal: Vec<BigInt>,
    pub rank: usize,
    pub transforms: Option<(IntMatrix, IntMatrix)>,
}

impl SnfResult {
    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix, want_transforms: bool) -> SnfResult {
    if want_transforms {
        dense_snf(a)
    } else {
        let pivots = sparse_pivots(a);
        let rank = pivots.len();
        let mut diagonal = normalize_diagonal(pivots);
        diagonal.resize(a.rows().min(a.cols()), BigInt::zero());
        SnfResult { diagonal, rank, transforms: None }
    }
}

/// `q` with `|a - q p|` minimal (ties toward the floor quotient).
fn nearest_quotient(a: &BigInt, p: &BigInt) -> BigInt {
    let (q, r) = a.div_mod_floor(p);
    if (&r + &r).abs() > p.abs() {
        q + 1
    } else {
        q
    }
}

/// `dst -= q * src` on sorted sparse rows.
fn axpy_sparse(dst: &mut Vec<(usize, BigInt)>, src: &[(usize, BigInt)], q: &BigInt) {
    let mut out = Vec::with_capacity(dst.len() + src.len());
    let mut a = std::mem::take(dst).into_iter().peekable();
    let mut b = src.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (None, None) => break,
            (Some(_), None) => out.push(a.next().unwrap()),
            (None, Some(_)) => {
                let (j, v) = b.next().unwrap();
                out.push((*j, -(v * q)));
            }
            (Some((ja, _)), Some((jb, _))) => match ja.cmp(jb) {
                Ordering::Less => out.push(a.next().unwrap()),
                Ordering::Greater => {
                    let (j, v) = b.next().unwrap();
                    out.push((*j, -(v * q)));
                }
                Ordering::Equal => {
                    let (j, mut va) = a.next().unwrap();
                    let (_, vb) = b.next().unwrap();
                    va -= vb * q;
                    if !va.is_zero() {
                        out.push((j, va));
                    }
                }
            },
        }
    }
    *dst = out;
}

fn entry_at(row: &[(usize, BigInt)], c: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&c, |(j, _)| *j).ok().map(|k| &row[k].1)
}

/// Pivot rule: smallest magnitude, then lowest column, then lowest row.
fn better_pivot(cand: (&BigInt, usize, usize), best: Option<(&BigInt, usize, usize)>) -> bool {
    match best {
        None => true,
        Some((bv, bc, br)) => match cand.0.magnitude().cmp(bv.magnitude()) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => (cand.1, cand.2) < (bc, br),
        },
    }
}

/// Diagonalizes `a` by unimodular row and column operations and returns the
/// magnitudes of the nonzero diagonal entries (not yet in divisibility order).
fn sparse_pivots(a: &IntMatrix) -> Vec<BigInt> {
    let mut rows: Vec<Vec<(usize, BigInt)>> =
        a.sparse_rows().into_iter().filter(|r| !r.is_empty()).collect();
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(&BigInt, usize, usize)> = None;
        for (ri, row) in rows.iter().enumerate() {
            for (c, v) in row {
                if better_pivot((v, *c, ri), best) {
                    best = Some((v, *c, ri));
                }
            }
        }
        let Some((p, c, r)) = best.map(|(v, c, r)| (v.clone(), c, r)) else {
            break;
        };
        let pivot_row = rows[r].clone();
        let mut column_clear = true;
        for (ri, row) in rows.iter_mut().enumerate() {
            if ri == r {
                continue;
            }
            if let Some(v) = entry_at(row, c) {
                let q = nearest_quotient(v, &p);
                if !q.is_zero() {
                    axpy_sparse(row, &pivot_row, &q);
                }
                if entry_at(row, c).is_some() {
                    column_clear = false;
                }
            }
        }
        let removed_before = rows[..r].iter().filter(|row| row.is_empty()).count();
        rows.retain(|row| !row.is_empty());
        let r = r - removed_before;
        if !column_clear {
            continue;
        }
        // Column c is zero outside the pivot row, so column operations
        // against c touch only this row.
        let row = &mut rows[r];
        for (j, v) in row.iter_mut() {
            if *j != c {
                let q = nearest_quotient(v, &p);
                *v -= q * &p;
            }
        }
        row.retain(|(_, v)| !v.is_zero());
        if row.len() == 1 {
            pivots.push(p.abs());
            rows.remove(r);
        }
    }
    pivots
}

/// Smith form of a diagonal matrix with the given nonzero entries.
fn normalize_diagonal(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            if d[j].is_multiple_of(&d[i]) {
                continue;
            }
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn dense_snf(a: &IntMatrix) -> SnfResult {
    let (m, n) = (a.rows(), a.cols());
    let mut a = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);
    let k = m.min(n);
    let mut rank = 0;
    for t in 0..k {
        loop {
            let mut best: Option<(&BigInt, usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = a.get(i, j);
                    if !x.is_zero() && better_pivot((x, j, i), best) {
                        best = Some((x, j, i));
                    }
                }
            }
            let Some((_, pj, pi)) = best else {
                break;
            };
            a.swap_rows(t, pi);
            u.swap_rows(t, pi);
            a.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let p = a.get(t, t).clone();
            let mut clean = true;
            for i in (t + 1)..m {
                let x = a.get(i, t);
                if x.is_zero() {
                    continue;
                }
                let q = -nearest_quotient(x, &p);
                a.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= a.get(i, t).is_zero();
            }
            for j in (t + 1)..n {
                let x = a.get(t, j);
                if x.is_zero() {
                    continue;
                }
                let q = -nearest_quotient(x, &p);
                a.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= a.get(t, j).is_zero();
            }
            if !clean {
                continue;
            }
            // Pivot must divide the whole trailing block; otherwise fold an
            // offending row into row t and go again.
            let offender = ((t + 1)..m).find(|&i| {
                ((t + 1)..n).any(|j| !a.get(i, j).is_multiple_of(&p))
            });
            match offender {
                Some(i) => {
                    let one = BigInt::one();
                    a.add_row_multiple(t, i, &one);
                    u.add_row_multiple(t, i, &one);
                }
                None => {
                    rank += 1;
                    break;
                }
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        if a.get(t, t).is_zero() {
            break;
        }
    }
    let diagonal = (0..k).map(|i| a.get(i, i).clone()).collect();
    SnfResult { diagonal, rank, transforms: Some((u, v)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag(a: &IntMatrix, t: bool) -> Vec<i64> {
        smith_normal_form(a, t).diagonal.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn small_examples() {
        for t in [false, true] {
            assert_eq!(diag(&IntMatrix::identity(2), t), vec![1, 1]);
            assert_eq!(diag(&IntMatrix::from_rows(&[vec![2i64, 4], vec![6, 8]]), t), vec![2, 4]);
            assert_eq!(diag(&IntMatrix::zeros(3, 2), t), vec![0, 0]);
            assert_eq!(diag(&IntMatrix::from_rows(&[vec![2i64, 0], vec![0, 3]]), t), vec![1, 6]);
            assert_eq!(diag(&IntMatrix::zeros(0, 4), t), Vec::<i64>::new());
        }
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = IntMatrix::from_rows(&[
            vec![6i64, 4, 0, 2],
            vec![-3, 9, 12, 1],
            vec![0, 2, -4, 8],
        ]);
        let r = smith_normal_form(&a, true);
        let (u, v) = r.transforms.clone().unwrap();
        let d = u.mul(&a).unwrap().mul(&v).unwrap();
        for i in 0..3 {
            for j in 0..4 {
                let want = if i == j { r.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*d.get(i, j), want);
            }
        }
        assert_eq!(r.diagonal, smith_normal_form(&a, false).diagonal);
    }

    #[test]
    fn nearest_quotient_is_balanced() {
        let q = nearest_quotient(&BigInt::from(7), &BigInt::from(3));
        assert_eq!(q, BigInt::from(2));
        let q = nearest_quotient(&BigInt::from(8), &BigInt::from(3));
        assert_eq!(q, BigInt::from(3));
        let q = nearest_quotient(&BigInt::from(-8), &BigInt::from(3));
        assert_eq!(q, BigInt::from(-3));
    }
}
