//! Fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Exact inverse of a square integer matrix as rationals.
pub fn bareiss_inverse(m: &[Vec<BigInt>]) -> Option<Vec<Vec<Rational>>> {
    let (num, den) = bareiss_inverse_parts(m)?;
    Some(
        num.into_iter()
            .map(|row| row.into_iter().map(|v| Rational::new(v, den.clone())).collect())
            .collect(),
    )
}

/// Fraction-free Gauss-Jordan elimination. Every intermediate entry is a
/// minor of the augmented matrix, so each division is exact. Returns an
/// integer matrix `A` and a positive `d` with `m^-1 = A / d`, or `None` when
/// `m` is singular.
pub fn bareiss_inverse_parts(m: &[Vec<BigInt>]) -> Option<(Vec<Vec<BigInt>>, BigInt)> {
    let n = m.len();
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = Vec::with_capacity(2 * n);
            r.extend(row.iter().cloned());
            r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&r| !a[r][k].is_zero())?;
        a.swap(k, p);
        let pivot_row = std::mem::take(&mut a[k]);
        let pivot = pivot_row[k].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = std::mem::take(&mut row[k]);
            for j in 0..2 * n {
                if j == k {
                    continue;
                }
                let mut v = &pivot * &row[j];
                if !factor.is_zero() && !pivot_row[j].is_zero() {
                    v -= &factor * &pivot_row[j];
                }
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
        }
        a[k] = pivot_row;
        prev = pivot;
    }
    let flip = prev.is_negative();
    let den = if flip { -prev } else { prev };
    let num = a
        .into_iter()
        .map(|mut row| {
            let mut right = row.split_off(n);
            if flip {
                right.iter_mut().for_each(|v| *v = -std::mem::take(v));
            }
            right
        })
        .collect();
    Some((num, den))
}

/// Determinant by Bareiss elimination.
pub fn bareiss_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_vec();
    let mut prev = BigInt::one();
    let mut negate = false;
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&r| !a[r][k].is_zero()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

pub fn is_identity(m: &[Vec<Rational>]) -> bool {
    m.iter().enumerate().all(|(i, row)| {
        row.iter()
            .enumerate()
            .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
    })
}

/// Product of an integer matrix with a rational matrix.
pub fn mul_int_rat(a: &[Vec<BigInt>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    // Sum over a common denominator to keep the gcd work low.
                    let mut acc = Rational::zero();
                    for (x, brow) in row.iter().zip(b) {
                        let y = &brow[j];
                        if !x.is_zero() && !y.is_zero() {
                            acc += Rational::from_integer(x.clone()) * y;
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn abs_max_bits(m: &[Vec<BigInt>]) -> u64 {
    m.iter().flatten().map(|v| v.abs().bits()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
    }

    #[test]
    fn inverse_round_trip_with_pivoting() {
        let m = ints(&[&[0, 2, 1], &[3, 1, 4], &[1, 5, 9]]);
        let inv = bareiss_inverse(&m).unwrap();
        assert!(is_identity(&mul_int_rat(&m, &inv)));
        assert_eq!(bareiss_det(&m), BigInt::from(-32));
    }

    #[test]
    fn singular_matrix_has_no_inverse() {
        let m = ints(&[&[1, 2], &[2, 4]]);
        assert!(bareiss_inverse(&m).is_none());
        assert!(bareiss_det(&m).is_zero());
    }
}
