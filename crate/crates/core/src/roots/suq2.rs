use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Largest matrix size accepted by the semidefiniteness tests.
pub const MAX_SIZE: usize = 50;

/// `T_jk = 1` for even `j - k`, `c` for odd.
pub fn toeplitz(c: &Rational, m: usize) -> Vec<Vec<Rational>> {
    (0..m)
        .map(|j| (0..m).map(|k| if (j + k) % 2 == 0 { rational::int(1) } else { c.clone() }).collect())
        .collect()
}

fn check_size(m: usize) -> Result<()> {
    if m == 0 || m > MAX_SIZE {
        return Err(Error::InvalidSize(format!("matrix size {m} outside 1..={MAX_SIZE}")));
    }
    Ok(())
}

/// Exact symmetric elimination. A zero pivot is only admissible when the
/// rest of its row vanishes too.
pub fn suq2_psd(c: &Rational, m: usize) -> Result<bool> {
    check_size(m)?;
    let mut a = toeplitz(c, m);
    for k in 0..m {
        let pivot = a[k][k].clone();
        if pivot.is_negative() {
            return Ok(false);
        }
        if pivot.is_zero() {
            if a[k][k + 1..].iter().any(|v| !v.is_zero()) {
                return Ok(false);
            }
            continue;
        }
        for i in k + 1..m {
            let f = &a[i][k] / &pivot;
            if f.is_zero() {
                continue;
            }
            for j in k..m {
                let delta = &f * &a[k][j];
                a[i][j] -= delta;
            }
        }
    }
    Ok(true)
}

/// Floating-point variant of [`suq2_psd`] with an absolute tolerance.
pub fn suq2_psd_f64(c: f64, m: usize, tol: f64) -> Result<bool> {
    check_size(m)?;
    if !c.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite value {c}")));
    }
    let mut a: Vec<Vec<f64>> = (0..m).map(|j| (0..m).map(|k| if (j + k) % 2 == 0 { 1.0 } else { c }).collect()).collect();
    for k in 0..m {
        let pivot = a[k][k];
        if pivot < -tol {
            return Ok(false);
        }
        if pivot.abs() <= tol {
            if a[k][k + 1..].iter().any(|v| v.abs() > tol) {
                return Ok(false);
            }
            continue;
        }
        for i in k + 1..m {
            let f = a[i][k] / pivot;
            for j in k..m {
                a[i][j] -= f * a[k][j];
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn examples() {
        for m in 1..=8 {
            assert!(suq2_psd(&frac(1, 1), m).unwrap());
            assert!(suq2_psd(&frac(-1, 1), m).unwrap());
        }
        assert!(!suq2_psd(&frac(3, 2), 2).unwrap());
        assert!(suq2_psd(&frac(3, 2), 1).unwrap());
        assert!(suq2_psd(&frac(0, 1), 5).unwrap());
        assert!(suq2_psd(&frac(-1, 2), 5).unwrap());
        assert!(!suq2_psd(&frac(-2, 1), 3).unwrap());
        assert!(suq2_psd(&frac(1, 1), 51).is_err());
    }

    #[test]
    fn float_agrees() {
        for c in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            for m in 1..=6 {
                let exact = suq2_psd(&rational::parse(&c.to_string()).unwrap(), m).unwrap();
                assert_eq!(suq2_psd_f64(c, m, 1e-12).unwrap(), exact, "c={c} m={m}");
            }
        }
    }
}
