use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::{three_point, DegreeRecord, RecursionReport, TCSDecomposition, VerificationRecord};
use crate::central::{expectation_coeffs, moment, GeneratorWord};
use crate::error::{Error, Result};
use crate::fusion::{self, IrrLabel};
use crate::rational::Rational;
use crate::weingarten::{Engine, QGFamily};

const F: QGFamily = QGFamily::OPlus;

fn require_n(big_n: u32) -> Result<()> {
    if big_n < 3 {
        return Err(Error::NTooSmall { family: F, big_n, min: 3 });
    }
    Ok(())
}

fn d(big_n: u32, k: usize) -> Result<Rational> {
    Ok(Rational::from_integer(fusion::dim(F, big_n, &IrrLabel::Int(k as u32))?))
}

fn word(indices: &[u32]) -> Result<GeneratorWord> {
    GeneratorWord::diagonal(F, &indices.iter().map(|&i| (i, 1)).collect::<Vec<_>>())
}

/// The pair `(A, B)` whose commutator fixes the degree `m` coefficient:
/// `A = (u_1 u_2)^{(m-1)/2}, B = u_1` for odd `m` and
/// `A = (u_1 u_2)^{(m-2)/2}, B = u_3 u_1` for even `m`.
fn commutator_pair(m: usize) -> Result<(GeneratorWord, GeneratorWord)> {
    if m % 2 == 1 {
        Ok((word(&[1, 2].repeat((m - 1) / 2))?, word(&[1])?))
    } else {
        Ok((word(&[1, 2].repeat((m - 2) / 2))?, word(&[3, 1])?))
    }
}

/// Coefficients with `phi_m = a_m phi_1` (odd `m`) or `phi_m = b_m phi_2`
/// (even `m`) for every tracial central functional, `3 <= m <= n_max`.
pub fn onplus_recursion(engine: &Engine, big_n: u32, n_max: usize) -> Result<RecursionReport> {
    require_n(big_n)?;
    let mut coef: BTreeMap<usize, Rational> = BTreeMap::new();
    coef.insert(1, Rational::one());
    coef.insert(2, Rational::one());
    let mut degrees = Vec::new();
    for (m, name) in [(1usize, "a_1"), (2, "b_2")] {
        if m <= n_max {
            let mut rec = DegreeRecord::new(format!("n{m}"));
            rec.coefficients.insert(name.into(), Rational::one());
            degrees.push(rec);
        }
    }
    for m in 3..=n_max {
        let (a, b) = commutator_pair(m)?;
        let ab = a.concat(&b)?;
        let ba = b.concat(&a)?;
        let h_ab = expectation_coeffs(engine, big_n, &ab, m)?;
        let h_ba = expectation_coeffs(engine, big_n, &ba, m)?;
        let c = |l: usize| &h_ab[&IrrLabel::Int(l as u32)] - &h_ba[&IrrLabel::Int(l as u32)];

        let mut rec = DegreeRecord::new(format!("n{m}"));
        let top = c(m);
        let lower = h_ba[&IrrLabel::Int(m as u32 - 2)].clone();
        rec.moments.insert("h(AB chi_n)".into(), h_ab[&IrrLabel::Int(m as u32)].clone());
        rec.moments.insert("h(BA chi_n)".into(), h_ba[&IrrLabel::Int(m as u32)].clone());
        rec.moments.insert("h(BA chi_n-2)".into(), lower.clone());
        rec.flags.insert("denominator_nonzero".into(), !top.is_zero());
        rec.flags.insert(
            "AB_orthogonal_to_lower_characters".into(),
            (0..m).all(|l| h_ab[&IrrLabel::Int(l as u32)].is_zero()),
        );
        rec.flags.insert("only_degree_n-2_enters".into(), (0..m - 2).all(|l| c(l).is_zero()));
        rec.flags.insert("h(BA chi_n-2)_positive".into(), lower.is_positive());
        let mut rev = ba.letters.clone();
        rev.reverse();
        let ba_star = GeneratorWord::new(F, rev)?;
        let norm = moment(engine, big_n, &ba.concat(&ba_star)?)?;
        rec.moments.insert("h(BA (BA)^*)".into(), norm.clone());
        rec.flags.insert("h(BA (BA)^*)_positive".into(), norm.is_positive());

        if top.is_zero() {
            degrees.push(rec);
            break;
        }
        // c_m phi_m + sum_{l<m} c_l phi_l = 0, lower phi_l already reduced
        // to the base value of matching parity.
        let mut acc = Rational::zero();
        for l in (1..m).filter(|l| l % 2 == m % 2) {
            acc += c(l) * &coef[&l];
        }
        let value = -acc / &top;
        let base = if m % 2 == 1 { 1 } else { 2 };
        let dn = d(big_n, m)?;
        let db = d(big_n, base)?;
        rec.flags.insert("counit_satisfies".into(), &value * &db == dn);
        let sign = |k: usize| if k % 2 == 0 { Rational::one() } else { -Rational::one() };
        rec.flags.insert("alt_counit_satisfies".into(), &value * sign(base) * &db == sign(m) * &dn);
        let key = if m % 2 == 1 { format!("a_{m}") } else { format!("b_{m}") };
        rec.coefficients.insert(key, value.clone());
        coef.insert(m, value);
        degrees.push(rec);
    }
    Ok(RecursionReport { family: F, big_n, degrees })
}

pub fn onplus_recursion_record(engine: &Engine, big_n: u32, n_max: usize) -> Result<VerificationRecord> {
    let report = onplus_recursion(engine, big_n, n_max)?;
    let mut rec = report.to_record("onplus.recursion");
    rec.input("n_max", n_max);
    rec.check("reached_n_max", report.degrees.last().map(|d| d.degree.clone()) == Some(format!("n{n_max}")));
    Ok(rec)
}

/// Weights of `phi` on `h, eps, eps_alt` from `phi_1, phi_2`.
pub fn onplus_decompose(big_n: u32, phi1: &Rational, phi2: &Rational) -> Result<TCSDecomposition> {
    require_n(big_n)?;
    let lambda = phi1 / d(big_n, 1)?;
    let mu = phi2 / d(big_n, 2)?;
    Ok(three_point(F, &lambda, &mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn extremes() {
        let n = 4;
        let c = onplus_decompose(n, &int(4), &int(15)).unwrap();
        assert_eq!((c.weight("haar"), c.weight("counit"), c.weight("alt")), (int(0), int(1), int(0)));
        let c = onplus_decompose(n, &int(-4), &int(15)).unwrap();
        assert_eq!(c.weight("alt"), int(1));
        let c = onplus_decompose(n, &int(0), &int(0)).unwrap();
        assert_eq!(c.weight("haar"), int(1));
        assert!(onplus_decompose(2, &int(0), &int(0)).is_err());
    }

    #[test]
    fn a3_at_four() {
        let e = Engine::default();
        let r = onplus_recursion(&e, 4, 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.degrees.last().unwrap().coefficients["a_3"], int(14));
    }
}
