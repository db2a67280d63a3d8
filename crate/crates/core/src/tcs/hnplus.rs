use num_traits::{One, Signed, Zero};

use super::{rigidity_grid, three_point, TCSDecomposition, VerificationRecord};
use crate::central::{moment, word_character_moment, GeneratorWord};
use crate::error::{Error, Result};
use crate::fusion::{self, FusionElement, IrrLabel};
use crate::rational::{self, Rational};
use crate::weingarten::{Engine, QGFamily};

const F: QGFamily = QGFamily::HPlus;

fn require_n(big_n: u32) -> Result<()> {
    if big_n < 6 {
        return Err(Error::NTooSmall { family: F, big_n, min: 6 });
    }
    Ok(())
}

/// Word in diagonal generators; `(i, 2)` is `u_ii^2`.
pub fn diag(letters: &[(u32, u8)]) -> Result<GeneratorWord> {
    GeneratorWord::diagonal(F, letters)
}

fn w(s: &str) -> IrrLabel {
    IrrLabel::word(s)
}

fn d(big_n: u32, s: &str) -> Result<Rational> {
    Ok(Rational::from_integer(fusion::dim(F, big_n, &w(s))?))
}

fn hc(engine: &Engine, big_n: u32, x: &GeneratorWord, s: &str) -> Result<Rational> {
    word_character_moment(engine, big_n, x, &w(s))
}

fn element(terms: &[(&str, u64)]) -> FusionElement {
    terms.iter().map(|(s, m)| (w(s), *m)).collect()
}

/// The two length-three fusion identities feeding the even-degree relation.
pub fn length_three_fusion() -> Result<(bool, bool)> {
    let a = fusion::product_expand(F, &[w("1"), w("0"), w("1")])?;
    let b = fusion::product_expand(F, &[w("1"), w("1"), w("0")])?;
    Ok((
        a == element(&[("101", 1), ("11", 2), ("0", 1), ("", 1)]),
        b == element(&[("110", 1), ("00", 1), ("0", 2), ("11", 1), ("", 1)]),
    ))
}

/// Recomputes the chain showing `phi_11 = N phi_0` for every tracial central
/// functional.
pub fn hnplus_relations(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n)?;
    let n = rational::int(big_n as i64);
    let one = Rational::one();
    let mut rec = VerificationRecord::new("hnplus.even_relations", Some(F), Some(big_n));

    let (f1, f2) = length_three_fusion()?;
    rec.check("fusion_1_0_1", f1);
    rec.check("fusion_1_1_0", f2);
    let (d0, d00, d11, d101, d110) = (d(big_n, "0")?, d(big_n, "00")?, d(big_n, "11")?, d(big_n, "101")?, d(big_n, "110")?);
    rec.check("d_11 = N(N-1)", d11 == &n * (&n - rational::int(1)));
    rec.check("counit_satisfies_length_three_relation", &d101 - &d0 - &d00 == &d110 - &d11);

    // u_1 u_2^2 u_1 against u_1^2 u_2^2.
    let x1 = diag(&[(1, 1), (2, 2), (1, 1)])?;
    let x2 = diag(&[(1, 2), (2, 2)])?;
    let x1_101 = hc(engine, big_n, &x1, "101")?;
    let x1_11 = hc(engine, big_n, &x1, "11")?;
    let x1_0 = hc(engine, big_n, &x1, "0")?;
    let x1_e = moment(engine, big_n, &x1)?;
    let x2_00 = hc(engine, big_n, &x2, "00")?;
    let x2_0 = hc(engine, big_n, &x2, "0")?;
    let x2_e = moment(engine, big_n, &x2)?;
    for (k, v) in [
        ("h(u1 u2^2 u1 chi_101*)", &x1_101),
        ("h(u1 u2^2 u1 chi_11*)", &x1_11),
        ("h(u1 u2^2 u1 chi_0*)", &x1_0),
        ("h(u1^2 u2^2 chi_00*)", &x2_00),
        ("h(u1^2 u2^2 chi_0*)", &x2_0),
    ] {
        rec.value(k, v);
    }
    rec.check("h(u1 u2^2 u1 chi_11*) = 0", x1_11.is_zero());
    rec.check("h(u1 u2^2 u1) = h(u1^2 u2^2)", x1_e == x2_e);
    rec.check("h(u1 u2^2 u1 chi_101*) nonzero", !x1_101.is_zero());
    let ratio_00 = &d00 / &d0;
    rec.value("phi_00/phi_0", &ratio_00);
    let mut coefficient_101 = None;
    if !x1_101.is_zero() {
        let c = (&x2_00 * &ratio_00 + &x2_0 - &x1_0) / &x1_101;
        rec.value("phi_101/phi_0", &c);
        rec.check("phi_101/phi_0 = N(N^2-3N+1)/(N-1)", c == &n * (&n * &n - rational::int(3) * &n + rational::int(1)) / (&n - rational::int(1)));
        rec.check("phi_101/phi_0 = d_101/d_0", c == &d101 / &d0);
        coefficient_101 = Some(c);
    }

    // u_1 u_2 u_1^2 against u_1 u_2.
    let x3 = diag(&[(1, 1), (2, 1), (1, 2)])?;
    let y = diag(&[(1, 1), (2, 1)])?;
    let x3_110 = hc(engine, big_n, &x3, "110")?;
    let x3_11 = hc(engine, big_n, &x3, "11")?;
    let y_11 = hc(engine, big_n, &y, "11")?;
    rec.value("h(u1 u2 u1^2 chi_110*)", &x3_110);
    rec.value("h(u1 u2 u1^2 chi_11*)", &x3_11);
    rec.value("h(u1 u2 chi_11*)", &y_11);
    rec.check("h(u1 u2 u1^2) = 0", moment(engine, big_n, &x3)?.is_zero());
    rec.check("h(u1 u2 u1^2 chi_0*) = 0", hc(engine, big_n, &x3, "0")?.is_zero());
    rec.check("h(u1 u2 u1^2 chi_00*) = 0", hc(engine, big_n, &x3, "00")?.is_zero());
    rec.check("h(u1 u2 chi_11*) = h(u1 u2 u2 u1)", y_11 == moment(engine, big_n, &diag(&[(1, 1), (2, 1), (2, 1), (1, 1)])?)?);
    let literal = moment(engine, big_n, &diag(&[(1, 1), (2, 1), (1, 2), (2, 1), (1, 1)])?)?;
    rec.check("h(u1 u2 u1^2 chi_11*) = h(u1 u2 u1^2 u2 u1)", x3_11 == literal);
    rec.check("h(u1 u2 u1^2 chi_110*) nonzero", !x3_110.is_zero());
    let mut delta = None;
    if !x3_110.is_zero() {
        let dl = (&y_11 - &x3_11) / &x3_110;
        rec.value("delta", &dl);
        rec.check("delta = N-2", dl == &n - rational::int(2));
        delta = Some(dl);
    }

    // phi_101 - phi_0 - phi_00 = phi_110 - phi_11 with both sides reduced:
    // (A - 1 - B) phi_0 = (delta - 1) phi_11.
    if let (Some(a), Some(dl)) = (coefficient_101, delta) {
        let gap = &dl - &one;
        rec.check("delta - 1 nonzero", !gap.is_zero());
        if !gap.is_zero() {
            let c = (a - &one - &ratio_00) / gap;
            rec.value("phi_11/phi_0", &c);
            rec.check("phi_11 = N phi_0", c == n);
            rec.check("phi_11/phi_0 = d_11/d_0", c == &d11 / &d0);
        }
    }
    Ok(rec)
}

/// Coefficients with `phi_111 = a phi_10 + b phi_1` from
/// `phi(u_1 u_2 u_1) = phi(u_2 u_1^2)`.
pub fn hnplus_a111b111(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n)?;
    let x = diag(&[(1, 1), (2, 1), (1, 1)])?;
    let z = diag(&[(2, 1), (1, 2)])?;
    let top = hc(engine, big_n, &x, "111")?;
    let x10 = hc(engine, big_n, &x, "10")?;
    let x1 = hc(engine, big_n, &x, "1")?;
    let z10 = hc(engine, big_n, &z, "10")?;
    let z1 = hc(engine, big_n, &z, "1")?;
    let squares = moment(engine, big_n, &diag(&[(2, 2), (1, 2)])?)?;
    let mut rec = VerificationRecord::new("hnplus.a111_b111", Some(F), Some(big_n));
    rec.value("h(u1 u2 u1 chi_111*)", &top);
    rec.value("h(u2 u1^2 chi_10*)", &z10);
    rec.value("h(u2 u1^2 chi_1*)", &z1);
    rec.check("h(u1 u2 u1 chi_111*) nonzero", !top.is_zero());
    rec.check("h(u1 u2 u1 chi_10*) = 0", x10.is_zero());
    rec.check("h(u1 u2 u1 chi_1*) = 0", x1.is_zero());
    rec.check("h(u2 u1^2 chi_10*) nonzero", !z10.is_zero());
    rec.check("h(u2 u1^2 chi_1*) = h(u2^2 u1^2)", z1 == squares);
    rec.check("h(u2^2 u1^2) positive", squares.is_positive());
    if !top.is_zero() {
        let a = &z10 / &top;
        let b = &z1 / &top;
        rec.value("a_111", &a);
        rec.value("b_111", &b);
        rec.check("a_111 nonzero", !a.is_zero());
        rec.check("b_111 nonzero", !b.is_zero());
        rec.check(
            "counit_satisfies",
            &a * d(big_n, "10")? + &b * d(big_n, "1")? == d(big_n, "111")?,
        );
    }
    Ok(rec)
}

/// `a_111, b_111` as exact values.
pub fn a111_b111(engine: &Engine, big_n: u32) -> Result<(Rational, Rational)> {
    require_n(big_n)?;
    let x = diag(&[(1, 1), (2, 1), (1, 1)])?;
    let z = diag(&[(2, 1), (1, 2)])?;
    let top = hc(engine, big_n, &x, "111")?;
    if top.is_zero() {
        return Err(Error::VanishingDenominator(format!("h(u1 u2 u1 chi_111*) = 0 at N = {big_n}")));
    }
    Ok((hc(engine, big_n, &z, "10")? / &top, hc(engine, big_n, &z, "1")? / &top))
}

/// The odd-word exponential identity fails unless the rates of `10` and
/// `1` agree.
pub fn hnplus_semigroup_rigidity(engine: &Engine, big_n: u32, tol: f64) -> Result<VerificationRecord> {
    let (a, b) = a111_b111(engine, big_n)?;
    let mut rec = VerificationRecord::new("hnplus.semigroup_rigidity", Some(F), Some(big_n));
    rec.input("tolerance", tol);
    rigidity_grid(&mut rec, "grid", &d(big_n, "111")?, (&a, &d(big_n, "10")?), (&b, &d(big_n, "1")?), tol);
    Ok(rec)
}

/// Values on the length-two words forced by `phi_0, phi_1, phi_10`.
pub fn hnplus_length2(big_n: u32, phi0: &Rational, phi1: &Rational, phi10: &Rational) -> Result<VerificationRecord> {
    require_n(big_n)?;
    let mut rec = VerificationRecord::new("hnplus.length_two", Some(F), Some(big_n));
    rec.value("phi_0", phi0);
    rec.value("phi_1", phi1);
    rec.value("phi_10", phi10);
    let left = fusion::product_expand(F, &[w("0"), w("1")])?;
    let right = fusion::product_expand(F, &[w("1"), w("0")])?;
    rec.check("chi_0 chi_1 = chi_01 + chi_1", left == element(&[("01", 1), ("1", 1)]));
    rec.check("chi_1 chi_0 = chi_10 + chi_1", right == element(&[("10", 1), ("1", 1)]));
    rec.check("d_01 = d_10", d(big_n, "01")? == d(big_n, "10")?);
    let n = rational::int(big_n as i64);
    let ratio = d(big_n, "00")? / d(big_n, "0")?;
    rec.value("d_00/d_0", &ratio);
    rec.check("d_00/d_0 = (N^2-3N+1)/(N-1)", ratio == (&n * &n - rational::int(3) * &n + rational::int(1)) / (&n - rational::int(1)));
    // Both words come from the same two characters, so traciality
    // equates them.
    rec.value("phi_01", phi10);
    rec.value("phi_00", &(&ratio * phi0));
    Ok(rec)
}

pub fn hnplus_decompose(big_n: u32, lambda: &Rational, mu: &Rational) -> Result<TCSDecomposition> {
    require_n(big_n)?;
    Ok(three_point(F, lambda, mu))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn fusion_identities() {
        assert_eq!(length_three_fusion().unwrap(), (true, true));
    }

    #[test]
    fn decompose_extremes() {
        assert_eq!(hnplus_decompose(6, &int(1), &int(1)).unwrap().weight("counit"), int(1));
        assert_eq!(hnplus_decompose(6, &int(-1), &int(1)).unwrap().weight("alt"), int(1));
        assert_eq!(hnplus_decompose(6, &int(0), &int(0)).unwrap().weight("haar"), int(1));
    }
}
