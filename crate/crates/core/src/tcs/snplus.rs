use num_traits::{One, Signed, Zero};

use super::appendix::four_pairs;
use super::{exponential_residual, rigidity_grid, TCSDecomposition, VerificationRecord};
use crate::central::{moment, trace_power_moment, word_character_moment, GeneratorWord};
use crate::error::{Error, Result};
use crate::fusion::{self, IrrLabel};
use crate::rational::{self, Rational};
use crate::weingarten::{Engine, QGFamily};

const F: QGFamily = QGFamily::SPlus;

/// Default tolerance for floating-point identities.
pub const TOLERANCE: f64 = 1e-9;

fn require_n(big_n: u32, min: u32) -> Result<()> {
    if big_n < min {
        return Err(Error::NTooSmall { family: F, big_n, min });
    }
    Ok(())
}

/// Product of the diagonal projections `p_i = u_ii`.
pub fn projections(indices: &[u32]) -> Result<GeneratorWord> {
    GeneratorWord::diagonal(F, &indices.iter().map(|&i| (i, 1)).collect::<Vec<_>>())
}

fn chi(k: u32) -> IrrLabel {
    IrrLabel::Int(k)
}

fn d(big_n: u32, k: u32) -> Result<Rational> {
    Ok(Rational::from_integer(fusion::dim(F, big_n, &chi(k))?))
}

fn hc(engine: &Engine, big_n: u32, idx: &[u32], k: u32) -> Result<Rational> {
    word_character_moment(engine, big_n, &projections(idx)?, &chi(k))
}

const CATALAN: [i64; 5] = [1, 1, 2, 5, 14];

/// Low-order moments of projections and of the fundamental character.
pub fn snplus_base_moments(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n, F.min_n())?;
    let n = rational::int(big_n as i64);
    let one = Rational::one();
    let pair = moment(engine, big_n, &projections(&[1, 2])?)?;
    let triple = moment(engine, big_n, &projections(&[1, 2, 1])?)?;
    let expected = &one / (&n * (&n - rational::int(1)));
    let mut rec = VerificationRecord::new("snplus.base_moments", Some(F), Some(big_n));
    rec.value("h(p1 p2)", &pair);
    rec.value("h(p1 p2 p1)", &triple);
    rec.check("h(p1 p2) = 1/(N(N-1))", pair == expected);
    rec.check("h(p1 p2 p1) = h(p1 p2)", triple == pair);
    let empty = GeneratorWord::empty(F);
    for (k, c) in CATALAN.iter().enumerate() {
        let m = trace_power_moment(engine, big_n, &empty, k)?;
        rec.value(format!("h(chi^{k})"), &m);
        rec.check(format!("h(chi^{k}) is Catalan"), m == rational::int(*c));
    }
    let p_chi2 = trace_power_moment(engine, big_n, &projections(&[1])?, 2)?;
    let pp_chi = trace_power_moment(engine, big_n, &projections(&[1, 2])?, 1)?;
    rec.value("h(p1 chi^2)", &p_chi2);
    rec.value("h(p1 p2 chi)", &pp_chi);
    rec.check("h(p1 chi^2) = 5/N", p_chi2 == rational::int(5) / &n);
    rec.check("h(p1 p2 chi) = 3/(N(N-1))", pp_chi == rational::int(3) * &expected);
    Ok(rec)
}

/// `h(p1 p2 chi_1) != h(p1 p2 p1 chi_1)`, which makes `a_3` nonzero.
pub fn snplus_coefficient_gap(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n, F.min_n())?;
    let two = hc(engine, big_n, &[1, 2], 1)?;
    let three = hc(engine, big_n, &[1, 2, 1], 1)?;
    let mut rec = VerificationRecord::new("snplus.coefficient_gap", Some(F), Some(big_n));
    rec.value("h(p1 p2 chi_1)", &two);
    rec.value("h(p1 p2 p1 chi_1)", &three);
    rec.check("moments_differ", two != three);
    Ok(rec)
}

/// Coefficients with `phi_3 = a_3 phi_1 + b_3 phi_2` for every tracial
/// central functional, from `phi(p1 p2 p1) = phi(p1 p2)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThirdDegree {
    pub a3: Rational,
    pub b3: Rational,
    pub denominator: Rational,
    pub gap1: Rational,
    pub gap2: Rational,
}

fn third_degree(engine: &Engine, big_n: u32) -> Result<ThirdDegree> {
    let denominator = hc(engine, big_n, &[1, 2, 1], 3)?;
    let gap1 = hc(engine, big_n, &[1, 2], 1)? - hc(engine, big_n, &[1, 2, 1], 1)?;
    let gap2 = hc(engine, big_n, &[1, 2], 2)? - hc(engine, big_n, &[1, 2, 1], 2)?;
    if denominator.is_zero() {
        return Err(Error::VanishingDenominator(format!("h(p1 p2 p1 chi_3) = 0 at N = {big_n}")));
    }
    Ok(ThirdDegree { a3: &gap1 / &denominator, b3: &gap2 / &denominator, denominator, gap1, gap2 })
}

pub fn snplus_a3b3(engine: &Engine, big_n: u32) -> Result<(Rational, Rational)> {
    require_n(big_n, 6)?;
    let t = third_degree(engine, big_n)?;
    Ok((t.a3, t.b3))
}

pub fn snplus_a3b3_record(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n, 6)?;
    let mut rec = VerificationRecord::new("snplus.a3_b3", Some(F), Some(big_n));
    let t = match third_degree(engine, big_n) {
        Ok(t) => t,
        Err(Error::VanishingDenominator(msg)) => {
            rec.note("error", msg);
            rec.check("denominator_nonzero", false);
            return Ok(rec);
        }
        Err(e) => return Err(e),
    };
    rec.value("a_3", &t.a3);
    rec.value("b_3", &t.b3);
    rec.value("h(p1 p2 p1 chi_3)", &t.denominator);
    rec.check("denominator_nonzero", true);
    rec.check("a_3_nonzero", !t.a3.is_zero());
    rec.check("b_3_nonzero", !t.b3.is_zero());
    let counit = &t.a3 * d(big_n, 1)? + &t.b3 * d(big_n, 2)?;
    rec.check("counit_satisfies", counit == d(big_n, 3)?);
    Ok(rec)
}

/// `h((p1 p2)^k p1 chi_{2k+1})`.
pub fn odd_nonvanishing_moment(engine: &Engine, big_n: u32, k: usize) -> Result<Rational> {
    let mut idx = [1, 2].repeat(k);
    idx.push(1);
    hc(engine, big_n, &idx, 2 * k as u32 + 1)
}

/// `h((p1 p2)^k p3 p1 chi_{2k+2})`.
pub fn even_nonvanishing_moment(engine: &Engine, big_n: u32, k: usize) -> Result<Rational> {
    let mut idx = [1, 2].repeat(k);
    idx.extend([3, 1]);
    hc(engine, big_n, &idx, 2 * k as u32 + 2)
}

fn nonvanishing(engine: &Engine, big_n: u32, k: usize, odd: bool, even: bool) -> Result<VerificationRecord> {
    require_n(big_n, 6)?;
    let suffix = match (odd, even) {
        (true, true) => String::new(),
        (true, false) => ".odd".into(),
        _ => ".even".into(),
    };
    let mut rec = VerificationRecord::new(format!("snplus.nonvanishing.k{k}{suffix}"), Some(F), Some(big_n));
    rec.input("k", k);
    if odd {
        let v = odd_nonvanishing_moment(engine, big_n, k)?;
        rec.value("odd", &v);
        rec.check("odd_positive", v.is_positive());
    }
    if even {
        let v = even_nonvanishing_moment(engine, big_n, k)?;
        rec.value("even", &v);
        rec.check("even_positive", v.is_positive());
    }
    Ok(rec)
}

/// Both nonvanishing moments at depth `k`; positivity implies nonvanishing.
pub fn snplus_nonvanishing(engine: &Engine, big_n: u32, k: usize) -> Result<VerificationRecord> {
    nonvanishing(engine, big_n, k, true, true)
}

pub fn snplus_nonvanishing_odd(engine: &Engine, big_n: u32, k: usize) -> Result<VerificationRecord> {
    nonvanishing(engine, big_n, k, true, false)
}

pub fn snplus_nonvanishing_even(engine: &Engine, big_n: u32, k: usize) -> Result<VerificationRecord> {
    nonvanishing(engine, big_n, k, false, true)
}

/// `phi = (1 - t) h + t eps` with `t = phi_1 / d_1`.
pub fn snplus_classify(big_n: u32, phi1: &Rational) -> Result<TCSDecomposition> {
    require_n(big_n, 6)?;
    let t = phi1 / d(big_n, 1)?;
    Ok(TCSDecomposition::from_weights(F, Rational::one() - &t, t, None))
}

/// `phi_n = d_n phi_1 / d_1`, the value forced on every label.
pub fn snplus_implied_value(big_n: u32, phi1: &Rational, n: u32) -> Result<Rational> {
    Ok(d(big_n, n)? * phi1 / d(big_n, 1)?)
}

/// The exponential identity linking degrees one to three fails as soon as
/// the first two rates differ.
pub fn snplus_semigroup_rigidity(engine: &Engine, big_n: u32, tol: f64) -> Result<VerificationRecord> {
    require_n(big_n, 6)?;
    let (a3, b3) = snplus_a3b3(engine, big_n)?;
    let (d1, d2, d3) = (d(big_n, 1)?, d(big_n, 2)?, d(big_n, 3)?);
    let mut rec = VerificationRecord::new("snplus.semigroup_rigidity", Some(F), Some(big_n));
    rec.input("tolerance", tol);
    rec.value("a_3", &a3);
    rec.value("b_3", &b3);
    rigidity_grid(&mut rec, "grid", &d3, (&a3, &d1), (&b3, &d2), tol);
    let f = rational::to_f64;
    let l3 = -f(&(&b3 * &d2)) / f(&d3);
    let r = exponential_residual((f(&d3), l3), &[(f(&a3), f(&d1), 0.0), (f(&b3), f(&d2), -1.0)], 1.0);
    rec.note("residual_rates_0_-1_at_t1", format!("{r:e}"));
    rec.check("rates_0_-1_violate_at_t1", r.abs() > tol);
    Ok(rec)
}

/// `h(p1 p2 p1 chi_2)` against its expression through the four-pair
/// kernel moment, and the value of `h(p1 p2 chi_2)`.
pub fn snplus_prop_a3_equiv(engine: &Engine, big_n: u32) -> Result<VerificationRecord> {
    require_n(big_n, 4)?;
    let n = rational::int(big_n as i64);
    let one = Rational::one();
    let x = engine.moment_by_kernel(F, big_n, &four_pairs(), &four_pairs())?;
    let triple = hc(engine, big_n, &[1, 2, 1], 2)?;
    let pair = hc(engine, big_n, &[1, 2], 2)?;
    let rhs = rational::int(2) * (&n - rational::int(1)) / (&n - rational::int(2)) * &x - rational::int(2) / (&n * (&n - rational::int(1)) * (&n - rational::int(2)));
    let target = &one / (&n * (&n - rational::int(1)));
    let excluded = &one / (rational::int(2) * (&n - rational::int(1)) * (&n - rational::int(1)));
    let mut rec = VerificationRecord::new("snplus.b3_criterion", Some(F), Some(big_n));
    rec.value("h(p1 p2 p1 chi_2)", &triple);
    rec.value("h(p1 p2 chi_2)", &pair);
    rec.value("h(pairs,pairs)", &x);
    rec.check("expression_through_pairs", triple == rhs);
    rec.check("h(p1 p2 chi_2) = 1/(N(N-1))", pair == target);
    rec.check("equivalence", (triple == target) == (x == excluded));
    rec.check("b_3_numerator_nonzero", triple != pair);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn classify_extremes() {
        assert_eq!(snplus_classify(6, &int(5)).unwrap().weight("counit"), int(1));
        assert_eq!(snplus_classify(6, &int(0)).unwrap().weight("haar"), int(1));
        assert!(!snplus_classify(6, &int(-1)).unwrap().is_valid());
        assert!(snplus_classify(6, &frac(5, 2)).unwrap().is_valid());
        assert_eq!(snplus_implied_value(6, &int(5), 2).unwrap(), int(19));
    }
}
