//! Checks shared by the three families: convex decompositions on a grid,
//! traciality of the reconstructed functionals, and the convolution
//! semigroup of central functionals.

use std::collections::HashMap;

use num_traits::Zero;

use super::{hnplus, onplus, snplus, TCSDecomposition, VerificationRecord};
use crate::central::{self, closed_form_semigroup, conv_exponential, CentralFunctional, GeneratorWord, Letter};
use crate::error::Result;
use crate::fusion::{self, BinWord, IrrLabel};
use crate::rational::{self, Rational};
use crate::weingarten::{Engine, QGFamily};

/// Grid step for the decomposition checks.
pub const GRID_STEP: (i64, i64) = (1, 4);

/// `(lambda, mu)` with `|lambda| <= mu <= 1` on the grid; `lambda` alone
/// for the symmetric family.
pub fn parameter_grid(family: QGFamily) -> Vec<(Rational, Rational)> {
    let (num, den) = GRID_STEP;
    let steps = den / num;
    let at = |k: i64| rational::frac(k * num, den);
    let mut out = Vec::new();
    for m in 0..=steps {
        if family == QGFamily::SPlus {
            out.push((at(m), Rational::zero()));
            continue;
        }
        for l in -m..=m {
            out.push((at(l), at(m)));
        }
    }
    out
}

/// Claim-id prefix of a family.
pub fn prefix(family: QGFamily) -> &'static str {
    match family {
        QGFamily::OPlus => "onplus",
        QGFamily::SPlus => "snplus",
        QGFamily::HPlus => "hnplus",
    }
}

/// Fundamental labels whose normalized values are the grid parameters.
fn probe_labels(family: QGFamily) -> (IrrLabel, Option<IrrLabel>) {
    match family {
        QGFamily::OPlus => (IrrLabel::Int(1), Some(IrrLabel::Int(2))),
        QGFamily::SPlus => (IrrLabel::Int(1), None),
        QGFamily::HPlus => (IrrLabel::word("1"), Some(IrrLabel::word("0"))),
    }
}

pub fn decompose(family: QGFamily, big_n: u32, lambda: &Rational, mu: &Rational) -> Result<TCSDecomposition> {
    let dim = |a: &IrrLabel| -> Result<Rational> { Ok(Rational::from_integer(fusion::dim(family, big_n, a)?)) };
    let (first, second) = probe_labels(family);
    match family {
        QGFamily::OPlus => {
            let second = second.expect("two probes");
            onplus::onplus_decompose(big_n, &(lambda * dim(&first)?), &(mu * dim(&second)?))
        }
        QGFamily::SPlus => snplus::snplus_classify(big_n, &(lambda * dim(&first)?)),
        QGFamily::HPlus => hnplus::hnplus_decompose(big_n, lambda, mu),
    }
}

/// Words in `u_ij`, `i, j` in `{1, 2}`, of length `1..=max_len`.
pub fn small_words(family: QGFamily, max_len: usize) -> Vec<GeneratorWord> {
    let letters: Vec<Letter> = [(1, 1), (1, 2), (2, 1), (2, 2)].iter().map(|&(i, j)| Letter::new(i, j)).collect();
    let mut out = Vec::new();
    let mut layer: Vec<Vec<Letter>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                letters.iter().map(move |l| {
                    let mut w = w.clone();
                    w.push(*l);
                    w
                })
            })
            .collect();
        out.extend(layer.iter().map(|w| GeneratorWord { family, letters: w.clone() }));
    }
    out
}

/// `(h, eps, eps_alt)` of a word.
fn extreme_values(engine: &Engine, big_n: u32, w: &GeneratorWord) -> Result<[Rational; 3]> {
    let Some(w) = w.normalized() else {
        return Ok([Rational::zero(), Rational::zero(), Rational::zero()]);
    };
    Ok([central::moment(engine, big_n, &w)?, w.counit(), w.alt_counit()])
}

/// Decompositions over the parameter grid: weights nonnegative and
/// summing to one, probe values reproduced, and zero traciality residual
/// on every pair of words with combined length at most `max_len`.
pub fn decomposition_spot(engine: &Engine, family: QGFamily, big_n: u32, max_len: usize) -> Result<VerificationRecord> {
    let mut rec = VerificationRecord::new(format!("{}.decomposition", prefix(family)), Some(family), Some(big_n));
    rec.input("grid_step", rational::display(&rational::frac(GRID_STEP.0, GRID_STEP.1)));
    rec.input("max_combined_length", max_len);
    let grid = parameter_grid(family);
    let (first, second) = probe_labels(family);
    let mut functionals = Vec::new();
    for (lambda, mu) in &grid {
        let dec = decompose(family, big_n, lambda, mu)?;
        rec.check("weights_nonnegative", dec.nonnegative);
        rec.check("weights_sum_to_one", dec.sums_to_one);
        let phi = dec.functional(big_n)?;
        rec.check("probe_values_reproduced", phi.normalized_value(&first)? == *lambda);
        if let Some(s) = &second {
            rec.check("probe_values_reproduced", phi.normalized_value(s)? == *mu);
        }
        functionals.push((dec, phi));
    }
    rec.note("grid_points", grid.len());

    // Every functional is a mixture, so its residual is the same mixture
    // of the residuals of the three extreme states.
    let mut cache: HashMap<GeneratorWord, [Rational; 3]> = HashMap::new();
    let mut value = |w: &GeneratorWord| -> Result<[Rational; 3]> {
        if let Some(v) = cache.get(w) {
            return Ok(v.clone());
        }
        let v = extreme_values(engine, big_n, w)?;
        cache.insert(w.clone(), v.clone());
        Ok(v)
    };
    let mut pairs = 0usize;
    let mut all_zero = true;
    for w in small_words(family, max_len) {
        let len = w.letters.len();
        for split in 1..len {
            let a = GeneratorWord { family, letters: w.letters[..split].to_vec() };
            let b = GeneratorWord { family, letters: w.letters[split..].to_vec() };
            let ab = value(&w)?;
            let ba = value(&b.concat(&a)?)?;
            let diff: Vec<Rational> = ab.iter().zip(&ba).map(|(x, y)| x - y).collect();
            pairs += 1;
            for (dec, _) in &functionals {
                let r = dec.weight("haar") * &diff[0] + dec.weight("counit") * &diff[1] + dec.weight("alt") * &diff[2];
                all_zero &= r.is_zero();
            }
        }
    }
    rec.note("word_pairs", pairs);
    rec.check("traciality_residual_zero", all_zero);

    // The character expansion must agree with the closed forms.
    let mut agree = true;
    let sample: Vec<&(TCSDecomposition, CentralFunctional)> =
        functionals.iter().step_by((functionals.len() / 4).max(1)).collect();
    for w in small_words(family, 3.min(max_len)) {
        for (_, phi) in &sample {
            agree &= central::eval(engine, phi, &w)? == central::eval_mixture_directly(engine, phi, &w)?;
        }
    }
    rec.check("evaluation_routes_agree", agree);
    Ok(rec)
}

/// Labels used for the semigroup check: up to 4 for the orthogonal and
/// symmetric families, words up to length 2 for the hyperoctahedral one.
pub fn semigroup_labels(family: QGFamily) -> Vec<IrrLabel> {
    match family {
        QGFamily::HPlus => BinWord::all_up_to(2).into_iter().map(IrrLabel::Word).collect(),
        _ => (0..=4).map(IrrLabel::Int).collect(),
    }
}

/// Truncated convolution exponentials against `d_a exp(t lambda_a)`.
pub fn semigroup_series(family: QGFamily, big_n: u32, trunc: usize, tol: f64) -> Result<VerificationRecord> {
    let mut rec = VerificationRecord::new(format!("{}.semigroup", prefix(family)), Some(family), Some(big_n));
    rec.input("truncation", trunc);
    rec.input("tolerance", tol);
    let mut states = vec![("haar", CentralFunctional::haar(family, big_n)?), ("counit", CentralFunctional::counit(family, big_n)?)];
    if family != QGFamily::SPlus {
        states.push(("alt", CentralFunctional::alt(family, big_n)?));
    }
    let mut worst = 0.0f64;
    for (name, phi) in &states {
        for a in semigroup_labels(family) {
            for t in [0.1, 1.0] {
                let series = conv_exponential(phi, t, &a, trunc)?;
                let closed = closed_form_semigroup(phi, t, &a)?;
                let err = (series - closed).abs();
                worst = worst.max(err);
                rec.check(format!("{name}_within_tolerance"), err <= tol);
            }
        }
    }
    rec.note("max_abs_error", format!("{worst:e}"));
    let one_label = IrrLabel::fundamental(family);
    let phi = CentralFunctional::haar(family, big_n)?;
    rec.note("haar_fundamental_t1", format!("{:.12}", conv_exponential(&phi, 1.0, &one_label, trunc)?));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Signed};

    #[test]
    fn grid_sizes() {
        assert_eq!(parameter_grid(QGFamily::OPlus).len(), 25);
        assert_eq!(parameter_grid(QGFamily::SPlus).len(), 5);
        assert!(parameter_grid(QGFamily::HPlus).iter().all(|(l, m)| l.abs() <= *m && *m <= Rational::one()));
    }

    #[test]
    fn word_counts() {
        assert_eq!(small_words(QGFamily::OPlus, 3).len(), 4 + 16 + 64);
    }

    #[test]
    fn semigroup_at_six() {
        let rec = semigroup_series(QGFamily::SPlus, 6, 20, 1e-9).unwrap();
        assert!(rec.passed(), "{:?}", rec.failed_checks());
    }
}
