//! Recursions, rigidity checks and extreme-point decompositions for
//! tracial central states.

pub mod appendix;
pub mod hnplus;
pub mod onplus;
pub mod snplus;
pub mod spot;

use std::collections::BTreeMap;
use std::fmt::Display;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::central::CentralFunctional;
use crate::error::Result;
use crate::rational::{self, Rational};
use crate::weingarten::QGFamily;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one verified claim. `checks` lists every individual test
/// that entered the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub claim_id: String,
    pub family: Option<QGFamily>,
    #[serde(rename = "N")]
    pub big_n: Option<u32>,
    pub inputs: BTreeMap<String, String>,
    pub computed_values: BTreeMap<String, String>,
    pub checks: BTreeMap<String, bool>,
    pub verdict: Verdict,
}

impl VerificationRecord {
    pub fn new(claim_id: impl Into<String>, family: Option<QGFamily>, big_n: Option<u32>) -> Self {
        VerificationRecord {
            claim_id: claim_id.into(),
            family,
            big_n,
            inputs: BTreeMap::new(),
            computed_values: BTreeMap::new(),
            checks: BTreeMap::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: impl Display) {
        self.inputs.insert(key.into(), value.to_string());
    }

    pub fn value(&mut self, key: impl Into<String>, q: &Rational) {
        self.computed_values.insert(key.into(), rational::display(q));
    }

    pub fn note(&mut self, key: impl Into<String>, value: impl Display) {
        self.computed_values.insert(key.into(), value.to_string());
    }

    /// Records a check; a single failure fails the record.
    pub fn check(&mut self, name: impl Into<String>, ok: bool) -> bool {
        let name = name.into();
        let entry = self.checks.entry(name).or_insert(true);
        *entry &= ok;
        if !ok {
            self.verdict = Verdict::Fail;
        }
        ok
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks.iter().filter(|(_, ok)| !**ok).map(|(k, _)| k.as_str()).collect()
    }
}

/// Convex weights on the Haar state and the two counits.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TCSDecomposition {
    pub family: QGFamily,
    #[serde(with = "rational::serde_rational_map")]
    pub coefficients: BTreeMap<String, Rational>,
    pub nonnegative: bool,
    pub sums_to_one: bool,
}

impl TCSDecomposition {
    fn from_weights(family: QGFamily, haar: Rational, counit: Rational, alt: Option<Rational>) -> Self {
        let mut coefficients = BTreeMap::new();
        coefficients.insert("haar".to_string(), haar);
        coefficients.insert("counit".to_string(), counit);
        if let Some(a) = alt {
            coefficients.insert("alt".to_string(), a);
        }
        let nonnegative = coefficients.values().all(|c| !c.is_negative());
        let sums_to_one = coefficients.values().fold(Rational::zero(), |s, c| s + c).is_one();
        TCSDecomposition { family, coefficients, nonnegative, sums_to_one }
    }

    pub fn is_valid(&self) -> bool {
        self.nonnegative && self.sums_to_one
    }

    pub fn weight(&self, key: &str) -> Rational {
        self.coefficients.get(key).cloned().unwrap_or_else(Rational::zero)
    }

    /// The mixture these weights describe.
    pub fn functional(&self, big_n: u32) -> Result<CentralFunctional> {
        CentralFunctional::mixture(self.family, big_n, self.weight("haar"), self.weight("counit"), self.weight("alt"))
    }
}

/// `(1 - mu) h + (mu + lambda)/2 eps + (mu - lambda)/2 eps_alt`; the
/// weights are nonnegative exactly when `|lambda| <= mu <= 1`.
pub(crate) fn three_point(family: QGFamily, lambda: &Rational, mu: &Rational) -> TCSDecomposition {
    let half = rational::frac(1, 2);
    TCSDecomposition::from_weights(
        family,
        Rational::one() - mu,
        (mu + lambda) * &half,
        Some((mu - lambda) * &half),
    )
}

/// Coefficients and supporting moments for one degree of a recursion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: String,
    #[serde(with = "rational::serde_rational_map")]
    pub coefficients: BTreeMap<String, Rational>,
    #[serde(with = "rational::serde_rational_map")]
    pub moments: BTreeMap<String, Rational>,
    pub flags: BTreeMap<String, bool>,
}

impl DegreeRecord {
    pub fn new(degree: impl Into<String>) -> Self {
        DegreeRecord {
            degree: degree.into(),
            coefficients: BTreeMap::new(),
            moments: BTreeMap::new(),
            flags: BTreeMap::new(),
        }
    }

    pub fn all_flags(&self) -> bool {
        self.flags.values().all(|f| *f)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecursionReport {
    pub family: QGFamily,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub degrees: Vec<DegreeRecord>,
}

impl RecursionReport {
    pub fn holds(&self) -> bool {
        self.degrees.iter().all(DegreeRecord::all_flags)
    }

    /// Folds the report into a verification record.
    pub fn to_record(&self, claim_id: &str) -> VerificationRecord {
        let mut rec = VerificationRecord::new(claim_id, Some(self.family), Some(self.big_n));
        for d in &self.degrees {
            for (k, v) in &d.coefficients {
                rec.value(format!("{}.{k}", d.degree), v);
            }
            for (k, v) in &d.moments {
                rec.value(format!("{}.{k}", d.degree), v);
            }
            for (k, ok) in &d.flags {
                rec.check(format!("{}.{k}", d.degree), *ok);
            }
        }
        rec
    }
}

/// Residual of `d e^{t l} = sum_k c_k d_k e^{t l_k}` at `t`.
pub fn exponential_residual(top: (f64, f64), terms: &[(f64, f64, f64)], t: f64) -> f64 {
    let lhs = top.0 * (t * top.1).exp();
    let rhs: f64 = terms.iter().map(|(c, d, l)| c * d * (t * l).exp()).sum();
    lhs - rhs
}

/// Sample times at which exponential identities are tested.
pub const SAMPLE_TIMES: [f64; 4] = [0.1, 0.5, 1.0, 2.0];

/// Grid test of the two-term exponential identity
/// `d e^{t l} = a d_a e^{t l_a} + b d_b e^{t l_b}` with `l` fixed by the
/// first-order term. Writes its checks into `rec` under `prefix`.
pub(crate) fn rigidity_grid(
    rec: &mut VerificationRecord,
    prefix: &str,
    d_top: &Rational,
    a: (&Rational, &Rational),
    b: (&Rational, &Rational),
    tol: f64,
) {
    let f = rational::to_f64;
    let (dt, ca, da, cb, db) = (f(d_top), f(a.0), f(a.1), f(b.0), f(b.1));
    let mut equal_ok = true;
    let mut distinct_fail = true;
    let mut worst_equal: f64 = 0.0;
    let mut smallest_distinct = f64::INFINITY;
    let grid: Vec<f64> = (0..=4).map(|k| -(k as f64) / 4.0).collect();
    for &la in &grid {
        for &lb in &grid {
            let top = (ca * da * la + cb * db * lb) / dt;
            let worst = SAMPLE_TIMES
                .iter()
                .map(|&t| exponential_residual((dt, top), &[(ca, da, la), (cb, db, lb)], t).abs())
                .fold(0.0, f64::max);
            if la == lb {
                worst_equal = worst_equal.max(worst);
                equal_ok &= worst <= tol;
            } else {
                smallest_distinct = smallest_distinct.min(worst);
                distinct_fail &= worst > tol;
            }
        }
    }
    rec.note(format!("{prefix}.max_residual_equal_rates"), format!("{worst_equal:e}"));
    rec.note(format!("{prefix}.min_residual_distinct_rates"), format!("{smallest_distinct:e}"));
    rec.check(format!("{prefix}.identity_holds_for_equal_rates"), equal_ok);
    rec.check(format!("{prefix}.identity_fails_for_distinct_rates"), distinct_fail);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_point_extremes() {
        let one = Rational::one();
        let zero = Rational::zero();
        let d = three_point(QGFamily::OPlus, &one, &one);
        assert_eq!(d.weight("counit"), one);
        let d = three_point(QGFamily::OPlus, &-one.clone(), &one);
        assert_eq!(d.weight("alt"), one);
        let d = three_point(QGFamily::OPlus, &zero, &zero);
        assert_eq!(d.weight("haar"), one);
        assert!(d.is_valid());
        let d = three_point(QGFamily::OPlus, &one, &zero);
        assert!(!d.is_valid());
    }

    #[test]
    fn record_fails_on_any_check() {
        let mut r = VerificationRecord::new("x", None, None);
        r.check("a", true);
        assert!(r.passed());
        r.check("b", false);
        r.check("b", true);
        assert!(!r.passed());
        assert_eq!(r.failed_checks(), vec!["b"]);
    }
}
