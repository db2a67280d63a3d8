//! Words in the generators, central linear functionals and their
//! evaluation through character expectations.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fusion::{self, BinWord, FusionElement, IrrLabel, Var};
use crate::rational::{self, Rational};
use crate::weingarten::{Engine, QGFamily, Slot};

/// One generator `u_{row,col}^exp` (or `p_{row,col}` for the symmetric
/// family). Exponent 2 is only meaningful for the hyperoctahedral family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub row: u32,
    pub col: u32,
    #[serde(default = "one_u8")]
    pub exp: u8,
}

fn one_u8() -> u8 {
    1
}

impl Letter {
    pub fn new(row: u32, col: u32) -> Self {
        Letter { row, col, exp: 1 }
    }

    pub fn squared(row: u32, col: u32) -> Self {
        Letter { row, col, exp: 2 }
    }

    /// The diagonal generator `u_i = u_{ii}`.
    pub fn diag(i: u32) -> Self {
        Letter::new(i, i)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GeneratorWord {
    pub family: QGFamily,
    pub letters: Vec<Letter>,
}

impl GeneratorWord {
    pub fn new(family: QGFamily, letters: Vec<Letter>) -> Result<Self> {
        for l in &letters {
            let max_exp = if family == QGFamily::HPlus { 2 } else { 1 };
            if l.exp == 0 || l.exp > max_exp {
                return Err(Error::InvalidInput(format!("exponent {} not allowed for {family}", l.exp)));
            }
            if l.row == 0 || l.col == 0 {
                return Err(Error::InvalidInput("indices are 1-based".into()));
            }
        }
        Ok(GeneratorWord { family, letters })
    }

    /// Diagonal word from `(index, exponent)` pairs.
    pub fn diagonal(family: QGFamily, letters: &[(u32, u8)]) -> Result<Self> {
        GeneratorWord::new(family, letters.iter().map(|&(i, e)| Letter { row: i, col: i, exp: e }).collect())
    }

    pub fn empty(family: QGFamily) -> Self {
        GeneratorWord { family, letters: Vec::new() }
    }

    pub fn concat(&self, other: &GeneratorWord) -> Result<GeneratorWord> {
        if self.family != other.family {
            return Err(Error::FamilyMismatch { expected: self.family, found: other.family });
        }
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(GeneratorWord { family: self.family, letters })
    }

    /// Row and column index of every leg; a squared letter gives two legs.
    pub fn legs(&self) -> Vec<(u32, u32)> {
        self.letters
            .iter()
            .flat_map(|l| std::iter::repeat((l.row, l.col)).take(l.exp as usize))
            .collect()
    }

    pub fn leg_count(&self) -> usize {
        self.letters.iter().map(|l| l.exp as usize).sum()
    }

    /// Applies the magic-unitary relations of the symmetric and
    /// hyperoctahedral families to adjacent letters: equal letters merge,
    /// letters sharing exactly one index annihilate. `None` is the zero
    /// element. Orthogonal words are returned unchanged.
    pub fn normalized(&self) -> Option<GeneratorWord> {
        if self.family == QGFamily::OPlus {
            return Some(self.clone());
        }
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len());
        for &l in &self.letters {
            if let Some(top) = out.last_mut() {
                if top.row == l.row && top.col == l.col {
                    top.exp = match self.family {
                        QGFamily::SPlus => 1,
                        _ => (top.exp + l.exp - 1) % 2 + 1,
                    };
                    continue;
                }
                if top.row == l.row || top.col == l.col {
                    return None;
                }
            }
            out.push(l);
        }
        Some(GeneratorWord { family: self.family, letters: out })
    }

    /// The representation whose coefficients contain this word.
    pub fn carrier(&self) -> Result<FusionElement> {
        let mut acc = FusionElement::from([(IrrLabel::trivial(self.family), 1)]);
        for l in &self.letters {
            let factor = letter_carrier(self.family, l.exp);
            acc = fusion::multiply(self.family, &acc, &factor)?;
        }
        Ok(acc)
    }

    pub fn counit(&self) -> Rational {
        let diag = self.letters.iter().all(|l| l.row == l.col);
        if diag {
            Rational::one()
        } else {
            Rational::zero()
        }
    }

    /// Counit twisted by `u_{ij} -> -u_{ij}`.
    pub fn alt_counit(&self) -> Rational {
        let odd = self.letters.iter().map(|l| l.exp as usize).sum::<usize>() % 2 == 1;
        let c = self.counit();
        if odd {
            -c
        } else {
            c
        }
    }
}

fn letter_carrier(family: QGFamily, exp: u8) -> FusionElement {
    match (family, exp) {
        (QGFamily::OPlus, _) => FusionElement::from([(IrrLabel::Int(1), 1)]),
        (QGFamily::SPlus, _) => FusionElement::from([(IrrLabel::Int(0), 1), (IrrLabel::Int(1), 1)]),
        (QGFamily::HPlus, 1) => FusionElement::from([(IrrLabel::word("1"), 1)]),
        (QGFamily::HPlus, _) => FusionElement::from([(IrrLabel::word("0"), 1), (IrrLabel::word(""), 1)]),
    }
}

/// Haar state of a word.
pub fn moment(engine: &Engine, big_n: u32, x: &GeneratorWord) -> Result<Rational> {
    let legs = x.legs();
    let rows: Vec<u32> = legs.iter().map(|l| l.0).collect();
    let cols: Vec<u32> = legs.iter().map(|l| l.1).collect();
    engine.moment(x.family, big_n, &rows, &cols)
}

/// Trace factor appended after a word: one diagonal leg summed over its
/// index, or two legs sharing one summed index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Trace {
    Single,
    Squared,
}

/// `h(x T_1 ... T_k)` for trace factors `T`, memoized per tail.
struct TailMoments<'a> {
    engine: &'a Engine,
    big_n: u32,
    x: GeneratorWord,
    cache: HashMap<Vec<Trace>, Rational>,
}

impl<'a> TailMoments<'a> {
    fn new(engine: &'a Engine, big_n: u32, x: &GeneratorWord) -> Self {
        TailMoments { engine, big_n, x: x.clone(), cache: HashMap::new() }
    }

    fn tail(&mut self, tail: &[Trace]) -> Result<Rational> {
        if let Some(v) = self.cache.get(tail) {
            return Ok(v.clone());
        }
        let mut rows: Vec<Slot> = Vec::new();
        let mut cols: Vec<Slot> = Vec::new();
        for (r, c) in self.x.legs() {
            rows.push(Slot::Fixed(r));
            cols.push(Slot::Fixed(c));
        }
        for (v, t) in tail.iter().enumerate() {
            let copies = if *t == Trace::Single { 1 } else { 2 };
            for _ in 0..copies {
                rows.push(Slot::Free(v));
                cols.push(Slot::Free(v));
            }
        }
        let family = self.x.family;
        if rows.len() > self.engine.caps().get(family) {
            return Err(Error::CapExceeded {
                what: format!("{family} character expectation of combined length {}", rows.len()),
                n: rows.len(),
                cap: self.engine.caps().get(family),
            });
        }
        let value = self.engine.contract(family, self.big_n, &rows, &cols)?;
        self.cache.insert(tail.to_vec(), value.clone());
        Ok(value)
    }

    /// `h(x chi_a^*)`.
    fn character(&mut self, a: &IrrLabel) -> Result<Rational> {
        let poly = fusion::char_poly(self.x.family, a)?.reversed();
        let mut total = Rational::zero();
        for (mono, coeff) in &poly.terms {
            // X0 is the squared trace minus one: expand over which X0
            // factors keep their squared trace.
            let zeros: Vec<usize> = (0..mono.len()).filter(|&k| mono[k] == Var::X0).collect();
            for mask in 0u32..(1 << zeros.len()) {
                let mut tail = Vec::with_capacity(mono.len());
                let mut dropped = 0;
                for (k, v) in mono.iter().enumerate() {
                    match v {
                        Var::X1 => tail.push(Trace::Single),
                        Var::X0 => {
                            let bit = zeros.iter().position(|&z| z == k).unwrap();
                            if mask & (1 << bit) != 0 {
                                tail.push(Trace::Squared);
                            } else {
                                dropped += 1;
                            }
                        }
                    }
                }
                let mut term = self.tail(&tail)? * Rational::from_integer(coeff.clone());
                if dropped % 2 == 1 {
                    term = -term;
                }
                total += term;
            }
        }
        Ok(total)
    }
}

/// Largest leg count reached when pairing a word of `legs` legs with the
/// character of `a`.
fn combined_legs(legs: usize, a: &IrrLabel) -> usize {
    legs + match a {
        IrrLabel::Int(k) => *k as usize,
        IrrLabel::Word(w) => w.legs(),
    }
}

/// `h(x chi_a^*)`, computed by expanding the character into traces of the
/// fundamental representation.
pub fn word_character_moment(engine: &Engine, big_n: u32, x: &GeneratorWord, a: &IrrLabel) -> Result<Rational> {
    x.family.check_n(big_n)?;
    a.check(x.family)?;
    TailMoments::new(engine, big_n, x).character(a)
}

/// `h(x chi^k)` where `chi` is the character of the fundamental
/// representation itself (for S+ this includes the trivial summand).
pub fn trace_power_moment(engine: &Engine, big_n: u32, x: &GeneratorWord, k: usize) -> Result<Rational> {
    x.family.check_n(big_n)?;
    TailMoments::new(engine, big_n, x).tail(&vec![Trace::Single; k])
}

/// Labels whose characters are expanded when evaluating on `x`.
pub fn labels_up_to(family: QGFamily, bound: usize) -> Vec<IrrLabel> {
    match family {
        QGFamily::HPlus => BinWord::all_up_to(bound).into_iter().map(IrrLabel::Word).collect(),
        _ => (0..=bound as u32).map(IrrLabel::Int).collect(),
    }
}

/// `h(chi_a^* x)` for every label of size at most `label_bound`.
pub fn expectation_coeffs(
    engine: &Engine,
    big_n: u32,
    x: &GeneratorWord,
    label_bound: usize,
) -> Result<BTreeMap<IrrLabel, Rational>> {
    x.family.check_n(big_n)?;
    let legs = x.leg_count();
    let cap = engine.caps().get(x.family);
    let labels = labels_up_to(x.family, label_bound);
    if let Some(worst) = labels.iter().map(|a| combined_legs(legs, a)).max() {
        if worst > cap {
            return Err(Error::CapExceeded {
                what: format!("{} character expectations up to label size {label_bound}", x.family),
                n: worst,
                cap,
            });
        }
    }
    let mut tails = TailMoments::new(engine, big_n, x);
    labels.into_iter().map(|a| Ok((a.clone(), tails.character(&a)?))).collect()
}

/// How a central functional assigns values to labels without an explicit
/// override.
#[derive(Clone, Debug, PartialEq)]
pub enum Rule {
    /// 1 on the trivial label, 0 elsewhere.
    Haar,
    /// The dimension.
    Counit,
    /// `(-1)^{parity} d_a`.
    Alt,
    /// No default: every label must be given explicitly.
    Custom,
    /// `haar * h + counit * eps + alt * eps_alt`.
    Mixture { haar: Rational, counit: Rational, alt: Rational },
    /// `(phi * psi)_a = phi_a psi_a / d_a`.
    Convolution(Box<CentralFunctional>, Box<CentralFunctional>),
    /// `phi - eps`.
    MinusCounit(Box<CentralFunctional>),
}

/// A linear functional determined by its values `phi(chi_a)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CentralFunctional {
    pub family: QGFamily,
    pub big_n: u32,
    pub rule: Rule,
    pub overrides: BTreeMap<IrrLabel, Rational>,
}

impl CentralFunctional {
    fn with_rule(family: QGFamily, big_n: u32, rule: Rule) -> Result<Self> {
        family.check_n(big_n)?;
        Ok(CentralFunctional { family, big_n, rule, overrides: BTreeMap::new() })
    }

    pub fn haar(family: QGFamily, big_n: u32) -> Result<Self> {
        Self::with_rule(family, big_n, Rule::Haar)
    }

    pub fn counit(family: QGFamily, big_n: u32) -> Result<Self> {
        Self::with_rule(family, big_n, Rule::Counit)
    }

    /// Only the orthogonal and hyperoctahedral families have an
    /// alternating counit.
    pub fn alt(family: QGFamily, big_n: u32) -> Result<Self> {
        if family == QGFamily::SPlus {
            return Err(Error::InvalidInput("the symmetric family has no alternating counit".into()));
        }
        Self::with_rule(family, big_n, Rule::Alt)
    }

    pub fn custom(family: QGFamily, big_n: u32, values: BTreeMap<IrrLabel, Rational>) -> Result<Self> {
        for a in values.keys() {
            a.check(family)?;
        }
        let mut phi = Self::with_rule(family, big_n, Rule::Custom)?;
        phi.overrides = values;
        Ok(phi)
    }

    pub fn mixture(family: QGFamily, big_n: u32, haar: Rational, counit: Rational, alt: Rational) -> Result<Self> {
        if family == QGFamily::SPlus && !alt.is_zero() {
            return Err(Error::InvalidInput("the symmetric family has no alternating counit".into()));
        }
        Self::with_rule(family, big_n, Rule::Mixture { haar, counit, alt })
    }

    pub fn with_override(mut self, a: IrrLabel, v: Rational) -> Result<Self> {
        a.check(self.family)?;
        self.overrides.insert(a, v);
        Ok(self)
    }

    /// `phi(chi_a)`.
    pub fn value(&self, a: &IrrLabel) -> Result<Rational> {
        a.check(self.family)?;
        if let Some(v) = self.overrides.get(a) {
            return Ok(v.clone());
        }
        let d = || -> Result<Rational> { Ok(Rational::from_integer(fusion::dim(self.family, self.big_n, a)?)) };
        let sign = |v: Rational| if a.parity() == 1 { -v } else { v };
        Ok(match &self.rule {
            Rule::Haar => {
                if a.is_trivial() {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }
            Rule::Counit => d()?,
            Rule::Alt => sign(d()?),
            Rule::Custom => return Err(Error::MissingLabel(a.to_string())),
            Rule::Mixture { haar, counit, alt } => {
                let dim = d()?;
                let mut v = counit * &dim + alt * sign(dim);
                if a.is_trivial() {
                    v += haar;
                }
                v
            }
            Rule::Convolution(phi, psi) => phi.value(a)? * psi.value(a)? / d()?,
            Rule::MinusCounit(phi) => phi.value(a)? - d()?,
        })
    }

    pub fn normalized_value(&self, a: &IrrLabel) -> Result<Rational> {
        Ok(self.value(a)? / Rational::from_integer(fusion::dim(self.family, self.big_n, a)?))
    }
}

pub fn convolve(phi: &CentralFunctional, psi: &CentralFunctional) -> Result<CentralFunctional> {
    if phi.family != psi.family {
        return Err(Error::FamilyMismatch { expected: phi.family, found: psi.family });
    }
    if phi.big_n != psi.big_n {
        return Err(Error::MismatchedSize(format!("N = {} and N = {}", phi.big_n, psi.big_n)));
    }
    CentralFunctional::with_rule(phi.family, phi.big_n, Rule::Convolution(Box::new(phi.clone()), Box::new(psi.clone())))
}

/// `phi(x) = sum_a h(chi_a^* x) phi(chi_a)`, the sum running over the
/// irreducibles of the representation carrying `x`.
pub fn eval(engine: &Engine, phi: &CentralFunctional, x: &GeneratorWord) -> Result<Rational> {
    if phi.family != x.family {
        return Err(Error::FamilyMismatch { expected: phi.family, found: x.family });
    }
    let Some(x) = x.normalized() else {
        return Ok(Rational::zero());
    };
    let mut tails = TailMoments::new(engine, phi.big_n, &x);
    let mut total = Rational::zero();
    for a in x.carrier()?.keys() {
        let v = phi.value(a)?;
        if v.is_zero() {
            continue;
        }
        total += tails.character(a)? * v;
    }
    Ok(total)
}

/// Evaluation of a mixture of the Haar state and the two counits through
/// their closed forms. Used as an independent route for the same value.
pub fn eval_mixture_directly(engine: &Engine, phi: &CentralFunctional, x: &GeneratorWord) -> Result<Rational> {
    let Rule::Mixture { haar, counit, alt } = &phi.rule else {
        return Err(Error::InvalidInput("functional is not a mixture of extreme states".into()));
    };
    if !phi.overrides.is_empty() {
        return Err(Error::InvalidInput("mixture carries overrides".into()));
    }
    let Some(x) = x.normalized() else {
        return Ok(Rational::zero());
    };
    let mut total = counit * x.counit() + alt * x.alt_counit();
    if !haar.is_zero() {
        total += haar * moment(engine, phi.big_n, &x)?;
    }
    Ok(total)
}

/// `phi(ab) - phi(ba)`.
pub fn traciality_residual(
    engine: &Engine,
    phi: &CentralFunctional,
    a: &GeneratorWord,
    b: &GeneratorWord,
) -> Result<Rational> {
    Ok(eval(engine, phi, &a.concat(b)?)? - eval(engine, phi, &b.concat(a)?)?)
}

/// Truncated series `sum_n t^n (phi - eps)^{*n}(chi_a) / n!`.
pub fn conv_exponential(phi: &CentralFunctional, t: f64, a: &IrrLabel, trunc: usize) -> Result<f64> {
    let psi = CentralFunctional::with_rule(phi.family, phi.big_n, Rule::MinusCounit(Box::new(phi.clone())))?;
    let mut power = CentralFunctional::counit(phi.family, phi.big_n)?;
    let mut total = 0.0;
    let mut scale = 1.0;
    for k in 0..=trunc {
        if k > 0 {
            power = convolve(&power, &psi)?;
            scale *= t / k as f64;
        }
        total += scale * rational::to_f64(&power.value(a)?);
    }
    Ok(total)
}

/// `d_a exp(t (phi_a / d_a - 1))`.
pub fn closed_form_semigroup(phi: &CentralFunctional, t: f64, a: &IrrLabel) -> Result<f64> {
    let d = rational::to_f64(&Rational::from_integer(fusion::dim(phi.family, phi.big_n, a)?));
    let lambda = rational::to_f64(&phi.normalized_value(a)?) - 1.0;
    Ok(d * (t * lambda).exp())
}

/// Serialized form of the four basic kinds and of mixtures.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CentralFunctionalJson {
    pub family: QGFamily,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub kind: String,
    #[serde(default)]
    pub overrides: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, String>>,
}

impl CentralFunctional {
    pub fn to_json(&self) -> Result<CentralFunctionalJson> {
        let (kind, weights) = match &self.rule {
            Rule::Haar => ("haar", None),
            Rule::Counit => ("counit", None),
            Rule::Alt => ("alt", None),
            Rule::Custom => ("custom", None),
            Rule::Mixture { haar, counit, alt } => (
                "mixture",
                Some(BTreeMap::from([
                    ("haar".to_string(), rational::to_wire(haar)),
                    ("counit".to_string(), rational::to_wire(counit)),
                    ("alt".to_string(), rational::to_wire(alt)),
                ])),
            ),
            Rule::Convolution(..) | Rule::MinusCounit(..) => {
                return Err(Error::InvalidInput("derived functionals are not serializable".into()))
            }
        };
        Ok(CentralFunctionalJson {
            family: self.family,
            big_n: self.big_n,
            kind: kind.to_string(),
            overrides: self.overrides.iter().map(|(a, v)| (a.to_string(), rational::to_wire(v))).collect(),
            weights,
        })
    }

    pub fn from_json(j: &CentralFunctionalJson) -> Result<Self> {
        let mut phi = match j.kind.as_str() {
            "haar" => Self::haar(j.family, j.big_n)?,
            "counit" => Self::counit(j.family, j.big_n)?,
            "alt" => Self::alt(j.family, j.big_n)?,
            "custom" => Self::custom(j.family, j.big_n, BTreeMap::new())?,
            "mixture" => {
                let w = j.weights.as_ref().ok_or_else(|| Error::Parse("mixture without weights".into()))?;
                let get = |k: &str| w.get(k).map_or(Ok(Rational::zero()), |s| rational::parse(s));
                Self::mixture(j.family, j.big_n, get("haar")?, get("counit")?, get("alt")?)?
            }
            other => return Err(Error::Parse(format!("unknown functional kind {other:?}"))),
        };
        for (label, v) in &j.overrides {
            phi.overrides.insert(IrrLabel::parse(j.family, label)?, rational::parse(v)?);
        }
        Ok(phi)
    }
}
