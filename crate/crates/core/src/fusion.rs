//! Irreducible representations, fusion rules, dimensions and characters.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::weingarten::QGFamily;

/// A word over `{0, 1}`, ordered by length and then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BinWord(pub Vec<u8>);

impl BinWord {
    pub fn empty() -> Self {
        BinWord(Vec::new())
    }

    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if matches!(s, "" | "e" | "∅" | "()") {
            return Ok(BinWord::empty());
        }
        s.bytes()
            .map(|b| match b {
                b'0' => Ok(0),
                b'1' => Ok(1),
                _ => Err(Error::Parse(format!("not a binary word: {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(BinWord)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of ones, mod 2.
    pub fn parity(&self) -> u8 {
        self.0.iter().fold(0, |acc, &x| acc ^ x)
    }

    /// Letters reversed; each letter is its own inverse.
    pub fn bar(&self) -> Self {
        BinWord(self.0.iter().rev().copied().collect())
    }

    /// `a * b`: the last letter of `a` and the first letter of `b` fuse into
    /// their sum. `None` if either word is empty.
    pub fn star(&self, other: &Self) -> Option<Self> {
        let (last, head) = self.0.split_last()?;
        let (first, tail) = other.0.split_first()?;
        let mut v = head.to_vec();
        v.push(last ^ first);
        v.extend_from_slice(tail);
        Some(BinWord(v))
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        BinWord(v)
    }

    /// Number of legs of the trace monomial `X_{w_1} ... X_{w_k}`, where
    /// `X_0` is the sum of squared diagonal generators.
    pub fn legs(&self) -> usize {
        self.0.iter().map(|&x| if x == 1 { 1 } else { 2 }).sum()
    }

    /// All words of length at most `max_len`, in label order.
    pub fn all_up_to(max_len: usize) -> Vec<BinWord> {
        let mut out = vec![BinWord::empty()];
        let mut layer = vec![BinWord::empty()];
        for _ in 0..max_len {
            layer = layer
                .iter()
                .flat_map(|w| [0u8, 1].map(|x| w.concat(&BinWord(vec![x]))))
                .collect();
            out.extend(layer.iter().cloned());
        }
        out.sort();
        out
    }
}

impl Ord for BinWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BinWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &x in &self.0 {
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

/// Irreducible representation label: an integer for the orthogonal and
/// symmetric families, a binary word for the hyperoctahedral one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IrrLabel {
    Int(u32),
    Word(BinWord),
}

impl IrrLabel {
    pub fn word(s: &str) -> IrrLabel {
        IrrLabel::Word(BinWord::parse(s).expect("valid binary word"))
    }

    pub fn trivial(family: QGFamily) -> IrrLabel {
        match family {
            QGFamily::HPlus => IrrLabel::Word(BinWord::empty()),
            _ => IrrLabel::Int(0),
        }
    }

    pub fn fundamental(family: QGFamily) -> IrrLabel {
        match family {
            QGFamily::HPlus => IrrLabel::Word(BinWord(vec![1])),
            _ => IrrLabel::Int(1),
        }
    }

    pub fn parse(family: QGFamily, s: &str) -> Result<IrrLabel> {
        match family {
            QGFamily::HPlus => BinWord::parse(s).map(IrrLabel::Word),
            _ => s
                .trim()
                .parse::<u32>()
                .map(IrrLabel::Int)
                .map_err(|_| Error::InvalidLabel { family, label: s.to_string() }),
        }
    }

    pub fn check(&self, family: QGFamily) -> Result<()> {
        match (family, self) {
            (QGFamily::HPlus, IrrLabel::Word(_)) | (QGFamily::OPlus | QGFamily::SPlus, IrrLabel::Int(_)) => Ok(()),
            _ => Err(Error::InvalidLabel { family, label: self.to_string() }),
        }
    }

    /// Parity used by the alternating counit: `n mod 2` for integers, the
    /// number of ones mod 2 for words.
    pub fn parity(&self) -> u8 {
        match self {
            IrrLabel::Int(n) => (*n % 2) as u8,
            IrrLabel::Word(w) => w.parity(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            IrrLabel::Int(n) => *n == 0,
            IrrLabel::Word(w) => w.is_empty(),
        }
    }

    /// Label of the conjugate representation.
    pub fn conjugate(&self) -> IrrLabel {
        match self {
            IrrLabel::Int(n) => IrrLabel::Int(*n),
            IrrLabel::Word(w) => IrrLabel::Word(w.bar()),
        }
    }
}

impl fmt::Display for IrrLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrrLabel::Int(n) => write!(f, "{n}"),
            IrrLabel::Word(w) => write!(f, "{w}"),
        }
    }
}

impl Serialize for IrrLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Formal non-negative combination of irreducibles.
pub type FusionElement = BTreeMap<IrrLabel, u64>;

/// Decomposition of `u^a (x) u^b` into irreducibles.
pub fn fuse(family: QGFamily, a: &IrrLabel, b: &IrrLabel) -> Result<FusionElement> {
    a.check(family)?;
    b.check(family)?;
    let mut out = FusionElement::new();
    match (a, b) {
        (IrrLabel::Int(a), IrrLabel::Int(b)) => {
            let (lo, hi) = (a.abs_diff(*b), a + b);
            let step = if family == QGFamily::OPlus { 2 } else { 1 };
            for m in (lo..=hi).step_by(step) {
                out.insert(IrrLabel::Int(m), 1);
            }
        }
        (IrrLabel::Word(w), IrrLabel::Word(v)) => {
            // Sum over the splittings w = a z, v = z_bar b.
            for k in 0..=w.len().min(v.len()) {
                let (head, z) = w.0.split_at(w.len() - k);
                let z = BinWord(z.to_vec());
                if v.0[..k] != z.bar().0[..] {
                    continue;
                }
                let head = BinWord(head.to_vec());
                let tail = BinWord(v.0[k..].to_vec());
                *out.entry(IrrLabel::Word(head.concat(&tail))).or_insert(0) += 1;
                if let Some(s) = head.star(&tail) {
                    *out.entry(IrrLabel::Word(s)).or_insert(0) += 1;
                }
            }
        }
        _ => unreachable!("labels checked against the family"),
    }
    Ok(out)
}

/// Product of two fusion elements.
pub fn multiply(family: QGFamily, x: &FusionElement, y: &FusionElement) -> Result<FusionElement> {
    let mut out = FusionElement::new();
    for (a, ma) in x {
        for (b, mb) in y {
            for (c, mc) in fuse(family, a, b)? {
                *out.entry(c).or_insert(0) += ma * mb * mc;
            }
        }
    }
    Ok(out)
}

/// Left-to-right product `u^{a_1} (x) ... (x) u^{a_k}`; the trivial
/// representation for an empty list.
pub fn product_expand(family: QGFamily, labels: &[IrrLabel]) -> Result<FusionElement> {
    let mut acc = FusionElement::from([(IrrLabel::trivial(family), 1)]);
    for a in labels {
        acc = multiply(family, &acc, &FusionElement::from([(a.clone(), 1)]))?;
    }
    Ok(acc)
}

pub fn dim(family: QGFamily, big_n: u32, a: &IrrLabel) -> Result<BigInt> {
    family.check_n(big_n)?;
    a.check(family)?;
    let n = BigInt::from(big_n);
    Ok(match a {
        IrrLabel::Int(k) => {
            let (mut prev, mut cur, mult) = match family {
                QGFamily::OPlus => (BigInt::one(), n.clone(), n),
                _ => (BigInt::one(), &n - 1, &n - 2),
            };
            if *k == 0 {
                return Ok(prev);
            }
            for _ in 1..*k {
                let next = &mult * &cur - &prev;
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
        IrrLabel::Word(w) => word_dim(&n, w, &mut HashMap::new()),
    })
}

fn word_dim(n: &BigInt, w: &BinWord, memo: &mut HashMap<BinWord, BigInt>) -> BigInt {
    if let Some(d) = memo.get(w) {
        return d.clone();
    }
    let letter = |x: u8| if x == 1 { n.clone() } else { n - 1 };
    let d = match w.0.split_first() {
        None => BigInt::one(),
        Some((&x, rest)) if rest.is_empty() => letter(x),
        Some((&x, rest)) => {
            let rest = BinWord(rest.to_vec());
            let first = BinWord(vec![x]);
            let mut d = letter(x) * word_dim(n, &rest, memo);
            d -= word_dim(n, &first.star(&rest).unwrap(), memo);
            if rest.0[0] == x {
                d -= word_dim(n, &BinWord(rest.0[1..].to_vec()), memo);
            }
            d
        }
    };
    memo.insert(w.clone(), d.clone());
    d
}

/// Trace variable of a character polynomial. The orthogonal and symmetric
/// families use only `X1`: the fundamental character for the orthogonal
/// family and `chi = chi_1 + 1` for the symmetric one. For the
/// hyperoctahedral family `X1 = chi_1` and `X0 = chi_0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X0,
    X1,
}

/// Noncommutative polynomial with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharPolynomial {
    pub terms: BTreeMap<Vec<Var>, BigInt>,
}

impl CharPolynomial {
    pub fn one() -> Self {
        CharPolynomial::monomial(Vec::new())
    }

    pub fn monomial(m: Vec<Var>) -> Self {
        CharPolynomial { terms: BTreeMap::from([(m, BigInt::one())]) }
    }

    pub fn var(v: Var) -> Self {
        CharPolynomial::monomial(vec![v])
    }

    fn add_scaled(&mut self, other: &CharPolynomial, c: &BigInt) {
        for (m, k) in &other.terms {
            let e = self.terms.entry(m.clone()).or_insert_with(BigInt::zero);
            *e += k * c;
            if e.is_zero() {
                self.terms.remove(m);
            }
        }
    }

    pub fn sub(mut self, other: &CharPolynomial) -> Self {
        self.add_scaled(other, &-BigInt::one());
        self
    }

    /// `X_v * self`.
    pub fn times_var_left(&self, v: Var) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut m2 = Vec::with_capacity(m.len() + 1);
                m2.push(v);
                m2.extend_from_slice(m);
                (m2, c.clone())
            })
            .collect();
        CharPolynomial { terms }
    }

    /// The adjoint: every monomial reversed.
    pub fn reversed(&self) -> Self {
        let terms = self.terms.iter().map(|(m, c)| (m.iter().rev().copied().collect(), c.clone())).collect();
        CharPolynomial { terms }
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn evaluate(&self, x1: &Rational, x0: &Rational) -> Rational {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut term = Rational::from_integer(c.clone());
            for v in m {
                term *= match v {
                    Var::X1 => x1,
                    Var::X0 => x0,
                };
            }
            total += term;
        }
        total
    }

    /// Human-readable form, highest degree first.
    pub fn render(&self, family: QGFamily) -> String {
        let mut terms: Vec<(&Vec<Var>, &BigInt)> = self.terms.iter().collect();
        terms.sort_by(|a, b| b.0.len().cmp(&a.0.len()).then_with(|| b.0.cmp(a.0)));
        if terms.is_empty() {
            return "0".into();
        }
        let name = |m: &[Var]| -> String {
            match family {
                QGFamily::HPlus => m
                    .iter()
                    .map(|v| match v {
                        Var::X1 => "X1",
                        Var::X0 => "X0",
                    })
                    .collect(),
                _ => {
                    let x = if family == QGFamily::SPlus { "chi" } else { "X" };
                    match m.len() {
                        1 => x.to_string(),
                        k => format!("{x}^{k}"),
                    }
                }
            }
        };
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let negative = c.sign() == num_bigint::Sign::Minus;
            let mag = if negative { -(*c).clone() } else { (*c).clone() };
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if m.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                }
                out.push_str(&name(m));
            }
        }
        out
    }
}

/// Character of `u^a` as a polynomial in the trace variables.
pub fn char_poly(family: QGFamily, a: &IrrLabel) -> Result<CharPolynomial> {
    a.check(family)?;
    Ok(match a {
        IrrLabel::Int(k) => {
            let x = CharPolynomial::var(Var::X1);
            let (mut prev, mut cur, shift) = match family {
                QGFamily::OPlus => (CharPolynomial::one(), x, BigInt::zero()),
                _ => (CharPolynomial::one(), x.sub(&CharPolynomial::one()), BigInt::from(2)),
            };
            if *k == 0 {
                return Ok(prev);
            }
            for _ in 1..*k {
                let mut next = cur.times_var_left(Var::X1);
                next.add_scaled(&cur, &-shift.clone());
                let next = next.sub(&prev);
                prev = std::mem::replace(&mut cur, next);
            }
            cur
        }
        IrrLabel::Word(w) => word_poly(w, &mut HashMap::new()),
    })
}

fn word_poly(w: &BinWord, memo: &mut HashMap<BinWord, CharPolynomial>) -> CharPolynomial {
    if let Some(p) = memo.get(w) {
        return p.clone();
    }
    let var = |x: u8| if x == 1 { Var::X1 } else { Var::X0 };
    let p = match w.0.split_first() {
        None => CharPolynomial::one(),
        Some((&x, rest)) if rest.is_empty() => CharPolynomial::var(var(x)),
        Some((&x, rest)) => {
            // u^x (x) u^rest = u^{x rest} + u^{x * rest} + [rest = x b] u^b
            let rest = BinWord(rest.to_vec());
            let first = BinWord(vec![x]);
            let mut p = word_poly(&rest, memo).times_var_left(var(x));
            p = p.sub(&word_poly(&first.star(&rest).unwrap(), memo));
            if rest.0[0] == x {
                p = p.sub(&word_poly(&BinWord(rest.0[1..].to_vec()), memo));
            }
            p
        }
    };
    memo.insert(w.clone(), p.clone());
    p
}

/// Values of the trace variables under the counit.
pub fn counit_trace_values(family: QGFamily, big_n: u32) -> (Rational, Rational) {
    let n = Rational::from_integer(BigInt::from(big_n));
    match family {
        QGFamily::OPlus | QGFamily::SPlus => (n, Rational::zero()),
        QGFamily::HPlus => (n.clone(), n - Rational::one()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> IrrLabel {
        IrrLabel::word(s)
    }

    #[test]
    fn hyperoctahedral_fundamental_square() {
        let got = fuse(QGFamily::HPlus, &w("1"), &w("1")).unwrap();
        assert_eq!(got, FusionElement::from([(w("11"), 1), (w("0"), 1), (w(""), 1)]));
    }

    #[test]
    fn orthogonal_and_symmetric_rules() {
        let o = fuse(QGFamily::OPlus, &IrrLabel::Int(1), &IrrLabel::Int(3)).unwrap();
        assert_eq!(o, FusionElement::from([(IrrLabel::Int(2), 1), (IrrLabel::Int(4), 1)]));
        let s = fuse(QGFamily::SPlus, &IrrLabel::Int(1), &IrrLabel::Int(3)).unwrap();
        assert_eq!(s.keys().cloned().collect::<Vec<_>>(), (2..=4).map(IrrLabel::Int).collect::<Vec<_>>());
    }

    #[test]
    fn polynomial_examples() {
        assert_eq!(char_poly(QGFamily::SPlus, &IrrLabel::Int(2)).unwrap().render(QGFamily::SPlus), "chi^2 - 3chi + 1");
        assert_eq!(char_poly(QGFamily::HPlus, &w("11")).unwrap().render(QGFamily::HPlus), "X1X1 - X0 - 1");
        assert_eq!(char_poly(QGFamily::OPlus, &IrrLabel::Int(3)).unwrap().render(QGFamily::OPlus), "X^3 - 2X");
    }

    #[test]
    fn small_dimensions() {
        assert_eq!(dim(QGFamily::OPlus, 5, &IrrLabel::Int(3)).unwrap(), BigInt::from(115));
        assert_eq!(dim(QGFamily::SPlus, 6, &IrrLabel::Int(2)).unwrap(), BigInt::from(19));
        assert_eq!(dim(QGFamily::HPlus, 6, &w("101")).unwrap(), BigInt::from(114));
        assert_eq!(dim(QGFamily::HPlus, 6, &w("110")).unwrap(), BigInt::from(120));
    }

    #[test]
    fn label_parsing_respects_family() {
        assert!(IrrLabel::parse(QGFamily::HPlus, "102").is_err());
        assert!(IrrLabel::Int(2).check(QGFamily::HPlus).is_err());
        assert_eq!(IrrLabel::parse(QGFamily::SPlus, "4").unwrap(), IrrLabel::Int(4));
    }
}
