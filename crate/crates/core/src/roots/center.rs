use std::collections::BTreeSet;

use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{RootSystem, Weight};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Invariant factors `d_1 | d_2 | ...` of an integer matrix, units dropped.
pub fn smith_invariants(m: &[Vec<i64>]) -> Vec<i64> {
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        // Smallest nonzero entry of the remaining block as pivot.
        let Some((pi, pj)) = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| a[i][j] != 0)
            .min_by_key(|&(i, j)| a[i][j].abs())
        else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = Integer::div_floor(&a[i][t], &p);
                if q != 0 {
                    for j in t..cols {
                        a[i][j] -= q * a[t][j];
                    }
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = Integer::div_floor(&a[t][j], &p);
                if q != 0 {
                    for row in a.iter_mut().skip(t) {
                        row[j] -= q * row[t];
                    }
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if clean {
                // Pivot must divide the rest of the block.
                let bad = (t + 1..rows).flat_map(|i| (t + 1..cols).map(move |j| (i, j))).find(|&(i, j)| a[i][j] % p != 0);
                match bad {
                    None => break,
                    Some((i, _)) => {
                        for j in t..cols {
                            a[t][j] += a[i][j];
                        }
                        continue;
                    }
                }
            }
            let (mi, mj) = (t..rows)
                .flat_map(|i| (t..cols).map(move |j| (i, j)))
                .filter(|&(i, j)| (i == t || j == t) && a[i][j] != 0)
                .min_by_key(|&(i, j)| a[i][j].abs())
                .expect("pivot survives");
            a.swap(t, mi);
            for row in a.iter_mut() {
                row.swap(t, mj);
            }
        }
        diag.push(a[t][t].abs());
    }
    diag.into_iter().filter(|&d| d != 1).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CenterGroup {
    /// Cyclic factor orders; empty for the trivial group.
    pub invariants: Vec<i64>,
    pub order: usize,
    /// Points of the torus, coordinates in `[0, 1)`.
    #[serde(serialize_with = "ser_points")]
    pub points: Vec<Vec<Rational>>,
}

fn ser_points<S: Serializer>(pts: &[Vec<Rational>], s: S) -> std::result::Result<S::Ok, S::Error> {
    let strs: Vec<Vec<String>> = pts.iter().map(|p| p.iter().map(rational::display).collect()).collect();
    strs.serialize(s)
}

fn frac_part(q: &Rational) -> Rational {
    q - q.floor()
}

/// Torus points `x` with `<x, alpha_j>` integral for every simple root.
pub fn center_group(rs: &RootSystem) -> CenterGroup {
    let r = rs.rank();
    let transpose: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| rs.cartan[j][i]).collect()).collect();
    let invariants = smith_invariants(&transpose);
    let det = rs.determinant().abs();
    // x = A^{-T} m, and det * Z^r lies in the image of A^T.
    let inv_t = crate::matrix::bareiss_inverse(
        &transpose.iter().map(|row| row.iter().map(|&v| v.into()).collect()).collect::<Vec<_>>(),
    )
    .expect("finite type");
    let mut points = BTreeSet::new();
    let mut m = vec![0i64; r];
    loop {
        let x: Vec<Rational> = inv_t
            .iter()
            .map(|row| frac_part(&row.iter().zip(&m).fold(Rational::zero(), |acc, (a, &v)| acc + a * rational::int(v))))
            .collect();
        points.insert(x);
        let mut pos = 0;
        while pos < r && m[pos] + 1 >= det {
            m[pos] = 0;
            pos += 1;
        }
        if pos == r {
            break;
        }
        m[pos] += 1;
    }
    let order = points.len();
    CenterGroup { invariants, order, points: points.into_iter().collect() }
}

/// A point mass `p` at the torus point `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TorusAtom {
    #[serde(serialize_with = "ser_vec", deserialize_with = "de_vec")]
    pub x: Vec<Rational>,
    #[serde(serialize_with = "ser_one", deserialize_with = "de_one")]
    pub p: Rational,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Loose {
    Text(String),
    Int(i64),
    Float(f64),
}

impl Loose {
    fn to_rational(&self) -> Result<Rational> {
        match self {
            Loose::Text(s) => rational::parse(s),
            Loose::Int(v) => Ok(rational::int(*v)),
            Loose::Float(f) => rational::parse(&f.to_string()),
        }
    }
}

fn ser_one<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational::display(q))
}

fn ser_vec<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    v.iter().map(rational::display).collect::<Vec<_>>().serialize(s)
}

fn de_one<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
    Loose::deserialize(d)?.to_rational().map_err(serde::de::Error::custom)
}

fn de_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
    Vec::<Loose>::deserialize(d)?.iter().map(|l| l.to_rational().map_err(serde::de::Error::custom)).collect()
}

impl TorusAtom {
    pub fn new(x: Vec<Rational>, p: Rational) -> Self {
        TorusAtom { x, p }
    }

    /// `<x, lambda> mod 1`.
    pub fn pairing(&self, lambda: &[i64]) -> Rational {
        frac_part(&self.x.iter().zip(lambda).fold(Rational::zero(), |acc, (x, &l)| acc + x * rational::int(l)))
    }
}

fn validate_atoms(rs: &RootSystem, atoms: &[TorusAtom]) -> Result<()> {
    if atoms.is_empty() {
        return Err(Error::InvalidInput("measure has no atoms".into()));
    }
    let mut total = Rational::zero();
    for a in atoms {
        if a.x.len() != rs.rank() {
            return Err(Error::MismatchedSize(format!("atom of dimension {} for rank {}", a.x.len(), rs.rank())));
        }
        if !a.p.is_positive() || a.p > Rational::one() {
            return Err(Error::InvalidInput(format!("atom weight {} outside (0, 1]", rational::display(&a.p))));
        }
        total += &a.p;
    }
    if !total.is_one() {
        return Err(Error::InvalidInput(format!("atom weights sum to {}", rational::display(&total))));
    }
    Ok(())
}

pub fn is_central(rs: &RootSystem, x: &[Rational]) -> bool {
    (0..rs.rank()).all(|j| {
        let alpha = rs.simple_root(j);
        x.iter().zip(&alpha).fold(Rational::zero(), |acc, (x, &a)| acc + x * rational::int(a)).is_integer()
    })
}

/// Every atom sits on the center.
pub fn center_support_check(rs: &RootSystem, atoms: &[TorusAtom]) -> Result<bool> {
    validate_atoms(rs, atoms)?;
    Ok(atoms.iter().all(|a| is_central(rs, &a.x)))
}

/// Whether `lambda -> sum_k p_k exp(2 pi i <x_k, lambda>)` is constant on
/// each saturated set with highest weight in `[0, omega_bound]^r`.
pub fn condition_ii_check(rs: &RootSystem, atoms: &[TorusAtom], omega_bound: i64, tol: f64) -> Result<bool> {
    validate_atoms(rs, atoms)?;
    let r = rs.rank();
    let mut omega: Weight = vec![0; r];
    loop {
        let mut first: Option<Complex64> = None;
        for lambda in rs.saturated_set(&omega)? {
            let v: Complex64 = atoms
                .iter()
                .map(|a| {
                    let phase = 2.0 * std::f64::consts::PI * rational::to_f64(&a.pairing(&lambda));
                    Complex64::from_polar(rational::to_f64(&a.p), phase)
                })
                .sum();
            match first {
                None => first = Some(v),
                Some(f) if (v - f).norm() > tol => return Ok(false),
                _ => {}
            }
        }
        let mut pos = 0;
        while pos < r && omega[pos] >= omega_bound {
            omega[pos] = 0;
            pos += 1;
        }
        if pos == r {
            return Ok(true);
        }
        omega[pos] += 1;
    }
}

/// A random atomic measure; each atom is a center point or a point with
/// coordinates of denominator at most `max_den`, with equal odds.
pub fn random_atoms(rs: &RootSystem, center: &CenterGroup, rng: &mut ChaCha8Rng, max_den: i64) -> Vec<TorusAtom> {
    let count = rng.gen_range(1..=3);
    let raw: Vec<i64> = (0..count).map(|_| rng.gen_range(1..=6)).collect();
    let total: i64 = raw.iter().sum();
    raw.iter()
        .map(|&w| {
            let x = if rng.gen_bool(0.5) {
                center.points[rng.gen_range(0..center.points.len())].clone()
            } else {
                (0..rs.rank())
                    .map(|_| {
                        let d = rng.gen_range(1..=max_den);
                        rational::frac(rng.gen_range(0..d), d)
                    })
                    .collect()
            };
            TorusAtom::new(x, rational::frac(w, total))
        })
        .collect()
}

/// Compares the two tests on `count` seeded random measures and returns
/// the measures on which they disagree, with how many were central.
pub fn condition_ii_equivalence(
    rs: &RootSystem,
    count: usize,
    seed: u64,
    omega_bound: i64,
    tol: f64,
) -> Result<(usize, Vec<Vec<TorusAtom>>)> {
    let center = center_group(rs);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut central = 0;
    let mut disagree = Vec::new();
    for _ in 0..count {
        let atoms = random_atoms(rs, &center, &mut rng, 6);
        let a = condition_ii_check(rs, &atoms, omega_bound, tol)?;
        let b = center_support_check(rs, &atoms)?;
        central += b as usize;
        if a != b {
            disagree.push(atoms);
        }
    }
    Ok((central, disagree))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn smith_of_small_matrices() {
        assert_eq!(smith_invariants(&[vec![2]]), vec![2]);
        assert_eq!(smith_invariants(&[vec![2, -1], vec![-1, 2]]), vec![3]);
        assert_eq!(smith_invariants(&[vec![2, 0], vec![0, 2]]), vec![2, 2]);
        assert_eq!(smith_invariants(&[vec![2, 4], vec![6, 8]]), vec![2, 4]);
        assert_eq!(smith_invariants(&[vec![2, -1], vec![-3, 2]]), Vec::<i64>::new());
    }

    #[test]
    fn centers() {
        let a1 = RootSystem::parse("A1").unwrap();
        let c = center_group(&a1);
        assert_eq!(c.invariants, vec![2]);
        assert_eq!(c.points, vec![vec![frac(0, 1)], vec![frac(1, 2)]]);
        assert_eq!(center_group(&RootSystem::parse("A2").unwrap()).invariants, vec![3]);
        assert_eq!(center_group(&RootSystem::parse("G2").unwrap()).order, 1);
        assert_eq!(center_group(&RootSystem::parse("D4").unwrap()).invariants, vec![2, 2]);
        assert_eq!(center_group(&RootSystem::parse("A3").unwrap()).invariants, vec![4]);
    }

    #[test]
    fn condition_ii_examples() {
        let a1 = RootSystem::parse("A1").unwrap();
        let at = |x: Rational| vec![TorusAtom::new(vec![x], frac(1, 1))];
        assert!(condition_ii_check(&a1, &at(frac(0, 1)), 3, 1e-9).unwrap());
        assert!(condition_ii_check(&a1, &at(frac(1, 2)), 3, 1e-9).unwrap());
        assert!(!condition_ii_check(&a1, &at(frac(1, 4)), 2, 1e-9).unwrap());
        let a2 = RootSystem::parse("A2").unwrap();
        let third = vec![TorusAtom::new(vec![frac(1, 3), frac(0, 1)], frac(1, 1))];
        assert!(!center_support_check(&a2, &third).unwrap());
        assert!(!center_support_check(&a1, &at(frac(1, 3))).unwrap());
    }

    #[test]
    fn atom_json_accepts_numbers_and_strings() {
        let a: TorusAtom = serde_json::from_str(r#"{"x": ["1/2", 0.25], "p": 1}"#).unwrap();
        assert_eq!(a.x, vec![frac(1, 2), frac(1, 4)]);
        assert!(a.p.is_one());
    }
}
