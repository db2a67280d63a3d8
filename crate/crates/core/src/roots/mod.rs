//! Weight lattices of finite root systems: Weyl groups, saturated sets,
//! root-lattice cosets and the center as a subgroup of the torus.

mod center;
pub mod checks;
mod equiv;
mod suq2;

pub use center::{
    center_group, center_support_check, is_central, random_atoms, condition_ii_check, condition_ii_equivalence, smith_invariants,
    CenterGroup, TorusAtom,
};
pub use equiv::{lemma_equiv_check, EquivOutcome};
pub use suq2::{suq2_psd, suq2_psd_f64, toeplitz};

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Coordinates in the basis of fundamental weights.
pub type Weight = Vec<i64>;

/// Largest Weyl group that will be enumerated.
pub const WEYL_CAP: usize = 1152;
/// Largest saturated set that will be enumerated.
pub const ORBIT_CAP: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RootType {
    A(usize),
    B(usize),
    C(usize),
    D(usize),
    G2,
    Custom,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootType::A(n) => write!(f, "A{n}"),
            RootType::B(n) => write!(f, "B{n}"),
            RootType::C(n) => write!(f, "C{n}"),
            RootType::D(n) => write!(f, "D{n}"),
            RootType::G2 => write!(f, "G2"),
            RootType::Custom => write!(f, "custom"),
        }
    }
}

impl FromStr for RootType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown root system type {s:?}"));
        if s.eq_ignore_ascii_case("g2") {
            return Ok(RootType::G2);
        }
        let (head, rank) = s.split_at(1.min(s.len()));
        let rank: usize = rank.parse().map_err(|_| bad())?;
        let t = match head.to_ascii_uppercase().as_str() {
            "A" if (1..=4).contains(&rank) => RootType::A(rank),
            "B" if (2..=4).contains(&rank) => RootType::B(rank),
            "C" if (2..=4).contains(&rank) => RootType::C(rank),
            "D" if rank == 4 => RootType::D(rank),
            _ => return Err(bad()),
        };
        Ok(t)
    }
}

/// A finite-type Cartan matrix `a_ij = <alpha_i^vee, alpha_j>`; the simple
/// root `alpha_j` is column `j` in fundamental-weight coordinates.
#[derive(Debug)]
pub struct RootSystem {
    pub kind: RootType,
    pub cartan: Vec<Vec<i64>>,
    weyl: OnceLock<Vec<Vec<Vec<i64>>>>,
    inverse: Vec<Vec<Rational>>,
}

impl Clone for RootSystem {
    fn clone(&self) -> Self {
        RootSystem::from_cartan(self.kind.clone(), self.cartan.clone()).expect("already validated")
    }
}

fn chain(rank: usize) -> Vec<Vec<i64>> {
    let mut a = vec![vec![0; rank]; rank];
    for i in 0..rank {
        a[i][i] = 2;
        if i + 1 < rank {
            a[i][i + 1] = -1;
            a[i + 1][i] = -1;
        }
    }
    a
}

impl RootSystem {
    pub fn of_type(kind: RootType) -> Result<Self> {
        let cartan = match &kind {
            RootType::A(n) => chain(*n),
            RootType::B(n) => {
                let mut a = chain(*n);
                a[n - 1][n - 2] = -2;
                a
            }
            RootType::C(n) => {
                let mut a = chain(*n);
                a[n - 2][n - 1] = -2;
                a
            }
            RootType::D(n) => {
                let mut a = chain(*n);
                a[n - 2][n - 1] = 0;
                a[n - 1][n - 2] = 0;
                a[n - 3][n - 1] = -1;
                a[n - 1][n - 3] = -1;
                a
            }
            RootType::G2 => vec![vec![2, -1], vec![-3, 2]],
            RootType::Custom => return Err(Error::InvalidCartan("custom type needs an explicit matrix".into())),
        };
        RootSystem::from_cartan(kind, cartan)
    }

    pub fn parse(s: &str) -> Result<Self> {
        RootSystem::of_type(s.parse()?)
    }

    pub fn custom(cartan: Vec<Vec<i64>>) -> Result<Self> {
        RootSystem::from_cartan(RootType::Custom, cartan)
    }

    fn from_cartan(kind: RootType, cartan: Vec<Vec<i64>>) -> Result<Self> {
        validate(&cartan)?;
        let inverse = crate::matrix::bareiss_inverse(
            &cartan.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect::<Vec<_>>(),
        )
        .ok_or_else(|| Error::InvalidCartan("singular".into()))?;
        Ok(RootSystem { kind, cartan, weyl: OnceLock::new(), inverse })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    /// `alpha_j` in fundamental-weight coordinates.
    pub fn simple_root(&self, j: usize) -> Weight {
        self.cartan.iter().map(|row| row[j]).collect()
    }

    pub fn determinant(&self) -> i64 {
        let m: Vec<Vec<num_bigint::BigInt>> =
            self.cartan.iter().map(|r| r.iter().map(|&v| v.into()).collect()).collect();
        let d = crate::matrix::bareiss_det(&m);
        i64::try_from(d).expect("small determinant")
    }

    /// `s_i(l) = l - l_i alpha_i`.
    pub fn reflect(&self, i: usize, l: &[i64]) -> Weight {
        let c = l[i];
        l.iter().enumerate().map(|(k, &v)| v - c * self.cartan[k][i]).collect()
    }

    /// All Weyl group elements as matrices on fundamental-weight
    /// coordinates, identity first.
    pub fn weyl_group(&self) -> Result<&Vec<Vec<Vec<i64>>>> {
        if let Some(w) = self.weyl.get() {
            return Ok(w);
        }
        let r = self.rank();
        let identity: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
        let gens: Vec<Vec<Vec<i64>>> = (0..r)
            .map(|i| {
                let mut s = identity.clone();
                for (k, row) in s.iter_mut().enumerate() {
                    row[i] -= self.cartan[k][i];
                }
                s
            })
            .collect();
        let mut seen: HashSet<Vec<Vec<i64>>> = HashSet::from([identity.clone()]);
        let mut order = vec![identity.clone()];
        let mut queue = VecDeque::from([identity]);
        while let Some(m) = queue.pop_front() {
            for g in &gens {
                let next = matmul(g, &m);
                if seen.insert(next.clone()) {
                    if seen.len() > WEYL_CAP {
                        return Err(Error::CapExceeded { what: "Weyl group".into(), n: seen.len(), cap: WEYL_CAP });
                    }
                    order.push(next.clone());
                    queue.push_back(next);
                }
            }
        }
        Ok(self.weyl.get_or_init(|| order))
    }

    pub fn is_dominant(l: &[i64]) -> bool {
        l.iter().all(|&v| v >= 0)
    }

    pub fn dominant_rep(&self, l: &[i64]) -> Weight {
        let mut cur = l.to_vec();
        while let Some(i) = cur.iter().position(|&v| v < 0) {
            cur = self.reflect(i, &cur);
        }
        cur
    }

    /// Weyl orbit, by closure under simple reflections.
    pub fn orbit(&self, l: &[i64]) -> Result<BTreeSet<Weight>> {
        let mut seen = BTreeSet::from([l.to_vec()]);
        let mut queue = VecDeque::from([l.to_vec()]);
        while let Some(v) = queue.pop_front() {
            for i in 0..self.rank() {
                if v[i] == 0 {
                    continue;
                }
                let next = self.reflect(i, &v);
                if seen.insert(next.clone()) {
                    if seen.len() > ORBIT_CAP {
                        return Err(Error::CapExceeded { what: "Weyl orbit".into(), n: seen.len(), cap: ORBIT_CAP });
                    }
                    queue.push_back(next);
                }
            }
        }
        Ok(seen)
    }

    /// `A^{-1} l`, the coordinates of `l` in the basis of simple roots.
    pub fn root_coordinates(&self, l: &[i64]) -> Vec<Rational> {
        self.inverse
            .iter()
            .map(|row| row.iter().zip(l).fold(Rational::zero(), |acc, (a, &v)| acc + a * rational::int(v)))
            .collect()
    }

    pub fn in_root_lattice(&self, l: &[i64]) -> bool {
        self.root_coordinates(l).iter().all(|q| q.is_integer())
    }

    /// Dominant weights `mu` with `omega - mu` a nonnegative integer
    /// combination of simple roots.
    pub fn dominant_below(&self, omega: &[i64]) -> Result<Vec<Weight>> {
        if !RootSystem::is_dominant(omega) {
            return Err(Error::InvalidInput(format!("weight {omega:?} is not dominant")));
        }
        let bounds: Vec<i64> = self
            .root_coordinates(omega)
            .iter()
            .map(|q| q.floor().to_integer().try_into().expect("small coordinate"))
            .collect();
        let r = self.rank();
        let mut out = Vec::new();
        let mut k = vec![0i64; r];
        loop {
            let mu: Weight = (0..r).map(|i| omega[i] - (0..r).map(|j| self.cartan[i][j] * k[j]).sum::<i64>()).collect();
            if RootSystem::is_dominant(&mu) {
                out.push(mu);
            }
            let mut pos = 0;
            loop {
                if pos == r {
                    out.sort();
                    return Ok(out);
                }
                if k[pos] < bounds[pos] {
                    k[pos] += 1;
                    break;
                }
                k[pos] = 0;
                pos += 1;
            }
        }
    }

    /// The saturated set of the highest weight `omega`.
    pub fn saturated_set(&self, omega: &[i64]) -> Result<BTreeSet<Weight>> {
        let mut out = BTreeSet::new();
        for mu in self.dominant_below(omega)? {
            out.extend(self.orbit(&mu)?);
            if out.len() > ORBIT_CAP {
                return Err(Error::CapExceeded { what: "saturated set".into(), n: out.len(), cap: ORBIT_CAP });
            }
        }
        Ok(out)
    }
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = a.len();
    (0..r).map(|i| (0..r).map(|j| (0..r).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn validate(a: &[Vec<i64>]) -> Result<()> {
    let r = a.len();
    let bad = |m: &str| Err(Error::InvalidCartan(m.to_string()));
    if r == 0 || a.iter().any(|row| row.len() != r) {
        return bad("must be a nonempty square matrix");
    }
    for i in 0..r {
        if a[i][i] != 2 {
            return bad("diagonal entries must be 2");
        }
        for j in 0..r {
            if i != j && a[i][j] > 0 {
                return bad("off-diagonal entries must be nonpositive");
            }
            if (a[i][j] == 0) != (a[j][i] == 0) {
                return bad("zero pattern must be symmetric");
            }
        }
    }
    // d_i a_ij = d_j a_ji, propagated along the Dynkin graph.
    let mut d: Vec<Option<Rational>> = vec![None; r];
    for start in 0..r {
        if d[start].is_some() {
            continue;
        }
        d[start] = Some(rational::int(1));
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..r {
                if i == j || a[i][j] == 0 {
                    continue;
                }
                let dj = d[i].clone().unwrap() * rational::int(a[i][j]) / rational::int(a[j][i]);
                match &d[j] {
                    None => {
                        d[j] = Some(dj);
                        queue.push_back(j);
                    }
                    Some(existing) if *existing != dj => return bad("not symmetrizable"),
                    _ => {}
                }
            }
        }
    }
    for k in 1..=r {
        let minor: Vec<Vec<num_bigint::BigInt>> =
            (0..k).map(|i| (0..k).map(|j| a[i][j].into()).collect()).collect();
        if !crate::matrix::bareiss_det(&minor).is_positive() {
            return bad("not of finite type");
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weyl_orders() {
        for (t, n) in [("A1", 2), ("A2", 6), ("B2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("C3", 48), ("D4", 192)] {
            assert_eq!(RootSystem::parse(t).unwrap().weyl_group().unwrap().len(), n, "{t}");
        }
    }

    #[test]
    fn dominant_and_lattice() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(a1.dominant_rep(&[-3]), vec![3]);
        assert!(a1.in_root_lattice(&[2]));
        assert!(!a1.in_root_lattice(&[1]));
        let a2 = RootSystem::parse("A2").unwrap();
        assert!(a2.in_root_lattice(&[1, 1]));
        let d = a2.dominant_rep(&[-1, 2]);
        assert!(RootSystem::is_dominant(&d));
        assert!(a2.orbit(&[-1, 2]).unwrap().contains(&d));
    }

    #[test]
    fn saturated_small() {
        let a1 = RootSystem::parse("A1").unwrap();
        assert_eq!(a1.saturated_set(&[2]).unwrap(), BTreeSet::from([vec![-2], vec![0], vec![2]]));
        assert_eq!(a1.saturated_set(&[1]).unwrap(), BTreeSet::from([vec![-1], vec![1]]));
        let g2 = RootSystem::parse("G2").unwrap();
        assert_eq!(g2.saturated_set(&[0, 0]).unwrap(), BTreeSet::from([vec![0, 0]]));
    }

    #[test]
    fn rejects_bad_cartan() {
        assert!(RootSystem::custom(vec![vec![2, -1], vec![0, 2]]).is_err());
        assert!(RootSystem::custom(vec![vec![2, -2], vec![-2, 2]]).is_err());
        assert!(RootSystem::custom(vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(RootSystem::custom(vec![vec![2, -1], vec![-1, 2]]).is_ok());
    }
}
