use std::collections::{BTreeMap, BTreeSet};

use super::{RootSystem, Weight};
use crate::error::{Error, Result};
use crate::partition::UnionFind;
use crate::rational::Rational;
use crate::tcs::VerificationRecord;

/// How many times the slack may grow by `radius` before giving up.
const SLACK_STEPS: i64 = 3;
const WINDOW_CAP: usize = 100_000;

#[derive(Clone, Debug)]
pub struct EquivOutcome {
    pub slack: i64,
    pub window_size: usize,
    pub components: usize,
    pub cosets: usize,
    pub components_within_cosets: bool,
    pub cosets_connected: bool,
}

fn coset_key(rs: &RootSystem, l: &[i64]) -> Vec<Rational> {
    rs.root_coordinates(l).iter().map(|q| q - q.floor()).collect()
}

fn boxed(r: usize, lo: i64, hi: i64) -> Vec<Weight> {
    let mut out = Vec::new();
    let mut cur = vec![lo; r];
    loop {
        out.push(cur.clone());
        let mut pos = 0;
        while pos < r && cur[pos] == hi {
            cur[pos] = lo;
            pos += 1;
        }
        if pos == r {
            return out;
        }
        cur[pos] += 1;
    }
}

/// Links window weights that share a saturated set whose highest weight
/// lies in `[0, radius + slack]^r`, then compares the components with
/// root-lattice cosets.
pub fn equivalence_classes(rs: &RootSystem, radius: i64, slack: i64) -> Result<EquivOutcome> {
    if radius < 1 {
        return Err(Error::InvalidInput("radius must be positive".into()));
    }
    let r = rs.rank();
    let side = (2 * radius + 1) as usize;
    let window_size = side.checked_pow(r as u32).filter(|&n| n <= WINDOW_CAP).ok_or(Error::CapExceeded {
        what: "weight window".into(),
        n: usize::MAX,
        cap: WINDOW_CAP,
    })?;
    let index = |l: &[i64]| -> Option<usize> {
        let mut k = 0;
        for &v in l.iter().rev() {
            if v.abs() > radius {
                return None;
            }
            k = k * side + (v + radius) as usize;
        }
        Some(k)
    };
    let window = boxed(r, -radius, radius);
    let mut uf = UnionFind::new(window_size);
    for omega in boxed(r, 0, radius + slack) {
        let hits: Vec<usize> = rs.saturated_set(&omega)?.iter().filter_map(|l| index(l)).collect();
        for w in hits.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut by_component: BTreeMap<usize, BTreeSet<Vec<Rational>>> = BTreeMap::new();
    let mut by_coset: BTreeMap<Vec<Rational>, BTreeSet<usize>> = BTreeMap::new();
    for l in &window {
        let root = uf.find(index(l).expect("window weight"));
        let key = coset_key(rs, l);
        by_component.entry(root).or_default().insert(key.clone());
        by_coset.entry(key).or_default().insert(root);
    }
    Ok(EquivOutcome {
        slack,
        window_size,
        components: by_component.len(),
        cosets: by_coset.len(),
        components_within_cosets: by_component.values().all(|s| s.len() == 1),
        cosets_connected: by_coset.values().all(|s| s.len() == 1),
    })
}

/// Window weights are linked through shared saturated sets exactly when
/// they differ by an element of the root lattice.
pub fn lemma_equiv_check(rs: &RootSystem, radius: i64) -> Result<VerificationRecord> {
    let mut slack = 2 * radius;
    let mut outcome = equivalence_classes(rs, radius, slack)?;
    for _ in 0..SLACK_STEPS {
        if outcome.cosets_connected {
            break;
        }
        slack += radius;
        outcome = equivalence_classes(rs, radius, slack)?;
    }
    let mut rec = VerificationRecord::new("rootsys.equivalence", None, None);
    rec.input("type", &rs.kind);
    rec.input("radius", radius);
    rec.note("slack", outcome.slack);
    rec.note("window_size", outcome.window_size);
    rec.note("components", outcome.components);
    rec.note("cosets", outcome.cosets);
    rec.check("components_within_cosets", outcome.components_within_cosets);
    rec.check("cosets_connected", outcome.cosets_connected);
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn component_counts() {
        for (t, radius, n) in [("A1", 3, 2), ("A2", 2, 3), ("G2", 2, 1)] {
            let rs = RootSystem::parse(t).unwrap();
            let rec = lemma_equiv_check(&rs, radius).unwrap();
            assert!(rec.passed(), "{t}: {:?}", rec.failed_checks());
            assert_eq!(rec.computed_values["components"], n.to_string(), "{t}");
        }
    }

    #[test]
    fn no_slack_may_underconnect() {
        let rs = RootSystem::parse("A1").unwrap();
        let o = equivalence_classes(&rs, 3, 0).unwrap();
        assert!(o.components_within_cosets);
    }
}
