use std::collections::BTreeSet;

use num_traits::Signed;

use super::{center_group, condition_ii_equivalence, is_central, suq2_psd, suq2_psd_f64, RootSystem, RootType, Weight};
use crate::error::Result;
use crate::rational;
use crate::tcs::VerificationRecord;

/// Rational grid for the positivity test.
pub const SUQ2_GRID: [(i64, i64); 7] = [(-2, 1), (-1, 1), (-1, 2), (0, 1), (1, 2), (1, 1), (2, 1)];

/// Types checked by default, with the window radius for the equivalence
/// check.
pub const DEFAULT_TYPES: [(&str, i64); 4] = [("A1", 4), ("A2", 3), ("B2", 3), ("G2", 2)];

pub const ALL_TYPES: [&str; 12] = ["A1", "A2", "A3", "A4", "B2", "B3", "B4", "C2", "C3", "C4", "D4", "G2"];

pub fn expected_center_order(kind: &RootType) -> Option<usize> {
    match kind {
        RootType::A(n) => Some(n + 1),
        RootType::B(_) | RootType::C(_) => Some(2),
        RootType::D(_) => Some(4),
        RootType::G2 => Some(1),
        RootType::Custom => None,
    }
}

pub fn expected_weyl_order(kind: &RootType) -> Option<usize> {
    let fact = |n: usize| (1..=n).product::<usize>();
    match kind {
        RootType::A(n) => Some(fact(n + 1)),
        RootType::B(n) | RootType::C(n) => Some((1 << n) * fact(*n)),
        RootType::D(n) => Some((1 << (n - 1)) * fact(*n)),
        RootType::G2 => Some(12),
        RootType::Custom => None,
    }
}

pub fn center_record(rs: &RootSystem) -> Result<VerificationRecord> {
    let c = center_group(rs);
    let det = rs.determinant();
    let mut rec = VerificationRecord::new("rootsys.center", None, None);
    rec.input("type", &rs.kind);
    rec.note("determinant", det);
    rec.note("invariants", format!("{:?}", c.invariants));
    rec.note("order", c.order);
    rec.check("order_equals_abs_determinant", c.order as i64 == det.abs());
    rec.check("invariants_multiply_to_order", c.invariants.iter().product::<i64>() == det.abs());
    rec.check("points_are_central", c.points.iter().all(|x| is_central(rs, x)));
    if let Some(n) = expected_center_order(&rs.kind) {
        rec.check("order_matches_type", c.order == n);
    }
    Ok(rec)
}

pub fn condition_ii_record(rs: &RootSystem, count: usize, seed: u64, omega_bound: i64, tol: f64) -> Result<VerificationRecord> {
    let (central, disagree) = condition_ii_equivalence(rs, count, seed, omega_bound, tol)?;
    let mut rec = VerificationRecord::new("rootsys.condition_ii", None, None);
    rec.input("type", &rs.kind);
    rec.input("measures", count);
    rec.input("seed", seed);
    rec.input("omega_bound", omega_bound);
    rec.input("tolerance", tol);
    rec.note("central_measures", central);
    rec.note("disagreements", disagree.len());
    if let Some(first) = disagree.first() {
        rec.note("first_disagreement", serde_json::to_string(first)?);
    }
    rec.check("tests_agree", disagree.is_empty());
    rec.check("both_outcomes_sampled", central > 0 && central < count);
    Ok(rec)
}

fn weights_up_to(r: usize, bound: i64) -> Vec<Weight> {
    let mut out = vec![vec![]];
    for _ in 0..r {
        out = out.into_iter().flat_map(|w: Weight| (0..=bound).map(move |v| [w.clone(), vec![v]].concat())).collect();
    }
    out
}

/// Weyl group size, and every saturated set with highest weight in
/// `[0, bound]^r` closed under reflections and inside one coset.
pub fn saturated_record(rs: &RootSystem, bound: i64) -> Result<VerificationRecord> {
    let mut rec = VerificationRecord::new("rootsys.saturated_sets", None, None);
    rec.input("type", &rs.kind);
    rec.input("omega_bound", bound);
    let w = rs.weyl_group()?;
    rec.note("weyl_order", w.len());
    if let Some(n) = expected_weyl_order(&rs.kind) {
        rec.check("weyl_order_matches_type", w.len() == n);
    }
    let mut total = 0usize;
    for omega in weights_up_to(rs.rank(), bound) {
        let sat = rs.saturated_set(&omega)?;
        total += sat.len();
        rec.check("contains_highest_weight", sat.contains(&omega));
        let closed = sat.iter().all(|l| (0..rs.rank()).all(|i| sat.contains(&rs.reflect(i, l))));
        rec.check("weyl_invariant", closed);
        let in_coset = sat.iter().all(|l| {
            let diff: Weight = l.iter().zip(&omega).map(|(a, b)| a - b).collect();
            rs.in_root_lattice(&diff)
        });
        rec.check("inside_highest_weight_coset", in_coset);
        let dominant: BTreeSet<Weight> = sat.iter().map(|l| rs.dominant_rep(l)).collect();
        rec.check("dominant_representatives_inside", dominant.iter().all(|d| sat.contains(d) && RootSystem::is_dominant(d)));
    }
    rec.note("weights_enumerated", total);
    Ok(rec)
}

/// Positive semidefiniteness of the two-valued Toeplitz matrix against
/// `|c| <= 1`, for sizes up to `max_m`.
pub fn suq2_record(max_m: usize) -> Result<VerificationRecord> {
    let mut rec = VerificationRecord::new("rootsys.suq2", None, None);
    rec.input("max_size", max_m);
    for &(a, b) in &SUQ2_GRID {
        let c = rational::frac(a, b);
        let expected = c.abs() <= rational::int(1);
        let mut previous = true;
        let mut row = String::new();
        for m in 1..=max_m {
            let psd = suq2_psd(&c, m)?;
            row.push(if psd { 'T' } else { 'F' });
            if m >= 2 {
                rec.check("matches_abs_c_at_most_one", psd == expected);
            }
            rec.check("monotone_in_size", previous || !psd);
            rec.check("float_route_agrees", suq2_psd_f64(rational::to_f64(&c), m, 1e-12)? == psd);
            previous = psd;
        }
        rec.note(format!("c={}", rational::display(&c)), row);
    }
    Ok(rec)
}
