use std::sync::OnceLock;

use num_bigint::BigInt;
use proptest::prelude::*;
use qtrace_core::fusion::{dim, fuse, BinWord, IrrLabel};
use qtrace_core::partition::{join, kernel, leq, SetPartition};
use qtrace_core::rational::{self, frac};
use qtrace_core::roots::{center_group, suq2_psd, RootSystem};
use qtrace_core::{Engine, QGFamily};

fn engine() -> &'static Engine {
    static E: OnceLock<Engine> = OnceLock::new();
    E.get_or_init(Engine::default)
}

fn family() -> impl Strategy<Value = QGFamily> {
    prop_oneof![Just(QGFamily::OPlus), Just(QGFamily::SPlus), Just(QGFamily::HPlus)]
}

fn partition(n: usize) -> impl Strategy<Value = SetPartition> {
    prop::collection::vec(0u8..4, n).prop_map(|v| kernel(&v))
}

fn pair() -> impl Strategy<Value = (SetPartition, SetPartition)> {
    (1usize..9).prop_flat_map(|n| (partition(n), partition(n)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn join_is_least_upper_bound((p, q) in pair(), r in prop::collection::vec(0u8..3, 8)) {
        let j = join(&p, &q).unwrap();
        prop_assert!(leq(&p, &j) && leq(&q, &j));
        prop_assert!(leq(&p, &p));
        prop_assert!(leq(&p, &SetPartition::one_block(p.n())));
        let r = kernel(&r[..p.n()]);
        if leq(&p, &r) && leq(&q, &r) {
            prop_assert!(leq(&j, &r));
        }
        prop_assert_eq!(join(&q, &p).unwrap(), j);
    }

    #[test]
    fn gram_and_weingarten_are_symmetric(f in family(), n in 1usize..6, big_n in 4u32..9) {
        let e = engine();
        if let Ok(g) = e.gram(f, n, big_n) {
            let w = e.weingarten(f, n, big_n).unwrap();
            for i in 0..g.len() {
                for j in 0..g.len() {
                    prop_assert_eq!(&g[i][j], &g[j][i]);
                    prop_assert_eq!(&w[i][j], &w[j][i]);
                }
            }
        }
    }

    #[test]
    fn moments_are_permutation_invariant_and_tracial(
        f in family(),
        big_n in 4u32..7,
        word in prop::collection::vec((1u32..5, 1u32..5), 1..5),
        shift in 0usize..4,
        swap in (1u32..5, 1u32..5),
    ) {
        let e = engine();
        let rows: Vec<u32> = word.iter().map(|w| w.0).collect();
        let cols: Vec<u32> = word.iter().map(|w| w.1).collect();
        let base = e.moment(f, big_n, &rows, &cols).unwrap();
        let s = |v: u32| if v == swap.0 { swap.1 } else if v == swap.1 { swap.0 } else { v };
        let rows_s: Vec<u32> = rows.iter().map(|&v| s(v)).collect();
        prop_assert_eq!(&e.moment(f, big_n, &rows_s, &cols).unwrap(), &base);
        let cols_s: Vec<u32> = cols.iter().map(|&v| s(v)).collect();
        prop_assert_eq!(&e.moment(f, big_n, &rows, &cols_s).unwrap(), &base);
        let k = shift % rows.len();
        let rot = |v: &[u32]| [&v[k..], &v[..k]].concat();
        prop_assert_eq!(&e.moment(f, big_n, &rot(&rows), &rot(&cols)).unwrap(), &base);
    }

    #[test]
    fn fusion_respects_dimensions(a in 0u32..7, b in 0u32..7, big_n in 4u32..9, plus in any::<bool>()) {
        let f = if plus { QGFamily::OPlus } else { QGFamily::SPlus };
        let (a, b) = (IrrLabel::Int(a), IrrLabel::Int(b));
        let prod = fuse(f, &a, &b).unwrap();
        let total: BigInt = prod.iter().map(|(c, m)| dim(f, big_n, c).unwrap() * *m).sum();
        prop_assert_eq!(total, dim(f, big_n, &a).unwrap() * dim(f, big_n, &b).unwrap());
        prop_assert_eq!(prod, fuse(f, &b, &a).unwrap());
    }

    #[test]
    fn word_fusion_respects_dimensions(i in 0usize..15, j in 0usize..15, big_n in 4u32..9) {
        let words = BinWord::all_up_to(3);
        let (a, b) = (IrrLabel::Word(words[i].clone()), IrrLabel::Word(words[j].clone()));
        let f = QGFamily::HPlus;
        let total: BigInt = fuse(f, &a, &b).unwrap().iter().map(|(c, m)| dim(f, big_n, c).unwrap() * *m).sum();
        prop_assert_eq!(total, dim(f, big_n, &a).unwrap() * dim(f, big_n, &b).unwrap());
    }

    #[test]
    fn dominant_representative_lies_in_orbit(t in 0usize..4, w in prop::collection::vec(-4i64..5, 2)) {
        let rs = RootSystem::parse(["A2", "B2", "C2", "G2"][t]).unwrap();
        let d = rs.dominant_rep(&w);
        prop_assert!(RootSystem::is_dominant(&d));
        prop_assert!(rs.orbit(&w).unwrap().contains(&d));
    }

    #[test]
    fn saturated_sets_are_weyl_invariant(t in 0usize..4, w in prop::collection::vec(0i64..4, 2)) {
        let rs = RootSystem::parse(["A2", "B2", "C2", "G2"][t]).unwrap();
        let sat = rs.saturated_set(&w).unwrap();
        for l in &sat {
            for i in 0..2 {
                prop_assert!(sat.contains(&rs.reflect(i, l)));
            }
        }
    }

    #[test]
    fn rationals_round_trip(n in -1000i64..1000, d in 1i64..1000) {
        let q = frac(n, d);
        prop_assert_eq!(rational::parse(&rational::display(&q)).unwrap(), q.clone());
        prop_assert_eq!(rational::parse(&rational::to_wire(&q)).unwrap(), q);
    }

    #[test]
    fn toeplitz_positivity_is_monotone(n in -12i64..13, d in 1i64..7, m in 1usize..8) {
        let c = frac(n, d);
        if suq2_psd(&c, m + 1).unwrap() {
            prop_assert!(suq2_psd(&c, m).unwrap());
        }
    }
}

#[test]
fn center_order_is_abs_determinant() {
    for t in qtrace_core::roots::checks::ALL_TYPES {
        let rs = RootSystem::parse(t).unwrap();
        let c = center_group(&rs);
        assert_eq!(c.order as i64, rs.determinant().abs(), "{t}");
        assert_eq!(c.points.len(), c.order);
        assert!(c.points.iter().all(|x| x.iter().all(|v| *v >= rational::int(0) && *v < rational::int(1))));
    }
}
