//! Independent recomputations checked against the library.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use qtrace_core::partition::{enumerate, PartitionClass, SetPartition};
use qtrace_core::rational::{frac, int};
use qtrace_core::{Engine, QGFamily, Rational};

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn catalan(k: u64) -> u64 {
    binom(2 * k, k) / (k + 1)
}

fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for v in &row {
            let x = next.last().unwrap() + v;
            next.push(x);
        }
        row = next;
    }
    row[0]
}

#[test]
fn partition_counts() {
    for n in 1..=9 {
        assert_eq!(enumerate(PartitionClass::All, n, 12).unwrap().len() as u64, bell(n), "ALL {n}");
        assert_eq!(enumerate(PartitionClass::Nc, n, 12).unwrap().len() as u64, catalan(n as u64), "NC {n}");
        let (pairs, even) = if n % 2 == 0 {
            let k = (n / 2) as u64;
            (catalan(k), binom(3 * k, k) / (2 * k + 1))
        } else {
            (0, 0)
        };
        assert_eq!(enumerate(PartitionClass::Nc2, n, 12).unwrap().len() as u64, pairs, "NC2 {n}");
        assert_eq!(enumerate(PartitionClass::NcEven, n, 12).unwrap().len() as u64, even, "NC_EVEN {n}");
    }
}

fn crosses(p: &SetPartition) -> bool {
    let l = p.labels();
    let n = l.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if l[a] == l[c] && l[b] == l[d] && l[a] != l[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

#[test]
fn noncrossing_matches_four_point_search() {
    for n in 1..=8 {
        for p in enumerate(PartitionClass::All, n, 12).unwrap() {
            assert_eq!(p.is_noncrossing(), !crosses(&p), "{:?}", p.blocks());
        }
    }
}

fn join_blocks(p: &SetPartition, q: &SetPartition) -> usize {
    let n = p.n();
    let mut comp: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for a in 0..n {
            for b in 0..n {
                if (p.same_block(a, b) || q.same_block(a, b)) && comp[a] != comp[b] {
                    let m = comp[a].min(comp[b]);
                    comp[a] = m;
                    comp[b] = m;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut roots = comp.clone();
    roots.sort();
    roots.dedup();
    roots.len()
}

fn gauss_inverse(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let k = m.len();
    let mut a: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..k).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..k {
        let piv = (col..k).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, piv);
        let inv = Rational::one() / a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v * &inv;
        }
        for r in 0..k {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * k {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|r| r[k..].to_vec()).collect()
}

fn naive_weingarten(class: PartitionClass, n: usize, big_n: u32) -> (Vec<SetPartition>, Vec<Vec<Rational>>) {
    let parts = enumerate(class, n, 12).unwrap();
    let gram: Vec<Vec<Rational>> = parts
        .iter()
        .map(|p| {
            parts
                .iter()
                .map(|q| Rational::from_integer(num_traits::pow(BigInt::from(big_n), join_blocks(p, q))))
                .collect()
        })
        .collect();
    (parts, gauss_inverse(&gram))
}

fn respects(p: &SetPartition, idx: &[u32]) -> bool {
    let n = idx.len();
    (0..n).all(|a| (0..n).all(|b| !p.same_block(a, b) || idx[a] == idx[b]))
}

fn tuples(len: usize, big_n: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|t: Vec<u32>| (1..=big_n).map(move |v| [t.clone(), vec![v]].concat())).collect();
    }
    out
}

#[test]
fn weingarten_matches_gauss_jordan() {
    let e = Engine::default();
    for f in [QGFamily::OPlus, QGFamily::SPlus, QGFamily::HPlus] {
        for n in 1..=5 {
            for big_n in [4u32, 5, 7] {
                let (parts, w) = naive_weingarten(f.class(), n, big_n);
                if parts.is_empty() {
                    continue;
                }
                assert_eq!(e.weingarten(f, n, big_n).unwrap(), w, "{f} n={n} N={big_n}");
            }
        }
    }
}

#[test]
fn moments_match_weingarten_sum() {
    let e = Engine::default();
    let big_n = 4;
    for f in [QGFamily::OPlus, QGFamily::SPlus, QGFamily::HPlus] {
        for n in 1..=3 {
            let (parts, w) = naive_weingarten(f.class(), n, big_n);
            let words = tuples(n, 3);
            for rows in &words {
                for cols in &words {
                    let mut expected = Rational::zero();
                    if !parts.is_empty() {
                        for (a, p) in parts.iter().enumerate() {
                            for (b, q) in parts.iter().enumerate() {
                                if respects(p, rows) && respects(q, cols) {
                                    expected += &w[a][b];
                                }
                            }
                        }
                    }
                    assert_eq!(e.moment(f, big_n, rows, cols).unwrap(), expected, "{f} {rows:?} {cols:?}");
                }
            }
        }
    }
}

#[test]
fn known_small_moments() {
    let e = Engine::default();
    for big_n in 4..=8u32 {
        let n = big_n as i64;
        assert_eq!(e.moment(QGFamily::OPlus, big_n, &[1, 1], &[1, 1]).unwrap(), frac(1, n));
        assert_eq!(e.moment(QGFamily::SPlus, big_n, &[1], &[1]).unwrap(), frac(1, n));
        assert_eq!(e.moment(QGFamily::SPlus, big_n, &[1, 2], &[1, 2]).unwrap(), frac(1, n * (n - 1)));
        assert_eq!(e.moment(QGFamily::HPlus, big_n, &[1], &[1]).unwrap(), int(0));
        assert_eq!(e.moment(QGFamily::OPlus, big_n, &[1, 1, 1, 1], &[1, 1, 1, 1]).unwrap(), frac(2, n * (n + 1)));
    }
}

#[test]
fn modular_route_agrees_with_exact() {
    use qtrace_core::tcs::{appendix, snplus};
    let exact = Engine::default();
    let modular = Engine::default().with_exact_limit(0);
    for n in [6u32, 7] {
        assert_eq!(snplus::snplus_a3b3(&exact, n).unwrap(), snplus::snplus_a3b3(&modular, n).unwrap());
        assert!(appendix::appendix_quadratic(&modular, n).unwrap().passed());
    }
}
