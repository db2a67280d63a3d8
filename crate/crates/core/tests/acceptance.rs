//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use qtrace_core::partition::enumerate;
use qtrace_core::rational::{self, Rational};
use qtrace_core::roots::{checks, lemma_equiv_check, suq2_psd, RootSystem};
use qtrace_core::tcs::{appendix, hnplus, onplus, snplus, spot, VerificationRecord};
use qtrace_core::{Caps, Engine, QGFamily, Result};

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { ok, detail: detail.into() })
}

/// Every record passed; otherwise the first failure.
fn all_pass(records: &[VerificationRecord]) -> (bool, String) {
    match records.iter().find(|r| !r.passed()) {
        None => (true, format!("{} records", records.len())),
        Some(r) => (false, format!("{} N={:?} failed {:?}", r.claim_id, r.big_n, r.failed_checks())),
    }
}

fn check_named(rec: &VerificationRecord, names: &[&str]) -> bool {
    names.iter().all(|n| rec.checks.get(*n) == Some(&true))
}

fn c1(e: &Engine) -> Result<Outcome> {
    let start = Instant::now();
    let mut built = 0;
    let mut bad = Vec::new();
    for f in [QGFamily::OPlus, QGFamily::SPlus, QGFamily::HPlus] {
        for n in 1..=6 {
            if enumerate(f.class(), n, 12)?.is_empty() {
                continue;
            }
            for big_n in 4..=8 {
                built += 1;
                if !e.context(f, n, big_n)?.is_inverse_pair() {
                    bad.push(format!("{f} n={n} N={big_n}"));
                }
            }
        }
    }
    let t = start.elapsed();
    outcome(bad.is_empty() && t < Duration::from_secs(60), format!("{built} contexts in {t:.1?}, failures {bad:?}"))
}

fn c2(e: &Engine) -> Result<Outcome> {
    let mut ok = true;
    for n in 4..=8 {
        let r = snplus::snplus_base_moments(e, n)?;
        ok &= check_named(&r, &["h(p1 p2) = 1/(N(N-1))", "h(p1 p2 p1) = h(p1 p2)"]);
    }
    let r6 = snplus::snplus_base_moments(e, 6)?;
    outcome(ok, format!("N=4..8, h(p1 p2) at N=6 = {}", r6.computed_values["h(p1 p2)"]))
}

fn c3(e: &Engine) -> Result<Outcome> {
    let mut ok = true;
    let mut detail = String::new();
    for n in 4..=8 {
        let r = snplus::snplus_base_moments(e, n)?;
        let names: Vec<String> = (0..=4).map(|k| format!("h(chi^{k}) is Catalan")).collect();
        let mut names: Vec<&str> = names.iter().map(String::as_str).collect();
        names.extend(["h(p1 chi^2) = 5/N", "h(p1 p2 chi) = 3/(N(N-1))"]);
        ok &= check_named(&r, &names);
        if n == 6 {
            detail = (0..=4).map(|k| r.computed_values[&format!("h(chi^{k})")].clone()).collect::<Vec<_>>().join(",");
        }
    }
    outcome(ok, format!("h(chi^k) = {detail} for N=4..8"))
}

fn c4(e: &Engine) -> Result<Outcome> {
    let start = Instant::now();
    let mut recs = Vec::new();
    for n in 4..=9 {
        recs.push(appendix::appendix_order4(e, n)?);
        recs.push(appendix::appendix_order5(e, n)?);
    }
    let (ok, d) = all_pass(&recs);
    let t = start.elapsed();
    outcome(ok && t < Duration::from_secs(120), format!("{d} in {t:.1?}"))
}

fn c5(e: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    let mut differ = true;
    for n in 4..=9 {
        recs.push(appendix::appendix_quadratic(e, n)?);
        let r = snplus::snplus_prop_a3_equiv(e, n)?;
        differ &= r.computed_values["h(p1 p2 p1 chi_2)"] != r.computed_values["h(p1 p2 chi_2)"];
        recs.push(r);
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok && differ, format!("{d}, X at N=6 = {}", recs[4].computed_values["X"]))
}

fn c6(e: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    for n in 4..=8 {
        recs.push(snplus::snplus_coefficient_gap(e, n)?);
    }
    let mut vals = Vec::new();
    let mut nonzero = true;
    for n in [6, 7] {
        let (a3, b3) = snplus::snplus_a3b3(e, n)?;
        nonzero &= !a3.is_zero() && !b3.is_zero();
        vals.push(format!("N={n}: a3={} b3={}", rational::display(&a3), rational::display(&b3)));
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok && nonzero, format!("{d}; {}", vals.join("; ")))
}

fn c7(e: &Engine, extended: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    for n in [6, 7] {
        recs.push(snplus::snplus_nonvanishing(e, n, 0)?);
        recs.push(snplus::snplus_nonvanishing_odd(e, n, 1)?);
    }
    let start = Instant::now();
    let mut ext = Vec::new();
    for n in [6, 7] {
        let r = snplus::snplus_nonvanishing_even(extended, n, 1)?;
        ext.push(format!("N={n}: {}", r.computed_values["even"]));
        recs.push(r);
    }
    let t = start.elapsed();
    let (ok, d) = all_pass(&recs);
    outcome(ok && t < Duration::from_secs(3600), format!("{d}; extended even k=1 {} in {t:.1?}", ext.join(", ")))
}

fn c8(e: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    for n in [3, 4, 5] {
        recs.push(onplus::onplus_recursion_record(e, n, 5)?);
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok, format!("{d}, a_3 at N=4 = {}", recs[1].computed_values["n3.a_3"]))
}

fn c9(e: &Engine) -> Result<Outcome> {
    let start = Instant::now();
    let mut recs = Vec::new();
    for f in [QGFamily::OPlus, QGFamily::HPlus, QGFamily::SPlus] {
        recs.push(spot::decomposition_spot(e, f, 6, 6)?);
    }
    let t = start.elapsed();
    let (ok, d) = all_pass(&recs);
    outcome(ok && t < Duration::from_secs(300), format!("{d}, {} word pairs each, in {t:.1?}", recs[0].computed_values["word_pairs"]))
}

fn c10() -> Result<Outcome> {
    let mut recs = Vec::new();
    for (f, ns) in [(QGFamily::OPlus, vec![3, 4, 5, 6]), (QGFamily::SPlus, vec![6, 7]), (QGFamily::HPlus, vec![6, 7])] {
        for n in ns {
            recs.push(spot::semigroup_series(f, n, 20, 1e-9)?);
        }
    }
    let (ok, d) = all_pass(&recs);
    let worst = recs.iter().map(|r| r.computed_values["max_abs_error"].parse::<f64>().unwrap_or(f64::NAN)).fold(0.0, f64::max);
    outcome(ok, format!("{d}, worst error {worst:e}"))
}

fn c11(e: &Engine) -> Result<Outcome> {
    let (first, second) = hnplus::length_three_fusion()?;
    let mut recs = Vec::new();
    for n in [6, 7] {
        recs.push(hnplus::hnplus_relations(e, n)?);
        recs.push(hnplus::hnplus_a111b111(e, n)?);
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok && first && second, format!("{d}, fusion identities {first}/{second}"))
}

fn c12(e: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    for n in [6, 7] {
        recs.push(snplus::snplus_semigroup_rigidity(e, n, 1e-9)?);
        recs.push(hnplus::hnplus_semigroup_rigidity(e, n, 1e-9)?);
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok, d)
}

fn c13() -> Result<Outcome> {
    let mut recs = Vec::new();
    for (t, radius) in checks::DEFAULT_TYPES {
        let rs = RootSystem::parse(t)?;
        recs.push(lemma_equiv_check(&rs, radius)?);
        recs.push(checks::condition_ii_record(&rs, 50, 20240607, 3, 1e-9)?);
    }
    for t in checks::ALL_TYPES {
        recs.push(checks::center_record(&RootSystem::parse(t)?)?);
    }
    let mut grid_ok = true;
    for &(a, b) in &checks::SUQ2_GRID {
        let c = rational::frac(a, b);
        grid_ok &= suq2_psd(&c, 6)? == (c.abs() <= Rational::from_integer(1.into()));
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok && grid_ok, format!("{d}, suq2 grid {grid_ok}"))
}

fn c14(e: &Engine) -> Result<Outcome> {
    let mut recs = Vec::new();
    for n in 4..=8 {
        recs.push(appendix::appendix_biinvariance(e, n)?);
    }
    let (ok, d) = all_pass(&recs);
    outcome(ok, d)
}

fn main() -> ExitCode {
    let engine = Engine::default();
    let extended = Engine::new(Caps::extended());
    let criteria: Vec<(&str, Box<dyn Fn() -> Result<Outcome> + '_>)> = vec![
        ("weingarten inverse", Box::new(|| c1(&engine))),
        ("S+ base moments", Box::new(|| c2(&engine))),
        ("free Poisson moments", Box::new(|| c3(&engine))),
        ("order four and five identities", Box::new(|| c4(&engine))),
        ("four-pair quadratic", Box::new(|| c5(&engine))),
        ("third-degree coefficients", Box::new(|| c6(&engine))),
        ("nonvanishing moments", Box::new(|| c7(&engine, &extended))),
        ("O+ recursion", Box::new(|| c8(&engine))),
        ("decompositions and traciality", Box::new(|| c9(&engine))),
        ("convolution semigroups", Box::new(c10)),
        ("H+ relations", Box::new(|| c11(&engine))),
        ("semigroup rigidity", Box::new(|| c12(&engine))),
        ("root lattices", Box::new(c13)),
        ("biinvariance and symmetry", Box::new(|| c14(&engine))),
    ];
    let total = Instant::now();
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = match run() {
            Ok(o) => (o.ok, o.detail),
            Err(err) => (false, format!("error: {err}")),
        };
        failures += !ok as usize;
        println!(
            "criterion {:>2} {:<32} {} [{:.1?}] {detail}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            start.elapsed()
        );
    }
    println!("{} of {} criteria passed in {:.1?}", criteria.len() - failures, criteria.len(), total.elapsed());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
