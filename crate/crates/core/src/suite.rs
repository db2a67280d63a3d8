//! Named collections of verification records, run in parallel and
//! reported in a fixed order.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::roots::{checks, lemma_equiv_check, RootSystem};
use crate::tcs::{appendix, hnplus, onplus, snplus, spot, VerificationRecord};
use crate::weingarten::{Engine, QGFamily};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    OPlus,
    SPlus,
    HPlus,
    Appendix,
    RootSys,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "onplus" => Suite::OPlus,
            "snplus" => Suite::SPlus,
            "hnplus" => Suite::HPlus,
            "appendix" => Suite::Appendix,
            "rootsys" => Suite::RootSys,
            "all" => Suite::All,
            _ => return Err(Error::Parse(format!("unknown suite {s:?}"))),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::OPlus => "onplus",
            Suite::SPlus => "snplus",
            Suite::HPlus => "hnplus",
            Suite::Appendix => "appendix",
            Suite::RootSys => "rootsys",
            Suite::All => "all",
        })
    }
}

impl Suite {
    pub fn default_n(self) -> Vec<u32> {
        match self {
            Suite::OPlus => vec![3, 4, 5],
            Suite::SPlus | Suite::HPlus => vec![6, 7],
            Suite::Appendix => (4..=9).collect(),
            Suite::RootSys | Suite::All => Vec::new(),
        }
    }
}

/// Parses `6`, `4..9` (inclusive) or `3,5,7`.
pub fn parse_n_range(s: &str) -> Result<Vec<u32>> {
    let bad = || Error::Parse(format!("not an N range: {s:?}"));
    let s = s.trim();
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u32 = lo.trim().parse().map_err(|_| bad())?;
        let hi: u32 = hi.trim_start_matches('=').trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect()
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Overrides the per-suite defaults when set.
    pub n_values: Option<Vec<u32>>,
    /// Adds the long-running items; the engine must allow `n = 8` for S+.
    pub extended: bool,
    pub jobs: usize,
    pub tolerance: f64,
    /// `N` at which the decomposition grids are checked.
    pub spot_n: u32,
    /// Combined word length for the traciality spot checks.
    pub spot_len: usize,
    /// Highest degree in the orthogonal recursion.
    pub onplus_n_max: usize,
    pub semigroup_trunc: usize,
    /// Root systems with their window radius; `None` means the defaults.
    pub root_types: Option<Vec<(String, i64)>>,
    pub random_measures: usize,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            n_values: None,
            extended: false,
            jobs: 1,
            tolerance: 1e-9,
            spot_n: 6,
            spot_len: 6,
            onplus_n_max: 5,
            semigroup_trunc: 20,
            root_types: None,
            random_measures: 50,
            seed: 20240607,
        }
    }
}

type Task = Box<dyn Fn(&Engine) -> Result<VerificationRecord> + Send + Sync>;

struct Planned {
    claim: String,
    big_n: Option<u32>,
    task: Task,
}

fn push<F>(out: &mut Vec<Planned>, claim: &str, big_n: Option<u32>, f: F)
where
    F: Fn(&Engine) -> Result<VerificationRecord> + Send + Sync + 'static,
{
    out.push(Planned { claim: claim.to_string(), big_n, task: Box::new(f) });
}

fn plan_family(suite: Suite, cfg: &SuiteConfig, out: &mut Vec<Planned>) {
    let ns = cfg.n_values.clone().unwrap_or_else(|| suite.default_n());
    let tol = cfg.tolerance;
    let trunc = cfg.semigroup_trunc;
    let (spot_n, spot_len) = (cfg.spot_n, cfg.spot_len);
    match suite {
        Suite::OPlus => {
            let n_max = cfg.onplus_n_max;
            for &n in &ns {
                push(out, "onplus.recursion", Some(n), move |e| onplus::onplus_recursion_record(e, n, n_max));
                push(out, "onplus.semigroup", Some(n), move |_| spot::semigroup_series(QGFamily::OPlus, n, trunc, tol));
            }
            push(out, "onplus.decomposition", Some(spot_n), move |e| {
                spot::decomposition_spot(e, QGFamily::OPlus, spot_n, spot_len)
            });
        }
        Suite::SPlus => {
            for &n in &ns {
                push(out, "snplus.base_moments", Some(n), move |e| snplus::snplus_base_moments(e, n));
                push(out, "snplus.coefficient_gap", Some(n), move |e| snplus::snplus_coefficient_gap(e, n));
                push(out, "snplus.a3_b3", Some(n), move |e| snplus::snplus_a3b3_record(e, n));
                push(out, "snplus.b3_criterion", Some(n), move |e| snplus::snplus_prop_a3_equiv(e, n));
                push(out, "snplus.nonvanishing.k0", Some(n), move |e| snplus::snplus_nonvanishing(e, n, 0));
                push(out, "snplus.nonvanishing.k1.odd", Some(n), move |e| snplus::snplus_nonvanishing_odd(e, n, 1));
                if cfg.extended {
                    push(out, "snplus.nonvanishing.k1.even", Some(n), move |e| {
                        snplus::snplus_nonvanishing_even(e, n, 1)
                    });
                }
                push(out, "snplus.semigroup_rigidity", Some(n), move |e| snplus::snplus_semigroup_rigidity(e, n, tol));
                push(out, "snplus.semigroup", Some(n), move |_| spot::semigroup_series(QGFamily::SPlus, n, trunc, tol));
            }
            push(out, "snplus.decomposition", Some(spot_n), move |e| {
                spot::decomposition_spot(e, QGFamily::SPlus, spot_n, spot_len)
            });
        }
        Suite::HPlus => {
            for &n in &ns {
                push(out, "hnplus.even_relations", Some(n), move |e| hnplus::hnplus_relations(e, n));
                push(out, "hnplus.a111_b111", Some(n), move |e| hnplus::hnplus_a111b111(e, n));
                push(out, "hnplus.semigroup_rigidity", Some(n), move |e| hnplus::hnplus_semigroup_rigidity(e, n, tol));
                push(out, "hnplus.semigroup", Some(n), move |_| spot::semigroup_series(QGFamily::HPlus, n, trunc, tol));
            }
            push(out, "hnplus.decomposition", Some(spot_n), move |e| {
                spot::decomposition_spot(e, QGFamily::HPlus, spot_n, spot_len)
            });
        }
        Suite::Appendix => {
            for &n in &ns {
                push(out, "appendix.order4", Some(n), move |e| appendix::appendix_order4(e, n));
                push(out, "appendix.order5", Some(n), move |e| appendix::appendix_order5(e, n));
                push(out, "appendix.quadratic", Some(n), move |e| appendix::appendix_quadratic(e, n));
                push(out, "appendix.biinvariance", Some(n), move |e| appendix::appendix_biinvariance(e, n));
            }
        }
        Suite::RootSys => plan_roots(cfg, out),
        Suite::All => {
            for s in [Suite::OPlus, Suite::SPlus, Suite::HPlus, Suite::Appendix, Suite::RootSys] {
                // Explicit N values only make sense for a single suite.
                let sub = SuiteConfig { n_values: None, ..cfg.clone() };
                plan_family(s, &sub, out);
            }
        }
    }
}

fn plan_roots(cfg: &SuiteConfig, out: &mut Vec<Planned>) {
    let explicit = cfg.root_types.is_some();
    let types: Vec<(String, i64)> = cfg
        .root_types
        .clone()
        .unwrap_or_else(|| checks::DEFAULT_TYPES.iter().map(|(t, r)| (t.to_string(), *r)).collect());
    let (count, seed, tol) = (cfg.random_measures, cfg.seed, cfg.tolerance);
    for (t, radius) in types {
        let t2 = t.clone();
        push(out, "rootsys.equivalence", None, move |_| lemma_equiv_check(&RootSystem::parse(&t2)?, radius));
        let t2 = t.clone();
        push(out, "rootsys.condition_ii", None, move |_| {
            checks::condition_ii_record(&RootSystem::parse(&t2)?, count, seed, 3, tol)
        });
        let t2 = t.clone();
        push(out, "rootsys.saturated_sets", None, move |_| checks::saturated_record(&RootSystem::parse(&t2)?, 2));
        if explicit {
            push(out, "rootsys.center", None, move |_| checks::center_record(&RootSystem::parse(&t)?));
        }
    }
    if !explicit {
        for t in checks::ALL_TYPES {
            push(out, "rootsys.center", None, move |_| checks::center_record(&RootSystem::parse(t)?));
        }
    }
    push(out, "rootsys.suq2", None, |_| checks::suq2_record(8));
}

/// Checks the root-system names before any work starts.
fn validate(cfg: &SuiteConfig) -> Result<()> {
    if cfg.jobs == 0 {
        return Err(Error::InvalidInput("jobs must be at least 1".into()));
    }
    if !(cfg.tolerance > 0.0) {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    if let Some(types) = &cfg.root_types {
        for (t, r) in types {
            RootSystem::parse(t)?;
            if *r < 1 {
                return Err(Error::InvalidInput("radius must be positive".into()));
            }
        }
    }
    Ok(())
}

/// Runs every record of `suite`. Resource limits abort the run; any
/// other error becomes a failed record carrying the message.
pub fn run(engine: &Engine, suite: Suite, cfg: &SuiteConfig) -> Result<Vec<VerificationRecord>> {
    validate(cfg)?;
    let mut planned = Vec::new();
    plan_family(suite, cfg, &mut planned);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let results: Vec<Result<VerificationRecord>> = pool.install(|| {
        planned
            .par_iter()
            .map(|p| match (p.task)(engine) {
                Err(e) if !e.is_resource_limit() => {
                    let mut rec = VerificationRecord::new(p.claim.clone(), None, p.big_n);
                    rec.note("error", e);
                    rec.check("completed", false);
                    Ok(rec)
                }
                other => other,
            })
            .collect()
    });
    let mut records = results.into_iter().collect::<Result<Vec<_>>>()?;
    records.sort_by(|a, b| {
        (&a.claim_id, a.big_n, &a.inputs).cmp(&(&b.claim_id, b.big_n, &b.inputs))
    });
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_n_range("4..9").unwrap(), vec![4, 5, 6, 7, 8, 9]);
        assert_eq!(parse_n_range("6").unwrap(), vec![6]);
        assert_eq!(parse_n_range("3,5").unwrap(), vec![3, 5]);
        assert!(parse_n_range("9..4").is_err());
        assert!(parse_n_range("x").is_err());
    }

    #[test]
    fn rootsys_suite_passes() {
        let cfg = SuiteConfig { root_types: Some(vec![("A2".into(), 2)]), ..SuiteConfig::default() };
        let recs = run(&Engine::default(), Suite::RootSys, &cfg).unwrap();
        assert!(recs.iter().all(|r| r.passed()), "{recs:#?}");
        let ids: Vec<&str> = recs.iter().map(|r| r.claim_id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}
