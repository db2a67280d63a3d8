//! On-disk store for Weingarten contexts, one JSON file per
//! `(family, n, N)`.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::partition::SetPartition;
use crate::rational::{self, Rational};
use crate::weingarten::{QGFamily, WeingartenContext};

pub const FORMAT_VERSION: u32 = 1;
pub const ENV_VAR: &str = "QTRACE_CACHE";

/// `$QTRACE_CACHE`, or `./.qtrace-cache`.
pub fn default_dir() -> PathBuf {
    std::env::var_os(ENV_VAR).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".qtrace-cache"))
}

pub fn file_name(family: QGFamily, n: usize, big_n: u32) -> String {
    format!("wg_{}_{}_{}.json", family.name(), n, big_n)
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    format_version: u32,
    family: QGFamily,
    n: usize,
    #[serde(rename = "N")]
    big_n: u32,
    partitions: Vec<SetPartition>,
    gram: Vec<Vec<String>>,
    weingarten: Vec<Vec<String>>,
}

/// Writes through a temporary file in the same directory and renames it
/// into place, so readers never see a partial file.
pub fn store(dir: &Path, ctx: &WeingartenContext) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let file = CacheFile {
        format_version: FORMAT_VERSION,
        family: ctx.family,
        n: ctx.n,
        big_n: ctx.big_n,
        partitions: ctx.partitions.clone(),
        gram: ctx.gram.iter().map(|r| r.iter().map(|v| format!("{v}/1")).collect()).collect(),
        weingarten: ctx.weingarten().iter().map(|r| r.iter().map(rational::to_wire).collect()).collect(),
    };
    let target = dir.join(file_name(ctx.family, ctx.n, ctx.big_n));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    serde_json::to_writer(&mut tmp, &file)?;
    tmp.flush()?;
    tmp.persist(&target).map_err(|e| e.error)?;
    Ok(target)
}

/// Reads a cached context. Anything unreadable, from another format
/// version, for other parameters, or failing `G W = I` yields `None`.
pub fn load(
    dir: &Path,
    family: QGFamily,
    n: usize,
    big_n: u32,
    expected: &[SetPartition],
) -> Option<WeingartenContext> {
    let bytes = fs::read(dir.join(file_name(family, n, big_n))).ok()?;
    let file: CacheFile = serde_json::from_slice(&bytes).ok()?;
    if file.format_version != FORMAT_VERSION
        || file.family != family
        || file.n != n
        || file.big_n != big_n
        || file.partitions != expected
    {
        return None;
    }
    let k = expected.len();
    let parse_matrix = |m: &[Vec<String>]| -> Option<Vec<Vec<Rational>>> {
        if m.len() != k || m.iter().any(|r| r.len() != k) {
            return None;
        }
        m.iter().map(|r| r.iter().map(|s| rational::parse(s).ok()).collect()).collect()
    };
    let gram = parse_matrix(&file.gram)?;
    let w = parse_matrix(&file.weingarten)?;
    let gram: Vec<Vec<BigInt>> = gram
        .into_iter()
        .map(|r| r.into_iter().map(|q| q.is_integer().then(|| q.to_integer())).collect())
        .collect::<Option<_>>()?;
    let den = w.iter().flatten().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()));
    let w_num = w
        .iter()
        .map(|r| r.iter().map(|q| q.numer() * (&den / q.denom())).collect())
        .collect();
    let ctx = WeingartenContext::from_parts(family, n, big_n, expected.to_vec(), gram, w_num, den);
    ctx.is_inverse_pair().then_some(ctx)
}
