//! Gram and Weingarten matrices for the three easy quantum group families,
//! and exact Haar moments of words in the generators.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::cache;
use crate::error::{Error, Result};
use crate::matrix;
use crate::modular::{self, InverseModP, Lifter};
use crate::partition::{self, kernel, leq, PartitionClass, SetPartition, UnionFind};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QGFamily {
    /// Free orthogonal quantum group, noncrossing pairings.
    #[serde(rename = "OPLUS")]
    OPlus,
    /// Free symmetric quantum group, all noncrossing partitions.
    #[serde(rename = "SPLUS")]
    SPlus,
    /// Free hyperoctahedral quantum group, noncrossing partitions with even blocks.
    #[serde(rename = "HPLUS")]
    HPlus,
}

impl QGFamily {
    pub const ALL: [QGFamily; 3] = [QGFamily::OPlus, QGFamily::SPlus, QGFamily::HPlus];

    pub fn class(self) -> PartitionClass {
        match self {
            QGFamily::OPlus => PartitionClass::Nc2,
            QGFamily::SPlus => PartitionClass::Nc,
            QGFamily::HPlus => PartitionClass::NcEven,
        }
    }

    /// Smallest supported matrix size.
    pub fn min_n(self) -> u32 {
        match self {
            QGFamily::OPlus => 2,
            QGFamily::SPlus | QGFamily::HPlus => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QGFamily::OPlus => "OPLUS",
            QGFamily::SPlus => "SPLUS",
            QGFamily::HPlus => "HPLUS",
        }
    }

    pub fn check_n(self, big_n: u32) -> Result<()> {
        if big_n < self.min_n() {
            return Err(Error::NTooSmall { family: self, big_n, min: self.min_n() });
        }
        Ok(())
    }
}

impl fmt::Display for QGFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for QGFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oplus" | "o+" | "on+" | "onplus" => Ok(QGFamily::OPlus),
            "splus" | "s+" | "sn+" | "snplus" => Ok(QGFamily::SPlus),
            "hplus" | "h+" | "hn+" | "hnplus" => Ok(QGFamily::HPlus),
            _ => Err(Error::Parse(format!("unknown family {s:?}"))),
        }
    }
}

/// Upper bounds on the word length `n` per family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub oplus: usize,
    pub splus: usize,
    pub hplus: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { oplus: 10, splus: 7, hplus: 8 }
    }
}

impl Caps {
    /// Limits for the long-running tier.
    pub fn extended() -> Self {
        Caps { splus: 8, ..Caps::default() }
    }

    pub fn get(&self, family: QGFamily) -> usize {
        match family {
            QGFamily::OPlus => self.oplus,
            QGFamily::SPlus => self.splus,
            QGFamily::HPlus => self.hplus,
        }
    }

    pub fn with(mut self, family: QGFamily, cap: usize) -> Self {
        let cap = cap.min(partition::DEFAULT_MAX_SIZE);
        match family {
            QGFamily::OPlus => self.oplus = cap,
            QGFamily::SPlus => self.splus = cap,
            QGFamily::HPlus => self.hplus = cap,
        }
        self
    }
}

/// Everything needed to evaluate moments of length `n` at a fixed `N`.
#[derive(Debug)]
pub struct WeingartenContext {
    pub family: QGFamily,
    pub n: usize,
    pub big_n: u32,
    pub partitions: Vec<SetPartition>,
    /// `G[a][b] = N^{b(p_a v p_b)}`.
    pub gram: Vec<Vec<BigInt>>,
    /// Weingarten matrix over a common denominator: `W = w_num / w_den`.
    pub w_num: Vec<Vec<BigInt>>,
    pub w_den: BigInt,
    weingarten: OnceLock<Vec<Vec<Rational>>>,
}

impl WeingartenContext {
    pub(crate) fn from_parts(
        family: QGFamily,
        n: usize,
        big_n: u32,
        partitions: Vec<SetPartition>,
        gram: Vec<Vec<BigInt>>,
        w_num: Vec<Vec<BigInt>>,
        w_den: BigInt,
    ) -> Self {
        WeingartenContext { family, n, big_n, partitions, gram, w_num, w_den, weingarten: OnceLock::new() }
    }

    /// Builds the context from scratch and checks `G W = I`.
    pub fn build(family: QGFamily, n: usize, big_n: u32, partitions: Vec<SetPartition>) -> Result<Self> {
        let gram = gram_matrix(&partitions, big_n);
        let (w_num, w_den) =
            matrix::bareiss_inverse_parts(&gram).ok_or(Error::SingularGram { family, n, big_n })?;
        let ctx = WeingartenContext::from_parts(family, n, big_n, partitions, gram, w_num, w_den);
        if !ctx.is_inverse_pair() {
            return Err(Error::SingularGram { family, n, big_n });
        }
        Ok(ctx)
    }

    /// Exact check of `G W = I` on the integer representation.
    pub fn is_inverse_pair(&self) -> bool {
        let k = self.partitions.len();
        if self.gram.len() != k || self.w_num.len() != k || self.w_den.is_zero() {
            return false;
        }
        for (i, grow) in self.gram.iter().enumerate() {
            for j in 0..k {
                let mut acc = BigInt::zero();
                for (g, wrow) in grow.iter().zip(&self.w_num) {
                    acc += g * &wrow[j];
                }
                let expected = if i == j { self.w_den.clone() } else { BigInt::zero() };
                if acc != expected {
                    return false;
                }
            }
        }
        true
    }

    /// The Weingarten matrix with reduced rational entries.
    pub fn weingarten(&self) -> &Vec<Vec<Rational>> {
        self.weingarten.get_or_init(|| {
            self.w_num
                .iter()
                .map(|row| row.iter().map(|v| Rational::new(v.clone(), self.w_den.clone())).collect())
                .collect()
        })
    }

    pub fn gram_rational(&self) -> Vec<Vec<Rational>> {
        self.gram
            .iter()
            .map(|row| row.iter().map(|v| Rational::from_integer(v.clone())).collect())
            .collect()
    }

    pub fn index_of(&self, p: &SetPartition) -> Option<usize> {
        self.partitions.binary_search(p).ok()
    }

    /// `W(p, q)` for two class partitions.
    pub fn entry(&self, p: &SetPartition, q: &SetPartition) -> Option<Rational> {
        let (a, b) = (self.index_of(p)?, self.index_of(q)?);
        Some(Rational::new(self.w_num[a][b].clone(), self.w_den.clone()))
    }
}

fn gram_matrix(partitions: &[SetPartition], big_n: u32) -> Vec<Vec<BigInt>> {
    let n = partitions.first().map_or(0, SetPartition::n);
    let powers: Vec<BigInt> = (0..=n).map(|b| num_traits::pow(BigInt::from(big_n), b)).collect();
    partitions
        .iter()
        .map(|p| partitions.iter().map(|q| powers[partition::join_block_count(p, q)].clone()).collect())
        .collect()
}

/// An index position in a word: either a concrete value in `1..=N` or a
/// summation variable ranging over `1..=N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Slot {
    Fixed(u32),
    Free(usize),
}

/// `N! / (N - b)!`, zero when `b > N`.
pub fn falling_factorial(big_n: u32, b: usize) -> BigInt {
    if b as u64 > big_n as u64 {
        return BigInt::zero();
    }
    (0..b as u32).fold(BigInt::one(), |acc, k| acc * BigInt::from(big_n - k))
}

type Key = (QGFamily, usize, u32);

/// Above this many class partitions, moments are computed modulo primes
/// and lifted instead of through an exact inverse.
pub const DEFAULT_EXACT_LIMIT: usize = 300;

/// Primes a lifted value must survive after its reconstruction.
const CONFIRMATIONS: usize = 2;
const MAX_PRIMES: usize = 64;

/// Builds and memoizes Weingarten contexts, optionally persisting them.
pub struct Engine {
    caps: Caps,
    cache_dir: Option<PathBuf>,
    exact_limit: usize,
    contexts: Mutex<HashMap<Key, Arc<Mutex<Option<Arc<WeingartenContext>>>>>>,
    modular: Mutex<HashMap<Key, Arc<Mutex<Vec<Option<Arc<InverseModP>>>>>>>,
    partitions: Mutex<HashMap<(PartitionClass, usize), Arc<Vec<SetPartition>>>>,
}

/// `W(a, b) N^free` summands of a moment.
type Terms = Vec<(u32, u32, u8)>;

impl Default for Engine {
    fn default() -> Self {
        Engine::new(Caps::default())
    }
}

impl Engine {
    pub fn new(caps: Caps) -> Self {
        Engine {
            caps,
            cache_dir: None,
            exact_limit: DEFAULT_EXACT_LIMIT,
            contexts: Mutex::default(),
            modular: Mutex::default(),
            partitions: Mutex::default(),
        }
    }

    /// Sets the partition count above which the modular route is used.
    pub fn with_exact_limit(mut self, limit: usize) -> Self {
        self.exact_limit = limit;
        self
    }

    /// Also reads and writes contexts under `dir`.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn cache_dir(&self) -> Option<&PathBuf> {
        self.cache_dir.as_ref()
    }

    pub fn check_size(&self, family: QGFamily, n: usize) -> Result<()> {
        let cap = self.caps.get(family);
        if n > cap {
            return Err(Error::CapExceeded { what: format!("{family} word of length {n}"), n, cap });
        }
        Ok(())
    }

    /// Sorted class partitions of `{1..n}`; empty for `n = 0`.
    pub fn partitions(&self, class: PartitionClass, n: usize) -> Result<Arc<Vec<SetPartition>>> {
        if n == 0 {
            return Ok(Arc::new(Vec::new()));
        }
        if let Some(found) = self.partitions.lock().unwrap().get(&(class, n)) {
            return Ok(found.clone());
        }
        let list = Arc::new(partition::enumerate(class, n, partition::DEFAULT_MAX_SIZE)?);
        self.partitions.lock().unwrap().insert((class, n), list.clone());
        Ok(list)
    }

    pub fn context(&self, family: QGFamily, n: usize, big_n: u32) -> Result<Arc<WeingartenContext>> {
        family.check_n(big_n)?;
        if n == 0 {
            return Err(Error::InvalidSize("Weingarten matrices need n >= 1".into()));
        }
        self.check_size(family, n)?;
        let slot = self.contexts.lock().unwrap().entry((family, n, big_n)).or_default().clone();
        let mut guard = slot.lock().unwrap();
        if let Some(ctx) = guard.as_ref() {
            return Ok(ctx.clone());
        }
        let partitions = self.partitions(family.class(), n)?;
        if partitions.is_empty() {
            return Err(Error::InvalidSize(format!("{} has no partitions of {n}", family.class())));
        }
        let cached = self.cache_dir.as_ref().and_then(|dir| cache::load(dir, family, n, big_n, &partitions));
        let ctx = match cached {
            Some(ctx) => ctx,
            None => {
                let ctx = WeingartenContext::build(family, n, big_n, partitions.as_ref().clone())?;
                if let Some(dir) = &self.cache_dir {
                    // A cache that cannot be written only costs a rebuild later.
                    let _ = cache::store(dir, &ctx);
                }
                ctx
            }
        };
        let ctx = Arc::new(ctx);
        *guard = Some(ctx.clone());
        Ok(ctx)
    }

    pub fn gram(&self, family: QGFamily, n: usize, big_n: u32) -> Result<Vec<Vec<Rational>>> {
        Ok(self.context(family, n, big_n)?.gram_rational())
    }

    pub fn weingarten(&self, family: QGFamily, n: usize, big_n: u32) -> Result<Vec<Vec<Rational>>> {
        Ok(self.context(family, n, big_n)?.weingarten().clone())
    }

    /// Haar state of `u_{i1 j1} ... u_{in jn}` with 1-based indices.
    pub fn moment(&self, family: QGFamily, big_n: u32, rows: &[u32], cols: &[u32]) -> Result<Rational> {
        family.check_n(big_n)?;
        if rows.len() != cols.len() {
            return Err(Error::MismatchedSize(format!("{} row and {} column indices", rows.len(), cols.len())));
        }
        for &v in rows.iter().chain(cols) {
            if v == 0 || v > big_n {
                return Err(Error::IndexOutOfRange { index: v, big_n });
            }
        }
        let n = rows.len();
        if n == 0 {
            return Ok(Rational::one());
        }
        self.check_size(family, n)?;
        let (p, q) = (kernel(rows), kernel(cols));
        let parts = self.partitions(family.class(), n)?;
        let left: Vec<usize> = (0..parts.len()).filter(|&a| leq(&parts[a], &p)).collect();
        if left.is_empty() {
            return Ok(Rational::zero());
        }
        let right: Vec<usize> = (0..parts.len()).filter(|&b| leq(&parts[b], &q)).collect();
        if right.is_empty() {
            return Ok(Rational::zero());
        }
        self.weighted_sum(family, n, big_n, &block_terms(&left, &right))
    }

    /// `sum over class pi <= p, sigma <= q of W(pi, sigma)`: the moment of
    /// any word whose row and column kernels are exactly `p` and `q`.
    pub fn moment_by_kernel(&self, family: QGFamily, big_n: u32, p: &SetPartition, q: &SetPartition) -> Result<Rational> {
        family.check_n(big_n)?;
        if p.n() != q.n() {
            return Err(Error::MismatchedSize(format!("kernels on {} and {} points", p.n(), q.n())));
        }
        for part in [p, q] {
            if part.block_count() > big_n as usize {
                return Err(Error::TooManyBlocks { blocks: part.block_count(), big_n });
            }
        }
        let n = p.n();
        self.check_size(family, n)?;
        let parts = self.partitions(family.class(), n)?;
        let left: Vec<usize> = (0..parts.len()).filter(|&a| leq(&parts[a], p)).collect();
        let right: Vec<usize> = (0..parts.len()).filter(|&b| leq(&parts[b], q)).collect();
        if left.is_empty() || right.is_empty() {
            return Ok(Rational::zero());
        }
        self.weighted_sum(family, n, big_n, &block_terms(&left, &right))
    }

    /// Haar state of a word whose indices may be summation variables: the
    /// sum over all values `1..=N` of every `Slot::Free`.
    pub fn contract(&self, family: QGFamily, big_n: u32, rows: &[Slot], cols: &[Slot]) -> Result<Rational> {
        family.check_n(big_n)?;
        if rows.len() != cols.len() {
            return Err(Error::MismatchedSize(format!("{} row and {} column slots", rows.len(), cols.len())));
        }
        for s in rows.iter().chain(cols) {
            if let Slot::Fixed(v) = *s {
                if v == 0 || v > big_n {
                    return Err(Error::IndexOutOfRange { index: v, big_n });
                }
            }
        }
        let n = rows.len();
        if n == 0 {
            return Ok(Rational::one());
        }
        self.check_size(family, n)?;
        let mut ids: HashMap<Slot, usize> = HashMap::new();
        let mut node = |s: Slot| {
            let next = ids.len();
            *ids.entry(s).or_insert(next)
        };
        let row_nodes: Vec<usize> = rows.iter().map(|&s| node(s)).collect();
        let col_nodes: Vec<usize> = cols.iter().map(|&s| node(s)).collect();
        let node_count = ids.len();
        let mut fixed = vec![false; node_count];
        for (s, &id) in &ids {
            fixed[id] = matches!(s, Slot::Fixed(_));
        }

        let parts = self.partitions(family.class(), n)?;
        // Row side first: each class partition either forces two distinct
        // fixed values together (and contributes nothing) or leaves a
        // partial identification of the slots.
        let mut row_states = Vec::new();
        for (a, p) in parts.iter().enumerate() {
            if let Some(uf) = merge(UnionFind::new(node_count), p, &row_nodes, &fixed) {
                row_states.push((a, uf));
            }
        }
        if row_states.is_empty() {
            return Ok(Rational::zero());
        }
        let col_pairs: Vec<Vec<(usize, usize)>> = parts.iter().map(|q| block_pairs(q, &col_nodes)).collect();
        let mut terms: Terms = Vec::new();
        for (a, (base, base_fixed)) in &row_states {
            'sigma: for (b, pairs) in col_pairs.iter().enumerate() {
                let mut uf = base.clone();
                let mut has_fixed = base_fixed.clone();
                for &(x, y) in pairs {
                    let (rx, ry) = (uf.find(x), uf.find(y));
                    if rx == ry {
                        continue;
                    }
                    if has_fixed[rx] && has_fixed[ry] {
                        continue 'sigma;
                    }
                    uf.union(rx, ry);
                    let r = uf.find(rx);
                    has_fixed[r] = has_fixed[rx] || has_fixed[ry];
                }
                let free = (0..node_count).filter(|&v| uf.find(v) == v && !has_fixed[v]).count();
                terms.push((*a as u32, b as u32, free as u8));
            }
        }
        self.weighted_sum(family, n, big_n, &terms)
    }

    /// `sum W(a, b) N^free` over `terms`, exactly or by lifting residues.
    fn weighted_sum(&self, family: QGFamily, n: usize, big_n: u32, terms: &Terms) -> Result<Rational> {
        if terms.is_empty() {
            return Ok(Rational::zero());
        }
        let parts = self.partitions(family.class(), n)?;
        let max_free = terms.iter().map(|t| t.2).max().unwrap_or(0) as usize;
        if parts.len() <= self.exact_limit {
            let ctx = self.context(family, n, big_n)?;
            let powers: Vec<BigInt> = (0..=max_free).map(|k| num_traits::pow(BigInt::from(big_n), k)).collect();
            let mut total = BigInt::zero();
            for &(a, b, free) in terms {
                let w = &ctx.w_num[a as usize][b as usize];
                if !w.is_zero() {
                    total += w * &powers[free as usize];
                }
            }
            return Ok(Rational::new(total, ctx.w_den.clone()));
        }
        self.check_size(family, n)?;
        let mut lifter = Lifter::new(CONFIRMATIONS);
        let mut usable = 0;
        for k in 0..MAX_PRIMES {
            let Some(inv) = self.inverse_mod(family, n, big_n, k)? else {
                continue;
            };
            usable += 1;
            let p = inv.p;
            let powers: Vec<u64> = (0..=max_free).map(|e| modular::pow_mod(big_n as u64, e as u64, p)).collect();
            let mut acc = 0u64;
            for &(a, b, free) in terms {
                acc = (acc + inv.get(a as usize, b as usize) * powers[free as usize]) % p;
            }
            if let Some(v) = lifter.push(acc, p) {
                return Ok(v);
            }
        }
        if usable == 0 {
            return Err(Error::SingularGram { family, n, big_n });
        }
        Err(Error::InvalidInput(format!(
            "{family} moment of length {n} at N = {big_n} did not stabilize within {MAX_PRIMES} primes"
        )))
    }

    /// Inverse Gram matrix modulo the `k`-th prime, memoized; `None` when
    /// the prime divides a pivot.
    fn inverse_mod(&self, family: QGFamily, n: usize, big_n: u32, k: usize) -> Result<Option<Arc<InverseModP>>> {
        let slot = self.modular.lock().unwrap().entry((family, n, big_n)).or_default().clone();
        let mut list = slot.lock().unwrap();
        while list.len() <= k {
            let parts = self.partitions(family.class(), n)?;
            let p = modular::nth_prime(list.len());
            list.push(modular::gram_inverse_mod(&parts, big_n, p).map(Arc::new));
        }
        Ok(list[k].clone())
    }
}

fn block_terms(left: &[usize], right: &[usize]) -> Terms {
    left.iter().flat_map(|&a| right.iter().map(move |&b| (a as u32, b as u32, 0))).collect()
}

/// Identifies the slots joined by the blocks of `p`; `None` when two
/// different fixed values would be identified.
fn merge(mut uf: UnionFind, p: &SetPartition, nodes: &[usize], fixed: &[bool]) -> Option<(UnionFind, Vec<bool>)> {
    let mut has_fixed = fixed.to_vec();
    for (x, y) in block_pairs(p, nodes) {
        let (rx, ry) = (uf.find(x), uf.find(y));
        if rx == ry {
            continue;
        }
        if has_fixed[rx] && has_fixed[ry] {
            return None;
        }
        uf.union(rx, ry);
        let r = uf.find(rx);
        has_fixed[r] = has_fixed[rx] || has_fixed[ry];
    }
    Some((uf, has_fixed))
}

/// Consecutive members of each block, mapped to slot nodes.
fn block_pairs(p: &SetPartition, nodes: &[usize]) -> Vec<(usize, usize)> {
    let mut last = vec![usize::MAX; p.block_count()];
    let mut out = Vec::new();
    for (k, &l) in p.labels().iter().enumerate() {
        let slot = &mut last[l as usize];
        if *slot != usize::MAX {
            out.push((nodes[*slot], nodes[k]));
        }
        *slot = k;
    }
    out
}

/// Least common multiple of the reduced denominators of `W`.
pub fn weingarten_denominator(ctx: &WeingartenContext) -> BigInt {
    ctx.weingarten().iter().flatten().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}
