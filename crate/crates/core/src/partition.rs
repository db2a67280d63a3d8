//! Set partitions of `{1..n}` in canonical form, the four partition classes
//! used by the quantum group families, and the lattice operations on them.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest `n` accepted by [`enumerate`] unless the caller raises it.
pub const DEFAULT_MAX_SIZE: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PartitionClass {
    #[serde(rename = "ALL")]
    All,
    #[serde(rename = "NC")]
    Nc,
    #[serde(rename = "NC2")]
    Nc2,
    #[serde(rename = "NC_EVEN")]
    NcEven,
}

impl PartitionClass {
    fn block_size_ok(self, size: usize) -> bool {
        match self {
            PartitionClass::All | PartitionClass::Nc => size >= 1,
            PartitionClass::Nc2 => size == 2,
            PartitionClass::NcEven => size % 2 == 0 && size > 0,
        }
    }

    pub fn contains(self, p: &SetPartition) -> bool {
        if !p.blocks().iter().all(|b| self.block_size_ok(b.len())) {
            return false;
        }
        self == PartitionClass::All || p.is_noncrossing()
    }
}

impl fmt::Display for PartitionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PartitionClass::All => "ALL",
            PartitionClass::Nc => "NC",
            PartitionClass::Nc2 => "NC2",
            PartitionClass::NcEven => "NC_EVEN",
        })
    }
}

/// A partition stored as its restricted growth string: `labels[k]` is the
/// block of element `k + 1`, blocks numbered in order of their minima.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetPartition {
    labels: Vec<u8>,
}

impl SetPartition {
    /// Builds a partition from 1-based blocks in any order.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidSize("partitions need n >= 1".into()));
        }
        let mut owner = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &e in block {
                if e == 0 || e > n {
                    return Err(Error::InvalidPartition(format!("element {e} outside 1..={n}")));
                }
                if owner[e - 1] != usize::MAX {
                    return Err(Error::InvalidPartition(format!("element {e} appears twice")));
                }
                owner[e - 1] = b;
            }
        }
        if let Some(k) = owner.iter().position(|&o| o == usize::MAX) {
            return Err(Error::InvalidPartition(format!("element {} is not covered", k + 1)));
        }
        Ok(kernel(&owner))
    }

    /// The partition with a single block.
    pub fn one_block(n: usize) -> Self {
        SetPartition { labels: vec![0; n] }
    }

    /// The partition into singletons.
    pub fn singletons(n: usize) -> Self {
        SetPartition { labels: (0..n as u8).collect() }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    pub fn block_count(&self) -> usize {
        self.labels.iter().map(|&l| l as usize + 1).max().unwrap_or(0)
    }

    /// Blocks as sorted 1-based element lists, sorted by their minima.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (k, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(k + 1);
        }
        out
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }

    pub fn is_noncrossing(&self) -> bool {
        let l = &self.labels;
        let n = l.len();
        for a in 0..n {
            for b in a + 1..n {
                if l[b] == l[a] {
                    continue;
                }
                for c in b + 1..n {
                    if l[c] != l[a] {
                        continue;
                    }
                    if l[c + 1..].iter().any(|&d| d == l[b]) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

impl Ord for SetPartition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.blocks().cmp(&other.blocks())
    }
}

impl PartialOrd for SetPartition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("{")?;
            for (j, e) in b.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SetPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SetPartition {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(d)?;
        let n = blocks.iter().map(Vec::len).sum();
        SetPartition::from_blocks(n, &blocks).map_err(serde::de::Error::custom)
    }
}

/// The partition induced by equal entries: positions `a` and `b` share a
/// block iff `values[a] == values[b]`.
pub fn kernel<T: Eq + Hash>(values: &[T]) -> SetPartition {
    let mut seen: HashMap<&T, u8> = HashMap::new();
    let labels = values
        .iter()
        .map(|v| {
            let next = seen.len() as u8;
            *seen.entry(v).or_insert(next)
        })
        .collect();
    SetPartition { labels }
}

/// True iff every block of `p` lies inside a block of `q`.
pub fn leq(p: &SetPartition, q: &SetPartition) -> bool {
    if p.n() != q.n() {
        return false;
    }
    let mut image = vec![u8::MAX; p.block_count()];
    for (a, b) in p.labels.iter().zip(&q.labels) {
        let slot = &mut image[*a as usize];
        if *slot == u8::MAX {
            *slot = *b;
        } else if *slot != *b {
            return false;
        }
    }
    true
}

/// Finest partition coarser than both arguments.
pub fn join(p: &SetPartition, q: &SetPartition) -> Result<SetPartition> {
    if p.n() != q.n() {
        return Err(Error::MismatchedSize(format!("join of sizes {} and {}", p.n(), q.n())));
    }
    Ok(join_unchecked(p, q))
}

pub(crate) fn join_unchecked(p: &SetPartition, q: &SetPartition) -> SetPartition {
    let n = p.n();
    let mut uf = UnionFind::new(n);
    let mut first_p = vec![usize::MAX; p.block_count()];
    let mut first_q = vec![usize::MAX; q.block_count()];
    for k in 0..n {
        for (first, label) in [(&mut first_p, p.labels[k]), (&mut first_q, q.labels[k])] {
            let slot = &mut first[label as usize];
            if *slot == usize::MAX {
                *slot = k;
            } else {
                uf.union(*slot, k);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|k| uf.find(k)).collect();
    kernel(&roots)
}

/// Number of blocks of the join, without building it.
pub fn join_block_count(p: &SetPartition, q: &SetPartition) -> usize {
    join_unchecked(p, q).block_count()
}

/// All partitions of `{1..n}` in `class`, sorted lexicographically by their
/// block lists. Fails for `n = 0` or `n > max_size`.
pub fn enumerate(class: PartitionClass, n: usize, max_size: usize) -> Result<Vec<SetPartition>> {
    if n == 0 {
        return Err(Error::InvalidSize("partitions need n >= 1".into()));
    }
    if n > max_size {
        return Err(Error::CapExceeded { what: format!("enumerating {class} partitions"), n, cap: max_size });
    }
    let mut out = match class {
        PartitionClass::All => all_partitions(n),
        _ => {
            let mut acc = Vec::new();
            let mut owner = vec![0u8; n];
            fill_interval(class, &mut owner, 0, n, 0, &mut |owner, _| acc.push(kernel(owner)));
            acc
        }
    };
    out.sort();
    Ok(out)
}

fn all_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0u8; n];
    fn rec(rgs: &mut Vec<u8>, k: usize, max: u8, out: &mut Vec<SetPartition>) {
        if k == rgs.len() {
            out.push(SetPartition { labels: rgs.clone() });
            return;
        }
        for v in 0..=max + 1 {
            rgs[k] = v;
            rec(rgs, k + 1, max.max(v), out);
        }
    }
    rgs[0] = 0;
    if n == 1 {
        out.push(SetPartition { labels: rgs });
    } else {
        rec(&mut rgs, 1, 0, &mut out);
    }
    out
}

/// Enumerates noncrossing fillings of the interval `lo..hi`, calling `done`
/// with the completed owner array and the next free block id.
fn fill_interval(
    class: PartitionClass,
    owner: &mut Vec<u8>,
    lo: usize,
    hi: usize,
    next: u8,
    done: &mut dyn FnMut(&mut Vec<u8>, u8),
) {
    if lo == hi {
        done(owner, next);
        return;
    }
    let block = next;
    owner[lo] = block;
    let mut members = vec![lo];
    extend_block(class, owner, lo, hi, block, &mut members, next + 1, done);
}

/// Chooses the remaining members of the block opened at `members[0]`; once
/// the block is closed, fills the gaps between consecutive members and the
/// tail after the last one.
#[allow(clippy::too_many_arguments)]
fn extend_block(
    class: PartitionClass,
    owner: &mut Vec<u8>,
    lo: usize,
    hi: usize,
    block: u8,
    members: &mut Vec<usize>,
    next: u8,
    done: &mut dyn FnMut(&mut Vec<u8>, u8),
) {
    let last = *members.last().unwrap();
    if class.block_size_ok(members.len()) {
        let segments: Vec<(usize, usize)> = members
            .windows(2)
            .map(|w| (w[0] + 1, w[1]))
            .chain(std::iter::once((last + 1, hi)))
            .collect();
        fill_segments(class, owner, &segments, next, done);
    }
    if class == PartitionClass::Nc2 && members.len() >= 2 {
        return;
    }
    for m in last + 1..hi {
        owner[m] = block;
        members.push(m);
        extend_block(class, owner, lo, hi, block, members, next, done);
        members.pop();
    }
}

fn fill_segments(
    class: PartitionClass,
    owner: &mut Vec<u8>,
    segments: &[(usize, usize)],
    next: u8,
    done: &mut dyn FnMut(&mut Vec<u8>, u8),
) {
    match segments.split_first() {
        None => done(owner, next),
        Some((&(a, b), rest)) => {
            fill_interval(class, owner, a, b, next, &mut |owner, next| {
                fill_segments(class, owner, rest, next, done)
            });
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }
}
