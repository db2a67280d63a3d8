//! Weingarten sums modulo word-sized primes, lifted back to rationals by
//! Chinese remaindering and rational reconstruction. Used for Gram matrices
//! too large for fraction-free elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::partition::{join_block_count, SetPartition};
use crate::rational::Rational;

/// Residues of `G^{-1}` modulo one prime, row-major.
pub(crate) struct InverseModP {
    pub p: u64,
    n: usize,
    entries: Vec<u32>,
}

impl InverseModP {
    pub fn get(&self, a: usize, b: usize) -> u64 {
        self.entries[a * self.n + b] as u64
    }
}

/// `x mod p` for `x < 2^63` with a precomputed reciprocal.
#[derive(Clone, Copy)]
struct Reducer {
    p: u64,
    m: u128,
}

impl Reducer {
    fn new(p: u64) -> Self {
        Reducer { p, m: (1u128 << 64) / p as u128 }
    }

    #[inline]
    fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m) >> 64) as u64;
        let mut r = x - q * self.p;
        while r >= self.p {
            r -= self.p;
        }
        r
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// The `k`-th prime below `2^31`, counting down.
pub(crate) fn nth_prime(k: usize) -> u64 {
    static PRIMES: std::sync::Mutex<Vec<u64>> = std::sync::Mutex::new(Vec::new());
    let mut list = PRIMES.lock().unwrap();
    let mut c = list.last().copied().unwrap_or(1 << 31);
    while list.len() <= k {
        c -= 1;
        while !is_prime(c) {
            c -= 1;
        }
        list.push(c);
    }
    list[k]
}

/// Gauss-Jordan inverse of the Gram matrix modulo `p`. Pivots are taken in
/// order; `None` when one vanishes, in which case the caller moves on to
/// another prime.
pub(crate) fn gram_inverse_mod(parts: &[SetPartition], big_n: u32, p: u64) -> Option<InverseModP> {
    let n = parts.len();
    let red = Reducer::new(p);
    let powers: Vec<u64> = (0..=parts.first().map_or(0, |q| q.n()))
        .map(|k| pow_mod(big_n as u64, k as u64, p))
        .collect();
    let width = 2 * n;
    let mut aug = vec![0u64; n * width];
    for a in 0..n {
        for b in 0..n {
            aug[a * width + b] = powers[join_block_count(&parts[a], &parts[b])];
        }
        aug[a * width + n + a] = 1;
    }
    for k in 0..n {
        let pivot = aug[k * width + k];
        if pivot == 0 {
            return None;
        }
        let inv = pow_mod(pivot, p - 2, p);
        // Without row swaps, row k's right half is supported on n..=n+k.
        let hi = n + k + 1;
        {
            let row = &mut aug[k * width..(k + 1) * width];
            for j in (k..n).chain(n..hi) {
                row[j] = red.reduce(row[j] * inv);
            }
        }
        let (before, rest) = aug.split_at_mut(k * width);
        let (pivot_row, after) = rest.split_at_mut(width);
        let eliminate = |row: &mut [u64]| {
            let f = row[k];
            if f == 0 {
                return;
            }
            let g = p - f;
            for j in (k..n).chain(n..hi) {
                row[j] = red.reduce(row[j] + g * pivot_row[j]);
            }
        };
        before.chunks_mut(width).for_each(eliminate);
        after.chunks_mut(width).for_each(eliminate);
    }
    let mut entries = Vec::with_capacity(n * n);
    for a in 0..n {
        entries.extend(aug[a * width + n..(a + 1) * width].iter().map(|&x| x as u32));
    }
    Some(InverseModP { p, n, entries })
}

/// Smallest `a/b` with `a = b r mod m` and `|a|, b <= sqrt(m/2)`.
pub(crate) fn rational_reconstruct(r: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m >> 1usize).sqrt();
    let (mut r0, mut r1) = (m.clone(), r.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    let q = Rational::new(r1, t1);
    if q.denom().gcd(m).is_one() {
        Some(q)
    } else {
        None
    }
}

/// `x mod p` for a rational whose denominator is a unit modulo `p`.
pub(crate) fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let den = q.denom().mod_floor(&pb);
    if den.is_zero() {
        return None;
    }
    let num = q.numer().mod_floor(&pb);
    let to_u64 = |x: &BigInt| x.to_u64_digits().1.first().copied().unwrap_or(0);
    Some(to_u64(&num) * pow_mod(to_u64(&den), p - 2, p) % p)
}

/// Incremental Chinese remaindering with an acceptance rule: a candidate
/// rational is accepted once it matches the residues of `confirmations`
/// further primes it was not built from.
pub(crate) struct Lifter {
    value: BigInt,
    modulus: BigInt,
    candidate: Option<Rational>,
    confirmed: usize,
    confirmations: usize,
}

impl Lifter {
    pub fn new(confirmations: usize) -> Self {
        Lifter { value: BigInt::zero(), modulus: BigInt::one(), candidate: None, confirmed: 0, confirmations }
    }

    /// Feeds one residue; returns the accepted value once stable.
    pub fn push(&mut self, residue: u64, p: u64) -> Option<Rational> {
        match &self.candidate {
            Some(c) if rational_mod(c, p) == Some(residue) => self.confirmed += 1,
            _ => self.confirmed = 0,
        }
        if self.confirmed >= self.confirmations {
            return self.candidate.clone();
        }
        let pb = BigInt::from(p);
        let m_inv = BigInt::from(pow_mod((&self.modulus % &pb).to_u64_digits().1.first().copied().unwrap_or(0), p - 2, p));
        let diff = (BigInt::from(residue) - &self.value).mod_floor(&pb);
        let t = (diff * m_inv).mod_floor(&pb);
        self.value += &self.modulus * t;
        self.modulus *= &pb;
        if self.confirmed == 0 {
            self.candidate = rational_reconstruct(&self.value, &self.modulus);
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::{enumerate, PartitionClass};
    use crate::rational::frac;

    #[test]
    fn reconstruction_recovers_small_fractions() {
        for (a, b) in [(7, 570), (-3, 14), (0, 1), (123456, 7)] {
            let mut l = Lifter::new(2);
            let q = frac(a, b);
            let mut out = None;
            for k in 0..10 {
                let p = nth_prime(k);
                if let Some(v) = l.push(rational_mod(&q, p).unwrap(), p) {
                    out = Some(v);
                    break;
                }
            }
            assert_eq!(out, Some(q));
        }
    }

    #[test]
    fn modular_inverse_matches_gram() {
        let parts = enumerate(PartitionClass::Nc, 4, 12).unwrap();
        let p = nth_prime(0);
        let inv = gram_inverse_mod(&parts, 5, p).unwrap();
        let n = parts.len();
        for a in 0..n {
            for b in 0..n {
                let mut s = 0u64;
                for c in 0..n {
                    let g = pow_mod(5, join_block_count(&parts[a], &parts[c]) as u64, p);
                    s = (s + g * inv.get(c, b)) % p;
                }
                assert_eq!(s, (a == b) as u64);
            }
        }
    }
}
