//! Residue arithmetic and bitset-backed subsets of Z/pZ.
//!
//! A [`ZpSet`] stores exactly `p` membership bits, identified with the
//! integers `0..p`. Sumsets are built by OR-ing rotations of one operand's
//! bit vector over the members of the other, which keeps the cost at
//! `O(min(|A|, |B|) * p / 64)` word operations.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::primes::is_prime;

/// Largest modulus accepted for in-memory sets.
pub const MAX_MODULUS: u64 = 1 << 20;

/// A prime `p` with `2 <= p <= 2^20`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeModulus(u32);

impl PrimeModulus {
    pub fn new(p: u64) -> Result<Self> {
        if p > MAX_MODULUS {
            return Err(Error::ModulusTooLarge(p));
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeModulus(p as u32))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn as_usize(self) -> usize {
        self.0 as usize
    }

    /// Reduces any integer into `0..p`.
    #[inline]
    pub fn reduce(self, x: i64) -> u32 {
        x.rem_euclid(self.0 as i64) as u32
    }

    #[inline]
    pub fn add(self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn sub(self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.0 as u64 - (b % self.0) as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn mul(self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.0 as u64) as u32
    }

    #[inline]
    pub fn neg(self, a: u32) -> u32 {
        self.sub(0, a)
    }

    pub fn pow(self, base: u32, mut exp: u64) -> u32 {
        let mut acc = 1 % self.0;
        let mut b = base % self.0;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse, `None` for `0`.
    pub fn inverse(self, a: u32) -> Option<u32> {
        let a = a % self.0;
        (a != 0).then(|| self.pow(a, self.0 as u64 - 2))
    }

    pub(crate) fn inverse_nonzero(self, a: u32) -> Result<u32> {
        self.inverse(a).ok_or(Error::ZeroDifference)
    }
}

impl fmt::Display for PrimeModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

const WORD: usize = 64;

fn word_count(p: usize) -> usize {
    p.div_ceil(WORD)
}

/// `dst |= src << shift`, bits pushed past the end of `dst` are dropped.
fn or_shl(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / WORD, shift % WORD);
    for i in (ws..dst.len()).rev() {
        let j = i - ws;
        let mut v = src.get(j).copied().unwrap_or(0) << bs;
        if bs != 0 && j > 0 {
            v |= src[j - 1] >> (WORD - bs);
        }
        dst[i] |= v;
    }
}

/// `dst |= src >> shift`.
fn or_shr(dst: &mut [u64], src: &[u64], shift: usize) {
    let (ws, bs) = (shift / WORD, shift % WORD);
    for (i, d) in dst.iter_mut().enumerate() {
        let j = i + ws;
        if j >= src.len() {
            break;
        }
        let mut v = src[j] >> bs;
        if bs != 0 && j + 1 < src.len() {
            v |= src[j + 1] << (WORD - bs);
        }
        *d |= v;
    }
}

/// A subset of Z/pZ.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZpSet {
    modulus: PrimeModulus,
    words: Vec<u64>,
}

impl ZpSet {
    pub fn empty(modulus: PrimeModulus) -> Self {
        ZpSet { modulus, words: vec![0; word_count(modulus.as_usize())] }
    }

    pub fn full(modulus: PrimeModulus) -> Self {
        let mut s = Self::empty(modulus);
        s.words.iter_mut().for_each(|w| *w = !0);
        s.trim();
        s
    }

    pub fn singleton(modulus: PrimeModulus, x: u32) -> Result<Self> {
        Self::from_residues(modulus, [x as u64])
    }

    /// Builds a set from residues already in `0..p`.
    pub fn from_residues<I: IntoIterator<Item = u64>>(modulus: PrimeModulus, items: I) -> Result<Self> {
        let mut s = Self::empty(modulus);
        for x in items {
            if x >= modulus.get() as u64 {
                return Err(Error::ResidueOutOfRange { residue: x, p: modulus.get() });
            }
            s.insert(x as u32);
        }
        Ok(s)
    }

    /// Builds a set from arbitrary integers, reducing each mod `p`.
    pub fn from_integers<I: IntoIterator<Item = i64>>(modulus: PrimeModulus, items: I) -> Self {
        let mut s = Self::empty(modulus);
        for x in items {
            s.insert(modulus.reduce(x));
        }
        s
    }

    /// Wraps a raw membership vector. Bits at positions `>= p` are cleared.
    pub fn from_words(modulus: PrimeModulus, mut words: Vec<u64>) -> Self {
        words.resize(word_count(modulus.as_usize()), 0);
        let mut s = ZpSet { modulus, words };
        s.trim();
        s
    }

    fn trim(&mut self) {
        let p = self.modulus.as_usize();
        let rem = p % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.modulus.get()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        let x = x as usize;
        x < self.modulus.as_usize() && self.words[x / WORD] >> (x % WORD) & 1 == 1
    }

    /// Inserts `x mod p`.
    #[inline]
    pub fn insert(&mut self, x: u32) {
        let x = (x % self.modulus.get()) as usize;
        self.words[x / WORD] |= 1 << (x % WORD);
    }

    #[inline]
    pub fn remove(&mut self, x: u32) {
        let x = (x % self.modulus.get()) as usize;
        self.words[x / WORD] &= !(1 << (x % WORD));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.modulus.as_usize()
    }

    /// Members in increasing order.
    pub fn iter(&self) -> Members<'_> {
        Members { words: &self.words, index: 0, current: self.words.first().copied().unwrap_or(0) }
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn min(&self) -> Option<u32> {
        self.iter().next()
    }

    fn check_same(&self, other: &ZpSet) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.p(), other.p()));
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &ZpSet) -> bool {
        self.modulus == other.modulus && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ZpSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &ZpSet) -> Result<ZpSet> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(ZpSet { modulus: self.modulus, words })
    }

    pub fn intersection(&self, other: &ZpSet) -> Result<ZpSet> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Ok(ZpSet { modulus: self.modulus, words })
    }

    pub fn complement(&self) -> ZpSet {
        let mut s = ZpSet { modulus: self.modulus, words: self.words.iter().map(|w| !w).collect() };
        s.trim();
        s
    }

    /// `self + t`.
    pub fn translate(&self, t: i64) -> ZpSet {
        let t = self.modulus.reduce(t) as usize;
        if t == 0 {
            return self.clone();
        }
        let mut out = ZpSet::empty(self.modulus);
        self.or_rotated_into(&mut out.words, t);
        out
    }

    fn or_rotated_into(&self, dst: &mut [u64], t: usize) {
        let p = self.modulus.as_usize();
        or_shl(dst, &self.words, t);
        if t != 0 {
            or_shr(dst, &self.words, p - t);
        }
        let rem = p % WORD;
        if rem != 0 {
            if let Some(last) = dst.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// The dilate `m·A = {m x : x in A}`, with `m` reduced mod `p`.
    pub fn dilate(&self, m: i64) -> ZpSet {
        let m = self.modulus.reduce(m);
        if m == 1 {
            return self.clone();
        }
        let mut out = ZpSet::empty(self.modulus);
        for x in self.iter() {
            out.insert(self.modulus.mul(x, m));
        }
        out
    }

    /// `-A`.
    pub fn negate(&self) -> ZpSet {
        self.dilate(-1)
    }

    /// `A + B = {a + b}`; empty when either operand is empty.
    pub fn sumset(&self, other: &ZpSet) -> Result<ZpSet> {
        self.check_same(other)?;
        let (small, large) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut out = ZpSet::empty(self.modulus);
        for a in small.iter() {
            large.or_rotated_into(&mut out.words, a as usize);
        }
        Ok(out)
    }

    /// `A - B = {a - b}`.
    pub fn difference_set(&self, other: &ZpSet) -> Result<ZpSet> {
        self.check_same(other)?;
        self.sumset(&other.negate())
    }

    /// `2A`.
    pub fn doubled(&self) -> ZpSet {
        self.sumset(self).expect("same modulus")
    }

    pub fn doubling_report(&self) -> Result<DoublingReport> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        let size_a = self.len();
        let size_2a = self.doubled().len();
        Ok(DoublingReport { size_a, size_2a, r: size_2a as i64 - 2 * size_a as i64 })
    }

    /// `(A + A) / A = {(a1 + a2) a3^{-1}}`.
    pub fn ratio_sumset(&self) -> Result<ZpSet> {
        if self.contains(0) {
            return Err(Error::ZeroMember);
        }
        let doubled = self.doubled();
        let mut out = ZpSet::empty(self.modulus);
        for a in self.iter() {
            let inv = self.modulus.inverse(a).expect("nonzero member");
            for s in doubled.iter() {
                out.insert(self.modulus.mul(s, inv));
            }
        }
        Ok(out)
    }

    /// Number of quadruples `(a, b, c, d)` in `A^4` with `a + b = c + d`.
    pub fn additive_energy(&self) -> u64 {
        let p = self.modulus.as_usize();
        let mut reps = vec![0u64; p];
        let members = self.to_vec();
        for &a in &members {
            for &b in &members {
                reps[self.modulus.add(a, b) as usize] += 1;
            }
        }
        reps.iter().map(|r| r * r).sum()
    }
}

impl PartialOrd for ZpSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by modulus, then lexicographically by the increasing member list.
impl Ord for ZpSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.modulus.cmp(&other.modulus).then_with(|| self.iter().cmp(other.iter()))
    }
}

impl fmt::Debug for ZpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZpSet({self})")
    }
}

/// Set literal `p:a1,a2,...,ak` with strictly increasing residues.
impl fmt::Display for ZpSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.p())?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl FromStr for ZpSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (p, rest) = s.trim().split_once(':').ok_or_else(|| Error::Parse(format!("missing ':' in {s:?}")))?;
        let p: u64 = p.trim().parse().map_err(|_| Error::Parse(format!("bad modulus {p:?}")))?;
        let modulus = PrimeModulus::new(p)?;
        let mut set = ZpSet::empty(modulus);
        let mut prev: Option<u64> = None;
        for tok in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let x: u64 = tok.parse().map_err(|_| Error::Parse(format!("bad residue {tok:?}")))?;
            if x >= p {
                return Err(Error::ResidueOutOfRange { residue: x, p: p as u32 });
            }
            if prev.is_some_and(|q| q >= x) {
                return Err(Error::Parse(format!("residues must be strictly increasing at {x}")));
            }
            prev = Some(x);
            set.insert(x as u32);
        }
        Ok(set)
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Members<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some((self.index * WORD + bit) as u32);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

/// Sizes of `A` and `2A` and the derived doubling parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DoublingReport {
    pub size_a: usize,
    pub size_2a: usize,
    /// `|2A| - 2|A|`.
    pub r: i64,
}

impl DoublingReport {
    /// `beta = (r + 3) / |A|` as an exact numerator/denominator pair.
    pub fn beta_ratio(&self) -> (i64, usize) {
        (self.r + 3, self.size_a)
    }

    pub fn beta(&self) -> f64 {
        (self.r + 3) as f64 / self.size_a as f64
    }
}
