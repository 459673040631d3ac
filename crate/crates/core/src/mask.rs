//! Single-word fast path for `p <= 63`, used by the exhaustive engines.
//!
//! Bit `i` of a mask is residue `i`. Every routine here has a [`ZpSet`]
//! counterpart and the two are cross-checked in tests.

use crate::zp::{PrimeModulus, ZpSet};

pub const MAX_MASK_MODULUS: u32 = 63;

#[derive(Debug, Clone)]
pub struct SmallZp {
    p: u32,
    full: u64,
    inverse: Vec<u32>,
}

impl SmallZp {
    pub fn new(modulus: PrimeModulus) -> Option<Self> {
        let p = modulus.get();
        if p > MAX_MASK_MODULUS {
            return None;
        }
        let inverse = (0..p).map(|x| modulus.inverse(x).unwrap_or(0)).collect();
        Some(SmallZp { p, full: (1u64 << p) - 1, inverse })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn full(&self) -> u64 {
        self.full
    }

    #[inline]
    pub fn inverse(&self, x: u32) -> u32 {
        self.inverse[x as usize]
    }

    /// `mask + t` for `t` in `0..p`.
    #[inline]
    pub fn rotate(&self, mask: u64, t: u32) -> u64 {
        if t == 0 {
            mask
        } else {
            ((mask << t) | (mask >> (self.p - t))) & self.full
        }
    }

    #[inline]
    pub fn sumset(&self, a: u64, b: u64) -> u64 {
        let (small, large) = if a.count_ones() <= b.count_ones() { (a, b) } else { (b, a) };
        let mut out = 0;
        let mut rest = small;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            out |= self.rotate(large, x);
        }
        out
    }

    #[inline]
    pub fn dilate(&self, a: u64, c: u32) -> u64 {
        let mut out = 0;
        let mut rest = a;
        while rest != 0 {
            let x = rest.trailing_zeros() as u64;
            rest &= rest - 1;
            out |= 1u64 << ((x * c as u64) % self.p as u64);
        }
        out
    }

    /// Largest cyclic gap between consecutive members and the member
    /// following it; ties go to the smallest such member. Empty masks give
    /// `(p, 0)` by convention.
    pub fn largest_gap(&self, a: u64) -> (u32, u32) {
        if a == 0 {
            return (self.p, 0);
        }
        let first = a.trailing_zeros();
        let last = 63 - a.leading_zeros();
        let mut best = (self.p - last + first, first);
        let mut prev = first;
        let mut rest = a & (a - 1);
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            if x - prev > best.0 {
                best = (x - prev, x);
            }
            prev = x;
        }
        best
    }

    /// Covering length with difference `g` (nonzero).
    pub fn covering_length(&self, a: u64, g: u32) -> u32 {
        if a == 0 {
            return 0;
        }
        let dilated = self.dilate(a, self.inverse(g));
        self.p - self.largest_gap(dilated).0 + 1
    }

    /// Longest cyclic run `(start, length)` of consecutive members in the
    /// mask, in the mask's own coordinates. Ties go to the smallest start.
    pub fn longest_run(&self, a: u64) -> (u32, u32) {
        if a == self.full {
            return (0, self.p);
        }
        let mut best = (0, 0);
        for start in 0..self.p {
            let prev = if start == 0 { self.p - 1 } else { start - 1 };
            if a >> start & 1 == 0 || a >> prev & 1 == 1 {
                continue;
            }
            let mut len = 0;
            while a >> ((start + len) % self.p) & 1 == 1 {
                len += 1;
            }
            if len > best.1 {
                best = (start, len);
            }
        }
        best
    }

    /// Longest run with difference `g`, as `(start, length)` in residue coordinates.
    pub fn longest_run_with_difference(&self, a: u64, g: u32) -> (u32, u32) {
        let (start, len) = self.longest_run(self.dilate(a, self.inverse(g)));
        ((start as u64 * g as u64 % self.p as u64) as u32, len)
    }

    pub fn to_set(&self, modulus: PrimeModulus, a: u64) -> ZpSet {
        ZpSet::from_words(modulus, vec![a])
    }

    pub fn from_set(&self, set: &ZpSet) -> u64 {
        set.words()[0]
    }
}
