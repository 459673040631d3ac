//! Arithmetic progressions in Z/pZ: covering lengths, contained runs,
//! rectification and the duality lemma for saturated sets.
//!
//! `ℓ_g(X)` is the length of the shortest difference-`g` progression that
//! contains `X`. After dilating by `g^{-1}` the progression becomes an
//! interval, so `ℓ_g(X) = p - G + 1` where `G` is the largest cyclic gap
//! between consecutive members of `g^{-1}·X`.
//!
//! Since `ℓ_g = ℓ_{-g}`, searches over differences only visit
//! `g in [1, (p-1)/2]`.

use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::zp::{PrimeModulus, ZpSet};

/// `{start, start + d, ..., start + (length-1) d}` in Z/pZ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Progression {
    modulus: PrimeModulus,
    start: u32,
    difference: u32,
    length: u32,
}

impl Progression {
    pub fn new(modulus: PrimeModulus, start: u32, difference: u32, length: u32) -> Result<Self> {
        let p = modulus.get();
        let difference = difference % p;
        if difference == 0 {
            return Err(Error::ZeroDifference);
        }
        if length > p {
            return Err(invalid(format!("progression length {length} exceeds p = {p}")));
        }
        Ok(Progression { modulus, start: start % p, difference, length })
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn start(&self) -> u32 {
        self.start
    }

    pub fn difference(&self) -> u32 {
        self.difference
    }

    pub fn len(&self) -> usize {
        self.length as usize
    }

    pub fn is_empty(&self) -> bool {
        self.length == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        let m = self.modulus;
        (0..self.length).map(move |k| m.add(self.start, m.mul(k, self.difference)))
    }

    pub fn to_set(&self) -> ZpSet {
        let mut s = ZpSet::empty(self.modulus);
        self.iter().for_each(|x| s.insert(x));
        s
    }

    pub fn contains(&self, x: u32) -> bool {
        let m = self.modulus;
        let inv = m.inverse(self.difference).expect("nonzero difference");
        m.mul(m.sub(x, self.start), inv) < self.length
    }

    /// Whether the progression equals its own negation.
    pub fn is_symmetric(&self) -> bool {
        let s = self.to_set();
        s == s.negate()
    }
}

/// `p:start+k*diff,len`
impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}+k*{},{}", self.modulus, self.start, self.difference, self.length)
    }
}

impl FromStr for Progression {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected p:start+k*diff,len, got {s:?}"));
        let (p, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let (start, rest) = rest.split_once("+k*").ok_or_else(bad)?;
        let (diff, len) = rest.split_once(',').ok_or_else(bad)?;
        let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
        let modulus = PrimeModulus::new(num(p)?)?;
        let (start, diff, len) = (num(start)?, num(diff)?, num(len)?);
        if start >= modulus.get() as u64 || diff >= modulus.get() as u64 || len > modulus.get() as u64 {
            return Err(bad());
        }
        Progression::new(modulus, start as u32, diff as u32, len as u32)
    }
}

/// Largest cyclic gap of a nonempty set and the member after it.
/// Ties go to the smallest following member; a singleton has gap `p`.
fn largest_gap(set: &ZpSet) -> Option<(u32, u32)> {
    let p = set.p();
    let mut it = set.iter();
    let first = it.next()?;
    let mut prev = first;
    let mut gaps = Vec::new();
    for x in it {
        gaps.push((x - prev, x));
        prev = x;
    }
    let mut best = (p - prev + first, first);
    for (gap, x) in gaps {
        if gap > best.0 {
            best = (gap, x);
        }
    }
    Some(best)
}

pub(crate) fn searched_differences(p: u32) -> std::ops::RangeInclusive<u32> {
    1..=((p - 1) / 2).max(1)
}

/// `ℓ_g(X)`.
pub fn covering_length(x: &ZpSet, g: u32) -> Result<usize> {
    Ok(covering_progression(x, g)?.len())
}

/// The shortest difference-`g` progression containing `X`.
pub fn covering_progression(x: &ZpSet, g: u32) -> Result<Progression> {
    let m = x.modulus();
    let g_inv = m.inverse_nonzero(g)?;
    let dilated = x.dilate(g_inv as i64);
    let (gap, start) = largest_gap(&dilated).ok_or(Error::EmptySet)?;
    Progression::new(m, m.mul(start, g), g, m.get() - gap + 1)
}

/// Minimises `ℓ_g(X)` over nonzero `g`; ties go to the smallest
/// `g in [1, (p-1)/2]`. Sets with at most one element get the degenerate
/// length-`|X|` progression with difference 1.
pub fn minimal_covering_progression(x: &ZpSet) -> (u32, Progression) {
    let m = x.modulus();
    if x.len() <= 1 {
        let start = x.min().unwrap_or(0);
        let prog = Progression::new(m, start, 1, x.len() as u32).expect("valid degenerate progression");
        return (1, prog);
    }
    let mut best: Option<(u32, Progression)> = None;
    for g in searched_differences(m.get()) {
        let prog = covering_progression(x, g).expect("nonempty set, nonzero g");
        if best.as_ref().is_none_or(|(_, b)| prog.len() < b.len()) {
            best = Some((g, prog));
        }
    }
    best.expect("at least one difference searched")
}

/// Longest run of consecutive elements of `X` along difference `g`,
/// i.e. the longest difference-`g` progression contained in `X`.
/// Ties go to the run with the smallest start in `g^{-1}·X` coordinates.
pub fn longest_contained_progression(x: &ZpSet, g: u32) -> Result<Progression> {
    let m = x.modulus();
    let g_inv = m.inverse_nonzero(g)?;
    if x.is_empty() {
        return Err(Error::EmptySet);
    }
    if x.is_full() {
        return Progression::new(m, 0, g, m.get());
    }
    let dilated = x.dilate(g_inv as i64);
    let p = m.get();
    let mut best = (0u32, 0u32);
    for start in dilated.iter() {
        if dilated.contains(if start == 0 { p - 1 } else { start - 1 }) {
            continue;
        }
        let mut len = 1;
        while dilated.contains((start + len) % p) {
            len += 1;
        }
        if len > best.1 {
            best = (start, len);
        }
    }
    Progression::new(m, m.mul(best.0, g), g, best.1)
}

/// A difference `g` with `ℓ_g(A) + ℓ_g(B) <= p + 1`, choosing the `g`
/// that minimises the sum (smallest `g` on ties), or `None`.
pub fn is_rectifiable(a: &ZpSet, b: &ZpSet) -> Result<Option<u32>> {
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch(a.p(), b.p()));
    }
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    let p = a.p() as usize;
    let mut best: Option<(usize, u32)> = None;
    for g in searched_differences(a.p()) {
        let total = covering_length(a, g)? + covering_length(b, g)?;
        if total <= p + 1 && best.is_none_or(|(t, _)| total < t) {
            best = Some((total, g));
        }
    }
    Ok(best.map(|(_, g)| g))
}

/// Image of a set under `a0 + s g ↦ s`, anchored at the start of its
/// shortest difference-`g` covering progression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RectifiedImage {
    pub source: ZpSet,
    pub difference_used: u32,
    pub anchor: u32,
    /// Sorted, with minimum 0 and maximum `ℓ_g(source) - 1`.
    pub offsets: Vec<i64>,
}

impl RectifiedImage {
    /// Number of solutions of `a + b = c + d` among the offsets.
    pub fn additive_energy(&self) -> u64 {
        crate::integer::additive_energy(&self.offsets)
    }
}

pub fn rectify(a: &ZpSet, g: u32) -> Result<RectifiedImage> {
    let m = a.modulus();
    let prog = covering_progression(a, g)?;
    let g_inv = m.inverse_nonzero(g)?;
    let mut offsets: Vec<i64> = a.iter().map(|x| m.mul(m.sub(x, prog.start()), g_inv) as i64).collect();
    offsets.sort_unstable();
    Ok(RectifiedImage { source: a.clone(), difference_used: prog.difference(), anchor: prog.start(), offsets })
}

/// Outcome of checking `-B + complement(A+B) ⊆ complement(A)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualInclusion {
    /// The inclusion itself; true for every input.
    pub inclusion_holds: bool,
    /// Whether the inclusion is an equality.
    pub equality: bool,
    /// `(A ∪ {x}) + B != A + B` for every `x` outside `A`, checked directly.
    pub saturated: bool,
}

pub fn dual_inclusion_check(a: &ZpSet, b: &ZpSet) -> Result<DualInclusion> {
    let sum = a.sumset(b)?;
    let lhs = b.negate().sumset(&sum.complement())?;
    let a_bar = a.complement();
    let saturated = a_bar.iter().all(|x| !ZpSet::singleton(a.modulus(), x).unwrap().sumset(b).unwrap().is_subset(&sum));
    Ok(DualInclusion { inclusion_holds: lhs.is_subset(&a_bar), equality: lhs == a_bar, saturated })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ZpSet {
        s.parse().unwrap()
    }

    /// Shortest covering progression by trying every start and length.
    fn brute_covering_length(x: &ZpSet, g: u32) -> usize {
        let m = x.modulus();
        (1..=m.get())
            .find(|&len| (0..m.get()).any(|s| x.is_subset(&Progression::new(m, s, g, len).unwrap().to_set())))
            .unwrap() as usize
    }

    #[test]
    fn covering_length_examples() {
        assert_eq!(covering_length(&set("7:0,1,2"), 1).unwrap(), 3);
        assert_eq!(covering_length(&set("7:0,3,6"), 3).unwrap(), 3);
        // gaps 3,3,1: the best cover {3,4,5,6,0} has length 7 - 3 + 1
        assert_eq!(covering_length(&set("7:0,3,6"), 1).unwrap(), 5);
        assert_eq!(brute_covering_length(&set("7:0,3,6"), 1), 5);
        assert_eq!(covering_length(&set("7:0,3,6"), 0), Err(Error::ZeroDifference));
        assert_eq!(covering_length(&set("7:"), 1), Err(Error::EmptySet));
        assert_eq!(covering_length(&set("7:4"), 2).unwrap(), 1);
    }

    #[test]
    fn covering_length_matches_brute_force() {
        for lit in ["11:0,1,5,6", "13:2,5,7,12", "7:1,2,4", "11:0,2,4,6,9"] {
            let x = set(lit);
            for g in 1..x.p() {
                assert_eq!(covering_length(&x, g).unwrap(), brute_covering_length(&x, g), "{lit} g={g}");
            }
        }
    }

    #[test]
    fn minimal_covering_examples() {
        let (g, p) = minimal_covering_progression(&set("13:0,2,4,6"));
        assert_eq!((g, p.len()), (2, 4));
        let (g, p) = minimal_covering_progression(&set("7:1,2,4"));
        assert_eq!((g, p.to_set()), (1, set("7:1,2,3,4")));
        let x = set("11:0,1,5,6");
        assert_eq!(covering_length(&x, 1).unwrap(), 7);
        let (g, p) = minimal_covering_progression(&x);
        assert_eq!((g, p.len()), (5, 4));
        assert!(x.is_subset(&p.to_set()));
        let (g, p) = minimal_covering_progression(&set("11:3"));
        assert_eq!((g, p.len(), p.start()), (1, 1, 3));
    }

    #[test]
    fn longest_contained_examples() {
        assert_eq!(longest_contained_progression(&set("7:0,1,2,3,4,5,6"), 1).unwrap().len(), 7);
        let run = longest_contained_progression(&set("7:0,1,2,4"), 1).unwrap();
        assert_eq!(run.to_set(), set("7:0,1,2"));
        // 9 + 2 = 0 (mod 11) so the whole set is one difference-2 run from 9
        let run = longest_contained_progression(&set("11:0,2,4,6,9"), 2).unwrap();
        assert_eq!((run.start(), run.len()), (9, 5));
        assert_eq!(longest_contained_progression(&set("7:0,1"), 0), Err(Error::ZeroDifference));
    }

    #[test]
    fn rectifiable_examples() {
        let a = set("13:0,1,2");
        assert_eq!(is_rectifiable(&a, &a).unwrap(), Some(1));
        let full = set("5:0,1,2,3,4");
        assert_eq!(is_rectifiable(&full, &full).unwrap(), None);
        let (a, b) = (set("11:0,1,5,6"), set("11:0,1"));
        // g = 1 gives 7 + 2, g = 5 gives 4 + 3
        assert_eq!(covering_length(&b, 5).unwrap(), 3);
        assert_eq!(is_rectifiable(&a, &b).unwrap(), Some(5));
    }

    #[test]
    fn rectify_examples() {
        assert_eq!(rectify(&set("7:3,4,5"), 1).unwrap().offsets, vec![0, 1, 2]);
        assert_eq!(rectify(&set("7:0,3,6"), 3).unwrap().offsets, vec![0, 1, 2]);
        let img = rectify(&set("11:0,2,9"), 1).unwrap();
        assert_eq!((img.anchor, img.offsets.clone()), (9, vec![0, 2, 4]));
        assert_eq!(rectify(&set("11:0,2,9"), 0), Err(Error::ZeroDifference));
    }

    #[test]
    fn dual_inclusion_examples() {
        let a = set("7:0,1");
        let d = dual_inclusion_check(&a, &a).unwrap();
        assert!(d.inclusion_holds);
        // every x outside A pushes x or x + 1 outside A + A = {0,1,2}
        assert!(d.saturated);
        assert_eq!(d.equality, d.saturated);

        let z = set("5:0");
        let d = dual_inclusion_check(&z, &z).unwrap();
        assert_eq!(d, DualInclusion { inclusion_holds: true, equality: true, saturated: true });

        // A + B is everything: complement empty, equality only if A is full
        let (a, b) = (set("5:0,1,2"), set("5:0,1,2"));
        let d = dual_inclusion_check(&a, &b).unwrap();
        assert_eq!(d, DualInclusion { inclusion_holds: true, equality: false, saturated: false });
    }

    #[test]
    fn progression_literal() {
        let prog: Progression = "7:1+k*3,4".parse().unwrap();
        assert_eq!(prog.to_set(), set("7:0,1,3,4"));
        assert_eq!(prog.to_string(), "7:1+k*3,4");
        assert!(prog.contains(0) && !prog.contains(6));
        assert!("7:1+k*0,4".parse::<Progression>().is_err());
        assert!("7:1+k*3,8".parse::<Progression>().is_err());
        assert!(Progression::new(PrimeModulus::new(7).unwrap(), 5, 3, 7).unwrap().to_set().is_full());
        assert!("7:6+k*1,3".parse::<Progression>().unwrap().is_symmetric());
    }
}
