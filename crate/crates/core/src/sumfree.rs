//! Sum-free sets (`m = 1`) and the check that a large sum-free set has a
//! dilate inside the middle interval `[|A|, p − |A|]`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::msf::is_m_sum_free;
use crate::progression::Progression;
use crate::zp::{PrimeModulus, ZpSet};

/// Smallest prime modulus for which the structure result is proved.
pub const GUARANTEED_FROM_P: u32 = 14_000;
/// Density from which the structure result is proved.
pub const GUARANTEED_DENSITY: f64 = 0.313;

pub fn is_sum_free(a: &ZpSet) -> bool {
    is_m_sum_free(a, 1)
}

/// The integers strictly between `p/3` and `2p/3`.
pub fn mid_interval(modulus: PrimeModulus) -> ZpSet {
    let p = modulus.get() as u64;
    ZpSet::from_residues(modulus, p / 3 + 1..(2 * p).div_ceil(3)).expect("residues below p")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureWitness {
    pub m: u32,
    /// `[|A|, p − |A|]` with difference 1.
    pub interval: Progression,
}

impl StructureWitness {
    pub fn validate(&self, a: &ZpSet) -> bool {
        let target = self.interval.to_set();
        a.dilate(self.m as i64).is_subset(&target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureCheck {
    /// `2|A| <= p`, so that `[|A|, p − |A|]` is nonempty.
    pub applicable: bool,
    pub witness: Option<StructureWitness>,
}

/// Smallest `m in [1, p−1]` with `m·A ⊆ [|A|, p − |A|]`.
pub fn structure_check(a: &ZpSet) -> StructureCheck {
    let m = a.modulus();
    let (p, k) = (m.get(), a.len() as u32);
    if a.is_empty() || 2 * k > p {
        return StructureCheck { applicable: false, witness: None };
    }
    let (lo, hi) = (k, p - k);
    let members = a.to_vec();
    let witness = (1..p).find(|&c| members.iter().all(|&x| (lo..=hi).contains(&m.mul(c, x)))).map(|c| {
        StructureWitness { m: c, interval: Progression::new(m, lo, 1, hi - lo + 1).expect("nonempty interval") }
    });
    StructureCheck { applicable: true, witness }
}

/// Outcome of [`theorem17_harness`].
#[derive(Debug, Clone, PartialEq)]
pub struct HarnessSummary {
    pub p: u32,
    pub density_threshold: f64,
    pub samples: u64,
    pub passed: u64,
    pub failed: u64,
    /// `p >= 14000` and threshold `>= 0.313`: every sample must pass.
    pub guaranteed: bool,
    /// Sets without a structure witness, sorted.
    pub failures: Vec<ZpSet>,
}

/// Whether `x` can join the sum-free set `a` without creating `u + v = w`.
fn can_join(a: &ZpSet, x: u32) -> bool {
    let m = a.modulus();
    x != 0
        && !a.contains(x)
        && !a.contains(m.add(x, x))
        && a.translate(x as i64).is_disjoint(a)
        && a.negate().translate(x as i64).is_disjoint(a)
}

/// A sum-free set of density at least `threshold`: the middle interval
/// with random removals down to no less than `⌈threshold·p⌉` members,
/// followed by random sum-free insertions and a random dilation.
fn perturbed_sample(modulus: PrimeModulus, threshold: f64, rng: &mut ChaCha8Rng) -> ZpSet {
    let p = modulus.get();
    let mut set = mid_interval(modulus);
    let floor = (threshold * p as f64).ceil().max(0.0) as usize;
    let removable = set.len().saturating_sub(floor);
    let removals = if removable == 0 { 0 } else { rng.gen_range(0..=removable) };
    let mut members = set.to_vec();
    let (gone, _) = members.partial_shuffle(rng, removals);
    for &x in gone.iter() {
        set.remove(x);
    }
    for _ in 0..2 * removals + 8 {
        let x = rng.gen_range(1..p);
        if can_join(&set, x) {
            set.insert(x);
        }
    }
    set.dilate(rng.gen_range(1..p) as i64)
}

/// Runs [`structure_check`] on seeded random sum-free sets of density at
/// least `density_threshold`. Below `p = 14000` or density `0.313` the
/// counts are observations only.
pub fn theorem17_harness(modulus: PrimeModulus, density_threshold: f64, n_samples: u64, seed: u64) -> HarnessSummary {
    let p = modulus.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut summary = HarnessSummary {
        p,
        density_threshold,
        samples: 0,
        passed: 0,
        failed: 0,
        guaranteed: p >= GUARANTEED_FROM_P && density_threshold >= GUARANTEED_DENSITY,
        failures: Vec::new(),
    };
    if p < 5 {
        return summary;
    }
    for _ in 0..n_samples {
        let a = perturbed_sample(modulus, density_threshold, &mut rng);
        debug_assert!(is_sum_free(&a));
        summary.samples += 1;
        match structure_check(&a).witness {
            Some(_) => summary.passed += 1,
            None => {
                summary.failed += 1;
                summary.failures.push(a);
            }
        }
    }
    summary.failures.sort();
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(s: &str) -> ZpSet {
        s.parse().unwrap()
    }

    fn modulus(p: u64) -> PrimeModulus {
        PrimeModulus::new(p).unwrap()
    }

    #[test]
    fn sum_free_examples() {
        assert!(is_sum_free(&set("13:5,6,7,8")));
        assert!(!is_sum_free(&set("7:0")));
        assert!(!is_sum_free(&set("13:1,2")));
    }

    #[test]
    fn structure_examples() {
        let a = set("13:5,6,7,8");
        let w = structure_check(&a).witness.unwrap();
        assert_eq!(w.m, 1);
        assert_eq!(w.interval.to_set(), ZpSet::from_residues(modulus(13), 4..=9).unwrap());

        let b = a.dilate(2);
        assert_eq!(b, set("13:1,3,10,12"));
        let w = structure_check(&b).witness.unwrap();
        // 7 = 2^{-1} maps b back onto a; −7 = 6 does too and is smaller
        assert_eq!(w.m, 6);
        assert_eq!(b.dilate(6), a);
        assert_eq!(b.dilate(7), a);
        assert!(w.validate(&b));

        let big = ZpSet::from_residues(modulus(13), 0..7).unwrap();
        assert_eq!(structure_check(&big), StructureCheck { applicable: false, witness: None });
    }

    #[test]
    fn mid_interval_shape() {
        assert_eq!(mid_interval(modulus(101)), ZpSet::from_residues(modulus(101), 34..=67).unwrap());
        for p in [5u64, 7, 11, 13, 101, 499] {
            let i = mid_interval(modulus(p));
            assert!(is_sum_free(&i), "p={p}");
            assert_eq!(structure_check(&i).witness.unwrap().m, 1, "p={p}");
        }
    }

    #[test]
    fn harness_small_runs() {
        let s = theorem17_harness(modulus(1009), 0.32, 10, 3);
        assert_eq!(s.samples, 10);
        assert_eq!(s.passed + s.failed, 10);
        assert!(!s.guaranteed);
        assert_eq!(s, theorem17_harness(modulus(1009), 0.32, 10, 3));
        let empty = theorem17_harness(modulus(1009), 0.32, 0, 3);
        assert_eq!((empty.samples, empty.passed), (0, 0));
    }

    #[test]
    fn perturbed_samples_are_sum_free_and_dense() {
        let m = modulus(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let a = perturbed_sample(m, 0.32, &mut rng);
            assert!(is_sum_free(&a));
            assert!(a.len() as f64 >= 0.32 * 1009.0);
        }
    }

    proptest! {
        #[test]
        fn structure_is_dilation_invariant(words in any::<u64>(), c in 1i64..61) {
            let m = modulus(61);
            let a = ZpSet::from_words(m, vec![words]);
            prop_assume!(!a.is_empty());
            let (s, t) = (structure_check(&a), structure_check(&a.dilate(c)));
            prop_assert_eq!(s.applicable, t.applicable);
            prop_assert_eq!(s.witness.is_some(), t.witness.is_some());
            if let Some(w) = s.witness {
                prop_assert!(w.validate(&a));
            }
        }
    }
}
