//! Premise/conclusion checks for small-doubling statements in `Z/pZ`.
//!
//! Every statement here has the same conclusion: progressions `P_A ⊇ A` and
//! `P_2A ⊆ 2A` with a common difference, `|P_A| <= |A| + r + 1` and
//! `|P_2A| >= 2|A| − 1`. The profiles differ only in their premises. Both
//! premises and conclusion are affine invariant, so exhaustive runs can
//! visit one representative per orbit.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::{alpha_eta, cubic_alpha};
use crate::error::{invalid, Error, Result};
use crate::mask::SmallZp;
use crate::progression::{covering_progression, longest_contained_progression, searched_differences, Progression};
use crate::zp::{DoublingReport, PrimeModulus, ZpSet};

/// Largest modulus accepted by [`exhaustive_verify`].
pub const MAX_EXHAUSTIVE_P: u32 = 31;
/// Below this modulus every subset is visited; from it on only canonical
/// orbit representatives are.
pub const ORBIT_ENUMERATION_FROM: u32 = 17;

const SHARD_BITS: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EtaChoice {
    Fixed(f64),
    /// `η = |A| / p`, the largest admissible value for each set.
    PerSet,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HypothesisProfile {
    /// `2A ≠ Z/pZ` and `|2A| <= min(3|A| − 4, p − r − 4)`.
    Conjecture11,
    /// `|2A| <= (2 + α)|A| − 3` and `|2A| <= 3p/4`, `α` the cubic root at `ε = 3/4`.
    Thm12,
    /// `|A| >= ηp`, `|2A| < p`, `|2A| <= (2 + α(η, p))|A| − 3`, `|A| <= (p − r)/3`.
    Thm13(EtaChoice),
    /// `|2A| <= (2 + α(ε))|A| − 3` and `|2A| <= εp`.
    Thm21 { epsilon: f64 },
    /// `|2A| <= (2 + alpha)|A| − 3` and `|2A| <= 3p/4` with a caller-chosen
    /// `alpha`, for demonstrating that the checker can fail.
    Stress { alpha: f64 },
}

impl HypothesisProfile {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HypothesisProfile::Thm13(EtaChoice::Fixed(eta)) if !(eta > 0.0 && eta < 1.0) => {
                Err(invalid(format!("eta must lie in (0, 1), got {eta}")))
            }
            HypothesisProfile::Thm21 { epsilon } if !(epsilon > 0.0 && epsilon <= 0.75) => {
                Err(invalid(format!("epsilon must lie in (0, 3/4], got {epsilon}")))
            }
            HypothesisProfile::Stress { alpha } if !(alpha.is_finite() && alpha >= 0.0) => {
                Err(invalid(format!("stress alpha must be finite and nonnegative, got {alpha}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for HypothesisProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HypothesisProfile::Conjecture11 => write!(f, "conj11"),
            HypothesisProfile::Thm12 => write!(f, "thm12"),
            HypothesisProfile::Thm13(EtaChoice::Fixed(eta)) => write!(f, "thm13(eta={eta})"),
            HypothesisProfile::Thm13(EtaChoice::PerSet) => write!(f, "thm13(eta=per-set)"),
            HypothesisProfile::Thm21 { epsilon } => write!(f, "thm21(epsilon={epsilon})"),
            HypothesisProfile::Stress { alpha } => write!(f, "stress(alpha={alpha})"),
        }
    }
}

/// A profile resolved against one modulus, with every `α` precomputed.
#[derive(Debug, Clone)]
pub struct PremiseChecker {
    profile: HypothesisProfile,
    p: u32,
    /// `α` indexed by `|A|`; a single entry repeated unless `η` is per set.
    alpha_by_size: Vec<f64>,
    epsilon: f64,
}

impl PremiseChecker {
    pub fn new(profile: HypothesisProfile, modulus: PrimeModulus) -> Result<Self> {
        profile.validate()?;
        let p = modulus.get();
        let pf = p as f64;
        let sizes = p as usize + 1;
        let (alpha_by_size, epsilon) = match profile {
            HypothesisProfile::Conjecture11 => (Vec::new(), 1.0),
            HypothesisProfile::Thm12 => (vec![cubic_alpha(0.75)?.value; sizes], 0.75),
            HypothesisProfile::Thm21 { epsilon } => (vec![cubic_alpha(epsilon)?.value; sizes], epsilon),
            HypothesisProfile::Stress { alpha } => (vec![alpha; sizes], 0.75),
            // α(η, p) is only defined for p >= 3; NaN makes every premise false.
            HypothesisProfile::Thm13(EtaChoice::Fixed(eta)) => {
                (vec![alpha_eta(eta, pf).unwrap_or(f64::NAN); sizes], 1.0)
            }
            HypothesisProfile::Thm13(EtaChoice::PerSet) => {
                let alphas = (0..sizes)
                    .map(|k| {
                        if k == 0 || k >= p as usize {
                            f64::NAN
                        } else {
                            alpha_eta(k as f64 / pf, pf).unwrap_or(f64::NAN)
                        }
                    })
                    .collect();
                (alphas, 1.0)
            }
        };
        Ok(PremiseChecker { profile, p, alpha_by_size, epsilon })
    }

    pub fn profile(&self) -> HypothesisProfile {
        self.profile
    }

    /// The `α` in force for sets of size `size_a`, if the profile has one.
    pub fn alpha(&self, size_a: usize) -> Option<f64> {
        self.alpha_by_size.get(size_a).copied()
    }

    pub fn holds(&self, size_a: usize, size_2a: usize) -> bool {
        if size_a == 0 {
            return false;
        }
        let (k, s, p) = (size_a as i64, size_2a as i64, self.p as i64);
        let r = s - 2 * k;
        let alpha_bound = |alpha: f64| (s as f64) <= (2.0 + alpha) * k as f64 - 3.0;
        match self.profile {
            HypothesisProfile::Conjecture11 => s < p && s <= 3 * k - 4 && s <= p - r - 4,
            HypothesisProfile::Thm12 | HypothesisProfile::Stress { .. } => {
                4 * s <= 3 * p && alpha_bound(self.alpha_by_size[size_a])
            }
            HypothesisProfile::Thm21 { .. } => {
                (s as f64) <= self.epsilon * p as f64 && alpha_bound(self.alpha_by_size[size_a])
            }
            HypothesisProfile::Thm13(choice) => {
                let size_ok = match choice {
                    EtaChoice::Fixed(eta) => k as f64 >= eta * p as f64 * (1.0 - 1e-12),
                    EtaChoice::PerSet => k < p,
                };
                size_ok && s < p && 3 * k <= p - r && alpha_bound(self.alpha_by_size[size_a])
            }
        }
    }
}

/// Whether `A` satisfies the premises of `profile`.
pub fn check_hypotheses(a: &ZpSet, profile: HypothesisProfile) -> Result<(bool, DoublingReport)> {
    let report = a.doubling_report()?;
    let checker = PremiseChecker::new(profile, a.modulus())?;
    Ok((checker.holds(report.size_a, report.size_2a), report))
}

/// The conclusion's pair of progressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub difference: u32,
    pub p_a: Progression,
    pub p_2a: Progression,
}

impl Witness {
    /// Rechecks every conclusion inequality from the progressions' members.
    pub fn validate(&self, a: &ZpSet) -> bool {
        let two = a.doubled();
        let k = a.len() as i64;
        let r = two.len() as i64 - 2 * k;
        self.p_a.difference() == self.difference
            && self.p_2a.difference() == self.difference
            && self.p_a.modulus() == a.modulus()
            && a.iter().all(|x| self.p_a.iter().any(|y| y == x))
            && self.p_a.len() as i64 <= k + r + 1
            && self.p_2a.iter().all(|x| two.contains(x))
            && self.p_2a.len() as i64 >= 2 * k - 1
    }
}

/// First `g in [1, (p−1)/2]` for which the conclusion holds, or `None`,
/// including when `2A` is the whole group.
pub fn find_witness(a: &ZpSet) -> Option<Witness> {
    if a.is_empty() {
        return None;
    }
    let two = a.doubled();
    if two.is_full() {
        return None;
    }
    let k = a.len() as i64;
    let cover_max = two.len() as i64 - k + 1;
    for g in searched_differences(a.p()) {
        let p_a = covering_progression(a, g).expect("nonempty set, nonzero g");
        if p_a.len() as i64 > cover_max {
            continue;
        }
        let p_2a = longest_contained_progression(&two, g).expect("nonempty set, nonzero g");
        if p_2a.len() as i64 >= 2 * k - 1 {
            return Some(Witness { difference: g, p_a, p_2a });
        }
    }
    None
}

fn mask_has_witness(z: &SmallZp, a: u64, two: u64) -> bool {
    if two == z.full() {
        return false;
    }
    let k = a.count_ones() as i64;
    let cover_max = two.count_ones() as i64 - k + 1;
    searched_differences(z.p()).any(|g| {
        z.covering_length(a, g) as i64 <= cover_max && z.longest_run_with_difference(two, g).1 as i64 >= 2 * k - 1
    })
}

/// For equal-size masks, `lhs` has the lexicographically smaller sorted
/// member list iff the lowest differing bit belongs to it.
#[inline]
fn mask_less(lhs: u64, rhs: u64) -> bool {
    let diff = lhs ^ rhs;
    diff != 0 && lhs & (diff & diff.wrapping_neg()) != 0
}

fn affine_images(z: &SmallZp, a: u64) -> impl Iterator<Item = u64> + '_ {
    (1..z.p()).flat_map(move |c| {
        let d = z.dilate(a, c);
        let mut rest = d;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            Some(z.rotate(d, (z.p() - x) % z.p()))
        })
    })
}

fn canonical_mask(z: &SmallZp, a: u64) -> u64 {
    affine_images(z, a).fold(a, |best, cand| if mask_less(cand, best) { cand } else { best })
}

fn is_canonical_mask(z: &SmallZp, a: u64) -> bool {
    !affine_images(z, a).any(|cand| mask_less(cand, a))
}

/// The affine image `c·A + t` (`c ≠ 0`) with the lexicographically least
/// sorted member list.
pub fn canonicalize(a: &ZpSet) -> ZpSet {
    let m = a.modulus();
    if a.is_empty() {
        return a.clone();
    }
    if let Some(z) = SmallZp::new(m) {
        return z.to_set(m, canonical_mask(&z, z.from_set(a)));
    }
    let mut best = a.clone();
    for c in 1..m.get() as i64 {
        let d = a.dilate(c);
        for x in d.iter() {
            let cand = d.translate(-(x as i64));
            if cand < best {
                best = cand;
            }
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRecord {
    pub canonical_set: ZpSet,
    pub profile: HypothesisProfile,
    pub hypotheses_hold: bool,
    pub witness: Option<Witness>,
    pub counterexample: bool,
}

impl VerificationRecord {
    pub fn evaluate(a: &ZpSet, profile: HypothesisProfile) -> Result<Self> {
        let canonical_set = canonicalize(a);
        let (hypotheses_hold, _) = check_hypotheses(&canonical_set, profile)?;
        let witness = find_witness(&canonical_set);
        let counterexample = hypotheses_hold && witness.is_none();
        Ok(VerificationRecord { canonical_set, profile, hypotheses_hold, witness, counterexample })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Enumeration {
    /// Every nonempty subset.
    Raw,
    /// One canonical representative per affine orbit.
    Orbits,
    Sampled {
        seed: u64,
    },
}

impl fmt::Display for Enumeration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Enumeration::Raw => write!(f, "raw"),
            Enumeration::Orbits => write!(f, "orbits"),
            Enumeration::Sampled { .. } => write!(f, "sampled"),
        }
    }
}

/// Counts over the visited sets. `witness_found` and `counterexamples`
/// partition `premise_holds`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerificationSummary {
    pub p: u32,
    pub profile: HypothesisProfile,
    pub enumeration: Enumeration,
    pub sets_checked: u64,
    pub premise_holds: u64,
    pub witness_found: u64,
    pub counterexamples: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationRun {
    pub summary: VerificationSummary,
    /// Distinct counterexample orbits, sorted by canonical set.
    pub counterexamples: Vec<VerificationRecord>,
}

#[derive(Debug, Default, Clone)]
struct ShardTally {
    sets: u64,
    premise: u64,
    witness: u64,
    failures: Vec<u64>,
}

impl ShardTally {
    fn merge(mut self, other: ShardTally) -> ShardTally {
        self.sets += other.sets;
        self.premise += other.premise;
        self.witness += other.witness;
        self.failures.extend(other.failures);
        self
    }

    fn visit(&mut self, z: &SmallZp, checker: &PremiseChecker, a: u64) {
        self.sets += 1;
        let two = z.sumset(a, a);
        if !checker.holds(a.count_ones() as usize, two.count_ones() as usize) {
            return;
        }
        self.premise += 1;
        if mask_has_witness(z, a, two) {
            self.witness += 1;
        } else {
            self.failures.push(a);
        }
    }
}

fn thread_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))
}

fn finish_run(
    modulus: PrimeModulus,
    profile: HypothesisProfile,
    enumeration: Enumeration,
    tally: (u64, u64, u64),
    failures: Vec<ZpSet>,
) -> Result<VerificationRun> {
    let mut records = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    let counterexamples = failures.len() as u64;
    for set in failures {
        let canonical = canonicalize(&set);
        if seen.insert(canonical.clone()) {
            records.push(VerificationRecord::evaluate(&canonical, profile)?);
        }
    }
    records.sort_by(|x, y| x.canonical_set.cmp(&y.canonical_set));
    debug_assert!(records.iter().all(|r| r.counterexample));
    let (sets_checked, premise_holds, witness_found) = tally;
    debug_assert_eq!(premise_holds, witness_found + counterexamples);
    Ok(VerificationRun {
        summary: VerificationSummary {
            p: modulus.get(),
            profile,
            enumeration,
            sets_checked,
            premise_holds,
            witness_found,
            counterexamples,
        },
        counterexamples: records,
    })
}

/// Checks every nonempty subset (`p < 17`) or every affine orbit
/// (`17 <= p <= 31`) of `Z/pZ`. Work is split into shards by the high bits
/// of the membership vector; `jobs = 0` uses all available cores. The
/// result does not depend on `jobs`.
pub fn exhaustive_verify(modulus: PrimeModulus, profile: HypothesisProfile, jobs: usize) -> Result<VerificationRun> {
    let p = modulus.get();
    if p > MAX_EXHAUSTIVE_P {
        return Err(Error::Budget(format!(
            "exhaustive enumeration is limited to p <= {MAX_EXHAUSTIVE_P}, got {p}; use sampling instead"
        )));
    }
    let checker = PremiseChecker::new(profile, modulus)?;
    let z = SmallZp::new(modulus).expect("p within mask range");
    let orbits = p >= ORBIT_ENUMERATION_FROM;
    // Orbit mode enumerates sets containing {0, 1}, the shape of every
    // canonical form with at least two elements; the singleton orbit is
    // added separately.
    let free_bits = if orbits { p - 2 } else { p };
    let shard_bits = SHARD_BITS.min(free_bits);
    let low_bits = free_bits - shard_bits;
    let tally = thread_pool(jobs)?.install(|| {
        (0u64..1 << shard_bits)
            .into_par_iter()
            .map(|shard| {
                let mut t = ShardTally::default();
                for low in 0u64..1 << low_bits {
                    let free = shard << low_bits | low;
                    if orbits {
                        let a = free << 2 | 0b11;
                        if is_canonical_mask(&z, a) {
                            t.visit(&z, &checker, a);
                        }
                    } else if free != 0 {
                        t.visit(&z, &checker, free);
                    }
                }
                t
            })
            .reduce(ShardTally::default, ShardTally::merge)
    });
    let mut tally = tally;
    if orbits {
        tally.visit(&z, &checker, 1);
    }
    tally.failures.sort_unstable();
    let failures = tally.failures.iter().map(|&a| z.to_set(modulus, a)).collect();
    let enumeration = if orbits { Enumeration::Orbits } else { Enumeration::Raw };
    finish_run(modulus, profile, enumeration, (tally.sets, tally.premise, tally.witness), failures)
}

/// Range of `|A|` drawn by [`sample_verify`], chosen so that the size
/// alone does not already violate the premises.
pub fn sample_size_range(profile: HypothesisProfile, p: u32) -> (usize, usize) {
    let p = p as usize;
    let (lo, hi) = match profile {
        // 2|A| − 1 <= |2A| <= p − r − 4 <= p − 3
        HypothesisProfile::Conjecture11 => (2, (p.saturating_sub(2)) / 2),
        // 2|A| − 1 <= |2A| <= 3p/4
        HypothesisProfile::Thm12 | HypothesisProfile::Stress { .. } => (2, (3 * p / 4).div_ceil(2)),
        HypothesisProfile::Thm21 { epsilon } => (2, ((epsilon * p as f64).floor() as usize).div_ceil(2)),
        // 3|A| <= p − r with r >= −1
        HypothesisProfile::Thm13(EtaChoice::Fixed(eta)) => ((eta * p as f64).ceil() as usize, (p + 1) / 3),
        HypothesisProfile::Thm13(EtaChoice::PerSet) => (2, (p + 1) / 3),
    };
    let hi = hi.clamp(1, p);
    (lo.clamp(1, hi), hi)
}

/// A random subset of size `k` of a random progression of length at most
/// `⌊1.3k⌋`, and with probability 1/2 up to three members swapped for
/// random non-members.
fn sample_low_doubling_set(modulus: PrimeModulus, range: (usize, usize), rng: &mut ChaCha8Rng) -> ZpSet {
    let p = modulus.get();
    let k = rng.gen_range(range.0..=range.1);
    let max_len = (13 * k / 10).clamp(k, p as usize);
    let len = rng.gen_range(k..=max_len) as u32;
    let start = rng.gen_range(0..p);
    let diff = rng.gen_range(1..p.max(2)) % p;
    let diff = if diff == 0 { 1 } else { diff };
    let mut positions: Vec<u32> = (0..len).collect();
    let (chosen, _) = positions.partial_shuffle(rng, k);
    let mut set = ZpSet::empty(modulus);
    for &i in chosen.iter() {
        set.insert(modulus.add(start, modulus.mul(i, diff)));
    }
    if rng.gen_bool(0.5) && k < p as usize {
        let swaps = rng.gen_range(1..=3usize).min(k).min(p as usize - k);
        for _ in 0..swaps {
            let members = set.to_vec();
            let out = members[rng.gen_range(0..members.len())];
            let incoming = loop {
                let x = rng.gen_range(0..p);
                if !set.contains(x) {
                    break x;
                }
            };
            set.remove(out);
            set.insert(incoming);
        }
    }
    set
}

/// Seeded sampling biased toward small doubling; deterministic in `seed`.
pub fn sample_verify(
    modulus: PrimeModulus,
    profile: HypothesisProfile,
    n_samples: u64,
    seed: u64,
) -> Result<VerificationRun> {
    let checker = PremiseChecker::new(profile, modulus)?;
    let range = sample_size_range(profile, modulus.get());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut premise, mut witness) = (0, 0);
    let mut failures = Vec::new();
    for _ in 0..n_samples {
        let a = sample_low_doubling_set(modulus, range, &mut rng);
        let two = a.doubled();
        if !checker.holds(a.len(), two.len()) {
            continue;
        }
        premise += 1;
        if find_witness(&a).is_some() {
            witness += 1;
        } else {
            failures.push(a);
        }
    }
    finish_run(modulus, profile, Enumeration::Sampled { seed }, (n_samples, premise, witness), failures)
}
