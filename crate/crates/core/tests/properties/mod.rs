//! Property checks shared by the standalone suites and the acceptance
//! runner. Each check returns a `TestCaseError` on violation so it can run
//! under `proptest!` or a `TestRunner`.

#![allow(dead_code)]

use std::collections::HashMap;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use zpadd::integer::integer_sumset;
use zpadd::progression::{covering_length, dual_inclusion_check, is_rectifiable, rectify};
use zpadd::verify::{canonicalize, check_hypotheses, find_witness};
use zpadd::{EtaChoice, HypothesisProfile, PrimeModulus, ZpSet};

pub type CheckResult = Result<(), TestCaseError>;

/// Runs `check` on `cases` values from `strategy` with a fixed seed.
pub fn run_seeded<S: Strategy>(strategy: S, cases: u32, check: impl Fn(S::Value) -> CheckResult) -> Result<(), String> {
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let rng = TestRng::deterministic_rng(RngAlgorithm::ChaCha);
    TestRunner::new_with_rng(config, rng).run(&strategy, check).map_err(|e| e.to_string())
}

fn modulus(p: u64) -> PrimeModulus {
    PrimeModulus::new(p).unwrap()
}

// Cauchy–Davenport

const CD_PRIMES: [u64; 10] = [2, 3, 5, 7, 11, 13, 31, 61, 101, 199];

fn direct_sumset(a: &[u32], b: &[u32], p: u32) -> Vec<bool> {
    let mut hit = vec![false; p as usize];
    for &x in a {
        for &y in b {
            hit[((x + y) % p) as usize] = true;
        }
    }
    hit
}

pub fn cd_case() -> impl Strategy<Value = (u64, Vec<u32>, Vec<u32>)> {
    prop::sample::select(CD_PRIMES.to_vec()).prop_flat_map(|p| {
        let elems = prop::collection::vec(0..p as u32, 1..(p as usize).min(40) + 1);
        (Just(p), elems.clone(), elems)
    })
}

/// `|A + B| >= min(p, |A| + |B| − 1)`, and the bitset sumset agrees with a
/// direct pairwise one.
pub fn check_cauchy_davenport((p, a, b): (u64, Vec<u32>, Vec<u32>)) -> CheckResult {
    let m = modulus(p);
    let sa = ZpSet::from_residues(m, a.iter().map(|&x| x as u64)).unwrap();
    let sb = ZpSet::from_residues(m, b.iter().map(|&x| x as u64)).unwrap();
    let sum = sa.sumset(&sb).unwrap();
    prop_assert!(sum.len() >= (sa.len() + sb.len() - 1).min(p as usize));
    let direct = direct_sumset(&a, &b, p as u32);
    for x in 0..p as u32 {
        prop_assert_eq!(direct[x as usize], sum.contains(x), "p={} x={}", p, x);
    }
    Ok(())
}

pub fn progression_case() -> impl Strategy<Value = (u64, u64, u64, u64, u64)> {
    (prop::sample::select(CD_PRIMES.to_vec()), 1u64..199, 0u64..199, 1u64..60, 1u64..60)
}

/// Two progressions with a common difference meet the bound with equality.
pub fn check_progressions_extremal((p, g, s, k, l): (u64, u64, u64, u64, u64)) -> CheckResult {
    let g = g % p;
    if g == 0 || k > p || l > p {
        return Ok(());
    }
    let m = modulus(p);
    let prog = |len: u64| ZpSet::from_residues(m, (0..len).map(|i| (s + i * g) % p)).unwrap();
    prop_assert_eq!(prog(k).sumset(&prog(l)).unwrap().len() as u64, (k + l - 1).min(p));
    Ok(())
}

// Dual inclusion and saturation

fn members(mask: u64, p: u32) -> Vec<u32> {
    (0..p).filter(|&x| mask >> x & 1 == 1).collect()
}

fn sum_mask(a: &[u32], b: &[u32], p: u32) -> u64 {
    let mut out = 0;
    for &x in a {
        for &y in b {
            out |= 1 << ((x + y) % p);
        }
    }
    out
}

/// Direct evaluation of `(inclusion, equality, saturated)` for
/// `−B + complement(A + B)` against `complement(A)`.
fn direct_dual(a_mask: u64, b_mask: u64, p: u32) -> (bool, bool, bool) {
    let full = (1u64 << p) - 1;
    let (a, b) = (members(a_mask, p), members(b_mask, p));
    let sum = sum_mask(&a, &b, p);
    let mut lhs = 0u64;
    for &y in &b {
        for z in members(full & !sum, p) {
            lhs |= 1 << ((z + p - y) % p);
        }
    }
    let a_bar = full & !a_mask;
    let saturated = members(a_bar, p).iter().all(|&x| sum_mask(&[x], &b, p) & !sum != 0);
    (lhs & !a_bar == 0, lhs == a_bar, saturated)
}

pub fn check_dual_pair(m: PrimeModulus, a_mask: u64, b_mask: u64) -> Result<(), String> {
    let p = m.get();
    let a = ZpSet::from_words(m, vec![a_mask]);
    let b = ZpSet::from_words(m, vec![b_mask]);
    let got = dual_inclusion_check(&a, &b).map_err(|e| e.to_string())?;
    let (inclusion, equality, saturated) = direct_dual(a_mask, b_mask, p);
    let ok = got.inclusion_holds
        && inclusion
        && got.equality == equality
        && got.saturated == saturated
        && equality == saturated;
    if ok {
        Ok(())
    } else {
        Err(format!("p={p} A={a} B={b}: got {got:?}, direct ({inclusion}, {equality}, {saturated})"))
    }
}

/// Every nonempty pair `(A, B)`.
pub fn dual_all_pairs(p: u64) -> Result<(), String> {
    let m = modulus(p);
    for a in 1u64..1 << p {
        for b in 1u64..1 << p {
            check_dual_pair(m, a, b)?;
        }
    }
    Ok(())
}

/// Every nonempty `A` against one `B` per affine orbit. The relation is
/// preserved by `(A, B) ↦ (cA + t, cB + s)`, so this covers all pairs.
pub fn dual_orbit_representatives(p: u64) -> Result<(), String> {
    let m = modulus(p);
    for b in 1u64..1 << p {
        let set = ZpSet::from_words(m, vec![b]);
        if canonicalize(&set) != set {
            continue;
        }
        for a in 1u64..1 << p {
            check_dual_pair(m, a, b)?;
        }
    }
    Ok(())
}

// Affine invariance of verification

pub const AFFINE_PROFILES: [HypothesisProfile; 4] = [
    HypothesisProfile::Conjecture11,
    HypothesisProfile::Thm12,
    HypothesisProfile::Thm13(EtaChoice::PerSet),
    HypothesisProfile::Stress { alpha: 1.0 },
];

pub fn set_and_map() -> impl Strategy<Value = (ZpSet, i64, i64)> {
    prop::sample::select(vec![17u64, 19, 23, 29, 31, 37, 53, 61]).prop_flat_map(|p| {
        let m = modulus(p);
        (
            prop::collection::btree_set(0..p, 1..(p as usize / 2))
                .prop_map(move |xs| ZpSet::from_residues(m, xs).unwrap()),
            1..p as i64,
            0..p as i64,
        )
    })
}

/// Premises, doubling data and witness existence agree on `A` and
/// `cA + t`; the witness difference of the image is at most `±cg`.
pub fn check_verification_affine((a, c, t): (ZpSet, i64, i64)) -> CheckResult {
    let image = a.dilate(c).translate(t);
    for profile in AFFINE_PROFILES {
        prop_assert_eq!(check_hypotheses(&a, profile).unwrap(), check_hypotheses(&image, profile).unwrap());
    }
    let (wa, wi) = (find_witness(&a), find_witness(&image));
    prop_assert_eq!(wa.is_some(), wi.is_some());
    if let (Some(wa), Some(wi)) = (wa, wi) {
        prop_assert!(wa.validate(&a) && wi.validate(&image));
        let p = a.p() as i64;
        let mapped = (wa.difference as i64 * c).rem_euclid(p);
        prop_assert!(wi.difference as i64 <= mapped.min(p - mapped));
    }
    Ok(())
}

pub fn check_canonical_affine((a, c, t): (ZpSet, i64, i64)) -> CheckResult {
    let canon = canonicalize(&a);
    prop_assert_eq!(canonicalize(&canon), canon.clone());
    prop_assert_eq!(canonicalize(&a.dilate(c).translate(t)), canon.clone());
    prop_assert_eq!(canon.len(), a.len());
    Ok(())
}

// Freiman isomorphism

/// Small sets concentrated on a random progression, so that rectifiable
/// pairs are common.
pub fn clustered_pair() -> impl Strategy<Value = (ZpSet, ZpSet)> {
    prop::sample::select(vec![31u64, 61, 101, 211]).prop_flat_map(|p| {
        let m = modulus(p);
        let side = move || (prop::collection::btree_set(0..p / 3, 1..12), 0..p);
        (side(), side(), 1..p).prop_map(move |((xa, sa), (xb, sb), g)| {
            let a = ZpSet::from_residues(m, xa.into_iter().map(|x| (sa + x * g) % p)).unwrap();
            let b = ZpSet::from_residues(m, xb.into_iter().map(|x| (sb + x * g) % p)).unwrap();
            (a, b)
        })
    })
}

fn modular_energy(a: &ZpSet) -> u64 {
    let p = a.p();
    let mut reps: HashMap<u32, u64> = HashMap::new();
    for x in a.iter() {
        for y in a.iter() {
            *reps.entry((x + y) % p).or_default() += 1;
        }
    }
    reps.values().map(|r| r * r).sum()
}

/// The integer sumset of the rectified images has `|A + B|` elements and
/// maps back into `A + B`.
pub fn check_freiman_cardinality((a, b): (ZpSet, ZpSet)) -> CheckResult {
    let Some(g) = is_rectifiable(&a, &b).unwrap() else { return Ok(()) };
    prop_assert!(covering_length(&a, g).unwrap() + covering_length(&b, g).unwrap() <= a.p() as usize + 1);
    let (ra, rb) = (rectify(&a, g).unwrap(), rectify(&b, g).unwrap());
    prop_assert_eq!(ra.offsets.len(), a.len());
    let int_sum = integer_sumset(&ra.offsets, &rb.offsets);
    let sum = a.sumset(&b).unwrap();
    prop_assert_eq!(int_sum.len(), sum.len());
    let m = a.modulus();
    let base = m.add(ra.anchor, rb.anchor);
    for s in &int_sum {
        prop_assert!(sum.contains(m.add(base, m.mul(m.reduce(*s), g))));
    }
    Ok(())
}

pub fn check_freiman_energy((a, _): (ZpSet, ZpSet)) -> CheckResult {
    let Some(g) = is_rectifiable(&a, &a).unwrap() else { return Ok(()) };
    let direct = modular_energy(&a);
    prop_assert_eq!(rectify(&a, g).unwrap().additive_energy(), direct);
    prop_assert_eq!(a.additive_energy(), direct);
    Ok(())
}
