//! Exponential sums `S_X(d) = Σ_{x∈X} e^{2πi dx/p}` and the bounds on
//! `|S_A(d)|` coming from how many terms fit in an open half-circle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::zp::ZpSet;

/// Sets larger than this are summed pairwise.
const PAIRWISE_THRESHOLD: usize = 4096;

/// Slack allowed when comparing a computed modulus with an analytic bound.
pub const BOUND_SLACK: f64 = 1e-9;

fn root_of_unity(k: u32, p: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / p as f64)
}

fn pairwise_sum(terms: &[Complex64]) -> Complex64 {
    if terms.len() <= 64 {
        return terms.iter().sum();
    }
    let (l, r) = terms.split_at(terms.len() / 2);
    pairwise_sum(l) + pairwise_sum(r)
}

/// `S_X(d)`. The phase `dx mod p` is reduced exactly before taking the
/// exponential.
pub fn exp_sum(x: &ZpSet, d: i64) -> Complex64 {
    let m = x.modulus();
    let d = m.reduce(d);
    let term = |v: u32| root_of_unity(m.mul(d, v), m.get());
    if x.len() > PAIRWISE_THRESHOLD {
        let terms: Vec<Complex64> = x.iter().map(term).collect();
        pairwise_sum(&terms)
    } else {
        x.iter().map(term).sum()
    }
}

/// All of `S_X(0), ..., S_X(p-1)` from a shared root table.
pub fn exp_sum_spectrum(x: &ZpSet) -> Vec<Complex64> {
    let m = x.modulus();
    let p = m.get();
    let roots: Vec<Complex64> = (0..p).map(|k| root_of_unity(k, p)).collect();
    let members = x.to_vec();
    (0..p)
        .map(|d| {
            let terms: Vec<Complex64> = members.iter().map(|&v| roots[m.mul(d, v) as usize]).collect();
            if terms.len() > PAIRWISE_THRESHOLD {
                pairwise_sum(&terms)
            } else {
                terms.iter().sum()
            }
        })
        .collect()
}

/// Relative error `|lhs − rhs| / lhs` of
/// `|A|² p = Σ_x S_A(x)² conj(S_{2A}(x))`, which holds because every
/// `a1 + a2` lies in `2A`.
pub fn parseval_identity_check(a: &ZpSet) -> Result<f64> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let sa = exp_sum_spectrum(a);
    let s2a = exp_sum_spectrum(&a.doubled());
    let rhs: Complex64 = sa.iter().zip(&s2a).map(|(x, y)| x * x * y.conj()).sum();
    let lhs = (a.len() * a.len()) as f64 * a.p() as f64;
    Ok((Complex64::new(lhs, 0.0) - rhs).norm() / lhs)
}

/// Number of `p`-th roots of unity that fit in one open half-circle:
/// `L` consecutive roots span `2π(L−1)/p`, which is `< π` iff `L <= ⌈p/2⌉`.
pub fn half_arc_window(p: u32) -> u32 {
    p.div_ceil(2)
}

/// Maximum, over open half-circles, of the number of terms
/// `e^{2πi dx/p}, x ∈ A` inside it; a sliding window of
/// [`half_arc_window`] consecutive residues over `d·A`.
pub fn half_arc_max(a: &ZpSet, d: i64) -> Result<usize> {
    let m = a.modulus();
    if m.reduce(d) == 0 {
        return Err(Error::ZeroDifference);
    }
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let dilated = a.dilate(d);
    let p = m.get();
    let w = half_arc_window(p);
    let mut count = (0..w).filter(|&k| dilated.contains(k)).count();
    let mut best = count;
    for u in 1..p {
        if dilated.contains(u - 1) {
            count -= 1;
        }
        if dilated.contains((u + w - 1) % p) {
            count += 1;
        }
        best = best.max(count);
    }
    Ok(best)
}

/// Comparison of `|S_A(d)|` with the half-arc bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct LevCertificate {
    pub set: ZpSet,
    pub d: u32,
    /// Max number of terms in an open half-circle.
    pub n_max: usize,
    /// `2n − |A|`, also the coarse linear bound on `|S_A(d)|`.
    pub m: f64,
    /// `sin(Mπ/p) / sin(π/p)`.
    pub claimed_bound: f64,
    pub actual: f64,
    /// `n <= p/2` (arc condition `δn <= π`) and `n >= |A|/2`.
    pub applicable: bool,
    /// `actual <= claimed_bound + BOUND_SLACK`; meaningful when applicable.
    pub holds: bool,
    /// `actual <= 2n − |A| + BOUND_SLACK`.
    pub linear_holds: bool,
}

pub fn lev_bound_check(a: &ZpSet, d: i64) -> Result<LevCertificate> {
    let n = half_arc_max(a, d)?;
    let p = a.p() as f64;
    let size = a.len();
    let m = 2.0 * n as f64 - size as f64;
    let claimed_bound = (m * PI / p).sin() / (PI / p).sin();
    let actual = exp_sum(a, d).norm();
    Ok(LevCertificate {
        set: a.clone(),
        d: a.modulus().reduce(d),
        n_max: n,
        m,
        claimed_bound,
        actual,
        applicable: (n as f64) <= p / 2.0 && 2 * n >= size,
        holds: actual <= claimed_bound + BOUND_SLACK,
        linear_holds: actual <= m + BOUND_SLACK,
    })
}

/// `(1/3)|A| + (2/3) r + 2`, the value of `2n − |A|` when `n = |2A|/3 + 1`.
pub fn small_doubling_m(size_a: usize, r: i64) -> f64 {
    size_a as f64 / 3.0 + 2.0 * r as f64 / 3.0 + 2.0
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(s: &str) -> ZpSet {
        s.parse().unwrap()
    }

    #[test]
    fn exp_sum_examples() {
        let a = set("11:0,3,4,9");
        let s = exp_sum(&a, 0);
        assert!((s.re - 4.0).abs() < 1e-12 && s.im.abs() < 1e-12);
        let full = ZpSet::full(a.modulus());
        assert!(exp_sum(&full, 3).norm() < 1e-12);
        // 1 + e^{2πi/5} = 2cos(π/5) e^{iπ/5}
        let s = exp_sum(&set("5:0,1"), 1);
        let expected = Complex64::from_polar(2.0 * (PI / 5.0).cos(), PI / 5.0);
        assert!((s - expected).norm() < 1e-12);
        assert!((s.norm() - 1.618034).abs() < 1e-6);
    }

    #[test]
    fn parseval_examples() {
        assert!(parseval_identity_check(&set("7:1,2,4")).unwrap() < 1e-12);
        assert!(parseval_identity_check(&set("5:0")).unwrap() < 1e-12);
        assert_eq!(parseval_identity_check(&set("5:")), Err(Error::EmptySet));
    }

    #[test]
    fn half_arc_examples() {
        assert_eq!(half_arc_max(&set("13:2,3,4,5"), 1).unwrap(), 4);
        let full = ZpSet::full(set("13:").modulus());
        assert_eq!(half_arc_max(&full, 1).unwrap(), 7);
        // windows of 6: {5,6,0,1} spans 8 residues, [0,5] holds three
        assert_eq!(half_arc_max(&set("11:0,1,5,6"), 1).unwrap(), 3);
        assert_eq!(half_arc_max(&set("11:0,1"), 11), Err(Error::ZeroDifference));
    }

    /// Brute force over arcs `(u, u+π)` with `u` between consecutive roots.
    #[test]
    fn half_arc_matches_angle_scan() {
        for lit in ["11:0,1,5,6", "13:0,2,3,7,8,12", "7:1,2,4"] {
            let a = set(lit);
            let p = a.p() as f64;
            for d in 1..a.p() as i64 {
                let angles: Vec<f64> =
                    a.iter().map(|x| 2.0 * PI * ((x as i64 * d) % a.p() as i64) as f64 / p).collect();
                let mut best = 0;
                for k in 0..(4 * a.p()) {
                    let u = PI * (k as f64 + 0.5) / (2.0 * p);
                    let inside = angles
                        .iter()
                        .filter(|&&t| {
                            let rel = (t - u).rem_euclid(2.0 * PI);
                            rel > 0.0 && rel < PI
                        })
                        .count();
                    best = best.max(inside);
                }
                assert_eq!(half_arc_max(&a, d).unwrap(), best, "{lit} d={d}");
            }
        }
    }

    #[test]
    fn lev_equality_cases() {
        let a = set("101:10,11,12,13,14,15,16");
        let cert = lev_bound_check(&a, 1).unwrap();
        let closed = (7.0 * PI / 101.0).sin() / (PI / 101.0).sin();
        assert!(cert.applicable && cert.holds);
        assert_eq!(cert.n_max, 7);
        assert!((cert.actual - closed).abs() < 1e-12);
        assert!((cert.claimed_bound - closed).abs() < 1e-12);

        let cert = lev_bound_check(&set("13:4"), 5).unwrap();
        assert_eq!(cert.n_max, 1);
        assert!((cert.actual - 1.0).abs() < 1e-12 && (cert.claimed_bound - 1.0).abs() < 1e-12);
        assert!(cert.holds && cert.linear_holds);
    }

    #[test]
    fn small_doubling_m_matches_half_arc_form() {
        // n = |2A|/3 + 1 with |2A| = 2|A| + r
        let (size, r) = (30usize, 3i64);
        let n = (2 * size as i64 + r) as f64 / 3.0 + 1.0;
        assert!((2.0 * n - size as f64 - small_doubling_m(size, r)).abs() < 1e-12);
    }
}
