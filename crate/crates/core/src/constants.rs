//! Explicit constants behind the doubling theorems and the m-sum-free
//! density bound.
//!
//! Every solver is plain bisection on a monotone function over an a-priori
//! bracket; no derivatives are used. Each result carries the residual of
//! its defining equation.

use std::f64::consts::PI;

use crate::error::{invalid, Error, Result};
use crate::primes::is_prime;

/// Absolute bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;
pub const MAX_ITERATIONS: u32 = 200;
/// Residual every successful solve must meet.
pub const RESIDUAL_BOUND: f64 = 1e-10;
/// Smallest prime accepted by the fixed-point bound for `d_m`.
pub const MIN_CP_PRIME: u64 = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantsResult {
    pub value: f64,
    /// `|equation(value)|`.
    pub residual: f64,
    pub iterations: u32,
    /// The a-priori bracket searched.
    pub bracket: (f64, f64),
}

/// `sin(x)`, returning `x` itself below `1e-8` where the two agree to
/// double precision.
fn sin_small(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        x
    } else {
        x.sin()
    }
}

/// `p sin(π/p)`, increasing in `p` towards `π`.
pub fn p_sin_pi_over_p(p: f64) -> f64 {
    p * sin_small(PI / p)
}

/// Bisection for a root of `f` on `[lo, hi]`, `f(lo)` and `f(hi)` of
/// opposite signs. Returns the midpoint of the final bracket.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<(f64, u32)> {
    let (flo, fhi) = (f(lo), f(hi));
    if flo == 0.0 {
        return Ok((lo, 0));
    }
    if fhi == 0.0 {
        return Ok((hi, 0));
    }
    if flo.signum() == fhi.signum() {
        return Err(invalid(format!("no sign change on [{lo}, {hi}]")));
    }
    let lo_negative = flo < 0.0;
    let mut iterations = 0;
    while hi - lo > BISECTION_TOL && iterations < MAX_ITERATIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        iterations += 1;
        let fm = f(mid);
        if fm == 0.0 {
            return Ok((mid, iterations));
        }
        if (fm < 0.0) == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi), iterations))
}

/// `4x³ + (12−4ε)x² + (9−4ε)x + (8ε−7)`.
pub fn alpha_cubic(epsilon: f64, x: f64) -> f64 {
    ((4.0 * x + (12.0 - 4.0 * epsilon)) * x + (9.0 - 4.0 * epsilon)) * x + (8.0 * epsilon - 7.0)
}

/// Unique positive root of [`alpha_cubic`] for `0 < ε <= 3/4`.
///
/// The cubic is increasing on `x >= 0` with `f(0) = 8ε − 7 < 0` and
/// `f(1/2) = 1 + 5ε > 0`, so the root lies in `(0, 1/2)`.
pub fn cubic_alpha(epsilon: f64) -> Result<ConstantsResult> {
    if !(epsilon > 0.0 && epsilon <= 0.75) {
        return Err(invalid(format!("epsilon must lie in (0, 3/4], got {epsilon}")));
    }
    let bracket = (0.0, 0.5);
    let f = |x| alpha_cubic(epsilon, x);
    let (value, iterations) = bisect(f, bracket.0, bracket.1)?;
    Ok(ConstantsResult { value, residual: f(value).abs(), iterations, bracket })
}

fn check_eta(eta: f64) -> Result<()> {
    if eta > 0.0 && eta < 1.0 {
        Ok(())
    } else {
        Err(invalid(format!("eta must lie in (0, 1), got {eta}")))
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 3.0 {
        Ok(())
    } else {
        Err(invalid(format!("p must be at least 3, got {p}")))
    }
}

fn alpha_from_ratio(eta_over_sin: f64, p: f64) -> f64 {
    -1.25 + 0.25 * (9.0 + 8.0 * p_sin_pi_over_p(p) * eta_over_sin).sqrt()
}

/// `α(η, p) = −5/4 + (1/4)√(9 + 8ηp sin(π/p) / sin(πη/3))`.
///
/// Increasing in both arguments; bounded above by the `p → ∞, η → 1`
/// envelope [`alpha_eta_envelope`].
pub fn alpha_eta(eta: f64, p: f64) -> Result<f64> {
    check_eta(eta)?;
    check_p(p)?;
    Ok(alpha_from_ratio(eta / sin_small(PI * eta / 3.0), p))
}

/// `lim_{η→0} α(η, p)`, using `η / sin(πη/3) → 3/π`.
pub fn alpha_eta_at_zero(p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(alpha_from_ratio(3.0 / PI, p))
}

/// `−5/4 + (1/4)√(9 + 8π / sin(π/3))`, the supremum of `α(η, p)`.
pub fn alpha_eta_envelope() -> f64 {
    -1.25 + 0.25 * (9.0 + 8.0 * PI / (PI / 3.0).sin()).sqrt()
}

/// `f(p, y) = sin(yπ) / (y p sin(π/p))`.
pub fn arc_ratio(p: f64, y: f64) -> Result<f64> {
    check_p(p)?;
    if !(y > 0.0 && y <= 0.5) {
        return Err(invalid(format!("y must lie in (0, 1/2], got {y}")));
    }
    Ok(sin_small(y * PI) / (y * p_sin_pi_over_p(p)))
}

/// `γ(p, η) = f(p, η/3)`, in `(0, 1]`.
pub fn gamma(p: f64, eta: f64) -> Result<f64> {
    check_eta(eta)?;
    arc_ratio(p, eta / 3.0)
}

/// `x ↦ (1 + 3/p) / (3 + α(x, p))`, decreasing in `x`.
pub fn cp_map(x: f64, p: f64) -> Result<f64> {
    Ok((1.0 + 3.0 / p) / (3.0 + alpha_eta(x, p)?))
}

/// Fixed point `c(p)` of [`cp_map`] on `(0, 1/3]`, for primes `p >= 80`.
pub fn solve_cp(p: u64) -> Result<ConstantsResult> {
    if p < MIN_CP_PRIME {
        return Err(invalid(format!("c(p) needs p >= {MIN_CP_PRIME}, got {p}")));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let pf = p as f64;
    let bracket = (1e-9, 1.0 / 3.0);
    let h = |x: f64| x - cp_map(x, pf).expect("x inside (0, 1)");
    let (value, iterations) = bisect(h, bracket.0, bracket.1)?;
    Ok(ConstantsResult { value, residual: h(value).abs(), iterations, bracket })
}

/// `(7 + √(8cp sin(π/p)/sin(πc/3) + 9)) c − (4 + 12/p)`, the closed form
/// whose root coincides with [`solve_cp`].
pub fn cp_equation(c: f64, p: f64) -> f64 {
    let root = (8.0 * c * p_sin_pi_over_p(p) / sin_small(PI * c / 3.0) + 9.0).sqrt();
    (7.0 + root) * c - (4.0 + 12.0 / p)
}

/// `F(t) = (7/4 + (1/4)√(9 + 8tπ / sin(πt/3)))^{-1}`, the `p → ∞` limit of
/// [`cp_map`].
pub fn limit_map(t: f64) -> f64 {
    1.0 / (1.75 + 0.25 * (9.0 + 8.0 * t * PI / sin_small(PI * t / 3.0)).sqrt())
}

/// Unique fixed point `t` of the decreasing map [`limit_map`] on `(0, 1/3)`.
pub fn limit_constant() -> ConstantsResult {
    let bracket = (1e-9, 1.0 / 3.0);
    let h = |t: f64| t - limit_map(t);
    let (value, iterations) = bisect(h, bracket.0, bracket.1).expect("sign change on the a-priori bracket");
    ConstantsResult { value, residual: h(value).abs(), iterations, bracket }
}
