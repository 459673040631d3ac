//! Integer sumsets and the 3k−4 checker used as an oracle after rectification.

use crate::error::{invalid, Error, Result};

/// Widest integer range accepted by the checker.
pub const MAX_RANGE_WIDTH: i64 = 1_000_000;

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `gcd(X - X)`.
pub fn gcd_star(x: &[i64]) -> Result<u64> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.len() < 2 {
        return Err(invalid("gcd* needs at least two distinct elements"));
    }
    Ok(v.windows(2).fold(0, |g, w| gcd(g, (w[1] - w[0]) as u64)))
}

fn normalized(x: &[i64]) -> Result<Vec<i64>> {
    let mut v = x.to_vec();
    v.sort_unstable();
    v.dedup();
    let (Some(&lo), Some(&hi)) = (v.first(), v.last()) else {
        return Err(Error::EmptySet);
    };
    if hi - lo > MAX_RANGE_WIDTH {
        return Err(invalid(format!("integer set spans {} > {MAX_RANGE_WIDTH}", hi - lo)));
    }
    Ok(v)
}

/// `A + B` over the integers, sorted.
pub fn integer_sumset(a: &[i64], b: &[i64]) -> Vec<i64> {
    let (Some(amin), Some(bmin)) = (a.iter().min(), b.iter().min()) else {
        return Vec::new();
    };
    let amax = a.iter().max().unwrap();
    let bmax = b.iter().max().unwrap();
    let base = amin + bmin;
    let mut hit = vec![false; (amax + bmax - base + 1) as usize];
    for &x in a {
        for &y in b {
            hit[(x + y - base) as usize] = true;
        }
    }
    hit.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| base + i as i64).collect()
}

/// Number of solutions of `a + b = c + d` in `X^4`.
pub fn additive_energy(x: &[i64]) -> u64 {
    let Some(&lo) = x.iter().min() else { return 0 };
    let hi = *x.iter().max().unwrap();
    let mut reps = vec![0u64; (2 * (hi - lo) + 1) as usize];
    for &a in x {
        for &b in x {
            reps[(a + b - 2 * lo) as usize] += 1;
        }
    }
    reps.iter().map(|r| r * r).sum()
}

/// Closed integer interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntegerInterval {
    pub lo: i64,
    pub hi: i64,
}

impl IntegerInterval {
    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.hi < self.lo
    }
}

fn longest_integer_run(sorted: &[i64]) -> IntegerInterval {
    let mut best = IntegerInterval { lo: sorted[0], hi: sorted[0] };
    let mut cur = best;
    for &x in &sorted[1..] {
        if x == cur.hi + 1 {
            cur.hi = x;
        } else {
            cur = IntegerInterval { lo: x, hi: x };
        }
        if cur.len() > best.len() {
            best = cur;
        }
    }
    best
}

/// Premises and conclusions of the integer 3k−4 theorem for one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Integer3k4Report {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
    pub sumset_size: usize,
    /// `|A+B| - |A| - |B|`.
    pub r: i64,
    /// 1 iff `B = x + A` for some integer `x`.
    pub delta: u8,
    /// `gcd*(A+B) = 1` and `|A+B| <= |A| + |B| + min(|A|,|B|) - 3 - delta`.
    pub applicable: bool,
    pub p_a: IntegerInterval,
    pub p_b: IntegerInterval,
    /// Longest run of consecutive integers inside `A + B`.
    pub p_ab: IntegerInterval,
    pub a_covered: bool,
    pub b_covered: bool,
    pub sumset_run: bool,
}

impl Integer3k4Report {
    pub fn conclusions_hold(&self) -> bool {
        self.a_covered && self.b_covered && self.sumset_run
    }

    /// A violation: premises hold but some conclusion fails.
    pub fn is_violation(&self) -> bool {
        self.applicable && !self.conclusions_hold()
    }
}

pub fn check_integer_3k4(a: &[i64], b: &[i64]) -> Result<Integer3k4Report> {
    let (a, b) = (normalized(a)?, normalized(b)?);
    let sum = integer_sumset(&a, &b);
    let (na, nb) = (a.len() as i64, b.len() as i64);
    let r = sum.len() as i64 - na - nb;
    let delta = (a.len() == b.len() && a.iter().zip(&b).all(|(x, y)| y - x == b[0] - a[0])) as u8;
    let gcd_ok = sum.len() >= 2 && gcd_star(&sum)? == 1;
    let applicable = gcd_ok && (sum.len() as i64) <= na + nb + na.min(nb) - 3 - delta as i64;
    let p_a = IntegerInterval { lo: a[0], hi: *a.last().unwrap() };
    let p_b = IntegerInterval { lo: b[0], hi: *b.last().unwrap() };
    let p_ab = longest_integer_run(&sum);
    Ok(Integer3k4Report {
        sumset_size: sum.len(),
        r,
        delta,
        applicable,
        a_covered: p_a.len() as i64 <= na + r + 1,
        b_covered: p_b.len() as i64 <= nb + r + 1,
        sumset_run: p_ab.len() as i64 >= na + nb - 1,
        p_a,
        p_b,
        p_ab,
        a,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_star_examples() {
        assert_eq!(gcd_star(&[0, 2, 4]).unwrap(), 2);
        assert_eq!(gcd_star(&[0, 1, 100]).unwrap(), 1);
        assert_eq!(gcd_star(&[3, 9, 21]).unwrap(), 6);
        assert!(gcd_star(&[5]).is_err());
        assert!(gcd_star(&[5, 5]).is_err());
    }

    #[test]
    fn interval_pair() {
        let r = check_integer_3k4(&[0, 1, 2, 3], &[0, 1, 2, 3]).unwrap();
        assert_eq!((r.sumset_size, r.r, r.delta, r.applicable), (7, -1, 1, true));
        assert_eq!((r.p_a.len(), r.p_ab.len()), (4, 7));
        assert!(r.conclusions_hold());
    }

    #[test]
    fn one_three_example() {
        // 2A = {0,1,2,3,4,6}; with delta = 1 the size bound is 3+3+3-3-1 = 5 < 6
        let r = check_integer_3k4(&[0, 1, 3], &[0, 1, 3]).unwrap();
        assert_eq!((r.sumset_size, r.r, r.delta), (6, 0, 1));
        assert!(!r.applicable);
        assert_eq!(r.p_a.len(), 4);
        assert!(r.a_covered);
        assert_eq!(r.p_ab, IntegerInterval { lo: 0, hi: 4 });
    }

    #[test]
    fn unequal_pair() {
        let r = check_integer_3k4(&[0, 1], &[0, 1, 2]).unwrap();
        assert_eq!((r.sumset_size, r.r, r.delta, r.applicable), (4, -1, 0, true));
        assert!(r.conclusions_hold());
    }

    #[test]
    fn errors() {
        assert_eq!(check_integer_3k4(&[], &[1]), Err(Error::EmptySet));
        assert!(check_integer_3k4(&[0, 2_000_000], &[0]).is_err());
        // singletons: |A+B| = 1 so gcd* is undefined and the premise fails
        assert!(!check_integer_3k4(&[4], &[7]).unwrap().applicable);
    }

    #[test]
    fn energy() {
        assert_eq!(additive_energy(&[0, 1, 2]), 19);
        assert_eq!(integer_sumset(&[0, 1, 3], &[0, 1, 3]), vec![0, 1, 2, 3, 4, 6]);
    }
}
