//! m-sum-free sets: `2A ∩ m·A = ∅`, i.e. no `x + y = mz` with `x, y, z ∈ A`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::constants::{solve_cp, ConstantsResult, MIN_CP_PRIME};
use crate::error::{invalid, Error, Result};
use crate::mask::SmallZp;
use crate::primes::is_prime;
use crate::progression::Progression;
use crate::zp::{PrimeModulus, ZpSet, MAX_MODULUS};

/// Largest modulus accepted by [`exact_dm`].
pub const MAX_EXACT_P: u32 = 31;
/// Upper end of the search for the smallest `n` with `4m²n + 1` prime.
pub const SCHOEN_N_CAP: u64 = 10_000;

pub fn is_m_sum_free(a: &ZpSet, m: i64) -> bool {
    a.doubled().is_disjoint(&a.dilate(m))
}

/// The integers strictly between `2p/(m²−4)` and `mp/(m²−4)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalConstruction {
    pub lo: u64,
    pub hi: u64,
    pub set: ZpSet,
}

impl IntervalConstruction {
    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Empty (not an error) when `m² − 4 >= p` leaves no integer in range.
pub fn interval_construction(modulus: PrimeModulus, m: u64) -> Result<IntervalConstruction> {
    if m < 3 {
        return Err(invalid(format!("interval construction needs m >= 3, got {m}")));
    }
    let p = modulus.get() as u64;
    let d = m * m - 4;
    let lo = 2 * p / d + 1;
    let hi = (m * p).div_ceil(d) - 1;
    let set = if lo <= hi { ZpSet::from_residues(modulus, lo..=hi)? } else { ZpSet::empty(modulus) };
    Ok(IntervalConstruction { lo, hi, set })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchoenVariant {
    /// Parameters reaching density `1/8` for every `m >= 7` (`m >= 10`
    /// when `m ≡ 2 mod 4`), with an extra progression for `m ≡ 2, 3`.
    Standard,
    /// Plain parameters with no extra progression, better for large `m`.
    /// Coincides with `Standard` when `m ≡ 0 mod 4`.
    Alternative,
}

/// `B = {t·m + offset : first_t <= t <= last_t}` in integer coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Augment {
    pub first_t: u64,
    pub last_t: u64,
    pub offset: u64,
}

impl Augment {
    pub fn len(&self) -> u64 {
        self.last_t + 1 - self.first_t
    }

    pub fn is_empty(&self) -> bool {
        self.last_t < self.first_t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchoenParams {
    pub m: u64,
    pub n: u64,
    pub modulus: PrimeModulus,
    pub variant: SchoenVariant,
    /// `m mod 4`.
    pub branch: u64,
    pub lambda: u64,
    pub mu: u64,
    pub augment: Option<Augment>,
}

impl SchoenParams {
    /// `λ` and `μ` must satisfy `2μ + ⌈λ/2⌉ <= m`.
    pub fn satisfies_constraint(&self) -> bool {
        2 * self.mu + self.lambda.div_ceil(2) <= self.m
    }

    /// `J = [4mn + 1, 2λmn]`.
    pub fn base_interval(&self) -> (u64, u64) {
        (4 * self.m * self.n + 1, 2 * self.lambda * self.m * self.n)
    }

    /// `K` with `|A ∪ B| = n·K/2`, equivalently `|A ∪ B| / (p − 1) = K / (8m²)`.
    pub fn size_numerator(&self) -> u64 {
        schoen_size_numerator(self.m, self.variant)
    }

    pub fn expected_size(&self) -> u64 {
        self.n * self.size_numerator() / 2
    }

    /// Whether `|A ∪ B| / (p − 1) >= 1/8`, i.e. `K >= m²`.
    pub fn reaches_one_eighth(&self) -> bool {
        self.size_numerator() >= self.m * self.m
    }
}

/// `8m² · |A ∪ B| / (p − 1)` for each residue of `m mod 4`.
pub fn schoen_size_numerator(m: u64, variant: SchoenVariant) -> u64 {
    let sq = m * m;
    match (m % 4, variant) {
        (0, _) => sq + 2 * m - 8,
        (1, SchoenVariant::Standard) => sq + m - 6,
        (2, SchoenVariant::Standard) => sq + m - 10,
        (3, SchoenVariant::Standard) => sq + m - 2,
        (1, SchoenVariant::Alternative) => sq + 2 * m - 35,
        (2, SchoenVariant::Alternative) => sq + 2 * m - 24,
        (_, SchoenVariant::Alternative) => sq + 2 * m - 15,
        _ => unreachable!(),
    }
}

fn schoen_params(m: u64, n: u64, variant: SchoenVariant) -> (u64, u64, Option<Augment>) {
    match (m % 4, variant) {
        (0, _) => (m, m / 4, None),
        (1, SchoenVariant::Standard) => (m, (m - 1) / 4, None),
        (2, SchoenVariant::Standard) => {
            (m - 1, (m - 2) / 4, Some(Augment { first_t: m * n, last_t: 2 * (m - 1) * n - 1, offset: (m + 2) / 4 }))
        }
        (3, SchoenVariant::Standard) => {
            (m, (m - 3) / 4, Some(Augment { first_t: m * n, last_t: 2 * m * n - 1, offset: (m + 1) / 4 }))
        }
        (1, SchoenVariant::Alternative) => (m - 3, m.div_ceil(4), None),
        (2, SchoenVariant::Alternative) => (m - 2, (m + 2) / 4, None),
        (_, SchoenVariant::Alternative) => (m - 1, (m + 1) / 4, None),
        _ => unreachable!(),
    }
}

/// Smallest `n` in `[1, SCHOEN_N_CAP]` with `4m²n + 1` prime and within
/// [`MAX_MODULUS`].
pub fn smallest_schoen_n(m: u64) -> Option<u64> {
    (1..=SCHOEN_N_CAP).take_while(|n| 4 * m * m * n < MAX_MODULUS).find(|n| is_prime(4 * m * m * n + 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchoenConstruction {
    pub params: SchoenParams,
    pub set: ZpSet,
    /// `A ∪ B ⊆ J`.
    pub inside_base: bool,
    /// `2(A ∪ B) ∩ m·J = ∅`, checked on the constructed sets.
    pub avoids_dilated_base: bool,
}

/// The set `{x ∈ J : x mod m <= μ} ∪ B` modulo `p = 4m²n + 1`.
pub fn schoen_construction(m: u64, n: u64, variant: SchoenVariant) -> Result<SchoenConstruction> {
    if m < 7 {
        return Err(invalid(format!("the construction needs m >= 7, got {m}")));
    }
    if n == 0 {
        return Err(invalid("n must be positive"));
    }
    let p = 4 * m * m * n + 1;
    if !is_prime(p) {
        let hint = match smallest_schoen_n(m) {
            Some(best) => format!("smallest valid n is {best}"),
            None => format!("no valid n up to {SCHOEN_N_CAP}"),
        };
        return Err(invalid(format!("4m^2n+1 = {p} is not prime; {hint}")));
    }
    let modulus = PrimeModulus::new(p)?;
    let (lambda, mu, augment) = schoen_params(m, n, variant);
    let params = SchoenParams { m, n, modulus, variant, branch: m % 4, lambda, mu, augment };
    let (j_lo, j_hi) = params.base_interval();
    let mut set = ZpSet::from_residues(modulus, (j_lo..=j_hi).filter(|x| x % m <= mu))?;
    if let Some(b) = augment {
        for t in b.first_t..=b.last_t {
            set.insert(modulus.reduce((t * m + b.offset) as i64));
        }
    }
    let base = ZpSet::from_residues(modulus, j_lo..=j_hi)?;
    let inside_base = set.is_subset(&base);
    let avoids_dilated_base = set.doubled().is_disjoint(&base.dilate(m as i64));
    Ok(SchoenConstruction { params, set, inside_base, avoids_dilated_base })
}

/// Both variants at the same `(m, n)`, keeping the larger set (the
/// standard one on ties).
pub fn schoen_best(m: u64, n: u64) -> Result<SchoenConstruction> {
    let standard = schoen_construction(m, n, SchoenVariant::Standard)?;
    let alternative = schoen_construction(m, n, SchoenVariant::Alternative)?;
    Ok(if alternative.set.len() > standard.set.len() { alternative } else { standard })
}

/// Maximum m-sum-free set found by exhaustive search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactDm {
    pub p: u32,
    pub m: u32,
    /// `d_m(Z/pZ) = size / p`.
    pub size: usize,
    pub witness: ZpSet,
}

impl ExactDm {
    pub fn density(&self) -> f64 {
        self.size as f64 / self.p as f64
    }
}

struct DmSearch<'a> {
    z: &'a SmallZp,
    m: u32,
    best_size: u32,
    best: u64,
}

impl DmSearch<'_> {
    /// Whether `A ∪ {x}` stays m-sum-free, given that `A` is, with
    /// `sums = 2A` and `dilates = m·A`.
    #[inline]
    fn can_add(&self, a: u64, sums: u64, dilates: u64, x: u32) -> bool {
        let p = self.z.p();
        let mx = 1u64 << ((x as u64 * self.m as u64) % p as u64);
        let new_sums = self.z.rotate(a, x) | 1u64 << ((2 * x) % p);
        sums & mx == 0 && new_sums & (dilates | mx) == 0
    }

    fn extend(&self, a: u64, sums: u64, dilates: u64, x: u32) -> (u64, u64, u64) {
        let p = self.z.p();
        let mx = 1u64 << ((x as u64 * self.m as u64) % p as u64);
        (a | 1 << x, sums | self.z.rotate(a, x) | 1u64 << ((2 * x) % p), dilates | mx)
    }

    /// Depth-first over candidates `> last`, pruning when even every
    /// currently addable candidate could not beat the best.
    fn dfs(&mut self, a: u64, sums: u64, dilates: u64, last: u32, size: u32) {
        if size > self.best_size {
            self.best_size = size;
            self.best = a;
        }
        let p = self.z.p();
        let mut addable = 0u64;
        for x in last + 1..p {
            if self.can_add(a, sums, dilates, x) {
                addable |= 1 << x;
            }
        }
        if size + addable.count_ones() <= self.best_size {
            return;
        }
        let mut rest = addable;
        while rest != 0 {
            let x = rest.trailing_zeros();
            rest &= rest - 1;
            if size + 1 + rest.count_ones() <= self.best_size {
                return;
            }
            let (na, ns, nd) = self.extend(a, sums, dilates, x);
            self.dfs(na, ns, nd, x, size + 1);
        }
    }
}

/// Exact `d_m(Z/pZ)` for `p <= 31` by branch and bound.
///
/// `0` is never in an m-sum-free set (`0 + 0 = m·0`) and dilation
/// preserves the property, so `1` is fixed as the least element. Shards
/// are the choices of the second element; each prunes against its own
/// best only, which keeps the witness independent of `jobs`.
pub fn exact_dm(modulus: PrimeModulus, m: i64, jobs: usize) -> Result<ExactDm> {
    let p = modulus.get();
    if p > MAX_EXACT_P {
        return Err(Error::Budget(format!(
            "exact search is limited to p <= {MAX_EXACT_P}, got {p}; use the hill climber instead"
        )));
    }
    let m = modulus.reduce(m);
    let z = SmallZp::new(modulus).expect("p within mask range");
    let empty = ExactDm { p, m, size: 0, witness: ZpSet::empty(modulus) };
    let root = DmSearch { z: &z, m, best_size: 0, best: 0 };
    if !root.can_add(0, 0, 0, 1) {
        return Ok(empty);
    }
    let (a1, s1, d1) = root.extend(0, 0, 0, 1);
    let shards: Vec<u32> = (2..p).filter(|&x| root.can_add(a1, s1, d1, x)).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
    let results: Vec<(u32, u64)> = pool.install(|| {
        shards
            .par_iter()
            .map(|&x| {
                let mut search = DmSearch { z: &z, m, best_size: 0, best: 0 };
                let (a, s, d) = search.extend(a1, s1, d1, x);
                search.dfs(a, s, d, x, 2);
                (search.best_size, search.best)
            })
            .collect()
    });
    let (size, best) = results.into_iter().fold((1, a1), |acc, cur| if cur.0 > acc.0 { cur } else { acc });
    Ok(ExactDm { p, m, size: size as usize, witness: z.to_set(modulus, best) })
}

/// Randomised local search for large m-sum-free sets: greedy insertion in
/// random order, then repeated single removals followed by greedy
/// refilling. A lower bound only.
pub fn hill_climb_dm(modulus: PrimeModulus, m: i64, rounds: u32, seed: u64) -> ZpSet {
    let p = modulus.get();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<u32> = (1..p).collect();
    let fill = |set: &mut ZpSet, order: &[u32]| {
        for &x in order {
            if set.contains(x) {
                continue;
            }
            set.insert(x);
            if !is_m_sum_free(set, m) {
                set.remove(x);
            }
        }
    };
    order.shuffle(&mut rng);
    let mut current = ZpSet::empty(modulus);
    fill(&mut current, &order);
    let mut best = current.clone();
    for _ in 0..rounds {
        let members = current.to_vec();
        if let Some(&out) = members.choose(&mut rng) {
            current.remove(out);
        }
        order.shuffle(&mut rng);
        fill(&mut current, &order);
        if current.len() >= best.len() {
            best = current.clone();
        } else {
            current = best.clone();
        }
    }
    best
}

/// `⌊(p + 1)/3⌋`: `|2A| >= 2|A| − 1` and `|2A| + |m·A| <= p` for `m ≢ 0`.
pub fn trivial_upper_bound(p: u32) -> usize {
    (p as usize + 1) / 3
}

/// `c(p)`, a strict upper bound on `d_m(Z/pZ)` for every `m in [2, p−2]`
/// once `p >= 80`.
#[derive(Debug, Clone, PartialEq)]
pub struct DmUpperBound {
    pub p: u32,
    pub bound: ConstantsResult,
    pub strict: bool,
}

pub fn upper_bound_dm(modulus: PrimeModulus) -> Result<DmUpperBound> {
    let p = modulus.get();
    if (p as u64) < MIN_CP_PRIME {
        return Err(invalid(format!("the bound needs p >= {MIN_CP_PRIME}, got {p}")));
    }
    Ok(DmUpperBound { p, bound: solve_cp(p as u64)?, strict: true })
}

/// Two progressions with a common difference, `|I| = 2N − 1`, and the
/// dilation factor `d` whose intersection `I ∩ d·J` is counted.
#[derive(Debug, Clone, PartialEq)]
pub struct APIntersectionInstance {
    pub alpha: f64,
    pub d: u32,
    pub n: u32,
    pub i: Progression,
    pub j: Progression,
}

impl APIntersectionInstance {
    pub fn new(alpha: f64, d: u32, n: u32, i: Progression, j: Progression) -> Result<Self> {
        check_alpha(alpha)?;
        let p = i.modulus().get();
        if i.modulus() != j.modulus() {
            return Err(Error::ModulusMismatch(p, j.modulus().get()));
        }
        if !(2..=p.saturating_sub(2)).contains(&d) {
            return Err(invalid(format!("d must lie in [2, p-2], got {d}")));
        }
        if i.difference() != j.difference() {
            return Err(invalid("I and J must share a difference"));
        }
        if n == 0 || i.len() != 2 * n as usize - 1 {
            return Err(invalid(format!("|I| must equal 2N-1 = {}", 2 * n as i64 - 1)));
        }
        Ok(APIntersectionInstance { alpha, d, n, i, j })
    }

    /// `|I ∩ d·J| <= αN − 2`.
    pub fn hypothesis_holds(&self) -> bool {
        ap_intersection_count(self) as f64 <= self.alpha * self.n as f64 - 2.0 + 1e-9
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 0.2 {
        Ok(())
    } else {
        Err(invalid(format!("alpha must lie in (0, 1/5], got {alpha}")))
    }
}

/// `|I ∩ d·J|`.
pub fn ap_intersection_count(inst: &APIntersectionInstance) -> usize {
    let i = inst.i.to_set();
    let dj = inst.j.to_set().dilate(inst.d as i64);
    i.intersection(&dj).expect("same modulus").len()
}

/// A normalised configuration `I = [p − 2N + 1, p − 1]`,
/// `J = [x, x + |J| − 1]` meeting the intersection hypothesis with `N` in
/// the range the conclusion excludes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lemma33Counterexample {
    pub n: u32,
    pub d: u32,
    pub x: u32,
    pub j_len: u32,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Lemma33Report {
    pub p: u32,
    pub alpha: f64,
    pub n_range: (u32, u32),
    pub configurations: u64,
    pub counterexamples: Vec<Lemma33Counterexample>,
}

/// Smallest `|J|` with `|J| > (1 + α)N − 3`.
pub fn minimal_j_len(alpha: f64, n: u32) -> u32 {
    let threshold = (1.0 + alpha) * n as f64 - 3.0;
    (threshold + 1e-9).floor().max(-1.0) as u32 + 1
}

/// `|[i_start, p − 1] ∩ d·[x, x + j_len − 1]|` modulo `p`.
fn normalized_intersection(p: u32, d: u32, x: u32, j_len: u32, i_start: u32) -> u32 {
    let (p, d) = (p as u64, d as u64);
    let mut y = d * x as u64 % p;
    let mut count = 0;
    for _ in 0..j_len {
        count += (y >= i_start as u64) as u32;
        y += d;
        if y >= p {
            y -= p;
        }
    }
    count
}

/// Checks that `|I ∩ d·J| > αN − 2` for every `d in [2, p−2]`, every
/// `N >= (p + 3)/(3 + α)` with `2N − 1 <= p` and every offset of `J`,
/// after normalising the common difference to 1 and `I` to end at `p − 1`.
///
/// Enlarging `J` at a fixed offset can only enlarge the intersection, so
/// by default only the minimal admissible `|J|` is tried; `all_j_lengths`
/// tries every length up to `p`.
pub fn lemma33_exhaustive(modulus: PrimeModulus, alpha: f64, all_j_lengths: bool) -> Result<Lemma33Report> {
    let p = modulus.get();
    if p < 83 {
        return Err(invalid(format!("the progression lemma needs p >= 80 prime, got {p}")));
    }
    check_alpha(alpha)?;
    let n_lo = ((p as f64 + 3.0) / (3.0 + alpha) - 1e-9).ceil() as u32;
    let n_hi = p.div_ceil(2);
    let per_d: Vec<(u64, Vec<Lemma33Counterexample>)> = (2..=p - 2)
        .into_par_iter()
        .map(|d| {
            let mut configurations = 0;
            let mut found = Vec::new();
            for n in n_lo..=n_hi {
                let i_start = p - (2 * n - 1);
                let limit = alpha * n as f64 - 2.0 + 1e-9;
                let j_min = minimal_j_len(alpha, n);
                let j_max = if all_j_lengths { p } else { j_min.min(p) };
                for j_len in j_min..=j_max {
                    for x in 0..p {
                        configurations += 1;
                        let count = normalized_intersection(p, d, x, j_len, i_start);
                        if count as f64 <= limit {
                            found.push(Lemma33Counterexample { n, d, x, j_len, count });
                        }
                    }
                }
            }
            (configurations, found)
        })
        .collect();
    let configurations = per_d.iter().map(|(c, _)| c).sum();
    let counterexamples = per_d.into_iter().flat_map(|(_, f)| f).collect();
    Ok(Lemma33Report { p, alpha, n_range: (n_lo, n_hi), configurations, counterexamples })
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

    fn has_triple(a: &ZpSet, m: i64) -> bool {
        let p = a.p() as i64;
        let xs: Vec<i64> = a.iter().map(i64::from).collect();
        xs.iter().any(|&x| xs.iter().any(|&y| xs.iter().any(|&z| (x + y - m * z).rem_euclid(p) == 0)))
    }

    #[test]
    fn m_sum_free_examples() {
        assert!(is_m_sum_free(&set("11:5,6"), 3));
        assert!(!is_m_sum_free(&set("7:1"), 2));
        assert!(is_m_sum_free(&set("13:5,6,7,8"), 1));
    }

    #[test]
    fn interval_examples() {
        let c = interval_construction(modulus(29), 3).unwrap();
        assert_eq!(c.set, ZpSet::from_residues(modulus(29), 12..=17).unwrap());
        assert!(is_m_sum_free(&c.set, 3) && !has_triple(&c.set, 3));
        assert_eq!(interval_construction(modulus(11), 3).unwrap().set, set("11:5,6"));
        // 10/45 < x < 35/45 has no integer solution
        assert!(interval_construction(modulus(5), 7).unwrap().is_empty());
        assert!(interval_construction(modulus(5), 2).is_err());
    }

    #[test]
    fn schoen_m8() {
        let c = schoen_construction(8, 1, SchoenVariant::Standard).unwrap();
        assert_eq!(c.params.modulus.get(), 257);
        assert_eq!((c.params.lambda, c.params.mu), (8, 2));
        assert_eq!(c.set.len(), 36);
        assert_eq!(c.params.expected_size(), 36);
        assert!(c.params.satisfies_constraint() && c.inside_base && c.avoids_dilated_base);
        assert!(!has_triple(&c.set, 8));
    }

    #[test]
    fn schoen_m7() {
        let n = smallest_schoen_n(7).unwrap();
        let c = schoen_construction(7, n, SchoenVariant::Standard).unwrap();
        assert_eq!(c.params.branch, 3);
        assert_eq!(c.params.size_numerator(), 54);
        assert_eq!(c.set.len() as u64 * 8 * 49, 54 * (c.params.modulus.get() as u64 - 1));
        assert!(is_m_sum_free(&c.set, 7));
    }

    #[test]
    fn schoen_rejections() {
        assert!(schoen_construction(6, 1, SchoenVariant::Standard).is_err());
        // 4·49·2 + 1 = 393 = 3·131
        let err = schoen_construction(7, 2, SchoenVariant::Standard).unwrap_err();
        assert!(err.to_string().contains("smallest valid n"));
    }

    #[test]
    fn schoen_variants_for_all_branches() {
        for m in 7..=14u64 {
            let n = smallest_schoen_n(m).unwrap();
            for variant in [SchoenVariant::Standard, SchoenVariant::Alternative] {
                let c = schoen_construction(m, n, variant).unwrap();
                assert!(c.params.satisfies_constraint(), "m={m} {variant:?}");
                assert_eq!(c.set.len() as u64, c.params.expected_size(), "m={m} {variant:?}");
                assert!(c.inside_base && c.avoids_dilated_base, "m={m} {variant:?}");
                assert!(is_m_sum_free(&c.set, m as i64), "m={m} {variant:?}");
            }
        }
    }

    #[test]
    fn exact_dm_small_cases() {
        // {1,4}: sums {2,5,1}, 3·{1,4} = {3,5}; 5 collides. {2,3}: sums {4,0,1}, triples {1,4}.
        let r = exact_dm(modulus(5), 3, 1).unwrap();
        assert!(r.size <= 2);
        assert!(is_m_sum_free(&r.witness, 3) && r.witness.len() == r.size);
        // x + x = 2x, so no nonempty set is 2-sum-free
        assert_eq!(exact_dm(modulus(7), 2, 1).unwrap().size, 0);
        assert_eq!(exact_dm(modulus(2), 3, 1).unwrap().size, 1);
        assert!(exact_dm(modulus(37), 3, 1).is_err());
    }

    fn naive_dm(p: u32, m: i64) -> usize {
        let mut best = 0;
        for mask in 0u64..1 << p {
            let xs: Vec<i64> = (0..p as i64).filter(|&x| mask >> x & 1 == 1).collect();
            if xs.len() <= best {
                continue;
            }
            let ok =
                !xs.iter().any(|&x| xs.iter().any(|&y| xs.iter().any(|&z| (x + y - m * z).rem_euclid(p as i64) == 0)));
            if ok {
                best = xs.len();
            }
        }
        best
    }

    #[test]
    fn exact_dm_matches_naive_oracle() {
        for p in [2u32, 3, 5, 7, 11, 13] {
            for m in 2..=(p as i64 - 2).max(2) {
                assert_eq!(exact_dm(modulus(p as u64), m, 1).unwrap().size, naive_dm(p, m), "p={p} m={m}");
            }
        }
    }

    #[test]
    fn exact_dm_independent_of_jobs() {
        assert_eq!(exact_dm(modulus(23), 4, 1).unwrap(), exact_dm(modulus(23), 4, 3).unwrap());
    }

    #[test]
    fn hill_climb_finds_valid_sets() {
        let a = hill_climb_dm(modulus(101), 3, 50, 1);
        assert!(is_m_sum_free(&a, 3));
        assert_eq!(a, hill_climb_dm(modulus(101), 3, 50, 1));
        assert!(a.len() <= trivial_upper_bound(101));
    }

    #[test]
    fn upper_bound_range() {
        let b = upper_bound_dm(modulus(83)).unwrap();
        assert!(b.strict && b.bound.value < 1.0 / 3.0);
        assert!(upper_bound_dm(modulus(79)).is_err());
    }

    #[test]
    fn ap_intersection_examples() {
        let m = modulus(83);
        let n = 30;
        let i = Progression::new(m, 83 - 59, 1, 59).unwrap();
        let j = Progression::new(m, 0, 1, 0).unwrap();
        let inst = APIntersectionInstance::new(0.15, 2, n, i, j).unwrap();
        assert_eq!(ap_intersection_count(&inst), 0);

        // 2·[0, 39] = even residues 0..78; I = [24, 82] holds 24, 26, ..., 78
        let j = Progression::new(m, 0, 1, 40).unwrap();
        let inst = APIntersectionInstance::new(0.15, 2, n, i, j).unwrap();
        assert_eq!(ap_intersection_count(&inst), (78 - 24) / 2 + 1);

        assert!(APIntersectionInstance::new(0.25, 2, n, i, j).is_err());
        assert!(APIntersectionInstance::new(0.15, 1, n, i, j).is_err());
        let j3 = Progression::new(m, 0, 3, 10).unwrap();
        assert!(APIntersectionInstance::new(0.15, 2, n, i, j3).is_err());
    }

    #[test]
    fn lemma33_small_run() {
        let r = lemma33_exhaustive(modulus(83), 0.15, false).unwrap();
        assert!(r.counterexamples.is_empty());
        assert!(r.configurations > 0);
        assert!(lemma33_exhaustive(modulus(83), 0.25, false).is_err());
        assert!(lemma33_exhaustive(modulus(79), 0.15, false).is_err());
    }

    #[test]
    fn minimal_j_is_strict() {
        // (1 + 0.2)·10 − 3 = 9 exactly, so |J| must be 10
        assert_eq!(minimal_j_len(0.2, 10), 10);
        assert_eq!(minimal_j_len(0.15, 30), 32);
    }

    proptest! {
        #[test]
        fn m_sum_free_agrees_with_triples(words in any::<u64>(), p in prop::sample::select(vec![5u64, 7, 11, 13, 17]), m in 0i64..20, c in 1i64..17) {
            let a = ZpSet::from_words(modulus(p), vec![words]);
            prop_assert_eq!(is_m_sum_free(&a, m), !has_triple(&a, m));
            if c % p as i64 != 0 {
                prop_assert_eq!(is_m_sum_free(&a.dilate(c), m), is_m_sum_free(&a, m));
            }
        }

        #[test]
        fn lemma_count_matches_set_intersection(d in 2u32..81, x in 0u32..83, n in 28u32..=42, j_len in 0u32..=83) {
            let m = modulus(83);
            let i_start = 83 - (2 * n - 1);
            let i = Progression::new(m, i_start, 1, 2 * n - 1).unwrap();
            let j = Progression::new(m, x, 1, j_len).unwrap();
            let inst = APIntersectionInstance::new(0.2, d, n, i, j).unwrap();
            prop_assert_eq!(ap_intersection_count(&inst), normalized_intersection(83, d, x, j_len, i_start) as usize);
        }
    }
}
