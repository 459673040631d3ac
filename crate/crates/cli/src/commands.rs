use std::io::Write;

use zpadd::constants::{
    alpha_eta, cp_equation, cubic_alpha, gamma, limit_constant, limit_map, solve_cp, ConstantsResult,
};
use zpadd::msf::{
    exact_dm, hill_climb_dm, interval_construction, is_m_sum_free, lemma33_exhaustive, schoen_best,
    schoen_construction, smallest_schoen_n, trivial_upper_bound, upper_bound_dm, SchoenConstruction, SchoenVariant,
    MAX_EXACT_P,
};
use zpadd::progression::minimal_covering_progression;
use zpadd::spectral::{lev_bound_check, parseval_identity_check};
use zpadd::sumfree::{is_sum_free, structure_check, theorem17_harness, GUARANTEED_DENSITY, GUARANTEED_FROM_P};
use zpadd::verify::{exhaustive_verify, find_witness, sample_verify};
use zpadd::{EtaChoice, HypothesisProfile, PrimeModulus, ZpSet};

use crate::record::{csv_row, Record};
use crate::{
    Cli, Command, Common, ConstantCommand, ConstructCommand, Failure, Mode, ProfileName, SetArg, Status, Variant,
};

type Outcome = Result<Status, Failure>;

const PARSEVAL_TOLERANCE: f64 = 1e-9;

pub fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let common = cli.common;
    match &cli.command {
        Command::Sumset { set, with } => sumset(set, with.as_ref(), out),
        Command::Verify { p, profile, mode, eta, epsilon, alpha, samples } => {
            let profile = hypothesis_profile(*profile, *eta, *epsilon, *alpha)?;
            verify(*p, profile, *mode, *samples, common, out)
        }
        Command::Constants { which } => constants(which, common, out),
        Command::Construct { which: ConstructCommand::Interval { p, m } } => construct_interval(*p, *m, out, err),
        Command::Construct { which: ConstructCommand::Schoen { m, n, auto_n, variant } } => {
            construct_schoen(*m, *n, *auto_n, *variant, out)
        }
        Command::Dm { p, m, exact, rounds, .. } => {
            if *exact && !common.csv {
                dm_exact(*p, *m, common, out)
            } else {
                dm_bounds(*p, *m, *rounds, *exact, common, out)
            }
        }
        Command::Apinter { p, alpha, all_j } => apinter(*p, *alpha, *all_j, out),
        Command::Spectral { set, d } => spectral(set, *d, common, out, err),
        Command::SumfreeStructure { set } => sumfree_structure(set, out),
        Command::SumfreeHarness { p, density, samples } => sumfree_harness(*p, *density, *samples, common, out),
        Command::RatioSet { set } => ratio_set(set, out),
    }
}

fn modulus(p: u64) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(p)?)
}

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

fn resolve(arg: &SetArg) -> Result<&ZpSet, Failure> {
    match arg.p {
        Some(p) if p != arg.set.p() as u64 => {
            Err(invalid(format!("--p {p} disagrees with the set literal modulus {}", arg.set.p())))
        }
        _ => Ok(&arg.set),
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn fraction(num: i64, den: usize) -> String {
    let g = gcd(num.unsigned_abs(), den as u64).max(1);
    format!("{}/{}", num / g as i64, den as u64 / g)
}

fn sumset(arg: &SetArg, with: Option<&ZpSet>, out: &mut dyn Write) -> Outcome {
    let a = resolve(arg)?;
    let b = with.unwrap_or(a);
    let sum = a.sumset(b)?;
    let bound = (a.len() + b.len()).saturating_sub(1).min(a.p() as usize);
    Record::new("sumset")
        .field("set", a)
        .field("with", b)
        .field("size_a", a.len())
        .field("size_b", b.len())
        .field("size_sum", sum.len())
        .field("cauchy_davenport_bound", bound)
        .field("sum", &sum)
        .emit(out)?;
    if with.is_some() {
        return Ok(Status::Clean);
    }
    let report = a.doubling_report()?;
    let (num, den) = report.beta_ratio();
    Record::new("doubling")
        .field("size_a", report.size_a)
        .field("size_2a", report.size_2a)
        .field("r", report.r)
        .field("beta", fraction(num, den))
        .emit(out)?;
    let (g, cover) = minimal_covering_progression(a);
    Record::new("covering")
        .field("difference", g)
        .field("length", cover.len())
        .field("progression", cover)
        .emit(out)?;
    match find_witness(a) {
        Some(w) => Record::new("witness")
            .field("difference", w.difference)
            .field("p_a", w.p_a)
            .field("len_p_a", w.p_a.len())
            .field("p_2a", w.p_2a)
            .field("len_p_2a", w.p_2a.len())
            .emit(out)?,
        None => Record::new("witness").field("difference", "none").emit(out)?,
    }
    Ok(Status::Clean)
}

fn hypothesis_profile(
    name: ProfileName,
    eta: Option<f64>,
    epsilon: f64,
    alpha: Option<f64>,
) -> Result<HypothesisProfile, Failure> {
    let profile = match name {
        ProfileName::Conj11 => HypothesisProfile::Conjecture11,
        ProfileName::Thm12 => HypothesisProfile::Thm12,
        ProfileName::Thm13 => HypothesisProfile::Thm13(eta.map_or(EtaChoice::PerSet, EtaChoice::Fixed)),
        ProfileName::Thm21 => HypothesisProfile::Thm21 { epsilon },
        ProfileName::Stress => {
            HypothesisProfile::Stress { alpha: alpha.ok_or_else(|| invalid("the stress profile needs --alpha"))? }
        }
    };
    profile.validate()?;
    Ok(profile)
}

fn verify(
    p: u64,
    profile: HypothesisProfile,
    mode: Mode,
    samples: u64,
    common: Common,
    out: &mut dyn Write,
) -> Outcome {
    let m = modulus(p)?;
    let run = match mode {
        Mode::Exhaustive => exhaustive_verify(m, profile, common.jobs)?,
        Mode::Sample => sample_verify(m, profile, samples, common.seed)?,
    };
    let s = run.summary;
    let mut summary =
        Record::new("summary").field("p", s.p).field("profile", s.profile).field("enumeration", s.enumeration);
    if mode == Mode::Sample {
        summary = summary.field("seed", common.seed);
    }
    summary
        .field("sets_checked", s.sets_checked)
        .field("premise_holds", s.premise_holds)
        .field("witness_found", s.witness_found)
        .field("counterexamples", s.counterexamples)
        .emit(out)?;
    for record in &run.counterexamples {
        let report = record.canonical_set.doubling_report()?;
        Record::new("counterexample")
            .field("set", &record.canonical_set)
            .field("size_a", report.size_a)
            .field("size_2a", report.size_2a)
            .field("r", report.r)
            .emit(out)?;
    }
    Ok(if run.counterexamples.is_empty() { Status::Clean } else { Status::Violation })
}

fn solver_record(name: &str, r: &ConstantsResult) -> Record {
    Record::new("constant")
        .field("name", name)
        .exact("value", r.value)
        .sci("residual", r.residual)
        .field("iterations", r.iterations)
        .field("bracket", format!("[{},{}]", r.bracket.0, r.bracket.1))
}

fn constants(which: &ConstantCommand, common: Common, out: &mut dyn Write) -> Outcome {
    match *which {
        ConstantCommand::Alpha { epsilon } => {
            let r = cubic_alpha(epsilon)?;
            solver_record("alpha", &r).field("epsilon", epsilon).emit(out)?;
        }
        ConstantCommand::AlphaEta { p, eta: Some(eta) } if !common.csv => {
            let value = alpha_eta(eta, p as f64)?;
            Record::new("constant")
                .field("name", "alpha-eta")
                .exact("value", value)
                .field("p", p)
                .field("eta", eta)
                .emit(out)?;
        }
        ConstantCommand::AlphaEta { p, eta } => {
            if !common.csv {
                return Err(invalid("alpha-eta needs --eta, or --csv for a curve"));
            }
            csv_row(out, &["eta".into(), "alpha".into()])?;
            let grid: Vec<f64> = match eta {
                Some(eta) => vec![eta],
                None => (1..50).map(|i| i as f64 / 50.0).collect(),
            };
            for eta in grid {
                csv_row(out, &[format!("{eta:.2}"), format!("{:.9}", alpha_eta(eta, p as f64)?)])?;
            }
        }
        ConstantCommand::Gamma { p, eta } => {
            let value = gamma(p as f64, eta)?;
            Record::new("constant")
                .field("name", "gamma")
                .exact("value", value)
                .field("p", p)
                .field("eta", eta)
                .emit(out)?;
        }
        ConstantCommand::Cp { p } => {
            let r = solve_cp(p)?;
            solver_record("cp", &r)
                .field("p", p)
                .sci("equation_residual", cp_equation(r.value, p as f64).abs())
                .real("inverse", 1.0 / r.value)
                .emit(out)?;
        }
        ConstantCommand::Limit => {
            let r = limit_constant();
            let check = 1.0 / 3.1955;
            solver_record("limit", &r)
                .real("inverse", 1.0 / r.value)
                .field("map_at_1_over_3.1955_below", limit_map(check) < check)
                .emit(out)?;
        }
    }
    Ok(Status::Clean)
}

fn construct_interval(p: u64, m: u64, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let md = modulus(p)?;
    let c = interval_construction(md, m)?;
    if c.is_empty() {
        writeln!(err, "warning: m^2 - 4 = {} >= p = {p}; the interval holds no integer", m * m - 4)?;
    }
    let sum_free = is_m_sum_free(&c.set, m as i64);
    Record::new("construction")
        .field("kind", "interval")
        .field("p", p)
        .field("m", m)
        .field("lo", c.lo)
        .field("hi", c.hi)
        .field("size", c.set.len())
        .real("density", c.set.len() as f64 / p as f64)
        .field("m_sum_free", sum_free)
        .field("set", &c.set)
        .emit(out)?;
    if !sum_free {
        Record::new("violation").field("kind", "not-m-sum-free").emit(out)?;
        return Ok(Status::Violation);
    }
    Ok(Status::Clean)
}

fn variant_name(v: SchoenVariant) -> &'static str {
    match v {
        SchoenVariant::Standard => "standard",
        SchoenVariant::Alternative => "alternative",
    }
}

fn construct_schoen(m: u64, n: Option<u64>, auto_n: bool, variant: Variant, out: &mut dyn Write) -> Outcome {
    let n = match (n, auto_n) {
        (Some(n), _) => n,
        (None, _) => {
            smallest_schoen_n(m).ok_or_else(|| invalid(format!("no n makes 4m^2n+1 prime within range for m={m}")))?
        }
    };
    let c: SchoenConstruction = match variant {
        Variant::Standard => schoen_construction(m, n, SchoenVariant::Standard)?,
        Variant::Alternative => schoen_construction(m, n, SchoenVariant::Alternative)?,
        Variant::Best => schoen_best(m, n)?,
    };
    let params = &c.params;
    let p = params.modulus.get();
    let augment =
        params.augment.map_or("none".to_string(), |b| format!("{{tm+{}:{}<=t<={}}}", b.offset, b.first_t, b.last_t));
    let sum_free = is_m_sum_free(&c.set, m as i64);
    let size_matches = c.set.len() as u64 == params.expected_size();
    Record::new("construction")
        .field("kind", "schoen")
        .field("m", m)
        .field("n", n)
        .field("p", p)
        .field("variant", variant_name(params.variant))
        .field("branch", params.branch)
        .field("lambda", params.lambda)
        .field("mu", params.mu)
        .field("augment", augment)
        .field("size", c.set.len())
        .field("expected_size", params.expected_size())
        .field("size_numerator", format!("{}/{}", params.size_numerator(), 8 * m * m))
        .real("density", c.set.len() as f64 / p as f64)
        .field("reaches_one_eighth", params.reaches_one_eighth())
        .field("m_sum_free", sum_free)
        .field("avoids_dilated_base", c.avoids_dilated_base)
        .emit(out)?;
    Record::new("members").field("set", &c.set).emit(out)?;
    if !(sum_free && size_matches && c.avoids_dilated_base && c.inside_base) {
        Record::new("violation")
            .field("m_sum_free", sum_free)
            .field("size_matches", size_matches)
            .field("inside_base", c.inside_base)
            .field("avoids_dilated_base", c.avoids_dilated_base)
            .emit(out)?;
        return Ok(Status::Violation);
    }
    Ok(Status::Clean)
}

fn dm_exact(p: u64, m: Option<i64>, common: Common, out: &mut dyn Write) -> Outcome {
    let m = m.ok_or_else(|| invalid("--exact needs --m"))?;
    let r = exact_dm(modulus(p)?, m, common.jobs)?;
    Record::new("dm")
        .field("p", r.p)
        .field("m", r.m)
        .field("size", r.size)
        .real("density", r.density())
        .field("witness", &r.witness)
        .emit(out)?;
    Ok(Status::Clean)
}

struct DmRow {
    m: i64,
    lower: usize,
    lower_kind: &'static str,
    construction: usize,
}

/// Upper bound on the maximum size: `c(p)·p` (strict) from `p >= 80`,
/// otherwise `⌊(p + 1)/3⌋`.
fn dm_upper(md: PrimeModulus) -> Result<(f64, &'static str, bool), Failure> {
    let p = md.get();
    if p >= 80 {
        let b = upper_bound_dm(md)?;
        Ok((b.bound.value, "cp", b.strict))
    } else {
        Ok((trivial_upper_bound(p) as f64 / p as f64, "trivial", false))
    }
}

fn dm_row(md: PrimeModulus, m: i64, rounds: u32, exact: bool, common: Common) -> Result<DmRow, Failure> {
    let p = md.get();
    if !(2..=p as i64 - 2).contains(&m) {
        return Err(invalid(format!("m must lie in [2, p-2], got {m}")));
    }
    let construction = if m >= 3 { interval_construction(md, m as u64)?.set.len() } else { 0 };
    let (lower, lower_kind) = if p <= MAX_EXACT_P {
        (exact_dm(md, m, common.jobs)?.size, "exact")
    } else if exact {
        return Err(invalid(format!("exact search is limited to p <= {MAX_EXACT_P}")));
    } else {
        let climbed = hill_climb_dm(md, m, rounds, common.seed).len();
        (climbed.max(construction), "best-found")
    };
    Ok(DmRow { m, lower, lower_kind, construction })
}

fn exceeds(density: f64, upper: f64, strict: bool) -> bool {
    if strict {
        density >= upper
    } else {
        density > upper + 1e-12
    }
}

fn dm_bounds(p: u64, m: Option<i64>, rounds: u32, exact: bool, common: Common, out: &mut dyn Write) -> Outcome {
    let md = modulus(p)?;
    let (upper, upper_kind, strict) = dm_upper(md)?;
    let ms: Vec<i64> = match m {
        Some(m) => vec![m],
        None if common.csv => (2..=p as i64 - 2).collect(),
        None => return Err(invalid("--bounds needs --m, or --csv for a sweep")),
    };
    let pf = p as f64;
    let mut violation = false;
    if common.csv {
        csv_row(out, &["p", "m", "exact_or_best", "construction", "upper_bound"].map(String::from))?;
    }
    for m in ms {
        let row = dm_row(md, m, rounds, exact, common)?;
        let lower = row.lower as f64 / pf;
        violation |= exceeds(lower, upper, strict);
        if common.csv {
            csv_row(
                out,
                &[
                    p.to_string(),
                    row.m.to_string(),
                    format!("{lower:.6}"),
                    format!("{:.6}", row.construction as f64 / pf),
                    format!("{upper:.6}"),
                ],
            )?;
        } else {
            Record::new("dm-bounds")
                .field("p", p)
                .field("m", row.m)
                .field("lower_size", row.lower)
                .real("lower", lower)
                .field("lower_kind", row.lower_kind)
                .field("construction_size", row.construction)
                .real("upper", upper)
                .field("upper_kind", upper_kind)
                .field("upper_strict", strict)
                .emit(out)?;
        }
    }
    if violation && !common.csv {
        Record::new("violation").field("kind", "lower-bound-meets-upper-bound").emit(out)?;
    }
    Ok(if violation { Status::Violation } else { Status::Clean })
}

fn apinter(p: u64, alpha: f64, all_j: bool, out: &mut dyn Write) -> Outcome {
    let r = lemma33_exhaustive(modulus(p)?, alpha, all_j)?;
    Record::new("apinter")
        .field("p", r.p)
        .field("alpha", r.alpha)
        .field("n_range", format!("[{},{}]", r.n_range.0, r.n_range.1))
        .field("all_j", all_j)
        .field("configurations", r.configurations)
        .field("counterexamples", r.counterexamples.len())
        .emit(out)?;
    for c in &r.counterexamples {
        Record::new("counterexample")
            .field("n", c.n)
            .field("d", c.d)
            .field("x", c.x)
            .field("j_len", c.j_len)
            .field("count", c.count)
            .emit(out)?;
    }
    Ok(if r.counterexamples.is_empty() { Status::Clean } else { Status::Violation })
}

fn spectral(arg: &SetArg, d: Option<i64>, common: Common, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let a = resolve(arg)?;
    let p = a.p() as i64;
    let parseval = parseval_identity_check(a)?;
    let mut violations = Vec::new();
    if parseval >= PARSEVAL_TOLERANCE {
        violations.push(Record::new("violation").field("kind", "parseval").sci("relative_error", parseval));
    }
    let ds: Vec<i64> = match d {
        Some(d) => vec![d],
        None => (1..p).collect(),
    };
    if common.csv {
        csv_row(out, &["d", "abs_sum", "bound", "n_max", "applicable"].map(String::from))?;
    } else {
        Record::new("parseval").field("set", a).field("size", a.len()).sci("relative_error", parseval).emit(out)?;
    }
    for d in ds {
        let c = lev_bound_check(a, d)?;
        if c.applicable && !c.holds {
            violations.push(Record::new("violation").field("kind", "lev").field("d", c.d));
        }
        if common.csv {
            csv_row(
                out,
                &[
                    c.d.to_string(),
                    format!("{:.9}", c.actual),
                    format!("{:.9}", c.claimed_bound),
                    c.n_max.to_string(),
                    c.applicable.to_string(),
                ],
            )?;
        } else {
            Record::new("lev")
                .field("d", c.d)
                .field("n_max", c.n_max)
                .exact("m", c.m)
                .exact("bound", c.claimed_bound)
                .exact("actual", c.actual)
                .field("applicable", c.applicable)
                .field("holds", c.holds)
                .field("linear_holds", c.linear_holds)
                .emit(out)?;
        }
    }
    let status = if violations.is_empty() { Status::Clean } else { Status::Violation };
    let sink: &mut dyn Write = if common.csv { err } else { out };
    for v in violations {
        v.emit(sink)?;
    }
    Ok(status)
}

fn sumfree_structure(arg: &SetArg, out: &mut dyn Write) -> Outcome {
    let a = resolve(arg)?;
    let p = a.p();
    let check = structure_check(a);
    let sum_free = is_sum_free(a);
    let mut record = Record::new("structure")
        .field("set", a)
        .field("size", a.len())
        .real("density", a.len() as f64 / p as f64)
        .field("sum_free", sum_free)
        .field("applicable", check.applicable);
    record = match &check.witness {
        Some(w) => record.field("m", w.m).field(
            "interval",
            format!("[{},{}]", w.interval.start(), w.interval.start() as usize + w.interval.len() - 1),
        ),
        None => record.field("m", "none"),
    };
    record.emit(out)?;
    let guaranteed =
        p >= GUARANTEED_FROM_P && a.len() as f64 >= GUARANTEED_DENSITY * p as f64 && sum_free && check.applicable;
    if guaranteed && check.witness.is_none() {
        Record::new("violation").field("kind", "no-dilate-in-interval").emit(out)?;
        return Ok(Status::Violation);
    }
    Ok(Status::Clean)
}

fn sumfree_harness(p: u64, density: f64, samples: u64, common: Common, out: &mut dyn Write) -> Outcome {
    if !(density > 0.0 && density < 1.0 / 3.0) {
        return Err(invalid(format!("density must lie in (0, 1/3), got {density}")));
    }
    let s = theorem17_harness(modulus(p)?, density, samples, common.seed);
    Record::new("harness")
        .field("p", s.p)
        .field("density", s.density_threshold)
        .field("seed", common.seed)
        .field("samples", s.samples)
        .field("passed", s.passed)
        .field("failed", s.failed)
        .field("guaranteed", s.guaranteed)
        .emit(out)?;
    let kind = if s.guaranteed { "counterexample" } else { "observation" };
    for f in &s.failures {
        Record::new(kind).field("size", f.len()).field("set", f).emit(out)?;
    }
    Ok(if s.guaranteed && s.failed > 0 { Status::Violation } else { Status::Clean })
}

fn ratio_set(arg: &SetArg, out: &mut dyn Write) -> Outcome {
    let a = resolve(arg)?;
    let md = a.modulus();
    let ratio = a.ratio_sumset()?;
    let excluded = [0, 1, md.neg(1)];
    let missing: Vec<String> =
        (0..md.get()).filter(|x| !excluded.contains(x) && !ratio.contains(*x)).map(|x| x.to_string()).collect();
    Record::new("ratio-set")
        .field("set", a)
        .field("size", a.len())
        .real("density", a.len() as f64 / md.get() as f64)
        .field("ratio_size", ratio.len())
        .field("covers_all_but_minus_one_zero_one", missing.is_empty())
        .field("missing", if missing.is_empty() { "none".to_string() } else { missing.join(",") })
        .field("ratio", &ratio)
        .emit(out)?;
    Ok(Status::Clean)
}
