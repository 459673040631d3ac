//! JSON views over the library for the static page in `www/`. Each export
//! returns a JSON object; failures come back as `{"error": "..."}`.

use serde::Serialize;
use wasm_bindgen::prelude::*;
use zpadd::constants::{alpha_eta, alpha_eta_envelope, solve_cp};
use zpadd::msf::{interval_construction, is_m_sum_free, schoen_best, smallest_schoen_n};
use zpadd::progression::{covering_length, minimal_covering_progression};
use zpadd::verify::find_witness;
use zpadd::{PrimeModulus, ZpSet};

/// Largest modulus the page will draw.
pub const MAX_DRAWN_P: u64 = 2_000;

#[derive(Serialize)]
struct ErrorView {
    error: String,
}

#[derive(Serialize)]
struct ProgressionView {
    start: u32,
    difference: u32,
    length: usize,
    members: Vec<u32>,
}

impl From<&zpadd::Progression> for ProgressionView {
    fn from(p: &zpadd::Progression) -> Self {
        ProgressionView { start: p.start(), difference: p.difference(), length: p.len(), members: p.iter().collect() }
    }
}

#[derive(Serialize)]
struct WitnessView {
    difference: u32,
    cover: ProgressionView,
    inside_sumset: ProgressionView,
}

#[derive(Serialize)]
struct SumsetView {
    p: u32,
    set: Vec<u32>,
    sumset: Vec<u32>,
    size_a: usize,
    size_2a: usize,
    r: i64,
    min_cover: ProgressionView,
    witness: Option<WitnessView>,
}

#[derive(Serialize)]
struct CurvePoint {
    eta: f64,
    alpha: f64,
}

#[derive(Serialize)]
struct CurveView {
    p: u64,
    points: Vec<CurvePoint>,
    envelope: f64,
    cp: Option<f64>,
}

#[derive(Serialize)]
struct ConstructionView {
    kind: &'static str,
    p: u32,
    m: u64,
    n: Option<u64>,
    members: Vec<u32>,
    density: f64,
    m_sum_free: bool,
    /// Shortest progression covering the set.
    cover_length: usize,
}

fn to_json<T: Serialize>(result: Result<T, String>) -> String {
    match result {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&ErrorView { error }),
    }
    .expect("plain data serializes")
}

fn drawable(p: u64) -> Result<PrimeModulus, String> {
    if p > MAX_DRAWN_P {
        return Err(format!("p must be at most {MAX_DRAWN_P} to draw, got {p}"));
    }
    PrimeModulus::new(p).map_err(|e| e.to_string())
}

fn sumset_inner(literal: &str) -> Result<SumsetView, String> {
    let a: ZpSet = literal.parse().map_err(|e: zpadd::Error| e.to_string())?;
    drawable(a.p() as u64)?;
    let report = a.doubling_report().map_err(|e| e.to_string())?;
    let (_, cover) = minimal_covering_progression(&a);
    let witness = find_witness(&a).map(|w| WitnessView {
        difference: w.difference,
        cover: (&w.p_a).into(),
        inside_sumset: (&w.p_2a).into(),
    });
    Ok(SumsetView {
        p: a.p(),
        set: a.to_vec(),
        sumset: a.doubled().to_vec(),
        size_a: report.size_a,
        size_2a: report.size_2a,
        r: report.r,
        min_cover: (&cover).into(),
        witness,
    })
}

/// `A`, `2A`, doubling data and the progression witness for a set literal
/// `p:a1,...,ak`.
#[wasm_bindgen]
pub fn sumset_view(literal: &str) -> String {
    to_json(sumset_inner(literal))
}

fn curve_inner(p: u64, points: u32) -> Result<CurveView, String> {
    if !(2..=1000).contains(&points) {
        return Err(format!("points must lie in [2, 1000], got {points}"));
    }
    let pf = p as f64;
    let points = (1..points)
        .map(|i| {
            let eta = i as f64 / points as f64;
            alpha_eta(eta, pf).map(|alpha| CurvePoint { eta, alpha }).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, _>>()?;
    let cp = if p >= 80 { solve_cp(p).ok().map(|r| r.value) } else { None };
    Ok(CurveView { p, points, envelope: alpha_eta_envelope(), cp })
}

/// `α(η, p)` on an even grid of `η`, with its envelope and `c(p)` when
/// defined.
#[wasm_bindgen]
pub fn alpha_curve(p: u32, points: u32) -> String {
    to_json(curve_inner(p as u64, points))
}

fn construction_inner(kind: &str, p: u64, m: u64) -> Result<ConstructionView, String> {
    let (set, n) = match kind {
        "interval" => (interval_construction(drawable(p)?, m).map_err(|e| e.to_string())?.set, None),
        "schoen" => {
            let n = smallest_schoen_n(m).ok_or_else(|| format!("no valid n for m={m}"))?;
            let c = schoen_best(m, n).map_err(|e| e.to_string())?;
            drawable(c.params.modulus.get() as u64)?;
            (c.set, Some(n))
        }
        other => return Err(format!("unknown construction {other:?}; use interval or schoen")),
    };
    let cover_length = if set.is_empty() {
        0
    } else {
        covering_length(&set, minimal_covering_progression(&set).0).map_err(|e| e.to_string())?
    };
    Ok(ConstructionView {
        kind: if kind == "interval" { "interval" } else { "schoen" },
        p: set.p(),
        m,
        n,
        density: set.len() as f64 / set.p() as f64,
        m_sum_free: is_m_sum_free(&set, m as i64),
        members: set.to_vec(),
        cover_length,
    })
}

/// An m-sum-free construction: `interval` at the given `p`, or `schoen`
/// at the smallest admissible modulus for `m` (where `p` is ignored).
#[wasm_bindgen]
pub fn construction_view(kind: &str, p: u32, m: u32) -> String {
    to_json(construction_inner(kind, p as u64, m as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: String) -> Value {
        serde_json::from_str(&s).unwrap()
    }

    #[test]
    fn sumset_view_fields() {
        let v = parse(sumset_view("7:1,2,4"));
        assert_eq!(v["sumset"], serde_json::json!([1, 2, 3, 4, 5, 6]));
        assert_eq!((v["size_2a"].as_u64(), v["r"].as_i64()), (Some(6), Some(0)));
        assert_eq!(v["witness"]["difference"], 1);
        let v = parse(sumset_view("11:0,1,5,6"));
        // 6, 0, 5, 1 is a difference-5 progression
        assert_eq!((v["min_cover"]["length"].as_u64(), v["min_cover"]["difference"].as_u64()), (Some(4), Some(5)));
    }

    #[test]
    fn errors_are_reported() {
        assert!(parse(sumset_view("8:1"))["error"].is_string());
        assert!(parse(sumset_view("2003:1"))["error"].is_string());
        assert!(parse(alpha_curve(101, 1))["error"].is_string());
        assert!(parse(construction_view("cube", 101, 3))["error"].is_string());
    }

    #[test]
    fn curve_is_increasing_below_envelope() {
        let v = parse(alpha_curve(101, 20));
        let alphas: Vec<f64> = v["points"].as_array().unwrap().iter().map(|p| p["alpha"].as_f64().unwrap()).collect();
        assert_eq!(alphas.len(), 19);
        assert!(alphas.windows(2).all(|w| w[0] < w[1]));
        assert!(alphas.iter().all(|&a| a < v["envelope"].as_f64().unwrap()));
        assert!(v["cp"].as_f64().is_some());
        assert!(parse(alpha_curve(13, 5))["cp"].is_null());
    }

    #[test]
    fn constructions_are_m_sum_free() {
        let v = parse(construction_view("interval", 101, 3));
        assert_eq!(v["members"].as_array().unwrap().len(), 20);
        assert_eq!(v["m_sum_free"], true);
        let v = parse(construction_view("schoen", 0, 7));
        assert_eq!((v["p"].as_u64(), v["n"].as_u64()), (Some(197), Some(1)));
        assert_eq!(v["m_sum_free"], true);
    }
}
