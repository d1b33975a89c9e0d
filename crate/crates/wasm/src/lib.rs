//! Browser bindings. Every export takes plain numbers and returns a JSON
//! string, so the page needs no generated TypeScript types.

use geodesy_core::bounds::{incidence_counts, incidence_inequality, incidence_lemma_applies, incidence_threshold};
use geodesy_core::geometry::format_rational;
use geodesy_core::shortest::{all_pairs_shortest, geodetic_report};
use geodesy_core::{
    bipartite_incidence_subgraph, certify_philogeodetic, clustered_convex_layout, diameter_two_graph, export_svg,
    find_witness_pair, segment_intersections, subdivided_complete, KstParams,
};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest branch count the page will analyze; all-pairs certification is
/// quadratic in the number of shortest paths and runs on one thread here.
pub const MAX_BRANCHES: u32 = 9;

/// Lays out K(s,t), counts meets over every pair of shortest paths and
/// renders the drawing with either the extracted witness pair or the first
/// worst pair highlighted.
pub fn layout_report(s: u32, t: u32, prefer_witness: bool) -> Result<Value, String> {
    if !(3..=MAX_BRANCHES).contains(&s) {
        return Err(format!("s must be between 3 and {MAX_BRANCHES}"));
    }
    if t > 6 {
        return Err("t must be at most 6".into());
    }
    let g = subdivided_complete(KstParams { s, t }).map_err(|e| e.to_string())?;
    let d = clustered_convex_layout(&g).map_err(|e| e.to_string())?;
    let crossings = segment_intersections(&g, &d).map_err(|e| e.to_string())?.len();
    let table = all_pairs_shortest(&g).map_err(|e| e.to_string())?;
    let report = certify_philogeodetic(&g, &d, &table).map_err(|e| e.to_string())?;
    let witness = if t >= 2 { find_witness_pair(&g, &d).map_err(|e| e.to_string())? } else { None };
    let shown = match (&witness, prefer_witness) {
        (Some(w), true) => Some(&w.paths),
        _ => report.worst_pairs.first(),
    };
    let svg = export_svg(&g, &d, shown).map_err(|e| e.to_string())?;
    Ok(json!({
        "n": g.n(),
        "m": g.m(),
        "crossings": crossings,
        "max_meets": report.max_meets,
        "pairs": report.pairs,
        "histogram": report.histogram,
        "highlighted": shown,
        "witness": witness,
        "svg": svg,
    }))
}

/// Builds G_k and its point/line incidence subgraph and checks geodeticity.
pub fn plane_report(k: u32) -> Result<Value, String> {
    if k > 16 {
        return Err("k must be at most 16".into());
    }
    let g = diameter_two_graph(k, None).map_err(|e| e.to_string())?;
    let incidences = bipartite_incidence_subgraph(&g).map_err(|e| e.to_string())?.m();
    let report = geodetic_report(&all_pairs_shortest(&g).map_err(|e| e.to_string())?);
    Ok(json!({
        "k": k,
        "n": g.n(),
        "m": g.m(),
        "incidences": incidences,
        "is_geodetic": report.is_geodetic,
        "diameter": report.diameter,
        "dense_enough": incidence_lemma_applies(k.into()),
    }))
}

/// Both sides of the counting inequality at `k`, as exact fractions.
pub fn inequality_report(k: u64) -> Result<Value, String> {
    let ineq = incidence_inequality(k).map_err(|e| e.to_string())?;
    let counts = incidence_counts(k);
    Ok(json!({
        "k": k,
        "lhs": format_rational(&ineq.lhs),
        "rhs": format_rational(&ineq.rhs),
        "holds": ineq.holds(),
        "n": counts.n,
        "m": counts.m_incidence,
        "threshold": incidence_threshold(),
    }))
}

fn to_js(r: Result<Value, String>) -> Result<String, JsValue> {
    r.map(|v| v.to_string()).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn layout_kst(s: u32, t: u32, prefer_witness: bool) -> Result<String, JsValue> {
    to_js(layout_report(s, t, prefer_witness))
}

#[wasm_bindgen]
pub fn check_plane(k: u32) -> Result<String, JsValue> {
    to_js(plane_report(k))
}

#[wasm_bindgen]
pub fn explore_inequality(k: u32) -> Result<String, JsValue> {
    to_js(inequality_report(k.into()))
}
