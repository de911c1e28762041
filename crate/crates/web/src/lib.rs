//! Browser bindings. Each export returns a JSON string; the plain `*_json`
//! functions carry the logic and are what the native tests exercise.

use befp_core::closed::{
    befp_limit, befp_product, log_abs_overlap_barnes, overlap_barnes, overlap_product, AsymptoticCoeffs,
};
use befp_core::spin::overlap_oracle;
use befp_core::Mu;
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest chain diagonalized in the browser.
pub const ORACLE_MAX_SITES: usize = 10;
pub const TABLE_MAX_SITES: usize = 40;

fn parse_mu(mu: &str) -> Result<Mu, String> {
    mu.parse::<Mu>().map_err(|e| e.to_string())
}

fn cplx(c: num_complex::Complex64) -> Value {
    json!({"re": c.re, "im": c.im})
}

/// One overlap (or BEFP) by every method that fits the browser budget.
pub fn overlap_json(n_sites: usize, m: usize, mu: &str, befp: bool) -> Result<String, String> {
    let mu = parse_mu(mu)?;
    let err = |e: befp_core::Error| e.to_string();
    let exact = if befp { befp_product(n_sites, m, mu) } else { overlap_product(n_sites, m, mu) }.map_err(err)?;
    let barnes = if befp {
        overlap_barnes(n_sites, m, mu).map_err(err)? / overlap_barnes(n_sites, 0, mu).map_err(err)?
    } else {
        overlap_barnes(n_sites, m, mu).map_err(err)?
    };
    let oracle = if (2..=ORACLE_MAX_SITES).contains(&n_sites) {
        let o = overlap_oracle(n_sites, m, mu).map_err(err)?;
        Some(if befp { o / overlap_oracle(n_sites, 0, mu).map_err(err)? } else { o })
    } else {
        None
    };
    Ok(json!({
        "N": n_sites, "m": m, "mu": mu.to_string(), "quantity": if befp { "befp" } else { "overlap" },
        "exact": exact.to_string(),
        "product": cplx(exact.to_complex()),
        "barnes": cplx(barnes),
        "oracle": oracle.map(cplx),
    })
    .to_string())
}

/// |BEFP| for every valid (N, m) with N <= max_n at the given mu, plus the
/// N -> infinity limit per m.
pub fn befp_table_json(max_n: usize, mu: &str) -> Result<String, String> {
    let mu = parse_mu(mu)?;
    if max_n > TABLE_MAX_SITES {
        return Err(format!("max N is capped at {TABLE_MAX_SITES}"));
    }
    let mut rows = Vec::new();
    for n_sites in (1..=max_n).filter(|&n| mu.valid_for(n)) {
        let vals: Vec<Value> = (0..=mu.n_up(n_sites))
            .map(|m| befp_product(n_sites, m, mu).map(|v| cplx(v.to_complex())))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        rows.push(json!({"N": n_sites, "values": vals}));
    }
    let top = max_n.div_ceil(2);
    let limit: Vec<Value> = (0..=top).map(|m| cplx(befp_limit(m, mu).to_complex())).collect();
    Ok(json!({"mu": mu.to_string(), "rows": rows, "limit": limit}).to_string())
}

/// log|C| along m = x n against its four-term expansion.
pub fn asymptotic_curve_json(mu: &str, x: f64, n_max: usize) -> Result<String, String> {
    let mu = parse_mu(mu)?;
    let c = AsymptoticCoeffs::new(mu, x).map_err(|e| e.to_string())?;
    let mut points = Vec::new();
    for n in 1..=n_max.min(5000) {
        let mf = x * n as f64;
        if (mf - mf.round()).abs() > 1e-9 {
            continue;
        }
        let n_sites = if mu == Mu::Zero { 2 * n } else { 2 * n + 1 };
        let exact = log_abs_overlap_barnes(n_sites, mf.round() as usize, mu).map_err(|e| e.to_string())?;
        points.push(json!({"n": n, "exact": exact, "expansion": c.scaling_value(n as f64)}));
    }
    Ok(json!({
        "mu": mu.to_string(), "x": x,
        "coefficients": {"f_minus2": c.f_minus2, "f_minus1": c.f_minus1, "f_log": c.f_log, "f_0": c.f_0},
        "points": points,
    })
    .to_string())
}

#[wasm_bindgen]
pub fn overlap(n_sites: usize, m: usize, mu: &str, befp: bool) -> Result<String, JsError> {
    overlap_json(n_sites, m, mu, befp).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn befp_table(max_n: usize, mu: &str) -> Result<String, JsError> {
    befp_table_json(max_n, mu).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn asymptotic_curve(mu: &str, x: f64, n_max: usize) -> Result<String, JsError> {
    asymptotic_curve_json(mu, x, n_max).map_err(|e| JsError::new(&e))
}
