//! Browser bindings. Each export takes plain strings or numbers and returns
//! a JSON string; the page draws from that.

use serde::Serialize;
use unitdist_core::exact::Rational;
use unitdist_core::exponents::{certificate, scan_alpha};
use unitdist_core::families::{example1_middle, gen_example1};
use unitdist_core::incidence::{count_unit_pairs_grid, unit_partner_counts, Metric};
use wasm_bindgen::prelude::*;

/// Largest `b` accepted by [`example1`]; `b = 4` already has 24 505 points.
pub const MAX_B: u32 = 4;

#[derive(Serialize)]
struct CurvePoint {
    alpha: String,
    value: String,
    x: f64,
    y: f64,
}

#[derive(Serialize)]
struct Curve {
    points: Vec<CurvePoint>,
    best_alpha: String,
    best_value: String,
}

#[derive(Serialize)]
struct Example1 {
    b: u32,
    points: usize,
    unit_pairs: u64,
    middle_points: usize,
    min_partners: usize,
    floor: u32,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse::<Rational>().map_err(|e| e.to_string())
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("demo types serialize")
}

pub fn optimize_json(alpha: &str) -> Result<String, String> {
    let cert = certificate(&parse_rational(alpha)?).map_err(|e| e.to_string())?;
    Ok(json(&cert))
}

pub fn scan_json(step: &str) -> Result<String, String> {
    let s = scan_alpha(&parse_rational(step)?).map_err(|e| e.to_string())?;
    let points = s
        .points
        .iter()
        .map(|(a, v)| CurvePoint {
            alpha: a.to_string(),
            value: v.to_string(),
            x: a.to_f64(),
            y: v.to_f64(),
        })
        .collect();
    Ok(json(&Curve {
        points,
        best_alpha: s.best_alpha.to_string(),
        best_value: s.best_value.to_string(),
    }))
}

pub fn example1_json(b: u32) -> Result<String, String> {
    if !(1..=MAX_B).contains(&b) {
        return Err(format!("b must be between 1 and {MAX_B}"));
    }
    let pts = gen_example1(b).map_err(|e| e.to_string())?;
    let middle = example1_middle(&pts);
    let partners = unit_partner_counts(&pts, &middle, Metric::DStar);
    Ok(json(&Example1 {
        b,
        points: pts.len(),
        unit_pairs: count_unit_pairs_grid(&pts, Metric::DStar),
        middle_points: middle.len(),
        min_partners: partners.iter().copied().min().unwrap_or(0),
        floor: b * b,
    }))
}

/// Certificate at `alpha` (a fraction such as `"5/17"`).
#[wasm_bindgen]
pub fn optimize(alpha: &str) -> Result<String, JsError> {
    optimize_json(alpha).map_err(|e| JsError::new(&e))
}

/// Optimal value over a grid of alphas in `[0, 1/2]`.
#[wasm_bindgen]
pub fn scan(step: &str) -> Result<String, JsError> {
    scan_json(step).map_err(|e| JsError::new(&e))
}

/// d*-unit pair counts of Example 1 at resolution `b`.
#[wasm_bindgen]
pub fn example1(b: u32) -> Result<String, JsError> {
    example1_json(b).map_err(|e| JsError::new(&e))
}
