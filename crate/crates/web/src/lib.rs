//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each export returns a JSON string. The `*_json` functions hold the logic
//! and run natively as well, so they are what the tests exercise.

use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

use quatsculpt::blocks::{follow_path, parse_word};
use quatsculpt::mesh::feature_stats;
use quatsculpt::pipeline::{generate_sculpture, scale_for_min_feature};
use quatsculpt::projection::Pole;
use quatsculpt::seed::demo_seed;
use quatsculpt::symmetry::{symmetry_group, DEFAULT_TOLERANCE};
use quatsculpt::Q8Element;

fn pole_from(values: &[f64]) -> Result<Pole, String> {
    let v: [f64; 4] = values
        .try_into()
        .map_err(|_| format!("pole needs 4 numbers, got {}", values.len()))?;
    Pole::normalized(v)
        .map(|(p, _)| p)
        .map_err(|e| e.to_string())
}

/// The demo sculpture for `pole`, scaled so its shortest edge is
/// `min_feature`: per part, flat vertex coordinates and edge index pairs.
pub fn sculpture_json(pole: &[f64], min_feature: f64) -> Result<String, String> {
    let pole = pole_from(pole)?;
    let seed = demo_seed();
    let scale = scale_for_min_feature(&seed, &pole, min_feature).map_err(|e| e.to_string())?;
    let bundle = generate_sculpture(&seed, &pole, scale).map_err(|e| e.to_string())?;
    let stats = feature_stats(&bundle.merged).map_err(|e| e.to_string())?;
    let parts: Vec<Value> = bundle
        .parts
        .iter()
        .map(|(g, m)| {
            let vertices: Vec<f64> = m.vertices.iter().flatten().copied().collect();
            let edges: Vec<usize> = m.edges().into_iter().flat_map(|(a, b)| [a, b]).collect();
            json!({ "element": g.to_string(), "vertices": vertices, "edges": edges })
        })
        .collect();
    Ok(json!({
        "pole": pole.point(),
        "scale": scale,
        "min_edge": stats.min_edge,
        "max_edge": stats.max_edge,
        "parts": parts,
    })
    .to_string())
}

/// Walks the Cayley graph from `start` along a word such as `"i j k"`.
pub fn walk_json(start: &str, word: &str) -> Result<String, String> {
    let start: Q8Element = start.parse().map_err(|e| format!("{e}"))?;
    let word = parse_word(word).map_err(|e| format!("{e}"))?;
    let mut visited = vec![start.to_string()];
    let mut at = start;
    for &g in &word {
        at = follow_path(at, &[g])
            .ok_or_else(|| format!("{g} is not a generator (use ±i, ±j, ±k)"))?;
        visited.push(at.to_string());
    }
    Ok(json!({ "visited": visited, "end": at.to_string() }).to_string())
}

/// Symmetry report for the demo sculpture's vertex cloud at `pole`.
pub fn verify_json(pole: &[f64]) -> Result<String, String> {
    let pole = pole_from(pole)?;
    let bundle = generate_sculpture(&demo_seed(), &pole, 1.0).map_err(|e| e.to_string())?;
    let cloud = bundle
        .sphere_cloud(DEFAULT_TOLERANCE)
        .map_err(|e| e.to_string())?;
    let report = symmetry_group(&cloud, DEFAULT_TOLERANCE).map_err(|e| e.to_string())?;
    Ok(report.to_json())
}

#[wasm_bindgen]
pub fn sculpture(pole: &[f64], min_feature: f64) -> Result<String, JsError> {
    sculpture_json(pole, min_feature).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn walk(start: &str, word: &str) -> Result<String, JsError> {
    walk_json(start, word).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn verify(pole: &[f64]) -> Result<String, JsError> {
    verify_json(pole).map_err(|e| JsError::new(&e))
}
