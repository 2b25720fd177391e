//! Browser bindings for the demo page in `web/`. Each export wraps a plain
//! function returning `Result<_, String>` so the logic is testable natively.

use bregball::closedform;
use bregball::render::{self, Region};
use bregball::{solve_fixed_point, solve_subgradient, CompactSet, Kind, LegendreFunction, SolverOptions};
use wasm_bindgen::prelude::*;

fn generator(name: &str) -> Result<LegendreFunction, String> {
    let kind: Kind = name.parse().map_err(|e: bregball::Error| e.to_string())?;
    if kind == Kind::Quadratic {
        return Err("the demo covers energy, negentropy and neglog".into());
    }
    LegendreFunction::new(kind, 2).map_err(|e| e.to_string())
}

fn segment(f: &LegendreFunction, a: f64, samples: usize) -> Result<CompactSet, String> {
    CompactSet::make_segment(f, a, samples).map_err(|e| e.to_string())
}

/// RGBA pixels of `F_C` over the default region of the segment, top row
/// first; cells outside `U` are black.
pub fn colormap_pixels(generator_name: &str, a: f64, res: usize, samples: usize) -> Result<Vec<u8>, String> {
    let f = generator(generator_name)?;
    let c = segment(&f, a, samples)?;
    let grid = render::colormap(&f, &c, Region::for_segment(a), res).map_err(|e| e.to_string())?;
    let rgb = grid.to_rgb();
    let mut out = Vec::with_capacity(res * res * 4);
    for px in rgb.chunks(3) {
        out.extend_from_slice(px);
        out.push(255);
    }
    Ok(out)
}

/// Certificate of the Chebyshev center as JSON, with the closed form for
/// comparison.
pub fn center_report(generator_name: &str, a: f64, samples: usize, subgradient: bool) -> Result<String, String> {
    let f = generator(generator_name)?;
    let c = segment(&f, a, samples)?;
    let opts = SolverOptions::default();
    let cert = match if subgradient { solve_subgradient(&f, &c, &opts) } else { solve_fixed_point(&f, &c, &opts) } {
        Ok(cert) => cert,
        Err(bregball::Error::NonConvergence(cert)) => *cert,
        Err(e) => return Err(e.to_string()),
    };
    let closed = match f.kind() {
        Kind::Energy => closedform::center_euclidean(a),
        Kind::NegEntropy => closedform::center_kl(a),
        _ => closedform::center_is(a).map(|c| c.point),
    }
    .map_err(|e| e.to_string())?;
    let threshold = closedform::threshold_a(1e-12).map_err(|e| e.to_string())?;
    let doc = serde_json::json!({
        "certificate": cert,
        "closed_form": closed,
        "region": Region::for_segment(a),
        "threshold": threshold,
    });
    Ok(doc.to_string())
}

/// Flat `x0, y0, x1, y1, ...` samples of `{y : D(z, y) = r}`; rays without
/// a crossing contribute `NaN, NaN`.
pub fn sphere_points(generator_name: &str, zx: f64, zy: f64, r: f64, rays: usize) -> Result<Vec<f64>, String> {
    let f = generator(generator_name)?;
    let samples = render::sphere(&f, &[zx, zy], r, rays).map_err(|e| e.to_string())?;
    let mut out = Vec::with_capacity(2 * samples.len());
    for s in samples {
        match s.point {
            Some(p) => out.extend_from_slice(&p),
            None => out.extend_from_slice(&[f64::NAN, f64::NAN]),
        }
    }
    Ok(out)
}

#[wasm_bindgen]
pub fn colormap_rgba(generator_name: &str, a: f64, res: usize, samples: usize) -> Result<Vec<u8>, JsValue> {
    colormap_pixels(generator_name, a, res, samples).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn center_json(generator_name: &str, a: f64, samples: usize, subgradient: bool) -> Result<String, JsValue> {
    center_report(generator_name, a, samples, subgradient).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn sphere_polyline(generator_name: &str, zx: f64, zy: f64, r: f64, rays: usize) -> Result<Vec<f64>, JsValue> {
    sphere_points(generator_name, zx, zy, r, rays).map_err(|e| JsValue::from_str(&e))
}

/// `F_C(x, y)` for the page's hover readout; `NaN` on bad input.
#[wasm_bindgen]
pub fn farthest_value(generator_name: &str, a: f64, samples: usize, x: f64, y: f64) -> f64 {
    match generator(generator_name).and_then(|f| segment(&f, a, samples).map(|c| (f, c))) {
        Ok((f, c)) => bregball::farthest::farthest_value(&f, &c, &[x, y]),
        Err(_) => f64::NAN,
    }
}
