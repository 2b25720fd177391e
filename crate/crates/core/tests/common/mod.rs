#![allow(dead_code)]

use bregball::{CompactSet, Kind, LegendreFunction};
use rand::Rng;

pub const KINDS: [Kind; 4] = [Kind::Energy, Kind::Quadratic, Kind::NegEntropy, Kind::NegLog];

pub fn quadratic(rng: &mut impl Rng, dim: usize) -> LegendreFunction {
    let b: Vec<Vec<f64>> = (0..dim).map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect()).collect();
    let rows: Vec<Vec<f64>> = (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| (0..dim).map(|k| b[k][i] * b[k][j]).sum::<f64>() + if i == j { 0.5 } else { 0.0 })
                .collect()
        })
        .collect();
    LegendreFunction::quadratic(&rows).unwrap()
}

pub fn generator(rng: &mut impl Rng, kind: Kind, dim: usize) -> LegendreFunction {
    match kind {
        Kind::Quadratic => quadratic(rng, dim),
        k => LegendreFunction::new(k, dim).unwrap(),
    }
}

/// Interior point: coordinates in (0.1, 10) on orthants, (-10, 10) otherwise.
pub fn point(rng: &mut impl Rng, f: &LegendreFunction) -> Vec<f64> {
    (0..f.dimension())
        .map(|_| match f.kind() {
            Kind::Energy | Kind::Quadratic => rng.gen_range(-10.0..10.0),
            Kind::NegEntropy | Kind::NegLog => rng.gen_range(0.1..10.0),
        })
        .collect()
}

pub fn finite_set(rng: &mut impl Rng, f: &LegendreFunction, n: usize) -> CompactSet {
    CompactSet::finite((0..n).map(|_| point(rng, f)).collect()).unwrap()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
