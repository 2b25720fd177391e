//! The farthest-distance function `F_C(x) = max_{c in C} D(x, c)`, the
//! farthest-point map `Q_C`, and first-order information about `F_C`.

use serde::{Deserialize, Serialize};

use crate::bregman::distance_unchecked;
use crate::compactset::CompactSet;
use crate::legendre::LegendreFunction;
use crate::tolerance::{ARGMAX_ABS, ARGMAX_REL, VERTEX_DEDUP};
use crate::{dist, dot, sub, Error, Point, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FarthestResult {
    /// `F_C(x)`; `+inf` when `x` is outside `dom f`.
    #[serde(with = "crate::json")]
    pub value: f64,
    /// `Q_C(x)` in enumeration order.
    pub argmax: Vec<Point>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub witness_indices: Vec<usize>,
}

/// Whether `d` counts as attaining the maximum `value`.
pub fn attains(d: f64, value: f64) -> bool {
    d >= value * (1.0 - ARGMAX_REL) - ARGMAX_ABS
}

/// `F_C(x)` and `Q_C(x)` by enumeration of `C`.
pub fn farthest(f: &LegendreFunction, c: &CompactSet, x: &[f64]) -> Result<FarthestResult> {
    f.check_dim(x)?;
    if c.dimension() != f.dimension() {
        return Err(Error::DimensionMismatch { expected: f.dimension(), got: c.dimension() });
    }
    Ok(farthest_among(f, &c.enumerate(), x))
}

/// [`farthest`] over an explicit point list (assumed inside `U`).
pub fn farthest_among(f: &LegendreFunction, points: &[Point], x: &[f64]) -> FarthestResult {
    if !f.in_domain(x) {
        return FarthestResult { value: f64::INFINITY, argmax: vec![], witness_indices: vec![] };
    }
    let ds: Vec<f64> = points.iter().map(|c| distance_unchecked(f, x, c)).collect();
    let value = ds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let witness_indices: Vec<usize> = (0..ds.len()).filter(|&i| attains(ds[i], value)).collect();
    let argmax = witness_indices.iter().map(|&i| points[i].clone()).collect();
    FarthestResult { value, argmax, witness_indices }
}

/// `F_C(x)` alone. For a segment under a generator whose distance is convex
/// in its second argument the maximum sits at an endpoint, so only the two
/// endpoints are evaluated.
pub fn farthest_value(f: &LegendreFunction, c: &CompactSet, x: &[f64]) -> f64 {
    if !f.in_domain(x) {
        return f64::INFINITY;
    }
    match c {
        CompactSet::Segment { ends, .. } if f.second_arg_convex() => {
            distance_unchecked(f, x, &ends[0]).max(distance_unchecked(f, x, &ends[1]))
        }
        CompactSet::Segment { ends: [c0, c1], samples } => (0..*samples)
            .map(|i| {
                let p = CompactSet::segment_point(c0, c1, i as f64 / (*samples - 1) as f64);
                distance_unchecked(f, x, &p)
            })
            .fold(f64::NEG_INFINITY, f64::max),
        CompactSet::Finite(points) => {
            points.iter().map(|p| distance_unchecked(f, x, p)).fold(f64::NEG_INFINITY, f64::max)
        }
    }
}

/// `F_C'(x; h) = sup_{y in Q_C(x)} f'(x; h) - <h, grad f(y)>`.
///
/// At a point of `dom f` outside `U` with `x + h` in `U` the result is `-inf`.
pub fn directional_derivative(f: &LegendreFunction, c: &CompactSet, x: &[f64], h: &[f64]) -> Result<f64> {
    f.check_dim(x)?;
    f.check_dim(h)?;
    if !f.in_domain(x) {
        return Err(Error::Domain(format!("{x:?} is not in dom f")));
    }
    if h.iter().all(|v| *v == 0.0) {
        return Ok(0.0);
    }
    if !f.in_interior(x) {
        let xh: Vec<f64> = x.iter().zip(h).map(|(a, b)| a + b).collect();
        if f.in_interior(&xh) {
            return Ok(f64::NEG_INFINITY);
        }
    }
    let fd = f.directional(x, h)?;
    if !fd.is_finite() {
        return Ok(fd);
    }
    let q = farthest(f, c, x)?;
    Ok(q.argmax.iter().map(|y| fd - dot(h, &f.grad_unchecked(y))).fold(f64::NEG_INFINITY, f64::max))
}

/// Vertices `{grad f(x) - grad f(y) : y in Q_C(x)}` whose convex hull is the
/// subdifferential of `F_C` at `x` in `U`. Near-duplicates are merged.
pub fn subdifferential(f: &LegendreFunction, c: &CompactSet, x: &[f64]) -> Result<Vec<Point>> {
    f.check_dim(x)?;
    if !f.in_interior(x) {
        return Err(Error::Domain(format!("{x:?} is not in int dom f")));
    }
    let q = farthest(f, c, x)?;
    Ok(subgradient_vertices(f, x, &q.argmax))
}

pub(crate) fn subgradient_vertices(f: &LegendreFunction, x: &[f64], argmax: &[Point]) -> Vec<Point> {
    let gx = f.grad_unchecked(x);
    let mut out: Vec<Point> = Vec::new();
    for y in argmax {
        let v = sub(&gx, &f.grad_unchecked(y));
        if out.iter().all(|w| dist(w, &v) > VERTEX_DEDUP) {
            out.push(v);
        }
    }
    out
}

/// `min <x - y, grad f(q_y) - grad f(q_x)>` over `q_x in Q_C(x)`,
/// `q_y in Q_C(y)`; nonnegative because `-grad f o Q_C` is monotone.
pub fn monotonicity_witness(f: &LegendreFunction, c: &CompactSet, x: &[f64], y: &[f64]) -> Result<f64> {
    for p in [x, y] {
        f.check_dim(p)?;
        if !f.in_domain(p) {
            return Err(Error::Domain(format!("{p:?} is not in dom f")));
        }
    }
    let qx = farthest(f, c, x)?;
    let qy = farthest(f, c, y)?;
    let d = sub(x, y);
    let mut best = f64::INFINITY;
    for a in &qx.argmax {
        let ga = f.grad_unchecked(a);
        for b in &qy.argmax {
            best = best.min(dot(&d, &sub(&f.grad_unchecked(b), &ga)));
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn energy() -> LegendreFunction {
        LegendreFunction::energy(2).unwrap()
    }

    fn seg(f: &LegendreFunction, a: f64) -> CompactSet {
        CompactSet::make_segment(f, a, 101).unwrap()
    }

    #[test]
    fn farthest_examples() {
        let f = energy();
        let c = seg(&f, 4.0);
        let r = farthest(&f, &c, &[0.0, 0.0]).unwrap();
        assert_eq!(r.value, 8.5);
        assert_eq!(r.argmax, vec![vec![1.0, 4.0], vec![4.0, 1.0]]);
        assert_eq!(r.witness_indices, vec![0, 100]);
        let r = farthest(&f, &c, &[1.0, 0.0]).unwrap();
        assert_eq!(r.argmax, vec![vec![1.0, 4.0]]);
        for g in [energy(), LegendreFunction::neg_entropy(2).unwrap(), LegendreFunction::neg_log(2).unwrap()] {
            let single = CompactSet::finite(vec![vec![2.0, 3.0]]).unwrap();
            let r = farthest(&g, &single, &[2.0, 3.0]).unwrap();
            assert_eq!(r.value, 0.0);
            assert_eq!(r.argmax, vec![vec![2.0, 3.0]]);
        }
    }

    #[test]
    fn farthest_outside_domain() {
        let f = LegendreFunction::neg_entropy(2).unwrap();
        let c = seg(&f, 4.0);
        let r = farthest(&f, &c, &[-1.0, 1.0]).unwrap();
        assert_eq!(r.value, f64::INFINITY);
        assert!(r.argmax.is_empty());
        // Boundary points of dom f are still evaluated.
        let r = farthest(&f, &c, &[0.0, 1.0]).unwrap();
        assert!(r.value.is_finite());
        assert!(!r.argmax.is_empty());
    }

    #[test]
    fn fast_value_agrees_with_enumeration() {
        for f in [energy(), LegendreFunction::neg_entropy(2).unwrap(), LegendreFunction::neg_log(2).unwrap()] {
            let c = seg(&f, 8.0);
            for x in [[1.0, 1.0], [3.0, 0.5], [7.0, 7.0]] {
                let a = farthest_value(&f, &c, &x);
                let b = farthest(&f, &c, &x).unwrap().value;
                assert_abs_diff_eq!(a, b, epsilon = 1e-12 * b.max(1.0));
            }
        }
    }

    #[test]
    fn directional_examples() {
        let f = energy();
        let c = seg(&f, 4.0);
        assert_eq!(directional_derivative(&f, &c, &[3.0, 3.0], &[1.0, -1.0]).unwrap(), 3.0);
        assert_eq!(directional_derivative(&f, &c, &[3.0, 3.0], &[0.0, 0.0]).unwrap(), 0.0);
        let kl = LegendreFunction::neg_entropy(2).unwrap();
        let c = seg(&kl, 4.0);
        assert_eq!(directional_derivative(&kl, &c, &[0.0, 1.0], &[1.0, 0.0]).unwrap(), f64::NEG_INFINITY);
        assert!(directional_derivative(&kl, &c, &[-1.0, 1.0], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn subdifferential_examples() {
        let f = energy();
        let c = seg(&f, 4.0);
        assert_eq!(subdifferential(&f, &c, &[3.0, 3.0]).unwrap(), vec![vec![2.0, -1.0], vec![-1.0, 2.0]]);
        assert_eq!(subdifferential(&f, &c, &[2.5, 2.5]).unwrap(), vec![vec![1.5, -1.5], vec![-1.5, 1.5]]);
        let single = CompactSet::finite(vec![vec![1.0, 2.0]]).unwrap();
        assert_eq!(subdifferential(&f, &single, &[0.0, 0.0]).unwrap(), vec![vec![-1.0, -2.0]]);
        let kl = LegendreFunction::neg_entropy(2).unwrap();
        assert!(subdifferential(&kl, &seg(&kl, 4.0), &[0.0, 1.0]).is_err());
    }

    #[test]
    fn duplicate_points_merge_vertices() {
        let f = energy();
        let c = CompactSet::finite(vec![vec![1.0, 0.0], vec![1.0, 0.0], vec![-1.0, 0.0]]).unwrap();
        let v = subdifferential(&f, &c, &[0.0, 0.0]).unwrap();
        assert_eq!(v.len(), 2);
    }

    #[test]
    fn monotonicity_examples() {
        let f = energy();
        let c = seg(&f, 4.0);
        assert_eq!(monotonicity_witness(&f, &c, &[3.0, 2.0], &[2.0, 3.0]).unwrap(), 6.0);
        assert_eq!(monotonicity_witness(&f, &c, &[3.0, 2.0], &[3.0, 2.0]).unwrap(), 0.0);
    }
}
