//! The Bregman distance `D(x, y) = f(x) - f(y) - <grad f(y), x - y>` and
//! its algebraic identities.

use crate::legendre::{Kind, LegendreFunction};
use crate::{dot, sub, Error, Result};

/// `D(x, y)`; `+inf` when `y` is outside `U` or `x` is outside `dom f`.
///
/// Evaluated through per-generator closed forms (each coordinate term is
/// nonnegative), which is algebraically identical to the defining formula
/// but free of cancellation.
///
/// # Panics
///
/// If `x` or `y` does not have dimension `f.dimension()`.
pub fn distance(f: &LegendreFunction, x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), f.dimension(), "dimension mismatch");
    assert_eq!(y.len(), f.dimension(), "dimension mismatch");
    if !f.in_interior(y) || !f.in_domain(x) {
        return f64::INFINITY;
    }
    distance_unchecked(f, x, y)
}

/// [`distance`] without domain tests; `x` in `dom f` and `y` in `U`.
pub(crate) fn distance_unchecked(f: &LegendreFunction, x: &[f64], y: &[f64]) -> f64 {
    match f.kind() {
        Kind::Energy => 0.5 * x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>(),
        Kind::Quadratic => {
            let d = sub(x, y);
            let gd = f.grad_unchecked(&d);
            0.5 * dot(&d, &gd)
        }
        Kind::NegEntropy => x.iter().zip(y).map(|(&a, &b)| if a == 0.0 { b } else { a * (a / b).ln() - a + b }).sum(),
        Kind::NegLog => x
            .iter()
            .zip(y)
            .map(|(&a, &b)| {
                let r = a / b;
                r - r.ln() - 1.0
            })
            .sum(),
    }
}

/// `D(x, y)` straight from the definition `f(x) - f(y) - <grad f(y), x - y>`.
pub fn distance_by_definition(f: &LegendreFunction, x: &[f64], y: &[f64]) -> Result<f64> {
    f.check_dim(x)?;
    f.check_dim(y)?;
    if !f.in_interior(y) || !f.in_domain(x) {
        return Ok(f64::INFINITY);
    }
    let gy = f.grad(y)?;
    Ok(f.eval(x)? - f.eval(y)? - dot(&gy, &sub(x, y)))
}

fn require_interior(f: &LegendreFunction, pts: &[&[f64]]) -> Result<()> {
    for p in pts {
        f.check_dim(p)?;
        if !f.in_interior(p) {
            return Err(Error::Domain(format!("{p:?} is not in int dom f")));
        }
    }
    Ok(())
}

/// `D(x,z) - D(y,z) - D(x,y) - <x - y, grad f(y) - grad f(z)>`, which
/// vanishes identically for `y, z` in `U`.
pub fn three_point_residual(f: &LegendreFunction, x: &[f64], y: &[f64], z: &[f64]) -> Result<f64> {
    require_interior(f, &[y, z])?;
    f.check_dim(x)?;
    if !f.in_domain(x) {
        return Err(Error::Domain(format!("{x:?} is not in dom f")));
    }
    let gy = f.grad_unchecked(y);
    let gz = f.grad_unchecked(z);
    Ok(distance(f, x, z) - distance(f, y, z) - distance(f, x, y) - dot(&sub(x, y), &sub(&gy, &gz)))
}

/// `<x1 - x2, grad f(y1) - grad f(y2)> - [D(x2,y1) + D(x1,y2) - D(x1,y1) - D(x2,y2)]`.
pub fn four_point_residual(f: &LegendreFunction, x1: &[f64], x2: &[f64], y1: &[f64], y2: &[f64]) -> Result<f64> {
    require_interior(f, &[y1, y2])?;
    for x in [x1, x2] {
        f.check_dim(x)?;
        if !f.in_domain(x) {
            return Err(Error::Domain(format!("{x:?} is not in dom f")));
        }
    }
    let lhs = dot(&sub(x1, x2), &sub(&f.grad_unchecked(y1), &f.grad_unchecked(y2)));
    let rhs = distance(f, x2, y1) + distance(f, x1, y2) - distance(f, x1, y1) - distance(f, x2, y2);
    Ok(lhs - rhs)
}

/// Named divergences and the generators that produce them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Divergence {
    /// `1/2 |x - y|^2`.
    SqEuclidean,
    /// `1/2 <x - y, A(x - y)>`.
    Mahalanobis,
    /// `sum x ln(x/y) - x + y`.
    KullbackLeibler,
    /// `sum x/y - ln(x/y) - 1`.
    ItakuraSaito,
}

impl Divergence {
    /// The generator whose Bregman distance is this divergence. `matrix` is
    /// required for `Mahalanobis` and ignored otherwise.
    pub fn generator(self, dimension: usize, matrix: Option<&[Vec<f64>]>) -> Result<LegendreFunction> {
        match self {
            Divergence::SqEuclidean => LegendreFunction::energy(dimension),
            Divergence::KullbackLeibler => LegendreFunction::neg_entropy(dimension),
            Divergence::ItakuraSaito => LegendreFunction::neg_log(dimension),
            Divergence::Mahalanobis => {
                let m = matrix.ok_or_else(|| Error::InvalidMatrix("Mahalanobis needs a matrix".into()))?;
                let f = LegendreFunction::quadratic(m)?;
                if f.dimension() != dimension {
                    return Err(Error::DimensionMismatch { expected: dimension, got: f.dimension() });
                }
                Ok(f)
            }
        }
    }
}
