//! Right-Bregman farthest-point geometry.
//!
//! For a Legendre function `f` on `R^J` with Bregman distance
//! `D(x, y) = f(x) - f(y) - <grad f(y), x - y>`, this crate computes
//!
//! * the farthest-distance function `F_C(x) = max_{c in C} D(x, c)` and the
//!   farthest-point map `Q_C(x)` (the set of maximizers),
//! * directional derivatives and subdifferentials of `F_C`,
//! * the Chebyshev center of `C`, i.e. the unique minimizer of `F_C`,
//!   together with a certificate `grad f(z) in conv grad f(Q_C(z))`,
//! * closed-form centers for the two-point segment family
//!   `conv{(1, a), (a, 1)}` under the halved squared Euclidean distance,
//!   Kullback-Leibler and Itakura-Saito divergences.
//!
//! Four generators are supported: the energy `1/2 |x|^2`, a quadratic
//! form `1/2 <x, Ax>`, the negative entropy `sum x ln x - x` and the negative
//! logarithm `-sum ln x`.

pub mod bregman;
pub mod center;
pub mod closedform;
pub mod compactset;
mod error;
pub mod farthest;
pub mod json;
pub mod legendre;
pub mod render;
pub mod repro;
pub mod simplex;
pub mod tolerance;

pub use bregman::{distance, Divergence};
pub use center::{
    certify, dual_hull_projection, solve_fixed_point, solve_subgradient, CenterCertificate, HullProjection, Solver,
    SolverOptions,
};
pub use compactset::CompactSet;
pub use error::{Error, Result};
pub use farthest::{farthest, FarthestResult};
pub use legendre::{Kind, LegendreFunction};
pub use tolerance::Tolerances;

/// A point of `R^J`.
pub type Point = Vec<f64>;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
