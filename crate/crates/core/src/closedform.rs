//! Closed forms for the segment `C = conv{c0, c1}`, `c0 = (1, a)`,
//! `c1 = (a, 1)`, `a > 1`, in the plane.
//!
//! Euclidean and Kullback-Leibler centers are the arithmetic and geometric
//! means of the endpoints. For Itakura-Saito, with
//!
//! ```text
//! g(a) = a(a+1)/(a-1)^2 ln((a+1)^2/(4a)),   h(a) = 2a/(a+1),
//! ```
//!
//! the center is `(h, h)` with farthest points `{c0, c1}` while `g < h`, and
//! `(g, g)` with farthest points `{c0, c_1/2, c1}` once `g >= h`. The switch
//! happens at the unique root `a~` of
//! `k(x) = 2(x-1)^2/(x+1)^2 - 2 ln(x+1) + ln(4x)` beyond `xi = 3 + 2 sqrt 2`.

use serde::{Deserialize, Serialize};

use crate::compactset::CompactSet;
use crate::legendre::LegendreFunction;
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Generator {
    Euclidean,
    #[serde(alias = "kullbackleibler")]
    Kl,
    #[serde(alias = "itakurasaito")]
    Is,
}

impl Generator {
    pub const ALL: [Generator; 3] = [Generator::Euclidean, Generator::Kl, Generator::Is];

    pub fn legendre(self) -> LegendreFunction {
        match self {
            Generator::Euclidean => LegendreFunction::energy(2),
            Generator::Kl => LegendreFunction::neg_entropy(2),
            Generator::Is => LegendreFunction::neg_log(2),
        }
        .expect("dimension 2 is valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Euclidean => "euclidean",
            Generator::Kl => "kl",
            Generator::Is => "is",
        }
    }
}

impl std::str::FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" | "energy" => Ok(Generator::Euclidean),
            "kl" | "negentropy" => Ok(Generator::Kl),
            "is" | "neglog" => Ok(Generator::Is),
            other => Err(Error::InvalidArgument(format!("unknown segment generator {other:?}"))),
        }
    }
}

/// A segment parameter `a` paired with a generator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SegmentFamily {
    pub a: f64,
    pub generator: Generator,
}

impl SegmentFamily {
    pub fn new(generator: Generator, a: f64) -> Result<Self> {
        check_a(a)?;
        Ok(Self { a, generator })
    }

    pub fn legendre(&self) -> LegendreFunction {
        self.generator.legendre()
    }

    pub fn segment(&self, samples: usize) -> Result<CompactSet> {
        CompactSet::make_segment(&self.legendre(), self.a, samples)
    }

    /// Closed-form center.
    pub fn center(&self) -> Point {
        match self.generator {
            Generator::Euclidean => center_euclidean(self.a),
            Generator::Kl => center_kl(self.a),
            Generator::Is => center_is(self.a).map(|c| c.point),
        }
        .expect("a validated at construction")
    }
}

fn check_a(a: f64) -> Result<()> {
    if a > 1.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("segment parameter must exceed 1, got {a}")))
    }
}

/// Segment endpoints and midpoint: `c0`, `c_1/2`, `c1`.
pub fn endpoints(a: f64) -> [Point; 3] {
    [vec![1.0, a], vec![0.5 * (1.0 + a), 0.5 * (1.0 + a)], vec![a, 1.0]]
}

pub fn center_euclidean(a: f64) -> Result<Point> {
    check_a(a)?;
    let m = 0.5 * (1.0 + a);
    Ok(vec![m, m])
}

pub fn center_kl(a: f64) -> Result<Point> {
    check_a(a)?;
    Ok(vec![a.sqrt(), a.sqrt()])
}

pub fn g_of(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(a * (a + 1.0) / ((a - 1.0) * (a - 1.0)) * ((a + 1.0) * (a + 1.0) / (4.0 * a)).ln())
}

pub fn h_of(a: f64) -> Result<f64> {
    check_a(a)?;
    Ok(2.0 * a / (a + 1.0))
}

/// Itakura-Saito center and its farthest set, the latter as segment
/// parameters (`0`, `1/2`, `1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsCenter {
    pub point: Point,
    pub farthest_lambdas: Vec<f64>,
    pub g: f64,
    pub h: f64,
}

pub fn center_is(a: f64) -> Result<IsCenter> {
    let g = g_of(a)?;
    let h = h_of(a)?;
    Ok(if g < h {
        IsCenter { point: vec![h, h], farthest_lambdas: vec![0.0, 1.0], g, h }
    } else {
        IsCenter { point: vec![g, g], farthest_lambdas: vec![0.0, 0.5, 1.0], g, h }
    })
}

pub fn k_of(x: f64) -> f64 {
    2.0 * (x - 1.0) * (x - 1.0) / ((x + 1.0) * (x + 1.0)) - 2.0 * (x + 1.0).ln() + (4.0 * x).ln()
}

/// `3 + 2 sqrt 2`, where `k` switches from increasing to decreasing.
pub fn xi() -> f64 {
    3.0 + 2.0 * std::f64::consts::SQRT_2
}

pub const THRESHOLD_UPPER_BRACKET: f64 = 1e6;

/// Root `a~` of `k` on `[xi, 10^6]` by bisection to bracket width `tol`.
pub fn threshold_a(tol: f64) -> Result<f64> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (mut lo, mut hi) = (xi(), THRESHOLD_UPPER_BRACKET);
    if !(k_of(lo) > 0.0 && k_of(hi) < 0.0) {
        return Err(Error::InvalidArgument("bisection bracket does not straddle the root".into()));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if k_of(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Convex weights `(mu_0, mu_1/2, mu_1)` with
/// `z = grad f*(mu_0 grad f(c0) + mu_1/2 grad f(c_1/2) + mu_1 grad f(c1))`
/// for the Itakura-Saito center `z`.
pub fn mu_coefficients(a: f64) -> Result<[f64; 3]> {
    let g = g_of(a)?;
    let h = h_of(a)?;
    if g < h {
        return Ok([0.5, 0.0, 0.5]);
    }
    let l = ((a + 1.0) * (a + 1.0) / (4.0 * a)).ln();
    let am1 = (a - 1.0) * (a - 1.0);
    let end = (am1 - 2.0 * a * l) / (am1 * l);
    let mid = (-2.0 * am1 + (a + 1.0) * (a + 1.0) * l) / (am1 * l);
    Ok([end, mid, end])
}

/// Which endpoints are farthest from `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FarthestStructure {
    C0,
    C1,
    Endpoints,
    Midpoint,
    EndpointsAndMidpoint,
}

/// Closed-form farthest set. Euclidean and KL: `{c0}` if `x2 < x1`, `{c1}` if
/// `x1 < x2`, both on the diagonal. Itakura-Saito is only known on the
/// diagonal `(x, x)`: `{c0, c1}` for `x > g`, `{c_1/2}` for `x < g`, all three
/// at `x = g`.
pub fn farthest_structure(generator: Generator, a: f64, x: &[f64]) -> Result<FarthestStructure> {
    check_a(a)?;
    if x.len() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, got: x.len() });
    }
    let (x1, x2) = (x[0], x[1]);
    match generator {
        Generator::Euclidean | Generator::Kl => {
            if generator == Generator::Kl && !(x1 > 0.0 && x2 > 0.0) {
                return Err(Error::Domain(format!("{x:?} is not in the open orthant")));
            }
            Ok(if x2 < x1 {
                FarthestStructure::C0
            } else if x1 < x2 {
                FarthestStructure::C1
            } else {
                FarthestStructure::Endpoints
            })
        }
        Generator::Is => {
            if x1 != x2 {
                return Err(Error::Unsupported("Itakura-Saito farthest set is only known on the diagonal".into()));
            }
            if x1.is_nan() || x1 <= 0.0 {
                return Err(Error::Domain(format!("{x:?} is not in the open orthant")));
            }
            let g = g_of(a)?;
            Ok(if x1 > g {
                FarthestStructure::Endpoints
            } else if x1 < g {
                FarthestStructure::Midpoint
            } else {
                FarthestStructure::EndpointsAndMidpoint
            })
        }
    }
}

/// `D(x, c0) - D(x, c1) = (x1 - x2) ln a` for the Kullback-Leibler divergence.
pub fn kl_sign_driver(a: f64, x: &[f64]) -> f64 {
    (x[0] - x[1]) * a.ln()
}
