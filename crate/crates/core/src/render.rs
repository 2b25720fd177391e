//! Data artifacts for planar configurations: colormaps of `F_C` over a
//! rectangle and level sets `{y : D(z, y) = r}` traced along rays.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bregman::distance_unchecked;
use crate::compactset::CompactSet;
use crate::farthest::farthest_value;
use crate::legendre::LegendreFunction;
use crate::{Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Region {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        let r = Self { x0, y0, x1, y1 };
        if ![x0, y0, x1, y1].iter().all(|v| v.is_finite()) || x1 <= x0 || y1 <= y0 {
            return Err(Error::InvalidArgument(format!("degenerate region {x0},{y0},{x1},{y1}")));
        }
        Ok(r)
    }

    /// `[0,10]^2` up to `a = 8`, `[0,50]^2` beyond.
    pub fn for_segment(a: f64) -> Self {
        let side = if a <= 8.0 { 10.0 } else { 50.0 };
        Self { x0: 0.0, y0: 0.0, x1: side, y1: side }
    }

    fn coord(lo: f64, hi: f64, i: usize, res: usize) -> f64 {
        if i + 1 == res {
            hi
        } else {
            lo + (hi - lo) * i as f64 / (res - 1) as f64
        }
    }

    pub fn x(&self, i: usize, res: usize) -> f64 {
        Self::coord(self.x0, self.x1, i, res)
    }

    pub fn y(&self, j: usize, res: usize) -> f64 {
        Self::coord(self.y0, self.y1, j, res)
    }
}

/// `F_C` sampled on a `res x res` lattice including the region's corners.
/// Row `j` holds `y = y_j` (ascending), column `i` holds `x = x_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub region: Region,
    pub res: usize,
    pub values: Vec<f64>,
    pub interior: Vec<bool>,
}

pub fn colormap(f: &LegendreFunction, c: &CompactSet, region: Region, res: usize) -> Result<Grid> {
    if f.dimension() != 2 || c.dimension() != 2 {
        return Err(Error::InvalidArgument("colormaps are planar".into()));
    }
    if res < 2 {
        return Err(Error::InvalidArgument(format!("resolution must be at least 2, got {res}")));
    }
    c.validate(f)?;
    let mut values = Vec::with_capacity(res * res);
    let mut interior = Vec::with_capacity(res * res);
    for j in 0..res {
        for i in 0..res {
            let x = [region.x(i, res), region.y(j, res)];
            values.push(farthest_value(f, c, &x));
            interior.push(f.in_interior(&x));
        }
    }
    Ok(Grid { region, res, values, interior })
}

fn sci(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        crate::json::format_extended(v)
    }
}

impl Grid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[j * self.res + i]
    }

    /// `x,y,value` rows in row-major order with 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.values.len() * 72);
        out.push_str("x,y,value\n");
        for j in 0..self.res {
            let y = self.region.y(j, self.res);
            for i in 0..self.res {
                let x = self.region.x(i, self.res);
                let _ = writeln!(out, "{},{},{}", sci(x), sci(y), sci(self.value(i, j)));
            }
        }
        out
    }

    /// `(min, max)` over finite cells.
    pub fn finite_range(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().copied().filter(|v| v.is_finite());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// RGB pixels, top row first (largest `y`). Cells outside `U` or with
    /// infinite value are black; the rest are min-max normalized over the
    /// finite cells onto a 256-step blue-to-red ramp.
    pub fn to_rgb(&self) -> Vec<u8> {
        let (lo, hi) = self.finite_range().unwrap_or((0.0, 1.0));
        let span = if hi > lo { hi - lo } else { 1.0 };
        let mut px = Vec::with_capacity(self.values.len() * 3);
        for j in (0..self.res).rev() {
            for i in 0..self.res {
                let k = j * self.res + i;
                let v = self.values[k];
                if !self.interior[k] || !v.is_finite() {
                    px.extend_from_slice(&[0, 0, 0]);
                } else {
                    px.extend_from_slice(&ramp((v - lo) / span));
                }
            }
        }
        px
    }

    /// Binary `P6` image.
    pub fn to_ppm(&self) -> Vec<u8> {
        let mut out = format!("P6\n{} {}\n255\n", self.res, self.res).into_bytes();
        out.extend(self.to_rgb());
        out
    }
}

/// Blue (`t = 0`) to red (`t = 1`) in 256 steps.
pub fn ramp(t: f64) -> [u8; 3] {
    let idx = (t.clamp(0.0, 1.0) * 255.0).round() as u8;
    [idx, 0, 255 - idx]
}

/// One crossing of the level `r` along a ray, or a miss.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereSample {
    pub ray: usize,
    pub theta: f64,
    /// Index of the crossing along the ray.
    pub crossing: usize,
    /// `None` when the ray has no finite crossing inside `U`.
    pub point: Option<Point>,
}

const SCAN_POINTS: usize = 64;
const BISECTION_TOL: f64 = 1e-10;

/// Samples of `{y in U : D(z, y) = r}` along `rays` gradient-space rays
/// `grad f(y) = grad f(z) + t (cos theta_k, sin theta_k)`,
/// `theta_k = 2 pi k / rays`. `D(z, .)` is convex along each such ray, so the
/// level is crossed at most once; a pre-scan brackets it and bisection in `t`
/// refines it.
pub fn sphere(f: &LegendreFunction, z: &[f64], r: f64, rays: usize) -> Result<Vec<SphereSample>> {
    if f.dimension() != 2 {
        return Err(Error::InvalidArgument("spheres are traced in the plane".into()));
    }
    f.check_dim(z)?;
    if !f.in_interior(z) {
        return Err(Error::Domain(format!("center {z:?} is not in int dom f")));
    }
    if !r.is_finite() || r < 0.0 {
        return Err(Error::InvalidArgument(format!("radius must be a nonnegative real, got {r}")));
    }
    if rays == 0 {
        return Err(Error::InvalidArgument("need at least one ray".into()));
    }
    let gz = f.grad_unchecked(z);
    let mut out = Vec::new();
    for k in 0..rays {
        let theta = 2.0 * PI * k as f64 / rays as f64;
        if r == 0.0 {
            out.push(SphereSample { ray: k, theta, crossing: 0, point: Some(z.to_vec()) });
            continue;
        }
        let u = [theta.cos(), theta.sin()];
        let dual = |t: f64| -> Point { vec![gz[0] + t * u[0], gz[1] + t * u[1]] };
        let level = |t: f64| -> f64 {
            let w = dual(t);
            if !f.in_conj_interior(&w) {
                return f64::INFINITY;
            }
            let y = f.grad_conj_unchecked(&w);
            if f.in_interior(&y) {
                distance_unchecked(f, z, &y) - r
            } else {
                f64::INFINITY
            }
        };
        let reach = dual_exit_time(f, &gz, &u);
        let mut ts: Vec<f64> = Vec::with_capacity(SCAN_POINTS + 12);
        if reach.is_finite() {
            ts.extend((1..=SCAN_POINTS).map(|i| reach * i as f64 / (SCAN_POINTS + 1) as f64));
            ts.extend((2..=12).map(|e| reach * (1.0 - 10f64.powi(-e))));
        } else {
            let scale = 1.0 + gz[0].abs().max(gz[1].abs());
            ts.extend((0..SCAN_POINTS).map(|i| 1e-4 * scale * 2f64.powf(i as f64 / 2.0)));
        }
        let mut crossing = 0;
        let (mut prev_t, mut prev_v) = (0.0, -r);
        for &t in &ts {
            let v = level(t);
            if (prev_v < 0.0) != (v < 0.0) {
                let root = bisect(&level, prev_t, t, prev_v < 0.0);
                let y = f.grad_conj_unchecked(&dual(root));
                out.push(SphereSample { ray: k, theta, crossing, point: Some(y) });
                crossing += 1;
            }
            prev_t = t;
            prev_v = v;
        }
        if crossing == 0 {
            out.push(SphereSample { ray: k, theta, crossing: 0, point: None });
        }
    }
    Ok(out)
}

/// Largest `t` with `w + s u` in `int dom f*` for all `s < t`.
fn dual_exit_time(f: &LegendreFunction, w: &[f64], u: &[f64]) -> f64 {
    match f.kind() {
        crate::Kind::NegLog => {
            w.iter().zip(u).filter(|(_, &ui)| ui > 0.0).map(|(&wi, &ui)| -wi / ui).fold(f64::INFINITY, f64::min)
        }
        _ => f64::INFINITY,
    }
}

fn bisect(level: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, rising: bool) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if (level(mid) < 0.0) == rising {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `ray,theta,crossing,x,y` rows; misses carry `nan` coordinates.
pub fn sphere_csv(samples: &[SphereSample]) -> String {
    let mut out = String::from("ray,theta,crossing,x,y\n");
    for s in samples {
        let (x, y) = match &s.point {
            Some(p) => (sci(p[0]), sci(p[1])),
            None => ("nan".into(), "nan".into()),
        };
        let _ = writeln!(out, "{},{},{},{},{}", s.ray, sci(s.theta), s.crossing, x, y);
    }
    out
}
