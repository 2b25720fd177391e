//! Chebyshev centers: the unique minimizer `z` of `F_C`, characterized by
//! `grad f(z) in conv grad f(Q_C(z))`.
//!
//! Both solvers run their own first-order scheme (a dual averaging fixed
//! point iteration, or projected subgradient descent) and then hand the
//! result to an exact active-set refinement. The refinement works on the
//! concave dual
//!
//! ```text
//! phi(mu) = sum_i mu_i D(z(mu), c_i),   z(mu) = grad f*(sum_i mu_i grad f(c_i)),
//! ```
//!
//! whose partial derivatives are the distances `D(z(mu), c_i)`: on a face of
//! the simplex the maximizer equalizes the distances to the face's atoms,
//! and the global maximizer additionally keeps every other point no farther.
//! Faces are solved by Newton's method; atoms enter as violators and leave
//! when a smaller face already satisfies the optimality conditions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bregman::distance_unchecked;
use crate::compactset::CompactSet;
use crate::farthest::{farthest_among, subgradient_vertices};
use crate::legendre::LegendreFunction;
use crate::simplex;
use crate::tolerance::{PROJECTION_OPT, SIMPLEX_FIT};
use crate::{dist, dot, norm, sub, Error, Point, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    FixedPoint,
    Subgradient,
    ClosedForm,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenterCertificate {
    pub center: Point,
    #[serde(with = "crate::json")]
    pub radius: f64,
    /// `Q_C(center)` in enumeration order.
    pub farthest: Vec<Point>,
    pub farthest_indices: Vec<usize>,
    /// Simplex weights over `farthest`.
    pub weights: Vec<f64>,
    /// `|grad f(z) - sum_i w_i grad f(q_i)|`.
    pub membership_gap: f64,
    pub iterations: usize,
    pub solver: Solver,
    /// Gap within tolerance and, when `C` has two distinct points, at least
    /// two farthest points.
    pub valid: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    pub max_iter: usize,
    pub tol: f64,
    /// Starting point; defaults to [`default_start`].
    pub x0: Option<Point>,
    /// Skip the active-set refinement and certify the raw iterate.
    pub raw: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { max_iter: 5000, tol: 1e-9, x0: None, raw: false }
    }
}

impl SolverOptions {
    pub fn with_start(mut self, x0: Point) -> Self {
        self.x0 = Some(x0);
        self
    }
}

/// `grad f*` of the average of `grad f` over `C`; always in `U`.
pub fn default_start(f: &LegendreFunction, c: &CompactSet) -> Point {
    let pts = c.enumerate();
    let mut s = vec![0.0; f.dimension()];
    for p in &pts {
        for (si, gi) in s.iter_mut().zip(f.grad_unchecked(p)) {
            *si += gi / pts.len() as f64;
        }
    }
    f.grad_conj_unchecked(&s)
}

struct Problem<'a> {
    f: &'a LegendreFunction,
    points: Vec<Point>,
    grads: Vec<Point>,
}

impl<'a> Problem<'a> {
    fn new(f: &'a LegendreFunction, c: &CompactSet) -> Result<Self> {
        c.validate(f)?;
        let points = c.enumerate();
        let grads = points.iter().map(|p| f.grad_unchecked(p)).collect();
        Ok(Self { f, points, grads })
    }

    fn distances(&self, z: &[f64]) -> Vec<f64> {
        self.points.iter().map(|c| distance_unchecked(self.f, z, c)).collect()
    }

    fn value(&self, z: &[f64]) -> f64 {
        self.distances(z).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    fn dual_point(&self, atoms: &[usize], mu: &[f64]) -> Vec<f64> {
        let mut s = vec![0.0; self.f.dimension()];
        for (&i, &m) in atoms.iter().zip(mu) {
            for (si, gi) in s.iter_mut().zip(&self.grads[i]) {
                *si += m * gi;
            }
        }
        s
    }
}

fn check_start(f: &LegendreFunction, c: &CompactSet, opts: &SolverOptions) -> Result<Point> {
    let x0 = match &opts.x0 {
        Some(x) => x.clone(),
        None => default_start(f, c),
    };
    f.check_dim(&x0)?;
    if !f.in_interior(&x0) {
        return Err(Error::Domain(format!("start point {x0:?} is not in int dom f")));
    }
    Ok(x0)
}

/// Dual averaging fixed point iteration
/// `x_{t+1} = grad f*((1 - eta_t) grad f(x_t) + eta_t grad f(q_t))`,
/// `eta_t = 1/(t+2)`, `q_t in Q_C(x_t)`, followed by the active-set
/// refinement.
pub fn solve_fixed_point(f: &LegendreFunction, c: &CompactSet, opts: &SolverOptions) -> Result<CenterCertificate> {
    let prob = Problem::new(f, c)?;
    let x0 = check_start(f, c, opts)?;
    let n = prob.points.len();
    let mut s = f.grad_unchecked(&x0);
    let mut x = x0;
    let mut mu = vec![0.0; n];
    let mut iterations = 0;
    for t in 0..opts.max_iter {
        iterations = t + 1;
        let ds = prob.distances(&x);
        let q = argmax(&ds);
        let eta = 1.0 / (t as f64 + 2.0);
        let next: Vec<f64> = s.iter().zip(&prob.grads[q]).map(|(a, b)| (1.0 - eta) * a + eta * b).collect();
        mu.iter_mut().for_each(|m| *m *= 1.0 - eta);
        mu[q] += eta;
        let step = dist(&next, &s);
        s = next;
        x = f.grad_conj_unchecked(&s);
        if step <= opts.tol {
            break;
        }
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| mu[i] > 0.0).collect();
    order.sort_by(|&a, &b| mu[b].total_cmp(&mu[a]));
    finish(&prob, c, x, order, iterations, Solver::FixedPoint, opts)
}

/// Projected subgradient descent on `F_C` along the minimum-norm element of
/// the subdifferential, step `rho / (L sqrt(t))` with `L` the largest
/// initial subgradient vertex norm and `rho` the diameter of `C`; steps are
/// halved until the iterate stays in `U`. Followed by the active-set
/// refinement.
pub fn solve_subgradient(f: &LegendreFunction, c: &CompactSet, opts: &SolverOptions) -> Result<CenterCertificate> {
    let prob = Problem::new(f, c)?;
    let x0 = check_start(f, c, opts)?;
    let rho = diameter(&prob.points).max(1e-12);
    let mut x = x0;
    let mut best = (prob.value(&x), x.clone());
    let mut lip = 0.0f64;
    let mut iterations = 0;
    for t in 1..=opts.max_iter {
        iterations = t;
        let q = farthest_among(f, &prob.points, &x);
        let verts = subgradient_vertices(f, &x, &q.argmax);
        if t == 1 {
            lip = verts.iter().map(|v| norm(v)).fold(0.0, f64::max).max(1e-300);
        }
        let g = {
            let fit = simplex::fit(&verts, &vec![0.0; f.dimension()]);
            combine(&verts, &fit.weights)
        };
        if norm(&g) <= opts.tol {
            break;
        }
        let mut alpha = rho / (lip * (t as f64).sqrt());
        let mut next: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a - alpha * b).collect();
        let mut halvings = 0;
        while !f.in_interior(&next) && halvings < 80 {
            alpha *= 0.5;
            halvings += 1;
            next = x.iter().zip(&g).map(|(a, b)| a - alpha * b).collect();
        }
        if !f.in_interior(&next) {
            break;
        }
        x = next;
        let v = prob.value(&x);
        if v < best.0 {
            best = (v, x.clone());
        }
    }
    let z = best.1;
    let ds = prob.distances(&z);
    let top = ds.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut order: Vec<usize> = (0..ds.len()).filter(|&i| ds[i] >= top * (1.0 - 1e-6) - 1e-15).collect();
    order.sort_by(|&a, &b| ds[b].total_cmp(&ds[a]));
    finish(&prob, c, z, order, iterations, Solver::Subgradient, opts)
}

fn finish(
    prob: &Problem<'_>,
    c: &CompactSet,
    raw: Point,
    seeds: Vec<usize>,
    iterations: usize,
    solver: Solver,
    opts: &SolverOptions,
) -> Result<CenterCertificate> {
    let z = if opts.raw { raw } else { refine(prob, seeds).map(|r| r.center).unwrap_or(raw) };
    let mut cert = certify(prob.f, c, &z, 100.0 * opts.tol)?;
    cert.iterations = iterations;
    cert.solver = solver;
    if !cert.valid {
        return Err(Error::NonConvergence(Box::new(cert)));
    }
    Ok(cert)
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn combine(cols: &[Vec<f64>], w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; cols[0].len()];
    for (c, wi) in cols.iter().zip(w) {
        for (o, ci) in out.iter_mut().zip(c) {
            *o += wi * ci;
        }
    }
    out
}

fn diameter(points: &[Point]) -> f64 {
    let dim = points[0].len();
    let mut lo = vec![f64::INFINITY; dim];
    let mut hi = vec![f64::NEG_INFINITY; dim];
    for p in points {
        for k in 0..dim {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    dist(&lo, &hi)
}

/// Optimal face found by the refinement.
struct Face {
    atoms: Vec<usize>,
    center: Point,
    radius: f64,
}

const FACE_REL: f64 = 1e-12;
const MAX_ATOMS: usize = 12;

fn within_radius(d: f64, r: f64) -> bool {
    d <= r * (1.0 + FACE_REL) + 1e-15
}

/// Maximizes the dual over the face spanned by `atoms` (weights allowed to
/// leave the simplex, staying on its affine hull). Returns the weights, the
/// center and the common distance, or `None` for a degenerate face.
fn solve_face(prob: &Problem<'_>, atoms: &[usize]) -> Option<(Vec<f64>, Point, f64)> {
    let f = prob.f;
    let m = atoms.len();
    if m == 1 {
        let z = prob.points[atoms[0]].clone();
        return Some((vec![1.0], z, 0.0));
    }
    let g0 = &prob.grads[atoms[0]];
    let edges: Vec<Vec<f64>> = atoms[1..].iter().map(|&i| sub(&prob.grads[i], g0)).collect();
    let weights = |u: &[f64]| -> Vec<f64> {
        let mut w = Vec::with_capacity(m);
        w.push(1.0 - u.iter().sum::<f64>());
        w.extend_from_slice(u);
        w
    };
    let eval = |u: &[f64]| -> Option<(Vec<f64>, Point, Vec<f64>, f64)> {
        let w = weights(u);
        let s = prob.dual_point(atoms, &w);
        if !f.in_conj_interior(&s) {
            return None;
        }
        let z = f.grad_conj_unchecked(&s);
        if !f.in_interior(&z) {
            return None;
        }
        let ds: Vec<f64> = atoms.iter().map(|&i| distance_unchecked(f, &z, &prob.points[i])).collect();
        let phi = w.iter().zip(&ds).map(|(a, b)| a * b).sum();
        Some((s, z, ds, phi))
    };
    let mut u = vec![1.0 / m as f64; m - 1];
    let (mut s, mut z, mut ds, mut phi) = eval(&u)?;
    for _ in 0..200 {
        let grad: Vec<f64> = ds[1..].iter().map(|d| d - ds[0]).collect();
        let scale = ds.iter().fold(0.0f64, |a, b| a.max(b.abs())).max(1e-300);
        if grad.iter().all(|g| g.abs() <= 1e-15 * scale) {
            break;
        }
        let hv: Vec<Vec<f64>> = edges.iter().map(|e| f.hess_conj_apply(&s, e)).collect();
        let neg_hess = DMatrix::from_fn(m - 1, m - 1, |a, b| dot(&edges[a], &hv[b]));
        let chol = nalgebra::Cholesky::new(neg_hess)?;
        let delta = chol.solve(&DVector::from_column_slice(&grad));
        let slope = dot(&grad, delta.as_slice());
        if slope <= 0.0 {
            return None;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = u.iter().zip(delta.iter()).map(|(a, b)| a + t * b).collect();
            if let Some((s2, z2, ds2, phi2)) = eval(&trial) {
                if phi2 >= phi + 1e-4 * t * slope || t * slope <= 1e-15 * scale {
                    u = trial;
                    (s, z, ds, phi) = (s2, z2, ds2, phi2);
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let spread = ds.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b)) - ds.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let r = ds.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if spread > 1e-11 * r.max(1e-300) {
        return None;
    }
    Some((weights(&u), z, r))
}

/// Exact optimum of the dual restricted to the simplex over `atoms`.
fn solve_atoms(prob: &Problem<'_>, atoms: &[usize]) -> Option<Face> {
    let n = atoms.len();
    let mut best: Option<Face> = None;
    for mask in 1u32..(1 << n) {
        let face: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| atoms[k]).collect();
        let Some((w, z, r)) = solve_face(prob, &face) else { continue };
        if w.iter().any(|x| *x < -1e-12) {
            continue;
        }
        let kkt = atoms
            .iter()
            .filter(|i| !face.contains(i))
            .all(|&i| within_radius(distance_unchecked(prob.f, &z, &prob.points[i]), r));
        if !kkt {
            continue;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                r > b.radius * (1.0 + FACE_REL) || (r >= b.radius * (1.0 - FACE_REL) && face.len() < b.atoms.len())
            }
        };
        if better {
            let atoms = face.iter().zip(&w).filter(|(_, w)| **w > 0.0).map(|(i, _)| *i).collect();
            best = Some(Face { atoms, center: z, radius: r });
        }
    }
    best
}

/// Active-set maximization of the dual starting from `seeds` (in order of
/// preference).
fn refine(prob: &Problem<'_>, seeds: Vec<usize>) -> Option<Face> {
    let cap = (prob.f.dimension() + 1).min(MAX_ATOMS - 1);
    let mut atoms: Vec<usize> = Vec::new();
    for i in seeds {
        if atoms.len() >= cap {
            break;
        }
        if atoms.iter().all(|&j| dist(&prob.grads[i], &prob.grads[j]) > 0.0) {
            atoms.push(i);
        }
    }
    if atoms.is_empty() {
        atoms.push(0);
    }
    for _ in 0..500 {
        let face = solve_atoms(prob, &atoms)?;
        let ds = prob.distances(&face.center);
        let v = argmax(&ds);
        if within_radius(ds[v], face.radius) || face.atoms.contains(&v) {
            return Some(face);
        }
        atoms = face.atoms;
        if atoms.len() + 1 > MAX_ATOMS {
            return None;
        }
        atoms.push(v);
    }
    None
}

/// Checks the center characterization at `z`: fits simplex weights so that
/// `sum_i w_i grad f(q_i)` is closest to `grad f(z)` over `q_i in Q_C(z)`.
pub fn certify(f: &LegendreFunction, c: &CompactSet, z: &[f64], gap_tol: f64) -> Result<CenterCertificate> {
    f.check_dim(z)?;
    if !f.in_interior(z) {
        return Err(Error::Domain(format!("{z:?} is not in int dom f")));
    }
    c.validate(f)?;
    let q = farthest_among(f, &c.enumerate(), z);
    let gz = f.grad_unchecked(z);
    let cols: Vec<Vec<f64>> = q.argmax.iter().map(|p| f.grad_unchecked(p)).collect();
    let fit = simplex::fit(&cols, &gz);
    let multi = q.argmax.len() >= 2 || !c.has_two_points();
    Ok(CenterCertificate {
        center: z.to_vec(),
        radius: q.value,
        farthest: q.argmax,
        farthest_indices: q.witness_indices,
        weights: fit.weights,
        membership_gap: fit.residual,
        iterations: 0,
        solver: Solver::ClosedForm,
        valid: fit.residual <= gap_tol && multi,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullProjection {
    /// `y = grad f*(y*)`.
    pub point: Point,
    /// Weights of `y*` over `grad f(C)` in enumeration order.
    pub weights: Vec<f64>,
    /// `x` already lies in `grad f*(conv grad f(C))`; then `point == x`.
    pub inside: bool,
}

/// The point `y = grad f*(y*)` where `y*` is the Bregman projection, with
/// respect to `f*`, of `grad f(x)` onto `conv grad f(C)`:
/// `y* = argmin_{v in conv grad f(C)} D_{f*}(v, grad f(x))`.
///
/// It satisfies `D(x, c) >= D(x, y) + D(y, c)` for every `c` in `C`.
pub fn dual_hull_projection(f: &LegendreFunction, c: &CompactSet, x: &[f64]) -> Result<HullProjection> {
    f.check_dim(x)?;
    if !f.in_interior(x) {
        return Err(Error::Domain(format!("{x:?} is not in int dom f")));
    }
    c.validate(f)?;
    let grads: Vec<Vec<f64>> = c.enumerate().iter().map(|p| f.grad_unchecked(p)).collect();
    let xs = f.grad_unchecked(x);
    let fit = simplex::fit(&grads, &xs);
    if fit.residual <= 1e-10 * (1.0 + norm(&xs)) {
        return Ok(HullProjection { point: x.to_vec(), weights: fit.weights, inside: true });
    }
    let proj = match project_active_set(f, &grads, x) {
        Some(p) => p,
        None => project_gradient(f, &grads, x, fit.weights),
    };
    Ok(proj)
}

/// `psi(w) = f*(G w) - <x, G w>`, equal to `D_{f*}(G w, grad f(x))` up to a
/// constant; `None` outside `dom f*`.
fn projection_objective(f: &LegendreFunction, v: &[f64], x: &[f64]) -> Option<f64> {
    if !f.in_conj_interior(v) {
        return None;
    }
    f.eval_conj(v).ok().map(|fv| fv - dot(x, v))
}

/// Minimizes `psi` over the affine hull of `grads[atoms]`; weights may leave
/// the simplex. `None` for a degenerate face.
fn project_face(
    f: &LegendreFunction,
    grads: &[Vec<f64>],
    x: &[f64],
    atoms: &[usize],
) -> Option<(Vec<f64>, Point, f64)> {
    let m = atoms.len();
    let g0 = &grads[atoms[0]];
    if m == 1 {
        let val = projection_objective(f, g0, x)?;
        return Some((vec![1.0], g0.clone(), val));
    }
    let edges: Vec<Vec<f64>> = atoms[1..].iter().map(|&i| sub(&grads[i], g0)).collect();
    let weights = |u: &[f64]| -> Vec<f64> {
        let mut w = Vec::with_capacity(m);
        w.push(1.0 - u.iter().sum::<f64>());
        w.extend_from_slice(u);
        w
    };
    let point = |u: &[f64]| -> Point {
        let mut v = g0.clone();
        for (e, ui) in edges.iter().zip(u) {
            for (vk, ek) in v.iter_mut().zip(e) {
                *vk += ui * ek;
            }
        }
        v
    };
    let mut u = vec![1.0 / m as f64; m - 1];
    let mut v = point(&u);
    let mut val = projection_objective(f, &v, x)?;
    for _ in 0..200 {
        let r = sub(&f.grad_conj_unchecked(&v), x);
        let grad: Vec<f64> = edges.iter().map(|e| dot(e, &r)).collect();
        let scale = (1.0 + norm(&r)) * edges.iter().map(|e| norm(e)).fold(1.0, f64::max);
        if grad.iter().all(|g| g.abs() <= 1e-15 * scale) {
            break;
        }
        let hv: Vec<Vec<f64>> = edges.iter().map(|e| f.hess_conj_apply(&v, e)).collect();
        let hess = DMatrix::from_fn(m - 1, m - 1, |a, b| dot(&edges[a], &hv[b]));
        let chol = nalgebra::Cholesky::new(hess)?;
        let delta = chol.solve(&DVector::from_column_slice(&grad));
        let slope = dot(&grad, delta.as_slice());
        if slope <= 0.0 {
            break;
        }
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let trial: Vec<f64> = u.iter().zip(delta.iter()).map(|(a, b)| a - t * b).collect();
            let tv = point(&trial);
            if let Some(tval) = projection_objective(f, &tv, x) {
                if tval <= val - 1e-4 * t * slope || t * slope <= 1e-16 * val.abs().max(1.0) {
                    u = trial;
                    v = tv;
                    val = tval;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Some((weights(&u), v, val))
}

/// Exact minimizer of `psi` on the simplex over `atoms`, by enumeration of
/// faces and a KKT check on the remaining atoms.
fn project_atoms(
    f: &LegendreFunction,
    grads: &[Vec<f64>],
    x: &[f64],
    atoms: &[usize],
) -> Option<(Vec<usize>, Vec<f64>, Point)> {
    let n = atoms.len();
    let mut best: Option<(f64, Vec<usize>, Vec<f64>, Point)> = None;
    for mask in 1u32..(1 << n) {
        let face: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).map(|k| atoms[k]).collect();
        let Some((w, v, val)) = project_face(f, grads, x, &face) else { continue };
        if w.iter().any(|wi| *wi < -1e-12) {
            continue;
        }
        let r = sub(&f.grad_conj_unchecked(&v), x);
        let level = dot(&grads[face[0]], &r);
        let tol = kkt_tolerance(grads, &r);
        if atoms.iter().any(|&i| dot(&grads[i], &r) < level - tol) {
            continue;
        }
        if best.as_ref().is_none_or(|b| val < b.0) {
            best = Some((val, face, w, v));
        }
    }
    best.map(|(_, face, w, v)| (face, w, v))
}

fn kkt_tolerance(grads: &[Vec<f64>], r: &[f64]) -> f64 {
    1e-12 * (1.0 + grads.iter().map(|g| norm(g)).fold(0.0, f64::max)) * (1.0 + norm(r))
}

fn project_active_set(f: &LegendreFunction, grads: &[Vec<f64>], x: &[f64]) -> Option<HullProjection> {
    let cap = (f.dimension() + 2).min(MAX_ATOMS);
    let start = (0..grads.len())
        .filter_map(|i| projection_objective(f, &grads[i], x).map(|v| (v, i)))
        .min_by(|a, b| a.0.total_cmp(&b.0))?
        .1;
    let mut atoms = vec![start];
    for _ in 0..500 {
        let (face, w, v) = project_atoms(f, grads, x, &atoms)?;
        let r = sub(&f.grad_conj_unchecked(&v), x);
        let level = dot(&grads[face[0]], &r);
        let scores: Vec<f64> = grads.iter().map(|g| dot(g, &r)).collect();
        let worst = (0..grads.len()).min_by(|&a, &b| scores[a].total_cmp(&scores[b]))?;
        if scores[worst] >= level - kkt_tolerance(grads, &r) || face.contains(&worst) {
            let mut weights = vec![0.0; grads.len()];
            for (i, wi) in face.iter().zip(&w) {
                weights[*i] = wi.max(0.0);
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|wi| *wi /= total);
            return Some(HullProjection { point: f.grad_conj_unchecked(&v), weights, inside: false });
        }
        atoms = face;
        if atoms.len() + 1 > cap {
            return None;
        }
        atoms.push(worst);
    }
    None
}

/// Projected gradient with backtracking on the simplex weights.
fn project_gradient(f: &LegendreFunction, grads: &[Vec<f64>], x: &[f64], start: Vec<f64>) -> HullProjection {
    // psi(mu) = f*(G mu) - <x, G mu>, gradient G^T (grad f*(G mu) - x).
    let psi = |w: &[f64]| -> (f64, Vec<f64>) {
        let v = combine(grads, w);
        let val = f.eval_conj(&v).unwrap_or(f64::INFINITY) - dot(x, &v);
        let r = sub(&f.grad_conj_unchecked(&v), x);
        (val, grads.iter().map(|g| dot(g, &r)).collect())
    };
    let mut w = start;
    let (mut val, mut g) = psi(&w);
    let mut step = 1.0;
    let scale = grads.iter().map(|g| norm(g)).fold(0.0, f64::max).max(1.0) * (1.0 + norm(x));
    for _ in 0..200_000 {
        let mean: f64 = w.iter().zip(&g).map(|(a, b)| a * b).sum();
        let low = g.iter().copied().fold(f64::INFINITY, f64::min);
        if mean - low <= PROJECTION_OPT * 1e-2 * scale {
            break;
        }
        let mut moved = false;
        for _ in 0..80 {
            let trial = simplex::project(&w.iter().zip(&g).map(|(a, b)| a - step * b).collect::<Vec<_>>());
            let d = sub(&trial, &w);
            let (tv, tg) = psi(&trial);
            if tv <= val + dot(&g, &d) + 0.5 / step * dot(&d, &d) {
                moved = norm(&d) > 0.0;
                w = trial;
                val = tv;
                g = tg;
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let point = f.grad_conj_unchecked(&combine(grads, &w));
    HullProjection { point, weights: w, inside: false }
}

/// Tolerance used by the iterative simplex fit, re-exported for reports.
pub const FIT_TOLERANCE: f64 = SIMPLEX_FIT;
