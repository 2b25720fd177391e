//! Least squares over the probability simplex:
//! `min |sum_i w_i g_i - b|` subject to `w >= 0`, `sum w = 1`.

use nalgebra::{DMatrix, DVector};

use crate::tolerance::SIMPLEX_FIT;
use crate::{norm, sub};

/// Euclidean projection of `v` onto the probability simplex.
pub fn project(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplexFit {
    pub weights: Vec<f64>,
    /// `|sum_i w_i g_i - b|`.
    pub residual: f64,
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

/// Closest point to `target` in the convex hull of `cols`, as simplex
/// weights. Exact face enumeration for up to three columns, Wolfe's
/// minimum-norm-point algorithm otherwise.
pub fn fit(cols: &[Vec<f64>], target: &[f64]) -> SimplexFit {
    assert!(!cols.is_empty(), "simplex fit over an empty hull");
    let weights = if cols.len() <= 3 { fit_exact(cols, target) } else { fit_iterative(cols, target) };
    let residual = norm(&sub(&combine(cols, &weights), target));
    SimplexFit { weights, residual }
}

/// Affine least squares restricted to the columns in `face`; `None` when
/// the face is degenerate.
fn affine_solve(cols: &[Vec<f64>], target: &[f64], face: &[usize]) -> Option<Vec<f64>> {
    let m = face.len();
    let mut k = DMatrix::zeros(m + 1, m + 1);
    let mut rhs = DVector::zeros(m + 1);
    for (a, &i) in face.iter().enumerate() {
        for (b, &j) in face.iter().enumerate() {
            k[(a, b)] = crate::dot(&cols[i], &cols[j]);
        }
        k[(a, m)] = 1.0;
        k[(m, a)] = 1.0;
        rhs[a] = crate::dot(&cols[i], target);
    }
    rhs[m] = 1.0;
    let scale = k.amax().max(1.0);
    let lu = k.lu();
    let sol = lu.solve(&rhs)?;
    // Reject near-singular faces; smaller faces cover them.
    let u = lu.u();
    if u.diagonal().iter().any(|d| d.abs() <= 1e-13 * scale) {
        return None;
    }
    Some(sol.as_slice()[..m].to_vec())
}

fn fit_exact(cols: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
    let n = cols.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1 << n) {
        let face: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let local = if face.len() == 1 { Some(vec![1.0]) } else { affine_solve(cols, target, &face) };
        let Some(local) = local else { continue };
        if local.iter().any(|w| *w < -1e-14) {
            continue;
        }
        let mut w = vec![0.0; n];
        for (&i, &wi) in face.iter().zip(&local) {
            w[i] = wi.max(0.0);
        }
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        let r = norm(&sub(&combine(cols, &w), target));
        if best.as_ref().is_none_or(|(br, _)| r < *br - 1e-15) {
            best = Some((r, w));
        }
    }
    best.expect("vertices are always feasible").1
}

/// Wolfe's minimum-norm-point algorithm on the points `cols[i] - target`.
fn fit_iterative(cols: &[Vec<f64>], target: &[f64]) -> Vec<f64> {
    let n = cols.len();
    let pts: Vec<Vec<f64>> = cols.iter().map(|c| sub(c, target)).collect();
    let scale = pts.iter().map(|p| crate::dot(p, p)).fold(0.0, f64::max).max(1e-300);
    let start = (0..n).min_by(|&a, &b| norm(&pts[a]).total_cmp(&norm(&pts[b]))).expect("nonempty");
    let mut face = vec![start];
    let mut lambda = vec![1.0];
    for _ in 0..10 * n + 100 {
        let x = combine_face(&pts, &face, &lambda);
        let xx = crate::dot(&x, &x);
        let j = (0..n).min_by(|&a, &b| crate::dot(&x, &pts[a]).total_cmp(&crate::dot(&x, &pts[b]))).expect("nonempty");
        if xx - crate::dot(&x, &pts[j]) <= SIMPLEX_FIT * scale || face.contains(&j) {
            break;
        }
        face.push(j);
        lambda.push(0.0);
        loop {
            let Some(alpha) = affine_solve(cols, target, &face) else {
                return spread(n, &face, &lambda);
            };
            if alpha.iter().all(|a| *a > 1e-14) {
                lambda = alpha;
                break;
            }
            let theta = face
                .iter()
                .enumerate()
                .filter(|(k, _)| alpha[*k] <= 1e-14)
                .map(|(k, _)| lambda[k] / (lambda[k] - alpha[k]))
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let keep: Vec<usize> = (0..face.len()).filter(|&k| lambda[k] > 1e-14).collect();
            face = keep.iter().map(|&k| face[k]).collect();
            lambda = keep.iter().map(|&k| lambda[k]).collect();
        }
    }
    spread(n, &face, &lambda)
}

fn combine_face(pts: &[Vec<f64>], face: &[usize], lambda: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; pts[0].len()];
    for (&i, l) in face.iter().zip(lambda) {
        for (o, p) in out.iter_mut().zip(&pts[i]) {
            *o += l * p;
        }
    }
    out
}

fn spread(n: usize, face: &[usize], lambda: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; n];
    let total: f64 = lambda.iter().map(|l| l.max(0.0)).sum();
    for (&i, l) in face.iter().zip(lambda) {
        w[i] = l.max(0.0) / total;
    }
    w
}
