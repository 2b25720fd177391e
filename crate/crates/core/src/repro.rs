//! Reproduction report for the planar segment family: numeric centers
//! against closed forms, the Itakura-Saito dichotomy, the threshold `a~`,
//! and the weight reconstruction.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::bregman::{four_point_residual, three_point_residual};
use crate::center::{solve_fixed_point, solve_subgradient, CenterCertificate, SolverOptions};
use crate::closedform::{self, endpoints, Generator, SegmentFamily};
use crate::compactset::CompactSet;
use crate::farthest::monotonicity_witness;
use crate::{dist, Kind, LegendreFunction, Point, Result};

/// Thresholds of the report. [`ReproTolerances::uniform`] replaces all of
/// them by one value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReproTolerances {
    /// Euclidean and KL centers, per coordinate.
    pub center: f64,
    /// Itakura-Saito centers, per coordinate.
    pub center_is: f64,
    pub gap: f64,
    pub weights: f64,
    pub reconstruction: f64,
    pub midpoint: f64,
    pub threshold: f64,
    pub k_root: f64,
    pub mu_sum: f64,
}

impl Default for ReproTolerances {
    fn default() -> Self {
        Self {
            center: 1e-5,
            center_is: 1e-4,
            gap: 1e-6,
            weights: 1e-6,
            reconstruction: 1e-9,
            midpoint: 1e-3,
            threshold: 0.005,
            k_root: 1e-8,
            mu_sum: 1e-12,
        }
    }
}

impl ReproTolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            center: tol,
            center_is: tol,
            gap: tol,
            weights: tol,
            reconstruction: tol,
            midpoint: tol,
            threshold: tol,
            k_root: tol,
            mu_sum: tol,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }
}

/// Odd sample count for the segments; the midpoint is always a sample.
pub const SAMPLES: usize = 1025;

pub const A_VALUES: [f64; 4] = [4.0, 8.0, 16.0, 32.0];

fn both_solvers(cfg: &SegmentFamily) -> Result<[CenterCertificate; 2]> {
    let f = cfg.legendre();
    let c = cfg.segment(SAMPLES)?;
    let opts = SolverOptions::default();
    Ok([solve_fixed_point(&f, &c, &opts)?, solve_subgradient(&f, &c, &opts)?])
}

fn max_coord_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn solver_check(name: String, cfg: &SegmentFamily, body: impl Fn(&[CenterCertificate; 2]) -> (bool, String)) -> Check {
    match both_solvers(cfg) {
        Ok(certs) => {
            let (ok, detail) = body(&certs);
            Check::new(name, ok, detail)
        }
        Err(e) => Check::new(name, false, format!("solver error: {e}")),
    }
}

pub fn euclidean_centers(tol: &ReproTolerances) -> Vec<Check> {
    A_VALUES
        .iter()
        .map(|&a| {
            let cfg = SegmentFamily::new(Generator::Euclidean, a).expect("a > 1");
            let want = cfg.center();
            solver_check(format!("euclidean center a={a}"), &cfg, |certs| {
                let err = certs.iter().map(|c| max_coord_err(&c.center, &want)).fold(0.0, f64::max);
                let gap = certs.iter().map(|c| c.membership_gap).fold(0.0, f64::max);
                let werr = certs
                    .iter()
                    .map(|c| c.weights.iter().map(|w| (w - 0.5).abs()).fold(0.0, f64::max))
                    .fold(0.0, f64::max);
                let two = certs.iter().all(|c| c.weights.len() == 2);
                (
                    err <= tol.center && gap <= tol.gap && two && werr <= tol.weights,
                    format!("|z - c_1/2| = {err:.2e}, gap = {gap:.2e}, |mu - 1/2| = {werr:.2e}"),
                )
            })
        })
        .collect()
}

pub fn kl_centers(tol: &ReproTolerances) -> Vec<Check> {
    let f = Generator::Kl.legendre();
    A_VALUES
        .iter()
        .map(|&a| {
            let cfg = SegmentFamily::new(Generator::Kl, a).expect("a > 1");
            let want = cfg.center();
            let [c0, _, c1] = endpoints(a);
            let g0 = f.grad_unchecked(&c0);
            let g1 = f.grad_unchecked(&c1);
            let mid: Vec<f64> = g0.iter().zip(&g1).map(|(x, y)| 0.5 * x + 0.5 * y).collect();
            let rec = max_coord_err(&f.grad_conj_unchecked(&mid), &want);
            solver_check(format!("kl center a={a}"), &cfg, |certs| {
                let err = certs.iter().map(|c| max_coord_err(&c.center, &want)).fold(0.0, f64::max);
                (
                    err <= tol.center && rec <= tol.reconstruction,
                    format!("|z - (sqrt a, sqrt a)| = {err:.2e}, dual reconstruction error = {rec:.2e}"),
                )
            })
        })
        .collect()
}

pub fn is_dichotomy(tol: &ReproTolerances) -> Vec<Check> {
    let mut out = Vec::new();
    for &a in &A_VALUES {
        let cfg = SegmentFamily::new(Generator::Is, a).expect("a > 1");
        let closed = closedform::center_is(a).expect("a > 1");
        let mid = endpoints(a)[1].clone();
        let branch = if closed.g < closed.h { "g<h" } else { "g>=h" };
        out.push(solver_check(format!("is center a={a} ({branch})"), &cfg, |certs| {
            let err = certs.iter().map(|c| max_coord_err(&c.center, &closed.point)).fold(0.0, f64::max);
            let structure = if closed.g < closed.h {
                certs.iter().all(|c| c.farthest.len() == 2)
            } else {
                certs.iter().all(|c| c.farthest.iter().any(|q| dist(q, &mid) <= tol.midpoint))
            };
            let sizes: Vec<usize> = certs.iter().map(|c| c.farthest.len()).collect();
            (
                err <= tol.center_is && structure,
                format!(
                    "|z - closed form| = {err:.2e}, |Q_C(z)| = {sizes:?}, g = {:.6}, h = {:.6}",
                    closed.g, closed.h
                ),
            )
        }));
    }
    match closedform::threshold_a(1e-12) {
        Ok(at) => {
            let k = closedform::k_of(at);
            out.push(Check::new(
                "threshold a~",
                (at - 17.63).abs() <= tol.threshold && k.abs() <= tol.k_root,
                format!("a~ = {at:.10}, k(a~) = {k:.2e}"),
            ));
        }
        Err(e) => out.push(Check::new("threshold a~", false, e.to_string())),
    }
    out
}

pub fn mu_reconstruction(tol: &ReproTolerances) -> Vec<Check> {
    let f = Generator::Is.legendre();
    [4.0, 32.0]
        .iter()
        .map(|&a| {
            let mu = closedform::mu_coefficients(a).expect("a > 1");
            let pts = endpoints(a);
            let mut s = vec![0.0; 2];
            for (m, p) in mu.iter().zip(&pts) {
                for (si, gi) in s.iter_mut().zip(f.grad_unchecked(p)) {
                    *si += m * gi;
                }
            }
            let z = f.grad_conj_unchecked(&s);
            let want = closedform::center_is(a).expect("a > 1").point;
            let rec = max_coord_err(&z, &want);
            let sum_err = (mu.iter().sum::<f64>() - 1.0).abs();
            let in_unit = mu.iter().all(|m| (0.0..=1.0).contains(m));
            Check::new(
                format!("mu reconstruction a={a}"),
                in_unit && sum_err <= tol.mu_sum && rec <= tol.reconstruction,
                format!("mu = {mu:?}, |sum - 1| = {sum_err:.2e}, reconstruction error = {rec:.2e}"),
            )
        })
        .collect()
}

/// At the `a = 32` Itakura-Saito center the midpoint ties with the endpoints,
/// and just below it on the diagonal the midpoint is strictly farthest.
pub fn is_interior_farthest(tol: &ReproTolerances) -> Check {
    let f = Generator::Is.legendre();
    let a = 32.0;
    let c = CompactSet::make_segment(&f, a, SAMPLES).expect("valid segment");
    let g = closedform::g_of(a).expect("a > 1");
    let probe = [0.5 * g, 0.5 * g];
    let pts = c.enumerate();
    let ds: Vec<f64> = pts.iter().map(|p| crate::distance(&f, &probe, p)).collect();
    let ends = ds[0].max(ds[ds.len() - 1]);
    let interior = ds[1..ds.len() - 1].iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let q = crate::farthest(&f, &c, &[g, g]).expect("dimension 2");
    let mid = endpoints(a)[1].clone();
    let has_mid = q.argmax.iter().any(|p| dist(p, &mid) <= tol.midpoint);
    Check::new(
        "is interior farthest point a=32",
        interior > ends && has_mid,
        format!(
            "at (g/2, g/2): interior max {interior:.6} vs endpoint max {ends:.6}; |Q_C((g,g))| = {}",
            q.argmax.len()
        ),
    )
}

pub fn run(tol: &ReproTolerances) -> Vec<Check> {
    let mut out = euclidean_centers(tol);
    out.extend(kl_centers(tol));
    out.extend(is_dichotomy(tol));
    out.extend(mu_reconstruction(tol));
    out.push(is_interior_farthest(tol));
    out
}

fn random_point(rng: &mut impl Rng, f: &LegendreFunction) -> Point {
    (0..f.dimension())
        .map(|_| match f.kind() {
            Kind::Energy | Kind::Quadratic => rng.gen_range(-5.0..5.0),
            Kind::NegEntropy | Kind::NegLog => rng.gen_range(0.1..10.0),
        })
        .collect()
}

/// Generators swept by [`random_sweep`]: the three diagonal ones and a
/// fixed positive definite quadratic form, all in the plane.
pub fn sweep_generators() -> Vec<LegendreFunction> {
    vec![
        LegendreFunction::energy(2).expect("dimension 2"),
        LegendreFunction::quadratic(&[vec![2.0, 0.5], vec![0.5, 1.0]]).expect("positive definite"),
        LegendreFunction::neg_entropy(2).expect("dimension 2"),
        LegendreFunction::neg_log(2).expect("dimension 2"),
    ]
}

/// Seeded sweep of the distance identities, monotonicity of the farthest
/// map and two-point farthest sets at certified centers.
pub fn random_sweep(seed: u64, tol: &ReproTolerances) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for f in sweep_generators() {
        let name = f.kind().name();
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let p: Vec<Point> = (0..4).map(|_| random_point(&mut rng, &f)).collect();
            let r3 = three_point_residual(&f, &p[0], &p[1], &p[2]).expect("interior points");
            let r4 = four_point_residual(&f, &p[0], &p[1], &p[2], &p[3]).expect("interior points");
            worst = worst.max(r3.abs()).max(r4.abs());
        }
        out.push(Check::new(
            format!("{name} identities (seed {seed})"),
            worst <= 1e-9,
            format!("max residual {worst:.2e}"),
        ));

        let pts: Vec<Point> = (0..5).map(|_| random_point(&mut rng, &f)).collect();
        let c = CompactSet::finite(pts).expect("nonempty");
        let mut low = f64::INFINITY;
        for _ in 0..100 {
            let (x, y) = (random_point(&mut rng, &f), random_point(&mut rng, &f));
            low = low.min(monotonicity_witness(&f, &c, &x, &y).expect("points in dom f"));
        }
        out.push(Check::new(
            format!("{name} monotonicity (seed {seed})"),
            low >= -1e-9,
            format!("min witness {low:.3e}"),
        ));

        let check = match solve_fixed_point(&f, &c, &SolverOptions::default()) {
            Ok(cert) => Check::new(
                format!("{name} random center (seed {seed})"),
                cert.farthest.len() >= 2 && cert.membership_gap <= tol.gap,
                format!("|Q_C(z)| = {}, gap = {:.2e}", cert.farthest.len(), cert.membership_gap),
            ),
            Err(e) => Check::new(format!("{name} random center (seed {seed})"), false, e.to_string()),
        };
        out.push(check);
    }
    out
}
