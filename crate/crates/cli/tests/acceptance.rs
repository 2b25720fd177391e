//! Acceptance suite: one PASS/FAIL line per criterion.

use std::process::{Command, ExitCode};
use std::time::Instant;

use bregball::bregman::{four_point_residual, three_point_residual};
use bregball::closedform::{self, endpoints, Generator, SegmentFamily};
use bregball::farthest::{directional_derivative, farthest_value, monotonicity_witness, subdifferential};
use bregball::render::Region;
use bregball::repro::{self, ReproTolerances};
use bregball::{
    distance, dual_hull_projection, farthest, solve_fixed_point, solve_subgradient, CompactSet, Kind, LegendreFunction,
    SolverOptions,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x5eed;

type Criterion = Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn random_quadratic(rng: &mut impl Rng, dim: usize) -> LegendreFunction {
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

fn generator(rng: &mut impl Rng, kind: Kind, dim: usize) -> LegendreFunction {
    match kind {
        Kind::Quadratic => random_quadratic(rng, dim),
        k => LegendreFunction::new(k, dim).unwrap(),
    }
}

const KINDS: [Kind; 4] = [Kind::Energy, Kind::Quadratic, Kind::NegEntropy, Kind::NegLog];

fn point(rng: &mut impl Rng, f: &LegendreFunction) -> Vec<f64> {
    (0..f.dimension())
        .map(|_| match f.kind() {
            Kind::Energy | Kind::Quadratic => rng.gen_range(-5.0..5.0),
            Kind::NegEntropy | Kind::NegLog => rng.gen_range(0.1..10.0),
        })
        .collect()
}

fn finite_set(rng: &mut impl Rng, f: &LegendreFunction, n: usize) -> CompactSet {
    CompactSet::finite((0..n).map(|_| point(rng, f)).collect()).unwrap()
}

fn summarize(checks: &[repro::Check]) -> Outcome {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    let detail =
        if failed.is_empty() { format!("{} checks", checks.len()) } else { format!("failed: {}", failed.join("; ")) };
    outcome(failed.is_empty(), detail)
}

fn euclidean_centers() -> Outcome {
    summarize(&repro::euclidean_centers(&ReproTolerances::default()))
}

fn kl_centers() -> Outcome {
    summarize(&repro::kl_centers(&ReproTolerances::default()))
}

fn is_dichotomy() -> Outcome {
    let checks = repro::is_dichotomy(&ReproTolerances::default());
    let at = closedform::threshold_a(1e-12).unwrap();
    let mut o = summarize(&checks);
    o.detail = format!("{}, a~ = {at:.6}, k(a~) = {:.1e}", o.detail, closedform::k_of(at));
    o
}

fn mu_reconstruction() -> Outcome {
    summarize(&repro::mu_reconstruction(&ReproTolerances::default()))
}

fn identity_suites(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut r3, mut r4, mut rt, mut fy) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for kind in KINDS {
        for _ in 0..1000 {
            let dim = rng.gen_range(1..=4);
            let f = generator(rng, kind, dim);
            let p: Vec<Vec<f64>> = (0..4).map(|_| point(rng, &f)).collect();
            r3 = r3.max(three_point_residual(&f, &p[0], &p[1], &p[2]).unwrap().abs());
            r4 = r4.max(four_point_residual(&f, &p[0], &p[1], &p[2], &p[3]).unwrap().abs());
            let g = f.grad(&p[0]).unwrap();
            let back = f.grad_conj(&g).unwrap();
            rt = rt.max(back.iter().zip(&p[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
            let ip: f64 = g.iter().zip(&p[0]).map(|(a, b)| a * b).sum();
            fy = fy.max((f.eval(&p[0]).unwrap() + f.eval_conj(&g).unwrap() - ip).abs());
        }
    }
    outcome(
        r3.max(r4).max(rt).max(fy) <= 1e-9,
        format!("three-point {r3:.1e}, four-point {r4:.1e}, roundtrip {rt:.1e}, Fenchel-Young {fy:.1e}"),
    )
}

fn first_order(rng: &mut ChaCha8Rng) -> Outcome {
    let (mut grad_err, mut dir_err) = (0.0f64, 0.0f64);
    let mut singletons = 0;
    for kind in KINDS {
        let f = generator(rng, kind, 2);
        let c = finite_set(rng, &f, 6);
        let pts = c.enumerate();
        let mut n = 0;
        while n < 100 {
            let x = point(rng, &f);
            let mut ds: Vec<f64> = pts.iter().map(|p| distance(&f, &x, p)).collect();
            ds.sort_by(|a, b| b.total_cmp(a));
            if ds[0] - ds[1] <= 1e-3 * (1.0 + ds[0]) {
                continue;
            }
            n += 1;
            let sub = subdifferential(&f, &c, &x).unwrap();
            assert_eq!(sub.len(), 1);
            for i in 0..2 {
                let h = 1e-6 * x[i].abs().max(1.0);
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[i] += h;
                xm[i] -= h;
                let fd = (farthest_value(&f, &c, &xp) - farthest_value(&f, &c, &xm)) / (2.0 * h);
                grad_err = grad_err.max((fd - sub[0][i]).abs() / sub[0][i].abs().max(1.0));
            }
            let d = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            dir_err = dir_err.max(one_sided_error(&f, &c, &x, &d));
        }
        singletons += n;
    }
    // Kinks: diagonal points of the segment family, where the endpoints tie.
    for kind in [Kind::Energy, Kind::NegEntropy, Kind::NegLog] {
        let f = LegendreFunction::new(kind, 2).unwrap();
        let c = CompactSet::make_segment(&f, 4.0, 1025).unwrap();
        for _ in 0..20 {
            let s = rng.gen_range(0.5..5.0);
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            dir_err = dir_err.max(one_sided_error(&f, &c, &[s, s], &[theta.cos(), theta.sin()]));
        }
    }
    outcome(
        grad_err <= 1e-4 && dir_err <= 1e-4,
        format!("{singletons} singleton points: gradient error {grad_err:.1e}; directional error {dir_err:.1e}"),
    )
}

fn one_sided_error(f: &LegendreFunction, c: &CompactSet, x: &[f64], d: &[f64]) -> f64 {
    let t = 1e-7;
    let xt: Vec<f64> = x.iter().zip(d).map(|(a, b)| a + t * b).collect();
    let q = (farthest_value(f, c, &xt) - farthest_value(f, c, x)) / t;
    let dd = directional_derivative(f, c, x, d).unwrap();
    (q - dd).abs() / dd.abs().max(1.0)
}

fn monotonicity(rng: &mut ChaCha8Rng) -> Outcome {
    let mut low = f64::INFINITY;
    let mut pairs = 0;
    for kind in KINDS {
        let f = generator(rng, kind, 2);
        let mut sets = vec![CompactSet::make_segment(&f, 4.0, 1025).unwrap()];
        sets.extend((0..5).map(|_| {
            let n = rng.gen_range(2..=8);
            finite_set(rng, &f, n)
        }));
        for c in &sets {
            for _ in 0..500 {
                let (x, y) = (point(rng, &f), point(rng, &f));
                low = low.min(monotonicity_witness(&f, c, &x, &y).unwrap());
                pairs += 1;
            }
        }
    }
    outcome(low >= -1e-9, format!("{pairs} pairs, min witness {low:.2e}"))
}

fn hull_blindness() -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    for kind in [Kind::Energy, Kind::NegEntropy] {
        let f = LegendreFunction::new(kind, 2).unwrap();
        for a in [4.0, 32.0] {
            let pts = CompactSet::make_segment(&f, a, 1025).unwrap().enumerate();
            let region = Region::for_segment(a);
            for i in 0..100 {
                for j in 0..100 {
                    let x = [region.x(i, 100), region.y(j, 100)];
                    if !f.in_domain(&x) {
                        continue;
                    }
                    let ds: Vec<f64> = pts.iter().map(|p| distance(&f, &x, p)).collect();
                    let ends = ds[0].max(ds[ds.len() - 1]);
                    let inner = ds[1..ds.len() - 1].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                    worst = worst.max(inner - ends);
                }
            }
        }
    }
    let f = LegendreFunction::neg_log(2).unwrap();
    let a = 32.0;
    let c = CompactSet::make_segment(&f, a, 1025).unwrap();
    let pts = c.enumerate();
    let region = Region::for_segment(a);
    let mut exceed = 0;
    for i in 0..100 {
        for j in 0..100 {
            let x = [region.x(i, 100), region.y(j, 100)];
            if !f.in_interior(&x) {
                continue;
            }
            let ds: Vec<f64> = pts.iter().map(|p| distance(&f, &x, p)).collect();
            let ends = ds[0].max(ds[ds.len() - 1]);
            if ds[1..ds.len() - 1].iter().any(|&d| d > ends) {
                exceed += 1;
            }
        }
    }
    let g = closedform::g_of(a).unwrap();
    let at_center = farthest(&f, &c, &[g, g]).unwrap();
    let mid = &endpoints(a)[1];
    let mid_farthest = at_center.argmax.iter().any(|p| p == mid);
    outcome(
        worst <= 1e-10 && exceed > 0 && mid_farthest,
        format!(
            "energy/KL max interior excess {worst:.1e}; IS a=32: {exceed} grid points with an interior sample beyond \
             both endpoints, c_1/2 farthest at the center: {mid_farthest}"
        ),
    )
}

fn klee(rng: &mut ChaCha8Rng) -> Outcome {
    let mut min_q = usize::MAX;
    let mut certified = 0;
    let mut invalid = 0;
    let mut record = |cert: bregball::Result<bregball::CenterCertificate>| match cert {
        Ok(c) if c.valid => {
            certified += 1;
            min_q = min_q.min(c.farthest.len());
        }
        _ => invalid += 1,
    };
    let opts = SolverOptions::default();
    for generator in Generator::ALL {
        for a in repro::A_VALUES {
            let cfg = SegmentFamily::new(generator, a).unwrap();
            let (f, c) = (cfg.legendre(), cfg.segment(1025).unwrap());
            record(solve_fixed_point(&f, &c, &opts));
            record(solve_subgradient(&f, &c, &opts));
        }
    }
    for kind in KINDS {
        for _ in 0..10 {
            let dim = rng.gen_range(2..=3);
            let f = generator(rng, kind, dim);
            let n = rng.gen_range(2..=8);
            let c = finite_set(rng, &f, n);
            record(solve_fixed_point(&f, &c, &opts));
            record(solve_subgradient(&f, &c, &opts));
        }
    }
    outcome(
        invalid == 0 && min_q >= 2,
        format!("{certified} certified centers, {invalid} uncertified, min |Q_C(z)| = {min_q}"),
    )
}

fn key_inequality(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = f64::NEG_INFINITY;
    let mut outside = 0;
    for kind in KINDS {
        for _ in 0..50 {
            let dim = rng.gen_range(2..=3);
            let f = generator(rng, kind, dim);
            let n = rng.gen_range(2..=7);
            let c = finite_set(rng, &f, n);
            let x = point(rng, &f);
            let proj = dual_hull_projection(&f, &c, &x).unwrap();
            outside += usize::from(!proj.inside);
            for p in c.enumerate() {
                let slack = distance(&f, &x, &proj.point) + distance(&f, &proj.point, &p) - distance(&f, &x, &p);
                worst = worst.max(slack);
            }
        }
    }
    outcome(worst <= 1e-8, format!("200 instances ({outside} outside the dual hull), max violation {worst:.1e}"))
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("bregball-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bin = env!("CARGO_BIN_EXE_bregball");
    let mut files = Vec::new();
    for run in 0..2 {
        for (ext, extra) in [("csv", None), ("ppm", Some("--ppm"))] {
            let path = dir.join(format!("run{run}.{ext}"));
            let mut cmd = Command::new(bin);
            cmd.args(["colormap", "--gen", "neglog", "--segment", "32", "--res", "64", "--out"]).arg(&path);
            cmd.args(extra);
            assert!(cmd.status().unwrap().success());
            files.push(std::fs::read(&path).unwrap());
        }
    }
    let identical = files[0] == files[2] && files[1] == files[3];
    let repro = Command::new(bin).arg("repro").output().unwrap();
    let _ = std::fs::remove_dir_all(&dir);
    outcome(
        identical && repro.status.success(),
        format!("colormap byte-identical: {identical}; repro exit {:?}", repro.status.code()),
    )
}

fn main() -> ExitCode {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let criteria: Vec<(&str, Criterion)> = vec![
        ("euclidean center", Box::new(|_| euclidean_centers())),
        ("kl center", Box::new(|_| kl_centers())),
        ("itakura-saito dichotomy", Box::new(|_| is_dichotomy())),
        ("mu reconstruction", Box::new(|_| mu_reconstruction())),
        ("identity suites", Box::new(identity_suites)),
        ("subdifferential / directional derivative", Box::new(first_order)),
        ("monotonicity", Box::new(monotonicity)),
        ("hull blindness / itakura-saito counterexample", Box::new(|_| hull_blindness())),
        ("klee multivaluedness", Box::new(klee)),
        ("key inequality", Box::new(key_inequality)),
        ("determinism", Box::new(|_| determinism())),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.into_iter().enumerate() {
        let t = Instant::now();
        let o = check(&mut rng);
        let status = if o.passed { "PASS" } else { "FAIL" };
        failures += usize::from(!o.passed);
        println!("criterion {:>2} {status} {name} ({:.1}s): {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
