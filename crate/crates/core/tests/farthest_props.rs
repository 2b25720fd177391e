mod common;

use bregball::closedform::{endpoints, Generator, SegmentFamily};
use bregball::farthest::{directional_derivative, farthest_value, monotonicity_witness, subdifferential};
use bregball::{distance, farthest, CompactSet, Kind, LegendreFunction};
use common::{finite_set, generator, point, KINDS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn segment_value(f: &LegendreFunction, a: f64, samples: usize, x: &[f64]) -> f64 {
    farthest(f, &CompactSet::make_segment(f, a, samples).unwrap(), x).unwrap().value
}

#[test]
fn refining_the_segment_only_grows_the_value() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for generator in Generator::ALL {
        let f = generator.legendre();
        for a in [4.0, 8.0, 16.0, 32.0] {
            for _ in 0..5 {
                let x = [rng.gen_range(0.2..a), rng.gen_range(0.2..a)];
                let coarse = segment_value(&f, a, 2049, &x);
                let fine = segment_value(&f, a, 4097, &x);
                assert!(fine >= coarse);
                assert!(fine - coarse <= 1e-6, "{generator:?} a={a} x={x:?}");
                assert!(segment_value(&f, a, 1025, &x) <= coarse);
            }
        }
    }
}

#[test]
fn farthest_distance_is_convex() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for kind in KINDS {
        let f = generator(&mut rng, kind, 2);
        let c = finite_set(&mut rng, &f, 6);
        for _ in 0..300 {
            let (x, y) = (point(&mut rng, &f), point(&mut rng, &f));
            let m: Vec<f64> = x.iter().zip(&y).map(|(a, b)| 0.5 * (a + b)).collect();
            let avg = 0.5 * (farthest_value(&f, &c, &x) + farthest_value(&f, &c, &y));
            assert!(farthest_value(&f, &c, &m) <= avg + 1e-9);
        }
    }
}

#[test]
fn subgradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for kind in KINDS {
        let f = generator(&mut rng, kind, 2);
        let c = finite_set(&mut rng, &f, 5);
        let mut checked = 0;
        while checked < 50 {
            let x = point(&mut rng, &f);
            let q = farthest(&f, &c, &x).unwrap();
            let mut ds: Vec<f64> = c.enumerate().iter().map(|p| distance(&f, &x, p)).collect();
            ds.sort_by(|a, b| b.total_cmp(a));
            if q.argmax.len() != 1 || ds[0] - ds[1] < 1e-3 * (1.0 + ds[0]) {
                continue;
            }
            checked += 1;
            let sub = subdifferential(&f, &c, &x).unwrap();
            assert_eq!(sub.len(), 1);
            for i in 0..2 {
                let h = 1e-6 * x[i].abs().max(1.0);
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[i] += h;
                xm[i] -= h;
                let fd = (farthest_value(&f, &c, &xp) - farthest_value(&f, &c, &xm)) / (2.0 * h);
                assert!((fd - sub[0][i]).abs() <= 1e-5 * sub[0][i].abs().max(1.0));
            }
        }
    }
}

#[test]
fn directional_derivative_matches_one_sided_quotients() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for kind in [Kind::Energy, Kind::NegEntropy, Kind::NegLog] {
        let f = LegendreFunction::new(kind, 2).unwrap();
        let c = CompactSet::make_segment(&f, 4.0, 1025).unwrap();
        for _ in 0..50 {
            // Diagonal points, where several farthest points compete.
            let s = rng.gen_range(0.5..6.0);
            let x = if rng.gen_bool(0.5) { vec![s, s] } else { point(&mut rng, &f) };
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let h = [theta.cos(), theta.sin()];
            let t = 1e-6;
            let xt: Vec<f64> = x.iter().zip(&h).map(|(a, b)| a + t * b).collect();
            let quotient = (farthest_value(&f, &c, &xt) - farthest_value(&f, &c, &x)) / t;
            let dd = directional_derivative(&f, &c, &x, &h).unwrap();
            assert!((quotient - dd).abs() <= 1e-4, "{kind:?} x={x:?} h={h:?}: {quotient} vs {dd}");
        }
    }
}

#[test]
fn convex_second_argument_is_blind_to_the_hull() {
    for generator in [Generator::Euclidean, Generator::Kl] {
        let f = generator.legendre();
        for a in [4.0, 32.0] {
            let c = CompactSet::make_segment(&f, a, 257).unwrap();
            let ends = CompactSet::finite(vec![endpoints(a)[0].clone(), endpoints(a)[2].clone()]).unwrap();
            for i in 0..=20 {
                for j in 0..=20 {
                    let x = [a * i as f64 / 20.0 + 0.01, a * j as f64 / 20.0 + 0.01];
                    let full = farthest(&f, &c, &x).unwrap().value;
                    let two = farthest(&f, &ends, &x).unwrap().value;
                    assert!((full - two).abs() <= 1e-10 * (1.0 + two));
                }
            }
        }
    }
    // Itakura-Saito: above the threshold the midpoint wins somewhere.
    let cfg = SegmentFamily::new(Generator::Is, 32.0).unwrap();
    let f = cfg.legendre();
    let c = cfg.segment(257).unwrap();
    let r = farthest(&f, &c, &[1.0, 1.0]).unwrap();
    let d_ends = distance(&f, &[1.0, 1.0], &endpoints(32.0)[0]);
    assert!(r.value > d_ends);
    assert!(r.argmax.contains(&endpoints(32.0)[1]));
}

#[test]
fn farthest_distance_is_coercive() {
    for generator in Generator::ALL {
        let f = generator.legendre();
        let c = SegmentFamily::new(generator, 4.0).unwrap().segment(257).unwrap();
        for dir in [[1.0, 0.0], [0.0, 1.0], [0.6, 0.8]] {
            let mut prev = f64::NEG_INFINITY;
            for e in 1..=8 {
                let t = 2f64.powi(e) * 10.0;
                let v = farthest_value(&f, &c, &[1.0 + t * dir[0], 1.0 + t * dir[1]]);
                assert!(v > prev);
                prev = v;
            }
            assert!(prev > 100.0);
        }
    }
}

#[test]
fn negative_gradient_of_farthest_map_is_monotone() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for kind in KINDS {
        let f = generator(&mut rng, kind, 2);
        let sets = [CompactSet::make_segment(&f, 4.0, 513).unwrap(), finite_set(&mut rng, &f, 7)];
        for c in &sets {
            for _ in 0..500 {
                let (x, y) = (point(&mut rng, &f), point(&mut rng, &f));
                assert!(monotonicity_witness(&f, c, &x, &y).unwrap() >= -1e-9);
            }
        }
    }
}
