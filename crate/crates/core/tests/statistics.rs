//! Fixed-seed statistical checks with 3σ tolerances.

use hdapprox::field::{empirical_sup_norm, plain_mc_approximate, unbounded_functional_values, BasisSpec};
use hdapprox::gauss::{
    deviation_tail, expected_norm_estimate, gauss_norm_bounds, lewis_optimal_measure, projection_norm_ratio,
    GaussVecSpec, LewisOptions,
};
use hdapprox::monomc::haar::{enumerate_index_set, haar_eval, haar_transform_bruteforce, DEFAULT_INDEX_CAP};
use hdapprox::monomc::instances::random_monotone_step;
use hdapprox::monomc::Evaluable;
use hdapprox::numerics::Welford;
use hdapprox::rkhs::{korobov_lambda, regular_grid};
use hdapprox::seqspace::{fundamental_mc_apply, homogeneous_coordinate_method};
use hdapprox::RandomSource;
use nalgebra::DMatrix;
use std::f64::consts::PI;

#[test]
fn norm_bounds_on_grid() {
    let mut src = RandomSource::new(11, 0);
    for p in [1.0, 2.0, 4.0, f64::INFINITY] {
        for m in [1, 2, 8, 64] {
            let spec = GaussVecSpec::new(m, p).unwrap();
            let e = expected_norm_estimate(spec, 20_000, &mut src).unwrap();
            let (lo, hi) = gauss_norm_bounds(spec);
            assert!(lo <= e.mean + 3.0 * e.stderr, "p={p} m={m}: {} < {lo}", e.mean);
            assert!(e.mean - 3.0 * e.stderr <= hi, "p={p} m={m}: {} > {hi}", e.mean);
        }
    }
}

#[test]
fn deviation_tails_below_bound() {
    let mut src = RandomSource::new(12, 0);
    let j = DMatrix::from_fn(4, 6, |r, c| ((r + 2 * c) as f64).sin());
    for p in [1.0, 2.0, f64::INFINITY] {
        for lambda in [1.5, 2.0, 3.0] {
            let reps = 20_000;
            let t = deviation_tail(&j, p, lambda, reps, &mut src).unwrap();
            let se = (t.bound * (1.0 - t.bound) / reps as f64).sqrt();
            assert!(t.empirical_tail <= t.bound + 3.0 * se, "p={p} lambda={lambda}: {}", t.empirical_tail);
        }
    }
}

#[test]
fn lewis_solution_is_multiple_of_orthogonal() {
    for (p, m) in [(1.0, 2), (1.0, 3), (2.0, 3)] {
        let res = lewis_optimal_measure(p, m, 1e-9, LewisOptions::default(), &mut RandomSource::new(13, m as u64))
            .unwrap();
        let sv = res.j.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        assert!(hi <= 1.05 * lo, "p={p} m={m}: singular values {sv}");
    }
}

#[test]
fn projections_do_not_increase_expected_norm() {
    let mut src = RandomSource::new(14, 0);
    let j = DMatrix::from_fn(5, 4, |r, c| 1.0 / (1.0 + r as f64 + c as f64));
    for rank in 1..4 {
        let g = DMatrix::from_fn(4, rank, |_, _| src.normal());
        let q = g.qr().q();
        let pm = &q * q.transpose();
        for p in [1.0, 2.0, 3.0, f64::INFINITY] {
            let est = projection_norm_ratio(&j, &pm, p, 5000, &mut src).unwrap();
            let gap = est.projected.mean - est.full.mean;
            assert!(gap <= 3.0 * est.stderr * est.full.mean, "rank {rank} p={p}: ratio {}", est.ratio);
        }
    }
}

#[test]
fn l1_square_coordinate_projection_is_sharp() {
    let res = lewis_optimal_measure(1.0, 2, 1e-9, LewisOptions::default(), &mut RandomSource::new(15, 0)).unwrap();
    let pm = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0]);
    let est = projection_norm_ratio(&res.j_sym, &pm, 1.0, 50_000, &mut RandomSource::new(15, 1)).unwrap();
    assert!((est.ratio - 0.5).abs() <= 3.0 * est.stderr + 0.01, "{}", est.ratio);
}

#[test]
fn fundamental_method_is_unbiased() {
    let mut src = RandomSource::new(16, 0);
    let x = [0.6, -0.8, 0.0, 0.3];
    let mut stats = vec![Welford::default(); x.len()];
    for _ in 0..50_000 {
        let (y, _) = fundamental_mc_apply(&x, 3, &mut src).unwrap();
        stats.iter_mut().zip(&y).for_each(|(s, &v)| s.push(v));
    }
    for (s, &xi) in stats.iter().zip(&x) {
        assert!((s.mean() - xi).abs() <= 3.0 * s.stderr(), "{} vs {xi}", s.mean());
    }
}

#[test]
fn homogeneous_method_cardinality_and_error() {
    let mut src = RandomSource::new(17, 0);
    let x = [0.25; 4];
    let (mut card, mut err) = (Welford::default(), Welford::default());
    for _ in 0..100_000 {
        let out = homogeneous_coordinate_method(&x, 2.0, &mut src).unwrap();
        card.push(out.kept as f64);
        err.push(out.output.iter().zip(&x).map(|(a, b)| (a - b).abs()).sum());
    }
    assert!((card.mean() - 2.0).abs() <= 3.0 * card.stderr());
    assert!((err.mean() - 0.5).abs() <= 3.0 * err.stderr());
}

#[test]
fn plain_mc_coefficients_unbiased() {
    let mut src = RandomSource::new(18, 0);
    let a = [1.0, -0.5, 0.25, 0.0, 2.0];
    let mut stats = vec![Welford::default(); a.len()];
    for _ in 0..40_000 {
        let b = plain_mc_approximate(&a, 3, &mut src).unwrap();
        stats.iter_mut().zip(&b.coeffs).for_each(|(s, &v)| s.push(v));
    }
    for (s, &ai) in stats.iter().zip(&a) {
        assert!((s.mean() - ai).abs() <= 3.0 * s.stderr(), "{} vs {ai}", s.mean());
    }
}

#[test]
fn sup_norm_grows_with_truncation() {
    let lambda = korobov_lambda(2.0, 0.5, 256).unwrap();
    let grid = regular_grid(1, 128, 0.0, 1.0, true);
    let mut prev: Option<(f64, f64)> = None;
    for m in [3, 9, 33, 129] {
        let basis = BasisSpec::leading(&lambda, 1, m).unwrap();
        let e = empirical_sup_norm(&basis, &grid, 4000, &mut RandomSource::new(19, m as u64)).unwrap();
        if let Some((mean, se)) = prev {
            assert!(e.mean + 3.0 * (e.stderr.powi(2) + se * se).sqrt() >= mean, "m={m}: {} < {mean}", e.mean);
        }
        prev = Some((e.mean, e.stderr));
    }
}

#[test]
fn unbounded_functional_grows() {
    let mut last = 0.0;
    for k in [4, 16, 64] {
        let e = unbounded_functional_values(k, 5000, &mut RandomSource::new(20, k as u64)).unwrap();
        let floor = (2.0 * k as f64 / PI).sqrt();
        assert!(e.mean >= floor * (1.0 - 3.0 * e.stderr / e.mean), "k={k}: {}", e.mean);
        assert!(e.mean > last);
        last = e.mean;
    }
}

#[test]
fn haar_coefficient_estimates_unbiased_with_small_variance() {
    let mut src = RandomSource::new(21, 0);
    let (d, r) = (2, 2);
    let f = random_monotone_step(d, 5, Some(r), &mut src);
    let exact = haar_transform_bruteforce(&f, r, d, 2).unwrap();
    let indices = enumerate_index_set(d, d, r, DEFAULT_INDEX_CAP).unwrap();
    let n = 100_000;
    let mut stats = vec![Welford::default(); indices.len()];
    for _ in 0..n {
        let x = [src.uniform(), src.uniform()];
        let fx = f.eval(&x);
        for (s, a) in stats.iter_mut().zip(&indices) {
            s.push(haar_eval(a, &x) * fx);
        }
    }
    for (s, a) in stats.iter().zip(&indices) {
        assert!((s.mean() - exact.get(a)).abs() <= 3.0 * s.stderr(), "{:?}", a.0);
        let lam = a.lambda_plus() as f64;
        assert!(s.variance() <= 1.0 + 3.0 * (2f64).powf(lam / 2.0) / (n as f64).sqrt(), "{:?}: {}", a.0, s.variance());
    }
}
