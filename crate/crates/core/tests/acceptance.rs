//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use hdapprox::bounds::{self, constants_table, CurseProblem};
use hdapprox::experiments::run_experiment;
use hdapprox::field::{korobov_experiment, plain_mc_approximate, KorobovConfig};
use hdapprox::gauss::{
    expected_norm_estimate, gauss_norm_bounds, lewis_optimal_measure, projection_norm_ratio, GaussVecSpec,
    LewisOptions,
};
use hdapprox::monomc::boolean::{boolean_fourier_transform, boolean_tail_mass};
use hdapprox::monomc::haar::{
    enumerate_index_set, haar_eval, haar_mc_approximate, haar_mc_bound, haar_transform_bruteforce,
    index_set_size, wavelet_tail_bound, DEFAULT_INDEX_CAP,
};
use hdapprox::monomc::instances::{boolean_diagonal_split, random_monotone_boolean, random_monotone_step};
use hdapprox::monomc::{l1_distance, Evaluable};
use hdapprox::numerics::{loglog_slope, Welford};
use hdapprox::parse::ConfigMap;
use hdapprox::rkhs::{
    curse_lower_bound, korobov_lambda, periodic_remainder_bound, periodic_singular_spectrum,
    worst_case_lower_bound_tail,
};
use hdapprox::seqspace::{fundamental_mc_apply, mc_error_curve, SeqProblem};
use hdapprox::smooth::{multi_indices, taylor_approximate, taylor_complexity, taylor_error_bound, DerivativeOracle};
use hdapprox::RandomSource;
use nalgebra::DMatrix;
use std::f64::consts::PI;
use std::time::Instant;

type Outcome = Result<String, String>;

const SEED: u64 = 20240611;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok { Ok(msg) } else { Err(msg) }
}

fn lib<T>(r: hdapprox::Result<T>) -> Result<T, String> {
    r.map_err(|e| format!("library error: {e}"))
}

fn c1() -> Outcome {
    let mut src = RandomSource::new(SEED, 1);
    let x = [1.0, 0.0, 0.0];
    let mut w = Welford::default();
    for _ in 0..100_000 {
        let (y, _) = lib(fundamental_mc_apply(&x, 2, &mut src))?;
        w.push(y.iter().map(|v| v * v).sum());
    }
    let rel = (w.mean() - 3.0).abs() / 3.0;
    ensure(rel <= 0.02, format!("mean {:.5} vs 3, rel diff {:.4}", w.mean(), rel))
}

fn c2() -> Outcome {
    let mut src = RandomSource::new(SEED, 2);
    let ns = [4usize, 16, 64];
    let rep = lib(mc_error_curve(SeqProblem { big_m: 64, p: 2.0, q: f64::INFINITY }, &ns, 2000, &mut src))?;
    let means = rep.f64_column("replicate_mean");
    let nsf: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
    let slope = loglog_slope(&nsf, &means);
    ensure(
        rep.all_pass() && (slope + 0.5).abs() <= 0.075,
        format!("rows pass {}, means {:?}, slope {:.4}", rep.all_pass(), means, slope),
    )
}

fn c3() -> Outcome {
    let mut src = RandomSource::new(SEED, 3);
    let est = lib(expected_norm_estimate(lib(GaussVecSpec::new(100, 1.0))?, 100_000, &mut src))?;
    let target = (2.0 / PI).sqrt() * 100.0;
    let rel = (est.mean - target).abs() / target;
    let consts = [
        (hdapprox::gauss::k_const(), 0.805228, 5e-7),
        (hdapprox::gauss::c_inf_lower(), 0.277159, 5e-7),
        (hdapprox::gauss::c_inf_upper(), 2.18884, 5e-6),
        (hdapprox::gauss::alpha_const(), 0.90045, 5e-6),
    ];
    let consts_ok = consts.iter().all(|(v, want, tol)| (v - want).abs() <= *tol);
    let mut violations = Vec::new();
    for &p in &[1.0, 1.5, 2.0, 3.0, 4.0, 8.0, f64::INFINITY] {
        for &m in &[1usize, 2, 5, 10, 50, 100] {
            let spec = lib(GaussVecSpec::new(m, p))?;
            let e = lib(expected_norm_estimate(spec, 20_000, &mut src))?;
            let (lo, hi) = gauss_norm_bounds(spec);
            if e.mean < lo - 3.0 * e.stderr || e.mean > hi + 3.0 * e.stderr {
                violations.push(format!("p={p} m={m}: {:.4} not in [{lo:.4}, {hi:.4}]", e.mean));
            }
        }
    }
    ensure(
        rel <= 0.01 && consts_ok && violations.is_empty(),
        format!("E|X|_1 {:.4} vs {target:.4} (rel {rel:.5}), constants ok {consts_ok}, grid violations {violations:?}", est.mean),
    )
}

fn c4() -> Outcome {
    let m = 3;
    let root = RandomSource::new(SEED, 4);
    let res = lib(lewis_optimal_measure(1.0, m, 1e-9, LewisOptions::default(), &mut root.substream(0)))?;
    let target = (PI / 2.0).sqrt() / m as f64;
    let worst = (0..m)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| (res.j_sym[(i, j)] - if i == j { target } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    let mut src = root.substream(1);
    let mut low = Vec::new();
    for rank in 1..m {
        let coord = DMatrix::from_fn(m, m, |a, b| if a == b && a < rank { 1.0 } else { 0.0 });
        let g = DMatrix::from_fn(m, rank, |_, _| src.normal());
        let q = g.qr().q();
        for pm in [coord, &q * q.transpose()] {
            let est = lib(projection_norm_ratio(&res.j, &pm, 1.0, 20_000, &mut src))?;
            let bound = rank as f64 / m as f64;
            if est.ratio < bound - 3.0 * est.stderr {
                low.push(format!("rank {rank}: {:.4} < {bound:.4}", est.ratio));
            }
        }
    }
    ensure(
        worst <= 0.05 * target && low.is_empty(),
        format!("max entry deviation {:.5} (limit {:.5}), ratio failures {low:?}", worst, 0.05 * target),
    )
}

fn c5() -> Outcome {
    let lambda = lib(korobov_lambda(2.0, 0.5, 64))?;
    let mut worst_gap: f64 = 0.0;
    let mut fails = Vec::new();
    for d in 1..=3 {
        let per_axis = [128, 48, 16][d - 1];
        let sp = lib(periodic_singular_spectrum(&lambda, d, 20))?;
        let mass = sp.enumerated_mass + sp.omitted_mass;
        if (mass - 1.0).abs() > 1e-6 {
            fails.push(format!("d={d}: spectrum mass {mass}"));
        }
        for n in 0..=20 {
            let curse = lib(curse_lower_bound(&lambda, d, n))?;
            let tail = lib(worst_case_lower_bound_tail(&lambda, d, n))?;
            let rem = lib(periodic_remainder_bound(&lambda, d, n, per_axis))?;
            worst_gap = worst_gap.max(curse - tail).max(tail - rem);
            if curse > tail + 1e-6 || tail > rem + 1e-6 {
                fails.push(format!("d={d} n={n}: {curse:.6} <= {tail:.6} <= {rem:.6} violated"));
            }
        }
    }
    ensure(fails.is_empty(), format!("largest violation {worst_gap:.2e}, failures {fails:?}"))
}

fn c6() -> Outcome {
    let mut src = RandomSource::new(SEED, 6);
    let rep = lib(korobov_experiment(2.0, 2, &[4, 16, 64], 400, &KorobovConfig::for_dim(2), &mut src))?;
    let a: Vec<f64> = (0..16).map(|j| 1.0 / (1.0 + j as f64)).collect();
    let reps = 20_000;
    let mut stats = vec![Welford::default(); a.len()];
    for _ in 0..reps {
        let b = lib(plain_mc_approximate(&a, 4, &mut src))?;
        stats.iter_mut().zip(&b.coeffs).for_each(|(s, &v)| s.push(v));
    }
    let biased: Vec<usize> =
        (0..a.len()).filter(|&j| (stats[j].mean() - a[j]).abs() > 3.0 * stats[j].stderr()).collect();
    ensure(
        rep.all_pass() && biased.is_empty(),
        format!("experiment rows pass {}, biased components {biased:?}", rep.all_pass()),
    )
}

fn c7() -> Outcome {
    let rep = lib(run_experiment("mono-grid", SEED, &ConfigMap::default()))?;
    ensure(rep.all_pass(), format!("{} rows, failing {:?}", rep.rows.len(), rep.failing_rows()))
}

fn c8() -> Outcome {
    let mut src = RandomSource::new(SEED, 8);
    let d = 8;
    let mut worst_ratio: f64 = 0.0;
    for _ in 0..200 {
        let f = lib(random_monotone_boolean(d, &mut src))?;
        for k in 0..=d {
            let t = lib(boolean_tail_mass(&f, k))?;
            worst_ratio = worst_ratio.max(t / ((d as f64).sqrt() / (k as f64 + 1.0)));
        }
    }
    let maj = lib(boolean_fourier_transform(&lib(boolean_diagonal_split(3))?))?;
    let want = [0.0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0, -0.5];
    let maj_ok = maj == want;
    ensure(
        worst_ratio <= 1.0 && maj_ok,
        format!("max tail/bound {worst_ratio:.4}, majority transform {maj:?}"),
    )
}

fn c9() -> Outcome {
    let mut src = RandomSource::new(SEED, 9);
    let mut msgs = Vec::new();
    let mut ok = true;

    let f = random_monotone_step(2, 6, Some(2), &mut src);
    let t = lib(haar_transform_bruteforce(&f, 2, 2, 4))?;
    let parseval = (t.energy() - t.projection_norm_sq()).abs();
    ok &= parseval <= 1e-12;
    msgs.push(format!("Parseval gap {parseval:.1e}"));

    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let f = random_monotone_step(3, 8, Some(2), &mut src);
        let t = lib(haar_transform_bruteforce(&f, 2, 3, 2))?;
        for k in 0..=3 {
            worst = worst.max(t.tail_mass(k) / wavelet_tail_bound(3, k, 2));
        }
    }
    ok &= worst <= 1.0;
    msgs.push(format!("max tail/bound {worst:.4}"));

    let exact = lib(haar_transform_bruteforce(&f, 2, 2, 4))?;
    let indices = lib(enumerate_index_set(2, 2, 2, DEFAULT_INDEX_CAP))?;
    let n = 100_000;
    let mut stats = vec![Welford::default(); indices.len()];
    for _ in 0..n {
        let x = [src.uniform(), src.uniform()];
        let fx = f.eval(&x);
        for (s, a) in stats.iter_mut().zip(&indices) {
            s.push(haar_eval(a, &x) * fx);
        }
    }
    let mut bad = Vec::new();
    for (s, a) in stats.iter().zip(&indices) {
        let unbiased = (s.mean() - exact.get(a)).abs() <= 3.0 * s.stderr();
        // n·Var(g̃(α)) ≤ Eψ² = 1; the sample variance fluctuates by at most √(Eψ⁴/n) = 2^{Σλ/2}/√n.
        let lam: u32 = (0..2).filter_map(|j| a.level(j)).map(|(l, _)| l).sum();
        let var_se = (2f64).powf(lam as f64 / 2.0) / (n as f64).sqrt();
        if !unbiased || s.variance() > 1.0 + 3.0 * var_se {
            bad.push(format!("{:?}: mean {:.5} exact {:.5} var {:.4}", a.0, s.mean(), exact.get(a), s.variance()));
        }
    }
    ok &= bad.is_empty();
    msgs.push(format!("{} coefficients, estimator failures {bad:?}", indices.len()));

    let g = lib(haar_mc_approximate(&f, 2, 64, 2, 2, &mut src))?;
    let mut gap: f64 = 0.0;
    for _ in 0..2000 {
        let x = [src.uniform(), src.uniform()];
        gap = gap.max((g.eval_fast(&x) - Evaluable::eval(&g, &x)).abs());
    }
    ok &= gap <= 1e-9;
    msgs.push(format!("fast/naive gap {gap:.1e}"));
    ensure(ok, msgs.join("; "))
}

fn c10() -> Outcome {
    let mut src = RandomSource::new(SEED, 10);
    let (d, r, k) = (2usize, 3u32, 2usize);
    let n = 4 * index_set_size(d, k, r) as usize;
    let mut w = Welford::default();
    for _ in 0..50 {
        let f = random_monotone_step(d, 6, None, &mut src);
        let g = lib(haar_mc_approximate(&f, d, n, k, r, &mut src))?;
        w.push(l1_distance(&f, &g, d, 128));
    }
    let bound = haar_mc_bound(d, k, r, n);
    ensure(
        w.mean() <= bound + 3.0 * w.stderr(),
        format!("n {n}, mean L1 error {:.4} ± {:.4}, bound {bound:.4}", w.mean(), w.stderr()),
    )
}

fn c11() -> Outcome {
    let rep = lib(run_experiment("bounds-table", SEED, &ConfigMap::default()))?;
    let failing: Vec<String> =
        constants_table().into_iter().filter(|c| !c.pass()).map(|c| format!("{} {}", c.name, c.params)).collect();
    ensure(
        rep.all_pass() && failing.is_empty(),
        format!("{} constants, failing {failing:?}", rep.rows.len()),
    )
}

fn c12() -> Outcome {
    let mut margin = f64::INFINITY;
    for d in 10..=200u64 {
        for &(a, b) in &[(-0.33794, 0.46332), (-1.0, 1.0), (-0.5, 0.2), (0.0, 2.0), (-2.0, 0.0)] {
            let be = lib(bounds::berry_esseen_binom(d, a, b))?;
            margin = margin.min(be.exact_sum - be.lower_bound);
        }
    }
    let mut binom_fail = Vec::new();
    for d in 1..=60u64 {
        for k in 1..=d {
            if !lib(bounds::binom_inequalities(d, k))?.all_hold() {
                binom_fail.push((d, k));
            }
        }
    }
    ensure(
        margin >= 0.0 && binom_fail.is_empty(),
        format!("Berry-Esseen min margin {margin:.5}, binomial failures {binom_fail:?}"),
    )
}

/// `Σ c_i x^{e_i}` with exact partial derivatives.
struct Poly {
    terms: Vec<(f64, Vec<u32>)>,
}

impl DerivativeOracle for Poly {
    fn derivative(&self, alpha: &[u32], x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, e)| {
                let mut v = *c;
                for ((&ej, &aj), &xj) in e.iter().zip(alpha).zip(x) {
                    if aj > ej {
                        return 0.0;
                    }
                    let falling: f64 = (0..aj).map(|i| (ej - i) as f64).product();
                    v *= falling * xj.powi((ej - aj) as i32);
                }
                v
            })
            .sum()
    }

    fn class_p(&self) -> f64 {
        1.0
    }
}

impl Poly {
    fn value(&self, x: &[f64]) -> f64 {
        self.derivative(&vec![0; x.len()], x)
    }
}

struct SinMean {
    d: usize,
}

impl DerivativeOracle for SinMean {
    fn derivative(&self, alpha: &[u32], x: &[f64]) -> f64 {
        let n: u32 = alpha.iter().sum();
        let s = x.iter().sum::<f64>() / self.d as f64;
        let phase = [s.sin(), s.cos(), -s.sin(), -s.cos()][(n % 4) as usize];
        phase / (self.d as f64).powi(n as i32)
    }

    fn class_p(&self) -> f64 {
        1.0
    }
}

fn c13() -> Outcome {
    let mut src = RandomSource::new(SEED, 13);
    let mut worst_poly: f64 = 0.0;
    for &(d, k) in &[(1usize, 5u32), (2, 4), (3, 3), (4, 2)] {
        let terms = multi_indices(d, k).into_iter().map(|e| (2.0 * src.uniform() - 1.0, e)).collect();
        let p = Poly { terms };
        let t = lib(taylor_approximate(&p, k, d))?;
        for _ in 0..200 {
            let x: Vec<f64> = (0..d).map(|_| src.uniform()).collect();
            worst_poly = worst_poly.max((t.eval(&x) - p.value(&x)).abs());
        }
    }
    let d = 3;
    let f = SinMean { d };
    let t = lib(taylor_approximate(&f, 4, d))?;
    let res: usize = 25;
    let mut grid_err: f64 = 0.0;
    for idx in 0..res * res * res {
        let x: Vec<f64> = (0..d).map(|j| ((idx / res.pow(j as u32)) % res) as f64 / (res - 1) as f64).collect();
        let exact = (x.iter().sum::<f64>() / d as f64).sin();
        grid_err = grid_err.max((t.eval(&x) - exact).abs());
    }
    let bound = taylor_error_bound(3, 4, 1.0);
    let lb = lib(bounds::curse_formulas(CurseProblem::SmoothLb { d: 9, p: 1.0 }))?;
    let tc = lib(taylor_complexity(1.0 / 30.0, 9, 1.0))?;
    ensure(
        worst_poly <= 1e-12 && grid_err <= 0.0633 && grid_err <= bound && lb == 4.0 && lb <= tc.n,
        format!(
            "polynomial gap {worst_poly:.1e}, sin grid error {grid_err:.5} (bound {bound:.5}), sandwich {lb} <= {}",
            tc.n
        ),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("fundamental MC second moment", c1),
        ("sequence-space MC error curve", c2),
        ("Gaussian norm expectations and bounds", c3),
        ("Lewis optimal measure for l1^3", c4),
        ("RKHS bound sandwich for Korobov r=2", c5),
        ("plain MC in Korobov r=2, d=2", c6),
        ("monotone deterministic grid", c7),
        ("Boolean tail lemma", c8),
        ("Haar suite", c9),
        ("Haar MC end to end", c10),
        ("constants reproduction", c11),
        ("Berry-Esseen and binomial inequalities", c12),
        ("Taylor approximation", c13),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match outcome {
            Ok(s) => ("PASS", s),
            Err(s) => {
                failed += 1;
                ("FAIL", s)
            }
        };
        println!("{tag} criterion {}: {name} [{secs:.2}s] {detail}", i + 1);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
