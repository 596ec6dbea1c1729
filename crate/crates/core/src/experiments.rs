//! Named experiments behind the command line runner.
//!
//! Each experiment reads its parameters from a [`ConfigMap`], rejects unknown
//! keys and returns a report whose rows each carry the bound they are checked
//! against. Every random quantity is drawn from a substream of the seed, so a
//! report is a pure function of `(name, seed, config)`.

use crate::bounds::{self, constants_table, CurseProblem};
use crate::error::{invalid, Error, Result};
use crate::field::{korobov_experiment, wiener_sheet_grid_sup, KorobovConfig};
use crate::gauss::{lewis_optimal_measure, projection_norm_ratio, LewisOptions};
use crate::monomc::boolean::{boolean_fourier_learn, boolean_learn_bound, boolean_tail_mass, BooleanTable, Sampling};
use crate::monomc::grid::{det_grid_approximate, det_grid_error_bound, fooling_lower_bound};
use crate::monomc::haar::{haar_mc_approximate, haar_mc_bound, haar_sign_bound, index_set_size, sign_refine};
use crate::monomc::instances::{
    boolean_diagonal_split, interior_grid, random_monotone_boolean, random_monotone_step, staircase_fooling_pair,
    DiagonalSplit, Staircase,
};
use crate::monomc::l1_distance;
use crate::numerics::{loglog_slope, Welford};
use crate::parse::ConfigMap;
use crate::report::{Cell, ExperimentReport};
use crate::rkhs::{dudley_bound, Domain, KernelHandle};
use crate::rng::RandomSource;
use crate::seqspace::{mc_error_curve, SeqProblem};
use crate::smooth::taylor_complexity;
use nalgebra::DMatrix;
use std::f64::consts::PI;

pub const EXPERIMENTS: [&str; 9] = [
    "seqspace-error",
    "korobov-mc",
    "wiener-dudley",
    "mono-grid",
    "boolean-learn",
    "haar-learn",
    "bounds-table",
    "lewis-optimal",
    "constants-repro",
];

/// Parameter keys accepted by each experiment.
pub fn known_keys(name: &str) -> Option<&'static [&'static str]> {
    Some(match name {
        "seqspace-error" => &["M", "q", "n", "reps"],
        "korobov-mc" => &["r", "d", "n", "reps", "beta0", "basis_size", "grid_per_axis", "probes", "sup_reps"],
        "wiener-dudley" => &["d", "cover_per_axis", "sim_per_axis", "reps"],
        "mono-grid" => &["d", "m", "res", "instances", "fool_m", "fool_alg_m"],
        "boolean-learn" => &["d", "k", "n", "trials", "functions", "tail_instances"],
        "haar-learn" => &["d", "r", "k", "n_factor", "instances", "corners", "res", "sign_n", "sign_trials"],
        "bounds-table" => &[],
        "lewis-optimal" => &["p", "m", "tol", "samples", "ratio_reps"],
        "constants-repro" => &[],
        _ => return None,
    })
}

/// Runs `name` with `seed` and the parameter overrides in `cfg`.
pub fn run_experiment(name: &str, seed: u64, cfg: &ConfigMap) -> Result<ExperimentReport> {
    let keys = known_keys(name).ok_or_else(|| {
        Error::InvalidArgument(format!("unknown experiment {name:?}; available: {}", EXPERIMENTS.join(", ")))
    })?;
    cfg.check_known(keys)?;
    match name {
        "seqspace-error" => seqspace_error(cfg, seed),
        "korobov-mc" => korobov_mc(cfg, seed),
        "wiener-dudley" => wiener_dudley(cfg, seed),
        "mono-grid" => mono_grid(cfg, seed),
        "boolean-learn" => boolean_learn(cfg, seed),
        "haar-learn" => haar_learn(cfg, seed),
        "bounds-table" => bounds_table(seed),
        "lewis-optimal" => lewis_optimal(cfg, seed),
        _ => constants_repro(seed),
    }
}

fn seqspace_error(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let big_m = cfg.usize("M", 64)?;
    let q = cfg.f64("q", f64::INFINITY)?;
    let ns = cfg.list::<usize>("n", &[4, 16, 64])?;
    let reps = cfg.usize("reps", 2000)?;
    let mut src = RandomSource::new(seed, 0);
    let curve = mc_error_curve(SeqProblem { big_m, p: 2.0, q }, &ns, reps, &mut src)?;
    let mut report = ExperimentReport::standard("seqspace-error", seed, &["M", "q", "n", "worst_probe", "quantity"]);
    for row in &curve.rows {
        let mut params = row[..4].to_vec();
        params.push("worst_probe_error".into());
        report.push_row([params, row[4..].to_vec()].concat());
    }
    if ns.len() >= 2 {
        let xs: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&xs, &curve.f64_column("replicate_mean"));
        report.push(
            vec![big_m.into(), q.into(), Cell::Int(0), "all".into(), "loglog_slope".into()],
            slope,
            0.0,
            -0.5,
            (slope + 0.5).abs() <= 0.075,
        );
    }
    Ok(report)
}

fn korobov_mc(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let r = cfg.f64("r", 2.0)?;
    let d = cfg.usize("d", 2)?;
    if d == 0 {
        return invalid("d must be at least 1");
    }
    let ns = cfg.list::<usize>("n", &[4, 16, 64])?;
    let reps = cfg.usize("reps", 400)?;
    let base = KorobovConfig::for_dim(d);
    let kc = KorobovConfig {
        beta0: cfg.f64("beta0", base.beta0)?,
        basis_size: cfg.usize("basis_size", base.basis_size)?,
        eps: base.eps,
        grid_per_axis: cfg.usize("grid_per_axis", base.grid_per_axis)?,
        probes: cfg.usize("probes", base.probes)?,
        sup_reps: cfg.usize("sup_reps", base.sup_reps)?,
    };
    korobov_experiment(r, d, &ns, reps, &kc, &mut RandomSource::new(seed, 0))
}

fn default_cover_per_axis(d: usize) -> usize {
    match d {
        1 => 257,
        2 => 17,
        _ => 5,
    }
}

fn wiener_dudley(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let ds = cfg.list::<usize>("d", &[1, 2])?;
    let reps = cfg.usize("reps", 200)?;
    let mut report =
        ExperimentReport::standard("wiener-dudley", seed, &["d", "cover_points", "sim_per_axis", "quantity"]);
    for (i, &d) in ds.iter().enumerate() {
        if d == 0 || d > 3 {
            return invalid("wiener-dudley supports 1 <= d <= 3");
        }
        let cover = cfg.usize("cover_per_axis", default_cover_per_axis(d))?;
        let sim = cfg.usize("sim_per_axis", if d == 1 { 1024 } else { 64 })?;
        if cover < 2 || sim == 0 {
            return invalid("need cover_per_axis >= 2 and sim_per_axis >= 1");
        }
        let bound = dudley_bound(&KernelHandle::wiener_sheet(d), Domain::Cube(d), cover)?;
        let mut src = RandomSource::new(seed, 0).substream(i as u64);
        let mut w = Welford::default();
        for _ in 0..reps {
            w.push(wiener_sheet_grid_sup(d, sim, &mut src));
        }
        report.push(
            vec![d.into(), cover.pow(d as u32).into(), sim.into(), "grid_sup_vs_dudley".into()],
            w.mean(),
            w.stderr(),
            bound,
            w.mean() <= bound + 3.0 * w.stderr(),
        );
    }
    Ok(report)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn mono_grid(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let d = cfg.usize("d", 3)?;
    let m = cfg.usize("m", 4)?;
    let res = cfg.usize("res", 64)?;
    let instances = cfg.usize("instances", 20)?;
    let fool_m = cfg.usize("fool_m", 6)?;
    let fool_alg_m = cfg.usize("fool_alg_m", 3)?;
    if d == 0 || d > 6 || m == 0 || res == 0 || fool_m == 0 || fool_alg_m == 0 || instances == 0 {
        return invalid("need 1 <= d <= 6 and positive m, res, instances, fool_m, fool_alg_m");
    }
    let mut report =
        ExperimentReport::standard("mono-grid", seed, &["instance", "d", "m", "n_samples", "relation"]);
    let n = m.pow(d as u32);

    let diag = DiagonalSplit { d, lo: -1.0, hi: 1.0 };
    let g = det_grid_approximate(&diag, m, d, (-1.0, 1.0))?;
    let err = l1_distance(&diag, &g, d, res);
    let bound = det_grid_error_bound(m, d, (-1.0, 1.0));
    report.push(vec!["diagonal_split".into(), d.into(), m.into(), n.into(), "le".into()], err, 0.0, bound, err <= bound);

    let mut src = RandomSource::new(seed, 0);
    let mut w = Welford::default();
    let mut worst: f64 = 0.0;
    let bound = det_grid_error_bound(m, d, (0.0, 1.0));
    for _ in 0..instances {
        let delta = (0..m.pow(d as u32)).map(|_| src.bernoulli(0.5)).collect();
        let f = Staircase::new(d, m, delta)?;
        let g = det_grid_approximate(&f, m, d, (0.0, 1.0))?;
        let e = l1_distance(&f, &g, d, res);
        worst = worst.max(e);
        w.push(e);
    }
    report.push(
        vec!["staircase_random_delta".into(), d.into(), m.into(), n.into(), "le".into()],
        w.mean(),
        w.stderr(),
        bound,
        worst <= bound,
    );

    for (fm, am) in [(m, m), (fool_m, fool_alg_m)] {
        let points = interior_grid(d, am);
        let (f0, f1) = staircase_fooling_pair(d, fm, &points)?;
        let half_diam = 0.5 * f0.l1_distance(&f1);
        let lb = fooling_lower_bound(points.len(), fm, d);
        let label = format!("fooling_m{fm}_alg{am}");
        report.push(
            vec![format!("{label}_half_diameter").into(), d.into(), fm.into(), points.len().into(), "ge".into()],
            half_diam,
            0.0,
            lb,
            half_diam >= lb,
        );
        // A resolution divisible by both grids makes the midpoint rule exact.
        let lcm = fm / gcd(fm, am + 1) * (am + 1);
        let fine = lcm * (res / lcm).max(1);
        let g = det_grid_approximate(&f0, am, d, (0.0, 1.0))?;
        let worst = l1_distance(&f0, &g, d, fine).max(l1_distance(&f1, &g, d, fine));
        report.push(
            vec![format!("{label}_worst_error").into(), d.into(), fm.into(), points.len().into(), "ge".into()],
            worst,
            0.0,
            half_diam,
            worst >= half_diam - 1e-12,
        );
    }
    Ok(report)
}

fn named_boolean(name: &str, d: usize, src: &mut RandomSource) -> Result<BooleanTable> {
    match name {
        "dictator" => BooleanTable::from_fn(d, |m| if m & 1 == 1 { 1 } else { -1 }),
        "majority" | "diagonal" => boolean_diagonal_split(d),
        "random" => random_monotone_boolean(d, src),
        other => invalid(format!("unknown Boolean function {other:?}")),
    }
}

fn boolean_learn(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let d = cfg.usize("d", 8)?;
    let ks = cfg.list::<usize>("k", &[1, 2])?;
    let n = cfg.usize("n", 4096)?;
    let trials = cfg.usize("trials", 100)?;
    let tail_instances = cfg.usize("tail_instances", 200)?;
    let functions = cfg.list::<String>("functions", &["dictator".into(), "majority".into(), "random".into()])?;
    if d == 0 || d > 12 || trials < 2 {
        return invalid("boolean-learn needs 1 <= d <= 12 and trials >= 2");
    }
    let mut report = ExperimentReport::standard("boolean-learn", seed, &["function", "d", "k", "n"]);
    let root = RandomSource::new(seed, 0);
    for (fi, name) in functions.iter().enumerate() {
        for (ki, &k) in ks.iter().enumerate() {
            let mut src = root.substream((fi * 1000 + ki) as u64);
            let mut w = Welford::default();
            for _ in 0..trials {
                let f = named_boolean(name, d, &mut src)?;
                let h = boolean_fourier_learn(d, &|x| f.eval(x), n, k, Sampling::Uniform, &mut src)?;
                w.push(f.dist(&h.to_table()?));
            }
            let bound = boolean_learn_bound(d, k, n);
            report.push(
                vec![name.as_str().into(), d.into(), k.into(), n.into()],
                w.mean(),
                w.stderr(),
                bound,
                w.mean() <= bound + 3.0 * w.stderr(),
            );
        }
    }
    let mut src = root.substream(999_999);
    let f = random_monotone_boolean(d, &mut src)?;
    let h = boolean_fourier_learn(d, &|x| f.eval(x), 1 << d, d, Sampling::Stratified, &mut src)?;
    let dist = f.dist(&h.to_table()?);
    report.push(vec!["stratified_full_sample".into(), d.into(), d.into(), (1usize << d).into()], dist, 0.0, 0.0, dist == 0.0);

    if tail_instances > 0 {
        let mut src = root.substream(1_000_000);
        let tables: Vec<BooleanTable> =
            (0..tail_instances).map(|_| random_monotone_boolean(d, &mut src)).collect::<Result<_>>()?;
        for k in 0..=d {
            let mut w = Welford::default();
            let mut worst: f64 = 0.0;
            for t in &tables {
                let tail = boolean_tail_mass(t, k)?;
                worst = worst.max(tail);
                w.push(tail);
            }
            let bound = (d as f64).sqrt() / (k as f64 + 1.0);
            report.push(
                vec!["tail_lemma_random".into(), d.into(), k.into(), Cell::Int(0)],
                w.mean(),
                w.stderr(),
                bound,
                worst <= bound,
            );
        }
    }
    Ok(report)
}

fn haar_learn(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let d = cfg.usize("d", 2)?;
    let r = cfg.u32("r", 3)?;
    let k = cfg.usize("k", 2)?;
    let n_factor = cfg.usize("n_factor", 4)?;
    let instances = cfg.usize("instances", 50)?;
    let corners = cfg.usize("corners", 6)?;
    let res = cfg.usize("res", 128)?;
    let sign_n = cfg.usize("sign_n", 1 << 14)?;
    let sign_trials = cfg.usize("sign_trials", 10)?;
    if d == 0 || d > 4 || r == 0 || r > 6 || k > d || instances < 2 || sign_trials < 2 || res == 0 {
        return invalid("haar-learn needs 1 <= d <= 4, 1 <= r <= 6, k <= d, instances >= 2, sign_trials >= 2");
    }
    let n = n_factor * index_set_size(d, k, r) as usize;
    if n == 0 {
        return invalid("n_factor must be positive");
    }
    let mut report = ExperimentReport::standard("haar-learn", seed, &["target", "d", "r", "k", "n"]);
    let root = RandomSource::new(seed, 0);
    let mut src = root.substream(0);
    let mut w = Welford::default();
    for _ in 0..instances {
        let f = random_monotone_step(d, corners, None, &mut src);
        let g = haar_mc_approximate(&f, d, n, k, r, &mut src)?;
        w.push(l1_distance(&f, &g, d, res));
    }
    let bound = haar_mc_bound(d, k, r, n);
    report.push(
        vec!["random_monotone_step".into(), d.into(), Cell::Int(r as i64), k.into(), n.into()],
        w.mean(),
        w.stderr(),
        bound,
        w.mean() <= bound + 3.0 * w.stderr(),
    );

    let mut src = root.substream(1);
    let f = DiagonalSplit { d, lo: -1.0, hi: 1.0 };
    let mut w = Welford::default();
    for _ in 0..sign_trials {
        let g = sign_refine(haar_mc_approximate(&f, d, sign_n, k, r, &mut src)?);
        w.push(l1_distance(&f, &g, d, res));
    }
    let bound = haar_sign_bound(d, k, r, sign_n);
    report.push(
        vec!["diagonal_split_sign".into(), d.into(), Cell::Int(r as i64), k.into(), sign_n.into()],
        w.mean(),
        w.stderr(),
        bound,
        w.mean() <= bound + 3.0 * w.stderr(),
    );
    Ok(report)
}

fn bounds_table(seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::with_columns(
        "bounds-table",
        seed,
        &["name", "params", "paper_value", "computed_value", "abs_diff", "pass"],
    );
    for c in constants_table() {
        report.push_row(vec![
            c.name.as_str().into(),
            c.params.as_str().into(),
            c.paper_value.into(),
            c.computed_value.into(),
            c.abs_diff().into(),
            c.pass().into(),
        ]);
    }
    Ok(report)
}

fn lewis_optimal(cfg: &ConfigMap, seed: u64) -> Result<ExperimentReport> {
    let p = cfg.f64("p", 1.0)?;
    let m = cfg.usize("m", 3)?;
    let tol = cfg.f64("tol", 1e-9)?;
    let samples = cfg.usize("samples", 10_000)?;
    let ratio_reps = cfg.usize("ratio_reps", 20_000)?;
    if p != 1.0 {
        return invalid("lewis-optimal compares against the closed form known for p = 1 only");
    }
    let root = RandomSource::new(seed, 0);
    let opts = LewisOptions { samples, ..LewisOptions::default() };
    let res = lewis_optimal_measure(p, m, tol, opts, &mut root.substream(0))?;
    let target = (PI / 2.0).sqrt() / m as f64;
    let mut report = ExperimentReport::standard("lewis-optimal", seed, &["quantity", "i", "j", "rank"]);
    for i in 0..m {
        for j in 0..m {
            let want = if i == j { target } else { 0.0 };
            let v = res.j_sym[(i, j)];
            report.push(
                vec!["j_sym_entry".into(), i.into(), j.into(), Cell::Int(0)],
                v,
                0.0,
                want,
                (v - want).abs() <= 0.05 * target,
            );
        }
    }
    let mut src = root.substream(1);
    for rank in 1..m {
        let coord = DMatrix::from_fn(m, m, |a, b| if a == b && a < rank { 1.0 } else { 0.0 });
        let g = DMatrix::from_fn(m, rank, |_, _| src.normal());
        let q = g.qr().q();
        let rotated = &q * q.transpose();
        for (label, pm) in [("ratio_coordinate", coord), ("ratio_random", rotated)] {
            let est = projection_norm_ratio(&res.j, &pm, p, ratio_reps, &mut src)?;
            let bound = rank as f64 / m as f64;
            report.push(
                vec![label.into(), Cell::Int(0), Cell::Int(0), rank.into()],
                est.ratio,
                est.stderr,
                bound,
                est.ratio >= bound - 3.0 * est.stderr,
            );
        }
    }
    Ok(report)
}

fn constants_repro(seed: u64) -> Result<ExperimentReport> {
    let mut report = ExperimentReport::standard("constants-repro", seed, &["name", "params"]);
    for c in constants_table() {
        report.push(vec![c.name.as_str().into(), c.params.as_str().into()], c.computed_value, 0.0, c.paper_value, c.pass());
    }
    let mut worst = f64::INFINITY;
    for d in 10..=200u64 {
        for &(a, b) in &[(-0.33794, 0.46332), (-1.0, 1.0), (-0.5, 0.2), (0.0, 2.0)] {
            let be = bounds::berry_esseen_binom(d, a, b)?;
            worst = worst.min(be.exact_sum - be.lower_bound);
        }
    }
    report.push(vec!["berry_esseen_min_margin".into(), "d=10..200".into()], worst, 0.0, 0.0, worst >= 0.0);
    let mut all = true;
    for d in 1..=60u64 {
        for k in 1..=d {
            all &= bounds::binom_inequalities(d, k)?.all_hold();
        }
    }
    report.push(
        vec!["binomial_inequalities".into(), "d=1..60 all k".into()],
        if all { 1.0 } else { 0.0 },
        0.0,
        1.0,
        all,
    );
    let lb = bounds::curse_formulas(CurseProblem::SmoothLb { d: 9, p: 1.0 })?;
    let tc = taylor_complexity(1.0 / 30.0, 9, 1.0)?;
    report.push(vec!["smooth_sandwich".into(), "eps=1/30 d=9 p=1".into()], tc.n, 0.0, lb, lb <= tc.n && lb == 4.0);
    let md = bounds::curse_formulas(CurseProblem::MonoDet { d: 10, n: 512.0 })?;
    report.push(vec!["mono_det_error".into(), "d=10 n=512".into()], md, 0.0, 0.25, md == 0.25);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_experiment_has_keys() {
        for e in EXPERIMENTS {
            assert!(known_keys(e).is_some());
        }
        assert!(run_experiment("nope", 1, &ConfigMap::default()).is_err());
    }

    #[test]
    fn unknown_keys_rejected() {
        let mut cfg = ConfigMap::default();
        cfg.set("bogus=1").unwrap();
        assert!(matches!(run_experiment("mono-grid", 1, &cfg), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn bounds_table_passes() {
        let r = run_experiment("bounds-table", 0, &ConfigMap::default()).unwrap();
        assert!(r.all_pass(), "{}", r.to_csv());
        assert_eq!(r.columns, ["name", "params", "paper_value", "computed_value", "abs_diff", "pass"]);
    }

    #[test]
    fn mono_grid_defaults_pass() {
        let r = run_experiment("mono-grid", 3, &ConfigMap::default()).unwrap();
        assert!(r.all_pass(), "{}", r.to_csv());
    }
}
