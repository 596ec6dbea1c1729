//! Gaussian fields of periodic RKHSs and the plain Monte Carlo method for
//! uniform approximation in those spaces.

use crate::error::{invalid, Error, Result};
use crate::numerics::{loglog_slope, NormEstimate, Welford};
use crate::report::{Cell, ExperimentReport};
use crate::rkhs::{
    korobov_lambda, periodic_basis_eval, periodic_singular_spectrum, regular_grid, LambdaSeq,
};
use crate::rng::RandomSource;
use crate::special::zeta_from;
use nalgebra::{DMatrix, DVector};

/// Ordered RKHS-orthonormal periodic basis `ψ_𝐤 = Π ψ_{k_j}`.
#[derive(Clone, Debug)]
pub struct BasisSpec {
    pub lambda: LambdaSeq,
    pub d: usize,
    pub freqs: Vec<Vec<i64>>,
}

impl BasisSpec {
    /// The `m` basis functions with the largest `L₂` singular values.
    pub fn leading(lambda: &LambdaSeq, d: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return invalid("basis size must be at least 1");
        }
        let sp = periodic_singular_spectrum(lambda, d, m)?;
        Ok(Self { lambda: lambda.clone(), d, freqs: sp.freqs })
    }

    /// All frequencies with `|𝐤|_∞ ≤ cutoff`.
    pub fn cube(lambda: &LambdaSeq, d: usize, cutoff: usize) -> Result<Self> {
        if cutoff > lambda.truncation() {
            return invalid("cutoff beyond the lambda truncation");
        }
        let side = 2 * cutoff + 1;
        let total = side.checked_pow(d as u32).ok_or_else(|| Error::Budget {
            what: "frequency cube".into(),
            size: u128::MAX,
            cap: 1 << 20,
        })?;
        if total > 1 << 20 {
            return Err(Error::Budget { what: "frequency cube".into(), size: total as u128, cap: 1 << 20 });
        }
        let freqs = (0..total)
            .map(|mut idx| {
                (0..d)
                    .map(|_| {
                        let v = (idx % side) as i64 - cutoff as i64;
                        idx /= side;
                        v
                    })
                    .collect()
            })
            .collect();
        Ok(Self { lambda: lambda.clone(), d, freqs })
    }

    pub fn len(&self) -> usize {
        self.freqs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freqs.is_empty()
    }

    pub fn eval(&self, i: usize, x: &[f64]) -> f64 {
        periodic_basis_eval(&self.lambda, &self.freqs[i], x)
    }

    /// Matrix of basis values, one row per grid point.
    pub fn design(&self, grid: &[Vec<f64>]) -> DMatrix<f64> {
        DMatrix::from_fn(grid.len(), self.len(), |g, i| self.eval(i, &grid[g]))
    }

    /// Truncated kernel `Σ ψ_i(x)ψ_i(z)`.
    pub fn kernel(&self, x: &[f64], z: &[f64]) -> f64 {
        (0..self.len()).map(|i| self.eval(i, x) * self.eval(i, z)).sum()
    }
}

/// `Ψ = Σ X_i ψ_i`.
#[derive(Clone, Debug)]
pub struct FieldSample {
    pub coeffs: Vec<f64>,
}

impl FieldSample {
    pub fn eval(&self, basis: &BasisSpec, x: &[f64]) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| c * basis.eval(i, x)).sum()
    }
}

pub fn sample_field(basis: &BasisSpec, src: &mut RandomSource) -> Result<FieldSample> {
    if basis.is_empty() {
        return invalid("empty basis");
    }
    Ok(FieldSample { coeffs: src.normals(basis.len()) })
}

/// Replicate mean of `max_grid |Ψ|`, a lower estimate of `E‖Ψ‖_∞`.
pub fn empirical_sup_norm(
    basis: &BasisSpec,
    grid: &[Vec<f64>],
    reps: usize,
    src: &mut RandomSource,
) -> Result<NormEstimate> {
    if grid.is_empty() {
        return invalid("grid must be nonempty");
    }
    if reps < 2 {
        return invalid("need at least 2 replicates");
    }
    let g = basis.design(grid);
    Ok(sup_norm_with_design(&g, reps, src))
}

pub(crate) fn sup_norm_with_design(g: &DMatrix<f64>, reps: usize, src: &mut RandomSource) -> NormEstimate {
    let mut w = Welford::default();
    let batch = 64;
    let mut done = 0;
    while done < reps {
        let b = batch.min(reps - done);
        let x = DMatrix::from_fn(g.ncols(), b, |_, _| src.normal());
        let y = g * x;
        for c in 0..b {
            w.push(y.column(c).amax());
        }
        done += b;
    }
    w.estimate()
}

/// Coefficients `b` of the approximant with respect to a [`BasisSpec`].
#[derive(Clone, Debug, PartialEq)]
pub struct Approximant {
    pub coeffs: Vec<f64>,
}

impl Approximant {
    pub fn eval(&self, basis: &BasisSpec, x: &[f64]) -> f64 {
        self.coeffs.iter().enumerate().map(|(i, c)| c * basis.eval(i, x)).sum()
    }
}

/// `b = (1/n) Σ_i ⟨x_i, a⟩ x_i` with independent standard Gaussian `x_i ∈ ℝ^m`.
pub fn plain_mc_approximate(a: &[f64], n: usize, src: &mut RandomSource) -> Result<Approximant> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let m = a.len();
    let mut b = vec![0.0; m];
    let mut x = vec![0.0; m];
    for _ in 0..n {
        x.iter_mut().for_each(|v| *v = src.normal());
        let y: f64 = x.iter().zip(a).map(|(u, v)| u * v).sum();
        b.iter_mut().zip(&x).for_each(|(bj, xj)| *bj += y * xj);
    }
    b.iter_mut().for_each(|v| *v /= n as f64);
    Ok(Approximant { coeffs: b })
}

/// Frequency cutoff `m` with `‖f − f_m‖_∞ ≤ ε/2` on the unit ball, for
/// Korobov spaces with `1/2 < r ≤ 1`:
/// `m = ⌈(4 log 2 · β₁/(r−½) · d · ε⁻²)^{1/(2r−1)}⌉`.
pub fn korobov_truncation(lambda: &LambdaSeq, d: usize, r: f64, eps: f64) -> Result<usize> {
    if r > 1.0 {
        return Err(Error::NotNeeded(format!("r = {r} > 1: the full series has finite sigma")));
    }
    if !(r > 0.5) || !(eps > 0.0) || d == 0 {
        return invalid("need 1/2 < r <= 1, eps > 0, d >= 1");
    }
    let beta1 = match lambda.korobov {
        Some(k) => k.beta1,
        None => return invalid("korobov_truncation needs Korobov weights"),
    };
    let base = 4.0 * std::f64::consts::LN_2 * beta1 / (r - 0.5) * d as f64 / (eps * eps);
    Ok(base.powf(1.0 / (2.0 * r - 1.0)).ceil().max(1.0) as usize)
}

/// `√(1 − (Σ_{k≤m} λ_k²)^d)` for Korobov weights (exact tail sums).
pub fn korobov_truncation_error(lambda: &LambdaSeq, d: usize, m: usize) -> Result<f64> {
    let k = lambda.korobov.ok_or_else(|| Error::InvalidArgument("needs Korobov weights".into()))?;
    let head = 1.0 - k.beta1 * zeta_from(2.0 * k.r, m as u64 + 1);
    Ok((1.0 - head.powi(d as i32)).max(0.0).sqrt())
}

#[derive(Clone, Copy, Debug)]
pub struct KorobovConfig {
    pub beta0: f64,
    /// Basis size for `r > 1` (leading singular functions).
    pub basis_size: usize,
    /// Target accuracy defining the cutoff for `r ≤ 1`.
    pub eps: f64,
    pub grid_per_axis: usize,
    pub probes: usize,
    pub sup_reps: usize,
}

impl KorobovConfig {
    pub fn for_dim(d: usize) -> Self {
        Self {
            beta0: 0.5,
            basis_size: 128,
            eps: 0.5,
            grid_per_axis: if d <= 2 { 64 } else { 16 },
            probes: 16,
            sup_reps: 2000,
        }
    }
}

/// Basis used by the Korobov experiment: leading functions for `r > 1`,
/// the truncated frequency cube for `r ≤ 1`.
pub fn korobov_basis(r: f64, d: usize, cfg: &KorobovConfig) -> Result<BasisSpec> {
    if r <= 1.0 {
        let probe = korobov_lambda(r, cfg.beta0, 1)?;
        let m = korobov_truncation(&probe, d, r, cfg.eps)?;
        BasisSpec::cube(&korobov_lambda(r, cfg.beta0, m)?, d, m)
    } else {
        let lambda = korobov_lambda(r, cfg.beta0, 2000)?;
        BasisSpec::leading(&lambda, d, cfg.basis_size)
    }
}

/// Plain MC approximation in a Korobov space, error on a grid.
///
/// Probe inputs: the first `probes/2` coefficient basis vectors and
/// `probes/2` random unit vectors; the worst probe mean is reported per `n`
/// against `2Ê‖Ψ‖_∞/√n`. A final row records the fitted log-log slope.
pub fn korobov_experiment(
    r: f64,
    d: usize,
    n_list: &[usize],
    reps: usize,
    cfg: &KorobovConfig,
    src: &mut RandomSource,
) -> Result<ExperimentReport> {
    if !(r > 0.5) || d == 0 || d > 4 {
        return invalid("need r > 1/2 and 1 <= d <= 4");
    }
    if reps < 2 || n_list.is_empty() || n_list.contains(&0) {
        return invalid("need reps >= 2 and positive n");
    }
    let basis = korobov_basis(r, d, cfg)?;
    let m = basis.len();
    let grid = regular_grid(d, cfg.grid_per_axis, 0.0, 1.0, true);
    let g = basis.design(&grid);
    let sup = sup_norm_with_design(&g, cfg.sup_reps, &mut src.substream(1));
    let half = (cfg.probes / 2).max(1);
    let mut probe_src = src.substream(2);
    let mut probes = DMatrix::zeros(m, 2 * half);
    for k in 0..half {
        probes[(k % m, k)] = 1.0;
        let v = DVector::from_vec(probe_src.normals(m)).normalize();
        probes.set_column(half + k, &v);
    }
    let mut report = ExperimentReport::standard(
        "korobov-mc",
        src.seed(),
        &["r", "d", "n", "basis_size", "quantity"],
    );
    let mut means = Vec::new();
    for (idx, &n) in n_list.iter().enumerate() {
        let mut sub = src.substream(100 + idx as u64);
        let mut stats = vec![Welford::default(); probes.ncols()];
        let s = 1.0 / (n as f64).sqrt();
        for _ in 0..reps {
            let nm = DMatrix::from_fn(n, m, |_, _| sub.normal() * s);
            let diff = nm.transpose() * (&nm * &probes) - &probes;
            let err = &g * diff;
            for (k, st) in stats.iter_mut().enumerate() {
                st.push(err.column(k).amax());
            }
        }
        let st = stats.iter().max_by(|a, b| a.mean().total_cmp(&b.mean())).unwrap();
        let bound = 2.0 * sup.mean / (n as f64).sqrt();
        let slack = 3.0 * (st.stderr().powi(2) + (2.0 * sup.stderr / (n as f64).sqrt()).powi(2)).sqrt();
        means.push(st.mean());
        report.push(
            vec![r.into(), d.into(), n.into(), m.into(), "grid_sup_error".into()],
            st.mean(),
            st.stderr(),
            bound,
            st.mean() <= bound + slack,
        );
    }
    if n_list.len() >= 2 {
        let ns: Vec<f64> = n_list.iter().map(|&n| n as f64).collect();
        let slope = loglog_slope(&ns, &means);
        report.push(
            vec![r.into(), d.into(), Cell::Int(0), m.into(), "loglog_slope".into()],
            slope,
            0.0,
            -0.5,
            (slope + 0.5).abs() <= 0.075,
        );
    }
    Ok(report)
}

/// `L(f_k)` for the normalized `f_k = Σ_{j≤k} X_j ψ_j / ‖X‖`: equals `‖(X_1..X_k)‖₂`.
pub fn unbounded_functional_values(k: usize, reps: usize, src: &mut RandomSource) -> Result<NormEstimate> {
    if k == 0 || reps < 2 {
        return invalid("need k >= 1 and reps >= 2");
    }
    let mut w = Welford::default();
    for _ in 0..reps {
        let x = src.normals(k);
        let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        let value: f64 = x.iter().map(|v| v * v / nrm).sum();
        w.push(value);
    }
    Ok(w.estimate())
}

/// Exact Brownian-sheet values on the `per_axis^d` grid of each orthant of
/// `[−1,1]^d` (cumulative sums of independent cell increments); returns the
/// grid maximum of `|W|`.
pub fn wiener_sheet_grid_sup(d: usize, per_axis: usize, src: &mut RandomSource) -> f64 {
    let h = 1.0 / per_axis as f64;
    let sd = h.powf(d as f64 / 2.0);
    let total = per_axis.pow(d as u32);
    let mut best = 0.0f64;
    for _orthant in 0..(1usize << d) {
        let mut w: Vec<f64> = (0..total).map(|_| src.normal() * sd).collect();
        let mut stride = 1;
        for _axis in 0..d {
            for idx in 0..total {
                if (idx / stride) % per_axis != 0 {
                    w[idx] += w[idx - stride];
                }
            }
            stride *= per_axis;
        }
        best = w.iter().fold(best, |m, v| m.max(v.abs()));
    }
    best
}
