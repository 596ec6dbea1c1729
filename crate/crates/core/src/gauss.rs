//! Standard Gaussian vectors: sampling, norm expectations and their two-sided
//! bounds, deviation tails, and Lewis-type optimal Gaussian measures.

use crate::error::{invalid, Error, Result};
use crate::numerics::{lp_norm, NormEstimate, Welford};
use crate::rng::RandomSource;
use crate::special::phi_inv;
use nalgebra::{DMatrix, DVector};
use std::f64::consts::{E, PI};

pub type LinearMap = DMatrix<f64>;

/// `K = √(2π / (e(2π − e)))`, the sup over q of the moment constants.
pub fn k_const() -> f64 {
    (2.0 * PI / (E * (2.0 * PI - E))).sqrt()
}

/// `α = Φ⁻¹(1 − 1/(2e))`.
pub fn alpha_const() -> f64 {
    -phi_inv(1.0 / (2.0 * E))
}

/// Lower constant for the sup norm, `α(1 − e^{−1/e})`.
pub fn c_inf_lower() -> f64 {
    alpha_const() * (1.0 - (-1.0 / E).exp())
}

/// Upper constant for the sup norm, `K e`.
pub fn c_inf_upper() -> f64 {
    k_const() * E
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaussVecSpec {
    pub m: usize,
    pub p: f64,
}

impl GaussVecSpec {
    pub fn new(m: usize, p: f64) -> Result<Self> {
        if m == 0 {
            return invalid("dimension m must be at least 1");
        }
        if !(p >= 1.0) {
            return invalid(format!("norm exponent p = {p} must be >= 1 or infinite"));
        }
        Ok(Self { m, p })
    }
}

pub fn sample_std_gaussian(m: usize, src: &mut RandomSource) -> Result<Vec<f64>> {
    if m == 0 {
        return invalid("dimension m must be at least 1");
    }
    Ok(src.normals(m))
}

/// Replicate mean of `‖X‖_p` with standard error.
pub fn expected_norm_estimate(
    spec: GaussVecSpec,
    reps: usize,
    src: &mut RandomSource,
) -> Result<NormEstimate> {
    if reps < 2 {
        return invalid("need at least 2 replicates");
    }
    let mut w = Welford::default();
    let mut x = vec![0.0; spec.m];
    for _ in 0..reps {
        x.iter_mut().for_each(|v| *v = src.normal());
        w.push(lp_norm(&x, spec.p));
    }
    Ok(w.estimate())
}

/// Two-sided bounds on `E‖X‖_p` for a standard Gaussian `X ∈ ℝ^m`.
pub fn gauss_norm_bounds(spec: GaussVecSpec) -> (f64, f64) {
    let m = spec.m as f64;
    if spec.p.is_infinite() {
        let s = (1.0 + m.ln()).sqrt();
        (c_inf_lower() * s, c_inf_upper() * s)
    } else {
        let scale = m.powf(1.0 / spec.p);
        ((2.0 / PI).sqrt() * scale, k_const() * spec.p.sqrt() * scale)
    }
}

/// Operator norm `‖J‖` from `ℓ₂` into `ℓ_p`.
///
/// Spectral norm for `p = 2`, largest row norm for `p = ∞`, and for `p = 1`
/// the exact `max_{s ∈ {±1}^n} ‖Jᵀs‖₂` when `n ≤ 20`. Other cases use a
/// deterministic random search, which gives a lower estimate.
pub fn operator_norm_2_to_p(j: &LinearMap, p: f64) -> f64 {
    let (n, m) = j.shape();
    if p == 2.0 {
        let jtj = j.transpose() * j;
        let mut v = DVector::from_element(m, 1.0 / (m as f64).sqrt());
        let mut lam = 0.0;
        for _ in 0..1000 {
            let w = &jtj * &v;
            let norm = w.norm();
            if norm == 0.0 {
                return 0.0;
            }
            let next = w / norm;
            let converged = (norm - lam).abs() <= 1e-15 * norm;
            lam = norm;
            v = next;
            if converged {
                break;
            }
        }
        return lam.sqrt();
    }
    if p.is_infinite() {
        return (0..n).map(|i| j.row(i).norm()).fold(0.0, f64::max);
    }
    if p == 1.0 && n <= 20 {
        let mut best = 0.0f64;
        for mask in 0u32..(1u32 << n) {
            let mut acc = DVector::zeros(m);
            for i in 0..n {
                let s = if mask >> i & 1 == 1 { 1.0 } else { -1.0 };
                acc += j.row(i).transpose() * s;
            }
            best = best.max(acc.norm());
        }
        return best;
    }
    let mut src = RandomSource::new(0x0b5e_55ed, 0);
    let mut best = 0.0f64;
    for _ in 0..20_000 {
        let x = DVector::from_vec(src.normals(m));
        let y = j * &x;
        best = best.max(lp_norm(y.as_slice(), p) / x.norm());
    }
    best
}

#[derive(Clone, Copy, Debug)]
pub struct DeviationTail {
    pub empirical_tail: f64,
    /// `exp(−(λ−1)²/π)`
    pub bound: f64,
    /// `exp(−(λ−1)²ρ²/2)` with `ρ = Ê‖JX‖ / ‖J‖`
    pub sharp_bound: f64,
    pub rho: f64,
    pub mean: f64,
}

pub fn deviation_bound(lambda: f64) -> f64 {
    (-(lambda - 1.0).powi(2) / PI).exp()
}

/// Fraction of replicates with `‖JX‖_p > λ·Ê‖JX‖_p`, against the deviation bounds.
pub fn deviation_tail(
    j: &LinearMap,
    p: f64,
    lambda: f64,
    reps: usize,
    src: &mut RandomSource,
) -> Result<DeviationTail> {
    if !(lambda > 1.0) {
        return invalid(format!("lambda = {lambda} must exceed 1"));
    }
    if j.iter().all(|&v| v == 0.0) {
        return invalid("J must be nonzero");
    }
    if reps < 2 {
        return invalid("need at least 2 replicates");
    }
    let m = j.ncols();
    let norms: Vec<f64> = (0..reps)
        .map(|_| {
            let x = DVector::from_vec(src.normals(m));
            lp_norm((j * x).as_slice(), p)
        })
        .collect();
    let mean = norms.iter().sum::<f64>() / reps as f64;
    let exceed = norms.iter().filter(|&&v| v > lambda * mean).count();
    let rho = mean / operator_norm_2_to_p(j, p);
    Ok(DeviationTail {
        empirical_tail: exceed as f64 / reps as f64,
        bound: deviation_bound(lambda),
        sharp_bound: (-(lambda - 1.0).powi(2) * rho * rho / 2.0).exp(),
        rho,
        mean,
    })
}

#[derive(Clone, Copy, Debug)]
pub struct LewisOptions {
    pub samples: usize,
    pub step: f64,
    pub max_iter: usize,
    /// Size of the random perturbation of the identity used as start.
    pub perturb: f64,
}

impl Default for LewisOptions {
    fn default() -> Self {
        Self { samples: 10_000, step: 0.1, max_iter: 5000, perturb: 0.2 }
    }
}

#[derive(Clone, Debug)]
pub struct LewisResult {
    pub j: LinearMap,
    /// Symmetric polar factor `(JJᵀ)^{1/2}`; removes the free orthogonal factor on the right.
    pub j_sym: LinearMap,
    pub log_det: f64,
    pub iterations: usize,
}

struct FrozenSample {
    xs: Vec<DVector<f64>>,
    p: f64,
}

impl FrozenSample {
    fn mean_norm(&self, j: &LinearMap) -> f64 {
        self.xs.iter().map(|x| lp_norm((j * x).as_slice(), self.p)).sum::<f64>()
            / self.xs.len() as f64
    }

    fn mean_norm_grad(&self, j: &LinearMap) -> LinearMap {
        let (n, m) = j.shape();
        let mut g = DMatrix::zeros(n, m);
        for x in &self.xs {
            let y = j * x;
            let dy = norm_gradient(y.as_slice(), self.p);
            g += DVector::from_vec(dy) * x.transpose();
        }
        g / self.xs.len() as f64
    }
}

fn norm_gradient(y: &[f64], p: f64) -> Vec<f64> {
    let sgn = |v: f64| if v > 0.0 { 1.0 } else if v < 0.0 { -1.0 } else { 0.0 };
    if p == 1.0 {
        y.iter().map(|&v| sgn(v)).collect()
    } else if p.is_infinite() {
        let (imax, _) = y
            .iter()
            .enumerate()
            .fold((0, -1.0), |(bi, bv), (i, &v)| if v.abs() > bv { (i, v.abs()) } else { (bi, bv) });
        let mut g = vec![0.0; y.len()];
        g[imax] = sgn(y[imax]);
        g
    } else {
        let nrm = lp_norm(y, p);
        if nrm == 0.0 {
            return vec![0.0; y.len()];
        }
        y.iter().map(|&v| sgn(v) * (v.abs() / nrm).powf(p - 1.0)).collect()
    }
}

fn sym_sqrt(a: &LinearMap) -> LinearMap {
    let eig = a.clone().symmetric_eigen();
    let d = DMatrix::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()));
    &eig.eigenvectors * d * eig.eigenvectors.transpose()
}

/// Maximizes `log|det J|` subject to `Ê‖JX‖_p = 1` on a frozen Gaussian
/// sample, by gradient ascent with renormalization after every step.
pub fn lewis_optimal_measure(
    p: f64,
    m: usize,
    tol: f64,
    opts: LewisOptions,
    src: &mut RandomSource,
) -> Result<LewisResult> {
    if m == 0 || m > 8 {
        return invalid(format!("dimension m = {m} outside 1..=8"));
    }
    if !(tol > 0.0) || !(p >= 1.0) {
        return invalid("need tol > 0 and p >= 1");
    }
    let mut sample_src = src.substream(1);
    let sample = FrozenSample {
        xs: (0..opts.samples).map(|_| DVector::from_vec(sample_src.normals(m))).collect(),
        p,
    };
    let mut start_src = src.substream(2);
    let mut j = DMatrix::from_fn(m, m, |r, c| {
        let noise = opts.perturb * start_src.normal();
        if r == c { 1.0 + noise } else { noise }
    });
    if j.determinant() < 0.0 {
        j.row_mut(0).neg_mut();
    }
    let normalize = |j: LinearMap| -> LinearMap {
        let s = sample.mean_norm(&j);
        j / s
    };
    let log_det = |j: &LinearMap| j.determinant().abs().ln();
    j = normalize(j);
    let mut ld = log_det(&j);
    let mut eta = opts.step;
    for it in 0..opts.max_iter {
        let inv_t = match j.clone().try_inverse() {
            Some(inv) => inv.transpose(),
            None => return Err(Error::Degenerate("singular iterate".into())),
        };
        let grad = inv_t - sample.mean_norm_grad(&j) * m as f64;
        loop {
            let cand = normalize(&j + &grad * eta);
            let ld_c = log_det(&cand);
            if ld_c.is_finite() && ld_c > ld {
                let rel = (ld_c - ld).exp() - 1.0;
                j = cand;
                ld = ld_c;
                if rel < tol {
                    let j_sym = sym_sqrt(&(&j * j.transpose()));
                    return Ok(LewisResult { j, j_sym, log_det: ld, iterations: it + 1 });
                }
                break;
            }
            eta *= 0.5;
            if eta < 1e-14 {
                let j_sym = sym_sqrt(&(&j * j.transpose()));
                return Ok(LewisResult { j, j_sym, log_det: ld, iterations: it + 1 });
            }
        }
    }
    Err(Error::NoConvergence {
        iterations: opts.max_iter,
        reason: "relative determinant improvement still above tol".into(),
        last: j.as_slice().to_vec(),
    })
}

#[derive(Clone, Copy, Debug)]
pub struct RatioEstimate {
    pub ratio: f64,
    pub stderr: f64,
    pub projected: NormEstimate,
    pub full: NormEstimate,
}

fn check_projection(pm: &LinearMap) -> Result<usize> {
    let (r, c) = pm.shape();
    if r != c {
        return invalid("projection must be square");
    }
    let sym = (pm - pm.transpose()).abs().max();
    let idem = (pm * pm - pm).abs().max();
    if sym > 1e-10 || idem > 1e-10 {
        return invalid(format!("not an orthogonal projection (asym {sym:e}, idempotency {idem:e})"));
    }
    Ok(pm.trace().round() as usize)
}

/// `Ê‖JPX‖_p / Ê‖JX‖_p` on common samples, with a delta-method standard error.
pub fn projection_norm_ratio(
    j: &LinearMap,
    pm: &LinearMap,
    p: f64,
    reps: usize,
    src: &mut RandomSource,
) -> Result<RatioEstimate> {
    check_projection(pm)?;
    if pm.nrows() != j.ncols() {
        return invalid("dimension mismatch between J and P");
    }
    if reps < 2 {
        return invalid("need at least 2 replicates");
    }
    let m = j.ncols();
    let jp = j * pm;
    let mut a = Vec::with_capacity(reps);
    let mut b = Vec::with_capacity(reps);
    for _ in 0..reps {
        let x = DVector::from_vec(src.normals(m));
        a.push(lp_norm((&jp * &x).as_slice(), p));
        b.push(lp_norm((j * &x).as_slice(), p));
    }
    let projected = NormEstimate::from_samples(&a);
    let full = NormEstimate::from_samples(&b);
    let ratio = projected.mean / full.mean;
    let resid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - ratio * y).collect();
    let rs = NormEstimate::from_samples(&resid);
    Ok(RatioEstimate { ratio, stderr: rs.stderr / full.mean, projected, full })
}

/// Rank of an orthogonal projection, after validating it.
pub fn projection_rank(pm: &LinearMap) -> Result<usize> {
    check_projection(pm)
}

/// `E‖X‖₂` for `X ~ N(0, I_m)`, `√2 Γ((m+1)/2)/Γ(m/2)`.
pub fn chi_mean(m: usize) -> f64 {
    use crate::special::ln_gamma;
    let m = m as f64;
    2f64.sqrt() * (ln_gamma((m + 1.0) / 2.0) - ln_gamma(m / 2.0)).exp()
}
