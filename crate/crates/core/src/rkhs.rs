//! Reproducing kernels on the torus and on `[−1, 1]^d`, their canonical
//! metrics and spectra, and bounds for uniform approximation in the
//! associated Hilbert spaces.

use crate::error::{invalid, Error, Result};
use crate::numerics::trapezoid;
use crate::special::{ln_gamma, zeta, zeta_from};
use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, SQRT_2};

pub const C_FERNIQUE: f64 = 8.0 * (2.0 + std::f64::consts::FRAC_1_SQRT_2);
pub const C_DUDLEY: f64 = 4.0 * SQRT_2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KorobovParams {
    pub r: f64,
    pub beta0: f64,
    pub beta1: f64,
}

/// Fourier weights `λ_0, …, λ_L` of a periodic kernel.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeq {
    pub lambda: Vec<f64>,
    /// `Σ_{k>L} λ_k²`, exact where known (zero for finite sequences).
    pub tail_sq: f64,
    pub korobov: Option<KorobovParams>,
}

impl LambdaSeq {
    /// A finitely supported sequence; requires `Σλ² ≤ 1 + 1e-12`.
    pub fn finite(lambda: Vec<f64>) -> Result<Self> {
        if lambda.is_empty() || lambda.iter().any(|&v| !(v >= 0.0) || !v.is_finite()) {
            return invalid("lambda must be a nonempty nonnegative finite sequence");
        }
        let s: f64 = lambda.iter().map(|v| v * v).sum();
        if s > 1.0 + 1e-12 {
            return invalid(format!("sum of squares {s} exceeds 1"));
        }
        Ok(Self { lambda, tail_sq: 0.0, korobov: None })
    }

    pub fn truncation(&self) -> usize {
        self.lambda.len() - 1
    }

    pub fn lambda0(&self) -> f64 {
        self.lambda[0]
    }

    /// `Σ_{k≤L} λ_k² + tail`.
    pub fn total_mass(&self) -> f64 {
        self.lambda.iter().map(|v| v * v).sum::<f64>() + self.tail_sq
    }

    /// Analytic bound `β₁ L^{1−2r}/(2r−1)` on the omitted mass (Korobov only).
    pub fn tail_bound(&self) -> Option<f64> {
        self.korobov.map(|k| {
            let l = self.truncation() as f64;
            k.beta1 * l.powf(1.0 - 2.0 * k.r) / (2.0 * k.r - 1.0)
        })
    }

    /// `σ_λ = Σ_{k≥1} k λ_k²`, including the Korobov tail `β₁ Σ_{k>L} k^{1−2r}`.
    pub fn sigma(&self) -> Result<f64> {
        let head: f64 = self.lambda.iter().enumerate().map(|(k, v)| k as f64 * v * v).sum();
        match self.korobov {
            Some(k) if k.beta1 > 0.0 => {
                if k.r <= 1.0 {
                    return Err(Error::NotNeeded(format!(
                        "sigma_lambda diverges for r = {} <= 1; use the truncated subspace",
                        k.r
                    )));
                }
                Ok(head + k.beta1 * zeta_from(2.0 * k.r - 1.0, self.truncation() as u64 + 1))
            }
            _ => Ok(head),
        }
    }

    /// One-dimensional kernel `K₁(t) = Σ_{k≤L} λ_k² cos(2πkt)` (Clenshaw), truncated at `L`.
    pub fn kernel_1d(&self, t: f64) -> f64 {
        let c = (2.0 * PI * t).cos();
        let (mut b1, mut b2) = (0.0, 0.0);
        for k in (1..self.lambda.len()).rev() {
            let b0 = self.lambda[k] * self.lambda[k] + 2.0 * c * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        self.lambda[0] * self.lambda[0] + c * b1 - b2
    }
}

/// Korobov weights `λ₀ = √β₀`, `λ_k = √β₁ k^{−r}` with `β₀ + β₁ζ(2r) = 1`.
pub fn korobov_lambda(r: f64, beta0: f64, truncation: usize) -> Result<LambdaSeq> {
    if !(r > 0.5) {
        return invalid(format!("smoothness r = {r} must exceed 1/2"));
    }
    if !(beta0 > 0.0 && beta0 <= 1.0) {
        return invalid(format!("beta0 = {beta0} outside (0, 1]"));
    }
    let beta1 = (1.0 - beta0) / zeta(2.0 * r);
    let mut lambda = vec![beta0.sqrt()];
    lambda.extend((1..=truncation).map(|k| (beta1.sqrt()) * (k as f64).powf(-r)));
    let tail_sq = if beta1 > 0.0 { beta1 * zeta_from(2.0 * r, truncation as u64 + 1) } else { 0.0 };
    Ok(LambdaSeq { lambda, tail_sq, korobov: Some(KorobovParams { r, beta0, beta1 }) })
}

#[derive(Clone, Debug, PartialEq)]
pub enum KernelKind {
    /// Tensor product of `K_λ` on `𝕋^d = [0,1)^d`.
    Periodic(LambdaSeq),
    /// `Π 𝟙[sgn x_j = sgn z_j] min(|x_j|, |z_j|)` on `[−1,1]^d`.
    WienerSheet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct KernelHandle {
    pub kind: KernelKind,
    pub d: usize,
}

impl KernelHandle {
    pub fn periodic(lambda: LambdaSeq, d: usize) -> Self {
        Self { kind: KernelKind::Periodic(lambda), d }
    }

    pub fn wiener_sheet(d: usize) -> Self {
        Self { kind: KernelKind::WienerSheet, d }
    }

    pub fn lambda(&self) -> Option<&LambdaSeq> {
        match &self.kind {
            KernelKind::Periodic(l) => Some(l),
            KernelKind::WienerSheet => None,
        }
    }

    pub fn eval_1d(&self, x: f64, z: f64) -> f64 {
        match &self.kind {
            KernelKind::Periodic(l) => l.kernel_1d(x - z),
            KernelKind::WienerSheet => {
                if x * z > 0.0 {
                    x.abs().min(z.abs())
                } else {
                    0.0
                }
            }
        }
    }
}

pub fn kernel_eval(k: &KernelHandle, x: &[f64], z: &[f64]) -> Result<f64> {
    if x.len() != k.d || z.len() != k.d {
        return invalid(format!(
            "points of dimension {} and {} for a kernel on dimension {}",
            x.len(),
            z.len(),
            k.d
        ));
    }
    Ok(x.iter().zip(z).map(|(&a, &b)| k.eval_1d(a, b)).product())
}

/// `d_K(x,z) = √(K(x,x) − 2K(x,z) + K(z,z))`, clamped at zero.
pub fn canonical_metric(k: &KernelHandle, x: &[f64], z: &[f64]) -> Result<f64> {
    let v = kernel_eval(k, x, x)? - 2.0 * kernel_eval(k, x, z)? + kernel_eval(k, z, z)?;
    Ok(v.max(0.0).sqrt())
}

/// Torus distance, summed over coordinates.
pub fn torus_distance(x: &[f64], z: &[f64]) -> f64 {
    x.iter()
        .zip(z)
        .map(|(a, b)| {
            let t = (a - b).rem_euclid(1.0);
            t.min(1.0 - t)
        })
        .sum()
}

/// Largest singular values of `H(K_λ^d) ↪ L₂`, with their frequency labels.
///
/// A label `k_j > 0` stands for `λ_k cos(2πk·)`, `k_j < 0` for `λ_{|k|} sin`.
#[derive(Clone, Debug)]
pub struct SingularSpectrum {
    pub values: Vec<f64>,
    pub freqs: Vec<Vec<i64>>,
    /// `(Σ_{k≤L} λ_k²)^d`: mass of the whole enumerated frequency cube.
    pub enumerated_mass: f64,
    /// Mass outside the frequency cube.
    pub omitted_mass: f64,
}

#[derive(PartialEq)]
struct HeapItem {
    value: f64,
    idx: Vec<usize>,
}

impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then_with(|| other.idx.cmp(&self.idx))
    }
}

fn one_dim_values(lambda: &LambdaSeq) -> Vec<(f64, i64)> {
    let mut v = vec![(lambda.lambda[0], 0i64)];
    for (k, &l) in lambda.lambda.iter().enumerate().skip(1) {
        v.push((l / SQRT_2, k as i64));
        v.push((l / SQRT_2, -(k as i64)));
    }
    v.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.abs().cmp(&b.1.abs())).then(b.1.cmp(&a.1)));
    v
}

pub fn periodic_singular_spectrum(
    lambda: &LambdaSeq,
    d: usize,
    count: usize,
) -> Result<SingularSpectrum> {
    if d == 0 {
        return invalid("dimension must be at least 1");
    }
    let one = one_dim_values(lambda);
    let head_mass: f64 = lambda.lambda.iter().map(|v| v * v).sum();
    let cube = (one.len() as f64).powi(d as i32);
    if count as f64 > cube {
        return Err(Error::Budget {
            what: "spectrum entries inside the frequency cutoff".into(),
            size: count as u128,
            cap: cube as u128,
        });
    }
    let mut values = Vec::with_capacity(count);
    let mut freqs = Vec::with_capacity(count);
    let mut heap = BinaryHeap::new();
    let val = |idx: &[usize]| idx.iter().map(|&i| one[i].0).product::<f64>();
    heap.push(HeapItem { value: val(&vec![0; d]), idx: vec![0; d] });
    while values.len() < count {
        let Some(item) = heap.pop() else { break };
        let last_nz = item.idx.iter().rposition(|&i| i > 0).unwrap_or(0);
        for j in last_nz..d {
            if item.idx[j] + 1 < one.len() {
                let mut child = item.idx.clone();
                child[j] += 1;
                heap.push(HeapItem { value: val(&child), idx: child });
            }
        }
        freqs.push(item.idx.iter().map(|&i| one[i].1).collect());
        values.push(item.value);
    }
    // Any entry with an omitted frequency is at most σ_max^{d−1}·√(tail/2).
    let cap = one[0].0.powi(d as i32 - 1) * (lambda.tail_sq / 2.0).sqrt();
    if let Some(&last) = values.last() {
        if lambda.tail_sq > 0.0 && last < cap {
            return Err(Error::Budget {
                what: format!("frequency cutoff L = {} certifies ordering only above {cap:e}", lambda.truncation()),
                size: count as u128,
                cap: values.iter().filter(|&&v| v >= cap).count() as u128,
            });
        }
    }
    let total = head_mass + lambda.tail_sq;
    Ok(SingularSpectrum {
        values,
        freqs,
        enumerated_mass: head_mass.powi(d as i32),
        omitted_mass: total.powi(d as i32) - head_mass.powi(d as i32),
    })
}

/// `√(1 − Σ_{i≤n} σ_i²)`, a lower bound for the worst-case error with `n` functionals.
pub fn worst_case_lower_bound_tail(lambda: &LambdaSeq, d: usize, n: usize) -> Result<f64> {
    let total = lambda.total_mass().powi(d as i32);
    if n == 0 {
        return Ok(total.sqrt());
    }
    let sp = periodic_singular_spectrum(lambda, d, n)?;
    let s: f64 = sp.values.iter().map(|v| v * v).sum();
    Ok((total - s).max(0.0).sqrt())
}

/// `β = max{λ₀², sup_k λ_k²/2}`.
pub fn curse_beta(lambda: &LambdaSeq) -> f64 {
    let sup = lambda.lambda.iter().skip(1).fold(0.0f64, |m, v| m.max(v * v / 2.0));
    (lambda.lambda0() * lambda.lambda0()).max(sup)
}

/// `√((1 − nβ^d)_+)`.
pub fn curse_lower_bound(lambda: &LambdaSeq, d: usize, n: usize) -> Result<f64> {
    if lambda.lambda0() >= 1.0 {
        return Err(Error::Degenerate("lambda0 = 1: the space is constant".into()));
    }
    let beta = curse_beta(lambda);
    Ok((1.0 - n as f64 * beta.powi(d as i32)).max(0.0).sqrt())
}

/// `β^{−d}(1−ε)²`, the implied lower bound on the information complexity.
pub fn curse_complexity(beta: f64, d: usize, eps: f64) -> f64 {
    beta.powi(-(d as i32)) * (1.0 - eps).powi(2)
}

/// `sup_grid √(K(x,x) − Σ ψ_i(x)²)` for RKHS-orthonormal `ψ_i`.
pub fn worst_case_upper_bound_remainder(
    k: &KernelHandle,
    basis: &[&dyn Fn(&[f64]) -> f64],
    grid: &[Vec<f64>],
) -> Result<f64> {
    remainder_sup(|x| kernel_eval(k, x, x), basis, grid)
}

fn remainder_sup(
    diag: impl Fn(&[f64]) -> Result<f64>,
    basis: &[&dyn Fn(&[f64]) -> f64],
    grid: &[Vec<f64>],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in grid {
        let s: f64 = basis.iter().map(|psi| psi(x).powi(2)).sum();
        let rem = diag(x)? - s;
        if rem < -1e-9 {
            return Err(Error::InconsistentBasis(rem));
        }
        worst = worst.max(rem.max(0.0));
    }
    Ok(worst.sqrt())
}

/// Periodic RKHS basis function with frequency label (see [`SingularSpectrum`]).
pub fn periodic_basis_eval(lambda: &LambdaSeq, freq: &[i64], x: &[f64]) -> f64 {
    freq.iter()
        .zip(x)
        .map(|(&k, &t)| {
            let a = k.unsigned_abs() as usize;
            let l = lambda.lambda.get(a).copied().unwrap_or(0.0);
            if k == 0 {
                l
            } else if k > 0 {
                l * (2.0 * PI * a as f64 * t).cos()
            } else {
                l * (2.0 * PI * a as f64 * t).sin()
            }
        })
        .product()
}

/// Regular grid with `per_axis` points per coordinate on `[lo, hi]` (or
/// `[lo, hi)` when `half_open`).
pub fn regular_grid(d: usize, per_axis: usize, lo: f64, hi: f64, half_open: bool) -> Vec<Vec<f64>> {
    let h = if half_open || per_axis == 1 {
        (hi - lo) / per_axis as f64
    } else {
        (hi - lo) / (per_axis - 1) as f64
    };
    let axis: Vec<f64> = (0..per_axis).map(|i| lo + i as f64 * h).collect();
    let total = per_axis.pow(d as u32);
    (0..total)
        .map(|mut idx| {
            (0..d)
                .map(|_| {
                    let v = axis[idx % per_axis];
                    idx /= per_axis;
                    v
                })
                .collect()
        })
        .collect()
}

/// Remainder bound for the periodic kernel using the `n` leading basis
/// functions (ordered like the singular values), on a regular torus grid.
pub fn periodic_remainder_bound(
    lambda: &LambdaSeq,
    d: usize,
    n: usize,
    per_axis: usize,
) -> Result<f64> {
    if d == 0 {
        return invalid("dimension must be at least 1");
    }
    let freqs = if n == 0 { Vec::new() } else { periodic_singular_spectrum(lambda, d, n)?.freqs };
    let fns: Vec<Box<dyn Fn(&[f64]) -> f64>> = freqs
        .into_iter()
        .map(|f| {
            let l = lambda.clone();
            Box::new(move |x: &[f64]| periodic_basis_eval(&l, &f, x)) as Box<dyn Fn(&[f64]) -> f64>
        })
        .collect();
    let refs: Vec<&dyn Fn(&[f64]) -> f64> = fns.iter().map(|b| b.as_ref()).collect();
    let grid = regular_grid(d, per_axis, 0.0, 1.0, true);
    // The diagonal is constant, and unlike the truncated kernel it includes the omitted frequencies.
    let diag = lambda.total_mass().powi(d as i32);
    remainder_sup(|_| Ok(diag), &refs, &grid)
}

/// `sup_{m>n} √((m−n) / Σ_{j≤m} λ_j^{−2})` for a diagonal operator.
pub fn diag_operator_lower_bound(lambdas: &[f64], n: usize) -> Result<f64> {
    if lambdas.windows(2).any(|w| w[1] > w[0]) || lambdas.iter().any(|&v| v < 0.0) {
        return invalid("lambdas must be nonnegative and nonincreasing");
    }
    let mut inv_sum = 0.0;
    let mut best = 0.0f64;
    for (j, &l) in lambdas.iter().enumerate() {
        if l == 0.0 {
            break;
        }
        inv_sum += l.powi(-2);
        let m = j + 1;
        if m > n {
            best = best.max(((m - n) as f64 / inv_sum).sqrt());
        }
    }
    Ok(best)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain {
    /// `[0,1)^d`
    Torus(usize),
    /// `[−1,1]^d`
    Cube(usize),
}

impl Domain {
    pub fn dim(&self) -> usize {
        match *self {
            Domain::Torus(d) | Domain::Cube(d) => d,
        }
    }

    /// Candidate points for covers: `per_axis^d` points.
    pub fn candidates(&self, per_axis: usize) -> Vec<Vec<f64>> {
        match *self {
            Domain::Torus(d) => regular_grid(d, per_axis, 0.0, 1.0, true),
            Domain::Cube(d) => regular_grid(d, per_axis, -1.0, 1.0, false),
        }
    }

    /// Default candidate resolution: about 2^12 points in total.
    pub fn default_per_axis(&self) -> usize {
        let d = self.dim() as f64;
        (4096f64.powf(1.0 / d).floor() as usize).max(2)
    }
}

/// Pairwise canonical distances of the candidate set.
pub struct CoverContext {
    pub points: Vec<Vec<f64>>,
    dist: Vec<f64>,
}

impl CoverContext {
    pub fn new(k: &KernelHandle, domain: Domain, per_axis: usize) -> Result<Self> {
        if domain.dim() != k.d {
            return invalid("domain and kernel dimensions differ");
        }
        let points = domain.candidates(per_axis);
        let n = points.len();
        let diag: Vec<f64> = points.iter().map(|x| kernel_eval(k, x, x)).collect::<Result<_>>()?;
        let mut dist = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = diag[i] + diag[j] - 2.0 * kernel_eval(k, &points[i], &points[j])?;
                let dij = v.max(0.0).sqrt();
                dist[i * n + j] = dij;
                dist[j * n + i] = dij;
            }
        }
        Ok(Self { points, dist })
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().cloned().fold(0.0, f64::max)
    }

    /// Greedy cover: the first uncovered candidate becomes a center.
    pub fn greedy_cover(&self, r: f64) -> usize {
        let n = self.points.len();
        let mut covered = vec![false; n];
        let mut centers = 0;
        for i in 0..n {
            if covered[i] {
                continue;
            }
            centers += 1;
            let row = &self.dist[i * n..(i + 1) * n];
            for (c, &dij) in covered.iter_mut().zip(row) {
                if dij <= r {
                    *c = true;
                }
            }
        }
        centers
    }
}

/// Size of a greedy `r`-cover of the discretized domain under `d_K`; an upper
/// bound on `N(r)` for that candidate set.
pub fn covering_number(
    k: &KernelHandle,
    domain: Domain,
    r: f64,
    per_axis: usize,
) -> Result<usize> {
    if !(r > 0.0) {
        return invalid("radius must be positive");
    }
    let ctx = CoverContext::new(k, domain, per_axis)?;
    if r >= ctx.diameter() {
        return Ok(1);
    }
    Ok(ctx.greedy_cover(r))
}

/// `C_Dudley ∫₀^diam √(log N(r)) dr` with a 256-node log-spaced trapezoid;
/// the piece below the smallest node uses the saturated candidate count.
pub fn dudley_bound(k: &KernelHandle, domain: Domain, per_axis: usize) -> Result<f64> {
    let ctx = CoverContext::new(k, domain, per_axis)?;
    let diam = ctx.diameter();
    if diam <= 1e-12 {
        return Ok(0.0);
    }
    let nodes = 256;
    let r_min = diam * 1e-6;
    let rs: Vec<f64> = (0..nodes)
        .map(|i| r_min * (diam / r_min).powf(i as f64 / (nodes - 1) as f64))
        .collect();
    let ys: Vec<f64> = rs.iter().map(|&r| (ctx.greedy_cover(r) as f64).ln().sqrt()).collect();
    let head = r_min * (ctx.points.len() as f64).ln().sqrt();
    Ok(C_DUDLEY * (head + trapezoid(&rs, &ys)))
}

/// `(α, R₀)` with `K₁(x,z) ≥ exp(−α d_T(x,z))` whenever `d_T(x,z) ≤ R₀`.
pub fn sufficient_alpha(lambda: &LambdaSeq) -> Result<(f64, f64)> {
    let l0sq = lambda.lambda0().powi(2);
    let sigma = lambda.sigma()?;
    if sigma == 0.0 {
        return Ok((0.0, 0.5));
    }
    if l0sq >= 2.0 / 3.0 {
        return Ok((2.0 * PI * sigma / (2.0 * l0sq - 1.0), 0.5));
    }
    let c = 3.0 * (1.0 - l0sq);
    let alpha = 6.0 * PI * sigma / c;
    Ok((4.0 * alpha, ((9.0f64 / 8.0).ln() / alpha).min(0.5)))
}

/// `min_{d_T(x,0) ≤ R} K₁(x,0) − exp(−α d_T(x,0)^p)` on a grid; `p = 1` checks
/// the local condition, other `p` probe the conjectured stronger form.
pub fn local_decay_probe(lambda: &LambdaSeq, alpha: f64, p: f64, radius: f64, points: usize) -> f64 {
    (0..=points)
        .map(|i| {
            let t = radius * i as f64 / points as f64;
            lambda.kernel_1d(t) - (-alpha * t.powf(p)).exp()
        })
        .fold(f64::INFINITY, f64::min)
}

/// `log(1/Vol(R·B₁^d)) = log Γ(d+1) − d log(2R)`, clamped at 0.
fn log_inv_l1_ball(d: usize, radius: f64) -> f64 {
    (ln_gamma(d as f64 + 1.0) - d as f64 * (2.0 * radius).ln()).max(0.0)
}

/// Majorizing-measure integral `∫₀^∞ √(log 1/μ(B_K(x,r))) dr` for the uniform
/// measure, bounded by the small/medium/large radius split.
pub fn fernique_integral(d: usize, alpha: f64, r0: f64) -> f64 {
    let t = (2.0 * alpha * r0 * r0).min(2.0);
    let nodes = 256;
    // r = t·e^{−u}: smooth integrand on u ∈ [0, 60].
    let us: Vec<f64> = (0..nodes).map(|i| 60.0 * i as f64 / (nodes - 1) as f64).collect();
    let ys: Vec<f64> = us
        .iter()
        .map(|&u| {
            let r = t * (-u).exp();
            let radius = (r / (2.0 * alpha)).sqrt();
            log_inv_l1_ball(d, radius).sqrt() * r
        })
        .collect();
    let small = if t > 0.0 { trapezoid(&us, &ys) } else { 0.0 };
    let medium = (2.0 - t).max(0.0) * log_inv_l1_ball(d, r0).sqrt();
    small + medium
}

/// `C_Fernique · ∫₀^∞ √(log 1/μ(B_K(x,r))) dr` for `K_λ^d`, with `(α, R₀)`
/// supplied or derived from [`sufficient_alpha`].
pub fn fernique_bound(lambda: &LambdaSeq, d: usize, local: Option<(f64, f64)>) -> Result<f64> {
    let (alpha, r0) = match local {
        Some(v) => v,
        None => sufficient_alpha(lambda)?,
    };
    if alpha == 0.0 {
        return Ok(0.0);
    }
    if !(alpha > 0.0 && r0 > 0.0 && r0 <= 0.5) {
        return invalid("need alpha > 0 and 0 < R0 <= 1/2");
    }
    Ok(C_FERNIQUE * fernique_integral(d, alpha, r0))
}

/// `√(2/π) inf_grid √K(x,x) + 2 e_sup`.
pub fn expected_sup_bound_combine(k: &KernelHandle, e_sup: f64, grid: &[Vec<f64>]) -> Result<f64> {
    let mut inf = f64::INFINITY;
    for x in grid {
        inf = inf.min(kernel_eval(k, x, x)?.max(0.0));
    }
    if !inf.is_finite() {
        return invalid("grid must be nonempty");
    }
    Ok((2.0 / PI).sqrt() * inf.sqrt() + 2.0 * e_sup)
}
