//! Taylor polynomial approximation for classes of infinitely smooth functions
//! whose directional derivatives satisfy `‖D_v^k f‖_∞ ≤ |v|_p^k`.

use crate::error::{invalid, Result};
use crate::rng::RandomSource;
use crate::special::{binom, ln_gamma};
use std::f64::consts::E;

/// Exact partial derivatives `D^α f(x)` supplied by the caller.
pub trait DerivativeOracle {
    fn derivative(&self, alpha: &[u32], x: &[f64]) -> f64;
    /// Class parameter `p ∈ [1, ∞]`.
    fn class_p(&self) -> f64;
}

/// All multi-indices `α ∈ ℕ₀^d` with `|α|₁ ≤ k`, graded by degree.
pub fn multi_indices(d: usize, k: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; d];
    for deg in 0..=k {
        fill(&mut cur, 0, deg, &mut out);
    }
    out
}

fn fill(cur: &mut Vec<u32>, j: usize, left: u32, out: &mut Vec<Vec<u32>>) {
    if j + 1 == cur.len() {
        cur[j] = left;
        out.push(cur.clone());
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for v in (0..=left).rev() {
        cur[j] = v;
        fill(cur, j + 1, left - v, out);
    }
    cur[j] = 0;
}

/// `Σ_{|α|≤k} c_α (x − x₀)^α` with `x₀ = (½, …, ½)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorPolynomial {
    pub d: usize,
    pub k: u32,
    pub indices: Vec<Vec<u32>>,
    pub coeffs: Vec<f64>,
    pub evaluations: usize,
}

impl TaylorPolynomial {
    pub fn eval(&self, x: &[f64]) -> f64 {
        let h: Vec<f64> = x.iter().map(|v| v - 0.5).collect();
        let powers: Vec<Vec<f64>> = h
            .iter()
            .map(|&hj| (0..=self.k).scan(1.0, |acc, i| {
                let v = if i == 0 { 1.0 } else { *acc * hj };
                *acc = v;
                Some(v)
            }).collect())
            .collect();
        self.indices
            .iter()
            .zip(&self.coeffs)
            .map(|(a, c)| c * a.iter().enumerate().map(|(j, &aj)| powers[j][aj as usize]).product::<f64>())
            .sum()
    }
}

impl crate::monomc::Evaluable for TaylorPolynomial {
    fn eval(&self, x: &[f64]) -> f64 {
        TaylorPolynomial::eval(self, x)
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Degree-`k` Taylor polynomial at the center, from `C(d+k, d)` oracle calls.
pub fn taylor_approximate(f: &dyn DerivativeOracle, k: u32, d: usize) -> Result<TaylorPolynomial> {
    if d == 0 {
        return invalid("need d >= 1");
    }
    let count = binom((d as u64) + k as u64, d as u64);
    if count > 1e7 {
        return Err(crate::Error::Budget { what: "Taylor coefficients".into(), size: count as u128, cap: 10_000_000 });
    }
    let center = vec![0.5; d];
    let indices = multi_indices(d, k);
    let coeffs = indices
        .iter()
        .map(|a| f.derivative(a, &center) / a.iter().map(|&v| factorial(v)).product::<f64>())
        .collect();
    let evaluations = indices.len();
    Ok(TaylorPolynomial { d, k, indices, coeffs, evaluations })
}

/// `(d^{1/p}/2)^{k+1}/(k+1)!`.
pub fn taylor_error_bound(d: usize, k: u32, p: f64) -> f64 {
    let r = (d as f64).powf(1.0 / p) / 2.0;
    ((k as f64 + 1.0) * r.ln() - ln_gamma(k as f64 + 2.0)).exp()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorComplexity {
    pub k: u32,
    /// `C(d+k, d)`, the number of coefficients actually used.
    pub n: f64,
    /// `exp(log(d+1) max{log(1/ε)/log 2, e d^{1/p}})`.
    pub n_bound: f64,
}

/// `k = ⌊max{log(1/ε)/log 2, e d^{1/p}}⌋`.
pub fn taylor_complexity(eps: f64, d: usize, p: f64) -> Result<TaylorComplexity> {
    if !(eps > 0.0) || d == 0 || !(p >= 1.0) {
        return invalid("need eps > 0, d >= 1, p >= 1");
    }
    let m = ((1.0 / eps).ln() / 2f64.ln()).max(E * (d as f64).powf(1.0 / p));
    let k = m.floor() as u32;
    Ok(TaylorComplexity {
        k,
        n: binom(d as u64 + k as u64, d as u64),
        n_bound: ((d as f64 + 1.0).ln() * m).exp(),
    })
}

/// `D_v^k f(x) = Σ_{|α|=k} k!/α! v^α D^α f(x)` at random points and random
/// unit directions in `ℓ_p`; returns the largest ratio `|D_v^k f|/|v|_p^k`
/// seen over orders `1..=max_order`. Values above 1 indicate the oracle is
/// outside the class.
pub fn spot_check_class(f: &dyn DerivativeOracle, d: usize, max_order: u32, trials: usize, src: &mut RandomSource) -> f64 {
    let p = f.class_p();
    let mut worst: f64 = 0.0;
    let by_order: Vec<Vec<Vec<u32>>> = (1..=max_order)
        .map(|k| multi_indices(d, k).into_iter().filter(|a| a.iter().sum::<u32>() == k).collect())
        .collect();
    for _ in 0..trials {
        let x: Vec<f64> = (0..d).map(|_| src.uniform()).collect();
        let v: Vec<f64> = (0..d).map(|_| src.normal()).collect();
        let norm = crate::numerics::lp_norm(&v, p);
        let v: Vec<f64> = v.iter().map(|c| c / norm).collect();
        for (k, idx) in (1..=max_order).zip(&by_order) {
            let dv: f64 = idx
                .iter()
                .map(|a| {
                    let multinom = factorial(k) / a.iter().map(|&c| factorial(c)).product::<f64>();
                    let mono: f64 = a.iter().zip(&v).map(|(&c, &vj)| vj.powi(c as i32)).product();
                    multinom * mono * f.derivative(a, &x)
                })
                .sum();
            worst = worst.max(dv.abs());
        }
    }
    worst
}
