//! Tensor Haar wavelets on `[0,1]^d` and the Monte Carlo wavelet estimator.
//!
//! Dyadic intervals are `I_{l,i} = [i 2^{−l}, (i+1) 2^{−l})`, with the last
//! interval of each level closed on the right.

use super::Evaluable;
use crate::error::{invalid, Error, Result};
use crate::rng::RandomSource;
use crate::special::binom;

pub const DEFAULT_INDEX_CAP: usize = 1 << 22;

/// Per-axis indices `α_j = 2^{λ_j} + κ_j`, with `α_j = 0` the constant.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WaveletIndex(pub Vec<u32>);

impl WaveletIndex {
    pub fn zero(d: usize) -> Self {
        Self(vec![0; d])
    }

    /// `(λ_j, κ_j)`, or `None` for an inactive axis.
    pub fn level(&self, j: usize) -> Option<(u32, u32)> {
        level_of(self.0[j])
    }

    /// `|α|₀`.
    pub fn support(&self) -> usize {
        self.0.iter().filter(|&&a| a != 0).count()
    }

    /// `|λ|₊ = Σ max(0, λ_j)`.
    pub fn lambda_plus(&self) -> u32 {
        self.0.iter().filter_map(|&a| level_of(a)).map(|(l, _)| l).sum()
    }
}

fn level_of(a: u32) -> Option<(u32, u32)> {
    if a == 0 {
        None
    } else {
        let l = 31 - a.leading_zeros();
        Some((l, a - (1 << l)))
    }
}

/// Index of the level-`l` dyadic interval containing `x`.
pub fn dyadic_cell(x: f64, l: u32) -> usize {
    let side = 1usize << l;
    ((x * side as f64).floor().max(0.0) as usize).min(side - 1)
}

/// One-dimensional Haar function `h_a(x)`.
pub fn haar_1d(a: u32, x: f64) -> f64 {
    match level_of(a) {
        None => 1.0,
        Some((l, k)) => {
            let c = dyadic_cell(x, l + 1);
            let amp = (2f64).powf(l as f64 / 2.0);
            if c == 2 * k as usize + 1 {
                amp
            } else if c == 2 * k as usize {
                -amp
            } else {
                0.0
            }
        }
    }
}

/// `h_a` on the level-`r` cell `c`, for `a < 2^r`.
fn haar_on_cell(a: u32, c: usize, r: u32) -> f64 {
    match level_of(a) {
        None => 1.0,
        Some((l, k)) => {
            let sub = c >> (r - l - 1);
            let amp = (2f64).powf(l as f64 / 2.0);
            if sub == 2 * k as usize + 1 {
                amp
            } else if sub == 2 * k as usize {
                -amp
            } else {
                0.0
            }
        }
    }
}

pub fn haar_eval(alpha: &WaveletIndex, x: &[f64]) -> f64 {
    alpha.0.iter().zip(x).map(|(&a, &xj)| haar_1d(a, xj)).product()
}

/// `#A = Σ_{l≤k} C(d,l) (2^r − 1)^l`.
pub fn index_set_size(d: usize, k: usize, r: u32) -> f64 {
    let w = (2f64).powi(r as i32) - 1.0;
    (0..=k.min(d)).map(|l| binom(d as u64, l as u64) * w.powi(l as i32)).sum()
}

/// `2^{rk} (ed/k)^k`.
pub fn index_set_size_bound(d: usize, k: usize, r: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let (df, kf) = (d as f64, k as f64);
    (kf * (r as f64 * std::f64::consts::LN_2 + 1.0 + (df / kf).ln())).exp()
}

/// All indices with `|α|₀ ≤ k` and `λ_j < r`, by support size then lexicographically.
pub fn enumerate_index_set(d: usize, k: usize, r: u32, cap: usize) -> Result<Vec<WaveletIndex>> {
    if k > d || r == 0 || r > 16 {
        return invalid("need 0 <= k <= d and 1 <= r <= 16");
    }
    let size = index_set_size(d, k, r);
    if size > cap as f64 {
        return Err(Error::Budget { what: "wavelet index set".into(), size: size as u128, cap: cap as u128 });
    }
    let top = (1u32 << r) - 1;
    let mut out = vec![WaveletIndex::zero(d)];
    for l in 1..=k {
        let mut support: Vec<usize> = (0..l).collect();
        loop {
            let mut vals = vec![1u32; l];
            loop {
                let mut a = vec![0u32; d];
                for (&j, &v) in support.iter().zip(&vals) {
                    a[j] = v;
                }
                out.push(WaveletIndex(a));
                let mut p = l;
                while p > 0 && vals[p - 1] == top {
                    vals[p - 1] = 1;
                    p -= 1;
                }
                if p == 0 {
                    break;
                }
                vals[p - 1] += 1;
            }
            let mut p = l;
            while p > 0 && support[p - 1] == d - l + p - 1 {
                p -= 1;
            }
            if p == 0 {
                break;
            }
            support[p - 1] += 1;
            for q in p..l {
                support[q] = support[q - 1] + 1;
            }
        }
    }
    Ok(out)
}

/// Full coefficient table of the cell-average projection `f_r`, laid out
/// like the cells: axis 0 varies fastest, entry `α_j` in place of the cell index.
#[derive(Clone, Debug)]
pub struct HaarTable {
    pub d: usize,
    pub r: u32,
    pub coeffs: Vec<f64>,
    /// Cell averages of `f` that the coefficients were computed from.
    pub cell_means: Vec<f64>,
}

impl HaarTable {
    fn flat(&self, a: &[u32]) -> usize {
        let side = 1usize << self.r;
        a.iter().rev().fold(0, |acc, &v| acc * side + v as usize)
    }

    pub fn get(&self, alpha: &WaveletIndex) -> f64 {
        self.coeffs[self.flat(&alpha.0)]
    }

    /// `Σ f̃(α)²`.
    pub fn energy(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    /// `‖f_r‖₂²` from the cell averages.
    pub fn projection_norm_sq(&self) -> f64 {
        self.cell_means.iter().map(|c| c * c).sum::<f64>() / self.cell_means.len() as f64
    }

    fn index_at(&self, mut flat: usize) -> Vec<u32> {
        let side = 1usize << self.r;
        (0..self.d)
            .map(|_| {
                let v = (flat % side) as u32;
                flat /= side;
                v
            })
            .collect()
    }

    /// `Σ_{|α|₀>k} f̃(α)²`.
    pub fn tail_mass(&self, k: usize) -> f64 {
        (0..self.coeffs.len())
            .filter(|&i| self.index_at(i).iter().filter(|&&a| a != 0).count() > k)
            .map(|i| self.coeffs[i] * self.coeffs[i])
            .sum()
    }

    /// `Σ f̃(α) ψ_α` evaluated on every level-`r` cell.
    pub fn reconstruct(&self) -> Vec<f64> {
        let side = 1usize << self.r;
        let synth: Vec<f64> = (0..side * side)
            .map(|i| {
                let (c, a) = (i / side, i % side);
                haar_on_cell(a as u32, c, self.r)
            })
            .collect();
        tensor_apply(&self.coeffs, self.d, side, &synth)
    }
}

/// Applies the `side × side` matrix `mat` (row-major) along every axis.
fn tensor_apply(data: &[f64], d: usize, side: usize, mat: &[f64]) -> Vec<f64> {
    let mut cur = data.to_vec();
    let mut next = vec![0.0; cur.len()];
    let mut stride = 1;
    for _ in 0..d {
        for base in 0..cur.len() {
            if (base / stride) % side != 0 {
                continue;
            }
            for out in 0..side {
                let row = &mat[out * side..(out + 1) * side];
                next[base + out * stride] = (0..side).map(|i| row[i] * cur[base + i * stride]).sum();
            }
        }
        std::mem::swap(&mut cur, &mut next);
        stride *= side;
    }
    cur
}

/// Exact Haar coefficients of the projection of `f` onto level-`r` step
/// functions. Each cell average uses a `quad^d` midpoint rule, exact when `f`
/// is constant on the cells.
pub fn haar_transform_bruteforce(f: &dyn Evaluable, r: u32, d: usize, quad: usize) -> Result<HaarTable> {
    if r == 0 || d == 0 || quad == 0 {
        return invalid("need r, d, quad >= 1");
    }
    if d as u32 * r > 20 {
        return Err(Error::Budget { what: "cells for d*r".into(), size: (d as u128) * r as u128, cap: 20 });
    }
    let side = 1usize << r;
    let cells = side.pow(d as u32);
    let fine = side * quad;
    let sub = quad.pow(d as u32);
    let mut x = vec![0.0; d];
    let cell_means: Vec<f64> = (0..cells)
        .map(|c| {
            let mut acc = 0.0;
            for s in 0..sub {
                let (mut cc, mut ss) = (c, s);
                for xj in x.iter_mut() {
                    let pos = (cc % side) * quad + ss % quad;
                    *xj = (pos as f64 + 0.5) / fine as f64;
                    cc /= side;
                    ss /= quad;
                }
                acc += f.eval(&x);
            }
            acc / sub as f64
        })
        .collect();
    let scale = 1.0 / side as f64;
    let analysis: Vec<f64> = (0..side * side)
        .map(|i| {
            let (a, c) = (i / side, i % side);
            haar_on_cell(a as u32, c, r) * scale
        })
        .collect();
    let coeffs = tensor_apply(&cell_means, d, side, &analysis);
    Ok(HaarTable { d, r, coeffs, cell_means })
}

/// `Σ_{|α|₀>k, λ<r} f̃(α)²`.
pub fn wavelet_tail_mass(f: &dyn Evaluable, k: usize, r: u32, d: usize, quad: usize) -> Result<f64> {
    Ok(haar_transform_bruteforce(f, r, d, quad)?.tail_mass(k))
}

/// `√(dr)/(k+1)`.
pub fn wavelet_tail_bound(d: usize, k: usize, r: u32) -> f64 {
    ((d as f64) * r as f64).sqrt() / (k as f64 + 1.0)
}

/// Output of the wavelet Monte Carlo algorithm. The samples are retained so
/// the approximant can also be evaluated through [`point_influence`].
#[derive(Clone, Debug)]
pub struct HaarApproximant {
    pub d: usize,
    pub k: usize,
    pub r: u32,
    pub indices: Vec<WaveletIndex>,
    pub coeffs: Vec<f64>,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<f64>,
}

impl HaarApproximant {
    pub fn n(&self) -> usize {
        self.points.len()
    }

    pub fn coeff(&self, alpha: &WaveletIndex) -> Option<f64> {
        self.indices.iter().position(|a| a == alpha).map(|i| self.coeffs[i])
    }

    /// `Σ_i f(X_i) χ(b_i)/n`, equal to the basis sum without touching the coefficients.
    pub fn eval_fast(&self, x: &[f64]) -> f64 {
        let n = self.n();
        let table = chi_table(self.d, self.k, self.r);
        let qc: Vec<usize> = x.iter().map(|&v| dyadic_cell(v, self.r)).collect();
        self.points
            .iter()
            .zip(&self.values)
            .map(|(p, &fv)| {
                let b = p.iter().zip(&qc).filter(|(&pj, &c)| dyadic_cell(pj, self.r) == c).count();
                fv * table[b]
            })
            .sum::<f64>()
            / n as f64
    }
}

fn axis_tables(x: &[f64], r: u32) -> Vec<Vec<f64>> {
    let side = 1u32 << r;
    x.iter().map(|&v| (0..side).map(|a| haar_1d(a, v)).collect()).collect()
}

fn basis_row<'a>(indices: &'a [WaveletIndex], tables: &'a [Vec<f64>]) -> impl Iterator<Item = f64> + 'a {
    indices.iter().map(move |alpha| {
        alpha.0.iter().enumerate().filter(|(_, &a)| a != 0).map(|(j, &a)| tables[j][a as usize]).product()
    })
}

impl Evaluable for HaarApproximant {
    fn eval(&self, x: &[f64]) -> f64 {
        let t = axis_tables(x, self.r);
        basis_row(&self.indices, &t).zip(&self.coeffs).map(|(p, c)| p * c).sum()
    }
}

/// `g̃(α) = (1/n) Σ_i ψ_α(X_i) f(X_i)` over the index set with `|α|₀ ≤ k`, `λ < r`.
pub fn haar_mc_approximate(
    f: &dyn Evaluable,
    d: usize,
    n: usize,
    k: usize,
    r: u32,
    src: &mut RandomSource,
) -> Result<HaarApproximant> {
    if n == 0 {
        return invalid("need n >= 1");
    }
    let indices = enumerate_index_set(d, k, r, DEFAULT_INDEX_CAP)?;
    let mut coeffs = vec![0.0; indices.len()];
    let mut points = Vec::with_capacity(n);
    let mut values = Vec::with_capacity(n);
    for _ in 0..n {
        let x: Vec<f64> = (0..d).map(|_| src.uniform()).collect();
        let fx = f.eval(&x);
        let t = axis_tables(&x, r);
        for (c, p) in coeffs.iter_mut().zip(basis_row(&indices, &t)) {
            *c += p * fx;
        }
        points.push(x);
        values.push(fx);
    }
    coeffs.iter_mut().for_each(|c| *c /= n as f64);
    Ok(HaarApproximant { d, k, r, indices, coeffs, points, values })
}

/// `d/2^{r+1} + √(√(dr)/(k+1) + #A/n)`.
pub fn haar_mc_bound(d: usize, k: usize, r: u32, n: usize) -> f64 {
    d as f64 / (2f64).powi(r as i32 + 1) + (wavelet_tail_bound(d, k, r) + index_set_size(d, k, r) / n as f64).sqrt()
}

/// `d/2^{r+1} + 2√(dr)/(k+1) + 2#A/n`, for sign-valued targets.
pub fn haar_sign_bound(d: usize, k: usize, r: u32, n: usize) -> f64 {
    d as f64 / (2f64).powi(r as i32 + 1) + 2.0 * wavelet_tail_bound(d, k, r) + 2.0 * index_set_size(d, k, r) / n as f64
}

/// Pointwise sign of an approximant, with `sgn 0 = +1`.
#[derive(Clone, Debug)]
pub struct SignRefined<E>(pub E);

impl<E: Evaluable> Evaluable for SignRefined<E> {
    fn eval(&self, x: &[f64]) -> f64 {
        if self.0.eval(x) >= 0.0 { 1.0 } else { -1.0 }
    }
}

pub fn sign_refine<E: Evaluable>(g: E) -> SignRefined<E> {
    SignRefined(g)
}

/// `χ(b) = Σ_{l≤b∧k} C(b,l)(2^r−1)^l Σ_{m≤(d−b)∧(k−l)} C(d−b,m)(−1)^m`.
pub fn chi(b: usize, d: usize, k: usize, r: u32) -> f64 {
    let w = (2f64).powi(r as i32) - 1.0;
    (0..=b.min(k))
        .map(|l| {
            let inner: f64 = (0..=(d - b).min(k - l))
                .map(|m| binom((d - b) as u64, m as u64) * if m % 2 == 0 { 1.0 } else { -1.0 })
                .sum();
            binom(b as u64, l as u64) * w.powi(l as i32) * inner
        })
        .sum()
}

fn chi_table(d: usize, k: usize, r: u32) -> Vec<f64> {
    (0..=d).map(|b| chi(b, d, k, r)).collect()
}

/// `χ(b)/n` where `b` counts the axes on which sample and query share a level-`r` cell.
pub fn point_influence(sample: &[f64], query: &[f64], n: usize, k: usize, r: u32) -> f64 {
    let b = sample.iter().zip(query).filter(|(&s, &q)| dyadic_cell(s, r) == dyadic_cell(q, r)).count();
    chi(b, sample.len(), k, r) / n as f64
}
