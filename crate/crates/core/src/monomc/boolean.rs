//! Boolean functions on `{−1,+1}^d`.
//!
//! Points are encoded as bit masks: bit `j` set means `x_j = +1`. Truth
//! tables list the points in lexicographic order of `(b_1, …, b_d)` with
//! `b_1` most significant, so table position `i` has `x_1 = +1` iff the
//! top bit of `i` is set; [`BooleanTable::mask_of_position`] converts.

use crate::error::{invalid, Error, Result};
use crate::rng::RandomSource;
use crate::special::binom;

pub const MAX_TABLE_DIM: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BooleanTable {
    pub d: usize,
    /// `values[mask]`, each `±1`.
    pub values: Vec<i8>,
}

impl BooleanTable {
    pub fn from_fn(d: usize, f: impl Fn(u64) -> i8) -> Result<Self> {
        if d > MAX_TABLE_DIM {
            return Err(Error::Budget { what: "truth table dimension".into(), size: d as u128, cap: MAX_TABLE_DIM as u128 });
        }
        let values: Vec<i8> = (0..1u64 << d).map(|m| if f(m) >= 0 { 1 } else { -1 }).collect();
        Ok(Self { d, values })
    }

    pub fn mask_of_position(d: usize, pos: u64) -> u64 {
        (0..d).fold(0, |acc, j| acc | (((pos >> (d - 1 - j)) & 1) << j))
    }

    pub fn eval(&self, mask: u64) -> i8 {
        self.values[mask as usize]
    }

    /// Exhaustive check that `f` is nondecreasing along every edge.
    pub fn is_monotone(&self) -> bool {
        let n = self.values.len() as u64;
        (0..n).all(|m| (0..self.d).all(|j| m >> j & 1 == 1 || self.values[m as usize] <= self.values[(m | 1 << j) as usize]))
    }

    /// Bit string over table positions, `1` for `+1`.
    pub fn to_bits(&self) -> String {
        (0..self.values.len() as u64)
            .map(|pos| if self.eval(Self::mask_of_position(self.d, pos)) > 0 { '1' } else { '0' })
            .collect()
    }

    /// Fraction of points where the tables differ.
    pub fn dist(&self, other: &BooleanTable) -> f64 {
        let diff = self.values.iter().zip(&other.values).filter(|(a, b)| a != b).count();
        diff as f64 / self.values.len() as f64
    }
}

/// `f̂(α) = 2^{−d} Σ_x f(x) Π_{j∈α} x_j`, indexed by the mask of `α`, via the
/// fast Walsh–Hadamard butterfly.
pub fn boolean_fourier_transform(f: &BooleanTable) -> Result<Vec<f64>> {
    if f.d > MAX_TABLE_DIM {
        return invalid("dimension too large for a full transform");
    }
    let mut a: Vec<f64> = f.values.iter().map(|&v| v as f64).collect();
    let n = a.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (u, v) = (a[j], a[j + h]);
                a[j] = u + v;
                a[j + h] = v - u;
            }
        }
        h *= 2;
    }
    let scale = 1.0 / n as f64;
    a.iter_mut().for_each(|v| *v *= scale);
    Ok(a)
}

/// `Σ_{|α|>k} f̂(α)²` for a monotone `f` (checked exhaustively up to d = 12).
pub fn boolean_tail_mass(f: &BooleanTable, k: usize) -> Result<f64> {
    if f.d <= 12 && !f.is_monotone() {
        return invalid("function is not monotone");
    }
    let coef = boolean_fourier_transform(f)?;
    Ok(coef
        .iter()
        .enumerate()
        .filter(|(m, _)| (*m as u64).count_ones() as usize > k)
        .map(|(_, c)| c * c)
        .sum())
}

/// `#A = Σ_{l≤k} C(d,l)`.
pub fn low_degree_count(d: usize, k: usize) -> f64 {
    (0..=k.min(d)).map(|l| binom(d as u64, l as u64)).sum()
}

/// All masks with at most `k` bits among `d`, in increasing degree.
pub fn low_degree_masks(d: usize, k: usize) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut frontier = vec![0u64];
    for _ in 0..k.min(d) {
        let mut next = Vec::new();
        for &m in &frontier {
            let top = if m == 0 { 0 } else { 64 - m.leading_zeros() as usize };
            for j in top..d {
                next.push(m | 1 << j);
            }
        }
        out.extend(&next);
        frontier = next;
    }
    out
}

/// Output `g = sgn h` of the low-degree learner (`sgn 0 = +1`).
#[derive(Clone, Debug)]
pub struct BooleanHypothesis {
    pub d: usize,
    pub masks: Vec<u64>,
    pub coeffs: Vec<f64>,
}

impl BooleanHypothesis {
    pub fn h(&self, x: u64) -> f64 {
        self.masks
            .iter()
            .zip(&self.coeffs)
            .map(|(&m, &c)| if (m & !x).count_ones() % 2 == 0 { c } else { -c })
            .sum()
    }

    pub fn eval(&self, x: u64) -> i8 {
        if self.h(x) >= 0.0 { 1 } else { -1 }
    }

    pub fn to_table(&self) -> Result<BooleanTable> {
        BooleanTable::from_fn(self.d, |m| self.eval(m))
    }
}

fn chi(mask: u64, x: u64) -> f64 {
    // Π_{j∈α} x_j with x_j = −1 where the bit of x is clear.
    if (mask & !x).count_ones() % 2 == 0 { 1.0 } else { -1.0 }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sampling {
    Uniform,
    /// For `n = 2^j`: the first `j` coordinates of point `i` are the bits of
    /// `i`, the remaining ones uniform.
    Stratified,
}

/// Estimates `ĥ(α) = (1/n) Σ_i χ_α(X_i) f(X_i)` for `|α| ≤ k`.
pub fn boolean_fourier_learn(
    d: usize,
    f: &dyn Fn(u64) -> i8,
    n: usize,
    k: usize,
    sampling: Sampling,
    src: &mut RandomSource,
) -> Result<BooleanHypothesis> {
    if n == 0 || k == 0 || k > d || d > 63 {
        return invalid("need n >= 1, 1 <= k <= d <= 63");
    }
    let strat_bits = match sampling {
        Sampling::Uniform => 0,
        Sampling::Stratified => {
            if !n.is_power_of_two() {
                return invalid("stratified sampling needs n = 2^j");
            }
            (n.trailing_zeros() as usize).min(d)
        }
    };
    let masks = low_degree_masks(d, k);
    let mut coeffs = vec![0.0; masks.len()];
    for i in 0..n {
        let mut x = 0u64;
        for j in 0..d {
            let bit = if j < strat_bits { (i >> j) as u64 & 1 } else { src.next_bit() };
            x |= bit << j;
        }
        let y = f(x) as f64;
        for (c, &m) in coeffs.iter_mut().zip(&masks) {
            *c += chi(m, x) * y;
        }
    }
    coeffs.iter_mut().for_each(|c| *c /= n as f64);
    Ok(BooleanHypothesis { d, masks, coeffs })
}

/// `√d/(k+1) + exp(k(1 + log(d/k)))/n`.
pub fn boolean_learn_bound(d: usize, k: usize, n: usize) -> f64 {
    let (df, kf) = (d as f64, k as f64);
    df.sqrt() / (kf + 1.0) + (kf * (1.0 + (df / kf).ln())).exp() / n as f64
}

trait NextBit {
    fn next_bit(&mut self) -> u64;
}

impl NextBit for RandomSource {
    fn next_bit(&mut self) -> u64 {
        use rand::RngCore;
        (self.next_u32() >> 31) as u64
    }
}
