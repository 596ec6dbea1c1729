//! Monotone test functions and the adversarial families used in lower bounds.

use super::boolean::{BooleanTable, MAX_TABLE_DIM};
use super::Evaluable;
use crate::error::{invalid, Error, Result};
use crate::rng::RandomSource;
use crate::special::binom;

/// `lo` below the hyperplane `|x|₁ = d/2`, `hi` on or above it.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalSplit {
    pub d: usize,
    pub lo: f64,
    pub hi: f64,
}

impl Evaluable for DiagonalSplit {
    fn eval(&self, x: &[f64]) -> f64 {
        if 2.0 * x.iter().sum::<f64>() >= self.d as f64 { self.hi } else { self.lo }
    }
}

/// Restriction of the diagonal split to `{0,1}^d`, as a `±1` table.
pub fn boolean_diagonal_split(d: usize) -> Result<BooleanTable> {
    BooleanTable::from_fn(d, |m| if 2 * m.count_ones() as usize >= d { 1 } else { -1 })
}

/// `f|_{C_i} = (|i|₁ + δ_i)/(d(m−1)+1)` on the `m^d` grid, last interval closed.
#[derive(Clone, Debug)]
pub struct Staircase {
    pub d: usize,
    pub m: usize,
    pub delta: Vec<bool>,
}

impl Staircase {
    pub fn new(d: usize, m: usize, delta: Vec<bool>) -> Result<Self> {
        if m == 0 || d == 0 {
            return invalid("need m, d >= 1");
        }
        if delta.len() != m.pow(d as u32) {
            return invalid("delta must have one entry per cell");
        }
        Ok(Self { d, m, delta })
    }

    pub fn constant_delta(d: usize, m: usize, on: bool) -> Result<Self> {
        Self::new(d, m, vec![on; m.pow(d as u32)])
    }

    pub fn cell_of(&self, x: &[f64]) -> usize {
        x.iter().rev().fold(0, |acc, &v| {
            let i = ((v * self.m as f64).floor().max(0.0) as usize).min(self.m - 1);
            acc * self.m + i
        })
    }

    pub fn denominator(&self) -> f64 {
        (self.d * (self.m - 1) + 1) as f64
    }

    fn level(&self, cell: usize) -> usize {
        let mut t = cell;
        (0..self.d)
            .map(|_| {
                let v = t % self.m;
                t /= self.m;
                v
            })
            .sum()
    }

    /// Exact `L₁` distance to another staircase on the same grid.
    pub fn l1_distance(&self, other: &Staircase) -> f64 {
        let diff = self.delta.iter().zip(&other.delta).filter(|(a, b)| a != b).count();
        diff as f64 / self.delta.len() as f64 / self.denominator()
    }
}

impl Evaluable for Staircase {
    fn eval(&self, x: &[f64]) -> f64 {
        let c = self.cell_of(x);
        (self.level(c) + self.delta[c] as usize) as f64 / self.denominator()
    }
}

/// Fooling pair for an algorithm that samples at `points`: `δ ≡ 0` and
/// `δ = 1` on every cell that contains no sample. Both agree on all samples.
pub fn staircase_fooling_pair(d: usize, m: usize, points: &[Vec<f64>]) -> Result<(Staircase, Staircase)> {
    let f0 = Staircase::constant_delta(d, m, false)?;
    let mut delta = vec![true; f0.delta.len()];
    for p in points {
        delta[f0.cell_of(p)] = false;
    }
    Ok((f0, Staircase::new(d, m, delta)?))
}

/// The interior grid points `i/(m+1)`, `i ∈ {1..m}^d`.
pub fn interior_grid(d: usize, m: usize) -> Vec<Vec<f64>> {
    let total = m.pow(d as u32);
    (0..total)
        .map(|mut t| {
            (0..d)
                .map(|_| {
                    let v = (t % m + 1) as f64 / (m + 1) as f64;
                    t /= m;
                    v
                })
                .collect()
        })
        .collect()
}

/// Largest level-`t` slice enumerated explicitly.
pub const SLICE_CAP: f64 = (1u64 << 22) as f64;

/// `f_U(x) = 𝟙[|x|₁ > b or ∃u∈U: u ≤ x]` as `±1`, where `U` keeps each point
/// of the level-`t` slice independently with probability `p`.
#[derive(Clone, Debug)]
pub struct BooleanFU {
    pub d: usize,
    pub t: usize,
    pub b: usize,
    pub members: Vec<u64>,
}

impl BooleanFU {
    pub fn sample(d: usize, t: usize, b: usize, p: f64, src: &mut RandomSource) -> Result<Self> {
        if d > 63 || t > d || !(0.0..=1.0).contains(&p) {
            return invalid("need t <= d <= 63 and p in [0, 1]");
        }
        let size = binom(d as u64, t as u64);
        if size > SLICE_CAP {
            return Err(Error::Budget { what: "level-t slice".into(), size: size as u128, cap: SLICE_CAP as u128 });
        }
        let mut members = Vec::new();
        let mut u: u64 = if t == 0 { 0 } else { (1u64 << t) - 1 };
        loop {
            if src.bernoulli(p) {
                members.push(u);
            }
            if t == 0 || t == d {
                break;
            }
            // Next mask with the same popcount (Gosper's hack).
            let c = u & u.wrapping_neg();
            let r = u + c;
            u = (((r ^ u) >> 2) / c) | r;
            if u >> d != 0 {
                break;
            }
        }
        Ok(Self { d, t, b, members })
    }

    pub fn eval(&self, x: u64) -> i8 {
        let w = x.count_ones() as usize;
        let hit = w > self.b || (w >= self.t && self.members.iter().any(|&u| u & !x == 0));
        if hit { 1 } else { -1 }
    }

    /// Table form, only for `d ≤ 20`.
    pub fn to_table(&self) -> Result<BooleanTable> {
        if self.d > MAX_TABLE_DIM {
            return Err(Error::Budget { what: "truth table dimension".into(), size: self.d as u128, cap: MAX_TABLE_DIM as u128 });
        }
        let mut values = vec![-1i8; 1 << self.d];
        for (x, v) in values.iter_mut().enumerate() {
            if (x as u64).count_ones() as usize > self.b {
                *v = 1;
            }
        }
        for &u in &self.members {
            // Mark every superset of u.
            let free = !u & ((1u64 << self.d) - 1);
            let mut s = free;
            loop {
                values[(u | s) as usize] = 1;
                if s == 0 {
                    break;
                }
                s = (s - 1) & free;
            }
        }
        Ok(BooleanTable { d: self.d, values })
    }
}

/// A random monotone Boolean function in table form: `f_U` with random slice
/// level, threshold and density.
pub fn random_monotone_boolean(d: usize, src: &mut RandomSource) -> Result<BooleanTable> {
    let t = src.below(d + 1);
    let b = t + src.below(d + 1 - t);
    let p = src.uniform();
    BooleanFU::sample(d, t, b, p, src)?.to_table()
}

/// `f(x) = max_i (v_i if x ≥ c_i else lo)`, monotone for `v_i ≥ lo`.
#[derive(Clone, Debug)]
pub struct MonotoneStep {
    pub corners: Vec<Vec<f64>>,
    pub values: Vec<f64>,
    pub lo: f64,
}

impl Evaluable for MonotoneStep {
    fn eval(&self, x: &[f64]) -> f64 {
        self.corners
            .iter()
            .zip(&self.values)
            .filter(|(c, _)| c.iter().zip(x).all(|(ci, xi)| xi >= ci))
            .map(|(_, &v)| v)
            .fold(self.lo, f64::max)
    }
}

/// Random monotone step function into `[−1, 1]` with `corners` corners.
/// With `dyadic = Some(r)` the corners sit on the level-`r` grid, so the
/// function is constant on the level-`r` cells.
pub fn random_monotone_step(d: usize, corners: usize, dyadic: Option<u32>, src: &mut RandomSource) -> MonotoneStep {
    let cs = (0..corners)
        .map(|_| {
            (0..d)
                .map(|_| match dyadic {
                    Some(r) => src.below(1 << r) as f64 / (1u64 << r) as f64,
                    None => src.uniform(),
                })
                .collect()
        })
        .collect();
    let values = (0..corners).map(|_| 2.0 * src.uniform() - 1.0).collect();
    MonotoneStep { corners: cs, values, lo: -1.0 }
}

/// Draws `pairs` comparable pairs `x ≤ y` and returns the first with `f(x) > f(y) + tol`.
pub fn spot_check_monotone(
    f: &dyn Evaluable,
    d: usize,
    pairs: usize,
    tol: f64,
    src: &mut RandomSource,
) -> Option<(Vec<f64>, Vec<f64>)> {
    for _ in 0..pairs {
        let x: Vec<f64> = (0..d).map(|_| src.uniform()).collect();
        let y: Vec<f64> = x.iter().map(|&v| v + src.uniform() * (1.0 - v)).collect();
        if f.eval(&x) > f.eval(&y) + tol {
            return Some((x, y));
        }
    }
    None
}
