use super::Evaluable;
use crate::error::{invalid, Result};

/// Piecewise constant function on the `(m+1)^d` subcubes of side `1/(m+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridApproximant {
    pub m: usize,
    pub d: usize,
    pub values: Vec<f64>,
    pub samples_used: usize,
}

impl GridApproximant {
    pub fn cell_of(&self, x: &[f64]) -> usize {
        let side = self.m + 1;
        x.iter().rev().fold(0, |acc, &v| {
            let i = ((v * side as f64).floor() as isize).clamp(0, self.m as isize) as usize;
            acc * side + i
        })
    }
}

impl Evaluable for GridApproximant {
    fn eval(&self, x: &[f64]) -> f64 {
        self.values[self.cell_of(x)]
    }
}

/// `g|_{C_i} = ½[f(i/(m+1)) + f((i+1)/(m+1))]`.
///
/// Only the `m^d` interior grid points are sampled: a lower corner on a face
/// `x_j = 0` is replaced by `range.0`, an upper corner on a face `x_j = 1` by
/// `range.1`.
pub fn det_grid_approximate(
    f: &dyn Evaluable,
    m: usize,
    d: usize,
    range: (f64, f64),
) -> Result<GridApproximant> {
    if m == 0 || d == 0 {
        return invalid("need m >= 1 and d >= 1");
    }
    let side = m + 1;
    let interior_total = m.checked_pow(d as u32).ok_or_else(|| crate::Error::InvalidArgument("grid too large".into()))?;
    // Interior samples indexed by i ∈ {1..m}^d, stored with offset 1.
    let mut samples = vec![0.0; interior_total];
    let mut x = vec![0.0; d];
    for (idx, s) in samples.iter_mut().enumerate() {
        let mut t = idx;
        for xj in x.iter_mut() {
            *xj = ((t % m) + 1) as f64 / side as f64;
            t /= m;
        }
        *s = f.eval(&x);
    }
    let corner = |i: &[usize], upper: bool| -> f64 {
        if !upper && i.iter().any(|&v| v == 0) {
            return range.0;
        }
        if upper && i.iter().any(|&v| v + 1 == side) {
            return range.1;
        }
        let off = if upper { 0 } else { 1 };
        let idx = i.iter().rev().fold(0, |acc, &v| acc * m + (v - off));
        samples[idx]
    };
    let total = side.pow(d as u32);
    let mut values = vec![0.0; total];
    let mut i = vec![0usize; d];
    for (cell, val) in values.iter_mut().enumerate() {
        let mut t = cell;
        for ij in i.iter_mut() {
            *ij = t % side;
            t /= side;
        }
        *val = 0.5 * (corner(&i, false) + corner(&i, true));
    }
    Ok(GridApproximant { m, d, values, samples_used: interior_total })
}

/// `d/(2(m+1))` times the width of the range.
pub fn det_grid_error_bound(m: usize, d: usize, range: (f64, f64)) -> f64 {
    d as f64 / (2.0 * (m + 1) as f64) * (range.1 - range.0)
}

/// `½(1 − n/m^d)/(d(m−1)+1)`.
pub fn fooling_lower_bound(n: usize, m: usize, d: usize) -> f64 {
    let cells = (m as f64).powi(d as i32);
    0.5 * (1.0 - n as f64 / cells).max(0.0) / (d as f64 * (m as f64 - 1.0) + 1.0)
}
