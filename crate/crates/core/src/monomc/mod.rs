//! Approximation of monotone functions on `[0,1]^d` and `{−1,+1}^d`.
//!
//! * [`grid`]: the deterministic midpoint-of-corners grid algorithm.
//! * [`boolean`]: Fourier transforms and the low-degree learner for Boolean functions.
//! * [`haar`]: tensor Haar wavelets, the Monte Carlo wavelet estimator and its fast evaluation.
//! * [`instances`]: monotone test and adversarial functions.

pub mod boolean;
pub mod grid;
pub mod haar;
pub mod instances;

/// Anything that can be evaluated on `[0,1]^d`.
pub trait Evaluable {
    fn eval(&self, x: &[f64]) -> f64;
}

impl<F: Fn(&[f64]) -> f64> Evaluable for F {
    fn eval(&self, x: &[f64]) -> f64 {
        self(x)
    }
}

/// `L₁([0,1]^d)` distance by the midpoint rule on `res^d` cells.
pub fn l1_distance(f: &dyn Evaluable, g: &dyn Evaluable, d: usize, res: usize) -> f64 {
    let total = res.pow(d as u32);
    let mut x = vec![0.0; d];
    let mut acc = 0.0;
    for mut idx in 0..total {
        for xj in x.iter_mut() {
            *xj = ((idx % res) as f64 + 0.5) / res as f64;
            idx /= res;
        }
        acc += (f.eval(&x) - g.eval(&x)).abs();
    }
    acc / total as f64
}
