//! Recovery of vectors in `ℓ_p^M` measured in `ℓ_q^M`.

use crate::error::{invalid, Result};
use crate::gauss::{expected_norm_estimate, GaussVecSpec};
use crate::numerics::{lp_norm, Welford};
use crate::report::{Cell, ExperimentReport};
use crate::rng::RandomSource;
use nalgebra::{DMatrix, DVector};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqProblem {
    pub big_m: usize,
    pub p: f64,
    pub q: f64,
}

/// The sketch `N` with `N_ij = X_ij/√n`.
#[derive(Clone, Debug)]
pub struct SketchInfo {
    pub entries: DMatrix<f64>,
}

fn recip(p: f64) -> f64 {
    if p.is_infinite() { 0.0 } else { 1.0 / p }
}

/// Error of keeping the first `n` coordinates: `(M−n)^{1/q−1/p}` for `q ≤ p`.
pub fn det_truncation_error(big_m: usize, n: usize, p: f64, q: f64) -> Result<f64> {
    if q > p {
        return invalid(format!("q = {q} > p = {p}: formula needs q <= p"));
    }
    if n > big_m {
        return invalid("n exceeds M");
    }
    if n == big_m {
        return Ok(0.0);
    }
    Ok(((big_m - n) as f64).powf(recip(q) - recip(p)))
}

/// Worst-case error `√((M−n)/M)` of `ℓ₂^M ↪ ℓ_∞^M` with `n` linear functionals.
pub fn smolyak_error(big_m: usize, n: usize) -> Result<f64> {
    if n > big_m || big_m == 0 {
        return invalid("need 0 <= n <= M, M >= 1");
    }
    Ok(((big_m - n) as f64 / big_m as f64).sqrt())
}

pub fn draw_sketch(m: usize, n: usize, src: &mut RandomSource) -> SketchInfo {
    let s = 1.0 / (n as f64).sqrt();
    SketchInfo { entries: DMatrix::from_fn(n, m, |_, _| src.normal() * s) }
}

/// The rank-`n` linear method `x ↦ NᵀNx`.
pub fn fundamental_mc_apply(
    x: &[f64],
    n: usize,
    src: &mut RandomSource,
) -> Result<(Vec<f64>, SketchInfo)> {
    if n == 0 {
        return invalid("n must be at least 1");
    }
    let info = draw_sketch(x.len(), n, src);
    let xv = DVector::from_column_slice(x);
    let out = info.entries.transpose() * (&info.entries * xv);
    Ok((out.as_slice().to_vec(), info))
}

/// Canonical basis plus `extra` random unit vectors.
pub fn probe_set(m: usize, extra: usize, src: &mut RandomSource) -> DMatrix<f64> {
    let mut probes = DMatrix::zeros(m, m + extra);
    for i in 0..m {
        probes[(i, i)] = 1.0;
    }
    for k in 0..extra {
        let v = DVector::from_vec(src.normals(m)).normalize();
        probes.set_column(m + k, &v);
    }
    probes
}

/// Error curve of the fundamental method on `ℓ₂^M ↪ ℓ_q^M`.
///
/// For every `n` the mean error over `reps` sketches is computed for each
/// probe input (canonical basis and 32 random unit vectors); the worst probe
/// is reported against `2Ê‖X‖_q/√n`.
pub fn mc_error_curve(
    problem: SeqProblem,
    n_list: &[usize],
    reps: usize,
    src: &mut RandomSource,
) -> Result<ExperimentReport> {
    if problem.p != 2.0 {
        return invalid("the fundamental method needs p = 2");
    }
    if reps < 2 || n_list.contains(&0) {
        return invalid("need reps >= 2 and n >= 1");
    }
    let m = problem.big_m;
    let probes = probe_set(m, 32, &mut src.substream(0));
    let norm = expected_norm_estimate(
        GaussVecSpec::new(m, problem.q)?,
        20_000,
        &mut src.substream(1),
    )?;
    let mut report =
        ExperimentReport::standard("seqspace-error", src.seed(), &["M", "q", "n", "worst_probe"]);
    for (idx, &n) in n_list.iter().enumerate() {
        let mut sub = src.substream(100 + idx as u64);
        let mut stats = vec![Welford::default(); probes.ncols()];
        for _ in 0..reps {
            let sk = draw_sketch(m, n, &mut sub);
            let approx = sk.entries.transpose() * (&sk.entries * &probes);
            for (k, st) in stats.iter_mut().enumerate() {
                let diff: Vec<f64> =
                    (0..m).map(|i| probes[(i, k)] - approx[(i, k)]).collect();
                st.push(lp_norm(&diff, problem.q));
            }
        }
        let (worst, st) = stats
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.mean().total_cmp(&b.1.mean()))
            .unwrap();
        let bound = 2.0 * norm.mean / (n as f64).sqrt();
        let pass = st.mean() <= bound + 3.0 * st.stderr();
        report.push(
            vec![Cell::from(m), Cell::from(problem.q), Cell::from(n), Cell::from(worst)],
            st.mean(),
            st.stderr(),
            bound,
            pass,
        );
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bernstein {
    Known(f64),
    Unknown,
}

/// Bernstein numbers in the regimes with exact closed forms.
pub fn bernstein_closed_form(problem: SeqProblem, m: usize) -> Result<Bernstein> {
    if m == 0 || m > problem.big_m {
        return invalid("need 1 <= m <= M");
    }
    let (p, q) = (problem.p, problem.q);
    Ok(if p == q {
        Bernstein::Known(1.0)
    } else if p == 1.0 && q == 2.0 {
        Bernstein::Known(1.0 / (m as f64).sqrt())
    } else if p == 2.0 && q.is_infinite() && m == problem.big_m {
        Bernstein::Known(1.0 / (m as f64).sqrt())
    } else {
        Bernstein::Unknown
    })
}

#[derive(Clone, Debug)]
pub struct HomogeneousOutput {
    pub output: Vec<f64>,
    pub kept: usize,
}

/// Keeps each coordinate independently with probability `n̄/m`.
pub fn homogeneous_coordinate_method(
    x: &[f64],
    nbar: f64,
    src: &mut RandomSource,
) -> Result<HomogeneousOutput> {
    let m = x.len();
    if !(0.0..=m as f64).contains(&nbar) {
        return invalid(format!("nbar = {nbar} outside [0, {m}]"));
    }
    let prob = if m == 0 { 0.0 } else { nbar / m as f64 };
    let mut kept = 0;
    let output = x
        .iter()
        .map(|&v| {
            if src.uniform() < prob {
                kept += 1;
                v
            } else {
                0.0
            }
        })
        .collect();
    Ok(HomogeneousOutput { output, kept })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncation_examples() {
        let inf = f64::INFINITY;
        assert_eq!(det_truncation_error(4, 3, inf, 1.0).unwrap(), 1.0);
        assert_eq!(det_truncation_error(5, 5, 2.0, 1.0).unwrap(), 0.0);
        assert_eq!(det_truncation_error(8, 4, 2.0, 2.0).unwrap(), 1.0);
        assert!((det_truncation_error(10, 1, 2.0, 1.0).unwrap() - 3.0).abs() < 1e-12);
        assert!(det_truncation_error(8, 4, 1.0, 2.0).is_err());
    }

    #[test]
    fn smolyak_examples() {
        assert!((smolyak_error(2, 1).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(smolyak_error(7, 7).unwrap(), 0.0);
        assert!((smolyak_error(1024, 512).unwrap() - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn bernstein_examples() {
        let pr = |p, q| SeqProblem { big_m: 8, p, q };
        assert_eq!(bernstein_closed_form(pr(1.0, 2.0), 4).unwrap(), Bernstein::Known(0.5));
        assert_eq!(bernstein_closed_form(pr(2.0, 2.0), 3).unwrap(), Bernstein::Known(1.0));
        assert_eq!(
            bernstein_closed_form(pr(2.0, f64::INFINITY), 8).unwrap(),
            Bernstein::Known(1.0 / 8f64.sqrt())
        );
        assert_eq!(bernstein_closed_form(pr(1.0, 4.0), 2).unwrap(), Bernstein::Unknown);
    }

    #[test]
    fn fundamental_zero_and_rejects() {
        let mut src = RandomSource::new(3, 0);
        let (out, info) = fundamental_mc_apply(&[0.0; 5], 3, &mut src).unwrap();
        assert!(out.iter().all(|&v| v == 0.0));
        assert_eq!(info.entries.shape(), (3, 5));
        assert!(fundamental_mc_apply(&[1.0], 0, &mut src).is_err());
        let bad = SeqProblem { big_m: 4, p: 1.0, q: 2.0 };
        assert!(mc_error_curve(bad, &[2], 10, &mut src).is_err());
    }

    #[test]
    fn homogeneous_extremes() {
        let mut src = RandomSource::new(3, 0);
        let x = [0.5, -0.25, 0.125, 0.125];
        assert_eq!(homogeneous_coordinate_method(&x, 4.0, &mut src).unwrap().output, x.to_vec());
        let z = homogeneous_coordinate_method(&x, 0.0, &mut src).unwrap();
        assert!(z.output.iter().all(|&v| v == 0.0) && z.kept == 0);
        assert!(homogeneous_coordinate_method(&x, 4.5, &mut src).is_err());
    }
}
