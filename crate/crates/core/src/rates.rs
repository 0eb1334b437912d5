//! Three-scale asymptotic rate formulas `C n^{-p0} (log n)^{-q0} (loglog n)^{-r0}`
//! and least-squares fitting of their exponents from computed sequences.
//!
//! Exponents use the decay-positive sign convention: positive `p0`, `q0`, `r0`
//! mean decay in the corresponding scale. Logs are base 2 with shifted
//! arguments (`log2(n+1)`, `log2 log2(n+3)`) so every factor is positive from
//! `n = 1` on.

use crate::error::{Error, Result};
use crate::seqspace::{log2, MonotoneSeq};
use nalgebra::{DMatrix, DVector};

/// A rate `C * n^{-p0} * (log2(n+1))^{-q0} * (log2 log2(n+3))^{-r0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFormula {
    pub c: f64,
    pub p0: f64,
    pub q0: f64,
    pub r0: f64,
}

impl RateFormula {
    pub fn new(c: f64, p0: f64, q0: f64, r0: f64) -> Result<Self> {
        let f = RateFormula { c, p0, q0, r0 };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c.is_finite() && self.c > 0.0) {
            return Err(Error::validation(format!("rate constant must be positive, got {}", self.c)));
        }
        for (v, name) in [(self.p0, "p0"), (self.q0, "q0"), (self.r0, "r0")] {
            if !v.is_finite() {
                return Err(Error::validation(format!("exponent {name} must be finite, got {v}")));
            }
        }
        Ok(())
    }

    /// Evaluates the formula at `n >= 1`. Always positive.
    pub fn eval(&self, n: u64) -> f64 {
        assert!(n >= 1, "rate formulas are defined for n >= 1");
        let nf = n as f64;
        let l = log2(nf + 1.0);
        let ll = log2(log2(nf + 3.0));
        self.c * nf.powf(-self.p0) * l.powf(-self.q0) * ll.powf(-self.r0)
    }
}

impl std::fmt::Display for RateFormula {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{:.6} * n^-{} * (log2(n+1))^-{} * (log2log2(n+3))^-{}",
            self.c, self.p0, self.q0, self.r0
        )
    }
}

/// Evaluates `formula` at `n`.
pub fn eval_rate(formula: &RateFormula, n: u64) -> f64 {
    formula.eval(n)
}

/// A fitted rate with its diagnostics: RMS residual of the log values on the
/// sample set and the condition number of the regression design.
#[derive(Debug, Clone, Copy)]
pub struct RateFit {
    pub formula: RateFormula,
    pub residual: f64,
    pub condition: f64,
}

/// Powers of two inside `[n_min, n_max]`, the sampling grid used by the fits.
pub fn dyadic_samples(n_min: usize, n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 1usize;
    while n <= n_max {
        if n >= n_min {
            out.push(n);
        }
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    out
}

/// Minimum number of dyadic samples a fit requires.
pub const MIN_FIT_SAMPLES: usize = 6;

/// Least-squares fit of the three-scale rate to explicit `(n, value)` samples.
///
/// The log values regress on `[1, -ln n, -ln log2(n+1)]`, plus
/// `[-ln log2 log2(n+3)]` when `fit_r0` is set; with `fit_r0` off the
/// returned `r0` is 0. The log/loglog regressors are nearly collinear at
/// small `n`, which the returned condition number surfaces.
pub fn fit_rate_samples(samples: &[(u64, f64)], fit_r0: bool) -> Result<RateFit> {
    let k = if fit_r0 { 4 } else { 3 };
    if samples.len() < MIN_FIT_SAMPLES {
        return Err(Error::validation(format!(
            "rate fit needs at least {MIN_FIT_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    for &(n, v) in samples {
        if n < 1 {
            return Err(Error::validation("rate fit samples need n >= 1"));
        }
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::validation(format!(
                "rate fit needs positive values, got {v} at n = {n}"
            )));
        }
    }
    let m = samples.len();
    let mut design = DMatrix::zeros(m, k);
    let mut rhs = DVector::zeros(m);
    for (row, &(n, v)) in samples.iter().enumerate() {
        let nf = n as f64;
        design[(row, 0)] = 1.0;
        design[(row, 1)] = -nf.ln();
        design[(row, 2)] = -log2(nf + 1.0).ln();
        if fit_r0 {
            design[(row, 3)] = -log2(log2(nf + 3.0)).ln();
        }
        rhs[row] = v.ln();
    }
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= 0.0 || !smin.is_finite() {
        return Err(Error::numeric("rate fit design matrix is singular"));
    }
    let beta = svd
        .solve(&rhs, 0.0)
        .map_err(|e| Error::numeric(format!("rate fit solve failed: {e}")))?;
    let fitted = &design * &beta;
    let residual = ((&rhs - &fitted).norm_squared() / m as f64).sqrt();
    let formula = RateFormula::new(
        beta[0].exp(),
        beta[1],
        beta[2],
        if fit_r0 { beta[3] } else { 0.0 },
    )?;
    Ok(RateFit { formula, residual, condition: smax / smin })
}

/// Fits the rate of a monotone sequence over `n in [n_min, n_max]` at dyadic
/// sample points, with the default two-regressor model (`r0` pinned to 0).
pub fn fit_rate(seq: &MonotoneSeq, n_min: usize, n_max: usize) -> Result<RateFit> {
    fit_rate_with(seq, n_min, n_max, false)
}

/// [`fit_rate`] with the log-log exponent included on request.
pub fn fit_rate_with(seq: &MonotoneSeq, n_min: usize, n_max: usize, fit_r0: bool) -> Result<RateFit> {
    if n_min < 4 {
        return Err(Error::validation(format!("rate fits start at n_min >= 4, got {n_min}")));
    }
    if n_max > seq.len() {
        return Err(Error::validation(format!(
            "n_max = {n_max} exceeds sequence length {}",
            seq.len()
        )));
    }
    if n_min > n_max {
        return Err(Error::validation("n_min > n_max"));
    }
    let samples: Vec<(u64, f64)> = dyadic_samples(n_min, n_max)
        .into_iter()
        .map(|n| (n as u64, seq.value(n)))
        .collect();
    fit_rate_samples(&samples, fit_r0)
}
