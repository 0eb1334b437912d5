//! Singular convolution kernels on (0,1], their q-integrals, and the
//! pseudo-metric they induce on [0,1].
//!
//! A kernel `k` is positive, continuous, strictly decreasing near 0, and
//! singular at 0. Two operator modes share each kernel: `WS` uses
//! `K(t,x) = k(|t-x|)` and `VO` the Volterra form `K(t,x) = k(t-x)` for
//! `x < t`, zero otherwise. The pseudo-metric
//! `d(s,t) = (int_0^1 |K(s,x)-K(t,x)|^q dx)^{1/q}` is sandwiched by the
//! kernel's q-integral over `(0, |s-t|)`: two-sided with factor `2^{1/q}` in
//! the VO case, one-sided with factor `4^{1/q}` in the WS case.
//!
//! All logarithms in this module are natural logs, matching the kernel
//! formulas; the sequence-space module works in base 2, and the two meet only
//! through dimensionless rate exponents.

use crate::error::{Error, Result};
use crate::metricspace::{Norm, PointCloud};
use crate::quad::{exp_sinh_line, tanh_sinh};
use crate::rates::RateFormula;
use rayon::prelude::*;
use std::sync::Arc;

/// Largest grid for [`sampled_interval_metric`] (distance tables are O(grid^2)
/// quadratures).
pub const METRIC_GRID_CAP: usize = 512;

/// `q*tau` values this close to 1 are treated as the critical regime.
const CRITICAL_TOL: f64 = 1e-9;
/// Cap on `q*tau` for quadratures that evaluate `k` pointwise (rather than in
/// log space); between this and the critical value 1 the power substitution
/// exponent is too steep for direct evaluation.
const MAX_DIRECT_QTAU: f64 = 0.95;
/// Relative tolerance of the internal panel quadratures.
const PANEL_TOL: f64 = 1e-8;
/// Relative slack allowed by [`sandwich_check`].
pub const SANDWICH_TOL: f64 = 1e-4;

/// Kernel shape on (0,1]. `tau` is the power of the leading singularity
/// `x^{-tau}`; `beta` and `gamma` grade the `(c0 - ln x)` and
/// `(c0 + ln(c0 - ln x))` corrections.
#[derive(Clone)]
pub enum KernelFamily {
    Power { tau: f64 },
    LogPower { tau: f64, beta: f64, c0: f64 },
    DoubleLog { tau: f64, beta: f64, gamma: f64, c0: f64 },
    /// User-supplied kernel; `tau_hint` must match the true leading power so
    /// the substitution flattening the singularity is valid.
    Custom { k: Arc<dyn Fn(f64) -> f64 + Send + Sync>, tau_hint: f64 },
}

impl std::fmt::Debug for KernelFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelFamily::Power { tau } => write!(f, "Power {{ tau: {tau} }}"),
            KernelFamily::LogPower { tau, beta, c0 } => {
                write!(f, "LogPower {{ tau: {tau}, beta: {beta}, c0: {c0} }}")
            }
            KernelFamily::DoubleLog { tau, beta, gamma, c0 } => {
                write!(f, "DoubleLog {{ tau: {tau}, beta: {beta}, gamma: {gamma}, c0: {c0} }}")
            }
            KernelFamily::Custom { tau_hint, .. } => {
                write!(f, "Custom {{ tau_hint: {tau_hint} }}")
            }
        }
    }
}

impl KernelFamily {
    pub fn name(&self) -> &'static str {
        match self {
            KernelFamily::Power { .. } => "POWER",
            KernelFamily::LogPower { .. } => "LOGPOWER",
            KernelFamily::DoubleLog { .. } => "DOUBLELOG",
            KernelFamily::Custom { .. } => "CUSTOM",
        }
    }

    /// Leading singularity exponent (the hint, for custom kernels).
    pub fn tau(&self) -> f64 {
        match *self {
            KernelFamily::Power { tau }
            | KernelFamily::LogPower { tau, .. }
            | KernelFamily::DoubleLog { tau, .. } => tau,
            KernelFamily::Custom { tau_hint, .. } => tau_hint,
        }
    }

    /// Log-correction parameters `(beta, gamma, c0)`; identity values for
    /// families without the corresponding factor.
    pub(crate) fn log_params(&self) -> (f64, f64, f64) {
        match *self {
            KernelFamily::Power { .. } | KernelFamily::Custom { .. } => (0.0, 0.0, 1.0),
            KernelFamily::LogPower { beta, c0, .. } => (beta, 0.0, c0),
            KernelFamily::DoubleLog { beta, gamma, c0, .. } => (beta, gamma, c0),
        }
    }
}

/// Operator mode sharing a kernel: weakly singular or Volterra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelMode {
    WeaklySingular,
    Volterra,
}

impl std::fmt::Display for KernelMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KernelMode::WeaklySingular => write!(f, "WS"),
            KernelMode::Volterra => write!(f, "VO"),
        }
    }
}

/// A kernel family together with the operator mode it generates.
#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub mode: KernelMode,
}

impl KernelSpec {
    pub fn power(tau: f64, mode: KernelMode) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0 && tau < 1.0) {
            return Err(Error::validation(format!("POWER needs 0 < tau < 1, got {tau}")));
        }
        Ok(KernelSpec { family: KernelFamily::Power { tau }, mode })
    }

    pub fn log_power(tau: f64, beta: f64, c0: f64, mode: KernelMode) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0 && tau <= 1.0) {
            return Err(Error::validation(format!("LOGPOWER needs 0 < tau <= 1, got {tau}")));
        }
        if !(c0.is_finite() && c0 > 0.0) {
            return Err(Error::validation(format!("LOGPOWER needs c0 > 0, got {c0}")));
        }
        if !beta.is_finite() {
            return Err(Error::validation("LOGPOWER beta must be finite"));
        }
        Ok(KernelSpec { family: KernelFamily::LogPower { tau, beta, c0 }, mode })
    }

    pub fn double_log(tau: f64, beta: f64, gamma: f64, c0: f64, mode: KernelMode) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0 && tau <= 1.0) {
            return Err(Error::validation(format!("DOUBLELOG needs 0 < tau <= 1, got {tau}")));
        }
        if !(c0.is_finite() && c0 > 0.0 && c0 + c0.ln() > 0.0) {
            // c0 + ln(c0) > 0 keeps the inner factor positive on all of (0,1].
            return Err(Error::validation(format!(
                "DOUBLELOG needs c0 with c0 + ln(c0) > 0 (c0 > 0.5672), got {c0}"
            )));
        }
        if !(beta.is_finite() && gamma.is_finite()) {
            return Err(Error::validation("DOUBLELOG beta and gamma must be finite"));
        }
        Ok(KernelSpec { family: KernelFamily::DoubleLog { tau, beta, gamma, c0 }, mode })
    }

    pub fn custom(
        k: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        tau_hint: f64,
        mode: KernelMode,
    ) -> Result<Self> {
        if !(tau_hint.is_finite() && tau_hint > 0.0 && tau_hint < 1.0) {
            return Err(Error::validation(format!("CUSTOM needs 0 < tau_hint < 1, got {tau_hint}")));
        }
        Ok(KernelSpec { family: KernelFamily::Custom { k, tau_hint }, mode })
    }

    /// Evaluates `k(x)` for `x` in (0, 1].
    pub fn eval(&self, x: f64) -> f64 {
        debug_assert!(x > 0.0 && x <= 1.0 + 1e-9, "kernel domain is (0,1], got {x}");
        match &self.family {
            KernelFamily::Power { tau } => x.powf(-tau),
            KernelFamily::LogPower { tau, beta, c0 } => {
                x.powf(-tau) * (c0 - x.ln()).powf(-beta)
            }
            KernelFamily::DoubleLog { tau, beta, gamma, c0 } => {
                let l = c0 - x.ln();
                x.powf(-tau) * l.powf(-beta) * (c0 + l.ln()).powf(-gamma)
            }
            KernelFamily::Custom { k, .. } => k(x),
        }
    }

    /// Smoke test of the standing kernel assumptions on a dyadic log grid:
    /// positive, finite, strictly decreasing, and unbounded towards 0.
    ///
    /// Built-in kernels with small `c0` can be non-monotone away from 0 and
    /// fail this check while remaining valid inputs for the integral
    /// operations, whose results do not need global monotonicity.
    pub fn spot_check(&self) -> Result<()> {
        let mut prev = f64::INFINITY;
        let first = self.eval(1.0);
        for i in 0..=300u32 {
            let x = 2.0f64.powi(-(i as i32));
            let v = self.eval(x);
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::validation(format!(
                    "kernel spot check: k({x:e}) = {v} is not positive and finite"
                )));
            }
            if i > 0 && v <= prev {
                return Err(Error::validation(format!(
                    "kernel spot check: not strictly decreasing between x = {:e} and {:e}",
                    x * 2.0,
                    x
                )));
            }
            prev = v;
        }
        if prev <= 1.5 * first {
            return Err(Error::validation(
                "kernel spot check: no visible singularity at 0 on the dyadic grid",
            ));
        }
        Ok(())
    }

    /// Warns when `c0 <= beta*q`, the regime where the log correction can make
    /// the kernel non-monotone away from 0; results remain valid, global
    /// strict decrease is merely no longer guaranteed.
    pub fn monotonicity_warning(&self, q: f64) -> Option<String> {
        let (beta, _, c0) = self.family.log_params();
        match self.family {
            KernelFamily::LogPower { .. } | KernelFamily::DoubleLog { .. }
                if beta > 0.0 && c0 <= beta * q =>
            {
                Some(format!(
                    "kernel may be non-monotone on (0,1]: c0 = {c0} <= beta*q = {}; \
                     bounds remain valid, raise c0 above beta*q for a strictly decreasing kernel",
                    beta * q
                ))
            }
            _ => None,
        }
    }
}

/// Integration regime of `k^q` at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Regime {
    /// `q*tau < 1`: the power substitution flattens the singularity.
    Sub,
    /// `q*tau = 1`, `beta*q > 1`: integrability carried by the log factor.
    LogCritical,
    /// `q*tau = beta*q = 1`, `gamma*q > 1`: carried by the double log.
    LogLogCritical,
}

pub(crate) fn classify(spec: &KernelSpec, q: f64) -> Result<Regime> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::validation(format!("q must be >= 1, got {q}")));
    }
    let tau = spec.family.tau();
    let (beta, gamma, _) = spec.family.log_params();
    let qt = q * tau;
    if qt < 1.0 - CRITICAL_TOL {
        return Ok(Regime::Sub);
    }
    if (qt - 1.0).abs() <= CRITICAL_TOL {
        if matches!(spec.family, KernelFamily::Custom { .. }) {
            return Err(Error::validation(
                "CUSTOM kernels support only q*tau_hint < 1 (critical regimes need closed log structure)",
            ));
        }
        let bq = beta * q;
        if bq > 1.0 + CRITICAL_TOL {
            return Ok(Regime::LogCritical);
        }
        if (bq - 1.0).abs() <= CRITICAL_TOL {
            if gamma * q > 1.0 + CRITICAL_TOL {
                return Ok(Regime::LogLogCritical);
            }
            return Err(Error::validation(format!(
                "k^q is not integrable: q*tau = beta*q = 1 needs gamma*q > 1, got {}",
                gamma * q
            )));
        }
        return Err(Error::validation(format!(
            "k^q is not integrable: q*tau = 1 needs beta*q > 1, got {bq}"
        )));
    }
    Err(Error::validation(format!(
        "k^q is not integrable: q*tau = {qt} > 1 ({} kernel, q = {q})",
        spec.family.name()
    )))
}

/// `ln(e^a + e^b)` without overflow.
fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// The slowly varying part of `k^q` as a function of `L = ln x`:
/// `(c0 - L)^{-bq} (c0 + ln(c0 - L))^{-gq}`.
fn log_factor_q(l: f64, bq: f64, gq: f64, c0: f64) -> f64 {
    let u = c0 - l;
    let mut g = if bq == 0.0 { 1.0 } else { u.powf(-bq) };
    if gq != 0.0 {
        g *= (c0 + u.ln()).powf(-gq);
    }
    g
}

/// `int_0^r k(x)^q dx` (the q-th power, not the root).
fn q_power_integral(spec: &KernelSpec, q: f64, r: f64, tol: f64) -> Result<f64> {
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(Error::validation(format!("radius must be in (0, 1], got {r}")));
    }
    let tau = spec.family.tau();
    let (beta, gamma, c0) = spec.family.log_params();
    let (bq, gq) = (beta * q, gamma * q);
    match classify(spec, q)? {
        Regime::Sub => {
            let qt = q * tau;
            let m = 1.0 / (1.0 - qt);
            match &spec.family {
                KernelFamily::Custom { k, .. } => {
                    if qt > MAX_DIRECT_QTAU {
                        return Err(Error::validation(format!(
                            "CUSTOM quadrature supports q*tau_hint <= {MAX_DIRECT_QTAU}, got {qt}"
                        )));
                    }
                    // x = r v^m flattens the leading power; the residual slowly
                    // varying factor is integrated directly.
                    let f = move |v: f64| {
                        let x = (r * v.powf(m)).max(1e-290);
                        k(x).powf(q) * r * m * v.powf(m - 1.0)
                    };
                    Ok(tanh_sinh(f, 0.0, 1.0, tol)?.value)
                }
                _ => {
                    // Built-ins in log space: the flattened integrand is
                    // r^{1-qt} m G(ln x) with ln x = ln r + m ln v, immune to
                    // underflow at any substitution steepness.
                    let scale = r.powf(1.0 - qt) * m;
                    let ln_r = r.ln();
                    let f = move |v: f64| scale * log_factor_q(ln_r + m * v.ln(), bq, gq, c0);
                    Ok(tanh_sinh(f, 0.0, 1.0, tol)?.value)
                }
            }
        }
        Regime::LogCritical => {
            // x = e^{c0 - u} turns the integral into int_{c1}^inf u^{-bq}
            // (c0 + ln u)^{-gq} du with c1 = c0 - ln r.
            let c1 = c0 - r.ln();
            let ln_c1 = c1.ln();
            let f = move |s: f64| {
                let lu = log_add_exp(ln_c1, s);
                let mut v = (s - bq * lu).exp();
                if gq != 0.0 {
                    v *= (c0 + lu).powf(-gq);
                }
                v
            };
            Ok(exp_sinh_line(f, tol)?.value)
        }
        Regime::LogLogCritical => {
            // One more log substitution leaves int_{v0}^inf v^{-gq} dv with
            // v0 = c0 + ln(c0 - ln r).
            let v0 = c0 + (c0 - r.ln()).ln();
            let ln_v0 = v0.ln();
            let f = move |s: f64| {
                let lv = log_add_exp(ln_v0, s);
                (s - gq * lv).exp()
            };
            Ok(exp_sinh_line(f, tol)?.value)
        }
    }
}

/// `(int_0^r k(u)^q du)^{1/q}`: the q-integral controlling the pseudo-metric
/// at separation `r`.
///
/// POWER uses the closed form `(1-q tau)^{-1/q} r^{1/q-tau}`; LOGPOWER at the
/// critical `tau = 1/q` uses `(beta q - 1)^{-1/q} (c0 - ln r)^{1/q-beta}`, and
/// DOUBLELOG at `tau = beta = 1/q` the analogous nested-log form. All other
/// integrable combinations are quadratures on the flattened integrand.
pub fn kernel_q_integral(spec: &KernelSpec, q: f64, r: f64) -> Result<f64> {
    let regime = classify(spec, q)?;
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(Error::validation(format!("radius must be in (0, 1], got {r}")));
    }
    let tau = spec.family.tau();
    let (beta, gamma, c0) = spec.family.log_params();
    match (&spec.family, regime) {
        (KernelFamily::Power { .. }, Regime::Sub) => {
            Ok((1.0 - q * tau).powf(-1.0 / q) * r.powf(1.0 / q - tau))
        }
        (KernelFamily::LogPower { .. }, Regime::LogCritical) => {
            Ok((beta * q - 1.0).powf(-1.0 / q) * (c0 - r.ln()).powf(1.0 / q - beta))
        }
        (KernelFamily::DoubleLog { .. }, Regime::LogLogCritical) => {
            let v0 = c0 + (c0 - r.ln()).ln();
            Ok((gamma * q - 1.0).powf(-1.0 / q) * v0.powf(1.0 / q - gamma))
        }
        _ => Ok(q_power_integral(spec, q, r, PANEL_TOL)?.powf(1.0 / q)),
    }
}

/// Quadrature-only evaluation of [`kernel_q_integral`], the cross-check for
/// the closed forms. Subcritical kernels are integrated raw (no flattening
/// substitution, capped at `q*tau <= 0.95`); critical regimes use the
/// exp-sinh tail forms.
pub fn kernel_q_integral_quadrature(spec: &KernelSpec, q: f64, r: f64, tol: f64) -> Result<f64> {
    let regime = classify(spec, q)?;
    if !(r.is_finite() && r > 0.0 && r <= 1.0) {
        return Err(Error::validation(format!("radius must be in (0, 1], got {r}")));
    }
    let raw = match regime {
        Regime::Sub => {
            let qt = q * spec.family.tau();
            if qt > MAX_DIRECT_QTAU {
                // Fall back to the flattened form; still quadrature.
                q_power_integral(spec, q, r, tol)?
            } else {
                let s = spec.clone();
                tanh_sinh(move |x: f64| s.eval(x.max(1e-290)).powf(q), 0.0, r, tol)?.value
            }
        }
        _ => q_power_integral(spec, q, r, tol)?,
    };
    Ok(raw.powf(1.0 / q))
}

/// `int_0^a |k(y) - k(y + delta)|^q dy`: the overlap panel of the
/// pseudo-metric (both translates singular at the left endpoint for the first
/// one only).
fn diff_integral(spec: &KernelSpec, q: f64, delta: f64, a: f64, tol: f64) -> Result<f64> {
    if a <= 0.0 || delta <= 0.0 {
        return Ok(0.0);
    }
    let (beta, gamma, c0) = spec.family.log_params();
    let (bq, gq) = (beta * q, gamma * q);
    match classify(spec, q)? {
        Regime::Sub => {
            let qt = q * spec.family.tau();
            if qt > MAX_DIRECT_QTAU {
                return Err(Error::validation(format!(
                    "pseudo-metric quadrature supports q*tau <= {MAX_DIRECT_QTAU} or the critical \
                     q*tau = 1, got {qt}"
                )));
            }
            let m = 1.0 / (1.0 - qt);
            let s = spec.clone();
            let f = move |v: f64| {
                let y = (a * v.powf(m)).max(1e-290);
                (s.eval(y) - s.eval((y + delta).min(1.0))).abs().powf(q) * a * m * v.powf(m - 1.0)
            };
            Ok(tanh_sinh(f, 0.0, 1.0, tol)?.value)
        }
        Regime::LogCritical | Regime::LogLogCritical => {
            // y = e^{-u}: int_{u0}^inf |k(e^-u) - k(e^-u + delta)|^q e^-u du.
            // Deep in the tail k(y + delta) is negligible against k(y) and
            // the integrand collapses to the slowly varying factor of k^q at
            // ln x = -u, evaluated in log space so the e^sigma jacobian never
            // overflows.
            let u0 = -a.ln();
            let ln_c0u0 = (c0 + u0).ln();
            let s = spec.clone();
            let f = move |sg: f64| {
                let u = u0 + sg.exp();
                if !u.is_finite() || u > 500.0 {
                    let lcu = log_add_exp(ln_c0u0, sg); // ln(c0 + u)
                    (sg - bq * lcu - gq * (c0 + lcu).ln()).exp()
                } else {
                    let y = (-u).exp();
                    (s.eval(y) - s.eval((y + delta).min(1.0))).abs().powf(q) * y * sg.exp()
                }
            };
            Ok(exp_sinh_line(f, tol)?.value)
        }
    }
}

/// `int_0^{delta/2} |k(y) - k(delta - y)|^q dy`: half the interior panel of
/// the WS pseudo-metric.
fn mid_integral(spec: &KernelSpec, q: f64, delta: f64, tol: f64) -> Result<f64> {
    if delta <= 0.0 {
        return Ok(0.0);
    }
    let a = delta / 2.0;
    let (beta, gamma, c0) = spec.family.log_params();
    let (bq, gq) = (beta * q, gamma * q);
    match classify(spec, q)? {
        Regime::Sub => {
            let qt = q * spec.family.tau();
            if qt > MAX_DIRECT_QTAU {
                return Err(Error::validation(format!(
                    "pseudo-metric quadrature supports q*tau <= {MAX_DIRECT_QTAU} or the critical \
                     q*tau = 1, got {qt}"
                )));
            }
            let m = 1.0 / (1.0 - qt);
            let s = spec.clone();
            let f = move |v: f64| {
                let y = (a * v.powf(m)).max(1e-290);
                (s.eval(y) - s.eval(delta - y)).abs().powf(q) * a * m * v.powf(m - 1.0)
            };
            Ok(tanh_sinh(f, 0.0, 1.0, tol)?.value)
        }
        Regime::LogCritical | Regime::LogLogCritical => {
            let u0 = -a.ln();
            let ln_c0u0 = (c0 + u0).ln();
            let s = spec.clone();
            let f = move |sg: f64| {
                let u = u0 + sg.exp();
                if !u.is_finite() || u > 500.0 {
                    let lcu = log_add_exp(ln_c0u0, sg);
                    (sg - bq * lcu - gq * (c0 + lcu).ln()).exp()
                } else {
                    let y = (-u).exp();
                    (s.eval(y) - s.eval(delta - y)).abs().powf(q) * y * sg.exp()
                }
            };
            Ok(exp_sinh_line(f, tol)?.value)
        }
    }
}

/// The pseudo-metric `d(s,t) = (int_0^1 |K(s,x) - K(t,x)|^q dx)^{1/q}`.
///
/// `[0,1]` splits at `{0, min(s,t), max(s,t), 1}`; each panel is substituted
/// so its singularity sits at a zero left endpoint before quadrature.
pub fn pseudo_metric(spec: &KernelSpec, q: f64, s: f64, t: f64) -> Result<f64> {
    classify(spec, q)?;
    for (v, name) in [(s, "s"), (t, "t")] {
        if !(v.is_finite() && (0.0..=1.0).contains(&v)) {
            return Err(Error::validation(format!("{name} must lie in [0,1], got {v}")));
        }
    }
    if s == t {
        return Ok(0.0);
    }
    let (lo, hi) = if s < t { (s, t) } else { (t, s) };
    let delta = hi - lo;
    let base_q = q_power_integral(spec, q, delta, PANEL_TOL)?;
    let dq = match spec.mode {
        KernelMode::Volterra => diff_integral(spec, q, delta, lo, PANEL_TOL)? + base_q,
        KernelMode::WeaklySingular => {
            diff_integral(spec, q, delta, lo, PANEL_TOL)?
                + 2.0 * mid_integral(spec, q, delta, PANEL_TOL)?
                + diff_integral(spec, q, delta, 1.0 - hi, PANEL_TOL)?
        }
    };
    Ok(dq.powf(1.0 / q))
}

/// Outcome of checking the two-sided (VO) or one-sided (WS) bracket between
/// the pseudo-metric and the kernel q-integral at separation `|s-t|`.
#[derive(Debug, Clone, Copy)]
pub struct SandwichCheck {
    /// `kernel_q_integral` at `r = |s-t|`.
    pub base: f64,
    /// The pseudo-metric value.
    pub d: f64,
    /// Bracket the metric must fall in: `[base, 2^{1/q} base]` for VO,
    /// `[0, 4^{1/q} base]` for WS.
    pub lower: f64,
    pub upper: f64,
    pub passed: bool,
}

/// Verifies the pseudo-metric against its q-integral bracket, with relative
/// slack [`SANDWICH_TOL`] for quadrature noise.
pub fn sandwich_check(spec: &KernelSpec, q: f64, s: f64, t: f64) -> Result<SandwichCheck> {
    let d = pseudo_metric(spec, q, s, t)?;
    let delta = (s - t).abs();
    if delta == 0.0 {
        return Ok(SandwichCheck { base: 0.0, d, lower: 0.0, upper: 0.0, passed: d == 0.0 });
    }
    let base = kernel_q_integral(spec, q, delta)?;
    let (lower, upper) = match spec.mode {
        KernelMode::Volterra => (base, 2.0f64.powf(1.0 / q) * base),
        KernelMode::WeaklySingular => (0.0, 4.0f64.powf(1.0 / q) * base),
    };
    let passed = d >= lower * (1.0 - SANDWICH_TOL) && d <= upper * (1.0 + SANDWICH_TOL);
    Ok(SandwichCheck { base, d, lower, upper, passed })
}

/// Entropy rate of `([0,1], d)` as an exponent triple, decay-positive: the
/// entropy numbers behave like `n^{-p0} (log n)^{-q0} (loglog n)^{-r0}` up to
/// constants that are not asserted.
pub fn interval_rate_under_d(spec: &KernelSpec, q: f64) -> Result<RateFormula> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::validation(format!("q must be >= 1, got {q}")));
    }
    let crit = |v: f64| (v * q - 1.0).abs() <= CRITICAL_TOL;
    let below = |v: f64| v * q < 1.0 - CRITICAL_TOL;
    let above = |v: f64| v * q > 1.0 + CRITICAL_TOL;
    let mismatch = |msg: String| Err(Error::validation(msg));
    match spec.family {
        KernelFamily::Power { tau } => {
            if below(tau) {
                RateFormula::new(1.0, 1.0 / q - tau, 0.0, 0.0)
            } else {
                mismatch(format!("POWER rate needs 0 < tau < 1/q, got tau = {tau}, q = {q}"))
            }
        }
        KernelFamily::LogPower { tau, beta, .. } => {
            if crit(tau) && above(beta) {
                RateFormula::new(1.0, 0.0, beta - 1.0 / q, 0.0)
            } else {
                mismatch(format!(
                    "LOGPOWER rate needs tau = 1/q and beta > 1/q, got tau = {tau}, beta = {beta}, q = {q}"
                ))
            }
        }
        KernelFamily::DoubleLog { tau, beta, gamma, .. } => {
            if below(tau) {
                RateFormula::new(1.0, 1.0 / q - tau, beta, gamma)
            } else if crit(tau) && above(beta) {
                RateFormula::new(1.0, 0.0, beta - 1.0 / q, gamma)
            } else if crit(tau) && crit(beta) && above(gamma) {
                RateFormula::new(1.0, 0.0, 0.0, gamma - 1.0 / q)
            } else {
                mismatch(format!(
                    "DOUBLELOG rate needs tau < 1/q, or tau = 1/q with beta > 1/q, or \
                     tau = beta = 1/q with gamma > 1/q; got tau = {tau}, beta = {beta}, \
                     gamma = {gamma}, q = {q}"
                ))
            }
        }
        KernelFamily::Custom { .. } => {
            mismatch("CUSTOM kernels have no symbolic rate; fit the sampled metric instead".into())
        }
    }
}

/// Materializes `([0,1], d)` on a uniform grid as a distance-table point
/// cloud for the covering machinery.
///
/// Rows are computed per separation `delta = k/(grid-1)`: the overlap panel
/// accumulates incrementally across grid prefixes, so the table costs
/// O(grid^2) cheap panel quadratures rather than O(grid^2) full metrics.
pub fn sampled_interval_metric(spec: &KernelSpec, q: f64, grid_size: usize) -> Result<PointCloud> {
    classify(spec, q)?;
    if grid_size < 1 {
        return Err(Error::validation("grid_size must be >= 1"));
    }
    if grid_size > METRIC_GRID_CAP {
        return Err(Error::resource(format!(
            "sampled metric grid is capped at {METRIC_GRID_CAP}, got {grid_size}"
        )));
    }
    let g = grid_size;
    let points: Vec<Vec<f64>> = (0..g).map(|i| vec![i as f64 / (g - 1).max(1) as f64]).collect();
    if g == 1 {
        return PointCloud::new(points, Norm::P(1.0))?.with_table(vec![vec![0.0]], 1e-12);
    }
    let step = 1.0 / (g - 1) as f64;
    let xs: Vec<f64> = (0..g).map(|i| i as f64 * step).collect();
    let ws = spec.mode == KernelMode::WeaklySingular;

    // Per separation index: base integral, WS mid integral, and the overlap
    // panel at every grid prefix.
    struct Row {
        base_q: f64,
        mid: f64,
        diff_at: Vec<f64>,
    }
    let rows: Result<Vec<Row>> = (1..g)
        .into_par_iter()
        .map(|kid| {
            let delta = xs[kid];
            let base_q = q_power_integral(spec, q, delta, PANEL_TOL)?;
            let mid = if ws { mid_integral(spec, q, delta, PANEL_TOL)? } else { 0.0 };
            // Prefixes beyond i_max would push y + delta past 1 and are never
            // read: pairs at this separation use indices i <= g-1-sep only.
            let i_max = g - 1 - kid;
            let mut diff_at = vec![0.0; g];
            if i_max >= 1 {
                diff_at[1] = diff_integral(spec, q, delta, xs[1], PANEL_TOL)?;
            }
            for i in 2..=i_max {
                // Interior panels are smooth: k is finite on [x_{i-1}, x_i + delta].
                let sp = spec.clone();
                let panel = tanh_sinh(
                    move |y: f64| (sp.eval(y) - sp.eval((y + delta).min(1.0))).abs().powf(q),
                    xs[i - 1],
                    xs[i],
                    PANEL_TOL,
                )?;
                diff_at[i] = diff_at[i - 1] + panel.value;
            }
            Ok(Row { base_q, mid, diff_at })
        })
        .collect();
    let rows = rows?;

    let mut table = vec![vec![0.0; g]; g];
    let mut max_entry = 0.0f64;
    for i in 0..g {
        for j in (i + 1)..g {
            let sep = j - i;
            let row = &rows[sep - 1];
            let dq = if ws {
                row.diff_at[i] + 2.0 * row.mid + row.diff_at[g - 1 - j]
            } else {
                row.diff_at[i] + row.base_q
            };
            let d = dq.powf(1.0 / q);
            table[i][j] = d;
            table[j][i] = d;
            max_entry = max_entry.max(d);
        }
    }
    // Quadrature noise scales with the entries; the triangle inequality holds
    // exactly for the underlying metric.
    PointCloud::new(points, Norm::P(1.0))?.with_table(table, 1e-5 * (1.0 + max_entry))
}
