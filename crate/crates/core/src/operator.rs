//! Discretized singular-kernel operators on [0,1]: application by product
//! integration, semigroup and shift-modulus checks, distance-net entropy
//! lower bounds, spectral s-numbers of the discretization, and the
//! regime-table rate oracle.
//!
//! The grid is `grid_n` uniform points `0 = x_0 < .. < x_{g-1} = 1`. Weights
//! come from product integration: on each panel the smooth part of the
//! integrand is interpolated while the kernel factor is integrated exactly
//! (closed form for fractional integration, adaptive quadrature for the
//! singular panels of convolution kernels), so the stored weights absorb the
//! singularity. Each row carries two weight sets: linear-interpolation
//! weights, entrywise non-negative, which feed the spectral decomposition,
//! and quadratic-interpolation weights used by `apply` for one order more
//! accuracy.
//!
//! Kernel integrals run on the natural-log scale of the kernel module; rate
//! formulas returned by [`rate_oracle`] use the base-2 scales of the rates
//! module. The two meet only through dimensionless exponents, and constants
//! absorb the base change.

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hull::Flagged;
use crate::kernel::{self, KernelFamily, KernelMode, KernelSpec, Regime};
use crate::metricspace::{Norm, PointCloud};
use crate::quad;
use crate::rates::RateFormula;
use crate::seqspace::{log2, MonotoneSeq};

/// Largest grid a `DiscretizedOperator` may use (two dense weight tables).
pub const OPERATOR_GRID_CAP: usize = 2048;
/// Largest grid accepted by the spectral decomposition.
pub const SPECTRAL_GRID_CAP: usize = 1024;
/// Caps the enumeration ranges inside the bound evaluators.
const BOUND_RANGE_CAP: f64 = 1e7;
/// Tolerance for regime-boundary comparisons, matching the kernel module's
/// classification tolerance.
const REGIME_TOL: f64 = 1e-9;
/// Kernel arguments are kept above this floor so endpoint nodes of the
/// quadrature rules cannot produce 0^{-tau}.
const EVAL_FLOOR: f64 = 1e-290;

/// 8-point Gauss-Legendre rule on [-1,1] as (node, weight) pairs; used for
/// panel moments away from the singular point, where the kernel is smooth.
const GAUSS8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362),
    (0.525_532_409_916_329, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_2, 0.101_228_536_290_376_26),
];

/// The kernel generating a discretized operator: a singular convolution
/// kernel in either mode, or the Riemann-Liouville kernel
/// `u^{alpha-1} / Gamma(alpha)` acting in Volterra form.
#[derive(Debug, Clone)]
pub enum OpKernel {
    Convolution(KernelSpec),
    RiemannLiouville { alpha: f64 },
}

impl OpKernel {
    fn is_volterra(&self) -> bool {
        match self {
            OpKernel::Convolution(spec) => spec.mode == KernelMode::Volterra,
            OpKernel::RiemannLiouville { .. } => true,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            // The rows integrate k over panels, so k must be integrable.
            OpKernel::Convolution(spec) => kernel::classify(spec, 1.0).map(|_| ()),
            OpKernel::RiemannLiouville { alpha } => {
                if !(alpha.is_finite() && *alpha > 0.0 && *alpha <= 8.0) {
                    return Err(Error::validation(format!(
                        "fractional-integration order must lie in (0, 8], got {alpha}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Kernel value at offset `u > 0`.
    fn eval(&self, u: f64) -> f64 {
        let u = u.max(EVAL_FLOOR);
        match self {
            OpKernel::Convolution(spec) => spec.eval(u),
            OpKernel::RiemannLiouville { alpha } => {
                u.powf(alpha - 1.0) / libm::tgamma(*alpha)
            }
        }
    }
}

/// A kernel operator sampled on a uniform grid with per-row product
/// integration weights.
///
/// `weights_row` exposes the linear-interpolation weights; they are
/// entrywise non-negative, and Volterra kernels (including fractional
/// integration) have zero weight above the diagonal.
#[derive(Debug, Clone)]
pub struct DiscretizedOperator {
    kernel: OpKernel,
    grid_n: usize,
    /// Row-major `grid_n x grid_n` linear product-integration weights.
    linear_rows: Vec<f64>,
    /// Row-major quadratic product-integration weights used by `apply`.
    apply_rows: Vec<f64>,
}

impl DiscretizedOperator {
    pub fn new(kernel: OpKernel, grid_n: usize) -> Result<Self> {
        kernel.validate()?;
        if grid_n < 3 {
            return Err(Error::validation(format!(
                "operator grid needs at least 3 points, got {grid_n}"
            )));
        }
        if grid_n > OPERATOR_GRID_CAP {
            return Err(Error::resource(format!(
                "operator grid {grid_n} exceeds the cap {OPERATOR_GRID_CAP}"
            )));
        }
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..grid_n)
            .into_par_iter()
            .map(|i| row_weights(&kernel, grid_n, i))
            .collect::<Result<Vec<_>>>()?;
        let mut linear_rows = Vec::with_capacity(grid_n * grid_n);
        let mut apply_rows = Vec::with_capacity(grid_n * grid_n);
        for (lin, quad_row) in rows {
            for w in &lin {
                debug_assert!(*w > -1e-9, "linear weight {w} should be non-negative");
            }
            // Quadrature noise can leave weights a hair below zero.
            linear_rows.extend(lin.into_iter().map(|w| w.max(0.0)));
            apply_rows.extend(quad_row);
        }
        Ok(DiscretizedOperator { kernel, grid_n, linear_rows, apply_rows })
    }

    pub fn kernel(&self) -> &OpKernel {
        &self.kernel
    }

    pub fn grid_n(&self) -> usize {
        self.grid_n
    }

    /// The grid points `x_i = i / (grid_n - 1)`.
    pub fn grid(&self) -> Vec<f64> {
        let h = 1.0 / (self.grid_n - 1) as f64;
        (0..self.grid_n).map(|i| i as f64 * h).collect()
    }

    /// Linear product-integration weights of row `i` (non-negative).
    pub fn weights_row(&self, i: usize) -> &[f64] {
        &self.linear_rows[i * self.grid_n..(i + 1) * self.grid_n]
    }

    /// Applies the operator to grid samples of `f`.
    pub fn apply(&self, f: &[f64]) -> Result<Vec<f64>> {
        if f.len() != self.grid_n {
            return Err(Error::validation(format!(
                "sample length {} does not match the grid ({})",
                f.len(),
                self.grid_n
            )));
        }
        if f.iter().any(|v| !v.is_finite()) {
            return Err(Error::validation("samples must be finite"));
        }
        let g = self.grid_n;
        Ok((0..g)
            .map(|i| {
                let row = &self.apply_rows[i * g..(i + 1) * g];
                row.iter().zip(f).map(|(w, v)| w * v).sum()
            })
            .collect())
    }
}

/// Moments `m_l = int over panel j of K(x_i, x) (x - x_j)^l dx`, `l = 0,1,2`.
///
/// The panel touching the kernel's singular point gets an exact treatment
/// (closed form for fractional integration, tanh-sinh otherwise); all other
/// panels are smooth enough for the fixed Gauss rule, whose error shrinks
/// like the 16th power of the distance to the singularity.
fn panel_moments(op: &OpKernel, g: usize, i: usize, j: usize) -> Result<[f64; 3]> {
    let h = 1.0 / (g - 1) as f64;
    if let OpKernel::RiemannLiouville { alpha } = op {
        if j + 1 == i {
            let a = *alpha;
            let gamma = libm::tgamma(a);
            let m0 = h.powf(a) / (a * gamma);
            let m1 = h.powf(a + 1.0) / (a * (a + 1.0) * gamma);
            let m2 = 2.0 * h.powf(a + 2.0) / (a * (a + 1.0) * (a + 2.0) * gamma);
            return Ok([m0, m1, m2]);
        }
    } else if j + 1 == i {
        // u = x_i - x runs over (0, h]; the local coordinate is h - u.
        return singular_panel_moments(op, h, true);
    } else if j == i {
        // Weakly singular rows integrate through the kernel point: u = x - x_i.
        return singular_panel_moments(op, h, false);
    }
    let mut m = [0.0; 3];
    for (z, w) in GAUSS8 {
        let xi = 0.5 * h * (1.0 + z);
        let u = if j < i { (i - j) as f64 * h - xi } else { (j - i) as f64 * h + xi };
        let kv = op.eval(u);
        if !kv.is_finite() {
            return Err(Error::numeric(format!("kernel value is not finite at offset {u}")));
        }
        let ww = 0.5 * h * w * kv;
        m[0] += ww;
        m[1] += ww * xi;
        m[2] += ww * xi * xi;
    }
    Ok(m)
}

/// Moments of the panel adjacent to the singular point, as integrals in the
/// offset `u` from that point: the local coordinate is `h - u` when the
/// panel lies left of it and `u` when it lies right.
fn singular_panel_moments(op: &OpKernel, h: f64, left: bool) -> Result<[f64; 3]> {
    let mut m = [0.0; 3];
    for (l, slot) in m.iter_mut().enumerate() {
        let q = quad::tanh_sinh(
            |u| {
                let xi = if left { h - u } else { u };
                op.eval(u) * xi.powi(l as i32)
            },
            0.0,
            h,
            1e-12,
        )?;
        *slot = q.value;
    }
    Ok(m)
}

fn row_weights(op: &OpKernel, g: usize, i: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let h = 1.0 / (g - 1) as f64;
    let mut lin = vec![0.0; g];
    let mut quad_row = vec![0.0; g];
    let volterra = op.is_volterra();
    let panel_end = if volterra { i } else { g - 1 };
    for j in 0..panel_end {
        let m = panel_moments(op, g, i, j)?;
        // Linear hat weights; m1 <= h*m0 keeps both non-negative.
        lin[j] += m[0] - m[1] / h;
        lin[j + 1] += m[1] / h;
        // Quadratic stencil: prefer the backward one; Volterra rows must not
        // reach past the diagonal, so the first panel of row 1 stays linear.
        let (nodes, sigma) = if j >= 1 {
            ([j - 1, j, j + 1], [-h, 0.0, h])
        } else if !volterra || i >= 2 {
            ([0, 1, 2], [0.0, h, 2.0 * h])
        } else {
            quad_row[j] += m[0] - m[1] / h;
            quad_row[j + 1] += m[1] / h;
            continue;
        };
        for k in 0..3 {
            let (sa, sb) = match k {
                0 => (sigma[1], sigma[2]),
                1 => (sigma[0], sigma[2]),
                _ => (sigma[0], sigma[1]),
            };
            let den = (sigma[k] - sa) * (sigma[k] - sb);
            quad_row[nodes[k]] += (sa * sb * m[0] - (sa + sb) * m[1] + m[2]) / den;
        }
    }
    Ok((lin, quad_row))
}

/// Trapezoid quadrature weights on the grid, the discrete L2 structure used
/// for norms and the spectral scaling.
fn trapezoid_weights(g: usize) -> Vec<f64> {
    let h = 1.0 / (g - 1) as f64;
    (0..g).map(|i| if i == 0 || i == g - 1 { 0.5 * h } else { h }).collect()
}

/// Discrete L_p norm of grid samples with trapezoid weights; `p` may be
/// infinite.
fn discrete_lp(values: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    }
    let w = trapezoid_weights(values.len());
    values
        .iter()
        .zip(&w)
        .map(|(v, wi)| wi * v.abs().powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}

/// Max-over-grid error of applying fractional integration of order `alpha`
/// numerically to the exact order-`beta` fractional integral of the
/// polynomial with the given coefficients, against the exact order
/// `alpha + beta` integral.
///
/// The inner integral is exact through the monomial rule
/// `x^s -> Gamma(s+1)/Gamma(s+1+order) x^{s+order}` (valid for real
/// `s > -1`), so the reported error isolates the outer quadrature.
pub fn semigroup_check(alpha: f64, beta: f64, coeffs: &[f64], grid_n: usize) -> Result<f64> {
    for (name, v) in [("alpha", alpha), ("beta", beta)] {
        if !(v.is_finite() && v > 0.0 && v <= 2.0) {
            return Err(Error::validation(format!("{name} must lie in (0, 2], got {v}")));
        }
    }
    if coeffs.is_empty() || coeffs.len() > 7 {
        return Err(Error::validation(format!(
            "polynomial degree is capped at 6, got {} coefficients",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(Error::validation("polynomial coefficients must be finite"));
    }
    if !(2..=4096).contains(&grid_n) {
        return Err(Error::validation(format!("grid_n must lie in 2..=4096, got {grid_n}")));
    }
    let frac = |order: f64| -> Vec<(f64, f64)> {
        coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| **c != 0.0)
            .map(|(j, &c)| {
                let jf = j as f64;
                (c * libm::tgamma(jf + 1.0) / libm::tgamma(jf + 1.0 + order), jf + order)
            })
            .collect()
    };
    let inner = frac(beta);
    let exact = frac(alpha + beta);
    let eval_terms = |terms: &[(f64, f64)], x: f64| -> f64 {
        terms.iter().map(|(c, s)| c * x.powf(*s)).sum()
    };
    let gamma_a = libm::tgamma(alpha);
    let h = 1.0 / (grid_n - 1) as f64;
    let mut max_err = 0.0f64;
    for idx in 1..grid_n {
        let t = idx as f64 * h;
        // Offset form keeps the kernel singularity at the left endpoint,
        // where the quadrature is exact.
        let q = quad::tanh_sinh(
            |u| u.powf(alpha - 1.0) * eval_terms(&inner, (t - u).max(0.0)),
            0.0,
            t,
            1e-12,
        )?;
        let err = (q.value / gamma_a - eval_terms(&exact, t)).abs();
        max_err = max_err.max(err);
    }
    Ok(max_err)
}

/// Outcome of a shift-modulus comparison.
#[derive(Debug, Clone, Copy)]
pub struct ShiftModulusCheck {
    /// Discrete L_p[0, 1-delta] norm of `(T f)(. + delta) - (T f)(.)`.
    pub lhs: f64,
    /// The smoothness bound `2 ||f||_p int_0^delta k`.
    pub rhs: f64,
    pub passed: bool,
}

/// Checks the translation-smoothness bound of the Volterra operator image:
/// shifting `T f` by `delta` moves it by at most `2 ||f||_p int_0^delta k`.
///
/// `delta` must align with the sample grid so the shifted difference is a
/// plain index shift. `passed` allows the bound a 10^-3 relative slack for
/// discretization error.
pub fn shift_modulus_check(
    spec: &KernelSpec,
    p: f64,
    delta: f64,
    f: &[f64],
) -> Result<ShiftModulusCheck> {
    let op = DiscretizedOperator::new(OpKernel::Convolution(spec.clone()), f.len())?;
    shift_modulus_check_with(&op, p, delta, f)
}

/// [`shift_modulus_check`] against a prebuilt operator, so repeated trials
/// on one grid can share the weight tables.
pub fn shift_modulus_check_with(
    op: &DiscretizedOperator,
    p: f64,
    delta: f64,
    f: &[f64],
) -> Result<ShiftModulusCheck> {
    let spec = match op.kernel() {
        OpKernel::Convolution(spec) if spec.mode == KernelMode::Volterra => spec,
        OpKernel::Convolution(_) => {
            return Err(Error::validation(
                "the shift-modulus bound is a Volterra-mode statement",
            ))
        }
        OpKernel::RiemannLiouville { .. } => {
            return Err(Error::validation(
                "pass the fractional kernel as an explicit convolution spec",
            ))
        }
    };
    if !(p >= 1.0) {
        return Err(Error::validation(format!("p must satisfy 1 <= p <= inf, got {p}")));
    }
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::validation(format!("delta must lie in [0, 1], got {delta}")));
    }
    let g = f.len();
    let h = 1.0 / (g - 1) as f64;
    let shift_f = delta / h;
    let shift = shift_f.round() as usize;
    if (shift_f - shift_f.round()).abs() > 1e-9 {
        return Err(Error::validation(format!(
            "delta = {delta} does not align with the {g}-point grid"
        )));
    }
    let tf = op.apply(f)?;
    let norm_f = discrete_lp(f, p);
    if shift == 0 {
        return Ok(ShiftModulusCheck { lhs: 0.0, rhs: 0.0, passed: true });
    }
    let diffs: Vec<f64> = (0..g - shift).map(|i| tf[i + shift] - tf[i]).collect();
    let lhs = discrete_lp(&diffs, p) * if p.is_infinite() { 1.0 } else { 1.0 };
    let tail = kernel::kernel_q_integral(spec, 1.0, delta)?;
    let rhs = 2.0 * norm_f * tail;
    Ok(ShiftModulusCheck { lhs, rhs, passed: lhs <= rhs * (1.0 + 1e-3) })
}

/// Which distance-net family produced a lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetKind {
    Rademacher,
    KernelAtoms,
    Means,
}

impl std::fmt::Display for NetKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NetKind::Rademacher => write!(f, "RADEMACHER"),
            NetKind::KernelAtoms => write!(f, "KERNEL_ATOMS"),
            NetKind::Means => write!(f, "MEANS"),
        }
    }
}

/// A family of unit-ball witnesses whose images under the operator are
/// pairwise at least `separation` apart in the sup norm: any
/// `ceil(2^log2_cardinality) - 1` balls must leave two witnesses in one
/// ball, so `eps_{ceil(2^log2_cardinality) - 1} >= separation / 2`.
#[derive(Debug, Clone, Copy)]
pub struct NetLowerBound {
    pub net_kind: NetKind,
    /// Block count for the sign nets, atom count for the others; the dyadic
    /// atom constructor stores its level instead.
    pub m_or_n: u64,
    pub separation: f64,
    pub log2_cardinality: f64,
}

impl NetLowerBound {
    /// The entropy lower bound `separation / 2`.
    pub fn bound(&self) -> f64 {
        self.separation / 2.0
    }

    /// The index the bound applies to: `ceil(2^log2_cardinality) - 1`.
    /// `None` when it exceeds the integer range.
    pub fn entropy_index(&self) -> Option<u64> {
        if self.log2_cardinality > 62.0 {
            return None;
        }
        let x = 2f64.powf(self.log2_cardinality);
        let r = x.round();
        let v = if (x - r).abs() <= 1e-9 * r.max(1.0) { r } else { x.ceil() };
        Some(v as u64 - 1)
    }
}

fn require_volterra(spec: &KernelSpec) -> Result<()> {
    if spec.mode != KernelMode::Volterra {
        return Err(Error::validation(
            "distance nets are built on the Volterra form of the operator",
        ));
    }
    Ok(())
}

fn conjugate(p: f64) -> Result<f64> {
    if !(p.is_finite() && p >= 2.0) {
        return Err(Error::validation(format!("p must satisfy 2 <= p < inf, got {p}")));
    }
    Ok(p / (p - 1.0))
}

/// Lower bound from the `2^n` sign patterns on `n` equal blocks: the images
/// of two patterns differing first in block `j` are at least
/// `2 int_0^{1/n} k` apart at `t = j/n`.
pub fn net_lower_rademacher(spec: &KernelSpec, n: u64) -> Result<NetLowerBound> {
    require_volterra(spec)?;
    if n == 0 {
        return Err(Error::validation("block count must be at least 1"));
    }
    let tail = kernel::kernel_q_integral(spec, 1.0, 1.0 / n as f64)?;
    Ok(NetLowerBound {
        net_kind: NetKind::Rademacher,
        m_or_n: n,
        separation: 2.0 * tail,
        log2_cardinality: n as f64,
    })
}

/// Lower bound from `m` normalized kernel atoms, one per block of width
/// `1/m`: distinct atoms are `alpha_m^{p-1}` apart, where `alpha_m` is the
/// block normalizer `(int_0^{1/m} k^{p'})^{1/p}`.
///
/// The separation equals `kernel_q_integral(spec, p', 1/m)` because
/// `alpha_m^{p-1} = (int k^{p'})^{(p-1)/p}` and `(p-1)/p = 1/p'`.
pub fn net_lower_kernel_atoms(spec: &KernelSpec, p: f64, m: u64) -> Result<NetLowerBound> {
    require_volterra(spec)?;
    let pp = conjugate(p)?;
    if m < 2 {
        return Err(Error::validation(
            "a one-atom net is degenerate: no pair exists, needs m >= 2",
        ));
    }
    let sep = kernel::kernel_q_integral(spec, pp, 1.0 / m as f64)?;
    Ok(NetLowerBound {
        net_kind: NetKind::KernelAtoms,
        m_or_n: m,
        separation: sep,
        log2_cardinality: (m as f64).log2(),
    })
}

/// The kernel-atom bound at the dyadic cardinality `m = 2^{n-1} + 1`, which
/// places the implied bound exactly at entropy index `2^{n-1}`.
///
/// For `n` beyond the integer range the separation is evaluated from
/// `ln m = (n-1) ln 2 + ln(1 + 2^{-(n-1)})` through the critical closed
/// forms, so levels up to and past `2^10` stay exact. `m_or_n` stores the
/// level `n`, not `m`.
pub fn net_lower_kernel_atoms_dyadic(spec: &KernelSpec, p: f64, n: u64) -> Result<NetLowerBound> {
    require_volterra(spec)?;
    let pp = conjugate(p)?;
    if n == 0 {
        return Err(Error::validation("dyadic level must be at least 1"));
    }
    let nm1 = (n - 1) as f64;
    let ln_m = nm1 * LN_2 + (-nm1 * LN_2).exp().ln_1p();
    let sep = if n <= 50 {
        let m = (1u64 << (n - 1)) + 1;
        kernel::kernel_q_integral(spec, pp, 1.0 / m as f64)?
    } else {
        let (beta, gamma, c0) = spec.family.log_params();
        match kernel::classify(spec, pp)? {
            Regime::LogCritical => {
                (beta * pp - 1.0).powf(-1.0 / pp) * (c0 + ln_m).powf(1.0 / pp - beta)
            }
            Regime::LogLogCritical => {
                (gamma * pp - 1.0).powf(-1.0 / pp)
                    * (c0 + (c0 + ln_m).ln()).powf(1.0 / pp - gamma)
            }
            Regime::Sub => match spec.family {
                KernelFamily::Power { tau } => {
                    (1.0 - pp * tau).powf(-1.0 / pp) * (-(1.0 / pp - tau) * ln_m).exp()
                }
                _ => {
                    return Err(Error::resource(format!(
                        "dyadic level {n} exceeds the quadrature range for this kernel"
                    )))
                }
            },
        }
    };
    Ok(NetLowerBound {
        net_kind: NetKind::KernelAtoms,
        m_or_n: n,
        separation: sep,
        log2_cardinality: nm1 + (0.5f64.powf(nm1)).ln_1p() / LN_2,
    })
}

/// Lower bound from normalized means of `sqrt(m)`-subsets of the kernel
/// atoms: at least `2^{sqrt(m) log2(m) / 2}` witnesses with separation
/// `m^{-1/(2p)} alpha_m^{p-1}`.
pub fn net_lower_means(spec: &KernelSpec, p: f64, m: u64) -> Result<NetLowerBound> {
    require_volterra(spec)?;
    let pp = conjugate(p)?;
    let root = (m as f64).sqrt().round() as u64;
    if m < 4 || root * root != m {
        return Err(Error::validation(format!(
            "the means net needs a perfect square m >= 4, got {m}"
        )));
    }
    let base = kernel::kernel_q_integral(spec, pp, 1.0 / m as f64)?;
    let mf = m as f64;
    Ok(NetLowerBound {
        net_kind: NetKind::Means,
        m_or_n: m,
        separation: mf.powf(-1.0 / (2.0 * p)) * base,
        log2_cardinality: 0.5 * mf.sqrt() * mf.log2(),
    })
}

/// Singular values of the L2-scaled discretization matrix, non-increasing.
///
/// Rows are the linear product-integration weights; the similarity scaling
/// by square roots of the trapezoid weights makes the matrix 2-norm match
/// the discrete L2 -> L2 operator norm.
pub fn singular_values(op: &DiscretizedOperator) -> Result<MonotoneSeq> {
    let g = op.grid_n;
    if g > SPECTRAL_GRID_CAP {
        return Err(Error::resource(format!(
            "spectral decomposition is capped at grid {SPECTRAL_GRID_CAP}, got {g}"
        )));
    }
    let d = trapezoid_weights(g);
    let b = nalgebra::DMatrix::from_fn(g, g, |r, c| {
        (d[r] / d[c]).sqrt() * op.linear_rows[r * g + c]
    });
    let svd = b
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| Error::numeric("singular value decomposition did not converge"))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().map(|s| s.max(0.0)).collect();
    sv.sort_unstable_by(|a, b| b.partial_cmp(a).expect("singular values are finite"));
    MonotoneSeq::new(sv)
}

/// Kolmogorov-width bound for the operator into L_q:
/// `c sqrt(q) n^{-1/2} (int_0^{1/n} k^2)^{1/2}`. Needs `k` square-integrable.
pub fn rieli_bound(spec: &KernelSpec, q: f64, n: u64, c: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 1.0) {
        return Err(Error::validation(format!("q must satisfy 1 <= q < inf, got {q}")));
    }
    if n == 0 {
        return Err(Error::validation("index must be at least 1"));
    }
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::validation(format!("constant must be positive, got {c}")));
    }
    let tail = kernel::kernel_q_integral(spec, 2.0, 1.0 / n as f64)?;
    Ok(c * q.sqrt() * (n as f64).powf(-0.5) * tail)
}

/// Which side of the two-part net-to-operator transfer inequality to
/// evaluate.
#[derive(Debug, Clone, Copy)]
pub enum Rl04Variant {
    /// Weighted sup of the set's entropy numbers under the kernel metric,
    /// over the inflated range `k <= n^{1 + 1/(p rho)}`.
    I { rho: f64, gamma: f64, p: f64 },
    /// The additive form `1 + sum_{k<=n} k^{-1/2} e_k`.
    II,
}

/// Evaluates the right-hand side of the selected transfer inequality with
/// constant 1 on entropy data of the underlying set. Data shorter than the
/// range is extended by its last value and the result flagged truncated.
pub fn rl04_bound(entropy_data: &MonotoneSeq, variant: &Rl04Variant, n: u64) -> Result<Flagged> {
    if n == 0 {
        return Err(Error::validation("index must be at least 1"));
    }
    let len = entropy_data.len() as u64;
    let value_ext = |k: u64| entropy_data.value(k.min(len) as usize);
    match variant {
        Rl04Variant::I { rho, gamma, p } => {
            if !(rho.is_finite() && *rho > 0.0) {
                return Err(Error::validation(format!("rho must be positive, got {rho}")));
            }
            if !gamma.is_finite() {
                return Err(Error::validation("gamma must be finite"));
            }
            let pp_check = conjugate(*p)?;
            let _ = pp_check;
            let range = (n as f64).powf(1.0 + 1.0 / (p * rho));
            if range > BOUND_RANGE_CAP {
                return Err(Error::resource(format!(
                    "sup range {range:.3e} exceeds the enumeration cap"
                )));
            }
            let k_max = range.floor() as u64;
            let weight =
                |k: u64| (k as f64).powf(*rho) * log2(k as f64 + 1.0).powf(*gamma);
            let mut sup = 0.0f64;
            for k in 1..=k_max.min(len) {
                sup = sup.max(weight(k) * entropy_data.value(k as usize));
            }
            if k_max > len {
                // Beyond the data the weight has at most one interior
                // stationary point (a minimum when gamma < 0), so the sup of
                // the extended tail sits at an endpoint.
                let tail = entropy_data.value(len as usize);
                sup = sup.max(weight(len + 1) * tail).max(weight(k_max) * tail);
            }
            Ok(Flagged { value: sup, truncated: k_max > len })
        }
        Rl04Variant::II => {
            if n as f64 > BOUND_RANGE_CAP {
                return Err(Error::resource(format!(
                    "sum range {n} exceeds the enumeration cap"
                )));
            }
            let sum: f64 =
                (1..=n).map(|k| (k as f64).powf(-0.5) * value_ext(k)).sum();
            Ok(Flagged { value: 1.0 + sum, truncated: n > len })
        }
    }
}

/// Decay profile of the compact parameter set in the restricted-domain rate
/// table.
#[derive(Debug, Clone, Copy)]
pub enum Rl06Decay {
    /// `eps_n(A) ~ n^{-delta}`, `delta >= 1`.
    Polynomial { delta: f64 },
    /// `eps_n(A) ~ exp(-n^delta)`, `delta > 0`.
    Exponential { delta: f64 },
}

/// A rate-table query: the table identifier plus its regime parameters.
///
/// Tables cover: convolution into C[0,1] for pure-power (TH02) and
/// double-log kernels (TH04), their Hilbert-case refinements into C[0,1]
/// (ENTKH) and into L_q (ENTKH2), fractional integration between L_p spaces
/// (RL03) and restricted to compact sets (RL05), the critical-line kernel on
/// compact sets (RL06), slowly-varying kernels (THSV), and the set-to-image
/// transfer exponents (RL04_I).
#[derive(Debug, Clone, Copy)]
pub enum RateQuery {
    Th02 { p: f64, tau: f64, beta: f64 },
    Th04 { p: f64, tau: f64, beta: f64, gamma: f64, slack: Option<f64> },
    Entkh { tau: f64, beta: f64, gamma: f64 },
    Entkh2 { tau: f64, beta: f64, gamma: f64 },
    Rl03 { p: f64, q: f64, alpha: f64 },
    Rl05 { p: f64, alpha: f64, delta: f64, theta: f64 },
    Rl06 { beta: f64, decay: Rl06Decay },
    Thsv { p: f64, tau: f64 },
    Rl04I { p: f64, rho: f64, gamma: f64 },
}

impl RateQuery {
    pub fn table_name(&self) -> &'static str {
        match self {
            RateQuery::Th02 { .. } => "TH02",
            RateQuery::Th04 { .. } => "TH04",
            RateQuery::Entkh { .. } => "ENTKH",
            RateQuery::Entkh2 { .. } => "ENTKH2",
            RateQuery::Rl03 { .. } => "RL03",
            RateQuery::Rl05 { .. } => "RL05",
            RateQuery::Rl06 { .. } => "RL06",
            RateQuery::Thsv { .. } => "THSV",
            RateQuery::Rl04I { .. } => "RL04_I",
        }
    }
}

/// A resolved rate-table case.
#[derive(Debug, Clone)]
pub struct RateAnswer {
    pub table: &'static str,
    /// 1-based position in the table's printed case list.
    pub case_index: usize,
    /// Short regime description.
    pub regime: &'static str,
    /// Decay-positive rate with symbolic constant 1.
    pub formula: RateFormula,
    /// The sup-range exponent for the tables that carry one.
    pub aux_exponent: Option<f64>,
}

fn rate(p0: f64, q0: f64, r0: f64) -> Result<RateFormula> {
    RateFormula::new(1.0, p0, q0, r0)
}

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= REGIME_TOL
}

fn mismatch(table: &str, detail: String) -> Error {
    Error::validation(format!("{table}: no printed regime matches; {detail}"))
}

/// Resolves a query against the printed regime tables and returns the rate
/// exponents of the matching case verbatim, with the constant left at 1.
///
/// The cases of each table are mutually exclusive; parameters outside every
/// case produce an error naming the nearest valid one.
pub fn rate_oracle(query: &RateQuery) -> Result<RateAnswer> {
    let table = query.table_name();
    let finite = |pairs: &[(&str, f64)]| -> Result<()> {
        for (name, v) in pairs {
            if !v.is_finite() {
                return Err(Error::validation(format!("{table}: {name} must be finite, got {v}")));
            }
        }
        Ok(())
    };
    let answer = |case_index: usize,
                  regime: &'static str,
                  formula: RateFormula,
                  aux_exponent: Option<f64>| {
        Ok(RateAnswer { table, case_index, regime, formula, aux_exponent })
    };
    match *query {
        RateQuery::Th02 { p, tau, beta } => {
            finite(&[("tau", tau), ("beta", beta)])?;
            let pp = conjugate(p)?;
            let inv_pp = 1.0 / pp;
            if beta == 0.0 {
                if tau > 0.0 && tau < inv_pp - REGIME_TOL {
                    return answer(1, "pure power, subcritical", rate(1.0 - tau, 0.0, 0.0)?, None);
                }
                return Err(mismatch(
                    table,
                    format!("pure-power case needs 0 < tau < 1/p' = {inv_pp}, got tau = {tau}"),
                ));
            }
            if !near(tau, inv_pp) {
                return Err(mismatch(
                    table,
                    format!("log-corrected cases sit on tau = 1/p' = {inv_pp}, got tau = {tau}"),
                ));
            }
            if beta <= inv_pp + REGIME_TOL {
                return Err(mismatch(
                    table,
                    format!("nearest case needs beta > 1/p' = {inv_pp}, got beta = {beta}"),
                ));
            }
            if beta < 1.0 - REGIME_TOL {
                return answer(2, "critical line, beta < 1", rate(beta - inv_pp, 0.0, 0.0)?, None);
            }
            if near(beta, 1.0) {
                return answer(4, "critical line, beta = 1", rate(1.0 / p, -1.0, 0.0)?, None);
            }
            answer(3, "critical line, beta > 1", rate(1.0 / p, beta - 1.0, 0.0)?, None)
        }
        RateQuery::Th04 { p, tau, beta, gamma, slack } => {
            finite(&[("tau", tau), ("beta", beta), ("gamma", gamma)])?;
            let pp = conjugate(p)?;
            let inv_pp = 1.0 / pp;
            if !(tau > 0.0 && tau <= inv_pp + REGIME_TOL) {
                return Err(mismatch(
                    table,
                    format!("the table needs 0 < tau <= 1/p' = {inv_pp}, got tau = {tau}"),
                ));
            }
            if tau < inv_pp - REGIME_TOL {
                return answer(1, "subcritical power", rate(1.0 - tau, beta, gamma)?, None);
            }
            if near(beta, inv_pp) {
                if gamma > inv_pp + REGIME_TOL {
                    return answer(
                        6,
                        "doubly critical, log-log decay",
                        rate(0.0, gamma - inv_pp, 0.0)?,
                        None,
                    );
                }
                return Err(mismatch(
                    table,
                    format!("the doubly critical case needs gamma > 1/p' = {inv_pp}, got {gamma}"),
                ));
            }
            if beta < inv_pp {
                return Err(mismatch(
                    table,
                    format!("kernel is not p'-integrable; nearest case needs beta >= 1/p' = {inv_pp}"),
                ));
            }
            if beta < 1.0 - REGIME_TOL {
                return answer(2, "critical line, beta < 1", rate(beta - inv_pp, gamma, 0.0)?, None);
            }
            if near(beta, 1.0) {
                if gamma < 1.0 - REGIME_TOL {
                    return answer(
                        4,
                        "critical line, beta = 1, gamma < 1",
                        rate(1.0 / p, gamma - 1.0, 0.0)?,
                        None,
                    );
                }
                let d = slack.unwrap_or(0.0);
                if !(d.is_finite() && d > 0.0) {
                    return Err(Error::validation(format!(
                        "{table}: the beta = 1, gamma >= 1 case carries an arbitrarily small \
                         positive log exponent; pass a positive slack, got {slack:?}"
                    )));
                }
                return answer(
                    5,
                    "critical line, beta = 1, gamma >= 1",
                    rate(1.0 / p, -d, 0.0)?,
                    None,
                );
            }
            answer(3, "critical line, beta > 1", rate(1.0 / p, beta - 1.0, gamma)?, None)
        }
        RateQuery::Entkh { tau, beta, gamma } => {
            finite(&[("tau", tau), ("beta", beta), ("gamma", gamma)])?;
            if !(tau > 0.0 && tau <= 0.5 + REGIME_TOL) {
                return Err(mismatch(
                    table,
                    format!("the Hilbert table needs 0 < tau <= 1/2, got tau = {tau}"),
                ));
            }
            if tau < 0.5 - REGIME_TOL {
                return answer(1, "subcritical power", rate(1.0 - tau, beta, gamma)?, None);
            }
            if near(beta, 0.5) {
                if gamma > 0.5 + REGIME_TOL {
                    return answer(
                        7,
                        "doubly critical, log-log decay",
                        rate(0.0, gamma - 0.5, 0.0)?,
                        None,
                    );
                }
                return Err(mismatch(
                    table,
                    format!("the doubly critical case needs gamma > 1/2, got {gamma}"),
                ));
            }
            if beta < 0.5 {
                return Err(mismatch(
                    table,
                    "kernel is not square-integrable; nearest case needs beta >= 1/2".to_string(),
                ));
            }
            if beta < 1.0 - REGIME_TOL {
                return answer(2, "critical line, beta < 1", rate(beta - 0.5, gamma, 0.0)?, None);
            }
            if near(beta, 1.0) {
                if gamma < 1.0 - REGIME_TOL {
                    return answer(
                        4,
                        "critical line, beta = 1, gamma < 1",
                        rate(0.5, gamma - 1.0, 0.0)?,
                        None,
                    );
                }
                if near(gamma, 1.0) {
                    return answer(
                        5,
                        "critical line, beta = gamma = 1",
                        rate(0.5, 0.0, -1.0)?,
                        None,
                    );
                }
                return answer(
                    6,
                    "critical line, beta = 1, gamma > 1",
                    rate(0.5, 0.0, gamma - 1.0)?,
                    None,
                );
            }
            answer(3, "critical line, beta > 1", rate(0.5, beta - 1.0, gamma)?, None)
        }
        RateQuery::Entkh2 { tau, beta, gamma } => {
            finite(&[("tau", tau), ("beta", beta), ("gamma", gamma)])?;
            if !(tau > 0.0 && tau <= 0.5 + REGIME_TOL) {
                return Err(mismatch(
                    table,
                    format!("the Hilbert-to-L_q table needs 0 < tau <= 1/2, got tau = {tau}"),
                ));
            }
            if tau < 0.5 - REGIME_TOL {
                return answer(1, "subcritical power", rate(1.0 - tau, beta, gamma)?, None);
            }
            if near(beta, 0.5) {
                if gamma > 0.5 + REGIME_TOL {
                    return answer(
                        3,
                        "doubly critical, log-log decay",
                        rate(0.5, 0.0, gamma - 0.5)?,
                        None,
                    );
                }
                return Err(mismatch(
                    table,
                    format!("the doubly critical case needs gamma > 1/2, got {gamma}"),
                ));
            }
            if beta > 0.5 {
                return answer(2, "critical line", rate(0.5, beta - 0.5, gamma)?, None);
            }
            Err(mismatch(
                table,
                "kernel is not square-integrable; nearest case needs beta >= 1/2".to_string(),
            ))
        }
        RateQuery::Rl03 { p, q, alpha } => {
            finite(&[("alpha", alpha)])?;
            for (name, v) in [("p", p), ("q", q)] {
                if v.is_nan() || v < 1.0 {
                    return Err(Error::validation(format!(
                        "{table}: {name} must satisfy 1 <= {name} <= inf, got {v}"
                    )));
                }
            }
            let floor = (1.0 / p - 1.0 / q).max(0.0);
            if alpha <= floor {
                return Err(mismatch(
                    table,
                    format!("the order must exceed max(1/p - 1/q, 0) = {floor}, got {alpha}"),
                ));
            }
            answer(1, "fractional integration", rate(alpha, 0.0, 0.0)?, None)
        }
        RateQuery::Rl05 { p, alpha, delta, theta } => {
            finite(&[("alpha", alpha), ("delta", delta), ("theta", theta)])?;
            let _ = conjugate(p)?;
            if alpha <= 1.0 / p {
                return Err(mismatch(
                    table,
                    format!("the order must exceed 1/p = {}, got {alpha}", 1.0 / p),
                ));
            }
            if delta < 1.0 - REGIME_TOL {
                return Err(mismatch(
                    table,
                    format!("the set decay exponent needs delta >= 1, got {delta}"),
                ));
            }
            if near(delta, 1.0) && theta > REGIME_TOL {
                return Err(mismatch(
                    table,
                    format!("delta = 1 forces theta <= 0 for a subset of [0,1], got {theta}"),
                ));
            }
            let gap = alpha - 1.0 / p;
            answer(
                1,
                "fractional integration on a polynomially small set",
                rate(1.0 / p + delta * gap, -theta * gap, 0.0)?,
                None,
            )
        }
        RateQuery::Rl06 { beta, decay } => {
            finite(&[("beta", beta)])?;
            if beta <= 0.5 + REGIME_TOL {
                return Err(mismatch(
                    table,
                    format!("the critical-line table needs beta > 1/2, got {beta}"),
                ));
            }
            match decay {
                Rl06Decay::Polynomial { delta } => {
                    finite(&[("delta", delta)])?;
                    if delta < 1.0 - REGIME_TOL {
                        return Err(mismatch(
                            table,
                            format!("polynomial set decay needs delta >= 1, got {delta}"),
                        ));
                    }
                    if beta < 1.0 - REGIME_TOL {
                        return answer(
                            1,
                            "polynomial set, beta < 1",
                            rate(beta - 0.5, 0.0, 0.0)?,
                            None,
                        );
                    }
                    if near(beta, 1.0) {
                        return answer(
                            2,
                            "polynomial set, beta = 1",
                            rate(0.5, -1.0, 0.0)?,
                            None,
                        );
                    }
                    answer(3, "polynomial set, beta > 1", rate(0.5, beta - 1.0, 0.0)?, None)
                }
                Rl06Decay::Exponential { delta } => {
                    finite(&[("delta", delta)])?;
                    if delta <= 0.0 {
                        return Err(mismatch(
                            table,
                            format!("exponential set decay needs delta > 0, got {delta}"),
                        ));
                    }
                    answer(
                        4,
                        "exponentially small set",
                        rate(0.5 + delta * (beta - 0.5), 0.0, 0.0)?,
                        None,
                    )
                }
            }
        }
        RateQuery::Thsv { p, tau } => {
            finite(&[("tau", tau)])?;
            let pp = conjugate(p)?;
            if !(tau > 0.0 && tau < 1.0 / pp - REGIME_TOL) {
                return Err(mismatch(
                    table,
                    format!("slowly varying kernels need 0 < tau < 1/p' = {}", 1.0 / pp),
                ));
            }
            let aux = 1.0 + (pp - 1.0) / (1.0 - tau * pp);
            answer(1, "slowly varying correction", rate(1.0 - tau, 0.0, 0.0)?, Some(aux))
        }
        RateQuery::Rl04I { p, rho, gamma } => {
            finite(&[("rho", rho), ("gamma", gamma)])?;
            let _ = conjugate(p)?;
            if rho <= 0.0 {
                return Err(mismatch(table, format!("the transfer needs rho > 0, got {rho}")));
            }
            let aux = 1.0 + 1.0 / (p * rho);
            answer(1, "set-to-image transfer", rate(rho + 1.0 / p, gamma, 0.0)?, Some(aux))
        }
    }
}

/// Images of the `2^n` sign-pattern witnesses under the Volterra operator,
/// sampled at `grid_n` points and compared in the sup norm. The pairwise
/// distances realize the Rademacher net separation when the block endpoints
/// `i/n` lie on the grid.
pub fn rademacher_image_cloud(spec: &KernelSpec, n: u64, grid_n: usize) -> Result<PointCloud> {
    require_volterra(spec)?;
    if !(1..=12).contains(&n) {
        return Err(Error::resource(format!("sign-pattern clouds are capped at n = 12, got {n}")));
    }
    if !(2..=1024).contains(&grid_n) {
        return Err(Error::validation(format!("grid_n must lie in 2..=1024, got {grid_n}")));
    }
    let h = 1.0 / (grid_n - 1) as f64;
    let nf = n as f64;
    let tail = |r: f64| -> Result<f64> {
        if r <= 1e-15 {
            Ok(0.0)
        } else {
            kernel::kernel_q_integral(spec, 1.0, r.min(1.0))
        }
    };
    // block_mass[l][idx] = int over block l of k(t - x) dx at t = idx * h.
    let mut block_mass = vec![vec![0.0; grid_n]; n as usize];
    for (l, row) in block_mass.iter_mut().enumerate() {
        let lo = l as f64 / nf;
        let hi = (l + 1) as f64 / nf;
        for (idx, slot) in row.iter_mut().enumerate() {
            let t = idx as f64 * h;
            *slot = tail((t - lo).max(0.0))? - tail((t - hi).max(0.0))?;
        }
    }
    let count = 1usize << n;
    let mut points = Vec::with_capacity(count);
    for mask in 0..count {
        let mut coords = vec![0.0; grid_n];
        for (l, row) in block_mass.iter().enumerate() {
            let sign = if mask >> l & 1 == 1 { 1.0 } else { -1.0 };
            for (c, v) in coords.iter_mut().zip(row) {
                *c += sign * v;
            }
        }
        points.push(coords);
    }
    PointCloud::new(points, Norm::Inf)
}

/// Images of the `m` kernel-atom witnesses, sampled at `grid_n` points in
/// the sup norm. Atom `j` is the normalized block function
/// `alpha_m^{-1} k(j/m - x)^{p'/p}` on its block.
pub fn atom_image_cloud(spec: &KernelSpec, p: f64, m: u64, grid_n: usize) -> Result<PointCloud> {
    let rows = atom_image_rows(spec, p, m, grid_n)?;
    PointCloud::new(rows, Norm::Inf)
}

fn atom_image_rows(spec: &KernelSpec, p: f64, m: u64, grid_n: usize) -> Result<Vec<Vec<f64>>> {
    require_volterra(spec)?;
    let pp = conjugate(p)?;
    if !(2..=64).contains(&m) {
        return Err(Error::resource(format!("atom clouds are capped at m = 64, got {m}")));
    }
    if !(2..=1024).contains(&grid_n) {
        return Err(Error::validation(format!("grid_n must lie in 2..=1024, got {grid_n}")));
    }
    let h = 1.0 / (grid_n - 1) as f64;
    let mf = m as f64;
    let alpha_m = kernel::kernel_q_integral(spec, pp, 1.0 / mf)?.powf(pp / p);
    if !(alpha_m.is_finite() && alpha_m > 0.0) {
        return Err(Error::numeric(format!("degenerate atom normalizer {alpha_m}")));
    }
    let mut rows = Vec::with_capacity(m as usize);
    for j in 1..=m {
        let lo = (j - 1) as f64 / mf;
        let node = j as f64 / mf;
        let mut coords = vec![0.0; grid_n];
        for (idx, slot) in coords.iter_mut().enumerate() {
            let t = idx as f64 * h;
            if t <= lo + 1e-15 {
                continue;
            }
            let ub = node.min(t);
            // v = ub - x keeps the kernel singularities at the left endpoint.
            let q = quad::tanh_sinh(
                |v| {
                    let x = ub - v;
                    let a = spec.eval((t - x).max(EVAL_FLOOR));
                    let b = spec.eval((node - x).max(EVAL_FLOOR)).powf(pp / p);
                    a * b
                },
                0.0,
                ub - lo,
                1e-10,
            )?;
            *slot = q.value / alpha_m;
        }
        rows.push(coords);
    }
    Ok(rows)
}

fn combinations(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 || k > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        while i > 0 && idx[i - 1] == m - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Images of the normalized `sqrt(m)`-subset means of the kernel atoms,
/// sampled at `grid_n` points in the sup norm.
pub fn means_image_cloud(spec: &KernelSpec, p: f64, m: u64, grid_n: usize) -> Result<PointCloud> {
    let root = (m as f64).sqrt().round() as u64;
    if m < 4 || root * root != m {
        return Err(Error::validation(format!(
            "the means net needs a perfect square m >= 4, got {m}"
        )));
    }
    if m > 16 {
        return Err(Error::resource(format!("means clouds are capped at m = 16, got {m}")));
    }
    let rows = atom_image_rows(spec, p, m, grid_n)?;
    let scale = (root as f64).powf(-1.0 / p);
    let points = combinations(m as usize, root as usize)
        .into_iter()
        .map(|subset| {
            let mut coords = vec![0.0; grid_n];
            for j in subset {
                for (c, v) in coords.iter_mut().zip(&rows[j]) {
                    *c += v;
                }
            }
            for c in &mut coords {
                *c *= scale;
            }
            coords
        })
        .collect();
    PointCloud::new(points, Norm::Inf)
}
