//! Python bindings for the metric-entropy laboratory.
//!
//! Exposes the covering computations, the kernel calculus, discretized
//! operators, hull bounds, Hardy checks, and the rate toolkit as plain
//! functions plus two thin wrapper classes (`Kernel`, `Operator`). Values
//! cross the boundary as floats, lists, and dicts; crate errors map to
//! `ValueError` (validation), `ArithmeticError` (numeric), and
//! `MemoryError` (resource caps).

use std::sync::Arc;

use pyo3::exceptions::{PyArithmeticError, PyIOError, PyMemoryError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use entlab::hull::{self, AlphaList, SteinwartParams};
use entlab::kernel::{self, KernelMode, KernelSpec};
use entlab::metricspace::{
    self, entropy_numbers as core_entropy_numbers, CoverMethod, Norm, PointCloud,
};
use entlab::operator::{
    self, DiscretizedOperator, OpKernel, RateQuery, Rl04Variant, Rl06Decay,
};
use entlab::rates;
use entlab::seqspace::{self, MonotoneSeq};
use entlab::Error;

fn pyerr(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::Validation(_) => PyValueError::new_err(msg),
        Error::Numeric(_) => PyArithmeticError::new_err(msg),
        Error::Resource(_) => PyMemoryError::new_err(msg),
        Error::Io(_) => PyIOError::new_err(msg),
    }
}

fn parse_norm(p: f64) -> Result<Norm, PyErr> {
    let norm = if p.is_infinite() { Norm::Inf } else { Norm::P(p) };
    norm.validate().map_err(pyerr)
}

fn parse_mode(mode: &str) -> Result<KernelMode, PyErr> {
    match mode.to_ascii_lowercase().as_str() {
        "vo" | "volterra" => Ok(KernelMode::Volterra),
        "ws" | "weakly-singular" => Ok(KernelMode::WeaklySingular),
        other => Err(PyValueError::new_err(format!("mode must be 'vo' or 'ws', got {other:?}"))),
    }
}

fn parse_method(method: &str) -> Result<CoverMethod, PyErr> {
    match method.to_ascii_lowercase().as_str() {
        "exact" => Ok(CoverMethod::Exact),
        "greedy" => Ok(CoverMethod::Greedy),
        "packing" => Ok(CoverMethod::Packing),
        other => Err(PyValueError::new_err(format!(
            "method must be 'exact', 'greedy', or 'packing', got {other:?}"
        ))),
    }
}

fn cloud(points: Vec<Vec<f64>>, p: f64) -> Result<PointCloud, PyErr> {
    PointCloud::new(points, parse_norm(p)?).map_err(pyerr)
}

fn monotone(values: Vec<f64>) -> Result<MonotoneSeq, PyErr> {
    MonotoneSeq::new(values).map_err(pyerr)
}

/// A singular convolution kernel: one of the built-in decreasing families.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Kernel {
    inner: KernelSpec,
}

#[pymethods]
impl Kernel {
    /// k(x) = x^{-tau}.
    #[staticmethod]
    #[pyo3(signature = (tau, mode="vo"))]
    fn power(tau: f64, mode: &str) -> PyResult<Self> {
        Ok(Kernel { inner: KernelSpec::power(tau, parse_mode(mode)?).map_err(pyerr)? })
    }

    /// k(x) = x^{-tau} (c0 - ln x)^{-beta}.
    #[staticmethod]
    #[pyo3(signature = (tau, beta, c0=1.0, mode="vo"))]
    fn log_power(tau: f64, beta: f64, c0: f64, mode: &str) -> PyResult<Self> {
        Ok(Kernel {
            inner: KernelSpec::log_power(tau, beta, c0, parse_mode(mode)?).map_err(pyerr)?,
        })
    }

    /// k(x) = x^{-tau} (c0 - ln x)^{-beta} (c0 + ln(c0 - ln x))^{-gamma}.
    #[staticmethod]
    #[pyo3(signature = (tau, beta, gamma, c0=1.0, mode="vo"))]
    fn double_log(tau: f64, beta: f64, gamma: f64, c0: f64, mode: &str) -> PyResult<Self> {
        Ok(Kernel {
            inner: KernelSpec::double_log(tau, beta, gamma, c0, parse_mode(mode)?)
                .map_err(pyerr)?,
        })
    }

    /// Pointwise kernel value k(x), x in (0, 1].
    fn eval(&self, x: f64) -> f64 {
        self.inner.eval(x)
    }

    /// Tail integral (int_0^r k(x)^q dx)^{1/q}.
    fn q_integral(&self, q: f64, r: f64) -> PyResult<f64> {
        kernel::kernel_q_integral(&self.inner, q, r).map_err(pyerr)
    }

    /// Quadrature oracle for the tail integral.
    #[pyo3(signature = (q, r, tol=1e-10))]
    fn q_integral_quadrature(&self, q: f64, r: f64, tol: f64) -> PyResult<f64> {
        kernel::kernel_q_integral_quadrature(&self.inner, q, r, tol).map_err(pyerr)
    }

    /// Pseudo-metric d(s, t) induced by the kernel in L_q.
    fn pseudo_metric(&self, q: f64, s: f64, t: f64) -> PyResult<f64> {
        kernel::pseudo_metric(&self.inner, q, s, t).map_err(pyerr)
    }

    /// Two-sided bracket between d(s, t) and the tail integral at |s - t|.
    fn sandwich_check<'py>(
        &self,
        py: Python<'py>,
        q: f64,
        s: f64,
        t: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let out = kernel::sandwich_check(&self.inner, q, s, t).map_err(pyerr)?;
        let d = PyDict::new(py);
        d.set_item("base", out.base)?;
        d.set_item("d", out.d)?;
        d.set_item("lower", out.lower)?;
        d.set_item("upper", out.upper)?;
        d.set_item("passed", out.passed)?;
        Ok(d)
    }

    /// Entropy rate exponents of ([0,1], d) as a dict with C, p0, q0, r0.
    fn interval_rate<'py>(&self, py: Python<'py>, q: f64) -> PyResult<Bound<'py, PyDict>> {
        let f = kernel::interval_rate_under_d(&self.inner, q).map_err(pyerr)?;
        formula_dict(py, &f, None, None)
    }
}

/// Product-integration discretization of a convolution or fractional
/// integration operator on the uniform grid over [0, 1].
#[pyclass]
struct Operator {
    inner: DiscretizedOperator,
}

#[pymethods]
impl Operator {
    /// Fractional integration of order alpha.
    #[staticmethod]
    #[pyo3(signature = (alpha, grid=256))]
    fn riemann_liouville(alpha: f64, grid: usize) -> PyResult<Self> {
        Ok(Operator {
            inner: DiscretizedOperator::new(OpKernel::RiemannLiouville { alpha }, grid)
                .map_err(pyerr)?,
        })
    }

    /// Convolution with a built-in kernel.
    #[staticmethod]
    #[pyo3(signature = (kernel, grid=256))]
    fn convolution(kernel: &Kernel, grid: usize) -> PyResult<Self> {
        Ok(Operator {
            inner: DiscretizedOperator::new(OpKernel::Convolution(kernel.inner.clone()), grid)
                .map_err(pyerr)?,
        })
    }

    /// The uniform grid points.
    fn grid(&self) -> Vec<f64> {
        self.inner.grid()
    }

    /// Apply the operator to grid samples (length must match the grid).
    fn apply(&self, values: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.apply(&values).map_err(pyerr)
    }

    /// Singular values of the scaled discretization, descending.
    fn singular_values(&self) -> PyResult<Vec<f64>> {
        Ok(operator::singular_values(&self.inner).map_err(pyerr)?.as_slice().to_vec())
    }

    /// Translation-smoothness bound of the image of f (Volterra only).
    fn shift_check<'py>(
        &self,
        py: Python<'py>,
        p: f64,
        delta: f64,
        values: Vec<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let out = operator::shift_modulus_check_with(&self.inner, p, delta, &values)
            .map_err(pyerr)?;
        let d = PyDict::new(py);
        d.set_item("lhs", out.lhs)?;
        d.set_item("rhs", out.rhs)?;
        d.set_item("passed", out.passed)?;
        Ok(d)
    }
}

/// Entropy numbers eps_1..eps_n_max of a finite point cloud.
#[pyfunction]
#[pyo3(signature = (points, n_max, method="greedy", p=2.0))]
fn entropy_numbers(
    points: Vec<Vec<f64>>,
    n_max: usize,
    method: &str,
    p: f64,
) -> PyResult<Vec<f64>> {
    core_entropy_numbers(&cloud(points, p)?, n_max, parse_method(method)?).map_err(pyerr)
}

/// One covering / packing computation at a fixed radius.
#[pyfunction]
#[pyo3(signature = (points, eps, method="greedy", p=2.0))]
fn cover<'py>(
    py: Python<'py>,
    points: Vec<Vec<f64>>,
    eps: f64,
    method: &str,
    p: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let cloud = cloud(points, p)?;
    let out = match parse_method(method)? {
        CoverMethod::Exact => metricspace::exact_cover(&cloud, eps),
        CoverMethod::Greedy => metricspace::greedy_cover(&cloud, eps),
        CoverMethod::Packing => metricspace::packing_lower(&cloud, eps),
    }
    .map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("epsilon", out.epsilon)?;
    d.set_item("count", out.count)?;
    d.set_item("centers", out.centers)?;
    d.set_item("method", out.method.to_string())?;
    Ok(d)
}

/// Entropy-number brackets of the absolutely convex hull of the generators.
#[pyfunction]
#[pyo3(signature = (generators, mesh=0.1, n_max=4, p=2.0))]
fn hull_bounds<'py>(
    py: Python<'py>,
    generators: Vec<Vec<f64>>,
    mesh: f64,
    n_max: usize,
    p: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = hull::HullSpec::new(generators, parse_norm(p)?).map_err(pyerr)?;
    let table =
        hull::hull_entropy_bounds_upto(&spec, mesh, n_max, hull::NET_POINT_CAP).map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("mesh", table.mesh)?;
    d.set_item("delta", table.delta)?;
    d.set_item(
        "rows",
        table.rows.iter().map(|r| (r.n, r.lower, r.upper)).collect::<Vec<_>>(),
    )?;
    Ok(d)
}

/// Diagonal-hull entropy lower formula for sigma_k weights in l_p.
#[pyfunction]
#[pyo3(signature = (sigma, p, n, c=1.0))]
fn l02_lower(sigma: Vec<f64>, p: f64, n: usize, c: f64) -> PyResult<(f64, bool)> {
    let out = hull::l02_lower(&monotone(sigma)?, p, n, c).map_err(pyerr)?;
    Ok((out.value, out.truncated))
}

/// Two-term dyadic entropy bound with the doubling index m.
#[pyfunction]
#[pyo3(signature = (data, alphas, n, p=2.0, t=1.0, c_t=1.0, tau_p=1.0))]
#[allow(clippy::too_many_arguments)]
fn steinwart_upper(
    data: Vec<f64>,
    alphas: Vec<u64>,
    n: usize,
    p: f64,
    t: f64,
    c_t: f64,
    tau_p: f64,
) -> PyResult<(u64, f64, bool)> {
    let params = SteinwartParams { p, t, c_t, tau_p, alphas: AlphaList::Exact(alphas) };
    let out = hull::steinwart_upper(&monotone(data)?, &params, n).map_err(pyerr)?;
    Ok((out.m, out.bound, out.truncated))
}

/// Distance-net entropy lower bound for the operator image of the unit ball.
#[pyfunction]
#[pyo3(signature = (kernel, kind, n, p=2.0))]
fn net_lower<'py>(
    py: Python<'py>,
    kernel: &Kernel,
    kind: &str,
    n: u64,
    p: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let net = match kind.to_ascii_lowercase().as_str() {
        "rademacher" => operator::net_lower_rademacher(&kernel.inner, n),
        "atoms" => operator::net_lower_kernel_atoms(&kernel.inner, p, n),
        "atoms-dyadic" => operator::net_lower_kernel_atoms_dyadic(&kernel.inner, p, n),
        "means" => operator::net_lower_means(&kernel.inner, p, n),
        other => {
            return Err(PyValueError::new_err(format!(
                "kind must be 'rademacher', 'atoms', 'atoms-dyadic', or 'means', got {other:?}"
            )))
        }
    }
    .map_err(pyerr)?;
    let d = PyDict::new(py);
    d.set_item("kind", net.net_kind.to_string())?;
    d.set_item("m_or_n", net.m_or_n)?;
    d.set_item("separation", net.separation)?;
    d.set_item("log2_cardinality", net.log2_cardinality)?;
    d.set_item("bound", net.bound())?;
    d.set_item("entropy_index", net.entropy_index())?;
    Ok(d)
}

/// Kolmogorov-width bound of the image ball into L_q.
#[pyfunction]
#[pyo3(signature = (kernel, q, n, c=1.0))]
fn rieli_bound(kernel: &Kernel, q: f64, n: u64, c: f64) -> PyResult<f64> {
    operator::rieli_bound(&kernel.inner, q, n, c).map_err(pyerr)
}

/// Max-over-grid error of the fractional semigroup law on a polynomial.
#[pyfunction]
#[pyo3(signature = (alpha, beta, coeffs, grid=256))]
fn semigroup_check(alpha: f64, beta: f64, coeffs: Vec<f64>, grid: usize) -> PyResult<f64> {
    operator::semigroup_check(alpha, beta, &coeffs, grid).map_err(pyerr)
}

/// Set-to-image entropy transfer bound. variant: "i" needs rho/gamma/p.
#[pyfunction]
#[pyo3(signature = (data, variant, n, rho=0.0, gamma=0.0, p=2.0))]
fn rl04_bound(
    data: Vec<f64>,
    variant: &str,
    n: u64,
    rho: f64,
    gamma: f64,
    p: f64,
) -> PyResult<(f64, bool)> {
    let variant = match variant.to_ascii_lowercase().as_str() {
        "i" => Rl04Variant::I { rho, gamma, p },
        "ii" => Rl04Variant::II,
        other => {
            return Err(PyValueError::new_err(format!("variant must be 'i' or 'ii', got {other:?}")))
        }
    };
    let out = operator::rl04_bound(&monotone(data)?, &variant, n).map_err(pyerr)?;
    Ok((out.value, out.truncated))
}

/// Weighted-sum Hardy inequality check; returns (lhs, rhs, ratio, argmax).
#[pyfunction]
#[pyo3(signature = (seq, t, r, s=None, alpha=0.0, n_max=None))]
fn lh1_check(
    seq: Vec<f64>,
    t: f64,
    r: f64,
    s: Option<f64>,
    alpha: f64,
    n_max: Option<usize>,
) -> PyResult<(f64, f64, f64, usize)> {
    let seq = monotone(seq)?;
    let n_max = n_max.unwrap_or(seq.len());
    let out = seqspace::lh1_check(&seq, t, r, s.unwrap_or(r), alpha, n_max).map_err(pyerr)?;
    Ok((out.lhs, out.rhs, out.ratio, out.argmax_lhs))
}

/// Sup-form Hardy inequality check; returns (lhs, rhs, ratio, argmax).
#[pyfunction]
#[pyo3(signature = (seq, t, r, alpha=0.0, n_max=None))]
fn lh2_check(
    seq: Vec<f64>,
    t: f64,
    r: f64,
    alpha: f64,
    n_max: Option<usize>,
) -> PyResult<(f64, f64, f64, usize)> {
    let seq = monotone(seq)?;
    let n_max = n_max.unwrap_or(seq.len());
    let out = seqspace::lh2_check(&seq, t, r, alpha, n_max).map_err(pyerr)?;
    Ok((out.lhs, out.rhs, out.ratio, out.argmax_lhs))
}

/// Enumerated constant from the sup-form Hardy proof.
#[pyfunction]
#[pyo3(signature = (t, r, alpha=0.0, n_max=1_000_000))]
fn lh2_proof_constant(t: f64, r: f64, alpha: f64, n_max: usize) -> PyResult<f64> {
    seqspace::lh2_proof_constant(t, r, alpha, n_max).map_err(pyerr)
}

/// C n^{-p0} (log2(n+1))^{-q0} (log2 log2(n+3))^{-r0} at integer n.
#[pyfunction]
#[pyo3(signature = (c, p0, q0, r0, n))]
fn eval_rate(c: f64, p0: f64, q0: f64, r0: f64, n: u64) -> PyResult<f64> {
    let f = rates::RateFormula::new(c, p0, q0, r0).map_err(pyerr)?;
    Ok(rates::eval_rate(&f, n))
}

/// Least-squares fit of the three-scale rate to (n, value) samples.
#[pyfunction]
#[pyo3(signature = (samples, fit_r0=false))]
fn fit_rate<'py>(
    py: Python<'py>,
    samples: Vec<(u64, f64)>,
    fit_r0: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let fit = rates::fit_rate_samples(&samples, fit_r0).map_err(pyerr)?;
    formula_dict(py, &fit.formula, Some(fit.residual), Some(fit.condition))
}

fn formula_dict<'py>(
    py: Python<'py>,
    f: &rates::RateFormula,
    residual: Option<f64>,
    condition: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("C", f.c)?;
    d.set_item("p0", f.p0)?;
    d.set_item("q0", f.q0)?;
    d.set_item("r0", f.r0)?;
    if let Some(r) = residual {
        d.set_item("residual", r)?;
    }
    if let Some(c) = condition {
        d.set_item("condition", c)?;
    }
    Ok(d)
}

/// Resolve a regime table to its rate exponents.
///
/// table: one of "th02", "th04", "entkh", "entkh2", "rl03", "rl05", "rl06",
/// "thsv", "rl04-i"; remaining keyword arguments as the table requires.
#[pyfunction]
#[pyo3(signature = (table, p=None, q=None, tau=None, beta=None, gamma=None, alpha=None,
                    delta=None, theta=None, rho=None, slack=None, decay=None))]
#[allow(clippy::too_many_arguments)]
fn rate_oracle<'py>(
    py: Python<'py>,
    table: &str,
    p: Option<f64>,
    q: Option<f64>,
    tau: Option<f64>,
    beta: Option<f64>,
    gamma: Option<f64>,
    alpha: Option<f64>,
    delta: Option<f64>,
    theta: Option<f64>,
    rho: Option<f64>,
    slack: Option<f64>,
    decay: Option<String>,
) -> PyResult<Bound<'py, PyDict>> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| PyValueError::new_err(format!("table {table:?} needs parameter {name}")))
    };
    let query = match table.to_ascii_lowercase().replace('_', "-").as_str() {
        "th02" => RateQuery::Th02 {
            p: need(p, "p")?,
            tau: need(tau, "tau")?,
            beta: beta.unwrap_or(0.0),
        },
        "th04" => RateQuery::Th04 {
            p: need(p, "p")?,
            tau: need(tau, "tau")?,
            beta: beta.unwrap_or(0.0),
            gamma: gamma.unwrap_or(0.0),
            slack,
        },
        "entkh" => RateQuery::Entkh {
            tau: need(tau, "tau")?,
            beta: beta.unwrap_or(0.0),
            gamma: gamma.unwrap_or(0.0),
        },
        "entkh2" => RateQuery::Entkh2 {
            tau: need(tau, "tau")?,
            beta: beta.unwrap_or(0.0),
            gamma: gamma.unwrap_or(0.0),
        },
        "rl03" => RateQuery::Rl03 { p: need(p, "p")?, q: need(q, "q")?, alpha: need(alpha, "alpha")? },
        "rl05" => RateQuery::Rl05 {
            p: need(p, "p")?,
            alpha: need(alpha, "alpha")?,
            delta: need(delta, "delta")?,
            theta: theta.unwrap_or(0.0),
        },
        "rl06" => {
            let delta = need(delta, "delta")?;
            let decay = match decay.as_deref().unwrap_or("poly").to_ascii_lowercase().as_str() {
                "poly" | "polynomial" => Rl06Decay::Polynomial { delta },
                "exp" | "exponential" => Rl06Decay::Exponential { delta },
                other => {
                    return Err(PyValueError::new_err(format!(
                        "decay must be 'poly' or 'exp', got {other:?}"
                    )))
                }
            };
            RateQuery::Rl06 { beta: need(beta, "beta")?, decay }
        }
        "thsv" => RateQuery::Thsv { p: need(p, "p")?, tau: need(tau, "tau")? },
        "rl04-i" => RateQuery::Rl04I {
            p: need(p, "p")?,
            rho: need(rho, "rho")?,
            gamma: gamma.unwrap_or(0.0),
        },
        other => return Err(PyValueError::new_err(format!("unknown table {other:?}"))),
    };
    let a = operator::rate_oracle(&query).map_err(pyerr)?;
    let d = formula_dict(py, &a.formula, None, None)?;
    d.set_item("table", a.table)?;
    d.set_item("case", a.case_index)?;
    d.set_item("regime", a.regime)?;
    d.set_item("aux", a.aux_exponent)?;
    Ok(d)
}

/// Custom kernel built from a Python callable (used for quadrature paths).
#[pyfunction]
#[pyo3(signature = (f, tau_hint, mode="vo"))]
fn custom_kernel(f: Py<PyAny>, tau_hint: f64, mode: &str) -> PyResult<Kernel> {
    let mode = parse_mode(mode)?;
    let closure = Arc::new(move |x: f64| -> f64 {
        Python::attach(|py| {
            f.call1(py, (x,))
                .and_then(|v| v.extract::<f64>(py))
                .unwrap_or(f64::NAN)
        })
    });
    Ok(Kernel { inner: KernelSpec::custom(closure, tau_hint, mode).map_err(pyerr)? })
}

#[pymodule]
fn entlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Kernel>()?;
    m.add_class::<Operator>()?;
    m.add_function(wrap_pyfunction!(entropy_numbers, m)?)?;
    m.add_function(wrap_pyfunction!(cover, m)?)?;
    m.add_function(wrap_pyfunction!(hull_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(l02_lower, m)?)?;
    m.add_function(wrap_pyfunction!(steinwart_upper, m)?)?;
    m.add_function(wrap_pyfunction!(net_lower, m)?)?;
    m.add_function(wrap_pyfunction!(rieli_bound, m)?)?;
    m.add_function(wrap_pyfunction!(semigroup_check, m)?)?;
    m.add_function(wrap_pyfunction!(rl04_bound, m)?)?;
    m.add_function(wrap_pyfunction!(lh1_check, m)?)?;
    m.add_function(wrap_pyfunction!(lh2_check, m)?)?;
    m.add_function(wrap_pyfunction!(lh2_proof_constant, m)?)?;
    m.add_function(wrap_pyfunction!(eval_rate, m)?)?;
    m.add_function(wrap_pyfunction!(fit_rate, m)?)?;
    m.add_function(wrap_pyfunction!(rate_oracle, m)?)?;
    m.add_function(wrap_pyfunction!(custom_kernel, m)?)?;
    Ok(())
}
