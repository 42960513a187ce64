//! Python bindings for the symdom library.
//!
//! The module exposes the two expansion settings under flat, tuple-based
//! functions: `planar_*` for the curved planar domains and `solid_*` for the
//! solids of revolution. Domains are `(a, b, c)` triples, planar weights are
//! `(k1, k2, k3)` exponent triples, solid weights are `(beta, gamma)` pairs,
//! and points are plain coordinate tuples. Reports come back as dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};

use symdom::approx::{convergence_report, localization_profile, Space};
use symdom::curved2d::{self, CurvedWeightParams, DomainParams2};
use symdom::revolution::{self, BallWeightParams, RevBasisIndex, RevDomainParams};

fn err(e: symdom::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn planar_params(
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
) -> PyResult<(DomainParams2, CurvedWeightParams)> {
    let dp = DomainParams2::new(domain.0, domain.1, domain.2).map_err(err)?;
    let wp = CurvedWeightParams::new([kappa.0, kappa.1, kappa.2]).map_err(err)?;
    Ok((dp, wp))
}

fn solid_params(
    domain: (f64, f64, f64),
    beta: f64,
    gamma: f64,
) -> PyResult<(RevDomainParams, BallWeightParams)> {
    let dp = RevDomainParams::new(domain.0, domain.1, domain.2).map_err(err)?;
    let bw = BallWeightParams::new(beta, gamma).map_err(err)?;
    Ok((dp, bw))
}

/// Quadratic bijection from the curved domain onto the unit disk.
#[pyfunction]
fn planar_map(domain: (f64, f64, f64), pt: (f64, f64)) -> PyResult<(f64, f64)> {
    let dp = DomainParams2::new(domain.0, domain.1, domain.2).map_err(err)?;
    let [s, t] = curved2d::psi(&dp, [pt.0, pt.1]).map_err(err)?;
    Ok((s, t))
}

/// Inverse of `planar_map`, from the closed unit disk back to the domain.
#[pyfunction]
fn planar_map_inv(domain: (f64, f64, f64), st: (f64, f64)) -> PyResult<(f64, f64)> {
    let dp = DomainParams2::new(domain.0, domain.1, domain.2).map_err(err)?;
    let [u, v] = curved2d::psi_inv(&dp, [st.0, st.1]).map_err(err)?;
    Ok((u, v))
}

/// Positive quadrature of the stated polynomial exactness on the curved
/// domain, as `(nodes, weights)`.
#[pyfunction]
fn planar_quadrature(
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
    degree: usize,
) -> PyResult<(Vec<(f64, f64)>, Vec<f64>)> {
    let (dp, wp) = planar_params(domain, kappa)?;
    let rule = curved2d::lambda_quadrature(&dp, &wp, degree).map_err(err)?;
    let nodes = rule.nodes.iter().map(|&[u, v]| (u, v)).collect();
    Ok((nodes, rule.weights))
}

/// Value of the degree-`n`, index-`j` orthogonal family member at a point.
#[pyfunction]
fn planar_basis(
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
    j: usize,
    n: usize,
    pt: (f64, f64),
) -> PyResult<f64> {
    let (dp, wp) = planar_params(domain, kappa)?;
    curved2d::q_basis_eval(&dp, &wp, j, n, [pt.0, pt.1]).map_err(err)
}

/// Norms `norms[n][j]` under the mass-normalized weight.
#[pyfunction]
fn planar_norms(
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
    nmax: usize,
) -> PyResult<Vec<Vec<f64>>> {
    let (dp, wp) = planar_params(domain, kappa)?;
    curved2d::q_norms(&dp, &wp, nmax).map_err(err)
}

/// Eigenvalue of the spectral operator on the degree-`n` subspace.
#[pyfunction]
fn planar_eigenvalue(kappa: (f64, f64, f64), n: usize) -> PyResult<f64> {
    let wp = CurvedWeightParams::new([kappa.0, kappa.1, kappa.2]).map_err(err)?;
    Ok(curved2d::curved_eigenvalue(&wp, n))
}

/// Degree-`n` reproducing kernel on the curved domain (needs `k1 = 0`).
#[pyfunction]
fn planar_kernel(
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
    n: usize,
    p1: (f64, f64),
    p2: (f64, f64),
) -> PyResult<f64> {
    let (dp, wp) = planar_params(domain, kappa)?;
    curved2d::curved_kernel_eval(&dp, &wp, n, [p1.0, p1.1], [p2.0, p2.1]).map_err(err)
}

/// Quadratic bijection from the solid of revolution onto the unit ball.
#[pyfunction]
fn solid_map(domain: (f64, f64, f64), p: (f64, f64, f64)) -> PyResult<(f64, f64, f64)> {
    let dp = RevDomainParams::new(domain.0, domain.1, domain.2).map_err(err)?;
    let [y1, y2, y3] = revolution::rev_psi(&dp, [p.0, p.1, p.2]).map_err(err)?;
    Ok((y1, y2, y3))
}

/// Inverse of `solid_map`, from the closed unit ball back to the solid.
#[pyfunction]
fn solid_map_inv(domain: (f64, f64, f64), y: (f64, f64, f64)) -> PyResult<(f64, f64, f64)> {
    let dp = RevDomainParams::new(domain.0, domain.1, domain.2).map_err(err)?;
    let [x1, x2, t] = revolution::rev_psi_inv(&dp, [y.0, y.1, y.2]).map_err(err)?;
    Ok((x1, x2, t))
}

/// Positive quadrature on the solid, as `(nodes, weights)`.
#[pyfunction]
fn solid_quadrature(
    domain: (f64, f64, f64),
    beta: f64,
    gamma: f64,
    degree: usize,
) -> PyResult<(Vec<(f64, f64, f64)>, Vec<f64>)> {
    let (dp, bw) = solid_params(domain, beta, gamma)?;
    let rule = revolution::rev_quadrature(&dp, &bw, degree).map_err(err)?;
    let nodes = rule.nodes.iter().map(|&[x1, x2, t]| (x1, x2, t)).collect();
    Ok((nodes, rule.weights))
}

/// Index tuples `(n, k, j, l)` of the degree-`n` family members on the solid.
#[pyfunction]
fn solid_indices(n: usize) -> Vec<(usize, usize, usize, usize)> {
    revolution::rev_indices(n)
        .iter()
        .map(|i| (i.n, i.k, i.j, i.l))
        .collect()
}

/// Value of one family member on the solid at a point.
#[pyfunction]
fn solid_basis(
    domain: (f64, f64, f64),
    beta: f64,
    gamma: f64,
    idx: (usize, usize, usize, usize),
    p: (f64, f64, f64),
) -> PyResult<f64> {
    let (dp, bw) = solid_params(domain, beta, gamma)?;
    let idx = RevBasisIndex {
        n: idx.0,
        k: idx.1,
        j: idx.2,
        l: idx.3,
    };
    revolution::rev_basis_eval(&dp, &bw, &idx, [p.0, p.1, p.2]).map_err(err)
}

/// Norms per degree as `norms[n] = [((n, k, j, l), value), ...]`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn solid_norms(
    domain: (f64, f64, f64),
    beta: f64,
    gamma: f64,
    nmax: usize,
) -> PyResult<Vec<Vec<((usize, usize, usize, usize), f64)>>> {
    let (dp, bw) = solid_params(domain, beta, gamma)?;
    let table = revolution::rev_basis_norms(&dp, &bw, nmax).map_err(err)?;
    Ok(table
        .iter()
        .map(|row| {
            row.iter()
                .map(|&(i, v)| ((i.n, i.k, i.j, i.l), v))
                .collect()
        })
        .collect())
}

/// Eigenvalue of the spectral operator on the degree-`n` subspace.
#[pyfunction]
fn solid_eigenvalue(beta: f64, gamma: f64, n: usize) -> PyResult<f64> {
    let bw = BallWeightParams::new(beta, gamma).map_err(err)?;
    Ok(revolution::rev_eigenvalue(&bw, n))
}

/// Degree-`n` reproducing kernel on the solid (axis-free weight, `beta = 0`).
#[pyfunction]
fn solid_kernel(
    domain: (f64, f64, f64),
    gamma: f64,
    n: usize,
    p1: (f64, f64, f64),
    p2: (f64, f64, f64),
) -> PyResult<f64> {
    let dp = RevDomainParams::new(domain.0, domain.1, domain.2).map_err(err)?;
    revolution::rev_kernel_eval(&dp, gamma, n, [p1.0, p1.1, p1.2], [p2.0, p2.1, p2.2])
        .map_err(err)
}

fn report_dict<'py>(
    py: Python<'py>,
    report: &symdom::approx::ConvergenceReport,
) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("degrees", &report.degrees)?;
    d.set_item("l2_errors", &report.l2_errors)?;
    d.set_item("sup_errors", &report.sup_errors)?;
    d.set_item("decay_order", report.decay_order)?;
    d.set_item("quad_degree", report.quad_degree)?;
    d.set_item("node_count", report.node_count)?;
    Ok(d)
}

fn run_convergence<'py>(
    py: Python<'py>,
    space: Space,
    f: Bound<'py, PyAny>,
    nmax: usize,
    quad_degree: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let failure = std::cell::RefCell::new(None::<PyErr>);
    let target = |x: &[f64]| -> f64 {
        if failure.borrow().is_some() {
            return f64::NAN;
        }
        let called = match x {
            [u, v] => f.call1((*u, *v)),
            [x1, x2, t] => f.call1((*x1, *x2, *t)),
            _ => unreachable!("points are 2- or 3-dimensional"),
        };
        match called.and_then(|v| v.extract::<f64>()) {
            Ok(v) => v,
            Err(e) => {
                *failure.borrow_mut() = Some(e);
                f64::NAN
            }
        }
    };
    let report = convergence_report(&space, &target, nmax, quad_degree);
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    report_dict(py, &report.map_err(err)?)
}

/// Partial-sum approximation errors of a callable on the curved domain.
/// `f` is called as `f(u, v)` on the quadrature nodes.
#[pyfunction]
fn planar_convergence<'py>(
    py: Python<'py>,
    domain: (f64, f64, f64),
    kappa: (f64, f64, f64),
    nmax: usize,
    quad_degree: usize,
    f: Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let (dp, wp) = planar_params(domain, kappa)?;
    run_convergence(py, Space::Planar { dp, wp }, f, nmax, quad_degree)
}

/// Partial-sum approximation errors of a callable on the solid.
/// `f` is called as `f(x1, x2, t)` on the quadrature nodes.
#[pyfunction]
fn solid_convergence<'py>(
    py: Python<'py>,
    domain: (f64, f64, f64),
    beta: f64,
    gamma: f64,
    nmax: usize,
    quad_degree: usize,
    f: Bound<'py, PyAny>,
) -> PyResult<Bound<'py, PyDict>> {
    let (dp, bw) = solid_params(domain, beta, gamma)?;
    run_convergence(py, Space::Solid { dp, bw }, f, nmax, quad_degree)
}

/// Decay profile of the localized kernel on the solid around `center`:
/// a dict with normalized bin values under `"values"`, upper distance
/// edges under `"upper_edges"`, and the fitted `"decay_order"`.
#[pyfunction]
fn solid_localization<'py>(
    py: Python<'py>,
    domain: (f64, f64, f64),
    gamma: f64,
    n: usize,
    center: (f64, f64, f64),
    bins: usize,
) -> PyResult<Bound<'py, PyDict>> {
    let dp = RevDomainParams::new(domain.0, domain.1, domain.2).map_err(err)?;
    let report = localization_profile(&dp, gamma, n, [center.0, center.1, center.2], bins)
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("bins", &report.degrees)?;
    d.set_item("values", &report.l2_errors)?;
    d.set_item("upper_edges", &report.sup_errors)?;
    d.set_item("decay_order", report.decay_order)?;
    Ok(d)
}

#[pymodule]
fn symdom_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(planar_map, m)?)?;
    m.add_function(wrap_pyfunction!(planar_map_inv, m)?)?;
    m.add_function(wrap_pyfunction!(planar_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(planar_basis, m)?)?;
    m.add_function(wrap_pyfunction!(planar_norms, m)?)?;
    m.add_function(wrap_pyfunction!(planar_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(planar_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(planar_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(solid_map, m)?)?;
    m.add_function(wrap_pyfunction!(solid_map_inv, m)?)?;
    m.add_function(wrap_pyfunction!(solid_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(solid_indices, m)?)?;
    m.add_function(wrap_pyfunction!(solid_basis, m)?)?;
    m.add_function(wrap_pyfunction!(solid_norms, m)?)?;
    m.add_function(wrap_pyfunction!(solid_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(solid_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(solid_convergence, m)?)?;
    m.add_function(wrap_pyfunction!(solid_localization, m)?)?;
    Ok(())
}
