//! Jacobi-type orthogonal structure on the reference triangle
//! `{u, v >= 0, u + v <= 1}`: weight, normalization constant, mutually
//! orthogonal polynomial basis, closed-form reproducing kernel, and the
//! second-order differential operator whose eigenfunctions they are.

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::orthopoly::{
    homog_jacobi, jacobi_rec, ln_gamma, symmetric_kernel_axis_rule, zn_eval,
};
use crate::quad::{triangle_rule, Quad2D};
use crate::scalar::Scalar;

/// Exponents `(alpha1, alpha2, alpha3)` of the triangle weight
/// `u^a1 v^a2 (1-u-v)^a3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TriangleWeightParams {
    pub alpha: [f64; 3],
}

impl TriangleWeightParams {
    /// Validates the integrability constraint `alpha_i > -1`.
    pub fn new(alpha: [f64; 3]) -> Result<Self> {
        for (i, ai) in alpha.iter().enumerate() {
            if !(*ai > -1.0) || !ai.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "triangle exponent alpha{} = {ai} violates alpha{} > -1",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(Self { alpha })
    }

    /// Additionally checks `alpha_i >= -1/2`, required by the closed-form
    /// kernel.
    pub fn kernel_valid(&self) -> Result<()> {
        for (i, ai) in self.alpha.iter().enumerate() {
            if *ai < -0.5 {
                return Err(Error::InvalidParameter(format!(
                    "triangle exponent alpha{} = {ai} violates alpha{} >= -1/2 \
                     required by the kernel formula",
                    i + 1,
                    i + 1
                )));
            }
        }
        Ok(())
    }

    pub fn abs_sum(&self) -> f64 {
        self.alpha.iter().sum()
    }
}

/// Whether `(u, v)` lies in the closed triangle, within slack `tol`.
pub fn triangle_contains(pt: [f64; 2], tol: f64) -> bool {
    let [u, v] = pt;
    u >= -tol && v >= -tol && u + v <= 1.0 + tol
}

fn require_in_triangle(pt: [f64; 2]) -> Result<()> {
    if !triangle_contains(pt, 1e-12) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed triangle",
            pt[0], pt[1]
        )));
    }
    Ok(())
}

/// One weight factor `x^e` with boundary semantics: zero for a vanishing
/// base with positive exponent, singular for a negative one.
pub(crate) fn weight_factor(x: f64, e: f64, what: &str) -> Result<f64> {
    if x > 0.0 {
        Ok(x.powf(e))
    } else if e > 0.0 {
        Ok(0.0)
    } else if e == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::SingularEvaluation(format!(
            "weight factor {what} vanishes while its exponent {e} is negative"
        )))
    }
}

/// Triangle weight `u^a1 v^a2 (1-u-v)^a3` at `pt`.
pub fn triangle_weight(params: &TriangleWeightParams, pt: [f64; 2]) -> Result<f64> {
    let [a1, a2, a3] = params.alpha;
    let [u, v] = pt;
    if !triangle_contains(pt, 0.0) {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) lies outside the closed triangle"
        )));
    }
    Ok(weight_factor(u, a1, "u")?
        * weight_factor(v, a2, "v")?
        * weight_factor(1.0 - u - v, a3, "1-u-v")?)
}

/// Normalization constant making the weighted integral of 1 over the
/// triangle equal to 1: `Gamma(|a|+3) / (Gamma(a1+1) Gamma(a2+1) Gamma(a3+1))`.
pub fn triangle_norm_const(params: &TriangleWeightParams) -> f64 {
    let [a1, a2, a3] = params.alpha;
    (ln_gamma(a1 + a2 + a3 + 3.0)
        - ln_gamma(a1 + 1.0)
        - ln_gamma(a2 + 1.0)
        - ln_gamma(a3 + 1.0))
    .exp()
}

/// Degree-`m` basis member, generic over the scalar type so that jets give
/// analytic derivatives: an outer Jacobi factor in `v` times the homogenized
/// inner Jacobi factor in `u/(1-v)`.
pub(crate) fn triangle_basis_g<S: Scalar>(
    alpha: [f64; 3],
    j: usize,
    m: usize,
    u: S,
    v: S,
) -> S {
    let [a1, a2, a3] = alpha;
    let outer = jacobi_rec(
        m - j,
        2.0 * j as f64 + a1 + a3 + 1.0,
        a2,
        v.scale(2.0) - S::cst(1.0),
    );
    outer * homog_jacobi(j, a3, a1, u, v)
}

fn check_indices(j: usize, m: usize) -> Result<()> {
    if j > m {
        return Err(Error::IndexOutOfRange(format!(
            "basis index j = {j} exceeds degree m = {m}"
        )));
    }
    Ok(())
}

/// Evaluates the degree-`m` triangle basis member indexed by `j <= m`.
pub fn triangle_basis_eval(
    params: &TriangleWeightParams,
    j: usize,
    m: usize,
    pt: [f64; 2],
) -> Result<f64> {
    check_indices(j, m)?;
    Ok(triangle_basis_g(params.alpha, j, m, pt[0], pt[1]))
}

/// Value and first/second partials of the basis member at `pt`.
pub fn triangle_basis_jet(
    params: &TriangleWeightParams,
    j: usize,
    m: usize,
    pt: [f64; 2],
) -> Result<Jet2> {
    check_indices(j, m)?;
    Ok(triangle_basis_g(
        params.alpha,
        j,
        m,
        Jet2::var_u(pt[0]),
        Jet2::var_v(pt[1]),
    ))
}

/// Product quadrature integrating the triangle weight exactly for total
/// degree `deg`.
pub fn triangle_quadrature(params: &TriangleWeightParams, deg: usize) -> Result<Quad2D> {
    triangle_rule(params.alpha, deg)
}

/// Norms of the basis members under the mass-normalized inner product
/// (`norm_const` times the weighted integral), indexed `[m][j]` for
/// `0 <= j <= m <= nmax`. Computed by exact-degree quadrature.
pub fn triangle_basis_norms(params: &TriangleWeightParams, nmax: usize) -> Result<Vec<Vec<f64>>> {
    let rule = triangle_rule(params.alpha, 2 * nmax)?;
    let b = triangle_norm_const(params);
    let mut norms = Vec::with_capacity(nmax + 1);
    for m in 0..=nmax {
        let mut row = Vec::with_capacity(m + 1);
        for j in 0..=m {
            let sq = rule.integrate(|u, v| {
                let t = triangle_basis_g(params.alpha, j, m, u, v);
                t * t
            });
            row.push((b * sq).sqrt());
        }
        norms.push(row);
    }
    Ok(norms)
}

/// Closed-form reproducing kernel of the degree-`n` orthogonal space: a
/// triple integral of the degree-`2n` Gegenbauer kernel function against one
/// symmetric Gegenbauer-type probability measure per axis, with the
/// half-endpoint-average point-mass rule substituted for any exponent at its
/// lower limit `-1/2`. `rule_res` is the Gauss point count per axis and must
/// be at least `n + 2` so the degree-`2n` axis integrands are captured
/// exactly.
pub fn triangle_kernel_eval(
    params: &TriangleWeightParams,
    n: usize,
    pt1: [f64; 2],
    pt2: [f64; 2],
    rule_res: usize,
) -> Result<f64> {
    params.kernel_valid()?;
    require_in_triangle(pt1)?;
    require_in_triangle(pt2)?;
    if rule_res < n + 2 {
        return Err(Error::QuadratureUnderresolved(format!(
            "kernel axis resolution {rule_res} is below the required {}",
            n + 2
        )));
    }
    let [a1, a2, a3] = params.alpha;
    let r1 = symmetric_kernel_axis_rule(rule_res, a1)?;
    let r2 = symmetric_kernel_axis_rule(rule_res, a2)?;
    let r3 = symmetric_kernel_axis_rule(rule_res, a3)?;
    let lambda = params.abs_sum() + 2.0;
    let c1 = (pt1[0].max(0.0) * pt2[0].max(0.0)).sqrt();
    let c2 = (pt1[1].max(0.0) * pt2[1].max(0.0)).sqrt();
    let c3 = ((1.0 - pt1[0] - pt1[1]).max(0.0) * (1.0 - pt2[0] - pt2[1]).max(0.0)).sqrt();
    let mut total = 0.0;
    for (&t1, &w1) in r1.nodes.iter().zip(&r1.weights) {
        for (&t2, &w2) in r2.nodes.iter().zip(&r2.weights) {
            for (&t3, &w3) in r3.nodes.iter().zip(&r3.weights) {
                let arg = c1 * t1 + c2 * t2 + c3 * t3;
                total += w1 * w2 * w3 * zn_eval(2 * n, lambda, arg)?;
            }
        }
    }
    Ok(total)
}

/// Second-order operator with the basis members as eigenfunctions, applied
/// to a jet-valued callable at an interior point.
pub fn triangle_diffop_apply_fn(
    params: &TriangleWeightParams,
    f: &dyn Fn(Jet2, Jet2) -> Jet2,
    pt: [f64; 2],
) -> Result<f64> {
    let [u, v] = pt;
    if !(u > 0.0 && v > 0.0 && u + v < 1.0) {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) is not interior to the triangle"
        )));
    }
    let [a1, a2, a3] = params.alpha;
    let s = a1 + a2 + a3 + 3.0;
    let jet = f(Jet2::var_u(u), Jet2::var_v(v));
    Ok(u * (1.0 - u) * jet.fuu - 2.0 * u * v * jet.fuv + v * (1.0 - v) * jet.fvv
        + (a1 + 1.0 - s * u) * jet.fu
        + (a2 + 1.0 - s * v) * jet.fv)
}

/// The same operator applied to an expansion in the triangle basis, given as
/// `(j, m, coefficient)` terms.
pub fn triangle_diffop_apply(
    params: &TriangleWeightParams,
    terms: &[(usize, usize, f64)],
    pt: [f64; 2],
) -> Result<f64> {
    for &(j, m, _) in terms {
        check_indices(j, m)?;
    }
    let alpha = params.alpha;
    triangle_diffop_apply_fn(
        params,
        &move |u, v| {
            let mut acc = Jet2::cst(0.0);
            for &(j, m, c) in terms {
                acc = acc + triangle_basis_g(alpha, j, m, u, v).scale(c);
            }
            acc
        },
        pt,
    )
}

/// Eigenvalue of the operator on the degree-`m` orthogonal space:
/// `-m (m + |alpha| + 2)`.
pub fn triangle_eigenvalue(params: &TriangleWeightParams, m: usize) -> f64 {
    let m = m as f64;
    -m * (m + params.abs_sum() + 2.0)
}
