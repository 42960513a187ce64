//! Semi-classical orthogonal structure on the unit disk: the reflection-
//! symmetric weight `|u|^(2k1) |v|^(2k2) (1-u^2-v^2)^k3`, its generalized
//! Gegenbauer product basis, the closed-form reproducing kernel, the
//! second-order differential-difference operator, the kernel of the
//! even-in-`v` subfamily, and the quadratic relation tying the even basis to
//! triangle polynomials.

use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::orthopoly::{
    gen_gegenbauer_rec, homog_jacobi, ln_gamma, pochhammer, skewed_kernel_axis_rule,
    symmetric_kernel_axis_rule, zn_eval,
};
use crate::quad::{disk_rule, Quad2D};
use crate::scalar::Scalar;
use crate::triangle::{triangle_basis_eval, TriangleWeightParams};

/// Exponents `(kappa1, kappa2, kappa3)` of the disk weight
/// `|u|^(2 k1) |v|^(2 k2) (1-u^2-v^2)^k3`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiskWeightParams {
    pub kappa: [f64; 3],
}

impl DiskWeightParams {
    /// Validates `k1, k2 > -1/2` and `k3 > -1`.
    pub fn new(kappa: [f64; 3]) -> Result<Self> {
        let [k1, k2, k3] = kappa;
        for (name, ki, lim) in [("kappa1", k1, -0.5), ("kappa2", k2, -0.5), ("kappa3", k3, -1.0)] {
            if !(ki > lim) || !ki.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "disk exponent {name} = {ki} violates {name} > {lim}"
                )));
            }
        }
        Ok(Self { kappa })
    }

    /// Additionally checks `k1, k2 >= 0` and `k3 >= -1/2`, the range of the
    /// closed-form kernel (the boundary values are realized by point-mass
    /// limit rules).
    pub fn kernel_valid(&self) -> Result<()> {
        let [k1, k2, k3] = self.kappa;
        for (name, ki, lim) in [("kappa1", k1, 0.0), ("kappa2", k2, 0.0), ("kappa3", k3, -0.5)] {
            if ki < lim {
                return Err(Error::InvalidParameter(format!(
                    "disk exponent {name} = {ki} violates {name} >= {lim} \
                     required by the kernel formula"
                )));
            }
        }
        Ok(())
    }

    pub fn abs_sum(&self) -> f64 {
        self.kappa.iter().sum()
    }
}

/// Whether `(u, v)` lies in the closed unit disk, within slack `tol`.
pub fn disk_contains(pt: [f64; 2], tol: f64) -> bool {
    pt[0] * pt[0] + pt[1] * pt[1] <= 1.0 + tol
}

fn require_in_disk(pt: [f64; 2]) -> Result<()> {
    if !disk_contains(pt, 1e-12) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed unit disk",
            pt[0], pt[1]
        )));
    }
    Ok(())
}

/// Disk weight value at `pt` (boundary semantics as on the triangle:
/// vanishing factors give 0 for positive exponents and are singular for
/// negative ones).
pub fn disk_weight(params: &DiskWeightParams, pt: [f64; 2]) -> Result<f64> {
    let [k1, k2, k3] = params.kappa;
    let [u, v] = pt;
    if !disk_contains(pt, 0.0) {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) lies outside the closed unit disk"
        )));
    }
    let mut w = 1.0;
    for (x, e, what) in [
        (u.abs(), 2.0 * k1, "u"),
        (v.abs(), 2.0 * k2, "v"),
        (1.0 - u * u - v * v, k3, "1-u^2-v^2"),
    ] {
        if x > 0.0 {
            w *= x.powf(e);
        } else if e > 0.0 {
            return Ok(0.0);
        } else if e < 0.0 {
            return Err(Error::SingularEvaluation(format!(
                "weight factor {what} vanishes while its exponent {e} is negative"
            )));
        }
    }
    Ok(w)
}

/// Normalization constant making the weighted disk integral of 1 equal 1.
pub fn disk_norm_const(params: &DiskWeightParams) -> f64 {
    let [k1, k2, k3] = params.kappa;
    let num = ln_gamma(k1 + k2 + k3 + 2.0);
    let den = ln_gamma(k1 + 0.5) + ln_gamma(k2 + 0.5) + ln_gamma(k3 + 1.0);
    (num - den).exp()
}

/// Degree-`n` basis member indexed by `0 <= j <= n`, generic over the scalar
/// type. The inner generalized Gegenbauer factor of `u/sqrt(1-v^2)` is
/// expanded through its quadratic Jacobi form, so the whole member is
/// evaluated as the bivariate polynomial it is -- no square roots, valid for
/// every `(u, v)` including `|v| = 1`.
pub(crate) fn disk_basis_g<S: Scalar>(kappa: [f64; 3], j: usize, n: usize, u: S, v: S) -> S {
    let [k1, k2, k3] = kappa;
    let outer = gen_gegenbauer_rec(n - j, j as f64 + k1 + k3 + 1.0, k2, v);
    let (lam, mu) = (k3 + 0.5, k1);
    let p = j / 2;
    let inner = if j % 2 == 0 {
        let c = pochhammer(lam + mu, p) / pochhammer(mu + 0.5, p);
        homog_jacobi(p, lam - 0.5, mu - 0.5, u * u, v * v).scale(c)
    } else {
        let c = pochhammer(lam + mu, p + 1) / pochhammer(mu + 0.5, p + 1);
        (u * homog_jacobi(p, lam - 0.5, mu + 0.5, u * u, v * v)).scale(c)
    };
    outer * inner
}

fn check_indices(j: usize, n: usize) -> Result<()> {
    if j > n {
        return Err(Error::IndexOutOfRange(format!(
            "basis index j = {j} exceeds degree n = {n}"
        )));
    }
    Ok(())
}

/// Evaluates the degree-`n` disk basis member indexed by `j <= n`.
pub fn disk_basis_eval(params: &DiskWeightParams, j: usize, n: usize, pt: [f64; 2]) -> Result<f64> {
    check_indices(j, n)?;
    Ok(disk_basis_g(params.kappa, j, n, pt[0], pt[1]))
}

/// Value and first/second partials of the basis member at `pt`.
pub fn disk_basis_jet(params: &DiskWeightParams, j: usize, n: usize, pt: [f64; 2]) -> Result<Jet2> {
    check_indices(j, n)?;
    Ok(disk_basis_g(
        params.kappa,
        j,
        n,
        Jet2::var_u(pt[0]),
        Jet2::var_v(pt[1]),
    ))
}

/// Product quadrature integrating the disk weight exactly for total degree
/// `deg`.
pub fn disk_quadrature(params: &DiskWeightParams, deg: usize) -> Result<Quad2D> {
    disk_rule(params.kappa, deg)
}

/// Norms of the basis members under the mass-normalized inner product,
/// indexed `[n][j]`, computed by exact-degree quadrature.
pub fn disk_basis_norms(params: &DiskWeightParams, nmax: usize) -> Result<Vec<Vec<f64>>> {
    let rule = disk_rule(params.kappa, 2 * nmax)?;
    let b = disk_norm_const(params);
    let mut norms = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let sq = rule.integrate(|u, v| {
                let g = disk_basis_g(params.kappa, j, n, u, v);
                g * g
            });
            row.push((b * sq).sqrt());
        }
        norms.push(row);
    }
    Ok(norms)
}

fn default_axis_res(n: usize) -> usize {
    n + 2
}

/// Closed-form reproducing kernel of the degree-`n` orthogonal space: a
/// triple integral of the degree-`n` Gegenbauer kernel function, with skewed
/// `(1+t)(1-t^2)^(k-1)` measures on the two axis variables (right-endpoint
/// point mass at `k = 0`) and a symmetric measure on the third
/// (half-endpoint average at `k3 = -1/2`).
pub fn disk_kernel_eval(
    params: &DiskWeightParams,
    n: usize,
    pt1: [f64; 2],
    pt2: [f64; 2],
) -> Result<f64> {
    params.kernel_valid()?;
    require_in_disk(pt1)?;
    require_in_disk(pt2)?;
    let [k1, k2, k3] = params.kappa;
    let m = default_axis_res(n);
    let r1 = skewed_kernel_axis_rule(m, k1)?;
    let r2 = skewed_kernel_axis_rule(m, k2)?;
    let r3 = symmetric_kernel_axis_rule(m, k3)?;
    let lambda = params.abs_sum() + 1.0;
    let c1 = pt1[0] * pt2[0];
    let c2 = pt1[1] * pt2[1];
    let c3 = ((1.0 - pt1[0] * pt1[0] - pt1[1] * pt1[1]).max(0.0)
        * (1.0 - pt2[0] * pt2[0] - pt2[1] * pt2[1]).max(0.0))
    .sqrt();
    let mut total = 0.0;
    for (&t1, &w1) in r1.nodes.iter().zip(&r1.weights) {
        for (&t2, &w2) in r2.nodes.iter().zip(&r2.weights) {
            for (&t3, &w3) in r3.nodes.iter().zip(&r3.weights) {
                let arg = c1 * t1 + c2 * t2 + c3 * t3;
                total += w1 * w2 * w3 * zn_eval(n, lambda, arg)?;
            }
        }
    }
    Ok(total)
}

/// Reflection of the second coordinate, `(u, v) -> (u, -v)`.
pub fn reflect_v(pt: [f64; 2]) -> [f64; 2] {
    [pt[0], -pt[1]]
}

/// Reproducing kernel of the even-in-`v` subfamily. For `k1 = 0` this is the
/// two-integral formula (first kernel slot pinned at `u1 u2`, symmetric
/// measures in the remaining two axes); for general parameters it is the
/// parity average `(K_n(pt1, pt2) + K_n(pt1, reflect_v(pt2))) / 2`.
pub fn disk_parity_kernel_eval(
    params: &DiskWeightParams,
    n: usize,
    pt1: [f64; 2],
    pt2: [f64; 2],
) -> Result<f64> {
    params.kernel_valid()?;
    let [k1, k2, k3] = params.kappa;
    if k1 != 0.0 {
        let a = disk_kernel_eval(params, n, pt1, pt2)?;
        let b = disk_kernel_eval(params, n, pt1, reflect_v(pt2))?;
        return Ok(0.5 * (a + b));
    }
    require_in_disk(pt1)?;
    require_in_disk(pt2)?;
    let m = default_axis_res(n);
    let r2 = symmetric_kernel_axis_rule(m, k2 - 0.5)?;
    let r3 = symmetric_kernel_axis_rule(m, k3)?;
    let lambda = params.abs_sum() + 1.0;
    let c1 = pt1[0] * pt2[0];
    let c2 = pt1[1] * pt2[1];
    let c3 = ((1.0 - pt1[0] * pt1[0] - pt1[1] * pt1[1]).max(0.0)
        * (1.0 - pt2[0] * pt2[0] - pt2[1] * pt2[1]).max(0.0))
    .sqrt();
    let mut total = 0.0;
    for (&t2, &w2) in r2.nodes.iter().zip(&r2.weights) {
        for (&t3, &w3) in r3.nodes.iter().zip(&r3.weights) {
            let arg = c1 + c2 * t2 + c3 * t3;
            total += w2 * w3 * zn_eval(n, lambda, arg)?;
        }
    }
    Ok(total)
}

/// Parity information about the callable passed to the differential-
/// difference operator: a difference term whose function is even in the
/// corresponding variable reduces analytically to a first-order term, which
/// avoids the `1/u^2` (resp. `1/v^2`) cancellation entirely.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParityHint {
    pub even_u: bool,
    pub even_v: bool,
}

/// Applies the differential-difference operator to a jet-valued callable at
/// `pt`. Difference terms are formed from actual reflected evaluations
/// unless the corresponding [`ParityHint`] flag promises evenness; an active
/// difference term requires the corresponding coordinate to stay at least
/// `1e-3` away from zero.
pub fn disk_diffop_apply(
    params: &DiskWeightParams,
    f: &dyn Fn(Jet2, Jet2) -> Jet2,
    pt: [f64; 2],
    hint: ParityHint,
) -> Result<f64> {
    let [u, v] = pt;
    if !disk_contains(pt, 0.0) {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) lies outside the closed unit disk"
        )));
    }
    let [k1, k2, _] = params.kappa;
    let jet = f(Jet2::var_u(u), Jet2::var_v(v));
    let s2 = 2.0 * params.abs_sum() + 3.0;
    let mut total = (1.0 - u * u) * jet.fuu - 2.0 * u * v * jet.fuv + (1.0 - v * v) * jet.fvv
        - s2 * (u * jet.fu + v * jet.fv);
    if k1 != 0.0 {
        if hint.even_u {
            if u == 0.0 {
                return Err(Error::SingularEvaluation(
                    "first-order difference reduction requires u != 0".into(),
                ));
            }
            total += 2.0 * k1 / u * jet.fu;
        } else {
            if u.abs() < 1e-3 {
                return Err(Error::SingularEvaluation(format!(
                    "difference term in u active at |u| = {} < 1e-3",
                    u.abs()
                )));
            }
            let refl = f(Jet2::var_u(-u), Jet2::var_v(v)).f;
            total += k1 * (2.0 / u * jet.fu - (jet.f - refl) / (u * u));
        }
    }
    if k2 != 0.0 {
        if hint.even_v {
            if v == 0.0 {
                return Err(Error::SingularEvaluation(
                    "first-order difference reduction requires v != 0".into(),
                ));
            }
            total += 2.0 * k2 / v * jet.fv;
        } else {
            if v.abs() < 1e-3 {
                return Err(Error::SingularEvaluation(format!(
                    "difference term in v active at |v| = {} < 1e-3",
                    v.abs()
                )));
            }
            let refl = f(Jet2::var_u(u), Jet2::var_v(-v)).f;
            total += k2 * (2.0 / v * jet.fv - (jet.f - refl) / (v * v));
        }
    }
    Ok(total)
}

/// Eigenvalue of the operator on the degree-`n` orthogonal space:
/// `-n (n + 2|kappa| + 2)`.
pub fn disk_eigenvalue(params: &DiskWeightParams, n: usize) -> f64 {
    let n = n as f64;
    -n * (n + 2.0 * params.abs_sum() + 2.0)
}

/// Outcome of checking the quadratic disk-triangle basis relation on a
/// sample: the fitted proportionality constant and the largest relative
/// deviation from exact proportionality.
#[derive(Clone, Copy, Debug)]
pub struct RelationReport {
    pub constant: f64,
    pub max_rel_dev: f64,
}

/// Checks the quadratic relation on a sample: the disk member of index
/// `2j + (n mod 2)` at degree `n` is a constant multiple of the triangle
/// member of index `(j, m)` with shifted exponents evaluated at
/// `(u^2, v^2)`, times `u` when `n` is odd (`n = 2m` or `n = 2m+1`).
pub fn disk_triangle_relation_check(
    params: &DiskWeightParams,
    j: usize,
    n: usize,
    sample_pts: &[[f64; 2]],
) -> Result<RelationReport> {
    let m = n / 2;
    if j > m {
        return Err(Error::IndexOutOfRange(format!(
            "relation index j = {j} exceeds m = {m} for degree n = {n}"
        )));
    }
    let [k1, k2, k3] = params.kappa;
    let odd = n % 2 == 1;
    let shift = if odd { 0.5 } else { -0.5 };
    let tri = TriangleWeightParams::new([k1 + shift, k2 - 0.5, k3])?;
    let mut num = 0.0;
    let mut den = 0.0;
    let mut pairs = Vec::with_capacity(sample_pts.len());
    for &pt in sample_pts {
        let lhs = disk_basis_eval(params, 2 * j + n % 2, n, pt)?;
        let mut rhs = triangle_basis_eval(&tri, j, m, [pt[0] * pt[0], pt[1] * pt[1]])?;
        if odd {
            rhs *= pt[0];
        }
        num += lhs * rhs;
        den += rhs * rhs;
        pairs.push((lhs, rhs));
    }
    let scale = pairs
        .iter()
        .map(|&(l, _)| l.abs())
        .fold(0.0f64, f64::max);
    if den == 0.0 || scale == 0.0 {
        return Err(Error::DegenerateSample(
            "all sample values of the relation vanish".into(),
        ));
    }
    let constant = num / den;
    let max_rel_dev = pairs
        .iter()
        .map(|&(l, r)| (l - constant * r).abs())
        .fold(0.0f64, f64::max)
        / scale.max(1e-300);
    Ok(RelationReport { constant, max_rel_dev })
}
