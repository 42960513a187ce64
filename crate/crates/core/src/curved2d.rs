//! Curved planar domains bounded by two conic arcs, reduced to the half-disk.
//!
//! The domain family is parameterized by 0 ≤ a < b and c ≥ 0: the full domain
//! Ω_{a,b,c} is the set with a+(c−a)u² ≤ v² ≤ b+(c−b)u² and |u| ≤ 1, and the
//! working domain Λ_{a,b,c} is its upper half (v ≥ 0). The quadratic map
//! ψ(u,v) = (u, 𝔱(u,v)) with 𝔱² = (−a+(a−c)u²+v²)/(b−a) is a bijection from
//! Λ onto the closed upper half-disk, carrying the curved weight to the disk
//! weight. Everything here — basis, quadrature, spectral operator, kernels —
//! routes through that bijection, with an independent direct evaluation of
//! the rational-coefficient operator kept for cross-validation.

use crate::disk::{disk_parity_kernel_eval, DiskWeightParams};
use crate::error::{Error, Result};
use crate::jet::Jet2;
use crate::orthopoly::{gen_gegenbauer_rec, homog_jacobi};
use crate::quad::{half_disk_rule, Quad2D};
use crate::scalar::Scalar;
use crate::triangle::weight_factor;

/// Shape parameters (a, b, c) of a curved domain; requires 0 ≤ a < b, c ≥ 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainParams2 {
    /// Lower-arc coefficient at u = 0 (v² = a there).
    pub a: f64,
    /// Upper-arc coefficient at u = 0 (v² = b there).
    pub b: f64,
    /// Common height of both arcs at u = ±1 (v² = c there).
    pub c: f64,
}

impl DomainParams2 {
    /// Validates 0 ≤ a < b and c ≥ 0.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(0.0 <= a && a < b) || !(c >= 0.0) || !a.is_finite() || !b.is_finite() || !c.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "domain shape needs 0 <= a < b and c >= 0; got a={a}, b={b}, c={c}"
            )));
        }
        Ok(Self { a, b, c })
    }
}

/// Weight exponents κ = (κ₁, κ₂, κ₃) for the curved weight
/// |v| |u|^{2κ₁} z(u²,v²)^{κ₂−1/2} X(u²,v²)^{κ₃} / (b−a), where z is the
/// normalized lower-arc distance and X the upper-arc distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvedWeightParams {
    /// Exponent triple; κ₁, κ₂ > −1/2 and κ₃ > −1.
    pub kappa: [f64; 3],
}

impl CurvedWeightParams {
    /// Validates κ₁, κ₂ > −1/2 and κ₃ > −1.
    pub fn new(kappa: [f64; 3]) -> Result<Self> {
        let [k1, k2, k3] = kappa;
        if !(k1 > -0.5 && k2 > -0.5 && k3 > -1.0) {
            return Err(Error::InvalidParameter(format!(
                "curved weight needs kappa1, kappa2 > -1/2 and kappa3 > -1; got {kappa:?}"
            )));
        }
        Ok(Self { kappa })
    }

    /// The spectral operator and kernels require κ₁ = 0.
    pub fn spectral_valid(&self) -> Result<()> {
        if self.kappa[0] != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "spectral features require kappa1 = 0; got kappa1 = {}",
                self.kappa[0]
            )));
        }
        Ok(())
    }
}

/// Smallest v at which the spectral operator is evaluated; its coefficients
/// carry 1/v and 1/v² factors.
pub const CURVED_V_MIN: f64 = 0.05;

const MEMBER_TOL: f64 = 1e-12;

/// Membership in the closed domain Ω_{a,b,c}; `half` restricts to Λ (v ≥ 0).
pub fn domain_contains(dp: &DomainParams2, pt: [f64; 2], half: bool) -> bool {
    let [u, v] = pt;
    let v2 = v * v;
    let u2 = u * u;
    let lower = dp.a + (dp.c - dp.a) * u2;
    let upper = dp.b + (dp.c - dp.b) * u2;
    u2 <= 1.0 + MEMBER_TOL
        && v2 >= lower - MEMBER_TOL
        && v2 <= upper + MEMBER_TOL
        && (!half || v >= -MEMBER_TOL)
}

/// Affine map (u,v) ↦ (u, (−a+(a−c)u+v)/(b−a)) taking the triangle with
/// vertices (0,a), (0,b), (1,c) onto the unit triangle.
pub fn z_affine(dp: &DomainParams2, pt: [f64; 2]) -> [f64; 2] {
    let [u, v] = pt;
    [u, (-dp.a + (dp.a - dp.c) * u + v) / (dp.b - dp.a)]
}

/// Inverse of [`z_affine`].
pub fn z_affine_inv(dp: &DomainParams2, st: [f64; 2]) -> [f64; 2] {
    let [s, t] = st;
    [s, dp.a + (dp.c - dp.a) * s + (dp.b - dp.a) * t]
}

/// The quadratic height 𝔱(u,v) = √((−a+(a−c)u²+v²)/(b−a)); even in v.
pub fn frakt(dp: &DomainParams2, pt: [f64; 2]) -> Result<f64> {
    let [u, v] = pt;
    let r = (-dp.a + (dp.a - dp.c) * u * u + v * v) / (dp.b - dp.a);
    if r < -1e-14 {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) lies below the lower arc (radicand {r})"
        )));
    }
    Ok(r.max(0.0).sqrt())
}

/// Bijection Λ_{a,b,c} → upper half-disk, ψ(u,v) = (u, 𝔱(u,v)). Points of the
/// lower half plane are accepted and treated by even reflection.
pub fn psi(dp: &DomainParams2, pt: [f64; 2]) -> Result<[f64; 2]> {
    if !domain_contains(dp, pt, false) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed domain",
            pt[0], pt[1]
        )));
    }
    Ok([pt[0], frakt(dp, pt)?])
}

/// Inverse bijection: ψ⁻¹(s,t) = (s, √((b−a)t² + a(1−s²) + c s²)).
pub fn psi_inv(dp: &DomainParams2, st: [f64; 2]) -> Result<[f64; 2]> {
    let [s, t] = st;
    if s * s + t * t > 1.0 + MEMBER_TOL || t < -MEMBER_TOL {
        return Err(Error::DomainViolation(format!(
            "point ({s}, {t}) lies outside the closed upper half-disk"
        )));
    }
    let r = (dp.b - dp.a) * t * t + dp.a * (1.0 - s * s) + dp.c * s * s;
    Ok([s, r.max(0.0).sqrt()])
}

/// Curved weight |v| |u|^{2κ₁} z^{κ₂−1/2} X^{κ₃} / (b−a); the 1/(b−a) factor
/// makes the half-disk pullback identity ∫_Λ f·W = ∫ (f∘ψ⁻¹)·W_disk exact.
pub fn curved_weight(dp: &DomainParams2, params: &CurvedWeightParams, pt: [f64; 2]) -> Result<f64> {
    let [k1, k2, k3] = params.kappa;
    let [u, v] = pt;
    if !domain_contains(dp, pt, false) {
        return Err(Error::DomainViolation(format!(
            "point ({u}, {v}) lies outside the closed domain"
        )));
    }
    let bma = dp.b - dp.a;
    let z = ((-dp.a + (dp.a - dp.c) * u * u + v * v) / bma).max(0.0);
    let x = ((dp.b - (dp.b - dp.c) * u * u - v * v) / bma).max(0.0);
    let fu = weight_factor(u.abs(), 2.0 * k1, "|u|^(2k1)")?;
    let fz = weight_factor(z, k2 - 0.5, "lower-arc distance")?;
    let fx = weight_factor(x, k3, "upper-arc distance")?;
    Ok(v.abs() * fu * fz * fx / bma)
}

/// Polynomial value of the degree-n basis member on the domain, generic over
/// plain values and jets. The member is
/// C_{n−2j}^{(2j+κ₂+κ₃+1, κ₁)}(u) · (1−u²)^j P_j^{(κ₃, κ₂−1/2)}(2𝔱²/(1−u²) − 1)
/// written through the homogeneous Jacobi form, so it needs no square roots
/// and extends evenly across v = 0 and smoothly across |u| = 1.
pub(crate) fn q_basis_g<S: Scalar>(
    dp: &DomainParams2,
    kappa: [f64; 3],
    j: usize,
    n: usize,
    u: S,
    v: S,
) -> S {
    let [k1, k2, k3] = kappa;
    let bma = dp.b - dp.a;
    let tt2 = ((u * u).scale(dp.a - dp.c) + v * v + S::cst(-dp.a)).scale(1.0 / bma);
    let outer = gen_gegenbauer_rec(n - 2 * j, 2.0 * j as f64 + k2 + k3 + 1.0, k1, u);
    let inner = homog_jacobi(j, k3, k2 - 0.5, tt2, u * u);
    outer * inner
}

/// Same member expressed in half-disk coordinates (its pullback through ψ⁻¹):
/// C_{n−2j}^{(2j+κ₂+κ₃+1, κ₁)}(s) · (1−s²)^j P_j^{(κ₃, κ₂−1/2)}(2t²/(1−s²) − 1).
pub(crate) fn q_pullback_g<S: Scalar>(kappa: [f64; 3], j: usize, n: usize, s: S, t: S) -> S {
    let [k1, k2, k3] = kappa;
    let outer = gen_gegenbauer_rec(n - 2 * j, 2.0 * j as f64 + k2 + k3 + 1.0, k1, s);
    let inner = homog_jacobi(j, k3, k2 - 0.5, t * t, s * s);
    outer * inner
}

/// Evaluates the (j, n) basis member at a point of Ω; 0 ≤ j ≤ ⌊n/2⌋.
pub fn q_basis_eval(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    j: usize,
    n: usize,
    pt: [f64; 2],
) -> Result<f64> {
    if 2 * j > n {
        return Err(Error::IndexOutOfRange(format!(
            "basis index j must satisfy 2j <= n; got j={j}, n={n}"
        )));
    }
    if !domain_contains(dp, pt, false) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed domain",
            pt[0], pt[1]
        )));
    }
    Ok(q_basis_g(dp, params.kappa, j, n, pt[0], pt[1]))
}

/// Value and first/second derivatives of the (j, n) basis member at a point
/// of Ω, as a jet in (u, v).
pub fn q_basis_jet(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    j: usize,
    n: usize,
    pt: [f64; 2],
) -> Result<Jet2> {
    if 2 * j > n {
        return Err(Error::IndexOutOfRange(format!(
            "basis index j must satisfy 2j <= n; got j={j}, n={n}"
        )));
    }
    if !domain_contains(dp, pt, false) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed domain",
            pt[0], pt[1]
        )));
    }
    Ok(q_basis_g(dp, params.kappa, j, n, Jet2::var_u(pt[0]), Jet2::var_v(pt[1])))
}

/// Quadrature on Λ for the curved weight: the half-disk rule pulled back
/// through ψ⁻¹, weights unchanged. It integrates f·W exactly whenever f∘ψ⁻¹
/// is a polynomial within the stated exactness — in particular all basis
/// members and their products.
pub fn lambda_quadrature(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    degree: usize,
) -> Result<Quad2D> {
    let rule = half_disk_rule(params.kappa, degree)?;
    let nodes = rule
        .nodes
        .iter()
        .map(|&st| psi_inv(dp, st))
        .collect::<Result<Vec<_>>>()?;
    Ok(Quad2D { nodes, weights: rule.weights, exactness: rule.exactness })
}

/// Norm table: norms[n][j] = ‖Q_{j,n}‖ under the mass-normalized curved
/// weight on Λ, for 0 ≤ j ≤ ⌊n/2⌋, n ≤ nmax.
pub fn q_norms(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    nmax: usize,
) -> Result<Vec<Vec<f64>>> {
    let rule = lambda_quadrature(dp, params, 2 * nmax)?;
    let mass = rule.mass();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut row = Vec::with_capacity(n / 2 + 1);
        for j in 0..=n / 2 {
            let s = rule.integrate(|u, v| {
                let q = q_basis_g(dp, params.kappa, j, n, u, v);
                q * q
            }) / mass;
            row.push(s.sqrt());
        }
        out.push(row);
    }
    Ok(out)
}

fn spectral_point_check(dp: &DomainParams2, params: &CurvedWeightParams, pt: [f64; 2]) -> Result<()> {
    params.spectral_valid()?;
    if !domain_contains(dp, pt, true) {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed upper-half domain",
            pt[0], pt[1]
        )));
    }
    if pt[1] < CURVED_V_MIN {
        return Err(Error::SingularEvaluation(format!(
            "operator coefficients carry 1/v factors; need v >= {CURVED_V_MIN}, got v = {}",
            pt[1]
        )));
    }
    Ok(())
}

/// Applies the half-disk operator to a pulled-back jet: the caller provides
/// the jet of g = F∘ψ⁻¹ at (s,t); the κ₂ difference term uses the even-in-t
/// limit g_t/t → g_tt at the axis.
fn disk_even_apply(kappa: [f64; 3], s: f64, t: f64, g: &Jet2) -> f64 {
    let [_, k2, k3] = kappa;
    let abs_sum = k2 + k3;
    let mut total = (1.0 - s * s) * g.fuu - 2.0 * s * t * g.fuv + (1.0 - t * t) * g.fvv
        - (2.0 * abs_sum + 3.0) * (s * g.fu + t * g.fv);
    if k2 != 0.0 {
        total += 2.0 * k2 * if t.abs() < 1e-7 { g.fvv } else { g.fv / t };
    }
    total
}

/// Spectral operator applied to a function on Λ given by its jet evaluator,
/// via the authoritative pullback route: build the jet of g = F∘ψ⁻¹ at
/// ψ(pt) using the square-root composition and apply the disk operator there.
pub fn curved_diffop_apply_fn(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    f: &dyn Fn(Jet2, Jet2) -> Jet2,
    pt: [f64; 2],
) -> Result<f64> {
    spectral_point_check(dp, params, pt)?;
    let [s0, t0] = psi(dp, pt)?;
    let s = Jet2::var_u(s0);
    let t = Jet2::var_v(t0);
    // v(s,t) = sqrt((b−a)t² + a(1−s²) + c s²); radicand equals v² ≥ v_min².
    let radicand = (t * t).scale(dp.b - dp.a) + (s * s).scale(dp.c - dp.a) + Jet2::cst(dp.a);
    let v = radicand.sqrt();
    let g = f(s, v);
    Ok(disk_even_apply(params.kappa, s0, t0, &g))
}

/// Spectral operator applied to an expansion Σ c·Q_{j,n}, written directly in
/// half-disk coordinates where every member is a polynomial (no square roots).
pub fn curved_diffop_apply(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    terms: &[(usize, usize, f64)],
    pt: [f64; 2],
) -> Result<f64> {
    spectral_point_check(dp, params, pt)?;
    let [s0, t0] = psi(dp, pt)?;
    let s = Jet2::var_u(s0);
    let t = Jet2::var_v(t0);
    let mut g = Jet2::cst(0.0);
    for &(j, n, coeff) in terms {
        if 2 * j > n {
            return Err(Error::IndexOutOfRange(format!(
                "expansion term needs 2j <= n; got j={j}, n={n}"
            )));
        }
        g = g + q_pullback_g(params.kappa, j, n, s, t).scale(coeff);
    }
    Ok(disk_even_apply(params.kappa, s0, t0, &g))
}

/// Direct rational-coefficient form of the operator, evaluated from the jet
/// of F itself at pt. Kept as an independent cross-check of the pullback
/// route: coefficients are
///   (1−u²)∂uu − 2(v²−c)(u/v)∂uv + (a+b−v²+R/v²)∂vv + (−2a+c−R/v²)(1/v)∂v
///   − (2(κ₂+κ₃)+3)(u∂u + (v²−a)(1/v)∂v) + 2κ₂(b−a)(1/v)∂v,
/// with R = −ab + (a−c)(b−c)u².
pub fn curved_diffop_display_apply_fn(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    f: &dyn Fn(Jet2, Jet2) -> Jet2,
    pt: [f64; 2],
) -> Result<f64> {
    spectral_point_check(dp, params, pt)?;
    let [u, v] = pt;
    let jet = f(Jet2::var_u(u), Jet2::var_v(v));
    let (a, b, c) = (dp.a, dp.b, dp.c);
    let [_, k2, k3] = params.kappa;
    let r = -a * b + (a - c) * (b - c) * u * u;
    let mut total = (1.0 - u * u) * jet.fuu - 2.0 * (v * v - c) * (u / v) * jet.fuv
        + (a + b - v * v + r / (v * v)) * jet.fvv
        + (-2.0 * a + c - r / (v * v)) * jet.fv / v
        - (2.0 * (k2 + k3) + 3.0) * (u * jet.fu + (v * v - a) * jet.fv / v);
    total += 2.0 * k2 * (b - a) * jet.fv / v;
    Ok(total)
}

/// Eigenvalue −n(n + 2κ₂ + 2κ₃ + 2) of the degree-n basis members under the
/// spectral operator (κ₁ = 0).
pub fn curved_eigenvalue(params: &CurvedWeightParams, n: usize) -> f64 {
    let [_, k2, k3] = params.kappa;
    let nf = n as f64;
    -nf * (nf + 2.0 * (k2 + k3) + 2.0)
}

/// Degree-n reproducing kernel on the curved domain: the even-parity disk
/// kernel evaluated at the images ψ(pt1), ψ(pt2). Requires κ₁ = 0.
pub fn curved_kernel_eval(
    dp: &DomainParams2,
    params: &CurvedWeightParams,
    n: usize,
    pt1: [f64; 2],
    pt2: [f64; 2],
) -> Result<f64> {
    params.spectral_valid()?;
    let w = DiskWeightParams::new(params.kappa)?;
    let q1 = psi(dp, pt1)?;
    let q2 = psi(dp, pt2)?;
    disk_parity_kernel_eval(&w, n, q1, q2)
}
