//! Orthogonal structures on solid domains of revolution in ℝ³.
//!
//! Rotating a curved planar domain (module [`crate::curved2d`]) about its
//! vertical axis sweeps a solid body `Λ = {(x, t) ∈ ℝ² × ℝ : (‖x‖, t) ∈ Ω⁺}`
//! — an upper half-ball, a cone, or a hyperboloid segment depending on the
//! shape parameters. The quadratic bijection `ψ(x, t) = (x, 𝔱(‖x‖, t))`
//! carries the body onto the upper half of the unit ball `𝔹³` and turns its
//! weighted structures into classical axis-weighted structures on the ball:
//! orthogonal bases built from generalized Gegenbauer polynomials, Jacobi
//! shells, and circle harmonics; a second-order operator that is diagonal on
//! the basis; and closed-form reproducing kernels. This module provides both
//! sides of the bijection, together with the transported distance, smoothly
//! windowed localized kernels, and the first-order angular derivative
//! operators adapted to the body.

use crate::curved2d::{self, CurvedWeightParams, DomainParams2};
use crate::error::{Error, Result};
use crate::jet::Jet3;
use crate::orthopoly::{
    gen_gegenbauer_rec, homog_jacobi, jacobi_rec, skewed_kernel_axis_rule,
    symmetric_kernel_axis_rule, zn_eval,
};
use crate::quad::{ball3_rule, upper_ball3_rule, Quad3D};
use crate::scalar::Scalar;

/// Smallest axis height `t` at which the operators carrying `1/t`
/// coefficients (the spectral operator and most angular derivatives) are
/// evaluated.
pub const REV_T_MIN: f64 = 0.05;

const BALL_TOL: f64 = 1e-12;

/// Shape parameters `(a, b, c)` of a solid of revolution in ℝ³: the body
/// swept by rotating the planar domain with the same parameters about the
/// `t`-axis. `(0, 1, 0)` gives the upper half of the unit ball, `(0, 1, 1)`
/// the solid cone `‖x‖ ≤ t ≤ 1`, and `c > b` hyperboloid segments. Requires
/// `0 ≤ a < b` and `c ≥ 0`; the planar cross-section dimension is fixed at
/// two, so the bodies live in ℝ³.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevDomainParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl RevDomainParams {
    /// Validates `0 ≤ a < b` and `c ≥ 0`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        DomainParams2::new(a, b, c)?;
        Ok(Self { a, b, c })
    }

    /// The generating planar domain — the `(‖x‖, t)` cross-section.
    pub fn planar(&self) -> DomainParams2 {
        DomainParams2 { a: self.a, b: self.b, c: self.c }
    }
}

/// Exponents `(β, γ)` of the axis weight `|y₃|^{2β} (1 − ‖y‖²)^γ` on the
/// unit ball of ℝ³. Requires `β ≥ 0` and `γ > −1`. The value `β = 0` removes
/// the reflection part of the spectral operator and activates the
/// single-integral kernel on the solid of revolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallWeightParams {
    pub beta: f64,
    pub gamma: f64,
}

impl BallWeightParams {
    /// Validates `β ≥ 0` and `γ > −1`.
    pub fn new(beta: f64, gamma: f64) -> Result<Self> {
        if !(beta >= 0.0) || !beta.is_finite() || !(gamma > -1.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "axis-weight exponents need beta >= 0 and gamma > -1; \
                 got beta = {beta}, gamma = {gamma}"
            )));
        }
        Ok(Self { beta, gamma })
    }
}

/// Dimension of the space of circle harmonics of exact degree `k`: the
/// constant alone at `k = 0`, the cosine/sine pair for every `k ≥ 1`.
pub fn dim_circle_harmonics(k: usize) -> usize {
    if k == 0 {
        1
    } else {
        2
    }
}

/// Index `(n; k, j, ℓ)` of one member of the degree-`n` orthogonal family on
/// the weighted ball or the solid of revolution: `k ≤ n` grades the axis
/// factor, `j ≤ ⌊k/2⌋` the radial shell, and `ℓ` enumerates the circle
/// harmonics of degree `k − 2j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RevBasisIndex {
    pub n: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl RevBasisIndex {
    /// Builds and validates an index.
    pub fn new(n: usize, k: usize, j: usize, l: usize) -> Result<Self> {
        let idx = Self { n, k, j, l };
        idx.validate()?;
        Ok(idx)
    }

    /// Checks `k ≤ n`, `2j ≤ k`, and `1 ≤ ℓ ≤ dim H_{k−2j}`.
    pub fn validate(&self) -> Result<()> {
        if self.k > self.n || 2 * self.j > self.k {
            return Err(Error::IndexOutOfRange(format!(
                "basis index needs k <= n and 2j <= k; got n={}, k={}, j={}",
                self.n, self.k, self.j
            )));
        }
        let dim = dim_circle_harmonics(self.harmonic_degree());
        if self.l < 1 || self.l > dim {
            return Err(Error::IndexOutOfRange(format!(
                "harmonic degree {} admits l in 1..={dim}; got l={}",
                self.harmonic_degree(),
                self.l
            )));
        }
        Ok(())
    }

    /// Degree `k − 2j` of the circle-harmonic factor.
    pub fn harmonic_degree(&self) -> usize {
        self.k - 2 * self.j
    }

    /// Whether the member is even in the axis variable (`k ≡ n (mod 2)`),
    /// i.e. descends to the solid of revolution.
    pub fn even_class(&self) -> bool {
        (self.n - self.k) % 2 == 0
    }
}

/// All member indices of the degree-`n` family on the ball, in canonical
/// order (`k` ascending, then `j`, then `ℓ`). The count is `(n+1)(n+2)/2`.
pub fn ball3_indices(n: usize) -> Vec<RevBasisIndex> {
    let mut out = Vec::new();
    for k in 0..=n {
        for j in 0..=k / 2 {
            for l in 1..=dim_circle_harmonics(k - 2 * j) {
                out.push(RevBasisIndex { n, k, j, l });
            }
        }
    }
    out
}

/// The degree-`n` indices of the even parity class (`k ≡ n (mod 2)`): the
/// members even in the axis variable, which form the orthogonal family on
/// the solid of revolution.
pub fn rev_indices(n: usize) -> Vec<RevBasisIndex> {
    ball3_indices(n)
        .into_iter()
        .filter(RevBasisIndex::even_class)
        .collect()
}

fn circle_harmonic_g<S: Scalar>(k: usize, l: usize, x: [S; 2]) -> S {
    let mut re = S::cst(1.0);
    let mut im = S::cst(0.0);
    for _ in 0..k {
        let nr = re * x[0] - im * x[1];
        im = re * x[1] + im * x[0];
        re = nr;
    }
    let raw = if l == 1 { re } else { im };
    if k == 0 {
        raw
    } else {
        raw.scale(std::f64::consts::SQRT_2)
    }
}

/// Solid circle harmonic of degree `k`: the harmonic polynomials
/// `r^k cos kθ` (`ℓ = 1`) and `r^k sin kθ` (`ℓ = 2`), scaled by `√2` for
/// `k ≥ 1` so the average of the square over the unit circle is one.
pub fn circle_harmonic_eval(k: usize, l: usize, x: [f64; 2]) -> Result<f64> {
    let dim = dim_circle_harmonics(k);
    if l < 1 || l > dim {
        return Err(Error::IndexOutOfRange(format!(
            "circle-harmonic degree {k} admits l in 1..={dim}; got l={l}"
        )));
    }
    Ok(circle_harmonic_g(k, l, x))
}

/// Member `(n, m, ℓ)` of the classical orthogonal family on the unit disk
/// under the weight `(1 − ‖x‖²)^γ`: a Jacobi polynomial in `2‖x‖² − 1` of
/// parameters `(γ, n − 2m)` times a circle harmonic of degree `n − 2m`.
pub fn ball_classical_eval(gamma: f64, n: usize, m: usize, l: usize, x: [f64; 2]) -> Result<f64> {
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "disk weight exponent needs gamma > -1; got {gamma}"
        )));
    }
    if 2 * m > n {
        return Err(Error::IndexOutOfRange(format!(
            "radial index needs 2m <= n; got n={n}, m={m}"
        )));
    }
    let k = n - 2 * m;
    let dim = dim_circle_harmonics(k);
    if l < 1 || l > dim {
        return Err(Error::IndexOutOfRange(format!(
            "harmonic degree {k} admits l in 1..={dim}; got l={l}"
        )));
    }
    let rho = x[0] * x[0] + x[1] * x[1];
    if rho > 1.0 + BALL_TOL {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}) lies outside the closed unit disk",
            x[0], x[1]
        )));
    }
    Ok(jacobi_rec(m, gamma, k as f64, 2.0 * rho - 1.0) * circle_harmonic_g(k, l, x))
}

fn require_in_ball3(y: [f64; 3]) -> Result<()> {
    let rho = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    if rho > 1.0 + BALL_TOL {
        return Err(Error::DomainViolation(format!(
            "point ({}, {}, {}) lies outside the closed unit ball",
            y[0], y[1], y[2]
        )));
    }
    Ok(())
}

/// Density `|y₃|^{2β} (1 − ‖y‖²)^γ` at `y`. A vanishing factor with a
/// positive exponent gives 0; a negative exponent on its vanishing locus is
/// a singular evaluation.
pub fn ball3_weight(bw: &BallWeightParams, y: [f64; 3]) -> Result<f64> {
    require_in_ball3(y)?;
    let s = (1.0 - y[0] * y[0] - y[1] * y[1] - y[2] * y[2]).max(0.0);
    let ball = if bw.gamma == 0.0 {
        1.0
    } else if s == 0.0 {
        if bw.gamma > 0.0 {
            0.0
        } else {
            return Err(Error::SingularEvaluation(format!(
                "boundary factor with negative exponent {} at the sphere",
                bw.gamma
            )));
        }
    } else {
        s.powf(bw.gamma)
    };
    let axis = if bw.beta == 0.0 { 1.0 } else { (y[2] * y[2]).powf(bw.beta) };
    Ok(axis * ball)
}

fn ball3_weighted_g<S: Scalar>(bw: &BallWeightParams, idx: &RevBasisIndex, y: [S; 3]) -> S {
    let rho = y[0] * y[0] + y[1] * y[1];
    let t = y[2];
    let radial = gen_gegenbauer_rec(idx.n - idx.k, idx.k as f64 + bw.gamma + 1.5, bw.beta, t);
    let shell = homog_jacobi(idx.j, bw.gamma, idx.harmonic_degree() as f64, rho, t * t);
    radial * shell * circle_harmonic_g(idx.harmonic_degree(), idx.l, [y[0], y[1]])
}

/// Member of the degree-`n` orthogonal family on the unit ball of ℝ³ under
/// the axis weight of [`BallWeightParams`]: a generalized Gegenbauer factor
/// of degree `n − k` in `y₃`, a homogenized Jacobi shell in `(‖x‖², y₃²)`,
/// and a circle harmonic of degree `k − 2j` in `x = (y₁, y₂)`. The parity
/// under `y ↦ −y` is `(−1)^n`; the axis factor alone has parity `(−1)^{n−k}`.
pub fn ball3_weighted_eval(bw: &BallWeightParams, idx: &RevBasisIndex, y: [f64; 3]) -> Result<f64> {
    idx.validate()?;
    require_in_ball3(y)?;
    Ok(ball3_weighted_g(bw, idx, y))
}

/// Jet-valued variant of [`ball3_weighted_eval`]: accepts jet coordinates so
/// the member can be composed with coordinate changes and differentiated.
pub fn ball3_weighted_jet(bw: &BallWeightParams, idx: &RevBasisIndex, y: [Jet3; 3]) -> Result<Jet3> {
    idx.validate()?;
    Ok(ball3_weighted_g(bw, idx, y))
}

/// Product quadrature on the ball against the axis weight, exact to the
/// indicated total degree.
pub fn ball3_quadrature(bw: &BallWeightParams, deg: usize) -> Result<Quad3D> {
    ball3_rule(bw.beta, bw.gamma, deg)
}

/// Norms of the ball family under the mass-normalized inner product, listed
/// per degree in canonical index order.
pub fn ball3_basis_norms(
    bw: &BallWeightParams,
    nmax: usize,
) -> Result<Vec<Vec<(RevBasisIndex, f64)>>> {
    let rule = ball3_rule(bw.beta, bw.gamma, 2 * nmax)?;
    let inv_mass = 1.0 / rule.mass();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut row = Vec::new();
        for idx in ball3_indices(n) {
            let sq = rule.integrate(|xx, yy, zz| {
                let q = ball3_weighted_g(bw, &idx, [xx, yy, zz]);
                q * q
            });
            row.push((idx, (inv_mass * sq).sqrt()));
        }
        out.push(row);
    }
    Ok(out)
}

/// Applies the second-order operator that is diagonal on the weighted ball
/// family: the Laplacian minus `⟨y,∇⟩² + (2β + 2γ + 3)⟨y,∇⟩`, plus — for
/// `β ≠ 0` — the reflection part `β(2∂₃/y₃ − (1 − σ₃)/y₃²)` across the
/// plane `y₃ = 0`. Degree-`n` members are eigenfunctions with eigenvalue
/// `−n(n + 2β + 2γ + 3)` (see [`ball3_eigenvalue`]).
///
/// `even_in_t` asserts that `f` is even in `y₃`; the reflection part then
/// reduces to the pure differential `2β ∂₃/y₃`, evaluated by its interior
/// limit near the plane. Without the assertion the reflected difference
/// quotient is formed, which needs `|y₃| ≥ 1e−3`.
pub fn ball3_diffop_apply(
    bw: &BallWeightParams,
    f: &dyn Fn([Jet3; 3]) -> Jet3,
    y: [f64; 3],
    even_in_t: bool,
) -> Result<f64> {
    require_in_ball3(y)?;
    let jet = f([Jet3::var(0, y[0]), Jet3::var(1, y[1]), Jet3::var(2, y[2])]);
    let g = jet.grad;
    let h = jet.hess;
    let lap = h[0] + h[3] + h[5];
    let yhy = y[0] * y[0] * h[0]
        + y[1] * y[1] * h[3]
        + y[2] * y[2] * h[5]
        + 2.0 * (y[0] * y[1] * h[1] + y[0] * y[2] * h[2] + y[1] * y[2] * h[4]);
    let ydg = y[0] * g[0] + y[1] * g[1] + y[2] * g[2];
    let mut total = lap - yhy - ydg - (2.0 * bw.beta + 2.0 * bw.gamma + 3.0) * ydg;
    if bw.beta != 0.0 {
        if even_in_t {
            let ratio = if y[2].abs() < 1e-7 { h[5] } else { g[2] / y[2] };
            total += 2.0 * bw.beta * ratio;
        } else {
            if y[2].abs() < 1e-3 {
                return Err(Error::SingularEvaluation(format!(
                    "the reflected difference quotient needs |y3| >= 1e-3 \
                     unless f is even in y3; got y3 = {}",
                    y[2]
                )));
            }
            let refl = f([Jet3::cst(y[0]), Jet3::cst(y[1]), Jet3::cst(-y[2])]).f;
            total += bw.beta * (2.0 * g[2] / y[2] - (jet.f - refl) / (y[2] * y[2]));
        }
    }
    Ok(total)
}

/// Eigenvalue `−n(n + 2β + 2γ + 3)` of the degree-`n` ball family under the
/// operator of [`ball3_diffop_apply`].
pub fn ball3_eigenvalue(bw: &BallWeightParams, n: usize) -> f64 {
    let nf = n as f64;
    -nf * (nf + 2.0 * bw.beta + 2.0 * bw.gamma + 3.0)
}

/// Degree-`n` reproducing kernel of the weighted ball family, by its
/// closed-form double integral: a skewed measure in `u` (right-endpoint
/// point mass at `β = 0`) and a symmetric measure in `v` (endpoint average
/// at `γ = −1/2`) applied to the degree-`n` Gegenbauer kernel function of
/// parameter `β + γ + 3/2`, with argument
/// `⟨x₁,x₂⟩ + u t₁t₂ + v √(1−‖y₁‖²) √(1−‖y₂‖²)`. Normalized so the
/// degree-0 kernel is 1 under the mass-normalized inner product.
pub fn ball3_kernel_eval(
    bw: &BallWeightParams,
    n: usize,
    y1: [f64; 3],
    y2: [f64; 3],
) -> Result<f64> {
    require_in_ball3(y1)?;
    require_in_ball3(y2)?;
    let m = n + 2;
    let ru = skewed_kernel_axis_rule(m, bw.beta)?;
    let rv = symmetric_kernel_axis_rule(m, bw.gamma)?;
    let cxy = y1[0] * y2[0] + y1[1] * y2[1];
    let ctt = y1[2] * y2[2];
    let q1 = (1.0 - y1[0] * y1[0] - y1[1] * y1[1] - y1[2] * y1[2]).max(0.0);
    let q2 = (1.0 - y2[0] * y2[0] - y2[1] * y2[1] - y2[2] * y2[2]).max(0.0);
    let c3 = (q1 * q2).sqrt();
    let lam = bw.beta + bw.gamma + 1.5;
    let mut total = 0.0;
    for (&u, &wu) in ru.nodes.iter().zip(&ru.weights) {
        for (&v, &wv) in rv.nodes.iter().zip(&rv.weights) {
            total += wu * wv * zn_eval(n, lam, cxy + u * ctt + v * c3)?;
        }
    }
    Ok(total)
}

/// Reflection across the plane `y₃ = 0`.
pub fn reflect_t(y: [f64; 3]) -> [f64; 3] {
    [y[0], y[1], -y[2]]
}

/// Average of the ball kernel over the reflection of its second argument:
/// the reproducing kernel of the even parity class, which is the object
/// transported to the solid of revolution.
pub fn ball3_parity_kernel_eval(
    bw: &BallWeightParams,
    n: usize,
    y1: [f64; 3],
    y2: [f64; 3],
) -> Result<f64> {
    Ok(0.5 * (ball3_kernel_eval(bw, n, y1, y2)? + ball3_kernel_eval(bw, n, y1, reflect_t(y2))?))
}

/// Whether `p = (x₁, x₂, t)` lies in the solid of revolution: planar
/// membership of `(‖x‖, t)` in the generating cross-section with `t ≥ 0`.
pub fn rev_contains(dp: &RevDomainParams, p: [f64; 3]) -> bool {
    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
    curved2d::domain_contains(&dp.planar(), [r, p[2]], true)
}

fn require_in_rev(dp: &RevDomainParams, p: [f64; 3]) -> Result<()> {
    if rev_contains(dp, p) {
        Ok(())
    } else {
        Err(Error::DomainViolation(format!(
            "point ({}, {}, {}) lies outside the solid of revolution with \
             (a, b, c) = ({}, {}, {})",
            p[0], p[1], p[2], dp.a, dp.b, dp.c
        )))
    }
}

/// The quadratic bijection onto the upper half-ball: fixes the planar
/// coordinates and replaces the height by the normalized lower-arc root
/// `𝔱(‖x‖, t) = √((t² − a + (a − c)‖x‖²)/(b − a))`. On the cone family
/// `(0, 1, c)` this is `√(t² − c‖x‖²)`.
pub fn rev_psi(dp: &RevDomainParams, p: [f64; 3]) -> Result<[f64; 3]> {
    require_in_rev(dp, p)?;
    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
    let tau = curved2d::frakt(&dp.planar(), [r, p[2]])?;
    Ok([p[0], p[1], tau])
}

/// Inverse of [`rev_psi`]: lifts a point of the closed upper half-ball back
/// to the solid via `t = √((b − a)y₃² + a(1 − ‖x‖²) + c‖x‖²)`.
pub fn rev_psi_inv(dp: &RevDomainParams, y: [f64; 3]) -> Result<[f64; 3]> {
    if y[2] < -BALL_TOL {
        return Err(Error::DomainViolation(format!(
            "the inverse bijection takes the upper half-ball; got y3 = {}",
            y[2]
        )));
    }
    let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
    let uv = curved2d::psi_inv(&dp.planar(), [r, y[2].max(0.0)])?;
    Ok([y[0], y[1], uv[1]])
}

/// Density on the solid of revolution whose pullback through [`rev_psi`] is
/// exactly the ball density [`ball3_weight`]:
/// `|t| z^{β−1/2} X^γ / (b − a)`, with `z` and `X` the normalized lower/upper
/// arc distances of the planar cross-section at `(‖x‖, t)`.
pub fn rev_weight(dp: &RevDomainParams, bw: &BallWeightParams, p: [f64; 3]) -> Result<f64> {
    let wp = CurvedWeightParams::new([0.0, bw.beta, bw.gamma])?;
    let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
    curved2d::curved_weight(&dp.planar(), &wp, [r, p[2]])
}

/// Quadrature on the solid against [`rev_weight`]: the upper-half-ball
/// product rule carried through the inverse bijection. The map fixes the
/// planar coordinates and transports the measure exactly, so the stated
/// exactness refers to integrands that pull back to polynomials on the ball.
pub fn rev_quadrature(dp: &RevDomainParams, bw: &BallWeightParams, deg: usize) -> Result<Quad3D> {
    let rule = upper_ball3_rule(bw.beta, bw.gamma, deg)?;
    let planar = dp.planar();
    let mut nodes = Vec::with_capacity(rule.nodes.len());
    for y in &rule.nodes {
        let r = (y[0] * y[0] + y[1] * y[1]).sqrt();
        let uv = curved2d::psi_inv(&planar, [r, y[2]])?;
        nodes.push([y[0], y[1], uv[1]]);
    }
    Ok(Quad3D { nodes, weights: rule.weights, exactness: rule.exactness })
}

/// Member of the orthogonal family on the solid of revolution: the ball
/// member composed with [`rev_psi`]. Only the even parity class
/// `k ≡ n (mod 2)` consists of genuine functions of `(x, t)` on the solid;
/// other indices are rejected.
pub fn rev_basis_eval(
    dp: &RevDomainParams,
    bw: &BallWeightParams,
    idx: &RevBasisIndex,
    p: [f64; 3],
) -> Result<f64> {
    idx.validate()?;
    if !idx.even_class() {
        return Err(Error::IndexOutOfRange(format!(
            "the family on the solid uses the even parity class k ≡ n (mod 2); \
             got n={}, k={}",
            idx.n, idx.k
        )));
    }
    let y = rev_psi(dp, p)?;
    Ok(ball3_weighted_g(bw, idx, y))
}

/// Norms of the even-class family under the mass-normalized inner product on
/// the solid, per degree in canonical order. They coincide with the ball
/// norms of the same members: the bijection carries the normalized measure
/// of every shape onto the same reference measure.
pub fn rev_basis_norms(
    dp: &RevDomainParams,
    bw: &BallWeightParams,
    nmax: usize,
) -> Result<Vec<Vec<(RevBasisIndex, f64)>>> {
    let rule = rev_quadrature(dp, bw, 2 * nmax)?;
    let mut ball_nodes = Vec::with_capacity(rule.nodes.len());
    for p in &rule.nodes {
        ball_nodes.push(rev_psi(dp, *p)?);
    }
    let inv_mass = 1.0 / rule.weights.iter().sum::<f64>();
    let mut out = Vec::with_capacity(nmax + 1);
    for n in 0..=nmax {
        let mut row = Vec::new();
        for idx in rev_indices(n) {
            let mut sq = 0.0;
            for (y, &w) in ball_nodes.iter().zip(&rule.weights) {
                let q = ball3_weighted_g(bw, &idx, *y);
                sq += w * q * q;
            }
            row.push((idx, (inv_mass * sq).sqrt()));
        }
        out.push(row);
    }
    Ok(out)
}

/// Applies the second-order spectral operator of the solid of revolution by
/// its defining pullback property: the ball operator applied to `f ∘ ψ⁻¹`,
/// evaluated at `ψ(p)`. Members of degree `n` are eigenfunctions with
/// eigenvalue `−n(n + 2β + 2γ + 3)` (see [`rev_eigenvalue`]).
///
/// The composition is carried out with second-order forward-mode jets; the
/// height enters the inverse map only through `t²`, so the pullback is
/// automatically even in the ball axis variable and the `β` term uses its
/// interior limit near the equatorial plane. Requires `t ≥ REV_T_MIN`.
pub fn rev_diffop_apply(
    dp: &RevDomainParams,
    bw: &BallWeightParams,
    f: &dyn Fn([Jet3; 3]) -> Jet3,
    p: [f64; 3],
) -> Result<f64> {
    require_in_rev(dp, p)?;
    if p[2] < REV_T_MIN {
        return Err(Error::SingularEvaluation(format!(
            "the spectral operator is evaluated for t >= {REV_T_MIN}; got t = {}",
            p[2]
        )));
    }
    let y = rev_psi(dp, p)?;
    let u0 = Jet3::var(0, y[0]);
    let u1 = Jet3::var(1, y[1]);
    let v = Jet3::var(2, y[2]);
    let rho = u0 * u0 + u1 * u1;
    let tj = ((v * v).scale(dp.b - dp.a) + rho.scale(dp.c - dp.a) + Jet3::cst(dp.a)).sqrt();
    let jet = f([u0, u1, tj]);
    let g = jet.grad;
    let h = jet.hess;
    let lap = h[0] + h[3] + h[5];
    let yhy = y[0] * y[0] * h[0]
        + y[1] * y[1] * h[3]
        + y[2] * y[2] * h[5]
        + 2.0 * (y[0] * y[1] * h[1] + y[0] * y[2] * h[2] + y[1] * y[2] * h[4]);
    let ydg = y[0] * g[0] + y[1] * g[1] + y[2] * g[2];
    let mut total = lap - yhy - ydg - (2.0 * bw.beta + 2.0 * bw.gamma + 3.0) * ydg;
    if bw.beta != 0.0 {
        let ratio = if y[2].abs() < 1e-7 { h[5] } else { g[2] / y[2] };
        total += 2.0 * bw.beta * ratio;
    }
    Ok(total)
}

/// Expanded coefficient form of the same spectral operator directly in the
/// solid coordinates, kept as a diagnostic cross-check of the pullback
/// route ([`rev_diffop_apply`] is authoritative):
///
/// ```text
/// Δ_x − ⟨x,∇_x⟩² + [(a−c)(b−c)‖x‖² + (t²−a)(b−t²)] t⁻² ∂_t²
///   + 2(c/t − t) ∂_t ⟨x,∇_x⟩ − (2β+2γ+3)(⟨x,∇_x⟩ + t ∂_t) − t ∂_t
///   + (2bβ + 2aγ + a + 2c) t⁻¹ ∂_t + [ab + (a−c)(c−b)‖x‖²] t⁻³ ∂_t
/// ```
pub fn rev_diffop_display_apply(
    dp: &RevDomainParams,
    bw: &BallWeightParams,
    f: &dyn Fn([Jet3; 3]) -> Jet3,
    p: [f64; 3],
) -> Result<f64> {
    require_in_rev(dp, p)?;
    if p[2] < REV_T_MIN {
        return Err(Error::SingularEvaluation(format!(
            "the spectral operator is evaluated for t >= {REV_T_MIN}; got t = {}",
            p[2]
        )));
    }
    let jet = f([Jet3::var(0, p[0]), Jet3::var(1, p[1]), Jet3::var(2, p[2])]);
    let g = jet.grad;
    let h = jet.hess;
    let (a, b, c) = (dp.a, dp.b, dp.c);
    let t = p[2];
    let rho = p[0] * p[0] + p[1] * p[1];
    let s = p[0] * g[0] + p[1] * g[1];
    let xhx = p[0] * p[0] * h[0] + 2.0 * p[0] * p[1] * h[1] + p[1] * p[1] * h[3];
    let tcross = p[0] * h[2] + p[1] * h[4];
    let lapx = h[0] + h[3];
    let bg = 2.0 * bw.beta + 2.0 * bw.gamma + 3.0;
    Ok(lapx - xhx - s
        + ((a - c) * (b - c) * rho + (t * t - a) * (b - t * t)) / (t * t) * h[5]
        + 2.0 * (c / t - t) * tcross
        - bg * (s + t * g[2])
        - t * g[2]
        + (2.0 * b * bw.beta + 2.0 * a * bw.gamma + a + 2.0 * c) / t * g[2]
        + (a * b + (a - c) * (c - b) * rho) / (t * t * t) * g[2])
}

/// Eigenvalue `−n(n + 2β + 2γ + 3)` of the degree-`n` family on the solid.
pub fn rev_eigenvalue(bw: &BallWeightParams, n: usize) -> f64 {
    ball3_eigenvalue(bw, n)
}

/// Degree-`n` reproducing kernel of the even-class family on the solid for
/// `β = 0`: a single symmetric integral of the degree-`n` Gegenbauer kernel
/// function of parameter `γ + 3/2`, applied to the two reflected arguments
/// `⟨x₁,x₂⟩ ± 𝔱₁𝔱₂ + v φ₁φ₂` and averaged, where `𝔱ᵢ` are the transported
/// heights and `φᵢ = √(1 − ‖xᵢ‖² − 𝔱ᵢ²)` the ball boundary distances of the
/// images. Equals the parity-averaged ball kernel at the images.
pub fn rev_kernel_eval(
    dp: &RevDomainParams,
    gamma: f64,
    n: usize,
    p1: [f64; 3],
    p2: [f64; 3],
) -> Result<f64> {
    BallWeightParams::new(0.0, gamma)?;
    let y1 = rev_psi(dp, p1)?;
    let y2 = rev_psi(dp, p2)?;
    let rv = symmetric_kernel_axis_rule(n + 2, gamma)?;
    let cxy = y1[0] * y2[0] + y1[1] * y2[1];
    let ctt = y1[2] * y2[2];
    let q1 = (1.0 - y1[0] * y1[0] - y1[1] * y1[1] - y1[2] * y1[2]).max(0.0);
    let q2 = (1.0 - y2[0] * y2[0] - y2[1] * y2[1] - y2[2] * y2[2]).max(0.0);
    let phi = (q1 * q2).sqrt();
    let lam = gamma + 1.5;
    let mut total = 0.0;
    for (&v, &w) in rv.nodes.iter().zip(&rv.weights) {
        total += w
            * 0.5
            * (zn_eval(n, lam, cxy + ctt + v * phi)? + zn_eval(n, lam, cxy - ctt + v * phi)?);
    }
    Ok(total)
}

/// Geodesic-type distance on the solid: the great-circle distance of the
/// images under the bijection,
/// `arccos(⟨ψp₁, ψp₂⟩ + φ₁φ₂)` with `φᵢ = √(1 − ‖ψpᵢ‖²)`. Values lie in
/// `[0, π]`; the arccosine argument is clamped to `[−1, 1]` against rounding.
pub fn rev_distance(dp: &RevDomainParams, p1: [f64; 3], p2: [f64; 3]) -> Result<f64> {
    let y1 = rev_psi(dp, p1)?;
    let y2 = rev_psi(dp, p2)?;
    let q1 = (1.0 - y1[0] * y1[0] - y1[1] * y1[1] - y1[2] * y1[2]).max(0.0);
    let q2 = (1.0 - y2[0] * y2[0] - y2[1] * y2[1] - y2[2] * y2[2]).max(0.0);
    let arg = y1[0] * y2[0] + y1[1] * y2[1] + y1[2] * y2[2] + (q1 * q2).sqrt();
    Ok(arg.clamp(-1.0, 1.0).acos())
}

/// The built-in smooth window: 1 on `[0, 1]`, `exp(1 − 1/(1 − (t−1)²))` on
/// `(1, 2)`, and 0 from 2 on — infinitely differentiable, nonincreasing,
/// and supported in `[0, 2]`.
pub fn default_cutoff(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        (1.0 - 1.0 / (1.0 - s * s)).exp()
    }
}

/// Validates the plateau/support contract of a window function on a check
/// grid over `[0, 2.5]`: the value must be 1 on `[0, 1]`, 0 from 2 on, and
/// finite and nonnegative in between. Smoothness is the caller's contract
/// and is not checked numerically.
pub fn validate_cutoff(cutoff: &dyn Fn(f64) -> f64) -> Result<()> {
    let m = 500;
    for i in 0..=m {
        let t = 2.5 * i as f64 / m as f64;
        let v = cutoff(t);
        if !v.is_finite() {
            return Err(Error::InvalidCutoff(format!("cutoff({t}) = {v} is not finite")));
        }
        if t <= 1.0 && (v - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCutoff(format!(
                "cutoff must equal 1 on [0, 1]; cutoff({t}) = {v}"
            )));
        }
        if t >= 2.0 && v.abs() > 1e-9 {
            return Err(Error::InvalidCutoff(format!(
                "cutoff must vanish from 2 on; cutoff({t}) = {v}"
            )));
        }
        if v < -1e-9 {
            return Err(Error::InvalidCutoff(format!(
                "cutoff must be nonnegative; cutoff({t}) = {v}"
            )));
        }
    }
    Ok(())
}

/// Smoothly windowed kernel sum `Σ_{k=0}^{2n} cutoff(k/n) K_k(p₁, p₂)` of
/// the `β = 0` family. The window makes the sum sharply localized around
/// `p₁ = p₂` in the distance of [`rev_distance`]. Degree 0 reduces to the
/// constant kernel.
pub fn localized_kernel_eval(
    dp: &RevDomainParams,
    gamma: f64,
    n: usize,
    p1: [f64; 3],
    p2: [f64; 3],
    cutoff: &dyn Fn(f64) -> f64,
) -> Result<f64> {
    validate_cutoff(cutoff)?;
    if n == 0 {
        return rev_kernel_eval(dp, gamma, 0, p1, p2);
    }
    let mut total = 0.0;
    for k in 0..=2 * n {
        let w = cutoff(k as f64 / n as f64);
        if w == 0.0 {
            continue;
        }
        total += w * rev_kernel_eval(dp, gamma, k, p1, p2)?;
    }
    Ok(total)
}

/// First-order angular derivative operators and the boundary multiplier on
/// the unit-height family `(a, b) = (0, 1)`:
///
/// * `D12 = x₁∂₂ − x₂∂₁`, the planar rotation derivative;
/// * `FrakD1`, `FrakD2`: `∂_{xᵢ} + c (xᵢ/t) ∂_t`, the skewed frame;
/// * `FrakD3 = (𝔱/t) ∂_t` with the transported height `𝔱 = √(t² − c‖x‖²)`;
/// * `FrakD13`, `FrakD23`: `xᵢ·FrakD3 − 𝔱·FrakDᵢ`, mixed rotations;
/// * `PhiC`: multiplication by `φ(x, t) = √(1 − (1−c)‖x‖² − t²)`, the factor
///   whose pullback through the bijection is the ball boundary distance
///   `√(1 − ‖y‖²)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngularOp {
    D12,
    FrakD1,
    FrakD2,
    FrakD3,
    FrakD13,
    FrakD23,
    PhiC,
}

/// Applies one [`AngularOp`] at `p`, differentiating the callable with
/// forward-mode jets. The operators with `1/t` coefficients require
/// `t ≥ REV_T_MIN`; the shape must belong to the unit-height family
/// `(a, b) = (0, 1)`.
pub fn angular_ops_apply(
    dp: &RevDomainParams,
    which: AngularOp,
    f: &dyn Fn([Jet3; 3]) -> Jet3,
    p: [f64; 3],
) -> Result<f64> {
    if dp.a != 0.0 || dp.b != 1.0 {
        return Err(Error::InvalidParameter(format!(
            "angular derivatives are defined on the unit-height family \
             (a, b) = (0, 1); got ({}, {})",
            dp.a, dp.b
        )));
    }
    require_in_rev(dp, p)?;
    let needs_t = !matches!(which, AngularOp::D12 | AngularOp::PhiC);
    if needs_t && p[2] < REV_T_MIN {
        return Err(Error::SingularEvaluation(format!(
            "this angular derivative carries 1/t coefficients and is \
             evaluated for t >= {REV_T_MIN}; got t = {}",
            p[2]
        )));
    }
    let jet = f([Jet3::var(0, p[0]), Jet3::var(1, p[1]), Jet3::var(2, p[2])]);
    let g = jet.grad;
    let (x1, x2, t) = (p[0], p[1], p[2]);
    let rho = x1 * x1 + x2 * x2;
    let frakt = (t * t - dp.c * rho).max(0.0).sqrt();
    match which {
        AngularOp::D12 => Ok(x1 * g[1] - x2 * g[0]),
        AngularOp::PhiC => Ok((1.0 - (1.0 - dp.c) * rho - t * t).max(0.0).sqrt() * jet.f),
        AngularOp::FrakD1 => Ok(g[0] + dp.c * x1 / t * g[2]),
        AngularOp::FrakD2 => Ok(g[1] + dp.c * x2 / t * g[2]),
        AngularOp::FrakD3 => Ok(frakt / t * g[2]),
        AngularOp::FrakD13 => {
            let d3 = frakt / t * g[2];
            let d1 = g[0] + dp.c * x1 / t * g[2];
            Ok(x1 * d3 - frakt * d1)
        }
        AngularOp::FrakD23 => {
            let d3 = frakt / t * g[2];
            let d2 = g[1] + dp.c * x2 / t * g[2];
            Ok(x2 * d3 - frakt * d2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_harmonics_basic_values() {
        assert_eq!(circle_harmonic_eval(0, 1, [0.3, -0.7]).unwrap(), 1.0);
        let s2 = std::f64::consts::SQRT_2;
        assert!((circle_harmonic_eval(1, 1, [0.4, 0.1]).unwrap() - s2 * 0.4).abs() < 1e-15);
        assert!((circle_harmonic_eval(1, 2, [0.4, 0.1]).unwrap() - s2 * 0.1).abs() < 1e-15);
        assert!((circle_harmonic_eval(2, 1, [1.0, 0.0]).unwrap() - s2).abs() < 1e-15);
        assert!(circle_harmonic_eval(0, 2, [0.0, 0.0]).is_err());
        assert!(circle_harmonic_eval(3, 3, [0.0, 0.0]).is_err());
    }

    #[test]
    fn index_enumeration_counts() {
        assert_eq!(ball3_indices(2).len(), 6);
        assert_eq!(rev_indices(2).len(), 4);
        assert_eq!(rev_indices(3).len(), 6);
        for k in 0..=10usize {
            let expect = if k == 0 { 1 } else { 2 };
            assert_eq!(dim_circle_harmonics(k), expect);
        }
    }

    #[test]
    fn cone_bijection_closed_form() {
        let dp = RevDomainParams::new(0.0, 1.0, 1.0).unwrap();
        let p = [0.3, 0.2, 0.8];
        let y = rev_psi(&dp, p).unwrap();
        let expect = (0.64f64 - 0.13).sqrt();
        assert!((y[2] - expect).abs() < 1e-15);
        let back = rev_psi_inv(&dp, y).unwrap();
        for i in 0..3 {
            assert!((back[i] - p[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn display_route_matches_ball_operator_on_reference_shape() {
        // On (0, 1, 0) the bijection is the identity, so the expanded
        // coefficient form must agree with the ball operator exactly.
        let dp = RevDomainParams::new(0.0, 1.0, 0.0).unwrap();
        let bw = BallWeightParams::new(0.75, 0.5).unwrap();
        let f = |y: [Jet3; 3]| y[0].exp() * (y[2] * y[2]).scale(0.5) + y[0] * y[1] * (y[2] * y[2]);
        let p = [0.2, -0.3, 0.6];
        let disp = rev_diffop_display_apply(&dp, &bw, &f, p).unwrap();
        let ball = ball3_diffop_apply(&bw, &f, p, true).unwrap();
        assert!((disp - ball).abs() < 1e-12, "display {disp} vs ball {ball}");
        let pull = rev_diffop_apply(&dp, &bw, &f, p).unwrap();
        assert!((pull - ball).abs() < 1e-9, "pullback {pull} vs ball {ball}");
    }

    #[test]
    fn cutoff_contract() {
        assert!(validate_cutoff(&default_cutoff).is_ok());
        assert!(matches!(
            validate_cutoff(&|t: f64| if t < 0.5 { 1.0 } else { 0.0 }),
            Err(Error::InvalidCutoff(_))
        ));
        assert!(matches!(
            validate_cutoff(&|_t: f64| 1.0),
            Err(Error::InvalidCutoff(_))
        ));
    }

    #[test]
    fn even_class_enforced_on_the_solid() {
        let dp = RevDomainParams::new(0.0, 1.0, 1.0).unwrap();
        let bw = BallWeightParams::new(0.0, 0.0).unwrap();
        let odd = RevBasisIndex::new(3, 2, 0, 1).unwrap();
        assert!(matches!(
            rev_basis_eval(&dp, &bw, &odd, [0.1, 0.1, 0.5]),
            Err(Error::IndexOutOfRange(_))
        ));
    }
}
