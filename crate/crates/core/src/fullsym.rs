//! Parity decomposition of orthogonal bases on fully symmetric planar domains.
//!
//! A domain Ω symmetric under both reflections (u,v) ↦ (±u,±v), with a weight
//! W(u,v) = w(u²,v²), splits each degree-n orthogonal-polynomial space into
//! parity classes. Members of each class are built from orthonormal bases on
//! the "square-root domain" √Ω = {(s,t) : (√s,√t) ∈ Ω, s,t ≥ 0} under the four
//! shifted weights w(s,t)·s^{±1/2}t^{±1/2}. This module provides that generic
//! construction, the even-parity reproducing kernel, even extension from the
//! upper half domain Λ = {v ≥ 0}, and the even projection operator.

use crate::error::{Error, Result};
use crate::quad::Quad2D;
use crate::triangle::{triangle_basis_eval, triangle_basis_norms, triangle_quadrature, TriangleWeightParams};

/// Parity class of a bivariate polynomial family: even/odd in u crossed with
/// even/odd in v. `Ee`/`Oo` occur at even total degree, `Eo`/`Oe` at odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParityFamily {
    /// Even in u, even in v (total degree 2m).
    Ee,
    /// Odd in u, odd in v (total degree 2m).
    Oo,
    /// Even in u, odd in v (total degree 2m+1).
    Eo,
    /// Odd in u, even in v (total degree 2m+1).
    Oe,
}

impl ParityFamily {
    /// Total polynomial degree of the family's members indexed by `m`.
    pub fn degree(self, m: usize) -> usize {
        match self {
            ParityFamily::Ee | ParityFamily::Oo => 2 * m,
            ParityFamily::Eo | ParityFamily::Oe => 2 * m + 1,
        }
    }

    /// Number of members at index `m` (valid j are `0..dim`).
    pub fn dim(self, m: usize) -> usize {
        match self {
            ParityFamily::Ee | ParityFamily::Eo | ParityFamily::Oe => m + 1,
            ParityFamily::Oo => m,
        }
    }
}

/// Orthonormal-basis data for one shifted weight on the square-root domain.
pub struct ShiftedFamily {
    /// `eval(j, m, (s,t))` returns the orthonormal member of degree m, index j,
    /// under the normalized inner product of this family's weight.
    pub eval: Box<dyn Fn(usize, usize, [f64; 2]) -> Result<f64> + Send + Sync>,
    /// Total mass ∫_{√Ω} of this family's weight.
    pub mass: f64,
}

/// Index order of the four shifted families inside [`SqrtDomainBasis`]:
/// exponents on (s, t) are each either −1/2 (`M`) or +1/2 (`P`).
pub const SHIFT_MM: usize = 0;
/// s-exponent +1/2, t-exponent −1/2.
pub const SHIFT_PM: usize = 1;
/// s-exponent −1/2, t-exponent +1/2.
pub const SHIFT_MP: usize = 2;
/// Both exponents +1/2.
pub const SHIFT_PP: usize = 3;

/// Orthonormal bases on √Ω for the four half-integer shifts of a base weight,
/// together with the masses needed to renormalize their lifts to Ω.
///
/// `mass_w` is the total mass of W on Ω itself; for a fully symmetric weight
/// this coincides with the mass of the (−1/2,−1/2)-shifted weight on √Ω by the
/// substitution (u,v) = (√s,√t), and the triangle-backed constructor exploits
/// that identity.
pub struct SqrtDomainBasis {
    /// The four shifted families, indexed by [`SHIFT_MM`] .. [`SHIFT_PP`].
    pub families: [ShiftedFamily; 4],
    /// Mass ∫_Ω W(u,v) du dv of the lifted weight on the full domain.
    pub mass_w: f64,
    /// Largest index m the family evaluators support.
    pub max_m: usize,
}

impl SqrtDomainBasis {
    fn ratio(&self, shift: usize) -> f64 {
        (self.mass_w / self.families[shift].mass).sqrt()
    }
}

/// Evaluates the orthonormal parity-class member (family, j, m) at a point of
/// Ω. Members are orthonormal under the mass-normalized inner product of W on
/// Ω; the odd-factor families carry the square-root mass ratio that restores
/// unit norm after lifting.
pub fn parity_basis_eval(
    base: &SqrtDomainBasis,
    family: ParityFamily,
    j: usize,
    m: usize,
    pt: [f64; 2],
) -> Result<f64> {
    if j >= family.dim(m) {
        return Err(Error::IndexOutOfRange(format!(
            "parity family {family:?} at m={m} has {} members; got j={j}",
            family.dim(m)
        )));
    }
    let [u, v] = pt;
    let sq = [u * u, v * v];
    match family {
        ParityFamily::Ee => (base.families[SHIFT_MM].eval)(j, m, sq),
        ParityFamily::Oo => {
            let p = (base.families[SHIFT_PP].eval)(j, m - 1, sq)?;
            Ok(base.ratio(SHIFT_PP) * u * v * p)
        }
        ParityFamily::Eo => {
            let p = (base.families[SHIFT_MP].eval)(j, m, sq)?;
            Ok(base.ratio(SHIFT_MP) * v * p)
        }
        ParityFamily::Oe => {
            let p = (base.families[SHIFT_PM].eval)(j, m, sq)?;
            Ok(base.ratio(SHIFT_PM) * u * p)
        }
    }
}

/// Builds the square-root-domain data when √Ω is the unit triangle, i.e. when
/// Ω is the unit disk with weight |u|^{2κ₁}|v|^{2κ₂}(1−u²−v²)^{κ₃} or any
/// domain affinely equivalent to it. Evaluators are orthonormalized triangle
/// bases for the shifted exponents (κ₁±1/2, κ₂±1/2, κ₃); masses come from
/// quadrature, not closed forms.
pub fn triangle_sqrt_basis(kappa: [f64; 3], max_m: usize) -> Result<SqrtDomainBasis> {
    let [k1, k2, k3] = kappa;
    if !(k1 > -0.5 && k2 > -0.5 && k3 > -1.0) {
        return Err(Error::InvalidParameter(format!(
            "square-root triangle weights need kappa1, kappa2 > -1/2 and kappa3 > -1; got {kappa:?}"
        )));
    }
    let shifts = [(-0.5, -0.5), (0.5, -0.5), (-0.5, 0.5), (0.5, 0.5)];
    let mut families = Vec::with_capacity(4);
    for (e1, e2) in shifts {
        let params = TriangleWeightParams::new([k1 + e1, k2 + e2, k3])?;
        let mass = triangle_quadrature(&params, 2)?.mass();
        let norms = triangle_basis_norms(&params, max_m)?;
        let eval = Box::new(move |j: usize, m: usize, st: [f64; 2]| -> Result<f64> {
            let row = norms.get(m).ok_or_else(|| {
                Error::IndexOutOfRange(format!("basis table built through m={}, got m={m}", norms.len().saturating_sub(1)))
            })?;
            Ok(triangle_basis_eval(&params, j, m, st)? / row[j])
        });
        families.push(ShiftedFamily { eval, mass });
    }
    let mass_w = families[SHIFT_MM].mass;
    let families: [ShiftedFamily; 4] = families
        .try_into()
        .map_err(|_| Error::InvalidParameter("internal: family count".into()))?;
    Ok(SqrtDomainBasis { families, mass_w, max_m })
}

/// Even-parity reproducing kernel obtained from a full degree-n kernel by
/// symmetrizing the second argument over the reflection v ↦ −v.
pub fn parity_kernel_eval(
    full_kernel: &dyn Fn(usize, [f64; 2], [f64; 2]) -> Result<f64>,
    n: usize,
    pt1: [f64; 2],
    pt2: [f64; 2],
) -> Result<f64> {
    let direct = full_kernel(n, pt1, pt2)?;
    let reflected = full_kernel(n, pt1, [pt2[0], -pt2[1]])?;
    Ok(0.5 * (direct + reflected))
}

/// Extends a function on the upper half domain Λ to all of Ω by even
/// reflection in the second coordinate.
pub fn even_extend<'a>(f: &'a (dyn Fn([f64; 2]) -> f64 + Sync)) -> impl Fn([f64; 2]) -> f64 + Sync + 'a {
    move |pt: [f64; 2]| f([pt[0], pt[1].abs()])
}

/// Degree-n orthogonal projection of f onto the even-in-v polynomial subspace,
/// evaluated at `pt`. `kernel_eval` must be the even-parity kernel of the
/// target weight; `rule` must integrate against W on Λ and its mass normalizes
/// the measure, so the projection reproduces the subspace exactly.
pub fn proj_even(
    kernel_eval: &dyn Fn(usize, [f64; 2], [f64; 2]) -> Result<f64>,
    f: &dyn Fn([f64; 2]) -> f64,
    n: usize,
    rule: &Quad2D,
    pt: [f64; 2],
) -> Result<f64> {
    if rule.exactness < 2 * n {
        return Err(Error::QuadratureUnderresolved(format!(
            "projection to degree {n} needs a rule exact through degree {}, got {}",
            2 * n,
            rule.exactness
        )));
    }
    let mut acc = 0.0;
    for (node, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        acc += w * f(*node) * kernel_eval(n, pt, *node)?;
    }
    Ok(acc / rule.mass())
}
