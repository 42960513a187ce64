//! Fourier orthogonal expansion machinery on the curved planar domains and
//! the solids of revolution: projection coefficients against the
//! orthonormalized bases, partial sums, best L² approximation errors,
//! convergence reports with fitted decay orders, K-functional upper-bound
//! proxies, and localization profiles of the windowed kernels.
//!
//! All inner products are mass-normalized: ⟨f, g⟩ = (1/mass) ∫ f g 𝐖. In
//! that inner product the stored coefficient of an orthonormalized member is
//! ⟨f, Q/‖Q‖⟩, partial sums are orthogonal projections, and the degree-N
//! partial sum attains the best L² error from the degree-N polynomial class.

use crate::curved2d::{self, CurvedWeightParams, DomainParams2};
use crate::error::{Error, Result};
use crate::revolution::{self, BallWeightParams, RevBasisIndex, RevDomainParams};
use std::time::Instant;

/// Margin used to flag under-resolved projections: integrating products of
/// two degree-`nmax` members needs exactness `2 nmax`, plus headroom for the
/// integrand itself.
pub const QUAD_DEGREE_MARGIN: usize = 2;

/// The two expansion settings: a curved planar domain with a three-exponent
/// weight, or a solid of revolution with an axis/boundary weight.
#[derive(Debug, Clone, Copy)]
pub enum Space {
    Planar {
        dp: DomainParams2,
        wp: CurvedWeightParams,
    },
    Solid {
        dp: RevDomainParams,
        bw: BallWeightParams,
    },
}

impl Space {
    /// Ambient coordinate count: 2 for the planar domains, 3 for the solids.
    pub fn dim(&self) -> usize {
        match self {
            Space::Planar { .. } => 2,
            Space::Solid { .. } => 3,
        }
    }

    /// |eigenvalue| of the spectral operator on the degree-n subspace, used
    /// for the coefficient-wise fractional operator powers.
    fn eigenvalue_abs(&self, n: usize) -> Result<f64> {
        match self {
            Space::Planar { wp, .. } => {
                wp.spectral_valid()?;
                Ok(curved2d::curved_eigenvalue(wp, n).abs())
            }
            Space::Solid { bw, .. } => Ok(revolution::rev_eigenvalue(bw, n).abs()),
        }
    }
}

/// Index of one basis member in either setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKey {
    /// Planar member Q_{j,n}, 0 ≤ 2j ≤ n.
    Planar { n: usize, j: usize },
    /// Even-class solid member.
    Solid(RevBasisIndex),
}

impl BasisKey {
    pub fn degree(&self) -> usize {
        match self {
            BasisKey::Planar { n, .. } => *n,
            BasisKey::Solid(idx) => idx.n,
        }
    }
}

/// Evaluates the raw (not yet normalized) member at a point of the domain.
fn member_eval(space: &Space, key: &BasisKey, pt: &[f64]) -> Result<f64> {
    match (space, key) {
        (Space::Planar { dp, wp }, BasisKey::Planar { n, j }) => {
            curved2d::q_basis_eval(dp, wp, *j, *n, [pt[0], pt[1]])
        }
        (Space::Solid { dp, bw }, BasisKey::Solid(idx)) => {
            revolution::rev_basis_eval(dp, bw, idx, [pt[0], pt[1], pt[2]])
        }
        _ => Err(Error::InvalidParameter(
            "basis key does not belong to this space".into(),
        )),
    }
}

/// Degree-graded member table with mass-normalized norms.
fn member_table(space: &Space, nmax: usize) -> Result<(Vec<Vec<BasisKey>>, Vec<Vec<f64>>)> {
    match space {
        Space::Planar { dp, wp } => {
            let norms = curved2d::q_norms(dp, wp, nmax)?;
            let keys = (0..=nmax)
                .map(|n| (0..=n / 2).map(|j| BasisKey::Planar { n, j }).collect())
                .collect();
            Ok((keys, norms))
        }
        Space::Solid { dp, bw } => {
            let norms = revolution::rev_basis_norms(dp, bw, nmax)?;
            let keys = (0..=nmax)
                .map(|n| {
                    revolution::rev_indices(n)
                        .into_iter()
                        .map(BasisKey::Solid)
                        .collect()
                })
                .collect();
            let norms = norms
                .into_iter()
                .map(|row| row.into_iter().map(|(_, v)| v).collect())
                .collect();
            Ok((keys, norms))
        }
    }
}

/// Domain quadrature in a dimension-agnostic layout (planar nodes carry a
/// zero third coordinate).
struct ProbeSet {
    pts: Vec<[f64; 3]>,
    weights: Vec<f64>,
    mass: f64,
    dim: usize,
}

fn quadrature(space: &Space, degree: usize) -> Result<ProbeSet> {
    match space {
        Space::Planar { dp, wp } => {
            let rule = curved2d::lambda_quadrature(dp, wp, degree)?;
            let pts = rule.nodes.iter().map(|&[u, v]| [u, v, 0.0]).collect();
            let mass = rule.mass();
            Ok(ProbeSet { pts, weights: rule.weights, mass, dim: 2 })
        }
        Space::Solid { dp, bw } => {
            let rule = revolution::rev_quadrature(dp, bw, degree)?;
            let mass: f64 = rule.weights.iter().sum();
            Ok(ProbeSet { pts: rule.nodes, weights: rule.weights, mass, dim: 3 })
        }
    }
}

/// A Fourier orthogonal expansion: coefficients of f against the
/// orthonormalized basis members, graded by degree.
#[derive(Debug, Clone)]
pub struct Expansion {
    pub space: Space,
    /// coeffs[n] lists (member, ⟨f, member/‖member‖⟩) for every degree-n member.
    pub coeffs: Vec<Vec<(BasisKey, f64)>>,
    /// norms[n][i] is the mass-normalized L² norm of the raw member.
    pub norms: Vec<Vec<f64>>,
    /// Coefficients are always stored against unit-norm members.
    pub orthonormalized: bool,
    /// Degree of the quadrature used for the inner products.
    pub quad_degree: usize,
    /// Set when `quad_degree` is below the resolution margin for the
    /// requested maximum degree; the expansion is still usable.
    pub underresolved: bool,
    /// Weight mass of the domain (the inner-product normalizer).
    pub mass: f64,
}

impl Expansion {
    pub fn max_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Sum of squared coefficients at one degree (the degree-n energy).
    pub fn degree_energy(&self, n: usize) -> f64 {
        self.coeffs
            .get(n)
            .map(|row| row.iter().map(|(_, c)| c * c).sum())
            .unwrap_or(0.0)
    }

    /// Total squared norm of the stored partial sum (Parseval).
    pub fn total_energy(&self) -> f64 {
        (0..self.coeffs.len()).map(|n| self.degree_energy(n)).sum()
    }

    /// Evaluates the degree-`nn` partial sum at a point of the domain.
    pub fn partial_sum_eval(&self, nn: usize, pt: &[f64]) -> Result<f64> {
        if nn > self.max_degree() {
            return Err(Error::IndexOutOfRange(format!(
                "partial sum degree {nn} exceeds the expansion degree {}",
                self.max_degree()
            )));
        }
        if pt.len() != self.space.dim() {
            return Err(Error::InvalidParameter(format!(
                "point has {} coordinates; the space has {}",
                pt.len(),
                self.space.dim()
            )));
        }
        let mut total = 0.0;
        for n in 0..=nn {
            for ((key, c), nrm) in self.coeffs[n].iter().zip(&self.norms[n]) {
                total += c * member_eval(&self.space, key, pt)? / nrm;
            }
        }
        Ok(total)
    }
}

/// Projects `f` onto the degree-graded orthonormalized basis through the
/// domain quadrature: coefficient = (1/mass) Σ w · f · member/‖member‖.
///
/// A quadrature degree below `2·nmax + QUAD_DEGREE_MARGIN` flags the
/// expansion as under-resolved (not fatal: the coefficients are still the
/// discrete inner products).
pub fn project(
    space: &Space,
    f: &dyn Fn(&[f64]) -> f64,
    nmax: usize,
    quad_degree: usize,
) -> Result<Expansion> {
    let (keys, norms) = member_table(space, nmax)?;
    let probe = quadrature(space, quad_degree)?;
    let mut coeffs: Vec<Vec<(BasisKey, f64)>> = keys
        .iter()
        .map(|row| row.iter().map(|&k| (k, 0.0)).collect())
        .collect();
    for (pt, &w) in probe.pts.iter().zip(&probe.weights) {
        let fv = f(&pt[..probe.dim]);
        for n in 0..=nmax {
            for (i, (key, acc)) in coeffs[n].iter_mut().enumerate() {
                *acc += w * fv * member_eval(space, key, &pt[..probe.dim])? / norms[n][i];
            }
        }
    }
    for row in &mut coeffs {
        for (_, c) in row.iter_mut() {
            *c /= probe.mass;
        }
    }
    Ok(Expansion {
        space: *space,
        coeffs,
        norms,
        orthonormalized: true,
        quad_degree,
        underresolved: quad_degree < 2 * nmax + QUAD_DEGREE_MARGIN,
        mass: probe.mass,
    })
}

/// Evaluates the degree-`nn` partial sum of an expansion at `pt`.
pub fn partial_sum_eval(exp: &Expansion, nn: usize, pt: &[f64]) -> Result<f64> {
    exp.partial_sum_eval(nn, pt)
}

/// L² and sampled-sup residual profiles ‖f − S_n f‖ for every n up to the
/// expansion degree, in one pass over the quadrature nodes. The sup column
/// is a sample maximum over the node set, not an exact sup norm.
fn residual_profile(
    exp: &Expansion,
    f: &dyn Fn(&[f64]) -> f64,
    probe: &ProbeSet,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let nmax = exp.max_degree();
    let mut acc = vec![0.0f64; nmax + 1];
    let mut sup = vec![0.0f64; nmax + 1];
    for (pt, &w) in probe.pts.iter().zip(&probe.weights) {
        let p = &pt[..probe.dim];
        let fv = f(p);
        let mut running = 0.0;
        for n in 0..=nmax {
            for ((key, c), nrm) in exp.coeffs[n].iter().zip(&exp.norms[n]) {
                running += c * member_eval(&exp.space, key, p)? / nrm;
            }
            let r = fv - running;
            acc[n] += w * r * r;
            sup[n] = sup[n].max(r.abs());
        }
    }
    let l2 = acc
        .into_iter()
        .map(|a| (a / probe.mass).max(0.0).sqrt())
        .collect();
    Ok((l2, sup))
}

/// Best L² approximation error from the degree-`nn` polynomial class,
/// attained by the partial sum: ‖f − S_nn f‖ through the domain quadrature.
pub fn best_error_l2(
    space: &Space,
    f: &dyn Fn(&[f64]) -> f64,
    nn: usize,
    quad_degree: usize,
) -> Result<f64> {
    let exp = project(space, f, nn, quad_degree)?;
    let probe = quadrature(space, quad_degree)?;
    let (l2, _) = residual_profile(&exp, f, &probe)?;
    Ok(l2[nn])
}

/// Least-squares slope of y against x.
fn ls_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    if x.len() < 2 {
        return 0.0;
    }
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&a, &b) in x.iter().zip(y) {
        sxx += (a - mx) * (a - mx);
        sxy += (a - mx) * (b - my);
    }
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Per-degree (or per-bin) error report.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    /// Strictly increasing abscissa: polynomial degrees, or bin indices for
    /// localization profiles.
    pub degrees: Vec<usize>,
    /// Primary series: L² errors per degree, or normalized bin maxima.
    pub l2_errors: Vec<f64>,
    /// Secondary series: sampled sup errors per degree (approximate), or
    /// the upper distance edge of each bin.
    pub sup_errors: Vec<f64>,
    /// Fitted decay order: −slope of log(error) against log(degree) for
    /// convergence runs, −slope of log(max) against bin-center distance for
    /// localization profiles.
    pub decay_order: f64,
    pub quad_degree: usize,
    pub node_count: usize,
    pub elapsed_ms: f64,
}

impl ConvergenceReport {
    fn validate(self) -> Result<Self> {
        if self.degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter(
                "report degrees must be strictly increasing".into(),
            ));
        }
        if self
            .l2_errors
            .iter()
            .chain(&self.sup_errors)
            .any(|&e| !(e >= 0.0))
        {
            return Err(Error::InvalidParameter(
                "report errors must be nonnegative".into(),
            ));
        }
        Ok(self)
    }
}

/// Projects `f` once at degree `nmax` and reports ‖f − S_n f‖ for every n,
/// in L² (through the quadrature) and as a sampled sup over the node set.
pub fn convergence_report(
    space: &Space,
    f: &dyn Fn(&[f64]) -> f64,
    nmax: usize,
    quad_degree: usize,
) -> Result<ConvergenceReport> {
    let start = Instant::now();
    let exp = project(space, f, nmax, quad_degree)?;
    let probe = quadrature(space, quad_degree)?;
    let (l2, sup) = residual_profile(&exp, f, &probe)?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for n in 1..=nmax {
        if l2[n] > 1e-14 {
            xs.push((n as f64).ln());
            ys.push(l2[n].ln());
        }
    }
    let report = ConvergenceReport {
        degrees: (0..=nmax).collect(),
        l2_errors: l2,
        sup_errors: sup,
        decay_order: -ls_slope(&xs, &ys),
        quad_degree,
        node_count: probe.pts.len(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    report.validate()
}

/// Upper-bound proxy for the K-functional K_r(f; ρ): the infimum over all
/// smooth g is restricted to the partial-sum candidates {S_m f : m ≤ M},
/// with the fractional operator power applied coefficient-wise through the
/// spectral eigenvalue sequence:
///
///   proxy = min_m ( ‖f − S_m f‖ + ρ^r · ( Σ_{n≤m} |λ_n|^r · energy_n )^{1/2} ).
///
/// This is an upper bound for the true infimum, reported as such.
pub fn kfunctional_proxy(
    space: &Space,
    f: &dyn Fn(&[f64]) -> f64,
    r: usize,
    rho: f64,
    max_degree: usize,
    quad_degree: usize,
) -> Result<f64> {
    if r != 1 && r != 2 {
        return Err(Error::InvalidParameter(format!(
            "fractional order r must be 1 or 2; got {r}"
        )));
    }
    if !(rho >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step ρ must be nonnegative; got {rho}"
        )));
    }
    let exp = project(space, f, max_degree, quad_degree)?;
    let probe = quadrature(space, quad_degree)?;
    let (errs, _) = residual_profile(&exp, f, &probe)?;
    let mut best = f64::INFINITY;
    let mut seminorm_sq = 0.0;
    for m in 0..=max_degree {
        seminorm_sq += space.eigenvalue_abs(m)?.powi(r as i32) * exp.degree_energy(m);
        let value = errs[m] + rho.powi(r as i32) * seminorm_sq.sqrt();
        best = best.min(value);
    }
    Ok(best)
}

/// Decay profile of the localized kernel on a solid of revolution: the
/// maximum of |L_n(center, ·)| / L_n(center, center) over each distance bin
/// [i/bins, (i+1)/bins), i < bins, probing the first radian of the domain
/// distance with the deterministic quadrature node set plus the center.
///
/// In the returned report `degrees` are bin indices, `l2_errors` the
/// normalized bin maxima, `sup_errors` the upper distance edge of each bin,
/// and `decay_order` the fitted log-linear decay rate per radian.
pub fn localization_profile(
    dp: &RevDomainParams,
    gamma: f64,
    n: usize,
    center: [f64; 3],
    bins: usize,
) -> Result<ConvergenceReport> {
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    if !revolution::rev_contains(dp, center) {
        return Err(Error::DomainViolation(format!(
            "profile center {center:?} lies outside the solid"
        )));
    }
    let start = Instant::now();
    let bw = BallWeightParams::new(0.0, gamma)?;
    let probe = revolution::rev_quadrature(dp, &bw, 32)?;
    let diag = revolution::localized_kernel_eval(
        dp,
        gamma,
        n,
        center,
        center,
        &revolution::default_cutoff,
    )?;
    if !(diag > 0.0) {
        return Err(Error::DegenerateSample(format!(
            "localized kernel is not positive on the diagonal: {diag}"
        )));
    }
    let width = 1.0 / bins as f64;
    let mut maxima = vec![0.0f64; bins];
    let mut consider = |p: [f64; 3]| -> Result<()> {
        let d = revolution::rev_distance(dp, center, p)?;
        if d < 1.0 {
            let bin = ((d / width) as usize).min(bins - 1);
            let v = revolution::localized_kernel_eval(
                dp,
                gamma,
                n,
                center,
                p,
                &revolution::default_cutoff,
            )?
            .abs()
                / diag;
            maxima[bin] = maxima[bin].max(v);
        }
        Ok(())
    };
    consider(center)?;
    for pt in &probe.nodes {
        consider(*pt)?;
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &m) in maxima.iter().enumerate() {
        if m > 1e-300 {
            xs.push((i as f64 + 0.5) * width);
            ys.push(m.ln());
        }
    }
    let report = ConvergenceReport {
        degrees: (0..bins).collect(),
        l2_errors: maxima,
        sup_errors: (1..=bins).map(|i| i as f64 * width).collect(),
        decay_order: -ls_slope(&xs, &ys),
        quad_degree: 32,
        node_count: probe.nodes.len() + 1,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    report.validate()
}
