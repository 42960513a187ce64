//! Product quadrature rules on the reference domains: triangle, disk,
//! half-disk, solid ball, and upper half-ball, each against its weight
//! family. Curved-domain rules are pullbacks of these through the quadratic
//! bijections (see the curved modules).

use crate::error::{Error, Result};
use crate::orthopoly::{gauss_jacobi_rule, gen_gegenbauer_rule};

/// Nodes and weights integrating over a planar domain against a fixed weight
/// function (the weight is absorbed into the node weights).
#[derive(Clone, Debug)]
pub struct Quad2D {
    pub nodes: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    /// Total polynomial degree integrated exactly (for pullback rules: the
    /// degree of the integrand composed back on the reference domain).
    pub exactness: usize,
}

impl Quad2D {
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p[0], p[1]))
            .sum()
    }
}

/// Three-dimensional analog of [`Quad2D`].
#[derive(Clone, Debug)]
pub struct Quad3D {
    pub nodes: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
    pub exactness: usize,
}

impl Quad3D {
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64, f64, f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p[0], p[1], p[2]))
            .sum()
    }
}

/// Rule for `u^a1 v^a2 (1-u-v)^a3` on the triangle `u, v >= 0, u + v <= 1`,
/// exact for total degree `deg`, via the collapsed substitution
/// `(u, v) = (x (1-y), y)` which factors the integral into two Jacobi rules.
pub fn triangle_rule(alpha: [f64; 3], deg: usize) -> Result<Quad2D> {
    let [a1, a2, a3] = alpha;
    for (name, ai) in [("alpha1", a1), ("alpha2", a2), ("alpha3", a3)] {
        if !(ai > -1.0) || !ai.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "triangle exponent {name} = {ai} violates {name} > -1"
            )));
        }
    }
    let m = deg / 2 + 1;
    // x-axis: weight x^a1 (1-x)^a3 on [0,1]
    let rx = gauss_jacobi_rule(m, a3, a1)?;
    // y-axis: weight y^a2 (1-y)^(a1+a3+1) on [0,1]
    let ry = gauss_jacobi_rule(m, a1 + a3 + 1.0, a2)?;
    let sx = 0.5f64.powf(a1 + a3 + 1.0);
    let sy = 0.5f64.powf(a1 + a3 + a2 + 2.0);
    let mut nodes = Vec::with_capacity(m * m);
    let mut weights = Vec::with_capacity(m * m);
    for (&xi, &wx) in rx.nodes.iter().zip(&rx.weights) {
        let x = 0.5 * (1.0 + xi);
        for (&eta, &wy) in ry.nodes.iter().zip(&ry.weights) {
            let y = 0.5 * (1.0 + eta);
            nodes.push([x * (1.0 - y), y]);
            weights.push(wx * sx * wy * sy);
        }
    }
    Ok(Quad2D { nodes, weights, exactness: 2 * m - 1 })
}

fn validate_disk_params(kappa: [f64; 3]) -> Result<()> {
    let [k1, k2, k3] = kappa;
    if !(k1 > -0.5) || !k1.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "disk exponent kappa1 = {k1} violates kappa1 > -1/2"
        )));
    }
    if !(k2 > -0.5) || !k2.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "disk exponent kappa2 = {k2} violates kappa2 > -1/2"
        )));
    }
    if !(k3 > -1.0) || !k3.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "disk exponent kappa3 = {k3} violates kappa3 > -1"
        )));
    }
    Ok(())
}

/// Polar product rule for `|u|^(2 k1) |v|^(2 k2) (1-u^2-v^2)^k3` on the unit
/// disk, exact for total degree `deg`. Every node is strictly interior and
/// off both axes.
pub fn disk_rule(kappa: [f64; 3], deg: usize) -> Result<Quad2D> {
    validate_disk_params(kappa)?;
    let [k1, k2, k3] = kappa;
    let m = deg / 4 + 2;
    // radial: rho = r^2 against rho^(k1+k2) (1-rho)^k3, carrying the r drdtheta
    // Jacobian and the r^(2k1+2k2) from the axis powers
    let rr = gauss_jacobi_rule(m, k3, k1 + k2)?;
    let sr = 0.5 * 0.5f64.powf(k1 + k2 + k3 + 1.0);
    // angular: x = cos(2 theta) on the first quadrant against
    // (1-x)^(k2-1/2) (1+x)^(k1-1/2), then unfolded to all four quadrants
    let ra = gauss_jacobi_rule(m, k2 - 0.5, k1 - 0.5)?;
    let sa = 0.5f64.powf(k1 + k2 + 1.0);
    let mut nodes = Vec::with_capacity(4 * m * m);
    let mut weights = Vec::with_capacity(4 * m * m);
    for (&xi, &wr) in rr.nodes.iter().zip(&rr.weights) {
        let r = (0.5 * (1.0 + xi)).sqrt();
        for (&x, &wa) in ra.nodes.iter().zip(&ra.weights) {
            let c = (0.5 * (1.0 + x)).sqrt();
            let s = (0.5 * (1.0 - x)).sqrt();
            let w = wr * sr * wa * sa;
            for (pu, pv) in [(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)] {
                nodes.push([pu * r * c, pv * r * s]);
                weights.push(w);
            }
        }
    }
    Ok(Quad2D { nodes, weights, exactness: 4 * m - 1 })
}

/// Upper-half-disk restriction of [`disk_rule`], valid for integrands even in
/// `v`: the kept upper-quadrant nodes retain their unhalved weights, so the
/// rule integrates `f` over the half disk whenever `f(u, -v) = f(u, v)`.
pub fn half_disk_rule(kappa: [f64; 3], deg: usize) -> Result<Quad2D> {
    let full = disk_rule(kappa, deg)?;
    let mut nodes = Vec::with_capacity(full.nodes.len() / 2);
    let mut weights = Vec::with_capacity(full.nodes.len() / 2);
    for (p, &w) in full.nodes.iter().zip(&full.weights) {
        if p[1] > 0.0 {
            nodes.push(*p);
            weights.push(w);
        }
    }
    Ok(Quad2D { nodes, weights, exactness: full.exactness })
}

fn validate_ball_params(beta: f64, gamma: f64) -> Result<()> {
    if !(beta >= 0.0) || !beta.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ball exponent beta = {beta} violates beta >= 0"
        )));
    }
    if !(gamma > -1.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "ball exponent gamma = {gamma} violates gamma > -1"
        )));
    }
    Ok(())
}

/// Product rule for `|y3|^(2 beta) (1-|y|^2)^gamma` on the unit ball in three
/// dimensions, exact for total degree `deg`: Gauss–Jacobi in the squared
/// radius, a symmetric generalized-Gegenbauer rule in the colatitude cosine,
/// and an equispaced trapezoid in the azimuth.
pub fn ball3_rule(beta: f64, gamma: f64, deg: usize) -> Result<Quad3D> {
    validate_ball_params(beta, gamma)?;
    let mr = deg / 4 + 2;
    let ms = deg / 4 + 2;
    let mt = deg + 2;
    // radial: rho = r^2 against rho^(beta+1/2) (1-rho)^gamma
    let rr = gauss_jacobi_rule(mr, gamma, beta + 0.5)?;
    let sr = 0.5 * 0.5f64.powf(beta + gamma + 1.5);
    // colatitude cosine s against |s|^(2 beta) ds
    let rs = gen_gegenbauer_rule(ms, 0.5, beta)?;
    let dtheta = std::f64::consts::TAU / mt as f64;
    let mut nodes = Vec::with_capacity(mr * 2 * ms * mt);
    let mut weights = Vec::with_capacity(mr * 2 * ms * mt);
    for (&xi, &wr) in rr.nodes.iter().zip(&rr.weights) {
        let r = (0.5 * (1.0 + xi)).sqrt();
        for (&s, &ws) in rs.nodes.iter().zip(&rs.weights) {
            let rho_xy = r * (1.0 - s * s).sqrt();
            for it in 0..mt {
                let th = dtheta * (it as f64 + 0.5);
                nodes.push([rho_xy * th.cos(), rho_xy * th.sin(), r * s]);
                weights.push(wr * sr * ws * dtheta);
            }
        }
    }
    Ok(Quad3D {
        nodes,
        weights,
        exactness: (4 * mr.min(ms) - 1).min(mt - 1),
    })
}

/// Upper-half-ball restriction of [`ball3_rule`] (nodes with `y3 > 0`,
/// unhalved weights), valid for integrands even in `y3`.
pub fn upper_ball3_rule(beta: f64, gamma: f64, deg: usize) -> Result<Quad3D> {
    let full = ball3_rule(beta, gamma, deg)?;
    let mut nodes = Vec::with_capacity(full.nodes.len() / 2);
    let mut weights = Vec::with_capacity(full.nodes.len() / 2);
    for (p, &w) in full.nodes.iter().zip(&full.weights) {
        if p[2] > 0.0 {
            nodes.push(*p);
            weights.push(w);
        }
    }
    Ok(Quad3D { nodes, weights, exactness: full.exactness })
}
