//! One-dimensional substrate: Jacobi, Gegenbauer, and generalized Gegenbauer
//! polynomials, the kernel factor `Z_n`, Gauss–Jacobi quadrature, and the
//! point-mass limit rules used by the closed-form kernels.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use nalgebra::DMatrix;

/// Natural log of the Gamma function.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// Euler Beta function `B(a, b)` for positive arguments.
pub fn beta_fn(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Pochhammer symbol `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: f64, n: usize) -> f64 {
    let mut p = 1.0;
    for i in 0..n {
        p *= x + i as f64;
    }
    p
}

/// Parameters `(a, b)` of the Jacobi weight `(1-t)^a (1+t)^b` on `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JacobiParams {
    pub a: f64,
    pub b: f64,
}

impl JacobiParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Jacobi exponent a = {a} violates a > -1"
            )));
        }
        if !(b > -1.0) || !b.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "Jacobi exponent b = {b} violates b > -1"
            )));
        }
        Ok(JacobiParams { a, b })
    }

    /// Total mass of the weight: `2^(a+b+1) B(a+1, b+1)`.
    pub fn mass(&self) -> f64 {
        let (a, b) = (self.a, self.b);
        ((a + b + 1.0) * std::f64::consts::LN_2 + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp()
    }
}

/// Parameters `(lambda, mu)` of the weight `|t|^(2 mu) (1-t^2)^(lambda-1/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenGegenbauerParams {
    pub lambda: f64,
    pub mu: f64,
}

impl GenGegenbauerParams {
    pub fn new(lambda: f64, mu: f64) -> Result<Self> {
        if !(lambda > -0.5) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "generalized Gegenbauer lambda = {lambda} violates lambda > -1/2"
            )));
        }
        if !(mu > -0.5) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "generalized Gegenbauer mu = {mu} violates mu > -1/2"
            )));
        }
        Ok(GenGegenbauerParams { lambda, mu })
    }

    /// Total mass `B(mu + 1/2, lambda + 1/2)`.
    pub fn mass(&self) -> f64 {
        beta_fn(self.mu + 0.5, self.lambda + 0.5)
    }
}

/// Three-term recurrence for `P_n^(a,b)`, generic over the scalar type so the
/// same code produces values and (via jets) derivatives.
pub(crate) fn jacobi_rec<S: Scalar>(n: usize, a: f64, b: f64, t: S) -> S {
    if n == 0 {
        return S::cst(1.0);
    }
    // P_1 = (a + b + 2)/2 * t + (a - b)/2
    let mut pm1 = S::cst(1.0);
    let mut p = t.scale(0.5 * (a + b + 2.0)) + S::cst(0.5 * (a - b));
    for k in 2..=n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let c0 = 2.0 * kf * (kf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0));
        let c2 = (s - 1.0) * (a * a - b * b);
        let c3 = 2.0 * (kf + a - 1.0) * (kf + b - 1.0) * s;
        let next = (t.scale(c1) + S::cst(c2)) * p.scale(1.0 / c0) - pm1.scale(c3 / c0);
        pm1 = p;
        p = next;
    }
    p
}

/// Jacobi polynomial `P_n^(a,b)(t)` in the normalization
/// `P_n^(a,b)(1) = (a+1)_n / n!`. Defined for all real `t`.
pub fn jacobi_eval(n: usize, a: f64, b: f64, t: f64) -> Result<f64> {
    JacobiParams::new(a, b)?;
    Ok(jacobi_rec(n, a, b, t))
}

/// Derivative of order 1 or 2 of `P_n^(a,b)` via the parameter-shift identity
/// `d/dt P_n^(a,b) = (n+a+b+1)/2 * P_(n-1)^(a+1,b+1)`.
pub fn jacobi_deriv(n: usize, a: f64, b: f64, t: f64, order: u32) -> Result<f64> {
    JacobiParams::new(a, b)?;
    if order == 0 || order > 2 {
        return Err(Error::InvalidParameter(format!(
            "derivative order {order} violates order in {{1, 2}}"
        )));
    }
    let mut n = n;
    let (mut a, mut b) = (a, b);
    let mut factor = 1.0;
    for _ in 0..order {
        if n == 0 {
            return Ok(0.0);
        }
        factor *= 0.5 * (n as f64 + a + b + 1.0);
        n -= 1;
        a += 1.0;
        b += 1.0;
    }
    Ok(factor * jacobi_rec(n, a, b, t))
}

/// Classical Gegenbauer polynomial `C_n^lambda(t)` by its three-term
/// recurrence (valid for `lambda > 0`).
pub(crate) fn gegenbauer_rec<S: Scalar>(n: usize, lambda: f64, t: S) -> S {
    if n == 0 {
        return S::cst(1.0);
    }
    let mut cm1 = S::cst(1.0);
    let mut c = t.scale(2.0 * lambda);
    for k in 2..=n {
        let kf = k as f64;
        let next =
            (t * c).scale(2.0 * (kf + lambda - 1.0) / kf) - cm1.scale((kf + 2.0 * lambda - 2.0) / kf);
        cm1 = c;
        c = next;
    }
    c
}

/// Kernel factor `Z_n^lambda(t) = ((n + lambda)/lambda) C_n^lambda(t)`.
pub fn zn_eval(n: usize, lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "kernel index lambda = {lambda} violates lambda > 0"
        )));
    }
    Ok(((n as f64 + lambda) / lambda) * gegenbauer_rec(n, lambda, t))
}

/// Generalized Gegenbauer polynomial, generic over the scalar type:
/// even degree `2m`: `((l+m)_m / (m+1/2)_m) P_m^(l-1/2, m-1/2)(2t^2-1)`;
/// odd degree `2m+1` carries an extra factor `t` and shifted parameters.
pub(crate) fn gen_gegenbauer_rec<S: Scalar>(n: usize, lambda: f64, mu: f64, t: S) -> S {
    let x = (t * t).scale(2.0) - S::cst(1.0);
    let m = n / 2;
    if n % 2 == 0 {
        let c = pochhammer(lambda + mu, m) / pochhammer(mu + 0.5, m);
        jacobi_rec(m, lambda - 0.5, mu - 0.5, x).scale(c)
    } else {
        let c = pochhammer(lambda + mu, m + 1) / pochhammer(mu + 0.5, m + 1);
        (t * jacobi_rec(m, lambda - 0.5, mu + 0.5, x)).scale(c)
    }
}

/// Generalized Gegenbauer polynomial `C_n^(lambda, mu)(t)`, the degree-`n`
/// orthogonal polynomial for `|t|^(2 mu) (1-t^2)^(lambda-1/2)`.
pub fn gen_gegenbauer_eval(n: usize, lambda: f64, mu: f64, t: f64) -> Result<f64> {
    GenGegenbauerParams::new(lambda, mu)?;
    Ok(gen_gegenbauer_rec(n, lambda, mu, t))
}

/// Homogenized Jacobi factor `(1-s)^j P_j^(a,b)(2r/(1-s) - 1)`, which is a
/// genuine bivariate polynomial in `(r, s)`. Away from `s = 1` the quotient
/// form is used directly; within `1e-8` of `s = 1` (where the quotient is
/// numerically singular) the expanded homogeneous sum in the two boundary
/// coordinates `(1-s-r)` and `(1-s)` takes over.
pub(crate) fn homog_jacobi<S: Scalar>(j: usize, a: f64, b: f64, r: S, s: S) -> S {
    if j == 0 {
        return S::cst(1.0);
    }
    let w = S::cst(1.0) - s;
    if w.val().abs() >= 1e-8 {
        let x = (r.scale(2.0) / w) - S::cst(1.0);
        w.powi(j as i32) * jacobi_rec(j, a, b, x)
    } else {
        let z = w - r;
        let mut sum = S::cst(0.0);
        for i in 0..=j {
            let c = pochhammer(-(j as f64), i) * pochhammer(j as f64 + a + b + 1.0, i)
                / (pochhammer(a + 1.0, i) * pochhammer(1.0, i));
            sum = sum + (z.powi(i as i32) * w.powi((j - i) as i32)).scale(c);
        }
        sum.scale(pochhammer(a + 1.0, j) / pochhammer(1.0, j))
    }
}

/// Tag distinguishing honest continuous Gauss rules from point-mass limits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Continuous,
    PointMassLimit,
}

/// Nodes/weights of a one-dimensional quadrature rule, together with the
/// polynomial degree it integrates exactly against its target weight.
#[derive(Clone, Debug)]
pub struct QuadRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub exactness: usize,
    pub kind: RuleKind,
}

impl QuadRule1D {
    /// Total mass of the represented measure.
    pub fn mass(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Applies the rule to `f`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// The same rule rescaled to total mass one (a probability measure).
    pub fn normalized(&self) -> QuadRule1D {
        let m = self.mass();
        QuadRule1D {
            nodes: self.nodes.clone(),
            weights: self.weights.iter().map(|w| w / m).collect(),
            exactness: self.exactness,
            kind: self.kind,
        }
    }
}

/// `m`-point Gauss rule for the Jacobi weight `(1-t)^a (1+t)^b` on `[-1, 1]`,
/// built from the symmetric tridiagonal eigenproblem of the recurrence
/// coefficients. Exactness `2m - 1`.
pub fn gauss_jacobi_rule(m: usize, a: f64, b: f64) -> Result<QuadRule1D> {
    let p = JacobiParams::new(a, b)?;
    if m == 0 {
        return Err(Error::InvalidParameter(
            "quadrature point count m = 0 violates m >= 1".into(),
        ));
    }
    let mut jac = DMatrix::<f64>::zeros(m, m);
    // Diagonal: first-moment ratios of the orthonormal recurrence.
    jac[(0, 0)] = (b - a) / (a + b + 2.0);
    for k in 1..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        jac[(k, k)] = (b * b - a * a) / (s * (s + 2.0));
    }
    // Off-diagonal: sqrt of the beta coefficients. The factor
    // (k+a+b)/(2k+a+b-1) is identically 1 at k = 1, which sidesteps the
    // removable 0/0 there when a + b = -1.
    for k in 1..m {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let ratio = if k == 1 { 1.0 } else { (kf + a + b) / (s - 1.0) };
        let b2 = 4.0 * kf * (kf + a) * (kf + b) / (s * s * (s + 1.0)) * ratio;
        let off = b2.sqrt();
        jac[(k - 1, k)] = off;
        jac[(k, k - 1)] = off;
    }
    let eig = nalgebra::SymmetricEigen::try_new(jac, 1e-15, 10_000)
        .ok_or_else(|| Error::FailureToConverge("Gauss-Jacobi eigensolve".into()))?;
    let mass = p.mass();
    let mut pairs: Vec<(f64, f64)> = (0..m)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            (eig.eigenvalues[i], mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    Ok(QuadRule1D {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        exactness: 2 * m - 1,
        kind: RuleKind::Continuous,
    })
}

/// Which degenerate-parameter limit a point-mass rule represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitRuleKind {
    /// `alpha -> -1/2` limit of the normalized `(1-t^2)^(alpha-1/2)` measure:
    /// `(f(1) + f(-1)) / 2`.
    HalfEndpointAverage,
    /// `beta -> 0` limit of the normalized `(1+t)(1-t^2)^(beta-1)` measure:
    /// `f(1)`.
    RightEndpoint,
}

/// Point-mass rules realizing the endpoint limits of the kernel measures.
pub fn limit_rule(kind: LimitRuleKind) -> QuadRule1D {
    match kind {
        LimitRuleKind::HalfEndpointAverage => QuadRule1D {
            nodes: vec![-1.0, 1.0],
            weights: vec![0.5, 0.5],
            exactness: usize::MAX,
            kind: RuleKind::PointMassLimit,
        },
        LimitRuleKind::RightEndpoint => QuadRule1D {
            nodes: vec![1.0],
            weights: vec![1.0],
            exactness: usize::MAX,
            kind: RuleKind::PointMassLimit,
        },
    }
}

/// Symmetric rule for the weight `|t|^(2 mu) (1-t^2)^(lambda-1/2)` on
/// `[-1, 1]`, synthesized from an `m`-point Gauss–Jacobi rule in `s = 2t^2-1`.
/// The resulting `2m`-point rule has exactness `4m - 1`.
pub fn gen_gegenbauer_rule(m: usize, lambda: f64, mu: f64) -> Result<QuadRule1D> {
    GenGegenbauerParams::new(lambda, mu)?;
    let base = gauss_jacobi_rule(m, lambda - 0.5, mu - 0.5)?;
    let scale = 0.5 * (-(lambda + mu) * std::f64::consts::LN_2).exp();
    let mut nodes = Vec::with_capacity(2 * m);
    let mut weights = Vec::with_capacity(2 * m);
    // Negative branch in descending-x order so the node list is increasing.
    for i in (0..m).rev() {
        nodes.push(-(0.5 * (1.0 + base.nodes[i])).sqrt());
        weights.push(scale * base.weights[i]);
    }
    for i in 0..m {
        nodes.push((0.5 * (1.0 + base.nodes[i])).sqrt());
        weights.push(scale * base.weights[i]);
    }
    Ok(QuadRule1D {
        nodes,
        weights,
        exactness: 4 * m - 1,
        kind: RuleKind::Continuous,
    })
}

/// Rule for one kernel-measure axis `c (1-t^2)^(alpha-1/2)`, normalized to
/// unit mass, degrading to the half-endpoint-average at `alpha = -1/2`.
pub fn symmetric_kernel_axis_rule(m: usize, alpha: f64) -> Result<QuadRule1D> {
    if alpha < -0.5 {
        return Err(Error::InvalidParameter(format!(
            "kernel axis exponent alpha = {alpha} violates alpha >= -1/2"
        )));
    }
    if alpha == -0.5 {
        return Ok(limit_rule(LimitRuleKind::HalfEndpointAverage));
    }
    Ok(gauss_jacobi_rule(m, alpha - 0.5, alpha - 0.5)?.normalized())
}

/// Rule for one kernel-measure axis `c (1+t)(1-t^2)^(kappa-1)`, normalized to
/// unit mass, degrading to the right-endpoint mass at `kappa = 0`.
pub fn skewed_kernel_axis_rule(m: usize, kappa: f64) -> Result<QuadRule1D> {
    if kappa < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kernel axis exponent kappa = {kappa} violates kappa >= 0"
        )));
    }
    if kappa == 0.0 {
        return Ok(limit_rule(LimitRuleKind::RightEndpoint));
    }
    // (1+t)(1-t^2)^(kappa-1) = (1-t)^(kappa-1) (1+t)^kappa
    let rule = gauss_jacobi_rule(m, kappa - 1.0, kappa)?;
    Ok(rule.normalized())
}
