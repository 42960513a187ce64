//! Forward-mode second-order jets in two and three variables.
//!
//! A jet carries a value, its gradient, and its Hessian, and propagates them
//! through arithmetic and elementary functions by truncated Taylor algebra.
//! Seeding `Jet2::var_u(x)`/`Jet2::var_v(y)` at a point and evaluating any
//! composite expression yields all partial derivatives up to order two of
//! that expression at the point, exactly (up to rounding).

use crate::scalar::Scalar;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// Order-2 jet in two variables `(u, v)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet2 {
    pub f: f64,
    pub fu: f64,
    pub fv: f64,
    pub fuu: f64,
    pub fuv: f64,
    pub fvv: f64,
}

impl Jet2 {
    pub const fn new(f: f64, fu: f64, fv: f64, fuu: f64, fuv: f64, fvv: f64) -> Self {
        Jet2 { f, fu, fv, fuu, fuv, fvv }
    }

    /// The first coordinate as a jet at value `x`.
    pub fn var_u(x: f64) -> Self {
        Jet2 { f: x, fu: 1.0, ..Default::default() }
    }

    /// The second coordinate as a jet at value `y`.
    pub fn var_v(y: f64) -> Self {
        Jet2 { f: y, fv: 1.0, ..Default::default() }
    }

    /// Composes with a univariate function given by its value and first two
    /// derivatives at `self.f`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        Jet2 {
            f: f0,
            fu: f1 * self.fu,
            fv: f1 * self.fv,
            fuu: f2 * self.fu * self.fu + f1 * self.fuu,
            fuv: f2 * self.fu * self.fv + f1 * self.fuv,
            fvv: f2 * self.fv * self.fv + f1 * self.fvv,
        }
    }

    pub fn recip(self) -> Self {
        let x = self.f;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl Add for Jet2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Jet2 {
            f: self.f + o.f,
            fu: self.fu + o.fu,
            fv: self.fv + o.fv,
            fuu: self.fuu + o.fuu,
            fuv: self.fuv + o.fuv,
            fvv: self.fvv + o.fvv,
        }
    }
}

impl Sub for Jet2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Jet2 {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 {
            f: -self.f,
            fu: -self.fu,
            fv: -self.fv,
            fuu: -self.fuu,
            fuv: -self.fuv,
            fvv: -self.fvv,
        }
    }
}

impl Mul for Jet2 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Jet2 {
            f: self.f * o.f,
            fu: self.fu * o.f + self.f * o.fu,
            fv: self.fv * o.f + self.f * o.fv,
            fuu: self.fuu * o.f + 2.0 * self.fu * o.fu + self.f * o.fuu,
            fuv: self.fuv * o.f + self.fu * o.fv + self.fv * o.fu + self.f * o.fuv,
            fvv: self.fvv * o.f + 2.0 * self.fv * o.fv + self.f * o.fvv,
        }
    }
}

impl Div for Jet2 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for Jet2 {
    fn cst(c: f64) -> Self {
        Jet2 { f: c, ..Default::default() }
    }
    fn scale(self, c: f64) -> Self {
        Jet2 {
            f: self.f * c,
            fu: self.fu * c,
            fv: self.fv * c,
            fuu: self.fuu * c,
            fuv: self.fuv * c,
            fvv: self.fvv * c,
        }
    }
    fn val(self) -> f64 {
        self.f
    }
    fn sqrt(self) -> Self {
        let s = self.f.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.f))
    }
    fn exp(self) -> Self {
        let e = self.f.exp();
        self.chain(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = self.f.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.f.sin_cos();
        self.chain(c, -s, -c)
    }
}

/// Order-2 jet in three variables.
///
/// `grad` holds the gradient; `hess` the Hessian entries in the order
/// `(11, 12, 13, 22, 23, 33)`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Jet3 {
    pub f: f64,
    pub grad: [f64; 3],
    pub hess: [f64; 6],
}

/// Index of Hessian entry `(i, j)` (`i <= j`) in [`Jet3::hess`].
pub const fn hess_idx(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    match (i, j) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

const HPAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];

impl Jet3 {
    /// Coordinate `i` (0-based) as a jet at value `x`.
    pub fn var(i: usize, x: f64) -> Self {
        let mut grad = [0.0; 3];
        grad[i] = 1.0;
        Jet3 { f: x, grad, hess: [0.0; 6] }
    }

    /// Composes with a univariate function given by its value and first two
    /// derivatives at `self.f`.
    pub fn chain(self, f0: f64, f1: f64, f2: f64) -> Self {
        let mut hess = [0.0; 6];
        for (k, &(i, j)) in HPAIRS.iter().enumerate() {
            hess[k] = f2 * self.grad[i] * self.grad[j] + f1 * self.hess[k];
        }
        Jet3 {
            f: f0,
            grad: [f1 * self.grad[0], f1 * self.grad[1], f1 * self.grad[2]],
            hess,
        }
    }

    pub fn recip(self) -> Self {
        let x = self.f;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }
}

impl Add for Jet3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut r = self;
        r.f += o.f;
        for i in 0..3 {
            r.grad[i] += o.grad[i];
        }
        for k in 0..6 {
            r.hess[k] += o.hess[k];
        }
        r
    }
}

impl Sub for Jet3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for Jet3 {
    type Output = Self;
    fn neg(self) -> Self {
        let mut r = self;
        r.f = -r.f;
        for i in 0..3 {
            r.grad[i] = -r.grad[i];
        }
        for k in 0..6 {
            r.hess[k] = -r.hess[k];
        }
        r
    }
}

impl Mul for Jet3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut hess = [0.0; 6];
        for (k, &(i, j)) in HPAIRS.iter().enumerate() {
            hess[k] = self.hess[k] * o.f
                + self.grad[i] * o.grad[j]
                + self.grad[j] * o.grad[i]
                + self.f * o.hess[k];
        }
        Jet3 {
            f: self.f * o.f,
            grad: [
                self.grad[0] * o.f + self.f * o.grad[0],
                self.grad[1] * o.f + self.f * o.grad[1],
                self.grad[2] * o.f + self.f * o.grad[2],
            ],
            hess,
        }
    }
}

impl Div for Jet3 {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        self * o.recip()
    }
}

impl Scalar for Jet3 {
    fn cst(c: f64) -> Self {
        Jet3 { f: c, ..Default::default() }
    }
    fn scale(self, c: f64) -> Self {
        let mut r = self;
        r.f *= c;
        for i in 0..3 {
            r.grad[i] *= c;
        }
        for k in 0..6 {
            r.hess[k] *= c;
        }
        r
    }
    fn val(self) -> f64 {
        self.f
    }
    fn sqrt(self) -> Self {
        let s = self.f.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.f))
    }
    fn exp(self) -> Self {
        let e = self.f.exp();
        self.chain(e, e, e)
    }
    fn sin(self) -> Self {
        let (s, c) = self.f.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.f.sin_cos();
        self.chain(c, -s, -c)
    }
}
