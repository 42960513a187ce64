//! Scalar abstraction shared by plain `f64` evaluation and forward-mode jets.
//!
//! Polynomial recurrences, coordinate maps, and composite bases are written
//! once, generically over [`Scalar`]; evaluating them on a jet seeded at a
//! point yields the value together with exact first and second partial
//! derivatives, with no hand-written chain rule anywhere.

use core::ops::{Add, Div, Mul, Neg, Sub};

/// A value type supporting the arithmetic needed by polynomial recurrences
/// and smooth coordinate maps.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Embeds a constant.
    fn cst(c: f64) -> Self;
    /// Multiplies by a plain constant.
    fn scale(self, c: f64) -> Self;
    /// The point value (constant term of a jet).
    fn val(self) -> f64;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;

    /// Integer power by binary exponentiation (negative powers via division).
    fn powi(self, k: i32) -> Self {
        if k < 0 {
            return Self::cst(1.0) / self.powi(-k);
        }
        let mut result = Self::cst(1.0);
        let mut base = self;
        let mut e = k as u32;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base;
            }
            base = base * base;
            e >>= 1;
        }
        result
    }
}

impl Scalar for f64 {
    fn cst(c: f64) -> Self {
        c
    }
    fn scale(self, c: f64) -> Self {
        self * c
    }
    fn val(self) -> f64 {
        self
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn powi(self, k: i32) -> Self {
        f64::powi(self, k)
    }
}
