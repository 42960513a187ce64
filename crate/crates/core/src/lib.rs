//! Orthogonal polynomial systems, reproducing kernels, spectral differential
//! operators, and Fourier orthogonal expansions on fully symmetric curved
//! planar domains and their domains of revolution in three dimensions.
//!
//! Everything reduces, through quadratic bijections, to classical structures
//! on the unit disk and unit ball: bases pull back, kernels pull back, and
//! the spectral operators satisfy exact pullback identities that this crate
//! uses as the authoritative evaluation path.

pub mod approx;
pub mod curved2d;
pub mod disk;
pub mod error;
pub mod fullsym;
pub mod jet;
pub mod orthopoly;
pub mod quad;
pub mod revolution;
pub mod scalar;
pub mod triangle;

pub use error::{Error, Result};
