//! Exact-arithmetic kernels for the p-adic geometry of Hilbert-type moduli
//! with real multiplication: adapted-basis semilinear modules over k[[u]] and
//! their distinguished subgroup lines, brute-force Dieudonne fibers, the
//! Hecke correspondence as a rational dynamical system on valuation data,
//! slope ledgers for the classicality criterion, and deformation windows
//! over truncated Witt-polynomial rings.
//!
//! Everything is computed in exact rational / finite-ring arithmetic; no
//! floating point appears anywhere.

pub mod bk;
pub mod continuation;
pub mod dieudonne;
pub mod error;
pub mod field;
pub mod hecke;
pub mod json;
pub mod newton;
pub mod rat;
pub mod series;
pub mod windows;
pub mod zq;

pub use error::{Error, Result};
pub use rat::Rat;
