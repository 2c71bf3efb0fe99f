//! Closed-form objects of the coordinate Bethe ansatz for the δ-Bose gas on
//! the infinite line, together with independent brute-force evaluators.
//!
//! The crate is organised bottom-up:
//!
//! * [`kernels`]: the rational kernels `f, g, h, t`, set products, shifted
//!   sets, permutations and normal-ordered bipartitions.
//! * [`detlib`]: dense complex determinants, the Cauchy and Izergin-Korepin
//!   determinants, and the Slavnov-form determinant for the matrix elements of
//!   the particle number operator (MEPNO).
//! * [`wavefunction`]: Bethe wavefunctions and the cusp condition.
//! * [`oracles`]: permutation and partition sums (Gaudin's lemma, the
//!   two-set partition lemma, MEPNO routes A/B/C) and a damped
//!   position-space integration oracle.
//! * [`quad`]: adaptive Gauss-Kronrod quadrature and rational extrapolation
//!   used by the integration oracle.
//!
//! Everything is `no_std` + `alloc`; IO, sampling and the CLI live in the
//! `bethe-harness` crate.
#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod detlib;
mod error;
pub mod kernels;
pub mod mepno;
pub mod oracles;
pub mod quad;
pub mod wavefunction;
mod xprec;

pub use error::{Error, Result};
pub use mepno::{MepnoInputs, MepnoValue, Route};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Relative difference `|a - b| / max(|a|, |b|, 1e-300)`.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let denom = a.norm().max(b.norm()).max(1e-300);
    (a - b).norm() / denom
}
