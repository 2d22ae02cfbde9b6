//! Composition operators `C_phi f = f ∘ phi` on the noncommutative Hardy
//! space of the unit ball, realized on degree-truncated full Fock spaces.
//!
//! The crate is organized bottom-up:
//!
//! - [`words`]: the free semigroup, its graded total order and O(1) indexing.
//! - [`series`]: truncated noncommutative power series, symbols, composition.
//! - [`fock`]: Fock vectors, kernel vectors `z_mu`, grading projections and
//!   truncated creation operators.
//! - [`moebius`]: the involutive free automorphisms `Phi_lambda` and the
//!   unitary maps `Phi_U`.
//! - [`compop`]: composition-operator matrices, adjoints, norms and
//!   compactness diagnostics.
//! - [`spectra`]: iterates, spectral radius, Schröder data and spectra.
//! - [`dynamics`]: fixed points, Denjoy–Wolff points, dilatation and
//!   classification of scalar self-maps of the ball.
//! - [`drury`]: the symmetric Fock space and the Drury–Arveson reduction.
//! - [`cli`]: the `fockc` command-line front end.

pub mod cli;
pub mod compop;
pub mod drury;
pub mod dynamics;
pub mod error;
pub mod fock;
pub mod formats;
pub mod linalg;
pub mod moebius;
pub mod sampling;
pub mod selftest;
pub mod series;
pub mod spectra;
pub mod words;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use fock::FockVector;
pub use series::{NcSeries, RationalSeries, SymbolTuple};
pub use words::{GradedEnumeration, Word};

/// Euclidean norm of a point of `C^n`.
pub fn point_norm(p: &[C64]) -> f64 {
    p.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

/// `<x, y> = sum x_i conj(y_i)`.
pub fn point_inner(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}
