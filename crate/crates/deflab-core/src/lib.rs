//! Numerical toolkit for bosonic mean-field limits on a finite-dimensional
//! one-body space.
//!
//! Everything is built on the occupation-number description of the symmetric
//! sectors `Sym^N(C^d)`. The crate provides
//!
//! - exact creation/annihilation algebra and mean-field Hamiltonians
//!   ([`symspace`]),
//! - density operators, partial traces and trace-norm geometry ([`states`]),
//! - the CKMR lower-symbol construction, Chiribella's exact reconstruction
//!   formula and the quantitative de Finetti error bound ([`qdefinetti`]),
//! - the classical Diaconis-Freedman construction on finite alphabets
//!   ([`cdefinetti`]),
//! - Hartree energies and the mean-field convergence of ground energies
//!   ([`hartree`]),
//! - Gibbs states at temperature `T = tN`, classical free energies on the
//!   one-body sphere and Berezin-Lieb inequality checks ([`gibbs`]),
//! - Fock-space localization relative to an orthogonal projector
//!   ([`localization`]),
//! - a desk-scale 2D log-gas experiment: Metropolis sampling and radial
//!   mean-field minimization ([`loggas`]).
//!
//! The crate is `no_std`-compatible (with `alloc`); file formats, CSV/JSON
//! emission and the command-line harness live in the companion `deflab-cli`
//! crate. Scalars are `f64` / `Complex<f64>` throughout and all tolerance
//! defaults are centralized in [`tol::Tolerances`].
//!
//! Slow but transparent full-tensor implementations of the same maps live in
//! [`reference`]; the fast occupation-basis paths are cross-validated against
//! them in the test suite.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod cdefinetti;
pub mod combin;
pub mod error;
pub mod gibbs;
pub mod hartree;
pub mod linalg;
pub mod localization;
pub mod loggas;
pub mod qdefinetti;
pub mod quad;
pub mod reference;
pub mod states;
pub mod symspace;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;

/// Complex double-precision scalar used everywhere in the crate.
pub type C64 = num_complex::Complex<f64>;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;
/// Dense real matrix.
pub type RMatrix = nalgebra::DMatrix<f64>;
/// Dense real column vector.
pub type RVector = nalgebra::DVector<f64>;

/// Derive an independent sub-seed from a master seed and a task tag.
///
/// Splitmix64 finalizer applied to `seed ^ rot(tag)`; used to hand each
/// parallel task / restart / chain its own deterministic RNG stream.
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    let mut z = seed ^ tag.rotate_left(17).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
