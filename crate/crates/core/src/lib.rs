//! Exact computations for Brill-Noether loci in punctual Hilbert schemes of
//! points on a surface.
//!
//! The crate works in the local model `A = k[[x,y]]` over a prime field or
//! the rationals:
//!
//! * [`hstype`]: Hilbert-Samuel types, jumping indices, normal patterns;
//! * [`localring`]: colength, type and minimal generator count of explicit
//!   ideals;
//! * [`iarrobino`]: the affine chart of a stratum parametrized by deformations
//!   of the relation matrix;
//! * [`degloci`]: degeneracy loci of block upper-triangular matrices, with an
//!   exhaustive census over small finite fields;
//! * [`bn`]: Brill-Noether dimension calculators on strata, locally and
//!   globally, plus the nested recursion and the Veronese criterion;
//! * [`suites`]: the invariant sweeps behind `bnloci verify`.

pub mod bn;
pub mod cli;
pub mod degloci;
pub mod error;
pub mod exactalg;
pub mod hstype;
pub mod iarrobino;
pub mod localring;
pub mod refs;
pub mod suites;

pub use error::{Error, Result};
