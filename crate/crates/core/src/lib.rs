//! Bound-state spectra of N attractive point δ-interactions on flat and
//! hyperbolic 2D/3D manifolds, plus a relativistic 2D extension.
//!
//! The library builds the principal matrix Φ of Krein's resolvent formula
//! for each supported geometry, follows its monotone eigenvalue branches to
//! solve det Φ = 0, and evaluates every explicit sufficient criterion for
//! the maximal bound-state count.

pub mod error;
pub mod specfun;
pub mod matrix;
pub mod geometry;
pub mod principal;
pub mod spectrum;
pub mod criteria;

pub use error::{Error, Result};
