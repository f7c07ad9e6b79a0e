//! Numerical workbench for the singular (Calogero-Sutherland) oscillator
//! `h0 = -d²/dx² + x²/4 + b/x²` on the half-line.
//!
//! The crate builds, verifies and exports:
//!
//! * the discrete spectrum and eigenfunctions of `h0` together with the
//!   su(1,1) ladder structure ([`oscillator`]),
//! * su(1,1) coherent states, their resolution of unity on the unit disc
//!   and the holomorphic representation ([`coherent`]),
//! * Darboux-generated supersymmetric partner Hamiltonians in the exact
//!   and spontaneously broken regimes ([`darboux`]),
//! * exact arithmetic in the four-dimensional Grassmann algebra with
//!   Berezin integration ([`grassmann`]),
//! * the super Hilbert space, superalgebra generators, supercoherent
//!   states and the super resolution of identity ([`superspace`]).
//!
//! Every construction ships with an independent numerical cross-check;
//! [`verify`] bundles them into named suites consumed by the CLI.

pub mod coherent;
pub mod darboux;
pub mod error;
pub mod export;
pub mod grassmann;
pub mod oscillator;
pub mod quadrature;
pub mod special;
pub mod superspace;
pub mod verify;

pub use error::{Error, Result};
