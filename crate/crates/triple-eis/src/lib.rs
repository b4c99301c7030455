//! Exact computer algebra for the four-variable p-adic triple-product
//! Eisenstein family.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`] holds p-adic numbers, residue rings, cyclotomic quotients,
//!   univariate polynomials and truncated Iwasawa power series.
//! * [`siegel`] computes local Siegel series polynomials `F_{B,l}`.
//! * [`family`] assembles Fourier coefficients of the family and their
//!   classical specializations.
//! * [`archimedean`] is the symbolic calculus behind the archimedean
//!   coefficient polynomials and Gamma-factor constants.
//! * [`local`] covers local L, gamma and epsilon factors at finite primes,
//!   the modified Euler factor and the elliptic-curve toolkit.
//! * [`verify`] runs the batch verification suites.
//! * [`cli`] is the command-line front end.

#![allow(clippy::needless_range_loop)]

pub mod arith;
pub mod archimedean;
pub mod cli;
pub mod error;
pub mod family;
pub mod local;
pub mod siegel;
pub mod verify;

pub use error::{Error, Result};
