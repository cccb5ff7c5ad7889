//! Exact L-functions of unit F-crystals on open subsets of the torus G_m^d
//! over F_p.
//!
//! Two independent pipelines compute the same L-series modulo (p^N, T^{B+1}):
//!
//! * [`euler`] multiplies local factors over Teichmüller-lifted closed
//!   points;
//! * [`dwork`] builds the matrix of the Cartier-twisted Frobenius on
//!   top-degree differentials and takes a division-free characteristic
//!   polynomial.
//!
//! [`verify`] compares them and checks the unit-root ratio against the
//! maximal ideal of the coefficient ring.

#![allow(clippy::needless_range_loop)]

pub mod cache;
pub mod config;
pub mod crystal;
pub mod dwork;
pub mod error;
pub mod euler;
pub mod laurent;
pub mod linalg;
pub mod ring;
pub mod series;
pub mod verify;

pub use error::{Error, Result};
pub use ring::{FlatLift, RingDescriptor, RingElement, RingKind};
