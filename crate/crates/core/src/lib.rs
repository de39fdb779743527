//! Skew-shift dynamics, exponential sums and their number-theoretic bounds.
//!
//! The crate is `no_std` and only needs `alloc`. Points of the torus are kept
//! as 128-bit fixed-point fractions ([`TorusScalar`]), so every map in the
//! crate that is integral on the torus (the skew-shift, its closed-form
//! iterate, polynomial phases at integer arguments, `k * alpha`) is computed
//! exactly modulo one. Floating point only enters when a phase is turned into
//! a unit complex number or compared against a real threshold.
//!
//! Modules:
//!
//! - [`diophantine`]: continued fractions, empirical Diophantine constants and
//!   the `sum min(N, 1/||k alpha||)` estimates.
//! - [`skewshift`]: the skew-shift map, its closed-form iterate and the
//!   polynomial-vector encoding of an orbit.
//! - [`expsum`]: polynomial exponential sums, the Weyl differencing
//!   right-hand side and the square-lattice shells.
//! - [`vinogradov`]: exact Vinogradov system counts, shifted counts and the
//!   divisor-type function `tau_n`.
//! - [`setgeom`]: semi-algebraic targets, epsilon balls, the Fejer majorant
//!   and orbit hit counting.
//! - [`sublinear`]: exponent arithmetic, regime checks and the hit-count
//!   scaling experiment.
//! - [`transport`]: finite-volume long-range operators with skew-shift
//!   potentials and their transport moments.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod diophantine;
mod error;
pub mod expsum;
pub mod frequency;
pub mod modular;
pub mod setgeom;
pub mod skewshift;
pub mod stats;
pub mod sublinear;
mod torus;
pub mod transport;
pub mod vinogradov;

pub use error::{Error, Result};
pub use frequency::Frequency;
pub use torus::{circle_distance, torus_norm, TorusScalar};
