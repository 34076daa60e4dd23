//! Weight distributions of cosets of binary linear codes.
//!
//! The crate builds codes whose duals have a prescribed bilateral minimum
//! distance, computes exact weight spectra of codes and cosets, and checks the
//! mean-square, L∞ and L1 bounds relating coset spectra to the binomial law.

pub mod approximation;
pub mod codes;
pub mod error;
pub mod experiments;
pub mod fourier;
pub mod gf2;
pub mod macwilliams;
pub mod rng;
pub mod spectra;

pub use codes::CodeFamily;
pub use error::{Error, Result};
pub use gf2::{BitVector, LinearCode, DEFAULT_ENUMERATION_BUDGET};
pub use macwilliams::{BilateralProfile, WeightEnumerator};
pub use spectra::{Metrics, WeightDistribution};
