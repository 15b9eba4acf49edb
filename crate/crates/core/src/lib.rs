//! z-measures on partitions with Jack parameter θ, pairings and the Gelfand pair
//! `(S(2n), H(n))`, Whittaker kernels and the Pfaffian point process they define,
//! and the convergence of lattice correlation functions to the continuum ones.

pub mod cli;
pub mod correlations;
pub mod error;
pub mod gelfand;
pub mod kernels;
pub mod measures;
pub mod pairings;
pub mod partitions;
pub mod pfaffian;
pub mod quadrature;
mod ser;
pub mod specfun;

pub use error::{Error, Result};
