//! Discrete-velocity Boltzmann collision operator on the scaled lattice hZ^2,
//! with the lattice-point number theory needed to analyse it.
//!
//! * [`numtheory`]: primality, factorization, Gaussian-prime splitting.
//! * [`circles`]: integer points on circles, r2(n), exponential sums S(n, k)
//!   and their averaged statistics.
//! * [`collision`]: the continuous operator as a quadrature reference and the
//!   lattice operator Q^h.
//! * [`harness`]: convergence studies, error budgets, figure data, the
//!   max-point search and a space-homogeneous relaxation simulator.
//! * [`io`]: CSV and JSON formats shared with the command-line tool.

pub mod circles;
pub mod collision;
mod error;
pub mod harness;
pub mod io;
pub mod numtheory;
mod sum;

pub use error::{Error, Result};
