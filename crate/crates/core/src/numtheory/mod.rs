//! Exact integer arithmetic for 64-bit inputs: primality, factorization,
//! sums of two squares and prime splitting in the Gaussian integers.
//!
//! Everything here is a pure function of its inputs.

mod factor;
mod gaussian;
mod primality;
mod sieve;

pub use factor::{factorize, PrimePower, ResidueClass};
pub use gaussian::{
    gaussian_factorize, two_squares_prime, Gaussian, GaussianFactorization, Splitting,
    TwoSquaresRep,
};
pub use primality::is_prime;
pub use sieve::{primes_up_to, r2_range, SpfSieve};
