//! Gaussian integers and the splitting of rational primes in Z[i].

use std::ops::Mul;

use serde::{Deserialize, Serialize};

use super::factor::{factorize, PrimePower, ResidueClass};
use super::primality::{is_prime, pow_mod};
use crate::error::{Error, Result};

/// An element x + iy of Z[i].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gaussian {
    pub re: i64,
    pub im: i64,
}

impl Gaussian {
    pub const ONE: Gaussian = Gaussian { re: 1, im: 0 };
    pub const I: Gaussian = Gaussian { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn norm(self) -> u128 {
        (self.re as i128 * self.re as i128 + self.im as i128 * self.im as i128) as u128
    }

    pub fn pow(self, mut e: u32) -> Self {
        let mut acc = Gaussian::ONE;
        let mut base = self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        acc
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;

    fn mul(self, rhs: Gaussian) -> Gaussian {
        let (a, b) = (self.re as i128, self.im as i128);
        let (c, d) = (rhs.re as i128, rhs.im as i128);
        let re = a * c - b * d;
        let im = a * d + b * c;
        Gaussian::new(
            i64::try_from(re).expect("Gaussian product overflows i64"),
            i64::try_from(im).expect("Gaussian product overflows i64"),
        )
    }
}

/// A representation p = x^2 + y^2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoSquaresRep {
    pub x: i64,
    pub y: i64,
}

/// The splitting p = (x_p + i y_p)(x_p - i y_p) of a prime p = 1 mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Splitting {
    pub p: u64,
    pub alpha: u32,
    pub x: i64,
    pub y: i64,
    /// arg(x_p + i y_p), in (0, pi/4) since x_p > y_p > 0.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianFactorization {
    pub n: u64,
    pub factors: Vec<PrimePower>,
    pub splittings: Vec<Splitting>,
}

impl GaussianFactorization {
    /// Exponent of 2 in n.
    pub fn two_exponent(&self) -> u32 {
        self.factors
            .iter()
            .find(|f| f.residue_class == ResidueClass::Two)
            .map_or(0, |f| f.alpha)
    }

    /// True when some prime q = 3 mod 4 divides n to an odd power,
    /// in which case n is not a sum of two squares.
    pub fn has_odd_inert_power(&self) -> bool {
        self.factors
            .iter()
            .any(|f| f.residue_class == ResidueClass::ThreeMod4 && f.alpha % 2 == 1)
    }
}

/// Writes a prime p = 1 mod 4 as x^2 + y^2 with x > y > 0.
///
/// Finds t with t^2 = -1 mod p from the first quadratic non-residue, then runs
/// the Euclidean algorithm on (p, t) until the remainder drops below sqrt(p)
/// (Hermite-Serret / Cornacchia).
pub fn two_squares_prime(p: u64) -> Result<TwoSquaresRep> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::NotOneModFour(p));
    }

    let euler = (p - 1) / 2;
    let c = (2..p)
        .find(|&c| pow_mod(c, euler, p) == p - 1)
        .expect("a prime has quadratic non-residues");
    let mut t = pow_mod(c, (p - 1) / 4, p);
    if t > p / 2 {
        t = p - t;
    }

    let root = p.isqrt();
    let (mut a, mut b) = (p, t);
    while b > root {
        (a, b) = (b, a % b);
    }
    let x = b;
    let y = (p - x * x).isqrt();
    debug_assert_eq!(x as u128 * x as u128 + y as u128 * y as u128, p as u128);

    let (x, y) = (x.max(y) as i64, x.min(y) as i64);
    Ok(TwoSquaresRep { x, y })
}

/// Prime factorization of n together with the Gaussian splitting of every
/// factor p = 1 mod 4.
pub fn gaussian_factorize(n: u64) -> GaussianFactorization {
    let factors = factorize(n);
    let splittings = factors
        .iter()
        .filter(|f| f.residue_class == ResidueClass::OneMod4)
        .map(|f| {
            let rep = two_squares_prime(f.p).expect("factor is a prime 1 mod 4");
            Splitting {
                p: f.p,
                alpha: f.alpha,
                x: rep.x,
                y: rep.y,
                theta: (rep.y as f64).atan2(rep.x as f64),
            }
        })
        .collect();
    GaussianFactorization {
        n,
        factors,
        splittings,
    }
}
