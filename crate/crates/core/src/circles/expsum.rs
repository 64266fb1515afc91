use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::points::{circle_points, r2_from};
use crate::numtheory::{gaussian_factorize, GaussianFactorization, Splitting};

/// S(n, k) = sum over points u with |u|^2 = n of exp(i k theta_u).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpSumValue {
    pub n: u64,
    pub k: i64,
    pub value: Complex64,
}

/// How the angle of a lattice point is measured.
///
/// The two conventions differ by theta -> pi/2 - theta, so |S(n, k)| is the
/// same under both.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleConvention {
    /// theta = atan2(y, x).
    #[default]
    Atan2,
    /// u = |u| (sin theta, cos theta), i.e. theta = atan2(x, y).
    SinCos,
}

/// S(n, k) by summing over the enumerated circle points.
pub fn exp_sum_direct(n: u64, k: i64) -> ExpSumValue {
    exp_sum_direct_with(n, k, AngleConvention::Atan2)
}

pub fn exp_sum_direct_with(n: u64, k: i64, convention: AngleConvention) -> ExpSumValue {
    let circle = circle_points(n);
    let kf = k as f64;
    let value = circle
        .points
        .iter()
        .map(|&(x, y)| {
            let theta = match convention {
                AngleConvention::Atan2 => (y as f64).atan2(x as f64),
                AngleConvention::SinCos => (x as f64).atan2(y as f64),
            };
            Complex64::from_polar(1.0, kf * theta)
        })
        .sum();
    ExpSumValue { n, k, value }
}

/// |sum_{j=0}^{alpha} exp(i k (alpha - 2j) theta)|, the per-prime factor of |S|/4.
pub(crate) fn prime_power_factor(alpha: u32, k: i64, theta: f64) -> f64 {
    // the sum is real: terms pair up as conjugates
    let kt = k as f64 * theta;
    (0..=alpha)
        .map(|j| ((alpha as i64 - 2 * j as i64) as f64 * kt).cos())
        .sum::<f64>()
        .abs()
}

/// |S(n, k)| from the Gaussian factorization of n.
///
/// Zero when 4 does not divide k or n is not a sum of two squares; otherwise
/// 4 * prod_p |sum_j exp(i k (alpha_p - 2j) theta_p)|.
pub fn exp_sum_closed(n: u64, k: i64) -> f64 {
    exp_sum_closed_from(&gaussian_factorize(n), k)
}

pub(crate) fn exp_sum_closed_from(g: &GaussianFactorization, k: i64) -> f64 {
    if k % 4 != 0 || r2_from(g) == 0 {
        return 0.0;
    }
    4.0 * g
        .splittings
        .iter()
        .map(|s: &Splitting| prime_power_factor(s.alpha, k, s.theta))
        .product::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circles::r2;

    #[test]
    fn zero_frequency_counts_points() {
        let s = exp_sum_direct(5, 0);
        assert!((s.value - Complex64::new(8.0, 0.0)).norm() < 1e-12);
        assert_eq!(exp_sum_closed(5, 0), 8.0);
    }

    #[test]
    fn circle_of_two_at_k4() {
        let s = exp_sum_direct(2, 4);
        assert!((s.value - Complex64::new(-4.0, 0.0)).norm() < 1e-12);
        assert!((exp_sum_closed(2, 4) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn circle_of_five_at_k4() {
        // brute force over the 8 points of x^2 + y^2 = 5
        let pts = [
            (1, 2),
            (2, 1),
            (-1, 2),
            (-2, 1),
            (1, -2),
            (2, -1),
            (-1, -2),
            (-2, -1),
        ];
        let brute: Complex64 = pts
            .iter()
            .map(|&(x, y): &(i32, i32)| {
                Complex64::from_polar(1.0, 4.0 * (y as f64).atan2(x as f64))
            })
            .sum();
        assert!((brute.norm() - 56.0 / 25.0).abs() < 1e-12);
        assert!((exp_sum_direct(5, 4).value.norm() - 56.0 / 25.0).abs() < 1e-12);
        assert!((exp_sum_closed(5, 4) - 56.0 / 25.0).abs() < 1e-12);
    }

    #[test]
    fn twenty_five_at_k4() {
        let t = 0.5f64.atan();
        let expected = 4.0 * (1.0 + 2.0 * (8.0 * t).cos()).abs();
        assert!((exp_sum_closed(25, 4) - expected).abs() < 1e-12);
        assert!((exp_sum_direct(25, 4).value.norm() - expected).abs() < 1e-12);
    }

    #[test]
    fn powers_of_two() {
        for t in 0..=10 {
            let n = 1u64 << t;
            assert!((exp_sum_closed(n, 4) - 4.0).abs() < 1e-12);
            assert!((exp_sum_direct(n, 4).value.norm() - 4.0).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishes_off_multiples_of_four() {
        for n in [1u64, 2, 5, 25, 65, 1105] {
            for k in [1, 2, 3, 5, 6, 7, -2] {
                assert_eq!(exp_sum_closed(n, k), 0.0);
                assert!(exp_sum_direct(n, k).value.norm() <= 1e-9 * r2(n) as f64);
            }
        }
    }
}
