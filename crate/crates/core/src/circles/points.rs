use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::numtheory::{gaussian_factorize, Gaussian, GaussianFactorization, ResidueClass};

/// All integer points on x^2 + y^2 = n, sorted by angle in [-pi, pi).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirclePointSet {
    pub n: u64,
    pub points: Vec<(i64, i64)>,
    /// atan2(y, x) for each point, with the negative x-axis reported as -pi.
    pub angles: Vec<f64>,
}

impl CirclePointSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Number of integer solutions of x^2 + y^2 = n, from the prime factorization:
/// 0 if a prime 3 mod 4 divides n to an odd power, else 4 * prod (alpha_p + 1)
/// over p = 1 mod 4.
pub fn r2(n: u64) -> u64 {
    assert!(n >= 1, "r2 requires n >= 1");
    r2_from(&gaussian_factorize(n))
}

pub(crate) fn r2_from(g: &GaussianFactorization) -> u64 {
    if g.has_odd_inert_power() {
        return 0;
    }
    4 * g
        .factors
        .iter()
        .filter(|f| f.residue_class == ResidueClass::OneMod4)
        .map(|f| f.alpha as u64 + 1)
        .product::<u64>()
}

/// Angle of (x, y) in [-pi, pi).
pub fn lattice_angle(x: i64, y: i64) -> f64 {
    let t = (y as f64).atan2(x as f64);
    if t >= PI {
        -PI
    } else {
        t
    }
}

/// Exact angular order on nonzero integer vectors, starting at -pi.
pub(crate) fn angular_cmp(a: (i64, i64), b: (i64, i64)) -> Ordering {
    // half 0: angles in [-pi, 0), half 1: [0, pi)
    let half = |(x, y): (i64, i64)| u8::from(y > 0 || (y == 0 && x > 0));
    half(a).cmp(&half(b)).then_with(|| {
        let cross = a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128;
        0.cmp(&cross)
    })
}

/// Enumerates every representation of n as a sum of two squares.
///
/// Each point is X + iY = unit * (1+i)^e2 * q^(beta) * prod_p (x_p + i y_p)^j (x_p - i y_p)^(alpha_p - j),
/// where q ranges over primes 3 mod 4 (with even exponent 2 beta) and j over
/// 0..=alpha_p. Coordinates come from exact Gaussian multiplication.
pub fn circle_points(n: u64) -> CirclePointSet {
    assert!(n >= 1, "circle_points requires n >= 1");
    let g = gaussian_factorize(n);
    if g.has_odd_inert_power() {
        return CirclePointSet {
            n,
            points: Vec::new(),
            angles: Vec::new(),
        };
    }

    let mut base = Gaussian::new(1, 1).pow(g.two_exponent());
    for f in &g.factors {
        if f.residue_class == ResidueClass::ThreeMod4 {
            base = base * Gaussian::new(f.p as i64, 0).pow(f.alpha / 2);
        }
    }

    let mut partial = vec![base];
    for s in &g.splittings {
        let pi = Gaussian::new(s.x, s.y);
        let choices: Vec<Gaussian> = (0..=s.alpha)
            .map(|j| pi.pow(j) * pi.conj().pow(s.alpha - j))
            .collect();
        partial = partial
            .iter()
            .flat_map(|&z| choices.iter().map(move |&c| z * c))
            .collect();
    }

    let mut points = Vec::with_capacity(4 * partial.len());
    for z in partial {
        let mut u = z;
        for _ in 0..4 {
            points.push((u.re, u.im));
            u = u * Gaussian::I;
        }
    }
    points.sort_by(|&a, &b| angular_cmp(a, b));
    debug_assert!(points.windows(2).all(|w| w[0] != w[1]));

    let angles = points.iter().map(|&(x, y)| lattice_angle(x, y)).collect();
    CirclePointSet { n, points, angles }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn r2_examples() {
        assert_eq!(r2(1), 4);
        assert_eq!(r2(3), 0);
        assert_eq!(r2(25), 12);
        assert_eq!(r2(65), 16);
        assert_eq!(r2(9), 4);
        assert_eq!(r2(243_061_325), 384);
    }

    #[test]
    fn circle_of_two() {
        let c = circle_points(2);
        assert_eq!(c.points, vec![(-1, -1), (1, -1), (1, 1), (-1, 1)]);
    }

    #[test]
    fn circle_of_twenty_five() {
        let c = circle_points(25);
        assert_eq!(c.len(), 12);
        assert!(c.points.contains(&(3, 4)));
        assert!(c.points.contains(&(5, 0)));
        assert_eq!(c.points[0], (-5, 0));
        assert_eq!(c.angles[0], -PI);
        assert!(c.angles.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn empty_circle() {
        assert!(circle_points(21).is_empty());
        assert!(circle_points(3).is_empty());
    }

    #[test]
    fn angular_order_is_exact() {
        // two nearly parallel vectors that f64 atan2 could confuse on huge circles
        let a = (3_000_000_001i64, 1);
        let b = (3_000_000_000i64, 1);
        assert_eq!(angular_cmp(a, b), Ordering::Less);
        assert_eq!(angular_cmp((-1, 0), (0, -1)), Ordering::Less);
        assert_eq!(angular_cmp((1, 0), (0, 1)), Ordering::Less);
    }
}
