use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// A velocity in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Counter-clockwise rotation by `theta`.
    pub fn rotate(self, theta: f64) -> Vec2 {
        let (s, c) = theta.sin_cos();
        Vec2::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

/// Pre- and post-collision velocities of one binary collision.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionPair {
    pub v: Vec2,
    pub v_star: Vec2,
    pub v_prime: Vec2,
    pub v_star_prime: Vec2,
}

impl CollisionPair {
    /// (v + v*) - (v' + v*').
    pub fn momentum_defect(&self) -> Vec2 {
        (self.v + self.v_star) - (self.v_prime + self.v_star_prime)
    }

    /// |v|^2 + |v*|^2 - |v'|^2 - |v*'|^2.
    pub fn energy_defect(&self) -> f64 {
        self.v.norm_sq() + self.v_star.norm_sq()
            - self.v_prime.norm_sq()
            - self.v_star_prime.norm_sq()
    }
}

/// Collision with v* = v + 2w and post-collision velocities
/// v' = v + w + R_theta w, v*' = v + w - R_theta w.
pub fn post_collision(v: Vec2, w: Vec2, theta: f64) -> CollisionPair {
    let center = v + w;
    let rw = w.rotate(theta);
    CollisionPair {
        v,
        v_star: v + w * 2.0,
        v_prime: center + rw,
        v_star_prime: center - rw,
    }
}

/// The same collision in integer lattice coordinates: v = zeta_v, w = zeta,
/// R_theta w = zeta_prime with |zeta_prime| = |zeta|.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeCollision {
    pub v: [i64; 2],
    pub v_star: [i64; 2],
    pub v_prime: [i64; 2],
    pub v_star_prime: [i64; 2],
}

impl LatticeCollision {
    pub fn new(zeta_v: [i64; 2], zeta: [i64; 2], zeta_prime: [i64; 2]) -> Self {
        let c = [zeta_v[0] + zeta[0], zeta_v[1] + zeta[1]];
        Self {
            v: zeta_v,
            v_star: [zeta_v[0] + 2 * zeta[0], zeta_v[1] + 2 * zeta[1]],
            v_prime: [c[0] + zeta_prime[0], c[1] + zeta_prime[1]],
            v_star_prime: [c[0] - zeta_prime[0], c[1] - zeta_prime[1]],
        }
    }

    pub fn conserves_momentum(&self) -> bool {
        let sum =
            |a: [i64; 2], b: [i64; 2]| [a[0] as i128 + b[0] as i128, a[1] as i128 + b[1] as i128];
        sum(self.v, self.v_star) == sum(self.v_prime, self.v_star_prime)
    }

    pub fn conserves_energy(&self) -> bool {
        let e = |a: [i64; 2]| a[0] as i128 * a[0] as i128 + a[1] as i128 * a[1] as i128;
        e(self.v) + e(self.v_star) == e(self.v_prime) + e(self.v_star_prime)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: Vec2, b: Vec2) -> bool {
        (a - b).norm() < 1e-12
    }

    #[test]
    fn no_deflection() {
        let c = post_collision(Vec2::ZERO, Vec2::new(1.0, 0.0), 0.0);
        assert!(close(c.v_prime, Vec2::new(2.0, 0.0)));
        assert!(close(c.v_star_prime, Vec2::ZERO));
    }

    #[test]
    fn full_reflection() {
        let c = post_collision(Vec2::ZERO, Vec2::new(1.0, 0.0), PI);
        assert!(close(c.v_prime, Vec2::ZERO));
        assert!(close(c.v_star_prime, Vec2::new(2.0, 0.0)));
    }

    #[test]
    fn lattice_example() {
        let theta = 2.0f64.atan2(1.0) - 1.0f64.atan2(2.0);
        let c = post_collision(Vec2::ZERO, Vec2::new(2.0, 1.0), theta);
        assert!(close(c.v_prime, Vec2::new(3.0, 3.0)));
        assert!(close(c.v_star_prime, Vec2::new(1.0, -1.0)));

        let l = LatticeCollision::new([0, 0], [2, 1], [1, 2]);
        assert_eq!(l.v_prime, [3, 3]);
        assert_eq!(l.v_star_prime, [1, -1]);
        assert_eq!(l.v_star, [4, 2]);
        assert!(l.conserves_momentum() && l.conserves_energy());
    }

    #[test]
    fn float_identities() {
        let c = post_collision(Vec2::new(0.3, -1.2), Vec2::new(0.7, 2.5), 1.234);
        let scale = c.v.norm_sq() + c.v_star.norm_sq();
        assert!(c.momentum_defect().norm() <= 1e-12 * scale.sqrt());
        assert!(c.energy_defect().abs() <= 1e-12 * scale);
    }
}
