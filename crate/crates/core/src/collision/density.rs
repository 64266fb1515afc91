//! Closed-form velocity densities used as smooth test functions.

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use super::geometry::Vec2;

/// A velocity distribution that can be evaluated anywhere in the plane.
pub trait VelocityDensity: Sync {
    fn eval(&self, v: Vec2) -> f64;

    /// Mean of the density over the square cell of side `h` centred at `center`.
    fn cell_average(&self, center: Vec2, h: f64) -> f64 {
        let _ = h;
        self.eval(center)
    }

    /// Radius beyond which the density is below 1e-40 of its peak.
    fn extent(&self) -> f64;
}

/// rho * exp(-|v - u|^2 / (2T)) / (2 pi T).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Maxwellian {
    pub density: f64,
    pub bulk_velocity: Vec2,
    pub temperature: f64,
}

impl Maxwellian {
    pub fn new(density: f64, bulk_velocity: Vec2, temperature: f64) -> Self {
        Self {
            density,
            bulk_velocity,
            temperature,
        }
    }

    /// Unit density, zero drift, unit temperature.
    pub fn standard() -> Self {
        Self::new(1.0, Vec2::ZERO, 1.0)
    }
}

/// Mean of exp(-(x)^2 / (2T)) over [a, b], divided by sqrt(2 pi T) so that it
/// integrates like the normalised 1D Gaussian.
fn gaussian_interval_mean(a: f64, b: f64, t: f64) -> f64 {
    let s = SQRT_2 * t.sqrt();
    let (za, zb) = (a / s, b / s);
    // erfc keeps relative accuracy in the tails
    let mass = if za >= 0.0 {
        0.5 * (libm::erfc(za) - libm::erfc(zb))
    } else if zb <= 0.0 {
        0.5 * (libm::erfc(-zb) - libm::erfc(-za))
    } else {
        0.5 * (libm::erf(zb) - libm::erf(za))
    };
    mass / (b - a)
}

impl VelocityDensity for Maxwellian {
    fn eval(&self, v: Vec2) -> f64 {
        let d = v - self.bulk_velocity;
        self.density * (-d.norm_sq() / (2.0 * self.temperature)).exp()
            / (2.0 * PI * self.temperature)
    }

    fn cell_average(&self, center: Vec2, h: f64) -> f64 {
        let d = center - self.bulk_velocity;
        let half = 0.5 * h;
        self.density
            * gaussian_interval_mean(d.x - half, d.x + half, self.temperature)
            * gaussian_interval_mean(d.y - half, d.y + half, self.temperature)
    }

    fn extent(&self) -> f64 {
        self.bulk_velocity.norm() + (2.0 * self.temperature * 40.0 * std::f64::consts::LN_10).sqrt()
    }
}

/// A finite sum of Maxwellians. Two components give the usual bi-Maxwellian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxwellianMixture {
    pub components: Vec<Maxwellian>,
}

impl MaxwellianMixture {
    pub fn new(components: Vec<Maxwellian>) -> Self {
        Self { components }
    }

    /// The zero distribution.
    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    /// Two half-density beams at (+-1, 0), temperature 1/2.
    pub fn bi_maxwellian() -> Self {
        Self::new(vec![
            Maxwellian::new(0.5, Vec2::new(1.0, 0.0), 0.5),
            Maxwellian::new(0.5, Vec2::new(-1.0, 0.0), 0.5),
        ])
    }

    /// Centred, isotropic, but not Maxwellian: a cold and a hot component.
    pub fn two_temperature() -> Self {
        Self::new(vec![
            Maxwellian::new(0.5, Vec2::ZERO, 0.5),
            Maxwellian::new(0.5, Vec2::ZERO, 2.0),
        ])
    }
}

impl VelocityDensity for MaxwellianMixture {
    fn eval(&self, v: Vec2) -> f64 {
        self.components.iter().map(|m| m.eval(v)).sum()
    }

    fn cell_average(&self, center: Vec2, h: f64) -> f64 {
        self.components
            .iter()
            .map(|m| m.cell_average(center, h))
            .sum()
    }

    fn extent(&self) -> f64 {
        self.components
            .iter()
            .map(|m| m.extent())
            .fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn maxwellian_peak_and_symmetry() {
        let m = Maxwellian::standard();
        assert!((m.eval(Vec2::ZERO) - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(m.eval(Vec2::new(1.0, 2.0)), m.eval(Vec2::new(-2.0, 1.0)));
    }

    #[test]
    fn cell_average_against_midpoint_rule() {
        let m = Maxwellian::new(1.3, Vec2::new(0.4, -0.2), 0.7);
        let h = 0.3;
        for c in [
            Vec2::new(0.1, 0.2),
            Vec2::new(3.0, -2.5),
            Vec2::new(-1.0, 0.9),
        ] {
            let n = 400;
            let mut acc = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let dx = -0.5 * h + h * (i as f64 + 0.5) / n as f64;
                    let dy = -0.5 * h + h * (j as f64 + 0.5) / n as f64;
                    acc += m.eval(c + Vec2::new(dx, dy));
                }
            }
            let midpoint = acc / (n * n) as f64;
            let exact = m.cell_average(c, h);
            // midpoint error is O((h/n)^2); pointwise sampling would be off by O(h^2)
            assert!(
                (exact - midpoint).abs() < 1e-5 * exact,
                "{exact} vs {midpoint}"
            );
            assert!((exact - m.eval(c)).abs() > 1e-4 * exact);
        }
    }

    #[test]
    fn tail_cells_keep_relative_accuracy() {
        let m = Maxwellian::standard();
        let far = m.cell_average(Vec2::new(9.0, 0.0), 0.1);
        let pointwise = m.eval(Vec2::new(9.0, 0.0));
        assert!(far > 0.0);
        assert!((far / pointwise - 1.0).abs() < 0.05);
    }

    #[test]
    fn extent_bounds_the_tail() {
        let m = MaxwellianMixture::bi_maxwellian();
        let r = m.extent();
        let peak = m.eval(Vec2::new(1.0, 0.0));
        assert!(m.eval(Vec2::new(r, 0.0)) < 1e-40 * peak);
    }
}
