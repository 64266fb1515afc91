//! The continuous operator by tensor quadrature.
//!
//! Q(f,f)(v) = 4 * int_{R^2} <g_v(w, .)> dw, where <.> is the mean over
//! theta in [-pi, pi). This is the limit of the lattice sum, whose inner
//! average (1/r) sum_{zeta'} tends to the angular mean.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::density::VelocityDensity;
use super::geometry::{post_collision, Vec2};
use super::kernel::KernelSpec;
use crate::error::{invalid, Error, Result};
use crate::sum::CompensatedSum;

/// One sample of the collision integrand.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GValue {
    pub w: Vec2,
    pub theta: f64,
    pub value: f64,
}

/// g_v(w, theta) = (f(v')f(v*') - f(v)f(v*)) q(|w|, theta).
pub fn g_eval(
    f: &dyn VelocityDensity,
    v: Vec2,
    w: Vec2,
    theta: f64,
    kernel: &KernelSpec,
) -> GValue {
    GValue {
        w,
        theta,
        value: g_parts(f, v, w, theta, kernel).0,
    }
}

/// (g, |gain| + |loss|) at one point.
fn g_parts(
    f: &dyn VelocityDensity,
    v: Vec2,
    w: Vec2,
    theta: f64,
    kernel: &KernelSpec,
) -> (f64, f64) {
    let c = post_collision(v, w, theta);
    let q = kernel.eval(w.norm(), theta);
    let gain = f.eval(c.v_prime) * f.eval(c.v_star_prime);
    let loss = f.eval(c.v) * f.eval(c.v_star);
    ((gain - loss) * q, (gain.abs() + loss.abs()) * q.abs())
}

/// Trapezoid mean of g_v(w, .) over n_theta equispaced angles, and the same
/// mean of |gain| + |loss|.
pub fn angular_mean(
    f: &dyn VelocityDensity,
    v: Vec2,
    w: Vec2,
    kernel: &KernelSpec,
    n_theta: usize,
) -> (f64, f64) {
    let mut g = CompensatedSum::default();
    let mut mag = CompensatedSum::default();
    for j in 0..n_theta {
        let theta = -PI + 2.0 * PI * j as f64 / n_theta as f64;
        let (a, b) = g_parts(f, v, w, theta, kernel);
        g.add(a);
        mag.add(b);
    }
    (g.value() / n_theta as f64, mag.value() / n_theta as f64)
}

/// Resolution schedule for [`q_reference`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Radius of the w-disk; defaults to extent(f) + |v|.
    pub r_quad: Option<f64>,
    /// Midpoint cells per side of the bounding square at the first level.
    pub n_w: usize,
    /// Angles at the first level.
    pub n_theta: usize,
    /// Stop when successive levels differ by at most rel_tol times the
    /// integral of |gain| + |loss|.
    pub rel_tol: f64,
    pub max_levels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            r_quad: None,
            n_w: 64,
            n_theta: 32,
            rel_tol: 1e-10,
            max_levels: 5,
        }
    }
}

/// A converged reference value and its self-convergence record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceValue {
    pub value: f64,
    /// |value - value at the previous level|.
    pub change: f64,
    /// 4 * int <|gain| + |loss|> dw, the magnitude the tolerance refers to.
    pub scale: f64,
    pub r_quad: f64,
    pub n_w: usize,
    pub n_theta: usize,
    pub levels: usize,
}

fn disk_quadrature(
    f: &dyn VelocityDensity,
    v: Vec2,
    kernel: &KernelSpec,
    r_quad: f64,
    n_w: usize,
    n_theta: usize,
) -> (f64, f64) {
    let dw = 2.0 * r_quad / n_w as f64;
    let rows: Vec<(CompensatedSum, CompensatedSum)> = (0..n_w)
        .into_par_iter()
        .map(|i| {
            let wy = -r_quad + (i as f64 + 0.5) * dw;
            let mut g = CompensatedSum::default();
            let mut mag = CompensatedSum::default();
            for j in 0..n_w {
                let w = Vec2::new(-r_quad + (j as f64 + 0.5) * dw, wy);
                if w.norm_sq() > r_quad * r_quad {
                    continue;
                }
                let (a, b) = angular_mean(f, v, w, kernel, n_theta);
                g.add(a);
                mag.add(b);
            }
            (g, mag)
        })
        .collect();
    let mut g = CompensatedSum::default();
    let mut mag = CompensatedSum::default();
    for (a, b) in rows {
        g.merge(a);
        mag.merge(b);
    }
    let cell = 4.0 * dw * dw;
    (cell * g.value(), cell * mag.value())
}

/// Q(f,f)(v) with the self-convergence record.
pub fn q_reference_detailed(
    f: &dyn VelocityDensity,
    v: Vec2,
    kernel: &KernelSpec,
    quad: &QuadratureConfig,
) -> Result<ReferenceValue> {
    kernel.validate()?;
    let r_quad = quad.r_quad.unwrap_or_else(|| f.extent() + v.norm());
    if !(r_quad.is_finite() && r_quad >= 0.0) {
        return invalid(format!(
            "quadrature radius must be nonnegative, got {r_quad}"
        ));
    }
    if quad.n_w == 0 || quad.n_theta == 0 || quad.max_levels < 2 {
        return invalid("quadrature needs n_w, n_theta >= 1 and at least two levels");
    }
    if r_quad == 0.0 {
        // zero density at v = 0: empty domain
        return Ok(ReferenceValue {
            value: 0.0,
            change: 0.0,
            scale: 0.0,
            r_quad,
            n_w: quad.n_w,
            n_theta: quad.n_theta,
            levels: 1,
        });
    }
    let (mut n_w, mut n_theta) = (quad.n_w, quad.n_theta);
    let (mut prev, _) = disk_quadrature(f, v, kernel, r_quad, n_w, n_theta);
    let mut change = f64::INFINITY;
    for level in 2..=quad.max_levels {
        n_w *= 2;
        n_theta *= 2;
        let (value, scale) = disk_quadrature(f, v, kernel, r_quad, n_w, n_theta);
        change = (value - prev).abs();
        if change <= quad.rel_tol * scale || scale == 0.0 {
            return Ok(ReferenceValue {
                value,
                change,
                scale,
                r_quad,
                n_w,
                n_theta,
                levels: level,
            });
        }
        prev = value;
    }
    Err(Error::QuadratureNotConverged {
        change,
        tolerance: quad.rel_tol,
        levels: quad.max_levels,
    })
}

/// Q(f,f)(v) by trapezoid-in-theta, midpoint-in-w quadrature, refined by
/// doubling until self-converged.
pub fn q_reference(
    f: &dyn VelocityDensity,
    v: Vec2,
    kernel: &KernelSpec,
    quad: &QuadratureConfig,
) -> Result<f64> {
    q_reference_detailed(f, v, kernel, quad).map(|r| r.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collision::density::{Maxwellian, MaxwellianMixture};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    struct Constant(f64);

    impl VelocityDensity for Constant {
        fn eval(&self, v: Vec2) -> f64 {
            if v.norm() <= 50.0 {
                self.0
            } else {
                0.0
            }
        }
        fn extent(&self) -> f64 {
            50.0
        }
    }

    #[test]
    fn g_vanishes_for_maxwellian_and_constants() {
        let m = Maxwellian::new(2.0, Vec2::new(0.5, -1.0), 0.7);
        let kernel = KernelSpec::product_power(0.5, vec![1.0, 0.2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let v = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let w = Vec2::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let theta = rng.gen_range(-PI..PI);
            let peak = m.eval(m.bulk_velocity).powi(2);
            assert!(g_eval(&m, v, w, theta, &kernel).value.abs() <= 1e-14 * peak);
            assert_eq!(g_eval(&Constant(3.0), v, w, theta, &kernel).value, 0.0);
        }
    }

    #[test]
    fn g_for_mixture_by_hand() {
        let f = MaxwellianMixture::bi_maxwellian();
        let (v, w) = (Vec2::ZERO, Vec2::new(1.0, 0.0));
        let g = g_eval(&f, v, w, PI / 2.0, &KernelSpec::Maxwell);
        // v' = (1, 1), v*' = (1, -1), v* = (2, 0)
        let e = |x: f64, y: f64| f.eval(Vec2::new(x, y));
        let expected = e(1.0, 1.0) * e(1.0, -1.0) - e(0.0, 0.0) * e(2.0, 0.0);
        assert!((g.value - expected).abs() < 1e-16);
        assert_eq!(g.theta, PI / 2.0);
    }

    #[test]
    fn maxwellian_reference_is_zero() {
        let m = Maxwellian::new(1.0, Vec2::new(0.2, 0.1), 1.0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let quad = QuadratureConfig {
            n_w: 32,
            n_theta: 16,
            ..Default::default()
        };
        for _ in 0..20 {
            let v = Vec2::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
            let q = q_reference(&m, v, &KernelSpec::Maxwell, &quad).unwrap();
            assert!(q.abs() <= 1e-8, "{q}");
        }
    }

    #[test]
    fn bimaxwellian_self_check() {
        let f = MaxwellianMixture::bi_maxwellian();
        let v = Vec2::new(0.5, 0.25);
        let quad = QuadratureConfig::default();
        let r = q_reference_detailed(&f, v, &KernelSpec::Maxwell, &quad).unwrap();
        // one more doubling beyond the accepted level
        let fine = QuadratureConfig {
            n_w: r.n_w,
            n_theta: r.n_theta,
            max_levels: 2,
            rel_tol: 1.0,
            ..quad
        };
        let r2 = q_reference_detailed(&f, v, &KernelSpec::Maxwell, &fine).unwrap();
        assert!(r.value.abs() > 1e-3 * r.scale, "{r:?}");
        assert!(
            (r.value - r2.value).abs() <= 1e-6 * r.value.abs(),
            "{} vs {}",
            r.value,
            r2.value
        );
    }

    #[test]
    fn symmetric_beams_balance_at_the_origin() {
        // at v = 0 the angular mean of the cross gain equals the direction
        // mean of the cross loss, for any q2
        let f = MaxwellianMixture::bi_maxwellian();
        let angular = KernelSpec::product_power(0.0, vec![1.0, 0.5]).unwrap();
        for kernel in [KernelSpec::Maxwell, angular] {
            let r = q_reference_detailed(&f, Vec2::ZERO, &kernel, &QuadratureConfig::default())
                .unwrap();
            assert!(r.value.abs() <= 1e-12 * r.scale, "{r:?}");
        }
    }

    #[test]
    fn radial_non_equilibrium_sign_is_stable() {
        let f = MaxwellianMixture::two_temperature();
        let coarse = QuadratureConfig {
            n_w: 32,
            n_theta: 16,
            max_levels: 2,
            rel_tol: 1.0,
            ..Default::default()
        };
        let a = q_reference(&f, Vec2::ZERO, &KernelSpec::Maxwell, &coarse).unwrap();
        let b = q_reference(
            &f,
            Vec2::ZERO,
            &KernelSpec::Maxwell,
            &QuadratureConfig::default(),
        )
        .unwrap();
        assert!(a != 0.0 && a.signum() == b.signum(), "{a} {b}");
    }

    #[test]
    fn reports_non_convergence() {
        let f = MaxwellianMixture::bi_maxwellian();
        let quad = QuadratureConfig {
            n_w: 4,
            n_theta: 3,
            rel_tol: 1e-15,
            max_levels: 2,
            ..Default::default()
        };
        assert!(matches!(
            q_reference(&f, Vec2::ZERO, &KernelSpec::Maxwell, &quad),
            Err(Error::QuadratureNotConverged { .. })
        ));
    }
}
