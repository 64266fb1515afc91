//! The lattice collision operator
//!
//! Q^h(f,f)(v) = (2h)^2 sum_{zeta in Z_{h,R}, zeta != 0} 1/r(|zeta|^2)
//!               sum_{|zeta'| = |zeta|} (f(v')f(v*') - f(v)f(v*)) q(h|zeta|, theta)
//!
//! with v = h zeta_v, v* = h(zeta_v + 2 zeta), v' = h(zeta_v + zeta + zeta'),
//! v*' = h(zeta_v + zeta - zeta') and theta the angle from zeta to zeta'.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::Vec2;
use super::kernel::KernelSpec;
use super::lattice::{index_radius_sq, to_lattice, LatticeDistribution};
use crate::circles::circle_points;
use crate::error::{invalid, Result};
use crate::sum::CompensatedSum;

const TERM_CHUNK: usize = 4096;

/// Which collisions take part.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Domain {
    /// Every collision of the formula; f vanishes outside its support.
    #[default]
    Unbounded,
    /// Only collisions whose four velocities all lie in the support of f.
    /// This is a closed discrete velocity model on the support.
    Support,
}

#[derive(Debug, Clone, Copy)]
struct Term {
    zeta: [i32; 2],
    zeta_p: [i32; 2],
    weight: f64,
}

/// Precomputed collision table for fixed (h, R, kernel).
#[derive(Debug, Clone)]
pub struct DiscreteOperator {
    h: f64,
    truncation: f64,
    radius_sq_index: i64,
    kernel: KernelSpec,
    terms: Vec<Term>,
}

impl DiscreteOperator {
    /// Tabulates the pairs (zeta, zeta') for 0 < |zeta| <= R/h, enumerating each
    /// circle with [`circle_points`].
    pub fn new(h: f64, truncation: f64, kernel: &KernelSpec) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return invalid(format!("lattice step must be positive, got {h}"));
        }
        if !(truncation.is_finite() && truncation > 0.0) {
            return invalid(format!(
                "truncation radius must be positive, got {truncation}"
            ));
        }
        if truncation / h > 46_000.0 {
            return invalid(format!(
                "R/h = {} is too large for i32 lattice indices",
                truncation / h
            ));
        }
        kernel.validate()?;

        let radius_sq_index = index_radius_sq(truncation, h);
        let scale = 4.0 * h * h;
        let mut terms = Vec::new();
        for n in 1..=radius_sq_index as u64 {
            let circle = circle_points(n);
            if circle.is_empty() {
                continue;
            }
            let w_norm = h * (n as f64).sqrt();
            let radial = kernel.radial(w_norm);
            let per_point = scale / circle.len() as f64;
            for &(ax, ay) in &circle.points {
                for &(bx, by) in &circle.points {
                    // exact integer dot and cross give the same angle up to sign for the reverse collision
                    let dot = (ax * bx + ay * by) as f64;
                    let cross = (ax * by - ay * bx) as f64;
                    let theta = cross.atan2(dot);
                    terms.push(Term {
                        zeta: [ax as i32, ay as i32],
                        zeta_p: [bx as i32, by as i32],
                        weight: per_point * radial * kernel.angular(theta),
                    });
                }
            }
        }
        Ok(Self {
            h,
            truncation,
            radius_sq_index,
            kernel: kernel.clone(),
            terms,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn kernel(&self) -> &KernelSpec {
        &self.kernel
    }

    /// Largest |zeta|^2 in Z_{h,R}.
    pub fn radius_sq_index(&self) -> i64 {
        self.radius_sq_index
    }

    /// Number of (zeta, zeta') pairs.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn check_step(&self, f: &LatticeDistribution) -> Result<()> {
        if (f.h() - self.h).abs() > 1e-12 * self.h {
            return invalid(format!(
                "distribution step {} differs from operator step {}",
                f.h(),
                self.h
            ));
        }
        Ok(())
    }

    fn accumulate(
        &self,
        terms: &[Term],
        f: &LatticeDistribution,
        (vx, vy): (i64, i64),
        domain: Domain,
    ) -> CompensatedSum {
        let fv = f.get(vx, vy);
        let mut acc = CompensatedSum::default();
        for t in terms {
            let (zx, zy) = (t.zeta[0] as i64, t.zeta[1] as i64);
            let (px, py) = (t.zeta_p[0] as i64, t.zeta_p[1] as i64);
            let star = (vx + 2 * zx, vy + 2 * zy);
            let prime = (vx + zx + px, vy + zy + py);
            let star_prime = (vx + zx - px, vy + zy - py);
            if domain == Domain::Support
                && !(f.contains(vx, vy)
                    && f.contains(star.0, star.1)
                    && f.contains(prime.0, prime.1)
                    && f.contains(star_prime.0, star_prime.1))
            {
                continue;
            }
            let gain = f.get(prime.0, prime.1) * f.get(star_prime.0, star_prime.1);
            let loss = fv * f.get(star.0, star.1);
            if gain != 0.0 || loss != 0.0 {
                acc.add(t.weight * (gain - loss));
            }
        }
        acc
    }

    /// Q^h(f,f) at lattice index `zeta_v`. The pair table is split into fixed
    /// chunks summed in parallel and combined in order, so the value does
    /// not depend on the thread count.
    pub fn eval(&self, f: &LatticeDistribution, zeta_v: (i64, i64), domain: Domain) -> Result<f64> {
        self.check_step(f)?;
        let parts: Vec<CompensatedSum> = self
            .terms
            .par_chunks(TERM_CHUNK)
            .map(|chunk| self.accumulate(chunk, f, zeta_v, domain))
            .collect();
        let mut total = CompensatedSum::default();
        parts.into_iter().for_each(|p| total.merge(p));
        Ok(total.value())
    }

    /// Q^h(f,f) at many lattice points, parallel over the points.
    pub fn eval_many(
        &self,
        f: &LatticeDistribution,
        points: &[(i64, i64)],
        domain: Domain,
    ) -> Result<Vec<f64>> {
        self.check_step(f)?;
        Ok(points
            .par_iter()
            .map(|&p| self.accumulate(&self.terms, f, p, domain).value())
            .collect())
    }
}

/// Q^h(f,f)(v) for a velocity `v` on the lattice of `f`.
pub fn q_discrete(
    f: &LatticeDistribution,
    v: Vec2,
    kernel: &KernelSpec,
    truncation: f64,
) -> Result<f64> {
    let zeta_v = to_lattice(v, f.h())?;
    DiscreteOperator::new(f.h(), truncation, kernel)?.eval(f, zeta_v, Domain::Unbounded)
}

/// Moments of Q^h(f,f) summed over the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CollisionInvariants {
    pub mass_rate: f64,
    pub momentum_rate: [f64; 2],
    pub energy_rate: f64,
    /// sum |Q^h(v)| (1 + |v|^2), the natural scale for the rates above.
    pub scale: f64,
}

impl CollisionInvariants {
    /// Largest rate relative to `scale` (0 when Q^h vanishes identically).
    pub fn max_relative(&self) -> f64 {
        let worst = self
            .mass_rate
            .abs()
            .max(self.momentum_rate[0].abs())
            .max(self.momentum_rate[1].abs())
            .max(self.energy_rate.abs());
        if self.scale == 0.0 {
            worst
        } else {
            worst / self.scale
        }
    }
}

/// Sums Q^h(v) (1, v, |v|^2) over every lattice v where Q^h can be nonzero.
///
/// Energy conservation confines every post-collision velocity of two
/// velocities in the support (radius rho) to |v| <= sqrt(2) rho, so the sum
/// runs over that disk.
pub fn collision_invariants(
    f: &LatticeDistribution,
    kernel: &KernelSpec,
    truncation: f64,
) -> Result<CollisionInvariants> {
    let op = DiscreteOperator::new(f.h(), truncation, kernel)?;
    invariants_with(&op, f, Domain::Unbounded)
}

pub(crate) fn invariants_with(
    op: &DiscreteOperator,
    f: &LatticeDistribution,
    domain: Domain,
) -> Result<CollisionInvariants> {
    let points = match domain {
        Domain::Support => f.support_points(),
        Domain::Unbounded => {
            let r2 = 2 * f.radius_sq_index();
            let w = (r2 as f64).sqrt().floor() as i64;
            (-w..=w)
                .flat_map(|y| (-w..=w).map(move |x| (x, y)))
                .filter(|&(x, y)| x * x + y * y <= r2)
                .collect()
        }
    };
    let q = op.eval_many(f, &points, domain)?;
    let h = f.h();
    let mut mass = CompensatedSum::default();
    let mut px = CompensatedSum::default();
    let mut py = CompensatedSum::default();
    let mut energy = CompensatedSum::default();
    let mut scale = CompensatedSum::default();
    for (&(zx, zy), &qv) in points.iter().zip(&q) {
        let v = Vec2::new(zx as f64 * h, zy as f64 * h);
        mass.add(qv);
        px.add(qv * v.x);
        py.add(qv * v.y);
        energy.add(qv * v.norm_sq());
        scale.add(qv.abs() * (1.0 + v.norm_sq()));
    }
    Ok(CollisionInvariants {
        mass_rate: mass.value(),
        momentum_rate: [px.value(), py.value()],
        energy_rate: energy.value(),
        scale: scale.value(),
    })
}
