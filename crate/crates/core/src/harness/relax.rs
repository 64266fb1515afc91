use serde::{Deserialize, Serialize};

use crate::collision::{DiscreteOperator, Domain, KernelSpec, LatticeDistribution};
use crate::error::{invalid, Error, Result};
use crate::sum::CompensatedSum;

/// Values below -POSITIVITY_TOL * max f abort the run.
pub const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mass: f64,
    pub momentum: [f64; 2],
    pub energy: f64,
}

impl Moments {
    pub fn of(f: &LatticeDistribution) -> Self {
        let h = f.h();
        let mut m = CompensatedSum::default();
        let mut px = CompensatedSum::default();
        let mut py = CompensatedSum::default();
        let mut e = CompensatedSum::default();
        for ((x, y), value) in f.iter() {
            let (vx, vy) = (x as f64 * h, y as f64 * h);
            m.add(value);
            px.add(value * vx);
            py.add(value * vy);
            e.add(value * (vx * vx + vy * vy));
        }
        let cell = h * h;
        Moments {
            mass: cell * m.value(),
            momentum: [cell * px.value(), cell * py.value()],
            energy: cell * e.value(),
        }
    }

    /// Largest component change relative to the initial mass and energy.
    pub fn drift_from(&self, initial: &Moments) -> f64 {
        let scale = initial.mass.abs() + initial.energy.abs();
        if scale == 0.0 {
            return 0.0;
        }
        [
            self.mass - initial.mass,
            self.momentum[0] - initial.momentum[0],
            self.momentum[1] - initial.momentum[1],
            self.energy - initial.energy,
        ]
        .iter()
        .map(|d| d.abs())
        .fold(0.0, f64::max)
            / scale
    }
}

/// h^2 sum f log f over the support, with 0 log 0 = 0.
pub fn h_functional(f: &LatticeDistribution) -> f64 {
    let s: CompensatedSum = f
        .iter()
        .filter(|&(_, v)| v > 0.0)
        .map(|(_, v)| v * v.ln())
        .collect();
    f.h() * f.h() * s.value()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxState {
    pub step: usize,
    pub t: f64,
    pub f: LatticeDistribution,
    pub h_functional: f64,
    pub moments: Moments,
}

impl RelaxState {
    fn new(step: usize, t: f64, f: LatticeDistribution) -> Self {
        Self {
            step,
            t,
            h_functional: h_functional(&f),
            moments: Moments::of(&f),
            f,
        }
    }
}

fn with_values(
    template: &LatticeDistribution,
    points: &[(i64, i64)],
    values: &[f64],
) -> LatticeDistribution {
    let mut out = template.clone();
    for (&(x, y), &v) in points.iter().zip(values) {
        out.set_unchecked(x, y, v);
    }
    out
}

/// Space-homogeneous relaxation df/dt = Q^h(f, f) with classical RK4 at a
/// fixed step.
///
/// Collisions are restricted to quadruples inside the support of `f0`, so the
/// velocity set is closed and mass, momentum and energy are conserved exactly
/// up to round-off.
pub fn relax_simulate(
    f0: &LatticeDistribution,
    kernel: &KernelSpec,
    truncation: f64,
    dt: f64,
    steps: usize,
) -> Result<Vec<RelaxState>> {
    if !(dt.is_finite() && dt > 0.0) {
        return invalid(format!("dt must be positive, got {dt}"));
    }
    let op = DiscreteOperator::new(f0.h(), truncation, kernel)?;
    let points = f0.support_points();
    let rhs =
        |values: &[f64]| op.eval_many(&with_values(f0, &points, values), &points, Domain::Support);

    let mut values: Vec<f64> = points.iter().map(|&(x, y)| f0.get(x, y)).collect();
    let mut trajectory = Vec::with_capacity(steps + 1);
    trajectory.push(RelaxState::new(0, 0.0, f0.clone()));
    let axpy = |base: &[f64], k: &[f64], a: f64| -> Vec<f64> {
        base.iter().zip(k).map(|(b, k)| b + a * k).collect()
    };

    for step in 1..=steps {
        let k1 = rhs(&values)?;
        let k2 = rhs(&axpy(&values, &k1, 0.5 * dt))?;
        let k3 = rhs(&axpy(&values, &k2, 0.5 * dt))?;
        let k4 = rhs(&axpy(&values, &k3, dt))?;
        for i in 0..values.len() {
            values[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let max = values.iter().copied().fold(0.0, f64::max);
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        if !min.is_finite() || min < -POSITIVITY_TOL * max {
            return Err(Error::PositivityLoss {
                step,
                value: min,
                max,
            });
        }
        trajectory.push(RelaxState::new(
            step,
            step as f64 * dt,
            with_values(f0, &points, &values),
        ));
    }
    Ok(trajectory)
}
