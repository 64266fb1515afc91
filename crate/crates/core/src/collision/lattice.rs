use serde::{Deserialize, Serialize};

use super::density::VelocityDensity;
use super::geometry::Vec2;
use crate::error::{invalid, Error, Result};

/// Largest squared integer radius m with m <= (radius / h)^2, tolerant of
/// round-off when radius is itself a multiple of h.
pub(crate) fn index_radius_sq(radius: f64, h: f64) -> i64 {
    let r = radius / h;
    (r * r * (1.0 + 1e-12)).floor() as i64
}

/// How a closed-form density is transferred to the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sampling {
    /// f(h zeta).
    Point,
    /// Mean of f over the cell of side h around h zeta.
    #[default]
    CellAverage,
}

/// Nonnegative values f_zeta on the lattice points h*zeta with |h zeta| <= radius.
/// Values are pointwise densities (not cell masses); lookups outside the
/// support return 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeDistribution {
    h: f64,
    radius: f64,
    half_width: i64,
    radius_sq_index: i64,
    values: Vec<f64>,
}

impl LatticeDistribution {
    /// The zero distribution with step `h` and support radius `radius`.
    pub fn zeros(h: f64, radius: f64) -> Result<Self> {
        if !(h.is_finite() && h > 0.0) {
            return invalid(format!("lattice step must be positive, got {h}"));
        }
        if !(radius.is_finite() && radius >= 0.0) {
            return invalid(format!("support radius must be nonnegative, got {radius}"));
        }
        let radius_sq_index = index_radius_sq(radius, h);
        let half_width = (radius_sq_index as f64).sqrt().floor() as i64;
        let side = (2 * half_width + 1) as usize;
        Ok(Self {
            h,
            radius,
            half_width,
            radius_sq_index,
            values: vec![0.0; side * side],
        })
    }

    /// Fills the support from `f(zeta_x, zeta_y)`.
    pub fn from_fn(h: f64, radius: f64, mut f: impl FnMut(i64, i64) -> f64) -> Result<Self> {
        let mut d = Self::zeros(h, radius)?;
        for (zx, zy) in d.support_points() {
            d.set(zx, zy, f(zx, zy))?;
        }
        Ok(d)
    }

    /// Samples a closed-form density on the support.
    pub fn sample(
        density: &dyn VelocityDensity,
        h: f64,
        radius: f64,
        sampling: Sampling,
    ) -> Result<Self> {
        Self::from_fn(h, radius, |zx, zy| {
            let v = Vec2::new(zx as f64 * h, zy as f64 * h);
            match sampling {
                Sampling::Point => density.eval(v),
                Sampling::CellAverage => density.cell_average(v, h),
            }
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Largest |zeta_i| in the support.
    pub fn half_width(&self) -> i64 {
        self.half_width
    }

    /// Largest |zeta|^2 in the support.
    pub fn radius_sq_index(&self) -> i64 {
        self.radius_sq_index
    }

    pub fn contains(&self, zx: i64, zy: i64) -> bool {
        zx * zx + zy * zy <= self.radius_sq_index
    }

    #[inline]
    fn index(&self, zx: i64, zy: i64) -> usize {
        let side = 2 * self.half_width + 1;
        ((zy + self.half_width) * side + (zx + self.half_width)) as usize
    }

    /// f_zeta, or 0 outside the support.
    #[inline]
    pub fn get(&self, zx: i64, zy: i64) -> f64 {
        if zx.abs() > self.half_width || zy.abs() > self.half_width {
            return 0.0;
        }
        // corners of the bounding square outside the disk are kept at 0
        self.values[self.index(zx, zy)]
    }

    pub fn set(&mut self, zx: i64, zy: i64, value: f64) -> Result<()> {
        if !self.contains(zx, zy) {
            return invalid(format!(
                "({zx}, {zy}) lies outside the support radius {}",
                self.radius
            ));
        }
        if !(value.is_finite() && value >= 0.0) {
            return invalid(format!(
                "value at ({zx}, {zy}) must be finite and >= 0, got {value}"
            ));
        }
        let i = self.index(zx, zy);
        self.values[i] = value;
        Ok(())
    }

    /// Writes a value without the sign check; used by time integrators whose
    /// intermediate states may dip below zero by round-off.
    pub(crate) fn set_unchecked(&mut self, zx: i64, zy: i64, value: f64) {
        let i = self.index(zx, zy);
        self.values[i] = value;
    }

    /// All lattice points of the support, row by row.
    pub fn support_points(&self) -> Vec<(i64, i64)> {
        let w = self.half_width;
        (-w..=w)
            .flat_map(|zy| (-w..=w).map(move |zx| (zx, zy)))
            .filter(|&(zx, zy)| self.contains(zx, zy))
            .collect()
    }

    /// (zeta, value) over the support.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), f64)> + '_ {
        self.support_points()
            .into_iter()
            .map(|(x, y)| ((x, y), self.get(x, y)))
    }

    pub fn max_value(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Multiplies every value by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= factor);
        out
    }

    /// Lattice index of `v`, if it is a lattice point.
    pub fn lattice_index(&self, v: Vec2) -> Result<(i64, i64)> {
        to_lattice(v, self.h)
    }
}

/// Lattice index of a velocity, or `OffLattice`.
pub fn to_lattice(v: Vec2, h: f64) -> Result<(i64, i64)> {
    let (fx, fy) = (v.x / h, v.y / h);
    let (zx, zy) = (fx.round(), fy.round());
    let tol = 1e-9 * (1.0 + fx.abs().max(fy.abs()));
    if (fx - zx).abs() > tol || (fy - zy).abs() > tol {
        return Err(Error::OffLattice { x: v.x, y: v.y, h });
    }
    Ok((zx as i64, zy as i64))
}

impl VelocityDensity for LatticeDistribution {
    /// The value at the nearest lattice point when `v` is on the lattice, else 0.
    fn eval(&self, v: Vec2) -> f64 {
        match to_lattice(v, self.h) {
            Ok((zx, zy)) => self.get(zx, zy),
            Err(_) => 0.0,
        }
    }

    fn extent(&self) -> f64 {
        self.radius
    }
}
