use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numtheory::r2_range;

/// Largest coordinate accepted by [`figure_data`].
pub const FIGURE_COORD_MAX: u64 = 20_000;

const BLOCK: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// r2 >= threshold.
    Ge,
    /// r2 > threshold.
    Gt,
}

impl Comparison {
    pub fn accepts(self, r2: u32, threshold: u32) -> bool {
        match self {
            Comparison::Ge => r2 >= threshold,
            Comparison::Gt => r2 > threshold,
        }
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Comparison::Ge => "ge",
            Comparison::Gt => "gt",
        })
    }
}

impl FromStr for Comparison {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ge" => Ok(Comparison::Ge),
            "gt" => Ok(Comparison::Gt),
            _ => invalid(format!("comparison must be ge or gt, got {s:?}")),
        }
    }
}

/// Lattice points zeta with coord_min <= zeta_1, zeta_2 <= coord_max whose
/// circle x^2 + y^2 = |zeta|^2 carries enough lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureQuery {
    pub coord_min: u64,
    pub coord_max: u64,
    pub threshold: u32,
    pub comparison: Comparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigurePoint {
    pub x: u64,
    pub y: u64,
    pub n: u64,
    pub r2: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FigureData {
    pub query: FigureQuery,
    pub count: usize,
    /// Sorted by (x, y).
    pub points: Vec<FigurePoint>,
}

impl FigureQuery {
    pub fn validate(&self) -> Result<()> {
        if self.coord_min > self.coord_max {
            return invalid(format!(
                "coord_min {} exceeds coord_max {}",
                self.coord_min, self.coord_max
            ));
        }
        if self.coord_max > FIGURE_COORD_MAX {
            return invalid(format!(
                "coordinates are limited to 0..={FIGURE_COORD_MAX}, got {}",
                self.coord_max
            ));
        }
        if !self.threshold.is_multiple_of(4) {
            return invalid(format!(
                "threshold must be a multiple of 4, got {}",
                self.threshold
            ));
        }
        Ok(())
    }
}

/// All box points passing the threshold. The range of |zeta|^2 is sieved for
/// r2 in fixed blocks; each block then visits the (x, y) pairs that land in
/// it. The result is independent of scheduling.
pub fn figure_data(query: FigureQuery) -> Result<FigureData> {
    query.validate()?;
    let (lo, hi) = (query.coord_min, query.coord_max);
    let n_lo = 2 * lo * lo;
    let n_hi = 2 * hi * hi + 1;
    let starts: Vec<u64> = (n_lo..n_hi).step_by(BLOCK as usize).collect();

    let blocks: Vec<Vec<FigurePoint>> = starts
        .par_iter()
        .map(|&a| {
            let b = (a + BLOCK).min(n_hi);
            let r2 = r2_range(a, b);
            let mut out = Vec::new();
            for x in lo..=hi {
                let x2 = x * x;
                if x2 + hi * hi < a || x2 + lo * lo >= b {
                    continue;
                }
                // y range with a <= x^2 + y^2 < b, clipped to the box
                let y_from = if a > x2 { (a - x2 - 1).isqrt() + 1 } else { 0 }.max(lo);
                let y_to = (b - 1 - x2).isqrt().min(hi);
                for y in y_from..=y_to {
                    let n = x2 + y * y;
                    let r = r2[(n - a) as usize];
                    if query.comparison.accepts(r, query.threshold) {
                        out.push(FigurePoint { x, y, n, r2: r });
                    }
                }
            }
            out
        })
        .collect();

    let mut points: Vec<FigurePoint> = blocks.concat();
    points.sort_unstable_by_key(|p| (p.x, p.y));
    Ok(FigureData {
        query,
        count: points.len(),
        points,
    })
}
