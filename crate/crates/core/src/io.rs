//! File formats shared with the command-line tool.
//!
//! A lattice distribution is a CSV file of `zeta_x,zeta_y,value` rows next to
//! a JSON header `{"h": ..., "R_support": ...}` stored as `<file>.header.json`.
//! Every output file is accompanied by `<file>.manifest.json` describing the
//! run that produced it.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::circles::{AngleStatistics, CirclePointSet};
use crate::collision::LatticeDistribution;
use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LatticeHeader {
    pub h: f64,
    #[serde(rename = "R_support")]
    pub r_support: f64,
}

impl LatticeHeader {
    pub fn of(f: &LatticeDistribution) -> Self {
        Self {
            h: f.h(),
            r_support: f.radius(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
struct LatticeRow {
    zeta_x: i64,
    zeta_y: i64,
    value: f64,
}

/// `<path>.header.json`
pub fn header_path(path: &Path) -> PathBuf {
    suffixed(path, ".header.json")
}

/// `<path>.manifest.json`
pub fn manifest_path(path: &Path) -> PathBuf {
    suffixed(path, ".manifest.json")
}

fn suffixed(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

pub fn write_lattice_csv<W: Write>(out: W, f: &LatticeDistribution) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for ((zeta_x, zeta_y), value) in f.iter() {
        w.serialize(LatticeRow {
            zeta_x,
            zeta_y,
            value,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Rows outside the header's support radius, negative values and repeated
/// points are rejected; missing points are 0.
pub fn read_lattice_csv<R: Read>(input: R, header: LatticeHeader) -> Result<LatticeDistribution> {
    let mut f = LatticeDistribution::zeros(header.h, header.r_support)?;
    let mut seen = std::collections::HashSet::new();
    for row in csv::Reader::from_reader(input).deserialize() {
        let row: LatticeRow = row?;
        if !seen.insert((row.zeta_x, row.zeta_y)) {
            return invalid(format!(
                "point ({}, {}) listed twice",
                row.zeta_x, row.zeta_y
            ));
        }
        f.set(row.zeta_x, row.zeta_y, row.value)?;
    }
    Ok(f)
}

pub fn save_lattice(path: &Path, f: &LatticeDistribution) -> Result<()> {
    write_lattice_csv(BufWriter::new(File::create(path)?), f)?;
    let header = serde_json::to_string_pretty(&LatticeHeader::of(f))?;
    std::fs::write(header_path(path), header + "\n")?;
    Ok(())
}

pub fn load_lattice(path: &Path) -> Result<LatticeDistribution> {
    let header: LatticeHeader =
        serde_json::from_reader(BufReader::new(File::open(header_path(path))?))?;
    read_lattice_csv(BufReader::new(File::open(path)?), header)
}

/// Writes `zeta_x,zeta_y,Qh_value` rows.
pub fn write_qh_csv<W: Write>(out: W, rows: &[((i64, i64), f64)]) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        zeta_x: i64,
        zeta_y: i64,
        #[serde(rename = "Qh_value")]
        qh_value: f64,
    }
    let mut w = csv::Writer::from_writer(out);
    for &((zeta_x, zeta_y), qh_value) in rows {
        w.serialize(Row {
            zeta_x,
            zeta_y,
            qh_value,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `n,x,y,theta` rows.
pub fn write_circle_csv<W: Write>(out: W, set: &CirclePointSet) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        n: u64,
        x: i64,
        y: i64,
        theta: f64,
    }
    let mut w = csv::Writer::from_writer(out);
    for (&(x, y), &theta) in set.points.iter().zip(&set.angles) {
        w.serialize(Row {
            n: set.n,
            x,
            y,
            theta,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `X,k,mean_abs_S` rows, one per decade mark.
pub fn write_stats_csv<W: Write>(out: W, stats: &AngleStatistics) -> Result<()> {
    #[derive(Serialize)]
    struct Row {
        #[serde(rename = "X")]
        x: u64,
        k: i64,
        #[serde(rename = "mean_abs_S")]
        mean_abs_s: f64,
    }
    let mut w = csv::Writer::from_writer(out);
    for &(x, mean_abs_s) in &stats.decades {
        w.serialize(Row {
            x,
            k: stats.k,
            mean_abs_s,
        })?;
    }
    w.flush()?;
    Ok(())
}

/// Serializes each record as one CSV row with a header line.
pub fn write_rows<W: Write, T: Serialize>(out: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Provenance record written next to every output file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub config: serde_json::Value,
    pub versions: Versions,
    pub workers: usize,
    pub output: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Versions {
    pub dvm_core: String,
    pub caller: Option<String>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        config: serde_json::Value,
        caller_version: Option<&str>,
        output: Option<&Path>,
    ) -> Self {
        Self {
            command: command.to_string(),
            config,
            versions: Versions {
                dvm_core: env!("CARGO_PKG_VERSION").to_string(),
                caller: caller_version.map(str::to_string),
            },
            workers: rayon::current_num_threads(),
            output: output.map(|p| p.display().to_string()),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Writes the manifest to `<output>.manifest.json`.
    pub fn save_for(&self, output: &Path) -> Result<PathBuf> {
        let path = manifest_path(output);
        std::fs::write(&path, self.to_json()? + "\n")?;
        Ok(path)
    }
}
