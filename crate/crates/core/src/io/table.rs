use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::format_err;
use crate::autofocus::ParticleDetection;
use crate::error::Result;
use crate::simulator::{Particle, Volume};

#[derive(Debug, Serialize, Deserialize)]
struct Row {
    id: usize,
    x_m: f64,
    y_m: f64,
    z_m: f64,
    diameter_m: f64,
}

const HEADER: [&str; 5] = ["id", "x_m", "y_m", "z_m", "diameter_m"];

/// Where a particle table came from; stored next to the CSV as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub config_hash: String,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume: Option<Volume>,
    pub generator: String,
}

impl Provenance {
    pub fn new(config_hash: String, seed: u64) -> Self {
        Self {
            config_hash,
            seed,
            volume: None,
            generator: concat!("holofocus ", env!("CARGO_PKG_VERSION")).to_string(),
        }
    }
}

/// `particles.csv` -> `particles.json`.
pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("json")
}

fn write_rows(path: &Path, rows: impl Iterator<Item = [f64; 4]>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| format_err("csv", e))?;
    // Written explicitly so an empty table still has its header.
    w.write_record(HEADER).map_err(|e| format_err("csv", e))?;
    for (id, [x, y, z, d]) in rows.enumerate() {
        w.write_record([id.to_string(), x.to_string(), y.to_string(), z.to_string(), d.to_string()])
            .map_err(|e| format_err("csv", e))?;
    }
    w.flush()?;
    Ok(())
}

fn read_rows(path: &Path) -> Result<Vec<[f64; 4]>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| format_err("csv", e))?;
    let header = r.headers().map_err(|e| format_err("csv", e))?;
    if header.iter().ne(HEADER) {
        return Err(format_err("csv", format!("expected header {}, got {:?}", HEADER.join(","), header)));
    }
    let mut out = Vec::new();
    for (k, row) in r.deserialize::<Row>().enumerate() {
        let row = row.map_err(|e| format_err("csv", e))?;
        if row.id != k {
            return Err(format_err("csv", format!("row {k} has id {}", row.id)));
        }
        out.push([row.x_m, row.y_m, row.z_m, row.diameter_m]);
    }
    Ok(out)
}

pub fn write_particles(path: impl AsRef<Path>, particles: &[Particle]) -> Result<()> {
    write_rows(path.as_ref(), particles.iter().map(|p| [p.x, p.y, p.z, p.diameter]))
}

pub fn read_particles(path: impl AsRef<Path>) -> Result<Vec<Particle>> {
    Ok(read_rows(path.as_ref())?
        .into_iter()
        .map(|[x, y, z, diameter]| Particle { x, y, z, diameter })
        .collect())
}

pub fn write_detections(path: impl AsRef<Path>, detections: &[ParticleDetection]) -> Result<()> {
    write_rows(path.as_ref(), detections.iter().map(|p| [p.x, p.y, p.z, p.diameter]))
}

pub fn read_detections(path: impl AsRef<Path>) -> Result<Vec<ParticleDetection>> {
    Ok(read_rows(path.as_ref())?
        .into_iter()
        .map(|[x, y, z, diameter]| ParticleDetection { x, y, z, diameter })
        .collect())
}

pub fn write_sidecar(csv_path: impl AsRef<Path>, provenance: &Provenance) -> Result<()> {
    let text = serde_json::to_string_pretty(provenance).map_err(|e| format_err("json", e))?;
    std::fs::write(sidecar_path(csv_path.as_ref()), text + "\n")?;
    Ok(())
}

pub fn read_sidecar(csv_path: impl AsRef<Path>) -> Result<Provenance> {
    let text = std::fs::read_to_string(sidecar_path(csv_path.as_ref()))?;
    serde_json::from_str(&text).map_err(|e| format_err("json", e))
}
