//! WebAssembly bindings for the browser demo in `www/`.

mod scene;

pub use scene::{Scene, GRID, Z_MAX, Z_MIN};

use wasm_bindgen::prelude::*;

fn js(e: holofocus::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[wasm_bindgen]
pub struct Demo {
    scene: Scene,
}

#[wasm_bindgen]
impl Demo {
    /// Simulates a new hologram.
    #[wasm_bindgen(constructor)]
    pub fn new(particles: usize, seed: u32, noise: f64) -> Result<Demo, JsError> {
        Ok(Self { scene: Scene::new(particles, seed as u64, noise).map_err(js)? })
    }

    pub fn size(&self) -> usize {
        GRID
    }

    pub fn z_min_mm(&self) -> f64 {
        Z_MIN * 1e3
    }

    pub fn z_max_mm(&self) -> f64 {
        Z_MAX * 1e3
    }

    pub fn hologram_rgba(&self) -> Vec<u8> {
        self.scene.hologram_rgba()
    }

    pub fn refocus_rgba(&self, z_mm: f64) -> Result<Vec<u8>, JsError> {
        self.scene.refocus_rgba(z_mm * 1e-3).map_err(js)
    }

    /// Ground truth as `[col_px, row_px, z_mm, diameter_um, ...]`.
    pub fn truth(&self) -> Vec<f64> {
        let pitch = self.scene.config().pixel_pitch;
        self.scene
            .field()
            .particles()
            .iter()
            .flat_map(|p| [p.x / pitch, p.y / pitch, p.z * 1e3, p.diameter * 1e6])
            .collect()
    }

    /// Runs the pipeline. Returns detections flattened like [`Demo::truth`]
    /// followed by `[matched, mean |dz| in mm]`.
    pub fn detect(&self) -> Result<Vec<f64>, JsError> {
        let (detections, report) = self.scene.detect().map_err(js)?;
        let pitch = self.scene.config().pixel_pitch;
        let mut out: Vec<f64> = detections
            .iter()
            .flat_map(|d| [d.x / pitch, d.y / pitch, d.z * 1e3, d.diameter * 1e6])
            .collect();
        let n = report.axial_errors.len().max(1) as f64;
        out.push(report.matched_count() as f64);
        out.push(report.axial_errors.iter().map(|e| e.abs()).sum::<f64>() / n * 1e3);
        Ok(out)
    }
}
