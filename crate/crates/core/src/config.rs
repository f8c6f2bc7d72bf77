//! Optical geometry and reconstruction range shared by every stage.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, ensure_positive, param, Result};

/// Recording geometry, reconstruction range and particle gates.
///
/// All lengths are in metres. `aperture_height` is the effective hologram
/// height `D` entering the hologram numerical aperture; when unset it is the
/// sensor height `grid_rows * pixel_pitch`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpticalConfig {
    pub wavelength: f64,
    pub pixel_pitch: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,
    pub aperture_height: Option<f64>,
    /// Permit an aperture larger than the sensor.
    pub aperture_override: bool,
    pub dis1: f64,
    pub dis_end: f64,
    pub depth_spacing: f64,
    pub min_dia: f64,
    pub max_dia: f64,
    pub fixed_intensity: f64,
}

impl OpticalConfig {
    /// A 532 nm, 3.45 µm pitch configuration reconstructing `[31, 34]` mm in
    /// 50 µm steps, gating particles of 50–62 µm.
    pub fn new(grid_rows: usize, grid_cols: usize) -> Self {
        Self {
            wavelength: 532e-9,
            pixel_pitch: 3.45e-6,
            grid_rows,
            grid_cols,
            aperture_height: None,
            aperture_override: false,
            dis1: 31e-3,
            dis_end: 34e-3,
            depth_spacing: 50e-6,
            min_dia: 50e-6,
            max_dia: 62e-6,
            fixed_intensity: 0.39,
        }
    }

    pub fn with_range(mut self, dis1: f64, dis_end: f64, depth_spacing: f64) -> Self {
        self.dis1 = dis1;
        self.dis_end = dis_end;
        self.depth_spacing = depth_spacing;
        self
    }

    pub fn with_diameter_gate(mut self, min_dia: f64, max_dia: f64) -> Self {
        self.min_dia = min_dia;
        self.max_dia = max_dia;
        self
    }

    pub fn with_aperture_height(mut self, height: f64) -> Self {
        self.aperture_height = Some(height);
        self
    }

    pub fn with_fixed_intensity(mut self, value: f64) -> Self {
        self.fixed_intensity = value;
        self
    }

    pub fn sensor_height(&self) -> f64 {
        self.grid_rows as f64 * self.pixel_pitch
    }

    pub fn effective_aperture(&self) -> f64 {
        self.aperture_height.unwrap_or_else(|| self.sensor_height())
    }

    pub fn validate(&self) -> Result<()> {
        ensure_positive("wavelength", self.wavelength)?;
        ensure_positive("pixel_pitch", self.pixel_pitch)?;
        if self.grid_rows < 2 || self.grid_cols < 2 {
            return Err(param(format!(
                "grid must be at least 2x2, got {}x{}",
                self.grid_rows, self.grid_cols
            )));
        }
        if let Some(d) = self.aperture_height {
            ensure_positive("aperture_height", d)?;
            if d > self.sensor_height() * (1.0 + 1e-12) && !self.aperture_override {
                return Err(param(format!(
                    "aperture_height {d} exceeds sensor height {}; set aperture_override to allow",
                    self.sensor_height()
                )));
            }
        }
        ensure_positive("dis1", self.dis1)?;
        ensure_finite("dis_end", self.dis_end)?;
        if self.dis_end <= self.dis1 {
            return Err(param(format!(
                "dis_end ({}) must exceed dis1 ({})",
                self.dis_end, self.dis1
            )));
        }
        ensure_positive("depth_spacing", self.depth_spacing)?;
        ensure_positive("min_dia", self.min_dia)?;
        ensure_finite("max_dia", self.max_dia)?;
        if self.max_dia <= self.min_dia {
            return Err(param(format!(
                "max_dia ({}) must exceed min_dia ({})",
                self.max_dia, self.min_dia
            )));
        }
        if !(self.fixed_intensity > 0.0 && self.fixed_intensity <= 1.0) {
            return Err(param(format!(
                "fixed_intensity must lie in (0, 1], got {}",
                self.fixed_intensity
            )));
        }
        Ok(())
    }

    /// Number of slices in `[dis1, dis_end]` at `depth_spacing`.
    pub fn slice_count(&self) -> Result<usize> {
        self.validate()?;
        let span = (self.dis_end - self.dis1) / self.depth_spacing;
        // Tolerate representation error so [31, 34] mm at 50 µm yields 61.
        let steps = (span + 1e-9).floor();
        if steps < 1.0 {
            return Err(param(format!(
                "reconstruction range [{}, {}] is shorter than one spacing {}",
                self.dis1, self.dis_end, self.depth_spacing
            )));
        }
        Ok(steps as usize + 1)
    }

    /// Reconstruction distances `dis1 + i * depth_spacing`.
    pub fn distances(&self) -> Result<Vec<f64>> {
        let n = self.slice_count()?;
        Ok((0..n)
            .map(|i| self.dis1 + i as f64 * self.depth_spacing)
            .collect())
    }
}
