use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format_err;
use crate::autofocus::{DetectorParams, ReconstructionSource};
use crate::calibration::CalibrationParams;
use crate::config::OpticalConfig;
use crate::error::Result;
use crate::simulator::SamplingSpec;

/// Everything a command needs, as flat `key = value` TOML. Lengths carry a
/// `_m` suffix and are in metres; missing keys take the defaults of
/// [`OpticalConfig::new`] on a 1024 x 1024 grid, [`DetectorParams`] and
/// [`CalibrationParams`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConfigFile {
    pub wavelength_m: f64,
    pub pixel_pitch_m: f64,
    pub grid_rows: usize,
    pub grid_cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aperture_height_m: Option<f64>,
    pub aperture_override: bool,
    pub dis1_m: f64,
    pub dis_end_m: f64,
    pub depth_spacing_m: f64,
    pub min_dia_m: f64,
    pub max_dia_m: f64,
    pub fixed_intensity: f64,

    pub gaussian_sigma_px: f64,
    pub canny_low: f64,
    pub canny_high: f64,
    pub morph_radius_px: usize,
    pub centroid_window_px: f64,
    pub reconstruction_source: ReconstructionSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axial_resolution_m: Option<f64>,

    pub calibration_v1: f64,
    pub calibration_v2: f64,
    pub calibration_step: f64,
    pub calibration_sample_count: usize,

    pub seed: u64,
    pub particle_count: usize,
    /// Defaults to `dis1_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_z_min_m: Option<f64>,
    /// Defaults to `dis_end_m`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub volume_z_max_m: Option<f64>,
    /// When non-empty, particles sit on these depths.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub planes_m: Vec<f64>,
    /// Defaults to the detection gate.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particle_min_dia_m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub particle_max_dia_m: Option<f64>,
    pub noise_level: f64,
    pub min_lateral_sep_px: f64,
    pub min_axial_sep_m: f64,
    pub enforce_separation: bool,
}

impl Default for ConfigFile {
    fn default() -> Self {
        let o = OpticalConfig::new(1024, 1024);
        let d = DetectorParams::default();
        let c = CalibrationParams::default();
        Self {
            wavelength_m: o.wavelength,
            pixel_pitch_m: o.pixel_pitch,
            grid_rows: o.grid_rows,
            grid_cols: o.grid_cols,
            aperture_height_m: o.aperture_height,
            aperture_override: o.aperture_override,
            dis1_m: o.dis1,
            dis_end_m: o.dis_end,
            depth_spacing_m: o.depth_spacing,
            min_dia_m: o.min_dia,
            max_dia_m: o.max_dia,
            fixed_intensity: o.fixed_intensity,
            gaussian_sigma_px: d.gaussian_sigma,
            canny_low: d.canny_low,
            canny_high: d.canny_high,
            morph_radius_px: d.morph_radius,
            centroid_window_px: d.centroid_window_px,
            reconstruction_source: d.source,
            axial_resolution_m: d.axial_resolution,
            calibration_v1: c.v1,
            calibration_v2: c.v2,
            calibration_step: c.step,
            calibration_sample_count: c.sample_count,
            seed: 0,
            particle_count: 0,
            volume_z_min_m: None,
            volume_z_max_m: None,
            planes_m: Vec::new(),
            particle_min_dia_m: None,
            particle_max_dia_m: None,
            noise_level: 0.0,
            min_lateral_sep_px: 6.0,
            min_axial_sep_m: 2.5e-3,
            enforce_separation: true,
        }
    }
}

impl ConfigFile {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| format_err("config", e))
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| format_err("config", e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    /// Hex SHA-256 of the canonical serialization.
    pub fn hash(&self) -> Result<String> {
        let digest = Sha256::digest(self.to_toml_string()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn optical(&self) -> Result<OpticalConfig> {
        let config = OpticalConfig {
            wavelength: self.wavelength_m,
            pixel_pitch: self.pixel_pitch_m,
            grid_rows: self.grid_rows,
            grid_cols: self.grid_cols,
            aperture_height: self.aperture_height_m,
            aperture_override: self.aperture_override,
            dis1: self.dis1_m,
            dis_end: self.dis_end_m,
            depth_spacing: self.depth_spacing_m,
            min_dia: self.min_dia_m,
            max_dia: self.max_dia_m,
            fixed_intensity: self.fixed_intensity,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn detector(&self) -> Result<DetectorParams> {
        let params = DetectorParams {
            gaussian_sigma: self.gaussian_sigma_px,
            canny_low: self.canny_low,
            canny_high: self.canny_high,
            morph_radius: self.morph_radius_px,
            centroid_window_px: self.centroid_window_px,
            source: self.reconstruction_source,
            axial_resolution: self.axial_resolution_m,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn calibration(&self) -> Result<CalibrationParams> {
        let params = CalibrationParams {
            v1: self.calibration_v1,
            v2: self.calibration_v2,
            step: self.calibration_step,
            sample_count: self.calibration_sample_count,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn sampling_spec(&self) -> Result<SamplingSpec> {
        let optical = self.optical()?;
        let z_min = self.volume_z_min_m.unwrap_or(optical.dis1);
        let z_max = self.volume_z_max_m.unwrap_or(optical.dis_end);
        let mut spec = SamplingSpec::new(self.particle_count, &optical, z_min, z_max, self.seed)
            .with_diameters(
                self.particle_min_dia_m.unwrap_or(optical.min_dia),
                self.particle_max_dia_m.unwrap_or(optical.max_dia),
            )
            .with_separation(self.min_lateral_sep_px, self.min_axial_sep_m);
        if !self.enforce_separation {
            spec = spec.without_separation();
        }
        if !self.planes_m.is_empty() {
            spec = spec.with_planes(self.planes_m.clone());
        }
        Ok(spec)
    }
}
