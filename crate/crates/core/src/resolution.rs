//! Numerical aperture and resolution limits of the recording geometry.

use serde::{Deserialize, Serialize};

use crate::config::OpticalConfig;
use crate::error::{ensure_positive, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NumericalApertures {
    /// `D / (2z)`
    pub hologram: f64,
    /// `0.61 * lambda / (2 * pitch)`
    pub sensor: f64,
    /// The smaller of the two; this one limits the system.
    pub system: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    pub z: f64,
    pub na_holo: f64,
    pub na_sensor: f64,
    pub na_dhs: f64,
    pub lateral_res: f64,
    pub axial_res: f64,
    pub axial_slice_num: usize,
}

pub fn numerical_apertures(config: &OpticalConfig, z: f64) -> Result<NumericalApertures> {
    ensure_positive("z", z)?;
    ensure_positive("wavelength", config.wavelength)?;
    ensure_positive("pixel_pitch", config.pixel_pitch)?;
    let hologram = config.effective_aperture() / (2.0 * z);
    let sensor = 0.61 * config.wavelength / (2.0 * config.pixel_pitch);
    Ok(NumericalApertures {
        hologram,
        sensor,
        system: hologram.min(sensor),
    })
}

/// `lambda / NA^2`, the depth separation below which two points merge.
pub fn axial_resolution(config: &OpticalConfig, z: f64) -> Result<f64> {
    let na = numerical_apertures(config, z)?.system;
    Ok(config.wavelength / (na * na))
}

/// `lambda / NA`
pub fn lateral_resolution(config: &OpticalConfig, z: f64) -> Result<f64> {
    let na = numerical_apertures(config, z)?.system;
    Ok(config.wavelength / na)
}

/// Slices spanned by one axial-resolution cell: `ceil(axial_res / spacing)`,
/// at least 1. Quotients within 1e-9 of an integer count as that integer.
pub fn axial_slice_count(axial_res: f64, depth_spacing: f64) -> Result<usize> {
    ensure_positive("axial_res", axial_res)?;
    ensure_positive("depth_spacing", depth_spacing)?;
    let ratio = axial_res / depth_spacing;
    let nearest = ratio.round();
    let n = if (ratio - nearest).abs() <= 1e-9 * ratio.max(1.0) {
        nearest
    } else {
        ratio.ceil()
    };
    Ok((n as usize).max(1))
}

/// Distance beyond which the hologram aperture, not the pixel pitch, limits
/// the numerical aperture: `D * pitch / (0.61 * lambda)`.
pub fn crossover_distance(config: &OpticalConfig) -> f64 {
    config.effective_aperture() * config.pixel_pitch / (0.61 * config.wavelength)
}

pub fn resolution_report(config: &OpticalConfig, z: f64) -> Result<ResolutionReport> {
    let na = numerical_apertures(config, z)?;
    let axial_res = config.wavelength / (na.system * na.system);
    Ok(ResolutionReport {
        z,
        na_holo: na.hologram,
        na_sensor: na.sensor,
        na_dhs: na.system,
        lateral_res: config.wavelength / na.system,
        axial_res,
        axial_slice_num: axial_slice_count(axial_res, config.depth_spacing)?,
    })
}
