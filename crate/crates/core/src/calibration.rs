//! Choosing the constrained intensity (`fixed_intensity`) that candidate
//! focused particles must stay below.
//!
//! The stack is collapsed into a per-pixel minimum-amplitude image and a
//! per-pixel maximum-gradient image. A handful of particles are picked from
//! the minimum image; for each, a sweep of binarization thresholds finds the
//! one whose Canny outline sits on the strongest gradients. The smallest of
//! those per-particle thresholds is returned.

use serde::{Deserialize, Serialize};

use crate::autofocus::ReconstructionStack;
use crate::error::{param, Error, Result};
use crate::image::{BinaryImage, GrayImage};
use crate::morphology::{canny_with, label_components, region_props, sobel, CannyThresholds};
use crate::parallel::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CalibrationParams {
    pub v1: f64,
    pub v2: f64,
    pub step: f64,
    pub sample_count: usize,
}

impl Default for CalibrationParams {
    fn default() -> Self {
        Self {
            v1: 0.2,
            v2: 0.6,
            step: 0.01,
            sample_count: 5,
        }
    }
}

impl CalibrationParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0 <= self.v1 && self.v1 < self.v2 && self.v2 <= 1.0) {
            return Err(param(format!(
                "calibration range must satisfy 0 <= v1 < v2 <= 1, got [{}, {}]",
                self.v1, self.v2
            )));
        }
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(param(format!("calibration step must be positive, got {}", self.step)));
        }
        if self.sample_count == 0 {
            return Err(param("sample_count must be at least 1"));
        }
        Ok(())
    }

    /// `v1, v1 + step, ..., <= v2`.
    pub fn thresholds(&self) -> Vec<f64> {
        let n = ((self.v2 - self.v1) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.v1 + k as f64 * self.step).collect()
    }
}

/// Synthetic minimum-amplitude and maximum-gradient images of a stack.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionPair {
    pub min_intensity: GrayImage,
    pub max_gradient: GrayImage,
}

fn check_same_dims(slices: &[GrayImage]) -> Result<()> {
    let first = slices.first().ok_or_else(|| param("stack is empty"))?;
    if let Some(bad) = slices.iter().find(|s| s.dims() != first.dims()) {
        return Err(Error::Dimension {
            expected: first.dims(),
            actual: bad.dims(),
        });
    }
    Ok(())
}

fn fold_slices(slices: &[GrayImage], pick: fn(f64, f64) -> f64) -> Result<GrayImage> {
    check_same_dims(slices)?;
    let mut acc = slices[0].clone();
    for s in &slices[1..] {
        for (a, &v) in acc.data_mut().iter_mut().zip(s.data()) {
            *a = pick(*a, v);
        }
    }
    Ok(acc)
}

/// Pixel-wise minimum over slices.
pub fn min_intensity_projection(slices: &[GrayImage]) -> Result<GrayImage> {
    fold_slices(slices, f64::min)
}

/// Pixel-wise maximum over gradient slices.
pub fn max_gradient_projection(gradients: &[GrayImage]) -> Result<GrayImage> {
    fold_slices(gradients, f64::max)
}

/// Sobel magnitude scaled so its maximum is 1; an all-constant slice maps to
/// all zeros.
pub fn gradient_image(slice: &GrayImage) -> GrayImage {
    let g = sobel(slice).magnitude;
    let peak = g.iter().copied().fold(0.0, f64::max);
    let data = if peak > 0.0 {
        g.into_iter().map(|v| v / peak).collect()
    } else {
        vec![0.0; g.len()]
    };
    GrayImage::new(slice.rows(), slice.cols(), data).expect("gradient of a valid image is finite")
}

pub fn projections(stack: &ReconstructionStack) -> Result<ProjectionPair> {
    let slices = stack.slices();
    let gradients = par_map(slices, gradient_image);
    Ok(ProjectionPair {
        min_intensity: min_intensity_projection(slices)?,
        max_gradient: max_gradient_projection(&gradients)?,
    })
}

/// Sweep result for one sampled particle.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSweep {
    /// Inclusive crop `(r0, c0, r1, c1)` in image coordinates.
    pub crop: (usize, usize, usize, usize),
    pub grad_means: Vec<f64>,
    pub best_threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationOutcome {
    pub fixed_intensity: f64,
    pub thresholds: Vec<f64>,
    pub particles: Vec<ParticleSweep>,
}

/// Mean of `edges * gradient` over a crop, the edge map being the Canny
/// outline of `min_intensity < threshold` within that crop.
pub fn grad_mean(
    min_intensity: &GrayImage,
    max_gradient: &GrayImage,
    crop: (usize, usize, usize, usize),
    threshold: f64,
) -> f64 {
    let (r0, c0, r1, c1) = crop;
    let (h, w) = (r1 - r0 + 1, c1 - c0 + 1);
    let binary = min_intensity.crop(r0, c0, h, w).map(|v| if v < threshold { 1.0 } else { 0.0 });
    // Any non-zero Sobel response on a 0/1 image is a boundary.
    let edges = canny_with(&binary, CannyThresholds::Absolute { low: 1e-9, high: 1e-9 });
    let grad = max_gradient.crop(r0, c0, h, w);
    let sum: f64 = edges
        .data()
        .iter()
        .zip(grad.data())
        .filter(|(e, _)| **e)
        .map(|(_, g)| g)
        .sum();
    sum / (h * w) as f64
}

/// Crops around the `sample_count` largest regions of `min < (v1 + v2) / 2`,
/// padded by half the region size plus three pixels.
pub fn select_particles(min_intensity: &GrayImage, params: &CalibrationParams) -> Vec<(usize, usize, usize, usize)> {
    let mid = 0.5 * (params.v1 + params.v2);
    let mask: BinaryImage = min_intensity.below(mid);
    let labels = label_components(&mask);
    let mut props = region_props(&labels, min_intensity).expect("same dimensions");
    props.sort_by(|a, b| b.area.cmp(&a.area).then(a.label.cmp(&b.label)));
    let (rows, cols) = min_intensity.dims();
    props
        .iter()
        .take(params.sample_count)
        .map(|p| {
            let (r0, c0, r1, c1) = p.bbox;
            let pad = (r1 - r0).max(c1 - c0) / 2 + 3;
            (
                r0.saturating_sub(pad),
                c0.saturating_sub(pad),
                (r1 + pad).min(rows - 1),
                (c1 + pad).min(cols - 1),
            )
        })
        .collect()
}

pub fn calibrate_projections(pair: &ProjectionPair, params: &CalibrationParams) -> Result<CalibrationOutcome> {
    params.validate()?;
    if pair.min_intensity.dims() != pair.max_gradient.dims() {
        return Err(Error::Dimension {
            expected: pair.min_intensity.dims(),
            actual: pair.max_gradient.dims(),
        });
    }
    let crops = select_particles(&pair.min_intensity, params);
    if crops.is_empty() {
        return Err(Error::Calibration(format!(
            "no region of the minimum-intensity image lies below {}",
            0.5 * (params.v1 + params.v2)
        )));
    }
    let thresholds = params.thresholds();
    let mut particles = Vec::with_capacity(crops.len());
    for crop in crops {
        let grad_means = par_map(&thresholds, |&t| {
            grad_mean(&pair.min_intensity, &pair.max_gradient, crop, t)
        });
        // First maximum, i.e. the smallest threshold on ties.
        let mut best = 0;
        for (k, &g) in grad_means.iter().enumerate() {
            if g > grad_means[best] {
                best = k;
            }
        }
        if grad_means[best] <= 0.0 {
            continue;
        }
        particles.push(ParticleSweep {
            crop,
            best_threshold: thresholds[best],
            grad_means,
        });
    }
    let fixed_intensity = particles
        .iter()
        .map(|p| p.best_threshold)
        .fold(f64::INFINITY, f64::min);
    if !fixed_intensity.is_finite() {
        return Err(Error::Calibration("no sampled particle produced an edge at any threshold".into()));
    }
    Ok(CalibrationOutcome {
        fixed_intensity,
        thresholds,
        particles,
    })
}

/// Runs the full calibration on a reconstructed stack.
pub fn find_constrained_intensity(stack: &ReconstructionStack, params: &CalibrationParams) -> Result<f64> {
    Ok(calibrate_projections(&projections(stack)?, params)?.fixed_intensity)
}
