use rustfft::num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::OpticalConfig;
use crate::error::{param, Error, Result};
use crate::field::{ComplexField, HologramFrame};
use crate::image::GrayImage;
use crate::parallel::par_map;
use crate::propagation::Propagator;

/// Which real map of the hologram is back-propagated.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReconstructionSource {
    /// The recorded intensity `I`.
    #[default]
    Intensity,
    /// The amplitude `sqrt(I)`.
    Amplitude,
}

/// Position of one slice in the stack.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliceMeta {
    pub slice_index: usize,
    /// `slice_index - (count - 1)`: 0 at `dis_end`, negative toward `dis1`.
    pub reim_index: isize,
    pub distance: f64,
}

/// Amplitude slices normalized by the stack-wide maximum.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructionStack {
    slices: Vec<GrayImage>,
    distances: Vec<f64>,
    raw_max: f64,
}

impl ReconstructionStack {
    pub fn new(slices: Vec<GrayImage>, distances: Vec<f64>) -> Result<Self> {
        if slices.is_empty() {
            return Err(param("stack has no slices"));
        }
        if slices.len() != distances.len() {
            return Err(param(format!(
                "{} slices but {} distances",
                slices.len(),
                distances.len()
            )));
        }
        if let Some(bad) = slices.iter().find(|s| s.dims() != slices[0].dims()) {
            return Err(Error::Dimension {
                expected: slices[0].dims(),
                actual: bad.dims(),
            });
        }
        if distances.windows(2).any(|w| w[1] <= w[0]) {
            return Err(param("stack distances must be strictly increasing"));
        }
        Ok(Self { slices, distances, raw_max: 1.0 })
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn slices(&self) -> &[GrayImage] {
        &self.slices
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    /// Maximum raw amplitude the slices were divided by.
    pub fn raw_max(&self) -> f64 {
        self.raw_max
    }

    pub fn meta(&self, slice_index: usize) -> SliceMeta {
        slice_meta(slice_index, self.len(), self.distances[slice_index])
    }
}

pub(crate) fn slice_meta(slice_index: usize, count: usize, distance: f64) -> SliceMeta {
    SliceMeta {
        slice_index,
        reim_index: slice_index as isize - (count as isize - 1),
        distance,
    }
}

/// Back-propagation of one hologram to any distance, sharing a single
/// forward transform.
#[derive(Debug, Clone)]
pub struct StackPlan {
    propagator: Propagator,
    spectrum: Vec<Complex64>,
    distances: Vec<f64>,
}

impl StackPlan {
    pub fn new(holo: &HologramFrame, config: &OpticalConfig, source: ReconstructionSource) -> Result<Self> {
        let distances = config.distances()?;
        if holo.dims() != (config.grid_rows, config.grid_cols) {
            return Err(Error::Dimension {
                expected: (config.grid_rows, config.grid_cols),
                actual: holo.dims(),
            });
        }
        let propagator = Propagator::for_config(config)?;
        let values: Vec<f64> = match source {
            ReconstructionSource::Intensity => holo.intensity().to_vec(),
            ReconstructionSource::Amplitude => holo.intensity().iter().map(|v| v.sqrt()).collect(),
        };
        let field = ComplexField::from_real(holo.rows(), holo.cols(), config.pixel_pitch, &values)?;
        let spectrum = propagator.forward_spectrum(&field)?;
        Ok(Self { propagator, spectrum, distances })
    }

    pub fn distances(&self) -> &[f64] {
        &self.distances
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    /// Un-normalized amplitude `|propagate(source, -z)|` at `z`.
    pub fn amplitude_at(&self, z: f64) -> Result<GrayImage> {
        let field = self.propagator.propagate_spectrum(&self.spectrum, -z)?;
        let (rows, cols) = field.dims();
        GrayImage::new(rows, cols, field.amplitude())
    }

    pub fn raw_slice(&self, slice_index: usize) -> Result<GrayImage> {
        self.amplitude_at(self.distances[slice_index])
    }

    /// Largest raw amplitude over all slices.
    pub fn stack_max(&self) -> Result<f64> {
        let indices: Vec<usize> = (0..self.len()).collect();
        let maxima = par_map(&indices, |&i| self.raw_slice(i).map(|s| s.max()));
        maxima.into_iter().try_fold(0.0, |acc, m| Ok(f64::max(acc, m?)))
    }

    pub fn normalized_slice(&self, slice_index: usize, stack_max: f64) -> Result<GrayImage> {
        let raw = self.raw_slice(slice_index)?;
        Ok(normalize(raw, stack_max))
    }
}

pub(crate) fn normalize(raw: GrayImage, stack_max: f64) -> GrayImage {
    if stack_max > 0.0 {
        raw.map(|v| v / stack_max)
    } else {
        raw
    }
}

/// Reconstructs `[dis1, dis_end]` every `depth_spacing` and normalizes the
/// slices by the stack-wide maximum amplitude.
pub fn reconstruct_stack(
    holo: &HologramFrame,
    config: &OpticalConfig,
    source: ReconstructionSource,
) -> Result<ReconstructionStack> {
    config.validate()?;
    let plan = StackPlan::new(holo, config, source)?;
    let indices: Vec<usize> = (0..plan.len()).collect();
    let raw: Vec<GrayImage> = par_map(&indices, |&i| plan.raw_slice(i)).into_iter().collect::<Result<_>>()?;
    let stack_max = raw.iter().map(GrayImage::max).fold(0.0, f64::max);
    let slices = raw.into_iter().map(|s| normalize(s, stack_max)).collect();
    let mut stack = ReconstructionStack::new(slices, plan.distances.clone())?;
    stack.raw_max = stack_max;
    Ok(stack)
}
