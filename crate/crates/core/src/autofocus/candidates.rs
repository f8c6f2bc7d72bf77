use serde::{Deserialize, Serialize};

use crate::config::OpticalConfig;
use crate::error::{param, Result};
use crate::image::{GrayImage, LabelMap};
use crate::morphology::{canny, dilate, erode, fill_holes, gaussian_blur, label_components, region_props};
use crate::parallel::par_map;

use super::stack::{ReconstructionStack, ReconstructionSource, SliceMeta};

/// Segmentation and grouping knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    pub gaussian_sigma: f64,
    pub canny_low: f64,
    pub canny_high: f64,
    pub morph_radius: usize,
    /// Candidates closer than this in both x and y (pixels) are the same
    /// particle during selection.
    pub centroid_window_px: f64,
    pub source: ReconstructionSource,
    /// Overrides the axial resolution computed at `dis1`.
    pub axial_resolution: Option<f64>,
}

impl Default for DetectorParams {
    fn default() -> Self {
        Self {
            gaussian_sigma: 1.0,
            canny_low: 0.7,
            canny_high: 0.9,
            morph_radius: 1,
            centroid_window_px: 6.0,
            source: ReconstructionSource::Intensity,
            axial_resolution: None,
        }
    }
}

impl DetectorParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.gaussian_sigma >= 0.0 && self.gaussian_sigma.is_finite()) {
            return Err(param(format!("gaussian_sigma must be >= 0, got {}", self.gaussian_sigma)));
        }
        if !(0.0 <= self.canny_low && self.canny_low < self.canny_high && self.canny_high <= 1.0) {
            return Err(param(format!(
                "canny quantiles must satisfy 0 <= low < high <= 1, got ({}, {})",
                self.canny_low, self.canny_high
            )));
        }
        if self.morph_radius == 0 {
            return Err(param("morph_radius must be at least 1 pixel"));
        }
        if self.centroid_window_px.is_nan() || self.centroid_window_px <= 0.0 {
            return Err(param("centroid_window_px must be positive"));
        }
        if let Some(a) = self.axial_resolution {
            if !(a > 0.0 && a.is_finite()) {
                return Err(param(format!("axial_resolution override must be positive, got {a}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum FocalStatus {
    #[default]
    Untraversed = 0,
    Focused = 1,
    Traversed = 2,
}

/// One candidate focused particle (a column of matrix M).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    /// ① mean normalized amplitude over the region
    pub mean_intensity: f64,
    /// ② equivalent diameter, metres
    pub equiv_diameter: f64,
    /// ③ centroid column, pixels
    pub centroid_x: f64,
    /// ④ centroid row, pixels
    pub centroid_y: f64,
    /// ⑤ = ① · ②
    pub metric: f64,
    /// ⑥ reconstruction distance, metres
    pub distance: f64,
    /// ⑦
    pub reim_index: isize,
    pub slice_index: usize,
    /// ⑧
    pub focal_status: FocalStatus,
}

/// Candidates ordered by slice, then centroid raster order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CandidateMatrix {
    records: Vec<CandidateRecord>,
}

impl CandidateMatrix {
    /// Sorts `records` into matrix order.
    pub fn new(mut records: Vec<CandidateRecord>) -> Self {
        records.sort_by(|a, b| {
            a.slice_index
                .cmp(&b.slice_index)
                .then(a.centroid_y.total_cmp(&b.centroid_y))
                .then(a.centroid_x.total_cmp(&b.centroid_x))
        });
        Self { records }
    }

    pub fn records(&self) -> &[CandidateRecord] {
        &self.records
    }

    pub(crate) fn records_mut(&mut self) -> &mut [CandidateRecord] {
        &mut self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn reset_status(&mut self) {
        for r in &mut self.records {
            r.focal_status = FocalStatus::Untraversed;
        }
    }
}

/// Blur, Canny, hole filling, erosion and dilation, then 8-connected labels.
pub fn segment_slice(slice: &GrayImage, params: &DetectorParams) -> Result<LabelMap> {
    let smooth = gaussian_blur(slice, params.gaussian_sigma)?;
    let edges = canny(&smooth, params.canny_low, params.canny_high)?;
    let filled = fill_holes(&edges);
    let opened = dilate(&erode(&filled, params.morph_radius), params.morph_radius);
    Ok(label_components(&opened))
}

/// Regions of one normalized slice whose mean amplitude is below
/// `fixed_intensity` and whose equivalent diameter is within
/// `[min_dia, max_dia]`.
pub fn detect_candidates(
    slice: &GrayImage,
    meta: SliceMeta,
    config: &OpticalConfig,
    params: &DetectorParams,
) -> Result<Vec<CandidateRecord>> {
    let labels = segment_slice(slice, params)?;
    let props = region_props(&labels, slice)?;
    Ok(props
        .into_iter()
        .filter_map(|p| {
            let diameter = p.equivalent_diameter * config.pixel_pitch;
            let keep = p.mean_intensity < config.fixed_intensity
                && diameter >= config.min_dia
                && diameter <= config.max_dia;
            keep.then_some(CandidateRecord {
                mean_intensity: p.mean_intensity,
                equiv_diameter: diameter,
                centroid_x: p.centroid_x,
                centroid_y: p.centroid_y,
                metric: p.mean_intensity * diameter,
                distance: meta.distance,
                reim_index: meta.reim_index,
                slice_index: meta.slice_index,
                focal_status: FocalStatus::Untraversed,
            })
        })
        .collect())
}

/// Candidates of every slice, in matrix order.
pub fn collect_candidates(
    stack: &ReconstructionStack,
    config: &OpticalConfig,
    params: &DetectorParams,
) -> Result<CandidateMatrix> {
    params.validate()?;
    let indices: Vec<usize> = (0..stack.len()).collect();
    let per_slice = par_map(&indices, |&i| {
        detect_candidates(&stack.slices()[i], stack.meta(i), config, params)
    });
    let mut records = Vec::new();
    for r in per_slice {
        records.extend(r?);
    }
    Ok(CandidateMatrix::new(records))
}
