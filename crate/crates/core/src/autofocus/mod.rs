//! Multi-particle autofocusing.
//!
//! A hologram is back-propagated to every distance in `[dis1, dis_end]`.
//! Each slice is segmented and regions that are dark enough and of particle
//! size become candidates (matrix M). Candidates of one particle recur on
//! neighbouring slices; the selection pass groups them with a lateral window
//! and an axial window of one axial-resolution cell and keeps the member with
//! the smallest `mean_intensity * equiv_diameter` (matrix M_new).

mod candidates;
mod select;
mod stack;

pub use candidates::{
    collect_candidates, detect_candidates, segment_slice, CandidateMatrix, CandidateRecord, DetectorParams,
    FocalStatus,
};
pub use select::{gather_group, select_focused, select_focused_traced, SelectionGroup};
pub use stack::{reconstruct_stack, ReconstructionSource, ReconstructionStack, SliceMeta, StackPlan};

use serde::{Deserialize, Serialize};

use crate::config::OpticalConfig;
use crate::error::Result;
use crate::field::HologramFrame;
use crate::parallel::par_map;
use crate::resolution::{axial_resolution, axial_slice_count};

/// A located particle, metres. Lateral coordinates are pixel centres times
/// the pixel pitch (unit magnification).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParticleDetection {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub diameter: f64,
}

impl ParticleDetection {
    pub fn from_record(record: &CandidateRecord, pixel_pitch: f64) -> Self {
        Self {
            x: record.centroid_x * pixel_pitch,
            y: record.centroid_y * pixel_pitch,
            z: record.distance,
            diameter: record.equiv_diameter,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AutofocusOutcome {
    /// Matrix M with final focal statuses.
    pub candidates: CandidateMatrix,
    /// Matrix M_new.
    pub focused: Vec<CandidateRecord>,
    pub detections: Vec<ParticleDetection>,
    pub axial_resolution: f64,
    pub axi_slice_num: usize,
    pub slice_count: usize,
}

/// Axial resolution used for grouping: the override if set, otherwise the
/// value at the near end of the reconstruction range.
pub fn grouping_resolution(config: &OpticalConfig, params: &DetectorParams) -> Result<f64> {
    match params.axial_resolution {
        Some(a) => Ok(a),
        None => axial_resolution(config, config.dis1),
    }
}

pub fn grouping_slice_count(config: &OpticalConfig, params: &DetectorParams) -> Result<usize> {
    axial_slice_count(grouping_resolution(config, params)?, config.depth_spacing)
}

/// Selection followed by conversion of M_new into detections.
pub fn finish(
    mut candidates: CandidateMatrix,
    config: &OpticalConfig,
    params: &DetectorParams,
    slice_count: usize,
) -> Result<AutofocusOutcome> {
    let axial_resolution = grouping_resolution(config, params)?;
    let axi_slice_num = axial_slice_count(axial_resolution, config.depth_spacing)?;
    let focused = select_focused(&mut candidates, axi_slice_num, params.centroid_window_px)?;
    let detections = focused
        .iter()
        .map(|r| ParticleDetection::from_record(r, config.pixel_pitch))
        .collect();
    Ok(AutofocusOutcome {
        candidates,
        focused,
        detections,
        axial_resolution,
        axi_slice_num,
        slice_count,
    })
}

/// Reconstruct, collect candidates and select focused particles.
///
/// Slices are generated twice (once for the stack-wide maximum, once for
/// detection) so the whole stack is never held in memory; the result equals
/// `reconstruct_stack` followed by `collect_candidates` and `select_focused`.
pub fn autofocus_pipeline(
    holo: &HologramFrame,
    config: &OpticalConfig,
    params: &DetectorParams,
) -> Result<AutofocusOutcome> {
    config.validate()?;
    params.validate()?;
    let plan = StackPlan::new(holo, config, params.source)?;
    let stack_max = plan.stack_max()?;
    let count = plan.len();
    let indices: Vec<usize> = (0..count).collect();
    let per_slice = par_map(&indices, |&i| -> Result<Vec<CandidateRecord>> {
        let slice = plan.normalized_slice(i, stack_max)?;
        let meta = stack::slice_meta(i, count, plan.distances()[i]);
        detect_candidates(&slice, meta, config, params)
    });
    let mut records = Vec::new();
    for r in per_slice {
        records.extend(r?);
    }
    finish(CandidateMatrix::new(records), config, params, count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::GrayImage;

    fn dark_disk(n: usize, cr: f64, cc: f64, radius: f64, inside: f64) -> GrayImage {
        GrayImage::from_fn(n, n, |r, c| {
            let d = ((r as f64 - cr).powi(2) + (c as f64 - cc).powi(2)).sqrt();
            if d <= radius {
                inside
            } else {
                1.0
            }
        })
    }

    fn meta() -> SliceMeta {
        SliceMeta { slice_index: 3, reim_index: -2, distance: 0.032 }
    }

    #[test]
    fn blank_slice_has_no_candidates() {
        let cfg = OpticalConfig::new(64, 64);
        let out = detect_candidates(&GrayImage::filled(64, 64, 1.0), meta(), &cfg, &DetectorParams::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn dark_disk_kept_and_bright_artifact_rejected() {
        let cfg = OpticalConfig::new(96, 96);
        // 55 um at 3.45 um/px is a radius of about 8 px.
        let r = 55e-6 / 3.45e-6 / 2.0;
        let mut img = dark_disk(96, 30.0, 30.0, r, 0.2);
        let bright = dark_disk(96, 65.0, 65.0, r, 0.9);
        for (a, b) in img.data_mut().iter_mut().zip(bright.data()) {
            *a = a.min(*b);
        }
        let out = detect_candidates(&img, meta(), &cfg, &DetectorParams::default()).unwrap();
        assert_eq!(out.len(), 1, "{out:?}");
        let c = &out[0];
        assert!((c.centroid_x - 30.0).abs() < 0.5 && (c.centroid_y - 30.0).abs() < 0.5);
        assert_eq!(c.metric, c.mean_intensity * c.equiv_diameter);
        assert_eq!(c.focal_status, FocalStatus::Untraversed);
        assert_eq!((c.slice_index, c.reim_index, c.distance), (3, -2, 0.032));
    }

    #[test]
    fn undersized_region_excluded() {
        let cfg = OpticalConfig::new(64, 64).with_diameter_gate(50e-6, 62e-6);
        let r = 30e-6 / 3.45e-6 / 2.0;
        let img = dark_disk(64, 30.0, 30.0, r, 0.1);
        let out = detect_candidates(&img, meta(), &cfg, &DetectorParams::default()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn reported_table_index_convention() {
        let cfg = OpticalConfig::new(8, 8).with_range(31e-3, 34e-3, 50e-6);
        let distances = cfg.distances().unwrap();
        let n = distances.len();
        let slices = vec![GrayImage::filled(8, 8, 1.0); n];
        let stack = ReconstructionStack::new(slices, distances).unwrap();
        let m = stack.meta(17);
        assert_eq!(m.reim_index, -43);
        assert!((m.distance - 31.85e-3).abs() < 1e-12);
        assert_eq!(stack.meta(n - 1).reim_index, 0);
    }
}
