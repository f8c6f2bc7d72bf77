#![allow(dead_code)]
pub mod oracles;

use holofocus::autofocus::{CandidateMatrix, CandidateRecord, FocalStatus, ReconstructionStack};
use holofocus::image::GrayImage;
use holofocus::config::OpticalConfig;
use holofocus::field::HologramFrame;
use holofocus::propagation::synthesize_hologram;
use holofocus::simulator::{sample_field, ParticleField, SamplingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const NOISE: f64 = 0.02;

/// Measured equivalent diameters run a few micrometres above truth, so the
/// gate is two pixels wider than the simulated 50-62 um on each side.
pub fn wide_gate(config: OpticalConfig) -> OpticalConfig {
    config.with_diameter_gate(43e-6, 69e-6)
}

/// Effective aperture giving a 2.5 mm axial resolution at 30 mm.
pub const APERTURE: f64 = 0.875e-3;

pub fn scene_config(n: usize, dis1: f64, dis_end: f64, spacing: f64) -> OpticalConfig {
    wide_gate(OpticalConfig::new(n, n).with_range(dis1, dis_end, spacing)).with_aperture_height(APERTURE)
}

/// 17 particles on planes at 32 and 33 mm, well apart laterally.
pub fn two_layer_scene(n: usize, seed: u64) -> (OpticalConfig, ParticleField, HologramFrame) {
    let config = scene_config(n, 31e-3, 34e-3, 50e-6);
    let spec = SamplingSpec::new(17, &config, 32e-3, 33e-3, seed)
        .with_planes(vec![32e-3, 33e-3])
        .with_diameters(50e-6, 62e-6)
        .with_separation(40.0, 2.5e-3);
    let field = sample_field(&spec).unwrap();
    let holo = synthesize_hologram(&field, &config, NOISE).unwrap();
    (config, field, holo)
}

/// About 30 particles uniformly in [30, 33] mm with the resolvability
/// constraints, reconstructed over the same range.
pub fn dense_scene(n: usize, spacing: f64, seed: u64) -> (OpticalConfig, ParticleField, HologramFrame) {
    let config = scene_config(n, 30e-3, 33e-3, spacing);
    let spec = SamplingSpec::new(30, &config, 30e-3, 33e-3, seed).with_diameters(50e-6, 62e-6);
    let field = sample_field(&spec).unwrap();
    let holo = synthesize_hologram(&field, &config, NOISE).unwrap();
    (config, field, holo)
}

pub fn record(x: f64, y: f64, slice: usize, metric: f64) -> CandidateRecord {
    CandidateRecord {
        mean_intensity: metric,
        equiv_diameter: 1.0,
        centroid_x: x,
        centroid_y: y,
        metric,
        distance: 0.03 + slice as f64 * 50e-6,
        reim_index: slice as isize - 60,
        slice_index: slice,
        focal_status: FocalStatus::Untraversed,
    }
}

/// Crowded random matrix: centroids on a quarter-pixel grid in a 40 px box,
/// metrics quantized so that ties occur.
pub fn random_matrix(seed: u64) -> CandidateMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..60);
    let records = (0..n)
        .map(|_| {
            record(
                rng.random_range(0..160) as f64 * 0.25,
                rng.random_range(0..160) as f64 * 0.25,
                rng.random_range(0..40),
                rng.random_range(1..20) as f64 * 0.05,
            )
        })
        .collect();
    CandidateMatrix::new(records)
}

/// Dark disks (0.2 inside, 1.0 outside, 2 px linear edge) each sharpest on
/// its own slice and washed out elsewhere.
pub fn disk_stack() -> ReconstructionStack {
    let centres = [(20.0, 20.0, 6.0), (20.0, 70.0, 8.0), (70.0, 25.0, 7.0), (68.0, 68.0, 9.0), (45.0, 45.0, 5.0)];
    let slices: Vec<GrayImage> = (0..5)
        .map(|s| {
            GrayImage::from_fn(90, 90, |r, c| {
                let mut v: f64 = 1.0;
                for (k, &(cr, cc, radius)) in centres.iter().enumerate() {
                    let d = ((r as f64 - cr).powi(2) + (c as f64 - cc).powi(2)).sqrt();
                    let defocus = (k as f64 - s as f64).abs();
                    let edge = 2.0 + 2.0 * defocus;
                    let depth = 0.8 / (1.0 + defocus);
                    let t = ((d - radius) / edge + 0.5).clamp(0.0, 1.0);
                    v = v.min(1.0 - depth * (1.0 - t));
                }
                v
            })
        })
        .collect();
    ReconstructionStack::new(slices, (0..5).map(|i| 0.03 + i as f64 * 1e-4).collect()).unwrap()
}
