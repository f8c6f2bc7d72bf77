use holofocus::autofocus::{autofocus_pipeline, DetectorParams, ParticleDetection, ReconstructionSource, StackPlan};
use holofocus::evaluate::{evaluate, EvaluationReport, MatchTolerances};
use holofocus::propagation::synthesize_hologram;
use holofocus::simulator::{sample_field, ParticleField, SamplingSpec};
use holofocus::{HologramFrame, OpticalConfig, Result};

pub const GRID: usize = 256;
pub const Z_MIN: f64 = 31e-3;
pub const Z_MAX: f64 = 34e-3;

/// A small simulated hologram with its ground truth and a reusable
/// back-propagation plan.
pub struct Scene {
    config: OpticalConfig,
    field: ParticleField,
    holo: HologramFrame,
    plan: StackPlan,
}

impl Scene {
    pub fn new(particles: usize, seed: u64, noise: f64) -> Result<Self> {
        let config = OpticalConfig::new(GRID, GRID)
            .with_range(Z_MIN, Z_MAX, 100e-6)
            .with_diameter_gate(43e-6, 69e-6)
            .with_aperture_height(0.875e-3);
        let spec = SamplingSpec::new(particles, &config, 31.5e-3, 33.5e-3, seed)
            .with_diameters(50e-6, 62e-6)
            .with_separation(20.0, 2.5e-3);
        let field = sample_field(&spec)?;
        let holo = synthesize_hologram(&field, &config, noise)?;
        let plan = StackPlan::new(&holo, &config, ReconstructionSource::Intensity)?;
        Ok(Self { config, field, holo, plan })
    }

    pub fn config(&self) -> &OpticalConfig {
        &self.config
    }

    pub fn field(&self) -> &ParticleField {
        &self.field
    }

    pub fn hologram_rgba(&self) -> Vec<u8> {
        rgba(self.holo.intensity(), self.holo.max())
    }

    /// Amplitude at `z`, scaled to its own maximum.
    pub fn refocus_rgba(&self, z: f64) -> Result<Vec<u8>> {
        let slice = self.plan.amplitude_at(z)?;
        Ok(rgba(slice.data(), slice.max()))
    }

    pub fn detect(&self) -> Result<(Vec<ParticleDetection>, EvaluationReport)> {
        let outcome = autofocus_pipeline(&self.holo, &self.config, &DetectorParams::default())?;
        let report = evaluate(
            self.field.particles(),
            &outcome.detections,
            &MatchTolerances::for_config(&self.config)?,
        )?;
        Ok((outcome.detections, report))
    }
}

fn rgba(values: &[f64], max: f64) -> Vec<u8> {
    let scale = if max > 0.0 { 255.0 / max } else { 0.0 };
    let mut out = Vec::with_capacity(values.len() * 4);
    for &v in values {
        let g = (v * scale).round().clamp(0.0, 255.0) as u8;
        out.extend_from_slice(&[g, g, g, 255]);
    }
    out
}
