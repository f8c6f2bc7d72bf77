//! Ground-truth particle scenes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::OpticalConfig;
use crate::error::{ensure_finite, param, Error, Result};

/// One spherical particle: lateral centre `(x, y)` in the hologram plane,
/// distance `z` from the sensor, all in metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Particle {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub diameter: f64,
}

/// Lateral extent `[0, width] x [0, height]` and depth range `[z_min, z_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Volume {
    pub width: f64,
    pub height: f64,
    pub z_min: f64,
    pub z_max: f64,
}

impl Volume {
    /// The sensor footprint of `config`, between `z_min` and `z_max`.
    pub fn for_config(config: &OpticalConfig, z_min: f64, z_max: f64) -> Self {
        Self {
            width: config.grid_cols as f64 * config.pixel_pitch,
            height: config.grid_rows as f64 * config.pixel_pitch,
            z_min,
            z_max,
        }
    }

    pub fn depth(&self) -> f64 {
        self.z_max - self.z_min
    }

    pub fn contains(&self, p: &Particle) -> bool {
        (0.0..=self.width).contains(&p.x)
            && (0.0..=self.height).contains(&p.y)
            && (self.z_min..=self.z_max).contains(&p.z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleField {
    particles: Vec<Particle>,
    volume: Volume,
    seed: u64,
}

impl ParticleField {
    pub fn new(particles: Vec<Particle>, volume: Volume, seed: u64) -> Self {
        Self { particles, volume, seed }
    }

    pub fn particles(&self) -> &[Particle] {
        &self.particles
    }

    pub fn volume(&self) -> &Volume {
        &self.volume
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn len(&self) -> usize {
        self.particles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.particles.is_empty()
    }
}

/// How particle depths are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum DepthProfile {
    /// Uniform over the volume's depth range.
    Uniform,
    /// Each particle sits on one of these planes, chosen uniformly.
    Planes(Vec<f64>),
}

/// Parameters for [`sample_field`].
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingSpec {
    pub count: usize,
    pub volume: Volume,
    pub diameter_range: (f64, f64),
    pub pixel_pitch: f64,
    /// Minimum Chebyshev distance between centres, in pixels.
    pub min_lateral_sep_px: f64,
    pub min_axial_sep: f64,
    /// When false, particles may overlap freely.
    pub enforce_separation: bool,
    pub depth: DepthProfile,
    pub seed: u64,
}

impl SamplingSpec {
    /// Uniform sampling over the sensor footprint with the 6 px lateral /
    /// 2.5 mm axial resolvability limits.
    pub fn new(count: usize, config: &OpticalConfig, z_min: f64, z_max: f64, seed: u64) -> Self {
        Self {
            count,
            volume: Volume::for_config(config, z_min, z_max),
            diameter_range: (config.min_dia, config.max_dia),
            pixel_pitch: config.pixel_pitch,
            min_lateral_sep_px: 6.0,
            min_axial_sep: 2.5e-3,
            enforce_separation: true,
            depth: DepthProfile::Uniform,
            seed,
        }
    }

    pub fn with_planes(mut self, planes: Vec<f64>) -> Self {
        self.depth = DepthProfile::Planes(planes);
        self
    }

    pub fn with_diameters(mut self, min: f64, max: f64) -> Self {
        self.diameter_range = (min, max);
        self
    }

    pub fn with_separation(mut self, lateral_px: f64, axial: f64) -> Self {
        self.min_lateral_sep_px = lateral_px;
        self.min_axial_sep = axial;
        self
    }

    pub fn without_separation(mut self) -> Self {
        self.enforce_separation = false;
        self
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.diameter_range;
        ensure_finite("diameter_range.0", lo)?;
        ensure_finite("diameter_range.1", hi)?;
        if !(lo > 0.0 && hi >= lo) {
            return Err(param(format!("invalid diameter range [{lo}, {hi}]")));
        }
        let v = &self.volume;
        if !(v.width > 0.0 && v.height > 0.0 && v.z_min > 0.0 && v.z_max >= v.z_min) {
            return Err(param(format!("invalid volume {v:?}")));
        }
        if hi >= v.width || hi >= v.height {
            return Err(Error::Sampling(format!(
                "particles of {hi} m do not fit in a {} x {} m footprint",
                v.width, v.height
            )));
        }
        if let DepthProfile::Planes(planes) = &self.depth {
            if planes.is_empty() {
                return Err(param("depth profile has no planes"));
            }
            if let Some(z) = planes.iter().find(|z| !(v.z_min..=v.z_max).contains(*z)) {
                return Err(param(format!("plane {z} lies outside the volume depth range")));
            }
        }
        if self.min_lateral_sep_px < 0.0 || self.min_axial_sep < 0.0 {
            return Err(param("separations must be non-negative"));
        }
        Ok(())
    }
}

const ATTEMPTS_PER_PARTICLE: usize = 20_000;

/// Rejection-samples a particle field. Every particle's disk lies inside the
/// lateral footprint; with separation enforced, any two particles are at
/// least `min_lateral_sep_px` apart laterally or `min_axial_sep` apart in
/// depth.
pub fn sample_field(spec: &SamplingSpec) -> Result<ParticleField> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let v = spec.volume;
    let (dmin, dmax) = spec.diameter_range;
    let lateral = spec.min_lateral_sep_px * spec.pixel_pitch;
    let mut particles: Vec<Particle> = Vec::with_capacity(spec.count);

    for index in 0..spec.count {
        let mut placed = false;
        for _ in 0..ATTEMPTS_PER_PARTICLE {
            let diameter = if dmax > dmin { rng.random_range(dmin..=dmax) } else { dmin };
            let r = diameter / 2.0;
            let x = rng.random_range(r..=v.width - r);
            let y = rng.random_range(r..=v.height - r);
            let z = match &spec.depth {
                DepthProfile::Uniform if v.z_max > v.z_min => rng.random_range(v.z_min..=v.z_max),
                DepthProfile::Uniform => v.z_min,
                DepthProfile::Planes(planes) => planes[rng.random_range(0..planes.len())],
            };
            let candidate = Particle { x, y, z, diameter };
            let clear = !spec.enforce_separation
                || particles.iter().all(|p| {
                    (p.x - x).abs().max((p.y - y).abs()) >= lateral || (p.z - z).abs() >= spec.min_axial_sep
                });
            if clear {
                particles.push(candidate);
                placed = true;
                break;
            }
        }
        if !placed {
            return Err(Error::Sampling(format!(
                "could not place particle {index} of {} after {ATTEMPTS_PER_PARTICLE} attempts",
                spec.count
            )));
        }
    }
    Ok(ParticleField::new(particles, v, spec.seed))
}

/// Expected particle count from a seeding concentration (particles/ml) and an
/// illuminated volume (ml).
pub fn expected_count(concentration_per_ml: f64, illuminated_volume_ml: f64) -> Result<f64> {
    ensure_finite("concentration", concentration_per_ml)?;
    ensure_finite("illuminated volume", illuminated_volume_ml)?;
    if concentration_per_ml < 0.0 || illuminated_volume_ml < 0.0 {
        return Err(param("concentration and volume must be non-negative"));
    }
    Ok(concentration_per_ml * illuminated_volume_ml)
}

/// Illuminated volume in ml of a sensor footprint times a cuvette depth.
pub fn illuminated_volume_ml(width_m: f64, height_m: f64, depth_m: f64) -> f64 {
    // 1 ml = 1 cm^3 = 1e-6 m^3
    width_m * height_m * depth_m * 1e6
}
