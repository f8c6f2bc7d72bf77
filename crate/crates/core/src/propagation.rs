//! Fresnel transfer-function propagation and in-line hologram synthesis.
//!
//! A field is propagated over `z` by multiplying its spectrum with
//! `exp(jkz) * exp(-j*pi*lambda*z*(fx^2 + fy^2))`. Negative `z` propagates
//! backwards. The transform pair is unitary, so propagation preserves the
//! L2 norm and `propagate(-z)` exactly inverts `propagate(z)`.
//!
//! Holograms follow the plane-wave in-line model: each particle is an opaque
//! disk whose object field `-disk` is carried to the sensor and summed, and
//! the sensor records `|1 + H|^2 + n`.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rustfft::num_complex::Complex64;

use crate::config::OpticalConfig;
use crate::error::{ensure_finite, ensure_positive, param, Error, Result};
use crate::fft::{frequency, Fft2};
use crate::field::{ComplexField, HologramFrame};
use crate::simulator::{Particle, ParticleField};

/// Stream offset so hologram noise never shares a sequence with placement.
const NOISE_STREAM: u64 = 0x6e6f_6973_6521;

/// The chirp `exp(-j*pi*lambda*z*(fx^2 + fy^2))` without the `exp(jkz)`
/// carrier, in unshifted FFT order.
fn fresnel_chirp(rows: usize, cols: usize, pixel_pitch: f64, wavelength: f64, z: f64) -> Vec<Complex64> {
    let scale = -PI * wavelength * z;
    let fx2: Vec<f64> = (0..cols).map(|c| frequency(c, cols, pixel_pitch).powi(2)).collect();
    let mut out = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let fy2 = frequency(r, rows, pixel_pitch).powi(2);
        out.extend(fx2.iter().map(|&fx2| Complex64::from_polar(1.0, scale * (fx2 + fy2))));
    }
    out
}

/// `exp(jkz)`. The phase is hundreds of thousands of radians at millimetre
/// distances, so only the fractional number of wavelengths is kept, with
/// the division remainder recovered exactly.
fn carrier(wavelength: f64, z: f64) -> Complex64 {
    let q = z / wavelength;
    let rem = (-q).mul_add(wavelength, z) / wavelength;
    let cycles = (q - q.floor()) + rem;
    Complex64::from_polar(1.0, 2.0 * PI * cycles)
}

fn check_params(pixel_pitch: f64, wavelength: f64, z: f64) -> Result<()> {
    ensure_positive("pixel_pitch", pixel_pitch)?;
    ensure_positive("wavelength", wavelength)?;
    ensure_finite("z", z)
}

/// Fresnel transfer function for a `rows x cols` grid, DC at index 0.
pub fn transfer_function(
    rows: usize,
    cols: usize,
    pixel_pitch: f64,
    wavelength: f64,
    z: f64,
) -> Result<ComplexField> {
    check_params(pixel_pitch, wavelength, z)?;
    if rows < 2 || cols < 2 {
        return Err(param(format!("grid must be at least 2x2, got {rows}x{cols}")));
    }
    let phase = carrier(wavelength, z);
    let mut data = fresnel_chirp(rows, cols, pixel_pitch, wavelength, z);
    for v in &mut data {
        *v *= phase;
    }
    ComplexField::new(rows, cols, pixel_pitch, data)
}

/// Reusable propagation plan for one grid.
#[derive(Debug, Clone)]
pub struct Propagator {
    fft: Fft2,
    pixel_pitch: f64,
    wavelength: f64,
}

impl Propagator {
    pub fn new(rows: usize, cols: usize, pixel_pitch: f64, wavelength: f64) -> Result<Self> {
        check_params(pixel_pitch, wavelength, 0.0)?;
        if rows < 2 || cols < 2 {
            return Err(param(format!("grid must be at least 2x2, got {rows}x{cols}")));
        }
        Ok(Self {
            fft: Fft2::new(rows, cols),
            pixel_pitch,
            wavelength,
        })
    }

    pub fn for_config(config: &OpticalConfig) -> Result<Self> {
        Self::new(config.grid_rows, config.grid_cols, config.pixel_pitch, config.wavelength)
    }

    pub fn dims(&self) -> (usize, usize) {
        self.fft.dims()
    }

    pub fn wavelength(&self) -> f64 {
        self.wavelength
    }

    pub fn pixel_pitch(&self) -> f64 {
        self.pixel_pitch
    }

    pub(crate) fn fft(&self) -> &Fft2 {
        &self.fft
    }

    fn check_field(&self, field: &ComplexField) -> Result<()> {
        if field.dims() != self.dims() {
            return Err(Error::Dimension {
                expected: self.dims(),
                actual: field.dims(),
            });
        }
        if (field.pixel_pitch() - self.pixel_pitch).abs() > 1e-12 * self.pixel_pitch {
            return Err(param(format!(
                "field pitch {} does not match propagator pitch {}",
                field.pixel_pitch(),
                self.pixel_pitch
            )));
        }
        Ok(())
    }

    pub fn forward_spectrum(&self, field: &ComplexField) -> Result<Vec<Complex64>> {
        self.check_field(field)?;
        let mut spectrum = field.data().to_vec();
        self.fft.forward(&mut spectrum);
        Ok(spectrum)
    }

    /// Inverse-transforms `spectrum * exp(jkz) * chirp(z)` without touching
    /// `spectrum`.
    pub fn propagate_spectrum(&self, spectrum: &[Complex64], z: f64) -> Result<ComplexField> {
        ensure_finite("z", z)?;
        let (rows, cols) = self.dims();
        if spectrum.len() != rows * cols {
            return Err(param(format!(
                "spectrum has {} samples, expected {}",
                spectrum.len(),
                rows * cols
            )));
        }
        let phase = carrier(self.wavelength, z);
        let chirp = fresnel_chirp(rows, cols, self.pixel_pitch, self.wavelength, z);
        let mut data: Vec<Complex64> = spectrum
            .iter()
            .zip(&chirp)
            .map(|(s, h)| s * h * phase)
            .collect();
        self.fft.inverse(&mut data);
        ComplexField::new(rows, cols, self.pixel_pitch, data)
    }

    pub fn propagate(&self, field: &ComplexField, z: f64) -> Result<ComplexField> {
        let spectrum = self.forward_spectrum(field)?;
        self.propagate_spectrum(&spectrum, z)
    }
}

/// Propagates `field` over `z` (negative for backward propagation).
pub fn propagate(field: &ComplexField, wavelength: f64, z: f64) -> Result<ComplexField> {
    Propagator::new(field.rows(), field.cols(), field.pixel_pitch(), wavelength)?.propagate(field, z)
}

/// Pixel index of a lateral coordinate, snapped to the nearest grid point.
pub fn nearest_pixel(coord: f64, pixel_pitch: f64) -> isize {
    (coord / pixel_pitch).round() as isize
}

/// Binary disk mask for one particle, centred on the nearest grid point.
/// Pixels that would fall outside the grid are dropped.
pub fn rasterize_disk(particle: &Particle, rows: usize, cols: usize, pixel_pitch: f64) -> Vec<(usize, usize)> {
    let cx = nearest_pixel(particle.x, pixel_pitch);
    let cy = nearest_pixel(particle.y, pixel_pitch);
    let radius = particle.diameter / (2.0 * pixel_pitch);
    let reach = radius.ceil() as isize;
    let r2 = radius * radius;
    let mut pixels = Vec::new();
    for dy in -reach..=reach {
        for dx in -reach..=reach {
            if ((dx * dx + dy * dy) as f64) > r2 {
                continue;
            }
            let (r, c) = (cy + dy, cx + dx);
            if r >= 0 && c >= 0 && (r as usize) < rows && (c as usize) < cols {
                pixels.push((r as usize, c as usize));
            }
        }
    }
    pixels
}

fn check_particle(index: usize, p: &Particle, config: &OpticalConfig) -> Result<()> {
    for (name, v) in [("x", p.x), ("y", p.y), ("z", p.z), ("diameter", p.diameter)] {
        if !v.is_finite() {
            return Err(param(format!("particle {index}: {name} is not finite")));
        }
    }
    if p.z <= 0.0 {
        return Err(param(format!("particle {index}: z must be positive, got {}", p.z)));
    }
    let width = config.grid_cols as f64 * config.pixel_pitch;
    let height = config.grid_rows as f64 * config.pixel_pitch;
    let cx = nearest_pixel(p.x, config.pixel_pitch);
    let cy = nearest_pixel(p.y, config.pixel_pitch);
    if p.x < 0.0 || p.y < 0.0 || cx >= config.grid_cols as isize || cy >= config.grid_rows as isize {
        return Err(Error::Placement {
            index,
            reason: format!(
                "centre ({}, {}) m lies outside the {width} x {height} m grid",
                p.x, p.y
            ),
        });
    }
    if p.diameter / config.pixel_pitch < 2.0 {
        return Err(param(format!(
            "particle {index}: diameter {} m is below two pixels",
            p.diameter
        )));
    }
    Ok(())
}

/// Scattered field `H` at the sensor, relative to the unit plane-wave
/// reference. The reference travels the same distance as each particle's
/// wave, so the common `exp(jkz)` carrier cancels.
pub fn object_field(particles: &ParticleField, config: &OpticalConfig) -> Result<ComplexField> {
    config.validate()?;
    let propagator = Propagator::for_config(config)?;
    object_field_with(&propagator, particles.particles(), config)
}

pub(crate) fn object_field_with(
    propagator: &Propagator,
    particles: &[Particle],
    config: &OpticalConfig,
) -> Result<ComplexField> {
    let (rows, cols) = (config.grid_rows, config.grid_cols);
    for (i, p) in particles.iter().enumerate() {
        check_particle(i, p, config)?;
    }
    let mut total = vec![Complex64::new(0.0, 0.0); rows * cols];
    let mut buf = vec![Complex64::new(0.0, 0.0); rows * cols];
    for p in particles {
        buf.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for (r, c) in rasterize_disk(p, rows, cols, config.pixel_pitch) {
            buf[r * cols + c] = Complex64::new(-1.0, 0.0);
        }
        propagator.fft().forward(&mut buf);
        let chirp = fresnel_chirp(rows, cols, config.pixel_pitch, config.wavelength, p.z);
        for ((acc, s), h) in total.iter_mut().zip(&buf).zip(&chirp) {
            *acc += s * h;
        }
    }
    propagator.fft().inverse(&mut total);
    ComplexField::new(rows, cols, config.pixel_pitch, total)
}

/// Records `|1 + H|^2 + n` with `n ~ N(0, noise_level)`, clipped at zero.
/// Noise is seeded from the particle field's seed.
pub fn synthesize_hologram(
    particles: &ParticleField,
    config: &OpticalConfig,
    noise_level: f64,
) -> Result<HologramFrame> {
    ensure_finite("noise_level", noise_level)?;
    if noise_level < 0.0 {
        return Err(param(format!("noise_level must be >= 0, got {noise_level}")));
    }
    let h = object_field(particles, config)?;
    let mut intensity: Vec<f64> = h
        .data()
        .iter()
        .map(|v| (Complex64::new(1.0, 0.0) + v).norm_sqr())
        .collect();
    if noise_level > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(particles.seed() ^ NOISE_STREAM);
        let normal = Normal::new(0.0, noise_level).map_err(|e| param(e.to_string()))?;
        for v in &mut intensity {
            *v = (*v + normal.sample(&mut rng)).max(0.0);
        }
    }
    HologramFrame::new(config.grid_rows, config.grid_cols, config.pixel_pitch, intensity)
}
