//! In-line hologram simulation, Fresnel reconstruction and multi-particle
//! autofocusing.
//!
//! The usual flow is [`simulator::sample_field`] to get a ground truth,
//! [`propagation::synthesize_hologram`] to render it, and
//! [`autofocus::autofocus_pipeline`] to locate the particles again.
//! [`evaluate::evaluate`] compares detections with truth.

pub mod autofocus;
pub mod calibration;
pub mod config;
pub mod error;
pub mod evaluate;
pub mod fft;
pub mod field;
pub mod image;
pub mod io;
pub mod morphology;
mod parallel;
pub mod propagation;
pub mod resolution;
pub mod simulator;

pub use autofocus::{autofocus_pipeline, AutofocusOutcome, DetectorParams, ParticleDetection};
pub use calibration::{find_constrained_intensity, CalibrationParams};
pub use config::OpticalConfig;
pub use error::{Error, Result};
pub use field::{ComplexField, HologramFrame};
pub use image::{BinaryImage, GrayImage, LabelMap};
pub use simulator::{Particle, ParticleField};
pub use rustfft::num_complex::Complex64;
