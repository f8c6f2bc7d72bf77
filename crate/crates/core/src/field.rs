use rustfft::num_complex::Complex64;

use crate::error::{ensure_positive, param, Error, Result};

/// Complex amplitude sampled on a uniform `rows x cols` grid, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexField {
    rows: usize,
    cols: usize,
    pixel_pitch: f64,
    data: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(rows: usize, cols: usize, pixel_pitch: f64, data: Vec<Complex64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(param(format!("field must be at least 2x2, got {rows}x{cols}")));
        }
        ensure_positive("pixel_pitch", pixel_pitch)?;
        if data.len() != rows * cols {
            return Err(param(format!(
                "field data has {} samples, expected {}",
                data.len(),
                rows * cols
            )));
        }
        if data.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(param("field contains non-finite samples"));
        }
        Ok(Self { rows, cols, pixel_pitch, data })
    }

    pub fn filled(rows: usize, cols: usize, pixel_pitch: f64, value: Complex64) -> Result<Self> {
        Self::new(rows, cols, pixel_pitch, vec![value; rows * cols])
    }

    pub fn zeros(rows: usize, cols: usize, pixel_pitch: f64) -> Result<Self> {
        Self::filled(rows, cols, pixel_pitch, Complex64::new(0.0, 0.0))
    }

    /// Lifts a real amplitude map into a field with zero phase.
    pub fn from_real(rows: usize, cols: usize, pixel_pitch: f64, values: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            pixel_pitch,
            values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn pixel_pitch(&self) -> f64 {
        self.pixel_pitch
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<Complex64> {
        self.data
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.cols + col]
    }

    pub fn norm_l2(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn amplitude(&self) -> Vec<f64> {
        self.data.iter().map(|c| c.norm()).collect()
    }

    pub fn max_abs_diff(&self, other: &ComplexField) -> Result<f64> {
        self.check_same_grid(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub(crate) fn check_same_grid(&self, other: &ComplexField) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::Dimension {
                expected: self.dims(),
                actual: other.dims(),
            });
        }
        Ok(())
    }
}

impl std::ops::Add for &ComplexField {
    type Output = ComplexField;

    fn add(self, rhs: &ComplexField) -> ComplexField {
        assert_eq!(self.dims(), rhs.dims(), "adding fields on different grids");
        ComplexField {
            rows: self.rows,
            cols: self.cols,
            pixel_pitch: self.pixel_pitch,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Recorded hologram intensity. Values are non-negative.
#[derive(Debug, Clone, PartialEq)]
pub struct HologramFrame {
    rows: usize,
    cols: usize,
    pixel_pitch: f64,
    intensity: Vec<f64>,
}

impl HologramFrame {
    pub fn new(rows: usize, cols: usize, pixel_pitch: f64, intensity: Vec<f64>) -> Result<Self> {
        if rows < 2 || cols < 2 {
            return Err(param(format!("hologram must be at least 2x2, got {rows}x{cols}")));
        }
        ensure_positive("pixel_pitch", pixel_pitch)?;
        if intensity.len() != rows * cols {
            return Err(param(format!(
                "hologram has {} samples, expected {}",
                intensity.len(),
                rows * cols
            )));
        }
        if let Some(v) = intensity.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(param(format!("hologram intensity must be finite and >= 0, found {v}")));
        }
        Ok(Self { rows, cols, pixel_pitch, intensity })
    }

    /// Plane-wave-only hologram, `|R|^2 = 1` everywhere.
    pub fn uniform(rows: usize, cols: usize, pixel_pitch: f64) -> Result<Self> {
        Self::new(rows, cols, pixel_pitch, vec![1.0; rows * cols])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn pixel_pitch(&self) -> f64 {
        self.pixel_pitch
    }

    pub fn intensity(&self) -> &[f64] {
        &self.intensity
    }

    pub fn max(&self) -> f64 {
        self.intensity.iter().copied().fold(0.0, f64::max)
    }
}
