use crate::error::{param, Result};
use crate::image::GrayImage;

use super::reflect_index;

/// Normalized 1-D Gaussian truncated at four standard deviations.
pub fn gaussian_kernel(sigma: f64) -> Vec<f64> {
    if sigma <= 0.0 {
        return vec![1.0];
    }
    let radius = (4.0 * sigma).ceil() as isize;
    let mut k: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    k.iter_mut().for_each(|v| *v /= sum);
    k
}

/// Separable Gaussian smoothing with reflective borders; `sigma = 0` returns
/// the input unchanged.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(param(format!("sigma must be finite and >= 0, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let kernel = gaussian_kernel(sigma);
    let radius = (kernel.len() / 2) as isize;
    let (rows, cols) = img.dims();
    let src = img.data();

    let mut tmp = vec![0.0; rows * cols];
    for r in 0..rows {
        let row = &src[r * cols..(r + 1) * cols];
        for c in 0..cols {
            let mut acc = 0.0;
            for (k, w) in kernel.iter().enumerate() {
                acc += w * row[reflect_index(c as isize + k as isize - radius, cols)];
            }
            tmp[r * cols + c] = acc;
        }
    }

    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for (k, w) in kernel.iter().enumerate() {
            let rr = reflect_index(r as isize + k as isize - radius, rows);
            let src_row = &tmp[rr * cols..(rr + 1) * cols];
            let dst_row = &mut out[r * cols..(r + 1) * cols];
            for (d, s) in dst_row.iter_mut().zip(src_row) {
                *d += w * s;
            }
        }
    }
    GrayImage::new(rows, cols, out)
}
