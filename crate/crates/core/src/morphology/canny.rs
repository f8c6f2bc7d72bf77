use std::collections::VecDeque;

use crate::error::{param, Result};
use crate::image::{BinaryImage, GrayImage};

/// Hysteresis thresholds for [`canny_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CannyThresholds {
    /// Quantiles of the gradient-magnitude distribution, `0 <= low < high <= 1`.
    Quantile { low: f64, high: f64 },
    /// Absolute gradient magnitudes.
    Absolute { low: f64, high: f64 },
}

/// Sobel gradient components with replicated borders.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub gx: Vec<f64>,
    pub gy: Vec<f64>,
    pub magnitude: Vec<f64>,
}

pub fn sobel(img: &GrayImage) -> Gradient {
    let (rows, cols) = img.dims();
    let at = |r: isize, c: isize| -> f64 {
        let r = r.clamp(0, rows as isize - 1) as usize;
        let c = c.clamp(0, cols as isize - 1) as usize;
        img.get(r, c)
    };
    let n = rows * cols;
    let (mut gx, mut gy, mut magnitude) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for r in 0..rows as isize {
        for c in 0..cols as isize {
            let x = (at(r - 1, c + 1) + 2.0 * at(r, c + 1) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r, c - 1) + at(r + 1, c - 1));
            let y = (at(r + 1, c - 1) + 2.0 * at(r + 1, c) + at(r + 1, c + 1))
                - (at(r - 1, c - 1) + 2.0 * at(r - 1, c) + at(r - 1, c + 1));
            let i = r as usize * cols + c as usize;
            gx[i] = x;
            gy[i] = y;
            magnitude[i] = (x * x + y * y).sqrt();
        }
    }
    Gradient { gx, gy, magnitude }
}

/// Linear-interpolated quantile of `values` (as numpy's default).
pub(crate) fn quantile(values: &[f64], q: f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Canny edges with quantile thresholds. The input is not smoothed here;
/// blur it first.
pub fn canny(img: &GrayImage, low: f64, high: f64) -> Result<BinaryImage> {
    if !(0.0 <= low && low < high && high <= 1.0) {
        return Err(param(format!(
            "canny quantiles must satisfy 0 <= low < high <= 1, got ({low}, {high})"
        )));
    }
    Ok(canny_with(img, CannyThresholds::Quantile { low, high }))
}

pub fn canny_with(img: &GrayImage, thresholds: CannyThresholds) -> BinaryImage {
    let (rows, cols) = img.dims();
    let mut edges = BinaryImage::filled(rows, cols, false);
    if rows < 3 || cols < 3 {
        return edges;
    }
    let grad = sobel(img);
    let mag = &grad.magnitude;
    let (low, high) = match thresholds {
        CannyThresholds::Quantile { low, high } => (quantile(mag, low), quantile(mag, high)),
        CannyThresholds::Absolute { low, high } => (low, high),
    };

    // tan(22.5 deg) and tan(67.5 deg) split the gradient direction into four
    // sectors without trigonometry, so results are exactly scale invariant.
    const T1: f64 = 0.414_213_562_373_095_1;
    const T2: f64 = 2.414_213_562_373_095;
    let mut candidate = vec![0u8; rows * cols]; // 0 none, 1 weak, 2 strong
    for r in 1..rows - 1 {
        for c in 1..cols - 1 {
            let i = r * cols + c;
            let m = mag[i];
            if m <= 0.0 || m < low {
                continue;
            }
            let (gx, gy) = (grad.gx[i], grad.gy[i]);
            let (ax, ay) = (gx.abs(), gy.abs());
            // Neighbour offsets along the gradient direction.
            let (dr, dc): (isize, isize) = if ay <= T1 * ax {
                (0, 1)
            } else if ay >= T2 * ax {
                (1, 0)
            } else if (gx > 0.0) == (gy > 0.0) {
                (1, 1)
            } else {
                (1, -1)
            };
            let ahead = mag[((r as isize + dr) as usize) * cols + (c as isize + dc) as usize];
            let behind = mag[((r as isize - dr) as usize) * cols + (c as isize - dc) as usize];
            // Strict on one side keeps plateaus one pixel wide.
            if m > behind && m >= ahead {
                candidate[i] = if m >= high { 2 } else { 1 };
            }
        }
    }

    let mut queue: VecDeque<usize> = (0..rows * cols).filter(|&i| candidate[i] == 2).collect();
    let mut done = vec![false; rows * cols];
    for &i in &queue {
        done[i] = true;
    }
    while let Some(i) = queue.pop_front() {
        let (r, c) = (i / cols, i % cols);
        edges.set(r, c, true);
        for dr in -1isize..=1 {
            for dc in -1isize..=1 {
                let (nr, nc) = (r as isize + dr, c as isize + dc);
                if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                    continue;
                }
                let j = nr as usize * cols + nc as usize;
                if !done[j] && candidate[j] > 0 {
                    done[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    edges
}
