//! Slow, independent reference implementations used to check the library.

use holofocus::autofocus::{CandidateRecord, FocalStatus, ReconstructionStack};
use holofocus::calibration::{grad_mean, projections, select_particles, CalibrationParams};
use holofocus::image::{BinaryImage, GrayImage};
use holofocus::Complex64;

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        parent[ra.max(rb)] = ra.min(rb);
    }
}

/// Two-pass union-find labeling; labels numbered by the raster position of
/// each component's first pixel.
pub fn union_find_labels(img: &BinaryImage, eight: bool, value: bool) -> (Vec<u32>, usize) {
    let (rows, cols) = img.dims();
    let mut parent: Vec<usize> = (0..rows * cols).collect();
    let on = |r: usize, c: usize| img.get(r, c) == value;
    for r in 0..rows {
        for c in 0..cols {
            if !on(r, c) {
                continue;
            }
            let i = r * cols + c;
            if c > 0 && on(r, c - 1) {
                union(&mut parent, i, i - 1);
            }
            if r > 0 && on(r - 1, c) {
                union(&mut parent, i, i - cols);
            }
            if eight && r > 0 && c > 0 && on(r - 1, c - 1) {
                union(&mut parent, i, i - cols - 1);
            }
            if eight && r > 0 && c + 1 < cols && on(r - 1, c + 1) {
                union(&mut parent, i, i - cols + 1);
            }
        }
    }
    let mut label_of_root = vec![0u32; rows * cols];
    let mut labels = vec![0u32; rows * cols];
    let mut count = 0;
    for r in 0..rows {
        for c in 0..cols {
            if !on(r, c) {
                continue;
            }
            let i = r * cols + c;
            let root = find(&mut parent, i);
            if label_of_root[root] == 0 {
                count += 1;
                label_of_root[root] = count as u32;
            }
            labels[i] = label_of_root[root];
        }
    }
    (labels, count)
}

/// Background components (4-connected) that do not touch the border become
/// foreground.
pub fn fill_holes_oracle(img: &BinaryImage) -> BinaryImage {
    let (rows, cols) = img.dims();
    let (labels, count) = union_find_labels(img, false, false);
    let mut touches = vec![false; count + 1];
    for r in 0..rows {
        for c in 0..cols {
            if r == 0 || c == 0 || r + 1 == rows || c + 1 == cols {
                touches[labels[r * cols + c] as usize] = true;
            }
        }
    }
    BinaryImage::from_fn(rows, cols, |r, c| {
        let l = labels[r * cols + c] as usize;
        img.get(r, c) || !touches[l]
    })
}

fn disk(radius: usize) -> Vec<(isize, isize)> {
    let r = radius as isize;
    let mut out = Vec::new();
    for dr in -r..=r {
        for dc in -r..=r {
            if dr * dr + dc * dc <= r * r {
                out.push((dr, dc));
            }
        }
    }
    out
}

/// Minimum filter over a disk; pixels outside the image count as false.
pub fn brute_erode(img: &BinaryImage, radius: usize) -> BinaryImage {
    let (rows, cols) = img.dims();
    let d = disk(radius);
    BinaryImage::from_fn(rows, cols, |r, c| {
        d.iter().all(|&(dr, dc)| {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            nr >= 0 && nc >= 0 && nr < rows as isize && nc < cols as isize && img.get(nr as usize, nc as usize)
        })
    })
}

/// Maximum filter over a disk.
pub fn brute_dilate(img: &BinaryImage, radius: usize) -> BinaryImage {
    let (rows, cols) = img.dims();
    let d = disk(radius);
    BinaryImage::from_fn(rows, cols, |r, c| {
        d.iter().any(|&(dr, dc)| {
            let (nr, nc) = (r as isize + dr, c as isize + dc);
            nr >= 0 && nc >= 0 && nr < rows as isize && nc < cols as isize && img.get(nr as usize, nc as usize)
        })
    })
}

/// Unnormalized 2-D DFT by direct summation.
pub fn naive_dft(data: &[Complex64], rows: usize, cols: usize, sign: f64) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); rows * cols];
    for k in 0..rows {
        for l in 0..cols {
            let mut acc = Complex64::new(0.0, 0.0);
            for m in 0..rows {
                for n in 0..cols {
                    let phase = sign
                        * 2.0
                        * std::f64::consts::PI
                        * ((k * m) as f64 / rows as f64 + (l * n) as f64 / cols as f64);
                    acc += data[m * cols + n] * Complex64::from_polar(1.0, phase);
                }
            }
            out[k * cols + l] = acc;
        }
    }
    out
}

/// Sobel magnitude by explicit 3x3 correlation with replicated borders.
pub fn dense_sobel(img: &GrayImage) -> Vec<f64> {
    const KX: [[f64; 3]; 3] = [[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]];
    const KY: [[f64; 3]; 3] = [[-1.0, -2.0, -1.0], [0.0, 0.0, 0.0], [1.0, 2.0, 1.0]];
    let (rows, cols) = img.dims();
    let mut out = vec![0.0; rows * cols];
    for r in 0..rows {
        for c in 0..cols {
            let (mut gx, mut gy) = (0.0, 0.0);
            for (i, dr) in (-1isize..=1).enumerate() {
                for (j, dc) in (-1isize..=1).enumerate() {
                    let rr = (r as isize + dr).clamp(0, rows as isize - 1) as usize;
                    let cc = (c as isize + dc).clamp(0, cols as isize - 1) as usize;
                    gx += KX[i][j] * img.get(rr, cc);
                    gy += KY[i][j] * img.get(rr, cc);
                }
            }
            out[r * cols + c] = (gx * gx + gy * gy).sqrt();
        }
    }
    out
}

/// Straightforward re-implementation of the selection state machine.
/// Returns the final statuses and, per record, the members of the last
/// group that contained it.
pub fn replay_selection(
    records: &[CandidateRecord],
    asn: usize,
    window: f64,
) -> (Vec<FocalStatus>, Vec<Option<Vec<usize>>>) {
    let n = records.len();
    let mut status = vec![FocalStatus::Untraversed; n];
    let mut last_group: Vec<Option<Vec<usize>>> = vec![None; n];
    for t in 0..n {
        if status[t] == FocalStatus::Traversed {
            continue;
        }
        let a = records[t];
        let group: Vec<usize> = (0..n)
            .filter(|&j| {
                let r = records[j];
                (r.centroid_x - a.centroid_x).abs() < window
                    && (r.centroid_y - a.centroid_y).abs() < window
                    && r.slice_index >= a.slice_index
                    && r.slice_index <= a.slice_index + asn
            })
            .collect();
        let mut best = group[0];
        for &j in &group {
            status[j] = FocalStatus::Traversed;
            let (mb, mj) = (records[best].metric, records[j].metric);
            if mj < mb || (mj == mb && j < best) {
                best = j;
            }
        }
        status[best] = FocalStatus::Focused;
        for &j in &group {
            last_group[j] = Some(group.clone());
        }
    }
    (status, last_group)
}

/// Exhaustive sweep written out independently of the library's loop.
pub fn sweep_threshold(stack: &ReconstructionStack, params: &CalibrationParams) -> f64 {
    let pair = projections(stack).unwrap();
    let mut best_overall = f64::INFINITY;
    for crop in select_particles(&pair.min_intensity, params) {
        let mut k = 0;
        let (mut best_t, mut best_g) = (f64::NAN, f64::NEG_INFINITY);
        loop {
            let t = params.v1 + k as f64 * params.step;
            if t > params.v2 + 1e-9 {
                break;
            }
            let g = grad_mean(&pair.min_intensity, &pair.max_gradient, crop, t);
            if g > best_g {
                best_g = g;
                best_t = t;
            }
            k += 1;
        }
        if best_g > 0.0 {
            best_overall = best_overall.min(best_t);
        }
    }
    best_overall
}
