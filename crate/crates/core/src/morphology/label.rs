use crate::error::{Error, Result};
use crate::image::{BinaryImage, GrayImage, LabelMap};

/// Labels 8-connected foreground components. Labels are assigned in raster
/// order of each component's first pixel.
pub fn label_components(img: &BinaryImage) -> LabelMap {
    let (rows, cols) = img.dims();
    let mut labels = vec![0u32; rows * cols];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..rows * cols {
        if labels[start] != 0 || !img.data()[start] {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let (r, c) = ((i / cols) as isize, (i % cols) as isize);
            for dr in -1..=1 {
                for dc in -1..=1 {
                    let (nr, nc) = (r + dr, c + dc);
                    if nr < 0 || nc < 0 || nr >= rows as isize || nc >= cols as isize {
                        continue;
                    }
                    let j = nr as usize * cols + nc as usize;
                    if labels[j] == 0 && img.data()[j] {
                        labels[j] = next;
                        stack.push(j);
                    }
                }
            }
        }
    }
    LabelMap::from_parts(rows, cols, labels, next as usize)
}

/// Per-component statistics. Centroids are `(x, y) = (column, row)` in
/// 0-based pixel coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionProps {
    pub label: u32,
    pub area: usize,
    pub mean_intensity: f64,
    pub equivalent_diameter: f64,
    pub centroid_x: f64,
    pub centroid_y: f64,
    /// Inclusive `(min_row, min_col, max_row, max_col)`.
    pub bbox: (usize, usize, usize, usize),
}

/// Diameter of the circle with the given pixel area.
pub fn equivalent_diameter(area: usize) -> f64 {
    2.0 * (area as f64 / std::f64::consts::PI).sqrt()
}

/// Area, mean intensity, equivalent diameter and centroid for each label.
/// Labels with no pixels are omitted.
pub fn region_props(labels: &LabelMap, intensity: &GrayImage) -> Result<Vec<RegionProps>> {
    if labels.dims() != intensity.dims() {
        return Err(Error::Dimension {
            expected: labels.dims(),
            actual: intensity.dims(),
        });
    }
    let n = labels.count();
    let cols = labels.cols();
    let mut area = vec![0usize; n + 1];
    let mut sum = vec![0.0; n + 1];
    let mut sum_r = vec![0.0; n + 1];
    let mut sum_c = vec![0.0; n + 1];
    let mut bbox = vec![(usize::MAX, usize::MAX, 0usize, 0usize); n + 1];
    for (i, &l) in labels.labels().iter().enumerate() {
        if l == 0 {
            continue;
        }
        let l = l as usize;
        let (r, c) = (i / cols, i % cols);
        area[l] += 1;
        sum[l] += intensity.data()[i];
        sum_r[l] += r as f64;
        sum_c[l] += c as f64;
        let b = &mut bbox[l];
        *b = (b.0.min(r), b.1.min(c), b.2.max(r), b.3.max(c));
    }
    Ok((1..=n)
        .filter(|&l| area[l] > 0)
        .map(|l| {
            let a = area[l] as f64;
            RegionProps {
                label: l as u32,
                area: area[l],
                mean_intensity: sum[l] / a,
                equivalent_diameter: equivalent_diameter(area[l]),
                centroid_x: sum_c[l] / a,
                centroid_y: sum_r[l] / a,
                bbox: bbox[l],
            }
        })
        .collect())
}
