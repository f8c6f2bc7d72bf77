//! The image operations used to turn a reconstructed slice into particle
//! regions: Gaussian smoothing, Canny edges, hole filling, disk erosion and
//! dilation, 8-connected labeling and region statistics.

mod binary;
mod blur;
mod canny;
mod label;

pub use binary::{dilate, disk_offsets, erode, fill_holes};
pub use blur::{gaussian_blur, gaussian_kernel};
pub use canny::{canny, canny_with, sobel, CannyThresholds, Gradient};
pub use label::{equivalent_diameter, label_components, region_props, RegionProps};

/// Index into `[0, n)` with half-sample symmetric reflection
/// (`d c b a | a b c d | d c b a`).
pub(crate) fn reflect_index(i: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = i.rem_euclid(period);
    if m < n as isize {
        m as usize
    } else {
        (period - 1 - m) as usize
    }
}
