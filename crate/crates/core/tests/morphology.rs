mod common;

use common::oracles::{brute_dilate, brute_erode, dense_sobel, fill_holes_oracle, union_find_labels};
use holofocus::calibration::{gradient_image, max_gradient_projection, min_intensity_projection};
use holofocus::image::{BinaryImage, GrayImage};
use holofocus::morphology::{
    canny, canny_with, dilate, equivalent_diameter, erode, fill_holes, gaussian_blur, label_components,
    region_props, CannyThresholds,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_binary(rows: usize, cols: usize, density: f64, seed: u64) -> BinaryImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| rng.random_bool(density)).collect();
    BinaryImage::new(rows, cols, data).unwrap()
}

fn random_gray(rows: usize, cols: usize, seed: u64) -> GrayImage {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let data = (0..rows * cols).map(|_| rng.random::<f64>()).collect();
    GrayImage::new(rows, cols, data).unwrap()
}

#[test]
fn labels_match_union_find() {
    for seed in 0..5 {
        let img = random_binary(200, 200, 0.3, seed);
        let map = label_components(&img);
        let (oracle, count) = union_find_labels(&img, true, true);
        assert_eq!(map.count(), count);
        assert_eq!(map.labels(), &oracle[..]);
    }
}

#[test]
fn holes_match_border_flood_oracle() {
    // Blob with three punched holes.
    let mut blob = BinaryImage::from_fn(60, 60, |r, c| {
        let (y, x) = (r as f64 - 30.0, c as f64 - 30.0);
        x * x / 400.0 + y * y / 225.0 <= 1.0
    });
    for (r, c) in [(30, 22), (28, 35), (35, 30)] {
        blob.set(r, c, false);
        blob.set(r + 1, c, false);
    }
    let filled = fill_holes(&blob);
    assert_eq!(filled, fill_holes_oracle(&blob));
    assert_eq!(filled.count(), blob.count() + 6);
    for seed in 0..10 {
        let img = random_binary(80, 70, 0.55, seed);
        assert_eq!(fill_holes(&img), fill_holes_oracle(&img));
    }
}

#[test]
fn erosion_and_dilation_match_brute_force() {
    for seed in 0..6 {
        let img = random_binary(48, 52, 0.6, seed);
        for radius in 1..=3 {
            assert_eq!(erode(&img, radius), brute_erode(&img, radius));
            assert_eq!(dilate(&img, radius), brute_dilate(&img, radius));
        }
    }
}

#[test]
fn dilation_is_dual_of_erosion_inside() {
    let img = random_binary(40, 40, 0.4, 9);
    let r = 2;
    let dual = erode(&img.not(), r).not();
    let d = dilate(&img, r);
    for row in r..40 - r {
        for col in r..40 - r {
            assert_eq!(d.get(row, col), dual.get(row, col));
        }
    }
}

#[test]
fn region_props_identities() {
    let img = random_binary(120, 90, 0.35, 4);
    let map = label_components(&img);
    let props = region_props(&map, &GrayImage::filled(120, 90, 0.25)).unwrap();
    assert_eq!(props.len(), map.count());
    for p in &props {
        assert_eq!(p.equivalent_diameter, 2.0 * (p.area as f64 / std::f64::consts::PI).sqrt());
        assert_eq!(p.equivalent_diameter, equivalent_diameter(p.area));
        assert_eq!(p.mean_intensity, 0.25);
        let (r0, c0, r1, c1) = p.bbox;
        assert!(p.centroid_y >= r0 as f64 && p.centroid_y <= r1 as f64);
        assert!(p.centroid_x >= c0 as f64 && p.centroid_x <= c1 as f64);
    }
    assert_eq!(props.iter().map(|p| p.area).sum::<usize>(), img.count());
}

#[test]
fn disk_outline_is_a_closed_ring_of_circumference_length() {
    let img = GrayImage::from_fn(100, 100, |r, c| {
        let d2 = (r as f64 - 50.0).powi(2) + (c as f64 - 50.0).powi(2);
        if d2 <= 900.0 {
            0.2
        } else {
            1.0
        }
    });
    let edges = canny(&gaussian_blur(&img, 1.0).unwrap(), 0.7, 0.9).unwrap();
    let expected = 2.0 * std::f64::consts::PI * 30.0;
    let n = edges.count() as f64;
    assert!((n - expected).abs() <= 0.2 * expected, "{n} edge pixels");
    assert_eq!(label_components(&edges).count(), 1);
    // Closed: filling the ring covers the disk interior.
    let filled = fill_holes(&edges);
    assert!(filled.get(50, 50) && filled.count() > 2700);
}

#[test]
fn gradient_image_matches_dense_convolution() {
    let img = random_gray(23, 31, 5);
    let dense = dense_sobel(&img);
    let peak = dense.iter().copied().fold(0.0, f64::max);
    let g = gradient_image(&img);
    for (a, b) in g.data().iter().zip(&dense) {
        assert!((a - b / peak).abs() < 1e-12);
    }
}

#[test]
fn projections_match_per_pixel_loop() {
    let slices: Vec<GrayImage> = (0..5).map(|s| random_gray(17, 13, 100 + s)).collect();
    let min = min_intensity_projection(&slices).unwrap();
    let max = max_gradient_projection(&slices).unwrap();
    for r in 0..17 {
        for c in 0..13 {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for s in &slices {
                lo = lo.min(s.get(r, c));
                hi = hi.max(s.get(r, c));
            }
            assert_eq!(min.get(r, c), lo);
            assert_eq!(max.get(r, c), hi);
        }
    }
}

#[test]
fn canny_nearly_invariant_under_general_affine_rescale() {
    let img = gaussian_blur(&random_gray(64, 64, 8), 1.5).unwrap();
    let base = canny(&img, 0.7, 0.9).unwrap();
    let shifted = canny(&img.map(|v| 0.37 * v + 0.21), 0.7, 0.9).unwrap();
    let differ = base.data().iter().zip(shifted.data()).filter(|(a, b)| a != b).count();
    assert!(differ as f64 <= 0.01 * (64.0 * 64.0), "{differ} pixels differ");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    // On a dyadic value grid with power-of-two scales every gradient is
    // computed exactly, so the quantile thresholds make Canny exactly
    // invariant.
    #[test]
    fn canny_invariant_under_exact_affine_rescale(
        values in prop::collection::vec(0u16..1024, 24 * 20),
        exponent in -4i32..4,
        offset in 0u16..512,
    ) {
        let img = GrayImage::new(24, 20, values.iter().map(|&v| v as f64 / 1024.0).collect()).unwrap();
        let a = 2f64.powi(exponent);
        let b = offset as f64 / 1024.0;
        let scaled = img.map(|v| a * v + b);
        prop_assert_eq!(canny(&img, 0.7, 0.9).unwrap(), canny(&scaled, 0.7, 0.9).unwrap());
    }

    #[test]
    fn fill_holes_is_idempotent(seed in 0u64..1000, density in 0.2f64..0.8) {
        let once = fill_holes(&random_binary(30, 30, density, seed));
        prop_assert_eq!(fill_holes(&once), once);
    }

    #[test]
    fn canny_edges_are_subset_of_nonzero_gradient(seed in 0u64..1000) {
        let img = random_gray(16, 16, seed);
        let edges = canny_with(&img, CannyThresholds::Absolute { low: 0.5, high: 1.0 });
        let mag = dense_sobel(&img);
        for (e, m) in edges.data().iter().zip(&mag) {
            prop_assert!(!e || *m >= 0.5);
        }
    }
}
