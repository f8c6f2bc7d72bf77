mod common;

use holofocus::autofocus::{
    autofocus_pipeline, collect_candidates, grouping_slice_count, reconstruct_stack, select_focused, DetectorParams,
    FocalStatus,
};
use holofocus::evaluate::{evaluate, MatchTolerances};
use holofocus::field::HologramFrame;

#[test]
fn uniform_hologram_has_no_detections() {
    let config = common::scene_config(256, 30e-3, 31e-3, 100e-6);
    let holo = HologramFrame::uniform(256, 256, config.pixel_pitch).unwrap();
    let out = autofocus_pipeline(&holo, &config, &DetectorParams::default()).unwrap();
    assert!(out.detections.is_empty());
    assert_eq!(out.slice_count, 11);
}

#[test]
fn pipeline_equals_staged_computation() {
    let (config, _, holo) = common::two_layer_scene(256, 5);
    let config = config.with_range(31.5e-3, 33.5e-3, 200e-6);
    let params = DetectorParams::default();
    let out = autofocus_pipeline(&holo, &config, &params).unwrap();

    let stack = reconstruct_stack(&holo, &config, params.source).unwrap();
    let mut m = collect_candidates(&stack, &config, &params).unwrap();
    let asn = grouping_slice_count(&config, &params).unwrap();
    let focused = select_focused(&mut m, asn, params.centroid_window_px).unwrap();

    assert_eq!(out.candidates, m);
    assert_eq!(out.focused, focused);
    assert_eq!(out.axi_slice_num, asn);
    assert!(out.candidates.records().iter().all(|r| r.focal_status != FocalStatus::Untraversed));
}

#[test]
fn pipeline_is_deterministic() {
    let (config, _, holo) = common::two_layer_scene(256, 6);
    let config = config.with_range(31.5e-3, 33.5e-3, 250e-6);
    let params = DetectorParams::default();
    let a = autofocus_pipeline(&holo, &config, &params).unwrap();
    let b = autofocus_pipeline(&holo, &config, &params).unwrap();
    assert_eq!(a.detections, b.detections);
}

#[test]
fn two_layer_scene_fully_recovered() {
    let (config, field, holo) = common::two_layer_scene(512, 1);
    let config = config.with_range(31e-3, 34e-3, 100e-6);
    let out = autofocus_pipeline(&holo, &config, &DetectorParams::default()).unwrap();
    let report = evaluate(field.particles(), &out.detections, &MatchTolerances::for_config(&config).unwrap()).unwrap();
    assert_eq!(report.detected_count, 17);
    assert_eq!(report.matched_count(), 17);
    assert!(report.axial_errors.iter().all(|e| e.abs() <= 0.2e-3), "{:?}", report.axial_errors);
    assert!(report.lateral_errors.iter().all(|&e| e <= 2.0 * config.pixel_pitch));
}
