//! Comparing detections against ground truth.

use pathfinding::kuhn_munkres::kuhn_munkres;
use pathfinding::matrix::Matrix;
use serde::{Deserialize, Serialize};

use crate::autofocus::ParticleDetection;
use crate::config::OpticalConfig;
use crate::error::{ensure_positive, Error, Result};
use crate::resolution::axial_resolution;
use crate::simulator::Particle;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Matching {
    /// Closest feasible pair first.
    #[default]
    Greedy,
    /// Maximum number of matches, then minimum total lateral distance.
    Optimal,
}

/// Gates for pairing a detection with a truth particle, metres.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchTolerances {
    /// Euclidean lateral distance, inclusive.
    pub lateral: f64,
    /// Absolute depth difference, inclusive.
    pub axial: f64,
    pub matching: Matching,
}

impl MatchTolerances {
    /// 6 px laterally and one axial-resolution cell (evaluated at `dis1`).
    pub fn for_config(config: &OpticalConfig) -> Result<Self> {
        Ok(Self {
            lateral: 6.0 * config.pixel_pitch,
            axial: axial_resolution(config, config.dis1)?,
            matching: Matching::Greedy,
        })
    }

    pub fn with_matching(mut self, matching: Matching) -> Self {
        self.matching = matching;
        self
    }

    fn validate(&self) -> Result<()> {
        ensure_positive("lateral tolerance", self.lateral)?;
        ensure_positive("axial tolerance", self.axial)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub truth_count: usize,
    pub detected_count: usize,
    pub deviation: usize,
    pub relative_error_pct: f64,
    /// `(truth index, detection index)`, ordered by truth index.
    pub matched_pairs: Vec<(usize, usize)>,
    /// Detected minus true depth, per pair.
    pub axial_errors: Vec<f64>,
    pub lateral_errors: Vec<f64>,
}

impl EvaluationReport {
    pub fn matched_count(&self) -> usize {
        self.matched_pairs.len()
    }

    /// Fraction of matched pairs whose |axial error| is within `limit`.
    pub fn axial_fraction_within(&self, limit: f64) -> f64 {
        if self.axial_errors.is_empty() {
            return 0.0;
        }
        let n = self.axial_errors.iter().filter(|e| e.abs() <= limit).count();
        n as f64 / self.axial_errors.len() as f64
    }
}

/// `|detected - truth|` and `100 * deviation / truth`.
pub fn count_error(truth_count: usize, detected_count: usize) -> Result<(usize, f64)> {
    if truth_count == 0 {
        return Err(Error::Evaluation("relative error needs a non-empty ground truth".into()));
    }
    let deviation = truth_count.abs_diff(detected_count);
    Ok((deviation, 100.0 * deviation as f64 / truth_count as f64))
}

/// Relative error in percent rounded half-up to `decimals` places, computed
/// in integers so that e.g. 1149/20000 gives 5.75 rather than 5.74.
pub fn rounded_relative_error(truth_count: usize, detected_count: usize, decimals: u32) -> Result<f64> {
    let (deviation, _) = count_error(truth_count, detected_count)?;
    let scale = 10u128.pow(decimals);
    let num = deviation as u128 * 100 * scale;
    let t = truth_count as u128;
    let rounded = (2 * num + t) / (2 * t);
    Ok(rounded as f64 / scale as f64)
}

fn lateral_distance(t: &Particle, d: &ParticleDetection) -> f64 {
    (t.x - d.x).hypot(t.y - d.y)
}

fn feasible_pairs(truth: &[Particle], detections: &[ParticleDetection], tol: &MatchTolerances) -> Vec<(usize, usize, f64)> {
    let mut pairs = Vec::new();
    for (i, t) in truth.iter().enumerate() {
        for (j, d) in detections.iter().enumerate() {
            let lat = lateral_distance(t, d);
            if lat <= tol.lateral && (d.z - t.z).abs() <= tol.axial {
                pairs.push((i, j, lat));
            }
        }
    }
    pairs
}

fn greedy(truth: &[Particle], detections: &[ParticleDetection], tol: &MatchTolerances) -> Vec<(usize, usize)> {
    let mut pairs = feasible_pairs(truth, detections, tol);
    pairs.sort_by(|a, b| {
        a.2.total_cmp(&b.2)
            .then_with(|| {
                let da = (detections[a.1].z - truth[a.0].z).abs();
                let db = (detections[b.1].z - truth[b.0].z).abs();
                da.total_cmp(&db)
            })
            .then(a.0.cmp(&b.0))
            .then(a.1.cmp(&b.1))
    });
    let mut truth_used = vec![false; truth.len()];
    let mut det_used = vec![false; detections.len()];
    let mut out = Vec::new();
    for (i, j, _) in pairs {
        if !truth_used[i] && !det_used[j] {
            truth_used[i] = true;
            det_used[j] = true;
            out.push((i, j));
        }
    }
    out
}

fn optimal(truth: &[Particle], detections: &[ParticleDetection], tol: &MatchTolerances) -> Vec<(usize, usize)> {
    if truth.is_empty() || detections.is_empty() {
        return Vec::new();
    }
    // Integer weights: a feasible pair is worth far more than any total
    // distance saving, so the count of matches is maximized first.
    const MATCH: i64 = 1 << 40;
    let nm = |x: f64| (x * 1e9).round() as i64;
    let transpose = truth.len() > detections.len();
    let (n_rows, n_cols) = if transpose {
        (detections.len(), truth.len())
    } else {
        (truth.len(), detections.len())
    };
    let mut weights = Matrix::new(n_rows, n_cols, 0i64);
    for (i, j, lat) in feasible_pairs(truth, detections, tol) {
        let (r, c) = if transpose { (j, i) } else { (i, j) };
        weights[(r, c)] = MATCH - nm(lat);
    }
    let (_, assignment) = kuhn_munkres(&weights);
    let mut out: Vec<(usize, usize)> = assignment
        .into_iter()
        .enumerate()
        .filter(|&(r, c)| weights[(r, c)] > 0)
        .map(|(r, c)| if transpose { (c, r) } else { (r, c) })
        .collect();
    out.sort_unstable();
    out
}

/// Counts, one-to-one matching and per-pair errors.
pub fn evaluate(truth: &[Particle], detections: &[ParticleDetection], tol: &MatchTolerances) -> Result<EvaluationReport> {
    tol.validate()?;
    let (deviation, relative_error_pct) = count_error(truth.len(), detections.len())?;
    let mut matched_pairs = match tol.matching {
        Matching::Greedy => greedy(truth, detections, tol),
        Matching::Optimal => optimal(truth, detections, tol),
    };
    matched_pairs.sort_unstable();
    let axial_errors = matched_pairs.iter().map(|&(i, j)| detections[j].z - truth[i].z).collect();
    let lateral_errors = matched_pairs
        .iter()
        .map(|&(i, j)| lateral_distance(&truth[i], &detections[j]))
        .collect();
    Ok(EvaluationReport {
        truth_count: truth.len(),
        detected_count: detections.len(),
        deviation,
        relative_error_pct,
        matched_pairs,
        axial_errors,
        lateral_errors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64, y: f64, z: f64) -> Particle {
        Particle { x, y, z, diameter: 55e-6 }
    }

    fn d(x: f64, y: f64, z: f64) -> ParticleDetection {
        ParticleDetection { x, y, z, diameter: 55e-6 }
    }

    fn tol() -> MatchTolerances {
        MatchTolerances { lateral: 20e-6, axial: 2.5e-3, matching: Matching::Greedy }
    }

    #[test]
    fn identical_sets_match_exactly() {
        let truth = vec![p(1e-4, 2e-4, 0.03), p(5e-4, 5e-4, 0.031)];
        let det: Vec<_> = truth.iter().map(|t| d(t.x, t.y, t.z)).collect();
        let r = evaluate(&truth, &det, &tol()).unwrap();
        assert_eq!(r.deviation, 0);
        assert_eq!(r.matched_pairs, vec![(0, 0), (1, 1)]);
        assert!(r.axial_errors.iter().all(|&e| e == 0.0));
    }

    #[test]
    fn empty_truth_is_an_error() {
        assert!(matches!(evaluate(&[], &[d(0.0, 0.0, 0.03)], &tol()), Err(Error::Evaluation(_))));
    }

    #[test]
    fn table_rows_round_half_up() {
        assert_eq!(rounded_relative_error(480, 498, 2).unwrap(), 3.75);
        assert_eq!(rounded_relative_error(5400, 5796, 2).unwrap(), 7.33);
        assert_eq!(rounded_relative_error(4800, 4841, 2).unwrap(), 0.85);
        assert_eq!(rounded_relative_error(20000, 18851, 2).unwrap(), 5.75);
    }

    #[test]
    fn gates_exclude_far_pairs() {
        let truth = vec![p(0.0, 0.0, 0.03)];
        let r = evaluate(&truth, &[d(30e-6, 0.0, 0.03)], &tol()).unwrap();
        assert!(r.matched_pairs.is_empty());
        let r = evaluate(&truth, &[d(0.0, 0.0, 0.0326)], &tol()).unwrap();
        assert!(r.matched_pairs.is_empty());
    }

    #[test]
    fn optimal_beats_greedy_on_crossing_pairs() {
        // Greedy takes the closest pair (t0, d1) first and strands t1.
        let truth = vec![p(0.0, 0.0, 0.03), p(15e-6, 0.0, 0.03)];
        let det = vec![d(-10e-6, 0.0, 0.03), d(5e-6, 0.0, 0.03)];
        let tol = MatchTolerances { lateral: 12e-6, ..tol() };
        let g = evaluate(&truth, &det, &tol).unwrap();
        assert_eq!(g.matched_pairs, vec![(0, 1)]);
        let o = evaluate(&truth, &det, &tol.with_matching(Matching::Optimal)).unwrap();
        assert_eq!(o.matched_pairs, vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn nonpositive_tolerance_rejected() {
        let t = MatchTolerances { lateral: 0.0, ..tol() };
        assert!(evaluate(&[p(0.0, 0.0, 0.03)], &[], &t).is_err());
    }
}
