use crate::error::{param, Result};

use super::candidates::{CandidateMatrix, CandidateRecord, FocalStatus};

/// One grouping step of the selection pass.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SelectionGroup {
    pub anchor: usize,
    /// Indices into the matrix, ascending; includes the anchor.
    pub members: Vec<usize>,
    pub best: usize,
}

/// Indices of records within `window_px` (strictly, on both axes) of the
/// anchor and whose slice lies in `[anchor, anchor + axi_slice_num]`.
pub fn gather_group(records: &[CandidateRecord], anchor: usize, axi_slice_num: usize, window_px: f64) -> Vec<usize> {
    let a = &records[anchor];
    let last = a.slice_index + axi_slice_num;
    records
        .iter()
        .enumerate()
        .filter(|(_, r)| {
            r.slice_index >= a.slice_index
                && r.slice_index <= last
                && (r.centroid_x - a.centroid_x).abs() < window_px
                && (r.centroid_y - a.centroid_y).abs() < window_px
        })
        .map(|(i, _)| i)
        .collect()
}

/// Member with the smallest metric; ties go to the earlier slice, then the
/// earlier raster position, which is matrix order.
fn best_of(records: &[CandidateRecord], members: &[usize]) -> usize {
    let mut best = members[0];
    for &i in &members[1..] {
        if records[i].metric < records[best].metric {
            best = i;
        }
    }
    best
}

/// Runs the selection pass, updating every record's focal status, and
/// returns the groups in the order they were formed.
pub fn select_focused_traced(
    m: &mut CandidateMatrix,
    axi_slice_num: usize,
    window_px: f64,
) -> Result<Vec<SelectionGroup>> {
    if axi_slice_num < 1 {
        return Err(param("axi_slice_num must be at least 1"));
    }
    let records = m.records_mut();
    let mut groups = Vec::new();
    for anchor in 0..records.len() {
        if records[anchor].focal_status == FocalStatus::Traversed {
            continue;
        }
        let members = gather_group(records, anchor, axi_slice_num, window_px);
        for &i in &members {
            records[i].focal_status = FocalStatus::Traversed;
        }
        let best = best_of(records, &members);
        records[best].focal_status = FocalStatus::Focused;
        groups.push(SelectionGroup { anchor, members, best });
    }
    Ok(groups)
}

/// Marks focused candidates in `m` and returns them (matrix M_new).
pub fn select_focused(m: &mut CandidateMatrix, axi_slice_num: usize, window_px: f64) -> Result<Vec<CandidateRecord>> {
    select_focused_traced(m, axi_slice_num, window_px)?;
    Ok(m.records()
        .iter()
        .filter(|r| r.focal_status == FocalStatus::Focused)
        .copied()
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(x: f64, y: f64, slice: usize, metric: f64) -> CandidateRecord {
        CandidateRecord {
            mean_intensity: metric,
            equiv_diameter: 1.0,
            centroid_x: x,
            centroid_y: y,
            metric,
            distance: 0.03 + slice as f64 * 50e-6,
            reim_index: slice as isize - 100,
            slice_index: slice,
            focal_status: FocalStatus::Untraversed,
        }
    }

    #[test]
    fn singleton_is_focused() {
        let mut m = CandidateMatrix::new(vec![record(10.0, 10.0, 3, 0.5)]);
        let out = select_focused(&mut m, 5, 6.0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].focal_status, FocalStatus::Focused);
    }

    #[test]
    fn distant_slices_are_separate_particles() {
        let mut m = CandidateMatrix::new(vec![record(10.0, 10.0, 0, 0.5), record(10.0, 10.0, 20, 0.4)]);
        assert_eq!(select_focused(&mut m, 10, 6.0).unwrap().len(), 2);
    }

    #[test]
    fn v_shaped_run_focuses_at_minimum() {
        let metrics = [0.9, 0.7, 0.5, 0.2, 0.4, 0.6, 0.8];
        let recs = metrics
            .iter()
            .enumerate()
            .map(|(s, &v)| record(50.0 + 0.3 * s as f64, 40.0, s, v))
            .collect();
        let mut m = CandidateMatrix::new(recs);
        let out = select_focused(&mut m, 10, 6.0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].slice_index, 3);
    }

    #[test]
    fn window_is_strict() {
        let mut m = CandidateMatrix::new(vec![record(10.0, 10.0, 0, 0.5), record(16.0, 10.0, 1, 0.4)]);
        assert_eq!(select_focused(&mut m, 10, 6.0).unwrap().len(), 2);
        let mut m = CandidateMatrix::new(vec![record(10.0, 10.0, 0, 0.5), record(15.9, 10.0, 1, 0.4)]);
        assert_eq!(select_focused(&mut m, 10, 6.0).unwrap().len(), 1);
    }

    #[test]
    fn ties_prefer_earliest_slice() {
        let mut m = CandidateMatrix::new(vec![record(10.0, 10.0, 2, 0.3), record(10.0, 10.0, 4, 0.3)]);
        let out = select_focused(&mut m, 5, 6.0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].slice_index, 2);
    }

    #[test]
    fn focused_record_can_be_demoted_by_later_anchor() {
        // Group 0 = {0, 2} promotes record 2. Record 1 is 10 px from the
        // first anchor, so it anchors its own group, which reaches record 2
        // and the stronger record 3.
        let mut m = CandidateMatrix::new(vec![
            record(10.0, 10.0, 0, 0.9),
            record(20.0, 10.0, 1, 0.8),
            record(15.0, 10.0, 2, 0.5),
            record(20.0, 10.0, 3, 0.1),
        ]);
        let groups = select_focused_traced(&mut m, 4, 6.0).unwrap();
        assert_eq!(groups[0], SelectionGroup { anchor: 0, members: vec![0, 2], best: 2 });
        assert_eq!(groups[1], SelectionGroup { anchor: 1, members: vec![1, 2, 3], best: 3 });
        let statuses: Vec<FocalStatus> = m.records().iter().map(|r| r.focal_status).collect();
        assert_eq!(
            statuses,
            vec![FocalStatus::Traversed, FocalStatus::Traversed, FocalStatus::Traversed, FocalStatus::Focused]
        );
    }

    #[test]
    fn reselection_is_not_idempotent_in_general() {
        // Record 0 wins its group over record 2. Record 1 sits 8 px from
        // record 0, so it anchors a group that re-promotes record 2. Both 0
        // and 2 end focused although they are 4 px and 2 slices apart;
        // re-running on them alone merges them.
        let mut m = CandidateMatrix::new(vec![
            record(10.0, 10.0, 0, 0.1),
            record(18.0, 10.0, 1, 0.9),
            record(14.0, 10.0, 2, 0.2),
        ]);
        let first = select_focused(&mut m, 4, 6.0).unwrap();
        assert_eq!(first.len(), 2);
        let mut again = CandidateMatrix::new(first);
        again.reset_status();
        assert_eq!(select_focused(&mut again, 4, 6.0).unwrap().len(), 1);
    }

    #[test]
    fn focused_record_reanchors_and_can_lose() {
        let mut m = CandidateMatrix::new(vec![
            record(10.0, 10.0, 0, 0.9),
            record(10.0, 10.0, 4, 0.3),
            record(10.0, 10.0, 6, 0.2),
        ]);
        let out = select_focused(&mut m, 4, 6.0).unwrap();
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].slice_index, 6);
    }

    #[test]
    fn zero_window_rejected() {
        let mut m = CandidateMatrix::new(vec![record(1.0, 1.0, 0, 0.1)]);
        assert!(select_focused(&mut m, 0, 6.0).is_err());
    }
}
