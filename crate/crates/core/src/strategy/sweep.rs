//! Grid search for counterexamples to the `A^r B^s` pattern conjecture.
//!
//! A point with a nonnegative gap is reported as a violation row. It is a
//! finding about the conjecture, not an error in this crate.

use rayon::prelude::*;

use super::two_armed::pattern_gap;
use super::{Pattern, TwoArmedSpec};

/// Hypotheses under which the pattern gap is conjectured (or, for
/// [`Condition::Divides`], proved) to be negative.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    /// (a) `J = 2`.
    AwardLengthTwo,
    /// (b) `min(r, s) = 1`.
    SingleRun,
    /// (c) `r + s <= J`.
    ShortPattern,
    /// (d) `p_A + p_B > 1/3`.
    LargeHitSum,
    /// `r + s` divides `J`; proved, included as a sanity region.
    Divides,
}

impl Condition {
    pub const ALL: [Condition; 5] = [
        Condition::AwardLengthTwo,
        Condition::SingleRun,
        Condition::ShortPattern,
        Condition::LargeHitSum,
        Condition::Divides,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Condition::AwardLengthTwo => "a",
            Condition::SingleRun => "b",
            Condition::ShortPattern => "c",
            Condition::LargeHitSum => "d",
            Condition::Divides => "div",
        }
    }

    pub fn holds(self, award_length: usize, r: usize, s: usize, p_a: f64, p_b: f64) -> bool {
        match self {
            Condition::AwardLengthTwo => award_length == 2,
            Condition::SingleRun => r.min(s) == 1,
            Condition::ShortPattern => r + s <= award_length,
            Condition::LargeHitSum => p_a + p_b > 1.0 / 3.0,
            Condition::Divides => award_length % (r + s) == 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub award_lengths: Vec<usize>,
    /// `(r, s)` block sizes.
    pub shapes: Vec<(usize, usize)>,
    /// Values tried for both `p_A` and `p_B`; equal pairs are skipped.
    pub grid: Vec<f64>,
    /// A point is evaluated when at least one of these holds.
    pub conditions: Vec<Condition>,
}

impl Default for SweepConfig {
    /// `J = 2..=12`, `r, s = 1..=4`, hit probabilities `0.05, 0.10, ..., 0.95`.
    fn default() -> Self {
        Self {
            award_lengths: (2..=12).collect(),
            shapes: (1..=4).flat_map(|r| (1..=4).map(move |s| (r, s))).collect(),
            grid: (1..=19).map(|k| k as f64 / 20.0).collect(),
            conditions: Condition::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub award_length: usize,
    pub r: usize,
    pub s: usize,
    pub p_a: f64,
    pub p_b: f64,
    /// Flags in [`Condition::ALL`] order.
    pub flags: [bool; 5],
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub violations: Vec<SweepRow>,
    /// Smallest `|gap|` among evaluated points; `None` if nothing was evaluated.
    pub min_abs_gap: Option<f64>,
}

pub fn conjecture_sweep(cfg: &SweepConfig) -> SweepReport {
    let mut points = Vec::new();
    for &j in &cfg.award_lengths {
        for &(r, s) in &cfg.shapes {
            for &p_a in &cfg.grid {
                for &p_b in &cfg.grid {
                    if p_a != p_b && j >= 2 && r >= 1 && s >= 1 {
                        points.push((j, r, s, p_a, p_b));
                    }
                }
            }
        }
    }

    let rows: Vec<SweepRow> = points
        .par_iter()
        .filter_map(|&(j, r, s, p_a, p_b)| {
            let flags = Condition::ALL.map(|c| c.holds(j, r, s, p_a, p_b));
            let selected = cfg
                .conditions
                .iter()
                .any(|c| flags[Condition::ALL.iter().position(|x| x == c).unwrap()]);
            if !selected {
                return None;
            }
            // only hit probabilities enter the gap; any arm means would do
            let spec = TwoArmedSpec::fair(p_a, p_b, j).ok()?;
            let pattern = Pattern::blocks(r, s).ok()?;
            let gap = pattern_gap(&spec, &pattern);
            Some(SweepRow { award_length: j, r, s, p_a, p_b, flags, gap })
        })
        .collect();

    let violations = rows.iter().filter(|row| !(row.gap < 0.0)).cloned().collect();
    let min_abs_gap = rows.iter().map(|row| row.gap.abs()).reduce(f64::min);
    SweepReport { rows, violations, min_abs_gap }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn award_length_two_square_blocks() {
        let cfg = SweepConfig {
            award_lengths: vec![2],
            shapes: vec![(2, 2)],
            grid: (1..=19).map(|k| k as f64 / 20.0).collect(),
            conditions: vec![Condition::AwardLengthTwo],
        };
        let report = conjecture_sweep(&cfg);
        assert_eq!(report.rows.len(), 19 * 18);
        assert!(report.violations.is_empty());
        assert!(report.min_abs_gap.unwrap() > 0.0);
    }

    #[test]
    fn theorem_region_has_no_violations() {
        let cfg = SweepConfig {
            award_lengths: vec![4, 6, 12],
            shapes: vec![(1, 1), (1, 2), (2, 2), (1, 3)],
            grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
            conditions: vec![Condition::Divides],
        };
        let report = conjecture_sweep(&cfg);
        assert!(!report.rows.is_empty());
        assert!(report.rows.iter().all(|r| r.flags[4]));
        assert!(report.violations.is_empty());
    }

    #[test]
    fn rows_are_in_grid_order() {
        let cfg = SweepConfig {
            award_lengths: vec![3, 2],
            shapes: vec![(1, 2)],
            grid: vec![0.2, 0.6],
            conditions: Condition::ALL.to_vec(),
        };
        let report = conjecture_sweep(&cfg);
        let keys: Vec<_> = report.rows.iter().map(|r| (r.award_length, r.p_a)).collect();
        assert_eq!(keys, vec![(3, 0.2), (3, 0.6), (2, 0.2), (2, 0.6)]);
    }
}
