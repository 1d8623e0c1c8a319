//! The driving chain of a one-armed machine and its stationary law.
//!
//! States are `(cam, pointer)` pairs flattened row-major, `cam * J + pointer`.

use std::collections::VecDeque;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::machine::{MachineSpec, MachineState};

const ROW_SUM_TOLERANCE: f64 = 1e-12;

/// Sparse row-stochastic matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    rows: Vec<Vec<(usize, f64)>>,
    // set when the matrix comes from a machine spec, whose form guarantees it
    structurally_irreducible: bool,
}

impl TransitionMatrix {
    /// Validates that every row is a probability vector over `0..rows.len()`.
    pub fn from_rows(rows: Vec<Vec<(usize, f64)>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::NotStochastic("empty matrix".into()));
        }
        for (s, row) in rows.iter().enumerate() {
            if let Some((t, w)) = row.iter().find(|(t, w)| *t >= n || !(*w >= 0.0)) {
                return Err(Error::NotStochastic(format!("row {s} has entry {w} at column {t}")));
            }
            let total: f64 = row.iter().map(|(_, w)| w).sum();
            if (total - 1.0).abs() > ROW_SUM_TOLERANCE {
                return Err(Error::NotStochastic(format!("row {s} sums to {total}")));
            }
        }
        Ok(Self { rows, structurally_irreducible: false })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    /// Nonzero entries of a row.
    pub fn row(&self, state: usize) -> &[(usize, f64)] {
        &self.rows[state]
    }

    pub fn entry(&self, from: usize, to: usize) -> f64 {
        self.rows[from].iter().filter(|(t, _)| *t == to).map(|(_, w)| w).sum()
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let n = self.size();
        let mut m = DMatrix::zeros(n, n);
        for (s, row) in self.rows.iter().enumerate() {
            for &(t, w) in row {
                m[(s, t)] += w;
            }
        }
        m
    }

    /// Every state reaches state 0 and is reached from it.
    pub fn is_irreducible(&self) -> bool {
        if self.structurally_irreducible {
            return true;
        }
        let n = self.size();
        let mut reverse = vec![Vec::new(); n];
        for (s, row) in self.rows.iter().enumerate() {
            for &(t, w) in row {
                if w > 0.0 {
                    reverse[t].push(s);
                }
            }
        }
        let forward: Vec<Vec<usize>> = self
            .rows
            .iter()
            .map(|row| row.iter().filter(|(_, w)| *w > 0.0).map(|(t, _)| *t).collect())
            .collect();
        reaches_all(&forward) && reaches_all(&reverse)
    }
}

fn reaches_all(adjacency: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adjacency.len()];
    let mut queue = VecDeque::from([0usize]);
    seen[0] = true;
    while let Some(s) = queue.pop_front() {
        for &t in &adjacency[s] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    seen.into_iter().all(|b| b)
}

/// One-step transition matrix of the machine's `(cam, pointer)` chain.
pub fn transition_matrix(spec: &MachineSpec) -> TransitionMatrix {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let mut rows = Vec::with_capacity(cams * j_len);
    for cam in 0..cams {
        let next = (cam + 1) % cams;
        let p = spec.dists()[cam].p();
        for pointer in 0..j_len {
            let reset = MachineState::new(next, 0).index(j_len);
            if pointer == j_len - 1 {
                rows.push(vec![(reset, 1.0)]);
            } else {
                let advance = MachineState::new(next, pointer + 1).index(j_len);
                rows.push(vec![(reset, p), (advance, 1.0 - p)]);
            }
        }
    }
    TransitionMatrix { rows, structurally_irreducible: true }
}

/// Solves `pi = pi P`, `sum(pi) = 1` by a direct dense LU solve.
///
/// Works for periodic chains too, since an irreducible chain has a unique
/// stationary vector regardless of period.
pub fn stationary_oracle(tm: &TransitionMatrix) -> Result<Vec<f64>> {
    if !tm.is_irreducible() {
        return Err(Error::Reducible);
    }
    let n = tm.size();
    let mut a = tm.to_dense().transpose() - DMatrix::identity(n, n);
    for c in 0..n {
        a[(n - 1, c)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let x = a.lu().solve(&b).ok_or(Error::SingularSystem)?;
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(x.iter().copied().collect())
}

/// [`stationary_oracle`] on a machine's chain, reshaped to `I x J`.
pub fn stationary_oracle_matrix(spec: &MachineSpec) -> Result<DMatrix<f64>> {
    let flat = stationary_oracle(&transition_matrix(spec))?;
    Ok(DMatrix::from_row_slice(spec.cams(), spec.award_length(), &flat))
}

/// Stationary law of the chain together with the equilibrium scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryLaw {
    /// `I x J`, rows are cam positions and columns pointer positions.
    pub pi: DMatrix<f64>,
    /// Probability that a given coup pays the Futurity award.
    pub p_award: f64,
    /// Long-run mean payout per coup, award included.
    pub mu_star: f64,
    /// Long-run hit frequency, award included.
    pub p_star: f64,
    /// `Q = q_0 ... q_{I-1}`.
    pub loss_product: f64,
}

/// Closed-form stationary distribution.
///
/// Column 0 comes from counting the ways the pointer can sit at zero: a win
/// on the previous coup, or a completed run of `kJ` losses preceded by a win,
/// with runs longer than one cam cycle folded into the `1 / (1 - Q)` factor.
/// The remaining columns follow from `pi(i, j) = q_{i-1} pi(i-1, j-1)`.
pub fn stationary_closed_form(spec: &MachineSpec) -> StationaryLaw {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let d = spec.periods_per_cycle();
    let loss_product = spec.loss_product();
    let norm = cams as f64 * (1.0 - loss_product);

    let mut pi = DMatrix::zeros(cams, j_len);
    for i in 0..cams {
        let numerator: f64 = (0..d).map(|k| spec.win_then_award_run(i as i64, k)).sum();
        pi[(i, 0)] = numerator / norm;
    }
    for j in 1..j_len {
        for i in 0..cams {
            let prev = (i + cams - 1) % cams;
            pi[(i, j)] = spec.dists()[prev].q() * pi[(prev, j - 1)];
        }
    }

    let mut law = StationaryLaw { pi, p_award: 0.0, mu_star: 0.0, p_star: 0.0, loss_product };
    law.p_award = award_probability(spec, &law);
    law.mu_star = mean_payout(spec, &law);
    law.p_star = hit_frequency(spec, &law);
    law
}

/// Boundary columns `pi(., 0)` and `pi(., J-1)` from the simplified `I = J`
/// expressions; `None` when `I != J`.
pub fn single_period_columns(spec: &MachineSpec) -> Option<(Vec<f64>, Vec<f64>)> {
    if spec.periods_per_cycle() != 1 {
        return None;
    }
    let j_len = spec.award_length() as f64;
    let big_q = spec.loss_product();
    let first = (0..spec.cams() as i64)
        .map(|i| spec.p(i - 1) / (j_len * (1.0 - big_q)))
        .collect();
    let last = (0..spec.cams() as i64)
        .map(|i| spec.p(i) * big_q / (spec.q(i) * j_len * (1.0 - big_q)))
        .collect();
    Some((first, last))
}

/// Award probability `p° = sum_i pi(i, J-1) q_i`.
pub fn award_probability(spec: &MachineSpec, law: &StationaryLaw) -> f64 {
    let last = spec.award_length() - 1;
    (0..spec.cams()).map(|i| law.pi[(i, last)] * spec.dists()[i].q()).sum()
}

/// `p° = (mean p_i) Q / (1 - Q)`, valid only when `I = J`.
pub fn award_probability_single_period(spec: &MachineSpec) -> Option<f64> {
    if spec.periods_per_cycle() != 1 {
        return None;
    }
    let big_q = spec.loss_product();
    Some(mean_hit_probability(spec) * big_q / (1.0 - big_q))
}

fn mean_hit_probability(spec: &MachineSpec) -> f64 {
    spec.dists().iter().map(|d| d.p()).sum::<f64>() / spec.cams() as f64
}

fn mean_base_payout(spec: &MachineSpec) -> f64 {
    spec.dists().iter().map(|d| d.mean()).sum::<f64>() / spec.cams() as f64
}

/// `mu* = I^{-1} sum mu_i + J p°`.
pub fn mean_payout(spec: &MachineSpec, law: &StationaryLaw) -> f64 {
    mean_base_payout(spec) + spec.award_length() as f64 * law.p_award
}

/// `p* = I^{-1} sum p_i + p°`.
pub fn hit_frequency(spec: &MachineSpec, law: &StationaryLaw) -> f64 {
    mean_hit_probability(spec) + law.p_award
}

/// Long-run distribution of the state `(i, 0)` immediately after a nonzero
/// payout (award included), indexed by cam `i`.
pub fn post_payout_distribution(spec: &MachineSpec, law: &StationaryLaw) -> Vec<f64> {
    let cams = spec.cams();
    let last = spec.award_length() - 1;
    let denom = mean_hit_probability(spec) + law.p_award;
    (0..cams)
        .map(|i| {
            let prev = (i + cams - 1) % cams;
            let d = &spec.dists()[prev];
            (d.p() / cams as f64 + law.pi[(prev, last)] * d.q()) / denom
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{futurity1936, PayoutDistribution};

    fn bernoulli_spec(award_length: usize, ps: &[f64]) -> MachineSpec {
        let dists = ps
            .iter()
            .map(|&p| PayoutDistribution::from_probs([(0, 1.0 - p), (1, p)]).unwrap())
            .collect();
        MachineSpec::new(award_length, dists).unwrap()
    }

    #[test]
    fn futurity_first_row() {
        let tm = transition_matrix(&futurity1936());
        let row = tm.row(0);
        assert_eq!(row.len(), 2);
        assert!((tm.entry(0, MachineState::new(1, 1).index(10)) - 0.968).abs() < 1e-15);
        assert!((tm.entry(0, MachineState::new(1, 0).index(10)) - 0.032).abs() < 1e-15);
    }

    #[test]
    fn forced_reset_rows() {
        let spec = bernoulli_spec(3, &[0.2, 0.4, 0.6, 0.5, 0.1, 0.9]);
        let tm = transition_matrix(&spec);
        for cam in 0..6 {
            let s = MachineState::new(cam, 2).index(3);
            assert_eq!(tm.row(s), &[(MachineState::new((cam + 1) % 6, 0).index(3), 1.0)]);
        }
    }

    #[test]
    fn rows_are_stochastic_and_cam_advances() {
        let spec = futurity1936();
        let tm = transition_matrix(&spec);
        for s in 0..tm.size() {
            let total: f64 = tm.row(s).iter().map(|(_, w)| w).sum();
            assert!((total - 1.0).abs() < 1e-15);
            assert!(tm.row(s).len() <= 2);
            for &(t, _) in tm.row(s) {
                assert_eq!(t / 10, (s / 10 + 1) % 10);
            }
        }
        assert!(TransitionMatrix::from_rows(tm.rows.clone()).unwrap().is_irreducible());
    }

    #[test]
    fn closed_form_rows_sum_to_one_over_i() {
        let spec = bernoulli_spec(3, &[0.2, 0.4, 0.6, 0.5, 0.1, 0.9]);
        let law = stationary_closed_form(&spec);
        for i in 0..6 {
            let row: f64 = law.pi.row(i).sum();
            assert!((row - 1.0 / 6.0).abs() < 1e-14);
        }
        assert!(law.pi.iter().all(|v| *v > 0.0));
    }

    #[test]
    fn two_by_two_matches_linear_solve() {
        let spec = bernoulli_spec(2, &[0.5, 0.5]);
        let law = stationary_closed_form(&spec);
        let oracle = stationary_oracle_matrix(&spec).unwrap();
        assert!((&law.pi - &oracle).amax() < 1e-14);
        // hand solution: pi(i,0) = 1/3, pi(i,1) = 1/6
        assert!((law.pi[(0, 0)] - 1.0 / 3.0).abs() < 1e-15);
        assert!((law.pi[(1, 1)] - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn deterministic_cycle() {
        let tm = TransitionMatrix::from_rows(vec![vec![(1, 1.0)], vec![(0, 1.0)]]).unwrap();
        let pi = stationary_oracle(&tm).unwrap();
        assert!((pi[0] - 0.5).abs() < 1e-15 && (pi[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_chain_is_reducible() {
        let tm = TransitionMatrix::from_rows(vec![vec![(0, 1.0)], vec![(1, 1.0)]]).unwrap();
        assert_eq!(stationary_oracle(&tm), Err(Error::Reducible));
    }

    #[test]
    fn non_stochastic_rows_rejected() {
        assert!(TransitionMatrix::from_rows(vec![vec![(0, 0.5)]]).is_err());
        assert!(TransitionMatrix::from_rows(vec![vec![(3, 1.0)]]).is_err());
    }

    #[test]
    fn symmetric_award_probability() {
        let p: f64 = 0.3;
        let spec = bernoulli_spec(4, &[p; 4]);
        let law = stationary_closed_form(&spec);
        let big_q = (1.0 - p).powi(4);
        assert!((law.p_award - p * big_q / (1.0 - big_q)).abs() < 1e-15);
        let rho = post_payout_distribution(&spec, &law);
        for r in &rho {
            assert!((r - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn nearly_sure_wins_kill_the_award() {
        let spec = bernoulli_spec(3, &[0.999; 3]);
        let law = stationary_closed_form(&spec);
        assert!(law.p_award < 1e-8);
        assert!((law.mu_star - 0.999).abs() < 1e-7);
    }

    #[test]
    fn single_period_formulas_agree() {
        let spec = futurity1936();
        let law = stationary_closed_form(&spec);
        let (first, last) = single_period_columns(&spec).unwrap();
        for i in 0..10 {
            assert!((law.pi[(i, 0)] - first[i]).abs() < 1e-14);
            assert!((law.pi[(i, 9)] - last[i]).abs() < 1e-14);
        }
        let simple = award_probability_single_period(&spec).unwrap();
        assert!((simple - law.p_award).abs() < 1e-14);
        assert!(single_period_columns(&spec.clone()).is_some());
        let d2 = bernoulli_spec(2, &[0.2, 0.4, 0.6, 0.5]);
        assert!(single_period_columns(&d2).is_none());
    }
}
