//! Central limit theorem parameters for the payout sequence.
//!
//! Coups are numbered `1, 2, ...`; coup `n` is played at cam `n - 1 (mod I)`.
//! A segment `S_k*` is the total payout, awards included, of the `I` coups
//! `kI + 1, ..., (k + 1)I`. All quantities here are closed forms in the basic
//! parameters `I, J, p_i, mu_i, sigma_i^2`.
//!
//! The recurring building block is `W(j, k) = q_{j-1} ... q_{j-kJ} p_{j-kJ-1}`,
//! the probability that coup `j` completes a run of exactly `kJ` losses
//! started after a win (see [`MachineSpec::win_then_award_run`]). Infinite
//! sums of `W` over `k` are folded with `W(j, k + d) = Q W(j, k)`.

use crate::cyclic::wrap;
use crate::error::{Error, Result};
use crate::machine::MachineSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CltParameters {
    /// `P_0, ..., P_{I-1}`: probability that the coup at cam `c` pays the
    /// Futurity award, at stationarity.
    pub run_probabilities: Vec<f64>,
    /// `E[S_0*]`.
    pub mu_bar: f64,
    /// `Var(S_0*)`.
    pub var_segment: f64,
    /// `Cov(S_0*, S_1*)`.
    pub cov_adjacent: f64,
    /// `sum_{m >= 1} Cov(S_0*, S_m*)`.
    pub cov_tail: f64,
    pub sigma_bar_sq: f64,
    /// `sigma_bar_sq / I`.
    pub sigma_star_sq: f64,
    /// `Q`, the ratio between consecutive inter-segment covariances.
    pub loss_product: f64,
}

impl CltParameters {
    /// Long-run mean payout per coup, `mu_bar / I`.
    pub fn mu_star(&self) -> f64 {
        self.mu_bar / self.run_probabilities.len() as f64
    }
}

/// Sums in pairs to keep rounding error logarithmic in the term count.
pub(crate) fn pairwise_sum(xs: &[f64]) -> f64 {
    match xs.len() {
        0 => 0.0,
        1 => xs[0],
        2 => xs[0] + xs[1],
        n => {
            let (a, b) = xs.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// Shared indexing for the within- and between-segment covariance terms.
struct Terms<'a> {
    spec: &'a MachineSpec,
    run: Vec<f64>,
    big_q: f64,
    award: f64,
}

impl<'a> Terms<'a> {
    fn new(spec: &'a MachineSpec) -> Self {
        Self {
            spec,
            run: run_probabilities(spec),
            big_q: spec.loss_product(),
            award: spec.award_length() as f64,
        }
    }

    fn j_len(&self) -> i64 {
        self.spec.award_length() as i64
    }

    /// `P_{n-1}` for coup `n`.
    fn run_at(&self, coup: i64) -> f64 {
        self.run[wrap(coup - 1, self.spec.cams())]
    }

    /// `mu_{n-1}` for coup `n`.
    fn mu_at(&self, coup: i64) -> f64 {
        self.spec.mu(coup - 1)
    }

    /// `sum_{1 <= k < gap/J} W(j, k)`, i.e. `k = 1 .. ceil(gap/J) - 1`.
    fn head(&self, j: i64, gap: i64) -> f64 {
        let upper = (gap + self.j_len() - 1) / self.j_len();
        (1..upper).map(|k| self.spec.win_then_award_run(j, k as usize)).sum()
    }

    /// `sum_{k > after} W(j, k)` in finite form: with `after = a d + b`,
    /// `Q^a (sum_{b < k <= d} W(j, k) + Q P_{j-1})`.
    fn beyond(&self, j: i64, after: usize) -> f64 {
        let d = self.spec.periods_per_cycle();
        let (a, b) = (after / d, after % d);
        let partial: f64 = (b + 1..=d).map(|k| self.spec.win_then_award_run(j, k)).sum();
        self.big_q.powi(a as i32) * (partial + self.big_q * self.run_at(j))
    }

    /// `j - i == 0 (mod J)`.
    fn congruent(&self, gap: i64) -> bool {
        gap % self.j_len() == 0
    }

    /// `Cov(R_i*, R_j*)` for `1 <= i < j <= I`.
    fn a_ij(&self, i: i64, j: i64) -> f64 {
        let gap = j - i;
        let head = self.head(j, gap);
        let (p_i, p_j) = (self.run_at(i), self.run_at(j));
        let (lead, joint) = if self.congruent(gap) {
            (
                self.spec.losses_before(j, gap as usize),
                self.beyond(j, (gap / self.j_len()) as usize),
            )
        } else {
            (0.0, 0.0)
        };
        self.award * self.mu_at(i) * (head + lead - p_j)
            + self.award * self.award * (head * p_i + joint - p_i * p_j)
    }

    /// Payout part of `Cov(R_i*, R_{mI+j}*) / Q^{m-1}`.
    fn b_ij(&self, i: i64, j: i64) -> f64 {
        let gap = self.spec.cams() as i64 + j - i;
        let lead = if self.congruent(gap) {
            self.spec.losses_before(j, gap as usize)
        } else {
            0.0
        };
        self.mu_at(i) * (-self.run_at(j) + self.head(j, gap) + lead)
    }

    /// Award part of `Cov(R_i*, R_{mI+j}*) / Q^{m-1}`.
    fn c_ij(&self, i: i64, j: i64) -> f64 {
        let gap = self.spec.cams() as i64 + j - i;
        let (p_i, p_j) = (self.run_at(i), self.run_at(j));
        let joint = if self.congruent(gap) {
            self.beyond(j, (gap / self.j_len()) as usize)
        } else {
            0.0
        };
        -p_i * p_j + self.head(j, gap) * p_i + joint
    }

    fn var_single(&self, cam: usize) -> f64 {
        let p = self.run[cam];
        let j = self.award;
        self.spec.sigma_sq(cam as i64) - 2.0 * j * self.spec.mu(cam as i64) * p
            + j * j * p * (1.0 - p)
    }

    fn var_segment(&self) -> f64 {
        let cams = self.spec.cams() as i64;
        let mut terms: Vec<f64> = (0..cams as usize).map(|c| self.var_single(c)).collect();
        for i in 1..=cams {
            for j in i + 1..=cams {
                terms.push(2.0 * self.a_ij(i, j));
            }
        }
        pairwise_sum(&terms)
    }

    /// `sum_{i,j} (J B_ij + J^2 C_ij)`, the `m = 1` covariance.
    fn between_segments(&self) -> f64 {
        let cams = self.spec.cams() as i64;
        let mut terms = Vec::with_capacity((cams * cams) as usize);
        for i in 1..=cams {
            for j in 1..=cams {
                terms.push(self.award * self.b_ij(i, j) + self.award * self.award * self.c_ij(i, j));
            }
        }
        pairwise_sum(&terms)
    }
}

/// `P_0, ..., P_{I-1}`, where `P_{i-1} = (1-Q)^{-1} sum_{k=1}^d W(i, k)`.
pub fn run_probabilities(spec: &MachineSpec) -> Vec<f64> {
    let d = spec.periods_per_cycle();
    let norm = 1.0 - spec.loss_product();
    (1..=spec.cams() as i64)
        .map(|i| (1..=d).map(|k| spec.win_then_award_run(i, k)).sum::<f64>() / norm)
        .collect()
}

/// `Var(S_0*)`.
pub fn variance_segment(spec: &MachineSpec) -> f64 {
    Terms::new(spec).var_segment()
}

/// `Cov(S_0*, S_m*)` for `m >= 1`.
pub fn covariance_between_segments(spec: &MachineSpec, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::BadConfig("segment lag must be at least 1".into()));
    }
    let terms = Terms::new(spec);
    Ok(terms.big_q.powi(m as i32 - 1) * terms.between_segments())
}

/// `sum_{m >= 1} Cov(S_0*, S_m*)`.
pub fn covariance_tail(spec: &MachineSpec) -> f64 {
    let terms = Terms::new(spec);
    terms.between_segments() / (1.0 - terms.big_q)
}

pub fn clt_parameters(spec: &MachineSpec) -> Result<CltParameters> {
    let terms = Terms::new(spec);
    let j = terms.award;
    let mu_bar: f64 = (0..spec.cams()).map(|c| spec.mu(c as i64) + j * terms.run[c]).sum();
    let var_segment = terms.var_segment();
    let cov_adjacent = terms.between_segments();
    let cov_tail = cov_adjacent / (1.0 - terms.big_q);
    let sigma_bar_sq = var_segment + 2.0 * cov_tail;
    if !(sigma_bar_sq > 0.0) {
        return Err(Error::DegenerateVariance(sigma_bar_sq));
    }
    Ok(CltParameters {
        run_probabilities: terms.run,
        mu_bar,
        var_segment,
        cov_adjacent,
        cov_tail,
        sigma_bar_sq,
        sigma_star_sq: sigma_bar_sq / spec.cams() as f64,
        loss_product: terms.big_q,
    })
}
