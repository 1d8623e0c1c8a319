//! Expected casino cumulative profit curves for two-armed strategies, by
//! pushing the state distribution forward one coup at a time.

use crate::error::Result;

use super::{Arm, Strategy, TwoArmedSpec};

pub type FigureStrategy = Strategy;

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub label: String,
    /// Entry `n - 1` is the expected casino profit after `n` coups.
    pub casino_profit: Vec<f64>,
}

impl Strategy {
    pub(crate) fn period(&self) -> usize {
        match self {
            Strategy::Pattern(p) => p.len(),
            _ => 1,
        }
    }

    /// Probability of pulling arm A in the given pattern phase and pointer.
    pub(crate) fn weight_a(&self, phase: usize, pointer: usize) -> f64 {
        match self {
            Strategy::SingleArm(Arm::A) => 1.0,
            Strategy::SingleArm(Arm::B) => 0.0,
            Strategy::Mixture(g) => *g,
            Strategy::Pattern(p) => {
                if p.arms()[phase] == Arm::A {
                    1.0
                } else {
                    0.0
                }
            }
            Strategy::PointerThreshold(k) => {
                if pointer < *k {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

/// Exact expected casino profit after each of `horizon` coups, starting with
/// the pointer at 0 (and a pattern at its first pull).
pub fn expected_casino_profit(
    spec: &TwoArmedSpec,
    strategy: &Strategy,
    horizon: usize,
) -> Result<Vec<f64>> {
    let j_len = spec.award_length();
    strategy.validate(j_len)?;
    let period = strategy.period();
    let award = j_len as f64;
    let (a, b) = (&spec.arm_a, &spec.arm_b);

    let mut dist = vec![0.0; period * j_len];
    dist[0] = 1.0;
    let mut next = vec![0.0; period * j_len];
    let mut cumulative = 0.0;
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        next.iter_mut().for_each(|v| *v = 0.0);
        let mut payout = 0.0;
        for phase in 0..period {
            let to_phase = (phase + 1) % period;
            for pointer in 0..j_len {
                let mass = dist[phase * j_len + pointer];
                if mass == 0.0 {
                    continue;
                }
                let w = strategy.weight_a(phase, pointer);
                let p_win = w * a.p() + (1.0 - w) * b.p();
                let base = w * a.mean() + (1.0 - w) * b.mean();
                let q = 1.0 - p_win;
                payout += mass * base;
                next[to_phase * j_len] += mass * p_win;
                if pointer == j_len - 1 {
                    payout += mass * award * q;
                    next[to_phase * j_len] += mass * q;
                } else {
                    next[to_phase * j_len + pointer + 1] += mass * q;
                }
            }
        }
        cumulative += 1.0 - payout;
        out.push(cumulative);
        std::mem::swap(&mut dist, &mut next);
    }
    Ok(out)
}

/// One curve per strategy, labelled by the strategy's display form.
pub fn figure1_curves(
    spec: &TwoArmedSpec,
    roster: &[Strategy],
    horizon: usize,
) -> Result<Vec<Curve>> {
    roster
        .iter()
        .map(|s| {
            Ok(Curve { label: s.to_string(), casino_profit: expected_casino_profit(spec, s, horizon)? })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategy::{mixture_gap, pointer_strategy_analysis};

    fn spec() -> TwoArmedSpec {
        TwoArmedSpec::fair(0.3, 1.0 / 15.0, 10).unwrap()
    }

    #[test]
    fn slopes_approach_long_run_rates() {
        let spec = spec();
        let horizon = 4000;
        let mix = expected_casino_profit(&spec, &Strategy::Mixture(0.5), horizon).unwrap();
        let slope = mix[horizon - 1] - mix[horizon - 2];
        assert!((slope + mixture_gap(&spec, 0.5).unwrap()).abs() < 1e-9);

        let ptr = expected_casino_profit(&spec, &Strategy::PointerThreshold(4), horizon).unwrap();
        let slope = ptr[horizon - 1] - ptr[horizon - 2];
        let edge = pointer_strategy_analysis(0.3, 1.0 / 15.0, 10, 4).unwrap().player_edge;
        assert!((slope + edge).abs() < 1e-9);
    }

    #[test]
    fn fair_single_arm_profit_levels_off() {
        let c = expected_casino_profit(&spec(), &Strategy::SingleArm(Arm::B), 3000).unwrap();
        assert!((c[2999] - c[2998]).abs() < 1e-9);
    }

    #[test]
    fn first_coup_profit() {
        // pointer 0 cannot pay an award on the first coup
        let s = spec();
        let c = expected_casino_profit(&s, &Strategy::SingleArm(Arm::A), 1).unwrap();
        assert!((c[0] - (1.0 - s.arm_a.mean())).abs() < 1e-15);
    }
}
