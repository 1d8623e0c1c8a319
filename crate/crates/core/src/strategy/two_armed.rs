//! Long-run means of the two-armed machine under blind and pointer-aware
//! strategies.
//!
//! Gaps are computed directly as `J` times a difference of award
//! probabilities, never as a difference of means, so that tiny gaps at
//! extreme parameters keep their sign.

use crate::equilibrium::{award_probability, stationary_closed_form, TransitionMatrix};
use crate::error::{Error, Result};
use crate::machine::MachineSpec;

use super::{Pattern, TwoArmedSpec};

/// `p° = p q^J / (1 - q^J)` for one arm played alone.
pub fn single_arm_award_probability(p: f64, award_length: usize) -> f64 {
    let qj = (1.0 - p).powi(award_length as i32);
    p * qj / (1.0 - qj)
}

/// `mu* = mu + J p°` for one arm played alone.
pub fn single_arm_mean(p: f64, mu: f64, award_length: usize) -> f64 {
    mu + award_length as f64 * single_arm_award_probability(p, award_length)
}

/// Base mean payout that makes an arm with hit probability `p` fair.
pub fn fair_mu(p: f64, award_length: usize) -> f64 {
    1.0 - award_length as f64 * single_arm_award_probability(p, award_length)
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::BadGamma(gamma))
    }
}

/// `mu*_C` for the random mixture `C = gamma A + (1 - gamma) B`.
pub fn mixture_mean(spec: &TwoArmedSpec, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let (a, b) = (&spec.arm_a, &spec.arm_b);
    let p_c = gamma * a.p() + (1.0 - gamma) * b.p();
    let mu_c = gamma * a.mean() + (1.0 - gamma) * b.mean();
    Ok(single_arm_mean(p_c, mu_c, spec.award_length()))
}

/// `mu*_C - [gamma mu*_A + (1 - gamma) mu*_B]`; negative whenever
/// `p_A != p_B`.
pub fn mixture_gap(spec: &TwoArmedSpec, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    let j = spec.award_length();
    let (p_a, p_b) = (spec.arm_a.p(), spec.arm_b.p());
    // written around p_B so that equal arms give exactly zero
    let p_c = p_b + gamma * (p_a - p_b);
    let (f_a, f_b) = (single_arm_award_probability(p_a, j), single_arm_award_probability(p_b, j));
    let mixed = single_arm_award_probability(p_c, j);
    let separate = f_b + gamma * (f_a - f_b);
    Ok(j as f64 * (mixed - separate))
}

/// Casino win rate of the half-and-half mixture,
/// `J [ (p_A° + p_B°)/2 - p_C° ]`; equals `-mixture_gap` at `gamma = 1/2`.
pub fn casino_win_rate(p_a: f64, p_b: f64, award_length: usize) -> f64 {
    let j = award_length;
    let separate =
        0.5 * (single_arm_award_probability(p_a, j) + single_arm_award_probability(p_b, j));
    j as f64 * (separate - single_arm_award_probability(0.5 * (p_a + p_b), j))
}

/// `(1/2) [1 - J 2^{-J} / (1 - 2^{-J})]`, approached as `p_A -> 0`,
/// `p_B -> 1`.
pub fn casino_win_rate_supremum(award_length: usize) -> f64 {
    let half_j = 0.5f64.powi(award_length as i32);
    0.5 * (1.0 - award_length as f64 * half_j / (1.0 - half_j))
}

/// Hit probabilities of the pattern's pulls in playing order.
fn pattern_hits(spec: &TwoArmedSpec, pattern: &Pattern) -> Vec<f64> {
    pattern.arms().iter().map(|a| spec.arm(*a).p()).collect()
}

/// Award probability per coup under a repeated pattern, by the double sum
/// over the phase `j` of the last win and the number `k` of award-length
/// blocks in the loss run, with partial-cycle products written out.
pub fn pattern_award_probability(spec: &TwoArmedSpec, pattern: &Pattern) -> f64 {
    let n = pattern.len();
    let j_len = spec.award_length();
    let hits = pattern_hits(spec, pattern);
    // positions are 1-based and extended periodically over two cycles
    let p_at = |i: usize| hits[(i - 1) % n];
    let q_at = |i: usize| 1.0 - p_at(i);
    let cycle: f64 = (1..=n).map(q_at).product();
    let denom = 1.0 - cycle.powi(j_len as i32);

    let mut total = 0.0;
    for k in 1..=n {
        let full = k * j_len / n;
        let rem = k * j_len - n * full;
        let inner: f64 = (1..=n)
            .map(|j| p_at(j) * (j + 1..=j + rem).map(q_at).product::<f64>())
            .sum();
        total += inner * cycle.powi(full as i32) / denom;
    }
    total / n as f64
}

/// Closed form when `r + s` divides `J`; `None` otherwise.
pub fn pattern_award_probability_divisible(spec: &TwoArmedSpec, pattern: &Pattern) -> Option<f64> {
    let (r, s) = (pattern.r(), pattern.s());
    let n = r + s;
    let j_len = spec.award_length();
    if j_len % n != 0 {
        return None;
    }
    let (a, b) = (&spec.arm_a, &spec.arm_b);
    let mean_p = (r as f64 * a.p() + s as f64 * b.p()) / n as f64;
    let g = (a.q().powi(r as i32) * b.q().powi(s as i32)).powi((j_len / n) as i32);
    Some(mean_p * g / (1.0 - g))
}

/// One-armed machine with `I = (r + s) J` cams following the pattern
/// cyclically.
pub fn pattern_machine(spec: &TwoArmedSpec, pattern: &Pattern) -> Result<MachineSpec> {
    let j_len = spec.award_length();
    let dists = (0..pattern.len() * j_len)
        .map(|c| spec.arm(pattern.arms()[c % pattern.len()]).clone())
        .collect();
    MachineSpec::new(j_len, dists)
}

/// Pattern award probability from the stationary law of the induced
/// one-armed machine.
pub fn pattern_award_probability_via_machine(spec: &TwoArmedSpec, pattern: &Pattern) -> Result<f64> {
    let machine = pattern_machine(spec, pattern)?;
    let law = stationary_closed_form(&machine);
    Ok(award_probability(&machine, &law))
}

/// `mu*_D = (r mu_A + s mu_B) / (r + s) + J p_D°`.
pub fn pattern_mean(spec: &TwoArmedSpec, pattern: &Pattern) -> f64 {
    let (r, s) = (pattern.r() as f64, pattern.s() as f64);
    let base = (r * spec.arm_a.mean() + s * spec.arm_b.mean()) / (r + s);
    base + spec.award_length() as f64 * pattern_award_probability(spec, pattern)
}

/// `mu*_D - (r mu*_A + s mu*_B) / (r + s)`.
pub fn pattern_gap(spec: &TwoArmedSpec, pattern: &Pattern) -> f64 {
    let j = spec.award_length();
    let (r, s) = (pattern.r() as f64, pattern.s() as f64);
    let separate = (r * single_arm_award_probability(spec.arm_a.p(), j)
        + s * single_arm_award_probability(spec.arm_b.p(), j))
        / (r + s);
    j as f64 * (pattern_award_probability(spec, pattern) - separate)
}

fn check_threshold(award_length: usize, k: usize) -> Result<()> {
    if k < 1 || k >= award_length {
        return Err(Error::BadK { k, max: award_length.saturating_sub(1) });
    }
    Ok(())
}

/// Pointer chain of the threshold strategy: arm A at pointer `0..K`, arm B
/// at `K..J`.
pub fn pointer_chain(p_a: f64, p_b: f64, award_length: usize, k: usize) -> Result<TransitionMatrix> {
    check_threshold(award_length, k)?;
    let rows = (0..award_length)
        .map(|j| {
            if j == award_length - 1 {
                vec![(0, 1.0)]
            } else {
                let p = if j < k { p_a } else { p_b };
                vec![(0, p), (j + 1, 1.0 - p)]
            }
        })
        .collect();
    TransitionMatrix::from_rows(rows)
}

/// Closed-form stationary law of [`pointer_chain`].
pub fn pointer_stationary(p_a: f64, p_b: f64, award_length: usize, k: usize) -> Result<Vec<f64>> {
    check_threshold(award_length, k)?;
    let (q_a, q_b) = (1.0 - p_a, 1.0 - p_b);
    let weights: Vec<f64> = (0..award_length)
        .map(|j| {
            if j < k {
                q_a.powi(j as i32)
            } else {
                q_a.powi(k as i32) * q_b.powi((j - k) as i32)
            }
        })
        .collect();
    let c: f64 = weights.iter().sum();
    Ok(weights.into_iter().map(|w| w / c).collect())
}

/// Long-run mean payout of the threshold strategy for arbitrary arm means.
pub fn pointer_strategy_mean(spec: &TwoArmedSpec, k: usize) -> Result<f64> {
    let j_len = spec.award_length();
    let (a, b) = (&spec.arm_a, &spec.arm_b);
    let pi = pointer_stationary(a.p(), b.p(), j_len, k)?;
    let mass_a: f64 = pi[..k].iter().sum();
    let mass_b: f64 = pi[k..].iter().sum();
    Ok(mass_a * a.mean() + mass_b * b.mean() + j_len as f64 * pi[j_len - 1] * b.q())
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointerAnalysis {
    pub stationary: Vec<f64>,
    pub mu_star: f64,
    /// `mu* - 1`: positive means the player beats the machine.
    pub player_edge: f64,
    /// The casino profits, i.e. the pointer strategy loses to fair play.
    pub parrondo_effect: bool,
}

/// Threshold strategy with both arms made fair.
pub fn pointer_strategy_analysis(
    p_a: f64,
    p_b: f64,
    award_length: usize,
    k: usize,
) -> Result<PointerAnalysis> {
    let stationary = pointer_stationary(p_a, p_b, award_length, k)?;
    let j = award_length as f64;
    let (q_a, q_b) = (1.0 - p_a, 1.0 - p_b);
    let mass_a: f64 = stationary[..k].iter().sum();
    let mass_b: f64 = stationary[k..].iter().sum();
    let player_edge = j
        * (stationary[award_length - 1] * q_b
            - mass_a * single_arm_award_probability(p_a, award_length)
            - mass_b * single_arm_award_probability(p_b, award_length));

    // the sign of the edge reduces to q_A^K [f(q_A) - f(q_B)] with
    // f(x) = (1 - x^L) / (1 - x^J); exact zero at p_A = p_B
    let l = (award_length - k) as i32;
    let jj = award_length as i32;
    let f = |x: f64| (1.0 - x.powi(l)) / (1.0 - x.powi(jj));
    let parrondo_effect = q_a.powi(k as i32) * (f(q_a) - f(q_b)) < 0.0;

    Ok(PointerAnalysis { stationary, mu_star: 1.0 + player_edge, player_edge, parrondo_effect })
}
