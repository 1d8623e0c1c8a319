#![allow(dead_code)]

use futurity::equilibrium::stationary_oracle_matrix;
use futurity::machine::{MachineSpec, PayoutDistribution};
use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use proptest::prelude::*;
use std::collections::BTreeMap;

/// Exact joint moments of segment sums `S_0*, ..., S_{k-1}*` (segments of
/// `I` coups, the first starting at cam 0 in the stationary pointer law),
/// found by enumerating every outcome sequence of `kI` coups in rational
/// arithmetic. Needs exact distributions.
pub struct SegmentMoments {
    pub means: Vec<f64>,
    /// `cov[a][b] = Cov(S_a*, S_b*)`.
    pub cov: Vec<Vec<f64>>,
}

fn rat(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Stationary law of the driving chain by Gauss-Jordan elimination over the
/// rationals, as an `I x J` row-major vector.
pub fn exact_stationary(spec: &MachineSpec) -> Vec<BigRational> {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let n = cams * j_len;
    // rows of (P^T - I), last row replaced by ones
    let mut a = vec![vec![BigRational::zero(); n + 1]; n];
    for c in 0..cams {
        let p = spec.dists()[c].exact_hit_probability().unwrap();
        let q = BigRational::one() - &p;
        let next = (c + 1) % cams;
        for j in 0..j_len {
            let from = c * j_len + j;
            if j == j_len - 1 {
                a[next * j_len][from] += BigRational::one();
            } else {
                a[next * j_len][from] += p.clone();
                a[next * j_len + j + 1][from] += q.clone();
            }
            a[from][from] -= BigRational::one();
        }
    }
    for v in a[n - 1].iter_mut() {
        *v = BigRational::one();
    }
    for col in 0..n {
        let pivot = (col..n).find(|r| !a[*r][col].is_zero()).unwrap();
        a.swap(col, pivot);
        let lead = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &lead;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(&pivot_row) {
                    *v = &*v - &f * pv;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n].clone()).collect()
}

pub fn enumerate_segments(spec: &MachineSpec, k: usize) -> SegmentMoments {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let pi = exact_stationary(spec);
    let mut first = vec![BigRational::zero(); k];
    let mut second = vec![vec![BigRational::zero(); k]; k];
    let dists: Vec<Vec<(u64, BigRational)>> = spec
        .dists()
        .iter()
        .map(|d| {
            let probs = d.exact_probs().expect("exact distribution");
            d.atoms().iter().map(|a| a.payout).zip(probs.iter().cloned()).collect()
        })
        .collect();

    struct Walk<'a> {
        dists: &'a [Vec<(u64, BigRational)>],
        j_len: usize,
        total: usize,
        first: &'a mut [BigRational],
        second: &'a mut [Vec<BigRational>],
    }

    fn walk(w: &mut Walk<'_>, coup: usize, pointer: usize, prob: &BigRational, sums: &mut [u64]) {
        if coup == w.total {
            for a in 0..sums.len() {
                w.first[a] += prob * rat(sums[a]);
                for b in 0..sums.len() {
                    w.second[a][b] += prob * rat(sums[a] * sums[b]);
                }
            }
            return;
        }
        let cams = w.dists.len();
        let seg = coup / cams;
        for (payout, p) in &w.dists[coup % cams] {
            let (paid, next) = if *payout > 0 {
                (*payout, 0)
            } else if pointer == w.j_len - 1 {
                (w.j_len as u64, 0)
            } else {
                (0, pointer + 1)
            };
            sums[seg] += paid;
            walk(w, coup + 1, next, &(prob * p), sums);
            sums[seg] -= paid;
        }
    }

    let mut w = Walk { dists: &dists, j_len, total: k * cams, first: &mut first, second: &mut second };
    for j in 0..j_len {
        let start = rat(cams as u64) * &pi[j];
        let mut sums = vec![0; k];
        walk(&mut w, 0, j, &start, &mut sums);
    }
    let to_f = |r: &BigRational| r.to_f64().unwrap();
    let cov = (0..k)
        .map(|a| (0..k).map(|b| to_f(&(&second[a][b] - &first[a] * &first[b]))).collect())
        .collect();
    SegmentMoments { means: first.iter().map(to_f).collect(), cov }
}

/// Long-run variance per coup of an additive reward on the driving chain,
/// `Var(r_0) + 2 sum_{k >= 1} Cov(r_0, r_k)` under the stationary law,
/// truncated after `horizon` lags. The reward sees the cam and pointer before
/// the coup, the base payout and whether an award was paid.
pub fn long_run_variance<F>(spec: &MachineSpec, reward: F, horizon: usize) -> f64
where
    F: Fn(usize, usize, u64, bool) -> f64,
{
    let cams = spec.cams();
    let j_len = spec.award_length();
    let pi = stationary_oracle_matrix(spec).unwrap();
    let idx = |c: usize, j: usize| c * j_len + j;
    // (next state, probability, reward) for each state
    let mut moves = vec![Vec::new(); cams * j_len];
    for c in 0..cams {
        for j in 0..j_len {
            for a in spec.dists()[c].atoms() {
                let award = a.payout == 0 && j == j_len - 1;
                let next_j = if a.payout > 0 || award { 0 } else { j + 1 };
                moves[idx(c, j)].push((idx((c + 1) % cams, next_j), a.prob, reward(c, j, a.payout, award)));
            }
        }
    }
    let n = cams * j_len;
    let stat: Vec<f64> = (0..n).map(|s| pi[(s / j_len, s % j_len)]).collect();
    let m: Vec<f64> = (0..n).map(|s| moves[s].iter().map(|(_, p, r)| p * r).sum()).collect();
    let sq: f64 = (0..n).map(|s| stat[s] * moves[s].iter().map(|(_, p, r)| p * r * r).sum::<f64>()).sum();
    // Covariances are taken given the starting cam and then averaged, since
    // under the mixed start the cam-by-cam mean profile never decorrelates.
    let cam_mean: Vec<f64> = (0..cams)
        .map(|c| cams as f64 * (0..j_len).map(|j| stat[idx(c, j)] * m[idx(c, j)]).sum::<f64>())
        .collect();
    let profile = |lag: usize| {
        (0..cams).map(|c| cam_mean[c] * cam_mean[(c + lag) % cams]).sum::<f64>() / cams as f64
    };
    let mut var = sq - profile(0);
    // h = E[r_k | X_1 = state], starting with k = 1
    let mut h = m.clone();
    for lag in 1..=horizon {
        let cross: f64 = (0..n)
            .map(|s| stat[s] * moves[s].iter().map(|(t, p, r)| p * r * h[*t]).sum::<f64>())
            .sum();
        var += 2.0 * (cross - profile(lag));
        h = (0..n).map(|s| moves[s].iter().map(|(t, p, _)| p * h[*t]).sum()).collect();
    }
    var
}

/// A distribution with a zero atom of probability `1 - p` and the rest
/// spread over up to three positive payouts.
pub fn arb_dist() -> impl Strategy<Value = PayoutDistribution> {
    (0.05f64..0.95, prop::collection::vec((1u64..20, 0.1f64..1.0), 1..4)).prop_map(|(p, parts)| {
        let total: f64 = parts.iter().map(|(_, w)| w).sum();
        let mut atoms = vec![(0, 1.0 - p)];
        atoms.extend(parts.iter().map(|(x, w)| (*x, p * w / total)));
        PayoutDistribution::from_probs(atoms).unwrap()
    })
}

/// Random spec with `J` in `j_range` and `d` in `d_range`.
pub fn arb_spec(
    j_range: std::ops::RangeInclusive<usize>,
    d_range: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = MachineSpec> {
    (j_range, d_range).prop_flat_map(|(j, d)| {
        prop::collection::vec(arb_dist(), j * d)
            .prop_map(move |dists| MachineSpec::new(j, dists).unwrap())
    })
}

/// Like [`arb_dist`] but with rational probabilities from integer weights.
pub fn arb_exact_dist() -> impl Strategy<Value = PayoutDistribution> {
    (1u64..12, prop::collection::vec((1u64..20, 1u64..12), 1..4)).prop_map(|(zero, parts)| {
        let mut counts = BTreeMap::from([(0, zero)]);
        for (x, w) in parts {
            *counts.entry(x).or_insert(0) += w;
        }
        PayoutDistribution::from_counts(&counts).unwrap()
    })
}
