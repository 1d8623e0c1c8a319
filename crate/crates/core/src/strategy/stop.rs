//! "Play until the next payout" expectations on a one-armed machine.

use nalgebra::DMatrix;
use num::{BigInt, BigRational, One};

use crate::equilibrium::StationaryLaw;
use crate::machine::MachineSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationTable {
    /// `E(i, j)`: expected profit starting at cam `i`, pointer `j`.
    pub values: DMatrix<f64>,
    /// `sum pi(i, j) E(i, j)`.
    pub equilibrium_value: f64,
}

/// Expected profit of a player who starts in state `(i, j)` and stops after
/// the first nonzero payout, award included.
///
/// At pointer `J - 1` the next coup either wins or pays the award, so
/// `E(i, J-1) = -1 + mu_i + J q_i`; below that a loss moves one cam and one
/// pointer step on: `E(i, j) = -1 + mu_i + q_i E(i+1, j+1)`.
pub fn stop_after_payout_table(spec: &MachineSpec, law: &StationaryLaw) -> ExpectationTable {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let award = j_len as f64;
    let mut values = DMatrix::zeros(cams, j_len);
    for i in 0..cams {
        let d = &spec.dists()[i];
        values[(i, j_len - 1)] = -1.0 + d.mean() + award * d.q();
    }
    for j in (0..j_len - 1).rev() {
        for i in 0..cams {
            let d = &spec.dists()[i];
            values[(i, j)] = -1.0 + d.mean() + d.q() * values[((i + 1) % cams, j + 1)];
        }
    }
    let equilibrium_value = law.pi.component_mul(&values).sum();
    ExpectationTable { values, equilibrium_value }
}

/// The same recursion in exact rational arithmetic; `None` unless every
/// cam distribution carries exact probabilities.
pub fn stop_after_payout_table_exact(spec: &MachineSpec) -> Option<Vec<Vec<BigRational>>> {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let mut stats = Vec::with_capacity(cams);
    for d in spec.dists() {
        let q = BigRational::one() - d.exact_hit_probability()?;
        stats.push((d.exact_mean()?, q));
    }
    let award = BigRational::from_integer(BigInt::from(j_len));
    let minus_one = -BigRational::one();
    let mut table = vec![vec![BigRational::one(); j_len]; cams];
    for (i, (mu, q)) in stats.iter().enumerate() {
        table[i][j_len - 1] = &minus_one + mu + &award * q;
    }
    for j in (0..j_len - 1).rev() {
        for i in 0..cams {
            let (mu, q) = &stats[i];
            let next = table[(i + 1) % cams][j + 1].clone();
            table[i][j] = &minus_one + mu + q * next;
        }
    }
    Some(table)
}
