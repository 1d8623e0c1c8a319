//! Player strategies: the one-armed stop-after-payout system and the
//! two-armed machine whose arms share a single Futurity pointer.

mod figure;
mod stop;
mod sweep;
mod two_armed;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::machine::PayoutDistribution;

pub use figure::{figure1_curves, Curve, FigureStrategy};
pub use stop::{stop_after_payout_table, stop_after_payout_table_exact, ExpectationTable};
pub use sweep::{conjecture_sweep, Condition, SweepConfig, SweepReport, SweepRow};
pub use two_armed::{
    casino_win_rate, casino_win_rate_supremum, fair_mu, mixture_gap, mixture_mean,
    pattern_award_probability, pattern_award_probability_divisible,
    pattern_award_probability_via_machine, pattern_gap, pattern_machine, pattern_mean,
    pointer_chain, pointer_strategy_analysis, pointer_strategy_mean, pointer_stationary,
    single_arm_award_probability, single_arm_mean, PointerAnalysis,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arm {
    A,
    B,
}

impl fmt::Display for Arm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Arm::A => "A",
            Arm::B => "B",
        })
    }
}

/// Two arms linked only by a shared Futurity pointer of length `J`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoArmedSpec {
    pub arm_a: PayoutDistribution,
    pub arm_b: PayoutDistribution,
    award_length: usize,
}

impl TwoArmedSpec {
    pub fn new(
        arm_a: PayoutDistribution,
        arm_b: PayoutDistribution,
        award_length: usize,
    ) -> Result<Self> {
        if award_length < 2 {
            return Err(Error::BadJ(award_length));
        }
        Ok(Self { arm_a, arm_b, award_length })
    }

    /// Arms with the given hit probabilities and base means.
    pub fn with_means(p_a: f64, mu_a: f64, p_b: f64, mu_b: f64, award_length: usize) -> Result<Self> {
        Self::new(
            PayoutDistribution::with_hit_probability_and_mean(p_a, mu_a)?,
            PayoutDistribution::with_hit_probability_and_mean(p_b, mu_b)?,
            award_length,
        )
    }

    /// Both arms fair when played alone (`mu*_A = mu*_B = 1`).
    pub fn fair(p_a: f64, p_b: f64, award_length: usize) -> Result<Self> {
        if award_length < 2 {
            return Err(Error::BadJ(award_length));
        }
        Self::with_means(
            p_a,
            fair_mu(p_a, award_length),
            p_b,
            fair_mu(p_b, award_length),
            award_length,
        )
    }

    pub fn award_length(&self) -> usize {
        self.award_length
    }

    pub fn arm(&self, arm: Arm) -> &PayoutDistribution {
        match arm {
            Arm::A => &self.arm_a,
            Arm::B => &self.arm_b,
        }
    }
}

/// A nonrandom cyclic pattern of arm pulls with at least one of each arm.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern(Vec<Arm>);

impl Pattern {
    pub fn new(arms: Vec<Arm>) -> Result<Self> {
        let has_a = arms.contains(&Arm::A);
        let has_b = arms.contains(&Arm::B);
        if !has_a || !has_b {
            return Err(Error::BadPattern(arms.iter().map(|a| a.to_string()).collect()));
        }
        Ok(Self(arms))
    }

    /// `A^r B^s`.
    pub fn blocks(r: usize, s: usize) -> Result<Self> {
        Self::new(std::iter::repeat_n(Arm::A, r).chain(std::iter::repeat_n(Arm::B, s)).collect())
    }

    pub fn arms(&self) -> &[Arm] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of A pulls per cycle.
    pub fn r(&self) -> usize {
        self.0.iter().filter(|a| **a == Arm::A).count()
    }

    /// Number of B pulls per cycle.
    pub fn s(&self) -> usize {
        self.0.len() - self.r()
    }
}

impl FromStr for Pattern {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let arms = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'A' => Ok(Arm::A),
                'B' => Ok(Arm::B),
                _ => Err(Error::BadPattern(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(arms).map_err(|_| Error::BadPattern(s.to_string()))
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.0 {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Strategy {
    SingleArm(Arm),
    /// Pull A with probability `gamma` on every coup, independently.
    Mixture(f64),
    Pattern(Pattern),
    /// Pull A while the pointer shows fewer than `K` losses, else B.
    PointerThreshold(usize),
}

impl Strategy {
    pub fn validate(&self, award_length: usize) -> Result<()> {
        match self {
            Strategy::Mixture(g) if !(*g > 0.0 && *g < 1.0) => Err(Error::BadGamma(*g)),
            Strategy::PointerThreshold(k) if *k < 1 || *k >= award_length => {
                Err(Error::BadK { k: *k, max: award_length.saturating_sub(1) })
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::SingleArm(a) => write!(f, "{a}"),
            Strategy::Mixture(g) => write!(f, "mixture({g})"),
            Strategy::Pattern(p) => write!(f, "{p}"),
            Strategy::PointerThreshold(k) => write!(f, "pointer(K={k})"),
        }
    }
}

impl FromStr for Strategy {
    type Err = Error;

    /// `A`, `B`, `mixture:0.5`, `pattern:ABB` or `pointer:4`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadConfig(format!("unrecognized strategy {s:?}"));
        match s {
            "A" | "a" => return Ok(Strategy::SingleArm(Arm::A)),
            "B" | "b" => return Ok(Strategy::SingleArm(Arm::B)),
            _ => {}
        }
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        match kind {
            "mixture" => Ok(Strategy::Mixture(arg.parse().map_err(|_| bad())?)),
            "pattern" => Ok(Strategy::Pattern(arg.parse()?)),
            "pointer" => Ok(Strategy::PointerThreshold(arg.parse().map_err(|_| bad())?)),
            _ => Err(bad()),
        }
    }
}
