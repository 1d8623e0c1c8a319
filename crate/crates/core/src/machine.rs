//! Payout distributions, one-armed machine specs and the reel-strip model
//! behind the built-in 1936 Futurity.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::wrap;
use crate::error::{Error, Result};

/// Tolerance on the total probability of a distribution given in binary
/// floating point.
pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub payout: u64,
    pub prob: f64,
}

/// Law of the payout of a single coup at one cam position, Futurity award
/// excluded.
///
/// Atoms are kept sorted by ascending payout with duplicates merged. When
/// the distribution was built from rational probabilities the exact values
/// are retained alongside the `f64` ones and the derived statistics are
/// rounded from exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoutDistribution {
    atoms: Vec<Atom>,
    exact: Option<Vec<BigRational>>,
    hit_probability: f64,
    mean: f64,
    variance: f64,
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl PayoutDistribution {
    /// Builds a distribution from exact rational probabilities, which must
    /// sum to exactly one.
    pub fn from_exact<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, BigRational)>,
    {
        let mut merged: BTreeMap<u64, BigRational> = BTreeMap::new();
        for (payout, prob) in pairs {
            if prob <= BigRational::zero() || prob > BigRational::one() {
                return Err(Error::BadDist(format!(
                    "probability {prob} of payout {payout} outside (0, 1]"
                )));
            }
            *merged.entry(payout).or_insert_with(BigRational::zero) += prob;
        }
        let total: BigRational = merged.values().cloned().sum();
        if total != BigRational::one() {
            return Err(Error::BadDist(format!("probabilities sum to {total}, not 1")));
        }

        let mean: BigRational = merged
            .iter()
            .map(|(x, pr)| BigRational::from_integer(BigInt::from(*x)) * pr)
            .sum();
        let second: BigRational = merged
            .iter()
            .map(|(x, pr)| BigRational::from_integer(BigInt::from(*x) * BigInt::from(*x)) * pr)
            .sum();
        let variance = second - &mean * &mean;
        let zero_mass = merged.get(&0).cloned().unwrap_or_else(BigRational::zero);
        let hit = BigRational::one() - zero_mass;

        let atoms = merged
            .iter()
            .map(|(x, pr)| Atom { payout: *x, prob: ratio_to_f64(pr) })
            .collect();
        let dist = Self {
            atoms,
            exact: Some(merged.into_values().collect()),
            hit_probability: ratio_to_f64(&hit),
            mean: ratio_to_f64(&mean),
            variance: ratio_to_f64(&variance),
        };
        dist.check_hit_probability()?;
        Ok(dist)
    }

    /// Builds a distribution from integer stop counts (each count over the
    /// total number of equally likely outcomes).
    pub fn from_counts(counts: &BTreeMap<u64, u64>) -> Result<Self> {
        let total: u64 = counts.values().sum();
        if total == 0 {
            return Err(Error::BadDist("no outcomes".into()));
        }
        Self::from_exact(counts.iter().filter(|(_, c)| **c > 0).map(|(x, c)| {
            (*x, BigRational::new(BigInt::from(*c), BigInt::from(total)))
        }))
    }

    /// Builds a distribution from floating-point probabilities, which must
    /// sum to one within [`PROB_TOLERANCE`].
    pub fn from_probs<I>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, f64)>,
    {
        let mut merged: BTreeMap<u64, f64> = BTreeMap::new();
        for (payout, prob) in pairs {
            if !(prob > 0.0 && prob <= 1.0) {
                return Err(Error::BadDist(format!(
                    "probability {prob} of payout {payout} outside (0, 1]"
                )));
            }
            *merged.entry(payout).or_insert(0.0) += prob;
        }
        let total: f64 = merged.values().sum();
        if (total - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::BadDist(format!("probabilities sum to {total}, not 1")));
        }
        let atoms: Vec<Atom> =
            merged.into_iter().map(|(payout, prob)| Atom { payout, prob }).collect();
        let mean: f64 = atoms.iter().map(|a| a.payout as f64 * a.prob).sum();
        let second: f64 = atoms.iter().map(|a| (a.payout as f64).powi(2) * a.prob).sum();
        let hit: f64 = atoms.iter().filter(|a| a.payout > 0).map(|a| a.prob).sum();
        let dist = Self {
            atoms,
            exact: None,
            hit_probability: hit,
            mean,
            variance: second - mean * mean,
        };
        dist.check_hit_probability()?;
        Ok(dist)
    }

    /// An integer-payout distribution with hit probability `p` and mean
    /// `mean`: zero with probability `1 - p`, otherwise `k` or `k + 1` coins
    /// where `k = floor(mean / p)`.
    ///
    /// Requires `mean >= p`, which is what nonnegative integer payouts allow.
    pub fn with_hit_probability_and_mean(p: f64, mean: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::BadDist(format!("hit probability {p} outside (0, 1)")));
        }
        if !(mean >= p) || !mean.is_finite() {
            return Err(Error::BadDist(format!(
                "mean {mean} below hit probability {p}; not realizable with integer payouts"
            )));
        }
        let ratio = mean / p;
        let k = ratio.floor();
        let frac = ratio - k;
        let mut atoms = vec![Atom { payout: 0, prob: 1.0 - p }];
        if frac > 0.0 {
            atoms.push(Atom { payout: k as u64, prob: p * (1.0 - frac) });
            atoms.push(Atom { payout: k as u64 + 1, prob: p * frac });
        } else {
            atoms.push(Atom { payout: k as u64, prob: p });
        }
        let second: f64 = atoms.iter().map(|a| (a.payout as f64).powi(2) * a.prob).sum();
        Ok(Self {
            atoms,
            exact: None,
            hit_probability: p,
            mean,
            variance: second - mean * mean,
        })
    }

    fn check_hit_probability(&self) -> Result<()> {
        let p = self.hit_probability;
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::BadDist(format!(
                "probability of a nonzero payout is {p}; must lie strictly between 0 and 1"
            )));
        }
        Ok(())
    }

    /// Atoms in ascending payout order.
    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// Probability of a nonzero payout.
    pub fn p(&self) -> f64 {
        self.hit_probability
    }

    pub fn q(&self) -> f64 {
        1.0 - self.hit_probability
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact probabilities aligned with [`atoms`](Self::atoms).
    pub fn exact_probs(&self) -> Option<&[BigRational]> {
        self.exact.as_deref()
    }

    pub fn exact_hit_probability(&self) -> Option<BigRational> {
        let probs = self.exact.as_ref()?;
        Some(
            self.atoms
                .iter()
                .zip(probs)
                .filter(|(a, _)| a.payout > 0)
                .map(|(_, pr)| pr.clone())
                .sum(),
        )
    }

    pub fn exact_mean(&self) -> Option<BigRational> {
        let probs = self.exact.as_ref()?;
        Some(
            self.atoms
                .iter()
                .zip(probs)
                .map(|(a, pr)| BigRational::from_integer(BigInt::from(a.payout)) * pr)
                .sum(),
        )
    }

    pub fn exact_variance(&self) -> Option<BigRational> {
        let probs = self.exact.as_ref()?;
        let mean = self.exact_mean()?;
        let second: BigRational = self
            .atoms
            .iter()
            .zip(probs)
            .map(|(a, pr)| {
                let x = BigInt::from(a.payout);
                BigRational::from_integer(&x * &x) * pr
            })
            .sum();
        Some(second - &mean * &mean)
    }
}

/// One-armed machine: `I = dJ` cam positions, each with its own payout law,
/// and a Futurity award of `J` coins after `J` consecutive losses.
#[derive(Debug, Clone, PartialEq)]
pub struct MachineSpec {
    award_length: usize,
    dists: Vec<PayoutDistribution>,
}

/// Validating constructor for [`MachineSpec`].
pub fn make_spec(award_length: usize, dists: Vec<PayoutDistribution>) -> Result<MachineSpec> {
    MachineSpec::new(award_length, dists)
}

impl MachineSpec {
    pub fn new(award_length: usize, dists: Vec<PayoutDistribution>) -> Result<Self> {
        if award_length < 2 {
            return Err(Error::BadJ(award_length));
        }
        if dists.is_empty() || dists.len() % award_length != 0 {
            return Err(Error::BadPeriod { cams: dists.len(), award_length });
        }
        for d in &dists {
            d.check_hit_probability()?;
        }
        Ok(Self { award_length, dists })
    }

    /// Award length `J`.
    pub fn award_length(&self) -> usize {
        self.award_length
    }

    /// Cam count `I`.
    pub fn cams(&self) -> usize {
        self.dists.len()
    }

    /// `d = I / J`.
    pub fn periods_per_cycle(&self) -> usize {
        self.dists.len() / self.award_length
    }

    pub fn dists(&self) -> &[PayoutDistribution] {
        &self.dists
    }

    pub fn dist(&self, cam: i64) -> &PayoutDistribution {
        &self.dists[wrap(cam, self.cams())]
    }

    pub fn p(&self, cam: i64) -> f64 {
        self.dist(cam).p()
    }

    pub fn q(&self, cam: i64) -> f64 {
        self.dist(cam).q()
    }

    pub fn mu(&self, cam: i64) -> f64 {
        self.dist(cam).mean()
    }

    pub fn sigma_sq(&self, cam: i64) -> f64 {
        self.dist(cam).variance()
    }

    /// `Q = q_0 q_1 ... q_{I-1}`.
    pub fn loss_product(&self) -> f64 {
        self.dists.iter().map(|d| d.q()).product()
    }

    /// Probability of losing at each of the `len` cam positions
    /// `end - len, ..., end - 1`, i.e. `q_{end-1} q_{end-2} ... q_{end-len}`.
    pub fn losses_before(&self, end: i64, len: usize) -> f64 {
        let full = len / self.cams();
        let rest = len % self.cams();
        let mut prod = self.loss_product().powi(full as i32);
        for t in 1..=rest as i64 {
            prod *= self.q(end - t);
        }
        prod
    }

    /// `q_{j-1} ... q_{j-kJ} p_{j-kJ-1}`: a win at coup `j - kJ` followed by
    /// `kJ` losses through coup `j`, where coup `n` uses cam `n - 1`.
    pub fn win_then_award_run(&self, j: i64, k: usize) -> f64 {
        let len = k * self.award_length;
        self.losses_before(j, len) * self.p(j - len as i64 - 1)
    }

    /// Same machine with the cam sequence rotated left by `shift`.
    pub fn rotated(&self, shift: usize) -> Self {
        let mut dists = self.dists.clone();
        let n = dists.len();
        dists.rotate_left(shift % n);
        Self { award_length: self.award_length, dists }
    }
}

/// State of the driving chain after a coup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct MachineState {
    pub cam: usize,
    pub pointer: usize,
}

impl MachineState {
    pub fn new(cam: usize, pointer: usize) -> Self {
        Self { cam, pointer }
    }

    /// Row-major index into an `I x J` state array.
    pub fn index(&self, award_length: usize) -> usize {
        self.cam * award_length + self.pointer
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Mode {
    E,
    O,
}

impl Mode {
    pub fn from_char(c: char) -> Option<Self> {
        match c {
            'E' => Some(Mode::E),
            'O' => Some(Mode::O),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Mode::E => 'E',
            Mode::O => 'O',
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

pub const REEL_COUNT: usize = 3;
pub const STRIP_LENGTH: usize = 20;
pub const MODE_PATTERN_LENGTH: usize = 10;
pub const SYMBOL_COUNT: u8 = 6;

pub type Strip = [u8; STRIP_LENGTH];
pub type SymbolTriple = [u8; REEL_COUNT];

/// Three 20-stop reels, a sparse pay table and a cam mode pattern.
///
/// Symbols are coded lemon=0, cherry=1, orange=2, plum=3, bell=4, bar=5.
/// Strip positions are numbered from 1: mode E stops only on even-numbered
/// positions and mode O only on odd-numbered ones, ten equally likely stops
/// per reel in either mode.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReelMachine {
    reels: [Strip; REEL_COUNT],
    paytable: BTreeMap<SymbolTriple, u64>,
    mode_pattern: Vec<Mode>,
}

impl ReelMachine {
    pub fn new(
        reels: [Strip; REEL_COUNT],
        paytable: BTreeMap<SymbolTriple, u64>,
        mode_pattern: Vec<Mode>,
    ) -> Result<Self> {
        if let Some(s) = reels.iter().flatten().find(|s| **s >= SYMBOL_COUNT) {
            return Err(Error::BadReels(format!("symbol {s} outside 0..=5")));
        }
        if let Some(t) = paytable.keys().find(|t| t.iter().any(|s| *s >= SYMBOL_COUNT)) {
            return Err(Error::BadReels(format!("pay table triple {t:?} has a symbol outside 0..=5")));
        }
        if mode_pattern.len() != MODE_PATTERN_LENGTH {
            return Err(Error::BadReels(format!(
                "mode pattern has length {}, expected {MODE_PATTERN_LENGTH}",
                mode_pattern.len()
            )));
        }
        // zero entries are equivalent to absent ones
        let paytable = paytable.into_iter().filter(|(_, v)| *v > 0).collect();
        Ok(Self { reels, paytable, mode_pattern })
    }

    pub fn reels(&self) -> &[Strip; REEL_COUNT] {
        &self.reels
    }

    pub fn paytable(&self) -> &BTreeMap<SymbolTriple, u64> {
        &self.paytable
    }

    pub fn mode_pattern(&self) -> &[Mode] {
        &self.mode_pattern
    }

    pub fn pay(&self, triple: SymbolTriple) -> u64 {
        self.paytable.get(&triple).copied().unwrap_or(0)
    }

    /// Symbols reachable on one reel in the given mode.
    pub fn stops(&self, reel: usize, mode: Mode) -> impl Iterator<Item = u8> + '_ {
        // 1-based odd positions are 0-based even indices
        let offset = match mode {
            Mode::O => 0,
            Mode::E => 1,
        };
        self.reels[reel].iter().skip(offset).step_by(2).copied()
    }

    /// Payout counts over the 1000 equally likely stop triples of a mode.
    pub fn mode_counts(&self, mode: Mode) -> BTreeMap<u64, u64> {
        let mut counts = BTreeMap::new();
        for a in self.stops(0, mode) {
            for b in self.stops(1, mode) {
                for c in self.stops(2, mode) {
                    *counts.entry(self.pay([a, b, c])).or_insert(0) += 1;
                }
            }
        }
        counts
    }

    /// Per-symbol stop counts for each reel in a mode.
    pub fn inventory(&self, mode: Mode) -> [[u32; SYMBOL_COUNT as usize]; REEL_COUNT] {
        let mut inv = [[0u32; SYMBOL_COUNT as usize]; REEL_COUNT];
        for (reel, row) in inv.iter_mut().enumerate() {
            for s in self.stops(reel, mode) {
                row[s as usize] += 1;
            }
        }
        inv
    }
}

/// Exact payout law of one mode, with probabilities `k/1000`.
pub fn mode_distribution(rm: &ReelMachine, mode: Mode) -> Result<PayoutDistribution> {
    PayoutDistribution::from_counts(&rm.mode_counts(mode))
}

/// Reel strips and pay table of the Futurity as described by Geddes.
pub fn futurity_reels() -> ReelMachine {
    let reels = [
        [1, 5, 1, 2, 1, 5, 1, 5, 1, 3, 1, 2, 5, 1, 4, 3, 1, 5, 1, 2],
        [1, 4, 1, 3, 1, 4, 1, 2, 1, 4, 1, 4, 1, 2, 1, 2, 4, 1, 5, 4],
        [3, 4, 2, 0, 3, 4, 2, 0, 4, 0, 2, 3, 2, 4, 2, 4, 5, 2, 3, 5],
    ];
    let paytable: BTreeMap<SymbolTriple, u64> = [
        ([5, 5, 5], 150),
        ([4, 4, 4], 18),
        ([4, 4, 5], 18),
        ([3, 3, 3], 14),
        ([3, 3, 5], 14),
        ([2, 2, 2], 10),
        ([2, 2, 5], 10),
        ([1, 1, 0], 5),
        ([1, 1, 4], 5),
        ([1, 1, 2], 3),
        ([1, 1, 3], 3),
        ([1, 1, 5], 3),
    ]
    .into_iter()
    .collect();
    let pattern = "EEEEEOEEEO".chars().filter_map(Mode::from_char).collect();
    ReelMachine::new(reels, paytable, pattern).expect("built-in reels are valid")
}

impl MachineSpec {
    /// One cam position per entry of the reel machine's mode pattern.
    pub fn from_reels(rm: &ReelMachine, award_length: usize) -> Result<Self> {
        let even = mode_distribution(rm, Mode::E)?;
        let odd = mode_distribution(rm, Mode::O)?;
        let dists = rm
            .mode_pattern()
            .iter()
            .map(|m| match m {
                Mode::E => even.clone(),
                Mode::O => odd.clone(),
            })
            .collect();
        Self::new(award_length, dists)
    }
}

/// The 1936 Futurity: `I = J = 10`, mode pattern `EEEEEOEEEO`.
pub fn futurity1936() -> MachineSpec {
    MachineSpec::from_reels(&futurity_reels(), 10).expect("built-in spec is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn bernoulli(p: f64) -> PayoutDistribution {
        PayoutDistribution::from_probs([(0, 1.0 - p), (1, p)]).unwrap()
    }

    #[test]
    fn mode_e_matches_published_counts() {
        let counts = futurity_reels().mode_counts(Mode::E);
        let expected: BTreeMap<u64, u64> =
            [(0, 968), (3, 3), (5, 7), (10, 18), (14, 4)].into_iter().collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn mode_o_matches_published_counts() {
        let counts = futurity_reels().mode_counts(Mode::O);
        let expected: BTreeMap<u64, u64> =
            [(0, 357), (3, 576), (5, 64), (18, 2), (150, 1)].into_iter().collect();
        assert_eq!(counts, expected);
    }

    #[test]
    fn exact_statistics_of_both_modes() {
        let rm = futurity_reels();
        let e = mode_distribution(&rm, Mode::E).unwrap();
        assert_eq!(e.exact_mean().unwrap(), r(28, 100));
        assert_eq!(e.exact_variance().unwrap(), r(27076, 10000));
        assert_eq!(e.exact_hit_probability().unwrap(), r(32, 1000));
        let o = mode_distribution(&rm, Mode::O).unwrap();
        assert_eq!(o.exact_mean().unwrap(), r(2234, 1000));
        assert_eq!(o.exact_variance().unwrap(), r(24941244, 1000000));
        assert_eq!(o.exact_hit_probability().unwrap(), r(643, 1000));
        assert_eq!(o.mean(), 2.234);
        assert_eq!(e.p(), 0.032);
    }

    #[test]
    fn inventory_matches_reel_table() {
        let rm = futurity_reels();
        assert_eq!(
            rm.inventory(Mode::E),
            [[0, 1, 3, 2, 0, 4], [0, 1, 3, 1, 5, 0], [3, 0, 1, 1, 4, 1]]
        );
        assert_eq!(
            rm.inventory(Mode::O),
            [[0, 8, 0, 0, 1, 1], [0, 8, 0, 0, 1, 1], [0, 0, 5, 3, 1, 1]]
        );
    }

    #[test]
    fn zero_paytable_is_rejected() {
        let rm = futurity_reels();
        let empty = ReelMachine::new(*rm.reels(), BTreeMap::new(), rm.mode_pattern().to_vec())
            .unwrap();
        assert!(matches!(mode_distribution(&empty, Mode::E), Err(Error::BadDist(_))));
        assert!(matches!(mode_distribution(&empty, Mode::O), Err(Error::BadDist(_))));
    }

    #[test]
    fn reel_machine_validation() {
        let rm = futurity_reels();
        let mut bad = *rm.reels();
        bad[1][3] = 6;
        assert!(ReelMachine::new(bad, rm.paytable().clone(), rm.mode_pattern().to_vec()).is_err());
        assert!(ReelMachine::new(*rm.reels(), rm.paytable().clone(), vec![Mode::E; 9]).is_err());
    }

    #[test]
    fn futurity_layout() {
        let spec = futurity1936();
        assert_eq!(spec.cams(), 10);
        assert_eq!(spec.award_length(), 10);
        assert_eq!(spec.periods_per_cycle(), 1);
        assert_eq!(spec.dists()[5].mean(), 2.234);
        assert_eq!(spec.dists()[9].mean(), 2.234);
        assert_eq!(spec.dists()[0].p(), 0.032);
        for i in [0, 1, 2, 3, 4, 6, 7, 8] {
            assert_eq!(spec.dists()[i].mean(), 0.28);
        }
    }

    #[test]
    fn make_spec_validation() {
        let two = vec![bernoulli(0.5), bernoulli(0.3)];
        let spec = make_spec(2, two.clone()).unwrap();
        assert_eq!(spec.periods_per_cycle(), 1);

        let twenty: Vec<_> = (0..20).map(|_| bernoulli(0.2)).collect();
        assert_eq!(make_spec(10, twenty).unwrap().periods_per_cycle(), 2);

        let fifteen: Vec<_> = (0..15).map(|_| bernoulli(0.2)).collect();
        assert_eq!(
            make_spec(10, fifteen),
            Err(Error::BadPeriod { cams: 15, award_length: 10 })
        );
        assert_eq!(make_spec(1, two), Err(Error::BadJ(1)));
    }

    #[test]
    fn degenerate_distributions_rejected() {
        assert!(matches!(PayoutDistribution::from_probs([(0, 1.0)]), Err(Error::BadDist(_))));
        assert!(matches!(PayoutDistribution::from_probs([(3, 1.0)]), Err(Error::BadDist(_))));
        assert!(matches!(
            PayoutDistribution::from_probs([(0, 0.5), (1, 0.4)]),
            Err(Error::BadDist(_))
        ));
        assert!(matches!(
            PayoutDistribution::from_exact([(0, r(1, 2)), (1, r(1, 3))]),
            Err(Error::BadDist(_))
        ));
    }

    #[test]
    fn two_point_construction_hits_target_mean() {
        let d = PayoutDistribution::with_hit_probability_and_mean(0.3, 0.918107).unwrap();
        assert!((d.mean() - 0.918107).abs() < 1e-15);
        assert!((d.p() - 0.3).abs() < 1e-15);
        let direct: f64 = d.atoms().iter().map(|a| a.payout as f64 * a.prob).sum();
        assert!((direct - 0.918107).abs() < 1e-12);
        assert!(PayoutDistribution::with_hit_probability_and_mean(0.3, 0.2).is_err());
    }

    #[test]
    fn rotation_moves_cams() {
        let spec = futurity1936();
        let rot = spec.rotated(5);
        assert_eq!(rot.dists()[0].mean(), 2.234);
        assert_eq!(rot.dists()[4].mean(), 2.234);
        assert_eq!(rot.rotated(5), spec);
    }

    #[test]
    fn losses_before_wraps_around_the_cycle() {
        let spec = futurity1936();
        let q_e = 1.0 - 0.032;
        let q_o = 1.0 - 0.643;
        // cams 9, 8 before coup index 10 -> cams 9 and 8
        assert!((spec.losses_before(10, 2) - q_o * q_e).abs() < 1e-15);
        // 12 cams ending at cam 0 (coup 1): a full cycle plus cams 9, 8 wrapping
        let want = spec.loss_product() * q_o * q_e;
        assert!((spec.losses_before(1 + 9, 12) - want).abs() < 1e-15);
    }
}
