//! Seeded simulation of one-armed and two-armed Futurity machines.
//!
//! Every replication owns a ChaCha8 stream: the generator is seeded with
//! `seed_from_u64(seed)` and replication `r` uses stream number `r`. Uniforms
//! are the top 53 bits of `next_u64` scaled by `2^-53`, and payouts are drawn
//! by inverse CDF over the atoms in ascending payout order. A mixture draws
//! its arm choice before the payout, from the same stream.

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::limit::clt_parameters;
use crate::machine::{MachineSpec, MachineState, PayoutDistribution};
use crate::strategy::{Strategy, TwoArmedSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub seed: u64,
    pub n_coups: u64,
    pub replications: u64,
    pub initial_state: MachineState,
    /// Keep the casino's cumulative profit after every coup.
    pub record_path: bool,
    /// Keep the payout total of each complete block of `I` coups.
    pub record_segments: bool,
}

impl SimConfig {
    pub fn new(seed: u64, n_coups: u64) -> Self {
        Self {
            seed,
            n_coups,
            replications: 1,
            initial_state: MachineState::default(),
            record_path: false,
            record_segments: false,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_coups < 1 {
            return Err(Error::BadConfig("n_coups must be at least 1".into()));
        }
        if self.replications < 1 {
            return Err(Error::BadConfig("replications must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimResult {
    pub n_coups: u64,
    /// Base payouts plus `J` per award.
    pub total_payout: u64,
    pub base_payout: u64,
    /// Coups with a nonzero payout, awards included.
    pub hits: u64,
    pub awards: u64,
    pub final_state: MachineState,
    /// Awards paid on a coup at each cam position (one-armed only).
    pub awards_by_cam: Vec<u64>,
    /// Cam position of the state entered after each paying coup (one-armed only).
    pub post_payout_cams: Vec<u64>,
    /// Casino cumulative profit after coup `n` at index `n - 1`.
    pub path: Option<Vec<f64>>,
    pub segment_sums: Option<Vec<u64>>,
    /// `(total - n mu*) / sqrt(n sigma*^2)`, when requested.
    pub standardized_statistic: Option<f64>,
}

impl SimResult {
    pub fn mean_payout(&self) -> f64 {
        self.total_payout as f64 / self.n_coups as f64
    }

    pub fn hit_rate(&self) -> f64 {
        self.hits as f64 / self.n_coups as f64
    }

    pub fn award_rate(&self) -> f64 {
        self.awards as f64 / self.n_coups as f64
    }
}

fn stream(seed: u64, replication: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replication);
    rng
}

fn uniform(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Inverse-CDF sampler over a distribution's atoms.
#[derive(Debug, Clone)]
struct Sampler {
    payouts: Vec<u64>,
    cdf: Vec<f64>,
}

impl Sampler {
    fn new(d: &PayoutDistribution) -> Self {
        let mut acc = 0.0;
        let mut cdf = Vec::with_capacity(d.atoms().len());
        for a in d.atoms() {
            acc += a.prob;
            cdf.push(acc);
        }
        // the last atom absorbs rounding in the running sum
        if let Some(last) = cdf.last_mut() {
            *last = f64::INFINITY;
        }
        Self { payouts: d.atoms().iter().map(|a| a.payout).collect(), cdf }
    }

    fn draw(&self, u: f64) -> u64 {
        let k = self.cdf.iter().position(|&c| u < c).unwrap_or(self.cdf.len() - 1);
        self.payouts[k]
    }
}

struct Tally {
    result: SimResult,
    path: Vec<f64>,
    segments: Vec<u64>,
    segment_acc: u64,
}

impl Tally {
    fn new(cfg: &SimConfig, cams: usize) -> Self {
        Self {
            result: SimResult {
                n_coups: cfg.n_coups,
                awards_by_cam: vec![0; cams],
                post_payout_cams: vec![0; cams],
                ..Default::default()
            },
            path: Vec::new(),
            segments: Vec::new(),
            segment_acc: 0,
        }
    }
}

fn run_one_armed(
    spec: &MachineSpec,
    samplers: &[Sampler],
    cfg: &SimConfig,
    replication: u64,
    standardize: Option<(f64, f64)>,
) -> SimResult {
    let cams = spec.cams();
    let j_len = spec.award_length();
    let mut rng = stream(cfg.seed, replication);
    let mut t = Tally::new(cfg, cams);
    let (mut cam, mut pointer) = (cfg.initial_state.cam % cams, cfg.initial_state.pointer % j_len);
    if cfg.record_path {
        t.path.reserve(cfg.n_coups as usize);
    }
    for n in 1..=cfg.n_coups {
        let base = samplers[cam].draw(uniform(&mut rng));
        let mut paid = base;
        t.result.base_payout += base;
        if base > 0 {
            pointer = 0;
        } else if pointer == j_len - 1 {
            paid = j_len as u64;
            t.result.awards += 1;
            t.result.awards_by_cam[cam] += 1;
            pointer = 0;
        } else {
            pointer += 1;
        }
        cam = (cam + 1) % cams;
        if paid > 0 {
            t.result.hits += 1;
            t.result.post_payout_cams[cam] += 1;
        }
        t.result.total_payout += paid;
        if cfg.record_path {
            t.path.push(n as f64 - t.result.total_payout as f64);
        }
        if cfg.record_segments {
            t.segment_acc += paid;
            if n % cams as u64 == 0 {
                t.segments.push(t.segment_acc);
                t.segment_acc = 0;
            }
        }
    }
    finish(t, MachineState::new(cam, pointer), cfg, standardize)
}

fn finish(
    mut t: Tally,
    final_state: MachineState,
    cfg: &SimConfig,
    standardize: Option<(f64, f64)>,
) -> SimResult {
    let r = &mut t.result;
    r.final_state = final_state;
    if cfg.record_path {
        r.path = Some(t.path);
    }
    if cfg.record_segments {
        r.segment_sums = Some(t.segments);
    }
    if let Some((mu, var)) = standardize {
        let n = r.n_coups as f64;
        r.standardized_statistic = Some((r.total_payout as f64 - n * mu) / (n * var).sqrt());
    }
    t.result
}

fn samplers(spec: &MachineSpec) -> Vec<Sampler> {
    spec.dists().iter().map(Sampler::new).collect()
}

/// A single run on replication stream 0.
pub fn simulate_one_armed(spec: &MachineSpec, cfg: &SimConfig) -> Result<SimResult> {
    cfg.validate()?;
    Ok(run_one_armed(spec, &samplers(spec), cfg, 0, None))
}

/// `cfg.replications` independent runs, in replication order.
pub fn simulate_one_armed_batch(spec: &MachineSpec, cfg: &SimConfig) -> Result<Vec<SimResult>> {
    cfg.validate()?;
    let s = samplers(spec);
    Ok((0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_one_armed(spec, &s, cfg, rep, None))
        .collect())
}

/// Standardized sums `(R_1* + ... + R_n* - n mu*) / sqrt(n sigma*^2)`, one
/// per replication.
pub fn clt_experiment(spec: &MachineSpec, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    if cfg.replications < 100 {
        return Err(Error::BadConfig("clt_experiment needs at least 100 replications".into()));
    }
    let params = clt_parameters(spec)?;
    let norm = Some((params.mu_star(), params.sigma_star_sq));
    let s = samplers(spec);
    let plain = SimConfig { record_path: false, record_segments: false, ..cfg.clone() };
    Ok((0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_one_armed(spec, &s, &plain, rep, norm).standardized_statistic.unwrap())
        .collect())
}

fn run_two_armed(
    spec: &TwoArmedSpec,
    strategy: &Strategy,
    samplers: &[Sampler; 2],
    cfg: &SimConfig,
    replication: u64,
) -> SimResult {
    let j_len = spec.award_length();
    let period = strategy.period();
    let mut rng = stream(cfg.seed, replication);
    let mut t = Tally::new(cfg, 0);
    let mut pointer = cfg.initial_state.pointer % j_len;
    // the pattern phase plays the part of the cam position
    let mut phase = cfg.initial_state.cam % period;
    if cfg.record_path {
        t.path.reserve(cfg.n_coups as usize);
    }
    for n in 1..=cfg.n_coups {
        let use_a = match strategy {
            Strategy::Mixture(g) => uniform(&mut rng) < *g,
            s => s.weight_a(phase, pointer) == 1.0,
        };
        let sampler = if use_a { &samplers[0] } else { &samplers[1] };
        let base = sampler.draw(uniform(&mut rng));
        let mut paid = base;
        t.result.base_payout += base;
        if base > 0 {
            pointer = 0;
        } else if pointer == j_len - 1 {
            paid = j_len as u64;
            t.result.awards += 1;
            pointer = 0;
        } else {
            pointer += 1;
        }
        phase = (phase + 1) % period;
        if paid > 0 {
            t.result.hits += 1;
        }
        t.result.total_payout += paid;
        if cfg.record_path {
            t.path.push(n as f64 - t.result.total_payout as f64);
        }
    }
    finish(t, MachineState::new(phase, pointer), cfg, None)
}

fn two_armed_samplers(spec: &TwoArmedSpec) -> [Sampler; 2] {
    [Sampler::new(&spec.arm_a), Sampler::new(&spec.arm_b)]
}

/// A single two-armed run on replication stream 0. The initial state's cam
/// field is read as the starting pattern phase.
pub fn simulate_two_armed(
    spec: &TwoArmedSpec,
    strategy: &Strategy,
    cfg: &SimConfig,
) -> Result<SimResult> {
    cfg.validate()?;
    strategy.validate(spec.award_length())?;
    Ok(run_two_armed(spec, strategy, &two_armed_samplers(spec), cfg, 0))
}

pub fn simulate_two_armed_batch(
    spec: &TwoArmedSpec,
    strategy: &Strategy,
    cfg: &SimConfig,
) -> Result<Vec<SimResult>> {
    cfg.validate()?;
    strategy.validate(spec.award_length())?;
    let s = two_armed_samplers(spec);
    Ok((0..cfg.replications)
        .into_par_iter()
        .map(|rep| run_two_armed(spec, strategy, &s, cfg, rep))
        .collect())
}

/// Sample mean and unbiased sample variance, summed in index order.
pub fn mean_and_variance(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    (mean, if xs.len() > 1 { ss / (n - 1.0) } else { 0.0 })
}

/// Kolmogorov-Smirnov distance between the empirical law of `xs` and the
/// standard normal.
pub fn ks_distance_normal(xs: &[f64]) -> f64 {
    let normal = Normal::standard();
    let mut sorted = xs.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = normal.cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::futurity1936;
    use crate::strategy::Arm;

    fn toy() -> MachineSpec {
        let d = PayoutDistribution::from_probs([(0, 0.5), (1, 0.5)]).unwrap();
        MachineSpec::new(2, vec![d.clone(), d]).unwrap()
    }

    #[test]
    fn same_seed_same_result() {
        let spec = futurity1936();
        let mut cfg = SimConfig::new(7, 5000);
        cfg.record_path = true;
        cfg.record_segments = true;
        let a = simulate_one_armed(&spec, &cfg).unwrap();
        let b = simulate_one_armed(&spec, &cfg).unwrap();
        assert_eq!(a, b);
        cfg.seed = 8;
        assert_ne!(simulate_one_armed(&spec, &cfg).unwrap(), a);
    }

    #[test]
    fn conservation_and_pointer_law() {
        let spec = futurity1936();
        let mut cfg = SimConfig::new(1, 20_000);
        cfg.record_path = true;
        cfg.record_segments = true;
        let r = simulate_one_armed(&spec, &cfg).unwrap();
        assert_eq!(r.total_payout, r.base_payout + 10 * r.awards);
        assert!(r.hits <= r.n_coups);
        let path = r.path.as_ref().unwrap();
        assert_eq!(path.len(), 20_000);
        assert_eq!(*path.last().unwrap(), 20_000.0 - r.total_payout as f64);
        // per-coup payouts recovered from the path add back to the total
        let mut prev = 0.0;
        let mut sum = 0.0;
        let mut awards = 0;
        for &c in path {
            let paid = 1.0 - (c - prev);
            prev = c;
            sum += paid;
            if paid == 10.0 {
                awards += 1;
            }
        }
        assert_eq!(sum as u64, r.total_payout);
        assert!(awards >= r.awards);
        let segs = r.segment_sums.unwrap();
        assert_eq!(segs.len(), 2000);
        assert_eq!(segs.iter().sum::<u64>(), r.total_payout);
        assert!(r.final_state.pointer < 10);
        assert_eq!(r.awards_by_cam.iter().sum::<u64>(), r.awards);
        assert_eq!(r.post_payout_cams.iter().sum::<u64>(), r.hits);
    }

    #[test]
    fn single_coup_is_well_defined() {
        let spec = futurity1936();
        let mut cfg = SimConfig::new(3, 1);
        cfg.replications = 100;
        let z = clt_experiment(&spec, &cfg).unwrap();
        assert_eq!(z.len(), 100);
        assert!(z.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn rejects_bad_configs() {
        let spec = toy();
        assert!(matches!(simulate_one_armed(&spec, &SimConfig::new(0, 0)), Err(Error::BadConfig(_))));
        let mut cfg = SimConfig::new(0, 10);
        cfg.replications = 99;
        assert!(matches!(clt_experiment(&spec, &cfg), Err(Error::BadConfig(_))));
    }

    #[test]
    fn batch_is_deterministic_across_pool_sizes() {
        let spec = futurity1936();
        let mut cfg = SimConfig::new(11, 1000);
        cfg.replications = 16;
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_one_armed_batch(&spec, &cfg).unwrap());
        let b = four.install(|| simulate_one_armed_batch(&spec, &cfg).unwrap());
        assert_eq!(a, b);
        assert_ne!(a[0], a[1]);
        assert_eq!(a[0], simulate_one_armed(&spec, &cfg).unwrap());
    }

    #[test]
    fn two_armed_award_bookkeeping() {
        let spec = TwoArmedSpec::fair(0.3, 1.0 / 15.0, 10).unwrap();
        let cfg = SimConfig::new(5, 50_000);
        for s in [Strategy::SingleArm(Arm::B), Strategy::Mixture(0.5), Strategy::PointerThreshold(4)] {
            let r = simulate_two_armed(&spec, &s, &cfg).unwrap();
            assert_eq!(r.total_payout, r.base_payout + 10 * r.awards);
            assert!(r.final_state.pointer < 10);
        }
    }

    #[test]
    fn ks_of_exact_quantiles_is_small() {
        let normal = Normal::standard();
        let xs: Vec<f64> = (0..1000).map(|i| normal.inverse_cdf((i as f64 + 0.5) / 1000.0)).collect();
        let d = ks_distance_normal(&xs);
        assert!((d - 0.0005).abs() < 1e-9, "{d}");
        let shifted: Vec<f64> = xs.iter().map(|x| x + 1.0).collect();
        assert!(ks_distance_normal(&shifted) > 0.3);
    }
}
