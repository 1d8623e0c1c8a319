//! TOML machine-spec files.
//!
//! Distribution form, one `[[cam]]` table per cam position:
//!
//! ```toml
//! award_length = 2
//!
//! [[cam]]
//! atoms = ["0:1/2", "1:1/2"]
//!
//! [[cam]]
//! atoms = ["0:0.75", "3:0.25"]
//! ```
//!
//! Probabilities written as `a/b` are exact rationals; decimals are read as
//! `f64`. Reel form:
//!
//! ```toml
//! award_length = 10
//!
//! [reels]
//! strips = [[...20 symbols...], [...], [...]]
//! paytable = ["5,5,5:150", "1,1,0:5"]
//! mode_pattern = "EEEEEOEEEO"
//! ```
//!
//! Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::BigRational;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::machine::{
    MachineSpec, Mode, PayoutDistribution, ReelMachine, Strip, SymbolTriple, REEL_COUNT,
    STRIP_LENGTH,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    award_length: usize,
    #[serde(default)]
    cam: Vec<RawCam>,
    reels: Option<RawReels>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCam {
    atoms: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawReels {
    strips: Vec<Vec<u8>>,
    paytable: Vec<String>,
    mode_pattern: String,
}

fn bad(msg: impl Into<String>) -> Error {
    Error::BadSpecFile(msg.into())
}

enum Prob {
    Exact(BigRational),
    Float(f64),
}

fn parse_atom(s: &str) -> Result<(u64, Prob)> {
    let (payout, prob) = s.split_once(':').ok_or_else(|| bad(format!("atom {s:?} is not payout:prob")))?;
    let payout = payout.trim().parse().map_err(|_| bad(format!("bad payout in {s:?}")))?;
    let prob = prob.trim();
    let prob = if prob.contains('/') {
        Prob::Exact(prob.parse().map_err(|_| bad(format!("bad fraction in {s:?}")))?)
    } else {
        Prob::Float(prob.parse().map_err(|_| bad(format!("bad probability in {s:?}")))?)
    };
    Ok((payout, prob))
}

fn parse_dist(cam: &RawCam) -> Result<PayoutDistribution> {
    let atoms = cam.atoms.iter().map(|a| parse_atom(a)).collect::<Result<Vec<_>>>()?;
    if atoms.is_empty() {
        return Err(Error::BadDist("cam has no atoms".into()));
    }
    if atoms.iter().all(|(_, p)| matches!(p, Prob::Exact(_))) {
        PayoutDistribution::from_exact(atoms.into_iter().map(|(x, p)| match p {
            Prob::Exact(r) => (x, r),
            Prob::Float(_) => unreachable!(),
        }))
    } else if atoms.iter().all(|(_, p)| matches!(p, Prob::Float(_))) {
        PayoutDistribution::from_probs(atoms.into_iter().map(|(x, p)| match p {
            Prob::Float(f) => (x, f),
            Prob::Exact(_) => unreachable!(),
        }))
    } else {
        Err(bad("a cam mixes fractions and decimals"))
    }
}

fn parse_reels(raw: &RawReels) -> Result<ReelMachine> {
    if raw.strips.len() != REEL_COUNT {
        return Err(Error::BadReels(format!("{} strips, expected {REEL_COUNT}", raw.strips.len())));
    }
    let mut reels = [[0u8; STRIP_LENGTH]; REEL_COUNT];
    for (dst, src) in reels.iter_mut().zip(&raw.strips) {
        *dst = Strip::try_from(src.as_slice()).map_err(|_| {
            Error::BadReels(format!("strip has {} symbols, expected {STRIP_LENGTH}", src.len()))
        })?;
    }
    let mut paytable = BTreeMap::new();
    for entry in &raw.paytable {
        let (triple, pay) = entry
            .split_once(':')
            .ok_or_else(|| bad(format!("pay table entry {entry:?} is not a,b,c:payout")))?;
        let symbols = triple
            .split(',')
            .map(|s| s.trim().parse::<u8>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| bad(format!("bad symbols in {entry:?}")))?;
        let triple = SymbolTriple::try_from(symbols.as_slice())
            .map_err(|_| bad(format!("pay table entry {entry:?} needs three symbols")))?;
        let pay = pay.trim().parse().map_err(|_| bad(format!("bad payout in {entry:?}")))?;
        if paytable.insert(triple, pay).is_some() {
            return Err(bad(format!("duplicate pay table triple in {entry:?}")));
        }
    }
    let pattern = raw
        .mode_pattern
        .chars()
        .map(|c| Mode::from_char(c).ok_or_else(|| Error::BadReels(format!("mode {c:?} is not E or O"))))
        .collect::<Result<Vec<_>>>()?;
    ReelMachine::new(reels, paytable, pattern)
}

/// Parsed file contents; `reels` is set for the reel form.
#[derive(Debug, Clone, PartialEq)]
pub struct SpecFile {
    pub spec: MachineSpec,
    pub reels: Option<ReelMachine>,
}

pub fn parse_spec_file(text: &str) -> Result<SpecFile> {
    let raw: RawSpec = toml::from_str(text).map_err(|e| bad(e.message().to_string()))?;
    match (raw.cam.is_empty(), raw.reels) {
        (false, None) => {
            let dists = raw.cam.iter().map(parse_dist).collect::<Result<Vec<_>>>()?;
            Ok(SpecFile { spec: MachineSpec::new(raw.award_length, dists)?, reels: None })
        }
        (true, Some(r)) => {
            let rm = parse_reels(&r)?;
            Ok(SpecFile { spec: MachineSpec::from_reels(&rm, raw.award_length)?, reels: Some(rm) })
        }
        (false, Some(_)) => Err(bad("give either [[cam]] tables or [reels], not both")),
        (true, None) => Err(bad("no [[cam]] tables and no [reels]")),
    }
}

pub fn parse_spec(text: &str) -> Result<MachineSpec> {
    parse_spec_file(text).map(|f| f.spec)
}

/// Distribution form. Exact distributions are written as reduced fractions
/// and the rest with the shortest decimal that reads back to the same `f64`.
pub fn dump_spec(spec: &MachineSpec) -> String {
    let mut out = format!("award_length = {}\n", spec.award_length());
    for d in spec.dists() {
        let atoms: Vec<String> = match d.exact_probs() {
            Some(exact) => {
                d.atoms().iter().zip(exact).map(|(a, r)| format!("\"{}:{r}\"", a.payout)).collect()
            }
            None => d.atoms().iter().map(|a| format!("\"{}:{:?}\"", a.payout, a.prob)).collect(),
        };
        let _ = write!(out, "\n[[cam]]\natoms = [{}]\n", atoms.join(", "));
    }
    out
}

pub fn dump_reel_spec(rm: &ReelMachine, award_length: usize) -> String {
    let mut out = format!("award_length = {award_length}\n\n[reels]\nstrips = [\n");
    for strip in rm.reels() {
        let syms: Vec<String> = strip.iter().map(|s| s.to_string()).collect();
        let _ = writeln!(out, "    [{}],", syms.join(", "));
    }
    out.push_str("]\npaytable = [\n");
    for (t, pay) in rm.paytable() {
        let _ = writeln!(out, "    \"{},{},{}:{pay}\",", t[0], t[1], t[2]);
    }
    let pattern: String = rm.mode_pattern().iter().map(|m| m.as_char()).collect();
    let _ = writeln!(out, "]\nmode_pattern = \"{pattern}\"");
    out
}
