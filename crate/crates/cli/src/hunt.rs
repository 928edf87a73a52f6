//! Batch search for sources where the minimizer test and the LP decision part ways.
//!
//! Trial `t` draws its source from a generator seeded with `seed + t`, so a run
//! is reproducible and the log does not depend on how trials are scheduled.

use std::io::Write;

use omnivocal_core::{probe_tabular, Classification, JointSource, LpOptions, Tolerances};
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::generate::{trial_rng, uniform_source};
use crate::io::SourceFile;

#[derive(Clone, Debug)]
pub struct HuntConfig {
    pub m: usize,
    pub trials: u64,
    pub seed: u64,
    /// One size per terminal.
    pub alphabet: Vec<u32>,
    /// Worker threads; 0 picks the machine default.
    pub jobs: usize,
    pub tol: Tolerances,
    pub lp: LpOptions,
}

/// One line of the hunt log.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HuntRecord {
    pub trial: u64,
    pub seed: u64,
    pub m: usize,
    pub alphabet_sizes: Vec<u32>,
    pub atoms_digest: String,
    pub condition: &'static str,
    pub lp: &'static str,
    pub classification: &'static str,
    pub reverified: bool,
    pub capacity: f64,
    pub gaps: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<SourceFile>,
}

#[derive(Clone, Debug)]
pub struct HuntSummary {
    pub records: Vec<HuntRecord>,
    pub counts: Vec<(Classification, usize)>,
}

impl HuntSummary {
    pub fn count(&self, c: Classification) -> usize {
        self.counts.iter().find(|(k, _)| *k == c).map_or(0, |(_, n)| *n)
    }
}

/// SHA-256 over the atoms: each symbol as little-endian `u32`, then the
/// probability's IEEE bits as little-endian `u64`.
pub fn atoms_digest(source: &JointSource) -> String {
    let mut hasher = Sha256::new();
    for (x, p) in source.atoms() {
        for s in x {
            hasher.update(s.to_le_bytes());
        }
        hasher.update(p.to_bits().to_le_bytes());
    }
    hex::encode(hasher.finalize())
}

fn run_trial(config: &HuntConfig, trial: u64) -> Result<HuntRecord, CliError> {
    let seed = config.seed.wrapping_add(trial);
    let source = uniform_source(&mut trial_rng(config.seed, trial), &config.alphabet)?;
    let probe = probe_tabular(&source, &config.tol, &config.lp)?;
    let candidate = probe.classification == Classification::CandidateCounterexample;
    Ok(HuntRecord {
        trial,
        seed,
        m: config.m,
        alphabet_sizes: config.alphabet.clone(),
        atoms_digest: atoms_digest(&source),
        condition: probe.condition.name(),
        lp: probe.lp.name(),
        classification: probe.classification.name(),
        reverified: probe.reverified,
        capacity: probe.capacity,
        gaps: probe.gaps,
        source: candidate.then(|| SourceFile::from_source(&source)),
    })
}

pub fn run_hunt(config: &HuntConfig) -> Result<HuntSummary, CliError> {
    if config.m < 4 {
        return Err(CliError::Domain(format!(
            "m = {}: m = 3 is settled exactly by the three-terminal criterion; hunts need m >= 4",
            config.m
        )));
    }
    if config.trials == 0 {
        return Err(CliError::Input("the trial count must be at least 1".into()));
    }
    if config.alphabet.len() != config.m {
        return Err(CliError::Input(format!(
            "{} alphabet sizes given for m = {}",
            config.alphabet.len(),
            config.m
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| CliError::Internal(format!("worker pool: {e}")))?;
    let results: Vec<Result<HuntRecord, CliError>> =
        pool.install(|| (0..config.trials).into_par_iter().map(|t| run_trial(config, t)).collect());
    let records = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let counts = Classification::ALL
        .iter()
        .map(|&c| (c, records.iter().filter(|r| r.classification == c.name()).count()))
        .collect();
    Ok(HuntSummary { records, counts })
}

/// Writes one JSON object per line, in trial order.
pub fn write_log<W: Write>(records: &[HuntRecord], mut out: W) -> std::io::Result<()> {
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")?;
    }
    out.flush()
}
