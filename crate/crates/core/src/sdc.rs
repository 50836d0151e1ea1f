// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Superdense coding over the four-dimensional path Bell basis.
//!
//! The receiver holds `|ψ⁰₀₀⟩` (with the polarization ancilla for fig2), the
//! sender applies one of the sixteen encoding unitaries to the second photon,
//! and the receiver decodes by looking up which group's support contains the
//! detection event.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::classify::{classify_setup, GroupTable, Policy};
use crate::detect::{outcome_distribution, sample, tally, DetectorModel, Outcome, RNG_ALGORITHM};
use crate::error::{Error, Result};
use crate::optics::{evolve, NetworkSpec, Setup};
use crate::qstate::{encode, make_bell_state, make_hyper_state, Arm, BellIndex};

const DIM: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SdcConfig {
    pub setup: Setup,
    pub model: DetectorModel,
    pub policy: Policy,
    pub seed: u64,
    pub shots: usize,
}

impl Default for SdcConfig {
    fn default() -> Self {
        SdcConfig {
            setup: Setup::Fig1,
            model: DetectorModel::Pnrd,
            policy: Policy::Strict,
            seed: 0,
            shots: 1000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MessageReport {
    pub message: BellIndex,
    pub expected_group: usize,
    /// Decoded group id → shots.
    pub decoded: BTreeMap<usize, u64>,
    /// Raw detection events → shots.
    pub outcomes: BTreeMap<Outcome, u64>,
}

impl MessageReport {
    pub fn correct(&self) -> u64 {
        self.decoded.get(&self.expected_group).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.decoded.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdcReport {
    pub config: SdcConfig,
    pub rng: String,
    pub usable_groups: usize,
    pub bits_per_photon: f64,
    pub accuracy: f64,
    pub messages: Vec<MessageReport>,
}

/// Runs the protocol once per message, `config.shots` detections each.
/// Message `k` samples with seed `config.seed + k`.
pub fn run_sdc(config: &SdcConfig, messages: &[BellIndex]) -> Result<SdcReport> {
    if config.shots == 0 {
        return Err(Error::Parse("shots must be at least 1".into()));
    }
    for m in messages {
        m.validate(DIM)?;
    }
    let table = classify_setup(config.setup, DIM, config.model, config.policy)?;
    let bits_per_photon = crate::classify::channel_capacity(&table)?;
    let decoder = table.decoder();
    let network = NetworkSpec::for_setup(config.setup, DIM)?.unitary();
    let reference = match config.setup {
        Setup::Fig1 => make_bell_state(DIM, BellIndex::new(0, 0, 0))?,
        Setup::Fig2 => make_hyper_state(BellIndex::new(0, 0, 0))?,
    };

    let reports = messages
        .par_iter()
        .enumerate()
        .map(|(k, &message)| {
            let expected_group = expected_group(&table, message)?;
            let encoded = encode(&reference, message, Arm::Second)?;
            let dist = outcome_distribution(&evolve(&encoded, &network)?, config.model)?;
            let draws = sample(&dist, config.shots, config.seed.wrapping_add(k as u64));
            let mut decoded = BTreeMap::new();
            for o in &draws {
                let g = decoder
                    .get(o)
                    .ok_or_else(|| Error::UnknownOutcome(o.to_string()))?;
                *decoded.entry(*g).or_insert(0) += 1;
            }
            Ok(MessageReport {
                message,
                expected_group,
                decoded,
                outcomes: tally(&draws),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let correct: u64 = reports.iter().map(MessageReport::correct).sum();
    let total: u64 = reports.iter().map(MessageReport::total).sum();
    let accuracy = if total == 0 {
        1.0
    } else {
        correct as f64 / total as f64
    };
    Ok(SdcReport {
        config: *config,
        rng: RNG_ALGORITHM.to_string(),
        usable_groups: table.usable_count(),
        bits_per_photon,
        accuracy,
        messages: reports,
    })
}

fn expected_group(table: &GroupTable, message: BellIndex) -> Result<usize> {
    table
        .group_of(&message.to_string())
        .map(|g| g.id)
        .ok_or(Error::InvalidIndex {
            dim: DIM,
            j: message.j,
            n: message.n,
            m: message.m,
        })
}
