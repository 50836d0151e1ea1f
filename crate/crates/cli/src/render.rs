// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Text, JSON and CSV renderings of command results.

use std::fmt::Write as _;

use hdbsm::{BellIndex, DetectorModel, GroupTable, Outcome, SdcReport, Setup, RNG_ALGORITHM};
use serde::{Deserialize, Serialize};

use crate::commands::Format;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub version: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
}

impl Default for Metadata {
    fn default() -> Self {
        Metadata {
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: None,
            rng: None,
        }
    }
}

impl Metadata {
    pub fn seeded(seed: u64) -> Self {
        Metadata {
            seed: Some(seed),
            rng: Some(RNG_ALGORITHM.to_string()),
            ..Metadata::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TablesOutput {
    pub metadata: Metadata,
    pub table: GroupTable,
    pub usable_groups: usize,
    pub capacity_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub outcome: Outcome,
    pub probability: f64,
    pub count: u64,
    pub frequency: f64,
    pub z: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleReport {
    pub metadata: Metadata,
    pub state: BellIndex,
    pub setup: Setup,
    pub model: DetectorModel,
    pub dim: usize,
    pub shots: u64,
    pub rows: Vec<SampleRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SdcOutput {
    pub metadata: Metadata,
    pub report: SdcReport,
}

fn json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn csv_string(
    write: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    write(&mut w)?;
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn join<T: ToString>(items: impl IntoIterator<Item = T>, sep: &str) -> String {
    items
        .into_iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(sep)
}

pub fn tables(out: &TablesOutput, format: Format) -> anyhow::Result<String> {
    let t = &out.table;
    match format {
        Format::Json => json(out),
        Format::Csv => csv_string(|w| {
            w.write_record(["group", "usable", "members", "outcomes"])?;
            for g in &t.groups {
                w.write_record([
                    g.id.to_string(),
                    g.usable.to_string(),
                    g.members.join(";"),
                    join(&g.support, ";"),
                ])?;
            }
            w.flush()?;
            Ok(())
        }),
        Format::Text => {
            let rows: Vec<(String, String, String)> = t
                .groups
                .iter()
                .map(|g| {
                    let id = if g.usable {
                        g.id.to_string()
                    } else {
                        format!("{}*", g.id)
                    };
                    (id, g.members.join(", "), join(&g.support, ", "))
                })
                .collect();
            let w_id = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
            let w_members = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(6);
            let mut s = String::new();
            writeln!(
                s,
                "setup {}, dim {}, {} detectors, {} policy",
                t.setup, t.dim, t.model, t.policy
            )?;
            writeln!(
                s,
                "{:<w_id$}  {:<w_members$}  Detection results",
                "Group", "States"
            )?;
            for (id, members, outcomes) in rows {
                writeln!(s, "{id:<w_id$}  {members:<w_members$}  {outcomes}")?;
            }
            if out.usable_groups != t.groups.len() {
                writeln!(
                    s,
                    "(* group set aside: single clicks cannot certify two photons)"
                )?;
            }
            writeln!(
                s,
                "{} groups, {} usable, capacity log2({}) = {:.3} bits/photon",
                t.groups.len(),
                out.usable_groups,
                out.usable_groups,
                out.capacity_bits
            )?;
            Ok(s)
        }
    }
}

pub fn sample(report: &SampleReport, format: Format) -> anyhow::Result<String> {
    match format {
        Format::Json => json(report),
        Format::Csv => csv_string(|w| {
            w.write_record(["outcome", "probability", "count", "frequency", "z"])?;
            for r in &report.rows {
                w.write_record([
                    r.outcome.to_string(),
                    format!("{:.6}", r.probability),
                    r.count.to_string(),
                    format!("{:.6}", r.frequency),
                    format!("{:.3}", r.z),
                ])?;
            }
            w.flush()?;
            Ok(())
        }),
        Format::Text => {
            let mut s = String::new();
            writeln!(
                s,
                "state {} via {} ({} detectors, dim {}), {} shots, seed {} [{}]",
                report.state,
                report.setup,
                report.model,
                report.dim,
                report.shots,
                report.metadata.seed.unwrap_or_default(),
                report.metadata.rng.as_deref().unwrap_or(RNG_ALGORITHM)
            )?;
            writeln!(
                s,
                "{:<10} {:>11} {:>9} {:>10} {:>8}",
                "outcome", "probability", "count", "frequency", "z"
            )?;
            for r in &report.rows {
                writeln!(
                    s,
                    "{:<10} {:>11.6} {:>9} {:>10.6} {:>8.3}",
                    r.outcome.to_string(),
                    r.probability,
                    r.count,
                    r.frequency,
                    r.z
                )?;
            }
            Ok(s)
        }
    }
}

pub fn sdc(out: &SdcOutput, format: Format) -> anyhow::Result<String> {
    let r = &out.report;
    match format {
        Format::Json => json(out),
        Format::Csv => csv_string(|w| {
            w.write_record(["message", "expected_group", "shots", "correct", "decoded"])?;
            for m in &r.messages {
                w.write_record([
                    m.message.to_string(),
                    m.expected_group.to_string(),
                    m.total().to_string(),
                    m.correct().to_string(),
                    join(m.decoded.iter().map(|(g, c)| format!("{g}:{c}")), ";"),
                ])?;
            }
            w.flush()?;
            Ok(())
        }),
        Format::Text => {
            let c = &r.config;
            let mut s = String::new();
            writeln!(
                s,
                "superdense coding via {} ({} detectors, {} policy), {} shots per message, seed {} [{}]",
                c.setup, c.model, c.policy, c.shots, c.seed, r.rng
            )?;
            writeln!(s, "{:<14} {:>5}  decoded", "message", "group")?;
            for m in &r.messages {
                writeln!(
                    s,
                    "{:<14} {:>5}  {}",
                    m.message.to_string(),
                    m.expected_group,
                    join(m.decoded.iter().map(|(g, n)| format!("{g}:{n}")), " ")
                )?;
            }
            writeln!(s, "accuracy {:.6}", r.accuracy)?;
            writeln!(
                s,
                "{:.3} bits/photon (log2 of {} usable groups)",
                r.bits_per_photon, r.usable_groups
            )?;
            Ok(s)
        }
    }
}
