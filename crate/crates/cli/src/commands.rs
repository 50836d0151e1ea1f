// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use clap::{
    builder::{PossibleValuesParser, TypedValueParser},
    Args, Parser, Subcommand, ValueEnum,
};
use hdbsm::{
    build_fig1_network, build_fig2_network, channel_capacity, classify_setup, evolve,
    make_bell_state, make_hyper_state, outcome_distribution, run_sdc, sample, tally, BellIndex,
    DetectorModel, Policy, SdcConfig, Setup,
};

use crate::references::{diff, ReferenceTables};
use crate::render::{self, Metadata, SampleReport, SampleRow, SdcOutput, TablesOutput};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "hdbsm",
    version,
    about = "Four-dimensional Bell-state measurement with two-photon interference"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute and print the distinguishable-group table for a setup.
    Tables(TablesArgs),
    /// Recompute both tables and diff them against the embedded references.
    Verify(VerifyArgs),
    /// Sample detection events for one Bell state.
    Sample(SampleArgs),
    /// Run superdense coding over all sixteen messages.
    Sdc(SdcArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SetupArg {
    Fig1,
    Fig2,
}

impl From<SetupArg> for Setup {
    fn from(s: SetupArg) -> Self {
        match s {
            SetupArg::Fig1 => Setup::Fig1,
            SetupArg::Fig2 => Setup::Fig2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    Pnrd,
    Threshold,
}

impl From<ModelArg> for DetectorModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Pnrd => DetectorModel::Pnrd,
            ModelArg::Threshold => DetectorModel::Threshold,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Strict,
    LossConservative,
}

impl From<PolicyArg> for Policy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Strict => Policy::Strict,
            PolicyArg::LossConservative => Policy::LossConservative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

fn dim_parser() -> impl TypedValueParser<Value = usize> {
    PossibleValuesParser::new(["2", "4"]).map(|s| s.parse::<usize>().expect("validated"))
}

#[derive(Debug, Args)]
pub struct TablesArgs {
    #[arg(long, value_enum, default_value_t = SetupArg::Fig1)]
    pub setup: SetupArg,
    #[arg(long, value_enum, default_value_t = ModelArg::Pnrd)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
    pub policy: PolicyArg,
    #[arg(long, default_value = "4", value_parser = dim_parser())]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Directory holding table1.json and table2.json to verify against
    /// instead of the embedded copies.
    #[arg(long)]
    pub references: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Bell state as `j,n,m`.
    #[arg(long, value_parser = parse_bell_label)]
    pub state: BellIndex,
    #[arg(long, value_enum, default_value_t = SetupArg::Fig1)]
    pub setup: SetupArg,
    #[arg(long, value_enum, default_value_t = ModelArg::Pnrd)]
    pub model: ModelArg,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "4", value_parser = dim_parser())]
    pub dim: usize,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SdcArgs {
    #[arg(long, value_enum, default_value_t = SetupArg::Fig1)]
    pub setup: SetupArg,
    #[arg(long, value_enum, default_value_t = ModelArg::Pnrd)]
    pub model: ModelArg,
    #[arg(long, value_enum, default_value_t = PolicyArg::Strict)]
    pub policy: PolicyArg,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Messages as `j,n,m`; all sixteen when omitted.
    #[arg(long = "message", value_parser = parse_bell_label)]
    pub messages: Vec<BellIndex>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

fn parse_bell_label(s: &str) -> Result<BellIndex, String> {
    s.parse().map_err(|e: hdbsm::Error| e.to_string())
}

/// What a command wants written and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Exit {
    fn ok(stdout: String) -> Self {
        Exit {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn usage(err: anyhow::Error) -> Self {
        Exit {
            code: EXIT_USAGE,
            stdout: String::new(),
            stderr: format!("error: {err:#}\n"),
        }
    }
}

pub fn run(cli: Cli) -> Exit {
    let result = match cli.command {
        Command::Tables(args) => cmd_tables(&args),
        Command::Verify(args) => return cmd_verify(&args),
        Command::Sample(args) => cmd_sample(&args),
        Command::Sdc(args) => cmd_sdc(&args),
    };
    match result {
        Ok(out) => Exit::ok(out),
        Err(e) => Exit::usage(e),
    }
}

pub fn cmd_tables(args: &TablesArgs) -> anyhow::Result<String> {
    let table = classify_setup(
        args.setup.into(),
        args.dim,
        args.model.into(),
        args.policy.into(),
    )?;
    let output = TablesOutput {
        metadata: Metadata::default(),
        usable_groups: table.usable_count(),
        capacity_bits: channel_capacity(&table)?,
        table,
    };
    render::tables(&output, args.format)
}

/// `(setup, model, policy, usable groups, bits)`.
pub type CapacityRow = (Setup, DetectorModel, Policy, usize, f64);

/// The four capacity figures: each setup with ideal PNRDs and with
/// threshold detectors under the loss-conservative policy.
pub fn capacity_rows() -> anyhow::Result<Vec<CapacityRow>> {
    let mut rows = Vec::new();
    for setup in [Setup::Fig1, Setup::Fig2] {
        for (model, policy) in [
            (DetectorModel::Pnrd, Policy::Strict),
            (DetectorModel::Threshold, Policy::LossConservative),
        ] {
            let t = classify_setup(setup, 4, model, policy)?;
            rows.push((
                setup,
                model,
                policy,
                t.usable_count(),
                channel_capacity(&t)?,
            ));
        }
    }
    Ok(rows)
}

pub fn cmd_verify(args: &VerifyArgs) -> Exit {
    let refs = match &args.references {
        Some(dir) => match ReferenceTables::from_dir(dir) {
            Ok(r) => r,
            Err(e) => return Exit::usage(e),
        },
        None => ReferenceTables::embedded(),
    };
    let mut out = String::new();
    let mut matched = 0;
    for reference in refs.iter() {
        let computed = match classify_setup(reference.setup, 4, DetectorModel::Pnrd, Policy::Strict)
        {
            Ok(t) => t,
            Err(e) => return Exit::usage(e.into()),
        };
        let diffs = diff(reference, &computed);
        if diffs.is_empty() {
            matched += 1;
            out.push_str(&format!(
                "table {} ({}): match, {} groups\n",
                reference.table,
                reference.setup,
                computed.groups.len()
            ));
        } else {
            out.push_str(&format!(
                "table {} ({}): MISMATCH, {} difference(s)\n",
                reference.table,
                reference.setup,
                diffs.len()
            ));
            for d in diffs {
                out.push_str(&format!("  {d}\n"));
            }
        }
    }
    out.push_str("capacities:\n");
    match capacity_rows() {
        Ok(rows) => {
            for (setup, model, policy, groups, bits) in rows {
                out.push_str(&format!(
                    "  {setup} {model:<9} {policy:<17} log2({groups:>2}) = {bits:.3} bits/photon\n"
                ));
            }
        }
        Err(e) => return Exit::usage(e),
    }
    out.push_str(&format!("{matched}/2 tables match\n"));
    Exit {
        code: if matched == 2 { EXIT_OK } else { EXIT_MISMATCH },
        stdout: out,
        stderr: String::new(),
    }
}

pub fn cmd_sample(args: &SampleArgs) -> anyhow::Result<String> {
    let setup: Setup = args.setup.into();
    let image = match setup {
        Setup::Fig1 => evolve(
            &make_bell_state(args.dim, args.state)?,
            &build_fig1_network(args.dim)?,
        )?,
        Setup::Fig2 => {
            if args.dim != 4 {
                anyhow::bail!("setup fig2 requires --dim 4");
            }
            evolve(&make_hyper_state(args.state)?, &build_fig2_network())?
        }
    };
    let dist = outcome_distribution(&image, args.model.into())?;
    let shots = args.shots as usize;
    let counts = tally(&sample(&dist, shots, args.seed));
    let rows = dist
        .probs
        .iter()
        .map(|(o, &p)| {
            let count = counts.get(o).copied().unwrap_or(0);
            let frequency = count as f64 / shots as f64;
            let sigma = (p * (1.0 - p) / shots as f64).sqrt();
            let z = if sigma > 0.0 {
                (frequency - p) / sigma
            } else {
                0.0
            };
            SampleRow {
                outcome: o.clone(),
                probability: p,
                count,
                frequency,
                z,
            }
        })
        .collect();
    let report = SampleReport {
        metadata: Metadata::seeded(args.seed),
        state: args.state,
        setup,
        model: args.model.into(),
        dim: args.dim,
        shots: args.shots,
        rows,
    };
    render::sample(&report, args.format)
}

pub fn cmd_sdc(args: &SdcArgs) -> anyhow::Result<String> {
    let config = SdcConfig {
        setup: args.setup.into(),
        model: args.model.into(),
        policy: args.policy.into(),
        seed: args.seed,
        shots: args.shots as usize,
    };
    let messages = if args.messages.is_empty() {
        BellIndex::all(4)
    } else {
        args.messages.clone()
    };
    let report = run_sdc(&config, &messages)?;
    let output = SdcOutput {
        metadata: Metadata::seeded(args.seed),
        report,
    };
    render::sdc(&output, args.format)
}
