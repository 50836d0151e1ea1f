// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Simulation of linear-optical four-dimensional Bell-state measurement
//! with two-photon interference.
//!
//! The pipeline is: build a Bell state ([`qstate`]), send it through one of
//! the two measurement networks ([`optics`]), read off the ideal detector
//! statistics ([`detect`]), group states whose detection events overlap
//! ([`classify`]), and run superdense coding on top ([`sdc`]).

pub mod classify;
pub mod detect;
pub mod error;
pub mod optics;
pub mod qstate;
pub mod sdc;

pub use classify::{
    bell_basis, channel_capacity, classify, classify_setup, Group, GroupTable, Policy,
};
pub use detect::{
    outcome_distribution, sample, tally, DetectorId, DetectorModel, Outcome, OutcomeDistribution,
    Sign, RNG_ALGORITHM,
};
pub use error::{Error, Result};
pub use optics::{
    build_fig1_network, build_fig2_network, evolve, BsConvention, NetworkSpec, Setup, Stage,
};
pub use qstate::{
    encode, encoding_unitary, make_bell_state, make_hyper_state, Arm, BellIndex, Mode, ModeSpace,
    Pol, SinglePhotonUnitary, TwoPhotonState, C64,
};
pub use sdc::{run_sdc, MessageReport, SdcConfig, SdcReport};
