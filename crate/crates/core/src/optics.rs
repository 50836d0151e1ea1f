// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! The two measurement networks and bosonic two-photon evolution.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::{
    check_dimension, Arm, Mode, ModeSpace, Pol, SinglePhotonUnitary, TwoPhotonState, C64,
};

/// Which measurement setup a network realizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setup {
    /// Beam splitters only, path-only modes.
    Fig1,
    /// Polarization-ancilla assisted, polarized modes.
    Fig2,
}

impl fmt::Display for Setup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Setup::Fig1 => "fig1",
            Setup::Fig2 => "fig2",
        })
    }
}

impl FromStr for Setup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Setup::Fig1),
            "fig2" => Ok(Setup::Fig2),
            _ => Err(Error::Parse(format!("unknown setup {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// 50:50 beam splitter between the arms, one per path (and polarization).
    BsHadamard,
    /// PBS at 0°: H is transmitted, V is routed to the neighbouring path
    /// `x ↦ x⊕1` in both arms.
    Pbs0Route,
    /// PBS at 45°: re-expresses each photon in the `|±⟩` basis; slot H then
    /// holds `|+⟩` and slot V holds `|−⟩`.
    Pbs45BasisChange,
}

/// Sign convention of the beam splitter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum BsConvention {
    /// `|x⟩_A → (|x⟩_a + |x⟩_b)/√2`, `|x⟩_B → (|x⟩_a − |x⟩_b)/√2`.
    #[default]
    Standard,
    /// `|x⟩_A → (|x⟩_a − |x⟩_b)/√2`, `|x⟩_B → (|x⟩_a + |x⟩_b)/√2`.
    Swapped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkSpec {
    pub setup: Setup,
    pub space: ModeSpace,
    pub stages: Vec<Stage>,
    #[serde(default)]
    pub bs_convention: BsConvention,
}

impl NetworkSpec {
    pub fn fig1(dim: usize) -> Result<Self> {
        check_dimension(dim)?;
        Ok(NetworkSpec {
            setup: Setup::Fig1,
            space: ModeSpace::new(dim, false)?,
            stages: vec![Stage::BsHadamard],
            bs_convention: BsConvention::Standard,
        })
    }

    pub fn fig2() -> Self {
        NetworkSpec {
            setup: Setup::Fig2,
            space: ModeSpace::new(4, true).expect("valid mode space"),
            stages: vec![Stage::Pbs0Route, Stage::BsHadamard, Stage::Pbs45BasisChange],
            bs_convention: BsConvention::Standard,
        }
    }

    pub fn for_setup(setup: Setup, dim: usize) -> Result<Self> {
        match setup {
            Setup::Fig1 => Self::fig1(dim),
            Setup::Fig2 if dim == 4 => Ok(Self::fig2()),
            Setup::Fig2 => Err(Error::UnsupportedDimension(dim)),
        }
    }

    pub fn with_bs_convention(mut self, convention: BsConvention) -> Self {
        self.bs_convention = convention;
        self
    }

    pub fn stage_unitary(&self, stage: Stage) -> SinglePhotonUnitary {
        let m = match stage {
            Stage::BsHadamard => beam_splitter(self.space, self.bs_convention),
            Stage::Pbs0Route => pbs0_route(self.space),
            Stage::Pbs45BasisChange => pbs45_basis_change(self.space),
        };
        SinglePhotonUnitary::new(m).expect("optical stages are unitary")
    }

    /// Composition of all stages in order.
    pub fn unitary(&self) -> SinglePhotonUnitary {
        self.stages.iter().fold(
            SinglePhotonUnitary::identity(self.space.len()),
            |acc, &s| acc.then(&self.stage_unitary(s)),
        )
    }
}

fn set(m: &mut DMatrix<C64>, space: ModeSpace, out: Mode, inp: Mode, v: f64) {
    m[(space.index(out).unwrap(), space.index(inp).unwrap())] = C64::from(v);
}

fn beam_splitter(space: ModeSpace, convention: BsConvention) -> DMatrix<C64> {
    let n = space.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let (sa, sb) = match convention {
        BsConvention::Standard => (1.0, -1.0),
        BsConvention::Swapped => (-1.0, 1.0),
    };
    let mut m = DMatrix::zeros(n, n);
    for inp in space.modes().filter(|m| m.arm == Arm::First) {
        let partner = Mode {
            arm: Arm::Second,
            ..inp
        };
        // column for A: a gets +h, b gets sa·h
        set(&mut m, space, inp, inp, h);
        set(&mut m, space, partner, inp, sa * h);
        // column for B: a gets +h, b gets sb·h
        set(&mut m, space, inp, partner, h);
        set(&mut m, space, partner, partner, sb * h);
    }
    m
}

fn pbs0_route(space: ModeSpace) -> DMatrix<C64> {
    let n = space.len();
    let mut m = DMatrix::zeros(n, n);
    for inp in space.modes() {
        let out = match inp.pol {
            Some(Pol::V) => Mode {
                path: inp.path ^ 1,
                ..inp
            },
            _ => inp,
        };
        set(&mut m, space, out, inp, 1.0);
    }
    m
}

fn pbs45_basis_change(space: ModeSpace) -> DMatrix<C64> {
    let n = space.len();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = DMatrix::zeros(n, n);
    for inp in space.modes() {
        let plus = Mode {
            pol: Some(Pol::H),
            ..inp
        };
        let minus = Mode {
            pol: Some(Pol::V),
            ..inp
        };
        match inp.pol {
            Some(Pol::H) => {
                set(&mut m, space, plus, inp, h);
                set(&mut m, space, minus, inp, h);
            }
            Some(Pol::V) => {
                set(&mut m, space, plus, inp, h);
                set(&mut m, space, minus, inp, -h);
            }
            None => set(&mut m, space, inp, inp, 1.0),
        }
    }
    m
}

/// Block-diagonal 50:50 Hadamard between the arms, identity across paths.
pub fn build_fig1_network(dim: usize) -> Result<SinglePhotonUnitary> {
    Ok(NetworkSpec::fig1(dim)?.unitary())
}

/// PBS@0° routing, then the beam splitters, then the PBS@45° basis change,
/// over the 16 polarized modes of `d = 4`.
pub fn build_fig2_network() -> SinglePhotonUnitary {
    NetworkSpec::fig2().unitary()
}

/// Evolves a two-photon state: `ψ'(o1, o2) = Σ U[o1,i1] U[o2,i2] ψ(i1, i2)`,
/// i.e. `Ψ' = U Ψ Uᵀ` on the symmetric amplitude matrix.
pub fn evolve(state: &TwoPhotonState, network: &SinglePhotonUnitary) -> Result<TwoPhotonState> {
    let space = state.space();
    if network.dim() != space.len() {
        return Err(Error::ModeSpaceMismatch(format!(
            "network acts on {} modes, state lives on {}",
            network.dim(),
            space.len()
        )));
    }
    let u = network.matrix();
    let psi = state.to_symmetric_matrix();
    let out = u * psi * u.transpose();
    Ok(TwoPhotonState::from_symmetric_matrix(space, &out))
}
