// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Mode space, two-photon states, the generalized path Bell basis and the
//! encoding unitaries that move between its members.
//!
//! Two-photon states are stored as symmetric amplitude functions over
//! canonically ordered mode pairs. The first-quantized vector
//! `Σ ψ(i, j) |i⟩|j⟩` is normalized in the usual way, so the Born weight of
//! an unordered pair `{i, j}` is `2|ψ(i, j)|²` for `i ≠ j` and `|ψ(i, i)|²`
//! for a doubly occupied mode.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Amplitudes below this magnitude are dropped from stored states.
pub const PRUNE_TOLERANCE: f64 = 1e-12;
/// Allowed deviation of a state's norm from one.
pub const NORM_TOLERANCE: f64 = 1e-9;
/// Entrywise tolerance for `U·U† = I`.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

/// Which photon / spatial arm a mode belongs to. Before a network this is the
/// source arm (A/B); after the network it is the output port (a/b).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Arm {
    First,
    Second,
}

impl Arm {
    pub fn letter(self) -> char {
        match self {
            Arm::First => 'A',
            Arm::Second => 'B',
        }
    }

    fn ordinal(self) -> usize {
        match self {
            Arm::First => 0,
            Arm::Second => 1,
        }
    }
}

/// Polarization slot of a mode. After the 45° basis change, slot `H` holds
/// the `|+⟩` component and slot `V` the `|−⟩` component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pol {
    H,
    V,
}

impl Pol {
    fn ordinal(self) -> usize {
        match self {
            Pol::H => 0,
            Pol::V => 1,
        }
    }
}

/// A single-photon mode. The derived ordering is `(arm, path, pol)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Mode {
    pub arm: Arm,
    pub path: usize,
    pub pol: Option<Pol>,
}

impl Mode {
    pub const fn new(arm: Arm, path: usize, pol: Option<Pol>) -> Self {
        Mode { arm, path, pol }
    }

    pub const fn path(arm: Arm, path: usize) -> Self {
        Mode {
            arm,
            path,
            pol: None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arm.letter(), self.path)?;
        match self.pol {
            Some(Pol::H) => write!(f, "H"),
            Some(Pol::V) => write!(f, "V"),
            None => Ok(()),
        }
    }
}

/// The set of single-photon modes: two arms, `dim` paths per arm and an
/// optional two-valued polarization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeSpace {
    dim: usize,
    polarized: bool,
}

impl ModeSpace {
    pub fn new(dim: usize, polarized: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::UnsupportedDimension(dim));
        }
        Ok(ModeSpace { dim, polarized })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_polarized(&self) -> bool {
        self.polarized
    }

    fn pol_count(&self) -> usize {
        if self.polarized {
            2
        } else {
            1
        }
    }

    /// Number of modes, `D = 2·d` or `4·d` with polarization.
    pub fn len(&self) -> usize {
        2 * self.dim * self.pol_count()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, mode: Mode) -> bool {
        mode.path < self.dim && mode.pol.is_some() == self.polarized
    }

    /// Position of `mode` in the canonical order.
    pub fn index(&self, mode: Mode) -> Option<usize> {
        if !self.contains(mode) {
            return None;
        }
        let pol = mode.pol.map_or(0, Pol::ordinal);
        Some((mode.arm.ordinal() * self.dim + mode.path) * self.pol_count() + pol)
    }

    pub fn mode(&self, index: usize) -> Mode {
        assert!(index < self.len(), "mode index {index} out of range");
        let pc = self.pol_count();
        let pol = if self.polarized {
            Some(if index.is_multiple_of(2) {
                Pol::H
            } else {
                Pol::V
            })
        } else {
            None
        };
        let rest = index / pc;
        let arm = if rest / self.dim == 0 {
            Arm::First
        } else {
            Arm::Second
        };
        Mode::new(arm, rest % self.dim, pol)
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(move |i| self.mode(i))
    }
}

/// Bosonic two-photon pure state as a symmetric amplitude function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoPhotonState {
    space: ModeSpace,
    amplitudes: BTreeMap<(Mode, Mode), C64>,
}

impl TwoPhotonState {
    /// Builds the normalized symmetrization of the first-quantized vector
    /// `Σ c |m1⟩|m2⟩`. Repeated terms accumulate.
    pub fn symmetrized<I>(space: ModeSpace, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Mode, Mode, C64)>,
    {
        let n = space.len();
        let mut psi = DMatrix::<C64>::zeros(n, n);
        for (m1, m2, c) in terms {
            let i = space
                .index(m1)
                .ok_or_else(|| Error::ModeSpaceMismatch(format!("mode {m1} not in space")))?;
            let j = space
                .index(m2)
                .ok_or_else(|| Error::ModeSpaceMismatch(format!("mode {m2} not in space")))?;
            psi[(i, j)] += c * 0.5;
            psi[(j, i)] += c * 0.5;
        }
        let norm = psi.norm();
        if norm < PRUNE_TOLERANCE {
            return Err(Error::Unnormalized(norm));
        }
        Ok(Self::from_symmetric_matrix(space, &(psi / C64::from(norm))))
    }

    /// Reads the upper triangle of a symmetric amplitude matrix in canonical
    /// mode order. The matrix is assumed symmetric.
    pub fn from_symmetric_matrix(space: ModeSpace, psi: &DMatrix<C64>) -> Self {
        let n = space.len();
        assert_eq!(
            psi.shape(),
            (n, n),
            "amplitude matrix does not match mode space"
        );
        let mut amplitudes = BTreeMap::new();
        for i in 0..n {
            for j in i..n {
                let a = psi[(i, j)];
                if a.norm() >= PRUNE_TOLERANCE {
                    amplitudes.insert((space.mode(i), space.mode(j)), a);
                }
            }
        }
        TwoPhotonState { space, amplitudes }
    }

    /// Full symmetric `D×D` amplitude matrix.
    pub fn to_symmetric_matrix(&self) -> DMatrix<C64> {
        let n = self.space.len();
        let mut psi = DMatrix::<C64>::zeros(n, n);
        for (&(m1, m2), &a) in &self.amplitudes {
            let i = self.space.index(m1).expect("stored mode in space");
            let j = self.space.index(m2).expect("stored mode in space");
            psi[(i, j)] = a;
            psi[(j, i)] = a;
        }
        psi
    }

    pub fn space(&self) -> ModeSpace {
        self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim
    }

    /// Symmetric amplitude `ψ(m1, m2) = ψ(m2, m1)`.
    pub fn amplitude(&self, m1: Mode, m2: Mode) -> C64 {
        let key = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        self.amplitudes.get(&key).copied().unwrap_or_default()
    }

    /// Stored amplitudes keyed by canonically ordered pairs.
    pub fn pairs(&self) -> impl Iterator<Item = (Mode, Mode, C64)> + '_ {
        self.amplitudes.iter().map(|(&(a, b), &c)| (a, b, c))
    }

    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    /// `Σ_{m1<m2} 2|ψ|² + Σ_m |ψ(m,m)|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.pairs()
            .map(|(a, b, c)| {
                if a == b {
                    c.norm_sqr()
                } else {
                    2.0 * c.norm_sqr()
                }
            })
            .sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < NORM_TOLERANCE
    }

    /// First-quantized inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &TwoPhotonState) -> C64 {
        self.pairs()
            .map(|(a, b, c)| {
                let w = if a == b { 1.0 } else { 2.0 };
                c.conj() * other.amplitude(a, b) * w
            })
            .sum()
    }

    /// Equality up to a global phase, fixed by the largest-magnitude
    /// amplitude of `self`.
    pub fn approx_eq_up_to_phase(&self, other: &TwoPhotonState, tol: f64) -> bool {
        if self.space != other.space {
            return false;
        }
        let Some((&key, &pivot)) = self
            .amplitudes
            .iter()
            .max_by(|x, y| x.1.norm().total_cmp(&y.1.norm()))
        else {
            return other.amplitudes.is_empty();
        };
        let theirs = other.amplitude(key.0, key.1);
        if theirs.norm() < PRUNE_TOLERANCE {
            return false;
        }
        let phase = theirs / pivot;
        let phase = phase / phase.norm();
        let keys = self.amplitudes.keys().chain(other.amplitudes.keys());
        keys.into_iter()
            .all(|&(a, b)| (self.amplitude(a, b) * phase - other.amplitude(a, b)).norm() < tol)
    }
}

/// Label of a generalized Bell state `|ψ^m_{jn}⟩`: pairing class `j`,
/// relative phase `(−1)^n` and sign `(−1)^m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BellIndex {
    pub j: usize,
    pub n: u8,
    pub m: u8,
}

impl BellIndex {
    pub const fn new(j: usize, n: u8, m: u8) -> Self {
        BellIndex { j, n, m }
    }

    pub fn validate(&self, dim: usize) -> Result<()> {
        check_dimension(dim)?;
        let ok = self.j < dim && self.n <= 1 && self.m <= 1 && !(dim == 2 && self.m != 0);
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidIndex {
                dim,
                j: self.j,
                n: self.n,
                m: self.m,
            })
        }
    }

    /// Every valid index for `dim`, `j` major then `n`, then `m`.
    pub fn all(dim: usize) -> Vec<BellIndex> {
        let ms: &[u8] = if dim == 2 { &[0] } else { &[0, 1] };
        let mut out = Vec::new();
        for j in 0..dim {
            for n in 0..=1 {
                for &m in ms {
                    out.push(BellIndex::new(j, n, m));
                }
            }
        }
        out
    }

    /// Partner path of `x` under this index's pairing class.
    pub fn partner(&self, x: usize) -> usize {
        x ^ self.j
    }

    /// Coefficient sign of the `x`-th component: `(−1)^{n·x₀ + m·x₁}` where
    /// `x₀`, `x₁` are the two low bits of `x`.
    pub fn sign(&self, x: usize) -> f64 {
        let flips = u32::from(self.n) * (x & 1) as u32 + u32::from(self.m) * ((x >> 1) & 1) as u32;
        if flips.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "psi[{}][{}][{}]", self.j, self.n, self.m)
    }
}

impl FromStr for BellIndex {
    type Err = Error;

    /// Accepts `j,n,m` or `psi[j][n][m]`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Bell label {s:?}"));
        let s = s.trim();
        let parts: Vec<&str> = if let Some(rest) = s.strip_prefix("psi[") {
            rest.strip_suffix(']')
                .ok_or_else(bad)?
                .split("][")
                .collect()
        } else {
            s.split(',').map(str::trim).collect()
        };
        if parts.len() != 3 {
            return Err(bad());
        }
        let j = parts[0].parse().map_err(|_| bad())?;
        let n = parts[1].parse().map_err(|_| bad())?;
        let m = parts[2].parse().map_err(|_| bad())?;
        if n > 1 || m > 1 {
            return Err(bad());
        }
        Ok(BellIndex::new(j, n, m))
    }
}

impl Serialize for BellIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BellIndex {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Path dimensions with a well-defined XOR pairing: powers of two, at least 2.
pub fn check_dimension(dim: usize) -> Result<()> {
    if dim >= 2 && dim.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::UnsupportedDimension(dim))
    }
}

/// A passive linear-optical network as a unitary on the single-photon modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SinglePhotonUnitary {
    matrix: DMatrix<C64>,
}

impl SinglePhotonUnitary {
    pub fn new(matrix: DMatrix<C64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ModeSpaceMismatch(format!(
                "non-square matrix {:?}",
                matrix.shape()
            )));
        }
        let u = SinglePhotonUnitary { matrix };
        if !u.is_unitary(UNITARY_TOLERANCE) {
            return Err(Error::ModeSpaceMismatch("matrix is not unitary".into()));
        }
        Ok(u)
    }

    pub fn identity(dim: usize) -> Self {
        SinglePhotonUnitary {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// Largest entrywise deviation of `U·U†` from the identity.
    pub fn unitarity_error(&self) -> f64 {
        let n = self.dim();
        let prod = &self.matrix * self.matrix.adjoint();
        (prod - DMatrix::<C64>::identity(n, n))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() < tol
    }

    pub fn adjoint(&self) -> Self {
        SinglePhotonUnitary {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `next ∘ self`: apply `self` first.
    pub fn then(&self, next: &SinglePhotonUnitary) -> Self {
        assert_eq!(
            self.dim(),
            next.dim(),
            "composing unitaries of different size"
        );
        SinglePhotonUnitary {
            matrix: &next.matrix * &self.matrix,
        }
    }

    /// Lifts a `d×d` path unitary to the full mode space, acting on the
    /// paths of `arm` only and as identity on polarization and the other arm.
    pub fn on_arm(&self, space: ModeSpace, arm: Arm) -> Result<Self> {
        if self.dim() != space.dim() {
            return Err(Error::ModeSpaceMismatch(format!(
                "path unitary of size {} on dimension {}",
                self.dim(),
                space.dim()
            )));
        }
        let n = space.len();
        let mut big = DMatrix::<C64>::zeros(n, n);
        for out in space.modes() {
            for inp in space.modes() {
                let value = if inp.arm != arm || out.arm != arm {
                    if inp == out {
                        C64::from(1.0)
                    } else {
                        C64::default()
                    }
                } else if inp.pol == out.pol {
                    self.matrix[(out.path, inp.path)]
                } else {
                    C64::default()
                };
                big[(space.index(out).unwrap(), space.index(inp).unwrap())] = value;
            }
        }
        Ok(SinglePhotonUnitary { matrix: big })
    }
}

/// `|ψ^m_{jn}⟩ = d^{-1/2} Σ_x s(x) |x⟩_A |x⊕j⟩_B` over path-only modes.
pub fn make_bell_state(dim: usize, idx: BellIndex) -> Result<TwoPhotonState> {
    idx.validate(dim)?;
    let space = ModeSpace::new(dim, false)?;
    TwoPhotonState::symmetrized(
        space,
        (0..dim).map(|x| {
            (
                Mode::path(Arm::First, x),
                Mode::path(Arm::Second, idx.partner(x)),
                C64::from(idx.sign(x)),
            )
        }),
    )
}

/// `|ψ^m_{jn}⟩ ⊗ (|HH⟩ + |VV⟩)/√2` over the 16 polarized modes of `d = 4`.
pub fn make_hyper_state(idx: BellIndex) -> Result<TwoPhotonState> {
    const DIM: usize = 4;
    idx.validate(DIM)?;
    let space = ModeSpace::new(DIM, true)?;
    let terms = (0..DIM).flat_map(|x| {
        [Pol::H, Pol::V].into_iter().map(move |p| {
            (
                Mode::new(Arm::First, x, Some(p)),
                Mode::new(Arm::Second, idx.partner(x), Some(p)),
                C64::from(idx.sign(x)),
            )
        })
    });
    TwoPhotonState::symmetrized(space, terms)
}

/// `U^m_{jn} = Σ_x s(x) |x⊕j⟩⟨x|` as a `d×d` path unitary.
pub fn encoding_unitary(dim: usize, idx: BellIndex) -> Result<SinglePhotonUnitary> {
    idx.validate(dim)?;
    let mut u = DMatrix::<C64>::zeros(dim, dim);
    for x in 0..dim {
        u[(idx.partner(x), x)] = C64::from(idx.sign(x));
    }
    Ok(SinglePhotonUnitary { matrix: u })
}

/// Applies `U^m_{jn}` to the photon in `which` arm.
pub fn encode(state: &TwoPhotonState, idx: BellIndex, which: Arm) -> Result<TwoPhotonState> {
    let u = encoding_unitary(state.dim(), idx)?;
    let lifted = u.on_arm(state.space(), which)?;
    crate::optics::evolve(state, &lifted)
}
