// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Ideal detection: Born-rule outcome distributions for number-resolving and
//! threshold detectors, and seeded sampling from them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qstate::{Arm, Mode, Pol, TwoPhotonState};

/// Identifier recorded in output metadata for the sampling generator.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3/seed_from_u64";

/// Tolerance on the input norm accepted by [`outcome_distribution`].
pub const INPUT_NORM_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

/// One ideal detector per output mode. Renders as `A0`, `B3`, `A0+`, `B2-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DetectorId {
    pub arm: Arm,
    pub path: usize,
    pub pol: Option<Sign>,
}

impl DetectorId {
    /// Detector watching an output mode. Polarization slots are read in the
    /// `|±⟩` basis produced by the 45° stage.
    pub fn for_mode(mode: Mode) -> Self {
        DetectorId {
            arm: mode.arm,
            path: mode.path,
            pol: mode.pol.map(|p| match p {
                Pol::H => Sign::Plus,
                Pol::V => Sign::Minus,
            }),
        }
    }
}

impl fmt::Display for DetectorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.arm.letter(), self.path)?;
        match self.pol {
            Some(Sign::Plus) => f.write_str("+"),
            Some(Sign::Minus) => f.write_str("-"),
            None => Ok(()),
        }
    }
}

impl FromStr for DetectorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad detector label {s:?}"));
        let mut chars = s.chars();
        let arm = match chars.next() {
            Some('A') => Arm::First,
            Some('B') => Arm::Second,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let (digits, pol) = match rest.as_bytes().last() {
            Some(b'+') => (&rest[..rest.len() - 1], Some(Sign::Plus)),
            Some(b'-') => (&rest[..rest.len() - 1], Some(Sign::Minus)),
            _ => (rest, None),
        };
        if digits.is_empty() || !digits.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let path = digits.parse().map_err(|_| bad())?;
        Ok(DetectorId { arm, path, pol })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorModel {
    /// Photon-number resolving.
    Pnrd,
    /// Click / no-click.
    Threshold,
}

impl fmt::Display for DetectorModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            DetectorModel::Pnrd => "pnrd",
            DetectorModel::Threshold => "threshold",
        })
    }
}

impl FromStr for DetectorModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pnrd" => Ok(DetectorModel::Pnrd),
            "threshold" => Ok(DetectorModel::Threshold),
            _ => Err(Error::Parse(format!("unknown detector model {s:?}"))),
        }
    }
}

/// The detectors that fired, sorted. Two entries for a PNRD event (possibly
/// equal), one or two distinct entries for a threshold event.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Outcome {
    clicks: Vec<DetectorId>,
}

impl Outcome {
    pub fn pair(d1: DetectorId, d2: DetectorId) -> Self {
        let mut clicks = vec![d1, d2];
        clicks.sort();
        Outcome { clicks }
    }

    pub fn single(d: DetectorId) -> Self {
        Outcome { clicks: vec![d] }
    }

    pub fn clicks(&self) -> &[DetectorId] {
        &self.clicks
    }

    /// Both photons on one detector.
    pub fn is_bunched(&self) -> bool {
        self.clicks.len() == 2 && self.clicks[0] == self.clicks[1]
    }

    /// Only one detector fired.
    pub fn is_single_click(&self) -> bool {
        self.clicks.len() == 1
    }

    /// The event a threshold detector array would report.
    pub fn collapse(&self) -> Outcome {
        let mut clicks = self.clicks.clone();
        clicks.dedup();
        Outcome { clicks }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.clicks.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

impl FromStr for Outcome {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut clicks = s
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<DetectorId>>>()?;
        if clicks.is_empty() || clicks.len() > 2 {
            return Err(Error::Parse(format!("bad outcome {s:?}")));
        }
        clicks.sort();
        Ok(Outcome { clicks })
    }
}

impl Serialize for Outcome {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// Exact outcome probabilities. Zero-probability outcomes are not stored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    pub model: DetectorModel,
    pub probs: BTreeMap<Outcome, f64>,
}

impl OutcomeDistribution {
    pub fn support(&self) -> BTreeSet<Outcome> {
        self.probs.keys().cloned().collect()
    }

    pub fn probability(&self, outcome: &Outcome) -> f64 {
        self.probs.get(outcome).copied().unwrap_or(0.0)
    }

    pub fn total(&self) -> f64 {
        self.probs.values().sum()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Image under multiplicity collapse. Idempotent on threshold data.
    pub fn to_threshold(&self) -> OutcomeDistribution {
        let mut probs = BTreeMap::new();
        for (o, p) in &self.probs {
            *probs.entry(o.collapse()).or_insert(0.0) += p;
        }
        OutcomeDistribution {
            model: DetectorModel::Threshold,
            probs,
        }
    }
}

/// Born-rule distribution of a state expressed in output modes.
pub fn outcome_distribution(
    state: &TwoPhotonState,
    model: DetectorModel,
) -> Result<OutcomeDistribution> {
    let norm = state.norm_sqr();
    if (norm - 1.0).abs() > INPUT_NORM_TOLERANCE {
        return Err(Error::Unnormalized(norm));
    }
    let mut probs = BTreeMap::new();
    for (m1, m2, amp) in state.pairs() {
        let weight = if m1 == m2 { 1.0 } else { 2.0 };
        let p = weight * amp.norm_sqr();
        if p <= 0.0 {
            continue;
        }
        let outcome = Outcome::pair(DetectorId::for_mode(m1), DetectorId::for_mode(m2));
        let outcome = match model {
            DetectorModel::Pnrd => outcome,
            DetectorModel::Threshold => outcome.collapse(),
        };
        *probs.entry(outcome).or_insert(0.0) += p;
    }
    Ok(OutcomeDistribution { model, probs })
}

/// `shots` i.i.d. draws, reproducible for a given `(seed, shots)`.
pub fn sample(dist: &OutcomeDistribution, shots: usize, seed: u64) -> Vec<Outcome> {
    if shots == 0 || dist.is_empty() {
        return Vec::new();
    }
    let outcomes: Vec<&Outcome> = dist.probs.keys().collect();
    let index = WeightedIndex::new(dist.probs.values().copied()).expect("positive weights");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..shots)
        .map(|_| outcomes[index.sample(&mut rng)].clone())
        .collect()
}

/// Counts per outcome.
pub fn tally<'a, I>(outcomes: I) -> BTreeMap<Outcome, u64>
where
    I: IntoIterator<Item = &'a Outcome>,
{
    let mut counts = BTreeMap::new();
    for o in outcomes {
        *counts.entry(o.clone()).or_insert(0) += 1;
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optics::{build_fig1_network, build_fig2_network, evolve};
    use crate::qstate::{make_bell_state, make_hyper_state, BellIndex};

    fn outcomes(labels: &[&str]) -> BTreeSet<Outcome> {
        labels.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn fig1_dist(idx: BellIndex, model: DetectorModel) -> OutcomeDistribution {
        let s = evolve(
            &make_bell_state(4, idx).unwrap(),
            &build_fig1_network(4).unwrap(),
        )
        .unwrap();
        outcome_distribution(&s, model).unwrap()
    }

    #[test]
    fn detector_labels() {
        for s in ["A0", "B3", "A0+", "B2-", "A12"] {
            assert_eq!(s.parse::<DetectorId>().unwrap().to_string(), s);
        }
        for s in ["C0", "A", "A+", "Ax", "A0*", ""] {
            assert!(s.parse::<DetectorId>().is_err(), "{s}");
        }
        let o: Outcome = "B1 A0".parse().unwrap();
        assert_eq!(o.to_string(), "A0 B1");
        assert!("A0 A1 A2".parse::<Outcome>().is_err());
    }

    #[test]
    fn same_arm_example_is_uniform_quarter() {
        let d = fig1_dist(BellIndex::new(1, 0, 0), DetectorModel::Pnrd);
        assert_eq!(d.support(), outcomes(&["A0 A1", "B0 B1", "A2 A3", "B2 B3"]));
        for p in d.probs.values() {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn bunched_example_is_uniform_eighth() {
        let d = fig1_dist(BellIndex::new(0, 0, 0), DetectorModel::Pnrd);
        assert_eq!(d.len(), 8);
        assert!(d.probs.keys().all(Outcome::is_bunched));
        for p in d.probs.values() {
            assert!((p - 0.125).abs() < 1e-12);
        }
        let t = fig1_dist(BellIndex::new(0, 0, 0), DetectorModel::Threshold);
        assert_eq!(
            t.support(),
            outcomes(&["A0", "A1", "A2", "A3", "B0", "B1", "B2", "B3"])
        );
        for p in t.probs.values() {
            assert!((p - 0.125).abs() < 1e-12);
        }
        assert_eq!(d.to_threshold(), t);
    }

    #[test]
    fn fig2_worked_example() {
        let s = evolve(
            &make_hyper_state(BellIndex::new(2, 1, 0)).unwrap(),
            &build_fig2_network(),
        )
        .unwrap();
        let d = outcome_distribution(&s, DetectorModel::Pnrd).unwrap();
        assert_eq!(
            d.support(),
            outcomes(&[
                "A0+ A2-", "A0- A2+", "A1+ A3-", "A1- A3+", "B0+ B2-", "B0- B2+", "B1+ B3-",
                "B1- B3+"
            ])
        );
        for p in d.probs.values() {
            assert!((p - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_input_is_rejected() {
        let s = make_bell_state(4, BellIndex::new(0, 0, 0)).unwrap();
        let scaled = TwoPhotonState::from_symmetric_matrix(
            s.space(),
            &(s.to_symmetric_matrix() * crate::qstate::C64::from(1.1)),
        );
        assert!(matches!(
            outcome_distribution(&scaled, DetectorModel::Pnrd),
            Err(Error::Unnormalized(_))
        ));
    }

    #[test]
    fn sampling_is_deterministic() {
        let d = fig1_dist(BellIndex::new(1, 0, 0), DetectorModel::Pnrd);
        let x = sample(&d, 1000, 42);
        let y = sample(&d, 1000, 42);
        assert_eq!(x, y);
        assert_ne!(x, sample(&d, 1000, 43));
        assert_eq!(x.len(), 1000);
    }

    #[test]
    fn point_mass_sampling() {
        let mut probs = BTreeMap::new();
        probs.insert("A0 A1".parse().unwrap(), 1.0);
        let d = OutcomeDistribution {
            model: DetectorModel::Pnrd,
            probs,
        };
        let draws = sample(&d, 500, 3);
        assert!(draws.iter().all(|o| o.to_string() == "A0 A1"));
    }

    #[test]
    fn uniform_frequencies_within_five_sigma() {
        let d = fig1_dist(BellIndex::new(1, 0, 0), DetectorModel::Pnrd);
        let n = 100_000usize;
        let counts = tally(&sample(&d, n, 11));
        let sigma = (0.25f64 * 0.75 / n as f64).sqrt();
        assert_eq!(counts.len(), 4);
        for c in counts.values() {
            let f = *c as f64 / n as f64;
            assert!((f - 0.25).abs() < 5.0 * sigma, "{f}");
        }
    }
}
