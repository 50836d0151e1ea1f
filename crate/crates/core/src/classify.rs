// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Distinguishability partition of the Bell basis and the resulting
//! superdense-coding capacity.
//!
//! Two states are confusable when their outcome supports intersect. Groups
//! are the connected components of that graph, numbered by the first member
//! in input order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::detect::{outcome_distribution, DetectorModel, Outcome};
use crate::error::{Error, Result};
use crate::optics::{evolve, NetworkSpec, Setup};
use crate::qstate::{make_bell_state, make_hyper_state, BellIndex, TwoPhotonState};

/// How groups that need number resolution are treated with threshold
/// detectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Every group counts.
    Strict,
    /// With threshold detectors, a single click cannot certify that both
    /// photons arrived; states that produce single clicks are set aside.
    LossConservative,
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Policy::Strict => "strict",
            Policy::LossConservative => "loss_conservative",
        })
    }
}

impl FromStr for Policy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "strict" => Ok(Policy::Strict),
            "loss_conservative" | "loss-conservative" => Ok(Policy::LossConservative),
            _ => Err(Error::Parse(format!("unknown policy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    /// 1-based.
    pub id: usize,
    pub members: Vec<String>,
    pub support: BTreeSet<Outcome>,
    pub usable: bool,
}

impl Group {
    pub fn needs_number_resolution(&self) -> bool {
        self.support.iter().any(Outcome::is_bunched)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTable {
    pub setup: Setup,
    pub dim: usize,
    pub model: DetectorModel,
    pub policy: Policy,
    pub groups: Vec<Group>,
}

impl GroupTable {
    pub fn usable_count(&self) -> usize {
        self.groups.iter().filter(|g| g.usable).count()
    }

    pub fn group_of(&self, label: &str) -> Option<&Group> {
        self.groups
            .iter()
            .find(|g| g.members.iter().any(|m| m == label))
    }

    /// Outcome → group id.
    pub fn decoder(&self) -> BTreeMap<Outcome, usize> {
        self.groups
            .iter()
            .flat_map(|g| g.support.iter().map(move |o| (o.clone(), g.id)))
            .collect()
    }

    /// Checks that groups partition the labels and have pairwise disjoint
    /// supports.
    pub fn validate(&self) -> Result<()> {
        let mut seen_labels = BTreeSet::new();
        let mut seen_outcomes = BTreeSet::new();
        for g in &self.groups {
            for m in &g.members {
                if !seen_labels.insert(m.as_str()) {
                    return Err(Error::InconsistentGroup { group: g.id });
                }
            }
            for o in &g.support {
                if !seen_outcomes.insert(o) {
                    return Err(Error::InconsistentGroup { group: g.id });
                }
            }
        }
        Ok(())
    }
}

struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            // keep the smaller index as root so components stay in input order
            let (lo, hi) = if rx < ry { (rx, ry) } else { (ry, rx) };
            self.parent[hi] = lo;
        }
    }
}

/// Partitions labeled input states into distinguishable groups after they
/// pass through `network`.
pub fn classify(
    states: &[(String, TwoPhotonState)],
    network: &NetworkSpec,
    model: DetectorModel,
    policy: Policy,
) -> Result<GroupTable> {
    let unitary = network.unitary();
    let supports = states
        .iter()
        .map(|(label, s)| {
            if s.space() != network.space {
                return Err(Error::ModeSpaceMismatch(format!(
                    "state {label} does not live on the {} mode space",
                    network.setup
                )));
            }
            Ok(outcome_distribution(&evolve(s, &unitary)?, model)?.support())
        })
        .collect::<Result<Vec<_>>>()?;

    let mut sets = DisjointSet::new(states.len());
    for i in 0..states.len() {
        for k in i + 1..states.len() {
            if !supports[i].is_disjoint(&supports[k]) {
                sets.union(i, k);
            }
        }
    }

    // components keyed by root, which is the smallest member index
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..states.len() {
        components.entry(sets.find(i)).or_default().push(i);
    }

    let quarantine = policy == Policy::LossConservative && model == DetectorModel::Threshold;
    let mut groups: Vec<Group> = Vec::new();
    let mut unusable: Option<usize> = None;
    for (root, members) in components {
        let support = &supports[root];
        if members.iter().any(|&i| &supports[i] != support) {
            return Err(Error::InconsistentGroup {
                group: groups.len() + 1,
            });
        }
        let labels: Vec<String> = members.iter().map(|&i| states[i].0.clone()).collect();
        if quarantine && support.iter().any(Outcome::is_single_click) {
            match unusable {
                Some(pos) => {
                    let g = &mut groups[pos];
                    g.members.extend(labels);
                    g.support.extend(support.iter().cloned());
                }
                None => {
                    unusable = Some(groups.len());
                    groups.push(Group {
                        id: 0,
                        members: labels,
                        support: support.clone(),
                        usable: false,
                    });
                }
            }
            continue;
        }
        groups.push(Group {
            id: 0,
            members: labels,
            support: support.clone(),
            usable: true,
        });
    }
    for (i, g) in groups.iter_mut().enumerate() {
        g.id = i + 1;
    }

    Ok(GroupTable {
        setup: network.setup,
        dim: network.space.dim(),
        model,
        policy,
        groups,
    })
}

/// `log₂` of the number of usable groups, in bits per encoded photon.
pub fn channel_capacity(table: &GroupTable) -> Result<f64> {
    match table.usable_count() {
        0 => Err(Error::EmptyTable),
        n => Ok((n as f64).log2()),
    }
}

/// The full labeled Bell basis prepared for `setup`: path-only states for
/// fig1, ancilla-augmented states for fig2.
pub fn bell_basis(setup: Setup, dim: usize) -> Result<Vec<(String, TwoPhotonState)>> {
    BellIndex::all(dim)
        .into_iter()
        .map(|idx| {
            let state = match setup {
                Setup::Fig1 => make_bell_state(dim, idx)?,
                Setup::Fig2 if dim == 4 => make_hyper_state(idx)?,
                Setup::Fig2 => return Err(Error::UnsupportedDimension(dim)),
            };
            Ok((idx.to_string(), state))
        })
        .collect()
}

/// Classifies the whole Bell basis for one setup.
pub fn classify_setup(
    setup: Setup,
    dim: usize,
    model: DetectorModel,
    policy: Policy,
) -> Result<GroupTable> {
    let network = NetworkSpec::for_setup(setup, dim)?;
    classify(&bell_basis(setup, dim)?, &network, model, policy)
}
