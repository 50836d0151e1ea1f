// Copyright 2026 The hdbsm Authors
// SPDX-License-Identifier: Apache-2.0

//! Embedded transcriptions of the two detection-result tables and the diff
//! used by `hdbsm verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use hdbsm::{BellIndex, GroupTable, Outcome, Setup};
use serde::{Deserialize, Serialize};

const TABLE1: &str = include_str!("../references/table1.json");
const TABLE2: &str = include_str!("../references/table2.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceGroup {
    pub group: usize,
    pub members: Vec<String>,
    pub outcomes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceTable {
    pub table: usize,
    pub setup: Setup,
    pub detector: String,
    pub groups: Vec<ReferenceGroup>,
}

impl ReferenceTable {
    fn expected_rows(&self) -> usize {
        match self.setup {
            Setup::Fig1 => 7,
            Setup::Fig2 => 12,
        }
    }

    /// Row count and label syntax.
    pub fn validate(&self) -> anyhow::Result<()> {
        if self.groups.len() != self.expected_rows() {
            bail!(
                "table {} has {} rows, expected {}",
                self.table,
                self.groups.len(),
                self.expected_rows()
            );
        }
        for g in &self.groups {
            for m in &g.members {
                m.parse::<BellIndex>()
                    .with_context(|| format!("table {} row {}", self.table, g.group))?;
            }
            for o in &g.outcomes {
                let parsed: Outcome = o
                    .parse()
                    .with_context(|| format!("table {} row {}", self.table, g.group))?;
                if parsed.clicks().len() != 2 {
                    bail!(
                        "table {} row {}: {o:?} is not a detector pair",
                        self.table,
                        g.group
                    );
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceTables {
    pub table1: ReferenceTable,
    pub table2: ReferenceTable,
}

impl ReferenceTables {
    pub fn embedded() -> Self {
        Self::parse(TABLE1, TABLE2).expect("embedded reference tables are valid")
    }

    /// Loads `table1.json` and `table2.json` from `dir`.
    pub fn from_dir(dir: &Path) -> anyhow::Result<Self> {
        let read = |name: &str| {
            let path = dir.join(name);
            std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
        };
        Self::parse(&read("table1.json")?, &read("table2.json")?)
    }

    fn parse(t1: &str, t2: &str) -> anyhow::Result<Self> {
        let table1: ReferenceTable = serde_json::from_str(t1).context("parsing table 1")?;
        let table2: ReferenceTable = serde_json::from_str(t2).context("parsing table 2")?;
        table1.validate()?;
        table2.validate()?;
        Ok(ReferenceTables { table1, table2 })
    }

    pub fn iter(&self) -> impl Iterator<Item = &ReferenceTable> {
        [&self.table1, &self.table2].into_iter()
    }
}

/// One disagreement between a reference row and the computed table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RowDiff {
    /// Reference row number, if the problem is tied to one.
    pub row: Option<usize>,
    pub problem: String,
    pub missing: Vec<String>,
    pub unexpected: Vec<String>,
}

impl fmt::Display for RowDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.row {
            Some(r) => write!(f, "row {r}: {}", self.problem)?,
            None => write!(f, "{}", self.problem)?,
        }
        if !self.missing.is_empty() {
            write!(f, "; missing [{}]", self.missing.join(", "))?;
        }
        if !self.unexpected.is_empty() {
            write!(f, "; unexpected [{}]", self.unexpected.join(", "))?;
        }
        Ok(())
    }
}

fn sorted_strings<I: IntoIterator<Item = String>>(it: I) -> BTreeSet<String> {
    it.into_iter().collect()
}

/// Compares memberships and outcome supports as sets; group numbering is
/// ignored.
pub fn diff(reference: &ReferenceTable, computed: &GroupTable) -> Vec<RowDiff> {
    let mut diffs = Vec::new();
    let mut matched = BTreeSet::new();
    for row in &reference.groups {
        let members = sorted_strings(row.members.iter().cloned());
        let found = computed
            .groups
            .iter()
            .find(|g| sorted_strings(g.members.iter().cloned()) == members);
        let Some(group) = found else {
            diffs.push(RowDiff {
                row: Some(row.group),
                problem: format!(
                    "no computed group with members {{{}}}",
                    members.into_iter().collect::<Vec<_>>().join(", ")
                ),
                missing: Vec::new(),
                unexpected: Vec::new(),
            });
            continue;
        };
        matched.insert(group.id);
        // normalize through the parser so label spelling does not matter
        let expected: BTreeSet<String> = row
            .outcomes
            .iter()
            .map(|o| {
                o.parse::<Outcome>()
                    .map(|x| x.to_string())
                    .unwrap_or_else(|_| o.clone())
            })
            .collect();
        let got = sorted_strings(group.support.iter().map(ToString::to_string));
        if expected != got {
            diffs.push(RowDiff {
                row: Some(row.group),
                problem: format!("detection results differ from computed group {}", group.id),
                missing: expected.difference(&got).cloned().collect(),
                unexpected: got.difference(&expected).cloned().collect(),
            });
        }
    }
    for g in &computed.groups {
        if !matched.contains(&g.id) {
            diffs.push(RowDiff {
                row: None,
                problem: format!(
                    "computed group {} {{{}}} has no reference row",
                    g.id,
                    g.members.join(", ")
                ),
                missing: Vec::new(),
                unexpected: Vec::new(),
            });
        }
    }
    diffs
}
