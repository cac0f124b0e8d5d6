//! Published application costs and the configurations that reproduce them.

use serde::{Deserialize, Serialize};

use crate::cost_model::{cost, ArchKind, DeepSpec, Mode, NetworkSpec, ShallowSpec};

use super::HarnessError;

const BUNDLED: &str = include_str!("../../data/use_cases.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EntryStatus {
    /// Configuration recovered by solving the closed forms against the published values.
    Derived,
    /// No configuration could be pinned down; targets are echoed only.
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum UseCaseSpec {
    Shallow {
        inputs: usize,
        outputs: usize,
        neurons: usize,
    },
    Deep {
        inputs: usize,
        neurons: Vec<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bottlenecks: Option<Vec<usize>>,
    },
}

impl UseCaseSpec {
    pub fn to_network_spec(&self, arch: ArchKind) -> Result<NetworkSpec, HarnessError> {
        Ok(match self {
            UseCaseSpec::Shallow {
                inputs,
                outputs,
                neurons,
            } => ShallowSpec::new(arch, *inputs, *outputs, *neurons)?.into(),
            UseCaseSpec::Deep {
                inputs,
                neurons,
                bottlenecks,
            } => {
                let spec = DeepSpec {
                    arch,
                    inputs: *inputs,
                    neurons: neurons.clone(),
                    bottlenecks: bottlenecks.clone(),
                };
                spec.validate()?;
                spec.into()
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UseCaseConfig {
    pub arch: ArchKind,
    pub status: EntryStatus,
    pub spec: Option<UseCaseSpec>,
    pub expected_training: u64,
    pub expected_inference: u64,
    /// How the configuration was solved for.
    pub derivation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Application {
    pub slug: String,
    pub name: String,
    pub entries: Vec<UseCaseConfig>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UseCaseTable {
    pub applications: Vec<Application>,
}

impl UseCaseTable {
    /// The table shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_json(BUNDLED).expect("bundled use-case table parses")
    }

    pub fn from_json(text: &str) -> Result<Self, HarnessError> {
        let table: Self =
            serde_json::from_str(text).map_err(|e| HarnessError::Table(e.to_string()))?;
        for app in &table.applications {
            for e in &app.entries {
                if e.status == EntryStatus::Derived && e.spec.is_none() {
                    return Err(HarnessError::Table(format!(
                        "{}/{}: derived entry without a spec",
                        app.slug, e.arch
                    )));
                }
            }
        }
        Ok(table)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("table serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CellStatus {
    Match,
    Mismatch,
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UseCaseCell {
    pub application: String,
    pub arch: ArchKind,
    pub mode: Mode,
    pub expected: u64,
    pub computed: Option<u64>,
    pub status: CellStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UseCaseReport {
    /// Application slugs and names in table order.
    pub applications: Vec<(String, String)>,
    pub cells: Vec<UseCaseCell>,
}

impl UseCaseReport {
    fn count(&self, status: CellStatus) -> usize {
        self.cells.iter().filter(|c| c.status == status).count()
    }

    pub fn matched(&self) -> usize {
        self.count(CellStatus::Match)
    }

    pub fn mismatched(&self) -> usize {
        self.count(CellStatus::Mismatch)
    }

    pub fn open(&self) -> usize {
        self.count(CellStatus::Open)
    }

    /// True when every derived cell reproduces its published value.
    pub fn passed(&self) -> bool {
        self.mismatched() == 0
    }

    pub fn cell(&self, application: &str, arch: ArchKind, mode: Mode) -> Option<&UseCaseCell> {
        self.cells
            .iter()
            .find(|c| c.application == application && c.arch == arch && c.mode == mode)
    }
}

/// Evaluates every derived configuration and compares it with its published
/// training and inference values. Open entries are listed without a check.
pub fn reproduce_use_cases(table: &UseCaseTable) -> Result<UseCaseReport, HarnessError> {
    let mut cells = Vec::new();
    for app in &table.applications {
        for e in &app.entries {
            let spec = match (&e.spec, e.status) {
                (Some(s), EntryStatus::Derived) => Some(s.to_network_spec(e.arch)?),
                _ => None,
            };
            for (mode, expected) in [
                (Mode::Training, e.expected_training),
                (Mode::Inference, e.expected_inference),
            ] {
                let computed = spec.as_ref().map(|s| cost(s, mode)).transpose()?;
                let status = match computed {
                    None => CellStatus::Open,
                    Some(c) if c == expected => CellStatus::Match,
                    Some(_) => CellStatus::Mismatch,
                };
                cells.push(UseCaseCell {
                    application: app.slug.clone(),
                    arch: e.arch,
                    mode,
                    expected,
                    computed,
                    status,
                });
            }
        }
    }
    let applications = table
        .applications
        .iter()
        .map(|a| (a.slug.clone(), a.name.clone()))
        .collect();
    Ok(UseCaseReport {
        applications,
        cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_table_reproduces() {
        let report = reproduce_use_cases(&UseCaseTable::bundled()).unwrap();
        assert_eq!(
            (report.matched(), report.open(), report.mismatched()),
            (46, 2, 0)
        );
        let c = report
            .cell("mimo", ArchKind::Cvfnn, Mode::Training)
            .unwrap();
        assert_eq!(c.computed, Some(583_968));
    }

    #[test]
    fn edited_value_mismatches() {
        let mut table = UseCaseTable::bundled();
        table.applications[0].entries[0].expected_training += 1;
        let report = reproduce_use_cases(&table).unwrap();
        assert_eq!(report.mismatched(), 1);
        assert!(!report.passed());
    }

    #[test]
    fn round_trips_and_rejects_unknown_keys() {
        let table = UseCaseTable::bundled();
        assert_eq!(UseCaseTable::from_json(&table.to_json()).unwrap(), table);
        assert!(UseCaseTable::from_json(r#"{"applications": [], "extra": 1}"#).is_err());
    }
}
