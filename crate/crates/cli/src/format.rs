//! Framework files and degree CSVs.
//!
//! A framework file is a JSON object:
//!
//! ```json
//! {
//!   "arguments": ["a0", "a1"],
//!   "attacks": [["a0", "a1"]],
//!   "weights": {"a0": 0.5, "a1": 1.0}
//! }
//! ```
//!
//! `weights` is optional; without it the file describes an unweighted graph.
//! When present it must give exactly one weight per argument. Unknown
//! top-level fields are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use gradual_core::{DegreeVector, Topology, WeightedFramework};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrameworkFile {
    pub arguments: Vec<String>,
    pub attacks: Vec<[String; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, f64>>,
}

/// A parsed framework file: always a topology, weights when the file has them.
#[derive(Debug, Clone)]
pub struct LoadedFramework {
    pub topology: Topology,
    pub weights: Option<Vec<f64>>,
}

impl LoadedFramework {
    pub fn weighted(&self) -> Result<WeightedFramework, CliError> {
        let weights = self
            .weights
            .clone()
            .ok_or_else(|| CliError::Input("framework file has no `weights`".into()))?;
        Ok(WeightedFramework::new(self.topology.clone(), weights)?)
    }
}

impl FrameworkFile {
    pub fn parse(text: &str) -> Result<LoadedFramework, CliError> {
        let file: FrameworkFile =
            serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed framework file: {e}")))?;
        file.into_loaded()
    }

    pub fn read(path: &Path) -> Result<LoadedFramework, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn into_loaded(self) -> Result<LoadedFramework, CliError> {
        let attacks: Vec<(&str, &str)> = self.attacks.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let topology = Topology::new(&self.arguments, &attacks)?;
        let weights = match self.weights {
            None => None,
            Some(map) => {
                for id in map.keys() {
                    topology.index_of(id)?;
                }
                let mut w = Vec::with_capacity(topology.len());
                for id in topology.ids() {
                    let value = map
                        .get(id)
                        .ok_or_else(|| CliError::Input(format!("no weight for argument `{id}`")))?;
                    w.push(*value);
                }
                WeightedFramework::new(topology.clone(), w.clone())?;
                Some(w)
            }
        };
        Ok(LoadedFramework { topology, weights })
    }

    pub fn from_topology(topology: &Topology, weights: Option<&[f64]>) -> Self {
        Self {
            arguments: topology.ids().to_vec(),
            attacks: topology
                .edges()
                .map(|(a, b)| [topology.id(a).to_string(), topology.id(b).to_string()])
                .collect(),
            weights: weights.map(|w| topology.ids().iter().cloned().zip(w.iter().copied()).collect()),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("framework files serialize");
        s.push('\n');
        s
    }
}

/// One row per degree vector. A first line that is not numeric is taken as
/// a header and skipped.
pub fn parse_degree_csv(text: &str, n: usize) -> Result<Vec<DegreeVector>, CliError> {
    let mut rows = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let values = match parsed {
            Ok(v) => v,
            Err(_) if line_no == 0 => continue,
            Err(e) => {
                return Err(CliError::Input(format!("line {}: {e}", line_no + 1)));
            }
        };
        if values.len() != n {
            return Err(CliError::Input(format!(
                "line {}: expected {n} values, found {}",
                line_no + 1,
                values.len()
            )));
        }
        rows.push(DegreeVector::new(values).map_err(|e| CliError::Input(format!("line {}: {e}", line_no + 1)))?);
    }
    Ok(rows)
}

/// Header of argument ids followed by one row per vector, full precision.
pub fn write_degree_csv(topology: &Topology, rows: &[DegreeVector]) -> String {
    let mut out = topology.ids().join(",");
    out.push('\n');
    for row in rows {
        let fields: Vec<String> = row.as_slice().iter().map(|v| format!("{v:?}")).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    out
}
