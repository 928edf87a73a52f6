//! JSON file formats for tabular sources and PIN graphs.
//!
//! Sources look like
//! `{"m": 3, "alphabet_sizes": [2, 2, 2], "atoms": [{"x": [0, 0, 0], "p": 0.25}, ...]}`
//! with 0-indexed symbol positions, and graphs like
//! `{"m": 4, "edges": [{"u": 1, "v": 2, "mult": 1}, ...]}` with 1-indexed vertices.

use std::collections::HashMap;
use std::path::Path;

use omnivocal_core::{Edge, JointSource, Normalization, PinGraph};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceFile {
    pub m: usize,
    pub alphabet_sizes: Vec<u32>,
    pub atoms: Vec<AtomFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomFile {
    pub x: Vec<u32>,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub m: usize,
    pub edges: Vec<EdgeFile>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeFile {
    pub u: usize,
    pub v: usize,
    #[serde(default = "unit_multiplicity")]
    pub mult: u64,
}

fn unit_multiplicity() -> u64 {
    1
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Deserializes with the failing field path and line/column in the message.
fn from_json<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value: T = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let at = format!("line {}, column {}", inner.line(), inner.column());
        if path == "." {
            CliError::Input(format!("{at}: {inner}"))
        } else {
            CliError::Input(format!("{at}, field `{path}`: {inner}"))
        }
    })?;
    de.end().map_err(|e| CliError::Input(format!("line {}, column {}: {e}", e.line(), e.column())))?;
    Ok(value)
}

impl SourceFile {
    pub fn from_source(source: &JointSource) -> Self {
        SourceFile {
            m: source.terminals(),
            alphabet_sizes: source.alphabet_sizes().to_vec(),
            atoms: source.atoms().iter().map(|(x, p)| AtomFile { x: x.clone(), p: *p }).collect(),
        }
    }

    /// Field-level validation first, then the model's own checks (normalization).
    pub fn into_source(self, normalization: Normalization) -> Result<JointSource, CliError> {
        let field = |name: String, msg: String| CliError::Input(format!("field `{name}`: {msg}"));
        if self.alphabet_sizes.len() != self.m {
            return Err(field(
                "alphabet_sizes".into(),
                format!("has {} entries but m = {}", self.alphabet_sizes.len(), self.m),
            ));
        }
        let mut seen: HashMap<&[u32], usize> = HashMap::new();
        for (k, atom) in self.atoms.iter().enumerate() {
            if atom.x.len() != self.m {
                return Err(field(format!("atoms[{k}].x"), format!("has {} entries but m = {}", atom.x.len(), self.m)));
            }
            if let Some(i) = (0..self.m).find(|&i| atom.x[i] >= self.alphabet_sizes[i]) {
                return Err(field(
                    format!("atoms[{k}].x[{i}]"),
                    format!("symbol {} is outside [0, {})", atom.x[i], self.alphabet_sizes[i]),
                ));
            }
            if !atom.p.is_finite() || atom.p < 0.0 {
                return Err(field(format!("atoms[{k}].p"), format!("{} is not a probability", atom.p)));
            }
            if let Some(j) = seen.insert(&atom.x, k) {
                return Err(field(format!("atoms[{k}].x"), format!("duplicates atoms[{j}].x")));
            }
        }
        let atoms = self.atoms.into_iter().map(|a| (a.x, a.p)).collect();
        Ok(JointSource::with_normalization(self.alphabet_sizes, atoms, normalization)?)
    }
}

pub fn parse_source(text: &str, normalization: Normalization) -> Result<JointSource, CliError> {
    from_json::<SourceFile>(text)?.into_source(normalization)
}

pub fn load_source(path: &Path, normalization: Normalization) -> Result<JointSource, CliError> {
    parse_source(&read(path)?, normalization).map_err(|e| prefix(path, e))
}

impl GraphFile {
    pub fn from_graph(graph: &PinGraph) -> Self {
        GraphFile {
            m: graph.terminals(),
            edges: graph.edges().iter().map(|e| EdgeFile { u: e.u, v: e.v, mult: e.mult }).collect(),
        }
    }

    pub fn into_graph(self) -> Result<PinGraph, CliError> {
        let edges = self.edges.into_iter().map(|e| Edge { u: e.u, v: e.v, mult: e.mult }).collect();
        Ok(PinGraph::new(self.m, edges)?)
    }
}

pub fn parse_graph(text: &str) -> Result<PinGraph, CliError> {
    from_json::<GraphFile>(text)?.into_graph()
}

pub fn load_graph(path: &Path) -> Result<PinGraph, CliError> {
    parse_graph(&read(path)?).map_err(|e| prefix(path, e))
}

fn prefix(path: &Path, e: CliError) -> CliError {
    match e {
        CliError::Input(s) => CliError::Input(format!("{}: {s}", path.display())),
        CliError::Domain(s) => CliError::Domain(format!("{}: {s}", path.display())),
        other => other,
    }
}
