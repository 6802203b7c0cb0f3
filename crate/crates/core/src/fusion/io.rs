//! JSON fusion-ring and Cayley-table files.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FusionError, TableRing};

/// Label ids may be written as strings or integers.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq, Hash)]
#[serde(untagged)]
pub enum LabelId {
    Int(i64),
    Str(String),
}

impl LabelId {
    fn text(&self) -> String {
        match self {
            LabelId::Int(i) => i.to_string(),
            LabelId::Str(s) => s.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LabelEntry {
    pub id: LabelId,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FusionEntry {
    pub u: LabelId,
    pub v: LabelId,
    pub w: LabelId,
    pub mult: u32,
}

/// On-disk fusion ring. Omitted fusion entries mean multiplicity 0; a conj
/// pair `[a, b]` also implies `[b, a]`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FusionRingFile {
    pub labels: Vec<LabelEntry>,
    pub trivial: LabelId,
    pub conj: Vec<[LabelId; 2]>,
    pub fusion: Vec<FusionEntry>,
}

impl FusionRingFile {
    pub fn into_ring(self, name: impl Into<String>) -> Result<TableRing, FusionError> {
        let names: Vec<String> = self.labels.iter().map(|l| l.id.text()).collect();
        let index: HashMap<String, usize> = names.iter().cloned().enumerate().map(|(i, n)| (n, i)).collect();
        let lookup = |id: &LabelId| {
            index
                .get(&id.text())
                .copied()
                .ok_or_else(|| FusionError::UnknownLabel(id.text()))
        };
        let n = names.len();
        let mut conj: Vec<Option<usize>> = vec![None; n];
        for [a, b] in &self.conj {
            let (a, b) = (lookup(a)?, lookup(b)?);
            for (x, y) in [(a, b), (b, a)] {
                match conj[x] {
                    Some(prev) if prev != y => {
                        return Err(FusionError::Axiom {
                            law: "conjugation".into(),
                            witness: format!("conj({}) given as both {} and {}", names[x], names[prev], names[y]),
                        })
                    }
                    _ => conj[x] = Some(y),
                }
            }
        }
        let conj = conj
            .into_iter()
            .enumerate()
            .map(|(i, c)| {
                c.ok_or_else(|| FusionError::Parse(format!("conjugate of `{}` not given", names[i])))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let trivial = lookup(&self.trivial)?;
        let dims = self.labels.iter().map(|l| l.dim).collect();
        let entries = self
            .fusion
            .iter()
            .map(|e| Ok((lookup(&e.u)?, lookup(&e.v)?, lookup(&e.w)?, e.mult)))
            .collect::<Result<Vec<_>, FusionError>>()?;
        TableRing::new(name, names, dims, conj, trivial, entries)
    }
}

/// Parses and fully validates a fusion ring.
pub fn parse_fusion_ring(name: &str, text: &str) -> Result<TableRing, FusionError> {
    let file: FusionRingFile = serde_json::from_str(text).map_err(|e| FusionError::Parse(e.to_string()))?;
    file.into_ring(name)?.validated()
}

pub fn load_fusion_ring(path: impl AsRef<Path>) -> Result<TableRing, FusionError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "ring".into());
    parse_fusion_ring(&name, &text)
}

/// A Cayley table file: an `n × n` JSON integer matrix, identity `0`.
pub fn parse_cayley_table(text: &str) -> Result<Vec<Vec<usize>>, FusionError> {
    serde_json::from_str(text).map_err(|e| FusionError::Parse(e.to_string()))
}

pub fn read_cayley_table(path: impl AsRef<Path>) -> Result<Vec<Vec<usize>>, FusionError> {
    parse_cayley_table(&std::fs::read_to_string(path)?)
}
