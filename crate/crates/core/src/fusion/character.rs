//! Representation rings of finite groups from character tables.

use serde::{Deserialize, Serialize};

use super::{FusionError, TableRing};
use crate::linalg::{c, C64};

const ORTHOGONALITY_TOL: f64 = 1e-9;
const INTEGRALITY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClassInfo {
    pub size: usize,
}

/// Character table of a finite group. Class `0` must be the identity class.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharacterTable {
    pub classes: Vec<ClassInfo>,
    /// `chars[u][k]` is `χ_u` on class `k`, as `[re, im]`.
    pub chars: Vec<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl CharacterTable {
    pub fn new(class_sizes: &[usize], chars: &[Vec<C64>], labels: Option<Vec<String>>) -> Self {
        CharacterTable {
            classes: class_sizes.iter().map(|&size| ClassInfo { size }).collect(),
            chars: chars
                .iter()
                .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
                .collect(),
            labels,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, FusionError> {
        serde_json::from_str(text).map_err(|e| FusionError::Parse(e.to_string()))
    }

    pub fn order(&self) -> usize {
        self.classes.iter().map(|c| c.size).sum()
    }

    fn value(&self, u: usize, k: usize) -> C64 {
        let [re, im] = self.chars[u][k];
        c(re, im)
    }

    fn labels(&self) -> Vec<String> {
        self.labels
            .clone()
            .unwrap_or_else(|| (0..self.chars.len()).map(|i| format!("chi{i}")).collect())
    }

    /// `(1/|G|) Σ_k |C_k| f(k)`.
    fn average(&self, f: impl Fn(usize) -> C64) -> C64 {
        let total: C64 = (0..self.classes.len())
            .map(|k| f(k) * self.classes[k].size as f64)
            .sum();
        total / self.order() as f64
    }

    /// `⟨χ_u χ_v, χ_w⟩`.
    pub fn tensor_multiplicity(&self, u: usize, v: usize, w: usize) -> C64 {
        self.average(|k| self.value(u, k) * self.value(v, k) * self.value(w, k).conj())
    }
}

fn round_to_count(z: C64, what: impl Fn() -> String) -> Result<u32, FusionError> {
    let r = z.re.round();
    if (z.re - r).abs() > INTEGRALITY_TOL || z.im.abs() > INTEGRALITY_TOL || r < 0.0 {
        return Err(FusionError::CharacterTable(format!(
            "{} = {:.3e}{:+.3e}i is not a non-negative integer",
            what(),
            z.re,
            z.im
        )));
    }
    Ok(r as u32)
}

/// Builds the representation ring: `dim(u) = χ_u(e)`, `N^w_{u,v} = ⟨χ_u χ_v, χ_w⟩`,
/// conjugation via complex conjugate characters.
pub fn rep_ring_from_character_table(
    name: impl Into<String>,
    table: &CharacterTable,
) -> Result<TableRing, FusionError> {
    let n = table.chars.len();
    let kc = table.classes.len();
    if n == 0 || n != kc {
        return Err(FusionError::CharacterTable(format!(
            "{n} characters for {kc} classes; a complete table is square"
        )));
    }
    if table.chars.iter().any(|row| row.len() != kc) {
        return Err(FusionError::CharacterTable("ragged character rows".into()));
    }
    if table.classes[0].size != 1 {
        return Err(FusionError::CharacterTable("class 0 must be the identity class".into()));
    }
    let labels = table.labels();
    if labels.len() != n {
        return Err(FusionError::CharacterTable("label count differs from character count".into()));
    }

    for u in 0..n {
        for v in 0..n {
            let ip = table.average(|k| table.value(u, k) * table.value(v, k).conj());
            let expected = if u == v { 1.0 } else { 0.0 };
            if (ip - c(expected, 0.0)).norm() > ORTHOGONALITY_TOL {
                return Err(FusionError::CharacterTable(format!(
                    "orthogonality fails for ({}, {}): <chi, chi'> = {:.3e}{:+.3e}i",
                    labels[u], labels[v], ip.re, ip.im
                )));
            }
        }
    }

    let dims = (0..n)
        .map(|u| round_to_count(table.value(u, 0), || format!("chi_{}(e)", labels[u])).map(|d| d as usize))
        .collect::<Result<Vec<_>, _>>()?;

    let trivial = (0..n)
        .find(|&u| (0..kc).all(|k| (table.value(u, k) - c(1.0, 0.0)).norm() <= ORTHOGONALITY_TOL))
        .ok_or_else(|| FusionError::CharacterTable("no trivial character".into()))?;

    let conj = (0..n)
        .map(|u| {
            (0..n)
                .find(|&v| (0..kc).all(|k| (table.value(v, k) - table.value(u, k).conj()).norm() <= ORTHOGONALITY_TOL))
                .ok_or_else(|| FusionError::CharacterTable(format!("no conjugate for {}", labels[u])))
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut entries = Vec::new();
    for u in 0..n {
        for v in 0..n {
            for w in 0..n {
                let m = round_to_count(table.tensor_multiplicity(u, v, w), || {
                    format!("N^{}_({},{})", labels[w], labels[u], labels[v])
                })?;
                if m > 0 {
                    entries.push((u, v, w, m));
                }
            }
        }
    }
    TableRing::new(name, labels, dims, conj, trivial, entries)?.validated()
}
