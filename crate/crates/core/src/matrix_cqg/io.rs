//! User-supplied representation files.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CqgError, MatrixRep, RepCatalog};
use crate::fusion::FiniteGroup;
use crate::linalg::JsonMatrix;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepFileEntry {
    pub label: String,
    pub dim: usize,
    /// One matrix per group element, in Cayley-table order.
    pub matrices: Vec<JsonMatrix>,
}

/// `{"cayley": n×n table, "irreps": [{"label", "dim", "matrices"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepFile {
    #[serde(default)]
    pub name: Option<String>,
    pub cayley: Vec<Vec<usize>>,
    pub irreps: Vec<RepFileEntry>,
}

impl RepFile {
    pub fn into_catalog(self, fallback_name: &str) -> Result<RepCatalog, CqgError> {
        let name = self.name.unwrap_or_else(|| fallback_name.to_string());
        let group = FiniteGroup::from_cayley(name.clone(), self.cayley)?;
        let irreps = self
            .irreps
            .into_iter()
            .map(|e| {
                let matrices = e
                    .matrices
                    .iter()
                    .enumerate()
                    .map(|(g, m)| {
                        m.to_matrix().ok_or_else(|| CqgError::Shape {
                            label: e.label.clone(),
                            elem: g.to_string(),
                            dim: e.dim,
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(MatrixRep::new(e.label, e.dim, matrices))
            })
            .collect::<Result<Vec<_>, CqgError>>()?;
        RepCatalog::new(name, group, irreps)
    }

    pub fn from_catalog(catalog: &RepCatalog) -> Self {
        RepFile {
            name: Some(catalog.name().to_string()),
            cayley: catalog.group().table().to_vec(),
            irreps: catalog
                .irreps()
                .iter()
                .map(|r| RepFileEntry {
                    label: r.label.clone(),
                    dim: r.dim,
                    matrices: r.matrices.iter().map(JsonMatrix::from_matrix).collect(),
                })
                .collect(),
        }
    }
}

/// Parses and validates a representation file.
pub fn parse_rep_file(name: &str, text: &str) -> Result<RepCatalog, CqgError> {
    let file: RepFile = serde_json::from_str(text).map_err(|e| CqgError::Parse(e.to_string()))?;
    file.into_catalog(name)
}

pub fn load_rep_file(path: impl AsRef<Path>) -> Result<RepCatalog, CqgError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "group".into());
    parse_rep_file(&name, &text)
}
