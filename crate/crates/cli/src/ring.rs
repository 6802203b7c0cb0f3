//! Resolution of `--ring` and `--group` arguments.

use std::path::Path;

use qfree_core::fusion::{
    load_fusion_ring, parse_cayley_table, parse_fusion_ring, rep_ring_from_character_table, CharacterTable,
    FiniteGroup, FreeAbelian, FreeGroup, GroupFusionRing, TableRing,
};
use qfree_core::matrix_cqg::{builtin_catalog, parse_rep_file, FiniteDualModel};
use serde_json::Value;

use crate::CliError;

pub enum Ring {
    Table(TableRing),
    Dual(FiniteDualModel),
    Finite(GroupFusionRing<FiniteGroup>),
    Abelian(GroupFusionRing<FreeAbelian>),
    Free(GroupFusionRing<FreeGroup>),
}

pub enum Group {
    Finite(FiniteGroup),
    Abelian(FreeAbelian),
    Free(FreeGroup),
}

/// Runs `$body` with `$r` bound to the concrete ring.
macro_rules! with_ring {
    ($ring:expr, $r:ident => $body:expr) => {
        match $ring {
            $crate::ring::Ring::Table($r) => $body,
            $crate::ring::Ring::Dual($r) => $body,
            $crate::ring::Ring::Finite($r) => $body,
            $crate::ring::Ring::Abelian($r) => $body,
            $crate::ring::Ring::Free($r) => $body,
        }
    };
}
pub(crate) use with_ring;

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

/// `Z`, `Z^d`, `Zd`, `F<r>` or a catalog group name.
fn builtin_group(name: &str) -> Result<Group, CliError> {
    let key = name.trim();
    let upper = key.to_ascii_uppercase();
    if upper == "Z" {
        return Ok(Group::Abelian(FreeAbelian::new(1)));
    }
    if let Some(d) = upper.strip_prefix("Z^").and_then(|s| s.parse::<usize>().ok()) {
        if d >= 1 {
            return Ok(Group::Abelian(FreeAbelian::new(d)));
        }
    }
    if let Some(r) = upper.strip_prefix('F').and_then(|s| s.parse::<usize>().ok()) {
        if (1..=26).contains(&r) {
            return Ok(Group::Free(FreeGroup::new(r)));
        }
    }
    // `Z2` means Z², not Z/2
    if let Some(d) = upper.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()) {
        if d >= 1 && !upper.contains('/') {
            return Ok(Group::Abelian(FreeAbelian::new(d)));
        }
    }
    let cat = builtin_catalog(key).map_err(|_| CliError::Input(format!("unknown builtin group `{key}`")))?;
    Ok(Group::Finite(cat.group().clone()))
}

fn read(path: &str) -> Result<(String, String), CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
    let name = Path::new(path)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.to_string());
    Ok((name, text))
}

/// `builtin:<name>` or a path to a Cayley-table file.
pub fn resolve_group(spec: &str) -> Result<Group, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_group(name);
    }
    if Path::new(spec).exists() {
        let (name, text) = read(spec)?;
        let table = parse_cayley_table(&text).map_err(input)?;
        return Ok(Group::Finite(FiniteGroup::from_cayley(name, table).map_err(input)?));
    }
    builtin_group(spec)
}

fn builtin_ring(name: &str, seed: u64) -> Result<Ring, CliError> {
    let lower = name.trim().to_ascii_lowercase();
    if let Some(group) = lower.strip_suffix("dual") {
        let cat = builtin_catalog(group).map_err(input)?;
        return Ok(Ring::Dual(FiniteDualModel::new(cat, seed).map_err(input)?));
    }
    Ok(match builtin_group(name)? {
        Group::Finite(g) => Ring::Finite(GroupFusionRing::new(g)),
        Group::Abelian(g) => Ring::Abelian(GroupFusionRing::new(g)),
        Group::Free(g) => Ring::Free(GroupFusionRing::new(g)),
    })
}

/// `builtin:<name>` or a JSON file, recognized by its keys: `irreps`
/// (representation matrices), `chars` (character table), `fusion` (fusion
/// tables) or a bare array (Cayley table).
pub fn resolve_ring(spec: &str, seed: u64) -> Result<Ring, CliError> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        return builtin_ring(name, seed);
    }
    if !Path::new(spec).exists() {
        return builtin_ring(spec, seed);
    }
    let (name, text) = read(spec)?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{spec}: {e}")))?;
    if value.is_array() {
        let table = parse_cayley_table(&text).map_err(input)?;
        return Ok(Ring::Finite(GroupFusionRing::new(
            FiniteGroup::from_cayley(name, table).map_err(input)?,
        )));
    }
    if value.get("irreps").is_some() {
        let cat = parse_rep_file(&name, &text).map_err(input)?;
        return Ok(Ring::Dual(FiniteDualModel::new(cat, seed).map_err(input)?));
    }
    if value.get("chars").is_some() {
        let table = CharacterTable::from_json(&text).map_err(input)?;
        return Ok(Ring::Table(rep_ring_from_character_table(name, &table).map_err(input)?));
    }
    if value.get("fusion").is_some() {
        return Ok(Ring::Table(parse_fusion_ring(&name, &text).map_err(input)?));
    }
    // fall back to the fusion-ring loader for its error message
    Ok(Ring::Table(load_fusion_ring(spec).map_err(input)?))
}
