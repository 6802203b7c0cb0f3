//! Fusion rings of compact quantum groups.
//!
//! A fusion ring is the combinatorial skeleton of `Irr(G)`: labels of
//! irreducible representations, their dimensions, conjugation and the
//! multiplicities `N^w_{u,v}` of `w` inside `u ⊗ v`.  Finite rings are stored
//! as tables; group rings of infinite discrete groups are enumerated lazily.

mod axioms;
mod character;
mod group;
mod io;

pub use axioms::check_axioms;
pub use character::{rep_ring_from_character_table, CharacterTable};
pub use group::{
    group_fusion_ring, AnyGroupRing, DiscreteGroup, FiniteGroup, FreeAbelian, FreeGroup,
    GroupFusionRing, GroupSpec,
};
pub use io::{load_fusion_ring, parse_cayley_table, parse_fusion_ring, read_cayley_table, FusionRingFile};

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::hash::Hash;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FusionError {
    #[error("fusion_core: unknown label `{0}`")]
    UnknownLabel(String),
    #[error("fusion_core: parse error: {0}")]
    Parse(String),
    #[error("fusion_core: {law} law violated at {witness}")]
    Axiom { law: String, witness: String },
    #[error("fusion_core: Cayley table is not a group: {0}")]
    NotAGroup(String),
    #[error("fusion_core: character table rejected: {0}")]
    CharacterTable(String),
    #[error("fusion_core: {0}")]
    Io(#[from] std::io::Error),
}

/// Multiset of labels with positive multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Multiset<L: Ord> {
    entries: BTreeMap<L, u32>,
}

impl<L: Ord> Default for Multiset<L> {
    fn default() -> Self {
        Multiset { entries: BTreeMap::new() }
    }
}

impl<L: Ord + Clone> Multiset<L> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn singleton(l: L) -> Self {
        let mut m = Self::new();
        m.add(l, 1);
        m
    }

    pub fn add(&mut self, l: L, mult: u32) {
        if mult > 0 {
            *self.entries.entry(l).or_insert(0) += mult;
        }
    }

    pub fn mult(&self, l: &L) -> u32 {
        self.entries.get(l).copied().unwrap_or(0)
    }

    pub fn contains(&self, l: &L) -> bool {
        self.entries.contains_key(l)
    }

    pub fn support(&self) -> impl Iterator<Item = &L> {
        self.entries.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&L, u32)> {
        self.entries.iter().map(|(l, &m)| (l, m))
    }

    /// Number of distinct elements.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.entries.values().map(|&m| m as u64).sum()
    }

    /// Multiset sum.
    pub fn extend_from(&mut self, other: &Multiset<L>) {
        for (l, m) in other.iter() {
            self.add(l.clone(), m);
        }
    }

    pub fn scaled(&self, k: u32) -> Multiset<L> {
        let mut out = Multiset::new();
        for (l, m) in self.iter() {
            out.add(l.clone(), m * k);
        }
        out
    }
}

impl<L: Ord + Clone> FromIterator<(L, u32)> for Multiset<L> {
    fn from_iter<I: IntoIterator<Item = (L, u32)>>(iter: I) -> Self {
        let mut m = Multiset::new();
        for (l, k) in iter {
            m.add(l, k);
        }
        m
    }
}

/// Read access to the fusion rules of `Irr(G)`.
///
/// Labels of lazily enumerated rings come in a fixed total order; `window(n)`
/// returns the first `n` of them.
pub trait FusionRules: Send + Sync {
    type Label: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn ring_name(&self) -> String;
    fn trivial(&self) -> Self::Label;
    fn contains(&self, u: &Self::Label) -> bool;
    fn dim(&self, u: &Self::Label) -> Result<usize, FusionError>;
    fn conj(&self, u: &Self::Label) -> Result<Self::Label, FusionError>;
    /// The multiset `I_{u⊗v}`.
    fn fuse(&self, u: &Self::Label, v: &Self::Label) -> Result<Multiset<Self::Label>, FusionError>;
    /// Low-dual bound, if known.
    fn dim_bound(&self) -> Option<usize>;
    /// `None` for infinite rings.
    fn label_count(&self) -> Option<usize>;
    fn window(&self, n: usize) -> Vec<Self::Label>;
    fn label_name(&self, u: &Self::Label) -> String;
    fn parse_label(&self, s: &str) -> Result<Self::Label, FusionError>;

    /// The multiset `I_{F⊗v}`, a multiset union over `u ∈ F`.
    fn fuse_set(&self, f: &[Self::Label], v: &Self::Label) -> Result<Multiset<Self::Label>, FusionError> {
        let mut out = Multiset::new();
        for u in f {
            out.extend_from(&self.fuse(u, v)?);
        }
        Ok(out)
    }

    /// `N^w_{u,v}`.
    fn multiplicity(&self, w: &Self::Label, u: &Self::Label, v: &Self::Label) -> Result<u32, FusionError> {
        Ok(self.fuse(u, v)?.mult(w))
    }

    fn all_labels(&self) -> Option<Vec<Self::Label>> {
        self.label_count().map(|n| self.window(n))
    }

    /// Parses a comma-separated label list; `all` means every label of a finite ring.
    fn parse_label_list(&self, s: &str) -> Result<Vec<Self::Label>, FusionError> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("all") {
            return self
                .all_labels()
                .ok_or_else(|| FusionError::Parse("`all` needs a finite ring".into()));
        }
        let mut out: Vec<Self::Label> = Vec::new();
        for part in split_list(s) {
            let l = self.parse_label(&part)?;
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Ok(out)
    }

    fn check_label(&self, u: &Self::Label) -> Result<(), FusionError> {
        if self.contains(u) {
            Ok(())
        } else {
            Err(FusionError::UnknownLabel(format!("{u:?}")))
        }
    }
}

/// Splits on commas that are not inside parentheses, so `(1,2),(0,-1)` works.
pub(crate) fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '(' | '[' => {
                depth += 1;
                cur.push(ch);
            }
            ')' | ']' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' | ';' if depth == 0 => {
                if !cur.trim().is_empty() {
                    out.push(cur.trim().to_string());
                }
                cur.clear();
            }
            _ => cur.push(ch),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// A finite fusion ring given by explicit tables. Labels are indices.
#[derive(Debug, Clone)]
pub struct TableRing {
    name: String,
    names: Vec<String>,
    dims: Vec<usize>,
    conj: Vec<usize>,
    trivial: usize,
    /// `fusion[u * n + v]`, only nonzero multiplicities stored.
    fusion: Vec<Multiset<usize>>,
    dim_bound: usize,
}

impl TableRing {
    /// Builds the tables without checking the fusion axioms; see [`TableRing::validated`].
    pub fn new(
        name: impl Into<String>,
        names: Vec<String>,
        dims: Vec<usize>,
        conj: Vec<usize>,
        trivial: usize,
        entries: impl IntoIterator<Item = (usize, usize, usize, u32)>,
    ) -> Result<Self, FusionError> {
        let n = names.len();
        if n == 0 {
            return Err(FusionError::Parse("a fusion ring needs at least one label".into()));
        }
        if dims.len() != n || conj.len() != n {
            return Err(FusionError::Parse("label, dimension and conjugation tables differ in length".into()));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(FusionError::Parse(format!("duplicate label id `{name}`")));
            }
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(FusionError::Parse(format!("label `{}` has dimension 0", names[i])));
        }
        if trivial >= n || conj.iter().any(|&c| c >= n) {
            return Err(FusionError::Parse("label index out of range".into()));
        }
        let mut fusion = vec![Multiset::new(); n * n];
        for (u, v, w, m) in entries {
            if u >= n || v >= n || w >= n {
                return Err(FusionError::Parse("fusion entry refers to an unknown label".into()));
            }
            fusion[u * n + v].add(w, m);
        }
        let dim_bound = dims.iter().copied().max().unwrap_or(1);
        Ok(TableRing {
            name: name.into(),
            names,
            dims,
            conj,
            trivial,
            fusion,
            dim_bound,
        })
    }

    /// Checks every axiom over all labels and fails on the first violated law.
    pub fn validated(self) -> Result<Self, FusionError> {
        let labels: Vec<usize> = (0..self.len()).collect();
        let report = check_axioms(&self, &labels);
        if let Some(bad) = report.first_failure() {
            return Err(FusionError::Axiom {
                law: bad.name.clone(),
                witness: bad.counterexamples.first().cloned().unwrap_or_default(),
            });
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Overwrites a dimension; used to build deliberately broken rings in tests.
    pub fn with_dim(mut self, u: usize, d: usize) -> Self {
        self.dims[u] = d;
        self.dim_bound = self.dims.iter().copied().max().unwrap_or(1);
        self
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

impl FusionRules for TableRing {
    type Label = usize;

    fn ring_name(&self) -> String {
        self.name.clone()
    }

    fn trivial(&self) -> usize {
        self.trivial
    }

    fn contains(&self, u: &usize) -> bool {
        *u < self.names.len()
    }

    fn dim(&self, u: &usize) -> Result<usize, FusionError> {
        self.check_label(u)?;
        Ok(self.dims[*u])
    }

    fn conj(&self, u: &usize) -> Result<usize, FusionError> {
        self.check_label(u)?;
        Ok(self.conj[*u])
    }

    fn fuse(&self, u: &usize, v: &usize) -> Result<Multiset<usize>, FusionError> {
        self.check_label(u)?;
        self.check_label(v)?;
        Ok(self.fusion[u * self.len() + v].clone())
    }

    fn dim_bound(&self) -> Option<usize> {
        Some(self.dim_bound)
    }

    fn label_count(&self) -> Option<usize> {
        Some(self.len())
    }

    fn window(&self, n: usize) -> Vec<usize> {
        (0..n.min(self.len())).collect()
    }

    fn label_name(&self, u: &usize) -> String {
        self.names.get(*u).cloned().unwrap_or_else(|| format!("#{u}"))
    }

    fn parse_label(&self, s: &str) -> Result<usize, FusionError> {
        let s = s.trim();
        self.index_of(s)
            .ok_or_else(|| FusionError::UnknownLabel(s.to_string()))
    }
}
