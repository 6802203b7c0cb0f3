//! The discrete side `ℓ^∞(Γ) = ∏_u B(H_u)` at finite support.
//!
//! [`BlockElement`] stores finitely many blocks `a p_u`; [`TwoLegElement`]
//! stores blocks of an element of `M(c_0(Γ) ⊗ ℓ^∞(Γ))` at label pairs
//! `(w, s)`. The comultiplication is
//! `Δ(a)(p_w ⊗ p_s) = Σ_u Σ_{T ∈ Mor(u, w⊗s)} T (a p_u) T*`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fusion::{DiscreteGroup, FusionError, FusionRules, GroupFusionRing};
use crate::linalg::{c, identity, kron, op_norm, zeros, CMatrix, CVector, JsonMatrix, C64};
use crate::matrix_cqg::{CqgError, FiniteDualModel};

#[derive(Debug, Error)]
pub enum DiscreteError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Cqg(#[from] CqgError),
    #[error("discrete_side: block for {label} must be {expected}x{expected}, found {rows}x{cols}")]
    BlockSize {
        label: String,
        expected: usize,
        rows: usize,
        cols: usize,
    },
    #[error("discrete_side: column {0} is not materialized")]
    Materialization(String),
    #[error("discrete_side: counit block is not scalar")]
    Counit,
    #[error("discrete_side: parse error: {0}")]
    Parse(String),
}

/// Quantum data on top of a fusion ring: isometric intertwiner bases,
/// conjugate vectors and the maps `j`.
pub trait QuantumModel: FusionRules {
    /// Orthonormal basis of `Mor(u, v ⊗ w)` as `(dim v · dim w) × dim u`
    /// isometries with orthogonal ranges.
    fn intertwiners(&self, u: &Self::Label, v: &Self::Label, w: &Self::Label) -> Result<&[CMatrix], FusionError>;

    /// `t_v ∈ H_v ⊗ H_{conj v}`.
    fn t_vector(&self, v: &Self::Label) -> Result<CVector, FusionError>;

    /// `j: B(H_{conj v}) → B(H_v)` with `(j(A) ⊗ 1) t_v = (1 ⊗ A) t_v`.
    fn j_map(&self, v: &Self::Label, a: &CMatrix) -> Result<CMatrix, DiscreteError>;
}

impl FusionRules for FiniteDualModel {
    type Label = usize;

    fn ring_name(&self) -> String {
        self.table().ring_name()
    }

    fn trivial(&self) -> usize {
        self.table().trivial()
    }

    fn contains(&self, u: &usize) -> bool {
        self.table().contains(u)
    }

    fn dim(&self, u: &usize) -> Result<usize, FusionError> {
        self.table().dim(u)
    }

    fn conj(&self, u: &usize) -> Result<usize, FusionError> {
        self.table().conj(u)
    }

    fn fuse(&self, u: &usize, v: &usize) -> Result<crate::fusion::Multiset<usize>, FusionError> {
        self.table().fuse(u, v)
    }

    fn dim_bound(&self) -> Option<usize> {
        self.table().dim_bound()
    }

    fn label_count(&self) -> Option<usize> {
        self.table().label_count()
    }

    fn window(&self, n: usize) -> Vec<usize> {
        self.table().window(n)
    }

    fn label_name(&self, u: &usize) -> String {
        self.table().label_name(u)
    }

    fn parse_label(&self, s: &str) -> Result<usize, FusionError> {
        self.table().parse_label(s)
    }
}

impl QuantumModel for FiniteDualModel {
    fn intertwiners(&self, u: &usize, v: &usize, w: &usize) -> Result<&[CMatrix], FusionError> {
        for x in [u, v, w] {
            self.check_label(x)?;
        }
        Ok(self.mor(*u, *v, *w))
    }

    fn t_vector(&self, v: &usize) -> Result<CVector, FusionError> {
        self.check_label(v)?;
        Ok(self.t(*v).clone())
    }

    fn j_map(&self, v: &usize, a: &CMatrix) -> Result<CMatrix, DiscreteError> {
        self.check_label(v)?;
        Ok(self.j(*v, a)?)
    }
}

impl<G: DiscreteGroup> QuantumModel for GroupFusionRing<G> {
    fn intertwiners(&self, u: &G::Elem, v: &G::Elem, w: &G::Elem) -> Result<&[CMatrix], FusionError> {
        for x in [u, v, w] {
            self.check_label(x)?;
        }
        Ok(if self.group().mul(v, w) == *u { &self.unit } else { &[] })
    }

    fn t_vector(&self, v: &G::Elem) -> Result<CVector, FusionError> {
        self.check_label(v)?;
        Ok(CVector::from_element(1, c(1.0, 0.0)))
    }

    fn j_map(&self, v: &G::Elem, a: &CMatrix) -> Result<CMatrix, DiscreteError> {
        self.check_label(v)?;
        if a.shape() != (1, 1) {
            return Err(DiscreteError::BlockSize {
                label: self.label_name(v),
                expected: 1,
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        Ok(a.clone())
    }
}

/// A finitely supported element of `ℓ^∞(Γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockElement<L: Ord> {
    blocks: BTreeMap<L, CMatrix>,
}

impl<L: Ord> Default for BlockElement<L> {
    fn default() -> Self {
        BlockElement { blocks: BTreeMap::new() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockEntry {
    pub label: String,
    pub matrix: JsonMatrix,
}

/// `{"blocks": [{"label", "matrix"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockElementFile {
    pub blocks: Vec<BlockEntry>,
}

fn check_block<R: FusionRules>(ring: &R, u: &R::Label, m: &CMatrix) -> Result<(), DiscreteError> {
    let d = ring.dim(u)?;
    if m.shape() != (d, d) {
        return Err(DiscreteError::BlockSize {
            label: ring.label_name(u),
            expected: d,
            rows: m.nrows(),
            cols: m.ncols(),
        });
    }
    Ok(())
}

impl<L: Ord + Clone> BlockElement<L> {
    pub fn new() -> Self {
        Self::default()
    }

    /// The minimal central projection `p_u`.
    pub fn projection<R: FusionRules<Label = L>>(ring: &R, u: &L) -> Result<Self, DiscreteError> {
        Self::single(ring, u, identity(ring.dim(u)?))
    }

    /// `Σ_{u ∈ labels} p_u`.
    pub fn projection_sum<R: FusionRules<Label = L>>(ring: &R, labels: &[L]) -> Result<Self, DiscreteError> {
        let mut e = Self::new();
        for u in labels {
            e.insert(ring, u.clone(), identity(ring.dim(u)?))?;
        }
        Ok(e)
    }

    pub fn single<R: FusionRules<Label = L>>(ring: &R, u: &L, m: CMatrix) -> Result<Self, DiscreteError> {
        let mut e = Self::new();
        e.insert(ring, u.clone(), m)?;
        Ok(e)
    }

    /// Sets the block at `u`, checking its size.
    pub fn insert<R: FusionRules<Label = L>>(&mut self, ring: &R, u: L, m: CMatrix) -> Result<(), DiscreteError> {
        check_block(ring, &u, &m)?;
        self.blocks.insert(u, m);
        Ok(())
    }

    pub fn block(&self, u: &L) -> Option<&CMatrix> {
        self.blocks.get(u)
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&L, &CMatrix)> {
        self.blocks.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &L> {
        self.blocks.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Option<&CMatrix>, Option<&CMatrix>) -> Option<CMatrix>) -> Self {
        let keys: BTreeSet<&L> = self.blocks.keys().chain(other.blocks.keys()).collect();
        let blocks = keys
            .into_iter()
            .filter_map(|k| f(self.blocks.get(k), other.blocks.get(k)).map(|m| (k.clone(), m)))
            .collect();
        BlockElement { blocks }
    }

    pub fn add(&self, other: &Self) -> Result<Self, DiscreteError> {
        self.same_shapes(other)?;
        Ok(self.zip_with(other, |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(a + b),
            (Some(m), None) | (None, Some(m)) => Some(m.clone()),
            (None, None) => None,
        }))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, DiscreteError> {
        self.add(&other.scale(c(-1.0, 0.0)))
    }

    /// Blockwise product; blocks absent from either factor vanish.
    pub fn mul(&self, other: &Self) -> Result<Self, DiscreteError> {
        self.same_shapes(other)?;
        Ok(self.zip_with(other, |a, b| match (a, b) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        }))
    }

    pub fn adjoint(&self) -> Self {
        BlockElement {
            blocks: self.blocks.iter().map(|(k, m)| (k.clone(), m.adjoint())).collect(),
        }
    }

    pub fn scale(&self, z: C64) -> Self {
        BlockElement {
            blocks: self.blocks.iter().map(|(k, m)| (k.clone(), m * z)).collect(),
        }
    }

    /// `max_u ‖a p_u‖`.
    pub fn norm_sup(&self) -> f64 {
        self.blocks.values().map(op_norm).fold(0.0, f64::max)
    }

    fn same_shapes(&self, other: &Self) -> Result<(), DiscreteError> {
        for (k, m) in &self.blocks {
            if let Some(n) = other.blocks.get(k) {
                if m.shape() != n.shape() {
                    return Err(DiscreteError::BlockSize {
                        label: "(shared block)".into(),
                        expected: m.nrows(),
                        rows: n.nrows(),
                        cols: n.ncols(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn to_file<R: FusionRules<Label = L>>(&self, ring: &R) -> BlockElementFile {
        BlockElementFile {
            blocks: self
                .blocks
                .iter()
                .map(|(k, m)| BlockEntry {
                    label: ring.label_name(k),
                    matrix: JsonMatrix::from_matrix(m),
                })
                .collect(),
        }
    }

    pub fn from_file<R: FusionRules<Label = L>>(ring: &R, file: &BlockElementFile) -> Result<Self, DiscreteError> {
        let mut e = Self::new();
        for entry in &file.blocks {
            let u = ring.parse_label(&entry.label)?;
            let m = entry
                .matrix
                .to_matrix()
                .ok_or_else(|| DiscreteError::Parse(format!("ragged matrix for {}", entry.label)))?;
            e.insert(ring, u, m)?;
        }
        Ok(e)
    }
}

/// Blocks `X(p_w ⊗ p_s)` of an element of `M(c_0(Γ) ⊗ ℓ^∞(Γ))`.
///
/// Every column `w ∈ columns` is fully materialized: all `s` in the row
/// window (all labels when `rows` is `None`) with a nonzero block are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoLegElement<L: Ord> {
    blocks: BTreeMap<(L, L), CMatrix>,
    columns: BTreeSet<L>,
    rows: Option<BTreeSet<L>>,
}

impl<L: Ord + Clone> TwoLegElement<L> {
    pub fn new(columns: BTreeSet<L>, rows: Option<BTreeSet<L>>) -> Self {
        TwoLegElement {
            blocks: BTreeMap::new(),
            columns,
            rows,
        }
    }

    pub fn block(&self, w: &L, s: &L) -> Option<&CMatrix> {
        self.blocks.get(&(w.clone(), s.clone()))
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(L, L), &CMatrix)> {
        self.blocks.iter()
    }

    pub fn columns(&self) -> &BTreeSet<L> {
        &self.columns
    }

    pub fn rows(&self) -> Option<&BTreeSet<L>> {
        self.rows.as_ref()
    }

    fn in_rows(&self, s: &L) -> bool {
        self.rows.as_ref().is_none_or(|r| r.contains(s))
    }

    /// Adds `m` to the block at `(w, s)`; rows outside the window are dropped.
    pub fn accumulate(&mut self, w: L, s: L, m: CMatrix) {
        if !self.in_rows(&s) {
            return;
        }
        match self.blocks.entry((w, s)) {
            std::collections::btree_map::Entry::Occupied(mut e) => *e.get_mut() += m,
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(m);
            }
        }
    }

    /// `X (1 ⊗ b)`.
    pub fn mul_second_leg(&self, b: &BlockElement<L>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .filter_map(|((w, s), m)| {
                b.block(s).map(|bs| {
                    let dw = m.nrows() / bs.nrows();
                    ((w.clone(), s.clone()), m * kron(&identity(dw), bs))
                })
            })
            .collect();
        TwoLegElement {
            blocks,
            columns: self.columns.clone(),
            rows: self.rows.clone(),
        }
    }

    /// `c ⊗ 1` restricted to the given columns and a finite row window.
    pub fn elementary_tensor_with_unit<R: FusionRules<Label = L>>(
        ring: &R,
        c_elem: &BlockElement<L>,
        columns: BTreeSet<L>,
        rows: BTreeSet<L>,
    ) -> Result<Self, DiscreteError> {
        let mut out = TwoLegElement::new(columns.clone(), Some(rows.clone()));
        for w in &columns {
            if let Some(cw) = c_elem.block(w) {
                for s in &rows {
                    out.accumulate(w.clone(), s.clone(), kron(cw, &identity(ring.dim(s)?)));
                }
            }
        }
        Ok(out)
    }

    pub fn norm_sup(&self) -> f64 {
        self.blocks.values().map(op_norm).fold(0.0, f64::max)
    }
}

/// `Δ(a)(p_w ⊗ p_s) = Σ_{u ⊂ w⊗s} Σ_T T (a p_u) T*`.
pub fn delta_block<M: QuantumModel>(
    model: &M,
    a: &BlockElement<M::Label>,
    w: &M::Label,
    s: &M::Label,
) -> Result<CMatrix, DiscreteError> {
    let d = model.dim(w)? * model.dim(s)?;
    let mut acc = zeros(d, d);
    for u in model.fuse(w, s)?.support() {
        if let Some(au) = a.block(u) {
            for t in model.intertwiners(u, w, s)? {
                acc += t * au * t.adjoint();
            }
        }
    }
    Ok(acc)
}

/// `Δ(a)` at the given pairs. No column counts as materialized.
pub fn delta<M: QuantumModel>(
    model: &M,
    a: &BlockElement<M::Label>,
    pairs: &[(M::Label, M::Label)],
) -> Result<TwoLegElement<M::Label>, DiscreteError> {
    let mut out = TwoLegElement::new(BTreeSet::new(), None);
    for (w, s) in pairs {
        out.accumulate(w.clone(), s.clone(), delta_block(model, a, w, s)?);
    }
    Ok(out)
}

/// Labels `s` with `Δ(a)(p_w ⊗ p_s)` possibly nonzero: `u ⊂ w ⊗ s` iff
/// `s ⊂ conj(w) ⊗ u`.
pub fn delta_rows<M: QuantumModel>(
    model: &M,
    a: &BlockElement<M::Label>,
    w: &M::Label,
) -> Result<BTreeSet<M::Label>, DiscreteError> {
    let cw = model.conj(w)?;
    let mut rows = BTreeSet::new();
    for u in a.support() {
        rows.extend(model.fuse(&cw, u)?.support().cloned());
    }
    Ok(rows)
}

/// `Δ(a)(p_w ⊗ 1)` for every `w ∈ columns`, restricted to the row window.
pub fn delta_columns<M: QuantumModel>(
    model: &M,
    a: &BlockElement<M::Label>,
    columns: &BTreeSet<M::Label>,
    rows: Option<&BTreeSet<M::Label>>,
) -> Result<TwoLegElement<M::Label>, DiscreteError> {
    let mut out = TwoLegElement::new(columns.clone(), rows.cloned());
    for w in columns {
        for s in delta_rows(model, a, w)? {
            if rows.is_none_or(|r| r.contains(&s)) {
                let m = delta_block(model, a, w, &s)?;
                out.accumulate(w.clone(), s, m);
            }
        }
    }
    Ok(out)
}

/// `ε(a)`: the scalar of the trivial block.
pub fn counit<R: FusionRules>(ring: &R, a: &BlockElement<R::Label>) -> Result<C64, DiscreteError> {
    match a.block(&ring.trivial()) {
        None => Ok(c(0.0, 0.0)),
        Some(m) if m.shape() == (1, 1) => Ok(m[(0, 0)]),
        Some(_) => Err(DiscreteError::Counit),
    }
}

/// `max ‖((Δ⊗id)Δ(a) − (id⊗Δ)Δ(a))(p_w ⊗ p_s ⊗ p_t)‖` over the triples.
pub fn coassoc_check<M: QuantumModel>(
    model: &M,
    a: &BlockElement<M::Label>,
    triples: &[(M::Label, M::Label, M::Label)],
) -> Result<f64, DiscreteError> {
    let mut worst: f64 = 0.0;
    for (w, s, t) in triples {
        let (dw, ds, dt) = (model.dim(w)?, model.dim(s)?, model.dim(t)?);
        let d = dw * ds * dt;
        let mut left = zeros(d, d);
        for x in model.fuse(w, s)?.support() {
            let inner = delta_block(model, a, x, t)?;
            for tt in model.intertwiners(x, w, s)? {
                let lift = kron(tt, &identity(dt));
                left += &lift * &inner * lift.adjoint();
            }
        }
        let mut right = zeros(d, d);
        for y in model.fuse(s, t)?.support() {
            let inner = delta_block(model, a, w, y)?;
            for ss in model.intertwiners(y, s, t)? {
                let lift = kron(&identity(dw), ss);
                right += &lift * &inner * lift.adjoint();
            }
        }
        worst = worst.max(op_norm(&(left - right)));
    }
    Ok(worst)
}

#[derive(Debug, Clone)]
pub struct StrictResidual<L> {
    pub residual: f64,
    /// The `(w, s)` block attaining the residual.
    pub worst: Option<(L, L)>,
    pub blocks_compared: usize,
}

/// `‖(X − Y)(p_F ⊗ 1)‖` as the largest blockwise operator norm over columns
/// `w ∈ F`, on rows in both row windows.
pub fn strict_compare<R: FusionRules>(
    ring: &R,
    x: &TwoLegElement<R::Label>,
    y: &TwoLegElement<R::Label>,
    f: &[R::Label],
) -> Result<StrictResidual<R::Label>, DiscreteError> {
    for w in f {
        if !x.columns.contains(w) || !y.columns.contains(w) {
            return Err(DiscreteError::Materialization(ring.label_name(w)));
        }
    }
    let cols: BTreeSet<&R::Label> = f.iter().collect();
    let mut keys: BTreeSet<(R::Label, R::Label)> = BTreeSet::new();
    for (w, s) in x.blocks.keys().chain(y.blocks.keys()) {
        if cols.contains(w) && x.in_rows(s) && y.in_rows(s) {
            keys.insert((w.clone(), s.clone()));
        }
    }
    let mut out = StrictResidual {
        residual: 0.0,
        worst: None,
        blocks_compared: keys.len(),
    };
    for key in keys {
        let r = match (x.blocks.get(&key), y.blocks.get(&key)) {
            (Some(a), Some(b)) => op_norm(&(a - b)),
            (Some(m), None) | (None, Some(m)) => op_norm(m),
            (None, None) => 0.0,
        };
        if r > out.residual || out.worst.is_none() {
            out.residual = r;
            out.worst = Some(key);
        }
    }
    Ok(out)
}
