//! The quantum approximants `X_F = Σ_i Σ_k Δ(a^i_k)(1 ⊗ b^i_k)`.

use std::collections::{BTreeSet, HashMap};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::FreenessError;
use crate::discrete::{delta_block, strict_compare, BlockElement, QuantumModel, TwoLegElement};
use crate::irr_partition::{partition_irr, IrrPartitionResult};
use crate::linalg::{c, identity, kron, op_norm, realign, unvec_square, vec_norm, zeros, CMatrix, CVector};

/// Blockwise agreement required of the exact finite-support identities.
pub const DECOMP_TOL: f64 = 1e-10;
/// End-to-end tolerance for `‖(X_F − c_u ⊗ 1)(p_F ⊗ 1)‖`.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Reconstruction error above which a decomposition is rejected.
const RECONSTRUCTION_LIMIT: f64 = 1e-8;
const RANK_TOL: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Factorization {
    /// Second leg is one-dimensional: `A = M`, `B = 1`.
    Scalar,
    /// Singular values of the realigned block.
    Svd,
    /// `M = Σ_{j,l} M_{jl} ⊗ E_{jl}`.
    MatrixUnits,
}

/// One elementary tensor `A ⊗ B` with `A ∈ B(H_w)`, `B ∈ B(H_{conj v})`.
#[derive(Debug, Clone)]
pub struct Slot<L> {
    pub w: L,
    pub a: CMatrix,
    pub b: CMatrix,
}

/// `Δ(c_u)(1 ⊗ p_{conj v}) = Σ_k A_k^v ⊗ B_k^v`.
#[derive(Debug, Clone)]
pub struct ElementaryDecomposition<L> {
    pub v: L,
    pub conj_v: L,
    pub slots: Vec<Slot<L>>,
    pub methods: Vec<(L, Factorization)>,
    pub residual: f64,
}

/// `N_slots = dim(u)² · D²`: at most `dim(u)²` distinct `w ⊂ u ⊗ v`, each
/// block splitting into at most `D²` elementary tensors.
pub fn slot_bound<M: QuantumModel>(model: &M, u: &M::Label) -> Result<usize, FreenessError> {
    let du = model.dim(u)?;
    let d = model
        .dim_bound()
        .ok_or_else(|| FreenessError::Input("the ring has no dimension bound".into()))?;
    Ok(du * du * d * d)
}

fn factor_block(m: &CMatrix, dw: usize, db: usize, c_norm: f64) -> (Vec<(CMatrix, CMatrix)>, Factorization) {
    if db == 1 {
        return (vec![(m.clone(), identity(1))], Factorization::Scalar);
    }
    let bound = c_norm * (1.0 + 1e-12) + 1e-14;
    let r = realign(m, dw, db);
    let svd = r.svd(true, true);
    let (uu, vt) = (svd.u.expect("u requested"), svd.v_t.expect("v_t requested"));
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let mut terms = Vec::new();
    for (idx, &sigma) in svd.singular_values.iter().enumerate() {
        if sigma <= RANK_TOL * smax.max(1.0) {
            continue;
        }
        let a = unvec_square(&uu.column(idx).into_owned(), dw) * c(sigma, 0.0);
        // the row of V* is the vectorized B
        let b = CMatrix::from_fn(db, db, |i, j| vt[(idx, i * db + j)]);
        let nb = op_norm(&b);
        terms.push((a * c(nb, 0.0), b / c(nb, 0.0)));
    }
    if terms.iter().all(|(a, _)| op_norm(a) <= bound) {
        return (terms, Factorization::Svd);
    }
    let mut units = Vec::new();
    for j in 0..db {
        for l in 0..db {
            let a = CMatrix::from_fn(dw, dw, |i, ip| m[(i * db + j, ip * db + l)]);
            if a.iter().any(|z| z.norm() > 0.0) {
                let mut e = zeros(db, db);
                e[(j, l)] = c(1.0, 0.0);
                units.push((a, e));
            }
        }
    }
    (units, Factorization::MatrixUnits)
}

/// Factors `M_w = Σ_{T ∈ Mor(u, w ⊗ conj v)} T c_u T*` for every
/// `w ⊂ u ⊗ v` into elementary tensors with `‖A‖ ≤ ‖c_u‖`, `‖B‖ ≤ 1`.
pub fn elementary_decomposition<M: QuantumModel>(
    model: &M,
    u: &M::Label,
    c_u: &CMatrix,
    v: &M::Label,
) -> Result<ElementaryDecomposition<M::Label>, FreenessError> {
    let cv = model.conj(v)?;
    let db = model.dim(&cv)?;
    let c_norm = op_norm(c_u);
    let mut slots = Vec::new();
    let mut methods = Vec::new();
    let mut residual: f64 = 0.0;
    for w in model.fuse(u, v)?.support() {
        let dw = model.dim(w)?;
        let mut m = zeros(dw * db, dw * db);
        for t in model.intertwiners(u, w, &cv)? {
            m += t * c_u * t.adjoint();
        }
        let (terms, method) = factor_block(&m, dw, db, c_norm);
        let mut rebuilt = zeros(dw * db, dw * db);
        for (a, b) in &terms {
            rebuilt += kron(a, b);
        }
        let r = op_norm(&(rebuilt - &m));
        residual = residual.max(r);
        for (a, b) in terms {
            let (na, nb) = (op_norm(&a), op_norm(&b));
            if na > c_norm * (1.0 + 1e-9) + 1e-12 || nb > 1.0 + 1e-9 {
                return Err(FreenessError::Decomposition {
                    v: model.label_name(v),
                    message: format!("slot at {} has ‖A‖ = {na:.3e}, ‖B‖ = {nb:.3e}", model.label_name(w)),
                });
            }
            slots.push(Slot { w: w.clone(), a, b });
        }
        methods.push((w.clone(), method));
    }
    if residual > RECONSTRUCTION_LIMIT {
        return Err(FreenessError::Decomposition {
            v: model.label_name(v),
            message: format!("reconstruction residual {residual:.3e}"),
        });
    }
    Ok(ElementaryDecomposition {
        v: v.clone(),
        conj_v: cv,
        slots,
        methods,
        residual,
    })
}

/// `a_k = Σ_{v ∈ Y} A_k^v` placed at `w_k^v`, `b_k = Σ_{v ∈ Y} j(B_k^v)` at `v`.
pub fn build_ab<M: QuantumModel>(
    model: &M,
    class_index: usize,
    class: &[M::Label],
    decomps: &HashMap<M::Label, ElementaryDecomposition<M::Label>>,
    n_slots: usize,
) -> Result<(Vec<BlockElement<M::Label>>, Vec<BlockElement<M::Label>>), FreenessError> {
    let mut a = vec![BlockElement::new(); n_slots];
    let mut b = vec![BlockElement::new(); n_slots];
    let mut owner: Vec<HashMap<M::Label, M::Label>> = vec![HashMap::new(); n_slots];
    for v in class {
        let d = decomps
            .get(v)
            .ok_or_else(|| FreenessError::Internal(format!("no decomposition for {}", model.label_name(v))))?;
        if d.slots.len() > n_slots {
            return Err(FreenessError::Internal(format!(
                "{} needs {} slots, more than {n_slots}",
                model.label_name(v),
                d.slots.len()
            )));
        }
        for (k, slot) in d.slots.iter().enumerate() {
            if let Some(prev) = owner[k].insert(slot.w.clone(), v.clone()) {
                return Err(FreenessError::Injectivity {
                    class: class_index,
                    slot: k,
                    w: model.label_name(&slot.w),
                    v: model.label_name(&prev),
                    v_prime: model.label_name(v),
                });
            }
            a[k].insert(model, slot.w.clone(), slot.a.clone())?;
            b[k].insert(model, v.clone(), model.j_map(v, &slot.b)?)?;
        }
    }
    Ok((a, b))
}

/// `Σ_k Δ(a_k)(p_w ⊗ p_s)(1 ⊗ b_k p_s)`.
fn ab_block<M: QuantumModel>(
    model: &M,
    a: &[BlockElement<M::Label>],
    b: &[BlockElement<M::Label>],
    w: &M::Label,
    s: &M::Label,
) -> Result<CMatrix, FreenessError> {
    let (dw, ds) = (model.dim(w)?, model.dim(s)?);
    let mut acc = zeros(dw * ds, dw * ds);
    for (ak, bk) in a.iter().zip(b) {
        if let Some(bs) = bk.block(s) {
            acc += delta_block(model, ak, w, s)? * kron(&identity(dw), bs);
        }
    }
    Ok(acc)
}

/// `Σ_k Δ(A_k^v)(p_w ⊗ p_v)(1 ⊗ j(B_k^v))`, the per-`v` middle term.
fn mid_block<M: QuantumModel>(
    model: &M,
    d: &ElementaryDecomposition<M::Label>,
    w: &M::Label,
) -> Result<CMatrix, FreenessError> {
    let v = &d.v;
    let (dw, dv) = (model.dim(w)?, model.dim(v)?);
    let mut acc = zeros(dw * dv, dw * dv);
    for slot in &d.slots {
        let ak = BlockElement::single(model, &slot.w, slot.a.clone())?;
        let jb = model.j_map(v, &slot.b)?;
        acc += delta_block(model, &ak, w, v)? * kron(&identity(dw), &jb);
    }
    Ok(acc)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassResidual {
    pub class: usize,
    pub members: Vec<String>,
    pub lhs_mid: f64,
    pub mid_rhs: f64,
    pub lhs_rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SlotSummary {
    pub v: String,
    pub active_slots: usize,
    pub w: Vec<String>,
    pub a_norms: Vec<f64>,
    pub b_norms: Vec<f64>,
    pub factorization: Vec<(String, Factorization)>,
    pub reconstruction_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalarCollapse {
    pub pairs_checked: usize,
    /// `max ‖T* t_v‖` over `T ∈ Mor(s, v ⊗ conj v)`, `s ≠ 1`.
    pub max_nontrivial: f64,
    /// `max ‖T − λ t_v‖` and `max ||λ| − ‖t_v‖⁻¹|` for `s = 1`.
    pub trivial_alignment: f64,
    pub lambda_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FreenessReport {
    pub ring: String,
    pub u: String,
    pub f: Vec<String>,
    pub window: Vec<String>,
    pub c_u_norm: f64,
    pub degree_bound: usize,
    pub classes: Vec<Vec<String>>,
    pub n_slots: usize,
    pub slots: Vec<SlotSummary>,
    pub class_residuals: Vec<ClassResidual>,
    pub residual: f64,
    pub worst_block: Option<(String, String)>,
    pub decomp_residual: f64,
    pub scalar_collapse: ScalarCollapse,
    pub norm_observed: f64,
    pub norm_bound: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub elapsed_ms: f64,
}

impl FreenessReport {
    /// Re-evaluates `passed` with end-to-end tolerance `tol`; the exact
    /// intermediate identities keep [`DECOMP_TOL`].
    pub fn recheck(&mut self, tol: f64) {
        let c = &self.scalar_collapse;
        self.tolerance = tol;
        self.passed = self.residual <= tol
            && self.decomp_residual <= DECOMP_TOL
            && c.max_nontrivial <= DECOMP_TOL
            && c.trivial_alignment <= DECOMP_TOL
            && c.lambda_residual <= DECOMP_TOL
            && self.norm_observed <= self.norm_bound * (1.0 + 1e-12);
    }
}

#[derive(Debug, Clone)]
pub struct QuantumRun<L: Ord> {
    pub report: FreenessReport,
    pub partition: IrrPartitionResult<L>,
    /// `X_F` on columns `F ∪ window`, rows in the window.
    pub x: TwoLegElement<L>,
}

/// `‖T* t_v‖` for `s ≠ 1` and the alignment `T = λ t_v`, `|λ| = ‖t_v‖⁻¹`,
/// for `s = 1`, over all `s ⊂ v ⊗ conj v`.
pub fn scalar_collapse<M: QuantumModel>(model: &M, labels: &[M::Label]) -> Result<ScalarCollapse, FreenessError> {
    let triv = model.trivial();
    let mut out = ScalarCollapse {
        pairs_checked: 0,
        max_nontrivial: 0.0,
        trivial_alignment: 0.0,
        lambda_residual: 0.0,
    };
    for v in labels {
        let cv = model.conj(v)?;
        let t: CVector = model.t_vector(v)?;
        let tn = vec_norm(&t);
        for s in model.fuse(v, &cv)?.support() {
            for tt in model.intertwiners(s, v, &cv)? {
                out.pairs_checked += 1;
                let proj = tt.adjoint() * &t;
                if *s == triv {
                    let col: CVector = tt.column(0).into_owned();
                    let lambda = t.dotc(&col) / c(tn * tn, 0.0);
                    out.trivial_alignment = out.trivial_alignment.max(vec_norm(&(col - &t * lambda)));
                    out.lambda_residual = out.lambda_residual.max((lambda.norm() - 1.0 / tn).abs());
                } else {
                    out.max_nontrivial = out.max_nontrivial.max(proj.norm());
                }
            }
        }
    }
    Ok(out)
}

/// Builds `X_F` for `c_u` on the window and checks
/// `X_F (p_w ⊗ 1) = (c_u ⊗ 1)(p_w ⊗ 1)` for `w ∈ F` on every window row, the
/// per-class intermediate identities, the scalar-collapse step and the norm
/// bound of the approximant.
pub fn verify_freeness<M: QuantumModel>(
    model: &M,
    u: &M::Label,
    c_u: &CMatrix,
    f: &[M::Label],
    window: &[M::Label],
) -> Result<QuantumRun<M::Label>, FreenessError> {
    let start = Instant::now();
    let name = |l: &M::Label| model.label_name(l);
    if !f.contains(u) {
        return Err(FreenessError::Input(format!("F must contain u = {}", name(u))));
    }
    let du = model.dim(u)?;
    if c_u.shape() != (du, du) {
        return Err(FreenessError::Input(format!("c_u must be {du}x{du}")));
    }
    let partition = partition_irr(model, f, window)?;
    let n_slots = slot_bound(model, u)?;

    let decomps: HashMap<M::Label, ElementaryDecomposition<M::Label>> = window
        .par_iter()
        .map(|v| elementary_decomposition(model, u, c_u, v).map(|d| (v.clone(), d)))
        .collect::<Result<_, _>>()?;

    let columns: BTreeSet<M::Label> = f.iter().chain(window).cloned().collect();
    let rows: BTreeSet<M::Label> = window.iter().cloned().collect();
    let c_elem = BlockElement::single(model, u, c_u.clone())?;

    struct ClassOutput<L> {
        residual: ClassResidual,
        blocks: Vec<(L, L, CMatrix)>,
    }
    let per_class = partition
        .classes
        .par_iter()
        .enumerate()
        .map(|(i, class)| -> Result<ClassOutput<M::Label>, FreenessError> {
            let (a, b) = build_ab(model, i, class, &decomps, n_slots)?;
            let mut res = ClassResidual {
                class: i,
                members: class.iter().map(name).collect(),
                lhs_mid: 0.0,
                mid_rhs: 0.0,
                lhs_rhs: 0.0,
            };
            let mut blocks = Vec::new();
            for w in &columns {
                for s in class {
                    let lhs = ab_block(model, &a, &b, w, s)?;
                    if f.contains(w) {
                        let mid = mid_block(model, &decomps[s], w)?;
                        let ds = model.dim(s)?;
                        let rhs = if w == u {
                            kron(c_u, &identity(ds))
                        } else {
                            zeros(lhs.nrows(), lhs.ncols())
                        };
                        res.lhs_mid = res.lhs_mid.max(op_norm(&(&lhs - &mid)));
                        res.mid_rhs = res.mid_rhs.max(op_norm(&(&mid - &rhs)));
                        res.lhs_rhs = res.lhs_rhs.max(op_norm(&(&lhs - &rhs)));
                    }
                    blocks.push((w.clone(), s.clone(), lhs));
                }
            }
            Ok(ClassOutput { residual: res, blocks })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut x = TwoLegElement::new(columns.clone(), Some(rows.clone()));
    let mut class_residuals = Vec::new();
    for out in per_class {
        for (w, s, m) in out.blocks {
            x.accumulate(w, s, m);
        }
        class_residuals.push(out.residual);
    }
    let target = TwoLegElement::elementary_tensor_with_unit(model, &c_elem, columns, rows)?;
    let strict = strict_compare(model, &x, &target, f)?;
    let collapse = scalar_collapse(model, window)?;

    let c_norm = op_norm(c_u);
    let norm_observed = x.norm_sup();
    let norm_bound = (2 * partition.degree_bound + 1) as f64 * n_slots as f64 * c_norm;
    let decomp_residual = class_residuals
        .iter()
        .map(|r| r.lhs_mid.max(r.mid_rhs).max(r.lhs_rhs))
        .fold(0.0, f64::max);

    let mut slots = Vec::with_capacity(window.len());
    for v in window {
        let d = &decomps[v];
        slots.push(SlotSummary {
            v: name(v),
            active_slots: d.slots.len(),
            w: d.slots.iter().map(|s| name(&s.w)).collect(),
            a_norms: d.slots.iter().map(|s| op_norm(&s.a)).collect(),
            b_norms: d.slots.iter().map(|s| op_norm(&s.b)).collect(),
            factorization: d.methods.iter().map(|(w, m)| (name(w), *m)).collect(),
            reconstruction_residual: d.residual,
        });
    }
    let mut report = FreenessReport {
        ring: model.ring_name(),
        u: name(u),
        f: f.iter().map(name).collect(),
        window: window.iter().map(name).collect(),
        c_u_norm: c_norm,
        degree_bound: partition.degree_bound,
        classes: partition.classes.iter().map(|cl| cl.iter().map(name).collect()).collect(),
        n_slots,
        slots,
        class_residuals,
        residual: strict.residual,
        worst_block: strict.worst.map(|(w, s)| (name(&w), name(&s))),
        decomp_residual,
        scalar_collapse: collapse,
        norm_observed,
        norm_bound,
        tolerance: RESIDUAL_TOL,
        passed: false,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    report.recheck(RESIDUAL_TOL);
    report.passed &= partition.all_clear();
    Ok(QuantumRun { report, partition, x })
}
