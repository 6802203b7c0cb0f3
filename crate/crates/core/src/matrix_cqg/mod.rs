//! Concrete matrix models for duals of finite groups.
//!
//! A [`RepCatalog`] lists unitary irreducible representations of a finite
//! group. [`FiniteDualModel`] turns a catalog into the data used on the
//! discrete side: the representation ring, orthonormal intertwiner bases
//! `Mor(u, v ⊗ w)`, conjugate vectors `t_u`, `s_u` and the maps `j`.

mod catalog;
mod io;

pub use catalog::{abelian_catalog, builtin_catalog, builtin_names};
pub use io::{load_rep_file, parse_rep_file, RepFile, RepFileEntry};

use std::collections::HashMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::fusion::{
    rep_ring_from_character_table, CharacterTable, DiscreteGroup, FiniteGroup, FusionError, FusionRules, Multiset,
    TableRing,
};
use crate::linalg::{
    c, flip_vector, hs_inner, identity, kron, matrix_as_vector, op_norm, random_matrix, vec_norm, vector_as_matrix,
    zeros, CMatrix, CVector, C64,
};

/// Tolerance for unitarity, multiplicativity and intertwiner identities.
pub const CONSTRUCTION_TOL: f64 = 1e-10;
/// Relative size below which an averaged seed counts as lying in the span.
const SPAN_TOL: f64 = 1e-8;
/// Consecutive degenerate seeds that end the intertwiner search.
const MAX_DEGENERATE_SEEDS: usize = 8;
pub const DEFAULT_SEED: u64 = 0x5eed_0001;

#[derive(Debug, Error)]
pub enum CqgError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error("matrix_cqg: {label}: expected {expected} matrices, found {found}")]
    MatrixCount { label: String, expected: usize, found: usize },
    #[error("matrix_cqg: {label}: matrix for element {elem} is not {dim}x{dim}")]
    Shape { label: String, elem: String, dim: usize },
    #[error("matrix_cqg: {label}: matrix for element {elem} is not unitary")]
    NotUnitary { label: String, elem: String },
    #[error("matrix_cqg: {label}: u({g})u({h}) != u({g}{h}), residual {residual:.3e}")]
    NotMultiplicative { label: String, g: String, h: String, residual: f64 },
    #[error("matrix_cqg: {label} is reducible (commutant is not scalar)")]
    Reducible { label: String },
    #[error("matrix_cqg: {a} and {b} are equivalent")]
    Equivalent { a: String, b: String },
    #[error("matrix_cqg: incomplete catalog: sum of dim^2 is {sum}, group order is {order}")]
    Incomplete { sum: usize, order: usize },
    #[error("matrix_cqg: Mor({u}, {v}⊗{w}) has {found} basis elements, character multiplicity is {expected}")]
    CountMismatch { u: String, v: String, w: String, found: usize, expected: usize },
    #[error("matrix_cqg: intertwiner check failed for Mor({u}, {v}⊗{w}): {what} residual {residual:.3e}")]
    Intertwiner { u: String, v: String, w: String, what: &'static str, residual: f64 },
    #[error("matrix_cqg: {label}: {what} residual {residual:.3e}")]
    Conjugate { label: String, what: &'static str, residual: f64 },
    #[error("matrix_cqg: dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix_cqg: generators do not reach element {0}")]
    Unreached(usize),
    #[error("matrix_cqg: unknown group `{0}`")]
    UnknownGroup(String),
    #[error("matrix_cqg: parse error: {0}")]
    Parse(String),
    #[error("matrix_cqg: {0}")]
    Io(#[from] std::io::Error),
}

/// A unitary representation of a finite group, `matrices[g] = u(g)`.
#[derive(Debug, Clone)]
pub struct MatrixRep {
    pub label: String,
    pub dim: usize,
    pub matrices: Vec<CMatrix>,
    /// `ρ_u`; identity for every supported (Kac type) model.
    pub rho: CMatrix,
}

impl MatrixRep {
    pub fn new(label: impl Into<String>, dim: usize, matrices: Vec<CMatrix>) -> Self {
        MatrixRep {
            label: label.into(),
            dim,
            matrices,
            rho: identity(dim),
        }
    }

    pub fn trace(&self, g: usize) -> C64 {
        self.matrices[g].trace()
    }

    /// Entrywise complex conjugate representation.
    pub fn conjugate(&self) -> MatrixRep {
        MatrixRep::new(
            format!("conj({})", self.label),
            self.dim,
            self.matrices.iter().map(|m| m.map(|z| z.conj())).collect(),
        )
    }
}

/// `g ↦ u(g) ⊗ v(g)`.
pub fn tensor_rep(u: &MatrixRep, v: &MatrixRep) -> Result<MatrixRep, CqgError> {
    if u.matrices.len() != v.matrices.len() {
        return Err(CqgError::Dimension(format!(
            "{} and {} are representations of different groups",
            u.label, v.label
        )));
    }
    Ok(MatrixRep::new(
        format!("{}⊗{}", u.label, v.label),
        u.dim * v.dim,
        u.matrices.iter().zip(&v.matrices).map(|(a, b)| kron(a, b)).collect(),
    ))
}

/// `(1/|G|) Σ_g target(g) X source(g)*`, the projection of `X` onto
/// `Mor(source, target)`.
fn average(target: &[CMatrix], source: &[CMatrix], x: &CMatrix) -> CMatrix {
    let mut acc = zeros(x.nrows(), x.ncols());
    for (t, s) in target.iter().zip(source) {
        acc += t * x * s.adjoint();
    }
    acc / c(target.len() as f64, 0.0)
}

/// `⟨S, T⟩ = tr(S* T) / dim(source)`; for intertwiners out of an irreducible
/// source `S* T = ⟨S, T⟩ · 1`.
fn mor_inner(s: &CMatrix, t: &CMatrix) -> C64 {
    hs_inner(s, t) / c(s.ncols() as f64, 0.0)
}

/// Orthonormal basis of `Mor(source, target)` for irreducible `source`,
/// collected from averaged random seeds by Gram-Schmidt until
/// [`MAX_DEGENERATE_SEEDS`] consecutive seeds add nothing new.
pub fn mor_basis(target: &[CMatrix], source: &[CMatrix], rng: &mut ChaCha8Rng) -> Vec<CMatrix> {
    let (rows, cols) = (target[0].nrows(), source[0].nrows());
    let max_rank = rows * cols;
    let mut basis: Vec<CMatrix> = Vec::new();
    let mut degenerate = 0;
    while degenerate < MAX_DEGENERATE_SEEDS && basis.len() < max_rank {
        let x = random_matrix(rng, rows, cols);
        let scale = x.norm();
        let mut t = average(target, source, &x);
        for _ in 0..2 {
            for b in &basis {
                let p = mor_inner(b, &t);
                t -= b * p;
            }
        }
        let norm = mor_inner(&t, &t).re.max(0.0).sqrt();
        if norm <= SPAN_TOL * scale {
            degenerate += 1;
            continue;
        }
        degenerate = 0;
        basis.push(t / c(norm, 0.0));
    }
    basis
}

#[derive(Debug, Clone)]
pub struct Intertwiner {
    pub source: usize,
    pub target: (usize, usize),
    pub matrix: CMatrix,
}

/// A validated list of unitary irreps of a finite group, complete and
/// pairwise inequivalent.
#[derive(Debug, Clone)]
pub struct RepCatalog {
    name: String,
    group: FiniteGroup,
    irreps: Vec<MatrixRep>,
    classes: Vec<Vec<usize>>,
}

impl RepCatalog {
    pub fn new(name: impl Into<String>, group: FiniteGroup, irreps: Vec<MatrixRep>) -> Result<Self, CqgError> {
        let n = group.len();
        let names = group.names().to_vec();
        for rep in &irreps {
            if rep.matrices.len() != n {
                return Err(CqgError::MatrixCount {
                    label: rep.label.clone(),
                    expected: n,
                    found: rep.matrices.len(),
                });
            }
            for (g, m) in rep.matrices.iter().enumerate() {
                if m.nrows() != rep.dim || m.ncols() != rep.dim {
                    return Err(CqgError::Shape {
                        label: rep.label.clone(),
                        elem: names[g].clone(),
                        dim: rep.dim,
                    });
                }
                if op_norm(&(m.adjoint() * m - identity(rep.dim))) > CONSTRUCTION_TOL {
                    return Err(CqgError::NotUnitary {
                        label: rep.label.clone(),
                        elem: names[g].clone(),
                    });
                }
            }
            for g in 0..n {
                for h in 0..n {
                    let gh = group.mul(&g, &h);
                    let residual = op_norm(&(&rep.matrices[g] * &rep.matrices[h] - &rep.matrices[gh]));
                    if residual > CONSTRUCTION_TOL {
                        return Err(CqgError::NotMultiplicative {
                            label: rep.label.clone(),
                            g: names[g].clone(),
                            h: names[h].clone(),
                            residual,
                        });
                    }
                }
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for rep in &irreps {
            for _ in 0..2 {
                let x = random_matrix(&mut rng, rep.dim, rep.dim);
                let p = average(&rep.matrices, &rep.matrices, &x);
                let scalar = identity(rep.dim) * (p.trace() / c(rep.dim as f64, 0.0));
                if op_norm(&(p - scalar)) > CONSTRUCTION_TOL * (1.0 + x.norm()) {
                    return Err(CqgError::Reducible { label: rep.label.clone() });
                }
            }
        }
        for (i, a) in irreps.iter().enumerate() {
            for b in &irreps[i + 1..] {
                let ip: C64 = (0..n).map(|g| a.trace(g) * b.trace(g).conj()).sum::<C64>() / c(n as f64, 0.0);
                if ip.norm() > 0.5 {
                    return Err(CqgError::Equivalent {
                        a: a.label.clone(),
                        b: b.label.clone(),
                    });
                }
            }
        }
        let sum: usize = irreps.iter().map(|r| r.dim * r.dim).sum();
        if sum != n {
            return Err(CqgError::Incomplete { sum, order: n });
        }
        let classes = group.conjugacy_classes();
        Ok(RepCatalog {
            name: name.into(),
            group,
            irreps,
            classes,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn irreps(&self) -> &[MatrixRep] {
        &self.irreps
    }

    pub fn len(&self) -> usize {
        self.irreps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.irreps.is_empty()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.irreps.iter().map(|r| r.dim).collect()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|r| r.label == label)
    }

    pub fn conjugacy_classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn character_table(&self) -> CharacterTable {
        let sizes: Vec<usize> = self.classes.iter().map(Vec::len).collect();
        let chars: Vec<Vec<C64>> = self
            .irreps
            .iter()
            .map(|r| self.classes.iter().map(|cl| r.trace(cl[0])).collect())
            .collect();
        CharacterTable::new(&sizes, &chars, Some(self.irreps.iter().map(|r| r.label.clone()).collect()))
    }

    /// Representation ring, labels in catalog order.
    pub fn fusion_ring(&self) -> Result<TableRing, CqgError> {
        Ok(rep_ring_from_character_table(format!("{}dual", self.name.to_lowercase()), &self.character_table())?)
    }

    /// `⟨χ_v χ_w, χ_u⟩` evaluated over group elements, rounded.
    pub fn multiplicity(&self, u: usize, v: usize, w: usize) -> usize {
        let n = self.group.len();
        let sum: C64 = (0..n)
            .map(|g| self.irreps[v].trace(g) * self.irreps[w].trace(g) * self.irreps[u].trace(g).conj())
            .sum();
        (sum.re / n as f64).round().max(0.0) as usize
    }

    /// Largest deviation of `(1/|G|) Σ_g u(g)_{ij} conj(v(g)_{kl})` from
    /// `δ_{uv} δ_{ik} δ_{jl} / dim(u)`.
    pub fn schur_orthogonality_residual(&self) -> f64 {
        let n = self.group.len() as f64;
        let mut worst: f64 = 0.0;
        for (a, u) in self.irreps.iter().enumerate() {
            for (b, v) in self.irreps.iter().enumerate() {
                for i in 0..u.dim {
                    for j in 0..u.dim {
                        for k in 0..v.dim {
                            for l in 0..v.dim {
                                let s: C64 = u
                                    .matrices
                                    .iter()
                                    .zip(&v.matrices)
                                    .map(|(x, y)| x[(i, j)] * y[(k, l)].conj())
                                    .sum::<C64>()
                                    / c(n, 0.0);
                                let expected = if a == b && i == k && j == l { 1.0 / u.dim as f64 } else { 0.0 };
                                worst = worst.max((s - c(expected, 0.0)).norm());
                            }
                        }
                    }
                }
            }
        }
        worst
    }

    fn triple_names(&self, u: usize, v: usize, w: usize) -> (String, String, String) {
        (
            self.irreps[u].label.clone(),
            self.irreps[v].label.clone(),
            self.irreps[w].label.clone(),
        )
    }
}

fn triple_seed(seed: u64, u: usize, v: usize, w: usize) -> u64 {
    seed ^ ((u as u64) << 40 | (v as u64) << 20 | w as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)
}

/// Isometries `T_1, …, T_m` spanning `Mor(u, v ⊗ w)` with `T_i* T_j = δ_ij`.
/// The count must equal the character multiplicity.
pub fn intertwiner_basis(
    catalog: &RepCatalog,
    u: usize,
    v: usize,
    w: usize,
    seed: u64,
) -> Result<Vec<Intertwiner>, CqgError> {
    let irreps = catalog.irreps();
    let vw = tensor_rep(&irreps[v], &irreps[w])?;
    let mut rng = ChaCha8Rng::seed_from_u64(triple_seed(seed, u, v, w));
    let basis = mor_basis(&vw.matrices, &irreps[u].matrices, &mut rng);
    let (nu, nv, nw) = catalog.triple_names(u, v, w);
    let expected = catalog.multiplicity(u, v, w);
    if basis.len() != expected {
        return Err(CqgError::CountMismatch {
            u: nu,
            v: nv,
            w: nw,
            found: basis.len(),
            expected,
        });
    }
    let fail = |what, residual| CqgError::Intertwiner {
        u: nu.clone(),
        v: nv.clone(),
        w: nw.clone(),
        what,
        residual,
    };
    for (i, s) in basis.iter().enumerate() {
        for (g, ug) in irreps[u].matrices.iter().enumerate() {
            let r = op_norm(&(&vw.matrices[g] * s - s * ug));
            if r > CONSTRUCTION_TOL {
                return Err(fail("intertwining", r));
            }
        }
        for (j, t) in basis.iter().enumerate() {
            let target = if i == j { identity(irreps[u].dim) } else { zeros(irreps[u].dim, irreps[u].dim) };
            let r = op_norm(&(s.adjoint() * t - target));
            if r > CONSTRUCTION_TOL {
                return Err(fail("orthonormality", r));
            }
        }
    }
    Ok(basis
        .into_iter()
        .map(|matrix| Intertwiner {
            source: u,
            target: (v, w),
            matrix,
        })
        .collect())
}

/// `‖(1 ⊗ s*)(t ⊗ 1) − 1‖` and `‖(s* ⊗ 1)(1 ⊗ t) − 1‖` for `t ∈ H_u ⊗ H_c`,
/// `s ∈ H_c ⊗ H_u`.
pub fn conjugate_equation_residuals(t: &CVector, s: &CVector, du: usize, dc: usize) -> (f64, f64) {
    let tm = CMatrix::from_column_slice(t.len(), 1, t.as_slice());
    let sm = CMatrix::from_column_slice(s.len(), 1, s.as_slice());
    let first = kron(&identity(du), &sm.adjoint()) * kron(&tm, &identity(du));
    let second = kron(&sm.adjoint(), &identity(dc)) * kron(&identity(dc), &tm);
    (
        op_norm(&(first - identity(du))),
        op_norm(&(second - identity(dc))),
    )
}

/// `‖(j(A) ⊗ 1) t − (1 ⊗ A) t‖`.
pub fn eq_j_residual(t: &CVector, ja: &CMatrix, a: &CMatrix) -> f64 {
    let (du, dc) = (ja.nrows(), a.nrows());
    let lhs = kron(ja, &identity(dc)) * t;
    let rhs = kron(&identity(du), a) * t;
    vec_norm(&(lhs - rhs))
}

/// Precomputed quantum data for the dual of a finite group.
#[derive(Debug, Clone)]
pub struct FiniteDualModel {
    catalog: RepCatalog,
    ring: TableRing,
    mor: HashMap<(usize, usize, usize), Vec<CMatrix>>,
    t: Vec<CVector>,
    tau: Vec<CMatrix>,
    rho: Vec<CMatrix>,
    seed: u64,
}

impl FiniteDualModel {
    pub fn new(catalog: RepCatalog, seed: u64) -> Result<Self, CqgError> {
        let ring = catalog.fusion_ring()?;
        let n = catalog.len();
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|u| (0..n).flat_map(move |v| (0..n).map(move |w| (u, v, w))))
            .collect();
        let bases = triples
            .par_iter()
            .map(|&(u, v, w)| intertwiner_basis(&catalog, u, v, w, seed).map(|b| ((u, v, w), b)))
            .collect::<Result<Vec<_>, _>>()?;
        let mut mor = HashMap::new();
        for (key, basis) in bases {
            let expected = ring.multiplicity(&key.0, &key.1, &key.2)? as usize;
            if basis.len() != expected {
                let (u, v, w) = catalog.triple_names(key.0, key.1, key.2);
                return Err(CqgError::CountMismatch {
                    u,
                    v,
                    w,
                    found: basis.len(),
                    expected,
                });
            }
            mor.insert(key, basis.into_iter().map(|i| i.matrix).collect());
        }
        let triv = ring.trivial();
        let mut t = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        let mut rho = Vec::with_capacity(n);
        for v in 0..n {
            let cv = ring.conj(&v)?;
            let dv = catalog.irreps[v].dim;
            let label = catalog.irreps[v].label.clone();
            let basis: &Vec<CMatrix> = &mor[&(triv, v, cv)];
            if basis.len() != 1 {
                return Err(CqgError::Conjugate {
                    label,
                    what: "dim Mor(1, v⊗conj v) != 1",
                    residual: basis.len() as f64,
                });
            }
            let mut tv = matrix_as_vector(&basis[0]) * c((dv as f64).sqrt(), 0.0);
            if let Some(z) = tv.iter().find(|z| z.norm() > 1e-8).copied() {
                tv *= z.conj() / c(z.norm(), 0.0);
            }
            let tm = vector_as_matrix(&tv, dv, dv);
            let m = &tm * tm.adjoint();
            let inv = m.clone().try_inverse().ok_or_else(|| CqgError::Conjugate {
                label: label.clone(),
                what: "t_v is degenerate",
                residual: 0.0,
            })?;
            let lambda = (inv.trace().re / m.trace().re).sqrt();
            let r = m * c(lambda, 0.0);
            let kac = op_norm(&(&r - identity(dv)));
            if kac > CONSTRUCTION_TOL {
                return Err(CqgError::Conjugate {
                    label,
                    what: "Kac check rho = 1",
                    residual: kac,
                });
            }
            let sv = flip_vector(&tv, dv, dv);
            let (r1, r2) = conjugate_equation_residuals(&tv, &sv, dv, dv);
            if r1.max(r2) > CONSTRUCTION_TOL {
                return Err(CqgError::Conjugate {
                    label,
                    what: "conjugate equations",
                    residual: r1.max(r2),
                });
            }
            t.push(tv);
            tau.push(tm);
            rho.push(r);
        }
        let mut catalog = catalog;
        for (rep, r) in catalog.irreps.iter_mut().zip(&rho) {
            rep.rho = r.clone();
        }
        Ok(FiniteDualModel {
            catalog,
            ring,
            mor,
            t,
            tau,
            rho,
            seed,
        })
    }

    pub fn builtin(name: &str) -> Result<Self, CqgError> {
        FiniteDualModel::new(builtin_catalog(name)?, DEFAULT_SEED)
    }

    pub fn catalog(&self) -> &RepCatalog {
        &self.catalog
    }

    pub fn table(&self) -> &TableRing {
        &self.ring
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mor(&self, u: usize, v: usize, w: usize) -> &[CMatrix] {
        self.mor.get(&(u, v, w)).map_or(&[], Vec::as_slice)
    }

    /// `t_v ∈ H_v ⊗ H_{conj v}`, `‖t_v‖ = √dim(v)`, phase fixed so that its
    /// first nonzero coordinate is positive.
    pub fn t(&self, v: usize) -> &CVector {
        &self.t[v]
    }

    /// `s_v ∈ H_{conj v} ⊗ H_v`, the leg flip of `t_v`.
    pub fn s(&self, v: usize) -> CVector {
        let d = self.catalog.irreps[v].dim;
        flip_vector(&self.t[v], d, d)
    }

    /// Coefficient matrix `τ` of `t_v = Σ τ_ij e_i ⊗ f_j`; unitary in the
    /// Kac case, and the identity when the catalog realizes `conj(v)` by the
    /// entrywise conjugate matrices.
    pub fn tau(&self, v: usize) -> &CMatrix {
        &self.tau[v]
    }

    pub fn rho(&self, v: usize) -> &CMatrix {
        &self.rho[v]
    }

    /// `j(A) = τ Aᵀ τ*` for `A ∈ B(H_{conj v})`, the unique map with
    /// `(j(A) ⊗ 1) t_v = (1 ⊗ A) t_v`.
    pub fn j(&self, v: usize, a: &CMatrix) -> Result<CMatrix, CqgError> {
        let d = self.catalog.irreps[v].dim;
        if a.nrows() != d || a.ncols() != d {
            return Err(CqgError::Dimension(format!(
                "j for {} expects {d}x{d}, got {}x{}",
                self.catalog.irreps[v].label,
                a.nrows(),
                a.ncols()
            )));
        }
        let tau = &self.tau[v];
        Ok(tau * a.transpose() * tau.adjoint())
    }

    /// `‖Σ_{u, T ∈ Mor(u, v⊗w)} T T* − 1‖`.
    pub fn completeness_residual(&self, v: usize, w: usize) -> f64 {
        let d = self.catalog.irreps[v].dim * self.catalog.irreps[w].dim;
        let mut acc = zeros(d, d);
        for u in 0..self.catalog.len() {
            for t in self.mor(u, v, w) {
                acc += t * t.adjoint();
            }
        }
        op_norm(&(acc - identity(d)))
    }

    /// Character-theoretic multiplicities as stored in the ring.
    pub fn fusion(&self, u: usize, v: usize) -> Multiset<usize> {
        self.ring.fuse(&u, &v).unwrap_or_default()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn s3_std_squared_has_character_4_0_1() {
        let cat = builtin_catalog("S3").unwrap();
        let std = cat.index_of("std").unwrap();
        let sq = tensor_rep(&cat.irreps()[std], &cat.irreps()[std]).unwrap();
        let values: Vec<f64> = cat.conjugacy_classes().iter().map(|cl| sq.trace(cl[0]).re).collect();
        let mut sorted = values.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (x, y) in sorted.iter().zip([4.0, 1.0, 0.0]) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn s3_std_in_std_squared_once() {
        let cat = builtin_catalog("S3").unwrap();
        let std = cat.index_of("std").unwrap();
        assert_eq!(intertwiner_basis(&cat, std, std, std, 1).unwrap().len(), 1);
    }

    #[test]
    fn unit_intertwiner_is_isometric() {
        let cat = builtin_catalog("Q8").unwrap();
        let triv = cat.index_of("triv").unwrap();
        let std = cat.index_of("std").unwrap();
        let b = intertwiner_basis(&cat, std, triv, std, 3).unwrap();
        assert_eq!(b.len(), 1);
        let t = &b[0].matrix;
        assert!(op_norm(&(t.adjoint() * t - identity(2))) < 1e-12);
    }

    #[test]
    fn t_vectors_have_norm_sqrt_dim() {
        let model = FiniteDualModel::builtin("S3").unwrap();
        for v in 0..3 {
            let d = model.catalog().irreps()[v].dim as f64;
            assert!((vec_norm(model.t(v)) - d.sqrt()).abs() < 1e-12);
        }
        let std = model.catalog().index_of("std").unwrap();
        assert!(op_norm(&(model.tau(std) - identity(2))) < 1e-10);
    }

    #[test]
    fn j_is_an_involutive_isometry_on_q8() {
        let model = FiniteDualModel::builtin("Q8").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let std = model.catalog().index_of("std").unwrap();
        let cs = model.table().conj(&std).unwrap();
        assert_eq!(cs, std);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 2, 2) * c(rng.random_range(0.1..3.0), 0.0);
            let ja = model.j(std, &a).unwrap();
            assert!(eq_j_residual(model.t(std), &ja, &a) < 1e-12);
            assert!((op_norm(&ja) - op_norm(&a)).abs() < 1e-10);
            let jja = model.j(cs, &ja).unwrap();
            assert!(op_norm(&(jja - &a)) < 1e-10);
        }
        assert!(model.j(std, &identity(3)).is_err());
    }

    #[test]
    fn reducible_input_is_rejected() {
        let cat = builtin_catalog("Z/2").unwrap();
        let reps = cat.irreps();
        let sum: Vec<CMatrix> = reps[0]
            .matrices
            .iter()
            .zip(&reps[1].matrices)
            .map(|(a, b)| {
                let mut m = zeros(2, 2);
                m[(0, 0)] = a[(0, 0)];
                m[(1, 1)] = b[(0, 0)];
                m
            })
            .collect();
        let err = RepCatalog::new("bad", cat.group().clone(), vec![MatrixRep::new("sum", 2, sum)]).unwrap_err();
        assert!(matches!(err, CqgError::Reducible { .. }));
        let err = RepCatalog::new("short", cat.group().clone(), vec![reps[0].clone()]).unwrap_err();
        assert!(matches!(err, CqgError::Incomplete { sum: 1, order: 2 }));
    }
}
