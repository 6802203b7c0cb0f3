//! Partitions of `Irr(G)` into classes on which the sets `I_{F⊗v}` are
//! pairwise disjoint.
//!
//! The constraint graph is the multivalued map
//! `f(v) = {u : u ⊂ conj(w) ⊗ y ⊗ v for some w, y ∈ F}`; a `(2N+1)`-coloring
//! of it separates any two `v, v'` whose `I_{F⊗v}` and `I_{F⊗v'}` meet.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fusion::{FusionError, FusionRules};
use crate::katetov::{partition_multi, Coloring, KatetovError, MultiFunction};

#[derive(Debug, Error)]
pub enum IrrPartitionError {
    #[error(transparent)]
    Fusion(#[from] FusionError),
    #[error(transparent)]
    Katetov(#[from] KatetovError),
    #[error("irr_partition: F must be nonempty")]
    EmptyF,
    #[error("{0}")]
    Disjointness(Box<DisjointnessWitness>),
}

/// `u ⊂ w ⊗ v` and `u ⊂ y ⊗ v'` for two members `v ≠ v'` of one class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisjointnessWitness {
    pub class: usize,
    pub u: String,
    pub v: String,
    pub v_prime: String,
    pub w: String,
    pub y: String,
}

impl std::fmt::Display for DisjointnessWitness {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let DisjointnessWitness { class, u, v, v_prime, w, y } = self;
        write!(
            f,
            "irr_partition: class {class} is not separating: {u} ⊂ {w}⊗{v} and {u} ⊂ {y}⊗{v_prime}, \
             so {v} ⊂ conj({w})⊗{y}⊗{v_prime}"
        )
    }
}

/// `Z(F) = ⋃_{w,y ∈ F} supp(conj(w) ⊗ y)`.
pub fn z_set<R: FusionRules>(ring: &R, f: &[R::Label]) -> Result<Vec<R::Label>, FusionError> {
    let mut zs = BTreeSet::new();
    for w in f {
        let cw = ring.conj(w)?;
        for y in f {
            zs.extend(ring.fuse(&cw, y)?.support().cloned());
        }
    }
    Ok(zs.into_iter().collect())
}

/// `N = Σ_{z ∈ Z(F)} dim(z)²`, a common bound for `|f(v)|` and `|f⁻¹(v)|`.
pub fn degree_bound<R: FusionRules>(ring: &R, f: &[R::Label]) -> Result<usize, FusionError> {
    z_set(ring, f)?
        .iter()
        .map(|z| ring.dim(z).map(|d| d * d))
        .sum()
}

/// `⋃_{z ∈ zs} supp(z ⊗ v)`.
fn forward_from_z<R: FusionRules>(ring: &R, zs: &[R::Label], v: &R::Label) -> Result<Vec<R::Label>, FusionError> {
    let mut out = BTreeSet::new();
    for z in zs {
        out.extend(ring.fuse(z, v)?.support().cloned());
    }
    Ok(out.into_iter().collect())
}

/// `⋃_{z ∈ zs} supp(conj(z) ⊗ v)`: by Frobenius reciprocity, `u` lies here
/// exactly when `v ⊂ z ⊗ u`.
fn backward_from_z<R: FusionRules>(ring: &R, zs: &[R::Label], v: &R::Label) -> Result<Vec<R::Label>, FusionError> {
    let mut out = BTreeSet::new();
    for z in zs {
        out.extend(ring.fuse(&ring.conj(z)?, v)?.support().cloned());
    }
    Ok(out.into_iter().collect())
}

pub fn forward_image<R: FusionRules>(ring: &R, f: &[R::Label], v: &R::Label) -> Result<Vec<R::Label>, FusionError> {
    forward_from_z(ring, &z_set(ring, f)?, v)
}

pub fn backward_image<R: FusionRules>(ring: &R, f: &[R::Label], v: &R::Label) -> Result<Vec<R::Label>, FusionError> {
    backward_from_z(ring, &z_set(ring, f)?, v)
}

/// The fusion multifunction on `window`, with both degree bounds set to
/// [`degree_bound`].
pub fn build_fusion_multifunction<R: FusionRules>(
    ring: &R,
    f: &[R::Label],
    window: &[R::Label],
) -> Result<MultiFunction<R::Label>, IrrPartitionError> {
    if f.is_empty() {
        return Err(IrrPartitionError::EmptyF);
    }
    for u in f.iter().chain(window) {
        ring.check_label(u)?;
    }
    let zs = z_set(ring, f)?;
    let n = zs.iter().map(|z| ring.dim(z).map(|d| d * d)).sum::<Result<usize, _>>()?;
    let fwd = window
        .par_iter()
        .map(|v| forward_from_z(ring, &zs, v))
        .collect::<Result<Vec<_>, _>>()?;
    let bwd = window
        .par_iter()
        .map(|v| backward_from_z(ring, &zs, v))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiFunction::from_lists(window.to_vec(), fwd, bwd, n, n)?)
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassCertificate {
    pub class: usize,
    pub size: usize,
    pub pairs_checked: usize,
    pub clear: bool,
}

#[derive(Debug, Clone)]
pub struct IrrPartitionResult<L> {
    pub f: Vec<L>,
    pub z_set: Vec<L>,
    pub classes: Vec<Vec<L>>,
    pub coloring: Coloring<L>,
    pub f_used: MultiFunction<L>,
    pub degree_bound: usize,
    pub certificate: Vec<ClassCertificate>,
}

impl<L: crate::katetov::Point> IrrPartitionResult<L> {
    pub fn all_clear(&self) -> bool {
        self.certificate.iter().all(|c| c.clear)
    }

    pub fn class_of(&self, v: &L) -> Option<usize> {
        self.coloring.color(v)
    }
}

/// Checks that the sets `I_{F⊗v}`, `v ∈ class`, are pairwise disjoint. Each
/// `u` is recorded with the first `(v, w)` such that `u ⊂ w ⊗ v`; a second
/// owner `v' ≠ v` is a witness of failure.
pub fn check_class<R: FusionRules>(
    ring: &R,
    f: &[R::Label],
    class_index: usize,
    class: &[R::Label],
) -> Result<ClassCertificate, IrrPartitionError> {
    let mut owner: HashMap<R::Label, (usize, usize)> = HashMap::new();
    for (vi, v) in class.iter().enumerate() {
        for (wi, w) in f.iter().enumerate() {
            for u in ring.fuse(w, v)?.support() {
                match owner.get(u) {
                    Some(&(vj, wj)) if vj != vi => {
                        let name = |l: &R::Label| ring.label_name(l);
                        return Err(IrrPartitionError::Disjointness(Box::new(DisjointnessWitness {
                            class: class_index,
                            u: name(u),
                            v: name(&class[vj]),
                            v_prime: name(v),
                            w: name(&f[wj]),
                            y: name(w),
                        })));
                    }
                    Some(_) => {}
                    None => {
                        owner.insert(u.clone(), (vi, wi));
                    }
                }
            }
        }
    }
    let k = class.len();
    Ok(ClassCertificate {
        class: class_index,
        size: k,
        pairs_checked: k * k.saturating_sub(1) / 2,
        clear: true,
    })
}

/// Colors the fusion multifunction on `window` and certifies every class.
pub fn partition_irr<R: FusionRules>(
    ring: &R,
    f: &[R::Label],
    window: &[R::Label],
) -> Result<IrrPartitionResult<R::Label>, IrrPartitionError> {
    let f_used = build_fusion_multifunction(ring, f, window)?;
    let coloring = partition_multi(&f_used)?;
    let classes = coloring.classes();
    let certificate = classes
        .par_iter()
        .enumerate()
        .map(|(i, class)| check_class(ring, f, i, class))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IrrPartitionResult {
        f: f.to_vec(),
        z_set: z_set(ring, f)?,
        classes,
        coloring,
        degree_bound: f_used.degree_bound(),
        f_used,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{FreeAbelian, GroupFusionRing};

    fn z() -> GroupFusionRing<FreeAbelian> {
        GroupFusionRing::new(FreeAbelian::new(1))
    }

    #[test]
    fn integers_with_f_zero_one() {
        let ring = z();
        let f = vec![vec![0], vec![1]];
        assert_eq!(degree_bound(&ring, &f).unwrap(), 3);
        assert_eq!(forward_image(&ring, &f, &vec![7]).unwrap(), vec![vec![6], vec![7], vec![8]]);
        assert_eq!(backward_image(&ring, &f, &vec![7]).unwrap(), vec![vec![6], vec![7], vec![8]]);
        let window: Vec<Vec<i64>> = (-100..=100).map(|x| vec![x]).collect();
        let res = partition_irr(&ring, &f, &window).unwrap();
        assert!(res.classes.len() <= 7);
        assert!(res.all_clear());
    }

    #[test]
    fn residues_mod_three_separate_integers() {
        let ring = z();
        let f = vec![vec![0], vec![1]];
        for r in 0..3 {
            let class: Vec<Vec<i64>> = (-30..=30).filter(|x: &i64| x.rem_euclid(3) == r).map(|x| vec![x]).collect();
            assert!(check_class(&ring, &f, 0, &class).unwrap().clear);
        }
        let bad = vec![vec![0], vec![1]];
        let err = check_class(&ring, &f, 4, &bad).unwrap_err();
        assert!(matches!(err, IrrPartitionError::Disjointness(ref w) if w.class == 4));
    }

    #[test]
    fn empty_f_is_rejected() {
        let ring = z();
        assert!(matches!(partition_irr(&ring, &[], &[vec![0]]), Err(IrrPartitionError::EmptyF)));
    }
}
