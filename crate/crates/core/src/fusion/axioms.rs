use std::collections::{BTreeSet, HashMap};

use super::{FusionError, FusionRules, Multiset};
use crate::report::{CheckOutcome, ValidationReport};

struct FuseCache<'a, R: FusionRules> {
    ring: &'a R,
    memo: HashMap<(R::Label, R::Label), Multiset<R::Label>>,
}

impl<'a, R: FusionRules> FuseCache<'a, R> {
    fn new(ring: &'a R) -> Self {
        FuseCache { ring, memo: HashMap::new() }
    }

    fn fuse(&mut self, u: &R::Label, v: &R::Label) -> Result<Multiset<R::Label>, FusionError> {
        let key = (u.clone(), v.clone());
        if let Some(m) = self.memo.get(&key) {
            return Ok(m.clone());
        }
        let m = self.ring.fuse(u, v)?;
        self.memo.insert(key, m.clone());
        Ok(m)
    }
}

/// Checks the fusion-ring laws on a finite truncation.
///
/// Laws that quantify over fusion products (associativity, Frobenius) follow
/// products outside the truncation when the ring can compute them.
pub fn check_axioms<R: FusionRules>(ring: &R, truncation: &[R::Label]) -> ValidationReport {
    let name = |u: &R::Label| ring.label_name(u);
    let triv = ring.trivial();
    let mut cache = FuseCache::new(ring);

    let mut conj_law = CheckOutcome::new("conjugation");
    conj_law.record(ring.conj(&triv).ok().as_ref() == Some(&triv), || {
        format!("conj({}) != {}", name(&triv), name(&triv))
    });
    for u in truncation {
        let ok = match (ring.conj(u), ring.dim(u)) {
            (Ok(cu), Ok(du)) => {
                ring.conj(&cu).ok().as_ref() == Some(u) && ring.dim(&cu).ok() == Some(du)
            }
            _ => false,
        };
        conj_law.record(ok, || format!("u = {}", name(u)));
    }

    let mut unit = CheckOutcome::new("unit");
    for v in truncation {
        let single = Multiset::singleton(v.clone());
        let left = cache.fuse(&triv, v).ok();
        let right = cache.fuse(v, &triv).ok();
        unit.record(left.as_ref() == Some(&single) && right.as_ref() == Some(&single), || {
            format!("v = {}", name(v))
        });
    }

    let mut conjugate = CheckOutcome::new("conjugate");
    let mut dimension = CheckOutcome::new("dimension");
    let mut frobenius = CheckOutcome::new("frobenius");
    for u in truncation {
        for v in truncation {
            let Ok(uv) = cache.fuse(u, v) else {
                conjugate.record(false, || format!("(u, v) = ({}, {}): fusion undefined", name(u), name(v)));
                continue;
            };
            let expected = u32::from(ring.conj(u).ok().as_ref() == Some(v));
            conjugate.record(uv.mult(&triv) == expected, || {
                format!(
                    "(u, v) = ({}, {}): N^1 = {} but expected {}",
                    name(u),
                    name(v),
                    uv.mult(&triv),
                    expected
                )
            });

            let lhs: Option<usize> = uv
                .iter()
                .map(|(w, m)| ring.dim(w).ok().map(|d| d * m as usize))
                .sum();
            let rhs = ring.dim(u).ok().zip(ring.dim(v).ok()).map(|(a, b)| a * b);
            dimension.record(lhs.is_some() && lhs == rhs, || {
                format!(
                    "(u, v) = ({}, {}): sum dim(w) N^w = {:?} but dim(u) dim(v) = {:?}",
                    name(u),
                    name(v),
                    lhs,
                    rhs
                )
            });

            let ws: BTreeSet<R::Label> = truncation.iter().cloned().chain(uv.support().cloned()).collect();
            for w in &ws {
                let n1 = uv.mult(w);
                let n2 = ring
                    .conj(u)
                    .and_then(|cu| cache.fuse(&cu, w))
                    .map(|m| m.mult(v));
                let n3 = ring
                    .conj(v)
                    .and_then(|cv| cache.fuse(w, &cv))
                    .map(|m| m.mult(u));
                let ok = matches!((&n2, &n3), (Ok(a), Ok(b)) if *a == n1 && *b == n1);
                frobenius.record(ok, || {
                    format!(
                        "(u, v, w) = ({}, {}, {}): N^w_(u,v) = {}, N^v_(conj u,w) = {:?}, N^u_(w,conj v) = {:?}",
                        name(u),
                        name(v),
                        name(w),
                        n1,
                        n2.ok(),
                        n3.ok()
                    )
                });
            }
        }
    }

    let mut assoc = CheckOutcome::new("associativity");
    for u in truncation {
        for v in truncation {
            let Ok(uv) = cache.fuse(u, v) else { continue };
            for y in truncation {
                let Ok(vy) = cache.fuse(v, y) else { continue };
                let mut left = Multiset::new();
                let mut right = Multiset::new();
                let mut ok = true;
                for (x, m) in uv.iter() {
                    match cache.fuse(x, y) {
                        Ok(xy) => left.extend_from(&xy.scaled(m)),
                        Err(_) => ok = false,
                    }
                }
                for (x, m) in vy.iter() {
                    match cache.fuse(u, x) {
                        Ok(ux) => right.extend_from(&ux.scaled(m)),
                        Err(_) => ok = false,
                    }
                }
                assoc.record(ok && left == right, || {
                    format!("(u, v, y) = ({}, {}, {})", name(u), name(v), name(y))
                });
            }
        }
    }

    let mut bound = CheckOutcome::new("dim_bound");
    if let Some(d) = ring.dim_bound() {
        for u in truncation {
            let du = ring.dim(u).unwrap_or(usize::MAX);
            bound.record(du <= d, || format!("dim({}) = {du} > {d}", name(u)));
        }
    }

    ValidationReport {
        checks: vec![conj_law, unit, conjugate, dimension, assoc, frobenius, bound],
    }
}
