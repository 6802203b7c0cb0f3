//! The classical approximants `g_F = Σ_i Δ(1_{vA_i})(1 ⊗ 1_{A_i})`.

use std::collections::HashSet;
use std::time::Instant;

use serde::Serialize;

use super::FreenessError;
use crate::fusion::DiscreteGroup;
use crate::katetov::{partition_many, verify_functions, Coloring};

type Shift<'a, E> = dyn Fn(&E) -> E + Sync + 'a;

#[derive(Debug, Clone, Serialize)]
pub struct GfMismatch {
    pub s: String,
    pub t: String,
    pub value: u32,
    pub expected: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassicalReport {
    pub group: String,
    pub v: String,
    pub k: Vec<String>,
    /// `F` after adding `K⁻¹v`.
    pub f: Vec<String>,
    pub window: usize,
    pub domain_size: usize,
    pub num_classes: usize,
    pub entries_checked: usize,
    /// `max |g_F(s, t) − 1_{s=v}|`, an integer.
    pub max_residual: u32,
    pub mismatches: Vec<GfMismatch>,
    pub passed: bool,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone)]
pub struct ClassicalResult<E> {
    pub report: ClassicalReport,
    pub f: Vec<E>,
    pub coloring: Coloring<E>,
    /// `g_F(s, t)` for `s ∈ K` (outer) and `t` in the window (inner).
    pub values: Vec<Vec<u32>>,
}

impl<E: crate::katetov::Point> ClassicalResult<E> {
    pub fn value(&self, k: &[E], window: &[E], s: &E, t: &E) -> Option<u32> {
        let i = k.iter().position(|x| x == s)?;
        let j = window.iter().position(|x| x == t)?;
        Some(self.values[i][j])
    }
}

/// Evaluates `g_F(s, t) = Σ_i 1_{s⁻¹vA_i ∩ A_i}(t)` for `s ∈ K`, `t ∈ window`,
/// where `A_i` is a common partition for the maps `x ↦ rx`, `r ∈ F \ {e}`,
/// over the domain `window ∪ v⁻¹K·window`. `F` is first enlarged by `K⁻¹v`.
pub fn classical_gf<G: DiscreteGroup>(
    group: &G,
    v: &G::Elem,
    k: &[G::Elem],
    f: &[G::Elem],
    window: &[G::Elem],
) -> Result<ClassicalResult<G::Elem>, FreenessError> {
    let start = Instant::now();
    for x in k.iter().chain(f).chain(window).chain(std::iter::once(v)) {
        if !group.contains(x) {
            return Err(FreenessError::Input(format!("{:?} is not a group element", x)));
        }
    }
    let e = group.identity();
    let mut f_ext: Vec<G::Elem> = f.to_vec();
    for s in k {
        let r = group.mul(&group.inv(s), v);
        if !f_ext.contains(&r) {
            f_ext.push(r);
        }
    }
    let shifts: Vec<G::Elem> = f_ext.iter().filter(|r| **r != e).cloned().collect();

    let vinv = group.inv(v);
    let mut seen = HashSet::new();
    let mut domain = Vec::new();
    for t in window {
        if seen.insert(t.clone()) {
            domain.push(t.clone());
        }
    }
    for s in k {
        let vs = group.mul(&vinv, s);
        for t in window {
            let x = group.mul(&vs, t);
            if seen.insert(x.clone()) {
                domain.push(x);
            }
        }
    }

    let maps: Vec<Box<Shift<'_, G::Elem>>> = shifts
        .iter()
        .map(|r| Box::new(move |x: &G::Elem| group.mul(r, x)) as Box<Shift<'_, G::Elem>>)
        .collect();
    let refs: Vec<&dyn Fn(&G::Elem) -> G::Elem> = maps.iter().map(|m| m.as_ref() as &dyn Fn(&G::Elem) -> G::Elem).collect();
    let coloring = partition_many(&domain, &refs)?;
    let sync_refs: Vec<&Shift<'_, G::Elem>> = maps.iter().map(|m| m.as_ref()).collect();
    let check = verify_functions(&domain, &sync_refs, &coloring);
    let in_window_violation = check.violations.iter().find(|(_, y)| coloring.color(y).is_some());
    if let Some((x, y)) = in_window_violation {
        return Err(FreenessError::Internal(format!(
            "partition puts {} and {} in one class",
            group.elem_name(x),
            group.elem_name(y)
        )));
    }

    let mut values = Vec::with_capacity(k.len());
    let mut mismatches = Vec::new();
    let mut max_residual = 0;
    for s in k {
        let vs = group.mul(&vinv, s);
        let expected = u32::from(s == v);
        let row: Vec<u32> = window
            .iter()
            .map(|t| {
                let x = group.mul(&vs, t);
                u32::from(coloring.color(t).is_some() && coloring.color(t) == coloring.color(&x))
            })
            .collect();
        for (t, &g) in window.iter().zip(&row) {
            let r = g.abs_diff(expected);
            max_residual = max_residual.max(r);
            if r != 0 && mismatches.len() < 20 {
                mismatches.push(GfMismatch {
                    s: group.elem_name(s),
                    t: group.elem_name(t),
                    value: g,
                    expected,
                });
            }
        }
        values.push(row);
    }
    let names = |xs: &[G::Elem]| xs.iter().map(|x| group.elem_name(x)).collect::<Vec<_>>();
    let report = ClassicalReport {
        group: group.group_name(),
        v: group.elem_name(v),
        k: names(k),
        f: names(&f_ext),
        window: window.len(),
        domain_size: domain.len(),
        num_classes: coloring.num_colors(),
        entries_checked: k.len() * window.len(),
        max_residual,
        passed: max_residual == 0,
        mismatches,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    Ok(ClassicalResult {
        report,
        f: f_ext,
        coloring,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{FiniteGroup, FreeAbelian, FreeGroup};

    #[test]
    fn integers_at_zero() {
        let z = FreeAbelian::new(1);
        let k = vec![vec![-1], vec![0], vec![1]];
        let window: Vec<Vec<i64>> = (-50..=50).map(|x| vec![x]).collect();
        let res = classical_gf(&z, &vec![0], &k, &[], &window).unwrap();
        assert!(res.report.passed);
        for t in &window {
            assert_eq!(res.value(&k, &window, &vec![0], t), Some(1));
            assert_eq!(res.value(&k, &window, &vec![1], t), Some(0));
        }
    }

    #[test]
    fn trivial_group_gives_one() {
        let g = FiniteGroup::cyclic(1);
        let res = classical_gf(&g, &0, &[0], &[], &[0]).unwrap();
        assert_eq!(res.values, vec![vec![1]]);
    }

    #[test]
    fn free_group_ball() {
        let f2 = FreeGroup::new(2);
        let a = f2.parse_elem("a").unwrap();
        let k = f2.ball(2);
        let window = f2.ball(3);
        let res = classical_gf(&f2, &a, &k, &[], &window).unwrap();
        assert!(res.report.passed, "{:?}", res.report.mismatches);
    }
}
