//! Agreement of the quantum pipeline with the classical construction on
//! group fusion rings.

use serde::Serialize;

use super::{classical_gf, verify_freeness, FreenessError, QuantumRun};
use crate::fusion::{DiscreteGroup, FusionRules, GroupFusionRing};
use crate::linalg::identity;

#[derive(Debug, Clone, Serialize)]
pub struct CrossMismatch {
    pub w: String,
    pub t: String,
    pub quantum: [f64; 2],
    pub partition_formula: u32,
    pub classical: u32,
}

#[derive(Debug, Clone, Serialize)]
pub struct CrossReport {
    pub group: String,
    pub u: String,
    pub entries_checked: usize,
    pub mismatches: Vec<CrossMismatch>,
    pub quantum_passed: bool,
    pub classical_passed: bool,
    pub passed: bool,
}

/// Runs `X_F` with `c_u = 1` and `g_F` with `v = u`, `K = F` on the same
/// window and compares blockwise for `w ∈ F`:
/// `X_F(w, t) = Σ_i 1_{Y_i}(t) 1_{Y_i}(u⁻¹wt) = g_F(w, t)`, with exact
/// floating-point equality.
pub fn cross_pipeline<G: DiscreteGroup>(
    ring: &GroupFusionRing<G>,
    u: &G::Elem,
    f: &[G::Elem],
    window: &[G::Elem],
) -> Result<(CrossReport, QuantumRun<G::Elem>), FreenessError> {
    let group = ring.group();
    let run = verify_freeness(ring, u, &identity(1), f, window)?;
    let classical = classical_gf(group, u, f, f, window)?;
    let uinv = group.inv(u);
    let color = |x: &G::Elem| run.partition.class_of(x);
    let mut mismatches = Vec::new();
    let mut checked = 0;
    for w in f {
        let shift = group.mul(&uinv, w);
        for t in window {
            checked += 1;
            let q = run.x.block(w, t).map_or(crate::linalg::c(0.0, 0.0), |m| m[(0, 0)]);
            let formula = u32::from(color(t).is_some() && color(t) == color(&group.mul(&shift, t)));
            let g = classical
                .value(f, window, w, t)
                .ok_or_else(|| FreenessError::Internal("classical value missing".into()))?;
            if q.re != f64::from(formula) || q.im != 0.0 || formula != g {
                mismatches.push(CrossMismatch {
                    w: ring.label_name(w),
                    t: ring.label_name(t),
                    quantum: [q.re, q.im],
                    partition_formula: formula,
                    classical: g,
                });
            }
        }
    }
    let report = CrossReport {
        group: group.group_name(),
        u: ring.label_name(u),
        entries_checked: checked,
        quantum_passed: run.report.passed,
        classical_passed: classical.report.passed,
        passed: mismatches.is_empty() && run.report.passed && classical.report.passed,
        mismatches,
    };
    Ok((report, run))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusion::{FiniteGroup, FreeAbelian, FreeGroup};

    #[test]
    fn integers_agree() {
        let z = GroupFusionRing::new(FreeAbelian::new(1));
        let f = vec![vec![-1], vec![0], vec![1], vec![5]];
        let window: Vec<Vec<i64>> = (-20..=20).map(|x| vec![x]).collect();
        let (rep, _) = cross_pipeline(&z, &vec![5], &f, &window).unwrap();
        assert!(rep.passed, "{:?}", rep.mismatches);
        assert_eq!(rep.entries_checked, 4 * 41);
    }

    #[test]
    fn free_group_agrees() {
        let g = FreeGroup::new(2);
        let ring = GroupFusionRing::new(g.clone());
        let u = g.parse_elem("ab").unwrap();
        let f = vec![g.identity(), u.clone(), g.parse_elem("B").unwrap()];
        let (rep, _) = cross_pipeline(&ring, &u, &f, &g.ball(3)).unwrap();
        assert!(rep.passed, "{:?}", rep.mismatches);
    }

    #[test]
    fn cyclic_group_agrees() {
        let ring = GroupFusionRing::new(FiniteGroup::cyclic(6));
        let f = vec![0, 2, 3];
        let (rep, _) = cross_pipeline(&ring, &2, &f, &ring.window(6)).unwrap();
        assert!(rep.passed, "{:?}", rep.mismatches);
    }
}
