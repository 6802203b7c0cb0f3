use std::collections::BTreeSet;

use proptest::prelude::*;
use qfree_core::discrete::{coassoc_check, delta_block, BlockElement};
use qfree_core::freeness::{classical_gf, elementary_decomposition, slot_bound};
use qfree_core::fusion::{DiscreteGroup, FreeAbelian, FreeGroup, FusionRules, GroupFusionRing};
use qfree_core::irr_partition::partition_irr;
use qfree_core::katetov::{partition_multi, partition_single, verify_coloring, verify_functions, MultiFunction, VerifyOptions};
use qfree_core::linalg::{identity, kron, op_norm, seeded_random_matrix, zeros, CMatrix};
use qfree_core::matrix_cqg::FiniteDualModel;

fn random_element(model: &FiniteDualModel, seed: u64) -> BlockElement<usize> {
    let mut a = BlockElement::new();
    for u in 0..model.catalog().len() {
        let d = model.dim(&u).unwrap();
        a.insert(model, u, seeded_random_matrix(seed.wrapping_add(u as u64), d, d)).unwrap();
    }
    a
}

fn word() -> impl Strategy<Value = String> {
    proptest::collection::vec(prop_oneof![Just('a'), Just('A'), Just('b'), Just('B')], 0..8)
        .prop_map(|cs| if cs.is_empty() { "e".to_string() } else { cs.into_iter().collect() })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn multi_colorings_stay_in_palette(
        n in 1usize..5,
        edges in proptest::collection::vec((0u16..300, 0u16..300), 0..900),
    ) {
        // keep only edges that respect both degree bounds
        let mut out = vec![0usize; 300];
        let mut inn = vec![0usize; 300];
        let mut kept = BTreeSet::new();
        for (x, y) in edges {
            if x != y && out[x as usize] < n && inn[y as usize] < n && kept.insert((x, y)) {
                out[x as usize] += 1;
                inn[y as usize] += 1;
            }
        }
        let kept: Vec<(u16, u16)> = kept.into_iter().collect();
        let f = MultiFunction::from_edges((0..250).collect(), &kept, Some((n, n))).unwrap();
        let c = partition_multi(&f).unwrap();
        prop_assert!(c.num_colors() <= 2 * n + 1);
        prop_assert!(verify_coloring(&f, &c, VerifyOptions::default()).is_valid());
    }

    #[test]
    fn single_colorings_use_three_colors(images in proptest::collection::vec(0u32..500, 1..400)) {
        let n = images.len() as u32;
        // shift images off the diagonal
        let g: Vec<u32> = images.iter().enumerate().map(|(i, &y)| if y == i as u32 { y + n } else { y }).collect();
        let map = |x: &u32| g[*x as usize];
        let domain: Vec<u32> = (0..n).collect();
        let c = partition_single(&domain, map).unwrap();
        prop_assert!(c.num_colors() <= 3);
        prop_assert!(verify_functions(&domain, &[&map], &c).is_valid());
    }

    #[test]
    fn free_group_products_associate(x in word(), y in word(), z in word()) {
        let g = FreeGroup::new(2);
        let (x, y, z) = (g.parse_elem(&x).unwrap(), g.parse_elem(&y).unwrap(), g.parse_elem(&z).unwrap());
        prop_assert_eq!(g.mul(&g.mul(&x, &y), &z), g.mul(&x, &g.mul(&y, &z)));
        prop_assert_eq!(g.mul(&x, &g.inv(&x)), g.identity());
        prop_assert_eq!(g.inv(&g.mul(&x, &y)), g.mul(&g.inv(&y), &g.inv(&x)));
    }

    #[test]
    fn comultiplication_is_multiplicative(seed in any::<u64>(), which in 0usize..4) {
        let model = FiniteDualModel::builtin(["S3", "D4", "Q8", "A4"][which]).unwrap();
        let a = random_element(&model, seed);
        let b = random_element(&model, seed ^ 0x9e37);
        let ab = a.mul(&b).unwrap();
        let n = model.catalog().len();
        for w in 0..n {
            for s in 0..n {
                let lhs = delta_block(&model, &ab, &w, &s).unwrap();
                let rhs = delta_block(&model, &a, &w, &s).unwrap() * delta_block(&model, &b, &w, &s).unwrap();
                prop_assert!(op_norm(&(lhs - rhs)) < 1e-10);
            }
            // (ε ⊗ id)Δ(a) = a
            let left = delta_block(&model, &a, &model.trivial(), &w).unwrap();
            prop_assert!(op_norm(&(left - a.block(&w).unwrap())) < 1e-10);
        }
        let triples: Vec<_> = (0..n).flat_map(|w| (0..n).map(move |s| (w, s, (w + s) % n))).collect();
        prop_assert!(coassoc_check(&model, &a, &triples).unwrap() < 1e-10);
    }

    #[test]
    fn decompositions_respect_norm_bounds(seed in any::<u64>(), which in 0usize..4, u in 0usize..5, v in 0usize..5) {
        let model = FiniteDualModel::builtin(["S3", "D4", "Q8", "A4"][which]).unwrap();
        let n = model.catalog().len();
        let (u, v) = (u % n, v % n);
        let du = model.dim(&u).unwrap();
        let c = seeded_random_matrix(seed, du, du);
        let d = elementary_decomposition(&model, &u, &c, &v).unwrap();
        prop_assert!(d.slots.len() <= slot_bound(&model, &u).unwrap());
        let cn = op_norm(&c);
        for s in &d.slots {
            prop_assert!(op_norm(&s.a) <= cn * (1.0 + 1e-9));
            prop_assert!(op_norm(&s.b) <= 1.0 + 1e-9);
        }
        // the slots rebuild Σ_T T c T* on each w ⊂ u ⊗ v
        let cv = model.conj(&v).unwrap();
        let db = model.dim(&cv).unwrap();
        for w in model.fuse(&u, &v).unwrap().support() {
            let dw = model.dim(w).unwrap();
            let mut target = zeros(dw * db, dw * db);
            for t in model.mor(u, *w, cv) {
                target += t * &c * t.adjoint();
            }
            let mut sum: CMatrix = zeros(dw * db, dw * db);
            for s in d.slots.iter().filter(|s| s.w == *w) {
                sum += kron(&s.a, &s.b);
            }
            prop_assert!(op_norm(&(sum - target)) < 1e-10);
        }
    }

    #[test]
    fn integer_partitions_certify(f in proptest::collection::btree_set(-8i64..8, 1..4)) {
        let ring = GroupFusionRing::new(FreeAbelian::new(1));
        let f: Vec<Vec<i64>> = f.into_iter().map(|x| vec![x]).collect();
        let res = partition_irr(&ring, &f, &ring.window(120)).unwrap();
        prop_assert!(res.all_clear());
        prop_assert!(res.classes.len() <= 2 * res.degree_bound + 1);
    }

    #[test]
    fn classical_identity_on_integers(v in -5i64..5, k in proptest::collection::btree_set(-6i64..6, 1..7)) {
        let z = FreeAbelian::new(1);
        let k: Vec<Vec<i64>> = k.into_iter().map(|x| vec![x]).collect();
        let res = classical_gf(&z, &vec![v], &k, &[], &z.window(61)).unwrap();
        prop_assert_eq!(res.report.max_residual, 0);
    }
}

#[test]
fn identity_coefficient_on_trivial_label_has_unit_norm() {
    let model = FiniteDualModel::builtin("Q8").unwrap();
    let d = elementary_decomposition(&model, &model.trivial(), &identity(1), &4).unwrap();
    assert!(d.residual < 1e-12);
    assert!(d.slots.iter().all(|s| s.w == 4));
}
