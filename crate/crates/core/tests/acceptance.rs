//! End-to-end acceptance suite. Each test writes one `criterion N: PASS|FAIL`
//! line to stderr (bypassing output capture) and asserts its own result.

use std::collections::{BTreeSet, HashSet};
use std::io::Write;
use std::time::{Duration, Instant};

use qfree_core::discrete::QuantumModel;
use qfree_core::freeness::{classical_gf, cross_pipeline, verify_freeness, FreenessReport};
use qfree_core::fusion::{
    check_axioms, rep_ring_from_character_table, CharacterTable, DiscreteGroup, FiniteGroup, FreeAbelian,
    FreeGroup, FusionRules, GroupFusionRing,
};
use qfree_core::irr_partition::partition_irr;
use qfree_core::katetov::{partition_multi, partition_single, verify_coloring, verify_functions, MultiFunction, VerifyOptions};
use qfree_core::linalg::{identity, op_norm, seeded_random_matrix, vec_norm, zeros, CMatrix};
use qfree_core::matrix_cqg::{builtin_catalog, conjugate_equation_residuals, eq_j_residual, FiniteDualModel};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CATALOG: [&str; 4] = ["S3", "D4", "Q8", "A4"];

fn announce(n: usize, title: &str, passed: bool, detail: &str, elapsed: Duration) {
    let _ = writeln!(
        std::io::stderr(),
        "criterion {n}: {} {title} ({detail}; {:.2} s)",
        if passed { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
}

fn subsets<T: Clone>(pool: &[T], max: usize) -> Vec<Vec<T>> {
    let mut out: Vec<Vec<T>> = vec![Vec::new()];
    for x in pool {
        let grown: Vec<Vec<T>> = out
            .iter()
            .filter(|s| s.len() < max)
            .map(|s| {
                let mut t = s.clone();
                t.push(x.clone());
                t
            })
            .collect();
        out.extend(grown);
    }
    out.retain(|s| !s.is_empty());
    out
}

fn catalog_group(name: &str) -> FiniteGroup {
    builtin_catalog(name).unwrap().group().clone()
}

#[test]
fn criterion_1_katetov_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut failures = Vec::new();
    let mut largest = 0;
    for trial in 0..200 {
        let n = rng.random_range(1..=6usize);
        let size = if trial % 20 == 0 {
            100_000
        } else {
            (10f64.powf(rng.random_range(1.0..5.0))) as usize
        };
        largest = largest.max(size);
        // a union of k ≤ N random injections has in- and out-degree ≤ N
        let k = rng.random_range(1..=n);
        let mut edges: Vec<(u32, u32)> = Vec::new();
        for _ in 0..k {
            let mut perm: Vec<u32> = (0..size as u32 + size as u32 / 10).collect();
            perm.shuffle(&mut rng);
            for x in 0..size as u32 {
                let y = perm[x as usize];
                if y != x && rng.random_bool(0.9) {
                    edges.push((x, y));
                }
            }
        }
        let f = MultiFunction::from_edges((0..size as u32).collect(), &edges, Some((n, n))).unwrap();
        let coloring = partition_multi(&f).unwrap();
        let report = verify_coloring(&f, &coloring, VerifyOptions::default());
        if coloring.num_colors() > 2 * n + 1 || !report.is_valid() {
            failures.push(format!("multi trial {trial}: N={n}, colors {}", coloring.num_colors()));
        }
    }
    for trial in 0..50 {
        let size = rng.random_range(1..20_000u64);
        let g: Vec<u64> = match trial % 3 {
            // a permutation without fixed points
            0 => {
                let mut p: Vec<u64> = (0..size).collect();
                p.shuffle(&mut rng);
                let mut g = vec![0; size as usize];
                for i in 0..size as usize {
                    g[p[i] as usize] = p[(i + 1) % size as usize];
                }
                if size == 1 {
                    vec![1]
                } else {
                    g
                }
            }
            // arbitrary map, images possibly outside the domain
            _ => (0..size)
                .map(|x| loop {
                    let y = rng.random_range(0..size + size / 5 + 1);
                    if y != x {
                        break y;
                    }
                })
                .collect(),
        };
        let map = |x: &u64| g[*x as usize];
        let domain: Vec<u64> = (0..size).collect();
        let coloring = partition_single(&domain, map).unwrap();
        let report = verify_functions(&domain, &[&map], &coloring);
        if coloring.num_colors() > 3 || !report.is_valid() {
            failures.push(format!("single trial {trial}: colors {}", coloring.num_colors()));
        }
    }
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(30);
    announce(
        1,
        "Katetov suite",
        passed,
        &format!("200 multi + 50 single, largest domain {largest}, {} failures", failures.len()),
        elapsed,
    );
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}");
}

#[test]
fn criterion_2_fusion_axioms() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checks = 0;
    let mut run = |name: String, report: qfree_core::report::ValidationReport| {
        checks += report.checks.iter().map(|c| c.checked).sum::<usize>();
        if let Some(c) = report.first_failure() {
            failures.push(format!("{name}: {} {:?}", c.name, c.counterexamples));
        }
    };
    for name in CATALOG {
        let cat = builtin_catalog(name).unwrap();
        let ring = cat.fusion_ring().unwrap();
        run(format!("{name} characters"), check_axioms(&ring, &ring.window(ring.len())));
        let model = FiniteDualModel::new(cat, 11).unwrap();
        run(format!("{name} dual"), check_axioms(&model, &model.window(model.catalog().len())));
        let group = GroupFusionRing::new(model.catalog().group().clone());
        run(format!("{name} group ring"), check_axioms(&group, &group.window(64)));
    }
    for file in ["s3_chars.json", "q8_chars.json"] {
        let text = std::fs::read_to_string(format!("{}/tests/data/{file}", env!("CARGO_MANIFEST_DIR"))).unwrap();
        let ring = rep_ring_from_character_table(file, &CharacterTable::from_json(&text).unwrap()).unwrap();
        run(file.to_string(), check_axioms(&ring, &ring.window(ring.len())));
    }
    let z = GroupFusionRing::new(FreeAbelian::new(1));
    run("Z".into(), check_axioms(&z, &z.window(41)));
    let z2 = GroupFusionRing::new(FreeAbelian::new(2));
    run("Z^2".into(), check_axioms(&z2, &z2.window(25)));
    let f2 = GroupFusionRing::new(FreeGroup::new(2));
    run("F2".into(), check_axioms(&f2, &FreeGroup::new(2).ball(2)));
    let elapsed = start.elapsed();
    announce(2, "fusion axioms", failures.is_empty(), &format!("{checks} law instances"), elapsed);
    assert!(failures.is_empty(), "{failures:?}");
}

/// Pairwise disjointness of `supp(F ⊗ v)` within each class, by brute force.
fn disjoint_by_brute_force<R: FusionRules>(ring: &R, f: &[R::Label], classes: &[Vec<R::Label>]) -> bool {
    classes.iter().all(|class| {
        let sets: Vec<BTreeSet<R::Label>> = class
            .iter()
            .map(|v| ring.fuse_set(f, v).unwrap().support().cloned().collect())
            .collect();
        (0..sets.len()).all(|i| (i + 1..sets.len()).all(|j| sets[i].is_disjoint(&sets[j])))
    })
}

fn certify_all<R: FusionRules>(ring: &R, pool: &[R::Label], window: &[R::Label]) -> (usize, Vec<String>) {
    let mut failures = Vec::new();
    let grid = subsets(pool, 3);
    for f in &grid {
        match partition_irr(ring, f, window) {
            Ok(res) => {
                let ok = res.all_clear()
                    && res.classes.len() <= 2 * res.degree_bound + 1
                    && res.classes.iter().map(Vec::len).sum::<usize>() == window.len()
                    && disjoint_by_brute_force(ring, f, &res.classes);
                if !ok {
                    failures.push(format!("{} F={f:?}", ring.ring_name()));
                }
            }
            Err(e) => failures.push(format!("{} F={f:?}: {e}", ring.ring_name())),
        }
    }
    (grid.len(), failures)
}

#[test]
fn criterion_3_irr_partition_certificates() {
    let start = Instant::now();
    let mut total = 0;
    let mut failures = Vec::new();
    let mut add = |(n, f): (usize, Vec<String>)| {
        total += n;
        failures.extend(f);
    };
    for name in CATALOG {
        let model = FiniteDualModel::builtin(name).unwrap();
        let all = model.window(model.catalog().len());
        add(certify_all(&model, &all, &all));
        let group = GroupFusionRing::new(model.catalog().group().clone());
        let elems = group.window(64);
        add(certify_all(&group, &elems[..elems.len().min(6)], &elems));
    }
    let z = GroupFusionRing::new(FreeAbelian::new(1));
    add(certify_all(&z, &z.window(9), &z.window(200)));
    let z2 = GroupFusionRing::new(FreeAbelian::new(2));
    add(certify_all(&z2, &z2.window(9), &z2.window(196)));
    let f2 = GroupFusionRing::new(FreeGroup::new(2));
    add(certify_all(&f2, &f2.window(9), &f2.window(200)));
    let elapsed = start.elapsed();
    let passed = failures.is_empty() && elapsed < Duration::from_secs(60);
    announce(3, "irr partition certificates", passed, &format!("{total} choices of F"), elapsed);
    assert!(failures.is_empty(), "{failures:?}");
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
}

/// `⟨χ_v χ_w, χ_u⟩` from the representation matrices.
fn character_multiplicity(model: &FiniteDualModel, u: usize, v: usize, w: usize) -> usize {
    let irreps = model.catalog().irreps();
    let order = irreps[0].matrices.len();
    let total: f64 = (0..order)
        .map(|g| (irreps[v].trace(g) * irreps[w].trace(g) * irreps[u].trace(g).conj()).re)
        .sum();
    (total / order as f64).round() as usize
}

#[test]
fn criterion_4_representation_layer() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for name in CATALOG.iter().copied().chain(["Z/5"]) {
        let model = FiniteDualModel::builtin(name).unwrap();
        let n = model.catalog().len();
        for v in 0..n {
            let dv = model.dim(&v).unwrap();
            let cv = model.conj(&v).unwrap();
            let dc = model.dim(&cv).unwrap();
            let (r1, r2) = conjugate_equation_residuals(model.t(v), &model.s(v), dv, dc);
            let a = qfree_core::linalg::random_matrix(&mut rng, dc, dc);
            let rj = eq_j_residual(model.t(v), &model.j(v, &a).unwrap(), &a);
            let rho = op_norm(&(model.rho(v) - identity(dv)));
            let tn = (vec_norm(model.t(v)) - (dv as f64).sqrt()).abs();
            for (what, r) in [("conjugate", r1), ("conjugate'", r2), ("j", rj), ("rho", rho), ("‖t‖", tn)] {
                worst = worst.max(r);
                if r > 1e-10 {
                    failures.push(format!("{name}/{v}: {what} residual {r:.2e}"));
                }
            }
            for w in 0..n {
                let rc = model.completeness_residual(v, w);
                worst = worst.max(rc);
                if rc > 1e-10 {
                    failures.push(format!("{name}: completeness at ({v}, {w}) {rc:.2e}"));
                }
                for u in 0..n {
                    let expected = character_multiplicity(&model, u, v, w);
                    let basis = model.mor(u, v, w);
                    if basis.len() != expected {
                        failures.push(format!("{name}: |Mor({u}, {v}⊗{w})| = {} ≠ {expected}", basis.len()));
                    }
                    // isometries with mutually orthogonal ranges
                    for (i, s) in basis.iter().enumerate() {
                        for (k, t) in basis.iter().enumerate() {
                            let target = if i == k { identity(s.ncols()) } else { zeros(s.ncols(), s.ncols()) };
                            let r = op_norm(&(s.adjoint() * t - target));
                            worst = worst.max(r);
                            if r > 1e-10 {
                                failures.push(format!("{name}: Mor({u}, {v}⊗{w}) not orthonormal"));
                            }
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    announce(
        4,
        "representation-layer identities",
        failures.is_empty(),
        &format!("worst residual {worst:.2e}"),
        elapsed,
    );
    assert!(failures.is_empty(), "{failures:?}");
}

/// `g_F(s, t) = Σ_i 1_{A_i}(t) 1_{A_i}(v⁻¹st)` recomputed from the classes.
fn classical_case<G: DiscreteGroup>(
    group: &G,
    v: &G::Elem,
    k: &[G::Elem],
    extra: &[G::Elem],
    window: &[G::Elem],
) -> Result<usize, String> {
    let res = classical_gf(group, v, k, extra, window).map_err(|e| e.to_string())?;
    let classes: Vec<HashSet<G::Elem>> = res.coloring.classes().into_iter().map(|c| c.into_iter().collect()).collect();
    let vinv = group.inv(v);
    for s in k {
        if !res.f.contains(&group.mul(&group.inv(s), v)) {
            return Err(format!("F does not contain K⁻¹v at {}", group.elem_name(s)));
        }
        for t in window {
            let x = group.mul(&group.mul(&vinv, s), t);
            let g: u32 = classes.iter().map(|c| u32::from(c.contains(t) && c.contains(&x))).sum();
            let expected = u32::from(s == v);
            if g != expected || res.value(k, window, s, t) != Some(g) {
                return Err(format!(
                    "{}: g_F({}, {}) = {g}, expected {expected}",
                    group.group_name(),
                    group.elem_name(s),
                    group.elem_name(t)
                ));
            }
        }
    }
    Ok(k.len() * window.len())
}

fn classical_grid<G: DiscreteGroup>(
    group: &G,
    vs: &[G::Elem],
    pool: &[G::Elem],
    window: &[G::Elem],
    rng: &mut ChaCha8Rng,
) -> (usize, Vec<String>) {
    let mut entries = 0;
    let mut failures = Vec::new();
    for v in vs {
        for trial in 0..6 {
            let size = rng.random_range(1..=7usize.min(pool.len()));
            let mut k: Vec<G::Elem> = pool.choose_multiple(rng, size).cloned().collect();
            if trial % 2 == 0 && !k.contains(v) {
                k[0] = v.clone();
            }
            let extra: Vec<G::Elem> = pool.choose_multiple(rng, trial % 3).cloned().collect();
            match classical_case(group, v, &k, &extra, window) {
                Ok(n) => entries += n,
                Err(e) => failures.push(e),
            }
        }
    }
    (entries, failures)
}

#[test]
fn criterion_5_classical_identity() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut entries = 0;
    let mut failures = Vec::new();
    let mut add = |(n, f): (usize, Vec<String>)| {
        entries += n;
        failures.extend(f);
    };
    let z = FreeAbelian::new(1);
    let zv: Vec<_> = ["0", "3", "-2"].iter().map(|s| z.parse_elem(s).unwrap()).collect();
    add(classical_grid(&z, &zv, &z.window(15), &z.window(201), &mut rng));
    let z2 = FreeAbelian::new(2);
    let z2v: Vec<_> = ["(0,0)", "(1,0)", "(2,-1)"].iter().map(|s| z2.parse_elem(s).unwrap()).collect();
    add(classical_grid(&z2, &z2v, &z2.window(25), &z2.window(121), &mut rng));
    let f2 = FreeGroup::new(2);
    let f2v: Vec<_> = ["e", "a", "ab", "Ba"].iter().map(|s| f2.parse_elem(s).unwrap()).collect();
    add(classical_grid(&f2, &f2v, &f2.ball(2), &f2.ball(4), &mut rng));
    let s3 = catalog_group("S3");
    let all = s3.window(6);
    add(classical_grid(&s3, &all, &all, &all, &mut rng));
    let elapsed = start.elapsed();
    announce(5, "classical identity", failures.is_empty(), &format!("{entries} entries, zero residual"), elapsed);
    assert!(failures.is_empty(), "{failures:?}");
}

struct Grid {
    runs: usize,
    worst_residual: f64,
    worst_decomp: f64,
    worst_collapse: f64,
    max_norm: f64,
    max_degree: usize,
    max_slots: usize,
    norms: Vec<(f64, f64)>,
    failures: Vec<String>,
}

impl Grid {
    fn new() -> Self {
        Grid {
            runs: 0,
            worst_residual: 0.0,
            worst_decomp: 0.0,
            worst_collapse: 0.0,
            max_norm: 0.0,
            max_degree: 0,
            max_slots: 0,
            norms: Vec::new(),
            failures: Vec::new(),
        }
    }

    fn record(&mut self, what: String, r: &FreenessReport, full: bool) {
        self.runs += 1;
        let sc = &r.scalar_collapse;
        let collapse = sc.max_nontrivial.max(sc.trivial_alignment).max(sc.lambda_residual);
        self.worst_residual = self.worst_residual.max(r.residual);
        self.worst_decomp = self.worst_decomp.max(r.decomp_residual);
        self.worst_collapse = self.worst_collapse.max(collapse);
        self.max_degree = self.max_degree.max(r.degree_bound);
        self.max_slots = self.max_slots.max(r.n_slots);
        self.max_norm = self.max_norm.max(r.norm_observed);
        self.norms.push((r.norm_observed, r.c_u_norm));
        let limit = if full { 1e-10 } else { 1e-9 };
        if !r.passed || r.residual > limit || r.decomp_residual > 1e-10 || collapse > 1e-10 {
            self.failures.push(format!("{what}: residual {:.2e}, decomp {:.2e}", r.residual, r.decomp_residual));
        }
    }
}

fn quantum_runs<M: QuantumModel>(grid: &mut Grid, model: &M, us: &[M::Label], fs: &[Vec<M::Label>], window: &[M::Label], seed: u64) {
    let all: BTreeSet<M::Label> = window.iter().cloned().collect();
    for u in us {
        let du = model.dim(u).unwrap();
        let coefficients = [identity(du), seeded_random_matrix(seed, du, du)];
        for f in fs.iter().filter(|f| f.contains(u)) {
            let full = f.iter().cloned().collect::<BTreeSet<_>>() == all;
            for (ci, c) in coefficients.iter().enumerate() {
                let what = format!("{} u={} F={:?} c#{ci}", model.ring_name(), model.label_name(u), f);
                match verify_freeness(model, u, c, f, window) {
                    Ok(run) => grid.record(what, &run.report, full && model.label_count().is_some()),
                    Err(e) => grid.failures.push(format!("{what}: {e}")),
                }
            }
        }
    }
}

#[test]
fn criterion_6_main_identity() {
    let start = Instant::now();
    let mut grid = Grid::new();
    for name in CATALOG {
        let model = FiniteDualModel::builtin(name).unwrap();
        let all = model.window(model.catalog().len());
        let fs = subsets(&all, all.len());
        quantum_runs(&mut grid, &model, &all, &fs, &all, 6);
    }
    let z = GroupFusionRing::new(FreeAbelian::new(1));
    let pool: Vec<_> = (-6..=6).map(|x| vec![x]).collect();
    let us: Vec<_> = [0, 1, -3, 5].iter().map(|&x| vec![x]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut fs: Vec<Vec<Vec<i64>>> = Vec::new();
    for u in &us {
        for _ in 0..30 {
            let size = rng.random_range(0..=3);
            let mut f: Vec<Vec<i64>> = pool.choose_multiple(&mut rng, size).cloned().collect();
            if !f.contains(u) {
                f.push(u.clone());
            }
            fs.push(f);
        }
    }
    let window: Vec<_> = (-30..=30).map(|x| vec![x]).collect();
    quantum_runs(&mut grid, &z, &us, &fs, &window, 6);
    // the net (X_F) is bounded uniformly over the grid
    let bound = (2 * grid.max_degree + 1) as f64 * grid.max_slots as f64;
    for &(norm, c) in &grid.norms {
        if norm > bound * c * (1.0 + 1e-12) {
            grid.failures.push(format!("‖X_F‖ = {norm} exceeds {bound} · {c}"));
        }
    }
    let elapsed = start.elapsed();
    let passed = grid.failures.is_empty() && elapsed < Duration::from_secs(120);
    announce(
        6,
        "main identity",
        passed,
        &format!(
            "{} runs, residual {:.2e}, intermediate {:.2e}, collapse {:.2e}, max ‖X_F‖ {:.3}",
            grid.runs, grid.worst_residual, grid.worst_decomp, grid.worst_collapse, grid.max_norm
        ),
        elapsed,
    );
    assert!(grid.failures.is_empty(), "{:?}", &grid.failures[..grid.failures.len().min(10)]);
    assert!(elapsed < Duration::from_secs(120), "took {elapsed:?}");
}

/// Compares `X_F` with `c_u = 1` against an independent `g_F` (`v = u`,
/// `K = F`) at every `w ∈ F` and window point, with exact equality.
fn cross_case<G: DiscreteGroup>(group: G, u: &G::Elem, f: &[G::Elem], window: &[G::Elem]) -> Result<usize, String> {
    let ring = GroupFusionRing::new(group);
    let (report, run) = cross_pipeline(&ring, u, f, window).map_err(|e| e.to_string())?;
    if !report.passed {
        return Err(format!("{}: {:?}", report.group, report.mismatches));
    }
    let classical = classical_gf(ring.group(), u, f, f, window).map_err(|e| e.to_string())?;
    for w in f {
        for t in window {
            let q = run.x.block(w, t).map(|m: &CMatrix| m[(0, 0)]);
            let q = q.map_or(0.0, |z| if z.im == 0.0 { z.re } else { f64::NAN });
            let g = classical.value(f, window, w, t).unwrap();
            if q != f64::from(g) {
                return Err(format!("{}: X_F({w:?}, {t:?}) = {q}, g_F = {g}", report.group));
            }
        }
    }
    Ok(report.entries_checked)
}

#[test]
fn criterion_7_cross_pipeline() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut entries = 0;
    let mut failures = Vec::new();
    let mut run = |r: Result<usize, String>| match r {
        Ok(n) => entries += n,
        Err(e) => failures.push(e),
    };
    let z = FreeAbelian::new(1);
    for u in [0i64, 2, -5] {
        for _ in 0..4 {
            let mut f: Vec<Vec<i64>> = z.window(13).choose_multiple(&mut rng, 3).cloned().collect();
            f.push(vec![u]);
            f.dedup();
            run(cross_case(z.clone(), &vec![u], &f, &z.window(81)));
        }
    }
    let z2 = FreeAbelian::new(2);
    for u in ["(0,0)", "(1,-1)"] {
        let u = z2.parse_elem(u).unwrap();
        let mut f: Vec<_> = z2.window(9).choose_multiple(&mut rng, 2).cloned().collect();
        if !f.contains(&u) {
            f.push(u.clone());
        }
        run(cross_case(z2.clone(), &u, &f, &z2.window(81)));
    }
    let f2 = FreeGroup::new(2);
    for u in ["e", "a", "bA"] {
        let u = f2.parse_elem(u).unwrap();
        let mut f: Vec<_> = f2.ball(1).choose_multiple(&mut rng, 2).cloned().collect();
        if !f.contains(&u) {
            f.push(u.clone());
        }
        run(cross_case(f2.clone(), &u, &f, &f2.ball(3)));
    }
    for name in ["S3", "Q8", "Z/6"] {
        let g = catalog_group(name);
        let all = g.window(g.len());
        for u in &all {
            let mut f: Vec<usize> = all.choose_multiple(&mut rng, 3).cloned().collect();
            if !f.contains(u) {
                f.push(*u);
            }
            run(cross_case(g.clone(), u, &f, &all));
        }
    }
    let elapsed = start.elapsed();
    announce(7, "cross-pipeline agreement", failures.is_empty(), &format!("{entries} blocks equal exactly"), elapsed);
    assert!(failures.is_empty(), "{failures:?}");
}
