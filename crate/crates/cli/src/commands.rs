use std::path::Path;

use qfree_core::discrete::QuantumModel;
use qfree_core::freeness::{
    classical_gf, cross_pipeline, verify_freeness, CrossReport, FreenessError, FreenessReport,
};
use qfree_core::fusion::{check_axioms, DiscreteGroup, FusionError, FusionRules, GroupFusionRing};
use qfree_core::irr_partition::{self, IrrPartitionError};
use qfree_core::katetov::{partition_multi, verify_coloring, EdgeList, VerifyOptions};
use qfree_core::linalg::{identity, seeded_random_matrix, CMatrix, JsonMatrix};
use serde_json::{json, Value};

use crate::ring::{resolve_group, resolve_ring, with_ring, Group, Ring};
use crate::{CliError, Common, SCHEMA};

const DEFAULT_INFINITE_WINDOW: usize = 201;
const DEFAULT_QUANTUM_WINDOW: usize = 41;

pub struct Outcome {
    pub json: Value,
    pub summary: String,
    pub passed: bool,
}

fn input<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Input(e.to_string())
}

fn irr_error(e: IrrPartitionError) -> CliError {
    match e {
        e @ IrrPartitionError::Disjointness(_) => CliError::Check(e.to_string()),
        e => CliError::Input(e.to_string()),
    }
}

fn freeness_error(e: FreenessError) -> CliError {
    match e {
        FreenessError::Irr(e) => irr_error(e),
        e @ (FreenessError::Internal(_) | FreenessError::Injectivity { .. } | FreenessError::Decomposition { .. }) => {
            CliError::Check(e.to_string())
        }
        e => CliError::Input(e.to_string()),
    }
}

fn window_of<R: FusionRules>(ring: &R, n: Option<usize>, default: usize) -> Vec<R::Label> {
    match (ring.label_count(), n) {
        (Some(total), n) => ring.window(n.unwrap_or(total).min(total)),
        (None, n) => ring.window(n.unwrap_or(default)),
    }
}

fn names<R: FusionRules>(ring: &R, xs: &[R::Label]) -> Vec<String> {
    xs.iter().map(|x| ring.label_name(x)).collect()
}

fn status(passed: bool) -> &'static str {
    if passed {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn fusion_info(common: &Common, spec: &str, window: Option<usize>) -> Result<Outcome, CliError> {
    let ring = resolve_ring(spec, common.seed)?;
    with_ring!(&ring, r => fusion_info_for(r, window))
}

fn fusion_info_for<R: FusionRules>(ring: &R, window: Option<usize>) -> Result<Outcome, CliError> {
    let labels = window_of(ring, window, 50);
    let report = check_axioms(ring, &labels);
    let rows = labels
        .iter()
        .map(|u| -> Result<Value, FusionError> {
            Ok(json!({
                "label": ring.label_name(u),
                "dim": ring.dim(u)?,
                "conj": ring.label_name(&ring.conj(u)?),
            }))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(input)?;
    let mut summary = format!("{} ({} labels checked)\n", ring.ring_name(), labels.len());
    for check in &report.checks {
        summary += &format!("  {:<14} {:>8} checked  {}\n", check.name, check.checked, status(check.passed));
    }
    Ok(Outcome {
        passed: report.all_passed(),
        json: json!({
            "schema": SCHEMA,
            "command": "fusion-info",
            "ring": ring.ring_name(),
            "label_count": ring.label_count(),
            "dim_bound": ring.dim_bound(),
            "labels": rows,
            "axioms": report,
            "passed": report.all_passed(),
        }),
        summary,
    })
}

pub fn partition(edges: &Path, n: usize, truncation: Option<usize>) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(edges)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", edges.display())))?;
    let list = EdgeList::parse(&text).map_err(input)?;
    let f = list.multifunction(truncation, Some((n, n))).map_err(input)?;
    let coloring = partition_multi(&f).map_err(input)?;
    let check = verify_coloring(&f, &coloring, VerifyOptions::default());
    let palette = 2 * n + 1;
    let passed = check.is_valid() && coloring.num_colors() <= palette;
    let colors: serde_json::Map<String, Value> = coloring
        .domain()
        .iter()
        .zip(coloring.colors())
        .map(|(p, &c)| (p.clone(), json!(c)))
        .collect();
    let summary = format!(
        "{} points, {} edges checked, {} colors (bound {palette}), {} violations  {}\n",
        f.len(),
        check.edges_checked,
        coloring.num_colors(),
        check.violations.len(),
        status(passed)
    );
    Ok(Outcome {
        json: json!({
            "schema": SCHEMA,
            "command": "partition",
            "points": f.len(),
            "N": n,
            "color_bound": palette,
            "num_colors": coloring.num_colors(),
            "classes": coloring.classes(),
            "colors": colors,
            "boundary": coloring.boundary(),
            "edges_checked": check.edges_checked,
            "violations": check.violations,
            "self_images": check.self_images,
            "passed": passed,
        }),
        summary,
        passed,
    })
}

pub fn partition_irr(common: &Common, spec: &str, f: &str, window: Option<usize>) -> Result<Outcome, CliError> {
    let ring = resolve_ring(spec, common.seed)?;
    with_ring!(&ring, r => partition_irr_for(r, f, window))
}

fn partition_irr_for<R: FusionRules>(ring: &R, f: &str, window: Option<usize>) -> Result<Outcome, CliError> {
    let f = ring.parse_label_list(f).map_err(input)?;
    let labels = window_of(ring, window, DEFAULT_INFINITE_WINDOW);
    let res = irr_partition::partition_irr(ring, &f, &labels).map_err(irr_error)?;
    let passed = res.all_clear() && res.classes.len() <= 2 * res.degree_bound + 1;
    let classes: Vec<Vec<String>> = res.classes.iter().map(|c| names(ring, c)).collect();
    let summary = format!(
        "{}: F = {{{}}}, N = {}, {} labels in {} classes (bound {})  {}\n",
        ring.ring_name(),
        names(ring, &f).join(", "),
        res.degree_bound,
        labels.len(),
        classes.len(),
        2 * res.degree_bound + 1,
        status(passed)
    );
    Ok(Outcome {
        json: json!({
            "schema": SCHEMA,
            "command": "partition-irr",
            "ring": ring.ring_name(),
            "F": names(ring, &f),
            "Z": names(ring, &res.z_set),
            "window": labels.len(),
            "N": res.degree_bound,
            "classes": classes,
            "certificate": res.certificate,
            "passed": passed,
        }),
        summary,
        passed,
    })
}

pub fn verify_classical(spec: &str, v: &str, k: &str, f: &str, window: Option<usize>) -> Result<Outcome, CliError> {
    match resolve_group(spec)? {
        Group::Finite(g) => verify_classical_for(g, v, k, f, window),
        Group::Abelian(g) => verify_classical_for(g, v, k, f, window),
        Group::Free(g) => verify_classical_for(g, v, k, f, window),
    }
}

fn verify_classical_for<G: DiscreteGroup + Clone>(
    group: G,
    v: &str,
    k: &str,
    f: &str,
    window: Option<usize>,
) -> Result<Outcome, CliError> {
    let ring = GroupFusionRing::new(group.clone());
    let v = group.parse_elem(v).map_err(input)?;
    let k = ring.parse_label_list(k).map_err(input)?;
    let f = if f.trim().is_empty() {
        Vec::new()
    } else {
        ring.parse_label_list(f).map_err(input)?
    };
    let w = window_of(&ring, window, DEFAULT_INFINITE_WINDOW);
    let res = classical_gf(&group, &v, &k, &f, &w).map_err(freeness_error)?;
    let r = &res.report;
    let summary = format!(
        "{}: v = {}, |K| = {}, |F| = {}, window {}, {} classes, max |g_F − 1_{{s=v}}| = {}  {}\n",
        r.group,
        r.v,
        r.k.len(),
        r.f.len(),
        r.window,
        r.num_classes,
        r.max_residual,
        status(r.passed)
    );
    let rows: Vec<Value> = k
        .iter()
        .zip(&res.values)
        .map(|(s, row)| json!({ "s": group.elem_name(s), "g": row }))
        .collect();
    Ok(Outcome {
        passed: r.passed,
        json: json!({
            "schema": SCHEMA,
            "command": "verify-classical",
            "report": r,
            "window_elements": w.iter().map(|x| group.elem_name(x)).collect::<Vec<_>>(),
            "values": rows,
            "partition": res.coloring.classes().iter()
                .map(|c| c.iter().map(|x| group.elem_name(x)).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
        }),
        summary,
    })
}

fn coefficient(c: &str, dim: usize, seed: u64) -> Result<CMatrix, CliError> {
    match c {
        "identity" | "1" => Ok(identity(dim)),
        "random" => Ok(seeded_random_matrix(seed, dim, dim)),
        path => {
            let text =
                std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read {path}: {e}")))?;
            let m: JsonMatrix = serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
            m.to_matrix()
                .ok_or_else(|| CliError::Input(format!("{path}: ragged matrix")))
        }
    }
}

pub fn verify_quantum(
    common: &Common,
    spec: &str,
    u: &str,
    f: &str,
    window: Option<usize>,
    c: &str,
) -> Result<Outcome, CliError> {
    let ring = resolve_ring(spec, common.seed)?;
    let cross_ok = c == "identity" || c == "1";
    match &ring {
        Ring::Table(t) => Err(CliError::Input(format!(
            "verify-quantum: {} has fusion rules only; supply representation matrices",
            t.ring_name()
        ))),
        Ring::Dual(r) => verify_quantum_for(common, r, u, f, window, c, None),
        Ring::Finite(r) => verify_quantum_for(common, r, u, f, window, c, cross_ok.then_some(cross_for(r))),
        Ring::Abelian(r) => verify_quantum_for(common, r, u, f, window, c, cross_ok.then_some(cross_for(r))),
        Ring::Free(r) => verify_quantum_for(common, r, u, f, window, c, cross_ok.then_some(cross_for(r))),
    }
}

type CrossFn<'a, L> = dyn Fn(&[L], &L, &[L]) -> Result<CrossReport, CliError> + 'a;

fn cross_for<G: DiscreteGroup>(ring: &GroupFusionRing<G>) -> Box<CrossFn<'_, G::Elem>> {
    Box::new(move |f, u, w| cross_pipeline(ring, u, f, w).map(|(rep, _)| rep).map_err(freeness_error))
}

fn verify_quantum_for<M: QuantumModel>(
    common: &Common,
    model: &M,
    u: &str,
    f: &str,
    window: Option<usize>,
    c: &str,
    cross: Option<Box<CrossFn<'_, M::Label>>>,
) -> Result<Outcome, CliError> {
    let u = model.parse_label(u).map_err(input)?;
    let f = model.parse_label_list(f).map_err(input)?;
    let w = window_of(model, window, DEFAULT_QUANTUM_WINDOW);
    let du = model.dim(&u).map_err(input)?;
    let c_u = coefficient(c, du, common.seed)?;
    if c_u.shape() != (du, du) {
        return Err(CliError::Input(format!("--c must be {du}x{du} for {}", model.label_name(&u))));
    }
    let run = verify_freeness(model, &u, &c_u, &f, &w).map_err(freeness_error)?;
    let mut report: FreenessReport = run.report;
    report.recheck(common.tol);
    report.passed &= run.partition.all_clear();
    let cross = match cross {
        Some(check) => Some(check(&f, &u, &w)?),
        None => None,
    };
    let passed = report.passed && cross.as_ref().is_none_or(|c| c.passed);
    Ok(Outcome {
        summary: quantum_table(&report, cross.as_ref()),
        json: json!({
            "schema": SCHEMA,
            "command": "verify-quantum",
            "seed": common.seed,
            "coefficient": c,
            "report": report,
            "certificate": run.partition.certificate,
            "cross_pipeline": cross,
            "passed": passed,
        }),
        passed,
    })
}

fn quantum_table(r: &FreenessReport, cross: Option<&CrossReport>) -> String {
    let mut out = format!(
        "{}: u = {}, F = {{{}}}, window {}, N = {}, N_slots = {}\n",
        r.ring,
        r.u,
        r.f.join(", "),
        r.window.len(),
        r.degree_bound,
        r.n_slots
    );
    out += "  class  size   lhs-mid     mid-rhs     lhs-rhs\n";
    for c in &r.class_residuals {
        out += &format!(
            "  {:>5}  {:>4}   {:.3e}   {:.3e}   {:.3e}\n",
            c.class,
            c.members.len(),
            c.lhs_mid,
            c.mid_rhs,
            c.lhs_rhs
        );
    }
    let sc = &r.scalar_collapse;
    out += &format!(
        "  scalar collapse   {:.3e} (s ≠ 1), {:.3e} (alignment), {:.3e} (|λ|)\n",
        sc.max_nontrivial, sc.trivial_alignment, sc.lambda_residual
    );
    out += &format!("  norm              {:.4} ≤ {:.4}\n", r.norm_observed, r.norm_bound);
    let worst = r
        .worst_block
        .as_ref()
        .map(|(w, s)| format!(" at ({w}, {s})"))
        .unwrap_or_default();
    out += &format!(
        "  residual          {:.3e}{worst} (tol {:.1e})  {}\n",
        r.residual,
        r.tolerance,
        status(r.passed)
    );
    if let Some(c) = cross {
        out += &format!(
            "  cross-pipeline    {} entries, {} mismatches  {}\n",
            c.entries_checked,
            c.mismatches.len(),
            status(c.passed)
        );
    }
    out
}
