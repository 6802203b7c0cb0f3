//! Built-in irrep catalogs.

use std::collections::VecDeque;

use super::{CqgError, MatrixRep, RepCatalog};
use crate::fusion::FiniteGroup;
use crate::linalg::{c, identity, root_of_unity, CMatrix};

pub fn builtin_names() -> &'static [&'static str] {
    &["S3", "D4", "Q8", "A4", "Z/n"]
}

/// `S3`, `D4`, `Q8`, `A4` or `Z/n` (case-insensitive).
pub fn builtin_catalog(name: &str) -> Result<RepCatalog, CqgError> {
    let key = name.trim().to_ascii_uppercase();
    match key.as_str() {
        "S3" => s3(),
        "D4" => d4(),
        "Q8" => q8(),
        "A4" => a4(),
        _ => {
            let n = key
                .strip_prefix("Z/")
                .or_else(|| key.strip_prefix('Z'))
                .and_then(|s| s.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| CqgError::UnknownGroup(name.to_string()))?;
            abelian_catalog(FiniteGroup::cyclic(n))
        }
    }
}

/// Extends generator images along the Cayley table.
fn extend(group: &FiniteGroup, gens: &[usize], images: &[CMatrix]) -> Result<Vec<CMatrix>, CqgError> {
    let d = images.first().map_or(1, |m| m.nrows());
    let mut mats: Vec<Option<CMatrix>> = vec![None; group.len()];
    mats[0] = Some(identity(d));
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        for (&s, img) in gens.iter().zip(images) {
            let h = group.table()[g][s];
            if mats[h].is_none() {
                mats[h] = Some(mats[g].as_ref().expect("visited") * img);
                queue.push_back(h);
            }
        }
    }
    mats.into_iter()
        .enumerate()
        .map(|(g, m)| m.ok_or(CqgError::Unreached(g)))
        .collect()
}

fn real(rows: &[&[f64]]) -> CMatrix {
    CMatrix::from_fn(rows.len(), rows[0].len(), |i, j| c(rows[i][j], 0.0))
}

fn scalar(z: crate::linalg::C64) -> CMatrix {
    CMatrix::from_element(1, 1, z)
}

fn compose(p: &Vec<usize>, q: &Vec<usize>) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

fn matrix_key(m: &CMatrix) -> Vec<(i64, i64)> {
    m.iter()
        .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
        .collect()
}

fn one_dim(group: &FiniteGroup, gens: &[usize], label: &str, values: &[f64]) -> Result<MatrixRep, CqgError> {
    let images: Vec<CMatrix> = values.iter().map(|&x| scalar(c(x, 0.0))).collect();
    Ok(MatrixRep::new(label, 1, extend(group, gens, &images)?))
}

fn s3() -> Result<RepCatalog, CqgError> {
    let (group, _, gens) = FiniteGroup::generate(
        "S3",
        vec![0, 1, 2],
        &[vec![1, 2, 0], vec![1, 0, 2]],
        compose,
        Clone::clone,
    )?;
    let h = 3f64.sqrt() / 2.0;
    let rot = real(&[&[-0.5, -h], &[h, -0.5]]);
    let refl = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let irreps = vec![
        one_dim(&group, &gens, "triv", &[1.0, 1.0])?,
        one_dim(&group, &gens, "sign", &[1.0, -1.0])?,
        MatrixRep::new("std", 2, extend(&group, &gens, &[rot, refl])?),
    ];
    RepCatalog::new("S3", group, irreps)
}

fn d4() -> Result<RepCatalog, CqgError> {
    let r = real(&[&[0.0, -1.0], &[1.0, 0.0]]);
    let s = real(&[&[1.0, 0.0], &[0.0, -1.0]]);
    let (group, _, gens) =
        FiniteGroup::generate("D4", identity(2), &[r.clone(), s.clone()], |a, b| a * b, matrix_key)?;
    let irreps = vec![
        one_dim(&group, &gens, "triv", &[1.0, 1.0])?,
        one_dim(&group, &gens, "A2", &[1.0, -1.0])?,
        one_dim(&group, &gens, "B1", &[-1.0, 1.0])?,
        one_dim(&group, &gens, "B2", &[-1.0, -1.0])?,
        MatrixRep::new("E", 2, extend(&group, &gens, &[r, s])?),
    ];
    RepCatalog::new("D4", group, irreps)
}

fn q8() -> Result<RepCatalog, CqgError> {
    let mut i = CMatrix::zeros(2, 2);
    i[(0, 0)] = c(0.0, 1.0);
    i[(1, 1)] = c(0.0, -1.0);
    let j = real(&[&[0.0, 1.0], &[-1.0, 0.0]]);
    let (group, _, gens) =
        FiniteGroup::generate("Q8", identity(2), &[i.clone(), j.clone()], |a, b| a * b, matrix_key)?;
    let irreps = vec![
        one_dim(&group, &gens, "triv", &[1.0, 1.0])?,
        one_dim(&group, &gens, "i", &[1.0, -1.0])?,
        one_dim(&group, &gens, "j", &[-1.0, 1.0])?,
        one_dim(&group, &gens, "k", &[-1.0, -1.0])?,
        MatrixRep::new("std", 2, extend(&group, &gens, &[i, j])?),
    ];
    RepCatalog::new("Q8", group, irreps)
}

fn a4() -> Result<RepCatalog, CqgError> {
    let (group, elems, gens) = FiniteGroup::generate(
        "A4",
        vec![0, 1, 2, 3],
        &[vec![1, 2, 0, 3], vec![1, 0, 3, 2]],
        compose,
        Clone::clone,
    )?;
    let omega = |k: i64| vec![scalar(root_of_unity(k, 3)), scalar(c(1.0, 0.0))];
    // Helmert basis of the complement of (1, 1, 1, 1).
    let helmert = CMatrix::from_fn(3, 4, |r, col| {
        let k = (r + 1) as f64;
        let norm = (k * (k + 1.0)).sqrt();
        let x = if col < r + 1 {
            1.0
        } else if col == r + 1 {
            -k
        } else {
            0.0
        };
        c(x / norm, 0.0)
    });
    let perm = |p: &Vec<usize>| CMatrix::from_fn(4, 4, |i, j| c(if p[j] == i { 1.0 } else { 0.0 }, 0.0));
    let three: Vec<CMatrix> = elems.iter().map(|p| &helmert * perm(p) * helmert.adjoint()).collect();
    let irreps = vec![
        MatrixRep::new("triv", 1, extend(&group, &gens, &omega(0))?),
        MatrixRep::new("omega", 1, extend(&group, &gens, &omega(1))?),
        MatrixRep::new("omega2", 1, extend(&group, &gens, &omega(2))?),
        MatrixRep::new("std", 3, three),
    ];
    RepCatalog::new("A4", group, irreps)
}

/// Characters of an abelian group, found as homomorphisms to `Z/e` (`e` the
/// exponent) fixed by their values on a greedily chosen generating set.
/// Labels are `chi0, chi1, …` with `chi0` trivial.
pub fn abelian_catalog(group: FiniteGroup) -> Result<RepCatalog, CqgError> {
    if !group.is_abelian() {
        return Err(CqgError::Parse(format!("{} is not abelian", crate::fusion::DiscreteGroup::group_name(&group))));
    }
    let n = group.len();
    let t = group.table();
    let exponent = (0..n).map(|g| group.elem_order(g)).fold(1, lcm);
    let mut gens: Vec<usize> = Vec::new();
    let mut span = vec![false; n];
    span[0] = true;
    while let Some(g) = (0..n).filter(|&g| !span[g]).max_by_key(|&g| (group.elem_order(g), std::cmp::Reverse(g))) {
        gens.push(g);
        let mut members: Vec<usize> = (0..n).filter(|&x| span[x]).collect();
        loop {
            let mut grew = false;
            for k in 0..members.len() {
                let y = t[members[k]][g];
                if !span[y] {
                    span[y] = true;
                    members.push(y);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
    }
    let orders: Vec<usize> = gens.iter().map(|&g| group.elem_order(g)).collect();
    let mut irreps = Vec::new();
    let mut assignment = vec![0usize; gens.len()];
    loop {
        // value on gens[k] is exp(2πi a_k / ord_k) = ω_e^(a_k e / ord_k)
        let images: Vec<usize> = assignment
            .iter()
            .zip(&orders)
            .map(|(&a, &o)| a * (exponent / o))
            .collect();
        if let Some(phase) = extend_phase(&group, &gens, &images, exponent) {
            let mats = phase
                .iter()
                .map(|&k| scalar(root_of_unity(k as i64, exponent as i64)))
                .collect();
            irreps.push(MatrixRep::new(format!("chi{}", irreps.len()), 1, mats));
        }
        let mut k = 0;
        loop {
            if k == assignment.len() {
                return RepCatalog::new(crate::fusion::DiscreteGroup::group_name(&group), group, irreps);
            }
            assignment[k] += 1;
            if assignment[k] < orders[k] {
                break;
            }
            assignment[k] = 0;
            k += 1;
        }
    }
}

fn lcm(a: usize, b: usize) -> usize {
    fn gcd(a: usize, b: usize) -> usize {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Integer-valued extension `φ(g s) = φ(g) + φ(s) mod e`; `None` unless the
/// result is a homomorphism.
fn extend_phase(group: &FiniteGroup, gens: &[usize], images: &[usize], e: usize) -> Option<Vec<usize>> {
    let n = group.len();
    let t = group.table();
    let mut phase: Vec<Option<usize>> = vec![None; n];
    phase[0] = Some(0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(g) = queue.pop_front() {
        for (&s, &img) in gens.iter().zip(images) {
            let h = t[g][s];
            if phase[h].is_none() {
                phase[h] = Some((phase[g]? + img) % e);
                queue.push_back(h);
            }
        }
    }
    let phase: Vec<usize> = phase.into_iter().collect::<Option<_>>()?;
    for a in 0..n {
        for b in 0..n {
            if phase[t[a][b]] != (phase[a] + phase[b]) % e {
                return None;
            }
        }
    }
    Some(phase)
}
