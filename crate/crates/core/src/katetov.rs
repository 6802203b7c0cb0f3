//! Katětov-type partitions.
//!
//! * [`partition_single`]: a fixed-point-free map `f` admits a 3-part
//!   partition with `f(A_i) ∩ A_i = ∅`.
//! * [`partition_many`]: `n` such maps admit a common partition into at most
//!   `3^n` parts (product of the single partitions).
//! * [`partition_multi`]: a multivalued map with `|f(x)| ≤ N` and
//!   `|f⁻¹(x)| ≤ N` admits a partition into at most `2N + 1` parts with
//!   `y ∉ f(x)` for distinct `x, y` in a common part.
//!
//! Domains are finite windows. Images that fall outside the window impose no
//! constraint on the in-window coloring; the points carrying them are listed
//! as boundary points.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use rayon::prelude::*;
use thiserror::Error;

pub trait Point: Clone + Eq + Hash + Debug + Send + Sync {}
impl<T: Clone + Eq + Hash + Debug + Send + Sync> Point for T {}

#[derive(Debug, Error, PartialEq)]
pub enum KatetovError {
    #[error("katetov: fixed point at {point}")]
    FixedPoint { index: usize, point: String },
    #[error("katetov: degree bound violated at {point}: {direction}-degree {degree} exceeds {bound}")]
    DegreeBound {
        index: usize,
        point: String,
        direction: &'static str,
        degree: usize,
        bound: usize,
    },
    #[error("katetov: no free color among {palette} at {point}")]
    Exhausted { point: String, palette: usize },
    #[error("katetov: duplicate point {0} in domain")]
    DuplicatePoint(String),
    #[error("katetov: edge list parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

fn index_domain<P: Point>(domain: &[P]) -> Result<HashMap<P, usize>, KatetovError> {
    let mut index = HashMap::with_capacity(domain.len());
    for (i, p) in domain.iter().enumerate() {
        if index.insert(p.clone(), i).is_some() {
            return Err(KatetovError::DuplicatePoint(format!("{p:?}")));
        }
    }
    Ok(index)
}

fn dedup<P: Point>(v: Vec<P>) -> Vec<P> {
    let mut seen = HashSet::with_capacity(v.len());
    v.into_iter().filter(|p| seen.insert(p.clone())).collect()
}

/// A multivalued map restricted to a finite window, with forward images
/// `f(x)` and preimages `f⁻¹(x)` for every window point.
#[derive(Debug, Clone)]
pub struct MultiFunction<P> {
    domain: Vec<P>,
    index: HashMap<P, usize>,
    forward: Vec<Vec<P>>,
    backward: Vec<Vec<P>>,
    fwd_idx: Vec<Vec<usize>>,
    bwd_idx: Vec<Vec<usize>>,
    out_bound: usize,
    in_bound: usize,
}

impl<P: Point> MultiFunction<P> {
    /// `forward[i]` and `backward[i]` belong to `domain[i]`; duplicates are dropped.
    pub fn from_lists(
        domain: Vec<P>,
        forward: Vec<Vec<P>>,
        backward: Vec<Vec<P>>,
        out_bound: usize,
        in_bound: usize,
    ) -> Result<Self, KatetovError> {
        assert_eq!(domain.len(), forward.len());
        assert_eq!(domain.len(), backward.len());
        let index = index_domain(&domain)?;
        let forward: Vec<Vec<P>> = forward.into_iter().map(dedup).collect();
        let backward: Vec<Vec<P>> = backward.into_iter().map(dedup).collect();
        let to_idx = |lists: &[Vec<P>]| -> Vec<Vec<usize>> {
            lists
                .iter()
                .map(|l| l.iter().filter_map(|p| index.get(p).copied()).collect())
                .collect()
        };
        let fwd_idx = to_idx(&forward);
        let bwd_idx = to_idx(&backward);
        Ok(MultiFunction {
            domain,
            index,
            forward,
            backward,
            fwd_idx,
            bwd_idx,
            out_bound,
            in_bound,
        })
    }

    pub fn from_fn(
        domain: Vec<P>,
        forward: impl Fn(&P) -> Vec<P>,
        backward: impl Fn(&P) -> Vec<P>,
        out_bound: usize,
        in_bound: usize,
    ) -> Result<Self, KatetovError> {
        let fwd = domain.iter().map(&forward).collect();
        let bwd = domain.iter().map(&backward).collect();
        Self::from_lists(domain, fwd, bwd, out_bound, in_bound)
    }

    /// Edges `(x, y)` mean `y ∈ f(x)`. Preimages use every edge, including
    /// sources outside the window. Without explicit bounds the observed
    /// maximum degrees are used.
    pub fn from_edges(
        domain: Vec<P>,
        edges: &[(P, P)],
        bounds: Option<(usize, usize)>,
    ) -> Result<Self, KatetovError> {
        let index = index_domain(&domain)?;
        let mut fwd = vec![Vec::new(); domain.len()];
        let mut bwd = vec![Vec::new(); domain.len()];
        for (x, y) in edges {
            if let Some(&i) = index.get(x) {
                fwd[i].push(y.clone());
            }
            if let Some(&j) = index.get(y) {
                bwd[j].push(x.clone());
            }
        }
        let fwd: Vec<Vec<P>> = fwd.into_iter().map(dedup).collect();
        let bwd: Vec<Vec<P>> = bwd.into_iter().map(dedup).collect();
        let (out_bound, in_bound) = bounds.unwrap_or_else(|| {
            (
                fwd.iter().map(Vec::len).max().unwrap_or(0),
                bwd.iter().map(Vec::len).max().unwrap_or(0),
            )
        });
        Self::from_lists(domain, fwd, bwd, out_bound, in_bound)
    }

    pub fn domain(&self) -> &[P] {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.domain.is_empty()
    }

    pub fn index_of(&self, p: &P) -> Option<usize> {
        self.index.get(p).copied()
    }

    pub fn forward(&self, x: &P) -> &[P] {
        self.index.get(x).map_or(&[], |&i| &self.forward[i])
    }

    pub fn backward(&self, x: &P) -> &[P] {
        self.index.get(x).map_or(&[], |&i| &self.backward[i])
    }

    pub fn out_bound(&self) -> usize {
        self.out_bound
    }

    pub fn in_bound(&self) -> usize {
        self.in_bound
    }

    /// `N = max(out_bound, in_bound)`.
    pub fn degree_bound(&self) -> usize {
        self.out_bound.max(self.in_bound)
    }

    pub fn check_degrees(&self) -> Result<(), KatetovError> {
        for (i, p) in self.domain.iter().enumerate() {
            for (direction, degree, bound) in [
                ("out", self.forward[i].len(), self.out_bound),
                ("in", self.backward[i].len(), self.in_bound),
            ] {
                if degree > bound {
                    return Err(KatetovError::DegreeBound {
                        index: i,
                        point: format!("{p:?}"),
                        direction,
                        degree,
                        bound,
                    });
                }
            }
        }
        Ok(())
    }

    /// In-window pairs where `y ∈ f(x)` and `x ∈ f⁻¹(y)` disagree.
    pub fn adjunction_mismatches(&self) -> Vec<(P, P)> {
        let mut bad = Vec::new();
        for (i, x) in self.domain.iter().enumerate() {
            for &j in &self.fwd_idx[i] {
                if !self.bwd_idx[j].contains(&i) {
                    bad.push((x.clone(), self.domain[j].clone()));
                }
            }
            for &j in &self.bwd_idx[i] {
                if !self.fwd_idx[j].contains(&i) {
                    bad.push((self.domain[j].clone(), x.clone()));
                }
            }
        }
        bad
    }

    fn is_boundary(&self, i: usize) -> bool {
        self.fwd_idx[i].len() < self.forward[i].len() || self.bwd_idx[i].len() < self.backward[i].len()
    }
}

/// A map from a finite window to colors `0..num_colors`.
#[derive(Debug, Clone)]
pub struct Coloring<P> {
    domain: Vec<P>,
    index: HashMap<P, usize>,
    colors: Vec<usize>,
    num_colors: usize,
    boundary: Vec<P>,
}

impl<P: Point> Coloring<P> {
    pub fn from_colors(domain: Vec<P>, colors: Vec<usize>, boundary: Vec<P>) -> Result<Self, KatetovError> {
        assert_eq!(domain.len(), colors.len());
        let index = index_domain(&domain)?;
        let num_colors = colors.iter().map(|&c| c + 1).max().unwrap_or(0);
        Ok(Coloring {
            domain,
            index,
            colors,
            num_colors,
            boundary,
        })
    }

    pub fn color(&self, p: &P) -> Option<usize> {
        self.index.get(p).map(|&i| self.colors[i])
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn domain(&self) -> &[P] {
        &self.domain
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    /// Window points with images outside the window.
    pub fn boundary(&self) -> &[P] {
        &self.boundary
    }

    /// Color classes `A_i`, each in domain order.
    pub fn classes(&self) -> Vec<Vec<P>> {
        let mut classes = vec![Vec::new(); self.num_colors];
        for (p, &c) in self.domain.iter().zip(&self.colors) {
            classes[c].push(p.clone());
        }
        classes
    }
}

/// Three-coloring for a fixed-point-free map: every forward orbit is colored
/// by alternating parity from where it enters a colored region, odd cycles
/// get the third color at their closing point.
pub fn partition_single<P: Point>(domain: &[P], f: impl Fn(&P) -> P) -> Result<Coloring<P>, KatetovError> {
    let index = index_domain(domain)?;
    let n = domain.len();
    let mut image = Vec::with_capacity(n);
    for (i, x) in domain.iter().enumerate() {
        let y = f(x);
        if &y == x {
            return Err(KatetovError::FixedPoint {
                index: i,
                point: format!("{x:?}"),
            });
        }
        image.push(index.get(&y).copied());
    }

    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const DONE: u8 = 2;
    let mut state = vec![UNSEEN; n];
    let mut colors = vec![0usize; n];
    let mut path = Vec::new();
    for start in 0..n {
        if state[start] != UNSEEN {
            continue;
        }
        path.clear();
        let mut x = start;
        let mut cycle_at = None;
        loop {
            match state[x] {
                DONE => break,
                ON_PATH => {
                    cycle_at = path.iter().position(|&p| p == x);
                    break;
                }
                _ => {}
            }
            state[x] = ON_PATH;
            path.push(x);
            match image[x] {
                Some(y) => x = y,
                None => break,
            }
        }
        let tail_len = match cycle_at {
            Some(pos) => {
                let cycle = &path[pos..];
                let len = cycle.len();
                for (k, &c) in cycle.iter().enumerate() {
                    colors[c] = if len % 2 == 1 && k == len - 1 { 2 } else { k % 2 };
                    state[c] = DONE;
                }
                pos
            }
            None => path.len(),
        };
        for &t in path[..tail_len].iter().rev() {
            colors[t] = match image[t] {
                Some(y) if colors[y] == 0 => 1,
                _ => 0,
            };
            state[t] = DONE;
        }
    }
    let boundary = (0..n).filter(|&i| image[i].is_none()).map(|i| domain[i].clone()).collect();
    Coloring::from_colors(domain.to_vec(), colors, boundary)
}

/// Common coloring for several fixed-point-free maps: product of the
/// single-map colorings, renumbered by first appearance.
pub fn partition_many<P: Point>(domain: &[P], fs: &[&dyn Fn(&P) -> P]) -> Result<Coloring<P>, KatetovError> {
    let singles = fs
        .iter()
        .map(|f| partition_single(domain, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut codes: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut colors = Vec::with_capacity(domain.len());
    for i in 0..domain.len() {
        let key: Vec<u8> = singles.iter().map(|c| c.colors[i] as u8).collect();
        let next = codes.len();
        colors.push(*codes.entry(key).or_insert(next));
    }
    let mut boundary: Vec<P> = Vec::new();
    let mut seen = HashSet::new();
    for c in &singles {
        for p in c.boundary() {
            if seen.insert(p.clone()) {
                boundary.push(p.clone());
            }
        }
    }
    Coloring::from_colors(domain.to_vec(), colors, boundary)
}

/// Greedy `(2N + 1)`-coloring in breadth-first order over forward orbits
/// `f^k(x)`, seeded in domain order; each point takes the smallest color not
/// used by an already colored point of `f(y) ∪ f⁻¹(y)`.
pub fn partition_multi<P: Point>(f: &MultiFunction<P>) -> Result<Coloring<P>, KatetovError> {
    f.check_degrees()?;
    let n = f.len();
    let palette = 2 * f.degree_bound() + 1;
    const UNCOLORED: usize = usize::MAX;
    let mut colors = vec![UNCOLORED; n];
    let mut queued = vec![false; n];
    let mut queue = VecDeque::new();
    let mut used = vec![false; palette];
    for start in 0..n {
        if queued[start] {
            continue;
        }
        queued[start] = true;
        queue.push_back(start);
        while let Some(y) = queue.pop_front() {
            used.iter_mut().for_each(|u| *u = false);
            for &z in f.fwd_idx[y].iter().chain(&f.bwd_idx[y]) {
                if z != y && colors[z] != UNCOLORED {
                    used[colors[z]] = true;
                }
            }
            let c = used.iter().position(|u| !u).ok_or_else(|| KatetovError::Exhausted {
                point: format!("{:?}", f.domain[y]),
                palette,
            })?;
            colors[y] = c;
            for &z in &f.fwd_idx[y] {
                if !queued[z] {
                    queued[z] = true;
                    queue.push_back(z);
                }
            }
        }
    }
    let boundary = (0..n).filter(|&i| f.is_boundary(i)).map(|i| f.domain[i].clone()).collect();
    Coloring::from_colors(f.domain.clone(), colors, boundary)
}

#[derive(Debug, Clone)]
pub struct ColoringReport<P> {
    pub violations: Vec<(P, P)>,
    pub uncolored: Vec<P>,
    /// Points with `x ∈ f(x)`; violations only under the strict check.
    pub self_images: Vec<P>,
    pub edges_checked: usize,
}

impl<P> Default for ColoringReport<P> {
    fn default() -> Self {
        ColoringReport {
            violations: Vec::new(),
            uncolored: Vec::new(),
            self_images: Vec::new(),
            edges_checked: 0,
        }
    }
}

impl<P> ColoringReport<P> {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty() && self.uncolored.is_empty()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Also reject `x ∈ f(x)`: the strengthened variant for maps without
    /// fixed points.
    pub forbid_self_images: bool,
}

fn merge<P>(mut a: ColoringReport<P>, b: ColoringReport<P>) -> ColoringReport<P> {
    a.violations.extend(b.violations);
    a.uncolored.extend(b.uncolored);
    a.self_images.extend(b.self_images);
    a.edges_checked += b.edges_checked;
    a
}

const VERIFY_CHUNK: usize = 4096;

/// Lists every in-window pair `x ≠ y` with `y ∈ f(x)` and equal colors.
pub fn verify_coloring<P: Point>(
    f: &MultiFunction<P>,
    coloring: &Coloring<P>,
    opts: VerifyOptions,
) -> ColoringReport<P> {
    let domain = f.domain();
    let mut report = domain
        .par_chunks(VERIFY_CHUNK)
        .map(|chunk| {
            let mut r = ColoringReport::default();
            for x in chunk {
                let Some(cx) = coloring.color(x) else {
                    r.uncolored.push(x.clone());
                    continue;
                };
                for y in f.forward(x) {
                    r.edges_checked += 1;
                    if y == x {
                        r.self_images.push(x.clone());
                        if opts.forbid_self_images {
                            r.violations.push((x.clone(), y.clone()));
                        }
                        continue;
                    }
                    if coloring.color(y) == Some(cx) {
                        r.violations.push((x.clone(), y.clone()));
                    }
                }
            }
            r
        })
        .reduce(ColoringReport::default, merge);
    report.violations.sort_by_key(|(x, _)| f.index_of(x));
    report
}

/// Checks `color(f_k(x)) ≠ color(x)` for every map and every window point
/// whose image is in the window.
pub fn verify_functions<P: Point>(
    domain: &[P],
    fs: &[&(dyn Fn(&P) -> P + Sync)],
    coloring: &Coloring<P>,
) -> ColoringReport<P> {
    domain
        .par_chunks(VERIFY_CHUNK)
        .map(|chunk| {
            let mut r = ColoringReport::default();
            for x in chunk {
                let Some(cx) = coloring.color(x) else {
                    r.uncolored.push(x.clone());
                    continue;
                };
                for f in fs {
                    let y = f(x);
                    r.edges_checked += 1;
                    if y == *x || coloring.color(&y) == Some(cx) {
                        r.violations.push((x.clone(), y));
                    }
                }
            }
            r
        })
        .reduce(ColoringReport::default, merge)
}

/// An edge-list file: one `x y` pair per line meaning `y ∈ f(x)`; `#`
/// starts a comment. Points are listed in order of first appearance.
#[derive(Debug, Clone, Default)]
pub struct EdgeList {
    pub points: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl EdgeList {
    pub fn parse(text: &str) -> Result<Self, KatetovError> {
        let mut out = EdgeList::default();
        let mut seen = HashSet::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let [x, y] = toks[..] else {
                return Err(KatetovError::Parse {
                    line: lineno + 1,
                    message: format!("expected two tokens, found {}", toks.len()),
                });
            };
            for t in [x, y] {
                if seen.insert(t.to_string()) {
                    out.points.push(t.to_string());
                }
            }
            out.edges.push((x.to_string(), y.to_string()));
        }
        Ok(out)
    }

    /// Window of the first `truncation` points (all when `None`).
    pub fn multifunction(
        &self,
        truncation: Option<usize>,
        bounds: Option<(usize, usize)>,
    ) -> Result<MultiFunction<String>, KatetovError> {
        let n = truncation.unwrap_or(self.points.len()).min(self.points.len());
        MultiFunction::from_edges(self.points[..n].to_vec(), &self.edges, bounds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn successor_on_a_segment() {
        let domain: Vec<i64> = (0..100).collect();
        let c = partition_single(&domain, |x| x + 1).unwrap();
        assert!(c.num_colors() <= 3);
        let succ = |x: &i64| x + 1;
        let r = verify_functions(&domain, &[&succ], &c);
        assert!(r.is_valid(), "{:?}", r.violations);
        assert_eq!(c.boundary(), &[99]);
        // x mod 3 is also a certificate
        let m3 = Coloring::from_colors(domain.clone(), domain.iter().map(|x| (x % 3) as usize).collect(), vec![]).unwrap();
        assert!(verify_functions(&domain, &[&succ], &m3).is_valid());
    }

    #[test]
    fn identity_is_rejected() {
        let domain = vec![3u32, 4];
        let err = partition_single(&domain, |x| *x).unwrap_err();
        assert!(matches!(err, KatetovError::FixedPoint { index: 0, .. }));
    }

    #[test]
    fn odd_cycle_needs_three_colors() {
        let domain: Vec<usize> = (0..5).collect();
        let c = partition_single(&domain, |x| (x + 1) % 5).unwrap();
        assert_eq!(c.num_colors(), 3);
        let f = |x: &usize| (x + 1) % 5;
        assert!(verify_functions(&domain, &[&f], &c).is_valid());
    }

    #[test]
    fn involution_gets_at_most_three() {
        let domain: Vec<usize> = (0..10).collect();
        let c = partition_single(&domain, |x| x ^ 1).unwrap();
        assert!(c.num_colors() <= 3);
        let inv = |x: &usize| x ^ 1;
        assert!(verify_functions(&domain, &[&inv], &c).is_valid());
    }

    #[test]
    fn many_maps_product_coloring() {
        let domain: Vec<i64> = (0..1000).collect();
        let f1 = |x: &i64| x + 1;
        let f2 = |x: &i64| x + 2;
        let c = partition_many(&domain, &[&f1, &f2]).unwrap();
        assert!(c.num_colors() <= 9);
        assert!(verify_functions(&domain, &[&f1, &f2], &c).is_valid());
        let single = partition_many(&domain, &[&f1]).unwrap();
        let direct = partition_single(&domain, f1).unwrap();
        assert_eq!(single.classes().len(), direct.classes().len());
    }

    #[test]
    fn neighbours_on_integer_segment() {
        let domain: Vec<i64> = (-500..=500).collect();
        let f = MultiFunction::from_fn(domain.clone(), |x| vec![x - 1, x + 1], |x| vec![x + 1, x - 1], 2, 2).unwrap();
        let c = partition_multi(&f).unwrap();
        assert!(c.num_colors() <= 5);
        assert!(verify_coloring(&f, &c, VerifyOptions::default()).is_valid());
        assert_eq!(c.boundary(), &[-500, 500]);
        let m3 = Coloring::from_colors(domain.clone(), domain.iter().map(|x| x.rem_euclid(3) as usize).collect(), vec![]).unwrap();
        assert!(verify_coloring(&f, &m3, VerifyOptions::default()).is_valid());
    }

    #[test]
    fn self_images_are_allowed_unless_strict() {
        let domain: Vec<u8> = (0..4).collect();
        let f = MultiFunction::from_fn(domain.clone(), |x| vec![*x], |x| vec![*x], 1, 1).unwrap();
        let c = partition_multi(&f).unwrap();
        assert!(c.num_colors() <= 3);
        let relaxed = verify_coloring(&f, &c, VerifyOptions::default());
        assert!(relaxed.is_valid());
        assert_eq!(relaxed.self_images.len(), 4);
        let strict = verify_coloring(&f, &c, VerifyOptions { forbid_self_images: true });
        assert_eq!(strict.violations.len(), 4);
    }

    #[test]
    fn constant_coloring_violates_successor() {
        let domain: Vec<i64> = (0..10).collect();
        let f = MultiFunction::from_fn(domain.clone(), |x| vec![x + 1], |x| vec![x - 1], 1, 1).unwrap();
        let flat = Coloring::from_colors(domain.clone(), vec![0; 10], vec![]).unwrap();
        let r = verify_coloring(&f, &flat, VerifyOptions::default());
        let expected: Vec<(i64, i64)> = (0..9).map(|x| (x, x + 1)).collect();
        assert_eq!(r.violations, expected);
    }

    #[test]
    fn degree_violation_names_the_point() {
        let el = EdgeList::parse("0 1\n0 2\n0 3\n1 2\n").unwrap();
        let f = el.multifunction(None, Some((2, 2))).unwrap();
        let err = partition_multi(&f).unwrap_err();
        match err {
            KatetovError::DegreeBound { point, degree, direction, .. } => {
                assert_eq!(point, "\"0\"");
                assert_eq!(degree, 3);
                assert_eq!(direction, "out");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_list_rejects_bad_lines() {
        assert!(matches!(EdgeList::parse("1 2\n3\n"), Err(KatetovError::Parse { line: 2, .. })));
        let el = EdgeList::parse("# comment\na b # trailing\n\nb c\n").unwrap();
        assert_eq!(el.points, ["a", "b", "c"]);
        let f = el.multifunction(Some(2), None).unwrap();
        assert_eq!(f.forward(&"b".to_string()), ["c".to_string()]);
        let c = partition_multi(&f).unwrap();
        assert_eq!(c.boundary(), &["b".to_string()]);
    }

    #[test]
    fn adjunction_detects_inconsistent_lists() {
        let f = MultiFunction::from_lists(vec![0, 1], vec![vec![1], vec![]], vec![vec![], vec![]], 1, 1).unwrap();
        assert_eq!(f.adjunction_mismatches(), vec![(0, 1)]);
    }
}
