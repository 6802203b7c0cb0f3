//! Classical discrete groups and their fusion rings (all dimensions 1).

use std::collections::{HashMap, VecDeque};
use std::fmt::Debug;
use std::hash::Hash;

use super::{FusionError, FusionRules, Multiset};
use crate::linalg::{identity, CMatrix};

pub trait DiscreteGroup: Send + Sync {
    type Elem: Clone + Eq + Ord + Hash + Debug + Send + Sync;

    fn group_name(&self) -> String;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn contains(&self, a: &Self::Elem) -> bool;
    /// `None` for infinite groups.
    fn order(&self) -> Option<usize>;
    /// First `n` elements in the deterministic enumeration order.
    fn window(&self, n: usize) -> Vec<Self::Elem>;
    fn elem_name(&self, a: &Self::Elem) -> String;
    fn parse_elem(&self, s: &str) -> Result<Self::Elem, FusionError>;
}

/// A finite group given by its Cayley table; element `0` is the identity.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    names: Vec<String>,
}

impl FiniteGroup {
    /// Validates closure, identity, inverses and associativity.
    pub fn from_cayley(name: impl Into<String>, table: Vec<Vec<usize>>) -> Result<Self, FusionError> {
        let n = table.len();
        if n == 0 {
            return Err(FusionError::NotAGroup("empty table".into()));
        }
        if let Some(i) = table.iter().position(|row| row.len() != n) {
            return Err(FusionError::NotAGroup(format!("row {i} does not have {n} entries")));
        }
        if let Some((i, j)) = iter_pairs(n).find(|&(i, j)| table[i][j] >= n) {
            return Err(FusionError::NotAGroup(format!("entry ({i}, {j}) = {} out of range", table[i][j])));
        }
        for g in 0..n {
            if table[0][g] != g || table[g][0] != g {
                return Err(FusionError::NotAGroup(format!("0 is not an identity for element {g}")));
            }
        }
        let mut inverse = vec![usize::MAX; n];
        for g in 0..n {
            match (0..n).find(|&h| table[g][h] == 0 && table[h][g] == 0) {
                Some(h) => inverse[g] = h,
                None => return Err(FusionError::NotAGroup(format!("element {g} has no inverse"))),
            }
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(FusionError::NotAGroup(format!(
                            "associativity fails at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            name: name.into(),
            names: (0..n).map(|g| g.to_string()).collect(),
            table,
            inverse,
        })
    }

    /// Closes a generating set under multiplication. Elements are numbered in
    /// breadth-first order from the identity and named by their shortest word
    /// in the generator letters `a, b, c, ...`.
    pub fn generate<T, K>(
        name: impl Into<String>,
        identity: T,
        gens: &[T],
        mul: impl Fn(&T, &T) -> T,
        key: impl Fn(&T) -> K,
    ) -> Result<(Self, Vec<T>, Vec<usize>), FusionError>
    where
        T: Clone,
        K: Hash + Eq,
    {
        let mut elems = vec![identity.clone()];
        let mut words = vec![String::new()];
        let mut index: HashMap<K, usize> = HashMap::new();
        index.insert(key(&identity), 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(g) = queue.pop_front() {
            for (k, s) in gens.iter().enumerate() {
                let h = mul(&elems[g], s);
                let kh = key(&h);
                if !index.contains_key(&kh) {
                    index.insert(kh, elems.len());
                    let letter = (b'a' + k as u8) as char;
                    words.push(format!("{}{letter}", words[g]));
                    elems.push(h);
                    queue.push_back(elems.len() - 1);
                }
                if elems.len() > 10_000 {
                    return Err(FusionError::NotAGroup("generated group is too large".into()));
                }
            }
        }
        let n = elems.len();
        let mut table = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let p = mul(&elems[i], &elems[j]);
                table[i][j] = *index
                    .get(&key(&p))
                    .ok_or_else(|| FusionError::NotAGroup("generators do not close".into()))?;
            }
        }
        let gen_idx = gens
            .iter()
            .map(|s| index[&key(s)])
            .collect::<Vec<_>>();
        let mut group = FiniteGroup::from_cayley(name, table)?;
        group.names = words
            .into_iter()
            .map(|w| if w.is_empty() { "e".to_string() } else { w })
            .collect();
        Ok((group, elems, gen_idx))
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn is_abelian(&self) -> bool {
        iter_pairs(self.len()).all(|(a, b)| self.table[a][b] == self.table[b][a])
    }

    pub fn elem_order(&self, g: usize) -> usize {
        let mut k = 1;
        let mut x = g;
        while x != 0 {
            x = self.table[x][g];
            k += 1;
        }
        k
    }

    /// Conjugacy classes, each listed in increasing element order; the class
    /// of the identity comes first.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut classes = Vec::new();
        for g in 0..n {
            if seen[g] {
                continue;
            }
            let mut class: Vec<usize> = (0..n)
                .map(|h| self.table[self.table[h][g]][self.inverse[h]])
                .collect();
            class.sort_unstable();
            class.dedup();
            for &x in &class {
                seen[x] = true;
            }
            classes.push(class);
        }
        classes
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        if names.len() == self.len() {
            self.names = names;
        }
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Cyclic group `Z/n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup::from_cayley(format!("Z/{n}"), table).expect("cyclic table is a group")
    }
}

fn iter_pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |i| (0..n).map(move |j| (i, j)))
}

impl DiscreteGroup for FiniteGroup {
    type Elem = usize;

    fn group_name(&self) -> String {
        self.name.clone()
    }

    fn identity(&self) -> usize {
        0
    }

    fn mul(&self, a: &usize, b: &usize) -> usize {
        self.table[*a][*b]
    }

    fn inv(&self, a: &usize) -> usize {
        self.inverse[*a]
    }

    fn contains(&self, a: &usize) -> bool {
        *a < self.len()
    }

    fn order(&self) -> Option<usize> {
        Some(self.len())
    }

    fn window(&self, n: usize) -> Vec<usize> {
        (0..n.min(self.len())).collect()
    }

    fn elem_name(&self, a: &usize) -> String {
        self.names.get(*a).cloned().unwrap_or_else(|| format!("#{a}"))
    }

    fn parse_elem(&self, s: &str) -> Result<usize, FusionError> {
        let s = s.trim();
        if let Some(i) = self.names.iter().position(|n| n == s) {
            return Ok(i);
        }
        match s.parse::<usize>() {
            Ok(i) if i < self.len() => Ok(i),
            _ => Err(FusionError::UnknownLabel(s.to_string())),
        }
    }
}

/// Free abelian group `Z^d`. Enumeration: by sup-norm shells, and inside a
/// shell lexicographically in the coordinate order `0, 1, -1, 2, -2, ...`.
#[derive(Debug, Clone)]
pub struct FreeAbelian {
    rank: usize,
}

impl FreeAbelian {
    pub fn new(rank: usize) -> Self {
        assert!(rank >= 1, "rank must be positive");
        FreeAbelian { rank }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }
}

fn z_key(n: i64) -> u64 {
    if n > 0 {
        2 * n as u64 - 1
    } else {
        2 * n.unsigned_abs()
    }
}

impl DiscreteGroup for FreeAbelian {
    type Elem = Vec<i64>;

    fn group_name(&self) -> String {
        if self.rank == 1 {
            "Z".into()
        } else {
            format!("Z^{}", self.rank)
        }
    }

    fn identity(&self) -> Vec<i64> {
        vec![0; self.rank]
    }

    fn mul(&self, a: &Vec<i64>, b: &Vec<i64>) -> Vec<i64> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inv(&self, a: &Vec<i64>) -> Vec<i64> {
        a.iter().map(|x| -x).collect()
    }

    fn contains(&self, a: &Vec<i64>) -> bool {
        a.len() == self.rank
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn window(&self, n: usize) -> Vec<Vec<i64>> {
        let mut out = Vec::with_capacity(n);
        let mut radius = 0i64;
        while out.len() < n {
            let mut shell: Vec<Vec<i64>> = cube(self.rank, radius)
                .into_iter()
                .filter(|p| p.iter().map(|x| x.abs()).max().unwrap_or(0) == radius)
                .collect();
            shell.sort_by_key(|p| p.iter().map(|&x| z_key(x)).collect::<Vec<_>>());
            out.extend(shell);
            radius += 1;
        }
        out.truncate(n);
        out
    }

    fn elem_name(&self, a: &Vec<i64>) -> String {
        if self.rank == 1 {
            a[0].to_string()
        } else {
            let parts: Vec<String> = a.iter().map(|x| x.to_string()).collect();
            format!("({})", parts.join(","))
        }
    }

    fn parse_elem(&self, s: &str) -> Result<Vec<i64>, FusionError> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts: Result<Vec<i64>, _> = inner.split(',').map(|p| p.trim().parse::<i64>()).collect();
        match parts {
            Ok(v) if v.len() == self.rank => Ok(v),
            _ => Err(FusionError::UnknownLabel(s.trim().to_string())),
        }
    }
}

fn cube(rank: usize, r: i64) -> Vec<Vec<i64>> {
    let mut pts = vec![Vec::new()];
    for _ in 0..rank {
        let mut next = Vec::new();
        for p in &pts {
            for x in -r..=r {
                let mut q = p.clone();
                q.push(x);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

/// Free group on `rank` generators. Elements are reduced words; letter `k`
/// stands for generator `k` and `-k` for its inverse. Written with letters
/// `a, b, ...` and upper case for inverses; `e` is the empty word.
#[derive(Debug, Clone)]
pub struct FreeGroup {
    rank: usize,
}

impl FreeGroup {
    pub fn new(rank: usize) -> Self {
        assert!((1..=26).contains(&rank), "rank must be in 1..=26");
        FreeGroup { rank }
    }

    /// All reduced words up to the given length, in length-lexicographic order.
    pub fn ball(&self, max_len: usize) -> Vec<Vec<i32>> {
        let letters = self.letters();
        let mut out = vec![Vec::new()];
        let mut layer: Vec<Vec<i32>> = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    if w.last() != Some(&-l) {
                        let mut x = w.clone();
                        x.push(l);
                        next.push(x);
                    }
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }

    fn letters(&self) -> Vec<i32> {
        (1..=self.rank as i32).flat_map(|k| [k, -k]).collect()
    }
}

impl DiscreteGroup for FreeGroup {
    type Elem = Vec<i32>;

    fn group_name(&self) -> String {
        format!("F{}", self.rank)
    }

    fn identity(&self) -> Vec<i32> {
        Vec::new()
    }

    fn mul(&self, a: &Vec<i32>, b: &Vec<i32>) -> Vec<i32> {
        let mut out = a.clone();
        for &l in b {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        out
    }

    fn inv(&self, a: &Vec<i32>) -> Vec<i32> {
        a.iter().rev().map(|l| -l).collect()
    }

    fn contains(&self, a: &Vec<i32>) -> bool {
        a.iter().all(|&l| l != 0 && l.unsigned_abs() as usize <= self.rank)
            && a.windows(2).all(|p| p[0] != -p[1])
    }

    fn order(&self) -> Option<usize> {
        None
    }

    fn window(&self, n: usize) -> Vec<Vec<i32>> {
        let mut len = 0;
        loop {
            let ball = self.ball(len);
            if ball.len() >= n {
                return ball.into_iter().take(n).collect();
            }
            len += 1;
        }
    }

    fn elem_name(&self, a: &Vec<i32>) -> String {
        if a.is_empty() {
            return "e".into();
        }
        a.iter()
            .map(|&l| {
                let ch = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
                if l < 0 {
                    ch.to_ascii_uppercase()
                } else {
                    ch
                }
            })
            .collect()
    }

    fn parse_elem(&self, s: &str) -> Result<Vec<i32>, FusionError> {
        let s = s.trim();
        if s == "e" || s.is_empty() {
            return Ok(Vec::new());
        }
        let mut word = Vec::new();
        for ch in s.chars() {
            if !ch.is_ascii_alphabetic() {
                return Err(FusionError::UnknownLabel(s.to_string()));
            }
            let k = (ch.to_ascii_lowercase() as u8 - b'a') as i32 + 1;
            if k as usize > self.rank {
                return Err(FusionError::UnknownLabel(s.to_string()));
            }
            word.push(if ch.is_ascii_uppercase() { -k } else { k });
        }
        Ok(self.mul(&Vec::new(), &word))
    }
}

/// Fusion ring of a classical discrete group: `I_{u⊗v} = {uv}`, every
/// dimension 1, conjugation is inversion.
#[derive(Debug, Clone)]
pub struct GroupFusionRing<G> {
    group: G,
    pub(crate) unit: Vec<CMatrix>,
}

impl<G: DiscreteGroup> GroupFusionRing<G> {
    pub fn new(group: G) -> Self {
        GroupFusionRing { group, unit: vec![identity(1)] }
    }

    pub fn group(&self) -> &G {
        &self.group
    }
}

impl<G: DiscreteGroup> FusionRules for GroupFusionRing<G> {
    type Label = G::Elem;

    fn ring_name(&self) -> String {
        self.group.group_name()
    }

    fn trivial(&self) -> G::Elem {
        self.group.identity()
    }

    fn contains(&self, u: &G::Elem) -> bool {
        self.group.contains(u)
    }

    fn dim(&self, u: &G::Elem) -> Result<usize, FusionError> {
        self.check_label(u)?;
        Ok(1)
    }

    fn conj(&self, u: &G::Elem) -> Result<G::Elem, FusionError> {
        self.check_label(u)?;
        Ok(self.group.inv(u))
    }

    fn fuse(&self, u: &G::Elem, v: &G::Elem) -> Result<Multiset<G::Elem>, FusionError> {
        self.check_label(u)?;
        self.check_label(v)?;
        Ok(Multiset::singleton(self.group.mul(u, v)))
    }

    fn dim_bound(&self) -> Option<usize> {
        Some(1)
    }

    fn label_count(&self) -> Option<usize> {
        self.group.order()
    }

    fn window(&self, n: usize) -> Vec<G::Elem> {
        self.group.window(n)
    }

    fn label_name(&self, u: &G::Elem) -> String {
        self.group.elem_name(u)
    }

    fn parse_label(&self, s: &str) -> Result<G::Elem, FusionError> {
        self.group.parse_elem(s)
    }
}

#[derive(Debug, Clone)]
pub enum GroupSpec {
    Cayley { name: String, table: Vec<Vec<usize>> },
    FreeAbelian { rank: usize },
    FreeGroup { rank: usize },
}

pub enum AnyGroupRing {
    Finite(GroupFusionRing<FiniteGroup>),
    FreeAbelian(GroupFusionRing<FreeAbelian>),
    Free(GroupFusionRing<FreeGroup>),
}

pub fn group_fusion_ring(spec: GroupSpec) -> Result<AnyGroupRing, FusionError> {
    Ok(match spec {
        GroupSpec::Cayley { name, table } => {
            AnyGroupRing::Finite(GroupFusionRing::new(FiniteGroup::from_cayley(name, table)?))
        }
        GroupSpec::FreeAbelian { rank } if rank >= 1 => {
            AnyGroupRing::FreeAbelian(GroupFusionRing::new(FreeAbelian::new(rank)))
        }
        GroupSpec::FreeGroup { rank } if (1..=26).contains(&rank) => {
            AnyGroupRing::Free(GroupFusionRing::new(FreeGroup::new(rank)))
        }
        _ => return Err(FusionError::Parse("unsupported group rank".into())),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_enumerate_in_zigzag_order() {
        let z = FreeAbelian::new(1);
        let w: Vec<i64> = z.window(7).into_iter().map(|v| v[0]).collect();
        assert_eq!(w, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn integer_ring_fuses_by_addition() {
        let r = GroupFusionRing::new(FreeAbelian::new(1));
        let m = r.fuse(&vec![2], &vec![3]).unwrap();
        assert_eq!(m, Multiset::singleton(vec![5]));
        assert_eq!(r.conj(&vec![4]).unwrap(), vec![-4]);
        assert_eq!(r.parse_label("-7").unwrap(), vec![-7]);
    }

    #[test]
    fn free_group_cancels_reduced_words() {
        let f = FreeGroup::new(2);
        let r = GroupFusionRing::new(f.clone());
        let a = f.parse_elem("a").unwrap();
        let a_inv = f.parse_elem("A").unwrap();
        assert_eq!(r.fuse(&a, &a_inv).unwrap(), Multiset::singleton(Vec::new()));
        assert_eq!(f.elem_name(&f.parse_elem("abBA").unwrap()), "e");
        assert_eq!(f.parse_elem("abBa").unwrap(), vec![1, 1]);
        assert_eq!(f.ball(4).len(), 161);
        assert_eq!(f.window(5).iter().map(|w| f.elem_name(w)).collect::<Vec<_>>(), ["e", "a", "A", "b", "B"]);
    }

    #[test]
    fn free_group_ball_is_length_lex() {
        let f = FreeGroup::new(2);
        let ball = f.ball(2);
        assert!(ball.windows(2).all(|p| p[0].len() <= p[1].len()));
        assert!(ball.iter().all(|w| f.contains(w)));
        let names: std::collections::BTreeSet<String> = ball.iter().map(|w| f.elem_name(w)).collect();
        assert_eq!(names.len(), ball.len());
    }

    #[test]
    fn cayley_table_must_be_associative() {
        // a latin square with identity 0 that is not associative (order 5 loop)
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_cayley("loop", t), Err(FusionError::NotAGroup(_))));
        let bad_identity = vec![vec![1, 0], vec![0, 1]];
        assert!(FiniteGroup::from_cayley("x", bad_identity).is_err());
    }

    #[test]
    fn z2_window_shells() {
        let z2 = FreeAbelian::new(2);
        let w = z2.window(9);
        assert_eq!(w[0], vec![0, 0]);
        assert!(w[1..].iter().all(|p| p.iter().map(|x| x.abs()).max() == Some(1)));
        assert_eq!(z2.parse_elem("(1,-2)").unwrap(), vec![1, -2]);
        assert_eq!(z2.elem_name(&vec![1, -2]), "(1,-2)");
    }
}
