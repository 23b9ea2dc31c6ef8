//! Three descriptions of the same trees: set systems, rooted leaf-labelled
//! trees and compatible partition systems, with the maps between them.
//!
//! Rooted trees carry a distinguished leaf `0`. Every internal vertex has at
//! least two children, and the vertex next to leaf `0` is the top.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::forests::{Forest, Tree};
use crate::groundset::{Family, GroundSet, Subset};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Leaf(usize),
    Node(Vec<Branch>),
}

impl Branch {
    pub fn leaves(&self) -> Subset {
        match self {
            Branch::Leaf(i) => Subset::singleton(*i),
            Branch::Node(ch) => ch.iter().fold(Subset::EMPTY, |a, c| a.union(c.leaves())),
        }
    }

    fn min_leaf(&self) -> usize {
        self.leaves().min_element().unwrap_or(0)
    }

    fn canonicalize(&mut self) {
        if let Branch::Node(ch) = self {
            for c in ch.iter_mut() {
                c.canonicalize();
            }
            ch.sort_by_key(Branch::min_leaf);
        }
    }

    fn clusters(&self, out: &mut Vec<Subset>) -> Subset {
        match self {
            Branch::Leaf(i) => Subset::singleton(*i),
            Branch::Node(ch) => {
                let mut s = Subset::EMPTY;
                for c in ch {
                    s = s.union(c.clusters(out));
                }
                out.push(s);
                s
            }
        }
    }

    fn check(&self, seen: &mut Subset) -> Result<()> {
        match self {
            Branch::Leaf(i) => {
                if *i == 0 || *i > 31 {
                    return Err(Error::InvalidRootedTree(alloc::format!("leaf label {i}")));
                }
                if seen.contains(*i) {
                    return Err(Error::InvalidRootedTree(alloc::format!("leaf {i} repeated")));
                }
                *seen = seen.with(*i);
                Ok(())
            }
            Branch::Node(ch) => {
                if ch.len() < 2 {
                    return Err(Error::InvalidRootedTree("internal vertex of valence < 3".to_string()));
                }
                ch.iter().try_for_each(|c| c.check(seen))
            }
        }
    }

    /// Drops leaves outside `keep` and suppresses vertices left with one child.
    fn restrict(&self, keep: Subset) -> Option<Branch> {
        match self {
            Branch::Leaf(i) => keep.contains(*i).then_some(Branch::Leaf(*i)),
            Branch::Node(ch) => {
                let mut kept: Vec<Branch> = ch.iter().filter_map(|c| c.restrict(keep)).collect();
                match kept.len() {
                    0 => None,
                    1 => kept.pop(),
                    _ => Some(Branch::Node(kept)),
                }
            }
        }
    }

    fn internal_edges(&self) -> usize {
        match self {
            Branch::Leaf(_) => 0,
            Branch::Node(ch) => ch
                .iter()
                .map(|c| match c {
                    Branch::Leaf(_) => 0,
                    Branch::Node(_) => 1 + c.internal_edges(),
                })
                .sum(),
        }
    }

    /// Contracts the internal edges whose preorder index has its bit set in
    /// `mask`; `next` is the running edge index.
    fn contract(&self, mask: u64, next: &mut usize) -> Branch {
        match self {
            Branch::Leaf(i) => Branch::Leaf(*i),
            Branch::Node(ch) => {
                let mut out = Vec::new();
                for c in ch {
                    match c {
                        Branch::Leaf(i) => out.push(Branch::Leaf(*i)),
                        Branch::Node(_) => {
                            let e = *next;
                            *next += 1;
                            match c.contract(mask, next) {
                                Branch::Node(grand) if mask >> e & 1 == 1 => out.extend(grand),
                                other => out.push(other),
                            }
                        }
                    }
                }
                Branch::Node(out)
            }
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Leaf(i) => write!(f, "{i}"),
            Branch::Node(ch) => {
                f.write_str("(")?;
                for (k, c) in ch.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }
    }
}

/// A tree with leaves `{0} + leaves()`, rooted at leaf `0`, kept in
/// canonical form: children are ordered by their smallest leaf.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootedTree {
    top: Branch,
}

impl RootedTree {
    pub fn new(mut top: Branch) -> Result<Self> {
        if !matches!(top, Branch::Node(_)) {
            return Err(Error::InvalidRootedTree("top vertex must be internal".to_string()));
        }
        let mut seen = Subset::EMPTY;
        top.check(&mut seen)?;
        top.canonicalize();
        Ok(RootedTree { top })
    }

    pub fn top(&self) -> &Branch {
        &self.top
    }

    pub fn leaves(&self) -> Subset {
        self.top.leaves()
    }

    /// Leaves below each internal vertex.
    pub fn clusters(&self) -> Vec<Subset> {
        let mut out = Vec::new();
        self.top.clusters(&mut out);
        out.sort();
        out
    }

    pub fn internal_edges(&self) -> usize {
        self.top.internal_edges()
    }

    /// Parses `(0,(1,2,(3,4)))`.
    pub fn parse(text: &str) -> Result<Self> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut p = Parser { s: t.as_bytes(), i: 0 };
        let outer = p.branch()?;
        if p.i != p.s.len() {
            return Err(Error::Parse(alloc::format!("trailing input in {text:?}")));
        }
        match outer {
            Branch::Node(mut ch) if ch.len() == 2 && ch.contains(&Branch::Leaf(0)) => {
                ch.retain(|c| *c != Branch::Leaf(0));
                RootedTree::new(ch.pop().expect("two children"))
            }
            _ => Err(Error::Parse(alloc::format!("expected (0,<tree>), got {text:?}"))),
        }
    }
}

impl fmt::Display for RootedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(0,{})", self.top)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    i: usize,
}

impl Parser<'_> {
    fn branch(&mut self) -> Result<Branch> {
        match self.s.get(self.i) {
            Some(b'(') => {
                self.i += 1;
                let mut ch = alloc::vec![self.branch()?];
                loop {
                    match self.s.get(self.i) {
                        Some(b',') => {
                            self.i += 1;
                            ch.push(self.branch()?);
                        }
                        Some(b')') => {
                            self.i += 1;
                            return Ok(Branch::Node(ch));
                        }
                        _ => return Err(Error::Parse("expected ',' or ')'".to_string())),
                    }
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.s.get(self.i).is_some_and(u8::is_ascii_digit) {
                    self.i += 1;
                }
                let text = core::str::from_utf8(&self.s[start..self.i]).expect("ascii");
                text.parse()
                    .map(Branch::Leaf)
                    .map_err(|_| Error::Parse(alloc::format!("bad leaf {text:?}")))
            }
            _ => Err(Error::Parse(alloc::format!("unexpected input at {}", self.i))),
        }
    }
}

/// Rooted tree to set tree: each internal vertex becomes the set of leaves
/// below it.
pub fn u3(t: &RootedTree, ground: GroundSet) -> Result<Tree> {
    Tree::new(Family::new(ground, t.clusters())?)
}

/// Set tree to rooted tree: members become internal vertices.
pub fn t3(tree: &Tree) -> RootedTree {
    fn build(f: &Forest, t: Subset) -> Branch {
        let kids = f.maximal_under(t).expect("member");
        let covered = kids.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
        let mut ch: Vec<Branch> = kids.into_iter().map(|k| build(f, k)).collect();
        ch.extend(t.difference(covered).iter().map(Branch::Leaf));
        Branch::Node(ch)
    }
    RootedTree::new(build(tree.forest(), tree.root())).expect("members have at least two elements")
}

/// A choice of partition `w_T` of every subset `T` with at least two
/// elements, each with at least two blocks. Two-element sets always get the
/// discrete partition and are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSystem {
    ground: GroundSet,
    blocks: BTreeMap<Subset, Vec<Subset>>,
}

/// `w` restricted to `u`, or `None` when `u` lies in a single block.
pub fn restrict_partition(w: &[Subset], u: Subset) -> Option<Vec<Subset>> {
    let mut out: Vec<Subset> = w.iter().map(|b| b.intersection(u)).filter(|b| !b.is_empty()).collect();
    if out.len() < 2 {
        return None;
    }
    out.sort_by_key(|b| b.min_element());
    Some(out)
}

impl PartitionSystem {
    /// Checks every partition and the compatibility condition: whenever
    /// `U` is inside `T` and not inside one block of `w_T`, `w_U` is the
    /// restriction of `w_T`.
    pub fn new(ground: GroundSet, blocks: BTreeMap<Subset, Vec<Subset>>) -> Result<Self> {
        let bad = |m: String| Err(Error::InvalidPartitionSystem(m));
        for t in ground.subsets(3) {
            let Some(w) = blocks.get(&t) else {
                return bad(alloc::format!("missing partition of {t}"));
            };
            if w.len() < 2 {
                return bad(alloc::format!("partition of {t} has one block"));
            }
            let mut cover = Subset::EMPTY;
            for &b in w {
                if b.is_empty() || cover.intersects(b) {
                    return bad(alloc::format!("blocks of {t} are not disjoint and nonempty"));
                }
                cover = cover.union(b);
            }
            if cover != t {
                return bad(alloc::format!("blocks do not cover {t}"));
            }
        }
        if let Some(k) = blocks.keys().find(|k| k.len() < 3 || !ground.contains(**k)) {
            return bad(alloc::format!("unexpected key {k}"));
        }
        let mut blocks = blocks;
        for w in blocks.values_mut() {
            w.sort_by_key(|b| b.min_element());
        }
        let ps = PartitionSystem { ground, blocks };
        for t in ground.subsets(3) {
            let wt = ps.partition(t);
            for u in ground.subsets(2) {
                if u.is_proper_subset(t) {
                    if let Some(r) = restrict_partition(&wt, u) {
                        if r != ps.partition(u) {
                            return bad(alloc::format!("{u} and {t} are incompatible"));
                        }
                    }
                }
            }
        }
        Ok(ps)
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    /// The stored partition, or the discrete one for a two-element set.
    pub fn partition(&self, t: Subset) -> Vec<Subset> {
        if t.len() == 2 {
            return t.iter().map(Subset::singleton).collect();
        }
        self.blocks.get(&t).cloned().unwrap_or_default()
    }
}

/// Rooted tree to partition system: `w_U` is cut out by the children of the
/// smallest internal vertex above all of `U`.
pub fn t1(t: &RootedTree, ground: GroundSet) -> Result<PartitionSystem> {
    let tree = u3(t, ground)?;
    let mut blocks = BTreeMap::new();
    for u in ground.subsets(3) {
        let root = tree.root_of(u).expect("the root contains everything");
        let classes = tree.children(root)?;
        let w = restrict_partition(classes.classes(), u).expect("u is not inside a child");
        blocks.insert(u, w);
    }
    PartitionSystem::new(ground, blocks)
}

/// Partition system to set tree: the sets that lie in a single block of the
/// partition of every strictly larger set.
pub fn t2(ps: &PartitionSystem) -> Tree {
    let ground = ps.ground();
    let all = ground.subsets(2);
    let parts: Vec<Subset> = all
        .iter()
        .copied()
        .filter(|&u| {
            all.iter()
                .filter(|t| u.is_proper_subset(**t))
                .all(|&t| restrict_partition(&ps.partition(t), u).is_none())
        })
        .collect();
    Tree::new_unchecked(Family::new(ground, parts).expect("valid subsets"))
}

/// `{V & t : |V & t| > 1}`, a tree rooted at `t`.
pub fn restrict_set(tree: &Tree, t: Subset) -> Result<Tree> {
    if t.len() < 2 || !t.is_subset(tree.root()) {
        return Err(Error::NotAMember(t));
    }
    let parts = tree.parts().iter().map(|v| v.intersection(t)).filter(|v| v.len() > 1);
    Tree::new(Family::new(tree.ground(), parts)?)
}

/// Deletes the leaves outside `t` and suppresses two-valent vertices.
pub fn restrict_rooted(tree: &RootedTree, t: Subset) -> Result<RootedTree> {
    if t.len() < 2 || !t.is_subset(tree.leaves()) {
        return Err(Error::NotAMember(t));
    }
    let top = tree.top.restrict(t).expect("t is nonempty");
    RootedTree::new(top)
}

/// `a <= b` for set trees: inclusion.
pub fn order_leq_set(a: &Tree, b: &Tree) -> bool {
    a.root() == b.root() && a.parts().iter().all(|&u| b.contains(u))
}

/// Largest number of internal edges [`order_leq_rooted`] will search.
pub const CONTRACTION_SEARCH_LIMIT: usize = 20;

/// `a <= b` for rooted trees: `a` is obtained from `b` by contracting
/// internal edges. Searches every set of edges.
pub fn order_leq_rooted(a: &RootedTree, b: &RootedTree) -> Result<bool> {
    if a.leaves() != b.leaves() {
        return Ok(false);
    }
    let e = b.internal_edges();
    if e > CONTRACTION_SEARCH_LIMIT {
        return Err(Error::TooLarge(alloc::format!("{e} internal edges")));
    }
    let want = e.checked_sub(a.internal_edges());
    let Some(want) = want else { return Ok(false) };
    for mask in 0u64..(1u64 << e) {
        if mask.count_ones() as usize != want {
            continue;
        }
        let c = RootedTree::new(b.top.contract(mask, &mut 0)).expect("contraction keeps valence");
        if c == *a {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Given a tree and a tree on the children of each of its members, glue them
/// into one tree containing the base.
pub fn graft(base: &Tree, components: &BTreeMap<Subset, Tree>) -> Result<Tree> {
    let mut parts = Vec::new();
    for &t in base.parts() {
        let q = base.children(t)?;
        let comp = components.get(&t).ok_or(Error::GraftMismatch(t))?;
        if comp.ground().n() != q.len() || !comp.is_s_tree() {
            return Err(Error::GraftMismatch(t));
        }
        parts.extend(comp.parts().iter().map(|&u| q.preimage(u)));
    }
    Tree::new(Family::new(base.ground(), parts)?)
}

/// Inverse of [`graft`] on trees containing `base`.
pub fn ungraft(base: &Tree, tree: &Tree) -> Result<BTreeMap<Subset, Tree>> {
    if let Some(&t) = base.parts().iter().find(|&&t| !tree.contains(t)) {
        return Err(Error::NotAMember(t));
    }
    let mut out = BTreeMap::new();
    for &t in base.parts() {
        let q = base.children(t)?;
        let parts = tree
            .parts()
            .iter()
            .filter(|&&u| base.root_of(u) == Some(t))
            .map(|&u| q.image(u));
        out.insert(t, Tree::new(Family::new(q.ground()?, parts)?)?);
    }
    Ok(out)
}

/// The trees on `S + {n+1}` that restrict to the given S-tree.
pub fn fiber(tree: &Tree) -> Result<Vec<Tree>> {
    if !tree.is_s_tree() {
        return Err(Error::NotATree(tree.maximal().len()));
    }
    let n = tree.ground().n();
    let big = GroundSet::new(n + 1).map_err(|_| Error::TooLarge(alloc::format!("fiber needs n <= 15, got {n}")))?;
    let plus = n + 1;
    let mut out = Vec::with_capacity(2 * tree.len() + n);
    let make = |parts: Vec<Subset>| Tree::new(Family::new(big, parts)?);
    for &t in tree.parts() {
        let mut a: Vec<Subset> =
            tree.parts().iter().map(|&u| if t.is_subset(u) { u.with(plus) } else { u }).collect();
        out.push(make(a.clone())?);
        a.push(t);
        out.push(make(a)?);
    }
    for i in 1..=n {
        let mut c: Vec<Subset> =
            tree.parts().iter().map(|&u| if u.contains(i) { u.with(plus) } else { u }).collect();
        c.push(Subset::singleton(i).with(plus));
        out.push(make(c)?);
    }
    Ok(out)
}
