//! Forests and trees as set systems.
//!
//! A forest is a family whose members are pairwise nested or disjoint. A tree
//! is a forest with a single maximal member, its root; an S-tree is a tree
//! whose root is the whole ground set.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::groundset::{Family, GroundSet, Quotient, Subset};

/// Returns the first pair of members that is neither nested nor disjoint.
pub fn validate_forest(f: &Family) -> core::result::Result<(), (Subset, Subset)> {
    let p = f.parts();
    for (i, &a) in p.iter().enumerate() {
        for &b in &p[i + 1..] {
            if !a.compatible(b) {
                return Err((a, b));
            }
        }
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Forest(Family);

impl Forest {
    pub fn new(f: Family) -> Result<Self> {
        validate_forest(&f).map_err(|(a, b)| Error::NotAForest(a, b))?;
        Ok(Forest(f))
    }

    pub(crate) fn new_unchecked(f: Family) -> Self {
        debug_assert!(validate_forest(&f).is_ok());
        Forest(f)
    }

    pub fn empty(ground: GroundSet) -> Self {
        Forest(Family::empty(ground))
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    pub fn into_family(self) -> Family {
        self.0
    }

    pub fn ground(&self) -> GroundSet {
        self.0.ground()
    }

    pub fn parts(&self) -> &[Subset] {
        self.0.parts()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.0.contains(s)
    }

    /// Members not strictly contained in another member.
    pub fn maximal(&self) -> Vec<Subset> {
        maximal_within(self.parts(), None)
    }

    /// Members strictly inside `t` and maximal with that property.
    pub fn maximal_under(&self, t: Subset) -> Result<Vec<Subset>> {
        if !self.contains(t) {
            return Err(Error::NotAMember(t));
        }
        Ok(maximal_within(self.parts(), Some(t)))
    }

    /// The smallest member containing `u`, if any.
    pub fn root_of(&self, u: Subset) -> Option<Subset> {
        // Kapranov order lists supersets first, so the last hit is smallest.
        self.parts().iter().rev().copied().find(|&t| u.is_subset(t))
    }

    /// `(m(F,T), n(F,T))`.
    pub fn mn(&self, t: Subset) -> Result<(i64, i64)> {
        let kids = self.maximal_under(t)?;
        Ok(mn_from_children(t, &kids))
    }

    pub fn m(&self, t: Subset) -> Result<i64> {
        self.mn(t).map(|p| p.0)
    }

    pub fn n(&self, t: Subset) -> Result<i64> {
        self.mn(t).map(|p| p.1)
    }

    /// The members contained in `t`, as a tree rooted at `t`.
    pub fn restrict(&self, t: Subset) -> Result<Tree> {
        if !self.contains(t) {
            return Err(Error::NotAMember(t));
        }
        let parts = self.parts().iter().copied().filter(|u| u.is_subset(t)).collect();
        Ok(Tree(Forest(Family::from_sorted(self.ground(), parts))))
    }

    /// Length of the longest chain under inclusion.
    pub fn depth(&self) -> usize {
        let p = self.parts();
        let mut d = alloc::vec![1usize; p.len()];
        // Supersets come first, so every member's parents are already done.
        for i in 0..p.len() {
            for j in 0..i {
                if p[i].is_proper_subset(p[j]) {
                    d[i] = d[i].max(d[j] + 1);
                }
            }
        }
        d.into_iter().max().unwrap_or(0)
    }

    pub fn totals(&self) -> Totals {
        let n = self
            .parts()
            .iter()
            .map(|&t| self.n(t).expect("member") as u64)
            .product();
        let m = (self.len() <= TOTALS_M_LIMIT).then(|| subforest_sum(self.parts()));
        Totals { m, n }
    }
}

/// Largest forest for which [`Forest::totals`] still sums over subforests.
pub const TOTALS_M_LIMIT: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Totals {
    /// Sum over subforests; `None` when the forest is too large to enumerate.
    pub m: Option<u64>,
    pub n: u64,
}

fn maximal_within(parts: &[Subset], under: Option<Subset>) -> Vec<Subset> {
    let inside: Vec<Subset> = parts
        .iter()
        .copied()
        .filter(|u| under.map_or(true, |t| u.is_proper_subset(t)))
        .collect();
    inside
        .iter()
        .copied()
        .filter(|&u| !inside.iter().any(|&v| u.is_proper_subset(v)))
        .collect()
}

fn mn_from_children(t: Subset, kids: &[Subset]) -> (i64, i64) {
    let top = t.len() as i64 - 1;
    let m = top - kids.iter().map(|u| u.len() as i64 - 1).sum::<i64>();
    let n = top - kids.iter().map(|u| u.len() as i64 - 2).sum::<i64>();
    (m, n)
}

fn subforest_sum(parts: &[Subset]) -> u64 {
    let k = parts.len();
    let mut total = 0u64;
    let mut sub = Vec::with_capacity(k);
    for bits in 0u32..(1u32 << k) {
        sub.clear();
        sub.extend((0..k).filter(|i| bits >> i & 1 == 1).map(|i| parts[i]));
        let mut prod = 1u64;
        for &t in &sub {
            let kids = maximal_within(&sub, Some(t));
            let (m, _) = mn_from_children(t, &kids);
            prod *= (m - 1) as u64;
            if prod == 0 {
                break;
            }
        }
        total += prod;
    }
    total
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Forest({})", self.0)
    }
}

/// A forest with exactly one maximal member.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tree(Forest);

impl Tree {
    pub fn new(f: Family) -> Result<Self> {
        Tree::from_forest(Forest::new(f)?)
    }

    pub fn from_forest(f: Forest) -> Result<Self> {
        let k = f.maximal().len();
        if k != 1 {
            return Err(Error::NotATree(k));
        }
        Ok(Tree(f))
    }

    pub(crate) fn new_unchecked(f: Family) -> Self {
        Tree(Forest::new_unchecked(f))
    }

    /// The tree `{S}`.
    pub fn trivial(ground: GroundSet) -> Self {
        Tree(Forest(Family::from_sorted(ground, alloc::vec![ground.full()])))
    }

    pub fn root(&self) -> Subset {
        // The root sorts first.
        self.0.parts()[0]
    }

    pub fn is_s_tree(&self) -> bool {
        self.root() == self.ground().full()
    }

    pub fn forest(&self) -> &Forest {
        &self.0
    }

    pub fn into_forest(self) -> Forest {
        self.0
    }

    /// Equivalence classes of `t`: two elements are equivalent when they lie in
    /// the same maximal member strictly below `t`.
    pub fn children(&self, t: Subset) -> Result<Quotient> {
        children_classes(self.forest(), t)
    }
}

pub(crate) fn children_classes(f: &Forest, t: Subset) -> Result<Quotient> {
    let kids = f.maximal_under(t)?;
    let covered = kids.iter().fold(Subset::EMPTY, |a, &b| a.union(b));
    let mut classes = kids;
    classes.extend(t.difference(covered).iter().map(Subset::singleton));
    Ok(Quotient::new(classes))
}

impl core::ops::Deref for Tree {
    type Target = Forest;

    fn deref(&self) -> &Forest {
        &self.0
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tree({})", self.0)
    }
}

/// The collapse of a family along one of its inclusion-minimal members `T`.
///
/// Forests of `L_plus` containing `T` correspond to forests of the collapsed
/// family `q_T(L_plus \ {T})` on `S/T`.
#[derive(Clone, Debug)]
pub struct Collapse {
    lplus: Family,
    t: Subset,
    quotient: Quotient,
    lbar: Family,
}

impl Collapse {
    pub fn new(lplus: &Family, t: Subset) -> Result<Self> {
        if !lplus.contains(t) {
            return Err(Error::NotAMember(t));
        }
        if lplus.parts().iter().any(|u| u.is_proper_subset(t)) {
            return Err(Error::NotMinimal(t));
        }
        let full = lplus.ground().full();
        if t == full {
            return Err(Error::NotMinimal(t));
        }
        let quotient = Quotient::collapse(full, t);
        let ground = quotient.ground()?;
        let lbar = Family::new(
            ground,
            lplus.parts().iter().filter(|&&u| u != t).map(|&u| quotient.image(u)),
        )?;
        Ok(Collapse { lplus: lplus.clone(), t, quotient, lbar })
    }

    pub fn collapsed(&self) -> &Family {
        &self.lbar
    }

    pub fn quotient(&self) -> &Quotient {
        &self.quotient
    }

    /// `b(F) = q_T(F \ {T})` for a forest of `L_plus` containing `T`.
    pub fn forward(&self, f: &Forest) -> Result<Forest> {
        if !f.contains(self.t) {
            return Err(Error::NotAMember(self.t));
        }
        if let Some(&u) = f.parts().iter().find(|&&u| !self.lplus.contains(u)) {
            return Err(Error::NotAMember(u));
        }
        let parts = f
            .parts()
            .iter()
            .filter(|&&u| u != self.t)
            .map(|&u| self.quotient.image(u));
        Forest::new(Family::new(self.lbar.ground(), parts)?)
    }

    /// `c(U) = q_T^{-1}(U) + {T}`.
    pub fn backward(&self, u: &Forest) -> Result<Forest> {
        let mut parts = Vec::with_capacity(u.len() + 1);
        parts.push(self.t);
        for &v in u.parts() {
            if !self.lbar.contains(v) {
                return Err(Error::NotAMember(v));
            }
            let w = self.quotient.preimage(v);
            if !self.lplus.contains(w) {
                return Err(Error::NotAMember(w));
            }
            parts.push(w);
        }
        Forest::new(Family::new(self.lplus.ground(), parts)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Forests,
    Trees,
}

/// Depth-first enumeration of the forests inside a candidate list.
///
/// Candidates are visited in Kapranov order, so a later candidate never
/// contains an earlier one. A candidate is added only when it is nested or
/// disjoint with everything chosen and `accept` agrees.
pub struct Enumerate<A> {
    ground: GroundSet,
    candidates: Vec<Subset>,
    chosen: Vec<Subset>,
    base: usize,
    stack: Vec<usize>,
    started: bool,
    accept: A,
}

impl<A: FnMut(&[Subset], Subset) -> bool> Iterator for Enumerate<A> {
    type Item = Forest;

    fn next(&mut self) -> Option<Forest> {
        if !self.started {
            self.started = true;
            self.stack.push(0);
            return Some(self.current());
        }
        while let Some(&from) = self.stack.last() {
            let hit = (from..self.candidates.len()).find(|&j| {
                let c = self.candidates[j];
                self.chosen.iter().all(|&u| u.compatible(c)) && (self.accept)(&self.chosen, c)
            });
            match hit {
                Some(j) => {
                    *self.stack.last_mut().expect("nonempty") = j + 1;
                    self.chosen.push(self.candidates[j]);
                    self.stack.push(j + 1);
                    return Some(self.current());
                }
                None => {
                    self.stack.pop();
                    if self.chosen.len() > self.base {
                        self.chosen.pop();
                    }
                }
            }
        }
        None
    }
}

impl<A> Enumerate<A> {
    fn current(&self) -> Forest {
        Forest::new_unchecked(Family::from_sorted(self.ground, self.chosen.clone()))
    }
}

/// Every forest (or every S-tree) on `{1..n}`.
pub fn enumerate(ground: GroundSet, kind: Kind) -> Enumerate<fn(&[Subset], Subset) -> bool> {
    fn any(_: &[Subset], _: Subset) -> bool {
        true
    }
    let all = ground.subsets(2);
    let root = (kind == Kind::Trees).then(|| ground.full());
    enumerate_within(ground, all, root, any)
}

/// Forests drawn from `candidates` (plus `root` when given, which is then in
/// every result). `candidates` must be Kapranov-sorted subsets of the root.
pub fn enumerate_within<A: FnMut(&[Subset], Subset) -> bool>(
    ground: GroundSet,
    mut candidates: Vec<Subset>,
    root: Option<Subset>,
    accept: A,
) -> Enumerate<A> {
    candidates.sort();
    candidates.dedup();
    let chosen: Vec<Subset> = root.into_iter().collect();
    candidates.retain(|&c| Some(c) != root && root.map_or(true, |r| c.is_subset(r)));
    Enumerate { ground, candidates, base: chosen.len(), chosen, stack: Vec::new(), started: false, accept }
}

/// Largest `n` accepted by [`tree_polynomial`].
pub const TREE_POLYNOMIAL_MAX_N: usize = 12;

/// Coefficients of `h_n(t) = sum over S-trees of t^{|tree|}`, lowest degree
/// first, from `h_2 = t` and `h_{k+1} = t^2 h_k' + t h_k' + k t h_k`.
pub fn tree_polynomial(n: usize) -> Result<Vec<u64>> {
    if !(2..=TREE_POLYNOMIAL_MAX_N).contains(&n) {
        return Err(Error::TooLarge(alloc::format!("tree polynomial needs 2 <= n <= 12, got {n}")));
    }
    let mut h: Vec<u64> = alloc::vec![0, 1];
    for k in 2..n {
        let mut next = alloc::vec![0u64; h.len() + 1];
        for (i, &c) in h.iter().enumerate() {
            if i >= 1 {
                let d = i as u64 * c;
                next[i + 1] += d;
                next[i] += d;
            }
            next[i + 1] += k as u64 * c;
        }
        h = next;
    }
    Ok(h)
}

/// The same polynomial, graded by enumerating trees.
pub fn tree_grading(ground: GroundSet) -> Vec<u64> {
    let mut h = alloc::vec![0u64; ground.n()];
    for t in enumerate(ground, Kind::Trees) {
        h[t.len()] += 1;
    }
    h
}
