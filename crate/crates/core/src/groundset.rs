//! Ground sets, subsets as bitmasks, and families of subsets.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::error::{Error, Result};

pub const MAX_N: usize = 16;

/// A ground set `{1..n}` with `2 <= n <= 16`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GroundSet {
    n: u8,
}

impl GroundSet {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_N).contains(&n) {
            return Err(Error::GroundSize(n));
        }
        Ok(GroundSet { n: n as u8 })
    }

    pub fn n(self) -> usize {
        self.n as usize
    }

    pub fn full(self) -> Subset {
        Subset::full(self.n())
    }

    pub fn contains(self, s: Subset) -> bool {
        s.is_subset(self.full())
    }

    pub fn check(self, s: Subset) -> Result<Subset> {
        if self.contains(s) {
            Ok(s)
        } else {
            Err(Error::NotInGround(s))
        }
    }

    /// Every subset of size at least `min_len`, in Kapranov order.
    pub fn subsets(self, min_len: usize) -> Vec<Subset> {
        let mut out: Vec<Subset> = (1u32..(1u32 << self.n))
            .map(Subset)
            .filter(|s| s.len() >= min_len)
            .collect();
        out.sort();
        out
    }

    /// Checked version of [`Subset::relation`].
    pub fn relation(self, a: Subset, b: Subset) -> Result<SubsetRelation> {
        self.check(a)?;
        self.check(b)?;
        Ok(a.relation(b))
    }
}

/// A finite set of positive integers below 32, stored as a bitmask where
/// element `i` is bit `i - 1`.
///
/// `Ord` is the Kapranov order: larger maximum first, then larger size
/// first, then smaller binary sum first. Supersets always sort before their
/// subsets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub const fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn full(n: usize) -> Self {
        if n >= 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        debug_assert!((1..=32).contains(&i));
        Subset(1u32 << (i - 1))
    }

    pub fn from_elements<I: IntoIterator<Item = usize>>(elements: I) -> Result<Self> {
        let mut mask = 0u32;
        for e in elements {
            if e == 0 || e > 32 {
                return Err(Error::ElementOutOfRange(e));
            }
            mask |= 1u32 << (e - 1);
        }
        Ok(Subset(mask))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=32).contains(&i) && self.0 & (1u32 << (i - 1)) != 0
    }

    pub fn is_subset(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Subset) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn intersects(self, other: Subset) -> bool {
        self.0 & other.0 != 0
    }

    pub fn union(self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    pub fn intersection(self, other: Subset) -> Subset {
        Subset(self.0 & other.0)
    }

    pub fn difference(self, other: Subset) -> Subset {
        Subset(self.0 & !other.0)
    }

    pub fn with(self, i: usize) -> Subset {
        self.union(Subset::singleton(i))
    }

    pub fn min_element(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max_element(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// Nested or disjoint.
    pub fn compatible(self, other: Subset) -> bool {
        !self.intersects(other) || self.is_subset(other) || other.is_subset(self)
    }

    /// Intersecting and incomparable.
    pub fn overlaps(self, other: Subset) -> bool {
        self.intersects(other) && !self.is_subset(other) && !other.is_subset(self)
    }

    pub fn relation(self, other: Subset) -> SubsetRelation {
        if self == other {
            SubsetRelation::Equal
        } else if self.is_subset(other) {
            SubsetRelation::Inside
        } else if other.is_subset(self) {
            SubsetRelation::Contains
        } else if self.intersects(other) {
            SubsetRelation::Overlapping
        } else {
            SubsetRelation::Disjoint
        }
    }
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(i as usize + 1)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let k = self.0.count_ones() as usize;
        (k, Some(k))
    }
}

impl ExactSizeIterator for Elements {}

impl Ord for Subset {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .max_element()
            .cmp(&self.max_element())
            .then(other.len().cmp(&self.len()))
            .then(self.0.cmp(&other.0))
    }
}

impl PartialOrd for Subset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl core::str::FromStr for Subset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(alloc::format!("expected {{...}}, got {s:?}")))?;
        if inner.is_empty() {
            return Ok(Subset::EMPTY);
        }
        let mut elems = Vec::new();
        for tok in inner.split(',') {
            let e: usize = tok
                .parse()
                .map_err(|_| Error::Parse(alloc::format!("bad element {tok:?}")))?;
            elems.push(e);
        }
        Subset::from_elements(elems)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SubsetRelation {
    Equal,
    /// The first set is a proper subset of the second.
    Inside,
    /// The second set is a proper subset of the first.
    Contains,
    Disjoint,
    Overlapping,
}

/// A set of subsets of a ground set, each of size at least two, kept sorted
/// in Kapranov order without duplicates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    ground: GroundSet,
    parts: Vec<Subset>,
}

impl Family {
    pub fn new<I: IntoIterator<Item = Subset>>(ground: GroundSet, parts: I) -> Result<Self> {
        let mut v = Vec::new();
        for p in parts {
            ground.check(p)?;
            if p.len() < 2 {
                return Err(Error::SubsetTooSmall(p));
            }
            v.push(p);
        }
        v.sort();
        v.dedup();
        Ok(Family { ground, parts: v })
    }

    /// Caller guarantees the parts are valid, sorted and distinct.
    pub(crate) fn from_sorted(ground: GroundSet, parts: Vec<Subset>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] < w[1]));
        Family { ground, parts }
    }

    pub fn empty(ground: GroundSet) -> Self {
        Family { ground, parts: Vec::new() }
    }

    /// Every subset of size at least two.
    pub fn power(ground: GroundSet) -> Self {
        Family { ground, parts: ground.subsets(2) }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn parts(&self) -> &[Subset] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.parts.binary_search(&s).is_ok()
    }

    pub fn support(&self) -> Subset {
        self.parts.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
    }

    pub fn with(&self, s: Subset) -> Result<Family> {
        Family::new(self.ground, self.parts.iter().copied().chain(core::iter::once(s)))
    }

    pub fn without(&self, s: Subset) -> Family {
        let parts = self.parts.iter().copied().filter(|&p| p != s).collect();
        Family { ground: self.ground, parts }
    }

    /// Contains the whole ground set and is closed under unions of
    /// intersecting pairs.
    pub fn is_thicket(&self) -> bool {
        if !self.contains(self.ground.full()) {
            return false;
        }
        for (i, &a) in self.parts.iter().enumerate() {
            for &b in &self.parts[i + 1..] {
                if a.intersects(b) && !self.contains(a.union(b)) {
                    return false;
                }
            }
        }
        true
    }

    /// The support cannot be split into two nonempty parts with every member
    /// inside one of them. The empty family is not connected.
    pub fn is_connected(&self) -> bool {
        let Some(&first) = self.parts.first() else {
            return false;
        };
        let mut reached = first;
        let mut used = alloc::vec![false; self.parts.len()];
        used[0] = true;
        loop {
            let mut grew = false;
            for (i, &p) in self.parts.iter().enumerate() {
                if !used[i] && p.intersects(reached) {
                    used[i] = true;
                    reached = reached.union(p);
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        used.iter().all(|&u| u)
    }

    /// Connected components of the graph joining overlapping members.
    pub fn chain_components(&self) -> Vec<Family> {
        let k = self.parts.len();
        let mut comp: Vec<usize> = (0..k).collect();
        fn find(c: &mut [usize], i: usize) -> usize {
            let mut r = i;
            while c[r] != r {
                r = c[r];
            }
            let mut j = i;
            while c[j] != r {
                let next = c[j];
                c[j] = r;
                j = next;
            }
            r
        }
        for i in 0..k {
            for j in i + 1..k {
                if self.parts[i].overlaps(self.parts[j]) {
                    let (a, b) = (find(&mut comp, i), find(&mut comp, j));
                    comp[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: alloc::collections::BTreeMap<usize, Vec<Subset>> = Default::default();
        for i in 0..k {
            let r = find(&mut comp, i);
            groups.entry(r).or_default().push(self.parts[i]);
        }
        groups
            .into_values()
            .map(|parts| Family::from_sorted(self.ground, parts))
            .collect()
    }

    /// Adds the union of every overlapping pair until nothing changes.
    pub fn completion(&self) -> Family {
        let mut set: BTreeSet<Subset> = self.parts.iter().copied().collect();
        loop {
            let cur: Vec<Subset> = set.iter().copied().collect();
            let mut added = false;
            for (i, &a) in cur.iter().enumerate() {
                for &b in &cur[i + 1..] {
                    if a.overlaps(b) && set.insert(a.union(b)) {
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        Family::from_sorted(self.ground, set.into_iter().collect())
    }

    /// Parses `[{1,2},{1,2,3}]`.
    pub fn parse(ground: GroundSet, text: &str) -> Result<Family> {
        let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let inner = t
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(alloc::format!("expected [...], got {text:?}")))?;
        let mut parts = Vec::new();
        let mut rest = inner;
        while !rest.is_empty() {
            let end = rest
                .find('}')
                .ok_or_else(|| Error::Parse("unterminated subset".to_string()))?;
            parts.push(rest[..=end].parse::<Subset>()?);
            rest = &rest[end + 1..];
            if let Some(r) = rest.strip_prefix(',') {
                if r.is_empty() {
                    return Err(Error::Parse("trailing comma".to_string()));
                }
                rest = r;
            } else if !rest.is_empty() {
                return Err(Error::Parse(alloc::format!("unexpected {rest:?}")));
            }
        }
        Family::new(ground, parts)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family(n={}, {})", self.ground.n(), self)
    }
}

/// The quotient of a set `X` by a partition of `X` into classes.
///
/// Classes are numbered `1..=k` in increasing order of their largest element,
/// so collapsing `T` inside `S` keeps the elements of `S \ T` in order and
/// puts the class of `T` where `max T` was.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quotient {
    classes: Vec<Subset>,
}

impl Quotient {
    pub fn new(mut classes: Vec<Subset>) -> Self {
        classes.sort_by_key(|c| c.max_element());
        Quotient { classes }
    }

    /// `X / T`: `T` becomes one class, every other element of `x` its own.
    pub fn collapse(x: Subset, t: Subset) -> Self {
        let mut classes: Vec<Subset> = x.difference(t).iter().map(Subset::singleton).collect();
        classes.push(t);
        Quotient::new(classes)
    }

    pub fn classes(&self) -> &[Subset] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn domain(&self) -> Subset {
        self.classes.iter().fold(Subset::EMPTY, |a, &b| a.union(b))
    }

    pub fn ground(&self) -> Result<GroundSet> {
        GroundSet::new(self.classes.len())
    }

    pub fn class_of(&self, i: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(i)).map(|k| k + 1)
    }

    pub fn image(&self, u: Subset) -> Subset {
        let mut out = 0u32;
        for (k, c) in self.classes.iter().enumerate() {
            if c.intersects(u) {
                out |= 1 << k;
            }
        }
        Subset::from_mask(out)
    }

    pub fn preimage(&self, v: Subset) -> Subset {
        v.iter()
            .filter_map(|k| self.classes.get(k - 1))
            .fold(Subset::EMPTY, |a, &b| a.union(b))
    }
}

/// The first `k` entries of the Kapranov order on subsets of size at least two.
pub fn kapranov_prefix(ground: GroundSet, k: usize) -> Family {
    let mut parts = ground.subsets(2);
    parts.truncate(k);
    Family::from_sorted(ground, parts)
}
