//! Points of the compactified space as compatible families of lines.
//!
//! A line in `V_T` is a non-constant function `T -> Q` modulo adding
//! constants and scaling, stored in a canonical form: the value at `min T`
//! is zero and the first nonzero value is one.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forests::Tree;
use crate::groundset::{Family, Subset};
use crate::treerep::PartitionSystem;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LineRep {
    carrier: Subset,
    values: Vec<BigRational>,
}

impl LineRep {
    /// `values` lists the function on the elements of `carrier` in increasing
    /// order.
    pub fn new(carrier: Subset, values: &[BigRational]) -> Result<Self> {
        if carrier.len() < 2 {
            return Err(Error::SubsetTooSmall(carrier));
        }
        if values.len() != carrier.len() {
            return Err(Error::InvalidConfig(format!(
                "{} values given for {carrier}",
                values.len()
            )));
        }
        let base = &values[0];
        let shifted: Vec<BigRational> = values.iter().map(|v| v - base).collect();
        let Some(scale) = shifted.iter().find(|v| !v.is_zero()).cloned() else {
            return Err(Error::ConstantLine(carrier));
        };
        let values = shifted.into_iter().map(|v| v / &scale).collect();
        Ok(LineRep { carrier, values })
    }

    pub fn from_integers(carrier: Subset, values: &[i64]) -> Result<Self> {
        let v: Vec<BigRational> = values.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        LineRep::new(carrier, &v)
    }

    pub fn carrier(&self) -> Subset {
        self.carrier
    }

    pub fn values(&self) -> &[BigRational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> Option<&BigRational> {
        if !self.carrier.contains(i) {
            return None;
        }
        let k = self.carrier.iter().take_while(|&j| j < i).count();
        Some(&self.values[k])
    }

    /// Blocks of elements with equal value, ordered by least element.
    pub fn level_sets(&self) -> Vec<Subset> {
        let mut groups: Vec<(BigRational, Subset)> = Vec::new();
        for (i, v) in self.carrier.iter().zip(&self.values) {
            match groups.iter_mut().find(|(w, _)| w == v) {
                Some((_, b)) => *b = b.with(i),
                None => groups.push((v.clone(), Subset::singleton(i))),
            }
        }
        groups.into_iter().map(|(_, b)| b).collect()
    }
}

impl fmt::Display for LineRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.values.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Restriction {
    Constant,
    Line(LineRep),
}

pub fn restrict_line(l: &LineRep, u: Subset) -> Result<Restriction> {
    if u.len() < 2 {
        return Err(Error::SubsetTooSmall(u));
    }
    if !u.is_subset(l.carrier) {
        return Err(Error::InvalidConfig(format!("{u} is not inside {}", l.carrier)));
    }
    let vals: Vec<BigRational> = u.iter().map(|i| l.value(i).expect("inside").clone()).collect();
    match LineRep::new(u, &vals) {
        Ok(r) => Ok(Restriction::Line(r)),
        Err(Error::ConstantLine(_)) => Ok(Restriction::Constant),
        Err(e) => Err(e),
    }
}

/// One line for every member of a family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointConfig {
    family: Family,
    lines: BTreeMap<Subset, LineRep>,
}

impl PointConfig {
    pub fn new(family: Family, lines: BTreeMap<Subset, LineRep>) -> Result<Self> {
        if lines.len() != family.len() {
            return Err(Error::InvalidConfig(format!(
                "{} lines for {} members",
                lines.len(),
                family.len()
            )));
        }
        for &t in family.parts() {
            match lines.get(&t) {
                Some(l) if l.carrier == t => {}
                Some(_) => return Err(Error::InvalidConfig(format!("line for {t} has the wrong carrier"))),
                None => return Err(Error::InvalidConfig(format!("no line for {t}"))),
            }
        }
        Ok(PointConfig { family, lines })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn lines(&self) -> &BTreeMap<Subset, LineRep> {
        &self.lines
    }

    pub fn line(&self, t: Subset) -> Option<&LineRep> {
        self.lines.get(&t)
    }

    pub fn into_lines(self) -> BTreeMap<Subset, LineRep> {
        self.lines
    }
}

/// The first nested pair `(T, U)`, `U` inside `T`, whose restriction is
/// neither constant nor the `U` line.
pub fn config_violation(c: &PointConfig) -> Option<(Subset, Subset)> {
    let parts = c.family.parts();
    for &t in parts {
        for &u in parts {
            if !u.is_proper_subset(t) {
                continue;
            }
            match restrict_line(&c.lines[&t], u).expect("nested") {
                Restriction::Constant => {}
                Restriction::Line(r) if r == c.lines[&u] => {}
                Restriction::Line(_) => return Some((t, u)),
            }
        }
    }
    None
}

pub fn validate_config(c: &PointConfig) -> bool {
    config_violation(c).is_none()
}

/// Members `U` such that every strictly larger member restricts to a constant
/// on `U`.
pub fn type_of(c: &PointConfig) -> Result<Tree> {
    if !c.family.is_thicket() {
        return Err(Error::NotAThicket);
    }
    if let Some((t, u)) = config_violation(c) {
        return Err(Error::InvalidConfig(format!("lines on {t} and {u} disagree")));
    }
    let parts = c.family.parts();
    let chosen = parts.iter().copied().filter(|&u| {
        parts
            .iter()
            .filter(|t| u.is_proper_subset(**t))
            .all(|t| restrict_line(&c.lines[t], u).expect("nested") == Restriction::Constant)
    });
    Tree::new(Family::new(c.family.ground(), chosen)?)
}

/// The unique configuration on all subsets that agrees with `data` on the
/// tree: each `U` takes the restriction of the line at its root.
pub fn reconstruct_from_tree(tree: &Tree, data: &BTreeMap<Subset, LineRep>) -> Result<PointConfig> {
    if !tree.is_s_tree() {
        return Err(Error::NotATree(tree.maximal().len()));
    }
    let on_tree = PointConfig::new(tree.family().clone(), data.clone())?;
    if let Some((t, u)) = config_violation(&on_tree) {
        return Err(Error::InvalidConfig(format!("tree data on {t} and {u} disagree")));
    }
    let ground = tree.ground();
    let mut lines = BTreeMap::new();
    for u in ground.subsets(2) {
        let root = tree.root_of(u).expect("the root contains everything");
        match restrict_line(&data[&root], u)? {
            Restriction::Line(l) => {
                lines.insert(u, l);
            }
            Restriction::Constant => return Err(Error::ConstantLine(u)),
        }
    }
    PointConfig::new(Family::power(ground), lines)
}

/// `w_T` groups the elements of `T` by the value of the `T` line.
pub fn theta_partitions(c: &PointConfig) -> Result<PartitionSystem> {
    let ground = c.family.ground();
    if c.family.len() != Family::power(ground).len() {
        return Err(Error::InvalidConfig("theta needs a line on every subset".into()));
    }
    if let Some((t, u)) = config_violation(c) {
        return Err(Error::InvalidConfig(format!("lines on {t} and {u} disagree")));
    }
    let blocks = c
        .lines
        .iter()
        .filter(|(t, _)| t.len() >= 3)
        .map(|(&t, l)| (t, l.level_sets()))
        .collect();
    PartitionSystem::new(ground, blocks)
}

const RETRIES: usize = 32;

fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let p: i64 = rng.random_range(-64..=64);
    let q: i64 = rng.random_range(1..=16);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// `k` pairwise distinct rationals.
fn distinct_values(rng: &mut ChaCha8Rng, k: usize) -> Vec<BigRational> {
    let mut out: Vec<BigRational> = Vec::with_capacity(k);
    while out.len() < k {
        let fresh = (0..RETRIES).map(|_| random_rational(rng)).find(|v| !out.contains(v));
        let v = fresh.unwrap_or_else(|| {
            let top = out.iter().max().cloned().unwrap_or_else(BigRational::zero);
            top.floor() + BigRational::one()
        });
        out.push(v);
    }
    out
}

/// A configuration whose type is exactly `tree`: at each member the line is
/// constant on every child and takes distinct values on distinct children.
pub fn gen_point(tree: &Tree, seed: u64) -> Result<PointConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut data = BTreeMap::new();
    for &t in tree.parts() {
        let q = tree.children(t)?;
        let vals = distinct_values(&mut rng, q.len());
        let line: Vec<BigRational> = t.iter().map(|i| vals[q.class_of(i).expect("in t") - 1].clone()).collect();
        data.insert(t, LineRep::new(t, &line)?);
    }
    reconstruct_from_tree(tree, &data)
}

/// Glue a configuration on the children of each member of `tree` into one
/// configuration on all subsets. `vertex[T]` lives on the ground set
/// `{1..k}`, one element per child class of `T`.
pub fn compose_points(tree: &Tree, vertex: &BTreeMap<Subset, PointConfig>) -> Result<PointConfig> {
    if !tree.is_s_tree() {
        return Err(Error::NotATree(tree.maximal().len()));
    }
    let mut quotients = BTreeMap::new();
    for &t in tree.parts() {
        let q = tree.children(t)?;
        let c = vertex.get(&t).ok_or(Error::GraftMismatch(t))?;
        let k = q.ground()?;
        if c.family.ground() != k || c.family.len() != Family::power(k).len() || !validate_config(c) {
            return Err(Error::GraftMismatch(t));
        }
        quotients.insert(t, q);
    }
    let ground = tree.ground();
    let mut lines = BTreeMap::new();
    for u in ground.subsets(2) {
        let root = tree.root_of(u).expect("the root contains everything");
        let q = &quotients[&root];
        let l = &vertex[&root].lines[&q.image(u)];
        let vals: Vec<BigRational> =
            u.iter().map(|i| l.value(q.class_of(i).expect("in root")).expect("in image").clone()).collect();
        lines.insert(u, LineRep::new(u, &vals)?);
    }
    PointConfig::new(Family::power(ground), lines)
}
