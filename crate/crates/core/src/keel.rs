//! Boundary divisors `D^U` and their conversion to and from the generators
//! `x_T`, plus a check of Keel's relations inside the ring.
//!
//! `D^U` is indexed by the side `U` of the split that does not contain the
//! marked point `0`, so `2 <= |U| < n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::groundset::{GroundSet, Subset};
use crate::ring::{Monomial, Ring, RingElement};

fn check_divisor(ground: GroundSet, u: Subset) -> Result<Subset> {
    ground.check(u)?;
    if u.len() < 2 {
        return Err(Error::SubsetTooSmall(u));
    }
    if u == ground.full() {
        return Err(Error::NotAMember(u));
    }
    Ok(u)
}

/// An integer combination of boundary divisors.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DivisorExpr {
    ground: GroundSet,
    terms: BTreeMap<Subset, BigInt>,
}

impl DivisorExpr {
    pub fn zero(ground: GroundSet) -> Self {
        DivisorExpr { ground, terms: BTreeMap::new() }
    }

    pub fn ground(&self) -> GroundSet {
        self.ground
    }

    pub fn terms(&self) -> &BTreeMap<Subset, BigInt> {
        &self.terms
    }

    pub fn add_term(&mut self, u: Subset, c: BigInt) -> Result<()> {
        check_divisor(self.ground, u)?;
        let e = self.terms.entry(u).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&u);
        }
        Ok(())
    }

    /// The same class written in the `x_T` generators.
    pub fn to_x(&self) -> RingElement {
        let mut out = RingElement::zero();
        for (&u, c) in &self.terms {
            out.add_scaled(&divisor_to_x(self.ground, u).expect("valid key"), c);
        }
        out
    }
}

impl fmt::Display for DivisorExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut keys: Vec<&Subset> = self.terms.keys().collect();
        keys.sort_by_key(|u| (u.len(), u.mask()));
        for (k, u) in keys.into_iter().enumerate() {
            let c = &self.terms[u];
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !c.abs().is_one() {
                write!(f, "{}*", c.abs())?;
            }
            write!(f, "D{u}")?;
        }
        Ok(())
    }
}

/// `D^U = sum_{U <= V <= S} (-1)^(|V \ U| + 1) x_V`, two-element `V` dropped.
pub fn divisor_to_x(ground: GroundSet, u: Subset) -> Result<RingElement> {
    check_divisor(ground, u)?;
    let rest = ground.full().difference(u);
    let mut out = RingElement::zero();
    let mut sub = rest.mask();
    // Walk every subset of the complement.
    loop {
        let v = u.union(Subset::from_mask(sub));
        if v.len() >= 3 {
            let sign = if (v.len() - u.len()) % 2 == 1 { 1 } else { -1 };
            out.add_term(Monomial::var(v), BigInt::from(sign));
        }
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & rest.mask();
    }
    Ok(out)
}

/// `x_T` as the sum of `D^U` over proper `U` containing `i` and `j` but not
/// all of `T`.
pub fn x_to_divisor(ground: GroundSet, t: Subset, i: usize, j: usize) -> Result<DivisorExpr> {
    ground.check(t)?;
    if t.len() < 3 {
        return Err(Error::SubsetTooSmall(t));
    }
    if i == j || !t.contains(i) || !t.contains(j) {
        return Err(Error::ElementOutOfRange(if t.contains(i) { j } else { i }));
    }
    let pair = Subset::singleton(i).with(j);
    let mut out = DivisorExpr::zero(ground);
    for u in ground.subsets(2) {
        if u != ground.full() && pair.is_subset(u) && !t.is_subset(u) {
            out.add_term(u, BigInt::one())?;
        }
    }
    Ok(out)
}

/// A degree-one element in divisor form, using the two smallest elements of
/// each `T`.
pub fn x_element_to_divisor(ground: GroundSet, e: &RingElement) -> Result<DivisorExpr> {
    let mut out = DivisorExpr::zero(ground);
    for (m, c) in e.terms() {
        let [(t, 1)] = m.factors() else {
            return Err(Error::Parse(alloc::format!("{m} is not a generator")));
        };
        let mut it = t.iter();
        let (i, j) = (it.next().expect("size >= 3"), it.next().expect("size >= 3"));
        for (u, k) in x_to_divisor(ground, *t, i, j)?.terms {
            out.add_term(u, k * c)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeelReport {
    pub n: usize,
    /// `(T, i, j)` where converting `x_T` to divisors and back fails.
    pub round_trip_failures: Vec<(Subset, usize, usize)>,
    /// `{i, j}` whose divisor sum is not `x_S`.
    pub sum_failures: Vec<(usize, usize)>,
    /// Crossing pairs whose product is nonzero.
    pub vanishing_failures: Vec<(Subset, Subset)>,
    /// Nested or disjoint pairs whose product is zero (checked for `n >= 4`).
    pub nonvanishing_failures: Vec<(Subset, Subset)>,
    pub pairs_checked: usize,
}

impl KeelReport {
    pub fn is_ok(&self) -> bool {
        self.round_trip_failures.is_empty()
            && self.sum_failures.is_empty()
            && self.vanishing_failures.is_empty()
            && self.nonvanishing_failures.is_empty()
    }
}

pub const KEEL_MAX_N: usize = 6;

pub fn keel_check(n: usize) -> Result<KeelReport> {
    if !(3..=KEEL_MAX_N).contains(&n) {
        return Err(Error::TooLarge(alloc::format!("keel check needs 3 <= n <= {KEEL_MAX_N}")));
    }
    let ground = GroundSet::new(n)?;
    let mut ring = Ring::full(ground);
    let mut rep = KeelReport { n, ..KeelReport::default() };
    for t in ground.subsets(3) {
        let want = RingElement::from(Monomial::var(t));
        for i in t.iter() {
            for j in t.iter().filter(|&j| j > i) {
                if x_to_divisor(ground, t, i, j)?.to_x() != want {
                    rep.round_trip_failures.push((t, i, j));
                }
            }
        }
    }
    let xs = RingElement::from(Monomial::var(ground.full()));
    for i in 1..=n {
        for j in i + 1..=n {
            let pair = Subset::singleton(i).with(j);
            let mut sum = DivisorExpr::zero(ground);
            for u in ground.subsets(2) {
                if u != ground.full() && pair.is_subset(u) {
                    sum.add_term(u, BigInt::one())?;
                }
            }
            if ring.normalize(&sum.to_x())? != xs {
                rep.sum_failures.push((i, j));
            }
        }
    }
    let divisors: Vec<Subset> = ground.subsets(2).into_iter().filter(|&u| u != ground.full()).collect();
    let as_x: Vec<RingElement> = divisors.iter().map(|&u| divisor_to_x(ground, u)).collect::<Result<_>>()?;
    for a in 0..divisors.len() {
        for b in a..divisors.len() {
            let (t, u) = (divisors[a], divisors[b]);
            let zero = ring.mul(&as_x[a], &as_x[b])?.is_zero();
            rep.pairs_checked += 1;
            if t.compatible(u) {
                if zero && n >= 4 {
                    rep.nonvanishing_failures.push((t, u));
                }
            } else if !zero {
                rep.vanishing_failures.push((t, u));
            }
        }
    }
    Ok(rep)
}
