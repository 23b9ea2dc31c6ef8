//! The cohomology ring as a polynomial ring modulo relations, with a
//! terminating rewriting system that produces normal forms in the admissible
//! basis.
//!
//! Generators are `y_T` for `|T| >= 3`; the generator of a two-element set is
//! zero. Three kinds of relation are used:
//!
//! * `y_T^(|T|-1) = 0`;
//! * `y_T^m * prod_U (y_T - y_U) = 0` for disjoint proper subsets `U` of `T`,
//!   where `m = |T| - 1 - sum (|U| - 1)`;
//! * `(y_W - y_T)(y_W - y_U) = 0` for overlapping `T`, `U` with `W = T | U`
//!   (only in the full ring).
//!
//! Every rewrite replaces a monomial by monomials of strictly larger weight
//! `sum n_T |T|`, and weight is bounded, so rewriting terminates.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::forests::Forest;
use crate::groundset::{GroundSet, Subset};

/// A monomial `prod y_T^{n_T}`, stored with its variables in Kapranov order.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Subset, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(t: Subset) -> Self {
        Monomial { factors: alloc::vec![(t, 1)] }
    }

    pub fn var_pow(t: Subset, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: alloc::vec![(t, e)] }
        }
    }

    pub fn from_factors<I: IntoIterator<Item = (Subset, u32)>>(it: I) -> Self {
        let mut m = BTreeMap::new();
        for (t, e) in it {
            if e > 0 {
                *m.entry(t).or_insert(0) += e;
            }
        }
        Monomial { factors: m.into_iter().collect() }
    }

    pub fn factors(&self) -> &[(Subset, u32)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn weight(&self) -> u64 {
        self.factors.iter().map(|&(t, e)| e as u64 * t.len() as u64).sum()
    }

    pub fn shape(&self) -> Vec<Subset> {
        self.factors.iter().map(|f| f.0).collect()
    }

    pub fn exponent(&self, t: Subset) -> u32 {
        self.factors
            .binary_search_by(|f| f.0.cmp(&t))
            .map_or(0, |i| self.factors[i].1)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_factors(self.factors.iter().chain(&other.factors).copied())
    }

    /// `self / d`, when `d` divides `self`.
    pub fn div(&self, d: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        for &(t, e) in &self.factors {
            let k = d.exponent(t);
            if k > e {
                return None;
            }
            if e > k {
                out.push((t, e - k));
            }
        }
        if d.factors.iter().any(|&(t, _)| self.exponent(t) == 0) {
            return None;
        }
        Some(Monomial { factors: out })
    }
}

impl Ord for Monomial {
    /// Degree, then the shapes compared in Kapranov order, then exponents.
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.factors.iter().map(|f| f.0).cmp(other.factors.iter().map(|f| f.0)))
            .then_with(|| self.factors.iter().map(|f| f.1).cmp(other.factors.iter().map(|f| f.1)))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        for (k, &(t, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{t}")?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An integer combination of monomials, with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct RingElement {
    terms: BTreeMap<Monomial, BigInt>,
}

impl RingElement {
    pub fn zero() -> Self {
        RingElement::default()
    }

    pub fn one() -> Self {
        RingElement::from(Monomial::one())
    }

    pub fn term(c: BigInt, m: Monomial) -> Self {
        let mut e = RingElement::zero();
        e.add_term(m, c);
        e
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &RingElement, c: &BigInt) {
        for (m, k) in &other.terms {
            self.add_term(m.clone(), k * c);
        }
    }

    pub fn scale(&self, c: &BigInt) -> RingElement {
        let mut out = RingElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn neg(&self) -> RingElement {
        self.scale(&BigInt::from(-1))
    }

    pub fn add(&self, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::one());
        out
    }

    pub fn sub(&self, other: &RingElement) -> RingElement {
        let mut out = self.clone();
        out.add_scaled(other, &BigInt::from(-1));
        out
    }

    /// Product in the polynomial ring, without reduction.
    pub fn mul_raw(&self, other: &RingElement) -> RingElement {
        let mut out = RingElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> RingElement {
        let mut out = RingElement::zero();
        for (a, x) in &self.terms {
            out.add_term(a.mul(m), x.clone());
        }
        out
    }

    /// The generator `y_T`, or zero for a two-element set.
    pub fn generator(t: Subset) -> RingElement {
        if t.len() <= 2 {
            RingElement::zero()
        } else {
            RingElement::from(Monomial::var(t))
        }
    }
}

impl From<Monomial> for RingElement {
    fn from(m: Monomial) -> Self {
        RingElement::term(BigInt::one(), m)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Which generators and relations are in play.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Every subset of size at least three; all three kinds of relation.
    Full(GroundSet),
    /// The members of a forest; tree relations and powers only.
    Forest(Forest),
}

impl GeneratorFamily {
    pub fn ground(&self) -> GroundSet {
        match self {
            GeneratorFamily::Full(g) => *g,
            GeneratorFamily::Forest(f) => f.ground(),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, GeneratorFamily::Full(_))
    }

    pub fn contains(&self, t: Subset) -> bool {
        t.len() >= 3
            && match self {
                GeneratorFamily::Full(g) => g.contains(t),
                GeneratorFamily::Forest(f) => f.contains(t),
            }
    }

    /// The generators, in Kapranov order.
    pub fn generators(&self) -> Vec<Subset> {
        match self {
            GeneratorFamily::Full(g) => g.subsets(3),
            GeneratorFamily::Forest(f) => f.parts().iter().copied().filter(|t| t.len() >= 3).collect(),
        }
    }
}

/// A minimally inadmissible divisor together with its rewrite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    /// `y_T^(|T|-1)`, which is zero.
    Power(Subset),
    /// `y_T y_U` for overlapping `T`, `U`.
    Overlap(Subset, Subset),
    /// `y_T^m prod_{U in children} y_U` with `m = m({T} + children, T)`.
    Tree { top: Subset, exponent: u32, children: Vec<Subset> },
}

impl Pattern {
    pub fn divisor(&self) -> Monomial {
        match self {
            Pattern::Power(t) => Monomial::var_pow(*t, t.len() as u32 - 1),
            Pattern::Overlap(t, u) => Monomial::from_factors([(*t, 1), (*u, 1)]),
            Pattern::Tree { top, exponent, children } => {
                Monomial::from_factors(core::iter::once((*top, *exponent)).chain(children.iter().map(|&u| (u, 1))))
            }
        }
    }

    /// What the divisor rewrites to.
    pub fn replacement(&self) -> RingElement {
        match self {
            Pattern::Power(_) => RingElement::zero(),
            Pattern::Overlap(t, u) => {
                let w = t.union(*u);
                let mut e = RingElement::zero();
                e.add_term(Monomial::from_factors([(w, 1), (*t, 1)]), BigInt::one());
                e.add_term(Monomial::from_factors([(w, 1), (*u, 1)]), BigInt::one());
                e.add_term(Monomial::var_pow(w, 2), BigInt::from(-1));
                e
            }
            Pattern::Tree { top, exponent, children } => {
                let k = children.len();
                let mut e = RingElement::zero();
                for a in 1u32..(1 << k) {
                    let size = a.count_ones();
                    let sign = if size % 2 == 1 { 1 } else { -1 };
                    let rest = (0..k).filter(|i| a >> i & 1 == 0).map(|i| (children[i], 1));
                    let m = Monomial::from_factors(core::iter::once((*top, exponent + size)).chain(rest));
                    e.add_term(m, BigInt::from(sign));
                }
                e
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Admissible,
    ZeroByPower(Subset),
    Pattern(Pattern),
}

/// `m(shape, t)` where the children of `t` are the maximal members of
/// `shape` strictly inside it.
fn m_in_shape(shape: &[Subset], t: Subset) -> (i64, Vec<Subset>) {
    let inside: Vec<Subset> = shape.iter().copied().filter(|u| u.is_proper_subset(t)).collect();
    let kids: Vec<Subset> = inside
        .iter()
        .copied()
        .filter(|&u| !inside.iter().any(|&v| u.is_proper_subset(v)))
        .collect();
    let m = t.len() as i64 - 1 - kids.iter().map(|u| u.len() as i64 - 1).sum::<i64>();
    (m, kids)
}

/// The ring of a generator family, with memoised normal forms.
#[derive(Clone, Debug)]
pub struct Ring {
    family: GeneratorFamily,
    memo: BTreeMap<Monomial, RingElement>,
}

impl Ring {
    pub fn new(family: GeneratorFamily) -> Self {
        Ring { family, memo: BTreeMap::new() }
    }

    pub fn full(ground: GroundSet) -> Self {
        Ring::new(GeneratorFamily::Full(ground))
    }

    pub fn family(&self) -> &GeneratorFamily {
        &self.family
    }

    pub fn ground(&self) -> GroundSet {
        self.family.ground()
    }

    pub fn check(&self, m: &Monomial) -> Result<()> {
        match m.factors.iter().find(|f| !self.family.contains(f.0)) {
            Some(&(t, _)) => Err(Error::UnknownGenerator(t)),
            None => Ok(()),
        }
    }

    /// The generator `y_T`: zero for two-element sets, an error for sets
    /// outside the family.
    pub fn generator(&self, t: Subset) -> Result<RingElement> {
        if t.len() == 2 && self.ground().contains(t) {
            return Ok(RingElement::zero());
        }
        if !self.family.contains(t) {
            return Err(Error::UnknownGenerator(t));
        }
        Ok(RingElement::generator(t))
    }

    /// The deterministic choice: a power first, then the least overlapping
    /// pair, then the tree pattern at the least violating member.
    pub fn classify(&self, m: &Monomial) -> Result<Classification> {
        self.check(m)?;
        if let Some(&(t, _)) = m.factors.iter().find(|&&(t, e)| e as usize >= t.len() - 1) {
            return Ok(Classification::ZeroByPower(t));
        }
        let shape = m.shape();
        for (i, &t) in shape.iter().enumerate() {
            for &u in &shape[i + 1..] {
                if t.overlaps(u) {
                    return Ok(Classification::Pattern(Pattern::Overlap(t, u)));
                }
            }
        }
        for &(t, e) in &m.factors {
            let (mt, kids) = m_in_shape(&shape, t);
            if e as i64 >= mt {
                return Ok(Classification::Pattern(Pattern::Tree { top: t, exponent: mt as u32, children: kids }));
            }
        }
        Ok(Classification::Admissible)
    }

    pub fn is_admissible(&self, m: &Monomial) -> Result<bool> {
        Ok(self.classify(m)? == Classification::Admissible)
    }

    /// Every relation instance whose divisor divides `m`.
    pub fn patterns(&self, m: &Monomial) -> Result<Vec<Pattern>> {
        self.check(m)?;
        let mut out = Vec::new();
        for &(t, e) in &m.factors {
            if e as usize >= t.len() - 1 {
                out.push(Pattern::Power(t));
            }
        }
        let shape = m.shape();
        for (i, &t) in shape.iter().enumerate() {
            for &u in &shape[i + 1..] {
                if t.overlaps(u) {
                    out.push(Pattern::Overlap(t, u));
                }
            }
        }
        for &(t, e) in &m.factors {
            let inside: Vec<Subset> = shape.iter().copied().filter(|u| u.is_proper_subset(t)).collect();
            if inside.len() > 20 {
                continue;
            }
            for bits in 1u32..(1 << inside.len()) {
                let kids: Vec<Subset> =
                    (0..inside.len()).filter(|i| bits >> i & 1 == 1).map(|i| inside[i]).collect();
                let disjoint = kids.iter().enumerate().all(|(i, a)| kids[i + 1..].iter().all(|b| !a.intersects(*b)));
                if !disjoint {
                    continue;
                }
                let mt = t.len() as i64 - 1 - kids.iter().map(|u| u.len() as i64 - 1).sum::<i64>();
                if mt >= 1 && e as i64 >= mt {
                    out.push(Pattern::Tree { top: t, exponent: mt as u32, children: kids });
                }
            }
        }
        Ok(out)
    }

    fn apply(m: &Monomial, p: &Pattern) -> RingElement {
        let q = m.div(&p.divisor()).expect("pattern divides the monomial");
        p.replacement().mul_monomial(&q)
    }

    /// One rewrite with the deterministic choice.
    pub fn rewrite_step(&self, m: &Monomial) -> Result<RingElement> {
        match self.classify(m)? {
            Classification::Admissible => Err(Error::AlreadyAdmissible),
            Classification::ZeroByPower(_) => Ok(RingElement::zero()),
            Classification::Pattern(p) => Ok(Ring::apply(m, &p)),
        }
    }

    pub fn normal_form(&mut self, m: &Monomial) -> Result<RingElement> {
        if let Some(nf) = self.memo.get(m) {
            return Ok(nf.clone());
        }
        let nf = match self.classify(m)? {
            Classification::Admissible => RingElement::from(m.clone()),
            Classification::ZeroByPower(_) => RingElement::zero(),
            Classification::Pattern(p) => {
                let step = Ring::apply(m, &p);
                let mut acc = RingElement::zero();
                for (k, c) in step.terms() {
                    let sub = self.normal_form(k)?;
                    acc.add_scaled(&sub, c);
                }
                acc
            }
        };
        self.memo.insert(m.clone(), nf.clone());
        Ok(nf)
    }

    pub fn normalize(&mut self, e: &RingElement) -> Result<RingElement> {
        let mut acc = RingElement::zero();
        for (m, c) in e.terms() {
            let nf = self.normal_form(m)?;
            acc.add_scaled(&nf, c);
        }
        Ok(acc)
    }

    /// Normalises choosing uniformly among all applicable relations at every
    /// step. No memoisation, so every run takes its own path.
    pub fn normalize_random<R: Rng>(&self, e: &RingElement, rng: &mut R) -> Result<RingElement> {
        let mut acc = RingElement::zero();
        let mut work: Vec<(Monomial, BigInt)> = e.terms().iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        while let Some((m, c)) = work.pop() {
            let ps = self.patterns(&m)?;
            if ps.is_empty() {
                acc.add_term(m, c);
                continue;
            }
            let p = &ps[rng.random_range(0..ps.len())];
            for (k, d) in Ring::apply(&m, p).terms() {
                work.push((k.clone(), d * &c));
            }
        }
        Ok(acc)
    }

    pub fn mul(&mut self, a: &RingElement, b: &RingElement) -> Result<RingElement> {
        let a = self.normalize(a)?;
        let b = self.normalize(b)?;
        self.normalize(&a.mul_raw(&b))
    }

    pub fn pow(&mut self, a: &RingElement, k: u32) -> Result<RingElement> {
        let mut acc = RingElement::one();
        for _ in 0..k {
            acc = self.mul(&acc, a)?;
        }
        Ok(acc)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }
}

/// The zero test in the full ring: a monomial vanishes exactly when some
/// `T` has `sum_{U inside T} n_U > |T| - 2`.
pub fn is_zero_monomial(ground: GroundSet, m: &Monomial) -> Result<bool> {
    if let Some(&(t, _)) = m.factors().iter().find(|f| f.0.len() < 3 || !ground.contains(f.0)) {
        return Err(Error::UnknownGenerator(t));
    }
    for t in ground.subsets(3) {
        let load: u64 = m.factors().iter().filter(|f| f.0.is_subset(t)).map(|f| f.1 as u64).sum();
        if load + 2 > t.len() as u64 {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For `m` surviving the zero test, `y_S^(n-2-deg m) * m` reduces to
/// `y_S^(n-2)`. Returns the reduced product.
pub fn top_reduce(ring: &mut Ring, m: &Monomial) -> Result<RingElement> {
    let ground = ring.ground();
    if !ring.family().is_full() {
        return Err(Error::NotNormal);
    }
    if is_zero_monomial(ground, m)? {
        return Err(Error::NotNormal);
    }
    let n = ground.n() as u32;
    let fill = Monomial::var_pow(ground.full(), n - 2 - m.degree());
    ring.normalize(&RingElement::from(m.mul(&fill)))
}

/// `prod_{U in L} (y_T - y_U)` with `T` the support of `L`, normalised.
/// Zero for every connected `L`.
pub fn relation_family_product(ring: &mut Ring, l: &crate::groundset::Family) -> Result<RingElement> {
    if !l.is_connected() {
        return Err(Error::NotConnected);
    }
    let t = l.support();
    let yt = RingElement::generator(t);
    let mut prod = RingElement::one();
    for &u in l.parts() {
        prod = prod.mul_raw(&yt.sub(&RingElement::generator(u)));
    }
    ring.normalize(&prod)
}

/// The degree-`d` admissible monomials in Kapranov-graded order.
pub fn admissible_of_degree(ring: &Ring, d: u32) -> Result<Vec<Monomial>> {
    let gens = ring.family().generators();
    let mut out = Vec::new();
    let mut cur: Vec<(Subset, u32)> = Vec::new();
    fn rec(
        ring: &Ring,
        gens: &[Subset],
        start: usize,
        left: u32,
        cur: &mut Vec<(Subset, u32)>,
        out: &mut Vec<Monomial>,
    ) -> Result<()> {
        if left == 0 {
            let m = Monomial::from_factors(cur.iter().copied());
            if ring.is_admissible(&m)? {
                out.push(m);
            }
            return Ok(());
        }
        for i in start..gens.len() {
            for e in 1..=left.min(gens[i].len() as u32 - 2) {
                cur.push((gens[i], e));
                rec(ring, gens, i + 1, left - e, cur, out)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(ring, &gens, 0, d, &mut cur, &mut out)?;
    out.sort();
    Ok(out)
}

impl core::str::FromStr for Monomial {
    type Err = Error;

    /// Parses `x{1,2,3}^2*x{1,2,3,4}` or `1`.
    fn from_str(s: &str) -> Result<Self> {
        let t: alloc::string::String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "1" {
            return Ok(Monomial::one());
        }
        let mut factors = Vec::new();
        for part in t.split('*') {
            let body = part.strip_prefix('x').ok_or_else(|| Error::Parse(part.to_string()))?;
            let close = body.find('}').ok_or_else(|| Error::Parse(part.to_string()))?;
            let set: Subset = body[..=close].parse()?;
            let rest = &body[close + 1..];
            let e = match rest.strip_prefix('^') {
                Some(x) => x.parse().map_err(|_| Error::Parse(part.to_string()))?,
                None if rest.is_empty() => 1,
                None => return Err(Error::Parse(part.to_string())),
            };
            factors.push((set, e));
        }
        Ok(Monomial::from_factors(factors))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::{enumerate, Kind};
    use crate::groundset::Family;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    fn s(v: &[usize]) -> Subset {
        Subset::from_elements(v.iter().copied()).unwrap()
    }

    fn mono(text: &str) -> Monomial {
        text.parse().unwrap()
    }

    fn nf(ring: &mut Ring, text: &str) -> RingElement {
        ring.normal_form(&mono(text)).unwrap()
    }

    #[test]
    fn spot_values_n4() {
        let mut r = Ring::full(g(4));
        assert_eq!(nf(&mut r, "x{1,2,3}*x{2,3,4}").to_string(), "x{1,2,3,4}^2");
        assert_eq!(nf(&mut r, "x{1,2,3}*x{1,2,4}").to_string(), "x{1,2,3,4}^2");
        assert_eq!(nf(&mut r, "x{1,2,3,4}*x{1,2,3}").to_string(), "x{1,2,3,4}^2");
        assert!(nf(&mut r, "x{1,2,3}^2").is_zero());
        assert!(nf(&mut r, "x{1,2,3,4}^3").is_zero());
        assert_eq!(nf(&mut r, "x{1,2,3,4}^2").to_string(), "x{1,2,3,4}^2");
        assert_eq!(nf(&mut r, "x{1,2,3}").to_string(), "x{1,2,3}");
    }

    #[test]
    fn classification() {
        let r = Ring::full(g(4));
        assert_eq!(r.classify(&mono("x{1,2,3}^2")).unwrap(), Classification::ZeroByPower(s(&[1, 2, 3])));
        assert_eq!(
            r.classify(&mono("x{1,2,3}*x{2,3,4}")).unwrap(),
            Classification::Pattern(Pattern::Overlap(s(&[2, 3, 4]), s(&[1, 2, 3])))
        );
        assert_eq!(
            r.classify(&mono("x{1,2,3,4}*x{1,2,3}")).unwrap(),
            Classification::Pattern(Pattern::Tree { top: s(&[1, 2, 3, 4]), exponent: 1, children: alloc::vec![s(&[1, 2, 3])] })
        );
        assert_eq!(r.classify(&mono("x{1,2,3,4}^2")).unwrap(), Classification::Admissible);
        assert_eq!(r.rewrite_step(&mono("x{1,2,3,4}")), Err(Error::AlreadyAdmissible));
        let f = Forest::new(Family::parse(g(4), "[{1,2,3,4}]").unwrap()).unwrap();
        let rf = Ring::new(GeneratorFamily::Forest(f));
        assert_eq!(rf.classify(&mono("x{1,2,3}")), Err(Error::UnknownGenerator(s(&[1, 2, 3]))));
    }

    #[test]
    fn tree_rewrite_matches_expansion() {
        // y_T^m prod (y_T - y_U) expanded by hand for two children.
        let p = Pattern::Tree { top: s(&[1, 2, 3, 4, 5, 6, 7]), exponent: 2, children: alloc::vec![s(&[1, 2, 3]), s(&[4, 5, 6])] };
        let r = p.replacement();
        assert_eq!(
            r.to_string(),
            "-x{1,2,3,4,5,6,7}^4 + x{1,2,3,4,5,6,7}^3*x{4,5,6} + x{1,2,3,4,5,6,7}^3*x{1,2,3}"
        );
    }

    #[test]
    fn weight_increases_on_every_rewrite() {
        let r = Ring::full(g(5));
        let gens = g(5).subsets(3);
        for (i, &a) in gens.iter().enumerate() {
            for &b in &gens[i..] {
                for &c in &gens {
                    let m = Monomial::from_factors([(a, 1), (b, 1), (c, 1)]);
                    for p in r.patterns(&m).unwrap() {
                        for (k, _) in Ring::apply(&m, &p).terms() {
                            assert!(k.weight() > m.weight(), "{m} via {p:?}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn normal_forms_are_admissible_and_match_zero_test() {
        for n in 3..=5 {
            let mut r = Ring::full(g(n));
            let gens = g(n).subsets(3);
            for (i, &a) in gens.iter().enumerate() {
                for &b in &gens[i..] {
                    let m = Monomial::from_factors([(a, 1), (b, 1)]);
                    let e = r.normal_form(&m).unwrap();
                    for k in e.terms().keys() {
                        assert!(r.is_admissible(k).unwrap());
                    }
                    assert_eq!(e.is_zero(), is_zero_monomial(g(n), &m).unwrap(), "{m}");
                }
            }
        }
    }

    #[test]
    fn relation_families_vanish() {
        let mut r = Ring::full(g(4));
        let l = Family::parse(g(4), "[{1,2},{2,3},{3,4}]").unwrap();
        assert!(relation_family_product(&mut r, &l).unwrap().is_zero());
        let l = Family::parse(g(4), "[{1,2,3},{2,3,4}]").unwrap();
        assert!(relation_family_product(&mut r, &l).unwrap().is_zero());
        let bad = Family::parse(g(4), "[{1,2},{3,4}]").unwrap();
        assert_eq!(relation_family_product(&mut r, &bad), Err(Error::NotConnected));
    }

    #[test]
    fn admissible_counts_n5() {
        let r = Ring::full(g(5));
        let counts: alloc::vec::Vec<usize> = (0..4).map(|d| admissible_of_degree(&r, d).unwrap().len()).collect();
        assert_eq!(counts, alloc::vec![1, 16, 16, 1]);
    }

    #[test]
    fn forest_family_relations() {
        let f = Forest::new(Family::parse(g(5), "[{1,2,3,4,5},{1,2,3},{4,5}]").unwrap()).unwrap();
        let mut r = Ring::new(GeneratorFamily::Forest(f));
        // {4,5} has no generator, so only {1,2,3} counts against S: m = 2.
        assert_eq!(nf(&mut r, "x{1,2,3,4,5}*x{1,2,3}").to_string(), "x{1,2,3,4,5}*x{1,2,3}");
        assert_eq!(nf(&mut r, "x{1,2,3,4,5}^2*x{1,2,3}").to_string(), "x{1,2,3,4,5}^3");
        assert!(nf(&mut r, "x{1,2,3,4,5}^3*x{1,2,3}").is_zero());
    }

    #[test]
    fn forest_rings_have_rank_n_of_forest() {
        for n in 3..=5 {
            for f in enumerate(g(n), Kind::Forests) {
                let r = Ring::new(GeneratorFamily::Forest(f.clone()));
                let top: u32 = f.parts().iter().map(|t| t.len() as u32 - 2).sum();
                let total: usize = (0..=top).map(|d| admissible_of_degree(&r, d).unwrap().len()).sum();
                assert_eq!(total as u64, f.totals().n, "{f}");
            }
        }
    }

    proptest! {
        #[test]
        fn random_strategy_agrees(seed in any::<u64>(), picks in proptest::collection::vec(0usize..26, 1..=3)) {
            let gens = g(5).subsets(3);
            let m = Monomial::from_factors(picks.iter().map(|&i| (gens[i % gens.len()], 1)));
            let mut r = Ring::full(g(5));
            let det = r.normal_form(&m).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rnd = r.normalize_random(&RingElement::from(m.clone()), &mut rng).unwrap();
            prop_assert_eq!(det, rnd);
        }

        #[test]
        fn text_round_trip(picks in proptest::collection::vec((0usize..16, 1u32..3), 0..=3)) {
            let gens = g(5).subsets(3);
            let m = Monomial::from_factors(picks.iter().map(|&(i, e)| (gens[i], e)));
            prop_assert_eq!(m.to_string().parse::<Monomial>().unwrap(), m);
        }
    }
}
