//! Brute-force checks that share as little code as possible with the
//! structured modules: quotient ranks by exact linear algebra, an exhaustive
//! sweep over all families for tiny ground sets, and a seeded fuzzer for the
//! ring.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::forests::{enumerate, Forest, Kind};
use crate::groundset::{Family, GroundSet, Subset};
use crate::ring::{is_zero_monomial, top_reduce, Monomial, Ring, RingElement};

/// All monomials of degree `d` in the given generators, sorted.
pub fn monomials_of_degree(gens: &[Subset], d: u32) -> Vec<Monomial> {
    fn rec(gens: &[Subset], left: u32, cur: &mut Vec<(Subset, u32)>, out: &mut Vec<Monomial>) {
        if left == 0 {
            out.push(Monomial::from_factors(cur.iter().copied()));
            return;
        }
        let Some((&g, rest)) = gens.split_first() else { return };
        for e in (1..=left).rev() {
            cur.push((g, e));
            rec(rest, left - e, cur, out);
            cur.pop();
        }
        rec(rest, left, cur, out);
    }
    let mut out = Vec::new();
    rec(gens, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

fn generator_list(ground: GroundSet) -> Vec<Subset> {
    ground.subsets(3)
}

/// Pairwise disjoint families of proper subsets of `t` with at least two
/// elements each, nonempty.
fn disjoint_children(t: Subset) -> Vec<Vec<Subset>> {
    let cands: Vec<Subset> = (1..t.mask())
        .map(Subset::from_mask)
        .filter(|u| u.is_proper_subset(t) && u.len() >= 2)
        .collect();
    fn rec(cands: &[Subset], used: Subset, cur: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
        for (i, &u) in cands.iter().enumerate() {
            if u.intersects(used) {
                continue;
            }
            cur.push(u);
            out.push(cur.clone());
            rec(&cands[i + 1..], used.union(u), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(&cands, Subset::EMPTY, &mut Vec::new(), &mut out);
    out
}

fn y(u: Subset) -> RingElement {
    RingElement::generator(u)
}

/// The generating relations: powers, one relation per depth-two tree, and
/// one per overlapping pair. Two-element generators are zero throughout.
pub fn generating_relations(ground: GroundSet) -> Vec<RingElement> {
    let mut out = Vec::new();
    for t in generator_list(ground) {
        out.push(RingElement::from(Monomial::var_pow(t, t.len() as u32 - 1)));
    }
    for t in generator_list(ground) {
        for kids in disjoint_children(t) {
            let m = t.len() as u32 - 1 - kids.iter().map(|u| u.len() as u32 - 1).sum::<u32>();
            let mut r = RingElement::from(Monomial::var_pow(t, m));
            for &u in &kids {
                r = r.mul_raw(&y(t).sub(&y(u)));
            }
            out.push(r);
        }
    }
    let all = ground.subsets(2);
    for (i, &u) in all.iter().enumerate() {
        for &v in &all[i + 1..] {
            if u.overlaps(v) {
                let w = u.union(v);
                out.push(y(w).sub(&y(u)).mul_raw(&y(w).sub(&y(v))));
            }
        }
    }
    out
}

fn degree_of(e: &RingElement) -> u32 {
    e.terms().keys().next().map_or(0, Monomial::degree)
}

/// Degree-`d` multiples of the generating relations in the monomial basis.
#[derive(Clone, Debug)]
pub struct RelationMatrix {
    n: usize,
    degree: u32,
    columns: Vec<Monomial>,
    rows: Vec<Vec<(usize, BigInt)>>,
}

impl RelationMatrix {
    pub fn build(n: usize, d: u32) -> Result<Self> {
        let ground = GroundSet::new(n)?;
        let gens = generator_list(ground);
        let columns = monomials_of_degree(&gens, d);
        let index: BTreeMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut rows = Vec::new();
        for rel in generating_relations(ground) {
            let e = degree_of(&rel);
            if e > d {
                continue;
            }
            for m in monomials_of_degree(&gens, d - e) {
                let row = rel
                    .mul_monomial(&m)
                    .terms()
                    .iter()
                    .map(|(k, c)| (index[k], c.clone()))
                    .collect();
                rows.push(row);
            }
        }
        Ok(RelationMatrix { n, degree: d, columns, rows })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn columns(&self) -> &[Monomial] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<(usize, BigInt)>] {
        &self.rows
    }

    pub fn dense_row(&self, e: &RingElement) -> Result<Vec<BigInt>> {
        let mut row = vec![BigInt::zero(); self.columns.len()];
        for (m, c) in e.terms() {
            let k = self.columns.binary_search(m).map_err(|_| Error::UnknownGenerator(Subset::EMPTY))?;
            row[k] = c.clone();
        }
        Ok(row)
    }

    fn dense_rows(&self) -> impl Iterator<Item = Vec<BigInt>> + '_ {
        self.rows.iter().map(|r| {
            let mut row = vec![BigInt::zero(); self.columns.len()];
            for (k, c) in r {
                row[*k] = c.clone();
            }
            row
        })
    }

    pub fn row_space(&self) -> RowSpace {
        let mut rs = RowSpace::new(self.columns.len());
        for row in self.dense_rows() {
            rs.insert(row);
        }
        rs
    }

    /// Integer elimination that only ever pivots on entries `+1` or `-1`.
    /// `true` means the row lattice is a direct summand, so the quotient
    /// has no torsion in this degree.
    pub fn unit_pivots_only(&self) -> bool {
        let distinct: BTreeSet<Vec<BigInt>> = self.dense_rows().filter(|r| r.iter().any(|c| !c.is_zero())).collect();
        let mut active: Vec<Vec<BigInt>> = distinct.into_iter().collect();
        loop {
            active.retain(|r| r.iter().any(|c| !c.is_zero()));
            if active.is_empty() {
                return true;
            }
            let found = active
                .iter()
                .enumerate()
                .find_map(|(i, r)| r.iter().position(|c| c.abs().is_one()).map(|k| (i, k)));
            let Some((i, k)) = found else { return false };
            let pivot = active.swap_remove(i);
            let sign = pivot[k].clone();
            for r in &mut active {
                if r[k].is_zero() {
                    continue;
                }
                let f = &r[k] * &sign;
                for (x, p) in r.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
    }
}

/// Plain triplet text: a header `rows cols nonzeros`, then one
/// `row col value` line per entry, zero based.
impl fmt::Display for RelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nnz: usize = self.rows.iter().map(Vec::len).sum();
        writeln!(f, "{} {} {}", self.rows.len(), self.columns.len(), nnz)?;
        for (i, r) in self.rows.iter().enumerate() {
            for (k, c) in r {
                writeln!(f, "{i} {k} {c}")?;
            }
        }
        Ok(())
    }
}

/// Row echelon basis over the rationals, kept as primitive integer rows.
#[derive(Clone, Debug)]
pub struct RowSpace {
    width: usize,
    // (pivot column, row), sorted by pivot column.
    basis: Vec<(usize, Vec<BigInt>)>,
}

impl RowSpace {
    pub fn new(width: usize) -> Self {
        RowSpace { width, basis: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    fn reduce(&self, mut row: Vec<BigInt>) -> Vec<BigInt> {
        assert_eq!(row.len(), self.width);
        for (p, b) in &self.basis {
            if row[*p].is_zero() {
                continue;
            }
            let (a, c) = (b[*p].clone(), row[*p].clone());
            for (x, y) in row.iter_mut().zip(b) {
                *x = &a * &*x - &c * y;
            }
            primitive(&mut row);
        }
        row
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, row: Vec<BigInt>) -> bool {
        let row = self.reduce(row);
        let Some(p) = row.iter().position(|c| !c.is_zero()) else {
            return false;
        };
        let at = self.basis.partition_point(|(q, _)| *q < p);
        self.basis.insert(at, (p, row));
        true
    }

    pub fn contains(&self, row: Vec<BigInt>) -> bool {
        self.reduce(row).iter().all(Zero::is_zero)
    }
}

fn primitive(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x /= &g;
        }
    }
}

/// `n <= 4` with `d <= n`, or `n = 5` with `d <= 2`.
fn check_size(n: usize, d: u32) -> Result<()> {
    let ok = match n {
        3 | 4 => d as usize <= n,
        5 => d <= 2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::TooLarge(format!("quotient rank oracle refuses n = {n}, d = {d}")))
    }
}

/// Dimension of the degree-`d` part of the quotient, over the rationals.
pub fn graded_quotient_rank(n: usize, d: u32) -> Result<u64> {
    check_size(n, d)?;
    let m = RelationMatrix::build(n, d)?;
    Ok((m.columns.len() - m.row_space().rank()) as u64)
}

/// Whether `e`, homogeneous of degree `d`, lies in the ideal.
pub fn in_ideal(n: usize, e: &RingElement) -> Result<bool> {
    let d = degree_of(e);
    if e.terms().keys().any(|m| m.degree() != d) {
        return Err(Error::Parse(format!("{e} is not homogeneous")));
    }
    check_size(n, d)?;
    let m = RelationMatrix::build(n, d)?;
    Ok(m.row_space().contains(m.dense_row(e)?))
}

/// Integer torsion check in degree `d` for `n <= 4`.
pub fn torsion_free(n: usize, d: u32) -> Result<bool> {
    if n > 4 {
        return Err(Error::TooLarge(format!("torsion check needs n <= 4, got {n}")));
    }
    check_size(n, d)?;
    Ok(RelationMatrix::build(n, d)?.unit_pivots_only())
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForestOracleReport {
    pub n: usize,
    pub families: u64,
    pub forests: u64,
    pub enumerated: u64,
    /// Forests found by only one of the two methods.
    pub mismatches: Vec<Family>,
    /// Forests whose raw totals disagree with [`Forest::totals`].
    pub totals_failures: Vec<Family>,
}

impl ForestOracleReport {
    pub fn is_ok(&self) -> bool {
        self.forests == self.enumerated && self.mismatches.is_empty() && self.totals_failures.is_empty()
    }
}

fn raw_is_forest(parts: &[Subset]) -> bool {
    parts.iter().all(|&a| parts.iter().all(|&b| a.is_subset(b) || b.is_subset(a) || !a.intersects(b)))
}

fn raw_children(parts: &[Subset], t: Subset) -> Vec<Subset> {
    let below: Vec<Subset> = parts.iter().copied().filter(|u| u.is_proper_subset(t)).collect();
    below.iter().copied().filter(|&u| !below.iter().any(|&v| u.is_proper_subset(v))).collect()
}

fn raw_m(parts: &[Subset], t: Subset) -> i64 {
    t.len() as i64 - 1 - raw_children(parts, t).iter().map(|u| u.len() as i64 - 1).sum::<i64>()
}

/// `n(F)` straight from the definition.
fn raw_n(parts: &[Subset]) -> u64 {
    parts
        .iter()
        .map(|&t| (t.len() as i64 - 1 - raw_children(parts, t).iter().map(|u| u.len() as i64 - 2).sum::<i64>()) as u64)
        .product()
}

/// `m(F)` by listing exponent vectors on `F` and keeping the admissible ones.
fn raw_m_total(parts: &[Subset]) -> u64 {
    let k = parts.len();
    let mut e = vec![0u32; k];
    let mut count = 0u64;
    loop {
        let shape: Vec<Subset> = (0..k).filter(|&i| e[i] > 0).map(|i| parts[i]).collect();
        let ok = (0..k).filter(|&i| e[i] > 0).all(|i| (e[i] as i64) < raw_m(&shape, parts[i]));
        if ok {
            count += 1;
        }
        let mut i = 0;
        while i < k {
            e[i] += 1;
            if e[i] as usize <= parts[i].len() - 2 {
                break;
            }
            e[i] = 0;
            i += 1;
        }
        if i == k {
            return count;
        }
    }
}

/// Every family of subsets with at least two elements, filtered to forests
/// and compared with the structured enumeration.
pub fn exhaustive_forest_oracle(n: usize) -> Result<ForestOracleReport> {
    if n > 4 {
        return Err(Error::TooLarge(format!("exhaustive sweep needs n <= 4, got {n}")));
    }
    let ground = GroundSet::new(n)?;
    let all = ground.subsets(2);
    let mut rep = ForestOracleReport { n, ..Default::default() };
    let mut found = BTreeSet::new();
    for bits in 0u64..(1u64 << all.len()) {
        rep.families += 1;
        let parts: Vec<Subset> = (0..all.len()).filter(|i| bits >> i & 1 == 1).map(|i| all[i]).collect();
        if !raw_is_forest(&parts) {
            continue;
        }
        rep.forests += 1;
        let fam = Family::new(ground, parts.iter().copied())?;
        let parts = fam.parts().to_vec();
        let totals = Forest::new(fam.clone())?.totals();
        if totals.n != raw_n(&parts) || totals.m != Some(raw_m_total(&parts)) {
            rep.totals_failures.push(fam);
        }
        found.insert(parts);
    }
    let listed: BTreeSet<Vec<Subset>> = enumerate(ground, Kind::Forests).map(|f| f.parts().to_vec()).collect();
    rep.enumerated = listed.len() as u64;
    rep.mismatches = found
        .symmetric_difference(&listed)
        .map(|p| Family::new(ground, p.iter().copied()))
        .collect::<Result<_>>()?;
    Ok(rep)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FuzzReport {
    pub n: usize,
    pub trials: u64,
    pub failures: u64,
    /// Description of the first failing trial.
    pub first_failure: Option<String>,
}

impl FuzzReport {
    pub fn is_ok(&self) -> bool {
        self.failures == 0
    }
}

fn random_monomial(rng: &mut ChaCha8Rng, gens: &[Subset], max_deg: u32) -> Monomial {
    let d = rng.random_range(0..=max_deg);
    let picks = (0..d).map(|_| (gens[rng.random_range(0..gens.len())], 1));
    Monomial::from_factors(picks)
}

fn random_element(rng: &mut ChaCha8Rng, gens: &[Subset], max_deg: u32) -> RingElement {
    let mut e = RingElement::zero();
    for _ in 0..rng.random_range(0..=3) {
        let c: i64 = rng.random_range(-3..=3);
        e.add_term(random_monomial(rng, gens, max_deg), BigInt::from(c));
    }
    e
}

/// Random ring elements checked for associativity, independence of the
/// rewriting order, the monomial zero test, and reduction to the top class.
pub fn fuzz_algebra(n: usize, trials: u64, seed: u64) -> Result<FuzzReport> {
    if !(3..=6).contains(&n) {
        return Err(Error::TooLarge(format!("fuzzing needs 3 <= n <= 6, got {n}")));
    }
    let ground = GroundSet::new(n)?;
    let gens = generator_list(ground);
    let mut ring = Ring::full(ground);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let top = RingElement::from(Monomial::var_pow(ground.full(), n as u32 - 2));
    let small = (n as u32 - 2).div_ceil(2);
    let mut rep = FuzzReport { n, trials, ..Default::default() };
    for trial in 0..trials {
        let a = random_element(&mut rng, &gens, small);
        let b = random_element(&mut rng, &gens, small);
        let c = random_element(&mut rng, &gens, 1);
        let m = random_monomial(&mut rng, &gens, n as u32 - 1);
        let mut problem = None;
        let ab = ring.mul(&a, &b)?;
        let left = ring.mul(&ab, &c)?;
        let bc = ring.mul(&b, &c)?;
        let right = ring.mul(&a, &bc)?;
        if left != right {
            problem = Some(format!("({a})*({b})*({c}) is not associative"));
        }
        let raw = a.mul_raw(&b);
        if problem.is_none() && ring.normalize_random(&raw, &mut rng)? != ring.normalize(&raw)? {
            problem = Some(format!("({a})*({b}) depends on the rewriting order"));
        }
        let zero = is_zero_monomial(ground, &m)?;
        if problem.is_none() && ring.normal_form(&m)?.is_zero() != zero {
            problem = Some(format!("zero test disagrees on {m}"));
        }
        if problem.is_none() && !zero && top_reduce(&mut ring, &m)? != top {
            problem = Some(format!("{m} does not reduce to the top class"));
        }
        if let Some(p) = problem {
            rep.failures += 1;
            rep.first_failure.get_or_insert_with(|| format!("trial {trial}: {p}"));
        }
    }
    Ok(rep)
}
