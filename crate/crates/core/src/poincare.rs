//! Poincaré polynomials as sums over forests, the collapse recurrence, and
//! enumeration of the admissible basis.
//!
//! Polynomials are in `t = ` degree-two classes; coefficient `i` is the rank
//! of `H^{2i}`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::forests::{enumerate_within, Collapse, Forest};
use crate::groundset::{Family, Subset};
use crate::ring::{GeneratorFamily, Monomial};

/// A polynomial with nonnegative integer coefficients, lowest degree first,
/// without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<u64>);

impl Poly {
    pub fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly(c)
    }

    pub fn one() -> Self {
        Poly(alloc::vec![1])
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.0
    }

    pub fn eval_one(&self) -> u64 {
        self.0.iter().sum()
    }

    /// `t + t^2 + ... + t^k`.
    pub fn ramp(k: usize) -> Self {
        let mut c = alloc::vec![1u64; k + 1];
        c[0] = 0;
        Poly::new(c)
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let mut c = alloc::vec![0u64; self.0.len().max(o.0.len())];
        for (i, x) in self.0.iter().enumerate() {
            c[i] += x;
        }
        for (i, x) in o.0.iter().enumerate() {
            c[i] += x;
        }
        Poly::new(c)
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly::default();
        }
        let mut c = alloc::vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, x) in self.0.iter().enumerate() {
            for (j, y) in o.0.iter().enumerate() {
                c[i + j] += x * y;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, k: u64) -> Poly {
        Poly::new(self.0.iter().map(|x| x * k).collect())
    }

    /// Coefficients in real degrees: `c_0, 0, c_1, 0, ...`.
    pub fn doubled(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for (i, &x) in self.0.iter().enumerate() {
            if i > 0 {
                out.push(0);
            }
            out.push(x);
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &c) in self.0.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match (i, c) {
                (0, _) => write!(f, "{c}")?,
                (1, 1) => f.write_str("t")?,
                (1, _) => write!(f, "{c}t")?,
                (_, 1) => write!(f, "t^{i}")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

struct Search {
    // Count of chosen sets per value of m, four bits each.
    key: u64,
    hist: BTreeMap<u64, u64>,
}

const NONE: usize = usize::MAX;

impl Search {
    fn bump(&mut self, m: i64, up: bool) {
        let shift = 4 * (m as u64 - 2);
        if up {
            self.key += 1 << shift;
        } else {
            self.key -= 1 << shift;
        }
    }

    fn dfs(&mut self, list: &[(Subset, usize)], chosen: &mut Vec<(Subset, i64)>) {
        *self.hist.entry(self.key).or_insert(0) += 1;
        for (j, &(v, parent)) in list.iter().enumerate() {
            let cost = v.len() as i64 - 1;
            if parent != NONE {
                let old = chosen[parent].1;
                self.bump(old, false);
                self.bump(old - cost, true);
                chosen[parent].1 = old - cost;
            }
            let k = chosen.len();
            chosen.push((v, cost));
            self.bump(cost, true);
            let next: Vec<(Subset, usize)> = list[j + 1..]
                .iter()
                .filter_map(|&(c, p)| {
                    if c.is_subset(v) {
                        (c.len() as i64 + 1 <= cost).then_some((c, k))
                    } else if c.intersects(v) {
                        None
                    } else if p != NONE && p == parent {
                        (c.len() as i64 + 1 <= chosen[p].1).then_some((c, p))
                    } else {
                        Some((c, p))
                    }
                })
                .collect();
            self.dfs(&next, chosen);
            self.bump(cost, false);
            chosen.pop();
            if parent != NONE {
                let cur = chosen[parent].1;
                self.bump(cur, false);
                self.bump(cur + cost, true);
                chosen[parent].1 = cur + cost;
            }
        }
    }
}

/// Largest ground set accepted by [`poincare`].
pub const POINCARE_MAX_N: usize = 14;

/// `sum over forests F of L of prod_{U in F} (t + ... + t^{m(F,U)-1})`.
///
/// Forests with a two-element member or with some `m(F,U) <= 1` contribute
/// nothing; since `m` only drops as members are added, the search prunes
/// them. Works for any family; for a thicket it is the Poincaré polynomial.
pub fn poincare(l: &Family) -> Result<Poly> {
    let n = l.ground().n();
    if n > POINCARE_MAX_N {
        return Err(Error::TooLarge(alloc::format!("poincare needs n <= {POINCARE_MAX_N}, got {n}")));
    }
    let mut cands: Vec<Subset> = l.parts().iter().copied().filter(|u| u.len() >= 3).collect();
    cands.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
    let list: Vec<(Subset, usize)> = cands.into_iter().map(|c| (c, NONE)).collect();
    let mut s = Search { key: 0, hist: BTreeMap::new() };
    s.dfs(&list, &mut Vec::new());
    let ramps: Vec<Poly> = (0..=n).map(|m| Poly::ramp(m.saturating_sub(1))).collect();
    let mut total = Poly::default();
    for (key, count) in s.hist {
        let mut p = Poly::one();
        for m in 2..=n {
            let c = (key >> (4 * (m - 2))) & 0xF;
            for _ in 0..c {
                p = p.mul(&ramps[m]);
            }
        }
        total = total.add(&p.scale(count));
    }
    Ok(total)
}

/// `P(L_plus)` and `P(L) + P(L-bar) * (t + ... + t^{|T|-2})` for an
/// inclusion-minimal member `T`.
pub fn recurrence_check(lplus: &Family, t: Subset) -> Result<(Poly, Poly)> {
    let c = Collapse::new(lplus, t)?;
    let lhs = poincare(lplus)?;
    let rest = poincare(&lplus.without(t))?;
    let rhs = rest.add(&poincare(c.collapsed())?.mul(&Poly::ramp(t.len().saturating_sub(2))));
    Ok((lhs, rhs))
}

/// Largest ground set accepted by [`enumerate_basis`].
pub const BASIS_MAX_N: usize = 10;

/// The admissible monomials of the ring: forest shapes with
/// `1 <= n_T < m(shape, T)` for every member.
pub fn enumerate_basis(g: &GeneratorFamily) -> Result<Vec<Monomial>> {
    let ground = g.ground();
    if ground.n() > BASIS_MAX_N {
        return Err(Error::TooLarge(alloc::format!("basis enumeration needs n <= {BASIS_MAX_N}")));
    }
    let gens = g.generators();
    // m(parent) after adding c must stay at least 2.
    let accept = |chosen: &[Subset], c: Subset| {
        let Some(&p) = chosen.iter().rev().find(|&&p| c.is_proper_subset(p)) else {
            return true;
        };
        let kids = chosen
            .iter()
            .filter(|&&u| u.is_proper_subset(p) && !chosen.iter().any(|&w| u.is_proper_subset(w) && w.is_proper_subset(p)));
        let m = p.len() as i64 - 1 - kids.map(|u| u.len() as i64 - 1).sum::<i64>();
        m - (c.len() as i64 - 1) >= 2
    };
    let mut out = Vec::new();
    for shape in enumerate_within(ground, gens, None, accept) {
        let bounds: Vec<(Subset, u32)> = shape
            .parts()
            .iter()
            .map(|&t| (t, shape.m(t).expect("member") as u32 - 1))
            .collect();
        let mut e = alloc::vec![1u32; bounds.len()];
        loop {
            out.push(Monomial::from_factors(bounds.iter().zip(&e).map(|(&(t, _), &k)| (t, k))));
            let mut i = 0;
            while i < e.len() && e[i] == bounds[i].1 {
                e[i] = 1;
                i += 1;
            }
            if i == e.len() {
                break;
            }
            e[i] += 1;
        }
    }
    out.sort();
    Ok(out)
}

/// Rank of the ring of a forest: `prod n(F, T)`.
pub fn rank_forest(f: &Forest) -> u64 {
    f.totals().n
}

/// `2^n - 1 - n - C(n,2)`: the number of subsets of size at least three.
pub fn h2_rank(n: usize) -> u64 {
    (1u64 << n) - 1 - n as u64 - (n * (n - 1) / 2) as u64
}

/// Graded counts of a list of monomials.
pub fn graded_counts(basis: &[Monomial]) -> Poly {
    let mut c = Vec::new();
    for m in basis {
        let d = m.degree() as usize;
        if c.len() <= d {
            c.resize(d + 1, 0);
        }
        c[d] += 1;
    }
    Poly::new(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forests::{enumerate, Kind};
    use crate::groundset::{kapranov_prefix, GroundSet};
    use alloc::string::ToString;
    use alloc::vec;
    use proptest::prelude::*;

    fn g(n: usize) -> GroundSet {
        GroundSet::new(n).unwrap()
    }

    /// The forest sum straight from the definition, over all forests.
    fn naive(l: &Family) -> Poly {
        let mut total = Poly::default();
        for f in enumerate(l.ground(), Kind::Forests) {
            if !f.parts().iter().all(|&u| l.contains(u)) {
                continue;
            }
            let mut p = Poly::one();
            for &u in f.parts() {
                p = p.mul(&Poly::ramp((f.m(u).unwrap() - 1).max(0) as usize));
            }
            total = total.add(&p);
        }
        total
    }

    #[test]
    fn small_values() {
        assert_eq!(poincare(&Family::power(g(3))).unwrap().coeffs(), &[1, 1]);
        assert_eq!(poincare(&Family::power(g(4))).unwrap().coeffs(), &[1, 5, 1]);
        assert_eq!(poincare(&Family::power(g(5))).unwrap().coeffs(), &[1, 16, 16, 1]);
        assert_eq!(poincare(&Family::power(g(4))).unwrap().to_string(), "1 + 5t + t^2");
        assert_eq!(Poly::new(vec![1, 5, 1]).doubled(), vec![1, 0, 5, 0, 1]);
    }

    #[test]
    fn matches_naive_sum_on_prefixes() {
        for n in 3..=5 {
            let total = g(n).subsets(2).len();
            for k in 1..=total {
                let l = kapranov_prefix(g(n), k);
                assert_eq!(poincare(&l).unwrap(), naive(&l), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn h2_and_palindromes() {
        for n in 3..=8 {
            let p = poincare(&Family::power(g(n))).unwrap();
            assert_eq!(p.coeffs()[1], h2_rank(n), "n={n}");
            let mut rev = p.coeffs().to_vec();
            rev.reverse();
            assert_eq!(rev, p.coeffs());
            assert_eq!(p.coeffs().len(), n - 1);
        }
    }

    #[test]
    fn recurrence_along_kapranov_order() {
        for n in 3..=5 {
            let total = g(n).subsets(2).len();
            for k in 2..=total {
                let l = kapranov_prefix(g(n), k);
                let t = *l.parts().last().unwrap();
                let (a, b) = recurrence_check(&l, t).unwrap();
                assert_eq!(a, b, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn basis_counts_match() {
        for n in 3..=6 {
            let basis = enumerate_basis(&GeneratorFamily::Full(g(n))).unwrap();
            assert_eq!(graded_counts(&basis), poincare(&Family::power(g(n))).unwrap(), "n={n}");
        }
    }

    #[test]
    fn forest_rank() {
        for f in enumerate(g(5), Kind::Forests) {
            let basis = enumerate_basis(&GeneratorFamily::Forest(f.clone())).unwrap();
            assert_eq!(basis.len() as u64, rank_forest(&f), "{f}");
        }
    }

    proptest! {
        #[test]
        fn pruned_search_equals_naive(bits in any::<u32>()) {
            let all = g(5).subsets(2);
            let parts = all.iter().enumerate().filter(|(i, _)| bits >> (i % 32) & 1 == 1).map(|(_, &u)| u);
            let l = Family::new(g(5), parts).unwrap();
            prop_assert_eq!(poincare(&l).unwrap(), naive(&l));
        }
    }
}
