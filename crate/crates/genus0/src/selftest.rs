//! The invariant suites behind `selftest`. Each suite runs only up to the
//! ground-set size where it finishes quickly; `--deep` raises the limits.

use std::collections::BTreeSet;

use genus0_core::forests::{enumerate, tree_grading, tree_polynomial, Kind, Tree};
use genus0_core::keel::keel_check;
use genus0_core::oracle::{exhaustive_forest_oracle, fuzz_algebra, graded_quotient_rank};
use genus0_core::points::{gen_point, theta_partitions, type_of};
use genus0_core::poincare::{enumerate_basis, graded_counts, poincare};
use genus0_core::ring::GeneratorFamily;
use genus0_core::treerep::{fiber, restrict_rooted, restrict_set, t1, t2, t3, u3};
use genus0_core::{Family, GroundSet};
use serde::Serialize;

use crate::cli::{Failure, Report};

#[derive(Serialize)]
struct Check {
    name: &'static str,
    status: &'static str,
    detail: String,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    ok: bool,
    checks: Vec<Check>,
}

type Outcome = Option<Result<String, String>>;

fn s_trees(g: GroundSet) -> Vec<Tree> {
    enumerate(g, Kind::Trees)
        .filter_map(|f| Tree::from_forest(f).ok())
        .filter(Tree::is_s_tree)
        .collect()
}

fn verdict(ok: bool, pass: String, fail: String) -> Result<String, String> {
    if ok {
        Ok(pass)
    } else {
        Err(fail)
    }
}

fn forests(g: GroundSet, deep: bool) -> Outcome {
    let n = g.n();
    if n <= 4 {
        let r = exhaustive_forest_oracle(n).ok()?;
        return Some(verdict(
            r.is_ok(),
            format!("{} forests among {} families", r.forests, r.families),
            format!("{r:?}"),
        ));
    }
    if n > if deep { 6 } else { 5 } {
        return None;
    }
    let mut count = 0;
    for f in enumerate(g, Kind::Forests) {
        count += 1;
        let t = f.totals();
        if t.m.is_some_and(|m| m != t.n) {
            return Some(Err(format!("m and n differ on {f}")));
        }
    }
    Some(Ok(format!("m = n on {count} forests")))
}

fn betti(g: GroundSet, deep: bool) -> Outcome {
    let n = g.n();
    if n > if deep { 8 } else { 7 } {
        return None;
    }
    let p = poincare(&Family::power(g)).ok()?;
    let c = p.coeffs().to_vec();
    let basis = graded_counts(&enumerate_basis(&GeneratorFamily::Full(g)).ok()?);
    if basis.coeffs() != c.as_slice() {
        return Some(Err(format!("forest sum {p} but basis gives {basis}")));
    }
    let h2 = (1u64 << n) - 1 - n as u64 - (n * (n - 1) / 2) as u64;
    if c.get(1) != Some(&h2) || c.iter().rev().ne(c.iter()) {
        return Some(Err(format!("{p} is not palindromic with t coefficient {h2}")));
    }
    let top = if n <= 4 { n as u32 } else if n == 5 { 2 } else { 0 };
    if n <= 5 {
        for d in 0..=top {
            let r = graded_quotient_rank(n, d).ok()?;
            if r != c.get(d as usize).copied().unwrap_or(0) {
                return Some(Err(format!("linear algebra gives rank {r} in degree {d}")));
            }
        }
    }
    Some(Ok(p.to_string()))
}

fn trees(g: GroundSet, deep: bool) -> Outcome {
    if g.n() > if deep { 7 } else { 6 } {
        return None;
    }
    let h = tree_polynomial(g.n()).ok()?;
    let counted = tree_grading(g);
    Some(verdict(h == counted, format!("h = {h:?}"), format!("recurrence {h:?}, enumeration {counted:?}")))
}

fn treerep(g: GroundSet, deep: bool) -> Outcome {
    if g.n() > if deep { 6 } else { 5 } {
        return None;
    }
    let all = s_trees(g);
    for t in &all {
        let r = t3(t);
        let back = u3(&r, g).ok()?;
        let via = t3(&t2(&t1(&r, g).ok()?));
        if &back != t || via != r {
            return Some(Err(format!("round trip fails on {t}")));
        }
        for u in g.subsets(2) {
            let a = restrict_set(t, u).ok()?;
            let b = u3(&restrict_rooted(&r, u).ok()?, g).ok()?;
            if a != b {
                return Some(Err(format!("restricting {t} to {u} does not commute")));
            }
        }
    }
    Some(Ok(format!("{} trees", all.len())))
}

fn fibers(g: GroundSet, deep: bool) -> Outcome {
    let n = g.n();
    if n > if deep { 5 } else { 4 } {
        return None;
    }
    let big = GroundSet::new(n + 1).ok()?;
    let want: BTreeSet<String> = s_trees(big).iter().map(ToString::to_string).collect();
    let mut seen = BTreeSet::new();
    for t in s_trees(g) {
        let f = fiber(&t).ok()?;
        if f.len() != 2 * t.len() + n {
            return Some(Err(format!("fiber of {t} has {} trees", f.len())));
        }
        for u in f {
            if !seen.insert(u.to_string()) {
                return Some(Err(format!("{u} lies in two fibers")));
            }
        }
    }
    Some(verdict(seen == want, format!("{} trees on n+1", seen.len()), "fibers miss some trees".into()))
}

fn keel(g: GroundSet, deep: bool) -> Outcome {
    if g.n() > if deep { 6 } else { 5 } {
        return None;
    }
    let r = keel_check(g.n()).ok()?;
    Some(verdict(r.is_ok(), format!("{} divisor pairs", r.pairs_checked), format!("{r:?}")))
}

fn algebra(g: GroundSet, deep: bool, seed: u64) -> Outcome {
    if g.n() > 6 {
        return None;
    }
    let trials = match (deep, g.n()) {
        (true, _) => 1000,
        (false, 6) => 30,
        _ => 200,
    };
    let r = fuzz_algebra(g.n(), trials, seed).ok()?;
    Some(verdict(r.is_ok(), format!("{trials} trials"), r.first_failure.unwrap_or_default()))
}

fn points(g: GroundSet, seed: u64) -> Outcome {
    if g.n() > 5 {
        return None;
    }
    let all = s_trees(g);
    for (k, t) in all.iter().enumerate() {
        let c = gen_point(t, seed.wrapping_add(k as u64)).ok()?;
        let ty = type_of(&c).ok()?;
        if &ty != t || t2(&theta_partitions(&c).ok()?) != ty {
            return Some(Err(format!("witness for {t} has type {ty}")));
        }
    }
    Some(Ok(format!("{} witnesses", all.len())))
}

pub(crate) fn run_selftest(g: GroundSet, deep: bool, seed: u64) -> Result<Report, Failure> {
    let results: Vec<(&'static str, Outcome)> = vec![
        ("forests", forests(g, deep)),
        ("betti", betti(g, deep)),
        ("trees", trees(g, deep)),
        ("treerep", treerep(g, deep)),
        ("fiber", fibers(g, deep)),
        ("keel", keel(g, deep)),
        ("algebra", algebra(g, deep, seed)),
        ("points", points(g, seed)),
    ];
    let checks: Vec<Check> = results
        .into_iter()
        .map(|(name, r)| match r {
            None => Check { name, status: "skip", detail: String::new() },
            Some(Ok(d)) => Check { name, status: "pass", detail: d },
            Some(Err(d)) => Check { name, status: "fail", detail: d },
        })
        .collect();
    let ok = checks.iter().all(|c| c.status != "fail");
    let rows = checks.iter().map(|c| vec![c.name.to_string(), c.status.to_string(), c.detail.clone()]).collect();
    let report = Report::new(&Summary { n: g.n(), ok, checks }, vec!["check", "status", "detail"], rows);
    Ok(if ok { report } else { report.failed() })
}
