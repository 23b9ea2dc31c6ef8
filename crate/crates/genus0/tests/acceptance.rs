//! Acceptance run: one PASS or FAIL line per criterion. All arithmetic is
//! exact. Exits nonzero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::process::Command;
use std::time::{Duration, Instant};

use genus0_core::forests::{enumerate, tree_grading, tree_polynomial, Kind, Tree};
use genus0_core::keel::{keel_check, x_to_divisor};
use genus0_core::oracle::graded_quotient_rank;
use genus0_core::points::{gen_point, reconstruct_from_tree, theta_partitions, type_of, LineRep};
use genus0_core::poincare::{enumerate_basis, graded_counts, poincare};
use genus0_core::ring::{relation_family_product, GeneratorFamily, Monomial, Ring, RingElement};
use genus0_core::treerep::{fiber, order_leq_rooted, order_leq_set, restrict_rooted, restrict_set, t1, t2, t3, u3};
use genus0_core::{Family, GroundSet, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Verdict = Result<String, String>;

fn g(n: usize) -> GroundSet {
    GroundSet::new(n).unwrap()
}

fn s_trees(n: usize) -> Vec<Tree> {
    enumerate(g(n), Kind::Trees)
        .filter_map(|f| Tree::from_forest(f).ok())
        .filter(Tree::is_s_tree)
        .collect()
}

fn check(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

/// `[1, 2, 3]` from `{"n":4,"poincare":[1,2,3]}`.
fn poincare_field(json: &str) -> Vec<u64> {
    let v: serde_json::Value = serde_json::from_str(json).expect("json");
    v["poincare"].as_array().expect("array").iter().map(|x| x.as_u64().expect("integer")).collect()
}

fn criterion_1() -> Verdict {
    let bin = env!("CARGO_BIN_EXE_genus0");
    let want: [&[u64]; 3] = [&[1, 1], &[1, 5, 1], &[1, 16, 16, 1]];
    for (n, want) in (3..=5).zip(want) {
        let start = Instant::now();
        let out = Command::new(bin).args(["betti", "--n", &n.to_string()]).output().map_err(|e| e.to_string())?;
        let took = start.elapsed();
        let forest_sum = poincare_field(&String::from_utf8_lossy(&out.stdout));
        check(forest_sum == want, format!("betti --n {n} gave {forest_sum:?}"))?;
        check(took < Duration::from_secs(1), format!("betti --n {n} took {took:?}"))?;
        let basis = graded_counts(&enumerate_basis(&GeneratorFamily::Full(g(n))).unwrap());
        check(basis.coeffs() == want, format!("basis enumeration at n={n} gave {basis}"))?;
        let top = if n <= 4 { n as u32 } else { 2 };
        for d in 0..=top {
            let r = graded_quotient_rank(n, d).unwrap();
            check(r == want.get(d as usize).copied().unwrap_or(0), format!("linear algebra n={n} d={d} gave {r}"))?;
        }
    }
    let start = Instant::now();
    let p10 = poincare(&Family::power(g(10))).unwrap();
    let took = start.elapsed();
    check(took < Duration::from_secs(60), format!("n=10 forest sum took {took:?}"))?;
    let c = p10.coeffs();
    check(c.iter().eq(c.iter().rev()) && c[1] == 968, format!("n=10 gave {p10}"))?;
    Ok(format!("[1,1], [1,5,1], [1,16,16,1] three ways; n=10 in {} ms", took.as_millis()))
}

fn criterion_2() -> Verdict {
    for n in 3..=8 {
        let c1 = poincare(&Family::power(g(n))).unwrap().coeffs()[1];
        let formula = (1u64 << n) - 1 - n as u64 - (n * (n - 1) / 2) as u64;
        check(c1 == formula, format!("n={n}: {c1} vs {formula}"))?;
    }
    Ok("t coefficient is 2^n - 1 - n - n(n-1)/2 for n = 3..8".into())
}

fn criterion_3() -> Verdict {
    for n in 2..=6 {
        let h = tree_polynomial(n).unwrap();
        let counted = tree_grading(g(n));
        check(h == counted, format!("n={n}: recurrence {h:?}, enumeration {counted:?}"))?;
    }
    let at_one: Vec<u64> = (3..=5).map(|n| tree_grading(g(n)).iter().sum()).collect();
    check(at_one == [4, 26, 236], format!("h(1) = {at_one:?}"))?;
    let rec: Vec<u64> = (3..=5).map(|n| tree_polynomial(n).unwrap().iter().sum()).collect();
    check(rec == at_one, format!("recurrence h(1) = {rec:?}"))?;
    Ok("h_n agree for n <= 6; h(1) = 4, 26, 236".into())
}

fn criterion_4() -> Verdict {
    for n in 2..=5 {
        let want: HashSet<Tree> = s_trees(n + 1).into_iter().collect();
        let mut seen = HashSet::new();
        for t in s_trees(n) {
            let f = fiber(&t).unwrap();
            check(f.len() == 2 * t.len() + n, format!("fiber of {t} has {} members", f.len()))?;
            for u in f {
                check(seen.insert(u.clone()), format!("{u} lies in two fibers"))?;
            }
        }
        check(seen == want, format!("n={n}: fibers cover {} of {} trees", seen.len(), want.len()))?;
    }
    Ok("fibers partition the trees on n+1 and have size 2|T| + n, n <= 5".into())
}

fn criterion_5() -> Verdict {
    let mut count = 0;
    for n in 2..=5 {
        for f in enumerate(g(n), Kind::Forests) {
            let t = f.totals();
            check(t.m == Some(t.n), format!("{f}: m = {:?}, n = {}", t.m, t.n))?;
            count += 1;
        }
    }
    Ok(format!("m = n on all {count} forests with n <= 5"))
}

/// Budget test for nonvanishing, written out here from the definition.
fn in_budget(ground: GroundSet, m: &Monomial) -> bool {
    ground.subsets(2).into_iter().all(|t| {
        let load: u32 = m.factors().iter().filter(|(u, _)| u.is_subset(t)).map(|(_, e)| e).sum();
        load + 2 <= t.len() as u32
    })
}

fn all_monomials(gens: &[Subset], max_deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    let mut frontier = vec![(Monomial::one(), 0usize)];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for (m, start) in frontier {
            for (i, &t) in gens.iter().enumerate().skip(start) {
                let mm = m.mul(&Monomial::var(t));
                out.push(mm.clone());
                next.push((mm, i));
            }
        }
        frontier = next;
    }
    out
}

fn soundness(ring: &mut Ring, m: &Monomial) -> Result<(), String> {
    let ground = ring.ground();
    let n = ground.n() as u32;
    let nf = ring.normal_form(m).unwrap();
    let alive = in_budget(ground, m);
    check(nf.is_zero() != alive, format!("{m}: normal form {nf}, budget says nonzero = {alive}"))?;
    if alive {
        let fill = Monomial::var_pow(ground.full(), n - 2 - m.degree());
        let top = ring.normalize(&RingElement::from(m.mul(&fill))).unwrap();
        let want = RingElement::from(Monomial::var_pow(ground.full(), n - 2));
        check(top == want, format!("{m} fills to {top}"))?;
    }
    Ok(())
}

fn criterion_6() -> Verdict {
    let start = Instant::now();
    let mut ring = Ring::full(g(4));
    let all = all_monomials(&g(4).subsets(3), 2);
    for m in &all {
        soundness(&mut ring, m)?;
    }
    let mut ring = Ring::full(g(5));
    let gens = g(5).subsets(3);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..10_000 {
        let d = rng.random_range(0..=3);
        let m = Monomial::from_factors((0..d).map(|_| (gens[rng.random_range(0..gens.len())], 1)));
        soundness(&mut ring, &m)?;
    }
    let took = start.elapsed();
    check(took < Duration::from_secs(30), format!("took {took:?}"))?;
    Ok(format!("{} monomials at n=4 and 10^4 samples at n=5 in {} ms", all.len(), took.as_millis()))
}

fn criterion_7() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut elements = 0;
    for n in [4, 5] {
        let ground = g(n);
        let gens = ground.subsets(3);
        let mut ring = Ring::full(ground);
        for _ in 0..10 {
            let mut e = RingElement::zero();
            for _ in 0..3 {
                let d = rng.random_range(1..=n as u32 - 1);
                let m = Monomial::from_factors((0..d).map(|_| (gens[rng.random_range(0..gens.len())], 1)));
                e.add_term(m, rng.random_range(-3i64..=3).into());
            }
            let want = ring.normalize(&e).unwrap();
            for _ in 0..1000 {
                let got = ring.normalize_random(&e, &mut rng).unwrap();
                check(got == want, format!("{e}: {got} vs {want}"))?;
            }
            elements += 1;
        }
    }
    Ok(format!("{elements} elements x 1000 random strategies at n = 4, 5"))
}

fn criterion_8() -> Verdict {
    let mut count = 0;
    for n in 3..=5 {
        let ground = g(n);
        let mut ring = Ring::full(ground);
        let sets = ground.subsets(2);
        let k = sets.len();
        let mut seen = HashSet::new();
        for a in 0..k {
            for b in a..k {
                for c in b..k {
                    let fam = Family::new(ground, [sets[a], sets[b], sets[c]]).unwrap();
                    if !fam.is_connected() || !seen.insert(fam.to_string()) {
                        continue;
                    }
                    let p = relation_family_product(&mut ring, &fam).unwrap();
                    check(p.is_zero(), format!("{fam} leaves {p}"))?;
                    count += 1;
                }
            }
        }
    }
    Ok(format!("all {count} connected families with at most three members vanish, n <= 5"))
}

fn criterion_9() -> Verdict {
    for n in [4, 5] {
        let ground = g(n);
        let rep = keel_check(n).unwrap();
        check(rep.is_ok(), format!("{rep:?}"))?;
        let mut ring = Ring::full(ground);
        for t in ground.subsets(3) {
            let mut forms = BTreeSet::new();
            for i in t.iter() {
                for j in t.iter().filter(|&j| j > i) {
                    let x = x_to_divisor(ground, t, i, j).unwrap().to_x();
                    forms.insert(ring.normalize(&x).unwrap().to_string());
                }
            }
            check(forms.len() == 1, format!("x{t} depends on the pair: {forms:?}"))?;
        }
    }
    Ok("round trips, pair independence, product vanishing and divisor sums at n = 4, 5".into())
}

fn criterion_10() -> Verdict {
    let mut count = 0;
    for n in 2..=5 {
        let ground = g(n);
        let all = s_trees(n);
        for t in &all {
            let r = t3(t);
            check(u3(&r, ground).unwrap() == *t, format!("U3 T3 fails on {t}"))?;
            let back = t3(&t2(&t1(&r, ground).unwrap()));
            check(back == r, format!("T3 T2 T1 fails on {r}"))?;
            for u in ground.subsets(2) {
                let a = restrict_set(t, u).unwrap();
                let b = u3(&restrict_rooted(&r, u).unwrap(), ground).unwrap();
                check(a == b, format!("restricting {t} to {u}"))?;
            }
        }
        let rooted: Vec<_> = all.iter().map(t3).collect();
        for (a, ra) in all.iter().zip(&rooted) {
            for (b, rb) in all.iter().zip(&rooted) {
                let x = order_leq_set(a, b);
                check(x == order_leq_rooted(ra, rb).unwrap(), format!("order differs on {a}, {b}"))?;
            }
        }
        count += all.len();
    }
    Ok(format!("round trips, restriction squares and orders on {count} trees, n <= 5"))
}

/// Line on `t` that takes the value `k` on the `k`-th child class.
fn generic_data(tree: &Tree) -> BTreeMap<Subset, LineRep> {
    let mut data = BTreeMap::new();
    for &t in tree.parts() {
        let q = tree.children(t).unwrap();
        let vals: Vec<i64> = t.iter().map(|i| q.class_of(i).unwrap() as i64).collect();
        data.insert(t, LineRep::from_integers(t, &vals).unwrap());
    }
    data
}

fn criterion_11() -> Verdict {
    let mut count = 0;
    for n in 2..=5 {
        for (k, tree) in s_trees(n).iter().enumerate() {
            let c = reconstruct_from_tree(tree, &generic_data(tree)).unwrap();
            check(type_of(&c).unwrap() == *tree, format!("reconstruction from {tree}"))?;
            check(t2(&theta_partitions(&c).unwrap()) == *tree, format!("theta on {tree}"))?;
            let w = gen_point(tree, k as u64).unwrap();
            let ty = type_of(&w).unwrap();
            check(ty == *tree, format!("witness for {tree} has type {ty}"))?;
            check(t2(&theta_partitions(&w).unwrap()) == ty, format!("theta on witness for {tree}"))?;
            count += 1;
        }
    }
    Ok(format!("type and theta recover all {count} trees, n <= 5"))
}

fn main() {
    let criteria: Vec<(&str, fn() -> Verdict)> = vec![
        ("Betti numbers", criterion_1),
        ("H2 rank formula", criterion_2),
        ("tree counting", criterion_3),
        ("fiber partition", criterion_4),
        ("m = n totals", criterion_5),
        ("normal-form soundness", criterion_6),
        ("strategy independence", criterion_7),
        ("connected-family relations", criterion_8),
        ("Keel relations", criterion_9),
        ("tree representations", criterion_10),
        ("point model", criterion_11),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let ms = start.elapsed().as_millis();
        match verdict {
            Ok(d) => println!("criterion {:>2}: PASS  {name}: {d} ({ms} ms)", k + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2}: FAIL  {name}: {d}", k + 1)
            }
        }
    }
    // The geometric statements themselves are out of reach of a finite
    // computation; what can be checked is the algebra and combinatorics above.
    if failed == 0 {
        println!("criterion 12: PASS  geometric results: checked only through criteria 1-11, all passing");
    } else {
        failed += 1;
        println!("criterion 12: FAIL  geometric results: criteria 1-11 do not all pass");
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
