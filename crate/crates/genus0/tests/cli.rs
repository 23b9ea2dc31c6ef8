use std::process::Command;

use genus0::cli::{EXIT_TOO_LARGE, EXIT_USAGE};
use genus0::{parse_expression, run};
use genus0_core::ring::{Monomial, Ring, RingElement};
use genus0_core::GroundSet;
use proptest::prelude::*;

fn genus0(args: &[&str]) -> genus0::Outcome {
    let mut v = vec!["genus0"];
    v.extend_from_slice(args);
    run(v)
}

fn stdout(args: &[&str]) -> String {
    let out = genus0(args);
    assert_eq!(out.code, 0, "{args:?}: {}", out.stderr);
    out.stdout
}

#[test]
fn documented_outputs() {
    assert_eq!(stdout(&["betti", "--n", "4"]), "{\"n\":4,\"poincare\":[1,5,1]}\n");
    assert_eq!(stdout(&["betti", "--n", "3"]), "{\"n\":3,\"poincare\":[1,1]}\n");
    assert_eq!(
        stdout(&["reduce", "--n", "4", "x{1,2,3}*x{2,3,4}"]),
        "{\"normal_form\":\"x{1,2,3,4}^2\"}\n"
    );
    assert_eq!(stdout(&["trees", "--n", "3", "--poly"]), "{\"h\":[0,1,3]}\n");
    assert_eq!(stdout(&["trees", "--n", "4"]), "{\"n\":4,\"count\":26}\n");
    assert_eq!(stdout(&["reduce", "--n", "4", "D{1,2}*D{1,3}"]), "{\"normal_form\":\"0\"}\n");
    assert_eq!(stdout(&["reduce", "--n", "4", "x{1,2}"]), "{\"normal_form\":\"0\"}\n");
}

#[test]
fn family_options() {
    assert_eq!(
        stdout(&["betti", "--n", "4", "--family", "forest", "[{1,2,3,4},{1,2,3}]"]),
        "{\"n\":4,\"family\":\"[{1,2,3,4},{1,2,3}]\",\"poincare\":[1,2,1]}\n"
    );
    let thicket = stdout(&["betti", "--n", "4", "--family", "thicket", "[{1,2,3,4},{1,2,3}]"]);
    assert!(thicket.contains("\"poincare\":[1,2,1]"), "{thicket}");
    assert_eq!(genus0(&["betti", "--n", "4", "--family", "thicket", "[{1,2},{2,3}]"]).code, EXIT_USAGE);
    assert_eq!(genus0(&["betti", "--n", "4", "--family", "forest", "[{1,2},{2,3}]"]).code, EXIT_USAGE);
    assert_eq!(stdout(&["betti", "--n", "4", "--family", "full", "--doubled"]), "{\"n\":4,\"poincare\":[1,5,1],\"doubled\":[1,0,5,0,1]}\n");
}

#[test]
fn csv_output() {
    assert_eq!(stdout(&["betti", "--n", "4", "--format", "csv"]), "degree,rank\n0,1\n1,5\n2,1\n");
    let forests = stdout(&["forests", "--n", "3", "--format", "csv"]);
    assert_eq!(forests.lines().count(), 9);
    assert!(forests.contains("\"[{1,2,3},{1,2}]\""));
}

#[test]
fn conversions() {
    assert_eq!(
        stdout(&["convert", "--n", "4", "x{1,2,3}"]),
        "{\"x\":\"x{1,2,3}\",\"divisor\":\"D{1,2} + D{1,2,4}\"}\n"
    );
    let d = stdout(&["convert", "--n", "4", "D{1,2} + D{1,3,4}"]);
    // The same class, rewritten through the two smallest elements of each x.
    assert_eq!(d, "{\"x\":\"x{1,2,4} - x{1,3,4} + x{1,2,3}\",\"divisor\":\"2*D{1,2} - D{1,3} + D{1,2,4}\"}\n");
    let sq = stdout(&["convert", "--n", "4", "D{1,2}*D{3,4}"]);
    assert_eq!(sq, "{\"x\":\"x{1,2,3,4}^2\"}\n");
}

#[test]
fn trees_and_fibers() {
    let list = stdout(&["trees", "--n", "3", "--list"]);
    assert_eq!(list, "{\"n\":3,\"trees\":[\"[{1,2,3}]\",\"[{1,2,3},{1,3}]\",\"[{1,2,3},{2,3}]\",\"[{1,2,3},{1,2}]\"]}\n");
    let f = stdout(&["fiber", "--n", "4", "[{1,2,3,4},{1,2}]"]);
    assert!(f.contains("\"size\":8"), "{f}");
    assert_eq!(genus0(&["fiber", "--n", "4", "[{1,2}]"]).code, EXIT_USAGE);
    let forests = stdout(&["forests", "--n", "3"]);
    assert!(forests.starts_with("{\"n\":3,\"count\":8,"));
}

#[test]
fn point_type_reads_files() {
    let dir = std::env::temp_dir().join(format!("genus0-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.json");
    std::fs::write(
        &good,
        r#"{"family":["{1,2,3,4}","{1,2,3}","{1,2}"],"lines":{"{1,2,3,4}":[0,0,0,1],"{1,2,3}":[0,0,1],"{1,2}":[0,1]}}"#,
    )
    .unwrap();
    let out = stdout(&["point-type", "--n", "4", good.to_str().unwrap()]);
    assert_eq!(out, "{\"valid\":true,\"type\":\"[{1,2,3,4},{1,2,3},{1,2}]\"}\n");

    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"family":["{1,2,3,4}","{1,2,3}"],"lines":{"{1,2,3,4}":[0,1,2,3],"{1,2,3}":[0,1,3]}}"#)
        .unwrap();
    let out = genus0(&["point-type", "--n", "4", bad.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert_eq!(out.stdout, "{\"valid\":false,\"violation\":[\"{1,2,3,4}\",\"{1,2,3}\"]}\n");

    let not_thicket = dir.join("nt.json");
    std::fs::write(&not_thicket, r#"{"family":["{1,2,3}"],"lines":{"{1,2,3}":[0,1,2]}}"#).unwrap();
    assert_eq!(genus0(&["point-type", "--n", "4", not_thicket.to_str().unwrap()]).code, EXIT_USAGE);
    assert_eq!(genus0(&["point-type", "--n", "4", dir.join("missing.json").to_str().unwrap()]).code, EXIT_USAGE);

    let out_file = dir.join("out.json");
    let o = genus0(&["betti", "--n", "3", "--out", out_file.to_str().unwrap()]);
    assert_eq!((o.code, o.stdout.as_str()), (0, ""));
    assert_eq!(std::fs::read_to_string(&out_file).unwrap(), "{\"n\":3,\"poincare\":[1,1]}\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn exit_codes_from_the_binary() {
    let bin = env!("CARGO_BIN_EXE_genus0");
    let code = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = code(&["betti", "--n", "4"]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&ok.stdout), "{\"n\":4,\"poincare\":[1,5,1]}\n");
    assert_eq!(code(&["betti"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(code(&["frobnicate"]).status.code(), Some(EXIT_USAGE));
    assert_eq!(code(&["reduce", "--n", "4", "D{1,2,3,4}"]).status.code(), Some(EXIT_USAGE));
    let err = code(&["reduce", "--n", "4", "x{1,2"]);
    assert_eq!(err.status.code(), Some(EXIT_USAGE));
    assert!(String::from_utf8_lossy(&err.stderr).contains("position 5"));
    assert_eq!(code(&["betti", "--n", "13"]).status.code(), Some(EXIT_TOO_LARGE));
    assert_eq!(code(&["trees", "--n", "9", "--list"]).status.code(), Some(EXIT_TOO_LARGE));
    assert_eq!(code(&["selftest", "--n", "4"]).status.code(), Some(0));
}

#[test]
fn selftest_is_seeded() {
    let a = stdout(&["selftest", "--n", "4", "--seed", "9"]);
    assert!(a.starts_with("{\"n\":4,\"ok\":true,"), "{a}");
    assert_eq!(a, stdout(&["selftest", "--n", "4", "--seed", "9"]));
}

proptest! {
    // Printing a normal form and parsing it back gives the same element.
    #[test]
    fn normal_forms_round_trip(picks in proptest::collection::vec((0usize..16, 1u32..3, -3i64..4), 1..4)) {
        let g = GroundSet::new(5).unwrap();
        let gens = g.subsets(3);
        let mut ring = Ring::full(g);
        let mut e = RingElement::zero();
        for (i, k, c) in picks {
            let m = Monomial::from_factors([(gens[i], 1), (gens[(i * 7 + 3) % 16], k)]);
            e.add_term(m, c.into());
        }
        let nf = ring.normalize(&e).unwrap();
        let text = nf.to_string();
        let back = parse_expression(&text, g).unwrap().evaluate(&mut ring).unwrap();
        prop_assert_eq!(back, nf);
    }
}
