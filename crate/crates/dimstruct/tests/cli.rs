//! Behavior of the binary beyond the acceptance gate: per-subcommand output,
//! witness text, written files, and error paths.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use dimstruct::fileio::parse_structure_text;
use dimstruct::structure::DimensionStructure;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_dimstruct")
}

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let Output { status, stdout, stderr } = Command::new(bin())
        .args(args)
        .output()
        .expect("binary spawns");
    (
        status.code().expect("no signal"),
        String::from_utf8_lossy(&stdout).into_owned(),
        String::from_utf8_lossy(&stderr).into_owned(),
    )
}

fn tmpfile(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dimstruct-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn dim_mu_and_order_print_single_values() {
    let f = fixture("sync_example.json");
    let (code, out, _) = run(&["dim", &f, "--point", "y"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "dim y = b");

    let (code, out, _) = run(&["mu", &f, "--point", "y", "--at", "a"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "mu(y, a) = inf");

    let (code, out, _) = run(&["order", &f, "--points", "y,z"]);
    assert_eq!(code, 0);
    assert!(out.contains("Incomparable"), "{out}");

    // unknown point is an input error, not a violation
    let (code, _, err) = run(&["dim", &f, "--point", "ghost"]);
    assert_eq!(code, 2);
    assert!(err.contains("ghost"), "{err}");
}

#[test]
fn classify_emits_the_full_flag_table() {
    let (code, out, _) = run(&["classify", &fixture("sync_example.json")]);
    assert_eq!(code, 0);
    for key in ["principal", "normal", "small", "strong"] {
        assert!(out.contains(&format!("\"{key}\"")), "missing {key} in {out}");
    }
}

#[test]
fn check_respects_quiet() {
    let f = fixture("ax3_failure.json");
    let (code, out, _) = run(&["check", &f]);
    assert_eq!(code, 1);
    assert!(out.contains("zero set"), "witness missing: {out}");
    let (code, out, _) = run(&["check", &f, "--quiet"]);
    assert_eq!(code, 1);
    assert_eq!(out.trim(), "check: FAIL");
}

#[test]
fn sync_reports_the_failing_subset() {
    let (code, out, _) = run(&["sync", &fixture("sync_example.json")]);
    assert_eq!(code, 1);
    assert!(out.starts_with("sync: FAIL"), "{out}");
    for needle in ["cond2", "y", "z"] {
        assert!(out.contains(needle), "missing {needle} in {out}");
    }
    // a pre-structure without point_order is an input error
    let (code, _, err) = run(&["sync", &fixture("nonprincipal.json")]);
    assert_eq!(code, 2);
    assert!(err.contains("point_order"), "{err}");
}

#[test]
fn combine_writes_canonical_valid_output() {
    let f = fixture("sync_example.json");
    let out_path = tmpfile("product.json");
    let (code, out, _) = run(&[
        "combine",
        "--op",
        "product",
        &f,
        &f,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{out}");
    let text = std::fs::read_to_string(&out_path).unwrap();
    let file = parse_structure_text(&text).unwrap();
    let d = DimensionStructure::validate(file.data).unwrap();
    assert_eq!(d.points().len(), 16);
    assert_eq!(d.poset().len(), 25);

    // wrong arity is a usage error
    let (code, _, err) = run(&["combine", "--op", "product", &f, "--out", "/dev/null"]);
    assert_eq!(code, 2);
    assert!(err.contains("exactly 2"), "{err}");
    let (code, _, err) = run(&["combine", "--op", "frobnicate", &f, "--out", "/dev/null"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"), "{err}");
}

#[test]
fn combine_sum_stacks_blocks_disjointly() {
    // summing a file with itself collides on names: exit 2
    let f = fixture("sync_example.json");
    let (code, _, err) = run(&["combine", "--op", "sum", &f, &f, "--out", "/dev/null"]);
    assert_eq!(code, 2);
    assert!(err.contains("disjoint") || err.contains("duplicate"), "{err}");

    // a small block whose names collide with nothing shipped
    let block = tmpfile("block.json");
    std::fs::write(
        &block,
        r#"{
            "poset": {"elements": ["m1", "m2"], "le": [["m1", "m2"]]},
            "points": ["y1"],
            "mu": {"y1": {"m1": "inf", "m2": "0"}}
        }"#,
    )
    .unwrap();
    let g = fixture("ax3_failure_extended.json");
    let out_path = tmpfile("sum.json");
    let (code, _, err) = run(&[
        "combine",
        "--op",
        "sum",
        block.to_str().unwrap(),
        &g,
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let d = DimensionStructure::validate(
        parse_structure_text(&std::fs::read_to_string(&out_path).unwrap())
            .unwrap()
            .data,
    )
    .unwrap();
    assert_eq!(d.points().len(), 2);
    assert_eq!(d.poset().len(), 7);
}

#[test]
fn extend_reproduces_the_shipped_completion() {
    let out_path = tmpfile("extended.json");
    let (code, out, _) = run(&[
        "extend",
        &fixture("ax3_failure.json"),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(out.contains("inf{p,q}"), "report: {out}");
    let written = std::fs::read_to_string(&out_path).unwrap();
    let shipped = std::fs::read_to_string(fixture("ax3_failure_extended.json")).unwrap();
    assert_eq!(written, shipped);
}

#[test]
fn embed_verifies_the_hand_built_host() {
    let (code, out, _) = run(&[
        "embed",
        &fixture("ax3_failure.json"),
        &fixture("ax3_failure_extended.json"),
        &fixture("embed_target.json"),
    ]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.trim(), "embed: pass");

    // a wrong claimed completion fails with exit 1
    let (code, out, _) = run(&[
        "embed",
        &fixture("ax3_failure.json"),
        &fixture("embed_target.json"),
        &fixture("embed_target.json"),
    ]);
    assert_eq!(code, 1);
    assert!(out.starts_with("embed: FAIL"), "{out}");
}

#[test]
fn map_verify_accepts_the_identity_and_rejects_a_broken_map() {
    let f = fixture("sync_example.json");
    let m = fixture("identity_map.json");
    let (code, out, _) = run(&["map-verify", "--kind", "iso", &f, &f, &m]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("map-verify: pass"), "{out}");

    // swap two points with different measurement rows: still a bijection,
    // but no longer structure-preserving
    let broken = tmpfile("broken_map.json");
    let text = std::fs::read_to_string(&m)
        .unwrap()
        .replacen("\"y\",\n      \"y\"", "\"y\",\n      \"z\"", 1)
        .replacen("\"z\",\n      \"z\"", "\"z\",\n      \"y\"", 1);
    std::fs::write(&broken, text).unwrap();
    let (code, out, _) = run(&["map-verify", "--kind", "iso", &f, &f, broken.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    assert!(out.starts_with("map-verify: FAIL"), "{out}");

    let (code, _, err) = run(&["map-verify", "--kind", "nonsense", &f, &f, &m]);
    assert_eq!(code, 2);
    assert!(err.contains("nonsense"), "{err}");
}

#[test]
fn gallery_families_print_their_analytic_answers() {
    let cases: &[(&[&str], &[&str])] = &[
        (
            &["gallery", "ranked", "--counts", "0:2,1:3", "--probe", "0"],
            &["dim = 1", "mu_0 = inf"],
        ),
        (
            &["gallery", "growth", "--pow", "3/2", "--coeff", "2", "--probe", "0:3/2"],
            &["dim = (0, 3/2) with mu = 2", "probe (0, 3/2) = 2"],
        ),
        (
            &["gallery", "scale", "--x", "3:1/2", "--y", "3:1,0:1", "--probe", "3"],
            &["dim = 3", "rho_3 = 1/2"],
        ),
        (
            &["gallery", "leb", "--intervals", "1/2:5/2", "--probe", "2"],
            &["dim = 2", "mu_2 = 1/2"],
        ),
        (
            &["gallery", "tower", "--value", "0.25", "--probe", "1"],
            &["height = 0, mu = 1/3", "mu_1 = 0"],
        ),
        (
            &["gallery", "iterate", "--size", "4", "--map", "0:0,1:0,2:1,3:2"],
            &["dim 0 = 0", "dim 3 = 1"],
        ),
    ];
    for (args, needles) in cases {
        let (code, out, err) = run(args);
        assert_eq!(code, 0, "{args:?}: {err}");
        for needle in *needles {
            assert!(out.contains(needle), "{args:?}: missing {needle:?} in {out}");
        }
    }

    // a decreasing-map violation is a mathematical failure: exit 1
    let (code, _, err) = run(&["gallery", "iterate", "--size", "3", "--map", "0:0,1:2,2:0"]);
    assert_eq!(code, 2, "{err}"); // the map is rejected before any check runs
    assert!(err.contains("1"), "{err}");

    // a negative tower input is an input error
    let (code, _, _) = run(&["gallery", "tower", "--value", "-3"]);
    assert_eq!(code, 2);
}

#[test]
fn suite_shrinks_nothing_on_valid_modes_and_stays_deterministic() {
    let (c1, o1, _) = run(&["suite", "--seed", "7", "--count", "60", "--shrink"]);
    let (c2, o2, _) = run(&["suite", "--seed", "7", "--count", "60", "--shrink"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(o1, o2);
    assert!(o1.contains("60 structures from seed 7, 0 failure(s)"), "{o1}");
}
