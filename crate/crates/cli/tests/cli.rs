use std::sync::Once;

use extricat::report::{escalate_failures, from_json};
use extricat::{parse_scenario, run, CliError, Section};
use extricat_core::recollement::Item;
use extricat_core::{Status, Verdict, Witness};
use proptest::prelude::*;

static CACHE: Once = Once::new();

fn setup() {
    CACHE.call_once(|| {
        let dir = std::env::temp_dir().join(format!("extricat-cli-tests-{}", std::process::id()));
        std::env::set_var("EXTRICAT_CACHE_DIR", dir);
    });
}

fn sh(args: &[&str]) -> extricat::Output {
    setup();
    run(args.iter().copied())
}

const A2: &str = "\
[algebra]
field = 2
vertices = 1, 2
arrows = alpha: 1 -> 2

[category]
construction = modules
";

#[test]
fn parse_errors_carry_positions() {
    let cases = [
        ("", "empty"),
        ("[algebra]\nfield = 2\nbogus = 1\n", "line 3"),
        ("[nope]\n", "line 1"),
        ("[algebra\n", "line 1"),
        ("[algebra]\nfield = 2\n[algebra]\n", "line 3"),
    ];
    for (text, needle) in cases {
        let err = parse_scenario("t", text).unwrap_err();
        assert_eq!(err.exit_code(), 3);
        assert!(err.to_string().contains(needle), "{text:?}: {err}");
    }
    match parse_scenario("t", "[algebra]\nfield = 2\nbogus = 1\n") {
        Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 1)),
        other => panic!("{other:?}"),
    }
}

#[test]
fn scenario_files_run() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.scn");
    std::fs::write(&path, A2).unwrap();
    let p = path.to_str().unwrap();
    let out = sh(&["cotorsion", "enumerate", p, "--no-cache"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("2 cotorsion pairs"));
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(sh(&["frobnicate"]).code, 3);
    assert_eq!(sh(&["catalog", "no-such-scenario-file"]).code, 3);
    let out = sh(&["cotorsion", "check", "paper-abelian", "--T", "nonsense", "--F", "all"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.contains("nonsense"));
    assert_eq!(sh(&["restrict", "paper-abelian", "--U", "proj", "--V", "all", "--via", "k"]).code, 3);
}

#[test]
fn exit_codes_follow_status() {
    assert_eq!(sh(&["cotorsion", "check", "paper-abelian", "--side", "a", "--T", "proj", "--F", "all"]).code, 0);
    assert_eq!(sh(&["cotorsion", "check", "paper-abelian", "--side", "a", "--T", "all", "--F", "all"]).code, 1);
    assert_eq!(sh(&["closure", "paper-abelian", "--side", "a", "--objects", "S1,S2"]).code, 1);
    assert_eq!(sh(&["functor", "check", "paper-abelian", "--functor", "i^*", "--mode", "right"]).code, 0);
    assert_eq!(sh(&["functor", "check", "paper-abelian", "--functor", "i^*", "--mode", "exact"]).code, 1);
}

#[test]
fn json_reports_round_trip() {
    let out = sh(&["--json", "cotorsion", "enumerate", "paper-abelian", "--side", "a"]);
    assert_eq!(out.code, 0);
    let report = from_json(&out.stdout).unwrap();
    assert_eq!(report.status, Status::Holds);
    assert_eq!(extricat::report::to_json(&report), out.stdout);
    assert!(report.sections.iter().any(|s| matches!(s, Section::Table { .. })));
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["--json", "catalog", "paper-abelian"][..],
        &["--json", "recollement", "verify", "paper-extriangulated"],
        &["--json", "glue", "paper-abelian", "--T1", "proj", "--F1", "all", "--T2", "all", "--F2", "inj", "--conditions"],
        &["--json", "--seed", "7", "properties", "paper-extriangulated"],
    ] {
        let a = sh(args);
        let b = sh(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.code, b.code);
    }
}

#[test]
fn cache_is_reused_and_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a2.scn");
    // a private field size so the cache key is fresh
    std::fs::write(&path, A2.replace("field = 2", "field = 3")).unwrap();
    let p = path.to_str().unwrap();
    let first = sh(&["--json", "catalog", p]);
    let second = sh(&["--json", "catalog", p]);
    assert_eq!(first.stdout, second.stdout);
    assert!(second.stderr.contains("hit"), "{}", second.stderr);
    let verify = sh(&["catalog", p, "--verify-cache"]);
    assert_eq!(verify.code, 0, "{}", verify.stdout);
    let off = sh(&["--json", "--no-cache", "catalog", p]);
    let (a, b) = (from_json(&off.stdout).unwrap(), from_json(&first.stdout).unwrap());
    assert_eq!(a.sections, b.sections);
}

#[test]
fn theorem_backed_failures_escalate() {
    let mut items = vec![
        Item::new("x", "", Verdict::fails(Witness::new("broken"))),
        Item::new("y", "", Verdict::holds()),
    ];
    escalate_failures(&mut items);
    assert_eq!(items[0].verdict.status, Status::Inconsistent);
    assert_eq!(items[1].verdict.status, Status::Holds);
    let mut r = extricat::Report::new("s", "h", vec![], Default::default());
    r.absorb(&items[0].verdict);
    assert_eq!(r.exit_code(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    /// Adding blank lines and comments never changes the parsed scenario.
    #[test]
    fn comments_and_blank_lines_are_ignored(pad in prop::collection::vec(0usize..3, 8)) {
        let mut text = String::new();
        for (i, line) in A2.lines().enumerate() {
            for _ in 0..pad[i % pad.len()] {
                text.push_str("   # filler\n\n");
            }
            text.push_str(line);
            text.push('\n');
        }
        let a = parse_scenario("t", A2).unwrap();
        let b = parse_scenario("t", &text).unwrap();
        prop_assert_eq!(a.hash(), b.hash());
    }

    /// Random garbage either parses or reports a position inside the text.
    #[test]
    fn garbage_reports_positions(text in "[\\[\\]a-z=#0-9 \\n]{0,60}") {
        if let Err(CliError::Parse { line, column, .. }) = parse_scenario("t", &text) {
            prop_assert!(line >= 1 && line <= text.lines().count().max(1));
            prop_assert!(column >= 1);
        }
    }
}
