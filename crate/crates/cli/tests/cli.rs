use std::path::Path;

use segal_lab::cofcat::fixtures;
use segal_lab_cli::format::{self, CategoryFile};
use segal_lab_cli::{run, Outcome};

fn cli(args: &[&str]) -> Outcome {
    run(std::iter::once("segal-lab").chain(args.iter().copied()))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn fixture_text(name: &str) -> String {
    let o = cli(&["fixture", name]);
    assert_eq!(o.code, 0, "{}", o.stderr);
    o.stdout
}

#[test]
fn validate_examples() {
    let o = cli(&["validate", "fixture:z"]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.ends_with("result: pass\n"));

    let dir = tempfile::tempdir().unwrap();
    let strict = fixture_text("ps2").replace("MODE bounded 2", "MODE strict");
    let f = write(dir.path(), "ps2-strict.cat", &strict);
    let o = cli(&["validate", &f]);
    assert_eq!(o.code, 1);
    assert!(o
        .stdout
        .contains("[FAIL] pushout escapes category: `1->2:1` along `1->2:1`"));

    let bad = fixture_text("z").replace("ZERO 0", "ZERO 7");
    let f = write(dir.path(), "bad.cat", &bad);
    let o = cli(&["validate", &f]);
    assert_eq!(o.code, 2);
    assert!(
        o.stderr.contains("line 7: unknown object `7`"),
        "{}",
        o.stderr
    );
}

#[test]
fn json_and_text_forms_are_interchangeable() {
    let dir = tempfile::tempdir().unwrap();
    let json = cli(&["fixture", "ps2", "--json"]).stdout;
    let f = write(dir.path(), "ps2.json", &json);
    let g = write(dir.path(), "ps2.cat", &fixture_text("ps2"));
    let a = cli(&["check", &f, "--max-level", "3"]);
    let b = cli(&["check", &g, "--max-level", "3"]);
    assert_eq!(a.code, 0);
    // same verdicts; only the input line differs
    let strip = |s: &str| -> Vec<String> {
        s.lines()
            .filter(|l| !l.starts_with("input:"))
            .map(String::from)
            .collect()
    };
    assert_eq!(strip(&a.stdout), strip(&b.stdout));
}

#[test]
fn fibration_mode_reads_the_opposite() {
    let (s, mode) = fixtures::by_name("ps2").unwrap();
    let op = s.base().opposite();
    let file =
        CategoryFile::from_structure(&op, s.zero(), |m| s.is_cofibration(m), true, None, mode);
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ps2op.cat", &file.to_text().unwrap());
    assert!(file.to_text().unwrap().contains("\nFIBRATIONS\n"));
    let o = cli(&["validate", &f]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("== fibrations =="));
    let o = cli(&["check", &f, "--max-level", "4"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("[info] 1 3 6 10 15"));
}

#[test]
fn check_examples() {
    for mode in [
        "left",
        "right",
        "all-subdivisions",
        "upper",
        "lower",
        "reduced",
    ] {
        let o = cli(&["check", "fixture:z", "--mode", mode, "--max-level", "4"]);
        assert_eq!(o.code, 0, "{mode}: {}", o.stdout);
    }
    let o = cli(&["check", "fixture:ps2", "--mode", "left", "--max-level", "4"]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.matches("[pass] n=").count(), 9);

    let o = cli(&[
        "check",
        "fixture:ps3",
        "--mode",
        "all-subdivisions",
        "--max-level",
        "4",
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(o.stdout.matches("[pass] P_").count(), 1 + 3 + 11);
    assert!(!o.stdout.contains("FAIL"));

    for v in ["groupoid", "category", "w-category"] {
        let o = cli(&["check", "fixture:ps2", "--variant", v, "--max-level", "3"]);
        assert_eq!(o.code, 0, "{v}: {}", o.stdout);
        assert_eq!(o.stdout.matches("[pass] n=").count(), 3);
    }
}

#[test]
fn check_usage_errors() {
    let o = cli(&[
        "check",
        "fixture:ps2",
        "--mode",
        "upper",
        "--variant",
        "groupoid",
    ]);
    assert_eq!(o.code, 2);
    let o = cli(&["check", "fixture:ps2", "--mode", "sideways"]);
    assert_eq!(o.code, 2);
    let o = cli(&["check", "fixture:ps2", "--max-level", "1"]);
    assert_eq!(o.code, 2);
    let o = cli(&["check", "fixture:nope"]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("ps2x2"));
    let o = cli(&["check", "/no/such/file.cat"]);
    assert_eq!(o.code, 2);
    // overflowing the level budget is named, not a crash
    let o = cli(&[
        "check",
        "fixture:ps2",
        "--variant",
        "category",
        "--max-level",
        "3",
        "--budget",
        "5",
    ]);
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("budget"), "{}", o.stderr);
}

#[test]
fn kernel_free_is_two_segal_but_fails_sufficiency() {
    let o = cli(&["sufficiency", "fixture:kernel-free"]);
    assert_eq!(o.code, 1);
    assert!(o
        .stdout
        .contains("[FAIL] no intermediate object for a=a q=q b=0:0Y"));
    let o = cli(&[
        "check",
        "fixture:kernel-free",
        "--mode",
        "all-subdivisions",
        "--max-level",
        "4",
    ]);
    assert_eq!(o.code, 0);
}

#[test]
fn sufficiency_examples() {
    assert_eq!(cli(&["sufficiency", "fixture:z"]).code, 0);
    let o = cli(&["sufficiency", "fixture:ps3"]);
    assert_eq!(o.code, 0);
    assert!(o.stdout.contains("left square: pushout"));
    assert!(o.stdout.contains("[pass] a="));
}

#[test]
fn closure_examples() {
    let dir = tempfile::tempdir().unwrap();
    let ps3 = write(dir.path(), "ps3.cat", &fixture_text("ps3"));

    let out = dir.path().join("zero.cat");
    let o = cli(&["closure", &ps3, "--emit", out.to_str().unwrap()]);
    assert_eq!(o.code, 0);
    let zero =
        format::resolve(format::parse(&std::fs::read_to_string(&out).unwrap()).unwrap()).unwrap();
    assert_eq!(zero.category.object_count(), 1);
    assert_eq!(zero.file.morphisms.len(), 1);

    // seeding with everything echoes the input
    let file = format::parse(&fixture_text("ps3")).unwrap();
    let objs: Vec<&str> = file.objects.iter().map(|o| o.name.as_str()).collect();
    let mors: Vec<&str> = file.morphisms.iter().map(|m| m.name.as_str()).collect();
    let (objs, mors) = (objs.join(","), mors.join(","));
    let out = dir.path().join("all.cat");
    let o = cli(&[
        "closure",
        &ps3,
        "--seed-objects",
        &objs,
        "--seed-morphisms",
        &mors,
        "--emit",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), fixture_text("ps3"));

    // partial seeds of PS(3): pushing 1 >-> 2 out along itself reaches
    // size 3, while the swap of 2 generates nothing new
    let o = cli(&["closure", &ps3, "--seed-morphisms", "1->2:1"]);
    assert_eq!(o.code, 0);
    assert!(o
        .stdout
        .contains("[info] 4 objects, 144 morphisms after 3 rounds"));
    let o = cli(&["closure", &ps3, "--seed-morphisms", "2->2:21"]);
    assert!(o
        .stdout
        .contains("[info] 2 objects, 6 morphisms after 2 rounds"));
    assert!(o
        .stdout
        .contains("[info] cofibrations: 0->0:-, 0->2:-, 2->2:12, 2->2:21\n"));

    let o = cli(&["closure", &ps3, "--seed-objects", "5"]);
    assert_eq!(o.code, 2);
}

#[test]
fn polygon_listing() {
    let count = |o: &Outcome, what: &str| -> usize {
        let s = o.stdout.split(what).nth(1).unwrap();
        let line = s.lines().find(|l| l.contains("count")).unwrap();
        line.rsplit(' ').next().unwrap().parse().unwrap()
    };
    let o = cli(&["polygons", "--n", "3", "--triangulations-only"]);
    assert_eq!(count(&o, "== triangulations"), 2);
    assert!(!o.stdout.contains("subdivisions"));
    let o = cli(&["polygons", "--n", "2"]);
    assert_eq!(count(&o, "== triangulations"), 1);
    let o = cli(&["polygons", "--n", "4"]);
    assert_eq!(count(&o, "== triangulations"), 5);
    assert_eq!(count(&o, "== polygonal subdivisions"), 11);
    assert_eq!(cli(&["polygons", "--n", "1"]).code, 2);
}

#[test]
fn search_examples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "fixtures.json",
        r#"{"fixtures": ["z", "ps2", "ps3", "kernel-free"], "max_level": 4}"#,
    );
    let o = cli(&["search", "--config", &cfg]);
    assert_eq!(o.code, 0, "{}", o.stdout);
    assert!(o.stdout.contains("[pass] none found"));

    let cfg = write(
        dir.path(),
        "random.json",
        r#"{"categories": 4, "ambient": "ps2x2", "max_level": 4}"#,
    );
    let a = cli(&["search", "--config", &cfg, "--seed", "11"]);
    let b = cli(&["search", "--config", &cfg, "--seed", "11"]);
    assert_eq!(a, b);
    assert!(a.stdout.contains("seed: 11"));

    let empty = write(dir.path(), "empty.json", "{}");
    assert_eq!(cli(&["search", "--config", &empty]).code, 2);
    let broken = write(dir.path(), "broken.json", "{\"categories\": }");
    assert_eq!(cli(&["search", "--config", &broken]).code, 2);
}

#[test]
fn machine_report_is_written_and_covers_the_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = cli(&[
        "check",
        "fixture:ps2",
        "--mode",
        "lower",
        "--max-level",
        "4",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.code, 0);
    let machine = std::fs::read_to_string(&out).unwrap();
    assert_eq!(Some(&machine), o.machine.as_ref());
    let v: serde_json::Value = serde_json::from_str(&machine).unwrap();
    assert_eq!(v["passed"], true);
    // every verdict line of the human form appears in the machine form
    for l in o.stdout.lines().filter(|l| l.starts_with("  [")) {
        let text = &l[9..];
        assert!(
            machine.contains(&serde_json::to_string(text).unwrap()),
            "{text}"
        );
    }
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(cli(&["--help"]).code, 0);
    assert_eq!(cli(&["--version"]).code, 0);
    assert_eq!(cli(&[]).code, 2);
}
