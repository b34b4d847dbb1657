//! Binary-level contract tests: canonical dumps, byte-stable outputs,
//! exit codes, and error diagnostics.

use std::path::PathBuf;
use std::process::{Command, Output};

use reltilt_core::io as ser;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_reltilt"));
    c.env_remove(ser::PRIME_ENV_VAR);
    c
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("reltilt-test-{}-{name}", std::process::id()))
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn dump_reproduces_canonical_fixtures_byte_for_byte() {
    for name in ["a1.toml", "a2.toml", "a3.toml", "a4rad3.toml"] {
        let out = bin()
            .args(["algebra", "dump"])
            .arg(fixture(name))
            .output()
            .unwrap();
        assert!(out.status.success());
        let original = std::fs::read_to_string(fixture(name)).unwrap();
        assert_eq!(stdout_of(&out), original, "dump of {name} is not canonical");
    }
}

#[test]
fn json_dump_round_trips_through_the_parser() {
    let out = bin()
        .args(["algebra", "dump", "--json"])
        .arg(fixture("a4rad3.toml"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let json_path = tmp("a4rad3.json");
    std::fs::write(&json_path, out.stdout).unwrap();
    let redump = bin()
        .args(["algebra", "dump", "--json"])
        .arg(&json_path)
        .output()
        .unwrap();
    assert!(redump.status.success());
    let first = std::fs::read(&json_path).unwrap();
    assert_eq!(redump.stdout, first);
}

#[test]
fn exchange_graph_dot_is_byte_identical_across_runs() {
    let p1 = tmp("a2-first.dot");
    let p2 = tmp("a2-second.dot");
    for p in [&p1, &p2] {
        let out = bin()
            .args(["exchange-graph", "--algebra"])
            .arg(fixture("a2.toml"))
            .arg("--dot")
            .arg(p)
            .output()
            .unwrap();
        assert!(out.status.success());
        assert!(stdout_of(&out).contains("exchange graph: 5 vertices, 5 edges (complete)"));
    }
    let d1 = std::fs::read_to_string(&p1).unwrap();
    let d2 = std::fs::read_to_string(&p2).unwrap();
    assert_eq!(d1, d2);
    assert!(d1.starts_with("digraph exchange {"));
    assert_eq!(d1.matches("[label=").count(), 5);
    assert_eq!(d1.matches(" -> ").count(), 5);
    assert_eq!(d1.matches("taillabel=\"Bongartz-side\"").count(), 5);
    assert_eq!(d1.matches("headlabel=\"co-Bongartz-side\"").count(), 5);
}

#[test]
fn one_vertex_graph_has_two_nodes_and_one_edge() {
    let out = bin()
        .args(["exchange-graph", "--algebra"])
        .arg(fixture("a1.toml"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("exchange graph: 2 vertices, 1 edges (complete)"));
}

#[test]
fn enumeration_and_verify_outputs_are_deterministic() {
    let run = |args: &[&str]| -> Vec<u8> {
        let mut c = bin();
        for a in args {
            if *a == "@a3" {
                c.arg(fixture("a3.toml"));
            } else {
                c.arg(a);
            }
        }
        let out = c.output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    for args in [
        &["sttilt", "enumerate", "--algebra", "@a3"][..],
        &["torsion", "--algebra", "@a3"][..],
        &["verify", "main1", "--algebra", "@a3", "--exhaustive"][..],
    ] {
        assert_eq!(run(args), run(args), "{args:?} output varies across runs");
    }
}

#[test]
fn verify_writes_the_same_report_to_stdout_and_file() {
    let path = tmp("report.json");
    let out = bin()
        .args(["verify", "thm1", "--algebra"])
        .arg(fixture("a2.toml"))
        .arg("--json")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let file = std::fs::read(&path).unwrap();
    assert_eq!(out.stdout, file);
    let v: serde_json::Value = serde_json::from_slice(&file).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["alias"], "rigidity-agreement");
}

#[test]
fn unknown_theorem_id_exits_two_and_lists_the_choices() {
    let out = bin()
        .args(["verify", "nonsense", "--algebra"])
        .arg(fixture("a2.toml"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("unknown theorem id"));
    for alias in [
        "exactly-two-completions",
        "mutation-pair",
        "rigidity-agreement",
        "fac-identities",
        "torsion-bijection",
        "cotorsion-bijections",
        "left-completion",
        "order-sandwich",
        "completion-intersection",
        "completion-invariants",
    ] {
        assert!(err.contains(alias), "missing alias {alias} in: {err}");
    }
}

#[test]
fn input_errors_exit_two_with_diagnostics() {
    // Missing file.
    let out = bin()
        .args(["algebra", "check", "/nonexistent/nowhere.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("cannot read"));

    // Garbage content.
    let garbage = tmp("garbage.toml");
    std::fs::write(&garbage, "this is not an algebra").unwrap();
    let out = bin().args(["algebra", "check"]).arg(&garbage).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Composite prime.
    let composite = tmp("composite.toml");
    std::fs::write(
        &composite,
        "vertices = [1]\nprime = 10\narrows = []\nrelations = []\n",
    )
    .unwrap();
    let out = bin().args(["algebra", "check"]).arg(&composite).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not prime"));

    // Dimension at or above the prime.
    let cramped = tmp("cramped.toml");
    std::fs::write(
        &cramped,
        "vertices = [1, 2, 3, 4]\nprime = 7\narrows = [\n    { id = 1, from = 1, to = 2 },\n    { id = 2, from = 2, to = 3 },\n    { id = 3, from = 3, to = 4 },\n]\nrelations = []\n",
    )
    .unwrap();
    let out = bin().args(["algebra", "check"]).arg(&cramped).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not below the field prime"));
}

#[test]
fn non_confluent_relations_exit_two_with_a_confluence_diagnostic() {
    let path = tmp("nonconfluent.toml");
    std::fs::write(
        &path,
        concat!(
            "vertices = [1, 2, 3, 4, 5]\n",
            "prime = 32003\n",
            "arrows = [\n",
            "    { id = 1, from = 1, to = 2 },\n",
            "    { id = 2, from = 1, to = 3 },\n",
            "    { id = 3, from = 2, to = 4 },\n",
            "    { id = 4, from = 3, to = 4 },\n",
            "    { id = 5, from = 4, to = 5 },\n",
            "]\n",
            "relations = [\n",
            "    [{ coeff = 1, path = [2, 4] }, { coeff = -1, path = [1, 3] }],\n",
            "    [{ coeff = 1, path = [4, 5] }],\n",
            "]\n",
        ),
    )
    .unwrap();
    let out = bin().args(["algebra", "check"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not confluent"));
}

#[test]
fn prime_environment_variable_is_honored_and_validated() {
    let bare = tmp("bare.toml");
    std::fs::write(&bare, "vertices = [1]\narrows = []\nrelations = []\n").unwrap();

    let out = bin()
        .env(ser::PRIME_ENV_VAR, "101")
        .args(["algebra", "dump"])
        .arg(&bare)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("prime = 101"));

    // A prime in the file wins over the environment.
    let out = bin()
        .env(ser::PRIME_ENV_VAR, "101")
        .args(["algebra", "dump"])
        .arg(fixture("a2.toml"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout_of(&out).contains("prime = 32003"));

    let out = bin()
        .env(ser::PRIME_ENV_VAR, "10")
        .args(["algebra", "check"])
        .arg(&bare)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not prime"));
}

#[test]
fn completions_hypothesis_failures_exit_two() {
    // A complete collection admits no further completion.
    let full = tmp("full.json");
    std::fs::write(
        &full,
        "[{\"p1\": {}, \"p0\": {\"1\": 1}}, {\"p1\": {}, \"p0\": {\"2\": 1}}]",
    )
    .unwrap();
    let out = bin()
        .args(["completions", "--algebra"])
        .arg(fixture("a2.toml"))
        .arg("--input")
        .arg(&full)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("nothing to complete"));

    // A non-rigid collection is refused.
    let nonrigid = tmp("nonrigid.json");
    std::fs::write(
        &nonrigid,
        "[{\"p1\": {}, \"p0\": {\"1\": 1}}, {\"p1\": {\"1\": 1}, \"p0\": {}}]",
    )
    .unwrap();
    let out = bin()
        .args(["completions", "--algebra"])
        .arg(fixture("a2.toml"))
        .arg("--input")
        .arg(&nonrigid)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("not rigid"));
}

#[test]
fn mutate_rejects_out_of_range_members() {
    let full = tmp("full-range.json");
    std::fs::write(
        &full,
        "[{\"p1\": {}, \"p0\": {\"1\": 1}}, {\"p1\": {}, \"p0\": {\"2\": 1}}]",
    )
    .unwrap();
    let out = bin()
        .args(["mutate", "--algebra"])
        .arg(fixture("a2.toml"))
        .arg("--input")
        .arg(&full)
        .args(["--at", "7"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("out of range"));
}

#[test]
fn mutation_round_trips_to_the_starting_collection() {
    let full = tmp("full-roundtrip.json");
    std::fs::write(
        &full,
        "[{\"p1\": {}, \"p0\": {\"1\": 1}}, {\"p1\": {}, \"p0\": {\"2\": 1}}]",
    )
    .unwrap();
    let out = bin()
        .args(["mutate", "--algebra"])
        .arg(fixture("a2.toml"))
        .arg("--input")
        .arg(&full)
        .args(["--at", "0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("result (co-Bongartz-side):") || text.contains("result (Bongartz-side):"));
}

#[test]
fn polygon_cap_refusals_exit_three() {
    let out = bin()
        .args(["polygon", "--sides", "7", "--sweep"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr_of(&out).contains("capped"));

    let out = bin().args(["polygon", "--sides", "5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn polygon_realization_maps_completions_back_to_arcs() {
    let out = bin()
        .args([
            "polygon", "--sides", "5", "--rigid", "0-2,0-3", "--x", "1-3",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert!(text.contains("tiling: 0-2,0-3"));
    assert!(text.contains("co-Bongartz-side completion: arcs 1-3,1-4"));
    assert!(text.contains("Bongartz-side completion: arcs 0-3,1-3"));
}

#[test]
fn usage_errors_from_the_argument_parser_exit_two() {
    let out = bin().args(["no-such-subcommand"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin().args(["atlas"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}
