use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const SINGLE_NEG: &str = r#"{
    "es": {"events": ["e"]},
    "pol": {"e": "-"},
    "var": {"e": "x"},
    "vars": [{"name": "x", "sort": "s"}],
    "winning": null,
    "algebra": "ab.json"
}"#;

const AB: &str = r#"{"sorts": ["s"], "carrier": [{"name": "a", "sort": "s"}, {"name": "b", "sort": "s"}]}"#;

const CHAIN: &str = r#"{
    "es": {"events": ["e", "f"], "covering": [["e", "f"]]},
    "pol": {"e": "-", "f": "+"},
    "var": {"e": "x", "f": "y"},
    "vars": [{"name": "x", "sort": "s"}, {"name": "y", "sort": "s"}],
    "winning": {"op": "eq", "left": {"var": "x"}, "right": {"var": "y"}},
    "algebra": "ab.json"
}"#;

const SET1: &str = r#"{"sorts": ["s"], "carrier": [{"name": "0", "sort": "s"}]}"#;
const SET2: &str = r#"{"sorts": ["s"], "carrier": [{"name": "0", "sort": "s"}, {"name": "1", "sort": "s"}]}"#;

struct Fixture {
    dir: TempDir,
}

impl Fixture {
    fn new() -> Self {
        let f = Self { dir: TempDir::new().unwrap() };
        f.write("ab.json", AB);
        f.write("single.json", SINGLE_NEG);
        f.write("chain.json", CHAIN);
        f.write("set1.json", SET1);
        f.write("set2.json", SET2);
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> PathBuf {
        let p = self.path(name);
        std::fs::write(&p, text).unwrap();
        p
    }

    fn run(&self, args: &[&str]) -> Output {
        Command::new(env!("CARGO_BIN_EXE_esgames")).current_dir(self.dir.path()).args(args).output().unwrap()
    }

    /// Runs, expects success, and stores stdout under `save`.
    fn ok(&self, args: &[&str], save: &str) -> Value {
        let out = self.run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        let text = String::from_utf8(out.stdout).unwrap();
        self.write(save, &text);
        serde_json::from_str(&text).unwrap()
    }
}

fn code(out: &Output) -> Option<i32> {
    out.status.code()
}

#[test]
fn validate_single_negative_game() {
    let f = Fixture::new();
    let out = f.run(&["validate", "game", "single.json"]);
    assert_eq!(code(&out), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["violations"], Value::Array(vec![]));
}

#[test]
fn expand_two_values() {
    let f = Fixture::new();
    let v = f.ok(&["expand", "single.json"], "x.json");
    assert_eq!(v["es"]["events"].as_array().unwrap().len(), 2);
    assert_eq!(v["inst"]["e@[e=a]"], "a");
    assert_eq!(code(&f.run(&["validate", "game", "x.json"])), Some(0));
}

#[test]
fn malformed_input_exits_two() {
    let f = Fixture::new();
    f.write("bad.json", "{\"events\": [\"e\",\n  ]}");
    let out = f.run(&["validate", "es", "bad.json"]);
    assert_eq!(code(&out), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    f.write("unknown.json", r#"{"events": ["e"], "covering": [["e", "g"]]}"#);
    assert_eq!(code(&f.run(&["validate", "es", "unknown.json"])), Some(2));
}

#[test]
fn violations_exit_one() {
    let f = Fixture::new();
    f.write("cycle.json", r#"{"events": ["e", "f"], "covering": [["e", "f"], ["f", "e"]]}"#);
    let out = f.run(&["validate", "es", "cycle.json"]);
    assert_eq!(code(&out), Some(1));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn configs_are_listed() {
    let f = Fixture::new();
    let v = f.ok(&["configs", "chain.json"], "c.json");
    assert_eq!(v["configurations"], serde_json::json!([[], ["e"], ["e", "f"]]));
}

#[test]
fn copycats_round_trip_and_compose() {
    let f = Fixture::new();
    f.ok(&["copycat", "chain.json"], "cc.json");
    assert_eq!(code(&f.run(&["validate", "strategy", "cc.json"])), Some(0));
    let composed = f.ok(&["compose", "cc.json", "cc.json"], "cc2.json");
    assert_eq!(composed["s_es"]["events"].as_array().unwrap().len(), 4);

    let acc = f.ok(&["a-copycat", "chain.json"], "acc.json");
    assert!(!acc["inst"].as_object().unwrap().is_empty());
    assert_eq!(code(&f.run(&["validate", "strategy", "acc.json"])), Some(0));
    f.ok(&["a-compose", "acc.json", "acc.json"], "acc2.json");
    assert_eq!(code(&f.run(&["validate", "strategy", "acc2.json"])), Some(0));
}

#[test]
fn theta_then_reduc() {
    let f = Fixture::new();
    f.ok(&["a-copycat", "single.json"], "acc.json");
    f.ok(&["theta", "acc.json"], "th.json");
    assert_eq!(code(&f.run(&["validate", "strategy", "th.json"])), Some(0));
    // copycat's game is E⊥ ⅋ E; rebuild it for reduc from the A-strategy document
    let acc: Value = serde_json::from_str(&std::fs::read_to_string(f.path("acc.json")).unwrap()).unwrap();
    f.write("par.json", &acc["game"].to_string());
    f.ok(&["reduc", "th.json", "--game", "par.json"], "back.json");
    let a = std::fs::read_to_string(f.path("acc.json")).unwrap();
    let b = std::fs::read_to_string(f.path("back.json")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn winning_report() {
    let f = Fixture::new();
    f.ok(&["a-copycat", "chain.json"], "acc.json");
    let v = f.ok(&["winning", "acc.json"], "w.json");
    assert_eq!(v["winning"], true);
}

#[test]
fn gen_and_oracle() {
    let f = Fixture::new();
    let g = f.ok(&["gen", "ef", "--a", "set1.json", "--b", "set2.json", "--k", "2", "--n", "1"], "g.json");
    assert_eq!(g["es"]["events"].as_array().unwrap().len(), 8);
    assert_eq!(code(&f.run(&["validate", "game", "g.json"])), Some(0));
    let one = f.ok(&["oracle", "ef", "--a", "set1.json", "--b", "set2.json", "--k", "2", "--n", "1"], "o1.json");
    assert_eq!(one["duplicator_wins"], true);
    let two = f.ok(&["oracle", "ef", "--a", "set1.json", "--b", "set2.json", "--k", "2", "--n", "2"], "o2.json");
    assert_eq!(two["duplicator_wins"], false);
}

#[test]
fn output_is_deterministic() {
    let f = Fixture::new();
    let first = f.run(&["gen", "hom", "--a", "set2.json", "--b", "set1.json", "--k", "2", "--n", "2"]);
    let second = f.run(&["gen", "hom", "--a", "set2.json", "--b", "set1.json", "--k", "2", "--n", "2"]);
    assert_eq!(first.stdout, second.stdout);
    let out = f.path("out.json");
    f.run(&["--out", out.to_str().unwrap(), "gen", "hom", "--a", "set2.json", "--b", "set1.json", "--k", "2", "--n", "2"]);
    assert_eq!(std::fs::read(out).unwrap(), first.stdout);
}

#[test]
fn lift_along_the_game() {
    let f = Fixture::new();
    f.ok(&["copycat", "chain.json"], "cc.json");
    let v = f.ok(&["lift", "extend", "cc.json", "--x", "", "--y", "2.e"], "l.json");
    assert_eq!(v["configuration"], serde_json::json!(["2.e"]));
    let v = f.ok(&["lift", "restrict", "cc.json", "--x", "2.e,1.e", "--y", "2.e"], "r.json");
    assert_eq!(v["configuration"], serde_json::json!(["2.e"]));
    assert_eq!(code(&f.run(&["lift", "extend", "cc.json", "--y", "1.e"])), Some(2));
}

#[test]
fn neutral_and_lambda() {
    let f = Fixture::new();
    f.write(
        "neutral.json",
        r#"{
        "es": {"events": ["n", "e"]},
        "pol": {"n": "0", "e": "-"},
        "var": {"n": "z", "e": "x"},
        "vars": [{"name": "x", "sort": "s"}, {"name": "z", "sort": "s"}],
        "algebra": "ab.json"
    }"#,
    );
    assert_eq!(code(&f.run(&["validate", "neutral", "neutral.json"])), Some(0));
    f.write("levels.json", r#"{"levels": ["lo", "hi"], "leq": [["lo", "hi"]], "assign": {"e": "lo", "f": "hi"}}"#);
    assert_eq!(code(&f.run(&["validate", "lambda", "chain.json", "--levels", "levels.json"])), Some(0));
    f.write("down.json", r#"{"levels": ["lo", "hi"], "leq": [["lo", "hi"]], "assign": {"e": "hi", "f": "lo"}}"#);
    assert_eq!(code(&f.run(&["validate", "lambda", "chain.json", "--levels", "down.json"])), Some(1));
}

fn lines(out: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&out.stdout).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn game_conjectures_small_suite() {
    let f = Fixture::new();
    let out = f.run(&["conjectures", "games", "--suite", "small"]);
    assert_eq!(code(&out), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let records = lines(&out);
    assert_eq!(records.len(), 2960);
    for (i, r) in records.iter().enumerate() {
        assert_eq!(r["instance"], i);
        assert_eq!(r["agree"], true, "{r}");
    }
}

#[test]
fn game_conjectures_from_suite_file() {
    let f = Fixture::new();
    f.write(
        "suite.json",
        r#"{"instances": [
            {"kind": "ef", "a": "set1.json", "b": "set2.json", "k": 2, "n": 1},
            {"kind": "ef", "a": "set1.json", "b": "set2.json", "k": 2, "n": 2}
        ]}"#,
    );
    let out = f.run(&["conjectures", "games", "--suite", "suite.json"]);
    assert_eq!(code(&out), Some(0));
    let records = lines(&out);
    assert_eq!(records[0]["oracle"], true);
    assert_eq!(records[0]["search"], "found");
    assert_eq!(records[1]["search"], "exhausted");
}

#[test]
fn stability_and_induced_harnesses_complete() {
    let f = Fixture::new();
    let out = f.run(&["conjectures", "stability", "--seed", "3", "--max-events", "2"]);
    assert_eq!(code(&out), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let records = lines(&out);
    assert_eq!(records.len(), 30);
    for r in &records {
        assert!(["preserved", "violated", "skipped"].contains(&r["verdict"].as_str().unwrap()));
    }
    let out = f.run(&["conjectures", "induced", "--seed", "3", "--max-events", "2"]);
    assert_eq!(code(&out), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(lines(&out).len(), 30);
}
