use std::path::Path;
use std::process::{Command, Output};

fn run(store: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixedsdp")).args(args).env("MIXEDSDP_STORE", store).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// The integer after `<=` on the summary line.
fn bound_value(o: &Output) -> u64 {
    let s = stdout(o);
    let rest = s.split("<= ").nth(1).unwrap_or_else(|| panic!("no bound in {s:?}"));
    rest.split_whitespace().next().unwrap().parse().unwrap()
}

fn table_line(text: &str, n2: usize, n3: usize, d: usize) -> Vec<&str> {
    let head = [n2, n3, d].map(|x| x.to_string());
    text.lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .find(|f| f.len() > 3 && f[..3] == head)
        .unwrap_or_else(|| panic!("row ({n2},{n3},{d}) missing in\n{text}"))
}

#[test]
fn bound_prints_certified_values_and_stores_them() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.jsonl");
    let a = run(&store, &["bound", "1", "1", "1"]);
    assert!(a.status.success());
    assert_eq!(bound_value(&a), 6);
    let b = run(&store, &["bound", "2", "5", "3"]);
    assert_eq!(bound_value(&b), 65);
    let c = run(&store, &["bound", "2", "5", "3", "--k", "2"]);
    assert!(bound_value(&c) >= 65);
    let lines = std::fs::read_to_string(&store).unwrap();
    assert_eq!(lines.lines().count(), 3);
    let last: serde_json::Value = serde_json::from_str(lines.lines().last().unwrap()).unwrap();
    assert_eq!(last["spec"]["k"], 2);
    assert_eq!(last["certifiedBound"], bound_value(&c));
}

#[test]
fn json_output_matches_the_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.jsonl");
    let o = run(&store, &["bound", "2", "2", "3", "--json"]);
    let printed: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let stored: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&store).unwrap().trim()).unwrap();
    assert_eq!(printed, stored);
}

#[test]
fn emit_only_writes_sdpa_without_solving() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.jsonl");
    let file = dir.path().join("p.dat-s");
    let o = run(&store, &["bound", "2", "2", "2", "--emit-only", file.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(!store.exists());
    let text = std::fs::read_to_string(&file).unwrap();
    mixedsdp::sdpa::parse_sdpa(&text).unwrap();
    let e = run(&store, &["emit", "2", "2", "2", "-o", dir.path().join("q.dat-s").to_str().unwrap(), "--json"]);
    assert!(e.status.success());
    assert_eq!(std::fs::read_to_string(dir.path().join("q.dat-s")).unwrap(), text);
    assert!(dir.path().join("q.json").exists());
}

#[test]
fn oracle_values() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s");
    assert_eq!(stdout(&run(&store, &["oracle", "1", "1", "2"])).trim(), "2");
    assert_eq!(stdout(&run(&store, &["oracle", "1", "1", "1"])).trim(), "6");
    let code = stdout(&run(&store, &["oracle", "2", "2", "3", "--show-code"]));
    let mut lines = code.lines();
    let n: usize = lines.next().unwrap().parse().unwrap();
    assert_eq!(n, mixedsdp::exact_n(&mixedsdp::ProblemSpec::k3(2, 2, 3).unwrap()).unwrap());
    assert_eq!(lines.count(), n);
    let too_big = run(&store, &["oracle", "9", "9", "3"]);
    assert_eq!(too_big.status.code(), Some(2));
}

#[test]
fn verify_small_spaces() {
    let dir = tempfile::tempdir().unwrap();
    for (n2, n3) in [("1", "1"), ("2", "1"), ("1", "2")] {
        let o = run(&dir.path().join("s"), &["verify", n2, n3]);
        assert!(o.status.success(), "{}", stdout(&o));
        assert_eq!(stdout(&o).lines().last(), Some("pass"));
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("s");
    assert_eq!(run(&store, &["bound", "0", "1", "1"]).status.code(), Some(2));
    assert_eq!(run(&store, &["bound", "1", "1", "3"]).status.code(), Some(2));
    assert_eq!(run(&store, &["bound", "1", "1", "1", "--k", "4"]).status.code(), Some(2));
    assert_eq!(run(&store, &["bound", "1", "1", "1", "--tol", "0"]).status.code(), Some(2));
    assert_eq!(run(&store, &["bound", "x"]).status.code(), Some(2));
    // Asking for more accuracy than double precision allows is a solver failure.
    assert_eq!(run(&store, &["bound", "2", "5", "3", "--tol", "1e-14"]).status.code(), Some(3));
    assert!(!store.exists());
}

#[test]
fn table_slice_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.jsonl");
    let o = run(&store, &["table", "--d", "3", "--max-length", "8"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(table_line(&text, 2, 5, 3)[4..6], ["65", "65"]);
    assert_eq!(table_line(&text, 2, 5, 3).last(), Some(&"match"));
    assert_eq!(table_line(&text, 3, 5, 3)[4..6], ["125", "125"]);
    assert_eq!(table_line(&text, 3, 5, 3).last(), Some(&"match"));
    assert_eq!(table_line(&text, 5, 3, 3)[6], "60");
    assert!(!text.contains("MISMATCH"));
    let stored = std::fs::read_to_string(&store).unwrap().lines().count();
    let replay = run(&store, &["table", "--d", "3", "--max-length", "8", "--replay"]);
    assert_eq!(stdout(&replay), text);
    assert_eq!(std::fs::read_to_string(&store).unwrap().lines().count(), stored);
}

#[test]
fn derived_table() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&run(&dir.path().join("s"), &["table", "derived"]));
    assert!(text.contains("(2,12,8) <= 134"));
    assert!(text.contains("(5,3,3) <= 60"));
}

#[test]
fn bound_from_external_output() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("store.jsonl");
    let out = dir.path().join("run.out");
    std::fs::write(&out, "Primal objective value: -6.5327958e+01\nDual objective value: -6.5327957e+01\n").unwrap();
    let o = run(&store, &["bound", "2", "5", "3", "--from-output", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(bound_value(&o), 65);
    let rec: serde_json::Value = serde_json::from_str(std::fs::read_to_string(&store).unwrap().trim()).unwrap();
    assert_eq!(rec["provenance"]["ExternalFile"], out.to_str().unwrap());
    assert!(rec["solverStats"].is_null());
}
