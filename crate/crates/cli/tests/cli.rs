use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mothergraph"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn build_writes_schema_and_dot() {
    let dir = tempfile::tempdir().unwrap();
    let json_path = dir.path().join("g.json");
    let dot_path = dir.path().join("g.dot");
    let out = run(&[
        "build", "--d", "1", "--m", "2", "--n", "3",
        "--out", json_path.to_str().unwrap(),
        "--dot", dot_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let graph: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(graph["n"], 3);
    assert_eq!(graph["vertices"].as_array().unwrap().len(), 8);
    assert_eq!(graph["edges"].as_array().unwrap().len(), 8);
    // the example vertex: word 011 sits at linear position 2
    let v = graph["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .find(|v| v["word"] == "011")
        .unwrap();
    assert_eq!(v["pos"], 2);
    let dot = std::fs::read_to_string(&dot_path).unwrap();
    assert!(dot.contains("rankdir=LR"));
    assert!(dot.contains("color=blue")); // the type-1 chord
}

#[test]
fn build_projected_conductances() {
    let out = run(&["build", "--d", "1", "--m", "3", "--n", "2"]);
    assert!(out.status.success());
    let graph: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(graph["vertices"].as_array().unwrap().len(), 4);
    let conductances: Vec<&str> = graph["edges"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["conductance"].as_str().unwrap())
        .collect();
    assert!(conductances.iter().any(|c| *c != "1/1"), "{conductances:?}");
}

#[test]
fn resist_exact_and_float() {
    let out = run(&["resist", "--d", "1", "--m", "2", "--n", "3", "--A", "0", "--B", "7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["res"], "19/4");

    let out = run(&[
        "resist", "--d", "1", "--m", "2", "--n", "3", "--A", "0", "--B", "7",
        "--mode", "float",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["res"].as_f64().unwrap() - 4.75).abs() < 1e-8);

    // d = 0 path endpoints
    let out = run(&["resist", "--d", "0", "--m", "2", "--n", "4", "--A", "0", "--B", "15"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["res"], "15/1");
}

#[test]
fn resist_roundtrips_through_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    assert!(run(&[
        "build", "--d", "1", "--m", "2", "--n", "3", "--out", path.to_str().unwrap()
    ])
    .status
    .success());
    let out = run(&["resist", "--graph", path.to_str().unwrap(), "--A", "0", "--B", "7"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["res"], "19/4");
}

#[test]
fn resist_disconnected_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(
        &path,
        r#"{"shape":[2],"d":0,"n":1,
            "vertices":[{"word":"0","pos":0},{"word":"1","pos":1},
                        {"word":"0","pos":2},{"word":"1","pos":3}],
            "edges":[{"u":0,"v":1,"type":-1,"conductance":"1/1"},
                     {"u":2,"v":3,"type":-1,"conductance":"1/1"}]}"#,
    )
    .unwrap();
    let out = run(&["resist", "--graph", path.to_str().unwrap(), "--A", "0", "--B", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["res"], "inf");
}

#[test]
fn bound_prints_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert_path = dir.path().join("cert.json");
    let csv_path = dir.path().join("rows.csv");
    let out = run(&[
        "bound", "--d", "1", "--m", "2", "--s", "1", "--t", "2", "--n", "3",
        "--out", cert_path.to_str().unwrap(),
        "--csv", csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("bound 2/5"), "{text}");
    assert!(text.contains("res 5/3"), "{text}");
    assert!(text.contains("ratio 0.24"), "{text}");

    let cert: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert_path).unwrap()).unwrap();
    assert_eq!(cert["bound"], "2/5");
    assert_eq!(cert["res"], "5/3");
    assert_eq!(cert["cutsets"].as_array().unwrap().len(), 2);
    assert!(!cert["allocation"].as_array().unwrap().is_empty());

    let csv = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("a_hat,size,conductance,asymptotic,ratio"));
    assert_eq!(lines.clone().count(), 2);
    assert!(lines.next().unwrap().starts_with("2,2,5/1,"));
}

#[test]
fn verify_suites_pass() {
    for args in [
        &["verify", "lemma", "--d", "1", "--m", "2", "--n", "6"][..],
        &["verify", "weights", "--d", "2", "--m", "3,2,4", "--n", "5"][..],
        &["verify", "action", "--d", "2", "--m", "3", "--n", "3"][..],
        &["verify", "wnw", "--trials", "25", "--seed", "7"][..],
    ] {
        let out = run(args);
        assert!(out.status.success(), "{args:?}: {}", stdout(&out));
        assert!(stdout(&out).trim_end().ends_with("pass"), "{args:?}: {}", stdout(&out));
    }
}

#[test]
fn scaling_csv_shape() {
    let out = run(&["scaling", "--d", "1", "--m", "2", "--s", "1", "--t-max", "4",
        "--mode", "exact"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,bound,res,bound_per_linear,bound_per_log");
    assert_eq!(lines.len(), 4); // t = 2, 3, 4
    assert!(lines[1].starts_with("2,2/5,5/3,"), "{}", lines[1]);
}

#[test]
fn reruns_are_byte_identical() {
    let first = run(&["scaling", "--d", "2", "--m", "2", "--s", "0", "--t-max", "5"]);
    let second = run(&["scaling", "--d", "2", "--m", "2", "--s", "0", "--t-max", "5"]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);

    let dir = tempfile::tempdir().unwrap();
    let write = |p: &Path| {
        assert!(run(&[
            "bound", "--d", "2", "--m", "2", "--s", "1", "--t", "3", "--n", "5",
            "--out", p.to_str().unwrap(),
        ])
        .status
        .success());
        std::fs::read(p).unwrap()
    };
    let a = write(&dir.path().join("a.json"));
    let b = write(&dir.path().join("b.json"));
    assert_eq!(a, b);
}

#[test]
fn cap_exceeded_is_an_error() {
    let out = run(&["build", "--d", "1", "--m", "2", "--n", "10", "--cap", "100"]);
    assert_eq!(out.status.code(), Some(1));
}
