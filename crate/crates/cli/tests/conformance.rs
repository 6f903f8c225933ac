use std::io::Write;
use std::process::{Command, Stdio};

use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
}

impl Run {
    fn json(&self) -> Value {
        let v: Value = serde_json::from_str(&self.stdout).expect("json output");
        assert_eq!(v["schema"], "positroidlab/v1");
        v["result"].clone()
    }
}

fn run_with(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_positroidlab"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    if let Some(s) = stdin {
        child.stdin.take().unwrap().write_all(s.as_bytes()).unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    Run { code: out.status.code().unwrap(), stdout: String::from_utf8(out.stdout).unwrap() }
}

fn run(args: &[&str]) -> Run {
    run_with(args, None)
}

fn ok(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "{args:?}: {}", r.stdout);
    r.json()
}

fn strs(v: &Value) -> Vec<String> {
    v.as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
}

#[test]
fn perm_commands() {
    assert_eq!(ok(&["perm", "type", "465213"]), serde_json::json!({ "k": 3, "n": 6 }));
    assert_eq!(ok(&["perm", "type", "651324"])["k"], 4);
    assert_eq!(ok(&["perm", "type", "123456"])["k"], 6);
    assert_eq!(ok(&["perm", "lift", "465213"])["window"], serde_json::json!([4, 6, 5, 8, 7, 9]));
    assert_eq!(ok(&["perm", "lift", "564123"])["window"], serde_json::json!([5, 6, 4, 7, 8, 9]));
    assert_eq!(ok(&["perm", "length", "--window", "4,6,5,8,7,9"]), 2);
    assert_eq!(ok(&["perm", "length", "--window", "5,6,4,7,8,9"]), 2);
    assert_eq!(ok(&["perm", "length", "456123"]), 0);
    assert_eq!(ok(&["perm", "leq", "456123", "465213"]), true);
    assert_eq!(ok(&["perm", "leq", "456213", "465213"]), true);
    assert_eq!(ok(&["perm", "leq", "465213", "465213"]), true);
}

#[test]
fn necklace_commands() {
    let f = ok(&["necklace", "forward", "465213"]);
    assert_eq!(f["display"], "(123, 234, 346, 456, 256, 126)");
    assert_eq!(f["trip"], "465213");
    assert_eq!(ok(&["necklace", "forward", "564123"])["display"], "(123, 235, 356, 456, 156, 126)");
    assert_eq!(ok(&["necklace", "forward", "456123"])["display"], "(123, 234, 345, 456, 156, 126)");
    assert_eq!(ok(&["necklace", "reverse", "465213"])["display"], "(456, 146, 126, 123, 234, 245)");
    assert_eq!(
        ok(&["necklace", "reverse", "465213", "--shift", "6"])["display"],
        ok(&["necklace", "reverse", "465213"])["display"]
    );
    let n2 = ok(&["necklace", "grassmannlike", "--rho", "123546", "--iota", "465123"]);
    assert_eq!(n2["display"], "(123, 234, 346, 456, 146, 126)");

    let t3 = ok(&["necklace", "toggle", "--pi", "465213", "--at", "3"]);
    assert_eq!(t3["class"], "aligned");
    assert_eq!(t3["necklace"]["display"], "(123, 234, 245, 456, 256, 126)");
    let t5 = ok(&["necklace", "toggle", "--pi", "465213", "--at", "5"]);
    assert_eq!(t5["necklace"]["display"], "(123, 234, 346, 456, 146, 126)");

    let classes = ok(&["necklace", "classify", "--pi", "465213"]);
    let got: Vec<&str> = classes.as_array().unwrap().iter().map(|c| c["class"].as_str().unwrap()).collect();
    assert_eq!(got, ["crossing", "crossing", "aligned", "crossing", "aligned", "crossing"]);

    let d = ok(&["necklace", "dual", "--rho", "123546", "--iota", "465123"]);
    assert_eq!(d["display"], "(456, 156, 126, 123, 235, 245)");
    assert_eq!(
        ok(&["necklace", "dual", "--pi", "465213"])["display"],
        ok(&["necklace", "reverse", "465213"])["display"]
    );

    let u = ok(&["necklace", "units", "--pi", "465213", "--iota", "456123"]);
    // rows: 245 = 234·456/346 and 146 = 456·126/256
    assert_eq!(u["exponents"][2], serde_json::json!([0, 1, -1, 1, 0, 0]));
    assert_eq!(u["exponents"][4], serde_json::json!([0, 0, 0, 1, -1, 1]));
}

#[test]
fn positroid_commands() {
    let bases = strs(&ok(&["positroid", "enumerate", "465213"]));
    assert_eq!(bases.len(), 18);
    assert!(!bases.contains(&"345".to_string()) && !bases.contains(&"156".to_string()));
    assert_eq!(strs(&ok(&["positroid", "enumerate", "564123"])).len(), 16);
    assert_eq!(strs(&ok(&["positroid", "enumerate", "456123"])).len(), 20);
    assert_eq!(ok(&["positroid", "contains", "465213", "345"]), false);
    assert_eq!(ok(&["positroid", "contains", "465213", "236"]), true);
    assert_eq!(ok(&["positroid", "dim", "465213"]), 8);
    assert_eq!(ok(&["positroid", "dim", "456123"]), 10);
    assert_eq!(ok(&["positroid", "dim", "564123"]), 8);
}

#[test]
fn plabic_commands() {
    assert_eq!(ok(&["plabic", "trips", "--graph", "gallery:hexagon-target"])["trip_perm"], "465213");
    assert_eq!(ok(&["plabic", "trips", "--graph", "gen:651324"])["trip_perm"], "651324");

    let faces = ok(&["plabic", "faces", "--graph", "gallery:hexagon-target"]);
    let mut labels: Vec<&str> = faces.as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()).collect();
    labels.sort();
    assert_eq!(labels, ["123", "126", "234", "236", "246", "256", "346", "456"]);

    // relabel through stdin
    let g = run(&["plabic", "gen", "651324"]).stdout;
    let r = run_with(&["plabic", "relabel", "--graph", "-", "--sigma", "124356"], Some(&g));
    assert_eq!(r.code, 0);
    let t = run_with(&["plabic", "trips", "--graph", "-"], Some(&r.stdout));
    assert_eq!(t.json()["trip_perm"], "654123");

    let rep = ok(&["plabic", "reduced", "--graph", "gen:564123"]);
    assert_eq!(rep["reduced"], true);
    assert_eq!(rep["faces"], 8);
    for name in ["hexagon-target", "hexagon-toggled-3", "hexagon-toggled-5", "hexagon-toggled-both"] {
        assert_eq!(run(&["plabic", "reduced", "--graph", &format!("gallery:{name}")]).code, 0);
    }

    let q = ok(&["plabic", "quiver", "--graph", "gallery:hexagon-target"]);
    assert_eq!(q["labels"].as_array().unwrap().len(), 8);
    let dot = run(&["plabic", "quiver", "--graph", "gallery:hexagon-target", "--dot"]).stdout;
    assert!(dot.starts_with("digraph"));

    // square move at 236 and back
    let moved = run(&["plabic", "square-move", "--graph", "gallery:hexagon-target", "--face", "236"]);
    assert_eq!(moved.code, 0);
    let f = run_with(&["plabic", "faces", "--graph", "-"], Some(&moved.stdout)).json();
    let labels: Vec<&str> = f.as_array().unwrap().iter().map(|f| f["label"].as_str().unwrap()).collect();
    assert!(!labels.contains(&"236"));
    assert_eq!(run(&["plabic", "square-move", "--graph", "gallery:hexagon-target", "--face", "123"]).code, 1);
}

#[test]
fn wsc_commands() {
    let r = run(&["wsc", "check", "--n", "7", "2456", "1347"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.json()["weakly_separated"], false);
    assert_eq!(run(&["wsc", "check", "--n", "6", "123", "345"]).code, 0);
    assert_eq!(run(&["wsc", "check", "--n", "7", "1234", "2345", "3457", "4567", "1567", "1467", "1347"]).code, 0);

    let c = ok(&["wsc", "complete", "--pi", "465213", "123", "234", "346", "456", "256", "126"]);
    assert_eq!(c["subsets"].as_array().unwrap().len(), 8);
    let c = ok(&["wsc", "complete", "--pi", "456123", "123", "234", "345", "456", "156", "126"]);
    assert_eq!(c["subsets"].as_array().unwrap().len(), 10);

    let inner = strs(&ok(&["wsc", "interior", "--pi", "465213"]));
    assert!(inner.contains(&"236".to_string()) && inner.contains(&"246".to_string()));
    let inner = strs(&ok(&["wsc", "interior", "--rho", "123546", "--iota", "465123"]));
    assert!(inner.contains(&"124".to_string()) && inner.contains(&"246".to_string()));

    let svg = run(&["wsc", "tiling-svg", "--n", "6", "123", "234", "346", "456", "256", "126", "236", "246"]);
    assert_eq!(svg.code, 0);
    assert!(svg.stdout.starts_with("<svg"));
}

#[test]
fn seed_commands() {
    let s = ok(&["seed", "from-graph", "--graph", "gallery:hexagon-target"]);
    let mut m = strs(&s["mutable"]);
    m.sort();
    assert_eq!(m, ["236", "246"]);
    let s = ok(&["seed", "from-graph", "--graph", "gallery:hexagon-toggled-5"]);
    let mut m = strs(&s["mutable"]);
    m.sort();
    assert_eq!(m, ["124", "246"]);

    let c = ok(&["seed", "closure", "--graph", "gallery:hexagon-target"]);
    assert_eq!(c["seeds"], 5);
    assert_eq!(c["cluster_variables"].as_array().unwrap().len(), 5);

    let twice = ok(&["seed", "mutate", "--graph", "gallery:hexagon-target", "--seq", "0,0"]);
    assert_eq!(twice, ok(&["seed", "from-graph", "--graph", "gallery:hexagon-target"]));
    assert_eq!(run(&["seed", "mutate", "--graph", "gallery:hexagon-target", "--seq", "2"]).code, 1);

    let q = run(&["seed", "quasi-check", "--graph", "gallery:hexagon-target", "--other", "gallery:hexagon-target"]);
    assert_eq!(q.code, 0);
    let q = run(&["seed", "quasi-check", "--graph", "gallery:hexagon-target", "--other", "gallery:hexagon-toggled-3"]);
    assert_eq!(q.code, 0);
    let q = run(&["seed", "quasi-check", "--graph", "gallery:hexagon-target", "--other", "gen:456123"]);
    assert_eq!(q.code, 2);
    assert_eq!(q.json()["equivalent"], false);
    for other in ["hexagon-toggled-3", "hexagon-toggled-5", "hexagon-toggled-both"] {
        let r = run(&[
            "seed",
            "quasi-search",
            "--graph",
            "gallery:hexagon-target",
            "--other",
            &format!("gallery:{other}"),
        ]);
        assert_eq!(r.code, 0, "{other}");
        assert_eq!(r.json()["found"], true);
    }
}

#[test]
fn twist_commands() {
    let b = ok(&["twist", "boundary", "--graph", "gallery:hexagon-target", "--ones"]);
    assert_eq!(b["plueckers"]["345"], "0");
    assert_eq!(b["plueckers"]["156"], "0");
    let s = ok(&["twist", "sample", "456123"]);
    assert!(s["plueckers"].as_object().unwrap().values().all(|v| !v.as_str().unwrap().starts_with(['-', '0'])));

    let r = run(&["twist", "roundtrip", "--rho", "123546", "--iota", "465123", "--points", "3"]);
    assert_eq!(r.code, 0);
    assert_eq!(r.json()["passed"], true);
    assert_eq!(run(&["twist", "roundtrip", "--pi", "465213", "--points", "2"]).code, 0);

    let d = ok(&["twist", "diagram", "--graph", "gallery:hexagon-toggled-5", "--points", "2"]);
    assert_eq!(d["passed"], true);
    assert!(d["reports"][0]["differs_at"].is_string());

    let m = run(&["twist", "sample", "465213"]).stdout;
    let path = std::env::temp_dir().join(format!("positroidlab-m-{}.json", std::process::id()));
    std::fs::write(&path, m).unwrap();
    let p = path.to_str().unwrap();
    let right = ok(&["twist", "right", "--pi", "465213", "--matrix", p]);
    let left = ok(&["twist", "left", "--pi", "465213", "--matrix", p]);
    assert_eq!(right["output"]["k"], 3);
    assert_ne!(right["output"], left["output"]);
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn analysis_commands() {
    assert_eq!(strs(&ok(&["analysis", "sep", "465213"])).len(), 4);
    assert_eq!(strs(&ok(&["analysis", "sep", "5761432"])).len(), 6);
    assert_eq!(run(&["analysis", "sep", "123"]).code, 1);

    let dot = run(&["analysis", "toggle-graph", "5761432", "--dot"]);
    assert_eq!(dot.code, 0);
    let nodes = dot.stdout.lines().filter(|l| l.contains("[label=") && !l.contains("--")).count();
    assert_eq!(nodes, 6);
    let comps: std::collections::BTreeSet<&str> =
        dot.stdout.lines().filter_map(|l| l.split("component=").nth(1)).map(|c| c.trim_end_matches("];")).collect();
    assert_eq!(comps.len(), 2);

    let tg = ok(&["analysis", "toggle-graph", "465213"]);
    assert_eq!(tg["vertices"].as_array().unwrap().len(), 4);
    assert_eq!(tg["edges"].as_array().unwrap().len(), 4);

    assert_eq!(ok(&["analysis", "connected", "465213"])["connected"], true);
    assert_eq!(ok(&["analysis", "connected", "5761432"])["connected"], false);
    assert_eq!(ok(&["analysis", "schubert", "456123"])["kind"], "schubert");
    assert_eq!(ok(&["analysis", "schubert", "5761432"])["kind"], "neither");

    let s = run(&["analysis", "sweep", "main-2-iff-3", "--n-max", "5", "--jobs", "2"]);
    assert_eq!(s.code, 0);
    assert!(s.json()["entries"].as_array().unwrap().iter().all(|e| e["status"] == "pass"));
    assert_eq!(run(&["analysis", "sweep", "nonsense", "--n-max", "4"]).code, 1);
}

#[test]
fn exit_codes_and_usage() {
    assert_eq!(run(&["frobnicate"]).code, 64);
    assert_eq!(run(&["perm", "type"]).code, 64);
    assert_eq!(run(&["perm", "type", "123", "--bogus"]).code, 64);
    assert_eq!(run(&["--help"]).code, 0);
    assert_eq!(run(&["--version"]).code, 0);
    assert_eq!(run(&["perm", "type", "1123"]).code, 1);
    assert_eq!(run(&["necklace", "toggle", "--pi", "465213", "--at", "9"]).code, 1);
    assert_eq!(run(&["plabic", "trips", "--graph", "gallery:nope"]).code, 1);
}

#[test]
fn seeded_output_is_deterministic() {
    let a = run(&["--seed", "17", "twist", "sample", "465213"]).stdout;
    let b = run(&["--seed", "17", "twist", "sample", "465213"]).stdout;
    let c = run(&["--seed", "18", "twist", "sample", "465213"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, c);
    let s1 = run(&["--jobs", "1", "analysis", "sweep", "unit-necklace", "--n-max", "4"]).stdout;
    let s2 = run(&["--jobs", "3", "analysis", "sweep", "unit-necklace", "--n-max", "4"]).stdout;
    assert_eq!(s1, s2);
}
