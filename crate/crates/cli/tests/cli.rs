use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn honeybee(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_honeybee")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_p3() {
    let p3 = data("p3.json");
    let o = honeybee(&["solve", "--in", p3.to_str().unwrap(), "--start", "v0", "--method", "exact", "--json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["length"], 2);
    assert_eq!(v["sequence"], serde_json::json!([1, 0]));
}

#[test]
fn exit_codes() {
    assert_eq!(honeybee(&["solve"]).status.code(), Some(2));
    assert_eq!(honeybee(&["solve", "--in", "/nonexistent.json"]).status.code(), Some(1));
    let p3 = data("p3.json");
    let o = honeybee(&["--json", "solve", "--in", p3.to_str().unwrap(), "--start", "zz"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["code"], "domain");
    assert_eq!(honeybee(&["solve", "--in", p3.to_str().unwrap(), "--method", "magic"]).status.code(), Some(2));
}

#[test]
fn gen_scs_sp_writes_both_files() {
    let dir = tempfile::tempdir().unwrap();
    let src = data("three_sequences.json");
    let o = honeybee(&["gen", "scs-sp", "--in", src.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let inst: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("instance.json")).unwrap()).unwrap();
    let weight = |id: &str| {
        inst["nodes"].as_array().unwrap().iter().find(|n| n["id"] == id).unwrap()["weight"].as_u64().unwrap()
    };
    assert_eq!((weight("h0"), weight("h1"), weight("h2"), weight("hb")), (48, 48, 48, 117));
    let prov: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("provenance.json")).unwrap()).unwrap();
    assert_eq!(prov["source"], "scs-sp");
}

#[test]
fn gen_kinds_round_trip_through_solve() {
    use honeybee::reductions::{brute_scs, expand_binary};
    let images: Vec<Vec<u8>> = ["1001", "0101", "1010"]
        .iter()
        .map(|s| expand_binary(&s.bytes().map(|b| b - b'0').collect::<Vec<_>>()))
        .collect();
    let tree_opt = brute_scs(&images).unwrap().0;
    let spider_opt = brute_scs(&[vec![0, 1, 0, 2], vec![1, 2, 0, 1], vec![0, 1, 0]]).unwrap().0;
    // a 3-cycle needs one removal: |X| + 1
    for (kind, file, want) in [("fvs", "fvs_triangle.json", 4), ("mscs-tree", "mscs.json", spider_opt), ("scs-tree", "three_sequences.json", tree_opt)] {
        let dir = tempfile::tempdir().unwrap();
        let src = data(file);
        let o = honeybee(&["gen", kind, "--in", src.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
        assert!(o.status.success(), "{kind}: {}", String::from_utf8_lossy(&o.stderr));
        let inst = dir.path().join("instance.json");
        let o = honeybee(&["--json", "solve", "--in", inst.to_str().unwrap()]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["length"], want, "{kind}");
    }
    let dir = tempfile::tempdir().unwrap();
    let q = data("qbf_example.json");
    let o = honeybee(&["--json", "gen", "qbf", "--in", q.to_str().unwrap(), "--out", dir.path().to_str().unwrap(), "--expand-pots"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["nodes"], v["total_weight"]);
}

#[test]
fn simulate_is_deterministic() {
    let args = ["--json", "simulate", "--policyA", "greedy", "--policyB", "greedy", "--games", "10", "--seed", "1"];
    let (a, b) = (honeybee(&args), honeybee(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(v["a_wins"].as_u64().unwrap() + v["b_wins"].as_u64().unwrap(), 10);
    let r = honeybee(&["simulate", "--policyA", "random", "--policyB", "minimax", "--games", "3", "--rows", "3", "--cols", "3"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
}

#[test]
fn play_on_a_strip() {
    use std::io::Write;
    let strip = data("strip.json");
    let mut child = Command::new(env!("CARGO_BIN_EXE_honeybee"))
        .args(["--json", "play", "--in", strip.to_str().unwrap(), "--seed", "3"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"1\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["winner"], "A");
}
