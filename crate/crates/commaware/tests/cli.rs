use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn commaware(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_commaware"))
        .args(args)
        .env_remove("COMMAWARE_THREADS")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn modularity_of_karate_factions() {
    let graph = fixture("karate.txt");
    let parts = fixture("karate_factions.csv");
    let out = commaware(&["modularity", "--graph", path_str(&graph), "--partition", path_str(&parts)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let line = stdout(&out);
    let q: f64 = line.trim().strip_prefix("q=").unwrap().parse().unwrap();
    // networkx 3.4 `community.modularity` on the same split.
    assert!((q - 0.37146614069691).abs() < 1e-12);

    let out = commaware(&[
        "modularity",
        "--graph",
        path_str(&graph),
        "--partition",
        path_str(&parts),
        "--lambda",
        "0.5",
        "--json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["q"].as_f64().unwrap() - 0.6216305062458909).abs() < 1e-12);
    assert_eq!(v["communities"], 2);
}

#[test]
fn regularized_modularity_flag() {
    let graph = fixture("karate.txt");
    let parts = fixture("karate_factions.csv");
    let plain = commaware(&["modularity", "--graph", path_str(&graph), "--partition", path_str(&parts)]);
    let with_beta = commaware(&[
        "modularity",
        "--graph",
        path_str(&graph),
        "--partition",
        path_str(&parts),
        "--beta",
        "2",
    ]);
    // Without singleton communities the outlier reward has no effect.
    assert_eq!(stdout(&plain), stdout(&with_beta));
}

#[test]
fn features_are_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let graph = fixture("karate.txt");
    let mut outputs = Vec::new();
    for (name, threads) in [("a.csv", "1"), ("b.csv", "1"), ("c.csv", "3")] {
        let out = dir.path().join(name);
        let run = commaware(&[
            "features",
            "--graph",
            path_str(&graph),
            "--set",
            "all",
            "--seed",
            "7",
            "--threads",
            threads,
            "--out",
            path_str(&out),
        ]);
        assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
        outputs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(outputs[0], outputs[2]);
    let text = String::from_utf8(outputs[0].clone()).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "node,CADA,CADA*,WMD,CPC,CAS,CD_L11,CD_L21,CD_KL1,CD_HD1,CD_L12,CD_L22,CD_KL2,CD_HD2,lcc,bc,cc,dc,ndc,ec,eccen,core"
    );
    assert_eq!(lines.count(), 34);
    assert!(!text.contains('\r'));
    // External ids are the original 1-based labels.
    assert!(text.lines().nth(1).unwrap().starts_with("1,"));
    let manifest = dir.path().join("a.csv.manifest.json");
    let m: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(manifest).unwrap()).unwrap();
    assert_eq!(m["subcommand"], "features");
    assert_eq!(m["seeds"], serde_json::json!([7]));
    assert_eq!(m["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(m["flags"].get("threads").is_none());
}

#[test]
fn generate_detect_features_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let mut snapshots = Vec::new();
    for round in ["one", "two"] {
        let base = dir.path().join(round);
        let gen = base.join("gen");
        let run = commaware(&[
            "generate",
            "--n",
            "1500",
            "--s0",
            "100",
            "--min-degree",
            "5",
            "--max-degree",
            "60",
            "--min-size",
            "40",
            "--max-size",
            "300",
            "--xi",
            "0.3",
            "--seed",
            "4",
            "--out-dir",
            path_str(&gen),
        ]);
        assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
        let graph = gen.join("graph.txt");
        let partition = base.join("partition.csv");
        let run = commaware(&[
            "detect",
            "--graph",
            path_str(&graph),
            "--seed",
            "4",
            "--restarts",
            "4",
            "--out",
            path_str(&partition),
        ]);
        assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
        assert!(stdout(&run).starts_with("q="));
        let features = base.join("features.csv");
        let run = commaware(&[
            "features",
            "--graph",
            path_str(&graph),
            "--partition",
            path_str(&partition),
            "--set",
            "community",
            "--labels",
            path_str(&gen.join("labels.csv")),
            "--out",
            path_str(&features),
            "--json",
        ]);
        assert_eq!(run.status.code(), Some(0), "{}", stderr(&run));
        let summary: serde_json::Value = serde_json::from_str(&stdout(&run)).unwrap();
        let auc = summary["auc"]["CAS"].as_f64().unwrap();
        assert!(auc < 0.2, "low association strength should flag outliers: {auc}");
        let mut files = Vec::new();
        for f in [
            gen.join("graph.txt"),
            gen.join("planted.csv"),
            gen.join("labels.csv"),
            gen.join("generation.json"),
            partition.clone(),
            features.clone(),
        ] {
            files.push(std::fs::read(f).unwrap());
        }
        assert!(gen.join("manifest.json").exists());
        assert!(base.join("partition.csv.manifest.json").exists());
        snapshots.push(files);
    }
    assert_eq!(snapshots[0], snapshots[1]);
    let labels = String::from_utf8(snapshots[0][2].clone()).unwrap();
    assert_eq!(labels.lines().next(), Some("node,label"));
    assert_eq!(labels.lines().filter(|l| l.ends_with(",1")).count(), 100);
}

#[test]
fn usage_errors_exit_with_one() {
    let graph = fixture("karate.txt");
    let out = commaware(&["detect", "--graph", path_str(&graph), "--seed", "1", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("Usage"));
    let out = commaware(&["detect", "--graph", path_str(&graph)]);
    assert_eq!(out.status.code(), Some(1), "seed is mandatory");
    let out = commaware(&["features", "--graph", path_str(&graph), "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--seed"));
    let out = commaware(&["detect", "--graph", path_str(&graph), "--seed", "1", "--lambda=-1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("lambda"));
    assert_eq!(commaware(&["--help"]).status.code(), Some(0));
}

#[test]
fn thread_count_from_environment() {
    let graph = fixture("karate.txt");
    let out = Command::new(env!("CARGO_BIN_EXE_commaware"))
        .args(["detect", "--graph", path_str(&graph), "--seed", "1"])
        .env("COMMAWARE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--threads"));
    let out = Command::new(env!("CARGO_BIN_EXE_commaware"))
        .args(["detect", "--graph", path_str(&graph), "--seed", "1", "--threads", "2"])
        .env("COMMAWARE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "flag overrides the environment");
}

#[test]
fn input_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.txt");
    let out = commaware(&["detect", "--graph", path_str(&missing), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("missing.txt"));

    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "# header\n1 2\n2 3 4\n").unwrap();
    let out = commaware(&["detect", "--graph", path_str(&bad), "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("bad.txt:3"), "{}", stderr(&out));

    let two = dir.path().join("two.txt");
    std::fs::write(&two, "0 1\n1 2\n3 4\n").unwrap();
    let out = commaware(&["features", "--graph", path_str(&two), "--set", "classical", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--giant-component"));
    let out = commaware(&[
        "features",
        "--graph",
        path_str(&two),
        "--set",
        "classical",
        "--giant-component",
        "--out",
        path_str(&dir.path().join("f.csv")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("nodes=3 "));
}

#[test]
fn infeasible_generator_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = commaware(&[
        "generate",
        "--n",
        "10",
        "--s0",
        "0",
        "--min-degree",
        "1",
        "--max-degree",
        "3",
        "--min-size",
        "4",
        "--max-size",
        "4",
        "--xi",
        "0.5",
        "--seed",
        "0",
        "--out-dir",
        path_str(dir.path()),
    ]);
    assert_eq!(out.status.code(), Some(3));
    let out = commaware(&["generate", "--xi", "1.5", "--seed", "0", "--out-dir", path_str(dir.path())]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("xi"));
}
