use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const MODEL: &str = "# Leslie-Gower with a generalist predator
params: A=1, B=2, C=1/2
dx = x*(C + x)*(1 - x - A*y)
dy = B*y*(C + x - y)
";

fn pdisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdisc"))
        .args(args)
        .env_remove("PDISC_SEED")
        .output()
        .expect("binary runs")
}

fn model(dir: &Path) -> PathBuf {
    let p = dir.join("model.vf");
    std::fs::write(&p, MODEL).unwrap();
    p
}

fn json(p: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn leslie_all_ones() {
    let out = pdisc(&[
        "leslie", "--r", "1", "--k", "1", "--q", "1", "--s", "1", "--n", "1", "--c", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A=1, B=1, C=1"), "{text}");
    assert!(text.contains("1-AC = 0"), "{text}");
}

#[test]
fn leslie_rejects_nonpositive() {
    let out = pdisc(&[
        "leslie", "--r", "1", "--k", "1", "--q", "1", "--s", "1", "--n", "1", "--c", "-1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn leslie_chains_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("a.json");
    let out = pdisc(&[
        "leslie",
        "--r",
        "2",
        "--k",
        "1",
        "--q",
        "1",
        "--s",
        "1",
        "--n",
        "1",
        "--c",
        "1",
        "--analyze",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out_path);
    assert_eq!(v["params"]["A"], "1/2");
    assert_eq!(v["regime"]["sign"], 1);
}

#[test]
fn darboux_not_liouvillian() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path());
    let out_path = dir.path().join("report.json");
    let out = pdisc(&[
        "darboux",
        m.to_str().unwrap(),
        "--params",
        "A=1,B=2,C=1/2",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out_path);
    assert_eq!(v["verdict"]["verdict"], "NotLiouvillianWithinBounds");
    assert_eq!(v["curves"].as_array().unwrap().len(), 3);
    assert_eq!(v["exponential_factors"][0]["g"], "y");
    assert!(v["extactic"].get("polynomial").is_none());
}

#[test]
fn darboux_dump_and_generic_sample() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path());
    let run = |seed: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_pdisc"));
        c.args([
            "darboux",
            m.to_str().unwrap(),
            "--dump-extactic",
            "--generic",
        ]);
        match seed {
            Some(s) => c.env("PDISC_SEED", s),
            None => c.env_remove("PDISC_SEED"),
        };
        let out = c.output().unwrap();
        assert_eq!(out.status.code(), Some(0));
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    let a = run(None);
    assert!(a["extactic"]["polynomial"].is_string());
    let triples = a["generic_sample"]["triples"].as_array().unwrap();
    assert_eq!(triples.len(), 5);
    assert!(triples
        .iter()
        .all(|t| t["verdict"] == "NotLiouvillianWithinBounds"));
    let b = run(Some("7"));
    assert_eq!(b["generic_sample"]["seed"], 7);
    assert_ne!(
        a["generic_sample"]["triples"],
        b["generic_sample"]["triples"]
    );
}

#[test]
fn portrait_inventory_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path());
    let paths: Vec<(PathBuf, PathBuf)> = (0..2)
        .map(|i| {
            (
                dir.path().join(format!("{i}.svg")),
                dir.path().join(format!("{i}.json")),
            )
        })
        .collect();
    for (svg, js) in &paths {
        let out = pdisc(&[
            "portrait",
            m.to_str().unwrap(),
            "--params",
            "A=1,B=1,C=1/2",
            "--svg",
            svg.to_str().unwrap(),
            "--json",
            js.to_str().unwrap(),
        ]);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
    assert_eq!(
        std::fs::read(&paths[0].0).unwrap(),
        std::fs::read(&paths[1].0).unwrap()
    );
    assert_eq!(
        std::fs::read(&paths[0].1).unwrap(),
        std::fs::read(&paths[1].1).unwrap()
    );
    let v = json(&paths[0].1);
    let mut labels: Vec<String> = v["equilibria"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            format!(
                "{}:{}",
                e["label"].as_str().unwrap_or("?"),
                e["classification"].as_str().unwrap()
            )
        })
        .collect();
    labels.sort();
    assert_eq!(
        labels,
        [
            "E0:unstable-node",
            "E1:saddle",
            "E2:saddle",
            "Estar:stable-focus",
            "U1:(0, 0):unstable-node",
            "U2:(0, 0):degenerate-needs-blowup"
        ]
    );
}

#[test]
fn analyze_reports_blowups() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path());
    let out = pdisc(&["analyze", m.to_str().unwrap(), "--quadrant"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["checks"]["passed"], true);
    let b = &v["blowups"][0];
    assert_eq!(b["at"], "U2:(0, 0)");
    assert_eq!(b["sectors"]["hyperbolic"], 2);
    assert_eq!(b["sectors"]["parabolic"], 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path());
    let bad = dir.path().join("bad.vf");
    std::fs::write(&bad, "dx = x +\ndy = y\n").unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["frobnicate"],
        vec!["analyze", "/definitely/not/here.vf"],
        vec!["analyze", bad.to_str().unwrap()],
        vec!["darboux", m.to_str().unwrap(), "--params", "A=1/0"],
        vec!["darboux", m.to_str().unwrap(), "--params", "A"],
        vec!["darboux", m.to_str().unwrap(), "--exp-degree", "0"],
    ];
    for c in cases {
        assert_eq!(pdisc(&c).status.code(), Some(2), "{c:?}");
    }
}

#[test]
fn common_factor_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("line.vf");
    std::fs::write(&p, "dx = x*y\ndy = x\n").unwrap();
    let out = pdisc(&["analyze", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
