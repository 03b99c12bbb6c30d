use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use digispace::solver::ProblemSpec;
use digispace_cli::experiments::{experiment, EXPERIMENT_IDS};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_digispace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn problems_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("problems")
}

#[test]
fn catalog_list_and_export() {
    let out = run(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let list = json(&out);
    let s4 = list.as_array().unwrap().iter().find(|e| e["name"] == "s4_min").unwrap();
    assert_eq!(s4["points"], 10);
    assert!(list.as_array().unwrap().iter().all(|e| e["verified"] == true));

    let out = run(&["catalog", "export", "klein_bottle_16"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["points"].as_array().unwrap().len(), 16);

    assert_eq!(run(&["catalog", "export", "nowhere"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let out = run(&["verify", "s2_min", "--n", "2", "--as", "sphere"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "sphere");

    let out = run(&["verify", "moebius_12", "--n", "2", "--as", "manifold"]);
    assert_eq!(out.status.code(), Some(1));
    let w = json(&out)["witness"]["point"].as_u64().unwrap();
    assert!((1..=8).contains(&w), "witness {w} should be a boundary point");

    let out = run(&["verify", "orthogonal_grid_4x4", "--n", "2"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(run(&["verify", "nowhere", "--n", "2"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "s2_min"]).status.code(), Some(2));
}

#[test]
fn verify_reads_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c5.json");
    fs::write(
        &path,
        r#"{"name":"c5","points":[1,2,3,4,5],"edges":[[1,2],[2,3],[3,4],[4,5],[1,5]]}"#,
    )
    .unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--n", "1", "--as", "sphere"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["space"], "c5");

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"points":[1,2],"edges":[[1,3]]}"#).unwrap();
    assert_eq!(run(&["invariants", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invariants_json() {
    let out = run(&["invariants", "klein_bottle_16"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["chi"], 0);
    assert_eq!(v["betti"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["torsion"][1], serde_json::json!([2]));
}

#[test]
fn transforms() {
    let out = run(&["transform", "s2_min", "r-transform", "--edge", "1,3"]);
    assert_eq!(out.status.code(), Some(0));
    let g = json(&out)["graph"].clone();
    assert_eq!(g["points"].as_array().unwrap().len(), 7);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    fs::write(&path, serde_json::to_string(&g).unwrap()).unwrap();
    let out = run(&["verify", path.to_str().unwrap(), "--n", "2", "--as", "sphere"]);
    assert_eq!(out.status.code(), Some(0));

    let out = run(&["transform", "moebius_12", "reduce"]);
    assert_eq!(out.status.code(), Some(0));
    let reduced = json(&out);
    let red_path = dir.path().join("r.json");
    fs::write(&red_path, serde_json::to_string(&reduced["graph"]).unwrap()).unwrap();
    let inv = json(&run(&["invariants", red_path.to_str().unwrap()]));
    assert_eq!(inv["chi"], 0);

    assert_eq!(
        run(&["transform", "s2_min", "r-transform", "--edge", "1,2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["transform", "s2_min", "r-transform", "--edge", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn solve_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let problem = problems_dir().join("klein_ivp.problem.json");
    let mut outputs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("k{i}.csv"));
        let svg = dir.path().join(format!("k{i}.svg"));
        let out = bin()
            .arg("solve")
            .arg(&problem)
            .arg("--out")
            .arg(&csv)
            .arg("--plot")
            .arg(&svg)
            .args(["--points", "1,3"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push((fs::read(&csv).unwrap(), fs::read(&svg).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let svg = String::from_utf8(outputs[0].1.clone()).unwrap();
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn solve_with_zero_steps_prints_initial_row() {
    let problem = problems_dir().join("s4_ivp.problem.json");
    let out = bin()
        .arg("solve")
        .arg(&problem)
        .args(["--steps", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "t,f_1,f_2,f_3,f_4,f_5,f_6,f_7,f_8,f_9,f_10,S,norm1");
    assert_eq!(lines[1], "0,1,0,0,0,0,0,0,0,0,0,1,1");
}

#[test]
fn invalid_problems_exit_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(
        &path,
        r#"{"space":"s1_min","coefficients":{"entries":[[1,2,0.5]]},"initial":[1,0,0,0]}"#,
    )
    .unwrap();
    let out = bin().arg("solve").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c[1][2]"));
    let missing = dir.path().join("missing.json");
    assert_eq!(
        bin().arg("solve").arg(&missing).output().unwrap().status.code(),
        Some(2)
    );
}

#[test]
fn diverging_problem_exits_with_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    fs::write(
        &path,
        r#"{"space":"s1_min","coefficients":{"uniform_offdiag":1.0,"diag":1.0},"initial":[1,0,0,0],"steps":100}"#,
    )
    .unwrap();
    assert_eq!(bin().arg("solve").arg(&path).output().unwrap().status.code(), Some(1));
}

#[test]
fn experiments_write_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["experiment", "all", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    for id in EXPERIMENT_IDS {
        for ext in ["csv", "svg", "problem.json"] {
            assert!(dir.path().join(format!("{id}.{ext}")).is_file(), "{id}.{ext}");
        }
    }
    assert_eq!(run(&["experiment", "heat_on_a_donut"]).status.code(), Some(2));
}

#[test]
fn shipped_problem_files_match_experiments() {
    for id in EXPERIMENT_IDS {
        let text = fs::read_to_string(problems_dir().join(format!("{id}.problem.json"))).unwrap();
        assert_eq!(
            ProblemSpec::from_json(&text).unwrap(),
            experiment(id).unwrap().problem,
            "{id}"
        );
    }
}

#[test]
fn check_subcommand_is_seeded() {
    let a = run(&["check", "--seed", "5", "--cases", "8"]);
    let b = run(&["check", "--seed", "5", "--cases", "8"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(a.stdout, b.stdout);
}
