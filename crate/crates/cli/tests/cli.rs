use std::path::PathBuf;
use std::process::{Command, Output};

use colourings_cli::report::{AnalyzeReport, CheckReport, EnumerateReport, MutateReport};

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.push("../../data");
    p.push(name);
    p.to_string_lossy().into_owned()
}

fn scratch(name: &str, body: &str) -> String {
    let mut p = std::env::temp_dir();
    p.push(format!("colourings-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colourings"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json<T: serde::de::DeserializeOwned>(args: &[&str]) -> (T, String, i32) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let o = run(&all);
    let text = stdout(&o);
    let r = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (r, text, o.status.code().unwrap())
}

#[test]
fn check_symmetric() {
    let o = run(&["check", &data("symmetric.col"), "--orientable"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("proper: yes"));
    assert!(stdout(&o).contains("orientable: yes (functional 11111)"));
}

#[test]
fn improper_colouring_names_the_star() {
    let text = std::fs::read_to_string(data("symmetric.col"))
        .unwrap()
        .replace("13 01011", "13 00111");
    let path = scratch("improper.col", &text);
    let o = run(&["check", &path]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("proper: no"));
    assert!(out.contains("vertex star 1: 12 13 14 15"), "{out}");
    let o = run(&["analyze", &path]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_bits_name_the_line() {
    let path = scratch(
        "malformed.col",
        "polytope box3\ndim 3\nx0 100\nx1 1x0\ny0 010\ny1 010\nz0 001\nz1 001\n",
    );
    let o = run(&["check", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));
    let o = run(&["check", "/nonexistent/file.col"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn analyze_symmetric() {
    let (r, _, code): (AnalyzeReport, _, _) = json(&["analyze", &data("symmetric.col")]);
    assert_eq!(code, 0);
    assert_eq!(r.copies, 32);
    assert_eq!(r.euler_characteristic.as_deref(), Some("2"));
    assert_eq!(r.cusps.iter().map(|c| c.count.oracle).sum::<u64>(), 10);
    assert!(r.all_agree());
    assert!(r.hypersurfaces.iter().all(|h| h.lifts.formula == 1));
    let text = stdout(&run(&["analyze", &data("symmetric.col")]));
    assert!(text.contains("all checks: AGREE"));
    assert!(!text.contains("DISAGREE"));
}

#[test]
fn analyze_cubes() {
    let (r, _, code): (AnalyzeReport, _, _) = json(&["analyze", &data("fig1_cube.col")]);
    assert_eq!(code, 0);
    let flat = r.flat.unwrap();
    assert_eq!(flat.volume, 8);
    assert_eq!(flat.walk_type, "G2");
    assert_eq!(flat.classifier.as_deref(), Some("G2"));
    let (r, _, _): (AnalyzeReport, _, _) = json(&["analyze", &data("basis_cube.col")]);
    let flat = r.flat.unwrap();
    assert_eq!(flat.walk_type, "torus");
    assert_eq!(flat.lattice, vec![vec![2, 0, 0], vec![0, 2, 0], vec![0, 0, 2]]);
}

#[test]
fn mutate_scenarios() {
    let (x, _, code): (MutateReport, _, _) = json(&["mutate", "--scenario", "X"]);
    assert_eq!(code, 0);
    assert_eq!(x.cusp_count, 1);
    assert_eq!(x.total_fibre_length, 20);
    assert_eq!(x.cusps[0].flat_type.as_deref(), Some("G2"));
    assert_eq!(x.cusps[0].monodromy_isometry.as_deref(), Some("(-x,-y,z+20)"));
    assert!(x.short_boundaries.iter().all(|b| b.agree()));
    let (y, _, code): (MutateReport, _, _) = json(&["mutate", "--scenario", "Y"]);
    assert_eq!(code, 0);
    assert_eq!(y.cusp_count, 1);
    assert_eq!(
        y.cusps[0].lattice,
        Some(vec![vec![2, 2, 0], vec![0, 4, 0], vec![0, 0, 20]])
    );
    let (from_file, _, _): (MutateReport, _, _) =
        json(&["mutate", &data("symmetric.col"), "--spec", &data("scenario_x.mut")]);
    assert_eq!(from_file, x);
}

#[test]
fn identity_mutation_keeps_ten_cusps() {
    let (r, _, code): (MutateReport, _, _) = json(&["mutate", "--spec", &data("identity.mut")]);
    assert_eq!(code, 0);
    assert_eq!(r.cusp_count, 10);
    assert!(r.cusps.iter().all(|c| c.flat_type.as_deref() == Some("torus")));
}

#[test]
fn bad_mutation_specs() {
    let path = scratch("overlap.mut", "cut 45 34\n");
    let o = run(&["mutate", "--spec", &path]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));
    let path = scratch(
        "moves.mut",
        "cut 45 12\npairing 45 perm=(12) trans=0000\npairing 12 perm=() trans=0000\n",
    );
    assert_eq!(run(&["mutate", "--spec", &path]).status.code(), Some(1));
    assert_eq!(run(&["mutate"]).status.code(), Some(2));
}

#[test]
fn enumerate_small_cases() {
    let (r, _, code): (EnumerateReport, _, _) =
        json(&["enumerate", "box3", "--dim", "3", "--orientable"]);
    assert_eq!(code, 0);
    assert_eq!(r.classes.len(), 2);
    assert!(!r.capped);
    let mut types: Vec<_> = r.classes.iter().map(|c| c.flat_types.clone()).collect();
    types.sort();
    assert_eq!(types, vec![vec!["G2".to_string()], vec!["torus".to_string()]]);
    let (r, _, code): (EnumerateReport, _, _) = json(&["enumerate", "P4", "--dim", "3"]);
    assert_eq!(code, 0);
    assert!(r.classes.is_empty());
}

#[test]
fn enumerate_cap_marks_partial_output() {
    let (r, _, code): (EnumerateReport, _, _) =
        json(&["enumerate", "P4", "--dim", "4", "--max-classes", "3"]);
    assert_eq!(code, 1);
    assert!(r.capped);
    assert_eq!(r.classes.len(), 3);
    assert_eq!(run(&["enumerate", "P9", "--dim", "3"]).status.code(), Some(2));
}

#[test]
fn reports_round_trip() {
    let (r, text, _): (CheckReport, _, _) = json(&["check", &data("fig1_cube.col")]);
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let (r, text, _): (AnalyzeReport, _, _) = json(&["analyze", &data("symmetric.col")]);
    let back: AnalyzeReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(serde_json::to_string_pretty(&r).unwrap() + "\n", text);
    let (r, _, _): (MutateReport, _, _) = json(&["mutate", "--scenario", "Y"]);
    let back: MutateReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(back, r);
    assert_eq!(r.version, 1);
}
