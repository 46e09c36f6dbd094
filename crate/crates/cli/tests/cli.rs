use std::path::Path;
use std::process::{Command, Output};

fn lpcvt(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lpcvt"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

#[test]
fn optimize_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = lpcvt(
        &["optimize", "--seeds", "12", "--iters", "5", "--out", "run", "--export-rvd", "true"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let seeds = read(dir.path(), "run.seeds.txt");
    assert_eq!(seeds.lines().count(), 12);
    let trace = read(dir.path(), "run.trace.csv");
    let mut lines = trace.lines();
    assert_eq!(lines.next(), Some("iter,F,grad_inf_norm,step_size"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert!(!rows.is_empty() && rows.len() <= 5);
    for w in rows.windows(2) {
        assert!(w[1][1] <= w[0][1]);
    }
    assert!(read(dir.path(), "run.rvd.obj").contains("o cell_0"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for out in ["a", "b"] {
        let o = lpcvt(&["optimize", "--seeds", "20", "--iters", "8", "--rng-seed", "3", "--out", out], dir.path());
        assert!(o.status.success());
    }
    assert_eq!(read(dir.path(), "a.seeds.txt"), read(dir.path(), "b.seeds.txt"));
    assert_eq!(read(dir.path(), "a.trace.csv"), read(dir.path(), "b.trace.csv"));
}

#[test]
fn zero_iterations_gives_header_only_trace() {
    let dir = tempfile::tempdir().unwrap();
    let o = lpcvt(&["optimize", "--seeds", "4", "--iters", "0", "--out", "z"], dir.path());
    assert!(o.status.success());
    assert_eq!(read(dir.path(), "z.trace.csv"), "iter,F,grad_inf_norm,step_size\n");
}

#[test]
fn quad_mesh_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("quad.obj"),
        "v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n",
    )
    .unwrap();
    let o = lpcvt(&["energy", "--mode", "surface", "--domain", "quad.obj", "--seeds", "3"], dir.path());
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bad_flags_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(lpcvt(&["optimize", "--p", "two"], dir.path()).status.code(), Some(1));
    assert_eq!(lpcvt(&["optimize", "--mode", "surface"], dir.path()).status.code(), Some(1));
    assert_eq!(lpcvt(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn energy_of_a_centered_seed() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("w.txt"), "0.5 0.5 0.5\n").unwrap();
    let o = lpcvt(&["energy", "--seeds-file", "w.txt"], dir.path());
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let f: f64 = text.lines().next().unwrap().split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((f - 0.25).abs() < 1e-14);
}

#[test]
fn fd_check_passes() {
    let dir = tempfile::tempdir().unwrap();
    let o = lpcvt(&["fd-check", "--seeds", "10", "--rng-seed", "5", "--p", "4"], dir.path());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(o.status.success(), "{text}");
    assert!(text.contains("max rel. error"));
}

#[test]
fn config_file_supplies_settings() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"seeds": 6, "iters": 2, "out": "cfg"}"#).unwrap();
    let o = lpcvt(&["optimize", "--config", "cfg.json"], dir.path());
    assert!(o.status.success());
    assert_eq!(read(dir.path(), "cfg.seeds.txt").lines().count(), 6);

    std::fs::write(dir.path().join("bad.json"), r#"{"seedz": 6}"#).unwrap();
    assert_eq!(lpcvt(&["optimize", "--config", "bad.json"], dir.path()).status.code(), Some(1));
}
