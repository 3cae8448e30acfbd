use std::path::Path;
use std::process::{Command, Output};

use subsel_bench::runner::read_csv;
use subsel_bench::CSV_HEADER;
use subsel_core::{gaussian_matrix, ssel, Matrix};

fn subsel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_subsel"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_writes_documented_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = subsel(&["run", "--m", "3", "--n", "12", "--k", "3", "--trials", "1", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER.join(","));
    let rows = read_csv(text.as_bytes()).unwrap();
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| r.bounds_ok && r.k == 3 && r.trial == 0));

    // The summary goes to stderr, one line per (algorithm, k) plus a header.
    let summary = String::from_utf8(o.stderr).unwrap();
    assert_eq!(summary.lines().count(), 7);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(
        &cfg,
        "# small graph sweep\ngenerator = graph\nm = 4\nn = 9\nk_values = 4, 6\ntrials = 2\nalgos = Dominant-split-greedy, CPQR\n",
    )
    .unwrap();
    let out = dir.path().join("a.csv");
    let o = subsel(&["run", "--config", path(&cfg), "--trials", "3", "--out", path(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = read_csv(std::fs::File::open(&out).unwrap()).unwrap();
    assert_eq!(rows.len(), 2 * 2 * 3);
    assert_eq!(rows[0].algorithm, "Dominant-split-greedy");
    assert_eq!(rows.last().unwrap().algorithm, "CPQR");
}

#[test]
fn usage_errors_exit_1() {
    for args in [
        &["run", "--m", "5", "--n", "4"][..],
        &["run", "--algos", "Maxvol"],
        &["run", "--generator", "lattice"],
        &["run", "--m", "3", "--n", "8", "--k", "9"],
        &["run", "--generator", "graph", "--m", "3", "--n", "7"],
        &["frobnicate"],
        &["run", "--trials"],
        &["run", "--config", "/nonexistent/subsel.cfg"],
    ] {
        let o = subsel(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn verify_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("verify.csv");
    let o = subsel(&[
        "verify", "--m", "3", "--n", "15", "--k", "3", "--k-max", "7", "--k-step", "2", "--trials", "2", "--c", "1.2",
        "--out", path(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().ends_with(",swaps,swap_bound,status"));
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), 2 * 6 * 3);
    assert!(body.iter().all(|l| l.ends_with(",pass")));
}

#[test]
fn gen_then_select() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.ssel");
    let o = subsel(&["gen", "--m", "4", "--n", "30", "--seed", "3", "--out", path(&file)]);
    assert!(o.status.success());
    assert_eq!(ssel::load(&file).unwrap(), gaussian_matrix(4, 30, 3).unwrap());

    let o = subsel(&["select", path(&file), "--k", "6"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let picked: Vec<usize> = String::from_utf8(o.stdout)
        .unwrap()
        .split_whitespace()
        .map(|t| t.parse().unwrap())
        .collect();
    assert_eq!(picked.len(), 6);
    assert!(picked.windows(2).all(|w| w[0] < w[1]) && picked[5] < 30);

    let o = subsel(&["gen", "--generator", "graph", "--m", "5", "--n", "12", "--out", path(&file)]);
    assert!(o.status.success());
    let g = ssel::load(&file).unwrap();
    assert_eq!((g.rows(), g.cols()), (5, 12));
}

#[test]
fn singular_input_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("flat.ssel");
    let x = Matrix::from_row_slice(2, 4, &[1.0, 2.0, 3.0, 4.0, 2.0, 4.0, 6.0, 8.0]).unwrap();
    ssel::save(&file, &x).unwrap();
    let o = subsel(&["select", path(&file), "--k", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn corrupt_matrix_file_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.ssel");
    std::fs::write(&file, b"SSEL\x02\x00\x00\x00").unwrap();
    let o = subsel(&["select", path(&file), "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let o = subsel(&["select", "/nonexistent/x.ssel", "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
}
