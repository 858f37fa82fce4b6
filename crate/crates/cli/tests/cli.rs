use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qcorr_cli::table::Table;

fn qcorr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcorr"))
        .args(args)
        .env_remove("QCORR_THREADS")
        .output()
        .expect("run qcorr")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_text_report() {
    let o = qcorr(&["analyze", "0.5", "-0.4", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    for line in [
        "QG = 0.4",
        "CG = 0.5",
        "TG = 0.6",
        "QE = 0.12978179493",
        "optimal axis = 1",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn analyze_json_report() {
    let o = qcorr(&[
        "analyze", "--format", "json", "--verify", "-0.8", "-0.8", "-0.8",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["QE"].as_f64().unwrap() - 0.6214109137647074).abs() < 1e-12);
    assert!((v["CE"].as_f64().unwrap() - 0.5310044064107188).abs() < 1e-12);
    assert_eq!(v["lambda"]["11"].as_f64().unwrap(), 0.8500000000000001);
    assert_eq!(v["optimal_axis"], 1);
}

#[test]
fn unphysical_state_exits_2() {
    let o = qcorr(&["analyze", "0.5", "0.4", "0.3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("λ11 = -0.05"), "{}", stderr(&o));
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(qcorr(&["analyze", "0.5"]).status.code(), Some(1));
    assert_eq!(qcorr(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(qcorr(&["analyze", "nan", "0", "0"]).status.code(), Some(1));
    assert_eq!(
        qcorr(&["sweep", "--family", "su2", "--from", "-2"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qcorr(&["sweep", "--family", "line"]).status.code(), Some(1));
    assert_eq!(qcorr(&["xxz", "--sites", "7"]).status.code(), Some(1));
    assert_eq!(
        qcorr(&["--threads", "0", "analyze", "0", "0", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(qcorr(&["--help"]).status.code(), Some(0));
    assert_eq!(qcorr(&["--version"]).status.code(), Some(0));
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("q.cfg");
    fs::write(
        &cfg,
        "# defaults\nc = 0.5,-0.4,0.3\nformat = json\nthreads = 1\n",
    )
    .unwrap();
    let o = qcorr(&["--config", path(&cfg), "analyze"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["QG"].as_f64().unwrap(), 0.4);

    // Flags win over the file.
    let o = qcorr(&[
        "--config",
        path(&cfg),
        "analyze",
        "--format",
        "text",
        "0.1",
        "0.1",
        "0.1",
    ]);
    assert!(stdout(&o).starts_with("c = (0.1, 0.1, 0.1)"));

    fs::write(&cfg, "no equals sign\n").unwrap();
    assert_eq!(
        qcorr(&["--config", path(&cfg), "analyze", "0", "0", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        qcorr(&["--config", "/nonexistent/q.cfg", "analyze", "0", "0", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sweep_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("su2.csv");
    let svg = dir.path().join("su2.svg");
    let o = qcorr(&[
        "sweep",
        "--family",
        "su2",
        "--steps",
        "201",
        "--output",
        path(&csv),
        "--plot",
        path(&svg),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.contains("# tg_kink"), "{summary}");
    assert!(
        summary.contains("# te_tg_crossing x=-0.828654003456"),
        "{summary}"
    );

    let text = fs::read_to_string(&csv).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("x,c1,c2,c3,physical,QE,CE,TE,QG,CG,TG\n"));
    let table = Table::read(text.as_bytes()).unwrap();
    let xs = table.column("x").unwrap();
    assert_eq!(xs.len(), 201);
    assert_eq!(xs[0], Some(-1.0));
    let tg = table.column("TG").unwrap();
    assert_eq!(tg[0], Some(1.5));
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn sweep_marks_unphysical_rows() {
    let o = qcorr(&[
        "sweep", "--family", "line", "--start", "0,0,0", "--end", "1,1,1", "--steps", "5",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1], "0,0,0,0,true,0,0,0,0,0,0");
    assert_eq!(rows[5], "1,1,1,1,false,,,,,,");
}

#[test]
fn sweep_single_point() {
    let o = qcorr(&["sweep", "--family", "u1", "--from", "0.3", "--to", "0.3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 2);
}

#[test]
fn xxz_sweep_reports_transitions() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("xxz.csv");
    let o = qcorr(&[
        "xxz",
        "--sites",
        "6",
        "--from",
        "-1.5",
        "--to",
        "1.5",
        "--steps",
        "61",
        "--output",
        path(&csv),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let summary = stdout(&o);
    assert!(summary.contains("# transitions: 2"), "{summary}");
    assert!(summary.contains("# first_order delta=1"), "{summary}");

    let table = Table::read(fs::File::open(&csv).unwrap()).unwrap();
    let status = table.headers.iter().position(|h| h == "status").unwrap();
    assert!(table.records.iter().all(|r| &r[status] == "ok"));
    let energy = table.column("energy_density").unwrap();
    assert_eq!(energy[60], Some(-0.75));
}

#[test]
fn solver_failure_exits_3_with_partial_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("xxz.csv");
    let o = qcorr(&[
        "xxz",
        "--sites",
        "8",
        "--from",
        "0",
        "--to",
        "0.5",
        "--steps",
        "5",
        "--dense-limit",
        "0",
        "--max-iterations",
        "3",
        "--output",
        path(&csv),
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    let table = Table::read(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(table.records.len(), 5);
    let status = table.column_index("status").unwrap();
    assert!(table
        .records
        .iter()
        .all(|r| r[status].starts_with("error: Lanczos did not converge")));
    assert!(stdout(&o).contains("# transitions: skipped"));
}

#[test]
fn verify_is_deterministic_and_fault_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = qcorr(&[
            "verify",
            "--seed",
            "3",
            "--count",
            "3000",
            "--output",
            path(p),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    assert_eq!(v["tg_dual_path"]["checked"], 3000);

    let o = qcorr(&[
        "verify",
        "--seed",
        "3",
        "--count",
        "500",
        "--inject-fault",
        "tg-min",
    ]);
    assert_eq!(o.status.code(), Some(4));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["tg_dual_path"]["failed"].as_u64().unwrap() > 0);
}

#[test]
fn thread_count_does_not_change_output() {
    let one = qcorr(&["--threads", "1", "verify", "--count", "1000"]);
    let two = qcorr(&["--threads", "2", "verify", "--count", "1000"]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, two.stdout);
}

#[test]
fn plot_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    fs::write(&csv, "x,y,z\n0,1,\n1,2,5\n2,,6\n").unwrap();
    let o = qcorr(&[
        "plot",
        "--input",
        path(&csv),
        "--x",
        "x",
        "--y",
        "y,z",
        "--output",
        path(&svg),
        "--title",
        "a<b",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let doc = fs::read_to_string(&svg).unwrap();
    assert!(doc.contains("a&lt;b"));

    let missing = qcorr(&[
        "plot",
        "--input",
        path(&csv),
        "--x",
        "x",
        "--y",
        "w",
        "--output",
        path(&svg),
    ]);
    assert_eq!(missing.status.code(), Some(1));
    fs::write(&csv, "x,y\n0,abc\n").unwrap();
    let bad = qcorr(&[
        "plot",
        "--input",
        path(&csv),
        "--x",
        "x",
        "--y",
        "y",
        "--output",
        path(&svg),
    ]);
    assert_eq!(bad.status.code(), Some(1));
    fs::write(&csv, "").unwrap();
    let empty = qcorr(&[
        "plot",
        "--input",
        path(&csv),
        "--x",
        "x",
        "--y",
        "y",
        "--output",
        path(&svg),
    ]);
    assert_eq!(empty.status.code(), Some(1));
}
