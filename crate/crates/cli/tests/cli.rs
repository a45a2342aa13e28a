use std::path::Path;
use std::process::{Command, Output};

use selmer_cli::{read_column, table_rows, Row};
use selmer_core::mertens::{fit_decay, DecayFit};
use selmer_core::{MertensConfig, ReportKind, SelbergInstance};

fn selmer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_selmer"))
        .args(args)
        .env_remove("SELMER_THREADS")
        .output()
        .expect("run selmer")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn table_shape_and_accuracy() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = selmer(&["table", "--instance", "zeta", "--kind", "mertens3", "--xs", "1e2:1e6:log10", "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let text = std::fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value,main_term,constant,residual,rel_residual,imag_residue,elapsed_s");
    assert_eq!(lines.len(), 6);
    let rel = read_column(&out, "rel_residual").unwrap();
    let (x, r) = rel[4];
    assert_eq!(x, 1e6);
    assert!(r.abs() <= 2e-3);
}

#[test]
fn exit_codes_and_no_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");

    let o = selmer(&["table", "--instance", "nope", "--kind", "pnt", "--xs", "10", "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    for name in ["zeta", "dirichlet", "dedekind", "rankin-delta", "rankin"] {
        assert!(err.contains(name), "{err}");
    }
    assert!(!out.exists());

    let o = selmer(&["table", "--instance", "rankin-delta", "--tau-n", "1000", "--kind", "pnt", "--xs", "100,1e4", "--out", arg(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());

    let missing = dir.path().join("no").join("t.csv");
    let o = selmer(&["table", "--instance", "zeta", "--kind", "pnt", "--xs", "10", "--out", arg(&missing)]);
    assert_eq!(o.status.code(), Some(4));

    let o = selmer(&["table", "--instance", "dirichlet", "--d", "-4", "--kind", "mertens4", "--xs", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = selmer(&["table", "--instance", "dirichlet", "--d", "9", "--kind", "pnt", "--xs", "10"]);
    assert_eq!(o.status.code(), Some(2));
    let o = selmer(&["fit", "--in", arg(&dir.path().join("absent.csv"))]);
    assert_eq!(o.status.code(), Some(4));
    // nothing but the temp dir itself
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn verify_passes() {
    let o = selmer(&["verify", "--tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    for name in ["circle_mean", "circle_moment", "ein_closed_form", "gamma_euler", "ein_e1_identity"] {
        assert!(s.contains(name));
    }
    assert!(!s.contains("FAIL"));
    let o = selmer(&["verify", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn constants_for_zeta() {
    let o = selmer(&["constants", "--instance", "zeta", "--pmax", "1e8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = v["m"]["value"].as_f64().unwrap();
    assert!((m - 0.261_497_2).abs() <= 1e-4);
    assert_eq!(v["m"]["p_max"].as_u64(), Some(100_000_000));
    assert_eq!(v["leading"]["source"], "exact");
    let text = stdout(&selmer(&["constants", "--instance", "zeta", "--pmax", "1e5", "--umax", "1e5", "--xmax", "1e5"]));
    assert!(text.contains("M1 integral"));
}

#[test]
fn fit_recovers_synthetic_decay() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("synthetic.csv");
    let rows: Vec<Row> = (2..=8)
        .map(|k| {
            let x = 10f64.powi(k);
            let r = (-0.7 * x.ln().sqrt()).exp();
            Row {
                x,
                value: r,
                main_term: 0.0,
                constant: 0.0,
                residual: r,
                rel_residual: r,
                imag_residue: 0.0,
                elapsed_s: 0.0,
            }
        })
        .collect();
    std::fs::write(&path, selmer_cli::rows_to_csv(&rows).unwrap()).unwrap();
    let o = selmer(&["fit", "--in", arg(&path), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let fit: DecayFit = serde_json::from_slice(&o.stdout).unwrap();
    assert!((fit.c_estimate - 0.7).abs() <= 1e-6);
}

#[test]
fn table_then_fit_round_trips_bit_identically() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pnt.csv");
    let o = selmer(&["table", "--instance", "zeta", "--kind", "pnt", "--xs", "1e3:1e6:log10/2", "--out", arg(&path)]);
    assert_eq!(o.status.code(), Some(0));
    let o = selmer(&["fit", "--in", arg(&path), "--column", "rel_residual", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let from_file: DecayFit = serde_json::from_slice(&o.stdout).unwrap();

    let xs = selmer_cli::parse_grid("1e3:1e6:log10/2").unwrap();
    let rows = table_rows(&SelbergInstance::zeta(), MertensConfig::default(), ReportKind::Pnt, &xs).unwrap();
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.x, r.rel_residual)).collect();
    let in_memory = fit_decay(&pts).unwrap();
    assert_eq!(from_file, in_memory);
}

#[test]
fn json_mirrors_csv_fields() {
    let o = selmer(&["table", "--instance", "dedekind", "--d", "-4", "--kind", "mertens3", "--xs", "10,100", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(rows.len(), 2);
    let keys: Vec<&str> = rows[0].keys().map(String::as_str).collect();
    let mut expect = selmer_cli::CSV_HEADER.to_vec();
    expect.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, expect);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "# dirichlet run\ninstance = dirichlet\nd = -4\nkind = mertens2\nxs = 1e3,1e4\npmax = 1e4\n").unwrap();
    let a = selmer(&["table", "--config", arg(&cfg)]);
    assert_eq!(a.status.code(), Some(0), "{a:?}");
    assert_eq!(stdout(&a).lines().count(), 3);
    let b = selmer(&["table", "--config", arg(&cfg), "--d", "5"]);
    assert_eq!(b.status.code(), Some(0));
    assert_ne!(stdout(&a), stdout(&b));
    let direct = selmer(&["table", "--instance", "dirichlet", "--d", "5", "--kind", "mertens2", "--xs", "1e3,1e4", "--pmax", "1e4"]);
    let strip = |s: String| -> Vec<String> {
        s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    assert_eq!(strip(stdout(&b)), strip(stdout(&direct)));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(selmer(&["verify", "--config", arg(&cfg)]).status.code(), Some(2));
}

#[test]
fn thread_flag_beats_environment() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_selmer"));
        c.args(["table", "--instance", "zeta", "--kind", "pnt", "--xs", "1e5"]);
        if let Some(f) = flag {
            c.args(["--threads", f]);
        }
        match env {
            Some(e) => c.env("SELMER_THREADS", e),
            None => c.env_remove("SELMER_THREADS"),
        };
        c.output().unwrap()
    };
    assert_eq!(run(Some("0"), None).status.code(), Some(2));
    assert_eq!(run(Some("0"), Some("2")).status.code(), Some(0));
    assert_eq!(run(Some("3"), None).status.code(), Some(0));
}

#[test]
fn perron_report_for_zeta() {
    let o = selmer(&["perron", "--x", "1e3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["gap"].as_f64().unwrap() <= 0.05);
    assert!(v["integral_im"].as_f64().unwrap().abs() <= 1e-6);
    let o = selmer(&["perron", "--instance", "dedekind", "--d", "-4"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn rankin_from_coefficient_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("delta.txt");
    let table = selmer_core::CoefficientTable::from_tau(&selmer_core::lfunc::tau_table(20_000).unwrap()).unwrap();
    std::fs::write(&path, table.to_text()).unwrap();
    let o = selmer(&["table", "--instance", "rankin", "--coeff-f", arg(&path), "--leading", "1.0", "--kind", "mertens2", "--xs", "1e3,1e4", "--pmax", "2e4"]);
    assert_eq!(o.status.code(), Some(0), "{o:?}");
    let file_rows = stdout(&o);
    let o = selmer(&["table", "--instance", "rankin-delta", "--tau-n", "20000", "--leading", "1.0", "--kind", "mertens2", "--xs", "1e3,1e4", "--pmax", "2e4"]);
    let strip = |s: &str| -> Vec<String> { s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect() };
    assert_eq!(strip(&file_rows), strip(&stdout(&o)));
}
