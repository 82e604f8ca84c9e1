use std::io::Write as _;
use std::process::Command;

use irs_relay::cli::{read_csv, regenerate, run_with, OutputTable};

fn invoke(args: &[&str], env_seed: Option<&str>) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("irs-sim").chain(args.iter().copied());
    let code = run_with(argv, env_seed, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn config_file(body: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(body.as_bytes()).unwrap();
    f
}

fn meta_int(t: &OutputTable, key: &str) -> i64 {
    t.meta(key).and_then(|v| v.as_integer()).unwrap()
}

#[test]
fn empty_config_gives_defaults() {
    let f = config_file("");
    let path = f.path().to_str().unwrap();
    let (code, out, err) = invoke(&["run", "--config", path, "--trials", "2", "--methods", "ais"], None);
    assert_eq!(code, 0, "{err}");
    let t = OutputTable::from_csv(&out).unwrap();
    assert_eq!(meta_int(&t, "M"), 16);
    assert_eq!(meta_int(&t, "N"), 160);
    assert_eq!(t.meta("alpha").unwrap().as_float(), Some(2.4));
    assert_eq!(t.meta("snr_db").unwrap().as_float(), Some(30.0));
}

#[test]
fn zero_antennas_is_a_config_error() {
    let f = config_file("M = 0\n");
    let (code, out, err) = invoke(&["run", "--config", f.path().to_str().unwrap()], None);
    assert_eq!(code, 1);
    assert!(out.is_empty());
    assert!(err.contains("`M`"), "{err}");
}

#[test]
fn nested_tables_are_rejected() {
    let f = config_file("[geometry]\nx = 1\n");
    let (code, _, err) = invoke(&["run", "--config", f.path().to_str().unwrap()], None);
    assert_eq!(code, 1);
    assert!(err.contains("geometry"), "{err}");
}

#[test]
fn command_line_beats_file_beats_env() {
    let f = config_file("M = 16\nN = 32\nseed = 5\n");
    let path = f.path().to_str().unwrap();
    let args = ["run", "--config", path, "--set", "M=50", "--trials", "1", "--methods", "ais"];
    let (code, out, err) = invoke(&args, Some("99"));
    assert_eq!(code, 0, "{err}");
    let t = OutputTable::from_csv(&out).unwrap();
    assert_eq!(meta_int(&t, "M"), 50);
    assert_eq!(meta_int(&t, "seed"), 5);

    let (_, out, _) = invoke(&["run", "--set", "N=4", "--trials", "1", "--methods", "ais"], Some("99"));
    assert_eq!(meta_int(&OutputTable::from_csv(&out).unwrap(), "seed"), 99);
    let (_, out, _) = invoke(&["run", "--set", "N=4", "--trials", "1", "--methods", "ais", "--seed", "3"], Some("99"));
    assert_eq!(meta_int(&OutputTable::from_csv(&out).unwrap(), "seed"), 3);
    let (code, _, err) = invoke(&["run"], Some("not-a-seed"));
    assert_eq!(code, 1);
    assert!(err.contains("IRS_SIM_SEED"));
}

#[test]
fn csv_is_reproducible_and_round_trips() {
    let args = ["sweep-snr", "--trials", "5", "--set", "M=4", "--set", "N=8", "--set", "values=[0,20]"];
    let (code, first, err) = invoke(&args, None);
    assert_eq!(code, 0, "{err}");
    let (_, second, _) = invoke(&args, None);
    assert_eq!(first, second);

    let t = OutputTable::from_csv(&first).unwrap();
    assert_eq!(t.rows.len(), 2);
    assert_eq!(t.header[0], "snr_db");
    let mut again = Vec::new();
    irs_relay::cli::render_table(&t, irs_relay::cli::OutputFormat::Csv, &mut again).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), first);
}

#[test]
fn table_regenerates_from_its_metadata() {
    let args = ["sweep-distance", "--trials", "3", "--set", "M=2", "--set", "N=4", "--set", "values=[30,60]"];
    let (code, out, err) = invoke(&args, None);
    assert_eq!(code, 0, "{err}");
    let t = OutputTable::from_csv(&out).unwrap();
    assert_eq!(regenerate(&t).unwrap(), t);
}

#[test]
fn jsonl_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flops.jsonl");
    let (code, out, err) = invoke(&["flops", "--format", "jsonl", "--out", path.to_str().unwrap()], None);
    assert_eq!(code, 0, "{err}");
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0]["metadata"]["command"], "flops");
    assert_eq!(lines[1]["N"], 100.0);

    let csv = dir.path().join("flops.csv");
    invoke(&["flops", "--out", csv.to_str().unwrap()], None);
    assert_eq!(read_csv(&csv).unwrap().rows.len(), 10);
}

#[test]
fn unwritable_output_is_runtime_error() {
    let (code, _, err) = invoke(&["flops", "--out", "/nonexistent/dir/t.csv"], None);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/dir/t.csv"));
}

#[test]
fn unknown_subcommand_prints_usage() {
    let (code, _, err) = invoke(&["plot"], None);
    assert_eq!(code, 1);
    assert!(err.contains("Usage"));
}

#[test]
fn flops_columns_are_ordered() {
    let (code, out, _) = invoke(&["flops"], None);
    assert_eq!(code, 0);
    let t = OutputTable::from_csv(&out).unwrap();
    assert_eq!(t.column("N").unwrap(), (1..=10).map(|k| 100.0 * k as f64).collect::<Vec<_>>());
    for row in &t.rows {
        assert!(row[1] > row[2] && row[2] > row[3], "{row:?}");
    }
    for col in ["ais", "nsp", "irses"] {
        let c = t.column(col).unwrap();
        assert!(c.windows(2).all(|w| w[1] > w[0]));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_irs-sim");
    let status = Command::new(bin).arg("bogus").output().unwrap();
    assert_eq!(status.status.code(), Some(1));
    let ok = Command::new(bin).args(["flops", "--set", "values=[100]"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("N,ais,nsp,irses"));
    let env = Command::new(bin)
        .args(["run", "--trials", "1", "--set", "N=4", "--methods", "ais"])
        .env("IRS_SIM_SEED", "42")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&env.stdout).contains("# seed = 42"));
}
