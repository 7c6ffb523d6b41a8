use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_antiwell")).args(args).output().expect("spawn antiwell")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(str::to_string).collect();
    let rows = lines.map(|l| l.split(',').map(str::to_string).collect()).collect();
    (header, rows)
}

#[test]
fn spectrum_csv_has_header_and_requested_rows() {
    let out = run(&["--v0", "5", "--n-states", "4", "spectrum"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["index", "energy", "kind", "nodes", "uncertainty", "c1_residual"]);
    assert_eq!(rows.len(), 4);
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[0], i.to_string());
        assert_eq!(row[3], i.to_string());
        let e: f64 = row[1].parse().unwrap();
        assert!(e > -5.0);
        let digits = row[1].trim_start_matches('-').replace('.', "");
        assert!(digits.trim_start_matches('0').len() <= 12, "{}", row[1]);
    }
}

#[test]
fn json_matches_csv() {
    let csv = run(&["--v0", "4.0998", "--n-states", "7", "spectrum"]);
    let json = run(&["--v0", "4.0998", "--n-states", "7", "--format", "json", "spectrum"]);
    assert_eq!(json.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(doc["schema"], 1);
    assert_eq!(doc["command"], "spectrum");
    let (_, rows) = csv_rows(&stdout(&csv));
    let jrows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), jrows.len());
    for (c, j) in rows.iter().zip(jrows) {
        assert_eq!(c[1].parse::<f64>().unwrap(), j["energy"].as_f64().unwrap());
        assert_eq!(c[2], j["kind"].as_str().unwrap());
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["--v0", "12.7396", "--n-states", "13", "spectrum"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn special_g_root_feeds_back_as_barrier_top_ground_state() {
    let out = run(&["special", "g", "--count", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    let col = header.iter().position(|h| h == "v0").unwrap();
    let v0 = rows[0][col].clone();
    assert!((v0.parse::<f64>().unwrap() - 0.0655027).abs() < 1e-6);

    let spec = run(&["--v0", &v0, "--n-states", "2", "spectrum"]);
    let (_, rows) = csv_rows(&stdout(&spec));
    assert_eq!(rows[0][2], "barrier-top");
    assert_eq!(rows[0][1], v0);
}

#[test]
fn special_both_reports_numerical_failure() {
    let out = run(&["special", "both", "--count", "1"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
}

#[test]
fn wavefunction_vanishes_at_walls() {
    let out = run(&["--v0", "1", "--samples", "9", "wavefunction", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = csv_rows(&stdout(&out));
    let x = header.iter().position(|h| h == "x").unwrap();
    let psi = header.iter().position(|h| h == "psi").unwrap();
    let samples: Vec<&Vec<String>> = rows.iter().filter(|r| r[0] == "sample").collect();
    assert_eq!(samples.len(), 9);
    assert_eq!(samples[0][x], "-6");
    assert_eq!(samples[8][x], "6");
    assert_eq!(samples[0][psi], "0");
    assert_eq!(samples[8][psi], "0");
}

#[test]
fn oracle_agrees_on_small_grid() {
    let out = run(&["--v0", "5", "--n-states", "3", "--grid-n", "2000", "oracle"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = csv_rows(&stdout(&out));
    let dev = header.iter().position(|h| h == "deviation").unwrap();
    let extrapolated: Vec<f64> =
        rows.iter().filter(|r| r[0] == "extrapolated").map(|r| r[dev].parse().unwrap()).collect();
    assert_eq!(extrapolated.len(), 3);
    assert!(extrapolated.iter().all(|d| d.abs() < 1e-3));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("antiwell-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("spectrum.json");
    let p = path.to_str().unwrap();
    let out = run(&["--v0", "2", "--format", "json", "--output", p, "spectrum"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 6);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["spectrum"],
        vec!["--v0", "1", "--b", "7", "spectrum"],
        vec!["--v0", "-1", "spectrum"],
        vec!["--v0", "1", "wavefunction", "9"],
        vec!["--v0", "1", "--n-states", "0", "spectrum"],
        vec!["--v0", "1", "--format", "xml", "spectrum"],
        vec!["--v0", "1", "--grid-n", "4", "oracle"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table1_lists_every_entry() {
    let out = run(&["table1"]);
    // a few published entries are known not to reproduce
    assert_eq!(out.status.code(), Some(3));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header.last().unwrap(), "pass");
    assert!(rows.len() >= 66);
    let passed = rows.iter().filter(|r| r.last().unwrap() == "yes").count();
    assert!(passed >= 63, "{passed}");
}
