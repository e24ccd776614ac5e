//! End-to-end runs of the `hwatson` binary.

use std::path::Path;
use std::process::{Command, Output};

fn hwatson(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hwatson"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Splits CSV text into comment lines, header and rows.
fn parse(text: &str) -> (Vec<String>, Vec<String>, Vec<Vec<String>>) {
    let comments = text
        .lines()
        .filter(|l| l.starts_with('#'))
        .map(String::from)
        .collect();
    let mut rd = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (comments, header, rows)
}

fn column_tolerance(name: &str) -> f64 {
    match name {
        "theta_num" => 1e-9,
        "theta_hat" | "theta_G" => 1e-11,
        _ => 1e-12,
    }
}

#[test]
fn table1_matches_golden_file() {
    let out = hwatson(&["table1"]);
    assert!(out.status.success());
    let golden = std::fs::read_to_string(
        Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/table1.csv"),
    )
    .unwrap();
    let (gc, gh, gr) = parse(&golden);
    let (c, h, r) = parse(&stdout(&out));
    assert_eq!(c, gc);
    assert_eq!(h, gh);
    assert_eq!(r.len(), gr.len());
    for (row, grow) in r.iter().zip(&gr) {
        for ((cell, gcell), name) in row.iter().zip(grow).zip(&h) {
            match (cell.parse::<f64>(), gcell.parse::<f64>()) {
                (Ok(x), Ok(g)) => {
                    let scale = g.abs().max(f64::MIN_POSITIVE);
                    assert!(
                        (x - g).abs() <= column_tolerance(name) * scale,
                        "{name}: {x} vs {g}"
                    );
                }
                _ => assert_eq!(cell, gcell, "{name}"),
            }
        }
    }
}

#[test]
fn table1_marks_missing_cells() {
    let (comments, header, rows) = parse(&stdout(&hwatson(&["table1"])));
    let col = |n: &str| header.iter().position(|h| h == n).unwrap();
    assert_eq!(rows[0][col("theta_num")], "");
    assert!(comments
        .iter()
        .any(|c| c.contains("precision-loss") && c.contains("t=0.1")));
    for t_row in [8, 9] {
        assert_eq!(rows[t_row][col("theta_G")], "");
    }
    assert_eq!(rows[6][col("branch")], "near_one");
    assert!(comments.contains(&"# schema_version=1".to_string()));
}

#[test]
fn exit_codes() {
    assert_eq!(
        hwatson(&["theta", "-r", "0.5", "-t", "1"]).status.code(),
        Some(0)
    );
    assert_eq!(
        hwatson(&["theta", "-r", "-1", "-t", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hwatson(&["theta", "-r", "1", "-t", "0"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hwatson(&["plotdata", "--figure", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hwatson(&["density", "--a-grid", "0,1"]).status.code(),
        Some(2)
    );
    assert_eq!(
        hwatson(&["errorsweep", "--t-grid", "0.1"]).status.code(),
        Some(2)
    );
    assert_eq!(hwatson(&["--tol", "0", "table1"]).status.code(), Some(2));
    // the quadrature cannot meet this tolerance in its interval budget
    assert_eq!(
        hwatson(&["--tol", "1e-300", "theta", "-r", "0.5", "-t", "1", "--method", "numeric"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn diagnostics_go_to_stderr() {
    let out = hwatson(&["theta", "-r", "0.5", "-t", "2.6", "--method", "gerhold"]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("domain-invalid"));
    let (_, header, rows) = parse(&stdout(&out));
    assert_eq!(rows.len(), 1);
    assert_eq!(
        rows[0][header.iter().position(|h| h == "valid").unwrap()],
        "0"
    );
    assert_eq!(
        rows[0][header.iter().position(|h| h == "value").unwrap()],
        ""
    );
}

#[test]
fn theta_all_methods() {
    let (_, header, rows) = parse(&stdout(&hwatson(&["theta", "-r", "0.5", "-t", "1.0"])));
    let v = header.iter().position(|h| h == "value").unwrap();
    let value = |m: &str| {
        rows.iter().find(|r| r[0] == m).unwrap()[v]
            .parse::<f64>()
            .unwrap()
    };
    assert!((value("asym") - 0.2722).abs() < 1e-4);
    assert!((value("gerhold") - 0.3062).abs() < 1e-4);
    assert!((value("numeric") - 0.2685).abs() < 1e-4);
    // at ρ = 1 the subleading factor is 1 − t/70
    let (_, header, rows) = parse(&stdout(&hwatson(&[
        "theta", "-r", "1", "-t", "1", "--method", "asym2",
    ])));
    let (_, _, lead) = parse(&stdout(&hwatson(&[
        "theta", "-r", "1", "-t", "1", "--method", "asym",
    ])));
    let v = header.iter().position(|h| h == "value").unwrap();
    let ratio = rows[0][v].parse::<f64>().unwrap() / lead[0][v].parse::<f64>().unwrap();
    assert!((ratio - (1.0 - 1.0 / 70.0)).abs() < 1e-14);
}

#[test]
fn csv_round_trips_library_values() {
    let (_, header, rows) = parse(&stdout(&hwatson(&[
        "plotdata",
        "--figure",
        "F",
        "--grid",
        "1e-3:1e3:25:log",
    ])));
    assert_eq!(header, ["rho", "F", "F_small_rho", "F_large_rho"]);
    for row in rows {
        let rho: f64 = row[0].parse().unwrap();
        let f: f64 = row[1].parse().unwrap();
        assert_eq!(
            f.to_bits(),
            hartman_watson::hw_core::f(rho).unwrap().to_bits()
        );
    }
}

#[test]
fn density_rows_follow_grid_order() {
    let (_, header, rows) = parse(&stdout(&hwatson(&[
        "density", "--a-grid", "2,1,0.5", "-t", "0.1",
    ])));
    let a: Vec<f64> = rows.iter().map(|r| r[0].parse().unwrap()).collect();
    assert_eq!(a, [2.0, 1.0, 0.5]);
    let j = header.iter().position(|h| h == "J").unwrap();
    let g = header.iter().position(|h| h == "g").unwrap();
    assert_eq!(rows[1][j], "0");
    assert!((rows[1][g].parse::<f64>().unwrap() - 3f64.sqrt() / 2.0).abs() < 1e-12);
    let j2: f64 = rows[0][j].parse().unwrap();
    assert!((4.0 * j2 / hartman_watson::gbm_density::rate_jbs(2.0).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn errorsweep_passes_on_default_grid() {
    let (_, header, rows) = parse(&stdout(&hwatson(&["errorsweep"])));
    assert_eq!(rows.len(), 18);
    let p = header.iter().position(|h| h == "pass").unwrap();
    assert!(rows.iter().all(|r| r[p] == "1"));
}

#[test]
fn json_output_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    let out = hwatson(&[
        "--format",
        "json",
        "--out",
        path.to_str().unwrap(),
        "theta",
        "-r",
        "0.5",
        "-t",
        "0.1",
        "--method",
        "all",
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["command"], "theta");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.as_array().unwrap().len() == 8));
    assert!(rows[3][4].is_null());
    assert!(v["flags"]
        .as_array()
        .unwrap()
        .iter()
        .any(|f| f.as_str().unwrap().contains("precision-loss")));
}

#[test]
fn theta_vs_t_stays_inside_band() {
    let (_, header, rows) = parse(&stdout(&hwatson(&[
        "plotdata",
        "--figure",
        "theta_vs_t",
        "--r-grid",
        "0.5,1",
        "--grid",
        "0.2:3:8:lin",
    ])));
    let col = |n: &str| header.iter().position(|h| h == n).unwrap();
    for r in rows {
        let ratio: f64 = r[col("ratio_minus_1")].parse().unwrap();
        let hi: f64 = r[col("band_hi")].parse().unwrap();
        assert!(ratio.abs() <= hi + 1e-9);
    }
}
