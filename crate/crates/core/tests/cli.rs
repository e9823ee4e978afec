use std::collections::HashSet;
use std::path::Path;
use std::process::{Command, Output};

fn chh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chh"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn tuples(json_lines: &[u8]) -> HashSet<(u64, u64)> {
    String::from_utf8_lossy(json_lines)
        .lines()
        .map(|l| {
            let v: serde_json::Value = serde_json::from_str(l).unwrap();
            (
                v["primary"].as_u64().unwrap(),
                v["secondary"].as_u64().unwrap(),
            )
        })
        .collect()
}

#[test]
fn truncated_binary_reports_offset() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.bin");
    std::fs::write(&input, [0u8; 7]).unwrap();
    let o = chh(&[
        "run",
        "--algo",
        "exact",
        "--phi1",
        "0.1",
        "--phi2",
        "0.1",
        "--input",
        path(&input),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("offset 4"), "{}", stderr(&o));
}

#[test]
fn malformed_csv_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.csv");
    std::fs::write(&input, "x,y\n1,2\n3,z\n").unwrap();
    let o = chh(&[
        "run",
        "--algo",
        "exact",
        "--phi1",
        "0.1",
        "--phi2",
        "0.1",
        "--format",
        "csv",
        "--input",
        path(&input),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn generate_then_run_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("s.bin");
    let o = chh(&[
        "generate",
        "--n",
        "1000",
        "--seed",
        "7",
        "--out",
        path(&data),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(std::fs::metadata(&data).unwrap().len(), 8000);

    let exact_out = dir.path().join("exact.jsonl");
    let o = chh(&[
        "run",
        "--algo",
        "exact",
        "--phi1",
        "0.01",
        "--phi2",
        "0.05",
        "--input",
        path(&data),
        "--out",
        path(&exact_out),
        "--verbose",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("exact: 1000 pairs"), "{}", stderr(&o));
    let exact = tuples(&std::fs::read(&exact_out).unwrap());
    assert!(!exact.is_empty());

    for pipelined in [false, true] {
        let mut args = vec![
            "run",
            "--algo",
            "csschh",
            "--k1",
            "4096",
            "--k2",
            "4096",
            "--phi1",
            "0.01",
            "--phi2",
            "0.05",
            "--input",
            path(&data),
        ];
        if pipelined {
            args.push("--pipelined");
        }
        let o = chh(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        let sketch = tuples(&o.stdout);
        assert!(sketch.is_superset(&exact));
    }
}

#[test]
fn csv_generation_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("s.csv");
    let o = chh(&[
        "generate",
        "--n",
        "500",
        "--m1",
        "20",
        "--m2",
        "5",
        "--format",
        "csv",
        "--out",
        path(&data),
    ]);
    assert!(o.status.success());
    let o = chh(&[
        "run",
        "--algo",
        "mgchh",
        "--s1",
        "64",
        "--s2",
        "8",
        "--phi1",
        "0.05",
        "--phi2",
        "0.2",
        "--format",
        "csv",
        "--input",
        path(&data),
        "--output",
        "csv",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("primary,secondary,est_freq"));
    assert!(text.lines().count() > 1);
}

#[test]
fn unknown_algorithm_is_a_usage_error() {
    let o = chh(&["run", "--algo", "lossy", "--phi1", "0.1", "--phi2", "0.1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("lossy"));
}

#[test]
fn sizing_modes_must_be_unique() {
    let o = chh(&[
        "run",
        "--algo",
        "csschh",
        "--phi1",
        "0.1",
        "--phi2",
        "0.1",
        "--k1",
        "8",
        "--k2",
        "8",
        "--eps1",
        "0.05",
        "--eps2",
        "0.05",
        "--input",
        "/nonexistent",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
    let o = chh(&[
        "run",
        "--algo",
        "csschh",
        "--phi1",
        "0.1",
        "--phi2",
        "0.1",
        "--input",
        "/nonexistent",
    ]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn failed_run_leaves_no_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.bin");
    std::fs::write(&input, [1u8; 19]).unwrap();
    let out = dir.path().join("report.jsonl");
    let o = chh(&[
        "run",
        "--algo",
        "csschh",
        "--k1",
        "8",
        "--k2",
        "8",
        "--phi1",
        "0.1",
        "--phi2",
        "0.1",
        "--input",
        path(&input),
        "--out",
        path(&out),
    ]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("offset 16"), "{}", stderr(&o));
    assert!(!out.exists());
}

#[test]
fn compare_scores_every_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("s.bin");
    assert!(chh(&[
        "generate",
        "--n",
        "20000",
        "--rho",
        "1.2",
        "--m1",
        "500",
        "--m2",
        "50",
        "--out",
        path(&data)
    ])
    .status
    .success());
    let o = chh(&[
        "compare",
        "--algo",
        "csschh,mgchh,exact",
        "--phi1",
        "0.02",
        "--phi2",
        "0.1",
        "--space-bytes",
        "105840",
        "--timing-runs",
        "3",
        "--input",
        path(&data),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<serde_json::Value> = String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(rows.len(), 3);
    for row in &rows {
        assert_eq!(row["recall"].as_f64(), Some(1.0), "{row}");
        assert!(row["updates_per_ms"].as_f64().unwrap() > 0.0);
    }
    assert_eq!(rows[0]["algorithm"], "csschh");
    assert_eq!(rows[0]["space_bytes_model"], 105_840);
    assert_eq!(rows[1]["space_bytes_model"], 105_840);
    assert_eq!(rows[2]["precision"].as_f64(), Some(1.0));
}

#[test]
fn sweep_emits_one_row_per_seed_and_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    let o = chh(&[
        "sweep",
        "--axis",
        "rho",
        "--values",
        "1,1.4",
        "--trials",
        "2",
        "--n",
        "5000",
        "--m1",
        "1000",
        "--m2",
        "100",
        "--space-bytes",
        "105840",
        "--timing-runs",
        "0",
        "--out",
        path(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("axis,value,trial,seed,algorithm,a,b,reported,recall,precision"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 2 * 2 * 2);
    assert!(rows.iter().all(|r| r.starts_with("rho,")));
}
