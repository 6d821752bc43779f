//! Drive the built binary end to end: golden values, exit codes, output
//! determinism, and graph-file diagnostics.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_midspread"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf8 stderr")
}

/// Data rows of a CSV dump: skip the header and the '#' summary.
fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn ricci_on_the_seven_cube_is_flat_quarter() {
    let out = run(&["ricci", "--n", "7"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 448);
    for row in &rows {
        assert_eq!(row[0], "edge");
        assert_eq!(row[5], "2.50000000000e-1", "kappa off in row {row:?}");
    }
    assert!(text.lines().last().unwrap().starts_with("# summary violations=0"));
}

#[test]
fn ricci_exact_mode_prints_rationals() {
    let out = run(&["ricci", "--n", "4", "--mode", "exact"]);
    assert!(out.status.success());
    for row in data_rows(&stdout(&out)) {
        assert_eq!(row[7], "2/5");
    }
}

#[test]
fn bm_set_worked_example() {
    let out = run(&["bm-set", "--n", "4", "--a", "0000", "--b", "1111"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    let row = &rows[0];
    // instance,density,dim,card_a,card_b,card_m,distance,...
    assert_eq!(row[5], "6");
    assert_eq!(row[6], "4");
    let margin: f64 = row[10].parse().unwrap();
    assert!((margin - 1.5418).abs() < 1e-4);
    assert_eq!(row[11], "true");
}

#[test]
fn dimension_caps_name_their_limits() {
    let cases: [(&[&str], &str); 4] = [
        (&["bm-set", "--n", "30"], "1..=24"),
        (&["ricci", "--n", "17"], "1..=16"),
        (&["conc-s", "--n", "9"], "1..=7"),
        (&["conc-c", "--n", "13"], "12"),
    ];
    for (args, needle) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "args {args:?}");
        assert!(
            stderr(&out).contains(needle),
            "stderr for {args:?} should name the cap: {}",
            stderr(&out)
        );
    }
}

#[test]
fn violations_drive_exit_one() {
    // An inflated curvature override forces the set inequality negative.
    let out = run(&["bm-set", "--n", "4", "--a", "0000", "--b", "1111", "--k", "10"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.lines().last().unwrap().contains("violations=1"));
}

#[test]
fn fixed_config_is_byte_identical() {
    for format in ["csv", "json"] {
        let args = [
            "bm-entropy", "--n", "5", "--trials", "5", "--seed", "7", "--format", format,
        ];
        let first = run(&args);
        let second = run(&args);
        assert!(first.status.success());
        assert_eq!(first.stdout, second.stdout, "format {format}");
    }
}

#[test]
fn seed_changes_the_sweep() {
    let a = run(&["bm-set", "--n", "5", "--trials", "3", "--seed", "1"]);
    let b = run(&["bm-set", "--n", "5", "--trials", "3", "--seed", "2"]);
    assert_ne!(a.stdout, b.stdout);
}

#[test]
fn json_records_keep_key_order() {
    let out = run(&["ksweep", "--min-n", "4", "--max-n", "8", "--format", "json"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("{\"n\":4,\"k_star\":"));
    assert!(lines[1].starts_with("{\"n\":6,\"k_star\":"));
    assert!(lines[3].starts_with("{\"record\":\"summary\""));
    assert!(lines[3].contains("\"log_log_slope\":"));
}

#[test]
fn graph_file_errors_carry_line_numbers() {
    let dir = std::env::temp_dir();
    let path = dir.join("midspread_cli_bad_graph.txt");
    std::fs::write(&path, "0 1\n1 2 3\n").unwrap();
    let out = run(&["ricci", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 2"), "stderr: {}", stderr(&out));

    std::fs::write(&path, "0 1\n# comment\n1 x\n").unwrap();
    let out = run(&["ricci", "--graph", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 3"), "stderr: {}", stderr(&out));
    std::fs::remove_file(&path).ok();
}

#[test]
fn path_graph_curvatures_from_file() {
    let dir = std::env::temp_dir();
    let path = dir.join("midspread_cli_path4.txt");
    std::fs::write(&path, "# path on four vertices\n0 1\n1 2\n2 3\n").unwrap();
    let out = run(&["ricci", "--graph", path.to_str().unwrap(), "--mode", "exact"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout(&out));
    let kappas: Vec<&str> = rows.iter().map(|r| r[7].as_str()).collect();
    assert_eq!(kappas, vec!["1/2", "0", "1/2"]);
    std::fs::remove_file(&path).ok();
}

#[test]
fn missing_input_is_a_usage_error() {
    let out = run(&["ricci"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["bm-set", "--n", "4", "--a", "0000"]);
    // --a without --b is rejected by the argument parser.
    assert_eq!(out.status.code(), Some(2));
}
