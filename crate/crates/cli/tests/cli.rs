use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arnold-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run_env(args: &[&str], key: &str, value: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arnold-lab"))
        .args(args)
        .env(key, value)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn coefficients(series: &Value) -> Vec<String> {
    series["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            format!(
                "{}/{}",
                c["num"].as_str().unwrap(),
                c["den"].as_str().unwrap()
            )
        })
        .collect()
}

fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn eval_identity() {
    let v = json(&run(&["eval", "--expr", "x", "--order", "3"]));
    assert_eq!(coefficients(&v), ["0/1", "1/1", "0/1", "0/1"]);
    assert_eq!(v["order"], 3);
}

#[test]
fn eval_text_format() {
    let out = run(&[
        "eval",
        "--expr",
        "tan o sin",
        "--order",
        "9",
        "--format",
        "text",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x + 1/6*x^3"));
    assert!(text.contains("-107/5040"));
    assert_eq!(text.lines().count(), 11);
}

#[test]
fn eval_parse_error_exit_code() {
    let out = run(&["eval", "--expr", "sin((", "--order", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("offset 4"));
}

#[test]
fn eval_unknown_function_is_domain_error() {
    let out = run(&["eval", "--expr", "sinh", "--order", "3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(
        run(&["eval", "--expr", "x", "--order", "0"]).status.code(),
        Some(4)
    );
    assert_eq!(run(&["eval", "--order", "3"]).status.code(), Some(4));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(4));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn invert_examples() {
    let v = json(&run(&["invert", "--expr", "x + x^2", "--order", "5"]));
    assert_eq!(
        coefficients(&v["inverse"]),
        ["0/1", "1/1", "-1/1", "2/1", "-5/1", "14/1"]
    );
    assert!(v.get("residuals").is_none());
    let v = json(&run(&["invert", "--expr", "x", "--order", "3"]));
    assert_eq!(coefficients(&v["inverse"]), ["0/1", "1/1", "0/1", "0/1"]);
    assert_eq!(
        run(&["invert", "--expr", "x^2", "--order", "3"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn invert_with_residuals() {
    let v = json(&run(&[
        "invert",
        "--expr",
        "x + x^2",
        "--order",
        "4",
        "--with-residuals",
    ]));
    // R_2..R_4 for a_1 = 1: b_n + a_n
    let r: Vec<String> = v["residuals"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| {
            format!(
                "{}/{}",
                c["num"].as_str().unwrap(),
                c["den"].as_str().unwrap()
            )
        })
        .collect();
    assert_eq!(r, ["0/1", "2/1", "-5/1"]);
}

#[test]
fn invert_from_series_json() {
    let inline = run(&["invert", "--series-json", r#"["0", "2", "1/3"]"#]);
    let v = json(&inline);
    assert_eq!(coefficients(&v["inverse"]), ["0/1", "1/2", "-1/24"]);

    let engine = json(&run(&["eval", "--expr", "x + x^2", "--order", "5"]));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.json");
    std::fs::write(&path, engine.to_string()).unwrap();
    let v = json(&run(&[
        "invert",
        "--series-json",
        path.to_str().unwrap(),
        "--order",
        "3",
    ]));
    assert_eq!(coefficients(&v["inverse"]), ["0/1", "1/1", "-1/1", "2/1"]);

    assert_eq!(
        run(&["invert", "--series-json", "[1, 1]"]).status.code(),
        Some(3)
    );
    assert_eq!(
        run(&["invert", "--series-json", "{oops"]).status.code(),
        Some(4)
    );
    assert_eq!(
        run(&["invert", "--series-json", "[0, 1]", "--order", "4"])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn limit_examples() {
    let v = json(&run(&[
        "limit",
        "--f",
        "tan o sin",
        "--g",
        "sin o tan",
        "--order",
        "12",
    ]));
    assert_eq!(v["N"], 7);
    assert_eq!(v["limit"]["num"], "1");
    assert_eq!(v["limit"]["den"], "1");
    assert_eq!(v["numerator_leading"]["den"], "30");

    let v = json(&run(&[
        "limit", "--f", "x + x^2", "--g", "x + x^3", "--order", "4",
    ]));
    assert_eq!(v["N"], 2);
    assert_eq!(v["limit"]["num"], "1");

    assert_eq!(
        run(&["limit", "--f", "sin", "--g", "sin", "--order", "8"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&["limit", "--f", "2 * sin", "--g", "sin", "--order", "8"])
            .status
            .code(),
        Some(3)
    );
    assert_eq!(
        run(&[
            "limit",
            "--f",
            "tan o sin",
            "--g",
            "sin o tan",
            "--order",
            "7"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn counterexample_tends_to_inverse_e() {
    let out = run(&[
        "counterexample",
        "--t-min",
        "1e-6",
        "--t-max",
        "1e-1",
        "--points",
        "25",
    ]);
    assert!(out.status.success());
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 25);
    let last: f64 = rows[24][7].parse().unwrap();
    assert!((last - (-1.0f64).exp()).abs() < 1e-5, "{last}");
    let x0: f64 = rows[0][0].parse().unwrap();
    assert!((x0 - 0.11).abs() < 1e-15);
}

#[test]
fn counterexample_edge_cases() {
    for args in [
        ["--t-min", "0", "--t-max", "0.1"],
        ["--t-min", "0.2", "--t-max", "0.1"],
        ["--t-min", "0.1", "--t-max", "0.5"],
    ] {
        let mut full = vec!["counterexample"];
        full.extend(args);
        assert_eq!(run(&full).status.code(), Some(4), "{args:?}");
    }
    let out = run(&[
        "counterexample",
        "--t-min",
        "1e-3",
        "--t-max",
        "0.1",
        "--points",
        "1",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0][0], "1.1000000000000001e-1");
}

#[test]
fn counterexample_left_side_and_json() {
    let out = run(&[
        "counterexample",
        "--t-min",
        "1e-6",
        "--t-max",
        "1e-2",
        "--points",
        "3",
        "--left",
        "--format",
        "json",
    ]);
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().all(|r| r["x"].as_f64().unwrap() < 0.0));
    // closed form of the reduction at t = -1e-6
    let last = rows[2]["ratio_BC_ED"].as_f64().unwrap();
    let closed = (1.0 / (1.0 - 1e-6f64)).exp();
    assert!((last - closed).abs() / closed < 1e-9, "{last} vs {closed}");
    assert_eq!(v["metadata"]["log_space"], true);
}

#[test]
fn counterexample_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.csv");
    let out = run(&[
        "counterexample",
        "--t-min",
        "1e-4",
        "--t-max",
        "1e-1",
        "--points",
        "4",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("x,AB,BC,ED,DDp,FDp,"));
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn sweep_analytic_pair_converges() {
    let out = run(&[
        "sweep",
        "--f",
        "tan o sin",
        "--g",
        "sin o tan",
        "--xs",
        "0.2,0.1,0.05",
    ]);
    let rows = csv_rows(&out);
    let dev: Vec<f64> = rows
        .iter()
        .map(|r| (r[6].parse::<f64>().unwrap() - 1.0).abs())
        .collect();
    assert!(dev[0] > dev[1] && dev[1] > dev[2], "{dev:?}");
    assert!(rows.iter().all(|r| r[9].is_empty()));
}

#[test]
fn sweep_range_and_counterexample_flag() {
    let out = run(&[
        "sweep",
        "--counterexample",
        "--x-min",
        "1e-5",
        "--x-max",
        "1e-1",
        "--points",
        "5",
    ]);
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 5);
    let last: f64 = rows[4][7].parse().unwrap();
    assert!((last - (-1.0f64).exp()).abs() < 1e-4);
    assert_eq!(rows[4][9], "logspace");

    let out = run(&[
        "sweep", "--f", "arctan", "--g", "sin", "--x-min", "-0.2", "--x-max", "-0.05", "--points",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(csv_rows(&out).iter().all(|r| r[0].starts_with('-')));
}

#[test]
fn sweep_empty_result_and_bad_input() {
    let out = run(&["sweep", "--f", "sin", "--g", "arctan", "--xs", "0.2,0.1"]);
    assert_eq!(out.status.code(), Some(5));
    assert_eq!(csv_rows(&out).len(), 2);
    assert_eq!(
        run(&["sweep", "--f", "sin", "--g", "tan", "--xs", "0.1,0.2"])
            .status
            .code(),
        Some(4)
    );
    assert_eq!(
        run(&["sweep", "--f", "sin(", "--g", "tan", "--xs", "0.1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "sweep",
            "--f",
            "sin",
            "--g",
            "tan",
            "--xs",
            "0.1",
            "--bracket",
            "1,0"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn thread_cap_does_not_change_output() {
    let args = [
        "counterexample",
        "--t-min",
        "1e-8",
        "--t-max",
        "0.3",
        "--points",
        "64",
    ];
    let one = run_env(&args, "ARNOLD_LAB_THREADS", "1");
    let four = run_env(&args, "ARNOLD_LAB_THREADS", "4");
    assert!(one.status.success() && four.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(
        run_env(&args, "ARNOLD_LAB_THREADS", "zero").status.code(),
        Some(4)
    );
}

#[test]
fn documented_examples_are_byte_stable() {
    let examples: [&[&str]; 5] = [
        &["eval", "--expr", "tan o sin", "--order", "9"],
        &[
            "invert",
            "--expr",
            "x + x^2",
            "--order",
            "5",
            "--with-residuals",
        ],
        &[
            "limit",
            "--f",
            "tan o sin",
            "--g",
            "sin o tan",
            "--order",
            "12",
        ],
        &[
            "counterexample",
            "--t-min",
            "1e-6",
            "--t-max",
            "1e-1",
            "--points",
            "25",
        ],
        &[
            "sweep",
            "--f",
            "tan o sin",
            "--g",
            "sin o tan",
            "--xs",
            "0.2,0.1,0.05",
            "--format",
            "json",
        ],
    ];
    for args in examples {
        let start = std::time::Instant::now();
        let a = run(args);
        assert!(start.elapsed().as_secs() < 10, "{args:?}");
        let b = run(args);
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
