use std::process::{Command, Output};

fn ewitness(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ewitness"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn windows_rows_are_exact_and_match_optimization() {
    let o = ewitness(&["windows", "--n-min", "3", "--n-max", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows[0]["mu_c"], "1/6");
    assert_eq!(rows[0]["mu_2m"], "1/4");
    assert_eq!(rows[0]["mu_a"], "1/4");
    assert_eq!(rows[1]["mu_c"], "1/14");
    assert_eq!(rows[1]["mu_2m"], "3/28");
    assert_eq!(rows[1]["mu_a"], "1/8");
    for r in rows {
        for k in ["delta_c", "delta_2m", "delta_a"] {
            assert!(r[k].as_f64().unwrap().abs() < 1e-6, "{k} in {r}");
        }
    }
}

#[test]
fn robustness_csv() {
    let o = ewitness(&["robustness", "--n-min", "3", "--n-max", "4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "n,w_c,w_a,w_2m,w_c_trace,w_a_trace,w_2m_trace,max_delta"
    );
    assert!(lines.next().unwrap().starts_with("3,-1/6,-1/16,-1/12,"));
    assert!(lines.next().unwrap().starts_with("4,-1/14,-1/48,-1/28,"));
}

#[test]
fn output_is_deterministic_for_a_fixed_seed() {
    let a = ewitness(&["bounds", "w3q:000", "--seed", "7", "--restarts", "16"]);
    let b = ewitness(&["bounds", "w3q:000", "--seed", "7", "--restarts", "16"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert!(v["lower"].as_f64().unwrap().abs() < 1e-9);
    assert!((v["upper"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn verify_pair_cases_pass() {
    for case in ["example1", "example2", "ghz-alt:3", "graph:grid:2x2", "w3q:110", "pair33", "class2:pi/4"] {
        let o = ewitness(&["verify-pair", case]);
        assert_eq!(o.status.code(), Some(0), "{case}: {}", stdout(&o));
        assert_eq!(json(&o)["passed"], true);
    }
}

#[test]
fn graph_file_case() {
    let dir = std::env::temp_dir().join(format!("ewitness-graph-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("square.json");
    std::fs::write(&path, r#"{"n": 4, "edges": [[0,1],[1,2],[2,3],[3,0]]}"#).unwrap();
    let o = ewitness(&["verify-pair", &format!("graph:{}", path.display())]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn mirror_rejects_non_block_positive_partner() {
    let o = ewitness(&["mirror", "m1110", "--mu", "4/3"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert!(v["separable_minimum"].as_f64().unwrap() < -0.1);
    let ok = ewitness(&["mirror", "m1110"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!((json(&ok)["mu"].as_f64().unwrap() - 1.5).abs() < 1e-6);
}

#[test]
fn detect_reports_the_violated_bound() {
    let o = ewitness(&["detect", "pair33", "pair33-rho-w"]);
    assert_eq!(json(&o)["bound_violated"], "lower");
    let o = ewitness(&["detect", "pair33", "pair33-rho-m"]);
    assert_eq!(json(&o)["bound_violated"], "upper");
    let o = ewitness(&["detect", "w3q:001", "rho-bc:2,0.5"]);
    assert_eq!(json(&o)["bound_violated"], "lower");
}

#[test]
fn classify_csv_columns() {
    let o = ewitness(&["classify", "--family", "class2", "--params", "3pi/4,pi/4", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "param,a,mu,lambda_min_m,tier");
    assert!(lines[1].ends_with(",positive"));
    assert!(lines[2].ends_with(",decomposable-ew"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(ewitness(&["verify-pair", "nope"]).status.code(), Some(2));
    assert_eq!(ewitness(&["detect", "w3q:2", "ghz:3"]).status.code(), Some(2));
    assert_eq!(ewitness(&["detect", "w3q:000", "rho-bc:2,0.1"]).status.code(), Some(2));
    assert_eq!(ewitness(&["windows", "--n-min", "9"]).status.code(), Some(2));
    assert_eq!(ewitness(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn config_file_and_out_path() {
    let dir = std::env::temp_dir().join(format!("ewitness-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    let out = dir.join("windows.csv");
    std::fs::write(&cfg, r#"{"seed": 9, "restarts": 8, "format": "csv"}"#).unwrap();
    let o = ewitness(&[
        "windows", "--no-opt", "--n-min", "3", "--n-max", "3",
        "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("n,mu_c,mu_2m,mu_a"), "{text}");
    assert!(text.contains("3,1/6,1/4,1/4"));
}

#[test]
fn quick_selftest_reports_every_criterion() {
    let o = ewitness(&["selftest", "--quick"]);
    let err = String::from_utf8(o.stderr.clone()).unwrap();
    let lines: Vec<&str> = err.lines().filter(|l| l.starts_with("PASS") || l.starts_with("FAIL")).collect();
    assert_eq!(lines.len(), 12, "{err}");
    let failing: Vec<&str> = lines.iter().filter(|l| l.starts_with("FAIL")).copied().collect();
    assert_eq!(failing.len(), 2, "{err}");
    assert!(failing[0].starts_with("FAIL [ 4]"));
    assert!(failing[1].starts_with("FAIL [ 5]"));
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["criteria"].as_array().unwrap().len(), 12);
}

#[test]
fn catalog_lists_and_shows() {
    let o = ewitness(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["rows"].as_array().unwrap().len() > 20);
    let o = ewitness(&["catalog", "--states", "--show", "rho-x:2"]);
    let v = json(&o);
    assert_eq!(v["op"]["dims"], serde_json::json!([4, 4]));
}
