use std::path::Path;
use std::process::{Command, Output};

fn binlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_binlab"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("BINLAB_SEED")
        .env_remove("BINLAB_THREADS")
        .output()
        .expect("binlab runs")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn gen_writes_one_file_per_instance_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "gen", "--dist", "uniform(20,100)", "--cap", "150", "--n-items", "500", "--instances", "3", "--seed", "7",
    ];
    assert!(binlab(&args, &dir.path().join("a")).status.success());
    assert!(binlab(&args, &dir.path().join("b")).status.success());
    let mut names: Vec<_> = std::fs::read_dir(dir.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert_eq!(names.len(), 3);
    for name in names {
        assert_eq!(read(dir.path().join("a").join(&name)), read(dir.path().join("b").join(&name)));
    }
    let text = read(dir.path().join("a/instance_0000.txt"));
    let inst = binlab::Instance::from_text(&text).unwrap();
    assert_eq!((inst.capacity, inst.len()), (150, 500));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["gen", "--n-items", "0"][..],
        &["run", "--heuristics", "ab-ff(a=24,b=5)"],
        &["run", "--heuristics", "nextfit"],
        &["run", "--dist", "gamma(2,3)"],
        &["sweep", "--baseline", "nf"],
    ] {
        let out = binlab(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
    let out = binlab(&["run", "--heuristics", "nextfit"], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("ab-ff(a=<int>,b=<int>"));
    assert_eq!(binlab(&["frobnicate"], dir.path()).status.code(), Some(2));
}

#[test]
fn missing_report_directory_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlab(&["report", dir.path().join("nope").to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bestfit_only_run_has_unit_ratios() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlab(&["run", "--heuristics", "bestfit", "--instances", "5", "--n-items", "100"], dir.path());
    assert!(out.status.success());
    let csv = read(dir.path().join("battery.csv"));
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "distribution,heuristic,instance_id,bins_used,bestfit_bins,ratio");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|r| r.ends_with(",1.000000")));
}

#[test]
fn config_file_env_and_flags_layer() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.conf");
    std::fs::write(&cfg, "instances = 4\nn_items = 60\nheuristics = c12\nseed = 3\n").unwrap();
    let run = |extra: &[&str], env_seed: Option<&str>, out: &str| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_binlab"));
        cmd.args(["run", "--config", cfg.to_str().unwrap(), "--out"]).arg(dir.path().join(out)).args(extra);
        cmd.env_remove("BINLAB_SEED");
        if let Some(s) = env_seed {
            cmd.env("BINLAB_SEED", s);
        }
        assert!(cmd.status().unwrap().success());
        read(dir.path().join(out).join("battery.csv"))
    };
    let from_file = run(&[], None, "f");
    assert!(from_file.contains("\"seed\":\"3\"") && from_file.contains("\"instances\":\"4\""));
    let from_env = run(&[], Some("8"), "e");
    assert!(from_env.contains("\"seed\":\"8\""));
    let from_flag = run(&["--seed", "9"], Some("8"), "g");
    assert!(from_flag.contains("\"seed\":\"9\""));

    // the embedded config reproduces the table byte for byte
    let line = from_flag.lines().next().unwrap().strip_prefix("# config: ").unwrap();
    let replay = dir.path().join("replay.json");
    std::fs::write(&replay, line).unwrap();
    let out = dir.path().join("r");
    let status = Command::new(env!("CARGO_BIN_EXE_binlab"))
        .args(["run", "--config", replay.to_str().unwrap(), "--out"])
        .arg(&out)
        .env_remove("BINLAB_SEED")
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(read(out.join("battery.csv")), from_flag);

    std::fs::write(&cfg, "instance = 4\n").unwrap();
    let out = binlab(&["run", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sweep_prints_the_argmin_and_report_collects_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlab(
        &["sweep", "--instances", "3", "--n-items", "100", "--a-range", "0..=2", "--b-range", "20..=22"],
        dir.path(),
    );
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("argmin a="), "{stdout}");
    let csv = read(dir.path().join("sweep.csv"));
    assert_eq!(csv.lines().nth(1), Some("a,b,mean_ratio"));
    assert_eq!(csv.lines().count(), 2 + 9);

    assert!(binlab(&["adversarial"], dir.path()).status.success());
    let out = binlab(&["report"], dir.path());
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&read(dir.path().join("report.json"))).unwrap();
    assert_eq!(report["sweep"]["experiment"], "sweep");
    assert_eq!(report["adversarial"]["summary"][0]["predicted_fill"], 2);
}

#[test]
fn diff_writes_both_tables_and_checks_impossibility() {
    let dir = tempfile::tempdir().unwrap();
    let out = binlab(&["diff", "--n-items", "2000", "--assert-impossible"], dir.path());
    assert!(out.status.success());
    let diff = read(dir.path().join("diff.csv"));
    let rows: Vec<&str> = diff.lines().skip(2).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.contains(&"b_new_a_old,0"));
    let events = read(dir.path().join("diff_events.csv"));
    assert_eq!(events.lines().nth(1), Some("item_index,item_size,remaining_after,remaining_before"));

    // with other pairs the exit status follows the b_new_a_old count
    let out = binlab(
        &["diff", "--n-items", "2000", "--driver", "bestfit", "--shadow", "firstfit", "--assert-impossible"],
        dir.path(),
    );
    let counts = read(dir.path().join("diff.csv"));
    let violated = !counts.contains("b_new_a_old,0\n");
    assert_eq!(out.status.success(), !violated);
}

#[test]
fn single_point_curve_matches_a_run() {
    let dir = tempfile::tempdir().unwrap();
    let common = ["--instances", "6", "--seed", "2", "--heuristics", "c12"];
    let mut curve = vec!["curve", "--grid", "80"];
    curve.extend(common);
    assert!(binlab(&curve, &dir.path().join("c")).status.success());
    let mut run = vec!["run", "--n-items", "80"];
    run.extend(common);
    assert!(binlab(&run, &dir.path().join("r")).status.success());
    let curve_csv = read(dir.path().join("c/curve.csv"));
    let mean: f64 = curve_csv.lines().nth(2).unwrap().split(',').nth(2).unwrap().parse().unwrap();
    let battery = read(dir.path().join("r/battery.csv"));
    let ratios: Vec<f64> = battery.lines().skip(2).map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    let avg = ratios.iter().sum::<f64>() / ratios.len() as f64;
    assert!((mean - avg).abs() < 1e-5, "{mean} vs {avg}");
}
