use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_discord-dynamics");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn evolve_defaults() {
    let out = run(&["evolve"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("# discord-dynamics evolve\n"));
    assert!(!text.contains('\r'));
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(
        header,
        "r,omega_c_t,gamma1,gamma2,mu,nu,chi,mutual_information,classical_correlation,discord,regime"
    );
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 400);
    assert_eq!(rows[0][9], "1.1169558864163881e-1");
    assert!(rows.iter().all(|r| r[10] == "no-critic"));
}

#[test]
fn fig6_preset_has_four_series() {
    let text = stdout(&run(&["evolve", "--preset", "fig6", "--points", "11"]));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 44);
    let rs: Vec<&str> = rows.iter().step_by(11).map(|r| r[0].as_str()).collect();
    assert_eq!(
        rs,
        [
            "1.0000000000000000e0",
            "1.5000000000000000e0",
            "2.0000000000000000e0",
            "5.0000000000000000e0"
        ]
    );
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# bath\neta = 0.5\npoints = 3\nc1 = 0.2\n").unwrap();
    let out_path = dir.path().join("out.csv");
    let out = run(&[
        "evolve",
        "--config",
        cfg.to_str().unwrap(),
        "--points",
        "5",
        "--output",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.contains("# eta=0.5\n"));
    assert!(text.contains("# c1=0.2\n"));
    assert_eq!(data_rows(&text).len(), 5);
}

#[test]
fn config_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "eta=1\nfrobnicate=2\n").unwrap();
    let out = run(&["evolve", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2: unknown key `frobnicate`"));

    let out = run(&["evolve", "--c1", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("c1"));

    let out = run(&["evolve", "--c1", "1", "--c2", "1", "--c3", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("positivity"));

    assert_eq!(run(&["evolve", "--temperature", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--omega-a", "2", "--r", "2"]).status.code(), Some(2));
    assert_eq!(
        run(&["evolve", "--large-detuning-limit", "--omega-b", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn domain_errors_exit_4() {
    let out = run(&["critic-surface", "--temperature", "0.1"]);
    assert_eq!(out.status.code(), Some(4));
    let out = run(&["critic-surface", "--c2", "0.1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn numeric_failures_exit_3() {
    let out = run(&[
        "critic-time",
        "--omega",
        "0.01",
        "--c1",
        "0.5",
        "--c2",
        "0",
        "--c3",
        "0.26",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn critic_surface_grid() {
    let out = run(&["critic-surface", "--eta-omega2-points", "4", "--ratio-points", "6"]);
    assert!(out.status.success());
    let rows = data_rows(&stdout(&out));
    assert_eq!(rows.len(), 24);
    assert!(rows
        .iter()
        .filter(|r| r[1] == "5.0000000000000000e-1")
        .all(|r| r[2] == "inf"));
    assert!(rows
        .iter()
        .filter(|r| r[1] == "1.0000000000000000e0")
        .all(|r| r[2] == "0.0000000000000000e0"));

    let out = run(&[
        "critic-surface",
        "--c1",
        "0.6",
        "--eta-omega2-points",
        "2",
        "--ratio-points",
        "3",
    ]);
    assert!(out.status.success());
    assert!(data_rows(&stdout(&out)).iter().any(|r| r[2] == "invalid"));
}

#[test]
fn critic_time_reports_both_methods() {
    let text = stdout(&run(&["critic-time", "--c1", "0.6", "--c3", "0.4"]));
    let rows = data_rows(&text);
    assert_eq!(rows[0][1], "root-find");
    assert_eq!(rows[1][1], "closed-form-identical");
    for r in &rows {
        let tc: f64 = r[3].parse().unwrap();
        assert!((tc - 0.855_599_677_167_352_2).abs() < 1e-9);
    }
}

#[test]
fn amplification_footer() {
    let text = stdout(&run(&["amplification", "--step", "1e-3"]));
    assert_eq!(data_rows(&text).len(), 666);
    let footer = text.lines().last().unwrap();
    assert!(footer.starts_with("# peak: gamma_max=2.17684"), "{footer}");
}

#[test]
fn discord_bruteforce_columns() {
    let text = stdout(&run(&["discord", "--time", "1.5", "--r", "2", "--bruteforce"]));
    let row = &data_rows(&text)[0];
    assert_eq!(row.len(), 12);
    let analytic: f64 = row[5].parse().unwrap();
    let brute: f64 = row[9].parse().unwrap();
    assert!((analytic - brute).abs() < 1e-6);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["evolve", "--preset", "fig6", "--temperature", "0.3", "--points", "40"]);
    let b = run(&["evolve", "--preset", "fig6", "--temperature", "0.3", "--points", "40"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
