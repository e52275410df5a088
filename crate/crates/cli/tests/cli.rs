use std::path::Path;
use std::process::{Command, Output};

fn threatsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_threatsim"))
        .args(args)
        .output()
        .unwrap()
}

fn run_ok(args: &[&str], out: &Path) -> String {
    let mut all = args.to_vec();
    let out_s = out.to_str().unwrap();
    all.extend(["--out", out_s]);
    let o = threatsim(&all);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let stem = if args[0] == "abm" {
        "abm_timeseries"
    } else {
        args[0]
    };
    std::fs::read_to_string(out.join(format!("{stem}.csv"))).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(2).collect()
}

#[test]
fn phase_lattice_rows() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(
        &["phase", "--variant", "threat3", "--grid", "50"],
        dir.path(),
    );
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# threatsim "));
    assert_eq!(
        lines.next().unwrap(),
        "x_PT,x_D,x_DT,dx_PT,dx_D,dx_DT,speed"
    );
    assert_eq!(data_rows(&csv).len(), 1326);
    assert!(!csv.contains('\r'));

    let csv = run_ok(
        &["phase", "--variant", "threat4", "--grid", "4"],
        dir.path(),
    );
    assert!(csv
        .lines()
        .nth(1)
        .unwrap()
        .starts_with("face,x_PT,x_D,x_DT,x_C,"));
    assert_eq!(data_rows(&csv).len(), 4 * 15);
}

#[test]
fn pdc_rest_point_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(&["restpoints", "--variant", "pdc"], dir.path());
    assert!(data_rows(&csv)
        .iter()
        .any(|r| r.starts_with("0.5,0.5,0,closed-form,")));
    assert!(data_rows(&csv)
        .iter()
        .any(|r| r.starts_with("0.5,0.5,0,numeric,")));
}

#[test]
fn trajectory_rows_and_time() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(
        &[
            "trajectory",
            "--x0",
            "0.1,0.1,0.8",
            "--steps",
            "100",
            "--dt",
            "0.05",
        ],
        dir.path(),
    );
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 101);
    assert!(rows[0].starts_with("0,0.1,0.1,0.8"));
    assert!(rows[100].starts_with("5,"));
}

#[test]
fn abm_rows_and_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(
        &[
            "abm",
            "--variant",
            "threat4",
            "--gens",
            "500",
            "--window",
            "50",
            "--runs",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(
        csv.lines().nth(1).unwrap(),
        "run,generation,n_PT,n_D,n_DT,n_C,coop_strategy_freq,coop_act_freq,welfare"
    );
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 1000);
    assert!(rows[0].starts_with("0,1,"));
    assert!(rows[999].starts_with("1,500,"));
}

#[test]
fn sweep_grid_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(
        &[
            "sweep",
            "--variant",
            "pdc",
            "--axis",
            "p:-0.5:1:0.5",
            "--runs",
            "2",
            "--gens",
            "200",
            "--window",
            "20",
        ],
        dir.path(),
    );
    let header = csv.lines().nth(1).unwrap();
    assert!(header.starts_with("p,q_over_p,runs,mean_coop_strategy_freq,std_coop_strategy_freq,"));
    assert!(header.ends_with(",error"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("-0.5,") && rows[0].contains("p >= 0"));
    assert!(rows[1].starts_with("0,,2,"));
    assert!(rows[2].starts_with("0.5,6,2,"));
}

#[test]
fn oracle_table() {
    let dir = tempfile::tempdir().unwrap();
    let csv = run_ok(
        &["oracle", "--counts", "8,6,6", "--shuffles", "200"],
        dir.path(),
    );
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("D,6,"));
}

#[test]
fn sidecar_reproduces_output() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    let csv = run_ok(
        &[
            "abm",
            "--variant",
            "threat3",
            "--q",
            "2.5",
            "--theta",
            "0.1",
            "--gens",
            "800",
            "--window",
            "80",
            "--seed",
            "3",
        ],
        &first,
    );
    let meta = first.join("abm_timeseries.meta.toml");
    let again = run_ok(
        &["abm", "--config", meta.to_str().unwrap()],
        &dir.path().join("second"),
    );
    assert_eq!(csv, again);
}

#[test]
fn failures_are_single_line() {
    for args in [
        vec!["phase", "--variant", "threat9"],
        vec!["abm", "--p", "-1"],
        vec!["oracle"],
        vec!["phase", "--nope"],
        vec!["sweep", "--axis", "q:1:0:0.5"],
    ] {
        let o = threatsim(&args);
        assert!(!o.status.success(), "{args:?}");
        let err = String::from_utf8(o.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
    }
    let o = threatsim(&["phase", "--variant", "threat9"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("pdc, threat3, threat4"));
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "variant = \"pdc\"\nbeta = 1\nsteps = 10\n").unwrap();
    let csv = run_ok(
        &[
            "trajectory",
            "--config",
            cfg.to_str().unwrap(),
            "--steps",
            "20",
        ],
        dir.path(),
    );
    assert!(csv.lines().next().unwrap().contains("variant=pdc"));
    assert_eq!(data_rows(&csv).len(), 21);

    std::fs::write(&cfg, "betta = 1\n").unwrap();
    let o = threatsim(&["trajectory", "--config", cfg.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("betta"));
}
