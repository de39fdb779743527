use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use skewshift_core::skewshift::{SkewShiftSystem, TorusPoint};
use skewshift_core::sublinear::{psi, theoretical_delta};
use skewshift_core::Frequency;

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewshift"))
        .args(args)
        .current_dir(dir)
        .env("SKEWSHIFT_WORKERS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV report, header comments skipped.
fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

const FULL_SQUARE: &str = r#"{"schema": 1, "dim": 2, "clauses": [[
    {"monomials": [{"exponents": [0, 0], "coefficient": -1.0}], "relation": "le"}
]]}"#;

#[test]
fn orbit_rows_follow_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["orbit", "--b", "3", "--x", "0.1,0.2,0.3", "--n", "50"], dir.path());
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# skewshift "));
    let r = rows(&text);
    assert_eq!(r[0], ["n", "x_1", "x_2", "x_3"]);
    assert_eq!(r.len(), 51);
    let sys = SkewShiftSystem::new(3, Frequency::golden().value).unwrap();
    let x = TorusPoint::from_f64(&[0.1, 0.2, 0.3]).unwrap();
    for row in &r[1..] {
        let n: u64 = row[0].parse().unwrap();
        let want = sys.closed_form(&x, n).unwrap();
        for (cell, c) in row[1..].iter().zip(want.coords()) {
            let d = (cell.parse::<f64>().unwrap() - c.to_f64()).abs();
            assert!(d.min(1.0 - d) < 1e-9, "n={n}: {cell} vs {}", c.to_f64());
        }
    }
}

#[test]
fn vinogradov_counts_match_the_quadratic_identity() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["vinogradov", "--b", "2", "--rho", "2", "--n-grid", "1,2,5,9"],
        dir.path(),
    );
    assert!(o.status.success());
    let r = rows(&stdout(&o));
    assert_eq!(r[0][..4], ["b", "rho", "N", "J"]);
    for row in &r[1..] {
        let n: u64 = row[2].parse().unwrap();
        assert_eq!(row[3], (2 * n * n - n).to_string());
    }
}

#[test]
fn infeasible_and_malformed_inputs_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["vinogradov", "--b", "2", "--rho", "2", "--n-grid", "100000"][..],
        &["orbit", "--n", "3", "--omega", "surd:x"],
        &["orbit", "--n", "3", "--b", "2", "--x", "0.1"],
        &["weyl", "--n-grid", "8,4"],
        &["nosuch"],
        &["report"],
        &["report", "missing.json"],
        &["fejer", "--set", "missing.json"],
    ] {
        let o = run(args, dir.path());
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn leaving_the_regime_exits_two_and_still_writes() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("full.json"), FULL_SQUARE).unwrap();
    let o = run(
        &[
            "sublinear",
            "--target",
            "set",
            "--set",
            "full.json",
            "--n-grid",
            "64,128,256,512,1024,2048",
            "-o",
            "out.json",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("regime violated"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("out.json")).unwrap()).unwrap();
    assert_eq!(v["regime_violation"], true);
    assert_eq!(v["result"]["counts"][5], 2048);
    assert_eq!(v["spec"]["set"], "full.json");
}

#[test]
fn coupled_balls_pass_and_fixed_ball_is_linear() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &[
            "sublinear",
            "--mode",
            "weyl",
            "--n-grid",
            "1024,2048,4096,8192,16384,32768",
        ],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["result"]["pass"], true);
    assert!(v["result"]["fitted_slope"].as_f64().unwrap() < 0.85);
}

#[test]
fn config_entries_apply_and_flags_override_them() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.cfg"),
        "global.seed = 5\norbit.n = 4\norbit.b = 3\n",
    )
    .unwrap();
    let o = run(&["--config", "run.cfg", "orbit"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("# seed: 5"));
    assert_eq!(rows(&text).len(), 5);
    assert_eq!(rows(&text)[0].len(), 4);
    let o = run(&["--config", "run.cfg", "orbit", "--n", "2", "--seed", "9"], dir.path());
    let text = stdout(&o);
    assert!(text.contains("# seed: 9"));
    assert_eq!(rows(&text).len(), 3);
    std::fs::write(dir.path().join("bad.cfg"), "orbit.n\n").unwrap();
    assert_eq!(
        run(&["--config", "bad.cfg", "orbit"], dir.path()).status.code(),
        Some(1)
    );
}

#[test]
fn fejer_counts_stay_below_the_majorant() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("disc.json"),
        r#"{"schema": 1, "dim": 2, "clauses": [[
            {"monomials": [{"exponents": [2, 0], "coefficient": 1.0}, {"exponents": [0, 2], "coefficient": 1.0},
                           {"exponents": [0, 0], "coefficient": -0.01}], "relation": "le"}
        ]]}"#,
    )
    .unwrap();
    for args in [
        &["fejer", "--center", "0.3,0.6", "--eps", "0.05", "--format", "json"][..],
        &[
            "fejer",
            "--set",
            "disc.json",
            "--eps",
            "0.05",
            "--n-grid",
            "100,300",
            "--format",
            "json",
        ],
    ] {
        let o = run(args, dir.path());
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        let rows = v["result"]["rows"].as_array().unwrap();
        assert!(!rows.is_empty());
        for r in rows {
            assert!(r["count"].as_f64().unwrap() <= r["bound"].as_f64().unwrap(), "{r}");
        }
    }
}

#[test]
fn report_tabulates_exponents_and_summarizes_runs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["vinogradov", "--b", "2", "--rho", "2", "-o", "j.csv"], dir.path());
    assert!(o.status.success());
    let o = run(&["report", "j.csv"], dir.path());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let table = v["result"]["exponent_table"].as_array().unwrap();
    for row in table {
        let b = row["b"].as_u64().unwrap() as u32;
        let tau = row["tau"].as_f64().unwrap();
        assert_eq!(row["psi"].as_u64().unwrap(), psi(b).unwrap());
        assert_eq!(row["delta"].as_f64().unwrap(), theoretical_delta(b, tau).unwrap());
    }
    assert_eq!(v["result"]["inputs"][0]["command"], "vinogradov");
}
