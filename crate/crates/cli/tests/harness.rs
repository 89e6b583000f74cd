use std::fs;
use std::path::Path;
use std::process::Command;

use imoea::parse_problem;
use imoea_cli::output::{read_front_csv, read_raw};
use imoea_cli::{run_experiment, Algorithm, ExperimentSpec, Indicator};

fn small_spec(out: &Path) -> ExperimentSpec {
    let mut spec = ExperimentSpec::new(vec![parse_problem("IDTLZ2:m=3", None).unwrap()]);
    spec.algorithms = vec![Algorithm::Imoea];
    spec.runs = 3;
    spec.population = Some(20);
    spec.evaluations = Some(600);
    spec.front_samples = 200;
    spec.out = out.to_path_buf();
    spec
}

fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn one_cell_three_runs_counts() {
    let dir = tempfile::tempdir().unwrap();
    let spec = small_spec(dir.path());
    let report = run_experiment(&spec).unwrap();
    assert_eq!(report.outcomes.len(), 3);

    let raw = read_raw(&dir.path().join("imoea.csv")).unwrap();
    assert_eq!(raw.len(), 3);
    assert!(raw.iter().all(|r| r.problem == "IDTLZ2" && r.m == 3 && r.indicator == Indicator::Igd));
    assert_eq!(raw.iter().map(|r| r.seed).collect::<Vec<_>>(), vec![42, 43, 44]);
    assert!(raw.iter().all(|r| r.wall_time == 0.0 && r.evaluations > 0));

    let summary = read(&dir.path().join("summary.csv"));
    assert_eq!(summary.lines().count(), 2, "{summary}");
    assert!(summary.lines().next().unwrap().starts_with("problem,m,algorithm,indicator,runs,median"));

    let trend = read(&dir.path().join("trend_IDTLZ2_m3.csv"));
    let tmax = report.outcomes[0].trace.tmax;
    assert_eq!(trend.lines().count(), 1 + 3 * tmax);

    let front = read_front_csv(&dir.path().join("fronts/IDTLZ2_m3_imoea_seed42.csv")).unwrap();
    assert_eq!(front.len(), report.outcomes[0].trace.archive.len());
}

#[test]
fn csv_output_is_reproducible_under_parallel_execution() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut spec = small_spec(a.path());
    spec.algorithms = Algorithm::ALL.to_vec();
    spec.indicators = vec![Indicator::Igd, Indicator::Hv];
    spec.threads = Some(1);
    let first = run_experiment(&spec).unwrap();
    spec.out = b.path().to_path_buf();
    spec.threads = Some(4);
    let second = run_experiment(&spec).unwrap();
    assert_eq!(first.files.len(), second.files.len());
    for (fa, fb) in first.files.iter().zip(&second.files) {
        assert_eq!(fa.strip_prefix(a.path()).unwrap(), fb.strip_prefix(b.path()).unwrap());
        assert_eq!(fs::read(fa).unwrap(), fs::read(fb).unwrap(), "{}", fa.display());
    }
    for (x, y) in first.outcomes.iter().zip(&second.outcomes) {
        assert!(x.trace.same_outcome(&y.trace));
    }
}

#[test]
fn summary_marks_imoea_against_baseline() {
    let dir = tempfile::tempdir().unwrap();
    let mut spec = small_spec(dir.path());
    spec.algorithms = Algorithm::ALL.to_vec();
    run_experiment(&spec).unwrap();
    let summary = read(&dir.path().join("summary.csv"));
    let rows: Vec<&str> = summary.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    let sign = rows[0].rsplit(',').next().unwrap();
    assert!(rows[0].contains(",imoea,") && ["+", "-", "="].contains(&sign), "{}", rows[0]);
    assert!(rows[1].contains(",moead-fixed,") && rows[1].ends_with(','), "{}", rows[1]);
}

#[test]
fn unwritable_output_fails_before_running() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let mut spec = small_spec(&blocker.join("sub"));
    // A budget this large would take minutes if any run started.
    spec.evaluations = Some(10_000_000);
    assert!(run_experiment(&spec).is_err());
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_imoea"))
}

#[test]
fn cli_run_plot_stats_suite() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("results");
    let status = cli()
        .args(["run", "--problem", "DTLZ1", "--m", "3", "--algo", "imoea,moead-fixed", "--runs", "2"])
        .args(["--evaluations", "400", "--population", "20", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    let stdout = String::from_utf8_lossy(&status.stdout);
    assert!(stdout.starts_with("problem,m,algorithm"), "{stdout}");

    let svg = dir.path().join("front.svg");
    let plot = cli()
        .args(["plot", "--input"])
        .arg(out.join("fronts/DTLZ1_m3_imoea_seed42.csv"))
        .arg("--out")
        .arg(&svg)
        .output()
        .unwrap();
    assert!(plot.status.success(), "{}", String::from_utf8_lossy(&plot.stderr));
    assert_eq!(read(&svg).matches("<line").count(), 3);

    let stats = cli()
        .args(["stats", "--a"])
        .arg(out.join("imoea.csv"))
        .arg("--b")
        .arg(out.join("moead-fixed.csv"))
        .output()
        .unwrap();
    assert!(stats.status.success(), "{}", String::from_utf8_lossy(&stats.stderr));
    let text = String::from_utf8_lossy(&stats.stdout);
    assert_eq!(text.lines().count(), 2, "{text}");
    assert!(text.lines().nth(1).unwrap().starts_with("DTLZ1,3,igd,"));

    let spec_path = dir.path().join("exp.toml");
    fs::write(
        &spec_path,
        "problems = [\"MaF9:m=3\"]\nalgorithms = [\"moead-fixed\"]\nruns = 1\nevaluations = 300\npopulation = 20\n",
    )
    .unwrap();
    let suite_out = dir.path().join("suite");
    let suite = cli().args(["suite", "--spec"]).arg(&spec_path).arg("--out").arg(&suite_out).output().unwrap();
    assert!(suite.status.success(), "{}", String::from_utf8_lossy(&suite.stderr));
    assert_eq!(read_raw(&suite_out.join("moead-fixed.csv")).unwrap().len(), 1);
}

#[test]
fn cli_uses_out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from-env");
    let run = cli()
        .args(["run", "--problem", "IDTLZ2:m=3", "--runs", "1", "--evaluations", "200", "--population", "20"])
        .env("IMOEA_OUT_DIR", &out)
        .output()
        .unwrap();
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(out.join("imoea.csv").exists());
}

#[test]
fn cli_rejects_unknown_problem() {
    let dir = tempfile::tempdir().unwrap();
    let run = cli()
        .args(["run", "--problem", "ZDT1", "--m", "2", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(!run.status.success());
    let err = String::from_utf8_lossy(&run.stderr);
    assert!(err.contains("known problems") && err.contains("WFG8"), "{err}");
}
