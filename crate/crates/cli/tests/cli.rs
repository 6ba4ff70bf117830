use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cli(dir: &Path, args: &[&str], config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cli"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("scenario.toml");
        std::fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<f64> {
    let mut lines = csv.lines();
    let k = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().parse().unwrap()).collect()
}

#[test]
fn default_verify_passes_and_writes_residuals() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["verify"], None);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let csv = read(dir.path(), "residuals.csv");
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("name,value,tolerance,pass,resolution"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.len() > 40);
    assert!(rows.iter().all(|r| r.split(',').nth(3) == Some("true")));
}

#[test]
fn zero_tolerance_fails_verify() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["verify"], Some("[verify]\ntolerance = 0.0\nchecks = [\"weingarten\"]\n"));
    assert_eq!(out.status.code(), Some(1));
    assert!(read(dir.path(), "residuals.csv").contains(",false,"));
}

#[test]
fn list_runs_nothing() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["verify", "--list"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["frame", "divergence", "conormals", "transport", "variation"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing from\n{text}");
    }
    assert!(!dir.path().join("out").exists());
}

#[test]
fn config_errors_exit_two_with_location() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["bubble"], Some("[bubble]\nN_r = 8\nkapa_S = 1.0\n"));
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("kapa_S") && err.contains("line 3"), "{err}");

    let out = cli(dir.path(), &["bubble"], Some("[bubble]\nb0 = 2.0\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("bubble.a0"));

    let out = cli(dir.path(), &["verify"], Some("[verify]\nchecks = [\"nope\"]\n"));
    assert_eq!(out.status.code(), Some(2));

    let out = cli(dir.path(), &["run"], Some("[run]\ndt = 0.05\nN_r = 16\n"));
    assert_eq!(out.status.code(), Some(2), "unstable dt is a config error");
}

const NEUMANN_RUN: &str = "
[run]
geometry = { kind = \"cap\", radius1 = 0.5, center1 = 0.1 }
bc = \"neumann\"
initial = \"gaussian(1.0, 0.2, 0.0, 0.4)\"
N_r = 10
N_s = 12
t_end = 0.02
integrator = \"heun\"
report_every = 5
snapshot_every = 50
";

#[test]
fn run_writes_snapshots_and_report() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["run"], Some(NEUMANN_RUN));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let snap = read(dir.path(), "snapshot.csv");
    assert!(snap.starts_with("t,i,j,r,s,x1,x2,x3,u,sqrtG\n"));
    let times = column(&snap, "t");
    assert_eq!(times.len() % 120, 0);
    assert_eq!(*times.last().unwrap(), 0.02);
    let report = read(dir.path(), "report.csv");
    assert!(report.starts_with("t,mass,energy,dissipation_cum,law_residual,min_u,max_u\n"));
    let mass = column(&report, "mass");
    assert!(mass.iter().all(|m| ((m - mass[0]) / mass[0]).abs() < 1e-12));
    let energy = column(&report, "energy");
    assert!(energy.last().unwrap() < &energy[0]);
    let second = report.lines().nth(1).unwrap().split(',').nth(1).unwrap();
    assert_eq!(second.split('e').next().unwrap().len(), 18, "17 significant digits: {second}");
}

#[test]
fn heat_run_keeps_density_integral() {
    let dir = TempDir::new().unwrap();
    let cfg = "[run]\nsystem = \"heat\"\nbc = \"neumann\"\ngeometry = { kind = \"cap\" }\nenergy = \"power\"\n\
               initial = \"coordinate(2)\"\ndensity = \"gaussian(1, 0, 0, 1)\"\nN_r = 8\nN_s = 8\nt_end = 0.01\n";
    let out = cli(dir.path(), &["run"], Some(cfg));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

const SMALL_BUBBLE: &str = "
[bubble]
N_r = 6
N_theta = 8
t_end = 0.01
report_every = 4
snapshot_every = 1000
";

#[test]
fn bubble_conserves_total_mass() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["bubble"], Some(SMALL_BUBBLE));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    for p in ["A1", "A2", "B1", "B2", "S"] {
        let snap = read(dir.path(), &format!("snapshot_{p}.csv"));
        assert_eq!(snap.lines().count(), 1 + 2 * 48);
    }
    let laws = read(dir.path(), "bubble_laws.csv");
    assert!(laws.starts_with("t,mass_total,energy_total,dissipation_cum,mass_drift,energy_residual\n"));
    let m = column(&laws, "mass_total");
    assert!(column(&laws, "mass_drift").iter().all(|d| d.abs() < 1e-12 * m[0]));
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    cli(a.path(), &["verify", "--threads", "1", "--seed", "9"], None);
    cli(b.path(), &["verify", "--threads", "3", "--seed", "9"], None);
    assert_eq!(read(a.path(), "residuals.csv"), read(b.path(), "residuals.csv"));
    cli(a.path(), &["bubble"], Some(SMALL_BUBBLE));
    cli(b.path(), &["bubble"], Some(SMALL_BUBBLE));
    assert_eq!(read(a.path(), "bubble_laws.csv"), read(b.path(), "bubble_laws.csv"));
}

#[test]
fn converge_fits_second_order_on_a_cap() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["converge"], None);
    assert_eq!(out.status.code(), Some(0));
    let csv = read(dir.path(), "convergence.csv");
    assert!(csv.starts_with("level,n,dt,value\n"));
    assert_eq!(column(&csv, "n"), vec![16.0, 32.0, 64.0]);
    let text = String::from_utf8(out.stdout).unwrap();
    let order: f64 = text.split("fitted order ").nth(1).unwrap().split_whitespace().next().unwrap().parse().unwrap();
    assert!(order >= 1.9, "{order}");
}

#[test]
fn converge_transport_in_dt() {
    let dir = TempDir::new().unwrap();
    let cfg = "[converge]\ncheck = \"transport\"\nn0 = 8\ngeometry = { kind = \"cap\", radius1 = 0.5 }\n";
    let out = cli(dir.path(), &["converge"], Some(cfg));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn converge_zero_field_skips_fit() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["converge"], Some("[converge]\nfield = \"zero\"\n"));
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("order fit skipped"));
}

#[test]
fn converge_below_minimum_order_fails() {
    let dir = TempDir::new().unwrap();
    let out = cli(dir.path(), &["converge"], Some("[converge]\nmin_order = 3.0\n"));
    assert_eq!(out.status.code(), Some(1));
}
