//! End-to-end runs of the `iongate` binary.

use std::path::Path;
use std::process::{Command, Output};

use iongate::keyvalue::Document;

const BIN: &str = env!("CARGO_BIN_EXE_iongate");

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("IONGATE_ATOMIC_DATA")
        .output()
        .expect("binary runs")
}

fn rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn entries(dir: &Path) -> usize {
    std::fs::read_dir(dir).unwrap().count()
}

#[test]
fn trajectory_closes_and_reaches_pi() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["trajectory", "--out", "traj"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("traj");
    assert_eq!(entries(&dir), 9);

    let com = rows(&dir.join("trajectory_com_dd.csv"));
    let diameter = com
        .iter()
        .flat_map(|a| com.iter().map(move |b| (a[1] - b[1]).hypot(a[2] - b[2])))
        .step_by(97)
        .fold(0.0, f64::max);
    let (first, last) = (&com[0], &com[com.len() - 1]);
    assert!(diameter > 1.0);
    assert!((first[1] - last[1]).hypot(first[2] - last[2]) <= 1e-6 * diameter);

    let phase = rows(&dir.join("effective_phase.csv"));
    let final_phase = phase.last().unwrap()[1];
    assert!((final_phase / std::f64::consts::PI - 1.0).abs() <= 0.10, "{final_phase}");

    // Breathing excitation stays small next to the center-of-mass loop.
    let max_beta = |name: &str| {
        rows(&dir.join(name))
            .iter()
            .map(|r| r[1].hypot(r[2]))
            .fold(0.0, f64::max)
    };
    let ratio = max_beta("trajectory_breathing_du.csv") / max_beta("trajectory_com_dd.csv");
    assert!((ratio - 6.111_037e-2).abs() <= 1e-6, "{ratio:e}");
}

#[test]
fn missing_species_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    for cmd in ["trajectory", "design", "sweep", "errors"] {
        let out = run(tmp.path(), &[cmd, "--species", "Yb171", "--out", "result"]);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(String::from_utf8_lossy(&out.stderr).contains("Yb171"));
    }
    assert_eq!(entries(tmp.path()), 0);
}

#[test]
fn config_errors_name_the_line() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(tmp.path().join("run.cfg"), "species = Ca40\n\nwaist = 5\n").unwrap();
    let out = run(tmp.path(), &["design", "--config", "run.cfg", "--out", "d.txt"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("run.cfg:3:"), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(!tmp.path().join("d.txt").exists());
}

#[test]
fn physics_errors_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["design", "--lambda-nm", "393.48", "--out", "d.txt"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(tmp.path(), &["errors", "--lambda-nm", "875.8329", "--out", "d.txt"]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(entries(tmp.path()), 0);
}

#[test]
fn barium_thulium_design_report() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["design", "--species", "Ba138", "--lambda-nm", "2000", "--out", "ba.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("ba.txt")).unwrap();
    let doc = Document::parse(&text, "ba.txt").unwrap();
    let mut r = doc.reader(doc.section("result").unwrap());
    let p_sc = r.f64("p_sc").unwrap().0;
    assert!((5e-5..=2e-4).contains(&p_sc), "{p_sc}");
    assert!(doc.section("infidelity").is_some());
}

#[test]
fn empty_sweep_is_header_only() {
    let tmp = tempfile::tempdir().unwrap();
    let out = run(tmp.path(), &["sweep", "--lambda-grid", "1000:900:5", "--out", "s.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("s.csv")).unwrap();
    assert_eq!(text, "lambda_nm,power_W,gamma_sc_T,status\n");
}

#[test]
fn config_file_and_flags() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::write(
        tmp.path().join("run.cfg"),
        "species = Ba138\ngeometry = c\nn = 15\n[sweep]\nlambda_grid_nm = [474.5, 1064, 2000]\n",
    )
    .unwrap();
    let out = run(tmp.path(), &["sweep", "--config", "run.cfg", "--species", "Ca40", "--out", "s.csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(tmp.path().join("s.csv")).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("4.745e2,"));
    // Ca+ at 474.5 nm needs far more power than Ba+ there.
    let ca_power: f64 = lines[1].split(',').nth(1).unwrap().parse().unwrap();
    assert!(ca_power > 1.0, "{ca_power}");
}

#[test]
fn atomic_data_override() {
    let tmp = tempfile::tempdir().unwrap();
    let data = iongate::atomic_data::BUILTIN.replace("[Sr88]", "[Sr88x]");
    std::fs::write(tmp.path().join("ions.toml"), data).unwrap();
    let out = Command::new(BIN)
        .args(["design", "--species", "Sr88x"])
        .current_dir(tmp.path())
        .env("IONGATE_ATOMIC_DATA", "ions.toml")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stdout).contains("atomic_data = \"ions.toml\""));
    let out = run(tmp.path(), &["design", "--species", "Sr88x"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let cases: [&[&str]; 4] = [
        &["trajectory", "--out", "t"],
        &["design", "--out", "d.txt"],
        &["sweep", "--lambda-grid", "380:2000:20", "--out", "s.csv"],
        &["errors", "--out", "e.txt"],
    ];
    let snapshot = |root: &Path| {
        let mut files: Vec<_> = walk(root);
        files.sort();
        files.into_iter().map(|p| (p.clone(), std::fs::read(&p).unwrap())).collect::<Vec<_>>()
    };
    for args in cases {
        assert_eq!(run(tmp.path(), args).status.code(), Some(0), "{args:?}");
    }
    let first = snapshot(tmp.path());
    for args in cases {
        assert_eq!(run(tmp.path(), args).status.code(), Some(0));
    }
    assert_eq!(first, snapshot(tmp.path()));
    assert_eq!(first.len(), 12);
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in std::fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}
