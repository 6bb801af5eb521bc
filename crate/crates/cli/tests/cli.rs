use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use quadtrap_cli::{run, AnalysisReport, Cli, Output, EXIT_INPUT, EXIT_NOT_TRAP, EXIT_OK};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quadtrap"))
}

fn fixture(name: &str, json: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("quadtrap-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path
}

fn oscillator() -> PathBuf {
    fixture("ho.json", r#"{"n": 1, "B": [[1, 0], [0, 1]]}"#)
}

fn exec(args: &[&str]) -> Output {
    let cli = Cli::try_parse_from(std::iter::once("quadtrap").chain(args.iter().copied())).unwrap();
    run(&cli).unwrap()
}

fn csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn analyze_penning_mode_signs() {
    let out = exec(&[
        "analyze",
        "--penning",
        "--omega-c",
        "2",
        "--omega-z",
        "1",
        "--epsilon",
        "0",
    ]);
    assert_eq!(out.code, EXIT_OK);
    let r = AnalysisReport::from_json(&out.text).unwrap();
    assert_eq!(r.gamma, vec![1, -1, 1]);
    let e000 = r.e000.unwrap();
    assert!((e000 - r.g0_prime.unwrap()).abs() < 1e-12);
    assert!((r.omega[0] - (1.0 + 0.5f64.sqrt())).abs() < 1e-12);
    assert!(r.heisenberg.iter().all(|h| (h - 0.5).abs() < 1e-10));
}

#[test]
fn analyze_oscillator_file() {
    let path = oscillator();
    let out = exec(&["analyze", "--file", path.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_OK);
    let r = AnalysisReport::from_json(&out.text).unwrap();
    assert!((r.g0_prime.unwrap() - 0.5).abs() < 1e-12);
    assert!((r.a[0][0].re - 1.0).abs() < 1e-12);
    assert_eq!(r.sigma.len(), 2);
    assert!(r.e000.is_none());
}

#[test]
fn report_round_trips() {
    let out = exec(&[
        "analyze",
        "--penning",
        "--omega-c",
        "2",
        "--omega-z",
        "1.1",
        "--epsilon",
        "0.4",
    ]);
    let r = AnalysisReport::from_json(&out.text).unwrap();
    assert_eq!(r.to_json() + "\n", out.text);
    assert_eq!(AnalysisReport::from_json(&r.to_json()).unwrap(), r);
}

#[test]
fn inverted_oscillator_exits_two() {
    let path = fixture("inverted.json", r#"{"n": 1, "B": [[-1, 0], [0, 1]]}"#);
    let out = bin()
        .args(["analyze", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NOT_TRAP));
    let r = AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.regime.as_str(), "unstable");
    assert_eq!(r.offending_modes[0].mode, 1);
}

#[test]
fn degenerate_input_exits_two() {
    let path = fixture(
        "iso.json",
        r#"{"n": 2, "B": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#,
    );
    let out = bin()
        .args(["analyze", "--file", path.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(EXIT_NOT_TRAP));
    let r = AnalysisReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    assert_eq!(r.regime.as_str(), "degenerate");
}

#[test]
fn malformed_input_exits_one() {
    let asym = fixture("asym.json", r#"{"n": 1, "B": [[1, 2], [0, 1]]}"#);
    let broken = fixture("broken.json", r#"{"n": 1, "B": [[1, 0]"#);
    for args in [
        vec!["analyze", "--file", asym.to_str().unwrap()],
        vec!["analyze", "--file", broken.to_str().unwrap()],
        vec!["analyze", "--file", "/nonexistent/b.json"],
        vec!["analyze"],
        vec!["analyze", "--penning", "--epsilon", "1.5"],
        vec!["sweep", "--delta-range", "0.5:1.2"],
        vec!["sweep", "--epsilon-range", "nonsense"],
        vec!["evolve", "--penning", "--t-max", "1", "--steps", "1"],
        vec!["wavefunction", "--penning", "--z", "1:0"],
        vec!["wavefunction", "--penning", "--grid", "1:-5:5:64"],
    ] {
        let out = bin().args(&args).output().unwrap();
        assert_eq!(out.status.code(), Some(EXIT_INPUT), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
    let out = bin()
        .args(["analyze", "--file", asym.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stderr).contains("not_symmetric"));
}

#[test]
fn wavefunction_vacuum_is_symmetric() {
    let path = oscillator();
    let out = exec(&["wavefunction", "--file", path.to_str().unwrap(), "--grid", "1:-8:8:401"]);
    let (header, rows) = csv(&out.text);
    assert_eq!(header, ["x1", "re_phi", "im_phi", "abs_phi_sq"]);
    for (a, b) in rows.iter().zip(rows.iter().rev()) {
        assert!((a[3] - b[3]).abs() < 1e-14);
    }
}

#[test]
fn wavefunction_density_peak_and_norm() {
    let path = oscillator();
    let out = exec(&[
        "wavefunction",
        "--file",
        path.to_str().unwrap(),
        "--z",
        "1:0",
        "--grid",
        "1:-8:8:801",
    ]);
    let (_, rows) = csv(&out.text);
    let h = 16.0 / 800.0;
    let peak = rows.iter().max_by(|a, b| a[3].total_cmp(&b[3])).unwrap();
    assert!((peak[0] - 2f64.sqrt()).abs() <= h);
    let norm: f64 = rows.iter().map(|r| r[3]).sum::<f64>() * h;
    assert!((norm - 1.0).abs() < 1e-5);
}

#[test]
fn wavefunction_penning_grid_norm() {
    let out = exec(&[
        "wavefunction",
        "--penning",
        "--epsilon",
        "0.3",
        "--z",
        "0.2:0.1,-0.3:0,0:0.4",
        "--grid",
        "1:-6:6:48",
        "--grid",
        "2:-6:6:48",
        "--grid",
        "3:-7:7:48",
    ]);
    let (header, rows) = csv(&out.text);
    assert_eq!(header.len(), 6);
    assert_eq!(rows.len(), 48 * 48 * 48);
    let cell = (12.0 / 47.0) * (12.0 / 47.0) * (14.0 / 47.0);
    let norm: f64 = rows.iter().map(|r| r[5]).sum::<f64>() * cell;
    assert!((norm - 1.0).abs() < 1e-5, "{norm}");
}

#[test]
fn sweep_surface_properties() {
    let out = exec(&[
        "sweep",
        "--delta-range",
        "0.05:0.95",
        "--epsilon-range",
        "-0.9:0.9",
        "--steps",
        "19",
    ]);
    let (header, rows) = csv(&out.text);
    assert_eq!(header, ["delta", "epsilon", "dx_dpx", "dy_dpy", "dz_dpz"]);
    assert_eq!(rows.len(), 19 * 19);
    for w in rows.windows(2) {
        assert!(w[0][0] < w[1][0] || (w[0][0] == w[1][0] && w[0][1] < w[1][1]));
    }
    for row in rows.chunks(19) {
        assert!((row[9][2] - 0.5).abs() < 1e-9);
        for k in 0..19 {
            assert!(row[k][2] >= 0.5);
            assert!((row[k][2] - row[18 - k][2]).abs() < 1e-10);
            assert!((row[k][4] - 0.5).abs() < 1e-10);
        }
    }
}

#[test]
fn evolve_conserves_energy_and_modulus() {
    let out = exec(&[
        "evolve",
        "--penning",
        "--epsilon",
        "0.2",
        "--z",
        "0.5:0.1,0.3:-0.2,0:0.7",
        "--t-max",
        "20",
        "--steps",
        "400",
    ]);
    let (header, rows) = csv(&out.text);
    assert_eq!(header.first().unwrap(), "t");
    assert_eq!(header.last().unwrap(), "mean_h");
    assert_eq!(header.len(), 1 + 6 + 3 + 3 + 1);
    let h0 = rows[0][13];
    for r in &rows {
        assert!((r[13] - h0).abs() < 1e-12);
        for k in 0..3 {
            let m = (r[1 + 2 * k].powi(2) + r[2 + 2 * k].powi(2)).sqrt();
            let m0 = (rows[0][1 + 2 * k].powi(2) + rows[0][2 + 2 * k].powi(2)).sqrt();
            assert!((m - m0).abs() < 1e-12);
        }
    }
    // the gamma = -1 mode turns counterclockwise
    for w in rows.windows(2) {
        let a = f64::atan2(w[0][4], w[0][3]);
        let b = f64::atan2(w[1][4], w[1][3]);
        let step = (b - a + 3.0 * std::f64::consts::PI).rem_euclid(2.0 * std::f64::consts::PI) - std::f64::consts::PI;
        assert!(step > 0.0);
    }
}

#[test]
fn outputs_are_deterministic_and_written_to_file() {
    let args = ["sweep", "--steps", "7"];
    let a = bin().args(args).output().unwrap();
    let b = bin().args(args).output().unwrap();
    assert_eq!(a.stdout, b.stdout);

    let target = std::env::temp_dir().join(format!("quadtrap-out-{}.csv", std::process::id()));
    let status = bin()
        .args(["sweep", "--steps", "7", "--out", target.to_str().unwrap()])
        .status()
        .unwrap();
    assert!(status.success());
    assert_eq!(std::fs::read(&target).unwrap(), a.stdout);
    std::fs::remove_file(target).ok();
}
