//! End-to-end runs of the `harper` binary: determinism, row-count contracts,
//! exit codes and the output-directory lock.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use harper_experiments::artifact::LOCK_FILE;

const SMALL: &str = r#"
seed = 11

[lattice]
n_sites = 12

[propagation]
z_mm = 10.0
injections = [1, 6]
n_snapshots = 5
region = [1, 2, 3]

[bands]
n_phi = 8

[counts]
duration_s = 0.5
bulk_input = 6
bulk_sites = [7, 9]

[disorder]
ensemble = 6
"#;

fn harper(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_harper"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run(cmd: &str, config: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![
        cmd,
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ];
    args.extend_from_slice(extra);
    harper(&args)
}

fn data_rows(path: &Path) -> usize {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert!(!r.headers().unwrap().is_empty());
    r.records().count()
}

fn manifest(out: &Path, cmd: &str) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(out.join(format!("{cmd}.manifest.json"))).unwrap())
        .unwrap()
}

const COMMANDS: [&str; 6] = [
    "calibrate",
    "bands",
    "evolve",
    "correlate",
    "counts",
    "disorder",
];

#[test]
fn identical_seed_gives_identical_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for cmd in COMMANDS {
        for out in [&a, &b] {
            let o = run(cmd, &cfg, out, &[]);
            assert!(
                o.status.success(),
                "{cmd}: {}",
                String::from_utf8_lossy(&o.stderr)
            );
        }
        let (ma, mb) = (manifest(&a, cmd), manifest(&b, cmd));
        assert_eq!(ma["outputs"], mb["outputs"], "{cmd}");
        for f in ma["outputs"].as_array().unwrap() {
            let name = f["file"].as_str().unwrap();
            assert_eq!(
                fs::read(a.join(name)).unwrap(),
                fs::read(b.join(name)).unwrap(),
                "{name}"
            );
        }
    }
    assert!(!a.join(LOCK_FILE).exists());
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let (a, b, c) = (
        dir.path().join("a"),
        dir.path().join("b"),
        dir.path().join("c"),
    );
    assert!(run("counts", &cfg, &a, &[]).status.success());
    assert!(run("counts", &cfg, &b, &["--seed", "11"]).status.success());
    assert!(run("counts", &cfg, &c, &["--seed", "12"]).status.success());
    let read = |d: &Path| fs::read(d.join("counts.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));
    assert_eq!(manifest(&c, "counts")["seed"], 12);
}

#[test]
fn row_counts_follow_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("o");
    for cmd in COMMANDS {
        assert!(run(cmd, &cfg, &out, &[]).status.success(), "{cmd}");
    }
    let n = 12;
    assert_eq!(data_rows(&out.join("bands.csv")), 8 * n);
    for a in [1, 6] {
        assert_eq!(data_rows(&out.join(format!("evolve_site{a}.csv"))), 5 * n);
        assert_eq!(data_rows(&out.join(format!("final_site{a}.csv"))), n);
        assert_eq!(
            data_rows(&out.join(format!("gamma_site{a}.csv"))),
            n * (n + 1) / 2
        );
        assert!(fs::read_to_string(out.join(format!("evolve_site{a}.svg")))
            .unwrap()
            .starts_with("<svg"));
    }
    assert_eq!(data_rows(&out.join("correlate.csv")), 2);
    assert_eq!(data_rows(&out.join("counts.csv")), 2 + 2);
    assert_eq!(data_rows(&out.join("disorder.csv")), 6);
    assert_eq!(data_rows(&out.join("disorder_summary.csv")), 3);
    assert_eq!(data_rows(&out.join("calibration.csv")), 1);

    let m = manifest(&out, "bands");
    assert_eq!(m["outputs"][0]["rows"], 8 * n);
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(m["timings"]["compute_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn calibrated_boundary_coincidence_in_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("o");
    assert!(run("correlate", &cfg, &out, &[]).status.success());
    let mut r = csv::Reader::from_path(out.join("correlate.csv")).unwrap();
    let first = r.records().next().unwrap().unwrap();
    let gamma: f64 = first[1].parse().unwrap();
    assert!((gamma - 0.946).abs() < 0.003, "{gamma}");
}

#[test]
fn zero_length_is_a_delta() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL
        .replace("z_mm = 10.0", "z_mm = 0.0\ncalibrate = false")
        .replace("n_snapshots = 5", "n_snapshots = 1");
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("o");
    assert!(run("evolve", &cfg, &out, &[]).status.success());
    assert!(run("correlate", &cfg, &out, &[]).status.success());
    let text = fs::read_to_string(out.join("evolve_site6.csv")).unwrap();
    let nonzero: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.ends_with(",0"))
        .collect();
    assert_eq!(nonzero, vec!["0,6,1"]);
    let text = fs::read_to_string(out.join("gamma_site1.csv")).unwrap();
    assert_eq!(text.lines().nth(1).unwrap(), "1,1,1,1");
}

#[test]
fn undefined_estimates_are_marked_null() {
    let dir = tempfile::tempdir().unwrap();
    // no darks and a site the light never reaches at z = 0
    let text = SMALL.replace("z_mm = 10.0", "z_mm = 0.0\ncalibrate = false")
        + "\n[detection]\ndark_prob = 0.0\n";
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("o");
    let o = run("counts", &cfg, &out, &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(out.join("counts.csv")).unwrap();
    let bulk: Vec<&str> = text.lines().filter(|l| l.starts_with("bulk")).collect();
    assert_eq!(bulk.len(), 2);
    for line in bulk {
        assert!(line.ends_with("null,null,null"), "{line}");
        assert!(line.contains(",0,0,0,"), "{line}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");

    // unreadable config file: I/O
    let o = run("bands", &dir.path().join("absent.toml"), &out, &[]);
    assert_eq!(o.status.code(), Some(4));

    // malformed and invalid configs
    for bad in [
        "seed = \"x\"",
        "seed = 1\n[lattice]\nlambda = 1.5",
        "[propagation]\ninjections = [99]\nseed = 1",
        "bogus = 1",
    ] {
        let cfg = write_config(dir.path(), bad);
        assert_eq!(
            run("bands", &cfg, &out, &[]).status.code(),
            Some(2),
            "{bad}"
        );
    }
    // no seed anywhere
    let cfg = write_config(dir.path(), "");
    assert_eq!(run("bands", &cfg, &out, &[]).status.code(), Some(2));

    // calibration target out of reach: numerical
    let cfg = write_config(
        dir.path(),
        "seed = 1\n[propagation]\nz_mm = 0.001\ncalibration_target = 0.5",
    );
    let o = run("calibrate", &cfg, &out, &[]);
    assert_eq!(
        o.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(String::from_utf8_lossy(&o.stderr).contains("unreachable"));

    // output path is a file
    let cfg = write_config(dir.path(), SMALL);
    let file = dir.path().join("plain");
    fs::write(&file, "x").unwrap();
    assert_eq!(run("bands", &cfg, &file, &[]).status.code(), Some(4));

    assert!(run("bands", &cfg, &out, &[]).status.success());
}

#[test]
fn held_lock_blocks_run_without_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let out = dir.path().join("o");
    fs::create_dir_all(&out).unwrap();
    fs::write(out.join(LOCK_FILE), "").unwrap();
    let o = run("bands", &cfg, &out, &[]);
    assert_eq!(o.status.code(), Some(4));
    assert!(!out.join("bands.csv").exists());
    assert!(out.join(LOCK_FILE).exists());
}

#[test]
fn output_dir_may_come_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config");
    let text = format!("output_dir = {:?}\n{SMALL}", target.to_str().unwrap());
    let cfg = write_config(dir.path(), &text);
    let o = harper(&["calibrate", "--config", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(target.join("calibration.csv").exists());
    assert!(String::from_utf8_lossy(&o.stdout).contains("calibration.csv"));
}

#[test]
fn uniform_lattice_has_no_boundary_modes() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("n_sites = 12", "n_sites = 12\nlambda = 0.0");
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("o");
    assert!(run("bands", &cfg, &out, &[]).status.success());
    let mut r = csv::Reader::from_path(out.join("bands.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert!(rows.iter().all(|x| &x[4] == "bulk"));
    // the spectrum does not depend on phi without modulation
    let first: Vec<&str> = rows[..12].iter().map(|x| &x[3]).collect();
    for chunk in rows.chunks(12) {
        let e: Vec<&str> = chunk.iter().map(|x| &x[3]).collect();
        assert_eq!(e, first);
    }
}

#[test]
fn clean_disorder_ensemble_has_no_spread() {
    let dir = tempfile::tempdir().unwrap();
    let text = SMALL.replace("ensemble = 6", "ensemble = 6\nstrength = 0.0");
    let cfg = write_config(dir.path(), &text);
    let out = dir.path().join("o");
    assert!(run("disorder", &cfg, &out, &[]).status.success());
    let mut r = csv::Reader::from_path(out.join("disorder_summary.csv")).unwrap();
    let headers = r.headers().unwrap().clone();
    let std_col = headers.iter().position(|h| h == "std").unwrap();
    for rec in r.records() {
        let rec = rec.unwrap();
        assert_eq!(&rec[std_col], "0", "{rec:?}");
    }
}
