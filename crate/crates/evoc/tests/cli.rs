//! End-to-end checks of the `evoc` binary.

use std::fs;
use std::path::Path;
use std::process::Command;

fn evoc() -> Command {
    Command::new(env!("CARGO_BIN_EXE_evoc"))
}

#[test]
fn fig8_preset_writes_snapshots_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoc()
        .args(["--preset", "fig8", "--out-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let base = dir.path().join("fig8");
    assert!(base.join("aggregated.csv").exists());
    assert!(base.join("run_000.csv").exists());
    let snap = fs::read_to_string(base.join("snap_r000_t0004.txt")).unwrap();
    assert_eq!(snap.lines().count(), 7);
    assert_eq!(snap.lines().next().unwrap().split(' ').count(), 7);
}

#[test]
fn flags_build_a_custom_run() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoc()
        .args([
            "--rows", "5", "--cols", "5", "--iterations", "10", "--replicates", "2",
            "--ratio", "2:1", "--need", "both", "--y", "1", "--z", "1",
            "--border", "vertical,2,0,1,0,10", "--seed", "7", "--out-dir",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let agg = fs::read_to_string(dir.path().join("aggregated.csv")).unwrap();
    assert_eq!(agg.lines().count(), 12); // header + t=0..10
}

#[test]
fn same_invocation_twice_is_byte_identical() {
    let run_once = |dir: &Path| {
        let out = evoc()
            .args([
                "--rows", "6", "--cols", "6", "--iterations", "15", "--replicates", "3",
                "--snapshot-every", "5", "--out-dir",
            ])
            .arg(dir)
            .output()
            .unwrap();
        assert!(out.status.success());
        let mut files: Vec<_> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
        files.sort();
        files
            .into_iter()
            .map(|p| (p.file_name().unwrap().to_owned(), fs::read(&p).unwrap()))
            .collect::<Vec<_>>()
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    assert_eq!(run_once(d1.path()), run_once(d2.path()));
}

#[test]
fn invalid_density_is_a_diagnostic() {
    let out = evoc().args(["--density", "1.5"]).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("density"), "{stderr}");
}

#[test]
fn unknown_manifest_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "rows = 4\nwibble = true\n").unwrap();
    let out = evoc().arg("--config").arg(&cfg).output().unwrap();
    assert!(!out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("wibble"), "{stderr}");
}

#[test]
fn env_var_sets_output_root() {
    let dir = tempfile::tempdir().unwrap();
    let out = evoc()
        .args(["--rows", "4", "--cols", "4", "--iterations", "2", "--replicates", "1"])
        .env("EVOC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.path().join("aggregated.csv").exists());
}
