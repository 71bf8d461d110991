//! End-to-end checks of the command-line binary: artifacts land under the
//! chosen output directory, runs are byte-reproducible, and failures map to
//! distinct exit codes.

use std::fs;
use std::path::Path;
use std::process::Command;

fn udcsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_udcsim"))
}

fn read_dir_sorted(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut entries = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(current) = stack.pop() {
        for entry in fs::read_dir(&current).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path
                    .strip_prefix(dir)
                    .unwrap()
                    .to_string_lossy()
                    .into_owned();
                entries.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    entries.sort();
    entries
}

#[test]
fn fem_attenuation_writes_expected_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let status = udcsim()
        .args(["fem-attenuation", "--quiet", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    for name in ["fem_attenuation.csv", "fem_attenuation.gp", "summary.txt"] {
        assert!(dir.path().join(name).is_file(), "missing {name}");
    }
    let summary = fs::read_to_string(dir.path().join("summary.txt")).unwrap();
    assert!(
        summary.contains("displacement_at_1000m_nm = 131.65"),
        "{summary}"
    );
}

#[test]
fn same_seed_same_bytes_through_the_binary() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [dir_a.path(), dir_b.path()] {
        let status = udcsim()
            .args(["hdfs-cascade", "--quiet", "--seed", "123", "--out"])
            .arg(dir)
            .status()
            .unwrap();
        assert!(status.success());
    }
    assert_eq!(read_dir_sorted(dir_a.path()), read_dir_sorted(dir_b.path()));
}

#[test]
fn config_errors_exit_with_code_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_scenario = dir.path().join("bad.toml");
    fs::write(
        &bad_scenario,
        "name = \"bad\"\nseed = 1\nhorizon_s = -4.0\n\n[experiment]\nkind = \"hdfs_cascade\"\n",
    )
    .unwrap();
    let output = udcsim()
        .args(["run", "--quiet", "--scenario"])
        .arg(&bad_scenario)
        .args(["--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(2),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(String::from_utf8_lossy(&output.stderr).contains("horizon_s"));

    // run without --scenario is also a configuration error.
    let output = udcsim().args(["run", "--quiet"]).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn run_executes_an_explicit_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("bench.toml");
    fs::write(
        &scenario,
        "name = \"bench\"\nseed = 9\nhorizon_s = 10.0\n\n[experiment]\nkind = \"benchmark\"\nworkload = \"seq_write\"\nduration_s = 10.0\n",
    )
    .unwrap();
    let status = udcsim()
        .args(["run", "--quiet", "--scenario"])
        .arg(&scenario)
        .args(["--out"])
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert!(status.success());
    let trace = fs::read_to_string(dir.path().join("out/trace.csv")).unwrap();
    assert!(trace.starts_with("t_s,throughput_mb_s"));
    // Header plus one sample per second over the full horizon, inclusive.
    assert_eq!(trace.lines().count(), 12);
}

#[test]
fn calibration_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken_calibration.toml");
    fs::write(&broken, "this is not a calibration\n").unwrap();
    let output = udcsim()
        .args(["fem-attenuation", "--quiet", "--out"])
        .arg(dir.path())
        .env("UDCSIM_CALIBRATION", &broken)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));

    // --calibration takes precedence over the environment.
    let status = udcsim()
        .args(["fem-attenuation", "--quiet", "--out"])
        .arg(dir.path())
        .env("UDCSIM_CALIBRATION", &broken)
        .args(["--calibration", "assets/default_calibration.toml"])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn scenario_can_pin_its_own_calibration() {
    let dir = tempfile::tempdir().unwrap();
    // A calibration that disables degradation entirely: identity-ish curve.
    let calib = include_str!("../assets/default_calibration.toml")
        .replace("[26.0, 0.83]", "[26.0, 1.0]")
        .replace("[28.0, 0.60]", "[28.0, 1.0]")
        .replace("[30.0, 0.35]", "[30.0, 1.0]")
        .replace("[32.0, 0.0]", "[32.0, 1.0]");
    fs::write(dir.path().join("no_damage.toml"), calib).unwrap();
    fs::write(
        dir.path().join("scenario.toml"),
        "name = \"pinned\"\nseed = 1\nhorizon_s = 5.0\ncalibration = \"no_damage.toml\"\n\n\
         [storage]\nnoise_sigma_frac = 0.0\n\n\
         [experiment]\nkind = \"volume_curve\"\nvolumes_db = [30.0]\ntrials = 1\nduration_s = 5.0\n",
    )
    .unwrap();
    let status = udcsim()
        .args(["run", "--quiet", "--scenario"])
        .arg(dir.path().join("scenario.toml"))
        .args(["--out"])
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert!(status.success());
    // With the pinned no-damage curve, 30 dB leaves throughput untouched.
    let csv = fs::read_to_string(dir.path().join("out/volume_curve.csv")).unwrap();
    assert!(csv.contains("30.0,1.000000"), "{csv}");
}

#[test]
fn runtime_failures_exit_with_code_one() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("blocker");
    fs::write(&blocker, "a file where a directory must go").unwrap();
    let output = udcsim()
        .args(["fem-attenuation", "--quiet", "--out"])
        .arg(blocker.join("nested"))
        .output()
        .unwrap();
    assert_eq!(
        output.status.code(),
        Some(1),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn detect_profile_writes_a_loadable_store() {
    let dir = tempfile::tempdir().unwrap();
    let status = udcsim()
        .args(["detect-profile", "--quiet", "--trials", "5", "--out"])
        .arg(dir.path())
        .status()
        .unwrap();
    assert!(status.success());
    let store = dir.path().join("profiles");
    let profiles =
        udcsim::detector::load_profile_store(&store, &udcsim::detector::PcmConfig::default())
            .unwrap();
    assert_eq!(profiles.len(), 4);
    assert!(profiles.iter().all(|p| p.calibration_distances.len() == 5));
}
