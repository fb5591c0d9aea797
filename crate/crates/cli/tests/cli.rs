use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn eee(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eee"))
        .args(args)
        .output()
        .unwrap()
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("run.conf");
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn bundled_configs_parse() {
    for entry in std::fs::read_dir(bundled("")).unwrap() {
        let path = entry.unwrap().path();
        let out = eee(&["sweep", "--trials", "2", "--config", path.to_str().unwrap()]);
        assert!(
            out.status.success(),
            "{}: {}",
            path.display(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn fig1_sweep_shape() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig1.csv");
    let out = eee(&[
        "sweep",
        "--config",
        bundled("fig1.conf").to_str().unwrap(),
        "--trials",
        "10",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "axis,axis_value,method,trials,p_detect,p_fa,p_missed,seed"
    );
    assert_eq!(lines.len(), 1 + 5 * 4);
    assert!(!text.contains('\r'));
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields[0], "snapshots");
        assert_eq!(fields[3], "10");
        let probs: Vec<f64> = fields[4..7].iter().map(|f| f.parse().unwrap()).collect();
        assert!(probs.iter().all(|p| (0.0..=1.0).contains(p)));
        assert!((probs.iter().sum::<f64>() - 1.0).abs() <= 2e-6);
    }

    let manifest: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(manifest["emitted_rows"], 20);
    assert_eq!(manifest["spec_revision"], "1");
}

#[test]
fn reruns_are_byte_identical() {
    let config = bundled("fig4.conf");
    let args = [
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "30",
        "--seed",
        "9",
    ];
    let first = eee(&args);
    let second = eee(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let other_seed = eee(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--trials",
        "30",
        "--seed",
        "10",
    ]);
    assert_ne!(first.stdout, other_seed.stdout);
}

#[test]
fn worker_count_does_not_change_output() {
    let config = bundled("fig1.conf");
    let run = |workers: &str| {
        let out = eee(&[
            "sweep",
            "--config",
            config.to_str().unwrap(),
            "--trials",
            "40",
            "--workers",
            workers,
        ]);
        assert!(out.status.success());
        out.stdout
    };
    let single = run("1");
    assert_eq!(run("3"), single);
    assert_eq!(run("8"), single);
    let out = eee(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--workers",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn methods_override_limits_rows() {
    let out = eee(&[
        "sweep",
        "--config",
        bundled("fig1.conf").to_str().unwrap(),
        "--trials",
        "3",
        "--methods",
        "mdl,eee-tail",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 5 * 2);
    assert!(!text.contains(",aic,"));
}

#[test]
fn too_many_sources_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[scenario]\nnum_sensors = 4\nnum_sources = 4\nnum_snapshots = 10\nsnr_db = 0.0\n\
         [sweep]\naxis = \"snapshots\"\nvalues = [10]\nmethods = [\"mdl\"]\ntrials = 2\n",
    );
    let out = eee(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("num_sources"));
}

#[test]
fn unknown_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[scenario]\nnum_sensors = 4\nnum_sources = 1\nnum_snapshots = 10\nsnr_db = 0.0\nsensors = 3\n",
    );
    let out = eee(&["spectrum", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("missing").join("out.csv");
    let out = eee(&[
        "sweep",
        "--config",
        bundled("fig1.conf").to_str().unwrap(),
        "--trials",
        "2",
        "--output",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!target.exists());
}

#[test]
fn spectrum_dump() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "[scenario]\nnum_sensors = 8\nnum_sources = 3\nnum_snapshots = 5000\nsnr_db = 30.0\n",
    );
    let out = eee(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--seed",
        "4",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 8);
    let deltas: Vec<f64> = rows[..7].iter().map(|r| r[3].parse().unwrap()).collect();
    let argmin = (0..7)
        .min_by(|a, b| deltas[*a].total_cmp(&deltas[*b]))
        .unwrap();
    assert_eq!(argmin + 1, 3);
    assert_eq!(rows[7][3], "");

    // a bandwidth on the scale of the noise power, so a tight cluster reads as flat
    let noise = write_config(
        dir.path(),
        "[scenario]\nnum_sensors = 6\nnum_sources = 0\nnum_snapshots = 20000\nsnr_db = 0.0\n\
         [kernel]\nbandwidth = \"fixed\"\nh = 1.0\n",
    );
    let text = stdout(&eee(&["spectrum", "--config", noise.to_str().unwrap()]));
    for row in text.lines().skip(1) {
        let fields: Vec<&str> = row.split(',').collect();
        let lambda: f64 = fields[1].parse().unwrap();
        assert!((lambda - 1.0).abs() < 0.1, "{row}");
        if !fields[3].is_empty() {
            assert!(fields[3].parse::<f64>().unwrap().abs() < 1e-2, "{row}");
        }
    }
}

#[test]
fn entropy_command() {
    let out = eee(&["entropy", "0", "0", "0", "--bandwidth", "1"]);
    assert_eq!(stdout(&out).trim(), "0.918938533205");
    let out = eee(&["entropy", "0,1", "--bandwidth", "1"]);
    assert!(stdout(&out).trim().starts_with("1.13800"));
    let out = eee(&["entropy", "-1.5", "2", "4"]);
    assert!(out.status.success());

    let out = eee(&["entropy", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eee(&["entropy"]);
    assert_eq!(out.status.code(), Some(2));
    let out = eee(&["entropy", "x"]);
    assert_eq!(out.status.code(), Some(2));
}
