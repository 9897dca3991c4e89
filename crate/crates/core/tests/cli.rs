use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hbt_speckle::experiment::ExperimentConfig;
use hbt_speckle::speckle::summarize;

const BIN: &str = env!("CARGO_BIN_EXE_hbt-speckle");

const SMALL: &str = r#"
schema_version = 1
name = "small"
transitions = [
  { channel = "distinguishable", input = [1, 3], output = [4, 6] },
  { channel = "fermionic", input = [1, 3], output = [4, 6] },
  { channel = "bosonic", input = [2, 2], output = [5, 5], label = "bound" },
]
windows = [{ t_max = 3e4 }, { label = "late", t0 = 1e6, span = 2e4 }]
seeds = { base = 5, count = 3 }
fits = [{ kind = "exponential" }, { kind = "k_dist" }, { kind = "rician" }, { kind = "compound_rician" }]
compound = { n_dominant = 3, mc_samples = 2000 }

[chain]
n = 6
w = 0.3
u = [0.0, 1.5]
"#;

fn hbt(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    fs::write(&path, text).unwrap();
    path
}

fn run_small(dir: &Path, out: &Path, threads: &str) -> Output {
    let config = write_config(dir, SMALL);
    hbt(&[
        "run",
        config.to_str().unwrap(),
        "--out-dir",
        out.to_str().unwrap(),
        "--threads",
        threads,
    ])
}

fn read_tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                files.push((rel, fs::read(&path).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn artifacts_are_identical_across_thread_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert!(run_small(tmp.path(), &out, "1").status.success());
    let first = read_tree(&out);
    fs::remove_dir_all(&out).unwrap();
    assert!(run_small(tmp.path(), &out, "3").status.success());
    let second = read_tree(&out);
    assert_eq!(first.len(), second.len());
    for (a, b) in first.iter().zip(&second) {
        assert_eq!(a.0, b.0);
        assert!(a.1 == b.1, "{} differs", a.0);
    }
}

#[test]
fn summary_contrast_matches_series_files() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let result = run_small(tmp.path(), &out, "2");
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    let cases = summary["cases"].as_array().unwrap();
    // 2 U values x 3 transitions x 2 windows.
    assert_eq!(cases.len(), 12);
    let mut checked = 0;
    for case in cases {
        let id = case["case"].as_str().unwrap();
        for r in case["realizations"].as_array().unwrap() {
            let seed = r["seed"].as_u64().unwrap();
            let text = fs::read_to_string(out.join("series").join(format!("{id}__s{seed}.csv"))).unwrap();
            let mut lines = text.lines();
            assert_eq!(lines.next(), Some("t,I"));
            let intensities: Vec<f64> = lines.map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
            assert_eq!(intensities.len() as u64, case["grid"]["count"].as_u64().unwrap());
            let recomputed = summarize(&intensities).unwrap().contrast;
            let stored = r["summary"]["contrast"].as_f64().unwrap();
            assert!((recomputed - stored).abs() <= 1e-12, "{id} seed {seed}");
            checked += 1;
        }
    }
    assert_eq!(checked, 36);
}

#[test]
fn artifact_schemas() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    assert!(run_small(tmp.path(), &out, "1").status.success());

    let pdf = fs::read_to_string(out.join("pdf.csv")).unwrap();
    let mut lines = pdf.lines();
    assert_eq!(lines.next(), Some("bin_center,density,count,channel,case"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // Default binning: 16 per decade over 6 decades, for each of 12 cases.
    assert_eq!(rows.len(), 96 * 12);
    assert!(rows.iter().all(|r| r.len() == 5));
    assert!(rows
        .iter()
        .any(|r| r[3] == "fermionic" && r[4] == "fermionic_1-3_4-6_u1.5_late"));

    let curves = fs::read_to_string(out.join("fit_curves.csv")).unwrap();
    assert!(curves.starts_with("x,density,model,case\n"));
    assert!(curves.contains(",compound_rician,bound_u0_full"));

    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("meta.json")).unwrap()).unwrap();
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(meta["seeds"], serde_json::json!([5, 6, 7]));
    assert_eq!(meta["config"]["chain"]["n"], 6);
    assert_eq!(meta["series_files"].as_array().unwrap().len(), 36);
    let echoed: ExperimentConfig = serde_json::from_value(meta["config"].clone()).unwrap();
    assert_eq!(echoed.seeds.count, 3);

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["schema_version"], 1);
    let case = &summary["cases"][0];
    for key in ["mean", "std_dev", "contrast", "normalized_moments", "count"] {
        assert!(!case["pooled"][key].is_null(), "{key}");
    }
    assert_eq!(case["ensemble"]["contrast"]["count"], 3);
    let fits = case["realizations"][0]["fits"].as_array().unwrap();
    let models: Vec<&str> = fits.iter().map(|f| f["model"].as_str().unwrap()).collect();
    assert_eq!(models, ["exponential", "k", "rician", "compound_rician"]);
    for f in fits {
        assert!(f["ks_distance"].is_f64() || f["error"].is_string());
    }
}

#[test]
fn validate_reports_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let out = hbt(&["validate", "--preset", "fig2"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok");

    let bad = SMALL.replace(
        r#"{ channel = "fermionic", input = [1, 3], output = [4, 6] }"#,
        r#"{ channel = "fermionic", input = [3, 3], output = [4, 6] }"#,
    );
    let path = write_config(tmp.path(), &bad);
    let out = hbt(&["validate", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout)
        .contains("error: fermionic_3-3_4-6: fermionic pairs need two distinct sites"));

    let slow = SMALL.replace("{ t_max = 3e4 }", "{ t_max = 300, step = 1 }");
    let path = write_config(tmp.path(), &slow);
    let out = hbt(&["validate", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("warning: grid 'full': step*J = 1 < 10"));
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let path = write_config(
        tmp.path(),
        &SMALL.replace("name = \"small\"", "name = \"small\"\ncolour = 3"),
    );
    let out = hbt(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let path = write_config(tmp.path(), &SMALL.replace("n = 6", "n = 4"));
    let out = hbt(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("site 5 outside [1, 4]"));

    let missing = tmp.path().join("nope.toml");
    assert_eq!(hbt(&["run", missing.to_str().unwrap()]).status.code(), Some(3));

    // Output directory blocked by a regular file.
    let blocker = tmp.path().join("blocker");
    fs::write(&blocker, "x").unwrap();
    let path = write_config(tmp.path(), SMALL);
    let out = hbt(&[
        "run",
        path.to_str().unwrap(),
        "--out-dir",
        blocker.join("out").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(3));

    assert_eq!(
        hbt(&["fig2", "--scale", "0.5", "--out-dir", "/dev/null/x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn presets_print_valid_configs() {
    for preset in ["fig2", "fig3", "fig4"] {
        let out = hbt(&[preset, "--print-config", "--seed", "42", "--scale", "100"]);
        assert!(out.status.success());
        let config = ExperimentConfig::from_toml_str(&String::from_utf8_lossy(&out.stdout)).unwrap();
        assert_eq!(config.seeds.base, 42);
        assert_eq!(config.scale, 100.0);
        assert!(config.validate().is_empty());
    }
}

#[test]
fn seed_flag_changes_the_realization() {
    let tmp = tempfile::tempdir().unwrap();
    let config = write_config(tmp.path(), &SMALL.replace("count = 3", "count = 1"));
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    for (dir, seed) in [(&a, "5"), (&b, "6")] {
        let out = hbt(&[
            "run",
            config.to_str().unwrap(),
            "--out-dir",
            dir.to_str().unwrap(),
            "--seed",
            seed,
        ]);
        assert!(out.status.success());
    }
    let read = |d: &Path| fs::read_to_string(d.join("pdf.csv")).unwrap();
    assert_ne!(read(&a), read(&b));
}
