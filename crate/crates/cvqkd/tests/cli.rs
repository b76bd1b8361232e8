//! Black-box tests of the `cvqkd` executable: exit codes, byte-exact
//! determinism of the CSV outputs across worker counts and repeated runs,
//! flag overrides, and the constraint-operator dump.

use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvqkd"))
        .args(args)
        .output()
        .expect("failed to spawn cvqkd")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process terminated by signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is not UTF-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is not UTF-8")
}

fn write_config(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).expect("write config");
    path
}

const SWEEP_CONFIG: &str = r#"
schema_version = 1
id = "cli_sweep"
constellation = "qpsk"
modulation_variance = 0.456
excess_noise_estimated = 0.01
reconciliation_efficiency = 0.95
fluctuation_variances = [0.0, 2.0e-3]
distances_km = [0.0, 5.0, 10.0, 15.0, 20.0]
"#;

const MC_CONFIG: &str = r#"
schema_version = 1
id = "cli_mc"
constellation = "qpsk"
modulation_variance = 0.456
excess_noise_estimated = 0.01
reconciliation_efficiency = 0.95
fluctuation_variances = [2.0e-3]
distances_km = [10.0]
seed = 7
mc_trials = 8
mc_pulses_per_trial = 20000
mc_calibration_samples = 8
mc_calibration_reps = 500
"#;

#[test]
fn sweep_output_is_byte_identical_across_runs_and_worker_counts() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "sweep.toml", SWEEP_CONFIG);
    let config = config.to_str().unwrap();

    let mut outputs = Vec::new();
    for (sub, jobs) in [("a", "1"), ("b", "4"), ("c", "4")] {
        let out_dir = tmp.path().join(sub);
        let out = run(&[
            "sweep",
            "--config",
            config,
            "--out",
            out_dir.to_str().unwrap(),
            "--jobs",
            jobs,
        ]);
        assert_eq!(exit_code(&out), 0, "sweep failed: {}", stderr(&out));
        assert!(
            stdout(&out).starts_with("sweep cli_sweep: 10 rows (0 infeasible) -> "),
            "unexpected status line: {}",
            stdout(&out)
        );
        let csv = fs::read(out_dir.join("cli_sweep.csv")).expect("sweep CSV missing");
        assert!(out_dir.join("cli_sweep.columns.toml").is_file(), "column manifest missing");
        outputs.push(csv);
    }
    assert_eq!(outputs[0], outputs[1], "CSV differs between --jobs 1 and --jobs 4");
    assert_eq!(outputs[1], outputs[2], "CSV differs between two identical runs");

    let text = String::from_utf8(outputs[0].clone()).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("scenario_id,distance_km,fluctuation_variance,"));
    assert_eq!(text.lines().count(), 11, "expected header plus 10 rows");
}

#[test]
fn min_vk_writes_suffixed_outputs() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(
        tmp.path(),
        "minvk.toml",
        r#"
schema_version = 1
id = "cli_minvk"
constellation = "qpsk"
modulation_variance = 0.456
excess_noise_estimated = 0.01
reconciliation_efficiency = 0.95
fluctuation_variances = [2.0e-3]
distances_km = [5.0, 10.0]
max_fluctuation_variance = 0.05
"#,
    );
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "min-vk",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "min-vk failed: {}", stderr(&out));
    assert!(stdout(&out).starts_with("min-vk cli_minvk: 2 rows -> "));
    assert!(out_dir.join("cli_minvk-min-vk.csv").is_file());
    assert!(out_dir.join("cli_minvk-min-vk.columns.toml").is_file());
}

#[test]
fn config_errors_exit_with_code_2() {
    let tmp = TempDir::new().unwrap();
    let out_dir = tmp.path().join("out");
    let out_dir = out_dir.to_str().unwrap();

    // Missing file.
    let missing = tmp.path().join("nope.toml");
    let out = run(&["sweep", "--config", missing.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(exit_code(&out), 2, "missing config must exit 2");
    assert!(stderr(&out).starts_with("error: "), "stderr: {}", stderr(&out));

    // Unknown key (typo protection).
    let typo = write_config(
        tmp.path(),
        "typo.toml",
        &format!("{SWEEP_CONFIG}\nfluctuaton_variance = 1.0e-3\n"),
    );
    let out = run(&["sweep", "--config", typo.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(exit_code(&out), 2, "unknown config key must exit 2");

    // Invalid value caught by validation.
    let bad = write_config(
        tmp.path(),
        "bad.toml",
        &SWEEP_CONFIG.replace("reconciliation_efficiency = 0.95", "reconciliation_efficiency = 1.5"),
    );
    let out = run(&["sweep", "--config", bad.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(exit_code(&out), 2, "invalid efficiency must exit 2");

    // Both noise anchors set at once.
    let twice = write_config(
        tmp.path(),
        "twice.toml",
        &format!("{SWEEP_CONFIG}\nexcess_noise_practical = 0.02\n"),
    );
    let out = run(&["sweep", "--config", twice.to_str().unwrap(), "--out", out_dir]);
    assert_eq!(exit_code(&out), 2, "double noise anchor must exit 2");

    // Invalid flag value (wrong mutual-information rule).
    let ok = write_config(tmp.path(), "ok.toml", SWEEP_CONFIG);
    let out = run(&[
        "sweep",
        "--config",
        ok.to_str().unwrap(),
        "--out",
        out_dir,
        "--iab-variant",
        "nonsense",
    ]);
    assert_eq!(exit_code(&out), 2, "invalid --iab-variant must exit 2");
}

#[test]
fn runtime_failures_exit_with_code_1() {
    let tmp = TempDir::new().unwrap();
    // The bracket cap is far too small to defeat this link, so the
    // threshold search must fail at runtime rather than report nonsense.
    let config = write_config(
        tmp.path(),
        "bracket.toml",
        r#"
schema_version = 1
id = "cli_bracket"
constellation = "qpsk"
modulation_variance = 0.456
excess_noise_estimated = 0.01
reconciliation_efficiency = 0.95
fluctuation_variances = [2.0e-3]
distances_km = [1.0]
max_fluctuation_variance = 1.0e-6
"#,
    );
    let out_dir = tmp.path().join("out");
    let out = run(&[
        "min-vk",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1, "unbracketed threshold search must exit 1");
    assert!(stderr(&out).starts_with("error: "), "stderr: {}", stderr(&out));
}

#[test]
fn props_subcommand_reports_every_property() {
    let out = run(&["props", "--seed", "1"]);
    assert_eq!(exit_code(&out), 0, "props failed: {}", stderr(&out));
    let text = stdout(&out);
    let prop_lines = text.lines().filter(|l| l.starts_with("prop ")).count();
    assert_eq!(prop_lines, 22, "expected one line per property:\n{text}");
    assert!(
        text.lines().any(|l| l == "props: 22/22 passed (seed 1)"),
        "missing summary line:\n{text}"
    );
    assert!(!text.contains(" fail "), "a property failed:\n{text}");
}

#[test]
fn seed_override_controls_monte_carlo_output() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "mc.toml", MC_CONFIG);
    let config = config.to_str().unwrap();

    let mut csvs = Vec::new();
    for (sub, seed) in [("a", None), ("b", Some("7")), ("c", Some("8"))] {
        let out_dir = tmp.path().join(sub);
        let mut args = vec!["mc-bias", "--config", config, "--out"];
        args.push(out_dir.to_str().unwrap());
        if let Some(s) = seed {
            args.extend(["--seed", s]);
        }
        let out = run(&args);
        assert_eq!(exit_code(&out), 0, "mc-bias failed: {}", stderr(&out));
        assert!(stdout(&out).starts_with("mc-bias cli_mc: 8 ratios, max |z| = "));
        csvs.push(fs::read(out_dir.join("cli_mc-mc-bias.csv")).expect("mc-bias CSV missing"));
    }
    assert_eq!(csvs[0], csvs[1], "--seed equal to the config seed must not change bytes");
    assert_ne!(csvs[1], csvs[2], "--seed override must change the Monte Carlo draws");
}

#[test]
fn iab_variant_override_changes_sweep_rates() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "sweep.toml", SWEEP_CONFIG);
    let config = config.to_str().unwrap();

    let discrete_dir = tmp.path().join("discrete");
    let out = run(&["sweep", "--config", config, "--out", discrete_dir.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);

    let gaussian_dir = tmp.path().join("gaussian");
    let out = run(&[
        "sweep",
        "--config",
        config,
        "--out",
        gaussian_dir.to_str().unwrap(),
        "--iab-variant",
        "gaussian",
    ]);
    assert_eq!(exit_code(&out), 0);

    let discrete = fs::read(discrete_dir.join("cli_sweep.csv")).unwrap();
    let gaussian = fs::read(gaussian_dir.join("cli_sweep.csv")).unwrap();
    assert_ne!(discrete, gaussian, "the Gaussian-capacity rule must change the rates");
}

#[test]
fn constraints_dump_round_trips_and_enforces_memory_budget() {
    let tmp = TempDir::new().unwrap();
    let config = write_config(tmp.path(), "sweep.toml", SWEEP_CONFIG);
    let dump = tmp.path().join("dumps/qpsk_operators.txt");
    let out = run(&[
        "constraints-dump",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "constraints-dump failed: {}", stderr(&out));
    assert!(stdout(&out).starts_with("constraints-dump cli_sweep: 6 operators (4x"));

    let file = fs::File::open(&dump).expect("dump file missing");
    let ops = cvqkd::constraints::read_dump(BufReader::new(file)).expect("dump must parse");
    assert_eq!(ops.len(), 6);

    // The full 256-QAM register-x-mode space exceeds any sane budget; the
    // command must refuse with a runtime error, not try to allocate.
    let qam = write_config(
        tmp.path(),
        "qam.toml",
        r#"
schema_version = 1
id = "cli_qam"
constellation = "pcs-qam"
qam_order = 256
shaping_nu = 0.039
modulation_variance = 6.332
excess_noise_estimated = 0.05
reconciliation_efficiency = 0.95
fluctuation_variances = [2.0e-3]
distances_km = [30.0]
"#,
    );
    let dump2 = tmp.path().join("dumps/qam_operators.txt");
    let out = run(&[
        "constraints-dump",
        "--config",
        qam.to_str().unwrap(),
        "--out",
        dump2.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 1, "over-budget dump must exit 1, got: {}", stderr(&out));
    assert!(stderr(&out).starts_with("error: "));
}
