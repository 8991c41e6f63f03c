//! End-to-end tests of the `ovnn` binary: exit codes, file outputs,
//! determinism, and the gains round-trip.

use std::path::Path;
use std::process::{Command, Output};

fn ovnn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ovnn"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_str().unwrap().to_string()
}

const EXAMPLE1_CHECK: &str = r#"
[network]
builtin = "example1"
delay_variant = "constant"

[rate]
family = "exponential"
alpha = 0.02
"#;

const EXAMPLE2_CHECK: &str = r#"
[network]
builtin = "example2"
"#;

const EXAMPLE2_GAINS: &str = r#"
[network]
builtin = "example2"

[controller]
family = "design"
margin = 0.1

[sim]
t_end = 4.0
target = [[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0]]
initial_random = { lo = -3.0, hi = 3.0 }
"#;

#[test]
fn check_example1_is_satisfied() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.toml", EXAMPLE1_CHECK);
    let out = ovnn(&["check", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = std::fs::read_to_string(dir.path().join("out/check_report.toml")).unwrap();
    assert!(report.contains("mu_stability"));
    assert!(report.contains("satisfied = true"));
    // the report lists all 16 criterion values
    let parsed: toml::Value = toml::from_str(&report).unwrap();
    let criteria = parsed["criteria"].as_array().unwrap();
    let values = criteria[1]["values"].as_array().unwrap();
    assert_eq!(values.len(), 2);
    assert_eq!(values[0].as_array().unwrap().len(), 8);
}

#[test]
fn check_example2_fails_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.toml", EXAMPLE2_CHECK);
    let out = ovnn(&["check", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("NOT satisfied"));
}

#[test]
fn malformed_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // wrong lambda length
    let config = write(
        dir.path(),
        "bad.toml",
        r#"
[network]
builtin = "example2"

[lambda]
values = [0.3, 0.5, 0.5]
"#,
    );
    let out = ovnn(&["check", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // unknown key
    let config = write(
        dir.path(),
        "bad2.toml",
        "[network]\nbuiltin = \"example2\"\nnonsense = 1\n",
    );
    let out = ovnn(&["check", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(2));

    // missing config entirely
    let out = ovnn(&["check", "--out", "out"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gains_match_published_controller_constant_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let config = write(dir.path(), "config.toml", EXAMPLE2_GAINS);
    let out = ovnn(&["gains", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let gains_text = std::fs::read_to_string(dir.path().join("out/gains.toml")).unwrap();
    let parsed: toml::Value = toml::from_str(&gains_text).unwrap();
    let kappa = parsed["controller"]["kappa"].as_array().unwrap();
    let k10 = kappa[0].as_array().unwrap()[0].as_float().unwrap();
    assert!((k10 - 29.2733).abs() < 1e-3, "kappa[1][0] = {k10}");
    assert_eq!(parsed["controller"]["family"].as_str(), Some("fixed"));
    assert_eq!(parsed["bounds"]["margin"].as_float(), Some(0.1));

    // round-trip: splice the emitted [controller] table into a simulate
    // config and drive the network to the target with it
    let controller_table = gains_text.split("[bounds]").next().unwrap().to_string();
    let sim_config = format!(
        r#"
[network]
builtin = "example2"

{controller_table}

[sim]
t_end = 2.0
target = [[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0]]
initial_random = {{ lo = -3.0, hi = 3.0 }}

[[outputs]]
kind = "report"
path = "run.toml"
"#
    );
    let config = write(dir.path(), "sim.toml", &sim_config);
    let out = ovnn(
        &[
            "simulate", "--config", &config, "--out", "out2", "--step", "0.002",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let run: toml::Value =
        toml::from_str(&std::fs::read_to_string(dir.path().join("out2/run.toml")).unwrap())
            .unwrap();
    assert!(run["final_norm"].as_float().unwrap() <= 1e-6);
    assert!(run.get("t1").is_some() && run.get("t2").is_some());
}

#[test]
fn simulate_is_deterministic_and_writes_the_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let config_text = r#"
[network]
builtin = "example2"

[controller]
family = "adaptive"
c1 = 0.9
c2 = 0.9
c3 = 0.9

[sim]
t_end = 1.0
step = 0.002
target = [[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0]]
initial_random = { lo = -2.0, hi = 2.0 }
monitor_p = true

[[outputs]]
kind = "csv"
path = "traj.csv"
"#;
    let config = write(dir.path(), "config.toml", config_text);
    let a = ovnn(
        &["simulate", "--config", &config, "--out", "a", "--seed", "9"],
        dir.path(),
    );
    assert_eq!(
        a.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&a.stderr)
    );
    let b = ovnn(
        &["simulate", "--config", &config, "--out", "b", "--seed", "9"],
        dir.path(),
    );
    assert_eq!(b.status.code(), Some(0));

    let csv_a = std::fs::read(dir.path().join("a/traj.csv")).unwrap();
    let csv_b = std::fs::read(dir.path().join("b/traj.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "repeated runs must be byte-identical");

    let text = String::from_utf8(csv_a).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "t,w1_0,w1_1,w1_2,w1_3,w1_4,w1_5,w1_6,w1_7,w2_0,w2_1,w2_2,w2_3,w2_4,w2_5,w2_6,w2_7,norm,kappa,kappa_hat,P"
    );
    assert_eq!(text.lines().count(), 1 + 501);

    // a different seed changes the initial row
    let c = ovnn(
        &[
            "simulate", "--config", &config, "--out", "c", "--seed", "10",
        ],
        dir.path(),
    );
    assert_eq!(c.status.code(), Some(0));
    let csv_c = std::fs::read(dir.path().join("c/traj.csv")).unwrap();
    assert_ne!(csv_b, csv_c);
}

#[test]
fn inline_network_simulates() {
    let dir = tempfile::tempdir().unwrap();
    let config_text = r#"
[network]
n = 1
decay = [1.0]
a = [[[0,0,0,0,0,0,0,0]]]
b = [[[0.2,0,0,0,0,0,0,0]]]
input = [[1,0,0,0,0,0,0,0]]

[network.delays]
family = "constant"
tau = [[1.0]]

[[network.activations]]
f = { family = "zero" }
g = { family = "tanh_sign", tanh = [0.5, 0.5] }
delta_bound = [
  [0.5,0,0,0,0,0,0,0],[0,0.5,0,0,0,0,0,0],[0,0,0.5,0,0,0,0,0],[0,0,0,0.5,0,0,0,0],
  [0,0,0,0,0.5,0,0,0],[0,0,0,0,0,0.5,0,0],[0,0,0,0,0,0,0.5,0],[0,0,0,0,0,0,0,0.5]]

[lambda]
values = [1,1,1,1,1,1,1,1]

[rate]
family = "exponential"
alpha = 0.01

[sim]
t_end = 2.0
step = 0.002
initial = [[0.5,0,0,0,0,0,0,0]]
"#;
    let config = write(dir.path(), "config.toml", config_text);
    let out = ovnn(
        &["simulate", "--config", &config, "--out", "out"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/trajectory.csv").exists());

    let check = ovnn(&["check", "--config", &config, "--out", "out"], dir.path());
    assert_eq!(check.status.code(), Some(0)); // decay 1 dominates the 0.2 coupling
}

#[test]
fn divergence_exits_with_three_and_flags_partial_output() {
    let dir = tempfile::tempdir().unwrap();
    let config_text = r#"
[network]
n = 1
decay = [0.0]
a = [[[10.0,0,0,0,0,0,0,0]]]
b = [[[0,0,0,0,0,0,0,0]]]
input = [[0,0,0,0,0,0,0,0]]

[network.delays]
family = "constant"
tau = [[0.0]]

[[network.activations]]
f = { family = "linear", gain = 1.0 }
g = { family = "zero" }

[lambda]
values = [1,1,1,1,1,1,1,1]

[rate]
family = "exponential"
alpha = 0.0

[sim]
t_end = 100.0
step = 0.5
initial = [[1e300,0,0,0,0,0,0,0]]

[[outputs]]
kind = "csv"
path = "partial.csv"
"#;
    let config = write(dir.path(), "config.toml", config_text);
    let out = ovnn(
        &["simulate", "--config", &config, "--out", "out"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(3),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("out/partial.csv").exists());
    assert!(dir.path().join("out/DIVERGED").exists());
    assert!(String::from_utf8_lossy(&out.stderr).contains("diverged"));
}

#[test]
fn reproduce_writes_a_complete_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = ovnn(
        &[
            "reproduce",
            "example2",
            "--out",
            "rep",
            "--step",
            "0.002",
            "--seed",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let bundle = dir.path().join("rep/reproduce_example2");
    for file in [
        "summary.txt",
        "gains.toml",
        "report_uncontrolled.toml",
        "trajectory_controlled.csv",
        "trajectory_uncontrolled.csv",
        "norm_controlled.svg",
        "norm_uncontrolled.svg",
    ] {
        assert!(bundle.join(file).exists(), "missing {file}");
    }
    let summary = std::fs::read_to_string(bundle.join("summary.txt")).unwrap();
    assert!(summary.contains("kappa(1,0): computed 29.1733, reference 29.1733  MATCH"));
    assert!(summary.contains("DISCREPANCY"));
    assert!(summary.contains("T1 = Some"));

    let unknown = ovnn(&["reproduce", "nope", "--out", "rep"], dir.path());
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn reproduce_other_bundles_complete() {
    let dir = tempfile::tempdir().unwrap();

    let out = ovnn(
        &["reproduce", "example1", "--out", "r", "--step", "0.01"],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary =
        std::fs::read_to_string(dir.path().join("r/reproduce_example1/summary.txt")).unwrap();
    assert!(summary.contains("T(1,0): computed -0.8621, reference -0.8621  MATCH"));
    assert!(summary.contains("4 reference values flagged (all at component 5)"));
    assert!(summary.contains("P non-increasing after onset"));

    let out = ovnn(
        &[
            "reproduce",
            "example2-adaptive",
            "--out",
            "r",
            "--step",
            "0.005",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary =
        std::fs::read_to_string(dir.path().join("r/reproduce_example2_adaptive/summary.txt"))
            .unwrap();
    assert!(summary.contains("gains nondecreasing: true"));
    assert!(summary.contains("gains frozen over the last fifth of the run: true"));

    let out = ovnn(
        &[
            "reproduce",
            "example2-target2",
            "--out",
            "r",
            "--step",
            "0.002",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary =
        std::fs::read_to_string(dir.path().join("r/reproduce_example2_target2/summary.txt"))
            .unwrap();
    assert!(summary.contains("worst deviation from (1, .., 16): 0.000e0"));
}
