use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use taskframe::cli::{fmt_ratio, sha256_hex, ReportFile, SimSummaryFile};
use taskframe::pipeline::Significance;

const BIN: &str = env!("CARGO_BIN_EXE_taskframe");
const EXAMPLES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
const DATA: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn trials_in(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).filter(|p| p.extension().is_some_and(|e| e == "csv")).collect();
    v.sort();
    v
}

fn hashes(dir: &Path) -> Vec<String> {
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files.iter().map(|p| sha256_hex(&std::fs::read(p).unwrap())).collect()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn synth_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let spec = format!("{EXAMPLES}/revolute.toml");
    let (a, b, c) = (tmp.path().join("a"), tmp.path().join("b"), tmp.path().join("c"));
    ok(&["synth", &spec, "--out", s(&a)]);
    ok(&["synth", &spec, "--out", s(&b)]);
    ok(&["synth", &spec, "--out", s(&c), "--seed", "99"]);
    assert_eq!(trials_in(&a).len(), 5);
    assert!(a.join("ground_truth.json").exists());
    assert_eq!(hashes(&a), hashes(&b));
    assert_ne!(hashes(&a), hashes(&c));
    // Provenance: the scenario's hash sits in every trial header.
    let h = sha256_hex(&std::fs::read(&spec).unwrap());
    assert!(std::fs::read_to_string(&trials_in(&a)[0]).unwrap().contains(&format!("sha256={h}")));
}

#[test]
fn bad_inputs_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(format!("{DATA}/rot_force.toml")).unwrap().replace("duration_s = 4.0", "duration_s = 0.0");
    let spec = write(tmp.path(), "bad.toml", &text);
    let out = run(&["synth", s(&spec), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("duration_s"));

    let empty = write(tmp.path(), "empty.json", "{}");
    let out = run(&["report", s(&empty), "--out", s(&tmp.path().join("r"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("provenance"));

    let out = run(&["derive", s(&tmp.path().join("missing.csv")), "--out", s(&tmp.path().join("d"))]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write(tmp.path(), "cfg.toml", "[derive]\nunknown = 1\n");
    let out = run(&["synth", &format!("{DATA}/rot_force.toml"), "--config", s(&cfg), "--out", s(&tmp.path().join("o"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":2"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn synth_derive_report_simulate_round_trip() {
    let tmp = tempfile::tempdir().unwrap();
    let [demo, derived, rep, sim, shifted, div] = ["demo", "derived", "rep", "sim", "shifted", "div"].map(|d| tmp.path().join(d));
    let cfg = format!("{EXAMPLES}/revolute_run.toml");
    ok(&["synth", &format!("{EXAMPLES}/revolute.toml"), "--out", s(&demo)]);
    let trials = trials_in(&demo);
    let mut args = vec!["derive", "--config", &cfg, "--out", s(&derived)];
    args.extend(trials.iter().map(|p| s(p)));
    ok(&args);

    let report_path = derived.join("task_frame_report.json");
    let file: ReportFile = serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(file.report.origin.candidates.len(), 8);
    assert_eq!(file.report.orientation.candidates.len(), 4);
    assert_eq!(file.provenance.inputs.len(), trials.len() + 1);
    assert_eq!(file.provenance.config["derive"]["model"]["spline_lambda"], 1e-4);
    let gt = file.ground_truth.as_ref().expect("truth found beside the trials");
    assert_eq!(Some(file.report.task_frame.origin.viewpoint), gt.expected_origin_viewpoint);

    let table = ok(&["report", s(&report_path), "--out", s(&rep)]);
    for needle in ["origin candidates", "orientation candidates", "versus ground truth", "main axis angle", "common normal"] {
        assert!(table.contains(needle), "missing {needle:?} in\n{table}");
    }
    for f in ["origin_candidates.csv", "orientation_candidates.csv", "report.txt"] {
        assert!(rep.join(f).exists());
    }

    let model = derived.join("task_model.json");
    let scenario = format!("{EXAMPLES}/revolute_sim.toml");
    let stdout = ok(&["simulate", s(&model), &scenario, "--out", s(&sim)]);
    let summary: SimSummaryFile = serde_json::from_str(&std::fs::read_to_string(sim.join("sim_summary.json")).unwrap()).unwrap();
    assert!(summary.summary.completed);
    assert!(summary.versus_nominal.is_none());
    for (name, v) in summary.summary.rmse.fields() {
        assert!(v.is_finite() && stdout.contains(name), "{name}");
    }
    assert!(sim.join("sim_log.csv").exists());

    // Moving the task-frame origin degrades force tracking.
    let ov = write(tmp.path(), "shift.toml", "[overrides]\ntf_origin_offset_m = [0.025, 0.0, 0.0]\n");
    ok(&["simulate", s(&model), &scenario, "--config", s(&ov), "--out", s(&shifted)]);
    let summary: SimSummaryFile = serde_json::from_str(&std::fs::read_to_string(shifted.join("sim_summary.json")).unwrap()).unwrap();
    let cmp = summary.versus_nominal.expect("paired with a nominal run");
    assert!(cmp.degraded.iter().any(|m| m == "f_n"), "{:?}", cmp.degraded);

    // An overly compliant force loop against a stiff hinge blows up.
    let unstable = write(tmp.path(), "unstable.toml", "[controller]\nc_f_m_per_n = 1.0\n");
    let out = run(&["simulate", s(&model), &scenario, "--config", s(&unstable), "--out", s(&div)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));

    let bad = write(tmp.path(), "bad_sim.toml", "[environment]\ntype = \"Spring1D\"\n");
    let out = run(&["simulate", s(&model), s(&bad), "--out", s(&div)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_trial_and_weighting() {
    let tmp = tempfile::tempdir().unwrap();
    let demo = tmp.path().join("demo");
    ok(&["synth", &format!("{DATA}/rot_force.toml"), "--out", s(&demo)]);
    let trials = trials_in(&demo);

    let one = tmp.path().join("one");
    ok(&["derive", s(&trials[0]), "--out", s(&one)]);
    assert!(one.join("task_model.json").exists());
    let table = ok(&["report", s(&one.join("task_frame_report.json")), "--out", s(&tmp.path().join("r1"))]);
    assert!(table.contains("versus ground truth"));

    let decisions = |cfg: Option<&Path>, out: &Path| {
        let mut args = vec!["derive", "--out", s(out)];
        if let Some(c) = cfg {
            args.extend(["--config", s(c)]);
        }
        args.extend(trials.iter().map(|p| s(p)));
        ok(&args);
        let f: ReportFile = serde_json::from_str(&std::fs::read_to_string(out.join("task_frame_report.json")).unwrap()).unwrap();
        let tf = f.report.task_frame;
        (tf.origin.viewpoint, tf.origin.motion_model, tf.origin.wrench_model, tf.orientation.viewpoint)
    };
    let weighted = write(tmp.path(), "w.toml", "[derive.pipeline.orientation.weighting]\nenabled = true\n");
    assert_eq!(decisions(None, &tmp.path().join("plain")), decisions(Some(&weighted), &tmp.path().join("weighted")));
}

#[test]
fn report_without_truth_has_only_candidates() {
    let tmp = tempfile::tempdir().unwrap();
    let demo = tmp.path().join("demo");
    ok(&["synth", &format!("{DATA}/trans_moment.toml"), "--out", s(&demo)]);
    std::fs::remove_file(demo.join("ground_truth.json")).unwrap();
    let d = tmp.path().join("d");
    let mut args = vec!["derive", "--out", s(&d)];
    let trials = trials_in(&demo);
    args.extend(trials.iter().map(|p| s(p)));
    ok(&args);
    let table = ok(&["report", s(&tmp.path().join("d/task_frame_report.json")), "--out", s(&tmp.path().join("r"))]);
    assert!(table.contains("origin candidates"));
    assert!(!table.contains("versus ground truth"));
}

#[test]
fn infinite_ratio_renders_as_inf() {
    assert_eq!(fmt_ratio(f64::INFINITY), "inf");
    assert_eq!(fmt_ratio(3.14159), "3.142");
    let sig = Significance { ratio: f64::INFINITY, both_degenerate: true };
    let json = serde_json::to_string(&sig).unwrap();
    assert!(json.contains("\"inf\""), "{json}");
    let back: Significance = serde_json::from_str(&json).unwrap();
    assert!(back.ratio.is_infinite() && back.both_degenerate);
}
