//! Subcommand implementations behind the `taskframe` binary. Each command
//! reads its inputs, writes its artifacts into an output directory and
//! returns the paths it wrote; every artifact carries the input hashes and
//! the full configuration.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::geometry::{FrameTag, Vec3};
use crate::pipeline::TaskFrameReport;
use crate::processing::{derive_task_model, format_trial, read_trial, DeriveConfig, InputHash, Provenance, TaskModel, WrenchDecl};
use crate::sim::{run_simulation, ControllerConfig, Overrides, Rmse, SimScenario, SimSummary};
use crate::synth::{generate, GroundTruth, ScenarioSpec};

/// Options shared by all subcommands, read from `--config`.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Replaces the scenario's seed in `synth`.
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub derive: DeriveConfig,
    /// Replaces the scenario's controller in `simulate`.
    #[serde(default)]
    pub controller: Option<ControllerConfig>,
    /// Replaces the scenario's overrides in `simulate`.
    #[serde(default)]
    pub overrides: Option<Overrides>,
}

impl RunConfig {
    pub fn from_toml(name: &str, text: &str) -> Result<Self> {
        let c: RunConfig = toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(0, |s| text[..s.start].matches('\n').count() + 1);
            Error::Parse { path: name.to_string(), line, msg: e.message().to_string() }
        })?;
        if let Some(ctrl) = &c.controller {
            ctrl.validate()?;
        }
        if let Some(ov) = &c.overrides {
            ov.validate()?;
        }
        Ok(c)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::from_toml(&path.display().to_string(), &read_text(path)?)
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn create_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn hash_file(path: &Path) -> Result<InputHash> {
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(InputHash { path: path.display().to_string(), sha256: sha256_hex(&bytes) })
}

fn to_json<T: Serialize>(x: &T) -> String {
    serde_json::to_string_pretty(x).expect("artifact serializes")
}

fn echo<T: Serialize>(x: &T) -> serde_json::Value {
    serde_json::to_value(x).expect("config serializes")
}

fn provenance_comments(p: &Provenance) -> String {
    let mut s = format!("# generator={}\n", p.generator);
    for h in &p.inputs {
        let _ = writeln!(s, "# input={} sha256={}", h.path, h.sha256);
    }
    let _ = writeln!(s, "# config={}", p.config);
    s
}

/// Generate a synthetic demonstration bundle: one CSV per trial and
/// `ground_truth.json`.
pub fn cmd_synth(spec_path: &Path, out: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    let mut spec = ScenarioSpec::read(spec_path)?;
    if let Some(seed) = cfg.seed {
        spec.seed = seed;
    }
    let result = generate(&spec)?;
    let prov = Provenance::new(vec![hash_file(spec_path)?], serde_json::json!({ "scenario": echo(&spec), "run": echo(cfg) }));
    create_dir(out)?;
    let decl = WrenchDecl::default();
    let header = provenance_comments(&prov);
    let mut paths = Vec::new();
    for t in &result.trials {
        let p = out.join(format!("{}.csv", t.name));
        write_text(&p, &format!("{header}{}", format_trial(t, &decl)))?;
        paths.push(p);
    }
    let mut truth = echo(&result.truth);
    truth["provenance"] = echo(&prov);
    let p = out.join("ground_truth.json");
    write_text(&p, &to_json(&truth))?;
    paths.push(p);
    Ok(paths)
}

/// Report file written by `derive` and rendered by `report`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReportFile {
    pub provenance: Provenance,
    pub report: TaskFrameReport,
    #[serde(default)]
    pub ground_truth: Option<GroundTruth>,
}

/// Ground truth next to the first trial, if any.
fn sibling_truth(trials: &[PathBuf]) -> Option<PathBuf> {
    let p = trials.first()?.parent()?.join("ground_truth.json");
    p.exists().then_some(p)
}

pub fn read_ground_truth(path: &Path) -> Result<GroundTruth> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Parse { path: path.display().to_string(), line: e.line(), msg: e.to_string() })
}

/// Derive the task frame and task model from recorded trials. Writes
/// `task_frame_report.json` and `task_model.json`. The ground truth is
/// attached when given, or found beside the trials.
pub fn cmd_derive(trials: &[PathBuf], truth: Option<&Path>, out: &Path, cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    if trials.is_empty() {
        return Err(Error::invalid("trials", "at least one trial file is required"));
    }
    let raws = trials.iter().map(read_trial).collect::<Result<Vec<_>>>()?;
    let mut inputs = trials.iter().map(|p| hash_file(p)).collect::<Result<Vec<_>>>()?;
    let truth_path = truth.map(Path::to_path_buf).or_else(|| sibling_truth(trials));
    let ground_truth = match &truth_path {
        Some(p) => {
            inputs.push(hash_file(p)?);
            Some(read_ground_truth(p)?)
        }
        None => None,
    };
    let (report, mut model) = derive_task_model(&raws, &cfg.derive)?;
    let prov = Provenance::new(inputs, echo(cfg));
    model.provenance = prov.clone();

    create_dir(out)?;
    let rp = out.join("task_frame_report.json");
    write_text(&rp, &to_json(&ReportFile { provenance: prov, report, ground_truth }))?;
    let mp = out.join("task_model.json");
    model.write(&mp)?;
    Ok(vec![rp, mp])
}

/// Per-metric ratio of a perturbed run to its nominal twin.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PairedComparison {
    pub nominal: Rmse,
    pub ratio: Rmse,
    /// Metrics that got worse than nominal.
    pub degraded: Vec<String>,
    /// Δf at least doubled.
    pub force_degraded_2x: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimSummaryFile {
    pub provenance: Provenance,
    pub summary: SimSummary,
    /// Present when the run deviates from the nominal execution.
    pub versus_nominal: Option<PairedComparison>,
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else if a > 0.0 {
        f64::INFINITY
    } else {
        1.0
    }
}

pub fn compare_runs(run: &Rmse, nominal: &Rmse) -> PairedComparison {
    let r = Rmse {
        rot_deg: ratio(run.rot_deg, nominal.rot_deg),
        pos_mm: ratio(run.pos_mm, nominal.pos_mm),
        omega_deg_per_s: ratio(run.omega_deg_per_s, nominal.omega_deg_per_s),
        v_mm_per_s: ratio(run.v_mm_per_s, nominal.v_mm_per_s),
        f_n: ratio(run.f_n, nominal.f_n),
        m_nm: ratio(run.m_nm, nominal.m_nm),
    };
    let degraded = r.fields().iter().filter(|(_, x)| *x > 1.0).map(|(n, _)| n.to_string()).collect();
    PairedComparison { nominal: *nominal, ratio: r, degraded, force_degraded_2x: r.f_n >= 2.0 }
}

/// Replay a task model in closed loop. Writes `sim_log.csv`,
/// `plot_*.csv` and `sim_summary.json`. A run with non-default overrides is
/// paired with a nominal one and the summary says which errors grew.
pub fn cmd_simulate(model_path: &Path, scenario_path: &Path, out: &Path, cfg: &RunConfig) -> Result<(SimSummaryFile, Vec<PathBuf>)> {
    let model = TaskModel::read(model_path)?;
    let mut sc = SimScenario::read(scenario_path)?;
    if let Some(c) = &cfg.controller {
        sc.controller = c.clone();
    }
    if let Some(o) = &cfg.overrides {
        sc.overrides = o.clone();
    }
    let init = sc.initial_pose.pose();
    let log = run_simulation(&model, &sc.environment, &sc.controller, &init, &sc.overrides)?;
    let nominal_ov = Overrides { max_duration_s: sc.overrides.max_duration_s, ..Overrides::default() };
    let versus_nominal = if sc.overrides != nominal_ov {
        let nominal = run_simulation(&model, &sc.environment, &sc.controller, &init, &nominal_ov)?;
        Some(compare_runs(&log.summary.rmse, &nominal.summary.rmse))
    } else {
        None
    };
    let prov = Provenance::new(
        vec![hash_file(model_path)?, hash_file(scenario_path)?],
        serde_json::json!({ "scenario": echo(&sc), "run": echo(cfg) }),
    );

    create_dir(out)?;
    let mut paths = Vec::new();
    let lp = out.join("sim_log.csv");
    write_text(&lp, &format!("{}{}", provenance_comments(&prov), log.to_csv()))?;
    paths.push(lp);
    for (name, text) in log.plot_tables() {
        let p = out.join(format!("plot_{name}.csv"));
        write_text(&p, &text)?;
        paths.push(p);
    }
    let file = SimSummaryFile { provenance: prov, summary: log.summary.clone(), versus_nominal };
    let sp = out.join("sim_summary.json");
    write_text(&sp, &to_json(&file))?;
    paths.push(sp);
    Ok((file, paths))
}

/// Derived frame against the ground truth.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TruthComparison {
    pub origin_viewpoint_ok: Option<bool>,
    pub orientation_viewpoint_ok: Option<bool>,
    pub models_ok: bool,
    pub origin_distance_m: f64,
    /// Angle between the derived and true main axes (as lines) [deg].
    pub main_axis_angle_deg: f64,
    /// Length of the common normal of the derived and true main-axis lines
    /// [m]; only defined when origin and orientation share a viewpoint.
    pub common_normal_m: Option<f64>,
}

/// Shortest distance between the lines p1 + s·d1 and p2 + t·d2.
pub fn common_normal_length(p1: &Vec3, d1: &Vec3, p2: &Vec3, d2: &Vec3) -> f64 {
    let (d1, d2) = (d1.normalize(), d2.normalize());
    let n = d1.cross(&d2);
    let w = p2 - p1;
    if n.norm() < 1e-9 {
        (w - d1 * w.dot(&d1)).norm()
    } else {
        w.dot(&n).abs() / n.norm()
    }
}

pub fn compare_with_truth(report: &TaskFrameReport, gt: &GroundTruth) -> TruthComparison {
    let tf = &report.task_frame;
    let (ovp, rvp) = (tf.origin.viewpoint, tf.orientation.viewpoint);
    let origin_true = gt.origin_in(ovp);
    let axis = tf.orientation.rotation.column(0).into_owned();
    let axis_true = gt.motion_direction.mean_in(rvp);
    let cos = (axis.dot(&axis_true) / (axis.norm() * axis_true.norm())).abs().min(1.0);
    let common_normal_m = (ovp == rvp).then(|| common_normal_length(&tf.origin.origin, &axis, &origin_true, &axis_true));
    TruthComparison {
        origin_viewpoint_ok: gt.expected_origin_viewpoint.map(|v| v == ovp),
        orientation_viewpoint_ok: gt.expected_orientation_viewpoint.map(|v| v == rvp),
        models_ok: tf.origin.motion_model == gt.motion_model && tf.origin.wrench_model == gt.wrench_model,
        origin_distance_m: (tf.origin.origin - origin_true).norm(),
        main_axis_angle_deg: cos.acos().to_degrees(),
        common_normal_m,
    }
}

/// Ratios render as "inf" when a determinant vanished.
pub fn fmt_ratio(x: f64) -> String {
    if x.is_infinite() {
        "inf".into()
    } else {
        format!("{x:.3}")
    }
}

fn fmt_vp(v: Option<FrameTag>) -> String {
    v.map_or("-".into(), |v| v.to_string())
}

/// Human-readable candidate tables (plus truth comparison if attached).
pub fn render_report(file: &ReportFile) -> String {
    let r = &file.report;
    let tf = &r.task_frame;
    let mut s = String::new();
    let _ = writeln!(s, "origin candidates");
    let _ = writeln!(s, "  {:<24} {:>13} {:>13}  point [m]", "candidate", "det", "sigma2");
    for c in &r.origin.candidates {
        let p = c.asip.point;
        let label = crate::pipeline::OriginCandidate::label(c.viewpoint, c.screw, c.model);
        let _ = writeln!(s, "  {label:<24} {:>13.4e} {:>13.4e}  ({:.4}, {:.4}, {:.4})", c.det, c.asip.sigma_hat_sq, p.x, p.y, p.z);
    }
    for v in &r.origin.per_viewpoint {
        let _ = writeln!(
            s,
            "  {}: motion {} (ratio {}), wrench {} (ratio {}), fused det {:.4e}",
            v.viewpoint,
            v.motion_model,
            fmt_ratio(v.motion_model_ratio.ratio),
            v.wrench_model,
            fmt_ratio(v.wrench_model_ratio.ratio),
            v.det
        );
    }
    let o = &tf.origin;
    let _ = writeln!(
        s,
        "  -> origin viewpoint {} (ratio {}), point ({:.4}, {:.4}, {:.4})\n",
        o.viewpoint,
        fmt_ratio(o.ratios.viewpoint.ratio),
        o.origin.x,
        o.origin.y,
        o.origin.z
    );

    let _ = writeln!(s, "orientation candidates");
    let _ = writeln!(s, "  {:<14} {:>13}  singular values", "candidate", "det");
    for c in &r.orientation.candidates {
        let sv = c.avof.singular_values;
        let _ = writeln!(s, "  {:<14} {:>13.4e}  ({:.4e}, {:.4e}, {:.4e})", format!("{}/{}", c.viewpoint, c.vector), c.covariance.determinant(), sv.x, sv.y, sv.z);
    }
    for v in &r.orientation.per_viewpoint {
        let _ = writeln!(s, "  {}: averaged det {:.4e} after {} iterations", v.viewpoint, v.det, v.average.iterations);
    }
    let d = &tf.orientation;
    let _ = writeln!(
        s,
        "  -> orientation viewpoint {} (ratio {}), vectors {}/{}, progress {:?}",
        d.viewpoint,
        fmt_ratio(d.ratio.ratio),
        d.motion_vector.name(),
        d.wrench_vector.name(),
        tf.progress
    );

    if let Some(gt) = &file.ground_truth {
        let c = compare_with_truth(r, gt);
        let _ = writeln!(s, "\nversus ground truth");
        let _ = writeln!(s, "  {:<22} {:>10} {:>10}", "", "derived", "expected");
        let _ = writeln!(s, "  {:<22} {:>10} {:>10}", "origin viewpoint", o.viewpoint.to_string(), fmt_vp(gt.expected_origin_viewpoint));
        let _ = writeln!(s, "  {:<22} {:>10} {:>10}", "orientation viewpoint", d.viewpoint.to_string(), fmt_vp(gt.expected_orientation_viewpoint));
        let _ = writeln!(s, "  {:<22} {:>10} {:>10}", "motion model", o.motion_model.to_string(), gt.motion_model.to_string());
        let _ = writeln!(s, "  {:<22} {:>10} {:>10}", "wrench model", o.wrench_model.to_string(), gt.wrench_model.to_string());
        let _ = writeln!(s, "  origin distance      {:>10.3} mm", 1e3 * c.origin_distance_m);
        let _ = writeln!(s, "  main axis angle      {:>10.3} deg", c.main_axis_angle_deg);
        match c.common_normal_m {
            Some(n) => {
                let _ = writeln!(s, "  common normal        {:>10.3} mm", 1e3 * n);
            }
            None => {
                let _ = writeln!(s, "  common normal        {:>10} (viewpoints differ)", "-");
            }
        }
    }
    s
}

/// Render a report file; also writes the candidate tables as CSV.
pub fn cmd_report(report_path: &Path, out: &Path) -> Result<(String, Vec<PathBuf>)> {
    let name = report_path.display().to_string();
    let text = read_text(report_path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse { path: name.clone(), line: e.line(), msg: e.to_string() })?;
    for section in ["/provenance", "/report", "/report/task_frame", "/report/origin/candidates", "/report/orientation/candidates"] {
        if value.pointer(section).is_none() {
            return Err(Error::invalid(format!("{name}: {}", &section[1..]), "missing section"));
        }
    }
    let file: ReportFile = serde_json::from_value(value).map_err(|e| Error::Parse { path: name, line: 0, msg: e.to_string() })?;
    let table = render_report(&file);

    create_dir(out)?;
    let mut oc = String::from("viewpoint,screw,model,det,sigma2,px,py,pz\n");
    for c in &file.report.origin.candidates {
        let p = c.asip.point;
        let _ = writeln!(oc, "{},{:?},{},{},{},{},{},{}", c.viewpoint, c.screw, c.model, c.det, c.asip.sigma_hat_sq, p.x, p.y, p.z);
    }
    let mut rc = String::from("viewpoint,vector,det,s1,s2,s3\n");
    for c in &file.report.orientation.candidates {
        let sv = c.avof.singular_values;
        let _ = writeln!(rc, "{},{},{},{},{},{}", c.viewpoint, c.vector, c.covariance.determinant(), sv.x, sv.y, sv.z);
    }
    let paths = vec![out.join("origin_candidates.csv"), out.join("orientation_candidates.csv"), out.join("report.txt")];
    write_text(&paths[0], &oc)?;
    write_text(&paths[1], &rc)?;
    write_text(&paths[2], &table)?;
    Ok((table, paths))
}
