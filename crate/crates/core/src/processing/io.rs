//! Trial files: CSV with `#` header lines declaring the pose convention and
//! where the wrench was measured.
//!
//! ```text
//! # frame_pose=w->tl
//! # wrench_frame=tl
//! # wrench_point=0 0 0
//! t,px,py,pz,qw,qx,qy,qz,fx,fy,fz,mx,my,mz
//! 0.000,0.1,0.2,0.3,1,0,0,0,0,0,5,0,0,0
//! ```

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{change_reference_point, quat_to_rot, rot_to_quat, screw_transform, FrameTag, Pose, Screw, Vec3};

pub const COLUMNS: [&str; 14] = ["t", "px", "py", "pz", "qw", "qx", "qy", "qz", "fx", "fy", "fz", "mx", "my", "mz"];

/// One demonstration as recorded: tool poses T_w←tl and the wrench exerted
/// by the tool on its environment, converted to world frame / world origin.
#[derive(Clone, Debug, PartialEq)]
pub struct RawTrial {
    pub name: String,
    pub times: Vec<f64>,
    pub poses: Vec<Pose>,
    pub wrenches: Vec<Screw>,
}

/// Frame and point in which a file's wrench columns are given.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WrenchDecl {
    pub frame: FrameTag,
    /// Reference point of the moments, in `frame` coordinates [m].
    pub point: Vec3,
}

impl Default for WrenchDecl {
    fn default() -> Self {
        Self { frame: FrameTag::Tool, point: Vec3::zeros() }
    }
}

fn parse_err(path: &str, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.to_string(), line, msg: msg.into() }
}

fn header_decl(path: &str, text: &str) -> Result<WrenchDecl> {
    let mut decl = WrenchDecl::default();
    let mut saw_pose = false;
    for (i, line) in text.lines().enumerate() {
        let Some(body) = line.trim().strip_prefix('#') else { continue };
        let Some((key, value)) = body.split_once('=') else { continue };
        let (key, value) = (key.trim(), value.trim());
        match key {
            "frame_pose" => {
                if value.replace(' ', "") != "w->tl" {
                    return Err(parse_err(path, i + 1, format!("unsupported frame_pose {value:?} (expected w->tl)")));
                }
                saw_pose = true;
            }
            "wrench_frame" => {
                decl.frame = match value {
                    "w" => FrameTag::World,
                    "tl" => FrameTag::Tool,
                    _ => return Err(parse_err(path, i + 1, format!("wrench_frame must be w or tl, got {value:?}"))),
                }
            }
            "wrench_point" => {
                let xs: Vec<f64> = value
                    .split_whitespace()
                    .map(str::parse)
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|e| parse_err(path, i + 1, format!("wrench_point: {e}")))?;
                if xs.len() != 3 {
                    return Err(parse_err(path, i + 1, "wrench_point needs three values"));
                }
                decl.point = Vec3::new(xs[0], xs[1], xs[2]);
            }
            _ => {}
        }
    }
    if !saw_pose {
        return Err(parse_err(path, 1, "missing header line `# frame_pose=w->tl`"));
    }
    Ok(decl)
}

/// Wrench given in `decl` → world frame, moments about the world origin.
pub fn wrench_to_world(w: &Screw, decl: &WrenchDecl, tool_pose: &Pose) -> Screw {
    let at_origin = change_reference_point(w, &decl.point, &Vec3::zeros());
    match decl.frame {
        FrameTag::World => at_origin,
        FrameTag::Tool => screw_transform(tool_pose, &at_origin),
    }
}

/// World-frame wrench at the world origin → the frame/point of `decl`.
pub fn wrench_from_world(w: &Screw, decl: &WrenchDecl, tool_pose: &Pose) -> Screw {
    let in_frame = match decl.frame {
        FrameTag::World => *w,
        FrameTag::Tool => screw_transform(&tool_pose.inverse(), w),
    };
    change_reference_point(&in_frame, &Vec3::zeros(), &decl.point)
}

pub fn parse_trial(name: &str, text: &str) -> Result<RawTrial> {
    let decl = header_decl(name, text)?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .has_headers(true)
        .from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| parse_err(name, 0, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != COLUMNS {
        let line = text.lines().position(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#')).map_or(0, |i| i + 1);
        return Err(parse_err(name, line, format!("expected columns {}", COLUMNS.join(","))));
    }
    let (mut times, mut poses, mut wrenches) = (vec![], vec![], vec![]);
    for rec in rdr.records() {
        let rec = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(name, line, e.to_string())
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let mut x = [0.0; 14];
        for (k, field) in rec.iter().enumerate() {
            x[k] = field
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| parse_err(name, line, format!("column {}: not a finite number: {field:?}", COLUMNS[k])))?;
        }
        let q = [x[4], x[5], x[6], x[7]];
        let qn = q.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (qn - 1.0).abs() > 1e-6 {
            return Err(parse_err(name, line, format!("quaternion norm {qn:.9} is not 1 within 1e-6")));
        }
        let pose = Pose::from_parts(quat_to_rot(q), Vec3::new(x[1], x[2], x[3]));
        let w = Screw::wrench(Vec3::new(x[8], x[9], x[10]), Vec3::new(x[11], x[12], x[13]));
        times.push(x[0]);
        wrenches.push(wrench_to_world(&w, &decl, &pose));
        poses.push(pose);
    }
    Ok(RawTrial { name: name.to_string(), times, poses, wrenches })
}

pub fn read_trial(path: impl AsRef<Path>) -> Result<RawTrial> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_trial(&path.display().to_string(), &text)
}

/// Serialize a trial with its wrenches expressed per `decl`.
pub fn format_trial(trial: &RawTrial, decl: &WrenchDecl) -> String {
    let mut out = String::new();
    out.push_str("# frame_pose=w->tl\n");
    out.push_str(match decl.frame {
        FrameTag::World => "# wrench_frame=w\n",
        FrameTag::Tool => "# wrench_frame=tl\n",
    });
    out.push_str(&format!("# wrench_point={} {} {}\n", decl.point.x, decl.point.y, decl.point.z));
    out.push_str(&COLUMNS.join(","));
    out.push('\n');
    for ((t, pose), w) in trial.times.iter().zip(&trial.poses).zip(&trial.wrenches) {
        let q = rot_to_quat(&pose.r);
        let w = wrench_from_world(w, decl, pose);
        let row = [
            *t, pose.p.x, pose.p.y, pose.p.z, q[0], q[1], q[2], q[3], w.a.x, w.a.y, w.a.z, w.b.x, w.b.y, w.b.z,
        ];
        let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn write_trial(path: impl AsRef<Path>, trial: &RawTrial, decl: &WrenchDecl) -> Result<()> {
    let path = path.as_ref();
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(format_trial(trial, decl).as_bytes()).map_err(|e| Error::io(path, e))
}
