use crate::geometry::ScrewKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("insufficient samples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },
    #[error("times are not strictly increasing at index {index}")]
    NonMonotoneTime { index: usize },
    #[error("mixed screw kinds: {0:?} and {1:?}")]
    MixedKinds(ScrewKind, ScrewKind),
    #[error("degenerate vector set")]
    DegenerateVectors,
    #[error("parallel or vanishing screw axes; supply epsilon > 0 (condition number {cond:.3e})")]
    SingularAsip { cond: f64 },
    #[error("{candidate}: {source}")]
    Candidate { candidate: String, source: Box<Error> },
    #[error("rotation averaging did not converge after {iterations} iterations (last |delta| = {last:.3e})")]
    NoConvergence { iterations: usize, last: f64 },
    #[error("task frame needs the instantaneous {0} pose but none was supplied")]
    MissingKinematics(&'static str),
    #[error("no contact segment found")]
    NoContact,
    #[error("degenerate progress (total {0:.3e})")]
    DegenerateProgress(f64),
    #[error("simulation diverged at t = {time:.3} s: position error {dp:.3} m")]
    Divergence { time: f64, dp: f64 },
    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },
    #[error("invalid {field}: {msg}")]
    Invalid { field: String, msg: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl Error {
    pub fn invalid(field: impl Into<String>, msg: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), msg: msg.into() }
    }

    pub fn with_candidate(self, candidate: impl Into<String>) -> Self {
        Error::Candidate { candidate: candidate.into(), source: Box::new(self) }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    /// Process exit code: 2 for input/config problems, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Invalid { .. } | Error::Io { .. } => 2,
            Error::InsufficientSamples { .. } | Error::NonMonotoneTime { .. } => 2,
            Error::MissingKinematics(_) | Error::MixedKinds(..) => 2,
            Error::Candidate { source, .. } => source.exit_code(),
            _ => 3,
        }
    }
}
