use serde_json::json;

/// Failure of a command, mapped onto the documented exit codes.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    CheckFailed(usize),
    Lib(berezin::Error),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::CheckFailed(_) => 1,
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Lib(e) => match e {
                berezin::Error::Domain(_) | berezin::Error::Mismatch(_) | berezin::Error::DegeneratePair { .. } => 2,
                berezin::Error::Precision { .. }
                | berezin::Error::Accuracy(_)
                | berezin::Error::Pole(_)
                | berezin::Error::Singularity(_) => 3,
                berezin::Error::Integrability(_) | berezin::Error::Degenerate { .. } => 4,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::CheckFailed(_) => "check",
            CliError::Io(_) => "io",
            CliError::Lib(e) => match e {
                berezin::Error::Domain(_) => "domain",
                berezin::Error::Precision { .. } => "precision",
                berezin::Error::Pole(_) => "pole",
                berezin::Error::Singularity(_) => "singularity",
                berezin::Error::Integrability(_) => "integrability",
                berezin::Error::Degenerate { .. } => "degenerate",
                berezin::Error::DegeneratePair { .. } => "degenerate-pair",
                berezin::Error::Accuracy(_) => "accuracy",
                berezin::Error::Mismatch(_) => "mismatch",
            },
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Config(m) | CliError::Io(m) => m.clone(),
            CliError::CheckFailed(n) => format!("{n} suite run(s) failed"),
            CliError::Lib(e @ (berezin::Error::Integrability(_) | berezin::Error::Degenerate { .. })) => {
                format!("{e}; the measure is atomic here, use `berezin spectrum`")
            }
            CliError::Lib(e) => e.to_string(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({ "error": self.kind(), "message": self.message(), "exit_code": self.exit_code() })
    }
}

impl From<berezin::Error> for CliError {
    fn from(e: berezin::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
