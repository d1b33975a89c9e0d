use std::fmt;

use geodesy_core::field::FieldError;
use geodesy_core::generators::GeneratorError;
use geodesy_core::layout::LayoutError;
use geodesy_core::meets::AnalysisError;
use geodesy_core::GraphError;

/// A failure reported as `error[CODE]: message` on one line.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
    pub exit: u8,
}

pub const EXIT_PROPERTY: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

impl CliError {
    pub fn input(code: &'static str, message: impl fmt::Display) -> Self {
        CliError { code, message: message.to_string(), exit: EXIT_INPUT }
    }

    pub fn property(code: &'static str, message: impl fmt::Display) -> Self {
        CliError { code, message: message.to_string(), exit: EXIT_PROPERTY }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line: String = self.message.split_whitespace().collect::<Vec<_>>().join(" ");
        write!(f, "error[{}]: {}", self.code, line)
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::Disconnected(..) => "E_DISCONNECTED",
            GraphError::MissingRoles(_) => "E_ROLES",
            _ => "E_GRAPH",
        };
        CliError::input(code, e)
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        let code = match e {
            FieldError::NotPrimePower(_) => "E_NOT_PRIME_POWER",
            _ => "E_FIELD",
        };
        CliError::input(code, e)
    }
}

impl From<GeneratorError> for CliError {
    fn from(e: GeneratorError) -> Self {
        match e {
            GeneratorError::Field(f) => f.into(),
            GeneratorError::Graph(g) => g.into(),
            GeneratorError::TooFewBranches(_) => CliError::input("E_PARAM", e),
            GeneratorError::NotSubdividedComplete(_) => CliError::input("E_NOT_KST", e),
            GeneratorError::Plane(_) => CliError::input("E_FIELD", e),
        }
    }
}

impl From<LayoutError> for CliError {
    fn from(e: LayoutError) -> Self {
        match e {
            LayoutError::Structure(g) => g.into(),
            LayoutError::OddSubdivision(_) => CliError::input("E_ODD_SUBDIVISION", e),
            LayoutError::MissingPosition(_) | LayoutError::SizeMismatch { .. } => CliError::input("E_DRAWING", e),
            LayoutError::NotABranchPair(..) => CliError::input("E_PARAM", e),
            LayoutError::Internal(_) => CliError::input("E_INTERNAL", e),
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        match e {
            AnalysisError::Layout(l) => l.into(),
            AnalysisError::Graph(g) => g.into(),
            AnalysisError::Structure(s) => s.into(),
            AnalysisError::InvalidDrawing(ref report) => {
                let first = report
                    .violations
                    .first()
                    .map(|v| format!("{:?} at {:?}", v.kind, v.vertices.iter().map(|w| w.0).collect::<Vec<_>>()))
                    .unwrap_or_default();
                CliError::input(
                    "E_INVALID_DRAWING",
                    format!("drawing is invalid: {} violation(s), first: {first}", report.violations.len()),
                )
            }
            AnalysisError::NotGeodetic(ref report) => {
                let detail = report
                    .witness
                    .as_ref()
                    .map(|w| format!(": {} and {} are both shortest {}-{} paths", w.paths[0], w.paths[1], w.u, w.v))
                    .unwrap_or_default();
                CliError::input("E_NOT_GEODETIC", format!("graph is not geodetic{detail}"))
            }
            AnalysisError::OddSubdivision(_) => CliError::input("E_ODD_SUBDIVISION", e),
            AnalysisError::TooFewSubdivisions(_) => CliError::input("E_PARAM", e),
            AnalysisError::NotABranch(_) | AnalysisError::IdenticalPaths => CliError::input("E_PARAM", e),
            AnalysisError::WitnessCheck(_) => CliError::input("E_INTERNAL", e),
        }
    }
}
