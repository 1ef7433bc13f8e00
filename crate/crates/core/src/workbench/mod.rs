//! File ingestion, reports, sweeps and boundary export behind the CLI.

pub mod analyze;
pub mod boundary;
pub mod input;
pub mod sweep;

pub use analyze::{analyze, AnalysisReport};
pub use boundary::{export_boundary, write_boundary_csv, Curve, CurvePoint, Slice};
pub use input::{load_ansatz, load_state, parse_state_spec, NamedAnsatz};
pub use sweep::{sweep, write_sweep_csv, Predicate, SweepConfig, SweepFamily, SweepOutput};

use crate::error::Error;

/// 17 significant digits.
pub fn real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Process exit status for an error: 1 parse/validation, 2 geometric
/// infeasibility, 3 I/O.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => 3,
        Error::Rank(_)
        | Error::GeometricInfeasibility(_)
        | Error::Precondition(_)
        | Error::ProjectionUndefined(_)
        | Error::CertificateViolation { .. } => 2,
        Error::InvalidInput(_)
        | Error::Validation { .. }
        | Error::Domain(_)
        | Error::NoBracket { .. }
        | Error::DimensionMismatch(_)
        | Error::Parse { .. } => 1,
    }
}
