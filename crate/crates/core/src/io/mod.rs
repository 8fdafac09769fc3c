//! Problem ingestion and trace/report serialization.

mod builtin;
mod document;
mod matrix_market;
mod vector;

pub use builtin::{builtin_problem, BuiltinFamily, BuiltinProblemSpec, RhsMode, HILBERT_MAX_ORDER};
pub use document::{
    parse_tabular, read_trace, write_report_tabular, write_trace, Metadata, RecordRow, TerminationSummary,
    TraceDocument, TraceFormat, FORMAT_VERSION,
};
pub use matrix_market::{read_matrix_market, read_symmetric_matrix_market, write_matrix_market, MarketLayout};
pub use vector::{read_vector, write_vector};

/// Scalar text form: 17 significant digits, enough to round-trip any f64.
pub(crate) fn fmt_scalar(v: f64) -> String {
    format!("{v:.16e}")
}
