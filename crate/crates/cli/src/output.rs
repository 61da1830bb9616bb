use crate::{CliError, CliResult, Format};
use serde_json::Value;
use std::io::Write;
use std::path::Path;

/// A command result in the shapes it can be rendered to.
pub enum Output {
    /// A single number or token, printed bare.
    Scalar(String),
    /// Structured output without a tabular form.
    Json(Value),
    /// A table: JSON rows and the equivalent CSV.
    Table { json: Value, csv: String },
}

pub fn emit(out: &Output, format: Format, path: Option<&Path>) -> CliResult<()> {
    let text = match (out, format) {
        (Output::Scalar(s), _) => format!("{s}\n"),
        (Output::Json(v), Format::Json) | (Output::Table { json: v, .. }, Format::Json) => {
            format!("{}\n", serde_json::to_string_pretty(v).expect("serializable"))
        }
        (Output::Table { csv, .. }, Format::Csv) => csv.clone(),
        (Output::Json(_), Format::Csv) => {
            return Err(CliError::Usage("this command has no CSV form; use --format json".into()))
        }
    };
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

/// Shortest round-trip decimal (exponent form for tiny or huge values),
/// with `inf`/`-inf`/`NaN` spelled out.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

/// JSON value for a float; non-finite values become strings.
pub fn jnum(x: f64) -> Value {
    if x.is_finite() {
        x.into()
    } else {
        num(x).into()
    }
}
