//! Fixed-format CSV output: header row, numeric fields only, 17
//! significant digits in scientific notation, newline after every row.

use std::fs;
use std::path::Path;

use crate::CliError;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn row<I: IntoIterator<Item = String>>(fields: I) -> String {
    let mut line = fields.into_iter().collect::<Vec<_>>().join(",");
    line.push('\n');
    line
}

pub fn render(header: &[&str], rows: impl IntoIterator<Item = String>) -> String {
    let mut out = row(header.iter().map(|h| h.to_string()));
    out.extend(rows);
    out
}

pub fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}
