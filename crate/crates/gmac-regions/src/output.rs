//! CSV and JSON writers. Numbers use the shortest round-trip decimal form
//! (dot separator, independent of locale), so reruns are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use gmac_core::gaussian::{GaussianChannel, StateVariance};
use serde_json::{json, Value};

use crate::error::CliError;

/// Write a CSV file whose first line is `# ` followed by `comment`.
pub fn write_csv(path: &Path, comment: &str, header: &[&str], rows: &[Vec<String>]) -> Result<PathBuf, CliError> {
    let mut buf = Vec::new();
    writeln!(buf, "# {comment}")?;
    {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(&mut buf);
        w.write_record(header).map_err(csv_err)?;
        for r in rows {
            w.write_record(r).map_err(csv_err)?;
        }
        w.flush()?;
    }
    write_file(path, &buf)
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn write_json(path: &Path, value: &Value) -> Result<PathBuf, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    write_file(path, text.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<PathBuf, CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path.to_path_buf())
}

/// Shortest decimal that parses back to `x`.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        // no negative zero in tables
        return "0".into();
    }
    format!("{x}")
}

fn level(s: StateVariance) -> Value {
    match s {
        StateVariance::Finite(x) => json!(x),
        StateVariance::Unbounded => json!("inf"),
    }
}

/// Linear channel parameters.
pub fn channel_json(ch: &GaussianChannel) -> Value {
    json!({
        "p1": ch.p1, "p2": ch.p2,
        "n1": ch.n1, "n2": ch.n2, "n3": ch.n3,
        "q0": ch.q0, "q1": level(ch.q1), "q2": level(ch.q2),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_comment_and_dot_decimals() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        write_csv(&p, "x, y in bits", &["x", "y"], &[vec![num(0.5), num(-0.0)], vec!["a,b".into(), num(1e-20)]])
            .unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text, "# x, y in bits\nx,y\n0.5,0\n\"a,b\",0.00000000000000000001\n");
    }
}
