//! Report assembly and bit-stable emission.
//!
//! CSV: a `# symdom <version>` header line, a column-name row, then one row
//! per degree/bin/sample group. Floats carry 17 significant digits (exact
//! binary64 round trip), line endings are LF, and identical configurations
//! produce byte-identical output apart from the version line.
//!
//! JSON mirrors the CSV table and adds the configuration echo, the library
//! version, and the pass/breach status.

use crate::{Failure, Resolved};
use std::io::Write;

pub enum Field {
    Int(i64),
    Float(f64),
}

impl Field {
    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Float(v) => format!("{v:.16e}"),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Field::Int(v) => serde_json::json!(v),
            Field::Float(v) => serde_json::json!(v),
        }
    }
}

pub struct Report {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Field>>,
}

impl Report {
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# symdom {}\n", crate::VERSION));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Field::csv).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self, resolved: &Resolved, pass: bool) -> String {
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|row| row.iter().map(Field::json).collect())
            .collect();
        let doc = serde_json::json!({
            "version": crate::VERSION,
            "config": resolved.echo(),
            "columns": self.columns,
            "rows": rows,
            "status": if pass { "pass" } else { "breach" },
        });
        let mut text = serde_json::to_string_pretty(&doc).expect("report serialization");
        text.push('\n');
        text
    }
}

/// Writes the report in one shot: a single stdout write, or an atomic
/// temp-file-then-rename when a path is given.
pub fn emit(text: &str, out: Option<&str>) -> Result<(), Failure> {
    match out {
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(text.as_bytes())
                .and_then(|_| lock.flush())
                .map_err(|e| Failure::internal(format!("writing report to stdout: {e}")))
        }
        Some(path) => {
            let tmp = format!("{path}.tmp.{}", std::process::id());
            std::fs::write(&tmp, text)
                .map_err(|e| Failure::internal(format!("writing {tmp}: {e}")))?;
            std::fs::rename(&tmp, path).map_err(|e| {
                let _ = std::fs::remove_file(&tmp);
                Failure::internal(format!("renaming {tmp} to {path}: {e}"))
            })
        }
    }
}
