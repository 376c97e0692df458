use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::config::Format;
use crate::error::{CliError, Result};

/// A table plus its JSON form. Column order is fixed by the producer.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub json: Value,
}

impl Report {
    pub fn new(name: &str, columns: &[&str], json: Value) -> Self {
        Report {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            json,
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
    }

    pub fn json_text(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.json).expect("JSON values serialize");
        s.push('\n');
        s
    }
}

/// Output of one subcommand.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Report(Report),
    /// Plain text such as an edge list, written as `<name>.txt`.
    Text {
        name: String,
        text: String,
    },
}

/// Writes `bytes` to a temporary file in the target directory, then renames
/// it into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = path
        .parent()
        .filter(|d| !d.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.error))?;
    Ok(())
}

/// With `out`, writes `<name>.csv` and `<name>.json` for every report (and
/// `<name>.txt` for text) and returns the paths. Without it, prints each
/// output to `stdout` in `format`.
pub fn emit_report(
    outputs: &[Output],
    out: Option<&Path>,
    format: Format,
    stdout: &mut dyn Write,
) -> Result<Vec<PathBuf>> {
    let mut written = Vec::new();
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)?;
        for o in outputs {
            match o {
                Output::Report(r) => {
                    for (ext, body) in [("csv", r.csv()?), ("json", r.json_text())] {
                        let path = dir.join(format!("{}.{ext}", r.name));
                        write_atomic(&path, body.as_bytes())?;
                        written.push(path);
                    }
                }
                Output::Text { name, text } => {
                    let path = dir.join(format!("{name}.txt"));
                    write_atomic(&path, text.as_bytes())?;
                    written.push(path);
                }
            }
        }
        return Ok(written);
    }
    for o in outputs {
        match o {
            Output::Report(r) => match format {
                Format::Csv => stdout.write_all(r.csv()?.as_bytes())?,
                Format::Json => stdout.write_all(r.json_text().as_bytes())?,
            },
            Output::Text { text, .. } => stdout.write_all(text.as_bytes())?,
        }
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn empty_report_is_header_only() {
        let r = Report::new("x", &["a", "b"], json!([]));
        assert_eq!(r.csv().unwrap(), "a,b\n");
    }

    #[test]
    fn fields_are_quoted() {
        let mut r = Report::new("x", &["a", "b"], json!(null));
        r.push(vec!["1".into(), "p, q".into()]);
        assert_eq!(r.csv().unwrap(), "a,b\n1,\"p, q\"\n");
    }

    #[test]
    fn files_are_written_per_format() {
        let dir = tempfile::tempdir().unwrap();
        let r = Report::new("rep", &["a"], json!({"k": 1}));
        let outputs = [
            Output::Report(r),
            Output::Text {
                name: "g".into(),
                text: "1 0\n".into(),
            },
        ];
        let paths = emit_report(&outputs, Some(dir.path()), Format::Csv, &mut Vec::new()).unwrap();
        assert_eq!(paths.len(), 3);
        assert_eq!(
            std::fs::read_to_string(dir.path().join("rep.csv")).unwrap(),
            "a\n"
        );
        assert_eq!(
            std::fs::read_to_string(dir.path().join("g.txt")).unwrap(),
            "1 0\n"
        );
    }
}
