//! CSV tables with a provenance comment line.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// `# hsx <command> config=<hash> version=<version>`
pub fn provenance(cfg: &RunConfig) -> String {
    format!(
        "# hsx {} config={} version={}",
        cfg.command,
        cfg.hash(),
        env!("CARGO_PKG_VERSION")
    )
}

/// A table that renders to CSV: header, rows, optional trailing comments.
#[derive(Debug, Clone, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub trailer: Vec<String>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, cfg: &RunConfig) -> String {
        let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
        w.write_record(&self.header).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
        let mut s = provenance(cfg);
        s.push('\n');
        s.push_str(&body);
        for t in &self.trailer {
            s.push_str("# ");
            s.push_str(t);
            s.push('\n');
        }
        s
    }
}

/// Formats a float so that it parses back to the same value.
pub fn num(x: f64) -> String {
    format!("{x}")
}

/// Writes `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| CliError::io(p, e))?;
            f.write_all(text.as_bytes()).map_err(|e| CliError::io(p, e))
        }
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_with_provenance_and_trailer() {
        let cfg = RunConfig::new("slice");
        let mut t = Table::new(&["x", "u"]);
        t.push(vec![num(0.1), num(-2.0)]);
        t.trailer.push("singular_mass=1".into());
        let s = t.render(&cfg);
        let lines: Vec<&str> = s.lines().collect();
        assert!(lines[0].starts_with("# hsx slice config="));
        assert_eq!(lines[1], "x,u");
        assert_eq!(lines[2], "0.1,-2");
        assert_eq!(lines[3], "# singular_mass=1");
    }
}
