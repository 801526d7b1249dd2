//! CSV tables with a trailing `# seed=<master>` line.

use std::io::Write;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<&str>> {
        let idx = self.header.iter().position(|h| *h == name)?;
        Some(self.rows.iter().map(|r| r[idx].as_str()).collect())
    }

    pub fn write(&self, seed: u64, mut w: impl Write) -> Result<(), CliError> {
        {
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&self.header)?;
            for row in &self.rows {
                csv.write_record(row)?;
            }
            csv.flush()?;
        }
        writeln!(w, "# seed={seed}")?;
        Ok(())
    }

    pub fn to_csv_string(&self, seed: u64) -> String {
        let mut buf = Vec::new();
        self.write(seed, &mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Writes to `path`, or stdout when `path` is `None`.
    pub fn write_to(&self, seed: u64, path: Option<&Path>) -> Result<(), CliError> {
        match path {
            Some(p) => {
                let file = std::fs::File::create(p)
                    .map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
                let mut w = std::io::BufWriter::new(file);
                self.write(seed, &mut w)?;
                w.flush()?;
                Ok(())
            }
            None => self.write(seed, std::io::stdout().lock()),
        }
    }
}

/// Shortest round-trip form, so equal values print identically.
pub fn num(x: f64) -> String {
    format!("{x}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_rows_seed_line() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["1".into(), num(0.5)]);
        t.push(vec!["2".into(), opt_num(None)]);
        assert_eq!(t.to_csv_string(9), "a,b\n1,0.5\n2,\n# seed=9\n");
        assert_eq!(t.column("b").unwrap(), vec!["0.5", ""]);
        assert!(t.column("c").is_none());
    }
}
