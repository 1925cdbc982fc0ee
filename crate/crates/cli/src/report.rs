//! Tabular command results and their three output formats.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Md,
}

/// One command's output: named columns of decimal or textual cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Report {
        Report {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<I, T>(&mut self, cells: I) -> &mut Report
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        let row: Vec<String> = cells.into_iter().map(|c| c.to_string()).collect();
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => serde_json::to_string_pretty(self).expect("report serializes") + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&self.columns).expect("in-memory write");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory write");
                }
                String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
            }
            Format::Md => {
                let mut s = String::new();
                let line = |cells: &[String]| format!("| {} |", cells.join(" | "));
                writeln!(s, "{}", line(&self.columns)).unwrap();
                let rule: Vec<String> = self.columns.iter().map(|_| "---".to_string()).collect();
                writeln!(s, "{}", line(&rule)).unwrap();
                for r in &self.rows {
                    writeln!(s, "{}", line(r)).unwrap();
                }
                s
            }
        }
    }
}
