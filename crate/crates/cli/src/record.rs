use std::fmt::Display;
use std::io::{self, Write};

/// One output line: a record kind followed by `key=value` fields in
/// insertion order.
pub struct Record {
    line: String,
}

impl Record {
    pub fn new(kind: &str) -> Self {
        Record { line: kind.to_string() }
    }

    pub fn field(mut self, key: &str, value: impl Display) -> Self {
        self.line.push(' ');
        self.line.push_str(key);
        self.line.push('=');
        self.line.push_str(&value.to_string());
        self
    }

    /// Fixed six-decimal rendering for densities and ratios.
    pub fn real(self, key: &str, value: f64) -> Self {
        self.field(key, format!("{value:.6}"))
    }

    /// Full precision for solver outputs.
    pub fn exact(self, key: &str, value: f64) -> Self {
        self.field(key, format!("{value:.12}"))
    }

    pub fn sci(self, key: &str, value: f64) -> Self {
        self.field(key, format!("{value:.3e}"))
    }

    pub fn emit(self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "{}", self.line)
    }
}

pub fn csv_row(out: &mut dyn Write, cells: &[String]) -> io::Result<()> {
    writeln!(out, "{}", cells.join(","))
}
