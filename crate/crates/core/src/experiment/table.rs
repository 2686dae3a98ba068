use std::fmt::Write as _;

use crate::csv_io::fmt_f64;

/// Missing or inapplicable cell.
pub const NA: &str = "NA";

/// CSV output with `#` metadata lines and a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub comments: Vec<String>,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Self {
            comments: Vec::new(),
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    /// Append a row; cells not named in `cells` are `NA`.
    pub fn push(&mut self, cells: &[(&str, String)]) {
        let mut row = vec![NA.to_string(); self.header.len()];
        for (name, v) in cells {
            let idx = self.index(name).unwrap_or_else(|| panic!("unknown column {name}"));
            row[idx] = v.clone();
        }
        self.rows.push(row);
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| *h == name)
    }

    /// Cell values of one column.
    pub fn column(&self, name: &str) -> Vec<&str> {
        let i = self.index(name).unwrap_or_else(|| panic!("unknown column {name}"));
        self.rows.iter().map(|r| r[i].as_str()).collect()
    }

    /// Rows whose `col` equals `value`.
    pub fn filter<'a>(&'a self, col: &str, value: &'a str) -> impl Iterator<Item = &'a Vec<String>> + 'a {
        let i = self.index(col).unwrap_or_else(|| panic!("unknown column {col}"));
        self.rows.iter().filter(move |r| r[i] == value)
    }

    pub fn get<'a>(&self, row: &'a [String], col: &str) -> &'a str {
        &row[self.index(col).unwrap_or_else(|| panic!("unknown column {col}"))]
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for c in &self.comments {
            let _ = writeln!(s, "# {c}");
        }
        let _ = writeln!(s, "{}", self.header.join(","));
        for r in &self.rows {
            let _ = writeln!(s, "{}", r.join(","));
        }
        s
    }
}

pub(crate) fn f(x: f64) -> String {
    fmt_f64(x)
}

pub(crate) fn opt_f(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}
