use std::io::Write;
use std::path::Path;

use serde_json::{Map, Value};

use crate::scenario::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Empty,
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

/// A table with fixed column order, rendered as CSV or as a JSON array of
/// row objects (empty cells become `null`).
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table { header: header.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let mut out = self.header.join(",");
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(csv_cell).collect();
                    out += &cells.join(",");
                    out.push('\n');
                }
                out
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let mut obj = Map::new();
                        for (k, c) in self.header.iter().zip(row) {
                            obj.insert((*k).to_string(), json_cell(*c));
                        }
                        Value::Object(obj)
                    })
                    .collect();
                let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
                s.push('\n');
                s
            }
        }
    }
}

/// 17 significant digits, enough to round-trip an `f64`.
pub fn csv_number(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_cell(c: &Cell) -> String {
    match *c {
        Cell::Num(x) => csv_number(x),
        Cell::Int(n) => n.to_string(),
        Cell::Empty => String::new(),
    }
}

pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn json_cell(c: Cell) -> Value {
    match c {
        Cell::Num(x) => json_number(x),
        Cell::Int(n) => Value::from(n),
        Cell::Empty => Value::Null,
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::numerical(format!("cannot write output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.push(vec![Cell::Num(0.1), Cell::Empty, Cell::Int(3)]);
        assert_eq!(t.render(Format::Csv), "a,b,c\n1.0000000000000001e-1,,3\n");
        assert_eq!(csv_number(0.1).parse::<f64>().unwrap(), 0.1);
        assert_eq!(csv_number(1.0 / 3.0).parse::<f64>().unwrap(), 1.0 / 3.0);
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec![Cell::Num(1.5), Cell::Empty]);
        let v: Value = serde_json::from_str(&t.render(Format::Json)).unwrap();
        assert_eq!(v[0]["a"], 1.5);
        assert!(v[0]["b"].is_null());
    }
}
