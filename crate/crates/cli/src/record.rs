//! Output records and their CSV and JSON encodings.

use std::io::Write;

use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Num(if b { 1.0 } else { 0.0 })
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// Shortest decimal that parses back to the same double. Plain notation in
/// [1e-4, 1e15), exponent notation outside.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// A command's result: input echo, ordered columns, rows and warnings.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub flags: Vec<String>,
}

impl OutputRecord {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        OutputRecord {
            command: command.to_string(),
            inputs: Vec::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl ToString) {
        self.inputs.push((key.to_string(), value.to_string()));
    }

    pub fn input_f64(&mut self, key: &str, value: f64) {
        self.input(key, format_f64(value));
    }

    pub fn flag(&mut self, msg: impl Into<String>) {
        self.flags.push(msg.into());
    }

    /// Appends a row. Non-finite numbers become empty cells and are
    /// reported as flags instead of being written.
    ///
    /// # Panics
    /// If the row length differs from the column count.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        let index = self.rows.len();
        let row = row
            .into_iter()
            .enumerate()
            .map(|(j, c)| match c {
                Cell::Num(x) if !x.is_finite() => {
                    self.flags.push(format!(
                        "non-finite {x} in row {index}, column {}",
                        self.columns[j]
                    ));
                    Cell::Missing
                }
                c => c,
            })
            .collect();
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "# schema_version={SCHEMA_VERSION}")?;
        writeln!(out, "# command={}", self.command)?;
        for (k, v) in &self.inputs {
            writeln!(out, "# input {k}={v}")?;
        }
        for f in &self.flags {
            writeln!(out, "# flag {f}")?;
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Num(x) => format_f64(*x),
                Cell::Text(s) => s.clone(),
                Cell::Missing => String::new(),
            }))?;
        }
        w.flush()
    }

    pub fn to_json(&self) -> Value {
        let cell = |c: &Cell| match c {
            Cell::Num(x) => json_number(*x),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Missing => Value::Null,
        };
        let inputs: Map<String, Value> = self
            .inputs
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.clone())))
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": inputs,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(cell).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "flags": self.flags,
        })
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_json())?;
        writeln!(out)
    }
}

/// JSON number, or a string when the decimal exponent exceeds 300 in
/// magnitude so that consumers with narrower floats do not overflow.
fn json_number(x: f64) -> Value {
    if x != 0.0 && x.abs().log10().floor().abs() > 300.0 {
        return Value::String(format_f64(x));
    }
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formatting_round_trips() {
        for x in [
            0.0,
            1.0,
            -2.5,
            0.1,
            1e-4,
            9.99e-5,
            2.098e-39,
            1e15,
            123456789.125,
            f64::MIN_POSITIVE,
            f64::MAX,
            5e-324,
        ] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_f64(0.5), "0.5");
        assert_eq!(format_f64(2.098e-39), "2.098e-39");
    }

    #[test]
    fn non_finite_cells_become_flags() {
        let mut r = OutputRecord::new("x", &["a", "b"]);
        r.push(vec![Cell::Num(f64::NAN), 1.0.into()]);
        assert_eq!(r.rows[0][0], Cell::Missing);
        assert_eq!(r.flags.len(), 1);
    }

    proptest::proptest! {
        #[test]
        fn csv_cells_round_trip_bit_for_bit(xs in proptest::collection::vec(proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 1..8)) {
            let cols: Vec<String> = (0..xs.len()).map(|i| format!("c{i}")).collect();
            let names: Vec<&str> = cols.iter().map(String::as_str).collect();
            let mut r = OutputRecord::new("p", &names);
            r.push(xs.iter().map(|&x| Cell::Num(x)).collect());
            let mut buf = Vec::new();
            r.write_csv(&mut buf).unwrap();
            let mut rd = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(buf.as_slice());
            let row = rd.records().next().unwrap().unwrap();
            for (cell, x) in row.iter().zip(&xs) {
                proptest::prop_assert_eq!(cell.parse::<f64>().unwrap().to_bits(), x.to_bits());
            }
        }
    }

    #[test]
    fn tiny_json_numbers_are_strings() {
        assert_eq!(json_number(1e-310), Value::String("1e-310".into()));
        assert!(json_number(1e-39).is_number());
    }

    #[test]
    fn csv_layout() {
        let mut r = OutputRecord::new("demo", &["t", "v"]);
        r.input("r", 0.5);
        r.push(vec![0.1.into(), Cell::Missing]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "# schema_version=1\n# command=demo\n# input r=0.5\nt,v\n0.1,\n"
        );
    }
}
