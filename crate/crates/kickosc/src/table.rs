//! Column tables and their CSV form.
//!
//! Headers read `name [unit]`. Integer columns are written as integers; real
//! columns use `{:.16e}` (17 significant digits, `.` decimal separator), which
//! round-trips every finite `f64` exactly.

use std::io::{Read, Write};
use std::path::Path;

use crate::error::RunError;

/// Column payload.
#[derive(Debug, Clone, PartialEq)]
pub enum ColumnData {
    /// Integer values.
    Int(Vec<i64>),
    /// Real values.
    Real(Vec<f64>),
}

impl ColumnData {
    fn len(&self) -> usize {
        match self {
            ColumnData::Int(v) => v.len(),
            ColumnData::Real(v) => v.len(),
        }
    }

    fn cell(&self, row: usize) -> String {
        match self {
            ColumnData::Int(v) => v[row].to_string(),
            ColumnData::Real(v) => format_real(v[row]),
        }
    }
}

/// Named column with a unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    /// Column name.
    pub name: String,
    /// Unit; `1` for dimensionless.
    pub unit: String,
    /// Values.
    pub data: ColumnData,
}

/// A named set of equally long columns, written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// File stem.
    pub name: String,
    /// Columns in output order.
    pub columns: Vec<Column>,
}

/// Real formatting shared by every CSV.
pub fn format_real(x: f64) -> String {
    // Adding zero maps -0 to +0.
    format!("{:.16e}", x + 0.0)
}

impl Table {
    /// Empty table.
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            columns: Vec::new(),
        }
    }

    /// Appends an integer column.
    pub fn int(mut self, name: &str, unit: &str, values: impl IntoIterator<Item = i64>) -> Self {
        self.columns.push(Column {
            name: name.to_string(),
            unit: unit.to_string(),
            data: ColumnData::Int(values.into_iter().collect()),
        });
        self
    }

    /// Appends a real column.
    pub fn real(mut self, name: &str, unit: &str, values: impl IntoIterator<Item = f64>) -> Self {
        self.columns.push(Column {
            name: name.to_string(),
            unit: unit.to_string(),
            data: ColumnData::Real(values.into_iter().collect()),
        });
        self
    }

    /// Number of rows; zero for a table without columns.
    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |c| c.data.len())
    }

    /// Column by name.
    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|c| c.name == name)
    }

    /// Real values of a column; integer columns are converted.
    pub fn reals(&self, name: &str) -> Option<Vec<f64>> {
        self.column(name).map(|c| match &c.data {
            ColumnData::Int(v) => v.iter().map(|&x| x as f64).collect(),
            ColumnData::Real(v) => v.clone(),
        })
    }

    /// Writes the CSV to any sink.
    pub fn write_to<W: Write>(&self, sink: W) -> std::io::Result<()> {
        let rows = self.rows();
        if let Some(c) = self.columns.iter().find(|c| c.data.len() != rows) {
            return Err(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!(
                    "column `{}` has {} rows, expected {rows}",
                    c.name,
                    c.data.len()
                ),
            ));
        }
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(sink);
        w.write_record(
            self.columns
                .iter()
                .map(|c| format!("{} [{}]", c.name, c.unit)),
        )?;
        for r in 0..rows {
            w.write_record(self.columns.iter().map(|c| c.data.cell(r)))?;
        }
        w.flush()
    }

    /// CSV bytes.
    pub fn to_csv_bytes(&self) -> Vec<u8> {
        let mut buf = Vec::new();
        self.write_to(&mut buf).expect("in-memory write");
        buf
    }

    /// Writes `<dir>/<name>.csv`.
    pub fn write_csv(&self, dir: &Path) -> Result<std::path::PathBuf, RunError> {
        let path = dir.join(format!("{}.csv", self.name));
        let out = |source| RunError::Output {
            path: path.clone(),
            source,
        };
        let file = std::fs::File::create(&path).map_err(out)?;
        self.write_to(std::io::BufWriter::new(file)).map_err(out)?;
        Ok(path)
    }

    /// Parses a CSV written by [`Table::write_to`]. A column is integer when
    /// every cell parses as `i64`.
    pub fn read_from<R: Read>(name: &str, source: R) -> std::io::Result<Self> {
        let bad = |msg: String| std::io::Error::new(std::io::ErrorKind::InvalidData, msg);
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(source);
        let headers: Vec<(String, String)> = r
            .headers()?
            .iter()
            .map(|h| {
                let (name, rest) = h
                    .split_once(" [")
                    .ok_or_else(|| bad(format!("header `{h}` lacks a unit")))?;
                let unit = rest
                    .strip_suffix(']')
                    .ok_or_else(|| bad(format!("header `{h}` lacks a unit")))?;
                Ok((name.to_string(), unit.to_string()))
            })
            .collect::<std::io::Result<_>>()?;
        let mut cells: Vec<Vec<String>> = vec![Vec::new(); headers.len()];
        for record in r.records() {
            let record = record?;
            for (col, cell) in cells.iter_mut().zip(record.iter()) {
                col.push(cell.to_string());
            }
        }
        let columns = headers
            .into_iter()
            .zip(cells)
            .map(|((name, unit), col)| {
                let data = match col.iter().map(|s| s.parse::<i64>()).collect() {
                    Ok(ints) => ColumnData::Int(ints),
                    Err(_) => ColumnData::Real(
                        col.iter()
                            .map(|s| s.parse::<f64>().map_err(|e| bad(format!("`{s}`: {e}"))))
                            .collect::<std::io::Result<_>>()?,
                    ),
                };
                Ok(Column { name, unit, data })
            })
            .collect::<std::io::Result<_>>()?;
        Ok(Self {
            name: name.to_string(),
            columns,
        })
    }

    /// Reads a CSV file; the table name is the file stem.
    pub fn read_csv(path: &Path) -> std::io::Result<Self> {
        let name = path
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or_default()
            .to_string();
        Self::read_from(&name, std::fs::File::open(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn header_and_format() {
        let t = Table::new("demo")
            .int("t", "kicks", [0, 1])
            .real("I", "action", [0.1, -2.5e-300]);
        let text = String::from_utf8(t.to_csv_bytes()).unwrap();
        assert_eq!(
            text,
            "t [kicks],I [action]\n0,1.0000000000000001e-1\n1,-2.5000000000000000e-300\n"
        );
    }

    #[test]
    fn round_trip_is_exact() {
        let xs = [core::f64::consts::PI, 1.0 / 3.0, 1e-310, f64::MAX, 0.0, 7.0];
        let t = Table::new("rt")
            .int("n", "1", [-3, 0, 5, 9, 10, 11])
            .real("x", "nats", xs);
        let back = Table::read_from("rt", t.to_csv_bytes().as_slice()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn ragged_columns_are_an_error() {
        let t = Table::new("bad")
            .int("a", "1", [1, 2])
            .real("b", "1", [1.0]);
        assert!(t.write_to(Vec::new()).is_err());
    }
}
