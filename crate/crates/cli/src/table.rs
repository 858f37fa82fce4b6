//! Numeric CSV tables with a header row.

use std::io::Read;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum TableError {
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("table has no header row")]
    NoHeader,
    #[error("no column named `{0}`")]
    MissingColumn(String),
    #[error("column `{column}`, row {row}: `{value}` is not a number")]
    NotNumeric {
        column: String,
        row: usize,
        value: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub records: Vec<Vec<String>>,
}

impl Table {
    /// Reads a comma-separated table; every record must match the header
    /// width.
    pub fn read<R: Read>(reader: R) -> Result<Self, TableError> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(reader);
        let headers: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(TableError::NoHeader);
        }
        let mut records = Vec::new();
        for rec in rdr.records() {
            records.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Self { headers, records })
    }

    pub fn column_index(&self, name: &str) -> Result<usize, TableError> {
        self.headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| TableError::MissingColumn(name.to_string()))
    }

    /// Values of a column, `None` for empty cells.
    pub fn column(&self, name: &str) -> Result<Vec<Option<f64>>, TableError> {
        let k = self.column_index(name)?;
        self.records
            .iter()
            .enumerate()
            .map(|(row, rec)| {
                let cell = rec[k].trim();
                if cell.is_empty() {
                    return Ok(None);
                }
                cell.parse::<f64>()
                    .map(Some)
                    .map_err(|_| TableError::NotNumeric {
                        column: name.to_string(),
                        row: row + 1,
                        value: cell.to_string(),
                    })
            })
            .collect()
    }
}
