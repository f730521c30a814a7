//! Tabular datasets in delimited text.
//!
//! Comma-delimited rows, `#` comment lines, vector cells as `|`-separated
//! numbers. The last column is the target and must be a scalar.

use std::fs;
use std::path::Path;

use thiserror::Error;
use typegp::format::fmt_real;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Scalar(f64),
    Vector(Vec<f64>),
}

impl Cell {
    pub fn scalar(&self) -> Option<f64> {
        match self {
            Cell::Scalar(v) => Some(*v),
            Cell::Vector(_) => None,
        }
    }

    pub fn vector(&self) -> Option<&[f64]> {
        match self {
            Cell::Vector(v) => Some(v),
            Cell::Scalar(_) => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Scalar(v) => fmt_real(*v),
            Cell::Vector(v) => v.iter().map(|x| fmt_real(*x)).collect::<Vec<_>>().join("|"),
        }
    }
}

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("line {line}, column {column}: cannot parse {text:?} as a number")]
    Number {
        line: u64,
        column: usize,
        text: String,
    },
    #[error("line {line}: expected {expected} columns, found {found}")]
    Ragged {
        line: u64,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: {message}")]
    Shape {
        line: u64,
        column: usize,
        message: String,
    },
    #[error("no data rows")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    /// Feature cells, one vector per row; every row has the same shape.
    pub features: Vec<Vec<Cell>>,
    pub targets: Vec<f64>,
}

impl Dataset {
    /// Builds a dataset, checking that rows are rectangular and that each
    /// column is consistently scalar or a vector of one length.
    pub fn new(features: Vec<Vec<Cell>>, targets: Vec<f64>) -> Result<Self, DatasetError> {
        if features.is_empty() {
            return Err(DatasetError::Empty);
        }
        assert_eq!(features.len(), targets.len(), "one target per row");
        let first = &features[0];
        for (r, row) in features.iter().enumerate() {
            let line = r as u64 + 1;
            if row.len() != first.len() {
                return Err(DatasetError::Ragged {
                    line,
                    expected: first.len() + 1,
                    found: row.len() + 1,
                });
            }
            for (c, (cell, head)) in row.iter().zip(first).enumerate() {
                let same = match (cell, head) {
                    (Cell::Scalar(_), Cell::Scalar(_)) => true,
                    (Cell::Vector(a), Cell::Vector(b)) => a.len() == b.len(),
                    _ => false,
                };
                if !same {
                    return Err(DatasetError::Shape {
                        line,
                        column: c,
                        message: "cell shape differs from the first row".into(),
                    });
                }
            }
        }
        Ok(Dataset { features, targets })
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    pub fn columns(&self) -> usize {
        self.features[0].len()
    }

    pub fn parse(text: &str) -> Result<Self, DatasetError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut features = Vec::new();
        let mut targets = Vec::new();
        let mut width = None;
        for record in reader.records() {
            let record = record?;
            let line = record.position().map_or(0, |p| p.line());
            if record.iter().all(str::is_empty) {
                continue;
            }
            let expected = *width.get_or_insert(record.len());
            if record.len() != expected {
                return Err(DatasetError::Ragged {
                    line,
                    expected,
                    found: record.len(),
                });
            }
            if expected < 2 {
                return Err(DatasetError::Shape {
                    line,
                    column: 0,
                    message: "need a feature and a target".into(),
                });
            }
            let mut cells = Vec::with_capacity(expected);
            for (column, text) in record.iter().enumerate() {
                cells.push(parse_cell(text, line, column)?);
            }
            let target = match cells.pop() {
                Some(Cell::Scalar(t)) => t,
                _ => {
                    return Err(DatasetError::Shape {
                        line,
                        column: expected - 1,
                        message: "the target must be a scalar".into(),
                    })
                }
            };
            features.push(cells);
            targets.push(target);
        }
        Dataset::new(features, targets)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, DatasetError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Dataset::parse(&text)
    }

    /// Renders the dataset in the format `parse` reads; reals round-trip.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (row, target) in self.features.iter().zip(&self.targets) {
            let mut cells: Vec<String> = row.iter().map(Cell::render).collect();
            cells.push(fmt_real(*target));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn parse_cell(text: &str, line: u64, column: usize) -> Result<Cell, DatasetError> {
    let number = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| DatasetError::Number {
            line,
            column,
            text: s.to_string(),
        })
    };
    if text.contains('|') {
        Ok(Cell::Vector(
            text.split('|').map(number).collect::<Result<_, _>>()?,
        ))
    } else {
        Ok(Cell::Scalar(number(text)?))
    }
}
