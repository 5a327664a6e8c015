//! CSV reading and writing for datasets.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read};
use std::path::Path;

use qmts_core::Dataset;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot open {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: file contains no data rows")]
    Empty { path: String },
    #[error("{path}:{line}: expected {expected} fields, found {found}")]
    RaggedRow {
        path: String,
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{path}:{line}: field {column} ({value:?}) is not a finite number")]
    BadNumber {
        path: String,
        line: usize,
        column: usize,
        value: String,
    },
    #[error("{path}: label column {column} out of range for {width} fields")]
    LabelColumnOutOfRange {
        path: String,
        column: usize,
        width: usize,
    },
    #[error("{path}: {message}")]
    Shape { path: String, message: String },
}

/// How a CSV file is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CsvOptions {
    pub delimiter: u8,
    pub has_header: bool,
    /// 0-based index of a non-numeric label column to keep out of the
    /// feature matrix but retain for reporting.
    pub label_column: Option<usize>,
}

impl Default for CsvOptions {
    fn default() -> Self {
        Self {
            delimiter: b',',
            has_header: true,
            label_column: None,
        }
    }
}

/// Reads a CSV file into a dataset named after the file stem.
///
/// All rows must have the same width; every non-label field must parse as a
/// finite number. Errors carry 1-based line numbers.
pub fn load_csv(path: impl AsRef<Path>, options: CsvOptions) -> Result<Dataset, LoadError> {
    let path = path.as_ref();
    let path_str = path.display().to_string();
    let file = File::open(path).map_err(|source| LoadError::Io {
        path: path_str.clone(),
        source,
    })?;
    load_csv_reader(BufReader::new(file), &path_str, dataset_name(path), options)
}

fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

/// As [`load_csv`], from any reader. `path` is used in error messages only.
pub fn load_csv_reader(
    reader: impl Read,
    path: &str,
    name: impl Into<String>,
    options: CsvOptions,
) -> Result<Dataset, LoadError> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .delimiter(options.delimiter)
        .has_headers(options.has_header)
        .flexible(true) // width is validated manually for precise errors
        .from_reader(reader);

    let mut width: Option<usize> = None;
    let mut points: Vec<f64> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    let mut n = 0usize;

    for (i, record) in csv_reader.records().enumerate() {
        let line = i + 1 + usize::from(options.has_header);
        let record = record.map_err(|e| LoadError::Shape {
            path: path.to_string(),
            message: e.to_string(),
        })?;
        let found = record.len();
        let expected = *width.get_or_insert(found);
        if found != expected {
            return Err(LoadError::RaggedRow {
                path: path.to_string(),
                line,
                expected,
                found,
            });
        }
        if let Some(col) = options.label_column {
            if col >= expected {
                return Err(LoadError::LabelColumnOutOfRange {
                    path: path.to_string(),
                    column: col,
                    width: expected,
                });
            }
        }
        for (col, field) in record.iter().enumerate() {
            if options.label_column == Some(col) {
                labels.push(field.to_string());
                continue;
            }
            let value: f64 = field.trim().parse().map_err(|_| LoadError::BadNumber {
                path: path.to_string(),
                line,
                column: col,
                value: field.to_string(),
            })?;
            if !value.is_finite() {
                return Err(LoadError::BadNumber {
                    path: path.to_string(),
                    line,
                    column: col,
                    value: field.to_string(),
                });
            }
            points.push(value);
        }
        n += 1;
    }

    if n == 0 {
        return Err(LoadError::Empty {
            path: path.to_string(),
        });
    }
    let d = width.unwrap() - usize::from(options.label_column.is_some());
    let mut ds = Dataset::new(name, n, d, points).map_err(|e| LoadError::Shape {
        path: path.to_string(),
        message: e.to_string(),
    })?;
    if options.label_column.is_some() {
        ds = ds.with_labels(labels).map_err(|e| LoadError::Shape {
            path: path.to_string(),
            message: e.to_string(),
        })?;
    }
    Ok(ds)
}

/// Writes a dataset back to CSV with the delimiter and header conventions of
/// `options`. Labels, when present, always come last regardless of where the
/// original label column sat. Values are printed in the shortest form that
/// parses back to the identical float, so a load/write/load cycle (label
/// last) is lossless.
pub fn write_csv(
    ds: &Dataset,
    path: impl AsRef<Path>,
    options: CsvOptions,
) -> Result<(), LoadError> {
    let path = path.as_ref();
    let path_str = path.display().to_string();
    let file = File::create(path).map_err(|source| LoadError::Io {
        path: path_str.clone(),
        source,
    })?;
    let mut writer = csv::WriterBuilder::new()
        .delimiter(options.delimiter)
        .from_writer(BufWriter::new(file));
    let csv_err = |e: csv::Error| LoadError::Shape {
        path: path_str.clone(),
        message: e.to_string(),
    };

    if options.has_header {
        let mut fields: Vec<String> = (0..ds.dim()).map(|j| format!("f{j}")).collect();
        if ds.labels().is_some() {
            fields.push("label".to_string());
        }
        writer.write_record(&fields).map_err(csv_err)?;
    }
    for i in 0..ds.len() {
        let mut fields: Vec<String> = ds.row(i).iter().map(|v| format!("{v}")).collect();
        if let Some(labels) = ds.labels() {
            fields.push(labels[i].clone());
        }
        writer.write_record(&fields).map_err(csv_err)?;
    }
    writer.flush().map_err(|e| LoadError::Io {
        path: path_str.clone(),
        source: e,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load_str(content: &str, options: CsvOptions) -> Result<Dataset, LoadError> {
        load_csv_reader(content.as_bytes(), "test.csv", "test", options)
    }

    #[test]
    fn single_row_without_header() {
        let ds = load_str(
            "1.0,2.0",
            CsvOptions {
                has_header: false,
                ..CsvOptions::default()
            },
        )
        .unwrap();
        assert_eq!((ds.len(), ds.dim()), (1, 2));
        assert_eq!(ds.row(0), &[1.0, 2.0]);
    }

    #[test]
    fn header_and_label_column_are_split_out() {
        let content = "a,b,species\n1.5,2.5,setosa\n3.5,4.5,virginica\n";
        let ds = load_str(
            content,
            CsvOptions {
                label_column: Some(2),
                ..CsvOptions::default()
            },
        )
        .unwrap();
        assert_eq!((ds.len(), ds.dim()), (2, 2));
        assert_eq!(ds.row(1), &[3.5, 4.5]);
        assert_eq!(ds.labels().unwrap(), &["setosa", "virginica"]);
    }

    #[test]
    fn non_numeric_cell_reports_its_line() {
        let err = load_str(
            "1.0,abc",
            CsvOptions {
                has_header: false,
                ..CsvOptions::default()
            },
        )
        .unwrap_err();
        match err {
            LoadError::BadNumber { line, column, value, .. } => {
                assert_eq!((line, column), (1, 1));
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn ragged_row_reports_its_line() {
        let content = "a,b\n1.0,2.0\n3.0\n";
        let err = load_str(content, CsvOptions::default()).unwrap_err();
        match err {
            LoadError::RaggedRow { line, expected, found, .. } => {
                assert_eq!((line, expected, found), (3, 2, 1));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            load_str("", CsvOptions::default()),
            Err(LoadError::Empty { .. })
        ));
        // header only, no data rows
        assert!(matches!(
            load_str("a,b\n", CsvOptions::default()),
            Err(LoadError::Empty { .. })
        ));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let err = load_str(
            "1.0,inf",
            CsvOptions {
                has_header: false,
                ..CsvOptions::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, LoadError::BadNumber { .. }));
    }

    #[test]
    fn alternate_delimiter() {
        let ds = load_str(
            "1.0;2.0\n3.0;4.0",
            CsvOptions {
                delimiter: b';',
                has_header: false,
                ..CsvOptions::default()
            },
        )
        .unwrap();
        assert_eq!(ds.row(1), &[3.0, 4.0]);
    }

    #[test]
    fn write_then_load_round_trips_values() {
        let content = "a,b,tag\n0.1,2.30000000000000004,x\n-1e-3,4.0,y\n";
        let options = CsvOptions {
            label_column: Some(2),
            ..CsvOptions::default()
        };
        let ds = load_str(content, options).unwrap();

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("roundtrip.csv");
        write_csv(&ds, &path, options).unwrap();
        let reloaded = load_csv(&path, options).unwrap();
        assert_eq!(reloaded.values(), ds.values());
        assert_eq!(reloaded.labels(), ds.labels());
    }
}
