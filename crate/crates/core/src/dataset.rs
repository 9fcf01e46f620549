//! Delimited text ingestion and the categorical schema of a training set.
//!
//! Every value is kept as text. Fields are trimmed; the empty string is a
//! legal category. Column names go through [`ident::sanitize`].

use std::collections::HashSet;
use std::fs::File;
use std::path::Path;

use crate::backend::{Backend, TableRef};
use crate::error::{Error, Result};
use crate::ident;

/// One categorical attribute and the distinct values it takes, in order of
/// first appearance in the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttributeSpec {
    pub name: String,
    pub domain: Vec<String>,
}

impl AttributeSpec {
    pub fn position(&self, value: &str) -> Option<usize> {
        self.domain.iter().position(|v| v == value)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetSchema {
    pub attributes: Vec<AttributeSpec>,
    pub class_attribute: String,
}

impl DatasetSchema {
    pub fn attribute(&self, name: &str) -> Option<&AttributeSpec> {
        self.attributes.iter().find(|a| a.name == name)
    }

    pub fn class(&self) -> &AttributeSpec {
        self.attribute(&self.class_attribute)
            .expect("schema invariant: class attribute is present")
    }

    pub fn class_values(&self) -> &[String] {
        &self.class().domain
    }

    /// Predictive attributes in column order.
    pub fn predictive(&self) -> impl Iterator<Item = &AttributeSpec> {
        self.attributes
            .iter()
            .filter(move |a| a.name != self.class_attribute)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }
}

/// An in-memory training set: rows of text values under a schema.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowSet {
    pub schema: DatasetSchema,
    pub rows: Vec<Vec<String>>,
}

impl RowSet {
    /// Builds a row set from a raw header and rows. Header names are
    /// sanitized; `class_attribute` may be given raw or sanitized and is
    /// matched case-insensitively.
    pub fn new<S: AsRef<str>>(
        header: &[S],
        rows: Vec<Vec<String>>,
        class_attribute: &str,
    ) -> Result<Self> {
        let names = ident::sanitize_all(header.iter().map(|h| h.as_ref()))?;
        let wanted = class_attribute.trim();
        let class_idx = header
            .iter()
            .zip(&names)
            .position(|(raw, clean)| {
                raw.as_ref().trim().eq_ignore_ascii_case(wanted)
                    || clean.eq_ignore_ascii_case(wanted)
            })
            .ok_or_else(|| Error::UnknownClassAttribute(class_attribute.to_string()))?;
        if names.len() < 2 {
            return Err(Error::NoPredictiveAttributes(names[class_idx].clone()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != names.len() {
                return Err(Error::RaggedRow {
                    line: i as u64 + 2,
                    expected: names.len(),
                    found: row.len(),
                });
            }
        }
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }

        let attributes = names
            .iter()
            .enumerate()
            .map(|(col, name)| {
                let mut seen = HashSet::new();
                let domain = rows
                    .iter()
                    .filter(|r| seen.insert(r[col].as_str()))
                    .map(|r| r[col].clone())
                    .collect();
                AttributeSpec {
                    name: name.clone(),
                    domain,
                }
            })
            .collect();
        let schema = DatasetSchema {
            attributes,
            class_attribute: names[class_idx].clone(),
        };
        Ok(RowSet { schema, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Parses a delimited text file with a mandatory header line.
pub fn read_csv(path: impl AsRef<Path>, class_attribute: &str, delimiter: u8) -> Result<RowSet> {
    let path = path.as_ref();
    if !path.exists() {
        return Err(Error::MissingFile {
            path: path.to_path_buf(),
        });
    }
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .quoting(false)
        .trim(csv::Trim::All)
        .delimiter(delimiter)
        .from_reader(file);

    let mut header: Option<Vec<String>> = None;
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().any(|f| f.contains('"')) {
            return Err(Error::QuotedField { line });
        }
        let fields: Vec<String> = record.iter().map(str::to_string).collect();
        match &header {
            None => header = Some(fields),
            Some(h) if h.len() != fields.len() => {
                return Err(Error::RaggedRow {
                    line,
                    expected: h.len(),
                    found: fields.len(),
                })
            }
            Some(_) => rows.push(fields),
        }
    }
    let header = header.ok_or(Error::EmptyDataset)?;
    RowSet::new(&header, rows, class_attribute)
}

/// Table name derived from a file stem, e.g. `data/titanic.csv` -> `titanic`.
pub fn table_name_for(path: &Path) -> String {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    ident::sanitize(&stem)
}

/// Reads `path` and loads it into `backend` as a base table named after the
/// file stem.
pub fn load_csv(
    backend: &Backend,
    path: impl AsRef<Path>,
    class_attribute: &str,
    delimiter: u8,
) -> Result<(DatasetSchema, TableRef)> {
    let path = path.as_ref();
    load_csv_as(
        backend,
        path,
        class_attribute,
        delimiter,
        &table_name_for(path),
    )
}

pub fn load_csv_as(
    backend: &Backend,
    path: impl AsRef<Path>,
    class_attribute: &str,
    delimiter: u8,
    table: &str,
) -> Result<(DatasetSchema, TableRef)> {
    let rows = read_csv(path, class_attribute, delimiter)?;
    let table = backend.ingest(table, &rows)?;
    Ok((rows.schema, table))
}

#[cfg(test)]
mod tests {
    use std::io::Write;

    use super::*;

    fn file(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn reads_header_and_domains() {
        let f = file("A, B ,C\nx,1,yes\ny,1,no\nx,2,yes\n");
        let rows = read_csv(f.path(), "C", b',').unwrap();
        assert_eq!(rows.len(), 3);
        let names: Vec<_> = rows.schema.attributes.iter().map(|a| &a.name).collect();
        assert_eq!(names, ["A", "B", "C"]);
        assert_eq!(rows.schema.attribute("A").unwrap().domain, ["x", "y"]);
        assert_eq!(rows.schema.attribute("B").unwrap().domain, ["1", "2"]);
        assert_eq!(rows.schema.class_values(), ["yes", "no"]);
        assert_eq!(rows.schema.predictive().count(), 2);
    }

    #[test]
    fn other_delimiter_and_empty_values() {
        let f = file("a;cls\n ;p\nz;q\n");
        let rows = read_csv(f.path(), "cls", b';').unwrap();
        assert_eq!(rows.schema.attribute("a").unwrap().domain, ["", "z"]);
    }

    #[test]
    fn duplicate_rows_are_kept() {
        let f = file("a,c\n1,x\n1,x\n1,x\n");
        assert_eq!(read_csv(f.path(), "c", b',').unwrap().len(), 3);
    }

    #[test]
    fn class_matching_is_case_insensitive() {
        let f = file("Att,My Class\n1,x\n");
        let rows = read_csv(f.path(), "my class", b',').unwrap();
        assert_eq!(rows.schema.class_attribute, "My_Class");
    }

    #[test]
    fn error_cases() {
        let missing = read_csv("/definitely/not/here.csv", "c", b',').unwrap_err();
        assert!(matches!(missing, Error::MissingFile { .. }));

        let f = file("a,c\n1,x\n2\n");
        let err = read_csv(f.path(), "c", b',').unwrap_err();
        assert!(
            matches!(
                err,
                Error::RaggedRow {
                    line: 3,
                    expected: 2,
                    found: 1
                }
            ),
            "{err}"
        );

        let f = file("a,c\n1,x\n");
        let err = read_csv(f.path(), "nope", b',').unwrap_err();
        assert!(matches!(err, Error::UnknownClassAttribute(_)));

        let f = file("a,c\n");
        assert!(matches!(
            read_csv(f.path(), "c", b',').unwrap_err(),
            Error::EmptyDataset
        ));

        let f = file("");
        assert!(matches!(
            read_csv(f.path(), "c", b',').unwrap_err(),
            Error::EmptyDataset
        ));

        let f = file("c\nx\ny\n");
        let err = read_csv(f.path(), "c", b',').unwrap_err();
        assert!(matches!(err, Error::NoPredictiveAttributes(_)));

        let f = file("a,c\n\"1,2\",x\n");
        assert!(matches!(
            read_csv(f.path(), "c", b',').unwrap_err(),
            Error::QuotedField { line: 2 }
        ));

        let f = file("a b,a-b,c\n1,2,x\n");
        let err = read_csv(f.path(), "c", b',').unwrap_err();
        assert!(matches!(err, Error::IdentifierCollision { .. }));
    }

    #[test]
    fn table_names_from_paths() {
        assert_eq!(table_name_for(Path::new("data/titanic.csv")), "titanic");
        assert_eq!(table_name_for(Path::new("2024 data.txt")), "_2024_data");
    }
}
