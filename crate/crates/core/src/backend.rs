//! The relational side: the only module that emits SQL.
//!
//! Statements are kept to `CREATE VIEW`, `DROP VIEW`, `SELECT ... WHERE`,
//! `GROUP BY` and `COUNT(*)` so that nothing depends on a vendor dialect.
//! Base tables carry a hidden `_ROW INTEGER PRIMARY KEY` holding the
//! ingestion ordinal; since scans of a table without secondary indexes run
//! in rowid order, `SELECT DISTINCT` over any view chain yields values in
//! order of first appearance within that partition.

use std::path::Path;

use log::debug;
use rusqlite::{params, Connection, OptionalExtension};

use crate::dataset::RowSet;
use crate::error::{Error, Result};
use crate::histogram::ClassHistogram;
use crate::ident;

/// Name of the ingestion-ordinal column added to every base table.
pub const ORDINAL_COLUMN: &str = "_ROW";

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TableRef {
    name: String,
}

impl TableRef {
    pub(crate) fn new(name: impl Into<String>) -> Self {
        TableRef { name: name.into() }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

/// A node view: a projection of its parent relation, optionally restricted
/// by one `attribute = 'value'` equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewDefinition {
    pub view_name: String,
    pub parent_relation: String,
    /// Projected columns; the class attribute is always last.
    pub projected_attributes: Vec<String>,
    pub predicate: Option<(String, String)>,
}

impl ViewDefinition {
    pub fn sql(&self) -> String {
        let mut sql = format!(
            "CREATE VIEW {} AS SELECT {} FROM {}",
            self.view_name,
            self.projected_attributes.join(", "),
            self.parent_relation
        );
        if let Some((att, value)) = &self.predicate {
            sql.push_str(&format!(" WHERE {} = {}", att, ident::literal(value)));
        }
        sql
    }

    fn check(&self) -> Result<()> {
        ident::validate(&self.view_name)?;
        ident::validate(&self.parent_relation)?;
        if self.projected_attributes.is_empty() {
            return Err(Error::InvalidParameter(format!(
                "view {} projects no columns",
                self.view_name
            )));
        }
        for att in &self.projected_attributes {
            ident::validate(att)?;
        }
        if let Some((att, _)) = &self.predicate {
            ident::validate(att)?;
            if self
                .projected_attributes
                .iter()
                .any(|a| a.eq_ignore_ascii_case(att))
            {
                return Err(Error::InvalidParameter(format!(
                    "view {} projects its own split attribute {att}",
                    self.view_name
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DropReport {
    pub dropped: usize,
    pub missing: usize,
}

/// One connection to an embedded SQLite database.
pub struct Backend {
    conn: Connection,
}

impl Backend {
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        Ok(Backend {
            conn: Connection::open(path)?,
        })
    }

    pub fn open_in_memory() -> Result<Self> {
        Ok(Backend {
            conn: Connection::open_in_memory()?,
        })
    }

    pub fn connection(&self) -> &Connection {
        &self.conn
    }

    pub(crate) fn execute(&self, sql: &str) -> Result<()> {
        debug!("{sql}");
        self.conn.execute_batch(sql).map_err(|e| Error::sql(sql, e))
    }

    /// `"table"` or `"view"` when `name` exists.
    pub fn relation_kind(&self, name: &str) -> Result<Option<String>> {
        Ok(self
            .conn
            .query_row(
                "SELECT type FROM sqlite_master WHERE name = ?1 COLLATE NOCASE \
                 AND type IN ('table', 'view')",
                params![name],
                |r| r.get(0),
            )
            .optional()?)
    }

    pub fn relation_exists(&self, name: &str) -> Result<bool> {
        Ok(self.relation_kind(name)?.is_some())
    }

    pub fn table(&self, name: &str) -> Result<TableRef> {
        match self.relation_kind(name)?.as_deref() {
            Some("table") => Ok(TableRef::new(name)),
            _ => Err(Error::UnknownRelation(name.to_string())),
        }
    }

    pub fn columns(&self, relation: &str) -> Result<Vec<String>> {
        if !self.relation_exists(relation)? {
            return Err(Error::UnknownRelation(relation.to_string()));
        }
        let mut stmt = self
            .conn
            .prepare("SELECT name FROM pragma_table_info(?1) ORDER BY cid")?;
        let cols = stmt
            .query_map(params![relation], |r| r.get::<_, String>(0))?
            .collect::<rusqlite::Result<Vec<_>>>()?;
        Ok(cols)
    }

    fn require_columns(&self, relation: &str, wanted: &[&str]) -> Result<()> {
        let cols = self.columns(relation)?;
        for w in wanted {
            if !cols.iter().any(|c| c.eq_ignore_ascii_case(w)) {
                return Err(Error::UnknownColumn {
                    relation: relation.to_string(),
                    column: w.to_string(),
                });
            }
        }
        Ok(())
    }

    /// All views currently defined, by name.
    pub fn views(&self) -> Result<Vec<String>> {
        let mut stmt = self
            .conn
            .prepare("SELECT name FROM sqlite_master WHERE type = 'view' ORDER BY name")?;
        let names = stmt
            .query_map([], |r| r.get(0))?
            .collect::<rusqlite::Result<Vec<_>>>()?;
        Ok(names)
    }

    /// Creates a base table holding `rows` verbatim, plus the ordinal column.
    pub fn ingest(&self, table: &str, rows: &RowSet) -> Result<TableRef> {
        ident::validate(table)?;
        if self.relation_exists(table)? {
            return Err(Error::NameCollision(table.to_string()));
        }
        let names: Vec<&str> = rows
            .schema
            .attributes
            .iter()
            .map(|a| a.name.as_str())
            .collect();
        if let Some(clash) = names
            .iter()
            .find(|n| n.eq_ignore_ascii_case(ORDINAL_COLUMN))
        {
            return Err(Error::IdentifierCollision {
                first: ORDINAL_COLUMN.to_string(),
                second: clash.to_string(),
                sanitized: clash.to_string(),
            });
        }
        let columns: Vec<String> = names.iter().map(|n| format!("{n} TEXT NOT NULL")).collect();
        self.execute(&format!(
            "CREATE TABLE {table} ({ORDINAL_COLUMN} INTEGER PRIMARY KEY, {})",
            columns.join(", ")
        ))?;

        let insert = format!(
            "INSERT INTO {table} ({}) VALUES ({})",
            names.join(", "),
            (1..=names.len())
                .map(|i| format!("?{i}"))
                .collect::<Vec<_>>()
                .join(", ")
        );
        let tx = self.conn.unchecked_transaction()?;
        {
            let mut stmt = tx.prepare(&insert).map_err(|e| Error::sql(&insert, e))?;
            for row in &rows.rows {
                stmt.execute(rusqlite::params_from_iter(row.iter()))
                    .map_err(|e| Error::sql(&insert, e))?;
            }
        }
        tx.commit()?;
        debug!("loaded {} rows into {table}", rows.len());
        Ok(TableRef::new(table))
    }

    pub fn create_view(&self, def: &ViewDefinition) -> Result<String> {
        def.check()?;
        if self.relation_exists(&def.view_name)? {
            return Err(Error::NameCollision(def.view_name.clone()));
        }
        let mut needed: Vec<&str> = def
            .projected_attributes
            .iter()
            .map(String::as_str)
            .collect();
        if let Some((att, _)) = &def.predicate {
            needed.push(att);
        }
        self.require_columns(&def.parent_relation, &needed)?;
        self.execute(&def.sql())?;
        Ok(def.view_name.clone())
    }

    pub fn class_counts(&self, relation: &str, class_attribute: &str) -> Result<ClassHistogram> {
        ident::validate(relation)?;
        ident::validate(class_attribute)?;
        self.require_columns(relation, &[class_attribute])?;
        let sql = format!(
            "SELECT {class_attribute}, COUNT(*) FROM {relation} GROUP BY {class_attribute}"
        );
        debug!("{sql}");
        let mut stmt = self.conn.prepare(&sql).map_err(|e| Error::sql(&sql, e))?;
        let hist = stmt
            .query_map([], |r| Ok((r.get::<_, String>(0)?, r.get::<_, i64>(1)?)))
            .and_then(|rows| {
                rows.map(|r| r.map(|(c, n)| (c, n as u64)))
                    .collect::<rusqlite::Result<ClassHistogram>>()
            })
            .map_err(|e| Error::sql(&sql, e))?;
        Ok(hist)
    }

    /// Distinct values of `attribute` in `relation`, in first-appearance order.
    pub fn distinct_values(&self, relation: &str, attribute: &str) -> Result<Vec<String>> {
        ident::validate(relation)?;
        ident::validate(attribute)?;
        self.require_columns(relation, &[attribute])?;
        let sql = format!("SELECT DISTINCT {attribute} FROM {relation}");
        debug!("{sql}");
        let mut stmt = self.conn.prepare(&sql).map_err(|e| Error::sql(&sql, e))?;
        let values = stmt
            .query_map([], |r| r.get::<_, String>(0))
            .and_then(|rows| rows.collect::<rusqlite::Result<Vec<_>>>())
            .map_err(|e| Error::sql(&sql, e))?;
        Ok(values)
    }

    /// Drops the named views. Names that are not existing views are skipped.
    pub fn drop_views<S: AsRef<str>>(&self, names: &[S]) -> Result<DropReport> {
        let mut report = DropReport::default();
        for name in names {
            let name = name.as_ref();
            if ident::is_valid(name) && self.relation_kind(name)?.as_deref() == Some("view") {
                self.execute(&format!("DROP VIEW {name}"))?;
                report.dropped += 1;
            } else {
                report.missing += 1;
            }
        }
        Ok(report)
    }

    pub fn count_rows(&self, relation: &str) -> Result<u64> {
        ident::validate(relation)?;
        if !self.relation_exists(relation)? {
            return Err(Error::UnknownRelation(relation.to_string()));
        }
        let sql = format!("SELECT COUNT(*) FROM {relation}");
        let n: i64 = self
            .conn
            .query_row(&sql, [], |r| r.get(0))
            .map_err(|e| Error::sql(&sql, e))?;
        Ok(n as u64)
    }

    /// `COUNT(*)` of the rows of `relation` where `attribute = value`.
    pub fn count_where(&self, relation: &str, attribute: &str, value: &str) -> Result<u64> {
        ident::validate(relation)?;
        ident::validate(attribute)?;
        self.require_columns(relation, &[attribute])?;
        let sql = format!("SELECT COUNT(*) FROM {relation} WHERE {attribute} = ?1");
        let n: i64 = self
            .conn
            .query_row(&sql, params![value], |r| r.get(0))
            .map_err(|e| Error::sql(&sql, e))?;
        Ok(n as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> (Backend, TableRef) {
        let header = ["att1", "att2", "class"];
        let rows = [
            ["A", "0", "c1"],
            ["A", "1", "c2"],
            ["B", "0", "c1"],
            ["A", "0", "c1"],
            ["B", "1", "c1"],
        ]
        .iter()
        .map(|r| r.iter().map(|s| s.to_string()).collect())
        .collect();
        let rows = RowSet::new(&header, rows, "class").unwrap();
        let backend = Backend::open_in_memory().unwrap();
        let table = backend.ingest("training_set", &rows).unwrap();
        (backend, table)
    }

    fn root(backend: &Backend) {
        backend
            .create_view(&ViewDefinition {
                view_name: "v0".into(),
                parent_relation: "training_set".into(),
                projected_attributes: vec!["att1".into(), "att2".into(), "class".into()],
                predicate: None,
            })
            .unwrap();
    }

    fn child(name: &str, parent: &str, att: &str, value: &str, keep: &[&str]) -> ViewDefinition {
        ViewDefinition {
            view_name: name.into(),
            parent_relation: parent.into(),
            projected_attributes: keep.iter().map(|s| s.to_string()).collect(),
            predicate: Some((att.into(), value.into())),
        }
    }

    #[test]
    fn view_sql_templates() {
        let root = ViewDefinition {
            view_name: "v0".into(),
            parent_relation: "training_set".into(),
            projected_attributes: vec!["att1".into(), "att2".into(), "class".into()],
            predicate: None,
        };
        assert_eq!(
            root.sql(),
            "CREATE VIEW v0 AS SELECT att1, att2, class FROM training_set"
        );
        let v11 = child("v11", "v0", "att1", "A", &["att2", "class"]);
        assert_eq!(
            v11.sql(),
            "CREATE VIEW v11 AS SELECT att2, class FROM v0 WHERE att1 = 'A'"
        );
    }

    #[test]
    fn nested_views_partition_the_parent() {
        let (b, table) = sample();
        assert_eq!(table.name(), "training_set");
        root(&b);
        assert_eq!(b.count_rows("v0").unwrap(), 5);
        b.create_view(&child("v11", "v0", "att1", "A", &["att2", "class"]))
            .unwrap();
        b.create_view(&child("v21", "v11", "att2", "0", &["class"]))
            .unwrap();
        assert_eq!(b.columns("v21").unwrap(), ["class"]);
        assert_eq!(
            b.count_rows("v11").unwrap(),
            b.count_where("v0", "att1", "A").unwrap()
        );
        let h = b.class_counts("v21", "class").unwrap();
        assert_eq!(h.total(), 2);
        assert_eq!(h.get("c1"), 2);
        assert_eq!(b.distinct_values("v0", "att1").unwrap(), ["A", "B"]);
        assert_eq!(b.distinct_values("v11", "att2").unwrap(), ["0", "1"]);
    }

    #[test]
    fn empty_partition() {
        let (b, _) = sample();
        root(&b);
        b.create_view(&child("vz", "v0", "att1", "Z", &["att2", "class"]))
            .unwrap();
        assert_eq!(b.count_rows("vz").unwrap(), 0);
        let h = b.class_counts("vz", "class").unwrap();
        assert!(h.is_empty());
        assert_eq!(h.total(), 0);
        assert!(b.distinct_values("vz", "att2").unwrap().is_empty());
    }

    #[test]
    fn pure_partition_histogram() {
        let (b, _) = sample();
        root(&b);
        b.create_view(&child("vb", "v0", "att1", "B", &["att2", "class"]))
            .unwrap();
        let h = b.class_counts("vb", "class").unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.get("c1"), 2);
    }

    #[test]
    fn create_view_errors() {
        let (b, _) = sample();
        root(&b);
        let dup = b.create_view(&child("v0", "training_set", "att1", "A", &["class"]));
        assert!(matches!(dup, Err(Error::NameCollision(_))));
        let orphan = b.create_view(&child("vx", "nosuch", "att1", "A", &["class"]));
        assert!(matches!(orphan, Err(Error::UnknownRelation(_))));
        let bad_col = b.create_view(&child("vy", "v0", "att9", "A", &["class"]));
        assert!(matches!(bad_col, Err(Error::UnknownColumn { .. })));
        let self_split = b.create_view(&child("vw", "v0", "att1", "A", &["att1", "class"]));
        assert!(matches!(self_split, Err(Error::InvalidParameter(_))));
        assert!(matches!(
            b.class_counts("nosuch", "class"),
            Err(Error::UnknownRelation(_))
        ));
        assert!(matches!(
            b.distinct_values("v0", "zz"),
            Err(Error::UnknownColumn { .. })
        ));
    }

    #[test]
    fn quoted_values_round_trip() {
        let rows = RowSet::new(
            &["name", "c"],
            vec![
                vec!["O'Brien".into(), "x".into()],
                vec!["Smith".into(), "y".into()],
            ],
            "c",
        )
        .unwrap();
        let b = Backend::open_in_memory().unwrap();
        b.ingest("people", &rows).unwrap();
        b.create_view(&child("v1", "people", "name", "O'Brien", &["c"]))
            .unwrap();
        assert_eq!(b.count_rows("v1").unwrap(), 1);
        assert_eq!(b.class_counts("v1", "c").unwrap().get("x"), 1);
    }

    #[test]
    fn drop_is_idempotent() {
        let (b, _) = sample();
        root(&b);
        b.create_view(&child("v11", "v0", "att1", "A", &["att2", "class"]))
            .unwrap();
        let names = ["v11", "v0"];
        assert_eq!(
            b.drop_views(&names).unwrap(),
            DropReport {
                dropped: 2,
                missing: 0
            }
        );
        assert_eq!(
            b.drop_views(&names).unwrap(),
            DropReport {
                dropped: 0,
                missing: 2
            }
        );
        assert_eq!(b.drop_views::<&str>(&[]).unwrap().dropped, 0);
        assert_eq!(b.drop_views(&["training_set"]).unwrap().dropped, 0);
        assert!(b.views().unwrap().is_empty());
    }

    #[test]
    fn ingest_rejects_collisions() {
        let (b, _) = sample();
        let rows = RowSet::new(&["a", "c"], vec![vec!["1".into(), "x".into()]], "c").unwrap();
        assert!(matches!(
            b.ingest("training_set", &rows),
            Err(Error::NameCollision(_))
        ));
        let rows = RowSet::new(&["_row", "c"], vec![vec!["1".into(), "x".into()]], "c").unwrap();
        assert!(matches!(
            b.ingest("t2", &rows),
            Err(Error::IdentifierCollision { .. })
        ));
    }
}
