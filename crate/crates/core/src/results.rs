//! The mining model as a relational result table, plus the things read off
//! it: the indented listing and production rules.
//!
//! Result table layout, one row per node:
//!
//! ```text
//! NODE INTEGER PRIMARY KEY, PARENT INTEGER, RULE TEXT, <CLASS>_<V1> INTEGER, ...
//! ```
//!
//! with one count column per class value, in schema order.

use std::fmt;

use rusqlite::params_from_iter;
use serde::{Deserialize, Serialize};

use crate::backend::{Backend, TableRef};
use crate::builder::BuildParams;
use crate::dataset::DatasetSchema;
use crate::error::{Error, Result};
use crate::ident;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRow {
    pub node: u32,
    pub parent: Option<u32>,
    /// `ATTR=VALUE`, empty for the root.
    pub rule: String,
    /// One count per class value, in schema order.
    pub class_counts: Vec<u64>,
}

impl ResultRow {
    pub fn pop(&self) -> u64 {
        self.class_counts.iter().sum()
    }

    /// Counts as integer percentages of the population, rounded half up.
    pub fn percentages(&self) -> Vec<u64> {
        let pop = self.pop();
        self.class_counts
            .iter()
            .map(|&n| {
                if pop == 0 {
                    0
                } else {
                    (200 * n + pop) / (2 * pop)
                }
            })
            .collect()
    }

    /// `(attribute, value)` of the edge leading here; `None` for the root.
    pub fn split(&self) -> Option<(&str, &str)> {
        self.rule.split_once('=')
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    /// Rows in creation order, which is ascending node id.
    pub rows: Vec<ResultRow>,
    pub schema: DatasetSchema,
    pub params: BuildParams,
}

impl DecisionTree {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, node: u32) -> Option<&ResultRow> {
        self.rows.iter().find(|r| r.node == node)
    }

    /// Children of `node` in ascending id.
    pub fn children(&self, node: u32) -> Vec<&ResultRow> {
        let mut kids: Vec<_> = self
            .rows
            .iter()
            .filter(|r| r.parent == Some(node))
            .collect();
        kids.sort_by_key(|r| r.node);
        kids
    }

    pub fn is_leaf(&self, node: u32) -> bool {
        !self.rows.iter().any(|r| r.parent == Some(node))
    }

    pub fn leaves(&self) -> impl Iterator<Item = &ResultRow> {
        self.rows.iter().filter(|r| self.is_leaf(r.node))
    }

    /// Rows from the root down to `node`, inclusive.
    pub fn path(&self, node: u32) -> Vec<&ResultRow> {
        let mut path = Vec::new();
        let mut cur = self.row(node);
        while let Some(row) = cur {
            path.push(row);
            if path.len() > self.rows.len() {
                break;
            }
            cur = row.parent.and_then(|p| self.row(p));
        }
        path.reverse();
        path
    }

    /// Depth-first order from the root with children in ascending id,
    /// paired with the level (root = 1).
    pub fn depth_first(&self) -> Vec<(u32, &ResultRow)> {
        let mut out = Vec::with_capacity(self.rows.len());
        let mut todo: Vec<(u32, &ResultRow)> = self
            .rows
            .iter()
            .filter(|r| r.parent.is_none())
            .map(|r| (1, r))
            .collect();
        todo.reverse();
        while let Some((level, row)) = todo.pop() {
            out.push((level, row));
            for child in self.children(row.node).into_iter().rev() {
                todo.push((level + 1, child));
            }
        }
        out
    }

    /// Checks that the rows form one tree rooted at node 0 whose counts
    /// line up with the schema.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::MalformedResult(m));
        let width = self.schema.class_values().len();
        let roots: Vec<_> = self.rows.iter().filter(|r| r.parent.is_none()).collect();
        if roots.len() != 1 || roots[0].node != 0 {
            return bad("expected exactly one root, with id 0".into());
        }
        for (i, r) in self.rows.iter().enumerate() {
            if r.class_counts.len() != width {
                return bad(format!(
                    "node {} has {} counts, expected {width}",
                    r.node,
                    r.class_counts.len()
                ));
            }
            if self.rows[..i].iter().any(|o| o.node == r.node) {
                return bad(format!("duplicate node {}", r.node));
            }
            if let Some(p) = r.parent {
                if self.row(p).is_none() {
                    return bad(format!("node {} references missing parent {p}", r.node));
                }
            }
        }
        if self.depth_first().len() != self.rows.len() {
            return bad("rows are not all reachable from the root".into());
        }
        Ok(())
    }
}

/// Count column names, `<CLASS>_<VALUE>`, in schema order.
pub fn count_columns(schema: &DatasetSchema) -> Result<Vec<String>> {
    let labels: Vec<String> = schema
        .class_values()
        .iter()
        .map(|v| format!("{}_{}", schema.class_attribute, value_fragment(v)))
        .collect();
    let mut seen: Vec<String> = ["NODE", "PARENT", "RULE"].map(String::from).to_vec();
    for label in &labels {
        ident::validate(label)?;
        if let Some(first) = seen.iter().find(|s| s.eq_ignore_ascii_case(label)) {
            return Err(Error::IdentifierCollision {
                first: first.clone(),
                second: label.clone(),
                sanitized: label.clone(),
            });
        }
        seen.push(label.clone());
    }
    Ok(labels)
}

fn value_fragment(value: &str) -> String {
    value
        .trim()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// A result table being filled, row by row.
pub struct ResultTable<'a> {
    backend: &'a Backend,
    insert_sql: String,
}

impl<'a> ResultTable<'a> {
    pub fn create(backend: &'a Backend, name: &str, schema: &DatasetSchema) -> Result<Self> {
        ident::validate(name)?;
        let columns = count_columns(schema)?;
        if backend.relation_exists(name)? {
            return Err(Error::NameCollision(name.to_string()));
        }
        let defs: Vec<String> = columns
            .iter()
            .map(|c| format!(", {c} INTEGER NOT NULL"))
            .collect();
        backend.execute(&format!(
            "CREATE TABLE {name} (NODE INTEGER PRIMARY KEY, PARENT INTEGER REFERENCES {name}(NODE), RULE TEXT NOT NULL{})",
            defs.concat()
        ))?;
        let placeholders: Vec<String> = (1..=columns.len() + 3).map(|i| format!("?{i}")).collect();
        let insert_sql = format!(
            "INSERT INTO {name} (NODE, PARENT, RULE, {}) VALUES ({})",
            columns.join(", "),
            placeholders.join(", ")
        );
        Ok(ResultTable {
            backend,
            insert_sql,
        })
    }

    pub fn insert(&mut self, row: &ResultRow) -> Result<()> {
        let mut values: Vec<rusqlite::types::Value> = vec![
            (row.node as i64).into(),
            row.parent.map(|p| p as i64).into(),
            row.rule.clone().into(),
        ];
        values.extend(
            row.class_counts
                .iter()
                .map(|&n| rusqlite::types::Value::from(n as i64)),
        );
        self.backend
            .connection()
            .execute(&self.insert_sql, params_from_iter(values))
            .map_err(|e| Error::sql(&self.insert_sql, e))?;
        Ok(())
    }
}

/// Writes `tree` as a new table named `tree.params.res_name`.
pub fn persist(backend: &Backend, tree: &DecisionTree) -> Result<TableRef> {
    persist_as(backend, tree, &tree.params.res_name)
}

pub fn persist_as(backend: &Backend, tree: &DecisionTree, name: &str) -> Result<TableRef> {
    tree.validate()?;
    let mut table = ResultTable::create(backend, name, &tree.schema)?;
    for row in &tree.rows {
        table.insert(row)?;
    }
    Ok(TableRef::new(name))
}

/// Reads a result table back into a tree.
pub fn read_result_table(
    backend: &Backend,
    name: &str,
    schema: &DatasetSchema,
    params: &BuildParams,
) -> Result<DecisionTree> {
    ident::validate(name)?;
    let columns = count_columns(schema)?;
    if !backend.relation_exists(name)? {
        return Err(Error::UnknownRelation(name.to_string()));
    }
    let sql = format!(
        "SELECT NODE, PARENT, RULE, {} FROM {name} ORDER BY NODE",
        columns.join(", ")
    );
    let mut stmt = backend
        .connection()
        .prepare(&sql)
        .map_err(|e| Error::sql(&sql, e))?;
    let rows = stmt
        .query_map([], |r| {
            let class_counts = (0..columns.len())
                .map(|i| r.get::<_, i64>(3 + i).map(|n| n as u64))
                .collect::<rusqlite::Result<Vec<_>>>()?;
            Ok(ResultRow {
                node: r.get::<_, i64>(0)? as u32,
                parent: r.get::<_, Option<i64>>(1)?.map(|p| p as u32),
                rule: r.get(2)?,
                class_counts,
            })
        })
        .and_then(|rows| rows.collect::<rusqlite::Result<Vec<_>>>())
        .map_err(|e| Error::sql(&sql, e))?;
    let tree = DecisionTree {
        rows,
        schema: schema.clone(),
        params: params.clone(),
    };
    tree.validate()?;
    Ok(tree)
}

/// Every row of a result table rendered as text, in node order. Two tables
/// with equal dumps hold identical contents.
pub fn dump_table(backend: &Backend, name: &str) -> Result<String> {
    ident::validate(name)?;
    let cols = backend.columns(name)?;
    let sql = format!("SELECT * FROM {name} ORDER BY NODE");
    let mut stmt = backend
        .connection()
        .prepare(&sql)
        .map_err(|e| Error::sql(&sql, e))?;
    let mut out = cols.join("|");
    out.push('\n');
    let mut rows = stmt.query([]).map_err(|e| Error::sql(&sql, e))?;
    while let Some(row) = rows.next()? {
        let fields = (0..cols.len())
            .map(|i| {
                Ok(match row.get_ref(i)? {
                    rusqlite::types::ValueRef::Null => "NULL".to_string(),
                    rusqlite::types::ValueRef::Integer(n) => n.to_string(),
                    rusqlite::types::ValueRef::Text(t) => String::from_utf8_lossy(t).into_owned(),
                    other => format!("{other:?}"),
                })
            })
            .collect::<rusqlite::Result<Vec<_>>>()?;
        out.push_str(&fields.join("|"));
        out.push('\n');
    }
    Ok(out)
}

/// Fixed-width, depth-first listing: LEVEL, NODE, PARENT, RULE, then a
/// count and a percentage column per class value.
pub fn hierarchical_listing(tree: &DecisionTree) -> String {
    let classes = tree.schema.class_values();
    let mut header: Vec<String> = ["LEVEL", "NODE", "PARENT", "RULE"]
        .map(String::from)
        .to_vec();
    for v in classes {
        header.push(format!("{}_{}", tree.schema.class_attribute, v));
        header.push(format!("P_{v}"));
    }
    let lines: Vec<Vec<String>> = tree
        .depth_first()
        .into_iter()
        .map(|(level, row)| {
            let mut cells = vec![
                level.to_string(),
                row.node.to_string(),
                row.parent.map(|p| p.to_string()).unwrap_or_default(),
                row.rule.clone(),
            ];
            for (n, pct) in row.class_counts.iter().zip(row.percentages()) {
                cells.push(n.to_string());
                cells.push(format!("{pct}%"));
            }
            cells
        })
        .collect();

    let widths: Vec<usize> = (0..header.len())
        .map(|i| {
            lines
                .iter()
                .map(|l| l[i].chars().count())
                .chain([header[i].chars().count()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let render = |cells: &[String]| {
        let parts: Vec<String> = cells
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if i == 3 {
                    format!("{c:<w$}", w = widths[i])
                } else {
                    format!("{c:>w$}", w = widths[i])
                }
            })
            .collect();
        parts.join(" ").trim_end().to_string()
    };

    let mut out = render(&header);
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&rule.join(" "));
    out.push('\n');
    for line in &lines {
        out.push_str(&render(line));
        out.push('\n');
    }
    out
}

/// An if-then rule read off one root-to-leaf path.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductionRule {
    pub leaf: u32,
    pub conditions: Vec<(String, String)>,
    pub class_attribute: String,
    pub class_value: String,
    /// Share of the leaf population in the concluded class.
    pub probability: f64,
    pub support: u64,
}

impl fmt::Display for ProductionRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("if ")?;
        if self.conditions.is_empty() {
            f.write_str("TRUE")?;
        }
        for (i, (att, value)) in self.conditions.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{att}={value}")?;
        }
        write!(
            f,
            " then {}={} (p={:.2})",
            self.class_attribute, self.class_value, self.probability
        )
    }
}

/// One rule per leaf, in depth-first order. The conclusion is the majority
/// class; ties go to the class listed first in the schema.
pub fn extract_rules(tree: &DecisionTree) -> Vec<ProductionRule> {
    let classes = tree.schema.class_values();
    tree.depth_first()
        .into_iter()
        .filter(|(_, row)| tree.is_leaf(row.node))
        .map(|(_, leaf)| {
            let conditions = tree
                .path(leaf.node)
                .iter()
                .filter_map(|r| r.split())
                .map(|(a, v)| (a.to_string(), v.to_string()))
                .collect();
            let mut best = 0;
            for (i, &n) in leaf.class_counts.iter().enumerate() {
                if n > leaf.class_counts[best] {
                    best = i;
                }
            }
            let pop = leaf.pop();
            let probability = if pop == 0 {
                0.0
            } else {
                leaf.class_counts[best] as f64 / pop as f64
            };
            ProductionRule {
                leaf: leaf.node,
                conditions,
                class_attribute: tree.schema.class_attribute.clone(),
                class_value: classes[best].clone(),
                probability,
                support: pop,
            }
        })
        .collect()
}

/// Machine-readable form of a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeExport {
    pub class_attribute: String,
    pub class_values: Vec<String>,
    pub nodes: Vec<ResultRow>,
}

impl TreeExport {
    pub fn from_tree(tree: &DecisionTree) -> Self {
        TreeExport {
            class_attribute: tree.schema.class_attribute.clone(),
            class_values: tree.schema.class_values().to_vec(),
            nodes: tree.rows.clone(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::AttributeSpec;

    fn schema() -> DatasetSchema {
        DatasetSchema {
            attributes: vec![
                AttributeSpec {
                    name: "A".into(),
                    domain: vec!["p".into(), "q".into()],
                },
                AttributeSpec {
                    name: "C".into(),
                    domain: vec!["x".into(), "y".into()],
                },
            ],
            class_attribute: "C".into(),
        }
    }

    fn row(node: u32, parent: Option<u32>, rule: &str, counts: [u64; 2]) -> ResultRow {
        ResultRow {
            node,
            parent,
            rule: rule.into(),
            class_counts: counts.to_vec(),
        }
    }

    fn tree(rows: Vec<ResultRow>) -> DecisionTree {
        DecisionTree {
            rows,
            schema: schema(),
            params: BuildParams::new("t", "C"),
        }
    }

    fn small() -> DecisionTree {
        tree(vec![
            row(0, None, "", [3, 3]),
            row(1, Some(0), "A=p", [3, 0]),
            row(2, Some(0), "A=q", [0, 3]),
        ])
    }

    #[test]
    fn percentages_round_half_up() {
        assert_eq!(row(0, None, "", [1490, 711]).percentages(), vec![68, 32]);
        assert_eq!(row(0, None, "", [1, 1]).percentages(), vec![50, 50]);
        assert_eq!(row(0, None, "", [1, 7]).percentages(), vec![13, 88]);
        assert_eq!(row(0, None, "", [0, 0]).percentages(), vec![0, 0]);
    }

    #[test]
    fn persist_and_read_back() {
        let b = Backend::open_in_memory().unwrap();
        let t = small();
        let table = persist(&b, &t).unwrap();
        assert_eq!(table.name(), "BTRES");
        assert_eq!(
            b.columns("BTRES").unwrap(),
            ["NODE", "PARENT", "RULE", "C_x", "C_y"]
        );
        let back = read_result_table(&b, "BTRES", &t.schema, &t.params).unwrap();
        assert_eq!(back, t);
        assert!(matches!(persist(&b, &t), Err(Error::NameCollision(_))));
        persist_as(&b, &t, "AGAIN").unwrap();
        assert_eq!(
            dump_table(&b, "AGAIN")
                .unwrap()
                .lines()
                .skip(1)
                .collect::<Vec<_>>(),
            dump_table(&b, "BTRES")
                .unwrap()
                .lines()
                .skip(1)
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn single_leaf_tree() {
        let t = tree(vec![row(0, None, "", [4, 0])]);
        let b = Backend::open_in_memory().unwrap();
        persist(&b, &t).unwrap();
        assert_eq!(b.count_rows("BTRES").unwrap(), 1);
        let listing = hierarchical_listing(&t);
        assert_eq!(listing.lines().count(), 3);
        assert!(listing.lines().nth(2).unwrap().starts_with("    1    0"));
        let rules = extract_rules(&t);
        assert_eq!(rules.len(), 1);
        assert!(rules[0].conditions.is_empty());
        assert_eq!(rules[0].probability, 1.0);
        assert_eq!(rules[0].to_string(), "if TRUE then C=x (p=1.00)");
    }

    #[test]
    fn listing_layout() {
        let expected = concat!(
            "LEVEL NODE PARENT RULE C_x  P_x C_y  P_y\n",
            "----- ---- ------ ---- --- ---- --- ----\n",
            "    1    0               3  50%   3  50%\n",
            "    2    1      0 A=p    3 100%   0   0%\n",
            "    2    2      0 A=q    0   0%   3 100%\n",
        );
        assert_eq!(hierarchical_listing(&small()), expected);
    }

    #[test]
    fn rules_follow_paths_and_break_ties_by_schema_order() {
        let t = tree(vec![
            row(0, None, "", [3, 3]),
            row(1, Some(0), "A=p", [1, 1]),
            row(2, Some(0), "A=q", [2, 2]),
        ]);
        let rules = extract_rules(&t);
        assert_eq!(rules.len(), 2);
        assert_eq!(
            rules[0].conditions,
            vec![("A".to_string(), "p".to_string())]
        );
        assert_eq!(rules[0].class_value, "x");
        assert_eq!(rules[0].probability, 0.5);
        assert_eq!(rules[1].to_string(), "if A=q then C=x (p=0.50)");
    }

    #[test]
    fn validation_catches_broken_trees() {
        assert!(small().validate().is_ok());
        let orphan = tree(vec![
            row(0, None, "", [1, 0]),
            row(1, Some(5), "A=p", [1, 0]),
        ]);
        assert!(orphan.validate().is_err());
        let two_roots = tree(vec![row(0, None, "", [1, 0]), row(1, None, "", [1, 0])]);
        assert!(two_roots.validate().is_err());
        let cycle = tree(vec![
            row(0, None, "", [1, 0]),
            row(1, Some(2), "A=p", [1, 0]),
            row(2, Some(1), "A=q", [1, 0]),
        ]);
        assert!(cycle.validate().is_err());
        let narrow = tree(vec![ResultRow {
            node: 0,
            parent: None,
            rule: String::new(),
            class_counts: vec![1],
        }]);
        assert!(narrow.validate().is_err());
    }

    #[test]
    fn export_round_trip() {
        let t = small();
        let json = TreeExport::from_tree(&t).to_json().unwrap();
        let back = TreeExport::from_json(&json).unwrap();
        assert_eq!(back.nodes, t.rows);
        assert_eq!(back.class_values, ["x", "y"]);
    }

    #[test]
    fn count_column_collisions() {
        let mut s = schema();
        s.attributes[1].domain = vec!["a b".into(), "a-b".into()];
        assert!(matches!(
            count_columns(&s),
            Err(Error::IdentifierCollision { .. })
        ));
    }
}
