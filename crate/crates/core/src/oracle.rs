//! In-memory ID3 over plain row lists, with no SQL anywhere.
//!
//! Follows the same numbering, ordering, tie and threshold rules as
//! [`crate::builder`], so on any dataset the two must produce identical
//! trees. Partitioning and counting are done here from scratch; only the
//! entropy/gain arithmetic is shared.

use std::collections::HashMap;

use crate::builder::BuildParams;
use crate::dataset::RowSet;
use crate::error::{Error, Result};
use crate::histogram::ClassHistogram;
use crate::measures::{entropy, information_gain, EntropyResult};
use crate::results::{DecisionTree, ResultRow};

struct Pending {
    id: u32,
    rows: Vec<usize>,
    /// Column indices still available for splitting.
    remaining: Vec<usize>,
    stats: EntropyResult,
}

struct Split {
    column: usize,
    gain: f64,
    /// (value, row indices) in first-appearance order.
    parts: Vec<(String, Vec<usize>)>,
}

fn histogram(set: &RowSet, class_col: usize, rows: &[usize]) -> ClassHistogram {
    let mut counts: HashMap<&str, u64> = HashMap::new();
    for &r in rows {
        *counts.entry(set.rows[r][class_col].as_str()).or_default() += 1;
    }
    counts.into_iter().collect()
}

fn partition(set: &RowSet, column: usize, rows: &[usize]) -> Vec<(String, Vec<usize>)> {
    let mut parts: Vec<(String, Vec<usize>)> = Vec::new();
    for &r in rows {
        let value = &set.rows[r][column];
        match parts.iter_mut().find(|(v, _)| v == value) {
            Some((_, members)) => members.push(r),
            None => parts.push((value.clone(), vec![r])),
        }
    }
    parts
}

/// Reference ID3 build over `set`.
pub fn id3_reference(set: &RowSet, params: &BuildParams) -> Result<DecisionTree> {
    params.validate()?;
    let schema = &set.schema;
    if !params.class.eq_ignore_ascii_case(&schema.class_attribute) {
        return Err(Error::InvalidParameter(format!(
            "class `{}` does not match the dataset's class attribute `{}`",
            params.class, schema.class_attribute
        )));
    }
    if set.is_empty() {
        return Err(Error::EmptySource(params.table_name.clone()));
    }
    let class_col = schema
        .column_index(&schema.class_attribute)
        .expect("class column present");
    let predictive: Vec<usize> = (0..schema.attributes.len())
        .filter(|&c| c != class_col)
        .collect();
    if predictive.is_empty() {
        return Err(Error::NoPredictiveAttributes(
            schema.class_attribute.clone(),
        ));
    }
    let classes = schema.class_values();

    let all: Vec<usize> = (0..set.len()).collect();
    let root_hist = histogram(set, class_col, &all);
    let mut rows = vec![ResultRow {
        node: 0,
        parent: None,
        rule: String::new(),
        class_counts: root_hist.aligned(classes),
    }];
    let mut next_id = 1u32;
    let mut stack = vec![Pending {
        id: 0,
        stats: entropy(&root_hist),
        rows: all,
        remaining: predictive,
    }];

    while let Some(node) = stack.pop() {
        if node.stats.entropy == 0.0 || node.remaining.is_empty() {
            continue;
        }
        let mut best: Option<Split> = None;
        for &column in &node.remaining {
            let parts = partition(set, column, &node.rows);
            let children: Vec<EntropyResult> = parts
                .iter()
                .map(|(_, members)| entropy(&histogram(set, class_col, members)))
                .collect();
            let gain = information_gain(&node.stats, &children)?;
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(Split {
                    column,
                    gain,
                    parts,
                });
            }
        }
        let Some(split) = best.filter(|s| s.gain > params.min_gain) else {
            continue;
        };
        let remaining: Vec<usize> = node
            .remaining
            .iter()
            .copied()
            .filter(|&c| c != split.column)
            .collect();
        let name = &schema.attributes[split.column].name;
        for (value, members) in split.parts {
            let hist = histogram(set, class_col, &members);
            let id = next_id;
            next_id += 1;
            rows.push(ResultRow {
                node: id,
                parent: Some(node.id),
                rule: format!("{name}={value}"),
                class_counts: hist.aligned(classes),
            });
            stack.push(Pending {
                id,
                rows: members,
                remaining: remaining.clone(),
                stats: entropy(&hist),
            });
        }
    }

    Ok(DecisionTree {
        rows,
        schema: schema.clone(),
        params: params.clone(),
    })
}
