#![allow(dead_code)]

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viewtree::{Backend, BuildParams, DatasetSchema, RowSet};

pub fn titanic_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/titanic.csv")
}

pub fn titanic_rows() -> RowSet {
    viewtree::dataset::read_csv(titanic_path(), "SURVIVOR", b',').unwrap()
}

pub fn load(rows: &RowSet) -> Backend {
    let backend = Backend::open_in_memory().unwrap();
    backend.ingest("SRC", rows).unwrap();
    backend
}

pub fn params(schema: &DatasetSchema) -> BuildParams {
    BuildParams::new("SRC", schema.class_attribute.clone())
}

/// Random categorical dataset: 2-6 predictive attributes with 2-4 values
/// each, 2-3 classes, 10-500 rows. The class depends on the first two
/// attributes most of the time so that trees have some depth.
pub fn random_dataset(seed: u64) -> RowSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_attrs = rng.random_range(2..=6usize);
    let arity: Vec<usize> = (0..n_attrs).map(|_| rng.random_range(2..=4usize)).collect();
    let n_classes = rng.random_range(2..=3usize);
    let n_rows = rng.random_range(10..=500usize);
    let signal = rng.random_range(0.3..0.95f64);

    let mut header: Vec<String> = (0..n_attrs).map(|i| format!("A{i}")).collect();
    header.push("CLS".into());
    let mut rows = Vec::with_capacity(n_rows);
    for _ in 0..n_rows {
        let vals: Vec<usize> = arity.iter().map(|&k| rng.random_range(0..k)).collect();
        let class = if rng.random_bool(signal) {
            (vals[0] + 2 * vals[1]) % n_classes
        } else {
            rng.random_range(0..n_classes)
        };
        let mut row: Vec<String> = vals.iter().map(|v| format!("v{v}")).collect();
        row.push(format!("c{class}"));
        rows.push(row);
    }
    RowSet::new(&header, rows, "CLS").unwrap()
}
