//! How the strict gain threshold prunes the Titanic tree.
//!
//!     cargo run --example min_gain_sweep

use viewtree::{dataset, Backend, BuildParams};

fn main() -> viewtree::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic.csv");
    let rows = dataset::read_csv(path, "SURVIVOR", b',')?;
    println!("{:>8}  {:>5}  {:>6}", "min_gain", "nodes", "leaves");
    for min_gain in [0.0, 0.001, 0.005, 0.01, 0.02, 0.05, 0.1, 0.15, 0.2, 1.0] {
        let backend = Backend::open_in_memory()?;
        let table = backend.ingest("titanic", &rows)?;
        let mut params = BuildParams::new(table.name(), "SURVIVOR");
        params.min_gain = min_gain;
        let tree = viewtree::build_tree(&backend, &rows.schema, &params)?;
        println!(
            "{min_gain:>8}  {:>5}  {:>6}",
            tree.len(),
            tree.leaves().count()
        );
    }
    Ok(())
}
