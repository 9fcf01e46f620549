//! Shows the chain of views behind a small tree: each node's view selects
//! one value from its parent's view and drops the consumed column.
//!
//!     cargo run --example node_views

use viewtree::{Backend, BuildParams, RowSet, TreeBuilder};

fn main() -> viewtree::Result<()> {
    let rows: Vec<Vec<String>> = [
        ["A", "0", "c1"],
        ["A", "0", "c1"],
        ["A", "1", "c2"],
        ["A", "1", "c2"],
        ["B", "0", "c3"],
        ["B", "1", "c3"],
    ]
    .iter()
    .map(|r| r.iter().map(|s| s.to_string()).collect())
    .collect();
    let set = RowSet::new(&["att1", "att2", "class"], rows, "class")?;

    let backend = Backend::open_in_memory()?;
    backend.ingest("training_set", &set)?;
    let mut params = BuildParams::new("training_set", "class");
    params.root_view = "v".into();
    params.del = false;

    let report = TreeBuilder::new(&backend, &set.schema, params)?.run()?;
    for node in &report.nodes {
        let sql: String = backend.connection().query_row(
            "SELECT sql FROM sqlite_master WHERE type = 'view' AND name = ?1",
            [&node.nview],
            |r| r.get(0),
        )?;
        println!(
            "node {:>2}  pop {:>2}  entropy {:.3}  {sql}",
            node.num.unwrap_or_default(),
            node.pop,
            node.entrop
        );
    }
    Ok(())
}
