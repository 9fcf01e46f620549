//! The finished tree is an ordinary table: query it with SQL, read it back,
//! copy it, and export it as JSON.
//!
//!     cargo run --example result_table

use viewtree::results::{self, TreeExport};
use viewtree::{dataset, Backend, BuildParams};

fn main() -> viewtree::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic.csv");
    let backend = Backend::open_in_memory()?;
    let (schema, table) = dataset::load_csv(&backend, path, "SURVIVOR", b',')?;
    let params = BuildParams::new(table.name(), "SURVIVOR");
    let tree = viewtree::build_tree(&backend, &schema, &params)?;

    // leaves where most passengers survived, straight from the table
    let mut stmt = backend.connection().prepare(
        "SELECT NODE, RULE, SURVIVOR_YES, SURVIVOR_NO FROM BTRES \
         WHERE NODE NOT IN (SELECT PARENT FROM BTRES WHERE PARENT IS NOT NULL) \
         AND SURVIVOR_YES > SURVIVOR_NO ORDER BY NODE",
    )?;
    let leaves = stmt.query_map([], |r| {
        Ok((
            r.get::<_, i64>(0)?,
            r.get::<_, String>(1)?,
            r.get::<_, i64>(2)?,
            r.get::<_, i64>(3)?,
        ))
    })?;
    println!("surviving leaves:");
    for leaf in leaves {
        let (node, rule, yes, no) = leaf?;
        println!("  node {node:>2} {rule:<10} {yes} survived, {no} did not");
    }

    let back = results::read_result_table(&backend, "BTRES", &schema, &params)?;
    assert_eq!(back, tree);
    results::persist_as(&backend, &tree, "BTRES_ARCHIVE")?;
    println!(
        "\n{}",
        results::dump_table(&backend, "BTRES_ARCHIVE")?
            .lines()
            .take(4)
            .collect::<Vec<_>>()
            .join("\n")
    );

    let json = TreeExport::from_tree(&tree).to_json()?;
    println!(
        "\nexport: {} bytes, first node {}",
        json.len(),
        serde_json::to_string(&tree.rows[0])?
    );
    Ok(())
}
