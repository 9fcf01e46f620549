//! Builds the Titanic survival tree and prints the listing and the rules.
//!
//!     cargo run --example titanic

use viewtree::{dataset, results, Backend, BuildParams};

fn main() -> viewtree::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic.csv");
    let backend = Backend::open_in_memory()?;
    let (schema, table) = dataset::load_csv(&backend, path, "SURVIVOR", b',')?;
    println!(
        "loaded {} rows into {}",
        backend.count_rows(table.name())?,
        table.name()
    );

    let params = BuildParams::new(table.name(), &schema.class_attribute);
    let tree = viewtree::build_tree(&backend, &schema, &params)?;

    println!();
    print!("{}", results::hierarchical_listing(&tree));
    println!();
    for rule in results::extract_rules(&tree) {
        println!("{rule}");
    }
    Ok(())
}
