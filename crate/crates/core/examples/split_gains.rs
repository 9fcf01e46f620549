//! Evaluates every candidate split of the Titanic root node: one
//! provisional view per attribute value, a GROUP BY histogram each, and
//! the resulting information gain.
//!
//!     cargo run --example split_gains

use viewtree::{builder::best_candidate, dataset, Backend, BuildParams, TreeBuilder};

fn main() -> viewtree::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/titanic.csv");
    let backend = Backend::open_in_memory()?;
    let (schema, table) = dataset::load_csv(&backend, path, "SURVIVOR", b',')?;

    let mut builder = TreeBuilder::new(
        &backend,
        &schema,
        BuildParams::new(table.name(), "SURVIVOR"),
    )?;
    let root = builder.create_root()?;
    println!("root: pop {}, entropy {:.4} bits", root.pop, root.entrop);

    let candidates = builder.evaluate_candidates(&root)?;
    for c in &candidates {
        println!("\n{}: gain {:.4}", c.att_name, c.gain);
        for child in &c.nodes {
            let counts: Vec<String> = child
                .histogram
                .iter()
                .map(|(k, n)| format!("{k}:{n}"))
                .collect();
            println!(
                "  {:<14} pop {:>4}  entropy {:.4}  {}",
                child.rule,
                child.pop,
                child.entrop,
                counts.join(" ")
            );
        }
    }
    if let Some(i) = best_candidate(&candidates) {
        println!("\nbest split: {}", candidates[i].att_name);
    }
    Ok(())
}
