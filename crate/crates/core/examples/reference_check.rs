//! Cross-checks the view-based builder against the in-memory reference
//! implementation on random categorical datasets.
//!
//!     cargo run --example reference_check -- 50

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use viewtree::{id3_reference, Backend, BuildParams, RowSet};

fn dataset(seed: u64) -> viewtree::Result<RowSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attrs = rng.random_range(2..=6usize);
    let rows = rng.random_range(10..=500usize);
    let mut header: Vec<String> = (0..attrs).map(|i| format!("A{i}")).collect();
    header.push("Y".into());
    let data = (0..rows)
        .map(|_| {
            let mut row: Vec<String> = (0..attrs)
                .map(|_| format!("v{}", rng.random_range(0..3)))
                .collect();
            let label = if row[0] == "v0" && rng.random_bool(0.8) {
                "yes"
            } else {
                "no"
            };
            row.push(label.into());
            row
        })
        .collect();
    RowSet::new(&header, data, "Y")
}

fn main() -> viewtree::Result<()> {
    let cases: u64 = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(20);
    let mut agree = 0;
    for seed in 0..cases {
        let rows = dataset(seed)?;
        let backend = Backend::open_in_memory()?;
        backend.ingest("data", &rows)?;
        let params = BuildParams::new("data", "Y");
        let viewed = viewtree::build_tree(&backend, &rows.schema, &params)?;
        let reference = id3_reference(&rows, &params)?;
        let same = viewed == reference;
        agree += usize::from(same);
        println!(
            "seed {seed:>3}: {:>3} rows, {:>3} nodes, {}",
            rows.len(),
            viewed.len(),
            if same { "same" } else { "DIFFERENT" }
        );
    }
    println!("{agree}/{cases} identical");
    Ok(())
}
