//! ID3 decision trees grown inside a relational engine.
//!
//! Each tree node is an SQL view defined over its parent's view; class
//! distributions come from `GROUP BY` queries on those views, and the
//! finished tree is stored as an ordinary table with one row per node.
//!
//! ```no_run
//! use viewtree::{dataset, results, Backend, BuildParams};
//!
//! let backend = Backend::open_in_memory()?;
//! let (schema, table) = dataset::load_csv(&backend, "titanic.csv", "SURVIVOR", b',')?;
//! let tree = viewtree::build_tree(&backend, &schema, &BuildParams::new(table.name(), "SURVIVOR"))?;
//! print!("{}", results::hierarchical_listing(&tree));
//! # Ok::<(), viewtree::Error>(())
//! ```

pub mod backend;
pub mod builder;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod histogram;
pub mod ident;
pub mod measures;
pub mod oracle;
pub mod results;

pub use backend::{Backend, TableRef, ViewDefinition};
pub use builder::{build_tree, BuildParams, BuildReport, Candidate, Node, TreeBuilder};
pub use dataset::{AttributeSpec, DatasetSchema, RowSet};
pub use error::{Error, Result};
pub use histogram::ClassHistogram;
pub use measures::{entropy, information_gain, EntropyResult};
pub use oracle::id3_reference;
pub use results::{DecisionTree, ProductionRule, ResultRow};
