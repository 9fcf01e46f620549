//! Command-line driver: load a delimited file, build, print.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::backend::Backend;
use crate::builder::{BuildParams, TreeBuilder, DEFAULT_RES_NAME, DEFAULT_ROOT_VIEW};
use crate::dataset;
use crate::error::{Error, Result};
use crate::results::{self, TreeExport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Listing,
    Rules,
    Export,
}

/// Build an ID3 decision tree inside an embedded SQL database, one view per node.
#[derive(Debug, Clone, Parser)]
#[command(name = "viewtree", version)]
pub struct CliConfig {
    /// Delimited text file with a header line.
    #[arg(long)]
    pub input: PathBuf,

    /// Class attribute (the column to predict).
    #[arg(long = "class")]
    pub class: String,

    /// Name of the result table.
    #[arg(long, default_value = DEFAULT_RES_NAME)]
    pub res_name: String,

    /// Strict minimum information gain for splitting a node.
    #[arg(long, default_value_t = 0.0)]
    pub min_gain: f64,

    /// Name of the root node view.
    #[arg(long, default_value = DEFAULT_ROOT_VIEW)]
    pub root_view: String,

    /// Keep node views in the database after the build.
    #[arg(long)]
    pub keep_views: bool,

    #[arg(long, value_enum, default_value_t = OutputFormat::Listing)]
    pub format: OutputFormat,

    /// Field delimiter.
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,

    /// Also write the structured export to this path.
    #[arg(long)]
    pub export: Option<PathBuf>,

    /// Database file. Recreated on every run; defaults to
    /// `<input stem>.viewtree.db` next to the input.
    #[arg(long)]
    pub database: Option<PathBuf>,
}

impl CliConfig {
    pub fn database_path(&self) -> PathBuf {
        self.database
            .clone()
            .unwrap_or_else(|| default_database(&self.input))
    }
}

pub fn default_database(input: &Path) -> PathBuf {
    let stem = input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    input.with_file_name(format!("{stem}.viewtree.db"))
}

/// Runs one build and writes the requested output to `out`.
pub fn execute(config: &CliConfig, out: &mut dyn Write) -> Result<()> {
    if !config.delimiter.is_ascii() {
        return Err(Error::InvalidParameter(format!(
            "delimiter must be a single ASCII character, got {:?}",
            config.delimiter
        )));
    }
    let rows = dataset::read_csv(&config.input, &config.class, config.delimiter as u8)?;

    let db = config.database_path();
    if db.exists() {
        fs::remove_file(&db).map_err(|source| Error::Io {
            path: db.clone(),
            source,
        })?;
    }
    let backend = Backend::open(&db)?;
    let table = backend.ingest(&dataset::table_name_for(&config.input), &rows)?;

    let params = BuildParams {
        table_name: table.name().to_string(),
        class: rows.schema.class_attribute.clone(),
        res_name: config.res_name.clone(),
        min_gain: config.min_gain,
        root_view: config.root_view.clone(),
        del: !config.keep_views,
    };
    let tree = TreeBuilder::new(&backend, &rows.schema, params)?
        .run()?
        .tree;

    let io = |source| Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    };
    match config.format {
        OutputFormat::Listing => out
            .write_all(results::hierarchical_listing(&tree).as_bytes())
            .map_err(io)?,
        OutputFormat::Rules => {
            for rule in results::extract_rules(&tree) {
                writeln!(out, "{rule}").map_err(io)?;
            }
        }
        OutputFormat::Export => out
            .write_all(TreeExport::from_tree(&tree).to_json()?.as_bytes())
            .map_err(io)?,
    }
    if let Some(path) = &config.export {
        fs::write(path, TreeExport::from_tree(&tree).to_json()?).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
    }
    Ok(())
}

/// Entry point for the binary: parses arguments, returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let config = match CliConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let stdout = std::io::stdout();
    match execute(&config, &mut stdout.lock()) {
        Ok(()) => 0,
        Err(e) => {
            let msg = e.to_string();
            eprintln!("viewtree: {}", msg.lines().next().unwrap_or_default());
            1
        }
    }
}
