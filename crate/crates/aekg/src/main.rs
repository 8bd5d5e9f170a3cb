//! Command-line front end: fetch → convert → graph/cypher/stats → owl.
//!
//! Exit codes are scriptable: 0 success, 2 data error, 64 usage error,
//! 69 network/service unavailable, 74 output I/O error. Diagnostics go to
//! stderr; data goes to files or stdout.

use aekg::acquire::{self, AcquireError, FetchOptions, QuarterRef};
use aekg::config::{ConfigError, PipelineConfig};
use aekg::faers::{
    filter_reports, read_canonical_json, write_canonical_json, CanonicalBatch, FaersXmlReader,
};
use aekg::graph::{
    build_vaers_graph, emit_cypher_script, emit_graph_script, graph_stats, vaers_key_property,
};
use aekg::model::{SafetyReport, VocabularySet};
use aekg::ontology::build_ontology;
use aekg::vaers::{decode_csv_bytes, join_report, parse_vaers_files, VaersError};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

const EXIT_DATA: i32 = 2;
const EXIT_USAGE: i32 = 64;
const EXIT_UNAVAILABLE: i32 = 69;
const EXIT_IO: i32 = 74;

#[derive(Parser)]
#[command(
    name = "aekg",
    version,
    about = "Adverse-event knowledge graph pipeline"
)]
struct Cli {
    /// Configuration file (default: $AEKG_CONFIG when set)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Override one configuration key, e.g. --set vaers.encoding=utf-8
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse FAERS XML, apply the completeness filter, write canonical JSON
    Convert {
        /// Input XML file(s)
        #[arg(long, required = true, num_args = 1..)]
        input: Vec<PathBuf>,
        /// Output JSON path
        #[arg(long)]
        output: PathBuf,
        /// Also write a tab-separated drop log
        #[arg(long)]
        drop_log: Option<PathBuf>,
        /// Batch label (default: first input file stem)
        #[arg(long)]
        source_label: Option<String>,
    },
    /// Emit a Cypher import script from canonical JSON
    Cypher {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
    },
    /// Build the ontology from canonical JSON and serialize it
    Owl {
        #[arg(long)]
        input: PathBuf,
        /// Output path stem; writes <stem>.ttl and/or <stem>.owl
        #[arg(long)]
        output_stem: PathBuf,
        /// Build from at most N reports (head sample)
        #[arg(long)]
        limit: Option<usize>,
        #[arg(long, value_enum, default_value_t = OwlFormat::Both)]
        format: OwlFormat,
    },
    /// Join the three VAERS CSV files and emit a script or statistics
    Vaers {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        symptoms: PathBuf,
        #[arg(long)]
        vaccines: PathBuf,
        /// What to emit
        #[arg(long, value_enum)]
        output: VaersOutput,
        /// Write to a file instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Download a quarterly archive
    Fetch {
        #[arg(long)]
        year: i64,
        #[arg(long)]
        quarter: i64,
        /// Also extract the archive's XML entries next to it
        #[arg(long)]
        extract: bool,
    },
    /// Inspect configuration
    Config {
        #[command(subcommand)]
        action: ConfigAction,
    },
}

#[derive(Subcommand)]
enum ConfigAction {
    /// Print the resolved configuration
    Show,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OwlFormat {
    Ttl,
    Owl,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VaersOutput {
    Cypher,
    Stats,
}

struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn new(code: i32, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(err: ConfigError) -> Self {
        CliError::new(EXIT_USAGE, err.to_string())
    }
}

fn main() {
    std::process::exit(run());
}

fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("aekg: error: {}", err.message);
            err.code
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let mut overrides = Vec::new();
    for item in &cli.overrides {
        let Some((key, value)) = item.split_once('=') else {
            return Err(CliError::new(
                EXIT_USAGE,
                format!("--set needs KEY=VALUE, got {item:?}"),
            ));
        };
        overrides.push((key.trim().to_string(), value.trim().to_string()));
    }
    let config_path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("AEKG_CONFIG").map(PathBuf::from));
    let config = PipelineConfig::resolve(
        config_path.as_deref(),
        |name| std::env::var(name).ok(),
        &overrides,
    )?;

    match cli.command {
        Command::Convert {
            input,
            output,
            drop_log,
            source_label,
        } => cmd_convert(&config, &input, &output, drop_log.as_deref(), source_label),
        Command::Cypher { input, output } => cmd_cypher(&config, &input, &output),
        Command::Owl {
            input,
            output_stem,
            limit,
            format,
        } => cmd_owl(&config, &input, &output_stem, limit, format),
        Command::Vaers {
            data,
            symptoms,
            vaccines,
            output,
            out,
        } => cmd_vaers(&config, &data, &symptoms, &vaccines, output, out.as_deref()),
        Command::Fetch {
            year,
            quarter,
            extract,
        } => cmd_fetch(&config, year, quarter, extract),
        Command::Config {
            action: ConfigAction::Show,
        } => {
            print!("{}", config.show());
            Ok(())
        }
    }
}

fn open_input(path: &Path) -> Result<File, CliError> {
    File::open(path)
        .map_err(|e| CliError::new(EXIT_DATA, format!("cannot read {}: {e}", path.display())))
}

fn create_output(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::new(EXIT_IO, format!("cannot write {}: {e}", path.display())))
}

fn load_vocab(config: &PipelineConfig) -> Result<VocabularySet, CliError> {
    let mut vocab = VocabularySet::builtin();
    let dir = config.get("vocab.dir");
    if !dir.is_empty() {
        vocab
            .load_dir(Path::new(dir))
            .map_err(|e| CliError::new(EXIT_DATA, format!("vocabulary directory {dir}: {e}")))?;
    }
    Ok(vocab)
}

fn read_batch(path: &Path) -> Result<CanonicalBatch, CliError> {
    let file = open_input(path)?;
    read_canonical_json(BufReader::new(file))
        .map_err(|e| CliError::new(EXIT_DATA, format!("{}: {e}", path.display())))
}

fn cmd_convert(
    _config: &PipelineConfig,
    inputs: &[PathBuf],
    output: &Path,
    drop_log: Option<&Path>,
    source_label: Option<String>,
) -> Result<(), CliError> {
    let label = source_label.unwrap_or_else(|| {
        inputs[0]
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "faers".to_string())
    });
    let mut raw: Vec<SafetyReport> = Vec::new();
    let mut skipped_elements = 0u64;
    let mut irregular_fields = 0u64;
    for path in inputs {
        let file = open_input(path)?;
        let mut reader = FaersXmlReader::new(BufReader::new(file));
        for report in &mut reader {
            let report =
                report.map_err(|e| CliError::new(EXIT_DATA, format!("{}: {e}", path.display())))?;
            raw.push(report);
        }
        skipped_elements += reader.skipped_elements();
        irregular_fields += reader.irregular_fields();
    }
    let batch = filter_reports(label, raw);

    let mut sink = create_output(output)?;
    write_canonical_json(&batch, &mut sink)
        .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", output.display())))?;

    if let Some(path) = drop_log {
        let mut log = create_output(path)?;
        for entry in &batch.drop_log {
            writeln!(log, "{}\t{}", entry.report, entry.reasons.join(","))
                .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", path.display())))?;
        }
    }

    eprintln!(
        "kept={} dropped={} (skipped elements: {skipped_elements}, irregular fields: {irregular_fields})",
        batch.reports.len(),
        batch.drop_log.len(),
    );
    Ok(())
}

fn cmd_cypher(config: &PipelineConfig, input: &Path, output: &Path) -> Result<(), CliError> {
    let batch = read_batch(input)?;
    let vocab = load_vocab(config)?;
    let mut sink = create_output(output)?;
    let statements = emit_cypher_script(&batch, &vocab, &mut sink)
        .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", output.display())))?;
    eprintln!("statements={statements}");
    Ok(())
}

fn cmd_owl(
    config: &PipelineConfig,
    input: &Path,
    output_stem: &Path,
    limit: Option<usize>,
    format: OwlFormat,
) -> Result<(), CliError> {
    let mut batch = read_batch(input)?;
    if let Some(n) = limit {
        batch.reports.truncate(n);
    }
    let ontology_config = config.ontology_config()?;
    let graph = build_ontology(&batch, &ontology_config)
        .map_err(|e| CliError::new(EXIT_DATA, e.to_string()))?;

    let mut stem = output_stem.as_os_str().to_owned();
    if format != OwlFormat::Owl {
        let mut path = stem.clone();
        path.push(".ttl");
        let sink = create_output(Path::new(&path))?;
        graph
            .serialize_turtle(sink)
            .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    }
    if format != OwlFormat::Ttl {
        stem.push(".owl");
        let sink = create_output(Path::new(&stem))?;
        graph
            .serialize_rdfxml(sink)
            .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
    }
    eprintln!("triples={}", graph.len());
    println!("{}", graph.len());
    Ok(())
}

fn cmd_vaers(
    config: &PipelineConfig,
    data: &Path,
    symptoms: &Path,
    vaccines: &Path,
    output: VaersOutput,
    out: Option<&Path>,
) -> Result<(), CliError> {
    let encoding = config.get("vaers.encoding");
    let fallback = config.get("vaers.fallback_encoding");
    let read_decoded = |path: &Path| -> Result<String, CliError> {
        let bytes = std::fs::read(path).map_err(|e| {
            CliError::new(EXIT_DATA, format!("cannot read {}: {e}", path.display()))
        })?;
        decode_csv_bytes(&bytes, encoding, fallback).map_err(|e| match e {
            VaersError::UnknownEncoding(_) => CliError::new(EXIT_USAGE, e.to_string()),
            other => CliError::new(EXIT_DATA, format!("{}: {other}", path.display())),
        })
    };
    let data_text = read_decoded(data)?;
    let symptoms_text = read_decoded(symptoms)?;
    let vaccines_text = read_decoded(vaccines)?;

    let columns = config.vaers_columns();
    let join = parse_vaers_files(
        data_text.as_bytes(),
        symptoms_text.as_bytes(),
        vaccines_text.as_bytes(),
        &columns,
    )
    .map_err(|e| {
        let path = match &e {
            VaersError::MissingIdColumn { file: "data", .. } => data,
            VaersError::MissingIdColumn {
                file: "symptoms", ..
            } => symptoms,
            _ => vaccines,
        };
        CliError::new(EXIT_DATA, format!("{}: {e}", path.display()))
    })?;
    eprintln!("{}", join_report(&join.cases, &join.stats));

    let graph = build_vaers_graph(&join.cases);
    let rendered = match output {
        VaersOutput::Stats => graph_stats(&graph, 10).summary(),
        VaersOutput::Cypher => {
            let mut buf = Vec::new();
            emit_graph_script(&graph, "vaers", vaers_key_property, &mut buf)
                .map_err(|e| CliError::new(EXIT_IO, e.to_string()))?;
            String::from_utf8(buf).expect("script is UTF-8")
        }
    };
    match out {
        Some(path) => {
            let mut sink = create_output(path)?;
            sink.write_all(rendered.as_bytes())
                .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", path.display())))?;
        }
        None => print!("{rendered}"),
    }
    Ok(())
}

fn cmd_fetch(
    config: &PipelineConfig,
    year: i64,
    quarter: i64,
    extract: bool,
) -> Result<(), CliError> {
    let quarter_ref =
        QuarterRef::new(year, quarter).map_err(|e| CliError::new(EXIT_USAGE, e.to_string()))?;
    let template = config.get("acquire.url_template");
    if template.is_empty() {
        return Err(CliError::new(
            EXIT_USAGE,
            "acquire.url_template is not configured; set it in the config file or with --set",
        ));
    }
    let dest_dir = PathBuf::from(config.get("acquire.dest_dir"));
    let retries = config.retries()?;
    let url = acquire::expand_template(template, quarter_ref)
        .map_err(|e| CliError::new(EXIT_USAGE, e.to_string()))?;

    let expected = dest_dir.join(url.rsplit('/').next().unwrap_or_default());
    let cached = expected.file_name().is_some() && expected.exists();

    let opts = FetchOptions {
        retries,
        ..Default::default()
    };
    let path = acquire::fetch_quarter(quarter_ref, template, &dest_dir, &opts).map_err(|e| {
        let code = match &e {
            AcquireError::Http { .. }
            | AcquireError::Network { .. }
            | AcquireError::LockTimeout(_) => EXIT_UNAVAILABLE,
            AcquireError::Template { .. } | AcquireError::InvalidQuarter { .. } => EXIT_USAGE,
            _ => EXIT_IO,
        };
        CliError::new(code, e.to_string())
    })?;
    if cached {
        eprintln!("cached: {}", path.display());
    } else {
        eprintln!("fetched: {}", path.display());
    }
    if extract {
        let extracted = acquire::extract_archive(&path, &dest_dir).map_err(|e| {
            let code = match &e {
                AcquireError::CorruptArchive { .. } | AcquireError::PathTraversalEntry(_) => {
                    EXIT_DATA
                }
                _ => EXIT_IO,
            };
            CliError::new(code, e.to_string())
        })?;
        eprintln!("extracted {} xml file(s)", extracted.len());
        for path in extracted {
            println!("{}", path.display());
        }
    }
    Ok(())
}
