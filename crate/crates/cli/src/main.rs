use std::panic;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;
use thematic::config::{FileConfig, IngestSection, MapSection, TrainSection};
use thematic::error::{CliError, EXIT_INTERNAL, EXIT_OK, EXIT_USAGE};
use thematic::pipeline::{self, Event, IngestSettings, MapSettings, TrainSettings};

/// Thematic exploration of a document corpus: ingest, train, map, serve, export.
#[derive(Parser)]
#[command(name = "thematic", version)]
struct Cli {
    /// Print progress and results as JSON lines on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load a corpus, build the vocabulary and chunk every document.
    Ingest(IngestArgs),
    /// Train the topic model on a corpus bundle.
    Train(TrainArgs),
    /// Cluster and lay out the themes of a model.
    Map(MapArgs),
    /// Run the HTTP API.
    Serve(ServeArgs),
    /// Write a session report (selection, excerpt map, wheels, strategy).
    Export(ExportArgs),
    /// ingest, train and map in one step.
    Pipeline(PipelineArgs),
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Manifest file, directory holding manifest.jsonl, or JSON directory.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// manifest | json-dir
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Chunks per document.
    #[arg(long)]
    chunks: Option<usize>,
    #[arg(long)]
    min_df: Option<u32>,
    #[arg(long)]
    max_df: Option<f64>,
    #[arg(long)]
    min_token_len: Option<usize>,
    /// english, none, or a file with one word per line.
    #[arg(long)]
    stopwords: Option<String>,
}

#[derive(Args)]
struct TrainArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    /// Corpus bundle written by `ingest`.
    #[arg(long, alias = "bundle")]
    corpus: Option<PathBuf>,
    #[arg(long)]
    topics: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Chunk-topic prior; defaults to 50 / topics.
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MapArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Paper weight at which a theme counts as present.
    #[arg(long)]
    tau: Option<f64>,
    /// largest_gap, a cluster count, or height:<h>.
    #[arg(long)]
    target: Option<String>,
    #[arg(long)]
    top_terms: Option<usize>,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    bind: Option<String>,
}

#[derive(Args)]
struct ExportArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    session: String,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Directory for corpus.bin, model.bin and layout.json.
    #[arg(long)]
    out_dir: PathBuf,
}

fn file_config(path: &Option<PathBuf>) -> Result<FileConfig, CliError> {
    match path {
        Some(p) => FileConfig::load(p),
        None => Ok(FileConfig::default()),
    }
}

struct Reporter {
    json: bool,
}

impl Reporter {
    fn event(&self, e: Event) {
        if self.json {
            println!("{}", serde_json::to_string(&e).expect("events serialize"));
            return;
        }
        match e {
            Event::Loaded { stage, items } => {
                let what = match stage {
                    "ingest" => "documents",
                    "train" => "chunks",
                    _ => "themes",
                };
                eprintln!("{stage}: loaded {items} {what}")
            }
            Event::Excluded { doc_id, tokens, required } => {
                eprintln!("ingest: skipped {doc_id} ({tokens} tokens, need {required})")
            }
            Event::Sweep { sweep, total, log_likelihood } => {
                if sweep == 1 || sweep % 50 == 0 || sweep == total {
                    eprintln!("train: sweep {sweep}/{total} log-likelihood {log_likelihood:.1}");
                }
            }
            Event::Wrote { stage, path, hash } => println!("{stage}: wrote {} (sha256 {hash})", path.display()),
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let reporter = Reporter { json: cli.json };
    let mut on = |e: Event| reporter.event(e);
    match cli.command {
        Command::Ingest(a) => {
            let file = file_config(&a.config)?;
            let flags = IngestSection {
                corpus: a.corpus,
                format: a.format,
                out: a.out,
                chunk_count: a.chunks,
                min_df: a.min_df,
                max_df_fraction: a.max_df,
                min_token_len: a.min_token_len,
                stopwords: a.stopwords,
            };
            pipeline::run_ingest(&IngestSettings::resolve(&flags, &file.ingest)?, &mut on)?;
        }
        Command::Train(a) => {
            let file = file_config(&a.config)?;
            let flags = TrainSection {
                bundle: a.corpus,
                out: a.out,
                topics: a.topics,
                iterations: a.iters,
                seed: a.seed,
                alpha: a.alpha,
                beta: a.beta,
            };
            pipeline::run_train(&TrainSettings::resolve(&flags, &file.train)?, &mut on)?;
        }
        Command::Map(a) => {
            let file = file_config(&a.config)?;
            let flags = MapSection {
                model: a.model,
                out: a.out,
                tau: a.tau,
                target: a.target.map(toml::Value::String),
                top_terms: a.top_terms,
            };
            pipeline::run_map(&MapSettings::resolve(&flags, &file.map)?, &mut on)?;
        }
        Command::Serve(a) => {
            let file = FileConfig::load(&a.config)?;
            let mut api = file.api_config()?;
            api.apply_env(|k| std::env::var(k).ok());
            if let Some(bind) = a.bind {
                api.bind = bind;
            }
            let json = cli.json;
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Internal(e.to_string()))?;
            runtime.block_on(thematic_server::serve(api, |addr| {
                if json {
                    println!("{}", json!({"event": "listening", "addr": addr.to_string()}));
                } else {
                    eprintln!("serve: listening on http://{addr}/v1");
                }
            }))?;
        }
        Command::Export(a) => {
            let file = FileConfig::load(&a.config)?;
            pipeline::run_export(&file, &a.session, &a.out, &mut on)?;
        }
        Command::Pipeline(a) => {
            let file = file_config(&a.config)?;
            pipeline::run_pipeline(&file, a.corpus, &a.out_dir, &mut on)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { EXIT_OK });
        }
    };
    let json = cli.json;
    match panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::from(EXIT_OK),
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            if json {
                println!("{}", json!({"event": "error", "code": e.code(), "message": e.to_string()}));
            }
            ExitCode::from(e.exit_code())
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
