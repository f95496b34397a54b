use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use fairfuse_core::consensus::{fair_copeland, GenerationRequest};
use fairfuse_core::ingestion::{load_base_rankings, load_dataset, synthesize_rankings, write_rankings, IngestError};
use fairfuse_core::metrics::{audit, similarity_matrix, FairnessReport, DEFAULT_BINS};
use fairfuse_core::{Dataset, Ranking};
use serde_json::json;
use thiserror::Error;

use crate::oracle_report;
use crate::wire::{ConsensusView, ReportView, SimilarityView, SCHEMA_VERSION};

#[derive(Debug, Parser)]
#[command(name = "fairfuse", version, about = "Fairness audits and fair consensus rankings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Audit every base ranking for group fairness and mutual agreement.
    Audit {
        #[command(flatten)]
        input: InputArgs,
        /// Emit JSON instead of a table.
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Emit a plain-text table (default).
        #[arg(long)]
        table: bool,
        #[arg(long, default_value_t = DEFAULT_BINS)]
        bins: usize,
    },
    /// Generate a (fair) Copeland consensus and write it as a rankings CSV.
    Aggregate {
        #[command(flatten)]
        input: InputArgs,
        /// Fairness threshold in [0, 1]; the result aims for ARP <= 1 - t.
        #[arg(long)]
        t: f64,
        #[arg(long)]
        out: PathBuf,
        /// Print the full result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compare the heuristics against exhaustive search on random instances.
    Oracle {
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 100)]
        instances: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the full JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Perturb a ranking with random adjacent swaps.
    Synth {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        swaps: usize,
        #[arg(long)]
        count: usize,
        /// Scores or rankings CSV providing the seed ranking.
        #[arg(long, conflicts_with = "candidates")]
        rankings: Option<PathBuf>,
        /// Ranker column to perturb (default: the first).
        #[arg(long, requires = "rankings")]
        column: Option<String>,
        /// Use the candidate file order as the seed ranking.
        #[arg(long)]
        candidates: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = "FAIRFUSE_PORT", default_value_t = 8080)]
        port: u16,
        #[arg(long, env = "FAIRFUSE_DATA_DIR", default_value = "fairfuse-data")]
        data_dir: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Candidates CSV: id,name,<attributes...>
    #[arg(long)]
    pub candidates: PathBuf,
    /// Scores CSV (id,<ranker>...) or rankings CSV (position,<ranker>...).
    #[arg(long)]
    pub scores: PathBuf,
    /// Protected attribute column.
    #[arg(long)]
    pub protected: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Core(#[from] fairfuse_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

fn load(input: &InputArgs) -> Result<(Dataset, Vec<Ranking>), CliError> {
    let dataset = load_dataset(&input.candidates, &input.protected)?;
    let base = load_base_rankings(&input.scores)?;
    Ok((dataset, base))
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

/// Runs every subcommand except `serve`, returning what goes to stdout.
pub fn run(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Audit { input, json, bins, .. } => {
            let (dataset, base) = load(input)?;
            let reports = base
                .iter()
                .map(|r| audit(&dataset, r, *bins))
                .collect::<Result<Vec<_>, _>>()?;
            let sim = similarity_matrix(&base)?;
            if *json {
                let body = json!({
                    "schema": SCHEMA_VERSION,
                    "reports": reports.iter().map(ReportView::from).collect::<Vec<_>>(),
                    "similarity": SimilarityView::from(&sim),
                });
                Ok(serde_json::to_string_pretty(&body).expect("serializable") + "\n")
            } else {
                Ok(audit_table(&reports, &SimilarityView::from(&sim)))
            }
        }
        Command::Aggregate { input, t, out, json } => {
            let (dataset, base) = load(input)?;
            let req = GenerationRequest::new(*t)?;
            let mut result = fair_copeland(&base, &dataset, req)?;
            result.ranking.label = "consensus".into();
            let mut csv = Vec::new();
            write_rankings(std::slice::from_ref(&result.ranking), &mut csv)?;
            write_file(out, &csv)?;
            if *json {
                let report = audit(&dataset, &result.ranking, DEFAULT_BINS)?;
                let body = json!({
                    "schema": SCHEMA_VERSION,
                    "result": ConsensusView::new(&result, 0),
                    "report": ReportView::from(&report),
                });
                Ok(serde_json::to_string_pretty(&body).expect("serializable") + "\n")
            } else {
                Ok(format!(
                    "t={:.6} max_arp={:.6} achieved_arp={:.6} feasible={} total_kt_cost={} swaps={}\n",
                    req.threshold(),
                    req.delta(),
                    result.achieved_arp,
                    result.feasible,
                    result.total_kt_cost,
                    result.swap_trace.len()
                ))
            }
        }
        Command::Oracle {
            max_n,
            instances,
            seed,
            out,
        } => {
            let report = oracle_report::run(*max_n, *instances, *seed)?;
            if let Some(path) = out {
                write_file(path, &serde_json::to_vec_pretty(&report).expect("serializable"))?;
            }
            Ok(report.summary())
        }
        Command::Synth {
            seed,
            swaps,
            count,
            rankings,
            column,
            candidates,
            out,
        } => {
            let seed_ranking = match (rankings, candidates) {
                (Some(path), _) => {
                    let all = load_base_rankings(path)?;
                    match column {
                        Some(c) => all
                            .into_iter()
                            .find(|r| &r.label == c)
                            .ok_or_else(|| CliError::Usage(format!("no ranker column `{c}`")))?,
                        None => all.into_iter().next().expect("parsers reject empty files"),
                    }
                }
                (None, Some(path)) => {
                    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                        path: path.display().to_string(),
                        source,
                    })?;
                    let ids = ids_in_file_order(&text)?;
                    Ranking::base("seed", ids)
                }
                (None, None) => return Err(CliError::Usage("one of --rankings or --candidates is required".into())),
            };
            let synth = synthesize_rankings(&seed_ranking, *count, *swaps, *seed);
            let mut csv = Vec::new();
            write_rankings(&synth, &mut csv)?;
            match out {
                Some(path) => {
                    write_file(path, &csv)?;
                    Ok(format!("wrote {} rankings to {}\n", synth.len(), path.display()))
                }
                None => Ok(String::from_utf8(csv).expect("csv output is utf-8")),
            }
        }
        Command::Serve { .. } => Err(CliError::Usage("serve runs asynchronously".into())),
    }
}

/// The `id` column of a candidates file, in row order.
fn ids_in_file_order(text: &str) -> Result<Vec<String>, CliError> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let col = rdr
        .headers()
        .map_err(IngestError::from)?
        .iter()
        .position(|h| h == "id")
        .ok_or_else(|| IngestError::MissingColumn { column: "id".into() })?;
    rdr.records()
        .map(|r| Ok(r.map_err(IngestError::from)?[col].to_string()))
        .collect()
}

fn audit_table(reports: &[FairnessReport], sim: &SimilarityView) -> String {
    let mut s = String::new();
    let width = reports
        .iter()
        .flat_map(|r| r.per_group.keys().map(String::len).chain([r.ranking_id.len()]))
        .max()
        .unwrap_or(8)
        .max(8);
    let _ = write!(s, "{:width$}", "group");
    for r in reports {
        let _ = write!(s, "  {:>12}", r.ranking_id);
    }
    s.push('\n');
    if let Some(first) = reports.first() {
        for label in first.per_group.keys() {
            let _ = write!(s, "{label:width$}");
            for r in reports {
                let g = &r.per_group[label];
                let _ = write!(s, "  {:>12}", format!("{:.6}", g.fpr));
            }
            s.push('\n');
        }
    }
    let _ = write!(s, "{:width$}", "ARP");
    for r in reports {
        let _ = write!(s, "  {:>12}", format!("{:.6}", r.arp));
    }
    s.push_str("\n\nsimilarity\n");
    for (i, row) in sim.similarity.iter().enumerate() {
        let _ = write!(s, "{:width$}", sim.ranking_ids[i]);
        for v in row {
            let _ = write!(s, "  {:>12}", v.render());
        }
        s.push('\n');
    }
    s
}
