//! Batch command-line front end for the potential-number toolkit.
//!
//! Sequences are given in comma-separated multiplicity notation
//! (`7,2^6,1`); graphs as graph6 strings, edge-list files, or inline edge
//! lists with `/` as the line separator (`n 3 / 0 1 / 1 2`).
//!
//! Exit codes: 0 on success, 1 on domain errors, 2 on usage errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use potgraph_core::constructive::{
    bmdt_embed_report, pipeline_embed, PipelineOutcome, ReduceOutcome,
};
use potgraph_core::graph::{self, contains_subgraph, SmallGraph};
use potgraph_core::oracle::{sweep_rows, Oracle, SweepRow, DEFAULT_CAP};
use potgraph_core::potential::{
    conjecture_gap, extremal_realization, extremal_sequence, profile,
};
use potgraph_core::seq::{layoff, GraphicSequence, SlackFunction};
use potgraph_core::constructive::reduce;

#[derive(Parser)]
#[command(
    name = "potgraph",
    version,
    about = "Degree-sequence potential numbers: graphicality, reductions, exact oracles, and constructive embeddings"
)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for parallel sweeps (0 = all cores)
    #[arg(long, global = true, env = "POTGRAPH_THREADS")]
    threads: Option<usize>,

    /// Verdict cache file for oracle runs
    #[arg(long, global = true, env = "POTGRAPH_CACHE")]
    cache: Option<PathBuf>,

    /// Oracle length cap
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,

    /// Soft time budget in seconds for sweeps
    #[arg(long, global = true)]
    time_budget: Option<u64>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Test a sequence for graphicality
    Graphic { seq: String },
    /// Realize a graphic sequence (prints graph6)
    Realize { seq: String },
    /// Lay off the term at a 1-based position
    Layoff {
        seq: String,
        #[arg(short, long)]
        index: usize,
    },
    /// Profile a pattern: min max degree and slope term per order
    Profile { graph: String },
    /// Extremal sequence of a pattern at index i and order n
    Extremal {
        graph: String,
        #[arg(short)]
        i: usize,
        #[arg(short)]
        n: usize,
        /// Also emit a pattern-free realization in graph6
        #[arg(long)]
        witness: bool,
    },
    /// Decide whether a sequence is potentially pattern-graphic
    Potential {
        seq: String,
        graph: String,
        /// Emit a realization containing the pattern in graph6
        #[arg(long)]
        witness: bool,
    },
    /// Exact potential number at order n
    SigmaExact {
        graph: String,
        #[arg(short)]
        n: usize,
        /// Also emit the extremal witness sequence
        #[arg(long)]
        witness: bool,
    },
    /// Embed a pattern into a realization by 2-switch repair
    Bmdt {
        seq: String,
        graph: String,
        /// Emit the realization in graph6
        #[arg(long)]
        witness: bool,
    },
    /// Reduce, embed at the residual, and reconstruct
    Pipeline {
        seq: String,
        graph: String,
        /// Slack function: const:<c> or sqrt:<scale>
        #[arg(long, default_value = "const:0")]
        slack: String,
        /// Dump the reduction trace as JSON
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Compare the slope with its subgraph maximization
    Conjecture { graph: String },
    /// Batch exact potential numbers over patterns and orders into CSV
    Sweep {
        graphs: Vec<String>,
        /// Inclusive order range, e.g. 6..9
        #[arg(long)]
        n_range: String,
        /// CSV output path (stdout when omitted)
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    init_threads(cli.threads);
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

#[cfg(feature = "parallel")]
fn init_threads(threads: Option<usize>) {
    if let Some(n) = threads {
        if n > 0 {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
}

#[cfg(not(feature = "parallel"))]
fn init_threads(_threads: Option<usize>) {}

fn oracle(cli: &Cli) -> Result<Oracle> {
    match &cli.cache {
        Some(path) => Oracle::with_cache(cli.cap, path)
            .with_context(|| format!("opening cache {}", path.display())),
        None => Ok(Oracle::new(cli.cap)),
    }
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.cmd {
        Cmd::Graphic { seq } => {
            let s = parse_seq(seq)?;
            let graphic = s.is_graphic();
            emit(
                cli,
                &GraphicOut {
                    sequence: s.to_string(),
                    graphic,
                },
                |o| {
                    if o.graphic {
                        "graphic".to_string()
                    } else {
                        "not graphic".to_string()
                    }
                },
            )
        }
        Cmd::Realize { seq } => {
            let s = parse_seq(seq)?;
            let g = s.realize()?;
            emit(
                cli,
                &RealizeOut {
                    sequence: s.to_string(),
                    graph6: g.to_graph6(),
                },
                |o| o.graph6.clone(),
            )
        }
        Cmd::Layoff { seq, index } => {
            let s = parse_seq(seq)?;
            let r = layoff(&s, *index)?;
            emit(
                cli,
                &LayoffOut {
                    input: s.to_string(),
                    index: *index,
                    result: r.to_string(),
                },
                |o| o.result.clone(),
            )
        }
        Cmd::Profile { graph } => {
            let h = parse_graph(graph)?;
            let p = profile(&h)?;
            match cli.format {
                Format::Csv => {
                    let mut out = String::from("i,min_max_degree,slope_term\n");
                    for r in &p.rows {
                        out.push_str(&format!("{},{},{}\n", r.i, r.min_max_degree, r.slope_term));
                    }
                    print!("{out}");
                    Ok(())
                }
                Format::Json => {
                    println!("{}", serde_json::to_string_pretty(&p)?);
                    Ok(())
                }
                Format::Text => {
                    println!("order: {}  independence: {}", p.order, p.independence);
                    println!("{:>4} {:>16} {:>12}", "i", "min_max_degree", "slope_term");
                    for r in &p.rows {
                        println!("{:>4} {:>16} {:>12}", r.i, r.min_max_degree, r.slope_term);
                    }
                    println!("slope: {}  argmax: {:?}", p.slope, p.argmax);
                    Ok(())
                }
            }
        }
        Cmd::Extremal {
            graph,
            i,
            n,
            witness,
        } => {
            let h = parse_graph(graph)?;
            let spec = extremal_sequence(&h, *i, *n)?;
            let realization = if *witness {
                Some(extremal_realization(&spec)?.to_graph6())
            } else {
                None
            };
            emit(
                cli,
                &ExtremalOut {
                    spec: spec.clone(),
                    realization,
                },
                |o| {
                    let mut line = format!(
                        "{} (parity adjusted: {})",
                        o.spec.sequence, o.spec.parity_adjusted
                    );
                    if let Some(g6) = &o.realization {
                        line.push_str(&format!("\nrealization: {g6}"));
                    }
                    line
                },
            )
        }
        Cmd::Potential {
            seq,
            graph,
            witness,
        } => {
            let s = parse_seq(seq)?;
            let h = parse_graph(graph)?;
            let o = oracle(cli)?;
            let v = o.is_potentially_h_graphic(&s, &h)?;
            let keep_witness = *witness;
            emit(
                cli,
                &PotentialOut {
                    decision: v.decision,
                    witness: v.witness.as_ref().filter(|_| keep_witness).map(|w| w.to_graph6()),
                    nodes_explored: v.nodes_explored,
                },
                |o| {
                    let mut line = if o.decision {
                        "potentially pattern-graphic".to_string()
                    } else {
                        "not potentially pattern-graphic".to_string()
                    };
                    if let Some(g6) = &o.witness {
                        line.push_str(&format!("\nwitness: {g6}"));
                    }
                    line
                },
            )
        }
        Cmd::SigmaExact { graph, n, witness } => {
            let h = parse_graph(graph)?;
            let o = oracle(cli)?;
            let r = o.sigma_exact(&h, *n)?;
            let show_witness = *witness;
            emit(cli, &r, |r| {
                if show_witness {
                    format!("{}\nwitness: {}", r.sigma, r.witness)
                } else {
                    format!("{}", r.sigma)
                }
            })
        }
        Cmd::Bmdt {
            seq,
            graph,
            witness,
        } => {
            let s = parse_seq(seq)?;
            let h = parse_graph(graph)?;
            let (g, report) = bmdt_embed_report(&s, &h)?;
            let verified = g.degree_sequence() == s && contains_subgraph(&g, &h).is_some();
            let keep = *witness;
            emit(
                cli,
                &BmdtOut {
                    switches: report.switches,
                    guaranteed_margin: report.guaranteed_margin,
                    verified,
                    graph6: keep.then(|| g.to_graph6()),
                },
                |o| {
                    let mut line = format!(
                        "embedded (switches: {}, guaranteed margin: {}, verified: {})",
                        o.switches, o.guaranteed_margin, o.verified
                    );
                    if let Some(g6) = &o.graph6 {
                        line.push_str(&format!("\nrealization: {g6}"));
                    }
                    line
                },
            )
        }
        Cmd::Pipeline {
            seq,
            graph,
            slack,
            trace,
        } => {
            let s = parse_seq(seq)?;
            let h = parse_graph(graph)?;
            let slack = parse_slack(slack)?;
            if let Some(path) = trace {
                // dump the raw reduction before attempting the embedding
                let outcome = reduce(&s, &h, &slack)?;
                let json = serde_json::to_string_pretty(&outcome)?;
                std::fs::write(path, json)
                    .with_context(|| format!("writing trace to {}", path.display()))?;
                if let ReduceOutcome::Reduced(t) = &outcome {
                    t.audit().map_err(|e| anyhow!("trace audit failed: {e}"))?;
                }
            }
            let out = pipeline_embed(&s, &h, &slack)?;
            let rendered = match &out {
                PipelineOutcome::Embedded { graph: g, trace } => PipelineOut {
                    status: "embedded".into(),
                    stages: Some(trace.ell()),
                    graph6: Some(g.to_graph6()),
                    detail: None,
                },
                PipelineOutcome::CliqueCertificate(cert) => PipelineOut {
                    status: "clique-certificate".into(),
                    stages: None,
                    graph6: None,
                    detail: Some(format!(
                        "potentially K_{}-graphic: residual sum {} meets threshold {} at length {}",
                        cert.clique_order, cert.residual_sum, cert.threshold, cert.residual_length
                    )),
                },
                PipelineOutcome::SlackInsufficient { trace, detail } => PipelineOut {
                    status: "slack-insufficient".into(),
                    stages: Some(trace.ell()),
                    graph6: None,
                    detail: Some(detail.clone()),
                },
            };
            emit(cli, &rendered, |o| {
                let mut line = o.status.clone();
                if let Some(stages) = o.stages {
                    line.push_str(&format!(" (stages: {stages})"));
                }
                if let Some(g6) = &o.graph6 {
                    line.push_str(&format!("\nrealization: {g6}"));
                }
                if let Some(d) = &o.detail {
                    line.push_str(&format!("\n{d}"));
                }
                line
            })
        }
        Cmd::Conjecture { graph } => {
            let h = parse_graph(graph)?;
            let rep = conjecture_gap(&h)?;
            emit(cli, &rep, |r| {
                format!(
                    "slope: {}  subgraph max: {}  gap: {}  witness: {}",
                    r.slope,
                    r.subgraph_max,
                    r.gap,
                    r.witness.to_graph6()
                )
            })
        }
        Cmd::Sweep {
            graphs,
            n_range,
            csv,
        } => {
            if graphs.is_empty() {
                bail!("sweep needs at least one pattern graph");
            }
            let (lo, hi) = parse_range(n_range)?;
            let o = oracle(cli)?;
            let budget = cli.time_budget.map(Duration::from_secs);
            let start = Instant::now();
            let mut rows: Vec<SweepRow> = Vec::new();
            let mut truncated = false;
            'outer: for label in graphs {
                let h = parse_graph(label)?;
                for n in lo..=hi {
                    if let Some(b) = budget {
                        if start.elapsed() > b {
                            truncated = true;
                            break 'outer;
                        }
                    }
                    rows.extend(sweep_rows(&o, label, &h, [n])?);
                }
            }
            let mut text = String::from("pattern,n,sigma_exact,lower_bound,slope_times_n\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    r.pattern, r.n, r.sigma_exact, r.lower_bound, r.slope_times_n
                ));
            }
            match csv {
                Some(path) => {
                    std::fs::write(path, &text)
                        .with_context(|| format!("writing {}", path.display()))?;
                }
                None => match cli.format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&rows)?),
                    _ => print!("{text}"),
                },
            }
            if truncated {
                eprintln!("time budget exhausted; sweep truncated");
            }
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// Input parsing
// ---------------------------------------------------------------------------

fn parse_seq(text: &str) -> Result<GraphicSequence> {
    text.parse::<GraphicSequence>()
        .map_err(|e| anyhow!("bad sequence `{text}`: {e}"))
}

/// A graph argument is a file path when one exists; otherwise the text
/// itself is parsed, with `/` standing in for newlines in edge lists.
fn parse_graph(arg: &str) -> Result<SmallGraph> {
    let content = if Path::new(arg).is_file() {
        std::fs::read_to_string(arg).with_context(|| format!("reading {arg}"))?
    } else {
        arg.replace('/', "\n")
    };
    graph::parse(&content).map_err(|e| anyhow!("bad graph `{arg}`: {e}"))
}

fn parse_slack(text: &str) -> Result<SlackFunction> {
    let (kind, value) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("slack must be const:<c> or sqrt:<scale>"))?;
    let value: usize = value.parse().context("slack value")?;
    match kind {
        "const" => Ok(SlackFunction::constant(value)),
        "sqrt" => Ok(SlackFunction::sqrt_scale(value)),
        other => bail!("unknown slack kind `{other}`"),
    }
}

fn parse_range(text: &str) -> Result<(usize, usize)> {
    let cleaned = text.replace("..=", "..");
    let (lo, hi) = cleaned
        .split_once("..")
        .ok_or_else(|| anyhow!("range must look like 6..9"))?;
    let lo: usize = lo.trim().parse().context("range start")?;
    let hi: usize = hi.trim().parse().context("range end")?;
    if lo > hi {
        bail!("empty range {lo}..{hi}");
    }
    Ok((lo, hi))
}

// ---------------------------------------------------------------------------
// Output
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GraphicOut {
    sequence: String,
    graphic: bool,
}

#[derive(Serialize)]
struct RealizeOut {
    sequence: String,
    graph6: String,
}

#[derive(Serialize)]
struct LayoffOut {
    input: String,
    index: usize,
    result: String,
}

#[derive(Serialize)]
struct ExtremalOut {
    #[serde(flatten)]
    spec: potgraph_core::ExtremalSpec,
    #[serde(skip_serializing_if = "Option::is_none")]
    realization: Option<String>,
}

#[derive(Serialize)]
struct PotentialOut {
    decision: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    nodes_explored: u64,
}

#[derive(Serialize)]
struct BmdtOut {
    switches: usize,
    guaranteed_margin: bool,
    verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph6: Option<String>,
}

#[derive(Serialize)]
struct PipelineOut {
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    stages: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph6: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

fn emit<T: Serialize>(cli: &Cli, value: &T, text: impl Fn(&T) -> String) -> Result<()> {
    match cli.format {
        Format::Text => {
            println!("{}", text(value));
            Ok(())
        }
        Format::Json => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
        Format::Csv => bail!("csv output is only supported for `profile` and `sweep`"),
    }
}
