//! Command-line surface: validation, line computation, pair
//! classification, witness extraction, family generation, bound
//! verification and corpus scanning.
//!
//! JSON goes to stdout (or --out); human-readable summaries go to stderr.
//! Exit codes: 0 success, 1 assertion/validation failure, 2 usage.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use cclines_core::betweenness::longest_geodesic;
use cclines_core::graph::{
    enumerate, gen_complete, gen_complete_kpartite, gen_cycle, gen_path, gen_subdivided_path, Graph,
};
use cclines_core::lines::{all_lines, line};
use cclines_core::metric::MetricSpace;
use cclines_core::relations::classify_pair_relation;
use cclines_core::verify::{
    random_metric_space, scaling_fit, scan_corpus, verify_bounds, verify_conjecture, ChecksConfig,
    CorpusFormat, ScalingFamily,
};
use cclines_core::witness::{
    witness_3metric, witness_from_geodesic, witness_graph, witness_metric, witness_pseudometric,
};
use cclines_core::{Betweenness, BetweennessRelation, PointId};

#[derive(Parser)]
#[command(
    name = "cclines",
    version,
    about = "Lines in finite metric spaces: exact counting, certified witnesses, corpus verification"
)]
struct Cli {
    /// Input format; auto sniffs JSON objects, edge lists and graph6
    #[arg(long, global = true, value_enum, default_value_t = Format::Auto)]
    format: Format,
    /// Scale denominator applied to CSV matrix ingestion
    #[arg(long, global = true, default_value_t = 1)]
    scale: u64,
    /// Worker threads (0 = one per core)
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    /// Write JSON output here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized generation
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Auto,
    Graph6,
    Edgelist,
    MatrixJson,
    MatrixCsv,
    BetweennessJson,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a metric space or betweenness relation and echo its
    /// canonical form
    Validate {
        #[command(subcommand)]
        kind: ValidateKind,
    },
    /// Compute, count or export the lines of a space
    Lines {
        #[command(subcommand)]
        action: LinesAction,
    },
    /// Classify every pair of generating pairs of one line
    Classify {
        /// The line is the one generated by this pair, e.g. --pair 0,2
        #[arg(long)]
        pair: String,
        input: Option<PathBuf>,
    },
    /// Replay a lower-bound proof and emit its certified lines
    Witness {
        #[command(subcommand)]
        construction: WitnessKind,
    },
    /// Generate example graphs, corpora and random spaces
    Generate {
        #[command(subcommand)]
        family: GenerateKind,
    },
    /// Verify the conjecture or the bound battery on one space or a corpus
    Verify {
        #[command(subcommand)]
        what: VerifyKind,
    },
    /// Fit the log-log scaling exponent of a line-count family
    Fit {
        #[arg(value_enum)]
        family: FitFamily,
        /// Comma-separated sizes (n for kpartite, s for subdivided-path)
        #[arg(long)]
        sizes: String,
    },
}

#[derive(Subcommand)]
enum ValidateKind {
    Metric { input: Option<PathBuf> },
    Betweenness { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum LinesAction {
    /// Summary: point count, line count, universal line
    Compute { input: Option<PathBuf> },
    /// Bare line count
    Count { input: Option<PathBuf> },
    /// Full JSON array of {members, generators}
    Export { input: Option<PathBuf> },
}

#[derive(Subcommand)]
enum WitnessKind {
    /// Longest geodesic, then the per-edge escape construction
    Geodesic {
        input: Option<PathBuf>,
    },
    Pseudometric {
        input: Option<PathBuf>,
    },
    Metric {
        input: Option<PathBuf>,
    },
    #[command(name = "3metric")]
    ThreeMetric {
        input: Option<PathBuf>,
    },
    Graph {
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GenerateKind {
    Kpartite {
        n: usize,
    },
    SubdividedPath {
        s: usize,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// Every connected graph on n vertices, one graph6 line each
    Corpus {
        n: usize,
    },
    /// A random triangle-repaired integer metric space (uses --seed)
    RandomMetric {
        n: usize,
        #[arg(long, default_value_t = 6)]
        max_dist: u64,
    },
}

#[derive(Subcommand)]
enum VerifyKind {
    Conjecture {
        input: Option<PathBuf>,
    },
    Bounds {
        input: Option<PathBuf>,
        /// Also run the full witness battery
        #[arg(long)]
        witnesses: bool,
    },
    Scan {
        corpus: PathBuf,
        /// Also run the full witness battery per instance
        #[arg(long)]
        witnesses: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FitFamily {
    Kpartite,
    SubdividedPath,
}

/// Anything lines can be computed on.
enum SpaceInput {
    Metric(MetricSpace),
    Relation(BetweennessRelation),
}

impl SpaceInput {
    fn as_dyn(&self) -> &(dyn Betweenness + Sync) {
        match self {
            SpaceInput::Metric(m) => m,
            SpaceInput::Relation(r) => r,
        }
    }

    fn metric(&self) -> Result<&MetricSpace> {
        match self {
            SpaceInput::Metric(m) => Ok(m),
            SpaceInput::Relation(_) => {
                bail!("this operation needs metric input, got a betweenness relation")
            }
        }
    }
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .context("reading stdin")?;
            Ok(text)
        }
    }
}

fn sniff(text: &str) -> Format {
    let trimmed = text.trim_start();
    if trimmed.starts_with('{') {
        if trimmed.contains("\"triples\"") {
            return Format::BetweennessJson;
        }
        return Format::MatrixJson;
    }
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
    if first.contains(',') {
        return Format::MatrixCsv;
    }
    let tokens: Vec<&str> = first.split_whitespace().collect();
    if tokens.len() == 2 && tokens.iter().all(|t| t.parse::<usize>().is_ok()) {
        return Format::Edgelist;
    }
    Format::Graph6
}

fn load_space(text: &str, format: Format, scale: u64) -> Result<SpaceInput> {
    let format = if format == Format::Auto {
        sniff(text)
    } else {
        format
    };
    let space = match format {
        Format::Auto => unreachable!("sniffed above"),
        Format::Graph6 => {
            let first = text
                .lines()
                .find(|l| !l.trim().is_empty())
                .ok_or_else(|| anyhow!("empty input"))?;
            SpaceInput::Metric(Graph::parse_graph6(first)?.metric()?)
        }
        Format::Edgelist => SpaceInput::Metric(Graph::parse_edge_list(text)?.metric()?),
        Format::MatrixJson => SpaceInput::Metric(MetricSpace::from_json(text)?),
        Format::MatrixCsv => SpaceInput::Metric(MetricSpace::from_csv(
            BufReader::new(text.as_bytes()),
            scale,
        )?),
        Format::BetweennessJson => SpaceInput::Relation(BetweennessRelation::from_json(text)?),
    };
    Ok(space)
}

fn corpus_format(format: Format) -> CorpusFormat {
    match format {
        Format::Edgelist => CorpusFormat::EdgeList,
        Format::MatrixJson => CorpusFormat::MatrixJson,
        _ => CorpusFormat::Graph6,
    }
}

struct Output {
    out: Option<PathBuf>,
}

impl Output {
    fn emit(&self, payload: &str) -> Result<()> {
        match &self.out {
            Some(path) => {
                fs::write(path, format!("{payload}\n"))
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            None => println!("{payload}"),
        }
        Ok(())
    }

    fn writer(&self) -> Result<Box<dyn Write>> {
        match &self.out {
            Some(path) => Ok(Box::new(
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?,
            )),
            None => Ok(Box::new(io::stdout().lock())),
        }
    }
}

fn parse_pair(text: &str) -> Result<(PointId, PointId)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        bail!("--pair wants two comma-separated indices, e.g. 0,2");
    }
    Ok((parts[0].parse()?, parts[1].parse()?))
}

fn graph_payload(graph: &Graph, format: Format) -> String {
    match format {
        Format::Edgelist => graph.to_edge_list().trim_end().to_string(),
        Format::MatrixJson => graph.adjacency_json(),
        _ => graph.to_graph6(),
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.jobs > 0 {
        // scan builds its own pool; this covers the line-engine parallelism
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.jobs)
            .build_global();
    }
    let output = Output {
        out: cli.out.clone(),
    };
    match cli.command {
        Command::Validate { kind } => match kind {
            ValidateKind::Metric { input } => {
                let text = read_input(&input)?;
                let space = load_space(&text, cli.format, cli.scale)?;
                let m = space.metric()?;
                output.emit(&m.to_json())?;
                eprintln!(
                    "valid metric space on {} points, scale {}",
                    m.n(),
                    m.scale()
                );
            }
            ValidateKind::Betweenness { input } => {
                let text = read_input(&input)?;
                let rel = BetweennessRelation::from_json(&text)?;
                output.emit(&rel.to_json())?;
                eprintln!(
                    "valid pseudometric betweenness on {} points, {} triples",
                    rel.n(),
                    rel.len()
                );
            }
        },
        Command::Lines { action } => {
            let (input, mode) = match action {
                LinesAction::Compute { input } => (input, "compute"),
                LinesAction::Count { input } => (input, "count"),
                LinesAction::Export { input } => (input, "export"),
            };
            let text = read_input(&input)?;
            let space = load_space(&text, cli.format, cli.scale)?;
            let s = space.as_dyn();
            let ls = all_lines(&s)?;
            match mode {
                "count" => output.emit(&ls.count().to_string())?,
                "export" => output.emit(&ls.to_json())?,
                _ => {
                    let universal = ls.universal();
                    let summary = serde_json::json!({
                        "n": s.point_count(),
                        "line_count": ls.count(),
                        "universal": universal.is_some(),
                        "universal_generator": universal.map(|u| u.generator),
                    });
                    output.emit(&summary.to_string())?;
                }
            }
            eprintln!("{} lines on {} points", ls.count(), s.point_count());
        }
        Command::Classify { pair, input } => {
            let text = read_input(&input)?;
            let space = load_space(&text, cli.format, cli.scale)?;
            let s = space.as_dyn();
            let (a, b) = parse_pair(&pair)?;
            let target = line(&s, a, b)?;
            let ls = all_lines(&s)?;
            let gens = ls
                .generators(&target.members)
                .expect("line of a pair is in the line set")
                .to_vec();
            let mut records = Vec::new();
            for (i, &p) in gens.iter().enumerate() {
                for &q in &gens[i + 1..] {
                    let kinds = classify_pair_relation(&s, p, q)?;
                    records.push(serde_json::json!({
                        "pairA": p,
                        "pairB": q,
                        "relations": kinds,
                    }));
                }
            }
            output.emit(&serde_json::Value::Array(records).to_string())?;
            eprintln!(
                "line of ({a},{b}) has {} members and {} generating pairs",
                target.members.len(),
                gens.len()
            );
        }
        Command::Witness { construction } => {
            let (input, name) = match &construction {
                WitnessKind::Geodesic { input } => (input.clone(), "geodesic"),
                WitnessKind::Pseudometric { input } => (input.clone(), "pseudometric"),
                WitnessKind::Metric { input } => (input.clone(), "metric"),
                WitnessKind::ThreeMetric { input } => (input.clone(), "3metric"),
                WitnessKind::Graph { input } => (input.clone(), "graph"),
            };
            let text = read_input(&input)?;
            let space = load_space(&text, cli.format, cli.scale)?;
            let report = match construction {
                WitnessKind::Geodesic { .. } => {
                    let s = space.as_dyn();
                    let geo = longest_geodesic(&s)?;
                    witness_from_geodesic(&s, &geo)?
                }
                WitnessKind::Pseudometric { .. } => {
                    let s = space.as_dyn();
                    witness_pseudometric(&s)?
                }
                WitnessKind::Metric { .. } => witness_metric(space.metric()?)?,
                WitnessKind::ThreeMetric { .. } => witness_3metric(space.metric()?)?,
                WitnessKind::Graph { .. } => witness_graph(space.metric()?)?,
            };
            output.emit(&report.to_json())?;
            eprintln!(
                "{name}: {} certified lines (guaranteed {}), distinct: {}",
                report.lines.len(),
                report.guaranteed_count,
                report.verified_distinct
            );
        }
        Command::Generate { family } => match family {
            GenerateKind::Kpartite { n } => {
                output.emit(&graph_payload(&gen_complete_kpartite(n)?, cli.format))?
            }
            GenerateKind::SubdividedPath { s } => {
                output.emit(&graph_payload(&gen_subdivided_path(s)?, cli.format))?
            }
            GenerateKind::Cycle { n } => output.emit(&graph_payload(&gen_cycle(n)?, cli.format))?,
            GenerateKind::Path { n } => output.emit(&graph_payload(&gen_path(n)?, cli.format))?,
            GenerateKind::Complete { n } => {
                output.emit(&graph_payload(&gen_complete(n)?, cli.format))?
            }
            GenerateKind::Corpus { n } => {
                let graphs = enumerate::connected_graphs(n)?;
                let payload: Vec<String> = graphs.iter().map(Graph::to_graph6).collect();
                eprintln!("{} connected graphs on {n} vertices", payload.len());
                output.emit(&payload.join("\n"))?;
            }
            GenerateKind::RandomMetric { n, max_dist } => {
                use rand::SeedableRng;
                let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cli.seed);
                let m = random_metric_space(n, max_dist, &mut rng);
                output.emit(&m.to_json())?;
            }
        },
        Command::Verify { what } => match what {
            VerifyKind::Conjecture { input } => {
                let text = read_input(&input)?;
                let space = load_space(&text, cli.format, cli.scale)?;
                let s = space.as_dyn();
                let outcome = verify_conjecture(&s)?;
                output.emit(&serde_json::to_string(&outcome)?)?;
                eprintln!(
                    "universal: {}, lines: {}, conjecture holds: {}",
                    outcome.universal, outcome.line_count, outcome.holds
                );
                if !outcome.holds {
                    bail!("conjecture violated: no universal line and fewer than n lines");
                }
            }
            VerifyKind::Bounds { input, witnesses } => {
                let text = read_input(&input)?;
                let space = load_space(&text, cli.format, cli.scale)?;
                let report = verify_bounds(space.metric()?, "input", witnesses)?;
                output.emit(&serde_json::to_string(&report)?)?;
                let failed: Vec<&str> = report
                    .bounds
                    .iter()
                    .filter(|b| b.asserted && !b.satisfied_with_o1_zero)
                    .map(|b| b.name.as_str())
                    .collect();
                eprintln!(
                    "n={} lines={} universal={}",
                    report.n, report.line_count, report.universal
                );
                if !failed.is_empty() {
                    bail!("asserted bound(s) violated: {}", failed.join(", "));
                }
            }
            VerifyKind::Scan { corpus, witnesses } => {
                let started = Instant::now();
                let file = fs::File::open(&corpus)
                    .with_context(|| format!("opening {}", corpus.display()))?;
                let mut reader: Box<dyn BufRead> = Box::new(BufReader::new(file));
                let mut writer = output.writer()?;
                let checks = ChecksConfig {
                    bounds: true,
                    witnesses,
                };
                let aggregate = scan_corpus(
                    &mut reader,
                    &mut writer,
                    corpus_format(cli.format),
                    checks,
                    cli.jobs,
                )?;
                writer.flush()?;
                eprintln!(
                    "scanned {} instances in {:.2?}: {} parse errors, {} conjecture violations, {} asserted-bound violations",
                    aggregate.instances,
                    started.elapsed(),
                    aggregate.parse_errors,
                    aggregate.conjecture_violations,
                    aggregate.asserted_bound_violations,
                );
                if aggregate.asserted_bound_violations > 0 {
                    bail!("asserted bound violated on a scanned instance");
                }
            }
        },
        Command::Fit { family, sizes } => {
            let sizes: Vec<usize> = sizes
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .context("parsing --sizes")?;
            let family = match family {
                FitFamily::Kpartite => ScalingFamily::Kpartite,
                FitFamily::SubdividedPath => ScalingFamily::SubdividedPath,
            };
            let fit = scaling_fit(family, &sizes)?;
            output.emit(&serde_json::to_string(&fit)?)?;
            eprintln!(
                "{}: slope {:.4} over n = {:?} ({})",
                fit.family,
                fit.slope,
                fit.ns,
                if fit.slope_in_window {
                    "within the 4/3 smoke window"
                } else {
                    "outside [1.1, 1.6]"
                }
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
