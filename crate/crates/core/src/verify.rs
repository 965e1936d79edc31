//! Bound verification and corpus scanning.
//!
//! Only the n/(5w) bound is asserted (it has no asymptotic slack); every
//! o(1)-bearing bound is evaluated exactly, with o(1) = 0, and reported.
//! Corpus scans emit one JSON record per instance in input order
//! regardless of worker count, so output is byte-identical across `jobs`
//! settings; wall-clock statistics are kept out of the persisted record.

use std::io::{self, BufRead, Write};

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::betweenness::longest_geodesic;
use crate::exact::{d_graph_floor, n47_half_floor, pmb_floor, sqrt_half_floor, Frac};
use crate::graph::{gen_complete_kpartite, gen_subdivided_path, is_graph_metric, Graph};
use crate::lines::{all_lines, LineError};
use crate::metric::{Dist, MetricSpace, PointId};
use crate::space::Betweenness;
use crate::witness::{
    witness_3metric, witness_bounded_distances, witness_from_geodesic, witness_graph,
    witness_metric, witness_pseudometric, WitnessError, WitnessReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("operation needs at least {needed} points, space has {n}")]
    TooFewPoints { n: usize, needed: usize },
    #[error("scaling fits need at least 3 sizes, got {0}")]
    TooFewSizes(usize),
    #[error("family instance at size {size} has a universal line")]
    UniversalLineInFamily { size: usize },
    #[error("bad family size {size}: {reason}")]
    BadFamilySize { size: usize, reason: String },
}

/// The conjecture check: a universal line, or at least n distinct lines.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureOutcome {
    pub universal: bool,
    pub line_count: usize,
    pub holds: bool,
}

pub fn verify_conjecture<S: Betweenness + Sync>(s: &S) -> Result<ConjectureOutcome, VerifyError> {
    let n = s.point_count();
    let ls = all_lines(s).map_err(|_| VerifyError::TooFewPoints { n, needed: 2 })?;
    let universal = ls.universal().is_some();
    let line_count = ls.count();
    Ok(ConjectureOutcome {
        universal,
        line_count,
        holds: universal || line_count >= n,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub formula_value: Frac,
    pub satisfied_with_o1_zero: bool,
    /// true only for n/(5w), the one bound with no asymptotic slack
    pub asserted: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessSummary {
    pub construction: String,
    /// "ok", or why the construction does not apply here
    pub status: String,
    pub line_count: usize,
    pub guaranteed_count: usize,
    pub verified_distinct: bool,
    /// every emitted member set is a line of the space
    pub lines_are_lines: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub instance: String,
    pub n: usize,
    pub diameter: Dist,
    pub w: usize,
    pub w_excluding_zero: usize,
    pub line_count: usize,
    pub universal: bool,
    pub conjecture_holds: bool,
    pub bounds: Vec<BoundEntry>,
    pub witnesses: Vec<WitnessSummary>,
}

fn summarize(
    construction: &str,
    result: Result<WitnessReport, WitnessError>,
    ls: &crate::lines::LineSet,
) -> WitnessSummary {
    match result {
        Ok(report) => WitnessSummary {
            construction: construction.to_string(),
            status: "ok".to_string(),
            line_count: report.lines.len(),
            guaranteed_count: report.guaranteed_count,
            verified_distinct: report.verified_distinct,
            lines_are_lines: report.lines.iter().all(|l| ls.contains(l)),
        },
        Err(e) => WitnessSummary {
            construction: construction.to_string(),
            status: e.to_string(),
            line_count: 0,
            guaranteed_count: 0,
            verified_distinct: true,
            lines_are_lines: true,
        },
    }
}

/// Evaluates every applicable bound for the space, optionally running the
/// full witness battery.
pub fn verify_bounds(
    m: &MetricSpace,
    instance: &str,
    with_witnesses: bool,
) -> Result<BoundReport, VerifyError> {
    let n = m.n();
    let ls = all_lines(m).map_err(|_| VerifyError::TooFewPoints { n, needed: 2 })?;
    let count = ls.count();
    let universal = ls.universal().is_some();
    let (diameter, _) = m.diameter().expect("n >= 2");
    let distances = m.distance_set();
    let w = distances.len();
    let w_prime = w - 1;
    let nn = n as u128;

    let mut bounds = Vec::new();
    let pmb = pmb_floor(nn);
    bounds.push(BoundEntry {
        name: "pseudometric_n25".to_string(),
        formula_value: Frac::int(pmb as i128),
        satisfied_with_o1_zero: universal || count as u128 >= pmb,
        asserted: false,
    });
    let sqrt_half = sqrt_half_floor(nn);
    bounds.push(BoundEntry {
        name: "metric_sqrt_half".to_string(),
        formula_value: Frac::int(sqrt_half as i128),
        satisfied_with_o1_zero: universal || count as u128 >= sqrt_half,
        asserted: false,
    });
    bounds.push(BoundEntry {
        name: "n_over_5w".to_string(),
        formula_value: Frac::new(n as i128, 5 * w as i128),
        satisfied_with_o1_zero: 5 * w * count >= n,
        asserted: true,
    });
    bounds.push(BoundEntry {
        name: "n_over_5w_excluding_zero".to_string(),
        formula_value: Frac::new(n as i128, 5 * w_prime as i128),
        satisfied_with_o1_zero: 5 * w_prime * count >= n,
        asserted: false,
    });
    let graph = is_graph_metric(m);
    if graph.is_some() {
        let dg = d_graph_floor(nn, diameter as u128);
        bounds.push(BoundEntry {
            name: "graph_diameter_43".to_string(),
            formula_value: Frac::int(dg as i128),
            satisfied_with_o1_zero: universal || count as u128 >= dg,
            asserted: false,
        });
        let g47 = n47_half_floor(nn);
        bounds.push(BoundEntry {
            name: "graph_n47_half".to_string(),
            formula_value: Frac::int(g47 as i128),
            satisfied_with_o1_zero: universal || count as u128 >= g47,
            asserted: false,
        });
    }

    let mut witnesses = Vec::new();
    if with_witnesses {
        let geo = longest_geodesic(m).expect("n >= 2");
        witnesses.push(summarize("geodesic", witness_from_geodesic(m, &geo), &ls));
        witnesses.push(summarize("pseudometric", witness_pseudometric(m), &ls));
        witnesses.push(summarize("metric", witness_metric(m), &ls));
        witnesses.push(summarize(
            "bounded-distances",
            witness_bounded_distances(m),
            &ls,
        ));
        witnesses.push(summarize("3metric", witness_3metric(m), &ls));
        if graph.is_some() {
            witnesses.push(summarize("graph", witness_graph(m), &ls));
        }
    }

    Ok(BoundReport {
        instance: instance.to_string(),
        n,
        diameter,
        w,
        w_excluding_zero: w_prime,
        line_count: count,
        universal,
        conjecture_holds: universal || count >= n,
        bounds,
        witnesses,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    Graph6,
    EdgeList,
    MatrixJson,
}

#[derive(Debug, Clone, Copy)]
pub struct ChecksConfig {
    pub bounds: bool,
    pub witnesses: bool,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig {
            bounds: true,
            witnesses: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ScanAggregate {
    pub instances: usize,
    pub parse_errors: usize,
    pub conjecture_violations: usize,
    pub asserted_bound_violations: usize,
    /// instance minimizing line_count − n/(5w), with its exact margin
    pub min_margin_instance: Option<String>,
    pub min_margin: Option<Frac>,
}

#[derive(Serialize)]
struct ParseErrorRecord<'a> {
    instance: &'a str,
    error: &'a str,
}

/// Splits a corpus into instance chunks: one line per instance for graph6
/// and JSON matrices, blank-line-separated blocks for edge lists.
fn read_instances(input: &mut dyn BufRead, format: CorpusFormat) -> io::Result<Vec<String>> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let out = match format {
        CorpusFormat::Graph6 | CorpusFormat::MatrixJson => text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect(),
        CorpusFormat::EdgeList => text
            .split("\n\n")
            .map(str::trim)
            .filter(|b| !b.is_empty())
            .map(str::to_string)
            .collect(),
    };
    Ok(out)
}

fn parse_instance(format: CorpusFormat, source: &str) -> Result<MetricSpace, String> {
    match format {
        CorpusFormat::Graph6 => Graph::parse_graph6(source)
            .and_then(|g| g.metric())
            .map_err(|e| e.to_string()),
        CorpusFormat::EdgeList => Graph::parse_edge_list(source)
            .and_then(|g| g.metric())
            .map_err(|e| e.to_string()),
        CorpusFormat::MatrixJson => MetricSpace::from_json(source).map_err(|e| e.to_string()),
    }
}

fn instance_label(format: CorpusFormat, index: usize, source: &str) -> String {
    match format {
        CorpusFormat::Graph6 => format!("{index}:{source}"),
        CorpusFormat::EdgeList => format!("{index}:edgelist"),
        CorpusFormat::MatrixJson => format!("{index}:json"),
    }
}

enum ScanRecord {
    Report(Box<BoundReport>),
    ParseError { label: String, message: String },
}

/// Scans a corpus, writing one JSON record per instance in input order
/// followed by one aggregate JSON line. The output bytes do not depend on
/// `jobs`.
pub fn scan_corpus(
    input: &mut dyn BufRead,
    out: &mut dyn Write,
    format: CorpusFormat,
    checks: ChecksConfig,
    jobs: usize,
) -> io::Result<ScanAggregate> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(io::Error::other)?;
    let instances = read_instances(input, format)?;
    let mut aggregate = ScanAggregate::default();

    const CHUNK: usize = 512;
    for (chunk_index, chunk) in instances.chunks(CHUNK).enumerate() {
        let base = chunk_index * CHUNK;
        let records: Vec<ScanRecord> = pool.install(|| {
            chunk
                .par_iter()
                .enumerate()
                .map(|(offset, source)| {
                    let label = instance_label(format, base + offset, source);
                    match parse_instance(format, source) {
                        Err(message) => ScanRecord::ParseError { label, message },
                        Ok(metric) => match verify_bounds(&metric, &label, checks.witnesses) {
                            Ok(mut report) => {
                                if !checks.bounds {
                                    report.bounds.clear();
                                }
                                ScanRecord::Report(Box::new(report))
                            }
                            Err(e) => ScanRecord::ParseError {
                                label,
                                message: e.to_string(),
                            },
                        },
                    }
                })
                .collect()
        });
        for record in records {
            aggregate.instances += 1;
            match record {
                ScanRecord::ParseError { label, message } => {
                    aggregate.parse_errors += 1;
                    let line = serde_json::to_string(&ParseErrorRecord {
                        instance: &label,
                        error: &message,
                    })
                    .expect("serialization cannot fail");
                    writeln!(out, "{line}")?;
                }
                ScanRecord::Report(report) => {
                    if !report.conjecture_holds {
                        aggregate.conjecture_violations += 1;
                    }
                    if report
                        .bounds
                        .iter()
                        .any(|b| b.asserted && !b.satisfied_with_o1_zero)
                    {
                        aggregate.asserted_bound_violations += 1;
                    }
                    let margin = Frac::new(
                        (5 * report.w * report.line_count) as i128 - report.n as i128,
                        5 * report.w as i128,
                    );
                    if aggregate.min_margin.is_none_or(|m| margin < m) {
                        aggregate.min_margin = Some(margin);
                        aggregate.min_margin_instance = Some(report.instance.clone());
                    }
                    let line = serde_json::to_string(&report).expect("serialization cannot fail");
                    writeln!(out, "{line}")?;
                }
            }
        }
    }
    let line = serde_json::to_string(&aggregate).expect("serialization cannot fail");
    writeln!(out, "{line}")?;
    Ok(aggregate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalingFamily {
    Kpartite,
    SubdividedPath,
}

impl ScalingFamily {
    pub fn name(self) -> &'static str {
        match self {
            ScalingFamily::Kpartite => "kpartite",
            ScalingFamily::SubdividedPath => "subdivided-path",
        }
    }
}

/// Exact line counts across a family plus the log-log least-squares
/// slope: the one floating-point computation in the crate.
#[derive(Debug, Clone, Serialize)]
pub struct ScalingFit {
    pub family: String,
    pub sizes: Vec<usize>,
    pub ns: Vec<usize>,
    pub counts: Vec<usize>,
    pub slope: f64,
    pub residual: f64,
    /// informational smoke window around the expected 4/3 exponent
    pub slope_in_window: bool,
}

pub fn scaling_fit(family: ScalingFamily, sizes: &[usize]) -> Result<ScalingFit, VerifyError> {
    if sizes.len() < 3 {
        return Err(VerifyError::TooFewSizes(sizes.len()));
    }
    let mut ns = Vec::with_capacity(sizes.len());
    let mut counts = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let graph = match family {
            ScalingFamily::Kpartite => gen_complete_kpartite(size),
            ScalingFamily::SubdividedPath => gen_subdivided_path(size),
        }
        .map_err(|e| VerifyError::BadFamilySize {
            size,
            reason: e.to_string(),
        })?;
        let metric = graph.metric().map_err(|e| VerifyError::BadFamilySize {
            size,
            reason: e.to_string(),
        })?;
        let ls = all_lines(&metric).map_err(|e: LineError| VerifyError::BadFamilySize {
            size,
            reason: e.to_string(),
        })?;
        if ls.universal().is_some() {
            return Err(VerifyError::UniversalLineInFamily { size });
        }
        ns.push(metric.n());
        counts.push(ls.count());
    }
    let xs: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&xs), mean(&ys));
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let e = y - (slope * x + intercept);
            e * e
        })
        .sum::<f64>()
        / xs.len() as f64)
        .sqrt();
    Ok(ScalingFit {
        family: family.name().to_string(),
        sizes: sizes.to_vec(),
        ns,
        counts,
        slope,
        residual,
        slope_in_window: (1.1..=1.6).contains(&slope),
    })
}

/// A random integer metric space: symmetric entries in 1..=max_dist,
/// triangle-repaired by min-plus closure (entries stay within bounds).
pub fn random_metric_space(n: usize, max_dist: Dist, rng: &mut impl Rng) -> MetricSpace {
    assert!(n >= 1 && max_dist >= 1);
    let mut d = vec![0u64; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let v = rng.gen_range(1..=max_dist);
            d[i * n + j] = v;
            d[j * n + i] = v;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    let via = d[i * n + k] + d[k * n + j];
                    if via < d[i * n + j] {
                        d[i * n + j] = via;
                    }
                }
            }
        }
    }
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| d[i * n + j] as i64).collect())
        .collect();
    MetricSpace::from_matrix(&rows, 1).expect("closure repairs the triangle inequality")
}

/// A connected Erdős–Rényi-style graph: edges kept with probability
/// num/den, resampled until connected.
pub fn random_connected_graph(n: usize, prob_num: u32, prob_den: u32, rng: &mut impl Rng) -> Graph {
    assert!(n >= 2 && prob_num >= 1 && prob_num <= prob_den);
    loop {
        let mut edges: Vec<(PointId, PointId)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                if rng.gen_ratio(prob_num, prob_den) {
                    edges.push((i, j));
                }
            }
        }
        let g = Graph::from_edges(n, edges).expect("sampled edges are simple");
        if g.is_connected() {
            return g;
        }
    }
}

/// A connected graph whose metric has no universal line, by rejection.
pub fn random_no_universal_graph(n_min: usize, n_max: usize, rng: &mut impl Rng) -> Graph {
    loop {
        let n = rng.gen_range(n_min..=n_max);
        let g = random_connected_graph(n, 2, 5, rng);
        let m = g.metric().expect("connected");
        let ls = all_lines(&m).expect("n >= 2");
        if ls.universal().is_none() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, gen_path};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn conjecture_examples() {
        let c5 = gen_cycle(5).unwrap().metric().unwrap();
        let outcome = verify_conjecture(&c5).unwrap();
        assert_eq!(
            outcome,
            ConjectureOutcome {
                universal: false,
                line_count: 10,
                holds: true
            }
        );

        let p4 = gen_path(4).unwrap().metric().unwrap();
        let outcome = verify_conjecture(&p4).unwrap();
        assert!(outcome.universal && outcome.holds);

        let two = MetricSpace::from_matrix(&[vec![0, 1], vec![1, 0]], 1).unwrap();
        assert!(verify_conjecture(&two).unwrap().holds);
    }

    #[test]
    fn bound_report_c5_and_k4() {
        let c5 = gen_cycle(5).unwrap().metric().unwrap();
        let report = verify_bounds(&c5, "c5", false).unwrap();
        assert_eq!(report.line_count, 10);
        assert_eq!(report.w, 3);
        let n5w = report
            .bounds
            .iter()
            .find(|b| b.name == "n_over_5w")
            .unwrap();
        assert_eq!(n5w.formula_value, Frac::new(5, 15));
        assert!(n5w.satisfied_with_o1_zero && n5w.asserted);

        let k4 = crate::graph::gen_complete(4).unwrap().metric().unwrap();
        let report = verify_bounds(&k4, "k4", false).unwrap();
        assert_eq!(report.line_count, 6);
        assert_eq!(report.w, 2);
        let n5w = report
            .bounds
            .iter()
            .find(|b| b.name == "n_over_5w")
            .unwrap();
        assert_eq!(n5w.formula_value, Frac::new(4, 10));
        assert!(n5w.satisfied_with_o1_zero);
        assert!(report.bounds.iter().any(|b| b.name == "graph_diameter_43"));
    }

    #[test]
    fn scan_is_deterministic_across_jobs() {
        let corpus: String = (4..8)
            .flat_map(|n| {
                vec![
                    gen_cycle(n).unwrap().to_graph6(),
                    gen_path(n).unwrap().to_graph6(),
                ]
            })
            .collect::<Vec<_>>()
            .join("\n");
        let run = |jobs: usize| -> Vec<u8> {
            let mut out = Vec::new();
            scan_corpus(
                &mut corpus.as_bytes(),
                &mut out,
                CorpusFormat::Graph6,
                ChecksConfig::default(),
                jobs,
            )
            .unwrap();
            out
        };
        assert_eq!(run(1), run(4));
    }

    #[test]
    fn scan_collects_parse_errors() {
        let corpus = format!(
            "{}\nnot graph6 !!\n{}",
            gen_cycle(5).unwrap().to_graph6(),
            gen_path(4).unwrap().to_graph6()
        );
        let mut out = Vec::new();
        let aggregate = scan_corpus(
            &mut corpus.as_bytes(),
            &mut out,
            CorpusFormat::Graph6,
            ChecksConfig::default(),
            1,
        )
        .unwrap();
        assert_eq!(aggregate.instances, 3);
        assert_eq!(aggregate.parse_errors, 1);
        assert_eq!(aggregate.conjecture_violations, 0);
        assert_eq!(aggregate.asserted_bound_violations, 0);
    }

    #[test]
    fn empty_corpus_scans_cleanly() {
        let mut out = Vec::new();
        let aggregate = scan_corpus(
            &mut "".as_bytes(),
            &mut out,
            CorpusFormat::Graph6,
            ChecksConfig::default(),
            1,
        )
        .unwrap();
        assert_eq!(aggregate.instances, 0);
        assert!(aggregate.min_margin.is_none());
    }

    #[test]
    fn scaling_fit_needs_three_sizes() {
        assert!(matches!(
            scaling_fit(ScalingFamily::Kpartite, &[27, 64]),
            Err(VerifyError::TooFewSizes(2))
        ));
    }

    #[test]
    fn random_metric_is_valid_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let n = rng.gen_range(2..=10);
            let m = random_metric_space(n, 6, &mut rng);
            assert_eq!(m.n(), n);
            let max = m.distance_set().into_iter().max().unwrap();
            assert!((1..=6).contains(&max));
        }
    }

    #[test]
    fn random_graphs_are_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let g = random_connected_graph(9, 1, 3, &mut rng);
            assert!(g.is_connected());
        }
        let g = random_no_universal_graph(8, 12, &mut rng);
        let ls = all_lines(&g.metric().unwrap()).unwrap();
        assert!(ls.universal().is_none());
    }
}
