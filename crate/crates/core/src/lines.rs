//! Line computation and deduplication.
//!
//! A line is stored as a fixed-width bit vector over point ids; the line set
//! maps each distinct bit pattern to the pairs that generate it. The
//! generator sets partition all C(n,2) pairs, which is asserted on every
//! full enumeration.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::metric::{Dist, MetricSpace, PointId};
use crate::space::Betweenness;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LineError {
    #[error("the two generator points coincide")]
    SamePoint,
    #[error("operation needs at least {needed} points, space has {n}")]
    TooFewPoints { n: usize, needed: usize },
    #[error("point index {index} out of range for space of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("the given member set is not a line of this space")]
    UnknownLine,
    #[error("distance-filtered generator graphs need metric input")]
    DeltaUnavailable,
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
}

/// A set of points over a fixed ground set, packed into 64-bit words.
///
/// Ordered lexicographically by ascending member list, which is the
/// canonical order for every exported line set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    nbits: usize,
    words: Vec<u64>,
}

impl PointSet {
    pub fn new(nbits: usize) -> Self {
        PointSet {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn from_members(nbits: usize, members: impl IntoIterator<Item = PointId>) -> Self {
        let mut s = Self::new(nbits);
        for p in members {
            s.insert(p);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.nbits
    }

    #[inline]
    pub fn insert(&mut self, p: PointId) {
        debug_assert!(p < self.nbits);
        self.words[p / 64] |= 1u64 << (p % 64);
    }

    #[inline]
    pub fn contains(&self, p: PointId) -> bool {
        p < self.nbits && self.words[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// True iff the set contains the whole ground set.
    pub fn is_full(&self) -> bool {
        self.len() == self.nbits
    }

    pub fn members(&self) -> impl Iterator<Item = PointId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn to_vec(&self) -> Vec<PointId> {
        self.members().collect()
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.members().cmp(other.members())
    }
}

/// A line: its member set plus the canonical (first found, row-major)
/// generating pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Line {
    pub members: PointSet,
    pub generator: (PointId, PointId),
}

impl Line {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_universal(&self) -> bool {
        self.members.is_full()
    }
}

/// All distinct lines of a space, keyed by member bit pattern, each with
/// its full generator set E(L).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineSet {
    n: usize,
    lines: BTreeMap<PointSet, Vec<(PointId, PointId)>>,
}

#[derive(Serialize)]
struct LineJson {
    members: Vec<PointId>,
    generators: Vec<(PointId, PointId)>,
}

impl LineSet {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn count(&self) -> usize {
        self.lines.len()
    }

    pub fn contains(&self, members: &PointSet) -> bool {
        self.lines.contains_key(members)
    }

    /// Generating pairs of a line, in row-major discovery order.
    pub fn generators(&self, members: &PointSet) -> Option<&[(PointId, PointId)]> {
        self.lines.get(members).map(|v| v.as_slice())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PointSet, &[(PointId, PointId)])> {
        self.lines.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// The universal line, if present. Its reported generator is the
    /// lexicographically least generating pair.
    pub fn universal(&self) -> Option<Line> {
        self.lines.iter().find_map(|(k, gens)| {
            if k.is_full() {
                Some(Line {
                    members: k.clone(),
                    generator: gens.iter().copied().min().expect("line has a generator"),
                })
            } else {
                None
            }
        })
    }

    /// JSON export: array of {members, generators} sorted by member bit
    /// pattern. Bit-exact for golden tests.
    pub fn to_json(&self) -> String {
        let shim: Vec<LineJson> = self
            .lines
            .iter()
            .map(|(k, gens)| LineJson {
                members: k.to_vec(),
                generators: gens.clone(),
            })
            .collect();
        serde_json::to_string(&shim).expect("serialization cannot fail")
    }
}

fn check_pair<S: Betweenness>(s: &S, a: PointId, b: PointId) -> Result<(), LineError> {
    let n = s.point_count();
    for p in [a, b] {
        if p >= n {
            return Err(LineError::IndexOutOfRange { index: p, n });
        }
    }
    if a == b {
        return Err(LineError::SamePoint);
    }
    Ok(())
}

fn line_members<S: Betweenness>(s: &S, a: PointId, b: PointId) -> PointSet {
    let n = s.point_count();
    let mut members = PointSet::new(n);
    members.insert(a);
    members.insert(b);
    for c in 0..n {
        if c == a || c == b {
            continue;
        }
        if s.between(a, b, c) || s.between(a, c, b) || s.between(c, a, b) {
            members.insert(c);
        }
    }
    members
}

/// The line generated by `a` and `b`: both points plus every `c` with
/// `[abc]`, `[acb]`, or `[cab]`.
pub fn line<S: Betweenness>(s: &S, a: PointId, b: PointId) -> Result<Line, LineError> {
    check_pair(s, a, b)?;
    Ok(Line {
        members: line_members(s, a, b),
        generator: (a.min(b), a.max(b)),
    })
}

/// Every distinct line of the space, with generator sets.
///
/// Pair rows are evaluated in parallel; the merge is keyed, so the result
/// is identical regardless of thread count.
pub fn all_lines<S: Betweenness + Sync>(s: &S) -> Result<LineSet, LineError> {
    let n = s.point_count();
    if n < 2 {
        return Err(LineError::TooFewPoints { n, needed: 2 });
    }
    let rows: Vec<Vec<(PointSet, (PointId, PointId))>> = (0..n)
        .into_par_iter()
        .map(|a| {
            ((a + 1)..n)
                .map(|b| (line_members(s, a, b), (a, b)))
                .collect()
        })
        .collect();
    let mut lines: BTreeMap<PointSet, Vec<(PointId, PointId)>> = BTreeMap::new();
    for row in rows {
        for (members, pair) in row {
            lines.entry(members).or_default().push(pair);
        }
    }
    let set = LineSet { n, lines };
    let total: usize = set.lines.values().map(|v| v.len()).sum();
    assert_eq!(
        total,
        n * (n - 1) / 2,
        "generator sets must partition all pairs"
    );
    Ok(set)
}

/// The universal line of the space, if one exists.
pub fn universal_line<S: Betweenness + Sync>(s: &S) -> Result<Option<Line>, LineError> {
    Ok(all_lines(s)?.universal())
}

/// The generator graph H(L), optionally filtered to pairs at distance δ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorGraph {
    n: usize,
    line: PointSet,
    delta: Option<Dist>,
    edges: Vec<(PointId, PointId)>,
}

impl GeneratorGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn line(&self) -> &PointSet {
        &self.line
    }

    pub fn delta(&self) -> Option<Dist> {
        self.delta
    }

    pub fn edges(&self) -> &[(PointId, PointId)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for &(a, b) in &self.edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg
    }

    pub fn max_degree(&self) -> usize {
        self.degrees().into_iter().max().unwrap_or(0)
    }

    /// Connected components of the subgraph spanned by the edges,
    /// skipping isolated vertices. Deterministic: components are found by
    /// increasing least vertex, vertices listed ascending.
    pub fn components(&self) -> Vec<Vec<PointId>> {
        let mut adj: BTreeMap<PointId, Vec<PointId>> = BTreeMap::new();
        for &(a, b) in &self.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        let mut seen: Vec<bool> = vec![false; self.n];
        let mut comps = Vec::new();
        for &start in adj.keys() {
            if seen[start] {
                continue;
            }
            let mut stack = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = stack.pop() {
                comp.push(v);
                for &u in &adj[&v] {
                    if !seen[u] {
                        seen[u] = true;
                        stack.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }
}

/// Builds H(L) or H_δ(L) for a line of the given set.
pub fn generator_graph<S: Betweenness>(
    s: &S,
    lines: &LineSet,
    members: &PointSet,
    delta: Option<Dist>,
) -> Result<GeneratorGraph, LineError> {
    let gens = lines.generators(members).ok_or(LineError::UnknownLine)?;
    let edges = match delta {
        None => gens.to_vec(),
        Some(d) => {
            let mut out = Vec::new();
            for &(a, b) in gens {
                let dist = s.distance(a, b).ok_or(LineError::DeltaUnavailable)?;
                if dist == d {
                    out.push((a, b));
                }
            }
            out
        }
    };
    Ok(GeneratorGraph {
        n: s.point_count(),
        line: members.clone(),
        delta,
        edges,
    })
}

/// A vertex of degree > 1 in some H_δ(L), with two witnessing neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeViolation {
    pub vertex: PointId,
    pub neighbours: (PointId, PointId),
}

/// Checks that H_δ(L) has maximum degree at most one, which is guaranteed
/// whenever 2δ > D. A returned violation signals a bug upstream.
pub fn check_no_high_degree(
    m: &MetricSpace,
    lines: &LineSet,
    members: &PointSet,
    delta: Dist,
) -> Result<Option<DegreeViolation>, LineError> {
    let (diameter, _) = m.diameter().map_err(|_| LineError::TooFewPoints {
        n: m.n(),
        needed: 2,
    })?;
    if 2 * delta <= diameter {
        return Err(LineError::PreconditionUnmet(format!(
            "need 2*delta > diameter, got delta {delta}, diameter {diameter}"
        )));
    }
    let graph = generator_graph(m, lines, members, Some(delta))?;
    let mut incident: Vec<Option<PointId>> = vec![None; m.n()];
    for &(a, b) in graph.edges() {
        for (v, other) in [(a, b), (b, a)] {
            match incident[v] {
                None => incident[v] = Some(other),
                Some(first) => {
                    return Ok(Some(DegreeViolation {
                        vertex: v,
                        neighbours: (first, other),
                    }))
                }
            }
        }
    }
    Ok(None)
}

/// The unique maximal subgraph of minimum degree ≥ k (the k-core),
/// obtained by iterated pruning. Possibly empty.
pub fn prune_to_min_degree(graph: &GeneratorGraph, k: usize) -> GeneratorGraph {
    let mut alive_edge = vec![true; graph.edges.len()];
    let mut deg = graph.degrees();
    let mut removed = vec![false; graph.n];
    loop {
        let mut changed = false;
        for v in 0..graph.n {
            if !removed[v] && deg[v] > 0 && deg[v] < k {
                removed[v] = true;
                changed = true;
            }
        }
        if !changed {
            break;
        }
        for (idx, &(a, b)) in graph.edges.iter().enumerate() {
            if alive_edge[idx] && (removed[a] || removed[b]) {
                alive_edge[idx] = false;
                deg[a] -= 1;
                deg[b] -= 1;
            }
        }
    }
    GeneratorGraph {
        n: graph.n,
        line: graph.line.clone(),
        delta: graph.delta,
        edges: graph
            .edges
            .iter()
            .zip(alive_edge)
            .filter_map(|(&e, alive)| alive.then_some(e))
            .collect(),
    }
}
