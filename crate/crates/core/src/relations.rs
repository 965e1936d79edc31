//! The taxonomy of pairs that generate the same line: inner/outer sets,
//! parallelograms, and the α/β/γ classification, plus the structural
//! predicates on half-diameter generator graphs.
//!
//! The lemma-check operations return the evaluated conclusion instead of
//! asserting it, so the proven lemmas double as integration tests of the
//! betweenness code: a "wrong" return value is a bug signal upstream.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::lines::{self, LineSet, PointSet};
use crate::metric::{Dist, MetricSpace, PointId};
use crate::space::Betweenness;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RelationError {
    #[error("the two points of a pair coincide")]
    SamePoint,
    #[error("two of the given points coincide")]
    DuplicatePoint,
    #[error("the two pairs overlap")]
    OverlappingPairs,
    #[error("the two pairs are identical")]
    IdenticalPairs,
    #[error("the pairs generate different lines")]
    DifferentLines,
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("the given member set is not a line of this space")]
    UnknownLine,
    #[error("point index {index} out of range for space of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PairRelationKind {
    Alpha,
    Beta,
    Gamma,
}

/// I(a,b): points strictly between a and b; O(a,b): points beyond either
/// end. Together with {a,b} they partition the line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerOuterSets {
    pub inner: Vec<PointId>,
    pub outer: Vec<PointId>,
}

fn check_points<S: Betweenness>(s: &S, pts: &[PointId]) -> Result<(), RelationError> {
    let n = s.point_count();
    for &p in pts {
        if p >= n {
            return Err(RelationError::IndexOutOfRange { index: p, n });
        }
    }
    Ok(())
}

pub fn inner_outer<S: Betweenness>(
    s: &S,
    a: PointId,
    b: PointId,
) -> Result<InnerOuterSets, RelationError> {
    check_points(s, &[a, b])?;
    if a == b {
        return Err(RelationError::SamePoint);
    }
    let mut inner = Vec::new();
    let mut outer = Vec::new();
    for x in 0..s.point_count() {
        if x == a || x == b {
            continue;
        }
        if s.between(a, x, b) {
            inner.push(x);
        } else if s.between(x, a, b) || s.between(a, b, x) {
            outer.push(x);
        }
    }
    Ok(InnerOuterSets { inner, outer })
}

/// (a,b,c,d) is a parallelogram iff [abc], [bcd], [cda], [dab].
pub fn is_parallelogram<S: Betweenness>(
    s: &S,
    quad: (PointId, PointId, PointId, PointId),
) -> Result<bool, RelationError> {
    let (a, b, c, d) = quad;
    check_points(s, &[a, b, c, d])?;
    if a == b || a == c || a == d || b == c || b == d || c == d {
        return Err(RelationError::DuplicatePoint);
    }
    Ok(s.between(a, b, c) && s.between(b, c, d) && s.between(c, d, a) && s.between(d, a, b))
}

fn check_disjoint_pairs(
    (a, b): (PointId, PointId),
    (c, d): (PointId, PointId),
) -> Result<(), RelationError> {
    if a == b || c == d {
        return Err(RelationError::SamePoint);
    }
    if a == c || a == d || b == c || b == d {
        return Err(RelationError::OverlappingPairs);
    }
    Ok(())
}

/// {a,b} and {c,d} are parallel iff (a,b,c,d) or (a,b,d,c) is a
/// parallelogram.
pub fn are_parallel<S: Betweenness>(
    s: &S,
    first: (PointId, PointId),
    second: (PointId, PointId),
) -> Result<bool, RelationError> {
    check_points(s, &[first.0, first.1, second.0, second.1])?;
    check_disjoint_pairs(first, second)?;
    let (a, b) = first;
    let (c, d) = second;
    Ok(is_parallelogram(s, (a, b, c, d))? || is_parallelogram(s, (a, b, d, c))?)
}

/// {a,b} and {c,d} are antipodal iff (a,c,b,d) is a parallelogram, up to
/// the labelling of the unordered pairs.
pub fn are_antipodal<S: Betweenness>(
    s: &S,
    first: (PointId, PointId),
    second: (PointId, PointId),
) -> Result<bool, RelationError> {
    check_points(s, &[first.0, first.1, second.0, second.1])?;
    check_disjoint_pairs(first, second)?;
    let (a, b) = first;
    let (c, d) = second;
    Ok(is_parallelogram(s, (a, c, b, d))? || is_parallelogram(s, (a, d, b, c))?)
}

fn pair_sorted(p: (PointId, PointId)) -> (PointId, PointId) {
    (p.0.min(p.1), p.0.max(p.1))
}

/// β-relatedness of two same-line pairs: parallel with both inner sets
/// empty. Assumes the caller has checked the common line.
pub(crate) fn beta_related<S: Betweenness>(
    s: &S,
    p: (PointId, PointId),
    q: (PointId, PointId),
) -> Result<bool, RelationError> {
    if !are_parallel(s, p, q)? {
        return Ok(false);
    }
    Ok(inner_outer(s, p.0, p.1)?.inner.is_empty() && inner_outer(s, q.0, q.1)?.inner.is_empty())
}

/// γ-relatedness of two same-line pairs: antipodal with both outer sets
/// empty. Assumes the caller has checked the common line.
pub(crate) fn gamma_related<S: Betweenness>(
    s: &S,
    p: (PointId, PointId),
    q: (PointId, PointId),
) -> Result<bool, RelationError> {
    if !are_antipodal(s, p, q)? {
        return Ok(false);
    }
    Ok(inner_outer(s, p.0, p.1)?.outer.is_empty() && inner_outer(s, q.0, q.1)?.outer.is_empty())
}

/// α-relatedness: the union {a,b}∪{x,y} (3 or 4 points) is geodesic.
pub(crate) fn alpha_related<S: Betweenness>(
    s: &S,
    p: (PointId, PointId),
    q: (PointId, PointId),
) -> Result<bool, RelationError> {
    let mut set: Vec<PointId> = vec![p.0, p.1, q.0, q.1];
    set.sort_unstable();
    set.dedup();
    Ok(crate::betweenness::is_geodesic_set(s, &set)
        .map_err(|_| RelationError::DuplicatePoint)?
        .is_some())
}

/// The exact subset of {α, β, γ} relations holding between two distinct
/// pairs that generate the same line. Non-empty on every valid input, and
/// never {β, γ} together — both facts are proven, so the tests treat a
/// violation as a bug.
pub fn classify_pair_relation<S: Betweenness>(
    s: &S,
    first: (PointId, PointId),
    second: (PointId, PointId),
) -> Result<BTreeSet<PairRelationKind>, RelationError> {
    check_points(s, &[first.0, first.1, second.0, second.1])?;
    if first.0 == first.1 || second.0 == second.1 {
        return Err(RelationError::SamePoint);
    }
    if pair_sorted(first) == pair_sorted(second) {
        return Err(RelationError::IdenticalPairs);
    }
    let l1 = lines::line(s, first.0, first.1).map_err(|_| RelationError::SamePoint)?;
    let l2 = lines::line(s, second.0, second.1).map_err(|_| RelationError::SamePoint)?;
    if l1.members != l2.members {
        return Err(RelationError::DifferentLines);
    }
    let mut kinds = BTreeSet::new();
    if alpha_related(s, first, second)? {
        kinds.insert(PairRelationKind::Alpha);
    }
    let overlap = [second.0, second.1]
        .iter()
        .any(|&p| p == first.0 || p == first.1);
    if !overlap {
        if beta_related(s, first, second)? {
            kinds.insert(PairRelationKind::Beta);
        }
        if gamma_related(s, first, second)? {
            kinds.insert(PairRelationKind::Gamma);
        }
    }
    Ok(kinds)
}

/// If [axb], [bxc] and [cxa] all hold, {a,b,c} cannot be collinear.
/// Returns the evaluated collinearity (must be false).
pub fn check_center_lemma<S: Betweenness>(
    s: &S,
    a: PointId,
    b: PointId,
    c: PointId,
    x: PointId,
) -> Result<bool, RelationError> {
    check_points(s, &[a, b, c, x])?;
    if a == b || a == c || a == x || b == c || b == x || c == x {
        return Err(RelationError::DuplicatePoint);
    }
    if !(s.between(a, x, b) && s.between(b, x, c) && s.between(c, x, a)) {
        return Err(RelationError::HypothesisUnmet(
            "need [axb], [bxc] and [cxa]".into(),
        ));
    }
    Ok(s.collinear_triple(a, b, c))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GammaCliqueViolation {
    /// a γ-pair was also a β-pair
    AlsoBeta((PointId, PointId)),
    /// two γ-pairs of the line share a point
    NotDisjoint((PointId, PointId), (PointId, PointId)),
    /// two γ-pairs of the line were not γ-related
    NotRelated((PointId, PointId), (PointId, PointId)),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCliqueReport {
    pub gamma_pairs: Vec<(PointId, PointId)>,
    pub violation: Option<GammaCliqueViolation>,
}

impl GammaCliqueReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Identifies the γ-pairs generating a line and checks: (a) none is also
/// a β-pair, (b) they are pairwise disjoint, (c) pairwise γ-related.
/// All three are proven, so a violation signals a bug.
pub fn gamma_clique_check<S: Betweenness>(
    s: &S,
    lines: &LineSet,
    members: &PointSet,
) -> Result<GammaCliqueReport, RelationError> {
    let gens = lines
        .generators(members)
        .ok_or(RelationError::UnknownLine)?;
    let mut gamma_pairs: Vec<(PointId, PointId)> = Vec::new();
    let mut beta_pairs: Vec<(PointId, PointId)> = Vec::new();
    for (i, &p) in gens.iter().enumerate() {
        let mut is_gamma = false;
        let mut is_beta = false;
        for (j, &q) in gens.iter().enumerate() {
            if i == j || pair_sorted(p) == pair_sorted(q) {
                continue;
            }
            let disjoint = check_disjoint_pairs(p, q).is_ok();
            if disjoint && gamma_related(s, p, q)? {
                is_gamma = true;
            }
            if disjoint && beta_related(s, p, q)? {
                is_beta = true;
            }
        }
        if is_gamma {
            gamma_pairs.push(p);
        }
        if is_beta {
            beta_pairs.push(p);
        }
    }
    let mut violation = None;
    for &p in &gamma_pairs {
        if beta_pairs.contains(&p) {
            violation = Some(GammaCliqueViolation::AlsoBeta(p));
        }
    }
    if violation.is_none() {
        'outer: for (i, &p) in gamma_pairs.iter().enumerate() {
            for &q in &gamma_pairs[i + 1..] {
                if check_disjoint_pairs(p, q).is_err() {
                    violation = Some(GammaCliqueViolation::NotDisjoint(p, q));
                    break 'outer;
                }
                if !gamma_related(s, p, q)? {
                    violation = Some(GammaCliqueViolation::NotRelated(p, q));
                    break 'outer;
                }
            }
        }
    }
    Ok(GammaCliqueReport {
        gamma_pairs,
        violation,
    })
}

/// Given three pairwise γ-related pairs {a,b}, {u,v}, {x,y} of one line
/// with [axu], evaluates whether {a,y,u} is collinear (must be false).
pub fn gamma_no_mid_check<S: Betweenness>(
    s: &S,
    (a, b): (PointId, PointId),
    (u, v): (PointId, PointId),
    (x, y): (PointId, PointId),
) -> Result<bool, RelationError> {
    check_points(s, &[a, b, u, v, x, y])?;
    for (p, q) in [((a, b), (u, v)), ((a, b), (x, y)), ((u, v), (x, y))] {
        check_disjoint_pairs(p, q).map_err(|_| {
            RelationError::HypothesisUnmet("the three pairs must be disjoint".into())
        })?;
        let same_line = lines::line(s, p.0, p.1)
            .map_err(|_| RelationError::SamePoint)?
            .members
            == lines::line(s, q.0, q.1)
                .map_err(|_| RelationError::SamePoint)?
                .members;
        if !same_line || !gamma_related(s, p, q)? {
            return Err(RelationError::HypothesisUnmet(format!(
                "pairs ({},{}) and ({},{}) are not γ-related on a common line",
                p.0, p.1, q.0, q.1
            )));
        }
    }
    if !s.between(a, x, u) {
        return Err(RelationError::HypothesisUnmet("need [axu]".into()));
    }
    Ok(s.collinear_triple(a, y, u))
}

/// The metric characterization of parallelograms: side distances equal,
/// diagonals equal to the side sum. Equivalent to [is_parallelogram] on
/// every metric input; returns the evaluated distance conditions.
pub fn parallelogram_metric_iff(
    m: &MetricSpace,
    quad: (PointId, PointId, PointId, PointId),
) -> Result<bool, RelationError> {
    let (a, b, c, d) = quad;
    check_points(m, &[a, b, c, d])?;
    if a == b || a == c || a == d || b == c || b == d || c == d {
        return Err(RelationError::DuplicatePoint);
    }
    Ok(m.dist(a, b) == m.dist(c, d)
        && m.dist(a, d) == m.dist(b, c)
        && m.dist(a, c) == m.dist(b, d)
        && m.dist(a, c) == m.dist(a, b) + m.dist(b, c))
}

/// Outcome of the structural checks on one half-diameter generator graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureClaimsReport {
    /// D odd in scaled units, or at most one edge: nothing to check.
    pub vacuous: bool,
    pub paths_checked: usize,
    /// the simple-path enumeration hit its cap (never at desk scale)
    pub truncated: bool,
    /// each entry is a counterexample to a proven claim — a bug signal
    pub violations: Vec<String>,
}

impl StructureClaimsReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

const PATH_ENUMERATION_CAP: usize = 200_000;

/// Checks the structural claims on H_{D/2}(L): path parity, bipartite
/// components with the D / D/2 distance pattern, and distance rigidity on
/// the min-degree-2 subgraph.
pub fn structure_claims_check(
    m: &MetricSpace,
    lines: &LineSet,
    members: &PointSet,
) -> Result<StructureClaimsReport, RelationError> {
    if !lines.contains(members) {
        return Err(RelationError::UnknownLine);
    }
    let (diameter, _) = m
        .diameter()
        .map_err(|_| RelationError::HypothesisUnmet("space needs at least two points".into()))?;
    let mut report = StructureClaimsReport {
        vacuous: true,
        paths_checked: 0,
        truncated: false,
        violations: Vec::new(),
    };
    if diameter % 2 != 0 {
        return Ok(report);
    }
    let half = diameter / 2;
    let graph = lines::generator_graph(m, lines, members, Some(half))
        .map_err(|_| RelationError::UnknownLine)?;
    if graph.edge_count() <= 1 {
        return Ok(report);
    }
    report.vacuous = false;

    // (i) parity along every simple path, for every line point off the path
    let mut adj: Vec<Vec<PointId>> = vec![Vec::new(); m.n()];
    for &(a, b) in graph.edges() {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    let line_points: Vec<PointId> = members.to_vec();
    let mut on_path = vec![false; m.n()];
    let mut path: Vec<PointId> = Vec::new();
    for start in 0..m.n() {
        if adj[start].is_empty() {
            continue;
        }
        path.clear();
        path.push(start);
        on_path[start] = true;
        extend_paths(
            m,
            &adj,
            &line_points,
            diameter,
            half,
            &mut path,
            &mut on_path,
            &mut report,
        );
        on_path[start] = false;
        if report.truncated {
            break;
        }
    }

    // (ii) bipartite components with the rigid distance pattern
    for comp in graph.components() {
        if comp.len() < 2 {
            continue;
        }
        let mut side = vec![None::<bool>; m.n()];
        side[comp[0]] = Some(false);
        let mut queue = std::collections::VecDeque::from([comp[0]]);
        let mut bipartite = true;
        while let Some(v) = queue.pop_front() {
            let sv = side[v].expect("queued vertices are coloured");
            for &u in &adj[v] {
                match side[u] {
                    None => {
                        side[u] = Some(!sv);
                        queue.push_back(u);
                    }
                    Some(su) if su == sv => {
                        bipartite = false;
                    }
                    Some(_) => {}
                }
            }
        }
        if !bipartite {
            report
                .violations
                .push(format!("component {comp:?} has an odd cycle"));
            continue;
        }
        for (i, &x) in comp.iter().enumerate() {
            for &y in &comp[i + 1..] {
                let expect = if side[x] == side[y] { diameter } else { half };
                if m.dist(x, y) != expect {
                    report.violations.push(format!(
                        "component {comp:?}: d({x},{y}) = {} but the bipartition requires {expect}",
                        m.dist(x, y)
                    ));
                }
            }
        }
    }

    // (iii) distance rigidity on the min-degree-2 subgraph
    let core = lines::prune_to_min_degree(&graph, 2);
    let mut core_vertices: Vec<PointId> = core.edges().iter().flat_map(|&(a, b)| [a, b]).collect();
    core_vertices.sort_unstable();
    core_vertices.dedup();
    for (i, &x) in core_vertices.iter().enumerate() {
        for &y in &core_vertices[i + 1..] {
            let d = m.dist(x, y);
            if d != half && d != diameter {
                report.violations.push(format!(
                    "min-degree-2 subgraph: d({x},{y}) = {d} is neither D/2 nor D"
                ));
            }
        }
    }
    Ok(report)
}

#[allow(clippy::too_many_arguments)]
fn extend_paths(
    m: &MetricSpace,
    adj: &[Vec<PointId>],
    line_points: &[PointId],
    diameter: Dist,
    half: Dist,
    path: &mut Vec<PointId>,
    on_path: &mut [bool],
    report: &mut StructureClaimsReport,
) {
    if report.truncated {
        return;
    }
    if path.len() >= 2 {
        report.paths_checked += 1;
        if report.paths_checked > PATH_ENUMERATION_CAP {
            report.truncated = true;
            return;
        }
        let first = path[0];
        let last = *path.last().expect("nonempty");
        let odd_vertex_count = path.len() % 2 == 1;
        for &x in line_points {
            if on_path[x] {
                continue;
            }
            let d1 = m.dist(x, first);
            if d1 != diameter && d1 != half {
                continue;
            }
            let expect = if odd_vertex_count {
                d1
            } else {
                3 * half - d1 // 3D/2 − d1 with D even
            };
            if m.dist(x, last) != expect {
                report.violations.push(format!(
                    "parity fails: path {path:?}, outside point {x}, d(x, first) = {d1}, \
                     d(x, last) = {} (expected {expect})",
                    m.dist(x, last)
                ));
            }
        }
    }
    let last = *path.last().expect("nonempty");
    for &next in &adj[last] {
        if on_path[next] {
            continue;
        }
        path.push(next);
        on_path[next] = true;
        extend_paths(m, adj, line_points, diameter, half, path, on_path, report);
        path.pop();
        on_path[next] = false;
    }
}
