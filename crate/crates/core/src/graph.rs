//! Graphs as metric generators: ingestion, BFS all-pairs shortest paths,
//! the extremal example families, and small-corpus enumeration.

use std::collections::VecDeque;

use crate::metric::{Dist, MetricSpace, PointId};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("self loop at vertex {0}")]
    SelfLoop(PointId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(PointId, PointId),
    #[error("vertex {index} out of range for graph of size {n}")]
    VertexOutOfRange { index: usize, n: usize },
    #[error("malformed graph6 at byte {position}: {reason}")]
    MalformedGraph6 { position: usize, reason: String },
    #[error("malformed edge list: {0}")]
    MalformedEdgeList(String),
    #[error("graph is disconnected; one component is {0:?}")]
    Disconnected(Vec<PointId>),
    #[error("parameter {got} is below the minimum {min}")]
    ParamTooSmall { got: usize, min: usize },
    #[error("graph too large for this operation: {n}")]
    TooLarge { n: usize },
    #[error("walk is invalid: {0}")]
    BadWalk(String),
    #[error("precondition unmet: {0}")]
    PreconditionUnmet(String),
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
}

/// A simple undirected graph with sorted neighbour lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<PointId>>,
}

impl Graph {
    pub fn from_edges(
        n: usize,
        edges: impl IntoIterator<Item = (PointId, PointId)>,
    ) -> Result<Self, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { index: u.max(v), n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph { n, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbours(&self, v: PointId) -> &[PointId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: PointId) -> usize {
        self.adj[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|l| l.len()).sum::<usize>() / 2
    }

    pub fn has_edge(&self, u: PointId, v: PointId) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, lexicographic order.
    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// BFS distances from `start`; `None` for unreachable vertices.
    pub fn bfs(&self, start: PointId) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.n];
        dist[start] = Some(0);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v].expect("queued vertices have distances");
            for &u in &self.adj[v] {
                if dist[u].is_none() {
                    dist[u] = Some(dv + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// The component containing `start`, ascending.
    pub fn component_of(&self, start: PointId) -> Vec<PointId> {
        self.bfs(start)
            .iter()
            .enumerate()
            .filter_map(|(v, d)| d.map(|_| v))
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.bfs(0).iter().all(|d| d.is_some())
    }

    /// The shortest-path metric of a connected graph, scale 1.
    pub fn metric(&self) -> Result<MetricSpace, GraphError> {
        if self.n == 0 {
            return Err(GraphError::ParamTooSmall { got: 0, min: 1 });
        }
        let mut dist = vec![0u64; self.n * self.n];
        for v in 0..self.n {
            let row = self.bfs(v);
            for (u, d) in row.iter().enumerate() {
                match d {
                    Some(d) => dist[v * self.n + u] = *d as Dist,
                    None => return Err(GraphError::Disconnected(self.component_of(v))),
                }
            }
        }
        Ok(MetricSpace::from_valid_parts(self.n, 1, dist))
    }

    /// Standard graph6 encoding (63-offset ASCII, column-major upper
    /// triangle, 6 bits per byte, MSB first).
    pub fn to_graph6(&self) -> String {
        let mut out = Vec::new();
        if self.n <= 62 {
            out.push(self.n as u8 + 63);
        } else {
            // 18-bit size form, enough for every supported n
            out.push(126);
            let n = self.n as u32;
            out.push(((n >> 12) & 63) as u8 + 63);
            out.push(((n >> 6) & 63) as u8 + 63);
            out.push((n & 63) as u8 + 63);
        }
        let mut acc = 0u8;
        let mut nbits = 0;
        for j in 1..self.n {
            for i in 0..j {
                acc = (acc << 1) | u8::from(self.has_edge(i, j));
                nbits += 1;
                if nbits == 6 {
                    out.push(acc + 63);
                    acc = 0;
                    nbits = 0;
                }
            }
        }
        if nbits > 0 {
            out.push((acc << (6 - nbits)) + 63);
        }
        String::from_utf8(out).expect("graph6 bytes are ASCII")
    }

    /// Parses one graph6 line (optionally prefixed by the standard header).
    pub fn parse_graph6(line: &str) -> Result<Self, GraphError> {
        let line = line.trim();
        let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
        let bytes = line.as_bytes();
        if bytes.is_empty() {
            return Err(GraphError::MalformedGraph6 {
                position: 0,
                reason: "empty input".into(),
            });
        }
        let pos;
        let n: usize = if bytes[0] == 126 {
            if bytes.len() >= 2 && bytes[1] == 126 {
                return Err(GraphError::MalformedGraph6 {
                    position: 1,
                    reason: "36-bit sizes are not supported".into(),
                });
            }
            if bytes.len() < 4 {
                return Err(GraphError::MalformedGraph6 {
                    position: 0,
                    reason: "truncated size field".into(),
                });
            }
            let mut n = 0usize;
            for (k, &b) in bytes.iter().enumerate().take(4).skip(1) {
                if !(63..=126).contains(&b) {
                    return Err(GraphError::MalformedGraph6 {
                        position: k,
                        reason: format!("byte {b} outside graph6 range"),
                    });
                }
                n = (n << 6) | (b - 63) as usize;
            }
            pos = 4;
            n
        } else {
            let b = bytes[0];
            if !(63..=125).contains(&b) {
                return Err(GraphError::MalformedGraph6 {
                    position: 0,
                    reason: format!("byte {b} outside graph6 range"),
                });
            }
            pos = 1;
            (b - 63) as usize
        };
        if n > 4096 {
            return Err(GraphError::TooLarge { n });
        }
        let nbits = n * n.saturating_sub(1) / 2;
        let nbytes = nbits.div_ceil(6);
        if bytes.len() - pos != nbytes {
            return Err(GraphError::MalformedGraph6 {
                position: pos,
                reason: format!(
                    "expected {nbytes} body bytes for n = {n}, got {}",
                    bytes.len() - pos
                ),
            });
        }
        let mut bits = Vec::with_capacity(nbytes * 6);
        for (k, &b) in bytes[pos..].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(GraphError::MalformedGraph6 {
                    position: pos + k,
                    reason: format!("byte {b} outside graph6 range"),
                });
            }
            let v = b - 63;
            for shift in (0..6).rev() {
                bits.push(v >> shift & 1 == 1);
            }
        }
        let mut edges = Vec::new();
        let mut idx = 0;
        for j in 1..n {
            for i in 0..j {
                if bits[idx] {
                    edges.push((i, j));
                }
                idx += 1;
            }
        }
        Graph::from_edges(n, edges)
    }

    /// Parses "u v" pairs, one per line, 0-indexed; n is inferred.
    pub fn parse_edge_list(text: &str) -> Result<Self, GraphError> {
        let mut edges = Vec::new();
        let mut max = 0;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<usize, GraphError> {
                tok.ok_or_else(|| {
                    GraphError::MalformedEdgeList(format!("line {}: missing endpoint", ln + 1))
                })?
                .parse()
                .map_err(|e| GraphError::MalformedEdgeList(format!("line {}: {e}", ln + 1)))
            };
            let u: usize = parse(it.next())?;
            let v: usize = parse(it.next())?;
            if it.next().is_some() {
                return Err(GraphError::MalformedEdgeList(format!(
                    "line {}: trailing tokens",
                    ln + 1
                )));
            }
            max = max.max(u).max(v);
            edges.push((u, v));
        }
        if edges.is_empty() {
            return Err(GraphError::MalformedEdgeList("no edges".into()));
        }
        Graph::from_edges(max + 1, edges)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// JSON adjacency export: array of sorted neighbour lists.
    pub fn adjacency_json(&self) -> String {
        serde_json::to_string(&self.adj).expect("serialization cannot fail")
    }
}

pub fn gen_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::ParamTooSmall { got: n, min: 3 });
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}

pub fn gen_path(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::ParamTooSmall { got: n, min: 2 });
    }
    Graph::from_edges(n, (0..n - 1).map(|i| (i, i + 1)))
}

pub fn gen_complete(n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::ParamTooSmall { got: n, min: 2 });
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            edges.push((i, j));
        }
    }
    Graph::from_edges(n, edges)
}

/// Largest k with k³ ≤ n², i.e. ⌊n^{2/3}⌋, by exact integer search.
pub fn floor_n_pow_2_3(n: usize) -> usize {
    let target = (n as u128) * (n as u128);
    let mut k = 0u128;
    while (k + 1) * (k + 1) * (k + 1) <= target {
        k += 1;
    }
    k as usize
}

/// Complete k-partite graph on n vertices with k = ⌊n^{2/3}⌋ parts as even
/// as possible. Vertices are numbered part by part; larger parts first.
pub fn gen_complete_kpartite(n: usize) -> Result<Graph, GraphError> {
    if n < 4 {
        return Err(GraphError::ParamTooSmall { got: n, min: 4 });
    }
    let k = floor_n_pow_2_3(n);
    let base = n / k;
    let extra = n % k; // first `extra` parts get base+1 vertices
    let mut part_of = Vec::with_capacity(n);
    for p in 0..k {
        let size = if p < extra { base + 1 } else { base };
        part_of.extend(std::iter::repeat_n(p, size));
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if part_of[i] != part_of[j] {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// A path of length s³ with s² equal-spaced detours: for each 0 ≤ j < s²,
/// a path of s+1 edges (s interior vertices) joins v_{js} and v_{js+s}.
///
/// Path vertices come first (0..=s³), then detour interiors in increasing
/// j. Vertex count is s³ + 1 + s³.
pub fn gen_subdivided_path(s: usize) -> Result<Graph, GraphError> {
    if s < 2 {
        return Err(GraphError::ParamTooSmall { got: s, min: 2 });
    }
    // s = 12 already gives 3457 vertices, near the dense-matrix cap
    if s > 12 {
        return Err(GraphError::TooLarge { n: s });
    }
    let main = s * s * s + 1;
    let n = main + s * s * s;
    let mut edges = Vec::new();
    for i in 0..main - 1 {
        edges.push((i, i + 1));
    }
    let mut next = main;
    for j in 0..s * s {
        let from = j * s;
        let to = j * s + s;
        let mut prev = from;
        for _ in 0..s {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
        edges.push((prev, to));
    }
    Graph::from_edges(n, edges)
}

/// Given a walk from a to b with d(a,b) ≥ 2, finds an interior vertex u of
/// the walk with u ∉ O(a,b), by extracting an induced path inside the
/// walk's vertex set and scanning it. Existence is guaranteed for graph
/// metrics, so exhaustion is an internal error.
pub fn walk_intermediate_point(
    graph: &Graph,
    metric: &MetricSpace,
    walk: &[PointId],
) -> Result<PointId, GraphError> {
    if walk.len() < 2 {
        return Err(GraphError::BadWalk(
            "walk needs at least two vertices".into(),
        ));
    }
    for win in walk.windows(2) {
        if !graph.has_edge(win[0], win[1]) {
            return Err(GraphError::BadWalk(format!(
                "consecutive vertices {} and {} are not adjacent",
                win[0], win[1]
            )));
        }
    }
    let (a, b) = (walk[0], *walk.last().expect("nonempty"));
    if metric.dist(a, b) < 2 {
        return Err(GraphError::PreconditionUnmet(format!(
            "need d(a,b) >= 2, got {}",
            metric.dist(a, b)
        )));
    }
    // shortest path from a to b inside the walk's vertex set; shortest
    // paths are induced, and induced in the subgraph implies induced in G
    let mut inside = vec![false; graph.n()];
    for &v in walk {
        inside[v] = true;
    }
    let mut parent: Vec<Option<PointId>> = vec![None; graph.n()];
    let mut seen = vec![false; graph.n()];
    seen[a] = true;
    let mut queue = VecDeque::from([a]);
    while let Some(v) = queue.pop_front() {
        if v == b {
            break;
        }
        for &u in graph.neighbours(v) {
            if inside[u] && !seen[u] {
                seen[u] = true;
                parent[u] = Some(v);
                queue.push_back(u);
            }
        }
    }
    let mut path = vec![b];
    while let Some(p) = parent[*path.last().expect("nonempty")] {
        path.push(p);
    }
    path.reverse();
    if path[0] != a {
        return Err(GraphError::InternalInconsistency(
            "walk vertex set was not connected".into(),
        ));
    }
    for &u in &path[1..path.len() - 1] {
        let outer = metric.between(u, a, b) || metric.between(a, b, u);
        if !outer {
            return Ok(u);
        }
    }
    Err(GraphError::InternalInconsistency(
        "no interior vertex outside O(a,b); betweenness code is suspect".into(),
    ))
}

/// Recovers the graph whose shortest-path metric (at the space's scale)
/// equals the given space, when one exists: edges are the pairs at unit
/// distance, and the BFS metric must reproduce every entry.
pub fn is_graph_metric(m: &MetricSpace) -> Option<Graph> {
    let n = m.n();
    let unit = m.scale();
    if n == 1 {
        return Graph::from_edges(1, []).ok();
    }
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if m.dist(u, v) == unit {
                edges.push((u, v));
            }
        }
    }
    let g = Graph::from_edges(n, edges).ok()?;
    for v in 0..n {
        for (u, d) in g.bfs(v).into_iter().enumerate() {
            {
                let d = d?;
                if u64::from(d) * unit != m.dist(v, u) {
                    return None;
                }
            }
        }
    }
    Some(g)
}

pub mod enumerate {
    //! Isomorphism-free enumeration of small graphs by iterated vertex
    //! addition with canonical-form deduplication. Intended for building
    //! exhaustive desk-scale corpora (n ≤ 9 or so).

    use super::{Graph, GraphError};
    use std::collections::HashSet;

    /// Canonical key: the maximum upper-triangle bitstring over all vertex
    /// orderings consistent with non-increasing degree, found by branch
    /// and bound. Isomorphic graphs share the key.
    fn canonical_key(n: usize, rows: &[u16]) -> u64 {
        let degs: Vec<u32> = rows.iter().map(|r| r.count_ones()).collect();
        let mut best: Option<u64> = None;
        let mut perm: Vec<usize> = Vec::with_capacity(n);
        let mut used = vec![false; n];
        #[allow(clippy::too_many_arguments)]
        fn rec(
            n: usize,
            rows: &[u16],
            degs: &[u32],
            perm: &mut Vec<usize>,
            used: &mut Vec<bool>,
            acc: u64,
            bits: u32,
            best: &mut Option<u64>,
        ) {
            if perm.len() == n {
                if best.is_none_or(|b| acc > b) {
                    *best = Some(acc);
                }
                return;
            }
            let max_deg = (0..n)
                .filter(|&v| !used[v])
                .map(|v| degs[v])
                .max()
                .expect("candidates remain");
            for v in 0..n {
                if used[v] || degs[v] != max_deg {
                    continue;
                }
                let mut word = 0u64;
                for &u in perm.iter() {
                    word = (word << 1) | u64::from(rows[v] >> u & 1 == 1);
                }
                let new_bits = bits + perm.len() as u32;
                let new_acc = (acc << perm.len()) | word;
                // prune: compare against the best key's prefix
                if let Some(b) = *best {
                    let b_prefix = b >> (total_bits(n) - new_bits);
                    if new_acc < b_prefix {
                        continue;
                    }
                }
                used[v] = true;
                perm.push(v);
                rec(n, rows, degs, perm, used, new_acc, new_bits, best);
                perm.pop();
                used[v] = false;
            }
        }
        fn total_bits(n: usize) -> u32 {
            (n * (n - 1) / 2) as u32
        }
        if n <= 1 {
            return 0;
        }
        rec(n, rows, &degs, &mut perm, &mut used, 0, 0, &mut best);
        best.expect("at least one ordering exists")
    }

    fn rows_of_key(n: usize, key: u64) -> Vec<u16> {
        let mut rows = vec![0u16; n];
        let total = n * (n - 1) / 2;
        let mut idx = 0;
        // key bits are appended vertex by vertex: vertex k contributes its
        // adjacency to vertices 0..k, most significant first overall
        for k in 1..n {
            for u in 0..k {
                let bit = key >> (total - 1 - idx) & 1;
                if bit == 1 {
                    rows[k] |= 1 << u;
                    rows[u] |= 1 << k;
                }
                idx += 1;
            }
        }
        rows
    }

    /// All non-isomorphic graphs on exactly `n` vertices, as canonical
    /// keys in ascending order.
    fn graph_keys(n: usize) -> Vec<u64> {
        assert!(
            (1..=11).contains(&n),
            "enumeration supports 1..=11 vertices"
        );
        let mut level: HashSet<u64> = HashSet::new();
        level.insert(0); // the 1-vertex graph
        for k in 1..n {
            let mut next = HashSet::new();
            for &key in &level {
                let rows = rows_of_key(k, key);
                for nb in 0u32..(1 << k) {
                    let mut rows2: Vec<u16> = rows.clone();
                    rows2.push(0);
                    for u in 0..k {
                        if nb >> u & 1 == 1 {
                            rows2[k] |= 1 << u;
                            rows2[u] |= 1 << k;
                        }
                    }
                    next.insert(canonical_key(k + 1, &rows2));
                }
            }
            level = next;
        }
        let mut keys: Vec<u64> = level.into_iter().collect();
        keys.sort_unstable();
        keys
    }

    fn graph_of_rows(n: usize, rows: &[u16]) -> Graph {
        let mut edges = Vec::new();
        for (i, &row) in rows.iter().enumerate() {
            for j in (i + 1)..n {
                if row >> j & 1 == 1 {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(n, edges).expect("enumerated graphs are simple")
    }

    /// All connected graphs on exactly `n` vertices, one per isomorphism
    /// class, in a deterministic order.
    pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
        if n < 1 {
            return Err(GraphError::ParamTooSmall { got: n, min: 1 });
        }
        if n > 9 {
            return Err(GraphError::TooLarge { n });
        }
        Ok(graph_keys(n)
            .into_iter()
            .map(|key| graph_of_rows(n, &rows_of_key(n, key)))
            .filter(Graph::is_connected)
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_examples() {
        let g = Graph::parse_edge_list("0 1\n1 2\n2 3").unwrap();
        assert_eq!(g, gen_path(4).unwrap());
        assert_eq!(
            Graph::parse_edge_list("2 2").unwrap_err(),
            GraphError::SelfLoop(2)
        );
        assert_eq!(
            Graph::parse_edge_list("0 1\n1 0").unwrap_err(),
            GraphError::DuplicateEdge(0, 1)
        );
    }

    #[test]
    fn graph6_hand_checked_vectors() {
        // K4: size byte 'C', all six bits set = '~'
        assert_eq!(gen_complete(4).unwrap().to_graph6(), "C~");
        assert_eq!(Graph::parse_graph6("C~").unwrap(), gen_complete(4).unwrap());
        // K5: ten bits set, split 111111 | 1111(00) -> '~', '{'
        assert_eq!(gen_complete(5).unwrap().to_graph6(), "D~{");
        // empty graph on 5 vertices
        let empty5 = Graph::from_edges(5, []).unwrap();
        assert_eq!(empty5.to_graph6(), "D??");
        assert_eq!(Graph::parse_graph6("D??").unwrap(), empty5);
        // header is accepted
        assert_eq!(
            Graph::parse_graph6(">>graph6<<C~").unwrap(),
            gen_complete(4).unwrap()
        );
    }

    #[test]
    fn graph6_round_trip_families() {
        for g in [
            gen_cycle(5).unwrap(),
            gen_path(7).unwrap(),
            gen_complete(6).unwrap(),
            gen_complete_kpartite(12).unwrap(),
            gen_subdivided_path(2).unwrap(),
            Graph::from_edges(70, (0..69).map(|i| (i, i + 1))).unwrap(), // long-size form
        ] {
            let enc = g.to_graph6();
            assert_eq!(Graph::parse_graph6(&enc).unwrap(), g, "round trip {enc}");
        }
    }

    #[test]
    fn graph6_malformed_inputs() {
        assert!(matches!(
            Graph::parse_graph6("").unwrap_err(),
            GraphError::MalformedGraph6 { .. }
        ));
        assert!(matches!(
            Graph::parse_graph6("C~~").unwrap_err(),
            GraphError::MalformedGraph6 { .. }
        ));
        assert!(matches!(
            Graph::parse_graph6("C\x1f").unwrap_err(),
            GraphError::MalformedGraph6 { .. }
        ));
    }

    #[test]
    fn metric_families() {
        let c5 = gen_cycle(5).unwrap().metric().unwrap();
        assert_eq!(c5.dist(0, 1), 1);
        assert_eq!(c5.dist(0, 2), 2);
        let k4 = gen_complete(4).unwrap().metric().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(k4.dist(i, j), u64::from(i != j));
            }
        }
        let p4 = gen_path(4).unwrap().metric().unwrap();
        for i in 0..4usize {
            for j in 0..4usize {
                assert_eq!(p4.dist(i, j), (i as i64 - j as i64).unsigned_abs());
            }
        }
    }

    #[test]
    fn disconnected_graph_has_no_metric() {
        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(
            g.metric().unwrap_err(),
            GraphError::Disconnected(vec![0, 1])
        );
    }

    #[test]
    fn kpartite_part_sizes() {
        // ⌊8^{2/3}⌋ = 4 parts of (2,2,2,2)
        assert_eq!(floor_n_pow_2_3(8), 4);
        // ⌊27^{2/3}⌋ = 9 parts of 3
        assert_eq!(floor_n_pow_2_3(27), 9);
        // ⌊12^{2/3}⌋ = 5 parts of (3,3,2,2,2)
        assert_eq!(floor_n_pow_2_3(12), 5);

        let g = gen_complete_kpartite(12).unwrap();
        assert_eq!(g.n(), 12);
        // non-edges define the parts: count part sizes via complement components
        let mut part_sizes = Vec::new();
        let mut seen = [false; 12];
        for v in 0..12 {
            if seen[v] {
                continue;
            }
            let same: Vec<usize> = (0..12).filter(|&u| u == v || !g.has_edge(u, v)).collect();
            for &u in &same {
                seen[u] = true;
            }
            part_sizes.push(same.len());
        }
        part_sizes.sort_unstable();
        assert_eq!(part_sizes, vec![2, 2, 2, 3, 3]);
    }

    #[test]
    fn subdivided_path_structure() {
        let g = gen_subdivided_path(2).unwrap();
        assert_eq!(g.n(), 17); // 2³+1 main vertices plus 2²·2 detour interiors
        assert!(g.is_connected());
        // attachment points v_0, v_2, ..., v_8 carry the extra degree
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(2), 4);
        assert_eq!(g.degree(8), 2);
        assert_eq!(g.degree(1), 2);

        let g3 = gen_subdivided_path(3).unwrap();
        assert_eq!(g3.n(), 55);
    }

    #[test]
    fn walk_intermediate_point_examples() {
        let p4 = gen_path(4).unwrap();
        let m = p4.metric().unwrap();
        let u = walk_intermediate_point(&p4, &m, &[0, 1, 2, 3]).unwrap();
        assert!(u == 1 || u == 2);
        assert!(!m.between(u, 0, 3) && !m.between(0, 3, u));

        let c6 = gen_cycle(6).unwrap();
        let m6 = c6.metric().unwrap();
        let u = walk_intermediate_point(&c6, &m6, &[0, 5, 4, 3, 2]).unwrap();
        assert!([5, 4, 3].contains(&u));
        assert!(!m6.between(u, 0, 2) && !m6.between(0, 2, u));

        let c5 = gen_cycle(5).unwrap();
        let m5 = c5.metric().unwrap();
        let u = walk_intermediate_point(&c5, &m5, &[0, 4, 3, 2]).unwrap();
        assert!([4, 3].contains(&u));

        assert!(matches!(
            walk_intermediate_point(&c5, &m5, &[0, 1]).unwrap_err(),
            GraphError::PreconditionUnmet(_)
        ));
        assert!(matches!(
            walk_intermediate_point(&c5, &m5, &[0, 2]).unwrap_err(),
            GraphError::BadWalk(_)
        ));
    }

    #[test]
    fn enumeration_matches_known_connected_counts() {
        // classical values: connected graphs on 1..=7 vertices
        let expect = [1usize, 1, 2, 6, 21, 112, 853];
        for (i, &count) in expect.iter().enumerate() {
            let n = i + 1;
            let graphs = enumerate::connected_graphs(n).unwrap();
            assert_eq!(graphs.len(), count, "connected graphs on {n} vertices");
            for g in &graphs {
                assert!(g.is_connected());
                assert_eq!(g.n(), n);
            }
        }
    }
}
