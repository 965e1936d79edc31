//! Finite metric spaces with exact integer distances.
//!
//! All distances are stored as pre-scaled non-negative integers so that the
//! betweenness predicate `d(a,c) == d(a,b) + d(b,c)` is an exact equality
//! test. No floating point is used anywhere in this module.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::betweenness::BetweennessRelation;
use crate::space::Betweenness;

/// Index of a point inside a space of known size.
pub type PointId = usize;

/// A scaled, exact distance value.
pub type Dist = u64;

/// Default cap on the number of points (line enumeration is cubic).
pub const DEFAULT_MAX_POINTS: usize = 4096;

/// Cap on individual distance entries so sums never overflow `u64`.
pub const MAX_DISTANCE: Dist = 1 << 40;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MetricError {
    #[error("distance matrix has no rows")]
    Empty,
    #[error("matrix is not square: row {row} has length {got}, expected {expected}")]
    NotSquare {
        row: usize,
        expected: usize,
        got: usize,
    },
    #[error("space has {n} points, cap is {cap}")]
    TooManyPoints { n: usize, cap: usize },
    #[error("scale must be positive")]
    ZeroScale,
    #[error("negative entry at ({i},{j})")]
    NegativeEntry { i: usize, j: usize },
    #[error("distance at ({i},{j}) exceeds the supported maximum")]
    DistanceTooLarge { i: usize, j: usize },
    #[error("nonzero diagonal entry at point {i}")]
    NonZeroDiagonal { i: usize },
    #[error("matrix is asymmetric at ({i},{j})")]
    Asymmetric { i: usize, j: usize },
    #[error("off-diagonal entry at ({i},{j}) is not positive")]
    NonPositiveOffDiagonal { i: usize, j: usize },
    #[error("triangle inequality violated: d({i},{k}) > d({i},{j}) + d({j},{k})")]
    TriangleViolation { i: usize, j: usize, k: usize },
    #[error("operation needs at least {needed} points, space has {n}")]
    TooFewPoints { n: usize, needed: usize },
    #[error("two of the given points coincide")]
    DuplicatePoint,
    #[error("subset of points is empty")]
    EmptySubset,
    #[error("point index {index} out of range for space of size {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("malformed input: {0}")]
    Parse(String),
}

/// A finite metric space: `n` points and an exact symmetric distance matrix.
///
/// Immutable after construction; all queries are pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricSpace {
    n: usize,
    scale: u64,
    dist: Vec<Dist>,
}

#[derive(Serialize, Deserialize)]
struct MetricSpaceJson {
    n: usize,
    scale: u64,
    dist: Vec<Vec<Dist>>,
}

impl MetricSpace {
    /// Validates a raw square matrix and builds the space.
    ///
    /// `scale` records the common denominator applied at ingestion (rational
    /// inputs are expected to be pre-multiplied by it).
    pub fn from_matrix(rows: &[Vec<i64>], scale: u64) -> Result<Self, MetricError> {
        Self::from_matrix_with_cap(rows, scale, DEFAULT_MAX_POINTS)
    }

    pub fn from_matrix_with_cap(
        rows: &[Vec<i64>],
        scale: u64,
        cap: usize,
    ) -> Result<Self, MetricError> {
        if scale == 0 {
            return Err(MetricError::ZeroScale);
        }
        let n = rows.len();
        if n == 0 {
            return Err(MetricError::Empty);
        }
        if n > cap {
            return Err(MetricError::TooManyPoints { n, cap });
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MetricError::NotSquare {
                    row: i,
                    expected: n,
                    got: row.len(),
                });
            }
        }
        let mut dist = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                let v = rows[i][j];
                if v < 0 {
                    return Err(MetricError::NegativeEntry { i, j });
                }
                let v = v as u64;
                if v > MAX_DISTANCE {
                    return Err(MetricError::DistanceTooLarge { i, j });
                }
                dist[i * n + j] = v;
            }
        }
        let space = MetricSpace { n, scale, dist };
        space.check_axioms()?;
        Ok(space)
    }

    /// Builds a space from distances known a priori to be a metric
    /// (e.g. BFS shortest paths). Axioms are debug-asserted only.
    pub(crate) fn from_valid_parts(n: usize, scale: u64, dist: Vec<Dist>) -> Self {
        debug_assert_eq!(dist.len(), n * n);
        let space = MetricSpace { n, scale, dist };
        debug_assert!(space.check_axioms().is_ok());
        space
    }

    fn check_axioms(&self) -> Result<(), MetricError> {
        let n = self.n;
        for i in 0..n {
            if self.dist(i, i) != 0 {
                return Err(MetricError::NonZeroDiagonal { i });
            }
            for j in (i + 1)..n {
                if self.dist(i, j) != self.dist(j, i) {
                    return Err(MetricError::Asymmetric { i, j });
                }
                if self.dist(i, j) == 0 {
                    return Err(MetricError::NonPositiveOffDiagonal { i, j });
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if j == i {
                    continue;
                }
                let dij = self.dist(i, j);
                for k in 0..n {
                    if self.dist(i, k) > dij + self.dist(j, k) {
                        return Err(MetricError::TriangleViolation { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scale(&self) -> u64 {
        self.scale
    }

    /// Exact distance between two points.
    #[inline]
    pub fn dist(&self, a: PointId, b: PointId) -> Dist {
        debug_assert!(a < self.n && b < self.n);
        self.dist[a * self.n + b]
    }

    fn check_index(&self, p: PointId) -> Result<(), MetricError> {
        if p >= self.n {
            return Err(MetricError::IndexOutOfRange {
                index: p,
                n: self.n,
            });
        }
        Ok(())
    }

    /// `[abc]`: b lies between a and c. False whenever two arguments coincide.
    #[inline]
    pub fn between(&self, a: PointId, b: PointId, c: PointId) -> bool {
        if a == b || b == c || a == c {
            return false;
        }
        self.dist(a, c) == self.dist(a, b) + self.dist(b, c)
    }

    /// True iff one of `[abc]`, `[bca]`, `[cab]` holds.
    pub fn collinear(&self, a: PointId, b: PointId, c: PointId) -> Result<bool, MetricError> {
        self.check_index(a)?;
        self.check_index(b)?;
        self.check_index(c)?;
        if a == b || b == c || a == c {
            return Err(MetricError::DuplicatePoint);
        }
        Ok(self.between(a, b, c) || self.between(b, c, a) || self.between(c, a, b))
    }

    /// Maximum distance, with a witnessing pair (least indices win ties).
    pub fn diameter(&self) -> Result<(Dist, (PointId, PointId)), MetricError> {
        if self.n < 2 {
            return Err(MetricError::TooFewPoints {
                n: self.n,
                needed: 2,
            });
        }
        let mut best = (0, (0, 1));
        for a in 0..self.n {
            for b in (a + 1)..self.n {
                if self.dist(a, b) > best.0 {
                    best = (self.dist(a, b), (a, b));
                }
            }
        }
        // d(0,1) > 0 on any valid space with n >= 2
        Ok(best)
    }

    /// The sorted set W of distances occurring in the space, 0 included.
    pub fn distance_set(&self) -> Vec<Dist> {
        let mut values: Vec<Dist> = self.dist.clone();
        values.sort_unstable();
        values.dedup();
        values
    }

    /// Restriction of the space to `points`, re-indexed. The returned map
    /// gives the original id of each new point.
    pub fn subspace(&self, points: &[PointId]) -> Result<Subspace, MetricError> {
        if points.is_empty() {
            return Err(MetricError::EmptySubset);
        }
        let mut original: Vec<PointId> = points.to_vec();
        original.sort_unstable();
        original.dedup();
        for &p in &original {
            self.check_index(p)?;
        }
        let m = original.len();
        let mut dist = vec![0; m * m];
        for i in 0..m {
            for j in 0..m {
                dist[i * m + j] = self.dist(original[i], original[j]);
            }
        }
        Ok(Subspace {
            space: MetricSpace {
                n: m,
                scale: self.scale,
                dist,
            },
            original,
        })
    }

    /// The metric betweenness induced by this space.
    pub fn induced_betweenness(&self) -> BetweennessRelation {
        let mut triples = Vec::new();
        for a in 0..self.n {
            for c in (a + 1)..self.n {
                for b in 0..self.n {
                    if self.between(a, b, c) {
                        triples.push((a, b, c));
                    }
                }
            }
        }
        BetweennessRelation::from_triples(self.n, triples)
            .expect("metric betweenness always satisfies the axioms")
    }

    pub fn to_json(&self) -> String {
        let shim = MetricSpaceJson {
            n: self.n,
            scale: self.scale,
            dist: (0..self.n)
                .map(|i| self.dist[i * self.n..(i + 1) * self.n].to_vec())
                .collect(),
        };
        serde_json::to_string(&shim).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, MetricError> {
        let shim: MetricSpaceJson =
            serde_json::from_str(text).map_err(|e| MetricError::Parse(e.to_string()))?;
        if shim.dist.len() != shim.n {
            return Err(MetricError::Parse(format!(
                "matrix has {} rows but n = {}",
                shim.dist.len(),
                shim.n
            )));
        }
        let rows: Vec<Vec<i64>> = shim
            .dist
            .iter()
            .map(|row| row.iter().map(|&v| v as i64).collect())
            .collect();
        Self::from_matrix(&rows, shim.scale)
    }

    /// Parses `n` rows of `n` comma-separated integers.
    pub fn from_csv(reader: impl BufRead, scale: u64) -> Result<Self, MetricError> {
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for line in reader.lines() {
            let line = line.map_err(|e| MetricError::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<i64>()
                        .map_err(|e| MetricError::Parse(format!("bad entry {tok:?}: {e}")))
                })
                .collect::<Result<Vec<i64>, _>>()?;
            rows.push(row);
        }
        Self::from_matrix(&rows, scale)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let row: Vec<String> = (0..self.n).map(|j| self.dist(i, j).to_string()).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// A subspace together with the map back to the parent's point ids.
#[derive(Debug, Clone)]
pub struct Subspace {
    pub space: MetricSpace,
    pub original: Vec<PointId>,
}

impl Betweenness for MetricSpace {
    fn point_count(&self) -> usize {
        self.n
    }

    fn between(&self, a: PointId, b: PointId, c: PointId) -> bool {
        MetricSpace::between(self, a, b, c)
    }

    fn distance(&self, a: PointId, b: PointId) -> Option<Dist> {
        Some(self.dist(a, b))
    }
}
