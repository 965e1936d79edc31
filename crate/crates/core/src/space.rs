//! The shared substrate for line computation: anything that answers
//! betweenness queries over indexed points.

use crate::metric::{Dist, PointId};

/// A ternary betweenness oracle on points `0..point_count()`.
///
/// Implemented by [`crate::metric::MetricSpace`] (exact distance equality)
/// and [`crate::betweenness::BetweennessRelation`] (stored triples). Both
/// are immutable, so implementations must be pure.
pub trait Betweenness {
    fn point_count(&self) -> usize;

    /// `[abc]`: b lies between a and c. Must be false whenever two
    /// arguments coincide and symmetric under reversal.
    fn between(&self, a: PointId, b: PointId, c: PointId) -> bool;

    /// Exact distance, when the substrate carries one (metric input only).
    fn distance(&self, _a: PointId, _b: PointId) -> Option<Dist> {
        None
    }

    /// True iff one of `[abc]`, `[bca]`, `[cab]` holds.
    fn collinear_triple(&self, a: PointId, b: PointId, c: PointId) -> bool {
        self.between(a, b, c) || self.between(b, c, a) || self.between(c, a, b)
    }
}

impl<T: Betweenness + ?Sized> Betweenness for &T {
    fn point_count(&self) -> usize {
        (**self).point_count()
    }

    fn between(&self, a: PointId, b: PointId, c: PointId) -> bool {
        (**self).between(a, b, c)
    }

    fn distance(&self, a: PointId, b: PointId) -> Option<Dist> {
        (**self).distance(a, b)
    }
}
