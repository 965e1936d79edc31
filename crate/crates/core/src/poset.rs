//! The poset anchored at a point: x ≼ y iff x = y or [axy]. Antisymmetry
//! comes from M2 and transitivity from M3, so violations on validated
//! input are internal errors, not user errors.

use crate::metric::PointId;
use crate::space::Betweenness;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("anchor {index} out of range for {n} points")]
    AnchorOutOfRange { index: usize, n: usize },
}

#[derive(Debug, Clone)]
pub struct AnchoredPoset {
    anchor: PointId,
    elements: Vec<PointId>,
    /// local: le[i * m + j] ⇔ elements[i] ≼ elements[j]
    le: Vec<bool>,
}

impl AnchoredPoset {
    /// Poset on all points except the anchor.
    pub fn anchored_at<S: Betweenness>(s: &S, anchor: PointId) -> Result<Self, PosetError> {
        let n = s.point_count();
        if anchor >= n {
            return Err(PosetError::AnchorOutOfRange { index: anchor, n });
        }
        let ground: Vec<PointId> = (0..n).filter(|&p| p != anchor).collect();
        Self::over_subset(s, anchor, &ground)
    }

    /// Poset on a chosen subset of points (the anchor must not belong).
    pub fn over_subset<S: Betweenness>(
        s: &S,
        anchor: PointId,
        ground: &[PointId],
    ) -> Result<Self, PosetError> {
        let mut elements: Vec<PointId> = ground.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let m = elements.len();
        let mut le = vec![false; m * m];
        for i in 0..m {
            for j in 0..m {
                le[i * m + j] = i == j || s.between(anchor, elements[i], elements[j]);
            }
        }
        let poset = AnchoredPoset {
            anchor,
            elements,
            le,
        };
        poset.check_laws()?;
        Ok(poset)
    }

    fn check_laws(&self) -> Result<(), PosetError> {
        let m = self.elements.len();
        for i in 0..m {
            for j in 0..m {
                if i != j && self.le[i * m + j] && self.le[j * m + i] {
                    return Err(PosetError::InternalInconsistency(format!(
                        "antisymmetry fails on points {} and {}",
                        self.elements[i], self.elements[j]
                    )));
                }
                if !self.le[i * m + j] {
                    continue;
                }
                for k in 0..m {
                    if self.le[j * m + k] && !self.le[i * m + k] {
                        return Err(PosetError::InternalInconsistency(format!(
                            "transitivity fails on points {}, {}, {}",
                            self.elements[i], self.elements[j], self.elements[k]
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Construction for witness searches on already-validated substrates:
    /// the poset laws hold by the axioms, so they are only debug-checked.
    pub(crate) fn for_witness<S: Betweenness>(s: &S, anchor: PointId) -> Self {
        let n = s.point_count();
        let ground: Vec<PointId> = (0..n).filter(|&p| p != anchor).collect();
        Self::for_witness_over(s, anchor, &ground)
    }

    pub(crate) fn for_witness_over<S: Betweenness>(
        s: &S,
        anchor: PointId,
        ground: &[PointId],
    ) -> Self {
        let mut elements: Vec<PointId> = ground.to_vec();
        elements.sort_unstable();
        elements.dedup();
        let m = elements.len();
        let mut le = vec![false; m * m];
        for i in 0..m {
            for j in 0..m {
                le[i * m + j] = i == j || s.between(anchor, elements[i], elements[j]);
            }
        }
        let poset = AnchoredPoset {
            anchor,
            elements,
            le,
        };
        debug_assert!(poset.check_laws().is_ok());
        poset
    }

    /// A large antichain for witness extraction: the maximum one when the
    /// ground set is small, otherwise the biggest level of the minimal-
    /// element peeling (still within a √m factor by Mirsky's bound).
    pub(crate) fn large_antichain(&self) -> Vec<PointId> {
        const EXACT_CAP: usize = 64;
        if self.elements.len() <= EXACT_CAP {
            return self.max_antichain();
        }
        let m = self.elements.len();
        let mut pred_count: Vec<usize> = (0..m)
            .map(|j| (0..m).filter(|&i| i != j && self.le[i * m + j]).count())
            .collect();
        let mut removed = vec![false; m];
        let mut best: Vec<usize> = Vec::new();
        let mut left = m;
        while left > 0 {
            let level: Vec<usize> = (0..m)
                .filter(|&j| !removed[j] && pred_count[j] == 0)
                .collect();
            if level.len() > best.len() {
                best = level.clone();
            }
            for &j in &level {
                removed[j] = true;
                for k in 0..m {
                    if k != j && !removed[k] && self.le[j * m + k] {
                        pred_count[k] -= 1;
                    }
                }
            }
            left -= level.len();
        }
        best.into_iter().map(|i| self.elements[i]).collect()
    }

    pub fn anchor(&self) -> PointId {
        self.anchor
    }

    pub fn elements(&self) -> &[PointId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// x ≼ y by point id. Panics if either point is not in the ground set.
    pub fn le(&self, x: PointId, y: PointId) -> bool {
        let i = self.local(x);
        let j = self.local(y);
        self.le[i * self.elements.len() + j]
    }

    fn local(&self, p: PointId) -> usize {
        self.elements
            .binary_search(&p)
            .expect("point belongs to the poset")
    }

    fn comparable_local(&self, i: usize, j: usize) -> bool {
        let m = self.elements.len();
        self.le[i * m + j] || self.le[j * m + i]
    }

    /// A maximum chain, in poset order. Deterministic: the least starting
    /// point among maximum chains, then least continuation at each step.
    pub fn max_chain(&self) -> Vec<PointId> {
        let m = self.elements.len();
        if m == 0 {
            return Vec::new();
        }
        // tail[i]: longest chain starting at i
        let mut tail = vec![1usize; m];
        let mut order: Vec<usize> = (0..m).collect();
        let succs: Vec<usize> = (0..m)
            .map(|i| (0..m).filter(|&j| j != i && self.le[i * m + j]).count())
            .collect();
        order.sort_by_key(|&i| succs[i]);
        for &i in &order {
            for j in 0..m {
                if j != i && self.le[i * m + j] {
                    tail[i] = tail[i].max(tail[j] + 1);
                }
            }
        }
        let target = *tail.iter().max().expect("nonempty");
        let mut chain = Vec::with_capacity(target);
        let mut current = (0..m)
            .find(|&i| tail[i] == target)
            .expect("some element starts a maximum chain");
        chain.push(self.elements[current]);
        while chain.len() < target {
            let next = (0..m)
                .find(|&j| {
                    j != current && self.le[current * m + j] && tail[j] == target - chain.len()
                })
                .expect("chain extends to full length");
            chain.push(self.elements[next]);
            current = next;
        }
        chain
    }

    /// Size of a maximum antichain, via minimum chain cover (Kuhn matching
    /// on the strict order, König by duality) restricted to `keep`.
    fn max_antichain_size(&self, keep: &[usize]) -> usize {
        let m = self.elements.len();
        let k = keep.len();
        if k == 0 {
            return 0;
        }
        let pos: Vec<Option<usize>> = {
            let mut pos = vec![None; m];
            for (idx, &i) in keep.iter().enumerate() {
                pos[i] = Some(idx);
            }
            pos
        };
        let adj: Vec<Vec<usize>> = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .filter(|&&j| j != i && self.le[i * m + j])
                    .map(|&j| pos[j].expect("kept"))
                    .collect()
            })
            .collect();
        let mut matched_to: Vec<Option<usize>> = vec![None; k];
        fn try_augment(
            v: usize,
            adj: &[Vec<usize>],
            used: &mut [bool],
            matched_to: &mut [Option<usize>],
        ) -> bool {
            for &to in &adj[v] {
                if used[to] {
                    continue;
                }
                used[to] = true;
                if matched_to[to].is_none()
                    || try_augment(matched_to[to].expect("checked"), adj, used, matched_to)
                {
                    matched_to[to] = Some(v);
                    return true;
                }
            }
            false
        }
        let mut matching = 0;
        for v in 0..k {
            let mut used = vec![false; k];
            if try_augment(v, &adj, &mut used, &mut matched_to) {
                matching += 1;
            }
        }
        k - matching
    }

    /// A maximum antichain: the lexicographically least such point set,
    /// found by greedy inclusion with exact feasibility checks.
    pub fn max_antichain(&self) -> Vec<PointId> {
        let m = self.elements.len();
        let all: Vec<usize> = (0..m).collect();
        let target = self.max_antichain_size(&all);
        let mut chosen: Vec<usize> = Vec::new();
        for v in 0..m {
            if chosen.iter().any(|&c| self.comparable_local(c, v)) {
                continue;
            }
            let pool: Vec<usize> = ((v + 1)..m)
                .filter(|&u| {
                    !self.comparable_local(u, v)
                        && chosen.iter().all(|&c| !self.comparable_local(c, u))
                })
                .collect();
            if chosen.len() + 1 + self.max_antichain_size(&pool) >= target {
                chosen.push(v);
                if chosen.len() == target {
                    break;
                }
            }
        }
        debug_assert_eq!(chosen.len(), target);
        chosen.into_iter().map(|i| self.elements[i]).collect()
    }

    /// Maximum chain and maximum antichain together. One of them covers
    /// at least ⌈√m⌉ elements, which is asserted.
    pub fn dilworth_decompose(&self) -> (Vec<PointId>, Vec<PointId>) {
        let chain = self.max_chain();
        let antichain = self.max_antichain();
        let m = self.elements.len();
        let mut root = 0usize;
        while (root + 1) * (root + 1) <= m {
            root += 1;
        }
        let ceil_sqrt = if root * root == m { root } else { root + 1 };
        assert!(
            chain.len().max(antichain.len()) >= ceil_sqrt,
            "Dilworth guarantees a chain or antichain of size ceil(sqrt(m))"
        );
        (chain, antichain)
    }

    /// Minimum number of antichains covering the ground set, by iterated
    /// removal of minimal elements. Equals the longest chain length.
    pub fn antichain_cover_size(&self) -> usize {
        let m = self.elements.len();
        let mut removed = vec![false; m];
        let mut levels = 0;
        let mut left = m;
        while left > 0 {
            let minimal: Vec<usize> = (0..m)
                .filter(|&j| {
                    !removed[j] && (0..m).all(|i| i == j || removed[i] || !self.le[i * m + j])
                })
                .collect();
            for &j in &minimal {
                removed[j] = true;
            }
            left -= minimal.len();
            levels += 1;
        }
        levels
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::betweenness::BetweennessRelation;
    use crate::graph::{gen_complete, gen_cycle, gen_path};

    #[test]
    fn p4_anchored_at_zero_is_a_chain() {
        let m = gen_path(4).unwrap().metric().unwrap();
        let poset = AnchoredPoset::anchored_at(&m, 0).unwrap();
        assert_eq!(poset.elements(), &[1, 2, 3]);
        assert!(poset.le(1, 2) && poset.le(2, 3) && poset.le(1, 3));
        assert!(!poset.le(2, 1));
        assert_eq!(poset.max_chain(), vec![1, 2, 3]);
        assert_eq!(poset.max_antichain(), vec![1]);
    }

    #[test]
    fn k4_anchored_is_an_antichain() {
        let m = gen_complete(4).unwrap().metric().unwrap();
        for a in 0..4 {
            let poset = AnchoredPoset::anchored_at(&m, a).unwrap();
            assert_eq!(poset.max_chain().len(), 1);
            assert_eq!(poset.max_antichain().len(), 3);
        }
    }

    #[test]
    fn c5_anchored_at_zero() {
        let m = gen_cycle(5).unwrap().metric().unwrap();
        let poset = AnchoredPoset::anchored_at(&m, 0).unwrap();
        let mut pairs = Vec::new();
        for &x in poset.elements() {
            for &y in poset.elements() {
                if x != y && poset.le(x, y) {
                    pairs.push((x, y));
                }
            }
        }
        assert_eq!(pairs, vec![(1, 2), (4, 3)]);
    }

    fn total_order(k: usize) -> AnchoredPoset {
        // P_{k+1} anchored at 0 gives the chain 1 < 2 < ... < k
        let m = gen_path(k + 1).unwrap().metric().unwrap();
        AnchoredPoset::anchored_at(&m, 0).unwrap()
    }

    #[test]
    fn dilworth_trivial_shapes() {
        let chain4 = total_order(4);
        let (chain, antichain) = chain4.dilworth_decompose();
        assert_eq!(chain.len(), 4);
        assert_eq!(antichain.len(), 1);

        let m = gen_complete(5).unwrap().metric().unwrap();
        let empty4 = AnchoredPoset::anchored_at(&m, 0).unwrap();
        let (chain, antichain) = empty4.dilworth_decompose();
        assert_eq!(chain.len(), 1);
        assert_eq!(antichain, vec![1, 2, 3, 4]);
    }

    #[test]
    fn dilworth_two_disjoint_two_chains() {
        // relation on {0..4}: [012] and [034] give two 2-chains under anchor 0
        let rel = BetweennessRelation::from_triples(5, [(0, 1, 2), (0, 3, 4)]).unwrap();
        let poset = AnchoredPoset::anchored_at(&rel, 0).unwrap();
        let (chain, antichain) = poset.dilworth_decompose();
        assert_eq!(chain.len(), 2);
        assert_eq!(chain, vec![1, 2]);
        assert_eq!(antichain.len(), 2);
        assert_eq!(antichain, vec![1, 3]);
    }

    #[test]
    fn mirsky_duality_on_small_posets() {
        // chain length equals minimum antichain cover size
        for g in [
            gen_path(8).unwrap(),
            gen_cycle(7).unwrap(),
            gen_cycle(8).unwrap(),
            gen_complete(6).unwrap(),
        ] {
            let m = g.metric().unwrap();
            for a in 0..m.n() {
                let poset = AnchoredPoset::anchored_at(&m, a).unwrap();
                assert_eq!(poset.max_chain().len(), poset.antichain_cover_size());
            }
        }
    }

    #[test]
    fn chain_is_chain_and_antichain_is_antichain() {
        for g in [gen_cycle(6).unwrap(), gen_path(7).unwrap()] {
            let m = g.metric().unwrap();
            for a in 0..m.n() {
                let poset = AnchoredPoset::anchored_at(&m, a).unwrap();
                let (chain, antichain) = poset.dilworth_decompose();
                for w in chain.windows(2) {
                    assert!(poset.le(w[0], w[1]));
                }
                for (i, &x) in antichain.iter().enumerate() {
                    for &y in &antichain[i + 1..] {
                        assert!(!poset.le(x, y) && !poset.le(y, x));
                    }
                }
            }
        }
    }
}
