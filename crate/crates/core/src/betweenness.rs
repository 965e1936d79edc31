//! Pseudometric betweenness relations as first-class objects.
//!
//! A relation stores each reversal orbit once, oriented with the smaller
//! endpoint first, so the reversal axiom is structural. Validation checks
//! distinctness (M0), middle exclusivity (M2) and inner transitivity (M3);
//! a triple `[abc]` with middle b is stored as `(min(a,c), b, max(a,c))`.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::metric::PointId;
use crate::space::Betweenness;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AxiomViolation {
    #[error("triple ({0}, {1}, {2}) repeats a point")]
    M0(PointId, PointId, PointId),
    #[error("triple ({index}, ..) references a point >= {n}")]
    OutOfRange { index: PointId, n: usize },
    #[error("middle swap: [{0} {1} {2}] and [{1} {0} {2}] both present")]
    M2(PointId, PointId, PointId),
    #[error("inner transitivity fails on [{0} {1} {2}] and [{0} {2} {3}]")]
    M3(PointId, PointId, PointId, PointId),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BetweennessError {
    #[error("sequence repeats a point")]
    DuplicateInSequence,
    #[error("point index {index} out of range for relation on {n} points")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("operation needs at least {needed} points, got {got}")]
    TooFewPoints { got: usize, needed: usize },
    #[error("enumeration supports at most 5 points, got {0}")]
    NTooLarge(usize),
    #[error("malformed input: {0}")]
    Parse(String),
}

fn canon(a: PointId, b: PointId, c: PointId) -> (PointId, PointId, PointId) {
    (a.min(c), b, a.max(c))
}

/// A validated pseudometric betweenness relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BetweennessRelation {
    n: usize,
    triples: BTreeSet<(PointId, PointId, PointId)>,
}

#[derive(Serialize, Deserialize)]
struct RelationJson {
    n: usize,
    triples: Vec<(PointId, PointId, PointId)>,
}

impl BetweennessRelation {
    /// Validates a raw triple set (reversals implied) against M0–M3.
    pub fn from_triples(
        n: usize,
        raw: impl IntoIterator<Item = (PointId, PointId, PointId)>,
    ) -> Result<Self, AxiomViolation> {
        let mut triples = BTreeSet::new();
        for (a, b, c) in raw {
            for p in [a, b, c] {
                if p >= n {
                    return Err(AxiomViolation::OutOfRange { index: p, n });
                }
            }
            if a == b || b == c || a == c {
                return Err(AxiomViolation::M0(a, b, c));
            }
            triples.insert(canon(a, b, c));
        }
        let rel = BetweennessRelation { n, triples };
        rel.check_m2()?;
        rel.check_m3()?;
        Ok(rel)
    }

    fn check_m2(&self) -> Result<(), AxiomViolation> {
        for &(a, b, c) in &self.triples {
            // same 3-set may carry only one middle
            if self.triples.contains(&canon(b, a, c)) {
                return Err(AxiomViolation::M2(a, b, c));
            }
            if self.triples.contains(&canon(b, c, a)) {
                return Err(AxiomViolation::M2(c, b, a));
            }
        }
        Ok(())
    }

    fn check_m3(&self) -> Result<(), AxiomViolation> {
        let oriented: Vec<(PointId, PointId, PointId)> = self
            .triples
            .iter()
            .flat_map(|&(a, b, c)| [(a, b, c), (c, b, a)])
            .collect();
        for &(a, b, c) in &oriented {
            for d in 0..self.n {
                if d == a || d == b || d == c {
                    continue;
                }
                if self.between(a, c, d) && !(self.between(a, b, d) && self.between(b, c, d)) {
                    return Err(AxiomViolation::M3(a, b, c, d));
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Stored orbits in canonical orientation, ascending.
    pub fn triples(&self) -> impl Iterator<Item = (PointId, PointId, PointId)> + '_ {
        self.triples.iter().copied()
    }

    pub fn to_json(&self) -> String {
        let shim = RelationJson {
            n: self.n,
            triples: self.triples.iter().copied().collect(),
        };
        serde_json::to_string(&shim).expect("serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, BetweennessError> {
        let shim: RelationJson =
            serde_json::from_str(text).map_err(|e| BetweennessError::Parse(e.to_string()))?;
        Self::from_triples(shim.n, shim.triples).map_err(|e| BetweennessError::Parse(e.to_string()))
    }
}

impl Betweenness for BetweennessRelation {
    fn point_count(&self) -> usize {
        self.n
    }

    fn between(&self, a: PointId, b: PointId, c: PointId) -> bool {
        if a == b || b == c || a == c {
            return false;
        }
        self.triples.contains(&canon(a, b, c))
    }
}

/// A counterexample to one of the pseudometric consequence facts; never
/// produced by a validated relation, so any value signals a bug.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FactViolation {
    /// [abc] and [acd] held but (a,b,c,d) was not geodesic.
    ChainExtensionLeft(PointId, PointId, PointId, PointId),
    /// [abd] and [bcd] held but (a,b,c,d) was not geodesic.
    ChainExtensionRight(PointId, PointId, PointId, PointId),
    /// a geodesic sequence had a non-geodesic subsequence
    Subsequence(Vec<PointId>, Vec<PointId>),
}

/// Exhaustively cross-checks the consequence facts of the axioms on
/// quadruples (and quintuples for small relations).
pub fn fact_consequences<S: Betweenness>(s: &S) -> Result<(), FactViolation> {
    let n = s.point_count();
    let geodesic = |seq: &[PointId]| is_geodesic_sequence(s, seq).unwrap_or(false);
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for d in 0..n {
                    if a == b || a == c || a == d || b == c || b == d || c == d {
                        continue;
                    }
                    let quad = [a, b, c, d];
                    if s.between(a, b, c) && s.between(a, c, d) && !geodesic(&quad) {
                        return Err(FactViolation::ChainExtensionLeft(a, b, c, d));
                    }
                    if s.between(a, b, d) && s.between(b, c, d) && !geodesic(&quad) {
                        return Err(FactViolation::ChainExtensionRight(a, b, c, d));
                    }
                    if geodesic(&quad) {
                        for skip in 0..4 {
                            let sub: Vec<PointId> = quad
                                .iter()
                                .enumerate()
                                .filter_map(|(i, &p)| (i != skip).then_some(p))
                                .collect();
                            if !geodesic(&sub) {
                                return Err(FactViolation::Subsequence(quad.to_vec(), sub));
                            }
                        }
                    }
                }
            }
        }
    }
    if n <= 8 {
        // quintuple subsequences, affordable at this scale
        let mut quint = [0usize; 5];
        fn rec<S: Betweenness>(
            s: &S,
            n: usize,
            quint: &mut [usize; 5],
            depth: usize,
        ) -> Result<(), FactViolation> {
            if depth == 5 {
                let geod = |seq: &[PointId]| is_geodesic_sequence(s, seq).unwrap_or(false);
                if geod(&quint[..]) {
                    for skip in 0..5 {
                        let sub: Vec<PointId> = quint
                            .iter()
                            .enumerate()
                            .filter_map(|(i, &p)| (i != skip).then_some(p))
                            .collect();
                        if !geod(&sub) {
                            return Err(FactViolation::Subsequence(quint.to_vec(), sub));
                        }
                    }
                }
                return Ok(());
            }
            for p in 0..n {
                if quint[..depth].contains(&p) {
                    continue;
                }
                quint[depth] = p;
                rec(s, n, quint, depth + 1)?;
            }
            Ok(())
        }
        rec(s, n, &mut quint, 0)?;
    }
    Ok(())
}

/// True iff every ordered triple `r < s < t` of the sequence is a
/// betweenness fact. Sequences shorter than 3 are vacuously geodesic.
pub fn is_geodesic_sequence<S: Betweenness>(
    s: &S,
    seq: &[PointId],
) -> Result<bool, BetweennessError> {
    let n = s.point_count();
    for (i, &p) in seq.iter().enumerate() {
        if p >= n {
            return Err(BetweennessError::IndexOutOfRange { index: p, n });
        }
        if seq[i + 1..].contains(&p) {
            return Err(BetweennessError::DuplicateInSequence);
        }
    }
    for r in 0..seq.len() {
        for m in (r + 1)..seq.len() {
            for t in (m + 1)..seq.len() {
                if !s.between(seq[r], seq[m], seq[t]) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Searches for a permutation of `set` that forms a geodesic sequence.
///
/// Tries each element as the left end; the rest must form a chain in the
/// anchored order, which is then verified in full. Returns the first
/// witnessing permutation by ascending anchor.
pub fn is_geodesic_set<S: Betweenness>(
    s: &S,
    set: &[PointId],
) -> Result<Option<Vec<PointId>>, BetweennessError> {
    let mut points: Vec<PointId> = set.to_vec();
    points.sort_unstable();
    points.dedup();
    if points.len() < set.len() {
        return Err(BetweennessError::DuplicateInSequence);
    }
    if points.len() < 3 {
        return Err(BetweennessError::TooFewPoints {
            got: points.len(),
            needed: 3,
        });
    }
    let n = s.point_count();
    for &p in &points {
        if p >= n {
            return Err(BetweennessError::IndexOutOfRange { index: p, n });
        }
    }
    for &anchor in &points {
        let rest: Vec<PointId> = points.iter().copied().filter(|&p| p != anchor).collect();
        // count how many elements precede each candidate in the anchored
        // order; a chain sorts by that count
        let mut keyed: Vec<(usize, PointId)> = Vec::with_capacity(rest.len());
        for &x in &rest {
            let before = rest
                .iter()
                .filter(|&&y| y != x && s.between(anchor, y, x))
                .count();
            keyed.push((before, x));
        }
        keyed.sort_unstable();
        let mut seq = vec![anchor];
        seq.extend(keyed.iter().map(|&(_, x)| x));
        if is_geodesic_sequence(s, &seq)? {
            return Ok(Some(seq));
        }
    }
    Ok(None)
}

/// A maximum-length geodesic sequence; the trivial least pair when no
/// collinear triple exists. Computed as 1 + longest chain over all
/// anchored posets.
pub fn longest_geodesic<S: Betweenness>(s: &S) -> Result<Vec<PointId>, BetweennessError> {
    let n = s.point_count();
    if n < 2 {
        return Err(BetweennessError::TooFewPoints { got: n, needed: 2 });
    }
    let mut best: Vec<PointId> = vec![0, 1];
    for anchor in 0..n {
        let poset = crate::poset::AnchoredPoset::anchored_at(s, anchor)
            .expect("relation passed validation");
        let chain = poset.max_chain();
        if chain.len() + 1 > best.len() {
            best = std::iter::once(anchor).chain(chain).collect();
        }
    }
    debug_assert!(is_geodesic_sequence(s, &best)?);
    Ok(best)
}

struct PmbEnumerator<'a, F: FnMut(&BetweennessRelation)> {
    n: usize,
    /// all 3-subsets, ascending
    faces: Vec<[PointId; 3]>,
    face_of: Vec<usize>,
    /// 4-subsets, each checked once its last face is assigned
    quads: Vec<([PointId; 4], usize)>,
    /// 0 = not collinear, 1..=3 = index of the middle within the face
    state: Vec<u8>,
    count: u64,
    visit: &'a mut F,
}

impl<'a, F: FnMut(&BetweennessRelation)> PmbEnumerator<'a, F> {
    fn face_index(&self, x: PointId, y: PointId, z: PointId) -> usize {
        let mut f = [x, y, z];
        f.sort_unstable();
        self.face_of[(f[0] * self.n + f[1]) * self.n + f[2]]
    }

    fn holds(&self, a: PointId, b: PointId, c: PointId) -> bool {
        let fi = self.face_index(a, b, c);
        let st = self.state[fi];
        st != 0 && self.faces[fi][st as usize - 1] == b
    }

    /// Full inner-transitivity check inside one 4-subset.
    fn quad_ok(&self, pts: &[PointId; 4]) -> bool {
        for &a in pts {
            for &b in pts {
                for &c in pts {
                    for &d in pts {
                        if a == b || a == c || a == d || b == c || b == d || c == d {
                            continue;
                        }
                        if self.holds(a, b, c)
                            && self.holds(a, c, d)
                            && !(self.holds(a, b, d) && self.holds(b, c, d))
                        {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn rec(&mut self, t: usize) {
        if t == self.faces.len() {
            let raw: Vec<(PointId, PointId, PointId)> = self
                .state
                .iter()
                .enumerate()
                .filter(|&(_, &st)| st != 0)
                .map(|(fi, &st)| {
                    let face = self.faces[fi];
                    let mid = face[st as usize - 1];
                    let ends: Vec<PointId> = face.into_iter().filter(|&p| p != mid).collect();
                    (ends[0], mid, ends[1])
                })
                .collect();
            let rel = BetweennessRelation::from_triples(self.n, raw)
                .expect("pruned enumeration only yields valid relations");
            self.count += 1;
            (self.visit)(&rel);
            return;
        }
        for st in 0..4u8 {
            self.state[t] = st;
            let ok = (0..self.quads.len()).all(|qi| {
                let (pts, trigger) = self.quads[qi];
                trigger != t || self.quad_ok(&pts)
            });
            if ok {
                self.rec(t + 1);
            }
        }
        self.state[t] = 0;
    }
}

/// Visits every pseudometric betweenness on `n` labelled points exactly
/// once (backtracking over middle assignments, one orbit per 3-subset,
/// with inner-transitivity pruning) and returns how many there were.
///
/// M1 is structural, and M2 is equivalent to each 3-subset having at most
/// one middle, so states are exactly {none, or one of three middles}.
pub fn enumerate_pseudometric_betweennesses<F>(
    n: usize,
    mut visit: F,
) -> Result<u64, BetweennessError>
where
    F: FnMut(&BetweennessRelation),
{
    if !(2..=5).contains(&n) {
        return Err(BetweennessError::NTooLarge(n));
    }
    let mut faces: Vec<[PointId; 3]> = Vec::new();
    let mut face_of = vec![usize::MAX; n * n * n];
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                face_of[(a * n + b) * n + c] = faces.len();
                faces.push([a, b, c]);
            }
        }
    }
    let mut quads: Vec<([PointId; 4], usize)> = Vec::new();
    for a in 0..n {
        for b in (a + 1)..n {
            for c in (b + 1)..n {
                for d in (c + 1)..n {
                    let trigger = [
                        face_of[(a * n + b) * n + c],
                        face_of[(a * n + b) * n + d],
                        face_of[(a * n + c) * n + d],
                        face_of[(b * n + c) * n + d],
                    ]
                    .into_iter()
                    .max()
                    .expect("four faces");
                    quads.push(([a, b, c, d], trigger));
                }
            }
        }
    }
    let state = vec![0u8; faces.len()];
    let mut enumerator = PmbEnumerator {
        n,
        faces,
        face_of,
        quads,
        state,
        count: 0,
        visit: &mut visit,
    };
    enumerator.rec(0);
    Ok(enumerator.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_complete, gen_cycle, gen_path};

    #[test]
    fn empty_relation_is_valid() {
        let rel = BetweennessRelation::from_triples(4, []).unwrap();
        assert!(rel.is_empty());
        assert!(fact_consequences(&rel).is_ok());
    }

    #[test]
    fn m2_violation_reported() {
        let err = BetweennessRelation::from_triples(3, [(0, 1, 2), (1, 0, 2)]).unwrap_err();
        assert!(matches!(err, AxiomViolation::M2(..)));
    }

    #[test]
    fn m0_and_range_violations() {
        let err = BetweennessRelation::from_triples(3, [(0, 0, 1)]).unwrap_err();
        assert_eq!(err, AxiomViolation::M0(0, 0, 1));
        let err = BetweennessRelation::from_triples(3, [(0, 1, 3)]).unwrap_err();
        assert!(matches!(err, AxiomViolation::OutOfRange { index: 3, n: 3 }));
    }

    #[test]
    fn m3_violation_reported() {
        // [012] and [023] force [013] and [123]; leave them out
        let err = BetweennessRelation::from_triples(4, [(0, 1, 2), (0, 2, 3)]).unwrap_err();
        assert!(matches!(err, AxiomViolation::M3(..)));
    }

    #[test]
    fn metric_betweenness_always_validates() {
        for g in [
            gen_path(5).unwrap(),
            gen_cycle(6).unwrap(),
            gen_cycle(7).unwrap(),
        ] {
            let rel = g.metric().unwrap().induced_betweenness();
            assert!(fact_consequences(&rel).is_ok());
        }
    }

    #[test]
    fn reversal_closure_is_structural() {
        let rel = BetweennessRelation::from_triples(3, [(2, 1, 0)]).unwrap();
        assert!(rel.between(0, 1, 2));
        assert!(rel.between(2, 1, 0));
        assert_eq!(rel.len(), 1);
    }

    #[test]
    fn geodesic_sequence_examples() {
        let p4 = gen_path(4).unwrap().metric().unwrap();
        assert!(is_geodesic_sequence(&p4, &[0, 1, 2, 3]).unwrap());
        assert!(is_geodesic_sequence(&p4, &[3, 2, 1, 0]).unwrap());

        let c5 = gen_cycle(5).unwrap().metric().unwrap();
        assert!(!is_geodesic_sequence(&c5, &[0, 1, 2, 3]).unwrap());
        assert_eq!(
            is_geodesic_sequence(&c5, &[0, 1, 0]).unwrap_err(),
            BetweennessError::DuplicateInSequence
        );
    }

    #[test]
    fn geodesic_set_examples() {
        let p4 = gen_path(4).unwrap().metric().unwrap();
        assert_eq!(
            is_geodesic_set(&p4, &[0, 1, 2, 3]).unwrap(),
            Some(vec![0, 1, 2, 3])
        );

        let c4 = gen_cycle(4).unwrap().metric().unwrap();
        assert_eq!(is_geodesic_set(&c4, &[0, 1, 2, 3]).unwrap(), None);

        let c5 = gen_cycle(5).unwrap().metric().unwrap();
        assert_eq!(
            is_geodesic_set(&c5, &[0, 1, 2]).unwrap(),
            Some(vec![0, 1, 2])
        );

        // middle point may come first in the input set
        let seq = is_geodesic_set(&c5, &[1, 0, 2]).unwrap().unwrap();
        assert!(is_geodesic_sequence(&c5, &seq).unwrap());
    }

    /// Brute force: longest geodesic by DFS over all sequences.
    fn brute_longest<S: crate::space::Betweenness>(s: &S) -> usize {
        fn extend<S: crate::space::Betweenness>(s: &S, seq: &mut Vec<usize>, best: &mut usize) {
            *best = (*best).max(seq.len());
            for p in 0..s.point_count() {
                if seq.contains(&p) {
                    continue;
                }
                let ok = (0..seq.len())
                    .all(|r| ((r + 1)..seq.len()).all(|m| s.between(seq[r], seq[m], p)));
                if ok {
                    seq.push(p);
                    extend(s, seq, best);
                    seq.pop();
                }
            }
        }
        let mut best = 0;
        for a in 0..s.point_count() {
            let mut seq = vec![a];
            extend(s, &mut seq, &mut best);
        }
        best.max(2.min(s.point_count()))
    }

    #[test]
    fn longest_geodesic_examples_and_oracle() {
        for n in 2..7 {
            let pn = gen_path(n).unwrap().metric().unwrap();
            assert_eq!(longest_geodesic(&pn).unwrap().len(), n);
        }
        let k4 = gen_complete(4).unwrap().metric().unwrap();
        assert_eq!(longest_geodesic(&k4).unwrap(), vec![0, 1]);

        let c6 = gen_cycle(6).unwrap().metric().unwrap();
        let geo = longest_geodesic(&c6).unwrap();
        assert_eq!(geo.len(), 4);
        assert!(is_geodesic_sequence(&c6, &geo).unwrap());

        for g in [
            gen_cycle(5).unwrap(),
            gen_cycle(6).unwrap(),
            gen_cycle(8).unwrap(),
            gen_path(8).unwrap(),
            gen_complete(5).unwrap(),
        ] {
            let m = g.metric().unwrap();
            assert_eq!(longest_geodesic(&m).unwrap().len(), brute_longest(&m));
        }
    }

    #[test]
    fn enumeration_tiny_counts() {
        let count = enumerate_pseudometric_betweennesses(2, |_| {}).unwrap();
        assert_eq!(count, 1);
        // empty, or one middle per the single triple
        let count = enumerate_pseudometric_betweennesses(3, |_| {}).unwrap();
        assert_eq!(count, 4);
        assert!(matches!(
            enumerate_pseudometric_betweennesses(6, |_| {}),
            Err(BetweennessError::NTooLarge(6))
        ));
    }

    #[test]
    fn enumeration_emits_valid_relations() {
        let mut seen = std::collections::HashSet::new();
        enumerate_pseudometric_betweennesses(4, |rel| {
            assert!(fact_consequences(rel).is_ok());
            assert!(seen.insert(rel.to_json()), "duplicate emission");
        })
        .unwrap();
    }

    #[test]
    fn relation_json_round_trip() {
        let rel = gen_cycle(5)
            .unwrap()
            .metric()
            .unwrap()
            .induced_betweenness();
        let text = rel.to_json();
        let back = BetweennessRelation::from_json(&text).unwrap();
        assert_eq!(rel, back);
        assert_eq!(text, back.to_json());
    }
}
