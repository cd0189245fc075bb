//! Trackings of vanilla trails, tracking decompositions and their per-vertex
//! statistics: hanging and pre-hanging edges, endpoint counts, τ, balance.

use crate::factorize::Bifactorization;
use crate::graph::{EdgeId, GraphError, MultiGraph, Side, VertexId};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TrackingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("edge {index} of the tracking does not join its consecutive vertices")]
    EdgeMismatch { index: usize },
    #[error("edge {0} repeats in the tracking")]
    RepeatedEdge(EdgeId),
    #[error("interior vertex {0} repeats, the tracking is not vanilla")]
    NotVanilla(VertexId),
    #[error("tracking has length {actual}, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("vertex and edge sequences have inconsistent lengths")]
    Malformed,
    #[error("trackings do not partition the edges: {0}")]
    NotPartition(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// x_0 … x_l together with the edge used for every step.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Tracking {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl Tracking {
    /// Validated constructor: consistent steps, distinct edges, vanilla interior.
    pub fn new(g: &MultiGraph, vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Result<Self, TrackingError> {
        if edges.is_empty() || vertices.len() != edges.len() + 1 {
            return Err(TrackingError::Malformed);
        }
        for (i, &e) in edges.iter().enumerate() {
            let (u, v) = g.endpoints(e).ok_or(GraphError::ForeignEdge(e))?;
            let (x, y) = (vertices[i], vertices[i + 1]);
            if !((u, v) == (x, y) || (u, v) == (y, x)) {
                return Err(TrackingError::EdgeMismatch { index: i });
            }
        }
        let mut sorted = edges.clone();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(TrackingError::RepeatedEdge(w[0]));
        }
        let interior = &vertices[1..vertices.len() - 1];
        let mut seen = interior.to_vec();
        seen.sort();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(TrackingError::NotVanilla(w[0]));
        }
        Ok(Tracking { vertices, edges })
    }

    /// Builds a tracking without validation; callers re-validate whole decompositions.
    pub(crate) fn from_parts(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len() + 1);
        Tracking { vertices, edges }
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeId] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> VertexId {
        self.vertices[0]
    }

    pub fn end(&self) -> VertexId {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    /// B⁻: the same trail traversed backwards.
    pub fn reversed(&self) -> Tracking {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.reverse();
        edges.reverse();
        Tracking { vertices, edges }
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    /// d_B̄(v).
    pub fn degree(&self, v: VertexId) -> usize {
        let n = self.vertices.len();
        self.vertices
            .iter()
            .enumerate()
            .filter(|&(_, &x)| x == v)
            .map(|(i, _)| if i == 0 || i == n - 1 { 1 } else { 2 })
            .sum()
    }

    /// Number of end-vertices with degree greater than one.
    pub fn tau(&self) -> usize {
        usize::from(self.degree(self.start()) > 1) + usize::from(self.degree(self.end()) > 1)
    }

    pub fn is_path(&self) -> bool {
        let mut vs = self.vertices.clone();
        vs.sort();
        vs.windows(2).all(|w| w[0] != w[1])
    }

    /// (edge, inner vertex, hanging) for the starting and the ending edge.
    pub fn prehanging(&self) -> [(EdgeId, VertexId, bool); 2] {
        let l = self.len();
        [
            (self.edges[0], self.vertices[1], self.degree(self.start()) == 1),
            (self.edges[l - 1], self.vertices[l - 1], self.degree(self.end()) == 1),
        ]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackingRecord {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

/// `{"ell":int,"trackings":[{"vertices":[ids],"edges":[ids]}…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackingDocument {
    pub ell: usize,
    pub trackings: Vec<TrackingRecord>,
}

/// Edge-disjoint vanilla l-trackings covering a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackingDecomposition {
    pub ell: usize,
    pub trackings: Vec<Tracking>,
}

impl TrackingDecomposition {
    /// Validates every member and the edge partition.
    pub fn new(g: &MultiGraph, ell: usize, trackings: Vec<Tracking>) -> Result<Self, TrackingError> {
        let d = TrackingDecomposition { ell, trackings };
        d.validate(g)?;
        Ok(d)
    }

    pub fn validate(&self, g: &MultiGraph) -> Result<(), TrackingError> {
        let mut owner = vec![false; g.edge_bound()];
        for t in &self.trackings {
            if t.len() != self.ell {
                return Err(TrackingError::LengthMismatch {
                    expected: self.ell,
                    actual: t.len(),
                });
            }
            Tracking::new(g, t.vertices.clone(), t.edges.clone())?;
            for &e in &t.edges {
                if std::mem::replace(&mut owner[e.index()], true) {
                    return Err(TrackingError::NotPartition(format!("edge {e} lies in two trackings")));
                }
            }
        }
        if let Some(e) = g.edge_ids().find(|e| !owner[e.index()]) {
            return Err(TrackingError::NotPartition(format!("edge {e} is not covered")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.trackings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trackings.is_empty()
    }

    pub fn tau(&self) -> usize {
        self.trackings.iter().map(Tracking::tau).sum()
    }

    pub fn stats(&self, g: &MultiGraph) -> TrackingStats {
        TrackingStats::compute(g, self)
    }

    pub fn to_document(&self) -> TrackingDocument {
        TrackingDocument {
            ell: self.ell,
            trackings: self
                .trackings
                .iter()
                .map(|t| TrackingRecord {
                    vertices: t.vertices.clone(),
                    edges: t.edges.clone(),
                })
                .collect(),
        }
    }

    pub fn from_document(g: &MultiGraph, doc: &TrackingDocument) -> Result<Self, TrackingError> {
        let trackings = doc
            .trackings
            .iter()
            .map(|r| Tracking::new(g, r.vertices.clone(), r.edges.clone()))
            .collect::<Result<_, _>>()?;
        TrackingDecomposition::new(g, doc.ell, trackings)
    }
}

/// Per-vertex counters, indexed by vertex id.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrackingStats {
    pub hang: Vec<usize>,
    pub prehang: Vec<usize>,
    pub b_odd: Vec<usize>,
    pub b_even: Vec<usize>,
    /// 𝓑(v): endpoints at v, a closed tracking counted twice.
    pub b_total: Vec<usize>,
    pub tau: usize,
}

impl TrackingStats {
    pub fn compute(g: &MultiGraph, d: &TrackingDecomposition) -> Self {
        Self::from_trackings(g, &d.trackings)
    }

    pub fn from_trackings(g: &MultiGraph, trackings: &[Tracking]) -> Self {
        let n = g.vertex_bound();
        let mut s = TrackingStats {
            hang: vec![0; n],
            prehang: vec![0; n],
            b_odd: vec![0; n],
            b_even: vec![0; n],
            b_total: vec![0; n],
            tau: 0,
        };
        for t in trackings {
            for (_, v, hanging) in t.prehanging() {
                s.prehang[v.index()] += 1;
                if hanging {
                    s.hang[v.index()] += 1;
                }
            }
            s.b_total[t.start().index()] += 1;
            s.b_total[t.end().index()] += 1;
            if t.is_closed() {
                s.b_even[t.start().index()] += 1;
            } else {
                s.b_odd[t.start().index()] += 1;
                s.b_odd[t.end().index()] += 1;
            }
            s.tau += t.tau();
        }
        debug_assert!((0..n).all(|v| s.b_odd[v] + 2 * s.b_even[v] == s.b_total[v]));
        s
    }

    pub fn b(&self, v: VertexId) -> usize {
        self.b_total[v.index()]
    }

    pub fn min_hang(&self, g: &MultiGraph) -> usize {
        g.vertices().map(|v| self.hang[v.index()]).min().unwrap_or(usize::MAX)
    }
}

/// prehang(v) > k at every vertex.
pub fn is_precomplete(g: &MultiGraph, d: &TrackingDecomposition, k: usize) -> bool {
    let s = d.stats(g);
    g.vertices().all(|v| s.prehang[v.index()] > k)
}

/// hang(v) > k at every vertex.
pub fn is_complete(g: &MultiGraph, d: &TrackingDecomposition, k: usize) -> bool {
    let s = d.stats(g);
    g.vertices().all(|v| s.hang[v.index()] > k)
}

/// Vertices where the balance equations of `bif` fail.
pub fn balance_violations(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    bif: &Bifactorization,
) -> Result<Vec<VertexId>, TrackingError> {
    let (p, k) = bif.shape();
    // 𝓑(v)·q = d_{G_i}(v) + q·(matching degrees of the other side), q = k/p
    let expected_ell = match p {
        1 => k,
        2 => k / 2,
        _ => return Err(TrackingError::ShapeMismatch(format!("shape ({p}, {k})"))),
    };
    if d.ell != expected_ell || k % p != 0 {
        return Err(TrackingError::ShapeMismatch(format!(
            "{}-tracking decomposition against a ({p}, {k}) bifactorization",
            d.ell
        )));
    }
    let q = k / p;
    let stats = d.stats(g);
    let deg_g1 = g.subset_degrees(&bif.g1());
    let deg_g2 = g.subset_degrees(&bif.g2());
    let other = |f: &crate::factorize::FractionalFactorization| -> Vec<usize> {
        let mut total = vec![0; g.vertex_bound()];
        for m in &f.matchings {
            for (v, c) in g.subset_degrees(m).into_iter().enumerate() {
                total[v] += c;
            }
        }
        total
    };
    let (m2, m1) = (other(&bif.f2), other(&bif.f1));
    let mut bad = Vec::new();
    for v in g.vertices() {
        let i = v.index();
        let (own, cross) = match g.side(v) {
            Some(Side::A) => (deg_g1[i], m2[i]),
            Some(Side::B) => (deg_g2[i], m1[i]),
            None => return Err(TrackingError::ShapeMismatch(format!("vertex {v} has no side"))),
        };
        if stats.b_total[i] * q != own + q * cross {
            bad.push(v);
        }
    }
    Ok(bad)
}

/// 𝓑(v) = d_{G1}(v)/(2k+1) + d_{M2}(v) on A and symmetrically on B.
pub fn is_balanced_odd(g: &MultiGraph, d: &TrackingDecomposition, bif: &Bifactorization) -> Result<bool, TrackingError> {
    if bif.shape().0 != 1 {
        return Err(TrackingError::ShapeMismatch(format!("shape {:?} is not odd", bif.shape())));
    }
    Ok(balance_violations(g, d, bif)?.is_empty())
}

/// 𝓑(v) = d_{G1}(v)/(k/2) + d_{M2}(v) + d_{N2}(v) on A and symmetrically on B.
pub fn is_balanced_even(g: &MultiGraph, d: &TrackingDecomposition, bif: &Bifactorization) -> Result<bool, TrackingError> {
    if bif.shape().0 != 2 {
        return Err(TrackingError::ShapeMismatch(format!("shape {:?} is not even", bif.shape())));
    }
    Ok(balance_violations(g, d, bif)?.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(a: usize, b: usize) -> MultiGraph {
        let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        MultiGraph::new_bipartite(a, b, &edges).unwrap()
    }

    fn edge(g: &MultiGraph, u: u32, v: u32) -> EdgeId {
        g.incident(VertexId(u))
            .iter()
            .copied()
            .find(|&e| g.opposite(e, VertexId(u)) == VertexId(v))
            .unwrap()
    }

    fn walk(g: &MultiGraph, vs: &[u32]) -> Result<Tracking, TrackingError> {
        let edges = vs.windows(2).map(|w| edge(g, w[0], w[1])).collect();
        Tracking::new(g, vs.iter().map(|&v| VertexId(v)).collect(), edges)
    }

    #[test]
    fn paths_and_closed_trails() {
        let g = complete(3, 3);
        let p = walk(&g, &[0, 3, 1, 4]).unwrap();
        assert_eq!(p.tau(), 0);
        assert!(p.is_path());
        let c = walk(&g, &[0, 3, 1, 4, 0]).unwrap();
        assert_eq!(c.tau(), 2);
        assert!(!c.is_path());
        assert_eq!(c.degree(VertexId(0)), 2);
        // interior revisit
        let h = complete(3, 4);
        assert!(matches!(walk(&h, &[3, 0, 4, 1, 5, 0, 6]), Err(TrackingError::NotVanilla(_))));
        assert!(matches!(walk(&g, &[3, 0, 4, 0]), Err(TrackingError::RepeatedEdge(_))));
        let wrong = Tracking::new(&g, vec![VertexId(0), VertexId(3)], vec![edge(&g, 0, 4)]);
        assert_eq!(wrong, Err(TrackingError::EdgeMismatch { index: 0 }));
    }

    #[test]
    fn reversal() {
        let g = complete(3, 3);
        let p = walk(&g, &[0, 3, 1, 4]).unwrap();
        assert_eq!(p.reversed().reversed(), p);
        assert_eq!(p.reversed().tau(), p.tau());
        assert_eq!(p.reversed().vertices(), &[VertexId(4), VertexId(1), VertexId(3), VertexId(0)]);
        let c = walk(&g, &[0, 3, 1, 4, 0]).unwrap();
        assert_eq!(c.reversed().tau(), 2);
    }

    #[test]
    fn single_path_stats() {
        let g = MultiGraph::new_bipartite(2, 2, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let d = TrackingDecomposition::new(&g, 3, vec![walk(&g, &[0, 2, 1, 3]).unwrap()]).unwrap();
        let s = d.stats(&g);
        assert_eq!(s.tau, 0);
        assert_eq!((s.hang[2], s.hang[1]), (1, 1));
        assert_eq!((s.prehang[0], s.prehang[3]), (0, 0));
        assert_eq!((s.b(VertexId(0)), s.b(VertexId(3))), (1, 1));
        assert!(!is_complete(&g, &d, 0));
        assert!(!is_precomplete(&g, &d, 0));
    }

    #[test]
    fn closed_tracking_counts_twice() {
        let g = complete(2, 2);
        let d = TrackingDecomposition::new(&g, 4, vec![walk(&g, &[0, 2, 1, 3, 0]).unwrap()]).unwrap();
        let s = d.stats(&g);
        assert_eq!(s.b_even[0], 1);
        assert_eq!(s.b(VertexId(0)), 2);
        assert_eq!(s.tau, 2);
        assert_eq!(s.hang.iter().sum::<usize>(), 0);
        assert_eq!(s.prehang[2] + s.prehang[3], 2);
    }

    #[test]
    fn partition_is_enforced() {
        let g = complete(2, 2);
        let t = walk(&g, &[0, 2, 1, 3]).unwrap();
        assert!(matches!(
            TrackingDecomposition::new(&g, 3, vec![t.clone()]),
            Err(TrackingError::NotPartition(_))
        ));
        assert!(matches!(
            TrackingDecomposition::new(&g, 3, vec![t.clone(), t.reversed()]),
            Err(TrackingError::NotPartition(_))
        ));
        assert!(matches!(
            TrackingDecomposition::new(&g, 2, vec![t]),
            Err(TrackingError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn document_round_trip() {
        let g = complete(2, 2);
        let d = TrackingDecomposition::new(&g, 4, vec![walk(&g, &[0, 2, 1, 3, 0]).unwrap()]).unwrap();
        let text = serde_json::to_string(&d.to_document()).unwrap();
        let doc: TrackingDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(TrackingDecomposition::from_document(&g, &doc).unwrap(), d);
    }

    /// Random 2-tracking decompositions of K_{n,n} built from stars at A.
    fn arb_decomposition() -> impl Strategy<Value = (MultiGraph, TrackingDecomposition)> {
        (1usize..4, any::<u64>()).prop_map(|(h, seed)| {
            use rand::seq::SliceRandom;
            use rand::SeedableRng;
            let n = 2 * h;
            let g = complete(n, n);
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut ts = Vec::new();
            for a in 0..n as u32 {
                let mut bs: Vec<u32> = (n as u32..2 * n as u32).collect();
                bs.shuffle(&mut rng);
                for pair in bs.chunks(2) {
                    ts.push(walk(&g, &[pair[0], a, pair[1]]).unwrap());
                }
            }
            let d = TrackingDecomposition::new(&g, 2, ts).unwrap();
            (g, d)
        })
    }

    proptest! {
        #[test]
        fn endpoint_sum_and_hang_bounds((g, d) in arb_decomposition()) {
            let s = d.stats(&g);
            prop_assert_eq!(s.b_total.iter().sum::<usize>(), 2 * d.len());
            prop_assert_eq!(2 * d.len(), 2 * g.edge_count() / d.ell);
            for v in g.vertices() {
                prop_assert!(s.hang[v.index()] <= s.prehang[v.index()]);
                prop_assert_eq!(s.b_odd[v.index()] + 2 * s.b_even[v.index()], s.b_total[v.index()]);
            }
            prop_assert_eq!(s.tau == 0, d.trackings.iter().all(Tracking::is_path));
        }
    }
}
