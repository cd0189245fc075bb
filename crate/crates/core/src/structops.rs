//! Graph surgery: vertex splittings and detachments, liftings, degree-two
//! suppressions, and the provenance needed to pull rewritten edges back.

use crate::flowcut::{self, FlowNetwork};
use crate::graph::{EdgeId, EdgeSet, GraphError, MultiGraph, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurgeryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("assignment at {0} does not partition its incident edges")]
    BadPartition(VertexId),
    #[error("assignment part {index} at {vertex} has {actual} edges, expected {expected}")]
    DegreeMismatch {
        vertex: VertexId,
        index: usize,
        expected: usize,
        actual: usize,
    },
    #[error("split specification violated at {0}: {1}")]
    SpecViolation(VertexId, String),
    #[error("no verified detachment within {0} attempts")]
    BudgetExhausted(usize),
    #[error("no edge between {0} and {1}")]
    MissingEdge(VertexId, VertexId),
    #[error("lifting needs three distinct vertices")]
    DegenerateLift,
    #[error("edge {0} is already a rewritten two-path")]
    NestedRewrite(EdgeId),
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    WrongDegree {
        vertex: VertexId,
        degree: usize,
        expected: String,
    },
    #[error("suppressing {0} would create a loop at {1}")]
    WouldCreateLoop(VertexId, VertexId),
    #[error("no admissible lifting at {0}")]
    NoAdmissiblePair(VertexId),
    #[error("{0} is a cut vertex")]
    CutVertex(VertexId),
}

/// Subdegree sequence per split vertex.
pub type SplitSpec = BTreeMap<VertexId, Vec<usize>>;

/// Where an edge of a rewritten graph comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Original(EdgeId),
    TwoPath(EdgeId, VertexId, EdgeId),
}

/// Edge and vertex provenance of a rewritten graph with respect to its source.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RewriteTrace {
    edges: BTreeMap<EdgeId, Provenance>,
    copies: BTreeMap<VertexId, VertexId>,
}

impl RewriteTrace {
    pub fn identity(g: &MultiGraph) -> Self {
        RewriteTrace {
            edges: g.edge_ids().map(|e| (e, Provenance::Original(e))).collect(),
            copies: BTreeMap::new(),
        }
    }

    pub fn provenance(&self, e: EdgeId) -> Option<Provenance> {
        self.edges.get(&e).copied()
    }

    /// The source vertex a split copy descends from (itself if never split).
    pub fn original_vertex(&self, v: VertexId) -> VertexId {
        self.copies.get(&v).copied().unwrap_or(v)
    }

    pub fn copies(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.copies.iter().map(|(&c, &o)| (c, o))
    }

    pub fn two_path_count(&self) -> usize {
        self.edges
            .values()
            .filter(|p| matches!(p, Provenance::TwoPath(..)))
            .count()
    }
}

/// f(F): the source edges represented by the rewritten edges of `f`.
pub fn pullback(trace: &RewriteTrace, f: &EdgeSet) -> Result<EdgeSet, SurgeryError> {
    let mut out = EdgeSet::new();
    for e in f.iter() {
        match trace.provenance(e).ok_or(GraphError::ForeignEdge(e))? {
            Provenance::Original(x) => {
                out.insert(x);
            }
            Provenance::TwoPath(x, _, y) => {
                out.insert(x);
                out.insert(y);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct DetachmentResult {
    pub graph: MultiGraph,
    pub trace: RewriteTrace,
}

/// A working multigraph carried together with its provenance.
#[derive(Clone, Debug)]
pub struct Rewrite {
    pub graph: MultiGraph,
    pub trace: RewriteTrace,
}

impl Rewrite {
    pub fn new(g: &MultiGraph) -> Self {
        let mut graph = g.clone();
        graph.set_relaxed(true);
        Rewrite {
            trace: RewriteTrace::identity(g),
            graph,
        }
    }

    /// Replaces `v` by fresh copies, the i-th receiving `assignment[i]`.
    pub fn split(
        &mut self,
        v: VertexId,
        subdegrees: &[usize],
        assignment: &[EdgeSet],
    ) -> Result<Vec<VertexId>, SurgeryError> {
        let g = &mut self.graph;
        g.degree(v)?;
        if subdegrees.len() != assignment.len() {
            return Err(SurgeryError::BadPartition(v));
        }
        let mut seen = EdgeSet::new();
        for (i, part) in assignment.iter().enumerate() {
            if part.len() != subdegrees[i] {
                return Err(SurgeryError::DegreeMismatch {
                    vertex: v,
                    index: i,
                    expected: subdegrees[i],
                    actual: part.len(),
                });
            }
            for e in part.iter() {
                if !g.incident(v).contains(&e) || !seen.insert(e) {
                    return Err(SurgeryError::BadPartition(v));
                }
            }
        }
        if seen.len() != g.deg(v) {
            return Err(SurgeryError::BadPartition(v));
        }
        let side = g.side(v);
        let origin = self.trace.original_vertex(v);
        let mut copies = Vec::with_capacity(assignment.len());
        for part in assignment {
            let c = g.fresh_vertex(side);
            for e in part.iter() {
                g.reattach(e, v, c)?;
            }
            self.trace.copies.insert(c, origin);
            copies.push(c);
        }
        g.remove_vertex(v)?;
        self.trace.copies.remove(&v);
        Ok(copies)
    }

    fn two_path_edge(&mut self, v: VertexId, e1: EdgeId, e2: EdgeId, u: VertexId, w: VertexId) -> Result<EdgeId, SurgeryError> {
        let p1 = self.trace.provenance(e1).ok_or(GraphError::ForeignEdge(e1))?;
        let p2 = self.trace.provenance(e2).ok_or(GraphError::ForeignEdge(e2))?;
        let (Provenance::Original(x), Provenance::Original(y)) = (p1, p2) else {
            let nested = if matches!(p1, Provenance::TwoPath(..)) { e1 } else { e2 };
            return Err(SurgeryError::NestedRewrite(nested));
        };
        self.graph.remove_edge(e1)?;
        self.graph.remove_edge(e2)?;
        let f = self.graph.add_edge(u, w)?;
        self.trace.edges.remove(&e1);
        self.trace.edges.remove(&e2);
        let mid = self.trace.original_vertex(v);
        self.trace.edges.insert(f, Provenance::TwoPath(x, mid, y));
        Ok(f)
    }

    fn lowest_edge(&self, v: VertexId, u: VertexId) -> Result<EdgeId, SurgeryError> {
        self.graph
            .incident(v)
            .iter()
            .copied()
            .filter(|&e| self.graph.opposite(e, v) == u)
            .min()
            .ok_or(SurgeryError::MissingEdge(v, u))
    }

    /// uw-lifting at v: drops one uv and one vw edge and adds a fresh uw edge.
    pub fn lift(&mut self, v: VertexId, u: VertexId, w: VertexId) -> Result<EdgeId, SurgeryError> {
        if u == w || u == v || w == v {
            return Err(SurgeryError::DegenerateLift);
        }
        let e1 = self.lowest_edge(v, u)?;
        let e2 = self.lowest_edge(v, w)?;
        self.two_path_edge(v, e1, e2, u, w)
    }

    /// Removes a degree-two vertex and joins its two neighbours.
    pub fn suppress(&mut self, v: VertexId) -> Result<EdgeId, SurgeryError> {
        let d = self.graph.degree(v)?;
        if d != 2 {
            return Err(SurgeryError::WrongDegree {
                vertex: v,
                degree: d,
                expected: "2".into(),
            });
        }
        let (e1, e2) = (self.graph.incident(v)[0], self.graph.incident(v)[1]);
        let (u, w) = (self.graph.opposite(e1, v), self.graph.opposite(e2, v));
        if u == w {
            return Err(SurgeryError::WouldCreateLoop(v, u));
        }
        let f = self.two_path_edge(v, e1, e2, u, w)?;
        self.graph.remove_vertex(v)?;
        Ok(f)
    }
}

pub fn split_vertex(
    g: &MultiGraph,
    v: VertexId,
    subdegrees: &[usize],
    assignment: &[EdgeSet],
) -> Result<DetachmentResult, SurgeryError> {
    let mut rw = Rewrite::new(g);
    rw.graph.set_relaxed(g.is_relaxed());
    rw.split(v, subdegrees, assignment)?;
    Ok(DetachmentResult {
        graph: rw.graph,
        trace: rw.trace,
    })
}

pub fn lift(g: &MultiGraph, v: VertexId, u: VertexId, w: VertexId) -> Result<(MultiGraph, RewriteTrace), SurgeryError> {
    let mut rw = Rewrite::new(g);
    rw.lift(v, u, w)?;
    Ok((rw.graph, rw.trace))
}

pub fn suppress_degree_two(g: &MultiGraph, v: VertexId) -> Result<(MultiGraph, RewriteTrace), SurgeryError> {
    let mut rw = Rewrite::new(g);
    rw.suppress(v)?;
    Ok((rw.graph, rw.trace))
}

fn check_spec(g: &MultiGraph, spec: &SplitSpec) -> Result<(), SurgeryError> {
    for (&v, parts) in spec {
        let d = g.degree(v)?;
        if parts.iter().sum::<usize>() != d {
            return Err(SurgeryError::SpecViolation(v, format!("subdegrees sum to {}, degree is {d}", parts.iter().sum::<usize>())));
        }
        if parts.contains(&0) {
            return Err(SurgeryError::SpecViolation(v, "zero subdegree".into()));
        }
    }
    Ok(())
}

/// Finds a detachment realizing `spec` whose graph is 2k-edge-connected.
///
/// Each attempt assigns edges to copies at random and then repairs cuts with
/// fewer than 2k edges by exchanging edges between two copies of one vertex
/// lying on opposite sides of the cut; each exchange adds two crossing edges.
pub fn detach_connected(
    g: &MultiGraph,
    spec: &SplitSpec,
    k: usize,
    seed: u64,
    budget: usize,
) -> Result<DetachmentResult, SurgeryError> {
    check_spec(g, spec)?;
    let target = 2 * k;
    for attempt in 0..budget.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(attempt as u64));
        let mut rw = Rewrite::new(g);
        rw.graph.set_relaxed(g.is_relaxed());
        let mut groups: Vec<Vec<VertexId>> = Vec::new();
        for (&v, parts) in spec {
            let mut edges = rw.graph.incident(v).to_vec();
            edges.sort();
            edges.shuffle(&mut rng);
            let mut assignment = Vec::with_capacity(parts.len());
            let mut rest = &edges[..];
            for &p in parts {
                assignment.push(rest[..p].iter().copied().collect::<EdgeSet>());
                rest = &rest[p..];
            }
            groups.push(rw.split(v, parts, &assignment)?);
        }
        if repair_cuts(&mut rw.graph, &groups, target, &mut rng) {
            debug_assert!(flowcut::is_k_edge_connected(&rw.graph, target));
            return Ok(DetachmentResult {
                graph: rw.graph,
                trace: rw.trace,
            });
        }
        log::debug!("detachment attempt {attempt} failed to reach {target}-edge-connectivity");
    }
    Err(SurgeryError::BudgetExhausted(budget))
}

fn repair_cuts(g: &mut MultiGraph, groups: &[Vec<VertexId>], target: usize, rng: &mut ChaCha8Rng) -> bool {
    let rounds = 4 * g.edge_count() + 16;
    for _ in 0..rounds {
        let Some(inside) = flowcut::violated_cut(g, target) else {
            return true;
        };
        let crosses = |g: &MultiGraph, e: EdgeId, c: VertexId| inside[g.opposite(e, c).index()] != inside[c.index()];
        let mut moves = Vec::new();
        for copies in groups {
            let (ins, outs): (Vec<VertexId>, Vec<VertexId>) = copies.iter().partition(|c| inside[c.index()]);
            for &c1 in &ins {
                let Some(&e1) = g.incident(c1).iter().find(|&&e| !crosses(g, e, c1)) else {
                    continue;
                };
                for &c2 in &outs {
                    if let Some(&e2) = g.incident(c2).iter().find(|&&e| !crosses(g, e, c2)) {
                        moves.push((c1, e1, c2, e2));
                    }
                }
            }
        }
        if moves.is_empty() {
            return false;
        }
        let (c1, e1, c2, e2) = moves[rng.gen_range(0..moves.len())];
        g.reattach(e1, c1, c2).expect("valid exchange");
        g.reattach(e2, c2, c1).expect("valid exchange");
    }
    false
}

/// Whether deleting `v` disconnects its neighbours from one another.
pub fn is_cut_vertex(g: &MultiGraph, v: VertexId) -> bool {
    let mut nbrs: Vec<VertexId> = g.incident(v).iter().map(|&e| g.opposite(e, v)).collect();
    nbrs.sort();
    nbrs.dedup();
    if nbrs.len() < 2 {
        return false;
    }
    let mut seen = vec![false; g.vertex_bound()];
    seen[v.index()] = true;
    seen[nbrs[0].index()] = true;
    let mut stack = vec![nbrs[0]];
    while let Some(u) = stack.pop() {
        for &e in g.incident(u) {
            let w = g.opposite(e, u);
            if !seen[w.index()] {
                seen[w.index()] = true;
                stack.push(w);
            }
        }
    }
    nbrs.iter().any(|x| !seen[x.index()])
}

/// A neighbour pair (u, w) of `v` such that lifting uw at v keeps
/// p(x, y) ≥ min(k̄, p_before(x, y)) for all neighbours x, y of v.
pub fn find_admissible_lifting(g: &MultiGraph, v: VertexId, kbar: usize) -> Result<(VertexId, VertexId), SurgeryError> {
    let d = g.degree(v)?;
    if d < 4 {
        return Err(SurgeryError::WrongDegree {
            vertex: v,
            degree: d,
            expected: "at least 4".into(),
        });
    }
    let mut first_edge: BTreeMap<VertexId, (usize, EdgeId)> = BTreeMap::new();
    for &e in g.incident(v) {
        let entry = first_edge.entry(g.opposite(e, v)).or_insert((0, e));
        entry.0 += 1;
        entry.1 = entry.1.min(e);
    }
    let nbrs: Vec<VertexId> = first_edge.keys().copied().collect();
    if nbrs.len() < 2 {
        return Err(SurgeryError::NoAdmissiblePair(v));
    }
    if is_cut_vertex(g, v) {
        return Err(SurgeryError::CutVertex(v));
    }
    let pairs_of = |list: &[VertexId]| {
        let mut out = Vec::new();
        for i in 0..list.len() {
            for j in i + 1..list.len() {
                out.push((list[i], list[j]));
            }
        }
        out
    };
    let mut net = FlowNetwork::new(g);
    let before: Vec<((VertexId, VertexId), usize)> = pairs_of(&nbrs)
        .into_iter()
        .map(|(x, y)| ((x, y), net.max_flow(x, y, kbar)))
        .collect();
    let mut candidates = pairs_of(&nbrs);
    candidates.sort_by_key(|&(u, w)| {
        let (mu, eu) = first_edge[&u];
        let (mw, ew) = first_edge[&w];
        (std::cmp::Reverse(mu + mw), eu.min(ew), eu.max(ew))
    });
    for (u, w) in candidates {
        let (h, _) = lift(g, v, u, w)?;
        let mut net = FlowNetwork::new(&h);
        if before.iter().all(|&((x, y), p)| net.max_flow(x, y, kbar) >= p.min(kbar)) {
            return Ok((u, w));
        }
    }
    Err(SurgeryError::NoAdmissiblePair(v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Side;

    fn complete(a: usize, b: usize) -> MultiGraph {
        let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        MultiGraph::new_bipartite(a, b, &edges).unwrap()
    }

    fn circulant(n: usize, offsets: &[usize]) -> MultiGraph {
        let edges: Vec<_> = offsets
            .iter()
            .flat_map(|&s| (0..n).map(move |i| (i, n + (i + s) % n)))
            .collect();
        MultiGraph::new_bipartite(n, n, &edges).unwrap()
    }

    fn edge_multiset(g: &MultiGraph, trace: &RewriteTrace) -> Vec<(EdgeId, VertexId, VertexId)> {
        let mut out: Vec<_> = g
            .edges()
            .map(|(e, u, v)| {
                let (a, b) = (trace.original_vertex(u), trace.original_vertex(v));
                (e, a.min(b), a.max(b))
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn split_degree_four_into_two_pairs() {
        let g = complete(2, 4);
        let inc = g.incident(VertexId(0)).to_vec();
        let parts = vec![inc[..2].iter().copied().collect(), inc[2..].iter().copied().collect()];
        let res = split_vertex(&g, VertexId(0), &[2, 2], &parts).unwrap();
        assert!(!res.graph.contains_vertex(VertexId(0)));
        let copies: Vec<_> = res.trace.copies().map(|(c, _)| c).collect();
        assert_eq!(copies.len(), 2);
        assert!(copies.iter().all(|&c| res.graph.deg(c) == 2 && res.graph.side(c) == Some(Side::A)));
        assert_eq!(edge_multiset(&res.graph, &res.trace), edge_multiset(&g, &RewriteTrace::identity(&g)));
    }

    #[test]
    fn identity_split_and_errors() {
        let g = complete(2, 2);
        let all: EdgeSet = g.incident(VertexId(0)).iter().copied().collect();
        let res = split_vertex(&g, VertexId(0), &[2], std::slice::from_ref(&all)).unwrap();
        assert_eq!(res.graph.edge_count(), 4);
        assert!(matches!(
            split_vertex(&g, VertexId(0), &[1], std::slice::from_ref(&all)),
            Err(SurgeryError::DegreeMismatch { .. })
        ));
        let one: EdgeSet = all.iter().take(1).collect();
        assert!(matches!(
            split_vertex(&g, VertexId(0), &[1], &[one]),
            Err(SurgeryError::BadPartition(_))
        ));
    }

    /// Exhaustive check that some assignment of K_{6,6} split into {3,3} at
    /// every A vertex is 2-edge-connected (only the first two vertices vary).
    #[test]
    fn k66_detachment_exists_and_is_found() {
        let g = complete(6, 6);
        let mut found = false;
        let inc0 = g.incident(VertexId(0)).to_vec();
        let inc1 = g.incident(VertexId(1)).to_vec();
        'outer: for m0 in 0u32..64 {
            for m1 in 0u32..64 {
                if m0.count_ones() != 3 || m1.count_ones() != 3 {
                    continue;
                }
                let mut rw = Rewrite::new(&g);
                for (v, inc, m) in [(0u32, &inc0, m0), (1, &inc1, m1)] {
                    let a: EdgeSet = (0..6).filter(|i| m >> i & 1 == 1).map(|i| inc[i]).collect();
                    let b: EdgeSet = (0..6).filter(|i| m >> i & 1 == 0).map(|i| inc[i]).collect();
                    rw.split(VertexId(v), &[3, 3], &[a, b]).unwrap();
                }
                if flowcut::is_k_edge_connected(&rw.graph, 2) {
                    found = true;
                    break 'outer;
                }
            }
        }
        assert!(found);
        let spec: SplitSpec = (0..6).map(|i| (VertexId(i), vec![3, 3])).collect();
        let res = detach_connected(&g, &spec, 1, 0, 8).unwrap();
        assert!(flowcut::edge_connectivity(&res.graph).unwrap() >= 2);
        assert_eq!(res.graph.vertex_count(), 18);
    }

    #[test]
    fn detach_spec_checks() {
        let g = complete(3, 3);
        assert_eq!(detach_connected(&g, &SplitSpec::new(), 1, 0, 1).unwrap().graph, {
            let mut h = g.clone();
            h.set_relaxed(false);
            h
        });
        let bad: SplitSpec = [(VertexId(0), vec![1, 1])].into_iter().collect();
        assert!(matches!(detach_connected(&g, &bad, 1, 0, 1), Err(SurgeryError::SpecViolation(..))));
    }

    #[test]
    fn lift_on_path_and_cycle() {
        let g = MultiGraph::new_bipartite(2, 1, &[(0, 2), (1, 2)]).unwrap();
        let (h, trace) = lift(&g, VertexId(2), VertexId(0), VertexId(1)).unwrap();
        assert_eq!(h.edge_count(), 1);
        assert_eq!(h.deg(VertexId(2)), 0);
        let e = h.edge_ids().next().unwrap();
        assert_eq!(trace.provenance(e), Some(Provenance::TwoPath(EdgeId(0), VertexId(2), EdgeId(1))));

        let c4 = complete(2, 2);
        let (h, _) = lift(&c4, VertexId(2), VertexId(0), VertexId(1)).unwrap();
        assert_eq!(h.multiplicity(VertexId(0), VertexId(1)), 1);
        assert_eq!(h.deg(VertexId(2)), 0);
        assert_eq!(h.deg(VertexId(0)), 2);
        assert_eq!(h.deg(VertexId(1)), 2);
        assert!(matches!(lift(&c4, VertexId(2), VertexId(0), VertexId(0)), Err(SurgeryError::DegenerateLift)));
    }

    #[test]
    fn lift_degree_arithmetic() {
        let g = circulant(4, &[0, 1, 2, 3]);
        let v = VertexId(5);
        let (h, trace) = lift(&g, v, VertexId(0), VertexId(1)).unwrap();
        assert_eq!(h.deg(v), g.deg(v) - 2);
        assert_eq!(h.deg(VertexId(0)), g.deg(VertexId(0)));
        assert_eq!(h.edge_count(), g.edge_count() - 1);
        assert_eq!(pullback(&trace, &h.edge_set()).unwrap(), g.edge_set());
    }

    #[test]
    fn suppressions() {
        // a0 b0 a1 b1 a2
        let g = MultiGraph::new_bipartite(3, 2, &[(0, 3), (1, 3), (1, 4), (2, 4)]).unwrap();
        let mut rw = Rewrite::new(&g);
        let f1 = rw.suppress(VertexId(3)).unwrap();
        let f2 = rw.suppress(VertexId(4)).unwrap();
        assert_eq!(rw.trace.provenance(f1), Some(Provenance::TwoPath(EdgeId(0), VertexId(3), EdgeId(1))));
        assert_eq!(rw.trace.provenance(f2), Some(Provenance::TwoPath(EdgeId(2), VertexId(4), EdgeId(3))));
        assert_eq!(pullback(&rw.trace, &rw.graph.edge_set()).unwrap(), g.edge_set());
        // a nested rewrite is refused
        assert!(matches!(rw.suppress(VertexId(1)), Err(SurgeryError::NestedRewrite(_))));

        let double = MultiGraph::new_bipartite(1, 1, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(
            suppress_degree_two(&double, VertexId(1)).unwrap_err(),
            SurgeryError::WouldCreateLoop(VertexId(1), VertexId(0))
        );
        assert!(matches!(suppress_degree_two(&complete(1, 3), VertexId(0)), Err(SurgeryError::WrongDegree { .. })));
    }

    #[test]
    fn pullback_rules() {
        let g = MultiGraph::new_bipartite(2, 1, &[(0, 2), (1, 2)]).unwrap();
        let id = RewriteTrace::identity(&g);
        assert_eq!(pullback(&id, &g.edge_set()).unwrap(), g.edge_set());
        let (h, trace) = lift(&g, VertexId(2), VertexId(0), VertexId(1)).unwrap();
        let lifted = h.edge_set();
        assert_eq!(pullback(&trace, &lifted).unwrap().len(), lifted.len() + trace.two_path_count());
        let foreign: EdgeSet = [EdgeId(0)].into_iter().collect();
        assert!(pullback(&trace, &foreign).is_err());
    }

    /// Brute force over every neighbour pair: the returned pair must be one
    /// that preserves min(k̄, p) among former neighbours.
    #[test]
    fn admissible_lifting_matches_exhaustive_check() {
        let g = circulant(4, &[0, 1, 2, 3]);
        let v = VertexId(4);
        let (u, w) = find_admissible_lifting(&g, v, 2).unwrap();
        let nbrs: Vec<VertexId> = (0..4).map(VertexId).collect();
        let mut good = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                let (h, _) = lift(&g, v, nbrs[i], nbrs[j]).unwrap();
                let ok = (0..4).all(|x| {
                    (x + 1..4).all(|y| {
                        let before = flowcut::local_edge_connectivity(&g, nbrs[x], nbrs[y]).unwrap();
                        let after = flowcut::local_edge_connectivity(&h, nbrs[x], nbrs[y]).unwrap();
                        after >= before.min(2)
                    })
                });
                if ok {
                    good.push((nbrs[i], nbrs[j]));
                }
            }
        }
        assert!(good.contains(&(u, w)));
        assert!(matches!(
            find_admissible_lifting(&complete(2, 3), VertexId(2), 2),
            Err(SurgeryError::WrongDegree { .. })
        ));
    }

    #[test]
    fn cut_vertex_detection() {
        // two 4-cycles sharing b0
        let g = MultiGraph::new_bipartite(4, 3, &[(0, 4), (1, 4), (0, 5), (1, 5), (2, 4), (3, 4), (2, 6), (3, 6)]).unwrap();
        assert!(is_cut_vertex(&g, VertexId(4)));
        assert!(!is_cut_vertex(&g, VertexId(5)));
        assert_eq!(find_admissible_lifting(&g, VertexId(4), 2), Err(SurgeryError::CutVertex(VertexId(4))));
    }
}
