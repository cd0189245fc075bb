//! Loopless multigraphs with stable edge identities and optional bipartition labels.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl VertexId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl EdgeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::A => write!(f, "A"),
            Side::B => write!(f, "B"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge {0}-{1} is a loop")]
    LoopEdge(VertexId, VertexId),
    #[error("edge {0}-{1} joins two vertices of the same side")]
    SameSideEdge(VertexId, VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("edge {0} does not belong to the host graph")]
    ForeignEdge(EdgeId),
    #[error("vertex {0} already exists")]
    DuplicateVertex(VertexId),
    #[error("edge {0} already exists")]
    DuplicateEdge(EdgeId),
    #[error("parse error at {location}: {message}")]
    ParseError { location: String, message: String },
}

/// A set of edge identifiers, ordered by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeSet(BTreeSet<EdgeId>);

impl EdgeSet {
    pub fn new() -> Self {
        EdgeSet(BTreeSet::new())
    }

    pub fn insert(&mut self, e: EdgeId) -> bool {
        self.0.insert(e)
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.0.remove(&e)
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.0.contains(&e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.0.iter().copied()
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn difference(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.difference(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.intersection(&other.0).copied().collect())
    }

    pub fn is_disjoint(&self, other: &EdgeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn extend<I: IntoIterator<Item = EdgeId>>(&mut self, iter: I) {
        self.0.extend(iter)
    }

    pub fn to_vec(&self) -> Vec<EdgeId> {
        self.0.iter().copied().collect()
    }
}

impl FromIterator<EdgeId> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = EdgeId>>(iter: I) -> Self {
        EdgeSet(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a EdgeSet {
    type Item = EdgeId;
    type IntoIter = std::iter::Copied<std::collections::btree_set::Iter<'a, EdgeId>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Loopless multigraph. Vertex and edge ids index dense slot tables, so
/// subgraphs keep the ids of their host.
#[derive(Clone, Debug, Default)]
pub struct MultiGraph {
    present: Vec<bool>,
    sides: Vec<Option<Side>>,
    ends: Vec<Option<(VertexId, VertexId)>>,
    incident: Vec<Vec<EdgeId>>,
    vertex_count: usize,
    edge_count: usize,
    relaxed: bool,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Vertices `0..a_count` form side A and `a_count..a_count + b_count` side B.
    pub fn new_bipartite(
        a_count: usize,
        b_count: usize,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let mut g = MultiGraph::new();
        for i in 0..a_count + b_count {
            let side = if i < a_count { Side::A } else { Side::B };
            g.add_vertex(VertexId(i as u32), Some(side))?;
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u as u32), VertexId(v as u32))?;
        }
        Ok(g)
    }

    /// Working multigraphs accept edges inside one side (liftings create them).
    pub fn set_relaxed(&mut self, relaxed: bool) {
        self.relaxed = relaxed;
    }

    pub fn is_relaxed(&self) -> bool {
        self.relaxed
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    /// One past the largest vertex id ever allocated; sizes dense per-vertex tables.
    pub fn vertex_bound(&self) -> usize {
        self.present.len()
    }

    pub fn edge_bound(&self) -> usize {
        self.ends.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.present.get(v.index()).copied().unwrap_or(false)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        matches!(self.ends.get(e.index()), Some(Some(_)))
    }

    pub fn side(&self, v: VertexId) -> Option<Side> {
        if self.contains_vertex(v) {
            self.sides[v.index()]
        } else {
            None
        }
    }

    pub fn add_vertex(&mut self, v: VertexId, side: Option<Side>) -> Result<(), GraphError> {
        if self.contains_vertex(v) {
            return Err(GraphError::DuplicateVertex(v));
        }
        let i = v.index();
        if i >= self.present.len() {
            self.present.resize(i + 1, false);
            self.sides.resize(i + 1, None);
            self.incident.resize(i + 1, Vec::new());
        }
        self.present[i] = true;
        self.sides[i] = side;
        self.vertex_count += 1;
        Ok(())
    }

    pub fn fresh_vertex(&mut self, side: Option<Side>) -> VertexId {
        let v = VertexId(self.present.len() as u32);
        self.add_vertex(v, side).expect("fresh id is unused");
        v
    }

    fn check_edge(&self, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        for x in [u, v] {
            if !self.contains_vertex(x) {
                return Err(GraphError::UnknownVertex(x));
            }
        }
        if u == v {
            return Err(GraphError::LoopEdge(u, v));
        }
        if !self.relaxed {
            if let (Some(su), Some(sv)) = (self.side(u), self.side(v)) {
                if su == sv {
                    return Err(GraphError::SameSideEdge(u, v));
                }
            }
        }
        Ok(())
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId, GraphError> {
        let e = EdgeId(self.ends.len() as u32);
        self.add_edge_with_id(e, u, v)?;
        Ok(e)
    }

    pub fn add_edge_with_id(&mut self, e: EdgeId, u: VertexId, v: VertexId) -> Result<(), GraphError> {
        if self.contains_edge(e) {
            return Err(GraphError::DuplicateEdge(e));
        }
        self.check_edge(u, v)?;
        if e.index() >= self.ends.len() {
            self.ends.resize(e.index() + 1, None);
        }
        self.ends[e.index()] = Some((u, v));
        self.incident[u.index()].push(e);
        self.incident[v.index()].push(e);
        self.edge_count += 1;
        Ok(())
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(VertexId, VertexId), GraphError> {
        let (u, v) = self.endpoints(e).ok_or(GraphError::ForeignEdge(e))?;
        self.ends[e.index()] = None;
        for x in [u, v] {
            let list = &mut self.incident[x.index()];
            if let Some(pos) = list.iter().position(|&f| f == e) {
                list.remove(pos);
            }
        }
        self.edge_count -= 1;
        Ok((u, v))
    }

    /// Removes `v` together with its incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<(), GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        for e in self.incident[v.index()].clone() {
            self.remove_edge(e)?;
        }
        self.present[v.index()] = false;
        self.sides[v.index()] = None;
        self.vertex_count -= 1;
        Ok(())
    }

    /// Moves the `from` end of edge `e` to vertex `to`.
    pub fn reattach(&mut self, e: EdgeId, from: VertexId, to: VertexId) -> Result<(), GraphError> {
        let (u, v) = self.endpoints(e).ok_or(GraphError::ForeignEdge(e))?;
        let other = if u == from {
            v
        } else if v == from {
            u
        } else {
            return Err(GraphError::UnknownVertex(from));
        };
        self.check_edge(other, to)?;
        let list = &mut self.incident[from.index()];
        if let Some(pos) = list.iter().position(|&f| f == e) {
            list.remove(pos);
        }
        self.incident[to.index()].push(e);
        self.ends[e.index()] = Some(if u == from { (to, v) } else { (u, to) });
        Ok(())
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.ends.get(e.index()).copied().flatten()
    }

    /// The endpoint of `e` that is not `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> VertexId {
        let (a, b) = self.endpoints(e).expect("edge present");
        if a == v {
            b
        } else {
            debug_assert_eq!(b, v);
            a
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.present
            .iter()
            .enumerate()
            .filter(|(_, &p)| p)
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn vertices_on(&self, side: Side) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.side(v) == Some(side))
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.ends
            .iter()
            .enumerate()
            .filter_map(|(i, x)| x.map(|(u, v)| (EdgeId(i as u32), u, v)))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().map(|(e, _, _)| e)
    }

    pub fn edge_set(&self) -> EdgeSet {
        self.edge_ids().collect()
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.incident[v.index()]
    }

    pub fn degree(&self, v: VertexId) -> Result<usize, GraphError> {
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.incident[v.index()].len())
    }

    pub fn deg(&self, v: VertexId) -> usize {
        self.incident[v.index()].len()
    }

    /// d_F(v): incident edges of `v` that lie in `f`.
    pub fn subset_degree(&self, f: &EdgeSet, v: VertexId) -> Result<usize, GraphError> {
        self.check_subset(f)?;
        if !self.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v));
        }
        Ok(self.incident[v.index()].iter().filter(|&&e| f.contains(e)).count())
    }

    /// Per-vertex degrees in `f`, indexed by vertex id.
    pub fn subset_degrees(&self, f: &EdgeSet) -> Vec<usize> {
        let mut d = vec![0; self.vertex_bound()];
        for e in f.iter() {
            if let Some((u, v)) = self.endpoints(e) {
                d[u.index()] += 1;
                d[v.index()] += 1;
            }
        }
        d
    }

    pub fn check_subset(&self, f: &EdgeSet) -> Result<(), GraphError> {
        match f.iter().find(|&e| !self.contains_edge(e)) {
            Some(e) => Err(GraphError::ForeignEdge(e)),
            None => Ok(()),
        }
    }

    /// G[F]: the endpoints of `f` with the edges of `f`, ids preserved.
    pub fn induced_by_edges(&self, f: &EdgeSet) -> Result<MultiGraph, GraphError> {
        self.check_subset(f)?;
        let mut h = MultiGraph {
            relaxed: self.relaxed,
            ..MultiGraph::default()
        };
        let mut keep = vec![false; self.vertex_bound()];
        for e in f.iter() {
            let (u, v) = self.endpoints(e).expect("checked");
            keep[u.index()] = true;
            keep[v.index()] = true;
        }
        for v in self.vertices().filter(|v| keep[v.index()]) {
            h.add_vertex(v, self.side(v))?;
        }
        for e in f.iter() {
            let (u, v) = self.endpoints(e).expect("checked");
            h.add_edge_with_id(e, u, v)?;
        }
        Ok(h)
    }

    /// G − F, keeping every vertex.
    pub fn without_edges(&self, f: &EdgeSet) -> MultiGraph {
        let mut h = self.clone();
        for e in f.iter() {
            let _ = h.remove_edge(e);
        }
        h
    }

    /// Number of parallel edges between `u` and `v`.
    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.incident[u.index()]
            .iter()
            .filter(|&&e| self.opposite(e, u) == v)
            .count()
    }

    /// Whether every vertex carries a side label and no edge stays inside one side.
    pub fn is_bipartite_labelled(&self) -> bool {
        self.vertices().all(|v| self.side(v).is_some())
            && self.edges().all(|(_, u, v)| self.side(u) != self.side(v))
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            vertices: self
                .vertices()
                .map(|v| VertexRecord {
                    id: v.0,
                    side: self.side(v),
                })
                .collect(),
            edges: self
                .edges()
                .map(|(e, u, v)| EdgeRecord { id: e.0, u: u.0, v: v.0 })
                .collect(),
            working: self.relaxed,
        }
    }

    pub fn from_document(doc: &GraphDocument) -> Result<MultiGraph, GraphError> {
        let mut g = MultiGraph::new();
        g.relaxed = doc.working;
        for (i, r) in doc.vertices.iter().enumerate() {
            g.add_vertex(VertexId(r.id), r.side).map_err(|err| GraphError::ParseError {
                location: format!("vertices[{i}]"),
                message: err.to_string(),
            })?;
        }
        for (i, r) in doc.edges.iter().enumerate() {
            g.add_edge_with_id(EdgeId(r.id), VertexId(r.u), VertexId(r.v))
                .map_err(|err| GraphError::ParseError {
                    location: format!("edges[{i}]"),
                    message: err.to_string(),
                })?;
        }
        Ok(g)
    }

    pub fn serialize(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("graph documents always serialize")
    }

    pub fn parse(text: &str) -> Result<MultiGraph, GraphError> {
        let doc: GraphDocument = serde_json::from_str(text).map_err(|err| GraphError::ParseError {
            location: format!("line {} column {}", err.line(), err.column()),
            message: err.to_string(),
        })?;
        MultiGraph::from_document(&doc)
    }
}

impl PartialEq for MultiGraph {
    fn eq(&self, other: &Self) -> bool {
        self.relaxed == other.relaxed
            && self.vertices().map(|v| (v, self.side(v))).eq(other.vertices().map(|v| (v, other.side(v))))
            && self.edges().eq(other.edges())
    }
}

impl Eq for MultiGraph {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub id: u32,
    pub u: u32,
    pub v: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub working: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn complete(a: usize, b: usize) -> MultiGraph {
        let edges: Vec<_> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
        MultiGraph::new_bipartite(a, b, &edges).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = MultiGraph::new_bipartite(1, 1, &[(0, 1)]).unwrap();
        assert_eq!(g.degree(VertexId(0)).unwrap(), 1);
        assert_eq!(g.degree(VertexId(1)).unwrap(), 1);
    }

    #[test]
    fn k22_degrees() {
        let g = complete(2, 2);
        assert!(g.vertices().all(|v| g.deg(v) == 2));
        assert_eq!(g.edge_count(), 4);
    }

    #[test]
    fn loops_and_same_side_rejected() {
        assert_eq!(
            MultiGraph::new_bipartite(1, 1, &[(0, 0)]),
            Err(GraphError::LoopEdge(VertexId(0), VertexId(0)))
        );
        assert_eq!(
            MultiGraph::new_bipartite(2, 1, &[(0, 1)]),
            Err(GraphError::SameSideEdge(VertexId(0), VertexId(1)))
        );
        let mut g = MultiGraph::new_bipartite(2, 1, &[]).unwrap();
        g.set_relaxed(true);
        assert!(g.add_edge(VertexId(0), VertexId(1)).is_ok());
    }

    #[test]
    fn parallel_edges_count() {
        let g = MultiGraph::new_bipartite(1, 1, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.degree(VertexId(0)).unwrap(), 2);
        assert_eq!(g.multiplicity(VertexId(0), VertexId(1)), 2);
    }

    #[test]
    fn unknown_vertex_and_foreign_edge() {
        let g = complete(2, 2);
        assert_eq!(g.degree(VertexId(9)), Err(GraphError::UnknownVertex(VertexId(9))));
        let f: EdgeSet = [EdgeId(17)].into_iter().collect();
        assert_eq!(g.subset_degree(&f, VertexId(0)), Err(GraphError::ForeignEdge(EdgeId(17))));
        assert!(g.induced_by_edges(&f).is_err());
    }

    #[test]
    fn induced_subgraphs() {
        let g = complete(2, 2);
        let empty = g.induced_by_edges(&EdgeSet::new()).unwrap();
        assert_eq!((empty.vertex_count(), empty.edge_count()), (0, 0));
        let one: EdgeSet = [EdgeId(1)].into_iter().collect();
        let h = g.induced_by_edges(&one).unwrap();
        assert_eq!((h.vertex_count(), h.edge_count()), (2, 1));
        assert!(h.contains_edge(EdgeId(1)));
        let all = g.induced_by_edges(&g.edge_set()).unwrap();
        assert_eq!(all, g);
    }

    #[test]
    fn round_trip_k33() {
        let g = complete(3, 3);
        assert_eq!(MultiGraph::parse(&g.serialize()).unwrap(), g);
    }

    #[test]
    fn parse_rejects_duplicate_ids_and_loops() {
        let dup = r#"{"vertices":[{"id":0,"side":"A"},{"id":1,"side":"B"}],
            "edges":[{"id":0,"u":0,"v":1},{"id":0,"u":0,"v":1}]}"#;
        match MultiGraph::parse(dup) {
            Err(GraphError::ParseError { location, .. }) => assert_eq!(location, "edges[1]"),
            other => panic!("expected parse error, got {other:?}"),
        }
        let looped = r#"{"vertices":[{"id":0,"side":"A"}],"edges":[{"id":0,"u":0,"v":0}]}"#;
        assert!(matches!(MultiGraph::parse(looped), Err(GraphError::ParseError { .. })));
        assert!(matches!(MultiGraph::parse("{"), Err(GraphError::ParseError { .. })));
    }

    #[test]
    fn reattach_moves_one_end() {
        let mut g = complete(2, 2);
        let c = g.fresh_vertex(Some(Side::A));
        let e = g.incident(VertexId(0))[0];
        g.reattach(e, VertexId(0), c).unwrap();
        assert_eq!(g.deg(VertexId(0)), 1);
        assert_eq!(g.deg(c), 1);
        assert!(g.reattach(e, VertexId(0), c).is_err());
    }

    fn arb_graph() -> impl Strategy<Value = MultiGraph> {
        (1usize..6, 1usize..6).prop_flat_map(|(a, b)| {
            proptest::collection::vec((0..a, 0..b), 0..25).prop_map(move |pairs| {
                let edges: Vec<_> = pairs.into_iter().map(|(i, j)| (i, a + j)).collect();
                MultiGraph::new_bipartite(a, b, &edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn handshake(g in arb_graph()) {
            let total: usize = g.vertices().map(|v| g.deg(v)).sum();
            prop_assert_eq!(total, 2 * g.edge_count());
        }

        #[test]
        fn subset_degree_is_additive(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 25)) {
            let f: EdgeSet = g.edge_ids().filter(|e| mask[e.index()]).collect();
            let h = g.edge_set().difference(&f);
            for v in g.vertices() {
                let sum = g.subset_degree(&f, v).unwrap() + g.subset_degree(&h, v).unwrap();
                prop_assert_eq!(sum, g.deg(v));
            }
        }

        #[test]
        fn induced_keeps_exactly_f(g in arb_graph(), mask in proptest::collection::vec(any::<bool>(), 25)) {
            let f: EdgeSet = g.edge_ids().filter(|e| mask[e.index()]).collect();
            let h = g.induced_by_edges(&f).unwrap();
            prop_assert_eq!(h.edge_set(), f);
            prop_assert!(h.vertices().all(|v| h.deg(v) > 0));
        }

        #[test]
        fn parse_inverts_serialize(g in arb_graph()) {
            prop_assert_eq!(MultiGraph::parse(&g.serialize()).unwrap(), g);
        }
    }
}
