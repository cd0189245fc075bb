//! Edge connectivity via unit-capacity max-flow, Eulerian tests and orientations.

use crate::graph::{EdgeId, EdgeSet, GraphError, MultiGraph, VertexId};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("source and sink coincide at {0}")]
    SameVertex(VertexId),
    #[error("edge connectivity needs at least two vertices")]
    TooFewVertices,
    #[error("vertex {0} has odd degree in the edge set")]
    NotEulerian(VertexId),
}

/// Direction assigned to each edge of an edge set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Orientation {
    arcs: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Orientation {
    pub fn insert(&mut self, e: EdgeId, tail: VertexId, head: VertexId) {
        self.arcs.insert(e, (tail, head));
    }

    pub fn get(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.arcs.get(&e).copied()
    }

    pub fn tail(&self, e: EdgeId) -> Option<VertexId> {
        self.get(e).map(|(t, _)| t)
    }

    pub fn head(&self, e: EdgeId) -> Option<VertexId> {
        self.get(e).map(|(_, h)| h)
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.arcs.iter().map(|(&e, &(t, h))| (e, t, h))
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.arcs.values().filter(|(t, _)| *t == v).count()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.arcs.values().filter(|(_, h)| *h == v).count()
    }
}

/// Residual network of an undirected multigraph, every edge a pair of unit arcs.
/// Built once per graph and reused across source/sink queries.
pub struct FlowNetwork {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i32>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl FlowNetwork {
    pub fn new(g: &MultiGraph) -> Self {
        let n = g.vertex_bound();
        let mut adj = vec![Vec::new(); n];
        let mut to = Vec::with_capacity(2 * g.edge_count());
        for (_, u, v) in g.edges() {
            adj[u.index()].push(to.len());
            to.push(v.index());
            adj[v.index()].push(to.len());
            to.push(u.index());
        }
        let cap = vec![1; to.len()];
        FlowNetwork {
            adj,
            to,
            cap,
            level: vec![0; n],
            iter: vec![0; n],
        }
    }

    fn reset(&mut self) {
        self.cap.iter_mut().for_each(|c| *c = 1);
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize) -> bool {
        if u == t {
            return true;
        }
        while self.iter[u] < self.adj[u].len() {
            let a = self.adj[u][self.iter[u]];
            let w = self.to[a];
            if self.cap[a] > 0 && self.level[w] == self.level[u] + 1 && self.dfs(w, t) {
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                return true;
            }
            self.iter[u] += 1;
        }
        false
    }

    /// Max number of edge-disjoint s–t paths, stopping early once `limit` is reached.
    pub fn max_flow(&mut self, s: VertexId, t: VertexId, limit: usize) -> usize {
        self.reset();
        let (s, t) = (s.index(), t.index());
        let mut flow = 0;
        while flow < limit && self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            while flow < limit && self.dfs(s, t) {
                flow += 1;
            }
        }
        flow
    }

    /// Vertices reachable from `s` in the residual network of the last flow.
    pub fn source_side(&self, s: VertexId) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        seen[s.index()] = true;
        let mut stack = vec![s.index()];
        while let Some(u) = stack.pop() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Directed network with integer capacities (Dinic), over dense node indices.
#[derive(Clone, Debug, Default)]
pub struct Dinic {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(n: usize) -> Self {
        Dinic {
            adj: vec![Vec::new(); n],
            level: vec![0; n],
            iter: vec![0; n],
            ..Dinic::default()
        }
    }

    /// Adds arc u→v and returns its index; query its flow with `flow_on`.
    pub fn add_arc(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let id = self.to.len();
        self.adj[u].push(id);
        self.to.push(v);
        self.cap.push(cap);
        self.adj[v].push(id + 1);
        self.to.push(u);
        self.cap.push(0);
        id
    }

    pub fn flow_on(&self, arc: usize) -> i64 {
        self.cap[arc + 1]
    }

    fn bfs(&mut self, s: usize, t: usize) -> bool {
        self.level.iter_mut().for_each(|l| *l = -1);
        self.level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &a in &self.adj[u] {
                let w = self.to[a];
                if self.cap[a] > 0 && self.level[w] < 0 {
                    self.level[w] = self.level[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        self.level[t] >= 0
    }

    fn dfs(&mut self, u: usize, t: usize, pushed: i64) -> i64 {
        if u == t {
            return pushed;
        }
        while self.iter[u] < self.adj[u].len() {
            let a = self.adj[u][self.iter[u]];
            let w = self.to[a];
            if self.cap[a] > 0 && self.level[w] == self.level[u] + 1 {
                let got = self.dfs(w, t, pushed.min(self.cap[a]));
                if got > 0 {
                    self.cap[a] -= got;
                    self.cap[a ^ 1] += got;
                    return got;
                }
            }
            self.iter[u] += 1;
        }
        0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut flow = 0;
        while self.bfs(s, t) {
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let got = self.dfs(s, t, i64::MAX);
                if got == 0 {
                    break;
                }
                flow += got;
            }
        }
        flow
    }
}

/// p_G(x, y): the maximum number of edge-disjoint x–y paths.
pub fn local_edge_connectivity(g: &MultiGraph, x: VertexId, y: VertexId) -> Result<usize, FlowError> {
    local_edge_connectivity_capped(g, x, y, usize::MAX)
}

pub fn local_edge_connectivity_capped(
    g: &MultiGraph,
    x: VertexId,
    y: VertexId,
    cap: usize,
) -> Result<usize, FlowError> {
    for v in [x, y] {
        if !g.contains_vertex(v) {
            return Err(GraphError::UnknownVertex(v).into());
        }
    }
    if x == y {
        return Err(FlowError::SameVertex(x));
    }
    Ok(FlowNetwork::new(g).max_flow(x, y, cap))
}

/// λ(G), the minimum over one fixed source against every other vertex.
pub fn edge_connectivity(g: &MultiGraph) -> Result<usize, FlowError> {
    if g.vertex_count() < 2 {
        return Err(FlowError::TooFewVertices);
    }
    let mut net = FlowNetwork::new(g);
    let mut vs = g.vertices();
    let s = vs.next().expect("two vertices");
    let mut best = usize::MAX;
    for t in vs {
        best = best.min(net.max_flow(s, t, best));
        if best == 0 {
            break;
        }
    }
    Ok(best)
}

/// Connected components as lists of vertex ids (ascending within and across).
pub fn components(g: &MultiGraph) -> Vec<Vec<VertexId>> {
    let mut comp = vec![usize::MAX; g.vertex_bound()];
    let mut out = Vec::new();
    for s in g.vertices() {
        if comp[s.index()] != usize::MAX {
            continue;
        }
        let id = out.len();
        comp[s.index()] = id;
        let mut members = vec![s];
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in g.incident(u) {
                let w = g.opposite(e, u);
                if comp[w.index()] == usize::MAX {
                    comp[w.index()] = id;
                    members.push(w);
                    stack.push(w);
                }
            }
        }
        members.sort();
        out.push(members);
    }
    out
}

pub fn is_connected(g: &MultiGraph) -> bool {
    components(g).len() <= 1
}

/// Returns the source side of some cut with fewer than `k` edges, if one exists.
pub fn violated_cut(g: &MultiGraph, k: usize) -> Option<Vec<bool>> {
    if k == 0 || g.vertex_count() < 2 {
        return None;
    }
    let mut net = FlowNetwork::new(g);
    let s = g.vertices().next()?;
    for t in g.vertices().skip(1) {
        if net.max_flow(s, t, k) < k {
            return Some(net.source_side(s));
        }
    }
    None
}

pub fn is_k_edge_connected(g: &MultiGraph, k: usize) -> bool {
    violated_cut(g, k).is_none()
}

/// True iff every vertex has even degree in `f`; connectivity is not required.
pub fn is_eulerian_subset(g: &MultiGraph, f: &EdgeSet) -> Result<bool, FlowError> {
    g.check_subset(f)?;
    Ok(g.subset_degrees(f).iter().all(|d| d % 2 == 0))
}

/// Closed walk covering one component of G[F], as (vertices, edges) with
/// `vertices.len() == edges.len() + 1` and equal first and last vertex.
pub type Circuit = (Vec<VertexId>, Vec<EdgeId>);

/// Euler circuits of every component of G[F], each started at the smallest
/// vertex id of its component that `prefer` accepts (or the smallest overall).
pub fn euler_circuits(
    g: &MultiGraph,
    f: &EdgeSet,
    prefer: impl Fn(VertexId) -> bool,
) -> Result<Vec<Circuit>, FlowError> {
    g.check_subset(f)?;
    let degrees = g.subset_degrees(f);
    if let Some(v) = g.vertices().find(|v| degrees[v.index()] % 2 == 1) {
        return Err(FlowError::NotEulerian(v));
    }
    let h = g.induced_by_edges(f)?;
    let mut used = vec![false; h.edge_bound()];
    let mut ptr = vec![0usize; h.vertex_bound()];
    let mut circuits = Vec::new();
    for comp in components(&h) {
        let start = comp.iter().copied().find(|&v| prefer(v)).unwrap_or(comp[0]);
        let mut stack: Vec<(VertexId, Option<EdgeId>)> = vec![(start, None)];
        let mut verts = Vec::new();
        let mut edges = Vec::new();
        while let Some(&(v, _)) = stack.last() {
            let inc = h.incident(v);
            while ptr[v.index()] < inc.len() && used[inc[ptr[v.index()]].index()] {
                ptr[v.index()] += 1;
            }
            if ptr[v.index()] < inc.len() {
                let e = inc[ptr[v.index()]];
                used[e.index()] = true;
                stack.push((h.opposite(e, v), Some(e)));
            } else {
                let (v, e) = stack.pop().expect("non-empty");
                verts.push(v);
                if let Some(e) = e {
                    edges.push(e);
                }
            }
        }
        verts.reverse();
        edges.reverse();
        circuits.push((verts, edges));
    }
    Ok(circuits)
}

/// Orientation of exactly F with in-degree equal to out-degree everywhere.
pub fn eulerian_orientation(g: &MultiGraph, f: &EdgeSet) -> Result<Orientation, FlowError> {
    let mut o = Orientation::default();
    for (verts, edges) in euler_circuits(g, f, |_| true)? {
        for (i, &e) in edges.iter().enumerate() {
            o.insert(e, verts[i], verts[i + 1]);
        }
    }
    Ok(o)
}
