//! Matchings and 2-factorizations of regular multigraphs, fractional
//! factorizations of bipartite graphs, and bifactorizations.

use crate::flowcut::{self, Dinic, FlowError};
use crate::graph::{EdgeId, EdgeSet, GraphError, MultiGraph, Side, VertexId};
use crate::packing::{self, PackingError};
use crate::structops::{self, Rewrite, SplitSpec, SurgeryError};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FactorError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Surgery(#[from] SurgeryError),
    #[error(transparent)]
    Packing(#[from] PackingError),
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("graph is not regular of even degree (vertex {0})")]
    NotEvenRegular(VertexId),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("no verified factorization within {0} attempts")]
    BudgetExhausted(usize),
    #[error("internal check failed: {0}")]
    Internal(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
}

/// F ⊆ E(G) with d_F(v) = (r/k)·d_G(v) for every v on `side`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub edges: EdgeSet,
    pub side: Side,
    pub r: usize,
    pub k: usize,
}

/// Partition {M_1..M_l, F_1..F_{(k-l)/2}} of a host graph's edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalFactorization {
    pub side: Side,
    pub k: usize,
    pub matchings: Vec<EdgeSet>,
    pub eulerians: Vec<EdgeSet>,
}

impl FractionalFactorization {
    pub fn ell(&self) -> usize {
        self.matchings.len()
    }

    pub fn all_edges(&self) -> EdgeSet {
        let mut out = EdgeSet::new();
        for part in self.matchings.iter().chain(&self.eulerians) {
            out.extend(part.iter());
        }
        out
    }

    pub fn factors(&self) -> Vec<Factor> {
        let make = |edges: &EdgeSet, r| Factor {
            edges: edges.clone(),
            side: self.side,
            r,
            k: self.k,
        };
        self.matchings
            .iter()
            .map(|m| make(m, 1))
            .chain(self.eulerians.iter().map(|f| make(f, 2)))
            .collect()
    }

    /// Checks the definition against `host`, whose edges must be exactly the parts.
    pub fn check(&self, host: &MultiGraph) -> Result<(), String> {
        let l = self.ell();
        if l == 0 || self.k <= l || !(self.k - l).is_multiple_of(2) || self.eulerians.len() != (self.k - l) / 2 {
            return Err(format!(
                "{} matchings and {} Eulerian factors do not fit k = {}",
                l,
                self.eulerians.len(),
                self.k
            ));
        }
        let mut seen = EdgeSet::new();
        for part in self.matchings.iter().chain(&self.eulerians) {
            for e in part.iter() {
                if !host.contains_edge(e) {
                    return Err(format!("edge {e} is not in the host"));
                }
                if !seen.insert(e) {
                    return Err(format!("edge {e} lies in two parts"));
                }
            }
        }
        if seen.len() != host.edge_count() {
            return Err("parts do not cover the host".into());
        }
        for f in self.factors() {
            if !factor_holds(host, &f.edges, f.side, f.r, f.k) {
                return Err(format!("a part is not a ({}, {}, {})-factor", f.side, f.r, f.k));
            }
        }
        for f in &self.eulerians {
            if host.subset_degrees(f).iter().any(|d| d % 2 == 1) {
                return Err("an Eulerian part has a vertex of odd degree".into());
            }
        }
        Ok(())
    }
}

/// A pair of fractional factorizations, over side A (`f1`) and side B (`f2`),
/// whose hosts decompose G.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bifactorization {
    pub f1: FractionalFactorization,
    pub f2: FractionalFactorization,
}

impl Bifactorization {
    pub fn g1(&self) -> EdgeSet {
        self.f1.all_edges()
    }

    pub fn g2(&self) -> EdgeSet {
        self.f2.all_edges()
    }

    /// (l, k) of the shared shape.
    pub fn shape(&self) -> (usize, usize) {
        (self.f1.ell(), self.f1.k)
    }

    pub fn check(&self, g: &MultiGraph) -> Result<(), String> {
        if self.f1.side != Side::A || self.f2.side != Side::B {
            return Err("f1 must be over A and f2 over B".into());
        }
        if (self.f2.ell(), self.f2.k) != self.shape() {
            return Err("the two factorizations have different shapes".into());
        }
        let (g1, g2) = (self.g1(), self.g2());
        if !g1.is_disjoint(&g2) {
            return Err("G1 and G2 share an edge".into());
        }
        if g1.len() + g2.len() != g.edge_count() {
            return Err("G1 and G2 do not cover G".into());
        }
        for (f, part) in [(&self.f1, &g1), (&self.f2, &g2)] {
            let host = g.induced_by_edges(part).map_err(|e| e.to_string())?;
            f.check(&host).map_err(|msg| format!("side {}: {msg}", f.side))?;
        }
        Ok(())
    }

    /// Strongness: d_{G_i}(v) ≥ (k/p)((k/p)+p) on side A_i, with shape (p, k).
    pub fn check_strong(&self, g: &MultiGraph) -> Result<(), String> {
        self.check(g)?;
        let (p, k) = self.shape();
        for (side, part) in [(Side::A, self.g1()), (Side::B, self.g2())] {
            let deg = g.subset_degrees(&part);
            for v in g.vertices_on(side) {
                // d ≥ (k/p)(k/p + p)  ⇔  d·p² ≥ k(k + p²)
                if deg[v.index()] * p * p < k * (k + p * p) {
                    return Err(format!("d_G{}({v}) = {} is below the strongness bound", if side == Side::A { 1 } else { 2 }, deg[v.index()]));
                }
            }
        }
        Ok(())
    }

    pub fn to_document(&self) -> BifactorizationDocument {
        BifactorizationDocument {
            ell: self.f1.ell(),
            k: self.f1.k,
            a: FactorizationDocument::from(&self.f1),
            b: FactorizationDocument::from(&self.f2),
        }
    }

    pub fn from_document(doc: &BifactorizationDocument) -> Result<Self, FactorError> {
        let f1 = doc.a.to_factorization(Side::A, doc.k);
        let f2 = doc.b.to_factorization(Side::B, doc.k);
        if f1.ell() != doc.ell || f2.ell() != doc.ell {
            return Err(FactorError::ShapeMismatch(format!("document declares l = {}", doc.ell)));
        }
        Ok(Bifactorization { f1, f2 })
    }
}

/// `{"M":[ids],"N":[ids],"F":[[ids],…]}` for one side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationDocument {
    #[serde(rename = "M")]
    pub m: Vec<EdgeId>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<EdgeId>>,
    #[serde(rename = "F")]
    pub f: Vec<Vec<EdgeId>>,
}

impl From<&FractionalFactorization> for FactorizationDocument {
    fn from(ff: &FractionalFactorization) -> Self {
        FactorizationDocument {
            m: ff.matchings.first().map(EdgeSet::to_vec).unwrap_or_default(),
            n: ff.matchings.get(1).map(EdgeSet::to_vec),
            f: ff.eulerians.iter().map(EdgeSet::to_vec).collect(),
        }
    }
}

impl FactorizationDocument {
    fn to_factorization(&self, side: Side, k: usize) -> FractionalFactorization {
        let mut matchings = vec![self.m.iter().copied().collect()];
        if let Some(n) = &self.n {
            matchings.push(n.iter().copied().collect());
        }
        FractionalFactorization {
            side,
            k,
            matchings,
            eulerians: self.f.iter().map(|f| f.iter().copied().collect()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BifactorizationDocument {
    pub ell: usize,
    pub k: usize,
    #[serde(rename = "A")]
    pub a: FactorizationDocument,
    #[serde(rename = "B")]
    pub b: FactorizationDocument,
}

/// Eulerian factor split along an Eulerian orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrientedFactorSplit {
    /// Edges leaving the owning side.
    pub forw: EdgeSet,
    pub back: EdgeSet,
}

/// Checks of the regular multigraph G* built inside the odd fractional factorization.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GStarReport {
    pub vertices: usize,
    pub edges: usize,
    pub degree: usize,
    pub regular: bool,
    pub even_order: bool,
    pub connected_2k: bool,
    pub rest_independent: bool,
    pub liftings: usize,
    pub suppressions: usize,
    pub attempts: usize,
}

impl GStarReport {
    pub fn holds(&self) -> bool {
        self.regular && self.even_order && self.connected_2k && self.rest_independent
    }
}

fn factor_holds(g: &MultiGraph, f: &EdgeSet, side: Side, r: usize, k: usize) -> bool {
    let deg = g.subset_degrees(f);
    g.vertices_on(side).all(|v| deg[v.index()] * k == r * g.deg(v))
}

/// Whether `f` is an (X, r, k)-factor of `g` with X the vertices on `side`.
pub fn verify_factor(g: &MultiGraph, f: &EdgeSet, side: Side, r: usize, k: usize) -> Result<bool, FactorError> {
    g.check_subset(f)?;
    Ok(factor_holds(g, f, side, r, k))
}

pub fn verify_strong(g: &MultiGraph, bif: &Bifactorization) -> bool {
    bif.check_strong(g).is_ok()
}

/// Splits an Eulerian factor into the edges leaving and entering `side`
/// under an Eulerian orientation.
pub fn split_factor_by_orientation(g: &MultiGraph, f: &EdgeSet, side: Side) -> Result<OrientedFactorSplit, FactorError> {
    let o = flowcut::eulerian_orientation(g, f)?;
    let mut split = OrientedFactorSplit {
        forw: EdgeSet::new(),
        back: EdgeSet::new(),
    };
    for (e, tail, _) in o.iter() {
        if g.side(tail) == Some(side) {
            split.forw.insert(e);
        } else {
            split.back.insert(e);
        }
    }
    Ok(split)
}

/// Maximum matching of a simple graph on 0..n by Edmonds' blossom algorithm.
fn blossom_matching(adj: &[Vec<usize>]) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let n = adj.len();
    let mut mate = vec![NONE; n];
    for v in 0..n {
        if mate[v] == NONE {
            if let Some(&u) = adj[v].iter().find(|&&u| mate[u] == NONE) {
                mate[u] = v;
                mate[v] = u;
            }
        }
    }
    let mut parent = vec![NONE; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut blossom = vec![false; n];
    let mut mark = vec![false; n];

    fn lca(mut a: usize, mut b: usize, mate: &[usize], parent: &[usize], base: &[usize], mark: &mut [bool]) -> usize {
        mark.iter_mut().for_each(|m| *m = false);
        loop {
            a = base[a];
            mark[a] = true;
            if mate[a] == usize::MAX {
                break;
            }
            a = parent[mate[a]];
        }
        loop {
            b = base[b];
            if mark[b] {
                return b;
            }
            b = parent[mate[b]];
        }
    }

    fn mark_path(mut v: usize, b: usize, mut child: usize, mate: &[usize], parent: &mut [usize], base: &[usize], blossom: &mut [bool]) {
        while base[v] != b {
            blossom[base[v]] = true;
            blossom[base[mate[v]]] = true;
            parent[v] = child;
            child = mate[v];
            v = parent[mate[v]];
        }
    }

    for root in 0..n {
        if mate[root] != NONE {
            continue;
        }
        parent.iter_mut().for_each(|p| *p = NONE);
        used.iter_mut().for_each(|u| *u = false);
        for (i, b) in base.iter_mut().enumerate() {
            *b = i;
        }
        used[root] = true;
        let mut queue = VecDeque::from([root]);
        let mut end = NONE;
        'search: while let Some(v) = queue.pop_front() {
            for &to in &adj[v] {
                if base[v] == base[to] || mate[v] == to {
                    continue;
                }
                if to == root || (mate[to] != NONE && parent[mate[to]] != NONE) {
                    let cur = lca(v, to, &mate, &parent, &base, &mut mark);
                    blossom.iter_mut().for_each(|b| *b = false);
                    mark_path(v, cur, to, &mate, &mut parent, &base, &mut blossom);
                    mark_path(to, cur, v, &mate, &mut parent, &base, &mut blossom);
                    for i in 0..n {
                        if blossom[base[i]] {
                            base[i] = cur;
                            if !used[i] {
                                used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if parent[to] == NONE {
                    parent[to] = v;
                    if mate[to] == NONE {
                        end = to;
                        break 'search;
                    }
                    used[mate[to]] = true;
                    queue.push_back(mate[to]);
                }
            }
        }
        let mut v = end;
        while v != NONE {
            let pv = parent[v];
            let next = mate[pv];
            mate[v] = pv;
            mate[pv] = v;
            v = next;
        }
    }
    mate
}

/// A perfect matching of a loopless multigraph; parallel classes are
/// collapsed and the lowest edge id of a matched class is returned.
pub fn perfect_matching(g: &MultiGraph) -> Result<EdgeSet, FactorError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    if verts.len() % 2 == 1 {
        return Err(FactorError::NoPerfectMatching);
    }
    let mut index = vec![usize::MAX; g.vertex_bound()];
    for (i, v) in verts.iter().enumerate() {
        index[v.index()] = i;
    }
    let mut lowest: BTreeMap<(usize, usize), EdgeId> = BTreeMap::new();
    for (e, u, v) in g.edges() {
        let (a, b) = (index[u.index()], index[v.index()]);
        let entry = lowest.entry((a.min(b), a.max(b))).or_insert(e);
        *entry = (*entry).min(e);
    }
    let mut adj = vec![Vec::new(); verts.len()];
    for &(a, b) in lowest.keys() {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mate = blossom_matching(&adj);
    let mut out = EdgeSet::new();
    for (a, &b) in mate.iter().enumerate() {
        if b == usize::MAX {
            return Err(FactorError::NoPerfectMatching);
        }
        if a < b {
            out.insert(lowest[&(a, b)]);
        }
    }
    Ok(out)
}

/// Decomposes a 2k-regular multigraph into k spanning 2-regular edge sets.
pub fn two_factorization(g: &MultiGraph) -> Result<Vec<EdgeSet>, FactorError> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let Some(&first) = verts.first() else {
        return Ok(Vec::new());
    };
    let d = g.deg(first);
    if let Some(&v) = verts.iter().find(|&&v| g.deg(v) != d || d % 2 == 1) {
        return Err(FactorError::NotEvenRegular(v));
    }
    let orientation = flowcut::eulerian_orientation(g, &g.edge_set())?;
    let n = g.vertex_bound();
    let mut remaining: Vec<(EdgeId, VertexId, VertexId)> = orientation.iter().collect();
    let mut factors = Vec::with_capacity(d / 2);
    for _ in 0..d / 2 {
        // out-copy of the tail matched to in-copy of the head
        let (s, t) = (2 * n, 2 * n + 1);
        let mut net = Dinic::new(2 * n + 2);
        for &v in &verts {
            net.add_arc(s, v.index(), 1);
            net.add_arc(n + v.index(), t, 1);
        }
        let arcs: Vec<usize> = remaining
            .iter()
            .map(|&(_, tail, head)| net.add_arc(tail.index(), n + head.index(), 1))
            .collect();
        if net.max_flow(s, t) != verts.len() as i64 {
            return Err(FactorError::Internal("regular bipartite double graph lacks a perfect matching".into()));
        }
        let mut factor = EdgeSet::new();
        let mut rest = Vec::with_capacity(remaining.len());
        for (i, arc) in arcs.into_iter().enumerate() {
            if net.flow_on(arc) == 1 {
                factor.insert(remaining[i].0);
            } else {
                rest.push(remaining[i]);
            }
        }
        remaining = rest;
        factors.push(factor);
    }
    Ok(factors)
}

fn side_swapped(g: &MultiGraph) -> MultiGraph {
    let mut h = MultiGraph::new();
    h.set_relaxed(g.is_relaxed());
    for v in g.vertices() {
        h.add_vertex(v, g.side(v).map(Side::other)).expect("fresh vertex");
    }
    for (e, u, v) in g.edges() {
        h.add_edge_with_id(e, u, v).expect("valid edge");
    }
    h
}

fn check_divisible(g: &MultiGraph, side: Side, modulus: usize) -> Result<(), FactorError> {
    if !g.is_bipartite_labelled() {
        return Err(FactorError::Precondition("graph is not a labelled bipartite graph".into()));
    }
    match g.vertices_on(side).find(|&v| !g.deg(v).is_multiple_of(modulus)) {
        Some(v) => Err(FactorError::Precondition(format!(
            "d({v}) = {} is not divisible by {modulus}",
            g.deg(v)
        ))),
        None => Ok(()),
    }
}

enum AttemptError {
    Retry(String),
    Fatal(FactorError),
}

impl From<SurgeryError> for AttemptError {
    fn from(err: SurgeryError) -> Self {
        AttemptError::Fatal(err.into())
    }
}

/// Lifts and suppresses the non-owning copies until every vertex has degree 2k+1.
fn regularize(rw: &mut Rewrite, side: Side, k: usize, report: &mut GStarReport) -> Result<(), AttemptError> {
    let target = 2 * k + 1;
    loop {
        let next = rw
            .graph
            .vertices_on(side.other())
            .filter(|&v| ![1, 2, target].contains(&rw.graph.deg(v)))
            .min_by_key(|&v| (rw.graph.deg(v), v));
        let Some(v) = next else { break };
        if rw.graph.deg(v) == 0 {
            return Err(AttemptError::Fatal(FactorError::Internal(format!("copy {v} lost all its edges"))));
        }
        let (u, w) = match structops::find_admissible_lifting(&rw.graph, v, 2 * k) {
            Ok(pair) => pair,
            Err(err) => return Err(AttemptError::Retry(err.to_string())),
        };
        rw.lift(v, u, w)?;
        report.liftings += 1;
    }
    let rest: Vec<VertexId> = rw.graph.vertices_on(side.other()).collect();
    for v in rest {
        match rw.graph.deg(v) {
            1 => {
                return Err(AttemptError::Fatal(FactorError::Internal(format!(
                    "copy {v} reached degree 1 during lifting"
                ))))
            }
            2 => match rw.suppress(v) {
                Ok(_) => report.suppressions += 1,
                Err(SurgeryError::WouldCreateLoop(..)) => {
                    return Err(AttemptError::Retry(format!("suppressing {v} would create a loop")))
                }
                Err(err) => return Err(err.into()),
            },
            _ => {}
        }
    }
    Ok(())
}

fn inspect_gstar(g: &MultiGraph, side: Side, k: usize, report: &mut GStarReport) {
    let target = 2 * k + 1;
    report.vertices = g.vertex_count();
    report.edges = g.edge_count();
    report.degree = target;
    report.regular = g.vertices().all(|v| g.deg(v) == target);
    report.even_order = g.vertex_count().is_multiple_of(2);
    report.connected_2k = flowcut::is_k_edge_connected(g, 2 * k);
    report.rest_independent = g
        .edges()
        .all(|(_, u, v)| g.side(u) == Some(side) || g.side(v) == Some(side));
}

/// (X, 1, 2k+1)-fractional factorization of a 2k-edge-connected bipartite
/// graph, X the vertices on `side`, together with the checks made on G*.
pub fn fractional_factorization_odd_reported(
    g: &MultiGraph,
    side: Side,
    k: usize,
    seed: u64,
    budget: usize,
) -> Result<(FractionalFactorization, GStarReport), FactorError> {
    if k == 0 {
        return Err(FactorError::Precondition("k must be positive".into()));
    }
    let denom = 2 * k + 1;
    check_divisible(g, side, denom)?;
    if g.edge_count() == 0 {
        let ff = FractionalFactorization {
            side,
            k: denom,
            matchings: vec![EdgeSet::new()],
            eulerians: vec![EdgeSet::new(); k],
        };
        let report = GStarReport {
            degree: denom,
            regular: true,
            even_order: true,
            connected_2k: true,
            rest_independent: true,
            ..GStarReport::default()
        };
        return Ok((ff, report));
    }
    if !flowcut::is_k_edge_connected(g, 2 * k) {
        return Err(FactorError::Precondition(format!("graph is not {}-edge-connected", 2 * k)));
    }
    let mut spec = SplitSpec::new();
    for v in g.vertices() {
        let d = g.deg(v);
        let parts = if g.side(v) == Some(side) {
            vec![denom; d / denom]
        } else {
            let (s, r) = (d / (2 * k), d % (2 * k));
            let mut parts = vec![2 * k; s];
            parts[0] += r;
            parts
        };
        spec.insert(v, parts);
    }
    let mut last = String::new();
    for attempt in 0..budget.max(1) {
        let det = structops::detach_connected(g, &spec, k, seed.wrapping_add(1_000_003 * attempt as u64), budget)?;
        let mut rw = Rewrite {
            graph: det.graph,
            trace: det.trace,
        };
        rw.graph.set_relaxed(true);
        let mut report = GStarReport {
            attempts: attempt + 1,
            ..GStarReport::default()
        };
        match regularize(&mut rw, side, k, &mut report) {
            Ok(()) => {}
            Err(AttemptError::Fatal(err)) => return Err(err),
            Err(AttemptError::Retry(msg)) => {
                log::debug!("regularizing attempt {attempt}: {msg}");
                last = msg;
                continue;
            }
        }
        inspect_gstar(&rw.graph, side, k, &mut report);
        if !report.holds() {
            last = format!("G* failed its checks: {report:?}");
            log::debug!("{last}");
            continue;
        }
        let m_star = perfect_matching(&rw.graph)?;
        let parts = two_factorization(&rw.graph.without_edges(&m_star))?;
        let ff = FractionalFactorization {
            side,
            k: denom,
            matchings: vec![structops::pullback(&rw.trace, &m_star)?],
            eulerians: parts
                .iter()
                .map(|p| structops::pullback(&rw.trace, p))
                .collect::<Result<_, _>>()?,
        };
        ff.check(g).map_err(FactorError::Internal)?;
        return Ok((ff, report));
    }
    log::debug!("odd fractional factorization gave up: {last}");
    Err(FactorError::BudgetExhausted(budget))
}

pub fn fractional_factorization_odd(
    g: &MultiGraph,
    side: Side,
    k: usize,
    seed: u64,
    budget: usize,
) -> Result<FractionalFactorization, FactorError> {
    fractional_factorization_odd_reported(g, side, k, seed, budget).map(|(ff, _)| ff)
}

/// (X, 2, 2k+2)-fractional factorization: split off an (X, 1, 2k+2)-factor N
/// whose complement stays 2k-edge-connected, then factorize the complement.
pub fn fractional_factorization_even2_reported(
    g: &MultiGraph,
    side: Side,
    k: usize,
    seed: u64,
    budget: usize,
) -> Result<(FractionalFactorization, GStarReport), FactorError> {
    if k == 0 {
        return Err(FactorError::Precondition("k must be positive".into()));
    }
    let denom = 2 * k + 2;
    check_divisible(g, side, denom)?;
    let (gk, gr) = if side == Side::A {
        packing::fraction_split(g, 2 * k + 1, 2 * k, 1)?
    } else {
        packing::fraction_split(&side_swapped(g), 2 * k + 1, 2 * k, 1)?
    };
    let host = g.induced_by_edges(&gk)?;
    let (inner, report) = fractional_factorization_odd_reported(&host, side, k, seed, budget)?;
    let mut matchings = inner.matchings;
    matchings.push(gr);
    let ff = FractionalFactorization {
        side,
        k: denom,
        matchings,
        eulerians: inner.eulerians,
    };
    ff.check(g).map_err(FactorError::Internal)?;
    Ok((ff, report))
}

pub fn fractional_factorization_even2(
    g: &MultiGraph,
    side: Side,
    k: usize,
    seed: u64,
    budget: usize,
) -> Result<FractionalFactorization, FactorError> {
    fractional_factorization_even2_reported(g, side, k, seed, budget).map(|(ff, _)| ff)
}

fn accept_hint(g: &MultiGraph, hint: Option<&Bifactorization>, shape: (usize, usize)) -> Option<Bifactorization> {
    let hint = hint?;
    if hint.shape() != shape {
        log::warn!("ignoring bifactorization hint of shape {:?}, expected {shape:?}", hint.shape());
        return None;
    }
    match hint.check_strong(g) {
        Ok(()) => Some(hint.clone()),
        Err(msg) => {
            log::warn!("ignoring bifactorization hint: {msg}");
            None
        }
    }
}

/// Strong (1, 2k+1)-bifactorization, with the G* reports of both sides.
/// A certified `hint` of the right shape is returned as is.
pub fn bifactorize_odd_reported(
    g: &MultiGraph,
    k: usize,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<(Bifactorization, Vec<GStarReport>), FactorError> {
    bifactorize_odd_with(g, k, (2 * k + 1) * (2 * k + 2), true, seed, budget, hint)
}

/// (1, 2k+1)-bifactorization from a connected split with parameter `r`;
/// strongness is checked only when `strong` is set.
pub fn bifactorize_odd_with(
    g: &MultiGraph,
    k: usize,
    r: usize,
    strong: bool,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<(Bifactorization, Vec<GStarReport>), FactorError> {
    if k == 0 {
        return Err(FactorError::Precondition("k must be positive".into()));
    }
    let denom = 2 * k + 1;
    if !g.edge_count().is_multiple_of(denom) {
        return Err(FactorError::Precondition(format!("|E| = {} is not divisible by {denom}", g.edge_count())));
    }
    if let Some(bif) = accept_hint(g, hint, (1, denom)) {
        return Ok((bif, Vec::new()));
    }
    let (g1, g2) = packing::connected_split(g, denom, r, seed, budget)?;
    let (f1, rep1) = fractional_factorization_odd_reported(&g.induced_by_edges(&g1)?, Side::A, k, seed, budget)?;
    let (f2, rep2) = fractional_factorization_odd_reported(&g.induced_by_edges(&g2)?, Side::B, k, seed, budget)?;
    let bif = Bifactorization { f1, f2 };
    finish_check(g, &bif, strong)?;
    Ok((bif, vec![rep1, rep2]))
}

fn finish_check(g: &MultiGraph, bif: &Bifactorization, strong: bool) -> Result<(), FactorError> {
    if strong {
        bif.check_strong(g).map_err(FactorError::Internal)
    } else {
        bif.check(g).map_err(FactorError::Internal)
    }
}

pub fn bifactorize_odd(
    g: &MultiGraph,
    k: usize,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<Bifactorization, FactorError> {
    bifactorize_odd_reported(g, k, seed, budget, hint).map(|(b, _)| b)
}

/// Strong (2, 2k+2)-bifactorization. A certified `hint` of the right shape is returned as is.
pub fn bifactorize_even(
    g: &MultiGraph,
    k: usize,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<Bifactorization, FactorError> {
    bifactorize_even_with(g, k, (32 * k).max((k + 1) * (k + 3)), true, seed, budget, hint)
}

/// (2, 2k+2)-bifactorization from a connected split with parameter `r`.
pub fn bifactorize_even_with(
    g: &MultiGraph,
    k: usize,
    r: usize,
    strong: bool,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<Bifactorization, FactorError> {
    if k == 0 {
        return Err(FactorError::Precondition("k must be positive".into()));
    }
    let denom = 2 * k + 2;
    if !g.edge_count().is_multiple_of(denom) {
        return Err(FactorError::Precondition(format!("|E| = {} is not divisible by {denom}", g.edge_count())));
    }
    if let Some(bif) = accept_hint(g, hint, (2, denom)) {
        return Ok(bif);
    }
    let (g1, g2) = packing::connected_split(g, denom, r, seed, budget)?;
    let f1 = fractional_factorization_even2(&g.induced_by_edges(&g1)?, Side::A, k, seed, budget)?;
    let f2 = fractional_factorization_even2(&g.induced_by_edges(&g2)?, Side::B, k, seed, budget)?;
    let bif = Bifactorization { f1, f2 };
    finish_check(g, &bif, strong)?;
    Ok(bif)
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn unlabelled(n: usize, edges: &[(u32, u32)]) -> MultiGraph {
        let mut g = MultiGraph::new();
        for _ in 0..n {
            g.fresh_vertex(None);
        }
        for &(u, v) in edges {
            g.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
        g
    }

    fn is_perfect(g: &MultiGraph, m: &EdgeSet) -> bool {
        g.subset_degrees(m).iter().enumerate().all(|(i, &d)| !g.contains_vertex(VertexId(i as u32)) || d == 1)
    }

    fn brute_has_perfect(g: &MultiGraph) -> bool {
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        (0u32..1 << edges.len()).any(|mask| {
            let m: EdgeSet = edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            is_perfect(g, &m)
        })
    }

    #[test]
    fn matching_small_cases() {
        let single = unlabelled(2, &[(0, 1)]);
        assert_eq!(perfect_matching(&single).unwrap().to_vec(), vec![EdgeId(0)]);
        let c6 = unlabelled(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let m = perfect_matching(&c6).unwrap();
        assert!(is_perfect(&c6, &m));
        let cubic = unlabelled(4, &[(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]);
        assert!(brute_has_perfect(&cubic));
        let m = perfect_matching(&cubic).unwrap();
        assert!(is_perfect(&cubic, &m));
        // parallel class represented by its lowest id
        assert!(m.contains(EdgeId(0)) || m.contains(EdgeId(4)));
    }

    #[test]
    fn matching_needs_blossoms() {
        // two triangles joined by an edge: a blossom must be shrunk to match 2–3
        let g = unlabelled(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)]);
        assert!(is_perfect(&g, &perfect_matching(&g).unwrap()));
        let star = unlabelled(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(perfect_matching(&star), Err(FactorError::NoPerfectMatching));
        let odd = unlabelled(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(perfect_matching(&odd), Err(FactorError::NoPerfectMatching));
    }

    #[test]
    fn two_factors_of_regular_graphs() {
        let c4 = unlabelled(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert_eq!(two_factorization(&c4).unwrap(), vec![c4.edge_set()]);
        let k5 = unlabelled(5, &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
        let parts = two_factorization(&k5).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_disjoint(&parts[1]));
        assert_eq!(parts[0].len() + parts[1].len(), 10);
        for p in &parts {
            assert!(k5.vertices().all(|v| k5.subset_degree(p, v).unwrap() == 2));
        }
        let cubic = unlabelled(4, &[(0, 1), (0, 1), (2, 3), (2, 3), (0, 2), (1, 3)]);
        assert!(matches!(two_factorization(&cubic), Err(FactorError::NotEvenRegular(_))));
    }

    /// Brute force: does K_{3,3} admit any (A,1,3)-fractional factorization?
    fn brute_k33_factorization(g: &MultiGraph) -> bool {
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        (0u32..1 << edges.len()).any(|mask| {
            let m: EdgeSet = edges.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
            let f = g.edge_set().difference(&m);
            factor_holds(g, &m, Side::A, 1, 3) && g.subset_degrees(&f).iter().all(|d| d % 2 == 0)
        })
    }

    #[test]
    fn odd_factorization_of_k33() {
        let g = complete(3, 3);
        assert!(brute_k33_factorization(&g));
        let (ff, report) = fractional_factorization_odd_reported(&g, Side::A, 1, 0, 8).unwrap();
        assert!(report.holds());
        assert_eq!(report.liftings, 0);
        ff.check(&g).unwrap();
        for v in g.vertices_on(Side::A) {
            assert_eq!(g.subset_degree(&ff.matchings[0], v).unwrap(), 1);
            assert_eq!(g.subset_degree(&ff.eulerians[0], v).unwrap(), 2);
        }
        let bad = complete(2, 2);
        assert!(matches!(
            fractional_factorization_odd(&bad, Side::A, 1, 0, 8),
            Err(FactorError::Precondition(_))
        ));
    }

    #[test]
    fn odd_factorization_with_liftings() {
        // k = 2: A-degrees 10 split into copies of 5, B-degrees 10 into 4+6.
        let g = circulant(10, &(0..10).collect::<Vec<_>>());
        let (ff, report) = fractional_factorization_odd_reported(&g, Side::A, 2, 3, 16).unwrap();
        assert!(report.holds());
        assert!(report.liftings > 0);
        assert_eq!(ff.eulerians.len(), 2);
        ff.check(&g).unwrap();
        // and over side B
        let ff = fractional_factorization_odd(&g, Side::B, 2, 3, 16).unwrap();
        ff.check(&g).unwrap();
    }

    #[test]
    fn orientation_split_halves() {
        let g = circulant(8, &[0, 1, 2, 3]);
        let split = split_factor_by_orientation(&g, &g.edge_set(), Side::A).unwrap();
        assert_eq!(split.forw.len() + split.back.len(), g.edge_count());
        for v in g.vertices() {
            assert_eq!(g.subset_degree(&split.forw, v).unwrap(), 2);
            assert_eq!(g.subset_degree(&split.back, v).unwrap(), 2);
        }
        assert!(verify_factor(&g, &split.forw, Side::A, 1, 2).unwrap());
        assert!(verify_factor(&g, &EdgeSet::new(), Side::A, 1, 1).is_ok());
    }

    #[test]
    fn empty_factor_over_empty_side() {
        let g = MultiGraph::new();
        assert!(verify_factor(&g, &EdgeSet::new(), Side::A, 1, 3).unwrap());
        let foreign: EdgeSet = [EdgeId(4)].into_iter().collect();
        assert!(verify_factor(&g, &foreign, Side::A, 1, 3).is_err());
    }

    fn offset_edges(g: &MultiGraph, n: usize, offsets: std::ops::Range<usize>) -> EdgeSet {
        // circulant edge ids are laid out offset-major
        offsets.flat_map(|s| (0..n).map(move |i| EdgeId((s * n + i) as u32))).filter(|e| g.contains_edge(*e)).collect()
    }

    #[test]
    fn hint_is_checked_and_returned() {
        let n = 24;
        let g = circulant(n, &(0..24).collect::<Vec<_>>());
        let ff = |side, m, f| FractionalFactorization {
            side,
            k: 3,
            matchings: vec![offset_edges(&g, n, m)],
            eulerians: vec![offset_edges(&g, n, f)],
        };
        let bif = Bifactorization {
            f1: ff(Side::A, 0..4, 4..12),
            f2: ff(Side::B, 12..16, 16..24),
        };
        assert!(verify_strong(&g, &bif));
        let doc = serde_json::to_string(&bif.to_document()).unwrap();
        let back: BifactorizationDocument = serde_json::from_str(&doc).unwrap();
        assert_eq!(Bifactorization::from_document(&back).unwrap(), bif);
        assert_eq!(bifactorize_odd(&g, 1, 0, 1, Some(&bif)).unwrap(), bif);
        let mut broken = bif.clone();
        let e = broken.f1.matchings[0].iter().next().unwrap();
        broken.f1.matchings[0].remove(e);
        broken.f1.eulerians[0].insert(e);
        assert!(!verify_strong(&g, &broken));
    }

    #[test]
    fn bifactorize_odd_on_circulant() {
        // K_{54,54} holds the 24 spanning trees the split packs
        let g = complete(54, 54);
        let (bif, reports) = bifactorize_odd_reported(&g, 1, 5, 16, None).unwrap();
        assert!(verify_strong(&g, &bif));
        assert_eq!(reports.len(), 2);
        assert!(reports.iter().all(GStarReport::holds));
        assert!(matches!(
            bifactorize_odd(&circulant(4, &[0]), 1, 0, 4, None),
            Err(FactorError::Precondition(_))
        ));
    }

    #[test]
    fn even2_on_circulant() {
        // k = 1: A-degrees 32 ≡ 0 mod 4; G_r takes a quarter.
        let g = circulant(36, &(0..32).collect::<Vec<_>>());
        let ff = fractional_factorization_even2(&g, Side::A, 1, 1, 8).unwrap();
        ff.check(&g).unwrap();
        assert_eq!(ff.matchings.len(), 2);
        for v in g.vertices_on(Side::A) {
            assert_eq!(g.subset_degree(&ff.matchings[0], v).unwrap(), 8);
            assert_eq!(g.subset_degree(&ff.matchings[1], v).unwrap(), 8);
        }
        let bad = circulant(6, &[0, 1, 2]);
        assert!(matches!(
            fractional_factorization_even2(&bad, Side::A, 1, 0, 4),
            Err(FactorError::Precondition(_))
        ));
    }
}
