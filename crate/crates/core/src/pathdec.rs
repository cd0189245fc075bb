//! Base cases, the odd and even inductions over bifactorizations, connectivity
//! thresholds and the top-level `decompose` entry point.

use crate::disentangle::{disentangle, improve_completeness, DisentangleError, SwapRecord};
use crate::factorize::{
    bifactorize_even_with, bifactorize_odd_with, split_factor_by_orientation, Bifactorization, FactorError,
    FractionalFactorization,
};
use crate::flowcut::{euler_circuits, is_k_edge_connected, FlowError};
use crate::graph::{EdgeId, EdgeSet, GraphError, MultiGraph, Side, VertexId};
use crate::packing::{PackingError, TreePack};
use crate::testbed::verify_decomposition;
use crate::tracking::{balance_violations, is_precomplete, Tracking, TrackingDecomposition, TrackingError};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PathDecError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Flow(#[from] FlowError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error(transparent)]
    Disentangle(#[from] DisentangleError),
    #[error("|E| = {edges} is not divisible by {ell}")]
    Divisibility { edges: usize, ell: usize },
    #[error("no bifactorization within {0} attempts")]
    BudgetExhausted(usize),
    #[error("decomposition failed verification: {0}")]
    VerificationFailed(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("|S_v| differs from the endpoint count at {0} vertices")]
    ExtensionMismatch(usize),
    #[error("induction invariant violated: {0}")]
    Invariant(String),
    #[error("input graph is not bipartite with labelled sides")]
    NotBipartite,
    #[error("graph contains no path of length {0}")]
    NoPath(usize),
    #[error("path length must be positive")]
    ZeroLength,
}

/// `{"ell":int,"paths":[[vertex ids]…],"edges":[[edge ids]…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathDecomposition {
    pub ell: usize,
    pub paths: Vec<Vec<VertexId>>,
    pub edges: Vec<Vec<EdgeId>>,
}

impl PathDecomposition {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn from_trackings(d: &TrackingDecomposition) -> Result<Self, PathDecError> {
        if let Some(i) = d.trackings.iter().position(|t| !t.is_path()) {
            return Err(PathDecError::Invariant(format!("tracking {i} is not a path")));
        }
        Ok(PathDecomposition {
            ell: d.ell,
            paths: d.trackings.iter().map(|t| t.vertices().to_vec()).collect(),
            edges: d.trackings.iter().map(|t| t.edges().to_vec()).collect(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }
}

/// Edge-connectivity that suffices for a P_ℓ-decomposition, and the divisor
/// |E| must be a multiple of.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectivityRequirement {
    pub ell: usize,
    pub threshold: usize,
    pub divisor: usize,
}

/// Odd ℓ = 2k+1: 2(6k + 2r + 1) with r = (2k+1)(2k+2).
/// Even ℓ = 2k+2: 2(12k + 2r + 10) for |E| divisible by 2ℓ, with
/// r = max(32(2k+1), (2k+2)(2k+4)).
pub fn required_connectivity(ell: usize) -> ConnectivityRequirement {
    required_connectivity_variants(ell)[0]
}

/// All variants; for even ℓ the second one only needs ℓ to divide |E|.
pub fn required_connectivity_variants(ell: usize) -> Vec<ConnectivityRequirement> {
    assert!(ell >= 1, "path length must be positive");
    if ell % 2 == 1 {
        let k = (ell - 1) / 2;
        let r = (2 * k + 1) * (2 * k + 2);
        vec![ConnectivityRequirement {
            ell,
            threshold: 2 * (6 * k + 2 * r + 1),
            divisor: ell,
        }]
    } else {
        let k = (ell - 2) / 2;
        let r = (32 * (2 * k + 1)).max((2 * k + 2) * (2 * k + 4));
        vec![
            ConnectivityRequirement {
                ell,
                threshold: 2 * (12 * k + 2 * r + 10),
                divisor: 2 * ell,
            },
            ConnectivityRequirement {
                ell,
                threshold: 2 * (26 * k + 4 * r + 22),
                divisor: ell,
            },
        ]
    }
}

/// Bookkeeping of one induction level.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelReport {
    pub ell: usize,
    pub identity_checks: usize,
    pub identity_violations: usize,
    pub extension_checks: usize,
    pub extension_mismatches: usize,
    pub precomplete: bool,
    pub completeness_swaps: usize,
    pub tau_before: usize,
    pub rounds: usize,
    pub balanced: bool,
    pub swaps: Vec<SwapRecord>,
}

/// Maximum assignment of `rows` to `cols` along compatible pairs (Kuhn),
/// completed arbitrarily. Requires equal sizes.
fn assign(n: usize, ok: impl Fn(usize, usize) -> bool) -> Vec<usize> {
    const NONE: usize = usize::MAX;
    let mut col_of = vec![NONE; n];
    let mut row_of = vec![NONE; n];
    fn try_row(
        r: usize,
        ok: &dyn Fn(usize, usize) -> bool,
        seen: &mut [bool],
        col_of: &mut [usize],
        row_of: &mut [usize],
    ) -> bool {
        for c in 0..col_of.len() {
            if ok(r, c) && !seen[c] {
                seen[c] = true;
                if row_of[c] == usize::MAX || try_row(row_of[c], ok, seen, col_of, row_of) {
                    row_of[c] = r;
                    col_of[r] = c;
                    return true;
                }
            }
        }
        false
    }
    for r in 0..n {
        let mut seen = vec![false; n];
        try_row(r, &ok, &mut seen, &mut col_of, &mut row_of);
    }
    let mut free = (0..n).filter(|&c| row_of[c] == NONE);
    for c in col_of.iter_mut() {
        if *c == NONE {
            *c = free.next().expect("sizes agree");
        }
    }
    col_of
}

/// Cuts the Euler circuits of `f` into 2-trackings that start and end on `side`,
/// grouped by start vertex.
fn two_trackings(
    g: &MultiGraph,
    f: &EdgeSet,
    side: Side,
) -> Result<BTreeMap<VertexId, Vec<([VertexId; 3], [EdgeId; 2])>>, PathDecError> {
    let mut out: BTreeMap<VertexId, Vec<_>> = BTreeMap::new();
    for (vs, es) in euler_circuits(g, f, |v| g.side(v) == Some(side))? {
        if g.side(vs[0]) != Some(side) || es.len() % 2 != 0 {
            return Err(PathDecError::Invariant("Euler circuit does not start on the owning side".into()));
        }
        for j in (0..es.len()).step_by(2) {
            out.entry(vs[j]).or_default().push(([vs[j], vs[j + 1], vs[j + 2]], [es[j], es[j + 1]]));
        }
    }
    Ok(out)
}

fn edges_at(g: &MultiGraph, f: &EdgeSet, v: VertexId) -> Vec<EdgeId> {
    g.incident(v).iter().copied().filter(|&e| f.contains(e)).collect()
}

/// Balanced 3-tracking decomposition from a (1,3)-bifactorization: each
/// Eulerian factor is cut into 2-trackings, each extended by a matching edge.
pub fn base_odd(g: &MultiGraph, bif: &Bifactorization) -> Result<TrackingDecomposition, PathDecError> {
    if bif.shape() != (1, 3) {
        return Err(PathDecError::ShapeMismatch(format!("expected (1, 3), got {:?}", bif.shape())));
    }
    let mut ts = Vec::new();
    for f in [&bif.f1, &bif.f2] {
        let pieces = two_trackings(g, &f.eulerians[0], f.side)?;
        let m = &f.matchings[0];
        for a in g.vertices_on(f.side) {
            let ps = pieces.get(&a).map(Vec::as_slice).unwrap_or(&[]);
            let ms = edges_at(g, m, a);
            if ps.len() != ms.len() {
                return Err(PathDecError::Invariant(format!(
                    "{a}: {} pieces start here but {} matching edges",
                    ps.len(),
                    ms.len()
                )));
            }
            let pick = assign(ps.len(), |i, j| g.opposite(ms[j], a) != ps[i].0[1]);
            for (i, (vs, es)) in ps.iter().enumerate() {
                let e = ms[pick[i]];
                ts.push(Tracking::new(
                    g,
                    vec![g.opposite(e, a), vs[0], vs[1], vs[2]],
                    vec![e, es[0], es[1]],
                )?);
            }
        }
    }
    Ok(TrackingDecomposition::new(g, 3, ts)?)
}

/// Balanced 2-tracking decomposition from a (2,4)-bifactorization: Eulerian
/// pieces plus one M-edge paired with one N-edge at every owning vertex.
pub fn base_even(g: &MultiGraph, bif: &Bifactorization) -> Result<TrackingDecomposition, PathDecError> {
    if bif.shape() != (2, 4) {
        return Err(PathDecError::ShapeMismatch(format!("expected (2, 4), got {:?}", bif.shape())));
    }
    let mut ts = Vec::new();
    for f in [&bif.f1, &bif.f2] {
        for (_, ps) in two_trackings(g, &f.eulerians[0], f.side)? {
            for (vs, es) in ps {
                ts.push(Tracking::new(g, vs.to_vec(), es.to_vec())?);
            }
        }
        for a in g.vertices_on(f.side) {
            let ms = edges_at(g, &f.matchings[0], a);
            let ns = edges_at(g, &f.matchings[1], a);
            if ms.len() != ns.len() {
                return Err(PathDecError::Invariant(format!("{a}: d_M = {} but d_N = {}", ms.len(), ns.len())));
            }
            let pick = assign(ms.len(), |i, j| g.opposite(ms[i], a) != g.opposite(ns[j], a));
            for (i, &e) in ms.iter().enumerate() {
                let n = ns[pick[i]];
                ts.push(Tracking::new(g, vec![g.opposite(e, a), a, g.opposite(n, a)], vec![e, n])?);
            }
        }
    }
    Ok(TrackingDecomposition::new(g, 2, ts)?)
}

/// Extends every tracking by one edge of S_v at each end v, preferring new
/// far endpoints off the tracking.
fn extend(g: &MultiGraph, sub: &TrackingDecomposition, s: &[Vec<EdgeId>]) -> Result<TrackingDecomposition, PathDecError> {
    let mut ends: Vec<Vec<(usize, bool)>> = vec![Vec::new(); g.vertex_bound()];
    for (i, t) in sub.trackings.iter().enumerate() {
        ends[t.start().index()].push((i, true));
        ends[t.end().index()].push((i, false));
    }
    let mut front: Vec<Option<EdgeId>> = vec![None; sub.len()];
    let mut back: Vec<Option<EdgeId>> = vec![None; sub.len()];
    for v in g.vertices() {
        let (list, es) = (&ends[v.index()], &s[v.index()]);
        let far = |e: EdgeId| g.opposite(e, v);
        let chosen_far = |i: usize, start: bool| {
            let other = if start { back[i] } else { front[i] };
            other.map(|o| {
                let t = &sub.trackings[i];
                g.opposite(o, if start { t.end() } else { t.start() })
            })
        };
        let pick = assign(list.len(), |r, c| {
            let (i, start) = list[r];
            let y = far(es[c]);
            !sub.trackings[i].contains_vertex(y) && chosen_far(i, start) != Some(y)
        });
        for (r, &(i, start)) in list.iter().enumerate() {
            if start {
                front[i] = Some(es[pick[r]]);
            } else {
                back[i] = Some(es[pick[r]]);
            }
        }
    }
    let mut ts = Vec::with_capacity(sub.len());
    for (i, t) in sub.trackings.iter().enumerate() {
        let (Some(f), Some(b)) = (front[i], back[i]) else {
            return Err(PathDecError::Invariant(format!("tracking {i} lacks an extension edge")));
        };
        let mut vs = vec![g.opposite(f, t.start())];
        vs.extend_from_slice(t.vertices());
        vs.push(g.opposite(b, t.end()));
        let mut es = vec![f];
        es.extend_from_slice(t.edges());
        es.push(b);
        ts.push(Tracking::new(g, vs, es)?);
    }
    Ok(TrackingDecomposition::new(g, sub.ell + 2, ts)?)
}

/// One induction level for a (p, K)-bifactorization, p ∈ {1, 2}.
fn level(g: &MultiGraph, bif: &Bifactorization, reports: &mut Vec<LevelReport>) -> Result<TrackingDecomposition, PathDecError> {
    let (p, kk) = bif.shape();
    let ell = kk / p;
    if (p == 1 && kk == 3) || (p == 2 && kk == 4) {
        let d = if p == 1 { base_odd(g, bif)? } else { base_even(g, bif)? };
        let bad = balance_violations(g, &d, bif)?;
        reports.push(LevelReport {
            ell,
            precomplete: true,
            tau_before: d.tau(),
            balanced: bad.is_empty(),
            ..Default::default()
        });
        if d.tau() > 0 {
            return Err(PathDecError::Invariant(format!("base case left τ = {}", d.tau())));
        }
        return Ok(d);
    }
    let mut rep = LevelReport {
        ell,
        ..Default::default()
    };

    // strip the matchings and the forward halves of the last p Eulerian factors
    let mut stripped = EdgeSet::new();
    let mut s_edges: Vec<(EdgeSet, Side)> = Vec::new();
    let mut reduced = Vec::new();
    for f in [&bif.f1, &bif.f2] {
        let n_eul = f.eulerians.len();
        if n_eul < p {
            return Err(PathDecError::ShapeMismatch(format!("{n_eul} Eulerian factors for shape ({p}, {kk})")));
        }
        let mut backs = Vec::new();
        let mut forw = EdgeSet::new();
        for e in &f.eulerians[n_eul - p..] {
            let split = split_factor_by_orientation(g, e, f.side)?;
            forw.extend(split.forw.iter());
            backs.push(split.back);
        }
        let mut own = EdgeSet::new();
        for m in &f.matchings {
            own.extend(m.iter());
        }
        stripped.extend(own.iter());
        stripped.extend(forw.iter());
        // matchings attach at the owning side, forward halves at the other one
        s_edges.push((own, f.side));
        s_edges.push((forw, f.side.other()));
        reduced.push(FractionalFactorization {
            side: f.side,
            k: kk - 2 * p,
            matchings: backs,
            eulerians: f.eulerians[..n_eul - p].to_vec(),
        });
    }
    let rest = g.edge_set().difference(&stripped);
    let gp = g.induced_by_edges(&rest)?;
    let f2p = reduced.pop().expect("two sides");
    let f1p = reduced.pop().expect("two sides");
    let bifp = Bifactorization { f1: f1p, f2: f2p };

    // d_{G'_i}(v)·K = K'·d_{G_i}(v) on the owning side
    for (f, fp) in [(&bif.f1, &bifp.f1), (&bif.f2, &bifp.f2)] {
        let d_old = g.subset_degrees(&f.all_edges());
        let d_new = g.subset_degrees(&fp.all_edges());
        for v in g.vertices_on(f.side) {
            rep.identity_checks += 1;
            if d_new[v.index()] * kk != (kk - 2 * p) * d_old[v.index()] {
                rep.identity_violations += 1;
            }
        }
    }
    bifp.check_strong(&gp).map_err(|m| PathDecError::Invariant(format!("reduced bifactorization: {m}")))?;
    let sub = level(&gp, &bifp, reports)?;

    let mut s: Vec<Vec<EdgeId>> = vec![Vec::new(); g.vertex_bound()];
    for (set, attach) in &s_edges {
        for e in set.iter() {
            let (u, v) = g.endpoints(e).expect("host edge");
            let at = if g.side(u) == Some(*attach) { u } else { v };
            s[at.index()].push(e);
        }
    }
    let sub_stats = sub.stats(&gp);
    for v in g.vertices() {
        rep.extension_checks += 1;
        let b = sub_stats.b_total.get(v.index()).copied().unwrap_or(0);
        if s[v.index()].len() != b {
            rep.extension_mismatches += 1;
        }
    }
    if rep.extension_mismatches > 0 {
        reports.push(rep.clone());
        return Err(PathDecError::ExtensionMismatch(rep.extension_mismatches));
    }
    let ext = extend(g, &sub, &s)?;
    let t = (ell + 2) / 2;
    rep.precomplete = is_precomplete(g, &ext, 2 * t - 1);
    if !balance_violations(g, &ext, bif)?.is_empty() {
        return Err(PathDecError::Invariant(format!("extension at length {ell} is not balanced")));
    }
    let (improved, swaps) = improve_completeness(g, &ext, t)?;
    rep.completeness_swaps = swaps;
    rep.tau_before = improved.tau();
    let done = if improved.tau() > 0 {
        let (d, dr) = disentangle(g, &improved, t)?;
        rep.rounds = dr.rounds;
        rep.swaps = dr.swaps;
        d
    } else {
        improved
    };
    rep.balanced = balance_violations(g, &done, bif)?.is_empty();
    log::info!(
        "length {ell}: {} swaps, τ {} removed in {} rounds",
        rep.completeness_swaps,
        rep.tau_before,
        rep.rounds
    );
    reports.push(rep);
    Ok(done)
}

fn finish(g: &MultiGraph, d: &TrackingDecomposition) -> Result<PathDecomposition, PathDecError> {
    let out = PathDecomposition::from_trackings(d)?;
    let report = verify_decomposition(g, d.ell, &out);
    if !report.ok() {
        return Err(PathDecError::VerificationFailed(report.violations.join("; ")));
    }
    Ok(out)
}

/// Balanced (2k+1)-path decomposition from a strong (1, 2k+1)-bifactorization.
pub fn decompose_odd(g: &MultiGraph, bif: &Bifactorization) -> Result<(PathDecomposition, Vec<LevelReport>), PathDecError> {
    let (p, kk) = bif.shape();
    if p != 1 || kk % 2 == 0 || kk < 3 {
        return Err(PathDecError::ShapeMismatch(format!("({p}, {kk}) is not an odd shape")));
    }
    if kk > 3 {
        bif.check_strong(g).map_err(PathDecError::ShapeMismatch)?;
    }
    let mut reports = Vec::new();
    let d = level(g, bif, &mut reports)?;
    Ok((finish(g, &d)?, reports))
}

/// Balanced (2k+2)-path decomposition from a strong (2, 2(2k+2))-bifactorization.
pub fn decompose_even(g: &MultiGraph, bif: &Bifactorization) -> Result<(PathDecomposition, Vec<LevelReport>), PathDecError> {
    let (p, kk) = bif.shape();
    if p != 2 || kk % 4 != 0 {
        return Err(PathDecError::ShapeMismatch(format!("({p}, {kk}) is not an even shape")));
    }
    if kk > 4 {
        bif.check_strong(g).map_err(PathDecError::ShapeMismatch)?;
    }
    let mut reports = Vec::new();
    let d = level(g, bif, &mut reports)?;
    Ok((finish(g, &d)?, reports))
}

/// A simple path with `ell` edges, preferring edges outside `protected`.
pub fn find_path_copy(g: &MultiGraph, ell: usize, protected: Option<&TreePack>) -> Result<Tracking, PathDecError> {
    let guarded = protected.map(TreePack::all_edges).unwrap_or_default();
    let mut budget = 1_000_000usize;
    fn dfs(
        g: &MultiGraph,
        ell: usize,
        guarded: &EdgeSet,
        vs: &mut Vec<VertexId>,
        es: &mut Vec<EdgeId>,
        budget: &mut usize,
    ) -> bool {
        if es.len() == ell {
            return true;
        }
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        let at = *vs.last().expect("non-empty");
        let mut inc: Vec<EdgeId> = g.incident(at).to_vec();
        inc.sort_by_key(|&e| (guarded.contains(e), e));
        for e in inc {
            let w = g.opposite(e, at);
            if vs.contains(&w) {
                continue;
            }
            vs.push(w);
            es.push(e);
            if dfs(g, ell, guarded, vs, es, budget) {
                return true;
            }
            vs.pop();
            es.pop();
        }
        false
    }
    if ell == 0 {
        return Err(PathDecError::ZeroLength);
    }
    for v in g.vertices() {
        let (mut vs, mut es) = (vec![v], Vec::new());
        if dfs(g, ell, &guarded, &mut vs, &mut es, &mut budget) {
            return Ok(Tracking::new(g, vs, es)?);
        }
    }
    Err(PathDecError::NoPath(ell))
}

/// Summary of a top-level run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub ell: usize,
    pub edges: usize,
    pub threshold: usize,
    pub meets_threshold: bool,
    pub split_parameter: usize,
    pub stripped_path: bool,
    pub levels: Vec<LevelReport>,
}

fn budget_error(e: FactorError, budget: usize) -> PathDecError {
    match e {
        FactorError::BudgetExhausted(_) | FactorError::Packing(PackingError::BudgetExhausted(_)) => {
            PathDecError::BudgetExhausted(budget)
        }
        other => PathDecError::Factor(other),
    }
}

/// Verified P_ℓ-decomposition of a bipartite graph. Connectivity below the
/// sufficient threshold is only warned about. A certified bifactorization
/// `hint` of the matching shape skips the split.
pub fn decompose(
    g: &MultiGraph,
    ell: usize,
    seed: u64,
    budget: usize,
    hint: Option<&Bifactorization>,
) -> Result<(PathDecomposition, RunReport), PathDecError> {
    if ell == 0 {
        return Err(PathDecError::ZeroLength);
    }
    if !g.is_bipartite_labelled() {
        return Err(PathDecError::NotBipartite);
    }
    let m = g.edge_count();
    if !m.is_multiple_of(ell) {
        return Err(PathDecError::Divisibility { edges: m, ell });
    }
    let req = required_connectivity(ell);
    let mut report = RunReport {
        ell,
        edges: m,
        threshold: req.threshold,
        ..Default::default()
    };
    if m == 0 || ell == 1 {
        let out = PathDecomposition {
            ell,
            paths: g.edges().map(|(_, u, v)| vec![u, v]).collect(),
            edges: g.edges().map(|(e, _, _)| vec![e]).collect(),
        };
        report.meets_threshold = true;
        return Ok((out, report));
    }
    report.meets_threshold = is_k_edge_connected(g, req.threshold);
    if !report.meets_threshold {
        log::warn!(
            "graph is below the {}-edge-connectivity that guarantees a P_{ell}-decomposition; proceeding",
            req.threshold
        );
    }

    if ell.is_multiple_of(2) && m % (2 * ell) == ell {
        let path = find_path_copy(g, ell, None)?;
        let rest: EdgeSet = g.edge_set().difference(&path.edges().iter().copied().collect());
        let h = g.induced_by_edges(&rest)?;
        let (mut sub, sub_report) = decompose(&h, ell, seed, budget, None)?;
        sub.paths.push(path.vertices().to_vec());
        sub.edges.push(path.edges().to_vec());
        let check = verify_decomposition(g, ell, &sub);
        if !check.ok() {
            return Err(PathDecError::VerificationFailed(check.violations.join("; ")));
        }
        report.split_parameter = sub_report.split_parameter;
        report.levels = sub_report.levels;
        report.stripped_path = true;
        return Ok((sub, report));
    }

    let mut last = None;
    if ell % 2 == 1 {
        let k = (ell - 1) / 2;
        let mut rs = vec![(2 * k + 1) * (2 * k + 2), 2 * k + 2, 2 * k];
        rs.dedup();
        for r in rs {
            match bifactorize_odd_with(g, k, r, k > 1, seed, budget, hint) {
                Ok((bif, _)) => {
                    report.split_parameter = r;
                    let (out, levels) = decompose_odd(g, &bif)?;
                    report.levels = levels;
                    return Ok((out, report));
                }
                Err(e) => {
                    log::info!("split with r = {r} failed: {e}");
                    last = Some(e);
                }
            }
        }
    } else {
        // (2, 2(2k+2)) is the even shape with parameter 2k+1
        let kp = ell - 1;
        let mut rs = vec![(32 * kp).max((kp + 1) * (kp + 3)), 2 * kp + 2, 2 * kp];
        rs.dedup();
        for r in rs {
            match bifactorize_even_with(g, kp, r, ell > 2, seed, budget, hint) {
                Ok(bif) => {
                    if bif.shape() != (2, 2 * ell) {
                        return Err(PathDecError::ShapeMismatch(format!("even split produced {:?}", bif.shape())));
                    }
                    report.split_parameter = r;
                    let (out, levels) = decompose_even(g, &bif)?;
                    report.levels = levels;
                    return Ok((out, report));
                }
                Err(e) => {
                    log::info!("split with r = {r} failed: {e}");
                    last = Some(e);
                }
            }
        }
    }
    Err(budget_error(last.expect("at least one attempt"), budget))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testbed::{fixture, gen_circulant};

    #[test]
    fn thresholds() {
        assert_eq!(required_connectivity(3).threshold, 62);
        assert_eq!(required_connectivity(5).threshold, 146);
        let four = required_connectivity_variants(4);
        assert_eq!((four[0].threshold, four[0].divisor), (428, 8));
        assert_eq!((four[1].threshold, four[1].divisor), (864, 4));
        // closed forms 4ℓ²+10ℓ−4 and 26ℓ+8r−8
        for ell in [1usize, 3, 5, 7, 9] {
            assert_eq!(required_connectivity(ell).threshold, 4 * ell * ell + 10 * ell - 4);
        }
        for ell in [2usize, 4, 6, 8] {
            let r = (32 * (ell - 1)).max(ell * (ell + 2));
            assert_eq!(required_connectivity_variants(ell)[1].threshold, 26 * ell + 8 * r - 8);
        }
    }

    #[test]
    fn assignment_avoids_conflicts() {
        let pick = assign(3, |i, j| i != j);
        assert!(pick.iter().enumerate().all(|(i, &j)| i != j));
        let mut sorted = pick.clone();
        sorted.sort();
        assert_eq!(sorted, vec![0, 1, 2]);
        let forced = assign(2, |_, _| false);
        assert_eq!(forced.len(), 2);
    }

    #[test]
    fn base_cases_on_fixtures() {
        let fx = fixture("FIX-ODD3").unwrap();
        let d = base_odd(&fx.graph, fx.bif.as_ref().unwrap()).unwrap();
        assert_eq!(d.len(), 192);
        assert_eq!(d.tau(), 0);
        assert!(balance_violations(&fx.graph, &d, fx.bif.as_ref().unwrap()).unwrap().is_empty());
        let s = d.stats(&fx.graph);
        assert_eq!(s.b_total.iter().sum::<usize>(), 384);
        assert!(fx.graph.vertices_on(Side::A).all(|v| s.b(v) == 8));

        let fx = fixture("FIX-EVEN2").unwrap();
        let bif = fx.bif.as_ref().unwrap();
        let d = base_even(&fx.graph, bif).unwrap();
        assert_eq!(d.len(), 128);
        assert!(balance_violations(&fx.graph, &d, bif).unwrap().is_empty());
        assert!(fx.graph.vertices().all(|v| d.stats(&fx.graph).b(v) == 8));
        // M∪N pairs end on the other side
        let pairs: EdgeSet = bif.f1.matchings.iter().flat_map(|m| m.iter()).collect();
        for t in &d.trackings {
            if pairs.contains(t.edges()[0]) {
                assert_eq!(fx.graph.side(t.start()), Some(Side::B));
                assert_eq!(fx.graph.side(t.end()), Some(Side::B));
            }
        }
        assert!(matches!(base_odd(&fx.graph, bif), Err(PathDecError::ShapeMismatch(_))));
    }

    #[test]
    fn trivial_lengths_and_divisibility() {
        let g = gen_circulant(3, &[0, 1]).unwrap();
        let (d, _) = decompose(&g, 1, 0, 1, None).unwrap();
        assert_eq!(d.len(), 6);
        assert!(matches!(decompose(&g, 4, 0, 1, None), Err(PathDecError::Divisibility { .. })));
    }

    #[test]
    fn path_copies() {
        let star = MultiGraph::new_bipartite(1, 4, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let p = find_path_copy(&star, 2, None).unwrap();
        assert_eq!(p.vertices()[1], VertexId(0));
        assert!(matches!(find_path_copy(&star, 3, None), Err(PathDecError::NoPath(3))));
        let k44 = gen_circulant(4, &[0, 1, 2, 3]).unwrap();
        let p = find_path_copy(&k44, 3, None).unwrap();
        assert!(p.is_path());
        assert_eq!(p.len(), 3);
    }
}
