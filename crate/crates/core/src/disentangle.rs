//! Augmenting sequences: construction, an independent checker, application,
//! and the loop that turns a complete tracking decomposition into paths.
//! Also the end-swapping hill-climb that upgrades pre-completeness.

use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::tracking::{is_complete, is_precomplete, Tracking, TrackingDecomposition, TrackingError, TrackingStats};
use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DisentangleError {
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error("decomposition is not {k}-complete (minimum hang {min_hang})")]
    NotComplete { k: usize, min_hang: usize },
    #[error("decomposition is not {k}-pre-complete")]
    NotPrecomplete { k: usize },
    #[error("every tracking is already a path")]
    AlreadyPaths,
    #[error("k = {k} is below the bound required for length {ell}")]
    KTooSmall { k: usize, ell: usize },
    #[error("no admissible extension: {0}")]
    InternalExhaustion(String),
    #[error("not a full augmenting sequence: {0}")]
    NotFullSequence(String),
    #[error("no improving swap at vertex {vertex} for threshold {threshold}")]
    Stall { vertex: VertexId, threshold: usize },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// One member of a sequence: a slot of the decomposition and its orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Step {
    pub slot: usize,
    pub reversed: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AugmentingSequence {
    pub steps: Vec<Step>,
}

impl AugmentingSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The oriented trackings B_1 … B_r.
    pub fn trackings(&self, d: &TrackingDecomposition) -> Vec<Tracking> {
        self.steps.iter().map(|&s| oriented(d, s)).collect()
    }
}

fn oriented(d: &TrackingDecomposition, s: Step) -> Tracking {
    let t = &d.trackings[s.slot];
    if s.reversed {
        t.reversed()
    } else {
        t.clone()
    }
}

/// Smallest positive index at which `t` revisits its first vertex.
fn return_index(t: &Tracking) -> Option<usize> {
    let b = t.start();
    t.vertices().iter().skip(1).position(|&x| x == b).map(|i| i + 1)
}

fn vertex_set(g: &MultiGraph, edges: &BTreeSet<EdgeId>) -> BTreeSet<VertexId> {
    edges
        .iter()
        .flat_map(|&e| {
            let (u, v) = g.endpoints(e).expect("edge of host");
            [u, v]
        })
        .collect()
}

/// Builds a full augmenting sequence, always taking the smallest admissible edge.
pub fn find_full_augmenting_sequence(
    g: &MultiGraph,
    d: &TrackingDecomposition,
) -> Result<AugmentingSequence, DisentangleError> {
    build(g, d, None)
}

/// Same construction with every choice drawn from `rng`.
pub fn random_full_augmenting_sequence<R: RngCore>(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    rng: &mut R,
) -> Result<AugmentingSequence, DisentangleError> {
    build(g, d, Some(rng))
}

fn build(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    mut rng: Option<&mut dyn RngCore>,
) -> Result<AugmentingSequence, DisentangleError> {
    let k_req = (d.ell + 2) / 2;
    let stats = d.stats(g);
    if stats.tau == 0 {
        return Err(DisentangleError::AlreadyPaths);
    }
    let min_hang = stats.min_hang(g);
    if min_hang <= k_req {
        return Err(DisentangleError::NotComplete { k: k_req, min_hang });
    }

    // hanging edges by inner vertex: (edge, slot, is starting edge)
    let mut hanging: Vec<Vec<(EdgeId, usize, bool)>> = vec![Vec::new(); g.vertex_bound()];
    for (slot, t) in d.trackings.iter().enumerate() {
        for (i, (e, v, h)) in t.prehanging().into_iter().enumerate() {
            if h {
                hanging[v.index()].push((e, slot, i == 0));
            }
        }
    }
    for list in &mut hanging {
        list.sort();
    }

    let tangled: Vec<usize> = (0..d.len()).filter(|&i| d.trackings[i].tau() > 0).collect();
    let first = match rng.as_deref_mut() {
        Some(r) => tangled[r.gen_range(0..tangled.len())],
        None => tangled[0],
    };
    let t0 = &d.trackings[first];
    let mut steps = vec![Step {
        slot: first,
        reversed: t0.degree(t0.start()) <= 1,
    }];
    let mut seq = vec![oriented(d, steps[0])];
    let mut ret = vec![return_index(&seq[0]).expect("tangled start revisits b0")];
    let b01 = seq[0].start();
    let e_of = |seq: &[Tracking], ret: &[usize], i: usize| seq[i].edges()[ret[i] - 1];
    let f_of = |seq: &[Tracking], i: usize| seq[i].edges()[0];

    loop {
        let r = steps.len() - 1;
        if steps.len() > d.len() + 1 {
            return Err(DisentangleError::InternalExhaustion(format!(
                "sequence grew past {} members",
                d.len() + 1
            )));
        }
        let cur = &seq[r];
        let bstar = cur.vertices()[ret[r] - 1];
        let forbidden: BTreeSet<VertexId> = match steps[..r].iter().position(|s| s.slot == steps[r].slot) {
            None => cur.vertices().iter().copied().collect(),
            Some(0) => {
                let mut es: BTreeSet<EdgeId> = seq[0].edges().iter().copied().collect();
                es.remove(&e_of(&seq, &ret, 0));
                es.insert(f_of(&seq, 1));
                vertex_set(g, &es)
            }
            Some(h) => {
                let mut es: BTreeSet<EdgeId> = seq[h].edges().iter().copied().collect();
                es.remove(&f_of(&seq, h));
                es.insert(e_of(&seq, &ret, h - 1));
                es.remove(&e_of(&seq, &ret, h));
                es.insert(f_of(&seq, h + 1));
                vertex_set(g, &es)
            }
        };
        let candidates: Vec<&(EdgeId, usize, bool)> = hanging[bstar.index()]
            .iter()
            .filter(|(e, _, _)| !forbidden.contains(&g.opposite(*e, bstar)))
            .collect();
        if candidates.is_empty() {
            return Err(DisentangleError::InternalExhaustion(format!(
                "no hanging edge at {bstar} leaves the forbidden set (member {})",
                r + 1
            )));
        }
        let &&(_, slot, at_start) = match rng.as_deref_mut() {
            Some(rg) => &candidates[rg.gen_range(0..candidates.len())],
            None => &candidates[0],
        };
        let step = Step {
            slot,
            reversed: !at_start,
        };
        let next = oriented(d, step);
        steps.push(step);
        if !next.contains_vertex(b01) {
            return Ok(AugmentingSequence { steps });
        }
        let s = next
            .vertices()
            .iter()
            .skip(1)
            .position(|&x| x == b01)
            .map(|i| i + 1)
            .ok_or_else(|| DisentangleError::Invariant(format!("member {} meets b0 only at its start", r + 2)))?;
        ret.push(s);
        seq.push(next);
    }
}

/// Checks every defining condition from scratch; `Ok` means the sequence is
/// a (full, if requested) augmenting sequence.
pub fn check_augmenting_sequence(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    seq: &AugmentingSequence,
    require_full: bool,
) -> Result<(), String> {
    let r = seq.steps.len();
    if r < 2 {
        return Err(format!("length {r} is below 2"));
    }
    let mut bs: Vec<(Vec<VertexId>, Vec<EdgeId>)> = Vec::with_capacity(r);
    for s in &seq.steps {
        let t = d.trackings.get(s.slot).ok_or(format!("slot {} out of range", s.slot))?;
        let mut vs = t.vertices().to_vec();
        let mut es = t.edges().to_vec();
        if s.reversed {
            vs.reverse();
            es.reverse();
        }
        bs.push((vs, es));
    }
    let deg = |vs: &[VertexId], x: VertexId| -> usize {
        let n = vs.len();
        (0..n).filter(|&i| vs[i] == x).map(|i| if i == 0 || i == n - 1 { 1 } else { 2 }).sum()
    };
    let b01 = bs[0].0[0];

    let mut distinct = bs[0].0.clone();
    distinct.sort();
    distinct.dedup();
    if distinct.len() == bs[0].0.len() {
        return Err("B1 is a path".into());
    }
    if deg(&bs[0].0, b01) <= 1 {
        return Err("b0 of B1 has degree 1 in B1".into());
    }

    // s(i), b*, e_i and f_i for members that contain b01
    let mut s_idx = Vec::new();
    for (i, (vs, _)) in bs.iter().enumerate().take(r - 1) {
        match (1..vs.len()).find(|&j| vs[j] == b01) {
            Some(j) => s_idx.push(j),
            None => return Err(format!("B{} does not contain b0 of B1", i + 1)),
        }
    }
    let bstar: Vec<VertexId> = (0..r - 1).map(|i| bs[i].0[s_idx[i] - 1]).collect();
    let e = |i: usize| bs[i].1[s_idx[i] - 1];
    let f = |i: usize| bs[i].1[0];
    let edge_set = |i: usize| -> BTreeSet<EdgeId> { bs[i].1.iter().copied().collect() };
    let verts = |es: &BTreeSet<EdgeId>| -> BTreeSet<VertexId> {
        let mut out = BTreeSet::new();
        for &x in es {
            if let Some((u, v)) = g.endpoints(x) {
                out.insert(u);
                out.insert(v);
            }
        }
        out
    };

    for i in 1..r {
        if bs[i].0[1] != bstar[i - 1] {
            return Err(format!("second vertex of B{} is not b* of B{}", i + 1, i));
        }
    }
    for i in 0..r - 1 {
        let next = bs[i + 1].0[0];
        let earlier = (0..i).find(|&h| edge_set(h) == edge_set(i));
        let blocked: BTreeSet<VertexId> = match earlier {
            None => bs[i].0.iter().copied().collect(),
            Some(0) => {
                let mut es = edge_set(0);
                es.remove(&e(0));
                es.insert(f(1));
                verts(&es)
            }
            Some(h) => {
                let mut es = edge_set(h);
                es.remove(&f(h));
                es.insert(e(h - 1));
                es.remove(&e(h));
                es.insert(f(h + 1));
                verts(&es)
            }
        };
        if blocked.contains(&next) {
            return Err(format!("start of B{} lies in the excluded set of B{}", i + 2, i + 1));
        }
    }
    let mut seen = BTreeSet::new();
    if !bstar.iter().all(|x| seen.insert(*x)) {
        return Err("b* values repeat".into());
    }
    for i in 0..r {
        for j in i + 1..r {
            if bs[i] == bs[j] {
                return Err(format!("B{} occurs twice", i + 1));
            }
            if j < r - 1 && edge_set(i) == edge_set(j) {
                let mut rv = bs[i].0.clone();
                rv.reverse();
                if rv != bs[j].0 {
                    return Err(format!("B{} repeats B{} without reversal", j + 1, i + 1));
                }
            }
        }
    }
    if require_full && bs[r - 1].0.contains(&b01) {
        return Err("last member contains b0 of B1".into());
    }
    Ok(())
}

/// One exchange of the edges e1 and f2 between two slots.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapRecord {
    pub round: usize,
    pub from_slot: usize,
    pub to_slot: usize,
    pub e1: EdgeId,
    pub f2: EdgeId,
}

/// Applies a full sequence; τ drops, 𝓑 is unchanged pointwise and
/// k-completeness is kept.
pub fn apply_augmenting_sequence(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    seq: &AugmentingSequence,
    k: usize,
) -> Result<(TrackingDecomposition, Vec<SwapRecord>), DisentangleError> {
    check_augmenting_sequence(g, d, seq, true).map_err(DisentangleError::NotFullSequence)?;
    let before = d.stats(g);
    let mut trackings = d.trackings.clone();
    let mut log = Vec::new();
    let pick = |t: &Tracking, rev: bool| if rev { t.reversed() } else { t.clone() };
    for w in seq.steps.windows(2) {
        let (a, b) = (w[0], w[1]);
        let b1 = pick(&trackings[a.slot], a.reversed);
        let b2 = pick(&trackings[b.slot], b.reversed);
        let s = return_index(&b1).ok_or_else(|| DisentangleError::Invariant("head lost b0".into()))?;
        let (v1, e1s) = (b1.vertices(), b1.edges());
        let f2 = b2.edges()[0];
        let e1 = e1s[s - 1];

        let mut nv = vec![b2.start()];
        nv.extend(v1[..s].iter().rev());
        nv.extend_from_slice(&v1[s + 1..]);
        let mut ne = vec![f2];
        ne.extend(e1s[..s - 1].iter().rev());
        ne.extend_from_slice(&e1s[s..]);
        let new1 = Tracking::new(g, nv, ne)?;

        let mut mv = vec![b1.start()];
        mv.extend_from_slice(&b2.vertices()[1..]);
        let mut me = vec![e1];
        me.extend_from_slice(&b2.edges()[1..]);
        let new2 = Tracking::new(g, mv, me)?;

        trackings[a.slot] = pick(&new1, a.reversed);
        trackings[b.slot] = pick(&new2, b.reversed);
        log.push(SwapRecord {
            round: 0,
            from_slot: a.slot,
            to_slot: b.slot,
            e1,
            f2,
        });
    }
    let out = TrackingDecomposition::new(g, d.ell, trackings)?;
    let after = out.stats(g);
    if after.tau >= before.tau {
        return Err(DisentangleError::Invariant(format!("τ went from {} to {}", before.tau, after.tau)));
    }
    if after.b_total != before.b_total {
        return Err(DisentangleError::Invariant("endpoint counts changed".into()));
    }
    if before.min_hang(g) > k && after.min_hang(g) <= k {
        return Err(DisentangleError::Invariant(format!("{k}-completeness lost")));
    }
    Ok((out, log))
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisentangleReport {
    pub rounds: usize,
    pub tau_trace: Vec<usize>,
    pub sequence_lengths: Vec<usize>,
    pub swaps: Vec<SwapRecord>,
}

/// Repeats build → check → apply until every tracking is a path.
pub fn disentangle(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    k: usize,
) -> Result<(TrackingDecomposition, DisentangleReport), DisentangleError> {
    if 2 * k < d.ell + 1 {
        return Err(DisentangleError::KTooSmall { k, ell: d.ell });
    }
    if !is_complete(g, d, k) {
        return Err(DisentangleError::NotComplete {
            k,
            min_hang: d.stats(g).min_hang(g),
        });
    }
    let mut cur = d.clone();
    let mut report = DisentangleReport {
        tau_trace: vec![cur.tau()],
        ..Default::default()
    };
    while cur.tau() > 0 {
        if report.rounds > 2 * d.len() {
            return Err(DisentangleError::Invariant("round bound exceeded".into()));
        }
        let seq = find_full_augmenting_sequence(g, &cur)?;
        let (next, swaps) = apply_augmenting_sequence(g, &cur, &seq, k)?;
        report.rounds += 1;
        report.sequence_lengths.push(seq.len());
        report.swaps.extend(swaps.into_iter().map(|mut s| {
            s.round = report.rounds;
            s
        }));
        cur = next;
        report.tau_trace.push(cur.tau());
        log::debug!("round {} τ = {}", report.rounds, cur.tau());
    }
    Ok((cur, report))
}

/// Vertices where `t` owns a hanging edge, with multiplicity.
fn hang_points(t: &Tracking) -> Vec<VertexId> {
    t.prehanging().into_iter().filter(|x| x.2).map(|x| x.1).collect()
}

/// Start-edge swaps raising min(hang, t+1) summed over vertices until the
/// decomposition is t-complete. Returns the result and the number of swaps.
pub fn improve_completeness(
    g: &MultiGraph,
    d: &TrackingDecomposition,
    threshold: usize,
) -> Result<(TrackingDecomposition, usize), DisentangleError> {
    if threshold == 0 || !is_precomplete(g, d, 2 * threshold - 1) {
        return Err(DisentangleError::NotPrecomplete {
            k: (2 * threshold).saturating_sub(1),
        });
    }
    let cap = threshold + 1;
    let mut ts = d.trackings.clone();
    let mut swaps = 0usize;
    let bound = cap * g.vertex_count() + 1;
    loop {
        let stats = TrackingStats::from_trackings(g, &ts);
        let deficient: Vec<VertexId> = g.vertices().filter(|v| stats.hang[v.index()] <= threshold).collect();
        let Some(&first) = deficient.first() else {
            let out = TrackingDecomposition::new(g, d.ell, ts)?;
            return Ok((out, swaps));
        };
        if swaps > bound {
            return Err(DisentangleError::Stall {
                vertex: first,
                threshold,
            });
        }
        // non-hanging pre-hanging edges by inner vertex: (slot, is starting edge)
        let mut loose: Vec<Vec<(usize, bool)>> = vec![Vec::new(); g.vertex_bound()];
        for (slot, t) in ts.iter().enumerate() {
            for (i, (_, v, h)) in t.prehanging().into_iter().enumerate() {
                if !h {
                    loose[v.index()].push((slot, i == 0));
                }
            }
        }
        let mut done = false;
        'search: for &v in &deficient {
            let list = &loose[v.index()];
            for &(p, p_start) in list {
                let t1 = if p_start { ts[p].clone() } else { ts[p].reversed() };
                for &(q, q_start) in list {
                    if q == p {
                        continue;
                    }
                    let ti = if q_start { ts[q].clone() } else { ts[q].reversed() };
                    let (x1, xi) = (t1.start(), ti.start());
                    if t1.contains_vertex(xi) {
                        continue;
                    }
                    let mut v1 = t1.vertices().to_vec();
                    let mut e1 = t1.edges().to_vec();
                    let mut vi = ti.vertices().to_vec();
                    let mut ei = ti.edges().to_vec();
                    v1[0] = xi;
                    vi[0] = x1;
                    std::mem::swap(&mut e1[0], &mut ei[0]);
                    let n1 = Tracking::from_parts(v1, e1);
                    let ni = Tracking::from_parts(vi, ei);
                    let mut delta: BTreeMap<VertexId, i64> = BTreeMap::new();
                    for x in hang_points(&t1).into_iter().chain(hang_points(&ti)) {
                        *delta.entry(x).or_default() -= 1;
                    }
                    for x in hang_points(&n1).into_iter().chain(hang_points(&ni)) {
                        *delta.entry(x).or_default() += 1;
                    }
                    let gain: i64 = delta
                        .iter()
                        .map(|(x, &dx)| {
                            let h = stats.hang[x.index()] as i64;
                            (h + dx).min(cap as i64) - h.min(cap as i64)
                        })
                        .sum();
                    if gain > 0 {
                        ts[p] = if p_start { n1 } else { n1.reversed() };
                        ts[q] = if q_start { ni } else { ni.reversed() };
                        swaps += 1;
                        done = true;
                        break 'search;
                    }
                }
            }
        }
        if !done {
            return Err(DisentangleError::Stall {
                vertex: first,
                threshold,
            });
        }
    }
}
