//! Generators, fixtures with hand-built bifactorizations, the decomposition
//! verifier and an exhaustive oracle for small graphs.

use crate::factorize::{Bifactorization, BifactorizationDocument, FactorError, FractionalFactorization};
use crate::graph::{EdgeId, EdgeSet, GraphDocument, GraphError, MultiGraph, Side, VertexId};
use crate::pathdec::PathDecomposition;
use crate::tracking::{Tracking, TrackingDecomposition, TrackingDocument, TrackingError, TrackingStats};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TestbedError {
    #[error("offset {offset} is not a residue mod {n} or repeats")]
    BadOffset { n: usize, offset: usize },
    #[error("unknown fixture {0}")]
    UnknownFixture(String),
    #[error("graph has {0} edges, the oracle handles at most 16")]
    TooLarge(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Factor(#[from] FactorError),
    #[error(transparent)]
    Tracking(#[from] TrackingError),
    #[error("fixture {name} failed its load check: {reason}")]
    Invalid { name: String, reason: String },
    #[error("i/o: {0}")]
    Io(String),
    #[error("format: {0}")]
    Format(String),
}

/// a_i b_{i+s mod n} for every offset s. Vertices a_i = i, b_i = n + i; the
/// edge for the j-th smallest offset at a_i has id j·n + i.
pub fn gen_circulant(n: usize, offsets: &[usize]) -> Result<MultiGraph, TestbedError> {
    let mut sorted = offsets.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(TestbedError::BadOffset { n, offset: w[0] });
        }
    }
    if let Some(&s) = sorted.iter().find(|&&s| s >= n) {
        return Err(TestbedError::BadOffset { n, offset: s });
    }
    let edges: Vec<(usize, usize)> = sorted
        .iter()
        .flat_map(|&s| (0..n).map(move |i| (i, n + (i + s) % n)))
        .collect();
    Ok(MultiGraph::new_bipartite(n, n, &edges)?)
}

/// Edges of K_{n,n} built by `gen_circulant(n, 0..n)` whose offsets lie in `range`.
fn offsets(n: usize, range: std::ops::Range<usize>) -> EdgeSet {
    range.flat_map(|s| (0..n).map(move |i| EdgeId((s * n + i) as u32))).collect()
}

fn factorization(n: usize, side: Side, k: usize, m: &[std::ops::Range<usize>], f: &[std::ops::Range<usize>]) -> FractionalFactorization {
    FractionalFactorization {
        side,
        k,
        matchings: m.iter().map(|r| offsets(n, r.clone())).collect(),
        eulerians: f.iter().map(|r| offsets(n, r.clone())).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct Fixture {
    pub name: String,
    pub graph: MultiGraph,
    pub bif: Option<Bifactorization>,
    pub tangle: Option<TrackingDecomposition>,
    pub ell: usize,
    pub expected_edges: usize,
    pub expected_paths: usize,
}

pub const FIXTURE_NAMES: [&str; 6] = ["FIX-ODD3", "FIX-ODD5", "FIX-EVEN2", "FIX-EVEN4", "FIX-FULL3", "FIX-TANGLE"];

pub fn fixture(name: &str) -> Result<Fixture, TestbedError> {
    let complete = |n: usize| gen_circulant(n, &(0..n).collect::<Vec<_>>());
    let (graph, bif, tangle, ell) = match name {
        "FIX-ODD3" => (
            complete(24)?,
            Some(Bifactorization {
                f1: factorization(24, Side::A, 3, &[0..4], &[4..12]),
                f2: factorization(24, Side::B, 3, &[12..16], &[16..24]),
            }),
            None,
            3,
        ),
        "FIX-ODD5" => (
            complete(60)?,
            Some(Bifactorization {
                f1: factorization(60, Side::A, 5, &[0..6], &[6..18, 18..30]),
                f2: factorization(60, Side::B, 5, &[30..36], &[36..48, 48..60]),
            }),
            None,
            5,
        ),
        "FIX-EVEN2" => (
            complete(16)?,
            Some(Bifactorization {
                f1: factorization(16, Side::A, 4, &[0..2, 2..4], &[4..8]),
                f2: factorization(16, Side::B, 4, &[8..10, 10..12], &[12..16]),
            }),
            None,
            2,
        ),
        "FIX-EVEN4" => (
            complete(48)?,
            Some(Bifactorization {
                f1: factorization(48, Side::A, 8, &[0..3, 3..6], &[6..12, 12..18, 18..24]),
                f2: factorization(48, Side::B, 8, &[24..27, 27..30], &[30..36, 36..42, 42..48]),
            }),
            None,
            4,
        ),
        "FIX-FULL3" => (complete(63)?, None, None, 3),
        "FIX-TANGLE" => {
            let (g, d) = tangle_fixture(0)?;
            (g, None, Some(d), 4)
        }
        other => return Err(TestbedError::UnknownFixture(other.to_string())),
    };
    let fx = Fixture {
        name: name.to_string(),
        expected_edges: graph.edge_count(),
        expected_paths: graph.edge_count() / ell,
        graph,
        bif,
        tangle,
        ell,
    };
    fx.check()?;
    Ok(fx)
}

impl Fixture {
    /// Load check: strong bifactorization, valid tangle, expected metrics.
    pub fn check(&self) -> Result<(), TestbedError> {
        let invalid = |reason: String| TestbedError::Invalid {
            name: self.name.clone(),
            reason,
        };
        if let Some(bif) = &self.bif {
            bif.check_strong(&self.graph).map_err(invalid)?;
        }
        if let Some(t) = &self.tangle {
            t.validate(&self.graph)?;
            if t.ell != self.ell {
                return Err(invalid(format!("tangle has length {}", t.ell)));
            }
        }
        if self.graph.edge_count() != self.expected_edges || self.expected_edges != self.expected_paths * self.ell {
            return Err(invalid("metrics do not match the graph".into()));
        }
        Ok(())
    }

    pub fn to_document(&self) -> FixtureDocument {
        FixtureDocument {
            name: self.name.clone(),
            ell: self.ell,
            expected_edges: self.expected_edges,
            expected_paths: self.expected_paths,
            graph: self.graph.to_document(),
            bifactorization: self.bif.as_ref().map(Bifactorization::to_document),
            tangle: self.tangle.as_ref().map(TrackingDecomposition::to_document),
        }
    }

    pub fn from_document(doc: &FixtureDocument) -> Result<Fixture, TestbedError> {
        let graph = MultiGraph::from_document(&doc.graph)?;
        let bif = doc.bifactorization.as_ref().map(Bifactorization::from_document).transpose()?;
        let tangle = doc
            .tangle
            .as_ref()
            .map(|t| TrackingDecomposition::from_document(&graph, t))
            .transpose()?;
        let fx = Fixture {
            name: doc.name.clone(),
            graph,
            bif,
            tangle,
            ell: doc.ell,
            expected_edges: doc.expected_edges,
            expected_paths: doc.expected_paths,
        };
        fx.check()?;
        Ok(fx)
    }
}

/// On-disk fixture format.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FixtureDocument {
    pub name: String,
    pub ell: usize,
    pub expected_edges: usize,
    pub expected_paths: usize,
    pub graph: GraphDocument,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bifactorization: Option<BifactorizationDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tangle: Option<TrackingDocument>,
}

/// `$PATHDEC_DATA_DIR`, or the fixtures directory shipped with the sources.
pub fn data_dir() -> PathBuf {
    std::env::var_os("PATHDEC_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/fixtures")))
}

pub fn fixture_file_name(name: &str) -> String {
    format!("{}.json", name.to_ascii_lowercase())
}

pub fn load_fixture_file(name: &str) -> Result<Fixture, TestbedError> {
    let path = data_dir().join(fixture_file_name(name));
    let text = std::fs::read_to_string(&path).map_err(|e| TestbedError::Io(format!("{}: {e}", path.display())))?;
    let doc: FixtureDocument = serde_json::from_str(&text).map_err(|e| TestbedError::Format(e.to_string()))?;
    Fixture::from_document(&doc)
}

/// 4-tracking decomposition of K_{24,24} with closed trails and every vertex
/// carrying at least four hanging edges. Different seeds give different tangles.
pub fn tangle_fixture(seed: u64) -> Result<(MultiGraph, TrackingDecomposition), TestbedError> {
    const N: usize = 24;
    let g = gen_circulant(N, &(0..N).collect::<Vec<_>>())?;
    let id = |a: usize, b: usize| EdgeId((((b + N - a) % N) * N + a) as u32);
    let av = |a: usize| VertexId(a as u32);
    let bv = |b: usize| VertexId((N + b) as u32);
    let m = |x: usize| x % N;

    // six blocks of four offsets; three start on A, three on B. Within each
    // group some s2 - s3 + s4 is an end offset, so trails can be closed.
    const BLOCKS: [[usize; 4]; 6] = [
        [12, 9, 23, 6],
        [21, 20, 10, 18],
        [11, 22, 5, 4],
        [1, 14, 3, 2],
        [13, 7, 19, 8],
        [17, 0, 15, 16],
    ];
    let mut ts = Vec::new();
    for (block, &[s1, s2, s3, s4]) in BLOCKS.iter().enumerate() {
        for i in 0..N {
            let t = if block < 3 {
                let (a0, b1) = (i, m(i + s1));
                let a2 = m(b1 + N - s2);
                let b3 = m(a2 + s3);
                let a4 = m(b3 + N - s4);
                Tracking::new(
                    &g,
                    vec![av(a0), bv(b1), av(a2), bv(b3), av(a4)],
                    vec![id(a0, b1), id(a2, b1), id(a2, b3), id(a4, b3)],
                )?
            } else {
                let b0 = i;
                let a1 = m(b0 + N - s1);
                let b2 = m(a1 + s2);
                let a3 = m(b2 + N - s3);
                let b4 = m(a3 + s4);
                Tracking::new(
                    &g,
                    vec![bv(b0), av(a1), bv(b2), av(a3), bv(b4)],
                    vec![id(a1, b0), id(a1, b2), id(a3, b2), id(a3, b4)],
                )?
            };
            ts.push(t);
        }
    }
    let mut d = TrackingDecomposition::new(&g, 4, ts)?;

    // close random trails by trading starting edges at their second vertex
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = 3 + (seed % 6) as usize;
    let mut closed = 0;
    let mut owner = vec![0usize; g.edge_bound()];
    for (slot, t) in d.trackings.iter().enumerate() {
        for &e in t.edges() {
            owner[e.index()] = slot;
        }
    }
    for _ in 0..20_000 {
        if closed >= target {
            break;
        }
        let p = rng.gen_range(0..d.len());
        if !d.trackings[p].is_path() {
            continue;
        }
        let t1 = if rng.gen_bool(0.5) {
            d.trackings[p].clone()
        } else {
            d.trackings[p].reversed()
        };
        let (x0, x1, x4) = (t1.start(), t1.vertices()[1], t1.end());
        let e = g.incident(x4).iter().copied().find(|&e| g.opposite(e, x4) == x1).expect("complete host");
        let q = owner[e.index()];
        if q == p {
            continue;
        }
        let tq = &d.trackings[q];
        let tq = if tq.edges()[0] == e && tq.vertices()[1] == x1 {
            tq.clone()
        } else if tq.edges()[3] == e && tq.vertices()[3] == x1 {
            tq.reversed()
        } else {
            continue;
        };
        let mut v1 = t1.vertices().to_vec();
        let mut e1 = t1.edges().to_vec();
        let mut vq = tq.vertices().to_vec();
        let mut eq = tq.edges().to_vec();
        v1[0] = x4;
        vq[0] = x0;
        std::mem::swap(&mut e1[0], &mut eq[0]);
        let (n1, nq) = (Tracking::new(&g, v1, e1)?, Tracking::new(&g, vq, eq)?);
        let mut trial = d.clone();
        trial.trackings[p] = n1;
        trial.trackings[q] = nq;
        if TrackingStats::compute(&g, &trial).min_hang(&g) >= 4 {
            for &x in trial.trackings[q].edges() {
                owner[x.index()] = q;
            }
            for &x in trial.trackings[p].edges() {
                owner[x.index()] = p;
            }
            d = trial;
            closed += 1;
        }
    }
    d.validate(&g)?;
    Ok((g, d))
}

/// Outcome of the independent check; at most ten messages are kept.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub violations: Vec<String>,
    pub violation_count: usize,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    fn note(&mut self, msg: String) {
        self.violation_count += 1;
        if self.violations.len() < 10 {
            self.violations.push(msg);
        }
    }
}

/// Checks that `d` is a decomposition of `g` into simple paths of length `ell`.
pub fn verify_decomposition(g: &MultiGraph, ell: usize, d: &PathDecomposition) -> VerifyReport {
    let mut rep = VerifyReport::default();
    if d.ell != ell {
        rep.note(format!("document declares length {} instead of {ell}", d.ell));
    }
    if d.paths.len() != d.edges.len() {
        rep.note(format!("{} vertex lists but {} edge lists", d.paths.len(), d.edges.len()));
    }
    let mut cover = vec![0u32; g.edge_bound()];
    for (i, (vs, es)) in d.paths.iter().zip(&d.edges).enumerate() {
        if es.len() != ell {
            rep.note(format!("path {i} has {} edges", es.len()));
        }
        if vs.len() != es.len() + 1 {
            rep.note(format!("path {i} lists {} vertices for {} edges", vs.len(), es.len()));
            continue;
        }
        let distinct: HashSet<VertexId> = vs.iter().copied().collect();
        if distinct.len() != vs.len() {
            rep.note(format!("path {i} is not a simple path"));
        }
        for (j, &e) in es.iter().enumerate() {
            match g.endpoints(e) {
                None => rep.note(format!("path {i} uses unknown edge {e}")),
                Some((x, y)) => {
                    let (p, q) = (vs[j], vs[j + 1]);
                    if !((x == p && y == q) || (x == q && y == p)) {
                        rep.note(format!("edge {e} of path {i} does not join {p} and {q}"));
                    }
                    cover[e.index()] += 1;
                }
            }
        }
    }
    for (e, _, _) in g.edges() {
        match cover[e.index()] {
            0 => rep.note(format!("edge {e} not covered")),
            1 => {}
            c => rep.note(format!("edge {e} covered twice ({c} times)")),
        }
    }
    rep
}

/// Exhaustive search; `Ok(None)` proves that no decomposition exists.
pub fn brute_force_decompose(g: &MultiGraph, ell: usize) -> Result<Option<PathDecomposition>, TestbedError> {
    let m = g.edge_count();
    if m > 16 {
        return Err(TestbedError::TooLarge(m));
    }
    if ell == 0 || !m.is_multiple_of(ell) {
        return Ok(None);
    }
    let mut used = vec![true; g.edge_bound()];
    for e in g.edge_ids() {
        used[e.index()] = false;
    }
    let mut out = PathDecomposition {
        ell,
        paths: Vec::new(),
        edges: Vec::new(),
    };
    Ok(solve(g, ell, &mut used, &mut out).then_some(out))
}

fn solve(g: &MultiGraph, ell: usize, used: &mut [bool], out: &mut PathDecomposition) -> bool {
    let Some(anchor) = g.edge_ids().find(|e| !used[e.index()]) else {
        return true;
    };
    let (u, v) = g.endpoints(anchor).expect("host edge");
    used[anchor.index()] = true;
    let mut candidates = Vec::new();
    for left in 0..ell {
        let mut vs = vec![u, v];
        let mut es = vec![anchor];
        grow(g, used, &mut vs, &mut es, left, ell - 1 - left, &mut candidates);
    }
    for (vs, es) in candidates {
        for e in &es {
            used[e.index()] = true;
        }
        out.paths.push(vs);
        out.edges.push(es.clone());
        if solve(g, ell, used, out) {
            return true;
        }
        out.paths.pop();
        out.edges.pop();
        for e in &es {
            used[e.index()] = false;
        }
        used[anchor.index()] = true;
    }
    used[anchor.index()] = false;
    false
}

/// Extends the path `left` more edges before its first vertex, then `right`
/// more after its last, collecting every result.
fn grow(
    g: &MultiGraph,
    used: &mut [bool],
    vs: &mut Vec<VertexId>,
    es: &mut Vec<EdgeId>,
    left: usize,
    right: usize,
    found: &mut Vec<(Vec<VertexId>, Vec<EdgeId>)>,
) {
    if left == 0 && right == 0 {
        found.push((vs.clone(), es.clone()));
        return;
    }
    let front = left > 0;
    let at = if front { vs[0] } else { *vs.last().expect("non-empty") };
    for &e in g.incident(at) {
        if used[e.index()] {
            continue;
        }
        let w = g.opposite(e, at);
        if vs.contains(&w) {
            continue;
        }
        used[e.index()] = true;
        if front {
            vs.insert(0, w);
            es.insert(0, e);
            grow(g, used, vs, es, left - 1, right, found);
            vs.remove(0);
            es.remove(0);
        } else {
            vs.push(w);
            es.push(e);
            grow(g, used, vs, es, left, right - 1, found);
            vs.pop();
            es.pop();
        }
        used[e.index()] = false;
    }
}

/// Canonical key of a connected simple bipartite graph given as side sizes
/// and edges (i, j) with i on the first side and j on the second.
fn canonical_key(a: usize, b: usize, edges: &[(usize, usize)]) -> (usize, usize, Vec<u32>) {
    fn keyed(x: usize, y: usize, edges: &[(usize, usize)]) -> Vec<u32> {
        // permute the x side; masks of the y side are sorted
        let mut perm: Vec<usize> = (0..x).collect();
        let mut best: Option<Vec<u32>> = None;
        loop {
            let mut masks = vec![0u32; y];
            for &(i, j) in edges {
                masks[j] |= 1 << perm[i];
            }
            masks.sort_unstable();
            if best.as_ref().is_none_or(|b| masks < *b) {
                best = Some(masks);
            }
            if !next_permutation(&mut perm) {
                break;
            }
        }
        best.unwrap_or_default()
    }
    let flipped: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (j, i)).collect();
    match a.cmp(&b) {
        std::cmp::Ordering::Less => (a, b, keyed(a, b, edges)),
        std::cmp::Ordering::Greater => (b, a, keyed(b, a, &flipped)),
        std::cmp::Ordering::Equal => (a, b, keyed(a, b, edges).min(keyed(b, a, &flipped))),
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).expect("exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// Every connected simple bipartite graph with 1..=`max_edges` edges, one per
/// isomorphism class, with side A the first colour class.
pub fn enumerate_connected_bipartite(max_edges: usize) -> Vec<MultiGraph> {
    type Shape = (usize, usize, Vec<(usize, usize)>);
    let mut seen: HashSet<(usize, usize, Vec<u32>)> = HashSet::new();
    let mut layer: Vec<Shape> = vec![(1, 1, vec![(0, 0)])];
    seen.insert(canonical_key(1, 1, &[(0, 0)]));
    let mut all = layer.clone();
    for _ in 1..max_edges {
        let mut next = Vec::new();
        for (a, b, edges) in &layer {
            let present: BTreeSet<(usize, usize)> = edges.iter().copied().collect();
            let mut grown: Vec<Shape> = Vec::new();
            for i in 0..*a {
                for j in 0..*b {
                    if !present.contains(&(i, j)) {
                        let mut es = edges.clone();
                        es.push((i, j));
                        grown.push((*a, *b, es));
                    }
                }
                let mut es = edges.clone();
                es.push((i, *b));
                grown.push((*a, b + 1, es));
            }
            for j in 0..*b {
                let mut es = edges.clone();
                es.push((*a, j));
                grown.push((a + 1, *b, es));
            }
            for s in grown {
                if seen.insert(canonical_key(s.0, s.1, &s.2)) {
                    next.push(s);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all.into_iter()
        .map(|(a, b, edges)| {
            let es: Vec<(usize, usize)> = edges.iter().map(|&(i, j)| (i, a + j)).collect();
            MultiGraph::new_bipartite(a, b, &es).expect("valid bipartite shape")
        })
        .collect()
}

/// Random labelled bipartite graph with each edge present with probability `p`.
pub fn gen_random_bipartite(a: usize, b: usize, p: f64, seed: u64) -> Result<MultiGraph, TestbedError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(usize, usize)> = (0..a).flat_map(|i| (0..b).map(move |j| (i, a + j))).collect();
    edges.shuffle(&mut rng);
    edges.retain(|_| rng.gen_bool(p));
    Ok(MultiGraph::new_bipartite(a, b, &edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circulant_shapes() {
        let g = gen_circulant(5, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(g.edge_count(), 25);
        assert!(g.vertices().all(|v| g.deg(v) == 5));
        let m = gen_circulant(6, &[0]).unwrap();
        assert!(m.vertices().all(|v| m.deg(v) == 1));
        assert!(matches!(gen_circulant(4, &[4]), Err(TestbedError::BadOffset { .. })));
        assert!(matches!(gen_circulant(4, &[1, 1]), Err(TestbedError::BadOffset { .. })));
        let h = gen_circulant(24, &(0..24).collect::<Vec<_>>()).unwrap();
        let lo = h.subset_degrees(&offsets(24, 0..12));
        assert!(h.vertices().all(|v| lo[v.index()] == 12));
    }

    #[test]
    fn fixture_metrics() {
        let odd3 = fixture("FIX-ODD3").unwrap();
        assert!(odd3.graph.vertices().all(|v| odd3.graph.deg(v) == 24));
        let bif = odd3.bif.as_ref().unwrap();
        let m1 = odd3.graph.subset_degrees(&bif.f1.matchings[0]);
        assert!(odd3.graph.vertices_on(Side::A).all(|v| m1[v.index()] == 4));
        let g1 = odd3.graph.subset_degrees(&bif.g1());
        assert!(odd3.graph.vertices_on(Side::A).all(|v| g1[v.index()] == 12));
        let even2 = fixture("FIX-EVEN2").unwrap();
        let m = even2.graph.subset_degrees(&even2.bif.as_ref().unwrap().f1.matchings[0]);
        assert!(even2.graph.vertices_on(Side::A).all(|v| m[v.index()] == 2));
        let even4 = fixture("FIX-EVEN4").unwrap();
        for f in &even4.bif.as_ref().unwrap().f1.eulerians {
            let d = even4.graph.subset_degrees(f);
            assert!(even4.graph.vertices().all(|v| d[v.index()].is_multiple_of(2)));
            assert!(even4.graph.vertices_on(Side::A).all(|v| d[v.index()] == 6));
        }
        assert!(matches!(fixture("FIX-NONE"), Err(TestbedError::UnknownFixture(_))));
    }

    #[test]
    fn tangle_is_complete_and_tangled() {
        for seed in 0..5 {
            let (g, d) = tangle_fixture(seed).unwrap();
            let s = d.stats(&g);
            assert!(s.tau > 0);
            assert!(s.min_hang(&g) >= 4);
        }
    }

    #[test]
    fn oracle_small_cases() {
        let c6 = MultiGraph::new_bipartite(3, 3, &[(0, 3), (3, 1), (1, 4), (4, 2), (2, 5), (5, 0)]).unwrap();
        let d = brute_force_decompose(&c6, 3).unwrap().unwrap();
        assert_eq!(d.paths.len(), 2);
        assert!(verify_decomposition(&c6, 3, &d).ok());
        let claw = MultiGraph::new_bipartite(1, 3, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(brute_force_decompose(&claw, 2).unwrap(), None);
        assert_eq!(brute_force_decompose(&c6, 4).unwrap(), None);
        let big = gen_circulant(5, &[0, 1, 2, 3]).unwrap();
        assert!(matches!(brute_force_decompose(&big, 2), Err(TestbedError::TooLarge(20))));
    }

    #[test]
    fn verifier_reports_violations() {
        let p = MultiGraph::new_bipartite(2, 2, &[(0, 2), (1, 2), (1, 3), (0, 3)]).unwrap();
        let good = brute_force_decompose(&p, 2).unwrap().unwrap();
        assert!(verify_decomposition(&p, 2, &good).ok());
        let mut dup = good.clone();
        dup.paths[1] = dup.paths[0].clone();
        dup.edges[1] = dup.edges[0].clone();
        let rep = verify_decomposition(&p, 2, &dup);
        assert!(rep.violations.iter().any(|m| m.contains("covered twice")));
        let closed = PathDecomposition {
            ell: 4,
            paths: vec![vec![VertexId(0), VertexId(2), VertexId(1), VertexId(3), VertexId(0)]],
            edges: vec![vec![EdgeId(0), EdgeId(1), EdgeId(2), EdgeId(3)]],
        };
        let rep = verify_decomposition(&p, 4, &closed);
        assert!(rep.violations.iter().any(|m| m.contains("not a simple path")));
    }

    #[test]
    fn enumeration_counts() {
        // connected bipartite graphs by edge count: 1, 1, 2, 4 (paths, stars, C4, ...)
        let all = enumerate_connected_bipartite(4);
        let mut by_edges = [0usize; 5];
        for g in &all {
            by_edges[g.edge_count()] += 1;
        }
        assert_eq!(&by_edges[1..], &[1, 1, 2, 4]);
    }
}
