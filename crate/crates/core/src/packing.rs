//! Spanning-tree packings, degree-bounded spanning trees and the two
//! edge-partition steps that feed the factorizations.

use crate::flowcut::{self, Dinic};
use crate::graph::{EdgeId, EdgeSet, GraphError, MultiGraph, Side, VertexId};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::VecDeque;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PackingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("graph has no {0} edge-disjoint spanning trees")]
    NoPacking(usize),
    #[error("graph is not connected")]
    NotConnected,
    #[error("degree bound not met at {0}")]
    BoundNotMet(VertexId),
    #[error("no split found within {0} attempts")]
    BudgetExhausted(usize),
    #[error("tree packing for the fraction split failed")]
    PackingFailed,
    #[error("degree of {vertex} is not divisible by {modulus}")]
    DivisibilityViolation { vertex: VertexId, modulus: usize },
}

/// Pairwise edge-disjoint spanning trees.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TreePack {
    pub trees: Vec<EdgeSet>,
}

impl TreePack {
    pub fn len(&self) -> usize {
        self.trees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    pub fn all_edges(&self) -> EdgeSet {
        self.trees.iter().fold(EdgeSet::new(), |acc, t| acc.union(t))
    }
}

/// Whether `t` is a spanning tree of `g`.
pub fn is_spanning_tree(g: &MultiGraph, t: &EdgeSet) -> bool {
    if g.vertex_count() == 0 {
        return t.is_empty();
    }
    if t.len() + 1 != g.vertex_count() || g.check_subset(t).is_err() {
        return false;
    }
    let mut uf = UnionFind::new(g.vertex_bound());
    t.iter().all(|e| {
        let (u, v) = g.endpoints(e).expect("checked");
        uf.union(u.index(), v.index())
    })
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut x = x;
        while self.parent[x] != r {
            let next = self.parent[x];
            self.parent[x] = r;
            x = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

/// k forests over one graph with matroid-union augmentation.
struct Forests<'g> {
    g: &'g MultiGraph,
    adj: Vec<Vec<Vec<(usize, EdgeId)>>>,
    owner: Vec<Option<usize>>,
    sizes: Vec<usize>,
}

impl<'g> Forests<'g> {
    fn new(g: &'g MultiGraph, k: usize) -> Self {
        Forests {
            g,
            adj: vec![vec![Vec::new(); g.vertex_bound()]; k],
            owner: vec![None; g.edge_bound()],
            sizes: vec![0; k],
        }
    }

    fn add(&mut self, i: usize, e: EdgeId) {
        let (u, v) = self.g.endpoints(e).expect("host edge");
        self.adj[i][u.index()].push((v.index(), e));
        self.adj[i][v.index()].push((u.index(), e));
        self.owner[e.index()] = Some(i);
        self.sizes[i] += 1;
    }

    fn remove(&mut self, i: usize, e: EdgeId) {
        let (u, v) = self.g.endpoints(e).expect("host edge");
        for x in [u, v] {
            let list = &mut self.adj[i][x.index()];
            let pos = list.iter().position(|&(_, f)| f == e).expect("edge in forest");
            list.swap_remove(pos);
        }
        self.owner[e.index()] = None;
        self.sizes[i] -= 1;
    }

    /// Edges of the forest-i path between the endpoints of `e`, if connected.
    fn path(&self, i: usize, e: EdgeId) -> Option<Vec<EdgeId>> {
        let (s, t) = self.g.endpoints(e).expect("host edge");
        let (s, t) = (s.index(), t.index());
        let mut prev: Vec<Option<(usize, EdgeId)>> = vec![None; self.g.vertex_bound()];
        let mut seen = vec![false; self.g.vertex_bound()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                let mut out = Vec::new();
                let mut x = t;
                while let Some((p, f)) = prev[x] {
                    out.push(f);
                    x = p;
                }
                return Some(out);
            }
            for &(w, f) in &self.adj[i][u] {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some((u, f));
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Inserts `e0` into the union, exchanging edges along a shortest
    /// augmenting path when no forest accepts it directly.
    fn augment(&mut self, e0: EdgeId) -> bool {
        let k = self.sizes.len();
        let mut label: Vec<Option<(EdgeId, usize)>> = vec![None; self.g.edge_bound()];
        let mut visited = vec![false; self.g.edge_bound()];
        visited[e0.index()] = true;
        let mut queue = VecDeque::from([e0]);
        while let Some(e) = queue.pop_front() {
            for i in 0..k {
                if self.owner[e.index()] == Some(i) {
                    continue;
                }
                match self.path(i, e) {
                    None => {
                        let (mut cur, mut target) = (e, i);
                        loop {
                            if let Some(j) = self.owner[cur.index()] {
                                self.remove(j, cur);
                            }
                            self.add(target, cur);
                            match label[cur.index()] {
                                None => break,
                                Some((p, f)) => {
                                    cur = p;
                                    target = f;
                                }
                            }
                        }
                        return true;
                    }
                    Some(path) => {
                        for x in path {
                            if !visited[x.index()] {
                                visited[x.index()] = true;
                                label[x.index()] = Some((e, i));
                                queue.push_back(x);
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn into_sets(self) -> Vec<EdgeSet> {
        let mut sets = vec![EdgeSet::new(); self.sizes.len()];
        for (idx, owner) in self.owner.iter().enumerate() {
            if let Some(i) = owner {
                sets[*i].insert(EdgeId(idx as u32));
            }
        }
        sets
    }
}

/// Packs `k` edge-disjoint spanning trees, scanning edges in the given order.
fn pack_in_order(g: &MultiGraph, k: usize, order: &[EdgeId]) -> Result<TreePack, PackingError> {
    let n = g.vertex_count();
    if k == 0 || n <= 1 {
        return Ok(TreePack {
            trees: vec![EdgeSet::new(); k],
        });
    }
    if !flowcut::is_connected(g) {
        return Err(PackingError::NoPacking(k));
    }
    let target = n - 1;
    if g.edge_count() < k * target {
        return Err(PackingError::NoPacking(k));
    }
    let mut forests = Forests::new(g, k);
    let mut ufs: Vec<UnionFind> = (0..k).map(|_| UnionFind::new(g.vertex_bound())).collect();
    let mut leftover = Vec::new();
    for &e in order {
        let (u, v) = g.endpoints(e).expect("host edge");
        match (0..k).find(|&i| forests.sizes[i] < target && ufs[i].union(u.index(), v.index())) {
            Some(i) => forests.add(i, e),
            None => leftover.push(e),
        }
    }
    // Greedy scanning yields a maximal set; the exchange phase makes it maximum.
    let total = |f: &Forests| f.sizes.iter().sum::<usize>();
    for e in leftover {
        if total(&forests) == k * target {
            break;
        }
        forests.augment(e);
    }
    if total(&forests) < k * target {
        return Err(PackingError::NoPacking(k));
    }
    let pack = TreePack {
        trees: forests.into_sets(),
    };
    debug_assert!(pack.trees.iter().all(|t| is_spanning_tree(g, t)));
    Ok(pack)
}

/// k pairwise edge-disjoint spanning trees, or `NoPacking` when none exist.
pub fn pack_spanning_trees(g: &MultiGraph, k: usize) -> Result<TreePack, PackingError> {
    let order: Vec<EdgeId> = g.edge_ids().collect();
    pack_in_order(g, k, &order)
}

/// A spanning tree with d_T(v) ≤ cap(v) wherever a cap is given, found by
/// swapping a tree edge at a violator for a non-tree edge between the two
/// resulting components whose endpoints still have slack.
pub fn bounded_spanning_tree(
    g: &MultiGraph,
    cap: impl Fn(VertexId) -> Option<usize>,
) -> Result<EdgeSet, PackingError> {
    if !flowcut::is_connected(g) {
        return Err(PackingError::NotConnected);
    }
    let n = g.vertex_bound();
    let mut in_tree = vec![false; g.edge_bound()];
    let mut deg = vec![0usize; n];
    // Breadth-first start tree.
    if let Some(root) = g.vertices().next() {
        let mut seen = vec![false; n];
        seen[root.index()] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            let mut inc = g.incident(u).to_vec();
            inc.sort();
            for e in inc {
                let w = g.opposite(e, u);
                if !seen[w.index()] {
                    seen[w.index()] = true;
                    in_tree[e.index()] = true;
                    deg[u.index()] += 1;
                    deg[w.index()] += 1;
                    queue.push_back(w);
                }
            }
        }
    }
    let over = |v: VertexId, deg: &[usize]| cap(v).is_some_and(|c| deg[v.index()] > c);
    let slack = |v: VertexId, deg: &[usize]| cap(v).is_none_or(|c| deg[v.index()] < c);
    loop {
        let Some(v) = g.vertices().find(|&v| over(v, &deg)) else {
            break;
        };
        let mut tree_edges: Vec<EdgeId> = g.incident(v).iter().copied().filter(|e| in_tree[e.index()]).collect();
        tree_edges.sort();
        let mut swapped = false;
        for t in tree_edges {
            // component of v in T − t
            let mut side = vec![false; n];
            side[v.index()] = true;
            let mut stack = vec![v];
            while let Some(u) = stack.pop() {
                for &e in g.incident(u) {
                    if e != t && in_tree[e.index()] {
                        let w = g.opposite(e, u);
                        if !side[w.index()] {
                            side[w.index()] = true;
                            stack.push(w);
                        }
                    }
                }
            }
            let swap = g.edges().find(|&(e, a, b)| {
                !in_tree[e.index()]
                    && side[a.index()] != side[b.index()]
                    && a != v
                    && b != v
                    && slack(a, &deg)
                    && slack(b, &deg)
            });
            if let Some((e, a, b)) = swap {
                let (x, y) = g.endpoints(t).expect("tree edge");
                in_tree[t.index()] = false;
                deg[x.index()] -= 1;
                deg[y.index()] -= 1;
                in_tree[e.index()] = true;
                deg[a.index()] += 1;
                deg[b.index()] += 1;
                swapped = true;
                break;
            }
        }
        if !swapped {
            return Err(PackingError::BoundNotMet(v));
        }
    }
    Ok(g.edge_ids().filter(|e| in_tree[e.index()]).collect())
}

/// Spanning tree with d_T(v) ≤ 4·d_G(v)/m at every vertex.
pub fn degree_bounded_spanning_tree(g: &MultiGraph, m: usize) -> Result<EdgeSet, PackingError> {
    let m = m.max(1);
    bounded_spanning_tree(g, |v| Some(4 * g.deg(v) / m))
}

fn side_of(g: &MultiGraph, v: VertexId) -> Side {
    g.side(v).expect("bipartition labels required")
}

/// Split of E(G) into two spanning r-edge-connected graphs G1, G2 such that
/// k divides d_{G1}(v) on side A and d_{G2}(v) on side B.
///
/// Each attempt packs 2r spanning trees, gives r of them to each side, and
/// assigns every remaining edge to one side. An edge ab counts toward the
/// residue of a when placed in G1 and of b when placed in G2, so a placement
/// is an orientation towards the counting endpoint; the residues are then
/// repaired exactly by one max-flow that reverses directed paths.
pub fn connected_split(
    g: &MultiGraph,
    k: usize,
    r: usize,
    seed: u64,
    budget: usize,
) -> Result<(EdgeSet, EdgeSet), PackingError> {
    let k = k.max(1);
    if !g.edge_count().is_multiple_of(k) {
        return Err(PackingError::BudgetExhausted(0));
    }
    let mut order: Vec<EdgeId> = g.edge_ids().collect();
    for attempt in 0..budget.max(1) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x2545_F491_4F6C_DD1D).wrapping_add(attempt as u64));
        if attempt > 0 {
            order.shuffle(&mut rng);
        }
        let pack = match pack_in_order(g, 2 * r, &order) {
            Ok(p) => p,
            Err(err) => {
                // Packability does not depend on the scan order.
                log::debug!("connected split: {err}");
                break;
            }
        };
        let mut in_g1 = vec![false; g.edge_bound()];
        let mut skeleton = vec![false; g.edge_bound()];
        for (i, tree) in pack.trees.iter().enumerate() {
            for e in tree.iter() {
                in_g1[e.index()] = i < r;
                skeleton[e.index()] = true;
            }
        }
        for e in g.edge_ids().filter(|e| !skeleton[e.index()]) {
            in_g1[e.index()] = rand::Rng::gen_bool(&mut rng, 0.5);
        }
        // Prefer moving non-skeleton edges; fall back to any edge and let
        // verification decide whether connectivity survived.
        let repaired = repair_residues(g, k, &mut in_g1, |e| !skeleton[e.index()], &mut rng)
            || repair_residues(g, k, &mut in_g1, |_| true, &mut rng);
        if !repaired {
            log::debug!("connected split attempt {attempt}: residue repair failed");
            continue;
        }
        let g1: EdgeSet = g.edge_ids().filter(|e| in_g1[e.index()]).collect();
        let g2: EdgeSet = g.edge_ids().filter(|e| !in_g1[e.index()]).collect();
        if verify_connected_split(g, &g1, &g2, k, r) {
            return Ok((g1, g2));
        }
        log::debug!("connected split attempt {attempt}: verification failed");
    }
    Err(PackingError::BudgetExhausted(budget))
}

/// Independent check of the split contract.
pub fn verify_connected_split(g: &MultiGraph, g1: &EdgeSet, g2: &EdgeSet, k: usize, r: usize) -> bool {
    if !g1.is_disjoint(g2) || g1.len() + g2.len() != g.edge_count() || g.check_subset(g1).is_err() || g.check_subset(g2).is_err() {
        return false;
    }
    let d1 = g.subset_degrees(g1);
    let d2 = g.subset_degrees(g2);
    let residues_ok = g.vertices().all(|v| match g.side(v) {
        Some(Side::A) => d1[v.index()].is_multiple_of(k),
        Some(Side::B) => d2[v.index()].is_multiple_of(k),
        None => false,
    });
    let spanning_connected = |f: &EdgeSet| {
        let h = g.induced_by_edges(f).expect("subset");
        h.vertex_count() == g.vertex_count() && flowcut::is_k_edge_connected(&h, r)
    };
    residues_ok && spanning_connected(g1) && spanning_connected(g2)
}

/// Adjusts the placement so every residue vanishes, moving only edges that
/// `movable` accepts. An edge ab counts toward a in G1 and toward b in G2;
/// flipping an edge moves one unit of count from one endpoint to the other,
/// so the repair is a single transportation problem solved by max-flow.
fn repair_residues(
    g: &MultiGraph,
    k: usize,
    in_g1: &mut [bool],
    movable: impl Fn(EdgeId) -> bool,
    rng: &mut ChaCha8Rng,
) -> bool {
    let n = g.vertex_bound();
    let oriented = |e: EdgeId, in_g1: &[bool]| {
        let (u, v) = g.endpoints(e).expect("host edge");
        let (a, b) = if side_of(g, u) == Side::A { (u, v) } else { (v, u) };
        // (counting endpoint, other endpoint)
        if in_g1[e.index()] {
            (a, b)
        } else {
            (b, a)
        }
    };
    let mut count = vec![0usize; n];
    for e in g.edge_ids() {
        count[oriented(e, in_g1).0.index()] += 1;
    }
    let need: Vec<usize> = (0..n).map(|v| (k - count[v] % k) % k).collect();
    let mut candidates: Vec<VertexId> = g.vertices().filter(|v| need[v.index()] > 0).collect();
    let total: usize = candidates.iter().map(|v| need[v.index()]).sum();
    if total == 0 {
        return true;
    }
    debug_assert_eq!(total % k, 0);
    // The vertices closest to the next multiple give up count; the rest gain.
    candidates.shuffle(rng);
    candidates.sort_by_key(|v| std::cmp::Reverse(need[v.index()]));
    let (removers, adders) = candidates.split_at(total / k);
    let (s, t) = (n, n + 1);
    let mut net = Dinic::new(n + 2);
    let mut supply = 0i64;
    for &x in adders {
        net.add_arc(s, x.index(), need[x.index()] as i64);
        supply += need[x.index()] as i64;
    }
    for &y in removers {
        net.add_arc(y.index(), t, (k - need[y.index()]) as i64);
    }
    // Flow along an arc from the non-counting to the counting endpoint flips the edge.
    let arcs: Vec<(EdgeId, usize)> = g
        .edge_ids()
        .filter(|&e| movable(e))
        .map(|e| {
            let (head, tail) = oriented(e, in_g1);
            (e, net.add_arc(tail.index(), head.index(), 1))
        })
        .collect();
    if net.max_flow(s, t) != supply {
        return false;
    }
    for (e, arc) in arcs {
        if net.flow_on(arc) == 1 {
            in_g1[e.index()] = !in_g1[e.index()];
        }
    }
    true
}

/// Split of E(G) into spanning G_k and G_r with G_k m-edge-connected and
/// d_{G_k}(v) = k/(k+r)·d_G(v) on side A.
///
/// Packs m groups of trees, takes one spanning tree per group whose A-degrees
/// stay within the k/(k+r) share of that group, and tops up each A vertex
/// with edges outside the trees. The group size starts at 4⌈(k+r)/k⌉ and is
/// lowered when the graph cannot hold that many trees.
pub fn fraction_split(g: &MultiGraph, k: usize, m: usize, r: usize) -> Result<(EdgeSet, EdgeSet), PackingError> {
    let whole = k + r;
    for v in g.vertices_on(Side::A) {
        if !g.deg(v).is_multiple_of(whole) {
            return Err(PackingError::DivisibilityViolation { vertex: v, modulus: whole });
        }
    }
    let full_group = 4 * whole.div_ceil(k);
    for group in (1..=full_group).rev() {
        let Ok(pack) = pack_spanning_trees(g, m * group) else {
            continue;
        };
        let mut base = EdgeSet::new();
        let mut ok = true;
        for chunk in pack.trees.chunks(group) {
            let gi_edges = chunk.iter().fold(EdgeSet::new(), |acc, t| acc.union(t));
            let gi = g.induced_by_edges(&gi_edges)?;
            let tree = bounded_spanning_tree(&gi, |v| match gi.side(v) {
                Some(Side::A) => Some(k * gi.deg(v) / whole),
                _ => None,
            });
            match tree {
                Ok(t) => base = base.union(&t),
                Err(_) => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let mut gk = base.clone();
        for v in g.vertices_on(Side::A) {
            let goal = k * g.deg(v) / whole;
            let have = g.subset_degree(&base, v)?;
            if have > goal {
                ok = false;
                break;
            }
            let mut extra: Vec<EdgeId> = g.incident(v).iter().copied().filter(|&e| !base.contains(e)).collect();
            extra.sort();
            gk.extend(extra.into_iter().take(goal - have));
        }
        if !ok {
            continue;
        }
        let gr = g.edge_set().difference(&gk);
        if verify_fraction_split(g, &gk, &gr, k, m, r) {
            return Ok((gk, gr));
        }
    }
    Err(PackingError::PackingFailed)
}

pub fn verify_fraction_split(g: &MultiGraph, gk: &EdgeSet, gr: &EdgeSet, k: usize, m: usize, r: usize) -> bool {
    if !gk.is_disjoint(gr) || gk.len() + gr.len() != g.edge_count() {
        return false;
    }
    let dk = g.subset_degrees(gk);
    let dr = g.subset_degrees(gr);
    let exact = g
        .vertices_on(Side::A)
        .all(|v| dk[v.index()] * (k + r) == k * g.deg(v) && dr[v.index()] * (k + r) == r * g.deg(v));
    let h = g.induced_by_edges(gk).expect("subset");
    exact && h.vertex_count() == g.vertex_count() && flowcut::is_k_edge_connected(&h, m)
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

    fn check_pack(g: &MultiGraph, pack: &TreePack, k: usize) {
        assert_eq!(pack.len(), k);
        for (i, t) in pack.trees.iter().enumerate() {
            assert!(is_spanning_tree(g, t));
            for s in &pack.trees[i + 1..] {
                assert!(t.is_disjoint(s));
            }
        }
    }

    #[test]
    fn k44_two_trees() {
        let g = complete(4, 4);
        let pack = pack_spanning_trees(&g, 2).unwrap();
        check_pack(&g, &pack, 2);
    }

    #[test]
    fn tree_input() {
        let g = MultiGraph::new_bipartite(2, 2, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        let pack = pack_spanning_trees(&g, 1).unwrap();
        assert_eq!(pack.trees[0], g.edge_set());
        assert_eq!(pack_spanning_trees(&g, 2), Err(PackingError::NoPacking(2)));
    }

    /// Nearly tight instances, where first-fit scanning alone tends to
    /// strand edges and the exchange phase has to finish the packing.
    #[test]
    fn exchange_phase_completes_packing() {
        let g = circulant(5, &[0, 1, 2, 3]);
        let mut order: Vec<EdgeId> = g.edge_ids().collect();
        order.reverse();
        check_pack(&g, &pack_in_order(&g, 2, &order).unwrap(), 2);
        assert!(pack_spanning_trees(&g, 3).is_err());
        let k88 = complete(8, 8);
        check_pack(&k88, &pack_spanning_trees(&k88, 4).unwrap(), 4);
        let mut shuffled: Vec<EdgeId> = k88.edge_ids().collect();
        shuffled.sort_by_key(|e| (e.0 * 7) % 64);
        check_pack(&k88, &pack_in_order(&k88, 4, &shuffled).unwrap(), 4);
    }

    #[test]
    fn bounded_trees() {
        let g = circulant(6, &[0, 1, 2, 3]);
        let t = degree_bounded_spanning_tree(&g, 4).unwrap();
        assert!(is_spanning_tree(&g, &t));
        let d = g.subset_degrees(&t);
        assert!(g.vertices().all(|v| d[v.index()] <= 4));
        let star = complete(1, 5);
        let t = degree_bounded_spanning_tree(&star, 1).unwrap();
        assert_eq!(t, star.edge_set());
        let split = MultiGraph::new_bipartite(2, 2, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(degree_bounded_spanning_tree(&split, 1), Err(PackingError::NotConnected));
        // tight caps: a path is forced
        let t = bounded_spanning_tree(&circulant(4, &[0, 1]), |_| Some(2)).unwrap();
        assert_eq!(t.len(), 7);
    }

    #[test]
    fn connected_split_trivial_modulus() {
        let g = complete(4, 4);
        let (g1, g2) = connected_split(&g, 1, 1, 0, 4).unwrap();
        assert!(verify_connected_split(&g, &g1, &g2, 1, 1));
    }

    #[test]
    fn connected_split_with_residues() {
        let g = complete(12, 12);
        let (g1, g2) = connected_split(&g, 3, 2, 7, 8).unwrap();
        assert!(verify_connected_split(&g, &g1, &g2, 3, 2));
    }

    #[test]
    fn connected_split_on_tree_fails() {
        let g = MultiGraph::new_bipartite(2, 2, &[(0, 2), (1, 2), (1, 3)]).unwrap();
        assert!(matches!(connected_split(&g, 1, 2, 0, 3), Err(PackingError::BudgetExhausted(_))));
    }

    #[test]
    fn fraction_split_shares() {
        let g = circulant(40, &(0..16).collect::<Vec<_>>());
        let (gk, gr) = fraction_split(&g, 3, 2, 1).unwrap();
        assert!(verify_fraction_split(&g, &gk, &gr, 3, 2, 1));
        for v in g.vertices_on(Side::A) {
            assert_eq!(g.subset_degree(&gk, v).unwrap(), 12);
            assert_eq!(g.subset_degree(&gr, v).unwrap(), 4);
        }
        let odd = circulant(4, &[0, 1, 2]);
        assert!(matches!(fraction_split(&odd, 1, 1, 1), Err(PackingError::DivisibilityViolation { .. })));
    }

    #[test]
    fn fraction_split_unit_share() {
        let g = circulant(8, &[0, 1, 2, 3]);
        let (gk, _) = fraction_split(&g, 3, 1, 1).unwrap();
        assert!(g.vertices_on(Side::A).all(|v| g.subset_degree(&gk, v).unwrap() == 3));
    }
}
