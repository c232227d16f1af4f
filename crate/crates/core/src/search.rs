//! Searching the move graph.
//!
//! Vertices of the graph are isomorphism classes (canonical forms), edges
//! are legal moves. [`connect`] runs a level-synchronous bidirectional
//! breadth-first search; [`reduce_to`] is a best-first simplification
//! search that prefers smaller triangulations.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{self, BoundError};
use crate::homology::first_homology;
use crate::isomorphism::{canonical_form, CanonicalForm};
use crate::moves::{apply_move, enumerate_moves, invert_record, random_walk, Move, MoveRecord};
use crate::skeleton::Skeleton;
use crate::triangulation::Triangulation;

#[derive(Clone, Debug, Serialize)]
pub struct SearchConfig {
    /// Largest triangulation visited.
    pub max_tets: usize,
    /// Most triangulations stored across both search trees.
    pub max_frontier: usize,
    /// Longest path considered.
    pub max_depth: usize,
    pub seed: u64,
    /// Worker threads for frontier expansion; `None` uses the global pool.
    pub jobs: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { max_tets: 10, max_frontier: 200_000, max_depth: 12, seed: 0, jobs: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Distinct triangulations stored.
    pub explored: usize,
    pub forward_depth: usize,
    pub backward_depth: usize,
    pub forward_frontier: usize,
    pub backward_frontier: usize,
    /// Smallest triangulation reached.
    pub best_tets: usize,
}

/// Move-invariant data compared before searching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fingerprint {
    pub homology: String,
    pub boundary_components: usize,
    pub boundary_euler: i64,
    pub components: usize,
}

impl Fingerprint {
    pub fn of(tri: &Triangulation) -> Fingerprint {
        let skel = Skeleton::new(tri);
        Fingerprint {
            homology: first_homology(tri).to_string(),
            boundary_components: skel.boundary_component_count(tri),
            boundary_euler: skel.boundary_euler_characteristic(),
            components: tri.component_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("invariants differ: start {start:?}, goal {goal:?}")]
    FingerprintMismatch { start: Fingerprint, goal: Fingerprint },
    #[error("search ceilings reached: {0:?}")]
    Exhausted(SearchStats),
    #[error("triangulation is disconnected or empty")]
    Disconnected,
    #[error(transparent)]
    Bound(#[from] BoundError),
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOutcome {
    pub record: MoveRecord,
    pub stats: SearchStats,
    /// Tetrahedra at the two ends.
    pub p: usize,
    pub q: usize,
    /// Path length compared with `main_bound(p, q)`.
    pub within_bound: bool,
}

impl SearchOutcome {
    pub fn len(&self) -> usize {
        self.record.len()
    }

    pub fn is_empty(&self) -> bool {
        self.record.is_empty()
    }
}

struct Node {
    parent: Option<CanonicalForm>,
    mv: Option<Move>,
    tri: Triangulation,
}

struct Tree {
    nodes: HashMap<CanonicalForm, Node>,
    frontier: Vec<CanonicalForm>,
    depth: usize,
}

impl Tree {
    fn new(root: &Triangulation, cf: CanonicalForm) -> Tree {
        let mut nodes = HashMap::new();
        nodes.insert(cf.clone(), Node { parent: None, mv: None, tri: root.clone() });
        Tree { nodes, frontier: vec![cf], depth: 0 }
    }

    /// Moves from the root to `cf`, and the triangulation reached.
    fn path(&self, cf: &CanonicalForm) -> (MoveRecord, Triangulation) {
        let mut moves = Vec::new();
        let mut cur = cf.clone();
        while let Some(node) = self.nodes.get(&cur) {
            match (&node.parent, node.mv) {
                (Some(p), Some(m)) => {
                    moves.push((m, node.tri.size()));
                    cur = p.clone();
                }
                _ => break,
            }
        }
        let mut rec = MoveRecord::new();
        for (m, n) in moves.into_iter().rev() {
            rec.push(m, n);
        }
        (rec, self.nodes[cf].tri.clone())
    }
}

/// Legal successors within the size ceiling, in enumeration order.
fn successors(tri: &Triangulation, max_tets: usize) -> Vec<(Move, Triangulation, CanonicalForm)> {
    enumerate_moves(tri)
        .into_iter()
        .filter(|m| {
            let n = tri.size() as isize + m.tet_delta();
            n >= 1 && n <= max_tets as isize
        })
        .filter_map(|m| {
            let next = apply_move(tri, m).ok()?;
            let cf = canonical_form(&next).ok()?;
            Some((m, next, cf))
        })
        .collect()
}

/// Runs `f` on a pool of `jobs` threads, or on the global pool.
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match jobs.and_then(|j| rayon::ThreadPoolBuilder::new().num_threads(j).build().ok()) {
        Some(pool) => pool.install(f),
        None => f(),
    }
}

/// Finds moves from `start` to a triangulation isomorphic to `goal`.
pub fn connect(start: &Triangulation, goal: &Triangulation, cfg: &SearchConfig) -> Result<SearchOutcome, SearchError> {
    let (fs, fg) = (Fingerprint::of(start), Fingerprint::of(goal));
    if fs != fg {
        return Err(SearchError::FingerprintMismatch { start: fs, goal: fg });
    }
    let cs = canonical_form(start).map_err(|_| SearchError::Disconnected)?;
    let cg = canonical_form(goal).map_err(|_| SearchError::Disconnected)?;
    if start.is_empty() || goal.is_empty() {
        return Err(SearchError::Disconnected);
    }
    let (p, q) = (start.size(), goal.size());
    let finish = |record: MoveRecord, stats: SearchStats| -> Result<SearchOutcome, SearchError> {
        let within_bound = bounds::within_main_bound(record.len() as u64, p as u64, q as u64)?;
        Ok(SearchOutcome { record, stats, p, q, within_bound })
    };
    let mut stats = SearchStats { best_tets: p.min(q), ..Default::default() };
    if cs == cg {
        stats.explored = 1;
        return finish(MoveRecord::new(), stats);
    }
    let max_tets = cfg.max_tets.max(p).max(q);
    let mut fwd = Tree::new(start, cs);
    let mut bwd = Tree::new(goal, cg);

    with_jobs(cfg.jobs, || loop {
        stats.explored = fwd.nodes.len() + bwd.nodes.len();
        stats.forward_depth = fwd.depth;
        stats.backward_depth = bwd.depth;
        stats.forward_frontier = fwd.frontier.len();
        stats.backward_frontier = bwd.frontier.len();
        if fwd.depth + bwd.depth >= cfg.max_depth || stats.explored >= cfg.max_frontier {
            return Err(SearchError::Exhausted(stats.clone()));
        }
        let forward = match (fwd.frontier.is_empty(), bwd.frontier.is_empty()) {
            (true, true) => return Err(SearchError::Exhausted(stats.clone())),
            (true, false) => false,
            (false, true) => true,
            (false, false) => fwd.frontier.len() <= bwd.frontier.len(),
        };
        let (this, other) = if forward { (&mut fwd, &bwd) } else { (&mut bwd, &fwd) };
        let nodes = &this.nodes;
        let expanded: Vec<Vec<(Move, Triangulation, CanonicalForm)>> =
            this.frontier.par_iter().map(|cf| successors(&nodes[cf].tri, max_tets)).collect();
        let mut next = Vec::new();
        let mut meet = None;
        for (parent, succ) in this.frontier.iter().zip(expanded) {
            for (m, tri, cf) in succ {
                if this.nodes.contains_key(&cf) {
                    continue;
                }
                stats.best_tets = stats.best_tets.min(tri.size());
                this.nodes.insert(cf.clone(), Node { parent: Some(parent.clone()), mv: Some(m), tri });
                if meet.is_none() && other.nodes.contains_key(&cf) {
                    meet = Some(cf.clone());
                }
                next.push(cf);
            }
            if meet.is_some() {
                break;
            }
        }
        this.frontier = next;
        this.depth += 1;
        if let Some(cf) = meet {
            stats.explored = fwd.nodes.len() + bwd.nodes.len();
            let (mut rec, at) = fwd.path(&cf);
            let (back, _) = bwd.path(&cf);
            let (tail, _) = invert_record(goal, &back, &at).map_err(|_| SearchError::Disconnected)?;
            rec.extend(&tail);
            return finish(rec, stats.clone());
        }
    })
}

/// Breadth-first ball around `root`: sizes up to `root.size() + extra`,
/// at most `cap` triangulations.
fn ball(root: &Triangulation, cf: CanonicalForm, extra: usize, cap: usize) -> Tree {
    let mut tree = Tree::new(root, cf);
    let max_tets = root.size() + extra;
    while !tree.frontier.is_empty() && tree.nodes.len() < cap {
        let nodes = &tree.nodes;
        let expanded: Vec<_> = tree.frontier.par_iter().map(|cf| successors(&nodes[cf].tri, max_tets)).collect();
        let mut next = Vec::new();
        for (parent, succ) in tree.frontier.iter().zip(expanded) {
            for (m, tri, cf) in succ {
                if tree.nodes.len() >= cap || tree.nodes.contains_key(&cf) {
                    continue;
                }
                tree.nodes.insert(cf.clone(), Node { parent: Some(parent.clone()), mv: Some(m), tri });
                next.push(cf);
            }
        }
        tree.frontier = next;
        tree.depth += 1;
    }
    tree
}

/// Vertices first, then tetrahedra. Shrinking greedily by size strands
/// the search among small triangulations with surplus vertices whose
/// links are too large to remove. Ties go to the newest node, so the
/// search dives rather than sweeping a plateau.
fn reduction_key(tri: &Triangulation) -> (usize, usize) {
    (Skeleton::new(tri).vertices.len(), tri.size())
}

/// Best-first search from `from` towards the class of `to`, expanding the
/// triangulation with fewest vertices, then fewest tetrahedra, first and
/// allowing moves that grow it by at
/// most one tetrahedron. The search stops on reaching a small ball of
/// triangulations around `to` (explored first, up to a tenth of
/// `max_nodes`) and finishes along the ball's tree. Triangulations
/// smaller than `to` outside the ball are dropped: without the 1-4 move
/// there is rarely a way back up. Returns the moves and the triangulation
/// reached, which is isomorphic to `to`.
pub fn reduce_to(
    from: &Triangulation,
    to: &Triangulation,
    cfg: &SearchConfig,
    max_nodes: usize,
) -> Result<(MoveRecord, Triangulation), SearchError> {
    let target = canonical_form(to).map_err(|_| SearchError::Disconnected)?;
    let root = canonical_form(from).map_err(|_| SearchError::Disconnected)?;
    with_jobs(cfg.jobs, || {
        let near = ball(to, target, 2, (max_nodes / 10).max(1));
        let mut tree = Tree::new(from, root.clone());
        let mut heap = BinaryHeap::new();
        let mut order = 0usize;
        heap.push(Reverse((reduction_key(from), Reverse(order), 0usize, root)));
        let mut stats = SearchStats { best_tets: from.size(), ..Default::default() };
        while let Some(Reverse((_, _, d, cf))) = heap.pop() {
            if near.nodes.contains_key(&cf) {
                let (mut rec, at) = tree.path(&cf);
                let (back, _) = near.path(&cf);
                let (tail, end) = invert_record(to, &back, &at).map_err(|_| SearchError::Disconnected)?;
                rec.extend(&tail);
                return Ok((rec, end));
            }
            if d >= cfg.max_depth {
                continue;
            }
            let cur = tree.nodes[&cf].tri.clone();
            for (m, tri, next) in successors(&cur, cfg.max_tets) {
                if m.tet_delta() > 1 || tree.nodes.contains_key(&next) {
                    continue;
                }
                if tri.size() < to.size() && !near.nodes.contains_key(&next) {
                    continue;
                }
                stats.best_tets = stats.best_tets.min(tri.size());
                order += 1;
                heap.push(Reverse((reduction_key(&tri), Reverse(order), d + 1, next.clone())));
                tree.nodes.insert(next, Node { parent: Some(cf.clone()), mv: Some(m), tri });
            }
            stats.explored = tree.nodes.len() + near.nodes.len();
            if stats.explored >= max_nodes {
                break;
            }
        }
        stats.explored = tree.nodes.len() + near.nodes.len();
        Err(SearchError::Exhausted(stats))
    })
}

#[derive(Clone, Debug)]
pub struct Probe {
    pub walk: MoveRecord,
    pub goal: Triangulation,
    pub outcome: SearchOutcome,
}

/// Takes a seeded random walk of `steps` moves from `tri` (within
/// `cfg.max_tets`) and connects `tri` to where it ended.
pub fn random_walk_probe(tri: &Triangulation, steps: usize, cfg: &SearchConfig) -> Result<Probe, SearchError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (goal, walk) = random_walk(tri, steps, cfg.max_tets, &mut rng);
    let outcome = connect(tri, &goal, cfg)?;
    Ok(Probe { walk, goal, outcome })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moves::replay;

    #[test]
    fn identity_and_single_move() {
        let t = Triangulation::with_free_tets(1);
        let cfg = SearchConfig::default();
        let o = connect(&t, &t, &cfg).unwrap();
        assert!(o.is_empty() && o.within_bound);
        for m in enumerate_moves(&t) {
            let g = apply_move(&t, m).unwrap();
            let o = connect(&t, &g, &cfg).unwrap();
            assert_eq!(o.len(), 1);
            let end = replay(&t, &o.record).unwrap();
            assert_eq!(canonical_form(&end).unwrap(), canonical_form(&g).unwrap());
        }
    }

    #[test]
    fn fingerprint_mismatch() {
        let ball = Triangulation::with_free_tets(1);
        let torus: Triangulation = "tets 1\n0: - 0/1230 0/3012 -\n".parse().unwrap();
        assert!(matches!(connect(&ball, &torus, &SearchConfig::default()), Err(SearchError::FingerprintMismatch { .. })));
    }
}
