//! Exhaustive bounded growth search.
//!
//! The search decides whether a seed patch can be grown to fill a finite
//! region.  Each search node holds one orientation domain per region cell;
//! black-curve arc consistency prunes the domains, and a tree check rejects
//! any group of decided tiles that can no longer join the growth: every
//! tree component of decided tiles must contain a seed tile or keep an open
//! contact (towards an undecided cell that could still connect, or out of
//! the region, where the surrounding tiling continues).
//!
//! The tree check is a necessary condition for growing the region inside
//! some larger legal patch, so `Refuted` is sound and persists at every
//! larger radius.  A region solution is replayable as a windowed growth
//! order (see [`crate::engine::can_place_within`]).
//!
//! Parallelism splits the root's branches into independent subtree tasks.
//! Every subtree is explored to its own end with an equal share of the
//! budget, so verdicts, node counts and certificates do not depend on the
//! number of threads.

use crate::csp::{orientations, propagate_masks, ALL, NONE};
use crate::engine::{replay_within, Patch, Placement};
use crate::hexlattice::{hex_ball, Hex};
use crate::prototile::PrototileTemplate;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use thiserror::Error;

/// Default node budget per query.
pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Number of contradiction cells kept in a certificate.
const CERTIFICATE_CELLS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("seed is not R1-consistent")]
    SeedInconsistent,
    #[error("seed is empty")]
    EmptySeed,
    #[error("could not build a thread pool: {0}")]
    ThreadPool(String),
}

/// Search parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Maximum number of search nodes.
    pub budget: u64,
    /// Worker threads for root-level parallelism (0: rayon's default).
    pub threads: usize,
    /// Ignore the tree rule (black-curve constraints only).
    pub r1_only: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { budget: DEFAULT_BUDGET, threads: 1, r1_only: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SearchStatus {
    Extendable,
    Refuted,
    Unknown,
}

impl SearchStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchStatus::Extendable => "EXTENDABLE",
            SearchStatus::Refuted => "REFUTED",
            SearchStatus::Unknown => "UNKNOWN",
        }
    }
}

/// Why every branch died.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutationCertificate {
    /// Largest distance from the seed to a region cell.
    pub radius: u32,
    /// Branches closed by an emptied orientation domain.
    pub r1_dead_ends: u64,
    /// Branches closed by a tree component sealed off from the growth.
    pub r2_dead_ends: u64,
    /// The smallest cells at which a contradiction was detected.
    pub frontier: BTreeSet<Hex>,
}

impl RefutationCertificate {
    fn merge(&mut self, other: &RefutationCertificate) {
        self.r1_dead_ends += other.r1_dead_ends;
        self.r2_dead_ends += other.r2_dead_ends;
        self.frontier.extend(other.frontier.iter().copied());
        while self.frontier.len() > CERTIFICATE_CELLS {
            self.frontier.pop_last();
        }
    }

    fn record(&mut self, cell: Hex, tree: bool) {
        if tree {
            self.r2_dead_ends += 1;
        } else {
            self.r1_dead_ends += 1;
        }
        if self.frontier.len() < CERTIFICATE_CELLS || self.frontier.last().is_some_and(|l| cell < *l) {
            self.frontier.insert(cell);
            if self.frontier.len() > CERTIFICATE_CELLS {
                self.frontier.pop_last();
            }
        }
    }
}

/// A region filling found by the search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    /// Seed plus all placed tiles.
    pub patch: Patch,
    /// Placements after the seed, in a windowed-legal growth order (for
    /// tree-aware searches; any order for black-curve-only searches).
    pub order: Vec<Placement>,
}

/// Outcome of a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchVerdict {
    pub status: SearchStatus,
    /// Largest distance from the seed to a region cell.
    pub radius: u32,
    pub region_size: usize,
    pub node_count: u64,
    /// Dead-end statistics; complete when the status is `Refuted`.
    pub certificate: RefutationCertificate,
    pub witness: Option<Witness>,
}

/// Static search data shared by all nodes.
struct Problem {
    template: PrototileTemplate,
    cells: Vec<Hex>,
    nbr: Vec<[u32; 6]>,
    is_seed: Vec<bool>,
    r1_only: bool,
}

enum Outcome {
    Found(Vec<u8>),
    Dead,
    Exhausted,
}

struct Node<'a> {
    problem: &'a Problem,
    budget: u64,
    nodes: u64,
    cert: RefutationCertificate,
}

impl Problem {
    fn new(seed: &Patch, region: &HashSet<Hex>, extra: &[(Hex, u8)], r1_only: bool) -> (Self, Vec<u8>) {
        let seed_cells: Vec<Hex> = seed.cells().collect();
        let mut cells: Vec<Hex> = region.iter().copied().chain(seed_cells.iter().copied()).collect();
        cells.sort();
        cells.dedup();
        let dist: HashMap<Hex, i32> = multi_source_distance(&seed_cells, &cells);
        cells.sort_by_key(|c| (dist[c], *c));
        let index: HashMap<Hex, u32> = cells.iter().enumerate().map(|(i, c)| (*c, i as u32)).collect();
        let nbr = cells
            .iter()
            .map(|c| std::array::from_fn(|k| index.get(&c.neighbor(k as u8)).copied().unwrap_or(NONE)))
            .collect();
        let is_seed = cells.iter().map(|c| seed.contains(*c)).collect();
        let mut dom: Vec<u8> = cells.iter().map(|c| seed.get(*c).map_or(ALL, |o| 1 << o)).collect();
        for &(c, mask) in extra {
            if let Some(&i) = index.get(&c) {
                dom[i as usize] &= mask;
            }
        }
        (Problem { template: *seed.template(), cells, nbr, is_seed, r1_only }, dom)
    }

    /// The smallest cell of a tree component of decided tiles that has no
    /// seed tile and no open contact, if any.
    fn sealed_component(&self, dom: &[u8]) -> Option<u32> {
        let n = dom.len();
        let mut seen = vec![false; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if seen[start] || dom[start].count_ones() != 1 {
                continue;
            }
            seen[start] = true;
            stack.push(start as u32);
            let mut members = Vec::new();
            let mut alive = false;
            while let Some(a) = stack.pop() {
                members.push(a);
                let a = a as usize;
                alive |= self.is_seed[a];
                let oa = dom[a].trailing_zeros() as u8;
                for k in 0..6u8 {
                    if !self.template.has_contact(oa, k) {
                        continue;
                    }
                    let b = self.nbr[a][k as usize];
                    if b == NONE {
                        alive = true;
                        continue;
                    }
                    let link = dom[b as usize] & self.template.r2_mask(oa, k);
                    if link == 0 {
                        continue;
                    }
                    if dom[b as usize].count_ones() == 1 {
                        if !seen[b as usize] {
                            seen[b as usize] = true;
                            stack.push(b);
                        }
                    } else {
                        alive = true;
                    }
                }
            }
            if !alive {
                return members.into_iter().min_by_key(|&i| self.cells[i as usize]);
            }
        }
        None
    }

    /// Undecided cell with the fewest options; cells are stored by
    /// (distance to seed, coordinate), which breaks ties.
    fn branch_cell(&self, dom: &[u8]) -> Option<u32> {
        let mut best: Option<(u32, u32)> = None;
        for (i, &d) in dom.iter().enumerate() {
            let n = d.count_ones();
            if n > 1 && best.is_none_or(|(bn, _)| n < bn) {
                best = Some((n, i as u32));
            }
        }
        best.map(|(_, i)| i)
    }
}

impl<'a> Node<'a> {
    fn new(problem: &'a Problem, budget: u64) -> Self {
        Node { problem, budget, nodes: 0, cert: RefutationCertificate::default() }
    }

    /// Checks a propagated node; `Err` means the branch is dead.
    fn check(&mut self, dom: &[u8]) -> Result<(), ()> {
        if self.problem.r1_only {
            return Ok(());
        }
        match self.problem.sealed_component(dom) {
            Some(i) => {
                self.cert.record(self.problem.cells[i as usize], true);
                Err(())
            }
            None => Ok(()),
        }
    }

    fn children(&mut self, dom: &[u8], i: u32) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for o in orientations(dom[i as usize]) {
            let mut next = dom.to_vec();
            next[i as usize] = 1 << o;
            match propagate_masks(&self.problem.template, &self.problem.nbr, &mut next, vec![i]) {
                Ok(()) => out.push(next),
                Err(j) => self.cert.record(self.problem.cells[j as usize], false),
            }
        }
        out
    }

    fn run(&mut self, dom: Vec<u8>) -> Outcome {
        if self.nodes >= self.budget {
            return Outcome::Exhausted;
        }
        self.nodes += 1;
        if self.check(&dom).is_err() {
            return Outcome::Dead;
        }
        let Some(i) = self.problem.branch_cell(&dom) else {
            return Outcome::Found(dom);
        };
        let mut exhausted = false;
        for child in self.children(&dom, i) {
            match self.run(child) {
                Outcome::Found(d) => return Outcome::Found(d),
                Outcome::Exhausted => exhausted = true,
                Outcome::Dead => {}
            }
            if self.nodes >= self.budget {
                exhausted = true;
                break;
            }
        }
        if exhausted {
            Outcome::Exhausted
        } else {
            Outcome::Dead
        }
    }
}

fn multi_source_distance(sources: &[Hex], cells: &[Hex]) -> HashMap<Hex, i32> {
    let set: HashSet<Hex> = cells.iter().copied().collect();
    let mut dist: HashMap<Hex, i32> = HashMap::with_capacity(cells.len());
    let mut queue = VecDeque::new();
    for &s in sources {
        if dist.insert(s, 0).is_none() {
            queue.push_back(s);
        }
    }
    while let Some(c) = queue.pop_front() {
        let d = dist[&c];
        for nb in c.neighbors() {
            if set.contains(&nb) && !dist.contains_key(&nb) {
                dist.insert(nb, d + 1);
                queue.push_back(nb);
            }
        }
    }
    // Cells unreachable inside the region sort last by their lattice distance.
    for &c in cells {
        dist.entry(c)
            .or_insert_with(|| i32::MAX / 2 + sources.iter().map(|s| s.distance(c)).min().unwrap_or(0));
    }
    dist
}

/// Cells within lattice distance `radius` of any cell of `p`.
pub fn neighborhood(p: &Patch, radius: u32) -> HashSet<Hex> {
    let mut out: HashSet<Hex> = p.cells().collect();
    let mut frontier: Vec<Hex> = out.iter().copied().collect();
    for _ in 0..radius {
        let mut next = Vec::new();
        for c in frontier {
            for nb in c.neighbors() {
                if out.insert(nb) {
                    next.push(nb);
                }
            }
        }
        frontier = next;
    }
    out
}

/// Grows `seed` to fill `region`, exhaustively.
pub fn extend_all(seed: &Patch, region: &HashSet<Hex>, config: &SearchConfig) -> Result<SearchVerdict, SearchError> {
    extend_all_constrained(seed, region, &[], config)
}

/// As [`extend_all`], with extra orientation masks on some region cells.
pub fn extend_all_constrained(
    seed: &Patch,
    region: &HashSet<Hex>,
    constraints: &[(Hex, u8)],
    config: &SearchConfig,
) -> Result<SearchVerdict, SearchError> {
    if seed.is_empty() {
        return Err(SearchError::EmptySeed);
    }
    if !seed.is_r1_consistent() {
        return Err(SearchError::SeedInconsistent);
    }
    let (problem, mut dom) = Problem::new(seed, region, constraints, config.r1_only);
    let radius = problem
        .cells
        .iter()
        .map(|c| seed.cells().map(|s| s.distance(*c)).min().unwrap_or(0))
        .max()
        .unwrap_or(0) as u32;
    let mut verdict = SearchVerdict {
        status: SearchStatus::Refuted,
        radius,
        region_size: problem.cells.len(),
        node_count: 0,
        certificate: RefutationCertificate { radius, ..Default::default() },
        witness: None,
    };
    if config.budget == 0 {
        verdict.status = SearchStatus::Unknown;
        return Ok(verdict);
    }
    let all: Vec<u32> = (0..dom.len() as u32).collect();
    let mut root = Node::new(&problem, 1);
    root.nodes = 1;
    verdict.node_count = 1;
    if let Err(j) = propagate_masks(&problem.template, &problem.nbr, &mut dom, all) {
        root.cert.record(problem.cells[j as usize], false);
        verdict.certificate.merge(&root.cert);
        return Ok(verdict);
    }
    if root.check(&dom).is_err() {
        verdict.certificate.merge(&root.cert);
        return Ok(verdict);
    }
    let Some(i) = problem.branch_cell(&dom) else {
        return Ok(finish(verdict, &problem, seed, region, Outcome::Found(dom)));
    };
    let children = root.children(&dom, i);
    verdict.certificate.merge(&root.cert);
    if children.is_empty() {
        return Ok(verdict);
    }
    let share = ((config.budget - 1) / children.len() as u64).max(1);
    let explore = |child: Vec<u8>| {
        let mut node = Node::new(&problem, share);
        let outcome = node.run(child);
        (outcome, node.nodes, node.cert)
    };
    let results: Vec<(Outcome, u64, RefutationCertificate)> = if config.threads == 1 {
        children.into_iter().map(explore).collect()
    } else {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if config.threads > 0 {
            builder = builder.num_threads(config.threads);
        }
        let pool = builder.build().map_err(|e| SearchError::ThreadPool(e.to_string()))?;
        pool.install(|| children.into_par_iter().map(explore).collect())
    };
    let mut found = None;
    let mut exhausted = false;
    for (outcome, nodes, cert) in results {
        verdict.node_count += nodes;
        verdict.certificate.merge(&cert);
        match outcome {
            Outcome::Found(d) if found.is_none() => found = Some(d),
            Outcome::Exhausted => exhausted = true,
            _ => {}
        }
    }
    Ok(match found {
        Some(d) => finish(verdict, &problem, seed, region, Outcome::Found(d)),
        None if exhausted => SearchVerdict { status: SearchStatus::Unknown, ..verdict },
        None => verdict,
    })
}

fn finish(
    mut verdict: SearchVerdict,
    problem: &Problem,
    seed: &Patch,
    region: &HashSet<Hex>,
    outcome: Outcome,
) -> SearchVerdict {
    let Outcome::Found(dom) = outcome else { return verdict };
    let tiles: Vec<(Hex, u8)> =
        problem.cells.iter().zip(&dom).map(|(&c, &d)| (c, d.trailing_zeros() as u8)).collect();
    let patch = Patch::from_tiles(problem.template, tiles).expect("solutions assign each cell once");
    let order = growth_order(&patch, seed, region, problem.r1_only);
    verdict.status = SearchStatus::Extendable;
    verdict.witness = Some(Witness { patch, order });
    verdict
}

/// A windowed growth order of `full \ seed`: breadth-first over tree
/// connections from the seed and from tiles anchored outside the region.
fn growth_order(full: &Patch, seed: &Patch, region: &HashSet<Hex>, r1_only: bool) -> Vec<Placement> {
    let t = full.template();
    let mut placed: HashSet<Hex> = seed.cells().collect();
    let mut order = Vec::new();
    let mut queue: VecDeque<Hex> = VecDeque::new();
    let mut queued: HashSet<Hex> = HashSet::new();
    let push_from = |c: Hex, queue: &mut VecDeque<Hex>, queued: &mut HashSet<Hex>, placed: &HashSet<Hex>| {
        for nb in full.r2_neighbors(c) {
            if !placed.contains(&nb) && queued.insert(nb) {
                queue.push_back(nb);
            }
        }
    };
    for c in seed.cells() {
        push_from(c, &mut queue, &mut queued, &placed);
    }
    for (c, o) in full.iter() {
        let anchored = (0..6u8).any(|k| t.has_contact(o, k) && !region.contains(&c.neighbor(k)) && !full.contains(c.neighbor(k)));
        if !placed.contains(&c) && (anchored || r1_only) && queued.insert(c) {
            queue.push_back(c);
        }
    }
    while let Some(c) = queue.pop_front() {
        if !placed.insert(c) {
            continue;
        }
        order.push(Placement::new(c, full.get(c).expect("queued cells are tiles")));
        push_from(c, &mut queue, &mut queued, &placed);
    }
    order
}

/// Checks that a witness replays through the engine with every step legal
/// under windowed growth.
pub fn replay_witness(seed: &Patch, region: &HashSet<Hex>, witness: &Witness) -> bool {
    let mut window = region.clone();
    window.extend(seed.cells());
    match replay_within(seed, &witness.order, &window) {
        Ok(p) => p == witness.patch,
        Err(_) => false,
    }
}

/// Decides whether `p` grows to cover every cell within distance `radius`.
pub fn is_legal_within(p: &Patch, radius: u32, config: &SearchConfig) -> Result<SearchVerdict, SearchError> {
    extend_all(p, &neighborhood(p, radius), config)
}

/// Smallest radius in `1..=max_radius` at which the seed is refuted.
pub fn minimal_refutation_radius(
    seed: &Patch,
    max_radius: u32,
    config: &SearchConfig,
) -> Result<Option<SearchVerdict>, SearchError> {
    for r in 1..=max_radius {
        let v = is_legal_within(seed, r, config)?;
        if v.status == SearchStatus::Refuted {
            return Ok(Some(v));
        }
    }
    Ok(None)
}

/// Verdict of one attempted triangle closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosureAttempt {
    /// Direction of the first side.
    pub direction: u8,
    pub length: u32,
    pub status: SearchStatus,
    pub node_count: u64,
}

/// Triangle lengths realised at a corner tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForcedLengths {
    /// Lengths of closed triangles cornered at the seed tile that occur in
    /// some completion of the ball.
    pub observed: BTreeSet<u32>,
    /// `Unknown` if some attempt ran out of budget, `Extendable` otherwise.
    pub status: SearchStatus,
    pub attempts: Vec<ClosureAttempt>,
}

/// Whether a triangle with corner `corner` (which must be a seed tile),
/// first side in direction `k`, and side length `length` closes in some
/// completion of the ball of radius `radius` around the seed.
pub fn triangle_closes(
    seed: &Patch,
    corner: Hex,
    k: u8,
    length: u32,
    radius: u32,
    config: &SearchConfig,
) -> Result<SearchVerdict, SearchError> {
    let frame = crate::constructions::triangle_frame(corner, k, length);
    extend_all_constrained(seed, &neighborhood(seed, radius), &frame, config)
}

/// Enumerates the lengths of closed triangles cornered at `corner` over
/// all completions of the ball of radius `radius` around the seed.
///
/// Each candidate (direction, length) whose triangle fits in the ball is
/// decided separately by constraining its frame; this equals collecting
/// the lengths over all completions.
pub fn forced_lengths(seed: &Patch, corner: Hex, radius: u32, config: &SearchConfig) -> Result<ForcedLengths, SearchError> {
    let o = seed.get(corner).ok_or(SearchError::EmptySeed)?;
    let region = neighborhood(seed, radius);
    let mut out = ForcedLengths { observed: BTreeSet::new(), status: SearchStatus::Extendable, attempts: Vec::new() };
    // A corner tile turns from direction j − 1 to direction j + 1 where its
    // orientation is j − 2 or j + 1.
    let mut dirs: Vec<u8> = vec![(o + 2) % 6, (o + 5) % 6];
    dirs.sort();
    dirs.dedup();
    for &k in &dirs {
        for length in 0.. {
            let cells = crate::constructions::triangle_cells(corner, k, length);
            if !cells.iter().all(|c| region.contains(c)) {
                break;
            }
            let v = triangle_closes(seed, corner, k, length, radius, config)?;
            if v.status == SearchStatus::Extendable {
                out.observed.insert(length);
            }
            if v.status == SearchStatus::Unknown {
                out.status = SearchStatus::Unknown;
            }
            out.attempts.push(ClosureAttempt { direction: k, length, status: v.status, node_count: v.node_count });
        }
    }
    Ok(out)
}

/// A ball of cells around the origin, for convenience.
pub fn ball(radius: u32) -> HashSet<Hex> {
    hex_ball(Hex::ORIGIN, radius as i32).into_iter().collect()
}
