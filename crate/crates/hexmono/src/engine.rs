//! Patches and the growth semantics.
//!
//! A tile may be added to a patch when its cell is free and touches the
//! patch, its black curves continue across every shared edge (R1), and its
//! red tree touches the tree of at least one neighbour (R2).  The very first
//! tile is unconstrained.
//!
//! A patch is *directly constructible* when some order of placements builds
//! it with every step legal; for an R1-consistent patch this holds exactly
//! when its tree-connection graph is connected, and a breadth-first order of
//! that graph is a witness.
//!
//! Bounded searches also need *windowed* growth: inside a finite window the
//! cells outside are treated as an already-grown surrounding, so a tile whose
//! tree leaves the window through a free edge counts as connected.

use crate::hexlattice::{Hex, Isometry};
use crate::prototile::PrototileTemplate;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use thiserror::Error;

/// A tile: a cell and an orientation in `0..6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Placement {
    pub cell: Hex,
    pub orientation: u8,
}

impl Placement {
    pub fn new(cell: Hex, orientation: u8) -> Self {
        Placement { cell, orientation: orientation % 6 }
    }
}

/// Outcome class of a placement attempt.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Legal,
    R1Fail,
    R2Fail,
    Occupied,
    Disconnected,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Legal => "LEGAL",
            Verdict::R1Fail => "R1_FAIL",
            Verdict::R2Fail => "R2_FAIL",
            Verdict::Occupied => "OCCUPIED",
            Verdict::Disconnected => "DISCONNECTED",
        }
    }
}

/// Per-edge result for one occupied neighbour of a candidate placement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCheck {
    /// World direction from the candidate to the neighbour.
    pub dir: u8,
    pub neighbor: Hex,
    /// Black curves continue across this edge.
    pub r1_ok: bool,
    /// Red trees touch across this edge.
    pub r2_connects: bool,
}

/// Full account of why a placement is or is not legal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LegalityReport {
    pub placement: Placement,
    pub r1_edges: Vec<EdgeCheck>,
    /// Number of neighbours whose tree the new tile's tree touches.
    pub r2_connections: usize,
    /// Tree contacts leaving the window through an edge with no tile on
    /// the other side (always 0 outside windowed growth).
    pub exterior_anchors: usize,
    pub connectivity_ok: bool,
    pub verdict: Verdict,
}

impl LegalityReport {
    pub fn is_legal(&self) -> bool {
        self.verdict == Verdict::Legal
    }

    /// Directions of shared edges on which the black curves break.
    pub fn failing_edges(&self) -> Vec<u8> {
        self.r1_edges.iter().filter(|e| !e.r1_ok).map(|e| e.dir).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("illegal placement at {} (orientation {}): {}", .0.placement.cell, .0.placement.orientation, .0.verdict.as_str())]
    Illegal(Box<LegalityReport>),
    #[error("CONFLICT at {cell}: orientations {existing} and {incoming} disagree")]
    Conflict { cell: Hex, existing: u8, incoming: u8 },
    #[error("DISCONNECTED: the cell set is not edge-connected")]
    Disconnected,
    #[error("orientation {0} is out of range 0..6")]
    BadOrientation(u8),
}

/// A finite set of tiles, at most one per cell.
///
/// Patches are values: every operation that adds tiles returns a new patch.
/// Edge-connectivity is checked where the growth rules require it
/// ([`place`], [`union_patches`], the file loader) rather than on every
/// construction, so builders can assemble intermediate pieces freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Patch {
    tiles: BTreeMap<Hex, u8>,
    template: PrototileTemplate,
}

impl Default for Patch {
    fn default() -> Self {
        Patch::new(PrototileTemplate::shipped())
    }
}

impl Patch {
    /// An empty patch decorated with `template`.
    pub fn new(template: PrototileTemplate) -> Self {
        Patch { tiles: BTreeMap::new(), template }
    }

    /// Builds a patch from tiles, rejecting conflicting duplicates.
    pub fn from_tiles(
        template: PrototileTemplate,
        tiles: impl IntoIterator<Item = (Hex, u8)>,
    ) -> Result<Self, EngineError> {
        let mut p = Patch::new(template);
        for (c, o) in tiles {
            if o >= 6 {
                return Err(EngineError::BadOrientation(o));
            }
            if let Some(&e) = p.tiles.get(&c) {
                if e != o {
                    return Err(EngineError::Conflict { cell: c, existing: e, incoming: o });
                }
            }
            p.tiles.insert(c, o);
        }
        Ok(p)
    }

    pub fn template(&self) -> &PrototileTemplate {
        &self.template
    }

    /// The same tiles decorated with another template.
    pub fn with_template(&self, template: PrototileTemplate) -> Patch {
        Patch { tiles: self.tiles.clone(), template }
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn get(&self, c: Hex) -> Option<u8> {
        self.tiles.get(&c).copied()
    }

    pub fn contains(&self, c: Hex) -> bool {
        self.tiles.contains_key(&c)
    }

    /// Tiles in `(q, r)` order.
    pub fn iter(&self) -> impl Iterator<Item = (Hex, u8)> + '_ {
        self.tiles.iter().map(|(&c, &o)| (c, o))
    }

    pub fn cells(&self) -> impl Iterator<Item = Hex> + '_ {
        self.tiles.keys().copied()
    }

    pub fn placements(&self) -> Vec<Placement> {
        self.iter().map(|(c, o)| Placement::new(c, o)).collect()
    }

    pub(crate) fn insert_unchecked(&mut self, c: Hex, o: u8) {
        self.tiles.insert(c, o % 6);
    }

    /// The subpatch on the cells accepted by `keep`.
    pub fn restrict(&self, mut keep: impl FnMut(Hex) -> bool) -> Patch {
        Patch {
            tiles: self.tiles.iter().filter(|(&c, _)| keep(c)).map(|(&c, &o)| (c, o)).collect(),
            template: self.template,
        }
    }

    /// True if every tile of `self` appears in `other` with the same orientation.
    pub fn is_subpatch_of(&self, other: &Patch) -> bool {
        self.iter().all(|(c, o)| other.get(c) == Some(o))
    }

    /// True if the cell set is edge-connected (the empty patch counts).
    pub fn is_edge_connected(&self) -> bool {
        let Some(start) = self.cells().next() else { return true };
        let mut seen = HashSet::from([start]);
        let mut queue = vec![start];
        while let Some(c) = queue.pop() {
            for nb in c.neighbors() {
                if self.contains(nb) && seen.insert(nb) {
                    queue.push(nb);
                }
            }
        }
        seen.len() == self.len()
    }

    /// Tiles with at least one free neighbouring cell.
    pub fn boundary_cells(&self) -> Vec<Hex> {
        self.cells().filter(|c| c.neighbors().iter().any(|nb| !self.contains(*nb))).collect()
    }

    /// Empty cells sharing an edge with some tile, ascending.
    pub fn frontier_cells(&self) -> Vec<Hex> {
        let set: BTreeSet<Hex> =
            self.cells().flat_map(|c| c.neighbors()).filter(|nb| !self.contains(*nb)).collect();
        set.into_iter().collect()
    }

    /// Shared edges (as `(cell, dir)` with `dir < 3`) whose black curves break.
    pub fn r1_violations(&self) -> Vec<(Hex, u8)> {
        let mut out = Vec::new();
        for (c, o) in self.iter() {
            for k in 0..3u8 {
                if let Some(o2) = self.get(c.neighbor(k)) {
                    if !self.template.r1_compatible(o, k, o2) {
                        out.push((c, k));
                    }
                }
            }
        }
        out
    }

    pub fn is_r1_consistent(&self) -> bool {
        self.r1_violations().is_empty()
    }

    /// Neighbours of `c` whose tree touches the tree of `c`.
    pub fn r2_neighbors(&self, c: Hex) -> impl Iterator<Item = Hex> + '_ {
        let o = self.get(c);
        (0..6u8).filter_map(move |k| {
            let o = o?;
            let nb = c.neighbor(k);
            let o2 = self.get(nb)?;
            self.template.r2_linked(o, k, o2).then_some(nb)
        })
    }

    /// Mean of the Cartesian tile centres (origin for the empty patch).
    pub fn centroid(&self) -> (f64, f64) {
        if self.is_empty() {
            return (0.0, 0.0);
        }
        let (sx, sy) = self.cells().map(Hex::center).fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        (sx / self.len() as f64, sy / self.len() as f64)
    }
}

/// Legality of adding `pl` to `p` under the plain growth rules.
pub fn can_place(p: &Patch, pl: Placement) -> LegalityReport {
    evaluate(p, pl, None)
}

/// Legality of adding `pl` to `p` when growth is confined to `window`.
///
/// Cells outside the window stand for an already-grown surrounding: they
/// count as neighbours for connectivity, and a tree contact across an edge
/// into them counts as an R2 connection (an *exterior anchor*).  Black-curve
/// continuity is only checked against placed tiles.
pub fn can_place_within(p: &Patch, pl: Placement, window: &HashSet<Hex>) -> LegalityReport {
    evaluate(p, pl, Some(window))
}

fn evaluate(p: &Patch, pl: Placement, window: Option<&HashSet<Hex>>) -> LegalityReport {
    let t = p.template();
    let mut report = LegalityReport {
        placement: pl,
        r1_edges: Vec::new(),
        r2_connections: 0,
        exterior_anchors: 0,
        connectivity_ok: false,
        verdict: Verdict::Legal,
    };
    if p.contains(pl.cell) {
        report.verdict = Verdict::Occupied;
        return report;
    }
    let mut touches_exterior = false;
    for k in 0..6u8 {
        let nb = pl.cell.neighbor(k);
        if let Some(o2) = p.get(nb) {
            report.r1_edges.push(EdgeCheck {
                dir: k,
                neighbor: nb,
                r1_ok: t.r1_compatible(pl.orientation, k, o2),
                r2_connects: t.r2_linked(pl.orientation, k, o2),
            });
        } else if window.is_some_and(|w| !w.contains(&nb)) {
            touches_exterior = true;
            if t.has_contact(pl.orientation, k) {
                report.exterior_anchors += 1;
            }
        }
    }
    report.r2_connections = report.r1_edges.iter().filter(|e| e.r2_connects).count();
    report.connectivity_ok = p.is_empty() || !report.r1_edges.is_empty() || touches_exterior;
    report.verdict = if p.is_empty() {
        Verdict::Legal
    } else if !report.connectivity_ok {
        Verdict::Disconnected
    } else if report.r1_edges.iter().any(|e| !e.r1_ok) {
        Verdict::R1Fail
    } else if report.r2_connections == 0 && report.exterior_anchors == 0 {
        Verdict::R2Fail
    } else {
        Verdict::Legal
    };
    report
}

/// Adds a legal placement, returning the extended patch.
pub fn place(p: &Patch, pl: Placement) -> Result<Patch, EngineError> {
    let report = can_place(p, pl);
    if !report.is_legal() {
        return Err(EngineError::Illegal(Box::new(report)));
    }
    let mut q = p.clone();
    q.insert_unchecked(pl.cell, pl.orientation);
    Ok(q)
}

/// Orientations that may legally be placed at `c`, ascending.
pub fn legal_orientations(p: &Patch, c: Hex) -> Vec<u8> {
    (0..6u8).filter(|&o| can_place(p, Placement::new(c, o)).is_legal()).collect()
}

/// Applies a direct isometry to every tile.
pub fn transform_patch(p: &Patch, g: Isometry) -> Patch {
    Patch {
        tiles: p.iter().map(|(c, o)| (g.apply(c), g.apply_orientation(o))).collect(),
        template: p.template,
    }
}

/// Merges patches that agree on shared cells; the result must be
/// edge-connected.
pub fn union_patches(ps: &[Patch]) -> Result<Patch, EngineError> {
    let template = ps.first().map(|p| p.template).unwrap_or_else(PrototileTemplate::shipped);
    let merged = Patch::from_tiles(template, ps.iter().flat_map(|p| p.iter()))?;
    if !merged.is_edge_connected() {
        return Err(EngineError::Disconnected);
    }
    Ok(merged)
}

/// Result of the direct-constructibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constructibility {
    pub constructible: bool,
    pub r1_consistent: bool,
    /// Number of connected components of the tree-connection graph.
    pub components: usize,
    /// A legal growth order when constructible, empty otherwise.
    pub witness: Vec<Placement>,
}

/// Decides whether `p` can be grown tile by tile with every step legal.
///
/// The witness is a breadth-first order of the tree-connection graph from
/// the smallest cell, visiting neighbours in direction order.
pub fn is_directly_constructible(p: &Patch) -> Constructibility {
    let r1_consistent = p.is_r1_consistent();
    let mut order = Vec::with_capacity(p.len());
    let mut seen: HashSet<Hex> = HashSet::with_capacity(p.len());
    let mut components = 0;
    for start in p.cells() {
        if seen.contains(&start) {
            continue;
        }
        components += 1;
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(c) = queue.pop_front() {
            if components == 1 {
                order.push(Placement::new(c, p.get(c).expect("visited cells are tiles")));
            }
            for nb in p.r2_neighbors(c) {
                if seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
    }
    let constructible = r1_consistent && components <= 1;
    Constructibility {
        constructible,
        r1_consistent,
        components,
        witness: if constructible { order } else { Vec::new() },
    }
}

/// Replays a placement order from an empty patch, failing at the first
/// illegal step.
pub fn replay(template: PrototileTemplate, order: &[Placement]) -> Result<Patch, EngineError> {
    let mut p = Patch::new(template);
    for &pl in order {
        p = place(&p, pl)?;
    }
    Ok(p)
}

/// Replays a placement order on top of `start` under windowed growth.
pub fn replay_within(
    start: &Patch,
    order: &[Placement],
    window: &HashSet<Hex>,
) -> Result<Patch, EngineError> {
    let mut p = start.clone();
    for &pl in order {
        let report = can_place_within(&p, pl, window);
        if !report.is_legal() {
            return Err(EngineError::Illegal(Box::new(report)));
        }
        p.insert_unchecked(pl.cell, pl.orientation);
    }
    Ok(p)
}
