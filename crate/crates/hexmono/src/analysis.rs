//! Structure extraction: black-curve features, the tree-connection graph,
//! the class tests and a brute-force translation-period check.
//!
//! Every verdict here is computed on a finite patch.  Features that run
//! into the patch boundary are reported as truncated rather than guessed
//! at, and "infinite" properties are witnessed by spanning the window.

use crate::engine::Patch;
use crate::hexlattice::{hex_ball, Hex};
use petgraph::unionfind::UnionFind;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("black curves break across the edge between {0} and {1}")]
    R1Inconsistent(Hex, Hex),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FeatureKind {
    /// A closed curve with three corners and three equal sides.
    Triangle,
    /// A closed curve that is not an equilateral triangle.
    IrregularLoop,
    /// A maximal straight run of stripe tiles on an open curve.
    LineSegment,
    /// An open curve: both ends leave the patch.
    RayTruncated,
}

/// One tile visited by a curve: the cell, the world edge the curve enters
/// through and the one it leaves through.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveStep {
    pub cell: Hex,
    pub enter: u8,
    pub exit: u8,
    /// True if this tile's curve is its straight stripe.
    pub straight: bool,
}

/// A black-curve feature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R1Feature {
    pub kind: FeatureKind,
    /// Tiles in curve order.
    pub cells: Vec<Hex>,
    /// Triangles: tiles in one straight side.  Line segments: run length.
    pub length: Option<usize>,
    /// Tiles where the curve turns (triangle corners).
    pub corner_cells: Vec<Hex>,
    /// Stripe tiles of a closed curve (the sides).
    pub side_cells: Vec<Hex>,
    /// Straight-run lengths between consecutive corners of a closed curve.
    pub side_lengths: Vec<usize>,
    /// Line segments: world direction of travel (one of the two).
    pub direction: Option<u8>,
    /// Open features only: both ends leave through edges with no tile behind.
    pub open_both_ends: bool,
}

impl R1Feature {
    pub fn is_closed(&self) -> bool {
        matches!(self.kind, FeatureKind::Triangle | FeatureKind::IrregularLoop)
    }
}

/// Follows every black curve of an R1-consistent patch.
///
/// Features are listed in order of their smallest `(cell, edge)` incidence,
/// so the output is deterministic.
pub fn trace_r1(p: &Patch) -> Result<Vec<R1Feature>, AnalysisError> {
    if let Some(&(c, k)) = p.r1_violations().first() {
        return Err(AnalysisError::R1Inconsistent(c, c.neighbor(k)));
    }
    let t = *p.template();
    let exit_of = |c: Hex, enter: u8| -> u8 {
        let o = p.get(c).expect("traced cells are tiles");
        let j = (enter + 6 - o) % 6;
        (t.partner(j) + o) % 6
    };
    let straight = |c: Hex, enter: u8| -> bool {
        let o = p.get(c).expect("traced cells are tiles");
        t.is_stripe_edge((enter + 6 - o) % 6)
    };
    let mut seen: HashSet<(Hex, u8)> = HashSet::new();
    let mut out = Vec::new();
    let mut lines = Vec::new();
    for (c, _) in p.iter() {
        for k in 0..6u8 {
            if seen.contains(&(c, k)) {
                continue;
            }
            // Walk forward from entering (c, k).
            let mut steps = Vec::new();
            let mut cur = (c, k);
            let mut closed = false;
            loop {
                let exit = exit_of(cur.0, cur.1);
                seen.insert(cur);
                seen.insert((cur.0, exit));
                steps.push(CurveStep { cell: cur.0, enter: cur.1, exit, straight: straight(cur.0, cur.1) });
                let nb = cur.0.neighbor(exit);
                if !p.contains(nb) {
                    break;
                }
                let next = (nb, (exit + 3) % 6);
                if next == (c, k) {
                    closed = true;
                    break;
                }
                cur = next;
            }
            if !closed {
                // Walk backward from (c, k) through the edge it entered by.
                let mut back = Vec::new();
                let mut edge = (c, k);
                loop {
                    let nb = edge.0.neighbor(edge.1);
                    if !p.contains(nb) {
                        break;
                    }
                    let exit = (edge.1 + 3) % 6;
                    let enter = exit_of(nb, exit);
                    seen.insert((nb, exit));
                    seen.insert((nb, enter));
                    back.push(CurveStep { cell: nb, enter, exit, straight: straight(nb, enter) });
                    edge = (nb, enter);
                }
                back.reverse();
                back.extend(steps);
                steps = back;
            }
            let feature = if closed { closed_feature(&steps) } else { open_feature(&steps) };
            if !closed {
                lines.extend(line_segments(&steps));
            }
            out.push(feature);
        }
    }
    out.extend(lines);
    Ok(out)
}

fn closed_feature(steps: &[CurveStep]) -> R1Feature {
    let corner_idx: Vec<usize> = (0..steps.len()).filter(|&i| !steps[i].straight).collect();
    let mut side_lengths = Vec::new();
    for (n, &i) in corner_idx.iter().enumerate() {
        let j = corner_idx[(n + 1) % corner_idx.len()];
        let gap = if j > i { j - i - 1 } else { steps.len() - i - 1 + j };
        side_lengths.push(gap);
    }
    let regular = corner_idx.len() == 3 && side_lengths.iter().all(|&l| l == side_lengths[0]);
    R1Feature {
        kind: if regular { FeatureKind::Triangle } else { FeatureKind::IrregularLoop },
        cells: steps.iter().map(|s| s.cell).collect(),
        length: regular.then(|| side_lengths[0]),
        corner_cells: corner_idx.iter().map(|&i| steps[i].cell).collect(),
        side_cells: steps.iter().filter(|s| s.straight).map(|s| s.cell).collect(),
        side_lengths,
        direction: None,
        open_both_ends: false,
    }
}

fn open_feature(steps: &[CurveStep]) -> R1Feature {
    R1Feature {
        kind: FeatureKind::RayTruncated,
        cells: steps.iter().map(|s| s.cell).collect(),
        length: None,
        corner_cells: steps.iter().filter(|s| !s.straight).map(|s| s.cell).collect(),
        side_cells: steps.iter().filter(|s| s.straight).map(|s| s.cell).collect(),
        side_lengths: Vec::new(),
        direction: None,
        open_both_ends: true,
    }
}

fn line_segments(steps: &[CurveStep]) -> Vec<R1Feature> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < steps.len() {
        if !steps[i].straight {
            i += 1;
            continue;
        }
        let start = i;
        while i < steps.len() && steps[i].straight {
            i += 1;
        }
        let run = &steps[start..i];
        out.push(R1Feature {
            kind: FeatureKind::LineSegment,
            cells: run.iter().map(|s| s.cell).collect(),
            length: Some(run.len()),
            corner_cells: Vec::new(),
            side_cells: run.iter().map(|s| s.cell).collect(),
            side_lengths: Vec::new(),
            direction: Some(run[0].exit),
            open_both_ends: start == 0 && i == steps.len(),
        });
    }
    out
}

/// The tree-connection graph of a patch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct R2Graph {
    pub nodes: Vec<Hex>,
    /// Each edge once, as `(a, b)` with `a < b`.
    pub edges: Vec<(Hex, Hex)>,
    /// Components as sorted cell lists, ordered by smallest cell.
    pub components: Vec<Vec<Hex>>,
    pub is_forest: bool,
}

impl R2Graph {
    /// Connected and acyclic (the empty graph is not a tree).
    pub fn is_tree(&self) -> bool {
        !self.nodes.is_empty() && self.components.len() == 1 && self.edges.len() + 1 == self.nodes.len()
    }

    /// Index of the component containing `c`.
    pub fn component_of(&self, c: Hex) -> Option<usize> {
        self.components.iter().position(|comp| comp.binary_search(&c).is_ok())
    }
}

/// Builds the tree-connection graph with union-find.
pub fn r2_graph(p: &Patch) -> R2Graph {
    let nodes: Vec<Hex> = p.cells().collect();
    let index: HashMap<Hex, usize> = nodes.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let t = p.template();
    let mut uf = UnionFind::new(nodes.len());
    let mut edges = Vec::new();
    for (c, o) in p.iter() {
        for k in 0..3u8 {
            let nb = c.neighbor(k);
            if let Some(o2) = p.get(nb) {
                if t.r2_linked(o, k, o2) {
                    edges.push((c.min(nb), c.max(nb)));
                    uf.union(index[&c], index[&nb]);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Hex>> = BTreeMap::new();
    for (i, &c) in nodes.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(c);
    }
    let mut components: Vec<Vec<Hex>> = groups.into_values().collect();
    components.sort();
    let is_forest = edges.len() + components.len() == nodes.len();
    R2Graph { nodes, edges, components, is_forest }
}

/// A tile carrying corners of triangles of different lengths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct C0Violation {
    pub cell: Hex,
    pub lengths: Vec<usize>,
}

/// Checks that triangles whose corners share a tile have equal lengths.
pub fn check_c0(features: &[R1Feature]) -> Option<C0Violation> {
    let mut at: BTreeMap<Hex, BTreeSet<usize>> = BTreeMap::new();
    for f in features.iter().filter(|f| f.kind == FeatureKind::Triangle) {
        for &c in &f.corner_cells {
            at.entry(c).or_default().insert(f.length.expect("triangles have a length"));
        }
    }
    at.into_iter()
        .find(|(_, ls)| ls.len() > 1)
        .map(|(cell, ls)| C0Violation { cell, lengths: ls.into_iter().collect() })
}

/// Central pattern of three equal triangles meeting corner to side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PinwheelKind {
    /// The trees around the centre close up into a cycle.
    Cycle,
    /// The three branches at the centre stay pairwise disconnected.
    Anticycle,
    /// Neither pattern (not expected for R1-consistent patches).
    Other,
}

/// One detected pinwheel of three equal triangles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PinwheelFinding {
    pub kind: PinwheelKind,
    /// Common side length of the three triangles.
    pub length: usize,
    /// Indices into the feature list.
    pub triangles: [usize; 3],
    /// The three corners that sit on the next triangle's side.
    pub touch_corners: [Hex; 3],
    /// Tiles of the central region used for classification.
    pub hub: Vec<Hex>,
    pub hub_edges: usize,
    pub hub_components: usize,
}

/// Cells of the closed lattice triangle spanned by three cells.
pub fn closed_lattice_triangle(a: Hex, b: Hex, c: Hex) -> Vec<Hex> {
    let r = a.distance(b).max(b.distance(c)).max(a.distance(c));
    let cross = |o: Hex, u: Hex, v: Hex| -> i64 {
        // Twice the signed area in axial coordinates (an affine image of the
        // plane, so the sign test is exact).
        let (ux, uy) = ((u.q - o.q) as i64, (u.r - o.r) as i64);
        let (vx, vy) = ((v.q - o.q) as i64, (v.r - o.r) as i64);
        ux * vy - uy * vx
    };
    let area = cross(a, b, c);
    hex_ball(a, r)
        .into_iter()
        .filter(|&x| {
            let s = [cross(a, b, x), cross(b, c, x), cross(c, a, x)];
            if area >= 0 {
                s.iter().all(|&v| v >= 0)
            } else {
                s.iter().all(|&v| v <= 0)
            }
        })
        .collect()
}

/// Finds triples of equal-length triangles where a corner of each lies on a
/// side of the next, and classifies the tree pattern at their centre.
///
/// The centre is the closed lattice triangle spanned by the three touching
/// corners.  If the tree graph restricted to it contains a cycle the
/// finding is a [`PinwheelKind::Cycle`]; if it splits into exactly three
/// branches, one per touching corner, it is an [`PinwheelKind::Anticycle`].
pub fn detect_r2_cycles(p: &Patch, features: &[R1Feature]) -> Vec<PinwheelFinding> {
    let tris: Vec<usize> =
        (0..features.len()).filter(|&i| features[i].kind == FeatureKind::Triangle).collect();
    let mut side_of: HashMap<(Hex, usize), Vec<usize>> = HashMap::new();
    for &i in &tris {
        let l = features[i].length.unwrap_or(0);
        for &c in &features[i].side_cells {
            side_of.entry((c, l)).or_default().push(i);
        }
    }
    // touches[i] = (j, corner) when a corner of i sits on a side of j.
    let mut touches: BTreeMap<usize, Vec<(usize, Hex)>> = BTreeMap::new();
    for &i in &tris {
        let l = features[i].length.unwrap_or(0);
        for &c in &features[i].corner_cells {
            for &j in side_of.get(&(c, l)).into_iter().flatten() {
                if j != i {
                    touches.entry(i).or_default().push((j, c));
                }
            }
        }
    }
    let mut found = BTreeSet::new();
    let mut out = Vec::new();
    for (&a, la) in &touches {
        for &(b, ca) in la {
            for &(c, cb) in touches.get(&b).into_iter().flatten() {
                for &(d, cc) in touches.get(&c).into_iter().flatten() {
                    if d != a || c == a || c == b {
                        continue;
                    }
                    let mut key = [a, b, c];
                    key.sort();
                    if !found.insert(key) {
                        continue;
                    }
                    let touch = [ca, cb, cc];
                    let hub: Vec<Hex> = closed_lattice_triangle(ca, cb, cc)
                        .into_iter()
                        .filter(|h| p.contains(*h))
                        .collect();
                    let sub = p.restrict(|h| hub.contains(&h));
                    let g = r2_graph(&sub);
                    let kind = if g.edges.len() >= g.nodes.len() && !g.nodes.is_empty() {
                        PinwheelKind::Cycle
                    } else if g.components.len() == 3
                        && touch.iter().map(|t| g.component_of(*t)).collect::<HashSet<_>>().len() == 3
                    {
                        PinwheelKind::Anticycle
                    } else {
                        PinwheelKind::Other
                    };
                    let mut hub_sorted = hub.clone();
                    hub_sorted.sort();
                    out.push(PinwheelFinding {
                        kind,
                        length: features[a].length.unwrap_or(0),
                        triangles: key,
                        touch_corners: touch,
                        hub: hub_sorted,
                        hub_edges: g.edges.len(),
                        hub_components: g.components.len(),
                    });
                }
            }
        }
    }
    out
}

/// Brute-force translation test on an eroded window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodReport {
    pub bound: u32,
    /// Lattice vectors tested (Cartesian norm in `(0, bound]`).
    pub tested_vectors: Vec<Hex>,
    /// Vectors under which the window interior is invariant.
    pub periods_found: Vec<Hex>,
    /// Fraction of interior tiles reproduced by each tested vector.
    pub agreement: Vec<(Hex, f64)>,
    /// Tiles in the eroded window interior.
    pub interior_size: usize,
    /// True if the interior is too small for the verdict to mean much.
    pub unreliable: bool,
}

impl PeriodReport {
    /// Shortest period found, by Cartesian length.
    pub fn shortest_period(&self) -> Option<Hex> {
        self.periods_found.iter().copied().min_by_key(|v| v.cartesian_norm2_x4())
    }
}

/// Tests all lattice translations of Cartesian length at most `bound`.
///
/// The window interior is the set of tiles whose lattice ball of radius
/// `⌈2·bound/√3⌉` (enough to contain every tested vector) lies inside the
/// patch; a vector is a period when every interior tile reappears with the
/// same orientation after translation.
pub fn period_check(p: &Patch, bound: u32) -> PeriodReport {
    let b2 = 4 * (bound as i64) * (bound as i64);
    let reach = ((2.0 * bound as f64) / 3f64.sqrt()).ceil() as i32;
    let tested: Vec<Hex> = hex_ball(Hex::ORIGIN, reach)
        .into_iter()
        .filter(|v| *v != Hex::ORIGIN && v.cartesian_norm2_x4() <= b2)
        .collect();
    let interior: Vec<(Hex, u8)> = p
        .iter()
        .filter(|(c, _)| hex_ball(*c, reach).iter().all(|x| p.contains(*x)))
        .collect();
    let mut periods = Vec::new();
    let mut agreement = Vec::new();
    for &v in &tested {
        let hits = interior.iter().filter(|(c, o)| p.get(*c + v) == Some(*o)).count();
        let ratio = if interior.is_empty() { 0.0 } else { hits as f64 / interior.len() as f64 };
        if !interior.is_empty() && hits == interior.len() {
            periods.push(v);
        }
        agreement.push((v, ratio));
    }
    let min_interior = (3 * reach * (reach + 1) + 1) as usize;
    PeriodReport {
        bound,
        tested_vectors: tested,
        periods_found: periods,
        agreement,
        interior_size: interior.len(),
        unreliable: interior.len() < min_interior,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ClassVerdict {
    C0Consistent,
    C1Consistent,
    Both,
    Neither,
}

/// The longest straight open run and whether it crosses the window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LongLine {
    pub length: usize,
    pub direction: u8,
    pub cells: Vec<Hex>,
    /// The run is open at both ends and covers its whole lattice line
    /// inside the window, passing through the central half of the window.
    pub spans: bool,
    /// Window radius (largest tile distance from the centroid).
    pub window_radius: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub c0_ok: bool,
    pub c0_violation: Option<C0Violation>,
    pub long_line: Option<LongLine>,
    pub verdict: ClassVerdict,
}

/// Combines the corner-length test and the window-spanning line test.
pub fn classify(p: &Patch, features: &[R1Feature]) -> ClassReport {
    let violation = check_c0(features);
    let (cx, cy) = p.centroid();
    let radius = p
        .cells()
        .map(|c| {
            let (x, y) = c.center();
            ((x - cx).powi(2) + (y - cy).powi(2)).sqrt()
        })
        .fold(0.0, f64::max);
    let mut best: Option<LongLine> = None;
    for f in features.iter().filter(|f| f.kind == FeatureKind::LineSegment) {
        let dir = f.direction.unwrap_or(0);
        let spans = f.open_both_ends && covers_line(p, &f.cells, dir) && {
            let near = f.cells.iter().map(|c| {
                let (x, y) = c.center();
                ((x - cx).powi(2) + (y - cy).powi(2)).sqrt()
            });
            near.fold(f64::INFINITY, f64::min) <= radius / 2.0
        };
        let cand = LongLine { length: f.cells.len(), direction: dir, cells: f.cells.clone(), spans, window_radius: radius };
        let better = match &best {
            None => true,
            Some(b) => (cand.spans, cand.length) > (b.spans, b.length),
        };
        if better {
            best = Some(cand);
        }
    }
    let c0_ok = violation.is_none();
    let c1 = best.as_ref().is_some_and(|l| l.spans);
    let verdict = match (c0_ok, c1) {
        (true, true) => ClassVerdict::Both,
        (true, false) => ClassVerdict::C0Consistent,
        (false, true) => ClassVerdict::C1Consistent,
        (false, false) => ClassVerdict::Neither,
    };
    ClassReport { c0_ok, c0_violation: violation, long_line: best, verdict }
}

/// True if `cells` is the whole intersection of its lattice line with `p`.
fn covers_line(p: &Patch, cells: &[Hex], dir: u8) -> bool {
    let Some(&start) = cells.first() else { return false };
    let set: HashSet<Hex> = cells.iter().copied().collect();
    let bound = p.cells().map(|c| c.distance(start)).max().unwrap_or(0);
    (-bound..=bound).all(|t| {
        let c = start + t * crate::hexlattice::step(dir);
        !p.contains(c) || set.contains(&c)
    })
}

/// Machine-readable analysis summary.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub tiles: usize,
    pub edge_connected: bool,
    pub r1_consistent: bool,
    pub r1_violations: Vec<(Hex, u8)>,
    pub directly_constructible: bool,
    pub r2_edges: usize,
    pub r2_components: usize,
    pub r2_component_sizes: Vec<usize>,
    pub r2_is_forest: bool,
    /// Closed triangles by length.
    pub triangle_lengths: BTreeMap<usize, usize>,
    pub irregular_loops: usize,
    pub open_curves: usize,
    pub class: Option<ClassReport>,
    pub pinwheels: Vec<PinwheelFinding>,
    pub period: Option<PeriodReport>,
}

impl AnalysisReport {
    /// True if any invariant of legal tilings is violated: broken curves,
    /// a tree cycle, an irregular loop, a triangle whose length is not
    /// `2^n − 1`, or a pinwheel.
    pub fn has_violation(&self) -> bool {
        !self.r1_consistent
            || !self.r2_is_forest
            || self.irregular_loops > 0
            || self.triangle_lengths.keys().any(|&l| !(l + 1).is_power_of_two())
            || !self.pinwheels.is_empty()
    }
}

/// Runs every analysis; `period_bound` enables the translation test.
pub fn analyze(p: &Patch, period_bound: Option<u32>) -> AnalysisReport {
    let g = r2_graph(p);
    let violations = p.r1_violations();
    let features = trace_r1(p).ok();
    let mut triangle_lengths = BTreeMap::new();
    let mut irregular = 0;
    let mut open = 0;
    for f in features.iter().flatten() {
        match f.kind {
            FeatureKind::Triangle => *triangle_lengths.entry(f.length.unwrap_or(0)).or_insert(0) += 1,
            FeatureKind::IrregularLoop => irregular += 1,
            FeatureKind::RayTruncated => open += 1,
            FeatureKind::LineSegment => {}
        }
    }
    let mut sizes: Vec<usize> = g.components.iter().map(Vec::len).collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    AnalysisReport {
        tiles: p.len(),
        edge_connected: p.is_edge_connected(),
        r1_consistent: violations.is_empty(),
        r1_violations: violations.clone(),
        directly_constructible: violations.is_empty() && g.components.len() <= 1,
        r2_edges: g.edges.len(),
        r2_components: g.components.len(),
        r2_component_sizes: sizes,
        r2_is_forest: g.is_forest,
        triangle_lengths,
        irregular_loops: irregular,
        open_curves: open,
        class: features.as_ref().map(|f| classify(p, f)),
        pinwheels: features.as_ref().map(|f| detect_r2_cycles(p, f)).unwrap_or_default(),
        period: period_bound.map(|b| period_check(p, b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Patch;

    #[test]
    fn single_tile_has_three_open_curves() {
        let p = Patch::from_tiles(crate::prototile::PrototileTemplate::shipped(), [(Hex::ORIGIN, 0)]).unwrap();
        let f = trace_r1(&p).unwrap();
        assert_eq!(f.iter().filter(|f| f.kind == FeatureKind::RayTruncated).count(), 3);
        let g = r2_graph(&p);
        assert_eq!((g.nodes.len(), g.edges.len()), (1, 0));
        assert!(g.is_forest && g.is_tree());
    }

    #[test]
    fn closed_lattice_triangle_sizes() {
        let a = Hex::ORIGIN;
        assert_eq!(closed_lattice_triangle(a, Hex::new(1, 0), Hex::new(0, 1)).len(), 3);
        assert_eq!(closed_lattice_triangle(a, Hex::new(2, 0), Hex::new(0, 2)).len(), 6);
        assert_eq!(closed_lattice_triangle(a, Hex::new(3, 0), Hex::new(0, 3)).len(), 10);
    }
}
