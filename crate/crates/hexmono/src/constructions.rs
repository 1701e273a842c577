//! Builders for the explicit patches of the tiling theory.
//!
//! * spiral patches `P_n` and their union `T_0`;
//! * fault-line strips: an infinite straight curve with triangles hanging
//!   off both sides;
//! * the pinwheel seeds (three equal triangles meeting corner to side, with
//!   a cyclic or anticyclic tree pattern at the centre);
//! * periodic lattices of equal triangles;
//! * the truncated infinite triangle (two rays joined by a corner);
//! * the hull patches `R_n` and `S_n`.
//!
//! Spiral patches only depend on lattice geometry.  The other builders
//! place triangle frames, whose orientations are derived for the shipped
//! template, and complete them by black-curve constraint propagation.

use crate::analysis::{closed_lattice_triangle, detect_r2_cycles, r2_graph, trace_r1, FeatureKind, PinwheelKind};
use crate::csp::Domains;
use crate::engine::{is_directly_constructible, EngineError, Patch, Placement};
use crate::hexlattice::{hex_ball, mod6, spiral_anchor, step, Hex, Isometry};
use crate::prototile::PrototileTemplate;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap, HashSet};
use thiserror::Error;

/// Largest spiral index accepted by [`build_pn`] (|P_8| = 87381 tiles).
pub const SPIRAL_MAX_N: u32 = 8;
/// Largest spiral index used internally when covering a `T_0` window.
pub const T0_MAX_N: u32 = 11;
/// Largest pinwheel-seed index (the seed's triangles have length `2^{n+1} − 1`).
pub const SEED_MAX_N: u32 = 2;
/// Largest periodic-lattice level (triangle length `2^m − 1`).
pub const LATTICE_MAX_M: u32 = 3;
/// Largest hull index.
pub const HULL_MAX_N: u32 = 6;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("parameter out of range: {0}")]
    Range(String),
    #[error("assembly CONFLICT at {0}")]
    Conflict(Hex),
    #[error("no completion of the placed frames exists ({0})")]
    Unsatisfiable(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// Map of the spiral's `i`-th sub-copy at level `m`: it carries `P_{m−1}`
/// onto copy `i` of `P_m` (copy 0 is `P_{m−1}` itself).
///
/// Copies 1–3 are `R_θ(P_{m−1} − x_{m−1}) + x_m + 2^{m−1}·d` with
/// `θ = 4, 3, 4` sixth-turns and `d` in directions `4m − 2`, `4m`, `4m + 1`.
pub fn sub_copy(m: u32, i: usize) -> Isometry {
    assert!(m >= 1 && i < 4, "sub-copy index out of range");
    if i == 0 {
        return Isometry::IDENTITY;
    }
    let m64 = m as i64;
    let (k, dir) = [(4, 4 * m64 - 2), (3, 4 * m64), (4, 4 * m64 + 1)][i - 1];
    let offset = spiral_anchor(m) + (1 << (m - 1)) * step(mod6(dir));
    Isometry::new(k, offset - spiral_anchor(m - 1).rotate(k))
}

/// Tiles of `P_n` as a list, built by the four-summand recursion.
///
/// Template independent: only cells and orientation numbers are produced.
pub fn spiral_tiles(n: u32) -> Vec<(Hex, u8)> {
    let mut tiles = vec![(Hex::ORIGIN, 0u8)];
    for m in 1..=n {
        let mut next = Vec::with_capacity(4 * tiles.len() + 1);
        next.push((spiral_anchor(m), mod6(4 * m as i64)));
        next.extend_from_slice(&tiles);
        for i in 1..4 {
            let g = sub_copy(m, i);
            next.extend(tiles.iter().map(|&(c, o)| (g.apply(c), g.apply_orientation(o))));
        }
        tiles = next;
    }
    tiles
}

/// `P_n` under `template`, with disjointness of the four summands checked.
pub fn build_pn_with(n: u32, template: PrototileTemplate) -> Result<Patch> {
    if n > T0_MAX_N {
        return Err(ConstructionError::Range(format!("spiral index {n} > {T0_MAX_N}")));
    }
    let tiles = spiral_tiles(n);
    let mut seen = HashSet::with_capacity(tiles.len());
    for &(c, _) in &tiles {
        if !seen.insert(c) {
            return Err(ConstructionError::Conflict(c));
        }
    }
    Ok(Patch::from_tiles(template, tiles)?)
}

/// `P_n` under the shipped template, `n ≤ SPIRAL_MAX_N`.
pub fn build_pn(n: u32) -> Result<Patch> {
    if n > SPIRAL_MAX_N {
        return Err(ConstructionError::Range(format!("spiral index {n} > {SPIRAL_MAX_N}")));
    }
    build_pn_with(n, PrototileTemplate::shipped())
}

/// `P_n` together with a legal growth order.
pub fn build_pn_with_order(n: u32) -> Result<(Patch, Vec<Placement>)> {
    let p = build_pn(n)?;
    let c = is_directly_constructible(&p);
    if !c.constructible {
        return Err(ConstructionError::Unsatisfiable(format!("P_{n} is not directly constructible")));
    }
    Ok((p, c.witness))
}

/// A finite window of `T_0`.
#[derive(Clone, Debug)]
pub struct T0Window {
    /// Tiles of `T_0` with Cartesian distance ≤ radius from the origin.
    pub patch: Patch,
    /// Smallest `n` for which `P_n` covers the window.
    pub n: u32,
    pub radius: u32,
}

/// Largest radius accepted by [`build_t0`].
pub const T0_MAX_RADIUS: u32 = 80;

/// The window of radius `radius` (Cartesian, about the origin) of `T_0`,
/// cut from the first spiral patch that covers it.
pub fn build_t0(radius: u32) -> Result<T0Window> {
    if radius > T0_MAX_RADIUS {
        return Err(ConstructionError::Range(format!("radius {radius} > {T0_MAX_RADIUS}")));
    }
    let r2 = 4 * (radius as i64) * (radius as i64);
    let reach = ((2.0 * radius as f64) / 3f64.sqrt()).ceil() as i32 + 1;
    let disk: Vec<Hex> =
        hex_ball(Hex::ORIGIN, reach).into_iter().filter(|c| c.cartesian_norm2_x4() <= r2).collect();
    for n in 0..=T0_MAX_N {
        let tiles: HashMap<Hex, u8> = spiral_tiles(n).into_iter().collect();
        if disk.iter().all(|c| tiles.contains_key(c)) {
            let patch =
                Patch::from_tiles(PrototileTemplate::shipped(), disk.iter().map(|c| (*c, tiles[c])))?;
            return Ok(T0Window { patch, n, radius });
        }
    }
    Err(ConstructionError::Range(format!("radius {radius} not covered by P_{T0_MAX_N}")))
}

/// Orientation domains of the three-sided frame of an R1-triangle.
///
/// The frame starts at corner `corner`, runs `length + 1` steps in direction
/// `k`, turns to `k + 2`, then to `k + 4`, returning to the corner.  Side
/// tiles travelled in direction `j` have orientation `j + 2`; a corner whose
/// outgoing side runs in direction `j` is one of `j − 2`, `j + 1`.
pub fn triangle_frame(corner: Hex, k: u8, length: u32) -> Vec<(Hex, u8)> {
    let mut out = Vec::new();
    let mut cur = corner;
    for side in 0..3u8 {
        let j = (k + 2 * side) % 6;
        out.push((cur, 1 << mod6(j as i64 - 2) | 1 << ((j + 1) % 6)));
        for t in 1..=length as i32 {
            out.push((cur + t * step(j), 1 << ((j + 2) % 6)));
        }
        cur = cur + (length as i32 + 1) * step(j);
    }
    out
}

/// Cells of the triangle whose frame is [`triangle_frame`]`(corner, k, length)`,
/// frame and interior together.
pub fn triangle_cells(corner: Hex, k: u8, length: u32) -> Vec<Hex> {
    let s = length as i32 + 1;
    let b = corner + s * step(k);
    let c = b + s * step(k + 2);
    closed_lattice_triangle(corner, b, c)
}

/// Left/right decision for each doubling step of the fault-line triangles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Choice {
    Left,
    Right,
}

/// A finite prefix of the fault-line choice sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceSequence {
    pub bits: Vec<Choice>,
}

impl ChoiceSequence {
    /// Strict alternation, starting with `Right`.
    pub fn alternating(len: usize) -> Self {
        ChoiceSequence {
            bits: (0..len).map(|i| if i % 2 == 0 { Choice::Right } else { Choice::Left }).collect(),
        }
    }

    pub fn constant(c: Choice, len: usize) -> Self {
        ChoiceSequence { bits: vec![c; len] }
    }

    /// Parses a string of `L`/`R` characters.
    pub fn parse(s: &str) -> Option<Self> {
        s.chars()
            .map(|ch| match ch.to_ascii_uppercase() {
                'L' => Some(Choice::Left),
                'R' => Some(Choice::Right),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()
            .map(|bits| ChoiceSequence { bits })
    }

    /// Every bit swapped.
    pub fn complement(&self) -> Self {
        ChoiceSequence {
            bits: self
                .bits
                .iter()
                .map(|b| match b {
                    Choice::Left => Choice::Right,
                    Choice::Right => Choice::Left,
                })
                .collect(),
        }
    }

    /// True if all bits agree: the triangles keep growing in one direction,
    /// which in the limit leaves an infinite triangle on the line.
    pub fn is_constant(&self) -> bool {
        self.bits.windows(2).all(|w| w[0] == w[1])
    }

    /// Bit `m`, continuing by alternation past the given prefix.
    fn bit(&self, m: usize) -> Choice {
        match self.bits.get(m) {
            Some(&b) => b,
            None => {
                let last = self.bits.last().copied().unwrap_or(Choice::Left);
                let flip = (m - self.bits.len()) % 2 == 0;
                match (last, flip) {
                    (Choice::Left, true) | (Choice::Right, false) => Choice::Right,
                    _ => Choice::Left,
                }
            }
        }
    }

    /// The 2-adic offset `a` (mod `2^levels`): a triangle of length
    /// `2^m − 1` sits at line position `l` exactly when `l − a` has 2-adic
    /// valuation `m`.  Choosing `Left` at step `m` adds `2^m`.
    pub fn offset(&self, levels: u32) -> i64 {
        (0..levels as usize).filter(|&m| self.bit(m) == Choice::Left).map(|m| 1i64 << m).sum()
    }
}

/// A truncated fault-line strip.
#[derive(Clone, Debug)]
pub struct FaultLine {
    /// The tree component of the line inside the strip: the legal,
    /// directly constructible truncation of the fault-line tiling.
    pub patch: Patch,
    /// The whole rectangular strip completed by black-curve propagation.
    /// Away from the line the completion is not forced, and tiles there
    /// that are cut off from the line's tree need not belong to any legal
    /// tiling.
    pub fill: Patch,
    /// The straight line, left to right.
    pub line: Vec<Hex>,
    /// Cells of the fill with a neighbouring cell outside the strip.
    pub boundary: Vec<Hex>,
    pub width: u32,
    pub upper_offset: i64,
    pub lower_offset: i64,
    pub warnings: Vec<String>,
}

impl FaultLine {
    /// Line position of a line tile (its `q` coordinate).
    pub fn position(c: Hex) -> i64 {
        c.q as i64
    }
}

fn two_adic_valuation(x: i64) -> u32 {
    if x == 0 {
        u32::MAX
    } else {
        x.trailing_zeros()
    }
}

/// Builds a horizontal fault-line strip of half-width `width`.
///
/// The line is the row `r = 0` for `q ∈ [−width, width)`, every tile with
/// its stripe along the row.  Above it, the triangle with its corner at
/// position `l` has length `2^{ν(l − a)} − 1`, where `a` is the offset
/// encoded by `choices`; below it the same law holds with the offset of
/// `lower` (the complement of `choices` unless `mirrored`, in which case
/// both sides carry equal lengths).  The strip spans rows `−width..=width`
/// and Cartesian `x ∈ [−width, width)`; all frames fitting in it are
/// placed, and black-curve propagation completes the rest.  The returned
/// patch is the tree component containing the line.
pub fn build_faultline(width: u32, m_max: u32, choices: &ChoiceSequence, mirrored: bool) -> Result<FaultLine> {
    if width < (1 << (m_max + 1)) || width > 256 {
        return Err(ConstructionError::Range(format!(
            "width {width} must lie in [2^(m_max+1), 256] = [{}, 256]",
            1u32 << (m_max + 1)
        )));
    }
    let w = width as i32;
    let t = PrototileTemplate::shipped();
    let levels = 2 * (32 - width.leading_zeros()) + 2;
    let upper_offset = choices.offset(levels);
    let lower_choices = if mirrored { choices.clone() } else { choices.complement() };
    let lower_offset = lower_choices.offset(levels);
    let mut warnings = Vec::new();
    if choices.is_constant() && choices.bits.len() > 1 {
        warnings.push(
            "all choices agree: the limiting configuration contains an infinite triangle at the line".into(),
        );
    }
    let in_strip = |c: Hex| c.r.abs() <= w && (2 * c.q + c.r) >= -2 * w && (2 * c.q + c.r) < 2 * w;
    let cells: Vec<Hex> = (-w..=w)
        .flat_map(|r| (-2 * w..2 * w).map(move |q| Hex::new(q, r)))
        .filter(|&c| in_strip(c))
        .collect();
    let mut d = Domains::new(t, cells.iter().copied());
    let line: Vec<Hex> = (-w..w).map(|q| Hex::new(q, 0)).collect();
    for &c in &line {
        d.restrict(c, 1 << 2);
    }
    for &c in &line {
        for (k, off) in [(1u8, upper_offset), (4u8, lower_offset)] {
            let v = two_adic_valuation(c.q as i64 - off);
            if v >= 31 || (1i64 << v) > width as i64 {
                continue;
            }
            for (cell, mask) in triangle_frame(c, k, (1u32 << v) - 1) {
                if !d.restrict(cell, mask) {
                    return Err(ConstructionError::Unsatisfiable(format!("frame at line position {}", c.q)));
                }
            }
        }
    }
    let sol = d.solve(1).pop().ok_or_else(|| ConstructionError::Unsatisfiable("fault-line strip".into()))?;
    let fill = Patch::from_tiles(t, sol)?;
    let g = r2_graph(&fill);
    let core_idx = g.component_of(Hex::ORIGIN).expect("the line passes through the origin");
    let core_cells: HashSet<Hex> = g.components[core_idx].iter().copied().collect();
    let patch = fill.restrict(|c| core_cells.contains(&c));
    let boundary = fill.cells().filter(|c| c.neighbors().iter().any(|nb| !in_strip(*nb))).collect();
    Ok(FaultLine { patch, fill, line, boundary, width, upper_offset, lower_offset, warnings })
}

/// A black-curve solution on a torus, unrolled on demand.
#[derive(Clone, Debug)]
pub struct PeriodicLattice {
    /// Level: the lattice triangles have length `2^m − 1`.
    pub m: u32,
    /// Torus period along both lattice axes.
    pub period: i32,
    cells: Vec<u8>,
}

impl PeriodicLattice {
    /// Orientation at an arbitrary cell.
    pub fn orientation(&self, c: Hex) -> u8 {
        let p = self.period;
        self.cells[(c.r.rem_euclid(p) * p + c.q.rem_euclid(p)) as usize]
    }

    /// Side length of the lattice triangles.
    pub fn triangle_length(&self) -> u32 {
        (1 << self.m) - 1
    }

    /// The lattice restricted to a lattice ball.
    pub fn window(&self, center: Hex, radius: i32) -> Patch {
        Patch::from_tiles(
            PrototileTemplate::shipped(),
            hex_ball(center, radius).into_iter().map(|c| (c, self.orientation(c))),
        )
        .expect("lattice windows are conflict-free")
    }
}

/// Solves the black-curve constraints on the `3·2^{m−1}`-periodic torus,
/// with a length-`(2^m − 1)` triangle cornered at the origin.
pub fn periodic_lattice(m: u32) -> Result<PeriodicLattice> {
    if m == 0 || m > LATTICE_MAX_M {
        return Err(ConstructionError::Range(format!("lattice level {m} outside 1..={LATTICE_MAX_M}")));
    }
    let p = 3 << (m - 1);
    let t = PrototileTemplate::shipped();
    let cells: Vec<Hex> = (0..p).flat_map(|r| (0..p).map(move |q| Hex::new(q, r))).collect();
    let mut d = Domains::new(t, cells.iter().copied());
    let wrap = |c: Hex| Hex::new(c.q.rem_euclid(p), c.r.rem_euclid(p));
    for (i, c) in cells.iter().enumerate() {
        d.nbr[i] = std::array::from_fn(|k| d.index[&wrap(c.neighbor(k as u8))]);
    }
    for (c, mask) in triangle_frame(Hex::ORIGIN, 0, (1 << m) - 1) {
        if !d.restrict(wrap(c), mask) {
            return Err(ConstructionError::Unsatisfiable("torus frame".into()));
        }
    }
    let sol = d.solve(1).pop().ok_or_else(|| ConstructionError::Unsatisfiable(format!("period-{p} torus")))?;
    let map: HashMap<Hex, u8> = sol.into_iter().collect();
    let cells = (0..p).flat_map(|r| (0..p).map(move |q| Hex::new(q, r))).map(|c| map[&c]).collect();
    Ok(PeriodicLattice { m, period: p, cells })
}

/// A patch of the periodic lattice of length-`(2^m − 1)` triangles: the
/// union of the complete lattice triangles whose centroid lies within
/// Cartesian distance `(extent − 1)·period` of the reference triangle's
/// centroid.  `extent = 1` is the single reference triangle.
pub fn build_periodic_lattice(m: u32, extent: u32) -> Result<Patch> {
    if extent == 0 || extent > 8 {
        return Err(ConstructionError::Range(format!("extent {extent} outside 1..=8")));
    }
    let lat = periodic_lattice(m)?;
    let len = lat.triangle_length();
    let reference = triangle_cells(Hex::ORIGIN, 0, len);
    let centroid = |cs: &[Hex]| {
        let (x, y) = cs.iter().map(|c| c.center()).fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
        (x / cs.len() as f64, y / cs.len() as f64)
    };
    let (rx, ry) = centroid(&reference);
    let reach = (extent as f64 - 1.0) * lat.period as f64;
    let radius = (reach + 2.0 * (len as f64 + 2.0)).ceil() as i32 + 2;
    let big = lat.window(Hex::ORIGIN, radius);
    let mut tiles: BTreeMap<Hex, u8> = BTreeMap::new();
    for f in trace_r1(&big).map_err(|e| ConstructionError::Unsatisfiable(e.to_string()))? {
        if f.kind != FeatureKind::Triangle || f.length != Some(len as usize) {
            continue;
        }
        let cs = closed_lattice_triangle(f.corner_cells[0], f.corner_cells[1], f.corner_cells[2]);
        let (x, y) = centroid(&cs);
        if ((x - rx).powi(2) + (y - ry).powi(2)).sqrt() <= reach + 1e-9 {
            for c in cs {
                tiles.insert(c, lat.orientation(c));
            }
        }
    }
    Ok(Patch::from_tiles(PrototileTemplate::shipped(), tiles)?)
}

/// One of the two pinwheel seeds: three equal triangles of length
/// `2^{n+1} − 1`, each with a corner on the middle tile of the next one's
/// side, cut from the periodic lattice and translated so that the central
/// tile nearest their common centre is at the origin.
fn pinwheel_seed(n: u32, kind: PinwheelKind) -> Result<Patch> {
    if n > SEED_MAX_N {
        return Err(ConstructionError::Range(format!("seed index {n} > {SEED_MAX_N}")));
    }
    let lat = periodic_lattice(n + 1)?;
    let len = lat.triangle_length() as usize;
    let big = lat.window(Hex::ORIGIN, 3 * lat.period + 2 * len as i32 + 4);
    let features = trace_r1(&big).map_err(|e| ConstructionError::Unsatisfiable(e.to_string()))?;
    let rim: HashSet<Hex> = big.boundary_cells().into_iter().collect();
    let mut best: Option<((i64, Vec<Hex>), Vec<Hex>, Hex)> = None;
    for f in detect_r2_cycles(&big, &features) {
        if f.kind != kind || f.length != len {
            continue;
        }
        let mut cells = Vec::new();
        for &i in &f.triangles {
            let c = &features[i].corner_cells;
            cells.extend(closed_lattice_triangle(c[0], c[1], c[2]));
        }
        if cells.iter().any(|c| !big.contains(*c) || rim.contains(c)) {
            continue;
        }
        let [a, b, c] = f.touch_corners;
        let (sx, sy) = [a, b, c].iter().map(|h| h.center()).fold((0.0, 0.0), |s, v| (s.0 + v.0, s.1 + v.1));
        let (cx, cy) = (sx / 3.0, sy / 3.0);
        let centre = *f
            .hub
            .iter()
            .min_by(|x, y| {
                let dx = |h: &Hex| {
                    let (px, py) = h.center();
                    (px - cx).powi(2) + (py - cy).powi(2)
                };
                dx(x).total_cmp(&dx(y)).then(x.cmp(y))
            })
            .expect("hubs are non-empty");
        let key = (centre.cartesian_norm2_x4(), f.hub.clone());
        if best.as_ref().is_none_or(|(k, _, _)| key < *k) {
            best = Some((key, cells, centre));
        }
    }
    let (_, cells, centre) =
        best.ok_or_else(|| ConstructionError::Unsatisfiable(format!("no {kind:?} pinwheel of length {len}")))?;
    let tiles: Vec<(Hex, u8)> = cells.iter().map(|&c| (c - centre, lat.orientation(c))).collect();
    Ok(Patch::from_tiles(PrototileTemplate::shipped(), tiles)?)
}

/// Three equal triangles meeting corner to side with a tree cycle at the centre.
pub fn build_cycle_seed(n: u32) -> Result<Patch> {
    pinwheel_seed(n, PinwheelKind::Cycle)
}

/// Three equal triangles meeting corner to side whose central tree branches
/// stay apart.
pub fn build_anticycle_seed(n: u32) -> Result<Patch> {
    pinwheel_seed(n, PinwheelKind::Anticycle)
}

/// The truncated infinite triangle.
#[derive(Clone, Debug)]
pub struct InfiniteTriangle {
    pub patch: Patch,
    pub corner: Hex,
    /// Tiles of the ray leaving the corner in direction 0.
    pub ray_a: Vec<Hex>,
    /// Tiles of the ray leaving the corner in direction 1.
    pub ray_b: Vec<Hex>,
}

/// Two straight rays of length `radius` leaving the corner at the origin in
/// directions 0 and 1, with the wedge between them (lattice distance ≤
/// `radius` from the corner) completed by black-curve propagation.
pub fn build_infinite_triangle_trunc(radius: u32) -> Result<InfiniteTriangle> {
    if radius == 0 || radius > 128 {
        return Err(ConstructionError::Range(format!("radius {radius} outside 1..=128")));
    }
    let r = radius as i32;
    let mut cells = vec![Hex::ORIGIN];
    let ray_a: Vec<Hex> = (1..=r).map(|t| t * step(0)).collect();
    let ray_b: Vec<Hex> = (1..=r).map(|t| t * step(1)).collect();
    cells.extend(&ray_a);
    cells.extend(&ray_b);
    for a in 1..=r {
        for b in 1..=r - a {
            cells.push(a * step(0) + b * step(1));
        }
    }
    let t = PrototileTemplate::shipped();
    let mut d = Domains::new(t, cells);
    // The corner turns from the incoming ray to the outgoing one; the rays
    // carry their stripes along their own direction.
    d.restrict(Hex::ORIGIN, 1 << 4 | 1 << 1);
    for &c in &ray_a {
        d.restrict(c, 1 << 2);
    }
    for &c in &ray_b {
        d.restrict(c, 1 << 0);
    }
    let sol = d.solve(1).pop().ok_or_else(|| ConstructionError::Unsatisfiable("wedge".into()))?;
    Ok(InfiniteTriangle { patch: Patch::from_tiles(t, sol)?, corner: Hex::ORIGIN, ray_a, ray_b })
}

/// Which hull patch family to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HullKind {
    /// Two spiral blocks joined through a connector tile at the origin.
    R,
    /// Three spiral blocks meeting at the vertex shared by (0,0), (1,0), (0,1).
    S,
}

/// The isometry placing the level-`n` block of a hull patch, starting from
/// the level-0 placement `g0` and descending through sub-copy `idx` of each
/// spiral level.
fn hull_block(g0: Isometry, n: u32, idx: usize) -> Isometry {
    (1..=n).fold(g0, |g, m| g.compose(sub_copy(m, idx).inverse()))
}

/// The hull patch `R_n` or `S_n`.
///
/// `R_n`: a connector tile at the origin in orientation 0 and two copies of
/// `P_n`, attached through their level-0 tiles at `d_2` (rotated by 4) and
/// `d_5` (rotated by 1), each block positioned so that at every level the
/// connector's neighbour sits in sub-copy 3 of the next spiral level.
///
/// `S_n`: three copies of `P_n` whose level-0 tiles are (0,0), (1,0), (0,1)
/// in orientations 1, 3, 5, each descending through sub-copy 2.
pub fn build_hull(n: u32, kind: HullKind) -> Result<Patch> {
    if n > HULL_MAX_N {
        return Err(ConstructionError::Range(format!("hull index {n} > {HULL_MAX_N}")));
    }
    let pn = spiral_tiles(n);
    let mut tiles: BTreeMap<Hex, u8> = BTreeMap::new();
    let put = |g: Isometry, tiles: &mut BTreeMap<Hex, u8>| -> Result<()> {
        for &(c, o) in &pn {
            let cell = g.apply(c);
            if tiles.insert(cell, g.apply_orientation(o)).is_some() {
                return Err(ConstructionError::Conflict(cell));
            }
        }
        Ok(())
    };
    match kind {
        HullKind::R => {
            tiles.insert(Hex::ORIGIN, 0);
            for (dir, rot) in [(2u8, 4i64), (5, 1)] {
                put(hull_block(Isometry::new(rot, step(dir)), n, 3), &mut tiles)?;
            }
        }
        HullKind::S => {
            for (cell, rot) in [(Hex::ORIGIN, 1i64), (Hex::new(1, 0), 3), (Hex::new(0, 1), 5)] {
                put(hull_block(Isometry::new(rot, cell), n, 2), &mut tiles)?;
            }
        }
    }
    Ok(Patch::from_tiles(PrototileTemplate::shipped(), tiles)?)
}

/// Named constructions with their parameters, for the CLI and the service.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstructionLabel {
    SpiralP { n: u32 },
    T0Trunc { radius: u32 },
    Faultline { width: u32, m_max: u32, choices: String, mirrored: bool },
    CycleSeed { n: u32 },
    AnticycleSeed { n: u32 },
    PeriodicLattice { m: u32, extent: u32 },
    InfiniteTriangleTrunc { radius: u32 },
    HullR { n: u32 },
    HullS { n: u32 },
}

/// One entry of the construction catalogue.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConstructionInfo {
    pub kind: &'static str,
    pub parameters: Vec<(&'static str, &'static str)>,
    pub example: ConstructionLabel,
}

/// Available builders and their parameter ranges.
pub fn catalogue() -> Vec<ConstructionInfo> {
    use ConstructionLabel::*;
    vec![
        ConstructionInfo { kind: "SPIRAL_P", parameters: vec![("n", "0..=8")], example: SpiralP { n: 2 } },
        ConstructionInfo { kind: "T0_TRUNC", parameters: vec![("radius", "0..=80")], example: T0Trunc { radius: 10 } },
        ConstructionInfo {
            kind: "FAULTLINE",
            parameters: vec![("width", "2^(m_max+1)..=256"), ("m_max", "0..=7"), ("choices", "L/R string"), ("mirrored", "bool")],
            example: Faultline { width: 16, m_max: 2, choices: "RLRL".into(), mirrored: false },
        },
        ConstructionInfo { kind: "CYCLE_SEED", parameters: vec![("n", "0..=2")], example: CycleSeed { n: 0 } },
        ConstructionInfo { kind: "ANTICYCLE_SEED", parameters: vec![("n", "0..=2")], example: AnticycleSeed { n: 0 } },
        ConstructionInfo {
            kind: "PERIODIC_LATTICE",
            parameters: vec![("m", "1..=3"), ("extent", "1..=8")],
            example: PeriodicLattice { m: 1, extent: 3 },
        },
        ConstructionInfo {
            kind: "INFINITE_TRIANGLE_TRUNC",
            parameters: vec![("radius", "1..=128")],
            example: InfiniteTriangleTrunc { radius: 8 },
        },
        ConstructionInfo { kind: "HULL_R", parameters: vec![("n", "0..=6")], example: HullR { n: 2 } },
        ConstructionInfo { kind: "HULL_S", parameters: vec![("n", "0..=6")], example: HullS { n: 2 } },
    ]
}

impl ConstructionLabel {
    /// Runs the builder.
    pub fn build(&self) -> Result<Patch> {
        use ConstructionLabel::*;
        match self {
            SpiralP { n } => build_pn(*n),
            T0Trunc { radius } => Ok(build_t0(*radius)?.patch),
            Faultline { width, m_max, choices, mirrored } => {
                let seq = ChoiceSequence::parse(choices)
                    .ok_or_else(|| ConstructionError::Range(format!("choices {choices:?} must be L/R")))?;
                Ok(build_faultline(*width, *m_max, &seq, *mirrored)?.patch)
            }
            CycleSeed { n } => build_cycle_seed(*n),
            AnticycleSeed { n } => build_anticycle_seed(*n),
            PeriodicLattice { m, extent } => build_periodic_lattice(*m, *extent),
            InfiniteTriangleTrunc { radius } => Ok(build_infinite_triangle_trunc(*radius)?.patch),
            HullR { n } => build_hull(*n, HullKind::R),
            HullS { n } => build_hull(*n, HullKind::S),
        }
    }

    /// Short human-readable name, e.g. `SPIRAL_P n=2`.
    pub fn describe(&self) -> String {
        serde_json::to_string(self).unwrap_or_default()
    }
}
