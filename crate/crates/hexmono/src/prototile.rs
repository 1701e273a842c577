//! The monotile's decorations and the per-edge matching predicates.
//!
//! A template describes one tile in its reference orientation:
//!
//! * three black curves, each joining two edges: one straight stripe between
//!   opposite edges and two arcs around opposite corners; every edge is
//!   crossed exactly once, off-centre, in the half near the edge's start or
//!   end vertex (edges are traversed counterclockwise, edge `j` runs from
//!   vertex `j−1` to vertex `j`, and vertex `j` sits at angle `60j + 30`°);
//! * a red tree touching four of the six edges, each contact off-centre in
//!   one of two halves, recorded as a sign.
//!
//! A tile in orientation `o` carries template edge `j` on world direction
//! `j + o`.  Two tiles sharing an edge traverse it in opposite directions,
//! so two crossings coincide exactly when their local halves differ; the
//! same holds for tree contacts.

use crate::hexlattice::mod6;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which off-centre half of an edge a curve crosses, measured from the
/// edge's start vertex in the tile's counterclockwise boundary order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Crossing {
    NearStart,
    NearEnd,
}

impl Crossing {
    pub fn flip(self) -> Crossing {
        match self {
            Crossing::NearStart => Crossing::NearEnd,
            Crossing::NearEnd => Crossing::NearStart,
        }
    }

    fn letter(self) -> char {
        match self {
            Crossing::NearStart => 'S',
            Crossing::NearEnd => 'E',
        }
    }
}

/// Polarity of a tree contact (which off-centre half of the edge it meets).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    fn symbol(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

/// The shape of one black curve inside the tile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CurveKind {
    /// Straight chord between opposite edges.
    Stripe,
    /// Arc between adjacent edges, turning around the vertex they share.
    Arc { vertex: u8 },
}

/// One black curve of the template: the two template edges it joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Curve {
    pub a: u8,
    pub b: u8,
    pub kind: CurveKind,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TemplateError {
    #[error("edge pairing is not an involution without fixed points")]
    BadPairing,
    #[error("pairing must consist of one opposite pair and two adjacent pairs around opposite vertices")]
    BadCurveShape,
    #[error("arc crossing on edge {0} is not in the half next to the arc's corner")]
    ArcOffset(u8),
    #[error("stripe crossings on edges {0} and {1} are centrally symmetric")]
    StripeSymmetric(u8, u8),
    #[error("expected exactly 4 tree contacts, found {0}")]
    ContactCount(usize),
    #[error("template text: {0}")]
    Parse(String),
}

/// Combinatorial description of the monotile, together with lookup tables
/// derived from it.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrototileTemplate {
    pairing: [u8; 6],
    r1_offsets: [Crossing; 6],
    r2_contacts: [Option<Sign>; 6],
    /// `r1_ok[o1][k]`: bitmask of orientations `o2` whose crossing matches an
    /// `o1` tile's crossing across world direction `k`.
    r1_ok: [[u8; 6]; 6],
    /// Same for tree connections.
    r2_ok: [[u8; 6]; 6],
}

impl fmt::Debug for PrototileTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PrototileTemplate({})", self.summary())
    }
}

impl PrototileTemplate {
    /// Builds a template and validates the structural invariants.
    pub fn new(
        pairing: [u8; 6],
        r1_offsets: [Crossing; 6],
        r2_contacts: [Option<Sign>; 6],
    ) -> Result<Self, TemplateError> {
        let t = Self::new_unchecked(pairing, r1_offsets, r2_contacts);
        t.validate()?;
        Ok(t)
    }

    fn new_unchecked(
        pairing: [u8; 6],
        r1_offsets: [Crossing; 6],
        r2_contacts: [Option<Sign>; 6],
    ) -> Self {
        let mut t = PrototileTemplate {
            pairing,
            r1_offsets,
            r2_contacts,
            r1_ok: [[0; 6]; 6],
            r2_ok: [[0; 6]; 6],
        };
        for o1 in 0..6u8 {
            for k in 0..6u8 {
                for o2 in 0..6u8 {
                    let back = k + 3;
                    if r1_match(t.r1_signature(o1, k), t.r1_signature(o2, back)) {
                        t.r1_ok[o1 as usize][k as usize] |= 1 << o2;
                    }
                    if r2_connects(t.r2_contact(o1, k), t.r2_contact(o2, back)) {
                        t.r2_ok[o1 as usize][k as usize] |= 1 << o2;
                    }
                }
            }
        }
        t
    }

    /// Structural template family with the stripe on edges `{s, s+3}` and
    /// arcs on `{s+1, s+2}` and `{s+4, s+5}`.  `stripe_end_first` selects
    /// which stripe edge is crossed near its end.
    pub fn structural(
        s: u8,
        stripe_end_first: bool,
        r2_contacts: [Option<Sign>; 6],
    ) -> Result<Self, TemplateError> {
        let e = |i: u8| ((s + i) % 6) as usize;
        let mut pairing = [0u8; 6];
        let mut offsets = [Crossing::NearStart; 6];
        for (a, b) in [(0, 3), (1, 2), (4, 5)] {
            pairing[e(a)] = e(b) as u8;
            pairing[e(b)] = e(a) as u8;
        }
        let (first, second) = if stripe_end_first {
            (Crossing::NearEnd, Crossing::NearStart)
        } else {
            (Crossing::NearStart, Crossing::NearEnd)
        };
        offsets[e(0)] = first;
        offsets[e(3)] = second;
        for a in [1, 4] {
            // The arc on edges (a, a+1) turns around their shared vertex,
            // which is the end of edge a and the start of edge a+1.
            offsets[e(a)] = Crossing::NearEnd;
            offsets[e(a + 1)] = Crossing::NearStart;
        }
        Self::new(pairing, offsets, r2_contacts)
    }

    /// The pre-calibration seed template: stripe on edges {0,3} crossed at
    /// (end, start), arcs {1,2} and {4,5}, tree contacts on {0,1,3,4} with
    /// signs (+, −, −, −).
    pub fn seed() -> Self {
        let m = Some(Sign::Minus);
        Self::structural(0, true, [Some(Sign::Plus), m, None, m, m, None])
            .expect("seed template is structurally valid")
    }

    /// The shipped default: the first template found by [`calibrate`] over
    /// the full structural search space.
    ///
    /// It is the seed's curve layout relabeled by two sixth-turns (stripe on
    /// edges {1,4}), so that the reference tile of the spiral patches sits in
    /// orientation 0, with tree contacts on edges {0,1,3,4}: three minus
    /// contacts and a single plus contact on edge 4.
    pub fn shipped() -> Self {
        let m = Some(Sign::Minus);
        Self::structural(1, false, [m, m, None, m, Some(Sign::Plus), None])
            .expect("shipped template is structurally valid")
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<(), TemplateError> {
        let p = &self.pairing;
        for j in 0..6 {
            let m = p[j] as usize;
            if m >= 6 || m == j || p[m] as usize != j {
                return Err(TemplateError::BadPairing);
            }
        }
        let opposite: Vec<usize> = (0..6).filter(|&j| p[j] as usize == (j + 3) % 6).collect();
        if opposite.len() != 2 {
            return Err(TemplateError::BadCurveShape);
        }
        let s = opposite[0];
        for a in [s + 1, s + 4] {
            if p[a % 6] as usize != (a + 1) % 6 {
                return Err(TemplateError::BadCurveShape);
            }
            if self.r1_offsets[a % 6] != Crossing::NearEnd {
                return Err(TemplateError::ArcOffset((a % 6) as u8));
            }
            if self.r1_offsets[(a + 1) % 6] != Crossing::NearStart {
                return Err(TemplateError::ArcOffset(((a + 1) % 6) as u8));
            }
        }
        if self.r1_offsets[s] == self.r1_offsets[s + 3] {
            return Err(TemplateError::StripeSymmetric(s as u8, (s + 3) as u8));
        }
        let n = self.r2_contacts.iter().filter(|c| c.is_some()).count();
        if n != 4 {
            return Err(TemplateError::ContactCount(n));
        }
        Ok(())
    }

    /// Template edge joined to `j` by a black curve.
    pub fn partner(&self, j: u8) -> u8 {
        self.pairing[(j % 6) as usize]
    }

    /// Template edges of the straight stripe.
    pub fn stripe_edges(&self) -> (u8, u8) {
        let s = (0..6u8).find(|&j| self.pairing[j as usize] == (j + 3) % 6).unwrap_or(0);
        (s, s + 3)
    }

    /// True if template edge `j` belongs to the stripe.
    pub fn is_stripe_edge(&self, j: u8) -> bool {
        self.pairing[(j % 6) as usize] == (j + 3) % 6
    }

    /// The three curves in template coordinates, ordered by smallest edge.
    pub fn curves(&self) -> Vec<Curve> {
        let mut out = Vec::new();
        for a in 0..6u8 {
            let b = self.pairing[a as usize];
            let (lo, hi) = (a.min(b), a.max(b));
            if lo != a {
                continue;
            }
            let kind = if hi == lo + 3 {
                CurveKind::Stripe
            } else if hi == lo + 1 {
                CurveKind::Arc { vertex: lo }
            } else {
                // {5, 0}: shared vertex is 5.
                CurveKind::Arc { vertex: hi }
            };
            out.push(Curve { a: lo, b: hi, kind });
        }
        out
    }

    pub fn r1_offsets(&self) -> [Crossing; 6] {
        self.r1_offsets
    }

    pub fn r2_contacts(&self) -> [Option<Sign>; 6] {
        self.r2_contacts
    }

    /// Crossing on world direction `k` of a tile in orientation `o`.
    #[inline]
    pub fn r1_signature(&self, o: u8, k: u8) -> Crossing {
        self.r1_offsets[mod6(k as i64 - o as i64) as usize]
    }

    /// Tree contact on world direction `k` of a tile in orientation `o`.
    #[inline]
    pub fn r2_contact(&self, o: u8, k: u8) -> Option<Sign> {
        self.r2_contacts[mod6(k as i64 - o as i64) as usize]
    }

    /// True if a tile `o1` and its neighbour `o2` across direction `k`
    /// continue each other's black curve.
    #[inline]
    pub fn r1_compatible(&self, o1: u8, k: u8, o2: u8) -> bool {
        self.r1_ok[o1 as usize % 6][k as usize % 6] >> (o2 % 6) & 1 == 1
    }

    /// True if the red trees of `o1` and its neighbour `o2` across `k` touch.
    #[inline]
    pub fn r2_linked(&self, o1: u8, k: u8, o2: u8) -> bool {
        self.r2_ok[o1 as usize % 6][k as usize % 6] >> (o2 % 6) & 1 == 1
    }

    /// Bitmask of neighbour orientations R1-compatible across `k`.
    #[inline]
    pub fn r1_mask(&self, o1: u8, k: u8) -> u8 {
        self.r1_ok[o1 as usize % 6][k as usize % 6]
    }

    /// Bitmask of neighbour orientations whose tree touches across `k`.
    #[inline]
    pub fn r2_mask(&self, o1: u8, k: u8) -> u8 {
        self.r2_ok[o1 as usize % 6][k as usize % 6]
    }

    /// True if an `o` tile's tree reaches world direction `k`.
    #[inline]
    pub fn has_contact(&self, o: u8, k: u8) -> bool {
        self.r2_contact(o, k).is_some()
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let offsets: String = self.r1_offsets.iter().map(|c| c.letter()).collect();
        let contacts: Vec<String> = (0..6)
            .filter_map(|j| self.r2_contacts[j].map(|s| format!("{j}{}", s.symbol())))
            .collect();
        let pairs: Vec<String> = self.curves().iter().map(|c| format!("{}-{}", c.a, c.b)).collect();
        format!("pairs {} r1 {} r2 {}", pairs.join(","), offsets, contacts.join(","))
    }

    /// The same template with every tree sign flipped.
    pub fn sign_flipped(&self) -> Self {
        let mut c = self.r2_contacts;
        for s in c.iter_mut().flatten() {
            *s = s.flip();
        }
        Self::new_unchecked(self.pairing, self.r1_offsets, c)
    }
}

/// The textual block format:
///
/// ```text
/// hexmono-template v1
/// pairing 0-5 1-4 2-3
/// r1 S S E S E E
/// r2 0- 1- 3- 4+
/// ```
impl fmt::Display for PrototileTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "hexmono-template v1")?;
        let pairs: Vec<String> = self.curves().iter().map(|c| format!("{}-{}", c.a, c.b)).collect();
        writeln!(f, "pairing {}", pairs.join(" "))?;
        let offsets: Vec<String> = self.r1_offsets.iter().map(|c| c.letter().to_string()).collect();
        writeln!(f, "r1 {}", offsets.join(" "))?;
        let contacts: Vec<String> = (0..6)
            .filter_map(|j| self.r2_contacts[j].map(|s| format!("{j}{}", s.symbol())))
            .collect();
        writeln!(f, "r2 {}", contacts.join(" "))
    }
}

impl FromStr for PrototileTemplate {
    type Err = TemplateError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = |m: &str| TemplateError::Parse(m.to_string());
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some("hexmono-template v1") {
            return Err(bad("missing header"));
        }
        let mut pairing = None;
        let mut offsets = None;
        let mut contacts = None;
        for line in lines {
            let mut words = line.split_whitespace();
            match words.next() {
                Some("pairing") => {
                    let mut p = [u8::MAX; 6];
                    for w in words {
                        let (a, b) = w.split_once('-').ok_or_else(|| bad("pair"))?;
                        let a: u8 = a.parse().map_err(|_| bad("pair edge"))?;
                        let b: u8 = b.parse().map_err(|_| bad("pair edge"))?;
                        if a >= 6 || b >= 6 {
                            return Err(bad("pair edge out of range"));
                        }
                        p[a as usize] = b;
                        p[b as usize] = a;
                    }
                    pairing = Some(p);
                }
                Some("r1") => {
                    let v: Vec<Crossing> = words
                        .map(|w| match w {
                            "S" => Ok(Crossing::NearStart),
                            "E" => Ok(Crossing::NearEnd),
                            _ => Err(bad("crossing must be S or E")),
                        })
                        .collect::<Result<_, _>>()?;
                    offsets = Some(<[Crossing; 6]>::try_from(v).map_err(|_| bad("need 6 crossings"))?);
                }
                Some("r2") => {
                    let mut c = [None; 6];
                    for w in words {
                        let (j, sign) = w.split_at(w.len().saturating_sub(1));
                        let j: usize = j.parse().map_err(|_| bad("contact edge"))?;
                        if j >= 6 {
                            return Err(bad("contact edge out of range"));
                        }
                        c[j] = Some(match sign {
                            "+" => Sign::Plus,
                            "-" => Sign::Minus,
                            _ => return Err(bad("contact sign")),
                        });
                    }
                    contacts = Some(c);
                }
                _ => return Err(bad("unknown line")),
            }
        }
        PrototileTemplate::new(
            pairing.ok_or_else(|| bad("missing pairing"))?,
            offsets.ok_or_else(|| bad("missing r1"))?,
            contacts.ok_or_else(|| bad("missing r2"))?,
        )
    }
}

/// R1 match on a shared edge: the crossings coincide spatially exactly when
/// their local halves differ (the two tiles traverse the edge oppositely).
#[inline]
pub fn r1_match(a: Crossing, b: Crossing) -> bool {
    a == b.flip()
}

/// R2 connection on a shared edge: both trees reach the edge and their
/// contacts are at the same spatial point (opposite local signs).
#[inline]
pub fn r2_connects(a: Option<Sign>, b: Option<Sign>) -> bool {
    matches!((a, b), (Some(x), Some(y)) if x != y)
}

/// All 4-subsets of edges with every sign assignment, in a fixed order.
pub fn r2_layouts() -> Vec<[Option<Sign>; 6]> {
    let mut out = Vec::new();
    for mask in 0u8..64 {
        if mask.count_ones() != 4 {
            continue;
        }
        let edges: Vec<usize> = (0..6).filter(|j| mask >> j & 1 == 1).collect();
        for signs in 0u8..16 {
            let mut c = [None; 6];
            for (i, &j) in edges.iter().enumerate() {
                c[j] = Some(if signs >> i & 1 == 0 { Sign::Plus } else { Sign::Minus });
            }
            out.push(c);
        }
    }
    out
}

/// Every structurally valid template: 6 stripe placements × 2 stripe
/// offsets × 240 tree layouts, with duplicates removed (placing the stripe
/// on `{s, s+3}` or `{s+3, s}` with the opposite offset is the same template).
pub fn structural_candidates() -> Vec<PrototileTemplate> {
    let mut out: Vec<PrototileTemplate> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for s in 0..6u8 {
        for end_first in [true, false] {
            for layout in r2_layouts() {
                let t = PrototileTemplate::structural(s, end_first, layout)
                    .expect("structural family is valid by construction");
                if seen.insert((t.pairing, t.r1_offsets, t.r2_contacts)) {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// Templates that break the stripe asymmetry (both stripe edges crossed in
/// the same local half); used to confirm that calibration rejects them.
pub fn symmetric_stripe_candidates() -> Vec<PrototileTemplate> {
    let mut out = Vec::new();
    for s in 0..6u8 {
        for half in [Crossing::NearStart, Crossing::NearEnd] {
            for layout in r2_layouts() {
                let good = PrototileTemplate::structural(s, true, layout).expect("valid");
                let mut offsets = good.r1_offsets;
                offsets[s as usize] = half;
                offsets[(s as usize + 3) % 6] = half;
                out.push(PrototileTemplate::new_unchecked(good.pairing, offsets, layout));
            }
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalibrationError {
    #[error("NO_TEMPLATE: none of the {0} candidate templates passes the calibration certificates")]
    NoTemplate(usize),
}

/// Outcome of a calibration run.
#[derive(Clone, Debug)]
pub struct Calibration {
    /// The first passing template in candidate order.
    pub template: PrototileTemplate,
    /// Every other passing template, in candidate order.
    pub alternates: Vec<PrototileTemplate>,
    /// Number of candidates evaluated.
    pub evaluated: usize,
}

/// Why a single candidate failed calibration (or `None` if it passed).
pub fn calibration_failure(t: &PrototileTemplate) -> Option<String> {
    use crate::analysis::{r2_graph, trace_r1, FeatureKind};
    use crate::constructions::build_pn_with;
    use crate::engine::is_directly_constructible;

    for n in 1..=3 {
        let p = match build_pn_with(n, *t) {
            Ok(p) => p,
            Err(e) => return Some(format!("P_{n} assembly: {e}")),
        };
        if !is_directly_constructible(&p).constructible {
            return Some(format!("P_{n} is not directly constructible"));
        }
        if n == 3 {
            let g = r2_graph(&p);
            if !g.is_tree() {
                return Some("R2 graph of P_3 is not a tree".into());
            }
        }
    }
    // The small triangles of lengths 0, 1 and 3 must all be realised; P_4
    // is the smallest spiral patch that completes a length-3 triangle.
    let p4 = build_pn_with(4, *t).ok()?;
    let lengths: std::collections::BTreeSet<usize> = trace_r1(&p4)
        .ok()?
        .iter()
        .filter(|f| f.kind == FeatureKind::Triangle)
        .filter_map(|f| f.length)
        .collect();
    for l in [0, 1, 3] {
        if !lengths.contains(&l) {
            return Some(format!("no completed length-{l} triangle"));
        }
    }
    None
}

/// Searches `candidates` for templates under which the spiral patches
/// P_1..P_3 are directly constructible, P_3's tree graph is a tree, and the
/// length-0, 1 and 3 triangles are completed.
pub fn calibrate(candidates: &[PrototileTemplate]) -> Result<Calibration, CalibrationError> {
    use rayon::prelude::*;
    let passing: Vec<PrototileTemplate> = candidates
        .par_iter()
        .filter(|t| calibration_failure(t).is_none())
        .copied()
        .collect();
    let mut it = passing.into_iter();
    match it.next() {
        Some(template) => {
            Ok(Calibration { template, alternates: it.collect(), evaluated: candidates.len() })
        }
        None => Err(CalibrationError::NoTemplate(candidates.len())),
    }
}
