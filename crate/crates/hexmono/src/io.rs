//! The `hexmono v1` patch format.
//!
//! ```text
//! hexmono v1
//! # construction = SPIRAL_P n=1
//! # verdict.r1_consistent = true
//! 0 0 0
//! 0 -1 4
//! ```
//!
//! The first line is the header; every other non-blank line is either a
//! `# key = value` metadata comment or a tile `q r o`.  Tile order is
//! irrelevant; the writer emits tiles in cell order.  Keys starting with
//! `verdict.` are structural verdicts: the writer computes them and the
//! loader recomputes them, so stale values in a file are replaced.

use crate::analysis::r2_graph;
use crate::engine::{EngineError, Patch, Placement};
use crate::search::{SearchStatus, SearchVerdict};
use crate::hexlattice::Hex;
use crate::prototile::PrototileTemplate;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

pub const HEADER: &str = "hexmono v1";
const VERDICT_PREFIX: &str = "verdict.";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("missing `{HEADER}` header")]
    MissingHeader,
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("line {line}: {source}")]
    Tile { line: usize, source: EngineError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Structural verdicts recorded alongside a patch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatchVerdicts {
    pub tiles: usize,
    pub edge_connected: bool,
    pub r1_consistent: bool,
    pub r2_components: usize,
    pub r2_forest: bool,
    pub directly_constructible: bool,
}

impl PatchVerdicts {
    pub fn compute(p: &Patch) -> Self {
        let g = r2_graph(p);
        let r1_consistent = p.is_r1_consistent();
        PatchVerdicts {
            tiles: p.len(),
            edge_connected: p.is_edge_connected(),
            r1_consistent,
            r2_components: g.components.len(),
            r2_forest: g.is_forest,
            directly_constructible: r1_consistent && g.components.len() <= 1,
        }
    }

    fn entries(&self) -> [(&'static str, String); 6] {
        [
            ("tiles", self.tiles.to_string()),
            ("edge_connected", self.edge_connected.to_string()),
            ("r1_consistent", self.r1_consistent.to_string()),
            ("r2_components", self.r2_components.to_string()),
            ("r2_forest", self.r2_forest.to_string()),
            ("directly_constructible", self.directly_constructible.to_string()),
        ]
    }
}

/// A patch with its metadata, as stored on disk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchDocument {
    pub patch: Patch,
    /// Free-form metadata (keys without the `verdict.` prefix).
    pub metadata: BTreeMap<String, String>,
    pub verdicts: PatchVerdicts,
}

impl PatchDocument {
    pub fn new(patch: Patch) -> Self {
        let verdicts = PatchVerdicts::compute(&patch);
        PatchDocument { patch, metadata: BTreeMap::new(), verdicts }
    }

    pub fn with_meta(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.to_string(), value.into());
        self
    }
}

/// Serializes a patch with metadata and freshly computed verdicts.
pub fn write_patch(p: &Patch, metadata: &BTreeMap<String, String>) -> String {
    let mut out = String::with_capacity(16 * p.len() + 256);
    out.push_str(HEADER);
    out.push('\n');
    for (k, v) in metadata {
        if !k.starts_with(VERDICT_PREFIX) {
            out.push_str(&format!("# {} = {}\n", k, single_line(v)));
        }
    }
    for (k, v) in PatchVerdicts::compute(p).entries() {
        out.push_str(&format!("# {VERDICT_PREFIX}{k} = {v}\n"));
    }
    for (c, o) in p.iter() {
        out.push_str(&format!("{} {} {}\n", c.q, c.r, o));
    }
    out
}

fn single_line(v: &str) -> String {
    v.replace(['\n', '\r'], " ")
}

/// Parses a `hexmono v1` document under the shipped template.
pub fn read_patch(text: &str) -> Result<PatchDocument, FormatError> {
    read_patch_with(text, PrototileTemplate::shipped())
}

/// Parses a `hexmono v1` document under `template`.
pub fn read_patch_with(text: &str, template: PrototileTemplate) -> Result<PatchDocument, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, l)) if l.trim() == HEADER => {}
        _ => return Err(FormatError::MissingHeader),
    }
    let mut metadata = BTreeMap::new();
    let mut tiles: BTreeMap<Hex, u8> = BTreeMap::new();
    for (i, raw) in lines {
        let line = i + 1;
        let l = raw.trim();
        if let Some(comment) = l.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                let k = k.trim();
                if !k.is_empty() && !k.starts_with(VERDICT_PREFIX) {
                    metadata.insert(k.to_string(), v.trim().to_string());
                }
            }
            continue;
        }
        let fields: Vec<&str> = l.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(FormatError::Syntax { line, reason: format!("expected `q r o`, got {l:?}") });
        }
        let num = |s: &str| {
            s.parse::<i64>().map_err(|_| FormatError::Syntax { line, reason: format!("not an integer: {s:?}") })
        };
        let (q, r, o) = (num(fields[0])?, num(fields[1])?, num(fields[2])?);
        let coord = |x: i64| {
            i32::try_from(x).map_err(|_| FormatError::Syntax { line, reason: format!("coordinate out of range: {x}") })
        };
        if !(0..6).contains(&o) {
            return Err(FormatError::Syntax { line, reason: format!("orientation {o} outside 0..5") });
        }
        let (cell, o) = (Hex::new(coord(q)?, coord(r)?), o as u8);
        match tiles.insert(cell, o) {
            Some(existing) if existing != o => {
                let source = EngineError::Conflict { cell, existing, incoming: o };
                return Err(FormatError::Tile { line, source });
            }
            _ => {}
        }
    }
    let patch = Patch::from_tiles(template, tiles).expect("tiles were validated while parsing");
    let verdicts = PatchVerdicts::compute(&patch);
    Ok(PatchDocument { patch, metadata, verdicts })
}

/// Header of the search certificate format.
pub const CERTIFICATE_HEADER: &str = "hexmono-certificate v1";

/// A search verdict in replayable text form.
///
/// ```text
/// hexmono-certificate v1
/// status REFUTED
/// radius 3
/// region 61
/// nodes 6
/// r1_dead_ends 4
/// r2_dead_ends 2
/// frontier 0 -3
/// ```
///
/// Extendable verdicts list their growth order as `place q r o` lines,
/// to be replayed on top of the seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub status: SearchStatus,
    pub radius: u32,
    pub region_size: usize,
    pub node_count: u64,
    pub r1_dead_ends: u64,
    pub r2_dead_ends: u64,
    pub frontier: Vec<Hex>,
    pub witness: Vec<Placement>,
}

impl Certificate {
    pub fn from_verdict(v: &SearchVerdict) -> Self {
        Certificate {
            status: v.status,
            radius: v.radius,
            region_size: v.region_size,
            node_count: v.node_count,
            r1_dead_ends: v.certificate.r1_dead_ends,
            r2_dead_ends: v.certificate.r2_dead_ends,
            frontier: v.certificate.frontier.iter().copied().collect(),
            witness: v.witness.as_ref().map(|w| w.order.clone()).unwrap_or_default(),
        }
    }
}

pub fn write_certificate(c: &Certificate) -> String {
    let mut out = format!(
        "{CERTIFICATE_HEADER}\nstatus {}\nradius {}\nregion {}\nnodes {}\nr1_dead_ends {}\nr2_dead_ends {}\n",
        c.status.as_str(),
        c.radius,
        c.region_size,
        c.node_count,
        c.r1_dead_ends,
        c.r2_dead_ends
    );
    for h in &c.frontier {
        out.push_str(&format!("frontier {} {}\n", h.q, h.r));
    }
    for p in &c.witness {
        out.push_str(&format!("place {} {} {}\n", p.cell.q, p.cell.r, p.orientation));
    }
    out
}

pub fn read_certificate(text: &str) -> Result<Certificate, FormatError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty() && !l.trim().starts_with('#'));
    match lines.next() {
        Some((_, l)) if l.trim() == CERTIFICATE_HEADER => {}
        _ => return Err(FormatError::MissingHeader),
    }
    let mut c = Certificate {
        status: SearchStatus::Unknown,
        radius: 0,
        region_size: 0,
        node_count: 0,
        r1_dead_ends: 0,
        r2_dead_ends: 0,
        frontier: Vec::new(),
        witness: Vec::new(),
    };
    for (i, raw) in lines {
        let line = i + 1;
        let bad = |reason: String| FormatError::Syntax { line, reason };
        let f: Vec<&str> = raw.split_whitespace().collect();
        let int = |k: usize| -> Result<i64, FormatError> {
            f.get(k).and_then(|s| s.parse().ok()).ok_or_else(|| bad(format!("bad field {k} in {raw:?}")))
        };
        match f[0] {
            "status" => {
                c.status = match f.get(1).copied() {
                    Some("EXTENDABLE") => SearchStatus::Extendable,
                    Some("REFUTED") => SearchStatus::Refuted,
                    Some("UNKNOWN") => SearchStatus::Unknown,
                    other => return Err(bad(format!("unknown status {other:?}"))),
                }
            }
            "radius" => c.radius = int(1)? as u32,
            "region" => c.region_size = int(1)? as usize,
            "nodes" => c.node_count = int(1)? as u64,
            "r1_dead_ends" => c.r1_dead_ends = int(1)? as u64,
            "r2_dead_ends" => c.r2_dead_ends = int(1)? as u64,
            "frontier" => c.frontier.push(Hex::new(int(1)? as i32, int(2)? as i32)),
            "place" => {
                let o = int(3)?;
                if !(0..6).contains(&o) {
                    return Err(bad(format!("orientation {o} outside 0..5")));
                }
                c.witness.push(Placement::new(Hex::new(int(1)? as i32, int(2)? as i32), o as u8));
            }
            other => return Err(bad(format!("unknown key {other:?}"))),
        }
    }
    Ok(c)
}

pub fn save(path: &Path, doc: &PatchDocument) -> Result<(), FormatError> {
    std::fs::write(path, write_patch(&doc.patch, &doc.metadata))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<PatchDocument, FormatError> {
    read_patch(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let p = crate::constructions::build_pn(2).unwrap();
        let doc = PatchDocument::new(p).with_meta("construction", "SPIRAL_P n=2");
        let text = write_patch(&doc.patch, &doc.metadata);
        assert!(text.starts_with("hexmono v1\n"));
        let back = read_patch(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(write_patch(&back.patch, &back.metadata), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(read_patch("0 0 0\n"), Err(FormatError::MissingHeader)));
        assert!(matches!(read_patch("hexmono v1\n0 0 6\n"), Err(FormatError::Syntax { line: 2, .. })));
        assert!(matches!(read_patch("hexmono v1\n0 0\n"), Err(FormatError::Syntax { .. })));
        assert!(matches!(read_patch("hexmono v1\n0 0 1\n0 0 2\n"), Err(FormatError::Tile { line: 3, .. })));
    }

    #[test]
    fn certificate_round_trip() {
        let seed = Patch::from_tiles(PrototileTemplate::shipped(), [(Hex::ORIGIN, 0)]).unwrap();
        let cfg = crate::search::SearchConfig::default();
        let v = crate::search::is_legal_within(&seed, 2, &cfg).unwrap();
        let c = Certificate::from_verdict(&v);
        let back = read_certificate(&write_certificate(&c)).unwrap();
        assert_eq!(back, c);
        let region = crate::search::neighborhood(&seed, 2);
        let grown = crate::engine::replay_within(&seed, &back.witness, &region).unwrap();
        assert_eq!(&grown, &v.witness.unwrap().patch);
    }

    #[test]
    fn stale_verdicts_are_recomputed() {
        let text = "hexmono v1\n# verdict.tiles = 99\n0 0 0\n";
        let doc = read_patch(text).unwrap();
        assert_eq!(doc.verdicts.tiles, 1);
        assert!(doc.metadata.is_empty());
    }
}
