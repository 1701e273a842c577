//! Deterministic SVG rendering of patches.
//!
//! Tile centres use the embedding `q·(1, 0) + r·(1/2, √3/2)` with the
//! y axis flipped for SVG.  Black curves are drawn through their
//! off-centre crossing points (one third / two thirds along each edge);
//! red trees are stars from the tile centre to the contact points.

use crate::analysis::{trace_r1, FeatureKind};
use crate::engine::Patch;
use crate::hexlattice::{spiral_anchor, Hex};
use crate::prototile::{Crossing, CurveKind, Sign};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Layer {
    Tiles,
    R1Curves,
    R2Trees,
    TriangleLabels,
    R2Graph,
    SpiralAnchors,
}

impl Layer {
    pub const ALL: [Layer; 6] =
        [Layer::Tiles, Layer::R1Curves, Layer::R2Trees, Layer::TriangleLabels, Layer::R2Graph, Layer::SpiralAnchors];

    pub fn as_str(self) -> &'static str {
        match self {
            Layer::Tiles => "TILES",
            Layer::R1Curves => "R1_CURVES",
            Layer::R2Trees => "R2_TREES",
            Layer::TriangleLabels => "TRIANGLE_LABELS",
            Layer::R2Graph => "R2_GRAPH",
            Layer::SpiralAnchors => "SPIRAL_ANCHORS",
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RenderError {
    #[error("unknown layer {0:?}")]
    UnknownLayer(String),
    #[error("at least one layer is required")]
    NoLayers,
    #[error("scale must be positive and finite")]
    BadScale,
}

impl FromStr for Layer {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        Layer::ALL.into_iter().find(|l| l.as_str() == norm).ok_or_else(|| RenderError::UnknownLayer(s.to_string()))
    }
}

/// Parses a comma-separated layer list such as `tiles,r1_curves`.
pub fn parse_layers(s: &str) -> Result<BTreeSet<Layer>, RenderError> {
    let layers: BTreeSet<Layer> =
        s.split(',').filter(|x| !x.trim().is_empty()).map(Layer::from_str).collect::<Result<_, _>>()?;
    if layers.is_empty() {
        return Err(RenderError::NoLayers);
    }
    Ok(layers)
}

/// What to draw and how large.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderOptions {
    pub layers: BTreeSet<Layer>,
    /// Pixels per tile spacing.
    pub scale: f64,
    /// Cells to fill with a highlight colour.
    pub highlight: Vec<Hex>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            layers: [Layer::Tiles, Layer::R1Curves, Layer::R2Trees].into_iter().collect(),
            scale: 24.0,
            highlight: Vec::new(),
        }
    }
}

impl RenderOptions {
    pub fn validate(&self) -> Result<(), RenderError> {
        if self.layers.is_empty() {
            return Err(RenderError::NoLayers);
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(RenderError::BadScale);
        }
        Ok(())
    }
}

const CIRCUMRADIUS: f64 = 0.577_350_269_189_625_8;

fn point(c: Hex) -> (f64, f64) {
    let (x, y) = c.center();
    (x, -y)
}

/// World vertex `j` of the hexagon at `c` (angle `60j + 30°`).
fn vertex(c: Hex, j: u8) -> (f64, f64) {
    let (x, y) = c.center();
    let a = (60.0 * j as f64 + 30.0).to_radians();
    (x + CIRCUMRADIUS * a.cos(), -(y + CIRCUMRADIUS * a.sin()))
}

fn lerp(a: (f64, f64), b: (f64, f64), t: f64) -> (f64, f64) {
    (a.0 + (b.0 - a.0) * t, a.1 + (b.1 - a.1) * t)
}

/// Point on world edge `k` of the tile at `c` (running from vertex `k − 1`
/// to vertex `k`) at fraction `t`.
fn edge_point(c: Hex, k: u8, t: f64) -> (f64, f64) {
    lerp(vertex(c, (k + 5) % 6), vertex(c, k), t)
}

fn crossing_point(c: Hex, k: u8, x: Crossing) -> (f64, f64) {
    edge_point(c, k, if x == Crossing::NearStart { 1.0 / 3.0 } else { 2.0 / 3.0 })
}

struct Canvas {
    out: String,
    s: f64,
    ox: f64,
    oy: f64,
}

impl Canvas {
    fn x(&self, p: (f64, f64)) -> String {
        format!("{:.2}", (p.0 - self.ox) * self.s)
    }

    fn y(&self, p: (f64, f64)) -> String {
        format!("{:.2}", (p.1 - self.oy) * self.s)
    }

    fn xy(&self, p: (f64, f64)) -> String {
        format!("{},{}", self.x(p), self.y(p))
    }
}

/// Renders a patch as a standalone SVG document.
pub fn render_svg(p: &Patch, opts: &RenderOptions) -> Result<String, RenderError> {
    opts.validate()?;
    let s = opts.scale;
    let margin = 1.0;
    let (mut minx, mut miny, mut maxx, mut maxy) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, c) in p.cells().enumerate() {
        let (x, y) = point(c);
        if i == 0 {
            (minx, miny, maxx, maxy) = (x, y, x, y);
        } else {
            minx = minx.min(x);
            miny = miny.min(y);
            maxx = maxx.max(x);
            maxy = maxy.max(y);
        }
    }
    let (ox, oy) = (minx - margin, miny - margin);
    let (w, h) = ((maxx - minx + 2.0 * margin) * s, (maxy - miny + 2.0 * margin) * s);
    let mut cv = Canvas { out: String::new(), s, ox, oy };
    let _ = writeln!(
        cv.out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2}" height="{h:.2}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let _ = writeln!(cv.out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let t = *p.template();
    let highlight: BTreeSet<Hex> = opts.highlight.iter().copied().collect();
    let stroke = (s / 24.0).max(0.5);

    if opts.layers.contains(&Layer::Tiles) || !highlight.is_empty() {
        let _ = writeln!(cv.out, r##"<g id="tiles" stroke="#888888" stroke-width="{:.2}">"##, stroke * 0.5);
        for c in p.cells() {
            let fill = if highlight.contains(&c) { "#ffe680" } else { "#f4f1ea" };
            let pts: Vec<String> = (0..6).map(|j| cv.xy(vertex(c, j))).collect();
            let _ = writeln!(cv.out, r#"<polygon points="{}" fill="{fill}"/>"#, pts.join(" "));
        }
        for c in highlight.iter().filter(|c| !p.contains(**c)) {
            let pts: Vec<String> = (0..6).map(|j| cv.xy(vertex(*c, j))).collect();
            let _ = writeln!(cv.out, r##"<polygon points="{}" fill="none" stroke="#d4a000"/>"##, pts.join(" "));
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if opts.layers.contains(&Layer::R2Graph) {
        let _ = writeln!(cv.out, r##"<g id="r2-graph" stroke="#2a6fdb" stroke-width="{:.2}">"##, stroke);
        for (c, o) in p.iter() {
            for k in 0..3u8 {
                let nb = c.neighbor(k);
                if let Some(o2) = p.get(nb) {
                    if t.r2_linked(o, k, o2) {
                        let (a, b) = (point(c), point(nb));
                        let _ = writeln!(
                            cv.out,
                            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                            cv.x(a),
                            cv.y(a),
                            cv.x(b),
                            cv.y(b)
                        );
                    }
                }
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if opts.layers.contains(&Layer::R2Trees) {
        let _ = writeln!(cv.out, r##"<g id="r2-trees" stroke="#d62728" stroke-width="{:.2}" fill="#d62728">"##, stroke);
        for (c, o) in p.iter() {
            let centre = point(c);
            for k in 0..6u8 {
                if let Some(sign) = t.r2_contact(o, k) {
                    let m = edge_point(c, k, 0.5);
                    let _ = writeln!(
                        cv.out,
                        r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
                        cv.x(centre),
                        cv.y(centre),
                        cv.x(m),
                        cv.y(m)
                    );
                    let fill = if sign == Sign::Plus { "#d62728" } else { "white" };
                    let _ = writeln!(
                        cv.out,
                        r#"<circle cx="{}" cy="{}" r="{:.2}" fill="{fill}"/>"#,
                        cv.x(m),
                        cv.y(m),
                        0.06 * s
                    );
                }
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if opts.layers.contains(&Layer::R1Curves) {
        let _ = writeln!(
            cv.out,
            r#"<g id="r1-curves" stroke="black" stroke-width="{:.2}" fill="none" stroke-linecap="round">"#,
            stroke * 1.5
        );
        for (c, o) in p.iter() {
            for curve in t.curves() {
                let (ka, kb) = ((curve.a + o) % 6, (curve.b + o) % 6);
                let a = crossing_point(c, ka, t.r1_signature(o, ka));
                let b = crossing_point(c, kb, t.r1_signature(o, kb));
                let ctrl = match curve.kind {
                    CurveKind::Stripe => lerp(a, b, 0.5),
                    CurveKind::Arc { vertex: v } => lerp(point(c), vertex(c, (v + o) % 6), 0.5),
                };
                let _ = writeln!(cv.out, r#"<path d="M {} Q {} {}"/>"#, cv.xy(a), cv.xy(ctrl), cv.xy(b));
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if opts.layers.contains(&Layer::TriangleLabels) {
        let _ = writeln!(
            cv.out,
            r##"<g id="triangle-labels" fill="#1f4e79" font-family="sans-serif" font-size="{:.2}" text-anchor="middle">"##,
            0.5 * s
        );
        if let Ok(features) = trace_r1(p) {
            for f in features.iter().filter(|f| f.kind == FeatureKind::Triangle) {
                let n = f.corner_cells.len().max(1) as f64;
                let (sx, sy) = f.corner_cells.iter().map(|c| point(*c)).fold((0.0, 0.0), |a, b| (a.0 + b.0, a.1 + b.1));
                let len = f.length.unwrap_or(0);
                let _ = writeln!(cv.out, r#"<text x="{}" y="{}">{len}</text>"#, cv.x((sx / n, sy / n)), cv.y((sx / n, sy / n)));
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }

    if opts.layers.contains(&Layer::SpiralAnchors) {
        let _ = writeln!(cv.out, r#"<g id="spiral-anchors" fill="black">"#);
        for n in 0..=16u32 {
            let a = spiral_anchor(n);
            if p.contains(a) {
                let _ = writeln!(
                    cv.out,
                    r#"<circle cx="{}" cy="{}" r="{:.2}"><title>x_{n}</title></circle>"#,
                    cv.x(point(a)),
                    cv.y(point(a)),
                    0.15 * s
                );
            }
        }
        let _ = writeln!(cv.out, "</g>");
    }

    cv.out.push_str("</svg>\n");
    Ok(cv.out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_patch_renders() {
        let svg = render_svg(&Patch::default(), &RenderOptions::default()).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn layer_parsing() {
        let l = parse_layers("tiles,r1-curves,SPIRAL_ANCHORS").unwrap();
        assert_eq!(l.len(), 3);
        assert!(parse_layers("").is_err());
        assert!(parse_layers("tiles,nope").is_err());
    }

    #[test]
    fn anchors_are_marked() {
        let p = crate::constructions::build_pn(2).unwrap();
        let opts = RenderOptions { layers: [Layer::SpiralAnchors].into_iter().collect(), ..Default::default() };
        let svg = render_svg(&p, &opts).unwrap();
        for n in 0..=2 {
            assert!(svg.contains(&format!("<title>x_{n}</title>")));
        }
        assert_eq!(svg, render_svg(&p, &opts).unwrap());
    }
}
