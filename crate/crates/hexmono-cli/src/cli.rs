//! Command-line interface.
//!
//! Exit codes: 0 success, 1 an invariant violation was found (or a search
//! refuted the patch), 2 usage or input error, 3 a search ran out of budget.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hexmono::analysis::analyze;
use hexmono::constructions::{ChoiceSequence, ConstructionLabel};
use hexmono::io::{load, save, write_certificate, Certificate, PatchDocument};
use hexmono::prototile::{calibrate, structural_candidates, symmetric_stripe_candidates, PrototileTemplate};
use hexmono::search::{
    forced_lengths, is_legal_within, minimal_refutation_radius, SearchConfig, SearchStatus, SearchVerdict, DEFAULT_BUDGET,
};
use hexmono::svg::{parse_layers, render_svg, RenderOptions};
use hexmono::{Hex, Patch};
use serde_json::json;
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_UNKNOWN: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hexmono", version, about = "Hexagonal aperiodic monotile engine")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an explicit patch and write it in the hexmono v1 format.
    Build(BuildArgs),
    /// Print a machine-readable structural report of a patch.
    Analyze {
        file: PathBuf,
        /// Also test translations up to this Cartesian length.
        #[arg(long)]
        period_bound: Option<u32>,
    },
    /// Find the smallest radius (up to --radius) at which a patch is refuted.
    Refute {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Write a certificate file.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Decide whether a patch grows to cover the ball of the given radius.
    EmbedCheck {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Triangle lengths that close at a corner tile within a radius.
    ForcedLengths {
        /// Seed patch; a single tile at the origin when omitted.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Orientation of the single-tile seed.
        #[arg(long, default_value_t = 0)]
        orientation: u8,
        /// Corner cell as `q,r` (defaults to the origin).
        #[arg(long, value_parser = parse_cell)]
        corner: Option<Hex>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Render a patch as SVG.
    Render {
        file: PathBuf,
        /// Comma-separated layers: tiles, r1_curves, r2_trees,
        /// triangle_labels, r2_graph, spiral_anchors.
        #[arg(long, default_value = "tiles,r1_curves,r2_trees")]
        layers: String,
        #[arg(long, default_value_t = 24.0)]
        scale: f64,
        /// Cells to highlight, as `q,r;q,r;...`.
        #[arg(long)]
        highlight: Option<String>,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Search the template space and print the chosen template.
    Calibrate {
        /// Search only templates with a centrally symmetric stripe (expected
        /// to fail).
        #[arg(long)]
        symmetric_stripe: bool,
    },
    /// Print the shipped template.
    Template,
    /// Run the local HTTP service.
    Serve {
        #[arg(long, default_value_t = 8737)]
        port: u16,
        /// Patch file to start from.
        #[arg(long)]
        open: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Construction {
    Spiral,
    T0,
    Faultline,
    CycleSeed,
    AnticycleSeed,
    PeriodicLattice,
    InfiniteTriangle,
    HullR,
    HullS,
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    pub construction: Construction,
    /// Spiral, seed and hull index.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Radius for t0 and infinite-triangle.
    #[arg(long, default_value_t = 16)]
    pub radius: u32,
    /// Half-width of a fault-line strip.
    #[arg(long, default_value_t = 16)]
    pub width: u32,
    #[arg(long, default_value_t = 2)]
    pub m_max: u32,
    /// Fault-line doubling choices as an L/R string (alternating by default).
    #[arg(long)]
    pub choices: Option<String>,
    /// Equal triangle lengths on both sides of the fault line.
    #[arg(long)]
    pub mirrored: bool,
    /// Periodic-lattice level.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    #[arg(long, default_value_t = 3)]
    pub extent: u32,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also render the patch to this SVG file.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 3)]
    pub radius: u32,
    #[arg(long, env = "HEXMONO_BUDGET", default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Ignore the tree rule.
    #[arg(long)]
    pub r1_only: bool,
}

impl SearchArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig { budget: self.budget, threads: self.threads, r1_only: self.r1_only }
    }
}

fn parse_cell(s: &str) -> Result<Hex, String> {
    let (q, r) = s.split_once(',').ok_or_else(|| format!("expected `q,r`, got {s:?}"))?;
    let q = q.trim().parse().map_err(|_| format!("bad q in {s:?}"))?;
    let r = r.trim().parse().map_err(|_| format!("bad r in {s:?}"))?;
    Ok(Hex::new(q, r))
}

/// Errors sorted by exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

fn label(args: &BuildArgs) -> ConstructionLabel {
    use ConstructionLabel as L;
    match args.construction {
        Construction::Spiral => L::SpiralP { n: args.n },
        Construction::T0 => L::T0Trunc { radius: args.radius },
        Construction::Faultline => L::Faultline {
            width: args.width,
            m_max: args.m_max,
            choices: args.choices.clone().unwrap_or_else(|| {
                ChoiceSequence::alternating(args.m_max as usize + 1)
                    .bits
                    .iter()
                    .map(|b| if *b == hexmono::constructions::Choice::Left { 'L' } else { 'R' })
                    .collect()
            }),
            mirrored: args.mirrored,
        },
        Construction::CycleSeed => L::CycleSeed { n: args.n },
        Construction::AnticycleSeed => L::AnticycleSeed { n: args.n },
        Construction::PeriodicLattice => L::PeriodicLattice { m: args.m, extent: args.extent },
        Construction::InfiniteTriangle => L::InfiniteTriangleTrunc { radius: args.radius },
        Construction::HullR => L::HullR { n: args.n },
        Construction::HullS => L::HullS { n: args.n },
    }
}

fn load_patch(path: &Path) -> Result<Patch, Failure> {
    load(path).map(|d| d.patch).with_context(|| format!("reading {}", path.display())).map_err(Failure::Usage)
}

fn verdict_json(v: &SearchVerdict) -> serde_json::Value {
    json!({
        "status": v.status.as_str(),
        "radius": v.radius,
        "region_size": v.region_size,
        "node_count": v.node_count,
        "r1_dead_ends": v.certificate.r1_dead_ends,
        "r2_dead_ends": v.certificate.r2_dead_ends,
        "witness_length": v.witness.as_ref().map(|w| w.order.len()),
    })
}

fn status_code(s: SearchStatus) -> i32 {
    match s {
        SearchStatus::Extendable => EXIT_OK,
        SearchStatus::Refuted => EXIT_VIOLATION,
        SearchStatus::Unknown => EXIT_UNKNOWN,
    }
}

fn write_cert(path: &Option<PathBuf>, v: &SearchVerdict) -> Result<(), Failure> {
    if let Some(p) = path {
        std::fs::write(p, write_certificate(&Certificate::from_verdict(v)))
            .with_context(|| format!("writing {}", p.display()))
            .map_err(Failure::Runtime)?;
    }
    Ok(())
}

/// Runs a parsed command, writing reports to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    let print = |out: &mut dyn Write, v: serde_json::Value| -> Result<(), Failure> {
        writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("JSON values serialize"))
            .map_err(|e| Failure::Runtime(e.into()))
    };
    match cli.command {
        Command::Build(args) => {
            let label = label(&args);
            let patch = label.build().map_err(|e| Failure::Usage(anyhow!(e)))?;
            let doc = PatchDocument::new(patch).with_meta("construction", label.describe());
            save(&args.output, &doc).map_err(|e| Failure::Runtime(e.into()))?;
            if let Some(svg) = &args.svg {
                let text = render_svg(&doc.patch, &RenderOptions::default()).map_err(|e| Failure::Usage(e.into()))?;
                std::fs::write(svg, text).map_err(|e| Failure::Runtime(e.into()))?;
            }
            print(out, json!({ "construction": label, "verdicts": doc.verdicts }))?;
            Ok(EXIT_OK)
        }
        Command::Analyze { file, period_bound } => {
            let p = load_patch(&file)?;
            let report = analyze(&p, period_bound);
            let code = if report.has_violation() { EXIT_VIOLATION } else { EXIT_OK };
            print(out, serde_json::to_value(&report).expect("reports serialize"))?;
            Ok(code)
        }
        Command::Refute { file, search, certificate } => {
            let p = load_patch(&file)?;
            let cfg = search.config();
            match minimal_refutation_radius(&p, search.radius, &cfg).map_err(|e| Failure::Usage(e.into()))? {
                Some(v) => {
                    write_cert(&certificate, &v)?;
                    print(out, json!({ "minimal_radius": v.radius, "verdict": verdict_json(&v) }))?;
                    Ok(EXIT_VIOLATION)
                }
                None => {
                    let v = is_legal_within(&p, search.radius, &cfg).map_err(|e| Failure::Usage(e.into()))?;
                    write_cert(&certificate, &v)?;
                    print(out, json!({ "minimal_radius": null, "verdict": verdict_json(&v) }))?;
                    Ok(status_code(v.status))
                }
            }
        }
        Command::EmbedCheck { file, search, certificate } => {
            let p = load_patch(&file)?;
            let v = is_legal_within(&p, search.radius, &search.config()).map_err(|e| Failure::Usage(e.into()))?;
            write_cert(&certificate, &v)?;
            print(out, verdict_json(&v))?;
            Ok(status_code(v.status))
        }
        Command::ForcedLengths { file, orientation, corner, search } => {
            let seed = match &file {
                Some(f) => load_patch(f)?,
                None => {
                    if orientation >= 6 {
                        return Err(Failure::Usage(anyhow!("orientation {orientation} outside 0..5")));
                    }
                    Patch::from_tiles(PrototileTemplate::shipped(), [(Hex::ORIGIN, orientation)])
                        .expect("a single tile is a patch")
                }
            };
            let corner = corner.unwrap_or(Hex::ORIGIN);
            let fl = forced_lengths(&seed, corner, search.radius, &search.config()).map_err(|e| Failure::Usage(e.into()))?;
            let attempts: Vec<_> = fl
                .attempts
                .iter()
                .map(|a| json!({ "direction": a.direction, "length": a.length, "status": a.status.as_str(), "nodes": a.node_count }))
                .collect();
            print(out, json!({ "observed": fl.observed, "status": fl.status.as_str(), "attempts": attempts }))?;
            Ok(if fl.status == SearchStatus::Unknown {
                EXIT_UNKNOWN
            } else if fl.observed.iter().any(|l| !(l + 1).is_power_of_two()) {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
        Command::Render { file, layers, scale, highlight, output } => {
            let p = load_patch(&file)?;
            let highlight = match highlight {
                Some(h) => h
                    .split(';')
                    .filter(|s| !s.trim().is_empty())
                    .map(parse_cell)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|e| Failure::Usage(anyhow!(e)))?,
                None => Vec::new(),
            };
            let opts = RenderOptions {
                layers: parse_layers(&layers).map_err(|e| Failure::Usage(e.into()))?,
                scale,
                highlight,
            };
            let svg = render_svg(&p, &opts).map_err(|e| Failure::Usage(e.into()))?;
            std::fs::write(&output, svg).map_err(|e| Failure::Runtime(e.into()))?;
            Ok(EXIT_OK)
        }
        Command::Calibrate { symmetric_stripe } => {
            let candidates = if symmetric_stripe { symmetric_stripe_candidates() } else { structural_candidates() };
            match calibrate(&candidates) {
                Ok(c) => {
                    let shipped = c.template == PrototileTemplate::shipped();
                    print(
                        out,
                        json!({
                            "evaluated": c.evaluated,
                            "template": c.template.to_string(),
                            "matches_shipped": shipped,
                            "alternates": c.alternates.iter().map(|t| t.summary()).collect::<Vec<_>>(),
                        }),
                    )?;
                    Ok(EXIT_OK)
                }
                Err(e) => {
                    print(out, json!({ "error": e.to_string() }))?;
                    Ok(EXIT_VIOLATION)
                }
            }
        }
        Command::Template => {
            write!(out, "{}", PrototileTemplate::shipped()).map_err(|e| Failure::Runtime(e.into()))?;
            Ok(EXIT_OK)
        }
        Command::Serve { port, open } => {
            let initial = match &open {
                Some(f) => load_patch(f)?,
                None => Patch::default(),
            };
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::Runtime(e.into()))?;
            rt.block_on(crate::service::serve(port, initial)).map_err(Failure::Runtime)?;
            Ok(EXIT_OK)
        }
    }
}
