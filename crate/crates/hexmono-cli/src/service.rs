//! Local HTTP service for interactive growth.
//!
//! One session holds the current patch and the stack of placements made
//! since the last load.  Mutating requests take the session lock, so they
//! are applied one at a time; every response carries the session version,
//! which increases with each successful mutation.

use axum::extract::{Query, State};
use axum::http::{header, HeaderName, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use hexmono::analysis::{analyze, ClassVerdict};
use hexmono::constructions::{catalogue, ConstructionInfo, ConstructionLabel};
use hexmono::engine::{can_place, is_directly_constructible, place, replay, EngineError, LegalityReport};
use hexmono::io::{read_patch, write_patch, PatchVerdicts};
use hexmono::svg::{parse_layers, render_svg, RenderOptions};
use hexmono::{Hex, Patch, Placement};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

pub const VERSION_HEADER: &str = "x-hexmono-version";

/// The single session served.
#[derive(Debug)]
pub struct Session {
    /// Patch the placement stack starts from (empty unless a loaded patch
    /// had no legal growth order).
    base: Patch,
    placements: Vec<Placement>,
    patch: Patch,
    version: u64,
    id: String,
}

impl Session {
    pub fn new(initial: Patch) -> Self {
        let mut s = Session { base: Patch::default(), placements: Vec::new(), patch: Patch::default(), version: 0, id: String::new() };
        s.id = format!("session-{}", std::process::id());
        s.reset(initial);
        s
    }

    /// Replaces the patch; a directly constructible patch is stored as its
    /// growth order so that undo walks back through it.
    fn reset(&mut self, p: Patch) {
        let c = is_directly_constructible(&p);
        if c.constructible {
            self.base = Patch::new(*p.template());
            self.placements = c.witness;
        } else {
            self.base = p.clone();
            self.placements = Vec::new();
        }
        self.patch = p;
    }

    pub fn patch(&self) -> &Patch {
        &self.patch
    }

    pub fn version(&self) -> u64 {
        self.version
    }

    /// Replays the placement stack from the base.
    pub fn replayed(&self) -> Result<Patch, EngineError> {
        if self.base.is_empty() {
            replay(*self.base.template(), &self.placements)
        } else {
            let mut p = self.base.clone();
            for &pl in &self.placements {
                p = place(&p, pl)?;
            }
            Ok(p)
        }
    }
}

pub type SharedSession = Arc<Mutex<Session>>;

pub fn router(session: SharedSession) -> Router {
    Router::new()
        .route("/patch", get(get_patch))
        .route("/legal", get(get_legal))
        .route("/place", post(post_place))
        .route("/undo", post(post_undo))
        .route("/render.svg", get(get_render))
        .route("/constructions", get(get_constructions))
        .route("/load", post(post_load))
        .with_state(session)
}

/// Serves until interrupted.
pub async fn serve(port: u16, initial: Patch) -> anyhow::Result<()> {
    let session = Arc::new(Mutex::new(Session::new(initial)));
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", port)).await?;
    eprintln!("hexmono service listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router(session))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ErrorBody {
    pub version: u64,
    pub error: String,
    pub reason: String,
}

fn with_version(version: u64, status: StatusCode, body: impl IntoResponse) -> Response {
    let mut r = (status, body).into_response();
    r.headers_mut().insert(HeaderName::from_static(VERSION_HEADER), HeaderValue::from(version));
    r
}

fn error(version: u64, status: StatusCode, code: &str, reason: impl Into<String>) -> Response {
    with_version(version, status, Json(ErrorBody { version, error: code.to_string(), reason: reason.into() }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct AnalysisSummary {
    pub verdicts: PatchVerdicts,
    pub triangle_lengths: BTreeMap<usize, usize>,
    pub class: Option<ClassVerdict>,
    pub violation: bool,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PatchBody {
    pub version: u64,
    pub id: String,
    pub tiles: Vec<[i32; 3]>,
    pub hexmono: String,
    pub undo_depth: usize,
    pub analysis: AnalysisSummary,
}

async fn get_patch(State(s): State<SharedSession>) -> Response {
    let s = s.lock().expect("session lock");
    let report = analyze(&s.patch, None);
    let body = PatchBody {
        version: s.version,
        id: s.id.clone(),
        tiles: s.patch.iter().map(|(c, o)| [c.q, c.r, o as i32]).collect(),
        hexmono: write_patch(&s.patch, &BTreeMap::new()),
        undo_depth: s.placements.len(),
        analysis: AnalysisSummary {
            verdicts: PatchVerdicts::compute(&s.patch),
            triangle_lengths: report.triangle_lengths.clone(),
            class: report.class.as_ref().map(|c| c.verdict),
            violation: report.has_violation(),
        },
    };
    with_version(s.version, StatusCode::OK, Json(body))
}

#[derive(Debug, Deserialize)]
pub struct CellQuery {
    q: Option<String>,
    r: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct OrientationCheck {
    pub orientation: u8,
    pub verdict: String,
    pub failing_edges: Vec<u8>,
    pub report: LegalityReport,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LegalBody {
    pub version: u64,
    pub q: i32,
    pub r: i32,
    pub legal: Vec<u8>,
    pub orientations: Vec<OrientationCheck>,
}

fn parse_coord(name: &str, v: Option<&String>) -> Result<i32, String> {
    let v = v.ok_or_else(|| format!("missing query parameter `{name}`"))?;
    v.trim().parse().map_err(|_| format!("`{name}` must be an integer, got {v:?}"))
}

async fn get_legal(State(s): State<SharedSession>, Query(q): Query<CellQuery>) -> Response {
    let s = s.lock().expect("session lock");
    let (cq, cr) = match (parse_coord("q", q.q.as_ref()), parse_coord("r", q.r.as_ref())) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return error(s.version, StatusCode::BAD_REQUEST, "BAD_CELL", e),
    };
    let cell = Hex::new(cq, cr);
    let orientations: Vec<OrientationCheck> = (0..6u8)
        .map(|o| {
            let report = can_place(&s.patch, Placement::new(cell, o));
            OrientationCheck {
                orientation: o,
                verdict: report.verdict.as_str().to_string(),
                failing_edges: report.failing_edges(),
                report,
            }
        })
        .collect();
    let legal = orientations.iter().filter(|c| c.report.is_legal()).map(|c| c.orientation).collect();
    with_version(s.version, StatusCode::OK, Json(LegalBody { version: s.version, q: cq, r: cr, legal, orientations }))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlaceRequest {
    pub q: i32,
    pub r: i32,
    pub o: i64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct PlaceBody {
    pub version: u64,
    pub verdict: String,
    pub report: LegalityReport,
}

async fn post_place(State(s): State<SharedSession>, body: Result<Json<PlaceRequest>, axum::extract::rejection::JsonRejection>) -> Response {
    let mut s = s.lock().expect("session lock");
    let Ok(Json(req)) = body else {
        return error(s.version, StatusCode::BAD_REQUEST, "BAD_BODY", "expected JSON {q, r, o}");
    };
    if !(0..6).contains(&req.o) {
        return error(s.version, StatusCode::BAD_REQUEST, "BAD_ORIENTATION", format!("orientation {} outside 0..5", req.o));
    }
    let pl = Placement::new(Hex::new(req.q, req.r), req.o as u8);
    let report = can_place(&s.patch, pl);
    match place(&s.patch, pl) {
        Ok(next) => {
            s.patch = next;
            s.placements.push(pl);
            s.version += 1;
            let body = PlaceBody { version: s.version, verdict: report.verdict.as_str().to_string(), report };
            with_version(s.version, StatusCode::OK, Json(body))
        }
        Err(EngineError::Illegal(report)) => {
            let body = PlaceBody { version: s.version, verdict: report.verdict.as_str().to_string(), report: *report };
            with_version(s.version, StatusCode::CONFLICT, Json(body))
        }
        Err(e) => error(s.version, StatusCode::BAD_REQUEST, "BAD_PLACEMENT", e.to_string()),
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct UndoBody {
    pub version: u64,
    pub undone: Placement,
}

async fn post_undo(State(s): State<SharedSession>) -> Response {
    let mut s = s.lock().expect("session lock");
    let Some(last) = s.placements.pop() else {
        return error(s.version, StatusCode::CONFLICT, "NOTHING_TO_UNDO", "the placement stack is empty");
    };
    match s.replayed() {
        Ok(p) => {
            s.patch = p;
            s.version += 1;
            with_version(s.version, StatusCode::OK, Json(UndoBody { version: s.version, undone: last }))
        }
        Err(e) => {
            s.placements.push(last);
            error(s.version, StatusCode::INTERNAL_SERVER_ERROR, "REPLAY_FAILED", e.to_string())
        }
    }
}

#[derive(Debug, Deserialize)]
pub struct RenderQuery {
    layers: Option<String>,
    scale: Option<f64>,
}

async fn get_render(State(s): State<SharedSession>, Query(q): Query<RenderQuery>) -> Response {
    let s = s.lock().expect("session lock");
    let mut opts = RenderOptions::default();
    if let Some(l) = &q.layers {
        match parse_layers(l) {
            Ok(layers) => opts.layers = layers,
            Err(e) => return error(s.version, StatusCode::BAD_REQUEST, "BAD_LAYERS", e.to_string()),
        }
    }
    if let Some(scale) = q.scale {
        opts.scale = scale;
    }
    match render_svg(&s.patch, &opts) {
        Ok(svg) => with_version(s.version, StatusCode::OK, ([(header::CONTENT_TYPE, "image/svg+xml")], svg)),
        Err(e) => error(s.version, StatusCode::BAD_REQUEST, "BAD_RENDER_OPTIONS", e.to_string()),
    }
}

#[derive(Debug, Serialize)]
pub struct ConstructionsBody {
    pub version: u64,
    pub constructions: Vec<ConstructionInfo>,
}

async fn get_constructions(State(s): State<SharedSession>) -> Response {
    let version = s.lock().expect("session lock").version;
    with_version(version, StatusCode::OK, Json(ConstructionsBody { version, constructions: catalogue() }))
}

/// Body of `POST /load`: a `hexmono v1` document, a tile list, or a
/// construction to build.
#[derive(Debug, Serialize, Deserialize)]
pub struct LoadRequest {
    pub hexmono: Option<String>,
    pub tiles: Option<Vec<[i64; 3]>>,
    pub construction: Option<ConstructionLabel>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct LoadBody {
    pub version: u64,
    pub verdicts: PatchVerdicts,
}

/// Largest patch accepted by `POST /load`.
const LOAD_LIMIT: usize = 200_000;

fn load_patch(req: LoadRequest) -> Result<Patch, (String, String)> {
    let sources = req.hexmono.is_some() as u8 + req.tiles.is_some() as u8 + req.construction.is_some() as u8;
    if sources != 1 {
        return Err(("BAD_BODY".into(), "give exactly one of `hexmono`, `tiles`, `construction`".into()));
    }
    if let Some(text) = req.hexmono {
        return read_patch(&text).map(|d| d.patch).map_err(|e| ("BAD_PATCH".into(), e.to_string()));
    }
    if let Some(tiles) = req.tiles {
        let mut out = Vec::with_capacity(tiles.len());
        for [q, r, o] in tiles {
            let (Ok(q), Ok(r)) = (i32::try_from(q), i32::try_from(r)) else {
                return Err(("BAD_PATCH".into(), format!("coordinate out of range: ({q}, {r})")));
            };
            if !(0..6).contains(&o) {
                return Err(("BAD_PATCH".into(), format!("orientation {o} outside 0..5")));
            }
            out.push((Hex::new(q, r), o as u8));
        }
        return Patch::from_tiles(hexmono::PrototileTemplate::shipped(), out).map_err(|e| ("BAD_PATCH".into(), e.to_string()));
    }
    let label = req.construction.expect("exactly one source");
    label.build().map_err(|e| ("BAD_CONSTRUCTION".into(), e.to_string()))
}

async fn post_load(State(s): State<SharedSession>, body: Result<Json<LoadRequest>, axum::extract::rejection::JsonRejection>) -> Response {
    let version = s.lock().expect("session lock").version;
    let Ok(Json(req)) = body else {
        return error(version, StatusCode::BAD_REQUEST, "BAD_BODY", "expected a JSON load request");
    };
    // Building can take a while; do it without holding the lock.
    let built = tokio::task::spawn_blocking(move || load_patch(req)).await;
    let mut s = s.lock().expect("session lock");
    match built {
        Ok(Ok(p)) if p.len() <= LOAD_LIMIT => {
            s.reset(p);
            s.version += 1;
            let body = LoadBody { version: s.version, verdicts: PatchVerdicts::compute(&s.patch) };
            with_version(s.version, StatusCode::OK, Json(body))
        }
        Ok(Ok(p)) => error(s.version, StatusCode::PAYLOAD_TOO_LARGE, "TOO_LARGE", format!("{} tiles > {LOAD_LIMIT}", p.len())),
        Ok(Err((code, reason))) => error(s.version, StatusCode::BAD_REQUEST, &code, reason),
        Err(e) => error(s.version, StatusCode::INTERNAL_SERVER_ERROR, "INTERNAL", e.to_string()),
    }
}
