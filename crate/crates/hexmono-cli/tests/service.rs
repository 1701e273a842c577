use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use hexmono::constructions::build_pn;
use hexmono::engine::{can_place, place};
use hexmono::{Hex, Patch, Placement};
use hexmono_cli::service::{router, Session, VERSION_HEADER};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use std::sync::{Arc, Mutex};
use tower::ServiceExt;

fn app(initial: Patch) -> Router {
    router(Arc::new(Mutex::new(Session::new(initial))))
}

struct Reply {
    status: StatusCode,
    version: u64,
    content_type: String,
    body: Vec<u8>,
}

impl Reply {
    fn json(&self) -> Value {
        serde_json::from_slice(&self.body).expect("JSON body")
    }
}

async fn send(app: &Router, method: &str, uri: &str, body: Option<Value>) -> Reply {
    let builder = Request::builder().method(method).uri(uri);
    let req = match body {
        Some(v) => builder.header("content-type", "application/json").body(Body::from(v.to_string())).unwrap(),
        None => builder.body(Body::empty()).unwrap(),
    };
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let version = resp.headers()[VERSION_HEADER].to_str().unwrap().parse().unwrap();
    let content_type =
        resp.headers().get("content-type").map(|v| v.to_str().unwrap().to_string()).unwrap_or_default();
    let body = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    Reply { status, version, content_type, body }
}

async fn place_req(app: &Router, q: i32, r: i32, o: i64) -> Reply {
    send(app, "POST", "/place", Some(json!({ "q": q, "r": r, "o": o }))).await
}

#[tokio::test]
async fn first_placement_is_legal_and_bumps_the_version() {
    let app = app(Patch::default());
    let before = send(&app, "GET", "/patch", None).await;
    assert_eq!(before.status, StatusCode::OK);
    assert_eq!(before.json()["tiles"], json!([]));
    let r = place_req(&app, 0, 0, 0).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["verdict"], "LEGAL");
    assert_eq!(r.version, before.version + 1);
    assert_eq!(r.json()["version"], json!(r.version));
    let after = send(&app, "GET", "/patch", None).await.json();
    assert_eq!(after["tiles"], json!([[0, 0, 0]]));
    assert_eq!(after["undo_depth"], 1);
    assert!(after["hexmono"].as_str().unwrap().starts_with("hexmono v1"));
}

#[tokio::test]
async fn curve_breaks_are_rejected_with_the_engine_reason() {
    let app = app(Patch::default());
    place_req(&app, 0, 0, 0).await;
    let p = Patch::from_tiles(hexmono::PrototileTemplate::shipped(), [(Hex::ORIGIN, 0)]).unwrap();
    let cell = Hex::ORIGIN.neighbor(0);
    let bad = (0..6u8).find(|&o| can_place(&p, Placement::new(cell, o)).verdict.as_str() == "R1_FAIL").unwrap();
    let r = place_req(&app, cell.q, cell.r, bad as i64).await;
    assert_eq!(r.status, StatusCode::CONFLICT);
    let body = r.json();
    assert_eq!(body["verdict"], "R1_FAIL");
    assert_eq!(body["report"]["verdict"], "R1_FAIL");
    let expected = serde_json::to_value(can_place(&p, Placement::new(cell, bad))).unwrap();
    assert_eq!(body["report"], expected);
    assert_eq!(r.version, 1, "a rejected placement leaves the version alone");
}

#[tokio::test]
async fn occupied_and_disconnected_codes_pass_through() {
    let app = app(Patch::default());
    place_req(&app, 0, 0, 0).await;
    assert_eq!(place_req(&app, 0, 0, 1).await.json()["verdict"], "OCCUPIED");
    assert_eq!(place_req(&app, 9, 9, 1).await.json()["verdict"], "DISCONNECTED");
}

#[tokio::test]
async fn bad_requests_are_400() {
    let app = app(Patch::default());
    for uri in ["/legal?q=1", "/legal?q=a&r=0", "/legal"] {
        let r = send(&app, "GET", uri, None).await;
        assert_eq!(r.status, StatusCode::BAD_REQUEST, "{uri}");
        assert_eq!(r.json()["error"], "BAD_CELL");
    }
    let r = place_req(&app, 0, 0, 6).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::BAD_REQUEST, json!("BAD_ORIENTATION")));
    let r = send(&app, "POST", "/place", Some(json!({ "q": 0 }))).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::BAD_REQUEST, json!("BAD_BODY")));
    let r = send(&app, "GET", "/render.svg?layers=tiles,nope", None).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::BAD_REQUEST, json!("BAD_LAYERS")));
    let r = send(&app, "GET", "/render.svg?scale=-1", None).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::BAD_REQUEST, json!("BAD_RENDER_OPTIONS")));
    let r = send(&app, "POST", "/undo", None).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::CONFLICT, json!("NOTHING_TO_UNDO")));
}

#[tokio::test]
async fn undo_walks_back() {
    let app = app(Patch::default());
    place_req(&app, 0, 0, 0).await;
    let legal = send(&app, "GET", "/legal?q=1&r=0", None).await.json();
    let o = legal["legal"][0].as_i64().expect("some orientation is legal next to one tile");
    assert_eq!(place_req(&app, 1, 0, o).await.status, StatusCode::OK);
    let r = send(&app, "POST", "/undo", None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["undone"], json!({ "cell": { "q": 1, "r": 0 }, "orientation": o }));
    assert_eq!(r.version, 3);
    assert_eq!(send(&app, "GET", "/patch", None).await.json()["tiles"], json!([[0, 0, 0]]));
}

#[tokio::test]
async fn loaded_constructions_can_be_undone_tile_by_tile() {
    let app = app(Patch::default());
    let r = send(&app, "POST", "/load", Some(json!({ "construction": { "kind": "SPIRAL_P", "n": 1 } }))).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["verdicts"]["tiles"], 5);
    assert_eq!(r.json()["verdicts"]["directly_constructible"], true);
    for _ in 0..5 {
        assert_eq!(send(&app, "POST", "/undo", None).await.status, StatusCode::OK);
    }
    assert_eq!(send(&app, "GET", "/patch", None).await.json()["tiles"], json!([]));
}

#[tokio::test]
async fn load_accepts_each_source_once() {
    let app = app(Patch::default());
    let r = send(&app, "POST", "/load", Some(json!({ "tiles": [[0, 0, 0], [5, 5, 1]] }))).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.json()["verdicts"]["edge_connected"], false);
    let text = hexmono::io::write_patch(&build_pn(2).unwrap(), &Default::default());
    let r = send(&app, "POST", "/load", Some(json!({ "hexmono": text }))).await;
    assert_eq!(r.json()["verdicts"]["tiles"], 21);
    let r = send(&app, "POST", "/load", Some(json!({ "hexmono": "nope" }))).await;
    assert_eq!((r.status, r.json()["error"].clone()), (StatusCode::BAD_REQUEST, json!("BAD_PATCH")));
    let r = send(&app, "POST", "/load", Some(json!({ "tiles": [[0, 0, 9]] }))).await;
    assert_eq!(r.json()["error"], "BAD_PATCH");
    let r = send(&app, "POST", "/load", Some(json!({ "tiles": [], "hexmono": "" }))).await;
    assert_eq!(r.json()["error"], "BAD_BODY");
    let r = send(&app, "POST", "/load", Some(json!({ "construction": { "kind": "SPIRAL_P", "n": 99 } }))).await;
    assert_eq!(r.json()["error"], "BAD_CONSTRUCTION");
}

#[tokio::test]
async fn render_and_catalogue() {
    let app = app(build_pn(1).unwrap());
    let r = send(&app, "GET", "/render.svg?layers=tiles,r2_graph&scale=10", None).await;
    assert_eq!(r.status, StatusCode::OK);
    assert_eq!(r.content_type, "image/svg+xml");
    let svg = String::from_utf8(r.body).unwrap();
    assert!(svg.contains("<svg") && svg.contains("</svg>"));
    let c = send(&app, "GET", "/constructions", None).await.json();
    let kinds: Vec<&str> = c["constructions"].as_array().unwrap().iter().map(|e| e["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds.len(), 9);
    assert!(kinds.contains(&"CYCLE_SEED"));
}

/// Fifty scripted requests: every /legal and /place answer must carry the
/// engine's own verdicts for the same patch and cell.
#[tokio::test]
async fn scripted_interactions_match_the_engine() {
    let app = app(Patch::default());
    let mut mirror = Patch::default();
    let mut version = 0;
    let mut cells: Vec<Hex> = vec![Hex::ORIGIN];
    let mut step = 0usize;
    let mut interactions = 0;
    while interactions < 50 {
        let cell = cells[step % cells.len()];
        step += 1;
        let legal = send(&app, "GET", &format!("/legal?q={}&r={}", cell.q, cell.r), None).await;
        interactions += 1;
        assert_eq!(legal.version, version);
        let body = legal.json();
        for o in 0..6u8 {
            let expected = can_place(&mirror, Placement::new(cell, o));
            let got = &body["orientations"][o as usize];
            assert_eq!(got["verdict"], expected.verdict.as_str());
            assert_eq!(got["report"], serde_json::to_value(&expected).unwrap());
            assert_eq!(got["failing_edges"], json!(expected.failing_edges()));
        }
        // Alternate between an illegal and a legal attempt where possible.
        let o = (step % 6) as u8;
        let r = place_req(&app, cell.q, cell.r, o as i64).await;
        interactions += 1;
        let expected = can_place(&mirror, Placement::new(cell, o));
        assert_eq!(r.json()["verdict"], expected.verdict.as_str());
        assert_eq!(r.json()["report"], serde_json::to_value(&expected).unwrap());
        if expected.is_legal() {
            assert_eq!(r.status, StatusCode::OK);
            mirror = place(&mirror, Placement::new(cell, o)).unwrap();
            version += 1;
            cells.extend(mirror.frontier_cells());
        } else {
            assert_eq!(r.status, StatusCode::CONFLICT);
        }
        assert_eq!(r.version, version);
    }
    let tiles = send(&app, "GET", "/patch", None).await.json()["tiles"].clone();
    let expected: Vec<[i32; 3]> = mirror.iter().map(|(c, o)| [c.q, c.r, o as i32]).collect();
    assert_eq!(tiles, json!(expected));
    assert!(mirror.len() > 1);
}
