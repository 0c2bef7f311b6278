use axum::body::Body;
use axum::http::{Request, StatusCode};
use axum::Router;
use honeybee_cli::service::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use serde_json::{json, Value};
use tower::ServiceExt;

fn app() -> Router {
    router(AppState::new(ServiceConfig::default()))
}

async fn call(app: &Router, method: &str, uri: &str, body: Option<Value>) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(body.map_or_else(Body::empty, |b| Body::from(b.to_string())))
        .unwrap();
    let resp = app.clone().oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let v = if bytes.is_empty() { Value::Null } else { serde_json::from_slice(&bytes).unwrap() };
    (status, v)
}

fn strip() -> Value {
    json!({"k": 3, "cells": [{"q": 0, "r": 0, "color": 0}, {"q": 1, "r": 0, "color": 1}, {"q": 2, "r": 0, "color": 2}],
           "start_a": [0, 0], "start_b": [2, 0]})
}

#[tokio::test]
async fn healthz() {
    let (s, v) = call(&app(), "GET", "/healthz", None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["status"], "ok");
}

#[tokio::test]
async fn strip_game_reaches_a_verdict() {
    let app = app();
    let (s, v) = call(&app, "POST", "/games", Some(json!({"board": strip(), "human": "A"}))).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(v["legal_colors"], json!([1]));
    assert_eq!(v["status"], "in_progress");
    let id = v["id"].as_str().unwrap().to_string();

    let (s, v) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"color": 1}))).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["human_move"]["gained"], 1);
    assert!(v["ai_move"].is_null());
    assert_eq!(v["session"]["verdict"]["winner"], "A");
    assert_eq!(v["session"]["status"], "finished");

    let (s, v) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"color": 0}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "game_over");

    let (s, v) = call(&app, "GET", &format!("/games/{id}"), None).await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(v["transcript"].as_array().unwrap().len(), 1);
}

/// 5-path with colors black, dark gray, light, dark gray, white: a forced
/// first call, then an illegal repeat.
#[tokio::test]
async fn rule_violations_are_409_and_name_the_rule() {
    let app = app();
    let inst = json!({
        "k": 4,
        "nodes": [{"id": "a", "color": 3}, {"id": "b", "color": 2}, {"id": "c", "color": 0},
                  {"id": "d", "color": 1}, {"id": "e", "color": 2}, {"id": "f", "color": 1},
                  {"id": "g", "color": 0}],
        "edges": [["a", "b"], ["b", "c"], ["c", "d"], ["d", "e"], ["e", "f"], ["f", "g"]],
        "start_a": "a", "start_b": "g"
    });
    let (s, v) = call(&app, "POST", "/games", Some(json!({"instance": inst, "human": "A", "policy": "greedy"}))).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    let id = v["id"].as_str().unwrap().to_string();
    let uri = format!("/games/{id}/moves");

    // waiting while a gaining color exists
    let (s, v) = call(&app, "POST", &uri, Some(json!({"color": 1}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert!(v["message"].as_str().unwrap().starts_with("R3"), "{v}");

    let (s, v) = call(&app, "POST", &uri, Some(json!({"color": 2}))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    let b_call = v["ai_move"]["color"].as_u64().unwrap();
    // B answered with 1, so calling 1 copies B and calling 2 repeats A's own call
    assert_eq!(b_call, 1);
    let (s, v) = call(&app, "POST", &uri, Some(json!({"color": 2}))).await;
    assert_eq!(s, StatusCode::CONFLICT);
    assert_eq!(v["code"], "rule_violation");
    assert!(v["message"].as_str().unwrap().starts_with("R2"), "{v}");
    let (_, v) = call(&app, "POST", &uri, Some(json!({"color": 1}))).await;
    assert!(v["message"].as_str().unwrap().starts_with("R1"), "{v}");

    let (s, v) = call(&app, "POST", &uri, Some(json!({"color": 9}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(v["code"], "invalid_color");
}

#[tokio::test]
async fn computer_opens_when_human_is_b() {
    let app = app();
    let (s, v) = call(&app, "POST", "/games", Some(json!({"random_board": {"rows": 3, "cols": 3, "k": 4, "seed": 2}, "human": "B", "policy": "minimax"}))).await;
    assert_eq!(s, StatusCode::CREATED, "{v}");
    assert_eq!(v["transcript"].as_array().unwrap().len(), 1);
    assert_eq!(v["state"]["to_move"], "B");
    assert_eq!(v["board"]["cells"].as_array().unwrap().len(), 9);
}

#[tokio::test]
async fn full_game_against_greedy() {
    let app = app();
    let (_, mut v) = call(&app, "POST", "/games", Some(json!({"random_board": {"rows": 5, "cols": 5, "k": 4, "seed": 7}, "seed": 1}))).await;
    let id = v["id"].as_str().unwrap().to_string();
    for _ in 0..200 {
        if v["status"] == "finished" {
            break;
        }
        let c = v["legal_colors"][0].clone();
        let (s, r) = call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"color": c}))).await;
        assert_eq!(s, StatusCode::OK, "{r}");
        v = r["session"].clone();
        let a: Vec<&Value> = v["state"]["territory_a"].as_array().unwrap().iter().collect();
        assert!(v["state"]["territory_b"].as_array().unwrap().iter().all(|n| !a.contains(&n)));
    }
    assert_eq!(v["status"], "finished");
    assert!(v["verdict"]["winner"].is_string());
}

#[tokio::test]
async fn errors_are_json() {
    let app = app();
    let (s, v) = call(&app, "GET", "/games/nope", None).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::NOT_FOUND, Some("not_found")));
    let (s, v) = call(&app, "POST", "/games/nope/moves", Some(json!({"color": 1}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::NOT_FOUND, Some("not_found")));
    let (s, v) = call(&app, "POST", "/games", Some(json!({"human": "A"}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::BAD_REQUEST, Some("bad_request")));
    let (s, _) = call(&app, "POST", "/games", Some(json!({"board": strip(), "extra": 1}))).await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
    let even = json!({"k": 3, "cells": [{"q": 0, "r": 0, "color": 0}, {"q": 1, "r": 0, "color": 1}], "start_a": [0, 0], "start_b": [1, 0]});
    let (s, v) = call(&app, "POST", "/games", Some(json!({"board": even}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("invalid_instance")));
}

#[tokio::test]
async fn node_cap_gives_413() {
    let app = router(AppState::new(ServiceConfig {
        node_cap: 10,
        ..ServiceConfig::default()
    }));
    let (s, v) = call(&app, "POST", "/games", Some(json!({"random_board": {"rows": 4, "cols": 4, "k": 3}}))).await;
    assert_eq!((s, v["code"].as_str()), (StatusCode::PAYLOAD_TOO_LARGE, Some("too_large")));
    let (s, _) = call(&app, "POST", "/games", Some(json!({"random_board": {"rows": 3, "cols": 3, "k": 3}}))).await;
    assert_eq!(s, StatusCode::CREATED);
}

#[tokio::test]
async fn solve_endpoint() {
    let app = app();
    let p3 = json!({"k": 2, "nodes": [{"id": "v0", "color": 0}, {"id": "v1", "color": 1}, {"id": "v2", "color": 0}],
                    "edges": [["v0", "v1"], ["v1", "v2"]]});
    let (s, v) = call(&app, "POST", "/solve", Some(json!({"instance": p3, "start": "v0"}))).await;
    assert_eq!(s, StatusCode::OK, "{v}");
    assert_eq!(v["length"], 2);
    let (s, v) = call(&app, "POST", "/solve", Some(json!({"instance": p3, "start": "v0", "method": "split"}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY, "{v}");
    let (s, _) = call(&app, "POST", "/solve", Some(json!({"instance": p3}))).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
}

#[tokio::test]
async fn transcripts_are_persisted() {
    let dir = tempfile::tempdir().unwrap();
    let app = router(AppState::new(ServiceConfig {
        transcripts: Some(dir.path().to_path_buf()),
        ..ServiceConfig::default()
    }));
    let (_, v) = call(&app, "POST", "/games", Some(json!({"board": strip()}))).await;
    let id = v["id"].as_str().unwrap();
    call(&app, "POST", &format!("/games/{id}/moves"), Some(json!({"color": 1}))).await;
    let lines = std::fs::read_to_string(dir.path().join(format!("{id}.jsonl"))).unwrap();
    let moves = honeybee::duel::parse_transcript(&lines).unwrap();
    assert_eq!(moves.len(), 1);
    assert!(dir.path().join(format!("{id}.instance.json")).exists());
}
