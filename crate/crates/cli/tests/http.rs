use axum::body::{to_bytes, Body};
use axum::http::{header, Request, StatusCode};
use blaschke_cli::server::{router, PPM_TYPE};
use serde_json::Value;
use tower::ServiceExt;

const FIG_A: &str = "a=0.5i&lambda=-1.9e-6%2B3.15e-5i";

async fn get(uri: &str) -> (StatusCode, Option<String>, Vec<u8>) {
    let resp = router()
        .oneshot(Request::get(uri).body(Body::empty()).unwrap())
        .await
        .unwrap();
    let status = resp.status();
    let ctype = resp
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_string());
    let body = to_bytes(resp.into_body(), usize::MAX).await.unwrap().to_vec();
    (status, ctype, body)
}

fn json(body: &[u8]) -> Value {
    serde_json::from_slice(body).unwrap()
}

#[tokio::test]
async fn health_is_ok() {
    let (status, _, body) = get("/api/v1/health").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(body, b"ok");
}

#[tokio::test]
async fn unperturbed_critical_point() {
    let (status, _, body) = get("/api/v1/critical?a=0.5&lambda=0").await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    let cm = v["cMinus"][0].as_f64().unwrap();
    assert!((cm - 0.381966).abs() < 1e-6, "{v}");
    assert_eq!(v["ringCriticals"].as_array().unwrap().len(), 0);
}

#[tokio::test]
async fn perturbed_critical_set_has_rings() {
    let (status, _, body) = get(&format!("/api/v1/critical?{FIG_A}")).await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert_eq!(v["zerosRing"].as_array().unwrap().len(), 5);
}

#[tokio::test]
async fn dynamical_ppm_is_deterministic() {
    let uri = format!("/api/v1/dynamical?{FIG_A}&res=64&w=3");
    let (status, ctype, first) = get(&uri).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some(PPM_TYPE));
    assert!(first.starts_with(b"P6\n64 64\n255\n"));
    assert_eq!(first.len(), 13 + 64 * 64 * 3);
    let (_, _, second) = get(&uri).await;
    assert_eq!(first, second);
}

#[tokio::test]
async fn dynamical_json_metadata() {
    let (status, ctype, body) = get(&format!("/api/v1/dynamical?{FIG_A}&res=32&format=json")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("application/json"));
    let v = json(&body);
    assert_eq!(v["spec"]["resolution"], 32);
    assert!(v["components"].as_array().is_some_and(|c| !c.is_empty()));
}

#[tokio::test]
async fn parameter_tile() {
    let (status, ctype, body) = get("/api/v1/parameter?a=0.5i&cx=2e-5&cy=2e-5&w=4e-6&res=16").await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some(PPM_TYPE));
    assert!(body.starts_with(b"P6\n16 16\n255\n"));
}

#[tokio::test]
async fn orbit_reports_fate() {
    let (status, _, body) = get(&format!("/api/v1/orbit?{FIG_A}&x=20&y=0")).await;
    assert_eq!(status, StatusCode::OK);
    let v = json(&body);
    assert_eq!(v["label"], "direct");
    assert_eq!(v["fate"]["escapeTime"], 0);
    assert_eq!(v["orbit"].as_array().unwrap().len(), 1);
}

#[tokio::test]
async fn resolution_cap_is_a_bad_request() {
    let (status, _, body) = get(&format!("/api/v1/dynamical?{FIG_A}&res=32768")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json(&body)["field"], "res");
}

#[tokio::test]
async fn malformed_fields_are_named() {
    for (query, field) in [
        ("a=0.5i&lambda=oops", "lambda"),
        ("a=2&lambda=1e-6", "a"),
        ("lambda=1e-6", "a"),
        ("a=0.5i&lambda=1e-6&w=-1", "w"),
        ("a=0.5i&lambda=1e-6&maxIter=x", "maxIter"),
        ("a=0.5i&lambda=0", "lambda"),
    ] {
        let (status, _, body) = get(&format!("/api/v1/dynamical?{query}")).await;
        assert_eq!(status, StatusCode::BAD_REQUEST, "{query}");
        assert_eq!(json(&body)["field"], field, "{query}");
    }
}

#[tokio::test]
async fn failed_precondition_is_unprocessable() {
    let (status, _, body) = get("/api/v1/orbit?a=0.5&lambda=1e-4&x=0.3&y=0").await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let v = json(&body);
    assert!(v["check"].as_str().is_some_and(|c| !c.is_empty()), "{v}");
}
