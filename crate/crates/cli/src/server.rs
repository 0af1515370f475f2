//! Stateless HTTP API over the rendering and classification engine.

use crate::complex::parse_complex;
use axum::extract::Query;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::raster::{
    encode_image, encode_meta, render_dynamical, render_parameter, Palette, PlaneSpec, MAX_RESOLUTION,
    MIN_RESOLUTION,
};
use blaschke_core::structure::{classify_with, critical_set, locate_regions, DEFAULT_REGION_BUDGET};
use blaschke_core::Error;
use serde_json::json;
use std::collections::HashMap;

pub const PPM_TYPE: &str = "image/x-portable-pixmap";

const DEFAULT_DYN_WIDTH: f64 = 3.0;
const DEFAULT_PARAM_WIDTH: f64 = 1.4e-4;
const DEFAULT_RES: usize = 512;
const DEFAULT_MAX_ITER: u32 = 2000;
const MAX_ITER_CAP: u32 = 1_000_000;

pub fn router() -> Router {
    Router::new()
        .route("/api/v1/health", get(|| async { "ok" }))
        .route("/api/v1/dynamical", get(dynamical))
        .route("/api/v1/parameter", get(parameter))
        .route("/api/v1/orbit", get(orbit))
        .route("/api/v1/critical", get(critical))
}

pub async fn serve(port: u16) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(("0.0.0.0", port)).await?;
    eprintln!("listening on {}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

#[derive(Debug)]
pub enum ApiError {
    BadField { field: &'static str, message: String },
    Precondition(String),
    Engine(Error),
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let (status, body) = match self {
            ApiError::BadField { field, message } => {
                (StatusCode::BAD_REQUEST, json!({"error": message, "field": field}))
            }
            ApiError::Precondition(check) => (
                StatusCode::UNPROCESSABLE_ENTITY,
                json!({"error": format!("precondition failed: {check}"), "check": check}),
            ),
            ApiError::Engine(e) => (StatusCode::INTERNAL_SERVER_ERROR, json!({"error": e.to_string()})),
        };
        (status, Json(body)).into_response()
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition { check } => ApiError::Precondition(check),
            other => ApiError::Engine(other),
        }
    }
}

type Params = HashMap<String, String>;

fn bad(field: &'static str, message: impl Into<String>) -> ApiError {
    ApiError::BadField {
        field,
        message: message.into(),
    }
}

fn complex_field(q: &Params, field: &'static str, default: Option<Complex>) -> Result<Complex, ApiError> {
    match (q.get(field), default) {
        (Some(s), _) => parse_complex(s).map_err(|e| bad(field, e)),
        (None, Some(d)) => Ok(d),
        (None, None) => Err(bad(field, format!("missing required parameter {field}"))),
    }
}

fn real_field(q: &Params, field: &'static str, default: f64) -> Result<f64, ApiError> {
    let Some(s) = q.get(field) else { return Ok(default) };
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(bad(field, format!("{field} must be a finite number, got {s:?}"))),
    }
}

fn int_field<T: std::str::FromStr + PartialOrd + Copy + std::fmt::Display>(
    q: &Params,
    field: &'static str,
    default: T,
    lo: T,
    hi: T,
) -> Result<T, ApiError> {
    let v = match q.get(field) {
        Some(s) => s
            .parse::<T>()
            .map_err(|_| bad(field, format!("{field} must be an integer, got {s:?}")))?,
        None => default,
    };
    if v < lo || v > hi {
        return Err(bad(field, format!("{field} = {v} outside [{lo}, {hi}]")));
    }
    Ok(v)
}

fn disk_param(q: &Params) -> Result<Complex, ApiError> {
    let a = complex_field(q, "a", None)?;
    if !(a.norm() > 0.0 && a.norm() < 1.0) {
        return Err(bad("a", format!("a must satisfy 0 < |a| < 1, got |a| = {}", a.norm())));
    }
    Ok(a)
}

fn map_params(q: &Params) -> Result<MapParams, ApiError> {
    let a = disk_param(q)?;
    let lambda = complex_field(q, "lambda", None)?;
    MapParams::perturbed(a, lambda).map_err(|e| bad("lambda", e.to_string()))
}

/// Parsed viewport fields shared by both raster endpoints.
struct Viewport {
    center: Complex,
    width: f64,
    res: usize,
    max_iter: u32,
    json: bool,
}

fn viewport(q: &Params, default_width: f64) -> Result<Viewport, ApiError> {
    let center = Complex::new(real_field(q, "cx", 0.0)?, real_field(q, "cy", 0.0)?);
    let width = real_field(q, "w", default_width)?;
    if width <= 0.0 {
        return Err(bad("w", "w must be positive"));
    }
    let json = match q.get("format").map(String::as_str) {
        None | Some("ppm") => false,
        Some("json") => true,
        Some(other) => return Err(bad("format", format!("format must be ppm or json, got {other:?}"))),
    };
    Ok(Viewport {
        center,
        width,
        res: int_field(q, "res", DEFAULT_RES, MIN_RESOLUTION, MAX_RESOLUTION)?,
        max_iter: int_field(q, "maxIter", DEFAULT_MAX_ITER, 1, MAX_ITER_CAP)?,
        json,
    })
}

async fn blocking<T: Send + 'static>(f: impl FnOnce() -> Result<T, ApiError> + Send + 'static) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .unwrap_or_else(|e| Err(ApiError::Engine(Error::NotFound(format!("worker failed: {e}")))))
}

fn raster_response(grid: &blaschke_core::raster::RasterGrid, json: bool) -> Result<Response, ApiError> {
    if json {
        let meta = encode_meta(grid)?;
        Ok(([(header::CONTENT_TYPE, "application/json")], meta).into_response())
    } else {
        Ok(([(header::CONTENT_TYPE, PPM_TYPE)], encode_image(grid, Palette::Escape)).into_response())
    }
}

async fn dynamical(Query(q): Query<Params>) -> Result<Response, ApiError> {
    let p = map_params(&q)?;
    let v = viewport(&q, DEFAULT_DYN_WIDTH)?;
    let spec = PlaneSpec::dynamical(p, v.center, v.width, v.res, v.max_iter);
    blocking(move || raster_response(&render_dynamical(&spec)?, v.json)).await
}

async fn parameter(Query(q): Query<Params>) -> Result<Response, ApiError> {
    let a = disk_param(&q)?;
    let v = viewport(&q, DEFAULT_PARAM_WIDTH)?;
    let spec = PlaneSpec::parameter(a, v.center, v.width, v.res, v.max_iter);
    blocking(move || raster_response(&render_parameter(&spec)?, v.json)).await
}

async fn orbit(Query(q): Query<Params>) -> Result<Response, ApiError> {
    let p = map_params(&q)?;
    let z = Complex::new(real_field(&q, "x", 0.0)?, real_field(&q, "y", 0.0)?);
    let max_iter = int_field(&q, "maxIter", DEFAULT_MAX_ITER, 1, MAX_ITER_CAP)?;
    blocking(move || {
        let reg = locate_regions(&p, DEFAULT_REGION_BUDGET)?;
        let mut fate = classify_with(z, &reg, max_iter, true);
        let orbit = fate.orbit.take().unwrap_or_default();
        Ok(Json(json!({
            "a": p.a,
            "lambda": p.lambda,
            "z": z,
            "orbit": orbit,
            "label": fate.label(),
            "fate": fate,
        }))
        .into_response())
    })
    .await
}

async fn critical(Query(q): Query<Params>) -> Result<Response, ApiError> {
    let a = disk_param(&q)?;
    let lambda = complex_field(&q, "lambda", None)?;
    let p = if lambda == Complex::new(0.0, 0.0) {
        MapParams::unperturbed(a)
    } else {
        MapParams::perturbed(a, lambda)
    }
    .map_err(|e| bad("lambda", e.to_string()))?;
    blocking(move || Ok(Json(critical_set(&p)?).into_response())).await
}
