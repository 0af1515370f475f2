use super::components::{label_components, ComponentMap};
use super::plane::PlaneKind;
use super::render::{PixelKind, PixelLabel, RasterGrid};
use crate::error::{Error, Result};
use serde::Serialize;
use std::str::FromStr;

/// Escape times at or above this are drawn fully yellow.
const SLOW_ESCAPE: f64 = 48.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Palette {
    /// Green for bounded orbits, red (fast) to yellow (slow) for escaping ones.
    #[default]
    Escape,
    /// One colour per class label.
    Classes,
}

impl FromStr for Palette {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "escape" => Ok(Palette::Escape),
            "classes" => Ok(Palette::Classes),
            other => Err(Error::InvalidParams(format!("unknown palette {other:?} (escape, classes)"))),
        }
    }
}

const GREEN: [u8; 3] = [0, 255, 0];
const GREY: [u8; 3] = [128, 128, 128];

fn escape_colour(l: &PixelLabel) -> [u8; 3] {
    match l.kind {
        PixelKind::NonEscaping => GREEN,
        PixelKind::Failed => GREY,
        PixelKind::DirectEscape | PixelKind::EscapeThroughT0 => {
            let t = ((1.0 + l.escape_time as f64).ln() / (1.0 + SLOW_ESCAPE).ln()).min(1.0);
            [255, (255.0 * t).round() as u8, 0]
        }
    }
}

fn class_colour(l: &PixelLabel) -> [u8; 3] {
    match l.kind {
        PixelKind::NonEscaping => GREEN,
        PixelKind::Failed => GREY,
        _ => {
            let h = l.itinerary_hash.to_le_bytes();
            // Keep colours away from black so outlines stay visible.
            [64 | h[0], 64 | h[1], 64 | h[2]]
        }
    }
}

/// Binary PPM (P6), top row first.
pub fn encode_image(grid: &RasterGrid, palette: Palette) -> Vec<u8> {
    let n = grid.spec.resolution;
    let header = format!("P6\n{n} {n}\n255\n");
    let mut out = Vec::with_capacity(header.len() + 3 * n * n);
    out.extend_from_slice(header.as_bytes());
    let colour = match palette {
        Palette::Escape => escape_colour,
        Palette::Classes => class_colour,
    };
    for l in &grid.labels {
        out.extend_from_slice(&colour(l));
    }
    out
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MetaSpec {
    center: [f64; 2],
    width: f64,
    resolution: usize,
    max_iter: u32,
    r_escape: f64,
    plane_kind: &'static str,
    a: [f64; 2],
    lambda: Option<[f64; 2]>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MetaComponent<'a> {
    id: usize,
    itinerary: &'a str,
    area_px: usize,
    connectivity: usize,
    truncated: bool,
    mean_radius: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Meta<'a> {
    spec: MetaSpec,
    engine: &'a str,
    components: Vec<MetaComponent<'a>>,
    ambiguous_px: usize,
}

/// JSON sidecar describing the viewport and every labelled component.
pub fn encode_meta(grid: &RasterGrid) -> Result<Vec<u8>> {
    encode_meta_with(grid, &label_components(grid))
}

/// As [`encode_meta`], reusing an existing labelling of `grid`.
pub fn encode_meta_with(grid: &RasterGrid, map: &ComponentMap) -> Result<Vec<u8>> {
    let s = &grid.spec;
    let (plane_kind, a, lambda) = match s.plane_kind {
        PlaneKind::Dynamical { params } => ("dynamical", params.a, Some([params.lambda.re, params.lambda.im])),
        PlaneKind::Parameter { a } => ("parameter", a, None),
    };
    let meta = Meta {
        spec: MetaSpec {
            center: [s.center.re, s.center.im],
            width: s.width,
            resolution: s.resolution,
            max_iter: s.max_iter,
            r_escape: s.r_escape,
            plane_kind,
            a: [a.re, a.im],
            lambda,
        },
        engine: &grid.provenance.engine,
        components: map
            .components
            .iter()
            .map(|c| MetaComponent {
                id: c.id,
                itinerary: &c.class,
                area_px: c.area_px,
                connectivity: c.connectivity,
                truncated: c.truncated,
                mean_radius: c.mean_radius,
            })
            .collect(),
        ambiguous_px: map.ambiguous_px,
    };
    serde_json::to_vec(&meta).map_err(|e| Error::Io(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::components::tests::mask_grid;

    #[test]
    fn two_by_two_ppm_layout() {
        let mut g = mask_grid(16, |x, _| x < 0.0);
        g.spec.resolution = 2;
        g.labels.truncate(4);
        g.labels[0].kind = PixelKind::NonEscaping;
        g.labels[1].kind = PixelKind::Failed;
        g.labels[2].kind = PixelKind::DirectEscape;
        g.labels[2].escape_time = 0;
        g.labels[3].kind = PixelKind::EscapeThroughT0;
        g.labels[3].escape_time = 48;
        let bytes = encode_image(&g, Palette::Escape);
        assert_eq!(bytes.len(), 11 + 12);
        assert_eq!(&bytes[..11], b"P6\n2 2\n255\n");
        assert_eq!(&bytes[11..], &[0, 255, 0, 128, 128, 128, 255, 0, 0, 255, 255, 0]);
    }

    #[test]
    fn meta_schema_fields() {
        let g = mask_grid(32, |x, y| (0.1..0.5).contains(&(x * x + y * y)));
        let v: serde_json::Value = serde_json::from_slice(&encode_meta(&g).unwrap()).unwrap();
        for key in ["center", "width", "resolution", "maxIter", "rEscape", "planeKind", "a", "lambda"] {
            assert!(v["spec"].get(key).is_some(), "missing {key}");
        }
        assert_eq!(v["ambiguousPx"], 0);
        let ring = v["components"].as_array().unwrap().iter().find(|c| c["itinerary"] == "bounded").unwrap();
        assert_eq!(ring["connectivity"], 2);
        assert_eq!(ring["truncated"], false);
    }

    #[test]
    fn palette_names() {
        assert_eq!("escape".parse::<Palette>().unwrap(), Palette::Escape);
        assert!("rainbow".parse::<Palette>().is_err());
    }
}
