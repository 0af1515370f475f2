use super::plane::{PlaneKind, PlaneSpec};
use crate::error::{Error, Result};
use crate::numerics::{Complex, MapParams};
use crate::structure::{
    classify_with, locate_regions_with, FateKind, OrbitFate, RegionsConfig, StructuralRegions,
    DEFAULT_REGION_BUDGET,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const ENGINE: &str = concat!("blaschke-core ", env!("CARGO_PKG_VERSION"));

/// Class label for parameter pixels whose structural checks failed.
pub const FAILED_CLASS: &str = "failed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum PixelKind {
    NonEscaping,
    DirectEscape,
    EscapeThroughT0,
    /// Parameter pixel where the regions could not be established.
    Failed,
}

impl From<FateKind> for PixelKind {
    fn from(k: FateKind) -> Self {
        match k {
            FateKind::NonEscaping => PixelKind::NonEscaping,
            FateKind::DirectEscape => PixelKind::DirectEscape,
            FateKind::EscapeThroughT0 => PixelKind::EscapeThroughT0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PixelLabel {
    pub kind: PixelKind,
    /// Zero when the orbit did not escape.
    pub escape_time: u32,
    /// Zero when the orbit did not pass through T0.
    pub t0_entry: u32,
    /// Index into [`RasterGrid::classes`].
    pub class_id: u32,
    /// FNV-1a hash of the class label; stable across runs and platforms.
    pub itinerary_hash: u64,
    pub ambiguous: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Provenance {
    pub engine: String,
}

/// Per-pixel labels over a viewport, row-major from the top row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RasterGrid {
    pub spec: PlaneSpec,
    pub labels: Vec<PixelLabel>,
    /// Distinct class labels in order of first appearance (row-major).
    pub classes: Vec<String>,
    pub provenance: Provenance,
}

impl RasterGrid {
    #[inline]
    pub fn at(&self, row: usize, col: usize) -> &PixelLabel {
        &self.labels[row * self.spec.resolution + col]
    }

    pub fn class_name(&self, id: u32) -> &str {
        &self.classes[id as usize]
    }

    pub fn class_id(&self, name: &str) -> Option<u32> {
        self.classes.iter().position(|c| c == name).map(|k| k as u32)
    }

    /// Label of the pixel containing `z`.
    pub fn label_at(&self, z: Complex) -> Option<&PixelLabel> {
        self.spec.pixel_of(z).map(|(i, j)| self.at(i, j))
    }

    pub fn ambiguous_count(&self) -> usize {
        self.labels.iter().filter(|l| l.ambiguous).count()
    }

    pub fn failed_count(&self) -> usize {
        self.labels.iter().filter(|l| l.kind == PixelKind::Failed).count()
    }
}

/// 64-bit FNV-1a.
pub fn stable_hash(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Per-pixel classification result before class interning.
#[derive(Debug, Clone)]
pub(crate) struct Sample {
    kind: PixelKind,
    escape_time: u32,
    t0_entry: u32,
    class: String,
    ambiguous: bool,
}

impl Sample {
    pub(crate) fn from_fate(f: &OrbitFate) -> Self {
        Sample {
            kind: f.kind.into(),
            escape_time: f.escape_time.unwrap_or(0),
            t0_entry: f.t0_entry.unwrap_or(0),
            class: f.label(),
            ambiguous: f.ambiguous,
        }
    }

    fn failed() -> Self {
        Sample {
            kind: PixelKind::Failed,
            escape_time: 0,
            t0_entry: 0,
            class: FAILED_CLASS.into(),
            ambiguous: false,
        }
    }
}

fn run_rows<F>(spec: &PlaneSpec, workers: Option<usize>, pixel: F) -> Result<Vec<Sample>>
where
    F: Fn(Complex) -> Sample + Sync,
{
    let n = spec.resolution;
    let body = || -> Vec<Sample> {
        (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| pixel(spec.pixel_center(i, j))).collect::<Vec<_>>())
            .collect::<Vec<Vec<Sample>>>()
            .into_iter()
            .flatten()
            .collect()
    };
    match workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w.max(1))
                .build()
                .map_err(|e| Error::InvalidParams(format!("thread pool: {e}")))?;
            Ok(pool.install(body))
        }
        None => Ok(body()),
    }
}

fn intern(spec: PlaneSpec, samples: Vec<Sample>) -> RasterGrid {
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut classes = Vec::new();
    let labels = samples
        .into_iter()
        .map(|s| {
            let id = *index.entry(s.class.clone()).or_insert_with(|| {
                classes.push(s.class.clone());
                (classes.len() - 1) as u32
            });
            PixelLabel {
                kind: s.kind,
                escape_time: s.escape_time,
                t0_entry: s.t0_entry,
                class_id: id,
                itinerary_hash: stable_hash(&s.class),
                ambiguous: s.ambiguous,
            }
        })
        .collect();
    RasterGrid {
        spec,
        labels,
        classes,
        provenance: Provenance {
            engine: ENGINE.into(),
        },
    }
}

fn dynamical_params(spec: &PlaneSpec) -> Result<MapParams> {
    match spec.plane_kind {
        PlaneKind::Dynamical { params } => Ok(params),
        PlaneKind::Parameter { .. } => Err(Error::InvalidPlane("expected a dynamical plane".into())),
    }
}

/// Regions for a dynamical render, honouring the viewport's escape radius.
pub fn regions_for(spec: &PlaneSpec) -> Result<StructuralRegions> {
    let params = dynamical_params(spec)?;
    let cfg = RegionsConfig {
        r_escape: spec.r_escape,
        ..RegionsConfig::full()
    };
    locate_regions_with(&params, DEFAULT_REGION_BUDGET, &cfg)
}

/// Classifies every pixel centre of a dynamical plane. The result does not
/// depend on `workers` (rows are collected in order).
pub fn render_dynamical_with(spec: &PlaneSpec, workers: Option<usize>) -> Result<RasterGrid> {
    spec.validate()?;
    let regions = regions_for(spec)?;
    let samples = run_rows(spec, workers, |z| Sample::from_fate(&classify_with(z, &regions, spec.max_iter, false)))?;
    Ok(intern(*spec, samples))
}

pub fn render_dynamical(spec: &PlaneSpec) -> Result<RasterGrid> {
    render_dynamical_with(spec, None)
}

/// Fate of the free critical point `c_minus` at parameter `λ`, or `None`
/// when the structural regions cannot be established there.
pub fn parameter_fate(a: Complex, lambda: Complex, max_iter: u32, r_escape: f64) -> Option<OrbitFate> {
    let p = MapParams::perturbed(a, lambda).ok()?;
    let cfg = RegionsConfig {
        r_escape,
        ..RegionsConfig::light()
    };
    let reg = locate_regions_with(&p, DEFAULT_REGION_BUDGET, &cfg).ok()?;
    Some(classify_with(reg.c_minus, &reg, max_iter, false))
}

/// Classifies the orbit of `c_minus` for every parameter pixel. Pixels
/// where the structural checks fail get the class `failed`.
pub fn render_parameter_with(spec: &PlaneSpec, workers: Option<usize>) -> Result<RasterGrid> {
    spec.validate()?;
    let a = match spec.plane_kind {
        PlaneKind::Parameter { a } => a,
        PlaneKind::Dynamical { .. } => return Err(Error::InvalidPlane("expected a parameter plane".into())),
    };
    let samples = run_rows(spec, workers, |lambda| {
        parameter_fate(a, lambda, spec.max_iter, spec.r_escape)
            .map(|f| Sample::from_fate(&f))
            .unwrap_or_else(Sample::failed)
    })?;
    Ok(intern(*spec, samples))
}

pub fn render_parameter(spec: &PlaneSpec) -> Result<RasterGrid> {
    render_parameter_with(spec, None)
}
