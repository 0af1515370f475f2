use crate::views::{overview_spec, ray_labels, vote_for, DEFAULT_MAX_ITER, DEFAULT_RES};
use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::raster::{regions_for, PlaneSpec};
use blaschke_core::structure::{Itinerary, StructuralRegions};
use blaschke_core::{Error, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Deepest nested annulus considered.
pub const MAX_NESTING: usize = 64;

/// Label of the nested annulus `A_n`.
pub fn nested_label(n: usize) -> String {
    format!("{}:A0", Itinerary::zeros(n))
}

/// Minimal `n` such that `z` lies in the bounded hull of `A_n`, by a ray
/// vote on a viewport covering the basin boundary.
pub fn nesting_index(reg: &StructuralRegions, spec: &PlaneSpec, z: Complex) -> Result<usize> {
    let rays = ray_labels(reg, spec, z).ok_or_else(|| Error::InvalidPlane(format!("{z} outside the viewport")))?;
    for n in 0..=MAX_NESTING {
        if vote_for(&rays, &nested_label(n)).verdict()? {
            return Ok(n);
        }
    }
    Err(Error::NotFound(format!("no nested annulus A_n with n <= {MAX_NESTING} surrounds {z}")))
}

fn regions(a: Complex, lambda: Complex, res: usize, max_iter: u32) -> Result<(StructuralRegions, PlaneSpec)> {
    let p = MapParams::perturbed(a, lambda)?;
    let probe = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 3.0, res, max_iter);
    let reg = regions_for(&probe)?;
    let spec = overview_spec(p, &reg, res, max_iter);
    Ok((reg, spec))
}

/// `r(a, λ)`: the first nested annulus whose bounded hull contains
/// `c_minus`. A split vote is retried once at twice the resolution.
pub fn compute_r(a: Complex, lambda: Complex) -> Result<usize> {
    compute_r_at(a, lambda, DEFAULT_RES)
}

pub fn compute_r_at(a: Complex, lambda: Complex, res: usize) -> Result<usize> {
    let (reg, spec) = regions(a, lambda, res, DEFAULT_MAX_ITER)?;
    match nesting_index(&reg, &spec, reg.c_minus) {
        Err(Error::InconclusiveRay { .. }) => {
            let (reg, spec) = regions(a, lambda, 2 * res, DEFAULT_MAX_ITER)?;
            nesting_index(&reg, &spec, reg.c_minus)
        }
        other => other,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RSample {
    pub lambda: Complex,
    /// `None` when the sample was excluded.
    pub r: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RtsRecord {
    pub a: Complex,
    pub rho: f64,
    /// Maximum of `r` on the circle `|λ| = ρ`.
    pub s: Option<usize>,
    /// Minimum of `r` over the whole radial grid.
    pub t: Option<usize>,
    pub samples: Vec<RSample>,
    /// Samples dropped for failed preconditions or undecided votes.
    pub excluded: usize,
}

impl RtsRecord {
    pub fn circle(&self) -> impl Iterator<Item = &RSample> {
        self.samples.iter().filter(move |s| (s.lambda.norm() / self.rho - 1.0).abs() < 1e-9)
    }
}

/// Samples `r` at `n_angles` equispaced points on each circle
/// `|λ| = ρ 2^-k`, `k < n_radii`. The grid for `ρ/2` is a subset of the
/// grid for `ρ`, so `t` can only grow as `ρ` shrinks.
pub fn compute_s_t(a: Complex, rho: f64, n_angles: usize, n_radii: usize) -> Result<RtsRecord> {
    compute_s_t_at(a, rho, n_angles, n_radii, DEFAULT_RES)
}

pub fn compute_s_t_at(a: Complex, rho: f64, n_angles: usize, n_radii: usize, res: usize) -> Result<RtsRecord> {
    if n_angles == 0 || n_radii == 0 || !(rho > 0.0) {
        return Err(Error::InvalidParams("compute_s_t needs rho > 0 and a non-empty grid".into()));
    }
    let lambdas: Vec<Complex> = (0..n_radii)
        .flat_map(|k| {
            let r = rho * 0.5f64.powi(k as i32);
            (0..n_angles).map(move |j| Complex::from_polar(r, std::f64::consts::TAU * j as f64 / n_angles as f64))
        })
        .collect();
    let samples: Vec<RSample> = lambdas
        .par_iter()
        .map(|&lambda| RSample {
            lambda,
            r: compute_r_at(a, lambda, res).ok(),
        })
        .collect();
    let excluded = samples.iter().filter(|s| s.r.is_none()).count();
    let s = samples[..n_angles].iter().filter_map(|x| x.r).max();
    let t = samples.iter().filter_map(|x| x.r).min();
    Ok(RtsRecord {
        a,
        rho,
        s,
        t,
        samples,
        excluded,
    })
}

/// `s` and `t` at `ρ, ρ/2, ..., ρ/2^halvings`, sharing one sample grid.
pub fn s_t_halvings(
    a: Complex,
    rho: f64,
    halvings: usize,
    n_angles: usize,
    n_radii: usize,
    res: usize,
) -> Result<Vec<RtsRecord>> {
    let all = compute_s_t_at(a, rho, n_angles, n_radii + halvings, res)?;
    Ok((0..=halvings)
        .map(|h| {
            let samples = all.samples[h * n_angles..(h + n_radii) * n_angles].to_vec();
            RtsRecord {
                a,
                rho: rho * 0.5f64.powi(h as i32),
                s: samples[..n_angles].iter().filter_map(|x| x.r).max(),
                t: samples.iter().filter_map(|x| x.r).min(),
                excluded: samples.iter().filter(|s| s.r.is_none()).count(),
                samples,
            }
        })
        .collect())
}
