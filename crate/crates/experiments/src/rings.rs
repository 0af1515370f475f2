use crate::views::{lazy_containment, overview_spec};
use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::raster::{parameter_fate, regions_for, PlaneSpec, FAILED_CLASS};
use blaschke_core::structure::{itinerary_order, Itinerary, Order};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Grids with fewer angles than this give low-confidence results.
pub const MIN_CONFIDENT_ANGLES: usize = 16;
const MAX_ITER: u32 = 2000;
const RAY_RES: usize = 1024;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RingBand {
    /// Label of the critical component, e.g. `01:A0`.
    pub itinerary: String,
    pub r_inner: f64,
    pub r_outer: f64,
    /// Rows in which every sampled angle carries the label.
    pub full_rows: usize,
    /// Whether every sampled angle carries the label somewhere in the band.
    pub complete: bool,
    /// Samples in the band's rows whose critical orbit ends in D0.
    pub d0_samples: usize,
    /// Whether the labelled component surrounds 0, checked by rays at one
    /// representative parameter; `None` when undecided.
    pub surrounds_origin: Option<bool>,
}

impl RingBand {
    pub fn is_ring(&self) -> bool {
        self.complete && self.surrounds_origin == Some(true)
    }

    fn mid(&self) -> f64 {
        0.5 * (self.r_inner + self.r_outer)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BandOrdering {
    /// Pairs of rings whose itineraries are ordered.
    pub decided_pairs: usize,
    /// Decided pairs where the surrounding itinerary sits at smaller `|λ|`.
    pub agreeing: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RingScan {
    pub a: Complex,
    pub rho_max: f64,
    pub n_radii: usize,
    pub n_angles: usize,
    pub low_confidence: bool,
    pub failed_samples: usize,
    pub bands: Vec<RingBand>,
    pub ordering: BandOrdering,
}

impl RingScan {
    pub fn rings(&self) -> impl Iterator<Item = &RingBand> {
        self.bands.iter().filter(|b| b.is_ring())
    }
}

fn radius(rho_max: f64, n_radii: usize, k: usize) -> f64 {
    rho_max * (k as f64 + 1.0) / n_radii as f64
}

fn angle(n_angles: usize, j: usize) -> f64 {
    std::f64::consts::TAU * j as f64 / n_angles as f64
}

fn word_of(label: &str) -> Option<Itinerary> {
    label.strip_suffix(":A0").and_then(|w| w.parse().ok())
}

fn surrounds_origin(a: Complex, lambda: Complex, label: &str) -> Option<bool> {
    let p = MapParams::perturbed(a, lambda).ok()?;
    let probe = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 3.0, RAY_RES, MAX_ITER);
    let reg = regions_for(&probe).ok()?;
    let spec = overview_spec(p, &reg, RAY_RES, MAX_ITER);
    lazy_containment(&reg, &spec, Complex::new(0.0, 0.0), label)?.verdict().ok()
}

/// Labels `c_minus` on the polar grid `|λ| = ρ_max (k+1)/n_radii`,
/// `arg λ = 2πj/n_angles`, and reports maximal runs of radii in which every
/// angle sees the same A0-terminated itinerary at least once.
pub fn detect_rings(a: Complex, rho_max: f64, n_radii: usize, n_angles: usize) -> RingScan {
    let labels: Vec<String> = (0..n_radii * n_angles)
        .into_par_iter()
        .map(|q| {
            let lambda = Complex::from_polar(radius(rho_max, n_radii, q / n_angles), angle(n_angles, q % n_angles));
            match parameter_fate(a, lambda, MAX_ITER, blaschke_core::structure::DEFAULT_R_ESCAPE) {
                Some(f) if !f.ambiguous => f.label(),
                Some(_) => String::new(),
                None => FAILED_CLASS.into(),
            }
        })
        .collect();
    let at = |k: usize, j: usize| labels[k * n_angles + j].as_str();
    let failed_samples = labels.iter().filter(|l| *l == FAILED_CLASS).count();

    let mut candidates: BTreeMap<&str, ()> = BTreeMap::new();
    for l in &labels {
        if l.ends_with(":A0") {
            candidates.insert(l, ());
        }
    }

    let mut bands = Vec::new();
    for &label in candidates.keys() {
        let mut k = 0;
        while k < n_radii {
            if !(0..n_angles).any(|j| at(k, j) == label) {
                k += 1;
                continue;
            }
            let start = k;
            while k < n_radii && (0..n_angles).any(|j| at(k, j) == label) {
                k += 1;
            }
            let rows = start..k;
            let covered = (0..n_angles).all(|j| rows.clone().any(|r| at(r, j) == label));
            if !covered {
                continue;
            }
            let count = |r: usize| (0..n_angles).filter(|&j| at(r, j) == label).count();
            let full_rows = rows.clone().filter(|&r| count(r) == n_angles).count();
            let d0_samples = rows
                .clone()
                .flat_map(|r| (0..n_angles).map(move |j| (r, j)))
                .filter(|&(r, j)| at(r, j).ends_with(":D0"))
                .count();
            let best = rows.clone().max_by_key(|&r| (count(r), std::cmp::Reverse(r))).unwrap();
            let j = (0..n_angles).find(|&j| at(best, j) == label).unwrap();
            let rep = Complex::from_polar(radius(rho_max, n_radii, best), angle(n_angles, j));
            bands.push(RingBand {
                itinerary: label.to_string(),
                r_inner: radius(rho_max, n_radii, start),
                r_outer: radius(rho_max, n_radii, k - 1),
                full_rows,
                complete: true,
                d0_samples,
                surrounds_origin: surrounds_origin(a, rep, label),
            });
        }
    }
    bands.sort_by(|x, y| x.r_inner.total_cmp(&y.r_inner).then(x.itinerary.cmp(&y.itinerary)));

    let ordering = band_ordering(&bands);
    RingScan {
        a,
        rho_max,
        n_radii,
        n_angles,
        low_confidence: n_angles < MIN_CONFIDENT_ANGLES,
        failed_samples,
        bands,
        ordering,
    }
}

/// Compares ring positions with the itinerary order: when `A_Δ'` surrounds
/// `A_Δ`, the ring of `Δ'` lies closer to `λ = 0`.
pub fn band_ordering(bands: &[RingBand]) -> BandOrdering {
    let rings: Vec<(&RingBand, Itinerary)> = bands
        .iter()
        .filter(|b| b.is_ring())
        .filter_map(|b| word_of(&b.itinerary).map(|w| (b, w)))
        .collect();
    let mut decided_pairs = 0;
    let mut agreeing = 0;
    for (i, (b1, w1)) in rings.iter().enumerate() {
        for (b2, w2) in &rings[i + 1..] {
            let order = itinerary_order(w1.clone(), w2.clone());
            if order == Order::Incomparable {
                continue;
            }
            decided_pairs += 1;
            // Precedes: A_{w2} surrounds A_{w1}, so its ring is nearer 0.
            let inner_second = b2.mid() < b1.mid();
            if (order == Order::Precedes) == inner_second {
                agreeing += 1;
            }
        }
    }
    BandOrdering {
        decided_pairs,
        agreeing,
    }
}
