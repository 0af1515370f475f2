//! Orbit classification against the regions T0, A0, D0 and the immediate
//! basin of infinity, with the supporting geometry: critical points, curve
//! preimages, real-axis dynamics and the Riemann–Hurwitz count.

mod critical;
mod curves;
mod fate;
mod itinerary;
mod real_line;
mod regions;

pub use critical::{
    critical_minus, critical_set, ring_critical_seeds, ring_zero_seeds, unperturbed_free_criticals,
    CriticalResiduals, CriticalSet,
};
pub use curves::{circle, preimage_curve, winding_number, CurvePreimage, PreimageComponent, Side};
pub use fate::{classify_orbit, classify_with, FateKind, OrbitFate, Terminal};
pub use itinerary::{itinerary_order, Itinerary, Order, OrderKey};
pub use real_line::{real_line_state, real_map, real_params, solve_increasing, RealLineState};
pub use regions::{
    escapes_directly, geometric_mean_radius, hausdorff, locate_regions, locate_regions_with,
    straight_annulus, RadialProfile, RegionsConfig, StructuralRegions, DEFAULT_REGION_BUDGET,
    DEFAULT_R_ESCAPE,
};

/// Connectivity of a proper preimage: `m_U = k (m_V - 2) + r + 2` for a
/// degree-`k` map onto a domain of connectivity `m_V` with `r` critical
/// points (with multiplicity) in the preimage.
pub fn riemann_hurwitz(m_v: u32, k: u32, r: u32) -> i64 {
    k as i64 * (m_v as i64 - 2) + r as i64 + 2
}
