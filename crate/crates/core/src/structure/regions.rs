use super::critical::critical_set;
use crate::error::{Error, Result};
use crate::numerics::{Complex, Family, MapParams};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

pub const DEFAULT_R_ESCAPE: f64 = 10.0;
pub const DEFAULT_REGION_BUDGET: u32 = 500;

/// Sampling density for [`locate_regions`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RegionsConfig {
    pub r_escape: f64,
    /// Angles at which the radial boundaries are sampled.
    pub n_angles: usize,
    pub bisect_steps: u32,
    /// Multiplicative step of the radial marches.
    pub march_factor: f64,
    /// Straight-annulus samples used by the precondition check.
    pub annulus_angles: usize,
    pub annulus_radii: usize,
}

impl RegionsConfig {
    /// Dense sampling for single dynamical-plane studies.
    pub fn full() -> Self {
        RegionsConfig {
            r_escape: DEFAULT_R_ESCAPE,
            n_angles: 256,
            bisect_steps: 40,
            march_factor: 1.01,
            annulus_angles: 64,
            annulus_radii: 5,
        }
    }

    /// Coarse sampling for per-pixel use in the parameter plane.
    pub fn light() -> Self {
        RegionsConfig {
            r_escape: DEFAULT_R_ESCAPE,
            n_angles: 24,
            bisect_steps: 18,
            march_factor: 1.04,
            annulus_angles: 16,
            annulus_radii: 3,
        }
    }
}

impl Default for RegionsConfig {
    fn default() -> Self {
        RegionsConfig::full()
    }
}

/// A closed curve around the origin given by its radius at equally spaced
/// angles, starting at angle 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub radii: Vec<f64>,
}

impl RadialProfile {
    pub fn angle(&self, k: usize) -> f64 {
        TAU * k as f64 / self.radii.len() as f64
    }

    /// Radius at angle `theta`, linearly interpolated between samples.
    pub fn at(&self, theta: f64) -> f64 {
        let n = self.radii.len();
        let t = theta.rem_euclid(TAU) / TAU * n as f64;
        let k = (t.floor() as usize).min(n - 1);
        let frac = t - k as f64;
        self.radii[k] * (1.0 - frac) + self.radii[(k + 1) % n] * frac
    }

    pub fn min(&self) -> f64 {
        self.radii.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.radii.iter().cloned().fold(0.0, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.radii.iter().sum::<f64>() / self.radii.len() as f64
    }

    pub fn points(&self) -> Vec<Complex> {
        (0..self.radii.len())
            .map(|k| Complex::from_polar(self.radii[k], self.angle(k)))
            .collect()
    }

    /// Hausdorff distance between the two sampled curves.
    pub fn hausdorff(&self, other: &RadialProfile) -> f64 {
        hausdorff(&self.points(), &other.points())
    }
}

/// Symmetric Hausdorff distance between two finite point sets.
pub fn hausdorff(a: &[Complex], b: &[Complex]) -> f64 {
    let one_sided = |x: &[Complex], y: &[Complex]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_sided(a, b).max(one_sided(b, a))
}

/// The regions around which every escaping orbit is organised: the
/// immediate basin of infinity, the central disk T0 mapped onto it, the
/// annulus A0 mapped onto T0, and the disk D0 around the zero `z0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StructuralRegions {
    pub params: MapParams,
    pub r_escape: f64,
    /// Iteration budget of the membership tests.
    pub budget: u32,
    pub astar_boundary: RadialProfile,
    pub a0_inner: RadialProfile,
    pub a0_outer: RadialProfile,
    pub t0_boundary: RadialProfile,
    /// Radius of a disk about 0 contained in T0.
    pub t0_radius: f64,
    pub d0_center: Complex,
    pub d0_radius: f64,
    pub c_minus: Complex,
    /// `((|λ|/(2|a|))^(1/5), (2|λ|/|a|)^(1/5))`.
    pub straight_annulus: (f64, f64),
}

/// Inner and outer radius of the straight annulus contained in A0.
pub fn straight_annulus(a: Complex, lambda: Complex) -> (f64, f64) {
    let q = lambda.norm() / a.norm();
    ((q / 2.0).powf(0.2), (2.0 * q).powf(0.2))
}

/// Radius `(|λ|/|a|)^(1/5)` of the circle through the middle of the
/// straight annulus.
pub fn geometric_mean_radius(a: Complex, lambda: Complex) -> f64 {
    (lambda.norm() / a.norm()).powf(0.2)
}

/// Whether the orbit of `z` leaves the disk of radius `r_escape` without
/// first entering the disk of radius `guard`. Orbits that do neither within
/// `budget` steps count as not escaping.
#[inline]
pub fn escapes_directly(p: &MapParams, z: Complex, guard: f64, r_escape: f64, budget: u32) -> bool {
    let (g2, r2) = (guard * guard, r_escape * r_escape);
    let mut z = z;
    for _ in 0..=budget {
        let m = z.norm_sqr();
        if !(m <= r2) {
            return true;
        }
        if m < g2 {
            return false;
        }
        z = p.eval_raw(z);
    }
    false
}

impl StructuralRegions {
    /// Radius below which an orbit point may lie in T0.
    pub fn guard_radius(&self) -> f64 {
        self.straight_annulus.0
    }

    pub fn escapes_directly(&self, z: Complex) -> bool {
        escapes_directly(&self.params, z, self.guard_radius(), self.r_escape, self.budget)
    }

    /// Exact T0 membership up to the budget: T0 is the only preimage of the
    /// basin of infinity inside the guard disk.
    pub fn in_t0(&self, z: Complex) -> bool {
        z.norm() < self.guard_radius() && self.escapes_directly(self.params.eval_raw(z))
    }

    /// Membership in A0 or D0, the two preimages of T0.
    pub fn maps_into_t0(&self, z: Complex) -> bool {
        self.in_t0(self.params.eval_raw(z))
    }

    /// Membership in A0, using that D0 lies outside the sampled A0 band.
    pub fn in_a0(&self, z: Complex) -> bool {
        z.norm() <= self.a0_outer.max() * 1.05 && self.maps_into_t0(z)
    }
}

fn bisect(mut inside: f64, mut outside: f64, steps: u32, test: impl Fn(f64) -> bool) -> (f64, f64) {
    for _ in 0..steps {
        let mid = 0.5 * (inside + outside);
        if test(mid) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    (inside, outside)
}

/// Marches from `start` (where `test` holds) by factor `f` until it fails,
/// then bisects. Returns the boundary radius, or `None` if `limit` is
/// passed first.
fn radial_edge(start: f64, f: f64, limit: f64, steps: u32, test: impl Fn(f64) -> bool) -> Option<f64> {
    let mut r = start;
    loop {
        let next = r * f;
        if (f > 1.0 && next > limit) || (f < 1.0 && next < limit) {
            return None;
        }
        if !test(next) {
            let (i, o) = bisect(r, next, steps, &test);
            return Some(0.5 * (i + o));
        }
        r = next;
    }
}

/// Locates the structural regions for `p` and checks that they have the
/// shape the small-λ theory predicts. A failed check is reported as a
/// precondition failure: the parameter lies outside the range where the
/// itinerary classification is meaningful.
pub fn locate_regions(p: &MapParams, budget: u32) -> Result<StructuralRegions> {
    locate_regions_with(p, budget, &RegionsConfig::full())
}

pub fn locate_regions_with(p: &MapParams, budget: u32, cfg: &RegionsConfig) -> Result<StructuralRegions> {
    p.validate()?;
    if p.family != Family::PerturbedBlaschke {
        return Err(Error::InvalidParams(
            "structural regions exist only for the perturbed Blaschke family".into(),
        ));
    }
    if cfg.n_angles < 4 || cfg.bisect_steps == 0 || !(cfg.march_factor > 1.0) || !(cfg.r_escape > 2.0) {
        return Err(Error::InvalidParams("degenerate regions configuration".into()));
    }
    let crit = critical_set(p)
        .map_err(|e| Error::precondition(format!("critical points not located: {e}")))?;
    let (r_in, r_out) = straight_annulus(p.a, p.lambda);
    let r_gm = geometric_mean_radius(p.a, p.lambda);
    let n = cfg.n_angles;
    let dir = |k: usize| Complex::from_polar(1.0, TAU * k as f64 / n as f64);
    let esc = |z: Complex| escapes_directly(p, z, r_in, cfg.r_escape, budget);
    let in_t0 = |z: Complex| z.norm() < r_in && esc(p.eval_raw(z));
    let maps_t0 = |z: Complex| in_t0(p.eval_raw(z));

    // Straight annulus: every sample must map into T0.
    for j in 0..cfg.annulus_radii {
        let r = r_in * (r_out / r_in).powf((j as f64 + 0.5) / cfg.annulus_radii as f64);
        for k in 0..cfg.annulus_angles {
            let z = Complex::from_polar(r, TAU * k as f64 / cfg.annulus_angles as f64);
            if !maps_t0(z) {
                return Err(Error::precondition(format!(
                    "straight annulus point {z} does not map into T0"
                )));
            }
        }
    }
    if !esc(crit.c_plus) {
        return Err(Error::precondition("c_plus is not in the immediate basin of infinity"));
    }
    for c in &crit.ring_criticals {
        if !maps_t0(*c) {
            return Err(Error::precondition(format!("ring critical point {c} is not in A0")));
        }
    }

    let mut astar = Vec::with_capacity(n);
    let mut outer = Vec::with_capacity(n);
    let mut inner = Vec::with_capacity(n);
    let mut t0 = Vec::with_capacity(n);
    for k in 0..n {
        let u = dir(k);
        let start = if esc(u * 1.6) { 1.6 } else { cfg.r_escape };
        let rs = radial_edge(start, 1.0 / cfg.march_factor, r_out, cfg.bisect_steps, |r| esc(u * r))
            .ok_or_else(|| Error::precondition("basin of infinity reaches the straight annulus"))?;
        astar.push(rs);
        if !maps_t0(u * r_gm) {
            return Err(Error::precondition("geometric-mean circle leaves A0"));
        }
        let ro = radial_edge(r_gm, cfg.march_factor, rs, cfg.bisect_steps, |r| maps_t0(u * r))
            .ok_or_else(|| Error::precondition("A0 is not separated from the basin of infinity"))?;
        outer.push(ro);
        let ri = radial_edge(r_gm, 1.0 / cfg.march_factor, 0.0, cfg.bisect_steps, |r| maps_t0(u * r))
            .ok_or_else(|| Error::precondition("A0 reaches the origin"))?;
        inner.push(ri);
        if !in_t0(u * (ri * 1e-3)) || in_t0(u * ri) {
            return Err(Error::precondition("T0 is not a disk inside A0"));
        }
        let (ti, to) = bisect(ri * 1e-3, ri, cfg.bisect_steps, |r| in_t0(u * r));
        t0.push(0.5 * (ti + to));
    }
    let a0_outer = RadialProfile { radii: outer };
    let a0_inner = RadialProfile { radii: inner };
    let astar_boundary = RadialProfile { radii: astar };
    let t0_boundary = RadialProfile { radii: t0 };
    for k in 0..n {
        if !(a0_inner.radii[k] < a0_outer.radii[k] && a0_outer.radii[k] < astar_boundary.radii[k]) {
            return Err(Error::precondition(format!(
                "regions are not nested at angle {:.4}",
                a0_outer.angle(k)
            )));
        }
    }
    if !(r_in >= a0_inner.min() && r_out <= a0_outer.max()) {
        return Err(Error::precondition("straight annulus is not inside the A0 band"));
    }

    // D0: bisect outward from z0 on "maps into T0", away from the A0 band.
    let z0 = crit.z0;
    let band_top = a0_outer.max();
    if z0.norm() <= band_top * 1.05 {
        return Err(Error::precondition("z0 is not separated from the A0 band"));
    }
    let reach = (z0.norm() - band_top * 1.05).max(0.0);
    let in_d0 = |z: Complex| z.norm() > band_top * 1.05 && maps_t0(z);
    let mut d0_radius = f64::INFINITY;
    for k in 0..n {
        let u = dir(k);
        let r = if in_d0(z0 + u * reach) {
            reach
        } else {
            let (i, o) = bisect(0.0, reach, cfg.bisect_steps, |r| in_d0(z0 + u * r));
            0.5 * (i + o)
        };
        d0_radius = d0_radius.min(r);
    }
    if !(d0_radius > 0.0) {
        return Err(Error::precondition("D0 around z0 is empty"));
    }

    Ok(StructuralRegions {
        params: *p,
        r_escape: cfg.r_escape,
        budget,
        t0_radius: t0_boundary.min(),
        t0_boundary,
        astar_boundary,
        a0_inner,
        a0_outer,
        d0_center: z0,
        d0_radius,
        c_minus: crit.c_minus,
        straight_annulus: (r_in, r_out),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn profile_interpolates_and_wraps() {
        let prof = RadialProfile { radii: vec![1.0, 2.0, 3.0, 4.0] };
        assert_eq!(prof.at(0.0), 1.0);
        assert!((prof.at(TAU / 8.0) - 1.5).abs() < 1e-12);
        assert!((prof.at(TAU * 7.0 / 8.0) - 2.5).abs() < 1e-12);
        assert_eq!(prof.min(), 1.0);
        assert_eq!(prof.max(), 4.0);
    }

    #[test]
    fn straight_annulus_radii() {
        let (i, o) = straight_annulus(c(0.0, 0.5), c(1e-6, 0.0));
        assert!((i - 1e-6f64.powf(0.2)).abs() < 1e-15);
        assert!((o - 4e-6f64.powf(0.2)).abs() < 1e-15);
    }

    #[test]
    fn regions_nest_for_small_lambda() {
        let p = MapParams::perturbed(c(0.0, 0.5), c(1e-6, 0.0)).unwrap();
        let reg = locate_regions_with(&p, DEFAULT_REGION_BUDGET, &RegionsConfig::light()).unwrap();
        assert!(reg.t0_radius < reg.a0_inner.min());
        assert!(reg.a0_outer.max() < reg.astar_boundary.min());
        assert!(reg.in_t0(c(0.0, 0.0)));
        assert!(reg.in_a0(c(geometric_mean_radius(p.a, p.lambda), 0.0)));
        assert!(reg.maps_into_t0(reg.d0_center));
    }

    #[test]
    fn hausdorff_of_shifted_sets() {
        let a = [c(0.0, 0.0), c(1.0, 0.0)];
        let b = [c(0.0, 0.5), c(1.0, 0.0)];
        assert!((hausdorff(&a, &b) - 0.5).abs() < 1e-15);
        assert_eq!(hausdorff(&a, &a), 0.0);
    }
}
