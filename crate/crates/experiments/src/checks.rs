use crate::views::View;
use blaschke_core::numerics::{preimage_polynomial, preimages_of_point, Complex, MapParams, SpherePoint};
use blaschke_core::raster::{encode_image, encode_meta, render_dynamical_with, Palette, PlaneSpec};
use blaschke_core::structure::{
    circle, classify_with, critical_set, itinerary_order, locate_regions, preimage_curve, ring_critical_seeds,
    ring_zero_seeds, winding_number, Itinerary, Order, OrderKey, Side,
};
use blaschke_core::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

// ---------------------------------------------------------------- asymptotics

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsymptoticRow {
    pub lambda: Complex,
    /// Worst relative distance of a ring zero to its fifth-root seed.
    pub zero_error: f64,
    pub critical_error: f64,
    pub zero_modulus: f64,
    pub critical_modulus: f64,
    /// Largest deviation of consecutive zero arguments from 72 degrees.
    pub pentagon_deviation_deg: f64,
}

impl AsymptoticRow {
    pub fn error(&self) -> f64 {
        self.zero_error.max(self.critical_error)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AsymptoticsReport {
    pub a: Complex,
    pub rows: Vec<AsymptoticRow>,
    /// Errors strictly decrease along the sequence.
    pub decreasing: bool,
}

fn seed_error(points: &[Complex], seeds: &[Complex]) -> f64 {
    points
        .iter()
        .map(|z| {
            seeds
                .iter()
                .map(|s| (z - s).norm() / s.norm())
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn pentagon_deviation(points: &[Complex]) -> f64 {
    let mut args: Vec<f64> = points.iter().map(|z| z.arg().to_degrees()).collect();
    args.sort_by(f64::total_cmp);
    let n = args.len();
    (0..n)
        .map(|k| {
            let gap = if k + 1 < n { args[k + 1] - args[k] } else { args[0] + 360.0 - args[k] };
            (gap - 360.0 / n as f64).abs()
        })
        .fold(0.0, f64::max)
}

/// Compares ring zeros and critical points with the seeds
/// `ξ (λ/a)^(1/5)` and `-ξ (2λ/(3a))^(1/5)` along a sequence `λ → 0`.
pub fn asymptotics_check(a: Complex, lambdas: &[Complex]) -> Result<AsymptoticsReport> {
    let mut rows = Vec::with_capacity(lambdas.len());
    for &lambda in lambdas {
        let cs = critical_set(&MapParams::perturbed(a, lambda)?)?;
        let mean = |v: &[Complex]| v.iter().map(|z| z.norm()).sum::<f64>() / v.len() as f64;
        rows.push(AsymptoticRow {
            lambda,
            zero_error: seed_error(&cs.zeros_ring, &ring_zero_seeds(a, lambda)),
            critical_error: seed_error(&cs.ring_criticals, &ring_critical_seeds(a, lambda)),
            zero_modulus: mean(&cs.zeros_ring),
            critical_modulus: mean(&cs.ring_criticals),
            pentagon_deviation_deg: pentagon_deviation(&cs.zeros_ring),
        });
    }
    let decreasing = rows.windows(2).all(|w| w[1].error() < w[0].error());
    Ok(AsymptoticsReport { a, rows, decreasing })
}

// --------------------------------------------------------- boundary continuity

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ContinuityReport {
    pub a: Complex,
    pub lambda0: Complex,
    pub deltas: Vec<f64>,
    /// Hausdorff distance between sampled basin boundaries at `λ0` and `λ0 + δ`.
    pub distances: Vec<f64>,
    pub nonincreasing: bool,
}

/// Hausdorff distance between the basin boundaries at `λ0` and `λ0 + δ`
/// for each `δ` (real shifts).
pub fn boundary_continuity_check(a: Complex, lambda0: Complex, deltas: &[f64]) -> Result<ContinuityReport> {
    let base = locate_regions(&MapParams::perturbed(a, lambda0)?, blaschke_core::structure::DEFAULT_REGION_BUDGET)?;
    let mut distances = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let other = if d == 0.0 {
            base.clone()
        } else {
            locate_regions(
                &MapParams::perturbed(a, lambda0 + Complex::new(d, 0.0))?,
                blaschke_core::structure::DEFAULT_REGION_BUDGET,
            )?
        };
        distances.push(base.astar_boundary.hausdorff(&other.astar_boundary));
    }
    let nonincreasing = distances.windows(2).all(|w| w[1] <= w[0]);
    Ok(ContinuityReport {
        a,
        lambda0,
        deltas: deltas.to_vec(),
        distances,
        nonincreasing,
    })
}

/// Largest radial distance between the basin boundary and the unit circle.
pub fn distance_to_unit_circle(a: Complex, lambda: Complex) -> Result<f64> {
    let reg = locate_regions(&MapParams::perturbed(a, lambda)?, blaschke_core::structure::DEFAULT_REGION_BUDGET)?;
    Ok(reg.astar_boundary.radii.iter().map(|r| (r - 1.0).abs()).fold(0.0, f64::max))
}

// ------------------------------------------------------------ straight annulus

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnnulusReport {
    pub a: Complex,
    pub lambda: Complex,
    pub inner: f64,
    pub outer: f64,
    pub samples: usize,
    /// Samples whose orbit reaches T0 in exactly one step.
    pub one_step: usize,
    pub counterexamples: Vec<Complex>,
}

/// Classifies `n` area-uniform samples of the straight annulus.
pub fn straight_annulus_check(a: Complex, lambda: Complex, n: usize, seed: u64) -> Result<AnnulusReport> {
    let reg = locate_regions(&MapParams::perturbed(a, lambda)?, blaschke_core::structure::DEFAULT_REGION_BUDGET)?;
    let (inner, outer) = reg.straight_annulus;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut one_step = 0;
    let mut counterexamples = Vec::new();
    for _ in 0..n {
        let r = rng.gen_range(inner * inner..outer * outer).sqrt();
        let z = Complex::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU));
        if classify_with(z, &reg, 2000, false).t0_entry == Some(1) {
            one_step += 1;
        } else if counterexamples.len() < 8 {
            counterexamples.push(z);
        }
    }
    Ok(AnnulusReport {
        a,
        lambda,
        inner,
        outer,
        samples: n,
        one_step,
        counterexamples,
    })
}

// ----------------------------------------------------------------- Vieta suite

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VietaReport {
    pub cases: usize,
    /// Cases with exactly six finite roots of `B(z) = 0`.
    pub six_roots: usize,
    pub worst_sum_error: f64,
    pub worst_product_error: f64,
    pub worst_residual: f64,
}

impl VietaReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.six_roots == self.cases
            && self.worst_sum_error <= tol
            && self.worst_product_error <= tol
            && self.worst_residual <= tol
    }
}

/// Random `(a, λ)` with `0.05 < |a| < 0.95` and `|λ|` log-uniform in
/// `[1e-9, 1e-3]`, seeded.
pub fn random_params(n: usize, seed: u64) -> Vec<(Complex, Complex)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let a = Complex::from_polar(rng.gen_range(0.05..0.95), rng.gen_range(0.0..std::f64::consts::TAU));
            let l = Complex::from_polar(10f64.powf(rng.gen_range(-9.0..-3.0)), rng.gen_range(0.0..std::f64::consts::TAU));
            (a, l)
        })
        .collect()
}

/// Roots of `B(z) = 0`: their sum must be `a` and their product `λ`.
pub fn vieta_suite(n: usize, seed: u64) -> Result<VietaReport> {
    let mut report = VietaReport {
        cases: n,
        six_roots: 0,
        worst_sum_error: 0.0,
        worst_product_error: 0.0,
        worst_residual: 0.0,
    };
    for (a, lambda) in random_params(n, seed) {
        let p = MapParams::perturbed(a, lambda)?;
        let rs = preimages_of_point(SpherePoint::Finite(Complex::new(0.0, 0.0)), &p)?;
        let roots = rs.finite_roots();
        if roots.len() == 6 {
            report.six_roots += 1;
        }
        let sum: Complex = roots.iter().sum();
        let prod: Complex = roots.iter().product();
        report.worst_sum_error = report.worst_sum_error.max((sum - a).norm());
        report.worst_product_error = report.worst_product_error.max((prod - lambda).norm() / lambda.norm());
        // Backward error of each root against z^6 - a z^5 - λ ā z + λ.
        let poly = preimage_polynomial(Complex::new(0.0, 0.0), &p)?;
        for z in roots {
            report.worst_residual = report.worst_residual.max(poly.backward_error(z));
        }
    }
    Ok(report)
}

// ------------------------------------------------------------ curve preimages

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentSummary {
    pub side: Side,
    pub degree: usize,
    pub surrounds_origin: bool,
    pub surrounds_zero: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurveBranch {
    /// `interior` when the critical value lies inside the curve.
    pub branch: String,
    pub radius: f64,
    pub components: Vec<ComponentSummary>,
    pub matches: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrichotomyReport {
    pub a: Complex,
    pub lambda: Complex,
    pub critical_value: Complex,
    pub branches: Vec<CurveBranch>,
}

impl TrichotomyReport {
    pub fn passes(&self) -> bool {
        self.branches.len() == 2 && self.branches.iter().all(|b| b.matches)
    }
}

/// Circles about 0 on either side of the critical value `B(c_minus)`,
/// between A0 and the basin boundary, and their preimages.
pub fn curve_trichotomy(a: Complex, lambda: Complex) -> Result<TrichotomyReport> {
    let p = MapParams::perturbed(a, lambda)?;
    let reg = locate_regions(&p, blaschke_core::structure::DEFAULT_REGION_BUDGET)?;
    let cs = critical_set(&p)?;
    let v = p.eval_raw(reg.c_minus);
    let lo = reg.a0_outer.max() * 1.1;
    let hi = reg.astar_boundary.min() * 0.95;
    if !(lo < v.norm() && v.norm() < hi) {
        return Err(Error::Precondition {
            check: format!(
                "critical value modulus {} not between A0 ({lo}) and the basin boundary ({hi})",
                v.norm()
            ),
        });
    }
    let mut branches = Vec::new();
    for (name, radius) in [("exterior", (lo * v.norm()).sqrt()), ("interior", (v.norm() * hi).sqrt())] {
        let pre = preimage_curve(&circle(Complex::new(0.0, 0.0), radius, 512), &reg)?;
        let components: Vec<ComponentSummary> = pre
            .components
            .iter()
            .map(|c| ComponentSummary {
                side: c.side,
                degree: c.degree,
                surrounds_origin: c.surrounds_origin,
                surrounds_zero: winding_number(&c.points, cs.z0) != 0,
            })
            .collect();
        let inner: Vec<_> = components.iter().filter(|c| c.side == Side::Inner).collect();
        let outer: Vec<_> = components.iter().filter(|c| c.side == Side::Outer).collect();
        let inner_ok = inner.len() == 1 && inner[0].degree == 2 && inner[0].surrounds_origin;
        let outer_ok = if name == "interior" {
            outer.len() == 1 && outer[0].degree == 4 && outer[0].surrounds_origin
        } else {
            let three = outer.iter().filter(|c| c.degree == 3 && c.surrounds_origin).count();
            let one = outer
                .iter()
                .filter(|c| c.degree == 1 && !c.surrounds_origin && c.surrounds_zero)
                .count();
            outer.len() == 2 && three == 1 && one == 1
        };
        branches.push(CurveBranch {
            branch: name.into(),
            radius,
            components,
            matches: inner_ok && outer_ok,
        });
    }
    Ok(TrichotomyReport {
        a,
        lambda,
        critical_value: v,
        branches,
    })
}

// ----------------------------------------------------------- nesting, ordering

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NestingReport {
    /// Mean radius of the 0-surrounding `A_n`, `n = 0, 1, ...` while found.
    pub radii: Vec<f64>,
    pub basin_radius: f64,
    pub increasing: bool,
    /// Gaps to the basin boundary shrink.
    pub approaching: bool,
    /// Pairs of 0-surrounding components with ordered itineraries.
    pub decided_pairs: usize,
    /// Decided pairs whose mean radii follow the order.
    pub agreeing: usize,
}

fn surrounding(view: &View) -> Vec<(OrderKey, f64)> {
    view.map
        .components
        .iter()
        .filter(|c| !c.truncated && c.surrounds.iter().any(|m| m == "0"))
        .filter_map(|c| {
            let w: Itinerary = c.class.strip_suffix(":A0")?.parse().ok()?;
            let key = if w.is_all_zeros() { OrderKey::Nested(w.len()) } else { OrderKey::Word(w) };
            Some((key, c.mean_radius))
        })
        .collect()
}

/// Nesting of `A_0, A_1, ...` and agreement of component radii with the
/// itinerary order, on an overview render.
pub fn nesting_check(view: &View, basin_radius: f64, depth: usize) -> NestingReport {
    let comps = surrounding(view);
    let mut radii = Vec::new();
    for n in 0..depth {
        match comps.iter().filter(|(k, _)| *k == OrderKey::Nested(n)).map(|(_, r)| *r).reduce(f64::max) {
            Some(r) => radii.push(r),
            None => break,
        }
    }
    let increasing = radii.len() == depth && radii.windows(2).all(|w| w[0] < w[1]);
    let approaching = radii.windows(2).all(|w| (basin_radius - w[1]).abs() < (basin_radius - w[0]).abs());
    let (mut decided_pairs, mut agreeing) = (0, 0);
    for (i, (k1, r1)) in comps.iter().enumerate() {
        for (k2, r2) in &comps[i + 1..] {
            match itinerary_order(k1.clone(), k2.clone()) {
                Order::Incomparable => {}
                o => {
                    decided_pairs += 1;
                    if (o == Order::Precedes) == (r1 < r2) {
                        agreeing += 1;
                    }
                }
            }
        }
    }
    NestingReport {
        radii,
        basin_radius,
        increasing,
        approaching,
        decided_pairs,
        agreeing,
    }
}

// ----------------------------------------------------------------- determinism

/// Renders `spec` with one worker and with `workers`, comparing PPM and JSON bytes.
pub fn determinism_check(spec: &PlaneSpec, workers: usize) -> Result<bool> {
    let one = render_dynamical_with(spec, Some(1))?;
    let many = render_dynamical_with(spec, Some(workers))?;
    Ok(encode_image(&one, Palette::Escape) == encode_image(&many, Palette::Escape)
        && encode_meta(&one)? == encode_meta(&many)?)
}
