use crate::cases::{analyze_case, Case, CaseOptions, CaseReport};
use blaschke_core::numerics::Complex;
use blaschke_core::raster::PlaneSpec;
use blaschke_core::raster::regions_for;
use blaschke_core::structure::{classify_with, real_line_state, real_map, real_params, Terminal};
use blaschke_core::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance on `B^{m+2}(c_minus) - z_{-n}` at the returned parameter.
pub const MATCH_TOL: f64 = 1e-10;
/// Tolerance on `B^{m+2}(c_minus) - x1` at the upper bracket end.
pub const FIXED_POINT_TOL: f64 = 1e-9;
const SCAN_POINTS: usize = 200;
/// The scan covers `[lambda_hi / SCAN_SPAN, lambda_hi]`.
const SCAN_SPAN: f64 = 100.0;
const MAX_M: usize = 12;
const BISECT_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealSearchReport {
    pub a: f64,
    pub lambda: f64,
    pub m: usize,
    /// Index of the backward iterate of `z0` hit by `B^{m+2}(c_minus)`.
    pub n: usize,
    /// `(Λ1, Λ2)`: below and at the fixed point.
    pub bracket: (f64, f64),
    /// `B^{m+2}(c_minus) - x1` at `Λ2`.
    pub fixed_point_gap: f64,
    /// `B^{m+2}(c_minus) - z_{-n}` at the returned λ.
    pub residual: f64,
    pub fate: String,
    pub report: CaseReport,
}

/// Iterates beyond this modulus have escaped and are not followed further.
const ESCAPED: f64 = 1e12;

/// `B^k(c_minus)` for `k = 0..=steps` and `x1`, both at real `(a, λ)`.
/// Iterates after the orbit escapes are NaN.
fn orbit(a: f64, lambda: f64, steps: usize) -> Option<(Vec<f64>, f64)> {
    let s = real_line_state(a, lambda, 0).ok()?;
    let p = real_params(a, lambda).ok()?;
    let mut xs = vec![s.c_minus_real];
    for _ in 0..steps {
        let prev = *xs.last().unwrap();
        let x = if prev.abs() > ESCAPED { f64::NAN } else { real_map(&p, prev) };
        xs.push(if x.is_finite() { x } else { f64::NAN });
    }
    Some((xs, s.x1))
}

/// Bisection for a sign change of `f` on `[lo, hi]` (either order).
fn bisect(f: impl Fn(f64) -> Option<f64>, lo: f64, hi: f64) -> Option<f64> {
    let f = |x: f64| f(x).filter(|v| v.is_finite());
    let (mut neg, mut pos) = if f(lo)? < 0.0 { (lo, hi) } else { (hi, lo) };
    for _ in 0..BISECT_STEPS {
        let mid = 0.5 * (neg + pos);
        if mid == neg || mid == pos {
            break;
        }
        if f(mid)? < 0.0 {
            neg = mid;
        } else {
            pos = mid;
        }
    }
    // Report the end with the smaller residual.
    let (fn_, fp) = (f(neg)?.abs(), f(pos)?.abs());
    Some(if fn_ <= fp { neg } else { pos })
}

/// Finds real `λ` in `(0, lambda_hi]` for which `c_minus` is eventually
/// mapped onto the zero `z0`, hence into D0.
///
/// For each `m`, the scan looks for `Λ2` with `B^{m+2}(c_minus) = x1` and a
/// neighbour `Λ1` where the orbit point lies below `x1`. Some backward
/// iterate `z_{-n}` of `z0` then separates the two, and bisection on
/// `B^{m+2}(c_minus) - z_{-n}` lands on the target. Sign changes caused by
/// the pole are recognised by a large residual and skipped.
pub fn case_a_real_search(a: f64, lambda_hi: f64, depth: usize, opts: &CaseOptions) -> Result<RealSearchReport> {
    if !(a > 0.0 && a < 1.0 && lambda_hi > 0.0) {
        return Err(Error::InvalidParams(format!("need 0 < a < 1 and lambda_hi > 0, got a={a}, lambda_hi={lambda_hi}")));
    }
    let grid: Vec<f64> = (0..SCAN_POINTS)
        .map(|k| lambda_hi * SCAN_SPAN.powf(-(k as f64) / (SCAN_POINTS - 1) as f64))
        .collect();
    let orbits: Vec<Option<(Vec<f64>, f64)>> = grid.iter().map(|&l| orbit(a, l, MAX_M + 2)).collect();

    for m in 0..=MAX_M {
        let g = |l: f64| orbit(a, l, m + 2).map(|(xs, x1)| xs[m + 2] - x1);
        for k in 0..SCAN_POINTS - 1 {
            let (Some((xa, x1a)), Some((xb, x1b))) = (&orbits[k], &orbits[k + 1]) else {
                continue;
            };
            let (ga, gb) = (xa[m + 2] - x1a, xb[m + 2] - x1b);
            if !(ga.is_finite() && gb.is_finite()) || ga.signum() == gb.signum() {
                continue;
            }
            let Some(l2) = bisect(g, grid[k], grid[k + 1]) else {
                continue;
            };
            let Some(gap) = g(l2) else { continue };
            if gap.abs() > FIXED_POINT_TOL {
                continue;
            }
            let l1 = if ga < 0.0 { grid[k] } else { grid[k + 1] };
            if let Some(found) = match_preimage(a, m, l1, l2, gap, depth, opts)? {
                return Ok(found);
            }
        }
    }
    Err(Error::NotFound(format!(
        "no sign change of B^(m+2)(c_minus) - x1 with m <= {MAX_M} on [{}, {lambda_hi}]",
        lambda_hi / SCAN_SPAN
    )))
}

fn match_preimage(
    a: f64,
    m: usize,
    l1: f64,
    l2: f64,
    gap: f64,
    depth: usize,
    opts: &CaseOptions,
) -> Result<Option<RealSearchReport>> {
    let Ok(state) = real_line_state(a, l1, depth) else {
        return Ok(None);
    };
    let Some((xs, _)) = orbit(a, l1, m + 2) else {
        return Ok(None);
    };
    let target = xs[m + 2];
    let chain: Vec<f64> = std::iter::once(state.z0_real).chain(state.backward_chain.iter().copied()).collect();
    let Some(n) = chain.iter().position(|&z| z > target) else {
        return Ok(None);
    };
    let h = |l: f64| -> Option<f64> {
        let s = real_line_state(a, l, n).ok()?;
        let z = if n == 0 { s.z0_real } else { s.backward_chain[n - 1] };
        orbit(a, l, m + 2).map(|(xs, _)| xs[m + 2] - z)
    };
    let Some(lambda) = bisect(h, l1, l2) else {
        return Ok(None);
    };
    let Some(residual) = h(lambda) else {
        return Ok(None);
    };
    if residual.abs() > MATCH_TOL {
        return Ok(None);
    }

    let p = real_params(a, lambda)?;
    let probe = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 3.0, opts.resolution, opts.max_iter);
    let Ok(reg) = regions_for(&probe) else {
        return Ok(None);
    };
    let fate = classify_with(reg.c_minus, &reg, opts.max_iter, false);
    if fate.terminal != Some(Terminal::D0) {
        return Ok(None);
    }
    let report = analyze_case(Complex::new(a, 0.0), Complex::new(lambda, 0.0), opts)?;
    if !report.confirms(Case::A) {
        return Ok(None);
    }
    Ok(Some(RealSearchReport {
        a,
        lambda,
        m,
        n,
        bracket: (l1, l2),
        fixed_point_gap: gap,
        residual,
        fate: fate.label(),
        report,
    }))
}
