use super::critical::critical_minus;
use crate::error::{Error, Result};
use crate::numerics::{newton_refine, Complex, MapParams, NewtonTarget};
use serde::{Deserialize, Serialize};

const BISECT_MAX: u32 = 200;

/// Dynamics on the positive real axis for real `a` and `λ >= 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealLineState {
    pub a: f64,
    pub lambda: f64,
    /// Repelling fixed point, the continuation of 1.
    pub x1: f64,
    pub c_minus_real: f64,
    pub z0_real: f64,
    /// `z_{-1}, z_{-2}, ...`: preimages of `z0` on the increasing branch.
    pub backward_chain: Vec<f64>,
}

/// Map parameters for real `a` and `λ`; `λ = 0` selects the unperturbed map.
pub fn real_params(a: f64, lambda: f64) -> Result<MapParams> {
    let a = Complex::new(a, 0.0);
    if lambda == 0.0 {
        MapParams::unperturbed(a)
    } else {
        MapParams::perturbed(a, Complex::new(lambda, 0.0))
    }
}

/// The map restricted to the real axis.
pub fn real_map(p: &MapParams, x: f64) -> f64 {
    p.eval_raw(Complex::new(x, 0.0)).re
}

fn require_real(z: Complex, what: &str) -> Result<f64> {
    if z.im.abs() > 1e-12 * z.re.abs().max(1.0) {
        return Err(Error::InvalidParams(format!("{what} left the real axis: {z}")));
    }
    Ok(z.re)
}

/// Solves `f(x) = y` for an increasing `f` on `[lo, hi]` by bisection,
/// down to adjacent floating-point numbers.
pub fn solve_increasing(f: impl Fn(f64) -> f64, y: f64, lo: f64, hi: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    if !(flo <= y && y <= fhi) {
        return Err(Error::BracketFailure {
            lo,
            hi,
            reason: format!("target {y} not bracketed by [{flo}, {fhi}]"),
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    for _ in 0..BISECT_MAX {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Repelling fixed point, free critical point, zero `z0`, and `depth`
/// backward iterates of `z0` on the increasing branch `(c_minus, x1)`.
pub fn real_line_state(a: f64, lambda: f64, depth: usize) -> Result<RealLineState> {
    if !(a > 0.0 && a < 1.0) || !(lambda >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "real-line dynamics needs 0 < a < 1 and lambda >= 0, got a={a}, lambda={lambda}"
        )));
    }
    let p = real_params(a, lambda)?;
    let x1 = require_real(
        newton_refine(Complex::new(1.0, 0.0), NewtonTarget::FixedPoint, &p)?.root,
        "fixed point",
    )?;
    let c_minus = require_real(critical_minus(&p)?, "critical point")?;
    let z0 = require_real(
        newton_refine(Complex::new(a, 0.0), NewtonTarget::PreimageOf(Complex::new(0.0, 0.0)), &p)?.root,
        "zero",
    )?;
    if !(c_minus < z0 && z0 < x1) {
        return Err(Error::BracketFailure {
            lo: c_minus,
            hi: x1,
            reason: format!("expected c_minus < z0 < x1, got {c_minus}, {z0}, {x1}"),
        });
    }
    let f = |x: f64| real_map(&p, x);
    let mut chain = Vec::with_capacity(depth);
    let mut target = z0;
    for _ in 0..depth {
        let next = solve_increasing(f, target, c_minus, x1)?;
        if !(next > target) {
            // Reached the fixed point to working precision.
            return Err(Error::BracketFailure {
                lo: target,
                hi: x1,
                reason: "backward chain stopped increasing".into(),
            });
        }
        chain.push(next);
        target = next;
    }
    Ok(RealLineState {
        a,
        lambda,
        x1,
        c_minus_real: c_minus,
        z0_real: z0,
        backward_chain: chain,
    })
}
