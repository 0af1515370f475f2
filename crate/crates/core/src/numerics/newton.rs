use super::{Complex, Family, MapParams, Poly, SpherePoint};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Residual tolerance (absolute, or relative to the polynomial's magnitude
/// at the root, whichever is larger).
pub const NEWTON_TOL: f64 = 1e-12;
pub const NEWTON_MAX_ITER: u32 = 50;

/// The equation a Newton refinement solves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind", content = "w")]
pub enum NewtonTarget {
    /// Zeros of the derivative (after clearing denominators).
    CriticalPoint,
    /// Solutions of `f(z) = z`.
    FixedPoint,
    /// Solutions of `f(z) = w`.
    PreimageOf(Complex),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NewtonOutcome {
    pub root: Complex,
    pub iterations: u32,
    pub residual: f64,
}

/// The polynomial whose roots are the finite solutions of `target` for the
/// map `p`, obtained by clearing the denominators of the family in closed
/// form.
pub fn target_polynomial(target: NewtonTarget, p: &MapParams) -> Result<Poly> {
    p.validate()?;
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let coeffs = match p.family {
        Family::PerturbedBlaschke | Family::UnperturbedBlaschke => {
            let a = p.a;
            let ac = a.conj();
            let lam = p.effective_lambda();
            match target {
                NewtonTarget::CriticalPoint => {
                    // z^3 [ -3 ā z^4 + (4 + 2|a|^2) z^3 - 3 a z^2 ] - 2 λ (1 - ā z)^2
                    let s = 4.0 + 2.0 * a.norm_sqr();
                    vec![
                        -3.0 * ac,
                        Complex::new(s, 0.0),
                        -3.0 * a,
                        zero,
                        zero,
                        -2.0 * lam * ac * ac,
                        4.0 * lam * ac,
                        -2.0 * lam,
                    ]
                }
                NewtonTarget::FixedPoint => {
                    // z^6 - a z^5 + ā z^4 - z^3 - λ ā z + λ
                    vec![one, -a, ac, -one, zero, -lam * ac, lam]
                }
                NewtonTarget::PreimageOf(w) => {
                    return super::preimage_polynomial(w, p);
                }
            }
        }
        Family::McMullen { n, d } => {
            let deg = (n + d) as usize;
            let mut c = vec![zero; deg + 1];
            match target {
                NewtonTarget::CriticalPoint => {
                    // n z^{n+d} - d λ
                    c[0] = Complex::new(n as f64, 0.0);
                    c[deg] = -(d as f64) * p.lambda;
                }
                NewtonTarget::FixedPoint => {
                    // z^{n+d} - z^{d+1} + λ
                    c[0] = one;
                    c[deg - (d as usize + 1)] -= one;
                    c[deg] += p.lambda;
                }
                NewtonTarget::PreimageOf(w) => {
                    // z^{n+d} - w z^d + λ
                    c[0] = one;
                    c[deg - d as usize] -= w;
                    c[deg] += p.lambda;
                }
            }
            c
        }
    };
    Poly::new(coeffs)
}

/// Newton's method on `poly` from `seed`. Succeeds once the residual is
/// within [`NEWTON_TOL`] (absolute or relative, whichever is larger) and
/// the step has stalled at rounding level.
pub fn newton_on(poly: &Poly, seed: Complex) -> Result<NewtonOutcome> {
    let mut z = seed;
    for it in 0..=NEWTON_MAX_ITER {
        let (f, df) = poly.eval_with_derivative(z);
        let residual = f.norm();
        let tol = NEWTON_TOL * poly.magnitude_at(z).max(1.0);
        if residual == 0.0 {
            return Ok(NewtonOutcome {
                root: z,
                iterations: it,
                residual,
            });
        }
        if it == NEWTON_MAX_ITER {
            return Err(Error::NoConvergence {
                iterations: it,
                residual,
            });
        }
        if df.norm() == 0.0 {
            return Err(Error::DerivativeVanished { at: z });
        }
        let step = f / df;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(Error::DerivativeVanished { at: z });
        }
        let next = z - step;
        let stalled = step.norm() <= 8.0 * f64::EPSILON * next.norm().max(f64::MIN_POSITIVE);
        z = next;
        if stalled {
            let residual = poly.eval(z).norm();
            if residual <= tol {
                return Ok(NewtonOutcome {
                    root: z,
                    iterations: it + 1,
                    residual,
                });
            }
        } else if residual <= tol * 1e-3 {
            // Already far below tolerance; the step just taken is noise-level.
            let r = poly.eval(z).norm();
            return Ok(NewtonOutcome {
                root: z,
                iterations: it + 1,
                residual: r,
            });
        }
    }
    unreachable!()
}

/// Refines `seed` to a root of the target equation for map `p`.
pub fn newton_refine(seed: Complex, target: NewtonTarget, p: &MapParams) -> Result<NewtonOutcome> {
    let poly = target_polynomial(target, p)?;
    newton_on(&poly, seed)
}

/// Follows a root of `target` from `from` to `to` along the straight
/// parameter path, refining at each of `steps` stations.
pub(crate) fn continue_root(
    seed: Complex,
    target: NewtonTarget,
    from: &MapParams,
    to: &MapParams,
    steps: usize,
) -> Result<NewtonOutcome> {
    let mut z = seed;
    let mut last = None;
    for k in 1..=steps {
        let t = k as f64 / steps as f64;
        let mut q = *to;
        q.a = from.a + (to.a - from.a) * t;
        q.lambda = from.lambda + (to.lambda - from.lambda) * t;
        let poly = target_polynomial_unchecked(target, &q);
        let out = newton_on(&poly, z)?;
        z = out.root;
        last = Some(out);
    }
    last.ok_or_else(|| Error::InvalidParams("continuation needs at least one step".into()))
}

fn target_polynomial_unchecked(target: NewtonTarget, p: &MapParams) -> Poly {
    // Intermediate stations may sit at lambda = 0, which `validate` rejects
    // for the perturbed family; the polynomial itself is still well defined.
    let mut q = *p;
    if q.family == Family::PerturbedBlaschke && q.lambda.norm() == 0.0 {
        q.family = Family::UnperturbedBlaschke;
    }
    target_polynomial(target, &q).expect("continuation station has valid parameters")
}

impl From<NewtonOutcome> for SpherePoint {
    fn from(o: NewtonOutcome) -> Self {
        SpherePoint::Finite(o.root)
    }
}
