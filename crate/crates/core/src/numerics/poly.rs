use super::{lex_cmp, Complex};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Relative backward error below which a root counts as converged.
pub const ROOT_BACKWARD_TOL: f64 = 1e-12;

const MAX_DEGREE: usize = 16;
const ABERTH_MAX_ITER: usize = 600;

/// Dense polynomial with coefficients stored highest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex>,
}

impl Poly {
    /// `coeffs[0]` multiplies `z^n`. Leading zeros are rejected rather than
    /// trimmed so the declared degree is the one the caller meant.
    pub fn new(coeffs: Vec<Complex>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParams("polynomial must have degree >= 1".into()));
        }
        if coeffs[0].norm() == 0.0 {
            return Err(Error::InvalidParams("leading coefficient is zero".into()));
        }
        if coeffs.len() - 1 > MAX_DEGREE {
            return Err(Error::InvalidParams(format!(
                "degree {} exceeds {MAX_DEGREE}",
                coeffs.len() - 1
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient".into()));
        }
        Ok(Poly { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex] {
        &self.coeffs
    }

    #[inline]
    pub fn eval(&self, z: Complex) -> Complex {
        self.coeffs.iter().fold(Complex::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Value and first derivative by a single Horner sweep.
    #[inline]
    pub fn eval_with_derivative(&self, z: Complex) -> (Complex, Complex) {
        let mut p = Complex::new(0.0, 0.0);
        let mut dp = Complex::new(0.0, 0.0);
        for &c in &self.coeffs {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |z|^k`, the natural scale for a residual at `z`.
    pub fn magnitude_at(&self, z: Complex) -> f64 {
        let r = z.norm();
        self.coeffs.iter().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Relative backward error `|p(z)| / sum |c_k| |z|^k`.
    pub fn backward_error(&self, z: Complex) -> f64 {
        let scale = self.magnitude_at(z);
        if scale == 0.0 {
            return 0.0;
        }
        self.eval(z).norm() / scale
    }
}

/// Numerical roots with per-root residual `|p(root)|` and a convergence
/// flag. A root is flagged when its backward error exceeds
/// [`ROOT_BACKWARD_TOL`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootSet {
    pub roots: Vec<super::SpherePoint>,
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|&c| c)
    }

    pub fn finite_roots(&self) -> Vec<Complex> {
        self.roots.iter().filter_map(|r| r.finite()).collect()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().cloned().fold(0.0, f64::max)
    }

    /// Turns unconverged flags into an error.
    pub fn require_converged(self) -> Result<Self> {
        let bad: Vec<f64> = self
            .converged
            .iter()
            .zip(&self.residuals)
            .filter(|(c, _)| !**c)
            .map(|(_, r)| *r)
            .collect();
        if bad.is_empty() {
            Ok(self)
        } else {
            Err(Error::UnconvergedRoots {
                count: bad.len(),
                worst: bad.iter().cloned().fold(0.0, f64::max),
            })
        }
    }
}

/// All complex roots of the polynomial with coefficients `coeffs` (highest
/// degree first), by Aberth–Ehrlich simultaneous iteration followed by a
/// Newton polish of every root. Roots come back sorted by `(re, im)`.
pub fn polynomial_roots(coeffs: &[Complex]) -> Result<RootSet> {
    let poly = Poly::new(coeffs.to_vec())?;
    let mut roots = aberth(&poly);
    for r in roots.iter_mut() {
        *r = polish(&poly, *r);
    }
    roots.sort_by(lex_cmp);
    let residuals: Vec<f64> = roots.iter().map(|&r| poly.eval(r).norm()).collect();
    let converged = roots
        .iter()
        .map(|&r| poly.backward_error(r) <= ROOT_BACKWARD_TOL)
        .collect();
    Ok(RootSet {
        roots: roots.into_iter().map(super::SpherePoint::Finite).collect(),
        residuals,
        converged,
    })
}

fn initial_guesses(poly: &Poly) -> Vec<Complex> {
    let n = poly.degree();
    let c = poly.coeffs();
    let lead = c[0];
    // Geometric-mean root radius, capped by the Cauchy bound.
    let cauchy = 1.0
        + c[1..]
            .iter()
            .map(|ck| (ck / lead).norm())
            .fold(0.0, f64::max);
    let tail = (c[n] / lead).norm();
    let mut radius = if tail > 0.0 {
        tail.powf(1.0 / n as f64)
    } else {
        cauchy / 2.0
    };
    if !radius.is_finite() || radius == 0.0 {
        radius = 1.0;
    }
    radius = radius.min(cauchy).max(1e-300);
    (0..n)
        .map(|k| {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            Complex::from_polar(radius, theta)
        })
        .collect()
}

fn aberth(poly: &Poly) -> Vec<Complex> {
    let n = poly.degree();
    let mut z = initial_guesses(poly);
    let mut done = vec![false; n];
    for _ in 0..ABERTH_MAX_ITER {
        let mut all_done = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let (p, dp) = poly.eval_with_derivative(z[i]);
            if p.norm() == 0.0 {
                done[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut sum = Complex::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        sum += 1.0 / diff;
                    }
                }
            }
            let step = ratio / (1.0 - ratio * sum);
            if !(step.re.is_finite() && step.im.is_finite()) {
                // Perturb off a degenerate configuration and retry.
                let bump = Complex::new(1e-8, 1e-8) * (1.0 + z[i].norm());
                z[i] += bump;
                all_done = false;
                continue;
            }
            z[i] -= step;
            if step.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                done[i] = true;
            } else {
                all_done = false;
            }
        }
        if all_done {
            break;
        }
    }
    z
}

/// A few guarded Newton steps; a step is kept only if it lowers the residual.
fn polish(poly: &Poly, mut z: Complex) -> Complex {
    let mut best = poly.eval(z).norm();
    for _ in 0..4 {
        let (p, dp) = poly.eval_with_derivative(z);
        if dp.norm() == 0.0 {
            break;
        }
        let cand = z - p / dp;
        let r = poly.eval(cand).norm();
        if r < best {
            best = r;
            z = cand;
        } else {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn quadratic() {
        let rs = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let roots = rs.finite_roots();
        assert!((roots[0] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!((roots[1] - c(1.0, 0.0)).norm() < 1e-15);
        assert!(rs.all_converged());
    }

    #[test]
    fn fifth_roots_match_de_moivre() {
        let target = c(2.0e-5, 1.0e-6) / (3.0 * c(0.0, 0.5));
        let mut coeffs = vec![c(0.0, 0.0); 6];
        coeffs[0] = c(1.0, 0.0);
        coeffs[5] = -target;
        let rs = polynomial_roots(&coeffs).unwrap();
        // Oracle: |target|^(1/5) e^{i(arg + 2 pi k)/5}.
        let mut oracle: Vec<Complex> = (0..5)
            .map(|k| {
                Complex::from_polar(
                    target.norm().powf(0.2),
                    (target.arg() + 2.0 * std::f64::consts::PI * k as f64) / 5.0,
                )
            })
            .collect();
        oracle.sort_by(lex_cmp);
        for (r, o) in rs.finite_roots().iter().zip(&oracle) {
            assert!((r - o).norm() < 1e-14, "{r} vs {o}");
        }
    }

    #[test]
    fn random_sextics_small_residual() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let coeffs: Vec<Complex> = (0..7)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect();
            if coeffs[0].norm() < 1e-3 {
                continue;
            }
            let rs = polynomial_roots(&coeffs).unwrap();
            let maxc = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
            assert_eq!(rs.len(), 6);
            assert!(rs.max_residual() <= 1e-10 * maxc, "{}", rs.max_residual());
            assert!(rs.all_converged());
        }
    }

    #[test]
    fn sorted_lexicographically() {
        let rs = polynomial_roots(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let roots = rs.finite_roots();
        for w in roots.windows(2) {
            assert_ne!(lex_cmp(&w[0], &w[1]), std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn rejects_zero_leading_and_high_degree() {
        assert!(polynomial_roots(&[c(0.0, 0.0), c(1.0, 0.0)]).is_err());
        assert!(polynomial_roots(&vec![c(1.0, 0.0); 18]).is_err());
    }

    #[test]
    fn zero_root_is_found() {
        let rs = polynomial_roots(&[c(1.0, 0.0), c(-0.5, 0.0), c(0.0, 0.0)]).unwrap();
        let roots = rs.finite_roots();
        assert!(roots[0].norm() < 1e-15);
        assert!((roots[1] - c(0.5, 0.0)).norm() < 1e-15);
    }
}
