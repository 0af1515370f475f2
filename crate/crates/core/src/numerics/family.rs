use super::{Complex, SpherePoint, POLE_EPS};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Which rational family a [`MapParams`] selects.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum Family {
    /// `z^3 (z - a) / (1 - conj(a) z) + lambda / z^2`
    PerturbedBlaschke,
    /// `z^3 (z - a) / (1 - conj(a) z)`; lambda is ignored.
    UnperturbedBlaschke,
    /// `z^n + lambda / z^d`
    McMullen { n: u32, d: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MapParams {
    pub family: Family,
    pub a: Complex,
    pub lambda: Complex,
}

impl MapParams {
    pub fn perturbed(a: Complex, lambda: Complex) -> Result<Self> {
        let p = MapParams {
            family: Family::PerturbedBlaschke,
            a,
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn unperturbed(a: Complex) -> Result<Self> {
        let p = MapParams {
            family: Family::UnperturbedBlaschke,
            a,
            lambda: Complex::new(0.0, 0.0),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn mcmullen(n: u32, d: u32, lambda: Complex) -> Result<Self> {
        let p = MapParams {
            family: Family::McMullen { n, d },
            a: Complex::new(0.0, 0.0),
            lambda,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |z: Complex| z.re.is_finite() && z.im.is_finite();
        if !finite(self.a) || !finite(self.lambda) {
            return Err(Error::InvalidParams("non-finite parameter".into()));
        }
        match self.family {
            Family::PerturbedBlaschke | Family::UnperturbedBlaschke => {
                let r = self.a.norm();
                if !(r > 0.0 && r < 1.0) {
                    return Err(Error::InvalidParams(format!(
                        "a must lie in the punctured unit disk, |a| = {r}"
                    )));
                }
                if self.family == Family::PerturbedBlaschke && self.lambda.norm() == 0.0 {
                    return Err(Error::InvalidParams("lambda must be nonzero".into()));
                }
            }
            Family::McMullen { n, d } => {
                if n < 2 || d < 1 {
                    return Err(Error::InvalidParams(format!(
                        "McMullen family needs n >= 2 and d >= 1, got n={n}, d={d}"
                    )));
                }
                if self.lambda.norm() == 0.0 {
                    return Err(Error::InvalidParams("lambda must be nonzero".into()));
                }
            }
        }
        Ok(())
    }

    /// The perturbation coefficient actually used by the selected family.
    pub fn effective_lambda(&self) -> Complex {
        match self.family {
            Family::UnperturbedBlaschke => Complex::new(0.0, 0.0),
            _ => self.lambda,
        }
    }

    /// The finite pole `1/conj(a)` of the Blaschke families.
    pub fn finite_pole(&self) -> Option<Complex> {
        match self.family {
            Family::McMullen { .. } => None,
            _ => Some(1.0 / self.a.conj()),
        }
    }

    /// Map evaluation without parameter validation. Poles and overflow
    /// yield a non-finite value; callers iterating orbits test
    /// `is_finite` or use [`SpherePoint::from_raw`].
    #[inline]
    pub fn eval_raw(&self, z: Complex) -> Complex {
        match self.family {
            Family::PerturbedBlaschke | Family::UnperturbedBlaschke => {
                let den = 1.0 - self.a.conj() * z;
                if den.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                let z2 = z * z;
                let main = z2 * z * (z - self.a) / den;
                if self.family == Family::UnperturbedBlaschke {
                    return main;
                }
                if z.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                main + self.lambda / z2
            }
            Family::McMullen { n, d } => {
                if z.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                z.powu(n) + self.lambda / z.powu(d)
            }
        }
    }

    pub fn eval(&self, z: SpherePoint) -> SpherePoint {
        match z {
            SpherePoint::Infinity => SpherePoint::Infinity,
            SpherePoint::Finite(z) => SpherePoint::from_raw(self.eval_raw(z)),
        }
    }

    #[inline]
    pub fn derivative_raw(&self, z: Complex) -> Complex {
        match self.family {
            Family::PerturbedBlaschke | Family::UnperturbedBlaschke => {
                let ac = self.a.conj();
                let den = 1.0 - ac * z;
                if den.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                let z2 = z * z;
                let num = z2 * z * (z - self.a);
                let dnum = z2 * (4.0 * z - 3.0 * self.a);
                let main = (dnum * den + num * ac) / (den * den);
                if self.family == Family::UnperturbedBlaschke {
                    return main;
                }
                if z.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                main - 2.0 * self.lambda / (z2 * z)
            }
            Family::McMullen { n, d } => {
                if z.norm_sqr() <= POLE_EPS * POLE_EPS {
                    return Complex::new(f64::INFINITY, 0.0);
                }
                n as f64 * z.powu(n - 1) - d as f64 * self.lambda / z.powu(d + 1)
            }
        }
    }
}

/// Evaluates the selected family at `z`, returning the infinity marker at
/// (or within machine distance of) a pole and at `z = ∞`.
pub fn eval_map(z: SpherePoint, p: &MapParams) -> Result<SpherePoint> {
    p.validate()?;
    Ok(p.eval(z))
}

/// Closed-form derivative of the selected family. Poles yield the infinity
/// marker.
pub fn eval_derivative(z: SpherePoint, p: &MapParams) -> Result<SpherePoint> {
    p.validate()?;
    Ok(match z {
        SpherePoint::Infinity => SpherePoint::Infinity,
        SpherePoint::Finite(z) => SpherePoint::from_raw(p.derivative_raw(z)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn value_at_one_for_real_a() {
        let p = MapParams::perturbed(c(0.5, 0.0), c(0.001, 0.0)).unwrap();
        let w = eval_map(SpherePoint::Finite(c(1.0, 0.0)), &p).unwrap().finite().unwrap();
        assert!((w - c(1.001, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn finite_pole_maps_to_infinity() {
        let p = MapParams::perturbed(c(0.5, 0.0), c(0.001, 0.0)).unwrap();
        assert_eq!(eval_map(SpherePoint::Finite(c(2.0, 0.0)), &p).unwrap(), SpherePoint::Infinity);
        assert_eq!(eval_map(SpherePoint::Finite(c(0.0, 0.0)), &p).unwrap(), SpherePoint::Infinity);
        assert_eq!(eval_map(SpherePoint::Infinity, &p).unwrap(), SpherePoint::Infinity);
    }

    #[test]
    fn unperturbed_matches_zero_perturbation() {
        let a = c(0.3, -0.4);
        let u = MapParams::unperturbed(a).unwrap();
        // lambda = 0 is not a valid perturbed parameter, so build it raw.
        let zero = MapParams {
            family: Family::PerturbedBlaschke,
            a,
            lambda: c(0.0, 0.0),
        };
        for z in [c(0.2, 0.1), c(-1.3, 0.7), c(0.01, -0.9)] {
            assert_eq!(u.eval_raw(z), zero.eval_raw(z));
        }
    }

    #[test]
    fn mcmullen_derivative_pole() {
        let p = MapParams::mcmullen(3, 2, c(1e-3, 0.0)).unwrap();
        assert_eq!(
            eval_derivative(SpherePoint::Finite(c(0.0, 0.0)), &p).unwrap(),
            SpherePoint::Infinity
        );
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(MapParams::perturbed(c(1.0, 0.0), c(1e-5, 0.0)).is_err());
        assert!(MapParams::perturbed(c(0.0, 0.0), c(1e-5, 0.0)).is_err());
        assert!(MapParams::perturbed(c(0.5, 0.0), c(0.0, 0.0)).is_err());
        assert!(MapParams::mcmullen(1, 2, c(1e-5, 0.0)).is_err());
        let bad = MapParams {
            family: Family::PerturbedBlaschke,
            a: c(1.5, 0.0),
            lambda: c(1e-3, 0.0),
        };
        assert!(matches!(
            eval_map(SpherePoint::Finite(c(0.1, 0.0)), &bad),
            Err(Error::InvalidParams(_))
        ));
    }

    #[test]
    fn derivative_vanishes_at_closed_form_critical_point() {
        // c_-(0.5) = (3 - sqrt 5) / 2 for the unperturbed map.
        let p = MapParams::unperturbed(c(0.5, 0.0)).unwrap();
        let cm = (3.0 - 5f64.sqrt()) / 2.0;
        let d = p.derivative_raw(c(cm, 0.0));
        assert!(d.norm() < 1e-14, "{d}");
    }
}
