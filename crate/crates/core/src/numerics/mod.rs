//! Complex arithmetic on the Riemann sphere, the three map families, and the
//! root solvers used to locate preimages, zeros and critical points.

mod family;
pub(crate) mod newton;
mod poly;
mod preimage;

pub use family::{eval_derivative, eval_map, Family, MapParams};
pub use newton::{
    newton_on, newton_refine, target_polynomial, NewtonOutcome, NewtonTarget, NEWTON_MAX_ITER, NEWTON_TOL,
};
pub use poly::{polynomial_roots, Poly, RootSet, ROOT_BACKWARD_TOL};
pub use preimage::{preimage_polynomial, preimages_of_point};

use serde::{Deserialize, Serialize};

pub type Complex = num_complex::Complex64;

/// A point of the Riemann sphere. `Infinity` is an explicit marker and is
/// never represented by NaN.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SpherePoint {
    Finite(Complex),
    Infinity,
}

impl SpherePoint {
    pub fn finite(self) -> Option<Complex> {
        match self {
            SpherePoint::Finite(z) => Some(z),
            SpherePoint::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, SpherePoint::Infinity)
    }

    /// Wraps a raw value, mapping overflow and NaN to the infinity marker.
    pub fn from_raw(z: Complex) -> Self {
        if z.re.is_finite() && z.im.is_finite() {
            SpherePoint::Finite(z)
        } else {
            SpherePoint::Infinity
        }
    }

    pub fn abs(self) -> f64 {
        match self {
            SpherePoint::Finite(z) => z.norm(),
            SpherePoint::Infinity => f64::INFINITY,
        }
    }
}

impl From<Complex> for SpherePoint {
    fn from(z: Complex) -> Self {
        SpherePoint::from_raw(z)
    }
}

/// Distance below which an input is treated as sitting on a pole.
pub const POLE_EPS: f64 = 1e-300;

/// Lexicographic (re, im) ordering used for every root list.
pub fn lex_cmp(a: &Complex, b: &Complex) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Principal fifth root.
pub(crate) fn fifth_root(z: Complex) -> Complex {
    if z == Complex::new(0.0, 0.0) {
        return z;
    }
    Complex::from_polar(z.norm().powf(0.2), z.arg() / 5.0)
}

/// The five fifth roots of unity, starting at 1 and turning counterclockwise.
pub(crate) fn fifth_roots_of_unity() -> [Complex; 5] {
    std::array::from_fn(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::PI * k as f64 / 5.0))
}
