use crate::error::{Error, Result};
use crate::numerics::{Complex, MapParams};
use serde::{Deserialize, Serialize};

pub const MIN_RESOLUTION: usize = 16;
pub const MAX_RESOLUTION: usize = 16384;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind")]
pub enum PlaneKind {
    /// Pixels are points `z` of the dynamical plane of one map.
    Dynamical { params: MapParams },
    /// Pixels are parameters `λ` for a fixed `a`.
    Parameter { a: Complex },
}

/// A square viewport. Pixel `(i, j)` (row `i`, column `j`, top row first)
/// sits at `center + width ((j + 0.5)/res - 0.5) + i width (0.5 - (i + 0.5)/res)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PlaneSpec {
    pub center: Complex,
    pub width: f64,
    pub resolution: usize,
    pub max_iter: u32,
    pub r_escape: f64,
    pub plane_kind: PlaneKind,
}

impl PlaneSpec {
    pub fn dynamical(params: MapParams, center: Complex, width: f64, resolution: usize, max_iter: u32) -> Self {
        PlaneSpec {
            center,
            width,
            resolution,
            max_iter,
            r_escape: crate::structure::DEFAULT_R_ESCAPE,
            plane_kind: PlaneKind::Dynamical { params },
        }
    }

    pub fn parameter(a: Complex, center: Complex, width: f64, resolution: usize, max_iter: u32) -> Self {
        PlaneSpec {
            center,
            width,
            resolution,
            max_iter,
            r_escape: crate::structure::DEFAULT_R_ESCAPE,
            plane_kind: PlaneKind::Parameter { a },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_RESOLUTION..=MAX_RESOLUTION).contains(&self.resolution) {
            return Err(Error::InvalidPlane(format!(
                "resolution {} outside [{MIN_RESOLUTION}, {MAX_RESOLUTION}]",
                self.resolution
            )));
        }
        if !(self.width > 0.0 && self.width.is_finite()) {
            return Err(Error::InvalidPlane(format!("width must be positive, got {}", self.width)));
        }
        if !(self.center.re.is_finite() && self.center.im.is_finite()) {
            return Err(Error::InvalidPlane("center must be finite".into()));
        }
        if !(self.r_escape > 2.0 && self.r_escape.is_finite()) {
            return Err(Error::InvalidPlane(format!("escape radius {} too small", self.r_escape)));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidPlane("max_iter must be positive".into()));
        }
        match self.plane_kind {
            PlaneKind::Dynamical { params } => params.validate(),
            PlaneKind::Parameter { a } => {
                let r = a.norm();
                if r > 0.0 && r < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidParams(format!("a must lie in the punctured unit disk, |a| = {r}")))
                }
            }
        }
    }

    pub fn pixel_size(&self) -> f64 {
        self.width / self.resolution as f64
    }

    /// Centre of pixel `(row, col)`.
    #[inline]
    pub fn pixel_center(&self, row: usize, col: usize) -> Complex {
        let n = self.resolution as f64;
        Complex::new(
            self.center.re + self.width * ((col as f64 + 0.5) / n - 0.5),
            self.center.im + self.width * (0.5 - (row as f64 + 0.5) / n),
        )
    }

    /// Pixel containing `z`, if inside the viewport.
    pub fn pixel_of(&self, z: Complex) -> Option<(usize, usize)> {
        let n = self.resolution as f64;
        let col = ((z.re - self.center.re) / self.width + 0.5) * n;
        let row = (0.5 - (z.im - self.center.im) / self.width) * n;
        if col >= 0.0 && row >= 0.0 && col < n && row < n {
            Some((row as usize, col as usize))
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pixel_geometry_round_trips() {
        let p = MapParams::perturbed(Complex::new(0.5, 0.0), Complex::new(1e-6, 0.0)).unwrap();
        let s = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 2.0, 16, 100);
        let top_left = s.pixel_center(0, 0);
        assert!((top_left - Complex::new(-1.0 + 1.0 / 16.0, 1.0 - 1.0 / 16.0)).norm() < 1e-15);
        for (i, j) in [(0, 0), (3, 7), (15, 15)] {
            assert_eq!(s.pixel_of(s.pixel_center(i, j)), Some((i, j)));
        }
        assert_eq!(s.pixel_of(Complex::new(5.0, 0.0)), None);
    }

    #[test]
    fn resolution_cap() {
        let p = MapParams::perturbed(Complex::new(0.5, 0.0), Complex::new(1e-6, 0.0)).unwrap();
        let s = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 2.0, 32768, 100);
        assert!(matches!(s.validate(), Err(Error::InvalidPlane(_))));
        let s = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 2.0, 8, 100);
        assert!(s.validate().is_err());
    }
}
