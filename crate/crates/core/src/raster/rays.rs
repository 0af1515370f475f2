use super::render::RasterGrid;
use crate::error::{Error, Result};
use crate::numerics::Complex;

/// Row and column steps of the eight lattice rays.
pub const RAY_DIRECTIONS: [(i64, i64); 8] = [(0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1)];

/// Rays needed for a positive verdict.
pub const RAY_MAJORITY: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RayVote {
    pub hits: usize,
    pub rays: usize,
}

impl RayVote {
    /// Majority verdict; a 4-4 split is reported as inconclusive.
    pub fn verdict(self) -> Result<bool> {
        if 2 * self.hits == self.rays {
            Err(Error::InconclusiveRay {
                hits: self.hits,
                rays: self.rays,
            })
        } else {
            Ok(self.hits >= RAY_MAJORITY)
        }
    }
}

/// Casts the eight rays from `start` to the edge of an `n x n` grid,
/// start pixel included. A ray counts as a hit as soon as `hit` accepts one
/// of its pixels, so later pixels are never queried.
pub fn ray_vote(n: usize, start: (usize, usize), mut hit: impl FnMut(usize, usize) -> bool) -> RayVote {
    let mut hits = 0;
    for (di, dj) in RAY_DIRECTIONS {
        let (mut i, mut j) = (start.0 as i64, start.1 as i64);
        while i >= 0 && j >= 0 && i < n as i64 && j < n as i64 {
            if hit(i as usize, j as usize) {
                hits += 1;
                break;
            }
            i += di;
            j += dj;
        }
    }
    RayVote {
        hits,
        rays: RAY_DIRECTIONS.len(),
    }
}

/// Whether `z` lies in the bounded hull of the pixels labelled `target`:
/// true when at least five of the eight rays from `z` meet such a pixel.
pub fn ray_containment(grid: &RasterGrid, z: Complex, target: &str) -> Result<bool> {
    let start = grid
        .spec
        .pixel_of(z)
        .ok_or_else(|| Error::InvalidPlane(format!("point {z} outside the viewport")))?;
    let Some(id) = grid.class_id(target) else {
        return Ok(false);
    };
    ray_vote(grid.spec.resolution, start, |i, j| {
        let l = grid.at(i, j);
        l.class_id == id && !l.ambiguous
    })
    .verdict()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::components::tests::mask_grid;

    #[test]
    fn ring_contains_its_centre() {
        let g = mask_grid(64, |x, y| (0.1..0.3).contains(&(x * x + y * y)));
        assert!(ray_containment(&g, Complex::new(0.0, 0.0), "bounded").unwrap());
        assert!(!ray_containment(&g, Complex::new(0.9, 0.9), "bounded").unwrap());
    }

    #[test]
    fn split_vote_is_inconclusive() {
        let g = mask_grid(64, |x, _| x > 0.5);
        // Rays to the right (three) plus none elsewhere: 3 of 8.
        assert!(!ray_containment(&g, Complex::new(0.0, 0.0), "bounded").unwrap());
        let g = mask_grid(64, |x, y| x > 0.5 || y > 0.5 && x > -0.2);
        let v = ray_vote(64, g.spec.pixel_of(Complex::new(0.0, 0.0)).unwrap(), |i, j| g.at(i, j).class_id == 1);
        assert_eq!(v.hits, 4);
        assert!(matches!(v.verdict(), Err(Error::InconclusiveRay { hits: 4, rays: 8 })));
    }

    #[test]
    fn unknown_target_is_false() {
        let g = mask_grid(16, |_, _| true);
        assert!(!ray_containment(&g, Complex::new(0.0, 0.0), "01:A0").unwrap());
        assert!(ray_containment(&g, Complex::new(5.0, 0.0), "bounded").is_err());
    }
}
