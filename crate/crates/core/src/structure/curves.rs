use super::regions::{geometric_mean_radius, StructuralRegions};
use crate::error::{Error, Result};
use crate::numerics::{preimages_of_point, Complex, SpherePoint};
use serde::{Deserialize, Serialize};

/// Matching is ambiguous when the runner-up is closer than this multiple
/// of the best match.
const MATCH_RATIO: f64 = 2.0;
const MIN_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Side {
    /// Between T0 and A0.
    Inner,
    /// Between A0 and the basin of infinity.
    Outer,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PreimageComponent {
    pub points: Vec<Complex>,
    /// How many times the component covers the input curve.
    pub degree: usize,
    pub surrounds_origin: bool,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CurvePreimage {
    pub components: Vec<PreimageComponent>,
    pub pinch_points: Vec<Complex>,
    /// Samples actually used after densification.
    pub samples: usize,
}

impl CurvePreimage {
    pub fn total_degree(&self) -> usize {
        self.components.iter().map(|c| c.degree).sum()
    }

    pub fn on_side(&self, side: Side) -> Vec<&PreimageComponent> {
        self.components.iter().filter(|c| c.side == side).collect()
    }
}

/// Winding number of a closed polyline about `centre`.
pub fn winding_number(points: &[Complex], centre: Complex) -> i64 {
    let mut total = 0.0;
    for k in 0..points.len() {
        let u = points[k] - centre;
        let v = points[(k + 1) % points.len()] - centre;
        total += (v / u).arg();
    }
    (total / std::f64::consts::TAU).round() as i64
}

/// A circle sampled at `n` points, counterclockwise from angle 0.
pub fn circle(centre: Complex, radius: f64, n: usize) -> Vec<Complex> {
    (0..n)
        .map(|k| centre + Complex::from_polar(radius, std::f64::consts::TAU * k as f64 / n as f64))
        .collect()
}

fn densify(curve: &[Complex]) -> Vec<Complex> {
    let n = curve.len();
    let mut out = Vec::with_capacity(2 * n);
    for k in 0..n {
        let a = curve[k];
        let b = curve[(k + 1) % n];
        out.push(a);
        out.push(0.5 * (a + b));
    }
    out
}

fn finite_preimages(w: Complex, regions: &StructuralRegions) -> Result<Vec<Complex>> {
    let rs = preimages_of_point(SpherePoint::Finite(w), &regions.params)?.require_converged()?;
    Ok(rs.finite_roots())
}

/// Threads the preimages of consecutive samples into strands. Returns the
/// strands (one per starting root) or the index where matching broke.
fn thread(curve: &[Complex], regions: &StructuralRegions) -> Result<std::result::Result<Vec<Vec<Complex>>, usize>> {
    let first = finite_preimages(curve[0], regions)?;
    let mut strands: Vec<Vec<Complex>> = first.iter().map(|&z| vec![z]).collect();
    for (idx, &w) in curve.iter().enumerate().skip(1).chain(std::iter::once((curve.len(), &curve[0]))) {
        let next = finite_preimages(w, regions)?;
        if next.len() != strands.len() {
            return Ok(Err(idx));
        }
        let mut used = vec![false; next.len()];
        for s in strands.iter_mut() {
            let last = *s.last().unwrap();
            let mut d: Vec<(f64, usize)> = next.iter().enumerate().map(|(j, z)| ((z - last).norm(), j)).collect();
            d.sort_by(|x, y| x.0.total_cmp(&y.0));
            if d.len() > 1 && d[1].0 < MATCH_RATIO * d[0].0 {
                return Ok(Err(idx));
            }
            let j = d[0].1;
            if used[j] {
                return Ok(Err(idx));
            }
            used[j] = true;
            s.push(next[j]);
        }
    }
    Ok(Ok(strands))
}

/// Preimage of a closed curve that surrounds 0 and lies between T0 and the
/// basin of infinity. Roots of consecutive samples are matched by nearest
/// neighbour; the permutation they induce on the starting roots splits into
/// cycles, one per component, whose length is the degree onto the curve.
/// Ambiguous matches trigger densification up to 4096 samples.
pub fn preimage_curve(curve: &[Complex], regions: &StructuralRegions) -> Result<CurvePreimage> {
    if curve.len() < MIN_SAMPLES {
        return Err(Error::InvalidParams(format!(
            "curve needs at least {MIN_SAMPLES} samples, got {}",
            curve.len()
        )));
    }
    if winding_number(curve, Complex::new(0.0, 0.0)) == 0 {
        return Err(Error::InvalidParams("curve does not surround the origin".into()));
    }
    for &w in curve {
        if regions.in_t0(w) || regions.escapes_directly(w) {
            return Err(Error::InvalidParams(format!(
                "curve point {w} lies outside the annulus between T0 and the basin of infinity"
            )));
        }
    }

    let mut samples = curve.to_vec();
    let strands = loop {
        match thread(&samples, regions)? {
            Ok(s) => break s,
            Err(idx) if samples.len() * 2 <= MAX_SAMPLES => {
                let _ = idx;
                samples = densify(&samples);
            }
            Err(idx) => {
                return Err(Error::ContinuationBreak {
                    index: idx,
                    samples: samples.len(),
                })
            }
        }
    };

    // Each strand ends on a starting root; follow the permutation's cycles.
    let starts: Vec<Complex> = strands.iter().map(|s| s[0]).collect();
    let succ: Vec<usize> = strands
        .iter()
        .map(|s| {
            let end = *s.last().unwrap();
            (0..starts.len())
                .min_by(|&i, &j| (starts[i] - end).norm().total_cmp(&(starts[j] - end).norm()))
                .unwrap()
        })
        .collect();
    let split = geometric_mean_radius(regions.params.a, regions.params.lambda);
    let mut seen = vec![false; strands.len()];
    let mut components = Vec::new();
    for s0 in 0..strands.len() {
        if seen[s0] {
            continue;
        }
        let mut points = Vec::new();
        let mut k = s0;
        let mut degree = 0;
        while !seen[k] {
            seen[k] = true;
            degree += 1;
            let s = &strands[k];
            points.extend_from_slice(&s[..s.len() - 1]);
            k = succ[k];
        }
        if k != s0 {
            return Err(Error::ContinuationBreak {
                index: samples.len(),
                samples: samples.len(),
            });
        }
        let side = if points.iter().all(|z| z.norm() < split) {
            Side::Inner
        } else if points.iter().all(|z| z.norm() > split) {
            Side::Outer
        } else {
            return Err(Error::InvalidParams("a preimage component crosses A0".into()));
        };
        let surrounds_origin = winding_number(&points, Complex::new(0.0, 0.0)) != 0;
        components.push(PreimageComponent {
            points,
            degree,
            surrounds_origin,
            side,
        });
    }
    components.sort_by_key(|c| (c.side == Side::Outer, std::cmp::Reverse(c.degree)));

    let pinch_points = pinches(&components, regions.c_minus);
    Ok(CurvePreimage {
        components,
        pinch_points,
        samples: samples.len(),
    })
}

/// Points where two components come close to each other next to `c_minus`.
fn pinches(components: &[PreimageComponent], c_minus: Complex) -> Vec<Complex> {
    let spacing = |pts: &[Complex]| {
        (0..pts.len())
            .map(|k| (pts[(k + 1) % pts.len()] - pts[k]).norm())
            .fold(0.0, f64::max)
    };
    let mut out = Vec::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let (a, b) = (&components[i].points, &components[j].points);
            let tol = 2.0 * spacing(a).max(spacing(b));
            let mut best = (f64::INFINITY, Complex::new(0.0, 0.0));
            for p in a {
                for q in b {
                    let d = (p - q).norm();
                    if d < best.0 {
                        best = (d, 0.5 * (p + q));
                    }
                }
            }
            if best.0 < tol && (best.1 - c_minus).norm() < 4.0 * tol {
                out.push(best.1);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn winding_of_circles() {
        let c = circle(Complex::new(0.0, 0.0), 1.0, 64);
        assert_eq!(winding_number(&c, Complex::new(0.0, 0.0)), 1);
        assert_eq!(winding_number(&c, Complex::new(2.0, 0.0)), 0);
        let twice: Vec<Complex> = (0..128)
            .map(|k| Complex::from_polar(1.0, 2.0 * std::f64::consts::TAU * k as f64 / 128.0))
            .collect();
        assert_eq!(winding_number(&twice, Complex::new(0.0, 0.0)), 2);
    }
}
