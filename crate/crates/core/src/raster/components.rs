use super::render::{PixelKind, RasterGrid};
use crate::numerics::Complex;
use serde::{Deserialize, Serialize};

/// Marker for pixels that belong to no component (ambiguous pixels).
pub const NO_COMPONENT: u32 = u32::MAX;

/// A 4-connected set of pixels sharing one class label. Holes are the
/// 8-connected regions of the complement that do not reach the exterior of
/// the bounding box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentStats {
    pub id: usize,
    /// Class label: an itinerary such as `01:D0`, or `T0`, `direct`, `bounded`, `failed`.
    pub class: String,
    pub kind: PixelKind,
    pub t0_entry: u32,
    pub area_px: usize,
    /// `1 + holes`.
    pub connectivity: usize,
    /// Pixel count of each hole, largest first.
    pub hole_areas: Vec<usize>,
    pub truncated: bool,
    /// `[row_min, col_min, row_max, col_max]`, inclusive.
    pub bbox: [usize; 4],
    /// Mean of `|z|` over the pixel centres.
    pub mean_radius: f64,
    /// Marked points whose pixel belongs to the component.
    pub contains: Vec<String>,
    /// Marked points whose pixel lies in one of its holes.
    pub surrounds: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentMap {
    pub components: Vec<ComponentStats>,
    /// Component index per pixel, [`NO_COMPONENT`] for excluded pixels.
    pub pixel_component: Vec<u32>,
    pub ambiguous_px: usize,
    pub resolution: usize,
}

impl ComponentMap {
    pub fn component_at(&self, row: usize, col: usize) -> Option<&ComponentStats> {
        match self.pixel_component[row * self.resolution + col] {
            NO_COMPONENT => None,
            k => Some(&self.components[k as usize]),
        }
    }

    pub fn containing(&self, mark: &str) -> Option<&ComponentStats> {
        self.components.iter().find(|c| c.contains.iter().any(|m| m == mark))
    }

    pub fn with_class<'a>(&'a self, class: &'a str) -> impl Iterator<Item = &'a ComponentStats> + 'a {
        self.components.iter().filter(move |c| c.class == class)
    }
}

pub fn label_components(grid: &RasterGrid) -> ComponentMap {
    label_components_marked(grid, &[])
}

/// Labels components and records which of the named points each one
/// contains or surrounds. Ambiguous pixels join no component; holes made
/// only of ambiguous pixels are not counted.
pub fn label_components_marked(grid: &RasterGrid, marks: &[(&str, Complex)]) -> ComponentMap {
    let n = grid.spec.resolution;
    let mut comp = vec![NO_COMPONENT; n * n];
    let excluded = |k: usize| grid.labels[k].ambiguous;
    let mut members: Vec<Vec<usize>> = Vec::new();
    let mut stack = Vec::new();

    for start in 0..n * n {
        if comp[start] != NO_COMPONENT || excluded(start) {
            continue;
        }
        let id = members.len() as u32;
        let class = grid.labels[start].class_id;
        let mut pix = Vec::new();
        comp[start] = id;
        stack.push(start);
        while let Some(k) = stack.pop() {
            pix.push(k);
            let (i, j) = (k / n, k % n);
            let mut visit = |q: usize| {
                if comp[q] == NO_COMPONENT && !excluded(q) && grid.labels[q].class_id == class {
                    comp[q] = id;
                    stack.push(q);
                }
            };
            if i > 0 {
                visit(k - n);
            }
            if i + 1 < n {
                visit(k + n);
            }
            if j > 0 {
                visit(k - 1);
            }
            if j + 1 < n {
                visit(k + 1);
            }
        }
        pix.sort_unstable();
        members.push(pix);
    }

    let mark_pixels: Vec<(&str, Option<usize>)> = marks
        .iter()
        .map(|&(name, z)| (name, grid.spec.pixel_of(z).map(|(i, j)| i * n + j)))
        .collect();

    let components = members
        .iter()
        .enumerate()
        .map(|(id, pix)| {
            let first = grid.labels[pix[0]];
            let (mut r0, mut c0, mut r1, mut c1) = (n, n, 0, 0);
            let mut radius = 0.0;
            for &k in pix {
                let (i, j) = (k / n, k % n);
                r0 = r0.min(i);
                r1 = r1.max(i);
                c0 = c0.min(j);
                c1 = c1.max(j);
                radius += grid.spec.pixel_center(i, j).norm();
            }
            let holes = holes_of(grid, &comp, id as u32, [r0, c0, r1, c1]);
            let mut hole_areas: Vec<usize> = holes.iter().map(|h| h.len()).collect();
            hole_areas.sort_unstable_by(|a, b| b.cmp(a));
            let contains = mark_pixels
                .iter()
                .filter(|(_, p)| p.is_some_and(|k| comp[k] == id as u32))
                .map(|(name, _)| name.to_string())
                .collect();
            let surrounds = mark_pixels
                .iter()
                .filter(|(_, p)| p.is_some_and(|k| holes.iter().any(|h| h.binary_search(&k).is_ok())))
                .map(|(name, _)| name.to_string())
                .collect();
            ComponentStats {
                id,
                class: grid.class_name(first.class_id).to_string(),
                kind: first.kind,
                t0_entry: first.t0_entry,
                area_px: pix.len(),
                connectivity: 1 + holes.len(),
                hole_areas,
                truncated: r0 == 0 || c0 == 0 || r1 + 1 == n || c1 + 1 == n,
                bbox: [r0, c0, r1, c1],
                mean_radius: radius / pix.len() as f64,
                contains,
                surrounds,
            }
        })
        .collect();

    ComponentMap {
        components,
        pixel_component: comp,
        ambiguous_px: grid.ambiguous_count(),
        resolution: n,
    }
}

/// Holes of component `id` as sorted lists of global pixel indices.
fn holes_of(grid: &RasterGrid, comp: &[u32], id: u32, bbox: [usize; 4]) -> Vec<Vec<usize>> {
    let n = grid.spec.resolution;
    let [r0, c0, r1, c1] = bbox;
    // Local frame padded by one cell on every side; the padding is exterior.
    let h = r1 - r0 + 3;
    let w = c1 - c0 + 3;
    let global = |li: usize, lj: usize| -> Option<usize> {
        if li == 0 || lj == 0 || li == h - 1 || lj == w - 1 {
            None
        } else {
            Some((r0 + li - 1) * n + (c0 + lj - 1))
        }
    };
    let member = |li: usize, lj: usize| global(li, lj).is_some_and(|k| comp[k] == id);
    let mut seen = vec![false; h * w];
    let mut stack = Vec::new();
    let mut holes = Vec::new();

    let mut flood = |seed: usize, seen: &mut Vec<bool>, out: &mut Vec<usize>| {
        seen[seed] = true;
        stack.push(seed);
        while let Some(q) = stack.pop() {
            let (li, lj) = (q / w, q % w);
            if let Some(k) = global(li, lj) {
                out.push(k);
            }
            for di in -1i64..=1 {
                for dj in -1i64..=1 {
                    let (ni, nj) = (li as i64 + di, lj as i64 + dj);
                    if ni < 0 || nj < 0 || ni >= h as i64 || nj >= w as i64 {
                        continue;
                    }
                    let (ni, nj) = (ni as usize, nj as usize);
                    let r = ni * w + nj;
                    if !seen[r] && !member(ni, nj) {
                        seen[r] = true;
                        stack.push(r);
                    }
                }
            }
        }
    };

    let mut outside = Vec::new();
    flood(0, &mut seen, &mut outside);
    for q in 0..h * w {
        if seen[q] || member(q / w, q % w) {
            continue;
        }
        let mut hole = Vec::new();
        flood(q, &mut seen, &mut hole);
        if hole.iter().any(|&k| !grid.labels[k].ambiguous) {
            hole.sort_unstable();
            holes.push(hole);
        }
    }
    holes
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::numerics::MapParams;
    use crate::raster::plane::PlaneSpec;
    use crate::raster::render::{PixelLabel, Provenance, ENGINE};

    /// Grid whose class 1 pixels are those where `inside` holds.
    pub(crate) fn mask_grid(n: usize, inside: impl Fn(f64, f64) -> bool) -> RasterGrid {
        let p = MapParams::perturbed(Complex::new(0.0, 0.5), Complex::new(1e-6, 0.0)).unwrap();
        let spec = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 2.0, n, 10);
        let labels = (0..n * n)
            .map(|k| {
                let z = spec.pixel_center(k / n, k % n);
                let id = inside(z.re, z.im) as u32;
                PixelLabel {
                    kind: if id == 1 { PixelKind::NonEscaping } else { PixelKind::DirectEscape },
                    escape_time: 0,
                    t0_entry: 0,
                    class_id: id,
                    itinerary_hash: id as u64,
                    ambiguous: false,
                }
            })
            .collect();
        RasterGrid {
            spec,
            labels,
            classes: vec!["direct".into(), "bounded".into()],
            provenance: Provenance { engine: ENGINE.into() },
        }
    }

    fn bounded(map: &ComponentMap) -> Vec<&ComponentStats> {
        map.with_class("bounded").collect()
    }

    #[test]
    fn disk_is_simply_connected() {
        let g = mask_grid(64, |x, y| x * x + y * y < 0.5);
        let m = label_components(&g);
        let b = bounded(&m);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].connectivity, 1);
        assert!(!b[0].truncated);
    }

    #[test]
    fn annulus_has_connectivity_two() {
        let g = mask_grid(64, |x, y| (0.1..0.6).contains(&(x * x + y * y)));
        let m = label_components_marked(&g, &[("origin", Complex::new(0.0, 0.0))]);
        let b = bounded(&m);
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].connectivity, 2);
        assert_eq!(b[0].surrounds, vec!["origin".to_string()]);
        assert!(b[0].contains.is_empty());
    }

    #[test]
    fn disk_with_two_holes() {
        let g = mask_grid(96, |x, y| {
            x * x + y * y < 0.7 && (x - 0.4).powi(2) + y * y > 0.02 && (x + 0.4).powi(2) + y * y > 0.02
        });
        let m = label_components(&g);
        assert_eq!(bounded(&m)[0].connectivity, 3);
    }

    #[test]
    fn diagonal_gap_keeps_hole_closed() {
        // A ring closed only through a diagonal step is not 4-connected,
        // so it splits; the complement leaks through the 8-neighbourhood.
        let g = mask_grid(16, |x, y| {
            let r = x.abs().max(y.abs());
            (0.3..0.6).contains(&r) && !(x > 0.3 && y > 0.3)
        });
        let m = label_components(&g);
        assert!(bounded(&m).iter().all(|c| c.connectivity == 1));
    }

    #[test]
    fn ambiguous_pixels_are_excluded() {
        let mut g = mask_grid(32, |x, y| x * x + y * y < 0.5);
        let k = 16 * 32 + 16;
        g.labels[k].ambiguous = true;
        let m = label_components(&g);
        assert_eq!(m.pixel_component[k], NO_COMPONENT);
        assert_eq!(m.ambiguous_px, 1);
        assert_eq!(bounded(&m)[0].connectivity, 1);
    }

    #[test]
    fn edge_components_are_truncated() {
        let g = mask_grid(32, |x, _| x < 0.0);
        let m = label_components(&g);
        assert!(m.components.iter().all(|c| c.truncated));
    }
}
