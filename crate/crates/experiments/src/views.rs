use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::raster::{
    label_components_marked, ray_vote, render_dynamical, ComponentMap, ComponentStats, PlaneSpec, RasterGrid,
    RayVote, RAY_DIRECTIONS,
};
use blaschke_core::structure::{classify_with, StructuralRegions};
use blaschke_core::Result;

pub const DEFAULT_RES: usize = 1024;
pub const DEFAULT_MAX_ITER: u32 = 2000;

/// Components smaller than this get a dedicated zoomed render.
const ZOOM_BELOW_PX: usize = 2000;
/// Zoomed width as a multiple of the component's bounding box.
const ZOOM_MARGIN: f64 = 6.0;
const ZOOM_LEVELS: usize = 3;
/// Viewport of a refinement zoom, relative to the component extent.
const REFINE_MARGIN: f64 = 1.5;

/// A rendered grid together with its labelled components.
#[derive(Debug, Clone)]
pub struct View {
    pub grid: RasterGrid,
    pub map: ComponentMap,
}

impl View {
    pub fn render(spec: &PlaneSpec, marks: &[(&str, Complex)]) -> Result<View> {
        let grid = render_dynamical(spec)?;
        let map = label_components_marked(&grid, marks);
        Ok(View { grid, map })
    }

    pub fn spec(&self) -> &PlaneSpec {
        &self.grid.spec
    }

    pub fn component_at(&self, z: Complex) -> Option<&ComponentStats> {
        let (i, j) = self.grid.spec.pixel_of(z)?;
        self.map.component_at(i, j)
    }

    /// Plane width of a component's bounding box (the larger side).
    pub fn extent(&self, c: &ComponentStats) -> f64 {
        let [r0, c0, r1, c1] = c.bbox;
        (r1 - r0 + 1).max(c1 - c0 + 1) as f64 * self.grid.spec.pixel_size()
    }

    pub fn bbox_center(&self, c: &ComponentStats) -> Complex {
        let [r0, c0, r1, c1] = c.bbox;
        0.5 * (self.grid.spec.pixel_center(r0, c0) + self.grid.spec.pixel_center(r1, c1))
    }

    /// A pixel centre of component `id` whose eight neighbours are in the
    /// component too, falling back to any member pixel.
    pub fn interior_point(&self, id: usize) -> Option<Complex> {
        let n = self.grid.spec.resolution;
        let pc = &self.map.pixel_component;
        let mut fallback = None;
        for k in 0..n * n {
            if pc[k] as usize != id {
                continue;
            }
            let (i, j) = (k / n, k % n);
            fallback.get_or_insert(k);
            if i == 0 || j == 0 || i + 1 == n || j + 1 == n {
                continue;
            }
            let interior = (-1i64..=1).all(|di| {
                (-1i64..=1).all(|dj| pc[((i as i64 + di) as usize) * n + (j as i64 + dj) as usize] as usize == id)
            });
            if interior {
                return Some(self.grid.spec.pixel_center(i, j));
            }
        }
        fallback.map(|k| self.grid.spec.pixel_center(k / n, k % n))
    }

    /// Non-truncated connectivities.
    pub fn measured(&self) -> impl Iterator<Item = usize> + '_ {
        self.map.components.iter().filter(|c| !c.truncated).map(|c| c.connectivity)
    }
}

/// Square viewport about 0 that contains the boundary of the basin of infinity.
pub fn overview_spec(p: MapParams, reg: &StructuralRegions, res: usize, max_iter: u32) -> PlaneSpec {
    let width = (2.4 * reg.astar_boundary.max()).max(3.0);
    let mut spec = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), width, res, max_iter);
    spec.r_escape = reg.r_escape;
    spec
}

/// The component containing `z`, measured on `overview` when it is large
/// enough and otherwise on a zoomed render around it.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub stats: ComponentStats,
    /// The zoomed view, when one was needed.
    pub zoom: Option<View>,
}

impl Resolved {
    pub fn view<'a>(&'a self, overview: &'a View) -> &'a View {
        self.zoom.as_ref().unwrap_or(overview)
    }
}

pub fn resolve_component(overview: &View, z: Complex, marks: &[(&str, Complex)]) -> Result<Option<Resolved>> {
    let Some(c) = overview.component_at(z) else {
        return Ok(None);
    };
    if c.area_px >= ZOOM_BELOW_PX {
        return Ok(Some(Resolved {
            stats: c.clone(),
            zoom: None,
        }));
    }
    let mut best = Resolved {
        stats: c.clone(),
        zoom: None,
    };
    // Zoom again while the component is still small on the latest view.
    for _ in 0..ZOOM_LEVELS {
        let next = zoom_on(best.view(overview), &best.stats, z, ZOOM_MARGIN, marks)?;
        match next {
            Some(r) => {
                let done = r.stats.area_px >= ZOOM_BELOW_PX;
                best = r;
                if done {
                    break;
                }
            }
            None => break,
        }
    }
    Ok(Some(best))
}

/// Renders a viewport `margin` times the extent of `c` around it, widened
/// until the component is not truncated.
fn zoom_on(
    overview: &View,
    c: &ComponentStats,
    z: Complex,
    margin: f64,
    marks: &[(&str, Complex)],
) -> Result<Option<Resolved>> {
    let mut width = margin * overview.extent(c);
    let centre = overview.bbox_center(c);
    for _ in 0..4 {
        if width >= overview.spec().width {
            break;
        }
        let mut spec = *overview.spec();
        spec.center = centre;
        spec.width = width;
        let zoom = View::render(&spec, marks)?;
        if let Some(zc) = zoom.component_at(z) {
            if !zc.truncated {
                return Ok(Some(Resolved {
                    stats: zc.clone(),
                    zoom: Some(zoom),
                }));
            }
        }
        width *= 2.0;
    }
    Ok(None)
}

/// Re-measures an overview component on a tight zoom, which resolves small
/// holes. Already zoomed components and components spanning most of the
/// overview are returned unchanged.
pub fn refine(overview: &View, resolved: &Resolved, z: Complex, marks: &[(&str, Complex)]) -> Result<Resolved> {
    if resolved.zoom.is_some() || 4.0 * overview.extent(&resolved.stats) > overview.spec().width {
        return Ok(resolved.clone());
    }
    Ok(zoom_on(overview, &resolved.stats, z, REFINE_MARGIN, marks)?.unwrap_or_else(|| resolved.clone()))
}

/// Labels of the pixels along the eight lattice rays from `z` on `spec`,
/// classified on demand. Returns `None` when `z` is outside the viewport.
pub fn ray_labels(reg: &StructuralRegions, spec: &PlaneSpec, z: Complex) -> Option<Vec<Vec<String>>> {
    let (i0, j0) = spec.pixel_of(z)?;
    let n = spec.resolution as i64;
    Some(
        RAY_DIRECTIONS
            .iter()
            .map(|&(di, dj)| {
                let (mut i, mut j) = (i0 as i64, j0 as i64);
                let mut out = Vec::new();
                while i >= 0 && j >= 0 && i < n && j < n {
                    let f = classify_with(spec.pixel_center(i as usize, j as usize), reg, spec.max_iter, false);
                    out.push(if f.ambiguous { String::new() } else { f.label() });
                    i += di;
                    j += dj;
                }
                out
            })
            .collect(),
    )
}

/// Vote of rays (as returned by [`ray_labels`]) meeting `target`.
pub fn vote_for(rays: &[Vec<String>], target: &str) -> RayVote {
    let hits = rays.iter().filter(|r| r.iter().any(|l| l == target)).count();
    RayVote { hits, rays: rays.len() }
}

/// Lazy variant of ray containment without storing whole rays.
pub fn lazy_containment(reg: &StructuralRegions, spec: &PlaneSpec, z: Complex, target: &str) -> Option<RayVote> {
    let start = spec.pixel_of(z)?;
    Some(ray_vote(spec.resolution, start, |i, j| {
        let f = classify_with(spec.pixel_center(i, j), reg, spec.max_iter, false);
        !f.ambiguous && f.label() == target
    }))
}
