//! Pixel grids over the dynamical and parameter planes, component labelling
//! with hole-counted connectivity, ray containment and PPM/JSON encoding.

mod components;
mod encode;
mod plane;
mod rays;
mod render;

pub use components::{label_components, label_components_marked, ComponentMap, ComponentStats, NO_COMPONENT};
pub use encode::{encode_image, encode_meta, encode_meta_with, Palette};
pub use plane::{PlaneKind, PlaneSpec, MAX_RESOLUTION, MIN_RESOLUTION};
pub use rays::{ray_containment, ray_vote, RayVote, RAY_DIRECTIONS, RAY_MAJORITY};
pub use render::{
    parameter_fate, regions_for, render_dynamical, render_dynamical_with, render_parameter,
    render_parameter_with, stable_hash, PixelKind, PixelLabel, Provenance, RasterGrid, ENGINE, FAILED_CLASS,
};
