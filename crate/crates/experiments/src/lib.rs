//! Parameter searches and measurements for the perturbed Blaschke family:
//! case finders for the three connectivity regimes, ring detection in the
//! parameter plane, the real-axis search, the nesting numbers r, s, t, and
//! the acceptance suite that ties them together.

pub mod cases;
pub mod checks;
pub mod real_search;
pub mod rings;
pub mod rts;
pub mod verify;
pub mod views;

pub use cases::{analyze_case, analyze_case_view, find_case, Case, CaseOptions, CaseReport, SearchOutcome};
pub use real_search::{case_a_real_search, RealSearchReport};
pub use rings::{detect_rings, RingBand, RingScan};
pub use rts::{compute_r, compute_s_t, nesting_index, RtsRecord};
pub use verify::{verify_all, CriterionResult, Status, VerifyConfig, CRITERIA};
