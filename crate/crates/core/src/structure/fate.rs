use super::itinerary::Itinerary;
use super::regions::StructuralRegions;
use crate::error::{Error, Result};
use crate::numerics::{Complex, MapParams};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum FateKind {
    /// No escape within the iteration budget.
    NonEscaping,
    /// The point lies in the immediate basin of infinity.
    DirectEscape,
    /// The orbit reaches the basin through T0.
    EscapeThroughT0,
}

/// The region the orbit occupies just before it enters T0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Terminal {
    /// The starting point is already in T0.
    T0,
    A0,
    D0,
}

impl Terminal {
    pub fn as_str(self) -> &'static str {
        match self {
            Terminal::T0 => "T0",
            Terminal::A0 => "A0",
            Terminal::D0 => "D0",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct OrbitFate {
    pub kind: FateKind,
    /// First index with `|z_n| > r_escape`.
    pub escape_time: Option<u32>,
    /// Index of the orbit point lying in T0.
    pub t0_entry: Option<u32>,
    /// One symbol per orbit point before the terminal region.
    pub itinerary: Option<Itinerary>,
    pub terminal: Option<Terminal>,
    /// Some symbol could not be decided from the sampled region boundaries.
    pub ambiguous: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orbit: Option<Vec<Complex>>,
}

impl OrbitFate {
    /// Compact text label: `bounded`, `direct`, `T0`, or the itinerary
    /// followed by the terminal region, e.g. `01:D0`.
    pub fn label(&self) -> String {
        match self.kind {
            FateKind::NonEscaping => "bounded".into(),
            FateKind::DirectEscape => "direct".into(),
            FateKind::EscapeThroughT0 => {
                let t = self.terminal.expect("escaping fate has a terminal");
                if t == Terminal::T0 {
                    "T0".into()
                } else {
                    format!("{}:{}", self.itinerary.as_ref().map(|i| i.to_string()).unwrap_or_default(), t.as_str())
                }
            }
        }
    }

    /// Whether the fate labels a point of the nested annulus `A_n`.
    pub fn is_nested_annulus(&self, n: usize) -> bool {
        self.terminal == Some(Terminal::A0)
            && !self.ambiguous
            && self.itinerary.as_ref().is_some_and(|i| i.len() == n && i.is_all_zeros())
    }
}

const REFINE_STEPS: usize = 48;

/// Decides whether `z` (known not to lie in A0, T0 or D0) is outside A0
/// (symbol 0) or inside it (symbol 1).
fn side_of_a0(z: Complex, reg: &StructuralRegions) -> Option<u8> {
    let r = z.norm();
    let (lo, hi) = (reg.a0_inner.min(), reg.a0_outer.max());
    if r < lo {
        return Some(1);
    }
    if r > hi {
        return Some(0);
    }
    let theta = z.arg();
    if r < reg.a0_inner.at(theta) * 0.98 {
        return Some(1);
    }
    if r > reg.a0_outer.at(theta) * 1.02 {
        return Some(0);
    }
    // Look along the ray for A0 on one side only.
    let u = z / r;
    let outward = (1..=REFINE_STEPS).any(|k| {
        let s = r + (hi * 1.05 - r) * k as f64 / REFINE_STEPS as f64;
        reg.in_a0(u * s)
    });
    let inward = (1..=REFINE_STEPS).any(|k| {
        let s = r - (r - lo * 0.95) * k as f64 / REFINE_STEPS as f64;
        reg.in_a0(u * s)
    });
    match (outward, inward) {
        (true, false) => Some(1),
        (false, true) => Some(0),
        _ => None,
    }
}

/// Classifies the orbit of `z` against the regions. The last orbit point
/// inside the guard disk before escape is the T0 entry; the point before it
/// lies in A0 or D0, and every earlier point gets an itinerary symbol.
pub fn classify_orbit(z: Complex, p: &MapParams, regions: &StructuralRegions, max_iter: u32) -> Result<OrbitFate> {
    if *p != regions.params {
        return Err(Error::InvalidParams("regions were computed for different parameters".into()));
    }
    Ok(classify_with(z, regions, max_iter, false))
}

/// [`classify_orbit`] without the parameter check, optionally keeping the
/// orbit.
pub fn classify_with(z: Complex, reg: &StructuralRegions, max_iter: u32, keep_orbit: bool) -> OrbitFate {
    let p = &reg.params;
    let guard2 = reg.guard_radius().powi(2);
    let esc2 = reg.r_escape * reg.r_escape;
    let mut orbit: Vec<Complex> = Vec::with_capacity(32);
    let mut last_guard: Option<usize> = None;
    let mut escape: Option<usize> = None;
    let mut w = z;
    for n in 0..=max_iter as usize {
        let m = w.norm_sqr();
        if !(m <= esc2) {
            escape = Some(n);
            if keep_orbit && w.re.is_finite() && w.im.is_finite() {
                orbit.push(w);
            }
            break;
        }
        orbit.push(w);
        if m < guard2 {
            last_guard = Some(n);
        }
        w = p.eval_raw(w);
    }
    let keep = |o: Vec<Complex>| if keep_orbit { Some(o) } else { None };
    let Some(e) = escape else {
        return OrbitFate {
            kind: FateKind::NonEscaping,
            escape_time: None,
            t0_entry: None,
            itinerary: None,
            terminal: None,
            ambiguous: false,
            orbit: keep(orbit),
        };
    };
    let Some(m) = last_guard else {
        return OrbitFate {
            kind: FateKind::DirectEscape,
            escape_time: Some(e as u32),
            t0_entry: None,
            itinerary: None,
            terminal: None,
            ambiguous: false,
            orbit: keep(orbit),
        };
    };
    let mut ambiguous = false;
    let mut itinerary = Itinerary::new();
    let terminal = if m == 0 {
        Terminal::T0
    } else {
        for zk in &orbit[..m - 1] {
            match side_of_a0(*zk, reg) {
                Some(b) => itinerary.push(b),
                None => {
                    ambiguous = true;
                    itinerary.push(0);
                }
            }
        }
        if orbit[m - 1].norm() > reg.a0_outer.max() * 1.05 {
            Terminal::D0
        } else {
            Terminal::A0
        }
    };
    OrbitFate {
        kind: FateKind::EscapeThroughT0,
        escape_time: Some(e as u32),
        t0_entry: Some(m as u32),
        itinerary: Some(itinerary),
        terminal: Some(terminal),
        ambiguous,
        orbit: keep(orbit),
    }
}
