use crate::views::{lazy_containment, overview_spec, refine, resolve_component, Resolved, View, DEFAULT_MAX_ITER, DEFAULT_RES};
use blaschke_core::numerics::{preimages_of_point, Complex, MapParams, SpherePoint};
use blaschke_core::raster::{regions_for, PlaneSpec};
use blaschke_core::structure::{
    classify_with, critical_set, riemann_hurwitz, CriticalSet, Itinerary, OrbitFate, StructuralRegions, Terminal,
};
use blaschke_core::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Preimage generations sampled for the connectivity chain in case c.
const CHAIN_GENERATIONS: usize = 3;
/// Geometric step of the inward λ walk.
pub const WALK_RATIO: f64 = 0.97;
pub const WALK_BUDGET: usize = 500;
const LOOP_SAMPLES: usize = 64;
const LOOP_COUNT: usize = 8;
const LOOP_START: f64 = 0.1;
const LOOP_SHRINK: f64 = 0.7;
/// Dynamical renders attempted per search before giving up.
const CONFIRM_BUDGET: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Case {
    A,
    B,
    C,
}

impl std::str::FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(Case::A),
            "b" => Ok(Case::B),
            "c" => Ok(Case::C),
            other => Err(Error::InvalidParams(format!("case must be a, b or c, got {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseOptions {
    pub resolution: usize,
    pub max_iter: u32,
}

impl Default for CaseOptions {
    fn default() -> Self {
        CaseOptions {
            resolution: DEFAULT_RES,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// One component of a measured preimage chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChainLink {
    pub itinerary: String,
    pub connectivity: usize,
    pub area_px: usize,
}

/// `m_U` measured against `k (m_V - 2) + r + 2` for a component `U` mapped
/// onto `V`, with `k` counted from preimages and `r` from critical points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HurwitzCheck {
    pub upper: String,
    pub lower: String,
    pub m_upper: usize,
    pub m_lower: usize,
    pub degree: usize,
    pub criticals: usize,
    pub predicted: i64,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseEvidence {
    pub fate: String,
    pub terminal: Option<String>,
    pub connectivity: usize,
    pub area_px: usize,
    pub zoomed: bool,
    pub surrounds_origin: bool,
    /// Connectivity to number of non-truncated components.
    pub measured: BTreeMap<usize, usize>,
    /// 0-surrounding outer preimages of the critical component, in order.
    pub chain: Vec<ChainLink>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CaseReport {
    /// The case the evidence satisfies, if any.
    pub case: Option<Case>,
    pub a_param: Complex,
    pub lambda: Complex,
    pub evidence: CaseEvidence,
    pub hurwitz: Vec<HurwitzCheck>,
    pub grids: Vec<PlaneSpec>,
}

impl CaseReport {
    pub fn confirms(&self, case: Case) -> bool {
        self.case == Some(case)
    }
}

fn add_measured(into: &mut BTreeMap<usize, usize>, view: &View) {
    for m in view.measured() {
        *into.entry(m).or_insert(0) += 1;
    }
}

fn decide(e: &CaseEvidence) -> Option<Case> {
    let all_in = |allowed: &[usize]| e.measured.keys().all(|m| allowed.contains(m));
    let d0 = e.terminal.as_deref() == Some("D0");
    if d0 && e.connectivity == 1 && !e.surrounds_origin && all_in(&[1, 2]) {
        return Some(Case::A);
    }
    if e.connectivity == 3 && !e.surrounds_origin && all_in(&[1, 2, 3]) {
        return Some(Case::B);
    }
    let chain_ok = e.chain.len() >= 2
        && e.chain.windows(2).all(|w| w[0].connectivity <= w[1].connectivity)
        && e.chain[0].connectivity < e.chain[1].connectivity
        && e.chain.iter().any(|c| c.connectivity > 3);
    if e.surrounds_origin && e.connectivity >= 2 && chain_ok && e.measured.keys().any(|&m| m >= 4) {
        return Some(Case::C);
    }
    None
}

/// Number of preimages of `w` (with multiplicity) that land in component
/// `id` of `view`.
fn degree_onto(p: &MapParams, view: &View, id: usize, w: Complex) -> Result<usize> {
    let roots = preimages_of_point(SpherePoint::Finite(w), p)?;
    Ok(roots
        .finite_roots()
        .into_iter()
        .filter(|&z| view.component_at(z).is_some_and(|c| c.id == id))
        .count())
}

fn criticals_in(cs: &CriticalSet, view: &View, id: usize) -> usize {
    std::iter::once(cs.c_minus)
        .chain(std::iter::once(cs.c_plus))
        .chain(cs.ring_criticals.iter().copied())
        .filter(|&z| view.component_at(z).is_some_and(|c| c.id == id))
        .count()
}

/// Checks the Riemann–Hurwitz count between `upper` and its image `lower`.
fn hurwitz_check(
    p: &MapParams,
    cs: &CriticalSet,
    overview: &View,
    upper: &Resolved,
    lower: &Resolved,
    marks: &[(&str, Complex)],
) -> Result<HurwitzCheck> {
    let sharpen = |r: &Resolved| -> Result<Resolved> {
        match overview.interior_point(r.stats.id) {
            Some(z) if r.zoom.is_none() => refine(overview, r, z, marks),
            _ => Ok(r.clone()),
        }
    };
    let (upper, lower) = (&sharpen(upper)?, &sharpen(lower)?);
    let uv = upper.view(overview);
    let lv = lower.view(overview);
    let w = lv
        .interior_point(lower.stats.id)
        .ok_or_else(|| Error::NotFound("no pixel in the image component".into()))?;
    let k = degree_onto(p, uv, upper.stats.id, w)?;
    let r = criticals_in(cs, uv, upper.stats.id);
    let predicted = riemann_hurwitz(lower.stats.connectivity as u32, k as u32, r as u32);
    Ok(HurwitzCheck {
        upper: upper.stats.class.clone(),
        lower: lower.stats.class.clone(),
        m_upper: upper.stats.connectivity,
        m_lower: lower.stats.connectivity,
        degree: k,
        criticals: r,
        predicted,
        consistent: k > 0 && predicted == upper.stats.connectivity as i64,
    })
}

/// The 0-surrounding component with class `label` in the overview.
fn surrounding_with_class<'a>(overview: &'a View, label: &str) -> Option<&'a blaschke_core::raster::ComponentStats> {
    overview
        .map
        .components
        .iter()
        .filter(|c| c.class == label && c.surrounds.iter().any(|m| m == "0"))
        .max_by_key(|c| c.area_px)
}

/// Renders the dynamical plane at `(a, λ)` and measures the component of
/// `c_minus`, its connectivity chain and the connectivities around it.
pub fn analyze_case(a: Complex, lambda: Complex, opts: &CaseOptions) -> Result<CaseReport> {
    analyze_case_view(a, lambda, opts).map(|(r, _)| r)
}

/// As [`analyze_case`], also returning the overview render.
pub fn analyze_case_view(a: Complex, lambda: Complex, opts: &CaseOptions) -> Result<(CaseReport, View)> {
    let p = MapParams::perturbed(a, lambda)?;
    let probe = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 3.0, opts.resolution, opts.max_iter);
    let reg = regions_for(&probe)?;
    let cs = critical_set(&p)?;
    let spec = overview_spec(p, &reg, opts.resolution, opts.max_iter);
    let v = p.eval_raw(reg.c_minus);
    let marks = [("c-", reg.c_minus), ("0", Complex::new(0.0, 0.0)), ("z0", cs.z0), ("v", v)];
    let overview = View::render(&spec, &marks)?;
    let fate = classify_with(reg.c_minus, &reg, opts.max_iter, false);

    let own = resolve_component(&overview, reg.c_minus, &marks)?
        .ok_or_else(|| Error::NotFound("critical point outside the overview".into()))?;
    let surrounds_origin = overview
        .component_at(reg.c_minus)
        .is_some_and(|c| c.surrounds.iter().any(|m| m == "0"));

    let mut measured = BTreeMap::new();
    add_measured(&mut measured, &overview);
    let mut grids = vec![spec];
    if let Some(z) = &own.zoom {
        add_measured(&mut measured, z);
        grids.push(*z.spec());
    }

    let mut chain = Vec::new();
    let mut hurwitz = Vec::new();
    if let Some(lower) = resolve_component(&overview, v, &marks)? {
        hurwitz.push(hurwitz_check(&p, &cs, &overview, &own, &lower, &marks)?);
    }
    if surrounds_origin && fate.terminal == Some(Terminal::A0) && !fate.ambiguous {
        let bits = fate.itinerary.clone().unwrap_or_default();
        let mut prev: Option<Resolved> = Some(own.clone());
        for g in 0..CHAIN_GENERATIONS {
            let mut word = Itinerary::zeros(g);
            for &b in bits.bits() {
                word.push(b);
            }
            let label = format!("{word}:A0");
            let Some(c) = surrounding_with_class(&overview, &label) else {
                break;
            };
            chain.push(ChainLink {
                itinerary: label,
                connectivity: c.connectivity,
                area_px: c.area_px,
            });
            let this = Resolved {
                stats: c.clone(),
                zoom: None,
            };
            if g == 1 {
                if let Some(lower) = &prev {
                    hurwitz.push(hurwitz_check(&p, &cs, &overview, &this, lower, &marks)?);
                }
            }
            prev = Some(this);
        }
    }

    let evidence = CaseEvidence {
        fate: fate.label(),
        terminal: fate.terminal.map(|t| t.as_str().to_string()),
        connectivity: own.stats.connectivity,
        area_px: own.stats.area_px,
        zoomed: own.zoom.is_some(),
        surrounds_origin,
        measured,
        chain,
    };
    let report = CaseReport {
        case: decide(&evidence),
        a_param: a,
        lambda,
        evidence,
        hurwitz,
        grids,
    };
    Ok((report, overview))
}

/// Cheap screening of a parameter before a full render.
fn screen(a: Complex, lambda: Complex, opts: &CaseOptions) -> Option<(OrbitFate, bool)> {
    let p = MapParams::perturbed(a, lambda).ok()?;
    let probe = PlaneSpec::dynamical(p, Complex::new(0.0, 0.0), 3.0, opts.resolution, opts.max_iter);
    let reg: StructuralRegions = regions_for(&probe).ok()?;
    let fate = classify_with(reg.c_minus, &reg, opts.max_iter, false);
    if fate.ambiguous || fate.terminal.is_none() {
        return Some((fate, false));
    }
    let spec = overview_spec(p, &reg, opts.resolution, opts.max_iter);
    let surrounds = lazy_containment(&reg, &spec, Complex::new(0.0, 0.0), &fate.label())
        .and_then(|v| v.verdict().ok())
        .unwrap_or(false);
    Some((fate, surrounds))
}

/// Outcome of a parameter search, with the parameters it visited.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SearchOutcome {
    pub report: Option<CaseReport>,
    /// `(λ, c_minus label)` per screened parameter.
    pub trace: Vec<(Complex, String)>,
    pub renders: usize,
}

fn walk(
    a: Complex,
    start: Complex,
    opts: &CaseOptions,
    trace: &mut Vec<(Complex, String)>,
    renders: &mut usize,
    want: Case,
) -> Result<Option<CaseReport>> {
    for k in 0..WALK_BUDGET {
        let lambda = start * WALK_RATIO.powi(k as i32);
        let Some((fate, surrounds)) = screen(a, lambda, opts) else {
            trace.push((lambda, "failed".into()));
            continue;
        };
        trace.push((lambda, fate.label()));
        let candidate = match want {
            Case::A => fate.terminal == Some(Terminal::D0),
            Case::C => fate.terminal == Some(Terminal::A0) && surrounds,
            Case::B => false,
        };
        if candidate && *renders < CONFIRM_BUDGET {
            *renders += 1;
            let r = analyze_case(a, lambda, opts)?;
            if r.confirms(want) {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

/// Searches for a parameter realising `case`, starting at `start`.
///
/// Case c walks λ inward along its ray until `c_minus` lands in a
/// 0-surrounding component. Case a walks the same ray until `c_minus`
/// eventually maps into D0. Case b first finds a case-a parameter, then
/// circles it on shrinking loops looking for a triply connected critical
/// component. Every candidate is confirmed on a full render.
pub fn find_case(a: Complex, case: Case, start: Complex, opts: &CaseOptions) -> Result<SearchOutcome> {
    let mut trace = Vec::new();
    let mut renders = 0;
    let report = match case {
        Case::A | Case::C => walk(a, start, opts, &mut trace, &mut renders, case)?,
        Case::B => {
            let first = analyze_case(a, start, opts);
            renders += 1;
            match first {
                Ok(r) if r.confirms(Case::B) => Some(r),
                _ => {
                    let anchor = match first {
                        Ok(r) if r.evidence.terminal.as_deref() == Some("D0") => Some(start),
                        _ => walk(a, start, opts, &mut trace, &mut renders, Case::A)?.map(|r| r.lambda),
                    };
                    match anchor {
                        Some(centre) => loops(a, centre, opts, &mut trace, &mut renders)?,
                        None => None,
                    }
                }
            }
        }
    };
    Ok(SearchOutcome { report, trace, renders })
}

fn loops(
    a: Complex,
    centre: Complex,
    opts: &CaseOptions,
    trace: &mut Vec<(Complex, String)>,
    renders: &mut usize,
) -> Result<Option<CaseReport>> {
    let mut radius = LOOP_START * centre.norm();
    for _ in 0..LOOP_COUNT {
        for k in 0..LOOP_SAMPLES {
            let lambda = centre + Complex::from_polar(radius, std::f64::consts::TAU * k as f64 / LOOP_SAMPLES as f64);
            let Some((fate, surrounds)) = screen(a, lambda, opts) else {
                trace.push((lambda, "failed".into()));
                continue;
            };
            trace.push((lambda, fate.label()));
            if fate.terminal == Some(Terminal::A0) && !surrounds && *renders < CONFIRM_BUDGET {
                *renders += 1;
                let r = analyze_case(a, lambda, opts)?;
                if r.confirms(Case::B) {
                    return Ok(Some(r));
                }
            }
        }
        radius *= LOOP_SHRINK;
    }
    Ok(None)
}
