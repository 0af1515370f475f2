use crate::error::{Error, Result};
use crate::numerics::{
    fifth_root, fifth_roots_of_unity, newton_on, Complex, Family, MapParams, NewtonTarget,
};
use crate::numerics::newton::continue_root;
use crate::numerics::target_polynomial;
use serde::{Deserialize, Serialize};

/// Stations used when continuing a root from the unperturbed map.
const CONTINUATION_STEPS: usize = 8;

/// Roots closer than this (relative to their size) count as the same root.
const COLLISION_REL: f64 = 1e-7;

/// All critical points and zeros of a perturbed map, each with the Newton
/// residual of the polynomial it solves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalSet {
    pub c_plus: Complex,
    pub c_minus: Complex,
    /// The five critical points near the origin (empty when unperturbed).
    pub ring_criticals: Vec<Complex>,
    /// The five zeros near the origin (empty when unperturbed).
    pub zeros_ring: Vec<Complex>,
    /// Continuation of the zero `a` of the unperturbed map.
    pub z0: Complex,
    pub pole_finite: Complex,
    /// Critical multiplicity at the origin.
    pub origin_multiplicity: u32,
    pub infinity_multiplicity: u32,
    /// Multiplicity of the origin as a zero (3 for the unperturbed map, else 0).
    pub origin_zero_multiplicity: u32,
    pub residuals: CriticalResiduals,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalResiduals {
    pub c_plus: f64,
    pub c_minus: f64,
    pub ring_criticals: Vec<f64>,
    pub zeros_ring: Vec<f64>,
    pub z0: f64,
}

impl CriticalResiduals {
    pub fn max(&self) -> f64 {
        let mut m = self.c_plus.max(self.c_minus).max(self.z0);
        for r in self.ring_criticals.iter().chain(&self.zeros_ring) {
            m = m.max(*r);
        }
        m
    }
}

impl CriticalSet {
    /// Critical points counted with multiplicity, poles included.
    pub fn critical_count(&self) -> u32 {
        self.infinity_multiplicity + self.origin_multiplicity + 2 + self.ring_criticals.len() as u32
    }

    pub fn zero_count(&self) -> u32 {
        1 + self.zeros_ring.len() as u32 + self.origin_zero_multiplicity
    }
}

/// The free critical points of the unperturbed map,
/// `a / (3|a|^2) (2 + |a|^2 ± sqrt((|a|^2 - 4)(|a|^2 - 1)))`, as `(c_plus, c_minus)`.
pub fn unperturbed_free_criticals(a: Complex) -> (Complex, Complex) {
    let s = a.norm_sqr();
    let root = ((s - 4.0) * (s - 1.0)).sqrt();
    let scale = a / (3.0 * s);
    (scale * (2.0 + s + root), scale * (2.0 + s - root))
}

/// Seeds `xi (lambda / a)^(1/5)` for the zeros near the origin.
pub fn ring_zero_seeds(a: Complex, lambda: Complex) -> [Complex; 5] {
    let base = fifth_root(lambda / a);
    fifth_roots_of_unity().map(|xi| xi * base)
}

/// Seeds `-xi (2 lambda / (3 a))^(1/5)` for the critical points near the origin.
pub fn ring_critical_seeds(a: Complex, lambda: Complex) -> [Complex; 5] {
    let base = fifth_root(2.0 * lambda / (3.0 * a));
    fifth_roots_of_unity().map(|xi| -xi * base)
}

fn unperturbed_at(p: &MapParams) -> MapParams {
    MapParams {
        family: Family::UnperturbedBlaschke,
        a: p.a,
        lambda: Complex::new(0.0, 0.0),
    }
}

/// Follows `seed` (a root of the unperturbed equation) to the perturbed
/// parameters. A direct Newton solve is tried first; the homotopy is the
/// fallback when the direct solve fails or lands on a different branch.
fn continued(seed: Complex, target: NewtonTarget, p: &MapParams) -> Result<(Complex, f64)> {
    let poly = target_polynomial(target, p)?;
    if let Ok(out) = newton_on(&poly, seed) {
        let drift = (out.root - seed).norm();
        if drift <= 0.1 * seed.norm().max(1e-3) {
            return Ok((out.root, out.residual));
        }
    }
    let out = continue_root(seed, target, &unperturbed_at(p), p, CONTINUATION_STEPS)?;
    Ok((out.root, out.residual))
}

/// The free critical point `c_minus` alone, which is all a parameter-plane
/// pixel needs.
pub fn critical_minus(p: &MapParams) -> Result<Complex> {
    require_blaschke(p)?;
    let (_, seed) = unperturbed_free_criticals(p.a);
    if p.family == Family::UnperturbedBlaschke {
        return Ok(seed);
    }
    continued(seed, NewtonTarget::CriticalPoint, p).map(|r| r.0)
}

fn require_blaschke(p: &MapParams) -> Result<()> {
    p.validate()?;
    if matches!(p.family, Family::McMullen { .. }) {
        return Err(Error::InvalidParams(
            "critical set is defined for the Blaschke families".into(),
        ));
    }
    Ok(())
}

fn refine_group(
    group: &'static str,
    seeds: [Complex; 5],
    target: NewtonTarget,
    p: &MapParams,
) -> Result<(Vec<Complex>, Vec<f64>)> {
    let poly = target_polynomial(target, p)?;
    let mut roots = vec![Complex::new(0.0, 0.0); 5];
    let mut res = vec![0.0; 5];
    for (k, s) in seeds.iter().enumerate() {
        let out = newton_on(&poly, *s)?;
        roots[k] = out.root;
        res[k] = out.residual;
    }
    check_distinct(group, &roots)?;
    Ok((roots, res))
}

fn check_distinct(group: &'static str, roots: &[Complex]) -> Result<()> {
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let scale = roots[i].norm().max(roots[j].norm()).max(f64::MIN_POSITIVE);
            if (roots[i] - roots[j]).norm() <= COLLISION_REL * scale {
                return Err(Error::SeedCollision {
                    group,
                    first: i,
                    second: j,
                    root: roots[i],
                });
            }
        }
    }
    Ok(())
}

/// Locates all critical points and zeros of the perturbed map: `c_plus`,
/// `c_minus` and `z0` by continuation from the unperturbed map, the ring
/// points by Newton from their fifth-root seeds. Two seeds converging to the
/// same root is an error. For the unperturbed map the closed forms are
/// returned and the ring collapses into the origin.
pub fn critical_set(p: &MapParams) -> Result<CriticalSet> {
    require_blaschke(p)?;
    let (cp_seed, cm_seed) = unperturbed_free_criticals(p.a);
    if p.family == Family::UnperturbedBlaschke {
        let crit = target_polynomial(NewtonTarget::CriticalPoint, p)?;
        return Ok(CriticalSet {
            c_plus: cp_seed,
            c_minus: cm_seed,
            ring_criticals: Vec::new(),
            zeros_ring: Vec::new(),
            z0: p.a,
            pole_finite: 1.0 / p.a.conj(),
            origin_multiplicity: 2,
            infinity_multiplicity: 2,
            origin_zero_multiplicity: 3,
            residuals: CriticalResiduals {
                c_plus: crit.eval(cp_seed).norm(),
                c_minus: crit.eval(cm_seed).norm(),
                ring_criticals: Vec::new(),
                zeros_ring: Vec::new(),
                z0: 0.0,
            },
        });
    }
    let (c_plus, r_cp) = continued(cp_seed, NewtonTarget::CriticalPoint, p)?;
    let (c_minus, r_cm) = continued(cm_seed, NewtonTarget::CriticalPoint, p)?;
    let (ring_criticals, r_ring_c) = refine_group(
        "ring criticals",
        ring_critical_seeds(p.a, p.lambda),
        NewtonTarget::CriticalPoint,
        p,
    )?;
    let zero = NewtonTarget::PreimageOf(Complex::new(0.0, 0.0));
    let (z0, r_z0) = continued(p.a, zero, p)?;
    let (zeros_ring, r_ring_z) = refine_group("ring zeros", ring_zero_seeds(p.a, p.lambda), zero, p)?;

    let mut all_crit = vec![c_plus, c_minus];
    all_crit.extend_from_slice(&ring_criticals);
    check_distinct("critical points", &all_crit)?;
    let mut all_zeros = vec![z0];
    all_zeros.extend_from_slice(&zeros_ring);
    check_distinct("zeros", &all_zeros)?;

    Ok(CriticalSet {
        c_plus,
        c_minus,
        ring_criticals,
        zeros_ring,
        z0,
        pole_finite: 1.0 / p.a.conj(),
        origin_multiplicity: 1,
        infinity_multiplicity: 2,
        origin_zero_multiplicity: 0,
        residuals: CriticalResiduals {
            c_plus: r_cp,
            c_minus: r_cm,
            ring_criticals: r_ring_c,
            zeros_ring: r_ring_z,
            z0: r_z0,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn closed_form_at_half() {
        let (cp, cm) = unperturbed_free_criticals(c(0.5, 0.0));
        assert!((cm.re - (3.0 - 5f64.sqrt()) / 2.0).abs() < 1e-15);
        assert!((cp.re - (3.0 + 5f64.sqrt()) / 2.0).abs() < 1e-14);
    }

    #[test]
    fn full_set_is_consistent() {
        let p = MapParams::perturbed(c(0.0, 0.5), c(1e-6, 2e-6)).unwrap();
        let cs = critical_set(&p).unwrap();
        assert_eq!(cs.critical_count(), 10);
        assert_eq!(cs.zero_count(), 6);
        assert!(cs.residuals.max() <= 1e-10);
        for z in [cs.c_plus, cs.c_minus].iter().chain(&cs.ring_criticals) {
            let d = p.derivative_raw(*z);
            // Scale of the derivative near the ring is large, so compare
            // relative to the two terms it balances.
            let scale = 2.0 * p.lambda.norm() / z.norm().powi(3) + 4.0 * z.norm().powi(3);
            assert!(d.norm() <= 1e-8 * scale, "{z}: {d}");
        }
        for z in cs.zeros_ring.iter().chain([cs.z0].iter()) {
            assert!(p.eval_raw(*z).norm() < 1e-10);
        }
    }

    #[test]
    fn unperturbed_ledger() {
        let p = MapParams::unperturbed(c(0.5, 0.0)).unwrap();
        let cs = critical_set(&p).unwrap();
        assert_eq!(cs.critical_count(), 6);
        assert_eq!(cs.zero_count(), 4);
        assert!((cs.c_minus.re - 0.381966).abs() < 1e-6);
    }

    #[test]
    fn rejects_other_families() {
        let p = MapParams::mcmullen(3, 2, c(1e-5, 0.0)).unwrap();
        assert!(critical_set(&p).is_err());
    }

    #[test]
    fn collision_is_reported() {
        let roots = [c(0.1, 0.0), c(0.2, 0.0), c(0.1, 1e-12)];
        assert!(matches!(
            check_distinct("test", &roots),
            Err(Error::SeedCollision { first: 0, second: 2, .. })
        ));
    }
}
