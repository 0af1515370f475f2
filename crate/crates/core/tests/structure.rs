use blaschke_core::numerics::{Complex, MapParams};
use blaschke_core::Error;
use blaschke_core::structure::{
    classify_orbit, critical_set, itinerary_order, locate_regions, real_line_state, riemann_hurwitz, FateKind,
    Itinerary, Order, Terminal, DEFAULT_REGION_BUDGET,
};

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn word(s: &str) -> Itinerary {
    s.parse().unwrap()
}

#[test]
fn hurwitz_unit_cases() {
    assert_eq!(riemann_hurwitz(2, 1, 0), 2);
    assert_eq!(riemann_hurwitz(2, 2, 1), 3);
    assert_eq!(riemann_hurwitz(1, 4, 3), 1);
}

#[test]
fn itinerary_order_examples() {
    assert_eq!(itinerary_order(word("1"), 0usize), Order::Precedes);
    assert_eq!(itinerary_order(word("01"), 1usize), Order::Precedes);
    assert_eq!(itinerary_order(word("01"), 0usize), Order::Succeeds);
    assert_eq!(itinerary_order(3usize, 5usize), Order::Precedes);
    assert_eq!(itinerary_order(word("01"), word("011")), Order::Incomparable);
}

#[test]
fn real_fixed_point_is_one_without_perturbation() {
    let s = real_line_state(0.5, 0.0, 3).unwrap();
    assert_eq!(s.x1, 1.0);
}

#[test]
fn backward_chain_climbs_to_the_fixed_point() {
    let s = real_line_state(0.6, 2.4e-5, 10).unwrap();
    assert!(s.c_minus_real < s.z0_real);
    let mut prev = s.z0_real;
    for &z in &s.backward_chain {
        assert!(prev < z && z < s.x1);
        prev = z;
    }
    assert!(s.x1 - prev < 1e-4);
}

#[test]
fn geometric_mean_circle_reaches_t0_in_one_step() {
    let (a, lambda) = (c(0.0, 0.5), c(1e-6, 0.0));
    let p = MapParams::perturbed(a, lambda).unwrap();
    let reg = locate_regions(&p, DEFAULT_REGION_BUDGET).unwrap();
    let r = (lambda.norm() / a.norm()).powf(0.2);
    for k in 0..64 {
        let z = Complex::from_polar(r, std::f64::consts::TAU * k as f64 / 64.0);
        let fate = classify_orbit(z, &p, &reg, 2000).unwrap();
        assert_eq!(fate.kind, FateKind::EscapeThroughT0, "{z}");
        assert_eq!(fate.t0_entry, Some(1), "{z}");
        assert!(fate.itinerary.as_ref().is_none_or(|w| w.is_empty()));
    }
}

#[test]
fn a0_shrinks_as_lambda_decreases() {
    let a = c(0.5, 0.0);
    // At 1e-4 the critical value already lies in T0, so A0 and D0 merge.
    let p = MapParams::perturbed(a, c(1e-4, 0.0)).unwrap();
    assert!(matches!(locate_regions(&p, DEFAULT_REGION_BUDGET), Err(Error::Precondition { .. })));
    let outer: Vec<f64> = [1e-5, 1e-6, 1e-8]
        .iter()
        .map(|&l| {
            let p = MapParams::perturbed(a, c(l, 0.0)).unwrap();
            locate_regions(&p, DEFAULT_REGION_BUDGET).unwrap().a0_outer.max()
        })
        .collect();
    assert!(outer.windows(2).all(|w| w[1] < w[0]), "{outer:?}");
}

#[test]
fn free_critical_points_have_distinct_fates() {
    let p = MapParams::perturbed(c(0.0, 0.5), c(-1.9e-6, 3.15e-5)).unwrap();
    let reg = locate_regions(&p, DEFAULT_REGION_BUDGET).unwrap();
    let cs = critical_set(&p).unwrap();
    let plus = classify_orbit(cs.c_plus, &p, &reg, 2000).unwrap();
    assert_eq!(plus.kind, FateKind::DirectEscape);
    let minus = classify_orbit(reg.c_minus, &p, &reg, 2000).unwrap();
    assert_eq!(minus.kind, FateKind::EscapeThroughT0);
    assert_eq!(minus.terminal, Some(Terminal::D0));
}
