use blaschke_core::numerics::{preimages_of_point, Complex, MapParams, SpherePoint};
use blaschke_core::raster::PlaneSpec;
use blaschke_core::structure::{
    classify_with, itinerary_order, locate_regions, Itinerary, Order, OrderKey, StructuralRegions,
    DEFAULT_REGION_BUDGET,
};
use proptest::prelude::*;
use std::f64::consts::TAU;
use std::sync::OnceLock;

fn disk_point() -> impl Strategy<Value = Complex> {
    (0.05f64..0.95, 0.0..TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn small_lambda() -> impl Strategy<Value = Complex> {
    (-9.0f64..-3.0, 0.0..TAU).prop_map(|(e, t)| Complex::from_polar(10f64.powf(e), t))
}

fn plane_point() -> impl Strategy<Value = Complex> {
    (0.02f64..3.0, 0.0..TAU).prop_map(|(r, t)| Complex::from_polar(r, t))
}

fn word() -> impl Strategy<Value = Itinerary> {
    prop::collection::vec(0u8..2, 1..7).prop_map(|b| Itinerary::from_bits(&b))
}

fn order_key() -> impl Strategy<Value = OrderKey> {
    prop_oneof![(0usize..6).prop_map(OrderKey::Nested), word().prop_map(OrderKey::from)]
}

const ANNULUS_AS: [Complex; 3] = [Complex::new(0.5, 0.0), Complex::new(0.0, 0.5), Complex::new(0.3, 0.4)];

fn annulus_regions() -> &'static [StructuralRegions] {
    static REGIONS: OnceLock<Vec<StructuralRegions>> = OnceLock::new();
    REGIONS.get_or_init(|| {
        ANNULUS_AS
            .iter()
            .map(|&a| {
                let p = MapParams::perturbed(a, Complex::new(1e-6, 0.0)).unwrap();
                locate_regions(&p, DEFAULT_REGION_BUDGET).unwrap()
            })
            .collect()
    })
}

fn figure_regions() -> &'static StructuralRegions {
    static REGIONS: OnceLock<StructuralRegions> = OnceLock::new();
    REGIONS.get_or_init(|| {
        let p = MapParams::perturbed(Complex::new(0.0, 0.5), Complex::new(7.74e-6, 9.9e-6)).unwrap();
        locate_regions(&p, DEFAULT_REGION_BUDGET).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn map_commutes_with_conjugation(a in disk_point(), l in small_lambda(), z in plane_point()) {
        let p = MapParams::perturbed(a, l).unwrap();
        let q = MapParams::perturbed(a.conj(), l.conj()).unwrap();
        let (w, w_bar) = (p.eval_raw(z), q.eval_raw(z.conj()));
        prop_assert!((w.conj() - w_bar).norm() <= 1e-12 * w.norm().max(1.0));
    }

    #[test]
    fn zeros_sum_to_a_and_multiply_to_lambda(a in disk_point(), l in small_lambda()) {
        let p = MapParams::perturbed(a, l).unwrap();
        let roots = preimages_of_point(SpherePoint::Finite(Complex::new(0.0, 0.0)), &p).unwrap().finite_roots();
        prop_assert_eq!(roots.len(), 6);
        let sum: Complex = roots.iter().sum();
        let prod: Complex = roots.iter().product();
        prop_assert!((sum - a).norm() <= 1e-10);
        prop_assert!((prod - l).norm() <= 1e-9 * l.norm());
    }

    #[test]
    fn preimages_map_back(a in disk_point(), l in small_lambda(), w in plane_point()) {
        let p = MapParams::perturbed(a, l).unwrap();
        let rs = preimages_of_point(SpherePoint::Finite(w), &p).unwrap();
        prop_assert_eq!(rs.roots.len(), 6);
        for z in rs.finite_roots() {
            let back = p.eval_raw(z);
            prop_assert!((back - w).norm() <= 1e-7 * w.norm().max(1.0), "B({}) = {} vs {}", z, back, w);
        }
    }

    #[test]
    fn derivative_matches_central_difference(a in disk_point(), l in small_lambda(), z in plane_point()) {
        let p = MapParams::perturbed(a, l).unwrap();
        prop_assume!((Complex::new(1.0, 0.0) - a.conj() * z).norm() > 0.1);
        let h = 1e-6 * z.norm();
        let fd = (p.eval_raw(z + h) - p.eval_raw(z - h)) / (2.0 * h);
        let d = p.derivative_raw(z);
        prop_assert!((fd - d).norm() <= 1e-5 * d.norm().max(1.0), "{} vs {}", fd, d);
    }

    #[test]
    fn order_is_antisymmetric(x in order_key(), y in order_key()) {
        let there = itinerary_order(x.clone(), y.clone());
        let back = itinerary_order(y, x);
        let flipped = match there {
            Order::Precedes => Order::Succeeds,
            Order::Succeeds => Order::Precedes,
            Order::Incomparable => Order::Incomparable,
        };
        prop_assert_eq!(back, flipped);
    }

    #[test]
    fn pixel_centres_round_trip(row in 0usize..300, col in 0usize..300) {
        let p = MapParams::perturbed(Complex::new(0.0, 0.5), Complex::new(1e-6, 0.0)).unwrap();
        let spec = PlaneSpec::dynamical(p, Complex::new(0.1, -0.2), 2.5, 300, 100);
        prop_assert_eq!(spec.pixel_of(spec.pixel_center(row, col)), Some((row, col)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn straight_annulus_reaches_t0_in_one_step(which in 0usize..3, s in 0.0f64..1.0, t in 0.0..TAU) {
        let reg = &annulus_regions()[which];
        let (inner, outer) = reg.straight_annulus;
        let r = (inner * inner + s * (outer * outer - inner * inner)).sqrt();
        let fate = classify_with(Complex::from_polar(r, t), reg, 2000, false);
        prop_assert_eq!(fate.t0_entry, Some(1));
    }

    #[test]
    fn image_itinerary_is_the_shift(z in plane_point()) {
        let reg = figure_regions();
        let fate = classify_with(z, reg, 2000, false);
        let Some(w) = fate.itinerary.clone() else { return Ok(()) };
        prop_assume!(!fate.ambiguous && !w.is_empty());
        let image = classify_with(reg.params.eval_raw(z), reg, 2000, false);
        prop_assume!(!image.ambiguous);
        prop_assert_eq!(image.itinerary, Some(w.shifted()));
        prop_assert_eq!(image.t0_entry, fate.t0_entry.map(|k| k - 1));
        prop_assert_eq!(image.terminal, fate.terminal);
    }
}
