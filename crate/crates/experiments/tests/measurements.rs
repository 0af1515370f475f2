use blaschke_core::numerics::Complex;
use blaschke_experiments::checks::{asymptotics_check, boundary_continuity_check, distance_to_unit_circle};
use blaschke_experiments::rts::compute_s_t_at;
use blaschke_experiments::{compute_r, detect_rings};

const A: Complex = Complex::new(0.0, 0.5);

fn re(x: f64) -> Complex {
    Complex::new(x, 0.0)
}

#[test]
fn seed_moduli_at_a_half() {
    let r = asymptotics_check(re(0.5), &[re(1e-5)]).unwrap();
    assert!((r.rows[0].zero_modulus / 0.1149 - 1.0).abs() <= 0.05, "{}", r.rows[0].zero_modulus);
    assert!((r.rows[0].critical_modulus / 0.1059 - 1.0).abs() <= 0.06, "{}", r.rows[0].critical_modulus);
    assert!((2e-5f64.powf(0.2) - 0.1149).abs() < 1e-4);
    assert!(((2e-5f64 / 1.5).powf(0.2) - 0.1059).abs() < 1e-4);
}

#[test]
fn errors_shrink_and_zeros_form_a_pentagon() {
    let r = asymptotics_check(A, &[re(1e-5), re(1e-8)]).unwrap();
    assert!(r.decreasing);
    assert!(r.rows[1].error() < r.rows[0].error());
    assert!(r.rows[1].pentagon_deviation_deg <= 1.0, "{}", r.rows[1].pentagon_deviation_deg);
}

#[test]
fn basin_boundary_moves_continuously() {
    let r = boundary_continuity_check(A, re(1e-6), &[1e-6, 5e-7, 2.5e-7, 0.0]).unwrap();
    assert!(r.nonincreasing, "{:?}", r.distances);
    assert_eq!(r.distances[3], 0.0);
    assert!(distance_to_unit_circle(A, re(1e-8)).unwrap() <= 0.05);
}

#[test]
fn r_is_bracketed_by_t_and_s() {
    let rec = compute_s_t_at(A, 3e-5, 4, 2, 512).unwrap();
    let (s, t) = (rec.s.unwrap(), rec.t.unwrap());
    assert!(t <= s);
    for sample in rec.circle() {
        if let Some(r) = sample.r {
            assert!(t <= r && r <= s);
        }
    }
}

#[test]
fn single_sample_gives_s_equal_t_equal_r() {
    let lambda = re(3e-5);
    let rec = compute_s_t_at(A, 3e-5, 1, 1, 1024).unwrap();
    let r = compute_r(A, lambda).unwrap();
    assert_eq!((rec.s, rec.t), (Some(r), Some(r)));
}

#[test]
fn r_agrees_under_conjugation() {
    let lambda = Complex::new(1e-5, 2e-5);
    assert_eq!(compute_r(A, lambda).unwrap(), compute_r(A.conj(), lambda.conj()).unwrap());
}

#[test]
fn coarse_ring_scan_is_low_confidence() {
    let scan = detect_rings(A, 7e-5, 6, 4);
    assert!(scan.low_confidence);
    assert_eq!(scan.n_angles, 4);
}
