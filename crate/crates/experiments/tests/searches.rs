use blaschke_core::numerics::Complex;
use blaschke_experiments::{case_a_real_search, find_case, Case, CaseOptions};

const A: Complex = Complex::new(0.0, 0.5);

fn found(case: Case, start: Complex) {
    let out = find_case(A, case, start, &CaseOptions::default()).unwrap();
    let report = out.report.unwrap_or_else(|| panic!("{case:?} not found; trace {:?}", out.trace));
    assert!(report.confirms(case));
}

#[test]
fn case_a_near_the_disk_parameter() {
    found(Case::A, Complex::new(-1.9e-6, 3.15e-5));
}

#[test]
fn case_b_from_a_disk_anchor() {
    found(Case::B, Complex::new(-1.9e-6, 3.15e-5));
}

#[test]
fn case_c_walking_inward() {
    found(Case::C, Complex::new(7.74e-6, 9.9e-6) * 1.2);
}

#[test]
fn real_search_lands_on_the_backward_chain() {
    let r = case_a_real_search(0.6, 5e-5, 12, &CaseOptions::default()).unwrap();
    assert!(r.residual.abs() <= 1e-10, "{}", r.residual);
    assert!(r.fixed_point_gap.abs() <= 1e-9, "{}", r.fixed_point_gap);
    assert!(r.fate.ends_with(":D0"), "{}", r.fate);
    assert!(r.bracket.0 <= r.lambda && r.lambda <= r.bracket.1);
    assert!(r.report.evidence.measured.keys().all(|&m| m == 1 || m == 2));
}
