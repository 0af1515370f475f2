use super::{polynomial_roots, Complex, Family, MapParams, Poly, RootSet, SpherePoint};
use crate::error::Result;

/// Polynomial whose roots are the finite preimages of a finite `w`.
pub fn preimage_polynomial(w: Complex, p: &MapParams) -> Result<Poly> {
    p.validate()?;
    let zero = Complex::new(0.0, 0.0);
    let one = Complex::new(1.0, 0.0);
    let coeffs = match p.family {
        Family::PerturbedBlaschke => {
            let a = p.a;
            let ac = a.conj();
            let lam = p.lambda;
            // z^6 - a z^5 + ā w z^3 - w z^2 - λ ā z + λ
            vec![one, -a, zero, ac * w, -w, -lam * ac, lam]
        }
        Family::UnperturbedBlaschke => {
            // z^4 - a z^3 + ā w z - w
            let a = p.a;
            vec![one, -a, zero, a.conj() * w, -w]
        }
        Family::McMullen { n, d } => {
            let deg = (n + d) as usize;
            let mut c = vec![zero; deg + 1];
            c[0] = one;
            c[deg - d as usize] -= w;
            c[deg] += p.lambda;
            c
        }
    };
    Poly::new(coeffs)
}

/// All preimages of `w` counted with multiplicity, sorted by `(re, im)` with
/// infinite preimages last. Unconverged roots are flagged, not dropped.
pub fn preimages_of_point(w: SpherePoint, p: &MapParams) -> Result<RootSet> {
    p.validate()?;
    match w {
        SpherePoint::Infinity => {
            let zero = SpherePoint::Finite(Complex::new(0.0, 0.0));
            let inf = SpherePoint::Infinity;
            let roots = match p.family {
                Family::PerturbedBlaschke => {
                    let pole = SpherePoint::Finite(1.0 / p.a.conj());
                    vec![zero, zero, pole, inf, inf, inf]
                }
                Family::UnperturbedBlaschke => {
                    vec![SpherePoint::Finite(1.0 / p.a.conj()), inf, inf, inf]
                }
                Family::McMullen { n, d } => {
                    let mut v = vec![zero; d as usize];
                    v.extend(std::iter::repeat_n(inf, n as usize));
                    v
                }
            };
            let k = roots.len();
            Ok(RootSet {
                roots,
                residuals: vec![0.0; k],
                converged: vec![true; k],
            })
        }
        SpherePoint::Finite(w) => {
            let poly = preimage_polynomial(w, p)?;
            polynomial_roots(poly.coeffs())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn preimages_map_back() {
        let p = MapParams::perturbed(c(0.5, 0.0), c(1e-5, 0.0)).unwrap();
        let w = c(0.3, -0.2);
        let rs = preimages_of_point(SpherePoint::Finite(w), &p).unwrap();
        assert_eq!(rs.len(), 6);
        assert!(rs.all_converged());
        for z in rs.finite_roots() {
            let back = p.eval_raw(z);
            assert!((back - w).norm() <= 1e-10 * (1.0 + w.norm()), "{z} -> {back}");
        }
    }

    #[test]
    fn vieta_at_zero() {
        let a = c(0.5, 0.0);
        let lam = c(2e-4, 1e-4);
        let p = MapParams::perturbed(a, lam).unwrap();
        let rs = preimages_of_point(SpherePoint::Finite(c(0.0, 0.0)), &p).unwrap();
        let roots = rs.finite_roots();
        let sum: Complex = roots.iter().sum();
        let prod: Complex = roots.iter().product();
        assert!((sum - a).norm() < 1e-12);
        assert!((prod - lam).norm() < 1e-15);
    }

    #[test]
    fn infinity_has_fixed_preimages() {
        let p = MapParams::perturbed(c(0.0, 0.5), c(1e-5, 0.0)).unwrap();
        let rs = preimages_of_point(SpherePoint::Infinity, &p).unwrap();
        assert_eq!(rs.len(), 6);
        assert_eq!(rs.roots.iter().filter(|r| r.is_infinite()).count(), 3);
        assert_eq!(rs.roots[2], SpherePoint::Finite(c(0.0, 2.0)));
    }

    #[test]
    fn unperturbed_has_four_preimages() {
        let p = MapParams::unperturbed(c(0.5, 0.0)).unwrap();
        let rs = preimages_of_point(SpherePoint::Finite(c(0.1, 0.0)), &p).unwrap();
        assert_eq!(rs.len(), 4);
        for z in rs.finite_roots() {
            assert!((p.eval_raw(z) - c(0.1, 0.0)).norm() < 1e-12);
        }
    }
}
