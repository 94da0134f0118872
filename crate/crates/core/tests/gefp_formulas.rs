use num_traits::Signed;
use pentatile::exact::{ln_abs, powi, ratio, BigFloat, BigRational};
use pentatile::gefp::*;
use pentatile::oracle::EmptinessSpec;
use pentatile::Error;

fn pent(r: usize, s: usize) -> PentagonSpec {
    PentagonSpec::new(r, s).unwrap()
}

fn alphas() -> [BigRational; 3] {
    [ratio(1, 4), ratio(1, 2), ratio(3, 4)]
}

#[test]
fn probabilities_lie_in_unit_interval() {
    let zero = ratio(0, 1);
    let one = ratio(1, 1);
    for alpha in alphas() {
        for n in 1..=6 {
            for spec in EmptinessSpec::all(n) {
                let g = gefp_det(&spec, &alpha).unwrap();
                assert!(g >= zero && g <= one, "{spec:?}");
            }
        }
        for r in 1..8 {
            for s in 0..6 {
                let t = tdefp_det(&pent(r, s), &alpha).unwrap();
                assert!(t >= zero && t <= one);
            }
        }
    }
}

#[test]
fn triangular_specialization_of_gefp() {
    for alpha in alphas() {
        for r in 1..6 {
            for s in 0..5 {
                let spec = pent(r, s);
                assert_eq!(tdefp_det(&spec, &alpha).unwrap(), gefp_det(&spec.emptiness_spec(), &alpha).unwrap());
            }
        }
    }
}

#[test]
fn nonincreasing_in_s_at_fixed_size() {
    let alpha = ratio(1, 2);
    let n = 12;
    let values: Vec<_> = (0..n).map(|s| tdefp_det(&pent(n - s, s), &alpha).unwrap()).collect();
    for w in values.windows(2) {
        assert!(w[1] <= w[0]);
    }
}

#[test]
fn sum_and_determinant_examples() {
    assert_eq!(
        tdefp_det(&pent(3, 2), &ratio(1, 3)).unwrap(),
        tdefp_sum(&pent(3, 2), &ratio(1, 3), DEFAULT_TERM_CAP).unwrap()
    );
}

#[test]
fn small_alpha_limit() {
    for (r, s) in [(3, 2), (5, 3)] {
        let mut prev = ratio(0, 1);
        for k in 2..=6 {
            let alpha = powi(&ratio(1, 10), k);
            let t = tdefp_det(&pent(r, s), &alpha).unwrap();
            assert!(t > prev);
            prev = t;
        }
        let gap = ratio(1, 1) - prev;
        assert!(ln_abs(&gap) < -13.0);
    }
}

#[test]
fn unit_alpha_limit_equals_product_formula() {
    for n in 1..=10 {
        for s in 0..n {
            let r = n - s;
            let c = c_rs(r, s).unwrap();
            assert_eq!(g_rs_at_one(&pent(r, s)), c);
            assert_eq!(c_rs_binomial_det(r, s), c);
            assert_eq!(c_rs_reflected_det(r, s), c);
        }
    }
}

#[test]
fn g_rs_approaches_c_rs() {
    let spec = pent(3, 2);
    let c = c_rs(3, 2).unwrap();
    // α = (1 - 10^-k)² keeps √α rational
    let mut prev = None;
    for k in 2..6 {
        let q = ratio(1, 1) - powi(&ratio(1, 10), k);
        let gap = (g_rs(&spec, &(&q * &q)).unwrap() - &c).abs();
        if let Some(p) = prev {
            assert!(gap < p);
        }
        prev = Some(gap);
    }
}

#[test]
fn kappa_two_is_nearly_independent_of_r() {
    let alpha = ratio(1, 4);
    let k4 = kappa_estimate(&pent(4, 2), &alpha, DEFAULT_TERM_CAP, 128).unwrap().to_f64();
    let k8 = kappa_estimate(&pent(8, 2), &alpha, DEFAULT_TERM_CAP, 128).unwrap().to_f64();
    assert!((k4 - k8).abs() / k8 < 0.10, "{k4} {k8}");
}

#[test]
fn z_pentagon_routes_agree() {
    // ρ(1-α) = 1/2, a square root remains
    let (rho, alpha) = (ratio(1, 1), ratio(1, 2));
    let spec = pent(3, 1);
    assert!(matches!(z_pentagon(&spec, &rho, &alpha), Err(Error::IrrationalPrefactor(_))));
    let a = z_pentagon_float(&spec, &rho, &alpha, 128).unwrap();
    let t = tdefp_float(&spec, &BigFloat::from_rational(&alpha, 128), 128).unwrap();
    let base = BigFloat::from_rational(&ratio(1, 2), 128);
    let b = &(&t * &BigFloat::from_rational(&ratio(1, 1), 128)) / &base.sqrt();
    let rel = ((&a - &b).abs() / b.abs()).log2_abs();
    assert!(rel < -120.0, "{rel}");
    // T_{3,1} = 7/8, so Z = (7/8)·√2
    assert!((a.to_f64() - 0.875 * 2f64.sqrt()).abs() < 1e-15);
}

#[test]
fn z_pentagon_example_is_irrational() {
    // ρ(1-α) = 1/2 with s(s+1)/2 = 3
    let spec = pent(2, 2);
    let (rho, alpha) = (ratio(2, 1), ratio(3, 4));
    assert!(matches!(z_pentagon(&spec, &rho, &alpha), Err(Error::IrrationalPrefactor(_))));
    let z = z_pentagon_float(&spec, &rho, &alpha, 256).unwrap();
    let t = pentatile::exact::to_f64(&tdefp_det(&spec, &alpha).unwrap());
    let expect = 2f64.powf(10.0 - 1.5) * 0.25f64.powf(-1.5) * t;
    assert!((z.to_f64() / expect - 1.0).abs() < 1e-14);
}

#[test]
fn float_determinant_tracks_exact() {
    let spec = pent(4, 3);
    let alpha = ratio(1, 2);
    let exact = tdefp_det(&spec, &alpha).unwrap();
    for prec in [64u32, 128, 256] {
        let t = tdefp_float(&spec, &BigFloat::from_rational(&alpha, prec), prec).unwrap();
        let rel = ln_abs(&((t.to_rational() - &exact) / &exact)) / std::f64::consts::LN_2;
        assert!(rel <= -(prec as f64 - 16.0), "{prec}: {rel}");
    }
}

#[test]
fn float_route_domain() {
    let one = BigFloat::one(128);
    assert!(matches!(tdefp_float(&pent(2, 2), &one, 128), Err(Error::Domain(_))));
}
