use cocenter_core::bcomplex::sample_in_facet;
use cocenter_core::linalg::{dot, is_zero_vec, sub};
use cocenter_core::oracle::affine_weyl_ball;
use cocenter_core::pieces::{e_jw, newton_point};
use cocenter_core::scalar::{ratio, Scalar};
use cocenter_core::{AffineSystem, ExactChart, FloatChart, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_point(rng: &mut ChaCha8Rng, r: usize) -> Vec<Rational> {
    (0..r).map(|_| ratio(rng.gen_range(-40..=40), rng.gen_range(1..=9))).collect()
}

#[test]
fn gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for t in ["A1", "A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        let els = sys.elements_up_to(5);
        let f: cocenter_core::Matrix<f64> = sys.datum().form_as();
        for _ in 0..100 {
            let w = &els[rng.gen_range(0..els.len())];
            let c: FloatChart = ExactChart::from_element(&sys, w).convert();
            let x: Vec<f64> = random_point(&mut rng, sys.rank()).iter().map(|q| q.to_f64()).collect();
            let g = c.gradient(&x).unwrap();
            let fg = f.mul_vec(&g);
            let h = 1e-5;
            let mut err = 0.0f64;
            for i in 0..x.len() {
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[i] += h;
                xm[i] -= h;
                let fd = (c.value(&xp).unwrap() - c.value(&xm).unwrap()) / (2.0 * h);
                err = err.max((fd - fg[i]).abs());
            }
            let scale = fg.iter().fold(1.0f64, |a, v| a.max(v.abs()));
            assert!(err / scale < 1e-8, "{t} {}: {}", sys.render(w), err / scale);
            let cf = c.gradient_closed_form(&x);
            assert!(cf.iter().zip(&g).all(|(a, b)| (a - b).abs() < 1e-9));
        }
    }
}

#[test]
fn restriction_commutes_with_gradient() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for t in ["A1", "A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(3) {
            let c = ExactChart::from_element(&sys, &w);
            for j in sys.finite_type_subsets() {
                let e = e_jw(&sys, j, &w).unwrap();
                let r = c.restrict(&e).unwrap();
                let mut x = e.point().to_vec();
                for b in e.basis() {
                    x = cocenter_core::linalg::axpy(&x, &ratio(rng.gen_range(-9..=9), 4), b);
                }
                assert_eq!(r.gradient(&x).unwrap(), c.gradient(&x).unwrap());
                assert_eq!(r.value(&x).unwrap(), c.value(&x).unwrap());
            }
            let crit = c.critical_set();
            let r = c.restrict(&crit).unwrap();
            assert!(is_zero_vec(&r.gradient(crit.point()).unwrap()));
        }
    }
}

#[test]
fn chart_map_is_equivariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in ["A1", "A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        let els = sys.elements_up_to(4);
        let ball = affine_weyl_ball(&sys, 3);
        for _ in 0..50 {
            let w = &els[rng.gen_range(0..els.len())];
            let g = &ball[rng.gen_range(0..ball.len())];
            let x = random_point(&mut rng, sys.rank());
            let c1 = ExactChart::from_element(&sys, w);
            let c2 = ExactChart::from_element(&sys, &g.conjugate(w));
            assert_eq!(c1.facet_of_point(&sys, &x).unwrap(), c2.facet_of_point(&sys, &g.act(&x)).unwrap());
        }
    }
}

#[test]
fn he_nie_function_is_nonnegative_and_vanishes_on_fixed_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for t in ["A1", "A2", "C2", "A1:ad"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(3) {
            let c = ExactChart::from_element(&sys, &w);
            for _ in 0..5 {
                let x = random_point(&mut rng, sys.rank());
                let v = c.value(&x).unwrap();
                assert!(v >= ratio(0, 1));
                assert_eq!(v == ratio(0, 1), w.act(&x) == x);
            }
        }
    }
}

#[test]
fn flow_limits_are_critical_and_essential() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for t in ["A1", "A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(4) {
            let c = ExactChart::from_element(&sys, &w);
            let nu = newton_point(&sys, &w);
            let ess = sys.datum().pair_two_rho(&nu.nu);
            for j in sys.finite_type_subsets() {
                let x = sample_in_facet(&sys, j, &mut rng);
                let lim = c.flow_limit(&x).unwrap();
                assert!(is_zero_vec(&c.gradient(&lim).unwrap()));
                let p = c.facet_of_point(&sys, &lim).unwrap();
                assert_eq!(ratio(p.length as i64, 1), ess, "{t} {}", sys.render(&w));
                // The displacement to the limit is orthogonal to the critical set.
                let d = sub(&x, &lim);
                let f = sys.datum().invariant_form();
                for b in c.critical_set().basis() {
                    assert_eq!(dot(&f.mul_vec(&d), b), ratio(0, 1));
                }
            }
        }
    }
}

#[test]
fn euler_integration_approaches_the_projection() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for t in ["A1", "A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(3) {
            let c = ExactChart::from_element(&sys, &w);
            let x = random_point(&mut rng, sys.rank());
            let lim: Vec<f64> = c.flow_limit(&x).unwrap().iter().map(|q| q.to_f64()).collect();
            let cf: FloatChart = c.convert();
            let xf: Vec<f64> = x.iter().map(|q| q.to_f64()).collect();
            let e = cf.euler_flow(&xf, &(1.0 / 64.0), 10_000).unwrap();
            let err = e.iter().zip(&lim).fold(0.0f64, |a, (p, q)| a.max((p - q).abs()));
            assert!(err < 1e-6, "{t} {}: {err}", sys.render(&w));
        }
    }
}

#[test]
fn straight_flow_in_low_rank() {
    for t in ["A1", "A2", "C2", "A1:ad"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(4) {
            assert!(ExactChart::from_element(&sys, &w).flow_is_straight());
        }
    }
}

#[test]
fn direction_matrix_is_an_isometry() {
    for t in ["A2", "C2"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(3) {
            let c = ExactChart::from_element(&sys, &w);
            for j in sys.finite_type_subsets() {
                let r = c.restrict(&e_jw(&sys, j, &w).unwrap()).unwrap();
                let m = r.direction_matrix();
                let g = r.restricted_form();
                assert_eq!(m.transpose().mul(&g).mul(&m), g);
            }
        }
    }
}
