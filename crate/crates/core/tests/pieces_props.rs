use std::sync::OnceLock;

use cocenter_core::oracle::{conjugate_by_word, straight_by_powers};
use cocenter_core::pieces::{bedard_from_min_rep, delta, i_of, is_subset, newton_point, sigma_j};
use cocenter_core::scalar::rat;
use cocenter_core::{AffineSystem, AffineWeylElement};
use proptest::prelude::*;

struct Fixture {
    sys: AffineSystem,
    elements: Vec<AffineWeylElement>,
    subsets: Vec<u64>,
}

fn fixtures() -> &'static [Fixture] {
    static F: OnceLock<Vec<Fixture>> = OnceLock::new();
    F.get_or_init(|| {
        ["A1", "A2", "C2", "A1:ad"]
            .iter()
            .map(|t| {
                let sys = AffineSystem::parse(t).unwrap();
                let elements = sys.elements_up_to(6);
                let subsets = sys.finite_type_subsets();
                Fixture { sys, elements, subsets }
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sigma_is_a_class_function(t in 0usize..4, e in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(),
                                 word in prop::collection::vec(0usize..8, 0..=6)) {
        let f = &fixtures()[t];
        let w = e.get(&f.elements);
        let j = *j.get(&f.subsets);
        let w2 = conjugate_by_word(&f.sys, j, w, &word);
        prop_assert_eq!(sigma_j(&f.sys, j, w).unwrap(), sigma_j(&f.sys, j, &w2).unwrap());
    }

    #[test]
    fn bedard_sequence_recovers_u(t in 0usize..4, e in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let f = &fixtures()[t];
        let u = e.get(&f.elements);
        let j = *j.get(&f.subsets);
        prop_assume!(f.sys.is_min_left(j, u));
        let p = bedard_from_min_rep(&f.sys, j, u).unwrap();
        let prod = p.bedard.iter().fold(f.sys.identity(), |acc, s| acc.mul(&s.u));
        prop_assert_eq!(&prod, u);
        prop_assert_eq!(&sigma_j(&f.sys, j, u).unwrap().u, u);
    }

    #[test]
    fn delta_is_coherent(t in 0usize..4, e in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(),
                         j2 in any::<prop::sample::Index>(), j3 in any::<prop::sample::Index>()) {
        let f = &fixtures()[t];
        let w = e.get(&f.elements);
        let (j, j2, j3) = (*j.get(&f.subsets), *j2.get(&f.subsets), *j3.get(&f.subsets));
        prop_assume!(is_subset(j, j2) && is_subset(j2, j3));
        let p = sigma_j(&f.sys, j, w).unwrap();
        let d = delta(&f.sys, j2, &p).unwrap();
        prop_assert_eq!(&d, &sigma_j(&f.sys, j2, w).unwrap());
        prop_assert!(d.length <= p.length);
        prop_assert_eq!(delta(&f.sys, j3, &d).unwrap(), delta(&f.sys, j3, &p).unwrap());
    }

    #[test]
    fn length_bounds_newton(t in 0usize..4, e in any::<prop::sample::Index>()) {
        let f = &fixtures()[t];
        let w = e.get(&f.elements);
        let nu = newton_point(&f.sys, w);
        let pair = f.sys.datum().pair_two_rho(&nu.nu);
        let l = rat(f.sys.length(w) as i64);
        prop_assert!(l >= pair);
        prop_assert_eq!(l == pair, straight_by_powers(&f.sys, w));
    }

    #[test]
    fn newton_constant_on_type_cosets(t in 0usize..4, e in any::<prop::sample::Index>(), j in any::<prop::sample::Index>(),
                                      y in any::<prop::sample::Index>()) {
        let f = &fixtures()[t];
        let u = e.get(&f.elements);
        let j = *j.get(&f.subsets);
        prop_assume!(f.sys.is_min_left(j, u));
        let i = i_of(&f.sys, j, u).unwrap();
        let wi = f.sys.parabolic(i).unwrap();
        let y = y.get(&wi);
        prop_assert_eq!(newton_point(&f.sys, &u.mul(y)), newton_point(&f.sys, u));
    }
}
