use std::collections::BTreeSet;

use cocenter_core::bcomplex::{build_truncated_b, is_downward, verify_contraction, DownwardSpec};
use cocenter_core::pieces::{enumerate_classes, newton_point};
use cocenter_core::AffineSystem;
use rand::SeedableRng;

fn names(sys: &AffineSystem, b: &cocenter_core::bcomplex::TruncatedBComplex, idx: &[usize]) -> BTreeSet<String> {
    idx.iter().map(|&i| b.render(sys, i)).collect()
}

fn set(v: &[&str]) -> BTreeSet<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn sl2_cycle() {
    let sys = AffineSystem::parse("A1:sc").unwrap();
    let nu = newton_point(&sys, &sys.parse_element("s1 s0").unwrap());
    let b = build_truncated_b(&sys, &nu, 2).unwrap();
    assert_eq!(names(&sys, &b, &b.facets_with_j_size(0)), set(&["s1 s0/{}", "s0 s1/{}"]));
    assert_eq!(names(&sys, &b, &b.facets_with_j_size(1)), set(&["s1 s0/{s0}", "s0 s1/{s1}"]));
    // each edge meets both vertices
    for e in b.facets_with_j_size(0) {
        assert_eq!(b.order.iter().filter(|(a, _)| *a == e).count(), 2);
    }
    assert_eq!(b.essential_part().len(), 4);
}

#[test]
fn sl2_tree_to_length_three() {
    let sys = AffineSystem::parse("A1:sc").unwrap();
    let nu = newton_point(&sys, &sys.identity());
    let b = build_truncated_b(&sys, &nu, 3).unwrap();
    assert_eq!(
        names(&sys, &b, &b.facets_with_j_size(1)),
        set(&["1/{s1}", "s1/{s0}", "s0 s1 s0/{s1}", "1/{s0}", "s0/{s1}", "s1 s0 s1/{s0}"])
    );
    assert_eq!(
        names(&sys, &b, &b.facets_with_j_size(0)),
        set(&["1/{}", "s1/{}", "s0/{}", "s0 s1 s0/{}", "s1 s0 s1/{}"])
    );
    assert_eq!(names(&sys, &b, &b.essential_part()), set(&["1/{}", "1/{s0}", "1/{s1}"]));
}

#[test]
fn pgl2_omega_edge() {
    let sys = AffineSystem::parse("A1:ad").unwrap();
    let om = sys.omega_group()[1].rep.clone();
    let nu = newton_point(&sys, &om);
    let b = build_truncated_b(&sys, &nu, 1).unwrap();
    let all: Vec<usize> = (0..b.facets.len()).collect();
    assert_eq!(names(&sys, &b, &all), set(&["ω1/{}", "ω1/{s0}", "ω1/{s1}"]));
    assert_eq!(names(&sys, &b, &b.essential_part()), names(&sys, &b, &all));
}

#[test]
fn truncation_agrees_with_class_enumeration() {
    for t in ["A1", "A2", "A1:ad"] {
        let sys = AffineSystem::parse(t).unwrap();
        let nu = newton_point(&sys, &sys.identity());
        let b = build_truncated_b(&sys, &nu, 3).unwrap();
        let mut from_classes = BTreeSet::new();
        for j in sys.finite_type_subsets() {
            for (_, p) in enumerate_classes(&sys, j, 3).unwrap() {
                if p.newton == nu && p.length <= 3 {
                    from_classes.insert(p.render(&sys));
                }
            }
        }
        let all: Vec<usize> = (0..b.facets.len()).collect();
        assert_eq!(names(&sys, &b, &all), from_classes, "{t}");
    }
}

#[test]
fn essential_part_is_closed_under_delta() {
    for t in ["A1", "A2", "C2", "A1:ad"] {
        let sys = AffineSystem::parse(t).unwrap();
        for w in sys.elements_up_to(2) {
            let nu = newton_point(&sys, &w);
            let b = build_truncated_b(&sys, &nu, 4).unwrap();
            for &(a, c) in &b.order {
                assert!(!b.essential[a] || b.essential[c]);
                assert!(b.facets[a].length >= b.facets[c].length);
            }
        }
    }
}

#[test]
fn length_cuts_are_downward_and_flow_stable() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for t in ["A1", "A2"] {
        let sys = AffineSystem::parse(t).unwrap();
        let nu = newton_point(&sys, &sys.identity());
        let b = build_truncated_b(&sys, &nu, 4).unwrap();
        for n in 1..=3 {
            let spec = DownwardSpec::length_cut(&sys, &nu, n);
            assert!(is_downward(&sys, &b, &spec.facets(&sys, &b).unwrap()).unwrap());
            let rep = verify_contraction(&sys, &b, &spec, 2, 8, &mut rng).unwrap();
            assert_eq!(rep.violations(), 0, "{t} n={n}");
        }
    }
}
