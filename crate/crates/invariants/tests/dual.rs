use cocenter_invariants::matching::{pair_records, DUAL_PAIRS};
use cocenter_invariants::{
    endomorphism_fingerprint, load_pair_tables, match_tables, orbit_series, orbit_series_by_union_find, shipped_tables, PairDatum, Region, Side,
};
use proptest::prelude::*;

#[test]
fn shipped_pairs_match_to_radius_three() {
    let t = shipped_tables();
    for &(g, gd) in DUAL_PAIRS {
        let (chi, c) = pair_records(&t, g, gd);
        assert!(!chi.is_empty() && !c.is_empty(), "{g}");
        let m = match_tables(&chi, &c, 3);
        assert!(m.ok(), "{g}/{gd}\n{}", m.render());
    }
}

#[test]
fn record_counts_are_fundamental_group_orders() {
    let t = shipped_tables();
    let expected = [("PGL2", 2), ("PGL3", 3), ("PGL4", 4), ("PGL5", 5), ("SO5", 2), ("G2", 1)];
    for ((g, gd), (name, n)) in DUAL_PAIRS.iter().zip(expected) {
        assert_eq!(*gd, name);
        let (chi, c) = pair_records(&t, g, gd);
        assert_eq!((chi.len(), c.len()), (n, n));
    }
}

#[test]
fn principal_block_of_sl2() {
    let t = shipped_tables();
    let (chi, _) = pair_records(&t, "SL2", "PGL2");
    let s = orbit_series(&chi[0], 3);
    assert_eq!(s.counts, vec![1, 5, 13, 25]);
    // direct count on the 9 points of the unit box: ((2+1)² + 1)/2
    assert_eq!(orbit_series_by_union_find(&chi[0], 1), vec![1, 5]);
}

#[test]
fn burnside_matches_union_find_for_small_ranks() {
    for p in shipped_tables().iter().filter(|p| p.rank <= 2) {
        assert_eq!(orbit_series(p, 3).counts, orbit_series_by_union_find(p, 3), "{}", p.label());
    }
}

#[test]
fn exterior_vectors() {
    let t = shipped_tables();
    for p in &t {
        let s = orbit_series(p, 0);
        assert!(s.alternating_ok, "{}", p.label());
        assert_eq!(s.exterior[0], 1);
        // reflection groups on their reflection lattice have no invariants
        // in positive exterior degree
        if p.rank > 0 {
            assert!(s.exterior[1..].iter().all(|&e| e == 0), "{}", p.label());
        }
    }
}

#[test]
fn region_choice() {
    let t = shipped_tables();
    let find = |side, g: &str| t.iter().find(|p| p.side == side && p.group == g && p.index == 0).unwrap().clone();
    assert_eq!(orbit_series(&find(Side::Chi, "Sp4"), 1).region, Region::SupBox);
    assert_eq!(orbit_series(&find(Side::C, "SO5"), 1).region, Region::SupBox);
    assert!(matches!(orbit_series(&find(Side::Chi, "G2"), 1).region, Region::Ball { .. }));
    assert!(matches!(orbit_series(&find(Side::C, "PGL3"), 1).region, Region::Ball { .. }));
}

#[test]
fn deleted_record_is_reported() {
    let t = shipped_tables();
    let (chi, mut c) = pair_records(&t, "SL4", "PGL4");
    c.remove(2);
    let m = match_tables(&chi, &c, 2);
    assert!(!m.ok());
    assert!(!m.counts_ok());
    assert_eq!(m.orphans_chi.len(), 1);
    assert_eq!(m.chi[m.orphans_chi[0]].label, "SL4[2 mod 4]");
    assert!(m.render().contains("orphan SL4[2 mod 4]"));
}

#[test]
fn self_matching_is_identity() {
    let t = shipped_tables();
    let (chi, _) = pair_records(&t, "Sp4", "SO5");
    let mut as_c = chi.clone();
    for p in &mut as_c {
        p.side = Side::C;
    }
    let m = match_tables(&chi, &as_c, 3);
    assert!(m.ok());
    assert_eq!(m.matching, vec![(0, 0), (1, 1)]);
}

#[test]
fn corrupted_generator_breaks_matching() {
    let t = shipped_tables();
    let (chi, mut c) = pair_records(&t, "Sp4", "SO5");
    // replace W(B2) by the subgroup of sign changes
    c[0].generators = vec![vec![vec![-1, 0], vec![0, 1]], vec![vec![1, 0], vec![0, -1]]];
    c[0].order = 4;
    let m = match_tables(&chi, &c, 2);
    assert!(!m.ok());
    assert_eq!((m.orphans_chi.clone(), m.orphans_c.clone()), (vec![0], vec![0]));
}

#[test]
fn fingerprint_edge_cases() {
    assert!(endomorphism_fingerprint(&[], 3).blocks.is_empty());
    let t = load_pair_tables("side: chi\ngroup: X\nindex: 0 mod 2\nrank: 0\norder: 1\n\nside: chi\ngroup: X\nindex: 1 mod 2\nrank: 0\norder: 1\n").unwrap();
    let r = endomorphism_fingerprint(&t, 2);
    for b in &r.blocks {
        assert_eq!(b.series.counts, vec![1, 1, 1]);
        assert_eq!(b.bigraded, vec![vec![1]; 3]);
    }
}

fn signed_perm(perm: &[usize], signs: &[bool]) -> Vec<Vec<i64>> {
    let r = perm.len();
    let mut m = vec![vec![0; r]; r];
    for i in 0..r {
        m[perm[i]][i] = if signs[i] { -1 } else { 1 };
    }
    m
}

fn datum(rank: usize, gens: Vec<Vec<Vec<i64>>>) -> PairDatum {
    let order = cocenter_invariants::closure(rank, &gens, 10_000).unwrap().len();
    PairDatum { side: Side::Chi, group: "X".into(), index: 0, modulus: 1, rank, generators: gens, order }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn random_signed_permutation_groups(
        rank in 1usize..=2,
        raw in proptest::collection::vec((any::<bool>(), any::<bool>(), any::<bool>()), 1..3),
    ) {
        let gens: Vec<_> = raw
            .iter()
            .map(|&(swap, s0, s1)| {
                let perm: Vec<usize> = if rank == 2 && swap { vec![1, 0] } else { (0..rank).collect() };
                signed_perm(&perm, &[s0, s1][..rank])
            })
            .collect();
        let p = datum(rank, gens);
        let s = orbit_series(&p, 3);
        prop_assert_eq!(&s.counts, &orbit_series_by_union_find(&p, 3));
        prop_assert!(s.counts.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(s.alternating_ok);
        prop_assert_eq!(s.exterior[0], 1);
    }
}
