//! Sets over a poset given by fibers and transition maps, and their
//! total posets.

use std::collections::HashMap;

use thiserror::Error;

use crate::complex::SimplicialComplex;
use crate::poset::Poset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DSetError {
    #[error("missing transition map {0} -> {1}")]
    MissingMap(usize, usize),
    #[error("transition {0} -> {1} has the wrong size or range")]
    BadMap(usize, usize),
    #[error("transitions {0} -> {1} -> {2} do not compose")]
    NotFunctorial(usize, usize, usize),
}

/// A functor from a finite poset to finite sets: a fiber of labels over
/// each index, and for each `a < b` a map from fiber `a` to fiber `b`.
#[derive(Clone, Debug)]
pub struct DSet {
    pub base: Poset,
    pub fibers: Vec<Vec<String>>,
    pub maps: HashMap<(usize, usize), Vec<usize>>,
}

impl DSet {
    /// The constant one-point set over `base`.
    pub fn point(base: Poset) -> Self {
        let n = base.len();
        let fibers = vec![vec!["*".to_string()]; n];
        let mut maps = HashMap::new();
        for a in 0..n {
            for b in 0..n {
                if base.lt(a, b) {
                    maps.insert((a, b), vec![0]);
                }
            }
        }
        DSet { base, fibers, maps }
    }

    pub fn validate(&self) -> Result<(), DSetError> {
        let n = self.base.len();
        for a in 0..n {
            for b in 0..n {
                if !self.base.lt(a, b) {
                    continue;
                }
                let m = self.maps.get(&(a, b)).ok_or(DSetError::MissingMap(a, b))?;
                if m.len() != self.fibers[a].len() || m.iter().any(|&y| y >= self.fibers[b].len()) {
                    return Err(DSetError::BadMap(a, b));
                }
                for c in 0..n {
                    if self.base.lt(b, c) {
                        let m2 = self.maps.get(&(b, c)).ok_or(DSetError::MissingMap(b, c))?;
                        let m3 = self.maps.get(&(a, c)).ok_or(DSetError::MissingMap(a, c))?;
                        if m.iter().zip(m3).any(|(&y, &z)| m2[y] != z) {
                            return Err(DSetError::NotFunctorial(a, b, c));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// `Tot(X)`: pairs `(a, x)` with `(a, x) ≤ (b, y)` when `a ≤ b` and `x ↦ y`,
/// together with the nerve of `Tot(X)`.
pub fn realize_dset(ds: &DSet) -> Result<(Poset, SimplicialComplex), DSetError> {
    ds.validate()?;
    let mut elems = Vec::new();
    for (a, f) in ds.fibers.iter().enumerate() {
        for x in 0..f.len() {
            elems.push((a, x));
        }
    }
    let labels = elems.iter().map(|&(a, x)| ds.fibers[a][x].clone()).collect();
    let tot = Poset::from_order(labels, |i, j| {
        let (a, x) = elems[i];
        let (b, y) = elems[j];
        if a == b {
            return x == y;
        }
        ds.base.lt(a, b) && ds.maps[&(a, b)][x] == y
    });
    let nerve = tot.nerve();
    Ok((tot, nerve))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::rational_homology;

    fn affine_a1_subsets() -> Poset {
        // {} < {s0}, {} < {s1}
        Poset::from_relations(vec!["{}".into(), "{s0}".into(), "{s1}".into()], &[(0, 1), (0, 2)]).unwrap()
    }

    #[test]
    fn point_realizes_the_alcove() {
        let (tot, nerve) = realize_dset(&DSet::point(affine_a1_subsets())).unwrap();
        assert_eq!(tot.len(), 3);
        assert_eq!(rational_homology(&nerve), vec![1, 0]);
    }

    #[test]
    fn two_edges_on_two_vertices_make_a_circle() {
        let base = affine_a1_subsets();
        let fibers = vec![vec!["e".into(), "f".into()], vec!["v".into()], vec!["w".into()]];
        let maps = HashMap::from([((0, 1), vec![0, 0]), ((0, 2), vec![0, 0])]);
        let ds = DSet { base, fibers, maps };
        let (tot, nerve) = realize_dset(&ds).unwrap();
        assert_eq!(tot.len(), 4);
        assert_eq!(rational_homology(&nerve), vec![1, 1]);
        // fibers are antichains
        assert!(!tot.leq(0, 1) && !tot.leq(1, 0));
    }

    #[test]
    fn empty_and_invalid() {
        let base = affine_a1_subsets();
        let ds = DSet { base: base.clone(), fibers: vec![vec![], vec![], vec![]], maps: HashMap::from([((0, 1), vec![]), ((0, 2), vec![])]) };
        assert_eq!(realize_dset(&ds).unwrap().0.len(), 0);
        let bad = DSet { base, fibers: vec![vec!["x".into()], vec![], vec!["y".into()]], maps: HashMap::from([((0, 1), vec![0]), ((0, 2), vec![0])]) };
        assert_eq!(realize_dset(&bad).unwrap_err(), DSetError::BadMap(0, 1));
    }
}
