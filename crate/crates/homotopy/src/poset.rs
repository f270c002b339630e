//! Finite posets, their nerves and subdivisions, and the posets `𝒟_n`.

use std::fmt;

use thiserror::Error;

use crate::complex::{is_acyclic, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("relation has a cycle through element {0}")]
    Cycle(usize),
    #[error("J must be a nonempty proper subset of [n]")]
    BadSubset,
}

/// A finite poset on `0..n` with its order stored as a full relation matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    leq: Vec<Vec<bool>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poset{:?}", self.labels)
    }
}

impl Poset {
    /// The order generated by `relations` (pairs `a ≤ b`).
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        let n = labels.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && leq[i][j] && leq[j][i] {
                    return Err(PosetError::Cycle(i));
                }
            }
        }
        Ok(Poset { labels, leq })
    }

    /// The order given by a predicate, assumed to be a partial order.
    pub fn from_order(labels: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = labels.len();
        let leq = (0..n).map(|i| (0..n).map(|j| i == j || leq(i, j)).collect()).collect();
        Poset { labels, leq }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    /// Pairs `a ⋖ b`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.lt(a, b) && !(0..n).any(|c| self.lt(a, c) && self.lt(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn minimal_elements(&self, among: &[usize]) -> Vec<usize> {
        among.iter().copied().filter(|&a| !among.iter().any(|&b| self.lt(b, a))).collect()
    }

    pub fn is_up_closed(&self, set: &[bool]) -> bool {
        (0..self.len()).all(|a| !set[a] || (0..self.len()).all(|b| !self.leq(a, b) || set[b]))
    }

    /// The induced subposet on `keep`, with indices renumbered in order.
    pub fn subposet(&self, keep: &[usize]) -> Poset {
        Poset {
            labels: keep.iter().map(|&i| self.labels[i].clone()).collect(),
            leq: keep.iter().map(|&i| keep.iter().map(|&j| self.leq[i][j]).collect()).collect(),
        }
    }

    /// All nonempty chains, each listed increasingly.
    pub fn chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut out = Vec::new();
        fn grow(p: &Poset, chain: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            out.push(chain.clone());
            let top = *chain.last().unwrap();
            for b in 0..p.len() {
                if p.lt(top, b) {
                    chain.push(b);
                    grow(p, chain, out);
                    chain.pop();
                }
            }
        }
        for a in 0..n {
            grow(self, &mut vec![a], &mut out);
        }
        out
    }

    /// The nerve: simplices are the chains.
    pub fn nerve(&self) -> SimplicialComplex {
        let chains = self.chains();
        SimplicialComplex::from_closed(
            chains
                .into_iter()
                .map(|mut c| {
                    c.sort_unstable();
                    c
                })
                .collect(),
        )
    }

    /// Nonempty chains ordered by reverse containment.
    pub fn subdivision(&self) -> Poset {
        let chains = self.chains();
        let labels = chains
            .iter()
            .map(|c| format!("({})", c.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join("<")))
            .collect();
        let sets: Vec<Vec<usize>> = chains
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c
            })
            .collect();
        Poset::from_order(labels, |a, b| sets[b].iter().all(|x| sets[a].binary_search(x).is_ok()))
    }

    pub fn is_acyclic(&self) -> bool {
        is_acyclic(&self.nerve())
    }
}

fn render_subset(mask: u32, n: usize) -> String {
    let items: Vec<String> = (0..=n).filter(|i| mask >> i & 1 == 1).map(|i| i.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// `𝒟_n`: proper subsets of `[n] = {0, ..., n}` under inclusion, listed by
/// size then bitmask.
pub fn build_dn(n: usize) -> Poset {
    build_dn_filtered(n, |_| true)
}

fn build_dn_filtered(n: usize, keep: impl Fn(u32) -> bool) -> Poset {
    let full = (1u32 << (n + 1)) - 1;
    let mut masks: Vec<u32> = (0..full).filter(|&m| keep(m)).collect();
    masks.sort_by_key(|&m| (m.count_ones(), m));
    let labels = masks.iter().map(|&m| render_subset(m, n)).collect();
    Poset::from_order(labels, |a, b| masks[a] & !masks[b] == 0)
}

/// `𝒟_n^J`: the members of `𝒟_n` not contained in `J`.
pub fn build_dn_j(n: usize, j: &[usize]) -> Result<Poset, PosetError> {
    let jm = j.iter().fold(0u32, |m, &i| m | 1 << i);
    let full = (1u32 << (n + 1)) - 1;
    if jm == 0 || jm & !full != 0 || jm == full {
        return Err(PosetError::BadSubset);
    }
    Ok(build_dn_filtered(n, |m| m & !jm != 0))
}

/// Indices in `𝒟_n` of the members of `𝒟_n^J`.
pub fn dn_j_indices(n: usize, j: &[usize]) -> Result<Vec<bool>, PosetError> {
    let sub = build_dn_j(n, j)?;
    let all = build_dn(n);
    Ok(all.labels().iter().map(|l| sub.labels().contains(l)).collect())
}

/// The witness `0` when `p` is a weak elementary expansion of the subset
/// marked by `sub`: the complement has a unique minimal element `0`, and the
/// members of `sub` above `0` form an up-closed, acyclic set.
pub fn weak_elementary_expansion(p: &Poset, sub: &[bool]) -> Option<usize> {
    let rest: Vec<usize> = (0..p.len()).filter(|&i| !sub[i]).collect();
    let mins = p.minimal_elements(&rest);
    if mins.len() != 1 {
        return None;
    }
    let zero = mins[0];
    let above: Vec<usize> = (0..p.len()).filter(|&i| sub[i] && p.lt(zero, i)).collect();
    let mut mark = vec![false; p.len()];
    for &i in &above {
        mark[i] = true;
    }
    if above.is_empty() || !p.is_up_closed(&mark) || !p.subposet(&above).is_acyclic() {
        return None;
    }
    Some(zero)
}

pub fn is_weak_elementary_expansion(p: &Poset, sub: &[bool]) -> bool {
    weak_elementary_expansion(p, sub).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::rational_homology;

    fn chain2() -> Poset {
        Poset::from_relations(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap()
    }

    #[test]
    fn nerve_and_subdivision_of_small_posets() {
        let p = chain2();
        assert_eq!(p.nerve().facets(), vec![vec![0, 1]]);
        assert_eq!(p.subdivision().len(), 3);
        let anti = Poset::from_relations(vec!["a".into(), "b".into()], &[]).unwrap();
        assert_eq!(rational_homology(&anti.nerve()), vec![2]);
        assert!(Poset::from_relations(vec!["a".into(), "b".into()], &[(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn dn_counts() {
        let d2 = build_dn(2);
        assert_eq!(d2.len(), 7);
        assert_eq!(d2.subdivision().len(), 25);
        assert_eq!(d2.label(0), "{}");
        let d = build_dn_j(1, &[0]).unwrap();
        assert_eq!(d.labels(), ["{1}"]);
        let d = build_dn_j(2, &[0]).unwrap();
        assert_eq!(d.len(), 5);
        assert_eq!(rational_homology(&d.nerve()), vec![1, 0]);
        let d = build_dn_j(2, &[0, 1]).unwrap();
        assert_eq!(d.labels(), ["{2}", "{0,2}", "{1,2}"]);
        assert_eq!(rational_homology(&d.nerve()), vec![1, 0]);
        assert_eq!(build_dn_j(2, &[]), Err(PosetError::BadSubset));
        assert_eq!(build_dn_j(1, &[0, 1]), Err(PosetError::BadSubset));
    }

    #[test]
    fn expansions() {
        let d1 = build_dn(1);
        let sub: Vec<bool> = d1.labels().iter().map(|l| l == "{0}").collect();
        assert_eq!(weak_elementary_expansion(&d1, &sub), Some(0));
        assert!(!is_weak_elementary_expansion(&d1, &vec![true; d1.len()]));
        for n in 1..=3 {
            let dn = build_dn(n);
            let sub = dn_j_indices(n, &[0]).unwrap();
            assert!(is_weak_elementary_expansion(&dn, &sub));
        }
    }

    #[test]
    fn covers_of_a_chain() {
        let p = Poset::from_relations(vec!["a".into(), "b".into(), "c".into()], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(p.covers(), vec![(0, 1), (1, 2)]);
        assert!(p.leq(0, 2));
    }
}
