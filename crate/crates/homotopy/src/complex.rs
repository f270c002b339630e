//! Finite abstract simplicial complexes and their rational homology.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

/// A simplex as a sorted list of vertex ids.
pub type Simplex = Vec<usize>;

/// A finite simplicial complex, stored as the set of all its simplices.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SimplicialComplex {
    simplices: BTreeSet<Simplex>,
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let facets: Vec<String> = self
            .facets()
            .iter()
            .map(|s| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", facets.join(" | "))
    }
}

fn faces_of(s: &[usize], out: &mut BTreeSet<Simplex>) {
    let n = s.len();
    for mask in 1u64..(1u64 << n) {
        let f: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| s[i]).collect();
        out.insert(f);
    }
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The closure of the given simplices.
    pub fn from_facets<I, S>(facets: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[usize]>,
    {
        let mut simplices = BTreeSet::new();
        for f in facets {
            let mut s = f.as_ref().to_vec();
            s.sort_unstable();
            s.dedup();
            if !s.is_empty() {
                faces_of(&s, &mut simplices);
            }
        }
        SimplicialComplex { simplices }
    }

    /// The full simplex on `0..=n`.
    pub fn simplex(n: usize) -> Self {
        Self::from_facets([(0..=n).collect::<Vec<_>>()])
    }

    /// The boundary of the `n`-simplex.
    pub fn sphere(n: usize) -> Self {
        let full: Vec<usize> = (0..=n + 1).collect();
        Self::from_facets((0..=n + 1).map(|i| full.iter().copied().filter(|&v| v != i).collect::<Vec<_>>()))
    }

    /// Build from an already face-closed set; no closure is taken.
    pub fn from_closed(simplices: BTreeSet<Simplex>) -> Self {
        SimplicialComplex { simplices }
    }

    pub fn is_closed(&self) -> bool {
        self.simplices.iter().all(|s| {
            (0..s.len()).all(|i| {
                let mut f = s.clone();
                f.remove(i);
                f.is_empty() || self.simplices.contains(&f)
            })
        })
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.simplices.contains(s)
    }

    pub fn simplices(&self) -> impl Iterator<Item = &Simplex> {
        self.simplices.iter()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.simplices.iter().filter(|s| s.len() == 1).map(|s| s[0]).collect()
    }

    /// Dimension, or `None` when empty.
    pub fn dim(&self) -> Option<usize> {
        self.simplices.iter().map(|s| s.len() - 1).max()
    }

    pub fn of_dim(&self, k: usize) -> Vec<&Simplex> {
        self.simplices.iter().filter(|s| s.len() == k + 1).collect()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: BTreeSet<&Simplex> = BTreeSet::new();
        let mut out = Vec::new();
        let mut all: Vec<&Simplex> = self.simplices.iter().collect();
        all.sort_by_key(|s| std::cmp::Reverse(s.len()));
        for s in all {
            if covered.contains(s) {
                continue;
            }
            out.push(s.clone());
            let mut faces = BTreeSet::new();
            faces_of(s, &mut faces);
            for f in faces {
                if let Some(x) = self.simplices.get(&f) {
                    covered.insert(x);
                }
            }
        }
        out.sort();
        out
    }

    pub fn is_subcomplex_of(&self, other: &Self) -> bool {
        self.simplices.is_subset(&other.simplices)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices.iter().map(|s| if s.len() % 2 == 1 { 1 } else { -1 }).sum()
    }

    /// The simplices whose vertices all satisfy `keep`.
    pub fn induced(&self, keep: impl Fn(usize) -> bool) -> Self {
        SimplicialComplex { simplices: self.simplices.iter().filter(|s| s.iter().all(|&v| keep(v))).cloned().collect() }
    }

    /// Closed star of a subcomplex: the closure of all simplices meeting it
    /// in a vertex.
    pub fn closed_star(&self, sub: &Self) -> Self {
        let verts: BTreeSet<usize> = sub.vertices().into_iter().collect();
        Self::from_facets(self.simplices.iter().filter(|s| s.iter().any(|v| verts.contains(v))))
    }

    pub(crate) fn remove(&mut self, s: &[usize]) -> bool {
        self.simplices.remove(s)
    }

    /// Barycentric subdivision. Vertex `i` of the result is the barycenter
    /// of `carrier[i]`.
    pub fn subdivide(&self) -> Subdivision {
        let carrier: Vec<Simplex> = self.simplices.iter().cloned().collect();
        let index: HashMap<&Simplex, usize> = carrier.iter().enumerate().map(|(i, s)| (s, i)).collect();
        let mut simplices = BTreeSet::new();
        // Chains s_0 ⊃ ... ⊃ s_k, grown from each simplex downwards.
        fn extend(chain: &mut Vec<usize>, carrier: &[Simplex], index: &HashMap<&Simplex, usize>, out: &mut BTreeSet<Simplex>) {
            let mut c = chain.clone();
            c.sort_unstable();
            out.insert(c);
            let top = &carrier[*chain.last().unwrap()];
            let n = top.len();
            for mask in 1u64..(1u64 << n) - 1 {
                let f: Simplex = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| top[i]).collect();
                chain.push(index[&f]);
                extend(chain, carrier, index, out);
                chain.pop();
            }
        }
        for i in 0..carrier.len() {
            extend(&mut vec![i], &carrier, &index, &mut simplices);
        }
        Subdivision { complex: SimplicialComplex { simplices }, carrier }
    }
}

/// A barycentric subdivision with the simplex behind each new vertex.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub complex: SimplicialComplex,
    pub carrier: Vec<Simplex>,
}

impl Subdivision {
    /// The subdivision of a subcomplex, as a full subcomplex.
    pub fn of_subcomplex(&self, sub: &SimplicialComplex) -> SimplicialComplex {
        self.complex.induced(|v| sub.contains(&self.carrier[v]))
    }
}

/// Betti numbers `b_0, ..., b_d` over `ℚ`; empty for the empty complex.
pub fn rational_homology(c: &SimplicialComplex) -> Vec<usize> {
    let Some(d) = c.dim() else { return Vec::new() };
    let by_dim: Vec<Vec<&Simplex>> = (0..=d).map(|k| c.of_dim(k)).collect();
    // rank of ∂_k : C_k → C_{k-1}
    let mut ranks = vec![0usize; d + 2];
    for k in 1..=d {
        let index: HashMap<&Simplex, usize> = by_dim[k - 1].iter().enumerate().map(|(i, s)| (*s, i)).collect();
        let rows: Vec<Vec<(usize, i64)>> = by_dim[k]
            .iter()
            .map(|s| {
                let mut row: Vec<(usize, i64)> = (0..s.len())
                    .map(|i| {
                        let mut f = (*s).clone();
                        f.remove(i);
                        (index[&f], if i % 2 == 0 { 1 } else { -1 })
                    })
                    .collect();
                row.sort_unstable();
                row
            })
            .collect();
        ranks[k] = rank(rows, by_dim[k - 1].len());
    }
    (0..=d).map(|k| by_dim[k].len() - ranks[k] - ranks[k + 1]).collect()
}

/// Rank over `ℚ` of a sparse integer matrix given by rows, by fraction-free
/// elimination. Falls back to exact rationals if an entry overflows.
pub fn rank(rows: Vec<Vec<(usize, i64)>>, cols: usize) -> usize {
    match rank_i128(&rows) {
        Some(r) => r,
        None => rank_dense(&rows, cols),
    }
}

fn rank_i128(rows: &[Vec<(usize, i64)>]) -> Option<usize> {
    let mut pivots: HashMap<usize, Vec<(usize, i128)>> = HashMap::new();
    for r in rows {
        let mut row: Vec<(usize, i128)> = r.iter().map(|&(c, v)| (c, v as i128)).collect();
        while let Some(&(lead, a)) = row.first() {
            let Some(p) = pivots.get(&lead) else { break };
            let b = p[0].1;
            let g = a.gcd(&b);
            let (ma, mb) = (b / g, a / g);
            let mut out = Vec::with_capacity(row.len() + p.len());
            let (mut i, mut j) = (0, 0);
            while i < row.len() || j < p.len() {
                let (c, v) = match (row.get(i), p.get(j)) {
                    (Some(&(ci, vi)), Some(&(cj, _))) if ci < cj => {
                        i += 1;
                        (ci, vi.checked_mul(ma)?)
                    }
                    (Some(&(ci, _)), Some(&(cj, vj))) if cj < ci => {
                        j += 1;
                        (cj, vj.checked_mul(mb)?.checked_neg()?)
                    }
                    (Some(&(ci, vi)), Some(&(_, vj))) => {
                        i += 1;
                        j += 1;
                        (ci, vi.checked_mul(ma)?.checked_sub(vj.checked_mul(mb)?)?)
                    }
                    (Some(&(ci, vi)), None) => {
                        i += 1;
                        (ci, vi.checked_mul(ma)?)
                    }
                    (None, Some(&(cj, vj))) => {
                        j += 1;
                        (cj, vj.checked_mul(mb)?.checked_neg()?)
                    }
                    (None, None) => unreachable!(),
                };
                if v != 0 {
                    out.push((c, v));
                }
            }
            let g = out.iter().fold(0i128, |g, &(_, v)| g.gcd(&v));
            if g > 1 {
                for e in &mut out {
                    e.1 /= g;
                }
            }
            row = out;
        }
        if let Some(&(lead, _)) = row.first() {
            pivots.insert(lead, row);
        }
    }
    Some(pivots.len())
}

fn rank_dense(rows: &[Vec<(usize, i64)>], cols: usize) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            let mut v = vec![BigRational::zero(); cols];
            for &(c, x) in r {
                v[c] = BigRational::from_integer(BigInt::from(x));
            }
            v
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && !m[i][col].is_zero() {
                let f = &m[i][col] / &m[rank][col];
                for c in col..cols {
                    let d = &f * &m[rank][c];
                    m[i][c] -= d;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// `ℚ`-acyclic and connected: Betti numbers `(1, 0, 0, ...)`.
pub fn is_acyclic(c: &SimplicialComplex) -> bool {
    let b = rational_homology(c);
    !b.is_empty() && b[0] == 1 && b[1..].iter().all(|&x| x == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_homology() {
        assert_eq!(rational_homology(&SimplicialComplex::simplex(1)), vec![1, 0]);
        assert_eq!(rational_homology(&SimplicialComplex::sphere(1)), vec![1, 1]);
        assert_eq!(rational_homology(&SimplicialComplex::simplex(2)), vec![1, 0, 0]);
        assert_eq!(rational_homology(&SimplicialComplex::sphere(2)), vec![1, 0, 1]);
        assert!(rational_homology(&SimplicialComplex::empty()).is_empty());
        let two_points = SimplicialComplex::from_facets([[0], [1]]);
        assert_eq!(rational_homology(&two_points), vec![2]);
    }

    #[test]
    fn subdivision_counts() {
        let sd = SimplicialComplex::simplex(2).subdivide();
        assert_eq!(sd.complex.of_dim(0).len(), 7);
        assert_eq!(sd.complex.of_dim(2).len(), 6);
        assert_eq!(rational_homology(&sd.complex), vec![1, 0, 0]);
        let circle = SimplicialComplex::sphere(1).subdivide().complex;
        assert_eq!(circle.of_dim(1).len(), 6);
        assert_eq!(rational_homology(&circle), vec![1, 1]);
    }

    #[test]
    fn facets_and_closure() {
        let c = SimplicialComplex::from_facets([vec![2, 0, 1], vec![3, 2]]);
        assert_eq!(c.facets(), vec![vec![0, 1, 2], vec![2, 3]]);
        assert!(c.is_closed());
        assert_eq!(c.euler_characteristic(), 1);
    }

    #[test]
    fn rank_fallback_agrees() {
        let rows = vec![vec![(0, 3), (1, 5)], vec![(0, 6), (1, 10)], vec![(1, 7), (2, 1)]];
        assert_eq!(rank(rows.clone(), 3), 2);
        assert_eq!(rank_dense(&rows, 3), 2);
    }
}
