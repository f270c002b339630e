//! Orbit counts of `W` on `Λ × Λ` in growing regions, and invariants of
//! the exterior algebra of `Λ ⊗ Q`.

use std::collections::HashMap;
use std::fmt;

use crate::group::{apply, det, exterior_traces, identity, is_signed_permutation, mul, transpose, IntMatrix};
use crate::table::PairDatum;

/// The `W`-stable regions used for truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Region {
    /// `‖λ‖∞ ≤ k`; used when `W` acts by signed permutations.
    SupBox,
    /// `λᵀ Q λ ≤ k² m` with `Q = Σ_g gᵀg` and `m` the least nonzero value
    /// of `Q` on the lattice. For an irreducible action `Q` is the invariant
    /// form up to scale, so the region does not depend on the basis.
    Ball { form: IntMatrix, norm: i64 },
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::SupBox => f.write_str("box"),
            Region::Ball { .. } => f.write_str("ball"),
        }
    }
}

fn quad(form: &IntMatrix, v: &[i64]) -> i64 {
    apply(form, v).iter().zip(v).map(|(a, b)| a * b).sum()
}

impl Region {
    pub fn for_group(elements: &[IntMatrix]) -> Region {
        if elements.iter().all(is_signed_permutation) {
            return Region::SupBox;
        }
        let r = elements[0].len();
        let mut q = vec![vec![0i64; r]; r];
        for g in elements {
            let p = mul(&transpose(g), g);
            for i in 0..r {
                for j in 0..r {
                    q[i][j] += p[i][j];
                }
            }
        }
        let diag = (0..r).map(|i| q[i][i]).min().unwrap();
        let probe = Region::Ball { form: q.clone(), norm: diag };
        let norm = probe.points(r, 1).iter().map(|v| quad(&q, v)).filter(|&n| n > 0).min().unwrap();
        Region::Ball { form: q, norm }
    }

    pub fn contains(&self, v: &[i64], k: usize) -> bool {
        let k = k as i64;
        match self {
            Region::SupBox => v.iter().all(|x| x.abs() <= k),
            Region::Ball { form, norm } => quad(form, v) <= k * k * norm,
        }
    }

    /// Per-coordinate bounds of the region of radius `k`.
    fn coordinate_bounds(&self, r: usize, k: usize) -> Vec<i64> {
        match self {
            Region::SupBox => vec![k as i64; r],
            Region::Ball { form, norm } => {
                // |λ_i|² ≤ k² m (Q⁻¹)_ii
                let m: Vec<Vec<f64>> = form.iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect();
                let inv = invert(&m);
                (0..r).map(|i| (k as f64 * (*norm as f64 * inv[i][i]).sqrt()).floor() as i64 + 1).collect()
            }
        }
    }

    /// Lattice points of the region of radius `k`, in lexicographic order.
    pub fn points(&self, r: usize, k: usize) -> Vec<Vec<i64>> {
        let b = self.coordinate_bounds(r, k);
        let mut out = Vec::new();
        let mut v: Vec<i64> = b.iter().map(|x| -x).collect();
        loop {
            if self.contains(&v, k) {
                out.push(v.clone());
            }
            let mut i = r;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if v[i] < b[i] {
                    v[i] += 1;
                    break;
                }
                v[i] = -b[i];
            }
        }
    }
}

fn invert(m: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        inv.swap(c, p);
        let d = a[c][c];
        for j in 0..n {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for i in 0..n {
            if i != c {
                let f = a[i][c];
                for j in 0..n {
                    a[i][j] -= f * a[c][j];
                    inv[i][j] -= f * inv[c][j];
                }
            }
        }
    }
    inv
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitSeries {
    /// `N_k` for `k = 0..=R`.
    pub counts: Vec<u64>,
    /// `e_k = dim (Λᵏ Q^r)^W`.
    pub exterior: Vec<u64>,
    pub region: Region,
    /// `Σ(-1)ᵏ e_k · |W| = Σ_g det(1 - g)`.
    pub alternating_ok: bool,
}

/// Per-element data: fixed points in each region and exterior traces.
pub(crate) struct Profile {
    pub order: usize,
    pub region: Region,
    pub fixed: Vec<Vec<u64>>,
    pub traces: Vec<Vec<i128>>,
    pub det_one_minus: Vec<i128>,
}

pub(crate) fn profile(p: &PairDatum, radius: usize) -> Profile {
    let elements = p.elements();
    let r = p.rank;
    let region = if r == 0 { Region::SupBox } else { Region::for_group(&elements) };
    let pts = region.points(r, radius);
    let fixed = elements
        .iter()
        .map(|g| {
            let mut f = vec![0u64; radius + 1];
            for v in pts.iter().filter(|v| apply(g, v) == **v) {
                let first = (0..=radius).find(|&k| region.contains(v, k)).unwrap();
                for c in &mut f[first..] {
                    *c += 1;
                }
            }
            f
        })
        .collect();
    let traces = elements.iter().map(exterior_traces).collect();
    let det_one_minus = elements
        .iter()
        .map(|g| {
            let id = identity(r);
            let m: IntMatrix = (0..r).map(|i| (0..r).map(|j| id[i][j] - g[i][j]).collect()).collect();
            det(&m)
        })
        .collect();
    Profile { order: elements.len(), region, fixed, traces, det_one_minus }
}

pub(crate) fn exact_div(total: i128, order: usize, what: &str) -> u64 {
    let order = order as i128;
    assert!(total % order == 0 && total >= 0, "{what}: average {total}/{order} is not a nonnegative integer");
    (total / order) as u64
}

/// Burnside counts `N_k = (1/|W|) Σ_g #Fix(g)²` and the exterior vector.
pub fn orbit_series(p: &PairDatum, radius: usize) -> OrbitSeries {
    series_from_profile(&profile(p, radius), p.rank)
}

pub(crate) fn series_from_profile(pr: &Profile, r: usize) -> OrbitSeries {
    let radius = pr.fixed[0].len() - 1;
    let counts = (0..=radius)
        .map(|k| exact_div(pr.fixed.iter().map(|f| (f[k] as i128) * (f[k] as i128)).sum(), pr.order, "orbit count"))
        .collect();
    let exterior: Vec<u64> = (0..=r).map(|k| exact_div(pr.traces.iter().map(|t| t[k]).sum(), pr.order, "exterior invariant")).collect();
    let alt: i128 = exterior.iter().enumerate().map(|(k, &e)| if k % 2 == 0 { e as i128 } else { -(e as i128) }).sum();
    let alternating_ok = alt * pr.order as i128 == pr.det_one_minus.iter().sum::<i128>();
    OrbitSeries { counts, exterior, region: pr.region.clone(), alternating_ok }
}

/// Orbit counts by union-find on the pairs of lattice points, joining each
/// pair with its images under the generators.
pub fn orbit_series_by_union_find(p: &PairDatum, radius: usize) -> Vec<u64> {
    let r = p.rank;
    let region = if r == 0 { Region::SupBox } else { Region::for_group(&p.elements()) };
    (0..=radius)
        .map(|k| {
            let pts = region.points(r, k);
            let index: HashMap<&Vec<i64>, usize> = pts.iter().enumerate().map(|(i, v)| (v, i)).collect();
            let n = pts.len();
            let mut parent: Vec<usize> = (0..n * n).collect();
            fn find(parent: &mut [usize], mut x: usize) -> usize {
                while parent[x] != x {
                    parent[x] = parent[parent[x]];
                    x = parent[x];
                }
                x
            }
            let images: Vec<Vec<usize>> = p
                .generators
                .iter()
                .map(|g| pts.iter().map(|v| index[&apply(g, v)]).collect())
                .collect();
            for img in &images {
                for a in 0..n {
                    for b in 0..n {
                        let x = find(&mut parent, a * n + b);
                        let y = find(&mut parent, img[a] * n + img[b]);
                        parent[x] = y;
                    }
                }
            }
            (0..n * n).filter(|&x| find(&mut parent, x) == x).count() as u64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::load_pair_tables;

    fn datum(src: &str) -> PairDatum {
        load_pair_tables(src).unwrap().remove(0)
    }

    #[test]
    fn rank_zero() {
        let p = datum("side: chi\ngroup: X\nindex: 0 mod 1\nrank: 0\norder: 1\n");
        let s = orbit_series(&p, 3);
        assert_eq!(s.counts, vec![1, 1, 1, 1]);
        assert_eq!(s.exterior, vec![1]);
    }

    #[test]
    fn sign_action_rank_one() {
        let p = datum("side: chi\ngroup: X\nindex: 0 mod 1\nrank: 1\ngen: -1\norder: 2\n");
        let s = orbit_series(&p, 3);
        assert_eq!(s.counts, vec![1, 5, 13, 25]);
        assert_eq!(s.exterior, vec![1, 0]);
        assert_eq!(s.region, Region::SupBox);
        assert!(s.alternating_ok);
    }

    #[test]
    fn symmetric_group_on_root_lattice() {
        let p = datum("side: chi\ngroup: X\nindex: 0 mod 1\nrank: 2\ngen: -1 1 / 0 1\ngen: 1 0 / 1 -1\norder: 6\n");
        let s = orbit_series(&p, 2);
        assert_eq!(s.exterior, vec![1, 0, 0]);
        assert!(matches!(s.region, Region::Ball { .. }));
        assert_eq!(s.counts, orbit_series_by_union_find(&p, 2));
    }

    #[test]
    fn ball_points_respect_bounds() {
        let q = Region::Ball { form: vec![vec![4, -2], vec![-2, 4]], norm: 4 };
        // a² - ab + b² ≤ k²: the origin and the six roots of A2
        let pts = q.points(2, 1);
        assert_eq!(pts.len(), 7);
    }
}
