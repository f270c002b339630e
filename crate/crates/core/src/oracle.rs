//! Brute-force reference implementations used to cross-check the fast
//! routines in tests and in `cocenter verify`.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::affine_weyl::{nodes_of, AffineSystem, AffineWeylElement, NodeSet};
use crate::linalg::AffineSubspace;
use crate::BigRational;

/// Word length by breadth-first search in the Cayley graph, for all
/// elements up to length `bound`.
pub fn bfs_lengths(sys: &AffineSystem, bound: usize) -> HashMap<AffineWeylElement, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    for om in sys.omega_group() {
        dist.insert(om.rep.clone(), 0);
        queue.push_back(om.rep.clone());
    }
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == bound {
            continue;
        }
        for i in 0..sys.num_nodes() {
            let y = x.mul(sys.simple(i));
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Bruhat order by the subword property.
pub fn bruhat_leq_subword(sys: &AffineSystem, a: &AffineWeylElement, b: &AffineWeylElement) -> bool {
    let (om, word) = sys.reduced_word(b);
    let rep = &sys.omega_group()[om].rep;
    let mut reached: HashSet<AffineWeylElement> = HashSet::from([rep.clone()]);
    for &s in &word {
        let next: Vec<AffineWeylElement> = reached.iter().map(|x| x.mul(sys.simple(s))).collect();
        reached.extend(next);
    }
    reached.contains(a)
}

/// The largest subset of `J` stable under conjugation by `u`, by trying
/// every subset.
pub fn largest_stable_subset(sys: &AffineSystem, j: NodeSet, u: &AffineWeylElement) -> NodeSet {
    let mut best: NodeSet = 0;
    let mut k = j;
    loop {
        if k.count_ones() > best.count_ones() && sys.ad_intersect(u, k, k) == k {
            best = k;
        }
        if k == 0 {
            break;
        }
        k = (k - 1) & j;
    }
    best
}

/// `ℓ(w^k) = kℓ(w)` for `1 ≤ k ≤ 2m`, `m` the order of the finite part.
pub fn straight_by_powers(sys: &AffineSystem, w: &AffineWeylElement) -> bool {
    let m = w.finite.order(100_000).expect("finite part has finite order");
    let l = sys.length(w);
    let mut p = sys.identity();
    (1..=2 * m).all(|k| {
        p = p.mul(w);
        sys.length(&p) == k * l
    })
}

/// Whether some `y ∈ W^a` with `ℓ(y) ≤ bound` maps `𝔄(K_b)` onto a subspace
/// containing `𝔄(K_a)`.
pub fn coarse_leq_geometric(sys: &AffineSystem, ka: NodeSet, kb: NodeSet, bound: usize) -> bool {
    let ea: AffineSubspace<BigRational> = sys.facet_span(ka);
    let eb: AffineSubspace<BigRational> = sys.facet_span(kb);
    affine_weyl_ball(sys, bound).iter().any(|y| y.act_subspace(&eb).contains(&ea))
}

/// Whether `𝔄(K_a)` and `𝔄(K_b)` are `W^a`-conjugate within the ball.
pub fn coarse_eq_geometric(sys: &AffineSystem, ka: NodeSet, kb: NodeSet, bound: usize) -> bool {
    let ea: AffineSubspace<BigRational> = sys.facet_span(ka);
    let eb: AffineSubspace<BigRational> = sys.facet_span(kb);
    affine_weyl_ball(sys, bound).iter().any(|y| y.act_subspace(&eb) == ea)
}

/// Elements of the non-extended group `W^a` with length at most `bound`.
pub fn affine_weyl_ball(sys: &AffineSystem, bound: usize) -> Vec<AffineWeylElement> {
    let mut seen: HashSet<AffineWeylElement> = HashSet::from([sys.identity()]);
    let mut layer = vec![sys.identity()];
    let mut out = layer.clone();
    for _ in 0..bound {
        let mut next = Vec::new();
        for x in &layer {
            for i in 0..sys.num_nodes() {
                let y = x.mul(sys.simple(i));
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

/// Conjugate `w` successively by the reflections of `J` picked by `word`
/// (entries are taken modulo `|J|`).
pub fn conjugate_by_word(sys: &AffineSystem, j: NodeSet, w: &AffineWeylElement, word: &[usize]) -> AffineWeylElement {
    let nodes: Vec<usize> = nodes_of(j).collect();
    if nodes.is_empty() {
        return w.clone();
    }
    let mut x = w.clone();
    for &k in word {
        let s = sys.simple(nodes[k % nodes.len()]);
        x = s.conjugate(&x);
    }
    x
}
