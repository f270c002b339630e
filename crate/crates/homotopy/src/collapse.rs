//! Simplicial collapses and Whitehead's collapse of a second-derived star.

use std::collections::{BTreeSet, HashMap};

use thiserror::Error;

use crate::complex::{Simplex, SimplicialComplex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollapseError {
    #[error("Z is not a subcomplex of Y")]
    NotSubcomplex,
    #[error("step {step}: {reason}")]
    BadStep { step: usize, reason: String },
    #[error("final complex differs from the expected one")]
    WrongEnd,
    #[error("no free face available with {remaining} simplices left to remove")]
    Stuck { remaining: usize },
}

/// Removals `(τ, σ)`: each `τ` is a free face with unique maximal coface `σ`.
pub type CollapseSequence = Vec<(Simplex, Simplex)>;

fn is_face(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

fn union(a: &[usize], b: &[usize]) -> Simplex {
    let mut u: Simplex = a.iter().chain(b).copied().collect();
    u.sort_unstable();
    u.dedup();
    u
}

/// The unique maximal proper coface of `tau` in `k`, if `tau` is free.
pub fn free_coface(k: &SimplicialComplex, tau: &[usize]) -> Option<Simplex> {
    let cofaces: Vec<&Simplex> = k.simplices().filter(|s| s.len() > tau.len() && is_face(tau, s)).collect();
    let top = cofaces.iter().fold(tau.to_vec(), |u, s| union(&u, s));
    (top.len() > tau.len() && k.contains(&top)).then_some(top)
}

/// Remove every `γ` with `τ ⊆ γ ⊆ σ`.
fn apply_step(k: &mut SimplicialComplex, tau: &[usize], sigma: &[usize]) {
    let extra: Vec<usize> = sigma.iter().copied().filter(|v| tau.binary_search(v).is_err()).collect();
    for mask in 0u64..(1 << extra.len()) {
        let g = union(tau, &(0..extra.len()).filter(|i| mask >> i & 1 == 1).map(|i| extra[i]).collect::<Vec<_>>());
        k.remove(&g);
    }
}

/// Replay `seq` from `start`, checking freeness at each step, and compare
/// the result with `end`.
pub fn verify_collapse(start: &SimplicialComplex, seq: &CollapseSequence, end: &SimplicialComplex) -> Result<(), CollapseError> {
    let mut k = start.clone();
    for (step, (tau, sigma)) in seq.iter().enumerate() {
        if !k.contains(tau) {
            return Err(CollapseError::BadStep { step: step + 1, reason: "face already removed".into() });
        }
        match free_coface(&k, tau) {
            Some(top) if top == *sigma => apply_step(&mut k, tau, sigma),
            _ => return Err(CollapseError::BadStep { step: step + 1, reason: "not a free face of the given coface".into() }),
        }
    }
    if k != *end {
        return Err(CollapseError::WrongEnd);
    }
    Ok(())
}

pub fn is_valid_collapse(start: &SimplicialComplex, seq: &CollapseSequence, end: &SimplicialComplex) -> bool {
    verify_collapse(start, seq, end).is_ok()
}

/// Intermediate complexes of a sequence, starting with `start`.
pub fn replay(start: &SimplicialComplex, seq: &CollapseSequence) -> Vec<SimplicialComplex> {
    let mut k = start.clone();
    let mut out = vec![k.clone()];
    for (tau, sigma) in seq {
        apply_step(&mut k, tau, sigma);
        out.push(k.clone());
    }
    out
}

/// The outcome of [`whitehead_collapse`].
#[derive(Clone, Debug)]
pub struct WhiteheadCollapse {
    /// `sd²(Y)`
    pub y2: SimplicialComplex,
    /// `sd²(Z)`
    pub z2: SimplicialComplex,
    /// The closed star of `sd²(Z)` in `sd²(Y)`, where the collapse starts.
    pub star: SimplicialComplex,
    pub sequence: CollapseSequence,
}

/// A collapse of the closed star of `sd²(Z)` in `sd²(Y)` onto `sd²(Z)`.
///
/// Free faces are taken greedily. Priority: simplices whose carrier in
/// `sd(Y)` is larger come first; then those with more vertices off `sd(Z)`
/// inside that carrier; then larger simplices; ties lexicographically.
pub fn whitehead_collapse(y: &SimplicialComplex, z: &SimplicialComplex) -> Result<WhiteheadCollapse, CollapseError> {
    if !z.is_subcomplex_of(y) {
        return Err(CollapseError::NotSubcomplex);
    }
    let sd1 = y.subdivide();
    let z1 = sd1.of_subcomplex(z);
    let sd2 = sd1.complex.subdivide();
    let z2 = sd2.of_subcomplex(&z1);
    let star = sd2.complex.closed_star(&z2);

    // Carrier in sd(Y) of a simplex of sd²(Y): the top of its chain.
    let carrier = |g: &Simplex| -> Simplex {
        g.iter().map(|&v| &sd2.carrier[v]).max_by_key(|s| s.len()).unwrap().clone()
    };
    let off_z1 = |g: &Simplex| g.iter().filter(|&&v| !z1.contains(&sd2.carrier[v])).count();
    let key = |g: &Simplex| {
        let c = carrier(g);
        (std::cmp::Reverse(c.len()), c, std::cmp::Reverse(off_z1(g)), std::cmp::Reverse(g.len()), g.clone())
    };

    let mut k = star.clone();
    let mut seq = Vec::new();
    let mut cofaces: HashMap<Simplex, Vec<Simplex>> = HashMap::new();
    for s in star.simplices() {
        for t in star.simplices() {
            if t.len() > s.len() && is_face(s, t) {
                cofaces.entry(s.clone()).or_default().push(t.clone());
            }
        }
    }
    let mut order: Vec<Simplex> = star.simplices().filter(|s| !z2.contains(s)).cloned().collect();
    order.sort_by_cached_key(|s| key(s));
    let mut alive: BTreeSet<Simplex> = order.iter().cloned().collect();
    while !alive.is_empty() {
        let found = order.iter().filter(|t| alive.contains(*t)).find_map(|t| {
            let live: Vec<&Simplex> = cofaces.get(t).map_or(vec![], |v| v.iter().filter(|c| k.contains(c)).collect());
            let top = live.iter().fold(t.clone(), |u, s| union(&u, s));
            (top.len() > t.len() && k.contains(&top)).then(|| (t.clone(), top))
        });
        let Some((tau, sigma)) = found else {
            return Err(CollapseError::Stuck { remaining: alive.len() });
        };
        let before: Vec<Simplex> = alive.iter().filter(|g| is_face(&tau, g) && is_face(g, &sigma)).cloned().collect();
        apply_step(&mut k, &tau, &sigma);
        for g in before {
            alive.remove(&g);
        }
        seq.push((tau, sigma));
    }
    debug_assert_eq!(k, z2);
    Ok(WhiteheadCollapse { y2: sd2.complex, z2, star, sequence: seq })
}


/// A random pair `Z ⊂ Y` with at most `max_vertices` vertices and dimension
/// at most two: a few triangles and edges, and `Z` the closure of a random
/// nonempty selection of simplices of `Y`.
pub fn random_pair<R: rand::Rng>(rng: &mut R, max_vertices: usize) -> (SimplicialComplex, SimplicialComplex) {
    let nv = rng.gen_range(3..=max_vertices.max(3));
    let mut facets: Vec<Simplex> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut t: Simplex = rand::seq::index::sample(rng, nv, 3).into_iter().collect();
        t.sort_unstable();
        facets.push(t);
    }
    for _ in 0..rng.gen_range(0..=3) {
        let mut e: Simplex = rand::seq::index::sample(rng, nv, 2).into_iter().collect();
        e.sort_unstable();
        facets.push(e);
    }
    let y = SimplicialComplex::from_facets(&facets);
    let all: Vec<&Simplex> = y.simplices().collect();
    let picks: Vec<Simplex> = (0..rng.gen_range(1..=3)).map(|_| all[rng.gen_range(0..all.len())].clone()).collect();
    let z = SimplicialComplex::from_facets(&picks);
    (y, z)
}
