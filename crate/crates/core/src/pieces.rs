//! Combinatorial pieces `u/J`, the map `σ_J`, transition maps `δ`, types,
//! Newton points and the order `≥_J`.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_rational::BigRational;

use crate::affine_weyl::{contains, nodes_of, AffineError, AffineSystem, AffineWeylElement, NodeSet, OmegaElement};
use crate::linalg::AffineSubspace;
use crate::scalar::rat;

/// One term `(J_n, J'_n, u_n)` of a Bédard sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BedardStep {
    pub j: NodeSet,
    pub jprime: NodeSet,
    pub u: AffineWeylElement,
}

/// `[𝔄(K)]` up to `W^a`, stored as the least subset in the class of `K`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoarseType {
    pub rep: NodeSet,
}

impl CoarseType {
    pub fn of(sys: &AffineSystem, k: NodeSet) -> Result<Self, AffineError> {
        Ok(CoarseType { rep: sys.canonical_subset(k)? })
    }

    /// The type of the whole apartment.
    pub fn apartment() -> Self {
        CoarseType { rep: 0 }
    }

    pub fn codim(&self) -> u32 {
        self.rep.count_ones()
    }
}

/// `[E_a] ≤ [E_b]`, i.e. some `W^a`-translate of `𝔄(K_a)` lies in `𝔄(K_b)`.
/// Relevant subspaces through `𝔄(K_a)` are `W_{K_a}`-conjugate to `𝔄(L)` with
/// `L ⊆ K_a`, so this asks for such an `L` in the class of `K_b`.
pub fn coarse_type_leq(sys: &AffineSystem, a: CoarseType, b: CoarseType) -> Result<bool, AffineError> {
    if b.codim() > a.codim() {
        return Ok(false);
    }
    let ka = a.rep;
    let mut sub = ka;
    loop {
        if sub.count_ones() == b.codim() && sys.canonical_subset(sub)? == b.rep {
            return Ok(true);
        }
        if sub == 0 {
            return Ok(false);
        }
        sub = (sub - 1) & ka;
    }
}

/// `ν̃ = (ν, κ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EnhancedNewtonPoint {
    pub nu: Vec<BigRational>,
    pub omega: OmegaElement,
}

impl fmt::Display for EnhancedNewtonPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nu: Vec<String> = self.nu.iter().map(|q| q.to_string()).collect();
        write!(f, "([{}], ω{})", nu.join(","), self.omega.index)
    }
}

/// A combinatorial piece `u/J`. Equality is that of `(J, u)`.
#[derive(Clone, Debug)]
pub struct Piece {
    pub j: NodeSet,
    pub u: AffineWeylElement,
    pub bedard: Vec<BedardStep>,
    pub k: NodeSet,
    pub j_type: AffineSubspace<BigRational>,
    pub coarse_type: CoarseType,
    pub newton: EnhancedNewtonPoint,
    pub length: usize,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j && self.u == other.u
    }
}

impl Eq for Piece {}

impl Hash for Piece {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.j.hash(state);
        self.u.hash(state);
    }
}

impl Piece {
    pub fn render(&self, sys: &AffineSystem) -> String {
        format!("{}/{}", sys.render(&self.u), sys.render_set(self.j))
    }

    /// Dimension of the facet: the number of nodes outside `J`, minus one
    /// per factor.
    pub fn facet_dim(&self, sys: &AffineSystem) -> usize {
        sys.num_nodes() - self.j.count_ones() as usize - sys.datum().factors().len()
    }
}

/// Canonical order on pieces: `J` by size then bitmask, then `u`.
pub fn cmp_pieces(sys: &AffineSystem, a: &Piece, b: &Piece) -> Ordering {
    (a.j.count_ones(), a.j).cmp(&(b.j.count_ones(), b.j)).then_with(|| sys.cmp_elements(&a.u, &b.u))
}

pub fn newton_point(sys: &AffineSystem, w: &AffineWeylElement) -> EnhancedNewtonPoint {
    let m = w.finite.order(100_000).expect("finite part has finite order");
    let wm = w.pow(m);
    debug_assert!(wm.is_translation());
    let lam: Vec<BigRational> = wm.translation.iter().map(|&x| BigRational::new(x.into(), (m as i64).into())).collect();
    let (nu, _) = sys.datum().dominant_representative(&lam);
    EnhancedNewtonPoint { nu, omega: sys.omega_component(w).clone() }
}

/// `ℓ(w) = ⟨2ρ, ν(w)⟩`, cross-checked against `ℓ(w^k) = kℓ(w)` for
/// `k ≤ 2m`, `m` the order of the finite part.
pub fn is_straight(sys: &AffineSystem, w: &AffineWeylElement) -> bool {
    let nu = newton_point(sys, w);
    let l = sys.length(w);
    let straight = rat(l as i64) == sys.datum().pair_two_rho(&nu.nu);
    let m = w.finite.order(100_000).unwrap();
    let mut p = sys.identity();
    let mut powers_ok = true;
    for k in 1..=2 * m {
        p = p.mul(w);
        if sys.length(&p) != k * l {
            powers_ok = false;
            break;
        }
    }
    assert_eq!(straight, powers_ok, "straightness criteria disagree for {}", sys.render(w));
    straight
}

fn finish_piece(sys: &AffineSystem, j: NodeSet, u: AffineWeylElement, bedard: Vec<BedardStep>) -> Result<Piece, AffineError> {
    let k = bedard.last().map_or(j, |s| s.j);
    let j_type = j_type(sys, j, k)?;
    let coarse_type = CoarseType::of(sys, k)?;
    let newton = newton_point(sys, &u);
    let length = sys.length(&u);
    Ok(Piece { j, u, bedard, k, j_type, coarse_type, newton, length })
}

/// The `J`-type: the `W_J`-orbit of `𝔄(K)`, represented by its least member.
pub fn j_type(sys: &AffineSystem, j: NodeSet, k: NodeSet) -> Result<AffineSubspace<BigRational>, AffineError> {
    let base = sys.facet_span::<BigRational>(k);
    let wj = sys.parabolic(j)?;
    Ok(wj.iter().map(|y| y.act_subspace(&base)).min().unwrap())
}

/// `σ_J(w)` by the inductive double-coset construction.
pub fn sigma_j(sys: &AffineSystem, j: NodeSet, w: &AffineWeylElement) -> Result<Piece, AffineError> {
    let (u, steps) = sigma_steps(sys, j, w)?;
    finish_piece(sys, j, u, steps)
}

/// The Bédard sequence of `σ_J(w)` and its product `u`, without type data.
pub fn sigma_steps(sys: &AffineSystem, j: NodeSet, w: &AffineWeylElement) -> Result<(AffineWeylElement, Vec<BedardStep>), AffineError> {
    let (a, u0, b) = sys.min_double_coset_rep(j, j, w)?;
    let mut steps = vec![BedardStep { j, jprime: j, u: u0.clone() }];
    let mut p = u0;
    let mut x = b.mul(&a);
    let mut prev = j;
    loop {
        let jn = sys.ad_intersect(&p, prev, prev);
        let jpn = sys.ad_intersect(&p.inverse(), prev, prev);
        let (a, un, b) = sys.min_double_coset_rep(jpn, jn, &x)?;
        steps.push(BedardStep { j: jn, jprime: jpn, u: un.clone() });
        if jn == prev {
            debug_assert!(un.is_identity());
            return Ok((p, steps));
        }
        let a2 = p.conjugate(&a);
        p = p.mul(&un);
        x = b.mul(&a2);
        prev = jn;
    }
}

/// The sequence of `u/J` for `u ∈ ^J W̃`, peeled off `u` directly.
pub fn bedard_from_min_rep(sys: &AffineSystem, j: NodeSet, u: &AffineWeylElement) -> Result<Piece, AffineError> {
    if !sys.is_finite_type(j) {
        return Err(AffineError::NotFiniteType(sys.render_set(j)));
    }
    if !sys.is_min_left(j, u) {
        return Err(AffineError::NotMinimal);
    }
    let (a, u0, b) = sys.min_double_coset_rep(j, j, u)?;
    if !a.is_identity() {
        return Err(AffineError::NotMinimal);
    }
    let mut steps = vec![BedardStep { j, jprime: j, u: u0.clone() }];
    let mut p = u0;
    let mut rem = b;
    let mut prev = j;
    loop {
        let jn = sys.ad_intersect(&p, prev, prev);
        let jpn = sys.ad_intersect(&p.inverse(), prev, prev);
        let (a, un, b) = sys.min_double_coset_rep(jpn, jn, &rem)?;
        if !a.is_identity() {
            return Err(AffineError::NotMinimal);
        }
        steps.push(BedardStep { j: jn, jprime: jpn, u: un.clone() });
        p = p.mul(&un);
        rem = b;
        if jn == prev {
            break;
        }
        prev = jn;
    }
    if !rem.is_identity() || p != *u {
        return Err(AffineError::NotMinimal);
    }
    finish_piece(sys, j, p, steps)
}

/// `I(J, u)`: the stable value of `J_n`.
pub fn i_of(sys: &AffineSystem, j: NodeSet, u: &AffineWeylElement) -> Result<NodeSet, AffineError> {
    let (_, steps) = sigma_steps(sys, j, u)?;
    Ok(steps.last().unwrap().j)
}

/// `δ^{J'}_J(p) = σ_{J'}(u)`.
pub fn delta(sys: &AffineSystem, jprime: NodeSet, p: &Piece) -> Result<Piece, AffineError> {
    assert_eq!(p.j & !jprime, 0, "J must be contained in J'");
    sigma_j(sys, jprime, &p.u)
}

pub fn is_quasi_reduced(sys: &AffineSystem, p: &Piece, jprime: NodeSet) -> Result<bool, AffineError> {
    Ok(delta(sys, jprime, p)?.length == p.length)
}

pub fn is_reduced(sys: &AffineSystem, p: &Piece, jprime: NodeSet) -> Result<bool, AffineError> {
    let d = delta(sys, jprime, p)?;
    Ok(d.length == p.length && d.coarse_type == p.coarse_type)
}

/// `d_ω(u/J) = ωuω⁻¹/ω(J)`.
pub fn omega_act(sys: &AffineSystem, omega: &OmegaElement, p: &Piece) -> Result<Piece, AffineError> {
    let u = omega.rep.conjugate(&p.u);
    bedard_from_min_rep(sys, omega.apply(p.j), &u)
}

/// The full `W_J`-conjugacy class of `x`.
pub fn conjugacy_class(sys: &AffineSystem, j: NodeSet, x: &AffineWeylElement) -> Result<Vec<AffineWeylElement>, AffineError> {
    let wj = sys.parabolic(j)?;
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for y in wj.iter() {
        let c = y.conjugate(x);
        if seen.insert(c.clone()) {
            out.push(c);
        }
    }
    sys.sort_elements(&mut out);
    Ok(out)
}

/// One representative (the least minimal-length member) per `W_J`-class
/// having a member of length `≤ l`, in canonical order, with its piece.
pub fn enumerate_classes(sys: &AffineSystem, j: NodeSet, l: usize) -> Result<Vec<(AffineWeylElement, Piece)>, AffineError> {
    let mut seen: HashSet<AffineWeylElement> = HashSet::new();
    let mut reps = Vec::new();
    for x in sys.elements_up_to(l) {
        if seen.contains(&x) {
            continue;
        }
        let class = conjugacy_class(sys, j, &x)?;
        reps.push(class[0].clone());
        seen.extend(class);
    }
    sys.sort_elements(&mut reps);
    reps.into_iter().map(|r| sigma_j(sys, j, &r).map(|p| (r, p))).collect()
}

/// `u ≥_J u'`: some `W_J`-conjugate of `u'` is Bruhat-below `u`.
pub fn geq_j(sys: &AffineSystem, j: NodeSet, u: &AffineWeylElement, u2: &AffineWeylElement, bound: usize) -> Result<bool, AffineError> {
    for c in conjugacy_class(sys, j, u2)? {
        if sys.length(&c) <= sys.length(u) && sys.bruhat_leq(&c, u, bound)? {
            return Ok(true);
        }
    }
    let lu = sys.length(u);
    if lu > bound {
        return Err(AffineError::BoundExceeded { length: lu, bound });
    }
    Ok(false)
}

/// `E_{J,w}`: the least `w`-stable relevant subspace containing `𝔄(J)`.
/// Relevant subspaces through `𝔄(J)` are the flats of the reflection
/// arrangement of `W_J`; we intersect all the `w`-stable ones.
pub fn e_jw(sys: &AffineSystem, j: NodeSet, w: &AffineWeylElement) -> Result<AffineSubspace<BigRational>, AffineError> {
    let flats = flats_through(sys, j)?;
    let mut e = AffineSubspace::whole(sys.rank());
    for f in flats.iter().filter(|f| w.act_subspace(f) == **f) {
        e = e.intersect(f).expect("stable flats all contain 𝔄(J)");
    }
    Ok(e)
}

/// All relevant affine subspaces containing `𝔄(J)`.
pub fn flats_through(sys: &AffineSystem, j: NodeSet) -> Result<Vec<AffineSubspace<BigRational>>, AffineError> {
    let wj = sys.parabolic(j)?;
    let mut hyperplanes: HashSet<AffineSubspace<BigRational>> = HashSet::new();
    for y in wj.iter() {
        for s in nodes_of(j) {
            hyperplanes.insert(y.act_subspace(&sys.facet_span::<BigRational>(1 << s)));
        }
    }
    let mut flats: HashSet<AffineSubspace<BigRational>> = HashSet::from([AffineSubspace::whole(sys.rank())]);
    let mut frontier: Vec<AffineSubspace<BigRational>> = flats.iter().cloned().collect();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for f in &frontier {
            for h in &hyperplanes {
                if let Some(g) = f.intersect(h) {
                    if flats.insert(g.clone()) {
                        next.push(g);
                    }
                }
            }
        }
        frontier = next;
    }
    let mut v: Vec<_> = flats.into_iter().collect();
    v.sort();
    Ok(v)
}

/// Whether `J ⊆ J'` as node sets.
pub fn is_subset(j: NodeSet, jprime: NodeSet) -> bool {
    j & !jprime == 0
}

/// The nodes of a set, for reports.
pub fn node_list(j: NodeSet) -> Vec<usize> {
    nodes_of(j).collect()
}

pub fn has_node(j: NodeSet, i: usize) -> bool {
    contains(j, i)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AffineSystem {
        AffineSystem::parse("A1:sc").unwrap()
    }

    #[test]
    fn sigma_examples_affine_a1() {
        let s = a1();
        let j = 1 << 1;
        let p = sigma_j(&s, j, s.simple(1)).unwrap();
        assert!(p.u.is_identity());
        assert_eq!(p.k, j);
        let p = sigma_j(&s, j, s.simple(0)).unwrap();
        assert_eq!(p.render(&s), "s0/{s1}");
        assert_eq!(p.k, 0);
        assert_eq!(p.bedard[1].j, 0);
        let e = sigma_j(&s, 0, &s.parse_element("s0 s1 s0").unwrap()).unwrap();
        assert_eq!(e.render(&s), "s0 s1 s0/{}");
    }

    #[test]
    fn delta_examples() {
        let s = a1();
        let p = sigma_j(&s, 0, s.simple(0)).unwrap();
        assert_eq!(delta(&s, 1 << 1, &p).unwrap().render(&s), "s0/{s1}");
        assert_eq!(delta(&s, 1 << 0, &p).unwrap().render(&s), "1/{s0}");
        assert!(is_quasi_reduced(&s, &p, 1 << 1).unwrap());
        // s0 s1 s0 is already minimal for {s1}; s1 s0 s1 is s1-conjugate to s0
        let q = sigma_j(&s, 0, &s.parse_element("s0 s1 s0").unwrap()).unwrap();
        assert!(is_quasi_reduced(&s, &q, 1 << 1).unwrap());
        let r = sigma_j(&s, 0, &s.parse_element("s1 s0 s1").unwrap()).unwrap();
        assert_eq!(delta(&s, 1 << 1, &r).unwrap().render(&s), "s0/{s1}");
        assert!(!is_quasi_reduced(&s, &r, 1 << 1).unwrap());
    }

    #[test]
    fn newton_of_translations() {
        let s = a1();
        let t1 = s.parse_element("s1 s0").unwrap();
        let nu = newton_point(&s, &t1);
        assert_eq!(nu.nu, vec![rat(1)]);
        assert!(is_straight(&s, &t1));
        assert!(!is_straight(&s, s.simple(1)));
        assert!(is_straight(&s, &s.identity()));
    }

    #[test]
    fn coarse_types_affine_a1() {
        let s = a1();
        // the two walls are not W^a-conjugate (s0, s1 generate an infinite
        // dihedral group), only W̃-conjugate in the adjoint case
        let p0 = CoarseType::of(&s, 1).unwrap();
        let p1 = CoarseType::of(&s, 2).unwrap();
        assert_ne!(p0, p1);
        let all = CoarseType::apartment();
        assert!(!coarse_type_leq(&s, p0, p1).unwrap());
        assert!(coarse_type_leq(&s, p0, all).unwrap());
        assert!(!coarse_type_leq(&s, all, p0).unwrap());
    }

    #[test]
    fn e_jw_examples() {
        let s = a1();
        let j = 1 << 1;
        assert_eq!(e_jw(&s, 0, s.simple(1)).unwrap(), AffineSubspace::whole(1));
        assert_eq!(e_jw(&s, j, &s.identity()).unwrap(), s.facet_span(j));
        assert_eq!(e_jw(&s, j, s.simple(1)).unwrap(), s.facet_span(j));
    }

    #[test]
    fn class_enumeration_a1() {
        let s = a1();
        let c = enumerate_classes(&s, 1 << 1, 1).unwrap();
        let names: Vec<String> = c.iter().map(|(_, p)| p.render(&s)).collect();
        assert_eq!(names, vec!["1/{s1}", "1/{s1}", "s0/{s1}"]);
        assert_eq!(enumerate_classes(&s, 0, 2).unwrap().len(), 5);
    }

    #[test]
    fn omega_action_pgl2() {
        let s = AffineSystem::parse("A1:ad").unwrap();
        let om = s.omega_group()[1].clone();
        let p = sigma_j(&s, 1 << 1, &s.identity()).unwrap();
        assert_eq!(omega_act(&s, &om, &p).unwrap().render(&s), "1/{s0}");
        let q = sigma_j(&s, 1 << 0, &om.rep).unwrap();
        assert_eq!(q.render(&s), "ω1/{s0}");
        assert_eq!(omega_act(&s, &om, &q).unwrap().render(&s), "ω1/{s1}");
    }
}
