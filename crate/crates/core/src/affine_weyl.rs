//! The extended affine Weyl group `W̃ = Λ ⋊ W` acting on the apartment.
//!
//! An element `t_λ u` acts by `x ↦ λ + u·x`. The fundamental alcove is
//! `⟨α_i, x⟩ > 0`, `⟨θ, x⟩ < 1` for each factor, and `s0 = t_{θ^∨} s_θ`.
//! Affine simple reflections are indexed by *nodes*: node 0 is the affine
//! reflection of the first factor, nodes `1..=r` are the finite simple
//! reflections, and further nodes are the affine reflections of the
//! remaining factors.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use num_rational::BigRational;
use thiserror::Error;

use crate::intmat::IntMat;
use crate::linalg::AffineSubspace;
use crate::root_datum::{DatumError, RootDatum};
use crate::scalar::{rat, Scalar};

/// A set of nodes, as a bitmask.
pub type NodeSet = u64;

pub fn nodes_of(set: NodeSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

pub fn contains(set: NodeSet, i: usize) -> bool {
    set >> i & 1 == 1
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AffineError {
    #[error("subset {0} is not of finite type")]
    NotFiniteType(String),
    #[error("length {length} exceeds the bound {bound}")]
    BoundExceeded { length: usize, bound: usize },
    #[error("cannot parse element `{0}`")]
    Parse(String),
    #[error("element is not minimal in its coset")]
    NotMinimal,
    #[error(transparent)]
    Datum(#[from] DatumError),
}

/// `t_λ·u`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AffineWeylElement {
    pub translation: Vec<i64>,
    pub finite: IntMat,
}

impl fmt::Debug for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{:?}·{:?}", self.translation, self.finite)
    }
}

impl AffineWeylElement {
    pub fn identity(rank: usize) -> Self {
        AffineWeylElement { translation: vec![0; rank], finite: IntMat::identity(rank) }
    }

    pub fn translation(lambda: Vec<i64>) -> Self {
        let n = lambda.len();
        AffineWeylElement { translation: lambda, finite: IntMat::identity(n) }
    }

    pub fn from_finite(finite: IntMat) -> Self {
        AffineWeylElement { translation: vec![0; finite.dim()], finite }
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.translation.iter().all(|&x| x == 0) && self.finite.is_identity()
    }

    pub fn is_translation(&self) -> bool {
        self.finite.is_identity()
    }

    /// `(t_λ u)(t_μ v) = t_{λ+uμ} uv`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.rank(), other.rank(), "elements of different data");
        let um = self.finite.mul_vec(&other.translation);
        AffineWeylElement {
            translation: self.translation.iter().zip(&um).map(|(a, b)| a + b).collect(),
            finite: self.finite.mul(&other.finite),
        }
    }

    pub fn inverse(&self) -> Self {
        let uinv = self.finite.inverse();
        let t = uinv.mul_vec(&self.translation);
        AffineWeylElement { translation: t.into_iter().map(|x| -x).collect(), finite: uinv }
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(self.rank());
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    /// `y x y^{-1}` with `self = y`.
    pub fn conjugate(&self, x: &Self) -> Self {
        self.mul(x).mul(&self.inverse())
    }

    pub fn act<S: Scalar>(&self, x: &[S]) -> Vec<S> {
        let ux = self.finite.mul_vec_s(x);
        ux.into_iter().zip(&self.translation).map(|(a, &t)| a + S::from_i64(t)).collect()
    }

    pub fn act_subspace<S: Scalar>(&self, e: &AffineSubspace<S>) -> AffineSubspace<S> {
        let lin = self.finite.to_matrix::<S>();
        let shift: Vec<S> = self.translation.iter().map(|&t| S::from_i64(t)).collect();
        e.map_affine(&lin, &shift)
    }
}

#[derive(Clone, Debug)]
pub struct AffineNode {
    pub name: String,
    /// The affine root `x ↦ ⟨covector, x⟩ + constant` vanishing on the wall.
    pub covector: Vec<i64>,
    pub constant: i64,
    pub reflection: AffineWeylElement,
    pub factor: usize,
    /// Coefficient in the null root: `Σ mark·a_s = 1` on each factor.
    pub mark: i64,
}

impl AffineNode {
    pub fn value<S: Scalar>(&self, x: &[S]) -> S {
        self.covector
            .iter()
            .zip(x)
            .fold(S::from_i64(self.constant), |acc, (&c, v)| if c == 0 { acc } else { acc + S::from_i64(c) * v.clone() })
    }
}

/// A class in `Ω = W̃/W^a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OmegaElement {
    pub index: usize,
    /// The unique length-zero element of the class.
    pub rep: AffineWeylElement,
    /// `rep·s_i·rep^{-1} = s_{perm[i]}`.
    pub perm: Vec<usize>,
}

impl OmegaElement {
    pub fn is_trivial(&self) -> bool {
        self.index == 0
    }

    pub fn apply(&self, set: NodeSet) -> NodeSet {
        nodes_of(set).fold(0, |acc, i| acc | 1 << self.perm[i])
    }
}

impl PartialOrd for OmegaElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OmegaElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.index.cmp(&other.index)
    }
}

/// Sort key of the canonical element order.
pub type ElementKey = (usize, Vec<i64>, usize, IntMat);

/// A root datum together with its affine simple system and `Ω`.
pub struct AffineSystem {
    datum: RootDatum,
    nodes: Vec<AffineNode>,
    reflection_node: HashMap<AffineWeylElement, usize>,
    omega: Vec<OmegaElement>,
    omega_index: HashMap<AffineWeylElement, usize>,
    parabolic_cache: Mutex<HashMap<NodeSet, Arc<Vec<AffineWeylElement>>>>,
    subset_class_cache: Mutex<HashMap<NodeSet, NodeSet>>,
}

impl fmt::Debug for AffineSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineSystem({})", self.datum.label())
    }
}

impl AffineSystem {
    pub fn parse(spec: &str) -> Result<Self, DatumError> {
        Ok(Self::new(RootDatum::parse(spec)?))
    }

    pub fn new(datum: RootDatum) -> Self {
        let r = datum.rank();
        let mut nodes = Vec::new();
        let affine_node = |k: usize| {
            let theta = datum.highest_root(k);
            let sign_theta = IntMat::reflection(&theta.coroot, &theta.covector);
            AffineNode {
                name: if k == 0 { "s0".to_string() } else { format!("s0.{}", k + 1) },
                covector: theta.covector.iter().map(|x| -x).collect(),
                constant: 1,
                reflection: AffineWeylElement { translation: theta.coroot.clone(), finite: sign_theta },
                factor: k,
                mark: 1,
            }
        };
        nodes.push(affine_node(0));
        for i in 0..r {
            let f = datum.factor_of_simple(i);
            let fac = &datum.factors()[f];
            nodes.push(AffineNode {
                name: format!("s{}", i + 1),
                covector: datum.simple_roots()[i].clone(),
                constant: 0,
                reflection: AffineWeylElement::from_finite(datum.simple_reflection(i).clone()),
                factor: f,
                mark: fac.marks[i - fac.offset],
            });
        }
        for k in 1..datum.factors().len() {
            nodes.push(affine_node(k));
        }
        assert!(nodes.len() <= 64, "too many affine nodes");
        let reflection_node = nodes.iter().enumerate().map(|(i, n)| (n.reflection.clone(), i)).collect();
        let mut sys = AffineSystem {
            datum,
            nodes,
            reflection_node,
            omega: Vec::new(),
            omega_index: HashMap::new(),
            parabolic_cache: Mutex::new(HashMap::new()),
            subset_class_cache: Mutex::new(HashMap::new()),
        };
        sys.build_omega();
        sys
    }

    fn build_omega(&mut self) {
        let r = self.rank();
        let id = AffineWeylElement::identity(r);
        let mut reps: Vec<AffineWeylElement> = vec![id.clone()];
        let mut seen: HashSet<AffineWeylElement> = HashSet::from([id]);
        let gens: Vec<AffineWeylElement> = (0..r)
            .map(|i| {
                let mut e = vec![0; r];
                e[i] = 1;
                self.reduce_to_length_zero(&AffineWeylElement::translation(e))
            })
            .collect();
        let mut frontier = reps.clone();
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for a in &frontier {
                for g in &gens {
                    let p = a.mul(g);
                    if seen.insert(p.clone()) {
                        next.push(p);
                    }
                }
            }
            reps.extend(next.iter().cloned());
            frontier = next;
        }
        reps[1..].sort_by_key(|x| self.key(x));
        self.omega = reps
            .into_iter()
            .enumerate()
            .map(|(index, rep)| {
                let inv = rep.inverse();
                let perm = self
                    .nodes
                    .iter()
                    .map(|n| self.node_of_reflection(&rep.mul(&n.reflection).mul(&inv)).expect("Ω permutes the nodes"))
                    .collect();
                OmegaElement { index, rep, perm }
            })
            .collect();
        self.omega_index = self.omega.iter().map(|o| (o.rep.clone(), o.index)).collect();
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    pub fn nodes(&self) -> &[AffineNode] {
        &self.nodes
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn all_nodes(&self) -> NodeSet {
        (1u64 << self.nodes.len()) - 1
    }

    pub fn identity(&self) -> AffineWeylElement {
        AffineWeylElement::identity(self.rank())
    }

    pub fn simple(&self, i: usize) -> &AffineWeylElement {
        &self.nodes[i].reflection
    }

    pub fn node_of_reflection(&self, x: &AffineWeylElement) -> Option<usize> {
        self.reflection_node.get(x).copied()
    }

    pub fn node_by_name(&self, name: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.name == name)
    }

    pub fn omega_group(&self) -> &[OmegaElement] {
        &self.omega
    }

    /// Iwahori-Matsumoto length of `t_λ u`:
    /// `Σ_{α>0, u⁻¹α>0} |⟨α,λ⟩| + Σ_{α>0, u⁻¹α<0} |⟨α,λ⟩ - 1|`.
    pub fn length(&self, x: &AffineWeylElement) -> usize {
        let mut l = 0;
        for a in self.datum.positive_roots() {
            let k: i64 = a.covector.iter().zip(&x.translation).map(|(p, q)| p * q).sum();
            let beta = x.finite.covec_mul(&a.covector);
            l += if self.datum.is_positive_root(&beta) { k.unsigned_abs() } else { (k - 1).unsigned_abs() };
        }
        l as usize
    }

    /// Whether `ℓ(s_i x) < ℓ(x)`: the affine root `x⁻¹(a_i)` is negative.
    pub fn is_left_descent(&self, x: &AffineWeylElement, i: usize) -> bool {
        let n = &self.nodes[i];
        let c: i64 = n.covector.iter().zip(&x.translation).map(|(p, q)| p * q).sum::<i64>() + n.constant;
        match c.cmp(&0) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => !self.datum.is_positive_root(&x.finite.covec_mul(&n.covector)),
        }
    }

    pub fn is_right_descent(&self, x: &AffineWeylElement, i: usize) -> bool {
        self.is_left_descent(&x.inverse(), i)
    }

    pub fn left_descents(&self, x: &AffineWeylElement) -> NodeSet {
        (0..self.num_nodes()).filter(|&i| self.is_left_descent(x, i)).fold(0, |a, i| a | 1 << i)
    }

    pub fn right_descents(&self, x: &AffineWeylElement) -> NodeSet {
        self.left_descents(&x.inverse())
    }

    /// `x = ω·s_{j1}⋯s_{jk}` with `ω` of length zero and the word reduced.
    pub fn reduced_word(&self, x: &AffineWeylElement) -> (usize, Vec<usize>) {
        let mut y = x.clone();
        let mut word = Vec::new();
        loop {
            let yi = y.inverse();
            match (0..self.num_nodes()).find(|&i| self.is_left_descent(&yi, i)) {
                Some(i) => {
                    y = y.mul(self.simple(i));
                    word.push(i);
                }
                None => break,
            }
        }
        word.reverse();
        (self.omega_index[&y], word)
    }

    fn reduce_to_length_zero(&self, x: &AffineWeylElement) -> AffineWeylElement {
        let mut y = x.clone();
        loop {
            let yi = y.inverse();
            match (0..self.num_nodes()).find(|&i| self.is_left_descent(&yi, i)) {
                Some(i) => y = y.mul(self.simple(i)),
                None => return y,
            }
        }
    }

    /// `κ(x)`.
    pub fn omega_component(&self, x: &AffineWeylElement) -> &OmegaElement {
        let y = self.reduce_to_length_zero(x);
        &self.omega[self.omega_index[&y]]
    }

    pub fn in_affine_weyl(&self, x: &AffineWeylElement) -> bool {
        self.omega_component(x).is_trivial()
    }

    pub fn from_word(&self, omega: usize, word: &[usize]) -> AffineWeylElement {
        word.iter().fold(self.omega[omega].rep.clone(), |acc, &i| acc.mul(self.simple(i)))
    }

    pub fn key(&self, x: &AffineWeylElement) -> ElementKey {
        (self.length(x), x.translation.clone(), self.datum.finite_length(&x.finite), x.finite.clone())
    }

    /// The canonical element order: length, translation, finite part.
    pub fn cmp_elements(&self, a: &AffineWeylElement, b: &AffineWeylElement) -> Ordering {
        self.key(a).cmp(&self.key(b))
    }

    pub fn sort_elements(&self, v: &mut [AffineWeylElement]) {
        v.sort_by_cached_key(|x| self.key(x));
    }

    /// Reduced-word rendering such as `ω1·s0 s1`, or `1`.
    pub fn render(&self, x: &AffineWeylElement) -> String {
        let (o, word) = self.reduced_word(x);
        let w: Vec<&str> = word.iter().map(|&i| self.nodes[i].name.as_str()).collect();
        match (o, w.is_empty()) {
            (0, true) => "1".to_string(),
            (0, false) => w.join(" "),
            (o, true) => format!("ω{o}"),
            (o, false) => format!("ω{o}·{}", w.join(" ")),
        }
    }

    /// Rendering `t[λ]·s1 s2` with a reduced word for the finite part.
    pub fn render_translation_form(&self, x: &AffineWeylElement) -> String {
        let lam: Vec<String> = x.translation.iter().map(|v| v.to_string()).collect();
        let word = self.datum.reduced_word(&x.finite);
        if word.is_empty() {
            format!("t[{}]", lam.join(","))
        } else {
            let w: Vec<String> = word.iter().map(|i| format!("s{}", i + 1)).collect();
            format!("t[{}]·{}", lam.join(","), w.join(" "))
        }
    }

    /// Parse either rendering; factors are multiplied left to right.
    pub fn parse_element(&self, s: &str) -> Result<AffineWeylElement, AffineError> {
        let err = || AffineError::Parse(s.to_string());
        let mut x = self.identity();
        let cleaned = s.replace(['·', '*'], " ");
        for tok in cleaned.split_whitespace() {
            let y = if tok == "1" {
                self.identity()
            } else if let Some(k) = tok.strip_prefix('ω').or_else(|| tok.strip_prefix('w')) {
                let k: usize = k.parse().map_err(|_| err())?;
                self.omega.get(k).ok_or_else(err)?.rep.clone()
            } else if let Some(inner) = tok.strip_prefix("t[").and_then(|t| t.strip_suffix(']')) {
                let lam: Result<Vec<i64>, _> = inner.split(',').map(|v| v.trim().parse::<i64>()).collect();
                let lam = lam.map_err(|_| err())?;
                if lam.len() != self.rank() {
                    return Err(err());
                }
                AffineWeylElement::translation(lam)
            } else {
                self.simple(self.node_by_name(tok).ok_or_else(err)?).clone()
            };
            x = x.mul(&y);
        }
        Ok(x)
    }

    pub fn is_finite_type(&self, j: NodeSet) -> bool {
        (0..self.datum.factors().len()).all(|k| {
            let all: NodeSet =
                self.nodes.iter().enumerate().filter(|(_, n)| n.factor == k).fold(0, |a, (i, _)| a | 1 << i);
            j & all != all
        })
    }

    fn check_finite(&self, j: NodeSet) -> Result<(), AffineError> {
        if self.is_finite_type(j) {
            Ok(())
        } else {
            Err(AffineError::NotFiniteType(self.render_set(j)))
        }
    }

    /// All finite-type subsets, ordered by size then bitmask.
    pub fn finite_type_subsets(&self) -> Vec<NodeSet> {
        let mut v: Vec<NodeSet> = (0..=self.all_nodes()).filter(|&j| self.is_finite_type(j)).collect();
        v.sort_by_key(|&j| (j.count_ones(), j));
        v
    }

    /// `{s0,s1}` style rendering, sorted by node index.
    pub fn render_set(&self, j: NodeSet) -> String {
        let names: Vec<&str> = nodes_of(j).map(|i| self.nodes[i].name.as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    pub fn parse_set(&self, s: &str) -> Result<NodeSet, AffineError> {
        let t = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut j = 0;
        for name in t.split([',', ' ']).filter(|x| !x.is_empty()) {
            j |= 1 << self.node_by_name(name).ok_or_else(|| AffineError::Parse(s.to_string()))?;
        }
        Ok(j)
    }

    /// The finite parabolic subgroup `W_J`.
    pub fn parabolic(&self, j: NodeSet) -> Result<Arc<Vec<AffineWeylElement>>, AffineError> {
        self.check_finite(j)?;
        if let Some(v) = self.parabolic_cache.lock().unwrap().get(&j) {
            return Ok(v.clone());
        }
        let id = self.identity();
        let mut seen: HashSet<AffineWeylElement> = HashSet::from([id.clone()]);
        let mut out = vec![id];
        let mut i = 0;
        while i < out.len() {
            for s in nodes_of(j) {
                let y = out[i].mul(self.simple(s));
                if seen.insert(y.clone()) {
                    out.push(y);
                }
            }
            i += 1;
        }
        let v = Arc::new(out);
        self.parabolic_cache.lock().unwrap().insert(j, v.clone());
        Ok(v)
    }

    pub fn longest_element(&self, j: NodeSet) -> Result<AffineWeylElement, AffineError> {
        let p = self.parabolic(j)?;
        Ok(p.iter().max_by_key(|x| self.length(x)).unwrap().clone())
    }

    /// The `W^a`-conjugacy class of a finite-type subset, by elementary
    /// moves `K ↦ w₀ K w₀` with `w₀` longest in `W_{K∪{s}}`.
    pub fn subset_class(&self, k: NodeSet) -> Result<Vec<NodeSet>, AffineError> {
        self.check_finite(k)?;
        let mut seen: HashSet<NodeSet> = HashSet::from([k]);
        let mut out = vec![k];
        let mut i = 0;
        while i < out.len() {
            let cur = out[i];
            for s in 0..self.num_nodes() {
                let bigger = cur | 1 << s;
                if contains(cur, s) || !self.is_finite_type(bigger) {
                    continue;
                }
                let w0 = self.longest_element(bigger)?;
                let moved = self.ad_intersect(&w0, cur, self.all_nodes());
                debug_assert_eq!(moved.count_ones(), cur.count_ones());
                if seen.insert(moved) {
                    out.push(moved);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        Ok(out)
    }

    /// Canonical representative (least bitmask) of the class of `K`.
    pub fn canonical_subset(&self, k: NodeSet) -> Result<NodeSet, AffineError> {
        if let Some(&c) = self.subset_class_cache.lock().unwrap().get(&k) {
            return Ok(c);
        }
        let class = self.subset_class(k)?;
        let c = class[0];
        let mut cache = self.subset_class_cache.lock().unwrap();
        for m in class {
            cache.insert(m, c);
        }
        Ok(c)
    }

    /// `(a, u, b)` with `w = a·u·b`, `a ∈ W_{J'}`, `b ∈ W_J` and `u` the
    /// minimal element of `W_{J'} w W_J`.
    pub fn min_double_coset_rep(
        &self,
        jprime: NodeSet,
        j: NodeSet,
        w: &AffineWeylElement,
    ) -> Result<(AffineWeylElement, AffineWeylElement, AffineWeylElement), AffineError> {
        self.check_finite(j)?;
        self.check_finite(jprime)?;
        let mut a = self.identity();
        let mut u = w.clone();
        let mut b = self.identity();
        'outer: loop {
            for s in nodes_of(jprime) {
                if self.is_left_descent(&u, s) {
                    u = self.simple(s).mul(&u);
                    a = a.mul(self.simple(s));
                    continue 'outer;
                }
            }
            let ui = u.inverse();
            for s in nodes_of(j) {
                if self.is_left_descent(&ui, s) {
                    u = u.mul(self.simple(s));
                    b = self.simple(s).mul(&b);
                    continue 'outer;
                }
            }
            return Ok((a, u, b));
        }
    }

    /// Minimal element of `W_J·w`.
    pub fn min_left_coset_rep(&self, j: NodeSet, w: &AffineWeylElement) -> Result<AffineWeylElement, AffineError> {
        Ok(self.min_double_coset_rep(j, 0, w)?.1)
    }

    /// Minimal element of `w·W_J`.
    pub fn min_right_coset_rep(&self, j: NodeSet, w: &AffineWeylElement) -> Result<AffineWeylElement, AffineError> {
        Ok(self.min_double_coset_rep(0, j, w)?.1)
    }

    /// Whether `u ∈ ^J W̃`.
    pub fn is_min_left(&self, j: NodeSet, u: &AffineWeylElement) -> bool {
        self.left_descents(u) & j == 0
    }

    /// Bruhat order; elements of different `W^a`-cosets are incomparable.
    pub fn bruhat_leq(&self, a: &AffineWeylElement, b: &AffineWeylElement, bound: usize) -> Result<bool, AffineError> {
        let lb = self.length(b);
        if lb > bound {
            return Err(AffineError::BoundExceeded { length: lb, bound });
        }
        if self.omega_component(a).index != self.omega_component(b).index {
            return Ok(false);
        }
        let mut a = a.clone();
        let mut b = b.clone();
        let mut la = self.length(&a);
        let mut lb = lb;
        loop {
            if la > lb {
                return Ok(false);
            }
            if lb == 0 {
                return Ok(a == b);
            }
            let bi = b.inverse();
            let s = (0..self.num_nodes()).find(|&i| self.is_left_descent(&bi, i)).unwrap();
            let ai = a.inverse();
            if self.is_left_descent(&ai, s) {
                a = a.mul(self.simple(s));
                la -= 1;
            }
            b = b.mul(self.simple(s));
            lb -= 1;
        }
    }

    /// All elements of length at most `l`, grouped by length, each group in
    /// canonical order.
    pub fn elements_by_length(&self, l: usize) -> Vec<Vec<AffineWeylElement>> {
        let mut levels: Vec<Vec<AffineWeylElement>> = vec![self.omega.iter().map(|o| o.rep.clone()).collect()];
        for k in 0..l {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for x in &levels[k] {
                for i in 0..self.num_nodes() {
                    let y = x.mul(self.simple(i));
                    if !seen.contains(&y) && self.length(&y) == k + 1 {
                        seen.insert(y.clone());
                        next.push(y);
                    }
                }
            }
            levels.push(next);
        }
        for lv in levels.iter_mut() {
            self.sort_elements(lv);
        }
        levels
    }

    pub fn elements_up_to(&self, l: usize) -> Vec<AffineWeylElement> {
        self.elements_by_length(l).into_iter().flatten().collect()
    }

    /// Nodes `t ∈ J` with `t = y s y⁻¹` for some `s ∈ K`.
    pub fn ad_intersect(&self, y: &AffineWeylElement, k: NodeSet, j: NodeSet) -> NodeSet {
        let yi = y.inverse();
        nodes_of(k)
            .filter_map(|s| self.node_of_reflection(&y.mul(self.simple(s)).mul(&yi)))
            .filter(|&t| contains(j, t))
            .fold(0, |a, t| a | 1 << t)
    }

    /// `𝔄(K)`: the common zero set of the affine roots of `K`.
    pub fn facet_span<S: Scalar>(&self, k: NodeSet) -> AffineSubspace<S> {
        let r = self.rank();
        if k == 0 {
            return AffineSubspace::whole(r);
        }
        let rows: Vec<Vec<i64>> = nodes_of(k).map(|i| self.nodes[i].covector.clone()).collect();
        let b: Vec<S> = nodes_of(k).map(|i| S::from_i64(-self.nodes[i].constant)).collect();
        let a = crate::linalg::Matrix::<S>::from_i64_rows(&rows);
        AffineSubspace::from_equations(&a, &b).expect("walls of a finite-type facet meet")
    }

    /// The closed-alcove point with the given affine-root values: `a_s(x) = c_s`
    /// for every finite node (the affine nodes are then determined).
    pub fn point_with_values(&self, values: &[BigRational]) -> Vec<BigRational> {
        let r = self.rank();
        let a = crate::linalg::Matrix::<BigRational>::from_i64_rows(self.datum.simple_roots());
        let b: Vec<BigRational> = (1..=r).map(|i| values[i].clone()).collect();
        a.solve(&b).expect("simple roots are a basis")
    }

    /// Fold `x` into the closed fundamental alcove: returns `(y, x0)` with
    /// `y ∈ W^a` and `x = y·x0`.
    pub fn fold_to_alcove<S: Scalar>(&self, x: &[S]) -> (AffineWeylElement, Vec<S>) {
        let mut y = self.identity();
        let mut p = x.to_vec();
        loop {
            match (0..self.num_nodes()).find(|&i| self.nodes[i].value(&p) < S::zero()) {
                Some(i) => {
                    p = self.simple(i).act(&p);
                    y = y.mul(self.simple(i));
                }
                None => return (y, p),
            }
        }
    }

    /// Nodes whose walls contain a point of the closed alcove.
    pub fn vanishing_walls<S: Scalar>(&self, x: &[S]) -> NodeSet {
        (0..self.num_nodes()).filter(|&i| self.nodes[i].value(x).is_zero()).fold(0, |a, i| a | 1 << i)
    }

    pub fn rational_point(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a1() -> AffineSystem {
        AffineSystem::parse("A1:sc").unwrap()
    }

    #[test]
    fn a1_generators() {
        let s = a1();
        let s0 = s.simple(0);
        let s1 = s.simple(1);
        assert!(s0.mul(s0).is_identity());
        let t1 = s1.mul(s0);
        assert!(t1.is_translation());
        assert_eq!(t1.translation, vec![-1]);
        assert_eq!(s.length(&t1), 2);
        assert_eq!(s.length(&s0.mul(s1).mul(s0)), 3);
        assert_eq!(s.render(&t1), "s1 s0");
        assert_eq!(s.omega_group().len(), 1);
    }

    #[test]
    fn s0_reflects_the_far_wall() {
        let s = a1();
        let half = vec![crate::scalar::ratio(1, 2)];
        assert_eq!(s.simple(0).act(&half), half);
        let x = vec![crate::scalar::ratio(1, 5)];
        assert_eq!(s.simple(0).act(&x), vec![crate::scalar::ratio(4, 5)]);
    }

    #[test]
    fn pgl2_omega() {
        let s = AffineSystem::parse("A1:ad").unwrap();
        assert_eq!(s.omega_group().len(), 2);
        let t = AffineWeylElement::translation(vec![1]);
        let om = s.omega_component(&t);
        assert!(!om.is_trivial());
        assert_eq!(om.perm, vec![1, 0]);
        assert_eq!(s.length(&om.rep), 0);
        assert_eq!(s.render(&t), "ω1·s1");
        assert_eq!(s.parse_element("ω1·s1").unwrap(), t);
    }

    #[test]
    fn double_cosets_and_subsets() {
        let s = a1();
        let j = 1 << 1;
        let (_, u, _) = s.min_double_coset_rep(j, j, s.simple(1)).unwrap();
        assert!(u.is_identity());
        let (_, u, _) = s.min_double_coset_rep(j, j, s.simple(0)).unwrap();
        assert_eq!(&u, s.simple(0));
        assert_eq!(s.finite_type_subsets(), vec![0, 1, 2]);
        assert!(s.min_double_coset_rep(3, 0, s.simple(0)).is_err());
        let a2 = AffineSystem::parse("A2").unwrap();
        assert_eq!(a2.finite_type_subsets().len(), 7);
        let a1a1 = AffineSystem::parse("A1+A1").unwrap();
        assert_eq!(a1a1.finite_type_subsets().len(), 9);
    }

    #[test]
    fn bruhat_examples() {
        let s = a1();
        let s0 = s.simple(0).clone();
        let s010 = s.parse_element("s0 s1 s0").unwrap();
        assert!(s.bruhat_leq(&s0, &s010, 3).unwrap());
        assert!(!s.bruhat_leq(&s010, &s0, 3).unwrap());
        assert!(s.bruhat_leq(&s0, &s010, 2).is_err());
        let p = AffineSystem::parse("A1:ad").unwrap();
        let om = p.omega_group()[1].rep.clone();
        assert!(!p.bruhat_leq(p.simple(1), &om, 1).unwrap());
        assert!(!p.bruhat_leq(&om, p.simple(1), 1).unwrap());
    }
}
