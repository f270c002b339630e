//! Apartment charts, the He-Nie function `f(x) = ‖x - wx‖²`, its gradient
//! flow, and truncations of the complex of pieces with a fixed enhanced
//! Newton point.

use std::collections::{HashMap, HashSet};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::affine_weyl::{contains, nodes_of, AffineError, AffineSystem, AffineWeylElement, NodeSet};
use crate::linalg::{add, dot, is_zero_vec, sub, AffineSubspace, Matrix, Vector};
use crate::pieces::{bedard_from_min_rep, coarse_type_leq, delta, is_subset, newton_point, sigma_steps, CoarseType, EnhancedNewtonPoint, Piece};
use crate::scalar::{rat, ratio, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChartError {
    #[error("subspace is not stable under the chart element")]
    NotStable,
    #[error("subspace is not contained in the chart")]
    NotContained,
    #[error("point does not lie in the chart")]
    OutsideChart,
    #[error("chart has no lift to the extended affine Weyl group")]
    NoElement,
    #[error(transparent)]
    Affine(#[from] AffineError),
}

/// A chart `(E, w)`: a relevant subspace `E` with an affine map
/// `x ↦ linear·x + shift` preserving it.
#[derive(Clone, Debug)]
pub struct ApartmentChart<S> {
    e: AffineSubspace<S>,
    linear: Matrix<S>,
    shift: Vector<S>,
    form: Matrix<S>,
    element: Option<AffineWeylElement>,
}

impl<S: Scalar> ApartmentChart<S> {
    /// The full chart `(𝔄, w)`.
    pub fn from_element(sys: &AffineSystem, w: &AffineWeylElement) -> Self {
        let r = sys.rank();
        ApartmentChart {
            e: AffineSubspace::whole(r),
            linear: w.finite.to_matrix(),
            shift: w.translation.iter().map(|&t| S::from_i64(t)).collect(),
            form: sys.datum().form_as(),
            element: Some(w.clone()),
        }
    }

    /// Restrict to a `w`-stable `E' ⊆ E`. Stability is tested exactly, so
    /// this is only reliable for exact scalars.
    pub fn restrict(&self, e: &AffineSubspace<S>) -> Result<Self, ChartError> {
        if !self.e.contains(e) {
            return Err(ChartError::NotContained);
        }
        if e.map_affine(&self.linear, &self.shift) != *e {
            return Err(ChartError::NotStable);
        }
        Ok(ApartmentChart { e: e.clone(), ..self.clone() })
    }

    pub fn convert<T: Scalar>(&self) -> ApartmentChart<T> {
        let c = |x: &S| T::from_rational(&to_rational(x));
        ApartmentChart {
            e: self.e.convert(c),
            linear: self.linear.map(c),
            shift: self.shift.iter().map(c).collect(),
            form: self.form.map(c),
            element: self.element.clone(),
        }
    }

    pub fn subspace(&self) -> &AffineSubspace<S> {
        &self.e
    }

    pub fn element(&self) -> Option<&AffineWeylElement> {
        self.element.as_ref()
    }

    pub fn linear(&self) -> &Matrix<S> {
        &self.linear
    }

    pub fn shift(&self) -> &[S] {
        &self.shift
    }

    pub fn dim(&self) -> usize {
        self.e.dim()
    }

    pub fn is_full(&self) -> bool {
        self.e.dim() == self.e.ambient_dim()
    }

    pub fn apply(&self, x: &[S]) -> Vector<S> {
        add(&self.linear.mul_vec(x), &self.shift)
    }

    /// The linear part on the direction space of `E`, in its basis.
    pub fn direction_matrix(&self) -> Matrix<S> {
        let b = self.e.basis();
        let k = b.len();
        let n = self.e.ambient_dim();
        if k == 0 {
            return Matrix::zeros(0, 0);
        }
        let bm = Matrix::from_columns(n, b);
        let cols: Vec<Vector<S>> =
            b.iter().map(|v| bm.solve(&self.linear.mul_vec(v)).expect("E is stable")).collect();
        Matrix::from_columns(k, &cols)
    }

    /// Gram matrix of the form on the direction basis of `E`.
    pub fn restricted_form(&self) -> Matrix<S> {
        let b = self.e.basis();
        let k = b.len();
        let mut g = Matrix::zeros(k, k);
        for i in 0..k {
            for j in 0..k {
                g[(i, j)] = crate::linalg::form(&self.form, &b[i], &b[j]);
            }
        }
        g
    }

    fn displacement(&self, x: &[S]) -> Vector<S> {
        sub(x, &self.apply(x))
    }

    fn check(&self, x: &[S]) -> Result<(), ChartError> {
        if S::EXACT && !self.e.contains_point(x) {
            return Err(ChartError::OutsideChart);
        }
        Ok(())
    }

    pub fn value(&self, x: &[S]) -> Result<S, ChartError> {
        self.check(x)?;
        let d = self.displacement(x);
        Ok(crate::linalg::form(&self.form, &d, &d))
    }

    /// Differential of `f` at `x` as a covector on the ambient space:
    /// `v ↦ 2⟨x - wx, (1 - w̄)v⟩`.
    fn differential(&self, x: &[S]) -> Vector<S> {
        let d = self.displacement(x);
        let fd = self.form.mul_vec(&d);
        let n = x.len();
        let two = S::from_i64(2);
        (0..n)
            .map(|j| {
                let mut s = S::zero();
                for (i, fdi) in fd.iter().enumerate() {
                    let m = if i == j { S::one() - self.linear[(i, j)].clone() } else { -self.linear[(i, j)].clone() };
                    s = s + fdi.clone() * m;
                }
                two.clone() * s
            })
            .collect()
    }

    /// The gradient of `f` on `E` with respect to the restricted form, as an
    /// ambient vector tangent to `E`.
    pub fn gradient(&self, x: &[S]) -> Result<Vector<S>, ChartError> {
        self.check(x)?;
        let b = self.e.basis();
        let n = x.len();
        if b.is_empty() {
            return Ok(vec![S::zero(); n]);
        }
        let df = self.differential(x);
        let rhs: Vector<S> = b.iter().map(|v| dot(&df, v)).collect();
        let coeffs = self.restricted_form().solve(&rhs).expect("form is definite");
        let mut g = vec![S::zero(); n];
        for (c, v) in coeffs.iter().zip(b) {
            g = crate::linalg::axpy(&g, c, v);
        }
        Ok(g)
    }

    /// The closed form `2(w̄ - 1)^*(w - 1)x` for a full chart, the adjoint
    /// taken for the form.
    pub fn gradient_closed_form(&self, x: &[S]) -> Vector<S> {
        let n = x.len();
        let lm1 = self.linear.sub(&Matrix::identity(n));
        let finv = self.form.inverse().expect("form is definite");
        let adj = finv.mul(&lm1.transpose()).mul(&self.form);
        let wx = sub(&self.apply(x), x);
        adj.mul_vec(&wx).into_iter().map(|v| S::from_i64(2) * v).collect()
    }

    /// Directional derivative of `f` along `v` via the differential.
    pub fn directional_derivative(&self, x: &[S], v: &[S]) -> S {
        dot(&self.differential(x), v)
    }

    /// `Crit(f)`: the minimizers of `f` on `E`.
    pub fn critical_set(&self) -> AffineSubspace<S> {
        let b = self.e.basis();
        let p = self.e.point().to_vec();
        if b.is_empty() {
            return self.e.clone();
        }
        let k = b.len();
        let n = p.len();
        // Normal equations in the coordinates y of x = p + By.
        let nb = Matrix::from_columns(n, b);
        let lm = Matrix::<S>::identity(n).sub(&self.linear);
        let ab = lm.mul(&nb);
        let fab = self.form.mul(&ab);
        let m = ab.transpose().mul(&fab);
        let d0 = self.displacement(&p);
        let rhs: Vector<S> = fab.transpose().mul_vec(&d0).into_iter().map(|v| -v).collect();
        let y = m.solve(&rhs).expect("normal equations are consistent");
        let point = add(&p, &nb.mul_vec(&y));
        let dirs: Vec<Vector<S>> = if m.rows() == 0 { vec![] } else { m.nullspace() };
        let dirs: Vec<Vector<S>> = dirs.iter().map(|c| nb.mul_vec(c)).collect();
        debug_assert_eq!(k, nb.cols());
        AffineSubspace::new(point, &dirs)
    }

    /// The `t → -∞` limit of the flow: the orthogonal projection onto
    /// `Crit(f)` for the form.
    pub fn flow_limit(&self, x: &[S]) -> Result<Vector<S>, ChartError> {
        self.check(x)?;
        Ok(project(&self.form, &self.critical_set(), x))
    }

    /// Whether the Hessian on `E` is a scalar on its range, in which case
    /// every flow line is a straight segment towards its limit.
    pub fn flow_is_straight(&self) -> bool {
        let b = self.e.basis();
        if b.is_empty() {
            return true;
        }
        let k = b.len();
        let n = self.e.ambient_dim();
        let nb = Matrix::from_columns(n, b);
        let lm = Matrix::<S>::identity(n).sub(&self.linear);
        let ab = lm.mul(&nb);
        let h = ab.transpose().mul(&self.form.mul(&ab));
        let kmat = self.restricted_form().inverse().unwrap().mul(&h);
        let rk = kmat.rank();
        if rk == 0 {
            return true;
        }
        let mut tr = S::zero();
        for i in 0..k {
            tr = tr + kmat[(i, i)].clone();
        }
        let lambda = tr / S::from_i64(rk as i64);
        let diff = kmat.mul(&kmat).sub(&kmat.scale(&lambda));
        (0..k).all(|i| (0..k).all(|j| diff[(i, j)].is_negligible()))
    }

    /// Explicit Euler integration of `dx/dt = -∇f` (the flow run backwards).
    pub fn euler_flow(&self, x: &[S], step: &S, steps: usize) -> Result<Vector<S>, ChartError> {
        let mut p = x.to_vec();
        for _ in 0..steps {
            let g = self.gradient(&p)?;
            p = crate::linalg::axpy(&p, &-step.clone(), &g);
        }
        Ok(p)
    }
}

impl ApartmentChart<BigRational> {
    /// The piece `σ_J(y⁻¹wy)` of the facet `yF_J` containing `x`.
    pub fn facet_of_point(&self, sys: &AffineSystem, x: &[BigRational]) -> Result<Piece, ChartError> {
        let mut cache = SigmaCache::default();
        let (j, u) = self.facet_key(sys, x, &mut cache)?;
        Ok(bedard_from_min_rep(sys, j, &u)?)
    }

    /// `(J, u)` with `u/J` the piece of the facet containing `x`.
    pub fn facet_key(&self, sys: &AffineSystem, x: &[BigRational], cache: &mut SigmaCache) -> Result<(NodeSet, AffineWeylElement), ChartError> {
        let w = self.element.as_ref().ok_or(ChartError::NoElement)?;
        if !self.is_full() {
            return Err(ChartError::NoElement);
        }
        let (y, x0) = sys.fold_to_alcove(x);
        let j = sys.vanishing_walls(&x0);
        let conj = y.inverse().conjugate(w);
        Ok((j, cache.sigma(sys, j, &conj)?))
    }

    /// Flow limit together with its facet.
    pub fn flow_limit_piece(&self, sys: &AffineSystem, x: &[BigRational]) -> Result<(Vector<BigRational>, Piece), ChartError> {
        let lim = self.flow_limit(x)?;
        let p = self.facet_of_point(sys, &lim)?;
        Ok((lim, p))
    }
}

fn to_rational<S: Scalar>(x: &S) -> BigRational {
    if let Some(r) = (x as &dyn std::any::Any).downcast_ref::<BigRational>() {
        return r.clone();
    }
    BigRational::from_float(x.to_f64()).expect("finite scalar")
}

/// Orthogonal projection of `x` onto `e` for the form `f`.
pub fn project<S: Scalar>(f: &Matrix<S>, e: &AffineSubspace<S>, x: &[S]) -> Vector<S> {
    let p = e.point().to_vec();
    let b = e.basis();
    if b.is_empty() {
        return p;
    }
    let k = b.len();
    let mut g = Matrix::zeros(k, k);
    for i in 0..k {
        for j in 0..k {
            g[(i, j)] = crate::linalg::form(f, &b[i], &b[j]);
        }
    }
    let d = sub(x, &p);
    let rhs: Vector<S> = b.iter().map(|v| crate::linalg::form(f, v, &d)).collect();
    let c = g.solve(&rhs).expect("form is definite");
    let mut out = p;
    for (ci, v) in c.iter().zip(b) {
        out = crate::linalg::axpy(&out, ci, v);
    }
    out
}

/// Memoized `σ_J`, keyed by `(J, w)`, returning the representative `u`,
/// and memoized pieces `u/J`.
#[derive(Default)]
pub struct SigmaCache {
    map: HashMap<(NodeSet, AffineWeylElement), AffineWeylElement>,
    pieces: HashMap<(NodeSet, AffineWeylElement), Piece>,
}

impl SigmaCache {
    pub fn sigma(&mut self, sys: &AffineSystem, j: NodeSet, w: &AffineWeylElement) -> Result<AffineWeylElement, AffineError> {
        if let Some(u) = self.map.get(&(j, w.clone())) {
            return Ok(u.clone());
        }
        let (u, _) = sigma_steps(sys, j, w)?;
        self.map.insert((j, w.clone()), u.clone());
        Ok(u)
    }

    /// The piece `u/J` for `u ∈ ^JW̃`.
    pub fn piece(&mut self, sys: &AffineSystem, j: NodeSet, u: &AffineWeylElement) -> Result<Piece, AffineError> {
        if let Some(p) = self.pieces.get(&(j, u.clone())) {
            return Ok(p.clone());
        }
        let p = bedard_from_min_rep(sys, j, u)?;
        self.pieces.insert((j, u.clone()), p.clone());
        Ok(p)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

/// A point of the open facet `F_J` of the fundamental alcove: the barycenter
/// with each free wall value perturbed by a random factor in `[1/2, 3/2]`.
pub fn sample_in_facet<R: Rng>(sys: &AffineSystem, j: NodeSet, rng: &mut R) -> Vec<BigRational> {
    let nodes = sys.nodes();
    let nf = sys.datum().factors().len();
    let mut values = vec![BigRational::zero(); nodes.len()];
    for f in 0..nf {
        let free: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].factor == f && !contains(j, i)).collect();
        assert!(!free.is_empty(), "J must be of finite type");
        let weights: Vec<BigRational> = free.iter().map(|_| ratio(rng.gen_range(8..=24), 16)).collect();
        let total: BigRational = weights.iter().cloned().fold(BigRational::zero(), |a, b| a + b);
        for (&i, wt) in free.iter().zip(&weights) {
            values[i] = wt / (&total * rat(nodes[i].mark));
        }
    }
    let x = sys.point_with_values(&values);
    debug_assert_eq!(sys.vanishing_walls(&x), j);
    x
}

/// The barycenter of `F_J`.
pub fn facet_barycenter(sys: &AffineSystem, j: NodeSet) -> Vec<BigRational> {
    let nodes = sys.nodes();
    let nf = sys.datum().factors().len();
    let mut values = vec![BigRational::zero(); nodes.len()];
    for f in 0..nf {
        let free: Vec<usize> = (0..nodes.len()).filter(|&i| nodes[i].factor == f && !contains(j, i)).collect();
        for &i in &free {
            values[i] = BigRational::one() / rat(free.len() as i64 * nodes[i].mark);
        }
    }
    sys.point_with_values(&values)
}

/// Pieces with a fixed `ν̃` and `ℓ(u) ≤ L`, ordered by `δ`.
#[derive(Clone, Debug)]
pub struct TruncatedBComplex {
    pub nu: EnhancedNewtonPoint,
    pub bound: usize,
    pub facets: Vec<Piece>,
    pub essential: Vec<bool>,
    /// Pairs `(a, b)` with `facets[a] < facets[b]`: `J_a ⊊ J_b` and `δ(a) = b`.
    pub order: Vec<(usize, usize)>,
    index: HashMap<(NodeSet, AffineWeylElement), usize>,
}

/// Essential threshold `⟨2ρ, ν⟩` as an integer.
pub fn essential_length(sys: &AffineSystem, nu: &EnhancedNewtonPoint) -> usize {
    let v = sys.datum().pair_two_rho(&nu.nu);
    assert!(v.is_integer(), "⟨2ρ, ν⟩ is an integer for Newton points of elements");
    v.to_integer().try_into().expect("nonnegative")
}

pub fn build_truncated_b(sys: &AffineSystem, nu: &EnhancedNewtonPoint, bound: usize) -> Result<TruncatedBComplex, AffineError> {
    let ess = essential_length(sys, nu);
    let elements = sys.elements_up_to(bound);
    let mut facets = Vec::new();
    for j in sys.finite_type_subsets() {
        for u in &elements {
            if sys.is_min_left(j, u) && newton_point(sys, u) == *nu {
                facets.push(bedard_from_min_rep(sys, j, u)?);
            }
        }
    }
    facets.sort_by(|a, b| crate::pieces::cmp_pieces(sys, a, b));
    let index: HashMap<_, _> = facets.iter().enumerate().map(|(i, p)| ((p.j, p.u.clone()), i)).collect();
    let essential = facets.iter().map(|p| p.length == ess).collect();
    let mut order = Vec::new();
    let fts = sys.finite_type_subsets();
    for (a, p) in facets.iter().enumerate() {
        for &jp in fts.iter().filter(|&&jp| jp != p.j && is_subset(p.j, jp)) {
            let d = delta(sys, jp, p)?;
            let b = *index.get(&(d.j, d.u.clone())).expect("δ does not increase length");
            order.push((a, b));
        }
    }
    Ok(TruncatedBComplex { nu: nu.clone(), bound, facets, essential, order, index })
}

impl TruncatedBComplex {
    pub fn position(&self, p: &Piece) -> Option<usize> {
        self.index.get(&(p.j, p.u.clone())).copied()
    }

    pub fn position_of(&self, j: NodeSet, u: &AffineWeylElement) -> Option<usize> {
        self.index.get(&(j, u.clone())).copied()
    }

    pub fn essential_part(&self) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.essential[i]).collect()
    }

    /// Facets with `|J| = size`; in rank one these are edges (0) and vertices (1).
    pub fn facets_with_j_size(&self, size: u32) -> Vec<usize> {
        (0..self.facets.len()).filter(|&i| self.facets[i].j.count_ones() == size).collect()
    }

    /// `b` is a face of `a` (`a ≤ b`), reflexively.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        a == b || self.order.contains(&(a, b))
    }

    pub fn render(&self, sys: &AffineSystem, i: usize) -> String {
        self.facets[i].render(sys)
    }
}

/// A downward subset given by cut constraints `(n_i, [E_i])`.
#[derive(Clone, Debug)]
pub struct DownwardSpec {
    pub nu: EnhancedNewtonPoint,
    pub essential_length: usize,
    pub cuts: Vec<(usize, CoarseType)>,
}

impl DownwardSpec {
    pub fn new(sys: &AffineSystem, nu: &EnhancedNewtonPoint, cuts: Vec<(usize, CoarseType)>) -> Self {
        DownwardSpec { nu: nu.clone(), essential_length: essential_length(sys, nu), cuts }
    }

    /// `𝒮_{ν̃,≤(n,[𝔄])}`.
    pub fn length_cut(sys: &AffineSystem, nu: &EnhancedNewtonPoint, n: usize) -> Self {
        Self::new(sys, nu, vec![(n, CoarseType::apartment())])
    }

    pub fn essential_only(sys: &AffineSystem, nu: &EnhancedNewtonPoint) -> Self {
        Self::new(sys, nu, vec![])
    }

    pub fn max_length(&self) -> usize {
        self.cuts.iter().map(|c| c.0).max().unwrap_or(0).max(self.essential_length)
    }

    pub fn contains(&self, sys: &AffineSystem, p: &Piece) -> Result<bool, AffineError> {
        if p.newton != self.nu {
            return Ok(false);
        }
        if p.length == self.essential_length {
            return Ok(true);
        }
        for (n, e) in &self.cuts {
            if p.length <= *n && coarse_type_leq(sys, p.coarse_type, *e)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    pub fn facets(&self, sys: &AffineSystem, b: &TruncatedBComplex) -> Result<Vec<bool>, AffineError> {
        assert!(b.bound >= self.max_length(), "truncation too short for the spec");
        b.facets.iter().map(|p| self.contains(sys, p)).collect()
    }
}

/// The three conditions for a downward subset, checked on the truncation.
pub fn is_downward(sys: &AffineSystem, b: &TruncatedBComplex, sub: &[bool]) -> Result<bool, AffineError> {
    for &(a, c) in &b.order {
        if sub[a] && !sub[c] {
            return Ok(false);
        }
    }
    if (0..sub.len()).any(|i| b.essential[i] && !sub[i]) {
        return Ok(false);
    }
    let n = b.facets.len();
    for i in 0..n {
        if sub[i] {
            continue;
        }
        let p = &b.facets[i];
        for k in (0..n).filter(|&k| sub[k]) {
            let q = &b.facets[k];
            if p.length <= q.length && coarse_type_leq(sys, p.coarse_type, q.coarse_type)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One sampled flow line.
#[derive(Clone, Debug)]
pub struct FlowSample {
    pub chart: String,
    pub start: Vec<BigRational>,
    pub start_piece: String,
    pub limit: Vec<BigRational>,
    pub limit_piece: String,
    pub max_length: usize,
    pub points_checked: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Default)]
pub struct ContractionReport {
    pub samples: Vec<FlowSample>,
}

impl ContractionReport {
    pub fn violations(&self) -> usize {
        self.samples.iter().map(|s| s.violations.len()).sum()
    }
}

/// Parameters in `[0, 1]` where the segment `x → z` meets an affine root
/// hyperplane, together with `k/steps`, and midpoints between consecutive
/// ones; every facet met by the segment contains one of these points.
pub fn segment_parameters(sys: &AffineSystem, x: &[BigRational], z: &[BigRational], steps: usize) -> Vec<BigRational> {
    let mut ts: Vec<BigRational> = (0..=steps).map(|k| ratio(k as i64, steps as i64)).collect();
    for root in sys.datum().positive_roots() {
        let cov: Vec<BigRational> = root.covector.iter().map(|&c| rat(c)).collect();
        let a = dot(&cov, x);
        let b = dot(&cov, z);
        if a == b {
            continue;
        }
        let (lo, hi) = if a < b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let mut k = lo.ceil();
        while k <= hi {
            ts.push((&k - &a) / (&b - &a));
            k += BigRational::one();
        }
    }
    ts.sort();
    ts.dedup();
    let mids: Vec<BigRational> = ts.windows(2).map(|w| (&w[0] + &w[1]) / rat(2)).collect();
    ts.extend(mids);
    ts.sort();
    ts
}

fn lerp(x: &[BigRational], z: &[BigRational], t: &BigRational) -> Vec<BigRational> {
    x.iter().zip(z).map(|(a, b)| a + (b - a) * t).collect()
}

/// Follow the flow line of `chart` from `x` and check it against `spec`:
/// the limit is critical with an essential facet, every visited facet lies in
/// the spec, and `f` strictly decreases.
pub fn check_flow(
    sys: &AffineSystem,
    chart: &ApartmentChart<BigRational>,
    x: &[BigRational],
    spec: &DownwardSpec,
    steps: usize,
    cache: &mut SigmaCache,
) -> Result<FlowSample, ChartError> {
    Ok(check_flow_specs(sys, chart, x, &[spec], steps, cache)?.remove(0))
}

/// [`check_flow`] against several specs, tracing the flow line once.
pub fn check_flow_specs(
    sys: &AffineSystem,
    chart: &ApartmentChart<BigRational>,
    x: &[BigRational],
    specs: &[&DownwardSpec],
    steps: usize,
    cache: &mut SigmaCache,
) -> Result<Vec<FlowSample>, ChartError> {
    let w = chart.element().ok_or(ChartError::NoElement)?;
    let mut common = Vec::new();
    let limit = chart.flow_limit(x)?;
    let (sj, su) = chart.facet_key(sys, x, cache)?;
    let start = cache.piece(sys, sj, &su)?;
    if !is_zero_vec(&chart.gradient(&limit)?) || !chart.critical_set().contains_point(&limit) {
        common.push("limit is not critical".to_string());
    }
    let (lj, lu) = chart.facet_key(sys, &limit, cache)?;
    let lpiece = cache.piece(sys, lj, &lu)?;
    let path: Vec<Vec<BigRational>> = if chart.flow_is_straight() {
        segment_parameters(sys, x, &limit, steps).iter().map(|t| lerp(x, &limit, t)).collect()
    } else {
        let h = ratio(1, 16);
        let mut pts = vec![x.to_vec()];
        let mut p = x.to_vec();
        for _ in 0..steps {
            p = chart.euler_flow(&p, &h, 1)?;
            pts.push(p.clone());
        }
        pts.push(limit.clone());
        pts
    };
    let mut seen: HashSet<(NodeSet, AffineWeylElement)> = HashSet::new();
    let mut visited = Vec::new();
    let critical = chart.value(x)? == chart.value(&limit)?;
    let mut last: Option<BigRational> = None;
    for p in &path {
        let key = chart.facet_key(sys, p, cache)?;
        if seen.insert(key.clone()) {
            visited.push(cache.piece(sys, key.0, &key.1)?);
        }
        let v = chart.value(p)?;
        if let Some(prev) = &last {
            if !critical && v >= *prev {
                common.push("f does not decrease along the flow".to_string());
            }
        }
        last = Some(v);
    }
    let max_length = visited.iter().map(|p| p.length).max().unwrap_or(0);
    specs
        .iter()
        .map(|spec| {
            let mut violations = common.clone();
            if lpiece.length != spec.essential_length {
                violations.push(format!("limit facet {} is not essential", lpiece.render(sys)));
            }
            for piece in &visited {
                if !spec.contains(sys, piece)? {
                    violations.push(format!("flow leaves the spec at {}", piece.render(sys)));
                }
            }
            Ok(FlowSample {
                chart: sys.render(w),
                start: x.to_vec(),
                start_piece: start.render(sys),
                limit: limit.clone(),
                limit_piece: lpiece.render(sys),
                max_length,
                points_checked: path.len(),
                violations,
            })
        })
        .collect()
}

/// For each facet `u/J` of the spec (within the truncation), sample points
/// of the open facet `F_J` in the chart `(𝔄, u)` and check their flow lines.
pub fn verify_contraction<R: Rng>(
    sys: &AffineSystem,
    b: &TruncatedBComplex,
    spec: &DownwardSpec,
    samples: usize,
    steps: usize,
    rng: &mut R,
) -> Result<ContractionReport, ChartError> {
    let member = spec.facets(sys, b)?;
    let mut cache = SigmaCache::default();
    let mut report = ContractionReport::default();
    for (i, p) in b.facets.iter().enumerate().filter(|(i, _)| member[*i]) {
        let chart = ApartmentChart::<BigRational>::from_element(sys, &p.u);
        for _ in 0..samples {
            let x = sample_in_facet(sys, p.j, rng);
            let s = check_flow(sys, &chart, &x, spec, steps, &mut cache)?;
            debug_assert_eq!(s.start_piece, b.render(sys, i));
            report.samples.push(s);
        }
    }
    Ok(report)
}

/// All nodes of `J` as a set of node indices, for reports.
pub fn render_nodes(j: NodeSet) -> Vec<usize> {
    nodes_of(j).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pieces::sigma_j;
    use rand::SeedableRng;

    fn a1() -> AffineSystem {
        AffineSystem::parse("A1:sc").unwrap()
    }

    #[test]
    fn identity_and_translation_charts() {
        let s = a1();
        let c = ApartmentChart::<BigRational>::from_element(&s, &s.identity());
        let x = vec![ratio(3, 7)];
        assert!(c.value(&x).unwrap().is_zero());
        assert!(is_zero_vec(&c.gradient(&x).unwrap()));
        let t = AffineWeylElement::translation(vec![2]);
        let c = ApartmentChart::<BigRational>::from_element(&s, &t);
        assert_eq!(c.value(&x).unwrap(), rat(8));
        assert!(is_zero_vec(&c.gradient(&x).unwrap()));
        assert_eq!(c.critical_set(), AffineSubspace::whole(1));
        assert_eq!(c.flow_limit(&x).unwrap(), x);
    }

    #[test]
    fn reflection_chart() {
        let s = a1();
        let c = ApartmentChart::<BigRational>::from_element(&s, s.simple(1));
        assert_eq!(c.linear()[(0, 0)], rat(-1));
        assert!(c.shift()[0].is_zero());
        // ‖α^∨‖² = 2, so f(t α^∨) = 8t² and the gradient is 8t in these units.
        let x = vec![ratio(7, 10)];
        assert_eq!(c.value(&x).unwrap(), rat(8) * ratio(49, 100));
        assert_eq!(c.gradient(&x).unwrap(), vec![ratio(28, 5)]);
        assert_eq!(c.gradient_closed_form(&x), c.gradient(&x).unwrap());
        assert_eq!(c.critical_set(), AffineSubspace::point_set(vec![rat(0)]));
        let (lim, p) = c.flow_limit_piece(&s, &x).unwrap();
        assert_eq!(lim, vec![rat(0)]);
        assert_eq!(p.render(&s), "1/{s1}");
        let c0 = ApartmentChart::<BigRational>::from_element(&s, s.simple(0));
        assert_eq!(c0.critical_set(), AffineSubspace::point_set(vec![ratio(1, 2)]));
    }

    #[test]
    fn restriction_to_fixed_point() {
        let s = a1();
        let c = ApartmentChart::<BigRational>::from_element(&s, s.simple(1));
        let r = c.restrict(&AffineSubspace::point_set(vec![rat(0)])).unwrap();
        assert_eq!(r.dim(), 0);
        assert!(r.gradient(&[rat(0)]).unwrap().is_empty() || is_zero_vec(&r.gradient(&[rat(0)]).unwrap()));
        assert_eq!(c.restrict(&AffineSubspace::point_set(vec![rat(1)])).unwrap_err(), ChartError::NotStable);
    }

    #[test]
    fn facet_of_point_examples() {
        let s = a1();
        let x = vec![ratio(1, 3)];
        let c = ApartmentChart::<BigRational>::from_element(&s, &s.identity());
        assert_eq!(c.facet_of_point(&s, &x).unwrap().render(&s), "1/{}");
        let c = ApartmentChart::<BigRational>::from_element(&s, s.simple(1));
        assert_eq!(c.facet_of_point(&s, &[rat(0)]).unwrap().render(&s), "1/{s1}");
        let t = AffineWeylElement::translation(vec![1]);
        let c = ApartmentChart::<BigRational>::from_element(&s, &t);
        assert_eq!(c.facet_of_point(&s, &x).unwrap().render(&s), "s0 s1/{}");
        let t1 = s.parse_element("s1 s0").unwrap();
        let c = ApartmentChart::<BigRational>::from_element(&s, &t1);
        assert_eq!(c.facet_of_point(&s, &x).unwrap().render(&s), "s1 s0/{}");
    }

    #[test]
    fn sampling_stays_in_open_facet() {
        let s = AffineSystem::parse("A2").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for j in s.finite_type_subsets() {
            for _ in 0..5 {
                let x = sample_in_facet(&s, j, &mut rng);
                assert_eq!(s.vanishing_walls(&x), j);
                assert!(s.nodes().iter().all(|n| n.value(&x) >= rat(0)));
            }
            assert_eq!(s.vanishing_walls(&facet_barycenter(&s, j)), j);
        }
    }

    #[test]
    fn sl2_truncations() {
        let s = a1();
        let t = s.parse_element("s1 s0").unwrap();
        let b = build_truncated_b(&s, &newton_point(&s, &t), 2).unwrap();
        let names: Vec<String> = (0..b.facets.len()).map(|i| b.render(&s, i)).collect();
        assert_eq!(names, ["s1 s0/{}", "s0 s1/{}", "s1 s0/{s0}", "s0 s1/{s1}"]);
        assert_eq!(b.order.len(), 4);
        assert!(b.essential.iter().all(|&e| e));

        let b0 = build_truncated_b(&s, &newton_point(&s, &s.identity()), 3).unwrap();
        assert_eq!(b0.facets_with_j_size(0).len(), 5);
        assert_eq!(b0.facets_with_j_size(1).len(), 6);
        let ess: Vec<String> = b0.essential_part().iter().map(|&i| b0.render(&s, i)).collect();
        assert_eq!(ess, ["1/{}", "1/{s0}", "1/{s1}"]);
    }

    #[test]
    fn downward_subsets() {
        let s = a1();
        let nu = newton_point(&s, &s.identity());
        let b = build_truncated_b(&s, &nu, 5).unwrap();
        let ess = DownwardSpec::essential_only(&s, &nu).facets(&s, &b).unwrap();
        assert!(is_downward(&s, &b, &ess).unwrap());
        let cut = DownwardSpec::length_cut(&s, &nu, 3).facets(&s, &b).unwrap();
        assert!(is_downward(&s, &b, &cut).unwrap());
        let mut less = ess.clone();
        let i = less.iter().position(|&x| x).unwrap();
        less[i] = false;
        assert!(!is_downward(&s, &b, &less).unwrap());
    }

    #[test]
    fn contraction_on_sl2() {
        let s = a1();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let nu = newton_point(&s, &s.identity());
        let b = build_truncated_b(&s, &nu, 4).unwrap();
        let spec = DownwardSpec::length_cut(&s, &nu, 3);
        let rep = verify_contraction(&s, &b, &spec, 5, 8, &mut rng).unwrap();
        assert_eq!(rep.violations(), 0, "{:?}", rep.samples.iter().find(|x| !x.violations.is_empty()));
        assert!(!rep.samples.is_empty());
        for smp in &rep.samples {
            assert!(["1/{}", "1/{s0}", "1/{s1}"].contains(&smp.limit_piece.as_str()));
        }
    }

    #[test]
    fn sigma_cache_agrees() {
        let s = a1();
        let mut cache = SigmaCache::default();
        let w = s.parse_element("s0 s1 s0").unwrap();
        let u = cache.sigma(&s, 2, &w).unwrap();
        assert_eq!(u, sigma_j(&s, 2, &w).unwrap().u);
        cache.sigma(&s, 2, &w).unwrap();
        assert_eq!(cache.len(), 1);
    }
}
