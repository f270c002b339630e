//! Reduced root data, their finite Weyl groups and invariant forms.
//!
//! Vectors live in the coweight lattice `Λ` and are written in a fixed
//! integral basis of `Λ`; roots are integral covectors in the dual basis.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::intmat::{hermite_basis, IntMat};
use crate::linalg::Matrix;
use crate::scalar::{rat, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DatumError {
    #[error("unknown series `{0}`")]
    UnknownSeries(String),
    #[error("invalid rank {rank} for series {series}")]
    InvalidRank { series: char, rank: usize },
    #[error("isogeny `{0}` is not compatible with the type")]
    IncompatibleIsogeny(String),
    #[error("cannot parse root datum spec `{0}`")]
    Parse(String),
}

/// Which lattice between coroots and coweights is used as `Λ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Isogeny {
    SimplyConnected,
    Adjoint,
    /// `Λ` is spanned by the coroots and these extra coweights, given in
    /// fundamental-coweight coordinates.
    Sublattice(Vec<Vec<i64>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorSpec {
    pub series: char,
    pub rank: usize,
    pub isogeny: Isogeny,
}

/// One irreducible factor of the datum.
#[derive(Clone, Debug)]
pub struct Factor {
    pub series: char,
    pub rank: usize,
    /// First simple-root index (and first lattice coordinate) of this factor.
    pub offset: usize,
    pub isogeny_tag: String,
    /// Index into [`RootDatum::roots`] of the highest root.
    pub highest_root: usize,
    /// Coefficients of the highest root in the simple roots of the factor.
    pub marks: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Root {
    pub covector: Vec<i64>,
    pub coroot: Vec<i64>,
    pub simple_coords: Vec<i64>,
    pub factor: usize,
}

impl Root {
    pub fn is_positive(&self) -> bool {
        self.simple_coords.iter().all(|&c| c >= 0)
    }

    pub fn height(&self) -> i64 {
        self.simple_coords.iter().sum()
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FiniteWeylElement {
    pub matrix: IntMat,
    /// Reduced word in the finite simple reflections (0-based indices).
    pub word: Vec<usize>,
}

impl fmt::Debug for FiniteWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "1");
        }
        let w: Vec<String> = self.word.iter().map(|i| format!("s{}", i + 1)).collect();
        write!(f, "{}", w.join(" "))
    }
}

impl FiniteWeylElement {
    pub fn length(&self) -> usize {
        self.word.len()
    }
}

pub struct RootDatum {
    label: String,
    factors: Vec<Factor>,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    lattice_basis: Vec<Vec<i64>>,
    roots: Vec<Root>,
    root_index: HashMap<Vec<i64>, usize>,
    form: Matrix<BigRational>,
    two_rho: Vec<i64>,
    reflections: Vec<IntMat>,
    weyl: OnceLock<Vec<FiniteWeylElement>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RootDatum").field("label", &self.label).field("cartan", &self.cartan).finish()
    }
}

/// Doubled squared root lengths and bonds `(i, j)` of a Dynkin diagram
/// (Bourbaki numbering, 0-based).
fn dynkin(series: char, rank: usize) -> Result<(Vec<i64>, Vec<(usize, usize)>), DatumError> {
    let bad = || DatumError::InvalidRank { series, rank };
    let chain = |n: usize| (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect::<Vec<_>>();
    Ok(match series {
        'A' if rank >= 1 => (vec![2; rank], chain(rank)),
        'B' if rank >= 2 => {
            let mut l = vec![4; rank];
            l[rank - 1] = 2;
            (l, chain(rank))
        }
        'C' if rank >= 2 => {
            let mut l = vec![2; rank];
            l[rank - 1] = 4;
            (l, chain(rank))
        }
        'D' if rank >= 4 => {
            let mut b = chain(rank - 1);
            b.push((rank - 3, rank - 1));
            (vec![2; rank], b)
        }
        'E' if (6..=8).contains(&rank) => {
            let mut b = vec![(0, 2), (1, 3), (2, 3)];
            b.extend((3..rank - 1).map(|i| (i, i + 1)));
            (vec![2; rank], b)
        }
        'F' if rank == 4 => (vec![4, 4, 2, 2], chain(4)),
        'G' if rank == 2 => (vec![2, 6], chain(2)),
        'A' | 'B' | 'C' | 'D' | 'E' | 'F' | 'G' => return Err(bad()),
        _ => return Err(DatumError::UnknownSeries(series.to_string())),
    })
}

/// `cartan[i][j] = <α_i, α_j^∨>`.
fn cartan_matrix(lengths: &[i64], bonds: &[(usize, usize)]) -> Vec<Vec<i64>> {
    let r = lengths.len();
    let mut b = vec![vec![0i64; r]; r];
    for i in 0..r {
        b[i][i] = lengths[i];
    }
    for &(i, j) in bonds {
        let v = -lengths[i].max(lengths[j]) / 2;
        b[i][j] = v;
        b[j][i] = v;
    }
    (0..r).map(|i| (0..r).map(|j| 2 * b[i][j] / lengths[j]).collect()).collect()
}

struct FactorData {
    cartan: Vec<Vec<i64>>,
    basis: Vec<Vec<i64>>,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    form: Matrix<BigRational>,
    tag: String,
}

fn build_factor(spec: &FactorSpec) -> Result<FactorData, DatumError> {
    let (lengths, bonds) = dynkin(spec.series, spec.rank)?;
    let r = spec.rank;
    let cartan = cartan_matrix(&lengths, &bonds);
    let coroot_fund: Vec<Vec<i64>> = (0..r).map(|j| (0..r).map(|i| cartan[i][j]).collect()).collect();
    let identity: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| i64::from(i == j)).collect()).collect();
    let (basis, tag) = match &spec.isogeny {
        Isogeny::SimplyConnected => (coroot_fund.clone(), "sc".to_string()),
        Isogeny::Adjoint => (identity, "ad".to_string()),
        Isogeny::Sublattice(extra) => {
            if extra.iter().any(|v| v.len() != r) {
                return Err(DatumError::IncompatibleIsogeny(format!("{extra:?}")));
            }
            let mut gens = coroot_fund.clone();
            gens.extend(extra.iter().cloned());
            let tag = extra.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(";");
            (hermite_basis(&gens), format!("sub{tag}"))
        }
    };
    assert_eq!(basis.len(), r);
    // α_i(b_k) is the i-th fundamental-coweight coordinate of b_k
    let simple_roots: Vec<Vec<i64>> = (0..r).map(|i| basis.iter().map(|b| b[i]).collect()).collect();
    let bt = Matrix::<BigRational>::from_i64_rows(&basis).transpose();
    let mut simple_coroots = Vec::with_capacity(r);
    for col in &coroot_fund {
        let rhs: Vec<BigRational> = col.iter().map(|&v| rat(v)).collect();
        let sol = bt.solve(&rhs).ok_or_else(|| DatumError::IncompatibleIsogeny(spec_tag(spec)))?;
        let ints: Option<Vec<i64>> =
            sol.iter().map(|q| if q.is_integer() { q.to_integer().to_i64() } else { None }).collect();
        simple_coroots.push(ints.ok_or_else(|| DatumError::IncompatibleIsogeny(spec_tag(spec)))?);
    }
    // Gram matrix on coroots, scaled so that short coroots have norm 2.
    let lmax = *lengths.iter().max().unwrap();
    let mut bsym = vec![vec![0i64; r]; r];
    for i in 0..r {
        for j in 0..r {
            bsym[i][j] = cartan[i][j] * lengths[j] / 2;
        }
    }
    let g = Matrix::from_rows(
        (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| BigRational::new((2 * lmax * bsym[i][j]).into(), (lengths[i] * lengths[j]).into()))
                    .collect()
            })
            .collect(),
    );
    let m = Matrix::<BigRational>::from_columns(r, &to_rat_vecs(&simple_coroots));
    let minv = m.inverse().expect("coroots are a basis");
    let form = minv.transpose().mul(&g).mul(&minv);
    Ok(FactorData { cartan, basis, simple_roots, simple_coroots, form, tag })
}

fn spec_tag(spec: &FactorSpec) -> String {
    format!("{}{}:{:?}", spec.series, spec.rank, spec.isogeny)
}

fn to_rat_vecs(v: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    v.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
}

fn dot_i(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Parse one factor such as `A1:sc`, `a1:AD`, `G2`, `A3:2` (the quotient of
/// `SL_4` by its central subgroup of order 2) or `B3:sub=0,0,1`.
pub fn parse_factor(s: &str) -> Result<FactorSpec, DatumError> {
    let s = s.trim();
    let (ty, iso) = match s.split_once(':') {
        Some((t, i)) => (t.trim(), Some(i.trim().to_ascii_lowercase())),
        None => (s, None),
    };
    let mut chars = ty.chars();
    let series = chars.next().ok_or_else(|| DatumError::Parse(s.into()))?.to_ascii_uppercase();
    let rank: usize = chars.as_str().parse().map_err(|_| DatumError::Parse(s.into()))?;
    if !"ABCDEFG".contains(series) {
        return Err(DatumError::UnknownSeries(series.to_string()));
    }
    let isogeny = match iso.as_deref() {
        None | Some("sc") | Some("simply-connected") => Isogeny::SimplyConnected,
        Some("ad") | Some("adjoint") => Isogeny::Adjoint,
        Some(other) if other.starts_with("sub=") => {
            let vecs: Result<Vec<Vec<i64>>, _> = other[4..]
                .split(';')
                .map(|v| v.split(',').map(|x| x.trim().parse::<i64>()).collect())
                .collect();
            Isogeny::Sublattice(vecs.map_err(|_| DatumError::Parse(s.into()))?)
        }
        Some(other) => {
            let d: i64 = other.parse().map_err(|_| DatumError::Parse(s.into()))?;
            let n = rank as i64 + 1;
            if series != 'A' || d <= 0 || n % d != 0 {
                return Err(DatumError::IncompatibleIsogeny(s.into()));
            }
            let mut v = vec![0; rank];
            v[0] = n / d;
            Isogeny::Sublattice(vec![v])
        }
    };
    Ok(FactorSpec { series, rank, isogeny })
}

/// Parse a datum spec: factors joined by `+`, e.g. `A1:sc+A1:ad`.
pub fn parse_spec(s: &str) -> Result<Vec<FactorSpec>, DatumError> {
    if s.trim().is_empty() {
        return Err(DatumError::Parse(s.into()));
    }
    s.split('+').map(parse_factor).collect()
}

pub fn build_root_datum(series: char, rank: usize, isogeny: Isogeny) -> Result<RootDatum, DatumError> {
    RootDatum::from_factors(&[FactorSpec { series: series.to_ascii_uppercase(), rank, isogeny }])
}

impl RootDatum {
    pub fn parse(spec: &str) -> Result<Self, DatumError> {
        Self::from_factors(&parse_spec(spec)?)
    }

    pub fn from_factors(specs: &[FactorSpec]) -> Result<Self, DatumError> {
        if specs.is_empty() {
            return Err(DatumError::Parse(String::new()));
        }
        let built: Vec<FactorData> = specs.iter().map(build_factor).collect::<Result<_, _>>()?;
        let rank: usize = specs.iter().map(|s| s.rank).sum();
        let mut cartan = vec![vec![0; rank]; rank];
        let mut simple_roots = vec![vec![0; rank]; rank];
        let mut simple_coroots = vec![vec![0; rank]; rank];
        let mut lattice_basis = vec![vec![0; rank]; rank];
        let mut form = Matrix::<BigRational>::zeros(rank, rank);
        let mut offsets = Vec::new();
        let mut off = 0;
        for (spec, fd) in specs.iter().zip(&built) {
            offsets.push(off);
            for i in 0..spec.rank {
                for j in 0..spec.rank {
                    cartan[off + i][off + j] = fd.cartan[i][j];
                    simple_roots[off + i][off + j] = fd.simple_roots[i][j];
                    simple_coroots[off + i][off + j] = fd.simple_coroots[i][j];
                    lattice_basis[off + i][off + j] = fd.basis[i][j];
                    form[(off + i, off + j)] = fd.form[(i, j)].clone();
                }
            }
            off += spec.rank;
        }

        // all roots by closing the simple roots under simple reflections
        let mut roots: Vec<Root> = Vec::new();
        let mut seen: HashSet<Vec<i64>> = HashSet::new();
        let mut queue: VecDeque<Root> = VecDeque::new();
        for (fi, spec) in specs.iter().enumerate() {
            for i in offsets[fi]..offsets[fi] + spec.rank {
                let mut coords = vec![0; rank];
                coords[i] = 1;
                queue.push_back(Root {
                    covector: simple_roots[i].clone(),
                    coroot: simple_coroots[i].clone(),
                    simple_coords: coords,
                    factor: fi,
                });
            }
        }
        while let Some(r) = queue.pop_front() {
            if !seen.insert(r.simple_coords.clone()) {
                continue;
            }
            for j in 0..rank {
                let c = dot_i(&r.covector, &simple_coroots[j]);
                let d = dot_i(&simple_roots[j], &r.coroot);
                if c == 0 && d == 0 {
                    continue;
                }
                let mut nr = r.clone();
                for k in 0..rank {
                    nr.covector[k] -= c * simple_roots[j][k];
                    nr.coroot[k] -= d * simple_coroots[j][k];
                }
                nr.simple_coords[j] -= c;
                if !seen.contains(&nr.simple_coords) {
                    queue.push_back(nr);
                }
            }
            roots.push(r);
        }
        // positive roots first, by height, then coordinates
        roots.sort_by(|a, b| {
            (!a.is_positive(), a.height().abs(), &a.simple_coords).cmp(&(!b.is_positive(), b.height().abs(), &b.simple_coords))
        });
        let root_index: HashMap<Vec<i64>, usize> =
            roots.iter().enumerate().map(|(i, r)| (r.covector.clone(), i)).collect();
        let mut factors = Vec::new();
        for (fi, (spec, fd)) in specs.iter().zip(&built).enumerate() {
            let (hi, hr) = roots
                .iter()
                .enumerate()
                .filter(|(_, r)| r.factor == fi && r.is_positive())
                .max_by_key(|(_, r)| r.height())
                .expect("nonempty factor");
            let o = offsets[fi];
            factors.push(Factor {
                series: spec.series,
                rank: spec.rank,
                offset: o,
                isogeny_tag: fd.tag.clone(),
                highest_root: hi,
                marks: hr.simple_coords[o..o + spec.rank].to_vec(),
            });
        }
        let mut two_rho = vec![0; rank];
        for r in roots.iter().filter(|r| r.is_positive()) {
            for k in 0..rank {
                two_rho[k] += r.covector[k];
            }
        }
        let reflections = (0..rank).map(|i| IntMat::reflection(&simple_coroots[i], &simple_roots[i])).collect();
        let label = specs
            .iter()
            .zip(&built)
            .map(|(s, fd)| format!("{}{}:{}", s.series, s.rank, fd.tag))
            .collect::<Vec<_>>()
            .join("+");
        Ok(RootDatum {
            label,
            factors,
            rank,
            cartan,
            simple_roots,
            simple_coroots,
            lattice_basis,
            roots,
            root_index,
            form,
            two_rho,
            reflections,
            weyl: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn simple_roots(&self) -> &[Vec<i64>] {
        &self.simple_roots
    }

    pub fn simple_coroots(&self) -> &[Vec<i64>] {
        &self.simple_coroots
    }

    /// Basis of `Λ` in fundamental-coweight coordinates, one row per vector.
    pub fn coweight_lattice(&self) -> &[Vec<i64>] {
        &self.lattice_basis
    }

    pub fn roots(&self) -> &[Root] {
        &self.roots
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Root> {
        self.roots.iter().filter(|r| r.is_positive())
    }

    pub fn num_positive_roots(&self) -> usize {
        self.roots.len() / 2
    }

    pub fn root_of(&self, covector: &[i64]) -> Option<&Root> {
        self.root_index.get(covector).map(|&i| &self.roots[i])
    }

    pub fn highest_root(&self, factor: usize) -> &Root {
        &self.roots[self.factors[factor].highest_root]
    }

    pub fn invariant_form(&self) -> &Matrix<BigRational> {
        &self.form
    }

    pub fn form_as<S: Scalar>(&self) -> Matrix<S> {
        self.form.map(S::from_rational)
    }

    pub fn two_rho(&self) -> &[i64] {
        &self.two_rho
    }

    pub fn simple_reflection(&self, i: usize) -> &IntMat {
        &self.reflections[i]
    }

    /// `⟨2ρ, ν⟩`.
    pub fn pair_two_rho(&self, nu: &[BigRational]) -> BigRational {
        self.two_rho.iter().zip(nu).fold(BigRational::zero(), |acc, (&a, b)| acc + rat(a) * b)
    }

    pub fn pair(&self, covector: &[i64], v: &[BigRational]) -> BigRational {
        covector.iter().zip(v).fold(BigRational::zero(), |acc, (&a, b)| acc + rat(a) * b)
    }

    /// Sign of a root given by its covector.
    pub fn is_positive_root(&self, covector: &[i64]) -> bool {
        self.root_of(covector).expect("not a root").is_positive()
    }

    /// Number of positive roots `β` with `β ∘ w` negative, i.e. `ℓ(w)`.
    pub fn finite_length(&self, w: &IntMat) -> usize {
        self.positive_roots().filter(|r| !self.is_positive_root(&w.covec_mul(&r.covector))).count()
    }

    /// A reduced word for `w`, by peeling right descents.
    pub fn reduced_word(&self, w: &IntMat) -> Vec<usize> {
        let mut word = Vec::new();
        let mut x = w.clone();
        // s_i is a right descent of x iff x(α_i) < 0, i.e. α_i ∘ x^{-1} < 0
        loop {
            let xinv = x.inverse();
            let Some(i) = (0..self.rank).find(|&i| !self.is_positive_root(&xinv.covec_mul(&self.simple_roots[i])))
            else {
                break;
            };
            x = x.mul(&self.reflections[i]);
            word.push(i);
        }
        word.reverse();
        word
    }

    pub fn weyl_element(&self, matrix: IntMat) -> FiniteWeylElement {
        let word = self.reduced_word(&matrix);
        FiniteWeylElement { matrix, word }
    }

    /// The finite Weyl group, ordered by length then matrix entries.
    /// Computed on first use.
    pub fn weyl_group(&self) -> &[FiniteWeylElement] {
        self.weyl.get_or_init(|| {
            let id = IntMat::identity(self.rank);
            let mut seen: HashSet<IntMat> = HashSet::from([id.clone()]);
            let mut out = vec![FiniteWeylElement { matrix: id.clone(), word: vec![] }];
            let mut frontier = vec![out[0].clone()];
            while !frontier.is_empty() {
                let mut next = Vec::new();
                for w in &frontier {
                    for (i, s) in self.reflections.iter().enumerate() {
                        let m = w.matrix.mul(s);
                        if seen.insert(m.clone()) {
                            let mut word = w.word.clone();
                            word.push(i);
                            next.push(FiniteWeylElement { matrix: m, word });
                        }
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
            out.sort_by(|a, b| (a.word.len(), &a.matrix).cmp(&(b.word.len(), &b.matrix)));
            out
        })
    }

    /// Dominant element of the W-orbit of `v`, with `w` such that `w·v = v⁺`.
    pub fn dominant_representative(&self, v: &[BigRational]) -> (Vec<BigRational>, FiniteWeylElement) {
        let mut x = v.to_vec();
        let mut m = IntMat::identity(self.rank);
        let mut word = Vec::new();
        while let Some(i) = (0..self.rank).find(|&i| self.pair(&self.simple_roots[i], &x).is_negative()) {
            x = self.reflections[i].mul_vec_s(&x);
            m = self.reflections[i].mul(&m);
            word.insert(0, i);
        }
        (x, FiniteWeylElement { matrix: m, word })
    }

    pub fn is_dominant(&self, v: &[BigRational]) -> bool {
        self.simple_roots.iter().all(|a| !self.pair(a, v).is_negative())
    }

    /// `F(a, b)` for the invariant form.
    pub fn inner(&self, a: &[BigRational], b: &[BigRational]) -> BigRational {
        crate::linalg::form(&self.form, a, b)
    }

    /// Which factor a simple index belongs to.
    pub fn factor_of_simple(&self, i: usize) -> usize {
        self.factors.iter().position(|f| i >= f.offset && i < f.offset + f.rank).expect("simple index")
    }

    /// Index of the center `Λ / Q^∨`, i.e. `|det|` of the coroot matrix.
    pub fn fundamental_group_order(&self) -> usize {
        let m = Matrix::<BigRational>::from_columns(self.rank, &to_rat_vecs(&self.simple_coroots));
        let d = m.determinant().abs();
        assert!(d.is_integer());
        d.to_integer().to_usize().unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn a1_simply_connected() {
        let d = RootDatum::parse("A1:sc").unwrap();
        assert_eq!(d.simple_coroots(), &[vec![1]]);
        assert_eq!(d.simple_roots(), &[vec![2]]);
        assert_eq!(d.two_rho(), &[2]);
        assert_eq!(d.roots().len(), 2);
        assert_eq!(d.invariant_form()[(0, 0)], rat(2));
    }

    #[test]
    fn a1_adjoint_has_half_coroot_basis() {
        let d = RootDatum::parse("a1:AD").unwrap();
        assert_eq!(d.simple_roots(), &[vec![1]]);
        assert_eq!(d.simple_coroots(), &[vec![2]]);
        assert_eq!(d.fundamental_group_order(), 2);
    }

    #[test]
    fn cartan_convention() {
        let b2 = RootDatum::parse("B2").unwrap();
        assert_eq!(b2.cartan_matrix(), &[vec![2, -2], vec![-1, 2]]);
        let g2 = RootDatum::parse("G2").unwrap();
        assert_eq!(g2.cartan_matrix(), &[vec![2, -1], vec![-3, 2]]);
        assert_eq!(g2.num_positive_roots(), 6);
        let e8 = RootDatum::parse("E8").unwrap();
        assert_eq!(e8.num_positive_roots(), 120);
    }

    #[test]
    fn weyl_group_orders() {
        for (s, n) in [("A1", 2), ("A2", 6), ("C2", 8), ("G2", 12), ("A3", 24), ("B3", 48), ("A1+A1", 4)] {
            assert_eq!(RootDatum::parse(s).unwrap().weyl_group().len(), n, "{s}");
        }
    }

    #[test]
    fn intermediate_isogeny() {
        let d = RootDatum::parse("A3:2").unwrap();
        assert_eq!(d.fundamental_group_order(), 2);
        assert!(RootDatum::parse("A3:3").is_err());
        assert!(matches!(RootDatum::parse("Q2"), Err(DatumError::UnknownSeries(_))));
        assert!(matches!(RootDatum::parse("D3"), Err(DatumError::InvalidRank { .. })));
    }

    #[test]
    fn dominant_representative_a2() {
        let d = RootDatum::parse("A2").unwrap();
        // s1 α1^∨ = -α1^∨ has dominant rep α1^∨ + α2^∨ (the highest coroot)
        let (v, w) = d.dominant_representative(&q(&[-1, 0]));
        assert_eq!(v, q(&[1, 1]));
        assert_eq!(w.matrix.mul_vec_s(&q(&[-1, 0])), v);
        assert_eq!(d.pair_two_rho(&q(&[1, 0])), rat(2));
    }
}
