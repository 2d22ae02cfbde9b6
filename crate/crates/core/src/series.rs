//! Degree-truncated noncommutative power series `sum a_alpha X_alpha`.
//!
//! Coefficients are stored sparsely, keyed by the graded word index of
//! [`GradedEnumeration`]. A series carries an exactness flag: it is cleared
//! whenever a composition had to drop terms of the outer series, and
//! `tail_bound` then bounds the neglected contribution to the constant
//! coefficient.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::words::{GradedEnumeration, Word};
use crate::C64;

/// Dense accumulators are used up to this many coordinates.
const DENSE_ACCUMULATOR_LIMIT: usize = 1 << 20;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NcSeries {
    n: usize,
    degree: usize,
    terms: BTreeMap<usize, C64>,
    exact: bool,
    tail_bound: f64,
}

enum Accumulator {
    Dense(Vec<C64>),
    Sparse(HashMap<usize, C64>),
}

impl Accumulator {
    fn new(dim: usize) -> Self {
        if dim <= DENSE_ACCUMULATOR_LIMIT {
            Accumulator::Dense(vec![zero(); dim])
        } else {
            Accumulator::Sparse(HashMap::new())
        }
    }

    fn add(&mut self, i: usize, c: C64) {
        match self {
            Accumulator::Dense(v) => v[i] += c,
            Accumulator::Sparse(m) => *m.entry(i).or_insert_with(zero) += c,
        }
    }

    fn into_terms(self) -> BTreeMap<usize, C64> {
        match self {
            Accumulator::Dense(v) => v
                .into_iter()
                .enumerate()
                .filter(|(_, c)| *c != zero())
                .collect(),
            Accumulator::Sparse(m) => m.into_iter().filter(|(_, c)| *c != zero()).collect(),
        }
    }
}

impl NcSeries {
    pub fn zero(n: usize, degree: usize) -> Result<Self> {
        GradedEnumeration::new(n, degree)?;
        Ok(NcSeries {
            n,
            degree,
            terms: BTreeMap::new(),
            exact: true,
            tail_bound: 0.0,
        })
    }

    pub fn constant(n: usize, degree: usize, c: C64) -> Result<Self> {
        let mut s = Self::zero(n, degree)?;
        if c != zero() {
            s.terms.insert(0, c);
        }
        Ok(s)
    }

    pub fn one(n: usize, degree: usize) -> Result<Self> {
        Self::constant(n, degree, one())
    }

    /// `c * X_w`.
    pub fn monomial(n: usize, degree: usize, w: &Word, c: C64) -> Result<Self> {
        Self::from_terms(n, degree, [(w.clone(), c)])
    }

    /// The coordinate series `X_{i+1}` (0-based `i`).
    pub fn variable(n: usize, degree: usize, i: usize) -> Result<Self> {
        Self::monomial(n, degree, &Word::letter(i), one())
    }

    /// Builds a series from `(word, coefficient)` pairs; repeated words add up.
    pub fn from_terms<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Word, C64)>,
    {
        let e = GradedEnumeration::new(n, degree)?;
        let mut s = Self::zero(n, degree)?;
        for (w, c) in terms {
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if w.len() > degree {
                return Err(Error::WordTooLong {
                    len: w.len(),
                    degree,
                });
            }
            if let Some(&l) = w.letters().iter().find(|&&l| l as usize >= n) {
                return Err(Error::LetterOutOfRange {
                    letter: l as i64 + 1,
                    n,
                });
            }
            let i = e.index(&w).expect("validated word");
            *s.terms.entry(i).or_insert_with(zero) += c;
        }
        s.terms.retain(|_, c| *c != zero());
        Ok(s)
    }

    /// Builds a series from graded indices; indices beyond `degree` are rejected.
    pub fn from_indexed<I>(n: usize, degree: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, C64)>,
    {
        let e = GradedEnumeration::new(n, degree)?;
        let mut s = Self::zero(n, degree)?;
        for (i, c) in terms {
            if i >= e.total_dim() {
                return Err(Error::WordTooLong {
                    len: degree + 1,
                    degree,
                });
            }
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(Error::NonFinite);
            }
            if c != zero() {
                *s.terms.entry(i).or_insert_with(zero) += c;
            }
        }
        s.terms.retain(|_, c| *c != zero());
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub(crate) fn mark_inexact(&mut self, tail: f64) {
        self.exact = false;
        self.tail_bound += tail;
    }

    pub fn enumeration(&self) -> GradedEnumeration {
        GradedEnumeration::new(self.n, self.degree).expect("validated at construction")
    }

    /// Stored `(graded index, coefficient)` pairs in graded order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, C64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }

    pub fn word_terms(&self) -> Vec<(Word, C64)> {
        let e = self.enumeration();
        self.terms().map(|(i, c)| (e.unindex(i), c)).collect()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, w: &Word) -> C64 {
        self.enumeration()
            .index(w)
            .and_then(|i| self.terms.get(&i).copied())
            .unwrap_or_else(zero)
    }

    pub fn coefficient_at(&self, i: usize) -> C64 {
        self.terms.get(&i).copied().unwrap_or_else(zero)
    }

    pub fn constant_term(&self) -> C64 {
        self.coefficient_at(0)
    }

    /// Length of the longest stored word (0 for the zero series).
    pub fn max_len(&self) -> usize {
        let e = self.enumeration();
        self.terms
            .keys()
            .next_back()
            .map(|&i| e.length_of(i))
            .unwrap_or(0)
    }

    /// Length of the shortest stored word, `None` for the zero series.
    pub fn min_len(&self) -> Option<usize> {
        let e = self.enumeration();
        self.terms.keys().next().map(|&i| e.length_of(i))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Drops words longer than `degree` and lowers the truncation bound.
    pub fn truncate(&self, degree: usize) -> NcSeries {
        if degree >= self.degree {
            return self.clone();
        }
        let e = self.enumeration();
        let cut = e.offset(degree + 1);
        NcSeries {
            n: self.n,
            degree,
            terms: self.terms.range(..cut).map(|(&i, &c)| (i, c)).collect(),
            exact: self.exact,
            tail_bound: self.tail_bound,
        }
    }

    /// The homogeneous part of length `k`.
    pub fn homogeneous(&self, k: usize) -> NcSeries {
        let mut out = NcSeries {
            terms: BTreeMap::new(),
            ..self.clone()
        };
        if k <= self.degree {
            let e = self.enumeration();
            out.terms = self
                .terms
                .range(e.level(k))
                .map(|(&i, &c)| (i, c))
                .collect();
        }
        out
    }

    pub fn scale(&self, c: C64) -> NcSeries {
        let mut out = self.clone();
        if c == zero() {
            out.terms.clear();
        } else {
            for v in out.terms.values_mut() {
                *v *= c;
            }
        }
        out.tail_bound *= c.norm();
        out
    }

    fn check_alphabet(&self, other: &NcSeries) -> Result<()> {
        if self.n != other.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    /// `self + c * other`, truncated at the smaller degree.
    pub fn add_scaled(&self, other: &NcSeries, c: C64) -> Result<NcSeries> {
        self.check_alphabet(other)?;
        let degree = self.degree.min(other.degree);
        let mut out = self.truncate(degree);
        let cut = out.enumeration().total_dim();
        for (&i, &v) in other.terms.range(..cut) {
            *out.terms.entry(i).or_insert_with(zero) += c * v;
        }
        out.terms.retain(|_, v| *v != zero());
        out.exact = self.exact && other.exact;
        out.tail_bound = self.tail_bound + c.norm() * other.tail_bound;
        Ok(out)
    }

    pub fn add(&self, other: &NcSeries) -> Result<NcSeries> {
        self.add_scaled(other, one())
    }

    pub fn sub(&self, other: &NcSeries) -> Result<NcSeries> {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    /// `sum |a_alpha|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).sum()
    }

    /// Fock-space norm `(sum |a_alpha|^2)^(1/2)`.
    pub fn l2_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest coefficient difference against `other` over words of length
    /// at most `up_to`.
    pub fn max_abs_diff(&self, other: &NcSeries, up_to: usize) -> f64 {
        let e = GradedEnumeration::new(self.n, up_to).expect("small degree");
        let cut = e.total_dim();
        let mut worst: f64 = 0.0;
        for (&i, &c) in self.terms.range(..cut) {
            worst = worst.max((c - other.coefficient_at(i)).norm());
        }
        for (&i, &c) in other.terms.range(..cut) {
            if !self.terms.contains_key(&i) {
                worst = worst.max(c.norm());
            }
        }
        worst
    }

    /// Dense coefficient vector over all words of length at most `degree`.
    pub fn to_dense(&self, degree: usize) -> Result<Vec<C64>> {
        let e = GradedEnumeration::new(self.n, degree)?;
        let mut v = vec![zero(); e.total_dim()];
        for (&i, &c) in self.terms.range(..e.total_dim()) {
            v[i] = c;
        }
        Ok(v)
    }
}

/// `lambda_alpha = lambda_{i1} ... lambda_{ik}` for the word with graded index `i`.
fn point_power(e: &GradedEnumeration, i: usize, point: &[C64]) -> C64 {
    let (len, mut code) = e.split(i);
    let n = e.n();
    let mut acc = one();
    for _ in 0..len {
        acc *= point[code % n];
        code /= n;
    }
    acc
}

/// Cauchy (concatenation) product; the result is truncated at the smaller degree.
pub fn cauchy_product(f: &NcSeries, g: &NcSeries) -> Result<NcSeries> {
    f.check_alphabet(g)?;
    let degree = f.degree.min(g.degree);
    let e = GradedEnumeration::new(f.n, f.degree.max(g.degree))?;
    let cut = e.offset(degree + 1);
    let g_split: Vec<(usize, usize, C64)> = g
        .terms
        .range(..cut)
        .map(|(&i, &c)| {
            let (l, code) = e.split(i);
            (l, code, c)
        })
        .collect();
    let mut acc = Accumulator::new(cut);
    for (&i, &a) in f.terms.range(..cut) {
        let (lu, cu) = e.split(i);
        for &(lv, cv, b) in &g_split {
            if lu + lv > degree {
                // g terms are sorted by length
                break;
            }
            acc.add(e.offset(lu + lv) + cu * e.power(lv) + cv, a * b);
        }
    }
    let exact = f.exact && g.exact;
    let tail_bound = f.tail_bound * g.l1_norm() + g.tail_bound * f.l1_norm();
    Ok(NcSeries {
        n: f.n,
        degree,
        terms: acc.into_terms(),
        exact,
        tail_bound,
    })
}

/// Scalar representation `sum a_alpha lambda_alpha`.
pub fn eval_scalar(f: &NcSeries, point: &[C64]) -> Result<C64> {
    if point.len() != f.n {
        return Err(Error::AlphabetMismatch {
            left: f.n,
            right: point.len(),
        });
    }
    let e = f.enumeration();
    Ok(f.terms
        .iter()
        .map(|(&i, &a)| a * point_power(&e, i, point))
        .sum())
}

/// `f(T_1, ..., T_n)` for square matrices `T_i`.
pub fn eval_at_matrices(f: &NcSeries, mats: &[DMatrix<C64>]) -> Result<DMatrix<C64>> {
    if mats.len() != f.n {
        return Err(Error::AlphabetMismatch {
            left: f.n,
            right: mats.len(),
        });
    }
    let dim = mats.first().map(|m| m.nrows()).unwrap_or(0);
    if mats.iter().any(|m| m.nrows() != dim || m.ncols() != dim) {
        return Err(Error::Precondition(
            "matrix tuple must consist of equal-size square matrices".into(),
        ));
    }
    let e = f.enumeration();
    let mut memo: HashMap<usize, DMatrix<C64>> = HashMap::new();
    memo.insert(0, DMatrix::identity(dim, dim));
    let mut out = DMatrix::zeros(dim, dim);
    for (&i, &a) in &f.terms {
        let mut chain = Vec::new();
        let mut j = i;
        while !memo.contains_key(&j) {
            chain.push(j);
            j = e.parent(j).expect("root is memoized").0;
        }
        for &idx in chain.iter().rev() {
            let (p, l) = e.parent(idx).expect("nonempty word");
            let m = &memo[&p] * &mats[l];
            memo.insert(idx, m);
        }
        out += &memo[&i] * a;
    }
    Ok(out)
}

/// The matrix `f(r S_1, ..., r S_n)` with the left creation operators
/// truncated at length `shift_degree` (top level mapped to zero). Column
/// `beta` is `sum_alpha a_alpha r^|alpha| e_{alpha beta}`.
pub fn eval_at_shifts(f: &NcSeries, r: f64, shift_degree: usize) -> Result<DMatrix<C64>> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Precondition(format!("radius {r} must lie in [0, 1)")));
    }
    let e = GradedEnumeration::new(f.n, shift_degree.max(f.degree))?;
    let dim = e.offset(shift_degree + 1);
    let mut m = DMatrix::zeros(dim, dim);
    for (&i, &a) in &f.terms {
        let (la, ca) = e.split(i);
        if la > shift_degree {
            break;
        }
        let w = a * r.powi(la as i32);
        for lb in 0..=shift_degree - la {
            let target = e.offset(la + lb) + ca * e.power(lb);
            let source = e.offset(lb);
            for cb in 0..e.power(lb) {
                m[(target + cb, source + cb)] += w;
            }
        }
    }
    Ok(m)
}

/// An n-tuple of series `phi = (phi_1, ..., phi_n)` with a shared alphabet
/// and truncation degree.
#[derive(Clone, Debug, PartialEq)]
pub struct SymbolTuple {
    components: Vec<NcSeries>,
    constant: Vec<C64>,
    /// Entry `(i, j)` is the coefficient of `X_j` in `phi_i`.
    linear: DMatrix<C64>,
}

impl SymbolTuple {
    pub fn new(components: Vec<NcSeries>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        let degree = components[0].degree;
        for c in &components {
            if c.n != n {
                return Err(Error::AlphabetMismatch { left: n, right: c.n });
            }
            if c.degree != degree {
                return Err(Error::DegreeMismatch(format!(
                    "symbol components have degrees {} and {}",
                    degree, c.degree
                )));
            }
        }
        let constant = components.iter().map(|c| c.constant_term()).collect();
        let linear = DMatrix::from_fn(n, n, |i, j| components[i].coefficient_at(1 + j));
        Ok(SymbolTuple {
            components,
            constant,
            linear,
        })
    }

    pub fn identity(n: usize, degree: usize) -> Result<Self> {
        Self::linear(&DMatrix::identity(n, n), degree)
    }

    /// `phi_i = sum_j a[(i, j)] X_j`.
    pub fn linear(a: &DMatrix<C64>, degree: usize) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::Precondition("linear part must be square".into()));
        }
        let comps = (0..n)
            .map(|i| {
                NcSeries::from_terms(
                    n,
                    degree,
                    (0..n).map(|j| (Word::letter(j), a[(i, j)])),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(comps)
    }

    /// Row-vector convention `[X_1, ..., X_n] m`, i.e. `phi_j = sum_i X_i m[(i, j)]`.
    pub fn row_action(m: &DMatrix<C64>, degree: usize) -> Result<Self> {
        Self::linear(&m.transpose(), degree)
    }

    pub fn n(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> usize {
        self.components[0].degree
    }

    pub fn components(&self) -> &[NcSeries] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &NcSeries {
        &self.components[i]
    }

    /// `phi(0)`.
    pub fn constant(&self) -> &[C64] {
        &self.constant
    }

    pub fn constant_norm(&self) -> f64 {
        self.constant.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn has_zero_constant(&self) -> bool {
        self.constant.iter().all(|c| *c == zero())
    }

    /// `[<phi_i, e_j>]`: entry `(i, j)` is the coefficient of `X_j` in `phi_i`.
    pub fn linear_matrix(&self) -> &DMatrix<C64> {
        &self.linear
    }

    pub fn is_exact(&self) -> bool {
        self.components.iter().all(|c| c.exact)
    }

    pub fn tail_bound(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.tail_bound)
            .fold(0.0, f64::max)
    }

    pub fn max_len(&self) -> usize {
        self.components.iter().map(|c| c.max_len()).max().unwrap_or(0)
    }

    /// True when every component is a linear form (no constant, nothing above degree 1).
    pub fn is_linear(&self) -> bool {
        self.has_zero_constant() && self.max_len() <= 1
    }

    pub fn truncate(&self, degree: usize) -> SymbolTuple {
        SymbolTuple::new(self.components.iter().map(|c| c.truncate(degree)).collect())
            .expect("truncation keeps the shape")
    }

    /// Scalar representation `phi(lambda)`.
    pub fn eval(&self, point: &[C64]) -> Result<Vec<C64>> {
        self.components
            .iter()
            .map(|c| eval_scalar(c, point))
            .collect()
    }

    /// `self ∘ inner`, i.e. `(phi_1 ∘ inner, ..., phi_n ∘ inner)`.
    pub fn compose(&self, inner: &SymbolTuple, outer_cap: usize) -> Result<SymbolTuple> {
        if self.n() != inner.n() {
            return Err(Error::AlphabetMismatch {
                left: self.n(),
                right: inner.n(),
            });
        }
        let comps = self
            .components
            .iter()
            .map(|c| compose(c, inner, outer_cap))
            .collect::<Result<Vec<_>>>()?;
        SymbolTuple::new(comps)
    }
}

/// Default number of substituted orders: exact `degree` when `phi(0) = 0`,
/// otherwise `4 * degree`.
pub fn default_outer_cap(phi: &SymbolTuple, degree: usize) -> usize {
    if phi.has_zero_constant() {
        degree.max(1)
    } else {
        4 * degree.max(1)
    }
}

/// Memoized powers `phi_alpha` of a symbol, truncated at a fixed degree.
pub(crate) struct PowerTable<'a> {
    e: GradedEnumeration,
    phi: Vec<NcSeries>,
    memo: HashMap<usize, NcSeries>,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> PowerTable<'a> {
    pub(crate) fn new(phi: &'a SymbolTuple, degree: usize, max_word: usize) -> Result<Self> {
        let e = GradedEnumeration::new(phi.n(), max_word)?;
        let mut memo = HashMap::new();
        memo.insert(0, NcSeries::one(phi.n(), degree)?);
        Ok(PowerTable {
            e,
            phi: phi.components.iter().map(|c| c.truncate(degree)).collect(),
            memo,
            _marker: std::marker::PhantomData,
        })
    }

    pub(crate) fn get(&mut self, i: usize) -> Result<&NcSeries> {
        let mut chain = Vec::new();
        let mut j = i;
        while !self.memo.contains_key(&j) {
            chain.push(j);
            j = self.e.parent(j).expect("root is memoized").0;
        }
        for &idx in chain.iter().rev() {
            let (p, l) = self.e.parent(idx).expect("nonempty word");
            let s = cauchy_product(&self.memo[&p], &self.phi[l])?;
            self.memo.insert(idx, s);
        }
        Ok(&self.memo[&i])
    }
}

/// `f ∘ phi = sum_{|alpha| <= outer_cap} a_alpha phi_alpha`, truncated at
/// `min(deg f, deg phi)`.
///
/// When `phi(0) = 0` only words of length up to the result degree can
/// contribute, so the result is exact whenever `outer_cap` reaches it. When
/// `phi(0) != 0` and terms of `f` are skipped, the result is marked inexact
/// with tail bound `||phi(0)||^(outer_cap + 1) * sum_skipped |a_alpha|`.
pub fn compose(f: &NcSeries, phi: &SymbolTuple, outer_cap: usize) -> Result<NcSeries> {
    if f.n != phi.n() {
        return Err(Error::AlphabetMismatch {
            left: f.n,
            right: phi.n(),
        });
    }
    if outer_cap == 0 && f.terms.keys().any(|&i| i != 0) {
        return Err(Error::DegenerateOuterCap);
    }
    let degree = f.degree.min(phi.degree());
    let zero_const = phi.has_zero_constant();
    let e = f.enumeration();
    let mut table = PowerTable::new(phi, degree, f.degree)?;
    let mut acc = Accumulator::new(GradedEnumeration::new(f.n, degree)?.total_dim());
    let mut skipped_l1 = 0.0;
    for (&i, &a) in &f.terms {
        let len = e.length_of(i);
        if len > outer_cap {
            skipped_l1 += a.norm();
            continue;
        }
        if zero_const && len > degree {
            continue;
        }
        for (j, c) in table.get(i)?.terms() {
            acc.add(j, a * c);
        }
    }
    let mut out = NcSeries {
        n: f.n,
        degree,
        terms: acc.into_terms(),
        exact: f.exact && phi.is_exact(),
        tail_bound: f.tail_bound + phi.tail_bound() * f.l1_norm(),
    };
    if skipped_l1 > 0.0 && !zero_const {
        out.mark_inexact(phi.constant_norm().powi(outer_cap as i32 + 1) * skipped_l1);
    }
    Ok(out)
}

/// A noncommutative series given by a linear representation: the
/// coefficient of `alpha = g_{i1} ... g_{ik}` is
/// `initial^T M_{i1} ... M_{ik} terminal`, restricted to `|alpha| <= degree`.
///
/// Composition uses the matrix Neumann expansion
/// `f ∘ phi = initial^T (sum_k (sum_i M_i phi_i)^k) terminal`, which never
/// enumerates the words of `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeries {
    n: usize,
    degree: usize,
    initial: DVector<C64>,
    transitions: Vec<DMatrix<C64>>,
    terminal: DVector<C64>,
}

impl RationalSeries {
    pub fn new(
        degree: usize,
        initial: DVector<C64>,
        transitions: Vec<DMatrix<C64>>,
        terminal: DVector<C64>,
    ) -> Result<Self> {
        let n = transitions.len();
        GradedEnumeration::new(n, 0)?;
        let r = initial.len();
        if terminal.len() != r || transitions.iter().any(|m| m.nrows() != r || m.ncols() != r) {
            return Err(Error::Precondition(
                "linear representation has inconsistent dimensions".into(),
            ));
        }
        Ok(RationalSeries {
            n,
            degree,
            initial,
            transitions,
            terminal,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn with_degree(&self, degree: usize) -> RationalSeries {
        RationalSeries {
            degree,
            ..self.clone()
        }
    }

    pub fn coefficient(&self, w: &Word) -> C64 {
        if w.len() > self.degree {
            return zero();
        }
        let mut row = self.initial.transpose();
        for &l in w.letters() {
            row = &row * &self.transitions[l as usize];
        }
        (row * &self.terminal)[(0, 0)]
    }

    /// Scalar representation `sum_{k <= degree} u^T (sum_i lambda_i M_i)^k v`.
    pub fn eval_scalar(&self, point: &[C64]) -> Result<C64> {
        if point.len() != self.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: point.len(),
            });
        }
        let r = self.initial.len();
        let t = self
            .transitions
            .iter()
            .zip(point)
            .fold(DMatrix::zeros(r, r), |acc, (m, &c)| acc + m * c);
        let mut row = self.initial.transpose();
        let mut sum = (&row * &self.terminal)[(0, 0)];
        for _ in 0..self.degree {
            row = &row * &t;
            sum += (&row * &self.terminal)[(0, 0)];
        }
        Ok(sum)
    }

    /// Materializes all nonzero coefficients. Branches whose state vector
    /// vanishes are pruned, so sparse representations stay cheap.
    pub fn to_series(&self, max_terms: usize) -> Result<NcSeries> {
        let e = GradedEnumeration::new(self.n, self.degree)?;
        let mut terms = BTreeMap::new();
        let mut frontier: Vec<(usize, nalgebra::RowDVector<C64>)> =
            vec![(0, self.initial.transpose())];
        while let Some((i, row)) = frontier.pop() {
            let c = (&row * &self.terminal)[(0, 0)];
            if c != zero() {
                terms.insert(i, c);
                if terms.len() > max_terms {
                    return Err(Error::TooLarge {
                        what: "materialized rational series",
                        size: terms.len() as u128,
                        limit: max_terms as u128,
                    });
                }
            }
            for l in 0..self.n {
                if let Some(child) = e.child(i, l) {
                    let next = &row * &self.transitions[l];
                    if next.iter().any(|v| *v != zero()) {
                        frontier.push((child, next));
                    }
                }
            }
        }
        Ok(NcSeries {
            n: self.n,
            degree: self.degree,
            terms,
            exact: true,
            tail_bound: 0.0,
        })
    }

    /// `self ∘ phi`, truncated at `min(self.degree, phi.degree)`, summing
    /// words of length up to `min(outer_cap, self.degree)`.
    pub fn compose(&self, phi: &SymbolTuple, outer_cap: usize) -> Result<NcSeries> {
        if phi.n() != self.n {
            return Err(Error::AlphabetMismatch {
                left: self.n,
                right: phi.n(),
            });
        }
        if outer_cap == 0 && self.degree > 0 {
            return Err(Error::DegenerateOuterCap);
        }
        let degree = self.degree.min(phi.degree());
        let zero_const = phi.has_zero_constant();
        let mut levels = outer_cap.min(self.degree);
        if zero_const {
            levels = levels.min(degree);
        }
        let r = self.initial.len();
        let phi_t: Vec<NcSeries> = phi.components.iter().map(|c| c.truncate(degree)).collect();
        let mut state: Vec<NcSeries> = self
            .initial
            .iter()
            .map(|&c| NcSeries::constant(self.n, degree, c))
            .collect::<Result<_>>()?;
        let mut out = NcSeries::zero(self.n, degree)?;
        for (b, s) in state.iter().enumerate() {
            out = out.add_scaled(s, self.terminal[b])?;
        }
        for _ in 0..levels {
            let mut next: Vec<NcSeries> = (0..r)
                .map(|_| NcSeries::zero(self.n, degree))
                .collect::<Result<_>>()?;
            for (b, s) in state.iter().enumerate() {
                if s.is_zero() {
                    continue;
                }
                for (i, m) in self.transitions.iter().enumerate() {
                    if (0..r).all(|c| m[(b, c)] == zero()) {
                        continue;
                    }
                    let prod = cauchy_product(s, &phi_t[i])?;
                    for c in 0..r {
                        if m[(b, c)] != zero() {
                            next[c] = next[c].add_scaled(&prod, m[(b, c)])?;
                        }
                    }
                }
            }
            state = next;
            for (b, s) in state.iter().enumerate() {
                if self.terminal[b] != zero() {
                    out = out.add_scaled(s, self.terminal[b])?;
                }
            }
        }
        out.exact = phi.is_exact();
        out.tail_bound = phi.tail_bound() * self.coefficient_l1_estimate();
        if !zero_const && levels < self.degree {
            // neglected constant-coefficient terms, computed on the scalar level
            let t0: DMatrix<C64> = self
                .transitions
                .iter()
                .zip(phi.constant())
                .fold(DMatrix::zeros(r, r), |acc, (m, &c)| acc + m * c);
            let mut row = self.initial.transpose();
            for _ in 0..levels {
                row = &row * &t0;
            }
            let tnorm = self.terminal.norm();
            let mut tail = 0.0;
            for _ in levels..self.degree {
                row = &row * &t0;
                tail += row.norm() * tnorm;
            }
            out.mark_inexact(tail);
        }
        Ok(out)
    }

    /// Crude bound on `sum |a_alpha|` by `||u|| ||v|| sum_k (sum_i ||M_i||)^k`.
    fn coefficient_l1_estimate(&self) -> f64 {
        let s: f64 = self.transitions.iter().map(|m| m.norm()).sum();
        let base = self.initial.norm() * self.terminal.norm();
        (0..=self.degree).map(|k| base * s.powi(k as i32)).sum()
    }
}
