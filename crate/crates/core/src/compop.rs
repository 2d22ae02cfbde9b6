//! Matrices of `P_D C_phi P_D` on the truncated Fock basis.
//!
//! Column `alpha` is the coefficient vector of `phi_alpha = phi_{i1} ... phi_{ik}`
//! truncated at length `D`. Because `phi_alpha` only depends on the
//! coefficients of `phi` up to length `D` once truncated, the compression is
//! exact for any symbol whose series is known up to `D`. When `phi(0) = 0`
//! the matrix is lower block-triangular in the grading and coincides with
//! the restriction of `C_phi` to polynomials of degree at most `D`.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::linalg::{self, SvdMethod};
use crate::sampling::halton_ball;
use crate::series::{eval_at_shifts, NcSeries, SymbolTuple};
use crate::words::GradedEnumeration;
use crate::{point_norm, C64};

/// Largest matrix dimension `build_matrix` accepts.
pub const MAX_MATRIX_DIM: usize = 4096;

/// Dimension cap for the shift-evaluation used by the self-map check.
pub const SELF_MAP_CHECK_DIM: usize = 256;

pub const SELF_MAP_TOL: f64 = 1e-9;

/// Radius used for `phi(r S)` in the self-map check.
pub const SELF_MAP_RADIUS: f64 = 1.0 - 1e-12;

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

#[derive(Clone, Debug)]
pub struct CompOpMatrix {
    n: usize,
    degree: usize,
    matrix: DMatrix<C64>,
    grading: Vec<usize>,
    exact: bool,
    symbol: SymbolTuple,
}

impl CompOpMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.matrix
    }

    /// `grading[k]` is the first index of length `k`; the last entry is the dimension.
    pub fn grading(&self) -> &[usize] {
        &self.grading
    }

    /// True iff `phi(0) = 0`.
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn symbol(&self) -> &SymbolTuple {
        &self.symbol
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply(&self, v: &FockVector) -> Result<FockVector> {
        if v.n() != self.n || v.degree() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "vector has (n, D) = ({}, {}), matrix has ({}, {})",
                v.n(),
                v.degree(),
                self.n,
                self.degree
            )));
        }
        let x = nalgebra::DVector::from_column_slice(v.coeffs());
        FockVector::from_coeffs(self.n, self.degree, (&self.matrix * x).as_slice().to_vec())
    }

    /// Largest modulus of an entry that sits above the block diagonal of
    /// the grading (row length smaller than column length).
    pub fn grading_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 1..=self.degree {
            let cols = self.grading[k]..self.grading[k + 1];
            for j in cols {
                for i in 0..self.grading[k] {
                    worst = worst.max(self.matrix[(i, j)].norm());
                }
            }
        }
        worst
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BuildOptions {
    /// Skip the shift-evaluation plausibility check for `phi` being a self-map.
    pub skip_self_map_check: bool,
}

/// Largest eigenvalue of `sum_i phi_i(r S) phi_i(r S)^*` on the largest
/// shift truncation of dimension at most [`SELF_MAP_CHECK_DIM`]. Values
/// above 1 rule out `phi` being a self-map of the ball.
pub fn self_map_estimate(phi: &SymbolTuple) -> Result<f64> {
    let n = phi.n();
    let mut m = 0;
    while m < phi.degree().max(1)
        && GradedEnumeration::new(n, m + 1)?.total_dim() <= SELF_MAP_CHECK_DIM
    {
        m += 1;
    }
    let dim = GradedEnumeration::new(n, m)?.total_dim();
    let mut g = DMatrix::<C64>::zeros(dim, dim);
    for c in phi.components() {
        let a = eval_at_shifts(c, SELF_MAP_RADIUS, m)?;
        g += &a * a.adjoint();
    }
    Ok(linalg::hermitian_max_eigenvalue(&g))
}

fn check_symbol(phi: &SymbolTuple, opts: &BuildOptions) -> Result<()> {
    let c0 = phi.constant_norm();
    if c0 >= 1.0 {
        return Err(Error::OutsideBall { norm: c0 });
    }
    if !opts.skip_self_map_check {
        let est = self_map_estimate(phi)?;
        if est > 1.0 + SELF_MAP_TOL {
            return Err(Error::NotSelfMap { estimate: est });
        }
    }
    Ok(())
}

/// Sparse `(length, code, coefficient)` view of a series.
fn split_terms(f: &NcSeries, e: &GradedEnumeration) -> Vec<(usize, usize, C64)> {
    f.terms()
        .take_while(|(i, _)| *i < e.total_dim())
        .map(|(i, c)| {
            let (l, code) = e.split(i);
            (l, code, c)
        })
        .collect()
}

/// Dense `p * f` truncated at the enumeration degree.
fn dense_times(p: &[C64], f: &[(usize, usize, C64)], e: &GradedEnumeration) -> Vec<C64> {
    let d = e.degree();
    let mut out = vec![zero(); p.len()];
    for lu in 0..=d {
        for (cu, &a) in p[e.level(lu)].iter().enumerate() {
            if a == zero() {
                continue;
            }
            for &(lv, cv, b) in f {
                if lu + lv > d {
                    break;
                }
                out[e.offset(lu + lv) + cu * e.power(lv) + cv] += a * b;
            }
        }
    }
    out
}

/// Calls `visit(k, columns)` with the dense truncated vectors `phi_alpha`
/// for all words of length `k`, for `k = 0..=D`, keeping one level in memory.
fn for_each_level<F>(phi: &SymbolTuple, degree: usize, mut visit: F) -> Result<()>
where
    F: FnMut(usize, &[Vec<C64>]),
{
    let n = phi.n();
    let e = GradedEnumeration::new(n, degree)?;
    let dim = e.total_dim();
    let comps: Vec<Vec<(usize, usize, C64)>> = phi
        .components()
        .iter()
        .map(|c| split_terms(c, &e))
        .collect();
    let mut vacuum = vec![zero(); dim];
    vacuum[0] = C64::new(1.0, 0.0);
    let mut level = vec![vacuum];
    visit(0, &level);
    for k in 1..=degree {
        // child code = parent code * n + letter
        let next: Vec<Vec<C64>> = (0..e.power(k))
            .into_par_iter()
            .map(|code| dense_times(&level[code / n], &comps[code % n], &e))
            .collect();
        level = next;
        visit(k, &level);
    }
    Ok(())
}

/// The compression `P_D C_phi P_D`.
pub fn build_matrix(phi: &SymbolTuple, degree: usize, opts: &BuildOptions) -> Result<CompOpMatrix> {
    check_symbol(phi, opts)?;
    let n = phi.n();
    let e = GradedEnumeration::new(n, degree)?;
    let dim = e.total_dim();
    if dim > MAX_MATRIX_DIM {
        return Err(Error::TooLarge {
            what: "composition matrix dimension",
            size: dim as u128,
            limit: MAX_MATRIX_DIM as u128,
        });
    }
    let mut data = Vec::with_capacity(dim * dim);
    for_each_level(phi, degree, |_, cols| {
        for c in cols {
            data.extend_from_slice(c);
        }
    })?;
    Ok(CompOpMatrix {
        n,
        degree,
        matrix: DMatrix::from_vec(dim, dim, data),
        grading: (0..=degree + 1).map(|k| e.offset(k)).collect(),
        exact: phi.has_zero_constant(),
        symbol: phi.clone(),
    })
}

/// Entries held at once by `adjoint_apply`.
pub const ADJOINT_WORK_LIMIT: usize = 1 << 26;

/// `C_phi^* g` truncated at the degree of `g`: the coefficient at `alpha`
/// is `<g, phi_alpha>`.
///
/// Uses `<g, phi_alpha> = (L_{phi_alpha}^* g)_0` and the recursion
/// `L_{phi_{alpha g_i}}^* = L_{phi_i}^* L_{phi_alpha}^*`, so no column of
/// the matrix is formed. When `phi(0) = 0` the working degree drops by one
/// per letter.
pub fn adjoint_apply(phi: &SymbolTuple, g: &FockVector, opts: &BuildOptions) -> Result<FockVector> {
    check_symbol(phi, opts)?;
    if g.n() != phi.n() {
        return Err(Error::AlphabetMismatch {
            left: phi.n(),
            right: g.n(),
        });
    }
    let degree = g.degree();
    let n = phi.n();
    let e = GradedEnumeration::new(n, degree)?;
    // (length, code, conj(coefficient)) of every term of every component
    let terms: Vec<Vec<(usize, usize, C64)>> = phi
        .components()
        .iter()
        .map(|f| {
            f.truncate(degree)
                .terms()
                .map(|(i, a)| {
                    let (l, c) = e.split(i);
                    (l, c, a.conj())
                })
                .collect()
        })
        .collect();
    let shrink = phi.has_zero_constant();
    let mut out = vec![zero(); e.total_dim()];
    out[0] = g.coeffs()[0];
    // level k stores the n^k vectors L_{phi_alpha}^* g, |alpha| = k, back to back
    let mut level = g.coeffs().to_vec();
    let mut deg = degree;
    for k in 1..=degree {
        let keep = if shrink { degree - k } else { degree };
        let src_len = e.offset(deg + 1);
        let dst_len = e.offset(keep + 1);
        let count = e.power(k);
        let size = count as u128 * dst_len as u128;
        if size > ADJOINT_WORK_LIMIT as u128 {
            return Err(Error::TooLarge {
                what: "adjoint working set",
                size,
                limit: ADJOINT_WORK_LIMIT as u128,
            });
        }
        let mut next = vec![zero(); count * dst_len];
        next.par_chunks_mut(dst_len)
            .with_min_len(64)
            .enumerate()
            .for_each(|(code, dst)| {
                let parent = &level[(code / n) * src_len..(code / n + 1) * src_len];
                for &(lu, cu, ac) in &terms[code % n] {
                    if lu > deg {
                        continue;
                    }
                    for lw in 0..=(deg - lu).min(keep) {
                        let src = e.offset(lu + lw) + cu * e.power(lw);
                        let len = e.power(lw);
                        let d = &mut dst[e.offset(lw)..e.offset(lw) + len];
                        for (o, x) in d.iter_mut().zip(&parent[src..src + len]) {
                            *o += ac * x;
                        }
                    }
                }
            });
        for code in 0..count {
            out[e.offset(k) + code] = next[code * dst_len];
        }
        level = next;
        deg = keep;
    }
    FockVector::from_coeffs(n, degree, out)
}

#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    /// Largest singular value of the compression.
    pub estimate: f64,
    pub method: SvdMethod,
    pub iterations: usize,
    /// Sampled `sup ((1 - |l|^2) / (1 - |phi(l)|^2))^(1/2)`.
    pub sampled_lower_bound: f64,
    pub samples: usize,
    /// `((1 + |phi(0)|) / (1 - |phi(0)|))^(1/2)`.
    pub upper_bound: f64,
    pub lower_bound_vacuum: f64,
    /// False when `phi(0) != 0`: the estimate is then a lower bound of the
    /// operator norm, not its restriction to polynomials.
    pub exact: bool,
    pub symbol_tail_bound: f64,
}

pub const NORM_SAMPLES: usize = 512;
pub const NORM_SAMPLE_RADIUS: f64 = 0.95;

/// The scalar lower bound, sampled over Halton points of the ball of
/// radius 0.95 and refined radially along the best direction.
pub fn sampled_lower_bound(phi: &SymbolTuple, samples: usize) -> Result<f64> {
    let ratio = |p: &[C64]| -> Result<Option<f64>> {
        let q = phi.eval(p)?;
        let nq = point_norm(&q);
        if nq >= 1.0 {
            return Ok(None);
        }
        let np = point_norm(p);
        Ok(Some(((1.0 - np * np) / (1.0 - nq * nq)).sqrt()))
    };
    let zero_pt = vec![zero(); phi.n()];
    let mut best = ratio(&zero_pt)?.unwrap_or(1.0);
    let mut best_pt = zero_pt;
    for p in halton_ball(phi.n(), samples, NORM_SAMPLE_RADIUS) {
        if let Some(v) = ratio(&p)? {
            if v > best {
                best = v;
                best_pt = p;
            }
        }
    }
    let r = point_norm(&best_pt);
    if r > 0.0 {
        for t in 1..=40 {
            let s = NORM_SAMPLE_RADIUS * t as f64 / 40.0;
            let p: Vec<C64> = best_pt.iter().map(|c| c * (s / r)).collect();
            if let Some(v) = ratio(&p)? {
                best = best.max(v);
            }
        }
    }
    Ok(best)
}

pub fn norm_upper_bound(phi: &SymbolTuple) -> f64 {
    let c = phi.constant_norm();
    ((1.0 + c) / (1.0 - c)).sqrt()
}

/// Largest singular value of the compression with the scalar bounds.
/// Fails with [`Error::BoundViolation`] if the estimate exceeds the upper bound.
pub fn operator_norm_estimate(m: &CompOpMatrix, samples: usize) -> Result<NormReport> {
    let s = linalg::sigma_max(&m.matrix);
    let upper = norm_upper_bound(&m.symbol);
    if s.value > upper + 1e-9 {
        return Err(Error::BoundViolation {
            estimate: s.value,
            upper,
        });
    }
    let c = m.symbol.constant_norm();
    Ok(NormReport {
        estimate: s.value,
        method: s.method,
        iterations: s.iterations,
        sampled_lower_bound: sampled_lower_bound(&m.symbol, samples)?,
        samples,
        upper_bound: upper,
        lower_bound_vacuum: 1.0 / (1.0 - c * c).sqrt(),
        exact: m.exact,
        symbol_tail_bound: m.symbol.tail_bound(),
    })
}

/// `||C_phi P_k||` on the truncation, for each `k`.
pub fn essential_norm_proxy(m: &CompOpMatrix, ks: &[usize]) -> Vec<f64> {
    ks.iter()
        .map(|&k| {
            if k > m.degree {
                return 0.0;
            }
            let start = m.grading[k];
            let block = m.matrix.columns(start, m.dim() - start).into_owned();
            linalg::sigma_max(&block).value
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum HsMethod {
    /// `sum_k (sum_i ||phi_i||^2)^k`, valid for linear symbols.
    ClosedForm,
    Enumeration,
}

#[derive(Clone, Debug, Serialize)]
pub struct HsReport {
    /// `sum_{|alpha| <= D} ||phi_alpha||^2`.
    pub sum: f64,
    /// Contribution of each length.
    pub level_sums: Vec<f64>,
    /// `sum_{|alpha| <= D} ||phi_alpha||`; `None` on the closed-form path.
    pub trace_sum: Option<f64>,
    pub method: HsMethod,
    /// True when the top level contributes less than `1e-6` of the sum.
    pub converging: bool,
}

/// Words enumerated by the explicit Hilbert-Schmidt path at most.
pub const HS_ENUMERATION_LIMIT: usize = 1 << 16;

pub fn hilbert_schmidt_sum(phi: &SymbolTuple, degree: usize, opts: &BuildOptions) -> Result<HsReport> {
    check_symbol(phi, opts)?;
    let level_sums: Vec<f64>;
    let mut trace_sum = None;
    let method;
    if phi.is_linear() {
        let s: f64 = phi.components().iter().map(|c| c.l2_norm().powi(2)).sum();
        level_sums = (0..=degree).map(|k| s.powi(k as i32)).collect();
        method = HsMethod::ClosedForm;
    } else {
        let e = GradedEnumeration::new(phi.n(), degree)?;
        if e.total_dim() > HS_ENUMERATION_LIMIT {
            return Err(Error::TooLarge {
                what: "Hilbert-Schmidt enumeration",
                size: e.total_dim() as u128,
                limit: HS_ENUMERATION_LIMIT as u128,
            });
        }
        let mut sums = Vec::new();
        let mut tr = 0.0;
        for_each_level(phi, degree, |_, cols| {
            let mut s = 0.0;
            for c in cols {
                let q: f64 = c.iter().map(|z| z.norm_sqr()).sum();
                s += q;
                tr += q.sqrt();
            }
            sums.push(s);
        })?;
        level_sums = sums;
        trace_sum = Some(tr);
        method = HsMethod::Enumeration;
    }
    let sum: f64 = level_sums.iter().sum();
    let top = *level_sums.last().unwrap_or(&0.0);
    Ok(HsReport {
        sum,
        converging: top < 1e-6 * sum,
        level_sums,
        trace_sum,
        method,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct NormalityReport {
    pub normal: bool,
    /// Zero constant and nothing above length 1.
    pub linear: bool,
    /// `||A^* A - A A^*||` of the linear part.
    pub commutator: f64,
    pub sigma_max: f64,
    /// `||M M^* - M^* M||` of the truncated matrix.
    pub matrix_commutator: f64,
    pub check_degree: usize,
    /// The matrix test agrees with the symbol test.
    pub consistent: bool,
}

pub const NORMALITY_CHECK_DEGREE: usize = 3;

pub fn normality_check(phi: &SymbolTuple) -> Result<NormalityReport> {
    let a = phi.linear_matrix();
    let commutator = linalg::op_norm(&(a.adjoint() * a - a * a.adjoint()));
    let sigma = linalg::op_norm(a);
    let linear = phi.is_linear();
    let normal = linear && commutator <= 1e-10 && sigma <= 1.0 + 1e-12;
    let mut d = NORMALITY_CHECK_DEGREE;
    while d > 1 && GradedEnumeration::new(phi.n(), d)?.total_dim() > 512 {
        d -= 1;
    }
    let m = build_matrix(
        phi,
        d,
        &BuildOptions {
            skip_self_map_check: true,
        },
    )?;
    let mm = m.matrix();
    let matrix_commutator = linalg::op_norm(&(mm * mm.adjoint() - mm.adjoint() * mm));
    Ok(NormalityReport {
        normal,
        linear,
        commutator,
        sigma_max: sigma,
        matrix_commutator,
        check_degree: d,
        consistent: !normal || matrix_commutator <= 1e-8,
    })
}
