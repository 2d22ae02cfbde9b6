//! Truncated full Fock space `span{e_alpha : |alpha| <= D}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::series::NcSeries;
use crate::words::{GradedEnumeration, Word};
use crate::{point_norm, C64};

/// Dense coefficient vector over the graded basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    n: usize,
    degree: usize,
    coeffs: Vec<C64>,
}

impl FockVector {
    pub fn zeros(n: usize, degree: usize) -> Result<Self> {
        let e = GradedEnumeration::new(n, degree)?;
        Ok(FockVector {
            n,
            degree,
            coeffs: vec![C64::new(0.0, 0.0); e.total_dim()],
        })
    }

    /// The vacuum vector `1 = e_{g0}`.
    pub fn vacuum(n: usize, degree: usize) -> Result<Self> {
        let mut v = Self::zeros(n, degree)?;
        v.coeffs[0] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn basis(n: usize, degree: usize, w: &Word) -> Result<Self> {
        let mut v = Self::zeros(n, degree)?;
        let i = v.enumeration().index(w).ok_or(Error::WordTooLong {
            len: w.len(),
            degree,
        })?;
        v.coeffs[i] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn from_coeffs(n: usize, degree: usize, coeffs: Vec<C64>) -> Result<Self> {
        let e = GradedEnumeration::new(n, degree)?;
        if coeffs.len() != e.total_dim() {
            return Err(Error::DegreeMismatch(format!(
                "expected {} coefficients, got {}",
                e.total_dim(),
                coeffs.len()
            )));
        }
        Ok(FockVector { n, degree, coeffs })
    }

    /// The Fock-space image `sum a_alpha e_alpha` of a series, truncated at `degree`.
    pub fn from_series(f: &NcSeries, degree: usize) -> Result<Self> {
        Ok(FockVector {
            n: f.n(),
            degree,
            coeffs: f.to_dense(degree)?,
        })
    }

    pub fn to_series(&self) -> Result<NcSeries> {
        NcSeries::from_indexed(self.n, self.degree, self.coeffs.iter().copied().enumerate())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn enumeration(&self) -> GradedEnumeration {
        GradedEnumeration::new(self.n, self.degree).expect("validated at construction")
    }

    pub fn coeff(&self, w: &Word) -> C64 {
        self.enumeration()
            .index(w)
            .map(|i| self.coeffs[i])
            .unwrap_or_else(|| C64::new(0.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: C64) -> FockVector {
        FockVector {
            coeffs: self.coeffs.iter().map(|v| v * c).collect(),
            ..self.clone()
        }
    }

    /// `self + c * other` on the common degree.
    pub fn add_scaled(&self, other: &FockVector, c: C64) -> Result<FockVector> {
        check_alphabet(self, other)?;
        let degree = self.degree.min(other.degree);
        let mut out = self.truncate(degree);
        for (a, b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a += c * b;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FockVector) -> Result<FockVector> {
        self.add_scaled(other, C64::new(-1.0, 0.0))
    }

    pub fn truncate(&self, degree: usize) -> FockVector {
        if degree >= self.degree {
            return self.clone();
        }
        let dim = GradedEnumeration::new(self.n, degree)
            .expect("smaller degree")
            .total_dim();
        FockVector {
            n: self.n,
            degree,
            coeffs: self.coeffs[..dim].to_vec(),
        }
    }

    /// Zero-pads to a larger truncation degree.
    pub fn extend(&self, degree: usize) -> Result<FockVector> {
        if degree <= self.degree {
            return Ok(self.truncate(degree));
        }
        let mut out = FockVector::zeros(self.n, degree)?;
        out.coeffs[..self.coeffs.len()].copy_from_slice(&self.coeffs);
        Ok(out)
    }

    pub fn max_abs_diff(&self, other: &FockVector) -> f64 {
        let d = self.degree.max(other.degree);
        let a = self.extend(d).expect("valid degree");
        let b = other.extend(d).expect("valid degree");
        a.coeffs
            .iter()
            .zip(&b.coeffs)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }
}

fn check_alphabet(u: &FockVector, v: &FockVector) -> Result<()> {
    if u.n != v.n {
        return Err(Error::AlphabetMismatch {
            left: u.n,
            right: v.n,
        });
    }
    Ok(())
}

/// `<u, v> = sum_alpha u_alpha conj(v_alpha)` over the common degree.
pub fn inner_product(u: &FockVector, v: &FockVector) -> Result<C64> {
    check_alphabet(u, v)?;
    Ok(u.coeffs
        .iter()
        .zip(&v.coeffs)
        .map(|(a, b)| a * b.conj())
        .sum())
}

/// A truncated kernel vector together with its certified norm tail
/// `1/(1 - |mu|^2) - ||z_mu^(D)||^2 = |mu|^(2(D+1)) / (1 - |mu|^2)`.
#[derive(Clone, Debug)]
pub struct KernelVector {
    pub vector: FockVector,
    pub norm_sqr_tail: f64,
}

/// `z_mu = sum_{|alpha| <= D} conj(mu_alpha) e_alpha`.
pub fn kernel_vector(mu: &[C64], degree: usize) -> Result<KernelVector> {
    let n = mu.len();
    let r = point_norm(mu);
    if r >= 1.0 {
        return Err(Error::OutsideBall { norm: r });
    }
    let mut v = FockVector::vacuum(n, degree)?;
    let e = v.enumeration();
    for k in 0..degree {
        for (code, idx) in e.level(k).enumerate() {
            let base = v.coeffs[idx];
            let child = e.offset(k + 1) + code * n;
            for (i, m) in mu.iter().enumerate() {
                v.coeffs[child + i] = base * m.conj();
            }
        }
    }
    let r2 = r * r;
    Ok(KernelVector {
        vector: v,
        norm_sqr_tail: r2.powi(degree as i32 + 1) / (1.0 - r2),
    })
}

/// `P_k`: keeps only the coefficients with `|alpha| >= k`.
pub fn tail_projection(v: &FockVector, k: usize) -> FockVector {
    let mut out = v.clone();
    let e = v.enumeration();
    let cut = e.offset(k.min(v.degree + 1));
    for c in &mut out.coeffs[..cut] {
        *c = C64::new(0.0, 0.0);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `S_i e_alpha = e_{g_i alpha}`.
    Left,
    /// `R_i e_alpha = e_{alpha g_i}`.
    Right,
}

#[derive(Clone, Debug)]
pub struct TruncatedShift {
    pub side: Side,
    /// 0-based generator.
    pub generator: usize,
    pub matrix: DMatrix<C64>,
}

/// Dense truncated creation operators; words of length `degree` map to zero.
pub fn shift_matrices(n: usize, degree: usize, side: Side) -> Result<Vec<TruncatedShift>> {
    if degree == 0 {
        return Err(Error::Precondition("shift matrices need degree >= 1".into()));
    }
    let e = GradedEnumeration::new(n, degree)?;
    let dim = e.total_dim();
    if dim > 1 << 13 {
        return Err(Error::TooLarge {
            what: "dense shift matrix",
            size: dim as u128,
            limit: 1 << 13,
        });
    }
    Ok((0..n)
        .map(|i| {
            let mut m = DMatrix::zeros(dim, dim);
            for k in 0..degree {
                for code in 0..e.power(k) {
                    let src = e.offset(k) + code;
                    let dst = match side {
                        Side::Left => e.offset(k + 1) + i * e.power(k) + code,
                        Side::Right => e.offset(k + 1) + code * n + i,
                    };
                    m[(dst, src)] = C64::new(1.0, 0.0);
                }
            }
            TruncatedShift {
                side,
                generator: i,
                matrix: m,
            }
        })
        .collect())
}

/// `S_i^* v`: `(S_i^* v)_alpha = v_{g_i alpha}`, with the top level set to zero.
pub fn left_shift_adjoint(v: &FockVector, i: usize) -> FockVector {
    let e = v.enumeration();
    let mut out = FockVector {
        coeffs: vec![C64::new(0.0, 0.0); v.coeffs.len()],
        ..v.clone()
    };
    for k in 0..v.degree {
        let src = e.offset(k + 1) + i * e.power(k);
        let dst = e.offset(k);
        out.coeffs[dst..dst + e.power(k)].copy_from_slice(&v.coeffs[src..src + e.power(k)]);
    }
    out
}

/// Adjoint of left multiplication by `f`, restricted to the truncation:
/// `(L_f^* v)_w = sum_u conj(f_u) v_{uw}`. The result is truncated at
/// `out_degree`.
pub fn left_multiplication_adjoint(
    f: &NcSeries,
    v: &FockVector,
    out_degree: usize,
) -> Result<FockVector> {
    if f.n() != v.n {
        return Err(Error::AlphabetMismatch {
            left: f.n(),
            right: v.n,
        });
    }
    let out_degree = out_degree.min(v.degree);
    let e = GradedEnumeration::new(v.n, v.degree.max(f.degree()))?;
    let mut out = FockVector::zeros(v.n, out_degree)?;
    for (i, a) in f.terms() {
        let (lu, cu) = e.split(i);
        if lu > v.degree {
            break;
        }
        let ac = a.conj();
        for lw in 0..=(v.degree - lu).min(out_degree) {
            let src = e.offset(lu + lw) + cu * e.power(lw);
            let dst = e.offset(lw);
            let len = e.power(lw);
            for (o, s) in out.coeffs[dst..dst + len]
                .iter_mut()
                .zip(&v.coeffs[src..src + len])
            {
                *o += ac * s;
            }
        }
    }
    Ok(out)
}

/// Column-major text dump of a matrix: one line per column, entries as
/// `re,im` separated by spaces.
pub fn dense_text_dump(m: &DMatrix<C64>) -> String {
    let mut s = String::new();
    for j in 0..m.ncols() {
        let line: Vec<String> = m
            .column(j)
            .iter()
            .map(|c| format!("{},{}", c.re, c.im))
            .collect();
        s.push_str(&line.join(" "));
        s.push('\n');
    }
    s
}
