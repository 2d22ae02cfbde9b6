//! The symmetric Fock space: multidegrees, the vectors `w^k`, the
//! symmetrizing projection, and compressions of composition operators to it.
//!
//! The compressed matrix is written in the orthonormal basis
//! `u_k = sqrt(gamma_k) w^k = gamma_k^(-1/2) sum_{alpha in Lambda_k} e_alpha`.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::compop::{build_matrix, BuildOptions};
use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::linalg::{self, SvdMethod};
use crate::sampling::random_ball;
use crate::series::{eval_scalar, NcSeries, SymbolTuple};
use crate::words::GradedEnumeration;
use crate::{point_norm, C64};

pub type Multidegree = Vec<usize>;

/// Invariance defects above this mean `psi` does not leave the symmetric space invariant.
pub const INVARIANCE_TOL: f64 = 1e-8;

/// Multidegrees of total at most `degree`, by total, then colex
/// (last coordinate most significant).
pub fn multidegrees(n: usize, degree: usize) -> Result<Vec<Multidegree>> {
    if n == 0 {
        return Err(Error::EmptyAlphabet);
    }
    let mut out = Vec::new();
    for t in 0..=degree {
        let mut level = Vec::new();
        let mut k = vec![0; n];
        compositions(t, 0, &mut k, &mut level);
        level.sort_by(|a: &Multidegree, b| a.iter().rev().cmp(b.iter().rev()));
        out.extend(level);
    }
    Ok(out)
}

fn compositions(left: usize, i: usize, k: &mut Multidegree, out: &mut Vec<Multidegree>) {
    if i + 1 == k.len() {
        k[i] = left;
        out.push(k.clone());
        return;
    }
    for a in 0..=left {
        k[i] = a;
        compositions(left - a, i + 1, k, out);
    }
    k[i] = 0;
}

/// `|k|! / (k_1! ... k_n!)`, the number of words with multidegree `k`.
pub fn gamma_count(k: &[usize]) -> Result<u64> {
    let overflow = || Error::TooLarge {
        what: "multinomial coefficient",
        size: k.iter().sum::<usize>() as u128,
        limit: 20,
    };
    let mut total: u64 = 0;
    let mut acc: u64 = 1;
    for &ki in k {
        // acc *= binom(total + ki, ki), one factor at a time
        for j in 1..=ki as u64 {
            total += 1;
            let num = (acc as u128) * (total as u128);
            let v = num / j as u128;
            acc = u64::try_from(v).map_err(|_| overflow())?;
        }
    }
    Ok(acc)
}

/// Multidegrees up to `degree` with the symmetrization data of a Fock space.
#[derive(Clone, Debug)]
pub struct SymBasis {
    n: usize,
    degree: usize,
    multidegrees: Vec<Multidegree>,
    gammas: Vec<u64>,
    /// Multidegree index of every word, in graded order.
    class: Vec<usize>,
}

impl SymBasis {
    pub fn new(n: usize, degree: usize) -> Result<Self> {
        let e = GradedEnumeration::new(n, degree)?;
        let multidegrees = multidegrees(n, degree)?;
        let gammas = multidegrees.iter().map(|k| gamma_count(k)).collect::<Result<Vec<_>>>()?;
        let lookup: HashMap<&[usize], usize> = multidegrees
            .iter()
            .enumerate()
            .map(|(i, k)| (k.as_slice(), i))
            .collect();
        let class = e.words().map(|w| lookup[w.multidegree(n).as_slice()]).collect();
        Ok(SymBasis {
            n,
            degree,
            multidegrees,
            gammas,
            class,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.multidegrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.multidegrees.is_empty()
    }

    pub fn multidegrees(&self) -> &[Multidegree] {
        &self.multidegrees
    }

    pub fn gamma(&self, i: usize) -> u64 {
        self.gammas[i]
    }

    pub fn index_of(&self, k: &[usize]) -> Option<usize> {
        self.multidegrees.iter().position(|m| m.as_slice() == k)
    }

    /// `w^k = (1 / gamma_k) sum_{alpha in Lambda_k} e_alpha`.
    pub fn w(&self, i: usize) -> Result<FockVector> {
        let g = self.gammas[i] as f64;
        let coeffs = self
            .class
            .iter()
            .map(|&c| if c == i { C64::new(1.0 / g, 0.0) } else { C64::new(0.0, 0.0) })
            .collect();
        FockVector::from_coeffs(self.n, self.degree, coeffs)
    }

    /// Coordinates `<v, u_k>` in the orthonormal basis.
    pub fn coordinates(&self, v: &FockVector) -> Result<DVector<C64>> {
        self.check(v)?;
        let mut out = DVector::zeros(self.len());
        for (c, x) in self.class.iter().zip(v.coeffs()) {
            out[*c] += x;
        }
        for (i, g) in self.gammas.iter().enumerate() {
            out[i] /= (*g as f64).sqrt();
        }
        Ok(out)
    }

    /// `sum_k c_k u_k` as a Fock vector.
    pub fn synthesize(&self, c: &DVector<C64>) -> Result<FockVector> {
        if c.len() != self.len() {
            return Err(Error::DegreeMismatch(format!(
                "expected {} symmetric coordinates, got {}",
                self.len(),
                c.len()
            )));
        }
        let scaled: Vec<C64> = (0..self.len()).map(|i| c[i] / (self.gammas[i] as f64).sqrt()).collect();
        FockVector::from_coeffs(self.n, self.degree, self.class.iter().map(|&k| scaled[k]).collect())
    }

    /// The isometry from the symmetric coordinates into the Fock space.
    pub fn embedding(&self) -> DMatrix<C64> {
        let mut s = DMatrix::zeros(self.class.len(), self.len());
        for (row, &k) in self.class.iter().enumerate() {
            s[(row, k)] = C64::new(1.0 / (self.gammas[k] as f64).sqrt(), 0.0);
        }
        s
    }

    fn check(&self, v: &FockVector) -> Result<()> {
        if v.n() != self.n || v.degree() != self.degree {
            return Err(Error::DegreeMismatch(format!(
                "vector has (n, D) = ({}, {}), basis has ({}, {})",
                v.n(),
                v.degree(),
                self.n,
                self.degree
            )));
        }
        Ok(())
    }
}

/// Orthogonal projection onto the span of the `w^k`: each coefficient is
/// replaced by the average over its multidegree class.
pub fn symmetrize(v: &FockVector) -> Result<FockVector> {
    let b = SymBasis::new(v.n(), v.degree())?;
    b.synthesize(&b.coordinates(v)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct SymCompression {
    pub n: usize,
    pub degree: usize,
    pub multidegrees: Vec<Multidegree>,
    #[serde(skip)]
    pub matrix: DMatrix<C64>,
    /// `||(I - P) M S||` where `S` embeds the symmetric space.
    pub invariance_defect: f64,
    pub invariant: bool,
    pub exact: bool,
}

/// `P C_psi P` on the symmetric space up to total degree `degree`, in the
/// orthonormal basis `sqrt(gamma_k) w^k`.
pub fn compress_composition(psi: &SymbolTuple, degree: usize, opts: &BuildOptions) -> Result<SymCompression> {
    let m = build_matrix(psi, degree, opts)?;
    let b = SymBasis::new(psi.n(), degree)?;
    let s = b.embedding();
    let ms = m.matrix() * &s;
    let matrix = s.adjoint() * &ms;
    let defect = linalg::op_norm(&(&ms - &s * &matrix));
    Ok(SymCompression {
        n: psi.n(),
        degree,
        multidegrees: b.multidegrees().to_vec(),
        matrix,
        invariance_defect: defect,
        invariant: defect <= INVARIANCE_TOL,
        exact: psi.has_zero_constant(),
    })
}

/// `f(lambda) = <f, z_lambda> = sum_alpha f_alpha lambda_alpha`.
pub fn evaluate(f: &FockVector, lambda: &[C64]) -> Result<C64> {
    eval_scalar(&f.to_series()?, lambda)
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctionalDefect {
    pub worst: f64,
    pub samples: usize,
    pub invariance_defect: f64,
}

/// Largest `|(C f)(lambda) - f(psi(lambda))|` over sampled `lambda`, where
/// `C` is the compression and `f` a symmetric polynomial of degree at most
/// `degree`.
pub fn functional_identity_defect(
    psi: &SymbolTuple,
    f: &NcSeries,
    degree: usize,
    points: &[Vec<C64>],
) -> Result<FunctionalDefect> {
    if f.max_len() > degree {
        return Err(Error::WordTooLong {
            len: f.max_len(),
            degree,
        });
    }
    let fv = FockVector::from_series(f, degree)?;
    let sym = symmetrize(&fv)?;
    let off = sym.sub(&fv)?.norm();
    if off > 1e-12 * fv.norm().max(1.0) {
        return Err(Error::Precondition(format!(
            "f is not symmetric (distance {off:e} to the symmetric space)"
        )));
    }
    let comp = compress_composition(psi, degree, &BuildOptions::default())?;
    let b = SymBasis::new(psi.n(), degree)?;
    let image = b.synthesize(&(&comp.matrix * b.coordinates(&fv)?))?;
    let image = image.to_series()?;
    let worst = points
        .par_iter()
        .map(|l| -> Result<f64> {
            let lhs = eval_scalar(&image, l)?;
            let rhs = eval_scalar(f, &psi.eval(l)?)?;
            Ok((lhs - rhs).norm())
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(FunctionalDefect {
        worst,
        samples: points.len(),
        invariance_defect: comp.invariance_defect,
    })
}

/// `points` random samples of the ball of radius `rmax`.
pub fn sample_points(n: usize, count: usize, rmax: f64, seed: u64) -> Vec<Vec<C64>> {
    random_ball(n, count, rmax, seed)
}

#[derive(Clone, Debug, Serialize)]
pub struct JuryReport {
    /// Sampled `sup ((1 - |l|^2) / (1 - |psi(l)|^2))^(1/2)`.
    pub lower: f64,
    pub estimate: f64,
    pub method: SvdMethod,
    /// `((1 + |psi(0)|) / (1 - |psi(0)|))^(1/2)`.
    pub upper: f64,
    pub within: bool,
}

pub fn jury_bounds(psi: &SymbolTuple, comp: &SymCompression, points: &[Vec<C64>]) -> Result<JuryReport> {
    let mut lower: f64 = 1.0 / (1.0 - psi.constant_norm().powi(2)).sqrt();
    for l in points {
        let im = point_norm(&psi.eval(l)?);
        if im < 1.0 {
            lower = lower.max(((1.0 - point_norm(l).powi(2)) / (1.0 - im * im)).sqrt());
        }
    }
    let s = linalg::sigma_max(&comp.matrix);
    let c = psi.constant_norm();
    let upper = ((1.0 + c) / (1.0 - c)).sqrt();
    Ok(JuryReport {
        lower,
        estimate: s.value,
        method: s.method,
        upper,
        within: s.value <= upper + 1e-9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{inner_product, kernel_vector};
    use crate::words::Word;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn fact(k: usize) -> u64 {
        (1..=k as u64).product()
    }

    #[test]
    fn gamma_matches_enumeration() {
        assert_eq!(gamma_count(&[1, 1]).unwrap(), 2);
        assert_eq!(gamma_count(&[0, 0, 0]).unwrap(), 1);
        assert_eq!(gamma_count(&[2, 1]).unwrap(), 3);
        assert_eq!(gamma_count(&[20]).unwrap(), 1);
        assert_eq!(gamma_count(&[10, 10]).unwrap(), fact(20) / fact(10) / fact(10));
        assert!(gamma_count(&[40, 40]).is_err());
        let b = SymBasis::new(3, 4).unwrap();
        for i in 0..b.len() {
            let count = b.class.iter().filter(|&&k| k == i).count() as u64;
            assert_eq!(count, b.gamma(i));
        }
    }

    #[test]
    fn colex_order() {
        let m = multidegrees(2, 2).unwrap();
        assert_eq!(m, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn w_vectors() {
        let b = SymBasis::new(2, 4).unwrap();
        for i in 0..b.len() {
            let wi = b.w(i).unwrap();
            assert!((wi.norm() - 1.0 / (b.gamma(i) as f64).sqrt()).abs() < 1e-12);
            assert!(symmetrize(&wi).unwrap().sub(&wi).unwrap().norm() < 1e-15);
            for j in 0..i {
                assert!(inner_product(&wi, &b.w(j).unwrap()).unwrap().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn symmetrize_examples() {
        let e12 = FockVector::basis(2, 2, &Word::from_letters(vec![0, 1])).unwrap();
        let e21 = FockVector::basis(2, 2, &Word::from_letters(vec![1, 0])).unwrap();
        let s = symmetrize(&e12).unwrap();
        let half = e12.add_scaled(&e21, c(1.0)).unwrap().scale(c(0.5));
        assert!(s.sub(&half).unwrap().norm() < 1e-15);
        assert!(symmetrize(&e12.sub(&e21).unwrap()).unwrap().norm() < 1e-15);
        let z = kernel_vector(&[C64::new(0.3, 0.1), C64::new(-0.2, 0.4)], 5).unwrap().vector;
        assert!(symmetrize(&z).unwrap().sub(&z).unwrap().norm() < 1e-14);
    }

    #[test]
    fn compressions() {
        let phi = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, c(0.5)), 3).unwrap();
        let comp = compress_composition(&phi, 3, &BuildOptions::default()).unwrap();
        for (i, k) in comp.multidegrees.iter().enumerate() {
            let t: usize = k.iter().sum();
            assert!((comp.matrix[(i, i)] - c(0.5f64.powi(t as i32))).norm() < 1e-15);
        }
        assert!(comp.invariance_defect < 1e-14);

        let swap = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let comp = compress_composition(&SymbolTuple::linear(&swap, 3).unwrap(), 3, &BuildOptions::default()).unwrap();
        for (j, k) in comp.multidegrees.iter().enumerate() {
            let i = comp.multidegrees.iter().position(|m| m[0] == k[1] && m[1] == k[0]).unwrap();
            assert!((comp.matrix[(i, j)] - c(1.0)).norm() < 1e-14);
        }

        let a = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.25), c(0.0), c(1.0 / 3.0)]);
        let psi = SymbolTuple::linear(&a, 4).unwrap();
        let comp = compress_composition(&psi, 4, &BuildOptions::default()).unwrap();
        assert!(linalg::sigma_max(&comp.matrix).value <= 1.0 + 1e-10);
        assert!((comp.matrix[(0, 0)] - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn functional_identity() {
        let pts = sample_points(2, 64, 0.8, 1);
        let half = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, c(0.5)), 2).unwrap();
        let z1z2 = NcSeries::from_terms(
            2,
            2,
            [(Word::from_letters(vec![0, 1]), c(0.5)), (Word::from_letters(vec![1, 0]), c(0.5))],
        )
        .unwrap();
        assert!(functional_identity_defect(&half, &z1z2, 2, &pts).unwrap().worst <= 1e-12);
        let swap = DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(1.0), c(0.0)]);
        let z1sq = NcSeries::from_terms(2, 2, [(Word::from_letters(vec![0, 0]), c(1.0))]).unwrap();
        let d = functional_identity_defect(&SymbolTuple::linear(&swap, 2).unwrap(), &z1sq, 2, &pts).unwrap();
        assert!(d.worst <= 1e-12);
        let e12 = NcSeries::from_terms(2, 2, [(Word::from_letters(vec![0, 1]), c(1.0))]).unwrap();
        assert!(functional_identity_defect(&half, &e12, 2, &pts).is_err());
    }

    #[test]
    fn jury_sandwich() {
        let a = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.25), c(0.0), c(1.0 / 3.0)]);
        let psi = SymbolTuple::linear(&a, 4).unwrap();
        let comp = compress_composition(&psi, 4, &BuildOptions::default()).unwrap();
        let j = jury_bounds(&psi, &comp, &sample_points(2, 64, 0.9, 3)).unwrap();
        assert!(j.lower <= j.estimate + 1e-12);
        assert!(j.within);
    }
}
