//! Dense numerical linear algebra helpers on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::C64;

/// Matrices whose smaller side is at most this size use a dense SVD;
/// larger ones use power iteration on `M^* M`.
pub const DENSE_SVD_LIMIT: usize = 768;

pub const POWER_ITERATION_TOL: f64 = 1e-10;
pub const POWER_ITERATION_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SvdMethod {
    Dense,
    PowerIteration,
}

#[derive(Clone, Copy, Debug)]
pub struct SigmaMax {
    pub value: f64,
    pub method: SvdMethod,
    pub iterations: usize,
}

/// Largest singular value.
pub fn sigma_max(m: &DMatrix<C64>) -> SigmaMax {
    if m.nrows() == 0 || m.ncols() == 0 {
        return SigmaMax {
            value: 0.0,
            method: SvdMethod::Dense,
            iterations: 0,
        };
    }
    if m.nrows().min(m.ncols()) <= DENSE_SVD_LIMIT {
        let s = m.clone().singular_values();
        SigmaMax {
            value: s.iter().copied().fold(0.0, f64::max),
            method: SvdMethod::Dense,
            iterations: 0,
        }
    } else {
        let (value, iterations) =
            power_sigma_max(m, POWER_ITERATION_TOL, POWER_ITERATION_CAP, 0x5eed);
        SigmaMax {
            value,
            method: SvdMethod::PowerIteration,
            iterations,
        }
    }
}

/// Power iteration on `M^* M` from a seeded random start. Returns the
/// estimate and the number of iterations used.
pub fn power_sigma_max(m: &DMatrix<C64>, tol: f64, cap: usize, seed: u64) -> (f64, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = DVector::from_fn(m.ncols(), |_, _| {
        C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
    });
    v /= C64::new(v.norm(), 0.0);
    let mut prev = 0.0;
    for it in 1..=cap {
        let w = m * &v;
        let u = m.ad_mul(&w);
        let lambda = u.norm();
        if lambda == 0.0 {
            return (0.0, it);
        }
        v = u / C64::new(lambda, 0.0);
        if (lambda - prev).abs() <= tol * lambda {
            return (lambda.sqrt(), it);
        }
        prev = lambda;
    }
    (prev.sqrt(), cap)
}

/// Eigenvalues through a complex Schur decomposition.
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::Precondition("eigenvalues need a square matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = m
        .clone()
        .try_schur(1e-15, 100_000)
        .ok_or_else(|| Error::Inconclusive("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

/// Unitary `Q` and upper-triangular `T` with `m = Q T Q^*`.
pub fn schur(m: &DMatrix<C64>) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    let schur = m
        .clone()
        .try_schur(1e-15, 100_000)
        .ok_or_else(|| Error::Inconclusive("Schur iteration did not converge".into()))?;
    Ok(schur.unpack())
}

/// Largest eigenvalue of a Hermitian matrix.
pub fn hermitian_max_eigenvalue(m: &DMatrix<C64>) -> f64 {
    if m.nrows() == 0 {
        return 0.0;
    }
    if m.nrows() <= DENSE_SVD_LIMIT {
        m.clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        // PSD inputs only: the largest eigenvalue is the largest singular value
        power_sigma_max(m, POWER_ITERATION_TOL, POWER_ITERATION_CAP, 0x5eed)
            .0
            .powi(2)
            .sqrt()
    }
}

/// Operator 2-norm of a small matrix.
pub fn op_norm(m: &DMatrix<C64>) -> f64 {
    sigma_max(m).value
}

/// Pairs each element of `a` with a distinct nearest unused element of
/// `b` (greedy) and returns the worst distance; `None` if sizes differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut used = vec![false; b.len()];
    let mut order: Vec<usize> = (0..a.len()).collect();
    order.sort_by(|&i, &j| {
        a[i].re
            .partial_cmp(&a[j].re)
            .unwrap()
            .then(a[i].im.partial_cmp(&a[j].im).unwrap())
    });
    let mut worst: f64 = 0.0;
    for i in order {
        let (best, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, x)| (j, (x - a[i]).norm()))
            .min_by(|x, y| x.1.partial_cmp(&y.1).unwrap())?;
        used[best] = true;
        worst = worst.max(d);
    }
    Some(worst)
}

/// Sorts points by real then imaginary part and merges those within `tol`.
pub fn dedup_points(mut pts: Vec<C64>, tol: f64) -> Vec<C64> {
    let mut out: Vec<C64> = Vec::new();
    pts.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
    for p in pts {
        if !out.iter().any(|q| (q - p).norm() <= tol) {
            out.push(p);
        }
    }
    out
}

/// Max distance from each point of `a` to the nearest point of `b`, both ways.
pub fn set_distance(a: &[C64], b: &[C64]) -> f64 {
    let one_way = |x: &[C64], y: &[C64]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn dense_and_power_iteration_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = DMatrix::from_fn(40, 30, |_, _| c(rng.gen::<f64>(), rng.gen::<f64>() - 0.5));
        let dense = sigma_max(&m).value;
        let (power, _) = power_sigma_max(&m, 1e-13, 100_000, 1);
        assert!((dense - power).abs() < 1e-8 * dense);
    }

    #[test]
    fn triangular_eigenvalues() {
        let m = DMatrix::from_row_slice(
            3,
            3,
            &[
                c(0.5, 0.0),
                c(1.0, 0.0),
                c(2.0, 1.0),
                c(0.0, 0.0),
                c(0.0, 1.0),
                c(3.0, 0.0),
                c(0.0, 0.0),
                c(0.0, 0.0),
                c(-1.0, 0.0),
            ],
        );
        let ev = eigenvalues(&m).unwrap();
        let expected = [c(0.5, 0.0), c(0.0, 1.0), c(-1.0, 0.0)];
        assert!(multiset_distance(&ev, &expected).unwrap() < 1e-12);
    }

    #[test]
    fn multiset_and_dedup() {
        let a = [c(1.0, 0.0), c(0.5, 0.0), c(0.5, 0.0)];
        let b = [c(0.5, 0.0), c(1.0, 0.0), c(0.5, 1e-12)];
        assert!(multiset_distance(&a, &b).unwrap() < 1e-11);
        assert!(multiset_distance(&a, &b[..2]).is_none());
        let d = dedup_points(a.to_vec(), 1e-9);
        assert_eq!(d.len(), 2);
    }
}
