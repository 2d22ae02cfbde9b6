//! Dynamics of the scalar representation of a self-map of the ball `B_n`:
//! fixed points, Denjoy-Wolff points, the dilatation coefficient at the
//! Denjoy-Wolff point, classification and invariance of the ellipsoids
//! `E(L, zeta) = {lambda : |1 - <lambda, zeta>|^2 <= L (1 - |lambda|^2)}`.
//!
//! Everything here runs on points, never on truncated series.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::{AutomorphismSpec, MoebiusParams};
use crate::series::{NcSeries, SymbolTuple};
use crate::words::Word;
use crate::{point_inner, point_norm, C64};

/// Orbits with `|x| > 1 - BOUNDARY_ESCAPE` count as boundary-attracted;
/// beyond this point `f64` evaluation of the map is unreliable.
pub const BOUNDARY_ESCAPE: f64 = 1e-9;

/// `alpha >= PARABOLIC_THRESHOLD` classifies as parabolic.
pub const PARABOLIC_THRESHOLD: f64 = 0.99;

pub const DILATATION_RADII: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// A holomorphic map of the ball evaluated pointwise.
pub trait ScalarSelfMap: Sync {
    fn dim(&self) -> usize;
    fn apply(&self, x: &[C64]) -> Result<Vec<C64>>;
}

impl ScalarSelfMap for SymbolTuple {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.eval(x)
    }
}

impl ScalarSelfMap for MoebiusParams {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.eval(x)
    }
}

impl ScalarSelfMap for AutomorphismSpec {
    fn dim(&self) -> usize {
        self.n()
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        self.eval(x)
    }
}

/// `z -> (a z + b) / (c z + d)` on the unit disc.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFractional {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl LinearFractional {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        if d.norm() <= c.norm() {
            return Err(Error::Precondition(
                "(az + b) / (cz + d) needs |c| < |d| to be holomorphic on the closed disc".into(),
            ));
        }
        Ok(LinearFractional { a, b, c, d })
    }

    /// Taylor coefficients up to `degree`: `(a z + b) / d * sum (-c z / d)^k`.
    pub fn to_symbol(&self, degree: usize) -> Result<SymbolTuple> {
        let q = -self.c / self.d;
        let mut geo = Vec::with_capacity(degree + 1);
        let mut p = C64::new(1.0, 0.0);
        for _ in 0..=degree {
            geo.push(p);
            p *= q;
        }
        let terms = (0..=degree).map(|k| {
            let mut v = self.b / self.d * geo[k];
            if k > 0 {
                v += self.a / self.d * geo[k - 1];
            }
            (Word::from_letters(vec![0; k]), v)
        });
        SymbolTuple::new(vec![NcSeries::from_terms(1, degree, terms)?])
    }
}

impl ScalarSelfMap for LinearFractional {
    fn dim(&self) -> usize {
        1
    }

    fn apply(&self, x: &[C64]) -> Result<Vec<C64>> {
        if x.len() != 1 {
            return Err(Error::AlphabetMismatch {
                left: 1,
                right: x.len(),
            });
        }
        let den = self.c * x[0] + self.d;
        if den.norm() == 0.0 {
            return Err(Error::NonFinite);
        }
        Ok(vec![(self.a * x[0] + self.b) / den])
    }
}

fn dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt()
}

/// `x, phi(x), phi(phi(x)), ...` with `steps` applications, stopping early
/// once the norm passes `1 - BOUNDARY_ESCAPE`.
pub fn orbit<M: ScalarSelfMap + ?Sized>(map: &M, start: &[C64], steps: usize) -> Result<Vec<Vec<C64>>> {
    let mut out = vec![start.to_vec()];
    for _ in 0..steps {
        let last = out.last().expect("nonempty");
        if point_norm(last) > 1.0 - BOUNDARY_ESCAPE {
            break;
        }
        let next = map.apply(last)?;
        out.push(next);
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum FixedPointOutcome {
    Interior {
        point: Vec<C64>,
        residual: f64,
        iterations: usize,
    },
    BoundaryEscape {
        last: Vec<C64>,
        norm: f64,
        iterations: usize,
    },
    Inconclusive {
        last: Vec<C64>,
        residual: f64,
        iterations: usize,
    },
}

/// Complex Jacobian `J[(i, j)] = d phi_i / d x_j` by central differences.
fn jacobian<M: ScalarSelfMap + ?Sized>(map: &M, x: &[C64], h: f64) -> Result<DMatrix<C64>> {
    let n = x.len();
    let mut j = DMatrix::zeros(n, n);
    for col in 0..n {
        let mut p = x.to_vec();
        let mut m = x.to_vec();
        p[col] += h;
        m[col] -= h;
        let fp = map.apply(&p)?;
        let fm = map.apply(&m)?;
        for row in 0..n {
            j[(row, col)] = (fp[row] - fm[row]) / (2.0 * h);
        }
    }
    Ok(j)
}

/// Newton's method on `phi(x) - x`; `None` if it leaves the ball or stalls.
fn newton<M: ScalarSelfMap + ?Sized>(map: &M, start: &[C64], tol: f64) -> Result<Option<(Vec<C64>, f64)>> {
    let n = start.len();
    let mut x = start.to_vec();
    for _ in 0..100 {
        if point_norm(&x) >= 1.0 - BOUNDARY_ESCAPE {
            return Ok(None);
        }
        let fx = map.apply(&x)?;
        let g: Vec<C64> = fx.iter().zip(&x).map(|(a, b)| a - b).collect();
        let res = point_norm(&g);
        let h = 1e-7 * (1.0 - point_norm(&x)).clamp(1e-3, 1.0);
        let jm = jacobian(map, &x, h)? - DMatrix::<C64>::identity(n, n);
        let Some(step) = jm.lu().solve(&DVector::from_vec(g)) else {
            return Ok(None);
        };
        for i in 0..n {
            x[i] -= step[i];
        }
        // stop on the step size, not the residual: near a multiple fixed
        // point on the sphere the residual is tiny long before x settles
        if step.norm() <= 1e-13 && res <= tol.max(1e-15) * 1e3 {
            let fx = map.apply(&x)?;
            let res = dist(&fx, &x);
            if res <= tol && point_norm(&x) < 1.0 - BOUNDARY_ESCAPE {
                return Ok(Some((x, res)));
            }
            return Ok(None);
        }
    }
    Ok(None)
}

/// Damped Picard iteration from the origin, with a Newton refinement when
/// the iteration stalls.
pub fn find_interior_fixed_point<M: ScalarSelfMap + ?Sized>(
    map: &M,
    max_iter: usize,
    tol: f64,
) -> Result<FixedPointOutcome> {
    let n = map.dim();
    let mut x = vec![C64::new(0.0, 0.0); n];
    let mut t: f64 = 1.0;
    let mut last_res = f64::INFINITY;
    let mut norms = Vec::with_capacity(max_iter);
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        let fx = map.apply(&x)?;
        let res = dist(&fx, &x);
        if res <= tol {
            return Ok(FixedPointOutcome::Interior {
                point: x,
                residual: res,
                iterations,
            });
        }
        if point_norm(&fx) > 1.0 - BOUNDARY_ESCAPE {
            return Ok(FixedPointOutcome::BoundaryEscape {
                norm: point_norm(&fx),
                last: fx,
                iterations,
            });
        }
        if res > last_res {
            t = (t * 0.5).max(1.0 / 64.0);
        }
        last_res = res;
        for i in 0..n {
            x[i] = x[i] * (1.0 - t) + fx[i] * t;
        }
        norms.push(point_norm(&x));
    }
    // slow convergence: either a fixed point with a multiplier near 1, or
    // an orbit creeping towards the boundary
    for start in [x.clone(), vec![C64::new(0.0, 0.0); n]] {
        if let Some((p, residual)) = newton(map, &start, tol)? {
            return Ok(FixedPointOutcome::Interior {
                point: p,
                residual,
                iterations,
            });
        }
    }
    let half = norms.len() / 2;
    let creeping = norms.len() > 4 && norms[half..].windows(2).all(|w| w[1] >= w[0] - 1e-15);
    let fx = map.apply(&x)?;
    let residual = dist(&fx, &x);
    if creeping {
        Ok(FixedPointOutcome::BoundaryEscape {
            norm: point_norm(&x),
            last: x,
            iterations,
        })
    } else {
        Ok(FixedPointOutcome::Inconclusive {
            last: x,
            residual,
            iterations,
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DenjoyWolffReport {
    pub point: Vec<C64>,
    /// Final orbit norm from the origin.
    pub orbit_norm: f64,
    pub iterations: usize,
    /// Largest distance between the origin estimate and the seeded restarts.
    pub seed_spread: f64,
}

pub const DW_RESTARTS: usize = 3;
pub const DW_AGREEMENT: f64 = 1e-6;

fn boundary_limit<M: ScalarSelfMap + ?Sized>(
    map: &M,
    start: &[C64],
    max_iter: usize,
    tol: f64,
) -> Result<(Vec<C64>, f64, usize)> {
    let o = orbit(map, start, max_iter)?;
    let last = o.last().expect("nonempty").clone();
    let r = point_norm(&last);
    if r <= 1.0 - tol {
        return Err(Error::Inconclusive(format!(
            "orbit norm {r} did not reach 1 - {tol} in {max_iter} steps"
        )));
    }
    Ok((last.iter().map(|c| c / r).collect(), r, o.len() - 1))
}

/// Normalized limit of the origin orbit, confirmed from seeded random starts.
pub fn denjoy_wolff_point<M: ScalarSelfMap + ?Sized>(
    map: &M,
    max_iter: usize,
    tol: f64,
    seed: u64,
) -> Result<DenjoyWolffReport> {
    if let FixedPointOutcome::Interior { point, .. } = find_interior_fixed_point(map, 2000, 1e-12)? {
        return Err(Error::Precondition(format!(
            "the map fixes the interior point {point:?}"
        )));
    }
    let n = map.dim();
    let (zeta, r, iterations) = boundary_limit(map, &vec![C64::new(0.0, 0.0); n], max_iter, tol)?;
    let mut spread: f64 = 0.0;
    for start in crate::sampling::random_ball(n, DW_RESTARTS, 0.5, seed) {
        let (z, _, _) = boundary_limit(map, &start, max_iter, tol)?;
        spread = spread.max(dist(&z, &zeta));
    }
    if spread > DW_AGREEMENT {
        return Err(Error::Inconclusive(format!(
            "restarted orbits disagree on the boundary limit by {spread:e}"
        )));
    }
    Ok(DenjoyWolffReport {
        point: zeta,
        orbit_norm: r,
        iterations,
        seed_spread: spread,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DilatationReport {
    pub alpha: f64,
    /// `(r, (1 - |phi(r zeta)|^2) / (1 - r^2))` samples.
    pub samples: Vec<(f64, f64)>,
    pub sample_min: f64,
    /// `(10 q(0.9999) - q(0.999)) / 9`, before clamping.
    pub extrapolated: f64,
}

/// Dilatation coefficient at the boundary point `zeta`, by a first-order
/// Richardson extrapolation of the radial ratio to `r = 1`.
pub fn dilatation_coefficient<M: ScalarSelfMap + ?Sized>(map: &M, zeta: &[C64]) -> Result<DilatationReport> {
    let nz = point_norm(zeta);
    if (nz - 1.0).abs() > 1e-9 {
        return Err(Error::Precondition(format!("|zeta| = {nz} is not 1")));
    }
    let mut samples = Vec::new();
    for &r in &DILATATION_RADII {
        let p: Vec<C64> = zeta.iter().map(|c| c * r).collect();
        let q = point_norm(&map.apply(&p)?);
        samples.push((r, (1.0 - q * q) / (1.0 - r * r)));
    }
    let fine = samples[3].1;
    let coarse = samples[2].1;
    if (fine - coarse).abs() > 0.1 * fine.abs() {
        return Err(Error::Inconclusive(format!(
            "radial ratio changes from {coarse} to {fine} between the two finest radii"
        )));
    }
    let extrapolated = (10.0 * fine - coarse) / 9.0;
    let sample_min = samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    Ok(DilatationReport {
        alpha: extrapolated.clamp(f64::MIN_POSITIVE, 1.0),
        samples,
        sample_min,
        extrapolated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassificationReport {
    pub kind: Kind,
    pub fixed_point: Option<Vec<C64>>,
    pub dw_point: Option<Vec<C64>>,
    pub alpha: Option<f64>,
    pub diagnostics: serde_json::Value,
}

#[derive(Clone, Copy, Debug)]
pub struct ClassifyOptions {
    pub max_iter: usize,
    pub tol: f64,
    pub orbit_steps: usize,
    pub boundary_tol: f64,
    pub seed: u64,
    pub parabolic_threshold: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            max_iter: 2000,
            tol: 1e-12,
            orbit_steps: 100_000,
            boundary_tol: 1e-4,
            seed: 0,
            parabolic_threshold: PARABOLIC_THRESHOLD,
        }
    }
}

pub fn classify_symbol<M: ScalarSelfMap + ?Sized>(map: &M, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let zero = vec![C64::new(0.0, 0.0); map.dim()];
    let c0 = point_norm(&map.apply(&zero)?);
    if c0 >= 1.0 {
        return Err(Error::OutsideBall { norm: c0 });
    }
    let fp = find_interior_fixed_point(map, opts.max_iter, opts.tol)?;
    if let FixedPointOutcome::Interior { point, residual, iterations } = &fp {
        return Ok(ClassificationReport {
            kind: Kind::Elliptic,
            fixed_point: Some(point.clone()),
            dw_point: None,
            alpha: None,
            diagnostics: serde_json::json!({
                "residual": residual,
                "iterations": iterations,
                "tol": opts.tol,
            }),
        });
    }
    let inconclusive = |why: String| ClassificationReport {
        kind: Kind::Inconclusive,
        fixed_point: None,
        dw_point: None,
        alpha: None,
        diagnostics: serde_json::json!({ "reason": why }),
    };
    let dw = match denjoy_wolff_point(map, opts.orbit_steps, opts.boundary_tol, opts.seed) {
        Ok(dw) => dw,
        Err(Error::Inconclusive(why)) => return Ok(inconclusive(why)),
        Err(e) => return Err(e),
    };
    let dil = match dilatation_coefficient(map, &dw.point) {
        Ok(d) => d,
        Err(Error::Inconclusive(why)) => return Ok(inconclusive(why)),
        Err(e) => return Err(e),
    };
    let kind = if dil.alpha >= opts.parabolic_threshold {
        Kind::Parabolic
    } else {
        Kind::Hyperbolic
    };
    Ok(ClassificationReport {
        kind,
        fixed_point: None,
        dw_point: Some(dw.point.clone()),
        alpha: Some(dil.alpha),
        diagnostics: serde_json::json!({
            "orbit_norm": dw.orbit_norm,
            "orbit_iterations": dw.iterations,
            "seed_spread": dw.seed_spread,
            "alpha_samples": dil.samples,
            "alpha_sample_min": dil.sample_min,
            "parabolic_threshold": opts.parabolic_threshold,
        }),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EllipsoidSpec {
    zeta: Vec<C64>,
    l: f64,
}

impl EllipsoidSpec {
    pub fn new(zeta: Vec<C64>, l: f64) -> Result<Self> {
        let nz = point_norm(&zeta);
        if (nz - 1.0).abs() > 1e-12 {
            return Err(Error::Precondition(format!("|zeta| = {nz} is not 1")));
        }
        if !(l > 0.0 && l.is_finite()) {
            return Err(Error::Precondition(format!("L = {l} must be positive")));
        }
        Ok(EllipsoidSpec { zeta, l })
    }

    /// `L = c / (1 - c)` for `c` in `(0, 1)`.
    pub fn from_c(zeta: Vec<C64>, c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Precondition(format!("c = {c} must lie in (0, 1)")));
        }
        Self::new(zeta, c / (1.0 - c))
    }

    pub fn zeta(&self) -> &[C64] {
        &self.zeta
    }

    pub fn l(&self) -> f64 {
        self.l
    }

    /// `L (1 - |x|^2) - |1 - <x, zeta>|^2`; nonnegative inside.
    pub fn margin(&self, x: &[C64]) -> f64 {
        let r = point_norm(x);
        self.l * (1.0 - r * r) - (C64::new(1.0, 0.0) - point_inner(x, &self.zeta)).norm_sqr()
    }

    /// Orthonormal basis of `C^n` whose first vector is `zeta`.
    fn frame(&self) -> Vec<Vec<C64>> {
        let n = self.zeta.len();
        let mut basis = vec![self.zeta.clone()];
        for k in 0..n {
            if basis.len() == n {
                break;
            }
            let mut v = vec![C64::new(0.0, 0.0); n];
            v[k] = C64::new(1.0, 0.0);
            for b in &basis {
                let p = point_inner(&v, b);
                for i in 0..n {
                    v[i] -= p * b[i];
                }
            }
            let r = point_norm(&v);
            if r > 1e-8 {
                basis.push(v.iter().map(|c| c / r).collect());
            }
        }
        basis
    }

    /// Seeded points of `E(L, zeta)`: in the frame of `zeta` the ellipsoid is
    /// `((1+L)/L)^2 |a - 1/(1+L)|^2 + (1+L)/L |w|^2 <= 1`.
    pub fn sample(&self, count: usize, seed: u64) -> Vec<Vec<C64>> {
        let n = self.zeta.len();
        let l = self.l;
        let frame = self.frame();
        crate::sampling::random_ball(n, count, 1.0 - 1e-6, seed)
            .into_iter()
            .map(|u| {
                let a = C64::new(1.0 / (1.0 + l), 0.0) + u[0] * (l / (1.0 + l));
                let s = (l / (1.0 + l)).sqrt();
                let mut x: Vec<C64> = frame[0].iter().map(|z| z * a).collect();
                for (k, b) in frame.iter().enumerate().skip(1) {
                    for i in 0..n {
                        x[i] += b[i] * u[k] * s;
                    }
                }
                x
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EllipsoidReport {
    pub samples: usize,
    pub iterates: usize,
    pub violations: usize,
    /// Smallest margin seen over all samples and iterates.
    pub worst_margin: f64,
    pub slack: f64,
}

/// Applies `phi` up to `iterates` times to each sample of `E(L, zeta)` and
/// counts images with margin below `-slack`. Refused when `phi` has an
/// interior fixed point.
pub fn ellipsoid_invariance_check<M: ScalarSelfMap + ?Sized>(
    map: &M,
    e: &EllipsoidSpec,
    samples: usize,
    iterates: usize,
    seed: u64,
    slack: f64,
) -> Result<EllipsoidReport> {
    if e.zeta.len() != map.dim() {
        return Err(Error::AlphabetMismatch {
            left: map.dim(),
            right: e.zeta.len(),
        });
    }
    if let FixedPointOutcome::Interior { point, .. } = find_interior_fixed_point(map, 2000, 1e-12)? {
        return Err(Error::Precondition(format!(
            "the map fixes the interior point {point:?}; no Denjoy-Wolff point"
        )));
    }
    let pts = e.sample(samples, seed);
    let per_point: Vec<(usize, f64)> = pts
        .par_iter()
        .map(|p| -> Result<(usize, f64)> {
            let mut x = p.clone();
            let mut bad = 0;
            let mut worst = f64::INFINITY;
            for _ in 0..iterates {
                x = map.apply(&x)?;
                let m = e.margin(&x);
                worst = worst.min(m);
                if m < -slack {
                    bad += 1;
                }
            }
            Ok((bad, worst))
        })
        .collect::<Result<_>>()?;
    Ok(EllipsoidReport {
        samples,
        iterates,
        violations: per_point.iter().map(|p| p.0).sum(),
        worst_margin: per_point.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
        slack,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn hyperbolic() -> LinearFractional {
        LinearFractional::new(c(1.0), c(0.5), c(0.5), c(1.0)).unwrap()
    }

    fn parabolic() -> LinearFractional {
        LinearFractional::new(c(1.0), c(1.0), c(-1.0), c(3.0)).unwrap()
    }

    fn affine(d: usize) -> SymbolTuple {
        let x1 = NcSeries::from_terms(2, d, [(Word::empty(), c(0.25)), (Word::letter(0), c(0.5))]).unwrap();
        let x2 = NcSeries::from_terms(2, d, [(Word::letter(1), c(0.5))]).unwrap();
        SymbolTuple::new(vec![x1, x2]).unwrap()
    }

    #[test]
    fn hyperbolic_orbit_matches_closed_form() {
        // 1 - x_k = 2 / (3^k + 1)
        let o = orbit(&hyperbolic(), &[c(0.0)], 12).unwrap();
        for (k, x) in o.iter().enumerate() {
            let expected = 1.0 - 2.0 / (3f64.powi(k as i32) + 1.0);
            assert!((x[0] - c(expected)).norm() < 1e-14);
        }
        let s = hyperbolic().to_symbol(64).unwrap();
        let o2 = orbit(&s, &[c(0.0)], 12).unwrap();
        assert!(dist(&o[12], &o2[12]) < 1e-12);
    }

    #[test]
    fn fixed_points() {
        match find_interior_fixed_point(&affine(1), 2000, 1e-12).unwrap() {
            FixedPointOutcome::Interior { point, residual, .. } => {
                assert!(dist(&point, &[c(0.5), c(0.0)]) < 1e-11);
                assert!(residual <= 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let half = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, c(0.5)), 1).unwrap();
        assert!(matches!(
            find_interior_fixed_point(&half, 100, 1e-12).unwrap(),
            FixedPointOutcome::Interior { .. }
        ));
        assert!(matches!(
            find_interior_fixed_point(&hyperbolic(), 2000, 1e-12).unwrap(),
            FixedPointOutcome::BoundaryEscape { .. }
        ));
        assert!(matches!(
            find_interior_fixed_point(&parabolic(), 2000, 1e-12).unwrap(),
            FixedPointOutcome::BoundaryEscape { .. }
        ));
    }

    #[test]
    fn denjoy_wolff_points() {
        for m in [hyperbolic(), parabolic()] {
            let dw = denjoy_wolff_point(&m, 100_000, 1e-4, 1).unwrap();
            assert!((dw.point[0] - c(1.0)).norm() < 1e-6);
        }
        // lambda_1 -> lambda_1 / 2 + 1/2 pulls towards (1, 0)
        let x1 = NcSeries::from_terms(2, 1, [(Word::empty(), c(0.5)), (Word::letter(0), c(0.5))]).unwrap();
        let phi = SymbolTuple::new(vec![x1, NcSeries::zero(2, 1).unwrap()]).unwrap();
        let dw = denjoy_wolff_point(&phi, 100_000, 1e-4, 2).unwrap();
        assert!(dist(&dw.point, &[c(1.0), c(0.0)]) < 1e-6);
        assert!(denjoy_wolff_point(&affine(1), 1000, 1e-4, 0).is_err());
    }

    #[test]
    fn dilatation_matches_angular_derivative() {
        // phi'(1) = (1 - a) / (1 + a) with a = 1/2 for the hyperbolic map
        let d = dilatation_coefficient(&hyperbolic(), &[c(1.0)]).unwrap();
        assert!((d.alpha - 1.0 / 3.0).abs() < 1e-3);
        let d = dilatation_coefficient(&parabolic(), &[c(1.0)]).unwrap();
        assert!((d.alpha - 1.0).abs() < 1e-3);
    }

    #[test]
    fn classification() {
        let opts = ClassifyOptions::default();
        let half = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, c(0.5)), 1).unwrap();
        let r = classify_symbol(&half, &opts).unwrap();
        assert_eq!(r.kind, Kind::Elliptic);
        assert!(point_norm(r.fixed_point.as_ref().unwrap()) < 1e-12);
        let r = classify_symbol(&hyperbolic().to_symbol(64).unwrap(), &opts).unwrap();
        assert_eq!(r.kind, Kind::Hyperbolic);
        assert!((r.alpha.unwrap() - 1.0 / 3.0).abs() < 1e-3);
        let r = classify_symbol(&parabolic().to_symbol(64).unwrap(), &opts).unwrap();
        assert_eq!(r.kind, Kind::Parabolic);
    }

    #[test]
    fn ellipsoids() {
        let zeta = vec![c(0.6), C64::new(0.0, 0.8)];
        let e = EllipsoidSpec::new(zeta.clone(), 0.7).unwrap();
        for p in e.sample(300, 4) {
            assert!(e.margin(&p) >= -1e-12);
            assert!(point_norm(&p) < 1.0);
        }
        let tight = EllipsoidSpec::new(zeta, 0.3).unwrap();
        // monotone in L: a point outside E(0.7) is outside E(0.3)
        let far = vec![c(0.0), c(0.0)];
        assert!(e.margin(&far) < 0.0 && tight.margin(&far) < 0.0);
        assert!(EllipsoidSpec::new(vec![c(0.5)], 1.0).is_err());
        for l in [0.5, 1.0, 2.0] {
            for m in [hyperbolic(), parabolic()] {
                let e = EllipsoidSpec::new(vec![c(1.0)], l).unwrap();
                let r = ellipsoid_invariance_check(&m, &e, 200, 5, 7, 1e-10).unwrap();
                assert_eq!(r.violations, 0);
            }
        }
        let e = EllipsoidSpec::new(vec![c(1.0), c(0.0)], 1.0).unwrap();
        assert!(ellipsoid_invariance_check(&affine(1), &e, 10, 2, 0, 1e-10).is_err());
    }

    #[test]
    fn linear_fractional_series() {
        let s = parabolic().to_symbol(20).unwrap();
        let z = [C64::new(0.3, -0.2)];
        let a = s.eval(&z).unwrap()[0];
        let b = parabolic().apply(&z).unwrap()[0];
        assert!((a - b).norm() < 1e-10);
    }
}
