//! Iterates and spectral radius, Schröder linear data at a fixed point,
//! spectra of compact composition operators, the point spectrum read off
//! the length filtration, and spectra of automorphisms.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::compop::CompOpMatrix;
use crate::dynamics::{self, FixedPointOutcome, ScalarSelfMap};
use crate::error::{Error, Result};
use crate::linalg;
use crate::moebius::{moebius_conjugate, AutomorphismSpec, MoebiusParams, DEFAULT_MOEBIUS_DEGREE};
use crate::series::{SymbolTuple};
use crate::words::GradedEnumeration;
use crate::{point_norm, C64};

/// Orbits with norm at least `1 - ESCAPE_REPORT` are flagged as boundary-attracted.
pub const ESCAPE_REPORT: f64 = 1e-12;

/// Series iterates are kept at most at this degree.
pub const ITERATE_DEGREE: usize = 8;

#[derive(Clone, Debug)]
pub struct IterateSequence {
    pub symbol: SymbolTuple,
    /// `phi^[1], ..., phi^[K]`, truncated at `min(deg phi, ITERATE_DEGREE)`.
    pub iterates: Vec<SymbolTuple>,
    /// `phi^[k](0)` for `k = 0..=K`, by scalar iteration.
    pub orbit: Vec<Vec<C64>>,
    /// Largest gap between `phi^[k](0)` read from the series and the scalar orbit.
    pub orbit_defect: f64,
    /// First `k` with `|phi^[k](0)| >= 1 - ESCAPE_REPORT`.
    pub escaped_at: Option<usize>,
}

/// `phi^[k+1] = phi ∘ phi^[k]` for `k < K`, with the scalar orbit of 0.
pub fn iterate_symbol(phi: &SymbolTuple, k: usize, outer_cap: usize) -> Result<IterateSequence> {
    let c0 = phi.constant_norm();
    if c0 >= 1.0 {
        return Err(Error::OutsideBall { norm: c0 });
    }
    let n = phi.n();
    let mut orbit = vec![vec![C64::new(0.0, 0.0); n]];
    let mut escaped_at = None;
    for j in 1..=k {
        let next = phi.eval(&orbit[j - 1])?;
        if escaped_at.is_none() && point_norm(&next) >= 1.0 - ESCAPE_REPORT {
            escaped_at = Some(j);
        }
        orbit.push(next);
    }
    let d = phi.degree().min(ITERATE_DEGREE);
    let base = phi.truncate(d);
    let mut iterates = vec![base.clone()];
    let mut defect: f64 = 0.0;
    for point in orbit.iter().take(k + 1).skip(2) {
        let prev = iterates.last().expect("nonempty");
        let next = phi.compose(prev, outer_cap)?;
        let c = next.constant();
        let gap = c
            .iter()
            .zip(point)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        defect = defect.max(gap);
        iterates.push(next);
    }
    Ok(IterateSequence {
        symbol: phi.clone(),
        iterates,
        orbit,
        orbit_defect: defect,
        escaped_at,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RadiusForm {
    Root,
    Ratio,
}

#[derive(Clone, Debug, Serialize)]
pub struct RadiusReport {
    /// `(1 - |x_k|)^(-1/(2k))` for `k = 1..`.
    pub root: Vec<f64>,
    /// `((1 - |x_k|) / (1 - |x_{k+1}|))^(1/2)` for `k = 1..`.
    pub ratio: Vec<f64>,
    pub estimate: f64,
    pub form: RadiusForm,
    /// `|ratio_last - ratio_prev|`.
    pub cauchy_tail: f64,
    /// Orbit points used; later points are beyond `f64` resolution near the sphere.
    pub reliable_steps: usize,
}

/// The ratio sequence is preferred when its last increment is below this.
pub const RATIO_CAUCHY_TOL: f64 = 1e-2;

/// Root and ratio forms of the spectral radius from an orbit of the origin.
pub fn spectral_radius_from_orbit(orbit: &[Vec<C64>]) -> Result<RadiusReport> {
    let mut gaps: Vec<f64> = Vec::new();
    for x in orbit.iter().skip(1) {
        let g = 1.0 - point_norm(x);
        if g < dynamics::BOUNDARY_ESCAPE {
            break;
        }
        gaps.push(g);
    }
    if gaps.len() < 2 {
        return Err(Error::Precondition(
            "the spectral radius estimate needs at least two reliable orbit points".into(),
        ));
    }
    let root: Vec<f64> = gaps
        .iter()
        .enumerate()
        .map(|(i, g)| g.powf(-1.0 / (2.0 * (i + 1) as f64)))
        .collect();
    let ratio: Vec<f64> = gaps.windows(2).map(|w| (w[0] / w[1]).sqrt()).collect();
    let last = *ratio.last().expect("two gaps");
    let cauchy_tail = if ratio.len() >= 2 {
        (last - ratio[ratio.len() - 2]).abs()
    } else {
        f64::INFINITY
    };
    let (estimate, form) = if cauchy_tail <= RATIO_CAUCHY_TOL {
        (last, RadiusForm::Ratio)
    } else {
        (*root.last().expect("nonempty"), RadiusForm::Root)
    };
    Ok(RadiusReport {
        reliable_steps: gaps.len(),
        root,
        ratio,
        estimate,
        form,
        cauchy_tail,
    })
}

pub fn spectral_radius_estimate(seq: &IterateSequence) -> Result<RadiusReport> {
    if seq.orbit.len() < 3 {
        return Err(Error::Precondition("K must be at least 2".into()));
    }
    spectral_radius_from_orbit(&seq.orbit)
}

/// Spectral radius from the orbit of any scalar map.
pub fn spectral_radius_of<M: ScalarSelfMap + ?Sized>(map: &M, k: usize) -> Result<RadiusReport> {
    let zero = vec![C64::new(0.0, 0.0); map.dim()];
    spectral_radius_from_orbit(&dynamics::orbit(map, &zero, k)?)
}

#[derive(Clone, Debug)]
pub struct SchroederData {
    pub xi: Vec<C64>,
    /// `Phi_xi ∘ phi ∘ Phi_xi`.
    pub psi: SymbolTuple,
    /// `a[(i, j)] = <psi_i, e_j>`.
    pub a: DMatrix<C64>,
    pub eigenvalues: Vec<C64>,
    /// `|psi(0)|`.
    pub psi_constant: f64,
    pub tail_bound: f64,
}

pub const FIXED_POINT_TOL: f64 = 1e-9;
pub const CONJUGATION_TAIL_LIMIT: f64 = 1e-6;

/// Linear part of `Phi_xi ∘ phi ∘ Phi_xi` at a fixed point `xi`.
pub fn schroeder_linear_data(
    phi: &SymbolTuple,
    xi: &[C64],
    degree: usize,
    outer_cap: usize,
) -> Result<SchroederData> {
    let r = point_norm(xi);
    if r >= 1.0 {
        return Err(Error::OutsideBall { norm: r });
    }
    let img = phi.eval(xi)?;
    let residual = img
        .iter()
        .zip(xi)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual > FIXED_POINT_TOL {
        return Err(Error::NotFixedPoint { residual });
    }
    let psi = moebius_conjugate(phi, xi, degree.max(1), outer_cap)?;
    let tail = psi.tail_bound();
    if tail > CONJUGATION_TAIL_LIMIT {
        return Err(Error::ConjugationTail {
            bound: tail,
            limit: CONJUGATION_TAIL_LIMIT,
        });
    }
    let a = psi.linear_matrix().clone();
    let eigenvalues = linalg::eigenvalues(&a)?;
    Ok(SchroederData {
        xi: xi.to_vec(),
        psi_constant: psi.constant_norm(),
        psi,
        a,
        eigenvalues,
        tail_bound: tail,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Product,
    Matrix,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumPoint {
    pub re: f64,
    pub im: f64,
    pub provenance: Provenance,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumClass {
    FiniteSubgroup,
    UnitCircle,
    Products,
    ContainedInUnitCircle,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumReport {
    pub zero_included: bool,
    pub one_included: bool,
    pub points: Vec<SpectrumPoint>,
    pub classification: SpectrumClass,
}

impl SpectrumReport {
    pub fn values(&self) -> Vec<C64> {
        self.points.iter().map(|p| C64::new(p.re, p.im)).collect()
    }
}

pub const DEDUP_TOL: f64 = 1e-9;

/// Products `w_{i1} ... w_{ik}` over multisets of size `1..=cap`.
pub fn eigenvalue_products(w: &[C64], cap: usize) -> Vec<C64> {
    fn rec(w: &[C64], start: usize, left: usize, acc: C64, out: &mut Vec<C64>) {
        for i in start..w.len() {
            let p = acc * w[i];
            out.push(p);
            if left > 1 {
                rec(w, i, left - 1, p, out);
            }
        }
    }
    let mut out = Vec::new();
    if cap > 0 {
        rec(w, 0, cap, C64::new(1.0, 0.0), &mut out);
    }
    out
}

/// `{0, 1}` together with all eigenvalue products of length at most `cap`.
pub fn compact_spectrum(data: &SchroederData, cap: usize) -> SpectrumReport {
    let mut pts = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    pts.extend(eigenvalue_products(&data.eigenvalues, cap));
    let pts = linalg::dedup_points(pts, DEDUP_TOL);
    SpectrumReport {
        zero_included: true,
        one_included: true,
        points: pts
            .into_iter()
            .map(|z| SpectrumPoint {
                re: z.re,
                im: z.im,
                provenance: Provenance::Product,
            })
            .collect(),
        classification: SpectrumClass::Products,
    }
}

#[derive(Clone, Debug)]
pub struct FiltrationEigenvalues {
    /// Eigenvalues of the leading block (lengths at most `m`).
    pub computed: Vec<C64>,
    /// `{1} ∪ {d_A(alpha) : 1 <= |alpha| <= m}` with multiplicity.
    pub predicted: Vec<C64>,
    /// Greedy matching distance between the two multisets.
    pub distance: f64,
}

/// Diagonal products `d_A(alpha)` of the Schur-triangularized forward
/// linear block over all words of length at most `m`.
pub fn diagonal_products(a: &DMatrix<C64>, m: usize) -> Result<Vec<C64>> {
    let (_, t) = linalg::schur(a)?;
    let n = a.nrows();
    let diag: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let e = GradedEnumeration::new(n, m)?;
    let mut vals = vec![C64::new(1.0, 0.0)];
    for i in 1..e.total_dim() {
        let (p, l) = e.parent(i).expect("nonempty word");
        let v = vals[p] * diag[l];
        vals.push(v);
    }
    Ok(vals)
}

/// Eigenvalues of the `K_m` block of an exact compression together with the
/// prediction from the diagonal products. The forward matrix carries the
/// eigenvalues of the linear part itself; the adjoint carries their conjugates.
pub fn filtration_eigenvalues(mat: &CompOpMatrix, m: usize) -> Result<FiltrationEigenvalues> {
    if !mat.is_exact() {
        return Err(Error::NotExact);
    }
    if m > mat.degree() {
        return Err(Error::DegreeMismatch(format!(
            "filtration level {m} exceeds the truncation degree {}",
            mat.degree()
        )));
    }
    let dim = mat.grading()[m + 1];
    let block = mat.matrix().view((0, 0), (dim, dim)).into_owned();
    let computed = linalg::eigenvalues(&block)?;
    // the forward level-1 block is the transpose of the linear matrix
    let forward = mat.symbol().linear_matrix().transpose();
    let predicted = diagonal_products(&forward, m)?;
    let distance = linalg::multiset_distance(&computed, &predicted).unwrap_or(f64::INFINITY);
    Ok(FiltrationEigenvalues {
        computed,
        predicted,
        distance,
    })
}

/// Smallest `m <= cap` with `z^m = 1` within `tol`, if any.
pub fn root_of_unity_order(z: C64, tol: f64, cap: u64) -> Option<u64> {
    if (z.norm() - 1.0).abs() > tol {
        return None;
    }
    let t = z.arg() / std::f64::consts::TAU;
    (1..=cap).find(|&m| {
        let x = m as f64 * t;
        (x - x.round()).abs() <= tol
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutomorphismSpectrum {
    pub classification: SpectrumClass,
    /// `m` with spectrum `{z : z^m = 1}` for the finite-subgroup case.
    pub order: Option<u64>,
    pub eigenvalues: Vec<C64>,
    pub fixed_point: Option<Vec<C64>>,
    pub radius_estimate: Option<f64>,
    pub report: SpectrumReport,
}

pub const ROOT_OF_UNITY_TOL: f64 = 1e-9;
pub const ORDER_CAP: u64 = 10_000;

/// Spectrum of `C_Phi` for an automorphism `Phi`. With an interior fixed
/// point it is the closed subgroup of the circle generated by the eigenvalues
/// of the conjugated unitary; otherwise only containment in the circle is
/// certified, and only when the spectral radius estimate is 1.
pub fn automorphism_spectrum(spec: &AutomorphismSpec) -> Result<AutomorphismSpectrum> {
    let fp = dynamics::find_interior_fixed_point(spec, 5000, 1e-13)?;
    let FixedPointOutcome::Interior { point: xi, .. } = fp else {
        let radius = spectral_radius_of(spec, 200).ok().map(|r| r.estimate);
        let class = match radius {
            Some(r) if (r - 1.0).abs() <= 5e-2 => SpectrumClass::ContainedInUnitCircle,
            _ => SpectrumClass::Inconclusive,
        };
        return Ok(AutomorphismSpectrum {
            classification: class,
            order: None,
            eigenvalues: Vec::new(),
            fixed_point: None,
            radius_estimate: radius,
            report: SpectrumReport {
                zero_included: false,
                one_included: true,
                points: vec![SpectrumPoint {
                    re: 1.0,
                    im: 0.0,
                    provenance: Provenance::Product,
                }],
                classification: class,
            },
        });
    };
    let a = automorphism_linear_part(spec, &xi)?;
    let eigenvalues = linalg::eigenvalues(&a)?;
    let mut order: Option<u64> = Some(1);
    for w in &eigenvalues {
        order = match (order, root_of_unity_order(*w, ROOT_OF_UNITY_TOL, ORDER_CAP)) {
            (Some(m), Some(k)) => {
                let l = m / gcd(m, k) * k;
                (l <= ORDER_CAP).then_some(l)
            }
            _ => None,
        };
    }
    let (classification, points) = match order {
        Some(m) => (
            SpectrumClass::FiniteSubgroup,
            (0..m)
                .map(|j| {
                    let z = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / m as f64);
                    SpectrumPoint {
                        re: z.re,
                        im: z.im,
                        provenance: Provenance::Product,
                    }
                })
                .collect(),
        ),
        None => (
            SpectrumClass::UnitCircle,
            eigenvalues
                .iter()
                .map(|z| SpectrumPoint {
                    re: z.re,
                    im: z.im,
                    provenance: Provenance::Matrix,
                })
                .collect(),
        ),
    };
    Ok(AutomorphismSpectrum {
        classification,
        order,
        eigenvalues,
        fixed_point: Some(xi),
        radius_estimate: Some(1.0),
        report: SpectrumReport {
            zero_included: false,
            one_included: true,
            points,
            classification,
        },
    })
}

/// Linear part of `Phi_xi ∘ Phi ∘ Phi_xi`, an automorphism fixing 0, at
/// degree 1. Each Möbius factor is composed in rational form, so no
/// truncation of a series with nonzero constant term is ever substituted.
pub fn automorphism_linear_part(spec: &AutomorphismSpec, xi: &[C64]) -> Result<DMatrix<C64>> {
    let n = spec.n();
    let mx = MoebiusParams::new(xi)?;
    let cap = DEFAULT_MOEBIUS_DEGREE;
    let inner = mx.symbol(1)?;
    let u = crate::moebius::phi_unitary(spec.unitary(), 1)?;
    let mut s = u.compose(&inner, 1)?;
    let ml = MoebiusParams::new(spec.lambda())?;
    if !ml.is_zero() {
        s = ml.compose_after(&s, cap, cap)?;
    }
    let psi = mx.compose_after(&s, cap, cap)?;
    if psi.constant_norm() > 1e-9 || psi.tail_bound() > CONJUGATION_TAIL_LIMIT {
        return Err(Error::Inconclusive(format!(
            "conjugated automorphism has |psi(0)| = {:e}, tail {:e}",
            psi.constant_norm(),
            psi.tail_bound()
        )));
    }
    debug_assert_eq!(psi.n(), n);
    Ok(psi.linear_matrix().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compop::{build_matrix, BuildOptions};
    use crate::series::NcSeries;
    use crate::words::Word;
    use nalgebra::DVector;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn example(d: usize) -> SymbolTuple {
        let x1 = NcSeries::from_terms(2, d, [(Word::letter(0), c(0.5))]).unwrap();
        let x2 = NcSeries::from_terms(
            2,
            d,
            [(Word::letter(1), c(1.0 / 3.0)), (Word::from_letters(vec![0, 0]), c(0.2))],
        )
        .unwrap();
        SymbolTuple::new(vec![x1, x2]).unwrap()
    }

    fn affine() -> SymbolTuple {
        let x1 = NcSeries::from_terms(2, 1, [(Word::empty(), c(0.25)), (Word::letter(0), c(0.5))]).unwrap();
        let x2 = NcSeries::from_terms(2, 1, [(Word::letter(1), c(0.5))]).unwrap();
        SymbolTuple::new(vec![x1, x2]).unwrap()
    }

    #[test]
    fn iterates_of_scaling() {
        let phi = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, c(0.5)), 3).unwrap();
        let seq = iterate_symbol(&phi, 3, 3).unwrap();
        let third = &seq.iterates[2];
        assert_eq!(third.linear_matrix(), &DMatrix::from_diagonal_element(2, 2, c(0.125)));
    }

    #[test]
    fn hyperbolic_orbit_and_radius() {
        let phi = dynamics::LinearFractional::new(c(1.0), c(0.5), c(0.5), c(1.0))
            .unwrap()
            .to_symbol(64)
            .unwrap();
        let seq = iterate_symbol(&phi, 40, 64).unwrap();
        for (k, expected) in [(1, 0.5), (2, 0.8), (3, 13.0 / 14.0)] {
            assert!((seq.orbit[k][0] - c(expected)).norm() < 1e-14);
        }
        assert!(seq.orbit_defect < 1e-10);
        let r = spectral_radius_estimate(&seq).unwrap();
        assert!((r.estimate - 3f64.sqrt()).abs() < 2e-2);
        assert_eq!(r.form, RadiusForm::Ratio);
    }

    #[test]
    fn elliptic_radius_is_one() {
        let seq = iterate_symbol(&affine(), 30, 4).unwrap();
        let r = spectral_radius_estimate(&seq).unwrap();
        assert!((r.estimate - 1.0).abs() < 1e-3);
        // similarity invariance under the conjugation by Phi_xi
        let xi = [c(0.5), c(0.0)];
        let psi = moebius_conjugate(&affine(), &xi, 3, 8).unwrap();
        let r2 = spectral_radius_estimate(&iterate_symbol(&psi, 30, 8).unwrap()).unwrap();
        assert!((r.estimate - r2.estimate).abs() < 1e-3);
    }

    #[test]
    fn schroeder_data_read_off() {
        let d = schroeder_linear_data(&example(3), &[c(0.0), c(0.0)], 3, 8).unwrap();
        assert!((d.a.clone() - DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(1.0 / 3.0)]))).norm() < 1e-14);
        let ev = linalg::dedup_points(d.eigenvalues.clone(), 1e-12);
        assert!(linalg::set_distance(&ev, &[c(0.5), c(1.0 / 3.0)]) < 1e-14);
        let d = schroeder_linear_data(&affine(), &[c(0.5), c(0.0)], 2, 8).unwrap();
        assert!(d.psi_constant < 1e-12);
        assert!(d.eigenvalues.iter().all(|w| w.norm() < 1.0));
        assert!(matches!(
            schroeder_linear_data(&affine(), &[c(0.1), c(0.0)], 2, 8),
            Err(Error::NotFixedPoint { .. })
        ));
    }

    #[test]
    fn schroeder_matches_finite_difference_jacobian() {
        // psi = Phi_xi ∘ phi ∘ Phi_xi evaluated pointwise, differentiated at 0
        let xi = [c(0.5), c(0.0)];
        let d = schroeder_linear_data(&affine(), &xi, 2, 8).unwrap();
        let m = MoebiusParams::new(&xi).unwrap();
        let psi = |p: &[C64]| m.eval(&affine().eval(&m.eval(p).unwrap()).unwrap()).unwrap();
        let h = 1e-6;
        for j in 0..2 {
            let mut p = vec![c(0.0), c(0.0)];
            let mut q = vec![c(0.0), c(0.0)];
            p[j] = c(h);
            q[j] = c(-h);
            let (fp, fq) = (psi(&p), psi(&q));
            for i in 0..2 {
                let fd = (fp[i] - fq[i]) / (2.0 * h);
                assert!((fd - d.a[(i, j)]).norm() < 1e-8);
            }
        }
    }

    #[test]
    fn compact_spectrum_enumeration() {
        let data = SchroederData {
            xi: vec![],
            psi: example(2),
            a: DMatrix::zeros(2, 2),
            eigenvalues: vec![c(0.5), c(1.0 / 3.0)],
            psi_constant: 0.0,
            tail_bound: 0.0,
        };
        let s = compact_spectrum(&data, 2);
        let expected = [0.0, 1.0, 0.5, 1.0 / 3.0, 0.25, 1.0 / 6.0, 1.0 / 9.0].map(c);
        assert!(linalg::set_distance(&s.values(), &expected) < 1e-15);
        assert_eq!(s.points.len(), 7);
        let zero = SchroederData {
            eigenvalues: vec![c(0.0)],
            ..data
        };
        assert_eq!(compact_spectrum(&zero, 3).points.len(), 2);
    }

    #[test]
    fn filtration_matches_products() {
        let phi = SymbolTuple::linear(&DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.5), c(1.0 / 3.0)])), 2).unwrap();
        let m = build_matrix(&phi, 2, &BuildOptions::default()).unwrap();
        let f = filtration_eigenvalues(&m, 2).unwrap();
        let expected = [1.0, 0.5, 1.0 / 3.0, 0.25, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 9.0].map(c);
        assert!(linalg::multiset_distance(&f.computed, &expected).unwrap() < 1e-12);
        assert!(f.distance < 1e-12);
        assert_eq!(filtration_eigenvalues(&m, 0).unwrap().computed, vec![c(1.0)]);

        let u = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::new(0.0, 1.0), c(1.0)]));
        let m = build_matrix(&crate::moebius::phi_unitary(&u, 1).unwrap(), 1, &BuildOptions::default()).unwrap();
        let f = filtration_eigenvalues(&m, 1).unwrap();
        assert!(linalg::multiset_distance(&f.computed, &[c(1.0), C64::new(0.0, 1.0), c(1.0)]).unwrap() < 1e-12);

        let inexact = build_matrix(&affine(), 1, &BuildOptions::default()).unwrap();
        assert!(matches!(filtration_eigenvalues(&inexact, 1), Err(Error::NotExact)));
    }

    #[test]
    fn automorphism_spectra() {
        let zero = vec![c(0.0), c(0.0)];
        let diag = |z: C64| DMatrix::from_diagonal(&DVector::from_vec(vec![z, c(1.0)]));
        let s = automorphism_spectrum(&AutomorphismSpec::new(zero.clone(), diag(c(-1.0))).unwrap()).unwrap();
        assert_eq!(s.classification, SpectrumClass::FiniteSubgroup);
        assert_eq!(s.order, Some(2));
        let w = C64::from_polar(1.0, std::f64::consts::TAU / 3.0);
        let s = automorphism_spectrum(&AutomorphismSpec::new(zero.clone(), diag(w)).unwrap()).unwrap();
        assert_eq!(s.order, Some(3));
        let s = automorphism_spectrum(&AutomorphismSpec::new(zero, diag(C64::from_polar(1.0, 1.0))).unwrap()).unwrap();
        assert_eq!(s.classification, SpectrumClass::UnitCircle);
        // an elliptic automorphism with a nonzero fixed point: Phi_lambda
        // itself fixes points on the segment towards lambda
        let lam = vec![c(0.4), c(0.0)];
        let s = automorphism_spectrum(&AutomorphismSpec::new(lam, DMatrix::identity(2, 2)).unwrap()).unwrap();
        assert!(s.fixed_point.is_some());
        assert_eq!(s.classification, SpectrumClass::FiniteSubgroup);
        assert_eq!(s.order, Some(2));
        // z -> (z + 1/2) / (1 + z/2) has no interior fixed point
        let s = automorphism_spectrum(&AutomorphismSpec::new(vec![c(0.5)], DMatrix::from_element(1, 1, c(-1.0))).unwrap()).unwrap();
        assert_eq!(s.classification, SpectrumClass::Inconclusive);
    }

    #[test]
    fn product_enumeration_counts() {
        // multisets of size <= 3 from 2 values: 2 + 3 + 4
        assert_eq!(eigenvalue_products(&[c(0.5), c(0.25)], 3).len(), 9);
        assert!(eigenvalue_products(&[c(0.5)], 0).is_empty());
        assert_eq!(root_of_unity_order(C64::from_polar(1.0, std::f64::consts::TAU * 2.0 / 5.0), 1e-9, 100), Some(5));
        assert_eq!(root_of_unity_order(C64::from_polar(1.0, 1.0), 1e-9, 10_000), None);
    }
}
