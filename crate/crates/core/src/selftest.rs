//! Randomized checks of the algebraic identities the library relies on.
//! Each case draws sparse series on two generators of degree at most 6.

use std::fmt;

use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::compop::{adjoint_apply, build_matrix, BuildOptions};
use crate::error::Result;
use crate::fock::{inner_product, kernel_vector, FockVector};
use crate::sampling::{random_ball, rng};
use crate::series::{cauchy_product, eval_scalar, NcSeries, SymbolTuple};
use crate::words::{GradedEnumeration, Word};
use crate::C64;

pub const SELFTEST_N: usize = 2;
pub const SELFTEST_MAX_DEGREE: usize = 6;
pub const SELFTEST_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Property {
    CauchyAssociativity,
    ReproducingKernel,
    AntiHomomorphism,
    GradingTriangularity,
    AdjointConsistency,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::CauchyAssociativity,
        Property::ReproducingKernel,
        Property::AntiHomomorphism,
        Property::GradingTriangularity,
        Property::AdjointConsistency,
    ];
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Property::CauchyAssociativity => "cauchy_associativity",
            Property::ReproducingKernel => "reproducing_kernel",
            Property::AntiHomomorphism => "anti_homomorphism",
            Property::GradingTriangularity => "grading_triangularity",
            Property::AdjointConsistency => "adjoint_consistency",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyResult {
    pub property: Property,
    pub cases: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

fn coeff(r: &mut impl Rng, scale: f64) -> C64 {
    C64::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

/// A series with up to `terms` random coefficients of modulus below `scale`.
pub fn random_series(r: &mut impl Rng, n: usize, degree: usize, terms: usize, zero_constant: bool, scale: f64) -> Result<NcSeries> {
    let e = GradedEnumeration::new(n, degree)?;
    let lo = usize::from(zero_constant);
    let count = r.gen_range(1..=terms);
    let picks: Vec<(Word, C64)> = (0..count)
        .map(|_| {
            let i = r.gen_range(lo.min(e.total_dim() - 1)..e.total_dim());
            (e.unindex(i), coeff(r, scale))
        })
        .collect();
    NcSeries::from_terms(n, degree, picks)
}

pub fn random_symbol(r: &mut impl Rng, n: usize, degree: usize, zero_constant: bool) -> Result<SymbolTuple> {
    let comps = (0..n)
        .map(|_| random_series(r, n, degree, 4, zero_constant, 0.35))
        .collect::<Result<Vec<_>>>()?;
    SymbolTuple::new(comps)
}

pub fn random_vector(r: &mut impl Rng, n: usize, degree: usize) -> Result<FockVector> {
    let dim = GradedEnumeration::new(n, degree)?.total_dim();
    FockVector::from_coeffs(n, degree, (0..dim).map(|_| coeff(r, 1.0)).collect())
}

const UNCHECKED: BuildOptions = BuildOptions {
    skip_self_map_check: true,
};

fn max_abs(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn case(p: Property, seed: u64) -> Result<f64> {
    let mut r = rng(seed);
    let n = SELFTEST_N;
    let d = r.gen_range(1..=SELFTEST_MAX_DEGREE);
    match p {
        Property::CauchyAssociativity => {
            let f = random_series(&mut r, n, d, 8, false, 1.0)?;
            let g = random_series(&mut r, n, d, 8, false, 1.0)?;
            let h = random_series(&mut r, n, d, 8, false, 1.0)?;
            let left = cauchy_product(&cauchy_product(&f, &g)?, &h)?;
            let right = cauchy_product(&f, &cauchy_product(&g, &h)?)?;
            Ok(left.max_abs_diff(&right, d))
        }
        Property::ReproducingKernel => {
            let f = random_vector(&mut r, n, d)?;
            let mu = &random_ball(n, 1, 0.95, r.gen())[0];
            let z = kernel_vector(mu, d)?.vector;
            Ok((inner_product(&f, &z)? - eval_scalar(&f.to_series()?, mu)?).norm())
        }
        Property::AntiHomomorphism => {
            let phi = random_symbol(&mut r, n, d, true)?;
            let chi = random_symbol(&mut r, n, d, true)?;
            let both = chi.compose(&phi, d)?;
            let m = build_matrix(&both, d, &UNCHECKED)?;
            let prod = build_matrix(&phi, d, &UNCHECKED)?.matrix() * build_matrix(&chi, d, &UNCHECKED)?.matrix();
            Ok((m.matrix() - prod).iter().map(|z| z.norm()).fold(0.0, f64::max))
        }
        Property::GradingTriangularity => {
            let phi = random_symbol(&mut r, n, d, true)?;
            Ok(build_matrix(&phi, d, &UNCHECKED)?.grading_defect())
        }
        Property::AdjointConsistency => {
            let zero_constant = r.gen_bool(0.5);
            let phi = random_symbol(&mut r, n, d, zero_constant)?;
            let g = random_vector(&mut r, n, d)?;
            let m = build_matrix(&phi, d, &UNCHECKED)?;
            let direct = m.matrix().adjoint() * DVector::from_column_slice(g.coeffs());
            let via = DVector::from_column_slice(adjoint_apply(&phi, &g, &UNCHECKED)?.coeffs());
            let scale = max_abs(&direct).max(1.0);
            Ok(max_abs(&(direct - via)) / scale)
        }
    }
}

/// Runs `cases` randomized instances of `p`; case `i` uses seed `seed + i`.
pub fn run_property(p: Property, cases: usize, seed: u64) -> Result<PropertyResult> {
    let errs = (0..cases as u64)
        .into_par_iter()
        .map(|i| case(p, seed.wrapping_add(i)))
        .collect::<Result<Vec<f64>>>()?;
    let max_error = errs.into_iter().fold(0.0, f64::max);
    Ok(PropertyResult {
        property: p,
        cases,
        max_error,
        tolerance: SELFTEST_TOL,
        passed: max_error <= SELFTEST_TOL,
    })
}

pub fn run_all(cases: usize, seed: u64) -> Result<Vec<PropertyResult>> {
    Property::ALL.iter().map(|&p| run_property(p, cases, seed)).collect()
}
