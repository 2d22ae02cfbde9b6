//! Randomized invariants across modules.

use fockc::compop::{adjoint_apply, build_matrix, operator_norm_estimate, BuildOptions};
use fockc::drury::{compress_composition, jury_bounds, symmetrize, SymBasis};
use fockc::dynamics::{classify_symbol, ClassifyOptions, EllipsoidSpec, Kind, LinearFractional};
use fockc::fock::{inner_product, kernel_vector, tail_projection, FockVector};
use fockc::formats;
use fockc::linalg::set_distance;
use fockc::moebius::{phi_unitary, MoebiusParams};
use fockc::series::{cauchy_product, compose, eval_scalar, NcSeries, SymbolTuple};
use fockc::spectra::{compact_spectrum, filtration_eigenvalues, schroeder_linear_data, spectral_radius_of, iterate_symbol};
use fockc::words::GradedEnumeration;
use fockc::{point_norm, Word, C64};
use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

const N: usize = 2;

fn unchecked() -> BuildOptions {
    BuildOptions {
        skip_self_map_check: true,
    }
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..N as u8, 0..=max_len).prop_map(Word::from_letters)
}

fn complex(scale: f64) -> impl Strategy<Value = C64> {
    (-scale..scale, -scale..scale).prop_map(|(a, b)| C64::new(a, b))
}

fn series(degree: usize, min_len: usize, scale: f64) -> impl Strategy<Value = NcSeries> {
    prop::collection::vec((word(degree), complex(scale)), 1..6).prop_map(move |terms| {
        let terms = terms.into_iter().filter(|(w, _)| w.len() >= min_len);
        NcSeries::from_terms(N, degree, terms).unwrap()
    })
}

/// Symbols with `phi(0) = 0` and small coefficients.
fn exact_symbol(degree: usize) -> impl Strategy<Value = SymbolTuple> {
    prop::collection::vec(series(degree, 1, 0.3), N).prop_map(|c| SymbolTuple::new(c).unwrap())
}

fn point(rmax: f64) -> impl Strategy<Value = Vec<C64>> {
    (prop::collection::vec(complex(1.0), N), 0.0..rmax).prop_map(|(p, r)| {
        let norm = point_norm(&p).max(1e-300);
        p.into_iter().map(|z| z * (r / norm)).collect()
    })
}

fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn index_is_a_bijection(i in 0usize..(1 << 7) - 1, w in word(6)) {
        let e = GradedEnumeration::new(N, 6).unwrap();
        prop_assert_eq!(e.index(&e.unindex(i)), Some(i));
        prop_assert_eq!(e.unindex(e.index(&w).unwrap()), w);
    }

    #[test]
    fn order_matches_index(u in word(5), v in word(5)) {
        let e = GradedEnumeration::new(N, 5).unwrap();
        prop_assert_eq!(u.cmp(&v), e.index(&u).cmp(&e.index(&v)));
    }

    #[test]
    fn concat_laws(u in word(3), v in word(3), w in word(3)) {
        prop_assert_eq!(u.concat(&v).concat(&w), u.concat(&v.concat(&w)));
        prop_assert_eq!(Word::empty().concat(&u), u.clone());
        prop_assert_eq!(u.concat(&v).reverse(), v.reverse().concat(&u.reverse()));
    }

    #[test]
    fn cauchy_product_is_associative_and_bilinear(
        f in series(5, 0, 1.0), g in series(5, 0, 1.0), h in series(5, 0, 1.0), a in complex(2.0)
    ) {
        let left = cauchy_product(&cauchy_product(&f, &g).unwrap(), &h).unwrap();
        let right = cauchy_product(&f, &cauchy_product(&g, &h).unwrap()).unwrap();
        prop_assert!(left.max_abs_diff(&right, 5) < 1e-12);
        let lin = cauchy_product(&f.add_scaled(&g, a).unwrap(), &h).unwrap();
        let split = cauchy_product(&f, &h).unwrap().add_scaled(&cauchy_product(&g, &h).unwrap(), a).unwrap();
        prop_assert!(lin.max_abs_diff(&split, 5) < 1e-12);
    }

    #[test]
    fn evaluation_is_multiplicative(f in series(3, 0, 1.0), g in series(3, 0, 1.0), x in point(0.95)) {
        // degrees add, so widen before multiplying
        let fw = NcSeries::from_terms(N, 6, f.word_terms()).unwrap();
        let gw = NcSeries::from_terms(N, 6, g.word_terms()).unwrap();
        let lhs = eval_scalar(&cauchy_product(&fw, &gw).unwrap(), &x).unwrap();
        let rhs = eval_scalar(&f, &x).unwrap() * eval_scalar(&g, &x).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn composition_keeps_min_degree(f in series(5, 2, 1.0), phi in exact_symbol(5)) {
        let g = compose(&f, &phi, 5).unwrap();
        if let Some(m) = g.min_len() {
            prop_assert!(m >= f.min_len().unwrap());
        }
    }

    #[test]
    fn reproducing_kernel(f in series(6, 0, 1.0), mu in point(0.95)) {
        let v = FockVector::from_series(&f, 6).unwrap();
        let z = kernel_vector(&mu, 6).unwrap().vector;
        prop_assert!((inner_product(&v, &z).unwrap() - eval_scalar(&f, &mu).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn tail_projections(f in series(5, 0, 1.0), k in 0usize..7, m in 0usize..7) {
        let v = FockVector::from_series(&f, 5).unwrap();
        let both = tail_projection(&tail_projection(&v, m), k);
        let expected = tail_projection(&v, k.max(m));
        prop_assert_eq!(both.coeffs(), expected.coeffs());
        prop_assert!(tail_projection(&v, k).norm() <= v.norm());
    }

    #[test]
    fn moebius_involution_pointwise(lambda in point(0.9), mu in point(0.6)) {
        let m = MoebiusParams::new(&lambda).unwrap();
        let back = m.eval(&m.eval(&mu).unwrap()).unwrap();
        let err = back.iter().zip(&mu).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn unitary_symbol_acts_on_rows(theta in 0.0..6.3f64, a in 0.0..6.3f64, x in point(0.9)) {
        let u = DMatrix::from_row_slice(2, 2, &[
            C64::from_polar(theta.cos(), a), C64::from_polar(theta.sin(), 0.0),
            C64::from_polar(-theta.sin(), a), C64::from_polar(theta.cos(), 0.0),
        ]);
        let phi = phi_unitary(&u, 2).unwrap();
        let y = phi.eval(&x).unwrap();
        for j in 0..2 {
            let expected = x[0] * u[(0, j)] + x[1] * u[(1, j)];
            prop_assert!((y[j] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn anti_homomorphism_and_vacuum(phi in exact_symbol(4), chi in exact_symbol(4)) {
        let both = chi.compose(&phi, 4).unwrap();
        let m = build_matrix(&both, 4, &unchecked()).unwrap();
        let prod = build_matrix(&phi, 4, &unchecked()).unwrap().matrix() * build_matrix(&chi, 4, &unchecked()).unwrap().matrix();
        prop_assert!(max_abs(&(m.matrix() - prod)) < 1e-12);
        let vac = m.apply(&FockVector::vacuum(N, 4).unwrap()).unwrap();
        let e0 = FockVector::vacuum(N, 4).unwrap();
        prop_assert_eq!(vac.coeffs(), e0.coeffs());
        prop_assert!(m.grading_defect() == 0.0);
    }

    #[test]
    fn adjoint_consistency(phi in exact_symbol(4), f in series(4, 0, 1.0), g in series(4, 0, 1.0)) {
        let m = build_matrix(&phi, 4, &unchecked()).unwrap();
        let fv = FockVector::from_series(&f, 4).unwrap();
        let gv = FockVector::from_series(&g, 4).unwrap();
        let lhs = inner_product(&m.apply(&fv).unwrap(), &gv).unwrap();
        let rhs = inner_product(&fv, &adjoint_apply(&phi, &gv, &unchecked()).unwrap()).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn triangular_stability(a in 0.05..0.6f64, b in 0.05..0.6f64, extra in series(3, 2, 0.2)) {
        let phi = SymbolTuple::new(vec![
            NcSeries::from_terms(N, 3, [(Word::letter(0), C64::new(a, 0.0))]).unwrap(),
            NcSeries::from_terms(N, 3, [(Word::letter(1), C64::new(b, 0.0))]).unwrap().add(&extra).unwrap(),
        ]).unwrap();
        let small = filtration_eigenvalues(&build_matrix(&phi, 2, &unchecked()).unwrap(), 2).unwrap();
        let big = filtration_eigenvalues(&build_matrix(&phi, 3, &unchecked()).unwrap(), 2).unwrap();
        prop_assert!(fockc::linalg::multiset_distance(&small.computed, &big.computed).unwrap() < 1e-10);
        // compact spectrum without 0 against the filtration, as sets
        let data = schroeder_linear_data(&phi, &[C64::new(0.0, 0.0); 2], 3, 6).unwrap();
        let s: Vec<C64> = compact_spectrum(&data, 2).values().into_iter().filter(|z| z.norm() > 1e-12).collect();
        prop_assert!(set_distance(&s, &small.computed) < 1e-8);
        prop_assert!(set_distance(&small.computed, &s) < 1e-8);
    }

    #[test]
    fn linear_norm_is_one(a in prop::collection::vec(complex(0.5), 4)) {
        let m = DMatrix::from_row_slice(2, 2, &a);
        let phi = SymbolTuple::linear(&(m.clone() / C64::new(fockc::linalg::op_norm(&m).max(1.0), 0.0)), 4).unwrap();
        let r = operator_norm_estimate(&build_matrix(&phi, 4, &BuildOptions::default()).unwrap(), 16).unwrap();
        prop_assert!((r.estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn symmetrize_is_an_orthogonal_projection(f in series(4, 0, 1.0), g in series(4, 0, 1.0), mu in point(0.9)) {
        let u = FockVector::from_series(&f, 4).unwrap();
        let v = FockVector::from_series(&g, 4).unwrap();
        let su = symmetrize(&u).unwrap();
        prop_assert!(symmetrize(&su).unwrap().sub(&su).unwrap().norm() < 1e-14);
        let l = inner_product(&su, &v).unwrap();
        let r = inner_product(&u, &symmetrize(&v).unwrap()).unwrap();
        prop_assert!((l - r).norm() < 1e-13);
        let z = kernel_vector(&mu, 4).unwrap().vector;
        prop_assert!(symmetrize(&z).unwrap().sub(&z).unwrap().norm() < 1e-13);
    }

    #[test]
    fn symmetric_compression_sandwich(a in prop::collection::vec(complex(0.5), 4), pts in prop::collection::vec(point(0.9), 8)) {
        let m = DMatrix::from_row_slice(2, 2, &a);
        let psi = SymbolTuple::linear(&(m.clone() / C64::new(fockc::linalg::op_norm(&m).max(1.0), 0.0)), 3).unwrap();
        let comp = compress_composition(&psi, 3, &BuildOptions::default()).unwrap();
        let b = SymBasis::new(N, 3).unwrap();
        let e0 = DVector::from_fn(b.len(), |i, _| if i == 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) });
        prop_assert!(((&comp.matrix * &e0) - &e0).norm() < 1e-15);
        let j = jury_bounds(&psi, &comp, &pts).unwrap();
        prop_assert!(j.lower <= j.estimate + 1e-12);
        prop_assert!(j.estimate <= j.upper + 1e-9);
    }

    #[test]
    fn ellipsoids_grow_with_l(x in point(0.99), l in 0.1..4.0f64, dl in 0.0..2.0f64) {
        let zeta = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        let small = EllipsoidSpec::new(zeta.clone(), l).unwrap();
        let big = EllipsoidSpec::new(zeta, l + dl).unwrap();
        prop_assert!(big.margin(&x) >= small.margin(&x));
    }

    #[test]
    fn elliptic_maps_have_radius_one(a in -0.6..0.6f64, b in -0.3..0.3f64) {
        let map = LinearFractional::new(C64::new(a, 0.0), C64::new(b, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)).unwrap();
        let r = classify_symbol(&map, &ClassifyOptions::default()).unwrap();
        prop_assert_eq!(r.kind, Kind::Elliptic);
        prop_assert!((spectral_radius_of(&map, 30).unwrap().estimate - 1.0).abs() < 1e-3);
    }

    #[test]
    fn orbit_chain_rule(phi in exact_symbol(3), c0 in point(0.3)) {
        let comps: Vec<NcSeries> = phi.components().iter().zip(&c0).map(|(f, c)| {
            f.add(&NcSeries::constant(N, 3, *c).unwrap()).unwrap()
        }).collect();
        let phi = SymbolTuple::new(comps).unwrap();
        let seq = iterate_symbol(&phi, 6, 3).unwrap();
        for k in 0..6 {
            prop_assert_eq!(&seq.orbit[k + 1], &phi.eval(&seq.orbit[k]).unwrap());
        }
    }

    #[test]
    fn series_json_round_trip(f in series(5, 0, 1e3)) {
        let text = formats::to_json_string(&formats::series_to_json(&f)).unwrap();
        prop_assert_eq!(formats::parse_series(&text).unwrap(), f);
    }
}
