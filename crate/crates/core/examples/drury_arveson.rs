//! Compression of C_psi to the symmetric Fock space and the identity
//! (C f)(lambda) = f(psi(lambda)).

use fockc::compop::BuildOptions;
use fockc::drury::{compress_composition, functional_identity_defect, jury_bounds, sample_points, symmetrize};
use fockc::fock::FockVector;
use fockc::series::SymbolTuple;
use fockc::C64;
use nalgebra::DMatrix;

fn main() -> fockc::Result<()> {
    let c = |x: f64| C64::new(x, 0.0);
    let a = DMatrix::from_row_slice(2, 2, &[c(0.5), c(0.25), c(0.0), c(1.0 / 3.0)]);
    let psi = SymbolTuple::linear(&a, 3)?;
    let comp = compress_composition(&psi, 3, &BuildOptions::default())?;
    println!("{} multidegrees, invariance defect {:e}", comp.multidegrees.len(), comp.invariance_defect);
    let coeffs = (0..15).map(|i| C64::new((i as f64).sin(), (i as f64).cos())).collect();
    let f = symmetrize(&FockVector::from_coeffs(2, 3, coeffs)?)?.to_series()?;
    let pts = sample_points(2, 64, 0.8, 0);
    println!("functional identity defect: {:e}", functional_identity_defect(&psi, &f, 3, &pts)?.worst);
    let j = jury_bounds(&psi, &comp, &pts)?;
    println!("lower {:.6} <= sigma_max {:.6} <= upper {:.6}", j.lower, j.estimate, j.upper);
    Ok(())
}
