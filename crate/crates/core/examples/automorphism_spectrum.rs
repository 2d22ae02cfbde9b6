//! Spectra of automorphisms with an interior fixed point.

use fockc::moebius::AutomorphismSpec;
use fockc::spectra::automorphism_spectrum;
use fockc::C64;
use nalgebra::DMatrix;

fn main() -> fockc::Result<()> {
    for theta in [std::f64::consts::PI, std::f64::consts::TAU / 3.0, 1.0] {
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::from_polar(1.0, theta), C64::new(1.0, 0.0)]));
        let s = automorphism_spectrum(&AutomorphismSpec::new(vec![C64::new(0.0, 0.0); 2], u)?)?;
        println!("theta = {theta:.4}: {:?}, order {:?}", s.classification, s.order);
    }
    Ok(())
}
