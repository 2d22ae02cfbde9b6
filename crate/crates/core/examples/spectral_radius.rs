//! Spectral radius from (1 - |phi^[k](0)|)^(-1/2k) and its ratio form.

use fockc::dynamics::LinearFractional;
use fockc::spectra::spectral_radius_of;
use fockc::C64;

fn main() -> fockc::Result<()> {
    let c = |x: f64| C64::new(x, 0.0);
    let maps = [
        ("hyperbolic (z + 1/2) / (1 + z/2)", LinearFractional::new(c(1.0), c(0.5), c(0.5), c(1.0))?, 40),
        ("parabolic (1 + z) / (3 - z)", LinearFractional::new(c(1.0), c(1.0), c(-1.0), c(3.0))?, 60),
        ("elliptic z/2 + 1/4", LinearFractional::new(c(0.5), c(0.25), c(0.0), c(1.0))?, 30),
    ];
    for (name, map, k) in maps {
        let r = spectral_radius_of(&map, k)?;
        println!("{name}: r ~ {:.5} ({:?} form, {} steps)", r.estimate, r.form, r.reliable_steps);
    }
    println!("sqrt(3) = {:.5}", 3f64.sqrt());
    Ok(())
}
