//! Largest singular value of the truncated C_phi for z -> Phi_{1/2}(z),
//! climbing towards sqrt(3) as D grows.

use fockc::compop::{build_matrix, operator_norm_estimate, BuildOptions};
use fockc::moebius::phi_lambda;
use fockc::C64;

fn main() -> fockc::Result<()> {
    for d in [25, 50, 100, 200, 400] {
        let phi = phi_lambda(&[C64::new(0.5, 0.0)], d)?;
        let m = build_matrix(&phi, d, &BuildOptions::default())?;
        let r = operator_norm_estimate(&m, 64)?;
        println!("D = {d:4}  sigma_max = {:.6}  upper = {:.6}", r.estimate, r.upper_bound);
    }
    Ok(())
}
