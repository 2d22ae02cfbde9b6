//! C_phi^* z_mu = z_{phi(mu)} for a linear contraction.

use fockc::compop::{adjoint_apply, BuildOptions};
use fockc::fock::kernel_vector;
use fockc::series::SymbolTuple;
use fockc::C64;
use nalgebra::DMatrix;

fn main() -> fockc::Result<()> {
    let a = DMatrix::from_row_slice(2, 2, &[C64::new(0.4, 0.1), C64::new(0.2, 0.0), C64::new(0.0, -0.3), C64::new(0.5, 0.0)]);
    let phi = SymbolTuple::linear(&a, 20)?;
    let mu = [C64::new(0.1, 0.05), C64::new(-0.12, 0.08)];
    let z = kernel_vector(&mu, 20)?;
    let lhs = adjoint_apply(&phi, &z.vector, &BuildOptions::default())?;
    let rhs = kernel_vector(&phi.eval(&mu)?, 20)?;
    println!("|C^* z_mu - z_phi(mu)| = {:e}", lhs.sub(&rhs.vector)?.norm());
    println!("certified kernel tail: {:e}", rhs.norm_sqr_tail.sqrt());
    Ok(())
}
