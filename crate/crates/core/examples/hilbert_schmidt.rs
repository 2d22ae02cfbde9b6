//! Sum of |phi_alpha|^2 over all words, and the essential norm proxy.

use fockc::compop::{build_matrix, essential_norm_proxy, hilbert_schmidt_sum, BuildOptions};
use fockc::series::SymbolTuple;
use fockc::C64;
use nalgebra::DMatrix;

fn main() -> fockc::Result<()> {
    let phi = SymbolTuple::linear(&DMatrix::from_diagonal_element(2, 2, C64::new(0.5, 0.0)), 30)?;
    let hs = hilbert_schmidt_sum(&phi, 30, &BuildOptions::default())?;
    println!("HS sum at D = 30: {:.9} ({:?})", hs.sum, hs.method);
    let m = build_matrix(&phi, 10, &BuildOptions::default())?;
    let ks: Vec<usize> = (0..=10).collect();
    for (k, v) in ks.iter().zip(essential_norm_proxy(&m, &ks)) {
        println!("k = {k:2}  |C P_k| = {v:.6e}  bound {:.6e}", 0.5f64.powi(*k as i32) * 2.0 / 3f64.sqrt());
    }
    Ok(())
}
