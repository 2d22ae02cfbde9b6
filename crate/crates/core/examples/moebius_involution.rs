//! Phi_lambda ∘ Phi_lambda against the identity, coefficient by coefficient.

use fockc::moebius::MoebiusParams;
use fockc::series::SymbolTuple;
use fockc::C64;

fn main() -> fockc::Result<()> {
    let lambda = [C64::new(0.3, 0.0), C64::new(0.1, 0.0)];
    let m = MoebiusParams::new(&lambda)?;
    let inner = m.symbol(3)?;
    let twice = m.compose_after(&inner, 40, 60)?;
    let id = SymbolTuple::identity(2, 3)?;
    let worst = twice
        .components()
        .iter()
        .zip(id.components())
        .map(|(a, b)| a.max_abs_diff(b, 3))
        .fold(0.0, f64::max);
    println!("lambda = {lambda:?}");
    println!("Delta_lambda = {}", m.delta_lambda());
    println!("max |coeff(Phi∘Phi) - coeff(id)| on lengths <= 3: {worst:e}");
    println!("Phi(lambda) = {:?}", m.eval(&lambda)?);
    Ok(())
}
