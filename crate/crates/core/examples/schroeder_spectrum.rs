//! Spectrum of a compact C_phi: products of eigenvalues of the linear part
//! at the fixed point, checked against the truncated matrix.

use fockc::compop::{build_matrix, BuildOptions};
use fockc::series::{NcSeries, SymbolTuple};
use fockc::spectra::{compact_spectrum, filtration_eigenvalues, schroeder_linear_data};
use fockc::{Word, C64};

fn main() -> fockc::Result<()> {
    let c = |x: f64| C64::new(x, 0.0);
    let phi = SymbolTuple::new(vec![
        NcSeries::from_terms(2, 4, [(Word::letter(0), c(0.5))])?,
        NcSeries::from_terms(2, 4, [(Word::letter(1), c(1.0 / 3.0)), (Word::from_letters(vec![0, 0]), c(0.2))])?,
    ])?;
    let data = schroeder_linear_data(&phi, &[c(0.0), c(0.0)], 4, 8)?;
    println!("eigenvalues of the linear part: {:?}", data.eigenvalues);
    let s = compact_spectrum(&data, 4);
    println!("{} spectrum points with products up to length 4", s.points.len());
    let m = build_matrix(&phi, 4, &BuildOptions::default())?;
    let f = filtration_eigenvalues(&m, 4)?;
    println!("matrix vs diagonal products: {:e}", f.distance);
    Ok(())
}
