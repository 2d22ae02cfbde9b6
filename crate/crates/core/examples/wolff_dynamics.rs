//! Classification by fixed points, Denjoy-Wolff point and dilatation, and
//! invariance of the horospherical ellipsoids.

use fockc::dynamics::{classify_symbol, ellipsoid_invariance_check, ClassifyOptions, EllipsoidSpec, LinearFractional};
use fockc::C64;

fn main() -> fockc::Result<()> {
    let c = |x: f64| C64::new(x, 0.0);
    for (name, map) in [
        ("hyperbolic", LinearFractional::new(c(1.0), c(0.5), c(0.5), c(1.0))?),
        ("parabolic", LinearFractional::new(c(1.0), c(1.0), c(-1.0), c(3.0))?),
    ] {
        let r = classify_symbol(&map, &ClassifyOptions::default())?;
        println!("{name}: kind {:?}, alpha {:?}, dw {:?}", r.kind, r.alpha, r.dw_point);
        for l in [0.5, 1.0, 2.0] {
            let e = EllipsoidSpec::new(vec![c(1.0)], l)?;
            let rep = ellipsoid_invariance_check(&map, &e, 200, 5, 0, 1e-10)?;
            println!("  L = {l}: {} violations, worst margin {:e}", rep.violations, rep.worst_margin);
        }
    }
    Ok(())
}
