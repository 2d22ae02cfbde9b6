//! Free holomorphic automorphisms of the noncommutative unit ball.
//!
//! `Phi_lambda(X) = lambda - Delta_lambda (I - sum conj(lambda_i) X_i)^(-1) [X_1, ..., X_n] Delta_{lambda*}`
//! is an involution exchanging `0` and `lambda`; `Phi_U(X) = [X_1, ..., X_n] U`
//! for a unitary `U`. Every automorphism is `Phi_lambda ∘ Phi_U`.
//!
//! Component `j` of `Phi_lambda` has the linear representation
//! `u = (-Delta_lambda, lambda_j)`, `v = (0, 1)`,
//! `M_i = [[conj(lambda_i), (Delta_{lambda*})_{ij}], [0, 0]]`, which lets it
//! be composed at high degree without materializing `n^D` coefficients.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::series::{RationalSeries, SymbolTuple};
use crate::{point_inner, point_norm, C64};

/// Unitarity tolerance for `Phi_U`.
pub const UNITARY_TOL: f64 = 1e-12;

/// Materialized `Phi_lambda` series are refused above this many terms per component.
pub const MATERIALIZE_LIMIT: usize = 1 << 22;

/// Degree used for the rational `Phi_lambda` factor inside conjugations.
pub const DEFAULT_MOEBIUS_DEGREE: usize = 200;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct MoebiusParams {
    lambda: Vec<C64>,
    delta_lambda: f64,
    delta_lambda_star: DMatrix<C64>,
}

impl MoebiusParams {
    pub fn new(lambda: &[C64]) -> Result<Self> {
        let n = lambda.len();
        if n == 0 {
            return Err(Error::EmptyAlphabet);
        }
        if lambda.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let r = point_norm(lambda);
        if r >= 1.0 {
            return Err(Error::OutsideBall { norm: r });
        }
        let delta_lambda = (1.0 - r * r).sqrt();
        let mut star = DMatrix::identity(n, n);
        if r > 0.0 {
            // I - lambda^* lambda has rank-one defect; its square root is explicit
            let k = (1.0 - delta_lambda) / (r * r);
            for i in 0..n {
                for j in 0..n {
                    star[(i, j)] -= lambda[i].conj() * lambda[j] * k;
                }
            }
        }
        Ok(MoebiusParams {
            lambda: lambda.to_vec(),
            delta_lambda,
            delta_lambda_star: star,
        })
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    pub fn delta_lambda(&self) -> f64 {
        self.delta_lambda
    }

    pub fn delta_lambda_star(&self) -> &DMatrix<C64> {
        &self.delta_lambda_star
    }

    pub fn is_zero(&self) -> bool {
        self.lambda.iter().all(|z| *z == c(0.0))
    }

    /// `||Delta_{lambda*}^2 - (I - lambda^* lambda)||_F`.
    pub fn square_root_defect(&self) -> f64 {
        let n = self.n();
        let target = DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { c(1.0) } else { c(0.0) };
            d - self.lambda[i].conj() * self.lambda[j]
        });
        (&self.delta_lambda_star * &self.delta_lambda_star - target).norm()
    }

    /// Closed form `Phi_lambda(x)` at a point of the ball.
    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::AlphabetMismatch {
                left: n,
                right: x.len(),
            });
        }
        let denom = c(1.0) - point_inner(x, &self.lambda);
        if denom.norm() == 0.0 {
            return Err(Error::Precondition("Phi_lambda has a pole at this point".into()));
        }
        let s = c(self.delta_lambda) / denom;
        Ok((0..n)
            .map(|j| {
                let xd: C64 = (0..n).map(|i| x[i] * self.delta_lambda_star[(i, j)]).sum();
                self.lambda[j] - s * xd
            })
            .collect())
    }

    /// Linear representations of the components, truncated at `degree`.
    pub fn rational_components(&self, degree: usize) -> Vec<RationalSeries> {
        let n = self.n();
        (0..n)
            .map(|j| {
                let initial = DVector::from_vec(vec![c(-self.delta_lambda), self.lambda[j]]);
                let terminal = DVector::from_vec(vec![c(0.0), c(1.0)]);
                let transitions = (0..n)
                    .map(|i| {
                        DMatrix::from_row_slice(
                            2,
                            2,
                            &[
                                self.lambda[i].conj(),
                                self.delta_lambda_star[(i, j)],
                                c(0.0),
                                c(0.0),
                            ],
                        )
                    })
                    .collect();
                RationalSeries::new(degree, initial, transitions, terminal)
                    .expect("consistent 2x2 representation")
            })
            .collect()
    }

    /// Materialized `Phi_lambda` truncated at `degree`.
    pub fn symbol(&self, degree: usize) -> Result<SymbolTuple> {
        if self.is_zero() {
            return SymbolTuple::linear(&DMatrix::from_diagonal_element(self.n(), self.n(), c(-1.0)), degree);
        }
        let comps = self
            .rational_components(degree)
            .iter()
            .map(|r| r.to_series(MATERIALIZE_LIMIT))
            .collect::<Result<Vec<_>>>()?;
        SymbolTuple::new(comps)
    }

    /// `Phi_lambda ∘ inner`, using the rational form of `Phi_lambda` up to
    /// `series_degree`; the result has the degree of `inner`.
    pub fn compose_after(
        &self,
        inner: &SymbolTuple,
        series_degree: usize,
        outer_cap: usize,
    ) -> Result<SymbolTuple> {
        if inner.n() != self.n() {
            return Err(Error::AlphabetMismatch {
                left: self.n(),
                right: inner.n(),
            });
        }
        if self.is_zero() {
            let minus = SymbolTuple::linear(
                &DMatrix::from_diagonal_element(self.n(), self.n(), c(-1.0)),
                inner.degree(),
            )?;
            return minus.compose(inner, outer_cap.max(1));
        }
        let comps = self
            .rational_components(series_degree.max(inner.degree()))
            .iter()
            .map(|r| r.compose(inner, outer_cap))
            .collect::<Result<Vec<_>>>()?;
        SymbolTuple::new(comps)
    }
}

/// `Phi_lambda` truncated at degree `degree`.
pub fn phi_lambda(lambda: &[C64], degree: usize) -> Result<SymbolTuple> {
    MoebiusParams::new(lambda)?.symbol(degree)
}

/// `||U^* U - I||_F`.
pub fn unitary_defect(u: &DMatrix<C64>) -> f64 {
    let n = u.nrows();
    (u.adjoint() * u - DMatrix::<C64>::identity(n, n)).norm()
}

/// `Phi_U(X) = [X_1, ..., X_n] U`, so `phi_j = sum_i X_i U_ij`.
pub fn phi_unitary(u: &DMatrix<C64>, degree: usize) -> Result<SymbolTuple> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(Error::Precondition("U must be a nonempty square matrix".into()));
    }
    let defect = unitary_defect(u);
    if defect > UNITARY_TOL {
        return Err(Error::NotUnitary { defect });
    }
    SymbolTuple::row_action(u, degree)
}

/// `[X] A` for any row contraction `A` (largest singular value at most 1).
pub fn phi_contraction(a: &DMatrix<C64>, degree: usize) -> Result<SymbolTuple> {
    if a.nrows() != a.ncols() || a.nrows() == 0 {
        return Err(Error::Precondition("A must be a nonempty square matrix".into()));
    }
    let s = crate::linalg::op_norm(a);
    if s > 1.0 + UNITARY_TOL {
        return Err(Error::Precondition(format!("||A|| = {s} exceeds 1")));
    }
    SymbolTuple::row_action(a, degree)
}

/// `phi ∘ chi`, componentwise.
pub fn compose_symbols(phi: &SymbolTuple, chi: &SymbolTuple, outer_cap: usize) -> Result<SymbolTuple> {
    phi.compose(chi, outer_cap)
}

/// `Phi_xi ∘ phi ∘ Phi_xi` truncated at `min(degree, deg phi)`. The inner
/// factor is materialized at `degree`; the outer one is composed in
/// rational form. All terms of `phi` up to `outer_cap` are substituted.
pub fn moebius_conjugate(
    phi: &SymbolTuple,
    xi: &[C64],
    degree: usize,
    outer_cap: usize,
) -> Result<SymbolTuple> {
    let m = MoebiusParams::new(xi)?;
    let inner = m.symbol(degree)?;
    let mid = phi.compose(&inner, outer_cap)?;
    m.compose_after(&mid, DEFAULT_MOEBIUS_DEGREE.max(degree), outer_cap.max(DEFAULT_MOEBIUS_DEGREE))
}

/// Both identities relating `1 - Phi_lambda(x) Phi_lambda(y)^*` and
/// `I - Phi_lambda(x)^* Phi_lambda(y)` to `x`, `y` and `lambda`.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct E1Defect {
    pub scalar: f64,
    pub matrix: f64,
}

pub fn identity_e1_defect(lambda: &[C64], x: &[C64], y: &[C64]) -> Result<E1Defect> {
    let m = MoebiusParams::new(lambda)?;
    for p in [x, y] {
        let r = point_norm(p);
        if r >= 1.0 {
            return Err(Error::OutsideBall { norm: r });
        }
    }
    e1_defect_with(&m, &m.eval(x)?, &m.eval(y)?, x, y)
}

/// The same defect with caller-supplied values `px = Phi_lambda(x)`, `py = Phi_lambda(y)`.
pub fn e1_defect_with(
    m: &MoebiusParams,
    px: &[C64],
    py: &[C64],
    x: &[C64],
    y: &[C64],
) -> Result<E1Defect> {
    let n = m.n();
    let lam = m.lambda();
    let d = c(m.delta_lambda());
    let lhs = c(1.0) - point_inner(px, py);
    let rhs = d * d * (c(1.0) - point_inner(x, y))
        / ((c(1.0) - point_inner(x, lam)) * (c(1.0) - point_inner(lam, y)));
    let scalar = (lhs - rhs).norm();

    // n x n identity
    let outer = |a: &[C64], b: &[C64]| DMatrix::from_fn(n, n, |i, j| a[i].conj() * b[j]);
    let id = DMatrix::<C64>::identity(n, n);
    let lhs_m = &id - outer(px, py);
    let inv = |mat: DMatrix<C64>| {
        mat.try_inverse()
            .ok_or_else(|| Error::Precondition("singular factor in the identity".into()))
    };
    let a = inv(&id - outer(x, lam))?;
    let b = &id - outer(x, y);
    let cm = inv(&id - outer(lam, y))?;
    let ds = m.delta_lambda_star();
    let rhs_m = ds * a * b * cm * ds;
    Ok(E1Defect {
        scalar,
        matrix: (lhs_m - rhs_m).norm(),
    })
}

/// An automorphism `Phi_lambda ∘ Phi_U`; `lambda = 0` denotes `Phi_U` itself.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismSpec {
    lambda: Vec<C64>,
    unitary: DMatrix<C64>,
}

impl AutomorphismSpec {
    pub fn new(lambda: Vec<C64>, unitary: DMatrix<C64>) -> Result<Self> {
        let n = lambda.len();
        if unitary.nrows() != n || unitary.ncols() != n {
            return Err(Error::AlphabetMismatch {
                left: n,
                right: unitary.nrows(),
            });
        }
        MoebiusParams::new(&lambda)?;
        let defect = unitary_defect(&unitary);
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary { defect });
        }
        Ok(AutomorphismSpec { lambda, unitary })
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn lambda(&self) -> &[C64] {
        &self.lambda
    }

    pub fn unitary(&self) -> &DMatrix<C64> {
        &self.unitary
    }

    fn params(&self) -> Option<MoebiusParams> {
        let m = MoebiusParams::new(&self.lambda).expect("validated");
        (!m.is_zero()).then_some(m)
    }

    /// `Phi(x)` in closed form.
    pub fn eval(&self, x: &[C64]) -> Result<Vec<C64>> {
        let n = self.n();
        if x.len() != n {
            return Err(Error::AlphabetMismatch {
                left: n,
                right: x.len(),
            });
        }
        let xu: Vec<C64> = (0..n)
            .map(|j| (0..n).map(|i| x[i] * self.unitary[(i, j)]).sum())
            .collect();
        match self.params() {
            Some(m) => m.eval(&xu),
            None => Ok(xu),
        }
    }

    /// The automorphism as a symbol truncated at `degree`.
    pub fn symbol(&self, degree: usize) -> Result<SymbolTuple> {
        let u = phi_unitary(&self.unitary, degree)?;
        match self.params() {
            Some(m) => m.symbol(degree)?.compose(&u, degree.max(1)),
            None => Ok(u),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::eval_scalar;
    use crate::words::Word;

    fn z(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn zero_lambda_is_minus_identity() {
        let s = phi_lambda(&[z(0.0, 0.0), z(0.0, 0.0)], 4).unwrap();
        assert_eq!(s.linear_matrix(), &DMatrix::from_diagonal_element(2, 2, z(-1.0, 0.0)));
        assert_eq!(s.max_len(), 1);
        assert!(s.has_zero_constant());
    }

    #[test]
    fn one_variable_half_matches_long_division() {
        // (1/2 - z) / (1 - z/2) by long division: q_0 = 1/2, then
        // remainder recursion q_k = q_{k-1}/2 - [k == 1]
        let s = phi_lambda(&[z(0.5, 0.0)], 12).unwrap();
        let mut q = vec![0.5];
        for k in 1..=12 {
            let prev: f64 = q[k - 1];
            q.push(prev * 0.5 - if k == 1 { 1.0 } else { 0.0 });
        }
        for (k, &qk) in q.iter().enumerate() {
            let got = s.component(0).coefficient(&Word::from_letters(vec![0; k]));
            assert!((got - z(qk, 0.0)).norm() < 1e-15, "k = {k}");
        }
        assert!((s.component(0).coefficient(&Word::letter(0)) - z(-0.75, 0.0)).norm() < 1e-15);
        assert!(
            (s.component(0).coefficient(&Word::from_letters(vec![0; 2])) - z(-0.375, 0.0)).norm()
                < 1e-15
        );
    }

    #[test]
    fn exchanges_zero_and_lambda() {
        let lam = [z(0.3, 0.0), z(0.0, -0.2)];
        let m = MoebiusParams::new(&lam).unwrap();
        assert!(m.square_root_defect() < 1e-12);
        let rat = m.rational_components(40);
        let at_lam: Vec<C64> = rat.iter().map(|r| r.eval_scalar(&lam).unwrap()).collect();
        assert!(point_norm(&at_lam) < 1e-12);
        let s = m.symbol(12).unwrap();
        let at_lam: Vec<C64> = s.eval(&lam).unwrap();
        assert!(point_norm(&at_lam) < 1e-5);
        let at_zero = s.eval(&[z(0.0, 0.0), z(0.0, 0.0)]).unwrap();
        for (a, b) in at_zero.iter().zip(&lam) {
            assert!((a - b).norm() < 1e-12);
        }
        let closed = m.eval(&lam).unwrap();
        assert!(point_norm(&closed) < 1e-15);
    }

    #[test]
    fn rational_evaluation_matches_closed_form() {
        let lam = [z(0.2, 0.1), z(-0.3, 0.25)];
        let m = MoebiusParams::new(&lam).unwrap();
        let x = [z(0.1, -0.3), z(0.2, 0.2)];
        let closed = m.eval(&x).unwrap();
        for (j, r) in m.rational_components(60).iter().enumerate() {
            assert!((r.eval_scalar(&x).unwrap() - closed[j]).norm() < 1e-13);
        }
        let s = m.symbol(8).unwrap();
        let y = [z(0.01, 0.0), z(0.0, 0.02)];
        for j in 0..2 {
            let direct = eval_scalar(s.component(j), &y).unwrap();
            assert!((direct - m.eval(&y).unwrap()[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn coefficient_blocks_decay_geometrically() {
        let lam = [z(0.4, 0.2), z(0.1, -0.3)];
        let m = MoebiusParams::new(&lam).unwrap();
        let s = m.symbol(7).unwrap();
        let r = point_norm(&lam);
        let ds = crate::linalg::op_norm(m.delta_lambda_star());
        for k in 1..=7 {
            let block: f64 = s
                .components()
                .iter()
                .map(|c| c.homogeneous(k).l2_norm().powi(2))
                .sum::<f64>()
                .sqrt();
            assert!(block <= m.delta_lambda() * r.powi(k as i32 - 1) * ds * 2f64.sqrt() + 1e-14);
        }
    }

    #[test]
    fn involution_at_scalar_level() {
        let lam = [z(0.35, -0.1), z(0.2, 0.3)];
        let m = MoebiusParams::new(&lam).unwrap();
        for p in crate::sampling::halton_ball(2, 100, 0.6) {
            let back = m.eval(&m.eval(&p).unwrap()).unwrap();
            for (a, b) in back.iter().zip(&p) {
                assert!((a - b).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn involution_on_low_degree_coefficients() {
        let lam = [z(0.3, 0.0), z(0.1, 0.0)];
        let m = MoebiusParams::new(&lam).unwrap();
        let inner = m.symbol(3).unwrap();
        let twice = m.compose_after(&inner, 40, 60).unwrap();
        let id = SymbolTuple::identity(2, 3).unwrap();
        for j in 0..2 {
            assert!(twice.component(j).max_abs_diff(id.component(j), 3) < 1e-8);
        }
    }

    #[test]
    fn unitary_symbols() {
        let swap = DMatrix::from_row_slice(2, 2, &[z(0.0, 0.0), z(1.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)]);
        let s = phi_unitary(&swap, 3).unwrap();
        assert_eq!(s.component(0).coefficient(&Word::letter(1)), z(1.0, 0.0));
        assert_eq!(s.component(1).coefficient(&Word::letter(0)), z(1.0, 0.0));
        let t = std::f64::consts::FRAC_PI_3;
        let d = DMatrix::from_diagonal(&DVector::from_vec(vec![C64::from_polar(1.0, t), z(1.0, 0.0)]));
        let s = phi_unitary(&d, 2).unwrap();
        assert!((s.component(0).coefficient(&Word::letter(0)) - C64::from_polar(1.0, t)).norm() < 1e-15);
        assert_eq!(s.linear_matrix(), &d.transpose());
        let back = compose_symbols(&s, &phi_unitary(&d.adjoint(), 2).unwrap(), 2).unwrap();
        assert!(back.component(0).max_abs_diff(SymbolTuple::identity(2, 2).unwrap().component(0), 2) < 1e-15);
        let bad = DMatrix::from_diagonal_element(2, 2, z(0.5, 0.0));
        assert!(matches!(phi_unitary(&bad, 2), Err(Error::NotUnitary { .. })));
        assert!(phi_contraction(&bad, 2).is_ok());
        assert!(matches!(
            MoebiusParams::new(&[z(0.8, 0.0), z(0.0, 0.6)]),
            Err(Error::OutsideBall { .. })
        ));
    }

    #[test]
    fn e1_identities() {
        let lam = [z(0.3, 0.1), z(-0.2, 0.2)];
        let zero = [z(0.0, 0.0), z(0.0, 0.0)];
        let d = identity_e1_defect(&lam, &zero, &zero).unwrap();
        assert!(d.scalar < 1e-15 && d.matrix < 1e-14);
        let d = identity_e1_defect(&lam, &lam, &lam).unwrap();
        assert!(d.scalar < 1e-10 && d.matrix < 1e-10);
        let pts = crate::sampling::random_ball(2, 40, 0.5, 3);
        for w in pts.chunks(2) {
            let d = identity_e1_defect(&lam, &w[0], &w[1]).unwrap();
            assert!(d.scalar < 1e-12 && d.matrix < 1e-12);
        }
    }

    #[test]
    fn automorphism_evaluation() {
        let u = DMatrix::from_row_slice(2, 2, &[z(0.0, 0.0), z(1.0, 0.0), z(1.0, 0.0), z(0.0, 0.0)]);
        let lam = vec![z(0.2, 0.0), z(0.0, 0.1)];
        let a = AutomorphismSpec::new(lam.clone(), u.clone()).unwrap();
        let x = [z(0.1, 0.1), z(-0.3, 0.0)];
        let direct = MoebiusParams::new(&lam).unwrap().eval(&[x[1], x[0]]).unwrap();
        assert_eq!(a.eval(&x).unwrap(), direct);
        let s = a.symbol(6).unwrap();
        let y = [z(0.02, 0.0), z(0.0, -0.01)];
        let sv = s.eval(&y).unwrap();
        let cv = a.eval(&y).unwrap();
        for j in 0..2 {
            assert!((sv[j] - cv[j]).norm() < 1e-9);
        }
    }
}
