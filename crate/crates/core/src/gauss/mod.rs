//! Gaussian operators G(H; Q), their closed-form calculus, the
//! intertwining solver realizing W(T) for perfect Lagrangian relations,
//! and the dictionary between relations and Gaussians.
//!
//! A Gaussian operator l^2(F_p^mu) -> l^2(F_p^nu) has matrix entry
//! (x, y) = scale * Exp(Q(y | x)) when (y | x) lies in the support
//! subspace H of F_p^{mu+nu} (input coordinates first), and 0 otherwise.

mod compose;
mod dictionary;
mod sum;
mod weil;

pub use compose::gaussian_compose;
pub use dictionary::{gaussian_from_operator, relation_from_gaussian};
pub use sum::{diagonalize_symmetric, gauss_sum_closed_form, GaussScalar, GaussSumResult};
pub use weil::{adjoint_law_check, relation_cocycle, solve_intertwining, weil_of_relation,
               IntertwiningSolution};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{FpSubspace, QuadraticForm};
use crate::operator::{point_index, ComplexOperator};

/// Symbolic form of a Gaussian operator: support subspace H inside
/// V_mu^d + V_nu^d, a quadratic form Q on the ambient space (only its
/// restriction to H matters; ambient storage makes the splitting used by
/// the dictionary mechanical), and a complex scale.
#[derive(Debug, Clone)]
pub struct GaussianData {
    mu: usize,
    nu: usize,
    h: FpSubspace,
    q: QuadraticForm,
    scale: Complex64,
}

impl GaussianData {
    pub fn new(
        mu: usize,
        nu: usize,
        h: FpSubspace,
        q: QuadraticForm,
        scale: Complex64,
    ) -> Result<Self> {
        if h.ambient_dim() != mu + nu {
            return Err(Error::dim("support must live in F^(mu+nu)"));
        }
        if q.dim() != mu + nu {
            return Err(Error::dim("form must live on F^(mu+nu)"));
        }
        if h.field() != q.field() {
            return Err(Error::FieldMismatch);
        }
        Ok(GaussianData { mu, nu, h, q, scale })
    }

    /// The identity operator: diagonal support, zero form, unit scale.
    pub fn identity(field: PrimeField, n: usize) -> Self {
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut v = vec![0u64; 2 * n];
                v[i] = 1;
                v[n + i] = 1;
                v
            })
            .collect();
        GaussianData {
            mu: n,
            nu: n,
            h: FpSubspace::from_rows(field, 2 * n, &rows).expect("diagonal rows"),
            q: QuadraticForm::zero(field, 2 * n),
            scale: Complex64::new(1.0, 0.0),
        }
    }

    #[inline]
    pub fn mu(&self) -> usize {
        self.mu
    }

    #[inline]
    pub fn nu(&self) -> usize {
        self.nu
    }

    #[inline]
    pub fn support(&self) -> &FpSubspace {
        &self.h
    }

    #[inline]
    pub fn form(&self) -> &QuadraticForm {
        &self.q
    }

    #[inline]
    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.q.field()
    }

    /// The dense matrix of the operator.
    pub fn matrix(&self) -> Result<ComplexOperator> {
        let f = self.field();
        let p = f.modulus();
        let mut op = ComplexOperator::zeros(p, self.nu, self.mu);
        for y in crate::operator::points(p, self.mu) {
            let col = point_index(p, &y);
            for x in crate::operator::points(p, self.nu) {
                let mut u = y.clone();
                u.extend_from_slice(&x);
                if self.h.contains_vector(&u) {
                    let val = self.scale * f.character(self.q.eval(&u)?);
                    op.set(point_index(p, &x), col, val);
                }
            }
        }
        Ok(op)
    }
}

/// Extends a form expressed in a subspace's canonical basis coordinates
/// to the ambient space by reading coordinates off the pivot columns:
/// for h = lambda * basis, the pivot entries of h recover lambda exactly.
pub(crate) fn extend_form_to_ambient(
    q_on_basis: &QuadraticForm,
    sub: &FpSubspace,
) -> QuadraticForm {
    let ambient = sub.ambient_dim();
    let pivots: Vec<usize> = sub
        .basis()
        .row_vectors()
        .map(|r| r.iter().position(|&v| v != 0).expect("basis rows nonzero"))
        .collect();
    debug_assert_eq!(pivots.len(), q_on_basis.dim());
    let mut out = QuadraticForm::zero(q_on_basis.field(), ambient);
    for i in 0..q_on_basis.dim() {
        for j in i..q_on_basis.dim() {
            out.set_coeff(pivots[i], pivots[j], q_on_basis.coeff(i, j));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::FpMatrix;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn identity_gaussian_is_identity_matrix() {
        for n in [0usize, 1, 2] {
            let g = GaussianData::identity(f(3), n);
            let m = g.matrix().unwrap();
            let id = ComplexOperator::identity(3, n);
            assert!(m.sub(&id).unwrap().frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn full_support_zero_form_is_all_ones() {
        let field = f(3);
        let g = GaussianData::new(
            1,
            1,
            FpSubspace::full(field, 2),
            QuadraticForm::zero(field, 2),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let m = g.matrix().unwrap();
        for r in 0..3usize {
            for c in 0..3usize {
                assert!((m.at(r, c) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn diagonal_support_with_square_form() {
        // H = graph of x = y, Q = x^2 (output coordinate): diag(1, w, w)
        let field = f(3);
        let mut coeffs = FpMatrix::zeros(field, 2, 2);
        coeffs.set(1, 1, 1);
        let g = GaussianData::new(
            1,
            1,
            FpSubspace::from_rows(field, 2, &[vec![1, 1]]).unwrap(),
            QuadraticForm::new(coeffs).unwrap(),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let m = g.matrix().unwrap();
        let want = [field.character(0), field.character(1), field.character(1)];
        for x in 0..3usize {
            for y in 0..3usize {
                let expect = if x == y { want[x] } else { Complex64::new(0.0, 0.0) };
                assert!((m.at(x, y) - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn extend_form_restricts_back() {
        let field = f(5);
        let sub = FpSubspace::from_rows(field, 4, &[vec![1, 0, 2, 3], vec![0, 1, 4, 0]]).unwrap();
        let mut q = QuadraticForm::zero(field, 2);
        q.set_coeff(0, 0, 3);
        q.set_coeff(0, 1, 2);
        q.set_coeff(1, 1, 4);
        let amb = extend_form_to_ambient(&q, &sub);
        for lam in crate::operator::points(5, 2) {
            let h = sub.basis().apply_row(&lam);
            assert_eq!(amb.eval(&h).unwrap(), q.eval(&lam).unwrap());
        }
    }
}
