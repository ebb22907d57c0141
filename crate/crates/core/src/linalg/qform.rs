//! Quadratic forms over F_p in upper-triangular storage.
//!
//! Q(x) = sum_{i<=j} coeffs[i][j] x_i x_j. Storing the upper triangle
//! avoids dividing by 2 at construction time; the symmetric bilinear form
//! B(x, y) = Q(x+y) - Q(x) - Q(y) is available as the derived Gram view.

use crate::error::{Error, Result};
use crate::field::PrimeField;

use super::{FpMatrix, FpSubspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    dim: usize,
    coeffs: FpMatrix,
}

impl QuadraticForm {
    /// Wraps an upper-triangular coefficient matrix.
    pub fn new(coeffs: FpMatrix) -> Result<Self> {
        if !coeffs.is_square() {
            return Err(Error::dim("coefficient matrix must be square"));
        }
        for i in 0..coeffs.rows() {
            for j in 0..i {
                if coeffs.at(i, j) != 0 {
                    return Err(Error::invalid(
                        "quadratic form",
                        "coefficients below the diagonal must vanish",
                    ));
                }
            }
        }
        Ok(QuadraticForm {
            dim: coeffs.rows(),
            coeffs,
        })
    }

    pub fn zero(field: PrimeField, dim: usize) -> Self {
        QuadraticForm {
            dim,
            coeffs: FpMatrix::zeros(field, dim, dim),
        }
    }

    /// Folds an arbitrary square matrix N into canonical upper-triangular
    /// form representing the same values x N x^T.
    pub fn from_square_matrix(n: &FpMatrix) -> Result<Self> {
        if !n.is_square() {
            return Err(Error::dim("matrix must be square"));
        }
        let f = n.field();
        let d = n.rows();
        let mut c = FpMatrix::zeros(f, d, d);
        for i in 0..d {
            c.set(i, i, n.at(i, i));
            for j in (i + 1)..d {
                c.set(i, j, f.add(n.at(i, j), n.at(j, i)));
            }
        }
        Ok(QuadraticForm { dim: d, coeffs: c })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.coeffs.field()
    }

    #[inline]
    pub fn coeffs(&self) -> &FpMatrix {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize, j: usize) -> u64 {
        self.coeffs.at(i, j)
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: u64) {
        assert!(i <= j, "only the upper triangle is stored");
        self.coeffs.set(i, j, v);
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_zero()
    }

    pub fn add(&self, other: &QuadraticForm) -> Result<QuadraticForm> {
        if self.dim != other.dim {
            return Err(Error::dim("forms of different dimension"));
        }
        Ok(QuadraticForm {
            dim: self.dim,
            coeffs: self.coeffs.add(&other.coeffs),
        })
    }

    pub fn eval(&self, x: &[u64]) -> Result<u64> {
        if x.len() != self.dim {
            return Err(Error::dim(format!(
                "vector length {} does not match form dimension {}",
                x.len(),
                self.dim
            )));
        }
        let f = self.field();
        let mut acc = 0;
        for i in 0..self.dim {
            if x[i] == 0 {
                continue;
            }
            for j in i..self.dim {
                let c = self.coeffs.at(i, j);
                if c != 0 {
                    acc = f.add(acc, f.mul(c, f.mul(x[i], x[j])));
                }
            }
        }
        Ok(acc)
    }

    /// Gram matrix of the associated symmetric bilinear form, C + C^T.
    pub fn gram(&self) -> FpMatrix {
        self.coeffs.add(&self.coeffs.transpose())
    }

    /// Pullback along the rows of `m`: returns q' with q'(t) = q(t * m).
    pub fn pullback(&self, m: &FpMatrix) -> Result<QuadraticForm> {
        if m.cols() != self.dim {
            return Err(Error::dim("pullback matrix must map into the form's space"));
        }
        let n = m.mul(&self.coeffs).mul(&m.transpose());
        Self::from_square_matrix(&n)
    }

    /// Restriction to a subspace in its canonical basis coordinates.
    pub fn restrict(&self, s: &FpSubspace) -> Result<QuadraticForm> {
        if s.ambient_dim() != self.dim {
            return Err(Error::dim("subspace ambient must match form dimension"));
        }
        self.pullback(s.basis())
    }

    /// Splits the coordinates 0..k | k..dim into the pure part on the
    /// first factor, the cross-coefficient matrix L with
    /// Q(x, y) = Q(x, 0) + sum_j x_j (L y^T)_j + Q(0, y), and the pure
    /// part on the second factor.
    pub fn split(&self, k: usize) -> (QuadraticForm, FpMatrix, QuadraticForm) {
        assert!(k <= self.dim);
        let pure_x = QuadraticForm {
            dim: k,
            coeffs: self.coeffs.block(0, k, 0, k),
        };
        let cross = self.coeffs.block(0, k, k, self.dim);
        let pure_y = QuadraticForm {
            dim: self.dim - k,
            coeffs: self.coeffs.block(k, self.dim, k, self.dim),
        };
        (pure_x, cross, pure_y)
    }

    /// The form seen through a coordinate relabeling: q'(t) = q(t') with
    /// t'[perm[i]] = t[i]. Together with [`QuadraticForm::split`] this
    /// realizes the pure/cross/pure decomposition for any coordinate
    /// bipartition, not just a prefix.
    pub fn permuted(&self, perm: &[usize]) -> QuadraticForm {
        assert_eq!(perm.len(), self.dim);
        let m = FpMatrix::permutation(self.field(), perm);
        self.pullback(&m).expect("permutation matrices are square")
    }

    /// Embeds the form into a larger space at a coordinate offset.
    pub fn embed(&self, ambient: usize, offset: usize) -> QuadraticForm {
        assert!(offset + self.dim <= ambient);
        let mut c = FpMatrix::zeros(self.field(), ambient, ambient);
        for i in 0..self.dim {
            for j in i..self.dim {
                c.set(offset + i, offset + j, self.coeffs.at(i, j));
            }
        }
        QuadraticForm {
            dim: ambient,
            coeffs: c,
        }
    }

    /// Adds c * (l . y)^2 into the form, with l a linear functional.
    pub fn add_scaled_square(&mut self, l: &[u64], c: u64) {
        assert_eq!(l.len(), self.dim);
        let f = self.field();
        for i in 0..self.dim {
            if l[i] == 0 {
                continue;
            }
            let d = self.coeffs.at(i, i);
            self.coeffs
                .set(i, i, f.add(d, f.mul(c, f.mul(l[i], l[i]))));
            for j in (i + 1)..self.dim {
                if l[j] == 0 {
                    continue;
                }
                let cur = self.coeffs.at(i, j);
                let term = f.mul(c, f.mul(2 % f.modulus(), f.mul(l[i], l[j])));
                self.coeffs.set(i, j, f.add(cur, term));
            }
        }
    }
}
