//! Closed-form evaluation of Gauss sums F(y) = sum_{x in X} Exp(Q(x, y)).
//!
//! The sum collapses to c * Exp(R(y)) on a constraint subspace Z (zero
//! off it): split Q into pure-x, cross and pure-y parts, diagonalize the
//! pure-x part by congruence, complete squares where the diagonal
//! coefficient is nonzero (each contributing a one-dimensional classical
//! Gauss sum), and convert the residual linear-in-x characters into the
//! constraints cutting out Z. The constant c is kept exact as
//! i^q * p^{h/2}; classical Gauss sums have modulus sqrt(p) exactly, and
//! exactness here sharpens every downstream tolerance.

use num_complex::Complex64;

use crate::error::Result;
use crate::field::PrimeField;
use crate::linalg::{FpMatrix, FpSubspace, QuadraticForm};

/// Exact scalar of the form i^q * p^{h/2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GaussScalar {
    p: u64,
    quarter_turns: u8,
    half_powers: u32,
}

impl GaussScalar {
    pub fn one(field: PrimeField) -> Self {
        GaussScalar {
            p: field.modulus(),
            quarter_turns: 0,
            half_powers: 0,
        }
    }

    /// Multiplies by p.
    pub fn times_p(&mut self) {
        self.half_powers += 2;
    }

    /// Multiplies by the classical quadratic Gauss sum
    /// gamma(a) = legendre(a) * gamma(1), with gamma(1) = sqrt(p) for
    /// p = 1 mod 4 and i sqrt(p) for p = 3 mod 4.
    pub fn times_gamma(&mut self, field: PrimeField, a: u64) {
        debug_assert_eq!(self.p, field.modulus());
        debug_assert!(!a.is_multiple_of(self.p));
        self.half_powers += 1;
        if self.p % 4 == 3 {
            self.quarter_turns = (self.quarter_turns + 1) % 4;
        }
        if field.legendre(a) == -1 {
            self.quarter_turns = (self.quarter_turns + 2) % 4;
        }
    }

    /// Exact modulus p^{h/2}.
    pub fn modulus(&self) -> f64 {
        (self.p as f64).powf(self.half_powers as f64 / 2.0)
    }

    pub fn to_complex(&self) -> Complex64 {
        let unit = match self.quarter_turns {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        unit * self.modulus()
    }
}

/// Result of the closed-form evaluation on X + Y with dim X = k:
/// F(y) = c * Exp(r(y)) for y in z, and 0 for y outside z.
#[derive(Debug, Clone)]
pub struct GaussSumResult {
    pub z: FpSubspace,
    pub c: GaussScalar,
    pub r: QuadraticForm,
}

/// Congruence diagonalization of a symmetric matrix: returns (e, d) with
/// e * s * e^T = diag(d).
pub fn diagonalize_symmetric(s: &FpMatrix) -> (FpMatrix, Vec<u64>) {
    assert!(s.is_symmetric());
    let f = s.field();
    let k = s.rows();
    let mut m = s.clone();
    let mut e = FpMatrix::identity(f, k);

    // symmetric row+column elimination; every row operation applied to m
    // is mirrored on columns and accumulated into e
    let row_add = |m: &mut FpMatrix, e: &mut FpMatrix, dst: usize, src: usize, c: u64| {
        for j in 0..k {
            let v = f.add(m.at(dst, j), f.mul(c, m.at(src, j)));
            m.set(dst, j, v);
        }
        for i in 0..k {
            let v = f.add(m.at(i, dst), f.mul(c, m.at(i, src)));
            m.set(i, dst, v);
        }
        for j in 0..k {
            let v = f.add(e.at(dst, j), f.mul(c, e.at(src, j)));
            e.set(dst, j, v);
        }
    };
    let row_swap = |m: &mut FpMatrix, e: &mut FpMatrix, a: usize, b: usize| {
        if a == b {
            return;
        }
        for j in 0..k {
            let (x, y) = (m.at(a, j), m.at(b, j));
            m.set(a, j, y);
            m.set(b, j, x);
        }
        for i in 0..k {
            let (x, y) = (m.at(i, a), m.at(i, b));
            m.set(i, a, y);
            m.set(i, b, x);
        }
        for j in 0..k {
            let (x, y) = (e.at(a, j), e.at(b, j));
            e.set(a, j, y);
            e.set(b, j, x);
        }
    };

    for col in 0..k {
        if m.at(col, col) == 0 {
            if let Some(j) = ((col + 1)..k).find(|&j| m.at(j, j) != 0) {
                row_swap(&mut m, &mut e, col, j);
            } else if let Some((i, j)) = (col..k)
                .flat_map(|i| (col..k).map(move |j| (i, j)))
                .find(|&(i, j)| i != j && m.at(i, j) != 0)
            {
                // m[i][i] becomes 2 m[i][j] != 0 since p is odd
                row_add(&mut m, &mut e, i, j, 1);
                row_swap(&mut m, &mut e, col, i);
            } else {
                break; // remaining block is zero
            }
        }
        let pivot = m.at(col, col);
        let inv = f.inv(pivot).expect("pivot nonzero");
        for r in (col + 1)..k {
            if m.at(r, col) != 0 {
                let c = f.neg(f.mul(m.at(r, col), inv));
                row_add(&mut m, &mut e, r, col, c);
            }
        }
    }
    let d = (0..k).map(|i| m.at(i, i)).collect();
    (e, d)
}

/// Closed-form Gauss sum over the first `dim_x` coordinates of q's space.
pub fn gauss_sum_closed_form(q: &QuadraticForm, dim_x: usize) -> Result<GaussSumResult> {
    let f = q.field();
    let dim_y = q.dim() - dim_x;
    let (qx, cross, qy) = q.split(dim_x);

    // diagonalize the pure-x part: Q_x(z P) = sum_i (d_i / 2) z_i^2
    let (p_mat, d) = diagonalize_symmetric(&qx.gram());
    let half = f.half();
    let pl = p_mat.mul(&cross); // row i carries the linear form l_i(y)

    let mut c = GaussScalar::one(f);
    let mut r = qy.clone();
    let mut constraints: Vec<Vec<u64>> = Vec::new();
    for i in 0..dim_x {
        let a = f.mul(half, d[i]);
        let l_i = pl.row(i).to_vec();
        if a == 0 {
            // sum_z Exp(z * l_i(y)) = p * [l_i(y) = 0]
            c.times_p();
            constraints.push(l_i);
        } else {
            // sum_z Exp(a z^2 + z b) = Exp(-b^2 / (4a)) gamma(a)
            c.times_gamma(f, a);
            let coeff = f.neg(f.inv(f.mul(4 % f.modulus(), a))?);
            r.add_scaled_square(&l_i, coeff);
        }
    }
    let z = if constraints.is_empty() {
        FpSubspace::full(f, dim_y)
    } else {
        FpSubspace::from_rows(f, dim_y, &constraints)?.annihilator()
    };
    Ok(GaussSumResult { z, c, r })
}
