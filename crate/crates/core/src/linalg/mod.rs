//! Exact dense linear algebra over F_p.
//!
//! Vectors are rows throughout and linear maps act on the right
//! (`v -> v * g`); switching to the column convention anywhere would
//! silently transpose every cocycle computed downstream. Subspaces are
//! kept in strict reduced row echelon form so equality is syntactic.

mod qform;
mod subspace;

pub use qform::QuadraticForm;
pub use subspace::FpSubspace;

use crate::error::{Error, Result};
use crate::field::PrimeField;

/// Dense matrix over F_p, entries stored row-major and always reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMatrix {
    rows: usize,
    cols: usize,
    field: PrimeField,
    data: Vec<u64>,
}

impl FpMatrix {
    pub fn zeros(field: PrimeField, rows: usize, cols: usize) -> Self {
        FpMatrix {
            rows,
            cols,
            field,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Builds a matrix from row slices, reducing every entry mod p.
    pub fn from_rows(field: PrimeField, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::dim("rows of unequal length"));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().map(|&v| v % field.modulus()))
            .collect();
        Ok(FpMatrix {
            rows: rows.len(),
            cols,
            field,
            data,
        })
    }

    /// Signed-entry convenience constructor.
    pub fn from_signed_rows(field: PrimeField, rows: &[Vec<i64>]) -> Result<Self> {
        let reduced: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| field.elem(v)).collect())
            .collect();
        Self::from_rows(field, &reduced)
    }

    /// Permutation matrix sending row i to position `perm[i]`, i.e.
    /// `e_i * P = e_{perm[i]}`.
    pub fn permutation(field: PrimeField, perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> u64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v % self.field.modulus();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.at(i, j) == self.at(j, i)))
    }

    pub fn transpose(&self) -> FpMatrix {
        let mut t = FpMatrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.at(i, j));
            }
        }
        t
    }

    pub fn add(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        FpMatrix { data, ..*self }
    }

    pub fn sub(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.sub(a, b))
            .collect();
        FpMatrix { data, ..*self }
    }

    pub fn neg(&self) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.field.neg(a)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn scale(&self, c: u64) -> FpMatrix {
        let data = self.data.iter().map(|&a| self.field.mul(a, c)).collect();
        FpMatrix { data, ..*self }
    }

    pub fn mul(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let f = self.field;
        let mut out = FpMatrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.at(i, j), f.mul(a, other.at(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Applies the matrix to a row vector: returns `v * self`.
    pub fn apply_row(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.rows, "row vector length must match rows");
        let f = self.field;
        let mut out = vec![0; self.cols];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for j in 0..self.cols {
                out[j] = f.add(out[j], f.mul(vi, self.at(i, j)));
            }
        }
        out
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        FpMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            field: self.field,
            data,
        }
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &FpMatrix) -> FpMatrix {
        assert_eq!(self.rows, other.rows);
        let mut out = FpMatrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j));
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.at(i, j));
            }
        }
        out
    }

    /// Copies the column range `lo..hi` into a new matrix.
    pub fn col_range(&self, lo: usize, hi: usize) -> FpMatrix {
        assert!(lo <= hi && hi <= self.cols);
        let mut out = FpMatrix::zeros(self.field, self.rows, hi - lo);
        for i in 0..self.rows {
            for j in lo..hi {
                out.set(i, j - lo, self.at(i, j));
            }
        }
        out
    }

    /// Block of rows `rlo..rhi` and columns `clo..chi`.
    pub fn block(&self, rlo: usize, rhi: usize, clo: usize, chi: usize) -> FpMatrix {
        assert!(rlo <= rhi && rhi <= self.rows && clo <= chi && chi <= self.cols);
        let mut out = FpMatrix::zeros(self.field, rhi - rlo, chi - clo);
        for i in rlo..rhi {
            for j in clo..chi {
                out.set(i - rlo, j - clo, self.at(i, j));
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn scale_row(&mut self, r: usize, c: u64) {
        for j in 0..self.cols {
            let v = self.field.mul(self.at(r, j), c);
            self.set(r, j, v);
        }
    }

    /// row_i -= f * row_r
    fn row_sub_scaled(&mut self, i: usize, r: usize, f: u64) {
        for j in 0..self.cols {
            let v = self.field.sub(self.at(i, j), self.field.mul(f, self.at(r, j)));
            self.set(i, j, v);
        }
    }

    /// Reduced row echelon form: returns the row-equivalent strict RREF
    /// (zero rows at the bottom), the rank, and the pivot column indices.
    pub fn rref(&self) -> (FpMatrix, usize, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(pr) = (r..m.rows).find(|&i| m.at(i, c) != 0) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.field.inv(m.at(r, c)).expect("pivot is nonzero");
            m.scale_row(r, inv);
            for i in 0..m.rows {
                if i != r && m.at(i, c) != 0 {
                    let f = m.at(i, c);
                    m.row_sub_scaled(i, r, f);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Inverse via Gauss-Jordan; errors when singular.
    pub fn inverse(&self) -> Result<FpMatrix> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let aug = self.hstack(&FpMatrix::identity(self.field, self.rows));
        let (r, _, pivots) = aug.rref();
        // Invertible iff every pivot lands inside the original columns.
        if pivots.len() < self.rows || pivots.iter().any(|&p| p >= self.cols) {
            return Err(Error::NotInvertible);
        }
        Ok(r.col_range(self.cols, 2 * self.cols))
    }

    /// Left kernel `{ x : x * self = 0 }` and row space, as canonical
    /// subspaces of F^rows and F^cols. `dim ker + dim im = rows`.
    pub fn kernel_image(&self) -> (FpSubspace, FpSubspace) {
        let image = FpSubspace::from_matrix(self);
        // Null space of self^T read off its RREF: one basis vector per
        // free index, with pivot coordinates filled from the reduced rows.
        let (r, rank, pivots) = self.transpose().rref();
        let n = self.rows;
        let mut free: Vec<usize> = (0..n).filter(|i| !pivots.contains(i)).collect();
        free.sort_unstable();
        let mut basis = Vec::with_capacity(n - rank);
        for &fidx in &free {
            let mut v = vec![0; n];
            v[fidx] = 1;
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = self.field.neg(r.at(row, fidx));
            }
            basis.push(v);
        }
        let kernel = FpSubspace::from_rows(self.field, n, &basis).expect("kernel rows well formed");
        (kernel, image)
    }

    /// Solves `x * self = rhs` for a row vector x, if a solution exists.
    pub fn solve_row(&self, rhs: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(rhs.len(), self.cols);
        // x * self = rhs  <=>  self^T * x^T = rhs^T; eliminate on [self^T | rhs^T].
        let t = self.transpose();
        let rhs_col = FpMatrix::from_rows(self.field, &rhs.iter().map(|&v| vec![v]).collect::<Vec<_>>())
            .expect("column well formed");
        let aug = t.hstack(&rhs_col);
        let (r, _, pivots) = aug.rref();
        // Inconsistent if some pivot lands in the augmented column.
        if pivots.contains(&t.cols()) {
            return None;
        }
        let mut x = vec![0; self.rows];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.at(row, t.cols());
        }
        Some(x)
    }
}

impl std::fmt::Display for FpMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            writeln!(f, "{:?}", self.row(i))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn rref_examples() {
        let m = FpMatrix::from_rows(f(3), &[vec![2, 0], vec![0, 1]]).unwrap();
        let (r, rank, pivots) = m.rref();
        assert_eq!(r, FpMatrix::identity(f(3), 2));
        assert_eq!(rank, 2);
        assert_eq!(pivots, vec![0, 1]);

        let m = FpMatrix::from_rows(f(3), &[vec![1, 2], vec![2, 4]]).unwrap();
        let (r, rank, _) = m.rref();
        assert_eq!(r, FpMatrix::from_rows(f(3), &[vec![1, 2], vec![0, 0]]).unwrap());
        assert_eq!(rank, 1);

        let z = FpMatrix::zeros(f(5), 2, 2);
        let (r, rank, pivots) = z.rref();
        assert!(r.is_zero());
        assert_eq!(rank, 0);
        assert!(pivots.is_empty());
    }

    #[test]
    fn kernel_image_examples() {
        let id = FpMatrix::identity(f(3), 3);
        let (ker, im) = id.kernel_image();
        assert_eq!(ker.dim(), 0);
        assert_eq!(im.dim(), 3);

        let z = FpMatrix::zeros(f(3), 2, 2);
        let (ker, im) = z.kernel_image();
        assert_eq!(ker.dim(), 2);
        assert_eq!(im.dim(), 0);
    }

    #[test]
    fn kernel_matches_brute_force_over_f5() {
        // Oracle: enumerate all 25 row vectors of F_5^2.
        let field = f(5);
        let m = FpMatrix::from_rows(field, &[vec![1, 2], vec![2, 4]]).unwrap();
        let (ker, im) = m.kernel_image();
        let mut wanted = Vec::new();
        for a in 0..5 {
            for b in 0..5 {
                if m.apply_row(&[a, b]).iter().all(|&v| v == 0) {
                    wanted.push(vec![a, b]);
                }
            }
        }
        assert_eq!(wanted.len(), 5); // one-dimensional kernel
        for v in wanted {
            assert!(ker.contains_vector(&v));
        }
        assert_eq!(ker.dim(), 1);
        assert_eq!(im.dim(), 1);
        assert!(ker.contains_vector(&[3, 1]));
    }

    #[test]
    fn inverse_round_trips() {
        let field = f(7);
        let m = FpMatrix::from_rows(field, &[vec![1, 2, 0], vec![0, 1, 5], vec![3, 0, 1]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMatrix::identity(field, 3));
        assert_eq!(inv.mul(&m), FpMatrix::identity(field, 3));

        let sing = FpMatrix::from_rows(field, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn solve_row_finds_solutions() {
        let field = f(5);
        let m = FpMatrix::from_rows(field, &[vec![1, 2], vec![0, 1]]).unwrap();
        let x = m.solve_row(&[3, 4]).unwrap();
        assert_eq!(m.apply_row(&x), vec![3, 4]);
        // recompute x * m directly as a cross-check
        let prod = [
            field.add(field.mul(x[0], 1), field.mul(x[1], 0)),
            field.add(field.mul(x[0], 2), field.mul(x[1], 1)),
        ];
        assert_eq!(prod, [3, 4]);

        let sing = FpMatrix::from_rows(field, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sing.solve_row(&[0, 1]).is_none());
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(seed in 0u64..10_000) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            for p in [3u64, 5] {
                let field = f(p);
                let rows = rng.random_range(1..5usize);
                let cols = rng.random_range(1..5usize);
                let data: Vec<Vec<u64>> = (0..rows)
                    .map(|_| (0..cols).map(|_| rng.random_range(0..p)).collect())
                    .collect();
                let m = FpMatrix::from_rows(field, &data).unwrap();
                let (r1, k1, p1) = m.rref();
                let (r2, k2, p2) = r1.rref();
                prop_assert_eq!(&r1, &r2);
                prop_assert_eq!(k1, k2);
                prop_assert_eq!(p1, p2);
            }
        }
    }
}
