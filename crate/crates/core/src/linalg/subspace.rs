//! Canonical subspaces of F_p^n.
//!
//! A subspace stores its basis in strict RREF with zero rows dropped, so
//! two subspaces are equal iff their stored bases are identical. That
//! makes relation composition and all the set-level predicates cheap.

use crate::error::{Error, Result};
use crate::field::PrimeField;

use super::FpMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpSubspace {
    ambient: usize,
    basis: FpMatrix,
}

impl FpSubspace {
    pub fn zero(field: PrimeField, ambient: usize) -> Self {
        FpSubspace {
            ambient,
            basis: FpMatrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: PrimeField, ambient: usize) -> Self {
        FpSubspace {
            ambient,
            basis: FpMatrix::identity(field, ambient),
        }
    }

    /// Span of the rows of `m`, canonicalized.
    pub fn from_matrix(m: &FpMatrix) -> Self {
        let (r, rank, _) = m.rref();
        FpSubspace {
            ambient: m.cols(),
            basis: r.block(0, rank, 0, m.cols()),
        }
    }

    pub fn from_rows(field: PrimeField, ambient: usize, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ambient) {
            return Err(Error::dim(format!(
                "spanning vectors must have length {ambient}"
            )));
        }
        if rows.is_empty() {
            return Ok(Self::zero(field, ambient));
        }
        Ok(Self::from_matrix(&FpMatrix::from_rows(field, rows)?))
    }

    /// Coordinate subspace spanned by the standard basis vectors listed.
    pub fn coordinate(field: PrimeField, ambient: usize, coords: &[usize]) -> Self {
        let rows: Vec<Vec<u64>> = coords
            .iter()
            .map(|&c| {
                let mut v = vec![0; ambient];
                v[c] = 1;
                v
            })
            .collect();
        Self::from_rows(field, ambient, &rows).expect("coordinate rows well formed")
    }

    #[inline]
    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.basis.field()
    }

    /// The canonical RREF basis, one vector per row.
    #[inline]
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Coordinates of `v` in the canonical basis, or None if not a member.
    pub fn coordinates_of(&self, v: &[u64]) -> Option<Vec<u64>> {
        assert_eq!(v.len(), self.ambient);
        let f = self.field();
        let mut rem = v.to_vec();
        let mut coords = vec![0; self.dim()];
        for i in 0..self.dim() {
            // RREF: the pivot column of row i determines its coefficient.
            let pivot = self.basis.row(i).iter().position(|&x| x != 0)?;
            let c = rem[pivot];
            coords[i] = c;
            if c != 0 {
                for j in 0..self.ambient {
                    rem[j] = f.sub(rem[j], f.mul(c, self.basis.at(i, j)));
                }
            }
        }
        rem.iter().all(|&x| x == 0).then_some(coords)
    }

    pub fn contains_vector(&self, v: &[u64]) -> bool {
        self.coordinates_of(v).is_some()
    }

    pub fn contains(&self, other: &FpSubspace) -> bool {
        self.ambient == other.ambient
            && other.basis.row_vectors().all(|r| self.contains_vector(r))
    }

    fn check_compatible(&self, other: &FpSubspace) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch);
        }
        if self.ambient != other.ambient {
            return Err(Error::dim(format!(
                "ambient dimensions differ: {} vs {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    pub fn sum(&self, other: &FpSubspace) -> Result<FpSubspace> {
        self.check_compatible(other)?;
        Ok(Self::from_matrix(&self.basis.vstack(&other.basis)))
    }

    /// Intersection via the kernel of the stacked bases: a left-kernel row
    /// (u | w) means u*A = -w*B lies in both spaces.
    pub fn intersect(&self, other: &FpSubspace) -> Result<FpSubspace> {
        self.check_compatible(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field(), self.ambient));
        }
        let stacked = self.basis.vstack(&other.basis);
        let (ker, _) = stacked.kernel_image();
        let rows: Vec<Vec<u64>> = ker
            .basis
            .row_vectors()
            .map(|k| {
                let u = &k[..self.dim()];
                self.basis.apply_row(u)
            })
            .collect();
        Self::from_rows(self.field(), self.ambient, &rows)
    }

    /// Annihilator under the dual pairing `[x, y] = sum x_j y_j`, inside
    /// the same coordinate space.
    pub fn annihilator(&self) -> FpSubspace {
        if self.is_zero() {
            return Self::full(self.field(), self.ambient);
        }
        // { y : basis * y^T = 0 } = left kernel of basis^T.
        let (ker, _) = self.basis.transpose().kernel_image();
        ker
    }

    /// Image of the subspace under `v -> v * m`.
    pub fn map_through(&self, m: &FpMatrix) -> FpSubspace {
        assert_eq!(m.rows(), self.ambient);
        if self.is_zero() {
            return Self::zero(self.field(), m.cols());
        }
        Self::from_matrix(&self.basis.mul(m))
    }

    /// New subspace from a column range of the basis (coordinate projection).
    pub fn project_coords(&self, lo: usize, hi: usize) -> FpSubspace {
        Self::from_matrix(&self.basis.col_range(lo, hi))
    }

    /// All p^dim member vectors; intended for desk-scale oracles only.
    pub fn enumerate_vectors(&self) -> Vec<Vec<u64>> {
        let f = self.field();
        let p = f.modulus();
        let d = self.dim();
        let count = (p as usize).pow(d as u32);
        let mut out = Vec::with_capacity(count);
        let mut coords = vec![0u64; d];
        for idx in 0..count {
            let mut rem = idx;
            for c in coords.iter_mut().rev() {
                *c = (rem % p as usize) as u64;
                rem /= p as usize;
            }
            out.push(if d == 0 {
                vec![0; self.ambient]
            } else {
                self.basis.apply_row(&coords)
            });
        }
        out
    }

    /// Rows extending `self`'s basis to a basis of `sup`; the returned rows
    /// span a complement of `self` inside `sup`.
    pub fn complement_within(&self, sup: &FpSubspace) -> Result<FpMatrix> {
        self.check_compatible(sup)?;
        if !sup.contains(self) {
            return Err(Error::invalid("subspace", "not contained in the claimed superspace"));
        }
        let mut stack = self.basis.clone();
        let mut rank = stack.rank();
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for r in sup.basis.row_vectors() {
            let candidate = stack.vstack(&FpMatrix::from_rows(self.field(), &[r.to_vec()])?);
            let new_rank = candidate.rank();
            if new_rank > rank {
                rows.push(r.to_vec());
                stack = candidate;
                rank = new_rank;
            }
        }
        if rows.is_empty() {
            return Ok(FpMatrix::zeros(self.field(), 0, self.ambient));
        }
        FpMatrix::from_rows(self.field(), &rows)
    }
}
