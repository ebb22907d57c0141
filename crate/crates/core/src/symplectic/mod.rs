//! The symplectic space V_2n = V_n^d + V_n^c over F_p with the form
//! {(x,y),(x',y')} = sum_j (x_j y'_j - y_j x'_j), the group Sp(2n, F_p),
//! its generators, and canonicalization of isotropic subspaces.
//!
//! Coordinates are ordered (x_1..x_n, y_1..y_n); the x-part is the
//! "discrete" side carrying the function space l^2(F_p^n) downstream.

mod canonical;
mod decompose;
mod element;

pub use canonical::{canonicalize_isotropic, symplectic_basis, CoisotropicQuotient};
pub use decompose::decompose;
pub use element::{evaluate_word, make_generator, random_element, random_invertible,
                  GeneratorLetter, GeneratorWord, SymplecticElement};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::{FpMatrix, FpSubspace};

/// The space V_2n over F_p, identified by its half-dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SymplecticSpace {
    n: usize,
    field: PrimeField,
}

impl SymplecticSpace {
    pub fn new(field: PrimeField, n: usize) -> Self {
        SymplecticSpace { n, field }
    }

    #[inline]
    pub fn half_dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Gram matrix of the symplectic form: (0, I; -I, 0).
    pub fn gram(&self) -> FpMatrix {
        let f = self.field;
        let n = self.n;
        let mut m = FpMatrix::zeros(f, 2 * n, 2 * n);
        for i in 0..n {
            m.set(i, n + i, 1);
            m.set(n + i, i, f.neg(1));
        }
        m
    }

    /// The symplectic form {u, v}.
    pub fn form(&self, u: &[u64], v: &[u64]) -> Result<u64> {
        if u.len() != 2 * self.n || v.len() != 2 * self.n {
            return Err(Error::dim(format!(
                "vectors must have length {}",
                2 * self.n
            )));
        }
        let f = self.field;
        let mut acc = 0;
        for j in 0..self.n {
            acc = f.add(acc, f.mul(u[j], v[self.n + j]));
            acc = f.sub(acc, f.mul(u[self.n + j], v[j]));
        }
        Ok(acc)
    }

    /// Orthocomplement R^loz with respect to the symplectic form.
    pub fn lozenge(&self, r: &FpSubspace) -> Result<FpSubspace> {
        if r.ambient_dim() != 2 * self.n {
            return Err(Error::dim("subspace must live in V_2n"));
        }
        Ok(orthocomplement(r, &self.gram()))
    }

    /// Classifies a subspace relative to the form.
    pub fn classify(&self, r: &FpSubspace) -> Result<SubspaceKind> {
        let loz = self.lozenge(r)?;
        Ok(if *r == loz {
            SubspaceKind::Lagrangian
        } else if loz.contains(r) {
            SubspaceKind::Isotropic
        } else if r.contains(&loz) {
            SubspaceKind::Coisotropic
        } else if r.intersect(&loz)?.is_zero() {
            SubspaceKind::Symplectic
        } else {
            SubspaceKind::Generic
        })
    }

    /// True iff the matrix preserves the form: m * Omega * m^T = Omega.
    pub fn is_symplectic(&self, m: &FpMatrix) -> bool {
        if m.rows() != 2 * self.n || m.cols() != 2 * self.n {
            return false;
        }
        let omega = self.gram();
        m.mul(&omega).mul(&m.transpose()) == omega
    }

    /// The x-coordinate Lagrangian V^d (discrete side).
    pub fn d_part(&self) -> FpSubspace {
        FpSubspace::coordinate(self.field, 2 * self.n, &(0..self.n).collect::<Vec<_>>())
    }

    /// The y-coordinate Lagrangian V^c (compact side).
    pub fn c_part(&self) -> FpSubspace {
        FpSubspace::coordinate(
            self.field,
            2 * self.n,
            &(self.n..2 * self.n).collect::<Vec<_>>(),
        )
    }
}

/// Position of a subspace relative to the symplectic form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceKind {
    Isotropic,
    Coisotropic,
    Lagrangian,
    Symplectic,
    Generic,
}

/// Orthocomplement of a subspace with respect to an arbitrary bilinear
/// Gram matrix: { v : v * G * b^T = 0 for all basis vectors b }.
pub fn orthocomplement(r: &FpSubspace, gram: &FpMatrix) -> FpSubspace {
    let ambient = r.ambient_dim();
    assert_eq!(gram.rows(), ambient);
    if r.is_zero() {
        return FpSubspace::full(r.field(), ambient);
    }
    let constraints = gram.mul(&r.basis().transpose());
    let (ker, _) = constraints.kernel_image();
    ker
}

/// Gram matrix of the difference form {v,v'} - {w,w'} on V_2m + V_2n,
/// coordinates ordered (source | target). Perfect Lagrangian relations
/// are the maximal isotropic subspaces of this form.
pub fn difference_gram(source: SymplecticSpace, target: SymplecticSpace) -> FpMatrix {
    assert_eq!(source.field(), target.field());
    let f = source.field();
    let (dm, dn) = (source.dim(), target.dim());
    let mut g = FpMatrix::zeros(f, dm + dn, dm + dn);
    let gs = source.gram();
    let gt = target.gram();
    for i in 0..dm {
        for j in 0..dm {
            g.set(i, j, gs.at(i, j));
        }
    }
    for i in 0..dn {
        for j in 0..dn {
            g.set(dm + i, dm + j, f.neg(gt.at(i, j)));
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(p: u64, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(PrimeField::new(p).unwrap(), n)
    }

    #[test]
    fn form_examples() {
        let s = space(3, 1);
        assert_eq!(s.form(&[1, 0], &[0, 1]).unwrap(), 1);
        let s2 = space(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..5)).collect();
            assert_eq!(s2.form(&v, &v).unwrap(), 0);
        }
    }

    #[test]
    fn form_agrees_with_gram_matrix() {
        let s = space(5, 2);
        let f = s.field();
        let omega = s.gram();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let u: Vec<u64> = (0..4).map(|_| rng.random_range(0..5)).collect();
            let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..5)).collect();
            // independent evaluation of u * Omega * v^T
            let mut acc = 0;
            for i in 0..4 {
                for j in 0..4 {
                    acc = f.add(acc, f.mul(u[i], f.mul(omega.at(i, j), v[j])));
                }
            }
            assert_eq!(s.form(&u, &v).unwrap(), acc);
        }
    }

    #[test]
    fn lozenge_examples() {
        let s = space(3, 2);
        let d = s.d_part();
        assert_eq!(s.lozenge(&d).unwrap(), d);

        let zero = FpSubspace::zero(s.field(), 4);
        assert_eq!(s.lozenge(&zero).unwrap(), FpSubspace::full(s.field(), 4));

        // R = span{e_1^d}: brute force over all 81 vectors of V_4.
        let r = FpSubspace::coordinate(s.field(), 4, &[0]);
        let loz = s.lozenge(&r).unwrap();
        let full = FpSubspace::full(s.field(), 4);
        let mut members = Vec::new();
        for v in full.enumerate_vectors() {
            if s.form(&v, &[1, 0, 0, 0]).unwrap() == 0 {
                members.push(v);
            }
        }
        assert_eq!(members.len(), 27);
        for v in &members {
            assert!(loz.contains_vector(v));
        }
        assert_eq!(loz.dim(), 3);
        assert_eq!(
            loz,
            FpSubspace::coordinate(s.field(), 4, &[0, 1, 3])
        );
    }

    #[test]
    fn lozenge_is_dim_complementary_involution() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let rows: Vec<Vec<u64>> = (0..rng.random_range(0..4usize))
                .map(|_| (0..4).map(|_| rng.random_range(0..3u64)).collect())
                .collect();
            let r = FpSubspace::from_rows(s.field(), 4, &rows).unwrap();
            let loz = s.lozenge(&r).unwrap();
            assert_eq!(r.dim() + loz.dim(), 4);
            assert_eq!(s.lozenge(&loz).unwrap(), r);
        }
    }

    #[test]
    fn classify_examples() {
        let s = space(3, 2);
        assert_eq!(s.classify(&s.d_part()).unwrap(), SubspaceKind::Lagrangian);

        // span{e_1^d, e_1^c} is symplectic: the form restricts nondegenerately.
        let pair = FpSubspace::coordinate(s.field(), 4, &[0, 2]);
        assert_eq!(s.classify(&pair).unwrap(), SubspaceKind::Symplectic);

        // every line is isotropic since {v, v} = 0
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let line = FpSubspace::from_rows(s.field(), 4, &[v]).unwrap();
            if line.is_zero() {
                continue;
            }
            assert_eq!(s.classify(&line).unwrap(), SubspaceKind::Isotropic);
        }

        let full = FpSubspace::full(s.field(), 4);
        assert_eq!(s.classify(&full).unwrap(), SubspaceKind::Coisotropic);
    }

    #[test]
    fn difference_gram_blocks() {
        let sm = space(3, 1);
        let sn = space(3, 2);
        let g = difference_gram(sm, sn);
        assert_eq!(g.rows(), 6);
        // source block keeps the form, target block is negated
        assert_eq!(g.at(0, 1), 1);
        assert_eq!(g.at(1, 0), 2);
        assert_eq!(g.at(2, 4), 2);
        assert_eq!(g.at(4, 2), 1);
    }
}
