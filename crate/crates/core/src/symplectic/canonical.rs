//! Symplectic canonicalization of isotropic subspaces.
//!
//! Any isotropic M admits g in Sp with M * g a coordinate subspace of
//! V^c. The construction is a symplectic Gram-Schmidt: pair each basis
//! vector of M with a dual partner, complete the perpendicular space to
//! a symplectic basis, and send everything to coordinate vectors.

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, FpSubspace};

use super::element::SymplecticElement;
use super::{orthocomplement, SubspaceKind, SymplecticSpace};

/// Solves for a vector u with prescribed symplectic pairings against the
/// rows of `constraints`: {constraints[i], u} = target[i].
fn solve_pairings(
    space: SymplecticSpace,
    constraints: &FpMatrix,
    target: &[u64],
) -> Result<Vec<u64>> {
    // {c, u} = c * Omega * u^T, so the system is (C * Omega) u^T = t.
    let a = constraints.mul(&space.gram());
    a.transpose()
        .solve_row(target)
        .ok_or_else(|| Error::invalid("pairing system", "no solution; vectors not independent"))
}

/// Completes a nondegenerate (symplectic) subspace to hyperbolic pairs
/// (p_i, q_i) with {p_i, q_j} = delta_ij and all other pairings zero.
pub fn symplectic_basis(sub: &FpSubspace, space: SymplecticSpace) -> Result<Vec<(Vec<u64>, Vec<u64>)>> {
    let f = space.field();
    let mut pairs: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    let mut current = sub.clone();
    while !current.is_zero() {
        let w = current.basis().row(0).to_vec();
        // a partner with {w, z} != 0 exists since the form is nondegenerate
        let partner = current
            .basis()
            .row_vectors()
            .map(|r| r.to_vec())
            .find(|r| space.form(&w, r).unwrap_or(0) != 0)
            .ok_or(Error::invalid(
                "subspace",
                "form degenerate on the given subspace",
            ))?;
        let scale = f.inv(space.form(&w, &partner)?)?;
        let z: Vec<u64> = partner.iter().map(|&x| f.mul(x, scale)).collect();
        let span_wz = FpSubspace::from_rows(f, space.dim(), &[w.clone(), z.clone()])?;
        let perp = space.lozenge(&span_wz)?;
        current = current.intersect(&perp)?;
        pairs.push((w, z));
    }
    Ok(pairs)
}

/// Finds g in Sp and coordinate indices (1-based) such that m * g is the
/// coordinate subspace of V^c spanned by { e_alpha^c : alpha in indices }.
pub fn canonicalize_isotropic(
    m: &FpSubspace,
    space: SymplecticSpace,
) -> Result<(SymplecticElement, Vec<usize>)> {
    if m.ambient_dim() != space.dim() {
        return Err(Error::dim("subspace must live in V_2n"));
    }
    match space.classify(m)? {
        SubspaceKind::Isotropic | SubspaceKind::Lagrangian => {}
        _ if m.is_zero() => {}
        _ => return Err(Error::NotIsotropic),
    }
    let f = space.field();
    let n = space.half_dim();
    let r = m.dim();

    // Fast path: already a coordinate subspace of V^c.
    let c_coords: Vec<usize> = m
        .basis()
        .row_vectors()
        .filter_map(|row| {
            let nonzero: Vec<usize> = (0..2 * n).filter(|&j| row[j] != 0).collect();
            match nonzero.as_slice() {
                [j] if *j >= n && row[*j] == 1 => Some(*j - n + 1),
                _ => None,
            }
        })
        .collect();
    if c_coords.len() == r {
        return Ok((SymplecticElement::identity(space), c_coords));
    }

    // Dual partners: {m_i, u_j} = delta_ij, {u_i, u_j} = 0.
    let basis_rows: Vec<Vec<u64>> = m.basis().row_vectors().map(|v| v.to_vec()).collect();
    let mut duals: Vec<Vec<u64>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut constraint_rows = basis_rows.clone();
        constraint_rows.extend(duals.iter().cloned());
        let constraints = FpMatrix::from_rows(f, &constraint_rows)?;
        let mut target = vec![0; constraint_rows.len()];
        target[i] = 1;
        duals.push(solve_pairings(space, &constraints, &target)?);
    }

    // Symplectic complement of span{m, u} and its hyperbolic pairs.
    let mut span_rows = basis_rows.clone();
    span_rows.extend(duals.iter().cloned());
    let w_span = FpSubspace::from_rows(f, space.dim(), &span_rows)?;
    let perp = space.lozenge(&w_span)?;
    let pairs = symplectic_basis(&perp, space)?;
    debug_assert_eq!(pairs.len(), n - r);

    // Source basis -> target coordinate basis with identical Gram matrix:
    // m_i -> e_i^c, u_i -> -e_i^d, p_j -> e_{r+j}^d, q_j -> e_{r+j}^c.
    let mut source_rows = Vec::with_capacity(2 * n);
    let mut target_rows = Vec::with_capacity(2 * n);
    let unit = |idx: usize, neg: bool| -> Vec<u64> {
        let mut v = vec![0; 2 * n];
        v[idx] = if neg { f.neg(1) } else { 1 };
        v
    };
    for (i, row) in basis_rows.iter().enumerate() {
        source_rows.push(row.clone());
        target_rows.push(unit(n + i, false));
    }
    for (i, row) in duals.iter().enumerate() {
        source_rows.push(row.clone());
        target_rows.push(unit(i, true));
    }
    for (j, (p, q)) in pairs.iter().enumerate() {
        source_rows.push(p.clone());
        target_rows.push(unit(r + j, false));
        source_rows.push(q.clone());
        target_rows.push(unit(n + r + j, false));
    }
    let b = FpMatrix::from_rows(f, &source_rows)?;
    let t = FpMatrix::from_rows(f, &target_rows)?;
    let g_mat = b.inverse()?.mul(&t);
    let g = SymplecticElement::new(space, g_mat)?;
    Ok((g, (1..=r).collect()))
}

/// The symplectic quotient X / X^loz of a coisotropic subspace,
/// presented on a complement basis of the radical with the induced form
/// recomputed, not assumed.
#[derive(Debug, Clone)]
pub struct CoisotropicQuotient {
    space: SymplecticSpace,
    radical: FpSubspace,
    rep_rows: FpMatrix,
    gram: FpMatrix,
}

impl CoisotropicQuotient {
    pub fn new(x: &FpSubspace, space: SymplecticSpace) -> Result<Self> {
        let radical = space.lozenge(x)?;
        if !x.contains(&radical) {
            return Err(Error::invalid("subspace", "not coisotropic"));
        }
        let rep_rows = radical.complement_within(x)?;
        let t = rep_rows.rows();
        let mut gram = FpMatrix::zeros(space.field(), t, t);
        for i in 0..t {
            for j in 0..t {
                gram.set(i, j, space.form(rep_rows.row(i), rep_rows.row(j))?);
            }
        }
        Ok(CoisotropicQuotient {
            space,
            radical,
            rep_rows,
            gram,
        })
    }

    /// Dimension of the quotient (always even).
    pub fn dim(&self) -> usize {
        self.rep_rows.rows()
    }

    /// Induced symplectic Gram matrix on the representative basis.
    pub fn gram(&self) -> &FpMatrix {
        &self.gram
    }

    /// Image of a subspace S of X in quotient coordinates.
    pub fn image_of(&self, s: &FpSubspace) -> Result<FpSubspace> {
        let f = self.space.field();
        let t = self.rep_rows.rows();
        let stacked = self.radical.basis().vstack(&self.rep_rows);
        let mut rows = Vec::new();
        for v in s.basis().row_vectors() {
            let coords = stacked.solve_row(v).ok_or_else(|| {
                Error::invalid("subspace", "vector outside the coisotropic space")
            })?;
            rows.push(coords[self.radical.dim()..].to_vec());
        }
        FpSubspace::from_rows(f, t, &rows)
    }

    /// Orthocomplement inside the quotient with respect to the induced form.
    pub fn orthocomplement_in_quotient(&self, k: &FpSubspace) -> FpSubspace {
        orthocomplement(k, &self.gram)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::symplectic::element::random_element;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(p: u64, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(PrimeField::new(p).unwrap(), n)
    }

    fn random_isotropic(
        s: SymplecticSpace,
        dim: usize,
        rng: &mut ChaCha8Rng,
    ) -> FpSubspace {
        // coordinate isotropic moved by a random group element
        let coords: Vec<usize> = (0..dim).map(|i| s.half_dim() + i).collect();
        let seed = FpSubspace::coordinate(s.field(), s.dim(), &coords);
        let g = random_element(s, rng);
        seed.map_through(g.matrix())
    }

    #[test]
    fn coordinate_subspace_is_fixed_point() {
        let s = space(3, 2);
        let m = FpSubspace::coordinate(s.field(), 4, &[2, 3]);
        let (g, idx) = canonicalize_isotropic(&m, s).unwrap();
        assert!(g.is_identity());
        assert_eq!(idx, vec![1, 2]);
    }

    #[test]
    fn d_line_moves_into_c_part() {
        let s = space(3, 1);
        let m = FpSubspace::coordinate(s.field(), 2, &[0]); // span{e_1^d}
        let (g, idx) = canonicalize_isotropic(&m, s).unwrap();
        let image = m.map_through(g.matrix());
        assert!(s.c_part().contains(&image));
        assert_eq!(idx, vec![1]);
        assert_eq!(image, FpSubspace::coordinate(s.field(), 2, &[1]));
    }

    #[test]
    fn random_isotropic_subspaces_canonicalize() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..100 {
            let dim = rng.random_range(0..=2usize);
            let m = random_isotropic(s, dim, &mut rng);
            let (g, idx) = canonicalize_isotropic(&m, s).unwrap();
            assert_eq!(idx.len(), m.dim());
            let image = m.map_through(g.matrix());
            let expected = FpSubspace::coordinate(
                s.field(),
                s.dim(),
                &idx.iter().map(|&a| s.half_dim() + a - 1).collect::<Vec<_>>(),
            );
            assert_eq!(image, expected);
        }
    }

    #[test]
    fn non_isotropic_input_is_rejected() {
        let s = space(3, 1);
        let full = FpSubspace::full(s.field(), 2);
        assert!(matches!(
            canonicalize_isotropic(&full, s),
            Err(Error::NotIsotropic)
        ));
    }

    #[test]
    fn quotient_images_are_mutual_orthocomplements() {
        // Orthogonality statement behind composition closure: for
        // coisotropic X, Y the images of X cap Y and X cap Y^loz in
        // X/X^loz are each other's orthocomplements.
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let dx = rng.random_range(0..=2usize);
            let dy = rng.random_range(0..=2usize);
            let x = s.lozenge(&random_isotropic(s, dx, &mut rng)).unwrap();
            let y = s.lozenge(&random_isotropic(s, dy, &mut rng)).unwrap();
            let q = CoisotropicQuotient::new(&x, s).unwrap();

            let k = q.image_of(&x.intersect(&y).unwrap()).unwrap();
            let l = q
                .image_of(&x.intersect(&s.lozenge(&y).unwrap()).unwrap())
                .unwrap();
            assert_eq!(q.orthocomplement_in_quotient(&k), l);
            assert_eq!(q.orthocomplement_in_quotient(&l), k);
        }
    }
}
