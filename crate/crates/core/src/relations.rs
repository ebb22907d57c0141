//! Linear relations between symplectic spaces and the perfect Lagrangian
//! calculus.
//!
//! A relation T: V_2m => V_2n is a subspace of V_2m + V_2n stored in
//! canonical RREF with coordinates ordered (source | target), so equality
//! of relations is syntactic. The composition ST follows the convention
//! "T first, then S": compose(s, t) mirrors the product ST literally.
//!
//! T is perfect Lagrangian when it is maximal isotropic for the
//! difference form {v, v'} - {w, w'}. The compactness and codiscreteness
//! conditions of the infinite-dimensional theory are vacuous at finite
//! dimension and are not checked; that is documented behavior.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, FpSubspace};
use crate::symplectic::{difference_gram, orthocomplement, random_element, SymplecticElement,
                        SymplecticSpace};

/// A linear relation T: source => target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearRelation {
    source: SymplecticSpace,
    target: SymplecticSpace,
    subspace: FpSubspace,
}

/// The four structure subspaces of a relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationStructure {
    /// T cap (X + 0), as a subspace of the source.
    pub ker: FpSubspace,
    /// Projection of T to the source.
    pub dom: FpSubspace,
    /// Projection of T to the target.
    pub im: FpSubspace,
    /// T cap (0 + Y), as a subspace of the target.
    pub indef: FpSubspace,
}

impl LinearRelation {
    pub fn new(
        source: SymplecticSpace,
        target: SymplecticSpace,
        subspace: FpSubspace,
    ) -> Result<Self> {
        if source.field() != target.field() {
            return Err(Error::FieldMismatch);
        }
        if subspace.ambient_dim() != source.dim() + target.dim() {
            return Err(Error::dim(format!(
                "relation subspace must live in F^{}",
                source.dim() + target.dim()
            )));
        }
        Ok(LinearRelation {
            source,
            target,
            subspace,
        })
    }

    pub fn from_rows(
        source: SymplecticSpace,
        target: SymplecticSpace,
        rows: &[Vec<u64>],
    ) -> Result<Self> {
        let subspace =
            FpSubspace::from_rows(source.field(), source.dim() + target.dim(), rows)?;
        Self::new(source, target, subspace)
    }

    /// Graph of a linear map given by a (2m x 2n) matrix: {(v, v A)}.
    pub fn graph_of_matrix(
        source: SymplecticSpace,
        target: SymplecticSpace,
        a: &FpMatrix,
    ) -> Result<Self> {
        if a.rows() != source.dim() || a.cols() != target.dim() {
            return Err(Error::dim("graph matrix shape must be 2m x 2n"));
        }
        let id = FpMatrix::identity(source.field(), source.dim());
        Self::new(
            source,
            target,
            FpSubspace::from_matrix(&id.hstack(a)),
        )
    }

    /// Graph of a symplectic group element.
    pub fn graph(g: &SymplecticElement) -> Self {
        Self::graph_of_matrix(g.space(), g.space(), g.matrix())
            .expect("group element matrices are square of the right size")
    }

    /// The identity relation (diagonal graph).
    pub fn identity(space: SymplecticSpace) -> Self {
        Self::graph(&SymplecticElement::identity(space))
    }

    #[inline]
    pub fn source(&self) -> SymplecticSpace {
        self.source
    }

    #[inline]
    pub fn target(&self) -> SymplecticSpace {
        self.target
    }

    #[inline]
    pub fn subspace(&self) -> &FpSubspace {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// The kernel, domain, image and indefiniteness subspaces.
    pub fn structure(&self) -> RelationStructure {
        let f = self.source.field();
        let dm = self.source.dim();
        let dn = self.target.dim();
        let src_block = FpSubspace::coordinate(
            f,
            dm + dn,
            &(0..dm).collect::<Vec<_>>(),
        );
        let tgt_block = FpSubspace::coordinate(
            f,
            dm + dn,
            &(dm..dm + dn).collect::<Vec<_>>(),
        );
        let ker_pairs = self
            .subspace
            .intersect(&src_block)
            .expect("ambient dims agree");
        let indef_pairs = self
            .subspace
            .intersect(&tgt_block)
            .expect("ambient dims agree");
        RelationStructure {
            ker: ker_pairs.project_coords(0, dm),
            dom: self.subspace.project_coords(0, dm),
            im: self.subspace.project_coords(dm, dm + dn),
            indef: indef_pairs.project_coords(dm, dm + dn),
        }
    }

    /// The pseudo-inverse: coordinates swapped, re-canonicalized.
    pub fn pseudo_inverse(&self) -> LinearRelation {
        let dm = self.source.dim();
        let dn = self.target.dim();
        let rows: Vec<Vec<u64>> = self
            .subspace
            .basis()
            .row_vectors()
            .map(|r| {
                let mut v = Vec::with_capacity(dm + dn);
                v.extend_from_slice(&r[dm..]);
                v.extend_from_slice(&r[..dm]);
                v
            })
            .collect();
        LinearRelation::from_rows(self.target, self.source, &rows)
            .expect("swapped rows stay well formed")
    }

    /// T U = { y : exists u in U with (u, y) in T }.
    pub fn apply_to_subspace(&self, u: &FpSubspace) -> Result<FpSubspace> {
        if u.ambient_dim() != self.source.dim() {
            return Err(Error::dim("subspace must live in the source"));
        }
        let f = self.source.field();
        let dm = self.source.dim();
        let dn = self.target.dim();
        // pairs (u, y) with u in U: U + Y inside X + Y
        let mut rows: Vec<Vec<u64>> = u
            .basis()
            .row_vectors()
            .map(|r| {
                let mut v = r.to_vec();
                v.extend(std::iter::repeat_n(0, dn));
                v
            })
            .collect();
        for j in 0..dn {
            let mut v = vec![0; dm + dn];
            v[dm + j] = 1;
            rows.push(v);
        }
        let window = FpSubspace::from_rows(f, dm + dn, &rows)?;
        Ok(self
            .subspace
            .intersect(&window)?
            .project_coords(dm, dm + dn))
    }

    /// True iff T is maximal isotropic for the difference form, i.e.
    /// isotropic with dim T = m + n.
    pub fn is_perfect_lagrangian(&self) -> bool {
        let gram = difference_gram(self.source, self.target);
        let b = self.subspace.basis();
        let products = b.mul(&gram).mul(&b.transpose());
        products.is_zero()
            && self.subspace.dim() == self.source.half_dim() + self.target.half_dim()
    }

    /// Orthocomplement of T under the difference form.
    pub fn lozenge(&self) -> FpSubspace {
        orthocomplement(&self.subspace, &difference_gram(self.source, self.target))
    }

    /// A perfect Lagrangian relation with trivial kernel and
    /// indefiniteness forces m = n and is the graph of a symplectic
    /// element, which is extracted and returned.
    pub fn to_symplectic_element(&self) -> Result<SymplecticElement> {
        if !self.is_perfect_lagrangian() {
            return Err(Error::NotPerfectLagrangian);
        }
        let st = self.structure();
        if !st.ker.is_zero() || !st.indef.is_zero() {
            return Err(Error::invalid(
                "relation",
                "kernel and indefiniteness must vanish",
            ));
        }
        if self.source.dim() != self.target.dim() {
            return Err(Error::dim("graph extraction needs m = n"));
        }
        let dm = self.source.dim();
        let mut rows = Vec::with_capacity(dm);
        for i in 0..dm {
            let mut e = vec![0u64; dm];
            e[i] = 1;
            // unique w with (e_i, w) in T
            let coords = self
                .subspace
                .basis()
                .col_range(0, dm)
                .solve_row(&e)
                .ok_or_else(|| Error::invalid("relation", "domain is not full"))?;
            let full = self.subspace.basis().apply_row(&coords);
            rows.push(full[dm..].to_vec());
        }
        let matrix = FpMatrix::from_rows(self.source.field(), &rows)?;
        SymplecticElement::new(self.source, matrix)
    }
}

/// The product ST: compose(s, t) applies t first, so graphs compose
/// in matrix-product order.
pub fn compose(s: &LinearRelation, t: &LinearRelation) -> Result<LinearRelation> {
    if t.target != s.source {
        return Err(Error::SpaceMismatch(
            "inner spaces must match: compose(s, t) needs t.target = s.source".into(),
        ));
    }
    let f = t.source.field();
    let dx = t.source.dim();
    let dy = t.target.dim();
    let dz = s.target.dim();
    let total = dx + dy + dz;

    // W1 = { (x, y, z) : (x, y) in T }, W2 = { (x, y, z) : (y, z) in S }
    let mut rows1: Vec<Vec<u64>> = t
        .subspace
        .basis()
        .row_vectors()
        .map(|r| {
            let mut v = r.to_vec();
            v.extend(std::iter::repeat_n(0, dz));
            v
        })
        .collect();
    for j in 0..dz {
        let mut v = vec![0; total];
        v[dx + dy + j] = 1;
        rows1.push(v);
    }
    let mut rows2: Vec<Vec<u64>> = s
        .subspace
        .basis()
        .row_vectors()
        .map(|r| {
            let mut v = vec![0; dx];
            v.extend_from_slice(r);
            v
        })
        .collect();
    for j in 0..dx {
        let mut v = vec![0; total];
        v[j] = 1;
        rows2.push(v);
    }
    let w1 = FpSubspace::from_rows(f, total, &rows1)?;
    let w2 = FpSubspace::from_rows(f, total, &rows2)?;
    let chained = w1.intersect(&w2)?;

    // project out the middle coordinates
    let rows: Vec<Vec<u64>> = chained
        .basis()
        .row_vectors()
        .map(|r| {
            let mut v = Vec::with_capacity(dx + dz);
            v.extend_from_slice(&r[..dx]);
            v.extend_from_slice(&r[dx + dy..]);
            v
        })
        .collect();
    LinearRelation::from_rows(t.source, s.target, &rows)
}

/// Coordinate-built perfect Lagrangian seed with prescribed kernel and
/// indefiniteness dimensions: the kernel sits on the last k c-coordinates
/// of the source, the indefiniteness on the last i c-coordinates of the
/// target, and the first r = m - k source pairs map identically to the
/// first r target pairs.
pub fn seed_perfect_lagrangian(
    source: SymplecticSpace,
    target: SymplecticSpace,
    ker_dim: usize,
    indef_dim: usize,
) -> Result<LinearRelation> {
    let (m, n) = (source.half_dim(), target.half_dim());
    if ker_dim > m || indef_dim > n {
        return Err(Error::invalid(
            "relation dims",
            "kernel/indefiniteness cannot exceed the half-dimensions",
        ));
    }
    if indef_dim + m != ker_dim + n {
        return Err(Error::invalid(
            "relation dims",
            format!(
                "perfect Lagrangian forces indef - ker = n - m; got ker={ker_dim}, indef={indef_dim}, m={m}, n={n}"
            ),
        ));
    }
    let r = m - ker_dim;
    let dm = source.dim();
    let dn = target.dim();
    let mut rows = Vec::new();
    // graph part: (e_j^d | e_j^d) and (e_j^c | e_j^c) for j < r
    for j in 0..r {
        for &idx in &[j, m + j] {
            let mut v = vec![0u64; dm + dn];
            v[idx] = 1;
            let tgt_idx = if idx < m { j } else { n + j };
            v[dm + tgt_idx] = 1;
            rows.push(v);
        }
    }
    // kernel part: (e_alpha^c | 0) for the last k source c-coordinates
    for j in r..m {
        let mut v = vec![0u64; dm + dn];
        v[m + j] = 1;
        rows.push(v);
    }
    // indefiniteness part: (0 | e_beta^c) for the last i target c-coordinates
    for j in (n - indef_dim)..n {
        let mut v = vec![0u64; dm + dn];
        v[dm + n + j] = 1;
        rows.push(v);
    }
    LinearRelation::from_rows(source, target, &rows)
}

/// Random perfect Lagrangian relation with prescribed kernel and
/// indefiniteness dimensions, built as the coordinate seed conjugated by
/// random symplectic elements on both sides.
pub fn random_perfect_lagrangian_with(
    source: SymplecticSpace,
    target: SymplecticSpace,
    ker_dim: usize,
    indef_dim: usize,
    rng: &mut impl Rng,
) -> Result<LinearRelation> {
    let seed = seed_perfect_lagrangian(source, target, ker_dim, indef_dim)?;
    let g = random_element(source, rng);
    let h = random_element(target, rng);
    let dm = source.dim();
    let rows: Vec<Vec<u64>> = seed
        .subspace
        .basis()
        .row_vectors()
        .map(|row| {
            let mut v = g.matrix().apply_row(&row[..dm]);
            v.extend(h.matrix().apply_row(&row[dm..]));
            v
        })
        .collect();
    let t = LinearRelation::from_rows(source, target, &rows)?;
    debug_assert!(t.is_perfect_lagrangian());
    Ok(t)
}

/// Random perfect Lagrangian relation with a random admissible kernel
/// dimension.
pub fn random_perfect_lagrangian(
    source: SymplecticSpace,
    target: SymplecticSpace,
    rng: &mut impl Rng,
) -> Result<LinearRelation> {
    let (m, n) = (source.half_dim(), target.half_dim());
    let k_min = m.saturating_sub(n);
    let k = rng.random_range(k_min..=m);
    let i = k + n - m;
    random_perfect_lagrangian_with(source, target, k, i, rng)
}
