//! The intertwining solver realizing W(T) for a perfect Lagrangian
//! relation, the relation cocycle, and the adjoint law.
//!
//! W(T) is the (scalar-unique) nonzero solution X of the homogeneous
//! system { a(w) X - X a(v) = 0 } over a basis (v, w) of T. The solver
//! computes the nullspace directly via the Jacobi SVD and demands
//! nullity exactly 1 with a hard spectral gap, so a pass cannot happen
//! by luck. The reduction-to-canonical-form construction survives as the
//! structured test family (support and rank predictions).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::heisenberg::heisenberg_op;
use crate::operator::{jacobi_svd, scalar_ratio, ComplexOperator, DEFAULT_TOL, GAP_REL_TOL};
use crate::relations::{compose, LinearRelation};

/// Outcome of the intertwining solve, including the evidence the
/// uniqueness checks rely on.
#[derive(Debug, Clone)]
pub struct IntertwiningSolution {
    /// The canonically normalized operator W(T).
    pub operator: ComplexOperator,
    /// All singular values of the stacked system, descending.
    pub singular_values: Vec<f64>,
    /// Count of singular values below the nullity threshold.
    pub nullity: usize,
    /// Ratio of the smallest non-null singular value to the null one.
    pub spectral_gap: f64,
}

/// Solves the homogeneous intertwining system for a perfect Lagrangian
/// relation and certifies that its solution space is one-dimensional.
pub fn solve_intertwining(t: &LinearRelation) -> Result<IntertwiningSolution> {
    if !t.is_perfect_lagrangian() {
        return Err(Error::NotPerfectLagrangian);
    }
    let source = t.source();
    let target = t.target();
    let p = source.field().modulus();
    let rows_out = (p as usize).pow(target.half_dim() as u32);
    let cols_in = (p as usize).pow(source.half_dim() as u32);
    let unknowns = rows_out * cols_in;

    // X is p^nu x p^mu, vectorized row-major: X[r][c] -> r * cols_in + c.
    let basis_count = t.subspace().dim();
    if basis_count == 0 {
        // T = 0: only between V_0 and V_0, where W is the 1 x 1 identity.
        let op = ComplexOperator::identity(p, 0);
        return Ok(IntertwiningSolution {
            operator: op,
            singular_values: vec![],
            nullity: 1,
            spectral_gap: f64::INFINITY,
        });
    }

    let dm = source.dim();
    let mut system = vec![Complex64::new(0.0, 0.0); basis_count * unknowns * unknowns];
    for (b_idx, pair) in t.subspace().basis().row_vectors().enumerate() {
        let (v, w) = pair.split_at(dm);
        let a_v = heisenberg_op(source, v)?;
        let a_w = heisenberg_op(target, w)?;
        for r in 0..rows_out {
            for c in 0..cols_in {
                let eq = b_idx * unknowns + r * cols_in + c;
                let base = eq * unknowns;
                // (a(w) X)[r][c] = sum_k a(w)[r,k] X[k,c]
                for k in 0..rows_out {
                    let coeff = a_w.at(r, k);
                    if coeff.norm_sqr() != 0.0 {
                        system[base + k * cols_in + c] += coeff;
                    }
                }
                // (X a(v))[r][c] = sum_k X[r,k] a(v)[k,c]
                for k in 0..cols_in {
                    let coeff = a_v.at(k, c);
                    if coeff.norm_sqr() != 0.0 {
                        system[base + r * cols_in + k] -= coeff;
                    }
                }
            }
        }
    }

    let svd = jacobi_svd(basis_count * unknowns, unknowns, &system)?;
    let nullity = svd.nullity();
    let gap = svd.spectral_gap();
    if nullity != 1 {
        return Err(Error::SolutionSpaceDimension { found: nullity });
    }
    let sigma_max = svd.singular_values[0];
    if unknowns > 1 && svd.singular_values[unknowns - 2] <= GAP_REL_TOL * sigma_max {
        return Err(Error::SolutionSpaceDimension { found: nullity });
    }

    let null = &svd.right_vectors[unknowns - 1];
    let op = ComplexOperator::from_entries(
        p,
        target.half_dim(),
        source.half_dim(),
        null.clone(),
    )?
    .canonicalized()?;
    Ok(IntertwiningSolution {
        operator: op,
        singular_values: svd.singular_values,
        nullity,
        spectral_gap: gap,
    })
}

/// The canonically normalized Weil operator of a perfect Lagrangian
/// relation (Frobenius norm 1, first significant entry positive real).
pub fn weil_of_relation(t: &LinearRelation) -> Result<ComplexOperator> {
    Ok(solve_intertwining(t)?.operator)
}

/// The nonzero scalar c with W(S) W(T) = c W(ST) under the canonical
/// normalization. Unlike the group case |c| need not be 1: the operators
/// are not unitary in general, only nonvanishing of c is guaranteed.
pub fn relation_cocycle(s: &LinearRelation, t: &LinearRelation) -> Result<Complex64> {
    let st = compose(s, t)?;
    let ws = weil_of_relation(s)?;
    let wt = weil_of_relation(t)?;
    let wst = weil_of_relation(&st)?;
    let prod = ws.mul(&wt)?;
    if prod.frobenius_norm() < 1e-10 {
        // a vanishing product would break the composition law
        return Err(Error::ZeroOperator);
    }
    scalar_ratio(&prod, &wst, DEFAULT_TOL)
}

/// Checks the adjoint law W(T)* proportional to W(T^square). Returns
/// false on a proportionality failure instead of erroring; anything else
/// (solver trouble) propagates.
pub fn adjoint_law_check(t: &LinearRelation) -> Result<bool> {
    let w = weil_of_relation(t)?;
    let w_inv = weil_of_relation(&t.pseudo_inverse())?;
    match scalar_ratio(&w.adjoint(), &w_inv, DEFAULT_TOL) {
        Ok(_) => Ok(true),
        Err(Error::NotProportional { .. }) => Ok(false),
        Err(e) => Err(e),
    }
}
