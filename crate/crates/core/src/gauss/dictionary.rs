//! The dictionary between Gaussian operators and perfect Lagrangian
//! relations, in both directions.
//!
//! From a Gaussian G(H; Q) the pure parts of Q are absorbed by diagonal
//! quadratic-character operators (tracked as graph relations of N+-type
//! elements), and the cross-only core contributes two generating
//! families to the relation: points of H paired through the cross
//! matrix, and annihilator points of H placed on the c-sides. From an
//! operator, the support pattern and entry phases are read back off the
//! matrix, with hard rejections when the support is not a subspace, the
//! moduli are not constant, or the phases do not snap to p-th roots.


use crate::error::{Error, Result};
use crate::linalg::{FpSubspace, QuadraticForm};
use crate::operator::{index_point, ComplexOperator};
use crate::relations::{compose, LinearRelation};
use crate::symplectic::{make_generator, GeneratorLetter, SymplecticSpace};

use super::{extend_form_to_ambient, GaussianData};

/// The perfect Lagrangian relation T with a(w) G = G a(v) for all
/// (v, w) in T, where G is the Gaussian operator of `g`.
pub fn relation_from_gaussian(g: &GaussianData) -> Result<LinearRelation> {
    let f = g.field();
    let (mu, nu) = (g.mu(), g.nu());
    let source = SymplecticSpace::new(f, mu);
    let target = SymplecticSpace::new(f, nu);

    // Q(y | x) = Q_in(y) + y S x^T + Q_out(x)
    let (q_in, cross, q_out) = g.form().split(mu);

    // Core relation of the cross-only Gaussian: for (P, R) in H the pair
    // v = (P, R S^T), w = (R, -P S) intertwines, and for (alpha, beta)
    // in the annihilator of H the pair v = (0, -alpha), w = (0, beta).
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for pr in g.support().basis().row_vectors() {
        let (p_part, r_part) = pr.split_at(mu);
        let v_c = cross.transpose().apply_row(r_part); // R S^T
        let w_c: Vec<u64> = cross
            .apply_row(p_part)
            .into_iter()
            .map(|x| f.neg(x))
            .collect(); // -P S
        let mut row = Vec::with_capacity(2 * mu + 2 * nu);
        row.extend_from_slice(p_part);
        row.extend(v_c);
        row.extend_from_slice(r_part);
        row.extend(w_c);
        rows.push(row);
    }
    for ab in g.support().annihilator().basis().row_vectors() {
        let (alpha, beta) = ab.split_at(mu);
        let mut row = vec![0u64; mu];
        row.extend(alpha.iter().map(|&x| f.neg(x)));
        row.extend(std::iter::repeat_n(0, nu));
        row.extend_from_slice(beta);
        rows.push(row);
    }
    let core = LinearRelation::from_rows(source, target, &rows)?;
    if !core.is_perfect_lagrangian() {
        return Err(Error::NotPerfectLagrangian);
    }

    // Diagonal adjustments: G = G[[Q_out]] * core * G[[Q_in]], and the
    // relation of the multiplication operator G[[C]] is the graph of the
    // N+ element with form -(C + C^T).
    let mut t = core;
    if !q_in.is_zero() {
        let g_in = make_generator(source, &GeneratorLetter::NPlus(q_in.gram().neg()))?;
        t = compose(&t, &LinearRelation::graph(&g_in))?;
    }
    if !q_out.is_zero() {
        let g_out = make_generator(target, &GeneratorLetter::NPlus(q_out.gram().neg()))?;
        t = compose(&LinearRelation::graph(&g_out), &t)?;
    }
    if !t.is_perfect_lagrangian() {
        return Err(Error::NotPerfectLagrangian);
    }
    Ok(t)
}

/// Reads a Gaussian presentation off a matrix: the support of the
/// nonzero entries must form a subspace (through the origin, which
/// always lies in the support of an honest Gaussian), the nonzero
/// entries must share one modulus, and each phase relative to the origin
/// entry must snap to a p-th root of unity within 1e-6 radians.
pub fn gaussian_from_operator(w: &ComplexOperator) -> Result<GaussianData> {
    let p = w.p();
    let field = crate::field::PrimeField::with_limit(p, p).expect("operator modulus is valid");
    let (mu, nu) = (w.n_in(), w.n_out());
    let max = w.max_abs();
    if max == 0.0 {
        return Err(Error::ZeroOperator);
    }

    // support detection with a constant-modulus check
    let mut support = Vec::new();
    for r in 0..w.rows() {
        for c in 0..w.cols() {
            let m = w.at(r, c).norm();
            if m > 0.5 * max {
                if (m - max).abs() > 1e-8 * max {
                    return Err(Error::NotGaussian("nonconstant modulus on support".into()));
                }
                let mut u = index_point(p, mu, c);
                u.extend(index_point(p, nu, r));
                support.push(u);
            } else if m > 1e-8 * max {
                return Err(Error::NotGaussian("nonconstant modulus on support".into()));
            }
        }
    }
    let h = FpSubspace::from_rows(field, mu + nu, &support)?;
    if support.len() != (p as usize).pow(h.dim() as u32) {
        return Err(Error::NotGaussian("support is not a subspace".into()));
    }
    let origin = vec![0u64; mu + nu];
    if !support.contains(&origin) {
        return Err(Error::NotGaussian("origin not in support".into()));
    }

    let scale = w.at(0, 0);
    let tau = std::f64::consts::TAU;
    let phase_of = |u: &[u64]| -> Result<u64> {
        let (y, x) = u.split_at(mu);
        let entry = w.at(
            crate::operator::point_index(p, x),
            crate::operator::point_index(p, y),
        );
        let theta = (entry / scale).arg().rem_euclid(tau);
        let k = (theta / (tau / p as f64)).round();
        let snapped = k * tau / p as f64;
        let dist = (theta - snapped).abs().min(tau - (theta - snapped).abs());
        if dist > 1e-6 {
            return Err(Error::NotGaussian("entry phases are not p-th roots".into()));
        }
        Ok((k as u64) % p)
    };

    // fit the quadratic form on the basis coordinates of H, then verify
    // the fit on every support point
    let r = h.dim();
    let mut q_basis = QuadraticForm::zero(field, r);
    let basis = h.basis();
    let value_at = |lam: &[u64]| -> Result<u64> { phase_of(&basis.apply_row(lam)) };
    for i in 0..r {
        let mut e = vec![0u64; r];
        e[i] = 1;
        q_basis.set_coeff(i, i, value_at(&e)?);
    }
    for i in 0..r {
        for j in (i + 1)..r {
            let mut e = vec![0u64; r];
            e[i] = 1;
            e[j] = 1;
            let mixed = field.sub(
                value_at(&e)?,
                field.add(q_basis.coeff(i, i), q_basis.coeff(j, j)),
            );
            q_basis.set_coeff(i, j, mixed);
        }
    }
    for lam in crate::operator::points(p, r) {
        if q_basis.eval(&lam)? != value_at(&lam)? {
            return Err(Error::NotGaussian(
                "phases are not quadratic on the support".into(),
            ));
        }
    }
    let q = extend_form_to_ambient(&q_basis, &h);
    GaussianData::new(mu, nu, h, q, scale)
}
