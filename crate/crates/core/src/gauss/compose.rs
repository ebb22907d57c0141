//! Symbolic composition of Gaussian operators.
//!
//! The product kernel is a sum over the middle variable: build the triple
//! space Z of compatible (y, v, x), split off the finite summation kernel
//! X = Z cap (middle only), evaluate the fiber sums in closed form, and
//! read the support and form of the composite off the complement
//! parametrization. The resulting matrix equals the dense product
//! matrix(a) * matrix(b) including the accumulated scale.

use crate::error::{Error, Result};
use crate::linalg::{FpMatrix, FpSubspace};

use super::sum::gauss_sum_closed_form;
use super::{extend_form_to_ambient, GaussianData};

/// Composite of two Gaussians, applying `b` first: the result satisfies
/// matrix(compose(a, b)) = matrix(a) * matrix(b).
pub fn gaussian_compose(a: &GaussianData, b: &GaussianData) -> Result<GaussianData> {
    if a.field() != b.field() {
        return Err(Error::FieldMismatch);
    }
    if a.mu() != b.nu() {
        return Err(Error::SpaceMismatch(
            "inner spaces must match: compose(a, b) needs a.mu = b.nu".into(),
        ));
    }
    let f = a.field();
    let (mu, nu, kappa) = (b.mu(), b.nu(), a.nu());
    let total = mu + nu + kappa;

    // Z = { (y, v, x) : (y, v) in H_b and (v, x) in H_a }
    let mut rows1: Vec<Vec<u64>> = b
        .support()
        .basis()
        .row_vectors()
        .map(|r| {
            let mut v = r.to_vec();
            v.extend(std::iter::repeat_n(0, kappa));
            v
        })
        .collect();
    for j in 0..kappa {
        let mut v = vec![0; total];
        v[mu + nu + j] = 1;
        rows1.push(v);
    }
    let mut rows2: Vec<Vec<u64>> = a
        .support()
        .basis()
        .row_vectors()
        .map(|r| {
            let mut v = vec![0; mu];
            v.extend_from_slice(r);
            v
        })
        .collect();
    for j in 0..mu {
        let mut v = vec![0; total];
        v[j] = 1;
        rows2.push(v);
    }
    let w1 = FpSubspace::from_rows(f, total, &rows1)?;
    let w2 = FpSubspace::from_rows(f, total, &rows2)?;
    let z = w1.intersect(&w2)?;

    // summation kernel: middle-only vectors of Z
    let middle = FpSubspace::coordinate(f, total, &(mu..mu + nu).collect::<Vec<_>>());
    let x_sub = z.intersect(&middle)?;
    let y_comp = x_sub.complement_within(&z)?;
    let dx = x_sub.dim();
    let dy = y_comp.rows();

    // total form on (s, t) coordinates of Z = X + Y'
    let q_tot = b.form().embed(total, 0).add(&a.form().embed(total, mu))?;
    let basis_m = x_sub.basis().vstack(&y_comp);
    let q_st = q_tot.pullback(&basis_m)?;
    let gs = gauss_sum_closed_form(&q_st, dx)?;

    // support: Z'-coordinates mapped through Y' and projected to (y, x)
    let mut proj_rows = Vec::with_capacity(dy);
    for r in y_comp.row_vectors() {
        let mut v = Vec::with_capacity(mu + kappa);
        v.extend_from_slice(&r[..mu]);
        v.extend_from_slice(&r[mu + nu..]);
        proj_rows.push(v);
    }
    let proj_m = if proj_rows.is_empty() {
        FpMatrix::zeros(f, 0, mu + kappa)
    } else {
        FpMatrix::from_rows(f, &proj_rows)?
    };
    let m2 = gs.z.basis().mul(&proj_m);
    let h_new = FpSubspace::from_matrix(&m2);
    debug_assert_eq!(h_new.dim(), gs.z.dim(), "fiber projection must stay injective");

    // form: express the closed-form phase in the canonical basis of the
    // new support, then extend through the pivot coordinates
    let r_z = gs.r.restrict(&gs.z)?;
    let mut t_rows = Vec::with_capacity(h_new.dim());
    for row in h_new.basis().row_vectors() {
        let t = m2
            .solve_row(row)
            .ok_or_else(|| Error::invalid("gaussian composition", "support solve failed"))?;
        t_rows.push(t);
    }
    let t_mat = if t_rows.is_empty() {
        FpMatrix::zeros(f, 0, gs.z.dim())
    } else {
        FpMatrix::from_rows(f, &t_rows)?
    };
    let q_lambda = r_z.pullback(&t_mat)?;
    let q_new = extend_form_to_ambient(&q_lambda, &h_new);

    let scale = a.scale() * b.scale() * gs.c.to_complex();
    GaussianData::new(mu, kappa, h_new, q_new, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::linalg::{FpMatrix, QuadraticForm};
    use num_complex::Complex64;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn random_gaussian(
        field: PrimeField,
        mu: usize,
        nu: usize,
        rng: &mut ChaCha8Rng,
    ) -> GaussianData {
        let p = field.modulus();
        let rows: Vec<Vec<u64>> = (0..rng.random_range(0..=mu + nu))
            .map(|_| (0..mu + nu).map(|_| rng.random_range(0..p)).collect())
            .collect();
        let h = FpSubspace::from_rows(field, mu + nu, &rows).unwrap();
        let mut coeffs = FpMatrix::zeros(field, mu + nu, mu + nu);
        for i in 0..mu + nu {
            for j in i..mu + nu {
                coeffs.set(i, j, rng.random_range(0..p));
            }
        }
        GaussianData::new(
            mu,
            nu,
            h,
            QuadraticForm::new(coeffs).unwrap(),
            Complex64::new(rng.random_range(0.2..2.0), rng.random_range(-1.0..1.0)),
        )
        .unwrap()
    }

    #[test]
    fn composing_with_identity_reproduces_the_matrix() {
        let field = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(401);
        let id = GaussianData::identity(field, 1);
        for _ in 0..20 {
            let g = random_gaussian(field, 1, 1, &mut rng);
            let left = gaussian_compose(&g, &id).unwrap();
            let right = gaussian_compose(&id, &g).unwrap();
            let gm = g.matrix().unwrap();
            assert!(left.matrix().unwrap().sub(&gm).unwrap().frobenius_norm() < 1e-10);
            assert!(right.matrix().unwrap().sub(&gm).unwrap().frobenius_norm() < 1e-10);
        }
    }

    #[test]
    fn fourier_pair_composes_to_the_dense_product() {
        // two Fourier-type Gaussians at mu = nu = 1, p = 3
        let field = f(3);
        let mut coeffs = FpMatrix::zeros(field, 2, 2);
        coeffs.set(0, 1, 1);
        let fourier = GaussianData::new(
            1,
            1,
            FpSubspace::full(field, 2),
            QuadraticForm::new(coeffs).unwrap(),
            Complex64::new(1.0, 0.0),
        )
        .unwrap();
        let composite = gaussian_compose(&fourier, &fourier).unwrap();
        let dense = fourier
            .matrix()
            .unwrap()
            .mul(&fourier.matrix().unwrap())
            .unwrap();
        let diff = composite.matrix().unwrap().sub(&dense).unwrap().frobenius_norm();
        assert!(diff < 1e-10, "residual {diff}");
    }

    #[test]
    fn random_pairs_compose_to_the_dense_product() {
        let field = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(402);
        for _ in 0..40 {
            let mu = rng.random_range(0..=2usize);
            let nu = rng.random_range(0..=2usize);
            let kappa = rng.random_range(0..=2usize);
            let b = random_gaussian(field, mu, nu, &mut rng);
            let a = random_gaussian(field, nu, kappa, &mut rng);
            let composite = gaussian_compose(&a, &b).unwrap();
            let dense = a.matrix().unwrap().mul(&b.matrix().unwrap()).unwrap();
            let cm = composite.matrix().unwrap();
            let diff = cm.sub(&dense).unwrap().frobenius_norm();
            let scale = dense.frobenius_norm().max(1.0);
            assert!(diff < 1e-9 * scale, "residual {diff} at mu={mu} nu={nu} kappa={kappa}");
        }
    }

    #[test]
    fn degenerate_middle_space_composes() {
        // mu = nu = kappa = 2 with p = 3, maximal-support factors
        let field = f(3);
        let mut rng = ChaCha8Rng::seed_from_u64(403);
        for _ in 0..10 {
            let b = random_gaussian(field, 2, 2, &mut rng);
            let a = random_gaussian(field, 2, 2, &mut rng);
            let composite = gaussian_compose(&a, &b).unwrap();
            let dense = a.matrix().unwrap().mul(&b.matrix().unwrap()).unwrap();
            let diff = composite.matrix().unwrap().sub(&dense).unwrap().frobenius_norm();
            assert!(diff < 1e-9 * dense.frobenius_norm().max(1.0));
        }
    }
}
