//! The projective Heisenberg representation a(v) on l^2(F_p^n) and Weil
//! operators W(g) for symplectic group elements.
//!
//! a(v) f(x) = f(x + v^d) Exp(sum_j x_j v_j^c + (1/2) sum_j v_j^d v_j^c)
//! satisfies a(v) a(w) = Exp((1/2){v,w}) a(v+w). W(g) is assembled from
//! generator operators along the word produced by
//! [`crate::symplectic::decompose`] and intertwines a(vg) = W^-1 a(v) W.
//! Every generator operator is unitary (the Fourier letter carries a
//! 1/sqrt(p) normalization), so arbitrary words stay unitary and the
//! group cocycle has unit modulus.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::FpMatrix;
use crate::operator::{point_index, scalar_ratio, ComplexOperator, DEFAULT_TOL};
use crate::symplectic::{decompose, GeneratorLetter, SymplecticElement, SymplecticSpace};

/// Tolerance for the intertwining verification inside [`weil_of_group`].
pub const INTERTWINE_TOL: f64 = 1e-9;

/// An element (v; s) of the Heisenberg group V_2n + F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeisenbergElement {
    space: SymplecticSpace,
    v: Vec<u64>,
    s: u64,
}

impl HeisenbergElement {
    pub fn new(space: SymplecticSpace, v: Vec<u64>, s: u64) -> Result<Self> {
        if v.len() != space.dim() {
            return Err(Error::dim(format!("vector must have length {}", space.dim())));
        }
        let f = space.field();
        Ok(HeisenbergElement {
            space,
            v: v.into_iter().map(|x| x % f.modulus()).collect(),
            s: s % f.modulus(),
        })
    }

    pub fn identity(space: SymplecticSpace) -> Self {
        HeisenbergElement {
            space,
            v: vec![0; space.dim()],
            s: 0,
        }
    }

    pub fn vector(&self) -> &[u64] {
        &self.v
    }

    pub fn central(&self) -> u64 {
        self.s
    }

    /// The group law (v; s) * (w; t) = (v + w; s + t + (1/2){v, w}).
    pub fn star(&self, other: &HeisenbergElement) -> Result<HeisenbergElement> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch("Heisenberg elements on different spaces".into()));
        }
        let f = self.space.field();
        let v: Vec<u64> = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(&a, &b)| f.add(a, b))
            .collect();
        let form = self.space.form(&self.v, &other.v)?;
        let s = f.add(f.add(self.s, other.s), f.mul(f.half(), form));
        HeisenbergElement::new(self.space, v, s)
    }

    pub fn inverse(&self) -> HeisenbergElement {
        let f = self.space.field();
        HeisenbergElement {
            space: self.space,
            v: self.v.iter().map(|&x| f.neg(x)).collect(),
            s: f.neg(self.s),
        }
    }
}

/// The unitary operator a(v) as a p^n x p^n matrix.
pub fn heisenberg_op(space: SymplecticSpace, v: &[u64]) -> Result<ComplexOperator> {
    if v.len() != space.dim() {
        return Err(Error::dim(format!("vector must have length {}", space.dim())));
    }
    let f = space.field();
    let p = f.modulus();
    let n = space.half_dim();
    let (vd, vc) = v.split_at(n);
    let half = f.half();
    let mut dd = 0;
    for j in 0..n {
        dd = f.add(dd, f.mul(vd[j], vc[j]));
    }
    let const_part = f.mul(half, dd);
    let mut op = ComplexOperator::zeros(p, n, n);
    for (i, x) in crate::operator::points(p, n).iter().enumerate() {
        let mut phase = const_part;
        for j in 0..n {
            phase = f.add(phase, f.mul(x[j], vc[j]));
        }
        let shifted: Vec<u64> = (0..n).map(|j| f.add(x[j], vd[j])).collect();
        op.set(i, point_index(p, &shifted), f.character(phase));
    }
    Ok(op)
}

/// The scalar c with a(v) a(w) = c a(v + w), computed from matrices; a
/// proportionality failure signals an implementation bug and errors.
pub fn heisenberg_product_scalar(
    space: SymplecticSpace,
    v: &[u64],
    w: &[u64],
) -> Result<Complex64> {
    let f = space.field();
    let prod = heisenberg_op(space, v)?.mul(&heisenberg_op(space, w)?)?;
    let sum: Vec<u64> = v.iter().zip(w).map(|(&a, &b)| f.add(a, b)).collect();
    scalar_ratio(&prod, &heisenberg_op(space, &sum)?, DEFAULT_TOL)
}

/// The unitary Weil operator for a single generator letter: H acts by
/// substitution f(x a), N+ by the quadratic character Exp((1/2) x b x^T),
/// and J_k by the normalized Fourier transform in coordinate k. The
/// Fourier kernel sign is +1; it is the unique choice for which the J_k
/// intertwining relation holds with the generator matrix sign convention,
/// and a dedicated unit test pins it.
pub fn weil_generator(space: SymplecticSpace, letter: &GeneratorLetter) -> Result<ComplexOperator> {
    // validates the payload (invertibility, symmetry, index range)
    crate::symplectic::make_generator(space, letter)?;
    let f = space.field();
    let p = f.modulus();
    let n = space.half_dim();
    let pts = crate::operator::points(p, n);
    Ok(match letter {
        GeneratorLetter::H(a) => {
            let mut op = ComplexOperator::zeros(p, n, n);
            for (i, x) in pts.iter().enumerate() {
                let xa = a.apply_row(x);
                op.set(i, point_index(p, &xa), Complex64::new(1.0, 0.0));
            }
            op
        }
        GeneratorLetter::NPlus(b) => {
            let half = f.half();
            let mut op = ComplexOperator::zeros(p, n, n);
            for (i, x) in pts.iter().enumerate() {
                let mut q = 0;
                for k in 0..n {
                    for l in 0..n {
                        q = f.add(q, f.mul(b.at(k, l), f.mul(x[k], x[l])));
                    }
                }
                op.set(i, i, f.character(f.mul(half, q)));
            }
            op
        }
        GeneratorLetter::J(k) => {
            let idx = k - 1;
            let scale = 1.0 / (p as f64).sqrt();
            let mut op = ComplexOperator::zeros(p, n, n);
            for (i, x) in pts.iter().enumerate() {
                for t in 0..p {
                    let mut y = x.clone();
                    y[idx] = t;
                    let phase = f.character(f.mul(x[idx], t));
                    op.set(i, point_index(p, &y), phase * scale);
                }
            }
            op
        }
    })
}

/// Largest relative intertwining residual of W against g over the 2n
/// basis vectors: || W a(vg) - a(v) W ||_F / sqrt(p^n).
pub fn intertwining_residual(g: &SymplecticElement, w: &ComplexOperator) -> Result<f64> {
    let space = g.space();
    let dim = space.dim();
    let scale = (w.rows() as f64).sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..dim {
        let mut v = vec![0u64; dim];
        v[i] = 1;
        let vg = g.matrix().apply_row(&v);
        let lhs = w.mul(&heisenberg_op(space, &vg)?)?;
        let rhs = heisenberg_op(space, &v)?.mul(w)?;
        worst = worst.max(lhs.sub(&rhs)?.frobenius_norm() / scale);
    }
    Ok(worst)
}

/// The Weil operator of a group element: the product of generator
/// operators along a decomposition word, phase-normalized so the first
/// significant entry is positive real while the unitary scale is kept.
/// Satisfies a(vg) = W^-1 a(v) W; the residual is verified before
/// returning.
pub fn weil_of_group(g: &SymplecticElement) -> Result<ComplexOperator> {
    let space = g.space();
    let word = decompose(g)?;
    let mut w = ComplexOperator::identity(space.field().modulus(), space.half_dim());
    for letter in &word.letters {
        w = w.mul(&weil_generator(space, letter)?)?;
    }
    let w = w.with_canonical_phase()?;
    let residual = intertwining_residual(g, &w)?;
    if residual > INTERTWINE_TOL {
        return Err(Error::NotProportional { residual });
    }
    Ok(w)
}

/// The unit-modulus scalar c with W(g1) W(g2) = c W(g1 g2) under the
/// canonical phase gauge of unitary representatives.
pub fn group_cocycle(g1: &SymplecticElement, g2: &SymplecticElement) -> Result<Complex64> {
    if g1.space() != g2.space() {
        return Err(Error::SpaceMismatch("cocycle needs a common space".into()));
    }
    let prod = weil_of_group(g1)?.mul(&weil_of_group(g2)?)?;
    let w12 = weil_of_group(&g1.mul(g2)?)?;
    scalar_ratio(&prod, &w12, DEFAULT_TOL)
}

/// The embedding operators for an injective B: V_mu^d -> V_nu^d:
/// sigma_B phi(x) = phi(x B) of shape p^mu x p^nu, and sigma*_B psi(y) =
/// psi(B^-1 y) on im B, zero off it, of shape p^nu x p^mu. Their product
/// sigma_B sigma*_B is the identity on l^2(V_mu^d).
pub fn sigma_ops(b: &FpMatrix) -> Result<(ComplexOperator, ComplexOperator)> {
    let mu = b.rows();
    let nu = b.cols();
    if b.rank() != mu {
        return Err(Error::invalid("embedding", "matrix must be injective"));
    }
    let p = b.field().modulus();
    let mut sigma = ComplexOperator::zeros(p, mu, nu);
    let mut sigma_star = ComplexOperator::zeros(p, nu, mu);
    for (i, x) in crate::operator::points(p, mu).iter().enumerate() {
        let y = point_index(p, &b.apply_row(x));
        sigma.set(i, y, Complex64::new(1.0, 0.0));
        sigma_star.set(y, i, Complex64::new(1.0, 0.0));
    }
    Ok((sigma, sigma_star))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::operator::{commutant_dimension, scalar_ratio_default};
    use crate::symplectic::{evaluate_word, make_generator, random_element, GeneratorWord};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn space(p: u64, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(PrimeField::new(p).unwrap(), n)
    }

    fn omega(p: u64, k: u64) -> Complex64 {
        PrimeField::new(p).unwrap().character(k)
    }

    #[test]
    fn heisenberg_op_examples() {
        let s = space(3, 1);
        // v = (1, 0): cyclic shift f(x) -> f(x + 1)
        let shift = heisenberg_op(s, &[1, 0]).unwrap();
        for x in 0..3usize {
            for y in 0..3usize {
                let expect = if y == (x + 1) % 3 { 1.0 } else { 0.0 };
                assert!((shift.at(x, y) - Complex64::new(expect, 0.0)).norm() < 1e-15);
            }
        }
        // v = (0, 1): diag(1, w, w^2)
        let diag = heisenberg_op(s, &[0, 1]).unwrap();
        for x in 0..3usize {
            for y in 0..3usize {
                let expect = if x == y {
                    omega(3, x as u64)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                assert!((diag.at(x, y) - expect).norm() < 1e-15);
            }
        }
        // v = 0: identity
        let id = heisenberg_op(s, &[0, 0]).unwrap();
        assert!(id.sub(&ComplexOperator::identity(3, 1)).unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn heisenberg_ops_are_unitary() {
        for n in [1usize, 2] {
            let s = space(3, n);
            for v in crate::operator::points(3, 2 * n) {
                let a = heisenberg_op(s, &v).unwrap();
                assert!(a.is_unitary(1e-12), "a({v:?}) not unitary");
            }
        }
    }

    #[test]
    fn product_law_exhaustive_n1() {
        let s = space(3, 1);
        let f = s.field();
        for v in crate::operator::points(3, 2) {
            for w in crate::operator::points(3, 2) {
                let c = heisenberg_product_scalar(s, &v, &w).unwrap();
                let expect = f.character(f.mul(f.half(), s.form(&v, &w).unwrap()));
                assert!((c - expect).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn product_scalar_examples() {
        let s = space(3, 1);
        // v = w gives 1 since {v, v} = 0
        let c = heisenberg_product_scalar(s, &[1, 2], &[1, 2]).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        // v=(1,0), w=(0,1): {v,w} = 1, half = 2, so c = Exp(2) = e^{4 pi i/3}
        let c = heisenberg_product_scalar(s, &[1, 0], &[0, 1]).unwrap();
        assert!((c - omega(3, 2)).norm() < 1e-12);
        // order swap conjugates the scalar when {v,w} != 0
        let c2 = heisenberg_product_scalar(s, &[0, 1], &[1, 0]).unwrap();
        assert!((c2 - c.conj()).norm() < 1e-12);
    }

    #[test]
    fn heisenberg_group_law_is_associative() {
        let s = space(5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let rand_el = |rng: &mut ChaCha8Rng| {
                let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..5)).collect();
                HeisenbergElement::new(s, v, rng.random_range(0..5)).unwrap()
            };
            let (a, b, c) = (rand_el(&mut rng), rand_el(&mut rng), rand_el(&mut rng));
            let left = a.star(&b).unwrap().star(&c).unwrap();
            let right = a.star(&b.star(&c).unwrap()).unwrap();
            assert_eq!(left, right);
            assert_eq!(
                a.star(&a.inverse()).unwrap(),
                HeisenbergElement::identity(s)
            );
        }
    }

    #[test]
    fn heisenberg_element_matches_operator_product() {
        // the matrix product realizes the group law up to the central character
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let f = s.field();
        for _ in 0..50 {
            let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let w: Vec<u64> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let hv = HeisenbergElement::new(s, v.clone(), 0).unwrap();
            let hw = HeisenbergElement::new(s, w.clone(), 0).unwrap();
            let hvw = hv.star(&hw).unwrap();
            let c = heisenberg_product_scalar(s, &v, &w).unwrap();
            assert!((c - f.character(hvw.central())).norm() < 1e-10);
        }
    }

    #[test]
    fn weil_generator_examples() {
        let s = space(3, 1);
        let id = weil_generator(s, &GeneratorLetter::H(FpMatrix::identity(s.field(), 1))).unwrap();
        assert!(id.sub(&ComplexOperator::identity(3, 1)).unwrap().frobenius_norm() < 1e-15);

        // N+([1]) at p=3: diag(Exp(2 x^2)) = diag(1, Exp(2), Exp(2))
        let b = FpMatrix::from_rows(s.field(), &[vec![1]]).unwrap();
        let np = weil_generator(s, &GeneratorLetter::NPlus(b)).unwrap();
        let want = [omega(3, 0), omega(3, 2), omega(3, 2)];
        for x in 0..3usize {
            assert!((np.at(x, x) - want[x]).norm() < 1e-14);
        }

        // J(1): normalized Fourier matrix, unitary
        let j = weil_generator(s, &GeneratorLetter::J(1)).unwrap();
        assert!(j.is_unitary(1e-12));
        let scale = 1.0 / 3f64.sqrt();
        for x in 0..3usize {
            for y in 0..3usize {
                let expect = omega(3, (x * y) as u64 % 3) * scale;
                assert!((j.at(x, y) - expect).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn fourier_sign_is_pinned_by_intertwining() {
        // The unique kernel sign for which a(v J_1) = W^-1 a(v) W holds
        // with the J_1 matrix (x -> y, y -> -x) is +1. This test is the
        // sign's specification.
        let s = space(3, 1);
        let g = make_generator(s, &GeneratorLetter::J(1)).unwrap();
        let w = weil_generator(s, &GeneratorLetter::J(1)).unwrap();
        assert!(intertwining_residual(&g, &w).unwrap() < 1e-12);

        // the opposite sign fails
        let f = s.field();
        let wrong = ComplexOperator::from_fn(3, 1, 1, |x, y| {
            f.character(f.mul(f.neg(1), f.mul(x[0], y[0]))) / 3f64.sqrt()
        });
        assert!(intertwining_residual(&g, &wrong).unwrap() > 0.5);
    }

    #[test]
    fn all_generators_intertwine() {
        let s = space(3, 2);
        let f = s.field();
        let letters = vec![
            GeneratorLetter::H(FpMatrix::from_rows(f, &[vec![1, 2], vec![0, 1]]).unwrap()),
            GeneratorLetter::NPlus(FpMatrix::from_rows(f, &[vec![1, 2], vec![2, 0]]).unwrap()),
            GeneratorLetter::J(1),
            GeneratorLetter::J(2),
        ];
        for letter in letters {
            let g = make_generator(s, &letter).unwrap();
            let w = weil_generator(s, &letter).unwrap();
            assert!(intertwining_residual(&g, &w).unwrap() < 1e-12);
        }
    }

    #[test]
    fn weil_of_group_examples() {
        let s = space(3, 1);
        let id = weil_of_group(&SymplecticElement::identity(s)).unwrap();
        assert!(id.sub(&ComplexOperator::identity(3, 1)).unwrap().frobenius_norm() < 1e-12);

        // W(J_1) equals the Fourier generator up to a unit scalar
        let g = make_generator(s, &GeneratorLetter::J(1)).unwrap();
        let w = weil_of_group(&g).unwrap();
        let c = scalar_ratio_default(&w, &weil_generator(s, &GeneratorLetter::J(1)).unwrap()).unwrap();
        assert!((c.norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn random_weil_operators_intertwine() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        for _ in 0..25 {
            let g = random_element(s, &mut rng);
            let w = weil_of_group(&g).unwrap();
            assert!(w.is_unitary(1e-10));
            assert!(intertwining_residual(&g, &w).unwrap() < 1e-10);
        }
    }

    #[test]
    fn different_words_for_same_element_agree_projectively() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let letters: Vec<GeneratorLetter> = (0..rng.random_range(3..8usize))
                .map(|_| match rng.random_range(0..3u8) {
                    0 => GeneratorLetter::H(crate::symplectic::random_invertible(s, &mut rng)),
                    1 => {
                        let mut b = FpMatrix::zeros(s.field(), 2, 2);
                        for i in 0..2 {
                            for j in i..2 {
                                let v = rng.random_range(0..3);
                                b.set(i, j, v);
                                b.set(j, i, v);
                            }
                        }
                        GeneratorLetter::NPlus(b)
                    }
                    _ => GeneratorLetter::J(rng.random_range(1..=2)),
                })
                .collect();
            let word = GeneratorWord::new(letters);
            let g = evaluate_word(s, &word).unwrap();

            // operator from the raw word
            let mut w1 = ComplexOperator::identity(3, 2);
            for letter in &word.letters {
                w1 = w1.mul(&weil_generator(s, letter).unwrap()).unwrap();
            }
            // operator from the decomposition word
            let w2 = weil_of_group(&g).unwrap();
            let c = scalar_ratio_default(&w1, &w2).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn group_cocycle_examples() {
        let s = space(3, 1);
        let e = SymplecticElement::identity(s);
        let c = group_cocycle(&e, &e).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-12);

        // regression fixture: c(J_1, J_1) = 1 at n=1, p=3 (the Fourier
        // square lands exactly on the parity permutation W(-1))
        let j = make_generator(s, &GeneratorLetter::J(1)).unwrap();
        let c = group_cocycle(&j, &j).unwrap();
        assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn group_cocycle_has_unit_modulus() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..20 {
            let g1 = random_element(s, &mut rng);
            let g2 = random_element(s, &mut rng);
            let c = group_cocycle(&g1, &g2).unwrap();
            assert!((c.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn commutant_of_heisenberg_image_is_trivial() {
        for (p, n) in [(3u64, 1usize), (5, 1)] {
            let s = space(p, n);
            let ops: Vec<ComplexOperator> = (0..2 * n)
                .map(|i| {
                    let mut v = vec![0u64; 2 * n];
                    v[i] = 1;
                    heisenberg_op(s, &v).unwrap()
                })
                .collect();
            assert_eq!(commutant_dimension(&ops).unwrap(), 1, "p={p} n={n}");
        }
    }

    #[test]
    fn commutant_of_single_shift_is_circulant_algebra() {
        let s = space(3, 1);
        let shift = heisenberg_op(s, &[1, 0]).unwrap();
        assert_eq!(commutant_dimension(&[shift]).unwrap(), 3);
    }

    #[test]
    fn sigma_ops_examples() {
        let f = PrimeField::new(3).unwrap();
        // B = identity: both operators are the identity
        let b = FpMatrix::identity(f, 2);
        let (s, ss) = sigma_ops(&b).unwrap();
        assert!(s.sub(&ComplexOperator::identity(3, 2)).unwrap().frobenius_norm() < 1e-15);
        assert!(ss.sub(&ComplexOperator::identity(3, 2)).unwrap().frobenius_norm() < 1e-15);

        // inclusion of the first coordinate: sigma* extends by zero
        let b = FpMatrix::from_rows(f, &[vec![1, 0]]).unwrap();
        let (s, ss) = sigma_ops(&b).unwrap();
        assert_eq!(s.rows(), 3);
        assert_eq!(s.cols(), 9);
        let prod = s.mul(&ss).unwrap();
        assert!(prod.sub(&ComplexOperator::identity(3, 1)).unwrap().frobenius_norm() < 1e-12);
        // a point off the axis has a zero column in sigma*
        for y in 0..9usize {
            let pt = crate::operator::index_point(3, 2, y);
            if pt[1] != 0 {
                for x in 0..3usize {
                    assert_eq!(ss.at(y, x), Complex64::new(0.0, 0.0));
                }
            }
        }

        // random injective B over F_3, mu=1, nu=2: sigma sigma* = I
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for _ in 0..20 {
            let row: Vec<u64> = (0..2).map(|_| rng.random_range(0..3)).collect();
            let b = FpMatrix::from_rows(f, &[row]).unwrap();
            if b.rank() < 1 {
                continue;
            }
            let (s, ss) = sigma_ops(&b).unwrap();
            let prod = s.mul(&ss).unwrap();
            assert!(prod.sub(&ComplexOperator::identity(3, 1)).unwrap().frobenius_norm() < 1e-12);
        }

        // non-injective B errors
        let bad = FpMatrix::from_rows(f, &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(sigma_ops(&bad).is_err());
    }
}
