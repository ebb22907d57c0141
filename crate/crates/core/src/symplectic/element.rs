//! Verified elements of Sp(2n, F_p) and the generator alphabet
//! {H(a), N+(b), J_k}.
//!
//! H(a) is (a, 0; 0, a^{-T}) for invertible a, N+(b) is (1, b; 0, 1) for
//! symmetric b, and J_k rotates the k-th coordinate pair: x_k -> y_k,
//! y_k -> -x_k. These generate the whole group; see [`super::decompose`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

use super::SymplecticSpace;

/// An element of Sp(2n, F_p); construction checks form preservation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymplecticElement {
    space: SymplecticSpace,
    matrix: FpMatrix,
}

impl SymplecticElement {
    pub fn new(space: SymplecticSpace, matrix: FpMatrix) -> Result<Self> {
        if matrix.rows() != space.dim() || matrix.cols() != space.dim() {
            return Err(Error::dim(format!("matrix must be {0} x {0}", space.dim())));
        }
        if !space.is_symplectic(&matrix) {
            return Err(Error::NotSymplectic);
        }
        Ok(SymplecticElement { space, matrix })
    }

    pub fn identity(space: SymplecticSpace) -> Self {
        SymplecticElement {
            space,
            matrix: FpMatrix::identity(space.field(), space.dim()),
        }
    }

    #[inline]
    pub fn space(&self) -> SymplecticSpace {
        self.space
    }

    #[inline]
    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == FpMatrix::identity(self.space.field(), self.space.dim())
    }

    pub fn mul(&self, other: &SymplecticElement) -> Result<SymplecticElement> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch("group elements on different spaces".into()));
        }
        Ok(SymplecticElement {
            space: self.space,
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn inverse(&self) -> SymplecticElement {
        SymplecticElement {
            space: self.space,
            matrix: self.matrix.inverse().expect("symplectic matrices are invertible"),
        }
    }

    /// The n x n blocks (a, b; c, d).
    pub fn blocks(&self) -> (FpMatrix, FpMatrix, FpMatrix, FpMatrix) {
        let n = self.space.half_dim();
        (
            self.matrix.block(0, n, 0, n),
            self.matrix.block(0, n, n, 2 * n),
            self.matrix.block(n, 2 * n, 0, n),
            self.matrix.block(n, 2 * n, n, 2 * n),
        )
    }

    /// The block identities satisfied by symplectic matrices in the
    /// row-vector convention: a^T c symmetric and a d^T - b c^T = 1.
    pub fn block_identities_hold(&self) -> bool {
        let (a, b, c, d) = self.blocks();
        let atc = a.transpose().mul(&c);
        let lhs = a.mul(&d.transpose()).sub(&b.mul(&c.transpose()));
        atc.is_symmetric() && lhs == FpMatrix::identity(self.space.field(), self.space.half_dim())
    }
}

/// One letter of a generator word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GeneratorLetter {
    /// (a, 0; 0, a^{-T}) with a invertible.
    H(FpMatrix),
    /// (1, b; 0, 1) with b = b^T.
    NPlus(FpMatrix),
    /// Rotation of the k-th coordinate pair, 1-based index.
    J(usize),
}

/// An ordered word in the alphabet {H, N+, J}; evaluates left to right.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GeneratorWord {
    pub letters: Vec<GeneratorLetter>,
}

impl GeneratorWord {
    pub fn new(letters: Vec<GeneratorLetter>) -> Self {
        GeneratorWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Drops identity letters and merges adjacent H letters.
    pub fn simplified(&self, space: SymplecticSpace) -> GeneratorWord {
        let n = space.half_dim();
        let id = FpMatrix::identity(space.field(), n);
        let mut out: Vec<GeneratorLetter> = Vec::new();
        for letter in &self.letters {
            match letter {
                GeneratorLetter::H(a) if *a == id => {}
                GeneratorLetter::NPlus(b) if b.is_zero() => {}
                GeneratorLetter::H(a) => {
                    if let Some(GeneratorLetter::H(prev)) = out.last_mut() {
                        let merged = prev.mul(a);
                        if merged == id {
                            out.pop();
                        } else {
                            *prev = merged;
                        }
                    } else {
                        out.push(GeneratorLetter::H(a.clone()));
                    }
                }
                other => out.push(other.clone()),
            }
        }
        GeneratorWord { letters: out }
    }
}

/// Builds the symplectic element for a single generator letter.
pub fn make_generator(space: SymplecticSpace, letter: &GeneratorLetter) -> Result<SymplecticElement> {
    let f = space.field();
    let n = space.half_dim();
    let matrix = match letter {
        GeneratorLetter::H(a) => {
            if a.rows() != n || a.cols() != n {
                return Err(Error::dim(format!("H block must be {n} x {n}")));
            }
            let a_inv_t = a.inverse()?.transpose();
            let mut m = FpMatrix::zeros(f, 2 * n, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, j, a.at(i, j));
                    m.set(n + i, n + j, a_inv_t.at(i, j));
                }
            }
            m
        }
        GeneratorLetter::NPlus(b) => {
            if b.rows() != n || b.cols() != n {
                return Err(Error::dim(format!("N+ block must be {n} x {n}")));
            }
            if !b.is_symmetric() {
                return Err(Error::NotSymmetric);
            }
            let mut m = FpMatrix::identity(f, 2 * n);
            for i in 0..n {
                for j in 0..n {
                    m.set(i, n + j, b.at(i, j));
                }
            }
            m
        }
        GeneratorLetter::J(k) => {
            if *k == 0 || *k > n {
                return Err(Error::CoordinateOutOfRange { index: *k, n });
            }
            let mut m = FpMatrix::identity(f, 2 * n);
            let i = k - 1;
            m.set(i, i, 0);
            m.set(n + i, n + i, 0);
            m.set(i, n + i, 1);
            m.set(n + i, i, f.neg(1));
            m
        }
    };
    SymplecticElement::new(space, matrix)
}

/// Left-to-right product of the word's letters.
pub fn evaluate_word(space: SymplecticSpace, word: &GeneratorWord) -> Result<SymplecticElement> {
    let mut acc = SymplecticElement::identity(space);
    for letter in &word.letters {
        acc = acc.mul(&make_generator(space, letter)?)?;
    }
    Ok(acc)
}

/// Random invertible n x n matrix by rejection.
pub fn random_invertible(space: SymplecticSpace, rng: &mut impl Rng) -> FpMatrix {
    let f = space.field();
    let p = f.modulus();
    let n = space.half_dim();
    loop {
        let rows: Vec<Vec<u64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.random_range(0..p)).collect())
            .collect();
        let m = FpMatrix::from_rows(f, &rows).expect("square rows");
        if m.rank() == n {
            return m;
        }
    }
}

fn random_symmetric(space: SymplecticSpace, rng: &mut impl Rng) -> FpMatrix {
    let f = space.field();
    let p = f.modulus();
    let n = space.half_dim();
    let mut m = FpMatrix::zeros(f, n, n);
    for i in 0..n {
        for j in i..n {
            let v = rng.random_range(0..p);
            m.set(i, j, v);
            m.set(j, i, v);
        }
    }
    m
}

/// Random group element as a product of 10..=30 random generator letters.
/// The generators span the group, so word sampling reaches everything.
pub fn random_element(space: SymplecticSpace, rng: &mut impl Rng) -> SymplecticElement {
    if space.half_dim() == 0 {
        return SymplecticElement::identity(space);
    }
    let len = rng.random_range(10..=30);
    let mut word = Vec::with_capacity(len);
    for _ in 0..len {
        let letter = match rng.random_range(0..3u8) {
            0 => GeneratorLetter::H(random_invertible(space, rng)),
            1 => GeneratorLetter::NPlus(random_symmetric(space, rng)),
            _ => GeneratorLetter::J(rng.random_range(1..=space.half_dim())),
        };
        word.push(letter);
    }
    evaluate_word(space, &GeneratorWord::new(word)).expect("generator letters are valid")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn space(p: u64, n: usize) -> SymplecticSpace {
        SymplecticSpace::new(PrimeField::new(p).unwrap(), n)
    }

    #[test]
    fn is_symplectic_examples() {
        let s = space(3, 1);
        assert!(s.is_symplectic(&FpMatrix::identity(s.field(), 2)));

        let j1 = make_generator(s, &GeneratorLetter::J(1)).unwrap();
        assert_eq!(
            j1.matrix(),
            &FpMatrix::from_signed_rows(s.field(), &[vec![0, 1], vec![-1, 0]]).unwrap()
        );

        // diag(2, 1) scales the form by 2, hence is not symplectic
        let bad = FpMatrix::from_rows(s.field(), &[vec![2, 0], vec![0, 1]]).unwrap();
        assert!(!s.is_symplectic(&bad));
        assert!(SymplecticElement::new(s, bad).is_err());
    }

    #[test]
    fn generator_examples() {
        let s = space(3, 2);
        let h = make_generator(s, &GeneratorLetter::H(FpMatrix::identity(s.field(), 2))).unwrap();
        assert!(h.is_identity());
        let np = make_generator(s, &GeneratorLetter::NPlus(FpMatrix::zeros(s.field(), 2, 2))).unwrap();
        assert!(np.is_identity());
    }

    #[test]
    fn generator_validation_errors() {
        let s = space(3, 2);
        let sing = FpMatrix::from_rows(s.field(), &[vec![1, 2], vec![2, 4]]).unwrap();
        assert!(matches!(
            make_generator(s, &GeneratorLetter::H(sing)),
            Err(Error::NotInvertible)
        ));
        let asym = FpMatrix::from_rows(s.field(), &[vec![0, 1], vec![2, 0]]).unwrap();
        assert!(matches!(
            make_generator(s, &GeneratorLetter::NPlus(asym)),
            Err(Error::NotSymmetric)
        ));
        assert!(matches!(
            make_generator(s, &GeneratorLetter::J(3)),
            Err(Error::CoordinateOutOfRange { .. })
        ));
    }

    #[test]
    fn random_elements_preserve_form_exhaustively_at_n1() {
        let s = space(3, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vectors: Vec<Vec<u64>> =
            crate::linalg::FpSubspace::full(s.field(), 2).enumerate_vectors();
        for _ in 0..20 {
            let g = random_element(s, &mut rng);
            for u in &vectors {
                for v in &vectors {
                    let lhs = s
                        .form(&g.matrix().apply_row(u), &g.matrix().apply_row(v))
                        .unwrap();
                    assert_eq!(lhs, s.form(u, v).unwrap());
                }
            }
        }
    }

    #[test]
    fn random_elements_preserve_form_randomized_at_n2() {
        let s = space(3, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..1000 {
            let g = random_element(s, &mut rng);
            let u: Vec<u64> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let v: Vec<u64> = (0..4).map(|_| rng.random_range(0..3)).collect();
            let lhs = s
                .form(&g.matrix().apply_row(&u), &g.matrix().apply_row(&v))
                .unwrap();
            assert_eq!(lhs, s.form(&u, &v).unwrap());
            assert!(g.block_identities_hold());
        }
    }
}
