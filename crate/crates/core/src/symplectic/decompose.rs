//! Constructive decomposition of a symplectic matrix into a word in the
//! generator alphabet {H, N+, J}.
//!
//! The algorithm normalizes the a-block to (0, 0; 0, I_r) with H letters
//! on both sides, kills the matching c-block corner with an N- element,
//! rotates the invertible corner in with J_1..J_l, and finishes with one
//! H and one N+ letter. N- never appears in the output: it is rewritten
//! at word level as a (J_1..J_n)-conjugate of N+.

use crate::error::{Error, Result};
use crate::linalg::FpMatrix;

use super::element::{evaluate_word, make_generator, GeneratorLetter, GeneratorWord,
                     SymplecticElement};
use super::SymplecticSpace;

/// Tracked row reduction: returns (u, r) with u invertible and u * m = r
/// in RREF, together with the pivot columns.
fn tracked_rref(m: &FpMatrix) -> (FpMatrix, FpMatrix, Vec<usize>) {
    let n = m.rows();
    let aug = m.hstack(&FpMatrix::identity(m.field(), n));
    let (red, _, _) = aug.rref();
    let r = red.col_range(0, m.cols());
    let u = red.col_range(m.cols(), m.cols() + n);
    let (_, _, pivots) = m.rref();
    (u, r, pivots)
}

/// Invertible (k, l) with k * a * l = (0, 0; 0, I_r), zero block of size
/// l = n - rank(a) first.
fn rank_normal_form(a: &FpMatrix) -> (FpMatrix, FpMatrix, usize) {
    let f = a.field();
    let n = a.rows();
    let (u, r, pivots) = tracked_rref(a);
    let rank = pivots.len();
    let l = n - rank;

    // Column permutation bringing pivot columns to the front:
    // (r * pc)[., pos] = r[., order[pos]].
    let mut order: Vec<usize> = pivots.clone();
    order.extend((0..n).filter(|c| !pivots.contains(c)));
    let mut pc = FpMatrix::zeros(f, n, n);
    for (pos, &col) in order.iter().enumerate() {
        pc.set(col, pos, 1);
    }
    let rp = r.mul(&pc); // = (I_r, nonpivot part; 0, 0)

    // Clear the non-pivot part with (I, -N; 0, I).
    let mut w = FpMatrix::identity(f, n);
    for i in 0..rank {
        for j in rank..n {
            w.set(i, j, f.neg(rp.at(i, j)));
        }
    }
    let v = pc.mul(&w); // u * a * v = (I_r, 0; 0, 0)

    // Cyclic shifts moving I_r into the lower-right corner:
    // (sr * M)[i] = M[(i + rank) mod n], (M * sc)[., j] = M[., (j - l) mod n].
    let mut sr = FpMatrix::zeros(f, n, n);
    for i in 0..n {
        sr.set(i, (i + rank) % n, 1);
    }
    let mut sc = FpMatrix::zeros(f, n, n);
    for k in 0..n {
        sc.set(k, (k + l) % n, 1);
    }
    let k_mat = sr.mul(&u);
    let l_mat = v.mul(&sc);
    (k_mat, l_mat, rank)
}

/// Word for N-(c) = Theta * N+(-c) * Theta * H(-1), Theta = J_1..J_n.
fn nminus_letters(space: SymplecticSpace, c: &FpMatrix) -> Vec<GeneratorLetter> {
    let f = space.field();
    let n = space.half_dim();
    let mut letters = Vec::with_capacity(2 * n + 2);
    letters.extend((1..=n).map(GeneratorLetter::J));
    letters.push(GeneratorLetter::NPlus(c.neg()));
    letters.extend((1..=n).map(GeneratorLetter::J));
    letters.push(GeneratorLetter::H(FpMatrix::identity(f, n).neg()));
    letters
}

/// Decomposes g into a generator word whose left-to-right product equals
/// g exactly. Follows the constructive generation proof, with plain
/// Gaussian elimination supplying the rank factorization at finite
/// dimension.
pub fn decompose(g: &SymplecticElement) -> Result<GeneratorWord> {
    let space = g.space();
    let f = space.field();
    let n = space.half_dim();
    if n == 0 || g.is_identity() {
        return Ok(GeneratorWord::default());
    }

    let (a, _, _, _) = g.blocks();
    let (k_mat, l_mat, rank) = rank_normal_form(&a);
    let l = n - rank;

    let h_k = make_generator(space, &GeneratorLetter::H(k_mat.clone()))?;
    let h_l = make_generator(space, &GeneratorLetter::H(l_mat.clone()))?;
    let g1 = h_k.mul(g)?.mul(&h_l)?;

    // a1 = (0, 0; 0, I_r) forces c1 = (c11, c12; 0, c22) with c22
    // symmetric; kill c22 from the left with an N- element.
    let (a1, _, c1, _) = g1.blocks();
    debug_assert_eq!(a1.block(l, n, l, n), FpMatrix::identity(f, rank));
    let c22 = c1.block(l, n, l, n);
    debug_assert!(c22.is_symmetric());
    debug_assert!(c1.block(n - rank, n, 0, l).is_zero());

    let mut t = FpMatrix::zeros(f, n, n);
    for i in 0..rank {
        for j in 0..rank {
            t.set(l + i, l + j, f.neg(c22.at(i, j)));
        }
    }
    let g2 = if t.is_zero() {
        g1
    } else {
        let mut s = FpMatrix::identity(f, 2 * n);
        for i in 0..n {
            for j in 0..n {
                s.set(n + i, j, t.at(i, j));
            }
        }
        SymplecticElement::new(space, s.mul(g1.matrix()))?
    };

    // Rotate the invertible corner of c into the a-block.
    let mut g3 = g2.clone();
    for k in 1..=l {
        g3 = make_generator(space, &GeneratorLetter::J(k))?.mul(&g3)?;
    }

    let (a3, b3, c3, _) = g3.blocks();
    debug_assert!(c3.is_zero());
    let a3_inv = a3.inverse().map_err(|_| Error::NotSymplectic)?;
    let m = a3_inv.mul(&b3);
    debug_assert!(m.is_symmetric());

    // J_1..J_l * N-(t) * H(K) * g * H(L) = H(a3) * N+(m), so
    // g = H(K^-1) N-(-t) (J_1..J_l)^-1 H(a3) N+(m) H(L^-1)
    let mut letters = Vec::new();
    letters.push(GeneratorLetter::H(k_mat.inverse()?));
    if !t.is_zero() {
        letters.extend(nminus_letters(space, &t.neg()));
    }
    if l > 0 {
        // (J_1..J_l)^-1 = J_1..J_l followed by H(diag(-1 x l, 1 x r))
        letters.extend((1..=l).map(GeneratorLetter::J));
        let mut eps = FpMatrix::identity(f, n);
        for i in 0..l {
            eps.set(i, i, f.neg(1));
        }
        letters.push(GeneratorLetter::H(eps));
    }
    letters.push(GeneratorLetter::H(a3));
    if !m.is_zero() {
        letters.push(GeneratorLetter::NPlus(m));
    }
    letters.push(GeneratorLetter::H(l_mat.inverse()?));

    let word = GeneratorWord::new(letters).simplified(space);
    let check = evaluate_word(space, &word)?;
    assert_eq!(
        check.matrix(),
        g.matrix(),
        "decomposition must reproduce the element exactly"
    );
    Ok(word)
}
