//! JSON wire formats for every document the engine exchanges.
//!
//! Field elements serialize as plain integers in [0, p); the modulus p
//! travels in a top-level header field of every document. Subspace bases
//! are guaranteed RREF on emission and re-canonicalized on ingestion, so
//! a round trip through serialization is the identity on canonical
//! forms. Operators carry an explicit "indexing": "lex" marker to guard
//! against ordering drift.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::gauss::GaussianData;
use crate::linalg::{FpMatrix, FpSubspace, QuadraticForm};
use crate::operator::ComplexOperator;
use crate::relations::LinearRelation;
use crate::symplectic::{GeneratorLetter, GeneratorWord, SymplecticElement, SymplecticSpace};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementDoc {
    pub p: u64,
    pub n: usize,
    pub matrix: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum LetterDoc {
    H(Vec<Vec<u64>>),
    Nplus(Vec<Vec<u64>>),
    J(usize),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WordDoc {
    pub p: u64,
    pub n: usize,
    pub letters: Vec<LetterDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceDoc {
    pub ambient: usize,
    pub basis: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RelationDoc {
    pub p: u64,
    pub m: usize,
    pub n: usize,
    /// Basis rows of length 2m + 2n, coordinates ordered (source | target).
    pub basis: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorDoc {
    pub p: u64,
    pub n_in: usize,
    pub n_out: usize,
    /// Always "lex": rows and columns enumerate F_p^n lexicographically.
    pub indexing: String,
    /// Row-major [re, im] pairs.
    pub entries: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GaussianDoc {
    pub p: u64,
    pub mu: usize,
    pub nu: usize,
    pub h: SubspaceDoc,
    /// Upper-triangular coefficients of Q on F_p^{mu+nu}.
    pub q: Vec<Vec<u64>>,
    pub scale: [f64; 2],
}

fn matrix_to_rows(m: &FpMatrix) -> Vec<Vec<u64>> {
    m.row_vectors().map(|r| r.to_vec()).collect()
}

fn matrix_from_rows(field: PrimeField, rows: &[Vec<u64>], what: &'static str) -> Result<FpMatrix> {
    FpMatrix::from_rows(field, rows).map_err(|e| Error::Invalid {
        what,
        why: e.to_string(),
    })
}

pub fn element_to_doc(g: &SymplecticElement) -> ElementDoc {
    ElementDoc {
        p: g.space().field().modulus(),
        n: g.space().half_dim(),
        matrix: matrix_to_rows(g.matrix()),
    }
}

pub fn element_from_doc(doc: &ElementDoc) -> Result<SymplecticElement> {
    let field = PrimeField::new(doc.p)?;
    let space = SymplecticSpace::new(field, doc.n);
    let m = matrix_from_rows(field, &doc.matrix, "element matrix")?;
    SymplecticElement::new(space, m)
}

pub fn word_to_doc(space: SymplecticSpace, word: &GeneratorWord) -> WordDoc {
    WordDoc {
        p: space.field().modulus(),
        n: space.half_dim(),
        letters: word
            .letters
            .iter()
            .map(|l| match l {
                GeneratorLetter::H(a) => LetterDoc::H(matrix_to_rows(a)),
                GeneratorLetter::NPlus(b) => LetterDoc::Nplus(matrix_to_rows(b)),
                GeneratorLetter::J(k) => LetterDoc::J(*k),
            })
            .collect(),
    }
}

pub fn word_from_doc(doc: &WordDoc) -> Result<(SymplecticSpace, GeneratorWord)> {
    let field = PrimeField::new(doc.p)?;
    let space = SymplecticSpace::new(field, doc.n);
    let letters = doc
        .letters
        .iter()
        .map(|l| {
            Ok(match l {
                LetterDoc::H(a) => GeneratorLetter::H(matrix_from_rows(field, a, "H letter")?),
                LetterDoc::Nplus(b) => {
                    GeneratorLetter::NPlus(matrix_from_rows(field, b, "Nplus letter")?)
                }
                LetterDoc::J(k) => GeneratorLetter::J(*k),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // validate each letter eagerly
    let word = GeneratorWord::new(letters);
    for letter in &word.letters {
        crate::symplectic::make_generator(space, letter)?;
    }
    Ok((space, word))
}

pub fn subspace_to_doc(s: &FpSubspace) -> SubspaceDoc {
    SubspaceDoc {
        ambient: s.ambient_dim(),
        basis: matrix_to_rows(s.basis()),
    }
}

pub fn subspace_from_doc(field: PrimeField, doc: &SubspaceDoc) -> Result<FpSubspace> {
    FpSubspace::from_rows(field, doc.ambient, &doc.basis)
}

pub fn relation_to_doc(t: &LinearRelation) -> RelationDoc {
    RelationDoc {
        p: t.source().field().modulus(),
        m: t.source().half_dim(),
        n: t.target().half_dim(),
        basis: matrix_to_rows(t.subspace().basis()),
    }
}

pub fn relation_from_doc(doc: &RelationDoc) -> Result<LinearRelation> {
    let field = PrimeField::new(doc.p)?;
    let source = SymplecticSpace::new(field, doc.m);
    let target = SymplecticSpace::new(field, doc.n);
    LinearRelation::from_rows(source, target, &doc.basis)
}

pub fn operator_to_doc(op: &ComplexOperator) -> OperatorDoc {
    OperatorDoc {
        p: op.p(),
        n_in: op.n_in(),
        n_out: op.n_out(),
        indexing: "lex".into(),
        entries: op.entries().iter().map(|e| [e.re, e.im]).collect(),
    }
}

pub fn operator_from_doc(doc: &OperatorDoc) -> Result<ComplexOperator> {
    if doc.indexing != "lex" {
        return Err(Error::invalid(
            "operator document",
            format!("unsupported indexing '{}'", doc.indexing),
        ));
    }
    PrimeField::new(doc.p)?;
    let entries: Vec<Complex64> = doc
        .entries
        .iter()
        .map(|&[re, im]| Complex64::new(re, im))
        .collect();
    ComplexOperator::from_entries(doc.p, doc.n_out, doc.n_in, entries)
}

pub fn gaussian_to_doc(g: &GaussianData) -> GaussianDoc {
    GaussianDoc {
        p: g.field().modulus(),
        mu: g.mu(),
        nu: g.nu(),
        h: subspace_to_doc(g.support()),
        q: matrix_to_rows(g.form().coeffs()),
        scale: [g.scale().re, g.scale().im],
    }
}

pub fn gaussian_from_doc(doc: &GaussianDoc) -> Result<GaussianData> {
    let field = PrimeField::new(doc.p)?;
    let h = subspace_from_doc(field, &doc.h)?;
    let q = QuadraticForm::new(matrix_from_rows(field, &doc.q, "quadratic form")?)?;
    GaussianData::new(
        doc.mu,
        doc.nu,
        h,
        q,
        Complex64::new(doc.scale[0], doc.scale[1]),
    )
}
