//! Dense complex operators on l^2(F_p^n).
//!
//! Rows and columns are indexed by points of F_p^n in a fixed
//! lexicographic order (first coordinate most significant). Everything
//! stays dense: at p^n <= 625 exactness concerns dominate and dense is
//! simplest.
//!
//! The module also houses the numeric oracles shared by the property
//! suites: a one-sided Jacobi SVD (chosen for its relative accuracy on
//! small singular values), the scalar-proportionality comparator, and
//! the commutant dimension computation.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default relative Frobenius tolerance for operator identities. Entries
/// are products of at most ~50 unit-modulus factors and 1/sqrt(p)
/// scalings, so double precision leaves several orders of margin.
pub const DEFAULT_TOL: f64 = 1e-8;

/// Relative threshold below which a singular value counts as null.
pub const NULLITY_REL_TOL: f64 = 1e-10;

/// The next singular value must exceed this relative threshold for a
/// nullspace certificate to be accepted.
pub const GAP_REL_TOL: f64 = 1e-6;

/// Index of a point of F_p^n in lexicographic order.
pub fn point_index(p: u64, pt: &[u64]) -> usize {
    pt.iter().fold(0usize, |acc, &c| acc * p as usize + c as usize)
}

/// Point of F_p^n for a lexicographic index.
pub fn index_point(p: u64, n: usize, mut idx: usize) -> Vec<u64> {
    let mut pt = vec![0u64; n];
    for c in pt.iter_mut().rev() {
        *c = (idx % p as usize) as u64;
        idx /= p as usize;
    }
    pt
}

/// All points of F_p^n in lexicographic order.
pub fn points(p: u64, n: usize) -> Vec<Vec<u64>> {
    let count = (p as usize).pow(n as u32);
    (0..count).map(|i| index_point(p, n, i)).collect()
}

/// A dense complex matrix mapping l^2(F_p^{n_in}) to l^2(F_p^{n_out}).
#[derive(Debug, Clone)]
pub struct ComplexOperator {
    p: u64,
    n_in: usize,
    n_out: usize,
    entries: Vec<Complex64>,
}

impl ComplexOperator {
    pub fn zeros(p: u64, n_out: usize, n_in: usize) -> Self {
        let rows = (p as usize).pow(n_out as u32);
        let cols = (p as usize).pow(n_in as u32);
        ComplexOperator {
            p,
            n_in,
            n_out,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zeros(p, n, n);
        for i in 0..m.rows() {
            let idx = i * m.cols() + i;
            m.entries[idx] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds entry (x, y) from output point x and input point y.
    pub fn from_fn(
        p: u64,
        n_out: usize,
        n_in: usize,
        mut f: impl FnMut(&[u64], &[u64]) -> Complex64,
    ) -> Self {
        let mut m = Self::zeros(p, n_out, n_in);
        let out_pts = points(p, n_out);
        let in_pts = points(p, n_in);
        for (i, x) in out_pts.iter().enumerate() {
            for (j, y) in in_pts.iter().enumerate() {
                let idx = i * in_pts.len() + j;
                m.entries[idx] = f(x, y);
            }
        }
        m
    }

    pub fn from_entries(p: u64, n_out: usize, n_in: usize, entries: Vec<Complex64>) -> Result<Self> {
        let rows = (p as usize).pow(n_out as u32);
        let cols = (p as usize).pow(n_in as u32);
        if entries.len() != rows * cols {
            return Err(Error::dim(format!(
                "expected {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::invalid("operator", "entries must be finite"));
        }
        Ok(ComplexOperator {
            p,
            n_in,
            n_out,
            entries,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn n_in(&self) -> usize {
        self.n_in
    }

    #[inline]
    pub fn n_out(&self) -> usize {
        self.n_out
    }

    #[inline]
    pub fn rows(&self) -> usize {
        (self.p as usize).pow(self.n_out as u32)
    }

    #[inline]
    pub fn cols(&self) -> usize {
        (self.p as usize).pow(self.n_in as u32)
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols() + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        let cols = self.cols();
        self.entries[r * cols + c] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn same_shape(&self, other: &ComplexOperator) -> bool {
        self.p == other.p && self.n_in == other.n_in && self.n_out == other.n_out
    }

    pub fn mul(&self, other: &ComplexOperator) -> Result<ComplexOperator> {
        if self.p != other.p || self.n_in != other.n_out {
            return Err(Error::dim("operator shapes do not compose"));
        }
        let mut out = ComplexOperator::zeros(self.p, self.n_out, other.n_in);
        let (m, k, n) = (self.rows(), self.cols(), other.cols());
        for i in 0..m {
            for l in 0..k {
                let a = self.entries[i * k + l];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[l * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexOperator) -> Result<ComplexOperator> {
        if !self.same_shape(other) {
            return Err(Error::dim("operator shapes differ"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(ComplexOperator {
            entries,
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &ComplexOperator) -> Result<ComplexOperator> {
        if !self.same_shape(other) {
            return Err(Error::dim("operator shapes differ"));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Ok(ComplexOperator {
            entries,
            ..self.clone()
        })
    }

    pub fn scale(&self, c: Complex64) -> ComplexOperator {
        ComplexOperator {
            entries: self.entries.iter().map(|e| e * c).collect(),
            ..self.clone()
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexOperator {
        let mut out = ComplexOperator::zeros(self.p, self.n_in, self.n_out);
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                out.set(j, i, self.at(i, j).conj());
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|e| e.norm()).fold(0.0, f64::max)
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        if self.n_in != self.n_out {
            return false;
        }
        let prod = self.adjoint().mul(self).expect("square shapes compose");
        let id = ComplexOperator::identity(self.p, self.n_in).scale(Complex64::new(1.0, 0.0));
        prod.sub(&id)
            .map(|d| d.frobenius_norm() <= tol * (self.rows() as f64).sqrt())
            .unwrap_or(false)
    }

    fn first_significant_phase(&self) -> Result<Complex64> {
        let max = self.max_abs();
        if max == 0.0 {
            return Err(Error::ZeroOperator);
        }
        let e = self
            .entries
            .iter()
            .find(|e| e.norm() > 1e-9 * max)
            .expect("max_abs positive implies a significant entry");
        Ok(e / e.norm())
    }

    /// Rotates by a unit scalar so the first significant entry in
    /// lexicographic order becomes positive real; the norm is untouched.
    /// This pins the phase gauge of unitary representatives.
    pub fn with_canonical_phase(&self) -> Result<ComplexOperator> {
        let phase = self.first_significant_phase()?;
        Ok(self.scale(phase.conj()))
    }

    /// Canonical scalar normalization: Frobenius norm 1 and first
    /// significant entry positive real. Two operators are equal up to a
    /// scalar iff their canonical forms agree.
    pub fn canonicalized(&self) -> Result<ComplexOperator> {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return Err(Error::ZeroOperator);
        }
        self.scale(Complex64::new(1.0 / norm, 0.0)).with_canonical_phase()
    }
}

/// The scalar c minimizing ||a - c b||_F, accepted only when the residual
/// is at most `tol * ||a||_F`. A zero b is reported separately from a
/// non-proportional pair.
pub fn scalar_ratio(a: &ComplexOperator, b: &ComplexOperator, tol: f64) -> Result<Complex64> {
    if !a.same_shape(b) {
        return Err(Error::dim("operators must share a shape"));
    }
    let nb2: f64 = b.entries.iter().map(|e| e.norm_sqr()).sum();
    if nb2 == 0.0 {
        return Err(Error::ZeroOperator);
    }
    let inner: Complex64 = b
        .entries
        .iter()
        .zip(&a.entries)
        .map(|(bb, aa)| bb.conj() * aa)
        .sum();
    let c = inner / nb2;
    let na = a.frobenius_norm();
    let residual = a.sub(&b.scale(c))?.frobenius_norm();
    if residual <= tol * na {
        Ok(c)
    } else {
        Err(Error::NotProportional {
            residual: residual / na.max(f64::MIN_POSITIVE),
        })
    }
}

/// Convenience wrapper using [`DEFAULT_TOL`].
pub fn scalar_ratio_default(a: &ComplexOperator, b: &ComplexOperator) -> Result<Complex64> {
    scalar_ratio(a, b, DEFAULT_TOL)
}

/// Singular value decomposition data: values sorted descending with the
/// matching orthonormal right singular vectors.
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<Vec<Complex64>>,
}

impl Svd {
    /// Number of singular values below `NULLITY_REL_TOL * sigma_max`.
    pub fn nullity(&self) -> usize {
        let max = self.singular_values.first().copied().unwrap_or(0.0);
        if max == 0.0 {
            return self.singular_values.len();
        }
        self.singular_values
            .iter()
            .filter(|&&s| s < NULLITY_REL_TOL * max)
            .count()
    }

    /// Ratio between the smallest non-null and the null singular value.
    pub fn spectral_gap(&self) -> f64 {
        let k = self.singular_values.len();
        if k < 2 {
            return f64::INFINITY;
        }
        let null = self.singular_values[k - 1];
        let next = self.singular_values[k - 2];
        if null == 0.0 {
            f64::INFINITY
        } else {
            next / null
        }
    }
}

/// One-sided Jacobi SVD of a dense complex matrix given row-major.
/// Jacobi is chosen over a Gram-matrix eigen approach because the small
/// singular values come out with full relative accuracy, which the
/// nullspace certificates rely on.
pub fn jacobi_svd(rows: usize, cols: usize, data: &[Complex64]) -> Result<Svd> {
    assert_eq!(data.len(), rows * cols);
    let mut b: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| data[i * cols + j]).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            let mut col = vec![Complex64::new(0.0, 0.0); cols];
            col[j] = Complex64::new(1.0, 0.0);
            col
        })
        .collect();

    const MAX_SWEEPS: usize = 64;
    const REL_EPS: f64 = 1e-13;
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..rows {
                    alpha += b[i][r].norm_sqr();
                    beta += b[j][r].norm_sqr();
                    gamma += b[i][r].conj() * b[j][r];
                }
                let scale = (alpha * beta).sqrt();
                if gamma.norm() <= REL_EPS * scale || scale == 0.0 {
                    continue;
                }
                rotated = true;
                let absg = gamma.norm();
                let phi = gamma / absg;
                let tau = (beta - alpha) / (2.0 * absg);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let (ci, cj) = (i.min(j), i.max(j));
                debug_assert!(ci < cj);
                for mat in [&mut b, &mut v] {
                    let (left, right) = mat.split_at_mut(cj);
                    let bi = &mut left[ci];
                    let bj = &mut right[0];
                    for r in 0..bi.len() {
                        let x = bi[r];
                        let y = bj[r];
                        bi[r] = c * x - s * phi.conj() * y;
                        bj[r] = s * phi * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = b
        .iter()
        .map(|col| col.iter().map(|e| e.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));
    Ok(Svd {
        singular_values: order.iter().map(|&k| norms[k]).collect(),
        right_vectors: order.iter().map(|&k| v[k].clone()).collect(),
    })
}

/// Dimension of { X : X a = a X for every a in ops }, computed as the
/// nullity of the stacked commutator system.
pub fn commutant_dimension(ops: &[ComplexOperator]) -> Result<usize> {
    let first = ops.first().ok_or(Error::invalid("operator list", "empty"))?;
    if first.n_in != first.n_out {
        return Err(Error::dim("commutant requires square operators"));
    }
    let n = first.rows();
    for op in ops {
        if !op.same_shape(first) {
            return Err(Error::dim("operators of mixed shapes"));
        }
    }
    let unknowns = n * n;
    let mut system = vec![Complex64::new(0.0, 0.0); ops.len() * unknowns * unknowns];
    let mut row = 0;
    for a in ops {
        for i in 0..n {
            for j in 0..n {
                // (X a - a X)[i][j] = sum_k X[i,k] a[k,j] - a[i,k] X[k,j]
                let base = row * unknowns;
                for k in 0..n {
                    system[base + i * n + k] += a.at(k, j);
                    system[base + k * n + j] -= a.at(i, k);
                }
                row += 1;
            }
        }
    }
    let svd = jacobi_svd(ops.len() * unknowns, unknowns, &system)?;
    Ok(svd.nullity())
}
