//! Dense complex matrices and the Hermitian eigensolver.
//!
//! Entries are stored row-major. Every tensor-factor convention in the crate
//! follows from that: for factors of dimensions `[d0, d1, ...]` the composite
//! index of `(i0, i1, ...)` is `i0 * (d1 * d2 * ...) + i1 * (d2 * ...) + ...`.

use std::fmt;
use std::ops::{Add, AddAssign, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{QopError, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Tolerance on `max |A - A^dagger|` accepted by [`ComplexMatrix::eigh`].
pub const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects non-finite values.
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(QopError::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(QopError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(QopError::Malformed(format!(
                "non-finite entry at row {}, col {}",
                pos / cols,
                pos % cols
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_vec_unchecked(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(QopError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(rows.len(), ncols, rows.concat())
    }

    /// Real-valued convenience constructor.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_vec_unchecked(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn diag(values: &[C64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let v: Vec<C64> = values.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::diag(&v)
    }

    /// `|u><v|` for column vectors `u`, `v`.
    pub fn outer(u: &[C64], v: &[C64]) -> Self {
        let mut data = Vec::with_capacity(u.len() * v.len());
        for a in u {
            for b in v {
                data.push(a * b.conj());
            }
        }
        Self::from_vec_unchecked(u.len(), v.len(), data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn row(&self, r: usize) -> &[C64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.rows).map(|r| self[(r, c)]).collect()
    }

    fn require_square(&self, what: &str) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(QopError::DimensionMismatch(format!(
                "{what} requires a square matrix, got {}x{}",
                self.rows, self.cols
            )))
        }
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(QopError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.mul_unchecked(other))
    }

    /// i-k-j loop order; each output row accumulates in a fixed order.
    pub(crate) fn mul_unchecked(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (n, m, p) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * p];
        for i in 0..n {
            let out_row = &mut out[i * p..(i + 1) * p];
            for k in 0..m {
                let a = self.data[i * m + k];
                if a == ZERO {
                    continue;
                }
                let b_row = &other.data[k * p..(k + 1) * p];
                for (o, b) in out_row.iter_mut().zip(b_row) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix::from_vec_unchecked(n, p, out)
    }

    pub fn matvec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(QopError::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Kronecker product: block `(i, j)` of the result is `self[i, j] * other`.
    pub fn kron(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let (ra, ca, rb, cb) = (self.rows, self.cols, other.rows, other.cols);
        let cols = ca * cb;
        let mut out = vec![ZERO; ra * rb * cols];
        for i in 0..ra {
            for j in 0..ca {
                let a = self.data[i * ca + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..rb {
                    let row = (i * rb + k) * cols + j * cb;
                    for l in 0..cb {
                        out[row + l] = a * other.data[k * cb + l];
                    }
                }
            }
        }
        ComplexMatrix::from_vec_unchecked(ra * rb, cols, out)
    }

    pub fn transpose(&self) -> ComplexMatrix {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self[(r, c)]);
            }
        }
        ComplexMatrix::from_vec_unchecked(self.cols, self.rows, out)
    }

    pub fn conj(&self) -> ComplexMatrix {
        self.map(|z| z.conj())
    }

    pub fn dagger(&self) -> ComplexMatrix {
        let mut out = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                out.push(self[(r, c)].conj());
            }
        }
        ComplexMatrix::from_vec_unchecked(self.cols, self.rows, out)
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> ComplexMatrix {
        ComplexMatrix::from_vec_unchecked(self.rows, self.cols, self.data.iter().map(|&z| f(z)).collect())
    }

    pub fn scale(&self, s: C64) -> ComplexMatrix {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: f64) -> ComplexMatrix {
        self.map(|z| z * s)
    }

    pub fn trace(&self) -> Result<C64> {
        let n = self.require_square("trace")?;
        Ok((0..n).map(|i| self[(i, i)]).sum())
    }

    /// Hilbert-Schmidt inner product `Tr(self^dagger other)`, conjugate-linear
    /// in `self`.
    pub fn hs_inner(&self, other: &ComplexMatrix) -> Result<C64> {
        self.require_square("hs_inner")?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QopError::DimensionMismatch(format!(
                "hs_inner of {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |self - other|` over entries; infinite when shapes differ.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data.iter().zip(&other.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// `max |A - A^dagger|`; infinite for non-square input.
    pub fn hermiticity_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_deviation() <= tol
    }

    /// `(A + A^dagger) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.rows;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        out
    }

    /// Hermitian eigendecomposition by cyclic complex Jacobi rotations.
    ///
    /// The input is symmetrized as `(A + A^dagger)/2` first. Eigenvalues are
    /// returned in descending order; the routine is deterministic.
    pub fn eigh(&self) -> Result<EigenDecomposition> {
        self.require_square("eigh")?;
        let deviation = self.hermiticity_deviation();
        if deviation > HERMITIAN_TOL {
            return Err(QopError::NotHermitian { deviation });
        }
        Ok(jacobi_eigh(self.hermitian_part()))
    }

    /// Singular values in descending order (one-sided Jacobi).
    pub fn singular_values(&self) -> Vec<f64> {
        one_sided_jacobi_sv(self)
    }

    /// Partial trace over the tensor factors listed in `traced` (0-based).
    pub fn partial_trace(&self, dims: &[usize], traced: &[usize]) -> Result<ComplexMatrix> {
        let n = self.require_square("partial_trace")?;
        check_dims(n, dims)?;
        if let Some(&bad) = traced.iter().find(|&&t| t >= dims.len()) {
            return Err(QopError::DimensionMismatch(format!(
                "factor index {bad} out of range for {} factors",
                dims.len()
            )));
        }
        let kept: Vec<usize> = (0..dims.len()).filter(|k| !traced.contains(k)).collect();
        let traced: Vec<usize> = (0..dims.len()).filter(|k| traced.contains(k)).collect();
        let kept_dims: Vec<usize> = kept.iter().map(|&k| dims[k]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
        let out_dim: usize = kept_dims.iter().product();
        let sum_dim: usize = traced_dims.iter().product();
        let strides = strides(dims);

        let offsets = |factors: &[usize], fdims: &[usize], idx: usize| -> usize {
            let digits = to_digits(idx, fdims);
            factors.iter().zip(digits).map(|(&f, x)| x * strides[f]).sum()
        };
        let kept_off: Vec<usize> = (0..out_dim).map(|i| offsets(&kept, &kept_dims, i)).collect();
        let traced_off: Vec<usize> = (0..sum_dim).map(|i| offsets(&traced, &traced_dims, i)).collect();

        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for (r, &ro) in kept_off.iter().enumerate() {
            for (c, &co) in kept_off.iter().enumerate() {
                out[(r, c)] = traced_off.iter().map(|&t| self[(ro + t, co + t)]).sum();
            }
        }
        Ok(out)
    }

    /// Transpose applied to tensor factor `factor` (0-based) only.
    pub fn partial_transpose(&self, dims: &[usize], factor: usize) -> Result<ComplexMatrix> {
        let n = self.require_square("partial_transpose")?;
        check_dims(n, dims)?;
        if factor >= dims.len() {
            return Err(QopError::DimensionMismatch(format!(
                "factor index {factor} out of range for {} factors",
                dims.len()
            )));
        }
        let stride = strides(dims)[factor];
        let df = dims[factor];
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            let rf = (r / stride) % df;
            for c in 0..n {
                let cf = (c / stride) % df;
                let r2 = r - rf * stride + cf * stride;
                let c2 = c - cf * stride + rf * stride;
                out[(r2, c2)] = self[(r, c)];
            }
        }
        Ok(out)
    }

    /// Reorders tensor factors: factor `j` of the result is factor `perm[j]`
    /// of `self`. The same permutation acts on rows and columns.
    pub fn permute_factors(&self, dims: &[usize], perm: &[usize]) -> Result<ComplexMatrix> {
        let n = self.require_square("permute_factors")?;
        check_dims(n, dims)?;
        let map = factor_permutation(dims, perm)?;
        let mut out = ComplexMatrix::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                out[(map[r], map[c])] = self[(r, c)];
            }
        }
        Ok(out)
    }
}

/// Maps each old composite index to its new composite index after the
/// factors are reordered so that new factor `j` is old factor `perm[j]`.
pub fn factor_permutation(dims: &[usize], perm: &[usize]) -> Result<Vec<usize>> {
    let k = dims.len();
    let mut seen = vec![false; k];
    if perm.len() != k || perm.iter().any(|&p| p >= k || std::mem::replace(&mut seen[p], true)) {
        return Err(QopError::InvalidArgument(format!(
            "{perm:?} is not a permutation of {k} factors"
        )));
    }
    let new_dims: Vec<usize> = perm.iter().map(|&p| dims[p]).collect();
    let new_strides = strides(&new_dims);
    let total: usize = dims.iter().product();
    Ok((0..total)
        .map(|old| {
            let digits = to_digits(old, dims);
            perm.iter().zip(&new_strides).map(|(&p, s)| digits[p] * s).sum()
        })
        .collect())
}

fn check_dims(n: usize, dims: &[usize]) -> Result<()> {
    let prod: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || prod != n {
        return Err(QopError::DimensionMismatch(format!(
            "factor dimensions {dims:?} do not multiply to {n}"
        )));
    }
    Ok(())
}

pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn to_digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.data[r * self.cols + c]
    }
}

// Elementwise arithmetic panics on shape mismatch, like slice indexing.
impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        ComplexMatrix::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in sub");
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        ComplexMatrix::from_vec_unchecked(self.rows, self.cols, data)
    }
}

impl AddAssign<&ComplexMatrix> for ComplexMatrix {
    fn add_assign(&mut self, rhs: &ComplexMatrix) {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "shape mismatch in add");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += b;
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.map(|z| -z)
    }
}

/// Panics on inner-dimension mismatch; use [`ComplexMatrix::matmul`] for a
/// checked product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch in mul");
        self.mul_unchecked(rhs)
    }
}

/// Eigenvalues (descending) and orthonormal eigenvectors stored as columns.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(lambda) V^dagger`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for r in 0..n {
            for (c, &l) in self.eigenvalues.iter().enumerate() {
                scaled[(r, c)] *= l;
            }
        }
        &scaled * &self.eigenvectors.dagger()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }
}

/// Rotation `U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]` that zeroes the
/// off-diagonal of the Hermitian 2x2 block `[[app, apq], [conj(apq), aqq]]`
/// under `U^dagger A U`.
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    let r = apq.norm();
    let phase = if r > 0.0 { (apq / r).conj() } else { ONE };
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta.is_infinite() {
        0.0
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + theta.hypot(1.0))
    };
    let c = 1.0 / t.hypot(1.0);
    (c, t * c, phase)
}

fn jacobi_eigh(mut a: ComplexMatrix) -> EigenDecomposition {
    let n = a.rows;
    let mut v = ComplexMatrix::identity(n);
    let total = a.frobenius_norm();

    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[(p, q)].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * total || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                if r < 1e-18 * (app.abs() + aqq.abs()) {
                    a[(p, q)] = ZERO;
                    a[(q, p)] = ZERO;
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(app, aqq, apq);
                let u10 = -phase * s;
                let u11 = phase * c;
                // A <- A U (columns p, q)
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * c + akq * u10;
                    a[(k, q)] = akp * s + akq * u11;
                }
                // A <- U^dagger A (rows p, q)
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * c + aqk * u10.conj();
                    a[(q, k)] = apk * s + aqk * u11.conj();
                }
                a[(p, q)] = ZERO;
                a[(q, p)] = ZERO;
                a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * c + vkq * u10;
                    v[(k, q)] = vkp * s + vkq * u11;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re).then(i.cmp(&j)));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            eigenvectors[(k, new)] = v[(k, old)];
        }
    }
    EigenDecomposition { eigenvalues, eigenvectors }
}

fn one_sided_jacobi_sv(m: &ComplexMatrix) -> Vec<f64> {
    // Work on columns of the taller orientation.
    let work = if m.rows >= m.cols { m.clone() } else { m.dagger() };
    let (rows, cols) = (work.rows, work.cols);
    let mut colv: Vec<Vec<C64>> = (0..cols).map(|c| work.column(c)).collect();

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let alpha: f64 = colv[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = colv[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: C64 = colv[p].iter().zip(&colv[q]).map(|(a, b)| a.conj() * b).sum();
                if gamma.norm() <= 1e-15 * (alpha * beta).sqrt() || gamma.norm() == 0.0 {
                    continue;
                }
                rotated = true;
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                let u10 = -phase * s;
                let u11 = phase * c;
                #[allow(clippy::needless_range_loop)]
                for k in 0..rows {
                    let (xp, xq) = (colv[p][k], colv[q][k]);
                    colv[p][k] = xp * c + xq * u10;
                    colv[q][k] = xp * s + xq * u11;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut sv: Vec<f64> = colv.iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}
