//! Liouville-space embedding of operators and the reshuffling map.

use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, C64};

/// Row-by-row stacking `|A>>` of a `d x d` operator.
#[derive(Debug, Clone, PartialEq)]
pub struct LVector {
    d: usize,
    entries: Vec<C64>,
}

impl LVector {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        let d = exact_sqrt(entries.len()).ok_or_else(|| {
            QopError::DimensionMismatch(format!("length {} is not a perfect square", entries.len()))
        })?;
        Ok(Self { d, entries })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<C64> {
        self.entries
    }

    /// `<<self|other>>`.
    pub fn dot(&self, other: &LVector) -> C64 {
        self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum()
    }
}

pub(crate) fn exact_sqrt(n: usize) -> Option<usize> {
    if n == 0 {
        return None;
    }
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

pub fn vec(a: &ComplexMatrix) -> Result<LVector> {
    if !a.is_square() {
        return Err(QopError::DimensionMismatch(format!(
            "vec needs a square operator, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(LVector { d: a.rows(), entries: a.as_slice().to_vec() })
}

pub fn unvec(v: &LVector) -> ComplexMatrix {
    ComplexMatrix::from_vec_unchecked(v.d, v.d, v.entries.clone())
}

/// Reshuffling of a `d^2 x d^2` matrix:
/// `out[(i,k),(j,l)] = x[(i,j),(k,l)]` with composite index `(a,b) = d*a + b`.
///
/// Maps `A (x) conj(B)` to `|A>><<B|` and back; applying it twice is the
/// identity.
pub fn reshuffle(x: &ComplexMatrix, d: usize) -> Result<ComplexMatrix> {
    let n = d * d;
    if d == 0 || x.rows() != n || x.cols() != n {
        return Err(QopError::DimensionMismatch(format!(
            "reshuffle with d = {d} needs a {n}x{n} matrix, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                for l in 0..d {
                    out[(i * d + k, j * d + l)] = x[(i * d + j, k * d + l)];
                }
            }
        }
    }
    Ok(out)
}

/// Reshuffling where `d` is inferred from the matrix size.
pub fn reshuffle_square(x: &ComplexMatrix) -> Result<ComplexMatrix> {
    let d = exact_sqrt(x.rows()).ok_or_else(|| {
        QopError::DimensionMismatch(format!("dimension {} is not a perfect square", x.rows()))
    })?;
    reshuffle(x, d)
}
