//! Physicality diagnostics: complete positivity from the spectrum of chi,
//! the trace condition from the Choi operator, process fidelity and purity.

use serde::Serialize;

use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, HERMITIAN_TOL};
use crate::representations::{ChannelRepr, ChiMatrix, CP_TOL};

/// Tolerance on the trace condition `sum K^dagger K <= I`.
pub const TRACE_TOL: f64 = 1e-9;

/// Relative eigenvalue weight allowed outside the dominant eigenvector of an
/// ideal chi-matrix.
pub const RANK_ONE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhysicalityReport {
    pub hermiticity_deviation: f64,
    pub min_chi_eigenvalue: f64,
    pub max_chi_eigenvalue: f64,
    /// Largest eigenvalue of `T - I`, where `T` is the Choi operator with the
    /// output factors traced out (equal to the transpose of `sum K^dagger K`).
    pub trace_condition_excess: f64,
    /// Largest eigenvalue of `I - T`.
    pub trace_condition_deficit: f64,
    pub is_hermiticity_preserving: bool,
    pub is_cp: bool,
    pub is_trace_nonincreasing: bool,
    pub is_trace_preserving: bool,
}

impl PhysicalityReport {
    /// CP and trace non-increasing.
    pub fn is_physical(&self) -> bool {
        self.is_cp && self.is_trace_nonincreasing
    }
}

pub fn check_physical(repr: &ChannelRepr) -> Result<PhysicalityReport> {
    let chi = repr.native_chi()?;
    let data = chi.data();
    let hermiticity_deviation = data.hermiticity_deviation();
    let spectrum = data.hermitian_part().eigh()?;
    let max_chi_eigenvalue = spectrum.max_eigenvalue();
    let min_chi_eigenvalue = spectrum.min_eigenvalue();
    let is_hermiticity_preserving = hermiticity_deviation <= HERMITIAN_TOL;
    let is_cp = is_hermiticity_preserving && min_chi_eigenvalue >= -CP_TOL * max_chi_eigenvalue.max(0.0);

    let (trace_condition_excess, trace_condition_deficit) = trace_condition(repr)?;
    let is_trace_nonincreasing = trace_condition_excess <= TRACE_TOL;
    Ok(PhysicalityReport {
        hermiticity_deviation,
        min_chi_eigenvalue,
        max_chi_eigenvalue,
        trace_condition_excess,
        trace_condition_deficit,
        is_hermiticity_preserving,
        is_cp,
        is_trace_nonincreasing,
        is_trace_preserving: is_trace_nonincreasing && trace_condition_deficit <= TRACE_TOL,
    })
}

/// `(lambda_max(T - I), lambda_max(I - T))` for the output-traced Choi
/// operator `T`.
fn trace_condition(repr: &ChannelRepr) -> Result<(f64, f64)> {
    let t = traced_choi(repr)?.hermitian_part();
    let ident = ComplexMatrix::identity(t.rows());
    let excess = (&t - &ident).eigh()?.max_eigenvalue();
    let deficit = (&ident - &t).eigh()?.max_eigenvalue();
    Ok((excess, deficit))
}

/// Choi operator with all output factors traced out; equals
/// `(sum_i K_i^dagger K_i)^T`.
pub fn traced_choi(repr: &ChannelRepr) -> Result<ComplexMatrix> {
    let (d, n) = (repr.d(), repr.n());
    let choi = repr.choi_operator()?;
    let dims = vec![d; 2 * n];
    let outputs: Vec<usize> = (0..n).collect();
    choi.partial_trace(&dims, &outputs)
}

/// `F_p = Tr(chi_a chi_b) / d^(2n)` with `chi_b` the rank-one ideal process.
///
/// `b` is re-expressed in the basis of `a` when the two differ.
pub fn process_fidelity(a: &ChiMatrix, b: &ChiMatrix) -> Result<f64> {
    if a.d() != b.d() || a.n() != b.n() {
        return Err(QopError::DimensionMismatch(format!(
            "fidelity between n={} d={} and n={} d={} processes",
            a.n(),
            a.d(),
            b.n(),
            b.d()
        )));
    }
    let b = b.change_basis(a.basis())?;
    let spectrum = b.data().hermitian_part().eigh()?;
    let top = spectrum.max_eigenvalue();
    let residual: f64 = spectrum.eigenvalues.iter().skip(1).map(|l| l.abs()).sum();
    if top <= 0.0 || residual > RANK_ONE_TOL * top {
        return Err(QopError::NotRankOne { residual });
    }
    let overlap = (a.data() * b.data()).trace()?.re;
    Ok(overlap / a.basis().size() as f64)
}

/// `Tr[(chi / d^n)^2]`; one exactly for unitary channels.
pub fn channel_purity(chi: &ChiMatrix) -> Result<f64> {
    let scaled = chi.data().scale_real(1.0 / chi.basis().dim() as f64);
    Ok((&scaled * &scaled).trace()?.re)
}
