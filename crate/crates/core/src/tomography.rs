//! Simulated entanglement-assisted process tomography.
//!
//! Each half of a maximally entangled pair per qudit is sent through the
//! channel; the resulting Choi state is probed with products of Hermitian
//! basis operators. With the Choi factors interleaved as
//! `(out_1, in_1, out_2, in_2, ...)`, the readout for
//! `(a_1, c_1, a_2, c_2, ...)` is `Tr[C (E_a1 (x) E_c1^T (x) ...)]`, which is
//! exactly the S-matrix entry `S_{[a_1 a_2 ..], [c_1 c_2 ..]}`. Reconstruction
//! is therefore a reindexing followed by the chi conversion.

use rand_distr::{Distribution, Normal};

use crate::basis::BasisKind;
use crate::error::{QopError, Result};
use crate::linalg::ComplexMatrix;
use crate::physicality::{check_physical, PhysicalityReport};
use crate::random;
use crate::representations::{
    check_size, interleave_choi, s_to_chi_n, BasisRef, ChannelRepr, ChiMatrix, ProductBasis, SMatrix,
};

#[derive(Debug, Clone, PartialEq)]
pub struct TomographyDataset {
    pub d: usize,
    pub n: usize,
    pub basis: BasisRef,
    pub sigma: f64,
    pub seed: u64,
    /// Readouts in `(a_1, c_1, ..., a_n, c_n)` lexicographic order.
    pub values: Vec<f64>,
}

impl TomographyDataset {
    pub fn new(d: usize, n: usize, basis: BasisRef, sigma: f64, seed: u64, values: Vec<f64>) -> Result<Self> {
        if d < 2 || n == 0 {
            return Err(QopError::Malformed(format!("dataset needs d >= 2 and n >= 1, got d={d}, n={n}")));
        }
        if basis.d() != d {
            return Err(QopError::Malformed(format!("basis has d = {}, dataset d = {d}", basis.d())));
        }
        if !basis.is_hermitian() {
            return Err(QopError::InvalidBasis("tomography needs a Hermitian operator basis".into()));
        }
        let expected = d.pow(4 * n as u32);
        if values.len() != expected {
            return Err(QopError::Malformed(format!("expected {expected} values, got {}", values.len())));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(QopError::Malformed("dataset values must be finite".into()));
        }
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(QopError::Malformed(format!("noise sigma must be a nonnegative number, got {sigma}")));
        }
        Ok(Self { d, n, basis, sigma, seed, values })
    }

    pub fn register(&self) -> Result<ProductBasis> {
        ProductBasis::uniform(self.basis.clone(), self.n)
    }
}

/// Maps a readout index `(a_1, c_1, ..., a_n, c_n)` to the S-matrix entry
/// `([a_1 .. a_n], [c_1 .. c_n])`.
fn readout_to_entry(index: usize, k: usize, n: usize) -> (usize, usize) {
    let mut row = 0;
    let mut col = 0;
    let mut rem = index;
    let mut place = 1;
    for _ in 0..n {
        let c = rem % k;
        rem /= k;
        let a = rem % k;
        rem /= k;
        row += a * place;
        col += c * place;
        place *= k;
    }
    (row, col)
}

/// Noiseless readouts of `channel` plus i.i.d. Gaussian noise of standard
/// deviation `sigma` drawn from a stream seeded by `seed`.
pub fn simulate_dataset(channel: &ChannelRepr, basis: &BasisRef, sigma: f64, seed: u64) -> Result<TomographyDataset> {
    let (d, n) = (channel.d(), channel.n());
    if !basis.is_hermitian() {
        return Err(QopError::InvalidBasis(format!(
            "tomography needs a Hermitian operator basis, {} is not",
            basis.kind()
        )));
    }
    if basis.d() != d {
        return Err(QopError::DimensionMismatch(format!("basis d = {} for a d = {d} channel", basis.d())));
    }
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(QopError::InvalidArgument(format!("noise sigma must be nonnegative, got {sigma}")));
    }
    let k = d * d;
    check_size(k.pow(n as u32))?;

    let choi = interleave_choi(&channel.choi_operator()?, d, n)?;
    let transposed: Vec<ComplexMatrix> = basis.elements().iter().map(ComplexMatrix::transpose).collect();

    let count = k.pow(2 * n as u32);
    let mut values = Vec::with_capacity(count);
    for index in 0..count {
        let mut digits = Vec::with_capacity(2 * n);
        let mut rem = index;
        for _ in 0..2 * n {
            digits.push(rem % k);
            rem /= k;
        }
        digits.reverse();
        let mut op = basis.element(digits[0]).clone();
        for (pos, &digit) in digits.iter().enumerate().skip(1) {
            let factor = if pos % 2 == 0 { basis.element(digit) } else { &transposed[digit] };
            op = op.kron(factor);
        }
        values.push(trace_product(&choi, &op).re);
    }

    if sigma > 0.0 {
        let normal = Normal::new(0.0, sigma).map_err(|e| QopError::InvalidArgument(e.to_string()))?;
        let mut rng = random::rng(seed);
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    TomographyDataset::new(d, n, basis.clone(), sigma, seed, values)
}

fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> crate::linalg::C64 {
    let n = a.rows();
    let mut acc = crate::linalg::C64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub s: SMatrix,
    pub chi: ChiMatrix,
    pub report: PhysicalityReport,
}

/// S by reindexing the readouts, chi by conversion; the physicality report
/// describes the raw estimate without any projection.
pub fn reconstruct(ds: &TomographyDataset) -> Result<Reconstruction> {
    let k = ds.d * ds.d;
    let size = k.pow(ds.n as u32);
    if ds.values.len() != size * size {
        return Err(QopError::Malformed(format!("expected {} values, got {}", size * size, ds.values.len())));
    }
    check_size(size)?;
    let mut data = ComplexMatrix::zeros(size, size);
    for (index, &v) in ds.values.iter().enumerate() {
        let (r, c) = readout_to_entry(index, k, ds.n);
        data[(r, c)] = crate::linalg::C64::new(v, 0.0);
    }
    let s = SMatrix::new(ds.register()?, data)?;
    let chi = s_to_chi_n(&s)?;
    let report = check_physical(&ChannelRepr::Chi(chi.clone()))?;
    Ok(Reconstruction { s, chi, report })
}

/// Expected Frobenius error of the reconstructed S-matrix under noise
/// `sigma`: `sigma * sqrt(d^(4n))`.
pub fn predicted_s_error(d: usize, n: usize, sigma: f64) -> f64 {
    sigma * ((d * d).pow(2 * n as u32) as f64).sqrt()
}

/// Gell-Mann register used by default for tomography.
pub fn default_basis(d: usize) -> Result<BasisRef> {
    Ok(std::sync::Arc::new(crate::basis::OperatorBasis::canonical(BasisKind::GellMann, d)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;
    use crate::linalg::C64;

    #[test]
    fn readout_order() {
        // n = 1: alpha-major
        assert_eq!(readout_to_entry(7, 4, 1), (1, 3));
        // n = 2: (a, c, b, e) -> ([a, b], [c, e])
        let (a, c, b, e) = (1, 2, 3, 0);
        let idx = ((a * 4 + c) * 4 + b) * 4 + e;
        assert_eq!(readout_to_entry(idx, 4, 2), (a * 4 + b, c * 4 + e));
    }

    #[test]
    fn identity_dataset_is_flattened_identity() {
        for d in [2, 3] {
            let ds = simulate_dataset(&channels::identity(d, 1).unwrap(), &default_basis(d).unwrap(), 0.0, 0).unwrap();
            let k = d * d;
            for (i, v) in ds.values.iter().enumerate() {
                let expect = if i / k == i % k { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn x_gate_dataset_matches_s_matrix() {
        // Gell-Mann d = 2 elements are (I, sigma_x, -sigma_y, -sigma_z)/sqrt(2);
        // conjugation by sigma_x keeps I and sigma_x and flips the others.
        let ds = simulate_dataset(&channels::by_name("X", 2).unwrap(), &default_basis(2).unwrap(), 0.0, 0).unwrap();
        let expect = [1.0, 1.0, -1.0, -1.0];
        for (i, v) in ds.values.iter().enumerate() {
            let e = if i / 4 == i % 4 { expect[i / 4] } else { 0.0 };
            assert!((v - e).abs() < 1e-13, "{i}: {v}");
        }
    }

    #[test]
    fn non_hermitian_basis_rejected() {
        let transition = std::sync::Arc::new(crate::basis::OperatorBasis::transition(2).unwrap());
        assert!(matches!(
            simulate_dataset(&channels::identity(2, 1).unwrap(), &transition, 0.0, 0),
            Err(QopError::InvalidBasis(_))
        ));
    }

    #[test]
    fn noiseless_identity_recovers_chi() {
        let ds = simulate_dataset(&channels::identity(2, 1).unwrap(), &default_basis(2).unwrap(), 0.0, 0).unwrap();
        let rec = reconstruct(&ds).unwrap();
        assert!((rec.chi.data()[(0, 0)] - C64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(rec.report.is_cp && rec.report.is_trace_preserving);
    }

    #[test]
    fn seeded_noise_is_deterministic() {
        let ch = channels::depolarizing(2, 1).unwrap();
        let b = default_basis(2).unwrap();
        let a = simulate_dataset(&ch, &b, 1e-3, 42).unwrap();
        let c = simulate_dataset(&ch, &b, 1e-3, 42).unwrap();
        let e = simulate_dataset(&ch, &b, 1e-3, 43).unwrap();
        assert_eq!(a.values, c.values);
        assert_ne!(a.values, e.values);
    }

    #[test]
    fn malformed_dataset_rejected() {
        let b = default_basis(2).unwrap();
        assert!(TomographyDataset::new(2, 1, b.clone(), 0.0, 0, vec![0.0; 15]).is_err());
        assert!(TomographyDataset::new(2, 1, b.clone(), -1.0, 0, vec![0.0; 16]).is_err());
        assert!(TomographyDataset::new(2, 1, b, 0.0, 0, vec![f64::NAN; 16]).is_err());
    }
}
