//! Orthonormal, complete operator bases of the Hilbert-Schmidt space.
//!
//! Three canonical families are provided: transition operators `|i><j|`,
//! Weyl (discrete displacement) operators and the generalized Gell-Mann
//! matrices. Any other basis goes through [`OperatorBasis::custom`], which
//! refuses sets that fail validation, so every `OperatorBasis` value in the
//! program is known to be orthonormal and complete.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, C64, ONE, ZERO};
use crate::random;

/// Max-abs tolerance used by basis validation.
pub const BASIS_TOL: f64 = 1e-10;

const VALIDATION_SEED: u64 = 0x5eed_ba5e;
const VALIDATION_SAMPLES: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BasisKind {
    Transition,
    Weyl,
    GellMann,
    Custom,
}

impl BasisKind {
    pub fn as_str(self) -> &'static str {
        match self {
            BasisKind::Transition => "transition",
            BasisKind::Weyl => "weyl",
            BasisKind::GellMann => "gellmann",
            BasisKind::Custom => "custom",
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BasisKind {
    type Err = QopError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "transition" => Ok(BasisKind::Transition),
            "weyl" => Ok(BasisKind::Weyl),
            "gellmann" | "gell-mann" => Ok(BasisKind::GellMann),
            "custom" => Ok(BasisKind::Custom),
            other => Err(QopError::InvalidArgument(format!("unknown basis kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    d: usize,
    kind: BasisKind,
    elements: Vec<ComplexMatrix>,
}

/// Maximum deviations found by [`validate_elements`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BasisReport {
    pub orthonormality: f64,
    pub completeness: f64,
    pub reconstruction: f64,
    pub depolarizing: f64,
    pub passed: bool,
}

fn transition(d: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(d, d);
    m[(i, j)] = ONE;
    m
}

fn check_d(d: usize) -> Result<()> {
    if d < 2 {
        return Err(QopError::InvalidArgument(format!("qudit dimension must be >= 2, got {d}")));
    }
    Ok(())
}

impl OperatorBasis {
    /// `|i><j|` at position `d*i + j`.
    pub fn transition(d: usize) -> Result<Self> {
        check_d(d)?;
        let elements = (0..d * d).map(|a| transition(d, a / d, a % d)).collect();
        Ok(Self { d, kind: BasisKind::Transition, elements })
    }

    /// `U_(m,n) = w^{mn/2} sum_k w^{mk} |k+n mod d><k| / sqrt(d)` at `d*m + n`,
    /// with `w = exp(2 pi i / d)` and `w^{mn/2} = exp(i pi m n / d)`.
    pub fn weyl(d: usize) -> Result<Self> {
        check_d(d)?;
        let norm = 1.0 / (d as f64).sqrt();
        let mut elements = Vec::with_capacity(d * d);
        for m in 0..d {
            for n in 0..d {
                let prefactor = C64::from_polar(norm, PI * (m * n) as f64 / d as f64);
                let mut u = ComplexMatrix::zeros(d, d);
                for k in 0..d {
                    let phase = C64::from_polar(1.0, 2.0 * PI * ((m * k) % d) as f64 / d as f64);
                    u[((k + n) % d, k)] = prefactor * phase;
                }
                elements.push(u);
            }
        }
        Ok(Self { d, kind: BasisKind::Weyl, elements })
    }

    /// `{I/sqrt(d), u_ij..., v_ij..., w_k...}` with
    /// `u_ij = (|i><j| + |j><i|)/sqrt2`, `v_ij = i(|i><j| - |j><i|)/sqrt2`
    /// for `i < j` in lexicographic order, and
    /// `w_k = (-sum_{i<k} |i><i| + k|k><k|)/sqrt(k(k+1))`.
    pub fn gellmann(d: usize) -> Result<Self> {
        check_d(d)?;
        let mut elements = Vec::with_capacity(d * d);
        elements.push(ComplexMatrix::identity(d).scale_real(1.0 / (d as f64).sqrt()));
        let pairs: Vec<(usize, usize)> =
            (0..d).flat_map(|i| ((i + 1)..d).map(move |j| (i, j))).collect();
        for &(i, j) in &pairs {
            let mut u = ComplexMatrix::zeros(d, d);
            u[(i, j)] = C64::new(1.0 / SQRT_2, 0.0);
            u[(j, i)] = C64::new(1.0 / SQRT_2, 0.0);
            elements.push(u);
        }
        for &(i, j) in &pairs {
            let mut v = ComplexMatrix::zeros(d, d);
            v[(i, j)] = C64::new(0.0, 1.0 / SQRT_2);
            v[(j, i)] = C64::new(0.0, -1.0 / SQRT_2);
            elements.push(v);
        }
        for k in 1..d {
            let norm = 1.0 / ((k * (k + 1)) as f64).sqrt();
            let mut w = ComplexMatrix::zeros(d, d);
            for i in 0..k {
                w[(i, i)] = C64::new(-norm, 0.0);
            }
            w[(k, k)] = C64::new(k as f64 * norm, 0.0);
            elements.push(w);
        }
        Ok(Self { d, kind: BasisKind::GellMann, elements })
    }

    pub fn canonical(kind: BasisKind, d: usize) -> Result<Self> {
        match kind {
            BasisKind::Transition => Self::transition(d),
            BasisKind::Weyl => Self::weyl(d),
            BasisKind::GellMann => Self::gellmann(d),
            BasisKind::Custom => Err(QopError::InvalidArgument(
                "custom bases need explicit elements".into(),
            )),
        }
    }

    /// Accepts a user-supplied basis only if it passes [`validate_elements`].
    pub fn custom(d: usize, elements: Vec<ComplexMatrix>) -> Result<Self> {
        check_d(d)?;
        let report = validate_elements(d, &elements)?;
        if !report.passed {
            return Err(QopError::InvalidBasis(format!(
                "orthonormality {:.3e}, completeness {:.3e}, reconstruction {:.3e}, depolarizing {:.3e}",
                report.orthonormality, report.completeness, report.reconstruction, report.depolarizing
            )));
        }
        Ok(Self { d, kind: BasisKind::Custom, elements })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, alpha: usize) -> &ComplexMatrix {
        &self.elements[alpha]
    }

    pub fn validate(&self) -> BasisReport {
        validate_elements(self.d, &self.elements).expect("basis shape fixed at construction")
    }

    /// True when every element is Hermitian (within 1e-12).
    pub fn is_hermitian(&self) -> bool {
        self.elements.iter().all(|e| e.is_hermitian(1e-12))
    }

    /// Expansion coefficients `Tr(E_a^dagger A)`.
    pub fn coefficients(&self, a: &ComplexMatrix) -> Result<Vec<C64>> {
        self.elements.iter().map(|e| e.hs_inner(a)).collect()
    }

    /// `sum_a c_a E_a`.
    pub fn synthesize(&self, coeffs: &[C64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.len() {
            return Err(QopError::DimensionMismatch(format!(
                "{} coefficients for a basis of {} elements",
                coeffs.len(),
                self.len()
            )));
        }
        let mut out = ComplexMatrix::zeros(self.d, self.d);
        for (c, e) in coeffs.iter().zip(&self.elements) {
            if *c != ZERO {
                out += &e.scale(*c);
            }
        }
        Ok(out)
    }

    /// `(1/d) sum_a E_a (x) conj(E_a)`; equals the isotropic state for any basis.
    pub fn isotropic_expansion(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d * self.d, self.d * self.d);
        for e in &self.elements {
            out += &e.kron(&e.conj());
        }
        out.scale_real(1.0 / self.d as f64)
    }

    /// `sum_a E_a (x) E_a^dagger`; equals the swap operator for any basis.
    pub fn swap_expansion(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.d * self.d, self.d * self.d);
        for e in &self.elements {
            out += &e.kron(&e.dagger());
        }
        out
    }
}

/// Checks orthonormality and completeness of a candidate operator set.
///
/// Orthonormality is `|Tr E_a^dagger E_b - delta_ab|`; completeness uses the
/// exhaustive index identity `sum_a <n|E_a^dagger|m><l|E_a|k> = delta_nk delta_ml`.
/// Reconstruction (`A = sum_a Tr(E_a^dagger A) E_a`) and the depolarizing
/// identity (`(1/d) sum_a E_a A E_a^dagger = Tr(A) I / d`) are sampled on 20
/// fixed-seed random operators.
pub fn validate_elements(d: usize, elements: &[ComplexMatrix]) -> Result<BasisReport> {
    if elements.len() != d * d {
        return Err(QopError::InvalidBasis(format!(
            "expected {} elements for d = {d}, got {}",
            d * d,
            elements.len()
        )));
    }
    if let Some(e) = elements.iter().find(|e| e.rows() != d || e.cols() != d) {
        return Err(QopError::InvalidBasis(format!(
            "element of shape {}x{} in a d = {d} basis",
            e.rows(),
            e.cols()
        )));
    }

    let mut orthonormality: f64 = 0.0;
    for (a, ea) in elements.iter().enumerate() {
        for (b, eb) in elements.iter().enumerate() {
            let target = if a == b { ONE } else { ZERO };
            orthonormality = orthonormality.max((ea.hs_inner(eb)? - target).norm());
        }
    }

    let mut completeness: f64 = 0.0;
    for n in 0..d {
        for m in 0..d {
            for l in 0..d {
                for k in 0..d {
                    let s: C64 = elements.iter().map(|e| e[(m, n)].conj() * e[(l, k)]).sum();
                    let target = if n == k && m == l { ONE } else { ZERO };
                    completeness = completeness.max((s - target).norm());
                }
            }
        }
    }

    let mut rng = random::rng(VALIDATION_SEED);
    let mut reconstruction: f64 = 0.0;
    let mut depolarizing: f64 = 0.0;
    for _ in 0..VALIDATION_SAMPLES {
        let a = random::ginibre(&mut rng, d, d);
        let mut rebuilt = ComplexMatrix::zeros(d, d);
        let mut depol = ComplexMatrix::zeros(d, d);
        for e in elements {
            rebuilt += &e.scale(e.hs_inner(&a)?);
            depol += &(&(e * &a) * &e.dagger());
        }
        reconstruction = reconstruction.max(rebuilt.max_abs_diff(&a));
        let target = ComplexMatrix::identity(d).scale(a.trace()? / d as f64);
        depolarizing = depolarizing.max(depol.scale_real(1.0 / d as f64).max_abs_diff(&target));
    }

    let passed = [orthonormality, completeness, reconstruction, depolarizing]
        .iter()
        .all(|&x| x < BASIS_TOL);
    Ok(BasisReport { orthonormality, completeness, reconstruction, depolarizing, passed })
}

/// `U_ab = Tr(E_a^dagger F_b)`, so that `F_b = sum_a E_a U_ab`.
pub fn change_of_basis_unitary(from: &OperatorBasis, to: &OperatorBasis) -> Result<ComplexMatrix> {
    if from.d != to.d {
        return Err(QopError::DimensionMismatch(format!(
            "change of basis between d = {} and d = {}",
            from.d, to.d
        )));
    }
    let n = from.len();
    let mut u = ComplexMatrix::zeros(n, n);
    for (a, ea) in from.elements.iter().enumerate() {
        for (b, fb) in to.elements.iter().enumerate() {
            u[(a, b)] = ea.hs_inner(fb)?;
        }
    }
    Ok(u)
}

/// `(1/d) |I>><<I|` on the doubled space.
pub fn isotropic_state(d: usize) -> Result<ComplexMatrix> {
    check_d(d)?;
    let mut rho = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            rho[(i * d + i, j * d + j)] = C64::new(1.0 / d as f64, 0.0);
        }
    }
    Ok(rho)
}

/// Swap `|ij> -> |ji>` on the doubled space.
pub fn swap_operator(d: usize) -> Result<ComplexMatrix> {
    check_d(d)?;
    let mut v = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            v[(j * d + i, i * d + j)] = ONE;
        }
    }
    Ok(v)
}
