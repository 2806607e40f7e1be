//! Chi-matrix, S-matrix and Kraus forms of a channel and the conversions
//! between them.
//!
//! For `n` qudits every matrix is indexed over the product basis
//! `P_A = E^(1)_{a1} (x) ... (x) E^(n)_{an}` with the packed index
//! `A = a1 * (d^2)^(n-1) + ... + an`, so the two-qudit packing is
//! `[a, b] = d^2 a + b`. With that convention:
//!
//! * `S_AB = Tr(P_A^dagger S(P_B))`
//! * `S(rho) = sum_AB chi_AB P_A rho P_B^dagger`
//!
//! The chi/S conversion is `sum_g Q^g X R^g` for one qudit, with
//! `Q^g_ab = <<E_a|(I (x) pi_g)|E_b>>` and `R^g_ab = <<E_a|(pi_g (x) I)|E_b>>`
//! (`pi_g` the transition operators). The map is its own inverse, so the same
//! kernel runs in both directions. For more qudits the kit of each qudit acts
//! on its own digit of the packed index.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::basis::{change_of_basis_unitary, BasisKind, OperatorBasis};
use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, C64, ZERO};
use crate::liouville::{exact_sqrt, vec};

pub type BasisRef = Arc<OperatorBasis>;

/// Default cap on the dimension of chi/S matrices.
pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Tolerance for the kit's M matrix being Hermitian and unitary.
pub const KIT_TOL: f64 = 1e-10;

/// Relative eigenvalue cutoff below which Kraus operators are dropped.
pub const KRAUS_TRUNCATION: f64 = 1e-12;

/// Relative tolerance on negative chi eigenvalues still treated as CP.
pub const CP_TOL: f64 = 1e-9;

/// Matrix-size guard; `QOPMAT_SIZE_CAP` overrides the default of 4096.
pub fn size_cap() -> usize {
    std::env::var("QOPMAT_SIZE_CAP")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SIZE_CAP)
}

pub(crate) fn check_size(dim: usize) -> Result<()> {
    let cap = size_cap();
    if dim > cap {
        return Err(QopError::SizeGuard { requested: dim, cap });
    }
    Ok(())
}

/// Per-qudit operator bases of an `n`-qudit register.
#[derive(Debug, Clone)]
pub struct ProductBasis {
    qudits: Vec<BasisRef>,
}

impl PartialEq for ProductBasis {
    fn eq(&self, other: &Self) -> bool {
        self.qudits.len() == other.qudits.len()
            && self.qudits.iter().zip(&other.qudits).all(|(a, b)| Arc::ptr_eq(a, b) || a == b)
    }
}

impl ProductBasis {
    pub fn new(qudits: Vec<BasisRef>) -> Result<Self> {
        let Some(first) = qudits.first() else {
            return Err(QopError::InvalidArgument("a register needs at least one qudit".into()));
        };
        if qudits.iter().any(|b| b.d() != first.d()) {
            return Err(QopError::DimensionMismatch("all qudits must share the same d".into()));
        }
        Ok(Self { qudits })
    }

    pub fn uniform(basis: BasisRef, n: usize) -> Result<Self> {
        Self::new(vec![basis; n])
    }

    pub fn single(basis: BasisRef) -> Self {
        Self { qudits: vec![basis] }
    }

    /// Shared canonical basis, e.g. `ProductBasis::canonical(BasisKind::GellMann, 2, 1)`.
    pub fn canonical(kind: BasisKind, d: usize, n: usize) -> Result<Self> {
        Self::uniform(Arc::new(OperatorBasis::canonical(kind, d)?), n)
    }

    pub fn qudits(&self) -> &[BasisRef] {
        &self.qudits
    }

    pub fn qudit(&self, i: usize) -> &BasisRef {
        &self.qudits[i]
    }

    pub fn d(&self) -> usize {
        self.qudits[0].d()
    }

    pub fn n(&self) -> usize {
        self.qudits.len()
    }

    /// Hilbert-space dimension `d^n`.
    pub fn dim(&self) -> usize {
        self.d().pow(self.n() as u32)
    }

    /// Number of product-basis elements, `d^(2n)`.
    pub fn size(&self) -> usize {
        self.dim() * self.dim()
    }

    pub fn is_hermitian(&self) -> bool {
        self.qudits.iter().all(|b| b.is_hermitian())
    }

    fn digits(&self, index: usize) -> Vec<usize> {
        let k = self.d() * self.d();
        let mut out = vec![0; self.n()];
        let mut idx = index;
        for slot in out.iter_mut().rev() {
            *slot = idx % k;
            idx /= k;
        }
        out
    }

    /// `P_A` for packed index `A`.
    pub fn element(&self, index: usize) -> ComplexMatrix {
        let digits = self.digits(index);
        let mut out = self.qudits[0].element(digits[0]).clone();
        for (b, &a) in self.qudits.iter().zip(&digits).skip(1) {
            out = out.kron(b.element(a));
        }
        out
    }

    pub fn elements(&self) -> Vec<ComplexMatrix> {
        (0..self.size()).map(|a| self.element(a)).collect()
    }

    /// Matrix whose column `A` is `vec(P_A)`; unitary.
    pub fn vec_matrix(&self) -> ComplexMatrix {
        let size = self.size();
        let mut b = ComplexMatrix::zeros(size, size);
        for a in 0..size {
            let p = self.element(a);
            for (r, z) in p.as_slice().iter().enumerate() {
                b[(r, a)] = *z;
            }
        }
        b
    }

    /// `Tr(P_A^dagger op)` for every `A`.
    pub fn coefficients(&self, op: &ComplexMatrix) -> Result<Vec<C64>> {
        if op.rows() != self.dim() || op.cols() != self.dim() {
            return Err(QopError::DimensionMismatch(format!(
                "operator is {}x{}, register dimension is {}",
                op.rows(),
                op.cols(),
                self.dim()
            )));
        }
        Ok(self.vec_matrix().dagger().mul_unchecked(&column(op.as_slice())).into_vec())
    }

    /// `sum_A c_A P_A`.
    pub fn synthesize(&self, coeffs: &[C64]) -> Result<ComplexMatrix> {
        if coeffs.len() != self.size() {
            return Err(QopError::DimensionMismatch(format!(
                "{} coefficients for {} basis elements",
                coeffs.len(),
                self.size()
            )));
        }
        let v = self.vec_matrix().mul_unchecked(&column(coeffs));
        Ok(ComplexMatrix::from_vec_unchecked(self.dim(), self.dim(), v.into_vec()))
    }

    /// `U = U^(1) (x) ... (x) U^(n)` with `U^(i)_ab = Tr(E_a^dagger F_b)`.
    pub fn unitary_to(&self, to: &ProductBasis) -> Result<ComplexMatrix> {
        if self.n() != to.n() || self.d() != to.d() {
            return Err(QopError::DimensionMismatch(format!(
                "cannot relate a {}-qudit d={} basis to a {}-qudit d={} basis",
                self.n(),
                self.d(),
                to.n(),
                to.d()
            )));
        }
        let mut u = ComplexMatrix::identity(1);
        for (a, b) in self.qudits.iter().zip(&to.qudits) {
            u = u.kron(&change_of_basis_unitary(a, b)?);
        }
        Ok(u)
    }

    pub fn describe(&self) -> String {
        let kinds: Vec<String> = self.qudits.iter().map(|b| b.kind().to_string()).collect();
        format!("d={} [{}]", self.d(), kinds.join(", "))
    }
}

fn column(v: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_vec_unchecked(v.len(), 1, v.to_vec())
}

fn check_data(basis: &ProductBasis, data: &ComplexMatrix, what: &str) -> Result<()> {
    let size = basis.size();
    if data.rows() != size || data.cols() != size {
        return Err(QopError::DimensionMismatch(format!(
            "{what} for {} qudits of d = {} must be {size}x{size}, got {}x{}",
            basis.n(),
            basis.d(),
            data.rows(),
            data.cols()
        )));
    }
    Ok(())
}

/// Coefficients of the two-sided expansion `S(rho) = sum chi_AB P_A rho P_B^dagger`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChiMatrix {
    basis: ProductBasis,
    data: ComplexMatrix,
}

/// Matrix of the channel as a one-sided operator on Liouville space,
/// `S_AB = <<P_A|S|P_B>>`.
#[derive(Debug, Clone, PartialEq)]
pub struct SMatrix {
    basis: ProductBasis,
    data: ComplexMatrix,
}

macro_rules! coefficient_matrix {
    ($ty:ident, $what:literal) => {
        impl $ty {
            pub fn new(basis: ProductBasis, data: ComplexMatrix) -> Result<Self> {
                check_data(&basis, &data, $what)?;
                Ok(Self { basis, data })
            }

            pub fn basis(&self) -> &ProductBasis {
                &self.basis
            }

            pub fn data(&self) -> &ComplexMatrix {
                &self.data
            }

            pub fn into_data(self) -> ComplexMatrix {
                self.data
            }

            pub fn d(&self) -> usize {
                self.basis.d()
            }

            pub fn n(&self) -> usize {
                self.basis.n()
            }

            /// Same channel expressed over `to`: `U^dagger X U`.
            pub fn change_basis(&self, to: &ProductBasis) -> Result<Self> {
                if &self.basis == to {
                    return Ok(self.clone());
                }
                let u = self.basis.unitary_to(to)?;
                let data = &(&u.dagger() * &self.data) * &u;
                Ok(Self { basis: to.clone(), data })
            }
        }
    };
}

coefficient_matrix!(ChiMatrix, "chi-matrix");
coefficient_matrix!(SMatrix, "S-matrix");

impl ChiMatrix {
    /// `sum_AB chi_AB P_A rho P_B^dagger`.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let els = self.basis.elements();
        let dim = self.basis.dim();
        if rho.rows() != dim || rho.cols() != dim {
            return Err(QopError::DimensionMismatch("state does not match register".into()));
        }
        let mut out = ComplexMatrix::zeros(dim, dim);
        for (a, pa) in els.iter().enumerate() {
            let left = pa * rho;
            let mut right = ComplexMatrix::zeros(dim, dim);
            for (b, pb) in els.iter().enumerate() {
                let c = self.data[(a, b)];
                if c != ZERO {
                    right += &pb.dagger().scale(c);
                }
            }
            out += &(&left * &right);
        }
        Ok(out)
    }
}

impl SMatrix {
    /// Expand `rho`, multiply the coefficient vector by `S`, resynthesize.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let c = self.basis.coefficients(rho)?;
        let out = self.data.matvec(&c)?;
        self.basis.synthesize(&out)
    }

    /// S-matrix of the identity channel: the identity in any orthonormal basis.
    pub fn identity(basis: ProductBasis) -> Self {
        let size = basis.size();
        Self { basis, data: ComplexMatrix::identity(size) }
    }
}

/// Kraus operators `S(rho) = sum_i K_i rho K_i^dagger` on `n` qudits.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    d: usize,
    n: usize,
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(d: usize, n: usize, operators: Vec<ComplexMatrix>) -> Result<Self> {
        if d < 2 || n == 0 {
            return Err(QopError::InvalidArgument(format!("need d >= 2 and n >= 1, got d={d}, n={n}")));
        }
        let dim = d.pow(n as u32);
        if let Some(k) = operators.iter().find(|k| k.rows() != dim || k.cols() != dim) {
            return Err(QopError::DimensionMismatch(format!(
                "Kraus operator is {}x{}, expected {dim}x{dim}",
                k.rows(),
                k.cols()
            )));
        }
        Ok(Self { d, n, operators })
    }

    /// Single-operator channel `rho -> U rho U^dagger`.
    pub fn unitary(d: usize, n: usize, u: ComplexMatrix) -> Result<Self> {
        Self::new(d, n, vec![u])
    }

    pub fn identity(d: usize, n: usize) -> Result<Self> {
        Self::new(d, n, vec![ComplexMatrix::identity(d.pow(n as u32))])
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn rank(&self) -> usize {
        self.operators.len()
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let dim = self.dim();
        if rho.rows() != dim || rho.cols() != dim {
            return Err(QopError::DimensionMismatch("state does not match register".into()));
        }
        let mut out = ComplexMatrix::zeros(dim, dim);
        for k in &self.operators {
            out += &(&(k * rho) * &k.dagger());
        }
        Ok(out)
    }

    /// `sum_i K_i^dagger K_i`.
    pub fn effect_sum(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.dim(), self.dim());
        for k in &self.operators {
            out += &(&k.dagger() * k);
        }
        out
    }
}

/// A channel in any of the three interconvertible forms.
#[derive(Debug, Clone, PartialEq)]
pub enum ChannelRepr {
    Chi(ChiMatrix),
    S(SMatrix),
    Kraus(KrausChannel),
}

impl From<ChiMatrix> for ChannelRepr {
    fn from(c: ChiMatrix) -> Self {
        ChannelRepr::Chi(c)
    }
}

impl From<SMatrix> for ChannelRepr {
    fn from(s: SMatrix) -> Self {
        ChannelRepr::S(s)
    }
}

impl From<KrausChannel> for ChannelRepr {
    fn from(k: KrausChannel) -> Self {
        ChannelRepr::Kraus(k)
    }
}

impl ChannelRepr {
    pub fn d(&self) -> usize {
        match self {
            ChannelRepr::Chi(c) => c.d(),
            ChannelRepr::S(s) => s.d(),
            ChannelRepr::Kraus(k) => k.d(),
        }
    }

    pub fn n(&self) -> usize {
        match self {
            ChannelRepr::Chi(c) => c.n(),
            ChannelRepr::S(s) => s.n(),
            ChannelRepr::Kraus(k) => k.n(),
        }
    }

    pub fn basis(&self) -> Option<&ProductBasis> {
        match self {
            ChannelRepr::Chi(c) => Some(c.basis()),
            ChannelRepr::S(s) => Some(s.basis()),
            ChannelRepr::Kraus(_) => None,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ChannelRepr::Chi(_) => "chi",
            ChannelRepr::S(_) => "smatrix",
            ChannelRepr::Kraus(_) => "kraus",
        }
    }

    /// Chi-matrix over `basis`.
    pub fn to_chi(&self, basis: &ProductBasis) -> Result<ChiMatrix> {
        check_size(basis.size())?;
        match self {
            ChannelRepr::Chi(c) => c.change_basis(basis),
            ChannelRepr::S(s) => s_to_chi_n(s)?.change_basis(basis),
            ChannelRepr::Kraus(k) => chi_from_kraus(k, basis),
        }
    }

    /// S-matrix over `basis`.
    pub fn to_s(&self, basis: &ProductBasis) -> Result<SMatrix> {
        check_size(basis.size())?;
        match self {
            ChannelRepr::Chi(c) => chi_to_s_n(c)?.change_basis(basis),
            ChannelRepr::S(s) => s.change_basis(basis),
            ChannelRepr::Kraus(k) => s_from_kraus(k, basis),
        }
    }

    pub fn to_kraus(&self) -> Result<KrausChannel> {
        match self {
            ChannelRepr::Chi(c) => kraus_from_chi(c),
            ChannelRepr::S(s) => kraus_from_chi(&s_to_chi_n(s)?),
            ChannelRepr::Kraus(k) => Ok(k.clone()),
        }
    }

    /// Chi-matrix in the representation's own basis (gellmann for Kraus input).
    pub fn native_chi(&self) -> Result<ChiMatrix> {
        match self {
            ChannelRepr::Chi(c) => Ok(c.clone()),
            ChannelRepr::S(s) => s_to_chi_n(s),
            ChannelRepr::Kraus(k) => {
                chi_from_kraus(k, &ProductBasis::canonical(BasisKind::GellMann, k.d(), k.n())?)
            }
        }
    }

    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        match self {
            ChannelRepr::Chi(c) => c.apply(rho),
            ChannelRepr::S(s) => s.apply(rho),
            ChannelRepr::Kraus(k) => k.apply(rho),
        }
    }

    /// Matrix `L` with `vec(S(rho)) = L vec(rho)`.
    pub fn superop_matrix(&self) -> Result<ComplexMatrix> {
        match self {
            ChannelRepr::Chi(c) => Ok(superop_from_chi(c)),
            ChannelRepr::S(s) => {
                let b = s.basis.vec_matrix();
                Ok(&(&b * &s.data) * &b.dagger())
            }
            ChannelRepr::Kraus(k) => {
                let dim = k.dim();
                let mut l = ComplexMatrix::zeros(dim * dim, dim * dim);
                for op in &k.operators {
                    l += &op.kron(&op.conj());
                }
                Ok(l)
            }
        }
    }

    /// Choi operator `(S (x) I)(|I>><<I|)` with factor order
    /// `(outputs..., mirrors...)`.
    pub fn choi_operator(&self) -> Result<ComplexMatrix> {
        match self {
            ChannelRepr::Chi(c) => {
                let b = c.basis.vec_matrix();
                Ok(&(&b * &c.data) * &b.dagger())
            }
            ChannelRepr::S(s) => Ok(sum_kron_conj(&s.basis, &s.data)),
            ChannelRepr::Kraus(k) => {
                let dim = k.dim();
                let mut out = ComplexMatrix::zeros(dim * dim, dim * dim);
                for op in &k.operators {
                    let v = vec(op)?;
                    out += &ComplexMatrix::outer(v.entries(), v.entries());
                }
                Ok(out)
            }
        }
    }
}

/// `sum_AB X_AB P_A (x) conj(P_B)`.
fn sum_kron_conj(basis: &ProductBasis, x: &ComplexMatrix) -> ComplexMatrix {
    let els = basis.elements();
    let conj: Vec<ComplexMatrix> = els.iter().map(ComplexMatrix::conj).collect();
    let dim = basis.dim();
    let mut out = ComplexMatrix::zeros(dim * dim, dim * dim);
    for (a, pa) in els.iter().enumerate() {
        let mut right = ComplexMatrix::zeros(dim, dim);
        for (b, pb) in conj.iter().enumerate() {
            let c = x[(a, b)];
            if c != ZERO {
                right += &pb.scale(c);
            }
        }
        out += &pa.kron(&right);
    }
    out
}

fn superop_from_chi(chi: &ChiMatrix) -> ComplexMatrix {
    sum_kron_conj(&chi.basis, &chi.data)
}

/// Reorders a Choi operator from `(out_1..out_n, in_1..in_n)` to the
/// interleaved `(out_1, in_1, out_2, in_2, ...)` layout.
pub fn interleave_choi(choi: &ComplexMatrix, d: usize, n: usize) -> Result<ComplexMatrix> {
    let dims = vec![d; 2 * n];
    let perm: Vec<usize> = (0..2 * n).map(|j| if j % 2 == 0 { j / 2 } else { n + j / 2 }).collect();
    choi.permute_factors(&dims, &perm)
}

/// Precomputed `Q^g`, `R^g` for one operator basis.
#[derive(Debug, Clone)]
pub struct ConversionKit {
    basis: BasisRef,
    q: Vec<ComplexMatrix>,
    r: Vec<ComplexMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum KitKey {
    Canonical(BasisKind, usize),
    Custom(usize, Vec<u64>),
}

impl KitKey {
    fn of(b: &OperatorBasis) -> Self {
        match b.kind() {
            BasisKind::Custom => KitKey::Custom(
                b.d(),
                b.elements()
                    .iter()
                    .flat_map(|e| e.as_slice().iter().flat_map(|z| [z.re.to_bits(), z.im.to_bits()]))
                    .collect(),
            ),
            kind => KitKey::Canonical(kind, b.d()),
        }
    }
}

fn kit_cache() -> &'static Mutex<HashMap<KitKey, Arc<ConversionKit>>> {
    static CACHE: OnceLock<Mutex<HashMap<KitKey, Arc<ConversionKit>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl ConversionKit {
    /// Computes `Q^g`, `R^g` from their defining matrix elements and checks
    /// that the induced M matrix is Hermitian and unitary.
    pub fn build(basis: BasisRef) -> Result<Self> {
        let d = basis.d();
        let k = d * d;
        let ident = ComplexMatrix::identity(d);
        let transitions = crate::basis::OperatorBasis::transition(d)?;
        let vecs: Vec<Vec<C64>> = basis
            .elements()
            .iter()
            .map(|e| vec(e).map(|v| v.into_entries()))
            .collect::<Result<_>>()?;
        let bmat = {
            let mut m = ComplexMatrix::zeros(k, k);
            for (c, v) in vecs.iter().enumerate() {
                for (r, z) in v.iter().enumerate() {
                    m[(r, c)] = *z;
                }
            }
            m
        };
        let bdag = bmat.dagger();
        let mut q = Vec::with_capacity(k);
        let mut r = Vec::with_capacity(k);
        for pi in transitions.elements() {
            q.push(&(&bdag * &ident.kron(pi)) * &bmat);
            r.push(&(&bdag * &pi.kron(&ident)) * &bmat);
        }
        let kit = Self { basis, q, r };
        let m = kit.m_matrix();
        let herm = m.hermiticity_deviation();
        let unit = (&m * &m).max_abs_diff(&ComplexMatrix::identity(k * k));
        if herm > KIT_TOL || unit > KIT_TOL {
            return Err(QopError::InvalidBasis(format!(
                "conversion matrix M deviates from Hermitian-unitary ({herm:.3e}, {unit:.3e})"
            )));
        }
        Ok(kit)
    }

    /// Shared kit for `basis`, built on first use.
    pub fn cached(basis: &BasisRef) -> Result<Arc<Self>> {
        let key = KitKey::of(basis);
        if let Some(kit) = kit_cache().lock().expect("kit cache poisoned").get(&key) {
            return Ok(Arc::clone(kit));
        }
        let kit = Arc::new(Self::build(Arc::clone(basis))?);
        kit_cache().lock().expect("kit cache poisoned").insert(key, Arc::clone(&kit));
        Ok(kit)
    }

    pub fn basis(&self) -> &BasisRef {
        &self.basis
    }

    pub fn d(&self) -> usize {
        self.basis.d()
    }

    pub fn q(&self) -> &[ComplexMatrix] {
        &self.q
    }

    pub fn r(&self) -> &[ComplexMatrix] {
        &self.r
    }

    /// `M_{a'b';ab} = sum_g Q^g_{a'a} R^g_{bb'}` as a `d^4 x d^4` matrix with
    /// row `(a', b')` and column `(a, b)`, packed as `d^2 x + y`.
    pub fn m_matrix(&self) -> ComplexMatrix {
        let k = self.d() * self.d();
        let mut m = ComplexMatrix::zeros(k * k, k * k);
        for (qg, rg) in self.q.iter().zip(&self.r) {
            for a1 in 0..k {
                for a in 0..k {
                    let qv = qg[(a1, a)];
                    if qv == ZERO {
                        continue;
                    }
                    for b in 0..k {
                        for b1 in 0..k {
                            m[(a1 * k + b1, a * k + b)] += qv * rg[(b, b1)];
                        }
                    }
                }
            }
        }
        m
    }

    /// `sum_g Q^g X R^g`.
    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let k = self.q.len();
        let mut out = ComplexMatrix::zeros(k, k);
        for (qg, rg) in self.q.iter().zip(&self.r) {
            out += &(&(qg * x) * rg);
        }
        out
    }
}

/// Kits for a two-qudit register: `(Q, R)` over the first basis and
/// `(S, T)` over the second.
#[derive(Debug, Clone)]
pub struct TwoQuditKit {
    pub first: Arc<ConversionKit>,
    pub second: Arc<ConversionKit>,
}

impl TwoQuditKit {
    pub fn s(&self) -> &[ComplexMatrix] {
        self.second.q()
    }

    pub fn t(&self) -> &[ComplexMatrix] {
        self.second.r()
    }

    /// `sum_{g,l} (Q^g (x) S^l) X (R^g (x) T^l)`.
    fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let k = x.rows();
        let mut out = ComplexMatrix::zeros(k, k);
        for (qg, rg) in self.first.q.iter().zip(&self.first.r) {
            for (sl, tl) in self.second.q.iter().zip(&self.second.r) {
                out += &(&(&qg.kron(sl) * x) * &rg.kron(tl));
            }
        }
        out
    }
}

pub fn build_kit(basis: &BasisRef) -> Result<Arc<ConversionKit>> {
    ConversionKit::cached(basis)
}

pub fn build_two_qudit_kit(first: &BasisRef, second: &BasisRef) -> Result<TwoQuditKit> {
    if first.d() != second.d() {
        return Err(QopError::DimensionMismatch("two-qudit kit needs equal d".into()));
    }
    Ok(TwoQuditKit { first: ConversionKit::cached(first)?, second: ConversionKit::cached(second)? })
}

fn require_kit_basis(basis: &ProductBasis, kits: &[&ConversionKit]) -> Result<()> {
    if basis.n() != kits.len() {
        return Err(QopError::DimensionMismatch(format!(
            "{}-qudit matrix with {} kits",
            basis.n(),
            kits.len()
        )));
    }
    for (i, (b, kit)) in basis.qudits().iter().zip(kits).enumerate() {
        if !(Arc::ptr_eq(b, &kit.basis) || **b == *kit.basis) {
            return Err(QopError::BasisMismatch(format!(
                "qudit {i} is in the {} basis but the kit is for {}",
                b.kind(),
                kit.basis.kind()
            )));
        }
    }
    Ok(())
}

/// Single-qudit chi -> S: `S = sum_g Q^g chi R^g`.
pub fn chi_to_s(chi: &ChiMatrix, kit: &ConversionKit) -> Result<SMatrix> {
    require_kit_basis(&chi.basis, &[kit])?;
    Ok(SMatrix { basis: chi.basis.clone(), data: kit.apply(&chi.data) })
}

/// Single-qudit S -> chi: `chi = sum_g Q^g S R^g`.
pub fn s_to_chi(s: &SMatrix, kit: &ConversionKit) -> Result<ChiMatrix> {
    require_kit_basis(&s.basis, &[kit])?;
    Ok(ChiMatrix { basis: s.basis.clone(), data: kit.apply(&s.data) })
}

pub fn chi_to_s_2(chi: &ChiMatrix, kits: &TwoQuditKit) -> Result<SMatrix> {
    require_kit_basis(&chi.basis, &[&kits.first, &kits.second])?;
    Ok(SMatrix { basis: chi.basis.clone(), data: kits.apply(&chi.data) })
}

pub fn s_to_chi_2(s: &SMatrix, kits: &TwoQuditKit) -> Result<ChiMatrix> {
    require_kit_basis(&s.basis, &[&kits.first, &kits.second])?;
    Ok(ChiMatrix { basis: s.basis.clone(), data: kits.apply(&s.data) })
}

fn kits_for(basis: &ProductBasis) -> Result<Vec<Arc<ConversionKit>>> {
    basis.qudits().iter().map(ConversionKit::cached).collect()
}

/// n-qudit chi -> S with cached kits; n = 1 and n = 2 use the dedicated paths.
pub fn chi_to_s_n(chi: &ChiMatrix) -> Result<SMatrix> {
    let kits = kits_for(&chi.basis)?;
    Ok(SMatrix { basis: chi.basis.clone(), data: convert_n(&chi.data, &kits)? })
}

/// n-qudit S -> chi with cached kits.
pub fn s_to_chi_n(s: &SMatrix) -> Result<ChiMatrix> {
    let kits = kits_for(&s.basis)?;
    Ok(ChiMatrix { basis: s.basis.clone(), data: convert_n(&s.data, &kits)? })
}

/// Applies `sum_{g1..gn} (Q^g1 (x) .. (x) Q^gn) X (R^g1 (x) .. (x) R^gn)`.
///
/// The map is the same in both directions (chi -> S and S -> chi).
pub fn convert_n(x: &ComplexMatrix, kits: &[Arc<ConversionKit>]) -> Result<ComplexMatrix> {
    let n = kits.len();
    if n == 0 {
        return Err(QopError::InvalidArgument("need at least one kit".into()));
    }
    let d = kits[0].d();
    let size = (d * d).pow(n as u32);
    if x.rows() != size || x.cols() != size {
        return Err(QopError::DimensionMismatch(format!(
            "{}x{} matrix for {n} qudits of d = {d}",
            x.rows(),
            x.cols()
        )));
    }
    check_size(size)?;
    match n {
        1 => Ok(kits[0].apply(x)),
        2 => Ok(TwoQuditKit { first: kits[0].clone(), second: kits[1].clone() }.apply(x)),
        _ => Ok(convert_factorized(x, kits)),
    }
}

/// Qudit-by-qudit evaluation: the kit of qudit `i` acts on digit `i` of the
/// row and column indices, and the per-qudit sums commute.
pub fn convert_factorized(x: &ComplexMatrix, kits: &[Arc<ConversionKit>]) -> ComplexMatrix {
    let n = kits.len();
    let mut cur = x.clone();
    for (digit, kit) in kits.iter().enumerate().rev() {
        let mut next = ComplexMatrix::zeros(cur.rows(), cur.cols());
        for (qg, rg) in kit.q.iter().zip(&kit.r) {
            let t = apply_on_digit_left(qg, &cur, digit, n);
            next += &apply_on_digit_right(&t, rg, digit, n);
        }
        cur = next;
    }
    cur
}

fn digit_stride(k: usize, digit: usize, n: usize) -> usize {
    k.pow((n - 1 - digit) as u32)
}

/// `(I (x) .. M .. (x) I) X` with `M` on `digit` of the row index.
fn apply_on_digit_left(m: &ComplexMatrix, x: &ComplexMatrix, digit: usize, n: usize) -> ComplexMatrix {
    let k = m.rows();
    let s = digit_stride(k, digit, n);
    let (rows, cols) = (x.rows(), x.cols());
    let mut out = ComplexMatrix::zeros(rows, cols);
    let src = x.as_slice();
    let dst = out.as_mut_slice();
    for r in 0..rows {
        let a = (r / s) % k;
        let base = r - a * s;
        let out_row = &mut dst[r * cols..(r + 1) * cols];
        for b in 0..k {
            let coef = m[(a, b)];
            if coef == ZERO {
                continue;
            }
            let src_row = &src[(base + b * s) * cols..(base + b * s + 1) * cols];
            for (o, v) in out_row.iter_mut().zip(src_row) {
                *o += coef * v;
            }
        }
    }
    out
}

/// `X (I (x) .. M .. (x) I)` with `M` on `digit` of the column index.
fn apply_on_digit_right(x: &ComplexMatrix, m: &ComplexMatrix, digit: usize, n: usize) -> ComplexMatrix {
    let k = m.rows();
    let s = digit_stride(k, digit, n);
    let (rows, cols) = (x.rows(), x.cols());
    let mut out = ComplexMatrix::zeros(rows, cols);
    let src = x.as_slice();
    let dst = out.as_mut_slice();
    for r in 0..rows {
        let src_row = &src[r * cols..(r + 1) * cols];
        let out_row = &mut dst[r * cols..(r + 1) * cols];
        for (c, o) in out_row.iter_mut().enumerate() {
            let a = (c / s) % k;
            let base = c - a * s;
            let mut acc = ZERO;
            for b in 0..k {
                let coef = m[(b, a)];
                if coef != ZERO {
                    acc += src_row[base + b * s] * coef;
                }
            }
            *o = acc;
        }
    }
    out
}

/// Kraus operators from the eigendecomposition of chi:
/// `K_m = sqrt(lambda_m) sum_A V_Am P_A`.
pub fn kraus_from_chi(chi: &ChiMatrix) -> Result<KrausChannel> {
    let eig = chi.data.eigh()?;
    let max = eig.max_eigenvalue().max(0.0);
    let min = eig.min_eigenvalue();
    if min < -CP_TOL * max || (max == 0.0 && min < 0.0) {
        return Err(QopError::NotCompletelyPositive { min_eigenvalue: min });
    }
    let mut ops = Vec::new();
    for (m, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda <= KRAUS_TRUNCATION * max || lambda <= 0.0 {
            continue;
        }
        let coeffs: Vec<C64> = eig.eigenvectors.column(m).iter().map(|v| v * lambda.sqrt()).collect();
        ops.push(chi.basis.synthesize(&coeffs)?);
    }
    KrausChannel::new(chi.d(), chi.n(), ops)
}

/// `chi_AB = sum_i c^i_A conj(c^i_B)` with `K_i = sum_A c^i_A P_A`.
pub fn chi_from_kraus(k: &KrausChannel, basis: &ProductBasis) -> Result<ChiMatrix> {
    check_kraus_basis(k, basis)?;
    check_size(basis.size())?;
    let bdag = basis.vec_matrix().dagger();
    let size = basis.size();
    let mut data = ComplexMatrix::zeros(size, size);
    for op in &k.operators {
        let c = bdag.mul_unchecked(&column(op.as_slice())).into_vec();
        data += &ComplexMatrix::outer(&c, &c);
    }
    Ok(ChiMatrix { basis: basis.clone(), data })
}

/// `S = B^dagger L B` with `L = sum_i K_i (x) conj(K_i)`.
pub fn s_from_kraus(k: &KrausChannel, basis: &ProductBasis) -> Result<SMatrix> {
    check_kraus_basis(k, basis)?;
    check_size(basis.size())?;
    let b = basis.vec_matrix();
    let l = ChannelRepr::Kraus(k.clone()).superop_matrix()?;
    Ok(SMatrix { basis: basis.clone(), data: &(&b.dagger() * &l) * &b })
}

fn check_kraus_basis(k: &KrausChannel, basis: &ProductBasis) -> Result<()> {
    if k.d != basis.d() || k.n != basis.n() {
        return Err(QopError::DimensionMismatch(format!(
            "channel on {} qudits of d = {} with basis {}",
            k.n,
            k.d,
            basis.describe()
        )));
    }
    Ok(())
}

/// Chi-matrix of a channel acting as `chi_a` on the first qudits and `chi_b`
/// on the rest; with the packed index this is `chi_a (x) chi_b`.
pub fn tensor_chi(a: &ChiMatrix, b: &ChiMatrix) -> Result<ChiMatrix> {
    let mut qudits = a.basis.qudits().to_vec();
    qudits.extend(b.basis.qudits().iter().cloned());
    ChiMatrix::new(ProductBasis::new(qudits)?, a.data.kron(&b.data))
}

/// Number of entries in the matrix side of a `d`-dimensional `n`-qudit chi/S.
pub fn matrix_dim(d: usize, n: usize) -> usize {
    (d * d).pow(n as u32)
}

/// Recovers `(d, n)` from a chi/S dimension when `d` is known.
pub fn qudits_from_dim(d: usize, size: usize) -> Option<usize> {
    let dim = exact_sqrt(size)?;
    let mut n = 0;
    let mut acc = 1;
    while acc < dim {
        acc *= d;
        n += 1;
    }
    (acc == dim && n > 0).then_some(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn basis(kind: BasisKind, d: usize) -> BasisRef {
        Arc::new(OperatorBasis::canonical(kind, d).unwrap())
    }

    #[test]
    fn transition_kit_entries() {
        let kit = ConversionKit::build(basis(BasisKind::Transition, 2)).unwrap();
        // Q^{(k,l)}_{(i',j'),(i,j)} = delta_{i'i} delta_{j'k} delta_{lj}
        let d = 2;
        for k in 0..d {
            for l in 0..d {
                let q = &kit.q()[k * d + l];
                for i1 in 0..d {
                    for j1 in 0..d {
                        for i in 0..d {
                            for j in 0..d {
                                let expect = (i1 == i && j1 == k && l == j) as u8 as f64;
                                assert_eq!(q[(i1 * d + j1, i * d + j)], C64::new(expect, 0.0));
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(kit.q()[1][(0, 1)], C64::new(1.0, 0.0));
    }

    #[test]
    fn kit_cache_returns_same_instance() {
        let b = basis(BasisKind::Weyl, 3);
        let k1 = ConversionKit::cached(&b).unwrap();
        let k2 = ConversionKit::cached(&basis(BasisKind::Weyl, 3)).unwrap();
        assert!(Arc::ptr_eq(&k1, &k2));
    }

    #[test]
    fn identity_channel_gellmann() {
        let pb = ProductBasis::canonical(BasisKind::GellMann, 3, 1).unwrap();
        let kit = build_kit(pb.qudit(0)).unwrap();
        let mut chi = ComplexMatrix::zeros(9, 9);
        chi[(0, 0)] = C64::new(3.0, 0.0);
        let chi = ChiMatrix::new(pb.clone(), chi).unwrap();
        let s = chi_to_s(&chi, &kit).unwrap();
        assert!(s.data().max_abs_diff(&ComplexMatrix::identity(9)) < 1e-13);
        let back = s_to_chi(&SMatrix::identity(pb), &kit).unwrap();
        assert!(back.data().max_abs_diff(chi.data()) < 1e-13);
    }

    #[test]
    fn depolarizing_s_in_gellmann() {
        for d in [2, 3] {
            let pb = ProductBasis::canonical(BasisKind::GellMann, d, 1).unwrap();
            let chi = ChiMatrix::new(pb.clone(), ComplexMatrix::identity(d * d).scale_real(1.0 / d as f64)).unwrap();
            let s = chi_to_s_n(&chi).unwrap();
            let mut expect = ComplexMatrix::zeros(d * d, d * d);
            expect[(0, 0)] = C64::new(1.0, 0.0);
            assert!(s.data().max_abs_diff(&expect) < 1e-13);
        }
    }

    #[test]
    fn kit_basis_mismatch_is_rejected() {
        let pb = ProductBasis::canonical(BasisKind::GellMann, 2, 1).unwrap();
        let chi = ChiMatrix::new(pb, ComplexMatrix::identity(4)).unwrap();
        let kit = build_kit(&basis(BasisKind::Weyl, 2)).unwrap();
        assert!(matches!(chi_to_s(&chi, &kit), Err(QopError::BasisMismatch(_))));
    }

    #[test]
    fn kraus_roundtrip_action() {
        let mut rng = random::rng(7);
        let k = random::kraus_channel(&mut rng, 3, 1, 3);
        let pb = ProductBasis::canonical(BasisKind::Weyl, 3, 1).unwrap();
        let chi = chi_from_kraus(&k, &pb).unwrap();
        let k2 = kraus_from_chi(&chi).unwrap();
        assert_eq!(k2.rank(), 3);
        let rho = random::density(&mut rng, 3);
        assert!(k.apply(&rho).unwrap().max_abs_diff(&k2.apply(&rho).unwrap()) < 1e-10);
    }

    #[test]
    fn non_cp_chi_rejected() {
        let pb = ProductBasis::canonical(BasisKind::GellMann, 2, 1).unwrap();
        let chi = ChiMatrix::new(pb, ComplexMatrix::diag_real(&[1.0, -0.1, 0.0, 0.0])).unwrap();
        match kraus_from_chi(&chi) {
            Err(QopError::NotCompletelyPositive { min_eigenvalue }) => {
                assert!((min_eigenvalue + 0.1).abs() < 1e-12)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn factorized_matches_two_qudit_path() {
        let mut rng = random::rng(8);
        let k = random::kraus_channel(&mut rng, 2, 2, 2);
        let pb = ProductBasis::new(vec![basis(BasisKind::GellMann, 2), basis(BasisKind::Weyl, 2)]).unwrap();
        let chi = chi_from_kraus(&k, &pb).unwrap();
        let kits = kits_for(&pb).unwrap();
        let fast = convert_factorized(chi.data(), &kits);
        let two = convert_n(chi.data(), &kits).unwrap();
        assert!(fast.max_abs_diff(&two) < 1e-12);
    }

    #[test]
    fn size_guard_trips() {
        let pb = ProductBasis::canonical(BasisKind::GellMann, 2, 7).unwrap();
        let k = KrausChannel::identity(2, 7).unwrap();
        assert!(matches!(chi_from_kraus(&k, &pb), Err(QopError::SizeGuard { .. })));
    }

    #[test]
    fn qudit_count_from_dim() {
        assert_eq!(qudits_from_dim(2, 16), Some(2));
        assert_eq!(qudits_from_dim(3, 81), Some(2));
        assert_eq!(qudits_from_dim(2, 8), None);
        assert_eq!(matrix_dim(2, 3), 64);
    }
}
