//! Matrix representations of quantum operations on qudits.
//!
//! A channel is held as a chi-matrix, an S-matrix (Liouville superoperator
//! coefficients) or a Kraus list, each tied to per-qudit operator bases.
//! The crate converts between the forms without matrix inversion, changes
//! bases, checks physicality, composes channels into circuits and simulates
//! entanglement-assisted process tomography.
//!
//! ```
//! use qopmat::{BasisKind, ChannelRepr, KrausChannel, ProductBasis};
//!
//! let basis = ProductBasis::canonical(BasisKind::GellMann, 2, 1).unwrap();
//! let identity = ChannelRepr::Kraus(KrausChannel::identity(2, 1).unwrap());
//! let chi = identity.to_chi(&basis).unwrap();
//! assert!((chi.data()[(0, 0)].re - 2.0).abs() < 1e-12);
//! ```

pub mod basis;
pub mod channels;
pub mod composition;
pub mod error;
pub mod io;
pub mod linalg;
pub mod liouville;
pub mod physicality;
pub mod random;
pub mod representations;
pub mod tomography;

pub use basis::{
    change_of_basis_unitary, isotropic_state, swap_operator, validate_elements, BasisKind, BasisReport,
    OperatorBasis,
};
pub use composition::{compose, lift, run_circuit, CircuitSpec, CircuitStep};
pub use error::{QopError, Result};
pub use linalg::{ComplexMatrix, EigenDecomposition, C64};
pub use liouville::{reshuffle, unvec, vec, LVector};
pub use physicality::{channel_purity, check_physical, process_fidelity, PhysicalityReport};
pub use representations::{
    build_kit, build_two_qudit_kit, chi_from_kraus, chi_to_s, chi_to_s_2, kraus_from_chi, s_to_chi,
    s_to_chi_2, BasisRef, ChannelRepr, ChiMatrix, ConversionKit, KrausChannel, ProductBasis, SMatrix,
    TwoQuditKit,
};
pub use tomography::{reconstruct, simulate_dataset, Reconstruction, TomographyDataset};
