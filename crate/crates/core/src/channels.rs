//! Standard gates and channels in Kraus form.
//!
//! Qudit generalizations are used where they exist: `X` is the cyclic shift,
//! `Z` the clock operator, `H` the discrete Fourier transform, `CNOT` the
//! controlled shift and `CZ` the controlled clock. `Y`, `S` and `T` are
//! qubit-only.

use std::f64::consts::PI;

use crate::error::{QopError, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::representations::{ChannelRepr, KrausChannel};

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &["I", "X", "Y", "Z", "H", "S", "T", "CNOT", "CZ", "SWAP", "depolarize"];

fn root_of_unity(d: usize, k: usize) -> C64 {
    C64::from_polar(1.0, 2.0 * PI * (k % d) as f64 / d as f64)
}

/// `X|j> = |j+1 mod d>`.
pub fn shift(d: usize) -> ComplexMatrix {
    let mut x = ComplexMatrix::zeros(d, d);
    for j in 0..d {
        x[((j + 1) % d, j)] = C64::new(1.0, 0.0);
    }
    x
}

/// `Z|j> = w^j |j>` with `w = exp(2 pi i / d)`.
pub fn clock(d: usize) -> ComplexMatrix {
    ComplexMatrix::diag(&(0..d).map(|j| root_of_unity(d, j)).collect::<Vec<_>>())
}

/// `F_jk = w^(jk) / sqrt(d)`; the Hadamard gate for `d = 2`.
pub fn fourier(d: usize) -> ComplexMatrix {
    let mut f = ComplexMatrix::zeros(d, d);
    let norm = 1.0 / (d as f64).sqrt();
    for j in 0..d {
        for k in 0..d {
            f[(j, k)] = root_of_unity(d, j * k) * norm;
        }
    }
    f
}

pub fn pauli_y() -> ComplexMatrix {
    ComplexMatrix::new(2, 2, vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)])
        .expect("2x2")
}

pub fn phase(theta: f64) -> ComplexMatrix {
    ComplexMatrix::diag(&[C64::new(1.0, 0.0), C64::from_polar(1.0, theta)])
}

/// `|i, j> -> |i, i + j mod d>`.
pub fn controlled_shift(d: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(i * d + (i + j) % d, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    u
}

/// `|i, j> -> w^(ij) |i, j>`.
pub fn controlled_clock(d: usize) -> ComplexMatrix {
    let diag: Vec<C64> = (0..d * d).map(|k| root_of_unity(d, (k / d) * (k % d))).collect();
    ComplexMatrix::diag(&diag)
}

/// `|i, j> -> |j, i>`.
pub fn swap(d: usize) -> ComplexMatrix {
    let mut u = ComplexMatrix::zeros(d * d, d * d);
    for i in 0..d {
        for j in 0..d {
            u[(j * d + i, i * d + j)] = C64::new(1.0, 0.0);
        }
    }
    u
}

pub fn unitary_channel(d: usize, n: usize, u: ComplexMatrix) -> Result<ChannelRepr> {
    Ok(KrausChannel::unitary(d, n, u)?.into())
}

pub fn identity(d: usize, n: usize) -> Result<ChannelRepr> {
    Ok(KrausChannel::identity(d, n)?.into())
}

/// Completely depolarizing channel `rho -> Tr(rho) I / d^n`, with Kraus
/// operators `|i><j| / sqrt(d^n)`.
pub fn depolarizing(d: usize, n: usize) -> Result<ChannelRepr> {
    if d < 2 || n == 0 {
        return Err(QopError::InvalidArgument(format!("need d >= 2 and n >= 1, got d={d}, n={n}")));
    }
    let dim = d.pow(n as u32);
    let norm = C64::new(1.0 / (dim as f64).sqrt(), 0.0);
    let mut ops = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            let mut k = ComplexMatrix::zeros(dim, dim);
            k[(i, j)] = norm;
            ops.push(k);
        }
    }
    Ok(KrausChannel::new(d, n, ops)?.into())
}

/// Built-in channel by name for qudit dimension `d`.
pub fn by_name(name: &str, d: usize) -> Result<ChannelRepr> {
    if d < 2 {
        return Err(QopError::InvalidArgument(format!("qudit dimension must be at least 2, got {d}")));
    }
    let qubit_only = |u: ComplexMatrix| {
        if d == 2 {
            unitary_channel(2, 1, u)
        } else {
            Err(QopError::InvalidArgument(format!("gate {name} is defined only for d = 2")))
        }
    };
    match name {
        "I" => identity(d, 1),
        "X" => unitary_channel(d, 1, shift(d)),
        "Z" => unitary_channel(d, 1, clock(d)),
        "H" => unitary_channel(d, 1, fourier(d)),
        "Y" => qubit_only(pauli_y()),
        "S" => qubit_only(phase(PI / 2.0)),
        "T" => qubit_only(phase(PI / 4.0)),
        "CNOT" => unitary_channel(d, 2, controlled_shift(d)),
        "CZ" => unitary_channel(d, 2, controlled_clock(d)),
        "SWAP" => unitary_channel(d, 2, swap(d)),
        "depolarize" => depolarizing(d, 1),
        other => Err(QopError::InvalidArgument(format!(
            "unknown channel name {other:?}; built-ins are {}",
            NAMES.join(", ")
        ))),
    }
}
