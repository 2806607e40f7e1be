//! Seeded random matrices and channels for tests, validation and simulation.
//!
//! Everything draws from [`ChaCha8Rng`], so a seed fixes the stream on every
//! platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{ComplexMatrix, C64};
use crate::representations::KrausChannel;

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre(rng: &mut Rng, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect();
    ComplexMatrix::from_vec_unchecked(rows, cols, data)
}

pub fn hermitian(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    (&g + &g.dagger()).scale_real(0.5)
}

/// Haar-random unitary from Gram-Schmidt on a Ginibre matrix.
pub fn unitary(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v = g.column(c);
        // Two passes keep the columns orthogonal to machine precision.
        for _ in 0..2 {
            for q in &cols {
                let proj: C64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (c, col) in cols.iter().enumerate() {
        for (r, &z) in col.iter().enumerate() {
            u[(r, c)] = z;
        }
    }
    u
}

/// Random full-rank density matrix `G G^dagger / Tr(G G^dagger)`.
pub fn density(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = ginibre(rng, n, n);
    let rho = &g * &g.dagger();
    let tr = rho.trace().expect("square").re;
    rho.scale_real(1.0 / tr)
}

/// Random trace-preserving channel on `n` qudits of dimension `d` with
/// `rank` Kraus operators: `K_i = G_i (sum_j G_j^dagger G_j)^{-1/2}`.
pub fn kraus_channel(rng: &mut Rng, d: usize, n: usize, rank: usize) -> KrausChannel {
    let dim = d.pow(n as u32);
    let gs: Vec<ComplexMatrix> = (0..rank).map(|_| ginibre(rng, dim, dim)).collect();
    let mut gram = ComplexMatrix::zeros(dim, dim);
    for g in &gs {
        gram += &(&g.dagger() * g);
    }
    let e = gram.hermitian_part().eigh().expect("Gram matrix is Hermitian");
    let inv_sqrt: Vec<C64> = e.eigenvalues.iter().map(|&l| C64::new(1.0 / l.sqrt(), 0.0)).collect();
    let v = &e.eigenvectors;
    let inv_sqrt_gram = &(v * &ComplexMatrix::diag(&inv_sqrt)) * &v.dagger();
    let ops = gs.iter().map(|g| g * &inv_sqrt_gram).collect();
    KrausChannel::new(d, n, ops).expect("consistent dimensions")
}
