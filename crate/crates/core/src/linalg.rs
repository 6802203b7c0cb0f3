//! Small dense complex linear algebra helpers.
//!
//! Every block in this crate is tiny (dimensions well under 100), so plain
//! `nalgebra` dense matrices are used throughout.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
pub const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Kronecker product with the row-major pair ordering `(i, j) -> i * dim_b + j`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Operator norm (largest singular value).
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    if m.nrows() == 1 && m.ncols() == 1 {
        return m[(0, 0)].norm();
    }
    m.clone()
        .singular_values()
        .iter()
        .cloned()
        .fold(0.0, f64::max)
}

pub fn vec_norm(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Largest entry modulus, used where a cheap exactness check is enough.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    m.is_square() && op_norm(&(m.adjoint() * m - identity(m.nrows()))) <= tol
}

/// Hilbert-Schmidt inner product `tr(a* b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

/// Realignment of an operator on `H_a ⊗ H_b` into a `da² × db²` matrix whose
/// rank-one pieces are elementary tensors `A ⊗ B`.
pub fn realign(m: &CMatrix, da: usize, db: usize) -> CMatrix {
    let mut r = zeros(da * da, db * db);
    for i in 0..da {
        for ip in 0..da {
            for j in 0..db {
                for jp in 0..db {
                    r[(i * da + ip, j * db + jp)] = m[(i * db + j, ip * db + jp)];
                }
            }
        }
    }
    r
}

/// Inverse of `vec` for a square matrix stored row-major in a column vector.
pub fn unvec_square(v: &CVector, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |i, j| v[i * d + j])
}

/// Reads a `d1·d2` vector as a `d1 × d2` coefficient matrix.
pub fn vector_as_matrix(v: &CVector, d1: usize, d2: usize) -> CMatrix {
    CMatrix::from_fn(d1, d2, |i, j| v[i * d2 + j])
}

pub fn matrix_as_vector(m: &CMatrix) -> CVector {
    let (r, cols) = m.shape();
    CVector::from_fn(r * cols, |k, _| m[(k / cols, k % cols)])
}

/// Swaps tensor legs of a vector in `H_a ⊗ H_b`, returning a vector in `H_b ⊗ H_a`.
pub fn flip_vector(v: &CVector, da: usize, db: usize) -> CVector {
    CVector::from_fn(da * db, |k, _| {
        let (j, i) = (k / da, k % da);
        v[i * db + j]
    })
}

pub fn random_matrix<R: Rng>(rng: &mut R, r: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(r, cols, |_, _| {
        c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    })
}

/// `exp(2πi k / n)`, exact on multiples of a quarter turn.
/// [`random_matrix`] from a ChaCha8 stream seeded with `seed`.
pub fn seeded_random_matrix(seed: u64, r: usize, cols: usize) -> CMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    random_matrix(&mut rng, r, cols)
}

pub fn root_of_unity(k: i64, n: i64) -> C64 {
    let k = k.rem_euclid(n);
    if (4 * k) % n == 0 {
        return match 4 * k / n {
            0 => c(1.0, 0.0),
            1 => c(0.0, 1.0),
            2 => c(-1.0, 0.0),
            _ => c(0.0, -1.0),
        };
    }
    let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
    c(theta.cos(), theta.sin())
}

/// JSON wire form of a complex matrix: rows of `[re, im]` pairs.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(transparent)]
pub struct JsonMatrix(pub Vec<Vec<[f64; 2]>>);

impl JsonMatrix {
    pub fn from_matrix(m: &CMatrix) -> Self {
        JsonMatrix(
            (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        )
    }

    /// Returns `None` for ragged input.
    pub fn to_matrix(&self) -> Option<CMatrix> {
        let rows = self.0.len();
        let cols = self.0.first().map_or(0, |r| r.len());
        if self.0.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(CMatrix::from_fn(rows, cols, |i, j| {
            let [re, im] = self.0[i][j];
            c(re, im)
        }))
    }
}
