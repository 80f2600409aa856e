use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Dense complex square matrix acting on one spin (d = 2) or on the pair (d = 4).
///
/// Two-spin operators use the computational basis `{|00⟩, |01⟩, |10⟩, |11⟩}` with spin 1
/// as the left tensor factor, so the basis index is `2 * s1 + s2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator(DMatrix<C64>);

impl Operator {
    pub fn from_matrix(m: DMatrix<C64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::DimensionMismatch {
                expected: m.nrows(),
                found: m.ncols(),
            });
        }
        Ok(Operator(m))
    }

    /// Row-major real entries, convenient for literals in tests.
    pub fn from_real_rows(dim: usize, rows: &[f64]) -> Self {
        Operator(DMatrix::from_row_slice(dim, dim, rows).map(|x| C64::new(x, 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Operator(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Operator(DMatrix::zeros(dim, dim))
    }

    /// `|v⟩⟨w|`
    pub fn outer(v: &DVector<C64>, w: &DVector<C64>) -> Self {
        Operator(v * w.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Operator(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Operator(self.0.transpose())
    }

    pub fn scale(&self, s: C64) -> Self {
        Operator(&self.0 * s)
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn kron(&self, other: &Operator) -> Self {
        Operator(self.0.kronecker(&other.0))
    }

    /// `⟨w|A|v⟩`
    pub fn matrix_element(&self, w: &DVector<C64>, v: &DVector<C64>) -> C64 {
        w.dotc(&(&self.0 * v))
    }

    pub fn apply(&self, v: &DVector<C64>) -> DVector<C64> {
        &self.0 * v
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()) <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        (self * &self.adjoint()).max_abs_diff(&Operator::identity(self.dim())) <= tol
    }

    pub fn commutator(&self, other: &Operator) -> Self {
        &(self * other) - &(other * self)
    }

    pub fn determinant(&self) -> C64 {
        self.0.determinant()
    }

    /// Numeric eigendecomposition of a Hermitian operator, eigenvalues ascending.
    ///
    /// Column `i` of the returned matrix is the eigenvector for eigenvalue `i`.
    pub fn eigh(&self) -> (Vec<f64>, DMatrix<C64>) {
        let hermitian = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let eig = SymmetricEigen::new(hermitian);
        let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let vectors = DMatrix::from_fn(self.dim(), self.dim(), |r, c| {
            eig.eigenvectors[(r, order[c])]
        });
        (values, vectors)
    }

    pub fn eigenvalues_hermitian(&self) -> Vec<f64> {
        self.eigh().0
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        Operator(&self.0 * &rhs.0)
    }
}

impl Add for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        Operator(&self.0 + &rhs.0)
    }
}

impl Sub for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        Operator(&self.0 - &rhs.0)
    }
}

/// σˣ in the `(|0⟩, |1⟩)` basis.
pub fn pauli_x() -> Operator {
    Operator::from_real_rows(2, &[0.0, 1.0, 1.0, 0.0])
}

/// σʸ chosen so that σˣσʸ = iσᶻ with the σᶻ below.
pub fn pauli_y() -> Operator {
    let i = C64::new(0.0, 1.0);
    Operator(DMatrix::from_row_slice(
        2,
        2,
        &[C64::new(0.0, 0.0), i, -i, C64::new(0.0, 0.0)],
    ))
}

/// σᶻ|0⟩ = −|0⟩, σᶻ|1⟩ = +|1⟩.
pub fn pauli_z() -> Operator {
    Operator::from_real_rows(2, &[-1.0, 0.0, 0.0, 1.0])
}

/// Computational basis ket `|s1 s2⟩` of the pair.
pub fn basis_ket(s1: usize, s2: usize) -> DVector<C64> {
    let mut v = DVector::zeros(4);
    v[2 * s1 + s2] = C64::new(1.0, 0.0);
    v
}
