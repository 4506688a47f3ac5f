//! Dense complex linear algebra and pure-state quantum primitives.
//!
//! Everything here is sized for desk-scale Hilbert spaces (n ≤ 64): matrices
//! are stored dense and row-major, and invariants (Hermiticity, unitarity,
//! normalization) are checked once when a value is constructed.

use std::fmt;

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity and state normalization checks.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Tolerance for the unitarity check on basis matrices.
pub const UNITARY_TOL: f64 = 1e-10;
/// Largest imaginary residue accepted on a physically real quantity.
pub const REAL_RESIDUE_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn check_finite(data: &[Complex64]) -> Result<()> {
    match data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

/// A finite complex vector of fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyDimension);
        }
        check_finite(&entries)?;
        Ok(Self(entries))
    }

    pub fn from_real(entries: &[f64]) -> Result<Self> {
        Self::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![ZERO; n.max(1)])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Entrywise moduli `|x_i|`.
    pub fn magnitudes(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm()).collect()
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// `Σ_i conj(x_i) y_i`, conjugate-linear in the first argument.
pub fn inner(x: &ComplexVector, y: &ComplexVector) -> Result<Complex64> {
    check_dim(x.len(), y.len())?;
    Ok(inner_slices(&x.0, &y.0))
}

fn inner_slices(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn from_row_major(n: usize, data: Vec<Complex64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if data.len() != n * n {
            return Err(Error::NotSquare { n, len: data.len() });
        }
        check_finite(&data)?;
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let n = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: bad.len() });
        }
        Self::from_row_major(n, rows.concat())
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![ZERO; n * n] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.n + col]
    }

    pub(crate) fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.n + col] = value;
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        check_dim(self.n, v.len())?;
        Ok(ComplexVector(self.apply_slice(&v.0)))
    }

    fn apply_slice(&self, v: &[Complex64]) -> Vec<Complex64> {
        self.data
            .chunks_exact(self.n)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { n: self.n, data: self.data.iter().map(|z| z * s).collect() }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        check_dim(self.n, other.n)?;
        Ok(Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `|u⟩⟨v|` for vectors of equal length.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        let n = u.len();
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = u[i] * v[j].conj();
            }
        }
        out
    }

    /// `⟨x|M|y⟩`.
    pub fn sandwich(&self, x: &ComplexVector, y: &ComplexVector) -> Result<Complex64> {
        check_dim(self.n, x.len())?;
        check_dim(self.n, y.len())?;
        Ok(inner_slices(&x.0, &self.apply_slice(&y.0)))
    }
}

impl fmt::Display for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks_exact(self.n) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// A Hermitian matrix, validated at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianObservable(CMatrix);

impl HermitianObservable {
    pub fn new(m: CMatrix) -> Result<Self> {
        let deviation = m.max_abs_diff(&m.adjoint());
        if deviation > HERMITIAN_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        Ok(Self(m))
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(CMatrix::from_rows(rows)?)
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows)?)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        let n = entries.len();
        let mut m = CMatrix::zeros(n);
        for (i, &x) in entries.iter().enumerate() {
            m.set(i, i, Complex64::new(x, 0.0));
        }
        check_finite(m.as_slice())?;
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        Ok(Self(m))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }
}

/// A unit-norm state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState(ComplexVector);

impl PureState {
    pub fn new(v: ComplexVector) -> Result<Self> {
        let norm = v.norm_sqr().sqrt();
        if (norm - 1.0).abs() > HERMITIAN_TOL {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(v))
    }

    pub fn from_amplitudes(entries: Vec<Complex64>) -> Result<Self> {
        Self::new(ComplexVector::new(entries)?)
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(v: ComplexVector) -> Result<Self> {
        let norm = v.norm_sqr().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        let scaled = v.0.iter().map(|z| z / norm).collect();
        Self::new(ComplexVector(scaled))
    }

    /// Standard basis vector `e_index` in dimension `n`.
    pub fn basis(n: usize, index: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDimension);
        }
        if index >= n {
            return Err(Error::DimensionMismatch { expected: n, found: index + 1 });
        }
        let mut v = vec![ZERO; n];
        v[index] = ONE;
        Ok(Self(ComplexVector(v)))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn vector(&self) -> &ComplexVector {
        &self.0
    }
}

/// Columns of a unitary matrix, each column one basis vector `|φ_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthonormalBasis(CMatrix);

impl OrthonormalBasis {
    pub fn new(columns: CMatrix) -> Result<Self> {
        let deviation = unitarity_deviation(&columns);
        if deviation > UNITARY_TOL {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(columns))
    }

    /// Skips the O(n³) unitarity check; callers must build `columns` from unitary factors.
    pub(crate) fn from_unitary_unchecked(columns: CMatrix) -> Self {
        debug_assert!(unitarity_deviation(&columns) <= UNITARY_TOL);
        Self(columns)
    }

    pub fn standard(n: usize) -> Self {
        Self(CMatrix::identity(n))
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn column(&self, i: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|r| self.0.get(r, i)).collect()
    }

    /// Coordinates `⟨φ_i|v⟩` of `v` in this basis.
    pub fn coordinates(&self, v: &ComplexVector) -> Result<ComplexVector> {
        let n = self.dim();
        check_dim(n, v.len())?;
        let mut out = vec![ZERO; n];
        for (r, &vr) in v.as_slice().iter().enumerate() {
            let row = &self.0.data[r * n..(r + 1) * n];
            for (o, u) in out.iter_mut().zip(row) {
                *o += u.conj() * vr;
            }
        }
        Ok(ComplexVector(out))
    }

    /// Multiplies column `i` by `phases[i]`; each phase must have unit modulus.
    pub fn with_column_phases(&self, phases: &[Complex64]) -> Result<Self> {
        let n = self.dim();
        check_dim(n, phases.len())?;
        let mut m = self.0.clone();
        for r in 0..n {
            for (c, p) in phases.iter().enumerate() {
                m.set(r, c, m.get(r, c) * p);
            }
        }
        Self::new(m)
    }
}

/// Largest entrywise modulus of `U†U - I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.dim();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            let mut acc = ZERO;
            for k in 0..n {
                acc += u.get(k, i).conj() * u.get(k, j);
            }
            if i == j {
                acc -= ONE;
            }
            worst = worst.max(acc.norm());
        }
    }
    worst
}

fn real_part_checked(z: Complex64) -> Result<f64> {
    if z.im.abs() > REAL_RESIDUE_TOL {
        return Err(Error::ImaginaryResidue { residue: z.im });
    }
    Ok(z.re)
}

/// `⟨Ψ|A|Ψ⟩`.
pub fn expectation(a: &HermitianObservable, psi: &PureState) -> Result<f64> {
    real_part_checked(a.0.sandwich(&psi.0, &psi.0)?)
}

/// `(A - ⟨A⟩I)|Ψ⟩`.
pub fn centered_apply(a: &HermitianObservable, psi: &PureState) -> Result<ComplexVector> {
    let applied = a.0.apply(&psi.0)?;
    let mean = real_part_checked(inner_slices(&psi.0 .0, &applied.0))?;
    let centered = applied
        .0
        .iter()
        .zip(&psi.0 .0)
        .map(|(av, v)| av - v * mean)
        .collect();
    Ok(ComplexVector(centered))
}

/// `(ΔA)² = ‖Ā|Ψ⟩‖²`, clamped at zero.
pub fn variance(a: &HermitianObservable, psi: &PureState) -> Result<f64> {
    Ok(centered_apply(a, psi)?.norm_sqr().max(0.0))
}

/// Centered amplitudes `α_i = ⟨φ_i|Ā|Ψ⟩`.
pub fn amplitudes(
    a: &HermitianObservable,
    psi: &PureState,
    basis: &OrthonormalBasis,
) -> Result<ComplexVector> {
    check_dim(a.dim(), basis.dim())?;
    basis.coordinates(&centered_apply(a, psi)?)
}

fn product_expectations(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
) -> Result<(Complex64, Complex64)> {
    check_dim(a.dim(), b.dim())?;
    let x = a.0.apply(&psi.0)?;
    let y = b.0.apply(&psi.0)?;
    // ⟨Ψ|AB|Ψ⟩ = ⟨AΨ|BΨ⟩ and ⟨Ψ|BA|Ψ⟩ = ⟨BΨ|AΨ⟩ for Hermitian A, B.
    Ok((inner_slices(&x.0, &y.0), inner_slices(&y.0, &x.0)))
}

/// `⟨Ψ|[A, B]|Ψ⟩`, purely imaginary for Hermitian inputs.
pub fn commutator_expectation(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
) -> Result<Complex64> {
    let (ab, ba) = product_expectations(a, b, psi)?;
    Ok(ab - ba)
}

/// `⟨Ψ|{A, B}|Ψ⟩`.
pub fn anticommutator_expectation(
    a: &HermitianObservable,
    b: &HermitianObservable,
    psi: &PureState,
) -> Result<f64> {
    let (ab, ba) = product_expectations(a, b, psi)?;
    real_part_checked(ab + ba)
}
