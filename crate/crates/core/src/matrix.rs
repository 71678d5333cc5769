//! Dense square operator matrices over either scalar mode.
//!
//! Operators act on column vectors; basis ket `|n>` is the `n`-th standard
//! column. Exact matrices carry entries in `Q(ζ_c)` for a single conductor
//! `c`; binary operations on exact matrices with different conductors lift
//! both operands into `Q(ζ_lcm)` first.

use std::borrow::Cow;
use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::cyclo::{CycloError, CycloScalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("cannot combine an exact matrix with a floating-point matrix")]
    ModeMismatch,
    #[error("matrix dimension must be at least 1")]
    EmptyMatrix,
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Which scalars a matrix holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScalarField {
    /// `Q(ζ_c)` with the given conductor `c`.
    Exact { conductor: u64 },
    /// Complex double precision.
    Float,
}

impl ScalarField {
    pub fn zero(self) -> Scalar {
        match self {
            ScalarField::Exact { conductor } => Scalar::Exact(CycloScalar::zero(conductor)),
            ScalarField::Float => Scalar::Float(Complex64::zero()),
        }
    }

    pub fn one(self) -> Scalar {
        match self {
            ScalarField::Exact { conductor } => Scalar::Exact(CycloScalar::one(conductor)),
            ScalarField::Float => Scalar::Float(Complex64::new(1.0, 0.0)),
        }
    }

    pub fn rational(self, value: &BigRational) -> Scalar {
        match self {
            ScalarField::Exact { conductor } => {
                Scalar::Exact(CycloScalar::from_rational(conductor, value.clone()))
            }
            ScalarField::Float => {
                Scalar::Float(Complex64::new(value.to_f64().unwrap_or(f64::NAN), 0.0))
            }
        }
    }

    pub fn integer(self, value: i64) -> Scalar {
        self.rational(&BigRational::from_integer(value.into()))
    }

    /// `exp(2πi k / n)`; in exact mode `n` must divide the conductor.
    pub fn root_of_unity(self, n: u64, k: i64) -> Result<Scalar, MatrixError> {
        match self {
            ScalarField::Exact { conductor } => {
                let s = crate::cyclo::root_power(n, k).lift(conductor)?;
                Ok(Scalar::Exact(s))
            }
            ScalarField::Float => {
                let angle = 2.0 * std::f64::consts::PI * k.rem_euclid(n as i64) as f64 / n as f64;
                Ok(Scalar::Float(Complex64::from_polar(1.0, angle)))
            }
        }
    }
}

/// A single scalar in either mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(CycloScalar),
    Float(Complex64),
}

impl Scalar {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Scalar::Exact(s) => s.to_complex(),
            Scalar::Float(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(s) => s.is_zero(),
            Scalar::Float(z) => z.is_zero(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(s) => write!(f, "{s}"),
            Scalar::Float(z) => write!(f, "{}{:+}i", z.re, z.im),
        }
    }
}

trait Ring: Clone + Send + Sync {
    fn plus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn conj(&self) -> Self;
    fn vanishes(&self) -> bool;
}

// Conductors are aligned before any of these are called.
impl Ring for CycloScalar {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        self.conjugate()
    }
    fn vanishes(&self) -> bool {
        CycloScalar::is_zero(self)
    }
}

impl Ring for Complex64 {
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
}

fn dense_matmul<T: Ring>(dim: usize, a: &[T], b: &[T], zero: &T) -> Vec<T> {
    let mut out = vec![zero.clone(); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let x = &a[i * dim + k];
            if x.vanishes() {
                continue;
            }
            for j in 0..dim {
                let y = &b[k * dim + j];
                if y.vanishes() {
                    continue;
                }
                let cell = &mut out[i * dim + j];
                *cell = cell.plus(&x.times(y));
            }
        }
    }
    out
}

fn dense_adjoint<T: Ring>(dim: usize, a: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            out.push(a[j * dim + i].conj());
        }
    }
    out
}

fn dense_kron<T: Ring>(da: usize, a: &[T], db: usize, b: &[T]) -> Vec<T> {
    let dim = da * db;
    let mut out = Vec::with_capacity(dim * dim);
    for row in 0..dim {
        let (i, k) = (row / db, row % db);
        for col in 0..dim {
            let (j, l) = (col / db, col % db);
            out.push(a[i * da + j].times(&b[k * db + l]));
        }
    }
    out
}

#[derive(Clone, PartialEq)]
enum Entries {
    Exact {
        conductor: u64,
        data: Vec<CycloScalar>,
    },
    Float(Vec<Complex64>),
}

/// A dense `dim × dim` operator, stored row-major.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    entries: Entries,
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "OperatorMatrix({}x{}, {:?}) [",
            self.dim,
            self.dim,
            self.field()
        )?;
        for i in 0..self.dim {
            let row: Vec<String> = (0..self.dim).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl OperatorMatrix {
    pub fn zeros(dim: usize, field: ScalarField) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let entries = match field {
            ScalarField::Exact { conductor } => Entries::Exact {
                conductor,
                data: vec![CycloScalar::zero(conductor); dim * dim],
            },
            ScalarField::Float => Entries::Float(vec![Complex64::zero(); dim * dim]),
        };
        OperatorMatrix { dim, entries }
    }

    pub fn identity(dim: usize, field: ScalarField) -> Self {
        let one = field.one();
        Self::diagonal(dim, field, |_| one.clone()).expect("scalar matches field")
    }

    /// Builds a matrix entry by entry. Every scalar must belong to `field`
    /// (exact scalars of a smaller conductor dividing it are lifted).
    pub fn from_fn(
        dim: usize,
        field: ScalarField,
        mut entry: impl FnMut(usize, usize) -> Scalar,
    ) -> Result<Self, MatrixError> {
        if dim == 0 {
            return Err(MatrixError::EmptyMatrix);
        }
        let entries = match field {
            ScalarField::Exact { conductor } => {
                let mut data = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        match entry(i, j) {
                            Scalar::Exact(s) => data.push(s.lift(conductor)?),
                            Scalar::Float(_) => return Err(MatrixError::ModeMismatch),
                        }
                    }
                }
                Entries::Exact { conductor, data }
            }
            ScalarField::Float => {
                let mut data = Vec::with_capacity(dim * dim);
                for i in 0..dim {
                    for j in 0..dim {
                        match entry(i, j) {
                            Scalar::Float(z) => data.push(z),
                            Scalar::Exact(_) => return Err(MatrixError::ModeMismatch),
                        }
                    }
                }
                Entries::Float(data)
            }
        };
        Ok(OperatorMatrix { dim, entries })
    }

    pub fn diagonal(
        dim: usize,
        field: ScalarField,
        mut diag: impl FnMut(usize) -> Scalar,
    ) -> Result<Self, MatrixError> {
        let zero = field.zero();
        Self::from_fn(
            dim,
            field,
            |i, j| if i == j { diag(i) } else { zero.clone() },
        )
    }

    /// The standard matrix unit `|row><col|`.
    pub fn unit(dim: usize, field: ScalarField, row: usize, col: usize) -> Self {
        let (zero, one) = (field.zero(), field.one());
        Self::from_fn(dim, field, |i, j| {
            if (i, j) == (row, col) {
                one.clone()
            } else {
                zero.clone()
            }
        })
        .expect("scalar matches field")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> ScalarField {
        match &self.entries {
            Entries::Exact { conductor, .. } => ScalarField::Exact {
                conductor: *conductor,
            },
            Entries::Float(_) => ScalarField::Float,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.entries, Entries::Exact { .. })
    }

    /// # Panics
    ///
    /// Panics if the index is out of bounds.
    pub fn get(&self, row: usize, col: usize) -> Scalar {
        assert!(row < self.dim && col < self.dim, "index out of bounds");
        let idx = row * self.dim + col;
        match &self.entries {
            Entries::Exact { data, .. } => Scalar::Exact(data[idx].clone()),
            Entries::Float(data) => Scalar::Float(data[idx]),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Exact { data, .. } => data.iter().all(CycloScalar::is_zero),
            Entries::Float(data) => data.iter().all(|z| z.is_zero()),
        }
    }

    /// Re-expresses an exact matrix over `Q(ζ_target)`. Float matrices are
    /// returned unchanged.
    pub fn lift(&self, target: u64) -> Result<Self, MatrixError> {
        match &self.entries {
            Entries::Exact { conductor, .. } if *conductor == target => Ok(self.clone()),
            Entries::Exact { data, .. } => {
                let data = data
                    .iter()
                    .map(|s| s.lift(target))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(OperatorMatrix {
                    dim: self.dim,
                    entries: Entries::Exact {
                        conductor: target,
                        data,
                    },
                })
            }
            Entries::Float(_) => Ok(self.clone()),
        }
    }

    /// Embeds an exact matrix into complex doubles via `q -> exp(2πi/c)`.
    pub fn to_float(&self) -> Self {
        match &self.entries {
            Entries::Exact { data, .. } => OperatorMatrix {
                dim: self.dim,
                entries: Entries::Float(data.iter().map(CycloScalar::to_complex).collect()),
            },
            Entries::Float(_) => self.clone(),
        }
    }

    fn complex_entries(&self) -> Vec<Complex64> {
        match &self.entries {
            Entries::Exact { data, .. } => data.iter().map(CycloScalar::to_complex).collect(),
            Entries::Float(data) => data.clone(),
        }
    }

    /// Brings two operands to a common dimension and scalar field.
    fn aligned<'a>(
        &'a self,
        other: &'a Self,
    ) -> Result<(Cow<'a, Self>, Cow<'a, Self>), MatrixError> {
        if self.dim != other.dim {
            return Err(MatrixError::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        self.aligned_fields(other)
    }

    fn aligned_fields<'a>(
        &'a self,
        other: &'a Self,
    ) -> Result<(Cow<'a, Self>, Cow<'a, Self>), MatrixError> {
        match (&self.entries, &other.entries) {
            (Entries::Exact { conductor: a, .. }, Entries::Exact { conductor: b, .. }) => {
                if a == b {
                    Ok((Cow::Borrowed(self), Cow::Borrowed(other)))
                } else {
                    let l = a.lcm(b);
                    Ok((Cow::Owned(self.lift(l)?), Cow::Owned(other.lift(l)?)))
                }
            }
            (Entries::Float(_), Entries::Float(_)) => {
                Ok((Cow::Borrowed(self), Cow::Borrowed(other)))
            }
            _ => Err(MatrixError::ModeMismatch),
        }
    }

    fn zip_with(
        &self,
        other: &Self,
        exact: impl Fn(&CycloScalar, &CycloScalar) -> CycloScalar,
        float: impl Fn(&Complex64, &Complex64) -> Complex64,
    ) -> Result<Self, MatrixError> {
        let (a, b) = self.aligned(other)?;
        let entries = match (&a.entries, &b.entries) {
            (Entries::Exact { conductor, data: x }, Entries::Exact { data: y, .. }) => {
                Entries::Exact {
                    conductor: *conductor,
                    data: x.iter().zip(y).map(|(p, q)| exact(p, q)).collect(),
                }
            }
            (Entries::Float(x), Entries::Float(y)) => {
                Entries::Float(x.iter().zip(y).map(|(p, q)| float(p, q)).collect())
            }
            _ => unreachable!("aligned operands share a mode"),
        };
        Ok(OperatorMatrix {
            dim: self.dim,
            entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_with(other, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, MatrixError> {
        self.zip_with(other, |a, b| a - b, |a, b| a - b)
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, MatrixError> {
        let (a, b) = self.aligned(other)?;
        let dim = self.dim;
        let entries = match (&a.entries, &b.entries) {
            (Entries::Exact { conductor, data: x }, Entries::Exact { data: y, .. }) => {
                Entries::Exact {
                    conductor: *conductor,
                    data: dense_matmul(dim, x, y, &CycloScalar::zero(*conductor)),
                }
            }
            (Entries::Float(x), Entries::Float(y)) => {
                Entries::Float(dense_matmul(dim, x, y, &Complex64::zero()))
            }
            _ => unreachable!("aligned operands share a mode"),
        };
        Ok(OperatorMatrix { dim, entries })
    }

    /// Multiplies every entry by `s`. An exact scalar of a different
    /// conductor is lifted together with the matrix.
    pub fn scalar_mul(&self, s: &Scalar) -> Result<Self, MatrixError> {
        match (&self.entries, s) {
            (Entries::Exact { conductor, .. }, Scalar::Exact(x)) => {
                let l = conductor.lcm(&x.conductor());
                let x = x.lift(l)?;
                let lifted = if l == *conductor {
                    Cow::Borrowed(self)
                } else {
                    Cow::Owned(self.lift(l)?)
                };
                let Entries::Exact { data, .. } = &lifted.entries else {
                    unreachable!("lifting keeps exact mode")
                };
                Ok(OperatorMatrix {
                    dim: self.dim,
                    entries: Entries::Exact {
                        conductor: l,
                        data: data
                            .iter()
                            .map(|e| if e.is_zero() { e.clone() } else { e * &x })
                            .collect(),
                    },
                })
            }
            (Entries::Float(data), Scalar::Float(z)) => Ok(OperatorMatrix {
                dim: self.dim,
                entries: Entries::Float(data.iter().map(|e| e * z).collect()),
            }),
            _ => Err(MatrixError::ModeMismatch),
        }
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        self.scalar_mul(&self.field().rational(r))
            .expect("rational lies in every field")
    }

    pub fn neg(&self) -> Self {
        self.scale_rational(&BigRational::from_integer((-1).into()))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let entries = match &self.entries {
            Entries::Exact { conductor, data } => Entries::Exact {
                conductor: *conductor,
                data: dense_adjoint(self.dim, data),
            },
            Entries::Float(data) => Entries::Float(dense_adjoint(self.dim, data)),
        };
        OperatorMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// `self^k` by repeated squaring; `self^0` is the identity.
    pub fn matpow(&self, k: u32) -> Self {
        let mut result = Self::identity(self.dim, self.field());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.matmul(&base).expect("same shape");
            }
            k >>= 1;
            if k > 0 {
                base = base.matmul(&base).expect("same shape");
            }
        }
        result
    }

    /// Kronecker product with layout
    /// `(A⊗B)[i*dim_B + k, j*dim_B + l] = A[i,j] * B[k,l]`.
    pub fn kron(&self, other: &Self) -> Result<Self, MatrixError> {
        let (a, b) = self.aligned_fields(other)?;
        let dim = self.dim * other.dim;
        let entries = match (&a.entries, &b.entries) {
            (Entries::Exact { conductor, data: x }, Entries::Exact { data: y, .. }) => {
                Entries::Exact {
                    conductor: *conductor,
                    data: dense_kron(self.dim, x, other.dim, y),
                }
            }
            (Entries::Float(x), Entries::Float(y)) => {
                Entries::Float(dense_kron(self.dim, x, other.dim, y))
            }
            _ => unreachable!("aligned operands share a mode"),
        };
        Ok(OperatorMatrix { dim, entries })
    }

    /// Largest entry-wise modulus of `self - other`, exact entries embedded
    /// through `q -> exp(2πi/c)`.
    pub fn max_residual(&self, other: &Self) -> Result<f64, MatrixError> {
        let (a, b) = self.aligned(other)?;
        if a.is_exact() && a == b {
            return Ok(0.0);
        }
        let diff = a.sub(&b)?;
        Ok(diff
            .complex_entries()
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max))
    }

    /// Exact matrices compare structurally; float matrices compare with the
    /// given absolute entry-wise tolerance.
    pub fn equals(&self, other: &Self, tolerance: f64) -> Result<bool, MatrixError> {
        let (a, b) = self.aligned(other)?;
        if a.is_exact() {
            Ok(a == b)
        } else {
            Ok(a.max_residual(&b)? <= tolerance)
        }
    }

    /// Entries as complex numbers, row-major rows.
    pub fn complex_rows(&self) -> Vec<Vec<Complex64>> {
        let flat = self.complex_entries();
        flat.chunks(self.dim).map(<[Complex64]>::to_vec).collect()
    }

    /// Exact entries as rows of cyclotomic scalars; `None` in float mode.
    pub fn exact_rows(&self) -> Option<Vec<Vec<CycloScalar>>> {
        match &self.entries {
            Entries::Exact { data, .. } => {
                Some(data.chunks(self.dim).map(<[CycloScalar]>::to_vec).collect())
            }
            Entries::Float(_) => None,
        }
    }
}

/// Sums an iterator of same-shaped matrices, starting from `zeros(dim, field)`.
pub fn sum_matrices<'a>(
    dim: usize,
    field: ScalarField,
    terms: impl IntoIterator<Item = &'a OperatorMatrix>,
) -> Result<OperatorMatrix, MatrixError> {
    terms
        .into_iter()
        .try_fold(OperatorMatrix::zeros(dim, field), |acc, t| acc.add(t))
}
