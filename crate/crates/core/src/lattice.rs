//! Named operators of the clock-and-shift algebra and of the truncated
//! (almost-unitary) shift algebra on a `d`-point lattice.
//!
//! Canonical representation: `a†|n> = |n+1>` for `n < d-1` and
//! `a†|d-1> = 0`, i.e. `a†[m][n] = δ(m, n+1)`. Every other operator is built
//! from `a†` (or from `U`, `V`) with the same formulas used in the algebra,
//! never written down entry by entry.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::matrix::{sum_matrices, MatrixError, OperatorMatrix, Scalar, ScalarField};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("lattice size must satisfy d >= 2 (got d = {0})")]
    InvalidSize(usize),
    #[error("grid spacing beta must be positive (got {0})")]
    NonPositiveBeta(BigRational),
    #[error("tolerance must be a finite non-negative number (got {0})")]
    InvalidTolerance(String),
    #[error("index {name} = {value} is outside 0..={max}")]
    IndexOutOfRange {
        name: &'static str,
        value: usize,
        max: usize,
    },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Arithmetic used to evaluate operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Exact,
    Float,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Float => "float",
        }
    }
}

/// Deliberate corruptions used as negative controls for the verifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mutation {
    /// `make_v` uses `q^(2n)` instead of `q^n` on the diagonal.
    ClockRootSquared,
}

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    d: usize,
    beta: BigRational,
    mode: Mode,
    tolerance: f64,
    seed: u64,
    mutation: Option<Mutation>,
}

impl LatticeConfig {
    pub fn new(d: usize, mode: Mode) -> Result<Self, LatticeError> {
        if d < 2 {
            return Err(LatticeError::InvalidSize(d));
        }
        Ok(LatticeConfig {
            d,
            beta: BigRational::one(),
            mode,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
            mutation: None,
        })
    }

    pub fn with_beta(mut self, beta: BigRational) -> Result<Self, LatticeError> {
        if !beta.is_positive() {
            return Err(LatticeError::NonPositiveBeta(beta));
        }
        self.beta = beta;
        Ok(self)
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self, LatticeError> {
        if !tolerance.is_finite() || tolerance < 0.0 {
            return Err(LatticeError::InvalidTolerance(tolerance.to_string()));
        }
        self.tolerance = tolerance;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mutation(mut self, mutation: Option<Mutation>) -> Self {
        self.mutation = mutation;
        self
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mutation(&self) -> Option<Mutation> {
        self.mutation
    }

    /// Scalars of this lattice: `Q(ζ_d)` or complex doubles.
    pub fn field(&self) -> ScalarField {
        match self.mode {
            Mode::Exact => ScalarField::Exact {
                conductor: self.d as u64,
            },
            Mode::Float => ScalarField::Float,
        }
    }

    /// `q^k` with `q = exp(2πi/d)`.
    pub fn q_pow(&self, k: i64) -> Scalar {
        self.field()
            .root_of_unity(self.d as u64, k)
            .expect("d divides the lattice conductor")
    }

    pub fn identity(&self) -> OperatorMatrix {
        OperatorMatrix::identity(self.d, self.field())
    }

    pub fn zeros(&self) -> OperatorMatrix {
        OperatorMatrix::zeros(self.d, self.field())
    }

    fn exponent(&self, n: usize) -> u32 {
        u32::try_from(n).expect("lattice exponents fit in u32")
    }

    fn check_index(
        &self,
        name: &'static str,
        value: usize,
        max: usize,
    ) -> Result<(), LatticeError> {
        if value > max {
            Err(LatticeError::IndexOutOfRange { name, value, max })
        } else {
            Ok(())
        }
    }
}

/// Canonical operators that are rebuilt often enough to be worth memoizing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Canonical {
    U,
    V,
    P(usize),
    R(usize),
    ScriptP(usize),
}

type MemoKey = (usize, Mode, Option<Mutation>, Canonical);

/// Returns the memoized operator for `key`, building it on first use. The
/// lock is not held while building, so concurrent first uses may both build.
fn memoized(
    cfg: &LatticeConfig,
    key: Canonical,
    build: impl FnOnce() -> OperatorMatrix,
) -> OperatorMatrix {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, OperatorMatrix>>> = OnceLock::new();
    let memo = MEMO.get_or_init(|| Mutex::new(HashMap::new()));
    let full_key = (cfg.d, cfg.mode, cfg.mutation, key);
    if let Some(m) = memo
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&full_key)
    {
        return m.clone();
    }
    let built = build();
    memo.lock()
        .unwrap_or_else(|e| e.into_inner())
        .entry(full_key)
        .or_insert(built)
        .clone()
}

/// The truncated up-shift `a†`.
pub fn make_a_dagger(cfg: &LatticeConfig) -> OperatorMatrix {
    let field = cfg.field();
    let (zero, one) = (field.zero(), field.one());
    OperatorMatrix::from_fn(cfg.d, field, |m, n| {
        if m == n + 1 {
            one.clone()
        } else {
            zero.clone()
        }
    })
    .expect("scalars belong to the lattice field")
}

/// The truncated down-shift `a = (a†)†`.
pub fn make_a(cfg: &LatticeConfig) -> OperatorMatrix {
    make_a_dagger(cfg).adjoint()
}

/// `P_n = a†^n a^n` for `0 <= n <= d`.
pub fn proj_p(cfg: &LatticeConfig, n: usize) -> Result<OperatorMatrix, LatticeError> {
    cfg.check_index("n", n, cfg.d)?;
    let k = cfg.exponent(n);
    Ok(memoized(cfg, Canonical::P(n), || {
        make_a_dagger(cfg)
            .matpow(k)
            .matmul(&make_a(cfg).matpow(k))
            .expect("same shape")
    }))
}

/// `R_n = a^n a†^n` for `0 <= n <= d`.
pub fn proj_r(cfg: &LatticeConfig, n: usize) -> Result<OperatorMatrix, LatticeError> {
    cfg.check_index("n", n, cfg.d)?;
    let k = cfg.exponent(n);
    Ok(memoized(cfg, Canonical::R(n), || {
        make_a(cfg)
            .matpow(k)
            .matmul(&make_a_dagger(cfg).matpow(k))
            .expect("same shape")
    }))
}

/// `X = β Σ_{m=1}^{d-1} P_m`.
pub fn position_x(cfg: &LatticeConfig) -> Result<OperatorMatrix, LatticeError> {
    let projections = (1..cfg.d)
        .map(|m| proj_p(cfg, m))
        .collect::<Result<Vec<_>, _>>()?;
    let sum = sum_matrices(cfg.d, cfg.field(), &projections)?;
    Ok(sum.scale_rational(cfg.beta()))
}

/// `U = a† + a^(d-1)` for a supplied up-shift.
pub fn u_from_shift(
    cfg: &LatticeConfig,
    a_dagger: &OperatorMatrix,
) -> Result<OperatorMatrix, LatticeError> {
    let a = a_dagger.adjoint();
    Ok(a_dagger.add(&a.matpow(cfg.exponent(cfg.d - 1)))?)
}

/// `V = Σ_{n=0}^{d-1} q^n (P_n - P_{n+1})` with `P_n = a†^n a^n` taken from
/// the supplied up-shift. `P_d` is whatever `a†^d a^d` evaluates to.
pub fn v_from_shift(
    cfg: &LatticeConfig,
    a_dagger: &OperatorMatrix,
) -> Result<OperatorMatrix, LatticeError> {
    if a_dagger.dim() != cfg.d {
        return Err(MatrixError::DimensionMismatch {
            left: a_dagger.dim(),
            right: cfg.d,
        }
        .into());
    }
    let a = a_dagger.adjoint();
    let projections: Vec<OperatorMatrix> = (0..=cfg.d)
        .map(|n| {
            let k = cfg.exponent(n);
            a_dagger.matpow(k).matmul(&a.matpow(k))
        })
        .collect::<Result<_, _>>()?;
    let step = match cfg.mutation {
        Some(Mutation::ClockRootSquared) => 2,
        None => 1,
    };
    let mut v = cfg.zeros();
    for n in 0..cfg.d {
        let band = projections[n].sub(&projections[n + 1])?;
        v = v.add(&band.scalar_mul(&cfg.q_pow(step * n as i64))?)?;
    }
    Ok(v)
}

/// The cyclic shift `U|n> = |n+1 mod d>`.
pub fn make_u(cfg: &LatticeConfig) -> OperatorMatrix {
    memoized(cfg, Canonical::U, || {
        u_from_shift(cfg, &make_a_dagger(cfg)).expect("canonical shift has lattice dimension")
    })
}

/// The clock `V = diag(1, q, ..., q^(d-1))`.
pub fn make_v(cfg: &LatticeConfig) -> OperatorMatrix {
    memoized(cfg, Canonical::V, || {
        v_from_shift(cfg, &make_a_dagger(cfg)).expect("canonical shift has lattice dimension")
    })
}

/// `𝒫_n = (1/d) Σ_{j=0}^{d-1} q^(jn) V^j` for a supplied clock `V`; `n` is
/// any integer.
pub fn script_p_from_clock(
    cfg: &LatticeConfig,
    v: &OperatorMatrix,
    n: i64,
) -> Result<OperatorMatrix, LatticeError> {
    let mut sum = cfg.zeros();
    let mut v_power = cfg.identity();
    for j in 0..cfg.d as i64 {
        sum = sum.add(&v_power.scalar_mul(&cfg.q_pow(j * n))?)?;
        v_power = v_power.matmul(v)?;
    }
    Ok(sum.scale_rational(&BigRational::new(BigInt::one(), BigInt::from(cfg.d))))
}

/// `𝒫_n` built from [`make_v`].
pub fn proj_script_p(cfg: &LatticeConfig, n: i64) -> OperatorMatrix {
    let residue = n.rem_euclid(cfg.d as i64);
    memoized(cfg, Canonical::ScriptP(residue as usize), || {
        script_p_from_clock(cfg, &make_v(cfg), residue)
            .expect("canonical clock has lattice dimension")
    })
}

/// `ℛ_n = 1 - 𝒫_n`.
pub fn proj_script_r(cfg: &LatticeConfig, n: i64) -> OperatorMatrix {
    cfg.identity()
        .sub(&proj_script_p(cfg, n))
        .expect("same shape")
}

fn check_generators(
    cfg: &LatticeConfig,
    u: &OperatorMatrix,
    v: &OperatorMatrix,
) -> Result<(), LatticeError> {
    for m in [u, v] {
        if m.dim() != cfg.d {
            return Err(MatrixError::DimensionMismatch {
                left: m.dim(),
                right: cfg.d,
            }
            .into());
        }
    }
    Ok(())
}

/// `a† = U - 𝒫_0 U`, with `𝒫_0` built from the supplied `V`.
pub fn a_dagger_from_uv(
    cfg: &LatticeConfig,
    u: &OperatorMatrix,
    v: &OperatorMatrix,
) -> Result<OperatorMatrix, LatticeError> {
    check_generators(cfg, u, v)?;
    let p0 = script_p_from_clock(cfg, v, 0)?;
    Ok(u.sub(&p0.matmul(u)?)?)
}

/// `(a†^(d-1), a^(d-1)) = (U^(d-1) 𝒫_0, 𝒫_0 U†^(d-1))`.
pub fn edge_powers_from_uv(
    cfg: &LatticeConfig,
    u: &OperatorMatrix,
    v: &OperatorMatrix,
) -> Result<(OperatorMatrix, OperatorMatrix), LatticeError> {
    check_generators(cfg, u, v)?;
    let p0 = script_p_from_clock(cfg, v, 0)?;
    let k = cfg.exponent(cfg.d - 1);
    let up = u.matpow(k).matmul(&p0)?;
    let down = p0.matmul(&u.adjoint().matpow(k))?;
    Ok((up, down))
}

/// `e_mn = a†^m R_{d-1} a^n`.
pub fn matrix_unit_shift(
    cfg: &LatticeConfig,
    m: usize,
    n: usize,
) -> Result<OperatorMatrix, LatticeError> {
    cfg.check_index("m", m, cfg.d - 1)?;
    cfg.check_index("n", n, cfg.d - 1)?;
    let corner = proj_r(cfg, cfg.d - 1)?;
    let up = make_a_dagger(cfg).matpow(cfg.exponent(m));
    let down = make_a(cfg).matpow(cfg.exponent(n));
    Ok(up.matmul(&corner)?.matmul(&down)?)
}

/// `e_mn` from `U` and `𝒫_{d-n}`: `U^(m-n) 𝒫_{d-n}` above the diagonal
/// index, `𝒫_{d-n}` on it, `U†^(n-m) 𝒫_{d-n}` below.
pub fn matrix_unit_schwinger(
    cfg: &LatticeConfig,
    m: usize,
    n: usize,
) -> Result<OperatorMatrix, LatticeError> {
    cfg.check_index("m", m, cfg.d - 1)?;
    cfg.check_index("n", n, cfg.d - 1)?;
    let projector = proj_script_p(cfg, cfg.d as i64 - n as i64);
    let u = make_u(cfg);
    let shift = match m.cmp(&n) {
        std::cmp::Ordering::Greater => u.matpow(cfg.exponent(m - n)),
        std::cmp::Ordering::Equal => return Ok(projector),
        std::cmp::Ordering::Less => u.adjoint().matpow(cfg.exponent(n - m)),
    };
    Ok(shift.matmul(&projector)?)
}
