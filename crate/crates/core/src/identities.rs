//! Catalogue of algebraic relations as named, evaluable checks.
//!
//! Each check pairs a left-hand and a right-hand operator builder and an
//! index quantifier. Running a check evaluates both sides for every index
//! assignment and keeps the worst residual. A relation that does not hold is
//! a failed [`CheckResult`], never an error.

use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::lattice::{
    a_dagger_from_uv, edge_powers_from_uv, make_a, make_a_dagger, make_u, make_v,
    matrix_unit_schwinger, matrix_unit_shift, position_x, proj_p, proj_r, proj_script_p,
    proj_script_r, script_p_from_clock, u_from_shift, v_from_shift, LatticeConfig, LatticeError,
    Mode,
};
use crate::matrix::{sum_matrices, MatrixError, OperatorMatrix};
use crate::tensor::{
    arrow_matrix, conjugate_by_flatten, coproduct_a_dagger, coproduct_u, flat_generators,
    flatten_permutation, wrap_term, ProductLatticeConfig,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IdentityError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("check `{check}` needs a {expected} configuration")]
    TargetMismatch {
        check: &'static str,
        expected: &'static str,
    },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

impl From<MatrixError> for IdentityError {
    fn from(e: MatrixError) -> Self {
        IdentityError::Lattice(e.into())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Schwinger,
    AlmostUnitary,
    ProjPR,
    ProjScript,
    Conversions,
    MatrixUnits,
    Commutator,
    Tensor,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::Schwinger,
        Suite::AlmostUnitary,
        Suite::ProjPR,
        Suite::ProjScript,
        Suite::Conversions,
        Suite::MatrixUnits,
        Suite::Commutator,
        Suite::Tensor,
    ];

    /// Suites evaluated on a single `d`-point lattice.
    pub const LATTICE: [Suite; 7] = [
        Suite::Schwinger,
        Suite::AlmostUnitary,
        Suite::ProjPR,
        Suite::ProjScript,
        Suite::Conversions,
        Suite::MatrixUnits,
        Suite::Commutator,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Schwinger => "schwinger",
            Suite::AlmostUnitary => "almost_unitary",
            Suite::ProjPR => "proj_PR",
            Suite::ProjScript => "proj_script",
            Suite::Conversions => "conversions",
            Suite::MatrixUnits => "matrix_units",
            Suite::Commutator => "commutator",
            Suite::Tensor => "tensor",
        }
    }

    pub fn from_name(name: &str) -> Result<Suite, IdentityError> {
        Suite::ALL
            .into_iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| IdentityError::UnknownSuite(name.to_string()))
    }

    pub fn is_product(self) -> bool {
        self == Suite::Tensor
    }
}

/// Named index assignment, e.g. `[("n", 2), ("m", 0)]`.
pub type Indices = Vec<(&'static str, i64)>;

type LatticeSide = fn(&LatticeConfig, &Indices) -> Result<OperatorMatrix, LatticeError>;
type ProductSide = fn(&ProductLatticeConfig, &Indices) -> Result<OperatorMatrix, MatrixError>;

#[derive(Clone, Copy)]
pub enum Builders {
    Lattice {
        indices: fn(&LatticeConfig) -> Vec<Indices>,
        lhs: LatticeSide,
        rhs: LatticeSide,
    },
    Product {
        lhs: ProductSide,
        rhs: ProductSide,
    },
}

/// A named relation `lhs == rhs`.
#[derive(Clone, Copy)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub suite: Suite,
    /// The relation being checked, written out.
    pub reference: &'static str,
    pub builders: Builders,
}

impl std::fmt::Debug for IdentityCheck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityCheck")
            .field("name", &self.name)
            .field("suite", &self.suite)
            .field("reference", &self.reference)
            .finish()
    }
}

/// Configuration a check or suite is evaluated against.
#[derive(Debug, Clone, PartialEq)]
pub enum Target {
    Lattice(LatticeConfig),
    Product(ProductLatticeConfig),
}

impl Target {
    pub fn mode(&self) -> Mode {
        match self {
            Target::Lattice(c) => c.mode(),
            Target::Product(p) => p.mode(),
        }
    }

    pub fn tolerance(&self) -> f64 {
        match self {
            Target::Lattice(c) => c.tolerance(),
            Target::Product(p) => p.tolerance(),
        }
    }

    /// Number of lattice points (`d1 * d2` for a product lattice).
    pub fn d(&self) -> usize {
        match self {
            Target::Lattice(c) => c.d(),
            Target::Product(p) => p.dim(),
        }
    }

    pub fn factors(&self) -> Option<(usize, usize)> {
        match self {
            Target::Lattice(_) => None,
            Target::Product(p) => Some((p.d1(), p.d2())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub reference: &'static str,
    pub d: usize,
    pub factors: Option<(usize, usize)>,
    pub mode: Mode,
    /// Index assignment with the worst residual, reported for failures only.
    pub indices: Option<Indices>,
    /// Number of index assignments evaluated.
    pub instances: usize,
    pub pass: bool,
    pub max_residual: f64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub d: usize,
    pub factors: Option<(usize, usize)>,
    pub mode: Mode,
    pub tolerance: f64,
    pub results: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

impl SuiteReport {
    pub fn total(&self) -> usize {
        self.results.len()
    }

    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

// ---------------------------------------------------------------------------
// index quantifiers

fn ix(indices: &Indices, name: &str) -> i64 {
    indices
        .iter()
        .find(|(k, _)| *k == name)
        .map(|(_, v)| *v)
        .unwrap_or_else(|| panic!("index `{name}` not bound"))
}

fn ux(indices: &Indices, name: &str) -> usize {
    usize::try_from(ix(indices, name)).expect("non-negative index")
}

fn none(_: &LatticeConfig) -> Vec<Indices> {
    vec![Vec::new()]
}

fn one_index(name: &'static str, range: impl Iterator<Item = usize>) -> Vec<Indices> {
    range.map(|v| vec![(name, v as i64)]).collect()
}

fn n_upto_d(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("n", 0..=cfg.d())
}

fn n_below_d(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("n", 0..cfg.d())
}

fn k_below_d(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("k", 0..cfg.d())
}

fn k_nonzero(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("k", 1..cfg.d())
}

fn m_from_one(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("m", 1..=cfg.d())
}

fn m_below_d(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("m", 0..cfg.d())
}

fn n_symmetric(cfg: &LatticeConfig) -> Vec<Indices> {
    let d = cfg.d() as i64;
    (-d..=d).map(|n| vec![("n", n)]).collect()
}

fn pairs(lo: usize, hi: usize) -> Vec<Indices> {
    let mut out = Vec::new();
    for n in lo..=hi {
        for m in lo..=hi {
            out.push(vec![("n", n as i64), ("m", m as i64)]);
        }
    }
    out
}

fn nm_upto_d(cfg: &LatticeConfig) -> Vec<Indices> {
    pairs(0, cfg.d())
}

fn nm_below_d(cfg: &LatticeConfig) -> Vec<Indices> {
    pairs(0, cfg.d() - 1)
}

fn nm_saturated(cfg: &LatticeConfig) -> Vec<Indices> {
    let d = cfg.d();
    pairs(0, d)
        .into_iter()
        .filter(|p| ux(p, "n") + ux(p, "m") >= d)
        .collect()
}

fn unit_pairs(cfg: &LatticeConfig) -> Vec<Indices> {
    let d = cfg.d();
    let mut out = Vec::new();
    for m in 0..d {
        for n in 0..d {
            out.push(vec![("m", m as i64), ("n", n as i64)]);
        }
    }
    out
}

/// Quadruple products are enumerated exhaustively up to this lattice size.
pub const EXHAUSTIVE_QUADRUPLE_LIMIT: usize = 4;
/// Number of sampled quadruples above [`EXHAUSTIVE_QUADRUPLE_LIMIT`].
pub const SAMPLED_QUADRUPLES: usize = 64;

fn quadruples(cfg: &LatticeConfig) -> Vec<Indices> {
    let d = cfg.d();
    let quad = |i: usize, j: usize, k: usize, l: usize| {
        vec![
            ("i", i as i64),
            ("j", j as i64),
            ("k", k as i64),
            ("l", l as i64),
        ]
    };
    if d <= EXHAUSTIVE_QUADRUPLE_LIMIT {
        let mut out = Vec::with_capacity(d.pow(4));
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out.push(quad(i, j, k, l));
                    }
                }
            }
        }
        return out;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed() ^ (d as u64).rotate_left(32));
    (0..SAMPLED_QUADRUPLES)
        .map(|s| {
            let (i, j, l) = (
                rng.gen_range(0..d),
                rng.gen_range(0..d),
                rng.gen_range(0..d),
            );
            // half the samples hit the nonvanishing j == k branch
            let k = if s % 2 == 0 { j } else { rng.gen_range(0..d) };
            quad(i, j, k, l)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// shared building blocks

fn pow(m: &OperatorMatrix, k: usize) -> OperatorMatrix {
    m.matpow(u32::try_from(k).expect("exponent fits in u32"))
}

fn mul(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, LatticeError> {
    Ok(a.matmul(b)?)
}

fn one_minus(cfg: &LatticeConfig, m: &OperatorMatrix) -> Result<OperatorMatrix, LatticeError> {
    Ok(cfg.identity().sub(m)?)
}

fn rational(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix, LatticeError> {
    Ok(a.matmul(b)?.sub(&b.matmul(a)?)?)
}

/// `a†` recovered from the canonical `U` and `V`.
fn recovered_a_dagger(cfg: &LatticeConfig) -> Result<OperatorMatrix, LatticeError> {
    a_dagger_from_uv(cfg, &make_u(cfg), &make_v(cfg))
}

fn standard_unit(cfg: &LatticeConfig, m: usize, n: usize) -> OperatorMatrix {
    OperatorMatrix::unit(cfg.d(), cfg.field(), m, n)
}

fn unit_product_rhs(
    cfg: &LatticeConfig,
    ixs: &Indices,
    unit: fn(&LatticeConfig, usize, usize) -> Result<OperatorMatrix, LatticeError>,
) -> Result<OperatorMatrix, LatticeError> {
    if ux(ixs, "j") == ux(ixs, "k") {
        unit(cfg, ux(ixs, "i"), ux(ixs, "l"))
    } else {
        Ok(cfg.zeros())
    }
}

fn unit_product_lhs(
    cfg: &LatticeConfig,
    ixs: &Indices,
    unit: fn(&LatticeConfig, usize, usize) -> Result<OperatorMatrix, LatticeError>,
) -> Result<OperatorMatrix, LatticeError> {
    let left = unit(cfg, ux(ixs, "i"), ux(ixs, "j"))?;
    let right = unit(cfg, ux(ixs, "k"), ux(ixs, "l"))?;
    mul(&left, &right)
}

fn flat_dim_identity(p: &ProductLatticeConfig) -> OperatorMatrix {
    OperatorMatrix::identity(p.dim(), p.field())
}

fn lattice(
    name: &'static str,
    suite: Suite,
    reference: &'static str,
    indices: fn(&LatticeConfig) -> Vec<Indices>,
    lhs: LatticeSide,
    rhs: LatticeSide,
) -> IdentityCheck {
    IdentityCheck {
        name,
        suite,
        reference,
        builders: Builders::Lattice { indices, lhs, rhs },
    }
}

fn product(
    name: &'static str,
    reference: &'static str,
    lhs: ProductSide,
    rhs: ProductSide,
) -> IdentityCheck {
    IdentityCheck {
        name,
        suite: Suite::Tensor,
        reference,
        builders: Builders::Product { lhs, rhs },
    }
}

// ---------------------------------------------------------------------------
// the catalogue

fn schwinger_checks() -> Vec<IdentityCheck> {
    use Suite::Schwinger as S;
    vec![
        lattice(
            "schwinger.VU_eq_qUV",
            S,
            "VU = qUV with q = exp(2 pi i / d)",
            none,
            |c, _| mul(&make_v(c), &make_u(c)),
            |c, _| Ok(mul(&make_u(c), &make_v(c))?.scalar_mul(&c.q_pow(1))?),
        ),
        lattice(
            "schwinger.U_order_d",
            S,
            "U^d = U U^(d-1) = 1",
            none,
            |c, _| Ok(pow(&make_u(c), c.d())),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.V_order_d",
            S,
            "V^d = V V^(d-1) = sum_n q^(dn) (P_n - P_(n+1)) = 1",
            none,
            |c, _| Ok(pow(&make_v(c), c.d())),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.U_unitary",
            S,
            "U U† = 1",
            none,
            |c, _| mul(&make_u(c), &make_u(c).adjoint()),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.U_unitary_left",
            S,
            "U† U = 1",
            none,
            |c, _| mul(&make_u(c).adjoint(), &make_u(c)),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.V_unitary",
            S,
            "V V† = 1 using P_n† = P_n and conj(q)^n = q^(d-n)",
            none,
            |c, _| mul(&make_v(c), &make_v(c).adjoint()),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.V_unitary_left",
            S,
            "V† V = 1",
            none,
            |c, _| mul(&make_v(c).adjoint(), &make_v(c)),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "schwinger.U_U_dag_projections",
            S,
            "U U† = a† a + a^(d-1) a†^(d-1) = P_1 + R_(d-1)",
            none,
            |c, _| mul(&make_u(c), &make_u(c).adjoint()),
            |c, _| Ok(proj_p(c, 1)?.add(&proj_r(c, c.d() - 1)?)?),
        ),
        lattice(
            "schwinger.V_power_sum",
            S,
            "V V^k = sum_(n=0)^(d-1) q^((k+1)n) (P_n - P_(n+1)), k = 0..d-1",
            k_below_d,
            |c, i| mul(&make_v(c), &pow(&make_v(c), ux(i, "k"))),
            |c, i| {
                let k = ix(i, "k");
                let mut sum = c.zeros();
                for n in 0..c.d() {
                    let band = proj_p(c, n)?.sub(&proj_p(c, n + 1)?)?;
                    sum = sum.add(&band.scalar_mul(&c.q_pow((k + 1) * n as i64))?)?;
                }
                Ok(sum)
            },
        ),
        lattice(
            "schwinger.U_power_shift",
            S,
            "U U^n = a†^(n+1) + a^(d-(n+1)), n = 0..d-1",
            n_below_d,
            |c, i| mul(&make_u(c), &pow(&make_u(c), ux(i, "n"))),
            |c, i| {
                let n = ux(i, "n");
                Ok(pow(&make_a_dagger(c), n + 1).add(&pow(&make_a(c), c.d() - (n + 1)))?)
            },
        ),
    ]
}

fn almost_unitary_checks() -> Vec<IdentityCheck> {
    use Suite::AlmostUnitary as S;
    vec![
        lattice(
            "almost_unitary.a_a_dag",
            S,
            "a a† = 1 - a†^(d-1) a^(d-1)",
            none,
            |c, _| mul(&make_a(c), &make_a_dagger(c)),
            |c, _| {
                let k = c.d() - 1;
                one_minus(c, &mul(&pow(&make_a_dagger(c), k), &pow(&make_a(c), k))?)
            },
        ),
        lattice(
            "almost_unitary.a_dag_a",
            S,
            "a† a = 1 - a^(d-1) a†^(d-1)",
            none,
            |c, _| mul(&make_a_dagger(c), &make_a(c)),
            |c, _| {
                let k = c.d() - 1;
                one_minus(c, &mul(&pow(&make_a(c), k), &pow(&make_a_dagger(c), k))?)
            },
        ),
        lattice(
            "almost_unitary.a_dag_nilpotent",
            S,
            "a†^d = 0",
            none,
            |c, _| Ok(pow(&make_a_dagger(c), c.d())),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "almost_unitary.a_nilpotent",
            S,
            "a^d = 0",
            none,
            |c, _| Ok(pow(&make_a(c), c.d())),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "almost_unitary.a_pow_a_dag_pow",
            S,
            "a^n a†^n = 1 - P_(d-n), n = 0..d",
            n_upto_d,
            |c, i| {
                let n = ux(i, "n");
                mul(&pow(&make_a(c), n), &pow(&make_a_dagger(c), n))
            },
            |c, i| one_minus(c, &proj_p(c, c.d() - ux(i, "n"))?),
        ),
    ]
}

fn proj_pr_checks() -> Vec<IdentityCheck> {
    use Suite::ProjPR as S;
    vec![
        lattice(
            "proj_PR.P0_identity",
            S,
            "P_0 = 1",
            none,
            |c, _| proj_p(c, 0),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "proj_PR.R0_identity",
            S,
            "R_0 = 1",
            none,
            |c, _| proj_r(c, 0),
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "proj_PR.Pd_zero",
            S,
            "P_d = a†^d a^d = 0",
            none,
            |c, _| proj_p(c, c.d()),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.Rd_zero",
            S,
            "R_d = a^d a†^d = 0",
            none,
            |c, _| proj_r(c, c.d()),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.P_complement",
            S,
            "P_n = 1 - R_(d-n)",
            n_upto_d,
            |c, i| proj_p(c, ux(i, "n")),
            |c, i| one_minus(c, &proj_r(c, c.d() - ux(i, "n"))?),
        ),
        lattice(
            "proj_PR.R_complement",
            S,
            "R_n = 1 - P_(d-n)",
            n_upto_d,
            |c, i| proj_r(c, ux(i, "n")),
            |c, i| one_minus(c, &proj_p(c, c.d() - ux(i, "n"))?),
        ),
        lattice(
            "proj_PR.P_hermitian",
            S,
            "P_n† = P_n",
            n_upto_d,
            |c, i| Ok(proj_p(c, ux(i, "n"))?.adjoint()),
            |c, i| proj_p(c, ux(i, "n")),
        ),
        lattice(
            "proj_PR.R_hermitian",
            S,
            "R_n† = R_n",
            n_upto_d,
            |c, i| Ok(proj_r(c, ux(i, "n"))?.adjoint()),
            |c, i| proj_r(c, ux(i, "n")),
        ),
        lattice(
            "proj_PR.P_a_dag_intertwine",
            S,
            "P_m a† = a† P_(m-1)",
            m_from_one,
            |c, i| mul(&proj_p(c, ux(i, "m"))?, &make_a_dagger(c)),
            |c, i| mul(&make_a_dagger(c), &proj_p(c, ux(i, "m") - 1)?),
        ),
        lattice(
            "proj_PR.a_P_intertwine",
            S,
            "a P_m = P_(m-1) a",
            m_from_one,
            |c, i| mul(&make_a(c), &proj_p(c, ux(i, "m"))?),
            |c, i| mul(&proj_p(c, ux(i, "m") - 1)?, &make_a(c)),
        ),
        lattice(
            "proj_PR.P_a_intertwine",
            S,
            "P_m a = a P_(m+1)",
            m_below_d,
            |c, i| mul(&proj_p(c, ux(i, "m"))?, &make_a(c)),
            |c, i| mul(&make_a(c), &proj_p(c, ux(i, "m") + 1)?),
        ),
        lattice(
            "proj_PR.P_product_max",
            S,
            "P_n P_m = P_max(n,m)",
            nm_upto_d,
            |c, i| mul(&proj_p(c, ux(i, "n"))?, &proj_p(c, ux(i, "m"))?),
            |c, i| proj_p(c, ux(i, "n").max(ux(i, "m"))),
        ),
        lattice(
            "proj_PR.P_a_pow_vanishes",
            S,
            "P_m a^n = 0 for n + m >= d",
            nm_saturated,
            |c, i| mul(&proj_p(c, ux(i, "m"))?, &pow(&make_a(c), ux(i, "n"))),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.a_dag_pow_P_vanishes",
            S,
            "a†^n P_m = 0 for n + m >= d",
            nm_saturated,
            |c, i| mul(&pow(&make_a_dagger(c), ux(i, "n")), &proj_p(c, ux(i, "m"))?),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.R_a_dag_intertwine",
            S,
            "R_m a† = a† R_(m+1)",
            m_below_d,
            |c, i| mul(&proj_r(c, ux(i, "m"))?, &make_a_dagger(c)),
            |c, i| mul(&make_a_dagger(c), &proj_r(c, ux(i, "m") + 1)?),
        ),
        lattice(
            "proj_PR.a_R_intertwine",
            S,
            "a R_m = R_(m+1) a",
            m_below_d,
            |c, i| mul(&make_a(c), &proj_r(c, ux(i, "m"))?),
            |c, i| mul(&proj_r(c, ux(i, "m") + 1)?, &make_a(c)),
        ),
        lattice(
            "proj_PR.R_a_intertwine",
            S,
            "R_m a = a R_(m-1)",
            m_from_one,
            |c, i| mul(&proj_r(c, ux(i, "m"))?, &make_a(c)),
            |c, i| mul(&make_a(c), &proj_r(c, ux(i, "m") - 1)?),
        ),
        lattice(
            "proj_PR.a_dag_R_intertwine",
            S,
            "a† R_m = R_(m-1) a†",
            m_from_one,
            |c, i| mul(&make_a_dagger(c), &proj_r(c, ux(i, "m"))?),
            |c, i| mul(&proj_r(c, ux(i, "m") - 1)?, &make_a_dagger(c)),
        ),
        lattice(
            "proj_PR.R_product_max",
            S,
            "R_n R_m = R_max(n,m)",
            nm_upto_d,
            |c, i| mul(&proj_r(c, ux(i, "n"))?, &proj_r(c, ux(i, "m"))?),
            |c, i| proj_r(c, ux(i, "n").max(ux(i, "m"))),
        ),
        lattice(
            "proj_PR.a_pow_R_vanishes",
            S,
            "a^n R_m = 0 for n + m >= d",
            nm_saturated,
            |c, i| mul(&pow(&make_a(c), ux(i, "n")), &proj_r(c, ux(i, "m"))?),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.R_a_dag_pow_vanishes",
            S,
            "R_m a†^n = 0 for n + m >= d",
            nm_saturated,
            |c, i| mul(&proj_r(c, ux(i, "m"))?, &pow(&make_a_dagger(c), ux(i, "n"))),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "proj_PR.position_spectrum",
            S,
            "X = beta sum_(m=1)^(d-1) P_m satisfies X|n> = beta n |n>",
            n_below_d,
            |c, i| {
                let n = ux(i, "n");
                mul(&position_x(c)?, &standard_unit(c, n, n))
            },
            |c, i| {
                let n = ux(i, "n");
                let eigenvalue = c.beta() * rational(n as i64);
                Ok(standard_unit(c, n, n).scale_rational(&eigenvalue))
            },
        ),
    ]
}

fn commutator_checks() -> Vec<IdentityCheck> {
    use Suite::Commutator as S;
    vec![
        lattice(
            "commutator.X_a_dag",
            S,
            "[X, a†] = beta a†",
            none,
            |c, _| commutator(&position_x(c)?, &make_a_dagger(c)),
            |c, _| Ok(make_a_dagger(c).scale_rational(c.beta())),
        ),
        lattice(
            "commutator.X_a",
            S,
            "[X, a] = -beta a",
            none,
            |c, _| commutator(&position_x(c)?, &make_a(c)),
            |c, _| Ok(make_a(c).scale_rational(&-c.beta())),
        ),
    ]
}

fn proj_script_checks() -> Vec<IdentityCheck> {
    use Suite::ProjScript as S;
    vec![
        lattice(
            "proj_script.idempotent",
            S,
            "(script P_n)^2 = script P_n using V^d = 1 and q^d = 1",
            n_below_d,
            |c, i| {
                let p = proj_script_p(c, ix(i, "n"));
                mul(&p, &p)
            },
            |c, i| Ok(proj_script_p(c, ix(i, "n"))),
        ),
        lattice(
            "proj_script.orthogonal",
            S,
            "script P_n script P_m = delta_nm script P_n",
            nm_below_d,
            |c, i| mul(&proj_script_p(c, ix(i, "n")), &proj_script_p(c, ix(i, "m"))),
            |c, i| {
                if ix(i, "n") == ix(i, "m") {
                    Ok(proj_script_p(c, ix(i, "n")))
                } else {
                    Ok(c.zeros())
                }
            },
        ),
        lattice(
            "proj_script.hermitian",
            S,
            "(script P_n)† = script P_n",
            n_below_d,
            |c, i| Ok(proj_script_p(c, ix(i, "n")).adjoint()),
            |c, i| Ok(proj_script_p(c, ix(i, "n"))),
        ),
        lattice(
            "proj_script.U_intertwine",
            S,
            "script P_n U^m = U^m script P_(n+m)",
            nm_below_d,
            |c, i| mul(&proj_script_p(c, ix(i, "n")), &pow(&make_u(c), ux(i, "m"))),
            |c, i| {
                let (n, m) = (ix(i, "n"), ix(i, "m"));
                mul(&pow(&make_u(c), m as usize), &proj_script_p(c, n + m))
            },
        ),
        lattice(
            "proj_script.U_dag_intertwine",
            S,
            "U†^m script P_n = script P_(n+m) U†^m",
            nm_below_d,
            |c, i| {
                mul(
                    &pow(&make_u(c).adjoint(), ux(i, "m")),
                    &proj_script_p(c, ix(i, "n")),
                )
            },
            |c, i| {
                let (n, m) = (ix(i, "n"), ix(i, "m"));
                mul(
                    &proj_script_p(c, n + m),
                    &pow(&make_u(c).adjoint(), m as usize),
                )
            },
        ),
        lattice(
            "proj_script.partition_of_unity",
            S,
            "script P_0 + script P_1 + ... + script P_(d-1) = 1",
            none,
            |c, _| {
                let parts: Vec<_> = (0..c.d() as i64).map(|n| proj_script_p(c, n)).collect();
                Ok(sum_matrices(c.d(), c.field(), &parts)?)
            },
            |c, _| Ok(c.identity()),
        ),
        lattice(
            "proj_script.R_sum",
            S,
            "script R_n = 1 - script P_n and script R_0 + ... + script R_(d-1) = d - 1",
            none,
            |c, _| {
                let parts: Vec<_> = (0..c.d() as i64).map(|n| proj_script_r(c, n)).collect();
                Ok(sum_matrices(c.d(), c.field(), &parts)?)
            },
            |c, _| Ok(c.identity().scale_rational(&rational(c.d() as i64 - 1))),
        ),
        lattice(
            "proj_script.periodic",
            S,
            "script P_(d+l) = script P_l and script P_(d-l) = script P_(-l)",
            n_symmetric,
            // built from the unreduced index, so the periodicity of q^(jn) is exercised
            |c, i| script_p_from_clock(c, &make_v(c), ix(i, "n") + c.d() as i64),
            |c, i| script_p_from_clock(c, &make_v(c), ix(i, "n")),
        ),
        lattice(
            "proj_script.root_of_unity_sum",
            S,
            "1 + q^k + q^(2k) + ... + q^((d-1)k) = 0 for k not divisible by d",
            k_nonzero,
            |c, i| {
                let k = ix(i, "k");
                let terms: Vec<_> = (0..c.d() as i64)
                    .map(|j| c.identity().scalar_mul(&c.q_pow(j * k)))
                    .collect::<Result<_, _>>()?;
                Ok(sum_matrices(c.d(), c.field(), &terms)?)
            },
            |c, _| Ok(c.zeros()),
        ),
    ]
}

fn conversion_checks() -> Vec<IdentityCheck> {
    use Suite::Conversions as S;
    vec![
        lattice(
            "conversions.a_dag_from_UV",
            S,
            "a† = U - script P_0 U with script P_0 = (1 + V + ... + V^(d-1)) / d",
            none,
            |c, _| recovered_a_dagger(c),
            |c, _| Ok(make_a_dagger(c)),
        ),
        lattice(
            "conversions.a_dag_power_from_UV",
            S,
            "a† a†^l = U^(l+1) (1 - script P_1 - ... - script P_(l+1)), l = 0..d-1",
            one_index_l,
            |c, i| Ok(pow(&recovered_a_dagger(c)?, ux(i, "l") + 1)),
            |c, i| {
                let l = ix(i, "l");
                let mut rest = c.identity();
                for j in 1..=l + 1 {
                    rest = rest.sub(&proj_script_p(c, j))?;
                }
                mul(&pow(&make_u(c), l as usize + 1), &rest)
            },
        ),
        lattice(
            "conversions.a_dag_nilpotent_from_UV",
            S,
            "(U - script P_0 U)^d = U^d (1 - (script P_0 + ... + script P_(d-1))) = 0",
            none,
            |c, _| Ok(pow(&recovered_a_dagger(c)?, c.d())),
            |c, _| Ok(c.zeros()),
        ),
        lattice(
            "conversions.a_a_dag_from_UV",
            S,
            "a a† = U† (1 - script P_0) U = 1 - script P_1",
            none,
            |c, _| {
                let ad = recovered_a_dagger(c)?;
                mul(&ad.adjoint(), &ad)
            },
            |c, _| one_minus(c, &proj_script_p(c, 1)),
        ),
        lattice(
            "conversions.edge_power_a_dag",
            S,
            "a†^(d-1) = U^(d-1) script P_0",
            none,
            |c, _| Ok(edge_powers_from_uv(c, &make_u(c), &make_v(c))?.0),
            |c, _| Ok(pow(&make_a_dagger(c), c.d() - 1)),
        ),
        lattice(
            "conversions.edge_power_a",
            S,
            "a^(d-1) = script P_0 U†^(d-1)",
            none,
            |c, _| Ok(edge_powers_from_uv(c, &make_u(c), &make_v(c))?.1),
            |c, _| Ok(pow(&make_a(c), c.d() - 1)),
        ),
        lattice(
            "conversions.edge_powers_adjoint",
            S,
            "(U^(d-1) script P_0)† = script P_0 U†^(d-1) by hermiticity of script P_0",
            none,
            |c, _| Ok(edge_powers_from_uv(c, &make_u(c), &make_v(c))?.0.adjoint()),
            |c, _| Ok(edge_powers_from_uv(c, &make_u(c), &make_v(c))?.1),
        ),
        lattice(
            "conversions.almost_unitary_from_UV",
            S,
            "1 - a†^(d-1) a^(d-1) = 1 - U^(d-1) script P_0 U†^(d-1) = a a†",
            none,
            |c, _| {
                let (up, down) = edge_powers_from_uv(c, &make_u(c), &make_v(c))?;
                one_minus(c, &mul(&up, &down)?)
            },
            |c, _| {
                let ad = recovered_a_dagger(c)?;
                mul(&ad.adjoint(), &ad)
            },
        ),
        lattice(
            "conversions.U_is_cyclic_shift",
            S,
            "U = a† + a^(d-1) sends |n> to |n+1 mod d>",
            none,
            |c, _| Ok(make_u(c)),
            |c, _| {
                let d = c.d();
                let units: Vec<_> = (0..d).map(|n| standard_unit(c, (n + 1) % d, n)).collect();
                Ok(sum_matrices(d, c.field(), &units)?)
            },
        ),
        lattice(
            "conversions.V_is_clock",
            S,
            "V = sum_n q^n (P_n - P_(n+1)) = diag(1, q, ..., q^(d-1))",
            none,
            |c, _| Ok(make_v(c)),
            |c, _| {
                Ok(OperatorMatrix::diagonal(c.d(), c.field(), |n| {
                    c.q_pow(n as i64)
                })?)
            },
        ),
        lattice(
            "conversions.round_trip_U",
            S,
            "U -> a† = U - script P_0 U -> a† + a^(d-1) recovers U",
            none,
            |c, _| u_from_shift(c, &recovered_a_dagger(c)?),
            |c, _| Ok(make_u(c)),
        ),
        lattice(
            "conversions.round_trip_V",
            S,
            "V -> a† = U - script P_0 U -> sum_n q^n (P_n - P_(n+1)) recovers V",
            none,
            |c, _| v_from_shift(c, &recovered_a_dagger(c)?),
            |c, _| Ok(make_v(c)),
        ),
    ]
}

fn one_index_l(cfg: &LatticeConfig) -> Vec<Indices> {
    one_index("l", 0..cfg.d())
}

fn matrix_unit_checks() -> Vec<IdentityCheck> {
    use Suite::MatrixUnits as S;
    vec![
        lattice(
            "matrix_units.shift_standard",
            S,
            "e_mn = a†^m R_(d-1) a^n = |m><n|",
            unit_pairs,
            |c, i| matrix_unit_shift(c, ux(i, "m"), ux(i, "n")),
            |c, i| Ok(standard_unit(c, ux(i, "m"), ux(i, "n"))),
        ),
        lattice(
            "matrix_units.schwinger_standard",
            S,
            "e_mn = U^(m-n) script P_(d-n) | script P_(d-n) | U†^(n-m) script P_(d-n) = |m><n|",
            unit_pairs,
            |c, i| matrix_unit_schwinger(c, ux(i, "m"), ux(i, "n")),
            |c, i| Ok(standard_unit(c, ux(i, "m"), ux(i, "n"))),
        ),
        lattice(
            "matrix_units.representations_agree",
            S,
            "a†^m R_(d-1) a^n equals the U, script P form of e_mn",
            unit_pairs,
            |c, i| matrix_unit_shift(c, ux(i, "m"), ux(i, "n")),
            |c, i| matrix_unit_schwinger(c, ux(i, "m"), ux(i, "n")),
        ),
        lattice(
            "matrix_units.shift_product",
            S,
            "e_ij e_kl = delta_jk e_il for e_mn = a†^m R_(d-1) a^n",
            quadruples,
            |c, i| unit_product_lhs(c, i, matrix_unit_shift),
            |c, i| unit_product_rhs(c, i, matrix_unit_shift),
        ),
        lattice(
            "matrix_units.schwinger_product",
            S,
            "e_ij e_kl = delta_jk e_il for the U, script P form of e_mn",
            quadruples,
            |c, i| unit_product_lhs(c, i, matrix_unit_schwinger),
            |c, i| unit_product_rhs(c, i, matrix_unit_schwinger),
        ),
        lattice(
            "matrix_units.shift_adjoint",
            S,
            "e_mn† = e_nm for e_mn = a†^m R_(d-1) a^n",
            unit_pairs,
            |c, i| Ok(matrix_unit_shift(c, ux(i, "m"), ux(i, "n"))?.adjoint()),
            |c, i| matrix_unit_shift(c, ux(i, "n"), ux(i, "m")),
        ),
        lattice(
            "matrix_units.schwinger_adjoint",
            S,
            "e_mn† = e_nm for the U, script P form of e_mn",
            unit_pairs,
            |c, i| Ok(matrix_unit_schwinger(c, ux(i, "m"), ux(i, "n"))?.adjoint()),
            |c, i| matrix_unit_schwinger(c, ux(i, "n"), ux(i, "m")),
        ),
    ]
}

fn tensor_checks() -> Vec<IdentityCheck> {
    vec![
        product(
            "tensor.delta_a_dag_arrows",
            "Delta(a†) = 1 (x) a†_(d1) + a†_(d2) (x) a_(d1)^(d1-1) steps right along each row and jumps from a row end to the next row start",
            |p, _| coproduct_a_dagger(p),
            |p, _| arrow_matrix(p),
        ),
        product(
            "tensor.delta_a_dag_nilpotent",
            "Delta(a†)^(d1 d2) = 0",
            |p, _| Ok(pow(&coproduct_a_dagger(p)?, p.dim())),
            |p, _| Ok(OperatorMatrix::zeros(p.dim(), p.field())),
        ),
        product(
            "tensor.delta_a_dag_almost_unitary",
            "Delta(a) Delta(a†) = 1 - Delta(a†)^(D-1) Delta(a)^(D-1), D = d1 d2",
            |p, _| {
                let ad = coproduct_a_dagger(p)?;
                ad.adjoint().matmul(&ad)
            },
            |p, _| {
                let ad = coproduct_a_dagger(p)?;
                let k = p.dim() - 1;
                let edge = pow(&ad, k).matmul(&pow(&ad.adjoint(), k))?;
                flat_dim_identity(p).sub(&edge)
            },
        ),
        product(
            "tensor.delta_a_dag_almost_unitary_left",
            "Delta(a†) Delta(a) = 1 - Delta(a)^(D-1) Delta(a†)^(D-1), D = d1 d2",
            |p, _| {
                let ad = coproduct_a_dagger(p)?;
                ad.matmul(&ad.adjoint())
            },
            |p, _| {
                let ad = coproduct_a_dagger(p)?;
                let k = p.dim() - 1;
                let edge = pow(&ad.adjoint(), k).matmul(&pow(&ad, k))?;
                flat_dim_identity(p).sub(&edge)
            },
        ),
        product(
            "tensor.delta_U_order",
            "Delta(U)^(d1 d2) = 1",
            |p, _| Ok(pow(&coproduct_u(p)?, p.dim())),
            |p, _| Ok(flat_dim_identity(p)),
        ),
        product(
            "tensor.delta_U_unitary",
            "Delta(U) Delta(U)† = 1",
            |p, _| {
                let u = coproduct_u(p)?;
                u.matmul(&u.adjoint())
            },
            |p, _| Ok(flat_dim_identity(p)),
        ),
        product(
            "tensor.delta_U_wrap_term",
            "Delta(U) - Delta(a†) = a_(d2)^(d2-1) (x) a_(d1)^(d1-1)",
            |p, _| coproduct_u(p)?.sub(&coproduct_a_dagger(p)?),
            |p, _| wrap_term(p),
        ),
        product(
            "tensor.flatten_is_permutation",
            "S S† = 1 for the flattening permutation S",
            |p, _| {
                let s = flatten_permutation(p)?;
                s.matmul(&s.adjoint())
            },
            |p, _| Ok(flat_dim_identity(p)),
        ),
        product(
            "tensor.flatten_intertwines_a_dag",
            "S a†_(d1 d2) S† = Delta(a†_(d2 d1))",
            |p, _| conjugate_by_flatten(p, &flat_generators(p).0),
            |p, _| coproduct_a_dagger(p),
        ),
        product(
            "tensor.flatten_intertwines_U",
            "S U_(d1 d2) S† = Delta(U_(d2 d1))",
            |p, _| conjugate_by_flatten(p, &flat_generators(p).1),
            |p, _| coproduct_u(p),
        ),
    ]
}

/// Every check, grouped by suite in [`Suite::ALL`] order.
pub fn catalogue() -> &'static [IdentityCheck] {
    static CATALOGUE: OnceLock<Vec<IdentityCheck>> = OnceLock::new();
    CATALOGUE.get_or_init(|| {
        let mut all = Vec::new();
        all.extend(schwinger_checks());
        all.extend(almost_unitary_checks());
        all.extend(proj_pr_checks());
        all.extend(proj_script_checks());
        all.extend(conversion_checks());
        all.extend(matrix_unit_checks());
        all.extend(commutator_checks());
        all.extend(tensor_checks());
        all
    })
}

pub fn find_check(name: &str) -> Result<&'static IdentityCheck, IdentityError> {
    catalogue()
        .iter()
        .find(|c| c.name == name)
        .ok_or_else(|| IdentityError::UnknownCheck(name.to_string()))
}

pub fn suite_checks(suite: Suite) -> impl Iterator<Item = &'static IdentityCheck> {
    catalogue().iter().filter(move |c| c.suite == suite)
}

// ---------------------------------------------------------------------------
// evaluation

struct Outcome {
    holds: bool,
    residual: f64,
}

fn compare(
    lhs: &OperatorMatrix,
    rhs: &OperatorMatrix,
    mode: Mode,
    tolerance: f64,
) -> Result<Outcome, MatrixError> {
    match mode {
        // pass/fail by structural equality; the residual is diagnostic only
        Mode::Exact => {
            if lhs.equals(rhs, 0.0)? {
                Ok(Outcome {
                    holds: true,
                    residual: 0.0,
                })
            } else {
                let residual = lhs.max_residual(rhs)?;
                Ok(Outcome {
                    holds: false,
                    residual,
                })
            }
        }
        Mode::Float => {
            let residual = lhs.max_residual(rhs)?;
            Ok(Outcome {
                holds: residual <= tolerance,
                residual,
            })
        }
    }
}

/// Evaluates one check over all of its index assignments.
pub fn run_check(check: &IdentityCheck, target: &Target) -> Result<CheckResult, IdentityError> {
    let started = Instant::now();
    let mode = target.mode();
    let tolerance = target.tolerance();
    let evaluated: Vec<(Indices, Outcome)> = match (&check.builders, target) {
        (Builders::Lattice { indices, lhs, rhs }, Target::Lattice(cfg)) => indices(cfg)
            .into_par_iter()
            .map(|ixs| {
                let l = lhs(cfg, &ixs)?;
                let r = rhs(cfg, &ixs)?;
                let outcome = compare(&l, &r, mode, tolerance)?;
                Ok((ixs, outcome))
            })
            .collect::<Result<_, IdentityError>>()?,
        (Builders::Product { lhs, rhs }, Target::Product(pcfg)) => {
            let ixs = Indices::new();
            let l = lhs(pcfg, &ixs)?;
            let r = rhs(pcfg, &ixs)?;
            vec![(ixs, compare(&l, &r, mode, tolerance)?)]
        }
        (Builders::Lattice { .. }, Target::Product(_)) => {
            return Err(IdentityError::TargetMismatch {
                check: check.name,
                expected: "single-lattice",
            })
        }
        (Builders::Product { .. }, Target::Lattice(_)) => {
            return Err(IdentityError::TargetMismatch {
                check: check.name,
                expected: "product-lattice",
            })
        }
    };

    let instances = evaluated.len();
    let pass = evaluated.iter().all(|(_, o)| o.holds);
    // first index assignment attaining the worst residual among failures
    let mut worst: Option<(&Indices, f64)> = None;
    let mut max_residual: f64 = 0.0;
    for (ixs, outcome) in &evaluated {
        max_residual = max_residual.max(outcome.residual);
        if !outcome.holds && worst.is_none_or(|(_, r)| outcome.residual > r) {
            worst = Some((ixs, outcome.residual));
        }
    }
    Ok(CheckResult {
        name: check.name,
        reference: check.reference,
        d: target.d(),
        factors: target.factors(),
        mode,
        indices: worst.map(|(ixs, _)| ixs.clone()),
        instances,
        pass,
        max_residual,
        elapsed: started.elapsed(),
    })
}

pub fn run_suite(suite: Suite, target: &Target) -> Result<SuiteReport, IdentityError> {
    let checks: Vec<&IdentityCheck> = suite_checks(suite).collect();
    let results = checks
        .par_iter()
        .map(|c| run_check(c, target))
        .collect::<Result<Vec<_>, _>>()?;
    let passed = results.iter().filter(|r| r.pass).count();
    Ok(SuiteReport {
        suite,
        d: target.d(),
        factors: target.factors(),
        mode: target.mode(),
        tolerance: target.tolerance(),
        failed: results.len() - passed,
        passed,
        results,
    })
}

pub fn run_suite_by_name(name: &str, target: &Target) -> Result<SuiteReport, IdentityError> {
    run_suite(Suite::from_name(name)?, target)
}

/// Runs every single-lattice suite on `cfg`, in [`Suite::LATTICE`] order.
pub fn run_all(cfg: &LatticeConfig) -> Result<Vec<SuiteReport>, IdentityError> {
    let target = Target::Lattice(cfg.clone());
    Suite::LATTICE
        .iter()
        .map(|&s| run_suite(s, &target))
        .collect()
}
