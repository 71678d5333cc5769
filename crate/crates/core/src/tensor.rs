//! Translation operators of a `d1 × d2` lattice expressed in the tensor
//! product of two one-dimensional lattice algebras.
//!
//! The first tensor factor is the vertical lattice (`d2` rows, index `j`),
//! the second the horizontal one (`d1` columns, index `i`). The point
//! `(j, i)` is the flat index `n = j * d1 + i` of the chain that walks each
//! row left to right and then jumps to the start of the next row.

use num_integer::Integer;

use crate::lattice::{
    make_a, make_a_dagger, make_u, LatticeConfig, LatticeError, Mode, DEFAULT_TOLERANCE,
};
use crate::matrix::{MatrixError, OperatorMatrix, ScalarField};

#[derive(Debug, Clone, PartialEq)]
pub struct ProductLatticeConfig {
    horizontal: LatticeConfig,
    vertical: LatticeConfig,
    flat: LatticeConfig,
}

impl ProductLatticeConfig {
    /// `d1` horizontal points, `d2` vertical points; both must be at least 2.
    pub fn new(d1: usize, d2: usize, mode: Mode) -> Result<Self, LatticeError> {
        Ok(ProductLatticeConfig {
            horizontal: LatticeConfig::new(d1, mode)?,
            vertical: LatticeConfig::new(d2, mode)?,
            flat: LatticeConfig::new(d1 * d2, mode)?,
        })
    }

    pub fn with_tolerance(self, tolerance: f64) -> Result<Self, LatticeError> {
        Ok(ProductLatticeConfig {
            horizontal: self.horizontal.with_tolerance(tolerance)?,
            vertical: self.vertical.with_tolerance(tolerance)?,
            flat: self.flat.with_tolerance(tolerance)?,
        })
    }

    pub fn d1(&self) -> usize {
        self.horizontal.d()
    }

    pub fn d2(&self) -> usize {
        self.vertical.d()
    }

    /// `D = d1 * d2`.
    pub fn dim(&self) -> usize {
        self.flat.d()
    }

    pub fn mode(&self) -> Mode {
        self.flat.mode()
    }

    pub fn tolerance(&self) -> f64 {
        self.flat.tolerance()
    }

    pub fn horizontal(&self) -> &LatticeConfig {
        &self.horizontal
    }

    pub fn vertical(&self) -> &LatticeConfig {
        &self.vertical
    }

    /// The `D`-point chain the product lattice is isomorphic to.
    pub fn flat(&self) -> &LatticeConfig {
        &self.flat
    }

    /// Scalars of the coproduct images: `Q(ζ_lcm(d1, d2))` in exact mode.
    pub fn field(&self) -> ScalarField {
        match self.mode() {
            Mode::Exact => ScalarField::Exact {
                conductor: (self.d1() as u64).lcm(&(self.d2() as u64)),
            },
            Mode::Float => ScalarField::Float,
        }
    }
}

impl Default for ProductLatticeConfig {
    fn default() -> Self {
        ProductLatticeConfig::new(4, 3, Mode::Exact)
            .and_then(|p| p.with_tolerance(DEFAULT_TOLERANCE))
            .expect("valid default lattice")
    }
}

fn last_power(cfg: &LatticeConfig, m: &OperatorMatrix) -> OperatorMatrix {
    m.matpow(cfg.d() as u32 - 1)
}

/// `Δ(a†) = 1_{d2} ⊗ a†_{d1} + a†_{d2} ⊗ a_{d1}^(d1-1)`.
pub fn coproduct_a_dagger(pcfg: &ProductLatticeConfig) -> Result<OperatorMatrix, MatrixError> {
    let (h, v) = (pcfg.horizontal(), pcfg.vertical());
    let step_right = v.identity().kron(&make_a_dagger(h))?;
    let row_jump = make_a_dagger(v).kron(&last_power(h, &make_a(h)))?;
    step_right.add(&row_jump)
}

/// `Δ(U) = Δ(a†) + a_{d2}^(d2-1) ⊗ a_{d1}^(d1-1)`, the periodic translation.
pub fn coproduct_u(pcfg: &ProductLatticeConfig) -> Result<OperatorMatrix, MatrixError> {
    coproduct_a_dagger(pcfg)?.add(&wrap_term(pcfg)?)
}

/// `a_{d2}^(d2-1) ⊗ a_{d1}^(d1-1)`: sends the last point back to the first.
pub fn wrap_term(pcfg: &ProductLatticeConfig) -> Result<OperatorMatrix, MatrixError> {
    let (h, v) = (pcfg.horizontal(), pcfg.vertical());
    last_power(v, &make_a(v)).kron(&last_power(h, &make_a(h)))
}

/// Permutation `S` with `S|n> = |j> ⊗ |i>` for `n = j * d1 + i`, the tensor
/// position read off from [`OperatorMatrix::kron`] itself.
pub fn flatten_permutation(pcfg: &ProductLatticeConfig) -> Result<OperatorMatrix, MatrixError> {
    let (d1, d2, dim) = (pcfg.d1(), pcfg.d2(), pcfg.dim());
    let field = pcfg.field();
    let mut target = vec![0usize; dim];
    for (n, slot) in target.iter_mut().enumerate() {
        let (j, i) = (n / d1, n % d1);
        let ket =
            OperatorMatrix::unit(d2, field, j, 0).kron(&OperatorMatrix::unit(d1, field, i, 0))?;
        *slot = (0..dim)
            .find(|&row| !ket.get(row, 0).is_zero())
            .expect("a tensor product of basis kets is a basis ket");
    }
    let (zero, one) = (field.zero(), field.one());
    OperatorMatrix::from_fn(dim, field, |row, col| {
        if target[col] == row {
            one.clone()
        } else {
            zero.clone()
        }
    })
}

/// Successor of flat point `n` along the arrows of the product lattice:
/// one step right inside a row, a jump from the end of a row to the start of
/// the next, and nothing after the final point.
pub fn arrow_successor(d1: usize, d2: usize, n: usize) -> Option<usize> {
    let (j, i) = (n / d1, n % d1);
    if i + 1 < d1 {
        Some(j * d1 + i + 1)
    } else if j + 1 < d2 {
        Some((j + 1) * d1)
    } else {
        None
    }
}

/// The matrix of the arrow map on the tensor basis (`|j> ⊗ |i>` at index
/// `j * d1 + i`).
pub fn arrow_matrix(pcfg: &ProductLatticeConfig) -> Result<OperatorMatrix, MatrixError> {
    let (d1, d2) = (pcfg.d1(), pcfg.d2());
    let field = pcfg.field();
    let (zero, one) = (field.zero(), field.one());
    OperatorMatrix::from_fn(pcfg.dim(), field, |row, col| {
        if arrow_successor(d1, d2, col) == Some(row) {
            one.clone()
        } else {
            zero.clone()
        }
    })
}

/// `S M S†`.
pub fn conjugate_by_flatten(
    pcfg: &ProductLatticeConfig,
    flat_operator: &OperatorMatrix,
) -> Result<OperatorMatrix, MatrixError> {
    let s = flatten_permutation(pcfg)?;
    s.matmul(flat_operator)?.matmul(&s.adjoint())
}

/// Canonical `a†_D` and `U_D` on the flattened chain.
pub fn flat_generators(pcfg: &ProductLatticeConfig) -> (OperatorMatrix, OperatorMatrix) {
    (make_a_dagger(pcfg.flat()), make_u(pcfg.flat()))
}
