//! Exact arithmetic in the cyclotomic field `Q(q)`, `q = exp(2πi/d)`.
//!
//! Elements are stored as rational coefficient vectors of length `φ(d)`,
//! always fully reduced modulo the cyclotomic polynomial `Φ_d`. Because the
//! reduction is canonical, equality of elements is equality of coefficients.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CycloError {
    #[error("cyclotomic conductor must be at least 1")]
    ZeroConductor,
    #[error("conductor mismatch: {left} vs {right}")]
    ConductorMismatch { left: u64, right: u64 },
    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),
    #[error("cannot lift Q(zeta_{from}) into Q(zeta_{to}): {to} is not a multiple of {from}")]
    NotASubfield { from: u64, to: u64 },
    #[error("expected {expected} coefficients for Q(zeta_{d}), got {got}")]
    CoefficientCount { d: u64, expected: usize, got: usize },
}

/// The `d`-th cyclotomic polynomial, integer coefficients from low to high degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclotomicPolynomial {
    d: u64,
    coeffs: Vec<BigInt>,
}

impl CyclotomicPolynomial {
    pub fn conductor(&self) -> u64 {
        self.d
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }
}

/// Computes `Φ_d = (x^d - 1) / ∏_{e | d, e < d} Φ_e` by exact division.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn cyclotomic_polynomial(d: u64) -> CyclotomicPolynomial {
    assert!(d >= 1, "cyclotomic polynomial requires d >= 1");
    let mut numerator = vec![BigInt::zero(); d as usize + 1];
    numerator[0] = -BigInt::one();
    numerator[d as usize] = BigInt::one();
    for e in 1..d {
        if d.is_multiple_of(e) {
            let divisor = cyclotomic_polynomial(e);
            numerator = exact_monic_division(&numerator, &divisor.coeffs);
        }
    }
    CyclotomicPolynomial {
        d,
        coeffs: numerator,
    }
}

fn exact_monic_division(numerator: &[BigInt], divisor: &[BigInt]) -> Vec<BigInt> {
    let mut rem = numerator.to_vec();
    let dd = divisor.len() - 1;
    let nd = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for shift in (0..=nd - dd).rev() {
        let lead = rem[shift + dd].clone();
        if lead.is_zero() {
            continue;
        }
        for (i, c) in divisor.iter().enumerate() {
            rem[shift + i] -= &lead * c;
        }
        quot[shift] = lead;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "division was not exact");
    quot
}

/// Euler's totient.
pub fn totient(d: u64) -> u64 {
    (1..=d).filter(|k| k.gcd(&d) == 1).count() as u64
}

/// Precomputed reduction data for one conductor.
struct FieldData {
    d: u64,
    phi: usize,
    poly: CyclotomicPolynomial,
    // powers[k] = q^k reduced, for k in 0..d
    powers: Vec<Vec<BigRational>>,
}

impl fmt::Debug for FieldData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.d)
    }
}

impl FieldData {
    fn new(d: u64) -> Self {
        let poly = cyclotomic_polynomial(d);
        let phi = poly.degree();
        let modulus: Vec<BigRational> = poly
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut powers = Vec::with_capacity(d as usize);
        let mut current = vec![BigRational::zero(); phi];
        current[0] = BigRational::one();
        for _ in 0..d {
            powers.push(current.clone());
            // multiply by x, then eliminate the x^phi term using the monic modulus
            let carry = current.pop().expect("phi >= 1");
            current.insert(0, BigRational::zero());
            if !carry.is_zero() {
                for (c, m) in current.iter_mut().zip(&modulus) {
                    *c -= &carry * m;
                }
            }
        }
        FieldData {
            d,
            phi,
            poly,
            powers,
        }
    }
}

fn field(d: u64) -> Arc<FieldData> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<FieldData>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    guard
        .entry(d)
        .or_insert_with(|| Arc::new(FieldData::new(d)))
        .clone()
}

/// An element of `Q(ζ_d)` in canonical reduced form.
#[derive(Clone)]
pub struct CycloScalar {
    field: Arc<FieldData>,
    coeffs: Vec<BigRational>,
}

impl PartialEq for CycloScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.d == other.field.d && self.coeffs == other.coeffs
    }
}

impl Eq for CycloScalar {}

impl fmt::Debug for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in Q(zeta_{})", self, self.field.d)
    }
}

impl fmt::Display for CycloScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            if wrote {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            match k {
                0 => write!(f, "{magnitude}")?,
                _ => {
                    if !magnitude.is_one() {
                        write!(f, "{magnitude}*")?;
                    }
                    if k == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl CycloScalar {
    fn with_coeffs(field: Arc<FieldData>, coeffs: Vec<BigRational>) -> Self {
        debug_assert_eq!(coeffs.len(), field.phi);
        CycloScalar { field, coeffs }
    }

    /// # Panics
    ///
    /// Panics if `d == 0`.
    pub fn zero(d: u64) -> Self {
        let field = field(d);
        let coeffs = vec![BigRational::zero(); field.phi];
        Self::with_coeffs(field, coeffs)
    }

    pub fn one(d: u64) -> Self {
        Self::from_rational(d, BigRational::one())
    }

    pub fn from_rational(d: u64, value: BigRational) -> Self {
        let mut s = Self::zero(d);
        s.coeffs[0] = value;
        s
    }

    pub fn from_integer(d: u64, value: i64) -> Self {
        Self::from_rational(d, BigRational::from_integer(value.into()))
    }

    /// Builds an element from a coefficient vector that is already reduced
    /// (length `φ(d)`).
    pub fn from_coeffs(d: u64, coeffs: Vec<BigRational>) -> Result<Self, CycloError> {
        if d == 0 {
            return Err(CycloError::ZeroConductor);
        }
        let field = field(d);
        if coeffs.len() != field.phi {
            return Err(CycloError::CoefficientCount {
                d,
                expected: field.phi,
                got: coeffs.len(),
            });
        }
        Ok(Self::with_coeffs(field, coeffs))
    }

    pub fn conductor(&self) -> u64 {
        self.field.d
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn modulus(&self) -> &CyclotomicPolynomial {
        &self.field.poly
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    fn check_same(&self, other: &Self) -> Result<(), CycloError> {
        if self.field.d == other.field.d {
            Ok(())
        } else {
            Err(CycloError::ConductorMismatch {
                left: self.field.d,
                right: other.field.d,
            })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                if b.is_zero() {
                    a.clone()
                } else if a.is_zero() {
                    b.clone()
                } else {
                    a + b
                }
            })
            .collect();
        Ok(Self::with_coeffs(self.field.clone(), coeffs))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| {
                if b.is_zero() {
                    a.clone()
                } else if a.is_zero() {
                    -b
                } else {
                    a - b
                }
            })
            .collect();
        Ok(Self::with_coeffs(self.field.clone(), coeffs))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycloError> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.field.d));
        }
        if self.is_rational() {
            return Ok(other.scale(&self.coeffs[0]));
        }
        if other.is_rational() {
            return Ok(self.scale(&other.coeffs[0]));
        }
        let phi = self.field.phi;
        let mut product = vec![BigRational::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    product[i + j] += a * b;
                }
            }
        }
        Ok(self.reduce(product))
    }

    /// Reduces an arbitrary-length polynomial in `q` using `q^k = q^(k mod d)`
    /// and the precomputed reduced powers.
    fn reduce(&self, poly: Vec<BigRational>) -> Self {
        let field = &self.field;
        let mut out = vec![BigRational::zero(); field.phi];
        for (k, c) in poly.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let k = k % field.d as usize;
            if k < field.phi {
                if out[k].is_zero() {
                    out[k] = c;
                } else {
                    out[k] += c;
                }
            } else {
                for (o, p) in out.iter_mut().zip(&field.powers[k]) {
                    if !p.is_zero() {
                        *o += &c * p;
                    }
                }
            }
        }
        Self::with_coeffs(field.clone(), out)
    }

    pub fn scale(&self, factor: &BigRational) -> Self {
        if factor.is_one() {
            return self.clone();
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| if c.is_zero() { c.clone() } else { c * factor })
            .collect();
        Self::with_coeffs(self.field.clone(), coeffs)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against `Φ_d`.
    pub fn invert(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero(self.field.d));
        }
        if self.is_rational() {
            return Ok(Self::from_rational(self.field.d, self.coeffs[0].recip()));
        }
        let modulus: Vec<BigRational> = self
            .field
            .poly
            .coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        let mut r0 = modulus;
        let mut r1 = trimmed(self.coeffs.clone());
        let mut s0: Vec<BigRational> = Vec::new();
        let mut s1 = vec![BigRational::one()];
        while !r1.is_empty() {
            let (quot, rem) = poly_divrem(&r0, &r1);
            let next_s = poly_sub(&s0, &poly_mul(&quot, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, next_s);
        }
        // r0 is the (nonzero constant) gcd because Φ_d is irreducible
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let scaled: Vec<BigRational> = s0.iter().map(|c| c * &scale).collect();
        Ok(self.reduce(scaled))
    }

    /// Complex conjugation: the substitution `q -> q^(d-1)`.
    pub fn conjugate(&self) -> Self {
        if self.is_rational() {
            return self.clone();
        }
        let d = self.field.d as usize;
        let mut poly = vec![BigRational::zero(); d];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[(d - k) % d] += c;
        }
        self.reduce(poly)
    }

    /// Evaluates the element at `exp(2πi/d)`.
    pub fn to_complex(&self) -> Complex64 {
        let d = self.field.d as f64;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let angle = 2.0 * PI * k as f64 / d;
                Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }

    /// Re-expresses the element in `Q(ζ_target)` using `q_d = q_target^(target/d)`.
    pub fn lift(&self, target: u64) -> Result<Self, CycloError> {
        let d = self.field.d;
        if target == 0 || !target.is_multiple_of(d) {
            return Err(CycloError::NotASubfield {
                from: d,
                to: target,
            });
        }
        if target == d {
            return Ok(self.clone());
        }
        let step = (target / d) as usize;
        let mut poly = vec![BigRational::zero(); (self.field.phi - 1) * step + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            poly[k * step] = c.clone();
        }
        Ok(Self::zero(target).reduce(poly))
    }
}

/// `q^k` in `Q(ζ_d)`, `k` taken modulo `d`.
///
/// # Panics
///
/// Panics if `d == 0`.
pub fn root_power(d: u64, k: i64) -> CycloScalar {
    let field = field(d);
    let index = k.rem_euclid(d as i64) as usize;
    let coeffs = field.powers[index].clone();
    CycloScalar::with_coeffs(field, coeffs)
}

fn trimmed(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trimmed(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            match b.get(i) {
                Some(y) => x - y,
                None => x,
            }
        })
        .collect();
    trimmed(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = trimmed(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let lead = b.last().expect("nonzero divisor");
    let mut quot = vec![BigRational::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() {
        let shift = rem.len() - b.len();
        let factor = rem.last().expect("nonempty") / lead;
        for (i, c) in b.iter().enumerate() {
            rem[shift + i] -= &factor * c;
        }
        quot[shift] = factor;
        // the leading term cancels exactly
        rem.pop();
        rem = trimmed(rem);
    }
    (trimmed(quot), rem)
}

impl Add for &CycloScalar {
    type Output = CycloScalar;

    /// # Panics
    ///
    /// Panics on a conductor mismatch; use [`CycloScalar::try_add`] to get an error.
    fn add(self, rhs: &CycloScalar) -> CycloScalar {
        self.try_add(rhs).expect("cyclotomic add")
    }
}

impl Sub for &CycloScalar {
    type Output = CycloScalar;

    fn sub(self, rhs: &CycloScalar) -> CycloScalar {
        self.try_sub(rhs).expect("cyclotomic sub")
    }
}

impl Mul for &CycloScalar {
    type Output = CycloScalar;

    fn mul(self, rhs: &CycloScalar) -> CycloScalar {
        self.try_mul(rhs).expect("cyclotomic mul")
    }
}

impl Neg for &CycloScalar {
    type Output = CycloScalar;

    fn neg(self) -> CycloScalar {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        CycloScalar::with_coeffs(self.field.clone(), coeffs)
    }
}
