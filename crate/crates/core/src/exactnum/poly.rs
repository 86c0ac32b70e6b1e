//! Univariate polynomials with exact rational coefficients.
//!
//! Coefficients are stored in ascending degree with trailing zeros trimmed,
//! so the leading coefficient is nonzero unless the polynomial is zero (the
//! zero polynomial is the empty coefficient list).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;
use thiserror::Error;

use super::ExactRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("polynomial division by zero")]
    DivisionByZero,
    #[error("polynomial division leaves a nonzero remainder")]
    InexactDivision,
}

/// Polynomial over the rationals, coefficients ascending by degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatPolynomial {
    coeffs: Vec<ExactRational>,
}

impl RatPolynomial {
    /// Build from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coeffs: Vec<ExactRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `c * x^degree`.
    pub fn monomial(c: ExactRational, degree: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![ExactRational::zero(); degree + 1];
        coeffs[degree] = c;
        Self { coeffs }
    }

    /// The variable `x`.
    pub fn x() -> Self {
        Self::monomial(ExactRational::one(), 1)
    }

    /// `x - r`.
    pub fn linear_root(r: &ExactRational) -> Self {
        Self::new(vec![-r.clone(), ExactRational::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Coefficient of `x^i` (zero beyond the stored length).
    pub fn coeff(&self, i: usize) -> ExactRational {
        self.coeffs.get(i).cloned().unwrap_or_else(ExactRational::zero)
    }

    pub fn coeffs(&self) -> &[ExactRational] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&ExactRational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &ExactRational) -> ExactRational {
        let mut acc = ExactRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - other.coeff(i)).collect();
        Self::new(coeffs)
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs =
            vec![ExactRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new(coeffs)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * ExactRational::from_integer(BigInt::from(i)))
            .collect();
        Self::new(coeffs)
    }

    /// Divide by the leading coefficient; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lead) => self.scale(&lead.recip()),
        }
    }

    /// Quotient and remainder with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self), PolyError> {
        let d_lead = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let d_deg = divisor.degree().unwrap();
        let mut rem = self.clone();
        let mut quot = vec![
            ExactRational::zero();
            self.coeffs.len().saturating_sub(divisor.coeffs.len()) + 1
        ];
        while let Some(r_deg) = rem.degree() {
            if r_deg < d_deg {
                break;
            }
            let factor = rem.leading().unwrap() / d_lead;
            let shift = r_deg - d_deg;
            quot[shift] = factor.clone();
            let term = Self::monomial(factor, shift);
            rem = rem.sub(&term.mul(divisor));
        }
        Ok((Self::new(quot), rem))
    }

    /// Exact quotient; errors if the remainder is nonzero.
    pub fn divide_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    /// Monic greatest common divisor by the Euclidean algorithm.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// All rational roots, with multiplicity, in increasing order.
    ///
    /// Clears denominators to the primitive integer form, enumerates
    /// candidates `p/q` with `p` dividing the constant term and `q` dividing
    /// the leading coefficient, and deflates each confirmed root.
    pub fn rational_roots(&self) -> Vec<ExactRational> {
        if self.is_constant() {
            return Vec::new();
        }
        let mut p = self.clone();
        let mut roots = Vec::new();
        // Roots at zero first.
        while p.coeff(0).is_zero() && !p.is_constant() {
            roots.push(ExactRational::zero());
            p = p.divide_exact(&Self::x()).expect("x divides");
        }
        if p.is_constant() {
            roots.sort();
            return roots;
        }
        // Primitive integer form: multiply by the lcm of denominators, then
        // divide out the content.  Root candidates are unaffected by scaling.
        let mut lcm = BigInt::one();
        for c in p.coeffs() {
            lcm = lcm.lcm(c.denom());
        }
        let ints: Vec<BigInt> = p
            .coeffs()
            .iter()
            .map(|c| (c * ExactRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let content = ints
            .iter()
            .fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let ints: Vec<BigInt> = ints.iter().map(|v| v / &content).collect();
        let constant = ints.first().unwrap().clone();
        let leading = ints.last().unwrap().clone();
        let mut candidates = Vec::new();
        for num in divisors(&constant) {
            for den in divisors(&leading) {
                let r = ExactRational::new(BigInt::from(num), BigInt::from(den));
                candidates.push(r.clone());
                candidates.push(-r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            while p.eval(&r).is_zero() {
                roots.push(r.clone());
                p = p
                    .divide_exact(&Self::linear_root(&r))
                    .expect("confirmed root divides");
            }
        }
        roots.sort();
        roots
    }

    /// Human-readable form, highest degree first.
    pub fn to_text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                out.push_str(&mag.to_string());
            }
            if i > 0 {
                if show_coeff {
                    out.push('*');
                }
                out.push_str(var);
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
        out
    }
}

impl fmt::Display for RatPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_text("x"))
    }
}

/// Positive divisors of `|n|`; requires `n != 0` and desk-scale magnitude.
fn divisors(n: &BigInt) -> Vec<u128> {
    let n: u128 = n
        .abs()
        .try_into()
        .expect("coefficient too large for rational-root enumeration");
    assert!(n != 0, "divisors of zero are unbounded");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u128;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Determinant of a square matrix of polynomials.
///
/// Cofactor expansion for small sizes, fraction-free (Bareiss) elimination
/// with exact polynomial division beyond.
pub fn poly_mat_det(m: &[Vec<RatPolynomial>]) -> RatPolynomial {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "poly_mat_det needs a square matrix");
    }
    if n == 0 {
        return RatPolynomial::one();
    }
    if n <= 4 {
        return cofactor_det(m);
    }
    bareiss_det(m)
}

fn cofactor_det(m: &[Vec<RatPolynomial>]) -> RatPolynomial {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = RatPolynomial::zero();
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<RatPolynomial>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][col].mul(&cofactor_det(&minor));
        det = if col % 2 == 0 {
            det.add(&term)
        } else {
            det.sub(&term)
        };
    }
    det
}

fn bareiss_det(m: &[Vec<RatPolynomial>]) -> RatPolynomial {
    let n = m.len();
    let mut a: Vec<Vec<RatPolynomial>> = m.to_vec();
    let mut sign_flip = false;
    let mut prev = RatPolynomial::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return RatPolynomial::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = a[k][k].mul(&a[i][j]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = num
                    .divide_exact(&prev)
                    .expect("Bareiss pivot divides exactly");
            }
            a[i][k] = RatPolynomial::zero();
        }
        prev = a[k][k].clone();
    }
    let det = a[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}
