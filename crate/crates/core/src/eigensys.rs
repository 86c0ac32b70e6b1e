//! The complete biorthogonal eigenvector system of the carry matrix.
//!
//! For `k` summands the probability matrix has simple eigenvalues `N^{-j}`,
//! `j = 0, ..., k-1`, and the eigenvectors do not depend on the base.  The
//! left eigenvectors factor through Stirling numbers and Eulerian
//! polynomials:
//!
//! ```text
//! sum_i u_j[i] x^i  =  (-1)^j |s(k, k-j)| / k!  *  (x - 1)^j  *  A_{k-j}(x),
//! ```
//!
//! equivalently `u_j` is `|s(k, k-j)|/k!` times the j-th backward difference
//! of the Eulerian row `A(k-j, .)`.  The right eigenvectors, normalized by
//! `v_j[0] = 1`, satisfy the binomial-palindromic characterization
//!
//! ```text
//! sum_i C(k-1, i) v_j[i] x^i  =  (1 + x)^{k-1-j} Q_j(x),
//! ```
//!
//! with `Q_j(0) = 1`, `deg Q_j = j`, and `x^j Q_j(1/x) = (-1)^j Q_j(x)`.
//!
//! Orientation: the carry matrix is stored column-stochastically with entry
//! `[to, from]`, so the Stirling-Eulerian family satisfies `T u_j = N^{-j}
//! u_j` (it contains the stationary vector at `j = 0`) while the palindromic
//! family acts from the other side, `v_j^T T = N^{-j} v_j^T` (it contains the
//! all-ones vector at `j = 0`).  The names follow the row-stochastic
//! convention in which `u` is the left family; only the side of the action
//! depends on the storage orientation, never the vectors themselves.
//!
//! The `v_j` are extracted as exact kernels of the transposed count matrix at
//! a witness base (2) and revalidated at a second base (3); base-independence
//! is checked, not assumed.  The normalization constants `c_{k,j} =
//! |s(k, k-j)|/k!` are computed three independent ways (Stirling quotient,
//! elementary symmetric quotient, projector corner entry) and must agree
//! exactly.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::exactnum::{
    binomial, binomial_big, elementary_symmetric, eulerian_row, factorial, rat_big,
    stirling_first_unsigned, ExactRational, PolyError, RatMatrix, RatPolynomial,
};
use crate::holte::build_holte;

/// Default witness bases for nullspace extraction and cross-validation.
pub const WITNESS_BASES: [u32; 2] = [2, 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("eigensystem needs k >= 2 (got {0})")]
    KTooSmall(usize),
    #[error("closed form for Q_{j} needs k >= {min} (got {k})")]
    KBelowValidity { j: usize, min: usize, k: usize },
    #[error("index {j} out of range for k = {k}")]
    IndexOutOfRange { j: usize, k: usize },
    #[error("nullspace at base {base}, index {j} has dimension {dim}, expected 1")]
    NullspaceDimension { base: u32, j: usize, dim: usize },
    #[error("right eigenvector {j} has a vanishing leading entry at base {base}")]
    ZeroLeadEntry { base: u32, j: usize },
    #[error("right eigenvectors disagree between the witness bases {bases:?} at index {j}")]
    WitnessMismatch { bases: (u32, u32), j: usize },
    #[error("quotient extraction for index {j}: {source}")]
    InexactQuotient { j: usize, source: PolyError },
}

/// The biorthogonal eigenvector system for a given summand count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenSystem {
    k: usize,
    left: Vec<Vec<ExactRational>>,
    right: Vec<Vec<ExactRational>>,
    constants: Vec<ExactRational>,
    quotients: Vec<RatPolynomial>,
}

impl EigenSystem {
    /// Build and fully validate the system for `k` summands.
    ///
    /// Construction cross-checks every internal invariant (witness-base
    /// agreement, three-way normalization constants, biorthogonality,
    /// reversal signs, quotient palindromes) and treats a violation as a
    /// hard error, since each one would mean an upstream arithmetic bug.
    pub fn new(k: usize) -> Result<Self, EigenError> {
        if k < 2 {
            return Err(EigenError::KTooSmall(k));
        }
        let left: Vec<_> = (0..k).map(|j| left_eigenvector(k, j)).collect();
        for (j, u) in left.iter().enumerate() {
            assert_eq!(
                u,
                &left_eigenvector_differences(k, j),
                "left eigenvector forms disagree at j={j}"
            );
        }

        let right: Vec<_> = (0..k)
            .map(|j| right_eigenvector_at_base(k, j, WITNESS_BASES[0]))
            .collect::<Result<_, _>>()?;
        for j in 0..k {
            let other = right_eigenvector_at_base(k, j, WITNESS_BASES[1])?;
            if other != right[j] {
                return Err(EigenError::WitnessMismatch {
                    bases: (WITNESS_BASES[0], WITNESS_BASES[1]),
                    j,
                });
            }
        }

        // Normalization constants three ways: Stirling quotient, elementary
        // symmetric quotient, and the projector corner E_j[0,0] = u_j[0].
        let kf = factorial(k);
        let values: Vec<i64> = (1..k as i64).collect();
        let constants: Vec<ExactRational> = (0..k)
            .map(|j| {
                let stirling = ExactRational::new(
                    stirling_first_unsigned(k, (k - j) as i64),
                    kf.clone(),
                );
                let esym =
                    ExactRational::new(elementary_symmetric(j, &values), kf.clone());
                assert_eq!(
                    stirling, esym,
                    "Stirling and elementary-symmetric constants disagree at j={j}"
                );
                assert_eq!(
                    stirling, left[j][0],
                    "projector corner disagrees with Stirling constant at j={j}"
                );
                stirling
            })
            .collect();

        // Biorthogonality: the Gram matrix of the two families is exactly I.
        for (m, u) in left.iter().enumerate() {
            for (j, v) in right.iter().enumerate() {
                let dot = dot(u, v);
                let expected = if m == j {
                    ExactRational::one()
                } else {
                    ExactRational::zero()
                };
                assert_eq!(dot, expected, "biorthogonality fails at ({m},{j})");
            }
        }

        // Reversal sign: v_j[k-1] = (-1)^j.
        for (j, v) in right.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            assert_eq!(
                v[k - 1],
                ExactRational::from_integer(BigInt::from(sign)),
                "right eigenvector reversal sign fails at j={j}"
            );
        }

        let quotients: Vec<RatPolynomial> = (0..k)
            .map(|j| extract_quotient(k, j, &right[j]))
            .collect::<Result<_, _>>()?;
        for (j, q) in quotients.iter().enumerate() {
            assert_eq!(q.coeff(0), ExactRational::one(), "Q_{j}(0) != 1");
            assert_eq!(q.degree(), Some(j), "deg Q_{j} != {j}");
            assert!(quotient_is_palindromic(q, j), "Q_{j} palindrome fails");
        }

        Ok(Self {
            k,
            left,
            right,
            constants,
            quotients,
        })
    }

    pub fn summands(&self) -> usize {
        self.k
    }

    /// Left eigenvector `u_j`.
    pub fn left(&self, j: usize) -> &[ExactRational] {
        &self.left[j]
    }

    /// Right eigenvector `v_j` (normalized `v_j[0] = 1`).
    pub fn right(&self, j: usize) -> &[ExactRational] {
        &self.right[j]
    }

    /// Normalization constant `c_{k,j} = |s(k, k-j)| / k!`.
    pub fn constant(&self, j: usize) -> &ExactRational {
        &self.constants[j]
    }

    pub fn constants(&self) -> &[ExactRational] {
        &self.constants
    }

    /// Quotient polynomial `Q_j`.
    pub fn quotient(&self, j: usize) -> &RatPolynomial {
        &self.quotients[j]
    }

    /// Eigenvalues `N^{-j}` of the probability matrix for a concrete base.
    pub fn eigenvalues(&self, base: u32) -> Vec<ExactRational> {
        (0..self.k)
            .map(|j| {
                ExactRational::new(BigInt::one(), BigInt::from(base).pow(j as u32))
            })
            .collect()
    }

    /// Rank-one spectral projector `E_j = u_j v_j^T` (in the stored
    /// orientation), so `E_0` has every column equal to the stationary
    /// distribution and `T = sum_j N^{-j} E_j`.
    pub fn projector(&self, j: usize) -> RatMatrix {
        RatMatrix::outer(&self.left[j], &self.right[j])
    }
}

fn dot(a: &[ExactRational], b: &[ExactRational]) -> ExactRational {
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(ExactRational::zero(), |acc, t| acc + t)
}

/// Left eigenvector for eigenvalue `N^{-j}` via the generating-function
/// product `(-1)^j |s(k,k-j)|/k! (x-1)^j A_{k-j}(x)`.
pub fn left_eigenvector(k: usize, j: usize) -> Vec<ExactRational> {
    assert!(k >= 2 && j < k, "left_eigenvector needs 0 <= j < k");
    let eulerian_poly = RatPolynomial::new(
        eulerian_row(k - j).into_iter().map(rat_big).collect(),
    );
    let x_minus_one = RatPolynomial::new(vec![
        -ExactRational::one(),
        ExactRational::one(),
    ]);
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    let scale = ExactRational::new(
        BigInt::from(sign) * stirling_first_unsigned(k, (k - j) as i64),
        factorial(k),
    );
    let gf = x_minus_one.pow(j as u32).mul(&eulerian_poly).scale(&scale);
    (0..k).map(|i| gf.coeff(i)).collect()
}

/// The same vector by the entrywise backward-difference formula
/// `u_j[i] = |s(k,k-j)|/k! * sum_m C(j,m) (-1)^m A(k-j, i-m)`.
pub fn left_eigenvector_differences(k: usize, j: usize) -> Vec<ExactRational> {
    assert!(k >= 2 && j < k);
    let scale = ExactRational::new(stirling_first_unsigned(k, (k - j) as i64), factorial(k));
    let row = eulerian_row(k - j);
    let at = |i: i64| -> BigInt {
        if i < 0 || i as usize >= row.len() {
            BigInt::zero()
        } else {
            row[i as usize].clone()
        }
    };
    (0..k as i64)
        .map(|i| {
            let mut sum = BigInt::zero();
            for m in 0..=j as i64 {
                let term = binomial(j as u64, m) * at(i - m);
                if m % 2 == 0 {
                    sum += term;
                } else {
                    sum -= term;
                }
            }
            rat_big(sum) * &scale
        })
        .collect()
}

fn right_eigenvector_at_base(
    k: usize,
    j: usize,
    base: u32,
) -> Result<Vec<ExactRational>, EigenError> {
    let sys = build_holte(k, base);
    let eigenvalue = rat_big(BigInt::from(base).pow((k - j) as u32));
    // v_j^T T = lambda v_j^T: kernel of the transposed shifted count matrix.
    let shifted = sys
        .count_matrix()
        .transpose()
        .sub(&RatMatrix::identity(k).scale(&eigenvalue));
    let nullspace = shifted.nullspace();
    if nullspace.len() != 1 {
        return Err(EigenError::NullspaceDimension {
            base,
            j,
            dim: nullspace.len(),
        });
    }
    let v = &nullspace[0];
    if v[0].is_zero() {
        return Err(EigenError::ZeroLeadEntry { base, j });
    }
    let lead = v[0].clone();
    Ok(v.iter().map(|e| e / &lead).collect())
}

/// Right eigenvector for eigenvalue `N^{-j}`, extracted at `witness_base` and
/// revalidated at a second base; the result is base-independent.
pub fn right_eigenvector(
    k: usize,
    j: usize,
    witness_base: u32,
) -> Result<Vec<ExactRational>, EigenError> {
    if k < 2 {
        return Err(EigenError::KTooSmall(k));
    }
    if j >= k {
        return Err(EigenError::IndexOutOfRange { j, k });
    }
    let v = right_eigenvector_at_base(k, j, witness_base)?;
    let second = if witness_base == WITNESS_BASES[0] {
        WITNESS_BASES[1]
    } else {
        WITNESS_BASES[0]
    };
    let check = right_eigenvector_at_base(k, j, second)?;
    if v != check {
        return Err(EigenError::WitnessMismatch {
            bases: (witness_base, second),
            j,
        });
    }
    Ok(v)
}

fn extract_quotient(
    k: usize,
    j: usize,
    v: &[ExactRational],
) -> Result<RatPolynomial, EigenError> {
    let weighted = RatPolynomial::new(
        v.iter()
            .enumerate()
            .map(|(i, vi)| rat_big(binomial((k - 1) as u64, i as i64)) * vi)
            .collect(),
    );
    let one_plus_x = RatPolynomial::new(vec![ExactRational::one(), ExactRational::one()]);
    weighted
        .divide_exact(&one_plus_x.pow((k - 1 - j) as u32))
        .map_err(|source| EigenError::InexactQuotient { j, source })
}

/// `x^j Q(1/x) = (-1)^j Q(x)`: the coefficient list reversed equals itself
/// times `(-1)^j`.
pub fn quotient_is_palindromic(q: &RatPolynomial, j: usize) -> bool {
    let coeffs: Vec<ExactRational> = (0..=j).map(|i| q.coeff(i)).collect();
    let sign = if j.is_multiple_of(2) { 1 } else { -1 };
    (0..=j).all(|i| {
        coeffs[i] == &coeffs[j - i] * ExactRational::from_integer(BigInt::from(sign))
    })
}

/// Quotient polynomial `Q_j` of the binomial-weighted right eigenvector.
pub fn quotient_polynomial(k: usize, j: usize) -> Result<RatPolynomial, EigenError> {
    if k < 2 {
        return Err(EigenError::KTooSmall(k));
    }
    if j >= k {
        return Err(EigenError::IndexOutOfRange { j, k });
    }
    let v = right_eigenvector(k, j, WITNESS_BASES[0])?;
    extract_quotient(k, j, &v)
}

/// Closed form `Q_2 = ((3k-1)(1+x^2) - 2(3k-5)x) / (3k-1)`, valid for k >= 4.
pub fn q2_closed_form(k: usize) -> Result<RatPolynomial, EigenError> {
    if k < 4 {
        return Err(EigenError::KBelowValidity { j: 2, min: 4, k });
    }
    let denom = BigInt::from(3 * k as i64 - 1);
    Ok(RatPolynomial::new(vec![
        ExactRational::one(),
        ExactRational::new(BigInt::from(-2 * (3 * k as i64 - 5)), denom),
        ExactRational::one(),
    ]))
}

/// Closed form `Q_3 = -(x-1)(k x^2 - 2(k-4)x + k) / k`, valid for k >= 5.
pub fn q3_closed_form(k: usize) -> Result<RatPolynomial, EigenError> {
    if k < 5 {
        return Err(EigenError::KBelowValidity { j: 3, min: 5, k });
    }
    let kk = BigInt::from(k);
    let quadratic = RatPolynomial::new(vec![
        ExactRational::one(),
        ExactRational::new(BigInt::from(-2 * (k as i64 - 4)), kk.clone()),
        ExactRational::one(),
    ]);
    let one_minus_x = RatPolynomial::new(vec![ExactRational::one(), -ExactRational::one()]);
    Ok(one_minus_x.mul(&quadratic))
}

/// Spectral projector `E_j = v_j u_j^T`, validated against the base-`n`
/// carry matrix: `E_j^2 = E_j`, `sum_j E_j = I`, and
/// `T = sum_j N^{-j} E_j` must all hold exactly.
pub fn spectral_projector(k: usize, j: usize, base: u32) -> Result<RatMatrix, EigenError> {
    let sys = EigenSystem::new(k)?;
    if j >= k {
        return Err(EigenError::IndexOutOfRange { j, k });
    }
    let e = sys.projector(j);
    assert_eq!(e.mul(&e), e, "projector idempotence fails at j={j}");
    let mut sum = RatMatrix::zeros(k, k);
    let mut reconstruction = RatMatrix::zeros(k, k);
    for (m, ev) in sys.eigenvalues(base).into_iter().enumerate() {
        let em = sys.projector(m);
        sum = sum.add(&em);
        reconstruction = reconstruction.add(&em.scale(&ev));
    }
    assert_eq!(sum, RatMatrix::identity(k), "projectors do not sum to I");
    let holte = build_holte(k, base);
    assert_eq!(
        &reconstruction,
        holte.prob_matrix(),
        "spectral reconstruction fails at k={k}, base={base}"
    );
    Ok(e)
}

/// Exact biorthogonality of the two eigenvector families.
pub fn verify_biorthogonality(k: usize) -> Result<bool, EigenError> {
    let sys = EigenSystem::new(k)?;
    Ok((0..k).all(|m| {
        (0..k).all(|j| {
            let expected = if m == j {
                ExactRational::one()
            } else {
                ExactRational::zero()
            };
            dot(sys.left(m), sys.right(j)) == expected
        })
    }))
}

/// `sum_j |s(k, k-j)| / k! = 1`.
pub fn verify_ckj_sum(k: usize) -> bool {
    let sum: BigInt = (0..k)
        .map(|j| stirling_first_unsigned(k, (k - j) as i64))
        .sum();
    sum == factorial(k)
}

/// Spectral expansion of the return count at the corner entry:
/// `sum_j c_{k,j} M^{-j} = C(M + k - 1, k) / M^k` for `M = N^n`, `n <= n_max`.
pub fn verify_spectral_return_identity(k: usize, base: u32, n_max: u32) -> bool {
    let kf = factorial(k);
    for n in 1..=n_max {
        let m = BigInt::from(base).pow(n);
        let mut lhs = ExactRational::zero();
        for j in 0..k {
            let c = ExactRational::new(stirling_first_unsigned(k, (k - j) as i64), kf.clone());
            lhs += c * ExactRational::new(BigInt::one(), m.pow(j as u32));
        }
        let rhs = ExactRational::new(
            binomial_big(&(&m + BigInt::from(k - 1)), k),
            m.pow(k as u32),
        );
        if lhs != rhs {
            return false;
        }
    }
    true
}
