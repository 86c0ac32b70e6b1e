//! Cascade-free enumeration with restricted transfer matrices.
//!
//! Striking a set `F` of forbidden carry states out of the count matrix
//! leaves a principal submatrix whose powers count digit sequences whose
//! carry trajectory avoids `F`:
//!
//! ```text
//! a(L) = 1^T (restricted count)^L e_0 .
//! ```
//!
//! The avoidance count satisfies the linear recurrence read off the
//! characteristic polynomial of the restricted matrix.  When the restricted
//! matrix is 1x1 the count is geometric; when it is 2x2 the count is governed
//! by `(trace, det)` through the scaled Chebyshev recurrence; in dimension 3
//! and above, simple eigenvalues plus nonvanishing residues certify that no
//! scaled Chebyshev parametrization exists at all ([`threshold_classify`]).
//!
//! [`BinaryChain`] is the two-state GEN/PROP/KILL model: `g` digits generate
//! a carry, `t` propagate the current state, `r` kill it, `g + t + r = N`.
//! Its transfer matrix has trace `N` and determinant `g*t`, which classify
//! the chain completely.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{
    factorial, poly_mat_det, rat_big, scaled_chebyshev, stirling_first_unsigned, ExactRational,
    RatMatrix, RatPolynomial,
};
use crate::holte::HolteSystem;

/// Per-call enumeration budget for the brute-force oracle.
pub const BRUTE_FORCE_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CascadeError {
    #[error("forbidden set must be a nonempty proper subset of the {k} carry states")]
    InvalidForbidden { k: usize },
    #[error("forbidden state {state} is out of range for {k} states")]
    ForbiddenOutOfRange { state: usize, k: usize },
    #[error("brute force needs {needed} sequence enumerations, over the {budget} budget")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("Chebyshev identity check needs a 2x2 transfer matrix (got {d}x{d})")]
    WrongDimension { d: usize },
    #[error("digit classes {g} + {t} + {r} must sum to the base {base}")]
    InconsistentChain { base: u32, g: u32, t: u32, r: u32 },
    #[error("dispersion index undefined: no generate or kill digits (t = N)")]
    DegenerateChain,
}

/// Anything that counts avoided sequences through powers of an integer
/// transfer matrix started at carry state 0.
pub trait TransferSource {
    /// The integer transfer matrix.
    fn transfer_count(&self) -> RatMatrix;
    /// Index of original carry state 0 inside the matrix, if it survives.
    fn start_index(&self) -> Option<usize>;
}

/// A carry system restricted to the states outside a forbidden set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CascadeSpec {
    k: usize,
    base: u32,
    forbidden: BTreeSet<usize>,
    kept: Vec<usize>,
    restricted_count: RatMatrix,
}

impl CascadeSpec {
    pub fn summands(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn forbidden(&self) -> &BTreeSet<usize> {
        &self.forbidden
    }

    /// Kept states in their original order.
    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    /// Dimension of the restricted matrix.
    pub fn dimension(&self) -> usize {
        self.kept.len()
    }

    pub fn restricted_count(&self) -> &RatMatrix {
        &self.restricted_count
    }
}

impl TransferSource for CascadeSpec {
    fn transfer_count(&self) -> RatMatrix {
        self.restricted_count.clone()
    }

    fn start_index(&self) -> Option<usize> {
        self.kept.iter().position(|&s| s == 0)
    }
}

/// Principal submatrix of the count matrix on the non-forbidden states.
pub fn restrict(sys: &HolteSystem, forbidden: &BTreeSet<usize>) -> Result<CascadeSpec, CascadeError> {
    let k = sys.summands();
    if forbidden.is_empty() || forbidden.len() >= k {
        return Err(CascadeError::InvalidForbidden { k });
    }
    if let Some(&state) = forbidden.iter().find(|&&s| s >= k) {
        return Err(CascadeError::ForbiddenOutOfRange { state, k });
    }
    let kept: Vec<usize> = (0..k).filter(|s| !forbidden.contains(s)).collect();
    let restricted_count = sys.count_matrix().principal_submatrix(&kept);
    Ok(CascadeSpec {
        k,
        base: sys.base(),
        forbidden: forbidden.clone(),
        kept,
        restricted_count,
    })
}

/// Two-state GEN/PROP/KILL chain over an alphabet of size `N = g + t + r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinaryChain {
    base: u32,
    generate: u32,
    propagate: u32,
    kill: u32,
}

impl BinaryChain {
    pub fn new(base: u32, generate: u32, propagate: u32, kill: u32) -> Result<Self, CascadeError> {
        if generate + propagate + kill != base || base == 0 {
            return Err(CascadeError::InconsistentChain {
                base,
                g: generate,
                t: propagate,
                r: kill,
            });
        }
        Ok(Self {
            base,
            generate,
            propagate,
            kill,
        })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn generate(&self) -> u32 {
        self.generate
    }

    pub fn propagate(&self) -> u32 {
        self.propagate
    }

    pub fn kill(&self) -> u32 {
        self.kill
    }

    /// Trace of the transfer matrix; equals the alphabet size.
    pub fn trace(&self) -> ExactRational {
        rat_big(BigInt::from(self.base))
    }

    /// Determinant `g * t` of the transfer matrix.
    pub fn determinant(&self) -> ExactRational {
        rat_big(BigInt::from(self.generate) * BigInt::from(self.propagate))
    }

    /// The transfer matrix in the crate-wide `[to, from]` orientation.
    ///
    /// From state 0, kill and propagate digits stay at 0 and generate digits
    /// move to 1; from state 1, kill digits return to 0, generate digits
    /// start a fresh carry, and propagate digits (which would extend a carry
    /// chain) are excluded.  Trace is `N` and determinant is `g*t`.
    pub fn count_matrix(&self) -> RatMatrix {
        let e = |v: u32| rat_big(BigInt::from(v));
        RatMatrix::new(
            2,
            2,
            vec![
                e(self.kill + self.propagate),
                e(self.kill),
                e(self.generate),
                e(self.generate),
            ],
        )
    }
}

impl TransferSource for BinaryChain {
    fn transfer_count(&self) -> RatMatrix {
        self.count_matrix()
    }

    fn start_index(&self) -> Option<usize> {
        Some(0)
    }
}

fn to_bigint(x: &ExactRational) -> BigInt {
    assert!(x.is_integer(), "count is not an integer: {x}");
    x.to_integer()
}

/// `a(L) = 1^T M^L e_0` by repeated squaring.
pub fn avoidance_count<S: TransferSource>(source: &S, l: u32) -> BigInt {
    let matrix = source.transfer_count();
    let Some(start) = source.start_index() else {
        return BigInt::zero();
    };
    let power = matrix.pow(l);
    let sum = (0..power.rows())
        .map(|r| power.get(r, start).clone())
        .fold(ExactRational::zero(), |acc, t| acc + t);
    to_bigint(&sum)
}

/// The sequence `a(0), ..., a(l_max)` by iterated matrix-vector products.
pub fn avoidance_sequence<S: TransferSource>(source: &S, l_max: u32) -> Vec<BigInt> {
    let matrix = source.transfer_count();
    let d = matrix.rows();
    let mut v = vec![ExactRational::zero(); d];
    if let Some(start) = source.start_index() {
        v[start] = ExactRational::one();
    }
    let mut out = Vec::with_capacity(l_max as usize + 1);
    for _ in 0..=l_max {
        let total = v.iter().fold(ExactRational::zero(), |acc, t| acc + t);
        out.push(to_bigint(&total));
        v = matrix.matvec(&v);
    }
    out
}

/// Count length-`l` sequences of digit k-tuples whose carry trajectory from
/// state 0 (inclusive) never enters the forbidden set, by direct simulation
/// of every one of the `N^(k l)` sequences.
pub fn avoidance_brute_force(
    k: usize,
    base: u32,
    forbidden: &BTreeSet<usize>,
    l: u32,
) -> Result<BigInt, CascadeError> {
    avoidance_brute_force_with_budget(k, base, forbidden, l, BRUTE_FORCE_BUDGET)
}

/// Same as [`avoidance_brute_force`] with an explicit enumeration budget.
pub fn avoidance_brute_force_with_budget(
    k: usize,
    base: u32,
    forbidden: &BTreeSet<usize>,
    l: u32,
    budget: u128,
) -> Result<BigInt, CascadeError> {
    assert!(k >= 1 && base >= 2);
    if forbidden.contains(&0) {
        return Ok(BigInt::zero());
    }
    let digits = k as u32 * l;
    let needed = (base as u128)
        .checked_pow(digits)
        .unwrap_or(u128::MAX);
    if needed > budget {
        return Err(CascadeError::BudgetExceeded { needed, budget });
    }
    let b = base as u128;
    let mut survivors: u64 = 0;
    'seq: for index in 0..needed {
        let mut rest = index;
        let mut carry = 0u128;
        for _ in 0..l {
            let mut sum = carry;
            for _ in 0..k {
                sum += rest % b;
                rest /= b;
            }
            carry = sum / b;
            if forbidden.contains(&(carry as usize)) {
                continue 'seq;
            }
        }
        survivors += 1;
    }
    Ok(BigInt::from(survivors))
}

/// The sequence satisfies the linear recurrence whose coefficients are read
/// off the characteristic polynomial of the transfer matrix, for
/// `d <= L <= l_max`.
pub fn verify_recurrence<S: TransferSource>(source: &S, l_max: u32) -> bool {
    let matrix = source.transfer_count();
    let d = matrix.rows();
    let chi = matrix.char_poly();
    let seq = avoidance_sequence(source, l_max);
    for l in d..=l_max as usize {
        // monic chi: a(L) + sum_{i<d} chi_i a(L - d + i) = 0
        let mut acc = rat_big(seq[l].clone());
        for i in 0..d {
            acc += chi.coeff(i) * rat_big(seq[l - d + i].clone());
        }
        if !acc.is_zero() {
            return false;
        }
    }
    true
}

/// `a(L)` equals the scaled Chebyshev value `S_L(trace, det)` for all
/// `L <= l_max`.  Requires a 2x2 transfer matrix.
pub fn chebyshev_check<S: TransferSource>(source: &S, l_max: u32) -> Result<bool, CascadeError> {
    let matrix = source.transfer_count();
    if matrix.rows() != 2 {
        return Err(CascadeError::WrongDimension { d: matrix.rows() });
    }
    let tau = matrix.trace();
    let delta = matrix.determinant();
    let seq = avoidance_sequence(source, l_max);
    Ok((0..=l_max).all(|l| {
        rat_big(seq[l as usize].clone()) == scaled_chebyshev(l, &tau, &delta)
    }))
}

/// Characteristic polynomial of the tail-restricted count matrix
/// (`F = {k-1}`) as the Stirling-weighted interpolation
/// `(1/k!) sum_j |s(k, k-j)| prod_{i != j} (lambda - N^{k-i})`.
pub fn stirling_lagrange_charpoly(k: usize, base: u32) -> RatPolynomial {
    assert!(k >= 2 && base >= 2);
    let nodes: Vec<RatPolynomial> = (0..k)
        .map(|i| {
            RatPolynomial::new(vec![
                -rat_big(BigInt::from(base).pow((k - i) as u32)),
                ExactRational::one(),
            ])
        })
        .collect();
    let mut sum = RatPolynomial::zero();
    for j in 0..k {
        let mut prod = RatPolynomial::constant(rat_big(stirling_first_unsigned(
            k,
            (k - j) as i64,
        )));
        for (i, node) in nodes.iter().enumerate() {
            if i != j {
                prod = prod.mul(node);
            }
        }
        sum = sum.add(&prod);
    }
    sum.scale(&ExactRational::new(BigInt::one(), factorial(k)))
}

/// Closed form for the determinant of the tail-restricted count matrix:
/// `N^C(k,2) / k! * prod_{i=1}^{k-1} (iN + 1)`.
pub fn det_restricted_formula(k: usize, base: u32) -> ExactRational {
    assert!(k >= 2 && base >= 2);
    let mut num = BigInt::from(base).pow((k * (k - 1) / 2) as u32);
    for i in 1..k {
        num *= BigInt::from(i as u64) * BigInt::from(base) + BigInt::one();
    }
    ExactRational::new(num, factorial(k))
}

/// Certificates backing a threshold verdict in dimension >= 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdCertificates {
    /// Characteristic polynomial of the restricted count matrix.
    pub char_poly: RatPolynomial,
    /// Denominator `Q(z) = det(I - z M)` of the generating function.
    pub denominator: RatPolynomial,
    /// Numerator `P(z) = 1^T adj(I - z M) e_0`.
    pub numerator: RatPolynomial,
    /// `gcd(char_poly, char_poly')`; constant means simple eigenvalues.
    pub char_squarefree_gcd: RatPolynomial,
    /// `gcd(P, Q)`; constant means no pole cancels.
    pub residue_gcd: RatPolynomial,
    /// Simple-eigenvalue hypothesis.
    pub simple_spectrum: bool,
    /// Nonvanishing-residue hypothesis.
    pub nonvanishing_residues: bool,
    /// Degree of the denominator after cancelling `gcd(P, Q)`.
    pub reduced_denominator_degree: usize,
}

/// Whether the avoidance count admits a closed form, and of which kind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThresholdVerdict {
    /// One retained state: `a(L) = rate^L`.
    Geometric { rate: ExactRational },
    /// Two retained states: `a(L)` is governed by `(trace, det)` through the
    /// scaled Chebyshev recurrence.
    Chebyshev {
        trace: ExactRational,
        determinant: ExactRational,
    },
    /// Reduced generating-function denominator of degree >= 3 with both
    /// hypotheses certified: no scaled Chebyshev parametrization exists.
    NoChebyshev { certificates: ThresholdCertificates },
    /// A hypothesis failed, so the dichotomy does not decide this instance.
    Undetermined { certificates: ThresholdCertificates },
}

impl ThresholdVerdict {
    pub fn kind(&self) -> &'static str {
        match self {
            ThresholdVerdict::Geometric { .. } => "Geometric",
            ThresholdVerdict::Chebyshev { .. } => "Chebyshev",
            ThresholdVerdict::NoChebyshev { .. } => "NoChebyshev",
            ThresholdVerdict::Undetermined { .. } => "Undetermined",
        }
    }
}

/// Generating-function numerator `P(z) = 1^T adj(I - z M) e_0`.
fn numerator_poly(matrix: &RatMatrix, start: usize) -> RatPolynomial {
    let d = matrix.rows();
    if d == 1 {
        return RatPolynomial::one();
    }
    let entry = |r: usize, c: usize| -> RatPolynomial {
        let constant = if r == c {
            ExactRational::one()
        } else {
            ExactRational::zero()
        };
        RatPolynomial::new(vec![constant, -matrix.get(r, c).clone()])
    };
    let mut p = RatPolynomial::zero();
    for i in 0..d {
        // adj[i][start] = (-1)^(i+start) det(M without row `start`, column i)
        let minor: Vec<Vec<RatPolynomial>> = (0..d)
            .filter(|&r| r != start)
            .map(|r| (0..d).filter(|&c| c != i).map(|c| entry(r, c)).collect())
            .collect();
        let det = poly_mat_det(&minor);
        let term = det;
        p = if (i + start).is_multiple_of(2) {
            p.add(&term)
        } else {
            p.sub(&term)
        };
    }
    p
}

/// Generating-function denominator `Q(z) = det(I - z M)`.
fn denominator_poly(matrix: &RatMatrix) -> RatPolynomial {
    let d = matrix.rows();
    let entries: Vec<Vec<RatPolynomial>> = (0..d)
        .map(|r| {
            (0..d)
                .map(|c| {
                    let constant = if r == c {
                        ExactRational::one()
                    } else {
                        ExactRational::zero()
                    };
                    RatPolynomial::new(vec![constant, -matrix.get(r, c).clone()])
                })
                .collect()
        })
        .collect();
    poly_mat_det(&entries)
}

/// Decide the closed-form regime of a restriction.
///
/// Dimension 1 is geometric, dimension 2 is the `(trace, det)` Chebyshev
/// regime.  In dimension >= 3 the generating function `A(z) = P(z)/Q(z)` is
/// computed exactly; constant `gcd(char_poly, char_poly')` certifies simple
/// eigenvalues, constant `gcd(P, Q)` certifies nonvanishing residues, and a
/// reduced denominator of degree >= 3 rules out any Chebyshev form.
pub fn threshold_classify(spec: &CascadeSpec) -> ThresholdVerdict {
    let matrix = spec.restricted_count();
    let d = matrix.rows();
    match d {
        1 => ThresholdVerdict::Geometric {
            rate: matrix.get(0, 0).clone(),
        },
        2 => ThresholdVerdict::Chebyshev {
            trace: matrix.trace(),
            determinant: matrix.determinant(),
        },
        _ => {
            let chi = matrix.char_poly();
            let char_squarefree_gcd = chi.gcd(&chi.derivative());
            let simple_spectrum = char_squarefree_gcd.is_constant();
            // With state 0 forbidden the count is identically zero, so the
            // generating function has a zero numerator.
            let numerator = match spec.start_index() {
                Some(start) => numerator_poly(matrix, start),
                None => RatPolynomial::zero(),
            };
            let denominator = denominator_poly(matrix);
            let residue_gcd = numerator.gcd(&denominator);
            let nonvanishing_residues = residue_gcd.is_constant();
            let reduced_denominator_degree = denominator.degree().unwrap_or(0)
                - residue_gcd.degree().unwrap_or(0);
            let certificates = ThresholdCertificates {
                char_poly: chi,
                denominator,
                numerator,
                char_squarefree_gcd,
                residue_gcd,
                simple_spectrum,
                nonvanishing_residues,
                reduced_denominator_degree,
            };
            if simple_spectrum && nonvanishing_residues && reduced_denominator_degree >= 3 {
                ThresholdVerdict::NoChebyshev { certificates }
            } else {
                ThresholdVerdict::Undetermined { certificates }
            }
        }
    }
}

/// Strict sign alternation of the tail-restricted characteristic polynomial
/// at the nodes `N^k, N^(k-1), ..., N`, certifying one eigenvalue in each
/// gap between consecutive full-matrix eigenvalues.
pub fn interlacing_certificate(k: usize, base: u32) -> bool {
    let chi = stirling_lagrange_charpoly(k, base);
    let mut expected_positive = true;
    for j in 0..k {
        let node = rat_big(BigInt::from(base).pow((k - j) as u32));
        let value = chi.eval(&node);
        let ok = if expected_positive {
            value.is_positive()
        } else {
            value.is_negative()
        };
        if !ok {
            return false;
        }
        expected_positive = !expected_positive;
    }
    true
}

/// Asymptotic variance-to-mean regime of a binary chain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DispersionRegime {
    Overdispersed,
    Poisson,
    Underdispersed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dispersion {
    /// `D = pi_0 (1 + mu) / (1 - mu)` with `pi_0 = r/(g+r)`, `mu = t/N`.
    pub index: ExactRational,
    pub regime: DispersionRegime,
}

/// Limiting dispersion index of the carry-occurrence count; Poisson exactly
/// when `2rt = g(g + r)`.
pub fn dispersion_index(chain: &BinaryChain) -> Result<Dispersion, CascadeError> {
    let (g, t, r, n) = (
        chain.generate() as i64,
        chain.propagate() as i64,
        chain.kill() as i64,
        chain.base() as i64,
    );
    if g + r == 0 {
        return Err(CascadeError::DegenerateChain);
    }
    let pi0 = ExactRational::new(BigInt::from(r), BigInt::from(g + r));
    let mu = ExactRational::new(BigInt::from(t), BigInt::from(n));
    let one = ExactRational::one();
    let index = pi0 * (&one + &mu) / (&one - &mu);
    let regime = match index.cmp(&one) {
        std::cmp::Ordering::Greater => DispersionRegime::Overdispersed,
        std::cmp::Ordering::Equal => DispersionRegime::Poisson,
        std::cmp::Ordering::Less => DispersionRegime::Underdispersed,
    };
    debug_assert_eq!(
        regime == DispersionRegime::Poisson,
        2 * r * t == g * (g + r),
        "Poisson condition 2rt = g(g+r) out of sync"
    );
    Ok(Dispersion { index, regime })
}
