//! The carry transition matrix for k-summand base-N addition and its
//! structural certificates.
//!
//! With `k` digits drawn uniformly from `{0, ..., N-1}` and incoming carry
//! `c`, the outgoing carry is `c' = floor((d_1 + ... + d_k + c) / N)`.  The
//! count matrix tallies digit tuples per transition,
//!
//! ```text
//! count[c', c] = sum of B_k(s) over  c'N - c <= s <= (c'+1)N - c - 1,
//! ```
//!
//! where `B_k` is the k-fold convolution of the all-ones window of length
//! `N`; out-of-range `s` contribute zero.  The probability matrix divides by
//! `N^k`.  Matrices are column-stochastic: entry `[c', c]` is the transition
//! from incoming carry `c` (column) to outgoing carry `c'` (row).

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{
    eulerian_row, factorial, rat_big, ExactRational, RatMatrix,
};

/// Largest matrix dimension for which every minor is enumerated.
pub const MINOR_ENUMERATION_MAX_DIM: usize = 8;
/// Largest `N^k` for which digit tuples are enumerated exhaustively.
pub const TUPLE_ENUMERATION_BUDGET: u128 = 1_000_000;
/// Largest `N^k` for which the transition counts are re-derived by brute force.
pub const TRANSITION_BRUTE_FORCE_BUDGET: u128 = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HolteError {
    #[error("matrix dimension {dim} exceeds the exhaustive-minor cap {max}")]
    DimensionTooLarge { dim: usize, max: usize },
    #[error("instance needs {needed} enumeration steps, over the {budget} budget")]
    BudgetExceeded { needed: u128, budget: u128 },
}

/// Counts of digit-tuple sums: `counts[s]` is the number of k-tuples over
/// `{0, ..., N-1}` summing to `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSumProfile {
    k: usize,
    base: u32,
    counts: Vec<BigInt>,
}

impl DigitSumProfile {
    pub fn summands(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn counts(&self) -> &[BigInt] {
        &self.counts
    }

    /// `B_k(s)`, zero off-support.
    pub fn count(&self, s: i64) -> BigInt {
        if s < 0 || s as usize >= self.counts.len() {
            BigInt::zero()
        } else {
            self.counts[s as usize].clone()
        }
    }

    pub fn total(&self) -> BigInt {
        self.counts.iter().sum()
    }

    /// `B_k(s) = B_k(k(N-1) - s)`.
    pub fn is_symmetric(&self) -> bool {
        let n = self.counts.len();
        (0..n).all(|s| self.counts[s] == self.counts[n - 1 - s])
    }

    /// `B_k(s)^2 >= B_k(s-1) B_k(s+1)` across the support.
    pub fn is_log_concave(&self) -> bool {
        let n = self.counts.len();
        (1..n.saturating_sub(1))
            .all(|s| &self.counts[s] * &self.counts[s] >= &self.counts[s - 1] * &self.counts[s + 1])
    }
}

/// Iterated convolution of the all-ones window of length `base`.
pub fn digit_sum_counts(k: usize, base: u32) -> DigitSumProfile {
    assert!(k >= 1 && base >= 2, "digit_sum_counts needs k >= 1, base >= 2");
    let n = base as usize;
    let mut counts = vec![BigInt::one(); n];
    for _ in 1..k {
        let mut next = vec![BigInt::zero(); counts.len() + n - 1];
        for (s, v) in counts.iter().enumerate() {
            if v.is_zero() {
                continue;
            }
            for d in 0..n {
                next[s + d] += v;
            }
        }
        counts = next;
    }
    DigitSumProfile { k, base, counts }
}

/// A (k, N) carry chain: integer count matrix and its probability version.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HolteSystem {
    k: usize,
    base: u32,
    count_matrix: RatMatrix,
    prob_matrix: RatMatrix,
}

impl HolteSystem {
    pub fn summands(&self) -> usize {
        self.k
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    /// Integer transition counts; columns sum to `N^k`.
    pub fn count_matrix(&self) -> &RatMatrix {
        &self.count_matrix
    }

    /// Column-stochastic transition probabilities.
    pub fn prob_matrix(&self) -> &RatMatrix {
        &self.prob_matrix
    }

    /// `N^k` as a big integer.
    pub fn tuple_count(&self) -> BigInt {
        BigInt::from(self.base).pow(self.k as u32)
    }
}

/// Construct the carry system for `k >= 2` summands in base `N >= 2`.
pub fn build_holte(k: usize, base: u32) -> HolteSystem {
    assert!(k >= 2 && base >= 2, "build_holte needs k >= 2, base >= 2");
    let profile = digit_sum_counts(k, base);
    let n = base as i64;
    let count_matrix = RatMatrix::from_fn(k, k, |to, from| {
        let lo = to as i64 * n - from as i64;
        let hi = lo + n - 1;
        let mut sum = BigInt::zero();
        for s in lo..=hi {
            sum += profile.count(s);
        }
        rat_big(sum)
    });
    let scale = ExactRational::new(BigInt::one(), BigInt::from(base).pow(k as u32));
    let prob_matrix = count_matrix.scale(&scale);
    HolteSystem {
        k,
        base,
        count_matrix,
        prob_matrix,
    }
}

/// Stationary distribution `pi_i = A(k, i) / k!`, independent of the base.
pub fn stationary_distribution(k: usize) -> Vec<ExactRational> {
    assert!(k >= 2);
    let kf = factorial(k);
    eulerian_row(k)
        .into_iter()
        .map(|a| ExactRational::new(a, kf.clone()))
        .collect()
}

/// `m[i, j] == m[dim-1-i, dim-1-j]` for all entries.
pub fn matrix_centrosymmetric(m: &RatMatrix) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    (0..rows).all(|i| (0..cols).all(|j| m.get(i, j) == m.get(rows - 1 - i, cols - 1 - j)))
}

/// Centrosymmetry of the carry chain under digit complementation.
pub fn check_centrosymmetry(sys: &HolteSystem) -> bool {
    matrix_centrosymmetric(sys.count_matrix())
}

/// `count^n[0, 0] = C(N^n + k - 1, k)` for `1 <= n <= n_max`: tuples of
/// n-digit numbers whose carry returns to zero are exactly those with
/// `a_1 + ... + a_k < N^n`.
pub fn verify_return_count(sys: &HolteSystem, n_max: u32) -> bool {
    let k = sys.summands();
    let mut power = RatMatrix::identity(k);
    for n in 1..=n_max {
        power = sys.count_matrix().mul(&power);
        let base_pow = BigInt::from(sys.base()).pow(n);
        let expected = crate::exactnum::binomial_big(&(base_pow + BigInt::from(k - 1)), k);
        if power.get(0, 0) != &rat_big(expected) {
            return false;
        }
    }
    true
}

/// Every minor of every order is nonnegative.  Exhaustive, so the dimension
/// is capped at [`MINOR_ENUMERATION_MAX_DIM`].
pub fn is_totally_nonnegative(m: &RatMatrix) -> Result<bool, HolteError> {
    assert!(m.is_square());
    let n = m.rows();
    if n > MINOR_ENUMERATION_MAX_DIM {
        return Err(HolteError::DimensionTooLarge {
            dim: n,
            max: MINOR_ENUMERATION_MAX_DIM,
        });
    }
    let subsets: Vec<Vec<usize>> = (1u32..(1 << n))
        .map(|mask| (0..n).filter(|i| mask & (1 << i) != 0).collect())
        .collect();
    for rows in &subsets {
        for cols in &subsets {
            if rows.len() != cols.len() {
                continue;
            }
            if m.minor_det(rows, cols).is_negative() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Totally nonnegative, nonsingular, and some power entrywise positive
/// (power exponent capped at `dim^2`).
pub fn is_oscillatory(m: &RatMatrix) -> Result<bool, HolteError> {
    if !is_totally_nonnegative(m)? {
        return Ok(false);
    }
    if m.determinant().is_zero() {
        return Ok(false);
    }
    let n = m.rows();
    let mut power = m.clone();
    for _ in 1..=n * n {
        if power.is_entrywise_positive() {
            return Ok(true);
        }
        power = power.mul(m);
    }
    Ok(power.is_entrywise_positive())
}

/// A detailed-balance violation: `pi[from] T[to, from] != pi[to] T[from, to]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReversibilityDefect {
    pub from: usize,
    pub to: usize,
    /// `pi[from] * T[to, from]`
    pub forward: ExactRational,
    /// `pi[to] * T[from, to]`
    pub backward: ExactRational,
}

/// All unordered state pairs violating detailed balance; empty for k = 2, 3.
pub fn reversibility_defect(sys: &HolteSystem) -> Vec<ReversibilityDefect> {
    let k = sys.summands();
    let pi = stationary_distribution(k);
    let t = sys.prob_matrix();
    let mut defects = Vec::new();
    for from in 0..k {
        for to in from + 1..k {
            let forward = &pi[from] * t.get(to, from);
            let backward = &pi[to] * t.get(from, to);
            if forward != backward {
                defects.push(ReversibilityDefect {
                    from,
                    to,
                    forward,
                    backward,
                });
            }
        }
    }
    defects
}

/// Brute-force check that `(S + c) mod N` is exactly uniform over all `N^k`
/// digit tuples: every residue is hit `N^{k-1}` times.
pub fn verify_uniform_residue(k: usize, base: u32, carry: u64) -> Result<bool, HolteError> {
    assert!(k >= 1 && base >= 2);
    let total = (base as u128).pow(k as u32);
    if total > TUPLE_ENUMERATION_BUDGET {
        return Err(HolteError::BudgetExceeded {
            needed: total,
            budget: TUPLE_ENUMERATION_BUDGET,
        });
    }
    let mut hits = vec![0u128; base as usize];
    for index in 0..total {
        let mut rest = index;
        let mut sum = carry as u128;
        for _ in 0..k {
            sum += rest % base as u128;
            rest /= base as u128;
        }
        hits[(sum % base as u128) as usize] += 1;
    }
    let expected = total / base as u128;
    Ok(hits.iter().all(|&h| h == expected))
}

/// Independent derivation of the count matrix: enumerate all digit tuples for
/// each incoming carry and tally the outgoing carries.
pub fn transition_counts_brute_force(k: usize, base: u32) -> Result<RatMatrix, HolteError> {
    assert!(k >= 2 && base >= 2);
    let total = (base as u128).pow(k as u32);
    if total > TRANSITION_BRUTE_FORCE_BUDGET {
        return Err(HolteError::BudgetExceeded {
            needed: total,
            budget: TRANSITION_BRUTE_FORCE_BUDGET,
        });
    }
    let mut counts = vec![vec![0u128; k]; k];
    for index in 0..total {
        let mut rest = index;
        let mut sum = 0u128;
        for _ in 0..k {
            sum += rest % base as u128;
            rest /= base as u128;
        }
        for carry_in in 0..k {
            let carry_out = ((sum + carry_in as u128) / base as u128) as usize;
            counts[carry_out][carry_in] += 1;
        }
    }
    Ok(RatMatrix::from_fn(k, k, |to, from| {
        rat_big(BigInt::from(counts[to][from]))
    }))
}
