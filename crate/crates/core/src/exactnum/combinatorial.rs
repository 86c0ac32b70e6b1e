//! Combinatorial number families: binomials, Eulerian and unsigned Stirling
//! triangles, elementary symmetric polynomials, Fibonacci numbers, and the
//! scaled Chebyshev recurrence.
//!
//! The Eulerian and Stirling triangles are computed by their standard
//! recurrences and memoized one row at a time behind a mutex, so concurrent
//! callers are safe.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ExactRational;

static EULERIAN_ROWS: Mutex<Vec<Vec<BigInt>>> = Mutex::new(Vec::new());
static STIRLING_ROWS: Mutex<Vec<Vec<BigInt>>> = Mutex::new(Vec::new());

/// `n!` as a big integer.
pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Binomial coefficient `C(n, k)`, zero when `k < 0` or `k > n`.
pub fn binomial(n: u64, k: i64) -> BigInt {
    if k < 0 || k as u64 > n {
        return BigInt::zero();
    }
    binomial_big(&BigInt::from(n), k as usize)
}

/// Binomial coefficient with a big-integer upper index `n >= 0`.
pub fn binomial_big(n: &BigInt, k: usize) -> BigInt {
    debug_assert!(!n.is_negative(), "binomial_big expects n >= 0");
    if n < &BigInt::from(k) {
        return BigInt::zero();
    }
    let mut result = BigInt::one();
    for i in 1..=k {
        // (n - k + i) is positive here, and the running product is always
        // divisible by i.
        result = result * (n - BigInt::from(k - i)) / BigInt::from(i);
    }
    result
}

/// The row `A(n, 0..n)` of the Eulerian triangle (`A(0, .) = [1]`).
pub fn eulerian_row(n: usize) -> Vec<BigInt> {
    let mut rows = EULERIAN_ROWS.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigInt::one()]); // n = 0
    }
    while rows.len() <= n {
        let m = rows.len(); // building row m from row m - 1
        let prev = &rows[m - 1];
        let at = |i: isize| -> BigInt {
            if i < 0 || i as usize >= prev.len() {
                BigInt::zero()
            } else {
                prev[i as usize].clone()
            }
        };
        let mut row = Vec::with_capacity(m);
        for i in 0..m {
            let i = i as isize;
            // A(m, i) = (i+1) A(m-1, i) + (m-i) A(m-1, i-1)
            row.push(BigInt::from(i + 1) * at(i) + BigInt::from(m as isize - i) * at(i - 1));
        }
        rows.push(row);
    }
    rows[n].clone()
}

/// Eulerian number `A(n, i)` for `n >= 1`; zero for `i < 0` or `i >= n`.
pub fn eulerian(n: usize, i: i64) -> BigInt {
    assert!(n >= 1, "eulerian requires n >= 1");
    if i < 0 || i as usize >= n {
        return BigInt::zero();
    }
    eulerian_row(n)[i as usize].clone()
}

/// `A(n, i)` by the alternating binomial sum, as an independent cross-check
/// of the triangular recurrence.
pub fn eulerian_explicit(n: usize, i: i64) -> BigInt {
    assert!(n >= 1, "eulerian_explicit requires n >= 1");
    if i < 0 || i as usize >= n {
        return BigInt::zero();
    }
    let i = i as u64;
    let mut sum = BigInt::zero();
    for j in 0..=i {
        let term = binomial(n as u64 + 1, j as i64) * BigInt::from(i + 1 - j).pow(n as u32);
        if j % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    sum
}

/// The row `|s(n, 0..=n)|` of the unsigned Stirling triangle of the first kind.
pub fn stirling_row(n: usize) -> Vec<BigInt> {
    let mut rows = STIRLING_ROWS.lock().unwrap();
    if rows.is_empty() {
        rows.push(vec![BigInt::one()]); // |s(0, 0)| = 1
    }
    while rows.len() <= n {
        let m = rows.len();
        let prev = &rows[m - 1];
        let at = |j: isize| -> BigInt {
            if j < 0 || j as usize >= prev.len() {
                BigInt::zero()
            } else {
                prev[j as usize].clone()
            }
        };
        // |s(m, j)| = |s(m-1, j-1)| + (m-1) |s(m-1, j)|
        let row = (0..=m)
            .map(|j| at(j as isize - 1) + BigInt::from(m - 1) * at(j as isize))
            .collect();
        rows.push(row);
    }
    rows[n].clone()
}

/// Unsigned Stirling number of the first kind `|s(n, m)|`; zero outside
/// `0 <= m <= n`.
pub fn stirling_first_unsigned(n: usize, m: i64) -> BigInt {
    if m < 0 || m as usize > n {
        return BigInt::zero();
    }
    stirling_row(n)[m as usize].clone()
}

/// Elementary symmetric polynomial `e_j` of the given values (`e_0 = 1`).
pub fn elementary_symmetric(j: usize, values: &[i64]) -> BigInt {
    assert!(j <= values.len(), "e_j needs at least j values");
    let mut acc = vec![BigInt::zero(); j + 1];
    acc[0] = BigInt::one();
    for &v in values {
        for m in (1..=j).rev() {
            let add = &acc[m - 1] * BigInt::from(v);
            acc[m] += add;
        }
    }
    acc[j].clone()
}

/// Fibonacci number `F(n)` with `F(0) = 0`, `F(1) = 1`.
pub fn fibonacci(n: u64) -> BigInt {
    let (mut a, mut b) = (BigInt::zero(), BigInt::one());
    for _ in 0..n {
        let next = &a + &b;
        a = b;
        b = next;
    }
    a
}

/// The scaled Chebyshev sequence `S_0 = 1`, `S_1 = tau`,
/// `S_L = tau S_{L-1} - delta S_{L-2}`.
///
/// When `delta = d^2` this is `d^L U_L(tau / 2d)` with `U_L` the Chebyshev
/// polynomial of the second kind; the recurrence form keeps everything
/// rational even when `delta` is not a perfect square.
pub fn scaled_chebyshev(l: u32, tau: &ExactRational, delta: &ExactRational) -> ExactRational {
    match l {
        0 => return ExactRational::one(),
        1 => return tau.clone(),
        _ => {}
    }
    let mut prev = ExactRational::one();
    let mut cur = tau.clone();
    for _ in 2..=l {
        let next = tau * &cur - delta * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Check `n^k = sum_c w[c] * C(n + k - 1 - c, k)` for `0 <= n <= n_max` with
/// an arbitrary weight list, so deliberately perturbed weights can be seen to
/// fail.
pub fn worpitzky_holds_with_weights(k: usize, n_max: u64, weights: &[BigInt]) -> bool {
    for n in 0..=n_max {
        let mut sum = BigInt::zero();
        for (c, w) in weights.iter().enumerate() {
            let upper = n as i64 + k as i64 - 1 - c as i64;
            if upper >= 0 {
                sum += w * binomial(upper as u64, k as i64);
            }
        }
        if sum != BigInt::from(n).pow(k as u32) {
            return false;
        }
    }
    true
}

/// Worpitzky identity `n^k = sum_c A(k, c) C(n + k - 1 - c, k)` for all
/// `0 <= n <= n_max`.
pub fn verify_worpitzky(k: usize, n_max: u64) -> bool {
    assert!(k >= 1);
    worpitzky_holds_with_weights(k, n_max, &eulerian_row(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_big, rat_int};

    #[test]
    fn binomial_small_cases() {
        assert_eq!(binomial(4, 2), BigInt::from(6));
        assert_eq!(binomial(4, -1), BigInt::zero());
        assert_eq!(binomial(3, 2), BigInt::from(3));
        assert_eq!(binomial(3, 5), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn eulerian_table_values() {
        assert_eq!(eulerian(4, 1), BigInt::from(11));
        assert_eq!(eulerian(5, 2), BigInt::from(66));
        for n in 1..=8 {
            assert_eq!(eulerian(n, 0), BigInt::one());
        }
        assert_eq!(eulerian(3, -1), BigInt::zero());
        assert_eq!(eulerian(3, 3), BigInt::zero());
    }

    #[test]
    fn eulerian_rows_sum_to_factorial_and_are_symmetric() {
        for n in 1..=10 {
            let row = eulerian_row(n);
            let sum: BigInt = row.iter().sum();
            assert_eq!(sum, factorial(n));
            for i in 0..n {
                assert_eq!(row[i], row[n - 1 - i], "A({n},.) symmetry at {i}");
            }
        }
    }

    #[test]
    fn eulerian_recurrence_matches_explicit_formula() {
        for n in 1..=8 {
            for i in 0..n as i64 {
                assert_eq!(eulerian(n, i), eulerian_explicit(n, i), "A({n},{i})");
            }
        }
    }

    #[test]
    fn stirling_values() {
        for k in 0..=9 {
            assert_eq!(stirling_first_unsigned(k, k as i64), BigInt::one());
        }
        assert_eq!(stirling_first_unsigned(5, 3), BigInt::from(35));
        assert_eq!(stirling_first_unsigned(4, 2), BigInt::from(11));
        assert_eq!(stirling_first_unsigned(4, 7), BigInt::zero());
        assert_eq!(stirling_first_unsigned(4, -1), BigInt::zero());
    }

    #[test]
    fn stirling_rows_sum_to_factorial() {
        for n in 0..=10 {
            let sum: BigInt = stirling_row(n).iter().sum();
            assert_eq!(sum, factorial(n));
        }
    }

    #[test]
    fn elementary_symmetric_values() {
        assert_eq!(elementary_symmetric(0, &[9, 9, 9]), BigInt::one());
        assert_eq!(elementary_symmetric(2, &[1, 2, 3, 4]), BigInt::from(35));
        // e_j(1, ..., k-1) = |s(k, k-j)| (coefficients of the rising factorial)
        for k in 1..=8usize {
            let values: Vec<i64> = (1..k as i64).collect();
            for j in 0..k {
                assert_eq!(
                    elementary_symmetric(j, &values),
                    stirling_first_unsigned(k, (k - j) as i64),
                    "e_{j}(1..{}) vs |s({k},{})|",
                    k - 1,
                    k - j
                );
            }
        }
    }

    #[test]
    fn fibonacci_values() {
        assert_eq!(fibonacci(0), BigInt::zero());
        assert_eq!(fibonacci(2), BigInt::one());
        assert_eq!(fibonacci(6), BigInt::from(8));
        assert_eq!(fibonacci(10), BigInt::from(55));
    }

    #[test]
    fn scaled_chebyshev_values() {
        assert_eq!(scaled_chebyshev(0, &rat_int(7), &rat(1, 3)), rat_int(1));
        assert_eq!(scaled_chebyshev(1, &rat_int(5), &rat_int(2)), rat_int(5));
        // tau = 3, delta = 1 is the Fibonacci bisection F(2L + 2)
        assert_eq!(scaled_chebyshev(2, &rat_int(3), &rat_int(1)), rat_int(8));
        for l in 0..=20u32 {
            assert_eq!(
                scaled_chebyshev(l, &rat_int(3), &rat_int(1)),
                rat_big(fibonacci(2 * l as u64 + 2)),
            );
        }
        // tau = 2, delta = 1 degenerates to L + 1
        for l in 0..=12u32 {
            assert_eq!(
                scaled_chebyshev(l, &rat_int(2), &rat_int(1)),
                rat_int(l as i64 + 1)
            );
        }
    }

    #[test]
    fn worpitzky_holds_and_perturbation_fails() {
        assert!(verify_worpitzky(1, 10));
        assert!(verify_worpitzky(4, 20));
        assert!(verify_worpitzky(6, 12));
        let mut bad = eulerian_row(4);
        bad[2] += BigInt::one();
        assert!(!worpitzky_holds_with_weights(4, 20, &bad));
    }
}
