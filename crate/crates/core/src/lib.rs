//! Exact spectral and enumerative toolkit for carry-propagation Markov chains.
//!
//! When `k` integers are added in base `N`, the carries form a Markov chain on
//! `{0, ..., k-1}` whose transition matrix (the Holte matrix) has eigenvalues
//! `N^{-j}`, all simple and independent of the base.  This crate constructs
//! that matrix and its complete biorthogonal eigenvector system in closed
//! form, counts cascade-free digit sequences with restricted transfer
//! matrices, decides when those counts admit a scaled Chebyshev-U closed form,
//! and classifies carry chains up to similarity of their transfer matrices.
//!
//! Everything is computed over arbitrary-precision rationals; no floating
//! point appears anywhere.  Identities that hold on paper are checked as exact
//! equalities of reduced fractions and big integers.
//!
//! Module map:
//! - [`exactnum`]: rational scalars, polynomials, dense matrices, and the
//!   combinatorial number families (binomials, Eulerian, Stirling, elementary
//!   symmetric, Fibonacci, scaled Chebyshev).
//! - [`holte`]: the carry count/probability matrices and their structural
//!   certificates (column sums, stationarity, centrosymmetry, total
//!   nonnegativity, return counts, reversibility defects).
//! - [`eigensys`]: the biorthogonal eigenvector system, spectral projectors,
//!   quotient polynomials and their closed forms.
//! - [`cascade`]: cascade-free enumeration, recurrences, the Chebyshev
//!   threshold decision, and dispersion regimes for binary chains.
//! - [`classify`]: shadow equivalence, the achievable moduli space, and the
//!   multiplicative-encoding impossibility search.

// Index loops mirror the matrix algebra they implement.
#![allow(clippy::needless_range_loop)]

pub mod cascade;
pub mod classify;
pub mod eigensys;
pub mod exactnum;
pub mod holte;

pub use cascade::{BinaryChain, CascadeSpec, ThresholdVerdict};
pub use eigensys::EigenSystem;
pub use exactnum::{ExactRational, RatMatrix, RatPolynomial};
pub use holte::{DigitSumProfile, HolteSystem};
pub use classify::{MarkovCarrySystem, ModuliPoint};

#[cfg(test)]
mod tests {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_share_safe() {
        assert_send_sync::<crate::HolteSystem>();
        assert_send_sync::<crate::DigitSumProfile>();
        assert_send_sync::<crate::EigenSystem>();
        assert_send_sync::<crate::RatMatrix>();
        assert_send_sync::<crate::RatPolynomial>();
        assert_send_sync::<crate::CascadeSpec>();
        assert_send_sync::<crate::BinaryChain>();
        assert_send_sync::<crate::MarkovCarrySystem>();
    }

    #[test]
    fn parallel_sweeps_share_the_memo_caches() {
        let handles: Vec<_> = (2..=6usize)
            .map(|k| {
                std::thread::spawn(move || {
                    let sys = crate::holte::build_holte(k, 3);
                    let eig = crate::eigensys::EigenSystem::new(k).unwrap();
                    (k, sys, eig.constants().to_vec())
                })
            })
            .collect();
        for handle in handles {
            let (k, sys, constants) = handle.join().unwrap();
            assert_eq!(&sys, &crate::holte::build_holte(k, 3));
            assert_eq!(
                constants,
                crate::eigensys::EigenSystem::new(k).unwrap().constants()
            );
        }
    }
}
