//! Classification of carry chains up to similarity of their transfer
//! matrices ("shadow equivalence").
//!
//! Two binary chains are shadow-equivalent exactly when they share the pair
//! `(N, d)` of alphabet size and transfer determinant, equivalently when
//! their characteristic polynomials `x^2 - N x + d` agree.  The achievable
//! pairs form the moduli space
//!
//! ```text
//! Omega = { (N, d) : exists g, t >= 0 with g t = d and g + t <= N },
//! ```
//!
//! and for `d >= 1` achievability is `N >= sigma(d)` with `sigma(d)` the
//! minimum of `q + d/q` over divisors `q <= sqrt(d)`.  `N^2 >= 4d` is
//! necessary but not sufficient: `(6, 7)` satisfies it yet is not achievable.
//!
//! For general state spaces with simple spectrum, similarity is decided by
//! characteristic-polynomial equality alone.  A contrasting exhaustive
//! search shows that multiplication admits no componentwise encoding at all
//! for two or more digit positions.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::cascade::BinaryChain;
use crate::exactnum::{ExactRational, RatMatrix, RatPolynomial};
use crate::holte::HolteSystem;

/// Cap on `N^L` for the exhaustive bijection search.
pub const MULT_SHADOW_BUDGET: u64 = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("matrix is not column-stochastic with entries in [0, 1]")]
    NotStochastic,
    #[error("matrices must be square and of equal dimension")]
    DimensionMismatch,
    #[error("characteristic polynomial has a repeated root; classification needs simple spectrum")]
    NonSimpleSpectrum,
    #[error("bijection search needs N^L <= {budget} (got {size})")]
    SearchTooLarge { size: u64, budget: u64 },
    #[error("sigma is defined for determinants >= 1")]
    SigmaOfZero,
}

/// Shadow equivalence of binary chains: equality of `(N, d)`.
///
/// This coincides with characteristic-polynomial equality of the transfer
/// matrices, since both invariants are `(trace, det)`.
pub fn shadow_equivalent_binary(a: &BinaryChain, b: &BinaryChain) -> bool {
    a.base() == b.base() && a.determinant() == b.determinant()
}

/// An explicit similarity witness `M` with `T_b = M T_a M^{-1}`, constructed
/// when the chains are equivalent and the discriminant `N^2 - 4d` is a
/// perfect square (rational eigenvectors).  Otherwise `None`, and equality of
/// characteristic polynomials is the certificate.
pub fn similarity_witness(a: &BinaryChain, b: &BinaryChain) -> Option<RatMatrix> {
    if !shadow_equivalent_binary(a, b) {
        return None;
    }
    let n = BigInt::from(a.base());
    let disc = &n * &n - BigInt::from(4u32) * a.determinant().to_integer();
    if disc.is_negative() {
        return None;
    }
    let root = disc.sqrt();
    if &root * &root != disc {
        return None;
    }
    let lambda_plus = ExactRational::new(&n + &root, BigInt::from(2));
    let lambda_minus = ExactRational::new(&n - &root, BigInt::from(2));
    if lambda_plus == lambda_minus {
        // Repeated eigenvalue: both matrices are either the same scalar
        // matrix or share a single Jordan block; handled by eigvec columns
        // only in the scalar case.
        return None;
    }
    let basis = |chain: &BinaryChain| -> Option<RatMatrix> {
        let t = chain.count_matrix();
        let col = |lambda: &ExactRational| -> Option<Vec<ExactRational>> {
            // Solve (T - lambda I) v = 0 for a 2x2 matrix.
            let a00 = t.get(0, 0) - lambda;
            let a01 = t.get(0, 1).clone();
            let a10 = t.get(1, 0).clone();
            let a11 = t.get(1, 1) - lambda;
            if !a01.is_zero() || !a00.is_zero() {
                if a01.is_zero() {
                    Some(vec![ExactRational::zero(), ExactRational::one()])
                } else {
                    Some(vec![-a01, a00])
                }
            } else if !a10.is_zero() || !a11.is_zero() {
                if a10.is_zero() {
                    Some(vec![ExactRational::one(), ExactRational::zero()])
                } else {
                    Some(vec![-a11, a10])
                }
            } else {
                None
            }
        };
        let vp = col(&lambda_plus)?;
        let vm = col(&lambda_minus)?;
        Some(RatMatrix::new(
            2,
            2,
            vec![vp[0].clone(), vm[0].clone(), vp[1].clone(), vm[1].clone()],
        ))
    };
    let ma = basis(a)?;
    let mb = basis(b)?;
    let witness = mb.mul(&ma.inverse()?);
    debug_assert_eq!(
        witness.mul(&a.count_matrix()),
        b.count_matrix().mul(&witness)
    );
    Some(witness)
}

/// `sigma(d)`: minimum of `q + d/q` over divisors `q` of `d` with
/// `1 <= q <= sqrt(d)`.
pub fn sigma(d: u64) -> u64 {
    assert!(d >= 1, "sigma needs d >= 1");
    let mut best = u64::MAX;
    let mut q = 1;
    while q * q <= d {
        if d.is_multiple_of(q) {
            best = best.min(q + d / q);
        }
        q += 1;
    }
    best
}

/// Direct search for a factorization `g t = d` with `g + t <= n`.
pub fn achievable_by_search(n: u32, d: u64) -> Option<(u64, u64)> {
    if d == 0 {
        return Some((0, 0));
    }
    let mut g = 1;
    while g * g <= d {
        if d.is_multiple_of(g) {
            let t = d / g;
            if g + t <= n as u64 {
                return Some((g, t));
            }
        }
        g += 1;
    }
    None
}

/// Achievability status of a `(N, d)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuliStatus {
    /// Realizable by some factorization `g t = d`, `g + t <= N`.
    Achievable,
    /// Passes the necessary bound `N^2 >= 4d` but admits no factorization.
    AmGmOnlyExcluded,
    /// Fails even the necessary bound `N^2 >= 4d`.
    BelowAmGm,
}

impl ModuliStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            ModuliStatus::Achievable => "Achievable",
            ModuliStatus::AmGmOnlyExcluded => "AMGMOnlyExcluded",
            ModuliStatus::BelowAmGm => "BelowAMGM",
        }
    }
}

/// One grid point of the moduli space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuliPoint {
    pub base: u32,
    pub determinant: u64,
    pub status: ModuliStatus,
    /// A realizing `(g, t)` when achievable.
    pub witness: Option<(u64, u64)>,
}

/// Full grid of statuses for `1 <= N <= n_max`, `0 <= d <= d_max`, ordered by
/// `(N, d)`.
pub fn moduli_space(n_max: u32, d_max: u64) -> Vec<ModuliPoint> {
    assert!(n_max >= 1);
    let mut points = Vec::new();
    for base in 1..=n_max {
        for determinant in 0..=d_max {
            let achievable = if determinant == 0 {
                Some((0, 0))
            } else if u64::from(base) >= sigma(determinant) {
                let q = (1..).find(|q| {
                    determinant % q == 0 && q + determinant / q <= u64::from(base)
                });
                q.map(|q| (q, determinant / q))
            } else {
                None
            };
            let status = match achievable {
                Some(_) => ModuliStatus::Achievable,
                None => {
                    if (base as u64) * (base as u64) >= 4 * determinant {
                        ModuliStatus::AmGmOnlyExcluded
                    } else {
                        ModuliStatus::BelowAmGm
                    }
                }
            };
            points.push(ModuliPoint {
                base,
                determinant,
                status,
                witness: achievable,
            });
        }
    }
    points
}

/// A column-stochastic carry chain on an arbitrary finite state space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovCarrySystem {
    matrix: RatMatrix,
}

impl MarkovCarrySystem {
    /// Wrap a column-stochastic matrix with entries in `[0, 1]`.
    pub fn new(matrix: RatMatrix) -> Result<Self, ClassifyError> {
        if !matrix.is_square() {
            return Err(ClassifyError::NotStochastic);
        }
        let one = ExactRational::one();
        for c in 0..matrix.cols() {
            for r in 0..matrix.rows() {
                let e = matrix.get(r, c);
                if e.is_negative() || e > &one {
                    return Err(ClassifyError::NotStochastic);
                }
            }
        }
        if matrix.column_sums().iter().any(|s| s != &one) {
            return Err(ClassifyError::NotStochastic);
        }
        Ok(Self { matrix })
    }

    /// Binary GEN/PROP/KILL chain with a probability measure on the digit
    /// classes: `gen + prop + kill = 1`.
    pub fn binary_from_measure(
        gen: ExactRational,
        prop: ExactRational,
        kill: ExactRational,
    ) -> Result<Self, ClassifyError> {
        let matrix = RatMatrix::new(
            2,
            2,
            vec![
                &kill + &prop,
                kill.clone(),
                gen.clone(),
                &gen + &prop,
            ],
        );
        Self::new(matrix)
    }

    /// The probability matrix of a uniform-digit carry system.
    pub fn from_holte(sys: &HolteSystem) -> Self {
        Self {
            matrix: sys.prob_matrix().clone(),
        }
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    pub fn char_poly(&self) -> RatPolynomial {
        self.matrix.char_poly()
    }
}

/// Characteristic-polynomial similarity test for matrices with simple
/// spectrum (certified by a constant `gcd(chi, chi')`).
pub fn charpoly_similar(a: &RatMatrix, b: &RatMatrix) -> Result<bool, ClassifyError> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(ClassifyError::DimensionMismatch);
    }
    let chi_a = a.char_poly();
    let chi_b = b.char_poly();
    for chi in [&chi_a, &chi_b] {
        if !chi.gcd(&chi.derivative()).is_constant() {
            return Err(ClassifyError::NonSimpleSpectrum);
        }
    }
    Ok(chi_a == chi_b)
}

/// Similarity of two carry systems with simple spectrum: equality of
/// characteristic polynomials.
pub fn classify_general(
    a: &MarkovCarrySystem,
    b: &MarkovCarrySystem,
) -> Result<bool, ClassifyError> {
    charpoly_similar(a.matrix(), b.matrix())
}

/// Column-stochasticity leaves the eigenvalue 1: `chi(1) = 0` exactly.
pub fn stochasticity_check(s: &MarkovCarrySystem) -> bool {
    s.char_poly().eval(&ExactRational::one()).is_zero()
}

/// A successful componentwise encoding of multiplication: the digit vectors
/// assigned to each residue and the digit-level operation table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultShadowWitness {
    /// `encoding[a]` is the digit vector assigned to residue `a`.
    pub encoding: Vec<Vec<u32>>,
    /// `op_table[x][y]` is the digit-level product.
    pub op_table: Vec<Vec<u32>>,
}

/// Exhaustively test every bijection from residues mod `N^L` to digit
/// vectors in `(Z/N)^L`, deriving the componentwise operation from the
/// product constraints; returns all consistent encodings (empty means
/// impossible).
pub fn mult_shadow_search(base: u32, length: u32) -> Result<Vec<MultShadowWitness>, ClassifyError> {
    assert!(base >= 2 && length >= 1);
    let size = (base as u64).checked_pow(length).unwrap_or(u64::MAX);
    if size > MULT_SHADOW_BUDGET {
        return Err(ClassifyError::SearchTooLarge {
            size,
            budget: MULT_SHADOW_BUDGET,
        });
    }
    let m = size as usize;
    let n = base as usize;
    let l = length as usize;
    // Digit vectors for tuple index 0..m, least-significant position first.
    let tuples: Vec<Vec<u32>> = (0..m)
        .map(|mut t| {
            (0..l)
                .map(|_| {
                    let d = (t % n) as u32;
                    t /= n;
                    d
                })
                .collect()
        })
        .collect();
    let mut witnesses = Vec::new();
    // Lexicographic enumeration of all bijections residue -> tuple index.
    let mut perm: Vec<usize> = (0..m).collect();
    loop {
        // Derive the operation table lazily; prune on the first conflict.
        let mut table: Vec<Vec<Option<u32>>> = vec![vec![None; n]; n];
        let mut consistent = true;
        'derive: for a in 0..m {
            for b in 0..m {
                let p = (a * b) % m;
                for pos in 0..l {
                    let x = tuples[perm[a]][pos] as usize;
                    let y = tuples[perm[b]][pos] as usize;
                    let z = tuples[perm[p]][pos];
                    match table[x][y] {
                        None => table[x][y] = Some(z),
                        Some(w) if w == z => {}
                        Some(_) => {
                            consistent = false;
                            break 'derive;
                        }
                    }
                }
            }
        }
        if consistent {
            witnesses.push(MultShadowWitness {
                encoding: (0..m).map(|a| tuples[perm[a]].clone()).collect(),
                op_table: table
                    .into_iter()
                    .map(|row| {
                        row.into_iter()
                            .map(|c| c.expect("every digit pair occurs"))
                            .collect()
                    })
                    .collect(),
            });
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(witnesses)
}

/// Advance to the lexicographically next permutation; false after the last.
fn next_permutation(perm: &mut [usize]) -> bool {
    if perm.len() < 2 {
        return false;
    }
    let mut i = perm.len() - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = perm.len() - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{rat, rat_int};
    use crate::holte::build_holte;

    #[test]
    fn binary_equivalence_is_trace_det_equality() {
        let a = BinaryChain::new(3, 1, 1, 1).unwrap();
        assert!(shadow_equivalent_binary(&a, &a));
        let b = BinaryChain::new(5, 1, 4, 0).unwrap();
        let c = BinaryChain::new(5, 4, 1, 0).unwrap();
        assert!(shadow_equivalent_binary(&b, &c));
        let d = BinaryChain::new(5, 1, 2, 2).unwrap();
        assert!(!shadow_equivalent_binary(&b, &d));
        assert!(!shadow_equivalent_binary(&a, &b));
    }

    #[test]
    fn similarity_witness_conjugates_exactly() {
        let b = BinaryChain::new(5, 1, 4, 0).unwrap();
        let c = BinaryChain::new(5, 4, 1, 0).unwrap();
        // discriminant 25 - 16 = 9 is a perfect square
        let m = similarity_witness(&b, &c).expect("witness exists");
        assert_eq!(
            m.mul(&b.count_matrix()),
            c.count_matrix().mul(&m)
        );
        let a = BinaryChain::new(3, 1, 1, 1).unwrap();
        // discriminant 9 - 4 = 5 is irrational: certificate only
        assert!(similarity_witness(&a, &a).is_none());
        assert!(similarity_witness(&a, &b).is_none());
    }

    #[test]
    fn charpoly_criterion_matches_binary_invariant() {
        // On transfer matrices the characteristic polynomial carries exactly
        // (trace, det) = (N, d).
        let chains = [
            BinaryChain::new(5, 1, 4, 0).unwrap(),
            BinaryChain::new(5, 4, 1, 0).unwrap(),
            BinaryChain::new(5, 2, 2, 1).unwrap(),
            BinaryChain::new(4, 1, 2, 1).unwrap(),
            BinaryChain::new(6, 2, 3, 1).unwrap(),
        ];
        for x in &chains {
            for y in &chains {
                let expected = shadow_equivalent_binary(x, y);
                match charpoly_similar(&x.count_matrix(), &y.count_matrix()) {
                    Ok(got) => assert_eq!(got, expected),
                    Err(ClassifyError::NonSimpleSpectrum) => {
                        // only possible when N^2 = 4d; none of these chains
                        panic!("unexpected repeated spectrum");
                    }
                    Err(e) => panic!("{e}"),
                }
            }
        }
    }

    #[test]
    fn sigma_values() {
        assert_eq!(sigma(7), 8);
        assert_eq!(sigma(1), 2);
        assert_eq!(sigma(12), 7);
        assert_eq!(sigma(16), 8);
        assert_eq!(sigma(21), 10);
    }

    #[test]
    fn sigma_matches_search_on_a_large_grid() {
        for d in 1..=200u64 {
            for n in 2..=50u32 {
                let by_sigma = u64::from(n) >= sigma(d);
                let by_search = achievable_by_search(n, d).is_some();
                assert_eq!(by_sigma, by_search, "N={n} d={d}");
                if by_search {
                    assert!(u64::from(n) * u64::from(n) >= 4 * d, "AM-GM at N={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn moduli_statuses() {
        let grid = moduli_space(12, 21);
        let get = |n: u32, d: u64| {
            grid.iter()
                .find(|p| p.base == n && p.determinant == d)
                .unwrap()
        };
        assert_eq!(get(6, 7).status, ModuliStatus::AmGmOnlyExcluded);
        assert_eq!(get(9, 14).status, ModuliStatus::Achievable);
        assert_eq!(get(8, 13).status, ModuliStatus::AmGmOnlyExcluded);
        assert_eq!(get(2, 1).status, ModuliStatus::Achievable);
        assert_eq!(get(2, 2).status, ModuliStatus::BelowAmGm);
        assert_eq!(get(3, 0).status, ModuliStatus::Achievable);
        let w = get(9, 14).witness.unwrap();
        assert_eq!(w.0 * w.1, 14);
        assert!(w.0 + w.1 <= 9);
    }

    #[test]
    fn example_chains_classify_as_printed() {
        let third = || rat(1, 3);
        let a = MarkovCarrySystem::binary_from_measure(third(), third(), third()).unwrap();
        let b = MarkovCarrySystem::binary_from_measure(rat(1, 2), rat(1, 4), rat(1, 4)).unwrap();
        let c = MarkovCarrySystem::binary_from_measure(rat(1, 4), rat(1, 2), rat(1, 4)).unwrap();
        let d = MarkovCarrySystem::binary_from_measure(rat(1, 6), rat(1, 2), rat(1, 3)).unwrap();
        let chi = |s: &MarkovCarrySystem| s.char_poly().coeffs().to_vec();
        assert_eq!(chi(&a), vec![rat(1, 3), rat(-4, 3), rat_int(1)]);
        assert_eq!(chi(&b), vec![rat(1, 4), rat(-5, 4), rat_int(1)]);
        assert_eq!(chi(&c), vec![rat(1, 2), rat(-3, 2), rat_int(1)]);
        assert_eq!(chi(&d), vec![rat(1, 2), rat(-3, 2), rat_int(1)]);
        assert_eq!(classify_general(&c, &d), Ok(true));
        assert_eq!(classify_general(&a, &b), Ok(false));
        assert_eq!(classify_general(&b, &c), Ok(false));
        assert_eq!(classify_general(&a, &c), Ok(false));
    }

    #[test]
    fn uniform_system_is_a_single_point() {
        let s = MarkovCarrySystem::from_holte(&build_holte(3, 2));
        assert_eq!(classify_general(&s, &s), Ok(true));
        // chi = (x - 1)(x - 1/2)(x - 1/4)
        let expect = RatPolynomial::linear_root(&rat_int(1))
            .mul(&RatPolynomial::linear_root(&rat(1, 2)))
            .mul(&RatPolynomial::linear_root(&rat(1, 4)));
        assert_eq!(s.char_poly(), expect);
    }

    #[test]
    fn stochasticity() {
        let s = MarkovCarrySystem::from_holte(&build_holte(4, 3));
        assert!(stochasticity_check(&s));
        let bad = RatMatrix::new(
            2,
            2,
            vec![rat(1, 2), rat(1, 3), rat(1, 3), rat(1, 2)],
        );
        assert_eq!(MarkovCarrySystem::new(bad), Err(ClassifyError::NotStochastic));
        let negative = RatMatrix::new(
            2,
            2,
            vec![rat(3, 2), rat_int(0), rat(-1, 2), rat_int(1)],
        );
        assert_eq!(
            MarkovCarrySystem::new(negative),
            Err(ClassifyError::NotStochastic)
        );
    }

    #[test]
    fn multiplication_has_no_componentwise_encoding_at_length_two() {
        assert!(mult_shadow_search(2, 2).unwrap().is_empty());
        // the obstruction persists at three positions (8! bijections)
        assert!(mult_shadow_search(2, 3).unwrap().is_empty());
        let single = mult_shadow_search(2, 1).unwrap();
        assert!(!single.is_empty());
        assert!(!mult_shadow_search(3, 1).unwrap().is_empty());
        assert!(matches!(
            mult_shadow_search(3, 2),
            Err(ClassifyError::SearchTooLarge { size: 9, .. })
        ));
    }

    #[test]
    fn single_position_witnesses_conjugate_multiplication() {
        let witnesses = mult_shadow_search(2, 1).unwrap();
        assert_eq!(witnesses.len(), 2);
        for w in &witnesses {
            let h = |a: usize| w.encoding[a][0] as usize;
            for a in 0..2 {
                for b in 0..2 {
                    assert_eq!(w.op_table[h(a)][h(b)], h((a * b) % 2) as u32);
                }
            }
        }
    }

    #[test]
    fn next_permutation_enumerates_lexicographically() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[5], vec![2, 1, 0]);
    }
}
