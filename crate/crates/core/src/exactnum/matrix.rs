//! Dense matrices over the rationals with exact linear algebra.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{ExactRational, RatPolynomial};

/// Row-major dense matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactRational>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Self { rows, cols, entries }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> ExactRational>(
        rows: usize,
        cols: usize,
        mut f: F,
    ) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExactRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |r, c| {
            if r == c {
                ExactRational::one()
            } else {
                ExactRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &ExactRational {
        &self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactRational) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[ExactRational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn scale(&self, s: &ExactRational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let add = a * other.get(k, c);
                    let cur = out.get(r, c) + add;
                    out.set(r, c, cur);
                }
            }
        }
        out
    }

    /// `self * v` for a column vector.
    pub fn matvec(&self, v: &[ExactRational]) -> Vec<ExactRational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .fold(ExactRational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// `u^T * self` for a row vector.
    pub fn vecmat(&self, u: &[ExactRational]) -> Vec<ExactRational> {
        assert_eq!(self.rows, u.len());
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| &u[r] * self.get(r, c))
                    .fold(ExactRational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Matrix power by repeated squaring.
    pub fn pow(&self, mut e: u32) -> Self {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn trace(&self) -> ExactRational {
        assert!(self.is_square());
        (0..self.rows)
            .map(|i| self.get(i, i).clone())
            .fold(ExactRational::zero(), |acc, t| acc + t)
    }

    /// Exact determinant by Gaussian elimination with pivot tracking.
    pub fn determinant(&self) -> ExactRational {
        assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return ExactRational::one();
        }
        let mut m: Vec<Vec<ExactRational>> =
            (0..n).map(|r| self.row(r).to_vec()).collect();
        let mut det = ExactRational::one();
        for col in 0..n {
            let pivot = match (col..n).find(|&r| !m[r][col].is_zero()) {
                Some(p) => p,
                None => return ExactRational::zero(),
            };
            if pivot != col {
                m.swap(pivot, col);
                det = -det;
            }
            let p = m[col][col].clone();
            det *= &p;
            let inv = p.recip();
            for r in col + 1..n {
                if m[r][col].is_zero() {
                    continue;
                }
                let factor = &m[r][col] * &inv;
                for c in col..n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        det
    }

    /// Determinant of the submatrix on the given row and column index sets.
    pub fn minor_det(&self, row_idx: &[usize], col_idx: &[usize]) -> ExactRational {
        assert_eq!(row_idx.len(), col_idx.len());
        let sub = Self::from_fn(row_idx.len(), col_idx.len(), |r, c| {
            self.get(row_idx[r], col_idx[c]).clone()
        });
        sub.determinant()
    }

    /// Principal submatrix on the kept indices (in the given order).
    pub fn principal_submatrix(&self, keep: &[usize]) -> Self {
        Self::from_fn(keep.len(), keep.len(), |r, c| {
            self.get(keep[r], keep[c]).clone()
        })
    }

    /// Monic characteristic polynomial `det(lambda I - self)` by the
    /// Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> RatPolynomial {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![ExactRational::zero(); n + 1];
        coeffs[n] = ExactRational::one();
        let mut m = Self::identity(n);
        for j in 1..=n {
            m = self.mul(&m);
            let c = -(m.trace() / ExactRational::from_integer(BigInt::from(j)));
            for i in 0..n {
                let v = m.get(i, i) + &c;
                m.set(i, i, v);
            }
            coeffs[n - j] = c;
        }
        RatPolynomial::new(coeffs)
    }

    /// Basis of the right nullspace, from the reduced row echelon form.  Each
    /// basis vector has a 1 in its free coordinate.
    pub fn nullspace(&self) -> Vec<Vec<ExactRational>> {
        let (rows, cols) = (self.rows, self.cols);
        let mut m: Vec<Vec<ExactRational>> =
            (0..rows).map(|r| self.row(r).to_vec()).collect();
        let mut pivot_cols = Vec::new();
        let mut lead = 0usize;
        for col in 0..cols {
            let Some(pivot) = (lead..rows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(pivot, lead);
            let inv = m[lead][col].clone().recip();
            for c in col..cols {
                m[lead][c] = &m[lead][c] * &inv;
            }
            for r in 0..rows {
                if r != lead && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in col..cols {
                        let sub = &factor * &m[lead][c];
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
            pivot_cols.push(col);
            lead += 1;
            if lead == rows {
                break;
            }
        }
        let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
        free_cols
            .iter()
            .map(|&f| {
                let mut v = vec![ExactRational::zero(); cols];
                v[f] = ExactRational::one();
                for (r, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -m[r][f].clone();
                }
                v
            })
            .collect()
    }

    /// Exact inverse, or `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut m: Vec<Vec<ExactRational>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| {
                    if c == r {
                        ExactRational::one()
                    } else {
                        ExactRational::zero()
                    }
                }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
            m.swap(pivot, col);
            let inv = m[col][col].clone().recip();
            for c in 0..2 * n {
                m[col][c] = &m[col][c] * &inv;
            }
            for r in 0..n {
                if r != col && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &factor * &m[col][c];
                        m[r][c] = &m[r][c] - sub;
                    }
                }
            }
        }
        Some(Self::from_fn(n, n, |r, c| m[r][n + c].clone()))
    }

    pub fn is_entrywise_positive(&self) -> bool {
        self.entries.iter().all(Signed::is_positive)
    }

    pub fn is_entrywise_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    /// All entries as big integers, or `None` if any entry is non-integral.
    pub fn integer_entries(&self) -> Option<Vec<Vec<BigInt>>> {
        if !self.entries.iter().all(ExactRational::is_integer) {
            return None;
        }
        Some(
            (0..self.rows)
                .map(|r| self.row(r).iter().map(ExactRational::to_integer).collect())
                .collect(),
        )
    }

    /// Column sums as a vector.
    pub fn column_sums(&self) -> Vec<ExactRational> {
        (0..self.cols)
            .map(|c| {
                (0..self.rows)
                    .map(|r| self.get(r, c).clone())
                    .fold(ExactRational::zero(), |acc, t| acc + t)
            })
            .collect()
    }

    /// Outer product `col * row^T`.
    pub fn outer(col: &[ExactRational], row: &[ExactRational]) -> Self {
        Self::from_fn(col.len(), row.len(), |r, c| &col[r] * &row[c])
    }
}
