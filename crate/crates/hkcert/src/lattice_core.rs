//! Exact integer linear algebra for even lattices.
//!
//! Gram matrices, Smith normal form, discriminant groups, divisibility of
//! vectors and the specific Gram constructors used by the embedding recipes.
//! Everything is computed over arbitrary-precision integers; negative-definite
//! lattices are always stored as their positive-definite negations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// A dense integer matrix, stored row by row.
pub type IntMatrix = Vec<Vec<BigInt>>;

/// Errors raised by lattice constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("matrix is empty or not square")]
    NotSquare,
    #[error("matrix is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("diagonal entry {0} is odd; the lattice is not even")]
    OddDiagonal(usize),
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("divisibility violation: {0}")]
    DivisibilityViolation(String),
    #[error("zero vector has no divisibility")]
    ZeroVector,
    #[error("dimension mismatch: vector of length {vector} against matrix of size {matrix}")]
    DimensionMismatch { vector: usize, matrix: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Gram matrix of a non-degenerate even lattice.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GramMatrix {
    entries: IntMatrix,
}

impl GramMatrix {
    /// Validates symmetry, evenness of the diagonal and non-degeneracy.
    pub fn new(entries: IntMatrix) -> Result<Self, LatticeError> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|row| row.len() != n) {
            return Err(LatticeError::NotSquare);
        }
        for i in 0..n {
            if entries[i][i].is_odd() {
                return Err(LatticeError::OddDiagonal(i));
            }
            for j in (i + 1)..n {
                if entries[i][j] != entries[j][i] {
                    return Err(LatticeError::NotSymmetric(i, j));
                }
            }
        }
        if determinant(&entries).is_zero() {
            return Err(LatticeError::Degenerate);
        }
        Ok(Self { entries })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self, LatticeError> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// The generic rank-2 matrix [[M, N], [N, P]].
    pub fn rank2(m: &BigInt, n: &BigInt, p: &BigInt) -> Result<Self, LatticeError> {
        Self::new(vec![vec![m.clone(), n.clone()], vec![n.clone(), p.clone()]])
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.entries)
    }

    /// Leading principal minors, in order of increasing size.
    pub fn leading_minors(&self) -> Vec<BigInt> {
        (1..=self.dim())
            .map(|k| {
                let sub: IntMatrix = self.entries[..k].iter().map(|r| r[..k].to_vec()).collect();
                determinant(&sub)
            })
            .collect()
    }

    /// Sylvester's criterion: every leading principal minor is positive.
    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors().iter().all(|m| m.is_positive())
    }

    pub fn discriminant_group(&self) -> DiscriminantGroup {
        let snf = smith_normal_form(&self.entries);
        let elementary_divisors: Vec<BigInt> = snf
            .diag
            .into_iter()
            .filter(|d| !d.is_one())
            .collect();
        let order = elementary_divisors
            .iter()
            .fold(BigInt::one(), |acc, d| acc * d);
        DiscriminantGroup {
            elementary_divisors,
            order,
        }
    }

    /// Entries rendered as decimal strings (row major), as used in certificates.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.entries
            .iter()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect()
    }
}

/// The finite abelian group L^∨/L, described by its invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    /// Smith invariant factors greater than one, each dividing the next.
    pub elementary_divisors: Vec<BigInt>,
    /// Product of the invariant factors, equal to |det(Gram)|.
    pub order: BigInt,
}

/// Smith normal form with unimodular transforms: `left · m · right = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub left: IntMatrix,
    /// Diagonal entries, non-negative, each dividing the next; length min(rows, cols).
    pub diag: Vec<BigInt>,
    pub right: IntMatrix,
}

/// Identity matrix of size `n`.
pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Matrix product; panics on incompatible shapes.
pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "incompatible matrix shapes");
            (0..cols)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .fold(BigInt::zero(), |acc, (x, brow)| acc + x * &brow[j])
                })
                .collect()
        })
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Inverse of a unimodular integer matrix via the adjugate; `None` if |det| ≠ 1.
pub fn inverse_unimodular(m: &IntMatrix) -> Option<IntMatrix> {
    let n = m.len();
    let det = determinant(m);
    if det.abs() != BigInt::one() {
        return None;
    }
    if n == 1 {
        return Some(vec![vec![det]]);
    }
    let mut inv = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: IntMatrix = m
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| {
                    row.iter()
                        .enumerate()
                        .filter(|(c, _)| *c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let cof = determinant(&minor);
            let cof = if (i + j) % 2 == 0 { cof } else { -cof };
            // adj[j][i] = cofactor(i, j); inverse = adj / det with det = ±1.
            inv[j][i] = cof * &det;
        }
    }
    Some(inv)
}

/// Smith normal form by smallest-absolute-pivot elimination.
///
/// Pivot choice is the first entry (row-major) of smallest nonzero absolute
/// value in the active block, which makes `left` and `right` deterministic.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut left = identity(rows);
    let mut right = identity(cols);
    let steps = rows.min(cols);

    for k in 0..steps {
        loop {
            let Some((pi, pj)) = smallest_pivot(&a, k) else {
                break;
            };
            if pi != k {
                a.swap(pi, k);
                left.swap(pi, k);
            }
            if pj != k {
                for row in a.iter_mut() {
                    row.swap(pj, k);
                }
                for row in right.iter_mut() {
                    row.swap(pj, k);
                }
            }
            let pivot = a[k][k].clone();
            let mut dirty = false;
            for i in k + 1..rows {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = &a[i][k] / &pivot;
                row_axpy(&mut a, i, k, &q);
                row_axpy(&mut left, i, k, &q);
                dirty |= !a[i][k].is_zero();
            }
            for j in k + 1..cols {
                if a[k][j].is_zero() {
                    continue;
                }
                let q = &a[k][j] / &pivot;
                col_axpy(&mut a, j, k, &q);
                col_axpy(&mut right, j, k, &q);
                dirty |= !a[k][j].is_zero();
            }
            if dirty {
                continue;
            }
            // Pivot row and column are clear; enforce the divisibility chain.
            let offender = (k + 1..rows).find(|&i| {
                (k + 1..cols).any(|j| !(&a[i][j] % &pivot).is_zero())
            });
            match offender {
                Some(i) => {
                    let one = -BigInt::one();
                    row_axpy(&mut a, k, i, &one);
                    row_axpy(&mut left, k, i, &one);
                }
                None => break,
            }
        }
        if a[k][k].is_negative() {
            for x in a[k].iter_mut() {
                *x = -x.clone();
            }
            for x in left[k].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    let diag = (0..steps).map(|i| a[i][i].clone()).collect();
    SnfResult { left, diag, right }
}

fn smallest_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().map_or(true, |(_, _, b)| ax < *b) {
                best = Some((i, j, ax));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

/// row[target] -= q · row[source]
fn row_axpy(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    let src = a[source].clone();
    for (x, s) in a[target].iter_mut().zip(src.iter()) {
        *x -= q * s;
    }
}

/// col[target] -= q · col[source]
fn col_axpy(a: &mut IntMatrix, target: usize, source: usize, q: &BigInt) {
    for row in a.iter_mut() {
        let s = row[source].clone();
        row[target] -= q * s;
    }
}

/// Divisibility of `v` with respect to `g`: the gcd of the entries of g·v.
pub fn divisibility(v: &[BigInt], g: &GramMatrix) -> Result<BigInt, LatticeError> {
    if v.len() != g.dim() {
        return Err(LatticeError::DimensionMismatch {
            vector: v.len(),
            matrix: g.dim(),
        });
    }
    if v.iter().all(|x| x.is_zero()) {
        return Err(LatticeError::ZeroVector);
    }
    let gcd = g
        .entries()
        .iter()
        .map(|row| row.iter().zip(v).fold(BigInt::zero(), |acc, (a, b)| acc + a * b))
        .fold(BigInt::zero(), |acc, x| acc.gcd(&x));
    Ok(gcd)
}

/// The rank-2 lattice Q_h with Gram [[2(n−1), −2a(n−1)/γ], [−2a(n−1)/γ, 2t]].
pub fn gram_qh_k3n(n: u64, gamma: u64, a: u64, t: &BigInt) -> Result<GramMatrix, LatticeError> {
    if n < 2 {
        return Err(LatticeError::InvalidParameter(format!("n = {n} < 2")));
    }
    if gamma == 0 {
        return Err(LatticeError::InvalidParameter("γ = 0".into()));
    }
    if !t.is_positive() {
        return Err(LatticeError::InvalidParameter(format!("t = {t} < 1")));
    }
    if a.gcd(&gamma) != 1 {
        return Err(LatticeError::DivisibilityViolation(format!(
            "gcd(a, γ) = gcd({a}, {gamma}) ≠ 1"
        )));
    }
    let m = BigInt::from(n - 1);
    let g = BigInt::from(gamma);
    if !(BigInt::from(2u8) * &m % &g).is_zero() {
        return Err(LatticeError::DivisibilityViolation(format!(
            "γ = {gamma} does not divide 2(n−1) = {}",
            2 * (n - 1)
        )));
    }
    let off = BigInt::from(2u8) * BigInt::from(a) * &m;
    if !(&off % &g).is_zero() {
        return Err(LatticeError::DivisibilityViolation(format!(
            "2a(n−1)/γ = {off}/{gamma} is not integral"
        )));
    }
    let off = -(off / &g);
    GramMatrix::new(vec![
        vec![BigInt::from(2u8) * &m, off.clone()],
        vec![off, BigInt::from(2u8) * t],
    ])
}

/// K3^[2] divisibility-2 lattice Q_t = [[2, −1], [−1, 2t]].
pub fn gram_qt_k32(t: &BigInt) -> Result<GramMatrix, LatticeError> {
    gram_qh_k3n(2, 2, 1, t)
}

/// OG10 non-split lattice Q_t = [[2, −1, 0], [−1, 2, 1], [0, 1, 2t]] (positive-definite form).
pub fn gram_qt_og10(t: &BigInt) -> Result<GramMatrix, LatticeError> {
    if !t.is_positive() {
        return Err(LatticeError::InvalidParameter(format!("t = {t} < 1")));
    }
    let i = |x: i64| BigInt::from(x);
    GramMatrix::new(vec![
        vec![i(2), i(-1), i(0)],
        vec![i(-1), i(2), i(1)],
        vec![i(0), i(1), BigInt::from(2u8) * t],
    ])
}
