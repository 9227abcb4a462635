//! The E8 lattice as concrete data.
//!
//! Vectors are stored in doubled coordinates `c_i = 2 x_i`, so integral and
//! half-integral points share one exact machine-integer representation. The
//! module provides membership, inner products, the cached table of the 240
//! roots, the brute-force root-counting oracle, primitivity of sublattices
//! via Smith normal form, and the A_1^4 sublattices V₊ and V₋.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice_core::{smith_normal_form, GramMatrix, IntMatrix, LatticeError};

/// Errors raised by E8 operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum E8Error {
    #[error("doubled coordinates {0:?} do not describe a point of E8")]
    NotInE8([i64; 8]),
    #[error("vectors are linearly dependent")]
    DependentVectors,
    #[error("vector is not in V₋ = ⟨e1−e5, e2−e6, e3−e7, e4−e8⟩")]
    NotInVminus,
    #[error("zero vector")]
    ZeroVector,
    #[error("images do not form a valid Gram matrix: {0}")]
    Gram(#[from] LatticeError),
}

/// True iff the doubled coordinates describe a point of E8: all coordinates
/// integral or all half-integral, with even coordinate sum.
pub fn is_in_e8(c: &[i64; 8]) -> bool {
    let parity = c[0].rem_euclid(2);
    c.iter().all(|x| x.rem_euclid(2) == parity) && c.iter().sum::<i64>().rem_euclid(4) == 0
}

/// A point of E8 in doubled coordinates.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "[i64; 8]", into = "[i64; 8]")]
pub struct E8Vector {
    doubled: [i64; 8],
}

impl TryFrom<[i64; 8]> for E8Vector {
    type Error = E8Error;

    fn try_from(c: [i64; 8]) -> Result<Self, Self::Error> {
        Self::from_doubled(c)
    }
}

impl From<E8Vector> for [i64; 8] {
    fn from(v: E8Vector) -> Self {
        v.doubled
    }
}

impl fmt::Debug for E8Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for E8Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = if self.is_integral() {
            self.doubled.iter().map(|c| (c / 2).to_string()).collect()
        } else {
            self.doubled.iter().map(|c| format!("{c}/2")).collect()
        };
        write!(f, "({})", parts.join(", "))
    }
}

impl E8Vector {
    pub fn zero() -> Self {
        Self { doubled: [0; 8] }
    }

    /// Builds a vector from doubled coordinates, checking membership.
    pub fn from_doubled(c: [i64; 8]) -> Result<Self, E8Error> {
        if is_in_e8(&c) {
            Ok(Self { doubled: c })
        } else {
            Err(E8Error::NotInE8(c))
        }
    }

    /// Builds the vector Σ x_i e_i from integer coefficients.
    pub fn from_integral(x: [i64; 8]) -> Result<Self, E8Error> {
        Self::from_doubled(x.map(|v| 2 * v))
    }

    pub fn doubled(&self) -> [i64; 8] {
        self.doubled
    }

    /// True when all coordinates are integers (the vector lies in D8).
    pub fn is_integral(&self) -> bool {
        self.doubled[0].rem_euclid(2) == 0
    }

    pub fn is_zero(&self) -> bool {
        self.doubled.iter().all(|&c| c == 0)
    }

    /// The exact inner product Σ x_i y_i.
    pub fn inner(&self, other: &Self) -> i128 {
        let s: i128 = self
            .doubled
            .iter()
            .zip(other.doubled.iter())
            .map(|(&a, &b)| a as i128 * b as i128)
            .sum();
        debug_assert_eq!(s.rem_euclid(4), 0);
        s / 4
    }

    pub fn norm(&self) -> i128 {
        self.inner(self)
    }

    pub fn neg(&self) -> Self {
        Self {
            doubled: self.doubled.map(|c| -c),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut d = self.doubled;
        for (x, y) in d.iter_mut().zip(other.doubled.iter()) {
            *x += y;
        }
        Self { doubled: d }
    }

    pub fn scale(&self, k: i64) -> Self {
        Self {
            doubled: self.doubled.map(|c| c * k),
        }
    }
}

/// Number of roots, split by coordinate type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct RootCount {
    pub integral: u32,
    pub fractional: u32,
}

impl RootCount {
    pub fn total(&self) -> u32 {
        self.integral + self.fractional
    }
}

/// All 240 roots: 112 of the form ±e_i ± e_j followed by the 128 vectors
/// ½(±e_1 ± … ± e_8) with an even number of minus signs.
pub fn all_roots() -> &'static [E8Vector] {
    static ROOTS: OnceLock<Vec<E8Vector>> = OnceLock::new();
    ROOTS.get_or_init(|| {
        let mut roots = Vec::with_capacity(240);
        for i in 0..8 {
            for j in (i + 1)..8 {
                for si in [2i64, -2] {
                    for sj in [2i64, -2] {
                        let mut c = [0i64; 8];
                        c[i] = si;
                        c[j] = sj;
                        roots.push(E8Vector { doubled: c });
                    }
                }
            }
        }
        for mask in 0u32..256 {
            if mask.count_ones() % 2 == 0 {
                let mut c = [1i64; 8];
                for (k, x) in c.iter_mut().enumerate() {
                    if mask & (1 << k) != 0 {
                        *x = -1;
                    }
                }
                roots.push(E8Vector { doubled: c });
            }
        }
        roots
    })
}

/// Roots orthogonal to a set of vectors, with their classification.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrthogonalRoots {
    pub count: RootCount,
    pub roots: Vec<E8Vector>,
}

/// The oracle: scans all 240 roots and keeps those orthogonal to every `v`.
pub fn roots_orthogonal_to(vs: &[E8Vector]) -> OrthogonalRoots {
    let roots: Vec<E8Vector> = all_roots()
        .iter()
        .filter(|r| vs.iter().all(|v| r.inner(v) == 0))
        .copied()
        .collect();
    let integral = roots.iter().filter(|r| r.is_integral()).count() as u32;
    let fractional = roots.len() as u32 - integral;
    OrthogonalRoots {
        count: RootCount {
            integral,
            fractional,
        },
        roots,
    }
}

/// The fixed integral basis of E8 used for coordinate solves:
/// ½(e1−e2−…−e7+e8), e1+e2, e2−e1, e3−e2, …, e7−e6.
pub fn e8_basis() -> [E8Vector; 8] {
    let mut basis = [E8Vector::zero(); 8];
    basis[0] = E8Vector {
        doubled: [1, -1, -1, -1, -1, -1, -1, 1],
    };
    basis[1] = E8Vector {
        doubled: [2, 2, 0, 0, 0, 0, 0, 0],
    };
    for k in 2..8 {
        let mut c = [0i64; 8];
        c[k - 1] = 2;
        c[k - 2] = -2;
        basis[k] = E8Vector { doubled: c };
    }
    basis
}

/// Coordinates of `v` in [`e8_basis`]; always integral since the basis is unimodular.
pub fn basis_coordinates(v: &E8Vector) -> [i64; 8] {
    let c = v.doubled;
    // Only the first basis vector touches the eighth coordinate (doubled value 1).
    let k0 = c[7];
    // w = v − k0·b0, in ordinary coordinates; its last entry is 0.
    let b0 = e8_basis()[0].doubled;
    let w: Vec<i64> = (0..7).map(|i| (c[i] - k0 * b0[i]) / 2).collect();
    // w_k = k_k − k_{k+1} for 3 ≤ k ≤ 7 (1-based, k_8 = 0); w_2 = k1 + k2 − k3; w_1 = k1 − k2.
    let mut k = [0i64; 8];
    k[0] = k0;
    k[7] = w[6];
    for idx in (3..7).rev() {
        // coefficient of b_idx (1-based coordinate idx)
        k[idx] = w[idx - 1] + k[idx + 1];
    }
    let s = w[1] + k[3];
    k[1] = (w[0] + s) / 2;
    k[2] = (s - w[0]) / 2;
    debug_assert_eq!(
        reconstruct(&k),
        *v,
        "basis solve failed for {v}: coefficients {k:?}"
    );
    k
}

fn reconstruct(k: &[i64; 8]) -> E8Vector {
    e8_basis()
        .iter()
        .zip(k.iter())
        .fold(E8Vector::zero(), |acc, (b, &x)| acc.add(&b.scale(x)))
}

/// True iff the sublattice spanned by `vs` is primitive in E8, i.e. all
/// Smith invariant factors of the 8×k coordinate matrix equal 1.
pub fn is_primitive_embedding(vs: &[E8Vector]) -> Result<bool, E8Error> {
    if vs.is_empty() {
        return Ok(true);
    }
    let coords: Vec<[i64; 8]> = vs.iter().map(basis_coordinates).collect();
    let m: IntMatrix = (0..8)
        .map(|row| coords.iter().map(|c| BigInt::from(c[row])).collect())
        .collect();
    let snf = smith_normal_form(&m);
    if snf.diag.iter().any(|d| d.is_zero()) {
        return Err(E8Error::DependentVectors);
    }
    Ok(snf.diag.iter().all(|d| d.is_one()))
}

/// Generators e_i + e_{i+4} of V₊.
pub fn vplus_gens() -> [E8Vector; 4] {
    std::array::from_fn(|i| {
        let mut c = [0i64; 8];
        c[i] = 2;
        c[i + 4] = 2;
        E8Vector { doubled: c }
    })
}

/// Generators e_i − e_{i+4} of V₋.
pub fn vminus_gens() -> [E8Vector; 4] {
    std::array::from_fn(|i| {
        let mut c = [0i64; 8];
        c[i] = 2;
        c[i + 4] = -2;
        E8Vector { doubled: c }
    })
}

/// True iff `v` lies in the lattice spanned by the V₋ generators.
pub fn is_in_vminus(v: &E8Vector) -> bool {
    let c = v.doubled;
    v.is_integral() && (0..4).all(|i| c[i + 4] == -c[i])
}

/// True iff `v` lies in the lattice spanned by the V₊ generators.
pub fn is_in_vplus(v: &E8Vector) -> bool {
    let c = v.doubled;
    v.is_integral() && (0..4).all(|i| c[i + 4] == c[i])
}

/// Number of the 8 roots ±(e_i − e_{i+4}) of V₋ orthogonal to `v1`.
pub fn roots_in_vminus_orthogonal_to(v1: &E8Vector) -> Result<u32, E8Error> {
    if v1.is_zero() {
        return Err(E8Error::ZeroVector);
    }
    if !is_in_vminus(v1) {
        return Err(E8Error::NotInVminus);
    }
    let count = vminus_gens()
        .iter()
        .filter(|g| g.inner(v1) == 0)
        .count() as u32;
    Ok(2 * count)
}

/// E8-side ramification witness: a root s with (s, v1) = 0 and (s, v2) even
/// and nonzero. Returns the first such root in table order.
pub fn find_witness_root(v1: &E8Vector, v2: &E8Vector) -> Option<E8Vector> {
    all_roots().iter().copied().find(|s| {
        let p = s.inner(v2);
        s.inner(v1) == 0 && p != 0 && p % 2 == 0
    })
}

/// A lattice embedding Q ↪ E8 described by the images of a basis of Q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub gram: GramMatrix,
    pub images: Vec<E8Vector>,
    pub construction_tag: String,
    pub primitive: bool,
}

impl Embedding {
    /// Computes the Gram matrix of the images and their primitivity.
    pub fn from_images(images: Vec<E8Vector>, construction_tag: impl Into<String>) -> Result<Self, E8Error> {
        let gram = gram_of(&images)?;
        let primitive = is_primitive_embedding(&images)?;
        Ok(Self {
            gram,
            images,
            construction_tag: construction_tag.into(),
            primitive,
        })
    }

    /// True iff the images reproduce `target` exactly.
    pub fn reproduces(&self, target: &GramMatrix) -> bool {
        &self.gram == target
    }

    pub fn orthogonal_roots(&self) -> OrthogonalRoots {
        roots_orthogonal_to(&self.images)
    }
}

/// Gram matrix of a list of E8 vectors.
pub fn gram_of(images: &[E8Vector]) -> Result<GramMatrix, LatticeError> {
    GramMatrix::new(
        images
            .iter()
            .map(|a| images.iter().map(|b| BigInt::from(a.inner(b))).collect())
            .collect(),
    )
}
