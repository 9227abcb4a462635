//! Explicit primitive embeddings of the small positive-definite lattices into E8.
//!
//! Four constructions are provided:
//!
//! * [`embed_gamma_ge3`] — the rank-2 lattice [[M, N], [N, P]] for divisibility
//!   γ ≥ 3, split into six cases according to the auxiliary integers Ω, Θ, S
//!   (and Ξ in the second case);
//! * [`embed_gamma1`] — the diagonal lattice ⟨2(n−1)⟩ ⊕ ⟨2d⟩ for γ = 1, with
//!   v₁ ∈ V₋ and v₂ ∈ V₊;
//! * [`embed_k32_div2`] — Q_t = [[2, −1], [−1, 2t]] for K3^[2] with
//!   divisibility 2, including the half-integral embedding at t = 21;
//! * [`embed_og10_div3`] — the rank-3 OG10 lattice, using the tabulated
//!   parameters for 5 ≤ t ≤ 66 and the windowed recipe beyond.
//!
//! Every constructor re-checks the Gram matrix of its images against the
//! target and computes primitivity by Smith normal form. Root counts are left
//! to the oracle in [`crate::e8_roots`]; this module additionally exposes the
//! integral roots predicted by the case analysis and the tabulated
//! fractional roots, so that the oracle's root lists can be compared exactly.

use num_bigint::BigInt;
use serde::Serialize;
use thiserror::Error;

use crate::diophantine::{solve_parity, DiophantineError, DiophantineSolution, ParityMode};
use crate::e8_roots::{is_in_vminus, is_in_vplus, vminus_gens, vplus_gens, E8Error, E8Vector, Embedding, RootCount};
use crate::lattice_core::{gram_qt_k32, gram_qt_og10, GramMatrix};
use crate::squares::{
    four_squares_constrained, three_squares_distinct_coprime, three_squares_distinct_coprime_all,
    three_squares_positive_coprime, FourSquareMode, SquaresError, THREE_POS_COPRIME,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbedError {
    #[error("hypothesis `{check}` violated: {detail}")]
    HypothesisViolated { check: String, detail: String },
    #[error("open case: {0}")]
    OpenCase(String),
    #[error("covered by {citation}: {detail}")]
    Literature { citation: String, detail: String },
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl EmbedError {
    /// The failing check name for [`EmbedError::HypothesisViolated`].
    pub fn check_name(&self) -> Option<&str> {
        match self {
            EmbedError::HypothesisViolated { check, .. } => Some(check),
            _ => None,
        }
    }
}

fn violated(check: &str, detail: impl Into<String>) -> EmbedError {
    EmbedError::HypothesisViolated {
        check: check.to_string(),
        detail: detail.into(),
    }
}

impl From<E8Error> for EmbedError {
    fn from(e: E8Error) -> Self {
        EmbedError::Internal(e.to_string())
    }
}

impl From<SquaresError> for EmbedError {
    fn from(e: SquaresError) -> Self {
        violated("star_domain", e.to_string())
    }
}

fn iv(c: [i64; 8]) -> Result<E8Vector, EmbedError> {
    Ok(E8Vector::from_integral(c)?)
}

fn build(images: Vec<E8Vector>, tag: &str, target: &GramMatrix) -> Result<Embedding, EmbedError> {
    let emb = Embedding::from_images(images, tag)?;
    if !emb.reproduces(target) {
        return Err(EmbedError::Internal(format!(
            "{tag}: Gram matrix {:?} does not reproduce the target {:?}",
            emb.gram.to_strings(),
            target.to_strings()
        )));
    }
    if !emb.primitive {
        return Err(violated("primitive", format!("{tag}: the images span a non-primitive sublattice")));
    }
    Ok(emb)
}

// ---------------------------------------------------------------------------
// γ ≥ 3
// ---------------------------------------------------------------------------

/// Which case of the γ ≥ 3 construction produced an embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecipeCase {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
}

impl RecipeCase {
    pub fn tag(&self) -> &'static str {
        match self {
            RecipeCase::Case1 => "gamma_ge3/case1",
            RecipeCase::Case2 => "gamma_ge3/case2",
            RecipeCase::Case3 => "gamma_ge3/case3",
            RecipeCase::Case4 => "gamma_ge3/case4",
            RecipeCase::Case5 => "gamma_ge3/case5",
            RecipeCase::Case6 => "gamma_ge3/case6",
        }
    }
}

/// The auxiliary data fixed by the γ ≥ 3 construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OmegaThetaSelection {
    pub omega: u8,
    pub theta: u8,
    /// S = P − Σxᵢ² − 2Θ².
    pub s: i64,
    /// Ξ, set only in the second case.
    pub xi: Option<u8>,
    pub case: RecipeCase,
    /// α with M − 2Ω² = Σαᵢ², α₁ > α₂ > α₃ ≥ 0.
    pub alphas: [i64; 3],
    /// Index of α in the enumeration of decompositions (0 = canonical).
    pub alpha_index: usize,
    /// Minimal-norm solution of α·X = N − 2ΩΘ.
    pub solution: DiophantineSolution,
    /// Coefficients of v₂ on e₄, …, e₈.
    pub tail: [i64; 5],
}

/// The exceptional sets of M entering the Ω table.
pub const OMEGA_TWO: &[i64] = &[18, 22, 102];
pub const OMEGA_THREE: &[i64] = &[104];

/// Ω as a function of M (M even).
pub fn omega_of(m: i64) -> u8 {
    if OMEGA_TWO.contains(&m) {
        2
    } else if OMEGA_THREE.contains(&m) {
        3
    } else if m.rem_euclid(4) == 2 {
        0
    } else {
        1
    }
}

/// Θ as a function of P: 0 if 4 | P, 1 otherwise.
pub fn theta_of(p: i64) -> u8 {
    if p.rem_euclid(4) == 0 {
        0
    } else {
        1
    }
}

/// Values of S excluded when Ω ≠ 0.
pub const S_EXCLUDED_OMEGA: &[i64] = &[6, 9, 18, 22, 33, 57, 102, 177];
/// Values of S handled by the second case when Ω = Θ = 0 (Ξ = 2).
pub const S_CASE2_THETA0: &[i64] = &[13, 25, 37, 58, 85, 130];
/// Values of S handled by the second case when Ω = 0, Θ = 1 (Ξ = 3).
pub const S_CASE2_THETA1: &[i64] = &[33, 57, 102, 177];

/// Checks the premises on S; returns the failing check name.
fn check_s(omega: u8, theta: u8, s: i64) -> Result<(), EmbedError> {
    if s <= 5 {
        return Err(violated("S_gt_5", format!("S = {s} ≤ 5")));
    }
    if !matches!(s.rem_euclid(8), 1 | 2 | 5 | 6) {
        return Err(violated("S_residue", format!("S = {s} ≡ {} mod 8", s.rem_euclid(8))));
    }
    let excluded = match (omega, theta) {
        (0, 0) => s == 8,
        (0, _) => s == 6,
        _ => S_EXCLUDED_OMEGA.contains(&s),
    };
    if excluded {
        return Err(violated("S_excluded", format!("S = {s} is excluded for Ω = {omega}, Θ = {theta}")));
    }
    Ok(())
}

fn parts3(d: Option<crate::squares::SquaresDecomposition>) -> Option<[i64; 3]> {
    d.map(|d| [d.parts[0] as i64, d.parts[1] as i64, d.parts[2] as i64])
}

/// Selects the case and the coefficients of v₂ on e₄…e₈ (and Ξ).
fn select_tail(omega: u8, theta: u8, s: i64) -> Result<(RecipeCase, Option<u8>, [i64; 5]), EmbedError> {
    let th = theta as i64;
    let su = s as u64;
    let no_tail = |what: &str| violated("tail_decomposition", format!("{what} has no admissible decomposition"));
    if omega != 0 {
        let y = parts3(three_squares_distinct_coprime(su)?).ok_or_else(|| no_tail(&format!("S = {s}")))?;
        return Ok((RecipeCase::Case1, None, [th, th, y[0], y[1], y[2]]));
    }
    match (theta, s) {
        (0, 10) => Ok((RecipeCase::Case3, None, [1, 1, 2, 2, 0])),
        (1, 9) => Ok((RecipeCase::Case4, None, [0, 0, 3, 1, 1])),
        (1, 18) => Ok((RecipeCase::Case5, None, [1, 1, 3, 3, 0])),
        (1, 22) => Ok((RecipeCase::Case6, None, [1, 1, 3, 3, 2])),
        (0, _) if S_CASE2_THETA0.contains(&s) => case2(s, th, 2),
        (1, _) if S_CASE2_THETA1.contains(&s) => case2(s, th, 3),
        (0, _) => {
            let y = parts3(three_squares_positive_coprime(su)?).ok_or_else(|| no_tail(&format!("S = {s}")))?;
            Ok((RecipeCase::Case1, None, [0, 0, y[0], y[1], y[2]]))
        }
        _ => {
            let y = parts3(three_squares_distinct_coprime(su)?).ok_or_else(|| no_tail(&format!("S = {s}")))?;
            Ok((RecipeCase::Case1, None, [th, th, y[0], y[1], y[2]]))
        }
    }
}

fn case2(s: i64, theta: i64, xi: u8) -> Result<(RecipeCase, Option<u8>, [i64; 5]), EmbedError> {
    let x = xi as i64;
    let r = s + 2 * theta - 2 * x * x;
    let y = parts3(three_squares_distinct_coprime(r as u64)?)
        .ok_or_else(|| violated("tail_decomposition", format!("R = {r} has no distinct coprime decomposition")))?;
    Ok((RecipeCase::Case2, Some(xi), [x, x, y[0], y[1], y[2]]))
}

/// The γ ≥ 3 construction for the lattice [[M, N], [N, P]].
///
/// Tries the canonical decomposition of M − 2Ω² first and falls back across
/// all of them; the first failure of the canonical decomposition is reported
/// when none succeeds.
pub fn embed_gamma_ge3(m: i64, n: i64, p: i64) -> Result<(Embedding, OmegaThetaSelection), EmbedError> {
    if m % 2 != 0 {
        return Err(violated("M_even", format!("M = {m} is odd")));
    }
    if m <= 8 {
        return Err(violated("M_gt_8", format!("M = {m} ≤ 8")));
    }
    if m == 20 || m == 24 {
        return Err(violated("M_excluded", format!("M = {m} ∈ {{20, 24}}")));
    }
    if p <= 0 || p % 2 != 0 {
        return Err(violated("P_even", format!("P = {p} is not a positive even integer")));
    }
    if (m as i128) * (p as i128) - (n as i128) * (n as i128) <= 0 {
        return Err(violated("positive_definite", format!("MP − N² ≤ 0 for ({m}, {n}, {p})")));
    }
    let omega = omega_of(m);
    let theta = theta_of(p);
    let om = omega as i64;
    let th = theta as i64;
    let target = (m - 2 * om * om) as u64;
    let decompositions = three_squares_distinct_coprime_all(target)?;
    if decompositions.is_empty() {
        return Err(violated(
            "alpha_decomposition",
            format!("M − 2Ω² = {target} is not a sum of three distinct coprime squares"),
        ));
    }
    let k = n - 2 * om * th;
    let mode = ParityMode::for_rhs(k);
    let gram = GramMatrix::rank2(&BigInt::from(m), &BigInt::from(n), &BigInt::from(p))
        .map_err(|e| EmbedError::Internal(e.to_string()))?;
    let mut first_error = None;
    for (idx, dec) in decompositions.iter().enumerate() {
        let alphas = [dec.parts[0] as i64, dec.parts[1] as i64, dec.parts[2] as i64];
        let attempt = (|| {
            let solution = solve_parity(alphas, k, mode).map_err(|e| match e {
                DiophantineError::NoSolution { .. } => violated("diophantine", e.to_string()),
                other => EmbedError::Internal(other.to_string()),
            })?;
            let x = solution.xs;
            let s = p - x.iter().map(|v| v * v).sum::<i64>() - 2 * th * th;
            check_s(omega, theta, s)?;
            let (case, xi, tail) = select_tail(omega, theta, s)?;
            let v1_tail = if case == RecipeCase::Case1 { [om, om] } else { [0, 0] };
            let v1 = iv([alphas[0], alphas[1], alphas[2], v1_tail[0], v1_tail[1], 0, 0, 0])?;
            let v2 = iv([x[0], x[1], x[2], tail[0], tail[1], tail[2], tail[3], tail[4]])?;
            let emb = build(vec![v1, v2], case.tag(), &gram)?;
            Ok((
                emb,
                OmegaThetaSelection {
                    omega,
                    theta,
                    s,
                    xi,
                    case,
                    alphas,
                    alpha_index: idx,
                    solution,
                    tail,
                },
            ))
        })();
        match attempt {
            Ok(found) => return Ok(found),
            Err(e) => {
                if first_error.is_none() {
                    first_error = Some(e);
                }
            }
        }
    }
    Err(first_error.expect("at least one decomposition was tried"))
}

// ---------------------------------------------------------------------------
// γ = 1
// ---------------------------------------------------------------------------

/// The sublattices V₊ = ⟨eᵢ + eᵢ₊₄⟩ and V₋ = ⟨eᵢ − eᵢ₊₄⟩ of E8.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VPlusMinus {
    pub vplus_gens: [E8Vector; 4],
    pub vminus_gens: [E8Vector; 4],
}

impl Default for VPlusMinus {
    fn default() -> Self {
        Self {
            vplus_gens: vplus_gens(),
            vminus_gens: vminus_gens(),
        }
    }
}

impl VPlusMinus {
    /// Mutual orthogonality and Gram diag(2, 2, 2, 2) on each side.
    pub fn verify(&self) -> bool {
        let diag = |g: &[E8Vector; 4]| {
            (0..4).all(|i| (0..4).all(|j| g[i].inner(&g[j]) == if i == j { 2 } else { 0 }))
        };
        let cross = self
            .vplus_gens
            .iter()
            .all(|p| self.vminus_gens.iter().all(|m| p.inner(m) == 0));
        diag(&self.vplus_gens) && diag(&self.vminus_gens) && cross
    }
}

/// The excluded values of n − 1 for γ = 1 (positive coprime exceptions > 6).
pub fn gamma1_excluded() -> impl Iterator<Item = u64> {
    THREE_POS_COPRIME.iter().copied().filter(|&v| v > 6)
}

/// Coefficients (α, x) of the γ = 1 embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gamma1Parameters {
    pub alphas: [u64; 3],
    pub xs: [u64; 4],
}

/// Checks the γ = 1 premises and computes (α, x).
pub fn gamma1_parameters(n: u64, d: u64) -> Result<Gamma1Parameters, EmbedError> {
    if n < 2 || n - 1 <= 6 {
        return Err(violated("n_minus_1_gt_6", format!("n − 1 = {} ≤ 6", n.saturating_sub(1))));
    }
    let k = n - 1;
    if !matches!(k % 4, 1 | 2) {
        return Err(violated("n_minus_1_residue", format!("n − 1 = {k} ≡ {} mod 4", k % 4)));
    }
    if gamma1_excluded().any(|v| v == k) {
        return Err(violated("n_minus_1_excluded", format!("n − 1 = {k} is an exception")));
    }
    if d < 3 {
        return Err(violated("d_ge_3", format!("d = {d} < 3")));
    }
    if d % 4 == 0 {
        return Err(violated("d_residue", format!("d = {d} ≡ 0 mod 4")));
    }
    let dec = three_squares_positive_coprime(k)?
        .ok_or_else(|| violated("alpha_decomposition", format!("n − 1 = {k} has no positive coprime decomposition")))?;
    let alphas = reorder_gamma1_alphas([dec.parts[0], dec.parts[1], dec.parts[2]]);
    let x = four_squares_constrained(d, FourSquareMode::Gamma1)
        .ok_or_else(|| violated("x_decomposition", format!("d = {d} has no admissible four-square decomposition")))?;
    Ok(Gamma1Parameters {
        alphas,
        xs: [x.parts[0], x.parts[1], x.parts[2], x.parts[3]],
    })
}

/// α₁ = the largest even part, α₂ = the largest odd part, α₃ = the rest.
fn reorder_gamma1_alphas(desc: [u64; 3]) -> [u64; 3] {
    let even = (0..3).find(|&i| desc[i] % 2 == 0).expect("an even part exists");
    let odd = (0..3).find(|&i| desc[i] % 2 == 1).expect("an odd part exists");
    let rest = (0..3).find(|&i| i != even && i != odd).expect("three parts");
    [desc[even], desc[odd], desc[rest]]
}

/// The γ = 1 embedding v₁ ∈ V₋, v₂ ∈ V₊ of ⟨2(n−1)⟩ ⊕ ⟨2d⟩.
pub fn embed_gamma1(n: u64, d: u64) -> Result<(Embedding, VPlusMinus), EmbedError> {
    let params = gamma1_parameters(n, d)?;
    let a = params.alphas.map(|v| v as i64);
    let x = params.xs.map(|v| v as i64);
    let v1 = iv([a[0], a[1], a[2], 0, -a[0], -a[1], -a[2], 0])?;
    let v2 = iv([x[0], x[1], x[2], x[3], x[0], x[1], x[2], x[3]])?;
    let vpm = VPlusMinus::default();
    if !is_in_vminus(&v1) || !is_in_vplus(&v2) {
        return Err(EmbedError::Internal("γ = 1 images are not in V₋ × V₊".into()));
    }
    let two = |v: u64| BigInt::from(2u8) * BigInt::from(v);
    let gram = GramMatrix::new(vec![
        vec![two(n - 1), BigInt::from(0)],
        vec![BigInt::from(0), two(d)],
    ])
    .map_err(|e| EmbedError::Internal(e.to_string()))?;
    let emb = build(vec![v1, v2], "gamma1", &gram)?;
    Ok((emb, vpm))
}

// ---------------------------------------------------------------------------
// K3^[2], divisibility 2
// ---------------------------------------------------------------------------

/// Parameters of the windowed K3^[2] construction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct K32Parameters {
    pub x1: u64,
    pub r: u64,
    /// (x₅, x₆, x₇, x₈), descending.
    pub parts: [u64; 4],
}

fn k32_endpoint(x: u64) -> u64 {
    x * x + (x + 1) * (x + 1) + 6
}

/// The unique x₁ with x₁² + (x₁+1)² + 6 < 2t < (x₁+1)² + (x₁+2)² + 6.
pub fn k32_window(t: u64) -> Result<u64, EmbedError> {
    let two_t = 2 * t;
    if two_t <= k32_endpoint(0) {
        return Err(violated("t_window", format!("2t = {two_t} lies below every window")));
    }
    let mut x = 0;
    while k32_endpoint(x + 1) <= two_t {
        x += 1;
    }
    if k32_endpoint(x) == two_t || k32_endpoint(x + 1) == two_t {
        return Err(EmbedError::Internal(format!("2t = {two_t} is a window endpoint")));
    }
    Ok(x)
}

/// Parameters of the windowed recipe (t ≥ 13, t ≠ 21 uses them verbatim).
pub fn k32_parameters(t: u64) -> Result<K32Parameters, EmbedError> {
    let x1 = k32_window(t)?;
    let r = 2 * t - x1 * x1 - (x1 + 1) * (x1 + 1);
    let dec = four_squares_constrained(r, FourSquareMode::K32)
        .ok_or_else(|| violated("tail_decomposition", format!("R = {r} has no admissible decomposition")))?;
    Ok(K32Parameters {
        x1,
        r,
        parts: [dec.parts[0], dec.parts[1], dec.parts[2], dec.parts[3]],
    })
}

/// The K3^[2] divisibility-2 embedding of Q_t.
pub fn embed_k32_div2(t: u64) -> Result<Embedding, EmbedError> {
    if t < 10 || t == 11 {
        return Err(EmbedError::OpenCase(format!("K3^[2] divisibility 2 with t = {t}")));
    }
    if t == 10 || t == 12 {
        return Err(EmbedError::Literature {
            citation: "GHS13".into(),
            detail: format!("K3^[2] divisibility 2 with t = {t}"),
        });
    }
    let gram = gram_qt_k32(&BigInt::from(t)).map_err(|e| EmbedError::Internal(e.to_string()))?;
    if t == 21 {
        let v1 = iv([-1, 1, 0, 0, 0, 0, 0, 0])?;
        let v2 = E8Vector::from_doubled([1, -1, 11, 5, 3, 3, 1, 1])?;
        return build(vec![v1, v2], "k32/half_integer", &gram);
    }
    let p = k32_parameters(t)?;
    let x1 = p.x1 as i64;
    let y = p.parts.map(|v| v as i64);
    let v1 = iv([1, 1, 0, 0, 0, 0, 0, 0])?;
    let v2 = iv([x1, -(x1 + 1), 0, 0, y[0], y[1], y[2], y[3]])?;
    build(vec![v1, v2], "k32/recipe", &gram)
}

/// Tabulated (integral, fractional) counts for 13 ≤ t ≤ 33, with a flag
/// telling whether the integral count is stated or follows from the
/// predicted integral roots.
pub fn k32_appendix_expectation(t: u64) -> Option<AppendixExpectation> {
    if !(13..=33).contains(&t) {
        return None;
    }
    let (integral, fractional) = match t {
        13 => (Some(10), 4),
        14 => (Some(6), 8),
        21 => (Some(6), 8),
        19 | 20 | 22 | 31 | 32 | 33 => (None, 4),
        _ => (None, 0),
    };
    Some(AppendixExpectation {
        t,
        integral_stated: integral,
        fractional,
    })
}

/// A tabulated row's expected root counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AppendixExpectation {
    pub t: u64,
    /// The integral count when the table states it explicitly.
    pub integral_stated: Option<u32>,
    pub fractional: u32,
}

impl AppendixExpectation {
    /// The expected counts, using `predicted_integral` where nothing is stated.
    pub fn counts(&self, predicted_integral: u32) -> RootCount {
        RootCount {
            integral: self.integral_stated.unwrap_or(predicted_integral),
            fractional: self.fractional,
        }
    }
}

fn pm_pair(i: usize, si: i64, j: usize, sj: i64) -> [E8Vector; 2] {
    let mut c = [0i64; 8];
    c[i] = 2 * si;
    c[j] = 2 * sj;
    let v = E8Vector::from_doubled(c).expect("±e_i±e_j is in E8");
    [v, v.neg()]
}

fn sorted(mut v: Vec<E8Vector>) -> Vec<E8Vector> {
    v.sort();
    v.dedup();
    v
}

/// Integral roots orthogonal to the windowed K3^[2] embedding, as enumerated
/// by the case analysis: ±e₃±e₄; ±e₃±eₖ and ±e₄±eₖ for xₖ = 0;
/// ±(eⱼ − eₖ) for xⱼ = xₖ (and ±(eⱼ + eₖ) when both vanish), j, k ∈ 5..8.
pub fn predicted_integral_roots_k32(p: &K32Parameters) -> Vec<E8Vector> {
    let mut out = Vec::new();
    for s in [1, -1] {
        out.extend(pm_pair(2, 1, 3, s));
    }
    let x = |k: usize| p.parts[k - 4];
    for k in 4..8 {
        if x(k) == 0 {
            for s in [1, -1] {
                out.extend(pm_pair(2, 1, k, s));
                out.extend(pm_pair(3, 1, k, s));
            }
        }
    }
    for j in 4..8 {
        for k in (j + 1)..8 {
            if x(j) == x(k) {
                out.extend(pm_pair(j, 1, k, -1));
                if x(j) == 0 {
                    out.extend(pm_pair(j, 1, k, 1));
                }
            }
        }
    }
    sorted(out)
}

fn half_roots(patterns: impl IntoIterator<Item = [i64; 8]>) -> Vec<E8Vector> {
    let mut out = Vec::new();
    for c in patterns {
        let v = E8Vector::from_doubled(c).expect("tabulated half-integral root is in E8");
        out.push(v);
        out.push(v.neg());
    }
    sorted(out)
}

/// The fractional roots listed for tabulated K3^[2] rows.
pub fn k32_golden_fractional_roots(t: u64) -> Option<Vec<E8Vector>> {
    let pm = [1i64, -1];
    match t {
        13 => Some(half_roots(pm.map(|s| [1, -1, s, s, -1, -1, -1, 1]))),
        14 => Some(half_roots(
            pm.iter()
                .flat_map(|&s| pm.map(move |u| [1, -1, s, s, -1, -1, u, -u])),
        )),
        19 | 20 | 22 | 31 | 32 | 33 => Some(half_roots(pm.map(|s| [1, -1, s, -s, -1, -1, -1, -1]))),
        21 => Some(half_roots(
            pm.iter()
                .flat_map(|&s| pm.map(move |u| [1, 1, s, -s, -s, -s, s * u, -s * u])),
        )),
        _ => None,
    }
}

/// The integral roots listed for the half-integral embedding at t = 21.
pub fn k32_t21_integral_roots() -> Vec<E8Vector> {
    let mut out = Vec::new();
    out.extend(pm_pair(0, 1, 1, 1));
    out.extend(pm_pair(4, 1, 5, -1));
    out.extend(pm_pair(6, 1, 7, -1));
    sorted(out)
}

// ---------------------------------------------------------------------------
// OG10, divisibility 3
// ---------------------------------------------------------------------------

/// Where the OG10 parameters for a given t come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Og10Source {
    /// The windowed recipe with the Θ table.
    Recipe,
    /// A tabulated (x₁, R, Θ, x₆, x₇, x₈) row.
    AppendixRow,
    /// A tabulated row with non-standard Θ and no R.
    Special,
    /// A tabulated explicit coefficient vector.
    Bespoke,
}

/// Parameters of one OG10 embedding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Og10Parameters {
    pub t: u64,
    pub source: Og10Source,
    pub x1: Option<u64>,
    pub r: Option<u64>,
    pub theta: Option<u64>,
    pub tail: Option<[u64; 3]>,
    /// Coefficients of v₃ on e₁, …, e₈.
    pub coefficients: [i64; 8],
}

/// Tabulated rows: (t, x₁, R, Θ, (x₆, x₇, x₈), fractional roots).
pub const OG10_APPENDIX_ROWS: &[(u64, u64, u64, u64, [u64; 3], u32)] = &[
    (8, 0, 15, 1, [3, 2, 0], 12),
    (9, 0, 17, 0, [4, 1, 0], 0),
    (10, 0, 19, 1, [4, 1, 0], 2),
    (11, 0, 21, 0, [4, 2, 1], 4),
    (14, 0, 27, 1, [4, 3, 0], 12),
    (15, 2, 13, 0, [3, 2, 0], 0),
    (16, 2, 15, 1, [3, 2, 0], 2),
    (17, 2, 17, 0, [4, 1, 0], 0),
    (18, 2, 19, 1, [4, 1, 0], 2),
    (19, 2, 21, 0, [4, 2, 1], 4),
    (22, 2, 27, 1, [4, 3, 0], 4),
    (23, 2, 29, 0, [4, 3, 2], 0),
    (24, 2, 31, 1, [5, 2, 0], 4),
    (25, 2, 33, 2, [4, 3, 0], 4),
    (26, 2, 35, 0, [5, 3, 1], 4),
    (29, 2, 41, 0, [5, 4, 0], 0),
    (30, 2, 43, 1, [5, 4, 0], 2),
    (31, 2, 45, 0, [5, 4, 2], 4),
    (32, 2, 47, 1, [5, 4, 2], 4),
    (33, 2, 49, 0, [6, 3, 2], 4),
    (45, 4, 33, 2, [4, 3, 0], 0),
    (50, 4, 43, 1, [6, 2, 1], 0),
    (52, 4, 47, 1, [5, 4, 2], 0),
    (54, 4, 51, 1, [6, 3, 2], 0),
    (55, 4, 53, 0, [7, 2, 0], 0),
    (56, 4, 55, 1, [7, 2, 0], 0),
    (57, 4, 57, 2, [6, 3, 2], 0),
    (58, 4, 59, 0, [7, 3, 1], 0),
    (59, 4, 61, 0, [6, 5, 0], 0),
    (60, 4, 63, 1, [6, 5, 0], 0),
    (61, 4, 65, 0, [7, 4, 0], 0),
    (62, 4, 67, 1, [7, 4, 0], 0),
    (63, 4, 69, 0, [7, 4, 2], 4),
    (64, 4, 71, 1, [7, 4, 2], 4),
    (65, 4, 73, 0, [8, 3, 0], 0),
    (66, 4, 75, 0, [7, 5, 1], 4),
];

/// Special rows: (t, x₁, Θ, (x₆, x₇, x₈), integral, fractional).
pub const OG10_SPECIAL_ROWS: &[(u64, u64, u64, [u64; 3], u32, u32)] = &[
    (20, 2, 3, [2, 1, 0], 2, 2),
    (21, 0, 0, [6, 2, 1], 4, 4),
    (27, 2, 4, [2, 1, 0], 2, 2),
    (34, 2, 5, [1, 0, 0], 6, 0),
];

/// Bespoke rows: (t, coefficients of v₃, integral, fractional).
pub const OG10_BESPOKE_ROWS: &[(u64, [i64; 8], u32, u32)] = &[
    (5, [1, 1, 2, 0, 1, 1, 1, 1], 12, 0),
    (6, [1, 1, 2, 0, 0, 2, 1, 1], 6, 0),
    (7, [1, 1, 2, 2, 1, 1, 1, 1], 12, 0),
    (12, [1, 1, 2, 0, 0, 4, 1, 0], 12, 0),
    (13, [1, 1, 2, 1, 1, 4, 1, 0], 6, 2),
    (28, [2, 2, 3, 5, 3, 2, 1, 0], 0, 2),
];

/// R values with Θ = 1 beyond R ≡ 7 mod 8.
pub const OG10_THETA_ONE: &[u64] = &[19, 27, 43, 51, 67, 99, 123, 163, 187, 267, 627];
/// R values with Θ = 2.
pub const OG10_THETA_TWO: &[u64] = &[33, 57, 177];

/// Θ for the OG10 recipe as a function of R.
pub fn og10_theta(r: u64) -> u64 {
    if OG10_THETA_TWO.contains(&r) {
        2
    } else if r % 8 == 7 || OG10_THETA_ONE.contains(&r) {
        1
    } else {
        0
    }
}

fn og10_endpoint(x: u64) -> u64 {
    2 * x * x + (x + 1) * (x + 1) + 12
}

/// The unique even x₁ with 2x₁² + (x₁+1)² + 12 < 2t < 2(x₁+2)² + (x₁+3)² + 12.
pub fn og10_window(t: u64) -> Result<u64, EmbedError> {
    let two_t = 2 * t;
    if two_t <= og10_endpoint(0) {
        return Err(violated("t_window", format!("2t = {two_t} lies below every window")));
    }
    let mut x = 0;
    while og10_endpoint(x + 2) <= two_t {
        x += 2;
    }
    if og10_endpoint(x) == two_t || og10_endpoint(x + 2) == two_t {
        return Err(EmbedError::Internal(format!("2t = {two_t} is a window endpoint")));
    }
    Ok(x)
}

fn og10_coefficients(x1: u64, theta: u64, tail: [u64; 3]) -> [i64; 8] {
    let (x, th) = (x1 as i64, theta as i64);
    [x, x, x + 1, th, th, tail[0] as i64, tail[1] as i64, tail[2] as i64]
}

/// The parameters used for a given t ≥ 5.
pub fn og10_parameters(t: u64) -> Result<Og10Parameters, EmbedError> {
    if t < 5 {
        return Err(violated("t_ge_5", format!("t = {t} has no in-repo embedding")));
    }
    if let Some(&(_, c, _, _)) = OG10_BESPOKE_ROWS.iter().find(|row| row.0 == t) {
        let norm: i64 = c.iter().map(|v| v * v).sum();
        if norm != 2 * t as i64 {
            return Err(violated(
                "tabulated_row_norm",
                format!("tabulated v₃ = {c:?} has norm {norm}, not 2t = {}", 2 * t),
            ));
        }
        return Ok(Og10Parameters {
            t,
            source: Og10Source::Bespoke,
            x1: None,
            r: None,
            theta: None,
            tail: None,
            coefficients: c,
        });
    }
    if let Some(&(_, x1, theta, tail, _, _)) = OG10_SPECIAL_ROWS.iter().find(|row| row.0 == t) {
        return Ok(Og10Parameters {
            t,
            source: Og10Source::Special,
            x1: Some(x1),
            r: None,
            theta: Some(theta),
            tail: Some(tail),
            coefficients: og10_coefficients(x1, theta, tail),
        });
    }
    if let Some(&(_, x1, r, theta, tail, _)) = OG10_APPENDIX_ROWS.iter().find(|row| row.0 == t) {
        return Ok(Og10Parameters {
            t,
            source: Og10Source::AppendixRow,
            x1: Some(x1),
            r: Some(r),
            theta: Some(theta),
            tail: Some(tail),
            coefficients: og10_coefficients(x1, theta, tail),
        });
    }
    let x1 = og10_window(t)?;
    let r = 2 * t - 2 * x1 * x1 - (x1 + 1) * (x1 + 1);
    let theta = og10_theta(r);
    let s = r
        .checked_sub(2 * theta * theta)
        .ok_or_else(|| violated("S_positive", format!("R − 2Θ² < 0 for R = {r}")))?;
    let dec = three_squares_distinct_coprime(s)?
        .ok_or_else(|| violated("tail_decomposition", format!("S = {s} has no distinct coprime decomposition")))?;
    let tail = [dec.parts[0], dec.parts[1], dec.parts[2]];
    Ok(Og10Parameters {
        t,
        source: Og10Source::Recipe,
        x1: Some(x1),
        r: Some(r),
        theta: Some(theta),
        tail: Some(tail),
        coefficients: og10_coefficients(x1, theta, tail),
    })
}

/// The OG10 divisibility-3 embedding of the rank-3 lattice Q_t.
pub fn embed_og10_div3(t: u64) -> Result<Embedding, EmbedError> {
    if t < 4 {
        return Err(EmbedError::OpenCase(format!("OG10 divisibility 3 with t = {t}")));
    }
    if t == 4 {
        return Err(EmbedError::Literature {
            citation: "GHS11".into(),
            detail: "OG10 divisibility 3 with t = 4".into(),
        });
    }
    let p = og10_parameters(t)?;
    let gram = gram_qt_og10(&BigInt::from(t)).map_err(|e| EmbedError::Internal(e.to_string()))?;
    let v1 = iv([-1, 1, 0, 0, 0, 0, 0, 0])?;
    let v2 = iv([0, -1, 1, 0, 0, 0, 0, 0])?;
    let v3 = iv(p.coefficients)?;
    let tag = match p.source {
        Og10Source::Recipe => "og10/recipe",
        Og10Source::AppendixRow => "og10/appendix",
        Og10Source::Special => "og10/special",
        Og10Source::Bespoke => "og10/bespoke",
    };
    build(vec![v1, v2, v3], tag, &gram)
}

/// Tabulated counts for 5 ≤ t ≤ 66 (the recipe rows 35 ≤ t ≤ 53 carry no
/// fractional roots).
pub fn og10_appendix_expectation(t: u64) -> Option<AppendixExpectation> {
    let row = |integral_stated, fractional| {
        Some(AppendixExpectation {
            t,
            integral_stated,
            fractional,
        })
    };
    if let Some(r) = OG10_BESPOKE_ROWS.iter().find(|r| r.0 == t) {
        return row(Some(r.2), r.3);
    }
    if let Some(r) = OG10_SPECIAL_ROWS.iter().find(|r| r.0 == t) {
        return row(Some(r.4), r.5);
    }
    if let Some(r) = OG10_APPENDIX_ROWS.iter().find(|r| r.0 == t) {
        return row(None, r.5);
    }
    if (35..=53).contains(&t) {
        return row(None, 0);
    }
    None
}

/// Integral roots orthogonal to an OG10 embedding whose v₃ has equal
/// coefficients Θ on e₄, e₅, as enumerated by the case analysis:
/// ±(e₄ − e₅); ±(e₄ + e₅) if Θ = 0; ±e₄±eᵢ, ±e₅±eᵢ if Θ = xᵢ = 0;
/// ±(e₄ − eᵢ), ±(e₅ − eᵢ) if Θ = xᵢ ≠ 0; ±eᵢ±eⱼ for xᵢ = xⱼ = 0 and
/// ±(eᵢ − eⱼ) for xᵢ = xⱼ (i, j ∈ 6..8).
pub fn predicted_integral_roots_og10(p: &Og10Parameters) -> Option<Vec<E8Vector>> {
    let theta = p.theta?;
    let tail = p.tail?;
    let x = |i: usize| tail[i - 5];
    let mut out = Vec::new();
    out.extend(pm_pair(3, 1, 4, -1));
    if theta == 0 {
        out.extend(pm_pair(3, 1, 4, 1));
    }
    for i in 5..8 {
        if x(i) == theta {
            for k in [3, 4] {
                out.extend(pm_pair(k, 1, i, -1));
                if theta == 0 {
                    out.extend(pm_pair(k, 1, i, 1));
                }
            }
        }
    }
    for i in 5..8 {
        for j in (i + 1)..8 {
            if x(i) == x(j) {
                out.extend(pm_pair(i, 1, j, -1));
                if x(i) == 0 {
                    out.extend(pm_pair(i, 1, j, 1));
                }
            }
        }
    }
    Some(sorted(out))
}

/// The fractional roots listed for tabulated OG10 rows.
pub fn og10_golden_fractional_roots(t: u64) -> Option<Vec<E8Vector>> {
    match t {
        63 | 64 | 66 => Some(half_roots([1i64, -1].map(|s| [1, 1, 1, s, -s, -1, -1, -1]))),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e8_roots::{roots_in_vminus_orthogonal_to, roots_orthogonal_to};

    #[test]
    fn worked_example_component_one() {
        // n = 26, γ = 5, a = 1, t = 10: (M, N, P) = (50, −10, 20).
        let (emb, sel) = embed_gamma_ge3(50, -10, 20).unwrap();
        assert_eq!(sel.solution.norm, 11);
        assert_eq!(sel.omega, 0);
        assert_eq!(sel.theta, 0);
        assert_eq!(sel.s, 20 - 11);
        let total = emb.orthogonal_roots().count.total();
        assert!((2..=14).contains(&total), "total {total}");
    }

    #[test]
    fn excluded_m() {
        let e = embed_gamma_ge3(20, 0, 100).unwrap_err();
        assert_eq!(e.check_name(), Some("M_excluded"));
        assert_eq!(embed_gamma_ge3(8, 0, 100).unwrap_err().check_name(), Some("M_gt_8"));
    }

    #[test]
    fn recipe_with_pinned_third_unknown() {
        let (emb, sel) = embed_gamma_ge3(10, 0, 1000).unwrap();
        assert_eq!(sel.alphas, [3, 1, 0]);
        assert_eq!(sel.solution.xs, [1, -3, 1]);
        assert_eq!(sel.s, 989);
        assert_eq!(sel.case, RecipeCase::Case1);
        assert!(emb.primitive);
        let total = emb.orthogonal_roots().count.total();
        assert!((2..=14).contains(&total));
    }

    #[test]
    fn gamma1_examples() {
        let p = gamma1_parameters(10, 3).unwrap();
        assert_eq!(p.alphas, [2, 1, 2]);
        assert_eq!(p.xs, [0, 1, 1, 1]);
        let (emb, vpm) = embed_gamma1(10, 3).unwrap();
        assert!(vpm.verify());
        assert!(emb.primitive);
        assert_eq!(roots_in_vminus_orthogonal_to(&emb.images[0]).unwrap() / 2 % 2, 1);
        assert_eq!(
            embed_gamma1(11, 3).unwrap_err().check_name(),
            Some("n_minus_1_excluded")
        );
        let (emb, _) = embed_gamma1(10, 5).unwrap();
        let count = emb.orthogonal_roots().count;
        assert_eq!(count.integral, 6);
        assert!((6..=10).contains(&count.total()));
    }

    #[test]
    fn k32_examples() {
        assert!(matches!(embed_k32_div2(11), Err(EmbedError::OpenCase(_))));
        assert!(matches!(embed_k32_div2(12), Err(EmbedError::Literature { .. })));
        let p = k32_parameters(13).unwrap();
        assert_eq!((p.x1, p.r, p.parts), (2, 13, [2, 2, 2, 1]));
        let p = k32_parameters(34).unwrap();
        assert_eq!((p.x1, p.r, p.parts), (5, 7, [2, 1, 1, 1]));
        let c = embed_k32_div2(34).unwrap().orthogonal_roots().count;
        assert_eq!((c.integral, c.fractional), (10, 0));
        let c = embed_k32_div2(21).unwrap().orthogonal_roots().count;
        assert_eq!((c.integral, c.fractional), (6, 8));
    }

    #[test]
    fn og10_examples() {
        let c = embed_og10_div3(28).unwrap().orthogonal_roots().count;
        assert_eq!((c.integral, c.fractional), (0, 2));
        // The tabulated vector for t = 5 has 12 integral roots, plus the two
        // fractional roots ±½(e₁+e₂+e₃+e₄−e₅−e₆−e₇−e₈).
        let c = embed_og10_div3(5).unwrap().orthogonal_roots().count;
        assert_eq!((c.integral, c.fractional), (12, 2));
        for t in [12, 13] {
            assert_eq!(
                embed_og10_div3(t).unwrap_err().check_name(),
                Some("tabulated_row_norm")
            );
        }
        let p = og10_parameters(100).unwrap();
        assert_eq!((p.x1, p.r, p.theta, p.tail), (Some(6), Some(79), Some(1), Some([8, 3, 2])));
        let c = embed_og10_div3(100).unwrap().orthogonal_roots().count;
        assert_eq!((c.integral, c.fractional), (2, 0));
        assert!(matches!(embed_og10_div3(4), Err(EmbedError::Literature { .. })));
        assert!(matches!(embed_og10_div3(3), Err(EmbedError::OpenCase(_))));
    }

    #[test]
    fn golden_roots_are_orthogonal() {
        for t in [13, 14, 19, 20, 21, 22, 31, 32, 33] {
            let emb = embed_k32_div2(t).unwrap();
            let frac: Vec<_> = sorted(
                roots_orthogonal_to(&emb.images)
                    .roots
                    .into_iter()
                    .filter(|r| !r.is_integral())
                    .collect(),
            );
            assert_eq!(frac, k32_golden_fractional_roots(t).unwrap(), "t = {t}");
        }
    }

    #[test]
    fn every_recipe_case_is_reachable() {
        let mut seen = std::collections::BTreeMap::new();
        for m in (10..=40).step_by(2) {
            for p in (2..=80).step_by(2) {
                for n in -m..=m {
                    if let Ok((emb, sel)) = embed_gamma_ge3(m, n, p) {
                        let count = emb.orthogonal_roots().count.total();
                        assert!(emb.primitive, "({m}, {n}, {p}) is not primitive");
                        assert!((2..=14).contains(&count), "({m}, {n}, {p}) has {count} roots");
                        seen.entry(sel.case).or_insert((m, n, p));
                    }
                }
            }
        }
        for case in [
            RecipeCase::Case1,
            RecipeCase::Case2,
            RecipeCase::Case3,
            RecipeCase::Case4,
            RecipeCase::Case5,
            RecipeCase::Case6,
        ] {
            assert!(seen.contains_key(&case), "{case:?} never reached: {seen:?}");
        }
    }
}
