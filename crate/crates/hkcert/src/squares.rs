//! Constrained sums of squares.
//!
//! Three- and four-square decompositions with distinctness, coprimality,
//! positivity and parity constraints. Every constructive answer comes from a
//! direct bounded search in lexicographically descending order, so the first
//! hit is the canonical (lexicographically largest) decomposition. The known
//! exception lists serve only as fast rejections and as test oracles; inputs
//! at or above [`STAR_BOUND`], where an unknown exceptional integer may live,
//! are rejected outright.

use std::sync::OnceLock;

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

/// Inputs at or above this bound are outside the range where the exception
/// lists are known to be complete.
pub const STAR_BOUND: u64 = 50_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum SquaresError {
    #[error("{0} is at or above 5·10^10, where the exception lists are not known to be complete")]
    StarDomainExceeded(u64),
}

/// A decomposition `target = Σ parts_i²` with its constraint flags.
///
/// Parts are descending, except for [`FourSquareMode::Gamma1`] where they are
/// returned in the role order (x₁, x₂, x₃, x₄) used by the γ = 1 embedding.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SquaresDecomposition {
    pub parts: Vec<u64>,
    pub target: u64,
    pub pairwise_distinct: bool,
    pub coprime: bool,
    pub all_positive: bool,
}

impl SquaresDecomposition {
    pub fn new(parts: Vec<u64>) -> Self {
        let target = parts.iter().map(|p| p * p).sum();
        let mut sorted = parts.clone();
        sorted.sort_unstable();
        let pairwise_distinct = sorted.windows(2).all(|w| w[0] != w[1]);
        let coprime = parts.iter().fold(0u64, |g, &p| g.gcd(&p)) == 1;
        let all_positive = parts.iter().all(|&p| p > 0);
        Self {
            parts,
            target,
            pairwise_distinct,
            coprime,
            all_positive,
        }
    }

    /// Re-derives the sum and every flag from the parts.
    pub fn recheck(&self) -> bool {
        *self == Self::new(self.parts.clone())
    }

    pub fn is_descending(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }
}

/// The exception lists for the representation theorems used by the recipes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExceptionTables {
    /// n ≢ 0,4,7 (mod 8) that are not sums of three positive coprime squares.
    pub three_pos_coprime: &'static [u64],
    /// n ≢ 0,4,7 (mod 8) that are not sums of three distinct coprime squares.
    pub three_distinct_coprime: &'static [u64],
    /// Odd n that are not sums of four distinct positive coprime squares.
    pub four_distinct_pos_coprime_odd: &'static [u64],
    /// Odd n that are not sums of four positive coprime squares.
    pub four_coprime_odd_exceptions: &'static [u64],
    /// Even n such that neither n nor n − 2 is a sum of three distinct coprime squares.
    pub n_or_n_minus_2: &'static [u64],
}

pub const THREE_POS_COPRIME: &[u64] = &[1, 2, 5, 10, 13, 25, 37, 58, 85, 130];
pub const THREE_DISTINCT_COPRIME: &[u64] = &[
    1, 2, 3, 6, 9, 11, 18, 19, 22, 27, 33, 43, 51, 57, 67, 99, 102, 123, 163, 177, 187, 267, 627,
];
pub const FOUR_DISTINCT_POS_COPRIME_ODD: &[u64] = &[
    1, 3, 5, 7, 9, 11, 13, 15, 17, 19, 21, 23, 25, 27, 29, 31, 33, 35, 37, 41, 43, 45, 47, 49, 53,
    55, 59, 61, 67, 69, 73, 77, 83, 89, 97, 101, 103, 115, 157,
];
pub const FOUR_COPRIME_ODD: &[u64] = &[1, 3, 5, 9, 11, 17, 29, 41];
pub const N_OR_N_MINUS_2: &[u64] = &[2, 4, 6, 8, 18, 20, 22, 24, 102, 104];

/// Upper end of the brute-force check run when the tables are first loaded.
const TABLE_CHECK_LIMIT: u64 = 1_000;

/// The exception tables, verified against brute force on first use.
pub fn exception_tables() -> &'static ExceptionTables {
    static TABLES: OnceLock<ExceptionTables> = OnceLock::new();
    TABLES.get_or_init(|| {
        let tables = ExceptionTables {
            three_pos_coprime: THREE_POS_COPRIME,
            three_distinct_coprime: THREE_DISTINCT_COPRIME,
            four_distinct_pos_coprime_odd: FOUR_DISTINCT_POS_COPRIME_ODD,
            four_coprime_odd_exceptions: FOUR_COPRIME_ODD,
            n_or_n_minus_2: N_OR_N_MINUS_2,
        };
        let computed = brute_force_exceptions(TABLE_CHECK_LIMIT);
        assert_eq!(
            computed, tables,
            "exception tables disagree with brute force below {TABLE_CHECK_LIMIT}"
        );
        tables
    })
}

/// Recomputes every exception list below `limit` by exhaustive enumeration.
///
/// The returned lists are leaked so they can be compared with the static
/// tables using the same type; intended for verification, not hot paths.
pub fn brute_force_exceptions(limit: u64) -> ExceptionTables {
    let flags = BruteForce::new(limit);
    let leak = |v: Vec<u64>| -> &'static [u64] { Box::leak(v.into_boxed_slice()) };
    let admissible3 = |n: &u64| !matches!(n % 8, 0 | 4 | 7);
    let three_pos: Vec<u64> = (1..=limit)
        .filter(admissible3)
        .filter(|&n| !flags.three_pos_coprime[n as usize])
        .collect();
    let three_distinct: Vec<u64> = (1..=limit)
        .filter(admissible3)
        .filter(|&n| !flags.three_distinct_coprime[n as usize])
        .collect();
    let four_distinct: Vec<u64> = (1..=limit)
        .step_by(2)
        .filter(|&n| !flags.four_distinct_pos_coprime[n as usize])
        .collect();
    let four_pos: Vec<u64> = (1..=limit)
        .step_by(2)
        .filter(|&n| !flags.four_pos_coprime[n as usize])
        .collect();
    let n_or: Vec<u64> = (2..=limit)
        .step_by(2)
        .filter(|&n| {
            !flags.three_distinct_coprime[n as usize]
                && !flags.three_distinct_coprime[(n - 2) as usize]
        })
        .collect();
    ExceptionTables {
        three_pos_coprime: leak(three_pos),
        three_distinct_coprime: leak(three_distinct),
        four_distinct_pos_coprime_odd: leak(four_distinct),
        four_coprime_odd_exceptions: leak(four_pos),
        n_or_n_minus_2: leak(n_or),
    }
}

/// Representability flags for every n ≤ limit, by exhaustive enumeration of
/// descending tuples.
pub struct BruteForce {
    pub three_pos_coprime: Vec<bool>,
    pub three_distinct_coprime: Vec<bool>,
    pub four_distinct_pos_coprime: Vec<bool>,
    pub four_pos_coprime: Vec<bool>,
}

impl BruteForce {
    pub fn new(limit: u64) -> Self {
        let size = limit as usize + 1;
        let mut three_pos_coprime = vec![false; size];
        let mut three_distinct_coprime = vec![false; size];
        let mut four_distinct_pos_coprime = vec![false; size];
        let mut four_pos_coprime = vec![false; size];
        let r = isqrt(limit);
        for a in 0..=r {
            let sa = a * a;
            for b in 0..=a {
                let sb = sa + b * b;
                if sb > limit {
                    break;
                }
                for c in 0..=b {
                    let sc = sb + c * c;
                    if sc > limit {
                        break;
                    }
                    let g3 = a.gcd(&b).gcd(&c);
                    if g3 == 1 {
                        if c > 0 {
                            three_pos_coprime[sc as usize] = true;
                        }
                        if a > b && b > c {
                            three_distinct_coprime[sc as usize] = true;
                        }
                    }
                    for d in 1..=c {
                        let sd = sc + d * d;
                        if sd > limit {
                            break;
                        }
                        if g3.gcd(&d) == 1 {
                            four_pos_coprime[sd as usize] = true;
                            if a > b && b > c && c > d {
                                four_distinct_pos_coprime[sd as usize] = true;
                            }
                        }
                    }
                }
            }
        }
        Self {
            three_pos_coprime,
            three_distinct_coprime,
            four_distinct_pos_coprime,
            four_pos_coprime,
        }
    }
}

/// Integer square root (floor).
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Smallest r with r² ≥ n.
fn ceil_sqrt(n: u64) -> u64 {
    let r = isqrt(n);
    if r * r == n {
        r
    } else {
        r + 1
    }
}

fn is_square(n: u64) -> Option<u64> {
    let r = isqrt(n);
    (r * r == n).then_some(r)
}

/// Visits descending triples a ≥ b ≥ c ≥ 0 with a² + b² + c² = n in
/// lexicographically descending order; stops when `visit` returns true.
fn for_each_triple(n: u64, mut visit: impl FnMut(u64, u64, u64) -> bool) {
    let top = isqrt(n);
    let bottom = ceil_sqrt(n.div_ceil(3));
    for a in (bottom..=top).rev() {
        let r = n - a * a;
        let b_top = a.min(isqrt(r));
        let b_bottom = ceil_sqrt(r.div_ceil(2));
        for b in (b_bottom..=b_top).rev() {
            if let Some(c) = is_square(r - b * b) {
                if c <= b && visit(a, b, c) {
                    return;
                }
            }
        }
    }
}

/// Visits descending quadruples a ≥ b ≥ c ≥ d ≥ 0 summing to n in
/// lexicographically descending order; stops when `visit` returns true.
fn for_each_quadruple(n: u64, mut visit: impl FnMut(u64, u64, u64, u64) -> bool) {
    let top = isqrt(n);
    let bottom = ceil_sqrt(n.div_ceil(4));
    for a in (bottom..=top).rev() {
        let r1 = n - a * a;
        let b_top = a.min(isqrt(r1));
        let b_bottom = ceil_sqrt(r1.div_ceil(3));
        for b in (b_bottom..=b_top).rev() {
            let r2 = r1 - b * b;
            let c_top = b.min(isqrt(r2));
            let c_bottom = ceil_sqrt(r2.div_ceil(2));
            for c in (c_bottom..=c_top).rev() {
                if let Some(d) = is_square(r2 - c * c) {
                    if d <= c && visit(a, b, c, d) {
                        return;
                    }
                }
            }
        }
    }
}

fn guard(n: u64) -> Result<(), SquaresError> {
    if n >= STAR_BOUND {
        Err(SquaresError::StarDomainExceeded(n))
    } else {
        Ok(())
    }
}

fn distinct_coprime_ok(a: u64, b: u64, c: u64) -> bool {
    a > b && b > c && a.gcd(&b).gcd(&c) == 1
}

fn positive_coprime_ok(a: u64, b: u64, c: u64) -> bool {
    c > 0 && a.gcd(&b).gcd(&c) == 1
}

/// Canonical n = α₁² + α₂² + α₃² with α₁ > α₂ > α₃ ≥ 0 and gcd 1, or None.
pub fn three_squares_distinct_coprime(n: u64) -> Result<Option<SquaresDecomposition>, SquaresError> {
    guard(n)?;
    if n == 0 || matches!(n % 8, 0 | 4 | 7) || THREE_DISTINCT_COPRIME.binary_search(&n).is_ok() {
        return Ok(None);
    }
    Ok(first_triple(n, distinct_coprime_ok))
}

/// Every distinct coprime three-square decomposition of n, canonical first.
pub fn three_squares_distinct_coprime_all(n: u64) -> Result<Vec<SquaresDecomposition>, SquaresError> {
    guard(n)?;
    Ok(all_triples(n, distinct_coprime_ok))
}

/// Canonical n = a² + b² + c² with a ≥ b ≥ c > 0 and gcd 1, or None.
pub fn three_squares_positive_coprime(n: u64) -> Result<Option<SquaresDecomposition>, SquaresError> {
    guard(n)?;
    if n == 0 || matches!(n % 8, 0 | 4 | 7) || THREE_POS_COPRIME.binary_search(&n).is_ok() {
        return Ok(None);
    }
    Ok(first_triple(n, positive_coprime_ok))
}

/// Every positive coprime three-square decomposition of n, canonical first.
pub fn three_squares_positive_coprime_all(n: u64) -> Result<Vec<SquaresDecomposition>, SquaresError> {
    guard(n)?;
    Ok(all_triples(n, positive_coprime_ok))
}

fn first_triple(n: u64, ok: fn(u64, u64, u64) -> bool) -> Option<SquaresDecomposition> {
    let mut found = None;
    for_each_triple(n, |a, b, c| {
        if ok(a, b, c) {
            found = Some(SquaresDecomposition::new(vec![a, b, c]));
            true
        } else {
            false
        }
    });
    found
}

fn all_triples(n: u64, ok: fn(u64, u64, u64) -> bool) -> Vec<SquaresDecomposition> {
    let mut out = Vec::new();
    if n > 0 {
        for_each_triple(n, |a, b, c| {
            if ok(a, b, c) {
                out.push(SquaresDecomposition::new(vec![a, b, c]));
            }
            false
        });
    }
    out
}

/// Constraint descriptors for four-square decompositions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourSquareMode {
    /// Coprime with at most one zero part; defined for n ≥ 3, n ≢ 0 (mod 4).
    Coprime,
    /// Role-ordered (x₁, x₂, x₃, x₄) for the γ = 1 embedding: x₁ even (possibly
    /// zero), x₂ ≥ x₃ > 0, x₄ odd and positive, gcd 1.
    Gamma1,
    /// Descending, coprime, x₇ > 0, and x₈ > 0 except that x₈ = 0 is taken
    /// for n ∈ {9, 11, 17, 29, 41}.
    K32,
    /// All parts positive, gcd 1.
    PositiveCoprime,
    /// Parts pairwise distinct and positive, gcd 1.
    DistinctPositiveCoprime,
}

/// Targets for which the K3^[2] recipe takes x₈ = 0.
pub const K32_ZERO_ESCAPE: &[u64] = &[9, 11, 17, 29, 41];

/// The canonical decomposition of `n` under `mode`, or None.
pub fn four_squares_constrained(n: u64, mode: FourSquareMode) -> Option<SquaresDecomposition> {
    if n == 0 {
        return None;
    }
    let pick = |ok: &dyn Fn(u64, u64, u64, u64) -> bool| {
        let mut found = None;
        for_each_quadruple(n, |a, b, c, d| {
            if ok(a, b, c, d) {
                found = Some(SquaresDecomposition::new(vec![a, b, c, d]));
                true
            } else {
                false
            }
        });
        found
    };
    let g4 = |a: u64, b: u64, c: u64, d: u64| a.gcd(&b).gcd(&c).gcd(&d);
    match mode {
        FourSquareMode::Coprime => {
            if n < 3 || n % 4 == 0 {
                return None;
            }
            pick(&|a, b, c, d| g4(a, b, c, d) == 1 && c > 0)
        }
        FourSquareMode::PositiveCoprime => pick(&|a, b, c, d| g4(a, b, c, d) == 1 && d > 0),
        FourSquareMode::DistinctPositiveCoprime => {
            pick(&|a, b, c, d| g4(a, b, c, d) == 1 && d > 0 && a > b && b > c && c > d)
        }
        FourSquareMode::K32 => {
            let escape = K32_ZERO_ESCAPE.contains(&n);
            pick(&|a, b, c, d| {
                g4(a, b, c, d) == 1 && c > 0 && if escape { d == 0 } else { d > 0 }
            })
        }
        FourSquareMode::Gamma1 => gamma1_decomposition(n),
    }
}

fn gamma1_decomposition(n: u64) -> Option<SquaresDecomposition> {
    if n < 3 || n % 4 == 0 {
        return None;
    }
    match n {
        5 => return Some(SquaresDecomposition::new(vec![0, 0, 2, 1])),
        6 => return Some(SquaresDecomposition::new(vec![0, 2, 1, 1])),
        _ => {}
    }
    let mut x1 = 0u64;
    while x1 * x1 < n {
        let rest = n - x1 * x1;
        let mut found = None;
        for_each_triple(rest, |a, b, c| {
            let ok = c > 0 && x1.gcd(&a).gcd(&b).gcd(&c) == 1 && (a % 2 == 1 || b % 2 == 1 || c % 2 == 1);
            if ok {
                found = Some([a, b, c]);
            }
            ok
        });
        if let Some(tail) = found {
            // x₄ is the smallest odd tail part; the other two stay descending.
            let pos = (0..3).rev().find(|&i| tail[i] % 2 == 1).expect("an odd part exists");
            let rest: Vec<u64> = (0..3).filter(|&i| i != pos).map(|i| tail[i]).collect();
            return Some(SquaresDecomposition::new(vec![x1, rest[0], rest[1], tail[pos]]));
        }
        x1 += 2;
    }
    None
}

/// Prefers a distinct coprime decomposition of n, falling back to n − 2.
pub fn three_distinct_coprime_of_n_or_n_minus_2(
    n: u64,
) -> Result<Option<(u64, SquaresDecomposition)>, SquaresError> {
    guard(n)?;
    if let Some(dec) = three_squares_distinct_coprime(n)? {
        return Ok(Some((n, dec)));
    }
    if n >= 3 {
        if let Some(dec) = three_squares_distinct_coprime(n - 2)? {
            return Ok(Some((n - 2, dec)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parts(d: Option<SquaresDecomposition>) -> Option<Vec<u64>> {
        d.map(|d| {
            assert!(d.recheck());
            d.parts
        })
    }

    #[test]
    fn tables_verify_on_load() {
        let t = exception_tables();
        assert_eq!(t.four_distinct_pos_coprime_odd.len(), 39);
        assert_eq!(t.n_or_n_minus_2.len(), 10);
    }

    #[test]
    fn three_square_examples() {
        let all: Vec<Vec<u64>> = three_squares_distinct_coprime_all(50)
            .unwrap()
            .into_iter()
            .map(|d| d.parts)
            .collect();
        assert_eq!(all, vec![vec![7, 1, 0], vec![5, 4, 3]]);
        assert_eq!(parts(three_squares_distinct_coprime(3).unwrap()), None);
        assert_eq!(parts(three_squares_distinct_coprime(14).unwrap()), Some(vec![3, 2, 1]));
        assert_eq!(parts(three_squares_positive_coprime(10).unwrap()), None);
        assert_eq!(parts(three_squares_positive_coprime(9).unwrap()), Some(vec![2, 2, 1]));
        assert_eq!(parts(three_squares_positive_coprime(3).unwrap()), Some(vec![1, 1, 1]));
        assert_eq!(
            three_squares_positive_coprime(STAR_BOUND),
            Err(SquaresError::StarDomainExceeded(STAR_BOUND))
        );
    }

    #[test]
    fn four_square_examples() {
        use FourSquareMode::*;
        assert_eq!(parts(four_squares_constrained(5, Gamma1)), Some(vec![0, 0, 2, 1]));
        assert_eq!(parts(four_squares_constrained(6, Gamma1)), Some(vec![0, 2, 1, 1]));
        assert_eq!(parts(four_squares_constrained(3, Gamma1)), Some(vec![0, 1, 1, 1]));
        assert_eq!(parts(four_squares_constrained(4, Coprime)), None);
        assert_eq!(parts(four_squares_constrained(9, K32)), Some(vec![2, 2, 1, 0]));
        assert_eq!(parts(four_squares_constrained(21, K32)), Some(vec![3, 2, 2, 2]));
        assert_eq!(parts(four_squares_constrained(7, K32)), Some(vec![2, 1, 1, 1]));
    }

    #[test]
    fn n_or_n_minus_2_examples() {
        assert_eq!(three_distinct_coprime_of_n_or_n_minus_2(20).unwrap(), None);
        assert_eq!(three_distinct_coprime_of_n_or_n_minus_2(104).unwrap(), None);
        let (target, dec) = three_distinct_coprime_of_n_or_n_minus_2(26).unwrap().unwrap();
        assert_eq!((target, dec.parts), (26, vec![5, 1, 0]));
        let (target, _) = three_distinct_coprime_of_n_or_n_minus_2(28).unwrap().unwrap();
        assert_eq!(target, 26);
    }

    #[test]
    fn gamma1_mode_exists_below_ten_thousand() {
        for d in 3..=10_000u64 {
            if d % 4 == 0 {
                continue;
            }
            let dec = four_squares_constrained(d, FourSquareMode::Gamma1)
                .unwrap_or_else(|| panic!("no γ1 decomposition for {d}"));
            let p = &dec.parts;
            assert_eq!(dec.target, d);
            assert!(dec.coprime);
            assert_eq!(p[0] % 2, 0);
            assert_eq!(p[3] % 2, 1);
        }
    }
}
