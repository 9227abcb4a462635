//! Parity-constrained linear Diophantine equations in three unknowns.
//!
//! Solves α₁X₁ + α₂X₂ + α₃X₃ = K with either all Xᵢ odd (K even) or exactly
//! one Xᵢ even (K odd), returning the solution of minimal Euclidean norm.
//! Each admissible parity pattern is substituted away (Xᵢ = 2Yᵢ + 1, or
//! Xᵢ = 2(Yᵢ + 1) for the even coordinate), a base solution of the
//! transformed equation comes from the extended Euclidean algorithm, and the
//! rank-2 homogeneous solution lattice is scanned inside a window that
//! provably contains the minimizer. When α₃ = 0 the third unknown is pinned
//! to 1. Ties in norm go to the lexicographically largest signed tuple.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParityMode {
    /// Every Xᵢ odd; requires K even.
    AllOdd,
    /// Exactly one Xᵢ even; requires K odd.
    OneEven,
}

impl ParityMode {
    /// The mode dictated by the parity of the right-hand side.
    pub fn for_rhs(k: i64) -> Self {
        if k.rem_euclid(2) == 0 {
            ParityMode::AllOdd
        } else {
            ParityMode::OneEven
        }
    }

    /// Whether `xs` satisfies the mode literally.
    pub fn admits(&self, xs: &[i64; 3]) -> bool {
        let evens = xs.iter().filter(|x| x.rem_euclid(2) == 0).count();
        match self {
            ParityMode::AllOdd => evens == 0,
            ParityMode::OneEven => evens == 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiophantineError {
    #[error("coefficients {0:?} are negative or not coprime")]
    NotCoprime([i64; 3]),
    #[error("coefficients {0:?} must contain exactly one even entry")]
    EvenCountViolated([i64; 3]),
    #[error("parity mode {mode:?} does not match right-hand side {k}")]
    BadParityMode { mode: ParityMode, k: i64 },
    #[error("no solution found for {alphas:?}·X = {k}")]
    NoSolution { alphas: [i64; 3], k: i64 },
    #[error("arithmetic overflow while solving")]
    Overflow,
}

/// A minimal-norm solution with the bound data used to find it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiophantineSolution {
    pub xs: [i64; 3],
    pub norm: i128,
    pub max_abs: i64,
    /// max{|αᵢ|, |K'|} for the transformed equation of the solution's parity pattern.
    pub bfrt_bound: i64,
    /// The transformed right-hand side K' = (K − α·p)/2.
    pub transformed_rhs: i64,
    /// Index of the even coordinate, for [`ParityMode::OneEven`].
    pub even_index: Option<usize>,
}

/// max{|α₁|, |α₂|, |α₃|, |K'|}: the solution bound for a transformed equation.
pub fn bfrt_bound(alphas: [i64; 3], k_transformed: i64) -> i64 {
    alphas
        .iter()
        .map(|a| a.abs())
        .chain(std::iter::once(k_transformed.abs()))
        .max()
        .unwrap_or(0)
}

/// The right-hand side after substituting the parity pattern `p`
/// (entries 1 for odd coordinates, 2 for the even one).
pub fn transformed_rhs(alphas: [i64; 3], k: i64, p: [i64; 3]) -> i64 {
    let dot: i64 = alphas.iter().zip(p.iter()).map(|(a, b)| a * b).sum();
    (k - dot) / 2
}

/// The admissible parity patterns for `mode`, as (pattern, even index).
pub fn parity_patterns(alphas: [i64; 3], mode: ParityMode) -> Vec<([i64; 3], Option<usize>)> {
    match mode {
        ParityMode::AllOdd => vec![([1, 1, 1], None)],
        ParityMode::OneEven => (0..3)
            .filter(|&i| alphas[i] % 2 == 1 && !(alphas[2] == 0 && i == 2))
            .map(|i| {
                let mut p = [1, 1, 1];
                p[i] = 2;
                (p, Some(i))
            })
            .collect(),
    }
}

/// The minimal-norm solution of α·X = K under `mode`.
pub fn solve_parity(
    alphas: [i64; 3],
    k: i64,
    mode: ParityMode,
) -> Result<DiophantineSolution, DiophantineError> {
    if alphas.iter().any(|&a| a < 0) || alphas.iter().fold(0i64, |g, a| g.gcd(a)) != 1 {
        return Err(DiophantineError::NotCoprime(alphas));
    }
    if alphas.iter().filter(|a| *a % 2 == 0).count() != 1 {
        return Err(DiophantineError::EvenCountViolated(alphas));
    }
    if ParityMode::for_rhs(k) != mode {
        return Err(DiophantineError::BadParityMode { mode, k });
    }
    let mut best: Option<DiophantineSolution> = None;
    for (p, even_index) in parity_patterns(alphas, mode) {
        let kp = transformed_rhs(alphas, k, p);
        let bound = bfrt_bound(alphas, kp);
        if let Some((xs, norm)) = minimize_pattern(alphas, kp, p, bound)? {
            let candidate = DiophantineSolution {
                xs,
                norm,
                max_abs: xs.iter().map(|x| x.abs()).max().unwrap_or(0),
                bfrt_bound: bound,
                transformed_rhs: kp,
                even_index,
            };
            let better = match &best {
                None => true,
                Some(b) => norm < b.norm || (norm == b.norm && xs > b.xs),
            };
            if better {
                best = Some(candidate);
            }
        }
    }
    let sol = best.ok_or(DiophantineError::NoSolution { alphas, k })?;
    let lhs: i128 = alphas
        .iter()
        .zip(sol.xs.iter())
        .map(|(&a, &x)| a as i128 * x as i128)
        .sum();
    assert_eq!(lhs, k as i128, "solver returned a non-solution");
    assert!(mode.admits(&sol.xs), "solver violated the parity mode");
    if alphas[2] == 0 {
        assert_eq!(sol.xs[2], 1, "x₃ must be pinned to 1 when α₃ = 0");
    }
    Ok(sol)
}

/// Extended Euclid: returns (g, u, v) with a·u + b·v = g ≥ 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, u, v) = ext_gcd(b, a.rem_euclid(b));
        (g, v, u - a.div_euclid(b) * v)
    }
}

/// Integer parametrisation y = y0 + Σ sᵢ·basisᵢ of α·y = kp (3 coordinates).
struct Lattice {
    y0: [i128; 3],
    basis: Vec<[i128; 3]>,
}

fn parametrise(alphas: [i64; 3], kp: i64) -> Lattice {
    let a = alphas.map(|x| x as i128);
    let kp = kp as i128;
    if a[2] == 0 {
        // Two unknowns; y₃ = 0 because x₃ is pinned to 1.
        let (g, u, v) = ext_gcd(a[0], a[1]);
        debug_assert_eq!(g, 1);
        return Lattice {
            y0: [u * kp, v * kp, 0],
            basis: vec![[a[1], -a[0], 0]],
        };
    }
    // Use a pair of coefficients that are not both zero as the (a, b) block.
    let (i, j, l) = if a[0] != 0 || a[1] != 0 {
        (0, 1, 2)
    } else {
        (1, 2, 0)
    };
    let (g, u, v) = ext_gcd(a[i], a[j]);
    let (_, p, q) = ext_gcd(g, a[l]);
    // kp = g·(p·kp) + a_l·(q·kp); split accordingly.
    let m = p * kp;
    let mut y0 = [0i128; 3];
    y0[i] = u * m;
    y0[j] = v * m;
    y0[l] = q * kp;
    let mut b1 = [0i128; 3];
    b1[i] = a[j] / g;
    b1[j] = -a[i] / g;
    let mut b2 = [0i128; 3];
    b2[i] = a[l] * u;
    b2[j] = a[l] * v;
    b2[l] = -g;
    Lattice {
        y0,
        basis: vec![b1, b2],
    }
}

fn x_of(lat: &Lattice, p: [i64; 3], coeffs: &[i128]) -> Option<[i128; 3]> {
    let mut x = [0i128; 3];
    for k in 0..3 {
        let mut y = lat.y0[k];
        for (c, b) in coeffs.iter().zip(lat.basis.iter()) {
            y = y.checked_add(c.checked_mul(b[k])?)?;
        }
        x[k] = y.checked_mul(2)?.checked_add(p[k] as i128)?;
    }
    Some(x)
}

fn norm_of(x: &[i128; 3]) -> Option<i128> {
    x.iter().try_fold(0i128, |acc, v| acc.checked_add(v.checked_mul(*v)?))
}

fn isqrt_i128(n: i128) -> i128 {
    if n <= 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Real least-squares coefficients for minimising ‖2(y0 + Σ cᵢbᵢ) + p‖².
fn real_minimiser(lat: &Lattice, p: [i64; 3]) -> Vec<f64> {
    // Target: Σ cᵢ bᵢ ≈ −(y0 + p/2).
    let target: Vec<f64> = (0..3)
        .map(|k| -(lat.y0[k] as f64 + p[k] as f64 / 2.0))
        .collect();
    let dot = |u: &[i128; 3], w: &[f64]| (0..3).map(|k| u[k] as f64 * w[k]).sum::<f64>();
    let dotb = |u: &[i128; 3], w: &[i128; 3]| (0..3).map(|k| u[k] as f64 * w[k] as f64).sum::<f64>();
    match lat.basis.len() {
        1 => {
            let b = &lat.basis[0];
            vec![dot(b, &target) / dotb(b, b)]
        }
        _ => {
            let (b1, b2) = (&lat.basis[0], &lat.basis[1]);
            let (g11, g12, g22) = (dotb(b1, b1), dotb(b1, b2), dotb(b2, b2));
            let (r1, r2) = (dot(b1, &target), dot(b2, &target));
            let det = g11 * g22 - g12 * g12;
            vec![(r1 * g22 - r2 * g12) / det, (g11 * r2 - g12 * r1) / det]
        }
    }
}

/// Minimal-norm solution for one parity pattern: (xs, norm).
fn minimize_pattern(
    alphas: [i64; 3],
    kp: i64,
    p: [i64; 3],
    bound: i64,
) -> Result<Option<([i64; 3], i128)>, DiophantineError> {
    let lat = parametrise(alphas, kp);
    let dims = lat.basis.len();

    // Window from the BFRT witness: |yᵢ| ≤ B gives ‖x‖² ≤ k·(2B + 2)².
    let b = bound as i128 + 1;
    let mut limit = (dims as i128 + 1) * 4 * b * b + 1;

    // Tighten with the best point near the real minimiser.
    let centre = real_minimiser(&lat, p);
    let rounded: Vec<i128> = centre.iter().map(|c| c.round() as i128).collect();
    let offsets: Vec<Vec<i128>> = if dims == 1 {
        (-2..=2).map(|d| vec![d]).collect()
    } else {
        (-2..=2)
            .flat_map(|d1| (-2..=2).map(move |d2| vec![d1, d2]))
            .collect()
    };
    for off in &offsets {
        let coeffs: Vec<i128> = rounded.iter().zip(off).map(|(r, o)| r + o).collect();
        if let Some(x) = x_of(&lat, p, &coeffs) {
            if let Some(n) = norm_of(&x) {
                limit = limit.min(n);
            }
        }
    }
    let w = isqrt_i128(limit);

    // Bounding box of coefficients whose image lies in the cube |xᵢ| ≤ w.
    let ranges = coefficient_ranges(&lat, p, w).ok_or(DiophantineError::Overflow)?;
    let mut best: Option<([i128; 3], i128)> = None;
    let mut consider = |coeffs: &[i128]| -> Result<(), DiophantineError> {
        let x = x_of(&lat, p, coeffs).ok_or(DiophantineError::Overflow)?;
        if x.iter().any(|v| v.abs() > w) {
            return Ok(());
        }
        let n = norm_of(&x).ok_or(DiophantineError::Overflow)?;
        let better = match &best {
            None => true,
            Some((bx, bn)) => n < *bn || (n == *bn && x > *bx),
        };
        if better {
            best = Some((x, n));
        }
        Ok(())
    };
    if dims == 1 {
        for s in ranges[0].0..=ranges[0].1 {
            consider(&[s])?;
        }
    } else {
        for s in ranges[0].0..=ranges[0].1 {
            for t in ranges[1].0..=ranges[1].1 {
                consider(&[s, t])?;
            }
        }
    }
    Ok(best.map(|(x, n)| (x.map(|v| v as i64), n)))
}

/// Inclusive integer ranges for the lattice coefficients such that every
/// point with |xᵢ| ≤ w is covered.
fn coefficient_ranges(lat: &Lattice, p: [i64; 3], w: i128) -> Option<Vec<(i128, i128)>> {
    // y_k ranges over [(−w − p_k)/2, (w − p_k)/2].
    let ylo: Vec<f64> = (0..3).map(|k| (-(w as f64) - p[k] as f64) / 2.0).collect();
    let yhi: Vec<f64> = (0..3).map(|k| ((w as f64) - p[k] as f64) / 2.0).collect();
    if lat.basis.len() == 1 {
        let b = &lat.basis[0];
        let k = (0..3).max_by_key(|&k| b[k].abs())?;
        let lo = (ylo[k] - lat.y0[k] as f64) / b[k] as f64;
        let hi = (yhi[k] - lat.y0[k] as f64) / b[k] as f64;
        let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
        return Some(vec![(lo.floor() as i128 - 1, hi.ceil() as i128 + 1)]);
    }
    let (b1, b2) = (&lat.basis[0], &lat.basis[1]);
    let mut pick = (0usize, 1usize, 0i128);
    for i in 0..3 {
        for j in (i + 1)..3 {
            let d = b1[i] * b2[j] - b1[j] * b2[i];
            if d.abs() > pick.2.abs() {
                pick = (i, j, d);
            }
        }
    }
    let (i, j, d) = pick;
    if d == 0 {
        return None;
    }
    let d = d as f64;
    let mut s_range = (f64::INFINITY, f64::NEG_INFINITY);
    let mut t_range = (f64::INFINITY, f64::NEG_INFINITY);
    for yi in [ylo[i], yhi[i]] {
        for yj in [ylo[j], yhi[j]] {
            let di = yi - lat.y0[i] as f64;
            let dj = yj - lat.y0[j] as f64;
            let s = (di * b2[j] as f64 - dj * b2[i] as f64) / d;
            let t = (b1[i] as f64 * dj - b1[j] as f64 * di) / d;
            s_range = (s_range.0.min(s), s_range.1.max(s));
            t_range = (t_range.0.min(t), t_range.1.max(t));
        }
    }
    Some(vec![
        (s_range.0.floor() as i128 - 1, s_range.1.ceil() as i128 + 1),
        (t_range.0.floor() as i128 - 1, t_range.1.ceil() as i128 + 1),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_example_solutions() {
        let s = solve_parity([7, 1, 0], -10, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([-1, -3, 1], 11));
        let s = solve_parity([5, 4, 3], -10, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([1, -3, -1], 11));
        let s = solve_parity([7, 1, 0], -20, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([-3, 1, 1], 11));
        let s = solve_parity([5, 4, 3], -20, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([-1, -3, -1], 11));
        assert!(s.bfrt_bound >= s.max_abs);
    }

    #[test]
    fn other_examples() {
        let s = solve_parity([2, 1, 1], 4, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([1, 1, 1], 3));
        let s = solve_parity([3, 1, 0], 0, ParityMode::AllOdd).unwrap();
        assert_eq!((s.xs, s.norm), ([1, -3, 1], 11));
        assert_eq!(
            solve_parity([1, 1, 1], 3, ParityMode::OneEven),
            Err(DiophantineError::EvenCountViolated([1, 1, 1]))
        );
        assert!(matches!(
            solve_parity([2, 1, 1], 3, ParityMode::AllOdd),
            Err(DiophantineError::BadParityMode { .. })
        ));
        let s = solve_parity([4, 3, 1], 7, ParityMode::OneEven).unwrap();
        assert!(ParityMode::OneEven.admits(&s.xs));
    }

    #[test]
    fn bfrt_examples() {
        assert_eq!(bfrt_bound([7, 1, 0], -7), 7);
        assert_eq!(bfrt_bound([5, 4, 3], 0), 5);
        let kp = transformed_rhs([5, 4, 3], -10, [1, 1, 1]);
        assert_eq!(kp, -11);
        assert!(bfrt_bound([5, 4, 3], kp) >= 3);
    }

    /// Exhaustive oracle: every solution of norm ≤ `cap` lies in the cube of
    /// half-width √cap, so scanning it finds the true minimiser.
    fn oracle(alphas: [i64; 3], k: i64, mode: ParityMode, cap: i128) -> Option<([i64; 3], i128)> {
        let r = isqrt_i128(cap) as i64;
        let mut best: Option<([i64; 3], i128)> = None;
        for x1 in -r..=r {
            for x2 in -r..=r {
                for x3 in -r..=r {
                    let xs = [x1, x2, x3];
                    if alphas[2] == 0 && x3 != 1 {
                        continue;
                    }
                    if alphas[0] * x1 + alphas[1] * x2 + alphas[2] * x3 != k || !mode.admits(&xs) {
                        continue;
                    }
                    let n: i128 = xs.iter().map(|&v| (v as i128) * (v as i128)).sum();
                    let better = match &best {
                        None => true,
                        Some((bx, bn)) => n < *bn || (n == *bn && xs > *bx),
                    };
                    if better {
                        best = Some((xs, n));
                    }
                }
            }
        }
        best
    }

    fn admissible() -> impl proptest::strategy::Strategy<Value = ([i64; 3], i64)> {
        use proptest::prelude::*;
        ((0i64..25, 0i64..25, 0i64..25), -60i64..60).prop_filter_map(
            "coprime with exactly one even entry",
            |((a, b, c), k)| {
                let al = [a, b, c];
                let g = al.iter().fold(0i64, |g, x| g.gcd(x));
                let evens = al.iter().filter(|x| *x % 2 == 0).count();
                (g == 1 && evens == 1).then_some((al, k))
            },
        )
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(300))]
        #[test]
        fn solver_matches_exhaustive_oracle((alphas, k) in admissible()) {
            let mode = ParityMode::for_rhs(k);
            let sol = solve_parity(alphas, k, mode).unwrap();
            let (xs, n) = oracle(alphas, k, mode, sol.norm).unwrap();
            proptest::prop_assert_eq!((sol.xs, sol.norm), (xs, n));
            proptest::prop_assert!(sol.max_abs <= 2 * sol.bfrt_bound + 2);
        }
    }
}
