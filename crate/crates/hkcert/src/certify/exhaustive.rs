//! Budgeted exhaustive search for primitive embeddings with few orthogonal roots.
//!
//! Used as an opt-in fallback when the explicit constructions do not apply.
//! Vectors are enumerated in doubled coordinates (c = 2x) by depth-first
//! search, with a node budget so that every run is deterministic and bounded.

use crate::e8_roots::{is_primitive_embedding, roots_orthogonal_to, E8Vector, RootCount};

/// One embedding found by the search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Found {
    pub images: Vec<E8Vector>,
    pub count: RootCount,
}

/// The search result: the accepted embedding (if any), the best candidate in
/// the secondary window (if any), and the number of nodes visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub accepted: Option<Found>,
    pub secondary: Option<Found>,
    pub nodes: u64,
    pub budget_exhausted: bool,
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> bool {
        self.used += 1;
        self.used <= self.limit
    }
}

/// Enumerates doubled coordinate vectors `c` with Σcᵢ² = `norm4`, all
/// coordinates of one parity and Σcᵢ ≡ 0 (mod 4), i.e. the E8 vectors of
/// norm `norm4 / 4`. With `sorted`, only vectors with c₀ ≥ … ≥ c₆ ≥ |c₇| are
/// produced (representatives modulo permutations and even sign changes).
/// `visit` returns true to stop. Returns false if the budget ran out.
fn enumerate(
    norm4: i64,
    sorted: bool,
    budget: &mut Budget,
    prune: &dyn Fn(&[i64], i64) -> bool,
    visit: &mut dyn FnMut(&[i64; 8]) -> bool,
) -> bool {
    let mut c = [0i64; 8];
    let mut stop = false;
    for parity in [0i64, 1] {
        if !dfs(0, norm4, parity, sorted, &mut c, budget, prune, visit, &mut stop) {
            return false;
        }
        if stop {
            return true;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    k: usize,
    rest: i64,
    parity: i64,
    sorted: bool,
    c: &mut [i64; 8],
    budget: &mut Budget,
    prune: &dyn Fn(&[i64], i64) -> bool,
    visit: &mut dyn FnMut(&[i64; 8]) -> bool,
    stop: &mut bool,
) -> bool {
    if !budget.tick() {
        return false;
    }
    let slots = (8 - k) as i64;
    if rest < parity * slots || prune(&c[..k], rest) {
        return true;
    }
    if k == 8 {
        if rest == 0 && c.iter().sum::<i64>().rem_euclid(4) == 0 && visit(c) {
            *stop = true;
        }
        return true;
    }
    let mut hi = crate::squares::isqrt(rest as u64) as i64;
    if sorted && k > 0 {
        hi = hi.min(c[k - 1].abs());
    }
    let lo = if sorted && k < 7 { 0 } else { -hi };
    let mut v = hi;
    while v >= lo {
        if v.rem_euclid(2) == parity {
            c[k] = v;
            if !dfs(k + 1, rest - v * v, parity, sorted, c, budget, prune, visit, stop) {
                return false;
            }
            if *stop {
                return true;
            }
        }
        v -= 1;
    }
    c[k] = 0;
    true
}

fn consider(
    images: Vec<E8Vector>,
    accept: (u32, u32),
    secondary: Option<(u32, u32)>,
    out: &mut SearchOutcome,
) -> bool {
    let count = roots_orthogonal_to(&images).count;
    let total = count.total();
    let in_accept = (accept.0..=accept.1).contains(&total);
    let in_secondary = secondary.is_some_and(|(lo, hi)| (lo..=hi).contains(&total));
    if !in_accept && !in_secondary {
        return false;
    }
    if !is_primitive_embedding(&images).unwrap_or(false) {
        return false;
    }
    if in_accept {
        out.accepted = Some(Found { images, count });
        return true;
    }
    let better = out.secondary.as_ref().is_none_or(|f| total < f.count.total());
    if better {
        out.secondary = Some(Found { images, count });
    }
    false
}

/// Searches for v₁, v₂ ∈ E8 with Gram [[m, n], [n, p]], primitive, whose
/// orthogonal root count lies in `accept` (or, failing that, in `secondary`).
pub fn search_rank2(
    m: i64,
    n: i64,
    p: i64,
    accept: (u32, u32),
    secondary: Option<(u32, u32)>,
    budget: u64,
) -> SearchOutcome {
    let mut out = SearchOutcome {
        accepted: None,
        secondary: None,
        nodes: 0,
        budget_exhausted: false,
    };
    let mut b = Budget { used: 0, limit: budget };
    let mut firsts = Vec::new();
    let complete = enumerate(4 * m, true, &mut b, &|_, _| false, &mut |c| {
        firsts.push(*c);
        false
    });
    if !complete {
        out.nodes = b.used;
        out.budget_exhausted = true;
        return out;
    }
    'outer: for c1 in firsts {
        let v1 = E8Vector::from_doubled(c1).expect("enumerated vectors lie in E8");
        // Doubled inner product must equal 4n; prune by Cauchy–Schwarz on the tail.
        let target = 4 * n;
        let prune = |prefix: &[i64], rest: i64| {
            let k = prefix.len();
            let partial: i64 = prefix.iter().zip(c1.iter()).map(|(a, b)| a * b).sum();
            let tail_norm: i64 = c1[k..].iter().map(|x| x * x).sum();
            let bound = ((tail_norm as f64) * (rest as f64)).sqrt() + 1e-9;
            ((target - partial) as f64).abs() > bound
        };
        let mut visit = |c2: &[i64; 8]| {
            let dot: i64 = c1.iter().zip(c2.iter()).map(|(a, b)| a * b).sum();
            if dot != target {
                return false;
            }
            let v2 = E8Vector::from_doubled(*c2).expect("enumerated vectors lie in E8");
            consider(vec![v1, v2], accept, secondary, &mut out)
        };
        if !enumerate(4 * p, false, &mut b, &prune, &mut visit) {
            out.budget_exhausted = true;
            break 'outer;
        }
        if out.accepted.is_some() {
            break;
        }
    }
    out.nodes = b.used;
    out
}

/// Searches for v₃ completing v₁ = e₂ − e₁, v₂ = e₃ − e₂ to an embedding of
/// [[2, −1, 0], [−1, 2, 1], [0, 1, 2t]] with orthogonal root count in
/// `accept`. The A₂ pair is fixed because all A₂ sublattices of E8 are
/// conjugate; the tail on e₄…e₈ is enumerated up to permutation.
pub fn search_og10(t: i64, accept: (u32, u32), budget: u64) -> SearchOutcome {
    let mut out = SearchOutcome {
        accepted: None,
        secondary: None,
        nodes: 0,
        budget_exhausted: false,
    };
    let v1 = E8Vector::from_integral([-1, 1, 0, 0, 0, 0, 0, 0]).expect("root");
    let v2 = E8Vector::from_integral([0, -1, 1, 0, 0, 0, 0, 0]).expect("root");
    let mut b = Budget { used: 0, limit: budget };
    let norm4 = 8 * t;
    let lim = crate::squares::isqrt(norm4 as u64) as i64;
    // v₃·v₁ = 0 and v₃·v₂ = 1 force c₂ = c₁ = x and c₃ = x + 2 (doubled).
    let mut xs: Vec<i64> = (-lim..=lim).collect();
    xs.sort_by_key(|x| (x.abs(), -x));
    for x in xs {
        let rest = norm4 - 2 * x * x - (x + 2) * (x + 2);
        if rest < 0 {
            continue;
        }
        let parity = x.rem_euclid(2);
        let mut tail = [0i64; 5];
        let mut stop = false;
        if !tail_dfs(0, rest, parity, x, &mut tail, &mut b, &mut |tl| {
            let c = [x, x, x + 2, tl[0], tl[1], tl[2], tl[3], tl[4]];
            if c.iter().sum::<i64>().rem_euclid(4) != 0 {
                return false;
            }
            let v3 = E8Vector::from_doubled(c).expect("checked E8 membership");
            consider(vec![v1, v2, v3], accept, None, &mut out)
        }, &mut stop) {
            out.budget_exhausted = true;
            break;
        }
        if out.accepted.is_some() {
            break;
        }
    }
    out.nodes = b.used;
    out
}

fn tail_dfs(
    k: usize,
    rest: i64,
    parity: i64,
    x: i64,
    tail: &mut [i64; 5],
    budget: &mut Budget,
    visit: &mut dyn FnMut(&[i64; 5]) -> bool,
    stop: &mut bool,
) -> bool {
    if !budget.tick() {
        return false;
    }
    if rest < parity * (5 - k) as i64 {
        return true;
    }
    if k == 5 {
        if rest == 0 && visit(tail) {
            *stop = true;
        }
        return true;
    }
    let r = crate::squares::isqrt(rest as u64) as i64;
    let hi = if k > 0 { r.min(tail[k - 1]) } else { r };
    let mut v = hi;
    while v >= -r {
        if v.rem_euclid(2) == parity {
            tail[k] = v;
            if !tail_dfs(k + 1, rest - v * v, parity, x, tail, budget, visit, stop) {
                return false;
            }
            if *stop {
                return true;
            }
        }
        v -= 1;
    }
    tail[k] = 0;
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::e8_roots::gram_of;

    #[test]
    fn og10_search_finds_small_degrees() {
        for t in [7, 12, 13] {
            let out = search_og10(t, (2, 16), 2_000_000);
            let found = out.accepted.unwrap_or_else(|| panic!("no embedding for t = {t}"));
            let g = gram_of(&found.images).unwrap();
            assert_eq!(g, crate::lattice_core::gram_qt_og10(&t.into()).unwrap());
            assert!((2..=16).contains(&found.count.total()));
        }
    }

    #[test]
    fn rank2_search_reproduces_gram() {
        let out = search_rank2(10, -3, 12, (2, 14), Some((15, 16)), 2_000_000);
        let found = out.accepted.expect("an embedding exists");
        let g = gram_of(&found.images).unwrap();
        assert_eq!(g, crate::lattice_core::GramMatrix::from_i64(&[vec![10, -3], vec![-3, 12]]).unwrap());
    }
}
