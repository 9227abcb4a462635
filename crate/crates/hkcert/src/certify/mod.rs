//! From a moduli query to a verdict with a machine-checkable certificate.
//!
//! A [`ModuliQuery`] names a family (K3^[n] or OG10), the degree 2d, the
//! divisibility γ and optionally a component label a. [`certify`] decides
//! non-emptiness, computes t, applies the reductions that relate different
//! moduli spaces (strange duality, dominant maps dividing d or n − 1 by a
//! square, the γ = 2 to n = 2 map), runs the matching embedding construction,
//! counts orthogonal roots with the brute-force oracle and records every
//! numeric hypothesis as a named check. [`verify_certificate`] recomputes all
//! of this independently.

pub mod exhaustive;
mod verify;

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::e8_roots::{find_witness_root, roots_in_vminus_orthogonal_to, E8Vector, Embedding, RootCount};
use crate::embeddings::{
    embed_gamma1, embed_gamma_ge3, embed_k32_div2, embed_og10_div3, gamma1_parameters, k32_parameters,
    og10_parameters, EmbedError,
};
use crate::lattice_core::{gram_qh_k3n, GramMatrix};
use crate::squares::isqrt;

pub use verify::{structural_problems, verify_certificate};

/// Version of the certificate JSON layout.
pub const SCHEMA_VERSION: u32 = 1;
/// Default node budget of the exhaustive fallback.
pub const DEFAULT_BUDGET: u64 = 2_000_000;
/// Largest degree d accepted by the certifier.
pub const MAX_D: u64 = 1 << 40;
/// Largest n accepted by the certifier.
pub const MAX_N: u64 = 1 << 30;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("the query has several components {0:?}; pass a component label")]
    AmbiguousComponent(Vec<u64>),
    #[error("t = (d + (n−1)a²)/γ² is not integral for {0}")]
    NonIntegralT(String),
    #[error("the query is empty: {0}")]
    EmptyQuery(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    K3n,
    Og10,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::K3n => "k3n",
            Family::Og10 => "og10",
        })
    }
}

impl FromStr for Family {
    type Err = CertifyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "k3n" => Ok(Family::K3n),
            "og10" => Ok(Family::Og10),
            other => Err(CertifyError::InvalidQuery(format!("unknown family `{other}`"))),
        }
    }
}

/// A moduli space of polarized hyperkähler manifolds (degree 2d, divisibility γ).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ModuliQuery {
    pub family: Family,
    /// n for K3^[n]; absent for OG10.
    pub n: Option<u64>,
    pub d: u64,
    pub gamma: u64,
    /// Component label in {0, …, ⌊γ/2⌋}.
    pub a: Option<u64>,
}

impl ModuliQuery {
    pub fn k3n(n: u64, d: u64, gamma: u64, a: Option<u64>) -> Self {
        Self {
            family: Family::K3n,
            n: Some(n),
            d,
            gamma,
            a,
        }
    }

    pub fn og10(d: u64, gamma: u64) -> Self {
        Self {
            family: Family::Og10,
            n: None,
            d,
            gamma,
            a: None,
        }
    }

    fn with_a(&self, a: u64) -> Self {
        Self {
            a: Some(a),
            ..self.clone()
        }
    }
}

impl fmt::Display for ModuliQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::K3n => write!(f, "K3^[{}], 2d = {}, γ = {}", self.n.unwrap_or(0), 2 * self.d, self.gamma)?,
            Family::Og10 => write!(f, "OG10, 2d = {}, γ = {}", 2 * self.d, self.gamma)?,
        }
        if let Some(a) = self.a {
            write!(f, ", a = {a}")?;
        }
        Ok(())
    }
}

/// The outcome of certification.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    GeneralType,
    GeneralTypeLiterature { citation: String },
    NonNegativeKodaira,
    OpenCase,
    Inconclusive,
    Empty,
}

impl Verdict {
    /// Strength order: GeneralType > GeneralTypeLiterature > NonNegativeKodaira
    /// > OpenCase > Inconclusive > Empty.
    pub fn rank(&self) -> u8 {
        match self {
            Verdict::GeneralType => 5,
            Verdict::GeneralTypeLiterature { .. } => 4,
            Verdict::NonNegativeKodaira => 3,
            Verdict::OpenCase => 2,
            Verdict::Inconclusive => 1,
            Verdict::Empty => 0,
        }
    }

    /// Process exit code used by the command-line interface.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::GeneralType | Verdict::GeneralTypeLiterature { .. } => 0,
            Verdict::NonNegativeKodaira => 2,
            Verdict::OpenCase | Verdict::Inconclusive => 3,
            Verdict::Empty => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Verdict::GeneralType => "GeneralType",
            Verdict::GeneralTypeLiterature { .. } => "GeneralTypeLiterature",
            Verdict::NonNegativeKodaira => "NonNegativeKodaira",
            Verdict::OpenCase => "OpenCase",
            Verdict::Inconclusive => "Inconclusive",
            Verdict::Empty => "Empty",
        }
    }
}

/// Citations for verdicts taken from the literature.
pub const CITATION_K32_SPLIT: &str = "GHS10";
pub const CITATION_OG10: &str = "GHS11";
pub const CITATION_K32_DIV2: &str = "GHS13";

/// One named hypothesis check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub pass: bool,
    /// Informational checks are recorded but never block a verdict.
    pub informational: bool,
}

impl Check {
    pub fn new(name: &str, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            expected: expected.into(),
            observed: observed.into(),
            pass,
            informational: false,
        }
    }

    pub fn info(name: &str, expected: impl Into<String>, observed: impl Into<String>, pass: bool) -> Self {
        Self {
            informational: true,
            ..Self::new(name, expected, observed, pass)
        }
    }

    fn informational(mut self) -> Self {
        self.informational = true;
        self
    }
}

/// The kind of a reduction step.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionKind {
    /// (n, d, γ, a) ↦ (d + 1, n − 1, γ, a').
    StrangeDuality,
    /// (n, d·r²) ↦ (n, d).
    DivideDBySquare { r: u64 },
    /// (n, d·4^e) ↦ (n, d).
    FourPowerStrip { e: u32 },
    /// ((n−1)·r² + 1, d) ↦ (n, d).
    DivideNBySquare { r: u64 },
    /// (k² + 1, d, 2, 1) ↦ (2, d, 2, 1) for k odd.
    Gamma2ToN2 { k: u64 },
}

/// One reduction step with its validity check.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Reduction {
    pub step: ReductionKind,
    pub from: ModuliQuery,
    pub to: ModuliQuery,
    pub check: Check,
}

/// The embedding part of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub construction_tag: String,
    pub gram: Vec<Vec<String>>,
    /// Images in doubled coordinates (2x₁, …, 2x₈).
    pub images: Vec<[i64; 8]>,
    pub primitive: bool,
    pub parameters: BTreeMap<String, String>,
}

impl EmbeddingRecord {
    fn new(emb: &Embedding, parameters: BTreeMap<String, String>) -> Self {
        Self {
            construction_tag: emb.construction_tag.clone(),
            gram: emb.gram.to_strings(),
            images: emb.images.iter().map(|v| v.doubled()).collect(),
            primitive: emb.primitive,
            parameters,
        }
    }
}

/// Options that influence certification (recorded in every certificate).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertifyOptions {
    /// Enables the budgeted exhaustive embedding search as a fallback.
    pub exhaustive: bool,
    /// Node budget for the exhaustive search.
    pub budget: u64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            exhaustive: false,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// The machine-checkable record of a verdict.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: u32,
    pub query: ModuliQuery,
    /// t of the query's own lattice, as a decimal string.
    pub t: Option<String>,
    /// All non-empty component labels of the query's moduli space.
    pub components: Vec<u64>,
    pub reduction_chain: Vec<Reduction>,
    pub embedding: Option<EmbeddingRecord>,
    pub root_count: Option<RootCount>,
    pub checks: Vec<Check>,
    pub verdict: Verdict,
    pub annotations: Vec<String>,
    pub options: CertifyOptions,
}

impl Certificate {
    /// The query whose lattice the embedding realizes (end of the chain).
    pub fn base_query(&self) -> &ModuliQuery {
        self.reduction_chain.last().map_or(&self.query, |r| &r.to)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificates serialize")
    }
}

/// Component labels of a moduli space.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ComponentSet {
    pub labels: Vec<u64>,
}

impl ComponentSet {
    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, a: u64) -> bool {
        self.labels.contains(&a)
    }
}

/// The non-empty components: labels a ∈ {0, …, ⌊γ/2⌋} coprime to γ with
/// d ≡ −(n−1)a² (mod γ²) for K3^[n]; for OG10 the single label 0 when γ = 1
/// and 1 when γ = 3 and 2d ≡ 12 (mod 18).
pub fn non_empty_components(family: Family, n: Option<u64>, d: u64, gamma: u64) -> ComponentSet {
    if d == 0 || gamma == 0 {
        return ComponentSet::default();
    }
    let labels = match family {
        Family::Og10 => match gamma {
            1 => vec![0],
            3 if (2 * d as u128) % 18 == 12 => vec![1],
            _ => vec![],
        },
        Family::K3n => {
            let Some(n) = n.filter(|&n| n >= 2) else {
                return ComponentSet::default();
            };
            let (m, g, dd) = (n as u128 - 1, gamma as u128, d as u128);
            if (2 * m) % g != 0 {
                return ComponentSet::default();
            }
            if gamma == 1 {
                vec![0]
            } else {
                (1..=gamma / 2)
                    .filter(|&a| a.gcd(&gamma) == 1 && (dd + m * (a as u128).pow(2)) % (g * g) == 0)
                    .collect()
            }
        }
    };
    ComponentSet { labels }
}

/// t = (d + (n−1)a²)/γ².
pub fn t_of(n: u64, d: u64, gamma: u64, a: u64) -> Result<u64, CertifyError> {
    let num = d as u128 + (n as u128 - 1) * (a as u128).pow(2);
    let den = (gamma as u128).pow(2);
    if n < 2 || gamma == 0 || num % den != 0 {
        return Err(CertifyError::NonIntegralT(format!("(n, d, γ, a) = ({n}, {d}, {gamma}, {a})")));
    }
    u64::try_from(num / den).map_err(|_| CertifyError::InvalidQuery("t out of range".into()))
}

/// t for OG10 with γ = 3: 2d = 18t − 6.
pub fn og10_t(d: u64) -> Option<u64> {
    let two_d = 2 * d;
    (two_d % 18 == 12).then(|| (two_d + 6) / 18)
}

/// Index of the monodromy group in the stable orthogonal group:
/// 1 if n = 2 or γ ≥ 3, and 2 otherwise.
pub fn monodromy_index(n: u64, gamma: u64) -> u8 {
    if n == 2 || gamma >= 3 {
        1
    } else {
        2
    }
}

/// The integer a'' ∈ [0, γ) with a·a'' ≡ 1 (mod γ) (0 when γ = 1).
fn inverse_lift(a: u64, gamma: u64) -> Option<u64> {
    if gamma == 1 {
        return Some(0);
    }
    (1..gamma).find(|&x| (a as u128 * x as u128) % gamma as u128 == 1)
}

/// Strange duality (n, d, γ, a) ↦ (d + 1, n − 1, γ, a') with ±a·a' ≡ 1 (mod γ)
/// and a' ∈ {0, …, ⌊γ/2⌋}.
pub fn strange_duality(n: u64, d: u64, gamma: u64, a: u64) -> Result<(u64, u64, u64, u64), CertifyError> {
    if !non_empty_components(Family::K3n, Some(n), d, gamma).contains(a) {
        return Err(CertifyError::EmptyQuery(format!("(n, d, γ, a) = ({n}, {d}, {gamma}, {a})")));
    }
    let lift = inverse_lift(a, gamma).expect("a is coprime to γ");
    let a_dual = lift.min(gamma - lift);
    let a_dual = if gamma == 1 { 0 } else { a_dual };
    Ok((d + 1, n - 1, gamma, a_dual))
}

/// The explicit lattice isometry behind strange duality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualityIsometry {
    /// Q_h for (n, d, γ, a).
    pub q: GramMatrix,
    /// Q_h for (d + 1, n − 1, γ, a'') where a·a'' = 1 + zγ.
    pub q_dual: GramMatrix,
    pub a_lift: i64,
    pub z: i64,
    pub t: u64,
    pub t_dual: u64,
    /// Columns are the images of z₁, z₂: z₁ ↦ a''z₁' + γz₂', z₂ ↦ −(z·z₁' + a·z₂').
    pub basis_map: [[i64; 2]; 2],
}

impl DualityIsometry {
    /// True iff Bᵀ·Q'·B = Q.
    pub fn preserves_gram(&self) -> bool {
        let b = self.basis_map;
        let qd = self.q_dual.entries();
        (0..2).all(|i| {
            (0..2).all(|j| {
                let mut s = BigInt::from(0);
                for k in 0..2 {
                    for l in 0..2 {
                        s += BigInt::from(b[k][i]) * &qd[k][l] * BigInt::from(b[l][j]);
                    }
                }
                &s == self.q.get(i, j)
            })
        })
    }
}

/// Builds the strange-duality isometry for a non-empty (n, d, γ, a). The
/// dual t is t' = t·a''² − ((n−1)/γ)(2z + z²γ), checked against the direct
/// formula (d' + (n'−1)a''²)/γ².
pub fn duality_isometry(n: u64, d: u64, gamma: u64, a: u64) -> Result<DualityIsometry, CertifyError> {
    strange_duality(n, d, gamma, a)?;
    let lift = inverse_lift(a, gamma).expect("a is coprime to γ");
    let z = (a as i128 * lift as i128 - 1) / gamma as i128;
    let t = t_of(n, d, gamma, a)?;
    let t_dual = t_of(d + 1, n - 1, gamma, lift)?;
    // The closed formula, in exact integer arithmetic: γ·t' = γ·t·a''² − (n−1)(2z + z²γ).
    let g = gamma as i128;
    let lhs = g * t_dual as i128;
    let rhs = g * t as i128 * (lift as i128).pow(2) - (n as i128 - 1) * (2 * z + z * z * g);
    if lhs != rhs {
        return Err(CertifyError::InvalidQuery(format!(
            "dual t mismatch for ({n}, {d}, {gamma}, {a}): {lhs} ≠ {rhs}"
        )));
    }
    let inv = |e: crate::lattice_core::LatticeError| CertifyError::InvalidQuery(e.to_string());
    let q = gram_qh_k3n(n, gamma, a, &BigInt::from(t)).map_err(inv)?;
    let q_dual = gram_qh_k3n(d + 1, gamma, lift, &BigInt::from(t_dual)).map_err(inv)?;
    Ok(DualityIsometry {
        q,
        q_dual,
        a_lift: lift as i64,
        z: z as i64,
        t,
        t_dual,
        basis_map: [[lift as i64, -(z as i64)], [gamma as i64, -(a as i64)]],
    })
}

/// ⌈6γ²(n + 3 + √(2(n−1)))²⌉, computed exactly.
pub fn uniform_bound(n: u64, gamma: u64) -> u128 {
    let (n, g2) = (n as u128, (gamma as u128).pow(2));
    let c = 2 * (n - 1);
    let a = 6 * g2 * ((n + 3).pow(2) + c);
    let b = 12 * g2 * (n + 3);
    a + ceil_sqrt(b * b * c)
}

fn ceil_sqrt(x: u128) -> u128 {
    let mut r = (x as f64).sqrt() as u128;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    if r * r == x {
        r
    } else {
        r + 1
    }
}

fn validate(q: &ModuliQuery) -> Result<(), CertifyError> {
    let bad = |m: String| Err(CertifyError::InvalidQuery(m));
    if q.d == 0 || q.d > MAX_D {
        return bad(format!("d = {} must lie in [1, {MAX_D}]", q.d));
    }
    if q.gamma == 0 || q.gamma > 1 << 20 {
        return bad(format!("γ = {} must lie in [1, 2^20]", q.gamma));
    }
    match q.family {
        Family::K3n => {
            let Some(n) = q.n else {
                return bad("K3^[n] queries need n".into());
            };
            if !(2..=MAX_N).contains(&n) {
                return bad(format!("n = {n} must lie in [2, {MAX_N}]"));
            }
            if (2 * (n - 1)) % q.gamma != 0 {
                return bad(format!("γ = {} does not divide 2(n−1) = {}", q.gamma, 2 * (n - 1)));
            }
            if let Some(a) = q.a {
                if a > q.gamma / 2 || a.gcd(&q.gamma) != 1 {
                    return bad(format!("a = {a} is not a label in {{0, …, ⌊γ/2⌋}} coprime to γ"));
                }
            }
        }
        Family::Og10 => {
            if q.n.is_some() {
                return bad("OG10 queries take no n".into());
            }
        }
    }
    Ok(())
}

/// Certifies every non-empty component of the query (or the given one).
pub fn certify_all(query: &ModuliQuery, options: &CertifyOptions) -> Result<Vec<Certificate>, CertifyError> {
    validate(query)?;
    if query.a.is_some() {
        return Ok(vec![certify(query, options)?]);
    }
    let comps = non_empty_components(query.family, query.n, query.d, query.gamma);
    if comps.labels.len() <= 1 {
        return Ok(vec![certify(query, options)?]);
    }
    comps
        .labels
        .iter()
        .map(|&a| certify(&query.with_a(a), options))
        .collect()
}

/// Certifies one component. Without a label, the query must have at most one
/// non-empty component.
pub fn certify(query: &ModuliQuery, options: &CertifyOptions) -> Result<Certificate, CertifyError> {
    validate(query)?;
    let comps = non_empty_components(query.family, query.n, query.d, query.gamma);
    let resolved = match query.a {
        Some(a) => Some(a),
        None => match comps.labels.as_slice() {
            [] => None,
            [a] => Some(*a),
            many => return Err(CertifyError::AmbiguousComponent(many.to_vec())),
        },
    };
    let mut q = query.clone();
    let outcome = match resolved {
        Some(a) if comps.contains(a) => {
            q.a = Some(a);
            dispatch(&q, options)
        }
        _ => empty_outcome(&q, &comps),
    };
    let t = match (q.family, q.a) {
        (_, None) => None,
        (Family::K3n, Some(a)) => t_of(q.n.unwrap_or(0), q.d, q.gamma, a).ok().map(|t| t.to_string()),
        (Family::Og10, Some(_)) => match q.gamma {
            3 => og10_t(q.d).map(|t| t.to_string()),
            _ => Some(q.d.to_string()),
        },
    };
    let mut cert = Certificate {
        schema_version: SCHEMA_VERSION,
        query: q,
        t,
        components: comps.labels,
        reduction_chain: outcome.chain,
        embedding: outcome.embedding,
        root_count: outcome.root_count,
        checks: outcome.checks,
        verdict: outcome.verdict,
        annotations: outcome.annotations,
        options: *options,
    };
    let problems = structural_problems(&cert);
    if !problems.is_empty() {
        cert.verdict = Verdict::Inconclusive;
        cert.annotations
            .push(format!("self-verification failed: {}", problems.join("; ")));
    }
    Ok(cert)
}

/// Everything a path contributes to a certificate.
#[derive(Debug, Clone, Default)]
struct Outcome {
    verdict: Option<Verdict>,
    chain: Vec<Reduction>,
    embedding: Option<EmbeddingRecord>,
    root_count: Option<RootCount>,
    checks: Vec<Check>,
    annotations: Vec<String>,
}

struct Finished {
    verdict: Verdict,
    chain: Vec<Reduction>,
    embedding: Option<EmbeddingRecord>,
    root_count: Option<RootCount>,
    checks: Vec<Check>,
    annotations: Vec<String>,
}

impl Outcome {
    fn finish(self) -> Finished {
        Finished {
            verdict: self.verdict.unwrap_or(Verdict::Inconclusive),
            chain: self.chain,
            embedding: self.embedding,
            root_count: self.root_count,
            checks: self.checks,
            annotations: self.annotations,
        }
    }

    fn verdict(&self) -> Verdict {
        self.verdict.clone().unwrap_or(Verdict::Inconclusive)
    }

    fn blocking_failure(&self) -> bool {
        self.checks.iter().any(|c| !c.pass && !c.informational)
    }
}

fn empty_outcome(q: &ModuliQuery, comps: &ComponentSet) -> Finished {
    let observed = match q.a {
        Some(a) => format!("label {a} not among non-empty components {:?}", comps.labels),
        None => "no non-empty component".to_string(),
    };
    Finished {
        verdict: Verdict::Empty,
        chain: vec![],
        embedding: None,
        root_count: None,
        checks: vec![Check::new("non_empty", "some component is non-empty", observed, false)],
        annotations: vec![],
    }
}

fn non_empty_check(q: &ModuliQuery) -> Check {
    Check::new(
        "non_empty",
        "the label satisfies the non-emptiness congruence",
        format!("a = {}", q.a.unwrap_or(0)),
        true,
    )
}

fn dispatch(q: &ModuliQuery, opts: &CertifyOptions) -> Finished {
    let mut out = match (q.family, q.gamma) {
        (Family::Og10, _) => og10_path(q, opts),
        (Family::K3n, 1) => gamma1_path(q),
        (Family::K3n, 2) => gamma2_path(q),
        (Family::K3n, _) => gamma_ge3_path(q, opts, true),
    };
    let n = q.n.unwrap_or(2);
    let mut head = vec![non_empty_check(q)];
    if q.family == Family::K3n {
        head.push(Check::info(
            "monodromy_index",
            "1 if n = 2 or γ ≥ 3, else 2",
            monodromy_index(n, q.gamma).to_string(),
            true,
        ));
    }
    head.append(&mut out.checks);
    out.checks = head;
    out.finish()
}

fn range_check(name: &str, total: u32, lo: u32, hi: u32) -> Check {
    Check::new(
        name,
        format!("{lo} ≤ |R| ≤ {hi}"),
        total.to_string(),
        (lo..=hi).contains(&total),
    )
}

fn embed_failure_check(e: &EmbedError) -> Check {
    match e {
        EmbedError::HypothesisViolated { check, detail } => Check::new(check, "holds", detail.clone(), false),
        other => Check::new("construction", "succeeds", other.to_string(), false),
    }
}

fn params_map<T: Serialize>(value: &T) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    if let Ok(serde_json::Value::Object(obj)) = serde_json::to_value(value) {
        for (k, v) in obj {
            let s = match v {
                serde_json::Value::String(s) => s,
                other => other.to_string(),
            };
            map.insert(k, s);
        }
    }
    map
}

// --- γ ≥ 3 ------------------------------------------------------------------

fn gamma_ge3_path(q: &ModuliQuery, opts: &CertifyOptions, allow_duality: bool) -> Outcome {
    let (n, d, g, a) = (q.n.unwrap_or(2), q.d, q.gamma, q.a.unwrap_or(0));
    let mut out = Outcome::default();
    let t = match t_of(n, d, g, a) {
        Ok(t) => t,
        Err(e) => {
            out.checks.push(Check::new("t_integral", "integral", e.to_string(), false));
            return out;
        }
    };
    let dn = d as u128 * (n as u128 - 1);
    let g2 = (g as u128).pow(2);
    out.checks.push(Check::new(
        "discriminant_guard",
        "d(n−1)/γ² > 4",
        format!("{dn}/{g2}"),
        dn > 4 * g2,
    ));
    out.checks.push(Check::new(
        "irregular_cusp_guard",
        "4d(n−1)/γ² > 16",
        format!("{}/{g2}", 4 * dn),
        4 * dn > 16 * g2,
    ));
    let bound = uniform_bound(n, g);
    out.checks.push(Check::info(
        "uniform_bound",
        format!("d ≥ {bound}"),
        d.to_string(),
        d as u128 >= bound,
    ));
    let guards_ok = dn > 4 * g2;
    let m = 2 * (n as i64 - 1);
    let nn = -(2 * a as i64 * (n as i64 - 1) / g as i64);
    let p = match t.checked_mul(2).and_then(|v| i64::try_from(v).ok()) {
        Some(p) => p,
        None => {
            out.checks.push(Check::new("t_range", "2t fits in 63 bits", t.to_string(), false));
            return out;
        }
    };
    match embed_gamma_ge3(m, nn, p) {
        Ok((emb, sel)) => {
            for name in ["M_even", "M_gt_8", "M_excluded", "positive_definite", "S_gt_5", "S_residue", "S_excluded"] {
                out.checks.push(Check::new(name, "holds", "holds", true));
            }
            let count = emb.orthogonal_roots().count;
            out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
            out.checks.push(range_check("root_window", count.total(), 2, 14));
            out.checks.push(Check::info(
                "root_total_le_54",
                "|R| ≤ 54",
                count.total().to_string(),
                count.total() <= 54,
            ));
            let mut params = params_map(&sel);
            params.insert("M".into(), m.to_string());
            params.insert("N".into(), nn.to_string());
            params.insert("P".into(), p.to_string());
            out.embedding = Some(EmbeddingRecord::new(&emb, params));
            out.root_count = Some(count);
            if guards_ok && !out.blocking_failure() {
                out.verdict = Some(Verdict::GeneralType);
                return out;
            }
        }
        Err(e) => {
            out.checks.push(embed_failure_check(&e));
        }
    }
    if !guards_ok {
        return out;
    }
    if allow_duality && (n == 11 || n == 13) {
        if let Some(dual) = try_duality_ge3(q, opts, &out) {
            return dual;
        }
    }
    if opts.exhaustive {
        return exhaustive_rank2(out, m, nn, p, opts);
    }
    out
}

fn demote(checks: &mut [Check]) {
    for c in checks.iter_mut() {
        if !c.pass {
            c.informational = true;
        }
    }
}

fn try_duality_ge3(q: &ModuliQuery, opts: &CertifyOptions, original: &Outcome) -> Option<Outcome> {
    let (n, d, g, a) = (q.n?, q.d, q.gamma, q.a?);
    let (n2, d2, g2, a2) = strange_duality(n, d, g, a).ok()?;
    if n2 > MAX_N || d2 > MAX_D {
        return None;
    }
    let dual_q = ModuliQuery::k3n(n2, d2, g2, Some(a2));
    let mut dual = gamma_ge3_path(&dual_q, opts, false);
    if dual.verdict() != Verdict::GeneralType {
        return None;
    }
    let mut checks: Vec<Check> = original.checks.iter().cloned().map(Check::informational).collect();
    demote(&mut checks);
    checks.extend(dual.checks.drain(..));
    dual.checks = checks;
    dual.chain.insert(
        0,
        Reduction {
            step: ReductionKind::StrangeDuality,
            from: q.clone(),
            to: dual_q,
            check: Check::new("strange_duality", "(n, d, γ, a) ↦ (d+1, n−1, γ, a')", format!("a' = {a2}"), true),
        },
    );
    dual.annotations
        .push("the construction does not apply directly; certified on the strange dual".into());
    Some(dual)
}

fn exhaustive_rank2(mut out: Outcome, m: i64, n: i64, p: i64, opts: &CertifyOptions) -> Outcome {
    let res = exhaustive::search_rank2(m, n, p, (2, 14), Some((15, 16)), opts.budget);
    let found = res.accepted.clone().or(res.secondary.clone());
    let Some(found) = found else {
        out.annotations.push(format!(
            "exhaustive search found no embedding ({} nodes{})",
            res.nodes,
            if res.budget_exhausted { ", budget exhausted" } else { "" }
        ));
        return out;
    };
    demote(&mut out.checks);
    out.checks.retain(|c| !matches!(c.name.as_str(), "primitive" | "root_window" | "root_total_le_54"));
    let emb = Embedding::from_images(found.images.clone(), "exhaustive").expect("found images are independent");
    let total = found.count.total();
    out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
    out.checks.push(Check::info(
        "root_total_le_54",
        "|R| ≤ 54",
        total.to_string(),
        total <= 54,
    ));
    let mut params = BTreeMap::new();
    params.insert("M".into(), m.to_string());
    params.insert("N".into(), n.to_string());
    params.insert("P".into(), p.to_string());
    params.insert("nodes".into(), res.nodes.to_string());
    out.embedding = Some(EmbeddingRecord::new(&emb, params));
    out.root_count = Some(found.count);
    if total <= 14 {
        out.checks.push(range_check("root_window", total, 2, 14));
        out.verdict = Some(Verdict::GeneralType);
    } else {
        out.checks.push(range_check("root_window_nonneg", total, 15, 16));
        out.verdict = Some(Verdict::NonNegativeKodaira);
    }
    out.annotations.push(format!("embedding found by exhaustive search ({} nodes)", res.nodes));
    out
}

// --- γ = 1 ------------------------------------------------------------------

/// (4a): d ≥ 3, d ≢ 0, 4, 7 mod 8 and d not a positive-coprime exception.
pub fn gamma1_regime_4a(d: u64) -> bool {
    d >= 3 && !matches!(d % 8, 0 | 4 | 7) && !crate::squares::THREE_POS_COPRIME.contains(&d)
}

/// (4b): d an odd prime ≡ 3 mod 4.
pub fn gamma1_regime_4b(d: u64) -> bool {
    d % 4 == 3 && is_prime(d)
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n % i == 0 {
            return false;
        }
        i += 1;
    }
    true
}

/// The base verdict of a γ = 1 state without reductions.
fn gamma1_base(n: u64, d: u64) -> Outcome {
    let mut out = Outcome::default();
    if n == 2 {
        let ok = d >= 12;
        out.checks.push(Check::new("ghs10_range", "n = 2 and d ≥ 12", format!("d = {d}"), ok));
        if ok {
            out.verdict = Some(Verdict::GeneralTypeLiterature {
                citation: CITATION_K32_SPLIT.into(),
            });
        }
        return out;
    }
    let regime = if gamma1_regime_4a(d) {
        Some("4a")
    } else if gamma1_regime_4b(d) {
        Some("4b")
    } else {
        None
    };
    out.checks.push(Check::new(
        "d_regime",
        "d ≥ 3, d ≢ 0,4,7 mod 8, d not exceptional; or d an odd prime ≡ 3 mod 4",
        format!("d = {d}"),
        regime.is_some(),
    ));
    let (emb, _) = match embed_gamma1(n, d) {
        Ok(v) => v,
        Err(e) => {
            out.checks.push(embed_failure_check(&e));
            return out;
        }
    };
    for name in ["n_minus_1_gt_6", "n_minus_1_residue", "n_minus_1_excluded", "d_ge_3", "d_residue"] {
        out.checks.push(Check::new(name, "holds", "holds", true));
    }
    let two_d = 2 * d;
    out.checks.push(Check::new(
        "cusp_guard",
        "2d/γ ∉ {1, 2, 4, 8}",
        two_d.to_string(),
        ![1, 2, 4, 8].contains(&two_d),
    ));
    let half = roots_in_vminus_orthogonal_to(&emb.images[0]).map(|c| c / 2).unwrap_or(0);
    out.checks.push(Check::new(
        "vminus_half_count_odd",
        "½|R(v₁^⊥ ∩ V₋)| odd",
        half.to_string(),
        half % 2 == 1,
    ));
    let count = emb.orthogonal_roots().count;
    out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
    out.checks.push(range_check("root_window", count.total(), 2, 14));
    match regime {
        Some("4a") => out.checks.push(Check::new(
            "total_mod_4",
            "|R| ≡ 0 mod 4",
            count.total().to_string(),
            count.total() % 4 == 0,
        )),
        Some(_) => {
            let witness = find_witness_root(&emb.images[0], &emb.images[1]);
            out.checks.push(Check::info(
                "witness_root",
                "a root s ⊥ v₁ with (s, v₂) even and nonzero",
                witness.map_or("none".to_string(), |w| w.to_string()),
                witness.is_some(),
            ));
            out.annotations.push("witness: partial".into());
        }
        None => {}
    }
    let mut params = params_map(&gamma1_parameters(n, d).expect("embedding succeeded"));
    params.insert("regime".into(), regime.unwrap_or("none").into());
    out.embedding = Some(EmbeddingRecord::new(&emb, params));
    out.root_count = Some(count);
    if !out.blocking_failure() {
        out.verdict = Some(Verdict::GeneralType);
    }
    out
}

/// The γ = 1 reduction moves from (n, d), in a fixed order.
fn gamma1_moves(n: u64, d: u64) -> Vec<(ReductionKind, u64, u64)> {
    let mut moves = Vec::new();
    let mut r = 2u64;
    while r * r <= d {
        if d % (r * r) == 0 {
            let step = if r.is_power_of_two() {
                ReductionKind::FourPowerStrip {
                    e: r.trailing_zeros(),
                }
            } else {
                ReductionKind::DivideDBySquare { r }
            };
            moves.push((step, n, d / (r * r)));
        }
        r += 1;
    }
    let k = n - 1;
    let mut r = 2u64;
    while r * r <= k {
        if k % (r * r) == 0 {
            moves.push((ReductionKind::DivideNBySquare { r }, k / (r * r) + 1, d));
        }
        r += 1;
    }
    // The k = 9 caveat: strange duality is not used from (n, d) = (10, 1).
    if !(n == 10 && d == 1) && d < MAX_N {
        moves.push((ReductionKind::StrangeDuality, d + 1, n - 1));
    }
    moves
}

/// Validity of a reduction step, recomputed from scratch.
pub fn reduction_valid(step: &ReductionKind, from: &ModuliQuery, to: &ModuliQuery) -> bool {
    let (Some(n), Some(n2)) = (from.n, to.n) else {
        return false;
    };
    if from.family != Family::K3n || to.family != Family::K3n {
        return false;
    }
    match step {
        ReductionKind::DivideDBySquare { r } => {
            *r >= 2 && from.gamma == 1 && to.gamma == 1 && n2 == n && to.d.checked_mul(r * r) == Some(from.d)
        }
        ReductionKind::FourPowerStrip { e } => {
            *e >= 1
                && *e < 32
                && from.gamma == 1
                && to.gamma == 1
                && n2 == n
                && to.d.checked_mul(1u64 << (2 * e)) == Some(from.d)
        }
        ReductionKind::DivideNBySquare { r } => {
            *r >= 2
                && from.gamma == 1
                && to.gamma == 1
                && to.d == from.d
                && n2 >= 2
                && (n2 - 1).checked_mul(r * r) == Some(n - 1)
        }
        ReductionKind::StrangeDuality => {
            if from.gamma == 1 && n == 10 && from.d == 1 {
                return false;
            }
            from.a.is_some()
                && strange_duality(n, from.d, from.gamma, from.a.unwrap_or(0))
                    .map(|(a, b, c, e)| (a, b, c, Some(e)) == (n2, to.d, to.gamma, to.a))
                    .unwrap_or(false)
        }
        ReductionKind::Gamma2ToN2 { k } => {
            k % 2 == 1
                && from.gamma == 2
                && to.gamma == 2
                && n == k * k + 1
                && n2 == 2
                && to.d == from.d
                && from.a == Some(1)
                && to.a == Some(1)
        }
    }
}

fn gamma1_path(q: &ModuliQuery) -> Outcome {
    let start = (q.n.unwrap_or(2), q.d);
    let state_query = |(n, d): (u64, u64)| ModuliQuery::k3n(n, d, 1, Some(0));
    let mut visited = HashSet::new();
    visited.insert(start);
    let mut queue: VecDeque<((u64, u64), Vec<Reduction>)> = VecDeque::new();
    queue.push_back((start, vec![]));
    let mut best: Option<Outcome> = None;
    let mut root: Option<Outcome> = None;
    while let Some((state, chain)) = queue.pop_front() {
        let mut out = gamma1_base(state.0, state.1);
        out.chain = chain.clone();
        let better = match &best {
            None => out.verdict.is_some(),
            Some(b) => out.verdict().rank() > b.verdict().rank(),
        };
        if root.is_none() {
            root = Some(out.clone());
        }
        if better {
            let done = out.verdict() == Verdict::GeneralType;
            best = Some(out);
            if done {
                break;
            }
        }
        if chain.len() >= 4 {
            continue;
        }
        for (step, n2, d2) in gamma1_moves(state.0, state.1) {
            if n2 < 2 || !visited.insert((n2, d2)) {
                continue;
            }
            let from = state_query(state);
            let to = state_query((n2, d2));
            let check = Check::new(step_check_name(&step), "valid", "valid", true);
            let mut next = chain.clone();
            next.push(Reduction { step, from, to, check });
            queue.push_back(((n2, d2), next));
        }
    }
    match best {
        Some(b) => b,
        None => root.expect("the start state is evaluated"),
    }
}

fn step_check_name(step: &ReductionKind) -> &'static str {
    match step {
        ReductionKind::StrangeDuality => "strange_duality",
        ReductionKind::DivideDBySquare { .. } => "divide_d_by_square",
        ReductionKind::FourPowerStrip { .. } => "four_power_strip",
        ReductionKind::DivideNBySquare { .. } => "divide_n_by_square",
        ReductionKind::Gamma2ToN2 { .. } => "gamma2_to_n2",
    }
}

// --- γ = 2 ------------------------------------------------------------------

fn gamma2_path(q: &ModuliQuery) -> Outcome {
    let n = q.n.unwrap_or(2);
    if n == 2 {
        return k32_path(q);
    }
    let k = isqrt(n - 1);
    if k * k == n - 1 && k % 2 == 1 {
        let to = ModuliQuery::k3n(2, q.d, 2, Some(1));
        let mut out = k32_path(&to);
        out.chain.insert(
            0,
            Reduction {
                step: ReductionKind::Gamma2ToN2 { k },
                from: q.clone(),
                to,
                check: Check::new(step_check_name(&ReductionKind::Gamma2ToN2 { k }), "n − 1 = k², k odd", format!("k = {k}"), true),
            },
        );
        return out;
    }
    let mut out = Outcome::default();
    out.checks.push(Check::new(
        "gamma2_reduction",
        "n = 2, or n − 1 an odd square",
        format!("n − 1 = {}", n - 1),
        false,
    ));
    out
}

fn k32_path(q: &ModuliQuery) -> Outcome {
    let mut out = Outcome::default();
    let t = match t_of(2, q.d, 2, 1) {
        Ok(t) => t,
        Err(e) => {
            out.checks.push(Check::new("t_integral", "integral", e.to_string(), false));
            return out;
        }
    };
    match embed_k32_div2(t) {
        Ok(emb) => {
            let count = emb.orthogonal_roots().count;
            out.checks.push(Check::new("t_covered", "t = 10 or t ≥ 12", t.to_string(), true));
            out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
            out.checks.push(range_check("root_window", count.total(), 2, 14));
            let params = if t == 21 {
                BTreeMap::from([("t".to_string(), "21".to_string())])
            } else {
                params_map(&k32_parameters(t).expect("embedding succeeded"))
            };
            out.embedding = Some(EmbeddingRecord::new(&emb, params));
            out.root_count = Some(count);
            if !out.blocking_failure() {
                out.verdict = Some(Verdict::GeneralType);
            }
        }
        Err(EmbedError::OpenCase(detail)) => {
            out.checks.push(Check::new("t_covered", "t = 10 or t ≥ 12", detail, false));
            out.verdict = Some(Verdict::OpenCase);
        }
        Err(EmbedError::Literature { citation, detail }) => {
            out.checks.push(Check::new("t_covered", "t = 10 or t ≥ 12", detail, true));
            out.verdict = Some(Verdict::GeneralTypeLiterature { citation });
        }
        Err(e) => out.checks.push(embed_failure_check(&e)),
    }
    out
}

// --- OG10 -------------------------------------------------------------------

fn og10_path(q: &ModuliQuery, opts: &CertifyOptions) -> Outcome {
    let mut out = Outcome::default();
    if q.gamma == 1 {
        out.checks.push(Check::info(
            "og10_split",
            "non-split polarization (γ = 3)",
            "γ = 1",
            false,
        ));
        out.annotations
            .push("split OG10 polarizations are outside the implemented criteria".into());
        return out;
    }
    let t = og10_t(q.d).expect("non-empty OG10 components have 2d ≡ 12 mod 18");
    let two_d_over_3 = 2 * q.d / 3;
    out.checks.push(Check::new(
        "no_irregular_cusp",
        "2d/3 ≠ 8",
        two_d_over_3.to_string(),
        two_d_over_3 != 8,
    ));
    match embed_og10_div3(t) {
        Ok(emb) => {
            let count = emb.orthogonal_roots().count;
            out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
            out.checks.push(range_check("root_window", count.total(), 2, 16));
            out.embedding = Some(EmbeddingRecord::new(
                &emb,
                params_map(&og10_parameters(t).expect("embedding succeeded")),
            ));
            out.root_count = Some(count);
            if !out.blocking_failure() {
                out.verdict = Some(Verdict::GeneralType);
                return out;
            }
        }
        Err(EmbedError::OpenCase(detail)) => {
            out.checks.push(Check::new("t_covered", "t ≥ 4", detail, false));
            out.verdict = Some(Verdict::OpenCase);
            return out;
        }
        Err(EmbedError::Literature { citation, detail }) => {
            out.checks.push(Check::new("t_covered", "t ≥ 4", detail, true));
            out.verdict = Some(Verdict::GeneralTypeLiterature { citation });
            return out;
        }
        Err(e) => out.checks.push(embed_failure_check(&e)),
    }
    if opts.exhaustive {
        let res = exhaustive::search_og10(t as i64, (2, 16), opts.budget);
        match res.accepted {
            Some(found) => {
                demote(&mut out.checks);
                out.checks.retain(|c| !matches!(c.name.as_str(), "primitive" | "root_window"));
                let emb = Embedding::from_images(found.images, "exhaustive").expect("independent images");
                let total = found.count.total();
                out.checks.push(Check::new("primitive", "true", emb.primitive.to_string(), emb.primitive));
                out.checks.push(range_check("root_window", total, 2, 16));
                let params = BTreeMap::from([
                    ("t".to_string(), t.to_string()),
                    ("nodes".to_string(), res.nodes.to_string()),
                ]);
                out.embedding = Some(EmbeddingRecord::new(&emb, params));
                out.root_count = Some(found.count);
                out.verdict = Some(Verdict::GeneralType);
                out.annotations
                    .push(format!("embedding found by exhaustive search ({} nodes)", res.nodes));
            }
            None => out.annotations.push(format!(
                "exhaustive search found no embedding ({} nodes{})",
                res.nodes,
                if res.budget_exhausted { ", budget exhausted" } else { "" }
            )),
        }
    }
    out
}

/// The expected Gram matrix of an embedding certifying `base`.
pub fn expected_gram(base: &ModuliQuery) -> Option<GramMatrix> {
    match base.family {
        Family::K3n => {
            let (n, a) = (base.n?, base.a?);
            let t = t_of(n, base.d, base.gamma, a).ok()?;
            gram_qh_k3n(n, base.gamma, a, &BigInt::from(t)).ok()
        }
        Family::Og10 => {
            if base.gamma != 3 {
                return None;
            }
            crate::lattice_core::gram_qt_og10(&BigInt::from(og10_t(base.d)?)).ok()
        }
    }
}

/// The admissible root-count window for a certificate's embedding.
pub fn root_window(family: Family, tag: &str) -> (u32, u32) {
    if family == Family::Og10 || tag.starts_with("og10") {
        (2, 16)
    } else {
        (2, 14)
    }
}

/// Parses doubled coordinates back into E8 vectors.
pub fn images_of(record: &EmbeddingRecord) -> Result<Vec<E8Vector>, CertifyError> {
    record
        .images
        .iter()
        .map(|c| E8Vector::from_doubled(*c).map_err(|e| CertifyError::MalformedCertificate(e.to_string())))
        .collect()
}
