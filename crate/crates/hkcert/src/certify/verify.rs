//! Independent verification of certificates.
//!
//! The structural pass recomputes every numeric claim from the raw data in
//! the certificate: E8 membership of the images, the Gram matrix against a
//! freshly built expected Gram matrix, primitivity through Smith normal form,
//! the orthogonal root count through the 240-root oracle, the validity of each
//! reduction step and the non-emptiness congruence by brute force. The full
//! check additionally requires agreement with a fresh certification run.

use num_integer::Integer;

use super::{
    certify, expected_gram, images_of, non_empty_components, og10_t, reduction_valid, root_window, t_of,
    Certificate, CertifyError, Family, Verdict, CITATION_K32_DIV2, CITATION_K32_SPLIT, CITATION_OG10,
    SCHEMA_VERSION,
};
use crate::e8_roots::{gram_of, is_in_e8, is_primitive_embedding, roots_orthogonal_to};

/// Brute-force non-emptiness: scans every a in [0, γ) instead of using the
/// closed form.
fn brute_components(family: Family, n: Option<u64>, d: u64, gamma: u64) -> Vec<u64> {
    match family {
        Family::Og10 => non_empty_components(family, n, d, gamma).labels,
        Family::K3n => {
            let Some(n) = n else { return vec![] };
            if n < 2 || (2 * (n - 1)) % gamma != 0 {
                return vec![];
            }
            let g2 = (gamma as u128).pow(2);
            let mut labels: Vec<u64> = (0..gamma)
                .filter(|&a| a.gcd(&gamma) == 1 || gamma == 1)
                .filter(|&a| (d as u128 + (n as u128 - 1) * (a as u128).pow(2)) % g2 == 0)
                .map(|a| a.min(gamma - a) % gamma.max(1))
                .map(|a| if gamma == 1 { 0 } else { a })
                .collect();
            labels.sort_unstable();
            labels.dedup();
            labels
        }
    }
}

/// Lists every structural problem of a certificate (empty when consistent).
pub fn structural_problems(cert: &Certificate) -> Vec<String> {
    let mut problems = Vec::new();
    let q = &cert.query;
    if cert.schema_version != SCHEMA_VERSION {
        problems.push(format!("schema version {} ≠ {SCHEMA_VERSION}", cert.schema_version));
    }
    let comps = brute_components(q.family, q.n, q.d, q.gamma);
    if comps != cert.components {
        problems.push(format!("components {:?} ≠ brute force {comps:?}", cert.components));
    }
    let is_member = q.a.is_some_and(|a| comps.contains(&a));
    if (cert.verdict == Verdict::Empty) == is_member {
        problems.push("the Empty verdict disagrees with the component congruence".into());
    }
    // t of the query itself.
    let expected_t = match (q.family, q.a) {
        (_, None) => None,
        (Family::K3n, Some(a)) => q.n.and_then(|n| t_of(n, q.d, q.gamma, a).ok()).map(|t| t.to_string()),
        (Family::Og10, Some(_)) if q.gamma == 3 => og10_t(q.d).map(|t| t.to_string()),
        (Family::Og10, Some(_)) => Some(q.d.to_string()),
    };
    if cert.t != expected_t {
        problems.push(format!("t = {:?}, expected {expected_t:?}", cert.t));
    }
    // Reduction chain: continuity and validity of each step.
    let mut cursor = q;
    for (i, r) in cert.reduction_chain.iter().enumerate() {
        if &r.from != cursor {
            problems.push(format!("reduction {i} does not start where the previous one ended"));
        }
        if !reduction_valid(&r.step, &r.from, &r.to) {
            problems.push(format!("reduction {i} ({:?}) is invalid", r.step));
        }
        if !r.check.pass {
            problems.push(format!("reduction {i} carries a failed check"));
        }
        cursor = &r.to;
    }
    let base = cert.base_query();
    // Checks must be consistent with the verdict.
    let blocking = cert.checks.iter().any(|c| !c.pass && !c.informational);
    let positive = matches!(
        cert.verdict,
        Verdict::GeneralType | Verdict::GeneralTypeLiterature { .. } | Verdict::NonNegativeKodaira
    );
    if positive && blocking {
        problems.push("a positive verdict carries a failed blocking check".into());
    }
    // Embedding data.
    match &cert.embedding {
        Some(rec) => match images_of(rec) {
            Err(e) => problems.push(e.to_string()),
            Ok(images) => {
                if rec.images.iter().any(|c| !is_in_e8(c)) {
                    problems.push("an image is not in E8".into());
                }
                match gram_of(&images) {
                    Ok(g) => {
                        if g.to_strings() != rec.gram {
                            problems.push("the stored Gram matrix differs from the images' Gram matrix".into());
                        }
                        match expected_gram(base) {
                            Some(exp) if exp == g => {}
                            Some(_) => problems.push("the images do not reproduce the expected Gram matrix".into()),
                            None => problems.push("no expected Gram matrix for the base query".into()),
                        }
                    }
                    Err(e) => problems.push(format!("Gram matrix: {e}")),
                }
                let primitive = is_primitive_embedding(&images).unwrap_or(false);
                if primitive != rec.primitive {
                    problems.push("the stored primitivity flag is wrong".into());
                }
                let count = roots_orthogonal_to(&images).count;
                if cert.root_count != Some(count) {
                    problems.push(format!("root count {:?} ≠ oracle {count:?}", cert.root_count));
                }
                if cert.verdict == Verdict::GeneralType {
                    let (lo, hi) = root_window(base.family, &rec.construction_tag);
                    if !primitive {
                        problems.push("GeneralType with a non-primitive embedding".into());
                    }
                    if !(lo..=hi).contains(&count.total()) {
                        problems.push(format!("GeneralType with {} roots outside [{lo}, {hi}]", count.total()));
                    }
                }
                if cert.verdict == Verdict::NonNegativeKodaira && !(primitive && (15..=16).contains(&count.total())) {
                    problems.push("NonNegativeKodaira needs a primitive embedding with 15 or 16 roots".into());
                }
            }
        },
        None => {
            if cert.root_count.is_some() {
                problems.push("a root count without an embedding".into());
            }
            if matches!(cert.verdict, Verdict::GeneralType | Verdict::NonNegativeKodaira) {
                problems.push(format!("{} without an embedding", cert.verdict.name()));
            }
        }
    }
    // Literature verdicts are only valid in their documented ranges.
    if let Verdict::GeneralTypeLiterature { citation } = &cert.verdict {
        let ok = match citation.as_str() {
            CITATION_K32_SPLIT => base.family == Family::K3n && base.n == Some(2) && base.gamma == 1 && base.d >= 12,
            CITATION_K32_DIV2 => {
                base.family == Family::K3n
                    && base.n == Some(2)
                    && base.gamma == 2
                    && matches!(t_of(2, base.d, 2, 1), Ok(10 | 12))
            }
            CITATION_OG10 => base.family == Family::Og10 && base.gamma == 3 && og10_t(base.d) == Some(4),
            _ => false,
        };
        if !ok {
            problems.push(format!("citation {citation} does not cover {base}"));
        }
        if cert.embedding.is_some() {
            problems.push("a literature verdict carries an embedding".into());
        }
    }
    problems
}

/// True iff the certificate is structurally consistent and identical to a
/// fresh certification of its query with its recorded options.
pub fn verify_certificate(cert: &Certificate) -> Result<bool, CertifyError> {
    if !structural_problems(cert).is_empty() {
        return Ok(false);
    }
    let fresh = match certify(&cert.query, &cert.options) {
        Ok(c) => c,
        Err(_) => return Ok(false),
    };
    Ok(&fresh == cert)
}
