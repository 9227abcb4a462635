//! Python bindings for hkcert.
//!
//! Exposes certification, certificate verification, the component and
//! strange-duality bookkeeping, the E8 root oracle and the number-theoretic
//! helpers. Errors surface as `ValueError`.

use hkcert::certify::{self, CertifyOptions, Family, ModuliQuery};
use hkcert::e8_roots::{self, E8Vector};
use hkcert::{diophantine, lattice_core, squares, tables};
use num_bigint::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn family_of(name: &str) -> PyResult<Family> {
    name.parse().map_err(value_err)
}

fn vectors(doubled: Vec<[i64; 8]>) -> PyResult<Vec<E8Vector>> {
    doubled
        .into_iter()
        .map(|c| E8Vector::from_doubled(c).map_err(value_err))
        .collect()
}

/// A certificate: the verdict for one component with its supporting data.
#[pyclass(name = "Certificate", module = "hkcert_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyCertificate {
    inner: certify::Certificate,
}

#[pymethods]
impl PyCertificate {
    /// Parses a certificate from its JSON form.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        serde_json::from_str(text)
            .map(|inner| Self { inner })
            .map_err(value_err)
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// The verdict name, e.g. "GeneralType".
    #[getter]
    fn verdict(&self) -> &'static str {
        self.inner.verdict.name()
    }

    #[getter]
    fn exit_code(&self) -> i32 {
        self.inner.verdict.exit_code()
    }

    #[getter]
    fn t(&self) -> Option<String> {
        self.inner.t.clone()
    }

    #[getter]
    fn a(&self) -> Option<u64> {
        self.inner.query.a
    }

    #[getter]
    fn components(&self) -> Vec<u64> {
        self.inner.components.clone()
    }

    /// (integral, fractional) orthogonal root counts, if an embedding exists.
    #[getter]
    fn root_count(&self) -> Option<(u32, u32)> {
        self.inner.root_count.map(|c| (c.integral, c.fractional))
    }

    #[getter]
    fn construction_tag(&self) -> Option<String> {
        self.inner.embedding.as_ref().map(|e| e.construction_tag.clone())
    }

    /// Names of the reduction steps, in order.
    #[getter]
    fn reductions(&self) -> Vec<String> {
        self.inner
            .reduction_chain
            .iter()
            .map(|r| r.check.name.clone())
            .collect()
    }

    /// Images of the embedding in doubled coordinates.
    #[getter]
    fn images(&self) -> Vec<[i64; 8]> {
        self.inner.embedding.as_ref().map(|e| e.images.clone()).unwrap_or_default()
    }

    #[getter]
    fn annotations(&self) -> Vec<String> {
        self.inner.annotations.clone()
    }

    /// Recomputes every claim and compares with a fresh certification.
    fn verify(&self) -> PyResult<bool> {
        certify::verify_certificate(&self.inner).map_err(value_err)
    }

    fn __repr__(&self) -> String {
        format!("Certificate({}: {})", self.inner.query, self.inner.verdict.name())
    }
}

fn query(family: &str, d: u64, gamma: u64, n: Option<u64>, a: Option<u64>) -> PyResult<ModuliQuery> {
    Ok(ModuliQuery {
        family: family_of(family)?,
        n,
        d,
        gamma,
        a,
    })
}

/// Certifies one component ("k3n" or "og10").
#[pyfunction]
#[pyo3(signature = (family, d, gamma, n=None, a=None, exhaustive=false, budget=certify::DEFAULT_BUDGET))]
fn certify_query(
    family: &str,
    d: u64,
    gamma: u64,
    n: Option<u64>,
    a: Option<u64>,
    exhaustive: bool,
    budget: u64,
) -> PyResult<PyCertificate> {
    let q = query(family, d, gamma, n, a)?;
    certify::certify(&q, &CertifyOptions { exhaustive, budget })
        .map(|inner| PyCertificate { inner })
        .map_err(value_err)
}

/// Certifies every non-empty component.
#[pyfunction]
#[pyo3(signature = (family, d, gamma, n=None, exhaustive=false, budget=certify::DEFAULT_BUDGET))]
fn certify_all(
    family: &str,
    d: u64,
    gamma: u64,
    n: Option<u64>,
    exhaustive: bool,
    budget: u64,
) -> PyResult<Vec<PyCertificate>> {
    let q = query(family, d, gamma, n, None)?;
    certify::certify_all(&q, &CertifyOptions { exhaustive, budget })
        .map(|v| v.into_iter().map(|inner| PyCertificate { inner }).collect())
        .map_err(value_err)
}

/// Verifies a certificate given as JSON.
#[pyfunction]
fn verify_certificate_json(text: &str) -> PyResult<bool> {
    let cert: certify::Certificate = serde_json::from_str(text).map_err(value_err)?;
    certify::verify_certificate(&cert).map_err(value_err)
}

/// Non-empty component labels.
#[pyfunction]
#[pyo3(signature = (family, d, gamma, n=None))]
fn non_empty_components(family: &str, d: u64, gamma: u64, n: Option<u64>) -> PyResult<Vec<u64>> {
    Ok(certify::non_empty_components(family_of(family)?, n, d, gamma).labels)
}

/// t = (d + (n−1)a²)/γ².
#[pyfunction]
fn t_of(n: u64, d: u64, gamma: u64, a: u64) -> PyResult<u64> {
    certify::t_of(n, d, gamma, a).map_err(value_err)
}

/// (n, d, γ, a) ↦ (d + 1, n − 1, γ, a').
#[pyfunction]
fn strange_duality(n: u64, d: u64, gamma: u64, a: u64) -> PyResult<(u64, u64, u64, u64)> {
    certify::strange_duality(n, d, gamma, a).map_err(value_err)
}

/// True iff the explicit strange-duality basis map is an isometry.
#[pyfunction]
fn duality_preserves_gram(n: u64, d: u64, gamma: u64, a: u64) -> PyResult<bool> {
    certify::duality_isometry(n, d, gamma, a)
        .map(|iso| iso.preserves_gram())
        .map_err(value_err)
}

/// The Gram matrix Q_h of the orthogonal complement for K3^[n].
#[pyfunction]
fn gram_qh_k3n(n: u64, gamma: u64, a: u64, t: BigInt) -> PyResult<Vec<Vec<BigInt>>> {
    lattice_core::gram_qh_k3n(n, gamma, a, &t)
        .map(|g| g.entries().clone())
        .map_err(value_err)
}

/// (integral, fractional) counts of E8 roots orthogonal to the given vectors
/// (doubled coordinates).
#[pyfunction]
fn roots_orthogonal_to(doubled: Vec<[i64; 8]>) -> PyResult<(u32, u32)> {
    let c = e8_roots::roots_orthogonal_to(&vectors(doubled)?).count;
    Ok((c.integral, c.fractional))
}

/// Whether the span of the vectors (doubled coordinates) is primitive in E8.
#[pyfunction]
fn is_primitive_embedding(doubled: Vec<[i64; 8]>) -> PyResult<bool> {
    e8_roots::is_primitive_embedding(&vectors(doubled)?).map_err(value_err)
}

/// Minimal-norm solution of α·x = K under the parity constraint implied by K
/// (or "all_odd"/"one_even"); returns (x, norm).
#[pyfunction]
#[pyo3(signature = (alphas, k, mode=None))]
fn solve_parity(alphas: [i64; 3], k: i64, mode: Option<&str>) -> PyResult<([i64; 3], i128)> {
    let mode = match mode {
        None => diophantine::ParityMode::for_rhs(k),
        Some("all_odd") => diophantine::ParityMode::AllOdd,
        Some("one_even") => diophantine::ParityMode::OneEven,
        Some(other) => return Err(value_err(format!("unknown parity mode {other}"))),
    };
    diophantine::solve_parity(alphas, k, mode)
        .map(|s| (s.xs, s.norm))
        .map_err(value_err)
}

/// Three pairwise distinct squares with gcd 1 summing to n, if any.
#[pyfunction]
fn three_squares_distinct_coprime(n: u64) -> PyResult<Option<Vec<u64>>> {
    squares::three_squares_distinct_coprime(n)
        .map(|d| d.map(|d| d.parts))
        .map_err(value_err)
}

/// Three positive squares with gcd 1 summing to n, if any.
#[pyfunction]
fn three_squares_positive_coprime(n: u64) -> PyResult<Option<Vec<u64>>> {
    squares::three_squares_positive_coprime(n)
        .map(|d| d.map(|d| d.parts))
        .map_err(value_err)
}

/// Table rows as (t, status, tag, integral, fractional, primitive, matches).
type Row = (u64, String, String, Option<u32>, Option<u32>, Option<bool>, Option<bool>);

fn rows(rows: Vec<tables::TableRow>) -> Vec<Row> {
    rows.into_iter()
        .map(|r| {
            let status = format!("{:?}", r.status).to_lowercase();
            let matches = r.matches_appendix();
            (
                r.t,
                status,
                r.tag,
                r.counts.map(|c| c.integral),
                r.counts.map(|c| c.fractional),
                r.primitive,
                matches,
            )
        })
        .collect()
}

/// K3^[2] (divisibility 2) table rows.
#[pyfunction]
fn k32_table(t_min: u64, t_max: u64) -> PyResult<Vec<Row>> {
    tables::k32_table(t_min, t_max).map(rows).map_err(value_err)
}

/// OG10 (divisibility 3) table rows.
#[pyfunction]
fn og10_table(t_min: u64, t_max: u64) -> PyResult<Vec<Row>> {
    tables::og10_table(t_min, t_max).map(rows).map_err(value_err)
}

#[pymodule]
fn hkcert_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCertificate>()?;
    m.add_function(wrap_pyfunction!(certify_query, m)?)?;
    m.add_function(wrap_pyfunction!(certify_all, m)?)?;
    m.add_function(wrap_pyfunction!(verify_certificate_json, m)?)?;
    m.add_function(wrap_pyfunction!(non_empty_components, m)?)?;
    m.add_function(wrap_pyfunction!(t_of, m)?)?;
    m.add_function(wrap_pyfunction!(strange_duality, m)?)?;
    m.add_function(wrap_pyfunction!(duality_preserves_gram, m)?)?;
    m.add_function(wrap_pyfunction!(gram_qh_k3n, m)?)?;
    m.add_function(wrap_pyfunction!(roots_orthogonal_to, m)?)?;
    m.add_function(wrap_pyfunction!(is_primitive_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(solve_parity, m)?)?;
    m.add_function(wrap_pyfunction!(three_squares_distinct_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(three_squares_positive_coprime, m)?)?;
    m.add_function(wrap_pyfunction!(k32_table, m)?)?;
    m.add_function(wrap_pyfunction!(og10_table, m)?)?;
    m.add("SCHEMA_VERSION", certify::SCHEMA_VERSION)?;
    m.add("DEFAULT_BUDGET", certify::DEFAULT_BUDGET)?;
    Ok(())
}
