//! Deterministic parallel sweeps over grids of moduli spaces.
//!
//! The grid is expanded into an ordered list of queries; a bounded rayon
//! pool certifies them and the results are collected in input order, so the
//! summary is byte-identical for every worker count.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::str::FromStr;

use hkcert::certify::{certify, non_empty_components, Certificate, CertifyOptions, Family, ModuliQuery, ReductionKind};
use rayon::prelude::*;

use crate::output::{write_atomic, CSV_VERSION};

/// Largest number of grid cells accepted by one sweep.
pub const MAX_CELLS: usize = 1 << 22;

/// An inclusive range of values, written `V` or `A..B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValueRange {
    pub lo: u64,
    pub hi: u64,
}

impl ValueRange {
    pub fn values(&self) -> Vec<u64> {
        (self.lo..=self.hi).collect()
    }
}

impl FromStr for ValueRange {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |x: &str| x.trim().parse::<u64>().map_err(|e| format!("`{x}`: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(Self { lo, hi })
    }
}

/// A validated sweep grid.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub family: Family,
    pub n: Vec<Option<u64>>,
    pub gamma: Vec<u64>,
    pub d: Vec<u64>,
    pub workers: usize,
    pub options: CertifyOptions,
    pub certs_dir: Option<PathBuf>,
}

/// One summary row.
#[derive(Debug, Clone)]
struct Row {
    query: ModuliQuery,
    result: Result<Certificate, String>,
}

/// Expands the grid into queries in (n, γ, d, a) order. Cells whose γ does not
/// divide 2(n − 1) are not moduli spaces and are skipped; empty cells yield a
/// single query without a component label.
pub fn expand(spec: &SweepSpec) -> Vec<ModuliQuery> {
    let mut out = Vec::new();
    for &n in &spec.n {
        for &gamma in &spec.gamma {
            if gamma == 0 {
                continue;
            }
            if let Some(n) = n {
                if n < 2 || (2 * (n - 1)) % gamma != 0 {
                    continue;
                }
            }
            for &d in &spec.d {
                if d == 0 {
                    continue;
                }
                let base = ModuliQuery {
                    family: spec.family,
                    n,
                    d,
                    gamma,
                    a: None,
                };
                let comps = non_empty_components(spec.family, n, d, gamma);
                if comps.is_empty() {
                    out.push(base);
                } else {
                    out.extend(comps.labels.iter().map(|&a| ModuliQuery { a: Some(a), ..base.clone() }));
                }
            }
        }
    }
    out
}

fn cert_file_name(q: &ModuliQuery) -> String {
    let a = q.a.map_or("none".to_string(), |a| a.to_string());
    match q.family {
        Family::K3n => format!("k3n_n{}_g{}_d{}_a{a}.json", q.n.unwrap_or(0), q.gamma, q.d),
        Family::Og10 => format!("og10_g{}_d{}_a{a}.json", q.gamma, q.d),
    }
}

fn step_name(step: &ReductionKind) -> String {
    match step {
        ReductionKind::StrangeDuality => "strange_duality".into(),
        ReductionKind::DivideDBySquare { r } => format!("divide_d_by_square(r={r})"),
        ReductionKind::FourPowerStrip { e } => format!("four_power_strip(e={e})"),
        ReductionKind::DivideNBySquare { r } => format!("divide_n_by_square(r={r})"),
        ReductionKind::Gamma2ToN2 { k } => format!("gamma2_to_n2(k={k})"),
    }
}

fn certified(c: &Certificate) -> bool {
    c.verdict.rank() >= 4
}

/// Runs the sweep and returns the summary CSV.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<u8>, String> {
    if spec.workers == 0 {
        return Err("worker count must be at least 1".into());
    }
    let cells = spec.n.len().saturating_mul(spec.gamma.len()).saturating_mul(spec.d.len());
    if cells > MAX_CELLS {
        return Err(format!("{cells} grid cells exceed the limit of {MAX_CELLS}"));
    }
    if let Some(dir) = &spec.certs_dir {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let queries = expand(spec);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.workers)
        .build()
        .map_err(|e| e.to_string())?;
    let options = spec.options;
    let rows: Vec<Row> = pool.install(|| {
        queries
            .par_iter()
            .map(|q| {
                let result = catch_unwind(AssertUnwindSafe(|| certify(q, &options)))
                    .map_err(|p| {
                        p.downcast_ref::<String>()
                            .cloned()
                            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                            .unwrap_or_else(|| "panic".into())
                    })
                    .and_then(|r| r.map_err(|e| e.to_string()));
                if let (Some(dir), Ok(cert)) = (&spec.certs_dir, &result) {
                    let path = dir.join(cert_file_name(q));
                    if let Err(e) = write_atomic(&path, format!("{}\n", cert.to_json()).as_bytes()) {
                        return Row {
                            query: q.clone(),
                            result: Err(format!("writing {}: {e}", path.display())),
                        };
                    }
                }
                Row {
                    query: q.clone(),
                    result,
                }
            })
            .collect()
    });
    render(&rows).map_err(|e| e.to_string())
}

fn render(rows: &[Row]) -> Result<Vec<u8>, csv::Error> {
    // First certified d per component (family, n, γ, a).
    let mut first: BTreeMap<(Option<u64>, u64, Option<u64>), u64> = BTreeMap::new();
    for r in rows {
        if let Ok(c) = &r.result {
            if certified(c) {
                let key = (r.query.n, r.query.gamma, r.query.a);
                let e = first.entry(key).or_insert(r.query.d);
                *e = (*e).min(r.query.d);
            }
        }
    }
    let mut buf = format!("# hkcert sweep v{CSV_VERSION}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record([
            "family",
            "n",
            "gamma",
            "a",
            "d",
            "two_d",
            "t",
            "verdict",
            "citation",
            "construction",
            "integral",
            "fractional",
            "total",
            "reductions",
            "status",
            "first_certified_d",
        ])?;
        for r in rows {
            let q = &r.query;
            let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
            let first_d = opt(first.get(&(q.n, q.gamma, q.a)).copied());
            let mut rec = vec![
                q.family.to_string(),
                opt(q.n),
                q.gamma.to_string(),
                opt(q.a),
                q.d.to_string(),
                (2 * q.d as u128).to_string(),
            ];
            match &r.result {
                Ok(c) => {
                    let citation = match &c.verdict {
                        hkcert::certify::Verdict::GeneralTypeLiterature { citation } => citation.clone(),
                        _ => String::new(),
                    };
                    let count = c.root_count;
                    let chain: Vec<String> = c.reduction_chain.iter().map(|s| step_name(&s.step)).collect();
                    rec.extend([
                        c.t.clone().unwrap_or_default(),
                        c.verdict.name().to_string(),
                        citation,
                        c.embedding.as_ref().map(|e| e.construction_tag.clone()).unwrap_or_default(),
                        count.map(|c| c.integral.to_string()).unwrap_or_default(),
                        count.map(|c| c.fractional.to_string()).unwrap_or_default(),
                        count.map(|c| c.total().to_string()).unwrap_or_default(),
                        chain.join(">"),
                        "ok".into(),
                    ]);
                }
                Err(e) => {
                    rec.extend(std::iter::repeat_n(String::new(), 8));
                    rec.push(format!("error: {e}"));
                }
            }
            rec.push(first_d);
            w.write_record(&rec)?;
        }
        w.flush()?;
    }
    Ok(buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_parse() {
        assert_eq!("5".parse::<ValueRange>().unwrap(), ValueRange { lo: 5, hi: 5 });
        assert_eq!("2..9".parse::<ValueRange>().unwrap(), ValueRange { lo: 2, hi: 9 });
        assert_eq!("2..=9".parse::<ValueRange>().unwrap(), ValueRange { lo: 2, hi: 9 });
        assert!("9..2".parse::<ValueRange>().is_err());
        assert!("x".parse::<ValueRange>().is_err());
    }

    #[test]
    fn expansion_skips_invalid_cells_and_splits_components() {
        let spec = SweepSpec {
            family: Family::K3n,
            n: vec![Some(26)],
            gamma: vec![4, 5],
            d: vec![150, 151],
            workers: 1,
            options: CertifyOptions::default(),
            certs_dir: None,
        };
        let qs = expand(&spec);
        // γ = 4 does not divide 50; d = 150 has components 1 and 2; d = 151 is empty.
        assert_eq!(qs.len(), 3);
        assert_eq!(qs[0].a, Some(1));
        assert_eq!(qs[1].a, Some(2));
        assert_eq!(qs[2].a, None);
    }
}
