//! Atomic file output and CSV rendering.

use std::io::{self, Write};
use std::path::Path;

use hkcert::tables::TableRow;

/// Version of the CSV layouts (first header comment line).
pub const CSV_VERSION: u32 = 1;

/// Writes `bytes` to `path` through a temporary file in the same directory
/// and an atomic rename, so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Renders table rows as CSV with a versioned header comment.
pub fn write_table_csv(rows: &[TableRow]) -> Result<Vec<u8>, csv::Error> {
    let mut buf = format!("# hkcert table v{CSV_VERSION}\n").into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record([
            "family",
            "t",
            "two_d",
            "status",
            "tag",
            "parameters",
            "integral",
            "fractional",
            "total",
            "primitive",
            "expected_integral",
            "expected_fractional",
            "match_appendix",
            "in_window",
            "note",
        ])?;
        for r in rows {
            let family = match r.family {
                hkcert::tables::TableFamily::K32 => "k32",
                hkcert::tables::TableFamily::Og10 => "og10",
            };
            let status = match r.status {
                hkcert::tables::RowStatus::Constructed => "constructed",
                hkcert::tables::RowStatus::Literature => "literature",
                hkcert::tables::RowStatus::Open => "open",
                hkcert::tables::RowStatus::Failed => "failed",
            };
            w.write_record([
                family.to_string(),
                r.t.to_string(),
                r.two_d.to_string(),
                status.to_string(),
                r.tag.clone(),
                r.parameters.clone(),
                opt(r.counts.map(|c| c.integral)),
                opt(r.counts.map(|c| c.fractional)),
                opt(r.total()),
                opt(r.primitive),
                opt(r.expected.map(|c| c.integral)),
                opt(r.expected.map(|c| c.fractional)),
                opt(r.matches_appendix()),
                opt(r.in_window()),
                r.note.clone(),
            ])?;
        }
        w.flush()?;
    }
    Ok(buf)
}
