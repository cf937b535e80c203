//! Flat projections of reports.

use std::io::Write;

use crate::recipe::Report;

/// One row per check: id, kind, status, expected, met, runtime_ms, summary.
pub fn write_csv<W: Write>(report: &Report, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "id",
        "kind",
        "status",
        "expected",
        "met",
        "runtime_ms",
        "summary",
    ])?;
    for c in &report.checks {
        w.write_record([
            c.id.as_str(),
            c.kind.as_str(),
            &format!("{:?}", c.status).to_lowercase(),
            &format!("{:?}", c.expected.outcome).to_lowercase(),
            &c.met.to_string(),
            &c.runtime_ms.to_string(),
            c.summary.as_str(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
