//! CSV output with reproducible number formatting.
//!
//! Every numeric field is written with 17 significant digits, enough to
//! round-trip any f64 exactly, so identical runs produce byte-identical
//! files and downstream diffs mean something.

use std::io::{self, Write};

/// An f64 rendered with 17 significant digits. Non-finite values print as
/// `inf`, `-inf`, `NaN`; the group-velocity divergence sentinel relies on
/// this surviving the trip through a file.
pub fn field(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        format!("{x}")
    }
}

/// Header plus rows of f64 fields.
pub fn write_table<W: Write>(
    w: &mut W,
    header: &[&str],
    rows: impl Iterator<Item = Vec<f64>>,
) -> io::Result<()> {
    writeln!(w, "{}", header.join(","))?;
    for row in rows {
        debug_assert_eq!(row.len(), header.len());
        let line: Vec<String> = row.iter().map(|&x| field(x)).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    Ok(())
}
