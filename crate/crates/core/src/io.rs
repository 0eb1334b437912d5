//! CSV input/output in the small fixed formats used by the CLI.
//!
//! Input formats:
//! - sequence: header `value`, one non-negative number per row;
//! - profile: header `epsilon,count`, radii strictly decreasing;
//! - points: header `x1,..,xd`, one point per row;
//! - distance table: square numeric matrix, header optional.
//!
//! Every CSV written by the CLI starts with a comment line
//! `# config_hash=<16 hex digits>` (FNV-1a over the resolved configuration)
//! followed by a header row. Readers here skip `#` comment lines.

use crate::error::{Error, Result};

/// FNV-1a 64-bit hash, used to stamp outputs with the resolved configuration.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Renders a full CSV document: config-hash comment, header, rows.
pub fn render_csv(config: &str, header: &str, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("# config_hash={:016x}\n", fnv1a(config.as_bytes())));
    out.push_str(header);
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
}

fn parse_row(line: &str) -> Option<Vec<f64>> {
    line.split(',')
        .map(|f| f.trim().parse::<f64>().ok())
        .collect()
}

/// Reads a one-column sequence CSV (`value` header optional).
pub fn read_sequence(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (i, line) in data_lines(text).enumerate() {
        match parse_row(line) {
            Some(row) if row.len() == 1 => out.push(row[0]),
            Some(_) => {
                return Err(Error::validation(format!(
                    "sequence CSV: expected one column, line {}",
                    i + 1
                )))
            }
            None if i == 0 => {} // header row
            None => {
                return Err(Error::validation(format!(
                    "sequence CSV: unparseable line {}",
                    i + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::validation("sequence CSV: no data rows"));
    }
    Ok(out)
}

/// Reads a two-column `epsilon,count` profile CSV.
pub fn read_profile(text: &str) -> Result<Vec<(f64, u64)>> {
    let mut out = Vec::new();
    for (i, line) in data_lines(text).enumerate() {
        match parse_row(line) {
            Some(row) if row.len() == 2 => {
                let count = row[1];
                if count < 1.0 || count.fract() != 0.0 {
                    return Err(Error::validation(format!(
                        "profile CSV: count must be a positive integer, line {}",
                        i + 1
                    )));
                }
                out.push((row[0], count as u64));
            }
            Some(_) => {
                return Err(Error::validation(format!(
                    "profile CSV: expected epsilon,count, line {}",
                    i + 1
                )))
            }
            None if i == 0 => {}
            None => {
                return Err(Error::validation(format!(
                    "profile CSV: unparseable line {}",
                    i + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::validation("profile CSV: no data rows"));
    }
    Ok(out)
}

/// Reads a point-cloud CSV: one point per row, equal column counts.
pub fn read_points(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    for (i, line) in data_lines(text).enumerate() {
        match parse_row(line) {
            Some(row) => {
                if let Some(first) = out.first() {
                    if row.len() != first.len() {
                        return Err(Error::validation(format!(
                            "points CSV: inconsistent column count at line {}",
                            i + 1
                        )));
                    }
                }
                out.push(row);
            }
            None if i == 0 => {}
            None => {
                return Err(Error::validation(format!(
                    "points CSV: unparseable line {}",
                    i + 1
                )))
            }
        }
    }
    if out.is_empty() {
        return Err(Error::validation("points CSV: no data rows"));
    }
    Ok(out)
}

/// Reads a square distance-table CSV (header optional).
pub fn read_square_table(text: &str) -> Result<Vec<Vec<f64>>> {
    let rows = read_points(text)?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::validation(format!(
            "distance table must be square, got {n} rows of width {}",
            rows[0].len()
        )));
    }
    Ok(rows)
}

/// Formats a float as its shortest exact round-trip decimal.
pub fn fmt_f64(x: f64) -> String {
    format!("{x}")
}
