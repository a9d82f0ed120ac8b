//! CSV and gnuplot emission for sweep rows.

use std::fs;
use std::io::Write;
use std::path::Path;

use relay_asym::SweepRow;

use crate::CliError;

pub const CSV_HEADER: &str = "gamma_db,p_asym,p_mc,ci_low,ci_high,p_oracle,d_finite";

/// Scientific notation with 9 significant digits and a signed two-digit
/// exponent, e.g. `9.51625820e-02`.
pub fn format_probability(p: f64) -> String {
    let s = format!("{p:.8e}");
    match s.split_once('e') {
        Some((mantissa, exp)) => {
            let (sign, digits) = match exp.strip_prefix('-') {
                Some(d) => ('-', d),
                None => ('+', exp),
            };
            format!("{mantissa}e{sign}{digits:0>2}")
        }
        None => s,
    }
}

fn cell(value: Option<f64>, fmt: fn(f64) -> String) -> String {
    value.map(fmt).unwrap_or_default()
}

fn shortest(x: f64) -> String {
    format!("{x:?}")
}

/// Renders rows as CSV text, sorted by ascending `gamma_db`.
pub fn render_csv(rows: &[SweepRow]) -> Result<String, CliError> {
    if rows.is_empty() {
        return Err(CliError::Usage("no rows to write".into()));
    }
    let mut sorted = rows.to_vec();
    sorted.sort_by(|a, b| a.gamma_bar_db.total_cmp(&b.gamma_bar_db));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in &sorted {
        let cells = [
            shortest(r.gamma_bar_db),
            format_probability(r.p_asym),
            cell(r.p_mc, format_probability),
            cell(r.ci_low, format_probability),
            cell(r.ci_high, format_probability),
            cell(r.p_oracle, format_probability),
            cell(r.d_finite, shortest),
        ];
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Writes the CSV to `path`, or to standard output when `path` is `None`.
pub fn emit_csv(rows: &[SweepRow], path: Option<&Path>) -> Result<(), CliError> {
    write_text(&render_csv(rows)?, path)
}

pub fn write_text(text: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// Parses CSV produced by [`render_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRow>, CliError> {
    let mut lines = text.lines();
    if lines.next() != Some(CSV_HEADER) {
        return Err(CliError::Schema("unexpected CSV header".into()));
    }
    let bad = |line: &str| CliError::Schema(format!("malformed CSV row `{line}`"));
    lines
        .map(|line| {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 7 {
                return Err(bad(line));
            }
            let opt = |s: &str| -> Result<Option<f64>, CliError> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| bad(line))
                }
            };
            Ok(SweepRow {
                gamma_bar_db: fields[0].parse().map_err(|_| bad(line))?,
                p_asym: fields[1].parse().map_err(|_| bad(line))?,
                p_mc: opt(fields[2])?,
                ci_low: opt(fields[3])?,
                ci_high: opt(fields[4])?,
                p_oracle: opt(fields[5])?,
                d_finite: opt(fields[6])?,
            })
        })
        .collect()
}

/// Writes one two-column `gamma_db value` file per available series into `dir`.
pub fn emit_gnuplot(rows: &[SweepRow], dir: &Path) -> Result<Vec<String>, CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let series: [(&str, fn(&SweepRow) -> Option<f64>); 4] = [
        ("p_asym", |r| Some(r.p_asym)),
        ("p_mc", |r| r.p_mc),
        ("p_oracle", |r| r.p_oracle),
        ("d_finite", |r| r.d_finite),
    ];
    let mut written = Vec::new();
    for (name, get) in series {
        let body: String = rows
            .iter()
            .filter_map(|r| get(r).map(|v| format!("{} {}\n", shortest(r.gamma_bar_db), format_probability(v))))
            .collect();
        if body.is_empty() {
            continue;
        }
        let file = format!("{name}.dat");
        write_text(&format!("# gamma_db {name}\n{body}"), Some(&dir.join(&file)))?;
        written.push(file);
    }
    Ok(written)
}
