//! CSV and JSON forms of [`SweepTable`].
//!
//! CSV files start with `# key=value` metadata lines, then a header in the
//! fixed order of [`CSV_HEADER`]. Floats use 12 significant digits, which is
//! the precision the table itself is rounded to, so a re-read is exact.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::{SweepRow, SweepTable};
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 10] = [
    "ratio",
    "gd",
    "gd_converged",
    "gd_slope",
    "mean_e",
    "var_e",
    "nn_discord",
    "nn_mid",
    "nn_amid",
    "error",
];

fn fmt_f(x: f64) -> String {
    format!("{x:.11e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_f).unwrap_or_default()
}

impl SweepTable {
    pub fn to_csv(&self) -> Result<String> {
        let mut out = Vec::new();
        writeln!(out, "# n_sites={}", self.n_sites)?;
        writeln!(out, "# seed={}", self.seed)?;
        writeln!(out, "# grid={}", self.grid.replace('\n', " "))?;
        {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(CSV_HEADER)?;
            for r in &self.rows {
                w.write_record([
                    fmt_f(r.ratio),
                    fmt_opt(r.gd),
                    r.gd_converged.map(|b| b.to_string()).unwrap_or_default(),
                    fmt_opt(r.gd_slope),
                    fmt_opt(r.mean_e),
                    fmt_opt(r.var_e),
                    fmt_opt(r.nn_discord),
                    fmt_opt(r.nn_mid),
                    fmt_opt(r.nn_amid),
                    r.error.clone().unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        Ok(String::from_utf8(out).expect("csv output is utf-8"))
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut n_sites = None;
        let mut seed = None;
        let mut grid = String::new();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix('#') {
                let (k, v) = meta.trim().split_once('=').unwrap_or((meta.trim(), ""));
                match k {
                    "n_sites" => n_sites = v.parse().ok(),
                    "seed" => seed = v.parse().ok(),
                    "grid" => grid = v.to_string(),
                    _ => {}
                }
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let n_sites = n_sites.ok_or_else(|| Error::Config("csv is missing n_sites metadata".into()))?;
        let seed = seed.ok_or_else(|| Error::Config("csv is missing seed metadata".into()))?;

        let mut rd = csv::Reader::from_reader(body.as_bytes());
        let header: Vec<String> = rd.headers()?.iter().map(str::to_string).collect();
        if header != CSV_HEADER {
            return Err(Error::Config(format!("unexpected csv header {header:?}")));
        }
        let mut rows = Vec::new();
        for rec in rd.records() {
            let rec = rec?;
            let f = |i: usize| -> Result<Option<f64>> {
                let s = &rec[i];
                if s.is_empty() {
                    return Ok(None);
                }
                s.parse()
                    .map(Some)
                    .map_err(|_| Error::Config(format!("bad number {s:?} in column {}", CSV_HEADER[i])))
            };
            let gd_converged = match &rec[2] {
                "" => None,
                "true" => Some(true),
                "false" => Some(false),
                s => return Err(Error::Config(format!("bad flag {s:?}"))),
            };
            rows.push(SweepRow {
                ratio: f(0)?.ok_or_else(|| Error::Config("missing ratio".into()))?,
                gd: f(1)?,
                gd_converged,
                gd_slope: f(3)?,
                mean_e: f(4)?,
                var_e: f(5)?,
                nn_discord: f(6)?,
                nn_mid: f(7)?,
                nn_amid: f(8)?,
                error: Some(rec[9].to_string()).filter(|s| !s.is_empty()),
            });
        }
        Ok(SweepTable { n_sites, seed, grid, rows })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

pub fn read_csv(path: &Path) -> Result<SweepTable> {
    SweepTable::from_csv(&fs::read_to_string(path)?)
}

pub fn read_json(path: &Path) -> Result<SweepTable> {
    SweepTable::from_json(&fs::read_to_string(path)?)
}

/// Write through a sibling temporary file and rename, so readers never see a
/// partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::Config(format!("{} is not a file path", path.display())))?;
    let tmp = path.with_file_name(format!(".{}.{}.tmp", name.to_string_lossy(), std::process::id()));
    let res = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(contents)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if res.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    Ok(res?)
}
