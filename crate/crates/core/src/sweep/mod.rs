//! Sweeps over `B/J`, peak localization and finite-size analysis.

mod analysis;
mod io;

pub use analysis::{
    fit_scaling, normalized_variance, parametric_trace, peak_drift, DriftReport, ParametricTrace, ScalingFit,
};
pub use io::{read_csv, read_json, write_atomic, CSV_HEADER};

use serde::{Deserialize, Serialize};

use crate::entanglement::entanglement_stats;
use crate::error::{Error, Result};
use crate::exec::{map_indexed, ExecMode};
use crate::global_discord::{global_discord, OptimizerConfig};
use crate::hamiltonian::{ground_state, RingConfig};
use crate::optimize::golden_section_max;
use crate::two_spin::pair_measures;

/// Which measures a sweep evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeasureSet {
    pub global_discord: bool,
    pub entanglement: bool,
    pub two_spin: bool,
}

impl MeasureSet {
    pub const ALL: MeasureSet = MeasureSet { global_discord: true, entanglement: true, two_spin: true };
    pub const GD_ONLY: MeasureSet = MeasureSet { global_discord: true, entanglement: false, two_spin: false };
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub n_sites: usize,
    pub ratios: Vec<f64>,
    pub measures: MeasureSet,
    pub optimizer: OptimizerConfig,
    pub exec: ExecMode,
    pub grid_label: String,
}

impl SweepConfig {
    pub fn new(n_sites: usize, ratios: Vec<f64>, measures: MeasureSet) -> Self {
        Self {
            n_sites,
            grid_label: format!("{} explicit points", ratios.len()),
            ratios,
            measures,
            optimizer: OptimizerConfig::default(),
            exec: ExecMode::Parallel,
        }
    }
}

/// `count` log-spaced points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count).map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp()).collect()
}

pub fn linear_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count).map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64).collect()
}

/// 100 log-spaced points on `[10⁻², 6]` plus `B/J = 1`.
pub fn default_grid() -> Vec<f64> {
    let mut g = log_grid(1e-2, 6.0, 100);
    g.push(1.0);
    sort_dedup(g)
}

/// Parse a grid description: `default`, `log:LO:HI:COUNT`, `lin:LO:HI:COUNT`
/// or a comma-separated list of ratios.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse ratio grid {spec:?}"));
    let spec = spec.trim();
    if spec == "default" {
        return Ok(default_grid());
    }
    let grid = if let Some((kind, rest)) = spec.split_once(':') {
        let parts: Vec<&str> = rest.split(':').collect();
        let [lo, hi, count] = parts[..] else { return Err(bad()) };
        let lo: f64 = lo.parse().map_err(|_| bad())?;
        let hi: f64 = hi.parse().map_err(|_| bad())?;
        let count: usize = count.parse().map_err(|_| bad())?;
        if count == 0 || !(lo <= hi) {
            return Err(bad());
        }
        match kind {
            "log" if lo > 0.0 => log_grid(lo, hi, count),
            "lin" => linear_grid(lo, hi, count),
            _ => return Err(bad()),
        }
    } else {
        spec.split(',').map(|t| t.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if grid.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(bad());
    }
    Ok(sort_dedup(grid))
}

pub(crate) fn sort_dedup(mut g: Vec<f64>) -> Vec<f64> {
    g.sort_by(f64::total_cmp);
    g.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * b.abs().max(1.0));
    g
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub ratio: f64,
    pub gd: Option<f64>,
    pub gd_converged: Option<bool>,
    /// Forward difference of `gd` to the next row.
    pub gd_slope: Option<f64>,
    pub mean_e: Option<f64>,
    pub var_e: Option<f64>,
    pub nn_discord: Option<f64>,
    pub nn_mid: Option<f64>,
    pub nn_amid: Option<f64>,
    pub error: Option<String>,
}

impl SweepRow {
    fn empty(ratio: f64) -> Self {
        Self {
            ratio,
            gd: None,
            gd_converged: None,
            gd_slope: None,
            mean_e: None,
            var_e: None,
            nn_discord: None,
            nn_mid: None,
            nn_amid: None,
            error: None,
        }
    }

    pub fn get(&self, column: Column) -> Option<f64> {
        match column {
            Column::Gd => self.gd,
            Column::MeanE => self.mean_e,
            Column::VarE => self.var_e,
            Column::NnDiscord => self.nn_discord,
            Column::NnMid => self.nn_mid,
            Column::NnAmid => self.nn_amid,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub n_sites: usize,
    pub seed: u64,
    pub grid: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn ratios(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.ratio).collect()
    }

    pub fn column(&self, column: Column) -> Vec<Option<f64>> {
        self.rows.iter().map(|r| r.get(column)).collect()
    }

    /// Rows with `lo ≤ B/J ≤ hi`.
    pub fn restricted(&self, lo: f64, hi: f64) -> SweepTable {
        SweepTable {
            rows: self.rows.iter().filter(|r| r.ratio >= lo && r.ratio <= hi).cloned().collect(),
            grid: format!("{} restricted to [{lo}, {hi}]", self.grid),
            ..self.clone()
        }
    }

    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.error.is_none() && r.gd_converged.unwrap_or(true))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Column {
    Gd,
    MeanE,
    VarE,
    NnDiscord,
    NnMid,
    NnAmid,
}

impl std::str::FromStr for Column {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "gd" => Column::Gd,
            "mean_e" => Column::MeanE,
            "var_e" => Column::VarE,
            "nn_discord" => Column::NnDiscord,
            "nn_mid" => Column::NnMid,
            "nn_amid" => Column::NnAmid,
            other => return Err(Error::Config(format!("unknown column {other}"))),
        })
    }
}

/// Round to 12 significant digits so that the CSV form is exact.
pub(crate) fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Evaluate one grid point.
pub fn evaluate_point(n_sites: usize, ratio: f64, measures: MeasureSet, opt: &OptimizerConfig) -> SweepRow {
    let mut row = SweepRow::empty(ratio);
    if let Err(e) = fill_row(&mut row, n_sites, ratio, measures, opt) {
        row.error = Some(e.to_string());
    }
    row
}

fn fill_row(row: &mut SweepRow, n: usize, ratio: f64, measures: MeasureSet, opt: &OptimizerConfig) -> Result<()> {
    let gs = ground_state(&RingConfig::from_ratio(n, ratio)?)?.state;
    if measures.global_discord {
        let r = global_discord(&gs, opt)?;
        row.gd = Some(r.value);
        row.gd_converged = Some(r.converged);
    }
    if measures.entanglement {
        let st = entanglement_stats(&gs, opt.exec)?;
        row.mean_e = Some(st.mean);
        row.var_e = Some(st.variance);
    }
    if measures.two_spin {
        let pm = pair_measures(&gs, 0, 1)?;
        row.nn_discord = Some(pm.discord);
        row.nn_mid = Some(pm.mid);
        row.nn_amid = Some(pm.amid);
    }
    Ok(())
}

/// One row per grid point, evaluated independently (in parallel when
/// enabled) and ordered by ratio. A failing point records its error in the
/// row and the sweep continues.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepTable> {
    if cfg.ratios.is_empty() {
        return Err(Error::Config("empty ratio grid".into()));
    }
    RingConfig::from_ratio(cfg.n_sites, 1.0)?;
    if cfg.ratios.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return Err(Error::Config("ratios must be finite and non-negative".into()));
    }
    let ratios = sort_dedup(cfg.ratios.clone());
    // the optimizer's own restarts run sequentially inside each grid point
    let inner = OptimizerConfig { exec: ExecMode::Sequential, ..cfg.optimizer };
    let mut rows = map_indexed(cfg.exec, ratios.len(), |i| {
        evaluate_point(cfg.n_sites, ratios[i], cfg.measures, &inner)
    });
    for i in 0..rows.len().saturating_sub(1) {
        if let (Some(a), Some(b)) = (rows[i].gd, rows[i + 1].gd) {
            rows[i].gd_slope = Some((b - a) / (rows[i + 1].ratio - rows[i].ratio));
        }
    }
    for r in &mut rows {
        for v in [&mut r.ratio] {
            *v = round_sig(*v);
        }
        for v in [
            &mut r.gd,
            &mut r.gd_slope,
            &mut r.mean_e,
            &mut r.var_e,
            &mut r.nn_discord,
            &mut r.nn_mid,
            &mut r.nn_amid,
        ] {
            *v = v.map(round_sig);
        }
    }
    Ok(SweepTable { n_sites: cfg.n_sites, seed: cfg.optimizer.seed, grid: cfg.grid_label.clone(), rows })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub ratio: f64,
    pub value: f64,
    /// Grid maximum sits on the first or last row; no refinement done.
    pub boundary: bool,
    pub refined: bool,
}

/// Tolerance of the golden-section refinement, in `B/J`.
pub const PEAK_RATIO_TOL: f64 = 1e-4;

/// Grid argmax of `column`, without refinement.
pub fn grid_peak(table: &SweepTable, column: Column) -> Result<(usize, Peak)> {
    let (idx, value) = table
        .rows
        .iter()
        .enumerate()
        .filter_map(|(i, r)| r.get(column).filter(|v| v.is_finite()).map(|v| (i, v)))
        .max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0)))
        .ok_or_else(|| Error::Domain(format!("column {column:?} has no values")))?;
    let boundary = idx == 0 || idx + 1 == table.rows.len();
    Ok((idx, Peak { ratio: table.rows[idx].ratio, value, boundary, refined: false }))
}

/// Locate the maximum of `column`, then refine by golden-section search
/// between the neighbouring grid points, re-evaluating the measure with
/// `evaluate`.
pub fn find_peak<F>(table: &SweepTable, column: Column, mut evaluate: F) -> Result<Peak>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (idx, grid) = grid_peak(table, column)?;
    if grid.boundary {
        return Ok(grid);
    }
    let lo = table.rows[idx - 1].ratio;
    let hi = table.rows[idx + 1].ratio;
    let mut failure = None;
    let (r, v) = golden_section_max(
        |x| match evaluate(x) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                f64::NEG_INFINITY
            }
        },
        lo,
        hi,
        PEAK_RATIO_TOL,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(if v >= grid.value {
        Peak { ratio: r, value: v, boundary: false, refined: true }
    } else {
        Peak { refined: true, ..grid }
    })
}

/// [`find_peak`] re-evaluating the measure from scratch with the sweep's
/// own settings.
pub fn find_peak_for(table: &SweepTable, column: Column, cfg: &SweepConfig) -> Result<Peak> {
    let measures = match column {
        Column::Gd => MeasureSet::GD_ONLY,
        Column::MeanE | Column::VarE => MeasureSet { global_discord: false, entanglement: true, two_spin: false },
        _ => MeasureSet { global_discord: false, entanglement: false, two_spin: true },
    };
    find_peak(table, column, |ratio| {
        let row = evaluate_point(table.n_sites, ratio, measures, &cfg.optimizer);
        match (row.get(column), row.error) {
            (Some(v), _) => Ok(v),
            (None, Some(e)) => Err(Error::Domain(e)),
            (None, None) => Err(Error::Domain("measure not evaluated".into())),
        }
    })
}
