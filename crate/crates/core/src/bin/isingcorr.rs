use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use isingcorr::entanglement::entanglement_stats;
use isingcorr::exec::init_threads;
use isingcorr::global_discord::global_discord;
use isingcorr::hamiltonian::ground_state;
use isingcorr::states;
use isingcorr::sweep::{
    find_peak_for, fit_scaling, parse_grid, peak_drift, read_csv, read_json, write_atomic, Column, MeasureSet,
    SweepConfig, SweepTable,
};
use isingcorr::two_spin::pair_measures;
use isingcorr::{ExecMode, OptimizerConfig, PureState, RingConfig};

#[derive(Parser, Debug, Serialize)]
#[command(name = "isingcorr", version, about = "Quantum correlations in transverse-field Ising rings")]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "ISINGCORR_THREADS")]
    threads: Option<usize>,

    /// Run everything on the calling thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
enum Command {
    /// Ground-state energy, parity and leading amplitudes.
    GroundState(RingArgs),
    /// Two-spin, global or entanglement measures of one state, as JSON.
    Measures(MeasuresArgs),
    /// Evaluate measures over a grid of B/J and write a table.
    Sweep(SweepArgs),
    /// Constrained linear fit of max GD against N.
    Fit(FitArgs),
}

#[derive(Args, Debug, Serialize)]
struct RingArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    j: f64,
    #[arg(long, default_value_t = 0.0)]
    b: f64,
}

#[derive(Args, Debug, Serialize, Clone, Copy)]
struct OptArgs {
    /// Optimizer starts (default max(16, 4N)).
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long, default_value_t = 2012)]
    seed: u64,
    /// One measurement basis shared by every site.
    #[arg(long)]
    uniform_angles: bool,
}

impl OptArgs {
    fn config(self, exec: ExecMode) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            seed: self.seed,
            uniform_angles: self.uniform_angles,
            exec,
            ..Default::default()
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Pair,
    Global,
    Estats,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Input {
    /// Ground state of the ring.
    Ring,
    Ghz,
    /// Random product state drawn from --seed.
    Product,
}

#[derive(Args, Debug, Serialize)]
struct MeasuresArgs {
    #[command(flatten)]
    ring: RingArgs,
    #[arg(long, value_enum)]
    kind: Kind,
    /// Sites of the pair, numbered from 1.
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2])]
    pair: Vec<usize>,
    #[arg(long, value_enum, default_value_t = Input::Ring)]
    input: Input,
    #[command(flatten)]
    opt: OptArgs,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
struct SweepArgs {
    #[arg(long)]
    n: usize,
    /// `default`, `log:LO:HI:COUNT`, `lin:LO:HI:COUNT` or `r1,r2,...`.
    #[arg(long, default_value = "default")]
    ratio_grid: String,
    /// Any of gd, estats, pair.
    #[arg(long, value_delimiter = ',', default_value = "gd,estats,pair")]
    measures: Vec<String>,
    #[command(flatten)]
    opt: OptArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Refine the peak of these columns (gd, var_e, ...) and report it.
    #[arg(long, value_delimiter = ',')]
    peak: Vec<String>,
}

#[derive(Args, Debug, Serialize)]
struct FitArgs {
    /// `N:maxGD` pairs, e.g. `3:1.8296,4:2.4360`.
    #[arg(long, value_delimiter = ',')]
    points: Vec<String>,
    /// Sweep tables whose GD grid maxima join the fit.
    #[arg(long, value_delimiter = ',')]
    tables: Vec<PathBuf>,
    /// Refine each table's GD peak by re-evaluation before fitting.
    #[arg(long)]
    refine: bool,
    #[command(flatten)]
    opt: OptArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct RunManifest {
    command: String,
    config: Value,
    seed: Option<u64>,
    version: &'static str,
    wall_time_s: f64,
}

struct Outcome {
    record: Value,
    converged: bool,
}

fn load_state(ring: &RingArgs, input: Input, seed: u64) -> anyhow::Result<PureState> {
    Ok(match input {
        Input::Ring => ground_state(&RingConfig::new(ring.n, ring.j, ring.b)?)?.state,
        Input::Ghz => states::ghz(ring.n),
        Input::Product => states::random_product_state(ring.n, seed),
    })
}

fn cmd_ground_state(args: &RingArgs) -> anyhow::Result<Outcome> {
    let gs = ground_state(&RingConfig::new(args.n, args.j, args.b)?)?;
    let mut amps: Vec<(usize, f64, f64)> = gs
        .state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| (i, a.re, a.im))
        .filter(|a| a.1.hypot(a.2) > 1e-12)
        .collect();
    amps.sort_by(|a, b| b.1.hypot(b.2).total_cmp(&a.1.hypot(a.2)).then(a.0.cmp(&b.0)));
    amps.truncate(8);
    let leading: Vec<Value> = amps
        .iter()
        .map(|&(i, re, im)| json!({ "basis": format!("{:0width$b}", i, width = args.n), "re": re, "im": im }))
        .collect();
    Ok(Outcome {
        record: json!({
            "energy": gs.energy,
            "parity": format!("{:?}", gs.parity).to_lowercase(),
            "degeneracy_resolved": gs.degeneracy_resolved,
            "leading_amplitudes": leading,
        }),
        converged: true,
    })
}

fn cmd_measures(args: &MeasuresArgs, exec: ExecMode) -> anyhow::Result<Outcome> {
    let state = load_state(&args.ring, args.input, args.opt.seed)?;
    Ok(match args.kind {
        Kind::Pair => {
            let [i, j] = args.pair[..] else { bail!("--pair takes two sites") };
            if i == 0 || j == 0 {
                bail!("sites are numbered from 1");
            }
            let m = pair_measures(&state, i - 1, j - 1)?;
            Outcome {
                record: json!({ "discord": m.discord, "mid": m.mid, "amid": m.amid, "amid_converged": m.amid_converged }),
                converged: m.amid_converged,
            }
        }
        Kind::Global => {
            let r = global_discord(&state, &args.opt.config(exec))?;
            let angles: Vec<[f64; 2]> = r.argmin_angles.0.iter().map(|&(t, p)| [t, p]).collect();
            Outcome {
                record: json!({
                    "gd": r.value,
                    "converged": r.converged,
                    "restarts": r.n_restarts,
                    "evaluations": r.evaluations,
                    "angles": angles,
                }),
                converged: r.converged,
            }
        }
        Kind::Estats => {
            let s = entanglement_stats(&state, exec)?;
            Outcome {
                record: json!({ "mean": s.mean, "variance": s.variance, "bipartitions": s.n_bipartitions }),
                converged: true,
            }
        }
    })
}

fn format_for(path: &Path, explicit: Option<Format>) -> Format {
    explicit.unwrap_or(match path.extension().and_then(|e| e.to_str()) {
        Some("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    out.with_file_name(name)
}

fn cmd_sweep(args: &SweepArgs, exec: ExecMode) -> anyhow::Result<Outcome> {
    let mut measures = MeasureSet { global_discord: false, entanglement: false, two_spin: false };
    for m in &args.measures {
        match m.as_str() {
            "gd" => measures.global_discord = true,
            "estats" => measures.entanglement = true,
            "pair" => measures.two_spin = true,
            other => bail!("unknown measure {other:?}"),
        }
    }
    let mut cfg = SweepConfig::new(args.n, parse_grid(&args.ratio_grid)?, measures);
    cfg.grid_label = args.ratio_grid.clone();
    cfg.optimizer = args.opt.config(exec);
    cfg.exec = exec;
    let table = isingcorr::sweep::sweep(&cfg)?;
    let mut converged = table.all_converged();

    let mut peaks = serde_json::Map::new();
    for col in &args.peak {
        let column: Column = col.parse()?;
        let peak = find_peak_for(&table, column, &cfg)?;
        converged &= !peak.boundary;
        peaks.insert(col.clone(), serde_json::to_value(peak)?);
    }

    let text = match format_for(&args.out, args.format) {
        Format::Csv => table.to_csv()?,
        Format::Json => table.to_json()?,
    };
    write_atomic(&args.out, text.as_bytes()).with_context(|| format!("writing {}", args.out.display()))?;
    Ok(Outcome {
        record: json!({ "rows": table.rows.len(), "out": args.out, "peaks": peaks, "all_converged": converged }),
        converged,
    })
}

fn parse_point(s: &str) -> anyhow::Result<(usize, f64)> {
    let (n, g) = s.split_once(':').with_context(|| format!("expected N:maxGD, got {s:?}"))?;
    Ok((n.trim().parse()?, g.trim().parse()?))
}

fn load_table(path: &Path) -> anyhow::Result<SweepTable> {
    let t = match path.extension().and_then(|e| e.to_str()) {
        Some("json") => read_json(path)?,
        _ => read_csv(path)?,
    };
    Ok(t)
}

fn cmd_fit(args: &FitArgs, exec: ExecMode) -> anyhow::Result<Outcome> {
    let mut points = args.points.iter().map(|s| parse_point(s)).collect::<anyhow::Result<Vec<_>>>()?;
    let mut peak_ratios = Vec::new();
    let mut converged = true;
    for path in &args.tables {
        let table = load_table(path).with_context(|| format!("reading {}", path.display()))?;
        let peak = if args.refine {
            let mut cfg = SweepConfig::new(table.n_sites, table.ratios(), MeasureSet::GD_ONLY);
            cfg.optimizer = OptimizerConfig { seed: table.seed, ..args.opt.config(exec) };
            find_peak_for(&table, Column::Gd, &cfg)?
        } else {
            isingcorr::sweep::grid_peak(&table, Column::Gd)?.1
        };
        converged &= !peak.boundary;
        points.push((table.n_sites, peak.value));
        peak_ratios.push((table.n_sites, peak.ratio));
    }
    let fit = fit_scaling(&points)?;
    let drift = if peak_ratios.len() >= 3 { Some(peak_drift(&peak_ratios)?) } else { None };
    let record = json!({ "fit": fit, "peak_ratios": peak_ratios, "drift": drift });
    if let Some(out) = &args.out {
        write_atomic(out, serde_json::to_string_pretty(&record)?.as_bytes())?;
    }
    Ok(Outcome { record, converged })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    init_threads(cli.threads);
    let exec = if cli.sequential { ExecMode::Sequential } else { ExecMode::Parallel };

    let start = Instant::now();
    let (name, seed, out) = match &cli.command {
        Command::GroundState(_) => ("ground-state", None, None),
        Command::Measures(a) => ("measures", Some(a.opt.seed), None),
        Command::Sweep(a) => ("sweep", Some(a.opt.seed), Some(a.out.clone())),
        Command::Fit(a) => ("fit", Some(a.opt.seed), a.out.clone()),
    };
    let result = match &cli.command {
        Command::GroundState(a) => cmd_ground_state(a),
        Command::Measures(a) => cmd_measures(a, exec),
        Command::Sweep(a) => cmd_sweep(a, exec),
        Command::Fit(a) => cmd_fit(a, exec),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::FAILURE;
        }
    };

    let manifest = RunManifest {
        command: name.to_string(),
        config: serde_json::to_value(&cli).unwrap_or(Value::Null),
        seed,
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    if let Some(out) = out {
        let text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        if let Err(e) = write_atomic(&manifest_path(&out), text.as_bytes()) {
            eprintln!("error: writing manifest: {e}");
            return ExitCode::FAILURE;
        }
    }
    let mut record = outcome.record;
    if let Value::Object(map) = &mut record {
        map.insert("manifest".into(), serde_json::to_value(&manifest).unwrap_or(Value::Null));
    }
    // a closed pipe downstream is not an error for us
    let _ = writeln!(std::io::stdout(), "{}", serde_json::to_string_pretty(&record).expect("record serializes"));

    if outcome.converged {
        ExitCode::SUCCESS
    } else {
        log::warn!("some computations did not converge");
        ExitCode::from(2)
    }
}
