//! `rgg`: command-line front end for the random geometric graph experiments.
//!
//! Exit codes: 0 on success, 1 for usage errors (bad flags or config file),
//! 2 for runtime failures.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use rgg_core::bounds::{
    a_of_n, c_d_feasible, hs_tail_bound, hs_tail_bound_three_term, is_informative, ws_tail_bound,
};
use rgg_core::experiments::csv::{real, write_csv, CsvRow};
use rgg_core::experiments::{
    run_concentration, run_conjecture, run_reciprocal_mc, CdMode, ExperimentConfig, TestFunction,
};
use rgg_core::geometry::{make_grid, sample_uniform};
use rgg_core::graph::build_rgg;
use rgg_core::matching::bottleneck_matching;
use rgg_core::spectra::walk_spectrum;
use rgg_core::{BoundParams, PointSet};

#[derive(Parser, Debug)]
#[command(
    name = "rgg",
    version,
    about = "Random geometric graphs against lattices: spectra, matchings, bounds"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Export a point set as CSV, optionally with its geometric graph.
    Generate {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Sampled)]
        kind: Kind,
        /// Also write the graph at the scheduled radius as an edge list.
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Walk-matrix spectrum of one graph.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Kind::Sampled)]
        kind: Kind,
    },
    /// Bottleneck matching of a sample to the lattice.
    Match {
        #[command(flatten)]
        common: Common,
    },
    /// Evaluate the closed-form tail bounds.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Matching-distance to radius ratio in [0, 1/2).
        #[arg(long, default_value_t = 0.0)]
        ratio: f64,
        /// Explicit n; defaults to side^dim.
        #[arg(long)]
        n: Option<usize>,
        /// Explicit radius; defaults to the schedule's.
        #[arg(long)]
        r: Option<f64>,
    },
    /// Sample-versus-lattice trials: matching, HS and Wasserstein distances.
    Concentration {
        #[command(flatten)]
        common: Common,
    },
    /// Per-trial and median conjecture statistics.
    Conjecture {
        #[command(flatten)]
        common: Common,
        /// Test functions (identity, square, abs, cos_pi); all by default.
        #[arg(long = "function", value_delimiter = ',')]
        functions: Vec<String>,
    },
    /// Monte Carlo audit of the reciprocal binomial tail bound.
    Recbound {
        #[command(flatten)]
        common: Common,
        #[arg(long = "n", value_delimiter = ',', default_values_t = [50u64, 200, 1000])]
        n_grid: Vec<u64>,
        #[arg(long = "p", value_delimiter = ',', default_values_t = [0.1, 0.3, 0.5])]
        p_grid: Vec<f64>,
        #[arg(long, default_value_t = 100_000)]
        draws: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum Kind {
    Sampled,
    Grid,
}

/// Flags shared by every subcommand. Lists accept repeats or commas.
#[derive(Args, Debug, Default)]
struct Common {
    /// File of `key=value` lines; flags given here take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    #[arg(long, value_delimiter = ',')]
    side: Vec<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    t: Vec<f64>,
    /// `fixed:<value>` or `feasible`.
    #[arg(long)]
    cd: Option<CdMode>,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

trait Classify<T> {
    fn usage(self) -> Result<T, Failure>;
    fn runtime(self) -> Result<T, Failure>;
}

impl<T, E: Into<anyhow::Error>> Classify<T> for Result<T, E> {
    fn usage(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Usage(e.into()))
    }
    fn runtime(self) -> Result<T, Failure> {
        self.map_err(|e| Failure::Runtime(e.into()))
    }
}

impl Common {
    fn config(&self) -> Result<ExperimentConfig, Failure> {
        self.config_with_t(&[1.0])
    }

    /// As [`Common::config`], with `t_grid` the deviation grid used when
    /// neither the file nor the flags set one.
    fn config_with_t(&self, t_grid: &[f64]) -> Result<ExperimentConfig, Failure> {
        let mut cfg = ExperimentConfig {
            t_grid: t_grid.to_vec(),
            ..ExperimentConfig::default()
        };
        if let Some(path) = &self.config {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading config {}", path.display()))
                .usage()?;
            cfg.apply_file_text(&text)
                .with_context(|| format!("in config {}", path.display()))
                .usage()?;
        }
        if !self.dim.is_empty() {
            cfg.dims = self.dim.clone();
        }
        if !self.side.is_empty() {
            cfg.sides = self.side.clone();
        }
        if let Some(v) = self.trials {
            cfg.trials = v;
        }
        if let Some(v) = self.seed {
            cfg.master_seed = v;
        }
        if !self.t.is_empty() {
            cfg.t_grid = self.t.clone();
        }
        if let Some(v) = self.cd {
            cfg.c_d_mode = v;
        }
        if let Some(v) = &self.out {
            cfg.output_path = Some(v.clone());
        }
        cfg.set_schedule(self.c, self.beta).usage()?;
        cfg.validate().usage()?;
        Ok(cfg)
    }
}

/// The single `(d, side)` a one-graph subcommand works on.
fn single(cfg: &ExperimentConfig) -> Result<(usize, usize, usize), Failure> {
    let (&[d], &[side]) = (cfg.dims.as_slice(), cfg.sides.as_slice()) else {
        return Err(Failure::Usage(anyhow!(
            "this subcommand takes exactly one --dim and one --side"
        )));
    };
    let n = u32::try_from(d)
        .ok()
        .and_then(|e| side.checked_pow(e))
        .ok_or_else(|| Failure::Usage(anyhow!("side {side} in dimension {d} overflows")))?;
    Ok((d, side, n))
}

fn points(
    kind: Kind,
    cfg: &ExperimentConfig,
    d: usize,
    side: usize,
    n: usize,
) -> rgg_core::Result<PointSet> {
    match kind {
        Kind::Sampled => sample_uniform(n, d, cfg.master_seed),
        Kind::Grid => make_grid(side, d),
    }
}

/// Opens `--out`, or stdout when absent.
fn sink(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p)
                .with_context(|| format!("creating {}", p.display()))
                .runtime()?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn emit<R: CsvRow>(
    out: Box<dyn Write>,
    meta: Vec<(String, String)>,
    records: &[R],
) -> Result<(), Failure> {
    if records.is_empty() {
        return Err(Failure::Runtime(anyhow!("no records to write")));
    }
    write_csv(out, &meta, records)
        .context("writing csv")
        .runtime()
}

struct PointRow<'a>(usize, &'a [f64]);

impl CsvRow for PointRow<'_> {
    fn header(&self) -> Vec<String> {
        std::iter::once("index".to_string())
            .chain((1..=self.1.len()).map(|k| format!("x{k}")))
            .collect()
    }
    fn fields(&self) -> Vec<String> {
        std::iter::once(self.0.to_string())
            .chain(self.1.iter().map(|&v| real(v)))
            .collect()
    }
}

struct BoundRow {
    d: usize,
    n: usize,
    r: f64,
    a_n: f64,
    t: f64,
    c_d: f64,
    ratio: f64,
    hs: f64,
    hs_three: f64,
    ws: f64,
}

impl CsvRow for BoundRow {
    fn header(&self) -> Vec<String> {
        [
            "d",
            "n",
            "r",
            "a_n",
            "t",
            "c_d",
            "M_plus_over_r",
            "hs_bound",
            "hs_bound_three_term",
            "ws_bound",
            "hs_informative",
            "ws_informative",
        ]
        .map(String::from)
        .to_vec()
    }
    fn fields(&self) -> Vec<String> {
        let mut f = vec![self.d.to_string(), self.n.to_string()];
        f.extend(
            [
                self.r,
                self.a_n,
                self.t,
                self.c_d,
                self.ratio,
                self.hs,
                self.hs_three,
                self.ws,
            ]
            .map(real),
        );
        f.push(is_informative(self.hs).to_string());
        f.push(is_informative(self.ws).to_string());
        f
    }
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Generate {
            common,
            kind,
            edges,
        } => {
            let cfg = common.config()?;
            let (d, side, n) = single(&cfg)?;
            let pts = points(kind, &cfg, d, side, n).runtime()?;
            let rows: Vec<PointRow> = pts
                .points()
                .iter()
                .enumerate()
                .map(|(i, p)| PointRow(i, p.coords()))
                .collect();
            let mut meta = cfg.echo();
            meta.push(("kind".into(), format!("{kind:?}").to_lowercase()));
            emit(sink(cfg.output_path.as_deref())?, meta, &rows)?;
            if let Some(path) = edges {
                let r = cfg.schedule_for(d).radius(n as f64, d).runtime()?;
                let g = build_rgg(&pts, r).runtime()?;
                let file = File::create(&path)
                    .with_context(|| format!("creating {}", path.display()))
                    .runtime()?;
                g.write_edge_list(BufWriter::new(file))
                    .with_context(|| format!("writing {}", path.display()))
                    .runtime()?;
            }
            Ok(())
        }
        Command::Spectrum { common, kind } => {
            let cfg = common.config()?;
            let (d, side, n) = single(&cfg)?;
            let pts = points(kind, &cfg, d, side, n).runtime()?;
            let r = cfg.schedule_for(d).radius(n as f64, d).runtime()?;
            let g = build_rgg(&pts, r).runtime()?;
            let spectrum = walk_spectrum(&g, &cfg.eigen).runtime()?;
            let meta = [
                ("dim", d.to_string()),
                ("side", side.to_string()),
                ("seed", cfg.master_seed.to_string()),
                ("r", real(r)),
                ("connected", g.is_connected().to_string()),
            ];
            let path = cfg.output_path.as_deref();
            spectrum
                .write_csv(&meta, sink(path)?)
                .context("writing spectrum")
                .runtime()
        }
        Command::Match { common } => {
            let cfg = common.config()?;
            let (d, side, n) = single(&cfg)?;
            let x = sample_uniform(n, d, cfg.master_seed).runtime()?;
            let grid = make_grid(side, d).runtime()?;
            let m = bottleneck_matching(&x, &grid).runtime()?;
            eprintln!("bottleneck distance {}", real(m.bottleneck()));
            m.write_csv(&x, &grid, sink(cfg.output_path.as_deref())?)
                .context("writing matching")
                .runtime()
        }
        Command::Bounds {
            common,
            ratio,
            n,
            r,
        } => {
            let cfg = common.config()?;
            let (d, _, grid_n) = single(&cfg)?;
            let n = n.unwrap_or(grid_n);
            let r = match r {
                Some(r) => r,
                None => cfg.schedule_for(d).radius(n as f64, d).usage()?,
            };
            let a_n = a_of_n(n, d, r).usage()?;
            let rows = cfg
                .t_grid
                .iter()
                .map(|&t| {
                    let c_d = match cfg.c_d_mode {
                        CdMode::Fixed(v) => v,
                        CdMode::Feasible => c_d_feasible(t, ratio, d)?,
                    };
                    let p = BoundParams {
                        n,
                        d,
                        r,
                        t,
                        c_d,
                        m_plus_over_r: ratio,
                    };
                    Ok(BoundRow {
                        d,
                        n,
                        r,
                        a_n,
                        t,
                        c_d,
                        ratio,
                        hs: hs_tail_bound(&p)?,
                        hs_three: hs_tail_bound_three_term(&p)?,
                        ws: ws_tail_bound(&p)?,
                    })
                })
                .collect::<rgg_core::Result<Vec<_>>>()
                .usage()?;
            emit(sink(cfg.output_path.as_deref())?, cfg.echo(), &rows)
        }
        Command::Concentration { common } => {
            let cfg = common.config()?;
            let out = sink(cfg.output_path.as_deref())?;
            let records = run_concentration(&cfg).runtime()?;
            let flagged = records.iter().filter(|r| !r.connected).count();
            if flagged > 0 {
                eprintln!(
                    "{flagged} of {} trials disconnected; excluded from statistics",
                    records.len()
                );
            }
            emit(out, cfg.echo(), &records)
        }
        Command::Conjecture { common, functions } => {
            let cfg = common.config()?;
            let family = if functions.is_empty() {
                TestFunction::default_family()
            } else {
                functions
                    .iter()
                    .map(|name| {
                        TestFunction::by_name(name)
                            .ok_or_else(|| anyhow!("unknown test function `{name}`"))
                    })
                    .collect::<anyhow::Result<_>>()
                    .usage()?
            };
            let out = sink(cfg.output_path.as_deref())?;
            let records = run_conjecture(&cfg, &family).runtime()?;
            emit(out, cfg.echo(), &records)
        }
        Command::Recbound {
            common,
            n_grid,
            p_grid,
            draws,
        } => {
            let cfg = common.config_with_t(&[0.25, 0.5, 1.0])?;
            if draws == 0 || n_grid.is_empty() || p_grid.is_empty() {
                return Err(Failure::Usage(anyhow!(
                    "need draws >= 1 and nonempty --n and --p"
                )));
            }
            let out = sink(cfg.output_path.as_deref())?;
            let records = run_reciprocal_mc(&n_grid, &p_grid, &cfg.t_grid, draws, cfg.master_seed)
                .runtime()?;
            for r in records.iter().filter_map(|r| r.warning.as_deref()) {
                eprintln!("warning: {r}");
            }
            let mut meta = vec![
                ("seed".to_string(), cfg.master_seed.to_string()),
                ("draws".into(), draws.to_string()),
            ];
            meta.push((
                "t".into(),
                cfg.t_grid
                    .iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(","),
            ));
            emit(out, meta, &records)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
