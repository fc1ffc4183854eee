use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::bounds::{a_of_n, c_d_feasible, ws_tail_bound, BoundParams};
use crate::error::{Error, Result};
use crate::experiments::config::{CdMode, ExperimentConfig};
use crate::experiments::csv::{real, CsvRow, CsvTable};
use crate::geometry::{make_grid, sample_uniform, PointSet};
use crate::graph::{
    build_rgg, hs_distance, hs_via_neighbour_counts, transition_matrix, GeometricGraph,
    RowStochasticMatrix,
};
use crate::matching::bottleneck_matching;
use crate::seed::trial_seed;
use crate::spectra::{
    conjecture_statistic, mean_spectral_gap, walk_spectrum, wasserstein_distance, Spectrum,
};

/// Outputs of one trial. Metric fields are NaN when `connected` is false.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub seed: u64,
    pub d: usize,
    pub n: usize,
    pub r: f64,
    pub a_n: f64,
    pub connected: bool,
    pub m_n: f64,
    pub m_over_r: f64,
    pub hs_dist: f64,
    /// The HS distance from neighbour counts; agrees with `hs_dist`.
    pub hs_dist_nbr: f64,
    pub w1_dist: f64,
    pub mean_gap: f64,
    pub conj_stat_identity: f64,
    pub lambda2_x: f64,
    pub lambda2_d: f64,
    /// `(t, ws_tail_bound)` per configured deviation parameter.
    pub ws_bounds: Vec<(f64, f64)>,
}

const FIXED_COLUMNS: [&str; 16] = [
    "trial",
    "seed",
    "d",
    "n",
    "r",
    "a_n",
    "connected",
    "M_n",
    "M_over_r",
    "hs_dist",
    "hs_dist_nbr",
    "w1_dist",
    "mean_gap",
    "conj_stat_identity",
    "lambda2_X",
    "lambda2_D",
];

const BOUND_PREFIX: &str = "ws_bound_at_t";

impl CsvRow for ExperimentRecord {
    fn header(&self) -> Vec<String> {
        FIXED_COLUMNS
            .iter()
            .map(|s| s.to_string())
            .chain(
                self.ws_bounds
                    .iter()
                    .map(|(t, _)| format!("{BOUND_PREFIX}{t}")),
            )
            .collect()
    }

    fn fields(&self) -> Vec<String> {
        let mut f = vec![
            self.trial.to_string(),
            self.seed.to_string(),
            self.d.to_string(),
            self.n.to_string(),
            real(self.r),
            real(self.a_n),
            self.connected.to_string(),
        ];
        f.extend(
            [
                self.m_n,
                self.m_over_r,
                self.hs_dist,
                self.hs_dist_nbr,
                self.w1_dist,
                self.mean_gap,
                self.conj_stat_identity,
                self.lambda2_x,
                self.lambda2_d,
            ]
            .map(real),
        );
        f.extend(self.ws_bounds.iter().map(|&(_, b)| real(b)));
        f
    }
}

impl ExperimentRecord {
    /// Reads records back from the text written by the concentration runner.
    pub fn parse_csv(text: &str) -> Result<Vec<Self>> {
        let table = CsvTable::parse(text)?;
        if table.header.len() < FIXED_COLUMNS.len()
            || table.header[..FIXED_COLUMNS.len()] != FIXED_COLUMNS
        {
            return Err(Error::Parse("csv: unexpected concentration header".into()));
        }
        let ts: Vec<f64> = table.header[FIXED_COLUMNS.len()..]
            .iter()
            .map(|h| h.strip_prefix(BOUND_PREFIX).and_then(|t| t.parse().ok()))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::Parse("csv: bad bound column".into()))?;
        let bad = |c: &str| Error::Parse(format!("csv: bad cell `{c}`"));
        table
            .rows
            .iter()
            .map(|row| {
                let u = |i: usize| row[i].parse::<usize>().map_err(|_| bad(&row[i]));
                let x = |i: usize| row[i].parse::<f64>().map_err(|_| bad(&row[i]));
                Ok(ExperimentRecord {
                    trial: u(0)?,
                    seed: row[1].parse().map_err(|_| bad(&row[1]))?,
                    d: u(2)?,
                    n: u(3)?,
                    r: x(4)?,
                    a_n: x(5)?,
                    connected: row[6].parse().map_err(|_| bad(&row[6]))?,
                    m_n: x(7)?,
                    m_over_r: x(8)?,
                    hs_dist: x(9)?,
                    hs_dist_nbr: x(10)?,
                    w1_dist: x(11)?,
                    mean_gap: x(12)?,
                    conj_stat_identity: x(13)?,
                    lambda2_x: x(14)?,
                    lambda2_d: x(15)?,
                    ws_bounds: ts
                        .iter()
                        .enumerate()
                        .map(|(k, &t)| Ok((t, x(FIXED_COLUMNS.len() + k)?)))
                        .collect::<Result<_>>()?,
                })
            })
            .collect()
    }
}

/// A trial's record plus the sampled graph's spectrum, kept for the
/// conjecture statistics.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub record: ExperimentRecord,
    pub side: usize,
    pub spectrum_x: Option<Spectrum<f64>>,
}

/// Lattice side of a configuration with its walk spectrum.
#[derive(Debug, Clone)]
pub struct GridCase {
    pub d: usize,
    pub side: usize,
    pub points: PointSet<f64>,
    pub r: f64,
    pub graph: GeometricGraph<f64>,
    pub walk: Option<RowStochasticMatrix<f64>>,
    pub spectrum: Option<Spectrum<f64>>,
}

impl GridCase {
    pub fn new(d: usize, side: usize, r: f64, cfg: &ExperimentConfig) -> Result<Self> {
        let points = make_grid::<f64>(side, d)?;
        let graph = build_rgg(&points, r)?;
        let (walk, spectrum) = if graph.is_connected() {
            (
                Some(transition_matrix(&graph)?),
                Some(walk_spectrum(&graph, &cfg.eigen)?),
            )
        } else {
            (None, None)
        };
        Ok(GridCase {
            d,
            side,
            points,
            r,
            graph,
            walk,
            spectrum,
        })
    }
}

/// All trials of a configuration, ordered by `(d, side, trial)`.
#[derive(Debug, Clone)]
pub struct TrialSet {
    pub outcomes: Vec<TrialOutcome>,
    pub grid_spectra: BTreeMap<(usize, usize), Spectrum<f64>>,
}

impl TrialSet {
    pub fn records(&self) -> Vec<ExperimentRecord> {
        self.outcomes.iter().map(|o| o.record.clone()).collect()
    }

    /// Disconnected-trial count and total per `(d, side)`.
    pub fn disconnected_counts(&self) -> BTreeMap<(usize, usize), (usize, usize)> {
        let mut out = BTreeMap::new();
        for o in &self.outcomes {
            let e = out.entry((o.record.d, o.side)).or_insert((0, 0));
            e.0 += usize::from(!o.record.connected);
            e.1 += 1;
        }
        out
    }

    /// Configurations whose disconnected fraction reaches 10%.
    pub fn schedule_warnings(&self) -> Vec<String> {
        self.disconnected_counts()
            .into_iter()
            .filter(|&(_, (bad, total))| bad * 10 >= total && bad > 0)
            .map(|((d, m), (bad, total))| {
                format!("d={d} side={m}: {bad} of {total} trials disconnected; consider a larger radius schedule")
            })
            .collect()
    }

    /// Median of `metric` over connected trials, per `(d, side)`.
    pub fn medians(
        &self,
        metric: impl Fn(&ExperimentRecord) -> f64,
    ) -> BTreeMap<(usize, usize), f64> {
        let mut groups: BTreeMap<(usize, usize), Vec<f64>> = BTreeMap::new();
        for o in self.outcomes.iter().filter(|o| o.record.connected) {
            groups
                .entry((o.record.d, o.side))
                .or_default()
                .push(metric(&o.record));
        }
        groups
            .into_iter()
            .filter_map(|(k, v)| median(v).map(|m| (k, m)))
            .collect()
    }
}

/// Median of the non-NaN values.
pub fn median(mut values: Vec<f64>) -> Option<f64> {
    values.retain(|v| !v.is_nan());
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let k = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[k]
    } else {
        0.5 * (values[k - 1] + values[k])
    })
}

fn bound_columns(
    cfg: &ExperimentConfig,
    n: usize,
    d: usize,
    r: f64,
    m_over_r: f64,
) -> Vec<(f64, f64)> {
    cfg.t_grid
        .iter()
        .map(|&t| {
            let value = (|| {
                let c_d = match cfg.c_d_mode {
                    CdMode::Fixed(v) => v,
                    CdMode::Feasible => c_d_feasible(t, m_over_r, d)?,
                };
                ws_tail_bound(&BoundParams {
                    n,
                    d,
                    r,
                    t,
                    c_d,
                    m_plus_over_r: m_over_r,
                })
            })();
            (t, value.unwrap_or(f64::NAN))
        })
        .collect()
}

/// Runs one trial: `x` against the lattice in `grid` at the grid's radius.
pub fn evaluate_pair(
    trial: usize,
    seed: u64,
    x: &PointSet<f64>,
    grid: &GridCase,
    cfg: &ExperimentConfig,
) -> Result<TrialOutcome> {
    let (n, d, r) = (grid.points.len(), grid.d, grid.r);
    if x.len() != n {
        return Err(Error::SizeMismatch {
            left: x.len(),
            right: n,
        });
    }
    let gx = build_rgg(x, r)?;
    let mut record = ExperimentRecord {
        trial,
        seed,
        d,
        n,
        r,
        a_n: a_of_n(n, d, r)?,
        connected: false,
        m_n: f64::NAN,
        m_over_r: f64::NAN,
        hs_dist: f64::NAN,
        hs_dist_nbr: f64::NAN,
        w1_dist: f64::NAN,
        mean_gap: f64::NAN,
        conj_stat_identity: f64::NAN,
        lambda2_x: f64::NAN,
        lambda2_d: f64::NAN,
        ws_bounds: cfg.t_grid.iter().map(|&t| (t, f64::NAN)).collect(),
    };
    let (Some(pd), Some(spectrum_d)) = (&grid.walk, &grid.spectrum) else {
        return Ok(TrialOutcome {
            record,
            side: grid.side,
            spectrum_x: None,
        });
    };
    if !gx.is_connected() {
        return Ok(TrialOutcome {
            record,
            side: grid.side,
            spectrum_x: None,
        });
    }

    let matching = bottleneck_matching(x, &grid.points)?;
    let phi = matching.forward();
    record.connected = true;
    record.m_n = matching.bottleneck();
    record.m_over_r = record.m_n / r;
    {
        let px = transition_matrix(&gx)?;
        record.hs_dist = hs_distance(px.as_dense(), pd.as_dense(), phi)?;
        record.mean_gap = mean_spectral_gap(px.as_dense(), pd.as_dense())?;
    }
    record.hs_dist_nbr = hs_via_neighbour_counts(&gx, &grid.graph, phi)?;

    let spectrum_x = walk_spectrum(&gx, &cfg.eigen)?;
    record.w1_dist = wasserstein_distance(&spectrum_x, spectrum_d)?;
    record.conj_stat_identity = conjecture_statistic(&spectrum_x, spectrum_d, |v| v)?;
    record.lambda2_x = spectrum_x.nth_largest(2).unwrap_or(f64::NAN);
    record.lambda2_d = spectrum_d.nth_largest(2).unwrap_or(f64::NAN);
    record.ws_bounds = bound_columns(cfg, n, d, r, record.m_over_r);
    Ok(TrialOutcome {
        record,
        side: grid.side,
        spectrum_x: Some(spectrum_x),
    })
}

/// Every `(d, side, trial)` of the configuration. Trials run in parallel and
/// are reassembled in `(d, side, trial)` order, so results do not depend on
/// scheduling.
pub fn run_trials(cfg: &ExperimentConfig) -> Result<TrialSet> {
    cfg.validate()?;
    let mut outcomes = Vec::new();
    let mut grid_spectra = BTreeMap::new();
    for &d in &cfg.dims {
        for &side in &cfg.sides {
            let n = u32::try_from(d)
                .ok()
                .and_then(|e| side.checked_pow(e))
                .ok_or(Error::GridTooLarge { side, dim: d })?;
            let r = cfg.schedule_for(d).radius(n as f64, d)?;
            let grid = GridCase::new(d, side, r, cfg)?;
            let batch: Vec<TrialOutcome> = (0..cfg.trials)
                .into_par_iter()
                .map(|trial| {
                    let seed = trial_seed(cfg.master_seed, d, side, trial);
                    let x = sample_uniform::<f64>(n, d, seed)?;
                    evaluate_pair(trial, seed, &x, &grid, cfg)
                })
                .collect::<Result<_>>()?;
            outcomes.extend(batch);
            if let Some(s) = grid.spectrum {
                grid_spectra.insert((d, side), s);
            }
        }
    }
    Ok(TrialSet {
        outcomes,
        grid_spectra,
    })
}

pub fn run_concentration(cfg: &ExperimentConfig) -> Result<Vec<ExperimentRecord>> {
    Ok(run_trials(cfg)?.records())
}

/// A named continuous function on `[-1, 1]`.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub name: &'static str,
    pub f: fn(f64) -> f64,
}

impl TestFunction {
    pub fn default_family() -> Vec<TestFunction> {
        vec![
            TestFunction {
                name: "identity",
                f: |x| x,
            },
            TestFunction {
                name: "square",
                f: |x| x * x,
            },
            TestFunction {
                name: "abs",
                f: f64::abs,
            },
            TestFunction {
                name: "cos_pi",
                f: |x| (std::f64::consts::PI * x).cos(),
            },
        ]
    }

    pub fn by_name(name: &str) -> Option<TestFunction> {
        Self::default_family().into_iter().find(|t| t.name == name)
    }
}

/// One conjecture row: a trial value, or (`trial = None`) the median over the
/// connected trials of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRecord {
    pub d: usize,
    pub n: usize,
    pub function: &'static str,
    pub trial: Option<usize>,
    pub seed: Option<u64>,
    pub statistic: f64,
    /// Trials contributing; 1 for trial rows.
    pub count: usize,
}

impl CsvRow for ConjectureRecord {
    fn header(&self) -> Vec<String> {
        [
            "row",
            "d",
            "n",
            "function",
            "trial",
            "seed",
            "statistic",
            "count",
        ]
        .map(String::from)
        .to_vec()
    }

    fn fields(&self) -> Vec<String> {
        let opt = |v: Option<String>| v.unwrap_or_default();
        vec![
            if self.trial.is_some() {
                "trial"
            } else {
                "median"
            }
            .to_string(),
            self.d.to_string(),
            self.n.to_string(),
            self.function.to_string(),
            opt(self.trial.map(|t| t.to_string())),
            opt(self.seed.map(|s| s.to_string())),
            real(self.statistic),
            self.count.to_string(),
        ]
    }
}

/// Conjecture statistics for every connected trial and function, followed by
/// per-configuration medians.
pub fn conjecture_records(
    set: &TrialSet,
    family: &[TestFunction],
) -> Result<Vec<ConjectureRecord>> {
    if family.is_empty() {
        return Err(Error::Empty("function family"));
    }
    let mut rows = Vec::new();
    let mut groups: BTreeMap<(usize, usize, usize), Vec<f64>> = BTreeMap::new();
    for o in &set.outcomes {
        let (Some(sx), Some(sd)) = (&o.spectrum_x, set.grid_spectra.get(&(o.record.d, o.side)))
        else {
            continue;
        };
        for (k, tf) in family.iter().enumerate() {
            let statistic = conjecture_statistic(sx, sd, tf.f)?;
            groups
                .entry((o.record.d, o.side, k))
                .or_default()
                .push(statistic);
            rows.push(ConjectureRecord {
                d: o.record.d,
                n: o.record.n,
                function: tf.name,
                trial: Some(o.record.trial),
                seed: Some(o.record.seed),
                statistic,
                count: 1,
            });
        }
    }
    for ((d, side, k), values) in groups {
        let count = values.len();
        rows.push(ConjectureRecord {
            d,
            n: side.pow(d as u32),
            function: family[k].name,
            trial: None,
            seed: None,
            statistic: median(values).unwrap_or(f64::NAN),
            count,
        });
    }
    Ok(rows)
}

pub fn run_conjecture(
    cfg: &ExperimentConfig,
    family: &[TestFunction],
) -> Result<Vec<ConjectureRecord>> {
    if family.is_empty() {
        return Err(Error::Empty("function family"));
    }
    conjecture_records(&run_trials(cfg)?, family)
}
