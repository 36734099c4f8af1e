//! `sloshing`: spectra, counting reports and cross-checks for triangular
//! prisms. Lengths `L` and `M` share one (arbitrary) unit. Flags take
//! decimals only; for pi use 3.141592653589793.

mod output;
mod settings;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sloshing::counting::total_counts_and_s;
use sloshing::equidist::{equidist_report, fractional_part_histogram, ExpSumSpec};
use sloshing::exact::{pi4_counting_check, pi4_spectrum};
use sloshing::fem::{fem_spectrum, match_spectra, ElementOrder, FemOptions, FemSpectrum};
use sloshing::spectrum::{expanded_values, merged_quasi_spectrum, QuasiKind};
use sloshing::{validate_config, Error, PrismConfig};

use output::{num, Run};

const DEFAULT_LENGTH: f64 = std::f64::consts::PI;

/// How a run failed; decides the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Numerical(String),
    Io(anyhow::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveLength { .. }
            | Error::InvalidAngleInteger { .. }
            | Error::DegenerateBothHalfPi
            | Error::NegativeIndex(_)
            | Error::IndexOutOfRange { .. }
            | Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Numerical(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(name = "sloshing", version, about = "Sloshing spectra of triangular prisms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Merged, sorted spectrum CSV.
    Spectrum(SpectrumArgs),
    /// Exact and asymptotic counting functions and S(sigma).
    Count(CountArgs),
    /// Exponential sum and fractional-part statistics over one window.
    Equidist(EquidistArgs),
    /// Finite-element spectrum aligned against the quasi-eigenvalues.
    FemValidate(FemArgs),
    /// Counting check on the exact pi/4 spectrum.
    Pi4Check(Pi4Args),
}

#[derive(Args, Debug, Clone)]
struct Geometry {
    /// Key-value file with any of L, M, q, r, sigma_max, out.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    r: Option<i64>,
    /// Length of the sloshing side (default 3.141592653589793).
    #[arg(long = "L", allow_negative_numbers = true)]
    length: Option<f64>,
    /// Prism depth, same unit as L (default 3.141592653589793).
    #[arg(long = "M", allow_negative_numbers = true)]
    depth: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    sigma_max: Option<f64>,
    /// Output directory (default: current directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Resolved {
    cfg: PrismConfig,
    sigma_max: f64,
    out: PathBuf,
}

impl Geometry {
    fn resolve(&self) -> Result<Resolved, Failure> {
        let file = match &self.config {
            Some(p) => settings::load(p)?,
            None => settings::FileSettings::default(),
        };
        let q = self.q.or(file.q).ok_or_else(|| Failure::Usage("missing --q".into()))?;
        let r = self.r.or(file.r).ok_or_else(|| Failure::Usage("missing --r".into()))?;
        let sigma_max = self
            .sigma_max
            .or(file.sigma_max)
            .ok_or_else(|| Failure::Usage("missing --sigma-max".into()))?;
        if !(sigma_max > 0.0 && sigma_max.is_finite()) {
            return Err(Failure::Usage(format!("--sigma-max must be positive, got {sigma_max}")));
        }
        let length = self.length.or(file.length).unwrap_or(DEFAULT_LENGTH);
        let depth = self.depth.or(file.depth).unwrap_or(DEFAULT_LENGTH);
        let out = self
            .out
            .clone()
            .or(file.out.map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from("."));
        Ok(Resolved {
            cfg: validate_config(length, depth, q, r)?,
            sigma_max,
            out,
        })
    }
}

impl Resolved {
    fn record(&self, run: &mut Run) -> Result<(), Failure> {
        run.param("L", self.cfg.length())?;
        run.param("M", self.cfg.depth())?;
        run.param("q", self.cfg.q())?;
        run.param("r", self.cfg.r())?;
        run.param("sigma_max", self.sigma_max)
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
enum Kind {
    Edge,
    Surface,
    Pi4exact,
    Fem,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "lowercase")]
enum Order {
    P1,
    P2,
}

#[derive(Args, Debug, Clone)]
struct MeshArgs {
    /// Finite-element mesh size (default L/40).
    #[arg(long)]
    h: Option<f64>,
    /// Corner refinement factor.
    #[arg(long, default_value_t = FemOptions::DEFAULT_GRADING)]
    grading: f64,
    #[arg(long, value_enum, default_value_t = Order::P2)]
    order: Order,
}

impl MeshArgs {
    fn options(&self, cfg: &PrismConfig, run: &mut Run) -> Result<FemOptions, Failure> {
        let mut opts = FemOptions::for_config(cfg);
        if let Some(h) = self.h {
            opts.h = h;
        }
        opts.grading = self.grading;
        opts.order = match self.order {
            Order::P1 => ElementOrder::P1,
            Order::P2 => ElementOrder::P2,
        };
        run.param("h", opts.h)?;
        run.param("grading", opts.grading)?;
        run.param("order", self.order)?;
        Ok(opts)
    }
}

#[derive(Args, Debug, Clone)]
struct SpectrumArgs {
    #[command(flatten)]
    geometry: Geometry,
    /// Comma-separated families to include.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Kind::Edge, Kind::Surface])]
    kinds: Vec<Kind>,
    #[command(flatten)]
    mesh: MeshArgs,
}

#[derive(Args, Debug, Clone)]
struct CountArgs {
    #[command(flatten)]
    geometry: Geometry,
    /// Grid points, evenly spaced on (0, sigma_max].
    #[arg(long, default_value_t = 200)]
    points: usize,
}

#[derive(Args, Debug, Clone)]
struct EquidistArgs {
    #[arg(long)]
    sigma: f64,
    /// Number of windows.
    #[arg(long = "K")]
    k: u32,
    /// Window index, 0 <= r <= K - 2.
    #[arg(long)]
    r: u32,
    /// Harmonic.
    #[arg(long, allow_negative_numbers = true)]
    h: i64,
    /// Histogram bins for the fractional parts.
    #[arg(long, default_value_t = 20)]
    bins: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args, Debug, Clone)]
struct FemArgs {
    #[command(flatten)]
    geometry: Geometry,
    #[command(flatten)]
    mesh: MeshArgs,
    /// Gap below which a pair counts as matched.
    #[arg(long, default_value_t = 1e-2)]
    tol: f64,
}

#[derive(Args, Debug, Clone)]
struct Pi4Args {
    #[arg(long = "L", default_value_t = DEFAULT_LENGTH)]
    length: f64,
    #[arg(long = "M", default_value_t = DEFAULT_LENGTH)]
    depth: f64,
    /// At least 20.
    #[arg(long, default_value_t = 200.0)]
    sigma_max: f64,
    #[arg(long, default_value_t = 40)]
    points: usize,
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

/// One line of the shared spectrum schema.
struct Row {
    sigma: f64,
    kind: &'static str,
    corner: String,
    m: Option<i64>,
    n: usize,
    multiplicity: u32,
    residual: f64,
    branch: &'static str,
}

const SPECTRUM_HEADER: [&str; 8] = ["sigma", "kind", "corner", "m", "n", "multiplicity", "residual", "branch"];

impl Row {
    fn cells(&self) -> Vec<String> {
        vec![
            num(self.sigma),
            self.kind.to_string(),
            self.corner.clone(),
            self.m.map(|m| m.to_string()).unwrap_or_default(),
            self.n.to_string(),
            self.multiplicity.to_string(),
            num(self.residual),
            self.branch.to_string(),
        ]
    }
}

fn sort_rows(rows: &mut [Row]) {
    rows.sort_by(|a, b| {
        a.sigma
            .total_cmp(&b.sigma)
            .then(a.kind.cmp(b.kind))
            .then(a.corner.cmp(&b.corner))
            .then(a.n.cmp(&b.n))
            .then(a.m.cmp(&b.m))
            .then(a.branch.cmp(b.branch))
    });
}

fn fem_rows(spec: &FemSpectrum) -> Vec<Row> {
    spec.merged
        .iter()
        .map(|&(sigma, n, k)| Row {
            sigma,
            kind: "fem",
            corner: String::new(),
            m: Some(k as i64),
            n,
            multiplicity: 1,
            residual: 0.0,
            branch: "",
        })
        .collect()
}

fn run_spectrum(args: &SpectrumArgs) -> Result<Vec<PathBuf>, Failure> {
    let res = args.geometry.resolve()?;
    let cfg = &res.cfg;
    let mut run = Run::new(&res.out, "spectrum")?;
    res.record(&mut run)?;
    let mut kinds = args.kinds.clone();
    kinds.sort();
    kinds.dedup();
    run.param("kinds", &kinds)?;

    let mut rows = Vec::new();
    let quasi_wanted = kinds.contains(&Kind::Edge) || kinds.contains(&Kind::Surface);
    if quasi_wanted {
        for e in merged_quasi_spectrum(cfg, res.sigma_max) {
            let keep = match e.kind {
                QuasiKind::Constant => true,
                QuasiKind::Edge | QuasiKind::CornerPair => kinds.contains(&Kind::Edge),
                QuasiKind::Surface => kinds.contains(&Kind::Surface),
            };
            if keep {
                rows.push(Row {
                    sigma: e.sigma,
                    kind: e.kind.as_str(),
                    corner: e.corner.map(|c| c.as_str().to_string()).unwrap_or_default(),
                    m: e.m,
                    n: e.n,
                    multiplicity: e.multiplicity,
                    residual: e.residual,
                    branch: "",
                });
            }
        }
    }
    if kinds.contains(&Kind::Pi4exact) {
        if (cfg.q(), cfg.r()) != (2, 2) {
            return Err(Failure::Usage("kind pi4exact needs q = r = 2".into()));
        }
        for root in pi4_spectrum(cfg.length(), cfg.depth(), res.sigma_max)? {
            rows.push(Row {
                sigma: root.sigma,
                kind: "pi4exact",
                corner: String::new(),
                m: Some(root.m as i64),
                n: root.n,
                multiplicity: 1,
                residual: 0.0,
                branch: root.branch.as_str(),
            });
        }
    }
    if kinds.contains(&Kind::Fem) {
        let opts = args.mesh.options(cfg, &mut run)?;
        rows.extend(fem_rows(&fem_spectrum(cfg, &opts, res.sigma_max)?));
    }
    sort_rows(&mut rows);
    let cells: Vec<Vec<String>> = rows.iter().map(Row::cells).collect();
    run.csv("spectrum.csv", &SPECTRUM_HEADER, &cells)?;
    run.finish()
}

fn run_count(args: &CountArgs) -> Result<Vec<PathBuf>, Failure> {
    let res = args.geometry.resolve()?;
    if args.points == 0 {
        return Err(Failure::Usage("--points must be positive".into()));
    }
    let mut run = Run::new(&res.out, "count")?;
    res.record(&mut run)?;
    run.param("points", args.points)?;
    let grid: Vec<f64> = (1..=args.points)
        .map(|k| res.sigma_max * k as f64 / args.points as f64)
        .collect();
    let report = total_counts_and_s(&res.cfg, &grid)?;
    let rows: Vec<Vec<String>> = (0..grid.len())
        .map(|i| {
            vec![
                num(report.sigma_grid[i]),
                report.exact_ne[i].to_string(),
                report.exact_ns[i].to_string(),
                report.exact_total[i].to_string(),
                num(report.asym_ne[i]),
                num(report.asym_ns[i]),
                report.deficit_exact[i].to_string(),
                num(report.deficit_asym[i]),
                num(report.s_values[i]),
            ]
        })
        .collect();
    run.csv(
        "count.csv",
        &[
            "sigma", "exact_ne", "exact_ns", "exact_total", "asym_ne", "asym_ns", "deficit_exact",
            "deficit_asym", "S",
        ],
        &rows,
    )?;
    let plot: Vec<Vec<String>> = grid
        .iter()
        .zip(&report.s_values)
        .map(|(s, v)| vec![num(*s), num(*v)])
        .collect();
    run.csv("count_s.csv", &["sigma", "S"], &plot)?;
    run.json("count.json", &report)?;
    run.finish()
}

#[derive(Serialize)]
struct EquidistOutput {
    #[serde(flatten)]
    report: sloshing::equidist::EquidistReport,
    histogram: Vec<u64>,
}

fn run_equidist(args: &EquidistArgs) -> Result<Vec<PathBuf>, Failure> {
    let spec = ExpSumSpec::new(args.sigma, args.k, args.r, args.h)?;
    let report = equidist_report(&spec)?;
    let hist = fractional_part_histogram(args.sigma, args.k, args.r, args.bins)?;
    let mut run = Run::new(&args.out, "equidist")?;
    run.param("sigma", args.sigma)?;
    run.param("K", args.k)?;
    run.param("r", args.r)?;
    run.param("h", args.h)?;
    run.param("bins", args.bins)?;
    run.json(
        "equidist.json",
        &EquidistOutput {
            report,
            histogram: hist.counts,
        },
    )?;
    run.finish()
}

#[derive(Serialize)]
struct PairOut {
    index: usize,
    quasi: f64,
    fem: f64,
    gap: f64,
}

#[derive(Serialize)]
struct AlignmentOut {
    offset: i64,
    first_matched: Option<usize>,
    median_gap: f64,
    stable: bool,
    tol: f64,
    mesh_size: f64,
    quasi_count: usize,
    fem_count: usize,
    pairs: Vec<PairOut>,
}

fn run_fem_validate(args: &FemArgs) -> Result<Vec<PathBuf>, Failure> {
    let res = args.geometry.resolve()?;
    let cfg = &res.cfg;
    let mut run = Run::new(&res.out, "fem-validate")?;
    res.record(&mut run)?;
    run.param("tol", args.tol)?;
    let opts = args.mesh.options(cfg, &mut run)?;
    let fem = fem_spectrum(cfg, &opts, res.sigma_max)?;
    let quasi = expanded_values(&merged_quasi_spectrum(cfg, res.sigma_max));
    let computed = fem.values();
    let report = match_spectra(&computed, &quasi, args.tol)?;
    if !report.stable {
        eprintln!("warning: no stable offset (median gap {})", num(report.median_gap));
    }
    let out = AlignmentOut {
        offset: report.offset,
        first_matched: report.first_matched,
        median_gap: report.median_gap,
        stable: report.stable,
        tol: args.tol,
        mesh_size: fem.mesh_size,
        quasi_count: quasi.len(),
        fem_count: computed.len(),
        pairs: report
            .pairs
            .iter()
            .map(|&(index, quasi, fem, gap)| PairOut { index, quasi, fem, gap })
            .collect(),
    };
    let mut rows = fem_rows(&fem);
    sort_rows(&mut rows);
    let cells: Vec<Vec<String>> = rows.iter().map(Row::cells).collect();
    run.csv("fem_spectrum.csv", &SPECTRUM_HEADER, &cells)?;
    run.json("fem_alignment.json", &out)?;
    run.finish()
}

#[derive(Serialize)]
struct Pi4Output {
    #[serde(flatten)]
    series: sloshing::exact::Pi4CountSeries,
    /// Exact pi/4 roots against the q = r = 2 quasi-eigenvalues.
    exact_count: usize,
    quasi_count: usize,
    max_gap_above_5: Option<f64>,
}

fn run_pi4_check(args: &Pi4Args) -> Result<Vec<PathBuf>, Failure> {
    let series = pi4_counting_check(args.length, args.depth, args.sigma_max, args.points)?;
    let cfg = validate_config(args.length, args.depth, 2, 2)?;
    let exact: Vec<f64> = pi4_spectrum(args.length, args.depth, args.sigma_max)?
        .iter()
        .map(|r| r.sigma)
        .collect();
    let quasi = expanded_values(&merged_quasi_spectrum(&cfg, args.sigma_max));
    let max_gap_above_5 = (exact.len() == quasi.len()).then(|| {
        exact
            .iter()
            .zip(&quasi)
            .filter(|(e, _)| **e >= 5.0)
            .map(|(e, q)| (e - q).abs())
            .fold(0.0, f64::max)
    });
    let mut run = Run::new(&args.out, "pi4-check")?;
    run.param("L", args.length)?;
    run.param("M", args.depth)?;
    run.param("sigma_max", args.sigma_max)?;
    run.param("points", args.points)?;
    let rows: Vec<Vec<String>> = (0..series.sigma.len())
        .map(|i| vec![num(series.sigma[i]), series.count[i].to_string(), num(series.s_values[i])])
        .collect();
    run.csv("pi4_check.csv", &["sigma", "count", "S"], &rows)?;
    run.json(
        "pi4_check.json",
        &Pi4Output {
            series,
            exact_count: exact.len(),
            quasi_count: quasi.len(),
            max_gap_above_5,
        },
    )?;
    run.finish()
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("SLOSHING_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("SLOSHING_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Io(anyhow::anyhow!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match &cli.command {
        Command::Spectrum(a) => run_spectrum(a),
        Command::Count(a) => run_count(a),
        Command::Equidist(a) => run_equidist(a),
        Command::FemValidate(a) => run_fem_validate(a),
        Command::Pi4Check(a) => run_pi4_check(a),
    });
    match result {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
