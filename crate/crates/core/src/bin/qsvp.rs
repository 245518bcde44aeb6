use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use qsvp::algorithms::{
    estimate_offset, multi_run, single_run, OffsetMode, RunParameters, ADIABATIC_T,
};
use qsvp::banding::DEFAULT_J_MAX;
use qsvp::experiments::{
    exp_banding, exp_distributions, exp_energy_levels, exp_kgrowth, exp_payoff, exp_worked_example,
    svg::Chart, worked_basis, ExperimentConfig, LevelsConfig, OutputFormat, Table,
};
use qsvp::hamiltonian::SpectrumScale;
use qsvp::lattice::{io, random_lattice, svp_enumerate, Basis, GoodBadParams, LatticeMode};
use qsvp::{Error, Result};

#[derive(Parser)]
#[command(
    name = "qsvp",
    version,
    about = "Bose-Hubbard sweeps for the shortest vector problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Coefficient growth of shortest vectors on HNF and LLL bases.
    Kgrowth {
        #[command(flatten)]
        common: Common,
        /// Use identity lattices instead of uniform random entries.
        #[arg(long)]
        identity: bool,
    },
    /// Mean class probabilities by rank over a good/bad ensemble.
    Dist(Common),
    /// Mean and 10th percentile of P(0), P(lambda1), P(lambda2) against T.
    Payoff(Common),
    /// Class probabilities and energy gaps along one sweep.
    Levels {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long, default_value_t = 3)]
        levels: usize,
        #[arg(long)]
        reservoir: bool,
        #[arg(long)]
        particles: Option<u32>,
    },
    /// Band-diagonalisation of prime-determinant HNF bases.
    Band {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_J_MAX)]
        j_max: usize,
        #[arg(long)]
        identity: bool,
    },
    /// The two-dimensional worked example; exits 4 if its assertion fails.
    #[command(name = "example-2d")]
    Example2d(Common),
    /// One sweep with a particle reservoir.
    #[command(name = "single-run")]
    SingleRun {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        basis: BasisArgs,
    },
    /// Fixed-particle sweeps for K = Nm + 1 ..= Nm + c.
    #[command(name = "multi-run")]
    MultiRun {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        basis: BasisArgs,
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Exact shortest vector by enumeration.
    Oracle {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        basis: BasisArgs,
    },
    /// Random lattice basis in text form.
    Gen {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = GenMode::GoodBad)]
        mode: GenMode,
    },
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Lattice dimensions, comma separated.
    #[arg(long, value_delimiter = ',')]
    dim: Vec<usize>,
    /// Ensemble size.
    #[arg(long)]
    count: Option<usize>,
    /// Sweep lengths, comma separated.
    #[arg(long = "T", value_delimiter = ',')]
    t: Vec<f64>,
    /// Particle offset per site.
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    jobs: Option<usize>,
    /// Output directory; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',')]
    format: Vec<Format>,
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BasisArgs {
    /// Basis file, text or JSON. A random good/bad basis is drawn otherwise.
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenMode {
    Uniform,
    PrimeHnf,
    GoodBad,
    Identity,
}

enum Outcome {
    Ok,
    AssertionFailed(String),
}

impl Common {
    fn config(&self, name: &str) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        c.name = name.into();
        if !self.dim.is_empty() {
            c.dims = self.dim.clone();
        }
        if let Some(n) = self.count {
            c.ensemble = n;
        }
        if !self.t.is_empty() {
            c.t_grid = self.t.clone();
        }
        if self.steps.is_some() {
            c.steps = self.steps;
        }
        if let Some(s) = self.seed {
            c.seed = s;
        }
        if self.jobs.is_some() {
            c.jobs = self.jobs;
        }
        if let Some(o) = &self.out {
            c.out_dir = o.clone();
        }
        if !self.format.is_empty() {
            c.formats = self
                .format
                .iter()
                .map(|f| match f {
                    Format::Csv => OutputFormat::Csv,
                    Format::Json => OutputFormat::Json,
                    Format::Svg => OutputFormat::Svg,
                })
                .collect();
        }
        if let Some(m) = self.m {
            c.offset = OffsetMode::Fixed { m };
        }
        c.validate()?;
        Ok(c)
    }

    fn single_t(&self, default: f64) -> Result<f64> {
        match self.t.as_slice() {
            [] => Ok(default),
            [t] if *t > 0.0 && t.is_finite() => Ok(*t),
            _ => Err(Error::InvalidConfig(
                "expected a single positive --T".into(),
            )),
        }
    }
}

/// Writes each requested artefact to `out_dir`, or CSV and JSON to stdout.
struct Sink<'a> {
    cfg: &'a ExperimentConfig,
    to_dir: bool,
}

impl<'a> Sink<'a> {
    fn new(cfg: &'a ExperimentConfig, common: &Common) -> Result<Self> {
        let to_dir = common.out.is_some() || common.config.is_some();
        if to_dir {
            std::fs::create_dir_all(&cfg.out_dir)?;
        }
        Ok(Sink { cfg, to_dir })
    }

    fn file(&self, suffix: &str, ext: &str) -> PathBuf {
        self.cfg
            .out_dir
            .join(format!("{}{suffix}.{ext}", self.cfg.name))
    }

    fn emit(
        &self,
        suffix: &str,
        table: Option<&Table>,
        json: &impl Serialize,
        chart: Option<&Chart>,
    ) -> Result<()> {
        for f in &self.cfg.formats {
            match f {
                OutputFormat::Csv => {
                    if let Some(t) = table {
                        self.put(&self.file(suffix, "csv"), &t.to_csv())?;
                    }
                }
                OutputFormat::Json => {
                    let mut s = serde_json::to_string_pretty(json)?;
                    s.push('\n');
                    self.put(&self.file(suffix, "json"), &s)?;
                }
                OutputFormat::Svg => {
                    if let Some(c) = chart {
                        if self.to_dir {
                            std::fs::write(self.file(suffix, "svg"), c.render())?;
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn put(&self, path: &Path, text: &str) -> Result<()> {
        if self.to_dir {
            std::fs::write(path, text)?;
        } else {
            print!("{text}");
        }
        Ok(())
    }
}

fn load_basis(args: &BasisArgs, common: &Common, seed: u64) -> Result<Basis> {
    match &args.basis {
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            if text.trim_start().starts_with('{') {
                io::from_json(&text)
            } else {
                io::from_text(&text)
            }
        }
        None => {
            let n = match common.dim.as_slice() {
                [] => 2,
                [n] => *n,
                _ => return Err(Error::InvalidConfig("expected a single --dim".into())),
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            Ok(random_lattice(
                n,
                &LatticeMode::GoodBadPair(GoodBadParams::for_dim(n)),
                &mut rng,
            )?
            .problem_basis()
            .clone())
        }
    }
}

fn offset(cfg: &ExperimentConfig, b: &Basis) -> Result<u32> {
    estimate_offset(b.dim(), &cfg.offset, Some(b))
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Kgrowth { common, identity } => {
            let mut cfg = common.config("kgrowth")?;
            if common.dim.is_empty() && common.config.is_none() {
                cfg.dims = (3..=8).collect();
            }
            if common.count.is_none() && common.config.is_none() {
                cfg.ensemble = 80;
            }
            let mode = if identity {
                LatticeMode::Identity
            } else {
                LatticeMode::uniform()
            };
            let r = exp_kgrowth(&cfg.dims, cfg.ensemble, cfg.seed, &mode, cfg.jobs)?;
            Sink::new(&cfg, &common)?.emit("", Some(&r.table()), &r, Some(&r.chart()))?;
        }
        Command::Dist(common) => {
            let cfg = common.config("dist")?;
            let r = exp_distributions(&cfg)?;
            Sink::new(&cfg, &common)?.emit("", Some(&r.table()), &r, Some(&r.chart()))?;
        }
        Command::Payoff(common) => {
            let cfg = common.config("payoff")?;
            let r = exp_payoff(&cfg)?;
            Sink::new(&cfg, &common)?.emit("", Some(&r.table()), &r, Some(&r.chart()))?;
        }
        Command::Levels {
            common,
            basis,
            levels,
            reservoir,
            particles,
        } => {
            let cfg = common.config("levels")?;
            let b = match basis.basis {
                Some(_) => load_basis(&basis, &common, cfg.seed)?,
                None => worked_basis(),
            };
            let m = common.m.unwrap_or(0);
            let lc = LevelsConfig {
                levels,
                steps: cfg.steps,
                reservoir,
                particles: particles.or((!reservoir && common.m.is_none()).then_some(2)),
                ..LevelsConfig::new(m, common.single_t(2.0)?)
            };
            let r = exp_energy_levels(&b, &lc)?;
            Sink::new(&cfg, &common)?.emit("", Some(&r.table()), &r, Some(&r.chart()))?;
        }
        Command::Band {
            common,
            j_max,
            identity,
        } => {
            let cfg = common.config("band")?;
            let dim = match common.dim.as_slice() {
                [] => 30,
                [d] => *d,
                _ => return Err(Error::InvalidConfig("band takes a single --dim".into())),
            };
            let count = common.count.unwrap_or(100);
            let mode = if identity {
                LatticeMode::Identity
            } else {
                LatticeMode::prime_det_hnf()
            };
            let r = exp_banding(dim, count, cfg.seed, &mode, j_max, cfg.jobs)?;
            let sink = Sink::new(&cfg, &common)?;
            sink.emit("_profile", Some(&r.profile_table()), &r, Some(&r.chart()))?;
            sink.emit("_summary", Some(&r.summary_table()), &r, None)?;
        }
        Command::Example2d(common) => {
            let cfg = common.config("example_2d")?;
            let r = exp_worked_example(common.single_t(2.0)?, cfg.steps)?;
            Sink::new(&cfg, &common)?.emit(
                "",
                Some(&r.levels.table()),
                &r,
                Some(&r.levels.chart()),
            )?;
            if !r.passed {
                return Ok(Outcome::AssertionFailed(format!(
                    "most probable state {:?} with probability {:.6}, decoded {:?}",
                    r.most_probable_state, r.most_probable_probability, r.decoded_vector
                )));
            }
        }
        Command::SingleRun { common, basis } => {
            let cfg = common.config("single_run")?;
            let b = load_basis(&basis, &common, cfg.seed)?;
            let mut p = RunParameters::new(offset(&cfg, &b)?, common.single_t(ADIABATIC_T)?);
            p.steps = cfg.steps;
            p.scale = SpectrumScale::TargetMax(cfg.scale_target);
            let r = single_run(&b, &p)?;
            let mut t = Table::new(&["rank", "norm_sq", "probability", "vector"]);
            for c in &r.table.classes {
                let v: Vec<String> = c.vectors[0].iter().map(ToString::to_string).collect();
                t.push(vec![
                    c.rank.to_string(),
                    c.norm_sq.to_string(),
                    c.probability.to_string(),
                    v.join(" "),
                ]);
            }
            Sink::new(&cfg, &common)?.emit("", Some(&t), &r, None)?;
        }
        Command::MultiRun {
            common,
            basis,
            runs,
        } => {
            let cfg = common.config("multi_run")?;
            let b = load_basis(&basis, &common, cfg.seed)?;
            let mut p = RunParameters::new(offset(&cfg, &b)?, common.single_t(ADIABATIC_T)?);
            p.steps = cfg.steps;
            p.runs = runs;
            p.scale = SpectrumScale::TargetMax(cfg.scale_target);
            let r = multi_run(&b, &p)?;
            let mut t = Table::new(&["particles", "norm_sq", "probability", "vector"]);
            for c in &r.per_run {
                let v: Vec<String> = c.vector.iter().map(ToString::to_string).collect();
                t.push(vec![
                    c.particles.to_string(),
                    c.norm_sq.to_string(),
                    c.probability.to_string(),
                    v.join(" "),
                ]);
            }
            Sink::new(&cfg, &common)?.emit("", Some(&t), &r, None)?;
        }
        Command::Oracle { common, basis } => {
            let cfg = common.config("oracle")?;
            let b = load_basis(&basis, &common, cfg.seed)?;
            let r = svp_enumerate(&b)?;
            let report = serde_json::json!({
                "lambda1_sq": r.lambda1_sq.to_string(),
                "inf_norm_xmin": r.inf_norm_xmin.to_string(),
                "coeff_sum_abs": r.coeff_sum_abs.to_string(),
                "canonical": r.canonical().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "minimizers": r.minimizers.len(),
            });
            let mut t = Table::new(&["lambda1_sq", "inf_norm_xmin", "coeff_sum_abs"]);
            t.push(vec![
                r.lambda1_sq.to_string(),
                r.inf_norm_xmin.to_string(),
                r.coeff_sum_abs.to_string(),
            ]);
            Sink::new(&cfg, &common)?.emit("", Some(&t), &report, None)?;
        }
        Command::Gen { common, mode } => {
            let cfg = common.config("gen")?;
            let n = match common.dim.as_slice() {
                [] => 2,
                [n] => *n,
                _ => return Err(Error::InvalidConfig("gen takes a single --dim".into())),
            };
            let mode = match mode {
                GenMode::Uniform => LatticeMode::uniform(),
                GenMode::PrimeHnf => LatticeMode::prime_det_hnf(),
                GenMode::GoodBad => LatticeMode::GoodBadPair(cfg.lattice_params(n)),
                GenMode::Identity => LatticeMode::Identity,
            };
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let b = random_lattice(n, &mode, &mut rng)?.problem_basis().clone();
            match &common.out {
                Some(dir) => {
                    std::fs::create_dir_all(dir)?;
                    std::fs::write(dir.join("basis.txt"), io::to_text(&b))?;
                    std::fs::write(dir.join("basis.json"), io::to_json(&b))?;
                }
                None => print!("{}", io::to_text(&b)),
            }
        }
    }
    Ok(Outcome::Ok)
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::HilbertCap { .. } | Error::DimensionCap { .. } => 3,
        Error::InvalidConfig(_)
        | Error::InvalidArgument(_)
        | Error::Parse(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::EmptyInput
        | Error::NotSquare { .. }
        | Error::Singular
        | Error::DimensionMismatch { .. } => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::AssertionFailed(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
