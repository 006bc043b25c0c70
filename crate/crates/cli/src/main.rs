use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use weylwalk::algebra::prime::primes_from;
use weylwalk::algebra::IntMatrix;
use weylwalk::census::{run_census, Population};
use weylwalk::chain::{simulate_iota, ChainSpec};
use weylwalk::frobenius::natural_dim;
use weylwalk::harness::{
    default_prime_floor, estimate_tau, galois_certify, survey, tau_median, torus_demo, PrimeBudget, SurveySpec,
    TorusMode,
};
use weylwalk::rng::substream;
use weylwalk::stats::log_linear_fit;
use weylwalk::walker::{run_walk, walk_charpoly, GroupSpec, WalkCharpoly, WalkConfig, WalkMode};
use weylwalk::{Error, Result};

#[derive(Parser)]
#[command(name = "weylwalk", version, about = "Galois groups of random walk products in SL(m, Z) and Sp(2g, Z)")]
struct Cli {
    /// Master seed; overrides the seed of a config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Run one walk and print the final matrix and characteristic polynomial.
    Walk {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        length: usize,
        #[arg(long, default_value_t = 0)]
        trial: u64,
    },
    /// Certify the Galois group of an integer matrix's characteristic polynomial.
    Galois {
        /// Whitespace-separated square integer matrix, one row per line.
        #[arg(long)]
        matrix: PathBuf,
        /// `sl` or `sp`; the rank is read off the matrix size.
        #[arg(long, default_value = "sl")]
        family: String,
        #[arg(long, default_value_t = 25)]
        primes: usize,
        /// First prime tried (default 2 for SL, 5 for Sp).
        #[arg(long)]
        prime_floor: Option<u64>,
    },
    /// Certification survey over a grid of walk lengths.
    Survey {
        #[command(flatten)]
        walk: WalkArgs,
        /// Comma-separated walk lengths.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
        #[arg(long)]
        trials: u64,
        /// Prime budget per certification (default: every carried prime).
        #[arg(long)]
        budget: Option<usize>,
        /// Also write the CSV summary to this file.
        #[arg(long)]
        summary: Option<PathBuf>,
        /// Record per-trial wall time (breaks byte-for-byte reproducibility).
        #[arg(long)]
        timing: bool,
    },
    /// First walk length at which certification succeeds.
    Tau {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long)]
        trials: u64,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Frobenius class census over G(F_q).
    Equidist {
        #[arg(long, value_parser = parse_group)]
        group: GroupSpec,
        #[arg(long)]
        q: u64,
        /// Uniform samples instead of full enumeration.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Visit-count deviations of a coset Markov chain.
    Chain {
        /// Chain description in JSON.
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
    },
    /// Return probability of the lazy walk on Z.
    TorusDemo {
        #[arg(long)]
        n_max: usize,
        /// Monte Carlo trials; exact computation when absent.
        #[arg(long)]
        trials: Option<u64>,
    },
}

#[derive(Args)]
struct WalkArgs {
    /// Walk configuration file; the remaining walk flags are ignored.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `sl<m>` or `sp<2g>`, e.g. `sl3`, `sp4`.
    #[arg(long, value_parser = parse_group)]
    group: Option<GroupSpec>,
    #[arg(long, value_enum, default_value_t = ModeArg::Modular)]
    mode: ModeArg,
    /// Number of carried primes.
    #[arg(long, default_value_t = 100)]
    primes: usize,
    /// First carried prime (default 2 for SL, 5 for Sp).
    #[arg(long)]
    prime_floor: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Exact,
    Modular,
    Dual,
}

fn parse_group(s: &str) -> std::result::Result<GroupSpec, String> {
    let lower = s.to_ascii_lowercase();
    let (family, rest) = lower.split_at(lower.len().min(2));
    let n: usize = rest.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| format!("bad group {s:?}"))?;
    let group = match family {
        "sl" => GroupSpec::sl(n),
        "sp" if n % 2 == 0 => GroupSpec::sp(n / 2),
        _ => return Err(format!("bad group {s:?}: expected sl<m> or sp<2g>")),
    };
    group.map_err(|e| e.to_string())
}

impl WalkArgs {
    fn build(&self, seed: Option<u64>) -> Result<WalkConfig> {
        let mut cfg = match (&self.config, self.group) {
            (Some(path), _) => WalkConfig::from_file(path)?,
            (None, Some(group)) => {
                let floor = self.prime_floor.unwrap_or(default_prime_floor(group.weyl()));
                let primes = primes_from(floor, self.primes);
                let mode = match self.mode {
                    ModeArg::Exact => WalkMode::Exact,
                    ModeArg::Modular => WalkMode::Modular(primes),
                    ModeArg::Dual => WalkMode::Dual(primes),
                };
                WalkConfig::new(group, 0, 0, mode)?
            }
            (None, None) => return Err(Error::config("either --config or --group is required")),
        };
        if let Some(s) = seed {
            cfg.master_seed = s;
        }
        Ok(cfg)
    }
}

fn budget_for(cfg: &WalkConfig, count: Option<usize>) -> PrimeBudget {
    let primes = cfg.mode.primes();
    let floor = primes.iter().copied().min().unwrap_or(default_prime_floor(cfg.group.weyl()));
    PrimeBudget::new(count.unwrap_or(primes.len().max(1)), floor)
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn write_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(t) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| Error::config(e.to_string()))?;
    }
    let seed = cli.seed;
    let mut out = output(&cli.out)?;
    match &cli.command {
        Command::Walk { walk, length, trial } => {
            let cfg = walk.build(seed)?.with_length(*length);
            let state = run_walk(&cfg, *trial)?;
            let charpoly = match walk_charpoly(&state) {
                WalkCharpoly::Exact(p) => json!({"exact": p.to_text()}),
                WalkCharpoly::Modular(ps) => {
                    json!(ps.iter().map(|p| json!({"p": p.modulus(), "charpoly": p.to_text()})).collect::<Vec<_>>())
                }
            };
            let labels: Vec<&str> = state.trace.iter().map(|&i| cfg.generators[i].label.as_str()).collect();
            write_json(
                &mut out,
                &json!({
                    "group": cfg.group,
                    "length": state.step,
                    "trace": labels,
                    "matrix": state.exact.as_ref().map(IntMatrix::to_text),
                    "charpoly": charpoly,
                }),
            )?;
        }
        Command::Galois { matrix, family, primes, prime_floor } => {
            let m = IntMatrix::parse_text(&std::fs::read_to_string(matrix)?)?;
            let group = match family.to_ascii_lowercase().as_str() {
                "sl" => GroupSpec::sl(m.dim())?,
                "sp" if m.dim() % 2 == 0 => GroupSpec::sp(m.dim() / 2)?,
                _ => return Err(Error::config(format!("family {family:?} does not fit a {}x{} matrix", m.dim(), m.dim()))),
            };
            if !group.contains(&m) {
                return Err(Error::input(format!("matrix is not in {group}")));
            }
            let weyl = group.weyl();
            debug_assert_eq!(natural_dim(weyl), m.dim());
            let budget = PrimeBudget::new(*primes, prime_floor.unwrap_or(default_prime_floor(weyl)));
            let outcome = galois_certify(&m, weyl, budget, &mut substream(seed.unwrap_or(0), 0))?;
            write_json(&mut out, &serde_json::to_value(&outcome)?)?;
        }
        Command::Survey { walk, grid, trials, budget, summary, timing } => {
            let cfg = walk.build(seed)?;
            let spec = SurveySpec { grid: grid.clone(), trials: *trials, budget: budget_for(&cfg, *budget), timing: *timing };
            let result = survey(&cfg, &spec)?;
            match cli.format {
                Format::Json => result.write_jsonl(&mut out)?,
                Format::Csv => result.write_csv(&mut out)?,
            }
            if let Some(path) = summary {
                result.write_csv(BufWriter::new(File::create(path)?))?;
            }
            eprintln!("decay: {}", serde_json::to_string(&result.decay)?);
        }
        Command::Tau { walk, trials, n_max, budget } => {
            let cfg = walk.build(seed)?;
            let samples = estimate_tau(&cfg, *trials, *n_max, budget_for(&cfg, *budget))?;
            match cli.format {
                Format::Json => write_json(&mut out, &json!({"median": tau_median(&samples), "samples": samples}))?,
                Format::Csv => weylwalk::harness::survey::write_tau_csv(&samples, &mut out)?,
            }
        }
        Command::Equidist { group, q, sample } => {
            let population = sample.map_or(Population::Enumerate, Population::Sample);
            let report = run_census(*group, *q, population, seed.unwrap_or(0))?;
            match cli.format {
                Format::Json => write_json(&mut out, &serde_json::to_value(&report)?)?,
                Format::Csv => {
                    writeln!(out, "class,count,target,freq,freq_rs,deviation")?;
                    for c in &report.classes {
                        writeln!(out, "\"{}\",{},{},{},{},{}", c.class, c.count, c.target, c.freq, c.freq_rs, c.deviation)?;
                    }
                }
            }
        }
        Command::Chain { spec, grid, trials } => {
            let chain = ChainSpec::from_json(&std::fs::read_to_string(spec)?)?;
            let report = simulate_iota(&chain, grid, *trials, seed.unwrap_or(0))?;
            match cli.format {
                Format::Json => {
                    let xs: Vec<f64> = report.n.iter().map(|&n| n as f64).collect();
                    let fit = log_linear_fit(&xs, &report.empirical)
                        .map(|f| json!({"slope": f.slope, "r_squared": f.r_squared, "points": f.points}));
                    let mut value = serde_json::to_value(&report)?;
                    value["fit"] = fit.unwrap_or(serde_json::Value::Null);
                    write_json(&mut out, &value)?;
                }
                Format::Csv => report.write_csv(&mut out)?,
            }
        }
        Command::TorusDemo { n_max, trials } => {
            let mode = trials.map_or(TorusMode::ExactDp, |trials| TorusMode::MonteCarlo { trials });
            let rows = torus_demo(*n_max, mode, seed.unwrap_or(0))?;
            match cli.format {
                Format::Json => write_json(&mut out, &serde_json::to_value(&rows)?)?,
                Format::Csv => weylwalk::harness::torus::write_torus_csv(&rows, &mut out)?,
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("weylwalk: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
