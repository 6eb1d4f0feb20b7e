mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use x0gon::arith::{genus_x0, is_prime, primes_up_to, Level};
use x0gon::cache::Cache;
use x0gon::classify::{analyze_space, AnalyzeOptions, LevelReport, VerificationSummary, MAX_VERIFY_LEVEL};
use x0gon::modsym::{build_space, ModularSymbolSpace};
use x0gon::pointcount::{count_points_in, CountRequest};

use render::Format;

#[derive(Parser)]
#[command(name = "x0gon", version, about = "Genera, point counts and gonality bounds for X0(N) and its Atkin-Lehner quotients")]
struct Cli {
    /// Output format
    #[arg(long, value_enum, global = true, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Directory for cached operator matrices
    #[arg(long, global = true, env = "X0GON_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Worker threads for sweeps
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Genus of X0(N), or of its quotient by the Atkin-Lehner keys
    Genus {
        n: u64,
        #[arg(long, value_delimiter = ',')]
        keys: Vec<u64>,
    },
    /// Number of points over F_{p^r}
    Count {
        n: u64,
        #[arg(long, value_delimiter = ',')]
        keys: Vec<u64>,
        #[arg(short = 'p')]
        p: u64,
        #[arg(short = 'r', default_value_t = 1)]
        r: u32,
    },
    /// Gonality report for X0+(N)
    Analyze {
        n: u64,
        #[command(flatten)]
        opts: ClassifyFlags,
    },
    /// Reports for a range of levels, e.g. 2..300
    Sweep {
        range: String,
        #[command(flatten)]
        opts: ClassifyFlags,
    },
    /// Compare a range of reports with the reference classification
    VerifyPaper {
        range: String,
        #[command(flatten)]
        opts: ClassifyFlags,
    },
    /// Inspect or clear the operator cache
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    Inspect,
    Clear,
}

#[derive(Args)]
struct ClassifyFlags {
    /// Use external certificates (default)
    #[arg(long, overrides_with = "no_certificates")]
    certificates: bool,
    /// Ignore external certificates
    #[arg(long, overrides_with = "certificates")]
    no_certificates: bool,
    /// Primes for point counts and Ogg's bound (default: all p <= 13)
    #[arg(long, value_delimiter = ',')]
    prime_budget: Option<Vec<u64>>,
}

impl ClassifyFlags {
    fn options(&self) -> Result<AnalyzeOptions, String> {
        let prime_budget = match &self.prime_budget {
            Some(ps) => {
                if let Some(p) = ps.iter().find(|&&p| !is_prime(p)) {
                    return Err(format!("prime budget entry {p} is not prime"));
                }
                ps.clone()
            }
            None => primes_up_to(x0gon::classify::DEFAULT_PRIME_BOUND),
        };
        Ok(AnalyzeOptions {
            use_certificates: !self.no_certificates || self.certificates,
            prime_budget,
        })
    }
}

enum Failure {
    Usage(String),
    Contradiction(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Contradiction(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Internal(e.to_string())
}

fn parse_range(s: &str) -> Result<(u64, u64), Failure> {
    let (a, b) = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'))
        .ok_or_else(|| usage(format!("range {s:?} must look like MIN..MAX")))?;
    let parse = |t: &str| t.trim().parse::<u64>().map_err(|_| usage(format!("bad range bound {t:?}")));
    let (a, b) = (parse(a)?, parse(b)?);
    if a < 2 || a > b || b > MAX_VERIFY_LEVEL {
        return Err(usage(format!("range must satisfy 2 <= MIN <= MAX <= {MAX_VERIFY_LEVEL}")));
    }
    Ok((a, b))
}

fn level(n: u64) -> Result<Level, Failure> {
    Level::new(n).map_err(usage)
}

struct Runner {
    cache: Option<Cache>,
}

impl Runner {
    fn space(&self, level: &Level) -> ModularSymbolSpace {
        match &self.cache {
            Some(c) => c.load_space(level).0,
            None => build_space(level),
        }
    }

    fn save(&self, space: &ModularSymbolSpace) -> Result<(), Failure> {
        if let Some(c) = &self.cache {
            c.store(space).map_err(internal)?;
        }
        Ok(())
    }

    fn analyze(&self, n: u64, options: &AnalyzeOptions) -> Result<LevelReport, Failure> {
        let space = self.space(&level(n)?);
        let report = analyze_space(&space, options).map_err(internal)?;
        self.save(&space)?;
        Ok(report)
    }

    fn analyze_range(&self, min: u64, max: u64, options: &AnalyzeOptions, jobs: usize) -> Result<Vec<LevelReport>, Failure> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(internal)?;
        pool.install(|| {
            (min..=max)
                .into_par_iter()
                .map(|n| {
                    let r = self.analyze(n, options);
                    if let Ok(r) = &r {
                        eprintln!("N = {n}: {}", r.verdict.as_str());
                    }
                    r
                })
                .collect()
        })
    }
}

fn run(cli: Cli) -> Result<String, Failure> {
    let format = match cli.format {
        OutputFormat::Json => Format::Json,
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Text => Format::Text,
    };
    let runner = Runner {
        cache: cli.cache_dir.clone().map(Cache::new),
    };
    let jobs = cli.jobs as usize;
    match cli.command {
        Command::Genus { n, keys } => {
            let l = level(n)?;
            let genus = if keys.is_empty() {
                genus_x0(&l).map_err(usage)?
            } else {
                let keys = keys
                    .iter()
                    .map(|&q| x0gon::modsym::AtkinLehnerKey::new(&l, q))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(usage)?;
                let space = runner.space(&l);
                let g = space.quotient_genus(&keys).map_err(usage)?;
                runner.save(&space)?;
                g
            };
            Ok(render::genus(format, n, &keys, genus))
        }
        Command::Count { n, keys, p, r } => {
            let l = level(n)?;
            let req = CountRequest::new(&l, &keys, p, r).map_err(usage)?;
            let space = runner.space(&l);
            let count = count_points_in(&space, &req).map_err(internal)?;
            runner.save(&space)?;
            Ok(render::count(format, n, &keys, p, r, count))
        }
        Command::Analyze { n, opts } => {
            let options = opts.options().map_err(usage)?;
            if n < 2 {
                return Err(usage("level must be at least 2"));
            }
            let report = runner.analyze(n, &options)?;
            Ok(render::report(format, &report))
        }
        Command::Sweep { range, opts } => {
            let (min, max) = parse_range(&range)?;
            let options = opts.options().map_err(usage)?;
            let reports = runner.analyze_range(min, max, &options, jobs)?;
            let summary = VerificationSummary::from_reports(&reports);
            Ok(render::sweep(format, &reports, &summary))
        }
        Command::VerifyPaper { range, opts } => {
            let (min, max) = parse_range(&range)?;
            let options = opts.options().map_err(usage)?;
            let reports = runner.analyze_range(min, max, &options, jobs)?;
            let summary = VerificationSummary::from_reports(&reports);
            let out = render::verification(format, &reports, &summary);
            if summary.is_clean() {
                Ok(out)
            } else {
                print!("{out}");
                Err(Failure::Contradiction(format!(
                    "unexpected contradictions at N = {:?}",
                    summary.unexpected_contradictions()
                )))
            }
        }
        Command::Cache { action } => {
            let cache = runner
                .cache
                .as_ref()
                .ok_or_else(|| usage("no cache directory: pass --cache-dir or set X0GON_CACHE_DIR"))?;
            match action {
                CacheAction::Inspect => Ok(render::cache_entries(format, cache.dir(), &cache.entries().map_err(internal)?)),
                CacheAction::Clear => {
                    let removed = cache.clear().map_err(internal)?;
                    Ok(format!("removed {removed} cache entries\n"))
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let (Failure::Usage(m) | Failure::Contradiction(m) | Failure::Internal(m)) = &f;
            eprintln!("error: {m}");
            ExitCode::from(f.code())
        }
    }
}
