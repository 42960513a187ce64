//! `symdom` — experiment drivers over the symdom library.
//!
//! Subcommands: `gram`, `eigen`, `kernel`, `project`, `converge`,
//! `localize`, `mapcheck`. Every run resolves a single configuration from
//! flags, an optional `--config` key=value file, and per-command defaults,
//! then emits one deterministic report (CSV or JSON) to stdout or `--out`.
//!
//! Exit codes: 0 pass, 1 usage/config error, 2 numeric tolerance breach,
//! 3 internal failure.

mod commands;
mod report;
mod sample;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::collections::BTreeMap;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure classes that map onto the exit-code contract.
pub enum Failure {
    /// Bad flags, bad config file, or parameters rejected by the library
    /// before any computation: exit 1.
    Config(String),
    /// Errors raised mid-computation or while writing output: exit 3.
    Internal(String),
}

impl Failure {
    pub fn config(msg: impl Into<String>) -> Self {
        Failure::Config(msg.into())
    }
    pub fn internal(msg: impl Into<String>) -> Self {
        Failure::Internal(msg.into())
    }
}

/// Library errors during parameter construction are configuration errors;
/// use `Failure::internal` manually for errors after validation.
impl From<symdom::Error> for Failure {
    fn from(e: symdom::Error) -> Self {
        Failure::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "symdom",
    version,
    about = "Orthogonal systems, kernels, and expansions on curved planar \
             domains and solids of revolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orthonormality: Gram-matrix deviations of the graded basis per degree
    Gram(CommonArgs),
    /// Spectral operator: eigen-residuals of every basis member per degree
    Eigen(CommonArgs),
    /// Kernel identity: closed form against the basis sum at random pairs
    Kernel(CommonArgs),
    /// Reproducing property: kernel projection returns members pointwise
    Project(CommonArgs),
    /// Expansion error decay for a built-in or tabulated target function
    Converge(CommonArgs),
    /// Localized-kernel decay profile in distance bins around a center
    Localize(CommonArgs),
    /// Coordinate bijection round-trip errors over seeded samples
    Mapcheck(CommonArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Gram(_) => "gram",
            Command::Eigen(_) => "eigen",
            Command::Kernel(_) => "kernel",
            Command::Project(_) => "project",
            Command::Converge(_) => "converge",
            Command::Localize(_) => "localize",
            Command::Mapcheck(_) => "mapcheck",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            Command::Gram(a)
            | Command::Eigen(a)
            | Command::Kernel(a)
            | Command::Project(a)
            | Command::Converge(a)
            | Command::Localize(a)
            | Command::Mapcheck(a) => a,
        }
    }
}

#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Domain shape a,b,c with 0 <= a < b and c >= 0 (default 0,1,1)
    #[arg(long)]
    domain: Option<String>,

    /// Ambient dimension: 2 (curved planar domain) or 3 (solid of
    /// revolution); default 2, except localize which is 3-D only
    #[arg(long)]
    dim: Option<String>,

    /// Weight exponents, either k1=..,k2=..,k3=.. or beta=..,gamma=..
    /// (defaults to zeros; missing keys within a family default to 0)
    #[arg(long)]
    weight: Option<String>,

    /// Largest polynomial degree (default 8; localize uses it as the
    /// kernel degree, default 16)
    #[arg(long)]
    nmax: Option<String>,

    /// Quadrature exactness degree (default 2*nmax + 4)
    #[arg(long = "quad-degree")]
    quad_degree: Option<String>,

    /// Seed for all random sampling (default 0)
    #[arg(long)]
    seed: Option<String>,

    /// Number of random samples: points (eigen/project), pairs (kernel),
    /// or round trips (mapcheck)
    #[arg(long)]
    samples: Option<String>,

    /// Output path; written atomically (default: stdout)
    #[arg(long)]
    out: Option<String>,

    /// Output format: csv or json (default csv)
    #[arg(long)]
    format: Option<String>,

    /// Plain key=value file supplying defaults for any long flag;
    /// explicit flags win
    #[arg(long)]
    config: Option<String>,

    /// Pass/fail tolerance on the command's deviation column
    /// (defaults are per command and dimension)
    #[arg(long)]
    tol: Option<String>,

    /// Target function for converge: builtin:expcos, builtin:poly,
    /// builtin:poly2, or table:PATH (rows "coords value" on the
    /// quadrature grid; see --dump-grid)
    #[arg(long)]
    f: Option<String>,

    /// Number of distance bins for localize (default 10)
    #[arg(long)]
    bins: Option<String>,

    /// Localization center x1,x2,t (default 0.12,0.08,0.55)
    #[arg(long)]
    center: Option<String>,

    /// Print the quadrature grid for this configuration instead of
    /// running, so a user function can be tabulated for --f table:PATH
    #[arg(long, default_value_t = false)]
    dump_grid: bool,
}

/// The weight family as written by the user, before the dimension fixes
/// its interpretation.
#[derive(Clone, Copy)]
pub enum WeightSpec {
    Kappa([f64; 3]),
    BetaGamma(f64, f64),
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A fully resolved run: flags merged over the config file, merged over
/// per-command defaults, with every numeric field parsed and validated.
pub struct Resolved {
    pub command: &'static str,
    pub domain: (f64, f64, f64),
    pub dim: u32,
    pub weight: WeightSpec,
    pub nmax: usize,
    pub quad_degree: usize,
    pub seed: u64,
    pub samples: usize,
    pub out: Option<String>,
    pub format: Format,
    pub tol: f64,
    pub f: String,
    pub bins: usize,
    pub center: [f64; 3],
    pub dump_grid: bool,
}

impl Resolved {
    /// The configuration echo embedded in JSON reports.
    pub fn echo(&self) -> serde_json::Value {
        let weight = match self.weight_for_dim() {
            Ok(WeightSpec::Kappa(k)) => serde_json::json!({ "kappa": k }),
            Ok(WeightSpec::BetaGamma(b, g)) => {
                serde_json::json!({ "beta": b, "gamma": g })
            }
            Err(_) => serde_json::Value::Null,
        };
        let mut echo = serde_json::json!({
            "command": self.command,
            "domain": [self.domain.0, self.domain.1, self.domain.2],
            "dim": self.dim,
            "weight": weight,
            "nmax": self.nmax,
            "quad_degree": self.quad_degree,
            "seed": self.seed,
            "samples": self.samples,
            "tol": self.tol,
            "format": match self.format { Format::Csv => "csv", Format::Json => "json" },
        });
        let obj = echo.as_object_mut().unwrap();
        if self.command == "converge" {
            obj.insert("f".into(), serde_json::json!(self.f));
        }
        if self.command == "localize" {
            obj.insert("bins".into(), serde_json::json!(self.bins));
            obj.insert("center".into(), serde_json::json!(self.center));
        }
        echo
    }

    /// The weight spec normalized for the resolved dimension: planar runs
    /// use the exponent triple (beta/gamma meaning kappa = [0, beta,
    /// gamma]); solid runs use the axis pair (a kappa triple is accepted
    /// when k1 = 0 and maps to beta = k2, gamma = k3).
    pub fn weight_for_dim(&self) -> Result<WeightSpec, Failure> {
        match (self.dim, self.weight) {
            (2, WeightSpec::Kappa(k)) => Ok(WeightSpec::Kappa(k)),
            (2, WeightSpec::BetaGamma(b, g)) => Ok(WeightSpec::Kappa([0.0, b, g])),
            (3, WeightSpec::BetaGamma(b, g)) => Ok(WeightSpec::BetaGamma(b, g)),
            (3, WeightSpec::Kappa([k1, k2, k3])) => {
                if k1 != 0.0 {
                    return Err(Failure::config(format!(
                        "the 3-D weight family has no k1 exponent; it needs \
                         k1 = 0 (got k1 = {k1}), or use beta=..,gamma=.."
                    )));
                }
                Ok(WeightSpec::BetaGamma(k2, k3))
            }
            (d, _) => Err(Failure::config(format!("--dim must be 2 or 3, got {d}"))),
        }
    }
}

fn parse_f64(what: &str, s: &str) -> Result<f64, Failure> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Failure::config(format!("{what}: expected a number, got {s:?}")))
}

fn parse_usize(what: &str, s: &str) -> Result<usize, Failure> {
    s.trim()
        .parse::<usize>()
        .map_err(|_| Failure::config(format!("{what}: expected a nonnegative integer, got {s:?}")))
}

fn parse_domain(s: &str) -> Result<(f64, f64, f64), Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::config(format!(
            "--domain expects a,b,c (three comma-separated numbers), got {s:?}"
        )));
    }
    Ok((
        parse_f64("--domain a", parts[0])?,
        parse_f64("--domain b", parts[1])?,
        parse_f64("--domain c", parts[2])?,
    ))
}

fn parse_weight(s: &str) -> Result<WeightSpec, Failure> {
    let mut kappa: [Option<f64>; 3] = [None; 3];
    let mut beta = None;
    let mut gamma = None;
    for part in s.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (key, value) = part.split_once('=').ok_or_else(|| {
            Failure::config(format!("--weight entries are key=value, got {part:?}"))
        })?;
        let value = parse_f64(&format!("--weight {key}"), value)?;
        match key.trim() {
            "k1" => kappa[0] = Some(value),
            "k2" => kappa[1] = Some(value),
            "k3" => kappa[2] = Some(value),
            "beta" => beta = Some(value),
            "gamma" => gamma = Some(value),
            other => {
                return Err(Failure::config(format!(
                    "--weight keys are k1,k2,k3 or beta,gamma; got {other:?}"
                )))
            }
        }
    }
    let has_kappa = kappa.iter().any(Option::is_some);
    let has_axis = beta.is_some() || gamma.is_some();
    match (has_kappa, has_axis) {
        (true, true) => Err(Failure::config(
            "--weight mixes the k1,k2,k3 family with beta,gamma; pick one",
        )),
        (true, false) => Ok(WeightSpec::Kappa([
            kappa[0].unwrap_or(0.0),
            kappa[1].unwrap_or(0.0),
            kappa[2].unwrap_or(0.0),
        ])),
        _ => Ok(WeightSpec::BetaGamma(beta.unwrap_or(0.0), gamma.unwrap_or(0.0))),
    }
}

fn parse_center(s: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(Failure::config(format!(
            "--center expects x1,x2,t (three comma-separated numbers), got {s:?}"
        )));
    }
    Ok([
        parse_f64("--center x1", parts[0])?,
        parse_f64("--center x2", parts[1])?,
        parse_f64("--center t", parts[2])?,
    ])
}

/// Reads a plain key=value file. Keys are the long flag names; `#` starts a
/// comment line.
fn read_config_file(path: &str) -> Result<BTreeMap<String, String>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::config(format!("cannot read --config {path}: {e}")))?;
    let known = [
        "domain", "dim", "weight", "nmax", "quad-degree", "seed", "samples", "out", "format",
        "tol", "f", "bins", "center",
    ];
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::config(format!(
                "{path}:{}: expected key=value, got {line:?}",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        if !known.contains(&key) {
            return Err(Failure::config(format!(
                "{path}:{}: unknown key {key:?} (known: {})",
                lineno + 1,
                known.join(", ")
            )));
        }
        map.insert(key.to_string(), value.trim().to_string());
    }
    Ok(map)
}

fn resolve(command: &Command) -> Result<Resolved, Failure> {
    let args = command.args();
    let name = command.name();
    let file = match &args.config {
        Some(path) => read_config_file(path)?,
        None => BTreeMap::new(),
    };
    // Explicit flag, else config-file value, else None.
    let pick = |flag: &Option<String>, key: &str| -> Option<String> {
        flag.clone().or_else(|| file.get(key).cloned())
    };

    let domain = match pick(&args.domain, "domain") {
        Some(s) => parse_domain(&s)?,
        None => (0.0, 1.0, 1.0),
    };
    let dim = match pick(&args.dim, "dim") {
        Some(s) => {
            let d = parse_usize("--dim", &s)? as u32;
            if d != 2 && d != 3 {
                return Err(Failure::config(format!("--dim must be 2 or 3, got {d}")));
            }
            d
        }
        None => {
            if name == "localize" {
                3
            } else {
                2
            }
        }
    };
    let weight = match pick(&args.weight, "weight") {
        Some(s) => parse_weight(&s)?,
        None => WeightSpec::BetaGamma(0.0, 0.0),
    };
    let nmax = match pick(&args.nmax, "nmax") {
        Some(s) => parse_usize("--nmax", &s)?,
        None => {
            if name == "localize" {
                16
            } else {
                8
            }
        }
    };
    let quad_degree = match pick(&args.quad_degree, "quad-degree") {
        Some(s) => parse_usize("--quad-degree", &s)?,
        None => 2 * nmax + 4,
    };
    let seed = match pick(&args.seed, "seed") {
        Some(s) => s
            .trim()
            .parse::<u64>()
            .map_err(|_| Failure::config(format!("--seed: expected a 64-bit integer, got {s:?}")))?,
        None => 0,
    };
    let samples = match pick(&args.samples, "samples") {
        Some(s) => {
            let m = parse_usize("--samples", &s)?;
            if m == 0 {
                return Err(Failure::config("--samples must be at least 1"));
            }
            m
        }
        None => match name {
            "mapcheck" => 1000,
            "eigen" => 25,
            "kernel" => 20,
            "project" => 5,
            _ => 20,
        },
    };
    let out = pick(&args.out, "out");
    let format = match pick(&args.format, "format") {
        Some(s) => match s.trim() {
            "csv" => Format::Csv,
            "json" => Format::Json,
            other => {
                return Err(Failure::config(format!(
                    "--format must be csv or json, got {other:?}"
                )))
            }
        },
        None => Format::Csv,
    };
    let tol = match pick(&args.tol, "tol") {
        Some(s) => {
            let t = parse_f64("--tol", &s)?;
            if !(t > 0.0) {
                return Err(Failure::config("--tol must be positive"));
            }
            t
        }
        None => match (name, dim) {
            ("gram", 2) => 1e-9,
            ("gram", 3) => 1e-8,
            ("eigen", 2) => 1e-8,
            ("eigen", 3) => 1e-7,
            ("kernel", _) | ("project", _) => 1e-8,
            ("mapcheck", _) => 1e-13,
            // converge: strict decrease is always required; a finite tol
            // additionally bounds the final error. infinity = no bound.
            ("converge", _) => f64::INFINITY,
            // localize: minimum first-to-last bin drop factor.
            ("localize", _) => 100.0,
            _ => 1e-8,
        },
    };
    let f = pick(&args.f, "f").unwrap_or_else(|| "builtin:expcos".to_string());
    let bins = match pick(&args.bins, "bins") {
        Some(s) => {
            let b = parse_usize("--bins", &s)?;
            if b == 0 {
                return Err(Failure::config("--bins must be at least 1"));
            }
            b
        }
        None => 10,
    };
    let center = match pick(&args.center, "center") {
        Some(s) => parse_center(&s)?,
        None => [0.12, 0.08, 0.55],
    };

    Ok(Resolved {
        command: name,
        domain,
        dim,
        weight,
        nmax,
        quad_degree,
        seed,
        samples,
        out,
        format,
        tol,
        f,
        bins,
        center,
        dump_grid: args.dump_grid,
    })
}

/// Honors SYMDOM_THREADS as a cap on the worker pool. Unset or empty means
/// the library default; anything unparseable is a configuration error.
fn init_threads() -> Result<(), Failure> {
    match std::env::var("SYMDOM_THREADS") {
        Err(_) => Ok(()),
        Ok(v) if v.trim().is_empty() => Ok(()),
        Ok(v) => {
            let n: usize = v.trim().parse().map_err(|_| {
                Failure::config(format!(
                    "SYMDOM_THREADS: expected a positive integer, got {v:?}"
                ))
            })?;
            if n == 0 {
                return Err(Failure::config(
                    "SYMDOM_THREADS: expected a positive integer, got 0",
                ));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| Failure::internal(format!("thread pool: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<bool, Failure> {
    init_threads()?;
    let resolved = resolve(&cli.command)?;
    let (rep, pass) = match resolved.command {
        "gram" => commands::cmd_gram(&resolved)?,
        "eigen" => commands::cmd_eigen(&resolved)?,
        "kernel" => commands::cmd_kernel(&resolved)?,
        "project" => commands::cmd_project(&resolved)?,
        "converge" => commands::cmd_converge(&resolved)?,
        "localize" => commands::cmd_localize(&resolved)?,
        "mapcheck" => commands::cmd_mapcheck(&resolved)?,
        other => return Err(Failure::internal(format!("unroutable command {other}"))),
    };
    let text = match resolved.format {
        Format::Csv => rep.to_csv(),
        Format::Json => rep.to_json(&resolved, pass),
    };
    report::emit(&text, resolved.out.as_deref())?;
    Ok(pass)
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 2,
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            3
        }
    };
    std::process::exit(code);
}
