//! Flag catalog, config-file merge and validation.
//!
//! Every parameter is a `--name value` flag and may also appear as
//! `name = value` in the file given by `--config`. Flags win over the file,
//! the file wins over built-in defaults.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::PathBuf;

use analog_search::output::{Destination, Format};
use analog_search::regions::DEFAULT_PRIOR_RATIO;
use clap::{Arg, ArgMatches, Command};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CommandKind {
    Curve,
    Maxfid,
    Delta,
    Discrim,
    Bound,
    VerifyProof,
    Regions,
    Table1,
    Prior,
    Crossing,
}

impl CommandKind {
    pub const ALL: [CommandKind; 10] = [
        CommandKind::Curve,
        CommandKind::Maxfid,
        CommandKind::Delta,
        CommandKind::Discrim,
        CommandKind::Bound,
        CommandKind::VerifyProof,
        CommandKind::Regions,
        CommandKind::Table1,
        CommandKind::Prior,
        CommandKind::Crossing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Curve => "curve",
            CommandKind::Maxfid => "maxfid",
            CommandKind::Delta => "delta",
            CommandKind::Discrim => "discrim",
            CommandKind::Bound => "bound",
            CommandKind::VerifyProof => "verify-proof",
            CommandKind::Regions => "regions",
            CommandKind::Table1 => "table1",
            CommandKind::Prior => "prior",
            CommandKind::Crossing => "crossing",
        }
    }

    fn about(self) -> &'static str {
        match self {
            CommandKind::Curve => "Transition probability of both algorithms over time",
            CommandKind::Maxfid => "Peak probability, peak time and period of the modified algorithm",
            CommandKind::Delta => "Imperfection angle and fidelity deficit",
            CommandKind::Discrim => "Fidelity deficit and minimum discrimination error against the angle",
            CommandKind::Bound => "Distance-sum growth bound on a time grid up to the peak",
            CommandKind::VerifyProof => "Growth, terminal and chained lower-bound checks over (N, gamma)",
            CommandKind::Regions => "Region masks over an (x, gamma) grid",
            CommandKind::Table1 => "Comparison table of angle, fidelity, error and times",
            CommandKind::Prior => "Probability that the overlap exceeds x-bar under a sphere prior",
            CommandKind::Crossing => "First time each curve reaches a threshold",
        }
    }

    fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

struct Param {
    name: &'static str,
    default: Option<&'static str>,
    help: &'static str,
}

const fn p(name: &'static str, default: Option<&'static str>, help: &'static str) -> Param {
    Param { name, default, help }
}

const UNITS: [Param; 3] = [
    p("energy", Some("1"), "Marked-state energy E > 0"),
    p("hbar", None, "Reduced Planck constant (excludes --h)"),
    p("h", None, "Planck constant h = 2*pi*hbar (default 1; excludes --hbar)"),
];

fn params(kind: CommandKind) -> Vec<Param> {
    use CommandKind::*;
    let mut v = vec![
        p("format", Some("csv"), "Output format: csv or json"),
        p("output", None, "Output file (default stdout)"),
        p("threads", None, "Worker threads >= 1 (default: available parallelism)"),
    ];
    let point = [
        p("x", Some("0.8"), "Overlap x in (0, 1]"),
        p("gamma", Some("1.1"), "Driving ratio gamma >= 1"),
    ];
    match kind {
        Curve => {
            v.extend(point);
            v.extend(UNITS);
            v.push(p("points", Some("201"), "Number of time samples >= 2"));
            v.push(p("t-max", None, "Last time sample (default one period of the modified curve)"));
        }
        Maxfid => {
            v.extend(point);
            v.extend(UNITS);
        }
        Delta => v.extend(point),
        Discrim => {
            v.push(p("alpha", None, "Prior asymmetry alpha > 0 (default 100; excludes --p-w)"));
            v.push(p("p-w", None, "Prior of the exact target in (0, 1) (excludes --alpha)"));
            v.push(p("points", Some("1000"), "Number of angles on [0, pi/2], >= 2"));
        }
        Bound => {
            v.push(p("n", Some("16"), "Hilbert-space dimension 4 <= N <= 4096"));
            v.push(p("gamma", Some("1.1"), "Driving ratio gamma >= 1"));
            v.extend(UNITS);
            v.push(p("points", Some("50"), "Time samples from 0 to the peak time, >= 2"));
        }
        VerifyProof => {
            v.push(p("n", Some("4,8,16,64"), "Comma-separated dimensions, each 4..=4096"));
            v.push(p("gamma", Some("1,1.05,1.1"), "Comma-separated driving ratios, each >= 1"));
            v.extend(UNITS);
            v.push(p("points", Some("50"), "Time samples per case for the growth check, >= 2"));
        }
        Regions => {
            v.push(p("nx", Some(GRID), "Number of x midpoints >= 1"));
            v.push(p("ngamma", Some(GRID), "Number of gamma samples >= 1"));
            v.push(p("gamma-max", Some(GAMMA_MAX), "Upper end of the gamma axis"));
            v.push(p("threshold", Some(THRESHOLD), "Peak-probability threshold in [0, 1)"));
            v.push(p("alpha", Some(ALPHA), "Prior asymmetry alpha > 0"));
        }
        Table1 => {
            v.push(p("x", Some(TABLE_X), "Comma-separated overlaps, each in (0, 1)"));
            v.push(p("gamma", Some("1.1"), "Driving ratio gamma >= 1"));
            v.push(p("alpha", Some(ALPHA), "Prior asymmetry alpha > 0"));
            v.extend(UNITS);
        }
        Prior => {
            v.push(p("kind", Some("damped-gaussian"), "damped-gaussian or uniform"));
            v.push(p("dim", Some("16"), "Hilbert-space dimension N >= 2"));
            v.push(p("sigma-sq", Some("1,0.1,0.01"), "Comma-separated variances > 0 (damped-gaussian only)"));
            v.push(p("xbar", Some("0.95"), "Comma-separated overlap thresholds in (0, 1)"));
        }
        Crossing => {
            v.extend(point);
            v.extend(UNITS);
            v.push(p(
                "threshold",
                Some("0.9,pmax"),
                "Comma-separated thresholds in [0, 1]; 'pmax' means the modified peak",
            ));
        }
    }
    v
}

// Defaults shared with the core crate, spelled as flag text.
const GRID: &str = "512";
const GAMMA_MAX: &str = "10";
const THRESHOLD: &str = "0.995";
const ALPHA: &str = "100";
const TABLE_X: &str = "0.65,0.7,0.75,0.8,0.85,0.9,0.95";

#[derive(Debug, Clone, PartialEq)]
pub enum Threshold {
    Value(f64),
    PeakProbability,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PriorChoice {
    Uniform,
    DampedGaussian { sigma_sq: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Prior {
    Alpha(f64),
    PW(f64),
}

/// Validated, typed parameters of one command.
#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Curve { x: f64, gamma: f64, energy: f64, hbar: f64, points: usize, t_max: Option<f64> },
    Maxfid { x: f64, gamma: f64, energy: f64, hbar: f64 },
    Delta { x: f64, gamma: f64 },
    Discrim { prior: Prior, points: usize },
    Bound { n: usize, gamma: f64, energy: f64, hbar: f64, points: usize },
    VerifyProof { n: Vec<usize>, gamma: Vec<f64>, energy: f64, hbar: f64, points: usize },
    Regions { nx: usize, ngamma: usize, gamma_max: f64, threshold: f64, alpha: f64 },
    Table1 { x: Vec<f64>, gamma: f64, alpha: f64, energy: f64, hbar: f64 },
    Prior { dim: u32, choice: PriorChoice, xbar: Vec<f64> },
    Crossing { x: f64, gamma: f64, energy: f64, hbar: f64, thresholds: Vec<Threshold> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CommandKind,
    /// Resolved parameter text after defaults, file and flags, for metadata.
    pub parameters: BTreeMap<String, String>,
    pub params: Params,
    pub format: Format,
    pub destination: Destination,
    /// Worker count; results do not depend on it.
    pub threads: usize,
}

fn cli() -> Command {
    let mut root = Command::new("analog-search-lab")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Numerical lab for analog quantum search with a tunable driving term")
        .subcommand_required(true)
        .arg_required_else_help(true);
    for kind in CommandKind::ALL {
        let mut sub = Command::new(kind.name()).about(kind.about()).arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .help("Flat key=value file; flags override its entries"),
        );
        for param in params(kind) {
            let mut help = param.help.to_string();
            if let Some(d) = param.default {
                help.push_str(&format!(" [default: {d}]"));
            }
            sub = sub.arg(
                Arg::new(param.name)
                    .long(param.name)
                    .value_name("VALUE")
                    .allow_hyphen_values(true)
                    .help(help),
            );
        }
        root = root.subcommand(sub);
    }
    root
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read_config_file(path: &str, kind: CommandKind) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config file {path}: {e}")))?;
    let known: Vec<&str> = params(kind).iter().map(|p| p.name).collect();
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("{path}:{}: expected key=value", lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if !known.contains(&key) {
            return Err(usage(format!(
                "{path}:{}: unknown key '{key}' for {}",
                lineno + 1,
                kind.name()
            )));
        }
        if map.insert(key.to_string(), value.to_string()).is_some() {
            return Err(usage(format!("{path}:{}: duplicate key '{key}'", lineno + 1)));
        }
    }
    Ok(map)
}

/// Parses argv (program name first) into a validated configuration.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let matches = cli().try_get_matches_from(argv).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Help(e.render().to_string())
        }
        _ => usage(e.render().to_string().trim_end().to_string()),
    })?;
    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let kind = CommandKind::from_name(name).expect("registered subcommand");
    resolve(kind, sub)
}

fn resolve(kind: CommandKind, sub: &ArgMatches) -> Result<RunConfig, CliError> {
    let catalog = params(kind);
    let file = match sub.get_one::<String>("config") {
        Some(path) => read_config_file(path, kind)?,
        None => BTreeMap::new(),
    };
    let flags: BTreeMap<String, String> = catalog
        .iter()
        .filter_map(|p| sub.get_one::<String>(p.name).map(|v| (p.name.to_string(), v.clone())))
        .collect();

    for (a, b) in [("hbar", "h"), ("alpha", "p-w")] {
        for (source, map) in [("flags", &flags), ("config file", &file)] {
            if map.contains_key(a) && map.contains_key(b) {
                return Err(usage(format!("--{a} and --{b} are mutually exclusive ({source})")));
            }
        }
    }

    let mut merged: BTreeMap<String, String> = catalog
        .iter()
        .filter_map(|p| p.default.map(|d| (p.name.to_string(), d.to_string())))
        .collect();
    // A flag for either member of a pair overrides the file's choice of the other.
    let flag_has = |k: &str| flags.contains_key(k);
    for (k, v) in &file {
        let partner = match k.as_str() {
            "hbar" => Some("h"),
            "h" => Some("hbar"),
            "alpha" => Some("p-w"),
            "p-w" => Some("alpha"),
            _ => None,
        };
        if partner.is_some_and(flag_has) {
            continue;
        }
        merged.insert(k.clone(), v.clone());
    }
    merged.extend(flags);

    let params = Resolver { map: &merged }.build(kind)?;
    let format = match merged.get("format").map(String::as_str) {
        Some("csv") => Format::Csv,
        Some("json") => Format::Json,
        other => {
            return Err(usage(format!(
                "invalid --format: must be csv or json (got {})",
                other.unwrap_or("")
            )))
        }
    };
    let destination = match merged.get("output") {
        Some(p) if !p.is_empty() => Destination::File(PathBuf::from(p)),
        _ => Destination::Stdout,
    };

    let threads = match merged.get("threads") {
        Some(_) => Resolver { map: &merged }.count("threads", "threads >= 1", |n| n >= 1)?,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };

    let mut parameters = merged.clone();
    parameters.remove("output");
    parameters.remove("threads");
    if let Some(hbar) = params.hbar() {
        parameters.remove("h");
        parameters.insert("hbar".into(), hbar.to_string());
    }
    Ok(RunConfig {
        command: kind,
        parameters,
        params,
        format,
        destination,
        threads,
    })
}

impl Params {
    pub fn hbar(&self) -> Option<f64> {
        match *self {
            Params::Curve { hbar, .. }
            | Params::Maxfid { hbar, .. }
            | Params::Bound { hbar, .. }
            | Params::VerifyProof { hbar, .. }
            | Params::Table1 { hbar, .. }
            | Params::Crossing { hbar, .. } => Some(hbar),
            _ => None,
        }
    }
}

struct Resolver<'a> {
    map: &'a BTreeMap<String, String>,
}

fn bad(name: &str, constraint: &str, got: &str) -> CliError {
    usage(format!("invalid --{name}: must satisfy {constraint} (got {got})"))
}

impl Resolver<'_> {
    fn raw(&self, name: &str) -> Option<&str> {
        self.map.get(name).map(String::as_str)
    }

    fn real(&self, name: &str, constraint: &str, ok: impl Fn(f64) -> bool) -> Result<f64, CliError> {
        let text = self.raw(name).unwrap_or("");
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() && ok(v) => Ok(v),
            _ => Err(bad(name, constraint, text)),
        }
    }

    fn reals(&self, name: &str, constraint: &str, ok: impl Fn(f64) -> bool) -> Result<Vec<f64>, CliError> {
        let text = self.raw(name).unwrap_or("");
        let parsed: Result<Vec<f64>, _> = text
            .split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() && ok(v) => Ok(v),
                _ => Err(bad(name, constraint, text)),
            })
            .collect();
        parsed
    }

    fn count(&self, name: &str, constraint: &str, ok: impl Fn(usize) -> bool) -> Result<usize, CliError> {
        let text = self.raw(name).unwrap_or("");
        match text.parse::<usize>() {
            Ok(v) if ok(v) => Ok(v),
            _ => Err(bad(name, constraint, text)),
        }
    }

    fn overlap(&self) -> Result<f64, CliError> {
        self.real("x", "0 < x <= 1", |x| x > 0.0 && x <= 1.0)
    }

    fn gamma(&self) -> Result<f64, CliError> {
        self.real("gamma", "gamma >= 1", |g| g >= 1.0)
    }

    fn alpha(&self) -> Result<f64, CliError> {
        self.real("alpha", "alpha > 0", |a| a > 0.0)
    }

    fn units(&self) -> Result<(f64, f64), CliError> {
        let energy = self.real("energy", "energy > 0", |e| e > 0.0)?;
        let hbar = if self.raw("hbar").is_some() {
            self.real("hbar", "hbar > 0", |v| v > 0.0)?
        } else if self.raw("h").is_some() {
            self.real("h", "h > 0", |v| v > 0.0)? / TAU
        } else {
            1.0 / TAU
        };
        Ok((energy, hbar))
    }

    fn build(&self, kind: CommandKind) -> Result<Params, CliError> {
        Ok(match kind {
            CommandKind::Curve => {
                let (energy, hbar) = self.units()?;
                Params::Curve {
                    x: self.overlap()?,
                    gamma: self.gamma()?,
                    energy,
                    hbar,
                    points: self.count("points", "points >= 2", |n| n >= 2)?,
                    t_max: match self.raw("t-max") {
                        Some(_) => Some(self.real("t-max", "t-max > 0", |t| t > 0.0)?),
                        None => None,
                    },
                }
            }
            CommandKind::Maxfid => {
                let (energy, hbar) = self.units()?;
                Params::Maxfid {
                    x: self.overlap()?,
                    gamma: self.gamma()?,
                    energy,
                    hbar,
                }
            }
            CommandKind::Delta => Params::Delta {
                x: self.overlap()?,
                gamma: self.gamma()?,
            },
            CommandKind::Discrim => Params::Discrim {
                prior: if self.raw("p-w").is_some() {
                    Prior::PW(self.real("p-w", "0 < p-w < 1", |v| v > 0.0 && v < 1.0)?)
                } else if self.raw("alpha").is_some() {
                    Prior::Alpha(self.alpha()?)
                } else {
                    Prior::Alpha(DEFAULT_PRIOR_RATIO)
                },
                points: self.count("points", "points >= 2", |n| n >= 2)?,
            },
            CommandKind::Bound => {
                let (energy, hbar) = self.units()?;
                Params::Bound {
                    n: self.count("n", "4 <= N <= 4096", valid_dim)?,
                    gamma: self.gamma()?,
                    energy,
                    hbar,
                    points: self.count("points", "points >= 2", |n| n >= 2)?,
                }
            }
            CommandKind::VerifyProof => {
                let (energy, hbar) = self.units()?;
                let text = self.raw("n").unwrap_or("");
                let n = text
                    .split(',')
                    .map(|s| match s.trim().parse::<usize>() {
                        Ok(v) if valid_dim(v) => Ok(v),
                        _ => Err(bad("n", "each 4 <= N <= 4096", text)),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Params::VerifyProof {
                    n,
                    gamma: self.reals("gamma", "each gamma >= 1", |g| g >= 1.0)?,
                    energy,
                    hbar,
                    points: self.count("points", "points >= 2", |n| n >= 2)?,
                }
            }
            CommandKind::Regions => {
                let ngamma = self.count("ngamma", "ngamma >= 1", |n| n >= 1)?;
                let gamma_max = if ngamma > 1 {
                    self.real("gamma-max", "gamma-max > 1", |g| g > 1.0)?
                } else {
                    self.real("gamma-max", "gamma-max >= 1", |g| g >= 1.0)?
                };
                Params::Regions {
                    nx: self.count("nx", "nx >= 1", |n| n >= 1)?,
                    ngamma,
                    gamma_max,
                    threshold: self.real("threshold", "0 <= threshold < 1", |t| (0.0..1.0).contains(&t))?,
                    alpha: self.alpha()?,
                }
            }
            CommandKind::Table1 => {
                let (energy, hbar) = self.units()?;
                Params::Table1 {
                    x: self.reals("x", "each 0 < x < 1", |x| x > 0.0 && x < 1.0)?,
                    gamma: self.gamma()?,
                    alpha: self.alpha()?,
                    energy,
                    hbar,
                }
            }
            CommandKind::Prior => {
                let dim = self.count("dim", "N >= 2", |n| (2..=u32::MAX as usize / 2).contains(&n))? as u32;
                let choice = match self.raw("kind").unwrap_or("") {
                    "uniform" => PriorChoice::Uniform,
                    "damped-gaussian" => PriorChoice::DampedGaussian {
                        sigma_sq: self.reals("sigma-sq", "each sigma-sq > 0", |s| s > 0.0)?,
                    },
                    other => return Err(bad("kind", "damped-gaussian or uniform", other)),
                };
                Params::Prior {
                    dim,
                    choice,
                    xbar: self.reals("xbar", "each 0 < xbar < 1", |x| x > 0.0 && x < 1.0)?,
                }
            }
            CommandKind::Crossing => {
                let (energy, hbar) = self.units()?;
                let text = self.raw("threshold").unwrap_or("");
                let thresholds = text
                    .split(',')
                    .map(|s| match s.trim() {
                        "pmax" => Ok(Threshold::PeakProbability),
                        t => match t.parse::<f64>() {
                            Ok(v) if (0.0..=1.0).contains(&v) => Ok(Threshold::Value(v)),
                            _ => Err(bad("threshold", "each in [0, 1] or 'pmax'", text)),
                        },
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Params::Crossing {
                    x: self.overlap()?,
                    gamma: self.gamma()?,
                    energy,
                    hbar,
                    thresholds,
                }
            }
        })
    }
}

fn valid_dim(n: usize) -> bool {
    (4..=4096).contains(&n)
}
