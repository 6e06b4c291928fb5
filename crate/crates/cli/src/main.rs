//! Command-line driver: runs the verification suites and ad-hoc functional
//! evaluations, printing reports as a table or as JSON.
//!
//! Exit codes: 0 when every report matches, 1 on a mismatch, 2 on bad flags
//! or invalid input.

mod render;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hodge_wres::curvature::{CurvatureJson, CurvaturePoint, OneFormJet};
use hodge_wres::functionals::{
    cancellation_check, check_functional_dimension, einstein_functional, metric_functional,
    FunctionalReport, Variant,
};
use hodge_wres::scalar::{parse_rational, Rational};
use hodge_wres::suites::{closedness_of_expr, run_all, run_functional, FunctionalRequest, Suite, SuiteConfig, DEFAULT_TRIALS};
use hodge_wres::symbol::{hodge_dirac_symbol, parametrix, SymbolDump};

#[derive(Parser, Debug)]
#[command(name = "hodge-wres", version, about = "Exact residue densities for the Hodge-Dirac operator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Anticommutation and Clifford relations of λ₊, λ₋, γ.
    CheckAlgebra(Common),
    /// Trace identities against dense traces.
    CheckTraces(Common),
    /// σ(D)∘σ(D) against the stated symbols of D².
    CheckSymbols {
        #[command(flatten)]
        common: Common,
        /// Print one symbol at the first trial's curvature as JSON and exit.
        #[arg(long, value_enum)]
        dump_symbol: Option<DumpWhich>,
    },
    /// Closed-form inverse powers against parametrix composition.
    CheckInverse(Common),
    /// 𝒲(u w |D|^{-n}) against 2^n u·w.
    Metric {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forms: Forms,
    },
    /// 𝒲(u{D,w}D|D|^{-n}) against (2^n/6) G(u,w).
    Einstein {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forms: Forms,
    },
    /// The cancelling endomorphism and ξξ contributions to the Einstein functional.
    Cancellation {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        forms: Forms,
    },
    /// 𝒲(T D |D|^{-n}) = 0 for order-zero T.
    Closedness {
        #[command(flatten)]
        common: Common,
        /// A constant T as an expression; random T when omitted.
        #[arg(long)]
        expr: Option<String>,
        #[command(flatten)]
        forms: Forms,
    },
    /// 𝒲(E D^{-2k}) or 𝒲(P D^{-n}) for expressions E or F, G, H.
    Functional {
        #[command(flatten)]
        common: Common,
        /// Endomorphism E with no free indices.
        #[arg(long, conflicts_with_all = ["f", "g", "h"], required_unless_present = "f")]
        expr: Option<String>,
        /// k in D^{-2k}: n/2 - 1 for E D^{-n+2}, n/2 for E D^{-n}. Defaults to n/2 - 1.
        #[arg(long, requires = "expr", allow_negative_numbers = true)]
        power: Option<i64>,
        #[arg(long, value_enum, default_value_t = VariantArg::Gamma)]
        variant: VariantArg,
        /// Second-order coefficient F with free indices a, b.
        #[arg(long)]
        f: Option<String>,
        /// First-order coefficient G with free index a.
        #[arg(long, requires = "f")]
        g: Option<String>,
        /// Zeroth-order coefficient H.
        #[arg(long, requires = "f")]
        h: Option<String>,
        #[command(flatten)]
        forms: Forms,
    },
    /// Every suite.
    All(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Dimension n: even, 2 to 8; functionals need n ≥ 4.
    #[arg(long, default_value_t = 4)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS, value_parser = parse_trials)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Human)]
    output: OutputFormat,
    /// JSON file `{"n": .., "riemann": [[[["p/q", ..]]]]}` used instead of random samples.
    #[arg(long)]
    curvature: Option<PathBuf>,
}

#[derive(Args, Debug, Clone, Default)]
struct Forms {
    /// One-form u at the point, comma-separated rationals.
    #[arg(long, requires = "w", allow_hyphen_values = true)]
    u: Option<String>,
    /// One-form w at the point, comma-separated rationals.
    #[arg(long, requires = "u", allow_hyphen_values = true)]
    w: Option<String>,
    /// First-order jet w_{pa}, rows separated by `;`.
    #[arg(long, requires = "w", allow_hyphen_values = true)]
    w_jet: Option<String>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum OutputFormat {
    Human,
    Json,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum VariantArg {
    Gamma,
    Lambda,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Gamma => Variant::Gamma,
            VariantArg::Lambda => Variant::Lambda,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DumpWhich {
    Dirac,
    DiracSquared,
    Parametrix,
}

fn parse_trials(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("trials must be at least 1".into()),
        Ok(k) => Ok(k),
        Err(e) => Err(e.to_string()),
    }
}

/// Failure to even start: reported on stderr with exit code 2.
#[derive(Debug, thiserror::Error)]
enum InputError {
    #[error(transparent)]
    Engine(#[from] hodge_wres::Error),
    #[error("cannot read curvature file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed curvature file {path}: {source}")]
    Json { path: String, source: serde_json::Error },
    #[error("{0}")]
    Usage(String),
}

type Outcome = Result<Run, InputError>;

/// Reports to print, or a raw JSON document when dumping.
enum Run {
    Reports { config: BTreeMap<String, String>, reports: Vec<FunctionalReport> },
    Dump(String),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, output) = (command_name(&cli.command), cli.command.common().output);
    match execute(cli.command) {
        Ok(Run::Dump(text)) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Ok(Run::Reports { config, reports }) => {
            let all_match = reports.iter().all(|r| r.matched);
            match output {
                OutputFormat::Json => println!("{}", render::json(name, &config, &reports)),
                OutputFormat::Human => print!("{}", render::table(&reports)),
            }
            if all_match {
                ExitCode::SUCCESS
            } else {
                if let Some(first) = reports.iter().find(|r| !r.matched) {
                    eprintln!("first mismatch:\n{}", render::full(first));
                }
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::CheckAlgebra(_) => "check-algebra",
        Command::CheckTraces(_) => "check-traces",
        Command::CheckSymbols { .. } => "check-symbols",
        Command::CheckInverse(_) => "check-inverse",
        Command::Metric { .. } => "metric",
        Command::Einstein { .. } => "einstein",
        Command::Cancellation { .. } => "cancellation",
        Command::Closedness { .. } => "closedness",
        Command::Functional { .. } => "functional",
        Command::All(_) => "all",
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::CheckAlgebra(c) | Command::CheckTraces(c) | Command::CheckInverse(c) | Command::All(c) => c,
            Command::CheckSymbols { common, .. }
            | Command::Metric { common, .. }
            | Command::Einstein { common, .. }
            | Command::Cancellation { common, .. }
            | Command::Closedness { common, .. }
            | Command::Functional { common, .. } => common,
        }
    }
}

fn execute(cmd: Command) -> Outcome {
    let common = cmd.common().clone();
    let cfg = suite_config(&common)?;
    let mut config = BTreeMap::new();
    config.insert("dim".to_string(), common.dim.to_string());
    config.insert("seed".to_string(), common.seed.to_string());
    config.insert("trials".to_string(), common.trials.to_string());
    if let Some(p) = &common.curvature {
        config.insert("curvature".to_string(), p.display().to_string());
    }
    let suite = |s: Suite| -> Outcome { Ok(Run::Reports { config: config.clone(), reports: s.run(&cfg)? }) };
    let single = |r: FunctionalReport| -> Outcome { Ok(Run::Reports { config: config.clone(), reports: vec![r] }) };

    match cmd {
        Command::CheckAlgebra(_) => suite(Suite::Algebra),
        Command::CheckTraces(_) => suite(Suite::Traces),
        Command::CheckSymbols { dump_symbol: Some(which), .. } => {
            let (curv, _) = cfg.curvature_for(0)?;
            let d = hodge_dirac_symbol(&curv)?;
            let sym = match which {
                DumpWhich::Dirac => d,
                DumpWhich::DiracSquared => d.compose(&d),
                DumpWhich::Parametrix => parametrix(&d.compose(&d))?,
            };
            let text = serde_json::to_string_pretty(&SymbolDump::of(&sym)).expect("symbol dump serializes");
            Ok(Run::Dump(text))
        }
        Command::CheckSymbols { .. } => suite(Suite::Symbols),
        Command::CheckInverse(_) => suite(Suite::Inverse),
        Command::All(_) => Ok(Run::Reports { config: config.clone(), reports: run_all(&cfg)? }),
        Command::Metric { forms, .. } => match forms.parse(cfg.dim)? {
            Some((u, w)) => single(metric_functional(&cfg.context_for(0)?, &u, &w)?),
            None => suite(Suite::Metric),
        },
        Command::Einstein { forms, .. } => match forms.parse(cfg.dim)? {
            Some((u, w)) => single(einstein_functional(&cfg.context_for(0)?, &u.value, &w)?),
            None => suite(Suite::Einstein),
        },
        Command::Cancellation { forms, .. } => match forms.parse(cfg.dim)? {
            Some((u, w)) => single(cancellation_check(&cfg.context_for(0)?, &u.value, &w.value)?),
            None => suite(Suite::Cancellation),
        },
        Command::Closedness { expr: Some(expr), forms, .. } => {
            let (u, w) = forms.values_or_zero(cfg.dim)?;
            single(closedness_of_expr(&cfg.context_for(0)?, &expr, &u, &w)?)
        }
        Command::Closedness { .. } => suite(Suite::Closedness),
        Command::Functional { expr, power, variant, f, g, h, forms, .. } => {
            check_functional_dimension(cfg.dim)?;
            let req = match (expr, f) {
                (Some(expr), _) => FunctionalRequest::Endo { expr, power: power.unwrap_or(cfg.dim as i64 / 2 - 1) },
                (None, Some(f)) => FunctionalRequest::SecondOrder { f, g, h },
                (None, None) => return Err(InputError::Usage("either --expr or --f is required".into())),
            };
            let (u, w) = forms.values_or_zero(cfg.dim)?;
            single(run_functional(&cfg.context_for(0)?, &req, variant.into(), &u, &w)?)
        }
    }
}

fn suite_config(c: &Common) -> Result<SuiteConfig, InputError> {
    if c.dim < 2 || c.dim > 8 || c.dim % 2 == 1 {
        return Err(InputError::Usage(format!("--dim must be even and between 2 and 8, got {}", c.dim)));
    }
    let cfg = SuiteConfig::new(c.dim, c.seed, c.trials);
    match &c.curvature {
        None => Ok(cfg),
        Some(path) => {
            let name = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|source| InputError::Io { path: name.clone(), source })?;
            let doc: CurvatureJson =
                serde_json::from_str(&text).map_err(|source| InputError::Json { path: name, source })?;
            Ok(cfg.with_curvature(CurvaturePoint::from_json(&doc)?)?)
        }
    }
}

fn parse_vector(text: &str, n: usize, what: &str) -> Result<Vec<Rational>, InputError> {
    let v = text.split(',').map(parse_rational).collect::<Result<Vec<_>, _>>()?;
    if v.len() != n {
        return Err(InputError::Usage(format!("{what} has {} entries; --dim is {n}", v.len())));
    }
    Ok(v)
}

impl Forms {
    fn parse(&self, n: usize) -> Result<Option<(OneFormJet, OneFormJet)>, InputError> {
        let (Some(u), Some(w)) = (&self.u, &self.w) else { return Ok(None) };
        let u = OneFormJet::constant(parse_vector(u, n, "--u")?);
        let wv = parse_vector(w, n, "--w")?;
        let w = match &self.w_jet {
            None => OneFormJet::constant(wv),
            Some(j) => {
                let rows = j.split(';').map(|r| parse_vector(r, n, "--w-jet row")).collect::<Result<Vec<_>, _>>()?;
                OneFormJet::with_jet(wv, rows)?
            }
        };
        Ok(Some((u, w)))
    }

    fn values_or_zero(&self, n: usize) -> Result<(Vec<Rational>, Vec<Rational>), InputError> {
        Ok(match self.parse(n)? {
            Some((u, w)) => (u.value, w.value),
            None => (vec![Rational::from_integer(0); n], vec![Rational::from_integer(0); n]),
        })
    }
}
