use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use linsofic::abelian::SpectralMeasure;
use linsofic::config::{Config, Format};
use linsofic::densecheck::{stabilize, StabilizeInput};
use linsofic::exact::{self, Rational};
use linsofic::genfunc::{integral_in, quadrature_in};
use linsofic::groups::{self, CharacterTable, MultTable};
use linsofic::jordan::JordanSpectrum;
use linsofic::planner::{self, PlanParams};
use linsofic::{Error, Result};

const FOURIER_TOL: f64 = 1e-9;
const INTEGRAL_TOL: f64 = 1e-9;

#[derive(Parser, Debug)]
#[command(name = "linsofic", version, about = "Exact amplification and separation-constant computations")]
struct Cli {
    /// TOML or JSON configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output format (overrides the configuration).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify a spectrum, plan the iteration counts, and trace tensor squaring.
    Amplify(AmplifyArgs),
    /// Print the planned iteration counts for given targets.
    Plan(PlanArgs),
    /// Optimal separation constant of a finite group.
    Kappa(KappaArgs),
    /// Return probability of a random walk, exact and via Fourier.
    Walk(WalkArgs),
    /// Integrals of sin(nt)/sin(t): recursion against quadrature.
    Integrals(IntegralArgs),
    /// Repair an almost-representation of a finite group into an exact one.
    Stabilize(StabilizeArgs),
}

#[derive(Args, Debug)]
struct Targets {
    /// Target defect from the identity, as p/q.
    #[arg(long, default_value = "1/2")]
    epsilon: String,
    /// Target multiplicativity defect, as p/q.
    #[arg(long, default_value = "1/10")]
    delta: String,
    /// Non-concentration rate assumed for the spectral measure (default 0.21).
    #[arg(long)]
    beta: Option<f64>,
}

#[derive(Args, Debug)]
struct AmplifyArgs {
    /// Spectrum JSON file.
    spectrum: PathBuf,
    #[command(flatten)]
    targets: Targets,
    /// Maximum number of tensor squarings to trace.
    #[arg(long)]
    iters: Option<u32>,
    /// Cap on distinct Jordan blocks.
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct PlanArgs {
    #[command(flatten)]
    targets: Targets,
}

#[derive(Args, Debug)]
#[group(id = "source", required = true, multiple = false)]
struct KappaSource {
    /// Character-table JSON file.
    #[arg(long)]
    table: Option<PathBuf>,
    /// Built-in group: S3, Q8, D4, A4, S4 or Z<n>.
    #[arg(long)]
    builtin: Option<String>,
    /// The elementary abelian 2-group of rank n; checks the closed form.
    #[arg(long)]
    z2n: Option<u32>,
    /// Abelian group from cyclic factors, e.g. 2,2,3.
    #[arg(long, value_delimiter = ',')]
    abelian: Option<Vec<u64>>,
    /// Regular representation over F_p (needs --mult or --group).
    #[arg(long)]
    modp: Option<u64>,
}

#[derive(Args, Debug)]
struct KappaArgs {
    #[command(flatten)]
    source: KappaSource,
    /// Multiplication-table JSON file, for --modp.
    #[arg(long, conflicts_with = "group")]
    mult: Option<PathBuf>,
    /// Named group for --modp: Z<n>, products like Z2xZ2, S3, S4, D4, Q8.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Args, Debug)]
struct WalkArgs {
    /// Measure JSON file.
    measure: PathBuf,
    /// Number of steps.
    #[arg(long, short)]
    n: u64,
}

#[derive(Args, Debug)]
struct IntegralArgs {
    /// Index n (repeatable).
    #[arg(long, short, required = true, allow_negative_numbers = true)]
    n: Vec<i64>,
    /// Lower limit: a number or a multiple of pi such as 3pi/2.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    a: String,
    /// Upper limit.
    #[arg(long, default_value = "2pi", allow_hyphen_values = true)]
    b: String,
}

#[derive(Args, Debug)]
struct StabilizeArgs {
    /// JSON with "mult_table" and "matrices" (rational entries as strings).
    input: PathBuf,
}

/// Outcome of a command: the report and whether a checked assertion failed.
struct Outcome {
    json: Value,
    table: String,
    failed: bool,
}

impl Outcome {
    fn new(value: impl Serialize, table: String, failed: bool) -> Result<Self> {
        let json = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Outcome { json, table, failed })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))
}

fn plan_params(t: &Targets, cfg: &Config) -> Result<PlanParams> {
    let mut p = PlanParams::new(exact::parse_rational(&t.epsilon)?, exact::parse_rational(&t.delta)?);
    p.c2 = cfg.c2;
    p.block_cap = cfg.block_cap;
    p.max_iters = cfg.max_iters;
    if let Some(b) = t.beta {
        p.beta = b;
    }
    Ok(p)
}

fn key_values(v: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = v {
        for (k, x) in map {
            let s = match x {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k}: {s}");
        }
    }
    out
}

fn cmd_amplify(args: &AmplifyArgs, cfg: &Config) -> Result<Outcome> {
    let a = JordanSpectrum::from_json_str(&read(&args.spectrum)?)?;
    let mut params = plan_params(&args.targets, cfg)?;
    if let Some(i) = args.iters {
        params.max_iters = i;
    }
    if let Some(c) = args.cap {
        params.block_cap = c;
    }
    let report = planner::amplify_trace(&a, &params)?;
    let table = report.to_table();
    let failed = report.failed();
    Outcome::new(&report, table, failed)
}

fn cmd_plan(args: &PlanArgs, cfg: &Config) -> Result<Outcome> {
    let plan = planner::plan(&plan_params(&args.targets, cfg)?)?.to_json();
    let v = serde_json::to_value(&plan).map_err(|e| Error::Parse(e.to_string()))?;
    Outcome::new(&plan, key_values(&v), false)
}

fn mult_by_name(name: &str) -> Result<MultTable> {
    let upper = name.to_ascii_uppercase();
    match upper.as_str() {
        "S3" => MultTable::symmetric(3),
        "S4" => MultTable::symmetric(4),
        "D4" | "D8" => MultTable::dihedral(4),
        "Q8" => MultTable::quaternion(),
        _ => {
            let mut acc: Option<MultTable> = None;
            for part in upper.split('X') {
                let n: usize = part
                    .strip_prefix('Z')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(|| Error::InvalidParameter(format!("unknown group {name:?}")))?;
                let z = MultTable::cyclic(n)?;
                acc = Some(match acc {
                    None => z,
                    Some(g) => g.direct_product(&z)?,
                });
            }
            acc.ok_or_else(|| Error::InvalidParameter(format!("unknown group {name:?}")))
        }
    }
}

fn kappa_table_report(t: &CharacterTable, extra: Vec<(&str, Value)>) -> Result<(Value, String)> {
    let r = groups::kappa_complex(t)?;
    let mut v = json!({
        "group": t.name().unwrap_or("input"),
        "order": t.order(),
        "kappa": exact::fmt_rational(&r.kappa),
        "fixed_point_free": r.kappa == Rational::from_integer(1.into()),
        "witness": r.to_json().witness,
        "witness_dim": r.witness_dim.to_string(),
    });
    for (k, x) in extra {
        v[k] = x;
    }
    let table = key_values(&v);
    Ok((v, table))
}

fn cmd_kappa(args: &KappaArgs) -> Result<Outcome> {
    let s = &args.source;
    if let Some(p) = s.modp {
        let g = match (&args.mult, &args.group) {
            (Some(path), _) => MultTable::from_json_str(&read(path)?)?,
            (None, Some(name)) => mult_by_name(name)?,
            (None, None) => return Err(Error::InvalidParameter("--modp needs --mult FILE or --group NAME".into())),
        };
        let r = groups::kappa_modp_regular(&g, p)?;
        if let Some(w) = &r.warning {
            eprintln!("warning: {w}");
        }
        let v = json!({
            "order": g.order(),
            "p": p,
            "kappa": exact::fmt_rational(&r.kappa),
            "expected": exact::fmt_rational(&(Rational::from_integer(1.into()) - exact::ratio(1, p as i64))),
            "minimizer": r.minimizer,
            "ranks": r.ranks,
        });
        let table = key_values(&v);
        return Outcome::new(v, table, false);
    }
    if let Some(n) = s.z2n {
        let closed = groups::kappa_z2n_closed_form(n)?;
        let t = groups::table_for_abelian(&vec![2; n as usize])?;
        let lp = groups::kappa_complex(&t)?;
        let agree = lp.kappa == closed;
        let (v, table) = kappa_table_report(
            &t,
            vec![("closed_form", json!(exact::fmt_rational(&closed))), ("agree", json!(agree))],
        )?;
        return Outcome::new(v, table, !agree);
    }
    let t = if let Some(path) = &s.table {
        CharacterTable::from_json_str(&read(path)?)?
    } else if let Some(name) = &s.builtin {
        groups::builtin(name)?
    } else if let Some(f) = &s.abelian {
        groups::table_for_abelian(f)?
    } else {
        return Err(Error::InvalidParameter("no group given".into()));
    };
    let (v, table) = kappa_table_report(&t, vec![])?;
    Outcome::new(v, table, false)
}

fn cmd_walk(args: &WalkArgs, cfg: &Config) -> Result<Outcome> {
    let mu = SpectralMeasure::from_json_str(&read(&args.measure)?)?;
    let exact_mass = mu.convolution_power(args.n)?.mass_at_identity();
    let cyc = mu.torsion_pushforward()?;
    let torsion_exact = cyc.return_probability_exact(args.n)?;
    let torsion_fourier = cyc.return_probability_fourier(args.n)?;
    let diff = (torsion_fourier - exact::to_f64(&torsion_exact)).abs();
    let failed = diff > FOURIER_TOL;
    let mut v = json!({
        "n": args.n,
        "mass_at_identity": exact::fmt_rational(&exact_mass),
        "mass_at_identity_approx": exact::to_f64(&exact_mass),
        "torsion_modulus": cyc.modulus(),
        "torsion_return_exact": exact::fmt_rational(&torsion_exact),
        "torsion_return_fourier": torsion_fourier,
        "fourier_error": diff,
        "fourier_ok": !failed,
    });
    // the constant-dependent bounds are reported for information only
    let w0 = exact::to_f64(&mu.weight(&linsofic::abelian::GroupElement::identity(mu.free_rank())));
    let beta = w0.min(1.0 - w0);
    if beta > 0.0 && args.n > 0 {
        let n = args.n as f64;
        let approx = exact::to_f64(&exact_mass);
        if mu.atoms().keys().all(|g| g.torsion.is_zero()) {
            let b = cfg.c / (beta * n).sqrt();
            v["lattice_bound"] = json!({"value": b, "holds": approx <= b, "constant": cfg.c});
        } else if mu.free_rank() == 0 {
            let b = cfg.c1 / (beta * n.sqrt()) + (-n * beta / 2.0).exp();
            let dev = (approx - 1.0 / cyc.modulus() as f64).abs();
            v["cyclic_bound"] = json!({"value": b, "holds": dev <= b, "constant": cfg.c1});
        }
    }
    let table = key_values(&v);
    if failed {
        eprintln!("error: Fourier return probability differs from exact value by {diff:e}");
    }
    Outcome::new(v, table, failed)
}

/// A number, or `pi` optionally scaled: `pi`, `2pi`, `3pi/2`, `-pi/4`.
fn parse_angle(s: &str) -> Result<f64> {
    let t = s.trim().to_ascii_lowercase();
    if let Ok(x) = t.parse::<f64>() {
        return Ok(x);
    }
    let bad = || Error::Parse(format!("not an angle: {s:?}"));
    let (head, den) = match t.split_once('/') {
        Some((h, d)) => (h.to_string(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let coeff = head.strip_suffix("pi").ok_or_else(bad)?.trim().trim_end_matches('*');
    let c = match coeff {
        "" => 1.0,
        "-" => -1.0,
        x => x.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(c * std::f64::consts::PI / den)
}

fn cmd_integrals(args: &IntegralArgs) -> Result<Outcome> {
    let a = parse_angle(&args.a)?;
    let b = parse_angle(&args.b)?;
    let mut rows = Vec::new();
    let mut table = format!("{:>6}  {:>22}  {:>22}  {:>10}\n", "n", "recursion", "quadrature", "error");
    let mut failed = false;
    for &n in &args.n {
        let r = integral_in(n, a, b);
        let q = quadrature_in(n, a, b, 1e-12);
        let err = (r - q).abs();
        failed |= err > INTEGRAL_TOL;
        let _ = writeln!(table, "{n:>6}  {r:>22.15}  {q:>22.15}  {err:>10.2e}");
        rows.push(json!({"n": n, "recursion": r, "quadrature": q, "error": err, "agree": err <= INTEGRAL_TOL}));
    }
    Outcome::new(json!({"a": a, "b": b, "values": rows}), table, failed)
}

fn cmd_stabilize(args: &StabilizeArgs) -> Result<Outcome> {
    let input: StabilizeInput = serde_json::from_str(&read(&args.input)?)?;
    let (phi, table) = input.parse()?;
    let report = stabilize(&phi, &table)?.to_json();
    let v = serde_json::to_value(&report).map_err(|e| Error::Parse(e.to_string()))?;
    let mut t = String::new();
    let _ = writeln!(t, "epsilon: {}", report.epsilon);
    let _ = writeln!(t, "bound: {}", report.bound);
    let _ = writeln!(t, "invariant_dim: {}", report.invariant_dim);
    let _ = writeln!(t, "distances: {}", report.distances.join(" "));
    Outcome::new(v, t, false)
}

fn run(cli: &Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let format = cli.format.unwrap_or(cfg.format);
    let outcome = match &cli.command {
        Command::Amplify(a) => cmd_amplify(a, &cfg)?,
        Command::Plan(a) => cmd_plan(a, &cfg)?,
        Command::Kappa(a) => cmd_kappa(a)?,
        Command::Walk(a) => cmd_walk(a, &cfg)?,
        Command::Integrals(a) => cmd_integrals(a)?,
        Command::Stabilize(a) => cmd_stabilize(a)?,
    };
    let text = match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&outcome.json).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Table => outcome.table,
    };
    match &cli.output {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidParameter(format!("cannot write {}: {e}", p.display())))?,
        None => print!("{text}"),
    }
    Ok(!outcome.failed)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
