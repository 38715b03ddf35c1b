//! Command-line front end. [`run`] parses `argv`, dispatches to the library
//! and writes JSON (single results) or CSV (sweeps).
//!
//! Exit codes: 0 success, 1 usage or input error, 2 verification failure.

mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::asymptotics::{asymptotic_eval, residual_report, ExpansionSpec};
use crate::domain::{Anisotropy, ShiftPair};
use crate::optimize::{maximize_heat, maximize_riesz, trajectory, MaximizeOptions, MaximizerResult, TrajectoryKind};
use crate::special::expansion_coeffs;
use crate::sums::{counting_direct, heat_closed, heat_direct, riesz_direct};

/// Environment variable naming a default config file.
pub const CONFIG_ENV: &str = "RIESZ_LATTICE_CONFIG";

/// Every tunable, flat, as read from a config file and `--set` overrides.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    #[serde(rename = "M")]
    pub m: usize,
    pub delta: f64,
    pub series_tol: f64,
    pub cutoff_constant: f64,
    pub sin_floor: f64,
    pub cluster_tol: f64,
    pub points_per_unit: f64,
    pub min_grid: usize,
    pub grid_cap: usize,
    pub refine_candidates: usize,
    pub refine_tol: f64,
    pub heat_window: f64,
    pub heat_grid: usize,
    /// Relative truncation tolerance of the direct heat sum.
    pub heat_tol: f64,
    pub quadrature_tol: f64,
    /// Denominator cap for reading decimal β as a fraction.
    pub max_denominator: u64,
    pub seed: u64,
    /// Worker threads; 0 uses all cores.
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        let e = ExpansionSpec::default();
        let m = MaximizeOptions::default();
        Self {
            m: e.m,
            delta: e.delta,
            series_tol: e.series_tol,
            cutoff_constant: e.cutoff_constant,
            sin_floor: e.sin_floor,
            cluster_tol: m.cluster_tol,
            points_per_unit: m.points_per_unit,
            min_grid: m.min_grid,
            grid_cap: m.grid_cap,
            refine_candidates: m.refine_candidates,
            refine_tol: m.refine_tol,
            heat_window: m.heat_window,
            heat_grid: m.heat_grid,
            heat_tol: 1e-14,
            quadrature_tol: 1e-10,
            max_denominator: 10_000,
            seed: 1,
            threads: 0,
        }
    }
}

impl RunConfig {
    pub fn expansion(&self) -> ExpansionSpec {
        ExpansionSpec {
            m: self.m,
            delta: self.delta,
            series_tol: self.series_tol,
            cutoff_constant: self.cutoff_constant,
            sin_floor: self.sin_floor,
        }
    }

    pub fn maximize(&self) -> MaximizeOptions {
        MaximizeOptions {
            cluster_tol: self.cluster_tol,
            points_per_unit: self.points_per_unit,
            min_grid: self.min_grid,
            grid_cap: self.grid_cap,
            refine_candidates: self.refine_candidates,
            refine_tol: self.refine_tol,
            heat_window: self.heat_window,
            heat_grid: self.heat_grid,
        }
    }
}

fn parse_table(text: &str, origin: &str) -> Result<toml::Table, String> {
    text.parse::<toml::Table>().map_err(|e| format!("{origin}: {e}"))
}

fn table_to_config(table: toml::Table, origin: &str) -> Result<RunConfig, String> {
    RunConfig::deserialize(toml::Value::Table(table)).map_err(|e| format!("{origin}: {e}"))
}

/// Defaults overlaid with the file at `path`, or with the file named by
/// `RIESZ_LATTICE_CONFIG` when `path` is `None`.
pub fn load_config(path: Option<&Path>) -> Result<RunConfig, String> {
    Ok(load_layers(path, &[])?.0)
}

fn load_layers(path: Option<&Path>, sets: &[String]) -> Result<(RunConfig, Option<PathBuf>), String> {
    let path = path
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut table = match &path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))?;
            parse_table(&text, &p.display().to_string())?
        }
        None => toml::Table::new(),
    };
    for s in sets {
        let (k, v) = s
            .split_once('=')
            .ok_or_else(|| format!("--set {s:?}: expected key=value"))?;
        let one = parse_table(&format!("{} = {}", k.trim(), v.trim()), "--set")?;
        table.extend(one);
    }
    let origin = path.as_ref().map_or("config".to_string(), |p| p.display().to_string());
    Ok((table_to_config(table, &origin)?, path))
}

#[derive(Parser, Debug)]
#[command(name = "riesz-lattice", version, about = "Riesz means, counting functions and heat traces of shifted lattices")]
struct Cli {
    /// Config file (TOML); defaults to $RIESZ_LATTICE_CONFIG when set.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set series_tol=1e-8` (repeatable).
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a lattice sum.
    #[command(subcommand)]
    Eval(EvalCmd),
    /// Tabulate expansion coefficients b_k, a_k, alpha_k.
    Coeffs {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        order: usize,
    },
    /// Large-lambda expansion.
    #[command(subcommand)]
    Asym(AsymCmd),
    /// Maximize over beta.
    #[command(subcommand)]
    Maximize(MaxCmd),
    /// Maximizer trajectory over a grid of lambda (riesz) or t (heat); CSV.
    #[command(subcommand)]
    Sweep(SweepCmd),
    /// Run a verification suite.
    Verify {
        #[arg(value_enum)]
        what: verify::Target,
        #[arg(long, default_value = "default")]
        suite: String,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ShiftArgs {
    #[arg(long, allow_hyphen_values = true)]
    sigma: f64,
    #[arg(long, allow_hyphen_values = true)]
    tau: f64,
}

#[derive(Subcommand, Debug)]
enum EvalCmd {
    Riesz {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    Count {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    Heat {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        /// Also evaluate the truncated double sum.
        #[arg(long)]
        direct: bool,
    },
}

#[derive(Subcommand, Debug)]
enum AsymCmd {
    Eval {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        /// Decimal or `mu/nu`.
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    Residuals {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: String,
        /// `start:stop:count[:log]`
        #[arg(long)]
        grid: String,
    },
}

#[derive(Subcommand, Debug)]
enum MaxCmd {
    Riesz {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        lambda: f64,
    },
    Heat {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
    },
}

#[derive(Subcommand, Debug)]
enum SweepCmd {
    Riesz {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long)]
        grid: String,
    },
    Heat {
        #[command(flatten)]
        shift: ShiftArgs,
        #[arg(long)]
        grid: String,
    },
}

/// Parse `start:stop:count[:log]`.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = spec.split(':').collect();
    let bad = || format!("grid {spec:?}: expected start:stop:count[:log]");
    if !(parts.len() == 3 || parts.len() == 4) {
        return Err(bad());
    }
    let start: f64 = parts[0].parse().map_err(|_| bad())?;
    let stop: f64 = parts[1].parse().map_err(|_| bad())?;
    let count: usize = parts[2].parse().map_err(|_| bad())?;
    let log = match parts.get(3) {
        None => false,
        Some(&"log") => true,
        Some(_) => return Err(bad()),
    };
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        return Err(bad());
    }
    if log && !(start > 0.0 && stop > 0.0) {
        return Err(format!("grid {spec:?}: log grids need positive endpoints"));
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    let d = (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let f = i as f64 / d;
            if i == 0 {
                start
            } else if i == count - 1 {
                stop
            } else if log {
                (start.ln() + f * (stop.ln() - start.ln())).exp()
            } else {
                start + f * (stop - start)
            }
        })
        .collect())
}

/// `mu/nu` exactly, otherwise a decimal with rational detection.
pub fn parse_beta(s: &str, max_denominator: u64) -> Result<Anisotropy, String> {
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let mu: u64 = a.trim().parse().map_err(|_| format!("beta {s:?}: bad numerator"))?;
            let nu: u64 = b.trim().parse().map_err(|_| format!("beta {s:?}: bad denominator"))?;
            Anisotropy::rational(mu, nu)
        }
        None => {
            let v: f64 = s.trim().parse().map_err(|_| format!("beta {s:?}: not a number"))?;
            Anisotropy::detect(v, max_denominator)
        }
    };
    r.map_err(|e| e.to_string())
}

/// Floats as 17 significant digits (`{:.16e}`); everything else compact.
struct Sig17;

impl serde_json::ser::Formatter for Sig17 {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> std::io::Result<()> {
        write!(w, "{v:.16e}")
    }
}

pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn to_json_line(v: &Value) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17);
    v.serialize(&mut ser).expect("serializing a JSON value cannot fail");
    String::from_utf8(buf).expect("JSON is UTF-8")
}

struct Outcome {
    stdout: String,
    code: i32,
}

type Failure = String;

fn envelope(command: &str, inputs: Value, cfg: &RunConfig, result: Value, warnings: Vec<String>) -> String {
    let doc = json!({
        "command": command,
        "inputs": inputs,
        "options": cfg,
        "result": result,
        "warnings": warnings,
    });
    to_json_line(&doc) + "\n"
}

fn shift_of(a: ShiftArgs) -> Result<ShiftPair, Failure> {
    ShiftPair::new(a.sigma, a.tau).map_err(|e| e.to_string())
}

fn ok_json(s: String) -> Result<Outcome, Failure> {
    Ok(Outcome { stdout: s, code: 0 })
}

fn maximizer_json(r: &MaximizerResult) -> Value {
    serde_json::to_value(r).expect("maximizer result serializes")
}

fn csv_opt(v: Option<f64>) -> String {
    v.map(format_f64).unwrap_or_default()
}

/// CSV with columns `param,beta_star,value,bracket_lo,bracket_hi,degenerate,near_optima_count`.
pub fn trajectory_csv(rows: &[(f64, MaximizerResult)]) -> String {
    let mut out = String::from("param,beta_star,value,bracket_lo,bracket_hi,degenerate,near_optima_count\n");
    for (p, r) in rows {
        let deg = match r.degenerate {
            None => "",
            Some(crate::optimize::Direction::ToZero) => "to_zero",
            Some(crate::optimize::Direction::ToInfinity) => "to_infinity",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            format_f64(*p),
            format_f64(r.beta_star),
            format_f64(r.value),
            csv_opt(r.bracket.map(|b| b.0)),
            csv_opt(r.bracket.map(|b| b.1)),
            deg,
            r.near_optima.len()
        ));
    }
    out
}

fn dispatch(cmd: Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    let e = |x: crate::Error| x.to_string();
    let md = cfg.max_denominator;
    match cmd {
        Command::Eval(EvalCmd::Riesz { shift, gamma, beta, lambda }) => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let v = riesz_direct(&s, gamma, &an, lambda).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "gamma": gamma, "beta": an.beta, "lambda": lambda});
            ok_json(envelope("eval riesz", inputs, cfg, json!({ "value": v }), vec![]))
        }
        Command::Eval(EvalCmd::Count { shift, beta, lambda }) => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let v = counting_direct(&s, &an, lambda).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "beta": an.beta, "lambda": lambda});
            ok_json(envelope("eval count", inputs, cfg, json!({ "value": v }), vec![]))
        }
        Command::Eval(EvalCmd::Heat { shift, beta, t, direct }) => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let v = heat_closed(&s, &an, t).map_err(e)?;
            let mut result = json!({ "value": v });
            if direct {
                result["direct"] = json!(heat_direct(&s, &an, t, cfg.heat_tol).map_err(e)?);
            }
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "beta": an.beta, "t": t});
            ok_json(envelope("eval heat", inputs, cfg, result, vec![]))
        }
        Command::Coeffs { shift, beta, gamma, order } => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let table = expansion_coeffs(&an, &s, gamma, order).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "gamma": gamma, "beta": an.beta, "order": order});
            ok_json(envelope("coeffs", inputs, cfg, serde_json::to_value(table).unwrap(), vec![]))
        }
        Command::Asym(AsymCmd::Eval { shift, gamma, beta, lambda }) => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let spec = cfg.expansion();
            let a = asymptotic_eval(&s, gamma, &an, lambda, &spec).map_err(e)?;
            let direct = riesz_direct(&s, gamma, &an, lambda).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "gamma": gamma, "beta": an.beta,
                "rational": an.exact, "lambda": lambda});
            let result = json!({"value": a.value, "polynomial": a.polynomial, "oscillatory": a.oscillatory,
                "direct": direct, "residual": direct - a.value, "diagnostics": a.diagnostics,
                "expansion_spec": spec});
            ok_json(envelope("asym eval", inputs, cfg, result, a.diagnostics.warnings.clone()))
        }
        Command::Asym(AsymCmd::Residuals { shift, gamma, beta, grid }) => {
            let s = shift_of(shift)?;
            let an = parse_beta(&beta, md)?;
            let grid = parse_grid(&grid)?;
            let rows = residual_report(&s, gamma, &an, &grid, &cfg.expansion()).map_err(e)?;
            let mut out = String::from("lambda,direct,asymptotic,residual,normalized\n");
            for r in rows {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    format_f64(r.lambda),
                    format_f64(r.direct),
                    format_f64(r.asymptotic),
                    format_f64(r.residual),
                    format_f64(r.normalized)
                ));
            }
            Ok(Outcome { stdout: out, code: 0 })
        }
        Command::Maximize(MaxCmd::Riesz { shift, gamma, lambda }) => {
            let s = shift_of(shift)?;
            let r = maximize_riesz(&s, gamma, lambda, &cfg.maximize()).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "gamma": gamma, "lambda": lambda});
            let w = r.warnings.clone();
            ok_json(envelope("maximize riesz", inputs, cfg, maximizer_json(&r), w))
        }
        Command::Maximize(MaxCmd::Heat { shift, t }) => {
            let s = shift_of(shift)?;
            let r = maximize_heat(&s, t, &cfg.maximize()).map_err(e)?;
            let inputs = json!({"sigma": s.sigma, "tau": s.tau, "t": t});
            let w = r.warnings.clone();
            ok_json(envelope("maximize heat", inputs, cfg, maximizer_json(&r), w))
        }
        Command::Sweep(SweepCmd::Riesz { shift, gamma, grid }) => {
            let s = shift_of(shift)?;
            let grid = parse_grid(&grid)?;
            let rows = trajectory(TrajectoryKind::Riesz, &s, Some(gamma), &grid, &cfg.maximize()).map_err(e)?;
            Ok(Outcome {
                stdout: trajectory_csv(&rows),
                code: 0,
            })
        }
        Command::Sweep(SweepCmd::Heat { shift, grid }) => {
            let s = shift_of(shift)?;
            let grid = parse_grid(&grid)?;
            let rows = trajectory(TrajectoryKind::Heat, &s, None, &grid, &cfg.maximize()).map_err(e)?;
            Ok(Outcome {
                stdout: trajectory_csv(&rows),
                code: 0,
            })
        }
        Command::Verify { what, suite } => {
            let report = verify::run_suite(what, &suite, cfg)?;
            let passed = report.checks.iter().all(|c| c.passed);
            let inputs = json!({ "target": what, "suite": suite });
            let result = serde_json::to_value(&report).unwrap();
            Ok(Outcome {
                stdout: envelope(&format!("verify {}", what.name()), inputs, cfg, result, vec![]),
                code: if passed { 0 } else { 2 },
            })
        }
    }
}

/// Run the CLI on `argv` (including the program name) and return the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(err) => {
            use clap::error::ErrorKind;
            let text = err.render().to_string();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    0
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    1
                }
            };
        }
    };
    let mut cfg = match load_layers(cli.config.as_deref(), &cli.sets) {
        Ok((c, _)) => c,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return 1;
        }
    };
    if let Some(n) = cli.threads {
        cfg.threads = n;
    }
    if let Err(err) = cfg.expansion().validate().and(cfg.maximize().validate()) {
        let _ = writeln!(stderr, "error: {err}");
        return 1;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(err) => {
            let _ = writeln!(stderr, "error: {err}");
            return 1;
        }
    };
    match pool.install(|| dispatch(cli.command, &cfg)) {
        Ok(out) => {
            if stdout.write_all(out.stdout.as_bytes()).is_err() {
                return 1;
            }
            out.code
        }
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            1
        }
    }
}
