//! Command-line front end.
//!
//! Every numeric setting resolves as built-in default, then the JSON config
//! file (`--config`, keys are flag names with `-` replaced by `_`), then the
//! command-line flag. All problems found while resolving are reported
//! together as one error.
//!
//! Exit codes: 0 success (including partial tables), 2 usage or domain
//! error, 3 model error under `--strict`, 4 fit did not converge.

use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{Map, Value};

use crate::analysis::{self, FixedParams, SweepSpec, SweepVariable};
use crate::barriers::{barrier, validity_report, BarrierMethod};
use crate::error::Error;
use crate::model::{surface_table, CouplingModel, DiabaticSystem};
use crate::rates::{extract_coupling, ElectrodeConditions, PrefactorKind};
use crate::table::{csv_writer, format_sig, SweepTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_STRICT: i32 = 3;
pub const EXIT_NO_CONVERGENCE: i32 = 4;

const AFTER_HELP: &str = "\
Coupling specs:
  const:V            V(q) = V
  linear:V0,V1       V(q) = V0 + q (V1 - V0)
  poly:c0,c1,...     V(q) = c0 + c1 q + c2 q^2 + ...

Energies are in eV, temperatures in K. Overpotentials are in volts; for a
one-electron step the energy eta_f in eV has the same numerical value.

Exit codes: 0 success or partial table, 2 usage/domain error,
3 model error with --strict, 4 fit did not converge.";

#[derive(Parser, Debug)]
#[command(
    name = "marcus-kinetics",
    version,
    about = "Adiabatic Marcus barriers and electrode rate constants",
    after_help = AFTER_HELP
)]
struct Cli {
    /// JSON object of settings; keys are flag names with '-' replaced by '_'
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write the CSV here instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Treat any per-point model failure as fatal (exit 3)
    #[arg(long, global = true)]
    strict: bool,
    /// Suppress warnings on stderr
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Diabatic and adiabatic energies along the reaction coordinate
    #[command(allow_negative_numbers = true, after_help = AFTER_HELP)]
    Surface {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        qmin: Option<f64>,
        #[arg(long)]
        qmax: Option<f64>,
        /// Number of samples
        #[arg(long)]
        n: Option<usize>,
    },
    /// Activation barrier by one or all methods
    #[command(allow_negative_numbers = true, after_help = AFTER_HELP)]
    Barrier {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        method: MethodArgs,
    },
    /// Barrier table against dG0, V(0) or lambda
    #[command(allow_negative_numbers = true, after_help = AFTER_HELP)]
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// Swept variable: dg, v or lambda
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// log10 k against overpotential
    #[command(allow_negative_numbers = true, after_help = AFTER_HELP)]
    Tafel {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        method: MethodArgs,
        #[command(flatten)]
        electrode: ElectrodeArgs,
        #[arg(long)]
        eta_from: Option<f64>,
        #[arg(long)]
        eta_to: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// ln k against 1/T at fixed overpotential
    #[command(allow_negative_numbers = true, after_help = AFTER_HELP)]
    Arrhenius {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        method: MethodArgs,
        /// Overpotential, V
        #[arg(long)]
        eta: Option<f64>,
        /// Density of states, 1/eV
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        tmin: Option<f64>,
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Fit an effective reorganization energy to a Tafel table
    #[command(allow_negative_numbers = true)]
    Fit {
        /// CSV with an eta_f_V column; '-' reads stdin
        #[arg(long)]
        input: Option<String>,
        /// Rate column (default: the only log10k_* column)
        #[arg(long)]
        ycol: Option<String>,
        /// Temperature, K
        #[arg(long)]
        temp: Option<f64>,
        /// Density of states, 1/eV
        #[arg(long)]
        rho: Option<f64>,
    },
    /// Coupling implied by a reorganization energy and its effective value
    #[command(name = "extract-v", allow_negative_numbers = true)]
    ExtractV {
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        lambda_eff: Option<f64>,
    },
}

#[derive(Args, Debug)]
struct ModelArgs {
    /// Reorganization energy, eV [default: 4]
    #[arg(long)]
    lambda: Option<f64>,
    /// Driving force dG0, eV [default: 0]
    #[arg(long)]
    dg: Option<f64>,
    /// Coupling spec [default: const:0.5]
    #[arg(long)]
    coupling: Option<String>,
}

#[derive(Args, Debug)]
struct MethodArgs {
    /// all, or a comma-separated subset of marcus,shift,eff,exact
    #[arg(long)]
    method: Option<String>,
}

#[derive(Args, Debug)]
struct ElectrodeArgs {
    /// Temperature, K [default: 300]
    #[arg(long)]
    temp: Option<f64>,
    /// Density of states, 1/eV [default: 1]
    #[arg(long)]
    rho: Option<f64>,
}

const CONFIG_KEYS: &[&str] = &[
    "lambda",
    "dg",
    "coupling",
    "method",
    "qmin",
    "qmax",
    "n",
    "x",
    "from",
    "to",
    "temp",
    "rho",
    "eta",
    "eta_from",
    "eta_to",
    "tmin",
    "tmax",
    "input",
    "ycol",
    "lambda_eff",
    "out",
    "strict",
    "quiet",
];

/// Merges flag values over config-file values over defaults, collecting
/// every problem instead of stopping at the first.
struct Settings {
    file: Map<String, Value>,
    problems: Vec<String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Self {
        let mut s = Settings {
            file: Map::new(),
            problems: Vec::new(),
        };
        let Some(path) = path else { return s };
        match fs::read_to_string(path) {
            Err(e) => s.problems.push(format!("cannot read config {}: {e}", path.display())),
            Ok(text) => match serde_json::from_str::<Value>(&text) {
                Ok(Value::Object(map)) => {
                    for (k, v) in &map {
                        if !CONFIG_KEYS.contains(&k.as_str()) {
                            s.problems.push(format!("unknown config key {k:?}"));
                        } else if v.is_array() || v.is_object() {
                            s.problems.push(format!("config key {k:?} must be a primitive value"));
                        }
                    }
                    s.file = map;
                }
                Ok(_) => s.problems.push("config file must hold a JSON object".into()),
                Err(e) => s.problems.push(format!("config file is not valid JSON: {e}")),
            },
        }
        s
    }

    fn number(&mut self, key: &str, flag: Option<f64>, default: Option<f64>) -> f64 {
        if let Some(v) = flag {
            return v;
        }
        match self.file.get(key) {
            Some(Value::Number(n)) => n.as_f64().unwrap_or(f64::NAN),
            Some(other) => {
                self.problems
                    .push(format!("config key {key:?} must be a number, got {other}"));
                f64::NAN
            }
            None => default.unwrap_or_else(|| {
                self.problems.push(format!("--{} is required", key.replace('_', "-")));
                f64::NAN
            }),
        }
    }

    fn count(&mut self, key: &str, flag: Option<usize>, default: usize) -> usize {
        if let Some(v) = flag {
            return v;
        }
        match self.file.get(key) {
            Some(Value::Number(n)) if n.as_u64().is_some() => n.as_u64().unwrap() as usize,
            Some(other) => {
                self.problems.push(format!(
                    "config key {key:?} must be a non-negative integer, got {other}"
                ));
                default
            }
            None => default,
        }
    }

    fn text(&mut self, key: &str, flag: Option<String>, default: Option<&str>) -> Option<String> {
        if flag.is_some() {
            return flag;
        }
        match self.file.get(key) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(other) => {
                self.problems
                    .push(format!("config key {key:?} must be a string, got {other}"));
                None
            }
            None => default.map(str::to_owned),
        }
    }

    fn switch(&mut self, key: &str, flag: bool) -> bool {
        if flag {
            return true;
        }
        match self.file.get(key) {
            Some(Value::Bool(b)) => *b,
            Some(other) => {
                self.problems
                    .push(format!("config key {key:?} must be true or false, got {other}"));
                false
            }
            None => false,
        }
    }

    fn check<T>(&mut self, r: crate::error::Result<T>) -> Option<T> {
        r.map_err(|e| self.problems.push(e.to_string())).ok()
    }

    fn model(&mut self, m: ModelArgs) -> (DiabaticSystem, CouplingModel) {
        let sys = DiabaticSystem {
            lambda: self.number("lambda", m.lambda, Some(4.0)),
            dg0: self.number("dg", m.dg, Some(0.0)),
        };
        self.check(sys.validate());
        let spec = self.text("coupling", m.coupling, Some("const:0.5")).unwrap_or_default();
        let coupling = self.check(spec.parse()).unwrap_or(CouplingModel::constant(0.0));
        (sys, coupling)
    }

    fn methods(&mut self, m: MethodArgs) -> Vec<BarrierMethod> {
        let spec = self.text("method", m.method, Some("all")).unwrap_or_default();
        if spec.trim() == "all" {
            return BarrierMethod::ALL.to_vec();
        }
        let mut chosen = Vec::new();
        for part in spec.split(',') {
            if let Some(m) = self.check(part.trim().parse::<BarrierMethod>()) {
                chosen.push(m);
            }
        }
        if chosen.is_empty() && self.problems.is_empty() {
            self.problems.push("no barrier method selected".into());
        }
        BarrierMethod::ALL.into_iter().filter(|m| chosen.contains(m)).collect()
    }

    fn finish(self) -> Result<(), Failure> {
        if self.problems.is_empty() {
            Ok(())
        } else {
            Err(Failure::usage(self.problems.join("; ")))
        }
    }
}

#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::usage(e.to_string())
    }
}

/// What a subcommand produced: CSV text, warnings, and whether a fit failed
/// to converge.
struct Outcome {
    csv: String,
    warnings: Vec<String>,
    model_failure: bool,
    unconverged: bool,
}

impl Outcome {
    fn table(t: SweepTable) -> Self {
        let model_failure = !t.warnings.is_empty();
        Outcome {
            csv: t.to_csv_string(),
            warnings: t.warnings,
            model_failure,
            unconverged: false,
        }
    }
}

/// Runs the program with `args` (including the program name) and returns
/// the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let mut settings = Settings::load(cli.config.as_ref());
    let strict = settings.switch("strict", cli.strict);
    let quiet = settings.switch("quiet", cli.quiet);
    let out = settings.text("out", cli.out.map(|p| p.to_string_lossy().into_owned()), None);

    let outcome = match dispatch(cli.command, settings, stdin) {
        Ok(o) => o,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            if f.code == EXIT_USAGE {
                let _ = writeln!(stderr, "Run 'marcus-kinetics --help' for usage.");
            }
            return f.code;
        }
    };

    if strict && outcome.model_failure {
        for w in &outcome.warnings {
            let _ = writeln!(stderr, "error: {w}");
        }
        return EXIT_STRICT;
    }
    if !quiet {
        for w in &outcome.warnings {
            let _ = writeln!(stderr, "warning: {w}");
        }
    }
    let written = match &out {
        Some(path) => fs::write(path, &outcome.csv).map_err(|e| format!("cannot write {path}: {e}")),
        None => stdout.write_all(outcome.csv.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(stderr, "error: {e}");
        return EXIT_USAGE;
    }
    if outcome.unconverged {
        if !quiet {
            let _ = writeln!(stderr, "warning: fit did not converge");
        }
        return EXIT_NO_CONVERGENCE;
    }
    EXIT_OK
}

fn dispatch(command: Command, mut s: Settings, stdin: &mut dyn Read) -> Result<Outcome, Failure> {
    match command {
        Command::Surface { model, qmin, qmax, n } => {
            let (sys, c) = s.model(model);
            let q_lo = s.number("qmin", qmin, Some(-0.5));
            let q_hi = s.number("qmax", qmax, Some(1.5));
            let n = s.count("n", n, 401);
            s.finish()?;
            Ok(Outcome::table(surface_table(&sys, &c, q_lo, q_hi, n)?))
        }
        Command::Barrier { model, method } => {
            let (sys, c) = s.model(model);
            let methods = s.methods(method);
            s.finish()?;
            Ok(cmd_barrier(&sys, &c, &methods))
        }
        Command::Sweep {
            model,
            method,
            x,
            from,
            to,
            n,
        } => {
            let (sys, c) = s.model(model);
            let methods = s.methods(method);
            let x = s.text("x", x, None);
            let variable = match x.as_deref().map(str::trim) {
                Some("dg") => Some(SweepVariable::Dg0),
                Some("v") => Some(SweepVariable::CouplingScalar),
                Some("lambda") => Some(SweepVariable::Lambda),
                Some(other) => {
                    s.problems
                        .push(format!("unknown sweep variable {other:?}; expected dg, v or lambda"));
                    None
                }
                None => {
                    s.problems.push("--x is required (dg, v or lambda)".into());
                    None
                }
            };
            let (range, n_default) = match variable {
                Some(SweepVariable::CouplingScalar) => (analysis::presets::COUPLING_RANGE, 25),
                Some(SweepVariable::Lambda) => (analysis::presets::LAMBDA_RANGE, 29),
                _ => (analysis::presets::DG0_RANGE, 33),
            };
            let from = s.number("from", from, Some(range.0));
            let to = s.number("to", to, Some(range.1));
            let n = s.count("n", n, n_default);
            let spec = variable.map(|variable| SweepSpec {
                variable,
                from,
                to,
                n,
                fixed: FixedParams {
                    sys,
                    coupling: c,
                    cond: default_conditions(),
                },
                methods,
            });
            if let Some(spec) = &spec {
                s.check(spec.validate());
            }
            s.finish()?;
            Ok(Outcome::table(analysis::barrier_sweep(&spec.expect("validated"))?))
        }
        Command::Tafel {
            model,
            method,
            electrode,
            eta_from,
            eta_to,
            n,
        } => {
            let (sys, c) = s.model(model);
            let methods = s.methods(method);
            let cond = electrode_conditions(&mut s, &electrode, 0.0);
            let (lo, hi) = analysis::presets::ETA_RANGE;
            let from = s.number("eta_from", eta_from, Some(lo));
            let to = s.number("eta_to", eta_to, Some(hi));
            let n = s.count("n", n, 61);
            let spec = SweepSpec {
                variable: SweepVariable::EtaF,
                from,
                to,
                n,
                fixed: FixedParams { sys, coupling: c, cond },
                methods,
            };
            s.check(spec.validate());
            s.finish()?;
            Ok(Outcome::table(analysis::tafel_sweep(&spec)?))
        }
        Command::Arrhenius {
            model,
            method,
            eta,
            rho,
            tmin,
            tmax,
            n,
        } => {
            let (sys, c) = s.model(model);
            let methods = s.methods(method);
            let eta = s.number("eta", eta, Some(0.0));
            let rho = s.number("rho", rho, Some(1.0));
            let t_lo = s.number("tmin", tmin, Some(250.0));
            let t_hi = s.number("tmax", tmax, Some(350.0));
            let n = s.count("n", n, 21);
            if !(t_lo > 0.0 && t_hi > t_lo) {
                s.problems.push(format!(
                    "temperature range requires 0 < tmin < tmax, got [{t_lo}, {t_hi}]"
                ));
            }
            let cond = ElectrodeConditions {
                temperature: t_hi,
                eta_f: eta,
                rho,
                prefactor: PrefactorKind::Adiabatic,
            };
            let spec = SweepSpec {
                variable: SweepVariable::InvTemperature,
                from: 1.0 / t_hi,
                to: 1.0 / t_lo,
                n,
                fixed: FixedParams { sys, coupling: c, cond },
                methods,
            };
            if s.problems.is_empty() {
                s.check(spec.validate());
            }
            s.finish()?;
            Ok(Outcome::table(analysis::arrhenius_sweep(&spec)?))
        }
        Command::Fit { input, ycol, temp, rho } => {
            let input = s.text("input", input, None);
            if input.is_none() {
                s.problems.push("--input is required".into());
            }
            let ycol = s.text("ycol", ycol, None);
            let temperature = s.number("temp", temp, Some(300.0));
            let rho = s.number("rho", rho, Some(1.0));
            s.check(ElectrodeConditions::new(
                temperature,
                0.0,
                rho,
                PrefactorKind::Adiabatic,
            ));
            s.finish()?;
            cmd_fit(&input.expect("checked"), ycol.as_deref(), temperature, rho, stdin)
        }
        Command::ExtractV { lambda, lambda_eff } => {
            let lambda = s.number("lambda", lambda, None);
            let lambda_eff = s.number("lambda_eff", lambda_eff, None);
            s.finish()?;
            let v = extract_coupling(lambda, lambda_eff)?;
            Ok(Outcome {
                csv: format!("V_eV\n{}\n", format_sig(v)),
                warnings: Vec::new(),
                model_failure: false,
                unconverged: false,
            })
        }
    }
}

fn default_conditions() -> ElectrodeConditions {
    ElectrodeConditions {
        temperature: 300.0,
        eta_f: 0.0,
        rho: 1.0,
        prefactor: PrefactorKind::Adiabatic,
    }
}

fn electrode_conditions(s: &mut Settings, e: &ElectrodeArgs, eta_f: f64) -> ElectrodeConditions {
    ElectrodeConditions {
        temperature: s.number("temp", e.temp, Some(300.0)),
        eta_f,
        rho: s.number("rho", e.rho, Some(1.0)),
        prefactor: PrefactorKind::Adiabatic,
    }
}

pub const BARRIER_COLUMNS: [&str; 6] = ["method", "E_star_eV", "q_ts", "q_r", "lambda_used_eV", "activationless"];

fn cmd_barrier(sys: &DiabaticSystem, c: &CouplingModel, methods: &[BarrierMethod]) -> Outcome {
    let mut warnings: Vec<String> = validity_report(sys, c)
        .iter()
        .map(|w| format!("validity: {w}"))
        .collect();
    let mut model_failure = false;
    let mut buf = Vec::new();
    {
        let mut w = csv_writer(&mut buf);
        w.write_record(BARRIER_COLUMNS).expect("in-memory write");
        for &m in methods {
            let record: Vec<String> = match barrier(sys, c, m) {
                Ok(r) => vec![
                    m.short_name().into(),
                    format_sig(r.e_star),
                    r.q_ts.map(format_sig).unwrap_or_default(),
                    format_sig(r.q_r),
                    format_sig(r.lambda_used),
                    if r.activationless { "1" } else { "0" }.into(),
                ],
                Err(e) => {
                    model_failure = true;
                    warnings.push(format!("{m}: {e}"));
                    vec![
                        m.short_name().into(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]
                }
            };
            w.write_record(&record).expect("in-memory write");
        }
        w.flush().expect("in-memory write");
    }
    Outcome {
        csv: String::from_utf8(buf).expect("ASCII output"),
        warnings,
        model_failure,
        unconverged: false,
    }
}

pub const FIT_COLUMNS: [&str; 5] = [
    "lambda_eff_eV",
    "log10_scale",
    "rms_residual_dex",
    "n_points",
    "converged",
];

fn cmd_fit(
    input: &str,
    ycol: Option<&str>,
    temperature: f64,
    rho: f64,
    stdin: &mut dyn Read,
) -> Result<Outcome, Failure> {
    let table = if input == "-" {
        SweepTable::read_csv(stdin)?
    } else {
        let file = fs::File::open(input).map_err(|e| Failure::usage(format!("cannot open {input}: {e}")))?;
        SweepTable::read_csv(file)?
    };
    let x_name = SweepVariable::EtaF.column_name();
    let eta = table
        .column(x_name)
        .ok_or_else(|| Failure::usage(format!("input has no {x_name} column")))?;
    let y_name = match ycol {
        Some(name) => name.to_string(),
        None => {
            let candidates: Vec<&String> = table.columns.iter().filter(|c| c.starts_with("log10k_")).collect();
            match candidates.as_slice() {
                [one] => one.to_string(),
                [] => return Err(Failure::usage("input has no log10k_* column")),
                _ => {
                    return Err(Failure::usage(format!(
                        "input has several rate columns ({}); choose one with --ycol",
                        candidates.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", ")
                    )))
                }
            }
        }
    };
    let y = table
        .column(&y_name)
        .ok_or_else(|| Failure::usage(format!("input has no {y_name} column")))?;
    let (eta, y): (Vec<f64>, Vec<f64>) = eta
        .into_iter()
        .zip(y)
        .filter(|(a, b)| a.is_finite() && b.is_finite())
        .unzip();
    let fit = analysis::fit_lambda_eff(&eta, &y, temperature, rho)?;
    let csv = format!(
        "{}\n{},{},{},{},{}\n",
        FIT_COLUMNS.join(","),
        format_sig(fit.lambda_eff),
        format_sig(fit.log10_scale),
        format_sig(fit.rms_residual),
        fit.n_points,
        u8::from(fit.converged)
    );
    Ok(Outcome {
        csv,
        warnings: Vec::new(),
        model_failure: false,
        unconverged: !fit.converged,
    })
}
