//! Command-line front end. `run` never panics on bad input; it returns the
//! process exit code: 0 on success, 1 on parse/usage errors, 2 when a
//! command needs an on-torus field and the given one is not.

use std::ffi::OsString;
use std::io::Write;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::json;

use crate::curves;
use crate::dynamics::{classify_singularity, singular_points, GridOptions};
use crate::families::matching_families;
use crate::integrator::{export, integrate_with, ExportFormat, IntegrateOptions};
use crate::report::{analyse, meridian_report, parallel_report, InputEcho, ReportOptions};
use crate::vfield::{RationalFn, Torus, VectorField};

#[derive(Debug, Parser)]
#[command(
    name = "torus-fields",
    version,
    about = "Polynomial vector fields on the torus (x^2 + y^2 - a^2)^2 + z^2 = 1"
)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// x-component P of the field
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    px: String,
    /// y-component Q of the field
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    qy: String,
    /// z-component R of the field
    #[arg(long, global = true, default_value = "0", allow_hyphen_values = true)]
    rz: String,
    /// m = a^2 as a rational, e.g. 4 or 9/4; must exceed 1
    #[arg(long, global = true, default_value = "4")]
    m: String,
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Write output to this file instead of stdout
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    /// Seed for randomised cross-checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test whether the torus is invariant and print the cofactor
    Check,
    /// Lie bracket [X, Y] with X from --px/--qy/--rz and Y from --px2/--qy2/--rz2
    Bracket {
        #[arg(long, allow_hyphen_values = true)]
        px2: String,
        #[arg(long, allow_hyphen_values = true)]
        qy2: String,
        #[arg(long, allow_hyphen_values = true)]
        rz2: String,
    },
    /// Extactic polynomial Qx - Py of the meridian planes
    Extactic,
    /// Invariant meridians and their periodicity
    Meridians,
    /// Invariant parallels and their periodicity
    Parallels,
    /// Classify a singular point of a field (Ay, -Ax, 0)
    Classify {
        /// Point "x,y,z" on the torus
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Singular points on the torus
    Singular {
        /// Grid size per angle
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Check that num/den is a first integral
    FirstIntegral {
        #[arg(long, allow_hyphen_values = true)]
        num: String,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        den: String,
    },
    /// Integrate a trajectory with fixed-step RK4
    Integrate {
        /// Start point "x,y,z"
        #[arg(long, allow_hyphen_values = true)]
        start: String,
        #[arg(long)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        /// Project back onto the torus after every step
        #[arg(long)]
        project: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Record every k-th step
        #[arg(long, default_value_t = 1)]
        every: usize,
    },
    /// Run the full analysis
    Report {
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    NotOnTorus(Output),
}

/// What a command produced; written to `--out` or stdout.
struct Output(Vec<u8>);

impl Output {
    fn text(s: String) -> Self {
        Output(s.into_bytes())
    }

    fn json(v: &impl Serialize) -> Self {
        let mut s = serde_json::to_string_pretty(v).expect("output serialises");
        s.push('\n');
        Output(s.into_bytes())
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

fn parse_m(text: &str) -> Result<Torus, Failure> {
    let m = BigRational::from_str(text.trim())
        .map_err(|_| usage(format!("--m: '{text}' is not a rational number")))?;
    if m <= BigRational::one() {
        return Err(usage(format!(
            "--m: the torus needs a > 1, i.e. m = a^2 > 1; got m = {m}"
        )));
    }
    Torus::new(m).map_err(usage)
}

fn parse_point(flag: &str, text: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<_> = text.split(',').map(|s| s.trim().parse::<f64>()).collect();
    match parts.as_slice() {
        [Ok(x), Ok(y), Ok(z)] if x.is_finite() && y.is_finite() && z.is_finite() => {
            Ok([*x, *y, *z])
        }
        _ => Err(usage(format!(
            "{flag}: expected three comma-separated numbers \"x,y,z\", got '{text}'"
        ))),
    }
}

fn field(c: &Common, torus: &Torus) -> Result<VectorField, Failure> {
    let comp =
        |flag: &str, text: &str| torus.parse(text).map_err(|e| usage(format!("{flag}: {e}")));
    Ok(VectorField::new(
        comp("--px", &c.px)?,
        comp("--qy", &c.qy)?,
        comp("--rz", &c.rz)?,
    ))
}

fn require_on_torus(chi: &VectorField, torus: &Torus, json: bool) -> Result<(), Failure> {
    if chi.cofactor_on_torus(torus).is_invariant() {
        Ok(())
    } else if json {
        Err(Failure::NotOnTorus(Output::json(
            &json!({ "on_torus": false }),
        )))
    } else {
        Err(Failure::NotOnTorus(Output::text("NOT on torus\n".into())))
    }
}

fn execute(cli: &Cli) -> Result<Output, Failure> {
    let c = &cli.common;
    let torus = parse_m(&c.m)?;
    let chi = field(c, &torus)?;
    match &cli.command {
        Command::Check => {
            let inv = chi.cofactor_on_torus(&torus);
            match inv.cofactor() {
                Some(k) if c.json => Ok(Output::json(
                    &json!({ "on_torus": true, "cofactor": k.to_string() }),
                )),
                Some(k) => Ok(Output::text(format!("on torus, cofactor K = {k}\n"))),
                None => require_on_torus(&chi, &torus, c.json)
                    .and_then(|_| Err(usage("cofactor missing"))),
            }
        }
        Command::Bracket { px2, qy2, rz2 } => {
            let comp = |flag: &str, text: &str| {
                torus.parse(text).map_err(|e| usage(format!("{flag}: {e}")))
            };
            let other = VectorField::new(
                comp("--px2", px2)?,
                comp("--qy2", qy2)?,
                comp("--rz2", rz2)?,
            );
            let [p, q, r] = chi.lie_bracket(&other).to_strings();
            Ok(if c.json {
                Output::json(&json!({ "px": p, "qy": q, "rz": r }))
            } else {
                Output::text(format!("P = {p}\nQ = {q}\nR = {r}\n"))
            })
        }
        Command::Extactic => {
            let e = curves::extactic_xy(&chi).to_string();
            Ok(if c.json {
                Output::json(&json!({ "extactic": e }))
            } else {
                Output::text(format!("{e}\n"))
            })
        }
        Command::Meridians | Command::Parallels => {
            require_on_torus(&chi, &torus, c.json)?;
            let tag = matching_families(&chi, &torus).remove(0);
            let mut notes = Vec::new();
            let (text, value) = if matches!(cli.command, Command::Meridians) {
                let r = meridian_report(&chi, &torus, &tag, &mut notes);
                (r.as_ref().map(|r| r.to_text()), serde_json::to_value(&r))
            } else {
                let r = parallel_report(&chi, &torus, &tag, &mut notes);
                (r.as_ref().map(|r| r.to_text()), serde_json::to_value(&r))
            };
            match text {
                None => Err(usage(notes.join("; "))),
                Some(_) if c.json => Ok(Output::json(&value.expect("report serialises"))),
                Some(t) => Ok(Output::text(t)),
            }
        }
        Command::Classify { point } => {
            require_on_torus(&chi, &torus, c.json)?;
            let q = parse_point("--point", point)?;
            let class = classify_singularity(&chi, q, &torus).map_err(usage)?;
            Ok(if c.json {
                Output::json(&json!({ "point": q, "class": class }))
            } else {
                Output::text(format!(
                    "{}\n",
                    serde_json::to_value(class)
                        .expect("class serialises")
                        .as_str()
                        .unwrap_or("?")
                ))
            })
        }
        Command::Singular { grid } => {
            require_on_torus(&chi, &torus, c.json)?;
            if *grid < 8 {
                return Err(usage("--grid must be at least 8"));
            }
            let tag = matching_families(&chi, &torus).remove(0);
            let s = singular_points(&chi, &tag, &torus, GridOptions { n: *grid }).map_err(usage)?;
            Ok(if c.json {
                Output::json(&s)
            } else {
                let mut t = format!(
                    "{:?}: {}\n",
                    s.method,
                    serde_json::to_string(&s.set).expect("set serialises")
                );
                for w in &s.warnings {
                    t.push_str(&format!("warning: {w}\n"));
                }
                Output::text(t)
            })
        }
        Command::FirstIntegral { num, den } => {
            let n = torus.parse(num).map_err(|e| usage(format!("--num: {e}")))?;
            let d = torus.parse(den).map_err(|e| usage(format!("--den: {e}")))?;
            let h = RationalFn::new(n, d).map_err(|e| usage(format!("--den: {e}")))?;
            let ok = chi.check_first_integral(&h);
            Ok(if c.json {
                Output::json(&json!({ "integral": h.to_string(), "first_integral": ok }))
            } else if ok {
                Output::text(format!("{h} is a first integral\n"))
            } else {
                Output::text(format!("{h} is NOT a first integral\n"))
            })
        }
        Command::Integrate {
            start,
            t_end,
            dt,
            project,
            format,
            every,
        } => {
            let start = parse_point("--start", start)?;
            let opts = IntegrateOptions {
                project: *project,
                sample_every: *every,
                ..IntegrateOptions::new(*t_end, *dt)
            };
            let traj = integrate_with(&chi, &torus, start, opts).map_err(usage)?;
            let fmt = match (format, c.json) {
                (Format::Json, _) | (_, true) => ExportFormat::Json,
                (Format::Csv, false) => ExportFormat::Csv,
            };
            Ok(Output(export(&traj, fmt)))
        }
        Command::Report { grid } => {
            if *grid < 8 {
                return Err(usage("--grid must be at least 8"));
            }
            let input = InputEcho {
                px: c.px.clone(),
                qy: c.qy.clone(),
                rz: c.rz.clone(),
                m: torus.m().to_string(),
            };
            let opts = ReportOptions {
                seed: c.seed,
                grid: GridOptions { n: *grid },
                ..ReportOptions::default()
            };
            let rep = analyse(&chi, &torus, input, &opts);
            let out = if c.json {
                Output::json(&rep)
            } else {
                Output::text(rep.to_text())
            };
            if rep.on_torus {
                Ok(out)
            } else {
                Err(Failure::NotOnTorus(out))
            }
        }
    }
}

fn emit(
    output: &Output,
    path: Option<&std::path::Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> bool {
    let res = match path {
        Some(p) => std::fs::write(p, &output.0),
        None => out.write_all(&output.0),
    };
    if let Err(e) = res {
        let _ = writeln!(err, "error: cannot write output: {e}");
        return false;
    }
    true
}

/// Parses `args` (including the program name) and runs one command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let path = cli.common.out.as_deref();
    match execute(&cli) {
        Ok(o) => {
            if emit(&o, path, out, err) {
                0
            } else {
                1
            }
        }
        Err(Failure::NotOnTorus(o)) => {
            emit(&o, path, out, err);
            2
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nFor more information, try '--help'.");
            1
        }
    }
}
