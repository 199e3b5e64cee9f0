//! `acsf`: classify soliton data, synthesize and verify solution curves,
//! draw phase portraits and tabulate the self-similar motion.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 ambiguous
//! classification, 3 verification failure.

mod svg;

use affine_solitons::action::SolitonAction;
use affine_solitons::classify::{classify, CaseTag};
use affine_solitons::geometry::{Mat2, SolitonData, Vec2};
use affine_solitons::io::{read_curve_csv, write_curve_csv, write_portrait_csv};
use affine_solitons::phase::{integrate, Event, PhaseSystem, StopRules, TrajectorySegment};
use affine_solitons::synthesis::{period_1d, synthesize, CurveFamily, Variant, Window};
use affine_solitons::verify::{flow_residual, soliton_residual, ResidualReport};
use affine_solitons::Error;
use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use svg::{Bounds, Svg};

#[derive(Parser)]
#[command(name = "acsf", version, about = "Affine curve shortening flow solitons")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce (B, C) to its normal form and print the report as JSON.
    Classify {
        /// B as a11,a12,a21,a22.
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        /// C as c1,c2.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Relative tolerance of the algebraic tests.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample a solution family of a degenerate case and verify it.
    Synthesize {
        /// Case label, 1-a to 1-g.
        #[arg(long)]
        case: String,
        /// Family name, e.g. parabola, hyperbola, convex-well, periodic,
        /// quintic, scooper, separatrix, trajectory, vertical-tangent.
        #[arg(long)]
        variant: String,
        /// Family constants, comma separated, in the order of the family's
        /// formula (see README); omitted values take defaults.
        #[arg(long, allow_hyphen_values = true)]
        constants: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lo: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        hi: Option<f64>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
        /// Curve CSV output.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Draw trajectories of a phase-plane system with its nullclines.
    Portrait {
        /// 1-c, 1-e or 1-c-wv.
        #[arg(long)]
        system: String,
        /// Initial condition u,v; may be repeated.
        #[arg(long = "seed", allow_hyphen_values = true)]
        seeds: Vec<String>,
        /// Add this many seeds evenly spaced on a circle.
        #[arg(long, default_value_t = 0)]
        ring: usize,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        /// Integration span in each direction.
        #[arg(long, default_value_t = 30.0)]
        span: f64,
        /// Half-width of the plotted square.
        #[arg(long, default_value_t = 2.5)]
        view: f64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Residual of the soliton equation (or of the flow) on a curve CSV.
    Verify {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Times at which to check the flow instead of the soliton equation.
        #[arg(long)]
        flow: Option<String>,
        #[arg(long, default_value_t = 1e-5)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Tabulate A(t) and H(t) of the self-similar motion as CSV.
    Evolve {
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        c: String,
        /// Explicit times; otherwise `steps + 1` times from 0 to `t-end`.
        #[arg(long)]
        times: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Boundary(Vec<String>),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundaryCase { flags } => Failure::Boundary(flags),
            Error::NotASoliton { .. } => Failure::Verification(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_list(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("cannot parse {t:?} as a number")))?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Failure::Usage(format!("{t:?} is not finite")))
            }
        })
        .collect()
}

fn parse_fixed<const N: usize>(s: &str, what: &str) -> Result<[f64; N], Failure> {
    let v = parse_list(s)?;
    v.try_into()
        .map_err(|v: Vec<f64>| Failure::Usage(format!("{what} needs {N} values, got {}", v.len())))
}

fn parse_data(b: &str, c: &str) -> Result<SolitonData, Failure> {
    let [a11, a12, a21, a22] = parse_fixed::<4>(b, "--b")?;
    let [c1, c2] = parse_fixed::<2>(c, "--c")?;
    Ok(SolitonData::new(Mat2::new(a11, a12, a21, a22), Vec2::new(c1, c2)))
}

fn mat(m: Mat2) -> Value {
    json!([m.a11, m.a12, m.a21, m.a22])
}

fn emit(text: &str, out: Option<&Path>) -> io::Result<()> {
    match out {
        Some(p) => fs::write(p, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn emit_json(v: &Value, out: Option<&Path>) -> io::Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("JSON values serialize");
    text.push('\n');
    emit(&text, out)
}

fn cmd_classify(b: &str, c: &str, tol: f64, out: Option<&Path>) -> CmdResult {
    let data = parse_data(b, c)?;
    if !(tol > 0.0) {
        return Err(Failure::Usage(format!("tolerance {tol} must be positive")));
    }
    match classify(&data, tol) {
        Ok(r) => {
            let report = json!({
                "case": r.case.tag.label(),
                "parameter_a": r.case.a,
                "Q": mat(r.map.linear),
                "H": [r.map.shift.x, r.map.shift.y],
                "canonical_B": mat(r.canonical.b),
                "canonical_C": [r.canonical.c.x, r.canonical.c.y],
                "residual_norm": r.residual_norm,
                "boundary_flags": Vec::<String>::new(),
            });
            emit_json(&report, out)?;
            Ok(())
        }
        Err(Error::BoundaryCase { flags }) => {
            emit_json(&json!({ "case": null, "boundary_flags": flags }), out)?;
            Err(Failure::Boundary(flags))
        }
        Err(e) => Err(e.into()),
    }
}

/// Builds a family from its name and constants; missing trailing constants
/// take the listed defaults.
fn build_variant(name: &str, given: &[f64]) -> Result<Variant, Failure> {
    let defaults: &[f64] = match name {
        "parabola" => &[0.0, 0.0],
        "vertical-line" | "horizontal-line" | "scooper-parabola" => &[0.0],
        "hyperbola" => &[0.0, 1.0],
        "convex-well" | "concave-cap" | "increasing" | "decreasing" | "periodic" => &[0.5, 0.0],
        "quintic" | "scooper" => &[0.0, 0.0],
        "separatrix" => &[0.1],
        "trajectory" => &[0.5, 0.0],
        "vertical-tangent" => &[0.5],
        _ => return Err(Failure::Usage(format!("unknown variant {name:?}"))),
    };
    if given.len() > defaults.len() {
        return Err(Failure::Usage(format!(
            "{name} takes {} constants, got {}",
            defaults.len(),
            given.len()
        )));
    }
    let k: Vec<f64> = (0..defaults.len())
        .map(|i| given.get(i).copied().unwrap_or(defaults[i]))
        .collect();
    Ok(match name {
        "parabola" => Variant::Parabola { c1: k[0], c2: k[1] },
        "vertical-line" => Variant::VerticalLine { c: k[0] },
        "horizontal-line" => Variant::HorizontalLine { c: k[0] },
        "scooper-parabola" => Variant::ScooperParabola { c: k[0] },
        "hyperbola" => Variant::Hyperbola {
            c: k[0],
            sign: k[1].signum(),
        },
        "convex-well" => Variant::ConvexWell { c1: k[0], c2: k[1] },
        "concave-cap" => Variant::ConcaveCap { c1: k[0], c2: k[1] },
        "increasing" => Variant::Increasing { c1: k[0], c2: k[1] },
        "decreasing" => Variant::Decreasing { c1: k[0], c2: k[1] },
        "periodic" => Variant::Periodic { c1: k[0], c2: k[1] },
        "quintic" => Variant::Quintic { c1: k[0], c2: k[1] },
        "scooper" => Variant::Scooper { c1: k[0], c2: k[1] },
        "separatrix" => Variant::Separatrix { eps: k[0] },
        "trajectory" => Variant::Trajectory { u0: k[0], v0: k[1] },
        _ => Variant::VerticalTangent { y0: k[0] },
    })
}

struct SynthesizeArgs<'a> {
    case: &'a str,
    variant: &'a str,
    constants: Option<&'a str>,
    lo: Option<f64>,
    hi: Option<f64>,
    samples: usize,
    out: &'a Path,
    svg: Option<&'a Path>,
}

fn cmd_synthesize(a: SynthesizeArgs) -> CmdResult {
    let case = CaseTag::from_label(a.case).ok_or_else(|| Failure::Usage(format!("unknown case {:?}", a.case)))?;
    let constants = a.constants.map(parse_list).transpose()?.unwrap_or_default();
    let variant = build_variant(a.variant, &constants)?;
    let default = variant.default_window();
    let window = Window::new(a.lo.unwrap_or(default.lo), a.hi.unwrap_or(default.hi), a.samples);
    let family = CurveFamily::new(case, variant, window)?;
    let curve = synthesize(&family)?;

    let mut w = BufWriter::new(File::create(a.out)?);
    write_curve_csv(&curve, &mut w)?;
    w.flush()?;
    if let Some(path) = a.svg {
        let pts: Vec<(f64, f64)> = curve.points().iter().map(|p| (p.x, p.y)).collect();
        let mut plot = Svg::new(Bounds::around(&pts));
        plot.path(&pts, curve.seams(), "#1f4e9c");
        plot.label(&format!("case {}, {}", case.label(), variant.name()));
        fs::write(path, plot.finish())?;
    }

    let residual = soliton_residual(&curve, &family.data())?;
    let tol = family.tolerance();
    println!("samples {}", curve.len());
    println!("residual {:e} (tolerance {tol:e})", residual.sup_norm);
    if let Variant::Periodic { c1, .. } = variant {
        println!("period {:.10}", period_1d(c1)?);
    }
    if residual.sup_norm < tol {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "residual {:e} exceeds the family tolerance {tol:e}",
            residual.sup_norm
        )))
    }
}

fn parse_system(s: &str) -> Result<PhaseSystem, Failure> {
    match s.to_ascii_lowercase().as_str() {
        "1-c" | "1c" | "sys1c" => Ok(PhaseSystem::Deg1c),
        "1-e" | "1e" | "sys1e" => Ok(PhaseSystem::Deg1e),
        "1-c-wv" | "1cwv" | "sys1cwv" => Ok(PhaseSystem::Deg1cWV),
        _ => Err(Failure::Usage(format!(
            "unknown system {s:?}; expected 1-c, 1-e or 1-c-wv"
        ))),
    }
}

struct PortraitArgs<'a> {
    system: &'a str,
    seeds: &'a [String],
    ring: usize,
    radius: f64,
    span: f64,
    view: f64,
    out: &'a Path,
    csv: Option<&'a Path>,
}

fn cmd_portrait(a: PortraitArgs) -> CmdResult {
    let system = parse_system(a.system)?;
    if !(a.span > 0.0 && a.view > 0.0 && a.radius > 0.0) {
        return Err(Failure::Usage("span, view and radius must be positive".into()));
    }
    let mut seeds = a
        .seeds
        .iter()
        .map(|s| parse_fixed::<2>(s, "--seed"))
        .collect::<Result<Vec<_>, _>>()?;
    seeds.extend((0..a.ring).map(|i| {
        let phi = std::f64::consts::TAU * i as f64 / a.ring as f64;
        [a.radius * phi.cos(), a.radius * phi.sin()]
    }));

    let rules = StopRules {
        max_span: a.span,
        max_radius: 1e3 * a.view,
        ..Default::default()
    };
    let mut trajectories: Vec<TrajectorySegment> = Vec::new();
    for seed in &seeds {
        for direction in [1.0, -1.0] {
            trajectories.push(integrate(system, *seed, 0.0, direction, &rules, &Event::ALL)?);
        }
    }

    let mut plot = Svg::new(Bounds::square(a.view));
    for dir in system.nullclines() {
        plot.through_origin(dir, "#c0392b");
    }
    if system == PhaseSystem::Deg1cWV {
        // v = w³
        let n = 400;
        let pts: Vec<(f64, f64)> = (0..=n)
            .map(|i| {
                let w = -a.view + 2.0 * a.view * i as f64 / n as f64;
                (w, w * w * w)
            })
            .collect();
        plot.path(&pts, &[], "#c0392b");
    }
    for t in &trajectories {
        let pts: Vec<(f64, f64)> = t.states.iter().map(|s| (s[0], s[1])).collect();
        plot.path(&pts, &[], "#1f4e9c");
        for h in &t.events {
            plot.marker((h.state[0], h.state[1]), "#e67e22");
        }
    }
    for s in &seeds {
        plot.marker((s[0], s[1]), "black");
    }
    plot.label(&format!("system {}, {} seeds", system.label(), seeds.len()));
    fs::write(a.out, plot.finish())?;

    if let Some(path) = a.csv {
        let mut w = BufWriter::new(File::create(path)?);
        write_portrait_csv(&trajectories, &mut w)?;
        w.flush()?;
    }
    println!("trajectories {}", trajectories.len());
    Ok(())
}

fn report_json(r: &ResidualReport) -> Value {
    json!({
        "sup_norm": r.sup_norm,
        "n_samples": r.n_samples,
        "n_excluded": r.n_excluded,
        "argmax_u": r.argmax_u,
        "argmax_t": r.argmax_t,
    })
}

fn cmd_verify(curve: &Path, b: &str, c: &str, flow: Option<&str>, threshold: f64, out: Option<&Path>) -> CmdResult {
    let data = parse_data(b, c)?;
    if !(threshold > 0.0) {
        return Err(Failure::Usage(format!("threshold {threshold} must be positive")));
    }
    let curve = read_curve_csv(File::open(curve)?)?;
    let report = match flow {
        Some(times) => flow_residual(&curve, &data, &parse_list(times)?)?,
        None => soliton_residual(&curve, &data)?,
    };
    emit_json(&report_json(&report), out)?;
    if report.sup_norm < threshold {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "residual {:e} is not below {threshold:e}",
            report.sup_norm
        )))
    }
}

fn cmd_evolve(b: &str, c: &str, times: Option<&str>, t_end: f64, steps: usize, out: Option<&Path>) -> CmdResult {
    let data = parse_data(b, c)?;
    let times = match times {
        Some(s) => parse_list(s)?,
        None => {
            if steps == 0 {
                return Err(Failure::Usage("steps must be positive".into()));
            }
            (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect()
        }
    };
    let action = SolitonAction::new(data);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "a11", "a12", "a21", "a22", "hx", "hy"])
        .map_err(|e| Failure::Usage(e.to_string()))?;
    for &t in &times {
        let a = action.matrix(t)?;
        let h = action.translation(t)?;
        w.write_record([t, a.a11, a.a12, a.a21, a.a22, h.x, h.y].map(|v| format!("{v:?}")))
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    emit(&String::from_utf8(bytes).expect("CSV output is UTF-8"), out)?;
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Classify { b, c, tol, out } => cmd_classify(&b, &c, tol, out.as_deref()),
        Command::Synthesize {
            case,
            variant,
            constants,
            lo,
            hi,
            samples,
            out,
            svg,
        } => cmd_synthesize(SynthesizeArgs {
            case: &case,
            variant: &variant,
            constants: constants.as_deref(),
            lo,
            hi,
            samples,
            out: &out,
            svg: svg.as_deref(),
        }),
        Command::Portrait {
            system,
            seeds,
            ring,
            radius,
            span,
            view,
            out,
            csv,
        } => cmd_portrait(PortraitArgs {
            system: &system,
            seeds: &seeds,
            ring,
            radius,
            span,
            view,
            out: &out,
            csv: csv.as_deref(),
        }),
        Command::Verify {
            curve,
            b,
            c,
            flow,
            threshold,
            out,
        } => cmd_verify(&curve, &b, &c, flow.as_deref(), threshold, out.as_deref()),
        Command::Evolve {
            b,
            c,
            times,
            t_end,
            steps,
            out,
        } => cmd_evolve(&b, &c, times.as_deref(), t_end, steps, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Boundary(flags)) => {
            eprintln!("error: ambiguous classification: {}", flags.join("; "));
            ExitCode::from(2)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
    }
}
