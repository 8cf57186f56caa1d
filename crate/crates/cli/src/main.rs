//! `gcsent`: closed-form entanglement of two-mode superpositions of
//! generalized coherent states, with a number-state oracle for checking.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gcsent::analysis::{
    self, check_grid, check_point_at, default_verification_grid, find_extrema_e, linspace,
    AmplitudeAxis, Figure, PointCheck, SweepRow, DEFAULT_STEPS, DETERMINANT_TOL, ORACLE_TOL,
    RANK_TOL,
};
use gcsent::families::DEFAULT_TAIL_TOL;
use gcsent::parse::{parse_complex, parse_phase, parse_phase_list};
use gcsent::{analyze, table, Amplitude, Error, Family, SingleMode, Superposition, Variant};
use num_complex::Complex64;
use serde_json::json;

const EXIT_INVALID: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_TRUNCATION: u8 = 5;
const EXIT_DEGENERATE: u8 = 6;
const EXIT_OTHER: u8 = 1;

#[derive(Parser)]
#[command(name = "gcsent", version, about = "Entanglement of superposed generalized coherent states")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closed-form report for a single superposition (JSON).
    Compute(PointArgs),
    /// Sweep over amplitude or over A and write rows.
    Sweep(SweepArgs),
    /// Write the four figure presets fig1.csv .. fig4.csv.
    Figures(FiguresArgs),
    /// Compare closed form, Bell determinant and number-state oracle.
    Verify(VerifyArgs),
    /// Locate local extrema of the entanglement along the amplitude axis (JSON).
    Extrema(ExtremaArgs),
}

#[derive(Args, Clone)]
struct StateArgs {
    /// cs, sv, ecs, ocs or ls
    #[arg(long)]
    family: Family,
    /// Complex amplitude for cs, sv, ecs and ocs, e.g. `1.2` or `0.5+0.3i`.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "q")]
    beta: Option<String>,
    /// Logarithmic-state parameter, |q| < 1.
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    /// Complex vacuum amplitude of a logarithmic state.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "beta")]
    gamma: Option<String>,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Relative phase, radians or `pi` literals such as `0.5pi`, `pi/4`.
    #[arg(long, allow_hyphen_values = true, value_parser = phase)]
    phi: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::Aligned)]
    variant: VariantArg,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum VariantArg {
    Aligned,
    Swapped,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Aligned => Variant::Aligned,
            VariantArg::Swapped => Variant::Swapped,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Axis {
    /// Concurrence against A in [1, sqrt 2], family independent.
    A,
    /// A, concurrence and entanglement against |beta| or |q|.
    Amplitude,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum, default_value_t = Axis::Amplitude)]
    axis: Axis,
    /// Comma-separated families (amplitude axis).
    #[arg(long, value_delimiter = ',')]
    family: Vec<Family>,
    /// Comma-separated real vacuum amplitudes for ls curves.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma: Vec<f64>,
    /// Comma-separated phases; one curve per phase.
    #[arg(long, allow_hyphen_values = true, value_parser = phases, default_value = "0.5pi")]
    phi: PhaseList,
    #[arg(long, value_enum, default_value_t = VariantArg::Aligned)]
    variant: VariantArg,
    /// Grid start; defaults to 1 for A, 0.01 for |beta|, 0.001 for |q|.
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    /// Grid end; defaults to sqrt 2 for A, 3 for |beta|, 0.999 for |q|.
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct FiguresArgs {
    #[arg(long, env = "GCSENT_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// Built-in grid instead of a single point.
    #[arg(long, value_enum, conflicts_with_all = ["family", "beta", "q", "gamma", "phi"])]
    grid: Option<GridArg>,
    #[arg(long)]
    family: Option<Family>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "q")]
    beta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<f64>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "beta")]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = phase)]
    phi: Option<f64>,
    #[arg(long, value_enum, default_value_t = VariantArg::Aligned)]
    variant: VariantArg,
    /// Oracle cutoff per mode; chosen from the tail bound when absent.
    #[arg(long)]
    nmax: Option<u64>,
    /// Maximum discarded probability mass per mode.
    #[arg(long, default_value_t = DEFAULT_TAIL_TOL)]
    tail_tol: f64,
    #[arg(long)]
    json: bool,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum GridArg {
    Default,
}

#[derive(Args)]
struct ExtremaArgs {
    #[arg(long)]
    family: Family,
    /// Vacuum amplitude for ls.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<String>,
    #[arg(long, allow_hyphen_values = true, value_parser = phase, default_value = "0.5pi")]
    phi: f64,
    #[arg(long, value_enum, default_value_t = VariantArg::Aligned)]
    variant: VariantArg,
    #[arg(long, allow_hyphen_values = true)]
    from: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    to: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    steps: usize,
}

#[derive(Clone)]
struct PhaseList(Vec<f64>);

fn phase(s: &str) -> Result<f64, String> {
    parse_phase(s).map_err(|e| e.to_string())
}

fn phases(s: &str) -> Result<PhaseList, String> {
    parse_phase_list(s).map(PhaseList).map_err(|e| e.to_string())
}

/// Failures that end the process, with their exit codes.
enum Failure {
    Lib(Error),
    Usage(String),
    Io(PathBuf, io::Error),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse(_)) | Failure::Usage(_) => EXIT_INVALID,
            Failure::Lib(Error::Domain(_)) => EXIT_DOMAIN,
            Failure::Lib(Error::Truncation { .. }) => EXIT_TRUNCATION,
            Failure::Lib(Error::DegenerateState) => EXIT_DEGENERATE,
            Failure::Verification => EXIT_VERIFY,
            Failure::Lib(_) | Failure::Io(..) => EXIT_OTHER,
        }
    }

    fn message(&self) -> Option<String> {
        match self {
            Failure::Lib(e) => Some(e.to_string()),
            Failure::Usage(m) => Some(m.clone()),
            Failure::Io(path, e) => Some(format!("{}: {e}", path.display())),
            Failure::Verification => None,
        }
    }
}

type Outcome<T = ()> = Result<T, Failure>;

fn single_mode(family: Family, beta: Option<&str>, q: Option<f64>, gamma: Option<&str>) -> Outcome<SingleMode> {
    let amp = if family.uses_beta() {
        if q.is_some() || gamma.is_some() {
            return Err(Failure::Usage(format!("{family} takes --beta, not --q/--gamma")));
        }
        let beta = beta.ok_or_else(|| Failure::Usage(format!("{family} requires --beta")))?;
        Amplitude::Beta(parse_complex(beta)?)
    } else {
        if beta.is_some() {
            return Err(Failure::Usage("ls takes --q and --gamma, not --beta".into()));
        }
        let (Some(q), Some(gamma)) = (q, gamma) else {
            return Err(Failure::Usage("ls requires --q and --gamma".into()));
        };
        Amplitude::Log { q, gamma: parse_complex(gamma)? }
    };
    Ok(SingleMode::new(family, amp)?)
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([z.re, z.im])
}

fn compute(args: PointArgs) -> Outcome {
    let st = &args.state;
    let mode = single_mode(st.family, st.beta.as_deref(), st.q, st.gamma.as_deref())?;
    let s = Superposition::new(mode, args.phi, args.variant.into())?;
    let r = analyze(&s)?;
    let amplitude = match mode.amplitude() {
        Amplitude::Beta(b) => json!({ "beta": complex_json(b) }),
        Amplitude::Log { q, gamma } => json!({ "q": q, "gamma": complex_json(gamma) }),
    };
    let report = json!({
        "family": mode.family(),
        "amplitude": amplitude,
        "phi": s.phi,
        "variant": s.variant,
        "A": r.a,
        "p": r.p,
        "N": r.n,
        "concurrence": r.concurrence,
        "x": r.x,
        "entanglement_bits": r.entanglement_bits,
    });
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    Ok(())
}

fn sweep_rows(args: &SweepArgs) -> Outcome<Vec<SweepRow>> {
    if args.steps < 2 {
        return Err(Failure::Usage("--steps must be at least 2".into()));
    }
    let variant = args.variant.into();
    match args.axis {
        Axis::A => {
            if !args.family.is_empty() || !args.gamma.is_empty() {
                return Err(Failure::Usage("the A axis is family independent; drop --family/--gamma".into()));
            }
            let grid = linspace(args.from.unwrap_or(1.0), args.to.unwrap_or(std::f64::consts::SQRT_2), args.steps);
            let mut rows = analysis::sweep_concurrence_vs_a(&args.phi.0, &grid)?;
            for r in &mut rows {
                r.variant = variant;
            }
            Ok(rows)
        }
        Axis::Amplitude => {
            if args.family.is_empty() {
                return Err(Failure::Usage("--family is required for the amplitude axis".into()));
            }
            let ls = args.family.contains(&Family::Ls);
            if ls && args.family.len() > 1 {
                return Err(Failure::Usage("ls is swept over |q|; sweep it separately".into()));
            }
            if ls && args.gamma.is_empty() {
                return Err(Failure::Usage("ls requires --gamma".into()));
            }
            if !ls && !args.gamma.is_empty() {
                return Err(Failure::Usage("--gamma applies only to ls".into()));
            }
            let (lo, hi) = if ls { Figure::Q_RANGE } else { Figure::BETA_RANGE };
            let grid = linspace(args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.steps);
            let mut rows = Vec::new();
            for &phi in &args.phi.0 {
                rows.extend(if ls {
                    analysis::sweep_ls(&args.gamma, &grid, phi, variant)?
                } else {
                    analysis::sweep_amplitude(&args.family, &grid, phi, variant)?
                });
            }
            Ok(rows)
        }
    }
}

fn emit(rows: &[SweepRow], format: Format, out: Option<&Path>) -> Outcome {
    let path = out.map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("<stdout>"));
    let sink: Box<dyn Write> = match out {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|e| Failure::Io(path.clone(), e))?)),
        None => Box::new(io::stdout().lock()),
    };
    match format {
        Format::Csv => table::write_rows(sink, rows).map_err(|e| Failure::Io(path, io::Error::other(e.to_string()))),
        Format::Json => {
            let mut sink = sink;
            serde_json::to_writer_pretty(&mut sink, rows).map_err(|e| Failure::Io(path.clone(), e.into()))?;
            writeln!(sink).and_then(|_| sink.flush()).map_err(|e| Failure::Io(path, e))
        }
    }
}

fn sweep(args: SweepArgs) -> Outcome {
    let rows = sweep_rows(&args)?;
    emit(&rows, args.format, args.out.as_deref())
}

fn figures(args: FiguresArgs) -> Outcome {
    std::fs::create_dir_all(&args.out_dir).map_err(|e| Failure::Io(args.out_dir.clone(), e))?;
    for fig in Figure::ALL {
        let path = args.out_dir.join(fig.file_name());
        emit(&fig.rows()?, Format::Csv, Some(&path))?;
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

fn verify(args: VerifyArgs) -> Outcome {
    if !(args.tail_tol > 0.0 && args.tail_tol < 1.0) {
        return Err(Failure::Usage("--tail-tol must lie in (0, 1)".into()));
    }
    let checks: Vec<PointCheck> = if args.grid.is_some() {
        if args.nmax.is_some() {
            return Err(Failure::Usage("--nmax applies to a single point, not a grid".into()));
        }
        check_grid(&default_verification_grid(), args.tail_tol)?
    } else {
        let family = args.family.ok_or_else(|| Failure::Usage("--family or --grid is required".into()))?;
        let phi = args.phi.ok_or_else(|| Failure::Usage("--phi is required".into()))?;
        let mode = single_mode(family, args.beta.as_deref(), args.q, args.gamma.as_deref())?;
        let s = Superposition::new(mode, phi, args.variant.into())?;
        vec![check_point_at(&s, args.nmax, args.tail_tol)?]
    };
    let max = |f: fn(&PointCheck) -> f64| checks.iter().map(f).fold(0.0f64, f64::max);
    let det = max(PointCheck::determinant_deviation);
    let conc = max(PointCheck::concurrence_deviation);
    let ent = max(PointCheck::entanglement_deviation);
    let third = max(|c| c.third_eigenvalue);
    let tail = max(|c| c.tail_mass);
    let nmax = checks.iter().map(|c| c.nmax).max().unwrap_or(0);
    let pass = checks.iter().all(PointCheck::passes);
    if args.json {
        let report = json!({
            "points": checks.len(),
            "max_nmax": nmax,
            "max_tail_mass": tail,
            "closed_vs_determinant": det,
            "concurrence_vs_oracle": conc,
            "entanglement_vs_oracle": ent,
            "third_eigenvalue": third,
            "pass": pass,
        });
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        println!("points                       {}", checks.len());
        println!("max nmax                     {nmax}");
        println!("max tail mass                {tail:.3e}");
        println!("closed vs determinant c      {det:.3e}  (tol {DETERMINANT_TOL:e})");
        println!("closed vs oracle c           {conc:.3e}  (tol {ORACLE_TOL:e})");
        println!("closed vs oracle E           {ent:.3e}  (tol {ORACLE_TOL:e})");
        println!("third eigenvalue             {third:.3e}  (tol {RANK_TOL:e})");
        println!("result                       {}", if pass { "PASS" } else { "FAIL" });
    }
    if pass {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn extrema(args: ExtremaArgs) -> Outcome {
    let gamma = match (&args.gamma, args.family) {
        (Some(g), Family::Ls) => Some(parse_complex(g)?),
        (None, Family::Ls) => return Err(Failure::Usage("ls requires --gamma".into())),
        (Some(_), f) => return Err(Failure::Usage(format!("--gamma applies only to ls, not {f}"))),
        (None, _) => None,
    };
    let (lo, hi) = if args.family == Family::Ls { Figure::Q_RANGE } else { Figure::BETA_RANGE };
    let axis = AmplitudeAxis { family: args.family, gamma, phi: args.phi, variant: args.variant.into() };
    let found = find_extrema_e(&axis, args.from.unwrap_or(lo), args.to.unwrap_or(hi), args.steps)?;
    println!("{}", serde_json::to_string_pretty(&found).expect("report serializes"));
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let result = match cli.command {
        Command::Compute(a) => compute(a),
        Command::Sweep(a) => sweep(a),
        Command::Figures(a) => figures(a),
        Command::Verify(a) => verify(a),
        Command::Extrema(a) => extrema(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Some(msg) = f.message() {
                eprintln!("gcsent: {msg}");
            }
            ExitCode::from(f.code())
        }
    }
}
