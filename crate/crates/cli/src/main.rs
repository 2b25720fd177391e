use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use bregball::closedform::{self, Generator};
use bregball::render::{self, Region};
use bregball::repro::{self, ReproTolerances};
use bregball::{
    distance, farthest, solve_fixed_point, solve_subgradient, CenterCertificate, CompactSet, Error, Kind,
    LegendreFunction, SolverOptions,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_REPRO: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NONCONVERGENCE: u8 = 3;

#[derive(Parser)]
#[command(name = "bregball", version, about = "Right-Bregman farthest distances and Chebyshev centers")]
struct Cli {
    /// Generator: energy, quad, negentropy (kl) or neglog (is).
    #[arg(long = "gen", global = true, default_value = "energy")]
    generator: Kind,
    /// Matrix of the quadratic generator, rows separated by ';'.
    #[arg(long, global = true)]
    matrix: Option<String>,
    /// Solver tolerance; for `repro`, replaces every threshold.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the randomized sweep in `repro`.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bregman distance D(x, y).
    Dist {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Farthest distance F_C(x) and farthest points Q_C(x).
    Farthest {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[command(flatten)]
        set: SetArgs,
    },
    /// Chebyshev center with its optimality certificate.
    Center {
        #[command(flatten)]
        set: SetArgs,
        #[arg(long, value_enum, default_value = "fixed")]
        solver: SolverChoice,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        /// Starting point.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        /// Certify the raw iterate without active-set refinement.
        #[arg(long)]
        raw: bool,
    },
    /// Closed-form centers of the segment from (1,a) to (a,1).
    Oracle {
        #[arg(long)]
        a: f64,
        /// Also classify the farthest points of this query point.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<String>,
    },
    /// Grid of F_C over a planar region, as CSV or PPM.
    Colormap {
        #[arg(long)]
        segment: f64,
        #[arg(long, default_value_t = bregball::compactset::DEFAULT_SAMPLES)]
        samples: usize,
        /// x0,y0,x1,y1; defaults to [0,10]^2 for a <= 8 and [0,50]^2 otherwise.
        #[arg(long, allow_hyphen_values = true)]
        region: Option<String>,
        #[arg(long, default_value_t = 101)]
        res: usize,
        /// Write a binary PPM instead of CSV (requires --out).
        #[arg(long)]
        ppm: bool,
    },
    /// Boundary samples of the sphere {y : D(z, y) = r}.
    Sphere {
        #[arg(long, allow_hyphen_values = true)]
        center: String,
        #[arg(long, allow_hyphen_values = true)]
        radius: f64,
        #[arg(long, default_value_t = 64)]
        res: usize,
    },
    /// Closed-form reproduction checks; exit 1 if any fails.
    Repro,
}

#[derive(Args)]
struct SetArgs {
    /// Finite set, points separated by ';'.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "segment")]
    points: Option<String>,
    /// Segment from (1,a) to (a,1).
    #[arg(long)]
    segment: Option<f64>,
    #[arg(long, default_value_t = bregball::compactset::DEFAULT_SAMPLES)]
    samples: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverChoice {
    Fixed,
    Subgrad,
    Both,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    NonConvergence,
    Repro,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::NonConvergence) => ExitCode::from(EXIT_NONCONVERGENCE),
        Err(Failure::Repro) => ExitCode::from(EXIT_REPRO),
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Dist { x, y } => {
            let (x, y) = (parse_vector(x)?, parse_vector(y)?);
            let f = generator(cli, x.len())?;
            f.check_dim(&y)?;
            let v = distance(&f, &x, &y);
            emit_json(cli, &json!({ "distance": ext(v) }))
        }
        Command::Farthest { x, set } => {
            let x = parse_vector(x)?;
            let f = generator(cli, x.len())?;
            let c = compact_set(&f, set)?;
            emit_json(cli, &serde_json::to_value(farthest(&f, &c, &x)?).expect("serializable"))
        }
        Command::Center { set, solver, max_iter, x0, raw } => {
            let dim = set_dimension(set)?;
            let f = generator(cli, dim)?;
            let c = compact_set(&f, set)?;
            let mut opts = SolverOptions { max_iter: *max_iter, raw: *raw, ..SolverOptions::default() };
            if let Some(tol) = cli.tol {
                positive("--tol", tol)?;
                opts.tol = tol;
            }
            if let Some(x0) = x0 {
                opts = opts.with_start(parse_vector(x0)?);
            }
            cmd_center(cli, &f, &c, *solver, &opts)
        }
        Command::Oracle { a, x } => cmd_oracle(cli, *a, x.as_deref()),
        Command::Colormap { segment, samples, region, res, ppm } => {
            let f = generator(cli, 2)?;
            let c = CompactSet::make_segment(&f, *segment, *samples)?;
            let region = match region {
                Some(s) => match parse_vector(s)?.as_slice() {
                    &[x0, y0, x1, y1] => Region::new(x0, y0, x1, y1)?,
                    _ => return Err(Failure::Usage("--region takes x0,y0,x1,y1".into())),
                },
                None => Region::for_segment(*segment),
            };
            let grid = render::colormap(&f, &c, region, *res)?;
            if *ppm {
                if cli.out.is_none() {
                    return Err(Failure::Usage("--ppm requires --out".into()));
                }
                emit_bytes(cli, &grid.to_ppm())
            } else {
                emit_bytes(cli, grid.to_csv().as_bytes())
            }
        }
        Command::Sphere { center, radius, res } => {
            let z = parse_vector(center)?;
            let f = generator(cli, z.len())?;
            let samples = render::sphere(&f, &z, *radius, *res)?;
            emit_bytes(cli, render::sphere_csv(&samples).as_bytes())
        }
        Command::Repro => cmd_repro(cli),
    }
}

fn cmd_center(cli: &Cli, f: &LegendreFunction, c: &CompactSet, choice: SolverChoice, opts: &SolverOptions) -> Outcome {
    let certified = |r: bregball::Result<CenterCertificate>| -> Result<(CenterCertificate, bool), Failure> {
        match r {
            Ok(cert) => Ok((cert, true)),
            Err(Error::NonConvergence(cert)) => Ok((*cert, false)),
            Err(e) => Err(e.into()),
        }
    };
    let (doc, converged) = match choice {
        SolverChoice::Fixed => {
            let (cert, ok) = certified(solve_fixed_point(f, c, opts))?;
            (serde_json::to_value(cert).expect("serializable"), ok)
        }
        SolverChoice::Subgrad => {
            let (cert, ok) = certified(solve_subgradient(f, c, opts))?;
            (serde_json::to_value(cert).expect("serializable"), ok)
        }
        SolverChoice::Both => {
            let (a, ok_a) = certified(solve_fixed_point(f, c, opts))?;
            let (b, ok_b) = certified(solve_subgradient(f, c, opts))?;
            let gap = a.center.iter().zip(&b.center).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
            (json!({ "fixed": a, "subgradient": b, "disagreement": gap }), ok_a && ok_b)
        }
    };
    emit_json(cli, &doc)?;
    if converged {
        Ok(())
    } else {
        eprintln!("error: the certificate did not verify within tolerance");
        Err(Failure::NonConvergence)
    }
}

fn cmd_oracle(cli: &Cli, a: f64, x: Option<&str>) -> Outcome {
    let generator = match cli.generator {
        Kind::Energy => Generator::Euclidean,
        Kind::NegEntropy => Generator::Kl,
        Kind::NegLog => Generator::Is,
        Kind::Quadratic => return Err(Failure::Usage("closed forms exist for energy, negentropy and neglog".into())),
    };
    let tol = cli.tol.unwrap_or(1e-12);
    positive("--tol", tol)?;
    let cfg = closedform::SegmentFamily::new(generator, a)?;
    let [c0, c_half, c1] = closedform::endpoints(a);
    let mut doc = json!({
        "generator": generator.name(),
        "a": a,
        "endpoints": [c0, c_half, c1],
        "center": cfg.center(),
        "threshold": closedform::threshold_a(tol)?,
    });
    if generator == Generator::Is {
        let is = closedform::center_is(a)?;
        doc["g"] = json!(is.g);
        doc["h"] = json!(is.h);
        doc["farthest_lambdas"] = json!(is.farthest_lambdas);
        doc["mu"] = json!(closedform::mu_coefficients(a)?);
    }
    if let Some(x) = x {
        let x = parse_vector(x)?;
        doc["farthest_structure"] = json!(format!("{:?}", closedform::farthest_structure(generator, a, &x)?));
    }
    emit_json(cli, &doc)
}

fn cmd_repro(cli: &Cli) -> Outcome {
    let tol = match cli.tol {
        Some(t) => {
            positive("--tol", t)?;
            ReproTolerances::uniform(t)
        }
        None => ReproTolerances::default(),
    };
    let mut checks = repro::run(&tol);
    if let Some(seed) = cli.seed {
        checks.extend(repro::random_sweep(seed, &tol));
    }
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut table = String::new();
    for c in &checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        table.push_str(&format!("{status}  {:width$}  {}\n", c.name, c.detail));
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    table.push_str(&format!("{} checks, {} failed\n", checks.len(), failed));
    print!("{table}");
    if let Some(path) = &cli.out {
        let doc = json!({ "tolerances": tol, "checks": checks });
        write_file(path, format!("{doc:#}\n").as_bytes())?;
    }
    if failed == 0 {
        Ok(())
    } else {
        Err(Failure::Repro)
    }
}

fn generator(cli: &Cli, dim: usize) -> Result<LegendreFunction, Failure> {
    match (cli.generator, &cli.matrix) {
        (Kind::Quadratic, None) => Err(Failure::Usage("--gen quad needs --matrix".into())),
        (Kind::Quadratic, Some(m)) => {
            let rows = parse_matrix(m)?;
            let f = LegendreFunction::quadratic(&rows)?;
            if f.dimension() != dim {
                return Err(Error::DimensionMismatch { expected: f.dimension(), got: dim }.into());
            }
            Ok(f)
        }
        (_, Some(_)) => Err(Failure::Usage("--matrix only applies to --gen quad".into())),
        (kind, None) => Ok(LegendreFunction::new(kind, dim)?),
    }
}

fn set_dimension(set: &SetArgs) -> Result<usize, Failure> {
    match (&set.points, set.segment) {
        (Some(p), _) => Ok(parse_matrix(p)?[0].len()),
        (None, Some(_)) => Ok(2),
        (None, None) => Err(Failure::Usage("give --points or --segment".into())),
    }
}

fn compact_set(f: &LegendreFunction, set: &SetArgs) -> Result<CompactSet, Failure> {
    let c = match (&set.points, set.segment) {
        (Some(p), _) => CompactSet::finite(parse_matrix(p)?)?,
        (None, Some(a)) => CompactSet::make_segment(f, a, set.samples)?,
        (None, None) => return Err(Failure::Usage("give --points or --segment".into())),
    };
    c.validate(f)?;
    Ok(c)
}

fn parse_vector(s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            bregball::json::parse_extended(t).ok_or_else(|| Failure::Usage(format!("not a number: {t:?}")))
        })
        .collect()
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<f64>>, Failure> {
    let rows = s.split(';').map(parse_vector).collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(Failure::Usage(format!("ragged rows in {s:?}")));
    }
    Ok(rows)
}

fn positive(flag: &str, v: f64) -> Result<(), Failure> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("{flag} must be positive, got {v}")))
    }
}

fn ext(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(bregball::json::format_extended(v))
    }
}

fn emit_json(cli: &Cli, doc: &Value) -> Outcome {
    emit_bytes(cli, format!("{doc}\n").as_bytes())
}

fn emit_bytes(cli: &Cli, bytes: &[u8]) -> Outcome {
    match &cli.out {
        Some(path) => write_file(path, bytes),
        None => std::io::stdout().write_all(bytes).map_err(|e| Failure::Usage(e.to_string())),
    }
}

fn write_file(path: &PathBuf, bytes: &[u8]) -> Outcome {
    fs::write(path, bytes).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}
