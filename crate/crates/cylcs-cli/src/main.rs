//! Command-line front end: verify, quantize, lower-symbol, overlap, evolve,
//! d-coeffs, rel-error. Exit codes: 0 ok, 1 numeric or condition failure,
//! 2 configuration error.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_f64_list, parse_grid_spec, FileConfig};
use cylcs::io::{self, fmt_f64, OutputFormat};
use cylcs::{
    ActionDistribution, Error as LibError, ObservableSpec, PhasePoint, SamplingPlan,
    TruncatedOperator,
};

#[derive(Parser)]
#[command(name = "cylcs", version, about = "Coherent-state quantization on the cylinder")]
struct Cli {
    /// TOML config file supplying defaults (flags override it)
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct DistArgs {
    /// Distribution family: gaussian | uniform | custom
    #[arg(long)]
    dist: Option<String>,

    /// Width parameter sigma
    #[arg(long)]
    sigma: Option<f64>,

    /// Custom density file (required for --dist custom)
    #[arg(long)]
    custom_density: Option<PathBuf>,

    /// Allow uniform widths above 1
    #[arg(long)]
    allow_sigma_out_of_range: bool,
}

#[derive(Args, Debug, Clone)]
struct OutArgs {
    /// Output directory
    #[arg(long)]
    out: Option<PathBuf>,

    /// Output format: csv | json
    #[arg(long)]
    format: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the admissibility conditions and write a report
    Verify {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Width sweep, comma separated
        #[arg(long, default_value = "0.1,1,10")]
        sigma_sweep: String,
        /// Overlap index cutoff
        #[arg(long, default_value_t = 50)]
        cutoff: usize,
        /// J grid as lo:hi:steps
        #[arg(long, default_value = "-3:3:121")]
        j_grid: String,
        /// k grid, comma separated
        #[arg(long, default_value = "0.5,1,2,4,8")]
        k_grid: String,
    },
    /// Quantize an observable file into a truncated operator matrix
    Quantize {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Observable file ('term m kind ...' lines) or J | J2
        #[arg(long)]
        observable: String,
        /// Basis truncation N (labels -N..N)
        #[arg(long)]
        trunc: Option<usize>,
        /// Per-entry quadrature tolerance
        #[arg(long)]
        tol: Option<f64>,
        /// Force the generic quadrature path (reference route)
        #[arg(long)]
        generic: bool,
    },
    /// Evaluate <x|A|x> over a phase-space grid
    LowerSymbol {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Operator file written by `quantize`
        #[arg(long, conflicts_with = "observable")]
        operator: Option<PathBuf>,
        /// Observable to quantize on the fly
        #[arg(long)]
        observable: Option<String>,
        #[arg(long)]
        trunc: Option<usize>,
        /// J grid as lo:hi:steps
        #[arg(long)]
        grid_j: Option<String>,
        /// phi grid as lo:hi:steps
        #[arg(long)]
        grid_phi: Option<String>,
    },
    /// Coherent-state overlap kernel or distribution overlap entries
    Overlap {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        trunc: Option<usize>,
        /// Emit varpi_{0,m} for m = 0..M instead of a kernel grid
        #[arg(long)]
        entries: Option<usize>,
        /// Kernel reference point
        #[arg(long, default_value_t = 0.0)]
        j0: f64,
        #[arg(long, default_value_t = 0.0)]
        phi0: f64,
        #[arg(long)]
        grid_j: Option<String>,
        #[arg(long)]
        grid_phi: Option<String>,
    },
    /// Evolve a coherent state and write localization frames
    Evolve {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        /// Hamiltonian: observable file or J | J2
        #[arg(long, default_value = "J2")]
        hamiltonian: String,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long, default_value_t = 0.0)]
        j0: f64,
        #[arg(long, default_value_t = 0.0)]
        phi0: f64,
        /// Times, comma separated
        #[arg(long)]
        times: Option<String>,
        #[arg(long)]
        grid_j: Option<String>,
        #[arg(long)]
        grid_phi: Option<String>,
    },
    /// The coefficients d_m(J0)
    DCoeffs {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long, default_value_t = 0.0)]
        j0: f64,
        #[arg(long, default_value_t = 8)]
        max_m: usize,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// Relative error |<x|A_f|x> - f| / |f + C| over a grid
    RelError {
        #[command(flatten)]
        dist: DistArgs,
        #[command(flatten)]
        out: OutArgs,
        #[arg(long)]
        observable: String,
        /// Denominator shift C (defaults to 1 + |min f| on the grid)
        #[arg(long)]
        c_const: Option<f64>,
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long)]
        grid_j: Option<String>,
        #[arg(long)]
        grid_phi: Option<String>,
    },
}

/// Failures split by exit code.
enum CliError {
    /// exit 2: bad flags, bad files, out-of-range parameters
    Config(String),
    /// exit 1: quadrature/truncation/condition failures
    Numeric(String),
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        match e {
            LibError::InvalidParameter(_) | LibError::Parse(_) | LibError::Io(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Numeric(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match &cli.config {
        Some(path) => match FileConfig::load(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
        },
        None => FileConfig::default(),
    };
    match run(cli.command, &file_cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Numeric(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn build_dist(args: &DistArgs, cfg: &FileConfig) -> Result<ActionDistribution, CliError> {
    let kind = args
        .dist
        .clone()
        .or_else(|| cfg.dist.kind.clone())
        .ok_or_else(|| CliError::Config("missing --dist (gaussian | uniform | custom)".into()))?;
    let override_flag =
        args.allow_sigma_out_of_range || cfg.dist.allow_sigma_out_of_range.unwrap_or(false);
    let sigma = || {
        args.sigma
            .or(cfg.dist.sigma)
            .ok_or_else(|| CliError::Config("missing --sigma".into()))
    };
    match kind.to_ascii_lowercase().as_str() {
        "gaussian" => Ok(ActionDistribution::gaussian(sigma()?)?),
        "uniform" => {
            let s = sigma()?;
            if override_flag {
                Ok(ActionDistribution::uniform_with_override(s)?)
            } else {
                Ok(ActionDistribution::uniform(s)?)
            }
        }
        "custom" => {
            let path = args
                .custom_density
                .clone()
                .or_else(|| cfg.dist.custom_density.clone().map(PathBuf::from))
                .ok_or_else(|| {
                    CliError::Config("--dist custom needs --custom-density FILE".into())
                })?;
            let mut d = io::load_custom_density(&path)?;
            if let Some(s) = args.sigma.or(cfg.dist.sigma) {
                d = d.with_sigma(s)?;
            }
            Ok(d)
        }
        other => Err(CliError::Config(format!(
            "unknown distribution family '{other}'"
        ))),
    }
}

fn resolve_out(out: &OutArgs, cfg: &FileConfig) -> Result<(PathBuf, OutputFormat), CliError> {
    let dir = out
        .out
        .clone()
        .or_else(|| cfg.output.dir.clone().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    let format: OutputFormat = out
        .format
        .clone()
        .or_else(|| cfg.output.format.clone())
        .unwrap_or_else(|| "csv".into())
        .parse()
        .map_err(|e: LibError| CliError::Config(e.to_string()))?;
    std::fs::create_dir_all(&dir)
        .map_err(|e| CliError::Config(format!("cannot create {}: {e}", dir.display())))?;
    Ok((dir, format))
}

fn resolve_trunc(flag: Option<usize>, cfg: &FileConfig) -> Result<usize, CliError> {
    let n = flag
        .or(cfg.quantizer.trunc)
        .ok_or_else(|| CliError::Config("missing --trunc".into()))?;
    if n == 0 {
        return Err(CliError::Config("--trunc must be at least 1".into()));
    }
    Ok(n)
}

fn load_observable_arg(value: &str) -> Result<ObservableSpec, CliError> {
    match value {
        "J" | "action" => Ok(ObservableSpec::action()),
        "J2" | "J^2" | "energy" => Ok(ObservableSpec::energy()),
        path => {
            let p = Path::new(path);
            if !p.exists() {
                return Err(CliError::Config(format!(
                    "observable '{path}' is neither a file nor a builtin (J, J2)"
                )));
            }
            Ok(io::load_observable(p)?)
        }
    }
}

fn grid_points(
    grid_j: Option<String>,
    grid_phi: Option<String>,
    cfg: &FileConfig,
) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let j_spec = grid_j
        .or_else(|| cfg.grid.j.clone())
        .ok_or_else(|| CliError::Config("missing --grid-j lo:hi:steps".into()))?;
    let phi_spec = grid_phi
        .or_else(|| cfg.grid.phi.clone())
        .ok_or_else(|| CliError::Config("missing --grid-phi lo:hi:steps".into()))?;
    let j = parse_grid_spec(&j_spec).map_err(CliError::Config)?;
    let phi = parse_grid_spec(&phi_spec).map_err(CliError::Config)?;
    Ok((j, phi))
}

fn phase_grid_points(j: &[f64], phi: &[f64]) -> Vec<PhasePoint> {
    let mut pts = Vec::with_capacity(j.len() * phi.len());
    for &jv in j {
        for &pv in phi {
            pts.push(PhasePoint::new(jv, pv));
        }
    }
    pts
}

fn write_out(path: &Path, content: &str) -> Result<(), CliError> {
    std::fs::write(path, content)
        .map_err(|e| CliError::Config(format!("cannot write {}: {e}", path.display())))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn run(cmd: Command, cfg: &FileConfig) -> Result<(), CliError> {
    match cmd {
        Command::Verify {
            dist,
            out,
            sigma_sweep,
            cutoff,
            j_grid,
            k_grid,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, format) = resolve_out(&out, cfg)?;
            let plan = SamplingPlan {
                j_grid: parse_grid_spec(&j_grid).map_err(CliError::Config)?,
                k_grid: parse_f64_list(&k_grid).map_err(CliError::Config)?,
                sigma_sweep: parse_f64_list(&sigma_sweep).map_err(CliError::Config)?,
                cutoff,
            };
            let report = cylcs::verify_admissibility(&d, &plan);
            let (name, text) = match format {
                OutputFormat::Csv => ("report.csv", io::report_to_csv(&report, &d)),
                OutputFormat::Json => ("report.json", io::report_to_json(&report, &d)),
            };
            write_out(&dir.join(name), &text)?;
            for r in &report.records {
                println!("{}: {}", r.label, r.status);
            }
            if report.any_fail() {
                return Err(CliError::Numeric(
                    "one or more admissibility conditions failed".into(),
                ));
            }
            Ok(())
        }
        Command::Quantize {
            dist,
            out,
            observable,
            trunc,
            tol,
            generic,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, format) = resolve_out(&out, cfg)?;
            let n = resolve_trunc(trunc, cfg)?;
            let f = load_observable_arg(&observable)?;
            let tol = tol.or(cfg.quantizer.tol).unwrap_or(1e-12);
            let op = if generic {
                cylcs::quantize_generic(&d, &f, n, tol)?
            } else {
                cylcs::quantize(&d, &f, n)?
            };
            let (name, text) = match format {
                OutputFormat::Csv => ("operator.csv", io::operator_to_csv(&op, Some(&d))),
                OutputFormat::Json => ("operator.json", io::operator_to_json(&op, Some(&d))),
            };
            write_out(&dir.join(name), &text)
        }
        Command::LowerSymbol {
            dist,
            out,
            operator,
            observable,
            trunc,
            grid_j,
            grid_phi,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, format) = resolve_out(&out, cfg)?;
            let op: TruncatedOperator = match (operator, observable) {
                (Some(path), None) => io::load_operator(&path)?,
                (None, Some(obs)) => {
                    let n = resolve_trunc(trunc, cfg)?;
                    cylcs::quantize(&d, &load_observable_arg(&obs)?, n)?
                }
                _ => {
                    return Err(CliError::Config(
                        "supply exactly one of --operator FILE or --observable SPEC".into(),
                    ))
                }
            };
            let (j, phi) = grid_points(grid_j, grid_phi, cfg)?;
            let pts = phase_grid_points(&j, &phi);
            let field = cylcs::lower_symbol_field(&d, &op, &pts)?;
            let (name, text) = match format {
                OutputFormat::Csv => ("lower_symbol.csv", io::field_to_csv(&field, Some(&d))),
                OutputFormat::Json => ("lower_symbol.json", io::field_to_json(&field, Some(&d))),
            };
            write_out(&dir.join(name), &text)
        }
        Command::Overlap {
            dist,
            out,
            trunc,
            entries,
            j0,
            phi0,
            grid_j,
            grid_phi,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, format) = resolve_out(&out, cfg)?;
            if let Some(max_m) = entries {
                let prov = io::provenance(Some(&d), &[]);
                let mut s = String::new();
                for (k, v) in &prov {
                    s.push_str(&format!("# {k}: {v}\n"));
                }
                s.push_str("m,overlap\n");
                for m in 0..=max_m as i64 {
                    s.push_str(&format!("{m},{}\n", fmt_f64(d.overlap_entry(0, m)?)));
                }
                return write_out(&dir.join("overlap.csv"), &s);
            }
            let n = resolve_trunc(trunc, cfg)?;
            let (j, phi) = grid_points(grid_j, grid_phi, cfg)?;
            let pts = phase_grid_points(&j, &phi);
            let p0 = PhasePoint::new(j0, phi0);
            let values = pts
                .iter()
                .map(|q| cylcs::cs_overlap(&d, p0, *q, n))
                .collect::<Result<Vec<_>, _>>()?;
            let field = cylcs::LowerSymbolField {
                points: pts,
                values,
                provenance: format!("overlap kernel <(J0={j0}, phi0={phi0})|.> at N={n}"),
            };
            let (name, text) = match format {
                OutputFormat::Csv => ("overlap.csv", io::field_to_csv(&field, Some(&d))),
                OutputFormat::Json => ("overlap.json", io::field_to_json(&field, Some(&d))),
            };
            write_out(&dir.join(name), &text)
        }
        Command::Evolve {
            dist,
            out,
            hamiltonian,
            trunc,
            j0,
            phi0,
            times,
            grid_j,
            grid_phi,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, _format) = resolve_out(&out, cfg)?;
            let n = resolve_trunc(trunc, cfg)?;
            let h = cylcs::quantize(&d, &load_observable_arg(&hamiltonian)?, n)?;
            let times: Vec<f64> = match times {
                Some(spec) => parse_f64_list(&spec).map_err(CliError::Config)?,
                None => cfg
                    .grid
                    .times
                    .clone()
                    .ok_or_else(|| CliError::Config("missing --times t0,t1,...".into()))?,
            };
            let (j, phi) = grid_points(grid_j, grid_phi, cfg)?;
            let grid = cylcs::PhaseGrid { j, phi };
            let p0 = PhasePoint::new(j0, phi0);
            let frames = cylcs::localization_frames(&d, &h, p0, &times, &grid)?;
            let frames_dir = dir.join("frames");
            std::fs::create_dir_all(&frames_dir)
                .map_err(|e| CliError::Config(format!("cannot create frames dir: {e}")))?;
            let mut index = String::from("frame,t,file\n");
            for (i, frame) in frames.iter().enumerate() {
                let name = format!("frame_{i:04}.csv");
                write_out(&frames_dir.join(&name), &io::frame_to_csv(frame, Some(&d)))?;
                index.push_str(&format!("{i},{},frames/{name}\n", fmt_f64(frame.t)));
            }
            write_out(&dir.join("frames_index.csv"), &index)
        }
        Command::DCoeffs {
            dist,
            out,
            j0,
            max_m,
            trunc,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, _format) = resolve_out(&out, cfg)?;
            let n = resolve_trunc(trunc, cfg)?;
            let coeffs = cylcs::d_coefficients(&d, j0, max_m, n)?;
            let prov = io::provenance(
                Some(&d),
                &[("J0".into(), fmt_f64(j0)), ("trunc".into(), n.to_string())],
            );
            let mut s = String::new();
            for (k, v) in &prov {
                s.push_str(&format!("# {k}: {v}\n"));
            }
            s.push_str("m,d\n");
            for m in 0..=max_m as i64 {
                s.push_str(&format!("{m},{}\n", fmt_f64(coeffs.value(m))));
            }
            write_out(&dir.join("d_coeffs.csv"), &s)
        }
        Command::RelError {
            dist,
            out,
            observable,
            c_const,
            trunc,
            grid_j,
            grid_phi,
        } => {
            let d = build_dist(&dist, cfg)?;
            let (dir, format) = resolve_out(&out, cfg)?;
            let n = resolve_trunc(trunc, cfg)?;
            let f = load_observable_arg(&observable)?;
            let (j, phi) = grid_points(grid_j, grid_phi, cfg)?;
            let pts = phase_grid_points(&j, &phi);
            let field = cylcs::relative_error(&d, &f, c_const, &pts, n)?;
            let (name, text) = match format {
                OutputFormat::Csv => ("rel_error.csv", io::field_to_csv(&field, Some(&d))),
                OutputFormat::Json => ("rel_error.json", io::field_to_json(&field, Some(&d))),
            };
            write_out(&dir.join(name), &text)
        }
    }
}
