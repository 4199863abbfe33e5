//! Command-line front end. `run` returns the process exit code: 0 on success,
//! 1 when a computation fails, 2 on usage errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use potlab_core::bergman::{build_basis, diag_on_grid, kernel, kernel_min};
use potlab_core::geom::{CompactSet, Domain};
use potlab_core::grid::rasterize;
use potlab_core::potential::{capacity_radius, green_equilibrium, log_equilibrium, robin_constant, RadiusOptions};
use potlab_core::spectral::{dirichlet_lambda1_with, hardy_extrapolate, EigenOptions};
use potlab_core::Point;

use crate::config::Config;
use crate::formats::{equilibrium_to_json, field_csv, fmt_e, parse_compact, parse_corpus, parse_domain, parse_point};
use crate::report::{to_csv, write_report};
use crate::svg::{svg_heatmap, Scale};
use crate::verify::{default_corpus, default_family, excision_sweep, run_suite, sweep_probe};
use crate::LabError;

#[derive(Parser, Debug)]
#[command(name = "potlab", version, about = "Bergman kernels, capacities and spectra of planar domains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bergman kernel values, its minimum, or a heatmap of the diagonal
    Kernel(KernelArgs),
    /// Logarithmic or Green capacity of a compact set
    Capacity(CapacityArgs),
    /// Robin constant of a domain at a point
    Robin(RobinArgs),
    /// Interior capacity radius
    Radius(RadiusArgs),
    /// First Dirichlet eigenvalue
    Eigen(EigenArgs),
    /// Hardy constant
    Hardy(HardyArgs),
    /// Weighted, L^p and collar-decay checks for the canonical dbar solution
    Dbar(DbarArgs),
    /// Run the inequality suite over a corpus
    Verify(VerifyArgs),
    /// Kernel differences along a shrinking excision family
    Sweep(SweepArgs),
}

#[derive(Args, Debug)]
pub struct DomainArg {
    /// Domain: a built-in label (disk, square, annulus, slit-disk, rect-2x1), a JSON file, or inline JSON
    #[arg(long, default_value = "disk")]
    pub domain: String,
}

#[derive(Args, Debug)]
pub struct KernelArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Basis degree
    #[arg(long, default_value_t = 40)]
    pub degree: usize,
    /// Grid cells per unit length
    #[arg(long, default_value_t = 128.0)]
    pub resolution: f64,
    /// Point `x,y` at which to evaluate [default: none]
    #[arg(long, allow_hyphen_values = true)]
    pub eval: Option<String>,
    /// Second point `x,y`; prints K(eval, w) as `re im` [default: none]
    #[arg(long, allow_hyphen_values = true, requires = "eval")]
    pub w: Option<String>,
    /// Print the minimum of the diagonal and where it is attained [default: false]
    #[arg(long, default_value_t = false)]
    pub min: bool,
    /// Write a log-scale SVG heatmap of the diagonal [default: none]
    #[arg(long)]
    pub heatmap: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CapacityArgs {
    /// Compact set: a JSON file or inline JSON
    #[arg(long)]
    pub set: String,
    /// Patches on the set
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Centre `x,y` of the disk for the Green capacity [default: none, logarithmic capacity]
    #[arg(long, allow_hyphen_values = true, requires = "green_radius")]
    pub green_center: Option<String>,
    /// Radius of the disk for the Green capacity [default: none]
    #[arg(long, requires = "green_center")]
    pub green_radius: Option<f64>,
    /// Write the equilibrium measure as JSON [default: none]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RobinArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Point `x,y`
    #[arg(long, allow_hyphen_values = true)]
    pub at: String,
    /// Patches on the inverted boundary
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Capacity ratio in (0, 1)
    #[arg(long, default_value_t = 0.3)]
    pub alpha: f64,
    /// Candidate centres per axis
    #[arg(long, default_value_t = 11)]
    pub centers: usize,
    /// Patches per capacity evaluation
    #[arg(long, default_value_t = 64)]
    pub samples: usize,
}

#[derive(Args, Debug)]
pub struct EigenArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Grid cells per unit length
    #[arg(long, default_value_t = 96.0)]
    pub resolution: f64,
    /// Relative residual target
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Write an SVG of the eigenfunction [default: none]
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Write the eigenfunction as CSV `x,y,value` [default: none]
    #[arg(long)]
    pub field_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HardyArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Comma-separated resolutions of the extrapolation ladder (one value gives the discrete quotient only)
    #[arg(long, default_value = "64,96,128")]
    pub resolutions: String,
}

#[derive(Args, Debug)]
pub struct DbarArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Configuration JSON; its resolution, degree, p ladder and tolerances apply [default: built-in]
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report path; writes both .csv and .json next to it [default: none, CSV on stdout]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// `default` or a JSON file holding an array of domain descriptors
    #[arg(long, default_value = "default")]
    pub corpus: String,
    /// Configuration JSON [default: built-in]
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Report path; writes both .csv and .json [default: report.csv, or outputs.report from the config]
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Directory for SVG figures [default: none, or outputs.figs from the config]
    #[arg(long)]
    pub figs: Option<PathBuf>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Exit with status 1 when any row fails [default: false]
    #[arg(long, default_value_t = false)]
    pub strict: bool,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    #[command(flatten)]
    pub domain: DomainArg,
    /// Grid cells per unit length
    #[arg(long, default_value_t = 128.0)]
    pub resolution: f64,
    /// Basis degree
    #[arg(long, default_value_t = 30)]
    pub degree: usize,
    /// Patches per capacity evaluation
    #[arg(long, default_value_t = 256)]
    pub samples: usize,
    /// Write the table as CSV [default: none]
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String, LabError> {
    std::fs::read_to_string(path).map_err(|e| LabError::Usage(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), LabError> {
    if let Some(dir) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, text).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))
}

/// Built-in label, inline JSON, or a path to a JSON descriptor.
pub fn resolve_domain(arg: &str) -> Result<Domain, LabError> {
    if let Some(d) = default_corpus().into_iter().find(|d| d.label == arg) {
        return Ok(d);
    }
    if arg.trim_start().starts_with('{') {
        return parse_domain(arg);
    }
    parse_domain(&read(Path::new(arg))?)
}

fn resolve_compact(arg: &str) -> Result<CompactSet, LabError> {
    if arg.trim_start().starts_with('{') {
        parse_compact(arg)
    } else {
        parse_compact(&read(Path::new(arg))?)
    }
}

fn load_config(path: &Option<PathBuf>) -> Result<Config, LabError> {
    match path {
        Some(p) => Config::parse(&read(p)?),
        None => Ok(Config::default()),
    }
}

fn point_in(d: &Domain, s: &str) -> Result<Point, LabError> {
    let z = parse_point(s)?;
    if !d.contains(z) {
        return Err(LabError::Usage(format!("point {s} is not in the domain")));
    }
    Ok(z)
}

fn io(e: std::io::Error) -> LabError {
    LabError::Io(e.to_string())
}

pub fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), LabError> {
    match cmd {
        Command::Kernel(a) => {
            if a.eval.is_none() && !a.min && a.heatmap.is_none() {
                return Err(LabError::Usage("kernel needs --eval, --min or --heatmap".into()));
            }
            let d = resolve_domain(&a.domain.domain)?;
            let g = rasterize(&d, a.resolution)?;
            let b = build_basis(&g, a.degree, None)?;
            if let Some(e) = &a.eval {
                let z = point_in(&d, e)?;
                match &a.w {
                    Some(w) => {
                        let k = kernel(&b, z, point_in(&d, w)?)?;
                        writeln!(out, "{:.6} {:.6}", k.re, k.im).map_err(io)?;
                    }
                    None => writeln!(out, "{:.6}", kernel(&b, z, z)?.re).map_err(io)?,
                }
            }
            if a.min {
                let (k, at) = kernel_min(&b, &g);
                writeln!(out, "{} {} {}", fmt_e(k), fmt_e(at.re), fmt_e(at.im)).map_err(io)?;
            }
            if let Some(p) = &a.heatmap {
                write(p, &svg_heatmap(&diag_on_grid(&b), Scale::Log, &format!("Bergman kernel diagonal, {}", d.label)))?;
            }
        }
        Command::Capacity(a) => {
            let e = resolve_compact(&a.set)?;
            let r = match (&a.green_center, a.green_radius) {
                (Some(c), Some(rad)) => green_equilibrium(&e, parse_point(c)?, rad, a.samples)?,
                _ => log_equilibrium(&e, a.samples)?,
            };
            writeln!(out, "{}", fmt_e(r.capacity)).map_err(io)?;
            if let Some(p) = &a.out {
                write(p, &equilibrium_to_json(&r))?;
            }
        }
        Command::Robin(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let z = point_in(&d, &a.at)?;
            writeln!(out, "{}", fmt_e(robin_constant(&d, z, a.samples)?)).map_err(io)?;
        }
        Command::Radius(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let opts = RadiusOptions { centers: a.centers, samples: a.samples, ..RadiusOptions::default() };
            let r = capacity_radius(&d, a.alpha, &opts)?;
            writeln!(out, "{} {} {}", fmt_e(r.radius), fmt_e(r.center.re), fmt_e(r.center.im)).map_err(io)?;
        }
        Command::Eigen(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let g = rasterize(&d, a.resolution)?;
            let r = dirichlet_lambda1_with(&g, &EigenOptions { tol: a.tol, ..EigenOptions::default() })?;
            writeln!(out, "{} {} {}", fmt_e(r.value), fmt_e(r.residual), r.iterations).map_err(io)?;
            if let Some(p) = &a.svg {
                write(p, &svg_heatmap(&r.field, Scale::Linear, &format!("first Dirichlet eigenfunction, {}", d.label)))?;
            }
            if let Some(p) = &a.field_out {
                write(p, &field_csv(&r.field))?;
            }
        }
        Command::Hardy(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let res = a
                .resolutions
                .split(',')
                .map(|t| t.trim().parse::<f64>().map_err(|_| LabError::Usage(format!("bad resolution `{t}`"))))
                .collect::<Result<Vec<f64>, _>>()?;
            if res.len() == 1 {
                let g = rasterize(&d, res[0])?;
                writeln!(out, "{}", fmt_e(potlab_core::spectral::hardy_constant(&g)?.value)).map_err(io)?;
            } else {
                let h = hardy_extrapolate(&d, &res)?;
                writeln!(out, "{} {} {}", fmt_e(h.value), fmt_e(h.offset), fmt_e(h.misfit)).map_err(io)?;
                for (r, v) in h.resolutions.iter().zip(&h.discrete) {
                    writeln!(out, "{r} {}", fmt_e(*v)).map_err(io)?;
                }
            }
        }
        Command::Dbar(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let cfg = load_config(&a.config)?;
            let rows = crate::verify::dbar_rows(&d, &cfg)?;
            match &a.out {
                Some(p) => write_report(p, &rows)?,
                None => write!(out, "{}", to_csv(&rows)).map_err(io)?,
            }
        }
        Command::Verify(a) => {
            let cfg = load_config(&a.config)?;
            let corpus = if a.corpus == "default" { default_corpus() } else { parse_corpus(&read(Path::new(&a.corpus))?)? };
            let report = a
                .out
                .clone()
                .or_else(|| cfg.outputs.report.clone().map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("report.csv"));
            let figs = a.figs.clone().or_else(|| cfg.outputs.figs.clone().map(PathBuf::from));
            let suite = run_suite(&corpus, &cfg, a.jobs)?;
            write_report(&report, &suite.rows)?;
            if let Some(dir) = figs {
                std::fs::create_dir_all(&dir)?;
                for (name, f, scale) in &suite.figures {
                    write(&dir.join(format!("{name}.svg")), &svg_heatmap(f, *scale, name))?;
                }
            }
            let passed = suite.rows.iter().filter(|r| r.pass).count();
            eprintln!("{passed} of {} rows pass", suite.rows.len());
            for r in suite.rows.iter().filter(|r| !r.pass) {
                eprintln!("FAIL {} {} {}", r.id, r.domain, r.params);
            }
            if a.strict && passed < suite.rows.len() {
                return Err(LabError::Compute(format!("{} rows fail", suite.rows.len() - passed)));
            }
        }
        Command::Sweep(a) => {
            let d = resolve_domain(&a.domain.domain)?;
            let z = sweep_probe(&d);
            if !d.contains(z) {
                return Err(LabError::Usage("sweep probe point lies outside the domain".into()));
            }
            let s = excision_sweep(&d, &default_family(&d), z, z, a.resolution, a.degree, a.samples)?;
            let mut t = String::from("k,length,capacity,diff\n");
            for r in &s.rows {
                t += &format!("{},{},{},{}\n", r.k, fmt_e(r.set.diameter()), fmt_e(r.capacity), fmt_e(r.diff));
            }
            write!(out, "{t}").map_err(io)?;
            writeln!(out, "# r0={} a={} C={} fitted={} point_diff={}", fmt_e(s.r0), fmt_e(s.exponent), fmt_e(s.constant), s.fitted_rows, fmt_e(s.point_diff))
                .map_err(io)?;
            if let Some(p) = &a.out {
                write(p, &t)?;
            }
        }
    }
    Ok(())
}

/// Parse `args` (including the program name), run, and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("potlab: {e}");
            e.exit_code()
        }
    }
}
