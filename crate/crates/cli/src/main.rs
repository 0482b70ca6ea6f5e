//! `berezin` command-line driver.

mod config;
mod error;
mod svg;

use std::fmt::Write as _;
use std::path::Path;

use berezin::checks::{run_suites, Suite};
use berezin::contraction::{
    default_indices, density_convergence, matrix_element_convergence, symbol_convergence, weak_convergence_su2,
    ConvergenceTable,
};
use berezin::groups::MatrixGroup;
use berezin::reps::{berezin_symbol_numeric, closed_form_symbol, Operator};
use berezin::rkhs::SpaceKind;
use berezin::spectral::{
    gaussian_density, measure_sidecar, spectral_measure, spectral_measure_finite, star_exponential,
    su2_closed_form_measure, AtomicMeasure, InversionSpec, SpectralMeasure, TestFunction,
};
use berezin::{Cx, Space};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use config::{RunConfig, DEFAULT_SEED};
use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "berezin", version, about = "Berezin symbols, spectral measures and contraction experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    config: RunConfig,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Berezin symbol of pi(g) at a point or over a grid.
    Symbol,
    /// Density of the spectral measure of -i dpi(X) at z.
    Density,
    /// Atoms of the spectral measure of -i drho_m(X) at z.
    Spectrum,
    /// Convergence table of a contraction experiment.
    Contract,
    /// Invariant suites.
    Check,
}

fn main() {
    let code = match Cli::try_parse() {
        Ok(cli) => match cli.config.resolve().and_then(|c| run(cli.command, &c)) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("{}", e.to_json());
                e.exit_code()
            }
        },
        Err(e) if e.use_stderr() => {
            let e = CliError::Config(e.to_string().trim().to_string());
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
        Err(e) => {
            let _ = e.print();
            0
        }
    };
    std::process::exit(code);
}

fn run(command: Command, c: &RunConfig) -> Result<(), CliError> {
    if c.svg.is_some() && !matches!(command, Command::Density | Command::Contract) {
        return Err(CliError::Config("--svg is available for density and contract only".into()));
    }
    match command {
        Command::Symbol => cmd_symbol(c),
        Command::Density => cmd_density(c),
        Command::Spectrum => cmd_spectrum(c),
        Command::Contract => cmd_contract(c),
        Command::Check => cmd_check(c),
    }
}

/// CSV to `--out` with a JSON sidecar next to it and the sidecar on stdout,
/// or CSV to stdout.
fn emit(c: &RunConfig, csv: &str, sidecar: &Value) -> Result<(), CliError> {
    match &c.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            let text = serde_json::to_string_pretty(sidecar).expect("json value");
            std::fs::write(path.with_extension("json"), text + "\n")?;
            println!("{sidecar}");
        }
        None => print!("{csv}"),
    }
    Ok(())
}

fn write_svg(path: &Path, points: &[(f64, f64)], x_label: &str, y_label: &str) -> Result<(), CliError> {
    std::fs::write(path, svg::polyline(points, x_label, y_label))?;
    Ok(())
}

fn grid_points(c: &RunConfig, space: &Space) -> Result<Vec<Cx<f64>>, CliError> {
    let default_radius = match space.kind() {
        SpaceKind::Disc { .. } => 0.9,
        _ => 2.0,
    };
    let (radius, count) = match c.grid.as_deref() {
        None => (default_radius, 21),
        Some([r, k]) if *r > 0.0 && k.fract() == 0.0 && *k >= 1.0 => (*r, *k as usize),
        Some(_) => return Err(CliError::Config("--grid takes radius,points with radius > 0".into())),
    };
    let coord = |k: usize| {
        if count == 1 {
            0.0
        } else {
            -radius + 2.0 * radius * k as f64 / (count - 1) as f64
        }
    };
    Ok((0..count)
        .flat_map(|j| (0..count).map(move |k| (k, j)))
        .map(|(k, j)| Cx::new(coord(k), coord(j)))
        .filter(|z| space.contains(*z))
        .collect())
}

fn cmd_symbol(c: &RunConfig) -> Result<(), CliError> {
    let space = c.space()?;
    let g = c.group_element(&space)?;
    let points = match c.z {
        Some(_) => vec![c.point(Some(&space))?],
        None => grid_points(c, &space)?,
    };
    let numeric = c.numeric.unwrap_or(false);
    let mut csv = String::from("re_z,im_z,re_S,im_S\n");
    for z in &points {
        let s = if numeric {
            berezin_symbol_numeric(&space, Operator::Group(&g), *z)?
        } else {
            closed_form_symbol(&space, &g, *z)?
        };
        let _ = writeln!(csv, "{:.16e},{:.16e},{:.16e},{:.16e}", z.re, z.im, s.re, s.im);
    }
    let sidecar = json!({
        "space": space.name(),
        "g": format!("{g:?}"),
        "method": if numeric { "coherent-states" } else { "closed-form" },
        "points": points.len(),
    });
    emit(c, &csv, &sidecar)
}

/// Largest `|int e^{-i t l} phi(l) dl - F(t)|` on a few `t`.
fn round_trip(space: &Space, mu: &SpectralMeasure<f64>, c: &RunConfig) -> Result<f64, CliError> {
    let star = star_exponential(space, &c.algebra_vector(space)?, c.point(Some(space))?)?;
    let d = mu.as_density().expect("density");
    let mut worst = 0.0f64;
    for t in [-2.0, -1.0, -0.5, 0.25, 0.5, 1.0, 2.0] {
        worst = worst.max((d.forward_transform(t) - star.evaluate(t)?).norm());
    }
    Ok(worst)
}

fn cmd_density(c: &RunConfig) -> Result<(), CliError> {
    let space = c.space()?;
    let x = c.algebra_vector(&space)?;
    let z = c.point(Some(&space))?;
    if let SpaceKind::Poly { .. } = space.kind() {
        return Err(berezin::Error::Integrability("su(2) generators have finite spectrum".into()).into());
    }
    let mu = spectral_measure(&space, &x, z, &InversionSpec::default())?;
    if let SpectralMeasure::Atomic(a) = &mu {
        return Err(berezin::Error::Degenerate { location: a.locations[0] }.into());
    }
    let method = match space.kind() {
        SpaceKind::Fock { .. } => "fock-closed-form".to_string(),
        _ => format!("fourier-inversion/{}", star_exponential(&space, &x, z)?.method()),
    };
    let mut sidecar = measure_sidecar(&space, &x, z, &method, &mu);
    sidecar["round_trip_max_error"] = json!(round_trip(&space, &mu, c)?);
    if let Some(path) = &c.svg {
        let d = mu.as_density().expect("density");
        let pts: Vec<(f64, f64)> = d.grid().into_iter().zip(d.values.iter().copied()).collect();
        write_svg(path, &pts, "lambda", "phi")?;
    }
    emit(c, &mu.to_csv(), &sidecar)
}

fn max_atom_deviation(a: &AtomicMeasure<f64>, b: &AtomicMeasure<f64>) -> f64 {
    if a.locations.len() != b.locations.len() {
        return f64::INFINITY;
    }
    a.locations
        .iter()
        .zip(&b.locations)
        .chain(a.weights.iter().zip(&b.weights))
        .map(|(u, v)| (u - v).abs())
        .fold(0.0, f64::max)
}

fn cmd_spectrum(c: &RunConfig) -> Result<(), CliError> {
    let space = c.space()?;
    let x = c.algebra_vector(&space)?;
    let z = c.point(Some(&space))?;
    let (mu, method, deviation) = match space.kind() {
        SpaceKind::Poly { .. } => {
            let eig = spectral_measure_finite(&space, &x, z)?;
            let closed = su2_closed_form_measure(&space, &x, z)?;
            let dev = max_atom_deviation(eig.as_atomic().expect("atoms"), closed.as_atomic().expect("atoms"));
            (eig, "tridiagonal-eigen", Some(dev))
        }
        SpaceKind::Fock { gamma } => match gaussian_density(gamma, &x, z) {
            Err(berezin::Error::Degenerate { location }) => {
                (SpectralMeasure::Atomic(AtomicMeasure::dirac(location)), "central-character", None)
            }
            Err(e) => return Err(e.into()),
            Ok(_) => return Err(CliError::Config("the measure has a density here, use `berezin density`".into())),
        },
        SpaceKind::Disc { .. } => {
            return Err(CliError::Config("atoms are computed on poly and for central Fock directions".into()))
        }
    };
    let mut sidecar = measure_sidecar(&space, &x, z, method, &mu);
    if let Some(dev) = deviation {
        sidecar["closed_form_max_deviation"] = json!(dev);
    }
    emit(c, &mu.to_csv(), &sidecar)
}

fn table_svg(path: &Path, table: &ConvergenceTable<f64>) -> Result<(), CliError> {
    let pts: Vec<(f64, f64)> = table
        .errors()
        .into_iter()
        .map(|(n, e)| ((n as f64).log2(), e.log10()))
        .collect();
    write_svg(path, &pts, "log2 index", "log10 error")
}

fn cmd_contract(c: &RunConfig) -> Result<(), CliError> {
    let gamma = c.gamma()?;
    let target = c.target()?;
    let z = c.point(None)?;
    let indices = c.indices.clone().unwrap_or_else(default_indices);
    if indices.is_empty() {
        return Err(CliError::Config("--indices is empty".into()));
    }
    let table = match c.experiment.as_deref().unwrap_or("symbol") {
        "symbol" => symbol_convergence(&c.heisenberg_element()?, z, gamma, &indices, target)?,
        "matrix-element" => matrix_element_convergence(
            &c.heisenberg_element()?,
            gamma,
            c.p.unwrap_or(0),
            c.q.unwrap_or(0),
            &indices,
            target,
            c.truncation.unwrap_or(128),
        )?,
        "density" => {
            if target != MatrixGroup::SU11 {
                return Err(CliError::Config("the density experiment runs on su11".into()));
            }
            density_convergence(&c.heis_vector([1.0, 0.0, 0.0])?, z, gamma, &indices, &InversionSpec::default())?.table
        }
        "weak" => {
            if c.target.is_some() && target != MatrixGroup::SU2 {
                return Err(CliError::Config("the weak experiment runs on su2".into()));
            }
            let width = c.phi_width.unwrap_or(std::f64::consts::FRAC_1_SQRT_2);
            if !(width > 0.0) {
                return Err(CliError::Config("--phi-width must be positive".into()));
            }
            let phi = TestFunction::gaussian(c.phi_center.unwrap_or(0.0), width);
            weak_convergence_su2(&c.heis_vector([1.0, 0.0, 0.0])?, z, gamma, &phi, &indices)?
        }
        other => return Err(CliError::Config(format!("unknown experiment `{other}`"))),
    };
    if let Some(path) = &c.svg {
        table_svg(path, &table)?;
    }
    emit(c, &table.to_csv(), &table.metadata_json())
}

fn cmd_check(c: &RunConfig) -> Result<(), CliError> {
    let suites = match &c.suite {
        None => Suite::ALL.to_vec(),
        Some(names) => names.iter().map(|s| Suite::parse(s)).collect::<Result<Vec<_>, _>>()?,
    };
    let reports = run_suites(&suites, c.seed.unwrap_or(DEFAULT_SEED));
    let mut text = String::new();
    for r in &reports {
        let _ = writeln!(text, "{}", r.line());
    }
    match &c.out {
        Some(path) => std::fs::write(path, &text)?,
        None => print!("{text}"),
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    if failed > 0 {
        return Err(CliError::CheckFailed(failed));
    }
    Ok(())
}
