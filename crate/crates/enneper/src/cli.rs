//! Command-line front end: argument parsing, pipeline orchestration, exit
//! codes, and machine-readable error reporting.
//!
//! Exit codes: 0 = success, 1 = a verification check failed, 2 = usage or
//! configuration error, 3 = I/O or parse error. Errors also emit a JSON
//! object on stderr.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::algebra::AlgebraKind;
use crate::builder::{
    curvature_field, integrate_representation, loop_residual, reconstruct_from_gauss_map,
    BuildError,
};
use crate::expr::{cauchy_riemann_residual, parse, ParseError};
use crate::grid::{GridSpec, SurfaceGrid, DEFAULT_GUARD};
use crate::io::{
    read_surface, write_csv, write_obj, write_report, write_surface, IoError, ReportMeta,
};
use crate::minkowski::MinkowskiVec3;
use crate::verify::{
    bonnet_conditions_check, canonical_bonnet_data, canonical_checks, consistency_checks,
    fundamental_forms, gauss_map_checks, natural_pde_residual, strong_regularity_check, CheckEntry,
    Tolerances, VerifyError,
};
use crate::weierstrass::SurfaceCase;

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_IO_OR_PARSE: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "enneper",
    version,
    about = "Minimal time-like and maximal space-like surfaces in Minkowski 3-space, generated from holomorphic functions and numerically verified"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a surface over a rectangular grid and write a surface file
    Generate {
        /// Surface family: `timelike` or `spacelike`
        #[arg(long)]
        case: String,
        /// Generating function, e.g. "z" or "(z^2 + 1)/2"
        #[arg(long)]
        expr: String,
        /// Grid as "x0:x1:nx,y0:y1:ny"
        #[arg(long)]
        domain: String,
        /// Base point "x,y"; must be a lattice node
        #[arg(long)]
        base: String,
        /// Ambient anchor value "a,b,c" for the base node
        #[arg(long, default_value = "0,0,0")]
        base_value: String,
        /// Masking guard on the Gauss-map denominator magnitude
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: f64,
        /// Output surface file
        #[arg(long, default_value = "surface.json")]
        out: PathBuf,
    },
    /// Verify every identity on a stored surface and write a report
    Verify {
        /// Input surface file
        #[arg(long = "in")]
        input: PathBuf,
        /// Output report file
        #[arg(long)]
        report: PathBuf,
        /// Tolerance override "check_id=value"; repeatable
        #[arg(long = "tol")]
        tolerances: Vec<String>,
        /// Threshold for the strong-regularity products
        #[arg(long, default_value_t = 1e-6)]
        regularity_threshold: f64,
    },
    /// Check the natural PDE on the curvature field of an expression
    /// without building a surface
    PdeCheck {
        #[arg(long)]
        case: String,
        #[arg(long)]
        expr: String,
        /// Grid as "x0:x1:nx,y0:y1:ny"
        #[arg(long)]
        domain: String,
        #[arg(long, default_value_t = DEFAULT_GUARD)]
        guard: f64,
        /// Tolerance override "check_id=value"; repeatable
        #[arg(long = "tol")]
        tolerances: Vec<String>,
        /// Optional report file
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Convert a surface file to OBJ, CSV, or normalized JSON
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// One of `obj`, `csv`, `json`
        #[arg(long)]
        format: String,
    },
    /// Parse an expression and print its tree; optionally probe the
    /// Cauchy-Riemann residual
    Parse {
        #[arg(long)]
        expr: String,
        /// Algebra for the holomorphy probe: `circular` or `hyperbolic`
        #[arg(long)]
        algebra: Option<String>,
        /// Probe point "x,y" for the Cauchy-Riemann residual
        #[arg(long)]
        cr_probe: Option<String>,
        /// Central-difference step for the probe
        #[arg(long, default_value_t = 1e-5)]
        cr_step: f64,
    },
    /// Rebuild a surface from its stored Gauss map and compare
    Reconstruct {
        #[arg(long = "in")]
        input: PathBuf,
        /// Optional output surface file for the reconstruction
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure routed to an exit code and a machine-readable stderr record.
#[derive(Debug)]
pub struct CliFailure {
    pub code: u8,
    pub kind: &'static str,
    pub message: String,
    pub offset: Option<usize>,
}

impl CliFailure {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
            offset: None,
        }
    }

    fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO_OR_PARSE,
            kind: "io",
            message: message.into(),
            offset: None,
        }
    }

    fn emit(&self) {
        let mut obj = format!(
            "{{\"error\":{{\"kind\":\"{}\",\"message\":\"{}\"",
            self.kind,
            self.message.replace('\\', "\\\\").replace('"', "\\\"")
        );
        if let Some(off) = self.offset {
            obj.push_str(&format!(",\"offset\":{off}"));
        }
        obj.push_str("}}");
        eprintln!("{obj}");
    }
}

impl From<ParseError> for CliFailure {
    fn from(e: ParseError) -> Self {
        Self {
            code: EXIT_IO_OR_PARSE,
            kind: "parse",
            message: e.to_string(),
            offset: Some(e.offset()),
        }
    }
}

impl From<IoError> for CliFailure {
    fn from(e: IoError) -> Self {
        Self::io(e.to_string())
    }
}

impl From<BuildError> for CliFailure {
    fn from(e: BuildError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<VerifyError> for CliFailure {
    fn from(e: VerifyError) -> Self {
        Self::usage(e.to_string())
    }
}

/// Run a parsed command; returns the process exit code.
pub fn run(cli: Cli) -> u8 {
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            failure.emit();
            failure.code
        }
    }
}

fn dispatch(command: Command) -> Result<u8, CliFailure> {
    match command {
        Command::Generate {
            case,
            expr,
            domain,
            base,
            base_value,
            guard,
            out,
        } => {
            let case = parse_case(&case)?;
            let ast = parse(&expr)?;
            let spec = parse_grid_spec(&domain, &base, &base_value, guard)?;
            let grid = integrate_representation(&ast, case, &spec)?;
            write_file(&out, &write_surface(&grid))?;
            println!(
                "wrote {}: {} nodes, {} valid",
                out.display(),
                spec.nx * spec.ny,
                grid.valid_count()
            );
            Ok(EXIT_OK)
        }
        Command::Verify {
            input,
            report,
            tolerances,
            regularity_threshold,
        } => {
            let grid = read_surface(&input)?;
            let overrides = parse_tolerance_overrides(&tolerances)?;
            let entries = run_all_checks(&grid, overrides, regularity_threshold)?;
            let h = grid.spec.dx().max(grid.spec.dy());
            let meta = ReportMeta {
                expr: &grid.expr_text,
                case: grid.case,
                spec: &grid.spec,
                h,
            };
            write_file(&report, &write_report(&meta, &entries))?;
            let mut all_pass = true;
            for e in &entries {
                print_entry(e);
                all_pass &= e.pass;
            }
            Ok(if all_pass { EXIT_OK } else { EXIT_CHECK_FAILED })
        }
        Command::PdeCheck {
            case,
            expr,
            domain,
            guard,
            tolerances,
            report,
        } => {
            let case = parse_case(&case)?;
            let ast = parse(&expr)?;
            let spec = parse_pde_grid_spec(&domain, guard)?;
            let (nu, mask) = curvature_field(&ast, case, &spec)?;
            let overrides = parse_tolerance_overrides(&tolerances)?;
            let h = spec.dx().max(spec.dy());
            let tol = Tolerances::with_overrides(h, overrides);
            let entry = natural_pde_residual(case, &nu, &mask, spec.dx(), spec.dy(), &tol)?;
            if let Some(path) = report {
                let meta = ReportMeta {
                    expr: &expr,
                    case,
                    spec: &spec,
                    h,
                };
                write_file(&path, &write_report(&meta, std::slice::from_ref(&entry)))?;
            }
            print_entry(&entry);
            Ok(if entry.pass {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            })
        }
        Command::Export { input, out, format } => {
            let grid = read_surface(&input)?;
            let payload = match format.as_str() {
                "obj" => write_obj(&grid).map_err(|e| match e {
                    IoError::NoValidCell => CliFailure::usage("surface has no valid nodes"),
                    other => other.into(),
                })?,
                "csv" => write_csv(&grid),
                "json" => write_surface(&grid),
                other => return Err(CliFailure::usage(format!("unknown format `{other}`"))),
            };
            write_file(&out, &payload)?;
            println!("wrote {}", out.display());
            Ok(EXIT_OK)
        }
        Command::Parse {
            expr,
            algebra,
            cr_probe,
            cr_step,
        } => {
            let ast = parse(&expr)?;
            println!("{ast}");
            if let Some(probe) = cr_probe {
                let kind = match algebra.as_deref() {
                    Some("circular") | None => AlgebraKind::Circular,
                    Some("hyperbolic") => AlgebraKind::Hyperbolic,
                    Some(other) => {
                        return Err(CliFailure::usage(format!("unknown algebra `{other}`")))
                    }
                };
                if !(cr_step.is_finite() && cr_step > 0.0) {
                    return Err(CliFailure::usage("cr-step must be positive"));
                }
                let (x, y) = parse_pair(&probe)
                    .ok_or_else(|| CliFailure::usage("cr-probe must be \"x,y\""))?;
                let r = cauchy_riemann_residual(&ast, kind, (x, y), cr_step).map_err(|e| {
                    CliFailure::usage(format!("expression singular near the probe: {e}"))
                })?;
                println!("cauchy_riemann_residual {} {r:.3e}", kind.name());
            }
            Ok(EXIT_OK)
        }
        Command::Reconstruct { input, out } => {
            let grid = read_surface(&input)?;
            let rebuilt = reconstruct_from_gauss_map(&grid)?;
            let mut worst = 0.0f64;
            let mut compared = 0usize;
            for iy in 0..grid.spec.ny {
                for ix in 0..grid.spec.nx {
                    if *rebuilt.valid.get(ix, iy) && *grid.valid.get(ix, iy) {
                        let d = rebuilt
                            .points
                            .get(ix, iy)
                            .sub(*grid.points.get(ix, iy))
                            .coord_norm();
                        worst = worst.max(d);
                        compared += 1;
                    }
                }
            }
            if let Some(path) = out {
                write_file(&path, &write_surface(&rebuilt))?;
            }
            println!("reconstruction max node distance {worst:.3e} over {compared} nodes");
            Ok(EXIT_OK)
        }
    }
}

fn print_entry(e: &CheckEntry) {
    println!(
        "{} {}: max {:.3e} mean {:.3e} tol {:.3e} nodes {}{}",
        if e.pass { "PASS" } else { "FAIL" },
        e.check_id,
        e.max_residual,
        e.mean_residual,
        e.tolerance,
        e.nodes_checked,
        e.detail
            .as_deref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default()
    );
}

/// The full verify pipeline on a stored surface.
fn run_all_checks(
    grid: &SurfaceGrid,
    overrides: BTreeMap<String, f64>,
    regularity_threshold: f64,
) -> Result<Vec<CheckEntry>, CliFailure> {
    let spec = &grid.spec;
    let h = spec.dx().max(spec.dy());
    let tol = Tolerances::with_overrides(h, overrides);
    let forms = fundamental_forms(grid);
    if forms.forms.data().iter().all(|f| f.is_none()) {
        return Err(CliFailure::usage(
            "grid is too small or too masked to verify (no interior stencil)",
        ));
    }
    let mut entries = canonical_checks(grid, &forms, &tol);
    entries.extend(consistency_checks(grid, &forms, &tol));
    entries.extend(gauss_map_checks(grid, &tol));
    entries.push(natural_pde_residual(
        grid.case,
        &grid.nu,
        &grid.valid,
        spec.dx(),
        spec.dy(),
        &tol,
    )?);
    entries.extend(strong_regularity_check(
        grid,
        &forms,
        regularity_threshold,
        &tol,
    ));
    let data = canonical_bonnet_data(grid.case, &grid.nu, &grid.valid, spec.dx(), spec.dy());
    entries.extend(bonnet_conditions_check(grid.case, &data, &tol));
    // path-independence audit needs the generating expression back
    let ast = parse(&grid.expr_text)?;
    let loop_max = loop_residual(grid, &ast)?;
    entries.push(CheckEntry {
        check_id: "loop_residual".into(),
        max_residual: loop_max,
        mean_residual: loop_max,
        tolerance: tol.for_check("loop_residual"),
        pass: loop_max <= tol.for_check("loop_residual"),
        nodes_checked: grid.valid_count(),
        detail: None,
    });
    Ok(entries)
}

fn parse_case(name: &str) -> Result<SurfaceCase, CliFailure> {
    SurfaceCase::from_name(name).ok_or_else(|| {
        CliFailure::usage(format!(
            "unknown case `{name}` (expected `timelike` or `spacelike`)"
        ))
    })
}

fn parse_pair(text: &str) -> Option<(f64, f64)> {
    let mut it = text.split(',');
    let a = it.next()?.trim().parse().ok()?;
    let b = it.next()?.trim().parse().ok()?;
    it.next().is_none().then_some((a, b))
}

fn parse_triple(text: &str) -> Option<(f64, f64, f64)> {
    let mut it = text.split(',');
    let a = it.next()?.trim().parse().ok()?;
    let b = it.next()?.trim().parse().ok()?;
    let c = it.next()?.trim().parse().ok()?;
    it.next().is_none().then_some((a, b, c))
}

/// One axis of the domain syntax: "lo:hi:count".
fn parse_axis(text: &str) -> Option<(f64, f64, usize)> {
    let mut it = text.split(':');
    let lo = it.next()?.trim().parse().ok()?;
    let hi = it.next()?.trim().parse().ok()?;
    let count = it.next()?.trim().parse().ok()?;
    it.next().is_none().then_some((lo, hi, count))
}

/// The "x0:x1:nx,y0:y1:ny" domain syntax.
pub fn parse_domain(text: &str) -> Result<(f64, f64, usize, f64, f64, usize), CliFailure> {
    let err = || {
        CliFailure::usage(format!(
            "domain must be \"x0:x1:nx,y0:y1:ny\", got `{text}`"
        ))
    };
    let (xpart, ypart) = text.split_once(',').ok_or_else(err)?;
    let (x0, x1, nx) = parse_axis(xpart).ok_or_else(err)?;
    let (y0, y1, ny) = parse_axis(ypart).ok_or_else(err)?;
    Ok((x0, x1, nx, y0, y1, ny))
}

fn parse_grid_spec(
    domain: &str,
    base: &str,
    base_value: &str,
    guard: f64,
) -> Result<GridSpec, CliFailure> {
    let (x0, x1, nx, y0, y1, ny) = parse_domain(domain)?;
    let (bx, by) = parse_pair(base).ok_or_else(|| CliFailure::usage("base must be \"x,y\""))?;
    let (v1, v2, v3) = parse_triple(base_value)
        .ok_or_else(|| CliFailure::usage("base-value must be \"a,b,c\""))?;
    let spec = GridSpec {
        x0,
        x1,
        y0,
        y1,
        nx,
        ny,
        base_x: bx,
        base_y: by,
        base_value: MinkowskiVec3::new(v1, v2, v3),
        guard,
    };
    spec.validate()
        .map_err(|e| CliFailure::usage(e.to_string()))?;
    Ok(spec)
}

fn parse_pde_grid_spec(domain: &str, guard: f64) -> Result<GridSpec, CliFailure> {
    let (x0, x1, nx, y0, y1, ny) = parse_domain(domain)?;
    let spec = GridSpec {
        x0,
        x1,
        y0,
        y1,
        nx,
        ny,
        base_x: x0,
        base_y: y0,
        base_value: MinkowskiVec3::ZERO,
        guard,
    };
    spec.validate()
        .map_err(|e| CliFailure::usage(e.to_string()))?;
    Ok(spec)
}

fn parse_tolerance_overrides(args: &[String]) -> Result<BTreeMap<String, f64>, CliFailure> {
    let known = [
        "canonical_E",
        "canonical_G",
        "canonical_F",
        "canonical_f",
        "canonical_e",
        "canonical_g",
        "canonical_H",
        "canonical_gamma1",
        "canonical_gamma2",
        "gauss_sphere",
        "tangency_lx",
        "tangency_ly",
        "normal_consistency",
        "gauss_lx_norm",
        "gauss_ly_norm",
        "gauss_lx_ly",
        "gauss_pde",
        "natural_pde",
        "strong_regularity_nu",
        "strong_regularity_gamma",
        "bonnet_condition1",
        "bonnet_condition21a",
        "bonnet_condition21b",
        "bonnet_condition22",
        "loop_residual",
    ];
    let mut out = BTreeMap::new();
    for arg in args {
        let (id, value) = arg.split_once('=').ok_or_else(|| {
            CliFailure::usage(format!(
                "tolerance override must be \"check_id=value\", got `{arg}`"
            ))
        })?;
        if !known.contains(&id) {
            return Err(CliFailure::usage(format!("unknown check id `{id}`")));
        }
        let value: f64 = value
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| CliFailure::usage(format!("bad tolerance value in `{arg}`")))?;
        out.insert(id.to_owned(), value);
    }
    Ok(out)
}

fn write_file(path: &Path, payload: &str) -> Result<(), CliFailure> {
    std::fs::write(path, payload)
        .map_err(|e| CliFailure::io(format!("cannot write {}: {e}", path.display())))
}
