//! Surface and report files, plus mesh export.
//!
//! Surface and report JSON is emitted by a small writer of our own so that
//! numbers carry exactly 17 significant digits and reruns are
//! byte-identical; reading goes through serde with schema validation on
//! top. OBJ/CSV exports share the same number formatting.

use std::fmt::Write as _;

use serde::Deserialize;
use thiserror::Error;

use crate::grid::{Grid2, GridSpec, SurfaceGrid};
use crate::minkowski::MinkowskiVec3;
use crate::verify::CheckEntry;
use crate::weierstrass::SurfaceCase;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid surface file: {0}")]
    Schema(String),
    #[error("no valid nodes to export")]
    NoValidCell,
}

/// 17 significant digits; round-trips every finite f64 exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

fn push_f64_array(out: &mut String, values: impl Iterator<Item = f64>) {
    out.push('[');
    let mut first = true;
    for v in values {
        if !first {
            out.push(',');
        }
        first = false;
        out.push_str(&fmt_f64(v));
    }
    out.push(']');
}

fn escape_json(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out
}

fn domain_json(spec: &GridSpec) -> String {
    format!(
        "{{\"x0\":{},\"x1\":{},\"y0\":{},\"y1\":{},\"nx\":{},\"ny\":{}}}",
        fmt_f64(spec.x0),
        fmt_f64(spec.x1),
        fmt_f64(spec.y0),
        fmt_f64(spec.y1),
        spec.nx,
        spec.ny
    )
}

/// Serialize a surface to the canonical JSON layout (arrays row-major, y
/// rows outer, x fastest; vector fields flattened by coordinate triples).
pub fn write_surface(grid: &SurfaceGrid) -> String {
    let spec = &grid.spec;
    let mut out = String::new();
    out.push_str("{\"case\":\"");
    out.push_str(grid.case.name());
    out.push_str("\",\"expr\":\"");
    out.push_str(&escape_json(&grid.expr_text));
    out.push_str("\",\"algebra\":\"");
    out.push_str(grid.case.algebra().name());
    out.push_str("\",\"domain\":");
    out.push_str(&domain_json(spec));
    out.push_str(",\"base\":{\"x\":");
    out.push_str(&fmt_f64(spec.base_x));
    out.push_str(",\"y\":");
    out.push_str(&fmt_f64(spec.base_y));
    out.push_str(",\"value\":");
    push_f64_array(
        &mut out,
        [spec.base_value.c1, spec.base_value.c2, spec.base_value.c3].into_iter(),
    );
    out.push_str("},\"guard\":");
    out.push_str(&fmt_f64(spec.guard));
    out.push_str(",\"points\":");
    push_f64_array(
        &mut out,
        grid.points.data().iter().flat_map(|p| [p.c1, p.c2, p.c3]),
    );
    out.push_str(",\"valid\":[");
    for (k, v) in grid.valid.data().iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        out.push_str(if *v { "true" } else { "false" });
    }
    out.push_str("],\"nu\":");
    push_f64_array(&mut out, grid.nu.data().iter().copied());
    out.push_str(",\"gauss\":");
    push_f64_array(
        &mut out,
        grid.gauss.data().iter().flat_map(|p| [p.c1, p.c2, p.c3]),
    );
    out.push_str(",\"tool_version\":\"");
    out.push_str(TOOL_VERSION);
    out.push_str("\"}\n");
    out
}

#[derive(Deserialize)]
struct DomainSection {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
    nx: usize,
    ny: usize,
}

#[derive(Deserialize)]
struct BaseSection {
    x: f64,
    y: f64,
    value: [f64; 3],
}

#[derive(Deserialize)]
struct SurfaceFile {
    case: String,
    expr: String,
    algebra: String,
    domain: DomainSection,
    base: BaseSection,
    guard: f64,
    points: Vec<f64>,
    valid: Vec<bool>,
    nu: Vec<f64>,
    gauss: Vec<f64>,
    #[allow(dead_code)]
    tool_version: String,
}

/// Decode and validate a surface file.
pub fn parse_surface(bytes: &[u8]) -> Result<SurfaceGrid, IoError> {
    let file: SurfaceFile = serde_json::from_slice(bytes)?;
    let case = SurfaceCase::from_name(&file.case)
        .ok_or_else(|| IoError::Schema(format!("unknown case `{}`", file.case)))?;
    if file.algebra != case.algebra().name() {
        return Err(IoError::Schema(format!(
            "algebra `{}` does not match case `{}`",
            file.algebra, file.case
        )));
    }
    let spec = GridSpec {
        x0: file.domain.x0,
        x1: file.domain.x1,
        y0: file.domain.y0,
        y1: file.domain.y1,
        nx: file.domain.nx,
        ny: file.domain.ny,
        base_x: file.base.x,
        base_y: file.base.y,
        base_value: MinkowskiVec3::new(file.base.value[0], file.base.value[1], file.base.value[2]),
        guard: file.guard,
    };
    spec.validate()
        .map_err(|e| IoError::Schema(e.to_string()))?;
    let n = spec
        .nx
        .checked_mul(spec.ny)
        .ok_or_else(|| IoError::Schema("grid size overflows".into()))?;
    if n > 100_000_000 {
        return Err(IoError::Schema("grid too large".into()));
    }
    if file.valid.len() != n || file.nu.len() != n {
        return Err(IoError::Schema("array length does not match nx*ny".into()));
    }
    if file.points.len() != 3 * n || file.gauss.len() != 3 * n {
        return Err(IoError::Schema(
            "vector array length does not match 3*nx*ny".into(),
        ));
    }
    let to_vecs = |flat: &[f64]| {
        flat.chunks_exact(3)
            .map(|c| MinkowskiVec3::new(c[0], c[1], c[2]))
            .collect::<Vec<_>>()
    };
    let points = Grid2::from_vec(spec.nx, spec.ny, to_vecs(&file.points)).unwrap();
    let gauss = Grid2::from_vec(spec.nx, spec.ny, to_vecs(&file.gauss)).unwrap();
    let nu = Grid2::from_vec(spec.nx, spec.ny, file.nu).unwrap();
    let valid = Grid2::from_vec(spec.nx, spec.ny, file.valid).unwrap();
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            if !*valid.get(ix, iy) {
                continue;
            }
            let p = *points.get(ix, iy);
            let l = *gauss.get(ix, iy);
            let v = *nu.get(ix, iy);
            if !(p.is_finite() && l.is_finite() && v.is_finite()) {
                return Err(IoError::Schema(format!(
                    "non-finite data at valid node ({ix},{iy})"
                )));
            }
            if v <= 0.0 {
                return Err(IoError::Schema(format!(
                    "non-positive nu at valid node ({ix},{iy})"
                )));
            }
        }
    }
    Ok(SurfaceGrid {
        spec,
        case,
        expr_text: file.expr,
        points,
        valid,
        nu,
        gauss,
    })
}

pub fn read_surface(path: &std::path::Path) -> Result<SurfaceGrid, IoError> {
    parse_surface(&std::fs::read(path)?)
}

/// Metadata block of a report file.
pub struct ReportMeta<'a> {
    pub expr: &'a str,
    pub case: SurfaceCase,
    pub spec: &'a GridSpec,
    pub h: f64,
}

/// Serialize verification results with their run metadata.
pub fn write_report(meta: &ReportMeta<'_>, entries: &[CheckEntry]) -> String {
    let mut out = String::new();
    out.push_str("{\"meta\":{\"expr\":\"");
    out.push_str(&escape_json(meta.expr));
    out.push_str("\",\"case\":\"");
    out.push_str(meta.case.name());
    out.push_str("\",\"domain\":");
    out.push_str(&domain_json(meta.spec));
    out.push_str(",\"h\":");
    out.push_str(&fmt_f64(meta.h));
    out.push_str(",\"tool_version\":\"");
    out.push_str(TOOL_VERSION);
    out.push_str("\",\"tolerances\":{");
    for (k, e) in entries.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "\"{}\":{}",
            escape_json(&e.check_id),
            fmt_f64(e.tolerance)
        );
    }
    out.push_str("}},\"checks\":[");
    for (k, e) in entries.iter().enumerate() {
        if k > 0 {
            out.push(',');
        }
        let _ = write!(
            out,
            "{{\"check_id\":\"{}\",\"max_residual\":{},\"mean_residual\":{},\"tolerance\":{},\"pass\":{},\"nodes_checked\":{}",
            escape_json(&e.check_id),
            fmt_f64(e.max_residual),
            fmt_f64(e.mean_residual),
            fmt_f64(e.tolerance),
            e.pass,
            e.nodes_checked
        );
        if let Some(d) = &e.detail {
            let _ = write!(out, ",\"detail\":\"{}\"", escape_json(d));
        }
        out.push('}');
    }
    out.push_str("]}\n");
    out
}

/// Report file schema for reading back (used by tests and downstream
/// tooling).
#[derive(Debug, Deserialize)]
pub struct ReportFile {
    pub meta: ReportMetaFile,
    pub checks: Vec<ReportCheck>,
}

#[derive(Debug, Deserialize)]
pub struct ReportMetaFile {
    pub expr: String,
    pub case: String,
    pub h: f64,
    pub tool_version: String,
}

#[derive(Debug, Deserialize)]
pub struct ReportCheck {
    pub check_id: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub nodes_checked: usize,
    #[serde(default)]
    pub detail: Option<String>,
}

pub fn parse_report(bytes: &[u8]) -> Result<ReportFile, IoError> {
    Ok(serde_json::from_slice(bytes)?)
}

/// OBJ export: one vertex per valid node in row-major order, two triangles
/// per fully valid quad cell. Masked nodes are omitted; faces re-index the
/// surviving vertices.
pub fn write_obj(grid: &SurfaceGrid) -> Result<String, IoError> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let mut index = Grid2::filled(nx, ny, 0usize);
    let mut out = String::new();
    let mut count = 0usize;
    for iy in 0..ny {
        for ix in 0..nx {
            if !*grid.valid.get(ix, iy) {
                continue;
            }
            count += 1;
            index.set(ix, iy, count); // 1-based OBJ indices
            let p = grid.points.get(ix, iy);
            let _ = writeln!(
                out,
                "v {} {} {}",
                fmt_f64(p.c1),
                fmt_f64(p.c2),
                fmt_f64(p.c3)
            );
        }
    }
    if count == 0 {
        return Err(IoError::NoValidCell);
    }
    for iy in 0..ny.saturating_sub(1) {
        for ix in 0..nx.saturating_sub(1) {
            let a = *index.get(ix, iy);
            let b = *index.get(ix + 1, iy);
            let c = *index.get(ix + 1, iy + 1);
            let d = *index.get(ix, iy + 1);
            if a > 0 && b > 0 && c > 0 && d > 0 {
                let _ = writeln!(out, "f {a} {b} {c}");
                let _ = writeln!(out, "f {a} {c} {d}");
            }
        }
    }
    Ok(out)
}

/// CSV export: `x,y,z1,z2,z3,nu,valid`, every node row-major.
pub fn write_csv(grid: &SurfaceGrid) -> String {
    let spec = &grid.spec;
    let mut out = String::from("x,y,z1,z2,z3,nu,valid\n");
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            let p = grid.points.get(ix, iy);
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                fmt_f64(spec.x(ix)),
                fmt_f64(spec.y(iy)),
                fmt_f64(p.c1),
                fmt_f64(p.c2),
                fmt_f64(p.c3),
                fmt_f64(*grid.nu.get(ix, iy)),
                if *grid.valid.get(ix, iy) {
                    "true"
                } else {
                    "false"
                }
            );
        }
    }
    out
}
