//! Surface synthesis over a lattice: pointwise evaluation of the
//! representation, line integration along staircase paths, the
//! path-independence audit, and reconstruction from Gauss-map data.

use thiserror::Error;

use crate::algebra::TwoComponentNumber;
use crate::expr::{eval_jet, ExprNode};
use crate::grid::{Grid2, GridError, GridSpec, SurfaceGrid, WPRIME_GUARD};
use crate::minkowski::MinkowskiVec3;
use crate::weierstrass::{
    gauss_denominator, gauss_map, normal_curvature, phi, surface_derivatives, SurfaceCase,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BuildError {
    #[error("invalid grid: {0}")]
    Grid(#[from] GridError),
    #[error("base node is invalid: {0}")]
    InvalidBasePoint(String),
    #[error("no valid nodes in the domain")]
    EmptyDomain,
    #[error("no fully valid 2x2 cell in the grid")]
    NoValidCell,
}

/// Everything the representation yields at one parameter point where the
/// derivative 1-form exists. The curvature and Gauss-map fields need the
/// stereographic denominator and positivity of nu on top of that, so they
/// are present only on the (smaller) fully valid set.
#[derive(Debug, Clone, Copy)]
struct NodeData {
    dzdx: MinkowskiVec3,
    dzdy: MinkowskiVec3,
    full: Option<(f64, MinkowskiVec3)>, // (nu, gauss)
}

/// Evaluate the representation at an arbitrary parameter point. `None`
/// means the 1-form itself is singular there (w' not invertible, a division
/// inside the expression failed, or values overflowed): such points block
/// integration paths. Points where only nu/l degenerate (denominator under
/// the guard, non-positive curvature) still carry the 1-form; they end up
/// masked in the output but do not block integration, since the integrand
/// is regular across them.
fn sample(ast: &ExprNode, case: SurfaceCase, guard: f64, x: f64, y: f64) -> Option<NodeData> {
    let z = TwoComponentNumber::new(x, y, case.algebra());
    let jet = eval_jet(ast, z).ok()?;
    if !jet.is_finite() {
        return None;
    }
    if jet.deriv.squared_modulus().abs() < WPRIME_GUARD {
        return None;
    }
    let p = phi(case, &jet).ok()?;
    let (dzdx, dzdy) = surface_derivatives(case, &p);
    if !(dzdx.is_finite() && dzdy.is_finite()) {
        return None;
    }
    let full = (|| {
        let d = gauss_denominator(case, jet.value);
        if d.abs() < guard.max(f64::MIN_POSITIVE) {
            return None;
        }
        let nu = normal_curvature(case, &jet).ok()?;
        let gauss = gauss_map(case, jet.value).ok()?;
        (nu.is_finite() && gauss.is_finite()).then_some((nu, gauss))
    })();
    Some(NodeData { dzdx, dzdy, full })
}

/// Composite Simpson step over one lattice edge. Exact for integrands that
/// are cubic along the edge, which covers polynomial generating functions
/// of low degree exactly.
fn simpson_step(f0: MinkowskiVec3, fm: MinkowskiVec3, f1: MinkowskiVec3, h: f64) -> MinkowskiVec3 {
    f0.add(fm.scale(4.0)).add(f1).scale(h / 6.0)
}

fn trapezoid_step(f0: MinkowskiVec3, f1: MinkowskiVec3, h: f64) -> MinkowskiVec3 {
    f0.add(f1).scale(h / 2.0)
}

struct SweepFrame {
    nx: usize,
    ny: usize,
    ib: usize,
    jb: usize,
    base_value: MinkowskiVec3,
}

/// Staircase sweep shared by integration and reconstruction: the base row
/// is integrated first, then every reachable column. `row_step(i)` is the
/// increment for the edge `(i, jb) -> (i+1, jb)`; `col_step(ix, j)` for
/// `(ix, j) -> (ix, j+1)`. A `None` increment blocks the path.
fn sweep_integrate(
    frame: &SweepFrame,
    node_ok: impl Fn(usize, usize) -> bool,
    row_step: impl Fn(usize) -> Option<MinkowskiVec3>,
    col_step: impl Fn(usize, usize) -> Option<MinkowskiVec3>,
) -> (Grid2<MinkowskiVec3>, Grid2<bool>) {
    let SweepFrame {
        nx,
        ny,
        ib,
        jb,
        base_value,
    } = *frame;
    let mut points = Grid2::filled(nx, ny, MinkowskiVec3::ZERO);
    let mut reached = Grid2::filled(nx, ny, false);
    points.set(ib, jb, base_value);
    reached.set(ib, jb, true);

    // base row, both directions
    for i in ib..nx - 1 {
        if !(*reached.get(i, jb) && node_ok(i + 1, jb)) {
            break;
        }
        match row_step(i) {
            Some(inc) => {
                points.set(i + 1, jb, points.get(i, jb).add(inc));
                reached.set(i + 1, jb, true);
            }
            None => break,
        }
    }
    for i in (1..=ib).rev() {
        if !(*reached.get(i, jb) && node_ok(i - 1, jb)) {
            break;
        }
        match row_step(i - 1) {
            Some(inc) => {
                points.set(i - 1, jb, points.get(i, jb).sub(inc));
                reached.set(i - 1, jb, true);
            }
            None => break,
        }
    }

    // columns, both directions
    for ix in 0..nx {
        if !*reached.get(ix, jb) {
            continue;
        }
        for j in jb..ny - 1 {
            if !(*reached.get(ix, j) && node_ok(ix, j + 1)) {
                break;
            }
            match col_step(ix, j) {
                Some(inc) => {
                    points.set(ix, j + 1, points.get(ix, j).add(inc));
                    reached.set(ix, j + 1, true);
                }
                None => break,
            }
        }
        for j in (1..=jb).rev() {
            if !(*reached.get(ix, j) && node_ok(ix, j - 1)) {
                break;
            }
            match col_step(ix, j - 1) {
                Some(inc) => {
                    points.set(ix, j - 1, points.get(ix, j).sub(inc));
                    reached.set(ix, j - 1, true);
                }
                None => break,
            }
        }
    }
    (points, reached)
}

/// Integrate the representation of `ast` over the lattice, anchoring the
/// base node at `spec.base_value`. Nodes where any precondition fails, and
/// nodes whose staircase path from the base crosses such a point, are
/// masked.
pub fn integrate_representation(
    ast: &ExprNode,
    case: SurfaceCase,
    spec: &GridSpec,
) -> Result<SurfaceGrid, BuildError> {
    let (ib, jb) = spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());

    let mut nodes: Vec<Option<NodeData>> = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            nodes.push(sample(ast, case, spec.guard, spec.x(ix), spec.y(iy)));
        }
    }
    let node = |ix: usize, iy: usize| -> &Option<NodeData> { &nodes[iy * nx + ix] };
    if !nodes
        .iter()
        .any(|n| matches!(n, Some(NodeData { full: Some(_), .. })))
    {
        return Err(BuildError::EmptyDomain);
    }
    if !matches!(node(ib, jb), Some(NodeData { full: Some(_), .. })) {
        return Err(BuildError::InvalidBasePoint(format!(
            "representation preconditions fail at ({}, {})",
            spec.base_x, spec.base_y
        )));
    }

    let frame = SweepFrame {
        nx,
        ny,
        ib,
        jb,
        base_value: spec.base_value,
    };
    let (points, reached) = sweep_integrate(
        &frame,
        |ix, iy| node(ix, iy).is_some(),
        |i| {
            let f0 = node(i, jb).as_ref()?.dzdx;
            let f1 = node(i + 1, jb).as_ref()?.dzdx;
            let fm = sample(ast, case, spec.guard, spec.x(i) + 0.5 * dx, spec.y(jb))?.dzdx;
            Some(simpson_step(f0, fm, f1, dx))
        },
        |ix, j| {
            let f0 = node(ix, j).as_ref()?.dzdy;
            let f1 = node(ix, j + 1).as_ref()?.dzdy;
            let fm = sample(ast, case, spec.guard, spec.x(ix), spec.y(j) + 0.5 * dy)?.dzdy;
            Some(simpson_step(f0, fm, f1, dy))
        },
    );

    let mut valid = Grid2::filled(nx, ny, false);
    let mut nu = Grid2::filled(nx, ny, 0.0);
    let mut gauss = Grid2::filled(nx, ny, MinkowskiVec3::ZERO);
    for iy in 0..ny {
        for ix in 0..nx {
            if let Some(NodeData {
                full: Some((n, g)), ..
            }) = node(ix, iy)
            {
                nu.set(ix, iy, *n);
                gauss.set(ix, iy, *g);
                valid.set(ix, iy, *reached.get(ix, iy));
            }
        }
    }

    Ok(SurfaceGrid {
        spec: spec.clone(),
        case,
        expr_text: ast.to_string(),
        points,
        valid,
        nu,
        gauss,
    })
}

/// Pointwise curvature field of the representation on a lattice, with its
/// validity mask; no integration and no base-point requirement. This is
/// what the standalone natural-PDE check runs on.
pub fn curvature_field(
    ast: &ExprNode,
    case: SurfaceCase,
    spec: &GridSpec,
) -> Result<(Grid2<f64>, Grid2<bool>), BuildError> {
    spec.validate()?;
    let mut nu = Grid2::filled(spec.nx, spec.ny, 0.0);
    let mut mask = Grid2::filled(spec.nx, spec.ny, false);
    let mut any = false;
    for iy in 0..spec.ny {
        for ix in 0..spec.nx {
            if let Some(NodeData {
                full: Some((v, _)), ..
            }) = sample(ast, case, spec.guard, spec.x(ix), spec.y(iy))
            {
                nu.set(ix, iy, v);
                mask.set(ix, iy, true);
                any = true;
            }
        }
    }
    if !any {
        return Err(BuildError::EmptyDomain);
    }
    Ok((nu, mask))
}

/// Maximum over all fully valid 2x2 cells of the trapezoid circulation of
/// the derivative 1-form around the cell, normalized by cell perimeter.
/// Small values certify path independence at grid scale.
pub fn loop_residual(grid: &SurfaceGrid, ast: &ExprNode) -> Result<f64, BuildError> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let mut fields: Vec<Option<(MinkowskiVec3, MinkowskiVec3)>> = Vec::with_capacity(nx * ny);
    for iy in 0..ny {
        for ix in 0..nx {
            let f = if *grid.valid.get(ix, iy) {
                sample(ast, grid.case, spec.guard, spec.x(ix), spec.y(iy)).map(|d| (d.dzdx, d.dzdy))
            } else {
                None
            };
            fields.push(f);
        }
    }
    let at = |ix: usize, iy: usize| fields[iy * nx + ix];
    let mut worst: Option<f64> = None;
    for iy in 0..ny - 1 {
        for ix in 0..nx - 1 {
            let (Some(c00), Some(c10), Some(c11), Some(c01)) = (
                at(ix, iy),
                at(ix + 1, iy),
                at(ix + 1, iy + 1),
                at(ix, iy + 1),
            ) else {
                continue;
            };
            let bottom = trapezoid_step(c00.0, c10.0, dx);
            let right = trapezoid_step(c10.1, c11.1, dy);
            let top = trapezoid_step(c01.0, c11.0, dx);
            let left = trapezoid_step(c00.1, c01.1, dy);
            let circ = bottom.add(right).sub(top).sub(left);
            let r = circ.max_abs_component() / (2.0 * (dx + dy));
            worst = Some(worst.map_or(r, |w: f64| w.max(r)));
        }
    }
    worst.ok_or(BuildError::NoValidCell)
}

/// Rebuild the surface from the stored Gauss map and curvature alone,
/// integrating `z_x = -(1/nu) l_x`, `z_y = (1/nu) l_y` with `l_x`, `l_y`
/// taken from central differences of the stored field. Anchored at the
/// same base node and value; agreement with the primary surface is the
/// converse-construction consistency check.
pub fn reconstruct_from_gauss_map(grid: &SurfaceGrid) -> Result<SurfaceGrid, BuildError> {
    let spec = &grid.spec;
    let (ib, jb) = spec.validate()?;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());

    let ok = |ix: usize, iy: usize| *grid.valid.get(ix, iy);
    // nodes where both central differences of l exist
    let diff_ok = |ix: usize, iy: usize| {
        ix >= 1
            && iy >= 1
            && ix + 1 < nx
            && iy + 1 < ny
            && ok(ix, iy)
            && ok(ix - 1, iy)
            && ok(ix + 1, iy)
            && ok(ix, iy - 1)
            && ok(ix, iy + 1)
    };
    let deriv = |ix: usize, iy: usize| -> Option<(MinkowskiVec3, MinkowskiVec3)> {
        if !diff_ok(ix, iy) {
            return None;
        }
        let nu = *grid.nu.get(ix, iy);
        let lx = grid
            .gauss
            .get(ix + 1, iy)
            .sub(*grid.gauss.get(ix - 1, iy))
            .scale(1.0 / (2.0 * dx));
        let ly = grid
            .gauss
            .get(ix, iy + 1)
            .sub(*grid.gauss.get(ix, iy - 1))
            .scale(1.0 / (2.0 * dy));
        Some((lx.scale(-1.0 / nu), ly.scale(1.0 / nu)))
    };

    if !diff_ok(ib, jb) {
        return Err(BuildError::InvalidBasePoint(
            "base node lacks a valid differencing stencil for the Gauss map".into(),
        ));
    }

    let frame = SweepFrame {
        nx,
        ny,
        ib,
        jb,
        base_value: spec.base_value,
    };
    let (points, reached) = sweep_integrate(
        &frame,
        diff_ok,
        |i| {
            let f0 = deriv(i, jb)?.0;
            let f1 = deriv(i + 1, jb)?.0;
            Some(trapezoid_step(f0, f1, dx))
        },
        |ix, j| {
            let f0 = deriv(ix, j)?.1;
            let f1 = deriv(ix, j + 1)?.1;
            Some(trapezoid_step(f0, f1, dy))
        },
    );

    let mut valid = Grid2::filled(nx, ny, false);
    for iy in 0..ny {
        for ix in 0..nx {
            valid.set(ix, iy, *reached.get(ix, iy) && diff_ok(ix, iy));
        }
    }
    Ok(SurfaceGrid {
        spec: spec.clone(),
        case: grid.case,
        expr_text: grid.expr_text.clone(),
        points,
        valid,
        nu: grid.nu.clone(),
        gauss: grid.gauss.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::grid::DEFAULT_GUARD;

    fn spec_on(
        domain: (f64, f64, f64, f64),
        n: (usize, usize),
        base: (f64, f64),
        guard: f64,
    ) -> GridSpec {
        GridSpec {
            x0: domain.0,
            x1: domain.1,
            y0: domain.2,
            y1: domain.3,
            nx: n.0,
            ny: n.1,
            base_x: base.0,
            base_y: base.1,
            base_value: MinkowskiVec3::ZERO,
            guard,
        }
    }

    /// Closed-form time-like surface generated by w = z, anchored so that
    /// z(0,0) = 0.
    fn tl_enneper(x: f64, y: f64) -> MinkowskiVec3 {
        MinkowskiVec3::new(
            (x * x * x / 3.0 - x * y * y + x) / 2.0,
            (x * x * y - y * y * y / 3.0 - y) / 2.0,
            (y * y - x * x) / 2.0,
        )
    }

    /// Space-like analogue for w = z.
    fn sl_enneper(x: f64, y: f64) -> MinkowskiVec3 {
        MinkowskiVec3::new(
            -(x * x + y * y) / 2.0,
            (x * x * x / 3.0 + x * y * y - x) / 2.0,
            (x * x * y + y * y * y / 3.0 + y) / 2.0,
        )
    }

    /// Closed-form time-like surface for w = exp(z), anchored at z(x0,y0).
    fn tl_exp_surface(x: f64, y: f64) -> MinkowskiVec3 {
        MinkowskiVec3::new(x.sinh() * y.cos(), x.sinh() * y.sin(), -x)
    }

    /// Space-like analogue for w = exp(z).
    fn sl_exp_surface(x: f64, y: f64) -> MinkowskiVec3 {
        MinkowskiVec3::new(-x, x.cosh() * y.cosh(), x.cosh() * y.sinh())
    }

    fn max_dev_against(grid: &SurfaceGrid, oracle: impl Fn(f64, f64) -> MinkowskiVec3) -> f64 {
        let spec = &grid.spec;
        let anchor = oracle(spec.base_x, spec.base_y).sub(spec.base_value);
        let mut worst = 0.0f64;
        for iy in 0..spec.ny {
            for ix in 0..spec.nx {
                if !*grid.valid.get(ix, iy) {
                    continue;
                }
                let want = oracle(spec.x(ix), spec.y(iy)).sub(anchor);
                let dev = grid.points.get(ix, iy).sub(want).max_abs_component();
                worst = worst.max(dev);
            }
        }
        worst
    }

    #[test]
    fn enneper_corner_values_match_closed_forms() {
        let ast = parse("z").unwrap();
        let spec = spec_on((0.0, 1.0, 0.0, 1.0), (201, 201), (0.0, 0.0), DEFAULT_GUARD);
        let tl = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        assert!(*tl.valid.get(200, 200));
        let corner = *tl.points.get(200, 200);
        assert!((corner.c1 - 1.0 / 6.0).abs() < 1e-6, "{corner:?}");
        assert!((corner.c2 + 1.0 / 6.0).abs() < 1e-6);
        assert!(corner.c3.abs() < 1e-6);

        let sl = integrate_representation(&ast, SurfaceCase::SpacelikeMaximal, &spec).unwrap();
        let corner = *sl.points.get(200, 200);
        assert!((corner.c1 + 1.0).abs() < 1e-6, "{corner:?}");
        assert!((corner.c2 - 1.0 / 6.0).abs() < 1e-6);
        assert!((corner.c3 - 7.0 / 6.0).abs() < 1e-6);

        // whole-grid agreement with the closed forms
        assert!(max_dev_against(&tl, tl_enneper) < 1e-6);
        assert!(max_dev_against(&sl, sl_enneper) < 1e-6);
    }

    #[test]
    fn base_node_carries_base_value_exactly() {
        let ast = parse("z").unwrap();
        let mut spec = spec_on((0.0, 1.0, 0.0, 1.0), (11, 11), (0.5, 0.5), DEFAULT_GUARD);
        spec.base_value = MinkowskiVec3::new(3.0, -2.0, 7.0);
        let g = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        assert_eq!(*g.points.get(5, 5), MinkowskiVec3::new(3.0, -2.0, 7.0));
    }

    #[test]
    fn base_on_singular_circle_is_rejected() {
        let ast = parse("z").unwrap();
        let spec = spec_on((0.0, 2.0, 0.0, 2.0), (51, 51), (1.0, 0.0), DEFAULT_GUARD);
        match integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec) {
            Err(BuildError::InvalidBasePoint(_)) => {}
            other => panic!("expected InvalidBasePoint, got {other:?}"),
        }
    }

    #[test]
    fn convergence_toward_exp_closed_form_improves_with_resolution() {
        // Simpson is exact on the polynomial surfaces, so measure order on
        // the transcendental generator instead.
        let ast = parse("exp(z)").unwrap();
        let mut prev: Option<f64> = None;
        for n in [25, 49, 101] {
            let spec = spec_on((1.5, 2.5, 0.25, 1.25), (n, n), (2.0, 0.75), DEFAULT_GUARD);
            let g = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
            let dev = max_dev_against(&g, tl_exp_surface);
            if let Some(p) = prev {
                assert!(p / dev >= 3.5, "improvement {} at n={n}", p / dev);
            }
            prev = Some(dev);
        }
        let ast = parse("exp(z)").unwrap();
        let mut prev: Option<f64> = None;
        for n in [25, 49, 101] {
            let spec = spec_on((0.25, 1.25, 0.1, 0.6), (n, n), (0.75, 0.35), DEFAULT_GUARD);
            let g = integrate_representation(&ast, SurfaceCase::SpacelikeMaximal, &spec).unwrap();
            let dev = max_dev_against(&g, sl_exp_surface);
            if let Some(p) = prev {
                assert!(p / dev >= 3.5, "improvement {} at n={n}", p / dev);
            }
            prev = Some(dev);
        }
    }

    #[test]
    fn translation_equivariance() {
        let ast = parse("z^2").unwrap();
        let spec_a = spec_on((1.5, 2.5, 0.25, 1.25), (41, 41), (2.0, 0.75), DEFAULT_GUARD);
        let mut spec_b = spec_a.clone();
        spec_b.base_value = MinkowskiVec3::new(10.0, -5.0, 2.5);
        let a = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec_a).unwrap();
        let b = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec_b).unwrap();
        assert_eq!(a.valid, b.valid);
        for iy in 0..41 {
            for ix in 0..41 {
                if !*a.valid.get(ix, iy) {
                    continue;
                }
                let shift = b.points.get(ix, iy).sub(*a.points.get(ix, iy));
                assert!((shift.c1 - 10.0).abs() <= 1e-15 * 10.0_f64.max(1.0));
                assert!((shift.c2 + 5.0).abs() <= 1e-15 * 5.0_f64.max(1.0));
                assert!((shift.c3 - 2.5).abs() <= 1e-15 * 2.5_f64.max(1.0));
            }
        }
    }

    #[test]
    fn masking_guard_is_monotone() {
        // domain straddles the unit circle where the time-like denominator
        // vanishes
        let ast = parse("z").unwrap();
        let base = (1.5, 1.5);
        let mut masks = Vec::new();
        for guard in [1e-3, 1e-1, 0.5] {
            let spec = spec_on((0.0, 2.0, 0.0, 2.0), (81, 81), base, guard);
            let g = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
            masks.push(g.valid);
        }
        for w in masks.windows(2) {
            for (coarse, fine) in w[1].data().iter().zip(w[0].data()) {
                assert!(!coarse || *fine, "raising the guard unmasked a node");
            }
        }
    }

    #[test]
    fn nodes_behind_a_singular_path_are_masked() {
        // pole of the generating function at z = 1 sits on the base row;
        // every column to its right is unreachable by the staircase path
        let ast = parse("1/(z - 1)").unwrap();
        let spec = spec_on((0.5, 1.5, 0.0, 0.5), (11, 6), (0.6, 0.0), DEFAULT_GUARD);
        let g = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        for iy in 0..6 {
            for ix in 0..11 {
                let expect = ix <= 4;
                assert_eq!(*g.valid.get(ix, iy), expect, "node ({ix},{iy})");
            }
        }
    }

    #[test]
    fn loop_residual_small_on_exact_forms() {
        let ast = parse("z").unwrap();
        let spec = spec_on((0.0, 0.5, 0.0, 0.5), (101, 101), (0.0, 0.0), DEFAULT_GUARD);
        let tl = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        assert!(loop_residual(&tl, &ast).unwrap() < 1e-8);
        let sl = integrate_representation(&ast, SurfaceCase::SpacelikeMaximal, &spec).unwrap();
        assert!(loop_residual(&sl, &ast).unwrap() < 1e-8);
    }

    #[test]
    fn loop_residual_needs_a_cell() {
        let ast = parse("z").unwrap();
        let spec = spec_on((0.0, 0.5, 0.0, 0.5), (3, 3), (0.0, 0.0), DEFAULT_GUARD);
        let mut g = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        for iy in 0..3 {
            for ix in 0..3 {
                if (ix + iy) % 2 == 1 {
                    g.valid.set(ix, iy, false);
                }
            }
        }
        assert_eq!(
            loop_residual(&g, &ast).unwrap_err(),
            BuildError::NoValidCell
        );
    }

    #[test]
    fn reconstruction_matches_primary_surface() {
        let ast = parse("z").unwrap();
        let spec = spec_on(
            (1.5, 2.5, 0.25, 1.25),
            (201, 201),
            (2.0, 0.75),
            DEFAULT_GUARD,
        );
        let tl = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        let rec = reconstruct_from_gauss_map(&tl).unwrap();
        let mut worst = 0.0f64;
        for iy in 0..201 {
            for ix in 0..201 {
                if *rec.valid.get(ix, iy) {
                    let d = rec
                        .points
                        .get(ix, iy)
                        .sub(*tl.points.get(ix, iy))
                        .coord_norm();
                    worst = worst.max(d);
                }
            }
        }
        assert!(worst < 1e-4, "max distance {worst:.3e}");

        let spec = spec_on(
            (0.25, 1.25, 0.1, 0.6),
            (201, 201),
            (0.75, 0.35),
            DEFAULT_GUARD,
        );
        let sl = integrate_representation(&ast, SurfaceCase::SpacelikeMaximal, &spec).unwrap();
        let rec = reconstruct_from_gauss_map(&sl).unwrap();
        let mut worst = 0.0f64;
        for iy in 0..201 {
            for ix in 0..201 {
                if *rec.valid.get(ix, iy) {
                    let d = rec
                        .points
                        .get(ix, iy)
                        .sub(*sl.points.get(ix, iy))
                        .coord_norm();
                    worst = worst.max(d);
                }
            }
        }
        assert!(worst < 1e-4, "max distance {worst:.3e}");
    }

    #[test]
    fn reconstruction_rejects_masked_base() {
        let ast = parse("z").unwrap();
        // base on the domain boundary: no central-difference stencil there
        let spec = spec_on((1.5, 2.5, 0.25, 1.25), (41, 41), (1.5, 0.25), DEFAULT_GUARD);
        let tl = integrate_representation(&ast, SurfaceCase::TimelikeMinimal, &spec).unwrap();
        match reconstruct_from_gauss_map(&tl) {
            Err(BuildError::InvalidBasePoint(_)) => {}
            other => panic!("expected InvalidBasePoint, got {other:?}"),
        }
    }

    #[test]
    fn differenced_surface_reproduces_phi_parts() {
        // cross-module property: finite differences of the integrated z
        // recover the Re/eps-parts of phi to second order
        for (case, dom, base) in [
            (
                SurfaceCase::TimelikeMinimal,
                (1.5, 2.5, 0.25, 1.25),
                (2.0, 0.75),
            ),
            (
                SurfaceCase::SpacelikeMaximal,
                (0.25, 1.25, 0.1, 0.6),
                (0.75, 0.35),
            ),
        ] {
            let ast = parse("exp(z)").unwrap();
            let spec = spec_on(dom, (101, 101), base, DEFAULT_GUARD);
            let g = integrate_representation(&ast, case, &spec).unwrap();
            let (dx, dy) = (spec.dx(), spec.dy());
            let mut worst = 0.0f64;
            for iy in 1..100 {
                for ix in 1..100 {
                    let all_ok = *g.valid.get(ix, iy)
                        && *g.valid.get(ix - 1, iy)
                        && *g.valid.get(ix + 1, iy)
                        && *g.valid.get(ix, iy - 1)
                        && *g.valid.get(ix, iy + 1);
                    if !all_ok {
                        continue;
                    }
                    let d = sample(&ast, case, spec.guard, spec.x(ix), spec.y(iy)).unwrap();
                    let zx = g
                        .points
                        .get(ix + 1, iy)
                        .sub(*g.points.get(ix - 1, iy))
                        .scale(1.0 / (2.0 * dx));
                    let zy = g
                        .points
                        .get(ix, iy + 1)
                        .sub(*g.points.get(ix, iy - 1))
                        .scale(1.0 / (2.0 * dy));
                    worst = worst.max(zx.sub(d.dzdx).max_abs_component());
                    worst = worst.max(zy.sub(d.dzdy).max_abs_component());
                }
            }
            // second-order differencing of a surface with O(10) third
            // derivatives at h = 0.01
            assert!(worst < 5e-3, "{case:?}: {worst:.3e}");
        }
    }

    #[test]
    fn valid_nodes_satisfy_grid_invariants() {
        for (case, dom, base) in [
            (
                SurfaceCase::TimelikeMinimal,
                (1.5, 2.5, 0.25, 1.25),
                (2.0, 0.75),
            ),
            (
                SurfaceCase::SpacelikeMaximal,
                (0.25, 1.25, 0.1, 0.6),
                (0.75, 0.35),
            ),
        ] {
            let ast = parse("z + z^3/3").unwrap();
            let spec = spec_on(dom, (51, 51), base, DEFAULT_GUARD);
            let g = integrate_representation(&ast, case, &spec).unwrap();
            let target = g.case.gauss_square();
            let mut any = false;
            for iy in 0..51 {
                for ix in 0..51 {
                    if !*g.valid.get(ix, iy) {
                        continue;
                    }
                    any = true;
                    assert!(g.points.get(ix, iy).is_finite());
                    assert!(*g.nu.get(ix, iy) > 0.0);
                    let l = *g.gauss.get(ix, iy);
                    assert!((l.inner(l) - target).abs() <= 1e-9);
                }
            }
            assert!(any);
        }
    }
}
