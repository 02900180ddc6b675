//! Numerical verification of the differential-geometric identities a
//! canonically parameterized surface must satisfy: fundamental forms and
//! their canonical relations, Gauss-map properties, the natural PDE of the
//! curvature function, strong regularity, and the Bonnet compatibility
//! conditions. All derivatives are central second-order differences on the
//! lattice; boundary rings without a full stencil are skipped.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::grid::{Grid2, SurfaceGrid};
use crate::minkowski::MinkowskiVec3;
use crate::weierstrass::SurfaceCase;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("curvature field is not positive on the differencing stencil")]
    NonPositiveNu,
    #[error("no node admits the required stencil")]
    NoNodes,
}

/// First and second fundamental forms plus derived curvatures at one node.
/// `metric_*` are E, F, G; `shape_*` are e, f, g (inner products of the
/// second derivatives with the unit normal).
#[derive(Debug, Clone, Copy)]
pub struct FundamentalForms {
    pub metric_e: f64,
    pub metric_f: f64,
    pub metric_g: f64,
    pub shape_e: f64,
    pub shape_f: f64,
    pub shape_g: f64,
    pub nu1: f64,
    pub nu2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub mean: f64,
    pub gauss: f64,
}

/// Per-node forms where the stencils allow them, plus the tangent vectors
/// (first differences) reused by the consistency checks.
pub struct FormsField {
    pub forms: Grid2<Option<FundamentalForms>>,
    pub tangents: Grid2<Option<(MinkowskiVec3, MinkowskiVec3)>>,
    /// Valid nodes that had to be skipped for lack of a full stencil.
    pub skipped: usize,
}

/// One named residual check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckEntry {
    pub check_id: String,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub nodes_checked: usize,
    pub detail: Option<String>,
}

#[derive(Debug, Default)]
struct ResidualStat {
    max: f64,
    sum: f64,
    count: usize,
}

impl ResidualStat {
    fn push(&mut self, r: f64) {
        self.max = self.max.max(r.abs());
        self.sum += r.abs();
        self.count += 1;
    }

    fn entry(&self, id: &str, tolerance: f64) -> CheckEntry {
        CheckEntry {
            check_id: id.to_owned(),
            max_residual: self.max,
            mean_residual: if self.count > 0 {
                self.sum / self.count as f64
            } else {
                0.0
            },
            tolerance,
            pass: self.count > 0 && self.max <= tolerance,
            nodes_checked: self.count,
            detail: None,
        }
    }
}

/// Default tolerances, mostly of the form C*h^2 with per-check constants
/// estimated from the Enneper surfaces at desk resolutions. Pointwise
/// algebraic checks get fixed absolute bounds; fraction-valued checks
/// (strong regularity, Bonnet condition 1) must be exactly zero.
#[derive(Debug, Clone)]
pub struct Tolerances {
    pub h: f64,
    pub overrides: BTreeMap<String, f64>,
}

impl Tolerances {
    pub fn new(h: f64) -> Self {
        Self {
            h,
            overrides: BTreeMap::new(),
        }
    }

    pub fn with_overrides(h: f64, overrides: BTreeMap<String, f64>) -> Self {
        Self { h, overrides }
    }

    pub fn for_check(&self, id: &str) -> f64 {
        if let Some(t) = self.overrides.get(id) {
            return *t;
        }
        let h2 = self.h * self.h;
        let scaled = |c: f64| (c * h2).max(1e-9);
        match id {
            "canonical_E" | "canonical_G" | "canonical_F" | "canonical_f" | "canonical_e"
            | "canonical_g" | "canonical_H" => scaled(10.0),
            "canonical_gamma1" | "canonical_gamma2" => scaled(50.0),
            "gauss_lx_norm" | "gauss_ly_norm" | "gauss_lx_ly" => scaled(50.0),
            "gauss_pde" => scaled(100.0),
            "natural_pde" => scaled(50.0),
            "tangency_lx" | "tangency_ly" => scaled(10.0),
            "normal_consistency" => scaled(10.0),
            "gauss_sphere" => 1e-9,
            "bonnet_condition21a" | "bonnet_condition21b" => scaled(50.0),
            "bonnet_condition22" => scaled(1000.0),
            "loop_residual" => (10.0 * h2 * self.h).max(1e-12),
            "strong_regularity_nu" | "strong_regularity_gamma" | "bonnet_condition1" => 0.0,
            _ => scaled(50.0),
        }
    }
}

/// Sign pattern per case: G = sG/nu and g = sg in canonical parameters.
fn case_signs(case: SurfaceCase) -> (f64, f64) {
    match case {
        SurfaceCase::TimelikeMinimal => (1.0, -1.0),
        SurfaceCase::SpacelikeMaximal => (-1.0, 1.0),
    }
}

#[derive(Clone, Copy)]
struct MetricShape {
    me: f64,
    mf: f64,
    mg: f64,
    se: f64,
    sf: f64,
    sg: f64,
}

/// Compute the fundamental forms on every valid node that has the full
/// two-ring stencil: first and second differences of z need the immediate
/// 3x3 block, and the principal geodesic curvatures difference the metric
/// coefficients once more.
pub fn fundamental_forms(grid: &SurfaceGrid) -> FormsField {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let ok = |ix: usize, iy: usize| *grid.valid.get(ix, iy);
    let block_ok = |ix: usize, iy: usize| {
        ix >= 1
            && iy >= 1
            && ix + 1 < nx
            && iy + 1 < ny
            && ok(ix, iy)
            && ok(ix - 1, iy)
            && ok(ix + 1, iy)
            && ok(ix, iy - 1)
            && ok(ix, iy + 1)
            && ok(ix - 1, iy - 1)
            && ok(ix + 1, iy - 1)
            && ok(ix - 1, iy + 1)
            && ok(ix + 1, iy + 1)
    };

    let mut stage1: Grid2<Option<MetricShape>> = Grid2::filled(nx, ny, None);
    let mut tangents: Grid2<Option<(MinkowskiVec3, MinkowskiVec3)>> = Grid2::filled(nx, ny, None);
    for iy in 0..ny {
        for ix in 0..nx {
            if !block_ok(ix, iy) {
                continue;
            }
            let p = |jx: usize, jy: usize| *grid.points.get(jx, jy);
            let zx = p(ix + 1, iy).sub(p(ix - 1, iy)).scale(1.0 / (2.0 * dx));
            let zy = p(ix, iy + 1).sub(p(ix, iy - 1)).scale(1.0 / (2.0 * dy));
            let zxx = p(ix + 1, iy)
                .add(p(ix - 1, iy))
                .sub(p(ix, iy).scale(2.0))
                .scale(1.0 / (dx * dx));
            let zyy = p(ix, iy + 1)
                .add(p(ix, iy - 1))
                .sub(p(ix, iy).scale(2.0))
                .scale(1.0 / (dy * dy));
            let zxy = p(ix + 1, iy + 1)
                .sub(p(ix + 1, iy - 1))
                .sub(p(ix - 1, iy + 1))
                .add(p(ix - 1, iy - 1))
                .scale(1.0 / (4.0 * dx * dy));
            let l = *grid.gauss.get(ix, iy);
            stage1.set(
                ix,
                iy,
                Some(MetricShape {
                    me: zx.inner(zx),
                    mf: zx.inner(zy),
                    mg: zy.inner(zy),
                    se: zxx.inner(l),
                    sf: zxy.inner(l),
                    sg: zyy.inner(l),
                }),
            );
            tangents.set(ix, iy, Some((zx, zy)));
        }
    }

    let mut forms: Grid2<Option<FundamentalForms>> = Grid2::filled(nx, ny, None);
    let mut skipped = 0usize;
    for iy in 0..ny {
        for ix in 0..nx {
            if !ok(ix, iy) {
                continue;
            }
            let stencil_ok = stage1.get(ix, iy).is_some()
                && ix >= 1
                && iy >= 1
                && ix + 1 < nx
                && iy + 1 < ny
                && stage1.get(ix - 1, iy).is_some()
                && stage1.get(ix + 1, iy).is_some()
                && stage1.get(ix, iy - 1).is_some()
                && stage1.get(ix, iy + 1).is_some();
            if !stencil_ok {
                skipped += 1;
                continue;
            }
            let c = stage1.get(ix, iy).unwrap();
            let e_y = (stage1.get(ix, iy + 1).unwrap().me - stage1.get(ix, iy - 1).unwrap().me)
                / (2.0 * dy);
            let g_x = (stage1.get(ix + 1, iy).unwrap().mg - stage1.get(ix - 1, iy).unwrap().mg)
                / (2.0 * dx);
            let (gamma1, gamma2) = match grid.case {
                SurfaceCase::TimelikeMinimal => (
                    -e_y / (2.0 * c.me * c.mg.sqrt()),
                    g_x / (2.0 * c.mg * c.me.sqrt()),
                ),
                SurfaceCase::SpacelikeMaximal => (
                    e_y / (2.0 * c.me * (-c.mg).sqrt()),
                    -g_x / (2.0 * c.me.sqrt() * c.mg),
                ),
            };
            let nu1 = c.se / c.me;
            let nu2 = c.sg / c.mg;
            forms.set(
                ix,
                iy,
                Some(FundamentalForms {
                    metric_e: c.me,
                    metric_f: c.mf,
                    metric_g: c.mg,
                    shape_e: c.se,
                    shape_f: c.sf,
                    shape_g: c.sg,
                    nu1,
                    nu2,
                    gamma1,
                    gamma2,
                    mean: (nu1 + nu2) / 2.0,
                    gauss: nu1 * nu2,
                }),
            );
        }
    }
    FormsField {
        forms,
        tangents,
        skipped,
    }
}

/// Residuals of the canonical-parameter relations: E = 1/nu, G = +-1/nu,
/// F = f = 0, e = 1, g = -+1, H = 0, and the principal geodesic curvatures
/// against the derived sqrt-nu forms.
pub fn canonical_checks(
    grid: &SurfaceGrid,
    forms: &FormsField,
    tol: &Tolerances,
) -> Vec<CheckEntry> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let (s_g, s_shape_g) = case_signs(grid.case);
    let mut st: BTreeMap<&str, ResidualStat> = BTreeMap::new();
    let mut alt1 = ResidualStat::default();
    let mut alt2 = ResidualStat::default();
    for iy in 0..ny {
        for ix in 0..nx {
            let Some(f) = forms.forms.get(ix, iy) else {
                continue;
            };
            let nu = *grid.nu.get(ix, iy);
            let sqrt_nu = |jx: usize, jy: usize| grid.nu.get(jx, jy).sqrt();
            let sn_x = (sqrt_nu(ix + 1, iy) - sqrt_nu(ix - 1, iy)) / (2.0 * dx);
            let sn_y = (sqrt_nu(ix, iy + 1) - sqrt_nu(ix, iy - 1)) / (2.0 * dy);
            st.entry("canonical_E")
                .or_default()
                .push(f.metric_e - 1.0 / nu);
            st.entry("canonical_G")
                .or_default()
                .push(f.metric_g - s_g / nu);
            st.entry("canonical_F").or_default().push(f.metric_f);
            st.entry("canonical_f").or_default().push(f.shape_f);
            st.entry("canonical_e").or_default().push(f.shape_e - 1.0);
            st.entry("canonical_g")
                .or_default()
                .push(f.shape_g - s_shape_g);
            st.entry("canonical_H").or_default().push(f.mean);
            match grid.case {
                SurfaceCase::TimelikeMinimal => {
                    st.entry("canonical_gamma1")
                        .or_default()
                        .push(f.gamma1 - sn_y);
                    st.entry("canonical_gamma2")
                        .or_default()
                        .push(f.gamma2 + sn_x);
                    alt1.push(f.gamma1 - sn_x);
                    alt2.push(f.gamma2 + sn_y);
                }
                SurfaceCase::SpacelikeMaximal => {
                    st.entry("canonical_gamma1")
                        .or_default()
                        .push(f.gamma1 + sn_y);
                    st.entry("canonical_gamma2")
                        .or_default()
                        .push(f.gamma2 - sn_x);
                }
            }
        }
    }
    let ids = [
        "canonical_E",
        "canonical_G",
        "canonical_F",
        "canonical_f",
        "canonical_e",
        "canonical_g",
        "canonical_H",
        "canonical_gamma1",
        "canonical_gamma2",
    ];
    let mut out = Vec::new();
    for id in ids {
        let stat = st.remove(id).unwrap_or_default();
        let mut entry = stat.entry(id, tol.for_check(id));
        // The printed variant of the gamma relations swaps the x and y
        // derivatives of sqrt(nu); when it disagrees beyond tolerance it is
        // surfaced here instead of being gated on.
        if grid.case == SurfaceCase::TimelikeMinimal && entry.nodes_checked > 0 {
            if id == "canonical_gamma1" && alt1.max > entry.tolerance {
                entry.detail = Some(format!(
                    "printed-convention residual |gamma1 - (sqrt nu)_x| max {:.3e}; derived convention (sqrt nu)_y adopted",
                    alt1.max
                ));
            }
            if id == "canonical_gamma2" && alt2.max > entry.tolerance {
                entry.detail = Some(format!(
                    "printed-convention residual |gamma2 + (sqrt nu)_y| max {:.3e}; derived convention -(sqrt nu)_x adopted",
                    alt2.max
                ));
            }
        }
        out.push(entry);
    }
    out
}

/// Pointwise and differential consistency of the stored Gauss map: sphere
/// membership, tangency to the surface, and agreement with the normalized
/// Minkowski cross product of the tangents (sign resolved once).
pub fn consistency_checks(
    grid: &SurfaceGrid,
    forms: &FormsField,
    tol: &Tolerances,
) -> Vec<CheckEntry> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let mut sphere = ResidualStat::default();
    let mut tan_x = ResidualStat::default();
    let mut tan_y = ResidualStat::default();
    let mut cross_dev = ResidualStat::default();
    let mut sign: Option<f64> = None;
    for iy in 0..ny {
        for ix in 0..nx {
            if *grid.valid.get(ix, iy) {
                let l = *grid.gauss.get(ix, iy);
                sphere.push(l.inner(l) - grid.case.gauss_square());
            }
            let Some((zx, zy)) = forms.tangents.get(ix, iy) else {
                continue;
            };
            let l = *grid.gauss.get(ix, iy);
            tan_x.push(l.inner(*zx));
            tan_y.push(l.inner(*zy));
            let c = zx.cross(*zy);
            let q = c.inner(c);
            if q.abs() > 0.0 {
                let n = c.scale(1.0 / q.abs().sqrt());
                let s = *sign.get_or_insert_with(|| {
                    let plus = n.sub(l).max_abs_component();
                    let minus = n.add(l).max_abs_component();
                    if plus <= minus {
                        1.0
                    } else {
                        -1.0
                    }
                });
                cross_dev.push(n.scale(s).sub(l).max_abs_component());
            }
        }
    }
    vec![
        sphere.entry("gauss_sphere", tol.for_check("gauss_sphere")),
        tan_x.entry("tangency_lx", tol.for_check("tangency_lx")),
        tan_y.entry("tangency_ly", tol.for_check("tangency_ly")),
        cross_dev.entry("normal_consistency", tol.for_check("normal_consistency")),
    ]
}

/// Residuals of the Gauss-map properties: its first differences reproduce
/// nu in the case pattern and are orthogonal, and l satisfies its
/// second-order vector PDE.
pub fn gauss_map_checks(grid: &SurfaceGrid, tol: &Tolerances) -> Vec<CheckEntry> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let ok = |ix: usize, iy: usize| *grid.valid.get(ix, iy);
    let (s_g, _) = case_signs(grid.case);
    let mut lx_norm = ResidualStat::default();
    let mut ly_norm = ResidualStat::default();
    let mut lx_ly = ResidualStat::default();
    let mut pde = ResidualStat::default();
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            if !(ok(ix, iy) && ok(ix - 1, iy) && ok(ix + 1, iy) && ok(ix, iy - 1) && ok(ix, iy + 1))
            {
                continue;
            }
            let l = |jx: usize, jy: usize| *grid.gauss.get(jx, jy);
            let nu = *grid.nu.get(ix, iy);
            let lx = l(ix + 1, iy).sub(l(ix - 1, iy)).scale(1.0 / (2.0 * dx));
            let ly = l(ix, iy + 1).sub(l(ix, iy - 1)).scale(1.0 / (2.0 * dy));
            lx_norm.push(lx.inner(lx) - nu);
            ly_norm.push(ly.inner(ly) - s_g * nu);
            lx_ly.push(lx.inner(ly));
            let lxx = l(ix + 1, iy)
                .add(l(ix - 1, iy))
                .sub(l(ix, iy).scale(2.0))
                .scale(1.0 / (dx * dx));
            let lyy = l(ix, iy + 1)
                .add(l(ix, iy - 1))
                .sub(l(ix, iy).scale(2.0))
                .scale(1.0 / (dy * dy));
            let r = match grid.case {
                SurfaceCase::TimelikeMinimal => lxx.add(lyy).sub(l(ix, iy).scale(2.0 * nu)),
                SurfaceCase::SpacelikeMaximal => lxx.sub(lyy).add(l(ix, iy).scale(2.0 * nu)),
            };
            pde.push(r.max_abs_component());
        }
    }
    vec![
        lx_norm.entry("gauss_lx_norm", tol.for_check("gauss_lx_norm")),
        ly_norm.entry("gauss_ly_norm", tol.for_check("gauss_ly_norm")),
        lx_ly.entry("gauss_lx_ly", tol.for_check("gauss_lx_ly")),
        pde.entry("gauss_pde", tol.for_check("gauss_pde")),
    ]
}

/// Residual of the natural PDE of the curvature function on a masked nu
/// field: `Delta ln nu - 2 nu` (time-like) or
/// `(ln nu)_xx - (ln nu)_yy + 2 nu` (space-like).
pub fn natural_pde_residual(
    case: SurfaceCase,
    nu: &Grid2<f64>,
    mask: &Grid2<bool>,
    dx: f64,
    dy: f64,
    tol: &Tolerances,
) -> Result<CheckEntry, VerifyError> {
    let (nx, ny) = (nu.nx(), nu.ny());
    let ok = |ix: usize, iy: usize| *mask.get(ix, iy);
    let mut stat = ResidualStat::default();
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            if !(ok(ix, iy) && ok(ix - 1, iy) && ok(ix + 1, iy) && ok(ix, iy - 1) && ok(ix, iy + 1))
            {
                continue;
            }
            let v = |jx: usize, jy: usize| -> Result<f64, VerifyError> {
                let value = *nu.get(jx, jy);
                if value > 0.0 {
                    Ok(value.ln())
                } else {
                    Err(VerifyError::NonPositiveNu)
                }
            };
            let ln_xx = (v(ix + 1, iy)? - 2.0 * v(ix, iy)? + v(ix - 1, iy)?) / (dx * dx);
            let ln_yy = (v(ix, iy + 1)? - 2.0 * v(ix, iy)? + v(ix, iy - 1)?) / (dy * dy);
            let nu0 = *nu.get(ix, iy);
            let r = match case {
                SurfaceCase::TimelikeMinimal => ln_xx + ln_yy - 2.0 * nu0,
                SurfaceCase::SpacelikeMaximal => ln_xx - ln_yy + 2.0 * nu0,
            };
            stat.push(r);
        }
    }
    if stat.count == 0 {
        return Err(VerifyError::NoNodes);
    }
    Ok(stat.entry("natural_pde", tol.for_check("natural_pde")))
}

struct FlaggedNodes {
    total: usize,
    bad: usize,
    bbox: Option<(f64, f64, f64, f64)>,
}

impl FlaggedNodes {
    fn new() -> Self {
        Self {
            total: 0,
            bad: 0,
            bbox: None,
        }
    }

    fn push(&mut self, flag: bool, x: f64, y: f64) {
        self.total += 1;
        if flag {
            self.bad += 1;
            let b = self.bbox.get_or_insert((x, x, y, y));
            b.0 = b.0.min(x);
            b.1 = b.1.max(x);
            b.2 = b.2.min(y);
            b.3 = b.3.max(y);
        }
    }

    fn entry(&self, id: &str, tolerance: f64) -> CheckEntry {
        let frac = if self.total > 0 {
            self.bad as f64 / self.total as f64
        } else {
            0.0
        };
        CheckEntry {
            check_id: id.to_owned(),
            max_residual: frac,
            mean_residual: frac,
            tolerance,
            pass: self.total > 0 && frac <= tolerance,
            nodes_checked: self.total,
            detail: self.bbox.map(|(x0, x1, y0, y1)| {
                format!(
                    "{} of {} nodes flagged; x in [{x0:.6}, {x1:.6}], y in [{y0:.6}, {y1:.6}]",
                    self.bad, self.total
                )
            }),
        }
    }
}

/// Fraction-valued strong-regularity audit: nodes where `|nu_x nu_y|` or
/// `|gamma1 gamma2|` falls to `threshold` or below are flagged. The entry
/// residual is the flagged fraction, so pass means none.
pub fn strong_regularity_check(
    grid: &SurfaceGrid,
    forms: &FormsField,
    threshold: f64,
    tol: &Tolerances,
) -> Vec<CheckEntry> {
    let spec = &grid.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let (dx, dy) = (spec.dx(), spec.dy());
    let ok = |ix: usize, iy: usize| *grid.valid.get(ix, iy);
    let mut nu_flags = FlaggedNodes::new();
    let mut gamma_flags = FlaggedNodes::new();
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            if ok(ix, iy) && ok(ix - 1, iy) && ok(ix + 1, iy) && ok(ix, iy - 1) && ok(ix, iy + 1) {
                let nu_x = (grid.nu.get(ix + 1, iy) - grid.nu.get(ix - 1, iy)) / (2.0 * dx);
                let nu_y = (grid.nu.get(ix, iy + 1) - grid.nu.get(ix, iy - 1)) / (2.0 * dy);
                nu_flags.push((nu_x * nu_y).abs() <= threshold, spec.x(ix), spec.y(iy));
            }
            if let Some(f) = forms.forms.get(ix, iy) {
                gamma_flags.push(
                    (f.gamma1 * f.gamma2).abs() <= threshold,
                    spec.x(ix),
                    spec.y(iy),
                );
            }
        }
    }
    vec![
        nu_flags.entry(
            "strong_regularity_nu",
            tol.for_check("strong_regularity_nu"),
        ),
        gamma_flags.entry(
            "strong_regularity_gamma",
            tol.for_check("strong_regularity_gamma"),
        ),
    ]
}

/// Prescribed invariant fields for the Bonnet predicates, on a shared mask.
pub struct BonnetData {
    pub nu1: Grid2<f64>,
    pub nu2: Grid2<f64>,
    pub gamma1: Grid2<f64>,
    pub gamma2: Grid2<f64>,
    pub mask: Grid2<bool>,
    pub dx: f64,
    pub dy: f64,
}

/// The canonical data of a surface with curvature field `nu`:
/// `nu1 = nu, nu2 = -nu`, and the case-signed derivatives of sqrt(nu) as
/// principal geodesic curvatures (differenced, so the mask shrinks by one
/// ring).
pub fn canonical_bonnet_data(
    case: SurfaceCase,
    nu: &Grid2<f64>,
    mask: &Grid2<bool>,
    dx: f64,
    dy: f64,
) -> BonnetData {
    let (nx, ny) = (nu.nx(), nu.ny());
    let ok = |ix: usize, iy: usize| *mask.get(ix, iy) && *nu.get(ix, iy) > 0.0;
    let mut nu1 = Grid2::filled(nx, ny, 0.0);
    let mut nu2 = Grid2::filled(nx, ny, 0.0);
    let mut gamma1 = Grid2::filled(nx, ny, 0.0);
    let mut gamma2 = Grid2::filled(nx, ny, 0.0);
    let mut out_mask = Grid2::filled(nx, ny, false);
    for iy in 1..ny.saturating_sub(1) {
        for ix in 1..nx.saturating_sub(1) {
            if !(ok(ix, iy) && ok(ix - 1, iy) && ok(ix + 1, iy) && ok(ix, iy - 1) && ok(ix, iy + 1))
            {
                continue;
            }
            let sn = |jx: usize, jy: usize| nu.get(jx, jy).sqrt();
            let sn_x = (sn(ix + 1, iy) - sn(ix - 1, iy)) / (2.0 * dx);
            let sn_y = (sn(ix, iy + 1) - sn(ix, iy - 1)) / (2.0 * dy);
            let v = *nu.get(ix, iy);
            nu1.set(ix, iy, v);
            nu2.set(ix, iy, -v);
            let (g1, g2) = match case {
                SurfaceCase::TimelikeMinimal => (sn_y, -sn_x),
                SurfaceCase::SpacelikeMaximal => (-sn_y, sn_x),
            };
            gamma1.set(ix, iy, g1);
            gamma2.set(ix, iy, g2);
            out_mask.set(ix, iy, true);
        }
    }
    BonnetData {
        nu1,
        nu2,
        gamma1,
        gamma2,
        mask: out_mask,
        dx,
        dy,
    }
}

/// Evaluate the Bonnet hypothesis predicates on prescribed invariant
/// fields: the sign conditions (condition 1, reported as a violating
/// fraction), the two logarithmic-derivative identities (2.1), and the
/// Gauss-equation combination (2.2). Degenerate denominators are skipped
/// and counted in the detail line.
pub fn bonnet_conditions_check(
    case: SurfaceCase,
    data: &BonnetData,
    tol: &Tolerances,
) -> Vec<CheckEntry> {
    let (nx, ny) = (data.nu1.nx(), data.nu1.ny());
    let (dx, dy) = (data.dx, data.dy);
    let ok = |ix: usize, iy: usize| *data.mask.get(ix, iy);
    let stencil_ok = |ix: usize, iy: usize| {
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
    const DEN_FLOOR: f64 = 1e-12;

    #[derive(Clone, Copy)]
    struct Diffs {
        n1x: f64,
        n1y: f64,
        n2x: f64,
        n2y: f64,
        log1: Option<f64>,
        log2: Option<f64>,
    }
    let mut stage1: Grid2<Option<Diffs>> = Grid2::filled(nx, ny, None);
    let mut cond1 = FlaggedNodes::new();
    let mut skipped_log = 0usize;
    for iy in 0..ny {
        for ix in 0..nx {
            if !stencil_ok(ix, iy) {
                continue;
            }
            let d = |g: &Grid2<f64>, a: (usize, usize), b: (usize, usize), h: f64| {
                (*g.get(a.0, a.1) - *g.get(b.0, b.1)) / (2.0 * h)
            };
            let n1x = d(&data.nu1, (ix + 1, iy), (ix - 1, iy), dx);
            let n1y = d(&data.nu1, (ix, iy + 1), (ix, iy - 1), dy);
            let n2x = d(&data.nu2, (ix + 1, iy), (ix - 1, iy), dx);
            let n2y = d(&data.nu2, (ix, iy + 1), (ix, iy - 1), dy);
            let g1 = *data.gamma1.get(ix, iy);
            let g2 = *data.gamma2.get(ix, iy);
            let nu_diff = *data.nu1.get(ix, iy) - *data.nu2.get(ix, iy);
            let holds = match case {
                SurfaceCase::TimelikeMinimal => nu_diff > 0.0 && g1 * n1y > 0.0 && g2 * n2x > 0.0,
                SurfaceCase::SpacelikeMaximal => nu_diff > 0.0 && g1 * n1y < 0.0 && g2 * n2x < 0.0,
            };
            cond1.push(!holds, 0.0, 0.0);
            let sign = match case {
                SurfaceCase::TimelikeMinimal => 1.0,
                SurfaceCase::SpacelikeMaximal => -1.0,
            };
            let log_of = |num: f64, den: f64| -> Option<f64> {
                if den.abs() <= DEN_FLOOR {
                    return None;
                }
                let arg = num / den;
                (arg > 0.0).then(|| arg.ln())
            };
            let log1 = log_of(sign * n1y, g1);
            let log2 = log_of(sign * n2x, g2);
            if log1.is_none() || log2.is_none() {
                skipped_log += 1;
            }
            stage1.set(
                ix,
                iy,
                Some(Diffs {
                    n1x,
                    n1y,
                    n2x,
                    n2y,
                    log1,
                    log2,
                }),
            );
        }
    }

    let mut r21a = ResidualStat::default();
    let mut r21b = ResidualStat::default();
    let mut r22 = ResidualStat::default();
    let mut skipped_den = 0usize;
    for iy in 0..ny {
        for ix in 0..nx {
            let Some(center) = stage1.get(ix, iy) else {
                continue;
            };
            let nu1 = *data.nu1.get(ix, iy);
            let nu2 = *data.nu2.get(ix, iy);
            let nu_diff = nu1 - nu2;
            let g1 = *data.gamma1.get(ix, iy);
            let g2 = *data.gamma2.get(ix, iy);
            if let (Some(a), Some(b)) = (stage1.get(ix + 1, iy), stage1.get(ix - 1, iy)) {
                if let (Some(la), Some(lb)) = (a.log1, b.log1) {
                    r21a.push((la - lb) / (2.0 * dx) - center.n1x / nu_diff);
                }
            }
            if let (Some(a), Some(b)) = (stage1.get(ix, iy + 1), stage1.get(ix, iy - 1)) {
                if let (Some(la), Some(lb)) = (a.log2, b.log2) {
                    r21b.push((la - lb) / (2.0 * dy) + center.n2y / nu_diff);
                }
            }
            let neighbors = (
                stage1.get(ix + 1, iy).is_some() && stage1.get(ix - 1, iy).is_some(),
                stage1.get(ix, iy + 1).is_some() && stage1.get(ix, iy - 1).is_some(),
            );
            if neighbors.0 && neighbors.1 {
                let gsq = |g: &Grid2<f64>, jx: usize, jy: usize| {
                    let v = *g.get(jx, jy);
                    v * v
                };
                let g2sq_x =
                    (gsq(&data.gamma2, ix + 1, iy) - gsq(&data.gamma2, ix - 1, iy)) / (2.0 * dx);
                let g1sq_y =
                    (gsq(&data.gamma1, ix, iy + 1) - gsq(&data.gamma1, ix, iy - 1)) / (2.0 * dy);
                if center.n2x.abs() <= DEN_FLOOR || center.n1y.abs() <= DEN_FLOOR {
                    skipped_den += 1;
                } else {
                    let r = match case {
                        SurfaceCase::TimelikeMinimal => {
                            nu_diff / 2.0 * (g2sq_x / center.n2x - g1sq_y / center.n1y)
                                + g1 * g1
                                + g2 * g2
                                - nu1 * nu2
                        }
                        SurfaceCase::SpacelikeMaximal => {
                            nu_diff / 2.0 * (g1sq_y / center.n1y + g2sq_x / center.n2x) - g1 * g1
                                + g2 * g2
                                + nu1 * nu2
                        }
                    };
                    r22.push(r);
                }
            }
        }
    }

    let mut out = vec![
        cond1.entry("bonnet_condition1", tol.for_check("bonnet_condition1")),
        r21a.entry("bonnet_condition21a", tol.for_check("bonnet_condition21a")),
        r21b.entry("bonnet_condition21b", tol.for_check("bonnet_condition21b")),
        r22.entry("bonnet_condition22", tol.for_check("bonnet_condition22")),
    ];
    if skipped_log + skipped_den > 0 {
        for e in out.iter_mut().skip(1) {
            e.detail = Some(format!(
                "{skipped_log} nodes with degenerate log arguments, {skipped_den} with degenerate denominators skipped"
            ));
        }
    }
    out
}
