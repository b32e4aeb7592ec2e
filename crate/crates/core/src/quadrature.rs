//! Weighted integrals over annular supports, with refinement-based error
//! estimates.
//!
//! Two engines cover every theorem:
//!
//! * [`integrate_cylindrical`]: polar reduction in the first factor,
//!   `int r^{k-1} dr int_{S^{k-1}} int_box`, with the angular factor
//!   replaced by the exact sphere area for integrands radial in `x'`.
//!   The radial direction runs in `u = log r` whenever the support stays
//!   away from `x' = 0`, which keeps power weights well conditioned.
//! * [`integrate_group`]: fully Cartesian tensor grid over the support
//!   box of a homogeneous group (no polar reduction). Axis panels split
//!   at 0 so quasi-norms with odd anisotropic exponents stay piecewise
//!   smooth on every panel.
//!
//! Singular weights are never integrated across their singularity: all
//! admissible supports keep `r_min > 0`, and sharpness sweeps approach
//! singular profiles only through mollified families.

use crate::error::{Error, Result};
use crate::spaces::{CylindricalSpace, GroupStructure};
use crate::testfns::{Support, SupportKind};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Mutex, OnceLock};

/// Quadrature scheme for the radial direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    GaussLegendre,
    TanhSinh,
}

/// Node counts and tolerances for one integration request.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Gauss nodes per radial panel (panels double on refinement).
    pub radial_nodes: usize,
    /// Azimuthal nodes; also the polar node count for `k = 3`.
    pub angular_nodes: usize,
    /// Gauss nodes per box axis panel.
    pub box_nodes: usize,
    pub scheme: Scheme,
    /// Outer radius replacing an unbounded declared support; unused when
    /// the support is compact.
    pub truncation: Option<f64>,
    pub target_rel_err: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            radial_nodes: 16,
            angular_nodes: 16,
            box_nodes: 16,
            scheme: Scheme::GaussLegendre,
            truncation: None,
            target_rel_err: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("radial_nodes", self.radial_nodes),
            ("angular_nodes", self.angular_nodes),
            ("box_nodes", self.box_nodes),
        ] {
            if v < 4 {
                return Err(Error::invalid(name, format!("node count must be >= 4, got {v}")));
            }
        }
        if !(self.target_rel_err > 0.0 && self.target_rel_err <= 1e-2) {
            return Err(Error::invalid(
                "target_rel_err",
                format!("must lie in (0, 1e-2], got {}", self.target_rel_err),
            ));
        }
        Ok(())
    }

    pub fn with_target(mut self, target: f64) -> Self {
        self.target_rel_err = target;
        self
    }
}

/// Integral value with a two-level refinement error estimate.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct IntegralResult {
    pub value: f64,
    pub err_estimate: f64,
}

/// Maximum number of refinement levels (all node counts double per level).
const MAX_LEVELS: usize = 7;
/// Hard cap on the node count of a single refinement level.
const NODE_BUDGET: usize = 40_000_000;

/// Surface area of the unit sphere `S^{k-1}`.
pub fn sphere_area(k: usize) -> f64 {
    match k {
        1 => 2.0,
        2 => 2.0 * PI,
        3 => 4.0 * PI,
        4 => 2.0 * PI * PI,
        _ => unreachable!("dimension cap"),
    }
}

fn legendre_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Tricomi-style initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

fn cached_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<Mutex<HashMap<usize, (Vec<f64>, Vec<f64>)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("legendre cache");
    guard.entry(n).or_insert_with(|| legendre_rule(n)).clone()
}

fn tanh_sinh_rule(n: usize) -> (Vec<f64>, Vec<f64>) {
    let t_max = 3.5;
    let h = 2.0 * t_max / (n.max(2) as f64 - 1.0);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        let t = -t_max + i as f64 * h;
        let u = 0.5 * PI * t.sinh();
        let x = u.tanh();
        let w = h * 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
        if w.is_finite() && w > 1e-300 {
            nodes.push(x);
            weights.push(w);
        }
    }
    (nodes, weights)
}

/// Composite 1-D rule over `panels`, each split into `2^level` subpanels
/// with `nodes` points apiece.
fn composite_1d(
    scheme: Scheme,
    panels: &[(f64, f64)],
    nodes: usize,
    level: usize,
) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = match scheme {
        Scheme::GaussLegendre => cached_legendre(nodes),
        Scheme::TanhSinh => tanh_sinh_rule(nodes),
    };
    let splits = 1usize << level;
    let mut out_x = Vec::new();
    let mut out_w = Vec::new();
    for &(a, b) in panels {
        let width = (b - a) / splits as f64;
        for s in 0..splits {
            let lo = a + s as f64 * width;
            let mid = lo + 0.5 * width;
            let half = 0.5 * width;
            for (x, w) in xs.iter().zip(&ws) {
                out_x.push(mid + half * x);
                out_w.push(half * w);
            }
        }
    }
    (out_x, out_w)
}

fn midpoint_angles(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 2.0 * PI * (i as f64 + 0.5) / n as f64)
        .collect()
}

/// Splits `[lo, hi]` at the interior breakpoints (sorted, deduplicated).
fn panels_from_breaks(lo: f64, hi: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
    let mut cuts: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&b| b > lo && b < hi)
        .collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    cuts.dedup();
    let mut panels = Vec::with_capacity(cuts.len() + 1);
    let mut prev = lo;
    for c in cuts {
        panels.push((prev, c));
        prev = c;
    }
    panels.push((prev, hi));
    panels
}

struct Kahan {
    sum: f64,
    comp: f64,
}

impl Kahan {
    fn new() -> Self {
        Kahan { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    fn add(&mut self, v: f64) {
        let y = v - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Angular node set on `S^{k-1}`: unit directions with weights summing to
/// the sphere area.
fn angular_nodes(k: usize, radial: bool, n: usize) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if radial {
        let mut dir = vec![0.0; k];
        dir[0] = 1.0;
        return Ok((vec![dir], vec![sphere_area(k)]));
    }
    match k {
        1 => Ok((vec![vec![1.0], vec![-1.0]], vec![1.0, 1.0])),
        2 => {
            let angles = midpoint_angles(n);
            let w = 2.0 * PI / n as f64;
            Ok((
                angles.iter().map(|t| vec![t.cos(), t.sin()]).collect(),
                vec![w; n],
            ))
        }
        3 => {
            let (mu, wmu) = cached_legendre(n);
            let angles = midpoint_angles(n);
            let wphi = 2.0 * PI / n as f64;
            let mut dirs = Vec::with_capacity(n * n);
            let mut ws = Vec::with_capacity(n * n);
            for (m, wm) in mu.iter().zip(&wmu) {
                let sin_t = (1.0 - m * m).sqrt();
                for phi in &angles {
                    dirs.push(vec![sin_t * phi.cos(), sin_t * phi.sin(), *m]);
                    ws.push(wm * wphi);
                }
            }
            Ok((dirs, ws))
        }
        _ => Err(Error::UnsupportedSetting(
            "product angular grids are limited to k <= 3; k = 4 requires a radial integrand"
                .to_string(),
        )),
    }
}

/// Tensor grid over a box: per-axis nodes/weights flattened by an odometer.
struct BoxGrid {
    axes: Vec<(Vec<f64>, Vec<f64>)>,
}

impl BoxGrid {
    fn new(
        boxes: &[(f64, f64)],
        nodes: usize,
        level: usize,
        split_at_zero: bool,
    ) -> Self {
        let axes = boxes
            .iter()
            .map(|&(a, b)| {
                let panels = if split_at_zero && a < 0.0 && b > 0.0 {
                    vec![(a, 0.0), (0.0, b)]
                } else {
                    vec![(a, b)]
                };
                composite_1d(Scheme::GaussLegendre, &panels, nodes, level)
            })
            .collect();
        BoxGrid { axes }
    }

    fn len(&self) -> usize {
        self.axes.iter().map(|(x, _)| x.len()).product::<usize>().max(1)
    }

    /// Invokes `f(coords, weight)` over the full tensor grid in fixed order.
    fn for_each(&self, mut f: impl FnMut(&[f64], f64)) {
        let dims = self.axes.len();
        if dims == 0 {
            f(&[], 1.0);
            return;
        }
        let mut idx = vec![0usize; dims];
        let mut coords = vec![0.0; dims];
        loop {
            let mut w = 1.0;
            for d in 0..dims {
                coords[d] = self.axes[d].0[idx[d]];
                w *= self.axes[d].1[idx[d]];
            }
            f(&coords, w);
            let mut d = dims;
            loop {
                if d == 0 {
                    return;
                }
                d -= 1;
                idx[d] += 1;
                if idx[d] < self.axes[d].0.len() {
                    break;
                }
                idx[d] = 0;
            }
        }
    }
}

fn radial_window(support: &Support, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let lo = support.radial_lo;
    let mut hi = support.radial_hi;
    if !hi.is_finite() {
        hi = spec.truncation.ok_or_else(|| {
            Error::invalid(
                "truncation",
                "support is unbounded and no truncation radius was given",
            )
        })?;
    }
    if !(hi > lo) || lo < 0.0 {
        return Err(Error::invalid(
            "support",
            format!("invalid radial window [{lo}, {hi}]"),
        ));
    }
    Ok((lo, hi))
}

fn check_finite(out: &[f64], x: &[f64]) -> Result<()> {
    if out.iter().any(|v| !v.is_finite()) {
        return Err(Error::NanIntegrand(x.to_vec()));
    }
    Ok(())
}

fn converged(curr: &[f64], errs: &[f64], target: f64) -> bool {
    let scale = curr.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    errs.iter().all(|&e| e <= target * scale)
}

fn refine<F>(target: f64, context: &'static str, mut level_sum: F) -> Result<Vec<IntegralResult>>
where
    F: FnMut(usize) -> Result<Option<Vec<f64>>>,
{
    let mut prev: Option<Vec<f64>> = None;
    let mut last_err = f64::INFINITY;
    for level in 0..=MAX_LEVELS {
        let Some(curr) = level_sum(level)? else {
            break; // budget exceeded; fall through to non-convergence
        };
        if let Some(p) = &prev {
            let errs: Vec<f64> = curr.iter().zip(p).map(|(c, q)| (c - q).abs()).collect();
            if std::env::var_os("HARDYLAB_QUAD_DEBUG").is_some() {
                eprintln!("[quad] {context} level {level}: vals {curr:?} errs {errs:?}");
            }
            if converged(&curr, &errs, target) {
                return Ok(curr
                    .iter()
                    .zip(&errs)
                    .map(|(&value, &err_estimate)| IntegralResult { value, err_estimate })
                    .collect());
            }
            last_err = errs.iter().copied().fold(0.0f64, f64::max);
        }
        prev = Some(curr);
    }
    Err(Error::NonConvergence {
        context,
        err: last_err,
        target,
    })
}

/// Multi-channel cylindrical integral `int_{R^n} integrand dx` over an
/// annular support in `|x'|` times a box in `x''`.
pub fn integrate_cylindrical_channels(
    space: &CylindricalSpace,
    integrand: &dyn Fn(&[f64], &mut [f64]),
    support: &Support,
    spec: &QuadratureSpec,
    nchan: usize,
) -> Result<Vec<IntegralResult>> {
    spec.validate()?;
    if !matches!(support.kind, SupportKind::CylindricalAnnulus) {
        return Err(Error::UnsupportedSetting(
            "cylindrical engine requires an annular support in |x'|".to_string(),
        ));
    }
    if support.xpp_box.len() != space.n() - space.k() {
        return Err(Error::DimensionMismatch {
            expected: space.n() - space.k(),
            got: support.xpp_box.len(),
        });
    }
    let (lo, hi) = radial_window(support, spec)?;
    let k = space.k();
    let log_radial = lo > 0.0;
    let radial_panels = if log_radial {
        let breaks: Vec<f64> = support.radial_breaks.iter().map(|b| b.ln()).collect();
        panels_from_breaks(lo.ln(), hi.ln(), &breaks)
    } else {
        panels_from_breaks(lo, hi, &support.radial_breaks)
    };

    refine(spec.target_rel_err, "cylindrical integral", |level| {
        let (ru, rw) = composite_1d(spec.scheme, &radial_panels, spec.radial_nodes, level);
        let (dirs, dws) = angular_nodes(k, support.radial_in_xprime, spec.angular_nodes << level)?;
        let boxes = BoxGrid::new(&support.xpp_box, spec.box_nodes, level, false);
        let total = ru.len() * dirs.len() * boxes.len();
        if total > NODE_BUDGET {
            return Ok(None);
        }
        let mut acc: Vec<Kahan> = (0..nchan).map(|_| Kahan::new()).collect();
        let mut x = vec![0.0; space.n()];
        let mut out = vec![0.0; nchan];
        let mut failure: Option<Error> = None;
        for (u, wu) in ru.iter().zip(&rw) {
            let (r, wr) = if log_radial {
                let r = u.exp();
                (r, wu * r.powi(k as i32))
            } else {
                (*u, wu * u.powi(k as i32 - 1))
            };
            for (dir, wd) in dirs.iter().zip(&dws) {
                for (j, d) in dir.iter().enumerate() {
                    x[j] = r * d;
                }
                let w_rd = wr * wd;
                boxes.for_each(|bx, wb| {
                    if failure.is_some() {
                        return;
                    }
                    x[k..].copy_from_slice(bx);
                    integrand(&x, &mut out);
                    if let Err(e) = check_finite(&out, &x) {
                        failure = Some(e);
                        return;
                    }
                    let w = w_rd * wb;
                    for (a, v) in acc.iter_mut().zip(&out) {
                        a.add(v * w);
                    }
                });
                if let Some(e) = failure.take() {
                    return Err(e);
                }
            }
        }
        Ok(Some(acc.into_iter().map(|a| a.sum).collect()))
    })
}

/// Scalar wrapper over [`integrate_cylindrical_channels`].
pub fn integrate_cylindrical(
    space: &CylindricalSpace,
    integrand: &dyn Fn(&[f64]) -> f64,
    support: &Support,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    let res = integrate_cylindrical_channels(
        space,
        &|x, out| out[0] = integrand(x),
        support,
        spec,
        1,
    )?;
    Ok(res[0])
}

/// Cartesian box of a group-side support.
fn group_box(group: &GroupStructure, support: &Support) -> Result<Vec<(f64, f64)>> {
    match &support.kind {
        SupportKind::GaugeAnnulus { axis_bounds } => {
            if axis_bounds.len() != group.n() {
                return Err(Error::DimensionMismatch {
                    expected: group.n(),
                    got: axis_bounds.len(),
                });
            }
            Ok(axis_bounds.clone())
        }
        SupportKind::CylindricalAnnulus => {
            // Only meaningful when the annulus is a full Euclidean annulus
            // (k = n), in which case |x_i| <= radial_hi.
            if !support.xpp_box.is_empty() {
                return Err(Error::UnsupportedSetting(
                    "group engine needs a gauge annulus or a full Euclidean annulus".to_string(),
                ));
            }
            let hi = support.radial_hi;
            if !hi.is_finite() {
                return Err(Error::invalid("support", "unbounded support on a group"));
            }
            Ok(vec![(-hi, hi); group.n()])
        }
    }
}

/// Multi-channel Haar integral over a homogeneous group: a fully
/// Cartesian tensor grid over the support box.
pub fn integrate_group_channels(
    group: &GroupStructure,
    integrand: &dyn Fn(&[f64], &mut [f64]),
    support: &Support,
    spec: &QuadratureSpec,
    nchan: usize,
) -> Result<Vec<IntegralResult>> {
    spec.validate()?;
    let bounds = group_box(group, support)?;
    refine(spec.target_rel_err, "group integral", |level| {
        let grid = BoxGrid::new(&bounds, spec.box_nodes, level, true);
        if grid.len() > NODE_BUDGET {
            return Ok(None);
        }
        let mut acc: Vec<Kahan> = (0..nchan).map(|_| Kahan::new()).collect();
        let mut out = vec![0.0; nchan];
        let mut failure: Option<Error> = None;
        grid.for_each(|x, w| {
            if failure.is_some() {
                return;
            }
            integrand(x, &mut out);
            if let Err(e) = check_finite(&out, x) {
                failure = Some(e);
                return;
            }
            for (a, v) in acc.iter_mut().zip(&out) {
                a.add(v * w);
            }
        });
        if let Some(e) = failure.take() {
            return Err(e);
        }
        Ok(Some(acc.into_iter().map(|a| a.sum).collect()))
    })
}

/// Scalar wrapper over [`integrate_group_channels`].
pub fn integrate_group(
    group: &GroupStructure,
    integrand: &dyn Fn(&[f64]) -> f64,
    support: &Support,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    let res =
        integrate_group_channels(group, &|x, out| out[0] = integrand(x), support, spec, 1)?;
    Ok(res[0])
}
