//! Admissible test functions: compactly supported smooth profiles that
//! stay away from the singular set `{x' = 0}` (or the origin, or the ball
//! boundary), plus the extremizer families driving the sharpness sweeps.
//!
//! Functions are built from the closed [`Expr`] primitive set with the
//! cutoffs placed first in every product, so evaluation outside the
//! declared support short-circuits to an exact zero before any singular
//! profile factor is touched.

use crate::autodiff::{Dual, MAX_DIRS};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::identities::WeightParams;
use crate::spaces::{CylindricalSpace, GroupStructure};
use num_complex::Complex64;
use rand::Rng;

/// What the radial variable of a support window refers to.
#[derive(Clone, Debug, PartialEq)]
pub enum SupportKind {
    /// Radial variable is `|x'|`, the Euclidean norm of the first `k`
    /// coordinates; the remaining coordinates live in `xpp_box`.
    CylindricalAnnulus,
    /// Radial variable is a group's smooth gauge; `axis_bounds` is a
    /// Cartesian box containing the gauge annulus.
    GaugeAnnulus { axis_bounds: Vec<(f64, f64)> },
}

/// Support metadata consumed by the quadrature engines.
#[derive(Clone, Debug, PartialEq)]
pub struct Support {
    pub kind: SupportKind,
    pub radial_lo: f64,
    pub radial_hi: f64,
    /// Interior panel breakpoints (mollifier plateau edges and the like).
    pub radial_breaks: Vec<f64>,
    /// Box for the complementary coordinates; empty when there are none.
    pub xpp_box: Vec<(f64, f64)>,
    /// The function depends on `x'` only through `|x'|`, so angular
    /// integration can be replaced by the exact sphere area.
    pub radial_in_xprime: bool,
}

/// A smooth complex-valued function with compact-support metadata and
/// exact derivatives through dual numbers.
#[derive(Clone, Debug)]
pub struct TestFunction {
    expr: Expr,
    dim: usize,
    support: Support,
    label: String,
}

impl TestFunction {
    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn value(&self, x: &[f64]) -> Complex64 {
        debug_assert_eq!(x.len(), self.dim);
        self.expr.eval_value(x)
    }

    /// Value and the first `ndirs` partial derivatives in one pass.
    pub fn value_and_grad(&self, x: &[f64], ndirs: usize) -> (Complex64, [Complex64; MAX_DIRS]) {
        debug_assert_eq!(x.len(), self.dim);
        self.expr.value_and_grad(x, ndirs)
    }

    /// Evaluation on caller-seeded dual coordinates (dilation flows).
    pub fn eval_dual(&self, coords: &[Dual]) -> Dual {
        self.expr.eval_dual(coords)
    }

    /// The same function multiplied by a complex scalar.
    pub fn scaled(&self, lambda: Complex64) -> TestFunction {
        TestFunction {
            expr: Expr::constant(lambda) * self.expr.clone(),
            dim: self.dim,
            support: self.support.clone(),
            label: format!("{} * ({lambda})", self.label),
        }
    }
}

/// Assembles a function from explicit parts; used by crate-internal
/// families (sharpness sweep members) that manage their own supports.
pub(crate) fn assemble(expr: Expr, dim: usize, support: Support, label: String) -> TestFunction {
    TestFunction {
        expr,
        dim,
        support,
        label,
    }
}

/// Wraps a raw expression for operator-level evaluation (no meaningful
/// support metadata; not intended for integration).
pub fn from_expr(expr: Expr, dim: usize) -> TestFunction {
    TestFunction {
        expr,
        dim,
        support: Support {
            kind: SupportKind::CylindricalAnnulus,
            radial_lo: 0.0,
            radial_hi: f64::INFINITY,
            radial_breaks: vec![],
            xpp_box: vec![],
            radial_in_xprime: false,
        },
        label: "raw-expr".to_string(),
    }
}

fn xpp_bumps(space: &CylindricalSpace, half_width: f64) -> Option<Expr> {
    let mut acc: Option<Expr> = None;
    for j in space.k()..space.n() {
        let b = Expr::coord(j).bump(-half_width, half_width);
        acc = Some(match acc {
            None => b,
            Some(a) => a * b,
        });
    }
    acc
}

/// Smooth annular bump: the `exp(-1/(1-s^2))` profile in the normalized
/// radial variable over `{r0 <= |x'| <= r1}`, times a bump in each `x''`
/// coordinate over `[-half_width, half_width]`.
pub fn make_annular_bump(
    space: &CylindricalSpace,
    r0: f64,
    r1: f64,
    xpp_half_width: f64,
) -> Result<TestFunction> {
    if !(r0 > 0.0) {
        return Err(Error::invalid("r0", format!("must be positive, got {r0}")));
    }
    if !(r1 > r0) {
        return Err(Error::invalid("r1", format!("must exceed r0 = {r0}, got {r1}")));
    }
    if space.n() > space.k() && !(xpp_half_width > 0.0) {
        return Err(Error::invalid("xpp_half_width", "must be positive"));
    }
    let r = Expr::xprime_norm(space.k());
    let mut expr = r.bump(r0, r1);
    if let Some(b) = xpp_bumps(space, xpp_half_width) {
        expr = expr * b;
    }
    Ok(TestFunction {
        expr,
        dim: space.n(),
        support: Support {
            kind: SupportKind::CylindricalAnnulus,
            radial_lo: r0,
            radial_hi: r1,
            radial_breaks: vec![],
            xpp_box: vec![(-xpp_half_width, xpp_half_width); space.n() - space.k()],
            radial_in_xprime: true,
        },
        label: format!("annular-bump(r0={r0},r1={r1},w={xpp_half_width})"),
    })
}

/// Smooth bump in a group's gauge annulus `{g0 <= gauge <= g1}`.
pub fn make_gauge_bump(group: &GroupStructure, g0: f64, g1: f64) -> Result<TestFunction> {
    if !(g0 > 0.0) {
        return Err(Error::invalid("g0", format!("must be positive, got {g0}")));
    }
    if !(g1 > g0) {
        return Err(Error::invalid("g1", format!("must exceed g0 = {g0}, got {g1}")));
    }
    let expr = group.smooth_gauge_expr().bump(g0, g1);
    Ok(TestFunction {
        expr,
        dim: group.n(),
        support: Support {
            kind: SupportKind::GaugeAnnulus {
                axis_bounds: group.gauge_axis_bounds(g1),
            },
            radial_lo: g0,
            radial_hi: g1,
            radial_breaks: vec![],
            xpp_box: vec![],
            radial_in_xprime: false,
        },
        label: format!("gauge-bump(g0={g0},g1={g1})"),
    })
}

/// Extremizer family selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtremizerKind {
    /// Singular power profile `|x'|^{-(k-alpha)/p}`.
    H1,
    /// Logarithmic profile `(log R/|x'|)^{(beta+p)/p}` on `(0, R)`.
    H2,
    /// `|x'|^{-(k-alpha)/p}` times a degree-zero angular factor of the
    /// given order (order 0 recovers the radial profile).
    VanishingAngular(u32),
}

/// Upper plateau / support fractions of `R` for the h2 family, which must
/// stay away from the ball boundary where the log weight vanishes.
const H2_PLATEAU_FRAC: f64 = 0.7;
const H2_SUPPORT_FRAC: f64 = 0.8;

/// Degree-zero angular factor of order `m` on the first factor.
fn angular_factor(k: usize, m: u32) -> Expr {
    let r = Expr::xprime_norm(k);
    let m = m as i32;
    match k {
        1 => (Expr::coord(0) / r).powi(m),
        2 => {
            let z = Expr::coord(0) + Expr::i() * Expr::coord(1);
            z.powi(m) * Expr::sumsq(2).powf(-0.5 * m as f64)
        }
        _ => (Expr::coord(k - 1) / r).powi(m),
    }
}

/// Builds a mollified extremizer: the singular profile multiplied by a
/// smooth cutoff equal to 1 on the plateau `[eps, 1/eps]` (for h2:
/// `[eps, 0.7 R]`) and vanishing outside `[eps/2, 2/eps]` (h2:
/// `[eps/2, 0.8 R]`).
pub fn make_extremizer(
    space: &CylindricalSpace,
    kind: ExtremizerKind,
    params: &WeightParams,
    eps: f64,
) -> Result<TestFunction> {
    make_extremizer_with_width(space, kind, params, eps, 2.0)
}

/// As [`make_extremizer`] but with a configurable transition width factor
/// `g >= 2`: the cutoff rises over `[eps/g, eps]` and falls over
/// `[1/eps, g/eps]`. Sharpness sweeps use widths growing with
/// `log(1/eps)`; the factor is recorded in the label.
pub fn make_extremizer_with_width(
    space: &CylindricalSpace,
    kind: ExtremizerKind,
    params: &WeightParams,
    eps: f64,
    width_factor: f64,
) -> Result<TestFunction> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid("eps", format!("must be in (0,1), got {eps}")));
    }
    if !(width_factor >= 2.0) {
        return Err(Error::invalid("width_factor", "must be at least 2"));
    }
    let p = params.p;
    let k = space.k() as f64;
    let r = Expr::xprime_norm(space.k());
    match kind {
        ExtremizerKind::H1 | ExtremizerKind::VanishingAngular(_) => {
            let alpha = params.alpha;
            if alpha == k {
                return Err(Error::invalid("alpha", "alpha = k degenerates the h1 profile"));
            }
            let sigma = (k - alpha) / p;
            let lo_sup = eps / width_factor;
            let hi_plat = 1.0 / eps;
            let hi_sup = width_factor / eps;
            // cutoff transitions are smooth steps in log r, so the window
            // geometry is multiplicative and matches the reduced profile
            // quotient used by the sweeps
            let cutoff = r.clone().ln().step_up(lo_sup.ln(), eps.ln())
                * r.clone().ln().step_down(hi_plat.ln(), hi_sup.ln());
            let mut expr = cutoff * r.clone().powf(-sigma);
            let mut radial = true;
            let mut label = format!(
                "h1(p={p},alpha={alpha},eps={eps:.3e},width={width_factor:.3})"
            );
            if let ExtremizerKind::VanishingAngular(m) = kind {
                if m > 0 {
                    expr = expr * angular_factor(space.k(), m);
                    radial = false;
                }
                label = format!("vanishing(order={m}),{label}");
            }
            if space.n() > space.k() {
                expr = expr * xpp_bumps(space, 1.0).expect("n > k");
            }
            Ok(TestFunction {
                expr,
                dim: space.n(),
                support: Support {
                    kind: SupportKind::CylindricalAnnulus,
                    radial_lo: lo_sup,
                    radial_hi: hi_sup,
                    radial_breaks: vec![eps, hi_plat],
                    xpp_box: vec![(-1.0, 1.0); space.n() - space.k()],
                    radial_in_xprime: radial,
                },
                label,
            })
        }
        ExtremizerKind::H2 => {
            let beta = params.beta.ok_or_else(|| Error::invalid("beta", "required for h2"))?;
            let big_r = params.big_r.ok_or_else(|| Error::invalid("R", "required for h2"))?;
            if beta == -p {
                return Err(Error::invalid("beta", "beta = -p degenerates the h2 profile"));
            }
            let hi_plat = H2_PLATEAU_FRAC * big_r;
            let hi_sup = H2_SUPPORT_FRAC * big_r;
            if !(eps < hi_plat) {
                return Err(Error::invalid("eps", "plateau is empty: eps >= 0.7 R"));
            }
            let tau = (beta + p) / p;
            let lo_sup = eps / width_factor;
            let cutoff = r.clone().ln().step_up(lo_sup.ln(), eps.ln())
                * r.clone().ln().step_down(hi_plat.ln(), hi_sup.ln());
            let logweight = (Expr::re_const(big_r) / r).ln().powf(tau);
            let mut expr = cutoff * logweight;
            if space.n() > space.k() {
                expr = expr * xpp_bumps(space, 1.0).expect("n > k");
            }
            Ok(TestFunction {
                expr,
                dim: space.n(),
                support: Support {
                    kind: SupportKind::CylindricalAnnulus,
                    radial_lo: lo_sup,
                    radial_hi: hi_sup,
                    radial_breaks: vec![eps, hi_plat],
                    xpp_box: vec![(-1.0, 1.0); space.n() - space.k()],
                    radial_in_xprime: true,
                },
                label: format!(
                    "h2(p={p},beta={beta},R={big_r},eps={eps:.3e},width={width_factor:.3})"
                ),
            })
        }
    }
}

/// A family of mollified extremizers; members grow toward the singular
/// profile as `eps` decreases.
#[derive(Clone, Debug)]
pub struct ExtremizerFamily {
    pub kind: ExtremizerKind,
    pub space: CylindricalSpace,
    pub params: WeightParams,
    pub width_factor: f64,
}

impl ExtremizerFamily {
    pub fn new(kind: ExtremizerKind, space: CylindricalSpace, params: WeightParams) -> Self {
        ExtremizerFamily {
            kind,
            space,
            params,
            width_factor: 2.0,
        }
    }

    pub fn with_width_factor(mut self, width_factor: f64) -> Self {
        self.width_factor = width_factor;
        self
    }

    pub fn member(&self, eps: f64) -> Result<TestFunction> {
        make_extremizer_with_width(&self.space, self.kind, &self.params, eps, self.width_factor)
    }
}

/// Multiplies a function by the unimodular factor `exp(i theta)`; the
/// support is unchanged but angular reduction is disabled.
pub fn make_phase_modulated(base: &TestFunction, theta: Expr) -> TestFunction {
    let mut support = base.support.clone();
    support.radial_in_xprime = false;
    TestFunction {
        expr: base.expr.clone() * (Expr::i() * theta).exp(),
        dim: base.dim,
        support,
        label: format!("phase({})", base.label),
    }
}

/// Multiplies by a degree-zero angular factor of the given order.
pub fn with_angular(base: &TestFunction, space: &CylindricalSpace, order: u32) -> TestFunction {
    if order == 0 {
        return base.clone();
    }
    let mut support = base.support.clone();
    support.radial_in_xprime = false;
    TestFunction {
        expr: base.expr.clone() * angular_factor(space.k(), order),
        dim: base.dim,
        support,
        label: format!("angular(order={order},{})", base.label),
    }
}

/// Draws a random admissible cylindrical test function: an annular bump
/// with random window and amplitude, optionally phase-modulated and/or
/// carrying a low-order angular factor. With `outer_cap = Some(R)` the
/// support stays inside `{|x'| < 0.75 R}` for ball-domain identities.
pub fn random_cylindrical<R: Rng>(
    space: &CylindricalSpace,
    outer_cap: Option<f64>,
    rng: &mut R,
) -> TestFunction {
    let (r0, r1) = match outer_cap {
        Some(cap) => {
            let r0 = cap * rng.gen_range(0.12..0.3);
            let r1 = r0 + cap * rng.gen_range(0.2..0.42);
            (r0, r1)
        }
        None => {
            let r0 = rng.gen_range(0.4..0.9);
            (r0, r0 + rng.gen_range(0.5..1.3))
        }
    };
    let w = rng.gen_range(0.6..1.4);
    let base = make_annular_bump(space, r0, r1, w).expect("valid window");
    let amp = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        + Complex64::new(0.5, 0.25);
    let mut f = TestFunction {
        expr: Expr::constant(amp) * base.expr.clone(),
        label: format!("{} * {amp}", base.label),
        ..base
    };
    if rng.gen_bool(0.35) && space.k() >= 2 {
        f = with_angular(&f, space, rng.gen_range(1..=2));
    }
    if rng.gen_bool(0.5) {
        let mut theta = Expr::re_const(0.0);
        for j in 0..space.n() {
            theta = theta + Expr::re_const(rng.gen_range(-1.2..1.2)) * Expr::coord(j);
        }
        f = make_phase_modulated(&f, theta);
    }
    f
}

/// Random admissible function on a homogeneous group: gauge bump with
/// random annulus and amplitude, optionally phase-modulated.
pub fn random_group<R: Rng>(
    group: &GroupStructure,
    outer_cap: Option<f64>,
    rng: &mut R,
) -> TestFunction {
    let (g0, g1) = match outer_cap {
        Some(cap) => {
            let g0 = cap * rng.gen_range(0.15..0.3);
            let g1 = g0 + cap * rng.gen_range(0.2..0.4);
            (g0, g1)
        }
        None => {
            let g0 = rng.gen_range(0.4..0.8);
            (g0, g0 + rng.gen_range(0.4..1.0))
        }
    };
    let base = make_gauge_bump(group, g0, g1).expect("valid window");
    let amp = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0))
        + Complex64::new(0.5, 0.25);
    let mut expr = Expr::constant(amp) * base.expr.clone();
    let mut label = format!("{} * {amp}", base.label);
    if rng.gen_bool(0.5) {
        let mut theta = Expr::re_const(0.0);
        for j in 0..group.n() {
            theta = theta + Expr::re_const(rng.gen_range(-1.0..1.0)) * Expr::coord(j);
        }
        expr = expr * (Expr::i() * theta).exp();
        label = format!("phase({label})");
    }
    TestFunction {
        expr,
        dim: group.n(),
        support: base.support.clone(),
        label,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::WeightParams;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bump_support_boundary_and_interior() {
        let space = CylindricalSpace::new(2, 1).unwrap();
        let f = make_annular_bump(&space, 1.0, 2.0, 1.0).unwrap();
        assert_eq!(f.value(&[1.0, 0.0]).norm(), 0.0);
        assert_eq!(f.value(&[2.0, 0.3]).norm(), 0.0);
        assert!(f.value(&[1.5, 0.0]).re > 0.0);
    }

    #[test]
    fn bump_rejects_bad_windows() {
        let space = CylindricalSpace::new(2, 1).unwrap();
        assert!(make_annular_bump(&space, 0.0, 2.0, 1.0).is_err());
        assert!(make_annular_bump(&space, 2.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn zero_outside_declared_support() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let space = CylindricalSpace::new(3, 2).unwrap();
        for _ in 0..10 {
            let f = random_cylindrical(&space, None, &mut rng);
            let sup = f.support().clone();
            for _ in 0..100 {
                // radially outside
                let r = if rng.gen_bool(0.5) {
                    rng.gen_range(0.0..sup.radial_lo)
                } else {
                    sup.radial_hi * rng.gen_range(1.0..2.0)
                };
                let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                let x = [r * ang.cos(), r * ang.sin(), rng.gen_range(-3.0..3.0)];
                assert_eq!(f.value(&x).norm(), 0.0, "{}", f.label());
                // outside the x'' box
                let x2 = [
                    0.5 * (sup.radial_lo + sup.radial_hi),
                    0.0,
                    sup.xpp_box[0].1 + rng.gen_range(0.01..2.0),
                ];
                assert_eq!(f.value(&x2).norm(), 0.0);
            }
        }
    }

    #[test]
    fn h1_plateau_matches_closed_form() {
        let space = CylindricalSpace::new(3, 3).unwrap();
        let params = WeightParams::hardy(2.0, 2.0);
        let f = make_extremizer(&space, ExtremizerKind::H1, &params, 0.1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            let r: f64 = rng.gen_range(0.1..10.0);
            let u = [r, 0.0, 0.0];
            let expect = r.powf(-0.5);
            assert_relative_eq!(f.value(&u).re, expect, max_relative = 1e-12);
        }
    }

    #[test]
    fn h1_holder_equality_ratio_is_one_on_plateau() {
        let space = CylindricalSpace::new(3, 3).unwrap();
        let p = 2.0;
        let alpha = 2.0;
        let params = WeightParams::hardy(p, alpha);
        let f = make_extremizer(&space, ExtremizerKind::H1, &params, 0.1).unwrap();
        let k = 3.0;
        let x = [1.3, 0.4, -0.2];
        let r = space.xprime_norm(&x);
        let (fv, grad) = f.value_and_grad(&x, 3);
        let d: Complex64 = x.iter().zip(grad.iter()).map(|(&xj, &g)| g * xj).sum();
        let num = (p / (k - alpha)).abs().powf(p) * d.norm().powf(p) / r.powf(alpha);
        let den = fv.norm().powf(p) / r.powf(alpha);
        assert_relative_eq!(num / den, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn h2_value_at_log_one() {
        // (log R/|x'|)^{(beta+p)/p} at |x'| = R/e with beta=-1, p=2 is 1
        let space = CylindricalSpace::new(2, 2).unwrap();
        let params = WeightParams::log_weight(2.0, 0.0, -1.0, 1.0);
        let f = make_extremizer(&space, ExtremizerKind::H2, &params, 0.05).unwrap();
        let r = (1.0f64 / std::f64::consts::E).max(0.05);
        assert_relative_eq!(f.value(&[r, 0.0]).re, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn extremizer_guards_degenerate_exponents() {
        let space = CylindricalSpace::new(2, 2).unwrap();
        let params = WeightParams::hardy(2.0, 2.0); // alpha = k
        assert!(make_extremizer(&space, ExtremizerKind::H1, &params, 0.1).is_err());
        let params = WeightParams::log_weight(2.0, 0.0, -2.0, 1.0); // beta = -p
        assert!(make_extremizer(&space, ExtremizerKind::H2, &params, 0.1).is_err());
    }

    #[test]
    fn phase_modulation_preserves_modulus() {
        let space = CylindricalSpace::new(2, 2).unwrap();
        let base = make_annular_bump(&space, 1.0, 2.0, 1.0).unwrap();
        let theta = Expr::re_const(0.7) * Expr::coord(0) + Expr::re_const(-0.3) * Expr::coord(1);
        let f = make_phase_modulated(&base, theta);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let x = [rng.gen_range(-2.5..2.5), rng.gen_range(-2.5..2.5)];
            assert_relative_eq!(
                f.value(&x).norm(),
                base.value(&x).norm(),
                epsilon = 1e-14,
                max_relative = 1e-12
            );
        }
        // zero phase leaves the function unchanged
        let id = make_phase_modulated(&base, Expr::re_const(0.0));
        let x = [1.4, 0.2];
        assert_relative_eq!(id.value(&x).re, base.value(&x).re, max_relative = 1e-14);
    }

    #[test]
    fn phase_gradient_matches_product_rule() {
        let space = CylindricalSpace::new(2, 2).unwrap();
        let base = make_annular_bump(&space, 1.0, 2.0, 1.0).unwrap();
        let theta = Expr::re_const(0.9) * Expr::coord(0);
        let f = make_phase_modulated(&base, theta);
        let x = [1.5, 0.3];
        let (bv, bg) = base.value_and_grad(&x, 2);
        let (fv, fg) = f.value_and_grad(&x, 2);
        let phase = Complex64::new(0.0, 0.9 * x[0]).exp();
        assert_relative_eq!((fv - bv * phase).norm(), 0.0, epsilon = 1e-12);
        // d(f e^{i theta}) = (df + i f dtheta) e^{i theta}
        let expected0 = (bg[0] + bv * Complex64::new(0.0, 0.9)) * phase;
        assert!((fg[0] - expected0).norm() <= 1e-10);
        let expected1 = bg[1] * phase;
        assert!((fg[1] - expected1).norm() <= 1e-10);
    }

    #[test]
    fn gauge_bump_respects_axis_bounds() {
        let g = GroupStructure::heisenberg(crate::spaces::NormKind::Koranyi).unwrap();
        let f = make_gauge_bump(&g, 0.5, 1.5).unwrap();
        match &f.support().kind {
            SupportKind::GaugeAnnulus { axis_bounds } => {
                assert_eq!(axis_bounds.len(), 3);
                assert_relative_eq!(axis_bounds[0].1, 1.5);
                assert_relative_eq!(axis_bounds[2].1, 2.25);
            }
            _ => panic!("expected gauge annulus"),
        }
        assert!(f.value(&[1.0, 0.0, 0.0]).re > 0.0);
        assert_eq!(f.value(&[2.0, 0.0, 0.0]).norm(), 0.0);
    }
}
