//! The `C_p` remainder functional and the weighted-identity evaluators.
//!
//! Every identity here has the shape
//!
//! ```text
//! constant * ||f w1||_p^p  =  ||D f w2||_p^p  -  middle  -  factor * int C_p(xi, eta)
//! ```
//!
//! with `D` the directial derivative of the setting (`x'.grad_k`,
//! `x'.grad_H`, or the radial derivative along dilations), `w1, w2` the
//! singular weights, and `C_p(xi, eta) = |xi|^p - |xi-eta|^p -
//! p |xi-eta|^{p-2} Re((xi-eta) conj(eta)) >= 0`. Evaluators integrate all
//! channels in a single quadrature pass and report the residual of the
//! identity together with the quadrature error estimate.

use crate::error::{Error, Result};
use crate::quadrature::{
    integrate_cylindrical_channels, integrate_group_channels, IntegralResult, QuadratureSpec,
};
use crate::spaces::{CylindricalSpace, GroupStructure};
use crate::testfns::{self, ExtremizerKind, TestFunction};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The exponent record shared by every theorem. Fields that a given
/// identity does not use stay `None`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub p: f64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    /// Ball radius of the logarithmic identities.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub big_r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
}

impl WeightParams {
    pub fn hardy(p: f64, alpha: f64) -> Self {
        WeightParams {
            p,
            alpha,
            q: None,
            r: None,
            beta: None,
            big_r: None,
            b: None,
            c: None,
            delta: None,
        }
    }

    pub fn log_weight(p: f64, alpha: f64, beta: f64, big_r: f64) -> Self {
        WeightParams {
            beta: Some(beta),
            big_r: Some(big_r),
            ..Self::hardy(p, alpha)
        }
    }

    /// CKN parameters; `r` and `c` are derived from the two equality
    /// constraints `delta r / p + (1 - delta) r / q = 1` and
    /// `c = -delta + b (1 - delta)`.
    pub fn ckn(p: f64, q: f64, delta: f64, b: f64, alpha: f64) -> Self {
        let r = 1.0 / (delta / p + (1.0 - delta) / q);
        WeightParams {
            q: Some(q),
            r: Some(r),
            b: Some(b),
            c: Some(-delta + b * (1.0 - delta)),
            delta: Some(delta),
            ..Self::hardy(p, alpha)
        }
    }

    pub fn validate_base(&self) -> Result<()> {
        if !(self.p > 1.0) {
            return Err(Error::invalid("p", format!("must exceed 1, got {}", self.p)));
        }
        if !self.p.is_finite() || !self.alpha.is_finite() {
            return Err(Error::invalid("params", "non-finite exponent"));
        }
        Ok(())
    }

    pub fn validate_log(&self) -> Result<(f64, f64)> {
        self.validate_base()?;
        let beta = self
            .beta
            .ok_or_else(|| Error::invalid("beta", "required for logarithmic weights"))?;
        let big_r = self
            .big_r
            .ok_or_else(|| Error::invalid("R", "required for logarithmic weights"))?;
        if !(big_r > 0.0) {
            return Err(Error::invalid("R", format!("must be positive, got {big_r}")));
        }
        Ok((beta, big_r))
    }

    /// Sign condition of the logarithmic *inequality* (identity mode does
    /// not need it): `(d - alpha - p)(beta + p) >= 0` with `d` the
    /// effective dimension (`k`, `N`, or `Q`).
    pub fn log_inequality_admissible(&self, dim_eff: f64) -> bool {
        match self.beta {
            Some(beta) => (dim_eff - self.alpha - self.p) * (beta + self.p) >= 0.0,
            None => false,
        }
    }
}

/// Arguments of the remainder functional.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CpArguments {
    pub xi: Complex64,
    pub eta: Complex64,
}

/// `C_p(xi, eta) = |xi|^p - |xi-eta|^p - p |xi-eta|^{p-2} Re((xi-eta) conj(eta))`.
///
/// The factor `|xi-eta|^{p-2} (xi-eta)` is extended by 0 at `xi = eta` for
/// every `p > 1` (the product extends continuously).
#[inline]
pub fn cp_value(p: f64, xi: Complex64, eta: Complex64) -> f64 {
    let diff = xi - eta;
    let d2 = diff.norm_sqr();
    let mut v = xi.norm_sqr().powf(0.5 * p) - d2.powf(0.5 * p);
    if d2 > 0.0 {
        let re = diff.re * eta.re + diff.im * eta.im;
        if re != 0.0 {
            v -= p * d2.powf(0.5 * p - 1.0) * re;
        }
    }
    v
}

/// [`cp_value`] over a [`CpArguments`] record.
pub fn cp(p: f64, args: &CpArguments) -> f64 {
    cp_value(p, args.xi, args.eta)
}

/// Which coefficient multiplies the `C_p` integral in the logarithmic
/// group identities; the two candidate readings are adjudicated
/// numerically, never chosen silently.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CpFactorMode {
    One,
    P,
}

impl CpFactorMode {
    pub fn factor(self, p: f64) -> f64 {
        match self {
            CpFactorMode::One => 1.0,
            CpFactorMode::P => p,
        }
    }
}

/// Which group identity form applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupIdentityForm {
    /// Radial derivative with a homogeneous quasi-norm.
    Radial,
    /// First-stratum horizontal form on a stratified group.
    Horizontal,
}

/// One evaluated identity: each side, the remainder, and the residual.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub setting: String,
    pub function_label: String,
    /// `constant * ||f w1||_p^p`.
    pub lhs: f64,
    pub gradient_term: f64,
    /// Logarithmic identities only; zero otherwise.
    pub middle_term: f64,
    /// The subtracted remainder, `factor * int C_p`.
    pub cp_term: f64,
    pub cp_factor: f64,
    pub residual: f64,
    pub rel_residual: f64,
    /// Absolute quadrature error estimate, summed over the channels.
    pub quadrature_err: f64,
    /// Quadrature error relative to `max(|lhs|, |gradient_term|)`.
    pub rel_quadrature_err: f64,
    pub params_echo: WeightParams,
}

const DENOM_FLOOR: f64 = 1e-300;

fn assemble_report(
    setting: &str,
    f: &TestFunction,
    params: &WeightParams,
    lhs_constant: f64,
    middle_coeff: f64,
    cp_factor: f64,
    integrals: &[IntegralResult],
) -> IdentityReport {
    let lhs = lhs_constant * integrals[0].value;
    let gradient_term = integrals[1].value;
    let middle_term = middle_coeff * integrals[2].value;
    let cp_term = cp_factor * integrals[3].value;
    let residual = lhs - (gradient_term - middle_term - cp_term);
    let denom = lhs.abs().max(gradient_term.abs()).max(DENOM_FLOOR);
    let quadrature_err = lhs_constant.abs() * integrals[0].err_estimate
        + integrals[1].err_estimate
        + middle_coeff.abs() * integrals[2].err_estimate
        + cp_factor * integrals[3].err_estimate;
    IdentityReport {
        setting: setting.to_string(),
        function_label: f.label().to_string(),
        lhs,
        gradient_term,
        middle_term,
        cp_term,
        cp_factor,
        residual,
        rel_residual: residual.abs() / denom,
        quadrature_err,
        rel_quadrature_err: quadrature_err / denom,
        params_echo: *params,
    }
}

#[inline]
fn abs_pow(z: Complex64, p: f64) -> f64 {
    z.norm_sqr().powf(0.5 * p)
}

#[inline]
fn is_zero_germ(fv: Complex64, grad: &[Complex64]) -> bool {
    fv == Complex64::new(0.0, 0.0) && grad.iter().all(|g| *g == Complex64::new(0.0, 0.0))
}

fn require_away_from_singular_set(f: &TestFunction) -> Result<()> {
    if !(f.support().radial_lo > 0.0) {
        return Err(Error::Inadmissible(
            "support must stay away from the singular set (radial_lo > 0)".to_string(),
        ));
    }
    Ok(())
}

/// Weighted Hardy identity on `R^k x R^{n-k}`:
/// `|(k-a)/p|^p ||f / |x'|^{a/p}||_p^p = ||x'.grad_k f / |x'|^{a/p}||_p^p - int C_p`.
pub fn evaluate_hardy_cylindrical(
    space: &CylindricalSpace,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    params.validate_base()?;
    require_away_from_singular_set(f)?;
    if f.dim() != space.n() {
        return Err(Error::DimensionMismatch {
            expected: space.n(),
            got: f.dim(),
        });
    }
    let k = space.k();
    let p = params.p;
    let alpha = params.alpha;
    let cst = (k as f64 - alpha) / p;
    let integrand = |x: &[f64], out: &mut [f64]| {
        let (fv, grad) = f.value_and_grad(x, k);
        if is_zero_germ(fv, &grad[..k]) {
            out.fill(0.0);
            return;
        }
        let r = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = r.powf(-alpha / p);
        let d: Complex64 = x[..k]
            .iter()
            .zip(grad.iter())
            .map(|(&xj, &gj)| gj * xj)
            .sum();
        let xi = d * w;
        let eta = xi + fv * (w * cst);
        out[0] = abs_pow(fv, p) * w.powf(p);
        out[1] = abs_pow(xi, p);
        out[2] = 0.0;
        out[3] = cp_value(p, xi, eta);
    };
    let integrals = integrate_cylindrical_channels(space, &integrand, f.support(), spec, 4)?;
    Ok(assemble_report(
        "cylindrical",
        f,
        params,
        cst.abs().powf(p),
        0.0,
        1.0,
        &integrals,
    ))
}

/// Hardy identity on a step-2 stratified group with the horizontal
/// gradient: `k` is replaced by the first-stratum dimension `N` and
/// `x'.grad_k` by `x'.grad_H`.
pub fn evaluate_hardy_stratified(
    group: &GroupStructure,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    params.validate_base()?;
    require_away_from_singular_set(f)?;
    let data = group
        .stratified_data()
        .ok_or(Error::MissingStratifiedData)?;
    let nfirst = data.first_stratum;
    let space = CylindricalSpace::new(group.n(), nfirst)?;
    let p = params.p;
    let alpha = params.alpha;
    let cst = (nfirst as f64 - alpha) / p;
    let integrand = |x: &[f64], out: &mut [f64]| {
        let (fv, grad) = f.value_and_grad(x, group.n());
        if is_zero_germ(fv, &grad[..group.n()]) {
            out.fill(0.0);
            return;
        }
        let r = x[..nfirst].iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = r.powf(-alpha / p);
        let hgrad = group.horizontal_from_full(data, x, &grad);
        let d: Complex64 = x[..nfirst]
            .iter()
            .zip(hgrad.iter())
            .map(|(&xj, &gj)| gj * xj)
            .sum();
        let xi = d * w;
        let eta = xi + fv * (w * cst);
        out[0] = abs_pow(fv, p) * w.powf(p);
        out[1] = abs_pow(xi, p);
        out[2] = 0.0;
        out[3] = cp_value(p, xi, eta);
    };
    let integrals = integrate_cylindrical_channels(&space, &integrand, f.support(), spec, 4)?;
    Ok(assemble_report(
        "stratified",
        f,
        params,
        cst.abs().powf(p),
        0.0,
        1.0,
        &integrals,
    ))
}

/// Hardy identity on a homogeneous group for the radial derivative with
/// any registered quasi-norm:
/// `|(Q-a)/p|^p ||f / |x|^{a/p}||_p^p = ||R f / |x|^{a/p-1}||_p^p - int C_p`.
pub fn evaluate_hardy_homogeneous(
    group: &GroupStructure,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    params.validate_base()?;
    require_away_from_singular_set(f)?;
    let p = params.p;
    let alpha = params.alpha;
    let q_dim = group.homogeneous_dim();
    let cst = (q_dim - alpha) / p;
    let integrand = |x: &[f64], out: &mut [f64]| {
        let r = group.quasi_norm(x).expect("dimension checked");
        if r == 0.0 {
            out.fill(0.0);
            return;
        }
        let mut y = [0.0f64; crate::autodiff::MAX_DIRS];
        let inv = 1.0 / r;
        for (i, (&xi, &w)) in x.iter().zip(group.weights()).enumerate() {
            y[i] = xi * inv.powf(w);
        }
        let flow = {
            let s = crate::autodiff::Dual::seeded(r, 0);
            let mut coords = [crate::autodiff::Dual::zero(); crate::autodiff::MAX_DIRS];
            for i in 0..group.n() {
                coords[i] = s.powf(group.weights()[i]).scale(y[i]);
            }
            f.eval_dual(&coords[..group.n()])
        };
        let fv = flow.val;
        let df = flow.dot[0];
        if fv == Complex64::new(0.0, 0.0) && df == Complex64::new(0.0, 0.0) {
            out.fill(0.0);
            return;
        }
        let w1 = r.powf(-alpha / p);
        let xi = df * r.powf(1.0 - alpha / p);
        let eta = xi + fv * (w1 * cst);
        out[0] = abs_pow(fv, p) * w1.powf(p);
        out[1] = abs_pow(xi, p);
        out[2] = 0.0;
        out[3] = cp_value(p, xi, eta);
    };
    let integrals = integrate_group_channels(group, &integrand, f.support(), spec, 4)?;
    Ok(assemble_report(
        "homogeneous",
        f,
        params,
        cst.abs().powf(p),
        0.0,
        1.0,
        &integrals,
    ))
}

fn require_inside_ball(f: &TestFunction, big_r: f64) -> Result<()> {
    if !(f.support().radial_hi < big_r) {
        return Err(Error::Inadmissible(format!(
            "support must stay strictly inside the ball of radius {big_r} (the log weight vanishes on the boundary); got outer radius {}",
            f.support().radial_hi
        )));
    }
    Ok(())
}

/// Logarithmic-weight Hardy identity on `{0 < |x'| < R}`:
///
/// `|(b+p)/p|^p ||f w1||_p^p = ||x'.grad_k f w2||_p^p - middle - int C_p`,
/// with `w1 = |x'|^{-(a+p)/p} (log R/|x'|)^{-(b+p+1)/p}`,
/// `w2 = |x'|^{-(a+p)/p} (log R/|x'|)^{-(b+1)/p}` and
/// `middle = (k-a-p) ((b+p)/p) |(b+p)/p|^{p-2} int |f|^p w3`.
pub fn evaluate_log_hardy_cylindrical(
    space: &CylindricalSpace,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    let (beta, big_r) = params.validate_log()?;
    require_away_from_singular_set(f)?;
    require_inside_ball(f, big_r)?;
    let k = space.k();
    let p = params.p;
    let alpha = params.alpha;
    let tau = (beta + p) / p;
    let middle_coeff = (k as f64 - alpha - p) * tau * tau.abs().powf(p - 2.0);
    let integrand = |x: &[f64], out: &mut [f64]| {
        let (fv, grad) = f.value_and_grad(x, k);
        if is_zero_germ(fv, &grad[..k]) {
            out.fill(0.0);
            return;
        }
        let r = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let ell = (big_r / r).ln();
        let w_pow = r.powf(-(alpha + p) / p);
        let w1 = w_pow * ell.powf(-(beta + p + 1.0) / p);
        let w2 = w_pow * ell.powf(-(beta + 1.0) / p);
        let d: Complex64 = x[..k]
            .iter()
            .zip(grad.iter())
            .map(|(&xj, &gj)| gj * xj)
            .sum();
        let xi = d * w2;
        let eta = xi + fv * (w1 * tau);
        out[0] = abs_pow(fv * w1, p);
        out[1] = abs_pow(xi, p);
        out[2] = abs_pow(fv, p) * r.powf(-(alpha + p)) * ell.powf(-(beta + p));
        out[3] = cp_value(p, xi, eta);
    };
    let integrals = integrate_cylindrical_channels(space, &integrand, f.support(), spec, 4)?;
    Ok(assemble_report(
        "log-cylindrical",
        f,
        params,
        tau.abs().powf(p),
        middle_coeff,
        1.0,
        &integrals,
    ))
}

/// Logarithmic-weight identity on a group, in either the radial form
/// (quasi-ball, radial derivative) or the horizontal form (first-stratum
/// ball, horizontal gradient). `mode` selects the coefficient of the
/// `C_p` integral; see [`CpFactorMode`].
pub fn evaluate_log_hardy_group(
    group: &GroupStructure,
    form: GroupIdentityForm,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
    mode: CpFactorMode,
) -> Result<IdentityReport> {
    let (beta, big_r) = params.validate_log()?;
    require_away_from_singular_set(f)?;
    require_inside_ball(f, big_r)?;
    let p = params.p;
    let alpha = params.alpha;
    let tau = (beta + p) / p;
    let factor = mode.factor(p);
    match form {
        GroupIdentityForm::Radial => {
            if !group.gauge_is_norm() {
                return Err(Error::UnsupportedSetting(
                    "log-weight ball domains need a norm that is smooth away from the origin \
                     (euclidean or koranyi) so supports can be certified inside the ball"
                        .to_string(),
                ));
            }
            let q_dim = group.homogeneous_dim();
            let middle_coeff = (q_dim - alpha - p) * tau * tau.abs().powf(p - 2.0);
            let integrand = |x: &[f64], out: &mut [f64]| {
                let r = group.quasi_norm(x).expect("dimension checked");
                if r == 0.0 || r >= big_r {
                    out.fill(0.0);
                    return;
                }
                let mut y = [0.0f64; crate::autodiff::MAX_DIRS];
                let inv = 1.0 / r;
                for (i, (&xi, &w)) in x.iter().zip(group.weights()).enumerate() {
                    y[i] = xi * inv.powf(w);
                }
                let flow = {
                    let s = crate::autodiff::Dual::seeded(r, 0);
                    let mut coords = [crate::autodiff::Dual::zero(); crate::autodiff::MAX_DIRS];
                    for i in 0..group.n() {
                        coords[i] = s.powf(group.weights()[i]).scale(y[i]);
                    }
                    f.eval_dual(&coords[..group.n()])
                };
                let fv = flow.val;
                let df = flow.dot[0];
                if fv == Complex64::new(0.0, 0.0) && df == Complex64::new(0.0, 0.0) {
                    out.fill(0.0);
                    return;
                }
                let ell = (big_r / r).ln();
                let w1 = r.powf(-(alpha + p) / p) * ell.powf(-(beta + p + 1.0) / p);
                let w2 = r.powf(-alpha / p) * ell.powf(-(beta + 1.0) / p);
                let xi = df * w2;
                let eta = xi + fv * (w1 * tau);
                out[0] = abs_pow(fv * w1, p);
                out[1] = abs_pow(xi, p);
                out[2] = abs_pow(fv, p) * r.powf(-(alpha + p)) * ell.powf(-(beta + p));
                out[3] = cp_value(p, xi, eta);
            };
            let integrals = integrate_group_channels(group, &integrand, f.support(), spec, 4)?;
            Ok(assemble_report(
                "log-homogeneous",
                f,
                params,
                tau.abs().powf(p),
                middle_coeff,
                factor,
                &integrals,
            ))
        }
        GroupIdentityForm::Horizontal => {
            let data = group
                .stratified_data()
                .ok_or(Error::MissingStratifiedData)?;
            let nfirst = data.first_stratum;
            let space = CylindricalSpace::new(group.n(), nfirst)?;
            let middle_coeff = (nfirst as f64 - alpha - p) * tau * tau.abs().powf(p - 2.0);
            let integrand = |x: &[f64], out: &mut [f64]| {
                let (fv, grad) = f.value_and_grad(x, group.n());
                if is_zero_germ(fv, &grad[..group.n()]) {
                    out.fill(0.0);
                    return;
                }
                let r = x[..nfirst].iter().map(|v| v * v).sum::<f64>().sqrt();
                let ell = (big_r / r).ln();
                let w_pow = r.powf(-(alpha + p) / p);
                let w1 = w_pow * ell.powf(-(beta + p + 1.0) / p);
                let w2 = w_pow * ell.powf(-(beta + 1.0) / p);
                let hgrad = group.horizontal_from_full(data, x, &grad);
                let d: Complex64 = x[..nfirst]
                    .iter()
                    .zip(hgrad.iter())
                    .map(|(&xj, &gj)| gj * xj)
                    .sum();
                let xi = d * w2;
                let eta = xi + fv * (w1 * tau);
                out[0] = abs_pow(fv * w1, p);
                out[1] = abs_pow(xi, p);
                out[2] = abs_pow(fv, p) * r.powf(-(alpha + p)) * ell.powf(-(beta + p));
                out[3] = cp_value(p, xi, eta);
            };
            let integrals =
                integrate_cylindrical_channels(&space, &integrand, f.support(), spec, 4)?;
            Ok(assemble_report(
                "log-stratified",
                f,
                params,
                tau.abs().powf(p),
                middle_coeff,
                factor,
                &integrals,
            ))
        }
    }
}

/// Angular component of the vanishing family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AngularChoice {
    /// The zero function (trivial member).
    Zero,
    /// Degree-zero angular factor of the given order.
    Order(u32),
}

/// One step of the vanishing-family evidence.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingStep {
    pub eps: f64,
    /// Full weighted norm `|(k-a)/p|^p ||f/|x'|^{a/p}||_p^p`.
    pub lhs: f64,
    /// `C_p` mass restricted to the mollifier plateau.
    pub plateau_cp: f64,
    /// Gradient term restricted to the plateau.
    pub plateau_gradient: f64,
}

/// Numerical evidence for the vanishing characterization: on the plateau
/// the family `f = |x'|^{-(k-a)/p} phi` kills the remainder pointwise,
/// while the weighted norm grows without bound as the plateau widens.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingFamilyReport {
    pub steps: Vec<VanishingStep>,
    pub cp_negligible: bool,
    pub lhs_strictly_increasing: bool,
}

pub fn vanishing_family_check(
    space: &CylindricalSpace,
    params: &WeightParams,
    phi: AngularChoice,
    eps_sequence: &[f64],
    spec: &QuadratureSpec,
) -> Result<VanishingFamilyReport> {
    params.validate_base()?;
    if params.p < 2.0 {
        return Err(Error::invalid("p", "vanishing characterization requires p >= 2"));
    }
    if params.alpha == space.k() as f64 {
        return Err(Error::invalid("alpha", "alpha = k degenerates the family"));
    }
    if eps_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::invalid("eps_sequence", "must be strictly decreasing"));
    }
    let mut steps = Vec::with_capacity(eps_sequence.len());
    for &eps in eps_sequence {
        let step = match phi {
            AngularChoice::Zero => VanishingStep {
                eps,
                lhs: 0.0,
                plateau_cp: 0.0,
                plateau_gradient: 0.0,
            },
            AngularChoice::Order(m) => {
                let f = testfns::make_extremizer(
                    space,
                    ExtremizerKind::VanishingAngular(m),
                    params,
                    eps,
                )?;
                let full = evaluate_hardy_cylindrical(space, params, &f, spec)?;
                // Restrict integration to the plateau window.
                let mut plateau_support = f.support().clone();
                plateau_support.radial_lo = eps;
                plateau_support.radial_hi = 1.0 / eps;
                plateau_support.radial_breaks = vec![];
                let p = params.p;
                let alpha = params.alpha;
                let k = space.k();
                let cst = (k as f64 - alpha) / p;
                let integrand = |x: &[f64], out: &mut [f64]| {
                    let (fv, grad) = f.value_and_grad(x, k);
                    if is_zero_germ(fv, &grad[..k]) {
                        out.fill(0.0);
                        return;
                    }
                    let r = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
                    let w = r.powf(-alpha / p);
                    let d: Complex64 = x[..k]
                        .iter()
                        .zip(grad.iter())
                        .map(|(&xj, &gj)| gj * xj)
                        .sum();
                    let xi = d * w;
                    let eta = xi + fv * (w * cst);
                    out[0] = cp_value(p, xi, eta);
                    out[1] = abs_pow(xi, p);
                };
                let plateau = integrate_cylindrical_channels(
                    space,
                    &integrand,
                    &plateau_support,
                    spec,
                    2,
                )?;
                VanishingStep {
                    eps,
                    lhs: full.lhs,
                    plateau_cp: plateau[0].value,
                    plateau_gradient: plateau[1].value,
                }
            }
        };
        steps.push(step);
    }
    let cp_negligible = steps
        .iter()
        .all(|s| s.plateau_cp.abs() <= 1e-8 * s.plateau_gradient.max(1e-300));
    let lhs_strictly_increasing = match phi {
        AngularChoice::Zero => false,
        AngularChoice::Order(_) => steps.windows(2).all(|w| w[1].lhs > w[0].lhs),
    };
    Ok(VanishingFamilyReport {
        steps,
        cp_negligible,
        lhs_strictly_increasing,
    })
}

/// `|(d - alpha)/p|^p`, the sharp Hardy constant of effective dimension `d`.
pub fn hardy_constant(dim_eff: f64, p: f64, alpha: f64) -> f64 {
    ((dim_eff - alpha) / p).abs().powf(p)
}

/// `|(beta + p)/p|^p`, the sharp constant of the logarithmic identities.
pub fn log_constant(p: f64, beta: f64) -> f64 {
    ((beta + p) / p).abs().powf(p)
}
