//! Caffarelli-Kohn-Nirenberg inequalities with remainder, and the
//! cylindrical Heisenberg-Pauli-Weyl uncertainty corollary.
//!
//! The CKN right-hand side interpolates between the gradient bracket
//! (the Hardy identity's right side, power `delta/p`) and a weighted
//! `q`-norm (power `1 - delta`); the left side is a weighted `r`-norm.
//! Slack is reported signed so that violations beyond quadrature error
//! are visible, not clipped.

use crate::error::{Error, Result};
use crate::identities::{cp_value, WeightParams};
use crate::quadrature::{
    integrate_cylindrical_channels, integrate_group_channels, IntegralResult, QuadratureSpec,
};
use crate::spaces::{CylindricalSpace, GroupStructure};
use crate::testfns::TestFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Outcome of CKN parameter validation; inadmissible parameters name the
/// violated constraint instead of erroring.
#[derive(Clone, Debug, Serialize)]
pub struct CknAdmissibility {
    pub admissible: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violation: Option<String>,
}

impl CknAdmissibility {
    fn pass() -> Self {
        CknAdmissibility {
            admissible: true,
            violation: None,
        }
    }

    fn fail(reason: impl Into<String>) -> Self {
        CknAdmissibility {
            admissible: false,
            violation: Some(reason.into()),
        }
    }
}

const EQ_TOL: f64 = 1e-12;

/// Checks the CKN parameter constraints: `p, q > 1`, `r > 0` (we also
/// require `r >= 1` for the norm comparisons used in reports), `p+q >= r`,
/// `delta` in `[0,1]` intersected with `[(r-q)/r, p/r]`, and the two
/// equality constraints `delta r/p + (1-delta) r/q = 1`,
/// `c = -delta + b(1-delta)` to 1e-12.
pub fn validate_ckn_params(params: &WeightParams, _dim_eff: f64) -> CknAdmissibility {
    let p = params.p;
    if !(p > 1.0) {
        return CknAdmissibility::fail(format!("p must exceed 1, got {p}"));
    }
    let Some(q) = params.q else {
        return CknAdmissibility::fail("q is required");
    };
    if !(q > 1.0) {
        return CknAdmissibility::fail(format!("q must exceed 1, got {q}"));
    }
    let Some(r) = params.r else {
        return CknAdmissibility::fail("r is required");
    };
    if !(r > 0.0) {
        return CknAdmissibility::fail(format!("r must be positive, got {r}"));
    }
    if r < 1.0 {
        return CknAdmissibility::fail(format!(
            "r = {r} < 1 is excluded (norm comparisons in reports need r >= 1)"
        ));
    }
    if p + q < r {
        return CknAdmissibility::fail(format!("p + q >= r fails: {p} + {q} < {r}"));
    }
    let Some(delta) = params.delta else {
        return CknAdmissibility::fail("delta is required");
    };
    if !(0.0..=1.0).contains(&delta) {
        return CknAdmissibility::fail(format!("delta must lie in [0,1], got {delta}"));
    }
    let lo = (r - q) / r;
    let hi = p / r;
    if delta < lo - EQ_TOL || delta > hi + EQ_TOL {
        return CknAdmissibility::fail(format!(
            "delta = {delta} outside [(r-q)/r, p/r] = [{lo}, {hi}]"
        ));
    }
    let balance = delta * r / p + (1.0 - delta) * r / q;
    if (balance - 1.0).abs() > EQ_TOL {
        return CknAdmissibility::fail(format!(
            "delta r/p + (1-delta) r/q = {balance} differs from 1 beyond 1e-12"
        ));
    }
    let Some(b) = params.b else {
        return CknAdmissibility::fail("b is required");
    };
    let Some(c) = params.c else {
        return CknAdmissibility::fail("c is required");
    };
    let c_expect = -delta + b * (1.0 - delta);
    if (c - c_expect).abs() > EQ_TOL {
        return CknAdmissibility::fail(format!(
            "c = {c} differs from -delta + b(1-delta) = {c_expect} beyond 1e-12"
        ));
    }
    CknAdmissibility::pass()
}

/// Both sides of a CKN inequality with remainder, plus the slack.
#[derive(Clone, Debug, Serialize)]
pub struct CknReport {
    pub setting: String,
    pub function_label: String,
    /// `|(d-alpha)/p|^delta * || |x'|^{alpha c / p} f ||_r`.
    pub lhs: f64,
    /// `bracket^{delta/p} * || |x'|^{alpha b / p} f ||_q^{1-delta}`.
    pub rhs: f64,
    pub slack: f64,
    /// `gradient_term - cp_term`, the Hardy identity's right side.
    pub bracket: f64,
    pub bracket_nonneg: bool,
    pub gradient_term: f64,
    pub cp_term: f64,
    pub quadrature_err: f64,
    pub params_echo: WeightParams,
}

/// Group-side CKN variant selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CknVariant {
    Stratified,
    Homogeneous,
}

struct CknPieces {
    lhs_norm_r: IntegralResult,
    gradient: IntegralResult,
    cp: IntegralResult,
    q_norm_q: IntegralResult,
}

fn assemble_ckn(
    setting: &str,
    f: &TestFunction,
    params: &WeightParams,
    dim_eff: f64,
    pieces: CknPieces,
) -> Result<CknReport> {
    let p = params.p;
    let q = params.q.expect("validated");
    let r_exp = params.r.expect("validated");
    let delta = params.delta.expect("validated");
    let constant = ((dim_eff - params.alpha) / p).abs().powf(delta);
    let bracket = pieces.gradient.value - pieces.cp.value;
    let bracket_err = pieces.gradient.err_estimate + pieces.cp.err_estimate;
    if bracket < -bracket_err {
        return Err(Error::NonConvergence {
            context: "CKN bracket negative beyond its error bar",
            err: -bracket,
            target: bracket_err,
        });
    }
    let bracket_pos = bracket.max(0.0);
    let lhs_norm = pieces.lhs_norm_r.value.max(0.0).powf(1.0 / r_exp);
    let q_norm = pieces.q_norm_q.value.max(0.0).powf(1.0 / q);
    let lhs = constant * lhs_norm;
    let rhs = bracket_pos.powf(delta / p) * q_norm.powf(q * (1.0 - delta) / q);
    // error propagation through the powers, guarding zero bases
    let d_pow = |base: f64, expo: f64, err: f64| -> f64 {
        if base <= 0.0 || err == 0.0 || expo == 0.0 {
            0.0
        } else {
            expo.abs() * base.powf(expo - 1.0) * err
        }
    };
    let lhs_err = constant * d_pow(pieces.lhs_norm_r.value, 1.0 / r_exp, pieces.lhs_norm_r.err_estimate);
    let rhs_err = d_pow(bracket_pos, delta / p, bracket_err)
        * q_norm.powf(1.0 - delta).max(0.0)
        + bracket_pos.powf(delta / p)
            * d_pow(pieces.q_norm_q.value, (1.0 - delta) / q, pieces.q_norm_q.err_estimate);
    Ok(CknReport {
        setting: setting.to_string(),
        function_label: f.label().to_string(),
        lhs,
        rhs,
        slack: rhs - lhs,
        bracket,
        bracket_nonneg: bracket >= -bracket_err,
        gradient_term: pieces.gradient.value,
        cp_term: pieces.cp.value,
        quadrature_err: lhs_err + rhs_err,
        params_echo: *params,
    })
}

#[inline]
fn abs_pow(z: Complex64, p: f64) -> f64 {
    z.norm_sqr().powf(0.5 * p)
}

#[inline]
fn is_zero_germ(fv: Complex64, grad: &[Complex64]) -> bool {
    fv == Complex64::new(0.0, 0.0) && grad.iter().all(|g| *g == Complex64::new(0.0, 0.0))
}

/// CKN with remainder on `R^k x R^{n-k}`.
pub fn evaluate_ckn_cylindrical(
    space: &CylindricalSpace,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<CknReport> {
    let verdict = validate_ckn_params(params, space.k() as f64);
    if !verdict.admissible {
        return Err(Error::Inadmissible(verdict.violation.unwrap_or_default()));
    }
    if !(f.support().radial_lo > 0.0) {
        return Err(Error::Inadmissible("support must avoid {x' = 0}".to_string()));
    }
    let k = space.k();
    let p = params.p;
    let alpha = params.alpha;
    let q = params.q.unwrap();
    let r_exp = params.r.unwrap();
    let b = params.b.unwrap();
    let c = params.c.unwrap();
    let cst = (k as f64 - alpha) / p;
    let integrand = |x: &[f64], out: &mut [f64]| {
        let (fv, grad) = f.value_and_grad(x, k);
        if is_zero_germ(fv, &grad[..k]) {
            out.fill(0.0);
            return;
        }
        let rad = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let w = rad.powf(-alpha / p);
        let d: Complex64 = x[..k]
            .iter()
            .zip(grad.iter())
            .map(|(&xj, &gj)| gj * xj)
            .sum();
        let xi = d * w;
        let eta = xi + fv * (w * cst);
        out[0] = abs_pow(fv, r_exp) * rad.powf(alpha * c * r_exp / p);
        out[1] = abs_pow(xi, p);
        out[2] = cp_value(p, xi, eta);
        out[3] = abs_pow(fv, q) * rad.powf(alpha * b * q / p);
    };
    let ints = integrate_cylindrical_channels(space, &integrand, f.support(), spec, 4)?;
    assemble_ckn(
        "ckn-cylindrical",
        f,
        params,
        k as f64,
        CknPieces {
            lhs_norm_r: ints[0],
            gradient: ints[1],
            cp: ints[2],
            q_norm_q: ints[3],
        },
    )
}

/// CKN with remainder on a group, with `(N, x'.grad_H, |x'|)` or
/// `(Q, radial derivative, quasi-norm)` substitutions.
pub fn evaluate_ckn_group(
    group: &GroupStructure,
    params: &WeightParams,
    f: &TestFunction,
    spec: &QuadratureSpec,
    variant: CknVariant,
) -> Result<CknReport> {
    let dim_eff = match variant {
        CknVariant::Stratified => group
            .stratified_data()
            .ok_or(Error::MissingStratifiedData)?
            .first_stratum as f64,
        CknVariant::Homogeneous => group.homogeneous_dim(),
    };
    let verdict = validate_ckn_params(params, dim_eff);
    if !verdict.admissible {
        return Err(Error::Inadmissible(verdict.violation.unwrap_or_default()));
    }
    if !(f.support().radial_lo > 0.0) {
        return Err(Error::Inadmissible(
            "support must avoid the singular set".to_string(),
        ));
    }
    let p = params.p;
    let alpha = params.alpha;
    let q = params.q.unwrap();
    let r_exp = params.r.unwrap();
    let b = params.b.unwrap();
    let c = params.c.unwrap();
    let cst = (dim_eff - alpha) / p;
    match variant {
        CknVariant::Stratified => {
            let data = group.stratified_data().expect("checked");
            let nfirst = data.first_stratum;
            let space = CylindricalSpace::new(group.n(), nfirst)?;
            let integrand = |x: &[f64], out: &mut [f64]| {
                let (fv, grad) = f.value_and_grad(x, group.n());
                if is_zero_germ(fv, &grad[..group.n()]) {
                    out.fill(0.0);
                    return;
                }
                let rad = x[..nfirst].iter().map(|v| v * v).sum::<f64>().sqrt();
                let w = rad.powf(-alpha / p);
                let hgrad = group.horizontal_from_full(data, x, &grad);
                let d: Complex64 = x[..nfirst]
                    .iter()
                    .zip(hgrad.iter())
                    .map(|(&xj, &gj)| gj * xj)
                    .sum();
                let xi = d * w;
                let eta = xi + fv * (w * cst);
                out[0] = abs_pow(fv, r_exp) * rad.powf(alpha * c * r_exp / p);
                out[1] = abs_pow(xi, p);
                out[2] = cp_value(p, xi, eta);
                out[3] = abs_pow(fv, q) * rad.powf(alpha * b * q / p);
            };
            let ints = integrate_cylindrical_channels(&space, &integrand, f.support(), spec, 4)?;
            assemble_ckn(
                "ckn-stratified",
                f,
                params,
                dim_eff,
                CknPieces {
                    lhs_norm_r: ints[0],
                    gradient: ints[1],
                    cp: ints[2],
                    q_norm_q: ints[3],
                },
            )
        }
        CknVariant::Homogeneous => {
            let integrand = |x: &[f64], out: &mut [f64]| {
                let rad = group.quasi_norm(x).expect("dimension checked");
                if rad == 0.0 {
                    out.fill(0.0);
                    return;
                }
                let mut y = [0.0f64; crate::autodiff::MAX_DIRS];
                let inv = 1.0 / rad;
                for (i, (&xi, &w)) in x.iter().zip(group.weights()).enumerate() {
                    y[i] = xi * inv.powf(w);
                }
                let flow = {
                    let s = crate::autodiff::Dual::seeded(rad, 0);
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
                let w1 = rad.powf(-alpha / p);
                let xi = df * rad.powf(1.0 - alpha / p);
                let eta = xi + fv * (w1 * cst);
                out[0] = abs_pow(fv, r_exp) * rad.powf(alpha * c * r_exp / p);
                out[1] = abs_pow(xi, p);
                out[2] = cp_value(p, xi, eta);
                out[3] = abs_pow(fv, q) * rad.powf(alpha * b * q / p);
            };
            let ints = integrate_group_channels(group, &integrand, f.support(), spec, 4)?;
            assemble_ckn(
                "ckn-homogeneous",
                f,
                params,
                dim_eff,
                CknPieces {
                    lhs_norm_r: ints[0],
                    gradient: ints[1],
                    cp: ints[2],
                    q_norm_q: ints[3],
                },
            )
        }
    }
}

/// Cylindrical Heisenberg-Pauli-Weyl uncertainty inequality:
/// `|(k-p)/p| int |f|^2 <= (int |x'.grad_k f / |x'||^p)^{1/p}
/// (int |x'|^{p'} |f|^{p'})^{1/p'}` with `p' = p/(p-1)`.
pub fn evaluate_hpw(
    space: &CylindricalSpace,
    p: f64,
    f: &TestFunction,
    spec: &QuadratureSpec,
) -> Result<CknReport> {
    if !(p > 1.0) {
        return Err(Error::invalid("p", format!("must exceed 1, got {p}")));
    }
    if !(f.support().radial_lo > 0.0) {
        return Err(Error::Inadmissible("support must avoid {x' = 0}".to_string()));
    }
    let k = space.k();
    let p_conj = p / (p - 1.0);
    let integrand = |x: &[f64], out: &mut [f64]| {
        let (fv, grad) = f.value_and_grad(x, k);
        if is_zero_germ(fv, &grad[..k]) {
            out.fill(0.0);
            return;
        }
        let rad = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let d: Complex64 = x[..k]
            .iter()
            .zip(grad.iter())
            .map(|(&xj, &gj)| gj * xj)
            .sum();
        out[0] = fv.norm_sqr();
        out[1] = abs_pow(d / rad, p);
        out[2] = rad.powf(p_conj) * abs_pow(fv, p_conj);
    };
    let ints = integrate_cylindrical_channels(space, &integrand, f.support(), spec, 3)?;
    let constant = ((k as f64 - p) / p).abs();
    let lhs = constant * ints[0].value;
    let grad_root = ints[1].value.max(0.0).powf(1.0 / p);
    let moment_root = ints[2].value.max(0.0).powf(1.0 / p_conj);
    let rhs = grad_root * moment_root;
    let d_pow = |base: f64, expo: f64, err: f64| -> f64 {
        if base <= 0.0 || err == 0.0 {
            0.0
        } else {
            expo * base.powf(expo - 1.0) * err
        }
    };
    let err = constant * ints[0].err_estimate
        + d_pow(ints[1].value, 1.0 / p, ints[1].err_estimate) * moment_root
        + grad_root * d_pow(ints[2].value, 1.0 / p_conj, ints[2].err_estimate);
    let params_echo = WeightParams {
        q: Some(p_conj),
        r: Some(2.0),
        b: Some(1.0),
        c: Some(0.0),
        delta: Some(0.5),
        ..WeightParams::hardy(p, p)
    };
    Ok(CknReport {
        setting: "hpw-cylindrical".to_string(),
        function_label: f.label().to_string(),
        lhs,
        rhs,
        slack: rhs - lhs,
        bracket: ints[1].value,
        bracket_nonneg: true,
        gradient_term: ints[1].value,
        cp_term: 0.0,
        quadrature_err: err,
        params_echo,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns;
    use approx::assert_relative_eq;

    #[test]
    fn hpw_configuration_is_admissible() {
        // p = q = r = 2, delta = 1/2, b = 1, c = 0
        let params = WeightParams::ckn(2.0, 2.0, 0.5, 1.0, 2.0);
        assert_relative_eq!(params.r.unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(params.c.unwrap(), 0.0, epsilon = 1e-14);
        let verdict = validate_ckn_params(&params, 3.0);
        assert!(verdict.admissible, "{:?}", verdict.violation);
    }

    #[test]
    fn delta_zero_forces_q_equals_r_and_c_equals_b() {
        let params = WeightParams::ckn(2.0, 3.0, 0.0, 1.0, 0.0);
        assert_relative_eq!(params.r.unwrap(), 3.0, max_relative = 1e-14);
        assert_relative_eq!(params.c.unwrap(), params.b.unwrap(), max_relative = 1e-14);
        assert!(validate_ckn_params(&params, 2.0).admissible);
        // breaking c = b at delta = 0 must be rejected
        let mut bad = params;
        bad.c = Some(0.5);
        let verdict = validate_ckn_params(&bad, 2.0);
        assert!(!verdict.admissible);
        assert!(verdict.violation.unwrap().contains("c ="));
    }

    #[test]
    fn r_exceeding_p_plus_q_is_rejected() {
        let mut params = WeightParams::ckn(2.0, 2.0, 0.5, 1.0, 0.0);
        params.r = Some(5.0);
        let verdict = validate_ckn_params(&params, 2.0);
        assert!(!verdict.admissible);
        let msg = verdict.violation.unwrap();
        assert!(msg.contains("p + q") || msg.contains("differs from 1"), "{msg}");
    }

    #[test]
    fn zero_function_gives_zero_sides() {
        let space = CylindricalSpace::new(2, 2).unwrap();
        let f = testfns::make_annular_bump(&space, 1.0, 2.0, 1.0)
            .unwrap()
            .scaled(Complex64::new(0.0, 0.0));
        let params = WeightParams::ckn(2.0, 2.0, 0.5, -1.0, 1.0);
        let rep = evaluate_ckn_cylindrical(&space, &params, &f, &QuadratureSpec::default()).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
    }

    #[test]
    fn hpw_degenerate_p_equals_k() {
        let space = CylindricalSpace::new(3, 2).unwrap();
        let f = testfns::make_annular_bump(&space, 0.8, 1.8, 1.0).unwrap();
        let rep = evaluate_hpw(&space, 2.0, &f, &QuadratureSpec::default()).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert!(rep.slack > 0.0);
    }
}
