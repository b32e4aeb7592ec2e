//! Geometric settings: cylindrical Euclidean space, the Heisenberg group,
//! and general homogeneous groups with anisotropic dilations.
//!
//! All integrals downstream are taken in Cartesian coordinates (Haar
//! measure is Lebesgue measure), so this module only has to supply
//! dilations, quasi-norms, horizontal vector fields and the radial
//! derivative along the dilation flow — never the group product or the
//! sphere measure.

use crate::autodiff::Dual;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::testfns::TestFunction;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// `R^k x R^{n-k}` with the split `x = (x', x'')`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylindricalSpace {
    n: usize,
    k: usize,
}

impl CylindricalSpace {
    /// Desk-scale budget: `1 <= k <= n <= 4`.
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n == 0 || n > 4 {
            return Err(Error::invalid("n", format!("must be in 1..=4, got {n}")));
        }
        if k == 0 || k > n {
            return Err(Error::invalid("k", format!("must be in 1..={n}, got {k}")));
        }
        Ok(CylindricalSpace { n, k })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Splits a point into `(x', x'')`.
    pub fn split<'a>(&self, x: &'a [f64]) -> Result<(&'a [f64], &'a [f64])> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(x.split_at(self.k))
    }

    /// Euclidean norm of the first factor.
    pub fn xprime_norm(&self, x: &[f64]) -> f64 {
        x[..self.k].iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Selector for the homogeneous quasi-norm.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormKind {
    /// Euclidean norm; requires unit dilation weights.
    Euclidean,
    /// `(sum |x_i|^{2s/nu_i})^{1/2s}` with `2s` the least common multiple
    /// of the dilation weights.
    Anisotropic2s,
    /// `(|x'|^4 + 16 t^2)^{1/4}` on the Heisenberg group.
    Koranyi,
}

/// First-stratum vector fields of a step-2 stratified group in the form
/// `X_k = d/dx_k + sum_m a_{k,m}(x') d/dx^{(2)}_m` with linear `a_{k,m}`.
#[derive(Clone, Debug, PartialEq)]
pub struct StratifiedData {
    /// Dimension of the first stratum.
    pub first_stratum: usize,
    /// `coeffs[k][m][j]` is the coefficient of `x'_j` in `a_{k,m}`.
    pub coeffs: Vec<Vec<Vec<f64>>>,
}

/// Homogeneous group: dilation weights, homogeneous dimension, quasi-norm,
/// and optionally the first-stratum structure of a step-2 Carnot group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupStructure {
    n: usize,
    weights: Vec<f64>,
    q: f64,
    norm_kind: NormKind,
    /// Precomputed exponents `2s/nu_i` and `1/2s` for the anisotropic norm.
    aniso: Option<(Vec<f64>, f64)>,
    stratified: Option<StratifiedData>,
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

impl GroupStructure {
    /// The Abelian group `(R^n, +)` with unit weights and Euclidean norm.
    pub fn euclidean(n: usize) -> Result<Self> {
        Self::check_dim(n)?;
        Ok(GroupStructure {
            n,
            weights: vec![1.0; n],
            q: n as f64,
            norm_kind: NormKind::Euclidean,
            aniso: None,
            stratified: None,
        })
    }

    /// Anisotropic dilations with positive integer weights and the 2s-norm.
    pub fn anisotropic(weights: &[u64]) -> Result<Self> {
        Self::check_dim(weights.len())?;
        if weights.iter().any(|&w| w == 0) {
            return Err(Error::invalid("weights", "dilation weights must be positive"));
        }
        let two_s = weights.iter().copied().fold(1u64, lcm) as f64;
        let exps: Vec<f64> = weights.iter().map(|&w| two_s / w as f64).collect();
        Ok(GroupStructure {
            n: weights.len(),
            weights: weights.iter().map(|&w| w as f64).collect(),
            q: weights.iter().sum::<u64>() as f64,
            norm_kind: NormKind::Anisotropic2s,
            aniso: Some((exps, 1.0 / two_s)),
            stratified: None,
        })
    }

    /// The Heisenberg group `H^1` (n = 3, N = 2, Q = 4) with canonical
    /// vector fields `X1 = d1 - (x2/2) dt`, `X2 = d2 + (x1/2) dt`.
    pub fn heisenberg(norm_kind: NormKind) -> Result<Self> {
        if norm_kind == NormKind::Euclidean {
            return Err(Error::invalid(
                "norm_kind",
                "the Euclidean norm is not homogeneous for weights (1,1,2)",
            ));
        }
        let mut g = Self::anisotropic(&[1, 1, 2])?;
        g.norm_kind = norm_kind;
        g.stratified = Some(StratifiedData {
            first_stratum: 2,
            coeffs: vec![vec![vec![0.0, -0.5]], vec![vec![0.5, 0.0]]],
        });
        Ok(g)
    }

    fn check_dim(n: usize) -> Result<()> {
        if n == 0 || n > 3 {
            return Err(Error::invalid("n", format!("group dimension must be in 1..=3, got {n}")));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Homogeneous dimension `Q = sum nu_i`.
    pub fn homogeneous_dim(&self) -> f64 {
        self.q
    }

    pub fn norm_kind(&self) -> NormKind {
        self.norm_kind
    }

    pub fn stratified_data(&self) -> Option<&StratifiedData> {
        self.stratified.as_ref()
    }

    /// First-stratum dimension, if stratified.
    pub fn first_stratum_dim(&self) -> Option<usize> {
        self.stratified.as_ref().map(|s| s.first_stratum)
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(())
    }

    /// Anisotropic dilation: coordinate `i` scales by `lambda^{nu_i}`.
    pub fn dilate(&self, lambda: f64, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        if !(lambda > 0.0) {
            return Err(Error::invalid("lambda", format!("must be positive, got {lambda}")));
        }
        Ok(x.iter()
            .zip(&self.weights)
            .map(|(&xi, &w)| xi * lambda.powf(w))
            .collect())
    }

    /// The registered homogeneous quasi-norm.
    pub fn quasi_norm(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        Ok(match self.norm_kind {
            NormKind::Euclidean => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::Anisotropic2s => {
                let (exps, inv2s) = self.aniso.as_ref().expect("anisotropic data");
                let s: f64 = x
                    .iter()
                    .zip(exps)
                    .map(|(&xi, &e)| xi.abs().powf(e))
                    .sum();
                s.powf(*inv2s)
            }
            NormKind::Koranyi => {
                let r2 = x[0] * x[0] + x[1] * x[1];
                let t = x[2];
                (r2 * r2 + 16.0 * t * t).powf(0.25)
            }
        })
    }

    /// Expression computing the quasi-norm, when the norm is smooth away
    /// from the origin (Euclidean, Koranyi). The anisotropic 2s-norm may
    /// contain odd exponents and is not smooth across coordinate planes.
    pub fn smooth_norm_expr(&self) -> Option<Expr> {
        match self.norm_kind {
            NormKind::Euclidean => Some(Expr::sumsq(self.n).powf(0.5)),
            NormKind::Koranyi => {
                let r2 = Expr::sumsq(2);
                Some((r2.powi(2) + Expr::re_const(16.0) * Expr::coord(2).powi(2)).powf(0.25))
            }
            NormKind::Anisotropic2s => None,
        }
    }

    /// A smooth gauge equivalent to the quasi-norm, used only to build
    /// compactly supported profiles: `(sum x_i^{e_i})^{1/2m}` with even
    /// integer exponents `e_i = 2m/nu_i`, `2m = 2 lcm(nu)`.
    pub fn smooth_gauge_expr(&self) -> Expr {
        if let Some(e) = self.smooth_norm_expr() {
            return e;
        }
        let two_m = 2 * self
            .weights
            .iter()
            .map(|&w| w as u64)
            .fold(1u64, lcm);
        let mut acc: Option<Expr> = None;
        for (i, &w) in self.weights.iter().enumerate() {
            let e = (two_m as f64 / w) as i32;
            let term = Expr::coord(i).powi(e);
            acc = Some(match acc {
                None => term,
                Some(a) => a + term,
            });
        }
        acc.expect("nonempty weights").powf(1.0 / two_m as f64)
    }

    /// Evaluates the smooth gauge at a point.
    pub fn smooth_gauge(&self, x: &[f64]) -> f64 {
        self.smooth_gauge_expr().eval_value(x).re
    }

    /// Whether the smooth gauge coincides with the registered quasi-norm.
    pub fn gauge_is_norm(&self) -> bool {
        self.smooth_norm_expr().is_some()
    }

    /// Per-axis bounds of the gauge ball `{gauge <= r}`:
    /// `|x_i| <= r^{nu_i}`.
    pub fn gauge_axis_bounds(&self, r: f64) -> Vec<(f64, f64)> {
        self.weights
            .iter()
            .map(|&w| {
                let b = r.powf(w);
                (-b, b)
            })
            .collect()
    }

    /// Horizontal gradient `(X_1 f, ..., X_N f)(x)`.
    pub fn horizontal_gradient(&self, f: &TestFunction, x: &[f64]) -> Result<Vec<Complex64>> {
        self.check_point(x)?;
        let data = self.stratified.as_ref().ok_or(Error::MissingStratifiedData)?;
        let (_, grad) = f.value_and_grad(x, self.n);
        Ok(self.horizontal_from_full(data, x, &grad))
    }

    pub(crate) fn horizontal_from_full(
        &self,
        data: &StratifiedData,
        x: &[f64],
        grad: &[Complex64],
    ) -> Vec<Complex64> {
        let nfirst = data.first_stratum;
        let mut out = Vec::with_capacity(nfirst);
        for k in 0..nfirst {
            let mut v = grad[k];
            for (m, poly) in data.coeffs[k].iter().enumerate() {
                let a: f64 = poly.iter().zip(&x[..nfirst]).map(|(&c, &xj)| c * xj).sum();
                v += grad[nfirst + m] * a;
            }
            out.push(v);
        }
        out
    }

    /// Radial derivative along the dilation flow: with `r = |x|`,
    /// `y = delta_{1/r} x` and `g(s) = f(delta_s y)`, returns `g'(r)`.
    pub fn radial_derivative(&self, f: &TestFunction, x: &[f64]) -> Result<Complex64> {
        let r = self.quasi_norm(x)?;
        if r == 0.0 {
            return Err(Error::SingularPoint("radial derivative at the origin"));
        }
        let y = self.dilate(1.0 / r, x)?;
        Ok(self.radial_derivative_at(f, &y, r))
    }

    /// As [`Self::radial_derivative`] but with the unit-sphere point and
    /// radius precomputed (hot path for the quadrature engines).
    pub(crate) fn radial_derivative_at(&self, f: &TestFunction, y: &[f64], r: f64) -> Complex64 {
        let s = Dual::seeded(r, 0);
        let mut coords = [Dual::zero(); crate::autodiff::MAX_DIRS];
        for i in 0..self.n {
            coords[i] = s.powf(self.weights[i]).scale(y[i]);
        }
        f.eval_dual(&coords[..self.n]).dot[0]
    }
}

/// A point of the ambient space; a thin validated wrapper used at API
/// boundaries, while the hot paths work on coordinate slices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

/// `x' . grad_k f(x) = sum_{j<k} x_j d_j f(x)`.
pub fn cylindrical_radial_term(
    space: &CylindricalSpace,
    f: &TestFunction,
    x: &[f64],
) -> Result<Complex64> {
    let (xp, _) = space.split(x)?;
    if xp.iter().all(|&v| v == 0.0) {
        return Err(Error::SingularPoint("x' = 0 in x'.grad_k"));
    }
    let (_, grad) = f.value_and_grad(x, space.k());
    Ok(xp
        .iter()
        .zip(grad.iter())
        .map(|(&xj, &gj)| gj * xj)
        .sum())
}

/// Evaluates `div_k(x'/|x'|^alpha)` by automatic differentiation.
///
/// Contract: equals `(k - alpha)/|x'|^alpha` to better than 1e-10 relative.
pub fn weighted_divergence_check(space: &CylindricalSpace, alpha: f64, x: &[f64]) -> Result<f64> {
    let (xp, _) = space.split(x)?;
    if xp.iter().all(|&v| v == 0.0) {
        return Err(Error::SingularPoint("x' = 0 in div_k"));
    }
    let k = space.k();
    let weight = Expr::sumsq(k).powf(-alpha / 2.0);
    let mut div = 0.0;
    for j in 0..k {
        let component = Expr::coord(j) * weight.clone();
        let (_, grad) = component.value_and_grad(x, k);
        div += grad[j].re;
    }
    Ok(div)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testfns;
    use approx::assert_relative_eq;

    #[test]
    fn cylindrical_construction_guards() {
        assert!(CylindricalSpace::new(2, 1).is_ok());
        assert!(CylindricalSpace::new(5, 1).is_err());
        assert!(CylindricalSpace::new(3, 0).is_err());
        assert!(CylindricalSpace::new(3, 4).is_err());
    }

    #[test]
    fn split_roundtrip() {
        let s = CylindricalSpace::new(4, 2).unwrap();
        let x = [1.0, 2.0, 3.0, 4.0];
        let (xp, xpp) = s.split(&x).unwrap();
        assert_eq!(xp, &[1.0, 2.0]);
        assert_eq!(xpp, &[3.0, 4.0]);
        let rejoined: Vec<f64> = xp.iter().chain(xpp.iter()).copied().collect();
        assert_eq!(rejoined, x);
    }

    #[test]
    fn euclidean_norm_is_pythagorean() {
        let g = GroupStructure::euclidean(2).unwrap();
        assert_relative_eq!(g.quasi_norm(&[3.0, 4.0]).unwrap(), 5.0);
    }

    #[test]
    fn koranyi_norm_value() {
        let g = GroupStructure::heisenberg(NormKind::Koranyi).unwrap();
        // (|x'|^4 + 16 t^2)^{1/4} at (0,0,1) is 16^{1/4} = 2
        assert_relative_eq!(g.quasi_norm(&[0.0, 0.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn norm_homogeneity_under_dilation() {
        let g = GroupStructure::anisotropic(&[1, 2]).unwrap();
        let x = [0.7, -1.3];
        let n0 = g.quasi_norm(&x).unwrap();
        let x2 = g.dilate(2.0, &x).unwrap();
        assert_relative_eq!(g.quasi_norm(&x2).unwrap(), 2.0 * n0, max_relative = 1e-14);
    }

    #[test]
    fn dilation_definition_and_composition() {
        let g = GroupStructure::heisenberg(NormKind::Koranyi).unwrap();
        assert_eq!(g.dilate(2.0, &[1.0, 1.0, 1.0]).unwrap(), vec![2.0, 2.0, 4.0]);
        let x = [0.3, -0.8, 1.1];
        assert_eq!(g.dilate(1.0, &x).unwrap(), x.to_vec());
        let a = g.dilate(3.0, &g.dilate(2.0, &x).unwrap()).unwrap();
        let b = g.dilate(6.0, &x).unwrap();
        for (u, v) in a.iter().zip(&b) {
            assert_relative_eq!(u, v, max_relative = 1e-14);
        }
        assert!(g.dilate(0.0, &x).is_err());
        assert!(g.dilate(-1.0, &x).is_err());
    }

    #[test]
    fn heisenberg_horizontal_gradient_of_coordinates() {
        let g = GroupStructure::heisenberg(NormKind::Koranyi).unwrap();
        // f = x1: (1, 0)
        let f = testfns::from_expr(Expr::coord(0), 3);
        let hg = g.horizontal_gradient(&f, &[0.4, -0.2, 0.9]).unwrap();
        assert_relative_eq!(hg[0].re, 1.0);
        assert_relative_eq!(hg[1].re, 0.0);
        // f = t at (1,1,0): (-1/2, 1/2)
        let f = testfns::from_expr(Expr::coord(2), 3);
        let hg = g.horizontal_gradient(&f, &[1.0, 1.0, 0.0]).unwrap();
        assert_relative_eq!(hg[0].re, -0.5);
        assert_relative_eq!(hg[1].re, 0.5);
    }

    #[test]
    fn horizontal_gradient_requires_stratified_data() {
        let g = GroupStructure::euclidean(2).unwrap();
        let f = testfns::from_expr(Expr::coord(0), 2);
        assert!(matches!(
            g.horizontal_gradient(&f, &[1.0, 0.0]),
            Err(Error::MissingStratifiedData)
        ));
    }

    #[test]
    fn radial_derivative_of_squared_norm() {
        let g = GroupStructure::euclidean(2).unwrap();
        let f = testfns::from_expr(Expr::sumsq(2), 2);
        // d/dr r^2 = 2r at |x| = 3
        let x = [3.0f64 / 2f64.sqrt(), 3.0 / 2f64.sqrt()];
        let d = g.radial_derivative(&f, &x).unwrap();
        assert_relative_eq!(d.re, 6.0, max_relative = 1e-13);
    }

    #[test]
    fn radial_derivative_of_the_norm_itself() {
        for g in [
            GroupStructure::euclidean(2).unwrap(),
            GroupStructure::heisenberg(NormKind::Koranyi).unwrap(),
        ] {
            let f = testfns::from_expr(g.smooth_norm_expr().unwrap(), g.n());
            let x: Vec<f64> = (0..g.n()).map(|i| 0.4 + 0.3 * i as f64).collect();
            let d = g.radial_derivative(&f, &x).unwrap();
            assert_relative_eq!(d.re, 1.0, max_relative = 1e-12);
            assert_relative_eq!(d.im, 0.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn radial_derivative_rejects_origin() {
        let g = GroupStructure::euclidean(2).unwrap();
        let f = testfns::from_expr(Expr::sumsq(2), 2);
        assert!(g.radial_derivative(&f, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn radial_derivative_anisotropic_vs_finite_difference() {
        let g = GroupStructure::anisotropic(&[1, 2]).unwrap();
        let f = testfns::from_expr(Expr::coord(1), 2);
        let x = [0.8, 0.5];
        let r = g.quasi_norm(&x).unwrap();
        let y = g.dilate(1.0 / r, &x).unwrap();
        let d = g.radial_derivative(&f, &x).unwrap();
        let h = 1e-5;
        let gp = f.value(&g.dilate(r + h, &y).unwrap());
        let gm = f.value(&g.dilate(r - h, &y).unwrap());
        let fd = (gp.re - gm.re) / (2.0 * h);
        assert!((d.re - fd).abs() <= 1e-8, "dual {} vs fd {}", d.re, fd);
    }

    #[test]
    fn cylindrical_radial_term_monomial() {
        let s = CylindricalSpace::new(2, 1).unwrap();
        let f = testfns::from_expr(Expr::coord(0).powi(2), 2);
        let v = cylindrical_radial_term(&s, &f, &[2.0, 5.0]).unwrap();
        assert_relative_eq!(v.re, 8.0);
    }

    #[test]
    fn weighted_divergence_matches_closed_form() {
        for k in 1..=3usize {
            let space = CylindricalSpace::new(k, k).unwrap();
            for alpha in [-1.0, 0.0, 1.0, 2.0, k as f64] {
                let x: Vec<f64> = (0..k).map(|i| 0.9 - 0.35 * i as f64).collect();
                let r = space.xprime_norm(&x);
                let got = weighted_divergence_check(&space, alpha, &x).unwrap();
                let expect = (k as f64 - alpha) / r.powf(alpha);
                let denom = expect.abs().max(1.0 / r.powf(alpha));
                assert!(
                    (got - expect).abs() / denom <= 1e-10,
                    "k={k} alpha={alpha}: got {got}, expect {expect}"
                );
            }
        }
    }

    #[test]
    fn divergence_of_identity_field_is_k() {
        let space = CylindricalSpace::new(3, 3).unwrap();
        let got = weighted_divergence_check(&space, 0.0, &[0.2, -0.4, 0.7]).unwrap();
        assert_relative_eq!(got, 3.0, max_relative = 1e-13);
        // k = alpha gives zero everywhere
        let space2 = CylindricalSpace::new(2, 2).unwrap();
        let got2 = weighted_divergence_check(&space2, 2.0, &[1.3, -0.2]).unwrap();
        assert!(got2.abs() <= 1e-10);
    }
}
