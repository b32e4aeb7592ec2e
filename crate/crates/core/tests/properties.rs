//! Property-based invariants: dilation and quasi-norm axioms, remainder
//! functional properties, gradient exactness, and scaling covariance of
//! the identity evaluators.

use hardylab::autodiff::MAX_DIRS;
use hardylab::identities::{cp_value, evaluate_hardy_cylindrical, WeightParams};
use hardylab::quadrature::QuadratureSpec;
use hardylab::spaces::{CylindricalSpace, GroupStructure, NormKind};
use hardylab::testfns::{self, TestFunction};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn groups() -> Vec<GroupStructure> {
    vec![
        GroupStructure::euclidean(2).unwrap(),
        GroupStructure::euclidean(3).unwrap(),
        GroupStructure::anisotropic(&[1, 2]).unwrap(),
        GroupStructure::heisenberg(NormKind::Koranyi).unwrap(),
        GroupStructure::heisenberg(NormKind::Anisotropic2s).unwrap(),
    ]
}

#[test]
fn dilation_semigroup_law() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for g in groups() {
        for _ in 0..1000 {
            let lambda: f64 = rng.gen_range(0.2..4.0);
            let mu: f64 = rng.gen_range(0.2..4.0);
            let x: Vec<f64> = (0..g.n()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let a = g.dilate(lambda, &g.dilate(mu, &x).unwrap()).unwrap();
            let b = g.dilate(lambda * mu, &x).unwrap();
            for (u, v) in a.iter().zip(&b) {
                let scale = u.abs().max(v.abs()).max(1e-9);
                assert!((u - v).abs() / scale <= 1e-12, "{u} vs {v}");
            }
        }
    }
}

#[test]
fn quasi_norm_axioms() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for g in groups() {
        for _ in 0..1000 {
            let x: Vec<f64> = (0..g.n()).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let lambda: f64 = rng.gen_range(0.1..5.0);
            let n0 = g.quasi_norm(&x).unwrap();
            // homogeneity
            let n1 = g.quasi_norm(&g.dilate(lambda, &x).unwrap()).unwrap();
            assert!((n1 - lambda * n0).abs() <= 1e-12 * (lambda * n0).max(1e-12));
            // symmetry
            let neg: Vec<f64> = x.iter().map(|v| -v).collect();
            let n2 = g.quasi_norm(&neg).unwrap();
            assert!((n2 - n0).abs() <= 1e-13 * n0.max(1e-12));
            // positivity away from zero
            if x.iter().any(|v| v.abs() > 1e-6) {
                assert!(n0 > 0.0);
            }
        }
        let zero = vec![0.0; g.n()];
        assert_eq!(g.quasi_norm(&zero).unwrap(), 0.0);
    }
}

#[test]
fn heisenberg_horizontal_term_cancellation() {
    // x'.grad_H f = x'.grad_{x'} f on H^1: the t-components cancel
    let g = GroupStructure::heisenberg(NormKind::Koranyi).unwrap();
    let space = CylindricalSpace::new(3, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for fi in 0..10 {
        let f = testfns::random_cylindrical(&space, None, &mut rng);
        for _ in 0..100 {
            let x: [f64; 3] = [
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ];
            if x[0].abs() + x[1].abs() < 1e-3 {
                continue;
            }
            let hg = g.horizontal_gradient(&f, &x).unwrap();
            let horizontal = hg[0] * x[0] + hg[1] * x[1];
            let (_, grad) = f.value_and_grad(&x, 2);
            let plain = grad[0] * x[0] + grad[1] * x[1];
            let scale = horizontal.norm().max(plain.norm()).max(1e-6);
            assert!(
                (horizontal - plain).norm() / scale <= 1e-10,
                "function {fi}: {horizontal} vs {plain}"
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn cp_is_nonnegative(
        re_xi in -3.0f64..3.0, im_xi in -3.0f64..3.0,
        re_eta in -3.0f64..3.0, im_eta in -3.0f64..3.0,
        p in 2.0f64..4.0,
    ) {
        let v = cp_value(p, Complex64::new(re_xi, im_xi), Complex64::new(re_eta, im_eta));
        prop_assert!(v >= -1e-12);
    }

    #[test]
    fn cp_at_two_is_eta_squared(
        re_xi in -3.0f64..3.0, im_xi in -3.0f64..3.0,
        re_eta in -3.0f64..3.0, im_eta in -3.0f64..3.0,
    ) {
        let eta = Complex64::new(re_eta, im_eta);
        let v = cp_value(2.0, Complex64::new(re_xi, im_xi), eta);
        prop_assert!((v - eta.norm_sqr()).abs() <= 1e-12);
    }

    #[test]
    fn grad_is_linear(
        a_re in -2.0f64..2.0, a_im in -2.0f64..2.0,
        b_re in -2.0f64..2.0, b_im in -2.0f64..2.0,
        x0 in 0.9f64..1.9, x1 in -0.9f64..0.9,
    ) {
        let space = CylindricalSpace::new(2, 1).unwrap();
        let f = testfns::make_annular_bump(&space, 0.8, 2.0, 1.0).unwrap();
        let g = testfns::make_phase_modulated(&f, hardylab::Expr::re_const(0.6) * hardylab::Expr::coord(0));
        let (a, b) = (Complex64::new(a_re, a_im), Complex64::new(b_re, b_im));
        let combo = TestFunction::scaled(&f, a);
        let combo2 = TestFunction::scaled(&g, b);
        let x = [x0, x1];
        let (_, gf) = f.value_and_grad(&x, 2);
        let (_, gg) = g.value_and_grad(&x, 2);
        let (_, gc) = combo.value_and_grad(&x, 2);
        let (_, gc2) = combo2.value_and_grad(&x, 2);
        for j in 0..2 {
            let want = a * gf[j];
            prop_assert!((gc[j] - want).norm() <= 1e-12 * want.norm().max(1.0));
            let want2 = b * gg[j];
            prop_assert!((gc2[j] - want2).norm() <= 1e-12 * want2.norm().max(1.0));
        }
    }
}

#[test]
fn cp_vanishing_characterization_reports_positive_ratio() {
    // empirical inf of cp / |eta|^p stays positive for p >= 2
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for p in [2.0, 2.5, 3.0, 4.0] {
        let mut inf_ratio = f64::INFINITY;
        for _ in 0..100_000 {
            let xi = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let eta = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            if eta.norm() < 1e-3 {
                continue;
            }
            let ratio = cp_value(p, xi, eta) / eta.norm().powf(p);
            inf_ratio = inf_ratio.min(ratio);
        }
        assert!(
            inf_ratio > 0.0 && inf_ratio <= 1.0 + 1e-12,
            "p = {p}: empirical c_p = {inf_ratio}"
        );
    }
}

#[test]
fn gradient_matches_central_finite_differences() {
    // every family in the library, sampled points in the support interior
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let space = CylindricalSpace::new(3, 2).unwrap();
    let mut library: Vec<TestFunction> = Vec::new();
    for _ in 0..6 {
        library.push(testfns::random_cylindrical(&space, None, &mut rng));
    }
    let params = WeightParams::hardy(2.0, 1.0);
    library.push(
        testfns::make_extremizer(&space, testfns::ExtremizerKind::H1, &params, 0.2).unwrap(),
    );
    let lp = WeightParams::log_weight(2.0, 0.0, -1.0, 4.0);
    library.push(
        testfns::make_extremizer(&space, testfns::ExtremizerKind::H2, &lp, 0.3).unwrap(),
    );
    let h = 1e-5;
    for f in &library {
        let sup = f.support().clone();
        let (rlo, rhi) = (sup.radial_lo, sup.radial_hi.min(1e3));
        let mut checked = 0;
        while checked < 300 {
            let r = rng.gen_range((rlo + 0.15 * (rhi - rlo))..(rlo + 0.85 * (rhi - rlo)));
            let ang: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let xpp = if sup.xpp_box.is_empty() {
                0.0
            } else {
                rng.gen_range((0.8 * sup.xpp_box[0].0)..(0.8 * sup.xpp_box[0].1))
            };
            let x = [r * ang.cos(), r * ang.sin(), xpp];
            let (_, grad) = f.value_and_grad(&x, 3);
            let scale = f.value(&x).norm().max(1e-3);
            for j in 0..3 {
                let mut xp = x;
                let mut xm = x;
                xp[j] += h;
                xm[j] -= h;
                let fd = (f.value(&xp) - f.value(&xm)) / Complex64::new(2.0 * h, 0.0);
                let denom = grad[j].norm().max(fd.norm()).max(scale);
                assert!(
                    (grad[j] - fd).norm() / denom <= 1e-7,
                    "{}: dir {j} at {x:?}: {} vs {fd}",
                    f.label(),
                    grad[j]
                );
            }
            checked += 1;
        }
    }
}

#[test]
fn identity_scaling_covariance() {
    // f -> lambda f multiplies lhs, gradient and remainder by |lambda|^p
    let space = CylindricalSpace::new(2, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let spec = QuadratureSpec::default();
    for p in [2.0, 3.0] {
        let params = WeightParams::hardy(p, 1.0);
        let f = testfns::random_cylindrical(&space, None, &mut rng);
        let lambda = Complex64::new(rng.gen_range(0.3..2.0), rng.gen_range(-1.5..1.5));
        let scaled = f.scaled(lambda);
        let base = evaluate_hardy_cylindrical(&space, &params, &f, &spec).unwrap();
        let big = evaluate_hardy_cylindrical(&space, &params, &scaled, &spec).unwrap();
        let factor = lambda.norm().powf(p);
        for (x, y, name) in [
            (base.lhs, big.lhs, "lhs"),
            (base.gradient_term, big.gradient_term, "gradient"),
            (base.cp_term, big.cp_term, "cp"),
        ] {
            assert!(
                (y - factor * x).abs() <= 1e-10 * (factor * x).abs().max(1e-12),
                "{name}: {y} vs {} (factor {factor})",
                factor * x
            );
        }
    }
}

#[test]
fn dual_lane_budget_matches_dimension_cap() {
    assert!(MAX_DIRS >= 4);
    assert!(CylindricalSpace::new(4, 4).is_ok());
    assert!(GroupStructure::euclidean(4).is_err());
}
