//! Numerical verification laboratory for weighted Hardy-type identities,
//! logarithmic Hardy identities, and Caffarelli-Kohn-Nirenberg
//! inequalities on cylindrical Euclidean space, the Heisenberg group, and
//! general homogeneous groups with anisotropic dilations.
//!
//! The crate evaluates both sides of each identity to quantified
//! tolerance: test functions are composed expressions differentiated
//! exactly with complex dual numbers, integrals are taken in Cartesian
//! coordinates with refinement-based error estimates, and extremizer
//! sweeps produce evidence for the sharp constants and their
//! non-attainability.

pub mod autodiff;
pub mod ckn;
pub mod error;
pub mod expr;
pub mod identities;
pub mod quadrature;
pub mod sharpness;
pub mod spaces;
pub mod testfns;

pub use autodiff::{Dual, MAX_DIRS};
pub use ckn::{
    evaluate_ckn_cylindrical, evaluate_ckn_group, evaluate_hpw, validate_ckn_params,
    CknAdmissibility, CknReport, CknVariant,
};
pub use error::{Error, Result};
pub use expr::Expr;
pub use identities::{
    cp, cp_value, evaluate_hardy_cylindrical, evaluate_hardy_homogeneous,
    evaluate_hardy_stratified, evaluate_log_hardy_cylindrical, evaluate_log_hardy_group,
    hardy_constant, log_constant, vanishing_family_check, AngularChoice, CpArguments,
    CpFactorMode, GroupIdentityForm, IdentityReport, VanishingFamilyReport, WeightParams,
};
pub use quadrature::{
    integrate_cylindrical, integrate_cylindrical_channels, integrate_group,
    integrate_group_channels, IntegralResult, QuadratureSpec, Scheme,
};
pub use sharpness::{
    divergence_probe, sweep_hardy_constant, sweep_log_constant, DivergenceReport, ProbeFamily,
    SharpnessSweep, SweepSetting,
};
pub use spaces::{
    cylindrical_radial_term, weighted_divergence_check, CylindricalSpace, GroupStructure,
    NormKind, Point, StratifiedData,
};
pub use testfns::{
    make_annular_bump, make_extremizer, make_extremizer_with_width, make_gauge_bump,
    make_phase_modulated, random_cylindrical, random_group, with_angular, ExtremizerFamily,
    ExtremizerKind, Support, SupportKind, TestFunction,
};
