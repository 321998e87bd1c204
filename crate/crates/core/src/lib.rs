//! Neutral-signature geometry of oriented lines and numerical checks of the
//! Asgeirsson mean-value identity for the ultra-hyperbolic equation.

// Negated comparisons reject NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod conformal;
pub mod conics;
pub mod error;
mod fd;
pub mod line_space;
pub mod meanvalue;
pub mod neutral;
pub mod scalar;
pub mod solutions;

pub use conformal::{map_pair_to_pair, map_triple_to_standard, ConformalGenerator, ConformalMap, ExtendedPoint};
pub use conics::{
    build_pair, line_element_factor, nullity_residual, pair_from_three_points, Branch, ConicCurve, ConicKind,
    ConicPoint, ConjugateConicPair, Side,
};
pub use error::{Error, Result};
pub use meanvalue::{
    integrate_circle, integrate_hyperbola, relative_gap, verify_conformal_invariance, verify_pair,
    verify_pair_line_space, BranchIntegrals, BranchPolicy, ConformalInvarianceReport, CurveIntegral, MeanValueReport,
    MeanValueSettings, QuadratureInfo,
};
pub use neutral::{
    are_skew, center_of_three, classify_plane, inner, orthocomplement_plane, quadratic_form, Mat4, PlaneFrame,
    PlaneKind, ThreePointCenter, Vec4,
};
pub use scalar::{CompensatedSum, Scalar};
pub use solutions::{
    appendix_a_solution, ball_solution, kball_solution, slab_solution, xray_numeric, BallSection, BallSpec, Density3,
    Extension, Normalization, Polynomial, UheSolution,
};

/// Double-precision instantiations.
pub type DVec4 = Vec4<f64>;
pub type DMat4 = Mat4<f64>;
pub type DConicPair = ConjugateConicPair<f64>;
pub type DConformalMap = ConformalMap<f64>;
pub type DOrientedLine = line_space::OrientedLine<f64>;

/// Single-precision instantiations.
pub type FVec4 = Vec4<f32>;
pub type FMat4 = Mat4<f32>;
pub type FConicPair = ConjugateConicPair<f32>;
pub type FConformalMap = ConformalMap<f32>;
pub type FOrientedLine = line_space::OrientedLine<f32>;
