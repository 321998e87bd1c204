//! Oriented lines of ℝ³ as the neutral 4-manifold `TS²`.

pub mod chart;
pub mod metric;
pub mod planes;
pub mod ruled;

pub use chart::{
    flat_to_line, line_to_flat, phi_map, plucker_from_points, plucker_to_flat, FlatCoords, OrientedLine, PluckerLine,
    Point3,
};
pub use metric::{
    conformal_factor_omega, laplacian_g_flat, laplacian_g_residual, metric_g, metric_matrix, omega_flat,
    uhe_residual_flat, uhe_residual_normalized, DEFAULT_STEP,
};
pub use planes::{
    graphical_pseudo_circle, induced_gram, square_distance, GraphicalPlane, LinearEquation, NonGraphicalPlane,
    PlaneSignature,
};
pub use ruled::RuledQuadric;
