//! The f32 instantiation runs the same pipeline at single-precision
//! tolerances.

use asgeirsson_core::line_space::{flat_to_line, line_to_flat};
use asgeirsson_core::{
    map_triple_to_standard, pair_from_three_points, verify_pair, Extension, FConicPair, FOrientedLine, FVec4,
    MeanValueSettings, UheSolution,
};
use num_complex::Complex;

#[test]
fn appendix_a_circle_in_f32() {
    let pair: FConicPair = pair_from_three_points(
        FVec4::new(8.0, 0.0, 0.0, 0.0),
        FVec4::new(7.0, 1.0, 0.0, 0.0),
        FVec4::new(6.0, 0.0, 0.0, 0.0),
    )
    .unwrap();
    assert_eq!(pair.square_radius, 1.0);
    let u = UheSolution::<f32>::appendix_a(Extension::Strict);
    let r = verify_pair(&u, &pair, &MeanValueSettings { nodes: 256, ..Default::default() }).unwrap();
    assert!(r.relative_gap < 1e-4, "{r:?}");
    assert!((r.integral_s - 866.20325).abs() < 0.05);
}

#[test]
fn chart_round_trip_in_f32() {
    let l = FOrientedLine::new(Complex::new(0.3, -0.4), Complex::new(1.5, 2.0));
    let m = flat_to_line(line_to_flat(l).unwrap()).unwrap();
    assert!((m.xi - l.xi).norm() < 1e-5 && (m.eta - l.eta).norm() < 1e-5);
}

#[test]
fn triple_map_in_f32() {
    let (q, q1, q2) = (FVec4::new(1.0, 2.0, 0.0, 0.0), FVec4::new(0.0, 0.0, 1.0, 3.0), FVec4::new(2.0, -1.0, 0.5, 0.0));
    let f = map_triple_to_standard(q, q1, q2).unwrap();
    assert!(f.apply_finite(q).unwrap().max_abs() < 1e-4);
    assert!((f.apply_finite(q2).unwrap() - FVec4::basis(0)).max_abs() < 1e-4);
    assert!(f.apply_finite(q1).is_err());
}
