//! Doubly ruled surfaces swept by the lines of a unit pseudo-circle.

use super::chart::Point3;
use crate::scalar::Scalar;

/// Quadric of ℝ³ carrying the lines of a conformal-plane pseudo-circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuledQuadric<T> {
    /// `X₃² − 4aX₁² − 4aX₂² − 8bX₁X₂ + a² − b² = 0`, for the graphical plane
    /// `(α, β) = (−a·i, b)`.
    Hyperboloid { a: T, b: T },
    /// `sin θ·X₃ + 2(cos θ + cos φ)X₁² + 4 sin φ·X₁X₂ + 2(cos θ − cos φ)X₂² = 0`,
    /// for the non-graphical plane with angles `(θ, φ)`.
    Paraboloid { theta: T, phi: T },
}

impl<T: Scalar> RuledQuadric<T> {
    /// Left-hand side at `x`, divided by `max(1, |x|²)²`.
    pub fn residual(&self, x: Point3<T>) -> T {
        let [x1, x2, x3] = x;
        let (two, four) = (T::lit(2.0), T::lit(4.0));
        let lhs = match *self {
            Self::Hyperboloid { a, b } => {
                x3 * x3 - four * a * (x1 * x1 + x2 * x2) - T::lit(8.0) * b * x1 * x2 + a * a - b * b
            }
            Self::Paraboloid { theta, phi } => {
                let (ct, cp) = (theta.cos(), phi.cos());
                theta.sin() * x3 + two * (ct + cp) * x1 * x1 + four * phi.sin() * x1 * x2 + two * (ct - cp) * x2 * x2
            }
        };
        let n2 = (x1 * x1 + x2 * x2 + x3 * x3).max(T::one());
        lhs.abs() / (n2 * n2)
    }
}
