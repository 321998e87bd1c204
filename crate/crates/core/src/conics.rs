//! Conjugate conic pairs: a pseudo-circle `S` of square radius `c²` in a
//! non-degenerate plane `π` and the pseudo-circle `S⊥` of square radius `−c²`
//! in `π⊥`, both centered at `O`.

use crate::error::{Error, Result};
use crate::neutral::{center_of_three, classify_plane, orthocomplement_plane, PlaneFrame, PlaneKind, Vec4};
use crate::scalar::Scalar;

/// Circle for definite planes, hyperbola for hyperbolic ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConicKind {
    Circle,
    Hyperbola,
}

/// Member of a conjugate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    S,
    SPerp,
}

/// Hyperbola branch: sign in front of the `cosh` term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

impl Branch {
    pub const BOTH: [Branch; 2] = [Branch::Plus, Branch::Minus];

    fn sign<T: Scalar>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// A sampled point together with its curve parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicPoint<T> {
    pub parameter: T,
    /// `None` on circles.
    pub branch: Option<Branch>,
    pub point: Vec4<T>,
}

/// One parametrized pseudo-circle.
///
/// Circle: `O + r(cos θ·major + sin θ·minor)`, `θ ∈ [0, 2π)`.
/// Hyperbola: `O + r(±cosh θ·major + sinh θ·minor)`, `θ ∈ ℝ`, where
/// `Q(major) = sign(square_radius)` and `Q(minor) = −Q(major)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConicCurve<T> {
    pub center: Vec4<T>,
    pub square_radius: T,
    pub major: Vec4<T>,
    pub minor: Vec4<T>,
    pub kind: ConicKind,
}

impl<T: Scalar> ConicCurve<T> {
    /// `r = √|c²|`; also the constant speed `|dγ/dθ|`.
    pub fn radius(&self) -> T {
        self.square_radius.abs().sqrt()
    }

    pub fn point(&self, theta: T, branch: Branch) -> Vec4<T> {
        let r = self.radius();
        match self.kind {
            ConicKind::Circle => self.center + (self.major * theta.cos() + self.minor * theta.sin()) * r,
            ConicKind::Hyperbola => {
                self.center + (self.major * (branch.sign::<T>() * theta.cosh()) + self.minor * theta.sinh()) * r
            }
        }
    }

    /// `dγ/dθ`.
    pub fn velocity(&self, theta: T, branch: Branch) -> Vec4<T> {
        let r = self.radius();
        match self.kind {
            ConicKind::Circle => (self.minor * theta.cos() - self.major * theta.sin()) * r,
            ConicKind::Hyperbola => (self.major * (branch.sign::<T>() * theta.sinh()) + self.minor * theta.cosh()) * r,
        }
    }

    pub fn sample(&self, theta: T, branch: Branch) -> ConicPoint<T> {
        ConicPoint {
            parameter: theta,
            branch: (self.kind == ConicKind::Hyperbola).then_some(branch),
            point: self.point(theta, branch),
        }
    }

    /// `|Q(p − O) − c²|` relative to `max(1, |c²|)`.
    pub fn membership_residual(&self, p: Vec4<T>) -> T {
        ((p - self.center).quadratic_form() - self.square_radius).abs() / self.square_radius.abs().max(T::one())
    }
}

/// A non-degenerate conjugate pair `(S, S⊥)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConjugateConicPair<T> {
    pub center: Vec4<T>,
    pub square_radius: T,
    pub plane: PlaneFrame<T>,
    pub kind: PlaneKind,
    /// ⟨,⟩-orthonormal frame of `π` (`|Q| = 1`, mutually orthogonal).
    pub frame: [Vec4<T>; 2],
    /// ⟨,⟩-orthonormal frame of `π⊥`.
    pub perp_frame: [Vec4<T>; 2],
    pub s: ConicCurve<T>,
    pub s_perp: ConicCurve<T>,
}

impl<T: Scalar> ConjugateConicPair<T> {
    pub fn conic_kind(&self) -> ConicKind {
        self.s.kind
    }

    pub fn curve(&self, side: Side) -> &ConicCurve<T> {
        match side {
            Side::S => &self.s,
            Side::SPerp => &self.s_perp,
        }
    }

    /// The pair `(S₀, S₀⊥)`: unit circles in `span{e₁,e₂}` and `span{e₃,e₄}`.
    pub fn standard() -> Self {
        build_pair(Vec4::zero(), PlaneFrame::coordinate(0, 1), T::one()).expect("standard pair")
    }

    /// The hyperbolic pair with `S = {(±cosh θ, 0, sinh θ, 0)}` in
    /// `span{e₁,e₃}` and `S⊥` of square radius `−1` in `span{e₂,e₄}`.
    pub fn standard_hyperbolic() -> Self {
        build_pair(Vec4::zero(), PlaneFrame::coordinate(0, 2), T::one()).expect("standard hyperbolic pair")
    }
}

/// Pseudo-orthonormal frame of a non-degenerate plane.
///
/// Pivots on the direction of larger `|Q|`; a null pivot (possible only in a
/// hyperbolic plane) is replaced by `u ± v`.
fn pseudo_orthonormalize<T: Scalar>(u: Vec4<T>, v: Vec4<T>) -> Result<[Vec4<T>; 2]> {
    let (u, v) = (u / u.norm(), v / v.norm());
    let (mut a, mut b) = if u.quadratic_form().abs() >= v.quadratic_form().abs() { (u, v) } else { (v, u) };
    if a.quadratic_form().abs() <= T::null_eps() {
        let (p, m) = (u + v, u - v);
        let (pq, mq) = (p.quadratic_form().abs() / p.norm_sq(), m.quadratic_form().abs() / m.norm_sq());
        a = if pq >= mq { p } else { m };
        a = a / a.norm();
        b = if pq >= mq { u } else { v };
    }
    let qa = a.quadratic_form();
    if qa.abs() <= T::null_eps() {
        return Err(Error::DegeneratePlane("null pivot"));
    }
    let e1 = a / qa.abs().sqrt();
    let rem = b - e1 * (b.inner(e1) / e1.quadratic_form());
    let qr = rem.quadratic_form();
    if qr.abs() <= T::null_eps() * rem.norm_sq().max(T::min_positive_value()) || rem.norm() <= T::null_eps() {
        return Err(Error::DegeneratePlane("null remainder"));
    }
    Ok([e1, rem / qr.abs().sqrt()])
}

fn make_curve<T: Scalar>(center: Vec4<T>, c2: T, frame: [Vec4<T>; 2], kind: PlaneKind) -> Result<ConicCurve<T>> {
    let [a, b] = frame;
    match kind {
        PlaneKind::PositiveDefinite | PlaneKind::NegativeDefinite => {
            let plane_sign = if kind == PlaneKind::PositiveDefinite { T::one() } else { -T::one() };
            if c2 * plane_sign < T::zero() {
                return Err(Error::EmptyConic(kind.name()));
            }
            Ok(ConicCurve { center, square_radius: c2, major: a, minor: b, kind: ConicKind::Circle })
        }
        PlaneKind::Hyperbolic => {
            let (major, minor) = if (a.quadratic_form() > T::zero()) == (c2 > T::zero()) { (a, b) } else { (b, a) };
            Ok(ConicCurve { center, square_radius: c2, major, minor, kind: ConicKind::Hyperbola })
        }
        other => Err(Error::DegeneratePlane(other.name())),
    }
}

/// Builds the pair centered at `center` in the plane with directions
/// `plane.u, plane.v` (the frame origin is ignored) and square radius `c2`.
pub fn build_pair<T: Scalar>(center: Vec4<T>, plane: PlaneFrame<T>, c2: T) -> Result<ConjugateConicPair<T>> {
    let plane = plane.at(center);
    let kind = classify_plane(&plane)?;
    if kind.is_degenerate() {
        return Err(Error::DegeneratePlane(kind.name()));
    }
    if c2 == T::zero() || !c2.is_finite() {
        return Err(Error::ZeroRadius);
    }
    let perp = orthocomplement_plane(&plane)?;
    let perp_kind = classify_plane(&perp)?;
    let frame = pseudo_orthonormalize(plane.u, plane.v)?;
    let perp_frame = pseudo_orthonormalize(perp.u, perp.v)?;
    let s = make_curve(center, c2, frame, kind)?;
    let s_perp = make_curve(center, -c2, perp_frame, perp_kind)?;
    Ok(ConjugateConicPair { center, square_radius: c2, plane, kind, frame, perp_frame, s, s_perp })
}

/// The pair whose `S` passes through three pairwise skew points.
///
/// The plane frame starts at `q − O`, so `S` passes through `q` at `θ = 0`
/// (on the `Plus` branch for hyperbolae).
pub fn pair_from_three_points<T: Scalar>(q: Vec4<T>, q1: Vec4<T>, q2: Vec4<T>) -> Result<ConjugateConicPair<T>> {
    let c = center_of_three(q, q1, q2)?;
    let o = c.origin;
    let u = q - o;
    let independence = |w: Vec4<T>| {
        let (uu, ww, uw) = (u.norm_sq(), w.norm_sq(), u.dot(w));
        (uu * ww - uw * uw) / (uu * ww).max(T::min_positive_value())
    };
    let (w1, w2) = (q1 - o, q2 - o);
    let v = if independence(w1) >= independence(w2) { w1 } else { w2 };
    build_pair(o, PlaneFrame::new(o, u, v), c.square_radius)
}

/// `max_i |Q(p − qᵢ)|`, normalized by `max(1, max_i |p − qᵢ|²)`.
pub fn nullity_residual<T: Scalar>(p: Vec4<T>, q: Vec4<T>, q1: Vec4<T>, q2: Vec4<T>) -> T {
    let mut worst = T::zero();
    let mut scale = T::one();
    for qi in [q, q1, q2] {
        let d = p - qi;
        worst = worst.max(d.quadratic_form().abs());
        scale = scale.max(d.norm_sq());
    }
    worst / scale
}

/// `dl = |c|·dθ` on both curves of the pair.
pub fn line_element_factor<T: Scalar>(pair: &ConjugateConicPair<T>) -> T {
    pair.square_radius.abs().sqrt()
}
