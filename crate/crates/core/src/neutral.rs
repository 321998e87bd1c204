//! Linear algebra of the neutral space ℝ^{2,2}.
//!
//! The quadratic form is `Q(x) = x1² + x2² − x3² − x4²` and `⟨·,·⟩` is its
//! polarization. Null decisions are scale-aware: a value `q` is null when
//! `|q| ≤ ε·max(1, scale)` with `ε = Scalar::null_eps()`.

use std::ops::{Add, AddAssign, Div, Index, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Point or vector of ℝ^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec4<T> {
    pub x1: T,
    pub x2: T,
    pub x3: T,
    pub x4: T,
}

impl<T: Scalar> Vec4<T> {
    pub const fn new(x1: T, x2: T, x3: T, x4: T) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    /// Standard basis vector `e_{i+1}` for `i` in `0..4`.
    pub fn basis(i: usize) -> Self {
        let mut a = [T::zero(); 4];
        a[i] = T::one();
        Self::from_array(a)
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [T; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    /// `Q(self)`.
    #[inline]
    pub fn quadratic_form(self) -> T {
        self.x1 * self.x1 + self.x2 * self.x2 - self.x3 * self.x3 - self.x4 * self.x4
    }

    /// `⟨self, other⟩`.
    #[inline]
    pub fn inner(self, other: Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2 - self.x3 * other.x3 - self.x4 * other.x4
    }

    /// Euclidean dot product of the coordinate tuples.
    #[inline]
    pub fn dot(self, other: Self) -> T {
        self.x1 * other.x1 + self.x2 * other.x2 + self.x3 * other.x3 + self.x4 * other.x4
    }

    #[inline]
    pub fn norm_sq(self) -> T {
        self.dot(self)
    }

    #[inline]
    pub fn norm(self) -> T {
        self.norm_sq().sqrt()
    }

    /// Index lowering by `I^{2,2} = diag(1, 1, −1, −1)`.
    #[inline]
    pub fn lowered(self) -> Self {
        Self::new(self.x1, self.x2, -self.x3, -self.x4)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite() && self.x4.is_finite()
    }

    pub fn max_abs(self) -> T {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs()).max(self.x4.abs())
    }

    pub fn cast<U: Scalar>(self) -> Vec4<U> {
        Vec4::new(
            U::lit(self.x1.to_f64_lossy()),
            U::lit(self.x2.to_f64_lossy()),
            U::lit(self.x3.to_f64_lossy()),
            U::lit(self.x4.to_f64_lossy()),
        )
    }
}

impl<T: Scalar> Index<usize> for Vec4<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        match i {
            0 => &self.x1,
            1 => &self.x2,
            2 => &self.x3,
            3 => &self.x4,
            _ => panic!("Vec4 index {i} out of range"),
        }
    }
}

impl<T: Scalar> Add for Vec4<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3, self.x4 + o.x4)
    }
}

impl<T: Scalar> AddAssign for Vec4<T> {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl<T: Scalar> Sub for Vec4<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3, self.x4 - o.x4)
    }
}

impl<T: Scalar> SubAssign for Vec4<T> {
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl<T: Scalar> Neg for Vec4<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl<T: Scalar> Mul<T> for Vec4<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x1 * k, self.x2 * k, self.x3 * k, self.x4 * k)
    }
}

impl<T: Scalar> Div<T> for Vec4<T> {
    type Output = Self;
    fn div(self, k: T) -> Self {
        Self::new(self.x1 / k, self.x2 / k, self.x3 / k, self.x4 / k)
    }
}

/// `Q(x)`.
pub fn quadratic_form<T: Scalar>(x: Vec4<T>) -> T {
    x.quadratic_form()
}

/// `⟨x, y⟩`.
pub fn inner<T: Scalar>(x: Vec4<T>, y: Vec4<T>) -> T {
    x.inner(y)
}

/// Whether a quadratic-form value is null relative to `scale`.
#[inline]
pub(crate) fn is_null<T: Scalar>(q: T, scale: T) -> bool {
    q.abs() <= T::null_eps() * scale.max(T::one())
}

/// `p` and `q` are skew when their separation is not null.
pub fn are_skew<T: Scalar>(p: Vec4<T>, q: Vec4<T>) -> bool {
    !is_null((q - p).quadratic_form(), p.norm_sq() + q.norm_sq())
}

/// Dense 4×4 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4<T> {
    pub rows: [[T; 4]; 4],
}

impl<T: Scalar> Mat4<T> {
    pub fn identity() -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = T::one();
        }
        Self { rows }
    }

    /// `I^{2,2}`.
    pub fn signature() -> Self {
        let mut m = Self::identity();
        m.rows[2][2] = -T::one();
        m.rows[3][3] = -T::one();
        m
    }

    pub fn from_columns(cols: [Vec4<T>; 4]) -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (j, c) in cols.iter().enumerate() {
            for (i, row) in rows.iter_mut().enumerate() {
                row[j] = c[i];
            }
        }
        Self { rows }
    }

    pub fn column(&self, j: usize) -> Vec4<T> {
        Vec4::new(self.rows[0][j], self.rows[1][j], self.rows[2][j], self.rows[3][j])
    }

    pub fn transpose(&self) -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = self.rows[j][i];
            }
        }
        Self { rows }
    }

    pub fn mul_vec(&self, v: Vec4<T>) -> Vec4<T> {
        let a = v.to_array();
        let mut out = [T::zero(); 4];
        for (o, row) in out.iter_mut().zip(&self.rows) {
            *o = row.iter().zip(&a).map(|(&m, &x)| m * x).sum();
        }
        Vec4::from_array(out)
    }

    pub fn mul_mat(&self, other: &Self) -> Self {
        let mut rows = [[T::zero(); 4]; 4];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (0..4).map(|k| self.rows[i][k] * other.rows[k][j]).sum();
            }
        }
        Self { rows }
    }

    /// Rotation by `angle` in the coordinate plane `(i, j)`, both indices in
    /// the same signature block (`{0,1}` or `{2,3}`).
    pub fn rotation(i: usize, j: usize, angle: T) -> Self {
        let mut m = Self::identity();
        let (s, c) = angle.sin_cos();
        m.rows[i][i] = c;
        m.rows[j][j] = c;
        m.rows[i][j] = -s;
        m.rows[j][i] = s;
        m
    }

    /// Boost with `rapidity` mixing a positive index `i ∈ {0,1}` with a
    /// negative index `j ∈ {2,3}`.
    pub fn boost(i: usize, j: usize, rapidity: T) -> Self {
        let mut m = Self::identity();
        let (c, s) = (rapidity.cosh(), rapidity.sinh());
        m.rows[i][i] = c;
        m.rows[j][j] = c;
        m.rows[i][j] = s;
        m.rows[j][i] = s;
        m
    }

    /// Inverse of a pseudo-orthogonal matrix: `I Mᵀ I`.
    pub fn pseudo_orthogonal_inverse(&self) -> Self {
        let s = Self::signature();
        s.mul_mat(&self.transpose()).mul_mat(&s)
    }

    /// Largest entry of `|Mᵀ I M − I|`.
    pub fn pseudo_orthogonality_defect(&self) -> T {
        let s = Self::signature();
        let g = self.transpose().mul_mat(&s).mul_mat(self);
        let mut worst = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((g.rows[i][j] - s.rows[i][j]).abs());
            }
        }
        worst
    }
}

/// Metric type of a 2-plane (the six cases of the restricted form).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneKind {
    PositiveDefinite,
    NegativeDefinite,
    Hyperbolic,
    PositiveParabolic,
    NegativeParabolic,
    TotallyNull,
}

impl PlaneKind {
    pub fn is_degenerate(self) -> bool {
        !matches!(self, Self::PositiveDefinite | Self::NegativeDefinite | Self::Hyperbolic)
    }

    pub fn is_definite(self) -> bool {
        matches!(self, Self::PositiveDefinite | Self::NegativeDefinite)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::PositiveDefinite => "positive definite",
            Self::NegativeDefinite => "negative definite",
            Self::Hyperbolic => "hyperbolic",
            Self::PositiveParabolic => "positive parabolic",
            Self::NegativeParabolic => "negative parabolic",
            Self::TotallyNull => "totally null",
        }
    }
}

/// Affine plane `origin + span{u, v}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneFrame<T> {
    pub origin: Vec4<T>,
    pub u: Vec4<T>,
    pub v: Vec4<T>,
}

impl<T: Scalar> PlaneFrame<T> {
    pub fn new(origin: Vec4<T>, u: Vec4<T>, v: Vec4<T>) -> Self {
        Self { origin, u, v }
    }

    /// Plane through the origin spanned by two standard basis vectors.
    pub fn coordinate(i: usize, j: usize) -> Self {
        Self::new(Vec4::zero(), Vec4::basis(i), Vec4::basis(j))
    }

    pub fn at(mut self, origin: Vec4<T>) -> Self {
        self.origin = origin;
        self
    }

    pub fn point(&self, s: T, t: T) -> Vec4<T> {
        self.origin + self.u * s + self.v * t
    }

    /// Restricted Gram matrix `[[⟨u,u⟩, ⟨u,v⟩], [⟨u,v⟩, ⟨v,v⟩]]`.
    pub fn gram(&self) -> [[T; 2]; 2] {
        let uv = self.u.inner(self.v);
        [[self.u.quadratic_form(), uv], [uv, self.v.quadratic_form()]]
    }

    pub fn kind(&self) -> Result<PlaneKind> {
        classify_plane(self)
    }

    /// Whether `d` is ⟨,⟩-orthogonal to both spanning directions (relative test).
    pub fn is_orthogonal_to(&self, d: Vec4<T>, tol: T) -> bool {
        let scale_u = (self.u.norm() * d.norm()).max(T::min_positive_value());
        let scale_v = (self.v.norm() * d.norm()).max(T::min_positive_value());
        (self.u.inner(d) / scale_u).abs() <= tol && (self.v.inner(d) / scale_v).abs() <= tol
    }

    /// Whether `d` lies in the linear span of the directions (relative test).
    pub fn contains_direction(&self, d: Vec4<T>, tol: T) -> bool {
        let [e1, e2] = euclidean_orthonormal_pair(self.u, self.v);
        let r = d - e1 * d.dot(e1) - e2 * d.dot(e2);
        r.norm() <= tol * d.norm().max(T::one())
    }
}

fn independent<T: Scalar>(u: Vec4<T>, v: Vec4<T>) -> bool {
    let uu = u.norm_sq();
    let vv = v.norm_sq();
    let uv = u.dot(v);
    let cross = uu * vv - uv * uv;
    uu > T::zero() && vv > T::zero() && cross > T::null_eps() * uu * vv
}

fn euclidean_orthonormal_pair<T: Scalar>(u: Vec4<T>, v: Vec4<T>) -> [Vec4<T>; 2] {
    let e1 = u / u.norm();
    let w = v - e1 * v.dot(e1);
    [e1, w / w.norm()]
}

/// Eigen-sign count `(positive, negative)` of a symmetric 2×2 matrix.
fn inertia<T: Scalar>(g: [[T; 2]; 2]) -> (usize, usize) {
    let half = T::lit(0.5);
    let mean = (g[0][0] + g[1][1]) * half;
    let diff = (g[0][0] - g[1][1]) * half;
    let rad = (diff * diff + g[0][1] * g[0][1]).sqrt();
    let eps = T::null_eps();
    [mean + rad, mean - rad].iter().fold((0, 0), |(p, n), &l| {
        if l > eps {
            (p + 1, n)
        } else if l < -eps {
            (p, n + 1)
        } else {
            (p, n)
        }
    })
}

/// Classifies a plane by the eigen-signs of its restricted Gram matrix.
///
/// The spanning directions are Euclidean-normalized first so the rank
/// threshold does not depend on their length.
pub fn classify_plane<T: Scalar>(plane: &PlaneFrame<T>) -> Result<PlaneKind> {
    if !independent(plane.u, plane.v) {
        return Err(Error::DependentSpan);
    }
    let unit = PlaneFrame::new(plane.origin, plane.u / plane.u.norm(), plane.v / plane.v.norm());
    Ok(match inertia(unit.gram()) {
        (2, 0) => PlaneKind::PositiveDefinite,
        (0, 2) => PlaneKind::NegativeDefinite,
        (1, 1) => PlaneKind::Hyperbolic,
        (1, 0) => PlaneKind::PositiveParabolic,
        (0, 1) => PlaneKind::NegativeParabolic,
        _ => PlaneKind::TotallyNull,
    })
}

/// Frame of `origin + (span{u,v})^⊥`.
///
/// The complement is the Euclidean complement of the lowered directions
/// `I u, I v`; its basis is drawn from projected standard basis vectors, so
/// coordinate planes map to coordinate planes.
pub fn orthocomplement_plane<T: Scalar>(plane: &PlaneFrame<T>) -> Result<PlaneFrame<T>> {
    let kind = classify_plane(plane)?;
    if kind.is_degenerate() {
        return Err(Error::DegeneratePlane(kind.name()));
    }
    let mut accepted = euclidean_orthonormal_pair(plane.u.lowered(), plane.v.lowered()).to_vec();
    let mut found = Vec::with_capacity(2);
    for _ in 0..2 {
        let mut best: Option<(T, Vec4<T>)> = None;
        for i in 0..4 {
            let mut r = Vec4::basis(i);
            for a in &accepted {
                r -= *a * r.dot(*a);
            }
            let n = r.norm();
            if best.is_none_or(|(bn, _)| n > bn) {
                best = Some((n, r));
            }
        }
        let (n, r) = best.expect("four candidates");
        let w = r / n;
        accepted.push(w);
        found.push(w);
    }
    Ok(PlaneFrame::new(plane.origin, found[0], found[1]))
}

/// Result of the three-point center construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreePointCenter<T> {
    pub origin: Vec4<T>,
    pub square_radius: T,
    /// Affine plane of the three points, anchored at `origin`.
    pub plane: PlaneFrame<T>,
}

/// The unique point `O` of the plane through `q0, q1, q2` with
/// `Q(O − q0) = Q(O − q1) = Q(O − q2)`.
///
/// Writing `O = q0 + s·u + t·v` with `u = q1 − q0`, `v = q2 − q0`, the two
/// bisector conditions are `⟨O − q0, u⟩ = Q(u)/2` and `⟨O − q0, v⟩ = Q(v)/2`,
/// a 2×2 system whose matrix is the restricted Gram matrix.
pub fn center_of_three<T: Scalar>(q0: Vec4<T>, q1: Vec4<T>, q2: Vec4<T>) -> Result<ThreePointCenter<T>> {
    let pts = [q0, q1, q2];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !are_skew(pts[i], pts[j]) {
            return Err(Error::NotSkew(i, j));
        }
    }
    let u = q1 - q0;
    let v = q2 - q0;
    if !independent(u, v) {
        return Err(Error::CollinearPoints);
    }
    let frame = PlaneFrame::new(q0, u, v);
    let kind = classify_plane(&frame)?;
    if kind.is_degenerate() {
        return Err(Error::DegeneratePlane(kind.name()));
    }
    let [[a, b], [_, d]] = frame.gram();
    let half = T::lit(0.5);
    let (r1, r2) = (u.quadratic_form() * half, v.quadratic_form() * half);
    let det = a * d - b * b;
    let s = (r1 * d - b * r2) / det;
    let t = (a * r2 - b * r1) / det;
    let w = u * s + v * t;
    let origin = q0 + w;
    Ok(ThreePointCenter { origin, square_radius: w.quadratic_form(), plane: frame.at(origin) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type V = Vec4<f64>;

    fn v(a: f64, b: f64, c: f64, d: f64) -> V {
        Vec4::new(a, b, c, d)
    }

    #[test]
    fn quadratic_form_examples() {
        assert_eq!(quadratic_form(v(1.0, 0.0, 0.0, 0.0)), 1.0);
        assert_eq!(quadratic_form(v(1.0, 1.0, 1.0, 1.0)), 0.0);
        assert_eq!(quadratic_form(v(8.0, 0.0, 0.0, 0.0) - v(7.0, 0.0, 0.0, 0.0)), 1.0);
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(v(1.0, 0.0, 0.0, 0.0), v(0.0, 0.0, 1.0, 0.0)), 0.0);
        assert_eq!(inner(v(1.0, 0.0, 1.0, 0.0), v(1.0, 0.0, 1.0, 0.0)), 0.0);
        assert_eq!(inner(v(2.0, 0.0, 0.0, 0.0), v(3.0, 0.0, 0.0, 0.0)), 6.0);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify_plane(&PlaneFrame::<f64>::coordinate(0, 1)).unwrap(), PlaneKind::PositiveDefinite);
        assert_eq!(classify_plane(&PlaneFrame::<f64>::coordinate(0, 2)).unwrap(), PlaneKind::Hyperbolic);
        assert_eq!(classify_plane(&PlaneFrame::<f64>::coordinate(2, 3)).unwrap(), PlaneKind::NegativeDefinite);
        // Gram [[0,0],[0,1]]: one zero and one positive eigenvalue.
        let par = PlaneFrame::new(V::zero(), v(1.0, 0.0, 1.0, 0.0), v(0.0, 1.0, 0.0, 0.0));
        assert_eq!(classify_plane(&par).unwrap(), PlaneKind::PositiveParabolic);
        let npar = PlaneFrame::new(V::zero(), v(1.0, 0.0, 1.0, 0.0), v(0.0, 0.0, 0.0, 1.0));
        assert_eq!(classify_plane(&npar).unwrap(), PlaneKind::NegativeParabolic);
        let null = PlaneFrame::new(V::zero(), v(1.0, 0.0, 1.0, 0.0), v(0.0, 1.0, 0.0, 1.0));
        assert_eq!(classify_plane(&null).unwrap(), PlaneKind::TotallyNull);
        let dep = PlaneFrame::new(V::zero(), v(1.0, 2.0, 0.0, 0.0), v(2.0, 4.0, 0.0, 0.0));
        assert_eq!(classify_plane(&dep), Err(Error::DependentSpan));
    }

    #[test]
    fn orthocomplement_examples() {
        let o = V::zero();
        let c = orthocomplement_plane(&PlaneFrame::coordinate(0, 1)).unwrap();
        assert_eq!((c.origin, c.u, c.v), (o, V::basis(2), V::basis(3)));
        let c = orthocomplement_plane(&PlaneFrame::coordinate(0, 2)).unwrap();
        assert_eq!((c.u, c.v), (V::basis(1), V::basis(3)));
        let at = v(7.0, 0.0, 0.0, 0.0);
        let c = orthocomplement_plane(&PlaneFrame::coordinate(0, 1).at(at)).unwrap();
        assert_eq!((c.origin, c.u, c.v), (at, V::basis(2), V::basis(3)));
    }

    #[test]
    fn orthocomplement_rejects_degenerate() {
        let par = PlaneFrame::new(V::zero(), v(1.0, 0.0, 1.0, 0.0), v(0.0, 1.0, 0.0, 0.0));
        assert!(matches!(orthocomplement_plane(&par), Err(Error::DegeneratePlane(_))));
    }

    #[test]
    fn skew_examples() {
        assert!(are_skew(V::zero(), v(1.0, 0.0, 0.0, 0.0)));
        assert!(!are_skew(V::zero(), v(1.0, 0.0, 1.0, 0.0)));
        let s3 = 3f64.sqrt();
        assert!(are_skew(v(8.0, 0.0, 0.0, 0.0), v(9.0, 0.0, s3, 0.0)));
        assert!(((v(9.0, 0.0, s3, 0.0) - v(8.0, 0.0, 0.0, 0.0)).quadratic_form() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn center_of_three_examples() {
        let c = center_of_three(v(8.0, 0.0, 0.0, 0.0), v(7.0, 1.0, 0.0, 0.0), v(6.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(c.origin, v(7.0, 0.0, 0.0, 0.0));
        assert_eq!(c.square_radius, 1.0);

        let s3 = 3f64.sqrt();
        let c = center_of_three(v(8.0, 0.0, 0.0, 0.0), v(6.0, 0.0, 0.0, 0.0), v(9.0, 0.0, s3, 0.0)).unwrap();
        assert!((c.origin - v(7.0, 0.0, 0.0, 0.0)).max_abs() < 1e-14);
        assert!((c.square_radius - 1.0).abs() < 1e-14);
        assert_eq!(c.plane.kind().unwrap(), PlaneKind::Hyperbolic);

        let c = center_of_three(v(1.0, 0.0, 0.0, 0.0), v(0.0, 1.0, 0.0, 0.0), v(-1.0, 0.0, 0.0, 0.0)).unwrap();
        assert!(c.origin.max_abs() < 1e-15);
        assert!((c.square_radius - 1.0).abs() < 1e-15);
    }

    #[test]
    fn center_of_three_errors() {
        let o = V::zero();
        assert_eq!(center_of_three(o, v(1.0, 0.0, 1.0, 0.0), v(2.0, 0.0, 0.0, 0.0)), Err(Error::NotSkew(0, 1)));
        assert_eq!(center_of_three(o, v(1.0, 0.0, 0.0, 0.0), v(2.0, 0.0, 0.0, 0.0)), Err(Error::CollinearPoints));
        // Spans {e1 + e3, e2}: parabolic, pairwise skew.
        let r = center_of_three(o, v(1.0, 0.0, 1.0, 0.0) * 2.0 + v(0.0, 1.0, 0.0, 0.0), v(0.0, 2.0, 0.0, 0.0));
        assert!(matches!(r, Err(Error::DegeneratePlane(_))));
    }

    #[test]
    fn works_in_single_precision() {
        let c = center_of_three(
            Vec4::<f32>::new(8.0, 0.0, 0.0, 0.0),
            Vec4::new(7.0, 1.0, 0.0, 0.0),
            Vec4::new(6.0, 0.0, 0.0, 0.0),
        )
        .unwrap();
        assert!((c.origin - Vec4::new(7.0, 0.0, 0.0, 0.0)).max_abs() < 1e-5);
        assert_eq!(classify_plane(&PlaneFrame::<f32>::coordinate(1, 3)).unwrap(), PlaneKind::Hyperbolic);
    }

    #[test]
    fn pseudo_orthogonal_inverse_of_boost() {
        let (ch, sh) = (1.3f64.cosh(), 1.3f64.sinh());
        let mut m = Mat4::identity();
        m.rows[0][0] = ch;
        m.rows[0][2] = sh;
        m.rows[2][0] = sh;
        m.rows[2][2] = ch;
        assert!(m.pseudo_orthogonality_defect() < 1e-14);
        let id = m.mul_mat(&m.pseudo_orthogonal_inverse());
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.rows[i][j] - want).abs() < 1e-13);
            }
        }
    }

    fn arb_vec(r: f64) -> impl Strategy<Value = V> {
        prop::array::uniform4(-r..r).prop_map(Vec4::from_array)
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_bilinear(x in arb_vec(10.0), y in arb_vec(10.0), z in arb_vec(10.0),
                                       a in -5.0..5.0f64, b in -5.0..5.0f64) {
            prop_assert_eq!(x.inner(y), y.inner(x));
            prop_assert_eq!(x.inner(x), x.quadratic_form());
            let lhs = (x * a + y * b).inner(z);
            let rhs = a * x.inner(z) + b * y.inner(z);
            let scale = (a.abs() * x.norm() + b.abs() * y.norm()) * z.norm();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0));
        }

        #[test]
        fn classification_is_basis_invariant(u in arb_vec(3.0), w in arb_vec(3.0),
                                             m in prop::array::uniform4(-2.0..2.0f64)) {
            let det = m[0] * m[3] - m[1] * m[2];
            prop_assume!(det.abs() > 0.2);
            let p = PlaneFrame::new(V::zero(), u, w);
            let Ok(kind) = classify_plane(&p) else { return Ok(()) };
            let g = p.gram();
            prop_assume!((g[0][0] * g[1][1] - g[0][1] * g[0][1]).abs() > 1e-3);
            let q = PlaneFrame::new(V::zero(), u * m[0] + w * m[1], u * m[2] + w * m[3]);
            prop_assert_eq!(classify_plane(&q).unwrap(), kind);
        }

        #[test]
        fn orthocomplement_is_an_involution(u in arb_vec(3.0), w in arb_vec(3.0), o in arb_vec(5.0)) {
            let p = PlaneFrame::new(o, u, w);
            let Ok(kind) = classify_plane(&p) else { return Ok(()) };
            prop_assume!(!kind.is_degenerate());
            let g = PlaneFrame::new(o, u / u.norm(), w / w.norm()).gram();
            prop_assume!((g[0][0] * g[1][1] - g[0][1] * g[0][1]).abs() > 1e-3);
            let c = orthocomplement_plane(&p).unwrap();
            prop_assert_eq!(c.origin, o);
            prop_assert!(p.is_orthogonal_to(c.u, 1e-12) && p.is_orthogonal_to(c.v, 1e-12));
            let cc = orthocomplement_plane(&c).unwrap();
            prop_assert!(cc.contains_direction(u, 1e-9) && cc.contains_direction(w, 1e-9));
        }

        #[test]
        fn center_is_equidistant(q0 in arb_vec(10.0), q1 in arb_vec(10.0), q2 in arb_vec(10.0)) {
            let Ok(c) = center_of_three(q0, q1, q2) else { return Ok(()) };
            let g = PlaneFrame::new(q0, (q1 - q0) / (q1 - q0).norm(), (q2 - q0) / (q2 - q0).norm()).gram();
            prop_assume!((g[0][0] * g[1][1] - g[0][1] * g[0][1]).abs() > 1e-3);
            let d: Vec<f64> = [q0, q1, q2].iter().map(|&q| (c.origin - q).quadratic_form()).collect();
            let scale = d.iter().fold(c.square_radius.abs(), |m, x| m.max(x.abs())).max(1.0);
            for x in d {
                prop_assert!((x - c.square_radius).abs() <= 1e-9 * scale);
            }
        }
    }
}
