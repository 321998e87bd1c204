//! The `(ξ, η)` chart of oriented lines, flat coordinates `(Z₁, Z₂)`,
//! Plücker coordinates and the map `Φ` back to points of ℝ³.
//!
//! A line with unit direction `d` (upward, `d₃ > 0`) has
//! `ξ = (d₁ + i d₂)/(1 + d₃)`, the stereographic image of `d`, and `η`
//! encodes its position. The chart covers `|ξ| < 1`; horizontal lines sit on
//! the equator `|ξ| = 1` and are excluded.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::neutral::Vec4;
use crate::scalar::Scalar;

/// A point of ℝ³.
pub type Point3<T> = [T; 3];

/// Oriented line in chart coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OrientedLine<T> {
    pub xi: Complex<T>,
    pub eta: Complex<T>,
}

/// Flat conformal coordinates `Z₁ = x₁ + i x₂`, `Z₂ = x₃ + i x₄`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FlatCoords<T> {
    pub z1: Complex<T>,
    pub z2: Complex<T>,
}

impl<T: Scalar> FlatCoords<T> {
    pub fn to_vec4(self) -> Vec4<T> {
        Vec4::new(self.z1.re, self.z1.im, self.z2.re, self.z2.im)
    }

    pub fn from_vec4(x: Vec4<T>) -> Self {
        Self { z1: Complex::new(x.x1, x.x2), z2: Complex::new(x.x3, x.x4) }
    }

    /// `Z₁Z̄₁ − Z₂Z̄₂ = Q(x)`.
    pub fn quadratic_form(self) -> T {
        self.z1.norm_sqr() - self.z2.norm_sqr()
    }
}

/// Plücker sextet `(p, q) = (s × t, s − t)` of the line through `s` and `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PluckerLine<T> {
    pub p: Point3<T>,
    pub q: Point3<T>,
}

impl<T: Scalar> PluckerLine<T> {
    /// `p·q`, zero for every genuine line.
    pub fn incidence(&self) -> T {
        self.p[0] * self.q[0] + self.p[1] * self.q[1] + self.p[2] * self.q[2]
    }
}

pub(crate) fn check_chart<T: Scalar>(xi: Complex<T>) -> Result<()> {
    let m = xi.norm();
    if m.is_finite() && m < T::one() - T::chart_margin() {
        Ok(())
    } else {
        Err(Error::OutOfChart { modulus: m.to_f64_lossy() })
    }
}

impl<T: Scalar> OrientedLine<T> {
    pub fn new(xi: Complex<T>, eta: Complex<T>) -> Self {
        Self { xi, eta }
    }

    /// Real coordinates `(Re ξ, Im ξ, Re η, Im η)`.
    pub fn to_array(self) -> [T; 4] {
        [self.xi.re, self.xi.im, self.eta.re, self.eta.im]
    }

    pub fn from_array(a: [T; 4]) -> Self {
        Self::new(Complex::new(a[0], a[1]), Complex::new(a[2], a[3]))
    }

    /// Unit direction `(2ξ/(1+|ξ|²), (1−|ξ|²)/(1+|ξ|²))`.
    pub fn direction(&self) -> Point3<T> {
        let a = self.xi.norm_sqr();
        let k = T::lit(2.0) / (T::one() + a);
        [self.xi.re * k, self.xi.im * k, (T::one() - a) / (T::one() + a)]
    }

    /// The line with direction `ξ` through the point `x`:
    /// `η = ½(x₁ + i x₂ − 2x₃ξ − (x₁ − i x₂)ξ²)`.
    pub fn through_point(x: Point3<T>, xi: Complex<T>) -> Self {
        let w = Complex::new(x[0], x[1]);
        let half = T::lit(0.5);
        let eta = (w - xi * (x[2] * T::lit(2.0)) - w.conj() * xi * xi) * half;
        Self::new(xi, eta)
    }

    /// The line through `x` with direction `d` (any length, `d₃ > 0`).
    pub fn from_point_direction(x: Point3<T>, d: Point3<T>) -> Result<Self> {
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n == T::zero() || !n.is_finite() {
            return Err(Error::CoincidentPoints);
        }
        let den = n + d[2];
        if den <= T::zero() {
            return Err(Error::OutOfChart { modulus: f64::INFINITY });
        }
        let xi = Complex::new(d[0] / den, d[1] / den);
        check_chart(xi)?;
        Ok(Self::through_point(x, xi))
    }

    /// The line through `s` and `t`, oriented upward.
    pub fn through_points(s: Point3<T>, t: Point3<T>) -> Result<Self> {
        let mut d = [t[0] - s[0], t[1] - s[1], t[2] - s[2]];
        if d[2] < T::zero() {
            d = d.map(|c| -c);
        }
        let n = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        if n == T::zero() {
            return Err(Error::CoincidentPoints);
        }
        if d[2] <= T::chart_margin() * n {
            return Err(Error::HorizontalLine);
        }
        Self::from_point_direction(s, d)
    }
}

/// `Z₁,₂ = 2/(1 − |ξ|⁴)·(η + ξ²η̄ ∓ i(1 + |ξ|²)ξ)`.
pub fn line_to_flat<T: Scalar>(l: OrientedLine<T>) -> Result<FlatCoords<T>> {
    check_chart(l.xi)?;
    let a = l.xi.norm_sqr();
    let k = T::lit(2.0) / (T::one() - a * a);
    let base = l.eta + l.xi * l.xi * l.eta.conj();
    let twist = Complex::new(T::zero(), T::one() + a) * l.xi;
    Ok(FlatCoords { z1: (base - twist) * k, z2: (base + twist) * k })
}

/// Inverse of [`line_to_flat`].
///
/// With `D = Z₁ − Z₂` and `m = 2 + √(4 + |D|²)`:
/// `ξ = iD/m`, `η = (Z₁ + Z₂)/m + D(|Z₁|² − |Z₂|²)/(2m²)`.
/// The other root `2 − √(4 + |D|²)` of the quadratic for `ξ` gives the
/// antipodal direction `−1/ξ̄`, which lies outside the chart.
pub fn flat_to_line<T: Scalar>(z: FlatCoords<T>) -> Result<OrientedLine<T>> {
    let d = z.z1 - z.z2;
    let two = T::lit(2.0);
    let m = two + (T::lit(4.0) + d.norm_sqr()).sqrt();
    let xi = Complex::new(-d.im, d.re) / m;
    check_chart(xi)?;
    let eta = (z.z1 + z.z2) / m + d * (z.quadratic_form() / (two * m * m));
    Ok(OrientedLine::new(xi, eta))
}

/// `p = s × t`, `q = s − t`.
pub fn plucker_from_points<T: Scalar>(s: Point3<T>, t: Point3<T>) -> Result<PluckerLine<T>> {
    let q = [s[0] - t[0], s[1] - t[1], s[2] - t[2]];
    if q.iter().all(|c| *c == T::zero()) {
        return Err(Error::CoincidentPoints);
    }
    let p = [s[1] * t[2] - t[1] * s[2], s[2] * t[0] - t[2] * s[0], s[0] * t[1] - t[0] * s[1]];
    Ok(PluckerLine { p, q })
}

/// `x = ((p₂+q₂)/q₃, (−p₁−q₁)/q₃, (p₂−q₂)/q₃, (−p₁+q₁)/q₃)`.
pub fn plucker_to_flat<T: Scalar>(pl: PluckerLine<T>) -> Result<Vec4<T>> {
    let [p1, p2, _] = pl.p;
    let [q1, q2, q3] = pl.q;
    let qn = (q1 * q1 + q2 * q2 + q3 * q3).sqrt();
    if q3.abs() <= T::chart_margin() * qn {
        return Err(Error::HorizontalLine);
    }
    Ok(Vec4::new((p2 + q2) / q3, (-p1 - q1) / q3, (p2 - q2) / q3, (-p1 + q1) / q3))
}

/// The point of `l` at signed arc length `r` from the foot of the
/// perpendicular from the origin:
/// `X₁ + iX₂ = 2(η − ξ²η̄)/(1+|ξ|²)² + 2rξ/(1+|ξ|²)`,
/// `X₃ = −2(ξ̄η + ξη̄)/(1+|ξ|²)² + r(1−|ξ|²)/(1+|ξ|²)`.
pub fn phi_map<T: Scalar>(l: OrientedLine<T>, r: T) -> Point3<T> {
    let two = T::lit(2.0);
    let a = l.xi.norm_sqr();
    let b = T::one() + a;
    let w = (l.eta - l.xi * l.xi * l.eta.conj()) * (two / (b * b)) + l.xi * (two * r / b);
    let x3 = -two * two * (l.xi.conj() * l.eta).re / (b * b) + r * (T::one() - a) / b;
    [w.re, w.im, x3]
}
