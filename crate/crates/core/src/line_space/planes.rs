//! Conformal planes of line space: images of 2-planes of ℝ^{2,2} through
//! the origin under [`flat_to_line`](super::chart::flat_to_line).
//!
//! A graphical plane is a section `ξ ↦ η(ξ)`; a non-graphical plane
//! projects to a curve of directions and is parametrized by `(u, v)`.

use num_complex::Complex;

use super::chart::{check_chart, line_to_flat, FlatCoords, OrientedLine};
use super::metric::metric_g;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `η = (αξ + βξ̄ − ᾱξ²ξ̄ − β̄ξ³)/(1 − |ξ|²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphicalPlane<T> {
    pub alpha: Complex<T>,
    pub beta: Complex<T>,
}

/// `ξ = u·i·e^{i(θ+φ)/2}`, `η = 2Hiv(1 − u²e^{2iθ})/(1 − u⁴)·e^{−i(θ−φ)/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonGraphicalPlane<T> {
    pub theta: T,
    pub phi: T,
    pub h: T,
}

/// Metric type read off the sign of the induced determinant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PlaneSignature {
    Definite,
    Indefinite,
    Degenerate,
}

fn signature_of<T: Scalar>(d: T, scale: T) -> PlaneSignature {
    if d.abs() <= T::null_eps() * scale.max(T::one()) {
        PlaneSignature::Degenerate
    } else if d > T::zero() {
        PlaneSignature::Definite
    } else {
        PlaneSignature::Indefinite
    }
}

impl<T: Scalar> GraphicalPlane<T> {
    pub fn new(alpha: Complex<T>, beta: Complex<T>) -> Self {
        Self { alpha, beta }
    }

    /// The plane with `α = −a·i`, `β = b`, for which the square distance is
    /// `16R²(a + b sin 2θ)/(1 − R²)²` at `ξ = Re^{iθ}`.
    pub fn standard(a: T, b: T) -> Self {
        Self::new(Complex::new(T::zero(), -a), Complex::new(b, T::zero()))
    }

    /// The plane whose flat image is `α₁Z₁ + β₁Z̄₁ + α₂Z₂ + β₂Z̄₂ = 0`.
    ///
    /// With `N = |β₁+β₂|² − |α₁+α₂|²`:
    /// `α = i(−(α₁−α₂)·conj(α₁+α₂) + (β₁+β₂)·conj(β₁−β₂))/N`,
    /// `β = −2i(ᾱ₁β₂ − ᾱ₂β₁)/N`.
    pub fn from_linear_equation(coeffs: LinearEquation<T>) -> Result<Self> {
        let LinearEquation { a1, b1, a2, b2 } = coeffs;
        let den = (b1 + b2).norm_sqr() - (a1 + a2).norm_sqr();
        let scale = (a1.norm_sqr() + a2.norm_sqr() + b1.norm_sqr() + b2.norm_sqr()).max(T::min_positive_value());
        if den.abs() <= T::null_eps() * scale {
            return Err(Error::InvalidArgument("linear equation does not define a graphical plane"));
        }
        let i = Complex::new(T::zero(), T::one());
        let alpha = i * (-(a1 - a2) * (a1 + a2).conj() + (b1 + b2) * (b1 - b2).conj()) / den;
        let beta = -i * (a1.conj() * b2 - a2.conj() * b1) * T::lit(2.0) / den;
        Ok(Self::new(alpha, beta))
    }

    pub fn section(&self, xi: Complex<T>) -> Result<OrientedLine<T>> {
        check_chart(xi)?;
        let a = xi.norm_sqr();
        let (al, be) = (self.alpha, self.beta);
        let eta =
            (al * xi + be * xi.conj() - al.conj() * xi * xi * xi.conj() - be.conj() * xi * xi * xi) / (T::one() - a);
        Ok(OrientedLine::new(xi, eta))
    }

    /// `(ᾱ, −β)`.
    pub fn conjugate(&self) -> Self {
        Self::new(self.alpha.conj(), -self.beta)
    }

    /// Determinant of `𝔾` restricted to the plane in the coordinates
    /// `(Re ξ, Im ξ)`: `4(−(α − ᾱ)² − 4|β|²)/(1 − |ξ|⁴)²`.
    pub fn metric_determinant(&self, xi: Complex<T>) -> Result<T> {
        check_chart(xi)?;
        let d = self.alpha - self.alpha.conj();
        let a = xi.norm_sqr();
        let one_minus = T::one() - a * a;
        Ok(T::lit(4.0) * (-(d * d).re - T::lit(4.0) * self.beta.norm_sqr()) / (one_minus * one_minus))
    }

    /// Definite iff `Im(α)² > |β|²`, indefinite iff `Im(α)² < |β|²`.
    pub fn signature(&self) -> PlaneSignature {
        let im2 = self.alpha.im * self.alpha.im;
        signature_of(im2 - self.beta.norm_sqr(), im2 + self.beta.norm_sqr())
    }
}

/// Coefficients of `α₁Z₁ + β₁Z̄₁ + α₂Z₂ + β₂Z̄₂ = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearEquation<T> {
    pub a1: Complex<T>,
    pub b1: Complex<T>,
    pub a2: Complex<T>,
    pub b2: Complex<T>,
}

impl<T: Scalar> LinearEquation<T> {
    /// `|α₁Z₁ + β₁Z̄₁ + α₂Z₂ + β₂Z̄₂| / max(1, |Z₁| + |Z₂|)`.
    pub fn residual(&self, z: FlatCoords<T>) -> T {
        let v = self.a1 * z.z1 + self.b1 * z.z1.conj() + self.a2 * z.z2 + self.b2 * z.z2.conj();
        v.norm() / (z.z1.norm() + z.z2.norm()).max(T::one())
    }
}

impl<T: Scalar> NonGraphicalPlane<T> {
    pub fn new(theta: T, phi: T, h: T) -> Self {
        Self { theta, phi, h }
    }

    pub fn point(&self, u: T, v: T) -> Result<OrientedLine<T>> {
        if !(u.abs() < T::one() - T::chart_margin()) {
            return Err(Error::OutOfChart { modulus: u.abs().to_f64_lossy() });
        }
        let half = T::lit(0.5);
        let i = Complex::new(T::zero(), T::one());
        let xi = i * Complex::from_polar(u, (self.theta + self.phi) * half);
        let u2 = u * u;
        let num = Complex::new(T::one(), T::zero()) - Complex::from_polar(u2, T::lit(2.0) * self.theta);
        let eta = i
            * num
            * (T::lit(2.0) * self.h * v / (T::one() - u2 * u2))
            * Complex::from_polar(T::one(), -(self.theta - self.phi) * half);
        Ok(OrientedLine::new(xi, eta))
    }

    /// `(−θ, φ, −H/(1 − 2H cos θ))`.
    pub fn conjugate(&self) -> Result<Self> {
        let den = T::one() - T::lit(2.0) * self.h * self.theta.cos();
        if den.abs() <= T::null_eps() * (T::one() + self.h.abs()) {
            return Err(Error::SingularConjugate);
        }
        Ok(Self::new(-self.theta, self.phi, -self.h / den))
    }

    /// Determinant of `𝔾` restricted to the plane in the coordinates
    /// `(u, v)`: `4H²(e^{iθ} − e^{−iθ})²/((1+u²)²(1−u⁴)²)
    /// = −16H² sin²θ/((1+u²)²(1−u⁴)²)`.
    pub fn metric_determinant(&self, u: T) -> Result<T> {
        if !(u.abs() < T::one() - T::chart_margin()) {
            return Err(Error::OutOfChart { modulus: u.abs().to_f64_lossy() });
        }
        let u2 = u * u;
        let s = self.theta.sin();
        let den = (T::one() + u2) * (T::one() - u2 * u2);
        Ok(-T::lit(16.0) * self.h * self.h * s * s / (den * den))
    }

    /// Non-degenerate iff `θ ∉ {0, π}`; then always indefinite.
    pub fn signature(&self) -> PlaneSignature {
        let s = self.theta.sin();
        signature_of(-s * s, T::one())
    }

    /// Point of the unit pseudo-circle of square radius `sigma = ±1`:
    /// the square distance at `(u, v)` is `32Huv sin θ/((1+u²)(1−u²)²)`,
    /// so `v = σ(1+u²)(1−u²)²/(32Hu sin θ)`. `u` ranges over
    /// `(−1, 0) ∪ (0, 1)`, one interval per branch.
    pub fn pseudo_circle(&self, sigma: T, u: T) -> Result<OrientedLine<T>> {
        let s = self.theta.sin();
        if u == T::zero() || s.abs() <= T::null_eps() || self.h == T::zero() {
            return Err(Error::InvalidArgument("pseudo-circle parameter u must be nonzero on a non-degenerate plane"));
        }
        let u2 = u * u;
        let one_minus = T::one() - u2;
        let v = sigma * (T::one() + u2) * one_minus * one_minus / (T::lit(32.0) * self.h * u * s);
        self.point(u, v)
    }
}

/// Point of the unit pseudo-circle of square radius `sigma = ±1` on the
/// graphical plane `(α, β) = (−a·i, b)` in direction `θ`:
/// `ξ = Re^{iθ}` with `R = √(4κ + 1) − 2√κ`, `κ = σ(a + b sin 2θ)`.
/// `None` where `κ ≤ 0`, i.e. where the ray misses the curve.
pub fn graphical_pseudo_circle<T: Scalar>(a: T, b: T, sigma: T, theta: T) -> Option<OrientedLine<T>> {
    let kappa = sigma * (a + b * (T::lit(2.0) * theta).sin());
    if !(kappa > T::zero()) {
        return None;
    }
    let r = (T::lit(4.0) * kappa + T::one()).sqrt() - T::lit(2.0) * kappa.sqrt();
    GraphicalPlane::standard(a, b).section(Complex::from_polar(r, theta)).ok()
}

/// 2×2 Gram matrix of `𝔾` along a two-parameter family of lines, from
/// central-difference tangents with step `h`.
pub fn induced_gram<T: Scalar>(
    family: impl Fn([T; 2]) -> Result<OrientedLine<T>>,
    at: [T; 2],
    h: T,
) -> Result<[[T; 2]; 2]> {
    let mut tangents = [[T::zero(); 4]; 2];
    for (i, t) in tangents.iter_mut().enumerate() {
        let mut up = at;
        up[i] += h;
        let mut down = at;
        down[i] -= h;
        let (a, b) = (family(up)?.to_array(), family(down)?.to_array());
        for k in 0..4 {
            t[k] = (a[k] - b[k]) / (h + h);
        }
    }
    let l = family(at)?;
    let mut g = [[T::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            g[i][j] = metric_g(l, tangents[i], tangents[j])?;
        }
    }
    Ok(g)
}

/// `Z₁Z̄₁ − Z₂Z̄₂` of the flat image of `l`.
pub fn square_distance<T: Scalar>(l: OrientedLine<T>) -> Result<T> {
    Ok(line_to_flat(l)?.quadratic_form())
}
