//! Solutions of the ultra-hyperbolic equation and the X-ray transform family
//! that produces them.
//!
//! A line field `v(ξ, η)` solving the line-space Laplace equation becomes a
//! solution of `□u = 0` on ℝ^{2,2} through `u = v/Ω` in flat coordinates.
//! X-ray transforms of densities are such line fields.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::line_space::chart::{check_chart, flat_to_line, line_to_flat, phi_map, OrientedLine, Point3};
use crate::line_space::metric::{conformal_factor_omega, omega_flat, uhe_residual_normalized};
use crate::line_space::FlatCoords;
use crate::neutral::Vec4;
use crate::scalar::{CompensatedSum, Scalar};

/// Behaviour of a closed form outside the set where its radicand is positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Extension {
    /// Evaluation fails with [`Error::OutOfDomain`].
    #[default]
    Strict,
    /// The value is continued by zero.
    Zero,
}

/// Constant in front of the slab and k-ball closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Normalization {
    /// The length of the chord, which is what `∫_γ f dt` returns.
    #[default]
    ChordLength,
    /// Half the chord length: the constant as usually printed for the slab
    /// and the k-ball superposition.
    AsPrinted,
}

impl Normalization {
    fn factor<T: Scalar>(self) -> T {
        match self {
            Self::ChordLength => T::lit(2.0),
            Self::AsPrinted => T::one(),
        }
    }
}

/// Polynomial in `x₁, …, x₄` stored as sorted `(coefficient, exponents)` terms.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Polynomial<T> {
    terms: Vec<(T, [u32; 4])>,
}

impl<T: Scalar> Polynomial<T> {
    pub fn from_terms(terms: impl IntoIterator<Item = (T, [u32; 4])>) -> Self {
        let mut t: Vec<_> = terms.into_iter().collect();
        t.sort_by_key(|a| a.1);
        let mut out: Vec<(T, [u32; 4])> = Vec::with_capacity(t.len());
        for (c, e) in t {
            match out.last_mut() {
                Some(last) if last.1 == e => last.0 += c,
                _ => out.push((c, e)),
            }
        }
        out.retain(|(c, _)| *c != T::zero());
        Self { terms: out }
    }

    pub fn constant(c: T) -> Self {
        Self::from_terms([(c, [0; 4])])
    }

    /// `a·x + c` with the Euclidean dot product.
    pub fn linear(a: Vec4<T>, c: T) -> Self {
        let mut terms = vec![(c, [0; 4])];
        for i in 0..4 {
            let mut e = [0; 4];
            e[i] = 1;
            terms.push((a[i], e));
        }
        Self::from_terms(terms)
    }

    pub fn terms(&self) -> &[(T, [u32; 4])] {
        &self.terms
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, e)| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, k: T) -> Self {
        Self::from_terms(self.terms.iter().map(|(c, e)| (*c * k, *e)))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (c, e) in &self.terms {
            for (d, f) in &other.terms {
                out.push((*c * *d, [e[0] + f[0], e[1] + f[1], e[2] + f[2], e[3] + f[3]]));
            }
        }
        Self::from_terms(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(T::one()), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: Vec4<T>) -> T {
        let x = x.to_array();
        self.terms
            .iter()
            .map(|(c, e)| (0..4).fold(*c, |acc, i| acc * x[i].powi(e[i] as i32)))
            .collect::<CompensatedSum<T>>()
            .value()
    }

    /// `∂²/∂xᵢ²` applied termwise.
    fn second(&self, i: usize) -> Self {
        Self::from_terms(self.terms.iter().filter(|(_, e)| e[i] >= 2).map(|(c, e)| {
            let mut f = *e;
            f[i] -= 2;
            (*c * T::lit((e[i] * (e[i] - 1)) as f64), f)
        }))
    }

    /// The exact ultra-hyperbolic operator `□ = ∂₁² + ∂₂² − ∂₃² − ∂₄²`.
    pub fn ultra_hyperbolic(&self) -> Self {
        self.second(0).add(&self.second(1)).add(&self.second(2).scale(-T::one())).add(&self.second(3).scale(-T::one()))
    }
}

type FlatFn<T> = dyn Fn(Vec4<T>) -> Result<T> + Send + Sync;

/// A named real function on ℝ^{2,2} expected to satisfy `□u = 0`.
#[derive(Clone)]
pub struct UheSolution<T> {
    name: String,
    flat: Arc<FlatFn<T>>,
}

impl<T> fmt::Debug for UheSolution<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("UheSolution").field("name", &self.name).finish_non_exhaustive()
    }
}

impl<T: Scalar> UheSolution<T> {
    pub fn new(name: impl Into<String>, f: impl Fn(Vec4<T>) -> Result<T> + Send + Sync + 'static) -> Self {
        Self { name: name.into(), flat: Arc::new(f) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: Vec4<T>) -> Result<T> {
        (self.flat)(x)
    }

    /// The line field `Ω·u` at `l`.
    pub fn eval_line(&self, l: OrientedLine<T>) -> Result<T> {
        let z = line_to_flat(l)?;
        Ok(conformal_factor_omega(l)? * self.eval(z.to_vec4())?)
    }

    /// [`uhe_residual_normalized`] of this function at `x`.
    pub fn residual(&self, x: Vec4<T>, h: T) -> Result<T> {
        uhe_residual_normalized(|y| self.eval(y), x, h)
    }

    /// `u = v/Ω` for a line field `v`.
    pub fn from_line_field(
        name: impl Into<String>,
        v: impl Fn(OrientedLine<T>) -> Result<T> + Send + Sync + 'static,
    ) -> Self {
        Self::new(name, move |x| {
            let z = FlatCoords::from_vec4(x);
            Ok(v(flat_to_line(z)?)? / omega_flat(z))
        })
    }

    pub fn appendix_a(extension: Extension) -> Self {
        Self::new("appendix-a", move |x| match appendix_a_solution(x) {
            Err(Error::OutOfDomain) if extension == Extension::Zero => Ok(T::zero()),
            r => r,
        })
    }

    pub fn polynomial(p: Polynomial<T>) -> Self {
        Self::new("polynomial", move |x| Ok(p.eval(x)))
    }

    pub fn slab(d0: T, normalization: Normalization) -> Self {
        Self::from_line_field("slab", move |l| slab_solution(d0, l, normalization))
    }

    pub fn ball(r0: T) -> Self {
        Self::from_line_field("ball", move |l| ball_solution(r0, l))
    }

    pub fn kballs(balls: Vec<BallSpec<T>>, normalization: Normalization) -> Result<Self> {
        check_disjoint(&balls)?;
        Ok(Self::from_line_field("kballs", move |l| kball_solution(&balls, l, normalization)))
    }
}

/// Ball of radius `radius` centered at `center` with constant density.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSpec<T> {
    pub center: Point3<T>,
    pub radius: T,
    pub density: T,
}

type DensityFn<T> = dyn Fn(Point3<T>) -> T + Send + Sync;

/// A density on ℝ³.
#[derive(Clone)]
pub enum Density3<T> {
    /// Indicator of `|x₃| ≤ d0`.
    Slab {
        d0: T,
    },
    /// Indicator of `|x| ≤ r0`.
    Ball {
        r0: T,
    },
    /// `Σ d_j·1{|x − p_j| ≤ r_j}` over pairwise disjoint balls.
    Balls(Vec<BallSpec<T>>),
    Custom(Arc<DensityFn<T>>),
}

impl<T: fmt::Debug> fmt::Debug for Density3<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Slab { d0 } => f.debug_struct("Slab").field("d0", d0).finish(),
            Self::Ball { r0 } => f.debug_struct("Ball").field("r0", r0).finish(),
            Self::Balls(b) => f.debug_tuple("Balls").field(b).finish(),
            Self::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl<T: Scalar> Density3<T> {
    pub fn custom(f: impl Fn(Point3<T>) -> T + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(f))
    }

    /// Checks radii and, for several balls, disjointness.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Slab { d0: r } | Self::Ball { r0: r } if !(*r >= T::zero()) => {
                Err(Error::InvalidArgument("negative radius"))
            }
            Self::Balls(b) => check_disjoint(b),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, x: Point3<T>) -> T {
        let inside = |c: Point3<T>, r: T| {
            let d = [x[0] - c[0], x[1] - c[1], x[2] - c[2]];
            d[0] * d[0] + d[1] * d[1] + d[2] * d[2] <= r * r
        };
        let one = |b: bool| if b { T::one() } else { T::zero() };
        match self {
            Self::Slab { d0 } => one(x[2].abs() <= *d0),
            Self::Ball { r0 } => one(inside([T::zero(); 3], *r0)),
            Self::Balls(b) => b.iter().filter(|s| inside(s.center, s.radius)).map(|s| s.density).sum(),
            Self::Custom(f) => f(x),
        }
    }
}

fn check_disjoint<T: Scalar>(balls: &[BallSpec<T>]) -> Result<()> {
    for (i, a) in balls.iter().enumerate() {
        if !(a.radius >= T::zero()) {
            return Err(Error::InvalidArgument("negative radius"));
        }
        for (j, b) in balls.iter().enumerate().skip(i + 1) {
            let d: T = (0..3).map(|k| (a.center[k] - b.center[k]).powi(2)).sum::<T>().sqrt();
            if d < a.radius + b.radius {
                return Err(Error::OverlappingBalls(i, j));
            }
        }
    }
    Ok(())
}

/// The section `η_j(ξ)` of lines through a ball center and the indicator
/// `δ_j` of lines meeting the ball.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallSection<T> {
    pub center: Point3<T>,
    pub radius: T,
}

impl<T: Scalar> BallSection<T> {
    /// `η_j = ½(x¹ + ix² − 2x³ξ − (x¹ − ix²)ξ²)`.
    pub fn eta(&self, xi: Complex<T>) -> Complex<T> {
        OrientedLine::through_point(self.center, xi).eta
    }

    /// Squared Euclidean distance from the center to `l`:
    /// `4|η − η_j|²/(1 + |ξ|²)²`.
    pub fn square_distance(&self, l: OrientedLine<T>) -> T {
        let b = T::one() + l.xi.norm_sqr();
        T::lit(4.0) * (l.eta - self.eta(l.xi)).norm_sqr() / (b * b)
    }

    /// `δ_j`: `4|η − η_j|² ≤ (1 + |ξ|²)² r_j²`.
    pub fn indicator(&self, l: OrientedLine<T>) -> bool {
        self.square_distance(l) <= self.radius * self.radius
    }

    /// Half-chord `(r_j² − 4|η − η_j|²/(1 + |ξ|²)²)^{1/2}`, zero off the ball.
    pub fn half_chord(&self, l: OrientedLine<T>) -> T {
        if self.indicator(l) {
            (self.radius * self.radius - self.square_distance(l)).max(T::zero()).sqrt()
        } else {
            T::zero()
        }
    }
}

const INITIAL_PANELS: usize = 256;
const MAX_PANELS: usize = 1 << 20;

struct Panel<T> {
    a: T,
    b: T,
    fa: T,
    fm: T,
    fb: T,
    whole: T,
}

fn simpson<T: Scalar>(a: T, b: T, fa: T, fm: T, fb: T) -> T {
    (b - a) / T::lit(6.0) * (fa + T::lit(4.0) * fm + fb)
}

/// `∫ f(Φ(l, t)) dt` over `t ∈ [−truncation, truncation]`.
///
/// Adaptive Simpson on a global list of active panels: every pass bisects the
/// panels whose error estimate `|S₂ − S₁|/15` exceeds `tol/(active count)`.
/// The initial grid has 256 panels, so supports narrower than
/// `truncation/512` may be missed.
pub fn xray_numeric<T: Scalar>(f: &Density3<T>, l: OrientedLine<T>, truncation: T, tol: T) -> Result<T> {
    check_chart(l.xi)?;
    if !(truncation > T::zero()) || !(tol > T::zero()) {
        return Err(Error::InvalidArgument("truncation and tolerance must be positive"));
    }
    let g = |t: T| f.eval(phi_map(l, t));
    let half = T::lit(0.5);
    let width = truncation * T::lit(2.0) / T::lit(INITIAL_PANELS as f64);
    let min_width = truncation * T::epsilon() * T::lit(64.0);
    let mut active: Vec<Panel<T>> = (0..INITIAL_PANELS)
        .map(|k| {
            let a = -truncation + width * T::lit(k as f64);
            let b = a + width;
            let (fa, fm, fb) = (g(a), g((a + b) * half), g(b));
            Panel { a, b, fa, fm, fb, whole: simpson(a, b, fa, fm, fb) }
        })
        .collect();
    let mut acc = CompensatedSum::new();
    while !active.is_empty() {
        let local = tol / T::lit(active.len() as f64);
        let mut next = Vec::new();
        let mut pending = T::zero();
        for p in active {
            let m = (p.a + p.b) * half;
            let (f1, f2) = (g((p.a + m) * half), g((m + p.b) * half));
            let left = simpson(p.a, m, p.fa, f1, p.fm);
            let right = simpson(m, p.b, p.fm, f2, p.fb);
            let diff = left + right - p.whole;
            if diff.abs() <= T::lit(15.0) * local {
                acc.add(left + right + diff / T::lit(15.0));
            } else {
                pending += diff.abs() / T::lit(15.0);
                if p.b - p.a <= min_width {
                    return Err(Error::NonConvergent {
                        tolerance: tol.to_f64_lossy(),
                        estimate: pending.to_f64_lossy(),
                    });
                }
                next.push(Panel { a: p.a, b: m, fa: p.fa, fm: f1, fb: p.fm, whole: left });
                next.push(Panel { a: m, b: p.b, fa: p.fm, fm: f2, fb: p.fb, whole: right });
            }
        }
        if next.len() > MAX_PANELS {
            return Err(Error::NonConvergent { tolerance: tol.to_f64_lossy(), estimate: pending.to_f64_lossy() });
        }
        active = next;
    }
    Ok(acc.value())
}

/// X-ray transform of the slab `|x₃| ≤ d0`: `k·d0·(1 + |ξ|²)/(1 − |ξ|²)` with
/// `k = 2` for the chord length and `k = 1` as printed.
pub fn slab_solution<T: Scalar>(d0: T, l: OrientedLine<T>, normalization: Normalization) -> Result<T> {
    Ok(normalization.factor::<T>() * d0 * conformal_factor_omega(l)?)
}

/// X-ray transform of the ball `|x| ≤ r0`:
/// `2(r0² − 4|η|²/(1 + |ξ|²)²)^{1/2}`, zero when the line misses the ball.
pub fn ball_solution<T: Scalar>(r0: T, l: OrientedLine<T>) -> Result<T> {
    check_chart(l.xi)?;
    Ok(T::lit(2.0) * BallSection { center: [T::zero(); 3], radius: r0 }.half_chord(l))
}

/// `Σ k·d_j·δ_j·(r_j² − 4|η − η_j|²/(1 + |ξ|²)²)^{1/2}` with `k` from
/// `normalization`.
pub fn kball_solution<T: Scalar>(balls: &[BallSpec<T>], l: OrientedLine<T>, normalization: Normalization) -> Result<T> {
    check_chart(l.xi)?;
    check_disjoint(balls)?;
    let k = normalization.factor::<T>();
    Ok(balls
        .iter()
        .map(|s| k * s.density * BallSection { center: s.center, radius: s.radius }.half_chord(l))
        .collect::<CompensatedSum<T>>()
        .value())
}

/// `10⁶p − 4(x₁+x₃)² − 4(x₂+x₄)² − Q(x)²` and `p = 4 + (x₁−x₃)² + (x₂−x₄)²`.
pub fn appendix_a_radicand<T: Scalar>(x: Vec4<T>) -> (T, T) {
    let four = T::lit(4.0);
    let p = four + (x.x1 - x.x3).powi(2) + (x.x2 - x.x4).powi(2);
    let q = x.quadratic_form();
    let rad = T::lit(1e6) * p - four * (x.x1 + x.x3).powi(2) - four * (x.x2 + x.x4).powi(2) - q * q;
    (rad, p)
}

/// `√(10⁶p − 4(x₁+x₃)² − 4(x₂+x₄)² − Q(x)²)/p` where the radicand is positive.
pub fn appendix_a_solution<T: Scalar>(x: Vec4<T>) -> Result<T> {
    let (rad, p) = appendix_a_radicand(x);
    if rad > T::zero() {
        Ok(rad.sqrt() / p)
    } else {
        Err(Error::OutOfDomain)
    }
}
