//! Quadrature of solutions over conjugate conics and the resulting
//! mean-value verdicts.
//!
//! Both curves of a pair have constant speed `|c|`, so `dl = |c|·dθ`.
//! Circles use the periodic trapezoid rule; hyperbola branches use the
//! trapezoid rule on `[−T, T]` with an extrapolated tail bound. All sums are
//! compensated and taken in node order.

use crate::conformal::ConformalMap;
use crate::conics::{Branch, ConicCurve, ConicKind, ConjugateConicPair, Side};
use crate::error::{Error, Result};
use crate::line_space::chart::{flat_to_line, FlatCoords, OrientedLine};
use crate::line_space::metric::omega_flat;
use crate::neutral::Vec4;
use crate::scalar::{CompensatedSum, Scalar};
use crate::solutions::UheSolution;

/// Floor in the denominator of [`relative_gap`].
pub const RELATIVE_GAP_FLOOR: f64 = 1e-30;

/// `|a − b| / max(|a|, |b|, 1e−30)`.
pub fn relative_gap<T: Scalar>(a: T, b: T) -> T {
    (a - b).abs() / a.abs().max(b.abs()).max(T::lit(RELATIVE_GAP_FLOOR))
}

/// Which hyperbola branches enter the integral of each side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BranchPolicy {
    Single(Branch),
    #[default]
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueSettings<T> {
    /// Trapezoid nodes per circle, or intervals per branch on `[−T, T]`.
    pub nodes: usize,
    /// Truncation `T` of the hyperbolic parameter range.
    pub truncation: T,
    pub branch_policy: BranchPolicy,
}

impl<T: Scalar> Default for MeanValueSettings<T> {
    fn default() -> Self {
        Self { nodes: 2048, truncation: T::lit(12.0), branch_policy: BranchPolicy::Both }
    }
}

impl<T: Scalar> MeanValueSettings<T> {
    fn validate(&self) -> Result<()> {
        if self.nodes < 2 {
            return Err(Error::InvalidArgument("at least two quadrature nodes are required"));
        }
        if !(self.truncation > T::zero()) || !self.truncation.is_finite() {
            return Err(Error::InvalidArgument("truncation must be positive and finite"));
        }
        Ok(())
    }
}

/// Description of the rule that produced a report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureInfo {
    pub kind: ConicKind,
    pub nodes: usize,
    /// `None` for circles.
    pub truncation: Option<f64>,
    /// `None` for circles.
    pub branch_policy: Option<BranchPolicy>,
}

/// Integral over one curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveIntegral<T> {
    /// Value under the requested branch policy.
    pub value: T,
    /// `[Plus, Minus]` branch values for hyperbolae.
    pub branches: Option<[T; 2]>,
    /// Estimated neglected tail mass for the requested branches.
    pub tail_bound: T,
}

/// Per-branch integrals of both sides, indexed `[Plus, Minus]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchIntegrals<T> {
    pub s: [T; 2],
    pub s_perp: [T; 2],
}

impl<T: Scalar> BranchIntegrals<T> {
    fn index(b: Branch) -> usize {
        match b {
            Branch::Plus => 0,
            Branch::Minus => 1,
        }
    }

    /// Relative gap between the `b` branches of `S` and `S⊥`.
    pub fn single_branch_gap(&self, b: Branch) -> T {
        let i = Self::index(b);
        relative_gap(self.s[i], self.s_perp[i])
    }

    /// Relative gap between the two-branch totals.
    pub fn two_branch_gap(&self) -> T {
        relative_gap(self.s[0] + self.s[1], self.s_perp[0] + self.s_perp[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanValueReport<T> {
    pub integral_s: T,
    pub integral_sperp: T,
    pub absolute_gap: T,
    pub relative_gap: T,
    pub quadrature: QuadratureInfo,
    /// Zero for circles.
    pub tail_bound: T,
    /// Present for hyperbolae whatever the branch policy.
    pub branch_integrals: Option<BranchIntegrals<T>>,
}

impl<T: Scalar> MeanValueReport<T> {
    fn assemble(s: CurveIntegral<T>, sp: CurveIntegral<T>, kind: ConicKind, settings: &MeanValueSettings<T>) -> Self {
        let hyperbolic = kind == ConicKind::Hyperbola;
        let branch_integrals = match (s.branches, sp.branches) {
            (Some(a), Some(b)) => Some(BranchIntegrals { s: a, s_perp: b }),
            _ => None,
        };
        Self {
            integral_s: s.value,
            integral_sperp: sp.value,
            absolute_gap: (s.value - sp.value).abs(),
            relative_gap: relative_gap(s.value, sp.value),
            quadrature: QuadratureInfo {
                kind,
                nodes: settings.nodes,
                truncation: hyperbolic.then(|| settings.truncation.to_f64_lossy()),
                branch_policy: hyperbolic.then_some(settings.branch_policy),
            },
            tail_bound: s.tail_bound + sp.tail_bound,
            branch_integrals,
        }
    }
}

/// Integrand callback: `(θ, branch, γ(θ), γ′(θ)) ↦` value including the line
/// element.
trait Integrand<T>: FnMut(T, Branch, Vec4<T>, Vec4<T>) -> Result<T> {}
impl<T, F: FnMut(T, Branch, Vec4<T>, Vec4<T>) -> Result<T>> Integrand<T> for F {}

fn periodic_trapezoid<T: Scalar>(curve: &ConicCurve<T>, n: usize, g: &mut impl Integrand<T>) -> Result<T> {
    let h = T::TAU() / T::lit(n as f64);
    let mut acc = CompensatedSum::new();
    for k in 0..n {
        let t = h * T::lit(k as f64);
        acc.add(g(t, Branch::Plus, curve.point(t, Branch::Plus), curve.velocity(t, Branch::Plus))?);
    }
    Ok(acc.value() * h)
}

/// Trapezoid rule on `[−T, T]` and the tail estimate `Σ_ends |g(±T)|/k`,
/// with the decay rate `k` fitted over the last quarter of each half-range.
fn branch_trapezoid<T: Scalar>(
    curve: &ConicCurve<T>,
    branch: Branch,
    n: usize,
    big_t: T,
    g: &mut impl Integrand<T>,
) -> Result<(T, T)> {
    let mut eval = |t: T| g(t, branch, curve.point(t, branch), curve.velocity(t, branch));
    let h = T::lit(2.0) * big_t / T::lit(n as f64);
    let half = T::lit(0.5);
    let mut acc = CompensatedSum::new();
    let mut ends = [T::zero(); 2];
    for k in 0..=n {
        let t = -big_t + h * T::lit(k as f64);
        let v = eval(t)?;
        if k == 0 || k == n {
            ends[usize::from(k == n)] = v;
            acc.add(v * half);
        } else {
            acc.add(v);
        }
    }
    let delta = big_t * T::lit(0.25);
    let mut tail = T::zero();
    for (end, sign) in ends.into_iter().zip([-T::one(), T::one()]) {
        let outer = end.abs();
        if outer == T::zero() {
            continue;
        }
        let inner = eval(sign * (big_t - delta))?.abs();
        if outer >= inner {
            return Err(Error::NonIntegrable { truncation: big_t.to_f64_lossy() });
        }
        let rate = (inner / outer).ln() / delta;
        tail += outer / rate;
    }
    Ok((acc.value() * h, tail))
}

fn integrate_curve<T: Scalar>(
    curve: &ConicCurve<T>,
    settings: &MeanValueSettings<T>,
    mut g: impl Integrand<T>,
) -> Result<CurveIntegral<T>> {
    settings.validate()?;
    match curve.kind {
        ConicKind::Circle => Ok(CurveIntegral {
            value: periodic_trapezoid(curve, settings.nodes, &mut g)?,
            branches: None,
            tail_bound: T::zero(),
        }),
        ConicKind::Hyperbola => {
            let (plus, tp) = branch_trapezoid(curve, Branch::Plus, settings.nodes, settings.truncation, &mut g)?;
            let (minus, tm) = branch_trapezoid(curve, Branch::Minus, settings.nodes, settings.truncation, &mut g)?;
            let (value, tail) = match settings.branch_policy {
                BranchPolicy::Single(Branch::Plus) => (plus, tp),
                BranchPolicy::Single(Branch::Minus) => (minus, tm),
                BranchPolicy::Both => (plus + minus, tp + tm),
            };
            // Estimates are doubled as a safety margin on the exponential fit.
            Ok(CurveIntegral { value, branches: Some([plus, minus]), tail_bound: tail * T::lit(2.0) })
        }
    }
}

fn eval_at<T: Scalar>(u: &UheSolution<T>, p: Vec4<T>) -> Result<T> {
    u.eval(p).map_err(|_| Error::EvaluationDomain(p.cast::<f64>().to_array()))
}

/// `∫ u dl` over one side of a definite pair with `n` periodic trapezoid nodes.
pub fn integrate_circle<T: Scalar>(
    u: &UheSolution<T>,
    pair: &ConjugateConicPair<T>,
    side: Side,
    n: usize,
) -> Result<T> {
    let curve = pair.curve(side);
    if curve.kind != ConicKind::Circle {
        return Err(Error::KindMismatch("integrate_circle needs a definite pair"));
    }
    let r = curve.radius();
    let settings = MeanValueSettings { nodes: n, ..Default::default() };
    Ok(integrate_curve(curve, &settings, |_, _, p, _| Ok(eval_at(u, p)? * r))?.value)
}

/// `∫ u dl` over one side of a hyperbolic pair truncated to `[−T, T]` per
/// branch. Returns the value under the branch policy together with the full
/// per-branch breakdown and tail bound.
pub fn integrate_hyperbola<T: Scalar>(
    u: &UheSolution<T>,
    pair: &ConjugateConicPair<T>,
    side: Side,
    settings: &MeanValueSettings<T>,
) -> Result<CurveIntegral<T>> {
    let curve = pair.curve(side);
    if curve.kind != ConicKind::Hyperbola {
        return Err(Error::KindMismatch("integrate_hyperbola needs a hyperbolic pair"));
    }
    let r = curve.radius();
    integrate_curve(curve, settings, |_, _, p, _| Ok(eval_at(u, p)? * r))
}

fn verify_with<T: Scalar>(
    pair: &ConjugateConicPair<T>,
    settings: &MeanValueSettings<T>,
    mut g: impl Integrand<T>,
) -> Result<MeanValueReport<T>> {
    let s = integrate_curve(&pair.s, settings, &mut g)?;
    let sp = integrate_curve(&pair.s_perp, settings, &mut g)?;
    Ok(MeanValueReport::assemble(s, sp, pair.conic_kind(), settings))
}

/// `∫_S u dl` against `∫_{S⊥} u dl`.
pub fn verify_pair<T: Scalar>(
    u: &UheSolution<T>,
    pair: &ConjugateConicPair<T>,
    settings: &MeanValueSettings<T>,
) -> Result<MeanValueReport<T>> {
    let r = pair.s.radius();
    verify_with(pair, settings, |_, _, p, _| Ok(eval_at(u, p)? * r))
}

/// The line-space form: `∫_S v dτ` against `∫_{S⊥} v dτ` for a line field
/// `v`, with `S, S⊥` given in flat coordinates and `dτ = dl/(2Ω)`.
pub fn verify_pair_line_space<T: Scalar>(
    v: impl Fn(OrientedLine<T>) -> Result<T>,
    pair: &ConjugateConicPair<T>,
    settings: &MeanValueSettings<T>,
) -> Result<MeanValueReport<T>> {
    let r = pair.s.radius();
    verify_with(pair, settings, |_, _, p, _| {
        let z = FlatCoords::from_vec4(p);
        let value = flat_to_line(z).and_then(&v).map_err(|_| Error::EvaluationDomain(p.cast::<f64>().to_array()))?;
        Ok(value * r / (T::lit(2.0) * omega_flat(z)))
    })
}

/// The two evaluations of `∫_{f(S)} u dl` and `∫_{f(S⊥)} u dl`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConformalInvarianceReport<T> {
    /// Line element `|d(f∘γ)/dθ|` from the differential of `f`.
    pub image: MeanValueReport<T>,
    /// Line element `Ω(γ)·|γ′|` from the conformal factor.
    pub pullback: MeanValueReport<T>,
    /// Largest relative difference between the routes over both sides.
    pub route_gap: T,
}

/// Mean-value check on the image pair `(f(S), f(S⊥))` of `source`.
pub fn verify_conformal_invariance<T: Scalar>(
    u: &UheSolution<T>,
    f: &ConformalMap<T>,
    source: &ConjugateConicPair<T>,
    settings: &MeanValueSettings<T>,
) -> Result<ConformalInvarianceReport<T>> {
    let pole = |t: T| {
        move |e: Error| match e {
            Error::PoleAt { .. } => Error::PoleOnCurve { parameter: t.to_f64_lossy() },
            other => other,
        }
    };
    let image = verify_with(source, settings, |t, _, p, v| {
        let fp = f.apply_finite(p).map_err(pole(t))?;
        let w = f.push_forward(p, v).map_err(pole(t))?;
        Ok(eval_at(u, fp)? * w.quadratic_form().abs().sqrt())
    })?;
    let pullback = verify_with(source, settings, |t, _, p, v| {
        let fp = f.apply_finite(p).map_err(pole(t))?;
        let omega = f.conformal_factor(p).map_err(pole(t))?;
        Ok(omega * eval_at(u, fp)? * v.quadratic_form().abs().sqrt())
    })?;
    let route_gap = relative_gap(image.integral_s, pullback.integral_s)
        .max(relative_gap(image.integral_sperp, pullback.integral_sperp));
    Ok(ConformalInvarianceReport { image, pullback, route_gap })
}
