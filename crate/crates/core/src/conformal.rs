//! Conformal transformations of ℝ^{2,2} ∪ C_∞ built from generators.
//!
//! The cone at infinity has no coordinates here: it is tracked only as the
//! symbol [`ExtendedPoint::Infinity`], which inversions absorb and emit.

use crate::conics::{Branch, ConicKind, ConjugateConicPair};
use crate::error::{Error, Result};
use crate::neutral::{are_skew, is_null, Mat4, Vec4};
use crate::scalar::Scalar;

/// A point of the conformal compactification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint<T> {
    Finite(Vec4<T>),
    Infinity,
}

impl<T: Scalar> ExtendedPoint<T> {
    pub fn finite(self) -> Option<Vec4<T>> {
        match self {
            Self::Finite(p) => Some(p),
            Self::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Self::Infinity)
    }
}

impl<T> From<Vec4<T>> for ExtendedPoint<T> {
    fn from(p: Vec4<T>) -> Self {
        Self::Finite(p)
    }
}

/// Elementary conformal transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConformalGenerator<T> {
    /// `x ↦ x + t`.
    Translation(Vec4<T>),
    /// `x ↦ λx`, `λ ≠ 0`.
    Dilation(T),
    /// `x ↦ Mx` with `Mᵀ I M = I`.
    PseudoOrthogonal(Mat4<T>),
    /// `(a, b, c, d) ↦ (c, d, a, b)`; reverses the sign of the metric.
    AntiOrthogonalSwap,
    /// `x ↦ c + k(x − c)/Q(x − c)`, `k ≠ 0`.
    Inversion { center: Vec4<T>, k: T },
    /// Transversion `J ∘ T_{−b} ∘ J` with `J(x) = x/Q(x)`:
    /// `x ↦ (x − b·Q(x)) / (1 − 2⟨b,x⟩ + Q(b)Q(x))`. Finite on the null cone
    /// of the origin, where a literal `J` stage would pass through infinity.
    SpecialConformal(Vec4<T>),
}

fn swap<T: Scalar>(x: Vec4<T>) -> Vec4<T> {
    Vec4::new(x.x3, x.x4, x.x1, x.x2)
}

fn transversion_denominator<T: Scalar>(b: Vec4<T>, x: Vec4<T>) -> T {
    T::one() - T::lit(2.0) * b.inner(x) + b.quadratic_form() * x.quadratic_form()
}

impl<T: Scalar> ConformalGenerator<T> {
    /// Checked constructor for the pseudo-orthogonal generator.
    pub fn pseudo_orthogonal(m: Mat4<T>) -> Result<Self> {
        let scale = m.rows.iter().flatten().fold(T::one(), |a, &x| a.max(x.abs()));
        if m.pseudo_orthogonality_defect() > T::null_eps() * scale * scale {
            return Err(Error::InvalidArgument("matrix is not pseudo-orthogonal"));
        }
        Ok(Self::PseudoOrthogonal(m))
    }

    pub fn apply(&self, p: ExtendedPoint<T>) -> ExtendedPoint<T> {
        use ExtendedPoint::*;
        match (*self, p) {
            (Self::Inversion { center, .. }, Infinity) => Finite(center),
            (Self::SpecialConformal(b), Infinity) => {
                let qb = b.quadratic_form();
                if is_null(qb, b.norm_sq()) {
                    Infinity
                } else {
                    Finite(-b / qb)
                }
            }
            (_, Infinity) => Infinity,
            (Self::Translation(t), Finite(x)) => Finite(x + t),
            (Self::Dilation(l), Finite(x)) => Finite(x * l),
            (Self::PseudoOrthogonal(m), Finite(x)) => Finite(m.mul_vec(x)),
            (Self::AntiOrthogonalSwap, Finite(x)) => Finite(swap(x)),
            (Self::Inversion { center, k }, Finite(x)) => {
                let d = x - center;
                let q = d.quadratic_form();
                if is_null(q, d.norm_sq()) {
                    Infinity
                } else {
                    Finite(center + d * (k / q))
                }
            }
            (Self::SpecialConformal(b), Finite(x)) => {
                let den = transversion_denominator(b, x);
                let scale = T::one() + b.norm() * x.norm();
                if is_null(den, scale * scale) {
                    Infinity
                } else {
                    Finite((x - b * x.quadratic_form()) / den)
                }
            }
        }
    }

    /// Differential at the finite point `x` applied to the tangent vector `v`.
    pub fn push_forward(&self, x: Vec4<T>, v: Vec4<T>) -> Vec4<T> {
        match *self {
            Self::Translation(_) => v,
            Self::Dilation(l) => v * l,
            Self::PseudoOrthogonal(m) => m.mul_vec(v),
            Self::AntiOrthogonalSwap => swap(v),
            Self::Inversion { center, k } => {
                let d = x - center;
                let q = d.quadratic_form();
                (v / q - d * (T::lit(2.0) * d.inner(v) / (q * q))) * k
            }
            Self::SpecialConformal(b) => {
                let two = T::lit(2.0);
                let den = transversion_denominator(b, x);
                let num = x - b * x.quadratic_form();
                let dnum = v - b * (two * x.inner(v));
                let dden = two * (b.quadratic_form() * x.inner(v) - b.inner(v));
                dnum / den - num * (dden / (den * den))
            }
        }
    }

    /// Local scale `Ω` with `f*g = ±Ω² g` at the finite point `x`.
    pub fn factor(&self, x: Vec4<T>) -> T {
        match *self {
            Self::Dilation(l) => l.abs(),
            Self::Inversion { center, k } => k.abs() / (x - center).quadratic_form().abs(),
            Self::SpecialConformal(b) => transversion_denominator(b, x).abs().recip(),
            _ => T::one(),
        }
    }

    /// `−1` for the swap, which pulls `g` back to `−g`.
    pub fn metric_sign(&self) -> T {
        match self {
            Self::AntiOrthogonalSwap => -T::one(),
            _ => T::one(),
        }
    }

    pub fn inverse(&self) -> Self {
        match *self {
            Self::Translation(t) => Self::Translation(-t),
            Self::Dilation(l) => Self::Dilation(l.recip()),
            Self::PseudoOrthogonal(m) => Self::PseudoOrthogonal(m.pseudo_orthogonal_inverse()),
            Self::AntiOrthogonalSwap => Self::AntiOrthogonalSwap,
            inv @ Self::Inversion { .. } => inv,
            Self::SpecialConformal(b) => Self::SpecialConformal(-b),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Translation(_) => "translation",
            Self::Dilation(_) => "dilation",
            Self::PseudoOrthogonal(_) => "pseudo-orthogonal",
            Self::AntiOrthogonalSwap => "anti-orthogonal-swap",
            Self::Inversion { .. } => "inversion",
            Self::SpecialConformal(_) => "special-conformal",
        }
    }
}

/// Composition of generators, applied left to right.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConformalMap<T> {
    generators: Vec<ConformalGenerator<T>>,
}

impl<T: Scalar> ConformalMap<T> {
    pub fn identity() -> Self {
        Self { generators: Vec::new() }
    }

    pub fn from_generators(generators: Vec<ConformalGenerator<T>>) -> Self {
        Self { generators }
    }

    pub fn generators(&self) -> &[ConformalGenerator<T>] {
        &self.generators
    }

    pub fn push(&mut self, g: ConformalGenerator<T>) {
        self.generators.push(g);
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Self) -> Self {
        let mut generators = self.generators.clone();
        generators.extend_from_slice(&other.generators);
        Self { generators }
    }

    pub fn inverse(&self) -> Self {
        Self { generators: self.generators.iter().rev().map(ConformalGenerator::inverse).collect() }
    }

    pub fn apply(&self, p: ExtendedPoint<T>) -> ExtendedPoint<T> {
        self.generators.iter().fold(p, |x, g| g.apply(x))
    }

    /// Finite image of a finite point, or the first stage that sends it to
    /// infinity.
    pub fn apply_finite(&self, p: Vec4<T>) -> Result<Vec4<T>> {
        self.trace(p, |_, _| ())
    }

    fn trace(&self, p: Vec4<T>, mut visit: impl FnMut(&ConformalGenerator<T>, Vec4<T>)) -> Result<Vec4<T>> {
        let mut x = p;
        for (stage, g) in self.generators.iter().enumerate() {
            visit(g, x);
            x = g.apply(ExtendedPoint::Finite(x)).finite().ok_or(Error::PoleAt { stage })?;
        }
        Ok(x)
    }

    /// `Ω(p)`: product of the stage factors along the running image.
    pub fn conformal_factor(&self, p: Vec4<T>) -> Result<T> {
        let mut omega = T::one();
        self.trace(p, |g, x| omega *= g.factor(x))?;
        Ok(omega)
    }

    /// Image of the tangent vector `v` at `p` under the differential.
    pub fn push_forward(&self, p: Vec4<T>, v: Vec4<T>) -> Result<Vec4<T>> {
        let mut w = v;
        self.trace(p, |g, x| w = g.push_forward(x, w))?;
        Ok(w)
    }

    /// `±1`: `f*g = metric_sign·Ω² g`.
    pub fn metric_sign(&self) -> T {
        self.generators.iter().fold(T::one(), |s, g| s * g.metric_sign())
    }
}

/// Pseudo-orthonormal completion: a matrix whose column `slot` is `b`
/// (`Q(b) = ±1`) and whose columns have Gram matrix `I^{2,2}`.
fn complete_frame<T: Scalar>(b: Vec4<T>) -> Result<Mat4<T>> {
    // With b = (c·û, s·v̂) split into its positive and negative blocks, the
    // completion is (s·û, c·v̂) together with (û⊥, 0) and (0, v̂⊥).
    let unit = |x: T, y: T| {
        let n = x.hypot(y);
        if n > T::zero() {
            (x / n, y / n, n)
        } else {
            (T::one(), T::zero(), T::zero())
        }
    };
    let (u1, u2, c) = unit(b.x1, b.x2);
    let (v1, v2, s) = unit(b.x3, b.x4);
    if !b.is_finite() || (c * c - s * s).abs() <= T::null_eps() * (c * c + s * s) {
        return Err(Error::FrameCompletionFailure);
    }
    let z = T::zero();
    let along = Vec4::new(s * u1, s * u2, c * v1, c * v2);
    let pos_perp = Vec4::new(-u2, u1, z, z);
    let neg_perp = Vec4::new(z, z, -v2, v1);
    Ok(if b.quadratic_form() > T::zero() {
        Mat4::from_columns([b, pos_perp, along, neg_perp])
    } else {
        Mat4::from_columns([along, pos_perp, b, neg_perp])
    })
}

/// A conformal map sending `q ↦ 0`, `q′ ↦ ∞`, `q″ ↦ e₁`.
///
/// Stages: translate `q` to the origin; invert in the sphere centered at the
/// image `a` of `q′` through the origin (`k = Q(a)`); dilate the image of `q″`
/// to `|Q| = 1`; rotate it to `e₁` (or to `e₃`, followed by the swap, when
/// its square norm is negative).
pub fn map_triple_to_standard<T: Scalar>(q: Vec4<T>, q1: Vec4<T>, q2: Vec4<T>) -> Result<ConformalMap<T>> {
    let pts = [q, q1, q2];
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        if !are_skew(pts[i], pts[j]) {
            return Err(Error::NotSkew(i, j));
        }
    }
    let a = q1 - q;
    let mut f = ConformalMap::from_generators(vec![
        ConformalGenerator::Translation(-q),
        ConformalGenerator::Inversion { center: a, k: a.quadratic_form() },
    ]);
    let y = f.apply_finite(q2)?;
    let qy = y.quadratic_form();
    f.push(ConformalGenerator::Dilation(qy.abs().sqrt().recip()));
    let b = f.apply_finite(q2)?;
    let m = complete_frame(b)?;
    f.push(ConformalGenerator::PseudoOrthogonal(m.pseudo_orthogonal_inverse()));
    if qy < T::zero() {
        f.push(ConformalGenerator::AntiOrthogonalSwap);
    }
    Ok(f)
}

/// Three pairwise skew points of `S⊥`.
fn perp_triple<T: Scalar>(pair: &ConjugateConicPair<T>) -> [Vec4<T>; 3] {
    let c = &pair.s_perp;
    match c.kind {
        ConicKind::Circle => {
            let third = T::lit(2.0) * T::PI() / T::lit(3.0);
            [c.point(T::zero(), Branch::Plus), c.point(third, Branch::Plus), c.point(third + third, Branch::Plus)]
        }
        ConicKind::Hyperbola => {
            [c.point(T::zero(), Branch::Plus), c.point(T::zero(), Branch::Minus), c.point(T::one(), Branch::Plus)]
        }
    }
}

/// A conformal map with `f(S) = S̃` and `f(S⊥) = S̃⊥` for the source pair
/// `(S, S⊥)` and target pair `(S̃, S̃⊥)`.
///
/// Three points of `source.S⊥` go to `(0, ∞, e₁)` and from there back to
/// three points of `target.S⊥`; the nullity loci of the triples are the `S`
/// curves. All of `S` lies on the null cone of the point sent to `∞`, so the
/// two inversions around the middle linear part are fused into one
/// transversion: with `L` linear and `Q(Lx) = s·Q(x)`,
/// `J_{k′} ∘ T_e ∘ L ∘ J_k = D_{k′} ∘ K_{−e} ∘ D_{1/(k s)} ∘ L`.
pub fn map_pair_to_pair<T: Scalar>(
    source: &ConjugateConicPair<T>,
    target: &ConjugateConicPair<T>,
) -> Result<ConformalMap<T>> {
    let [p, p1, p2] = perp_triple(source);
    let [r, r1, r2] = perp_triple(target);
    let forward = map_triple_to_standard(p, p1, p2)?;
    let back = map_triple_to_standard(r, r1, r2)?;
    let split = |f: &ConformalMap<T>| match f.generators() {
        [ConformalGenerator::Translation(t), ConformalGenerator::Inversion { center, k }, rest @ ..] => {
            (*t, *center, *k, rest.to_vec())
        }
        _ => unreachable!("map_triple_to_standard starts with a translation and an inversion"),
    };
    let (t, a, k, rest) = split(&forward);
    let (t2, a2, k2, rest2) = split(&back);
    let mut linear = ConformalMap::from_generators(rest);
    linear = linear.then(&ConformalMap::from_generators(rest2).inverse());
    let apply_linear = |x: Vec4<T>| linear.apply_finite(x).expect("linear stages have no poles");
    let s = apply_linear(Vec4::basis(0)).quadratic_form();
    let e = apply_linear(a) - a2;
    let mut generators = vec![ConformalGenerator::Translation(t - a)];
    generators.extend_from_slice(linear.generators());
    generators.extend([
        ConformalGenerator::Dilation((k * s).recip()),
        ConformalGenerator::SpecialConformal(-e),
        ConformalGenerator::Dilation(k2),
        ConformalGenerator::Translation(a2 - t2),
    ]);
    Ok(ConformalMap::from_generators(generators))
}
