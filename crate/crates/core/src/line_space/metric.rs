//! The neutral metric `𝔾` of line space, its conformal factor `Ω`, and
//! finite-difference evaluators for the Laplacians in both charts and for the
//! ultra-hyperbolic operator on ℝ^{2,2}.
//!
//! Tangent vectors in the line chart are real 4-vectors
//! `(Re dξ, Im dξ, Re dη, Im dη)`. With these conventions the pullback of
//! the flat metric along [`line_to_flat`] is `4Ω²·𝔾`, so the line elements are
//! related by `dl = 2Ω·dτ`.

use num_complex::Complex;

use super::chart::{check_chart, flat_to_line, line_to_flat, FlatCoords, OrientedLine};
use crate::error::{Error, Result};
use crate::fd::{second_mixed, second_pure};
use crate::neutral::Vec4;
use crate::scalar::Scalar;

/// Default relative finite-difference step.
pub const DEFAULT_STEP: f64 = 1e-4;

fn tangent<T: Scalar>(v: [T; 4]) -> (Complex<T>, Complex<T>) {
    (Complex::new(v[0], v[1]), Complex::new(v[2], v[3]))
}

/// `𝔾(v, w)`, the polarization of
/// `ds² = 4(1+|ξ|²)⁻² Im(dη̄ dξ + 2ξ̄η/(1+|ξ|²) dξ dξ̄)`.
pub fn metric_g<T: Scalar>(l: OrientedLine<T>, v: [T; 4], w: [T; 4]) -> Result<T> {
    check_chart(l.xi)?;
    let (vx, ve) = tangent(v);
    let (wx, we) = tangent(w);
    let b = T::one() + l.xi.norm_sqr();
    let half = T::lit(0.5);
    let cross = ((ve.conj() * wx).im + (we.conj() * vx).im) * half;
    let twist = (l.xi.conj() * l.eta).im * T::lit(2.0) / b * (vx * wx.conj()).re;
    Ok(T::lit(4.0) / (b * b) * (cross + twist))
}

/// Gram matrix of `𝔾` in the real chart basis.
pub fn metric_matrix<T: Scalar>(l: OrientedLine<T>) -> Result<[[T; 4]; 4]> {
    let mut m = [[T::zero(); 4]; 4];
    let e = |i: usize| {
        let mut a = [T::zero(); 4];
        a[i] = T::one();
        a
    };
    for (i, row) in m.iter_mut().enumerate() {
        for (j, x) in row.iter_mut().enumerate() {
            *x = metric_g(l, e(i), e(j))?;
        }
    }
    Ok(m)
}

/// `Ω = (1 + |ξ|²)/(1 − |ξ|²)`.
pub fn conformal_factor_omega<T: Scalar>(l: OrientedLine<T>) -> Result<T> {
    check_chart(l.xi)?;
    let a = l.xi.norm_sqr();
    Ok((T::one() + a) / (T::one() - a))
}

/// `Ω` in flat coordinates: `(1 + ¼|Z₁ − Z₂|²)^{1/2}`.
pub fn omega_flat<T: Scalar>(z: FlatCoords<T>) -> T {
    (T::one() + (z.z1 - z.z2).norm_sqr() * T::lit(0.25)).sqrt()
}

/// Second-order central-difference value of
/// `∂²u/∂x₁² + ∂²u/∂x₂² − ∂²u/∂x₃² − ∂²u/∂x₄²` at `p`.
pub fn uhe_residual_flat<T: Scalar>(u: impl Fn(Vec4<T>) -> Result<T>, p: Vec4<T>, h: T) -> Result<T> {
    Ok(uhe_terms(u, p, h)?.iter().zip([1.0, 1.0, -1.0, -1.0]).map(|(d, s)| *d * T::lit(s)).sum())
}

/// `|□u| / max(1, Σ|∂²u/∂x_i²|)`: the residual relative to the size of the
/// second derivatives it cancels.
pub fn uhe_residual_normalized<T: Scalar>(u: impl Fn(Vec4<T>) -> Result<T>, p: Vec4<T>, h: T) -> Result<T> {
    let d = uhe_terms(u, p, h)?;
    let scale = d.iter().fold(T::zero(), |s, x| s + x.abs()).max(T::one());
    Ok((d[0] + d[1] - d[2] - d[3]).abs() / scale)
}

fn uhe_terms<T: Scalar>(u: impl Fn(Vec4<T>) -> Result<T>, p: Vec4<T>, h: T) -> Result<[T; 4]> {
    let f = |x: [T; 4]| {
        let y = Vec4::from_array(x);
        u(y).map_err(|_| Error::EvaluationDomain(y.cast::<f64>().to_array()))
    };
    let x = p.to_array();
    let f0 = f(x)?;
    let mut d = [T::zero(); 4];
    for (i, di) in d.iter_mut().enumerate() {
        *di = second_pure(&f, x, f0, i, h)?;
    }
    Ok(d)
}

/// The line-space Laplacian in the `(ξ, η)` chart,
/// `i(1+|ξ|²)²(∂²/∂ξ∂η̄ − ∂²/∂ξ̄∂η − 2(ξη̄ − ξ̄η)/(1+|ξ|²)·∂²/∂η∂η̄)v`,
/// expanded with `∂/∂ξ = ½(∂/∂Re ξ − i ∂/∂Im ξ)`. With `ξ = x + iy`,
/// `η = s + it` it equals
/// `−(1+|ξ|²)²[½(v_xt − v_ys) − Im(ξη̄)(v_ss + v_tt)/(1+|ξ|²)]`.
pub fn laplacian_g_residual<T: Scalar>(
    v: impl Fn(OrientedLine<T>) -> Result<T>,
    l: OrientedLine<T>,
    h: T,
) -> Result<T> {
    check_chart(l.xi)?;
    let f = |x: [T; 4]| {
        let m = OrientedLine::from_array(x);
        check_chart(m.xi)?;
        v(m).map_err(|_| Error::EvaluationDomain(m.to_array().map(|c| c.to_f64_lossy())))
    };
    let x = l.to_array();
    let f0 = f(x)?;
    let v_xt = second_mixed(&f, x, 0, 3, h)?;
    let v_ys = second_mixed(&f, x, 1, 2, h)?;
    let v_ss = second_pure(&f, x, f0, 2, h)?;
    let v_tt = second_pure(&f, x, f0, 3, h)?;
    let b = T::one() + l.xi.norm_sqr();
    let im = (l.xi * l.eta.conj()).im;
    Ok(-(b * b) * ((v_xt - v_ys) * T::lit(0.5) - im * (v_ss + v_tt) / b))
}

/// The same operator evaluated through the flat chart:
/// `8·(1+¼|D|²)^{3/2}·(∂²/∂Z₁∂Z̄₁ − ∂²/∂Z₂∂Z̄₂)(v/(1+¼|D|²)^{1/2})`,
/// `D = Z₁ − Z₂`, with `∂²/∂Z∂Z̄ = ¼(∂²/∂(Re Z)² + ∂²/∂(Im Z)²)`.
///
/// The factor 8 comes from the normalization of `𝔾` relative to the flat
/// metric (`4Ω²`) and from the `¼` of the Wirtinger product.
pub fn laplacian_g_flat<T: Scalar>(v: impl Fn(OrientedLine<T>) -> Result<T>, l: OrientedLine<T>, h: T) -> Result<T> {
    let z = line_to_flat(l)?;
    let w = |x: Vec4<T>| {
        let zz = FlatCoords::from_vec4(x);
        Ok(v(flat_to_line(zz)?)? / omega_flat(zz))
    };
    let box_w = uhe_residual_flat(w, z.to_vec4(), h)?;
    let om = omega_flat(z);
    Ok(T::lit(2.0) * om * om * om * box_w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    #[allow(clippy::needless_range_loop)]
    fn sym_eigen_signs(m: [[f64; 4]; 4]) -> (usize, usize) {
        // Sylvester: signs of leading minors are not enough for indefinite
        // matrices, so count via a Jacobi sweep.
        let mut a = m;
        for _ in 0..100 {
            for p in 0..4 {
                for q in p + 1..4 {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let (cs, sn) = (1.0 / (t * t + 1.0).sqrt(), t / (t * t + 1.0).sqrt());
                    for k in 0..4 {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = cs * akp - sn * akq;
                        a[k][q] = sn * akp + cs * akq;
                    }
                    for k in 0..4 {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = cs * apk - sn * aqk;
                        a[q][k] = sn * apk + cs * aqk;
                    }
                }
            }
        }
        (0..4).fold((0, 0), |(p, n), i| if a[i][i] > 0.0 { (p + 1, n) } else { (p, n + 1) })
    }

    #[test]
    fn metric_at_origin() {
        let o = OrientedLine::default();
        let e = |i: usize| {
            let mut a = [0.0; 4];
            a[i] = 1.0;
            a
        };
        assert_eq!(metric_g(o, e(0), e(2)).unwrap(), 0.0);
        assert_eq!(metric_g(o, e(0), e(3)).unwrap(), -2.0);
        assert_eq!(metric_g(o, e(1), e(2)).unwrap(), 2.0);
        assert_eq!(metric_g(o, e(0), e(0)).unwrap(), 0.0);
    }

    #[test]
    fn omega_examples() {
        assert_eq!(conformal_factor_omega(OrientedLine::<f64>::default()).unwrap(), 1.0);
        let l = OrientedLine::new(c((1.0f64 / 3.0).sqrt(), 0.0), c(0.4, 2.0));
        assert!((conformal_factor_omega(l).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn uhe_residual_examples() {
        let p = Vec4::new(0.3, -1.2, 2.0, 0.7);
        let r = uhe_residual_flat(|x: Vec4<f64>| Ok(x.x1 * x.x1 + x.x3 * x.x3), p, 1e-3).unwrap();
        assert!(r.abs() < 1e-8);
        let r = uhe_residual_flat(|x: Vec4<f64>| Ok(x.x1 * x.x1 - x.x2 * x.x2), p, 1e-3).unwrap();
        assert!(r.abs() < 1e-8);
        let r = uhe_residual_flat(|x: Vec4<f64>| Ok(x.x1 * x.x1), p, 1e-3).unwrap();
        assert!((r - 2.0).abs() < 1e-6);
        let bad = uhe_residual_flat(|x: Vec4<f64>| if x.x1 > 0.3 { Err(Error::OutOfDomain) } else { Ok(0.0) }, p, 1e-3);
        assert!(matches!(bad, Err(Error::EvaluationDomain(_))));
    }

    #[test]
    fn laplacian_examples() {
        let l = OrientedLine::new(c(0.2, -0.35), c(0.6, 0.9));
        let omega = |m: OrientedLine<f64>| conformal_factor_omega(m);
        assert!(laplacian_g_residual(omega, l, DEFAULT_STEP).unwrap().abs() < 1e-5);
        assert!(laplacian_g_residual(|_| Ok(4.2), l, DEFAULT_STEP).unwrap().abs() < 1e-9);
        let v = |m: OrientedLine<f64>| {
            let x = line_to_flat(m)?.to_vec4();
            Ok(conformal_factor_omega(m)? * (x.x1 * x.x1 + x.x3 * x.x3))
        };
        assert!(laplacian_g_residual(v, l, DEFAULT_STEP).unwrap().abs() < 1e-5);
    }

    fn arb_line(xi_max: f64, eta_max: f64) -> impl Strategy<Value = OrientedLine<f64>> {
        (0.0..xi_max, 0.0..std::f64::consts::TAU, -eta_max..eta_max, -eta_max..eta_max)
            .prop_map(|(r, t, a, b)| OrientedLine::new(Complex::from_polar(r, t), c(a, b)))
    }

    proptest! {
        #[test]
        fn metric_has_split_signature(l in arb_line(0.9, 3.0)) {
            prop_assert_eq!(sym_eigen_signs(metric_matrix(l).unwrap()), (2, 2));
        }

        #[test]
        fn pullback_is_four_omega_squared(l in arb_line(0.8, 3.0), v in prop::array::uniform4(-1.0..1.0f64)) {
            let h = 1e-6;
            let shift = |s: f64| OrientedLine::from_array([0, 1, 2, 3].map(|i| l.to_array()[i] + s * v[i]));
            let dz = (line_to_flat(shift(h)).unwrap().to_vec4() - line_to_flat(shift(-h)).unwrap().to_vec4()) / (2.0 * h);
            let om = conformal_factor_omega(l).unwrap();
            let g = metric_g(l, v, v).unwrap();
            prop_assert!((dz.quadratic_form() - 4.0 * om * om * g).abs() <= 1e-6 * (1.0 + dz.norm_sq()));
        }

        #[test]
        fn two_chart_laplacians_agree(l in arb_line(0.6, 1.5), k in prop::array::uniform3(-1.0..1.0f64)) {
            let v = move |m: OrientedLine<f64>| {
                Ok((k[0] * m.xi.re + m.eta.im).exp() * (k[1] * m.eta.re).sin() + k[2] * m.xi.im * m.eta.norm_sqr())
            };
            let a = laplacian_g_residual(v, l, DEFAULT_STEP).unwrap();
            let b = laplacian_g_flat(v, l, DEFAULT_STEP).unwrap();
            prop_assert!((a - b).abs() <= 1e-4 * a.abs().max(b.abs()).max(1.0), "{} vs {}", a, b);
        }

        #[test]
        fn omega_forms_agree(l in arb_line(0.95, 5.0)) {
            let a = conformal_factor_omega(l).unwrap();
            let b = omega_flat(line_to_flat(l).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a);
        }
    }
}
