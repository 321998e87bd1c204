//! Central finite differences in four real variables.
//!
//! The step along coordinate `i` is `h·max(1, |x_i|)`.

use crate::error::Result;
use crate::scalar::Scalar;

pub(crate) fn steps<T: Scalar>(x: [T; 4], h: T) -> [T; 4] {
    x.map(|c| h * c.abs().max(T::one()))
}

fn shifted<T: Scalar>(x: [T; 4], i: usize, di: T, j: usize, dj: T) -> [T; 4] {
    let mut y = x;
    y[i] += di;
    y[j] += dj;
    y
}

/// `∂²f/∂x_i²` from the three-point stencil, reusing the center value `f0`.
pub(crate) fn second_pure<T: Scalar>(f: &impl Fn([T; 4]) -> Result<T>, x: [T; 4], f0: T, i: usize, h: T) -> Result<T> {
    let hi = steps(x, h)[i];
    let mut up = x;
    up[i] += hi;
    let mut down = x;
    down[i] -= hi;
    Ok((f(up)? - f0 * T::lit(2.0) + f(down)?) / (hi * hi))
}

/// `∂²f/∂x_i∂x_j`, `i ≠ j`, from the four-point cross stencil.
pub(crate) fn second_mixed<T: Scalar>(
    f: &impl Fn([T; 4]) -> Result<T>,
    x: [T; 4],
    i: usize,
    j: usize,
    h: T,
) -> Result<T> {
    let s = steps(x, h);
    let (hi, hj) = (s[i], s[j]);
    let pp = f(shifted(x, i, hi, j, hj))?;
    let pm = f(shifted(x, i, hi, j, -hj))?;
    let mp = f(shifted(x, i, -hi, j, hj))?;
    let mm = f(shifted(x, i, -hi, j, -hj))?;
    Ok((pp - pm - mp + mm) / (T::lit(4.0) * hi * hj))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_on_quadratics() {
        let f = |x: [f64; 4]| Ok(3.0 * x[0] * x[0] + 2.0 * x[1] * x[3] - x[2] * x[2]);
        let x = [0.4, -1.5, 2.0, 0.3];
        let f0 = f(x).unwrap();
        assert!((second_pure(&f, x, f0, 0, 1e-3).unwrap() - 6.0).abs() < 1e-6);
        assert!((second_pure(&f, x, f0, 2, 1e-3).unwrap() + 2.0).abs() < 1e-6);
        assert!((second_mixed(&f, x, 1, 3, 1e-3).unwrap() - 2.0).abs() < 1e-6);
        assert!(second_mixed(&f, x, 0, 2, 1e-3).unwrap().abs() < 1e-6);
    }
}
