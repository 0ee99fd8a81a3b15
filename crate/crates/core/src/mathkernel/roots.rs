use crate::error::{GaseError, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 500;

/// Brent's method on a sign-changing bracket.
///
/// Stops when |g(x)| ≤ `tol` or the bracket has shrunk below `tol·|x|`
/// (plus a few ulps).
pub fn find_root_bracketed<T, G>(g: G, lo: T, hi: T, tol: T) -> Result<T>
where
    T: Real,
    G: Fn(T) -> T,
{
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (g(a), g(b));
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(GaseError::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            g_lo: fa.as_f64(),
            g_hi: fb.as_f64(),
        });
    }

    let two = T::lit(2.0);
    let half = T::lit(0.5);
    let mut c = b;
    let mut fc = fb;
    let mut d = b - a;
    let mut e = d;

    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = two * T::epsilon() * b.abs() + half * tol * b.abs();
        let xm = half * (c - b);
        if fb.abs() <= tol || xm.abs() <= tol1 || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            // inverse quadratic interpolation or secant
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * xm * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * xm * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            }
            p = p.abs();
            let min1 = T::lit(3.0) * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if two * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol1 {
            b + d
        } else {
            b + tol1 * xm.signum()
        };
        fb = g(b);
    }
    Ok(b)
}

/// Golden-section search for the maximum of a unimodal `f` on [lo, hi].
///
/// Returns (argmax, max). The endpoints are included as candidates so a
/// maximum sitting on the boundary is reported exactly.
pub fn golden_section_max<T, F>(f: F, lo: T, hi: T, tol: T) -> (T, T)
where
    T: Real,
    F: Fn(T) -> T,
{
    let inv_phi = T::lit(0.618_033_988_749_894_8);
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    for x in [lo, hi] {
        let fx = f(x);
        if fx > best.1 {
            best = (x, fx);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkernel::special::scaled_e1;

    // plain bisection, used as the oracle for the Brent results below
    fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let glo = g(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (g(mid) > 0.0) == (glo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn linear_and_cosine() {
        let r = find_root_bracketed(|x: f64| x - 2.0, 0.0, 5.0, 1e-12).unwrap();
        assert!((r - 2.0).abs() < 1e-11);
        let r = find_root_bracketed(|x: f64| x.cos(), 1.0, 2.0, 1e-14).unwrap();
        assert!((r - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn optimal_power_equation_for_a4() {
        let g = |x: f64| (x + 0.5) * scaled_e1(x).unwrap() - 1.0;
        let oracle = bisect(g, 0.1, 1.0);
        assert!((oracle - 0.258_946_908_680_395).abs() < 1e-9);
        let r = find_root_bracketed(g, 0.1, 1.0, 1e-13).unwrap();
        assert!((r - oracle).abs() < 1e-9);
    }

    #[test]
    fn bracketing_error() {
        let err = find_root_bracketed(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, GaseError::NoSignChange { .. }));
    }

    #[test]
    fn golden_section_interior_and_boundary() {
        let (x, fx) = golden_section_max(|x: f64| -(x - 1.3).powi(2), -5.0, 5.0, 1e-10);
        assert!((x - 1.3).abs() < 1e-8 && fx <= 0.0);
        let (x, _) = golden_section_max(|x: f64| x, 0.0, 2.0, 1e-10);
        assert_eq!(x, 2.0);
    }
}
