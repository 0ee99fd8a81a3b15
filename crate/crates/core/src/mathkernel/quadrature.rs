//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! Semi-infinite integrals are mapped onto [0, 1) with t = s·u/(1 − u), where
//! `s` is a caller-supplied length scale (the integrand's natural width).

use crate::error::{GaseError, Result};
use crate::scalar::Real;

// Kronrod abscissae on [0, 1] (the odd-indexed ones are the Gauss nodes).
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Accuracy request for the adaptive integrators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(rel_tol: T, abs_tol: T, max_subdivisions: usize) -> Result<Self> {
        if !(rel_tol > T::zero()) {
            return Err(GaseError::domain("rel_tol must be > 0", rel_tol.as_f64()));
        }
        if !(abs_tol >= T::zero()) {
            return Err(GaseError::domain("abs_tol must be >= 0", abs_tol.as_f64()));
        }
        if max_subdivisions < 1 {
            return Err(GaseError::domain("max_subdivisions must be >= 1", 0.0));
        }
        Ok(Self {
            rel_tol,
            abs_tol,
            max_subdivisions,
        })
    }

    /// Same spec with a different relative tolerance (floored at the
    /// scalar's resolution).
    pub fn with_rel_tol(self, rel_tol: T) -> Self {
        Self {
            rel_tol: rel_tol.max(precision_floor::<T>()),
            ..self
        }
    }
}

fn precision_floor<T: Real>() -> T {
    T::lit(64.0) * T::epsilon()
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::lit(1e-8).max(precision_floor::<T>()),
            abs_tol: T::lit(1e-12),
            max_subdivisions: 2000,
        }
    }
}

/// Integral value with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<T> {
    pub value: T,
    pub error: T,
    pub subdivisions: usize,
}

#[derive(Clone, Copy)]
struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
}

fn rescale_error<T: Real>(err: T, res_abs: T, res_asc: T) -> T {
    let mut err = err.abs();
    if res_asc != T::zero() && err != T::zero() {
        let scale = (T::lit(200.0) * err / res_asc).powf(T::lit(1.5));
        err = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let floor = T::lit(50.0) * T::epsilon() * res_abs;
    if res_abs > T::min_positive_value() / (T::lit(50.0) * T::epsilon()) && floor > err {
        err = floor;
    }
    err
}

fn gk15<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Panel<T> {
    let half = T::lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let f_center = f(center);

    let mut res_gauss = f_center * T::lit(WG[3]);
    let mut res_kronrod = f_center * T::lit(WGK[7]);
    let mut res_abs = res_kronrod.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];

    for j in 0..7 {
        let dx = half_len * T::lit(XGK[j]);
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        let wk = T::lit(WGK[j]);
        res_kronrod = res_kronrod + wk * (f1 + f2);
        res_abs = res_abs + wk * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_gauss = res_gauss + T::lit(WG[j / 2]) * (f1 + f2);
        }
    }

    let mean = res_kronrod * half;
    let mut res_asc = T::lit(WGK[7]) * (f_center - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + T::lit(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }

    let abs_half = half_len.abs();
    let value = res_kronrod * half_len;
    let err = (res_kronrod - res_gauss) * half_len;
    Panel {
        a,
        b,
        value,
        error: rescale_error(err, res_abs * abs_half, res_asc * abs_half),
    }
}

/// Adaptive integral of `f` over the finite interval [a, b].
pub fn integrate<T, F>(f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(GaseError::domain("integration limits must be finite", f64::NAN));
    }
    if a == b {
        return Ok(Quadrature {
            value: T::zero(),
            error: T::zero(),
            subdivisions: 0,
        });
    }

    let first = gk15(&f, a, b);
    let mut panels = vec![first];
    let mut total = first.value;
    let mut total_err = first.error;

    loop {
        if !(total.is_finite() && total_err.is_finite()) {
            return Err(GaseError::NonConvergence {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                subdivisions: panels.len(),
            });
        }
        let target = (spec.rel_tol * total.abs()).max(spec.abs_tol);
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error: total_err,
                subdivisions: panels.len(),
            });
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(GaseError::NonConvergence {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                subdivisions: panels.len(),
            });
        }

        // bisect the panel with the largest error
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, p)| {
                if p.error > be {
                    (i, p.error)
                } else {
                    (bi, be)
                }
            });
        let p = panels.swap_remove(worst);
        let mid = T::lit(0.5) * (p.a + p.b);
        if !(mid > p.a.min(p.b) && mid < p.a.max(p.b)) {
            // the panel cannot be split any further
            return Err(GaseError::NonConvergence {
                estimate: total.as_f64(),
                error: total_err.as_f64(),
                subdivisions: panels.len() + 1,
            });
        }
        let left = gk15(&f, p.a, mid);
        let right = gk15(&f, mid, p.b);
        total = total - p.value + left.value + right.value;
        total_err = total_err - p.error + left.error + right.error;
        panels.push(left);
        panels.push(right);

        // resum to keep the running totals from drifting
        if panels.len() % 64 == 0 {
            total = panels.iter().fold(T::zero(), |acc, p| acc + p.value);
            total_err = panels.iter().fold(T::zero(), |acc, p| acc + p.error);
        }
    }
}

/// Adaptive integral of `f` over [0, ∞) with unit length scale.
pub fn integrate_semi_infinite<T, F>(f: F, spec: &QuadratureSpec<T>) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_semi_infinite_scaled(f, T::one(), spec)
}

/// Adaptive integral of `f` over [0, ∞) through t = scale·u/(1 − u).
///
/// `scale` should be of the order of the integrand's decay length; the result
/// does not depend on it beyond quadrature error.
pub fn integrate_semi_infinite_scaled<T, F>(
    f: F,
    scale: T,
    spec: &QuadratureSpec<T>,
) -> Result<Quadrature<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    if !(scale > T::zero() && scale.is_finite()) {
        return Err(GaseError::domain("length scale must be positive", scale.as_f64()));
    }
    let mapped = |u: T| {
        let w = T::one() - u;
        let t = scale * u / w;
        if !t.is_finite() {
            return T::zero();
        }
        let v = f(t);
        if v == T::zero() {
            T::zero()
        } else {
            v * scale / (w * w)
        }
    };
    integrate(mapped, T::zero(), T::one(), spec)
}
