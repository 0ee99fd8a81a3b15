//! Special functions used by the Rayleigh closed forms.
//!
//! Everything here is implemented in-repo so that accuracy is pinned by our
//! own tests: series plus a Lentz continued fraction for E1, power series and
//! Steed's continued fraction for K0/K1, series plus continued fraction for
//! erfc, and a Lanczos approximation for the gamma function.

use crate::error::{GaseError, Result};
use crate::scalar::Real;

const MAX_ITER: usize = 10_000;

fn tiny<T: Real>() -> T {
    T::min_positive_value() / T::epsilon()
}

/// Exponential integral E1(x) = ∫ₓ^∞ e^(−t)/t dt for x > 0.
pub fn exp_integral_e1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(GaseError::domain("E1 requires x > 0", x.as_f64()));
    }
    if x <= T::one() {
        Ok(e1_series(x))
    } else {
        Ok(e1_continued_fraction(x) * (-x).exp())
    }
}

/// F(x) = eˣ·E1(x), evaluated without forming eˣ for large x.
pub fn scaled_e1<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(GaseError::domain("scaled E1 requires x > 0", x.as_f64()));
    }
    if x <= T::one() {
        Ok(e1_series(x) * x.exp())
    } else {
        Ok(e1_continued_fraction(x))
    }
}

// −γ − ln x − Σ (−x)^k / (k·k!)
fn e1_series<T: Real>(x: T) -> T {
    let mut sum = T::zero();
    let mut term = T::one();
    for k in 1..MAX_ITER {
        let kf = T::lit(k as f64);
        term = term * (-x) / kf;
        let contrib = term / kf;
        sum = sum + contrib;
        if contrib.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    -T::euler_gamma() - x.ln() - sum
}

// Modified Lentz evaluation of eˣE1(x) = 1/(x+1− 1/(x+3− 4/(x+5− ...))).
fn e1_continued_fraction<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let mut b = x + T::one();
    let mut c = T::one() / tiny::<T>();
    let mut d = T::one() / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let fi = T::lit(i as f64);
        let an = -fi * fi;
        b = b + two;
        d = T::one() / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h = h * del;
        if (del - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    h
}

/// Modified Bessel function of the second kind, order zero.
pub fn bessel_k0<T: Real>(x: T) -> Result<T> {
    Ok(bessel_k01_scaled(x)?.0 * (-x).exp())
}

/// Modified Bessel function of the second kind, order one.
pub fn bessel_k1<T: Real>(x: T) -> Result<T> {
    Ok(bessel_k01_scaled(x)?.1 * (-x).exp())
}

/// Exponentially scaled pair (eˣK0(x), eˣK1(x)).
///
/// Integrands that multiply K0/K1 by another exponential should use this and
/// combine the exponents, since K0/K1 underflow long before the product does.
pub fn bessel_k01_scaled<T: Real>(x: T) -> Result<(T, T)> {
    if !(x > T::zero()) {
        return Err(GaseError::domain("K0/K1 require x > 0", x.as_f64()));
    }
    if x <= T::lit(2.0) {
        let (k0, k1) = k01_series(x);
        let e = x.exp();
        Ok((k0 * e, k1 * e))
    } else {
        Ok(k01_steed(x))
    }
}

// Ascending series:
//   K0 = −(ln(x/2) + γ)·I0 + Σ_{k≥1} q^k/(k!)²·H_k
//   K1 = 1/x + ln(x/2)·I1 − (x/4)·Σ_{k≥0} q^k/(k!(k+1)!)·(ψ(k+1) + ψ(k+2))
// with q = x²/4, H_k the harmonic numbers, ψ(n+1) = H_n − γ.
fn k01_series<T: Real>(x: T) -> (T, T) {
    let gamma = T::euler_gamma();
    let half = T::lit(0.5);
    let q = x * x / T::lit(4.0);
    let log_half = (x * half).ln();

    // k = 0 terms
    let mut t0 = T::one(); // q^k/(k!)²
    let mut t1 = T::one(); // q^k/(k!(k+1)!)
    let mut harmonic = T::zero(); // H_k
    let mut i0 = T::one();
    let mut i1_sum = T::one();
    let mut k0_sum = T::zero();
    let mut k1_sum = -gamma + (T::one() - gamma); // ψ(1) + ψ(2)

    for k in 1..MAX_ITER {
        let kf = T::lit(k as f64);
        t0 = t0 * q / (kf * kf);
        t1 = t1 * q / (kf * (kf + T::one()));
        harmonic = harmonic + T::one() / kf;
        let psi_k1 = harmonic - gamma;
        let psi_k2 = harmonic + T::one() / (kf + T::one()) - gamma;
        i0 = i0 + t0;
        i1_sum = i1_sum + t1;
        k0_sum = k0_sum + t0 * harmonic;
        let step = t1 * (psi_k1 + psi_k2);
        k1_sum = k1_sum + step;
        if t0 <= i0 * T::epsilon() && step.abs() <= k1_sum.abs() * T::epsilon() {
            break;
        }
    }
    let i1 = x * half * i1_sum;
    let k0 = -(log_half + gamma) * i0 + k0_sum;
    let k1 = T::one() / x + log_half * i1 - x / T::lit(4.0) * k1_sum;
    (k0, k1)
}

// Steed's continued fraction (Temme's CF2) for ν = 0, valid for x ≳ 2.
// Returns (eˣK0, eˣK1).
fn k01_steed<T: Real>(x: T) -> (T, T) {
    let two = T::lit(2.0);
    let a1 = T::lit(0.25);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = T::zero();
    let mut q2 = T::one();
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 2..MAX_ITER {
        let fi = T::lit(i as f64);
        a = a - two * (fi - T::one());
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() <= T::epsilon() {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() / s;
    let k1 = k0 * (x + T::lit(0.5) - h) / x;
    (k0, k1)
}

/// Complementary error function.
pub fn erfc<T: Real>(x: T) -> T {
    if x < T::zero() {
        return T::lit(2.0) - erfc(-x);
    }
    if x < T::lit(2.0) {
        T::one() - erf_series(x)
    } else {
        erfcx_continued_fraction(x) * (-x * x).exp()
    }
}

/// Scaled complementary error function e^(x²)·erfc(x) for x ≥ 0.
pub fn erfcx<T: Real>(x: T) -> Result<T> {
    if !(x >= T::zero()) {
        return Err(GaseError::domain("erfcx requires x >= 0", x.as_f64()));
    }
    if x < T::lit(2.0) {
        Ok((T::one() - erf_series(x)) * (x * x).exp())
    } else {
        Ok(erfcx_continued_fraction(x))
    }
}

// erf(x) = 2/√π Σ (−1)^n x^(2n+1) / (n!(2n+1))
fn erf_series<T: Real>(x: T) -> T {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    for n in 1..MAX_ITER {
        let nf = T::lit(n as f64);
        term = -term * x2 / nf;
        let contrib = term / (T::lit(2.0) * nf + T::one());
        sum = sum + contrib;
        if contrib.abs() <= sum.abs() * T::epsilon() {
            break;
        }
    }
    sum * T::FRAC_2_SQRT_PI()
}

// e^(x²)erfc(x) = (1/√π)·1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))).
fn erfcx_continued_fraction<T: Real>(x: T) -> T {
    let half = T::lit(0.5);
    let mut f = x;
    let mut c = x;
    let mut d = T::zero();
    for n in 1..MAX_ITER {
        let an = T::lit(n as f64) * half;
        d = x + an * d;
        if d.abs() < tiny::<T>() {
            d = tiny::<T>();
        }
        c = x + an / c;
        if c.abs() < tiny::<T>() {
            c = tiny::<T>();
        }
        d = T::one() / d;
        let del = c * d;
        f = f * del;
        if (del - T::one()).abs() <= T::epsilon() {
            break;
        }
    }
    T::one() / (f * T::PI().sqrt())
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function for x > 0 (Lanczos, g = 7).
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if !(x > T::zero()) {
        return Err(GaseError::domain("gamma requires x > 0", x.as_f64()));
    }
    Ok(gamma_lanczos(x))
}

fn gamma_lanczos<T: Real>(x: T) -> T {
    if x < T::lit(0.5) {
        // reflection
        return T::PI() / ((T::PI() * x).sin() * gamma_lanczos(T::one() - x));
    }
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::lit(i as f64));
    }
    let t = x + T::lit(LANCZOS_G) + T::lit(0.5);
    (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + T::lit(0.5)) * (-t).exp() * acc
}
