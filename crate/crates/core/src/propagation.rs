//! Path loss × Rayleigh fading propagation model, unit conversions and the
//! single-transmitter affected area.
//!
//! Received power at distance r (reference distance 1 m) is P_t·Z/rᵃ with Z a
//! unit-mean exponential power gain.

use crate::error::{GaseError, Result};
use crate::mathkernel::{gamma_fn, integrate, integrate_semi_infinite, QuadratureSpec};
use crate::scalar::Real;

pub fn dbm_to_watts<T: Real>(p_dbm: T) -> T {
    T::lit(10.0).powf((p_dbm - T::lit(30.0)) / T::lit(10.0))
}

pub fn watts_to_dbm<T: Real>(p_w: T) -> Result<T> {
    if !(p_w > T::zero()) || !p_w.is_finite() {
        return Err(GaseError::domain("power in watts must be positive", p_w.as_f64()));
    }
    Ok(T::lit(10.0) * p_w.log10() + T::lit(30.0))
}

/// Transmit (or threshold) power, stored in watts.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct PowerLevel<T>(T);

impl<T: Real> PowerLevel<T> {
    pub fn from_watts(w: T) -> Result<Self> {
        if !(w > T::zero()) || !w.is_finite() {
            return Err(GaseError::domain("power in watts must be positive", w.as_f64()));
        }
        Ok(Self(w))
    }

    pub fn from_dbm(dbm: T) -> Result<Self> {
        Self::from_watts(dbm_to_watts(dbm))
    }

    pub fn watts(self) -> T {
        self.0
    }

    pub fn dbm(self) -> T {
        T::lit(10.0) * self.0.log10() + T::lit(30.0)
    }

    pub fn scaled(self, factor: T) -> Result<Self> {
        Self::from_watts(self.0 * factor)
    }
}

/// Unit-mean exponential power gain (Rayleigh amplitude).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct FadingGain<T>(T);

impl<T: Real> FadingGain<T> {
    pub fn new(z: T) -> Result<Self> {
        if !(z >= T::zero()) {
            return Err(GaseError::domain("fading gain must be >= 0", z.as_f64()));
        }
        Ok(Self(z))
    }

    pub fn value(self) -> T {
        self.0
    }

    /// P{Z > z} for the unit-mean exponential.
    pub fn rayleigh_ccdf(z: T) -> T {
        if z <= T::zero() {
            T::one()
        } else {
            (-z).exp()
        }
    }
}

/// Environment shared by all scenarios. The reference distance is 1 m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PropagationEnvironment<T> {
    a: T,
    noise: PowerLevel<T>,
    p_min: PowerLevel<T>,
}

impl<T: Real> PropagationEnvironment<T> {
    pub fn new(path_loss_exponent: T, noise: PowerLevel<T>, p_min: PowerLevel<T>) -> Result<Self> {
        if !(path_loss_exponent > T::zero()) || !path_loss_exponent.is_finite() {
            return Err(GaseError::domain(
                "path-loss exponent must be positive",
                path_loss_exponent.as_f64(),
            ));
        }
        Ok(Self {
            a: path_loss_exponent,
            noise,
            p_min,
        })
    }

    pub fn from_dbm(path_loss_exponent: T, noise_dbm: T, p_min_dbm: T) -> Result<Self> {
        Self::new(
            path_loss_exponent,
            PowerLevel::from_dbm(noise_dbm)?,
            PowerLevel::from_dbm(p_min_dbm)?,
        )
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn noise(&self) -> PowerLevel<T> {
        self.noise
    }

    pub fn p_min(&self) -> PowerLevel<T> {
        self.p_min
    }

    pub fn reference_distance(&self) -> T {
        T::one()
    }

    pub fn with_p_min(self, p_min: PowerLevel<T>) -> Self {
        Self { p_min, ..self }
    }

    pub fn with_noise(self, noise: PowerLevel<T>) -> Self {
        Self { noise, ..self }
    }

    /// dᵃ (reference distance 1 m).
    pub fn path_loss(&self, d: T) -> T {
        d.powf(self.a)
    }
}

pub(crate) fn check_distance<T: Real>(what: &'static str, d: T) -> Result<T> {
    if !(d > T::zero()) || !d.is_finite() {
        return Err(GaseError::domain(what, d.as_f64()));
    }
    Ok(d)
}

/// Average received SNR P_t/(dᵃ·N).
pub fn mean_snr<T: Real>(env: &PropagationEnvironment<T>, p_t: PowerLevel<T>, d: T) -> Result<T> {
    check_distance("distance must be positive", d)?;
    Ok(p_t.watts() / (env.path_loss(d) * env.noise.watts()))
}

/// Rayleigh affected area (2π/a)·Γ(2/a)·(P_t/P_min)^(2/a) in m².
pub fn affected_area_single<T: Real>(env: &PropagationEnvironment<T>, p_t: PowerLevel<T>) -> T {
    let two_over_a = T::lit(2.0) / env.a;
    let g = gamma_fn(two_over_a).expect("2/a > 0");
    T::TAU() / env.a * g * (p_t.watts() / env.p_min.watts()).powf(two_over_a)
}

/// Affected area 2π∫₀^∞ P{Z ≥ P_min·rᵃ/P_t}·r dr for an arbitrary fading law.
///
/// `fading_ccdf(z)` must return P{Z ≥ z}. The radius is rescaled by
/// r₀ = (P_t/P_min)^(1/a) and the integral split at r = r₀.
pub fn affected_area_generic<T, F>(
    env: &PropagationEnvironment<T>,
    p_t: PowerLevel<T>,
    fading_ccdf: F,
    spec: &QuadratureSpec<T>,
) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let r0 = (p_t.watts() / env.p_min.watts()).powf(T::one() / env.a);
    let a = env.a;
    let kernel = |t: T| fading_ccdf(t.powf(a)) * t;
    let inner = integrate(kernel, T::zero(), T::one(), spec)?;
    let outer = integrate_semi_infinite(|s: T| kernel(T::one() + s), spec)?;
    Ok(T::TAU() * r0 * r0 * (inner.value + outer.value))
}
