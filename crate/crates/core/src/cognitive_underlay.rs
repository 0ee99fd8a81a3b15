//! Underlay cognitive radio: a secondary pair may share the primary's band
//! only while its interference at the primary receiver stays below I_th.
//!
//! Geometry: primary transmitter S_P at the origin, secondary transmitter S_S
//! at distance d0 from it. d_p and d_s are the desired links, d_sp runs from
//! S_S to the primary receiver and d_ps from S_P to the secondary receiver.

use crate::error::{GaseError, Result};
use crate::link_p2p::{capacity_at_snr, GaseBreakdown};
use crate::mathkernel::{integrate, integrate_semi_infinite_scaled, scaled_e1, QuadratureSpec};
use crate::propagation::{affected_area_single, check_distance, PowerLevel, PropagationEnvironment};
use crate::scalar::Real;

/// Tolerance on |ρ − 1| below which the ρ = 1 form of the capacity is used.
pub const RHO_MERGE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CognitiveScenario<T> {
    pub env: PropagationEnvironment<T>,
    pub p1: PowerLevel<T>,
    pub p2: PowerLevel<T>,
    pub d_p: T,
    pub d_s: T,
    pub d_sp: T,
    pub d_ps: T,
    pub d0: T,
    pub i_th: PowerLevel<T>,
}

impl<T: Real> CognitiveScenario<T> {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        env: PropagationEnvironment<T>,
        p1: PowerLevel<T>,
        p2: PowerLevel<T>,
        d_p: T,
        d_s: T,
        d_sp: T,
        d_ps: T,
        d0: T,
        i_th: PowerLevel<T>,
    ) -> Result<Self> {
        check_distance("d_p must be positive", d_p)?;
        check_distance("d_s must be positive", d_s)?;
        check_distance("d_sp must be positive", d_sp)?;
        check_distance("d_ps must be positive", d_ps)?;
        if !(d0 >= T::zero()) || !d0.is_finite() {
            return Err(GaseError::domain("d0 must be >= 0", d0.as_f64()));
        }
        check_triangle("d_sp", d_sp, d0, d_p)?;
        check_triangle("d_ps", d_ps, d0, d_s)?;
        Ok(Self {
            env,
            p1,
            p2,
            d_p,
            d_s,
            d_sp,
            d_ps,
            d0,
            i_th,
        })
    }

    /// Both pairs with link length `d` and both interfering links κ·d.
    #[allow(clippy::too_many_arguments)]
    pub fn symmetric(
        env: PropagationEnvironment<T>,
        p1: PowerLevel<T>,
        p2: PowerLevel<T>,
        d: T,
        kappa: T,
        d0: T,
        i_th: PowerLevel<T>,
    ) -> Result<Self> {
        Self::new(env, p1, p2, d, d, kappa * d, kappa * d, d0, i_th)
    }

    pub fn with_i_th(self, i_th: PowerLevel<T>) -> Self {
        Self { i_th, ..self }
    }

    pub fn with_p2(self, p2: PowerLevel<T>) -> Self {
        Self { p2, ..self }
    }

    /// ρ_p = (P₁/P₂)(d_sp/d_p)ᵃ
    pub fn rho_p(&self) -> T {
        let a = self.env.a();
        self.p1.watts() / self.p2.watts() * (self.d_sp / self.d_p).powf(a)
    }

    /// ρ_s = (P₂/P₁)(d_ps/d_s)ᵃ
    pub fn rho_s(&self) -> T {
        let a = self.env.a();
        self.p2.watts() / self.p1.watts() * (self.d_ps / self.d_s).powf(a)
    }

    pub fn kappa_p(&self) -> T {
        self.d_sp / self.d_p
    }

    pub fn kappa_s(&self) -> T {
        self.d_ps / self.d_s
    }

    /// c = I_th·d_spᵃ/P₂, so that 𝒫 = 1 − e^(−c).
    fn constraint_rate(&self) -> T {
        self.i_th.watts() * self.env.path_loss(self.d_sp) / self.p2.watts()
    }
}

fn check_triangle<T: Real>(name: &str, side: T, d0: T, d: T) -> Result<()> {
    let lo = (d0 - d).abs();
    let hi = d0 + d;
    let slack = T::lit(1e-12) * hi;
    if side < lo - slack || side > hi + slack {
        return Err(GaseError::InvalidScenario(format!(
            "{name} = {side} violates the triangle bound [{lo}, {hi}] set by d0 = {d0} and link length {d}"
        )));
    }
    Ok(())
}

/// ρ/(1−ρ)·[F(zρ) − F(z)], or 1 − zF(z) when ρ = 1: the mean of ln(1 + SINR)
/// for a Rayleigh link with inverse SNR z facing one Rayleigh interferer of
/// signal-to-interference ratio ρ.
pub fn interference_capacity_nats<T: Real>(z: T, rho: T) -> T {
    let f = |x: T| scaled_e1(x).expect("x > 0");
    let delta = rho - T::one();
    if delta.abs() < T::lit(RHO_MERGE_TOL) {
        T::one() - z * f(z)
    } else if delta.abs() <= T::lit(SERIES_BAND) && z * delta.abs() <= T::one() {
        -rho * near_unit_series(z, delta, f(z))
    } else {
        rho / (T::one() - rho) * (f(z * rho) - f(z))
    }
}

// Beyond the merge guard the difference quotient loses eps·F(z)/|ρ − 1| to
// cancellation; inside this band a Taylor series in ρ − 1 is used instead.
const SERIES_BAND: f64 = 1e-3;

// Σₙ zⁿF⁽ⁿ⁾(z)/n!·δⁿ⁻¹ for n = 1..6, with eₙ = zⁿF⁽ⁿ⁾ from
// eₙ = z·eₙ₋₁ + (−1)ⁿ(n−1)!. Each coefficient is at most 1/n in magnitude,
// so the truncation error is below δ⁶/7.
fn near_unit_series<T: Real>(z: T, delta: T, fz: T) -> T {
    let (mut e, mut fact, mut sign) = (fz, T::one(), -T::one());
    let (mut sum, mut pow) = (T::zero(), T::one());
    for n in 1..=6 {
        let k = T::lit(n as f64);
        e = z * e + sign * fact;
        fact = fact * k;
        sum = sum + e / fact * pow;
        pow = pow * delta;
        sign = -sign;
    }
    sum
}

/// 𝒫 = 1 − exp(−I_th·d_spᵃ/P₂).
pub fn prob_parallel<T: Real>(s: &CognitiveScenario<T>) -> T {
    -(-s.constraint_rate()).exp_m1()
}

/// Primary ergodic capacity during parallel transmission, conditioned on the
/// interference constraint being met.
pub fn primary_capacity_parallel<T: Real>(s: &CognitiveScenario<T>) -> T {
    let x = s.env.path_loss(s.d_p) * s.env.noise().watts() / s.p1.watts();
    let y = s.env.path_loss(s.d_p) * s.i_th.watts() / s.p1.watts();
    let rho = s.rho_p();
    let g_x = interference_capacity_nats(x, rho);
    let g_xy = interference_capacity_nats(x + y, rho);
    (g_x + (g_x - g_xy) / s.constraint_rate().exp_m1()) / T::LN_2()
}

/// Primary capacity with the constraint removed (I_th → ∞).
pub fn primary_capacity_unconstrained<T: Real>(s: &CognitiveScenario<T>) -> T {
    let x = s.env.path_loss(s.d_p) * s.env.noise().watts() / s.p1.watts();
    interference_capacity_nats(x, s.rho_p()) / T::LN_2()
}

/// Secondary ergodic capacity under primary interference.
pub fn secondary_capacity_parallel<T: Real>(s: &CognitiveScenario<T>) -> T {
    let z = s.env.path_loss(s.d_s) * s.env.noise().watts() / s.p2.watts();
    interference_capacity_nats(z, s.rho_s()) / T::LN_2()
}

/// P{λ₁Z₁ + λ₂Z₂ ≥ p_min} for independent unit exponentials Z₁, Z₂.
///
/// Evaluated as e^(−u)·(1 + u·(1 − e^(−(v−u)))/(v−u)) with u = p_min/λ_max and
/// v = p_min/λ_min, which covers the equal-rate case without a separate branch.
pub fn two_source_exceedance<T: Real>(lambda_1: T, lambda_2: T, p_min: T) -> T {
    let (hi, lo) = if lambda_1 >= lambda_2 {
        (lambda_1, lambda_2)
    } else {
        (lambda_2, lambda_1)
    };
    if !(hi > T::zero()) {
        return T::zero();
    }
    if !hi.is_finite() {
        return T::one();
    }
    let u = p_min / hi;
    let e_u = (-u).exp();
    if lo <= T::zero() {
        return e_u;
    }
    let w = p_min / lo - u;
    let phi = if w < T::lit(RHO_MERGE_TOL) {
        T::one() - T::lit(0.5) * w
    } else if w.is_finite() {
        -(-w).exp_m1() / w
    } else {
        T::zero()
    };
    e_u * (T::one() + u * phi)
}

/// Area where the summed received power of both transmitters exceeds P_min,
/// in m². Polar integral around S_P, using the θ ↔ 2π − θ symmetry.
pub fn affected_area_parallel<T: Real>(
    s: &CognitiveScenario<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let a = s.env.a();
    let p_min = s.env.p_min().watts();
    let (p1, p2) = (s.p1.watts(), s.p2.watts());
    // lengths in units of the stronger transmitter's footprint radius
    let r0 = (p1.max(p2) / p_min).powf(a.recip());
    let (q1, q2) = (p1 / p_min / r0.powf(a), p2 / p_min / r0.powf(a));
    let d0 = s.d0 / r0;
    let kernel = move |t: T, cos_th: T| {
        let ts2 = t * t + d0 * d0 - T::lit(2.0) * t * d0 * cos_th;
        let ts2 = ts2.max(T::zero());
        let l1 = if t == T::zero() { T::infinity() } else { q1 / t.powf(a) };
        let l2 = if ts2 == T::zero() {
            T::infinity()
        } else {
            q2 / ts2.powf(a * T::lit(0.5))
        };
        two_source_exceedance(l1, l2, T::one()) * t
    };

    let inner_spec = spec.with_rel_tol(spec.rel_tol * T::lit(1e-2));
    let radial = |theta: T| -> Result<T> {
        let c = theta.cos();
        let split = (d0 * c).max(T::zero());
        let head = if split > T::zero() {
            integrate(|t| kernel(t, c), T::zero(), split, &inner_spec)?.value
        } else {
            T::zero()
        };
        let tail = integrate_semi_infinite_scaled(|t| kernel(split + t, c), T::one(), &inner_spec)?
            .value;
        Ok(head + tail)
    };

    let half_turn = if d0 == T::zero() {
        T::PI() * radial(T::zero())?
    } else {
        let failure = std::cell::RefCell::new(None);
        let q = integrate(
            |theta| match radial(theta) {
                Ok(v) => v,
                Err(e) => {
                    failure.borrow_mut().get_or_insert(e);
                    T::zero()
                }
            },
            T::zero(),
            T::PI(),
            spec,
        );
        if let Some(e) = failure.into_inner() {
            return Err(e);
        }
        q?.value
    };
    Ok(T::lit(2.0) * r0 * r0 * half_turn)
}

fn p2p_capacity<T: Real>(s: &CognitiveScenario<T>) -> T {
    let snr = s.p1.watts() / (s.env.path_loss(s.d_p) * s.env.noise().watts());
    capacity_at_snr(snr)
}

/// η_CR = 𝒫·(C̄_p + C̄_s)/A_pt + (1 − 𝒫)·η_p2p(P₁, d_p).
///
/// `capacity` holds the total spectral efficiency 𝒫(C̄_p + C̄_s) + (1 − 𝒫)C̄_p2p
/// and `area` the parallel-transmission area.
pub fn gase_cognitive<T: Real>(
    s: &CognitiveScenario<T>,
    spec: &QuadratureSpec<T>,
) -> Result<GaseBreakdown<T>> {
    let p = prob_parallel(s);
    let c_p = primary_capacity_parallel(s);
    let c_s = secondary_capacity_parallel(s);
    let c_p2p = p2p_capacity(s);
    let a_pt = affected_area_parallel(s, spec)?;
    let a_1 = affected_area_single(&s.env, s.p1);
    let eta_pt = (c_p + c_s) / a_pt;
    let eta_st = c_p2p / a_1;
    let q = T::one() - p;
    Ok(GaseBreakdown {
        capacity: p * (c_p + c_s) + q * c_p2p,
        area: a_pt,
        gase: p * eta_pt + q * eta_st,
        components: vec![
            ("prob_parallel", p),
            ("capacity_primary", c_p),
            ("capacity_secondary", c_s),
            ("capacity_p2p", c_p2p),
            ("area_parallel", a_pt),
            ("area_primary", a_1),
            ("gase_parallel", eta_pt),
            ("gase_p2p", eta_st),
        ],
    })
}

/// η_X = (C̄_p′ + C̄_s)/A_pt, both pairs always active.
pub fn gase_x_channel<T: Real>(
    s: &CognitiveScenario<T>,
    spec: &QuadratureSpec<T>,
) -> Result<GaseBreakdown<T>> {
    let c_p = primary_capacity_unconstrained(s);
    let c_s = secondary_capacity_parallel(s);
    let a_pt = affected_area_parallel(s, spec)?;
    let capacity = c_p + c_s;
    Ok(GaseBreakdown {
        capacity,
        area: a_pt,
        gase: capacity / a_pt,
        components: vec![
            ("capacity_primary", c_p),
            ("capacity_secondary", c_s),
            ("area_parallel", a_pt),
        ],
    })
}
