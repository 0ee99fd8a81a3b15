//! Three-node cooperation: per fading realization the source either sends
//! directly to the destination or uses the two-hop relay path, whichever
//! gives the larger instantaneous capacity.
//!
//! Direct mode wins when Γ_SD² + 2Γ_SD > Γ_eq. Writing Γ_SD = γ̄_SD·Z and
//! y = x² + 2x, the mode probability and the conditional capacities reduce to
//! one-dimensional integrals in the S–D SNR x (direct mode) or in the relay
//! equivalent SNR γ (relay mode).

use crate::error::Result;
use crate::link_p2p::capacity_at_snr;
use crate::mathkernel::{
    bessel_k01_scaled, erfcx, integrate_semi_infinite_scaled, scaled_e1, QuadratureSpec,
};
use crate::propagation::{
    affected_area_single, check_distance, mean_snr, PowerLevel, PropagationEnvironment,
};
use crate::relay_dualhop::{HopPair, RelayProtocol};
use crate::scalar::Real;
use crate::GaseError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoopScenario<T> {
    pub env: PropagationEnvironment<T>,
    pub p_s: PowerLevel<T>,
    pub p_r: PowerLevel<T>,
    pub d_sd: T,
    pub d_sr: T,
    pub d_rd: T,
}

impl<T: Real> CoopScenario<T> {
    pub fn new(
        env: PropagationEnvironment<T>,
        p_s: PowerLevel<T>,
        p_r: PowerLevel<T>,
        d_sd: T,
        d_sr: T,
        d_rd: T,
    ) -> Result<Self> {
        check_distance("d_sd must be positive", d_sd)?;
        check_distance("d_sr must be positive", d_sr)?;
        check_distance("d_rd must be positive", d_rd)?;
        Ok(Self {
            env,
            p_s,
            p_r,
            d_sd,
            d_sr,
            d_rd,
        })
    }

    pub fn snr_sd(&self) -> T {
        mean_snr(&self.env, self.p_s, self.d_sd).expect("validated")
    }

    pub fn hops(&self) -> HopPair<T> {
        HopPair::new(
            mean_snr(&self.env, self.p_s, self.d_sr).expect("validated"),
            mean_snr(&self.env, self.p_r, self.d_rd).expect("validated"),
        )
    }

    /// α₂ = 2/γ̄_SR + 2/γ̄_RD + 1/γ̄_SD
    pub fn alpha2(&self) -> T {
        T::lit(2.0) * self.hops().alpha1() + self.snr_sd().recip()
    }

    /// β₂ = 1/γ̄_SD + 1/γ̄_SR + 1/γ̄_RD
    pub fn beta2(&self) -> T {
        self.hops().alpha1() + self.snr_sd().recip()
    }
}

/// 𝔇(a₁, a₂) = ∫₀^∞ e^(−a₁t² − a₂t)dt = ½√(π/a₁)·erfcx(a₂/(2√a₁)).
pub fn special_integral_d<T: Real>(a1: T, a2: T) -> Result<T> {
    if !(a1 > T::zero()) {
        return Err(GaseError::domain("special integral D requires a1 > 0", a1.as_f64()));
    }
    if !(a2 >= T::zero()) {
        return Err(GaseError::domain("special integral D requires a2 >= 0", a2.as_f64()));
    }
    let s = a1.sqrt();
    Ok(T::lit(0.5) * (T::PI() / a1).sqrt() * erfcx(a2 / (T::lit(2.0) * s))?)
}

/// 𝔄 with an extra linear decay: ∫₀^∞ 2b₁y·e^(−b₂y − ct)·K1(2b₁y)dt, y = t² + 2t.
///
/// `c = 0` gives the two-argument form [`special_integral_a`].
pub fn special_integral_a_general<T: Real>(
    b1: T,
    b2: T,
    c: T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    if !(b1 > T::zero()) {
        return Err(GaseError::domain("special integral A requires b1 > 0", b1.as_f64()));
    }
    if !(b2 > T::zero()) {
        return Err(GaseError::domain("special integral A requires b2 > 0", b2.as_f64()));
    }
    if !(c >= T::zero()) {
        return Err(GaseError::domain("special integral A requires c >= 0", c.as_f64()));
    }
    let two = T::lit(2.0);
    let f = |t: T| {
        let y = t * t + two * t;
        if y == T::zero() {
            return T::one();
        }
        let x = two * b1 * y;
        let (_, k1e) = bessel_k01_scaled(x).expect("x > 0");
        x * k1e * (-(b2 + two * b1) * y - c * t).exp()
    };
    let scale = (b2.sqrt() + b2 + c).recip();
    Ok(integrate_semi_infinite_scaled(f, scale, spec)?.value)
}

/// 𝔄(b₁, b₂) = ∫₀^∞ 2b₁(t²+2t)·e^(−b₂(t²+2t))·K1(2b₁(t²+2t))dt.
pub fn special_integral_a<T: Real>(b1: T, b2: T, spec: &QuadratureSpec<T>) -> Result<T> {
    special_integral_a_general(b1, b2, T::zero(), spec)
}

/// P{Γ_SD² + 2Γ_SD ≤ Γ_eq}, computed directly (no cancellation when small).
pub fn prob_relay<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let g = s.snr_sd();
    let h = s.hops();
    let integral = match protocol {
        RelayProtocol::Df => special_integral_d(h.alpha1(), s.alpha2())?,
        RelayProtocol::Af => special_integral_a_general(h.beta1(), h.alpha1(), g.recip(), spec)?,
    };
    Ok((integral / g).min(T::one()).max(T::zero()))
}

/// P{Γ_SD² + 2Γ_SD > Γ_eq}: 1 − 𝔇(α₁, α₂)/γ̄_SD for DF and
/// 1 − 𝔄(β₁, α₁; 1/γ̄_SD)/γ̄_SD for AF.
pub fn prob_direct<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    Ok(T::one() - prob_relay(s, protocol, spec)?)
}

// ∫₀^∞ w(x)·e^(−x/γ̄)/γ̄·F_eq(x² + 2x) dx in the S–D SNR variable
fn direct_moment<T: Real>(
    g: T,
    h: &HopPair<T>,
    protocol: RelayProtocol,
    weight: impl Fn(T) -> T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let two = T::lit(2.0);
    let f = |x: T| {
        let e = (-x / g).exp();
        if e == T::zero() {
            return T::zero();
        }
        weight(x) * e / g * h.cdf(protocol, x * x + two * x)
    };
    Ok(integrate_semi_infinite_scaled(f, g, spec)?.value)
}

// ∫₀^∞ w(γ)·f_eq(γ)·(1 − e^(−(√(1+γ)−1)/γ̄)) dγ in the relay SNR variable
fn relay_moment<T: Real>(
    g: T,
    h: &HopPair<T>,
    protocol: RelayProtocol,
    weight: impl Fn(T) -> T,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let f = |y: T| {
        let xi = y.ln_1p() * T::lit(0.5);
        let xi = xi.exp_m1();
        weight(y) * h.pdf(protocol, y) * -(-xi / g).exp_m1()
    };
    Ok(integrate_semi_infinite_scaled(f, h.alpha1().recip(), spec)?.value)
}

/// C̄_d: mean of log2(1 + Γ_SD) given that direct mode is selected.
///
/// Returns 0 when direct mode has zero probability at working precision.
pub fn conditional_capacity_direct<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let (g, h) = (s.snr_sd(), s.hops());
    let mass = direct_moment(g, &h, protocol, |_| T::one(), spec)?;
    if mass <= T::zero() {
        return Ok(T::zero());
    }
    let num = direct_moment(g, &h, protocol, |x| x.ln_1p(), spec)?;
    Ok(num / (mass * T::LN_2()))
}

/// C̄_r: mean of ½·log2(1 + Γ_eq) given that relay mode is selected.
///
/// Returns 0 when relay mode has zero probability at working precision.
pub fn conditional_capacity_relay<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let (g, h) = (s.snr_sd(), s.hops());
    let mass = relay_moment(g, &h, protocol, |_| T::one(), spec)?;
    if mass <= T::zero() {
        return Ok(T::zero());
    }
    let num = relay_moment(g, &h, protocol, |y| y.ln_1p(), spec)?;
    Ok(num / (T::lit(2.0) * T::LN_2() * mass))
}

/// Decode-and-forward C̄_d in closed form:
/// [γ̄_SD·F(1/γ̄_SD) − ∫ln(1+t)e^(−α₁t² − α₂t)dt] / (ln2·(γ̄_SD − 𝔇(α₁, α₂))).
pub fn conditional_capacity_direct_df_closed<T: Real>(
    s: &CoopScenario<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let g = s.snr_sd();
    let (a1, a2) = (s.hops().alpha1(), s.alpha2());
    let tail = integrate_semi_infinite_scaled(
        |t: T| t.ln_1p() * (-a1 * t * t - a2 * t).exp(),
        (a1.sqrt() + a2).recip(),
        spec,
    )?
    .value;
    let d = special_integral_d(a1, a2)?;
    Ok((g * scaled_e1(g.recip())? - tail) / (T::LN_2() * (g - d)))
}

/// Decode-and-forward C̄_r in closed form:
/// γ̄_SD/(2 ln2·𝔇)·[F(α₁) − α₁∫ln(1+t)e^(−α₁t − (√(1+t)−1)/γ̄_SD)dt].
pub fn conditional_capacity_relay_df_closed<T: Real>(
    s: &CoopScenario<T>,
    spec: &QuadratureSpec<T>,
) -> Result<T> {
    let g = s.snr_sd();
    let (a1, a2) = (s.hops().alpha1(), s.alpha2());
    let integral = integrate_semi_infinite_scaled(
        |t: T| {
            let xi = (t.ln_1p() * T::lit(0.5)).exp_m1();
            t.ln_1p() * (-a1 * t - xi / g).exp()
        },
        a1.recip(),
        spec,
    )?
    .value;
    let d = special_integral_d(a1, a2)?;
    Ok(g / (T::lit(2.0) * T::LN_2() * d) * (scaled_e1(a1)? - a1 * integral))
}

/// Conditional density of Γ_C given direct mode, as a function of γ.
pub fn conditional_pdf_direct<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<impl Fn(T) -> T> {
    let (g, h) = (s.snr_sd(), s.hops());
    let norm = g * prob_direct(s, protocol, spec)?;
    Ok(move |y: T| {
        if y <= T::zero() {
            return T::zero();
        }
        let xi1 = (y.ln_1p() * T::lit(0.5)).exp();
        let xi = xi1 - T::one();
        (-xi / g).exp() * h.cdf(protocol, y) / (T::lit(2.0) * xi1 * norm)
    })
}

/// Conditional density of Γ_C given relay mode, as a function of γ.
pub fn conditional_pdf_relay<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<impl Fn(T) -> T> {
    let (g, h) = (s.snr_sd(), s.hops());
    let norm = prob_relay(s, protocol, spec)?;
    Ok(move |y: T| {
        if y <= T::zero() {
            return T::zero();
        }
        let xi = (y.ln_1p() * T::lit(0.5)).exp_m1();
        h.pdf(protocol, y) * -(-xi / g).exp_m1() / norm
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoopResult<T> {
    pub p_direct: T,
    pub p_relay: T,
    pub c_direct: T,
    pub c_relay: T,
    pub gase: T,
    /// 𝒫_d·C̄_d + 𝒫_r·C̄_r
    pub spectral_efficiency: T,
    pub area_source: T,
    pub area_relay: T,
    /// 𝒫_d·C̄_d/A_S
    pub gase_direct: T,
    /// 𝒫_r·½(C̄_r/A_S + C̄_r/A_R)
    pub gase_relay: T,
}

/// η_C = 𝒫_d·C̄_d/A_S + 𝒫_r·½(C̄_r/A_S + C̄_r/A_R).
pub fn gase_coop<T: Real>(
    s: &CoopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<CoopResult<T>> {
    let p_relay = prob_relay(s, protocol, spec)?;
    let p_direct = T::one() - p_relay;
    let c_direct = conditional_capacity_direct(s, protocol, spec)?;
    let c_relay = conditional_capacity_relay(s, protocol, spec)?;
    let area_source = affected_area_single(&s.env, s.p_s);
    let area_relay = affected_area_single(&s.env, s.p_r);
    let gase_direct = p_direct * c_direct / area_source;
    let gase_relay = p_relay * T::lit(0.5) * (c_relay / area_source + c_relay / area_relay);
    Ok(CoopResult {
        p_direct,
        p_relay,
        c_direct,
        c_relay,
        gase: gase_direct + gase_relay,
        spectral_efficiency: p_direct * c_direct + p_relay * c_relay,
        area_source,
        area_relay,
        gase_direct,
        gase_relay,
    })
}

/// Unconditional ergodic capacity of the S–D link alone.
pub fn direct_link_capacity<T: Real>(s: &CoopScenario<T>) -> T {
    capacity_at_snr(s.snr_sd())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkernel::integrate_semi_infinite;

    fn spec() -> QuadratureSpec<f64> {
        QuadratureSpec::default()
    }

    fn env() -> PropagationEnvironment<f64> {
        PropagationEnvironment::from_dbm(4.0, -100.0, -80.0).unwrap()
    }

    // scenario with prescribed mean SNRs (unit distances, N = 1 W)
    fn by_snr(g_sd: f64, g_sr: f64, g_rd: f64) -> CoopScenario<f64> {
        let e = PropagationEnvironment::new(
            4.0,
            PowerLevel::from_watts(1.0).unwrap(),
            PowerLevel::from_watts(1e-3).unwrap(),
        )
        .unwrap();
        let d_sd = (g_sr / g_sd).powf(0.25);
        CoopScenario::new(
            e,
            PowerLevel::from_watts(g_sr).unwrap(),
            PowerLevel::from_watts(g_rd).unwrap(),
            d_sd,
            1.0,
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn d_integral_forms() {
        assert!((special_integral_d(1.0, 1.0).unwrap() - 0.545_641_360_765_047f64).abs() < 1e-12);
        for &(a1, a2) in &[(1.0f64, 0.0), (0.3, 2.0), (5.0, 0.1), (1e-4, 3.0), (2.0, 40.0)] {
            let closed = special_integral_d(a1, a2).unwrap();
            let q = integrate_semi_infinite(|t: f64| (-a1 * t * t - a2 * t).exp(), &spec())
                .unwrap()
                .value;
            assert!((closed / q - 1.0).abs() < 1e-8, "({a1}, {a2})");
        }
        let a0 = special_integral_d(2.0f64, 0.0).unwrap();
        assert!((a0 - 0.5 * (std::f64::consts::PI / 2.0).sqrt()).abs() < 1e-14);
        assert!((special_integral_d(1e-12f64, 2.0).unwrap() - 0.5).abs() < 1e-9);
        assert!(special_integral_d(0.0f64, 1.0).is_err());
    }

    #[test]
    fn a_integral_value_and_bound() {
        let a = special_integral_a(0.1f64, 0.1, &spec()).unwrap();
        assert!((a - 1.262_834_64).abs() < 1e-7, "{a}");
        for &(b1, b2) in &[(0.1f64, 0.1), (0.5, 1.0), (0.01, 3.0)] {
            let a = special_integral_a(b1, b2, &spec()).unwrap();
            assert!(a <= special_integral_d(b2, 2.0 * b2).unwrap());
        }
        assert!(special_integral_a(0.1f64, 1e6, &spec()).unwrap() < 1e-5);
    }

    #[test]
    fn probabilities_sum_to_one() {
        for proto in [RelayProtocol::Df, RelayProtocol::Af] {
            let s = by_snr(10.0, 10.0, 10.0);
            let pd = prob_direct(&s, proto, &spec()).unwrap();
            let pr = prob_relay(&s, proto, &spec()).unwrap();
            assert_eq!(pd + pr, 1.0);
            assert!(pd > 0.0 && pd < 1.0);
        }
    }

    #[test]
    fn weak_relay_forces_direct_mode() {
        let s = by_snr(10.0, 1e-8, 10.0);
        assert!(prob_direct(&s, RelayProtocol::Df, &spec()).unwrap() > 1.0 - 1e-6);
        assert!(prob_direct(&s, RelayProtocol::Af, &spec()).unwrap() > 1.0 - 1e-6);
    }

    #[test]
    fn af_probability_matches_generic_integral() {
        // P_d = (1/γ̄)∫F_eq(x²+2x)e^(−x/γ̄)dx evaluated with the AF cdf
        for &(g, g1, g2) in &[(10.0, 10.0, 10.0), (3.0, 50.0, 20.0), (100.0, 5.0, 500.0)] {
            let s = by_snr(g, g1, g2);
            let h = s.hops();
            let direct = integrate_semi_infinite(
                |x: f64| h.af_cdf(x * x + 2.0 * x) * (-x / g).exp() / g,
                &spec(),
            )
            .unwrap()
            .value;
            let pd = prob_direct(&s, RelayProtocol::Af, &spec()).unwrap();
            assert!((pd - direct).abs() < 1e-8, "{pd} vs {direct}");
        }
    }

    #[test]
    fn df_closed_forms_match_quadrature_route() {
        for &(g, g1, g2) in &[(10.0, 10.0, 10.0), (2.0, 30.0, 15.0), (50.0, 5.0, 8.0)] {
            let s = by_snr(g, g1, g2);
            let cd = conditional_capacity_direct(&s, RelayProtocol::Df, &spec()).unwrap();
            let cd2 = conditional_capacity_direct_df_closed(&s, &spec()).unwrap();
            assert!((cd / cd2 - 1.0).abs() < 1e-7, "{cd} vs {cd2}");
            let cr = conditional_capacity_relay(&s, RelayProtocol::Df, &spec()).unwrap();
            let cr2 = conditional_capacity_relay_df_closed(&s, &spec()).unwrap();
            assert!((cr / cr2 - 1.0).abs() < 1e-7, "{cr} vs {cr2}");
        }
    }

    #[test]
    fn conditional_pdfs_normalize() {
        for proto in [RelayProtocol::Df, RelayProtocol::Af] {
            for &(g, g1, g2) in &[(10.0, 10.0, 10.0), (3.0, 40.0, 25.0)] {
                let s = by_snr(g, g1, g2);
                let fd = conditional_pdf_direct(&s, proto, &spec()).unwrap();
                let fr = conditional_pdf_relay(&s, proto, &spec()).unwrap();
                let nd = integrate_semi_infinite_scaled(&fd, g * (g + 2.0), &spec()).unwrap();
                let nr = integrate_semi_infinite_scaled(&fr, 1.0 / s.hops().alpha1(), &spec())
                    .unwrap();
                assert!((nd.value - 1.0).abs() < 1e-6, "{proto} direct {}", nd.value);
                assert!((nr.value - 1.0).abs() < 1e-6, "{proto} relay {}", nr.value);
            }
        }
    }

    #[test]
    fn strong_direct_link_limit() {
        let s = by_snr(1e6, 10.0, 10.0);
        let cd = conditional_capacity_direct(&s, RelayProtocol::Df, &spec()).unwrap();
        assert!((cd / direct_link_capacity(&s) - 1.0).abs() < 0.01);
    }

    #[test]
    fn vanishing_direct_link_limit() {
        for proto in [RelayProtocol::Df, RelayProtocol::Af] {
            let s = by_snr(1e-6, 10.0, 20.0);
            let cr = conditional_capacity_relay(&s, proto, &spec()).unwrap();
            let dual = s.hops().capacity(proto, &spec()).unwrap();
            assert!((cr / dual - 1.0).abs() < 0.01, "{proto}: {cr} vs {dual}");
        }
    }

    #[test]
    fn relay_capacity_grows_with_common_scaling() {
        let a = conditional_capacity_relay(&by_snr(5.0, 8.0, 12.0), RelayProtocol::Df, &spec());
        let b = conditional_capacity_relay(&by_snr(10.0, 16.0, 24.0), RelayProtocol::Df, &spec());
        assert!(b.unwrap() > a.unwrap());
    }

    #[test]
    fn fig4_point_beats_direct_link() {
        let s = CoopScenario::new(
            env(),
            PowerLevel::from_dbm(16.0).unwrap(),
            PowerLevel::from_dbm(10.0).unwrap(),
            1000.0,
            500.0,
            500.0,
        )
        .unwrap();
        let r = gase_coop(&s, RelayProtocol::Df, &spec()).unwrap();
        let p2p = direct_link_capacity(&s) / r.area_source;
        assert!(r.gase >= p2p);
        assert!((r.gase - (r.gase_direct + r.gase_relay)).abs() < 1e-20);
    }
}
