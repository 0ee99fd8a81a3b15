//! Dual-hop relaying (decode-and-forward or amplify-and-forward) with the
//! source and relay transmitting in alternate, equal-length slots.

use crate::error::Result;
use crate::link_p2p::GaseBreakdown;
use crate::mathkernel::{
    bessel_k01_scaled, gamma_fn, golden_section_max, integrate_semi_infinite_scaled,
    scaled_e1, QuadratureSpec,
};
use crate::propagation::{
    affected_area_single, check_distance, mean_snr, PowerLevel, PropagationEnvironment,
};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelayProtocol {
    Df,
    Af,
}

impl RelayProtocol {
    pub fn as_str(self) -> &'static str {
        match self {
            RelayProtocol::Df => "df",
            RelayProtocol::Af => "af",
        }
    }
}

impl std::fmt::Display for RelayProtocol {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for RelayProtocol {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "df" => Ok(RelayProtocol::Df),
            "af" => Ok(RelayProtocol::Af),
            other => Err(format!("unknown relay protocol `{other}` (expected df or af)")),
        }
    }
}

/// Mean SNRs of the two hops and the equivalent-SNR laws they induce.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopPair<T> {
    pub snr_sr: T,
    pub snr_rd: T,
}

impl<T: Real> HopPair<T> {
    pub fn new(snr_sr: T, snr_rd: T) -> Self {
        Self { snr_sr, snr_rd }
    }

    /// α₁ = 1/γ̄_SR + 1/γ̄_RD
    pub fn alpha1(&self) -> T {
        self.snr_sr.recip() + self.snr_rd.recip()
    }

    /// β₁ = 1/√(γ̄_SR·γ̄_RD)
    pub fn beta1(&self) -> T {
        (self.snr_sr * self.snr_rd).sqrt().recip()
    }

    pub fn df_pdf(&self, g: T) -> T {
        if g < T::zero() {
            return T::zero();
        }
        let a1 = self.alpha1();
        a1 * (-a1 * g).exp()
    }

    pub fn df_cdf(&self, g: T) -> T {
        if g <= T::zero() {
            return T::zero();
        }
        -(-self.alpha1() * g).exp_m1()
    }

    /// 2β₁γe^(−α₁γ){α₁K1(2β₁γ) + 2β₁K0(2β₁γ)}, the density of Γ₁Γ₂/(Γ₁+Γ₂)
    /// used as the amplify-and-forward equivalent-SNR law.
    pub fn af_pdf(&self, g: T) -> T {
        let a1 = self.alpha1();
        if g < T::zero() {
            return T::zero();
        }
        if g == T::zero() {
            return a1;
        }
        let b1 = self.beta1();
        let x = T::lit(2.0) * b1 * g;
        let (k0e, k1e) = bessel_k01_scaled(x).expect("x > 0");
        x * (-(a1 + T::lit(2.0) * b1) * g).exp() * (a1 * k1e + T::lit(2.0) * b1 * k0e)
    }

    /// 1 − 2β₁γe^(−α₁γ)K1(2β₁γ)
    pub fn af_cdf(&self, g: T) -> T {
        if g <= T::zero() {
            return T::zero();
        }
        let b1 = self.beta1();
        let x = T::lit(2.0) * b1 * g;
        let (_, k1e) = bessel_k01_scaled(x).expect("x > 0");
        T::one() - x * (-(self.alpha1() + T::lit(2.0) * b1) * g).exp() * k1e
    }

    pub fn pdf(&self, protocol: RelayProtocol, g: T) -> T {
        match protocol {
            RelayProtocol::Df => self.df_pdf(g),
            RelayProtocol::Af => self.af_pdf(g),
        }
    }

    pub fn cdf(&self, protocol: RelayProtocol, g: T) -> T {
        match protocol {
            RelayProtocol::Df => self.df_cdf(g),
            RelayProtocol::Af => self.af_cdf(g),
        }
    }

    /// ½·F(α₁)/ln 2
    pub fn capacity_df(&self) -> T {
        scaled_e1(self.alpha1()).expect("alpha1 > 0") / (T::lit(2.0) * T::LN_2())
    }

    /// ½∫log2(1+γ)·f_AF(γ)dγ
    pub fn capacity_af(&self, spec: &QuadratureSpec<T>) -> Result<T> {
        let scale = self.alpha1().recip();
        let q = integrate_semi_infinite_scaled(
            |g: T| g.ln_1p() * self.af_pdf(g),
            scale,
            spec,
        )?;
        Ok(q.value / (T::lit(2.0) * T::LN_2()))
    }

    pub fn capacity(&self, protocol: RelayProtocol, spec: &QuadratureSpec<T>) -> Result<T> {
        match protocol {
            RelayProtocol::Df => Ok(self.capacity_df()),
            RelayProtocol::Af => self.capacity_af(spec),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualHopScenario<T> {
    pub env: PropagationEnvironment<T>,
    pub p_s: PowerLevel<T>,
    pub p_r: PowerLevel<T>,
    pub d_sr: T,
    pub d_rd: T,
}

impl<T: Real> DualHopScenario<T> {
    pub fn new(
        env: PropagationEnvironment<T>,
        p_s: PowerLevel<T>,
        p_r: PowerLevel<T>,
        d_sr: T,
        d_rd: T,
    ) -> Result<Self> {
        check_distance("d_sr must be positive", d_sr)?;
        check_distance("d_rd must be positive", d_rd)?;
        Ok(Self {
            env,
            p_s,
            p_r,
            d_sr,
            d_rd,
        })
    }

    pub fn hops(&self) -> HopPair<T> {
        HopPair::new(
            mean_snr(&self.env, self.p_s, self.d_sr).expect("validated"),
            mean_snr(&self.env, self.p_r, self.d_rd).expect("validated"),
        )
    }
}

pub fn df_equivalent_snr_pdf<T: Real>(s: &DualHopScenario<T>) -> impl Fn(T) -> T {
    let h = s.hops();
    move |g| h.df_pdf(g)
}

pub fn af_equivalent_snr_pdf<T: Real>(s: &DualHopScenario<T>) -> impl Fn(T) -> T {
    let h = s.hops();
    move |g| h.af_pdf(g)
}

pub fn ergodic_capacity_df<T: Real>(s: &DualHopScenario<T>) -> T {
    s.hops().capacity_df()
}

pub fn ergodic_capacity_af<T: Real>(s: &DualHopScenario<T>, spec: &QuadratureSpec<T>) -> Result<T> {
    s.hops().capacity_af(spec)
}

/// η_R = ½(C̄/A_S + C̄/A_R), assembled from the capacity and area operations.
pub fn gase_dualhop<T: Real>(
    s: &DualHopScenario<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<GaseBreakdown<T>> {
    let capacity = s.hops().capacity(protocol, spec)?;
    let area_s = affected_area_single(&s.env, s.p_s);
    let area_r = affected_area_single(&s.env, s.p_r);
    let half = T::lit(0.5);
    let gase = half * (capacity / area_s + capacity / area_r);
    Ok(GaseBreakdown {
        capacity,
        area: half * (area_s + area_r),
        gase,
        components: vec![
            ("area_source", area_s),
            ("area_relay", area_r),
            ("gase_source", half * capacity / area_s),
            ("gase_relay", half * capacity / area_r),
        ],
    })
}

/// Decode-and-forward GASE in its specialized closed form
/// a·F(α₁)/(8π ln2·Γ(2/a))·((P_S/P_min)^(−2/a) + (P_R/P_min)^(−2/a)).
pub fn gase_df_closed_form<T: Real>(s: &DualHopScenario<T>) -> T {
    let a = s.env.a();
    let p_min = s.env.p_min().watts();
    let e = -T::lit(2.0) / a;
    let g = gamma_fn(T::lit(2.0) / a).expect("2/a > 0");
    let f = scaled_e1(s.hops().alpha1()).expect("alpha1 > 0");
    a * f / (T::lit(8.0) * T::PI() * T::LN_2() * g)
        * ((s.p_s.watts() / p_min).powf(e) + (s.p_r.watts() / p_min).powf(e))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayOptimum<T> {
    pub p_s: PowerLevel<T>,
    pub p_r: PowerLevel<T>,
    pub gase: T,
}

/// Lower end of the search box as a fraction of `p_max`.
pub const POWER_FLOOR_RATIO: f64 = 1e-15;
const STARTS: [(f64, f64); 8] = [
    (1.0, 1.0),
    (0.8, 0.8),
    (0.5, 0.5),
    (0.2, 0.2),
    (1.0, 0.5),
    (0.5, 1.0),
    (0.8, 0.2),
    (0.2, 0.8),
];
const MAX_SWEEPS: usize = 60;

/// Maximizes η_R over P_S, P_R ∈ [p_max·1e−15, p_max].
///
/// Multi-start coordinate ascent on log-power axes. Each sweep runs a
/// golden-section search along P_S, along P_R and along the diagonal
/// (both scaled together).
pub fn optimize_relay_powers<T: Real>(
    env: &PropagationEnvironment<T>,
    d_sr: T,
    d_rd: T,
    p_max: PowerLevel<T>,
    protocol: RelayProtocol,
    spec: &QuadratureSpec<T>,
) -> Result<RelayOptimum<T>> {
    check_distance("d_sr must be positive", d_sr)?;
    check_distance("d_rd must be positive", d_rd)?;
    let hi = p_max.watts().ln();
    let lo = hi + T::lit(POWER_FLOOR_RATIO).ln();
    let width = hi - lo;
    let tol = T::lit(1e-7).max(T::lit(64.0) * T::epsilon()) * width.max(T::one());

    let to_power = |u: T| {
        if u >= hi {
            Ok(p_max)
        } else {
            PowerLevel::from_watts(u.exp())
        }
    };
    let eval = |u: T, v: T| -> Result<T> {
        let s = DualHopScenario::new(
            *env,
            to_power(u)?,
            to_power(v)?,
            d_sr,
            d_rd,
        )?;
        Ok(gase_dualhop(&s, protocol, spec)?.gase)
    };
    // Line searches cannot propagate errors through the closure; the first
    // failure is recorded and returned.
    let failure: std::cell::RefCell<Option<crate::GaseError>> = std::cell::RefCell::new(None);
    let objective = |u: T, v: T| -> T {
        match eval(u, v) {
            Ok(g) => g,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                T::neg_infinity()
            }
        }
    };

    let mut best: Option<(T, T, T)> = None;
    for &(fs, fr) in STARTS.iter() {
        let mut u = lo + T::lit(fs) * width;
        let mut v = lo + T::lit(fr) * width;
        let mut f = objective(u, v);
        for _ in 0..MAX_SWEEPS {
            let before = f;
            let (nu, fu) = golden_section_max(|x| objective(x, v), lo, hi, tol);
            if fu > f {
                u = nu;
                f = fu;
            }
            let (nv, fv) = golden_section_max(|y| objective(u, y), lo, hi, tol);
            if fv > f {
                v = nv;
                f = fv;
            }
            let t_lo = lo - u.min(v);
            let t_hi = hi - u.max(v);
            if t_hi > t_lo {
                let (t, ft) = golden_section_max(|t| objective(u + t, v + t), t_lo, t_hi, tol);
                if ft > f {
                    u = u + t;
                    v = v + t;
                    f = ft;
                }
            }
            if !(f > before * (T::one() + T::lit(1e-12))) {
                break;
            }
        }
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        if best.map_or(true, |(_, _, bf)| f > bf) {
            best = Some((u, v, f));
        }
    }
    let (u, v, gase) = best.expect("at least one start");
    Ok(RelayOptimum {
        p_s: to_power(u)?,
        p_r: to_power(v)?,
        gase,
    })
}
