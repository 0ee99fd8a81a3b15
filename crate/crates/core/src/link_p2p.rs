//! Point-to-point link: ergodic capacity, GASE and the GASE-optimal transmit
//! power.

use crate::error::{GaseError, Result};
use crate::mathkernel::{find_root_bracketed, scaled_e1};
use crate::propagation::{affected_area_single, check_distance, PowerLevel, PropagationEnvironment};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct P2pScenario<T> {
    pub env: PropagationEnvironment<T>,
    pub p_t: PowerLevel<T>,
    pub d: T,
}

impl<T: Real> P2pScenario<T> {
    pub fn new(env: PropagationEnvironment<T>, p_t: PowerLevel<T>, d: T) -> Result<Self> {
        check_distance("link distance must be positive", d)?;
        Ok(Self { env, p_t, d })
    }

    /// x = dᵃN/P_t, the inverse mean SNR.
    pub fn inverse_snr(&self) -> T {
        self.env.path_loss(self.d) * self.env.noise().watts() / self.p_t.watts()
    }
}

/// Capacity, affected area and their ratio, with labelled sub-terms.
#[derive(Debug, Clone, PartialEq)]
pub struct GaseBreakdown<T> {
    /// bps/Hz
    pub capacity: T,
    /// m²
    pub area: T,
    /// bps/Hz/m²
    pub gase: T,
    pub components: Vec<(&'static str, T)>,
}

impl<T: Real> GaseBreakdown<T> {
    pub fn component(&self, name: &str) -> Option<T> {
        self.components
            .iter()
            .find(|(k, _)| *k == name)
            .map(|&(_, v)| v)
    }
}

/// Rayleigh ergodic capacity of a link with mean SNR `snr`: F(1/snr)/ln 2.
pub fn capacity_at_snr<T: Real>(snr: T) -> T {
    if !(snr > T::zero()) {
        return T::zero();
    }
    let x = snr.recip();
    if !x.is_finite() {
        return T::zero();
    }
    scaled_e1(x).expect("x > 0") / T::LN_2()
}

pub fn ergodic_capacity_p2p<T: Real>(s: &P2pScenario<T>) -> T {
    let x = s.inverse_snr();
    scaled_e1(x).expect("x > 0") / T::LN_2()
}

pub fn gase_p2p<T: Real>(s: &P2pScenario<T>) -> GaseBreakdown<T> {
    let capacity = ergodic_capacity_p2p(s);
    let area = affected_area_single(&s.env, s.p_t);
    GaseBreakdown {
        capacity,
        area,
        gase: capacity / area,
        components: vec![("capacity", capacity), ("area", area)],
    }
}

/// Residual (x + 2/a)·F(x) − 1 of the optimal-power condition.
pub fn optimal_power_residual<T: Real>(a: T, x: T) -> T {
    (x + T::lit(2.0) / a) * scaled_e1(x).expect("x > 0") - T::one()
}

/// GASE-optimal transmit power, solved on x = dᵃN/P and mapped back.
///
/// `bracket` is a power range; by default x ∈ [1e−6, 1e3] is searched.
pub fn optimal_power_p2p<T: Real>(
    env: &PropagationEnvironment<T>,
    d: T,
    bracket: Option<(PowerLevel<T>, PowerLevel<T>)>,
) -> Result<PowerLevel<T>> {
    check_distance("link distance must be positive", d)?;
    let a = env.a();
    if !(a > T::lit(2.0)) {
        return Err(GaseError::NoInteriorOptimum { a: a.as_f64() });
    }
    let scale = env.path_loss(d) * env.noise().watts();
    let (x_lo, x_hi) = match bracket {
        Some((p1, p2)) => {
            let (x1, x2) = (scale / p1.watts(), scale / p2.watts());
            (x1.min(x2), x1.max(x2))
        }
        None => (T::lit(1e-6), T::lit(1e3)),
    };
    let tol = T::lit(1e-12).max(T::lit(16.0) * T::epsilon());
    let x = find_root_bracketed(|x| optimal_power_residual(a, x), x_lo, x_hi, tol)?;
    PowerLevel::from_watts(scale / x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1(a: f64) -> PropagationEnvironment<f64> {
        PropagationEnvironment::from_dbm(a, -100.0, -90.0).unwrap()
    }

    fn scen(a: f64, p_w: f64) -> P2pScenario<f64> {
        P2pScenario::new(fig1(a), PowerLevel::from_watts(p_w).unwrap(), 1000.0).unwrap()
    }

    #[test]
    fn capacity_at_snr_ten() {
        let c = ergodic_capacity_p2p(&scen(4.0, 1.0));
        assert!((c - 2.906_514_8).abs() < 1e-6, "{c}");
        assert!((capacity_at_snr(10.0) - c).abs() < 1e-12);
        assert!(ergodic_capacity_p2p(&scen(4.0, 1e-12)) < 1e-8);
        assert!(ergodic_capacity_p2p(&scen(4.0, 2.0)) > c);
    }

    #[test]
    fn fig1_operating_point() {
        let b = gase_p2p(&scen(4.0, 1.0));
        assert!((b.gase / 1.043_945_26e-6 - 1.0).abs() < 1e-6, "{}", b.gase);
        assert_eq!(b.gase, b.capacity / b.area);
        assert_eq!(b.component("area"), Some(b.area));
    }

    #[test]
    fn optimal_power_a4() {
        let e = fig1(4.0);
        let p = optimal_power_p2p(&e, 1000.0, None).unwrap();
        let x = 1e12 * 1e-13 / p.watts();
        assert!((x - 0.258_946_908_7).abs() < 1e-9);
        assert!(optimal_power_residual(4.0, x).abs() <= 1e-9);
        assert!((p.dbm() - 25.868).abs() < 0.01);
        let half_n = e.with_noise(PowerLevel::from_watts(0.5e-13).unwrap());
        let p_half = optimal_power_p2p(&half_n, 1000.0, None).unwrap();
        assert!((p_half.watts() / p.watts() - 0.5).abs() < 1e-9);
    }

    #[test]
    fn optimum_refused_for_a_at_most_two() {
        for &a in &[1.5, 2.0] {
            let r = optimal_power_p2p(&fig1(a), 1000.0, None);
            assert!(matches!(r, Err(GaseError::NoInteriorOptimum { .. })));
        }
    }

    #[test]
    fn bracket_without_sign_change() {
        let e = fig1(4.0);
        let lo = PowerLevel::from_watts(1e-3).unwrap();
        let hi = PowerLevel::from_watts(1e-2).unwrap();
        let r = optimal_power_p2p(&e, 1000.0, Some((lo, hi)));
        assert!(matches!(r, Err(GaseError::NoSignChange { .. })));
    }

    #[test]
    fn f32_gase() {
        let e = PropagationEnvironment::<f32>::from_dbm(4.0, -100.0, -90.0).unwrap();
        let s = P2pScenario::new(e, PowerLevel::from_watts(1.0).unwrap(), 1000.0).unwrap();
        let g = gase_p2p(&s).gase;
        assert!((g as f64 / 1.043_945_26e-6 - 1.0).abs() < 1e-4);
    }
}
