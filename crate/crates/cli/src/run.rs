//! Evaluation, sweeps, optimization and Monte Carlo verification of a
//! validated [`ScenarioConfig`].

use rayon::prelude::*;

use gase_core::cognitive_underlay::{
    affected_area_parallel, gase_cognitive, gase_x_channel, prob_parallel,
    primary_capacity_parallel, primary_capacity_unconstrained, secondary_capacity_parallel,
    CognitiveScenario,
};
use gase_core::coop_threenode::{direct_link_capacity, gase_coop, prob_direct, CoopScenario};
use gase_core::link_p2p::{gase_p2p, optimal_power_p2p, optimal_power_residual, P2pScenario};
use gase_core::mathkernel::QuadratureSpec;
use gase_core::mc_oracle::{
    certified_radius, mc_affected_area, mc_ergodic_capacity, mc_mean, mc_mode_probability,
    rayleigh_tail_bound, two_source_tail_bound, Draws, McConfig, McEstimate,
};
use gase_core::propagation::{affected_area_single, PowerLevel, PropagationEnvironment};
use gase_core::relay_dualhop::{gase_dualhop, optimize_relay_powers, DualHopScenario, RelayProtocol};
use gase_core::GaseError;

use crate::config::{ConfigErrors, ScenarioConfig, ScenarioKind};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: u64 = 1_000_000;
/// Oracle agreement band in standard errors.
pub const VERIFY_SIGMA: f64 = 3.0;
/// Excluded spatial tail, relative to the closed-form area, for area checks.
const TAIL_FRACTION: f64 = 1e-7;

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("{0}")]
    Config(#[from] ConfigErrors),
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Model(#[from] GaseError),
    #[error("non-finite value in column `{column}` at {param} = {value}")]
    NonFinite {
        column: String,
        param: String,
        value: f64,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl RunError {
    /// 1 for usage, configuration and domain errors, 3 for numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Model(
                GaseError::NonConvergence { .. }
                | GaseError::NoSignChange { .. }
                | GaseError::TailCertification { .. },
            )
            | RunError::NonFinite { .. } => 3,
            _ => 1,
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

/// Numeric table with a fixed column order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// 12 significant digits in scientific notation.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

impl Table {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|&v| fmt_num(v)).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

pub enum Scenario {
    P2p(P2pScenario<f64>),
    Dualhop(DualHopScenario<f64>, RelayProtocol),
    Coop(CoopScenario<f64>, RelayProtocol),
    Cognitive(CognitiveScenario<f64>),
    Xchannel(CognitiveScenario<f64>),
}

fn dbm(v: f64) -> Result<PowerLevel<f64>, GaseError> {
    PowerLevel::from_dbm(v)
}

pub fn environment(cfg: &ScenarioConfig) -> Result<PropagationEnvironment<f64>, GaseError> {
    PropagationEnvironment::from_dbm(cfg.req("env.a"), cfg.req("env.noise_dbm"), cfg.req("env.p_min_dbm"))
}

pub fn build(cfg: &ScenarioConfig) -> Result<Scenario, GaseError> {
    let env = environment(cfg)?;
    let g = |k: &str| cfg.req(k);
    let protocol = || cfg.protocol.expect("validated");
    Ok(match cfg.kind {
        ScenarioKind::P2p => Scenario::P2p(P2pScenario::new(env, dbm(g("power.p_t"))?, g("geometry.d"))?),
        ScenarioKind::Dualhop => Scenario::Dualhop(
            DualHopScenario::new(
                env,
                dbm(g("power.p_s"))?,
                dbm(g("power.p_r"))?,
                g("geometry.d_sr"),
                g("geometry.d_rd"),
            )?,
            protocol(),
        ),
        ScenarioKind::Coop => Scenario::Coop(
            CoopScenario::new(
                env,
                dbm(g("power.p_s"))?,
                dbm(g("power.p_r"))?,
                g("geometry.d_sd"),
                g("geometry.d_sr"),
                g("geometry.d_rd"),
            )?,
            protocol(),
        ),
        ScenarioKind::Cognitive | ScenarioKind::Xchannel => {
            // the X channel ignores the threshold
            let i_th = cfg.get("threshold.i_th").unwrap_or(60.0);
            let s = CognitiveScenario::new(
                env,
                dbm(g("power.p1"))?,
                dbm(g("power.p2"))?,
                g("geometry.d_p"),
                g("geometry.d_s"),
                g("geometry.d_sp"),
                g("geometry.d_ps"),
                g("geometry.d0"),
                dbm(i_th)?,
            )?;
            if cfg.kind == ScenarioKind::Cognitive {
                Scenario::Cognitive(s)
            } else {
                Scenario::Xchannel(s)
            }
        }
    })
}

/// Output columns after the swept parameter.
pub fn result_columns(kind: ScenarioKind) -> &'static [&'static str] {
    match kind {
        ScenarioKind::P2p => &["capacity", "area", "gase"],
        ScenarioKind::Dualhop => &[
            "capacity",
            "area",
            "gase",
            "area_source",
            "area_relay",
            "gase_source",
            "gase_relay",
        ],
        ScenarioKind::Coop => &[
            "capacity",
            "area",
            "gase",
            "p_direct",
            "p_relay",
            "capacity_direct",
            "capacity_relay",
            "area_source",
            "area_relay",
            "gase_direct",
            "gase_relay",
            "capacity_p2p",
            "gase_p2p",
        ],
        ScenarioKind::Cognitive => &[
            "capacity",
            "area",
            "gase",
            "prob_parallel",
            "capacity_primary",
            "capacity_secondary",
            "capacity_p2p",
            "area_primary",
            "gase_parallel",
            "gase_p2p",
            "capacity_x",
            "gase_x",
        ],
        ScenarioKind::Xchannel => &["capacity", "area", "gase", "capacity_primary", "capacity_secondary"],
    }
}

/// Metric values in [`result_columns`] order.
pub fn evaluate(cfg: &ScenarioConfig, spec: &QuadratureSpec<f64>) -> Result<Vec<f64>, GaseError> {
    Ok(match build(cfg)? {
        Scenario::P2p(s) => {
            let b = gase_p2p(&s);
            vec![b.capacity, b.area, b.gase]
        }
        Scenario::Dualhop(s, p) => {
            let b = gase_dualhop(&s, p, spec)?;
            let c = |k| b.component(k).expect("dual-hop component");
            vec![
                b.capacity,
                b.area,
                b.gase,
                c("area_source"),
                c("area_relay"),
                c("gase_source"),
                c("gase_relay"),
            ]
        }
        Scenario::Coop(s, p) => {
            let r = gase_coop(&s, p, spec)?;
            let c_p2p = direct_link_capacity(&s);
            vec![
                r.spectral_efficiency,
                r.area_source,
                r.gase,
                r.p_direct,
                r.p_relay,
                r.c_direct,
                r.c_relay,
                r.area_source,
                r.area_relay,
                r.gase_direct,
                r.gase_relay,
                c_p2p,
                c_p2p / r.area_source,
            ]
        }
        Scenario::Cognitive(s) => {
            let b = gase_cognitive(&s, spec)?;
            let c = |k| b.component(k).expect("cognitive component");
            let c_x = primary_capacity_unconstrained(&s) + c("capacity_secondary");
            vec![
                b.capacity,
                b.area,
                b.gase,
                c("prob_parallel"),
                c("capacity_primary"),
                c("capacity_secondary"),
                c("capacity_p2p"),
                c("area_primary"),
                c("gase_parallel"),
                c("gase_p2p"),
                c_x,
                c_x / b.area,
            ]
        }
        Scenario::Xchannel(s) => {
            let b = gase_x_channel(&s, spec)?;
            let c = |k| b.component(k).expect("x-channel component");
            vec![
                b.capacity,
                b.area,
                b.gase,
                c("capacity_primary"),
                c("capacity_secondary"),
            ]
        }
    })
}

fn row(cfg: &ScenarioConfig, param: &str, value: f64, spec: &QuadratureSpec<f64>) -> RunResult<Vec<f64>> {
    let mut r = vec![value];
    r.extend(evaluate(cfg, spec)?);
    let cols = result_columns(cfg.kind);
    if let Some(i) = r.iter().position(|v| !v.is_finite()) {
        return Err(RunError::NonFinite {
            column: if i == 0 { param.to_string() } else { cols[i - 1].to_string() },
            param: param.to_string(),
            value,
        });
    }
    Ok(r)
}

fn header(cfg: &ScenarioConfig) -> Vec<String> {
    let mut h = vec![cfg.sweep_param().to_string()];
    h.extend(result_columns(cfg.kind).iter().map(|s| s.to_string()));
    h
}

/// One row at the configured point. The first column holds the current value
/// of the sweep parameter.
pub fn run_eval(cfg: &ScenarioConfig) -> RunResult<Table> {
    let spec = QuadratureSpec::default();
    let param = cfg.sweep_param();
    let value = cfg
        .param_value(param)
        .ok_or_else(|| RunError::Usage(format!("no value for `{param}`")))?;
    Ok(Table {
        columns: header(cfg),
        rows: vec![row(cfg, param, value, &spec)?],
    })
}

/// One row per sweep point, evaluated in parallel and emitted in sweep order.
pub fn run_sweep(cfg: &ScenarioConfig) -> RunResult<Table> {
    let Some(sweep) = &cfg.sweep else {
        return Err(RunError::Usage("sweep requires a sweep block (sweep.param, sweep.start, sweep.stop, sweep.points)".into()));
    };
    let spec = QuadratureSpec::default();
    let rows = sweep
        .values()
        .into_par_iter()
        .map(|v| row(&cfg.with_param(&sweep.param, v), &sweep.param, v, &spec))
        .collect::<RunResult<Vec<_>>>()?;
    Ok(Table {
        columns: header(cfg),
        rows,
    })
}

/// GASE-optimal powers: the root of the optimality condition for p2p, the
/// box-constrained maximum over (P_S, P_R) for dual-hop.
pub fn run_optimize(cfg: &ScenarioConfig) -> RunResult<Table> {
    let spec = QuadratureSpec::default();
    match build(cfg)? {
        Scenario::P2p(s) => {
            let p = optimal_power_p2p(&s.env, s.d, None)?;
            let opt = P2pScenario::new(s.env, p, s.d)?;
            let b = gase_p2p(&opt);
            Ok(Table {
                columns: ["p_opt_dbm", "p_opt_w", "x_opt", "residual", "capacity", "area", "gase"]
                    .map(String::from)
                    .to_vec(),
                rows: vec![vec![
                    p.dbm(),
                    p.watts(),
                    opt.inverse_snr(),
                    optimal_power_residual(s.env.a(), opt.inverse_snr()),
                    b.capacity,
                    b.area,
                    b.gase,
                ]],
            })
        }
        Scenario::Dualhop(s, protocol) => {
            let p_max_dbm = cfg
                .get("power.p_max")
                .unwrap_or_else(|| cfg.req("power.p_s").max(cfg.req("power.p_r")));
            let o = optimize_relay_powers(&s.env, s.d_sr, s.d_rd, dbm(p_max_dbm)?, protocol, &spec)?;
            Ok(Table {
                columns: ["p_max_dbm", "p_s_dbm", "p_r_dbm", "gase"].map(String::from).to_vec(),
                rows: vec![vec![p_max_dbm, o.p_s.dbm(), o.p_r.dbm(), o.gase]],
            })
        }
        _ => Err(RunError::Usage(format!(
            "optimize supports p2p and dualhop scenarios, not {}",
            cfg.kind
        ))),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub closed_form: f64,
    pub oracle: McEstimate,
}

impl Check {
    pub fn passed(&self) -> bool {
        self.oracle.within_sigma(self.closed_form, VERIFY_SIGMA)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,closed_form,mc_mean,mc_std_error,z_score,pass\n");
        for c in &self.checks {
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                c.name,
                fmt_num(c.closed_form),
                fmt_num(c.oracle.mean),
                fmt_num(c.oracle.std_error),
                fmt_num(c.oracle.z_score(c.closed_form)),
                c.passed()
            ));
        }
        out
    }
}

fn single_area_check(
    name: &str,
    env: &PropagationEnvironment<f64>,
    p: PowerLevel<f64>,
    mc: &McConfig,
) -> RunResult<Check> {
    let (a, p_min, p_t) = (env.a(), env.p_min().watts(), p.watts());
    let closed = affected_area_single(env, p);
    let radius = certified_radius(p_t, p_min, a, closed, TAIL_FRACTION)?;
    let tail = rayleigh_tail_bound(p_t, p_min, a, radius);
    let oracle = mc_affected_area(
        |x, y, d: &mut Draws| p_t * d.exponential() / (x * x + y * y).powf(0.5 * a),
        p_min,
        radius,
        tail,
        mc,
    )?;
    Ok(Check {
        name: name.into(),
        closed_form: closed,
        oracle,
    })
}

fn parallel_area_check(s: &CognitiveScenario<f64>, spec: &QuadratureSpec<f64>, mc: &McConfig) -> RunResult<Check> {
    let a = s.env.a();
    let p_min = s.env.p_min().watts();
    let (p1, p2, d0) = (s.p1.watts(), s.p2.watts(), s.d0);
    let closed = affected_area_parallel(s, spec)?;
    let mut radius = (p1.max(p2) / p_min).powf(1.0 / a) + d0;
    for _ in 0..400 {
        if two_source_tail_bound(p1, p2, p_min, a, d0, radius) <= TAIL_FRACTION * closed {
            break;
        }
        radius *= 1.05;
    }
    let tail = two_source_tail_bound(p1, p2, p_min, a, d0, radius);
    let oracle = mc_affected_area(
        |x, y, d: &mut Draws| {
            let r1 = (x * x + y * y).powf(0.5 * a);
            let r2 = ((x - d0) * (x - d0) + y * y).powf(0.5 * a);
            p1 * d.exponential() / r1 + p2 * d.exponential() / r2
        },
        p_min,
        radius,
        tail,
        mc,
    )?;
    Ok(Check {
        name: "area_parallel".into(),
        closed_form: closed,
        oracle,
    })
}

/// Draws (primary SINR, secondary SINR, interference at the primary receiver).
pub fn cognitive_draw(d: &mut Draws, s: &CognitiveScenario<f64>) -> (f64, f64, f64) {
    let a = s.env.a();
    let n = s.env.noise().watts();
    let (p1, p2) = (s.p1.watts(), s.p2.watts());
    let sig_p = p1 * d.exponential() / s.d_p.powf(a);
    let int_p = p2 * d.exponential() / s.d_sp.powf(a);
    let sig_s = p2 * d.exponential() / s.d_s.powf(a);
    let int_s = p1 * d.exponential() / s.d_ps.powf(a);
    (sig_p / (n + int_p), sig_s / (n + int_s), int_p)
}

/// Relay equivalent SNR: min(Γ₁, Γ₂) for DF; Γ₁Γ₂/(Γ₁ + Γ₂), the law the
/// closed-form AF density describes, for AF.
pub fn relay_equivalent(protocol: RelayProtocol, g1: f64, g2: f64) -> f64 {
    match protocol {
        RelayProtocol::Df => g1.min(g2),
        RelayProtocol::Af => {
            if g1 + g2 == 0.0 {
                0.0
            } else {
                g1 * g2 / (g1 + g2)
            }
        }
    }
}

/// Closed forms at the configured point against Monte Carlo estimates; check
/// `k` uses stream `k` of `seed`.
pub fn run_verify(cfg: &ScenarioConfig, samples: u64, seed: u64) -> RunResult<VerifyReport> {
    let spec = QuadratureSpec::default();
    let mc = |k: u64| McConfig::new(samples, seed, k);
    let ln2 = std::f64::consts::LN_2;
    let mut checks = Vec::new();
    let mut push = |name: &str, closed_form: f64, oracle: McEstimate| {
        checks.push(Check {
            name: name.into(),
            closed_form,
            oracle,
        })
    };
    match build(cfg)? {
        Scenario::P2p(s) => {
            let snr = 1.0 / s.inverse_snr();
            let b = gase_p2p(&s);
            push("capacity", b.capacity, mc_ergodic_capacity(|d: &mut Draws| d.exponential_mean(snr), &mc(0)?));
            let area = single_area_check("area", &s.env, s.p_t, &mc(1)?)?;
            checks.push(area);
        }
        Scenario::Dualhop(s, protocol) => {
            let h = s.hops();
            let b = gase_dualhop(&s, protocol, &spec)?;
            let oracle = mc_mean(&mc(0)?, |d: &mut Draws| {
                let g = relay_equivalent(protocol, d.exponential_mean(h.snr_sr), d.exponential_mean(h.snr_rd));
                0.5 * g.ln_1p() / ln2
            });
            push("capacity", b.capacity, oracle);
            checks.push(single_area_check("area_source", &s.env, s.p_s, &mc(1)?)?);
            checks.push(single_area_check("area_relay", &s.env, s.p_r, &mc(2)?)?);
        }
        Scenario::Coop(s, protocol) => {
            let (g0, h) = (s.snr_sd(), s.hops());
            let draw = move |d: &mut Draws| {
                let sd = d.exponential_mean(g0);
                let eq = relay_equivalent(protocol, d.exponential_mean(h.snr_sr), d.exponential_mean(h.snr_rd));
                (sd, eq)
            };
            push(
                "p_direct",
                prob_direct(&s, protocol, &spec)?,
                mc_mode_probability(
                    |d: &mut Draws| {
                        let (sd, eq) = draw(d);
                        sd * sd + 2.0 * sd > eq
                    },
                    &mc(0)?,
                ),
            );
            let r = gase_coop(&s, protocol, &spec)?;
            push(
                "spectral_efficiency",
                r.spectral_efficiency,
                mc_mean(&mc(1)?, |d: &mut Draws| {
                    let (sd, eq) = draw(d);
                    sd.ln_1p().max(0.5 * eq.ln_1p()) / ln2
                }),
            );
            checks.push(single_area_check("area_source", &s.env, s.p_s, &mc(2)?)?);
            checks.push(single_area_check("area_relay", &s.env, s.p_r, &mc(3)?)?);
        }
        Scenario::Cognitive(s) => {
            let i_th = s.i_th.watts();
            let p = prob_parallel(&s);
            push(
                "prob_parallel",
                p,
                mc_mode_probability(|d: &mut Draws| cognitive_draw(d, &s).2 <= i_th, &mc(0)?),
            );
            // E[log2(1 + SINR_p)·1{constraint met}] = 𝒫·C̄_p
            push(
                "capacity_primary_joint",
                p * primary_capacity_parallel(&s),
                mc_mean(&mc(1)?, |d: &mut Draws| {
                    let (g, _, i) = cognitive_draw(d, &s);
                    if i <= i_th {
                        g.ln_1p() / ln2
                    } else {
                        0.0
                    }
                }),
            );
            push(
                "capacity_secondary",
                secondary_capacity_parallel(&s),
                mc_mean(&mc(2)?, |d: &mut Draws| cognitive_draw(d, &s).1.ln_1p() / ln2),
            );
            checks.push(parallel_area_check(&s, &spec, &mc(3)?)?);
        }
        Scenario::Xchannel(s) => {
            push(
                "capacity_primary",
                primary_capacity_unconstrained(&s),
                mc_mean(&mc(0)?, |d: &mut Draws| cognitive_draw(d, &s).0.ln_1p() / ln2),
            );
            push(
                "capacity_secondary",
                secondary_capacity_parallel(&s),
                mc_mean(&mc(1)?, |d: &mut Draws| cognitive_draw(d, &s).1.ln_1p() / ln2),
            );
            checks.push(parallel_area_check(&s, &spec, &mc(2)?)?);
        }
    }
    Ok(VerifyReport { checks })
}
