//! Built-in scenario presets reproducing the figure parameter sets.
//!
//! A preset is a list of named members; single-curve presets have one member
//! named after the preset itself.

use crate::config::{parse_config, ScenarioConfig};

pub const NAMES: [&str; 6] = ["fig1", "fig3", "fig4", "fig6", "fig7a", "fig7b"];

const FIG1: &str = "\
scenario.kind = p2p
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -90
geometry.d = 1000
power.p_t = 30
sweep.param = power.p_t
sweep.start = -10
sweep.stop = 60
sweep.points = 71
sweep.spacing = log
";

const FIG3_P2P: &str = "\
scenario.kind = p2p
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -90
geometry.d = 1000
power.p_t = 20
sweep.param = power.p_t
sweep.start = -10
sweep.stop = 50
sweep.points = 61
sweep.spacing = log
";

const FIG3_RELAY: &str = "\
scenario.kind = dualhop
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -90
geometry.d_sr = 500
geometry.d_rd = 500
geometry.theta = 0
power.p_s = 20
power.p_r = 20
sweep.param = power.all
sweep.start = -10
sweep.stop = 50
sweep.points = 61
sweep.spacing = log
";

const FIG4: &str = "\
scenario.kind = coop
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -80
geometry.d_sd = 1000
geometry.d_sr = 500
geometry.d_rd = 500
geometry.theta = 0
power.p_s = 10
power.p_r = 10
sweep.param = power.p_s
sweep.start = -10
sweep.stop = 50
sweep.points = 61
sweep.spacing = log
";

const FIG6: &str = "\
scenario.kind = cognitive
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -100
geometry.d_p = 100
geometry.d_s = 100
geometry.d_sp = 150
geometry.d_ps = 150
geometry.d0 = 100
power.p1 = 20
power.p2 = 20
threshold.i_th = -80
sweep.param = threshold.i_th
sweep.start = -150
sweep.stop = 60
sweep.points = 43
sweep.spacing = log
";

// κ = 2.5 with d0 = κ·d_P so that the triangle bounds hold
const FIG7: &str = "\
scenario.kind = cognitive
env.a = 4
env.noise_dbm = -100
env.p_min_dbm = -100
geometry.d_p = 100
geometry.d_s = 100
geometry.d_sp = 250
geometry.d_ps = 250
geometry.d0 = 250
power.p1 = 20
power.p2 = 10
threshold.i_th = -80
sweep.param = power.p2
sweep.start = -10
sweep.stop = 50
sweep.points = 61
sweep.spacing = log
";

fn member(name: &str, text: &str, protocol: Option<&str>) -> (String, ScenarioConfig) {
    let text = match protocol {
        Some(p) => format!("{text}scenario.protocol = {p}\n"),
        None => text.to_string(),
    };
    (
        name.to_string(),
        parse_config(&text).expect("preset text is valid"),
    )
}

/// Members of preset `name`, or `None` for an unknown name.
pub fn preset(name: &str) -> Option<Vec<(String, ScenarioConfig)>> {
    let members = match name {
        "fig1" => vec![member("fig1", FIG1, None)],
        "fig3" => vec![
            member("p2p", FIG3_P2P, None),
            member("df", FIG3_RELAY, Some("df")),
            member("af", FIG3_RELAY, Some("af")),
        ],
        "fig4" => vec![member("df", FIG4, Some("df")), member("af", FIG4, Some("af"))],
        "fig6" => vec![member("fig6", FIG6, None)],
        "fig7a" => vec![member("fig7a", FIG7, None)],
        "fig7b" => vec![member("fig7b", FIG7, None)],
        _ => return None,
    };
    Some(members)
}
