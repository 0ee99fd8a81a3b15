//! Line-oriented scenario configuration.
//!
//! Grammar, one entry per line:
//!
//! ```text
//! line    = blank | comment | entry
//! comment = "#" any*
//! entry   = section "." key ws* "=" ws* value [ws* comment]
//! ```
//!
//! Sections and keys are lowercase identifiers; values are taken verbatim up
//! to an optional trailing `#`. Powers and thresholds are in dBm, distances in
//! metres. Parsing never stops at the first problem: every diagnostic is
//! collected and returned together.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use gase_core::relay_dualhop::RelayProtocol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    P2p,
    Dualhop,
    Coop,
    Cognitive,
    Xchannel,
}

impl ScenarioKind {
    pub const ALL: [ScenarioKind; 5] = [
        ScenarioKind::P2p,
        ScenarioKind::Dualhop,
        ScenarioKind::Coop,
        ScenarioKind::Cognitive,
        ScenarioKind::Xchannel,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ScenarioKind::P2p => "p2p",
            ScenarioKind::Dualhop => "dualhop",
            ScenarioKind::Coop => "coop",
            ScenarioKind::Cognitive => "cognitive",
            ScenarioKind::Xchannel => "xchannel",
        }
    }

    pub fn has_protocol(self) -> bool {
        matches!(self, ScenarioKind::Dualhop | ScenarioKind::Coop)
    }

    /// Sweep parameter used for the first output column when none is configured.
    pub fn default_param(self) -> &'static str {
        match self {
            ScenarioKind::P2p => "power.p_t",
            ScenarioKind::Dualhop | ScenarioKind::Coop => "power.p_s",
            ScenarioKind::Cognitive | ScenarioKind::Xchannel => "power.p2",
        }
    }
}

impl fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ScenarioKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ScenarioKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown scenario kind `{s}` (expected p2p, dualhop, coop, cognitive or xchannel)"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

impl Spacing {
    pub fn as_str(self) -> &'static str {
        match self {
            Spacing::Linear => "linear",
            Spacing::Log => "log",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub param: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepSpec {
    /// Grid values in config units. Keys in dBm are already logarithmic, so
    /// for them `log` and `linear` spacing coincide.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.start];
        }
        let geometric = self.spacing == Spacing::Log && !is_dbm_key(&self.param);
        (0..n)
            .map(|i| {
                let t = i as f64 / (n - 1) as f64;
                if i == n - 1 {
                    self.stop
                } else if geometric {
                    self.start * (self.stop / self.start).powf(t)
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct McBlock {
    pub samples: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub kind: ScenarioKind,
    pub protocol: Option<RelayProtocol>,
    /// Numeric keys (`section.key`) in config units.
    pub values: BTreeMap<String, f64>,
    pub sweep: Option<SweepSpec>,
    pub mc: McBlock,
}

impl ScenarioConfig {
    pub fn get(&self, key: &str) -> Option<f64> {
        self.values.get(key).copied()
    }

    /// Value of `key`; panics if absent (validated configs carry every
    /// required key).
    pub fn req(&self, key: &str) -> f64 {
        self.get(key)
            .unwrap_or_else(|| panic!("validated config lacks `{key}`"))
    }

    /// Copy with sweep parameter `param` set to `value`. `power.all` sets
    /// every transmit power of the scenario.
    pub fn with_param(&self, param: &str, value: f64) -> ScenarioConfig {
        let mut c = self.clone();
        if param == ALL_POWERS {
            for key in ["power.p_t", "power.p_s", "power.p_r"] {
                if let Some(v) = c.values.get_mut(key) {
                    *v = value;
                }
            }
        } else {
            c.values.insert(param.to_string(), value);
        }
        c
    }

    /// Current value of a sweep parameter (`power.all` reads the first power).
    pub fn param_value(&self, param: &str) -> Option<f64> {
        if param == ALL_POWERS {
            ["power.p_t", "power.p_s"].iter().find_map(|k| self.get(k))
        } else {
            self.get(param)
        }
    }

    pub fn sweep_param(&self) -> &str {
        self.sweep
            .as_ref()
            .map(|s| s.param.as_str())
            .unwrap_or_else(|| self.kind.default_param())
    }

    /// Canonical text form; `parse_config(&cfg.render())` reproduces `cfg`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("scenario.kind = {}\n", self.kind));
        if let Some(p) = self.protocol {
            out.push_str(&format!("scenario.protocol = {p}\n"));
        }
        for key in KEYS.iter().map(|k| k.name) {
            if let Some(v) = self.values.get(key) {
                out.push_str(&format!("{key} = {v}\n"));
            }
        }
        if let Some(s) = &self.sweep {
            out.push_str(&format!("sweep.param = {}\n", s.param));
            out.push_str(&format!("sweep.start = {}\n", s.start));
            out.push_str(&format!("sweep.stop = {}\n", s.stop));
            out.push_str(&format!("sweep.points = {}\n", s.points));
            out.push_str(&format!("sweep.spacing = {}\n", s.spacing.as_str()));
        }
        if let Some(n) = self.mc.samples {
            out.push_str(&format!("mc.samples = {n}\n"));
        }
        if let Some(s) = self.mc.seed {
            out.push_str(&format!("mc.seed = {s}\n"));
        }
        out
    }
}

/// Pseudo sweep parameter that moves every transmit power together.
pub const ALL_POWERS: &str = "power.all";

struct KeyDef {
    name: &'static str,
    required: &'static [ScenarioKind],
    optional: &'static [ScenarioKind],
}

use ScenarioKind::{Cognitive as Cg, Coop as Co, Dualhop as Dh, P2p as Pp, Xchannel as Xc};

const ALL_KINDS: &[ScenarioKind] = &[Pp, Dh, Co, Cg, Xc];

const KEYS: &[KeyDef] = &[
    KeyDef { name: "env.a", required: ALL_KINDS, optional: &[] },
    KeyDef { name: "env.noise_dbm", required: ALL_KINDS, optional: &[] },
    KeyDef { name: "env.p_min_dbm", required: ALL_KINDS, optional: &[] },
    KeyDef { name: "geometry.d", required: &[Pp], optional: &[] },
    KeyDef { name: "geometry.d_sd", required: &[Co], optional: &[] },
    KeyDef { name: "geometry.d_sr", required: &[Dh, Co], optional: &[] },
    KeyDef { name: "geometry.d_rd", required: &[Dh, Co], optional: &[] },
    KeyDef { name: "geometry.theta", required: &[], optional: &[Dh, Co] },
    KeyDef { name: "geometry.d_p", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "geometry.d_s", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "geometry.d_sp", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "geometry.d_ps", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "geometry.d0", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "power.p_t", required: &[Pp], optional: &[] },
    KeyDef { name: "power.p_s", required: &[Dh, Co], optional: &[] },
    KeyDef { name: "power.p_r", required: &[Dh, Co], optional: &[] },
    KeyDef { name: "power.p_max", required: &[], optional: &[Dh] },
    KeyDef { name: "power.p1", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "power.p2", required: &[Cg, Xc], optional: &[] },
    KeyDef { name: "threshold.i_th", required: &[Cg], optional: &[Xc] },
];

const OTHER_KEYS: &[&str] = &[
    "scenario.kind",
    "scenario.protocol",
    "sweep.param",
    "sweep.start",
    "sweep.stop",
    "sweep.points",
    "sweep.spacing",
    "mc.samples",
    "mc.seed",
];

fn key_def(name: &str) -> Option<&'static KeyDef> {
    KEYS.iter().find(|k| k.name == name)
}

fn is_dbm_key(name: &str) -> bool {
    name == ALL_POWERS || name.starts_with("power.") || name.starts_with("threshold.") || name.ends_with("_dbm")
}

fn is_distance_key(name: &str) -> bool {
    name.starts_with("geometry.") && name != "geometry.theta"
}

/// Keys accepted for `kind` (required first, then optional).
pub fn keys_for(kind: ScenarioKind) -> Vec<&'static str> {
    KEYS.iter()
        .filter(|k| k.required.contains(&kind) || k.optional.contains(&kind))
        .map(|k| k.name)
        .collect()
}

/// Parameters a sweep may vary for `kind`.
pub fn sweepable(kind: ScenarioKind) -> Vec<&'static str> {
    let mut v: Vec<&'static str> = KEYS
        .iter()
        .filter(|k| k.required.contains(&kind) && k.name != "geometry.theta")
        .map(|k| k.name)
        .collect();
    if matches!(kind, Pp | Dh | Co) {
        v.push(ALL_POWERS);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line number, absent for missing keys.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ConfigErrors(pub Vec<Diagnostic>);

impl fmt::Display for ConfigErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}

/// Raw entries: key → (value text, line). Later overlays replace earlier ones.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    entries: BTreeMap<String, (String, Option<usize>)>,
}

impl RawConfig {
    pub fn lex(text: &str) -> Result<RawConfig, ConfigErrors> {
        let (raw, errs) = RawConfig::lex_lenient(text);
        if errs.is_empty() {
            Ok(raw)
        } else {
            Err(ConfigErrors(errs))
        }
    }

    /// Lexes every well-formed line and returns the diagnostics for the rest.
    pub fn lex_lenient(text: &str) -> (RawConfig, Vec<Diagnostic>) {
        let mut raw = RawConfig::default();
        let mut errs = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let n = i + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let Some((k, v)) = body.split_once('=') else {
                errs.push(diag(Some(n), format!("expected `section.key = value`, found `{body}`")));
                continue;
            };
            let (k, v) = (k.trim(), v.trim());
            let well_formed = k.split_once('.').is_some_and(|(s, key)| {
                !s.is_empty() && !key.is_empty() && k.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_' || c == '.')
            });
            if !well_formed {
                errs.push(diag(Some(n), format!("malformed key `{k}` (expected `section.key`)")));
                continue;
            }
            if key_def(k).is_none() && !OTHER_KEYS.contains(&k) {
                errs.push(diag(Some(n), format!("unknown key `{k}`")));
                continue;
            }
            if v.is_empty() {
                errs.push(diag(Some(n), format!("empty value for `{k}`")));
                continue;
            }
            if let Some((_, Some(prev))) = raw.entries.get(k) {
                errs.push(diag(Some(n), format!("duplicate key `{k}` (first set on line {prev})")));
                continue;
            }
            raw.entries.insert(k.to_string(), (v.to_string(), Some(n)));
        }
        (raw, errs)
    }

    pub fn from_config(cfg: &ScenarioConfig) -> RawConfig {
        let mut raw = RawConfig::lex(&cfg.render()).expect("rendered config lexes");
        for v in raw.entries.values_mut() {
            v.1 = None;
        }
        raw
    }

    /// Entries of `other` replace those of `self`.
    pub fn overlay(mut self, other: RawConfig) -> RawConfig {
        self.entries.extend(other.entries);
        self
    }

    pub fn validate(&self) -> Result<ScenarioConfig, ConfigErrors> {
        let mut errs = Vec::new();
        let line = |k: &str| self.entries.get(k).and_then(|e| e.1);
        let text = |k: &str| self.entries.get(k).map(|e| e.0.as_str());

        let kind = match text("scenario.kind") {
            None => {
                errs.push(diag(None, "missing required key `scenario.kind`".into()));
                None
            }
            Some(s) => match s.parse::<ScenarioKind>() {
                Ok(k) => Some(k),
                Err(e) => {
                    errs.push(diag(line("scenario.kind"), e));
                    None
                }
            },
        };

        let mut values = BTreeMap::new();
        for def in KEYS {
            let Some(t) = text(def.name) else { continue };
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => {
                    values.insert(def.name.to_string(), v);
                }
                _ => errs.push(diag(line(def.name), format!("`{}` must be a finite number, found `{t}`", def.name))),
            }
        }

        let protocol = match text("scenario.protocol") {
            None => None,
            Some(s) => match s.parse::<RelayProtocol>() {
                Ok(p) => Some(p),
                Err(_) => {
                    errs.push(diag(line("scenario.protocol"), format!("unknown protocol `{s}` (expected df or af)")));
                    None
                }
            },
        };

        if let Some(kind) = kind {
            for def in KEYS {
                let present = self.entries.contains_key(def.name);
                let allowed = def.required.contains(&kind) || def.optional.contains(&kind);
                if present && !allowed {
                    errs.push(diag(line(def.name), format!("`{}` does not apply to scenario kind {kind}", def.name)));
                }
                if !present && def.required.contains(&kind) {
                    errs.push(diag(None, format!("missing required key `{}`", def.name)));
                }
            }
            if kind.has_protocol() && text("scenario.protocol").is_none() {
                errs.push(diag(None, "missing required key `scenario.protocol`".into()));
            }
            if !kind.has_protocol() && text("scenario.protocol").is_some() {
                errs.push(diag(line("scenario.protocol"), format!("`scenario.protocol` does not apply to scenario kind {kind}")));
            }
        }

        for (k, &v) in &values {
            if is_distance_key(k) {
                let ok = if k == "geometry.d0" { v >= 0.0 } else { v > 0.0 };
                if !ok {
                    errs.push(diag(line(k), format!("`{k}` must be {}, found {v}", if k == "geometry.d0" { ">= 0" } else { "> 0" })));
                }
            }
        }
        if let Some(&a) = values.get("env.a") {
            if !(a > 0.0) {
                errs.push(diag(line("env.a"), format!("`env.a` must be > 0, found {a}")));
            }
        }
        if matches!(kind, Some(Cg | Xc)) {
            check_triangle(&values, "geometry.d_sp", "geometry.d_p", &line, &mut errs);
            check_triangle(&values, "geometry.d_ps", "geometry.d_s", &line, &mut errs);
        }

        let sweep = self.validate_sweep(kind, &mut errs);

        let mut mc = McBlock::default();
        for (key, slot) in [("mc.samples", &mut mc.samples), ("mc.seed", &mut mc.seed)] {
            if let Some(t) = text(key) {
                match t.parse::<u64>() {
                    Ok(v) => *slot = Some(v),
                    Err(_) => errs.push(diag(line(key), format!("`{key}` must be a non-negative integer, found `{t}`"))),
                }
            }
        }
        if mc.samples == Some(0) {
            errs.push(diag(line("mc.samples"), "`mc.samples` must be >= 1".into()));
        }

        if !errs.is_empty() {
            return Err(ConfigErrors(errs));
        }
        let kind = kind.expect("checked above");
        Ok(ScenarioConfig {
            kind,
            protocol: if kind.has_protocol() { protocol } else { None },
            values,
            sweep,
            mc,
        })
    }

    fn validate_sweep(&self, kind: Option<ScenarioKind>, errs: &mut Vec<Diagnostic>) -> Option<SweepSpec> {
        let line = |k: &str| self.entries.get(k).and_then(|e| e.1);
        let text = |k: &str| self.entries.get(k).map(|e| e.0.as_str());
        let keys = ["sweep.param", "sweep.start", "sweep.stop", "sweep.points"];
        let any = keys.iter().any(|k| text(k).is_some()) || text("sweep.spacing").is_some();
        if !any {
            return None;
        }
        let before = errs.len();
        for k in keys {
            if text(k).is_none() {
                errs.push(diag(None, format!("missing required key `{k}` (sweep block is incomplete)")));
            }
        }
        let param = text("sweep.param").map(str::to_string);
        if let (Some(p), Some(kind)) = (&param, kind) {
            if !sweepable(kind).contains(&p.as_str()) {
                errs.push(diag(
                    line("sweep.param"),
                    format!("sweep parameter `{p}` does not exist for scenario kind {kind} (one of: {})", sweepable(kind).join(", ")),
                ));
            }
        }
        let num = |k: &str, errs: &mut Vec<Diagnostic>| -> Option<f64> {
            let t = text(k)?;
            match t.parse::<f64>() {
                Ok(v) if v.is_finite() => Some(v),
                _ => {
                    errs.push(diag(line(k), format!("`{k}` must be a finite number, found `{t}`")));
                    None
                }
            }
        };
        let start = num("sweep.start", errs);
        let stop = num("sweep.stop", errs);
        let points = text("sweep.points").and_then(|t| match t.parse::<usize>() {
            Ok(n) if n >= 1 => Some(n),
            _ => {
                errs.push(diag(line("sweep.points"), format!("`sweep.points` must be an integer >= 1, found `{t}`")));
                None
            }
        });
        let spacing = match text("sweep.spacing") {
            None | Some("linear") => Spacing::Linear,
            Some("log") => Spacing::Log,
            Some(s) => {
                errs.push(diag(line("sweep.spacing"), format!("`sweep.spacing` must be linear or log, found `{s}`")));
                Spacing::Linear
            }
        };
        if let (Some(p), Some(a), Some(b)) = (&param, start, stop) {
            if spacing == Spacing::Log && !is_dbm_key(p) && !(a > 0.0 && b > 0.0) {
                errs.push(diag(line("sweep.start"), "log spacing needs positive sweep.start and sweep.stop".into()));
            }
            if is_distance_key(p) && !(a > 0.0 && b > 0.0) && p != "geometry.d0" {
                errs.push(diag(line("sweep.start"), format!("distances swept by `{p}` must be positive")));
            }
            if p == "env.a" && !(a > 0.0 && b > 0.0) {
                errs.push(diag(line("sweep.start"), "path-loss exponent sweep must stay positive".into()));
            }
        }
        if errs.len() > before {
            return None;
        }
        Some(SweepSpec {
            param: param?,
            start: start?,
            stop: stop?,
            points: points?,
            spacing,
        })
    }
}

fn check_triangle(
    values: &BTreeMap<String, f64>,
    side: &str,
    link: &str,
    line: &dyn Fn(&str) -> Option<usize>,
    errs: &mut Vec<Diagnostic>,
) {
    let (Some(&s), Some(&d), Some(&d0)) = (values.get(side), values.get(link), values.get("geometry.d0")) else {
        return;
    };
    let (lo, hi) = ((d0 - d).abs(), d0 + d);
    let slack = 1e-12 * hi;
    if s < lo - slack || s > hi + slack {
        errs.push(diag(
            line(side),
            format!("`{side}` = {s} violates the triangle bound |d0 - {link}| <= {side} <= d0 + {link}, i.e. [{lo}, {hi}]"),
        ));
    }
}

fn diag(line: Option<usize>, message: String) -> Diagnostic {
    Diagnostic { line, message }
}

/// Combines lexing and validation diagnostics, ordered by line (missing
/// keys last).
pub fn finish(lexed: Vec<Diagnostic>, validated: Result<ScenarioConfig, ConfigErrors>) -> Result<ScenarioConfig, ConfigErrors> {
    let mut errs = lexed;
    match validated {
        Ok(c) if errs.is_empty() => return Ok(c),
        Ok(_) => {}
        Err(e) => errs.extend(e.0),
    }
    errs.sort_by_key(|d| (d.line.is_none(), d.line));
    Err(ConfigErrors(errs))
}

pub fn parse_config(text: &str) -> Result<ScenarioConfig, ConfigErrors> {
    let (raw, errs) = RawConfig::lex_lenient(text);
    finish(errs, raw.validate())
}
