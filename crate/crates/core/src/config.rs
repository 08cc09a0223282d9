//! Flat `key = value` run files.
//!
//! ```text
//! # comments start with '#'
//! [run]
//! preset = sod            # optional base; every other key overrides it
//! ic = sod                # sine | smooth-bump | square-wave | mixed-features | sod | shu-osher
//! ic_offset = 0           # constant added to square-wave data
//! model = euler           # advection | euler (default follows ic)
//! speed = 1               # advection speed
//! gamma = 1.4
//! domain = -2, 2
//! n = 100
//! cfl = 0.95
//! t_end = 0.8
//! bc = transmissive       # periodic | transmissive
//! timestep = adaptive     # adaptive | frozen
//! flux = rusanov          # rusanov | hll
//! wave_speeds = cells     # cells | faces
//!
//! [scheme]
//! name = h3l-c
//! alpha = 0
//! eps_policy = fixed:2.25 # fixed:E | yc:C=c | pow:K=k,q=q
//! switch = sharp          # sharp | linear | linear:W
//!
//! [output]
//! error_range = 0.4, 1
//! n_list = 100, 200
//! schemes = h3, h3l-c
//! record_tv = false
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{parse_epsilon_policy, preset, InitialCondition, RunConfig, SchemeSpec};
use crate::limiters::SwitchMode;
use crate::physics::{AdvectionModel, EulerModel, FluxKind, Model, WaveSpeedSource};
use crate::solver::{BoundaryCondition, TimestepMode};

const KEYS: &[(&str, &[&str])] = &[
    (
        "run",
        &[
            "preset",
            "ic",
            "ic_offset",
            "model",
            "speed",
            "gamma",
            "domain",
            "n",
            "cfl",
            "t_end",
            "bc",
            "timestep",
            "flux",
            "wave_speeds",
        ],
    ),
    ("scheme", &["name", "alpha", "eps_policy", "switch"]),
    ("output", &["error_range", "n_list", "schemes", "record_tv"]),
];

/// `section.key -> value` after syntax and key-name checks.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut section: Option<&str> = None;
    let mut out = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let at = |m: String| Error::Config(format!("line {}: {m}", lineno + 1));
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim();
            let known = KEYS
                .iter()
                .find(|(s, _)| *s == name)
                .ok_or_else(|| at(format!("unknown section [{name}]")))?;
            section = Some(known.0);
            continue;
        }
        let sec = section.ok_or_else(|| at("key outside of a section".into()))?;
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| at(format!("expected `key = value`, got `{line}`")))?;
        let k = k.trim();
        let allowed = KEYS
            .iter()
            .find(|(s, _)| *s == sec)
            .map(|(_, ks)| *ks)
            .unwrap_or(&[]);
        if !allowed.contains(&k) {
            return Err(at(format!("unknown key `{k}` in [{sec}]")));
        }
        if out
            .insert(format!("{sec}.{k}"), v.trim().to_string())
            .is_some()
        {
            return Err(at(format!("duplicate key `{k}`")));
        }
    }
    Ok(out)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("`{key}`: cannot parse `{v}`")))
}

fn pair(key: &str, v: &str) -> Result<(f64, f64)> {
    let (a, b) = v
        .split_once(',')
        .ok_or_else(|| Error::Config(format!("`{key}` needs two comma-separated numbers")))?;
    Ok((num(key, a.trim())?, num(key, b.trim())?))
}

pub fn parse_switch(v: &str) -> Result<SwitchMode> {
    match v.split_once(':') {
        None if v == "sharp" => Ok(SwitchMode::Sharp),
        None if v == "linear" => Ok(SwitchMode::linear()),
        Some(("linear", w)) => {
            let width: f64 = num("switch", w.trim())?;
            if !(width > 0.0 && width.is_finite()) {
                return Err(Error::Config(format!(
                    "switch width must be > 0, got {width}"
                )));
            }
            Ok(SwitchMode::Linear { width })
        }
        _ => Err(Error::Config(format!("unknown switch `{v}`"))),
    }
}

/// Builds a run from file text.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let e = parse_entries(text)?;
    let get = |k: &str| e.get(k).map(String::as_str);

    let mut cfg = match get("run.preset") {
        Some(name) => preset(name).map_err(|err| Error::Config(err.to_string()))?,
        None => {
            let ic_name = get("run.ic")
                .ok_or_else(|| Error::Config("need `preset` or `ic` in [run]".into()))?;
            let ic = InitialCondition::from_name(ic_name, 0.0)?;
            let mut c =
                preset(if ic.is_euler() { "sod" } else { "square-wave" }).expect("catalog entry");
            c.name = "custom".into();
            c.ic = ic;
            c.domain = ic.default_domain();
            c.alpha = 0.0;
            c.error_range = None;
            c.schemes = Vec::new();
            c.record_tv = false;
            c.bc = if ic.is_euler() {
                BoundaryCondition::Transmissive
            } else {
                BoundaryCondition::Periodic
            };
            c
        }
    };

    if get("run.preset").is_some() {
        if let Some(ic_name) = get("run.ic") {
            cfg.ic = InitialCondition::from_name(ic_name, 0.0)?;
        }
    }
    if let Some(v) = get("run.ic_offset") {
        match cfg.ic {
            InitialCondition::SquareWave { .. } => {
                cfg.ic = InitialCondition::SquareWave {
                    offset: num("ic_offset", v)?,
                }
            }
            _ => {
                return Err(Error::Config(
                    "`ic_offset` only applies to square-wave".into(),
                ))
            }
        }
    }
    match get("run.model") {
        Some("advection") => cfg.model = Model::Advection(AdvectionModel { speed: 1.0 }),
        Some("euler") => cfg.model = Model::Euler(EulerModel::air()),
        Some(other) => return Err(Error::Config(format!("unknown model `{other}`"))),
        None if cfg.model.ncomp() != cfg.ic.ncomp() => {
            cfg.model = if cfg.ic.is_euler() {
                Model::Euler(EulerModel::air())
            } else {
                Model::Advection(AdvectionModel { speed: 1.0 })
            };
        }
        None => {}
    }
    if let Some(v) = get("run.speed") {
        let Model::Advection(_) = cfg.model else {
            return Err(Error::Config("`speed` needs the advection model".into()));
        };
        cfg.model = Model::Advection(
            AdvectionModel::new(num("speed", v)?).map_err(|e| Error::Config(e.to_string()))?,
        );
    }
    if let Some(v) = get("run.gamma") {
        let Model::Euler(_) = cfg.model else {
            return Err(Error::Config("`gamma` needs the Euler model".into()));
        };
        cfg.model = Model::Euler(
            EulerModel::new(num("gamma", v)?).map_err(|e| Error::Config(e.to_string()))?,
        );
    }
    if let Some(v) = get("run.domain") {
        cfg.domain = pair("domain", v)?;
    }
    if let Some(v) = get("run.n") {
        cfg.n_cells = num("n", v)?;
        cfg.n_list = vec![cfg.n_cells];
    }
    if let Some(v) = get("run.cfl") {
        cfg.cfl = num("cfl", v)?;
    }
    if let Some(v) = get("run.t_end") {
        cfg.t_end = num("t_end", v)?;
    }
    match get("run.bc") {
        Some("periodic") => cfg.bc = BoundaryCondition::Periodic,
        Some("transmissive") => cfg.bc = BoundaryCondition::Transmissive,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown boundary condition `{other}`"
            )))
        }
        None => {}
    }
    match get("run.timestep") {
        Some("adaptive") => cfg.timestep = TimestepMode::Adaptive,
        Some("frozen") => cfg.timestep = TimestepMode::Frozen,
        Some(other) => return Err(Error::Config(format!("unknown timestep mode `{other}`"))),
        None => {}
    }
    match get("run.flux") {
        Some("rusanov") => cfg.flux.kind = FluxKind::Rusanov,
        Some("hll") => cfg.flux.kind = FluxKind::Hll,
        Some(other) => return Err(Error::Config(format!("unknown flux `{other}`"))),
        None => {}
    }
    match get("run.wave_speeds") {
        Some("cells") => cfg.flux.speeds = WaveSpeedSource::CellAverages,
        Some("faces") => cfg.flux.speeds = WaveSpeedSource::FaceStates,
        Some(other) => {
            return Err(Error::Config(format!(
                "unknown wave speed source `{other}`"
            )))
        }
        None => {}
    }

    if let Some(v) = get("scheme.name") {
        cfg.scheme = v
            .parse()
            .map_err(|err: Error| Error::Config(err.to_string()))?;
    }
    if let Some(v) = get("scheme.alpha") {
        cfg.alpha = num("alpha", v)?;
    }
    if let Some(v) = get("scheme.eps_policy") {
        cfg.yc_epsilon = parse_epsilon_policy(v)?;
    }
    if let Some(v) = get("scheme.switch") {
        cfg.switch = parse_switch(v)?;
    }

    if let Some(v) = get("output.error_range") {
        cfg.error_range = Some(pair("error_range", v)?);
    }
    if let Some(v) = get("output.n_list") {
        cfg.n_list = v
            .split(',')
            .map(|s| num("n_list", s.trim()))
            .collect::<Result<_>>()?;
    }
    if let Some(v) = get("output.schemes") {
        cfg.schemes = v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<SchemeSpec>()
                    .map_err(|err| Error::Config(err.to_string()))
            })
            .collect::<Result<_>>()?;
    }
    if let Some(v) = get("output.record_tv") {
        cfg.record_tv = num("record_tv", v)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_config(&text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weno3::EpsilonPolicy;

    #[test]
    fn preset_with_overrides() {
        let c = parse_config("[run]\npreset = sod\nn = 200 # finer\n[scheme]\nname = weno-yc\n")
            .unwrap();
        assert_eq!(c.n_cells, 200);
        assert_eq!(c.t_end, 0.8);
        assert_eq!(c.scheme, SchemeSpec::WenoYc { epsilon: None });
        assert_eq!(c.yc_epsilon, EpsilonPolicy::Fixed(2.25));
    }

    #[test]
    fn custom_scalar_run() {
        let text = "[run]\nic = sine\nn = 64\ncfl = 0.5\nt_end = 2\n[scheme]\nname = as:q=2\nswitch = linear:0.2\n";
        let c = parse_config(text).unwrap();
        assert_eq!(c.ic, InitialCondition::Sine);
        assert_eq!(c.domain, (-1.0, 1.0));
        assert_eq!(c.bc, BoundaryCondition::Periodic);
        assert_eq!(c.scheme, SchemeSpec::AS { q: 2.0 });
        assert_eq!(c.switch, SwitchMode::Linear { width: 0.2 });
        assert!(matches!(c.model, Model::Advection(_)));
    }

    #[test]
    fn errors_name_the_problem() {
        for (text, needle) in [
            ("n = 3\n", "outside of a section"),
            ("[run]\nwhat = 1\n", "unknown key"),
            ("[nope]\n", "unknown section"),
            ("[run]\npreset = sod\ncfl = 1.5\n", "cfl"),
            ("[run]\npreset = sod\nn = 10\nn = 20\n", "duplicate"),
            (
                "[run]\npreset = sod\n[scheme]\nname = weno\n",
                "unknown scheme",
            ),
            ("[run]\nn = 10\n", "need `preset` or `ic`"),
            ("[run]\npreset = sod\nspeed = 2\n", "advection"),
        ] {
            let err = parse_config(text).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }
}
