//! Flat dotted-key configuration files.
//!
//! One `key = value` pair per line, `#` starts a comment, sections are
//! spelled in the key (`dynamics.cfl = 0.25`). Every key consumed by the
//! solver is listed in [`KEY_HELP`]. Unknown keys are rejected so typos
//! cannot silently change a run.

use std::collections::BTreeMap;
use std::path::Path;

use crate::dynamics::{InitialData, Preset, RunConfig};
use crate::error::{Error, Result};
use crate::io;

/// Key reference, printed by the CLI help.
pub const KEY_HELP: &[(&str, &str)] = &[
    ("initial.kind", "preset | coeff_file | grid_file (default preset)"),
    ("initial.preset", "constant | two_mode | single_mode | random"),
    ("initial.value", "constant preset: the constant (default 1)"),
    ("initial.a", "two_mode/single_mode: mean c_0 (default 1)"),
    ("initial.b", "two_mode/single_mode: real mode amplitude (default 0.3)"),
    ("initial.mode", "single_mode: excited wavenumber (default 3)"),
    ("initial.band_limit", "random: highest excited mode (default 16)"),
    ("initial.amp", "random: amplitude scale (default 0.3)"),
    ("initial.seed", "random: RNG seed (default 1)"),
    ("initial.coeff_file", "coeff_file: CSV k,re,im path"),
    ("initial.grid_file", "grid_file: CSV x,value path"),
    ("initial.clip_m", "clip bound M > 1 for grid data (default 1e6)"),
    ("initial.fejer_n", "Fejer smoothing order, 0 = off (default 0)"),
    ("dynamics.capacity", "spectral capacity K (default 64)"),
    ("dynamics.cfl", "CFL number in (0, 2] (default 1.0)"),
    ("dynamics.dt_max", "hard step cap (default 0.05)"),
    ("dynamics.t_end", "final time (default 1.0)"),
    ("record.dt", "diagnostic cadence (default 0.01)"),
    ("record.snapshot_times", "comma-separated snapshot times"),
    ("diag.alpha", "Holder exponent in (0, 1/5) (default 0.1)"),
    ("tol.<name>", "named slack override used by the checks"),
];

/// Parse the file at `path` plus `key=value` overrides into a run
/// configuration and its fully resolved echo.
pub fn load(path: &Path, overrides: &[String]) -> Result<(RunConfig, String)> {
    let text = std::fs::read_to_string(path)?;
    from_text(&text, overrides)
}

/// Same as [`load`] from an in-memory string.
pub fn from_text(text: &str, overrides: &[String]) -> Result<(RunConfig, String)> {
    let mut map = parse_pairs(text)?;
    for ov in overrides {
        let (k, v) = split_pair(ov)?;
        map.insert(k, v);
    }
    let cfg = build(&map)?;
    cfg.validate()?;
    let echo = map
        .iter()
        .map(|(k, v)| format!("{k} = {v}\n"))
        .collect::<String>();
    Ok((cfg, echo))
}

fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(i) => &raw[..i],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = split_pair(line).map_err(|e| {
            Error::Config(format!("line {}: {e}", lineno + 1))
        })?;
        map.insert(k, v);
    }
    Ok(map)
}

fn split_pair(s: &str) -> Result<(String, String)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Config(format!("expected key = value, got '{s}'")))?;
    let k = k.trim();
    if k.is_empty() {
        return Err(Error::Config(format!("empty key in '{s}'")));
    }
    Ok((k.to_string(), v.trim().to_string()))
}

fn build(map: &BTreeMap<String, String>) -> Result<RunConfig> {
    for key in map.keys() {
        let known = KEY_HELP.iter().any(|(k, _)| *k == key) || key.starts_with("tol.");
        if !known {
            return Err(Error::Config(format!("unknown key '{key}'")));
        }
    }

    let get = |k: &str| map.get(k).map(String::as_str);
    let f64_key = |k: &str, d: f64| -> Result<f64> {
        match get(k) {
            None => Ok(d),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("{k}: expected a number, got '{v}'"))),
        }
    };
    let usize_key = |k: &str, d: usize| -> Result<usize> {
        match get(k) {
            None => Ok(d),
            Some(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("{k}: expected an integer, got '{v}'"))),
        }
    };

    let initial = match get("initial.kind").unwrap_or("preset") {
        "preset" => InitialData::Preset(match get("initial.preset").unwrap_or("constant") {
            "constant" => Preset::Constant {
                value: f64_key("initial.value", 1.0)?,
            },
            "two_mode" => Preset::TwoMode {
                mean: f64_key("initial.a", 1.0)?,
                amp: f64_key("initial.b", 0.3)?,
            },
            "single_mode" => Preset::SingleMode {
                mode: usize_key("initial.mode", 3)?,
                mean: f64_key("initial.a", 1.0)?,
                amp: f64_key("initial.b", 0.05)?,
            },
            "random" => Preset::Random {
                band_limit: usize_key("initial.band_limit", 16)?,
                amp: f64_key("initial.amp", 0.3)?,
                seed: usize_key("initial.seed", 1)? as u64,
            },
            other => return Err(Error::Config(format!("unknown preset '{other}'"))),
        }),
        "coeff_file" => {
            let p = get("initial.coeff_file")
                .ok_or_else(|| Error::Config("initial.coeff_file missing".into()))?;
            InitialData::Coefficients(io::read_spectral_csv(Path::new(p))?.coeffs().to_vec())
        }
        "grid_file" => {
            let p = get("initial.grid_file")
                .ok_or_else(|| Error::Config("initial.grid_file missing".into()))?;
            InitialData::GridSamples(io::read_grid_csv(Path::new(p))?)
        }
        other => return Err(Error::Config(format!("unknown initial.kind '{other}'"))),
    };

    let snapshot_times = match get("record.snapshot_times") {
        None => Vec::new(),
        Some(v) if v.is_empty() => Vec::new(),
        Some(v) => v
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Config(format!("bad snapshot time '{s}'")))
            })
            .collect::<Result<Vec<_>>>()?,
    };

    let mut tolerances = BTreeMap::new();
    for (k, v) in map {
        if let Some(name) = k.strip_prefix("tol.") {
            let val: f64 = v
                .parse()
                .map_err(|_| Error::Config(format!("{k}: expected a number, got '{v}'")))?;
            tolerances.insert(name.to_string(), val);
        }
    }

    Ok(RunConfig {
        initial,
        capacity: usize_key("dynamics.capacity", 64)?,
        clip_bound: f64_key("initial.clip_m", 1e6)?,
        fejer_order: usize_key("initial.fejer_n", 0)?,
        cfl: f64_key("dynamics.cfl", 1.0)?,
        dt_max: f64_key("dynamics.dt_max", 0.05)?,
        t_end: f64_key("dynamics.t_end", 1.0)?,
        record_dt: f64_key("record.dt", 0.01)?,
        snapshot_times,
        tolerances,
        alpha: f64_key("diag.alpha", 0.1)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# a run
initial.kind = preset
initial.preset = two_mode
initial.a = 1.0
initial.b = 0.3
dynamics.capacity = 64
dynamics.cfl = 0.25
dynamics.t_end = 5.0
record.dt = 0.01
record.snapshot_times = 0, 1, 5
tol.energy = 1e-6
";
        let (cfg, echo) = from_text(text, &[]).unwrap();
        assert_eq!(cfg.capacity, 64);
        assert_eq!(cfg.cfl, 0.25);
        assert_eq!(cfg.snapshot_times, vec![0.0, 1.0, 5.0]);
        assert_eq!(cfg.tolerances.get("energy"), Some(&1e-6));
        assert!(echo.contains("dynamics.cfl = 0.25\n"));
    }

    #[test]
    fn overrides_win_and_echo_back() {
        let (cfg, echo) = from_text("dynamics.cfl = 0.5\n", &["dynamics.cfl=0.25".into()]).unwrap();
        assert_eq!(cfg.cfl, 0.25);
        assert!(echo.contains("dynamics.cfl = 0.25"));
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        assert!(from_text("dynamcs.cfl = 0.5\n", &[]).is_err());
        assert!(from_text("dynamics.cfl = fast\n", &[]).is_err());
        assert!(from_text("dynamics.cfl = 3.0\n", &[]).is_err()); // out of range
    }
}
