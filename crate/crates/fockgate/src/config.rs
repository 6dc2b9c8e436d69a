// Copyright 2026 The fockgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Scenario configuration: command-line flags layered over an optional flat
//! TOML file, layered over defaults.

use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use fockgate_core::gate::linear_grid;
use fockgate_core::{balanced_reflectivity, BasisInput, Complex64, QubitEncoding, RuleKind};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_GRID: &str = "0:1:1/24";

/// Renormalizing user amplitudes by more than this triggers a warning.
pub const RENORMALIZATION_WARNING: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EncodingArg {
    Phase,
    Cnot,
}

impl From<EncodingArg> for QubitEncoding {
    fn from(e: EncodingArg) -> Self {
        match e {
            EncodingArg::Phase => QubitEncoding::PhaseGate,
            EncodingArg::Cnot => QubitEncoding::Cnot,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RuleArg {
    Full,
    Practical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Table => "table",
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Flags shared by every subcommand. Anything left unset falls back to the
/// config file and then to the defaults.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Qubit encoding.
    #[arg(long, value_enum)]
    pub encoding: Option<EncodingArg>,
    /// Reflectivity of all three beam splitters (decimal or p/q).
    #[arg(long, value_parser = parse_real)]
    pub reflectivity: Option<f64>,
    /// Post-selection rule.
    #[arg(long, value_enum)]
    pub rule: Option<RuleArg>,
    /// Designated output port for the practical rule.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub port: Option<u8>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Flat TOML file with defaults for any of the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Every setting that may come from a flag or the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PartialConfig {
    pub encoding: Option<EncodingArg>,
    pub reflectivity: Option<f64>,
    pub rule: Option<RuleArg>,
    pub port: Option<u8>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub input: Option<String>,
    pub amplitudes: Option<String>,
}

impl PartialConfig {
    pub fn from_args(common: &CommonArgs) -> Self {
        PartialConfig {
            encoding: common.encoding,
            reflectivity: common.reflectivity,
            rule: common.rule,
            port: common.port,
            format: common.format,
            out: common.out.clone(),
            seed: common.seed,
            ..Default::default()
        }
    }

    /// Parses a flat TOML document; values may be strings or numbers.
    pub fn from_toml(text: &str) -> Result<Self> {
        let table: toml::Table = text.parse().context("config file is not valid TOML")?;
        let mut cfg = PartialConfig::default();
        for (key, value) in table {
            let raw = match &value {
                toml::Value::String(s) => s.clone(),
                toml::Value::Integer(i) => i.to_string(),
                toml::Value::Float(f) => f.to_string(),
                other => bail!("config key `{key}` must be a string or number, got {other}"),
            };
            let bad = |e: String| anyhow!("config key `{key}`: {e}");
            match key.as_str() {
                "encoding" => cfg.encoding = Some(EncodingArg::from_str(&raw, true).map_err(bad)?),
                "reflectivity" => cfg.reflectivity = Some(parse_real(&raw).map_err(bad)?),
                "rule" => cfg.rule = Some(RuleArg::from_str(&raw, true).map_err(bad)?),
                "port" => {
                    cfg.port = Some(match raw.as_str() {
                        "1" => 1,
                        "2" => 2,
                        _ => return Err(bad("port must be 1 or 2".into())),
                    })
                }
                "format" => cfg.format = Some(Format::from_str(&raw, true).map_err(bad)?),
                "out" => cfg.out = Some(PathBuf::from(raw)),
                "seed" => cfg.seed = Some(raw.parse().map_err(|e| bad(format!("{e}")))?),
                "grid" => cfg.grid = Some(raw),
                "input" => cfg.input = Some(raw),
                "amplitudes" => cfg.amplitudes = Some(raw),
                _ => bail!("unknown config key `{key}`"),
            }
        }
        Ok(cfg)
    }

    /// Fields set in `self` win over those in `fallback`.
    pub fn or(self, fallback: PartialConfig) -> PartialConfig {
        PartialConfig {
            encoding: self.encoding.or(fallback.encoding),
            reflectivity: self.reflectivity.or(fallback.reflectivity),
            rule: self.rule.or(fallback.rule),
            port: self.port.or(fallback.port),
            format: self.format.or(fallback.format),
            out: self.out.or(fallback.out),
            seed: self.seed.or(fallback.seed),
            grid: self.grid.or(fallback.grid),
            input: self.input.or(fallback.input),
            amplitudes: self.amplitudes.or(fallback.amplitudes),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InputSpec {
    Basis(usize),
    Amplitudes([Complex64; 4]),
}

/// Fully resolved settings for one command.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub encoding: QubitEncoding,
    pub reflectivity: f64,
    pub rule: RuleKind,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub grid_spec: String,
    pub grid: Vec<f64>,
    pub input: Option<InputSpec>,
    pub input_label: Option<String>,
    pub warnings: Vec<String>,
}

impl ScenarioConfig {
    pub fn resolve(p: PartialConfig) -> Result<Self> {
        let encoding: QubitEncoding = p.encoding.unwrap_or(EncodingArg::Phase).into();
        let rule = match p.rule.unwrap_or(RuleArg::Full) {
            RuleArg::Full => RuleKind::Full,
            RuleArg::Practical => RuleKind::Practical {
                port: p.port.unwrap_or(1),
            },
        };
        let grid_spec = p.grid.unwrap_or_else(|| DEFAULT_GRID.to_string());
        let grid = parse_grid(&grid_spec)?;
        let mut warnings = Vec::new();
        let (input, input_label) = match (p.input, p.amplitudes) {
            (Some(_), Some(_)) => bail!("give either an input label or amplitudes, not both"),
            (Some(label), None) => (Some(InputSpec::Basis(parse_basis_label(&label)?)), Some(label)),
            (None, Some(list)) => {
                let (amps, warning) = parse_amplitudes(&list)?;
                warnings.extend(warning);
                (Some(InputSpec::Amplitudes(amps)), Some(list))
            }
            (None, None) => (None, None),
        };
        Ok(ScenarioConfig {
            encoding,
            reflectivity: p.reflectivity.unwrap_or_else(balanced_reflectivity),
            rule,
            format: p.format.unwrap_or(Format::Table),
            out: p.out,
            seed: p.seed.unwrap_or(DEFAULT_SEED),
            grid_spec,
            grid,
            input,
            input_label,
            warnings,
        })
    }

    pub fn rule_name(&self) -> String {
        match self.rule {
            RuleKind::Full => "full".into(),
            RuleKind::Practical { port } => format!("practical(port {port})"),
        }
    }
}

/// Decimal or `p/q`.
pub fn parse_real(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let q: f64 = q.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in `{s}`"));
            }
            p / q
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// `start:stop:step` (inclusive) or a comma-separated list of values.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let spec = spec.trim();
    if spec.is_empty() {
        bail!("empty grid");
    }
    let grid = if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        let [start, stop, step] = parts.as_slice() else {
            bail!("grid range must be start:stop:step");
        };
        let [start, stop, step] = [start, stop, step].map(|s| parse_real(s));
        linear_grid(
            start.map_err(|e| anyhow!(e))?,
            stop.map_err(|e| anyhow!(e))?,
            step.map_err(|e| anyhow!(e))?,
        )?
    } else {
        spec.split(',')
            .map(|s| parse_real(s).map_err(|e| anyhow!(e)))
            .collect::<Result<Vec<_>>>()?
    };
    if let Some(bad) = grid.iter().find(|r| !(0.0..=1.0).contains(*r)) {
        bail!("grid value {bad} outside [0, 1]");
    }
    Ok(grid)
}

/// `VV`/`VH`/`HV`/`HH` or `00`..`11`, mapped to the basis index.
pub fn parse_basis_label(label: &str) -> Result<usize> {
    if let Some(b) = BasisInput::parse(label) {
        return Ok(b.index());
    }
    QubitEncoding::LABELS
        .iter()
        .position(|l| *l == label.trim())
        .ok_or_else(|| anyhow!("unknown input `{label}` (use VV, VH, HV, HH or 00, 01, 10, 11)"))
}

/// Four comma-separated complex amplitudes (`0.5`, `0.5+0.5i`, `-i`),
/// normalized. Returns a warning when the normalization changed the
/// vector's norm by more than [`RENORMALIZATION_WARNING`].
pub fn parse_amplitudes(list: &str) -> Result<([Complex64; 4], Option<String>)> {
    let parts: Vec<&str> = list.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        bail!("expected 4 amplitudes, got {}", parts.len());
    }
    let mut amps = [Complex64::new(0.0, 0.0); 4];
    for (slot, part) in amps.iter_mut().zip(&parts) {
        *slot = parse_complex(part)?;
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    if !(norm > 1e-12) {
        bail!("amplitudes are all zero");
    }
    let warning = ((norm - 1.0).abs() > RENORMALIZATION_WARNING)
        .then(|| format!("amplitudes renormalized (norm was {norm})"));
    Ok((amps.map(|a| a / norm), warning))
}

fn parse_complex(s: &str) -> Result<Complex64> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let expanded = match compact.as_str() {
        "i" | "+i" => "0+1i".to_string(),
        "-i" => "0-1i".to_string(),
        other => other.to_string(),
    };
    expanded
        .parse::<Complex64>()
        .map_err(|_| anyhow!("`{s}` is not a complex number"))
}

pub fn load(common: &CommonArgs, extra: PartialConfig) -> Result<ScenarioConfig> {
    let flags = PartialConfig::from_args(common).or(extra);
    let file = match &common.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            PartialConfig::from_toml(&text)?
        }
        None => PartialConfig::default(),
    };
    ScenarioConfig::resolve(flags.or(file))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals_and_fractions() {
        assert_eq!(parse_real("0.25"), Ok(0.25));
        assert_eq!(parse_real("1/3"), Ok(1.0 / 3.0));
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("inf").is_err());
    }

    #[test]
    fn grids() {
        assert_eq!(parse_grid("0,1/2,1").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0:1:0.25").unwrap().len(), 5);
        assert_eq!(parse_grid(DEFAULT_GRID).unwrap().len(), 25);
        assert!(parse_grid("").is_err());
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0,1.5").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn amplitudes() {
        let (a, w) = parse_amplitudes("1, 0, 0, 0").unwrap();
        assert_eq!(a[0], Complex64::new(1.0, 0.0));
        assert!(w.is_none());
        let (a, w) = parse_amplitudes("1,1,0,-i").unwrap();
        assert!((a[3] - Complex64::new(0.0, -1.0 / 3f64.sqrt())).norm() < 1e-15);
        assert!(w.is_some());
        assert!(parse_amplitudes("1,0,0").is_err());
        assert!(parse_amplitudes("0,0,0,0").is_err());
        assert!(parse_amplitudes("1,0,0,x").is_err());
        let (a, w) = parse_amplitudes("0.5+0.5i,0.5,0.5,0").unwrap();
        assert_eq!(a[0], Complex64::new(0.5, 0.5));
        assert!(w.is_none());
    }

    #[test]
    fn basis_labels() {
        assert_eq!(parse_basis_label("HV").unwrap(), 2);
        assert_eq!(parse_basis_label("11").unwrap(), 3);
        assert!(parse_basis_label("HX").is_err());
    }

    #[test]
    fn toml_and_precedence() {
        let file = PartialConfig::from_toml(
            "encoding = \"cnot\"\nreflectivity = \"1/4\"\nseed = 9\nformat = \"csv\"\n",
        )
        .unwrap();
        assert_eq!(file.reflectivity, Some(0.25));
        let flags = PartialConfig {
            reflectivity: Some(0.5),
            ..Default::default()
        };
        let cfg = ScenarioConfig::resolve(flags.or(file)).unwrap();
        assert_eq!(cfg.reflectivity, 0.5);
        assert_eq!(cfg.encoding, QubitEncoding::Cnot);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.format, Format::Csv);
        assert!(PartialConfig::from_toml("colour = \"red\"").is_err());
        assert!(PartialConfig::from_toml("port = 3").is_err());
        assert!(PartialConfig::from_toml("seed = [1]").is_err());
    }

    #[test]
    fn defaults() {
        let cfg = ScenarioConfig::resolve(PartialConfig::default()).unwrap();
        assert_eq!(cfg.reflectivity, 1.0 / 3.0);
        assert_eq!(cfg.rule, RuleKind::Full);
        assert_eq!(cfg.seed, DEFAULT_SEED);
        let practical = ScenarioConfig::resolve(PartialConfig {
            rule: Some(RuleArg::Practical),
            port: Some(2),
            ..Default::default()
        })
        .unwrap();
        assert_eq!(practical.rule, RuleKind::Practical { port: 2 });
    }
}
