//! The experiment configuration format.
//!
//! Configs are flat `key = value` text: one pair per line, `#` starts a
//! comment, dotted keys group related settings (`noise.kind`,
//! `signal.amplitude`, `collection.ranks`).  Only `n`, `sigma`, and `beta`
//! are required; everything else has a documented default.  [`parse_config`]
//! validates the result end to end — a config that parses is one the
//! harness will accept.
//!
//! | key                  | meaning                                   | default |
//! |----------------------|-------------------------------------------|---------|
//! | `n`                  | ambient dimension                         | —       |
//! | `sigma`              | noise scale (σ; the constants use σ²)     | —       |
//! | `beta`               | aggregation temperature β                 | —       |
//! | `delta`              | sharp/weak interpolation δ ∈ [0, 1]       | `1`     |
//! | `eta`                | confidence level η ∈ (0, 1]               | `0.05`  |
//! | `penalty_rule`       | `theorem1`, `gaussian_projection`, `custom` | `theorem1` |
//! | `kappa`              | penalty multiplier (custom rule only)     | —       |
//! | `v_bound`            | spectral bound V (≥ family sup norm)      | family sup norm |
//! | `trials`             | Monte Carlo trials                        | `1000`  |
//! | `master_seed`        | RNG master seed                           | `0`     |
//! | `noise.kind`         | `gaussian`, `rademacher`, `uniform_bounded` | `gaussian` |
//! | `signal.kind`        | `zero`, `sinusoid`, `mix`, `step`         | `sinusoid` |
//! | `signal.amplitude`   | sinusoid amplitude                        | `3`     |
//! | `signal.frequency`   | sinusoid frequency                        | `4`     |
//! | `signal.components`  | mix terms `amp:freq,amp:freq,…`           | —       |
//! | `signal.low/high/position` | step levels and break point         | `-1`/`1`/`0.5` |
//! | `collection.kind`    | `projections` or `shrinkage`              | `projections` |
//! | `collection.basis`   | `standard`, `cosine`, `random`            | `cosine` |
//! | `collection.ranks`   | nested projection ranks `k1,k2,…`         | doubling ladder to `n` |
//! | `collection.cutoffs` | shrinkage cutoffs `k1,k2,…`               | doubling ladder to `n` |

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use ewa_core::estimators::{basis_by_name, EstimatorCollection};
use ewa_core::harness::check_compatibility;
use ewa_core::noise::{NoiseKind, NoiseModel};
use ewa_core::risk::{rule_by_name, AggregationConfig, RuleParams};
use ewa_core::signal::{SignalKind, SignalSpec};

/// The planted regression vector, as configured.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignalConfig {
    /// `f0 = 0`.
    Zero,
    /// A single sinusoid.
    Sinusoid { amplitude: f64, frequency: u32 },
    /// A sum of `(amplitude, frequency)` sinusoids.
    Mix { components: Vec<(f64, u32)> },
    /// A step: `low` up to `position`, `high` after.
    Step { low: f64, high: f64, position: f64 },
}

/// The smoother family, as configured.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CollectionConfig {
    /// Nested rank-`k` projections onto leading basis vectors.
    Projections { basis: String, ranks: Vec<usize> },
    /// Tent-profile shrinkage `ρ_i = (1 − i/k)₊` per cutoff `k`.
    Shrinkage { basis: String, cutoffs: Vec<usize> },
}

/// A fully parsed experiment description.
///
/// Equality is field-wise, which makes the render/parse round trip
/// testable: `parse_config(render(cfg)) == cfg`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    /// Ambient dimension.
    pub n: usize,
    /// Noise scale σ (the aggregation constants use σ²).
    pub sigma: f64,
    /// Temperature β.
    pub beta: f64,
    /// Interpolation δ between the sharp (0) and weak (1) regimes.
    pub delta: f64,
    /// Confidence level η.
    pub eta: f64,
    /// Bound-rule registry name.
    pub penalty_rule: String,
    /// Penalty multiplier for the `custom` rule.
    pub kappa: Option<f64>,
    /// Spectral bound override; defaults to the family's sup norm.
    pub v_bound: Option<f64>,
    /// Monte Carlo trials.
    pub trials: u64,
    /// RNG master seed (trials use streams `0..trials`).
    pub master_seed: u64,
    /// Noise-model registry name.
    #[serde(rename = "noise")]
    pub noise_kind: String,
    /// The planted signal.
    pub signal: SignalConfig,
    /// The smoother family.
    pub collection: CollectionConfig,
}

/// The validated, ready-to-run objects a [`RunConfig`] describes.
pub struct Experiment {
    pub signal: SignalSpec,
    pub collection: EstimatorCollection,
    pub noise: NoiseModel,
    pub config: AggregationConfig,
    pub trials: usize,
    pub master_seed: u64,
}

/// The default rank/cutoff ladder: powers of two up to `n`, then `n`.
#[must_use]
pub fn default_ladder(n: usize) -> Vec<usize> {
    let mut ladder = Vec::new();
    let mut k = 1;
    while k < n {
        ladder.push(k);
        k *= 2;
    }
    ladder.push(n);
    ladder
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

/// The raw `key = value` pairs of a config file, consumed key by key so that
/// anything left over is reported as unknown.
struct Fields(BTreeMap<String, String>);

impl Fields {
    fn from_text(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (index, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                anyhow!("line {}: expected 'key = value', got '{line}'", index + 1)
            })?;
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if map.insert(key.clone(), value).is_some() {
                bail!("duplicate key '{key}'");
            }
        }
        Ok(Self(map))
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key)
    }

    fn take_parse<T>(&mut self, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        match self.take(key) {
            None => Ok(None),
            Some(value) => value
                .parse::<T>()
                .map(Some)
                .map_err(|err| anyhow!("key '{key}': cannot parse '{value}': {err}")),
        }
    }

    fn require<T>(&mut self, key: &str) -> Result<T>
    where
        T: FromStr,
        T::Err: std::fmt::Display,
    {
        self.take_parse(key)?
            .ok_or_else(|| anyhow!("missing required key '{key}'"))
    }

    fn finish(self) -> Result<()> {
        if let Some(key) = self.0.keys().next() {
            bail!("unknown key '{key}'");
        }
        Ok(())
    }
}

fn parse_index_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            item.parse::<usize>()
                .map_err(|err| anyhow!("key '{key}': cannot parse '{item}': {err}"))
        })
        .collect()
}

fn parse_components(key: &str, value: &str) -> Result<Vec<(f64, u32)>> {
    value
        .split(',')
        .map(|item| {
            let item = item.trim();
            let (amp, freq) = item.split_once(':').ok_or_else(|| {
                anyhow!("key '{key}': expected 'amplitude:frequency', got '{item}'")
            })?;
            let amp = amp
                .trim()
                .parse::<f64>()
                .map_err(|err| anyhow!("key '{key}': cannot parse amplitude '{amp}': {err}"))?;
            let freq = freq
                .trim()
                .parse::<u32>()
                .map_err(|err| anyhow!("key '{key}': cannot parse frequency '{freq}': {err}"))?;
            Ok((amp, freq))
        })
        .collect()
}

/// Parses the raw text into a [`RunConfig`] without running validation.
///
/// Use [`parse_config`] unless you specifically want to inspect an
/// inadmissible config.
pub fn parse_text(text: &str) -> Result<RunConfig> {
    let mut fields = Fields::from_text(text)?;

    let n: usize = fields.require("n")?;
    let sigma: f64 = fields.require("sigma")?;
    let beta: f64 = fields.require("beta")?;
    let delta = fields.take_parse("delta")?.unwrap_or(1.0);
    let eta = fields.take_parse("eta")?.unwrap_or(0.05);
    let penalty_rule = fields
        .take("penalty_rule")
        .unwrap_or_else(|| "theorem1".into());
    let kappa = fields.take_parse("kappa")?;
    let v_bound = fields.take_parse("v_bound")?;
    let trials = fields.take_parse("trials")?.unwrap_or(1000);
    let master_seed = fields.take_parse("master_seed")?.unwrap_or(0);
    let noise_kind = fields
        .take("noise.kind")
        .unwrap_or_else(|| "gaussian".into());

    let signal_kind = fields
        .take("signal.kind")
        .unwrap_or_else(|| "sinusoid".into());
    let signal = match signal_kind.as_str() {
        "zero" => SignalConfig::Zero,
        "sinusoid" => SignalConfig::Sinusoid {
            amplitude: fields.take_parse("signal.amplitude")?.unwrap_or(3.0),
            frequency: fields.take_parse("signal.frequency")?.unwrap_or(4),
        },
        "mix" => {
            let raw = fields.take("signal.components").ok_or_else(|| {
                anyhow!("missing required key 'signal.components' for signal kind 'mix'")
            })?;
            SignalConfig::Mix {
                components: parse_components("signal.components", &raw)?,
            }
        }
        "step" => SignalConfig::Step {
            low: fields.take_parse("signal.low")?.unwrap_or(-1.0),
            high: fields.take_parse("signal.high")?.unwrap_or(1.0),
            position: fields.take_parse("signal.position")?.unwrap_or(0.5),
        },
        other => bail!(
            "key 'signal.kind': unknown signal kind '{other}' (known: zero, sinusoid, mix, step)"
        ),
    };

    let collection_kind = fields
        .take("collection.kind")
        .unwrap_or_else(|| "projections".into());
    let basis = fields
        .take("collection.basis")
        .unwrap_or_else(|| "cosine".into());
    let collection = match collection_kind.as_str() {
        "projections" => {
            let ranks = match fields.take("collection.ranks") {
                Some(raw) => parse_index_list("collection.ranks", &raw)?,
                None => default_ladder(n),
            };
            CollectionConfig::Projections { basis, ranks }
        }
        "shrinkage" => {
            let cutoffs = match fields.take("collection.cutoffs") {
                Some(raw) => parse_index_list("collection.cutoffs", &raw)?,
                None => default_ladder(n),
            };
            CollectionConfig::Shrinkage { basis, cutoffs }
        }
        other => bail!(
            "key 'collection.kind': unknown collection kind '{other}' (known: projections, shrinkage)"
        ),
    };

    fields.finish()?;
    Ok(RunConfig {
        n,
        sigma,
        beta,
        delta,
        eta,
        penalty_rule,
        kappa,
        v_bound,
        trials,
        master_seed,
        noise_kind,
        signal,
        collection,
    })
}

/// Parses and fully validates a config: the returned [`RunConfig`] is
/// guaranteed to [`RunConfig::build`] into an admissible experiment.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg = parse_text(text)?;
    cfg.build()?;
    Ok(cfg)
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// Renders a config back to the text format, such that
/// `parse_config(render(cfg)) == cfg`.
#[must_use]
pub fn render(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# experiment geometry");
    let _ = writeln!(out, "n = {}", cfg.n);
    let _ = writeln!(out, "sigma = {}", cfg.sigma);
    let _ = writeln!(out, "# aggregation constants");
    let _ = writeln!(out, "beta = {}", cfg.beta);
    let _ = writeln!(out, "delta = {}", cfg.delta);
    let _ = writeln!(out, "eta = {}", cfg.eta);
    let _ = writeln!(out, "penalty_rule = {}", cfg.penalty_rule);
    if let Some(kappa) = cfg.kappa {
        let _ = writeln!(out, "kappa = {kappa}");
    }
    if let Some(v_bound) = cfg.v_bound {
        let _ = writeln!(out, "v_bound = {v_bound}");
    }
    let _ = writeln!(out, "# monte carlo");
    let _ = writeln!(out, "trials = {}", cfg.trials);
    let _ = writeln!(out, "master_seed = {}", cfg.master_seed);
    let _ = writeln!(out, "# noise");
    let _ = writeln!(out, "noise.kind = {}", cfg.noise_kind);
    let _ = writeln!(out, "# signal");
    match &cfg.signal {
        SignalConfig::Zero => {
            let _ = writeln!(out, "signal.kind = zero");
        }
        SignalConfig::Sinusoid {
            amplitude,
            frequency,
        } => {
            let _ = writeln!(out, "signal.kind = sinusoid");
            let _ = writeln!(out, "signal.amplitude = {amplitude}");
            let _ = writeln!(out, "signal.frequency = {frequency}");
        }
        SignalConfig::Mix { components } => {
            let _ = writeln!(out, "signal.kind = mix");
            let rendered: Vec<String> = components
                .iter()
                .map(|(amp, freq)| format!("{amp}:{freq}"))
                .collect();
            let _ = writeln!(out, "signal.components = {}", rendered.join(","));
        }
        SignalConfig::Step {
            low,
            high,
            position,
        } => {
            let _ = writeln!(out, "signal.kind = step");
            let _ = writeln!(out, "signal.low = {low}");
            let _ = writeln!(out, "signal.high = {high}");
            let _ = writeln!(out, "signal.position = {position}");
        }
    }
    let _ = writeln!(out, "# estimator collection");
    match &cfg.collection {
        CollectionConfig::Projections { basis, ranks } => {
            let _ = writeln!(out, "collection.kind = projections");
            let _ = writeln!(out, "collection.basis = {basis}");
            let _ = writeln!(out, "collection.ranks = {}", join(ranks));
        }
        CollectionConfig::Shrinkage { basis, cutoffs } => {
            let _ = writeln!(out, "collection.kind = shrinkage");
            let _ = writeln!(out, "collection.basis = {basis}");
            let _ = writeln!(out, "collection.cutoffs = {}", join(cutoffs));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Validation / construction
// ---------------------------------------------------------------------------

impl RunConfig {
    /// Builds the validated experiment objects, or fails naming the violated
    /// constraint (e.g. a temperature at or below its admissibility floor).
    pub fn build(&self) -> Result<Experiment> {
        if self.trials == 0 {
            bail!("key 'trials': must be at least 1");
        }

        let signal_kind = match &self.signal {
            SignalConfig::Zero => SignalKind::Zero,
            SignalConfig::Sinusoid {
                amplitude,
                frequency,
            } => SignalKind::Sinusoid {
                amplitude: *amplitude,
                frequency: *frequency,
            },
            SignalConfig::Mix { components } => SignalKind::SinusoidMix {
                components: components.clone(),
            },
            SignalConfig::Step {
                low,
                high,
                position,
            } => SignalKind::Step {
                low: *low,
                high: *high,
                position: *position,
            },
        };
        let signal = SignalSpec::new(signal_kind, self.n).context("invalid signal")?;

        let collection = match &self.collection {
            CollectionConfig::Projections { basis, ranks } => {
                let basis = basis_by_name(basis, self.n, self.master_seed)
                    .context("key 'collection.basis'")?;
                EstimatorCollection::nested_projections(basis, ranks)
                    .context("key 'collection.ranks'")?
            }
            CollectionConfig::Shrinkage { basis, cutoffs } => {
                let basis = basis_by_name(basis, self.n, self.master_seed)
                    .context("key 'collection.basis'")?;
                EstimatorCollection::shrinkage_family(basis, cutoffs)
                    .context("key 'collection.cutoffs'")?
            }
        };
        let collection = match self.v_bound {
            None => collection,
            Some(v) => EstimatorCollection::new(
                collection.items().to_vec(),
                collection.prior().to_vec(),
                v,
            )
            .context("key 'v_bound'")?,
        };

        let noise_kind = match self.noise_kind.as_str() {
            "gaussian" => NoiseKind::Gaussian,
            "rademacher" => NoiseKind::Rademacher,
            "uniform_bounded" => NoiseKind::UniformBounded,
            other => bail!(
                "key 'noise.kind': unknown noise model '{other}' (known: gaussian, rademacher, uniform_bounded)"
            ),
        };
        let noise = NoiseModel::new(noise_kind, self.sigma).context("key 'sigma'")?;

        let rule = rule_by_name(&self.penalty_rule, &RuleParams { kappa: self.kappa })
            .context("key 'penalty_rule'")?;
        let config = AggregationConfig::new(
            self.beta,
            self.delta,
            self.eta,
            noise.subgaussian_param(),
            collection.v_bound(),
            rule,
        )
        .context("inadmissible aggregation constants")?;
        check_compatibility(&collection, &noise, &config)
            .context("configuration is internally inconsistent")?;

        Ok(Experiment {
            signal,
            collection,
            noise,
            config,
            trials: self.trials as usize,
            master_seed: self.master_seed,
        })
    }
}
