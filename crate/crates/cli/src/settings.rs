//! Merged run settings: config-file values overridden by flags, then
//! resolved into validated parameter and method choices.

use std::path::PathBuf;

use serde::Deserialize;

use qmemcap_core::{
    ChannelParams, DRule, FixedPointOptions, Method, MonteCarloOptions, SymmetricParams,
    DEFAULT_MAX_BLOCK, HARD_MAX_BLOCK,
};

use crate::args::{MethodArgs, OutputArgs, PointArgs, SweepArgs};
use crate::CliError;

/// Every tunable, all optional. The JSON config file deserializes into
/// this directly; keys use the flag spelling (kebab-case).
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    pub a: Option<f64>,
    pub d: Option<f64>,
    pub s: Option<f64>,
    pub x0: Option<f64>,
    pub x1: Option<f64>,
    pub q00: Option<f64>,
    pub q10: Option<f64>,

    pub method: Option<String>,
    pub bins: Option<usize>,
    pub tol: Option<f64>,
    pub max_iter: Option<u64>,
    pub n: Option<usize>,
    pub steps: Option<u64>,
    pub burn_in: Option<u64>,
    pub seed: Option<u64>,

    pub a_min: Option<f64>,
    pub a_max: Option<f64>,
    pub a_steps: Option<usize>,
    pub s_min: Option<f64>,
    pub s_max: Option<f64>,
    pub s_steps: Option<usize>,
    pub d_rule: Option<String>,
    pub plot_script: Option<PathBuf>,

    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub strict: Option<bool>,
    pub threads: Option<usize>,
}

impl Settings {
    /// `self` wins over `fallback` field by field.
    fn or(self, fallback: Settings) -> Settings {
        Settings {
            a: self.a.or(fallback.a),
            d: self.d.or(fallback.d),
            s: self.s.or(fallback.s),
            x0: self.x0.or(fallback.x0),
            x1: self.x1.or(fallback.x1),
            q00: self.q00.or(fallback.q00),
            q10: self.q10.or(fallback.q10),
            method: self.method.or(fallback.method),
            bins: self.bins.or(fallback.bins),
            tol: self.tol.or(fallback.tol),
            max_iter: self.max_iter.or(fallback.max_iter),
            n: self.n.or(fallback.n),
            steps: self.steps.or(fallback.steps),
            burn_in: self.burn_in.or(fallback.burn_in),
            seed: self.seed.or(fallback.seed),
            a_min: self.a_min.or(fallback.a_min),
            a_max: self.a_max.or(fallback.a_max),
            a_steps: self.a_steps.or(fallback.a_steps),
            s_min: self.s_min.or(fallback.s_min),
            s_max: self.s_max.or(fallback.s_max),
            s_steps: self.s_steps.or(fallback.s_steps),
            d_rule: self.d_rule.or(fallback.d_rule),
            plot_script: self.plot_script.or(fallback.plot_script),
            out: self.out.or(fallback.out),
            format: self.format.or(fallback.format),
            strict: self.strict.or(fallback.strict),
            threads: self.threads.or(fallback.threads),
        }
    }

    fn from_point_args(args: &PointArgs) -> Settings {
        Settings {
            a: args.a,
            d: args.d,
            s: args.s,
            x0: args.x0,
            x1: args.x1,
            q00: args.q00,
            q10: args.q10,
            ..Settings::from_method_output(&args.method, &args.output)
        }
    }

    fn from_sweep_args(args: &SweepArgs) -> Settings {
        Settings {
            a_min: args.a_min,
            a_max: args.a_max,
            a_steps: args.a_steps,
            s_min: args.s_min,
            s_max: args.s_max,
            s_steps: args.s_steps,
            d_rule: args.d_rule.clone(),
            plot_script: args.plot_script.clone(),
            ..Settings::from_method_output(&args.method, &args.output)
        }
    }

    fn from_method_output(method: &MethodArgs, output: &OutputArgs) -> Settings {
        Settings {
            method: method.method.clone(),
            bins: method.bins,
            tol: method.tol,
            max_iter: method.max_iter,
            n: method.n,
            steps: method.steps,
            burn_in: method.burn_in,
            seed: method.seed,
            out: output.out.clone(),
            format: output.format.clone(),
            strict: if output.strict { Some(true) } else { None },
            threads: output.threads,
            ..Settings::default()
        }
    }
}

fn load_config(path: &PathBuf) -> Result<Settings, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("cannot parse config {}: {e}", path.display())))
}

/// Flags merged over the config file (flags win).
pub fn merge_point_args(args: &PointArgs) -> Result<Settings, CliError> {
    let from_cli = Settings::from_point_args(args);
    match &args.output.config {
        Some(path) => Ok(from_cli.or(load_config(path)?)),
        None => Ok(from_cli),
    }
}

/// Flags merged over the config file (flags win).
pub fn merge_sweep_args(args: &SweepArgs) -> Result<Settings, CliError> {
    let from_cli = Settings::from_sweep_args(args);
    match &args.output.config {
        Some(path) => Ok(from_cli.or(load_config(path)?)),
        None => Ok(from_cli),
    }
}

/// Channel parameters in the form the user supplied them.
#[derive(Debug, Clone, Copy)]
pub enum ParamSpec {
    Symmetric(SymmetricParams),
    Raw {
        x0: f64,
        x1: f64,
        q00: f64,
        q10: f64,
    },
}

impl ParamSpec {
    /// Validated channel parameters plus the (a, d, s) descriptor used in
    /// output rows. For raw input the descriptor is derived:
    /// `a = (x0+x1)/2`, `d = (x0-x1)/2`, and `s = q00 - q10` (the second
    /// eigenvalue of the switching matrix).
    pub fn resolve(&self) -> Result<(ChannelParams, SymmetricParams), CliError> {
        match *self {
            ParamSpec::Symmetric(p) => {
                let channel = ChannelParams::from_symmetric(p)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                Ok((channel, p))
            }
            ParamSpec::Raw { x0, x1, q00, q10 } => {
                let channel = ChannelParams::new(x0, x1, q00, q10)
                    .map_err(|e| CliError::invalid(e.to_string()))?;
                let descriptor = SymmetricParams {
                    a: (x0 + x1) / 2.0,
                    d: (x0 - x1) / 2.0,
                    s: q00 - q10,
                };
                Ok((channel, descriptor))
            }
        }
    }
}

/// Picks exactly one parameter form out of the merged settings.
pub fn resolve_params(s: &Settings) -> Result<ParamSpec, CliError> {
    let symmetric = [s.a, s.d, s.s];
    let raw = [s.x0, s.x1, s.q00, s.q10];
    let n_sym = symmetric.iter().filter(|v| v.is_some()).count();
    let n_raw = raw.iter().filter(|v| v.is_some()).count();
    if n_sym > 0 && n_raw > 0 {
        return Err(CliError::usage(
            "parameters must be given either as --a/--d/--s or as --x0/--x1/--q00/--q10, not a mix",
        ));
    }
    if n_sym == 3 {
        return Ok(ParamSpec::Symmetric(SymmetricParams {
            a: s.a.unwrap(),
            d: s.d.unwrap(),
            s: s.s.unwrap(),
        }));
    }
    if n_raw == 4 {
        return Ok(ParamSpec::Raw {
            x0: s.x0.unwrap(),
            x1: s.x1.unwrap(),
            q00: s.q00.unwrap(),
            q10: s.q10.unwrap(),
        });
    }
    if n_sym > 0 {
        return Err(CliError::usage(
            "symmetric parameters need all of --a, --d, and --s",
        ));
    }
    if n_raw > 0 {
        return Err(CliError::usage(
            "raw parameters need all of --x0, --x1, --q00, and --q10",
        ));
    }
    Err(CliError::usage(
        "no channel parameters given; use --a/--d/--s or --x0/--x1/--q00/--q10",
    ))
}

/// Builds the estimator from the merged settings, warning on stderr when
/// the block length is past the default cap.
pub fn resolve_method(s: &Settings) -> Result<Method, CliError> {
    let name = s.method.as_deref().unwrap_or("blackwell");
    match name {
        "blackwell" => {
            let defaults = FixedPointOptions::default();
            Ok(Method::FixedPoint(FixedPointOptions {
                bins: s.bins.unwrap_or(defaults.bins),
                tol: s.tol.unwrap_or(defaults.tol),
                max_iter: s.max_iter.unwrap_or(defaults.max_iter),
            }))
        }
        "block" => {
            let n = s.n.unwrap_or(16);
            if n > HARD_MAX_BLOCK {
                return Err(CliError::invalid(format!(
                    "block length {n} exceeds the resource cap {HARD_MAX_BLOCK} (2^{n} words)"
                )));
            }
            if n > DEFAULT_MAX_BLOCK {
                eprintln!(
                    "warning: block length {n} enumerates 2^{n} words; this may take a while"
                );
            }
            Ok(Method::Block { n })
        }
        "mc" => {
            let defaults = MonteCarloOptions::default();
            Ok(Method::MonteCarlo(MonteCarloOptions {
                steps: s.steps.unwrap_or(defaults.steps),
                burn_in: s.burn_in.unwrap_or(defaults.burn_in),
                seed: s.seed.unwrap_or(defaults.seed),
            }))
        }
        other => Err(CliError::usage(format!(
            "unknown method '{other}'; expected blackwell, block, or mc"
        ))),
    }
}

/// Parses the difference rule: `max`, `fixed:V`, or `fixed(V)`.
pub fn resolve_d_rule(s: &Settings) -> Result<DRule, CliError> {
    let text = s.d_rule.as_deref().unwrap_or("max");
    if text == "max" {
        return Ok(DRule::Max);
    }
    let inner = text
        .strip_prefix("fixed:")
        .or_else(|| {
            text.strip_prefix("fixed(")
                .and_then(|rest| rest.strip_suffix(')'))
        })
        .ok_or_else(|| {
            CliError::usage(format!(
                "unknown d-rule '{text}'; expected 'max' or 'fixed:VALUE'"
            ))
        })?;
    let value: f64 = inner
        .parse()
        .map_err(|_| CliError::usage(format!("cannot parse d-rule value '{inner}'")))?;
    Ok(DRule::Fixed(value))
}

/// Output format choice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub fn resolve_format(s: &Settings, default: Format) -> Result<Format, CliError> {
    match s.format.as_deref() {
        None => Ok(default),
        Some("csv") => Ok(Format::Csv),
        Some("json") => Ok(Format::Json),
        Some(other) => Err(CliError::usage(format!(
            "unknown format '{other}'; expected csv or json"
        ))),
    }
}
