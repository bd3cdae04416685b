//! The five subcommands.

use rayon::prelude::*;
use serde::Serialize;

use qmemcap_core::{
    sweep_points, ChannelParams, Method, SweepError, SweepSpec, SymmetricParams, DEFAULT_MAX_BLOCK,
    HARD_MAX_BLOCK,
};

use crate::args::{PointArgs, SweepArgs};
use crate::eval::{evaluate, Diagnostic, PointRow};
use crate::output::{
    emit, plot_script, plot_script_path, point_csv_row, sweep_csv_row, to_json_pretty, SkipJson,
    SweepJsonRow, POINT_HEADER, SWEEP_HEADER,
};
use crate::settings::{
    merge_point_args, merge_sweep_args, resolve_d_rule, resolve_format, resolve_method,
    resolve_params, Format, ParamSpec, Settings,
};
use crate::{exit, CliError};

/// `validate`: report every violated constraint; exit 0 when clean.
pub fn run_validate(args: &PointArgs) -> Result<(), CliError> {
    let merged = merge_point_args(args)?;
    let spec = resolve_params(&merged)?;
    let violations: Vec<String> = match spec {
        ParamSpec::Symmetric(p) => p.validate().iter().map(|v| v.to_string()).collect(),
        ParamSpec::Raw { x0, x1, q00, q10 } => match ChannelParams::new(x0, x1, q00, q10) {
            Ok(_) => Vec::new(),
            Err(e) => e.violations.iter().map(|v| v.to_string()).collect(),
        },
    };
    if violations.is_empty() {
        emit(merged.out.as_deref(), "ok\n")?;
        Ok(())
    } else {
        let mut report = String::new();
        for v in &violations {
            report.push_str(v);
            report.push('\n');
        }
        emit(merged.out.as_deref(), &report)?;
        Err(CliError {
            code: exit::INVALID_PARAMS,
            message: format!("{} constraint(s) violated", violations.len()),
        })
    }
}

/// `entropy-rate` and `capacity`: one parameter point, one output row.
pub fn run_point(args: &PointArgs) -> Result<(), CliError> {
    let merged = merge_point_args(args)?;
    let format = resolve_format(&merged, Format::Json)?;
    let method = resolve_method(&merged)?;
    let (channel, descriptor) = resolve_params(&merged)?.resolve()?;
    let row = evaluate(&channel, descriptor, &method)?;
    let content = match format {
        Format::Csv => format!("{POINT_HEADER}\n{}\n", point_csv_row(&row)),
        Format::Json => to_json_pretty(&row),
    };
    emit(merged.out.as_deref(), &content)?;
    if merged.strict.unwrap_or(false) && !row.converged {
        return Err(CliError {
            code: exit::NON_CONVERGED,
            message: "estimate did not converge (--strict)".to_string(),
        });
    }
    Ok(())
}

enum SweepItem {
    Row(PointRow),
    Skip {
        a: f64,
        s: f64,
        d: f64,
        reason: String,
    },
}

fn evaluate_grid_point(a: f64, s: f64, d: f64, method: &Method) -> Result<SweepItem, CliError> {
    let params = match SymmetricParams::new(a, d, s) {
        Ok(p) => p,
        Err(e) => {
            return Ok(SweepItem::Skip {
                a,
                s,
                d,
                reason: e.to_string(),
            })
        }
    };
    let channel =
        ChannelParams::from_symmetric(params).map_err(|e| CliError::invalid(e.to_string()))?;
    Ok(SweepItem::Row(evaluate(&channel, params, method)?))
}

#[derive(Serialize)]
struct SweepJson {
    rows: Vec<SweepJsonRow>,
    skipped: Vec<SkipJson>,
}

/// `sweep`: the capacity surface as CSV (default) or JSON. Grid points
/// are independent and evaluated in parallel; output order is grid
/// order, so results do not depend on the thread count.
pub fn run_sweep(args: &SweepArgs) -> Result<(), CliError> {
    let merged = merge_sweep_args(args)?;
    let format = resolve_format(&merged, Format::Csv)?;
    let method = resolve_method(&merged)?;
    let d_rule = resolve_d_rule(&merged)?;
    let defaults = SweepSpec::default();
    let spec = SweepSpec {
        a_min: merged.a_min.unwrap_or(defaults.a_min),
        a_max: merged.a_max.unwrap_or(defaults.a_max),
        a_steps: merged.a_steps.unwrap_or(defaults.a_steps),
        s_min: merged.s_min.unwrap_or(defaults.s_min),
        s_max: merged.s_max.unwrap_or(defaults.s_max),
        s_steps: merged.s_steps.unwrap_or(defaults.s_steps),
        d_rule,
        method,
    };
    if merged.plot_script.is_some() && merged.out.is_none() {
        return Err(CliError::usage(
            "--plot-script needs --out so the script can reference the CSV file",
        ));
    }

    let points = sweep_points(&spec).map_err(|e| match e {
        SweepError::EmptyGrid { .. } | SweepError::BadSPair { .. } => {
            CliError::invalid(e.to_string())
        }
        SweepError::Method(m) => CliError::invalid(m.to_string()),
    })?;

    let items: Vec<SweepItem> = run_in_pool(merged.threads, || {
        points
            .par_iter()
            .map(|&(a, s, d)| evaluate_grid_point(a, s, d, &spec.method))
            .collect::<Result<Vec<_>, CliError>>()
    })?;

    let mut rows = Vec::new();
    let mut skipped = Vec::new();
    for item in items {
        match item {
            SweepItem::Row(row) => rows.push(row),
            SweepItem::Skip { a, s, d, reason } => skipped.push(SkipJson { a, s, d, reason }),
        }
    }
    for skip in &skipped {
        eprintln!(
            "skipped a={} s={} d={}: {}",
            skip.a, skip.s, skip.d, skip.reason
        );
    }

    let content = match format {
        Format::Csv => {
            let mut text = String::with_capacity(64 * (rows.len() + 1));
            text.push_str(SWEEP_HEADER);
            text.push('\n');
            for row in &rows {
                text.push_str(&sweep_csv_row(row));
                text.push('\n');
            }
            text
        }
        Format::Json => to_json_pretty(&SweepJson {
            rows: rows.iter().map(SweepJsonRow::from).collect(),
            skipped,
        }),
    };
    emit(merged.out.as_deref(), &content)?;

    if let (Some(script), Some(out)) = (&merged.plot_script, &merged.out) {
        let path = plot_script_path(script, out);
        std::fs::write(&path, plot_script(out, spec.a_steps, spec.s_steps))
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))?;
        eprintln!("plot script written to {}", path.display());
    }

    if merged.strict.unwrap_or(false) {
        let unconverged = rows.iter().filter(|r| !r.converged).count();
        if unconverged > 0 {
            return Err(CliError {
                code: exit::NON_CONVERGED,
                message: format!("{unconverged} grid point(s) did not converge (--strict)"),
            });
        }
    }
    Ok(())
}

fn run_in_pool<T: Send>(
    threads: Option<usize>,
    work: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    match threads {
        None => work(),
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::usage(format!("cannot build thread pool: {e}")))?
            .install(work),
    }
}

#[derive(Serialize)]
struct EstimateJson {
    method: &'static str,
    rate_bits: f64,
    capacity_bits: f64,
    converged: bool,
    diagnostic: Diagnostic,
}

impl From<&PointRow> for EstimateJson {
    fn from(r: &PointRow) -> Self {
        Self {
            method: r.method,
            rate_bits: r.rate_bits,
            capacity_bits: r.capacity_bits,
            converged: r.converged,
            diagnostic: r.diagnostic,
        }
    }
}

#[derive(Serialize)]
struct CompareJson {
    a: f64,
    d: f64,
    s: f64,
    fixed_point: EstimateJson,
    block: EstimateJson,
    monte_carlo: EstimateJson,
    verdict: &'static str,
}

/// Slack allowed around the block bracket before the fixed point is
/// declared inconsistent; matches the cross-method agreement property.
const SANDWICH_SLACK: f64 = 1e-3;

/// `compare`: fixed point, block bounds, and Monte Carlo side by side;
/// exit 4 when the fixed point falls outside the (slackened) bracket.
pub fn run_compare(args: &PointArgs) -> Result<(), CliError> {
    let merged = merge_point_args(args)?;
    let format = resolve_format(&merged, Format::Json)?;
    let (channel, descriptor) = resolve_params(&merged)?.resolve()?;

    let n = merged.n.unwrap_or(16);
    if n > HARD_MAX_BLOCK {
        return Err(CliError::invalid(format!(
            "block length {n} exceeds the resource cap {HARD_MAX_BLOCK} (2^{n} words)"
        )));
    }
    if n > DEFAULT_MAX_BLOCK {
        eprintln!("warning: block length {n} enumerates 2^{n} words; this may take a while");
    }

    let fp_method = resolve_method(&Settings {
        method: Some("blackwell".to_string()),
        ..merged.clone()
    })?;
    let mc_method = resolve_method(&Settings {
        method: Some("mc".to_string()),
        ..merged.clone()
    })?;

    let fp = evaluate(&channel, descriptor, &fp_method)?;
    let block = evaluate(&channel, descriptor, &Method::Block { n })?;
    let mc = evaluate(&channel, descriptor, &mc_method)?;

    let (lower, upper) = match block.diagnostic {
        Diagnostic::Block { lower, upper, .. } => (lower, upper),
        _ => unreachable!("block evaluation carries block diagnostics"),
    };
    let inside = fp.rate_bits >= lower - SANDWICH_SLACK && fp.rate_bits <= upper + SANDWICH_SLACK;
    let verdict = if inside { "inside" } else { "outside" };

    let content = match format {
        Format::Csv => {
            let mut text = format!("{POINT_HEADER},verdict\n");
            for row in [&fp, &block, &mc] {
                text.push_str(&point_csv_row(row));
                text.push(',');
                text.push_str(verdict);
                text.push('\n');
            }
            text
        }
        Format::Json => to_json_pretty(&CompareJson {
            a: descriptor.a,
            d: descriptor.d,
            s: descriptor.s,
            fixed_point: EstimateJson::from(&fp),
            block: EstimateJson::from(&block),
            monte_carlo: EstimateJson::from(&mc),
            verdict,
        }),
    };
    emit(merged.out.as_deref(), &content)?;

    if !inside {
        return Err(CliError {
            code: exit::INCONSISTENT,
            message: format!(
                "fixed-point rate {} outside block bracket [{lower}, {upper}] (slack {SANDWICH_SLACK})",
                fp.rate_bits
            ),
        });
    }
    if merged.strict.unwrap_or(false) && !fp.converged {
        return Err(CliError {
            code: exit::NON_CONVERGED,
            message: "fixed-point estimate did not converge (--strict)".to_string(),
        });
    }
    Ok(())
}

/// Shared dispatcher for `entropy-rate` and `capacity`; both emit the
/// same row (rate and capacity are always reported together).
pub fn run(command: &crate::args::Command) -> Result<(), CliError> {
    match command {
        crate::args::Command::Validate(args) => run_validate(args),
        crate::args::Command::EntropyRate(args) | crate::args::Command::Capacity(args) => {
            run_point(args)
        }
        crate::args::Command::Sweep(args) => run_sweep(args),
        crate::args::Command::Compare(args) => run_compare(args),
    }
}
