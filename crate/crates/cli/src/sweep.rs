//! Parameter sweeps: re-run one scenario over an inclusive arithmetic grid
//! of a single parameter and tabulate the quantitative summary entries,
//! one row per grid point.

use crate::config::Config;
use crate::error::CliError;
use crate::report::{SweepCell, SweepTable};
use crate::scenario::{run_scenario, SummaryValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepParam {
    Omega,
    DNorm,
    H,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            SweepParam::Omega => "omega",
            SweepParam::DNorm => "d_norm",
            SweepParam::H => "h",
        }
    }
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub param: SweepParam,
    pub values: Vec<f64>,
}

/// Parses `name=start:stop:step` with an inclusive endpoint (up to a
/// relative slack of 1e-9 step against accumulated rounding).
pub fn parse_spec(text: &str) -> Result<SweepSpec, CliError> {
    let grammar = "--param expects name=start:stop:step";
    let (name, range) = text
        .split_once('=')
        .ok_or_else(|| CliError::config(format!("{grammar}; got '{text}'")))?;
    let param = match name {
        "omega" => SweepParam::Omega,
        "d_norm" => SweepParam::DNorm,
        "h" => SweepParam::H,
        other => {
            return Err(CliError::config(format!(
                "--param: cannot sweep '{other}' (omega, d_norm and h are sweepable)"
            )));
        }
    };
    let parts: Vec<&str> = range.split(':').collect();
    let [start, stop, step] = parts.as_slice() else {
        return Err(CliError::config(format!("{grammar}; got '{text}'")));
    };
    let mut bounds = [0.0f64; 3];
    for (slot, token) in bounds.iter_mut().zip([start, stop, step]) {
        *slot = token.parse().map_err(|_| {
            CliError::config(format!("--param {name}: invalid number '{token}'"))
        })?;
    }
    let [start, stop, step] = bounds;
    if !(start.is_finite() && stop.is_finite() && step.is_finite() && step > 0.0) {
        return Err(CliError::config(format!(
            "--param {name}: need finite bounds and step > 0, got {start}:{stop}:{step}"
        )));
    }
    if stop < start {
        return Err(CliError::config(format!(
            "--param {name}: stop {stop} is below start {start}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    let values = (0..count).map(|i| start + step * i as f64).collect();
    Ok(SweepSpec { param, values })
}

fn apply(base: &Config, param: SweepParam, value: f64) -> Config {
    let mut config = base.clone();
    match param {
        SweepParam::Omega => config.omega = value,
        SweepParam::DNorm => config.d_norm = value,
        SweepParam::H => config.h = Some(value),
    }
    config
}

/// Validates every grid point, then runs them all. The table keeps the
/// summary keys that are quantitative (floats, integers, booleans as 0/1)
/// and present at every grid point, in the order of the first run.
pub fn run_sweep(base: &Config, spec: &SweepSpec) -> Result<SweepTable, CliError> {
    let configs: Vec<Config> = spec
        .values
        .iter()
        .map(|&value| {
            let patched = apply(base, spec.param, value);
            patched.validate().map_err(|e| {
                CliError::config(format!("{} = {value}: {e}", spec.param.name()))
            })?;
            Ok(patched)
        })
        .collect::<Result<_, CliError>>()?;

    let mut collected: Vec<Vec<(String, SweepCell)>> = Vec::with_capacity(configs.len());
    let mut scenario = "";
    for config in &configs {
        let report = run_scenario(config)?;
        scenario = report.scenario;
        let cells = report
            .summary
            .into_iter()
            .filter_map(|(key, value)| {
                let cell = match value {
                    SummaryValue::Float(x) => SweepCell::Float(x),
                    SummaryValue::Int(n) => SweepCell::Int(n),
                    SummaryValue::Bool(b) => SweepCell::Int(b as i64),
                    SummaryValue::Text(_) => return None,
                };
                Some((key, cell))
            })
            .collect();
        collected.push(cells);
    }

    let first = collected.first().expect("at least one grid point");
    let mut columns = vec![spec.param.name().to_owned()];
    columns.extend(
        first
            .iter()
            .filter(|(key, _)| {
                collected[1..]
                    .iter()
                    .all(|row| row.iter().any(|(k, _)| k == key))
            })
            .map(|(key, _)| key.clone()),
    );

    let rows = spec
        .values
        .iter()
        .zip(&collected)
        .map(|(&value, cells)| {
            let mut row = Vec::with_capacity(columns.len());
            row.push(SweepCell::Float(value));
            for key in &columns[1..] {
                let (_, cell) = cells
                    .iter()
                    .find(|(k, _)| k == key)
                    .expect("column keys are present in every row");
                row.push(*cell);
            }
            row
        })
        .collect();

    Ok(SweepTable {
        scenario,
        param: spec.param.name().to_owned(),
        columns,
        rows,
    })
}
