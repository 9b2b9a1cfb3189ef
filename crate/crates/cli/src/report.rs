//! Report serialization. CSV carries the primary sample table under the
//! frozen header below; JSON carries the whole report — config echo,
//! summary, and every table. All computed floats are printed with 17
//! significant digits ({:.16e}) so round-tripping them loses nothing, and
//! files are written atomically (temp file, then rename) so a crashed run
//! never leaves a truncated report behind.

use std::fmt::Write as _;
use std::fs;

use crate::config::{Config, OutputFormat};
use crate::error::CliError;
use crate::scenario::{reduced_angle, Report, SummaryValue, Table};

/// Column layout of every sample table, in CSV order.
pub const TABLE_COLUMNS: [&str; 8] = [
    "s",
    "t_u",
    "zx",
    "zy",
    "zz",
    "residual",
    "angle_accum",
    "winding",
];

fn float_token(x: f64) -> Result<String, CliError> {
    if !x.is_finite() {
        return Err(CliError::numerical(format!(
            "non-finite value {x} in report"
        )));
    }
    Ok(format!("{x:.16e}"))
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

// ---------------------------------------------------------------------------
// scenario reports
// ---------------------------------------------------------------------------

fn csv_document(table: &Table) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(&TABLE_COLUMNS.join(","));
    out.push('\n');
    for row in &table.rows {
        let (angle, winding) = reduced_angle(row.angle_accum);
        let fields = [
            row.s, row.t_u, row.z[0], row.z[1], row.z[2], row.residual, angle,
        ];
        for (i, value) in fields.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&float_token(*value)?);
        }
        writeln!(out, ",{winding}").expect("writing to a String");
    }
    Ok(out)
}

fn summary_token(value: &SummaryValue) -> Result<String, CliError> {
    Ok(match value {
        SummaryValue::Float(x) => float_token(*x)?,
        SummaryValue::Int(n) => n.to_string(),
        SummaryValue::Bool(b) => b.to_string(),
        SummaryValue::Text(t) => json_string(t),
    })
}

fn json_table(table: &Table, indent: &str) -> Result<String, CliError> {
    let mut out = String::new();
    writeln!(out, "{indent}{{").expect("writing to a String");
    writeln!(out, "{indent}  \"name\": {},", json_string(&table.name)).unwrap();
    let columns: Vec<String> = TABLE_COLUMNS.iter().map(|c| json_string(c)).collect();
    writeln!(out, "{indent}  \"columns\": [{}],", columns.join(", ")).unwrap();
    writeln!(out, "{indent}  \"rows\": [").unwrap();
    for (i, row) in table.rows.iter().enumerate() {
        let (angle, winding) = reduced_angle(row.angle_accum);
        let fields = [
            row.s, row.t_u, row.z[0], row.z[1], row.z[2], row.residual, angle,
        ];
        let mut cells = Vec::with_capacity(8);
        for value in fields {
            cells.push(float_token(value)?);
        }
        cells.push(winding.to_string());
        let comma = if i + 1 == table.rows.len() { "" } else { "," };
        writeln!(out, "{indent}    [{}]{comma}", cells.join(", ")).unwrap();
    }
    writeln!(out, "{indent}  ]").unwrap();
    write!(out, "{indent}}}").unwrap();
    Ok(out)
}

fn json_document(report: &Report, config_echo: &serde_json::Value) -> Result<String, CliError> {
    let mut out = String::from("{\n");
    writeln!(out, "  \"scenario\": {},", json_string(report.scenario)).unwrap();
    let echo = serde_json::to_string(config_echo)
        .map_err(|e| CliError::numerical(format!("cannot echo config: {e}")))?;
    writeln!(out, "  \"config\": {echo},").unwrap();
    writeln!(out, "  \"summary\": {{").unwrap();
    for (i, (key, value)) in report.summary.iter().enumerate() {
        let comma = if i + 1 == report.summary.len() { "" } else { "," };
        writeln!(out, "    {}: {}{comma}", json_string(key), summary_token(value)?).unwrap();
    }
    writeln!(out, "  }},").unwrap();
    writeln!(out, "  \"tables\": [").unwrap();
    for (i, table) in report.tables.iter().enumerate() {
        let comma = if i + 1 == report.tables.len() { "" } else { "," };
        writeln!(out, "{}{comma}", json_table(table, "    ")?).unwrap();
    }
    writeln!(out, "  ]").unwrap();
    out.push('}');
    out.push('\n');
    Ok(out)
}

/// Renders the report in the configured format and writes it to the
/// configured path. CSV holds the scenario's primary (first) table; JSON
/// holds everything.
pub fn write_report(
    config: &Config,
    config_echo: &serde_json::Value,
    report: &Report,
) -> Result<(), CliError> {
    let document = match config.output.format {
        OutputFormat::Csv => {
            let table = report
                .tables
                .first()
                .ok_or_else(|| CliError::numerical("report has no tables".to_owned()))?;
            csv_document(table)?
        }
        OutputFormat::Json => json_document(report, config_echo)?,
    };
    write_atomically(&config.output.path, &document)
}

// ---------------------------------------------------------------------------
// sweep reports
// ---------------------------------------------------------------------------

/// One cell of a sweep table: sweeps keep only the quantitative summary
/// entries (booleans as 0/1), so rows stay rectangular and plottable.
#[derive(Debug, Clone, Copy)]
pub enum SweepCell {
    Float(f64),
    Int(i64),
}

impl SweepCell {
    fn token(self) -> Result<String, CliError> {
        match self {
            SweepCell::Float(x) => float_token(x),
            SweepCell::Int(n) => Ok(n.to_string()),
        }
    }
}

pub struct SweepTable {
    pub scenario: &'static str,
    pub param: String,
    /// Column names: the swept parameter first, then the summary keys.
    pub columns: Vec<String>,
    pub rows: Vec<Vec<SweepCell>>,
}

fn sweep_csv(table: &SweepTable) -> Result<String, CliError> {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        for (i, cell) in row.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&cell.token()?);
        }
        out.push('\n');
    }
    Ok(out)
}

fn sweep_json(table: &SweepTable) -> Result<String, CliError> {
    let mut out = String::from("{\n");
    writeln!(out, "  \"scenario\": {},", json_string(table.scenario)).unwrap();
    writeln!(out, "  \"param\": {},", json_string(&table.param)).unwrap();
    let columns: Vec<String> = table.columns.iter().map(|c| json_string(c)).collect();
    writeln!(out, "  \"columns\": [{}],", columns.join(", ")).unwrap();
    writeln!(out, "  \"rows\": [").unwrap();
    for (i, row) in table.rows.iter().enumerate() {
        let mut cells = Vec::with_capacity(row.len());
        for cell in row {
            cells.push(cell.token()?);
        }
        let comma = if i + 1 == table.rows.len() { "" } else { "," };
        writeln!(out, "    [{}]{comma}", cells.join(", ")).unwrap();
    }
    writeln!(out, "  ]").unwrap();
    out.push('}');
    out.push('\n');
    Ok(out)
}

pub fn write_sweep(config: &Config, table: &SweepTable) -> Result<(), CliError> {
    let document = match config.output.format {
        OutputFormat::Csv => sweep_csv(table)?,
        OutputFormat::Json => sweep_json(table)?,
    };
    write_atomically(&config.output.path, &document)
}

// ---------------------------------------------------------------------------

fn write_atomically(path: &str, contents: &str) -> Result<(), CliError> {
    let temp = format!("{path}.tmp");
    fs::write(&temp, contents)
        .map_err(|e| CliError::numerical(format!("cannot write {temp}: {e}")))?;
    fs::rename(&temp, path)
        .map_err(|e| CliError::numerical(format!("cannot move {temp} into place: {e}")))
}

// ---------------------------------------------------------------------------
