//! Lossless CSV and JSON storage for experiment records.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::ExperimentRecord;

pub const SCHEMA_VERSION: u32 = 1;

/// Column order of the CSV format. One column per [`ExperimentRecord`] field.
pub const CSV_HEADER: &str = "experiment,point_index,seed,n,d,k,p,p_eff,alpha,r,m,avoid_size,\
trials,sat_count,unsat_count,budget_exhausted_count,counted_trials,total_solutions,\
total_solutions_sq,unique_solution_count,self_unsat_checked,self_unsat_formula_count,\
class_count,flip_s2u_attempts,flip_s2u_success,flip_u2s_attempts,flip_u2s_success,\
witness_repaired,class_exit_count,swap_failures,no_self_unsat_count,flip_budget_exhausted,\
invariance_checks,invariance_passes,u_in_avoid_count,total_nodes,wall_time_ms,\
expected_solutions,alpha_gt_1,alpha_gt_omega_bound,alpha_gt_degree_bound,\
alpha_gt_self_unsat_bound,k_condition,omega_negative";

#[derive(Debug, Error)]
pub enum PersistError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonFile {
    schema_version: u32,
    records: Vec<ExperimentRecord>,
}

pub fn to_csv_string(records: &[ExperimentRecord]) -> Result<String, PersistError> {
    let mut out = Vec::new();
    out.extend_from_slice(CSV_HEADER.as_bytes());
    out.push(b'\n');
    {
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(&mut out);
        for r in records {
            w.serialize(r)
                .map_err(|e| PersistError::Parse(e.to_string()))?;
        }
        w.flush()?;
    }
    String::from_utf8(out).map_err(|e| PersistError::Parse(e.to_string()))
}

pub fn from_csv_str(text: &str) -> Result<Vec<ExperimentRecord>, PersistError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let header = reader
        .headers()
        .map_err(|e| PersistError::Parse(e.to_string()))?
        .iter()
        .collect::<Vec<_>>()
        .join(",");
    if header != CSV_HEADER {
        return Err(PersistError::Schema(format!(
            "unexpected CSV header `{header}`"
        )));
    }
    reader
        .deserialize()
        .map(|r| r.map_err(|e| PersistError::Parse(e.to_string())))
        .collect()
}

pub fn to_json_string(records: &[ExperimentRecord]) -> Result<String, PersistError> {
    let file = JsonFile {
        schema_version: SCHEMA_VERSION,
        records: records.to_vec(),
    };
    serde_json::to_string_pretty(&file).map_err(|e| PersistError::Parse(e.to_string()))
}

pub fn from_json_str(text: &str) -> Result<Vec<ExperimentRecord>, PersistError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| PersistError::Parse(e.to_string()))?;
    match value.get("schema_version").and_then(|v| v.as_u64()) {
        Some(v) if v == u64::from(SCHEMA_VERSION) => {}
        Some(v) => {
            return Err(PersistError::Schema(format!(
                "schema version {v}, expected {SCHEMA_VERSION}"
            )))
        }
        None => return Err(PersistError::Schema("missing schema_version".into())),
    }
    let file: JsonFile =
        serde_json::from_value(value).map_err(|e| PersistError::Parse(e.to_string()))?;
    Ok(file.records)
}

pub fn persist(
    records: &[ExperimentRecord],
    path: &Path,
    format: Format,
) -> Result<(), PersistError> {
    let text = match format {
        Format::Csv => to_csv_string(records)?,
        Format::Json => to_json_string(records)?,
    };
    std::fs::write(path, text)?;
    Ok(())
}

/// Reads either format; JSON files start with `{`.
pub fn load(path: &Path) -> Result<Vec<ExperimentRecord>, PersistError> {
    let text = std::fs::read_to_string(path)?;
    if text.trim_start().starts_with('{') {
        from_json_str(&text)
    } else {
        from_csv_str(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{Experiment, ExperimentRecord};
    use crate::params::{derive_params_with_domain, Density};

    fn sample(i: usize) -> ExperimentRecord {
        let params =
            derive_params_with_domain(8 + i % 5, 8, 0.5, 2, i as u64, Density::Threshold).unwrap();
        let mut r = ExperimentRecord::new(Experiment::Flip, i, 17, &params);
        r.trials = 100 + i as u64;
        r.sat_count = 40;
        r.unsat_count = 60 + i as u64;
        r.total_solutions_sq = u64::MAX - i as u64;
        r.r = 1.0 / (3.0 + i as f64);
        r
    }

    #[test]
    fn csv_header_matches_field_order() {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(sample(0)).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let records: Vec<_> = (0..50).map(sample).collect();
        let text = to_csv_string(&records).unwrap();
        assert_eq!(from_csv_str(&text).unwrap(), records);
        assert_eq!(to_csv_string(&from_csv_str(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let records: Vec<_> = (0..50).map(sample).collect();
        let text = to_json_string(&records).unwrap();
        assert_eq!(from_json_str(&text).unwrap(), records);
    }

    #[test]
    fn empty_csv_has_header() {
        assert_eq!(to_csv_string(&[]).unwrap(), format!("{CSV_HEADER}\n"));
        assert!(from_csv_str(&to_csv_string(&[]).unwrap())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn error_kinds_are_distinct() {
        assert!(matches!(
            from_csv_str("a,b\n1,2\n"),
            Err(PersistError::Schema(_))
        ));
        let mut text = to_csv_string(&[sample(0)]).unwrap();
        text.push_str("flip,oops\n");
        assert!(matches!(from_csv_str(&text), Err(PersistError::Parse(_))));
        assert!(matches!(
            from_json_str(r#"{"schema_version":2,"records":[]}"#),
            Err(PersistError::Schema(_))
        ));
        assert!(matches!(
            from_json_str(r#"{"records":[]}"#),
            Err(PersistError::Schema(_))
        ));
        assert!(matches!(from_json_str("{"), Err(PersistError::Parse(_))));
        let missing = std::path::Path::new("/nonexistent/dir/records.csv");
        assert!(matches!(load(missing), Err(PersistError::Io(_))));
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let records: Vec<_> = (0..5).map(sample).collect();
        for (format, name) in [(Format::Csv, "r.csv"), (Format::Json, "r.json")] {
            let path = dir.path().join(name);
            persist(&records, &path, format).unwrap();
            assert_eq!(load(&path).unwrap(), records);
        }
    }

    #[test]
    fn ten_thousand_records_round_trip_quickly() {
        let records: Vec<_> = (0..10_000).map(sample).collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("big.csv");
        let start = std::time::Instant::now();
        persist(&records, &path, Format::Csv).unwrap();
        let back = load(&path).unwrap();
        let elapsed = start.elapsed();
        assert_eq!(back, records);
        assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
    }
}
