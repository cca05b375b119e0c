use std::fs;
use std::path::Path;

use qspa::channels::{depolarizing_map, transpose_map, ChoiMatrix};
use qspa::{ComplexMatrix, DensityMatrix, HermitianMap, Tolerances};
use serde_json::Value;

use crate::args::MapArgs;
use crate::report::{usage, CliResult};

fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: invalid JSON: {e}", path.display())))
}

/// Accepts either a bare object or a report whose `result` holds it.
fn unwrap_report(v: Value) -> Value {
    match v {
        Value::Object(mut obj) if obj.contains_key("result") && obj.contains_key("tool") => {
            obj.remove("result").unwrap_or(Value::Null)
        }
        other => other,
    }
}

fn parse_matrix(v: Value, path: &Path) -> CliResult<ComplexMatrix> {
    serde_json::from_value(v).map_err(|e| usage(format!("{}: {e}", path.display())))
}

pub fn load_state(path: &Path, tol: &Tolerances) -> CliResult<DensityMatrix> {
    let v = unwrap_report(read_json(path)?);
    match v.get("kind").and_then(Value::as_str) {
        Some("density") => {}
        other => return Err(usage(format!("{}: expected kind \"density\", got {other:?}", path.display()))),
    }
    Ok(DensityMatrix::validate_with(parse_matrix(v, path)?, tol)?)
}

pub fn load_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    parse_matrix(unwrap_report(read_json(path)?), path)
}

pub fn load_map(args: &MapArgs, tol: &Tolerances) -> CliResult<HermitianMap> {
    let need_d = |name: &str| args.d.ok_or_else(|| usage(format!("{name} needs --d")));
    match args.map.as_str() {
        "builtin:transpose" => {
            let d = need_d("builtin:transpose")?;
            if d == 0 {
                return Err(usage("--d must be positive"));
            }
            Ok(transpose_map(d))
        }
        "builtin:depolarize" => {
            let d = need_d("builtin:depolarize")?;
            let d_out = args.d_out.unwrap_or(d);
            if d == 0 || d_out == 0 {
                return Err(usage("dimensions must be positive"));
            }
            Ok(depolarizing_map(d, d_out))
        }
        other if other.starts_with("builtin:") => Err(usage(format!(
            "unknown builtin map {other:?}; available: builtin:transpose, builtin:depolarize"
        ))),
        file => {
            let path = Path::new(file);
            let map: HermitianMap = serde_json::from_value(unwrap_report(read_json(path)?))
                .map_err(|e| usage(format!("{file}: {e}")))?;
            let map = match map {
                // re-check against the resolved tolerances
                HermitianMap::Choi(c) => {
                    HermitianMap::Choi(ChoiMatrix::new_with(c.d_in(), c.d_out(), c.matrix().clone(), tol)?)
                }
                kraus => kraus,
            };
            if let Some(d) = args.d {
                if d != map.d_in() {
                    return Err(usage(format!("--d {d} does not match the map's input dimension {}", map.d_in())));
                }
            }
            Ok(map)
        }
    }
}
