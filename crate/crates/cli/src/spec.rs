//! γ specification files.
//!
//! ```json
//! { "n": 1, "preset": "ellipse", "params": { "axes": [2.0, 1.0] } }
//! { "n": 1, "samples": [[1, 0, 1.0], [0, 1, 2.0], ...], "interp": "linear" }
//! ```

use serde_json::{Map, Value};
use wulffkit::{Error as CoreError, GammaField, Preset, Tolerance, Vector};

use crate::CliError;

pub fn parse_spec(text: &str, tol: &Tolerance) -> Result<GammaField, CliError> {
    let root: Value = serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
    let obj = root
        .as_object()
        .ok_or_else(|| CliError::Parse("top level: expected an object".into()))?;
    for key in obj.keys() {
        if !["n", "preset", "params", "samples", "interp"].contains(&key.as_str()) {
            return Err(CliError::Parse(format!("{key}: unknown field")));
        }
    }
    let n = match obj.get("n").and_then(Value::as_u64) {
        Some(n @ (1 | 2)) => n as usize,
        Some(n) => return Err(CliError::Parse(format!("n: expected 1 or 2, got {n}"))),
        None => return Err(CliError::Parse("n: expected 1 or 2".into())),
    };
    let built = match (obj.get("preset"), obj.get("samples")) {
        (Some(_), Some(_)) => {
            return Err(CliError::Parse(
                "preset and samples are mutually exclusive".into(),
            ))
        }
        (Some(name), None) => {
            let name = name
                .as_str()
                .ok_or_else(|| CliError::Parse("preset: expected a string".into()))?;
            let empty = Map::new();
            let params = match obj.get("params") {
                None => &empty,
                Some(Value::Object(m)) => m,
                Some(_) => return Err(CliError::Parse("params: expected an object".into())),
            };
            GammaField::preset(n, preset(name, n, params)?, tol.abs_tol)
        }
        (None, Some(rows)) => {
            match obj.get("interp").map(|v| v.as_str()) {
                None | Some(Some("linear")) => {}
                _ => {
                    return Err(CliError::Parse(
                        "interp: only \"linear\" is supported".into(),
                    ))
                }
            }
            let (dirs, values) = samples(rows, n)?;
            GammaField::sampled(n, &dirs, &values, tol.hull_tol, tol.abs_tol)
        }
        (None, None) => return Err(CliError::Parse("expected a preset or samples".into())),
    };
    built.map_err(|e| match e {
        CoreError::InvalidGamma(msg) => CliError::Parse(msg),
        other => CliError::Numeric(other),
    })
}

fn preset(name: &str, n: usize, params: &Map<String, Value>) -> Result<Preset, CliError> {
    let allowed: &[&str] = match name {
        "constant" => &["r"],
        "ellipse" | "ellipsoid" => &["axes"],
        "cube" | "cube_support" => &["weights"],
        "lens" => &["offset"],
        "trig_poly" => &["coeffs"],
        "polytope_support" => &["vertices"],
        _ => return Err(CliError::Parse(format!("preset: unknown preset {name:?}"))),
    };
    if let Some(k) = params.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(CliError::Parse(format!(
            "params.{k}: not a parameter of {name}"
        )));
    }
    let ones = || Value::from(vec![1.0; n + 1]);
    Ok(match name {
        "constant" => Preset::Constant {
            r: number(params.get("r").unwrap_or(&Value::from(1.0)), "params.r")?,
        },
        "ellipse" | "ellipsoid" => Preset::Ellipsoid {
            axes: numbers(required(params, "axes")?, "params.axes")?,
        },
        "cube" | "cube_support" => Preset::CubeSupport {
            weights: numbers(params.get("weights").unwrap_or(&ones()), "params.weights")?,
        },
        "lens" => Preset::Lens {
            offset: number(
                params.get("offset").unwrap_or(&Value::from(0.5)),
                "params.offset",
            )?,
        },
        "trig_poly" => Preset::TrigPoly {
            coeffs: numbers(required(params, "coeffs")?, "params.coeffs")?,
        },
        _ => {
            let rows = required(params, "vertices")?
                .as_array()
                .ok_or_else(|| CliError::Parse("params.vertices: expected an array".into()))?;
            let vertices = rows
                .iter()
                .enumerate()
                .map(|(i, r)| {
                    let c = numbers(r, &format!("params.vertices[{i}]"))?;
                    if c.len() != n + 1 {
                        return Err(CliError::Parse(format!(
                            "params.vertices[{i}]: expected {} coordinates",
                            n + 1
                        )));
                    }
                    Ok(Vector::new(&c))
                })
                .collect::<Result<_, _>>()?;
            Preset::PolytopeSupport { vertices }
        }
    })
}

fn samples(rows: &Value, n: usize) -> Result<(Vec<Vector>, Vec<f64>), CliError> {
    let rows = rows
        .as_array()
        .ok_or_else(|| CliError::Parse("samples: expected an array of rows".into()))?;
    let mut dirs = Vec::with_capacity(rows.len());
    let mut values = Vec::with_capacity(rows.len());
    for (i, r) in rows.iter().enumerate() {
        let field = format!("samples[{i}]");
        let c = numbers(r, &field)?;
        if c.len() != n + 2 {
            return Err(CliError::Parse(format!(
                "{field}: expected {} direction components and a value",
                n + 1
            )));
        }
        if !(c[n + 1] > 0.0) {
            return Err(CliError::Parse(format!(
                "{field}: value must be positive, got {}",
                c[n + 1]
            )));
        }
        dirs.push(Vector::new(&c[..=n]));
        values.push(c[n + 1]);
    }
    Ok((dirs, values))
}

fn required<'a>(params: &'a Map<String, Value>, key: &str) -> Result<&'a Value, CliError> {
    params
        .get(key)
        .ok_or_else(|| CliError::Parse(format!("params.{key}: missing")))
}

fn number(v: &Value, field: &str) -> Result<f64, CliError> {
    v.as_f64()
        .ok_or_else(|| CliError::Parse(format!("{field}: expected a number")))
}

fn numbers(v: &Value, field: &str) -> Result<Vec<f64>, CliError> {
    v.as_array()
        .ok_or_else(|| CliError::Parse(format!("{field}: expected an array of numbers")))?
        .iter()
        .enumerate()
        .map(|(i, x)| number(x, &format!("{field}[{i}]")))
        .collect()
}
