//! JSON file formats and the canonical writer.
//!
//! Matrices are objects `{"rows": r, "cols": c, "data": [[re, im], …]}` with
//! the entries listed row by row. An instance file carries a `"kind"`
//! discriminator:
//!
//! ```json
//! {"kind": "lifting", "A": M, "T_prime": M, "R": M, "Q": M}
//! {"kind": "nehari", "N": 2, "u_dim": 1, "y_dim": 1, "taps": [M, …]}
//! ```
//!
//! Nehari taps are listed as `F₋₁, F₋₂, …`. Parameter files carry a `"type"`
//! discriminator (`zero`, `constant`, `transfer`, `random`), and solution
//! files hold `{"kind", "H", "tail_bound", "sigma_max", "report"}` where `H`
//! lists the Taylor coefficients of the solution (`Γ` for lifting
//! instances). Output is canonical: keys sorted, two-space indentation, and
//! every float printed with 17 significant digits.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::hardy::{SystemRealization, TaylorSeries};
use crate::lifting::LiftingDataSet;
use crate::matrix::{c, CMatrix};
use crate::nehari::NehariProblem;
use crate::schur::{random_schur, SchurParameter};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("malformed JSON in {path}: {source}")]
    Parse { path: String, source: serde_json::Error },
    #[error("schema error: {0}")]
    Schema(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        let mut data = Vec::with_capacity(m.len());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                data.push([m[(i, j)].re, m[(i, j)].im]);
            }
        }
        Self { rows: m.nrows(), cols: m.ncols(), data }
    }

    pub fn to_matrix(&self) -> Result<CMatrix, IoError> {
        if self.data.len() != self.rows * self.cols {
            return Err(IoError::Schema(format!(
                "matrix declares {}x{} but lists {} entries",
                self.rows,
                self.cols,
                self.data.len()
            )));
        }
        if self.data.iter().flatten().any(|x| !x.is_finite()) {
            return Err(IoError::Schema("matrix has non-finite entries".into()));
        }
        Ok(CMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [re, im] = self.data[i * self.cols + j];
            c(re, im)
        }))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum InstanceFile {
    Lifting {
        #[serde(rename = "A")]
        a: MatrixJson,
        #[serde(rename = "T_prime")]
        t_prime: MatrixJson,
        #[serde(rename = "R")]
        r: MatrixJson,
        #[serde(rename = "Q")]
        q: MatrixJson,
    },
    Nehari {
        #[serde(rename = "N")]
        n_window: usize,
        u_dim: usize,
        y_dim: usize,
        taps: Vec<MatrixJson>,
    },
}

/// A parsed instance of either kind.
#[derive(Debug, Clone)]
pub enum Instance {
    Lifting(LiftingDataSet),
    Nehari(NehariProblem),
}

impl Instance {
    pub fn kind(&self) -> &'static str {
        match self {
            Instance::Lifting(_) => "lifting",
            Instance::Nehari(_) => "nehari",
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        match self {
            Instance::Lifting(ds) => InstanceFile::Lifting {
                a: MatrixJson::from_matrix(&ds.a),
                t_prime: MatrixJson::from_matrix(&ds.t_prime),
                r: MatrixJson::from_matrix(&ds.r),
                q: MatrixJson::from_matrix(&ds.q),
            },
            Instance::Nehari(p) => InstanceFile::Nehari {
                n_window: p.n_window,
                u_dim: p.u_dim,
                y_dim: p.y_dim,
                taps: p.taps.iter().map(MatrixJson::from_matrix).collect(),
            },
        }
    }
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance, IoError> {
        match self {
            InstanceFile::Lifting { a, t_prime, r, q } => {
                let ds = LiftingDataSet::new(a.to_matrix()?, t_prime.to_matrix()?, r.to_matrix()?, q.to_matrix()?)
                    .map_err(|e| IoError::Schema(e.to_string()))?;
                Ok(Instance::Lifting(ds))
            }
            InstanceFile::Nehari { n_window, u_dim, y_dim, taps } => {
                let taps = taps.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
                let p = NehariProblem::new(n_window, u_dim, y_dim, taps).map_err(|e| IoError::Schema(e.to_string()))?;
                Ok(Instance::Nehari(p))
            }
        }
    }
}

/// Schur parameter as stored on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ParameterFile {
    Zero,
    Constant {
        d: MatrixJson,
    },
    Transfer {
        a: MatrixJson,
        b: MatrixJson,
        c: MatrixJson,
        d: MatrixJson,
    },
    /// A random certified transfer function of the given state dimension;
    /// input and output dimensions follow the instance.
    Random {
        state_dim: usize,
        seed: u64,
    },
}

impl ParameterFile {
    /// The parameter for an instance whose free parameter maps
    /// `in_dim → out_dim`.
    pub fn resolve(&self, in_dim: usize, out_dim: usize) -> Result<SchurParameter, IoError> {
        let schema = |e: crate::Error| IoError::Schema(e.to_string());
        let v = match self {
            ParameterFile::Zero => SchurParameter::zero(in_dim, out_dim),
            ParameterFile::Constant { d } => SchurParameter::constant(d.to_matrix()?).map_err(schema)?,
            ParameterFile::Transfer { a, b, c, d } => {
                let sys = SystemRealization::new(a.to_matrix()?, b.to_matrix()?, c.to_matrix()?, d.to_matrix()?)
                    .map_err(schema)?;
                SchurParameter::transfer(sys).map_err(schema)?
            }
            ParameterFile::Random { state_dim, seed } => random_schur(in_dim, out_dim, *state_dim, *seed),
        };
        v.check_dims(in_dim, out_dim).map_err(schema)?;
        Ok(v)
    }

    pub fn from_parameter(v: &SchurParameter) -> Self {
        match v {
            SchurParameter::Zero { .. } => ParameterFile::Zero,
            SchurParameter::Constant(m) => ParameterFile::Constant { d: MatrixJson::from_matrix(m) },
            SchurParameter::Transfer(s) => ParameterFile::Transfer {
                a: MatrixJson::from_matrix(&s.a),
                b: MatrixJson::from_matrix(&s.b),
                c: MatrixJson::from_matrix(&s.c),
                d: MatrixJson::from_matrix(&s.d),
            },
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionFile {
    pub kind: String,
    #[serde(rename = "H")]
    pub h: Vec<MatrixJson>,
    pub tail_bound: Option<f64>,
    pub sigma_max: f64,
    pub report: Value,
}

impl SolutionFile {
    pub fn series(&self) -> Result<TaylorSeries, IoError> {
        let coeffs = self.h.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>, _>>()?;
        let first = coeffs.first().ok_or_else(|| IoError::Schema("solution has no coefficients".into()))?;
        let (rows, cols) = first.shape();
        if coeffs.iter().any(|m| m.shape() != (rows, cols)) {
            return Err(IoError::Schema("solution coefficients differ in shape".into()));
        }
        if self.tail_bound.is_some_and(|t| !(t.is_finite() && t >= 0.0)) {
            return Err(IoError::Schema("tail_bound must be a nonnegative number".into()));
        }
        Ok(TaylorSeries::new(rows, cols, coeffs, self.tail_bound))
    }
}

pub fn read_text(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::Read { path: path.display().to_string(), source })
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path, text: &str) -> Result<T, IoError> {
    serde_json::from_str(text).map_err(|source| {
        if source.is_data() {
            IoError::Schema(format!("{}: {source}", path.display()))
        } else {
            IoError::Parse { path: path.display().to_string(), source }
        }
    })
}

pub fn read_instance(path: &Path) -> Result<Instance, IoError> {
    parse::<InstanceFile>(path, &read_text(path)?)?.into_instance()
}

pub fn read_parameter(path: &Path) -> Result<ParameterFile, IoError> {
    parse(path, &read_text(path)?)
}

pub fn read_solution(path: &Path) -> Result<SolutionFile, IoError> {
    parse(path, &read_text(path)?)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::Write { path: path.display().to_string(), source })
}

/// Canonical text of any serializable value.
pub fn to_canonical<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("report types serialize to JSON");
    canonical_json(&v)
}

/// Keys sorted, two-space indent, floats as `{:.16e}`, trailing newline.
pub fn canonical_json(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v, 0);
    out.push('\n');
    out
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                write!(out, "{i}").unwrap();
            } else if let Some(u) = n.as_u64() {
                write!(out, "{u}").unwrap();
            } else {
                write!(out, "{}", format_float(n.as_f64().unwrap_or(f64::NAN))).unwrap();
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string serializes")),
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            if items.iter().all(|x| !x.is_array() && !x.is_object()) {
                out.push('[');
                for (k, x) in items.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, depth + 1);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (k, x) in items.iter().enumerate() {
                indent(out, depth + 1);
                write_value(out, x, depth + 1);
                if k + 1 < items.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push(']');
        }
        Value::Object(map) => {
            if map.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (k, key) in keys.iter().enumerate() {
                indent(out, depth + 1);
                out.push_str(&serde_json::to_string(key).expect("key serializes"));
                out.push_str(": ");
                write_value(out, &map[*key], depth + 1);
                if k + 1 < keys.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            indent(out, depth);
            out.push('}');
        }
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

/// 17 significant digits in scientific notation; JSON has no NaN or
/// infinity, so those become `null`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        "null".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{identity, real};

    #[test]
    fn matrix_round_trip() {
        let m = CMatrix::from_row_slice(2, 3, &[c(1.0, -2.0), real(0.5), c(0.0, 3.0), real(-1.0), real(0.0), c(1e-300, 7.0)]);
        let j = MatrixJson::from_matrix(&m);
        assert_eq!(j.data[1], [0.5, 0.0]);
        assert_eq!(j.to_matrix().unwrap(), m);
    }

    #[test]
    fn malformed_matrix_is_schema_error() {
        let j = MatrixJson { rows: 2, cols: 2, data: vec![[0.0, 0.0]] };
        assert!(matches!(j.to_matrix(), Err(IoError::Schema(_))));
    }

    #[test]
    fn canonical_output_is_sorted_and_fixed_width() {
        let v: Value = serde_json::json!({"b": 0.1, "a": [1, 2], "c": {"z": true, "y": null}});
        let s = canonical_json(&v);
        assert_eq!(
            s,
            "{\n  \"a\": [1, 2],\n  \"b\": 1.0000000000000001e-1,\n  \"c\": {\n    \"y\": null,\n    \"z\": true\n  }\n}\n"
        );
        let back: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(back["b"].as_f64().unwrap(), 0.1);
    }

    #[test]
    fn floats_round_trip_exactly() {
        for x in [0.1, 1.0 / 3.0, -2.5e-310, 6.02214076e23, f64::MIN_POSITIVE] {
            assert_eq!(format_float(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn instance_round_trip() {
        let ds = LiftingDataSet::new(identity(1) * real(0.5), identity(1), identity(1), identity(1)).unwrap();
        let text = to_canonical(&Instance::Lifting(ds.clone()).to_file());
        let back: InstanceFile = serde_json::from_str(&text).unwrap();
        match back.into_instance().unwrap() {
            Instance::Lifting(d) => assert_eq!(d, ds),
            _ => panic!("wrong kind"),
        }
    }

    #[test]
    fn unknown_kind_is_rejected() {
        let r: Result<InstanceFile, _> = serde_json::from_str(r#"{"kind":"other"}"#);
        assert!(r.is_err());
    }
}
