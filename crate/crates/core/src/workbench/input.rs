//! Parsing of state files, state spec strings and ansatz choices.

use std::collections::BTreeMap;
use std::path::Path;

use nalgebra::{Matrix4, Vector3};
use serde_json::Value;

use crate::ansatz::{Ansatz, FiniteAnsatz, SphericalAnsatz};
use crate::epr::{theta_from_density, DensityMatrix, TwoQubitState, C64};
use crate::error::{Error, Result};
use crate::pauli::PauliVector;
use crate::states::{build, StateSpec};

/// Reads a state from a JSON file when `input` names one, otherwise parses
/// it as a spec string.
pub fn load_state(input: &str) -> Result<TwoQubitState> {
    let path = Path::new(input);
    if path.is_file() {
        let text = std::fs::read_to_string(path)?;
        parse_state_json(&text, input)
    } else if looks_like_path(input) {
        Err(Error::Io(std::io::Error::new(
            std::io::ErrorKind::NotFound,
            format!("state file {input} not found"),
        )))
    } else {
        build(&parse_state_spec(input)?)
    }
}

fn looks_like_path(s: &str) -> bool {
    s.ends_with(".json") || s.contains('/') || s.contains('\\')
}

/// `{"theta": 4×4}` or `{"rho_re": 4×4, "rho_im": 4×4}`, nothing else.
pub fn parse_state_json(text: &str, source: &str) -> Result<TwoQubitState> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("{source}:{}:{}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::parse(source, "top level must be a JSON object"))?;
    let mut keys: Vec<&str> = obj.keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    match keys.as_slice() {
        ["theta"] => {
            let theta = matrix_field(obj.get("theta"), source, "theta")?;
            TwoQubitState::from_theta(Matrix4::from_fn(|i, j| theta[i][j]))
        }
        ["rho_im", "rho_re"] => {
            let re = matrix_field(obj.get("rho_re"), source, "rho_re")?;
            let im = matrix_field(obj.get("rho_im"), source, "rho_im")?;
            let rho = DensityMatrix::from_fn(|i, j| C64::new(re[i][j], im[i][j]));
            theta_from_density(&rho)
        }
        _ => Err(Error::parse(
            source,
            format!(
                "expected exactly {{\"theta\"}} or {{\"rho_re\", \"rho_im\"}}, found keys {keys:?}"
            ),
        )),
    }
}

fn matrix_field(v: Option<&Value>, source: &str, field: &str) -> Result<[[f64; 4]; 4]> {
    let rows = v
        .and_then(Value::as_array)
        .filter(|r| r.len() == 4)
        .ok_or_else(|| Error::parse(format!("{source}: {field}"), "expected 4 rows"))?;
    let mut out = [[0.0; 4]; 4];
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .filter(|r| r.len() == 4)
            .ok_or_else(|| Error::parse(format!("{source}: {field}[{i}]"), "expected 4 numbers"))?;
        for (j, x) in row.iter().enumerate() {
            out[i][j] = x.as_f64().ok_or_else(|| {
                Error::parse(
                    format!("{source}: {field}[{i}][{j}]"),
                    format!("not a number: {x}"),
                )
            })?;
        }
    }
    Ok(out)
}

/// Splits `name:key=value,key=value` into the name and its parameters.
pub fn parse_spec_string(s: &str) -> Result<(String, BTreeMap<String, f64>)> {
    let s = s.trim();
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n.trim(), r.trim()),
        None => (s, ""),
    };
    if name.is_empty() {
        return Err(Error::parse("spec", "missing family name"));
    }
    let mut params = BTreeMap::new();
    if !rest.is_empty() {
        for (idx, part) in rest.split(',').enumerate() {
            let loc = format!("spec '{s}', parameter {}", idx + 1);
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(&loc, format!("expected key=value, got '{part}'")))?;
            let k = k.trim();
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::parse(&loc, format!("'{}' is not a number", v.trim())))?;
            if params.insert(k.to_string(), v).is_some() {
                return Err(Error::parse(&loc, format!("duplicate key '{k}'")));
            }
        }
    }
    Ok((name.to_string(), params))
}

fn take(params: &mut BTreeMap<String, f64>, key: &str, spec: &str) -> Result<f64> {
    params
        .remove(key)
        .ok_or_else(|| Error::parse(format!("spec '{spec}'"), format!("missing key '{key}'")))
}

fn take_or(params: &mut BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.remove(key).unwrap_or(default)
}

fn reject_rest(params: &BTreeMap<String, f64>, spec: &str) -> Result<()> {
    match params.keys().next() {
        Some(k) => Err(Error::parse(
            format!("spec '{spec}'"),
            format!("unknown key '{k}'"),
        )),
        None => Ok(()),
    }
}

/// `werner:p=…`, `modified_werner:p=…,q=…`, `bell`,
/// `product:ax=…,ay=…,az=…,bx=…,by=…,bz=…` (missing components are 0),
/// `random:seed=…`.
pub fn parse_state_spec(s: &str) -> Result<StateSpec> {
    let (name, mut p) = parse_spec_string(s)?;
    let spec = match name.as_str() {
        "werner" => StateSpec::Werner {
            p: take(&mut p, "p", s)?,
        },
        "modified_werner" => StateSpec::ModifiedWerner {
            p: take(&mut p, "p", s)?,
            q: take(&mut p, "q", s)?,
        },
        "bell" => StateSpec::BellPhiPlus,
        "product" => StateSpec::Product {
            a: [
                take_or(&mut p, "ax", 0.0),
                take_or(&mut p, "ay", 0.0),
                take_or(&mut p, "az", 0.0),
            ],
            b: [
                take_or(&mut p, "bx", 0.0),
                take_or(&mut p, "by", 0.0),
                take_or(&mut p, "bz", 0.0),
            ],
        },
        "random" => {
            let seed = take(&mut p, "seed", s)?;
            if !(seed >= 0.0 && seed.fract() == 0.0 && seed < 2f64.powi(64)) {
                return Err(Error::parse(
                    format!("spec '{s}'"),
                    "seed must be a nonnegative integer",
                ));
            }
            StateSpec::Random { seed: seed as u64 }
        }
        other => {
            return Err(Error::parse(
                format!("spec '{s}'"),
                format!("unknown family '{other}'"),
            ))
        }
    };
    reject_rest(&p, s)?;
    Ok(spec)
}

/// An ansatz with the label used in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedAnsatz {
    pub label: String,
    pub ansatz: Ansatz,
}

/// `uniform`, `quasi_uniform:n=…`, or a JSON file holding either a list of
/// 4-coordinate generators or `{"mixture": [{"w": …, "n": [x, y, z]}, …]}`.
pub fn load_ansatz(choice: &str) -> Result<NamedAnsatz> {
    let ansatz = match choice.trim() {
        "uniform" => Ansatz::Spherical(SphericalAnsatz::Uniform),
        c if c.starts_with("quasi_uniform") => {
            let (_, mut p) = parse_spec_string(c)?;
            let n = take(&mut p, "n", c)?;
            reject_rest(&p, c)?;
            if !(n >= 1.0 && n.fract() == 0.0) {
                return Err(Error::parse(
                    format!("ansatz '{c}'"),
                    "n must be a positive integer",
                ));
            }
            Ansatz::Spherical(SphericalAnsatz::quasi_uniform(n as usize)?)
        }
        path => {
            let text = std::fs::read_to_string(path)?;
            parse_ansatz_json(&text, path)?
        }
    };
    Ok(NamedAnsatz {
        label: choice.trim().to_string(),
        ansatz,
    })
}

pub fn parse_ansatz_json(text: &str, source: &str) -> Result<Ansatz> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            format!("{source}:{}:{}", e.line(), e.column()),
            e.to_string(),
        )
    })?;
    match &value {
        Value::Array(items) => {
            let mut gens = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let c = number_list(item, 4, &format!("{source}: generator {i}"))?;
                gens.push(PauliVector::new(c[0], c[1], c[2], c[3]));
            }
            Ok(Ansatz::Finite(FiniteAnsatz::new(gens)?))
        }
        Value::Object(obj) if obj.len() == 1 && obj.contains_key("mixture") => {
            let items = obj["mixture"]
                .as_array()
                .ok_or_else(|| Error::parse(format!("{source}: mixture"), "expected a list"))?;
            let mut weights = Vec::with_capacity(items.len());
            let mut dirs = Vec::with_capacity(items.len());
            for (i, item) in items.iter().enumerate() {
                let loc = format!("{source}: mixture[{i}]");
                let w = item
                    .get("w")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| Error::parse(&loc, "missing numeric 'w'"))?;
                let n = item
                    .get("n")
                    .ok_or_else(|| Error::parse(&loc, "missing 'n'"))
                    .and_then(|n| number_list(n, 3, &loc))?;
                weights.push(w);
                dirs.push(Vector3::new(n[0], n[1], n[2]));
            }
            Ok(Ansatz::Spherical(SphericalAnsatz::mixture(weights, dirs)?))
        }
        _ => Err(Error::parse(
            source,
            "expected a list of generators or {\"mixture\": [...]}",
        )),
    }
}

fn number_list(v: &Value, len: usize, loc: &str) -> Result<Vec<f64>> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == len)
        .ok_or_else(|| Error::parse(loc, format!("expected {len} numbers")))?;
    arr.iter()
        .map(|x| {
            x.as_f64()
                .ok_or_else(|| Error::parse(loc, format!("not a number: {x}")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_strings() {
        assert_eq!(
            parse_state_spec("werner:p=0.4").unwrap(),
            StateSpec::Werner { p: 0.4 }
        );
        assert_eq!(
            parse_state_spec("modified_werner:q=0.7, p=0.4").unwrap(),
            StateSpec::ModifiedWerner { p: 0.4, q: 0.7 }
        );
        assert_eq!(parse_state_spec("bell").unwrap(), StateSpec::BellPhiPlus);
        assert_eq!(
            parse_state_spec("product:az=0.5,bx=-0.2").unwrap(),
            StateSpec::Product {
                a: [0.0, 0.0, 0.5],
                b: [-0.2, 0.0, 0.0]
            }
        );
        assert_eq!(
            parse_state_spec("random:seed=17").unwrap(),
            StateSpec::Random { seed: 17 }
        );
        for bad in [
            "werner",
            "werner:q=1",
            "werner:p=x",
            "werner:p=0.1,p=0.2",
            "ghz:n=3",
            "random:seed=1.5",
            ":p=1",
        ] {
            assert!(
                matches!(parse_state_spec(bad), Err(Error::Parse { .. })),
                "{bad}"
            );
        }
    }

    #[test]
    fn state_json() {
        let t = r#"{"theta": [[1,0,0,0],[0,0.3,0,0],[0,0,-0.3,0],[0,0,0,0.3]]}"#;
        let s = parse_state_json(t, "t").unwrap();
        assert_eq!(s.theta()[(2, 2)], -0.3);

        let r = r#"{"rho_re": [[0.5,0,0,0.5],[0,0,0,0],[0,0,0,0],[0.5,0,0,0.5]],
                   "rho_im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}"#;
        let s = parse_state_json(r, "r").unwrap();
        assert!((s.theta()[(2, 2)] + 1.0).abs() < 1e-15);

        let both = r#"{"theta": [], "rho_re": [], "rho_im": []}"#;
        assert!(matches!(
            parse_state_json(both, "b"),
            Err(Error::Parse { .. })
        ));
        match parse_state_json("{\"theta\": [[1,0,0,0],\n[0,0", "m") {
            Err(Error::Parse { location, .. }) => assert!(location.starts_with("m:2:")),
            other => panic!("{other:?}"),
        }
        let short = r#"{"theta": [[1,0,0,0],[0,0.3,0,0],[0,0,-0.3],[0,0,0,0.3]]}"#;
        match parse_state_json(short, "s") {
            Err(Error::Parse { location, .. }) => assert_eq!(location, "s: theta[2]"),
            other => panic!("{other:?}"),
        }
        let invalid = r#"{"theta": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]}"#;
        assert!(matches!(
            parse_state_json(invalid, "v"),
            Err(Error::Validation { .. })
        ));
    }

    #[test]
    fn ansatz_json() {
        let a = parse_ansatz_json("[[0.5,0,0,0.5],[0.5,0,0,-0.5]]", "a").unwrap();
        assert!(matches!(a, Ansatz::Finite(ref f) if f.len() == 2));
        let m = parse_ansatz_json(
            r#"{"mixture": [{"w": 0.5, "n": [0,0,1]}, {"w": 0.5, "n": [0,0,-1]}]}"#,
            "m",
        )
        .unwrap();
        assert_eq!(m.principal_vertex(), PauliVector::HALF_IDENTITY);
        assert!(matches!(
            parse_ansatz_json("[[1,0,0]]", "x"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_ansatz_json("[[1,0,0,1.5]]", "x"),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            load_ansatz("uniform").unwrap().ansatz,
            Ansatz::Spherical(SphericalAnsatz::Uniform)
        ));
        assert!(load_ansatz("quasi_uniform:n=50").is_ok());
    }
}
