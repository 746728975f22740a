//! JSON chain files.
//!
//! ```json
//! {
//!   "version": "rumin-slice/1",
//!   "n": 1,
//!   "degree": 1,
//!   "vertices": [["0", "0", "0"], ["1", "0", "0"]],
//!   "simplices": [{"vertices": [0, 1], "multiplicity": "1"}],
//!   "quadrature_order": 5
//! }
//! ```
//!
//! Coordinates and multiplicities are rational literals (`"p/q"`, integers or terminating
//! decimals, as strings or JSON integers). Floating point JSON numbers are rejected.

use std::collections::BTreeMap;
use std::path::Path;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::currents::{Simplex, SimplicialCurrent, DEFAULT_QUADRATURE_ORDER};
use crate::error::{Error, Result};
use crate::heis::{HeisParams, Point};
use crate::scalar::{format_q, parse_q, Q};

pub const FORMAT_VERSION: &str = "rumin-slice/1";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ChainDoc {
    version: String,
    n: usize,
    degree: usize,
    vertices: Vec<Vec<Value>>,
    simplices: Vec<SimplexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    quadrature_order: Option<u32>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SimplexDoc {
    vertices: Vec<usize>,
    multiplicity: Value,
}

fn literal(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_q(s),
        Value::Number(num) if num.is_i64() || num.is_u64() => parse_q(&num.to_string()),
        other => Err(Error::NonRational(other.to_string())),
    }
}

/// Parses a chain from JSON text.
pub fn parse_chain(text: &str) -> Result<SimplicialCurrent> {
    let doc: ChainDoc = serde_json::from_str(text)?;
    if doc.version != FORMAT_VERSION {
        return Err(Error::ChainFile(format!("unsupported version `{}`, expected `{FORMAT_VERSION}`", doc.version)));
    }
    let params = HeisParams::new(doc.n)?;
    let mut points = Vec::with_capacity(doc.vertices.len());
    for (i, v) in doc.vertices.iter().enumerate() {
        if v.len() != params.dim() {
            return Err(Error::ChainFile(format!("vertex {i} has {} coordinates, expected {}", v.len(), params.dim())));
        }
        let coords = v.iter().map(literal).collect::<Result<Vec<_>>>()?;
        points.push(Point::from_coords(params, &coords)?);
    }
    let mut simplices = Vec::with_capacity(doc.simplices.len());
    for (i, s) in doc.simplices.iter().enumerate() {
        let multiplicity = literal(&s.multiplicity)?;
        if multiplicity.is_zero() {
            return Err(Error::ChainFile(format!("simplex {i} has zero multiplicity")));
        }
        let mut vs = Vec::with_capacity(s.vertices.len());
        for &idx in &s.vertices {
            let p = points
                .get(idx)
                .ok_or_else(|| Error::ChainFile(format!("simplex {i} refers to vertex {idx}, but there are {}", points.len())))?;
            vs.push(p.clone());
        }
        simplices.push(Simplex::new(vs, multiplicity));
    }
    let order = doc.quadrature_order.unwrap_or(DEFAULT_QUADRATURE_ORDER);
    SimplicialCurrent::new(params, doc.degree, simplices, order).map_err(|e| match e {
        Error::Parameter(m) => Error::ChainFile(m),
        other => other,
    })
}

/// Reads a chain file.
pub fn load_chain(path: &Path) -> Result<SimplicialCurrent> {
    parse_chain(&std::fs::read_to_string(path)?)
}

/// Serializes a chain. Vertices are shared between simplices and listed in first-use order.
pub fn chain_to_json(chain: &SimplicialCurrent) -> String {
    let mut index: BTreeMap<Vec<Q>, usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut simplices = Vec::new();
    for s in chain.simplices() {
        let mut ids = Vec::new();
        for v in &s.vertices {
            let c = v.coords();
            let id = *index.entry(c.clone()).or_insert_with(|| {
                vertices.push(c.iter().map(|q| Value::String(format_q(q))).collect());
                vertices.len() - 1
            });
            ids.push(id);
        }
        simplices.push(SimplexDoc { vertices: ids, multiplicity: Value::String(format_q(&s.multiplicity)) });
    }
    let doc = ChainDoc {
        version: FORMAT_VERSION.to_string(),
        n: chain.params().n(),
        degree: chain.degree(),
        vertices,
        simplices,
        quadrature_order: Some(chain.quadrature_order()),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

/// Writes a chain file.
pub fn write_chain(path: &Path, chain: &SimplicialCurrent) -> Result<()> {
    std::fs::write(path, chain_to_json(chain))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    #[test]
    fn round_trip_preserves_chains() {
        for c in [shapes::unit_segment(), shapes::unit_cube(), shapes::horizontal_square(), shapes::vertical_square()] {
            let back = parse_chain(&chain_to_json(&c)).unwrap();
            assert_eq!(back.degree(), c.degree());
            assert_eq!(back.simplices(), c.simplices());
            assert_eq!(back.quadrature_order(), c.quadrature_order());
        }
    }

    #[test]
    fn accepts_integer_and_fraction_literals() {
        let c = parse_chain(
            r#"{"version":"rumin-slice/1","n":1,"degree":1,
                "vertices":[[0,"1/2","0.25"],["1","0",0]],
                "simplices":[{"vertices":[0,1],"multiplicity":"-3/2"}]}"#,
        )
        .unwrap();
        assert_eq!(c.simplices()[0].vertices[0].coords()[2], crate::scalar::q_frac(1, 4));
        assert_eq!(c.quadrature_order(), DEFAULT_QUADRATURE_ORDER);
    }

    #[test]
    fn rejects_bad_files() {
        let base = |version: &str, verts: &str, simp: &str| {
            format!(r#"{{"version":"{version}","n":1,"degree":1,"vertices":{verts},"simplices":{simp}}}"#)
        };
        let good_v = r#"[["0","0","0"],["1","0","0"]]"#;
        let good_s = r#"[{"vertices":[0,1],"multiplicity":"1"}]"#;
        assert!(parse_chain(&base("rumin-slice/1", good_v, good_s)).is_ok());
        assert!(matches!(parse_chain(&base("rumin-slice/2", good_v, good_s)), Err(Error::ChainFile(_))));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", good_v, r#"[{"vertices":[0,2],"multiplicity":"1"}]"#)),
            Err(Error::ChainFile(_))
        ));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", good_v, r#"[{"vertices":[0,1],"multiplicity":"0"}]"#)),
            Err(Error::ChainFile(_))
        ));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", r#"[["0","0","0"],[0.1,"0","0"]]"#, good_s)),
            Err(Error::NonRational(_))
        ));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", r#"[["0","0","0"],["1/0","0","0"]]"#, good_s)),
            Err(Error::NonRational(_))
        ));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", r#"[["0","0"],["1","0"]]"#, good_s)),
            Err(Error::ChainFile(_))
        ));
        assert!(matches!(
            parse_chain(&base("rumin-slice/1", good_v, r#"[{"vertices":[0],"multiplicity":"1"}]"#)),
            Err(Error::ChainFile(_))
        ));
        assert!(matches!(parse_chain("{"), Err(Error::Json(_))));
    }
}
