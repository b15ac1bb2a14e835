//! JSON interchange: the lattice spec consumed by the command line, and the
//! root-system emitter.
//!
//! Matrix entries serialize as JSON numbers while they fit the 53-bit safe
//! range and as decimal strings beyond it; the loader accepts both.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use std::sync::Arc;

use crate::error::Error;
use crate::glattice::GLattice;
use crate::group::{FiniteMatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::matrix::IntMatrix;
use crate::roots::RootSystemData;

const SAFE_MAX: i64 = (1 << 53) - 1;

pub fn entry_to_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) if v.abs() <= SAFE_MAX => Value::from(v),
        _ => Value::from(x.to_string()),
    }
}

pub fn entry_from_json(v: &Value) -> Result<BigInt, Error> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else {
                Err(Error::InvalidSpec(format!("non-integer entry {}", n)))
            }
        }
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::InvalidSpec(format!("bad integer string {:?}", s))),
        other => Err(Error::InvalidSpec(format!("bad entry {}", other))),
    }
}

pub fn matrix_to_json(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array((0..m.cols()).map(|j| entry_to_json(m.at(i, j))).collect()))
            .collect(),
    )
}

pub fn matrix_from_json(v: &Value) -> Result<IntMatrix, Error> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::InvalidSpec("matrix must be an array of rows".into()))?;
    if rows.is_empty() {
        return Ok(IntMatrix::zeros(0, 0));
    }
    let mut data: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for row in rows {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::InvalidSpec("matrix row must be an array".into()))?;
        data.push(cells.iter().map(entry_from_json).collect::<Result<_, _>>()?);
    }
    let cols = data[0].len();
    if data.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidSpec("ragged matrix rows".into()));
    }
    Ok(IntMatrix::from_fn(rows.len(), cols, |i, j| data[i][j].clone()))
}

/// The on-disk lattice spec: group generators plus the action of each
/// generator; the loader closes the group, extends the action along words,
/// and verifies the homomorphism property.
#[derive(Serialize, Deserialize)]
pub struct LatticeSpec {
    pub group: GroupSpec,
    pub rank: usize,
    pub action_generators: Vec<Value>,
}

#[derive(Serialize, Deserialize)]
pub struct GroupSpec {
    pub generators: Vec<Value>,
}

pub fn load_lattice_spec(text: &str) -> Result<GLattice, Error> {
    let spec: LatticeSpec =
        serde_json::from_str(text).map_err(|e| Error::InvalidSpec(format!("{}", e)))?;
    let gens: Vec<IntMatrix> = spec
        .group
        .generators
        .iter()
        .map(matrix_from_json)
        .collect::<Result<_, _>>()?;
    if gens.is_empty() {
        return Err(Error::InvalidSpec("group needs at least one generator".into()));
    }
    let group = Arc::new(FiniteMatrixGroup::generate_closure(&gens, DEFAULT_CLOSURE_CAP)?);
    let actions: Vec<IntMatrix> = spec
        .action_generators
        .iter()
        .map(matrix_from_json)
        .collect::<Result<_, _>>()?;
    if actions.len() != gens.len() {
        return Err(Error::InvalidSpec(
            "need exactly one action matrix per group generator".into(),
        ));
    }
    for a in &actions {
        if a.rows() != spec.rank || a.cols() != spec.rank {
            return Err(Error::InvalidSpec(format!(
                "action matrices must be {0} x {0}",
                spec.rank
            )));
        }
    }
    let lattice = GLattice::from_generator_actions(&group, &actions)?;
    lattice.verify_action()?;
    Ok(lattice)
}

pub fn lattice_to_spec(m: &GLattice) -> LatticeSpec {
    LatticeSpec {
        group: GroupSpec {
            generators: m
                .group
                .generators
                .iter()
                .map(|&g| matrix_to_json(m.group.matrix(g)))
                .collect(),
        },
        rank: m.rank,
        action_generators: m
            .group
            .generators
            .iter()
            .map(|&g| matrix_to_json(&m.action[g]))
            .collect(),
    }
}

/// JSON dump of a root system: simple roots as rational strings, Cartan
/// matrix, root list, Weyl generators in the weight basis.
pub fn root_system_to_json(rs: &RootSystemData) -> Value {
    let rational_vec = |v: &[crate::rational::Rat]| -> Value {
        Value::Array(
            v.iter()
                .map(|x| {
                    if x.is_integer() {
                        Value::from(x.to_integer().to_string())
                    } else {
                        Value::from(format!("{}/{}", x.numer(), x.denom()))
                    }
                })
                .collect(),
        )
    };
    let simple: Vec<Value> = (0..rs.rank())
        .map(|i| rational_vec(&rs.simple_root(i)))
        .collect();
    let weights: Vec<Value> = (0..rs.rank())
        .map(|i| rational_vec(&rs.fundamental_weights.column(i)))
        .collect();
    let roots: Vec<Value> = rs.all_roots.iter().map(|r| rational_vec(r)).collect();
    serde_json::json!({
        "type": format!("{}", rs.dynkin),
        "rank": rs.rank(),
        "ambient_dim": rs.ambient_dim,
        "num_roots": rs.num_roots(),
        "connection_index": rs.connection_index().to_string(),
        "simple_roots": simple,
        "fundamental_weights": weights,
        "cartan": matrix_to_json(&rs.cartan),
        "weyl_generators_weight_basis": rs
            .weyl_gens_weight_basis
            .iter()
            .map(matrix_to_json)
            .collect::<Vec<_>>(),
        "roots": roots,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn entry_roundtrip() {
        let big: BigInt = BigInt::from(1i64 << 60) * 123;
        let j = entry_to_json(&big);
        assert!(j.is_string());
        assert_eq!(entry_from_json(&j).unwrap(), big);
        let small = BigInt::from(-42);
        let j = entry_to_json(&small);
        assert!(j.is_number());
        assert_eq!(entry_from_json(&j).unwrap(), small);
    }

    #[test]
    fn load_sign_lattice() {
        let text = r#"{
            "group": {"generators": [[[-1]]]},
            "rank": 1,
            "action_generators": [[[-1]]]
        }"#;
        let m = load_lattice_spec(text).unwrap();
        assert_eq!(m.rank, 1);
        assert_eq!(m.group.order(), 2);
        let g = m.group.generators[0];
        assert_eq!(m.action[g].at(0, 0), &-BigInt::one());
    }

    #[test]
    fn load_regular_klein() {
        let text = r#"{
            "group": {"generators": [[[-1,0],[0,1]], [[1,0],[0,-1]]]},
            "rank": 4,
            "action_generators": [
                [[0,1,0,0],[1,0,0,0],[0,0,1,0],[0,0,0,1]],
                [[1,0,0,0],[0,1,0,0],[0,0,0,1],[0,0,1,0]]
            ]
        }"#;
        let m = load_lattice_spec(text).unwrap();
        assert_eq!(m.rank, 4);
        assert_eq!(m.group.order(), 4);
    }

    #[test]
    fn reject_bad_specs() {
        // Non-unimodular generator.
        let text = r#"{"group": {"generators": [[[2]]]}, "rank": 1, "action_generators": [[[1]]]}"#;
        assert!(load_lattice_spec(text).is_err());
        // Homomorphism violation: an order-2 generator with an order-4 action.
        let text = r#"{
            "group": {"generators": [[[-1]]]},
            "rank": 2,
            "action_generators": [[[0,-1],[1,0]]]
        }"#;
        assert!(load_lattice_spec(text).is_err());
        // Wrong action shape.
        let text = r#"{"group": {"generators": [[[-1]]]}, "rank": 2, "action_generators": [[[-1]]]}"#;
        assert!(load_lattice_spec(text).is_err());
    }
}
