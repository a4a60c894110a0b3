//! The JSON space-spec document: vertices, generator, optional metric and
//! neighborhoods, and named functions. Rationals travel as `"p/q"` strings
//! so nothing is rounded on the way in or out.

use crate::error::{Error, Result};
use crate::exact::{parse_rat, rat_to_string, Rat};
use crate::field::ScalarField;
use crate::generator::{Generator, MetricMatrix};
use crate::neighbors::NeighborhoodSystem;
use crate::ops::Registry;
use crate::space::FiniteSpace;
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
pub struct SpaceSpec {
    pub space: FiniteSpace,
    pub generator: Generator,
    pub metric: Option<MetricMatrix>,
    pub neighborhoods: Option<NeighborhoodSystem>,
    pub functions: BTreeMap<String, ScalarField>,
}

impl std::str::FromStr for SpaceSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: Value =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("bad JSON: {e}")))?;
        Self::from_json(&v)
    }
}

impl SpaceSpec {
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("space spec must be an object".into()))?;
        let labels: Vec<String> = obj
            .get("vertices")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing \"vertices\" array".into()))?
            .iter()
            .map(|l| {
                l.as_str()
                    .map(str::to_owned)
                    .ok_or_else(|| Error::Parse("vertex labels must be strings".into()))
            })
            .collect::<Result<_>>()?;
        let space = FiniteSpace::new(labels)?;

        let generator = Generator::new(
            space.clone(),
            parse_matrix(
                obj.get("generator")
                    .ok_or_else(|| Error::Parse("missing \"generator\" matrix".into()))?,
                space.len(),
            )?,
        )?;

        let metric = obj
            .get("metric")
            .map(|m| MetricMatrix::new(space.clone(), parse_matrix(m, space.len())?))
            .transpose()?;

        let neighborhoods = obj
            .get("neighborhoods")
            .map(|n| {
                let map = n
                    .as_object()
                    .ok_or_else(|| Error::Parse("\"neighborhoods\" must be an object".into()))?;
                let mut sets = vec![Vec::new(); space.len()];
                for (label, members) in map {
                    let x = space.require(label)?;
                    sets[x] = members
                        .as_array()
                        .ok_or_else(|| Error::Parse("neighborhood sets are arrays".into()))?
                        .iter()
                        .map(|m| {
                            m.as_str()
                                .ok_or_else(|| Error::Parse("set members are labels".into()))
                                .and_then(|s| space.require(s))
                        })
                        .collect::<Result<_>>()?;
                }
                // vertices absent from the map get the trivial set {x}
                for (x, set) in sets.iter_mut().enumerate() {
                    if set.is_empty() {
                        set.push(x);
                    }
                }
                NeighborhoodSystem::new(space.clone(), sets)
            })
            .transpose()?;

        let mut functions = BTreeMap::new();
        if let Some(fs) = obj.get("functions") {
            let map = fs
                .as_object()
                .ok_or_else(|| Error::Parse("\"functions\" must be an object".into()))?;
            for (name, vals) in map {
                let values = parse_row(vals, space.len())
                    .map_err(|e| Error::Parse(format!("function {name:?}: {e}")))?;
                functions.insert(name.clone(), ScalarField::new(space.clone(), values)?);
            }
        }
        Ok(SpaceSpec { space, generator, metric, neighborhoods, functions })
    }


    pub fn to_json(&self) -> Value {
        let n = self.space.len();
        let matrix_json = |entry: &dyn Fn(usize, usize) -> Rat| -> Value {
            Value::Array(
                (0..n)
                    .map(|i| {
                        Value::Array(
                            (0..n).map(|j| json!(rat_to_string(&entry(i, j)))).collect(),
                        )
                    })
                    .collect(),
            )
        };
        let mut obj = Map::new();
        obj.insert("vertices".into(), json!(self.space.labels()));
        obj.insert(
            "generator".into(),
            matrix_json(&|i, j| self.generator.entry(i, j).clone()),
        );
        if let Some(m) = &self.metric {
            obj.insert("metric".into(), matrix_json(&|i, j| m.entry(i, j).clone()));
        }
        if let Some(d) = &self.neighborhoods {
            let mut map = Map::new();
            for x in 0..n {
                map.insert(
                    self.space.label(x).to_owned(),
                    json!(d
                        .set(x)
                        .iter()
                        .map(|&y| self.space.label(y))
                        .collect::<Vec<_>>()),
                );
            }
            obj.insert("neighborhoods".into(), Value::Object(map));
        }
        let mut fs = Map::new();
        for (name, f) in &self.functions {
            fs.insert(
                name.clone(),
                json!(f.values().iter().map(rat_to_string).collect::<Vec<_>>()),
            );
        }
        obj.insert("functions".into(), Value::Object(fs));
        Value::Object(obj)
    }

    pub fn function(&self, name: &str) -> Result<&ScalarField> {
        self.functions
            .get(name)
            .ok_or_else(|| Error::Other(format!("unknown function {name:?}")))
    }

    /// Name-resolution registry for operator expressions.
    pub fn registry(&self) -> Registry {
        Registry {
            space: Some(self.space.clone()),
            generator: Some(self.generator.clone()),
            metric: self.metric.clone(),
            neighborhoods: self.neighborhoods.clone(),
        }
    }
}

fn parse_matrix(v: &Value, n: usize) -> Result<Vec<Vec<Rat>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if rows.len() != n {
        return Err(Error::Parse(format!("matrix has {} rows, expected {n}", rows.len())));
    }
    rows.iter().map(|r| parse_row(r, n)).collect()
}

fn parse_row(v: &Value, n: usize) -> Result<Vec<Rat>> {
    let entries = v
        .as_array()
        .ok_or_else(|| Error::Parse("row must be an array".into()))?;
    if entries.len() != n {
        return Err(Error::Parse(format!("row has {} entries, expected {n}", entries.len())));
    }
    entries
        .iter()
        .map(|e| match e {
            Value::String(s) => parse_rat(s),
            Value::Number(num) => num
                .as_i64()
                .map(crate::exact::rint)
                .ok_or_else(|| Error::Parse(format!("non-integer number {num}; use \"p/q\""))),
            other => Err(Error::Parse(format!("bad entry {other}"))),
        })
        .collect()
}
