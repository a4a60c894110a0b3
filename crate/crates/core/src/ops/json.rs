//! JSON form of operator expressions.
//!
//! Expressions are small trees like `{"op":"TLm","m":"inf","L":"generator"}`.
//! Matrix- and system-valued arguments are resolved by name against a
//! [`Registry`] built from a space-spec document; `"generator"`,
//! `"metric"` and `"neighborhoods"` name the document slots, and a
//! nonlocal `mu` is the off-diagonal part of the named generator.

use super::expr::{Exponent, ExponentSpec, Expr};
use super::phi::ScalingMap;
use super::OperatorHandle;
use crate::error::{Error, Result};
use crate::exact::parse_rat;
use crate::generator::{Generator, MeasureMatrix, MetricMatrix};
use crate::neighbors::NeighborhoodSystem;
use crate::space::FiniteSpace;
use num_traits::ToPrimitive;
use serde_json::Value;

/// Named inputs an expression may reference.
#[derive(Clone, Debug, Default)]
pub struct Registry {
    pub space: Option<FiniteSpace>,
    pub generator: Option<Generator>,
    pub metric: Option<MetricMatrix>,
    pub neighborhoods: Option<NeighborhoodSystem>,
}

impl Registry {
    fn generator(&self, name: Option<&str>) -> Result<Generator> {
        match name {
            None | Some("generator") => self
                .generator
                .clone()
                .ok_or_else(|| Error::InvalidExpression("no generator in scope".into())),
            Some(other) => {
                Err(Error::InvalidExpression(format!("unknown generator name {other:?}")))
            }
        }
    }

    fn measure(&self, name: Option<&str>) -> Result<MeasureMatrix> {
        Ok(self.generator(name)?.as_measure())
    }

    fn metric(&self) -> Result<MetricMatrix> {
        if let Some(m) = &self.metric {
            return Ok(m.clone());
        }
        let space = self
            .space
            .clone()
            .ok_or_else(|| Error::InvalidExpression("no metric or space in scope".into()))?;
        Ok(MetricMatrix::unit(space))
    }

    /// Explicit neighborhoods if present, otherwise the generator's active
    /// system.
    fn neighborhoods(&self) -> Result<NeighborhoodSystem> {
        if let Some(d) = &self.neighborhoods {
            return Ok(d.clone());
        }
        Ok(self.generator(None)?.active_system())
    }
}

/// Parse a JSON operator expression against a registry.
pub fn parse_operator(v: &Value, reg: &Registry) -> Result<OperatorHandle> {
    OperatorHandle::new(parse_expr(v, reg)?)
}

fn parse_expr(v: &Value, reg: &Registry) -> Result<Expr> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidExpression(format!("expected an object, got {v}")))?;
    let op = obj
        .get("op")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::InvalidExpression("missing \"op\" tag".into()))?;
    let name_of = |key: &str| obj.get(key).and_then(Value::as_str);
    match op {
        "TL" => Ok(Expr::RateDescent { gen: reg.generator(name_of("L"))? }),
        "TLm" => {
            let m = parse_exponent(
                obj.get("m")
                    .ok_or_else(|| Error::InvalidExpression("TLm needs \"m\"".into()))?,
            )?;
            Ok(Expr::PowerDescent {
                gen: reg.generator(name_of("L"))?,
                m: ExponentSpec::Uniform(m),
            })
        }
        "TLinf" => Ok(Expr::PowerDescent {
            gen: reg.generator(name_of("L"))?,
            m: ExponentSpec::Uniform(Exponent::Infinity),
        }),
        "TD" => Ok(Expr::MaxDrop { sys: reg.neighborhoods()? }),
        "slope" => Ok(Expr::SemiglobalSlope { sys: reg.neighborhoods()?, metric: reg.metric()? }),
        "nonlocal" => {
            let phi = parse_phi(
                obj.get("phi")
                    .ok_or_else(|| Error::InvalidExpression("nonlocal needs \"phi\"".into()))?,
            )?;
            let oriented = obj.get("oriented").and_then(Value::as_bool).unwrap_or(true);
            Ok(Expr::Nonlocal { mu: reg.measure(name_of("mu"))?, phi, oriented })
        }
        "mindrop" => Ok(Expr::MinDrop { sys: reg.neighborhoods()? }),
        "sum" | "sup" | "inf" => {
            let terms = obj
                .get("terms")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidExpression(format!("{op} needs \"terms\"")))?
                .iter()
                .map(|t| parse_expr(t, reg))
                .collect::<Result<Vec<_>>>()?;
            Ok(match op {
                "sum" => Expr::Sum { terms },
                "sup" => Expr::Sup { terms },
                _ => Expr::Inf { terms },
            })
        }
        "compose" => Ok(Expr::Compose {
            phi: parse_phi(
                obj.get("phi")
                    .ok_or_else(|| Error::InvalidExpression("compose needs \"phi\"".into()))?,
            )?,
            inner: Box::new(parse_inner(obj, reg)?),
        }),
        "scale" => Ok(Expr::Scale {
            r: parse_rat_field(obj, "r")?,
            inner: Box::new(parse_inner(obj, reg)?),
        }),
        "truncate" => Ok(Expr::Truncate {
            eps: parse_rat_field(obj, "eps")?,
            inner: Box::new(parse_inner(obj, reg)?),
        }),
        "restrict" => {
            let inner = parse_inner(obj, reg)?;
            let space = inner.space().clone();
            let keep = obj
                .get("K")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::InvalidExpression("restrict needs \"K\"".into()))?
                .iter()
                .map(|l| {
                    l.as_str()
                        .ok_or_else(|| Error::InvalidExpression("K entries are labels".into()))
                        .and_then(|s| space.require(s))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Expr::Restrict { keep, inner: Box::new(inner) })
        }
        "indicator" => Ok(Expr::Indicator { inner: Box::new(parse_inner(obj, reg)?) }),
        other => Err(Error::InvalidExpression(format!("unknown op {other:?}"))),
    }
}

fn parse_inner(obj: &serde_json::Map<String, Value>, reg: &Registry) -> Result<Expr> {
    parse_expr(
        obj.get("inner")
            .ok_or_else(|| Error::InvalidExpression("combinator needs \"inner\"".into()))?,
        reg,
    )
}

fn parse_rat_field(obj: &serde_json::Map<String, Value>, key: &str) -> Result<crate::exact::Rat> {
    let v = obj
        .get(key)
        .ok_or_else(|| Error::InvalidExpression(format!("missing \"{key}\"")))?;
    match v {
        Value::String(s) => parse_rat(s),
        Value::Number(n) => n
            .as_i64()
            .map(crate::exact::rint)
            .ok_or_else(|| Error::Parse(format!("{key} must be an integer or \"p/q\""))),
        _ => Err(Error::Parse(format!("{key} must be an integer or \"p/q\""))),
    }
}

fn parse_exponent(v: &Value) -> Result<Exponent> {
    match v {
        Value::String(s) if s == "inf" => Ok(Exponent::Infinity),
        Value::String(s) => {
            let r = parse_rat(s)?;
            let num = r
                .numer()
                .to_i64()
                .ok_or_else(|| Error::Parse("exponent numerator too large".into()))?;
            let den = r
                .denom()
                .to_u32()
                .ok_or_else(|| Error::Parse("exponent denominator too large".into()))?;
            Exponent::rational(num, den)
        }
        Value::Number(n) => {
            let m = n.as_i64().ok_or_else(|| Error::Parse("bad exponent".into()))?;
            Exponent::rational(m, 1)
        }
        _ => Err(Error::Parse(format!("bad exponent {v}"))),
    }
}

fn parse_phi(v: &Value) -> Result<ScalingMap> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::InvalidPhi(format!("expected an object, got {v}")))?;
    if let Some(p) = obj.get("pow") {
        let r = match p {
            Value::String(s) => parse_rat(s)?,
            Value::Number(n) => crate::exact::rint(
                n.as_i64().ok_or_else(|| Error::InvalidPhi("bad power".into()))?,
            ),
            _ => return Err(Error::InvalidPhi(format!("bad power {p}"))),
        };
        let num = r.numer().to_i64().ok_or_else(|| Error::InvalidPhi("power too large".into()))?;
        let den = r.denom().to_u32().ok_or_else(|| Error::InvalidPhi("power too large".into()))?;
        return ScalingMap::pow(num, den);
    }
    if let Some(e) = obj.get("threshold") {
        let eps = match e {
            Value::String(s) => parse_rat(s)?,
            Value::Number(n) => crate::exact::rint(
                n.as_i64().ok_or_else(|| Error::InvalidPhi("bad threshold".into()))?,
            ),
            _ => return Err(Error::InvalidPhi(format!("bad threshold {e}"))),
        };
        return ScalingMap::threshold(eps);
    }
    if let Some(t) = obj.get("table") {
        let map = t
            .as_object()
            .ok_or_else(|| Error::InvalidPhi("table must be an object".into()))?;
        let pairs = map
            .iter()
            .map(|(k, v)| {
                let key = parse_rat(k)?;
                let val = match v {
                    Value::String(s) => parse_rat(s)?,
                    Value::Number(n) => crate::exact::rint(
                        n.as_i64().ok_or_else(|| Error::InvalidPhi("bad table value".into()))?,
                    ),
                    _ => return Err(Error::InvalidPhi(format!("bad table value {v}"))),
                };
                Ok((key, val))
            })
            .collect::<Result<Vec<_>>>()?;
        return ScalingMap::table(pairs);
    }
    Err(Error::InvalidPhi(format!("unknown scaling map {v}")))
}
