//! JSON form of a polytope: `{"dim": n, "vertices": [[entry, …], …]}` where an
//! entry is a JSON integer or a `"p/q"` string. Facets are never serialized.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::{Point, Polytope, PolytopeError};
use crate::exact_arith::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Str(String),
}

impl Entry {
    pub fn from_rational(r: &Rational) -> Self {
        match r.is_integer().then(|| r.numer().to_i64()).flatten() {
            Some(v) => Entry::Int(v),
            None => Entry::Str(format_rational(r)),
        }
    }

    pub fn to_rational(&self) -> Result<Rational, PolytopeError> {
        match self {
            Entry::Int(v) => Ok(crate::exact_arith::int(*v)),
            Entry::Str(s) => parse_rational(s).map_err(|e| PolytopeError::Json(e.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<Entry>>,
}

impl From<&Polytope> for PolytopeJson {
    fn from(p: &Polytope) -> Self {
        PolytopeJson {
            dim: p.ambient_dim(),
            vertices: p.vertices().iter().map(|v| v.iter().map(Entry::from_rational).collect()).collect(),
        }
    }
}

impl PolytopeJson {
    pub fn to_polytope(&self) -> Result<Polytope, PolytopeError> {
        let mut pts: Vec<Point> = Vec::with_capacity(self.vertices.len());
        for v in &self.vertices {
            if v.len() != self.dim {
                return Err(PolytopeError::Json(format!(
                    "vertex has {} coordinates, expected {}",
                    v.len(),
                    self.dim
                )));
            }
            pts.push(v.iter().map(Entry::to_rational).collect::<Result<_, _>>()?);
        }
        if pts.is_empty() {
            return Err(PolytopeError::Json("no vertices".into()));
        }
        Polytope::convex_hull(&pts)
    }
}

impl Serialize for Polytope {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolytopeJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        PolytopeJson::deserialize(d)?.to_polytope().map_err(serde::de::Error::custom)
    }
}
