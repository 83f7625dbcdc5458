use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use super::{inclusion_exclusion_terms, mixed_volume_grouped, mixed_volume_on_fan, IntersectionError, IntersectionQuery, MvStrategy};
use crate::exact_arith::Rational;
use crate::polytope::{MinkowskiFan, Polytope, PolytopeJson};

type FanKey = Vec<usize>;

/// Named nef divisors on one toric variety, modeled by polytopes of a common
/// ambient dimension. Shared triangulations and intersection numbers are
/// cached per instance.
#[derive(Debug)]
pub struct DivisorSystem {
    dim: usize,
    divisors: Vec<(String, Polytope)>,
    fans: Mutex<HashMap<FanKey, Arc<MinkowskiFan>>>,
    numbers: Mutex<HashMap<(FanKey, Vec<usize>), Rational>>,
}

impl Clone for DivisorSystem {
    fn clone(&self) -> Self {
        DivisorSystem {
            dim: self.dim,
            divisors: self.divisors.clone(),
            fans: Mutex::new(HashMap::new()),
            numbers: Mutex::new(HashMap::new()),
        }
    }
}

/// `{"dim": n, "divisors": {"A": <polytope>, …}}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSystemJson {
    pub dim: usize,
    pub divisors: BTreeMap<String, PolytopeJson>,
}

impl DivisorSystem {
    pub fn new(dim: usize) -> Self {
        DivisorSystem { dim, divisors: Vec::new(), fans: Mutex::new(HashMap::new()), numbers: Mutex::new(HashMap::new()) }
    }

    /// Builds a system from `(name, polytope)` pairs.
    pub fn from_divisors<S: AsRef<str>>(dim: usize, divisors: &[(S, Polytope)]) -> Result<Self, IntersectionError> {
        let mut sys = Self::new(dim);
        for (name, p) in divisors {
            sys.insert(name.as_ref(), p.clone())?;
        }
        Ok(sys)
    }

    pub fn insert(&mut self, name: &str, p: Polytope) -> Result<(), IntersectionError> {
        if p.ambient_dim() != self.dim {
            return Err(IntersectionError::Shape(format!(
                "divisor `{name}` has dimension {}, system has {}",
                p.ambient_dim(),
                self.dim
            )));
        }
        if self.divisors.iter().any(|(n, _)| n == name) {
            return Err(IntersectionError::Shape(format!("divisor `{name}` defined twice")));
        }
        self.divisors.push((name.to_string(), p));
        self.fans.lock().unwrap().clear();
        self.numbers.lock().unwrap().clear();
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn names(&self) -> Vec<&str> {
        self.divisors.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn get(&self, name: &str) -> Option<&Polytope> {
        self.divisors.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    fn index_of(&self, name: &str) -> Result<usize, IntersectionError> {
        self.divisors
            .iter()
            .position(|(n, _)| n == name)
            .ok_or_else(|| IntersectionError::UnknownDivisor(name.to_string()))
    }

    fn resolve(&self, q: &IntersectionQuery) -> Result<(FanKey, Vec<usize>), IntersectionError> {
        if q.degree() != self.dim {
            return Err(IntersectionError::Shape(format!(
                "query `{q}` has degree {}, expected {}",
                q.degree(),
                self.dim
            )));
        }
        let mut pairs: Vec<(usize, usize)> =
            q.terms().iter().map(|(n, e)| Ok((self.index_of(n)?, *e))).collect::<Result<_, IntersectionError>>()?;
        pairs.sort_unstable();
        Ok(pairs.into_iter().unzip())
    }

    fn fan(&self, key: &FanKey) -> Result<Arc<MinkowskiFan>, IntersectionError> {
        if let Some(f) = self.fans.lock().unwrap().get(key) {
            return Ok(f.clone());
        }
        let bodies: Vec<&Polytope> = key.iter().map(|&i| &self.divisors[i].1).collect();
        let fan = Arc::new(MinkowskiFan::new(&bodies)?);
        Ok(self.fans.lock().unwrap().entry(key.clone()).or_insert(fan).clone())
    }

    /// The intersection number of the queried monomial.
    pub fn intersection_number(&self, q: &IntersectionQuery) -> Result<Rational, IntersectionError> {
        let (key, exps) = self.resolve(q)?;
        let memo_key = (key, exps);
        if let Some(v) = self.numbers.lock().unwrap().get(&memo_key) {
            return Ok(v.clone());
        }
        let fan = self.fan(&memo_key.0)?;
        let v = mixed_volume_on_fan(&fan, &inclusion_exclusion_terms(&memo_key.1));
        self.numbers.lock().unwrap().entry(memo_key).or_insert_with(|| v.clone());
        Ok(v)
    }

    /// Convenience form of [`Self::intersection_number`] for `(name, exponent)` lists.
    pub fn intersect(&self, terms: &[(&str, usize)]) -> Result<Rational, IntersectionError> {
        self.intersection_number(&IntersectionQuery::from_terms(terms))
    }

    /// Uncached evaluation with an explicit strategy.
    pub fn intersection_number_with(&self, q: &IntersectionQuery, strategy: MvStrategy) -> Result<Rational, IntersectionError> {
        let (key, exps) = self.resolve(q)?;
        let parts: Vec<(&Polytope, usize)> = key.iter().zip(&exps).map(|(&i, &e)| (&self.divisors[i].1, e)).collect();
        mixed_volume_grouped(&parts, strategy)
    }

    pub fn to_json(&self) -> DivisorSystemJson {
        DivisorSystemJson {
            dim: self.dim,
            divisors: self.divisors.iter().map(|(n, p)| (n.clone(), PolytopeJson::from(p))).collect(),
        }
    }

    pub fn from_json(j: &DivisorSystemJson) -> Result<Self, IntersectionError> {
        let mut sys = Self::new(j.dim);
        for (name, pj) in &j.divisors {
            sys.insert(name, pj.to_polytope()?)?;
        }
        Ok(sys)
    }

    pub fn from_json_str(s: &str) -> Result<Self, IntersectionError> {
        let j: DivisorSystemJson =
            serde_json::from_str(s).map_err(|e| IntersectionError::Parse(format!("divisor system JSON: {e}")))?;
        Self::from_json(&j)
    }
}
