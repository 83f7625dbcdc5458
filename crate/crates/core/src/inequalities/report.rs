use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exact_arith::{format_rational, parse_rational, Rational};
use crate::polytope::Polytope;

/// Normalized slack below which a nonzero-slack instance counts as near-equality.
pub const NEAR_EQUALITY_THRESHOLD: (i64, i64) = (1, 1000);

/// One verdict, oriented so that the statement reads `lhs ≥ rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityReport {
    pub name: String,
    pub n: usize,
    /// `k` for the reverse Khovanskii–Teissier statements, `r` for Bézout,
    /// `i` for degree statements.
    pub k: Option<usize>,
    pub lhs: Rational,
    pub rhs: Rational,
    pub slack: Rational,
    pub holds: bool,
    pub strict: bool,
    pub fingerprint: String,
    pub seed: Option<u64>,
}

impl InequalityReport {
    pub fn new(name: &str, n: usize, k: Option<usize>, lhs: Rational, rhs: Rational, fingerprint: String) -> Self {
        let slack = &lhs - &rhs;
        let zero = Rational::from_integer(0.into());
        InequalityReport {
            name: name.to_string(),
            n,
            k,
            holds: slack >= zero,
            strict: slack > zero,
            lhs,
            rhs,
            slack,
            fingerprint,
            seed: None,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// `slack / rhs` when `rhs ≠ 0`.
    pub fn normalized_slack(&self) -> Option<Rational> {
        let zero = Rational::from_integer(0.into());
        (self.rhs != zero).then(|| &self.slack / &self.rhs)
    }

    pub fn is_equality(&self) -> bool {
        self.holds && !self.strict
    }

    /// Strict but with normalized slack below [`NEAR_EQUALITY_THRESHOLD`].
    pub fn is_near_equality(&self) -> bool {
        let (p, q) = NEAR_EQUALITY_THRESHOLD;
        self.strict
            && self
                .normalized_slack()
                .is_some_and(|s| s < Rational::new(p.into(), q.into()))
    }

    pub const CSV_HEADER: &'static str = "name,n,k,lhs,rhs,slack,holds,strict,seed";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.name,
            self.n,
            self.k.map(|k| k.to_string()).unwrap_or_default(),
            format_rational(&self.lhs),
            format_rational(&self.rhs),
            format_rational(&self.slack),
            self.holds,
            self.strict,
            self.seed.map(|s| s.to_string()).unwrap_or_default()
        )
    }
}

#[derive(Serialize, Deserialize)]
struct ReportJson {
    name: String,
    n: usize,
    k: Option<usize>,
    lhs: String,
    rhs: String,
    slack: String,
    holds: bool,
    strict: bool,
    fingerprint: String,
    seed: Option<u64>,
}

impl Serialize for InequalityReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        ReportJson {
            name: self.name.clone(),
            n: self.n,
            k: self.k,
            lhs: format_rational(&self.lhs),
            rhs: format_rational(&self.rhs),
            slack: format_rational(&self.slack),
            holds: self.holds,
            strict: self.strict,
            fingerprint: self.fingerprint.clone(),
            seed: self.seed,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for InequalityReport {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = ReportJson::deserialize(d)?;
        let p = |s: &str| parse_rational(s).map_err(serde::de::Error::custom);
        let mut r = InequalityReport::new(&j.name, j.n, j.k, p(&j.lhs)?, p(&j.rhs)?, j.fingerprint);
        r.seed = j.seed;
        if r.slack != p(&j.slack)? || r.holds != j.holds || r.strict != j.strict {
            return Err(serde::de::Error::custom("report fields are inconsistent"));
        }
        Ok(r)
    }
}

/// Hex SHA-256 (first 16 bytes) of the canonical JSON of role-tagged polytopes.
pub fn fingerprint(parts: &[(&str, &Polytope)]) -> String {
    let texts: Vec<(&str, String)> = parts.iter().map(|(role, p)| (*role, p.to_json_string())).collect();
    fingerprint_text(&texts)
}

/// Same digest over arbitrary role-tagged canonical strings.
pub fn fingerprint_text(parts: &[(&str, String)]) -> String {
    let mut h = Sha256::new();
    for (role, text) in parts {
        h.update(role.as_bytes());
        h.update(b"=");
        h.update(text.as_bytes());
        h.update(b";");
    }
    hex::encode(&h.finalize()[..16])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_arith::{frac, int};

    #[test]
    fn flags_follow_slack() {
        let r = InequalityReport::new("t", 2, Some(1), int(3), int(3), String::new());
        assert!(r.holds && !r.strict && r.is_equality());
        let r = InequalityReport::new("t", 2, Some(1), frac(2001, 2000), int(1), String::new());
        assert!(r.is_near_equality());
        let r = InequalityReport::new("t", 2, None, int(1), int(2), String::new());
        assert!(!r.holds);
        assert_eq!(r.csv_row(), "t,2,,1,2,-1,false,false,");
    }

    #[test]
    fn json_round_trip_and_tamper_detection() {
        let r = InequalityReport::new("rkt", 3, Some(1), frac(7, 2), int(3), "ab".into()).with_seed(9);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(serde_json::from_str::<InequalityReport>(&s).unwrap(), r);
        let bad = s.replace("\"holds\":true", "\"holds\":false");
        assert!(serde_json::from_str::<InequalityReport>(&bad).is_err());
    }

    #[test]
    fn fingerprint_depends_on_roles_and_shapes() {
        let s = Polytope::standard_simplex(2);
        let c = Polytope::unit_cube(2);
        assert_eq!(fingerprint(&[("A", &s)]), fingerprint(&[("A", &s)]));
        assert_ne!(fingerprint(&[("A", &s)]), fingerprint(&[("B", &s)]));
        assert_ne!(fingerprint(&[("A", &s)]), fingerprint(&[("A", &c)]));
        assert_eq!(fingerprint(&[("A", &s)]).len(), 32);
    }
}
