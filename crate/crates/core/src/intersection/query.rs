use std::fmt;

use super::IntersectionError;

/// Monomial in divisor names, e.g. `A^2*B*C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionQuery {
    terms: Vec<(String, usize)>,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl IntersectionQuery {
    /// Builds a query, merging repeated names and dropping zero exponents.
    pub fn from_terms<S: AsRef<str>>(terms: &[(S, usize)]) -> Self {
        let mut out: Vec<(String, usize)> = Vec::new();
        for (name, e) in terms {
            let name = name.as_ref();
            if *e == 0 {
                continue;
            }
            match out.iter_mut().find(|(n, _)| n == name) {
                Some(t) => t.1 += e,
                None => out.push((name.to_string(), *e)),
            }
        }
        IntersectionQuery { terms: out }
    }

    pub fn parse(s: &str) -> Result<Self, IntersectionError> {
        let bad = || IntersectionError::Parse(s.to_string());
        let mut terms = Vec::new();
        for factor in s.split('*') {
            let factor = factor.trim();
            let (name, exp) = match factor.split_once('^') {
                Some((n, e)) => (n.trim(), e.trim().parse::<usize>().map_err(|_| bad())?),
                None => (factor, 1),
            };
            if !valid_name(name) || exp == 0 {
                return Err(bad());
            }
            terms.push((name, exp));
        }
        Ok(Self::from_terms(&terms))
    }

    pub fn terms(&self) -> &[(String, usize)] {
        &self.terms
    }

    pub fn degree(&self) -> usize {
        self.terms.iter().map(|(_, e)| e).sum()
    }
}

impl fmt::Display for IntersectionQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}
