use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A squarefree monomial, i.e. a finite set of variable indices kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct SquarefreeMonomial(Vec<usize>);

impl SquarefreeMonomial {
    /// Fails on an empty variable list or a repeated variable.
    pub fn new(vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut vars: Vec<usize> = vars.into_iter().collect();
        if vars.is_empty() {
            return Err(Error::EmptyMonomial);
        }
        vars.sort_unstable();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::NotSquarefree(w[0]));
        }
        Ok(SquarefreeMonomial(vars))
    }

    /// The edge monomial `x_u x_v`. Panics if `u == v`.
    pub fn edge(u: usize, v: usize) -> Self {
        assert_ne!(u, v, "edge monomial needs two distinct variables");
        SquarefreeMonomial(if u < v { vec![u, v] } else { vec![v, u] })
    }

    pub fn var(x: usize) -> Self {
        SquarefreeMonomial(vec![x])
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.binary_search(&var).is_ok()
    }

    pub fn max_var(&self) -> usize {
        *self.0.last().expect("monomials are nonempty")
    }

    pub fn divides(&self, other: &SquarefreeMonomial) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    /// Whether `self` divides the (possibly non-squarefree) product `a * b`.
    pub fn divides_product(&self, a: &SquarefreeMonomial, b: &SquarefreeMonomial) -> bool {
        self.0.iter().all(|&x| a.contains(x) || b.contains(x))
    }

    pub fn lcm(&self, other: &SquarefreeMonomial) -> SquarefreeMonomial {
        let mut vars = self.0.clone();
        vars.extend_from_slice(&other.0);
        vars.sort_unstable();
        vars.dedup();
        SquarefreeMonomial(vars)
    }

    pub fn is_coprime(&self, other: &SquarefreeMonomial) -> bool {
        !self.0.iter().any(|&x| other.contains(x))
    }

    /// For an edge monomial, the endpoints.
    pub fn as_edge(&self) -> Option<(usize, usize)> {
        match self.0.as_slice() {
            &[u, v] => Some((u, v)),
            _ => None,
        }
    }

    /// Render as `x3*x7`, using `labels[i]` when available.
    pub fn render(&self, labels: &[String]) -> String {
        self.0
            .iter()
            .map(|&x| labels.get(x).cloned().unwrap_or_else(|| format!("x{x}")))
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl TryFrom<Vec<usize>> for SquarefreeMonomial {
    type Error = Error;

    fn try_from(vars: Vec<usize>) -> Result<Self> {
        SquarefreeMonomial::new(vars)
    }
}

impl From<SquarefreeMonomial> for Vec<usize> {
    fn from(m: SquarefreeMonomial) -> Vec<usize> {
        m.0
    }
}

impl fmt::Display for SquarefreeMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
