//! Text formats: edge lists for forests and monomial lists for resolutions.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::Forest;
use crate::ideal::MonomialIdeal;
use crate::lyubeznik::Monomial;

fn content(line: &str) -> &str {
    line.split('#').next().unwrap_or("").trim()
}

#[derive(Default)]
struct Names {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn get(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.labels.push(name.to_string());
        self.index.insert(name.to_string(), self.labels.len() - 1);
        self.labels.len() - 1
    }
}

/// One edge `label1 label2` per line; `#` starts a comment, blank lines are
/// skipped. Vertices are numbered by first appearance.
pub fn parse_edge_list(text: &str) -> Result<Forest> {
    let mut names = Names::default();
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: k + 1,
                message: format!("expected two vertex labels, found {}", tokens.len()),
            });
        }
        edges.push((names.get(tokens[0]), names.get(tokens[1])));
    }
    Forest::with_labels(names.labels, &edges)
}

pub fn write_edge_list(forest: &Forest) -> String {
    forest
        .edges()
        .iter()
        .map(|&(u, v)| format!("{} {}\n", forest.label(u), forest.label(v)))
        .collect()
}

/// A parsed generator list with the variable names in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generators {
    pub monomials: Vec<Monomial>,
    pub labels: Vec<String>,
}

/// Either a monomial ideal as JSON (`{"nvars": .., "generators": [[0, 1], ..]}`)
/// or text with monomials such as `a*b` or `x^2*y`, separated by whitespace or
/// commas, `#` comments allowed. Variables are numbered by first appearance.
pub fn parse_generators(text: &str) -> Result<Generators> {
    if text.trim_start().starts_with('{') {
        let ideal: MonomialIdeal = serde_json::from_str(text)
            .map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })?;
        return Ok(Generators {
            monomials: ideal.generators().iter().map(Monomial::from).collect(),
            labels: (0..ideal.nvars()).map(|i| format!("x{i}")).collect(),
        });
    }
    let mut names = Names::default();
    let mut monomials = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = content(raw);
        for word in line.split(|c: char| c.is_whitespace() || c == ',').filter(|w| !w.is_empty()) {
            monomials.push(parse_monomial(word, &mut names).map_err(|message| Error::Parse { line: k + 1, message })?);
        }
    }
    if monomials.is_empty() {
        return Err(Error::Parse { line: 0, message: "no monomials found".into() });
    }
    Ok(Generators { monomials, labels: names.labels })
}

fn parse_monomial(word: &str, names: &mut Names) -> std::result::Result<Monomial, String> {
    let mut exps = Vec::new();
    for factor in word.split('*') {
        let (name, exp) = match factor.split_once('^') {
            Some((n, e)) => {
                let e: u32 = e.parse().map_err(|_| format!("bad exponent in `{word}`"))?;
                (n, e)
            }
            None => (factor, 1),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') || name.starts_with(|c: char| c.is_ascii_digit()) {
            return Err(format!("bad variable name in `{word}`"));
        }
        if exp == 0 {
            return Err(format!("zero exponent in `{word}`"));
        }
        exps.push((names.get(name), exp));
    }
    Ok(Monomial::from_exponents(exps))
}
