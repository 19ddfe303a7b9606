//! Projective dimension of `R/I(T)` for a forest `T`.
//!
//! The general routine splits into connected components (pd is additive) and
//! runs the leaf recursion `pd I(T) = max{pd I(T'), pd I(T'') + n}`, where
//! `v` is a splitting vertex with neighbours `v_1, .., v_n`, `T'` drops the
//! leaf `v_1` and `T''` drops `v` together with all its neighbours. A forest
//! whose vertices all have degree at most one is a complete intersection and
//! has pd equal to its number of edges.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Edge, Forest, SplittingVertex};

/// A pd value with the recursion that produced it. `trace` is a DAG in
/// topological order: every step refers only to earlier steps, and the last
/// step is the root. Shared sub-forests appear once.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdResult {
    pub value: usize,
    pub trace: Vec<PdStep>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdStep {
    pub id: usize,
    pub edges: usize,
    #[serde(flatten)]
    pub kind: PdStepKind,
    pub value: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PdStepKind {
    Edgeless,
    /// All degrees at most one.
    Matching,
    Components { parts: Vec<usize> },
    Split {
        vertex: usize,
        n: usize,
        removed_leaf: usize,
        t_prime: usize,
        t_double_prime: usize,
    },
}

impl PdResult {
    /// Recomputes every step from its children and checks the stored values.
    pub fn replay(&self) -> Result<usize> {
        let mut values: Vec<usize> = Vec::with_capacity(self.trace.len());
        for (i, step) in self.trace.iter().enumerate() {
            let child = |c: usize| {
                if c < i {
                    Ok(values[c])
                } else {
                    Err(Error::Internal(format!("step {i} refers forward to {c}")))
                }
            };
            let value = match &step.kind {
                PdStepKind::Edgeless => 0,
                PdStepKind::Matching => step.edges,
                PdStepKind::Components { parts } => {
                    parts.iter().map(|&c| child(c)).sum::<Result<usize>>()?
                }
                PdStepKind::Split { n, t_prime, t_double_prime, .. } => {
                    child(*t_prime)?.max(child(*t_double_prime)? + n)
                }
            };
            if value != step.value {
                return Err(Error::Internal(format!(
                    "step {i} stores {} but replays to {value}",
                    step.value
                )));
            }
            values.push(value);
        }
        match values.last() {
            Some(&v) if v == self.value => Ok(v),
            _ => Err(Error::Internal("root value mismatch".into())),
        }
    }

    /// Indented rendering of the recursion tree; repeated sub-forests are
    /// shown once and referenced by id afterwards.
    pub fn render_text(&self, labels: &[String]) -> String {
        let mut out = String::new();
        let mut shown = vec![false; self.trace.len()];
        if !self.trace.is_empty() {
            self.render_step(self.trace.len() - 1, 0, labels, &mut shown, &mut out);
        }
        out
    }

    fn render_step(&self, id: usize, depth: usize, labels: &[String], shown: &mut [bool], out: &mut String) {
        let step = &self.trace[id];
        let pad = "  ".repeat(depth);
        let name = |v: usize| labels.get(v).cloned().unwrap_or_else(|| format!("x{v}"));
        if shown[id] {
            let _ = writeln!(out, "{pad}#{id}: pd = {} (see above)", step.value);
            return;
        }
        shown[id] = true;
        match &step.kind {
            PdStepKind::Edgeless => {
                let _ = writeln!(out, "{pad}#{id}: no edges, pd = 0");
            }
            PdStepKind::Matching => {
                let _ = writeln!(out, "{pad}#{id}: matching of {} edges, pd = {}", step.edges, step.value);
            }
            PdStepKind::Components { parts } => {
                let _ = writeln!(out, "{pad}#{id}: {} components, pd = {}", parts.len(), step.value);
                for &c in parts {
                    self.render_step(c, depth + 1, labels, shown, out);
                }
            }
            PdStepKind::Split { vertex, n, removed_leaf, t_prime, t_double_prime } => {
                let _ = writeln!(
                    out,
                    "{pad}#{id}: split at {} (n = {n}, leaf {}), pd = max({}, {} + {n}) = {}",
                    name(*vertex),
                    name(*removed_leaf),
                    self.trace[*t_prime].value,
                    self.trace[*t_double_prime].value,
                    step.value
                );
                self.render_step(*t_prime, depth + 1, labels, shown, out);
                self.render_step(*t_double_prime, depth + 1, labels, shown, out);
            }
        }
    }
}

/// Memoized evaluator keyed on the (sorted) edge set of a sub-forest of a
/// fixed base forest.
pub(crate) struct PdMemo<'a> {
    base: &'a Forest,
    cache: HashMap<Vec<Edge>, usize>,
    steps: Vec<PdStep>,
}

pub(crate) type Chooser<'c> = dyn FnMut(&[SplittingVertex]) -> usize + 'c;

impl<'a> PdMemo<'a> {
    pub(crate) fn new(base: &'a Forest) -> Self {
        PdMemo { base, cache: HashMap::new(), steps: Vec::new() }
    }

    /// pd of the sub-forest on `edges` (edges of the base forest).
    pub(crate) fn value(&mut self, edges: &[Edge]) -> usize {
        let mut first = |_: &[SplittingVertex]| 0;
        let id = self.eval(edges, &mut first);
        self.steps[id].value
    }

    fn eval(&mut self, edges: &[Edge], choose: &mut Chooser<'_>) -> usize {
        let mut key = edges.to_vec();
        key.sort_unstable();
        if let Some(&id) = self.cache.get(&key) {
            return id;
        }
        let sub = self.base.with_edges(&key);
        let kind = if key.is_empty() {
            PdStepKind::Edgeless
        } else if (0..sub.n()).all(|v| sub.degree(v) <= 1) {
            PdStepKind::Matching
        } else {
            let comps = sub.nontrivial_components();
            if comps.len() > 1 {
                let parts = comps.iter().map(|c| self.eval(c, choose)).collect();
                PdStepKind::Components { parts }
            } else {
                let candidates = split_candidates(&sub);
                let pick = choose(&candidates).min(candidates.len() - 1);
                let sv = &candidates[pick];
                let leaf = sv.neighbors[0];
                let mut removed = sv.neighbors.clone();
                removed.push(sv.vertex);
                let t_prime = sub.without_vertices(&[leaf]);
                let t_double_prime = sub.without_vertices(&removed);
                let t_prime = self.eval(t_prime.edges(), choose);
                let t_double_prime = self.eval(t_double_prime.edges(), choose);
                PdStepKind::Split { vertex: sv.vertex, n: sv.n(), removed_leaf: leaf, t_prime, t_double_prime }
            }
        };
        let value = match &kind {
            PdStepKind::Edgeless => 0,
            PdStepKind::Matching => key.len(),
            PdStepKind::Components { parts } => parts.iter().map(|&c| self.steps[c].value).sum(),
            PdStepKind::Split { n, t_prime, t_double_prime, .. } => {
                self.steps[*t_prime].value.max(self.steps[*t_double_prime].value + n)
            }
        };
        let id = self.steps.len();
        self.steps.push(PdStep { id, edges: key.len(), kind, value });
        self.cache.insert(key, id);
        id
    }
}

/// Every admissible (vertex, leaf-to-remove) choice for a single component
/// with a vertex of degree >= 2. The first entry is the deterministic
/// default: smallest vertex, lowest-index leaf.
fn split_candidates(sub: &Forest) -> Vec<SplittingVertex> {
    let mut out = Vec::new();
    for v in sub.splitting_candidates() {
        let sv = sub.splitting_neighbors(v);
        let leaves: Vec<usize> = sv.neighbors.iter().copied().filter(|&w| sub.degree(w) == 1).collect();
        for &leaf in &leaves {
            let mut neighbors = vec![leaf];
            neighbors.extend(sv.neighbors.iter().copied().filter(|&w| w != leaf));
            out.push(SplittingVertex { vertex: v, neighbors });
        }
    }
    out
}

pub fn pd_forest(forest: &Forest) -> PdResult {
    pd_forest_with(forest, |_| 0)
}

/// As [`pd_forest`], with `choose` picking among all admissible
/// (splitting vertex, removed leaf) pairs at every split.
pub fn pd_forest_with(forest: &Forest, mut choose: impl FnMut(&[SplittingVertex]) -> usize) -> PdResult {
    let mut memo = PdMemo::new(forest);
    memo.eval(forest.edges(), &mut choose);
    let value = memo.steps.last().map_or(0, |s| s.value);
    // The root is the step for the full edge set; it is pushed last.
    PdResult { value, trace: memo.steps }
}

/// Closed form for the path on `r` vertices: `2s` for `r = 3s, 3s + 1` and
/// `2s + 1` for `r = 3s + 2`.
pub fn pd_line(r: usize) -> Result<usize> {
    if r < 2 {
        return Err(Error::Domain(format!("line graph needs r >= 2, got {r}")));
    }
    let s = r / 3;
    Ok(if r % 3 == 2 { 2 * s + 1 } else { 2 * s })
}

pub fn pd_double_star(r: usize, s: usize) -> Result<usize> {
    if r + s < 1 {
        return Err(Error::Domain("double star needs r + s >= 1".into()));
    }
    Ok(r.max(s) + 1)
}
