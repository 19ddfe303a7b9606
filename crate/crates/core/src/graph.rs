//! Forests on dense vertex indices, with the structural queries the ideal
//! computations depend on: degrees, components, stretchedness and the choice
//! of splitting vertex used by the projective-dimension recursion.

use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An unordered edge, stored with the smaller endpoint first.
pub type Edge = (usize, usize);

pub(crate) fn normalize(u: usize, v: usize) -> Edge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub label: String,
}

/// An undirected acyclic simple graph. Acyclicity is checked when the value
/// is constructed, so every `Forest` in circulation is a forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Forest {
    labels: Vec<String>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

/// Connectivity classes of a forest. Every vertex gets a component id,
/// isolated vertices included; `component_edge_sets[c]` lists the edges of
/// component `c` (empty for an isolated vertex).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComponentPartition {
    pub assignment: Vec<usize>,
    pub component_edge_sets: Vec<Vec<Edge>>,
}

impl ComponentPartition {
    pub fn len(&self) -> usize {
        self.component_edge_sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.component_edge_sets.is_empty()
    }

    pub fn vertices_of(&self, component: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&v| self.assignment[v] == component)
            .collect()
    }
}

/// Output of [`Forest::select_splitting_vertex`]: the vertex and its
/// neighbours, leaves first (by index), the one possible non-leaf last.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingVertex {
    pub vertex: usize,
    pub neighbors: Vec<usize>,
}

impl SplittingVertex {
    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    /// The last listed neighbour (`v_n`).
    pub fn last(&self) -> usize {
        *self.neighbors.last().expect("a splitting vertex has a neighbour")
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        true
    }
}

impl Forest {
    /// Builds a forest on `n` vertices labelled `x0 .. x{n-1}`.
    pub fn new(n: usize, edges: &[Edge]) -> Result<Forest> {
        Forest::with_labels((0..n).map(|i| format!("x{i}")).collect(), edges)
    }

    pub fn with_labels(labels: Vec<String>, edges: &[Edge]) -> Result<Forest> {
        let n = labels.len();
        let mut seen_labels = BTreeSet::new();
        for label in &labels {
            if !seen_labels.insert(label.as_str()) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        let mut uf = UnionFind::new(n);
        let mut set = BTreeSet::new();
        for &(u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            let e = normalize(u, v);
            if !set.insert(e) {
                return Err(Error::DuplicateEdge(e.0, e.1));
            }
            if !uf.union(u, v) {
                return Err(Error::CycleDetected(e.0, e.1));
            }
        }
        let edges: Vec<Edge> = set.into_iter().collect();
        let mut adjacency = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(Forest { labels, edges, adjacency })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Edges in increasing lexicographic order.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&normalize(u, v)).is_ok()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.labels
            .iter()
            .enumerate()
            .map(|(id, label)| Vertex { id, label: label.clone() })
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Number of edges incident to `v`. Panics if `v >= n`.
    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn components(&self) -> ComponentPartition {
        let n = self.n();
        let mut assignment = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if assignment[start] != usize::MAX {
                continue;
            }
            assignment[start] = count;
            queue.push_back(start);
            while let Some(u) = queue.pop_front() {
                for &w in &self.adjacency[u] {
                    if assignment[w] == usize::MAX {
                        assignment[w] = count;
                        queue.push_back(w);
                    }
                }
            }
            count += 1;
        }
        let mut component_edge_sets = vec![Vec::new(); count];
        for &(u, v) in &self.edges {
            component_edge_sets[assignment[u]].push((u, v));
        }
        ComponentPartition { assignment, component_edge_sets }
    }

    /// Edge sets of the components that carry at least one edge.
    pub fn nontrivial_components(&self) -> Vec<Vec<Edge>> {
        self.components()
            .component_edge_sets
            .into_iter()
            .filter(|c| !c.is_empty())
            .collect()
    }

    /// Every edge has an endpoint of degree at most 2.
    pub fn is_stretched(&self) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| self.degree(u) <= 2 || self.degree(v) <= 2)
    }

    /// All vertices with at least two neighbours of which all but at most one
    /// are leaves, in increasing index order.
    pub fn splitting_candidates(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| {
                self.degree(v) >= 2
                    && self.adjacency[v].iter().filter(|&&w| self.degree(w) > 1).count() <= 1
            })
            .collect()
    }

    /// The splitting vertex of the projective-dimension recursion: the
    /// smallest-index vertex of degree >= 2 all of whose neighbours but at
    /// most one are leaves; when every degree is at most 1, the smaller
    /// endpoint of the first edge.
    pub fn select_splitting_vertex(&self) -> Result<SplittingVertex> {
        let &(u0, v0) = self.edges.first().ok_or(Error::NoEdges)?;
        match self.splitting_candidates().first() {
            Some(&v) => Ok(self.splitting_neighbors(v)),
            None => Ok(SplittingVertex { vertex: u0, neighbors: vec![v0] }),
        }
    }

    /// Neighbours of `v` ordered leaves first (by index), non-leaves last.
    pub fn splitting_neighbors(&self, v: usize) -> SplittingVertex {
        let (mut leaves, rest): (Vec<usize>, Vec<usize>) =
            self.adjacency[v].iter().partition(|&&w| self.degree(w) == 1);
        leaves.extend(rest);
        SplittingVertex { vertex: v, neighbors: leaves }
    }

    /// The same vertex set restricted to the given edges (which must be edges
    /// of `self`).
    pub fn with_edges(&self, edges: &[Edge]) -> Forest {
        let mut edges: Vec<Edge> = edges.iter().map(|&(u, v)| normalize(u, v)).collect();
        edges.sort_unstable();
        edges.dedup();
        debug_assert!(edges.iter().all(|&(u, v)| self.has_edge(u, v)));
        let mut adjacency = vec![Vec::new(); self.n()];
        for &(u, v) in &edges {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Forest { labels: self.labels.clone(), edges, adjacency }
    }

    /// Subgraph induced on the complement of `removed`; removed vertices stay
    /// in the vertex set as isolated vertices so that indices are stable.
    pub fn without_vertices(&self, removed: &[usize]) -> Forest {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|(u, v)| !removed.contains(u) && !removed.contains(v))
            .collect();
        self.with_edges(&edges)
    }

    /// Disjoint union; the vertices of `other` are shifted by `self.n()`.
    /// Labels that clash get a `'` suffix.
    pub fn disjoint_union(&self, other: &Forest) -> Forest {
        let offset = self.n();
        let mut used: BTreeSet<String> = self.labels.iter().cloned().collect();
        let mut labels = self.labels.clone();
        for label in &other.labels {
            let mut candidate = label.clone();
            while used.contains(&candidate) {
                candidate.push('\'');
            }
            used.insert(candidate.clone());
            labels.push(candidate);
        }
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .chain(other.edges.iter().map(|&(u, v)| (u + offset, v + offset)))
            .collect();
        Forest::with_labels(labels, &edges).expect("disjoint union of forests is a forest")
    }

    /// Index lookup by label.
    pub fn label_index(&self) -> HashMap<&str, usize> {
        self.labels.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect()
    }
}

/// Star with `r` edges: centre `c`, leaves `x1 .. xr`.
pub fn make_star(r: usize) -> Result<Forest> {
    if r < 1 {
        return Err(Error::Domain(format!("star needs r >= 1, got {r}")));
    }
    let labels = std::iter::once("c".to_string())
        .chain((1..=r).map(|i| format!("x{i}")))
        .collect();
    let edges: Vec<Edge> = (1..=r).map(|i| (0, i)).collect();
    Forest::with_labels(labels, &edges)
}

/// Path `x1 - x2 - ... - xr` on `r` vertices.
pub fn make_line(r: usize) -> Result<Forest> {
    if r < 2 {
        return Err(Error::Domain(format!("line graph needs r >= 2, got {r}")));
    }
    let labels = (1..=r).map(|i| format!("x{i}")).collect();
    let edges: Vec<Edge> = (0..r - 1).map(|i| (i, i + 1)).collect();
    Forest::with_labels(labels, &edges)
}

/// Double star on `a, b, x1..xr, y1..ys`: the edge `ab`, the edges `a xi`
/// and the edges `b yj`. Vertex indices: `a = 0`, `b = 1`, `xi = 1 + i`,
/// `yj = 1 + r + j`.
pub fn make_double_star(r: usize, s: usize) -> Result<Forest> {
    let labels = ["a".to_string(), "b".to_string()]
        .into_iter()
        .chain((1..=r).map(|i| format!("x{i}")))
        .chain((1..=s).map(|j| format!("y{j}")))
        .collect();
    let edges: Vec<Edge> = std::iter::once((0, 1))
        .chain((1..=r).map(|i| (0, 1 + i)))
        .chain((1..=s).map(|j| (1, 1 + r + j)))
        .collect();
    Forest::with_labels(labels, &edges)
}
