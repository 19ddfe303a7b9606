//! Tree-like systems: sequences `q_0, q_1, ..` of squarefree monomials or
//! sums of two of them, where every two-term element `a + b` has a summand of
//! some earlier element dividing `a * b`.
//!
//! Operations that rely on the predecessor of an element being unique
//! require the support to be the edge-monomial set of a forest.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Forest;
use crate::monomial::SquarefreeMonomial;

/// `left` alone, or `left + right`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<SquarefreeMonomial>", into = "Vec<SquarefreeMonomial>")]
pub struct TlsElement {
    left: SquarefreeMonomial,
    right: Option<SquarefreeMonomial>,
}

impl TlsElement {
    pub fn isolated(a: SquarefreeMonomial) -> Self {
        TlsElement { left: a, right: None }
    }

    pub fn pair(a: SquarefreeMonomial, b: SquarefreeMonomial) -> Result<Self> {
        if a == b {
            return Err(Error::InvalidSystem(format!("element {a} + {a} repeats its summand")));
        }
        Ok(TlsElement { left: a, right: Some(b) })
    }

    pub fn left(&self) -> &SquarefreeMonomial {
        &self.left
    }

    pub fn right(&self) -> Option<&SquarefreeMonomial> {
        self.right.as_ref()
    }

    pub fn is_isolated(&self) -> bool {
        self.right.is_none()
    }

    pub fn summands(&self) -> impl Iterator<Item = &SquarefreeMonomial> {
        std::iter::once(&self.left).chain(self.right.as_ref())
    }

    pub fn contains(&self, m: &SquarefreeMonomial) -> bool {
        self.summands().any(|s| s == m)
    }

    /// The summand other than `m`, if `m` is one of the two.
    pub fn other(&self, m: &SquarefreeMonomial) -> Option<&SquarefreeMonomial> {
        match &self.right {
            Some(b) if &self.left == m => Some(b),
            Some(b) if b == m => Some(&self.left),
            _ => None,
        }
    }

    fn swap_monomials(&self, x: &SquarefreeMonomial, y: &SquarefreeMonomial) -> TlsElement {
        let sw = |m: &SquarefreeMonomial| {
            if m == x {
                y.clone()
            } else if m == y {
                x.clone()
            } else {
                m.clone()
            }
        };
        TlsElement { left: sw(&self.left), right: self.right.as_ref().map(sw) }
    }

    pub fn render(&self, labels: &[String]) -> String {
        match &self.right {
            None => self.left.render(labels),
            Some(b) => format!("{} + {}", self.left.render(labels), b.render(labels)),
        }
    }
}

impl TryFrom<Vec<SquarefreeMonomial>> for TlsElement {
    type Error = Error;

    fn try_from(mut v: Vec<SquarefreeMonomial>) -> Result<Self> {
        match v.len() {
            1 => Ok(TlsElement::isolated(v.remove(0))),
            2 => {
                let b = v.pop().unwrap();
                TlsElement::pair(v.pop().unwrap(), b)
            }
            k => Err(Error::InvalidSystem(format!("an element has 1 or 2 summands, got {k}"))),
        }
    }
}

impl From<TlsElement> for Vec<SquarefreeMonomial> {
    fn from(e: TlsElement) -> Self {
        std::iter::once(e.left).chain(e.right).collect()
    }
}

impl fmt::Display for TlsElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SystemJson", into = "SystemJson")]
pub struct TreeLikeSystem {
    nvars: usize,
    elements: Vec<TlsElement>,
}

#[derive(Serialize, Deserialize)]
struct SystemJson {
    nvars: usize,
    elements: Vec<TlsElement>,
}

impl TryFrom<SystemJson> for TreeLikeSystem {
    type Error = Error;

    fn try_from(j: SystemJson) -> Result<Self> {
        TreeLikeSystem::new(j.nvars, j.elements)
    }
}

impl From<TreeLikeSystem> for SystemJson {
    fn from(s: TreeLikeSystem) -> Self {
        SystemJson { nvars: s.nvars, elements: s.elements }
    }
}

/// First reason a sequence fails to be a tree-like system.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    RepeatedSummand { position: usize, monomial: SquarefreeMonomial },
    MissingDivisor { position: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RepeatedSummand { position, monomial } => {
                write!(f, "element {position}: summand {monomial} already used")
            }
            Violation::MissingDivisor { position } => {
                write!(f, "element {position}: no earlier summand divides the product of its summands")
            }
        }
    }
}

/// Positions of a strict subtree, head first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrictChain {
    pub positions: Vec<usize>,
}

impl StrictChain {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn head(&self) -> usize {
        self.positions[0]
    }
}

impl TreeLikeSystem {
    /// Structural checks only (variable range). Use [`validate`](Self::validate)
    /// for the tree-like condition.
    pub fn new(nvars: usize, elements: Vec<TlsElement>) -> Result<Self> {
        for e in &elements {
            for m in e.summands() {
                if m.max_var() >= nvars {
                    return Err(Error::VariableOutOfRange { var: m.max_var(), nvars });
                }
            }
        }
        Ok(TreeLikeSystem { nvars, elements })
    }

    pub fn empty(nvars: usize) -> Self {
        TreeLikeSystem { nvars, elements: Vec::new() }
    }

    /// All edges as isolated summands.
    pub fn isolated_edges(nvars: usize, edges: &[(usize, usize)]) -> Self {
        let elements = edges
            .iter()
            .map(|&(u, v)| TlsElement::isolated(SquarefreeMonomial::edge(u, v)))
            .collect();
        TreeLikeSystem { nvars, elements }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn elements(&self) -> &[TlsElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn summands(&self) -> impl Iterator<Item = &SquarefreeMonomial> {
        self.elements.iter().flat_map(|e| e.summands())
    }

    pub fn support(&self) -> BTreeSet<SquarefreeMonomial> {
        self.summands().cloned().collect()
    }

    /// Position of the element containing `m`.
    pub fn position_of(&self, m: &SquarefreeMonomial) -> Option<usize> {
        self.elements.iter().position(|e| e.contains(m))
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let mut seen: HashSet<&SquarefreeMonomial> = HashSet::new();
        for (i, e) in self.elements.iter().enumerate() {
            for m in e.summands() {
                if !seen.insert(m) {
                    return Err(Violation::RepeatedSummand { position: i, monomial: m.clone() });
                }
            }
        }
        for (i, e) in self.elements.iter().enumerate() {
            if let Some(b) = &e.right {
                let ok = self.elements[..i]
                    .iter()
                    .flat_map(|p| p.summands())
                    .any(|d| d.divides_product(&e.left, b));
                if !ok {
                    return Err(Violation::MissingDivisor { position: i });
                }
            }
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Every summand is quadratic and the summands form the edge set of a
    /// forest (no repeats, no cycles).
    pub fn check_forest_support(&self) -> Result<()> {
        let mut edges = Vec::new();
        for m in self.summands() {
            match m.as_edge() {
                Some(e) => edges.push(e),
                None => return Err(Error::NotForestSupport(format!("{m} is not an edge monomial"))),
            }
        }
        Forest::new(self.nvars, &edges)
            .map(|_| ())
            .map_err(|e| Error::NotForestSupport(e.to_string()))
    }

    /// The unique earlier element containing the edge that lies between the
    /// two summands of element `i`.
    pub fn predecessor(&self, i: usize) -> Result<usize> {
        self.check_position(i)?;
        self.check_forest_support()?;
        self.predecessor_unchecked(i)
    }

    /// As [`predecessor`](Self::predecessor) without re-checking the support.
    pub(crate) fn predecessor_unchecked(&self, i: usize) -> Result<usize> {
        let (_, d) = self.between_summand(i)?;
        Ok(d)
    }

    /// The summand dividing `a_i b_i` and the position of its element.
    pub(crate) fn between_summand(&self, i: usize) -> Result<(SquarefreeMonomial, usize)> {
        let e = &self.elements[i];
        let Some(b) = &e.right else {
            return Err(Error::IsolatedElement(i));
        };
        let mut found: Option<(SquarefreeMonomial, usize)> = None;
        for (j, p) in self.elements[..i].iter().enumerate() {
            for d in p.summands() {
                if d.divides_product(&e.left, b) {
                    if found.is_some() {
                        return Err(Error::NotForestSupport(format!(
                            "element {i} has more than one earlier divisor"
                        )));
                    }
                    found = Some((d.clone(), j));
                }
            }
        }
        found.ok_or_else(|| Error::InvalidSystem(format!("element {i} has no earlier divisor")))
    }

    fn check_position(&self, i: usize) -> Result<()> {
        if i >= self.len() {
            return Err(Error::PositionOutOfRange { position: i, len: self.len() });
        }
        Ok(())
    }

    /// Elements whose predecessor is `i`.
    pub fn followers(&self, i: usize) -> Result<Vec<usize>> {
        self.check_position(i)?;
        self.check_forest_support()?;
        let mut out = Vec::new();
        for k in i + 1..self.len() {
            if !self.elements[k].is_isolated() && self.predecessor_unchecked(k)? == i {
                out.push(k);
            }
        }
        Ok(out)
    }

    /// Walks predecessors from `i` back to an isolated summand.
    pub fn strict_subtree_ending_at(&self, i: usize) -> Result<StrictChain> {
        self.check_position(i)?;
        self.check_forest_support()?;
        self.chain_unchecked(i)
    }

    fn chain_unchecked(&self, i: usize) -> Result<StrictChain> {
        let mut positions = vec![i];
        let mut cur = i;
        while !self.elements[cur].is_isolated() {
            cur = self.predecessor_unchecked(cur)?;
            positions.push(cur);
        }
        positions.reverse();
        Ok(StrictChain { positions })
    }

    /// Partition into maximal strict chains, ordered by head position. Fails
    /// with `NotStretched` when some element has two followers.
    pub fn decompose_strict(&self) -> Result<Vec<StrictChain>> {
        self.check_forest_support()?;
        let n = self.len();
        let mut follower: Vec<Option<usize>> = vec![None; n];
        for k in 0..n {
            if self.elements[k].is_isolated() {
                continue;
            }
            let p = self.predecessor_unchecked(k)?;
            if follower[p].replace(k).is_some() {
                return Err(Error::NotStretched);
            }
        }
        let mut chains = Vec::new();
        for head in 0..n {
            if !self.elements[head].is_isolated() {
                continue;
            }
            let mut positions = vec![head];
            let mut cur = head;
            while let Some(next) = follower[cur] {
                positions.push(next);
                cur = next;
            }
            chains.push(StrictChain { positions });
        }
        Ok(chains)
    }

    /// Consecutive elements are predecessor and follower, and only the head
    /// is isolated.
    pub fn is_strict(&self) -> bool {
        if !self.is_valid() || self.check_forest_support().is_err() {
            return false;
        }
        (1..self.len()).all(|i| {
            !self.elements[i].is_isolated() && self.predecessor_unchecked(i).ok() == Some(i - 1)
        })
    }

    /// The elements at `positions`, in the given order.
    pub fn subsequence(&self, positions: &[usize]) -> Result<TreeLikeSystem> {
        let mut seen = HashSet::new();
        let mut elements = Vec::with_capacity(positions.len());
        for &p in positions {
            self.check_position(p)?;
            if !seen.insert(p) {
                return Err(Error::InvalidSystem(format!("position {p} listed twice")));
            }
            elements.push(self.elements[p].clone());
        }
        Ok(TreeLikeSystem { nvars: self.nvars, elements })
    }

    fn residual(&self, positions: &[usize]) -> Vec<TlsElement> {
        let drop: HashSet<usize> = positions.iter().copied().collect();
        self.elements
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, e)| e.clone())
            .collect()
    }

    /// Elements containing an edge monomial of the component with the given
    /// vertex set, in their original order.
    pub fn restrict_to_component(&self, vertices: &[usize]) -> Result<TreeLikeSystem> {
        self.check_forest_support()?;
        let inside: HashSet<usize> = vertices.iter().copied().collect();
        let positions: Vec<usize> = (0..self.len())
            .filter(|&i| {
                self.elements[i]
                    .summands()
                    .any(|m| m.vars().iter().all(|x| inside.contains(x)))
            })
            .collect();
        let sub = self.subsequence(&positions)?;
        sub.validate()
            .map_err(|v| Error::InvalidSystem(format!("restriction is not tree-like: {v}")))?;
        Ok(sub)
    }

    /// Moves the subtree at `positions` to the front, keeping its order, and
    /// lists the remaining elements after it in their original order.
    pub fn push_to_top(&self, positions: &[usize]) -> Result<TreeLikeSystem> {
        let pushed = self.subsequence(positions)?;
        if let Err(v) = pushed.validate() {
            return Err(Error::NotASubtree(v.to_string()));
        }
        let mut elements = pushed.elements;
        elements.extend(self.residual(positions));
        let out = TreeLikeSystem { nvars: self.nvars, elements };
        out.validate().map_err(|v| Error::InvalidSystem(v.to_string()))?;
        Ok(out)
    }

    /// Drops the elements at `positions` and puts `replacement` in front of
    /// the rest. The replacement must have exactly the dropped summands as
    /// its support.
    pub fn replace_subsequence(&self, positions: &[usize], replacement: &TreeLikeSystem) -> Result<TreeLikeSystem> {
        let removed = self.subsequence(positions)?;
        if removed.support() != replacement.support() || replacement.summands().count() != replacement.support().len() {
            return Err(Error::SupportMismatch);
        }
        let mut elements = replacement.elements.clone();
        elements.extend(self.residual(positions));
        let out = TreeLikeSystem { nvars: self.nvars.max(replacement.nvars), elements };
        out.validate().map_err(|v| Error::InvalidSystem(v.to_string()))?;
        Ok(out)
    }

    /// `self` followed by `other`; the supports must be disjoint.
    pub fn juxtapose(&self, other: &TreeLikeSystem) -> Result<TreeLikeSystem> {
        let mine = self.support();
        if other.summands().any(|m| mine.contains(m)) {
            return Err(Error::OverlappingSupport);
        }
        let mut elements = self.elements.clone();
        elements.extend(other.elements.iter().cloned());
        Ok(TreeLikeSystem { nvars: self.nvars.max(other.nvars), elements })
    }

    /// Exchanges the monomials `x` and `y` wherever they occur. The result
    /// is generally not in a valid order; see [`repair_order`](Self::repair_order).
    pub fn interchange(&self, x: &SquarefreeMonomial, y: &SquarefreeMonomial) -> TreeLikeSystem {
        TreeLikeSystem {
            nvars: self.nvars,
            elements: self.elements.iter().map(|e| e.swap_monomials(x, y)).collect(),
        }
    }

    /// Stable reordering into a valid system: repeatedly emit the earliest
    /// element that is isolated or has a divisor among the emitted ones.
    pub fn repair_order(&self) -> Result<TreeLikeSystem> {
        let n = self.len();
        let mut placed = vec![false; n];
        let mut emitted: Vec<&SquarefreeMonomial> = Vec::new();
        let mut order = Vec::with_capacity(n);
        while order.len() < n {
            let next = (0..n).find(|&i| {
                !placed[i]
                    && match &self.elements[i].right {
                        None => true,
                        Some(b) => emitted.iter().any(|d| d.divides_product(&self.elements[i].left, b)),
                    }
            });
            let Some(i) = next else {
                return Err(Error::InvalidSystem("no valid ordering exists".into()));
            };
            placed[i] = true;
            emitted.extend(self.elements[i].summands());
            order.push(i);
        }
        let out = self.subsequence(&order)?;
        out.validate().map_err(|v| Error::InvalidSystem(v.to_string()))?;
        Ok(out)
    }

    /// Tree-inversion of the strict subtree ending at `end`, with `a_r` the
    /// chosen summand of the last element. Returns the chain that was
    /// inverted and the inverted system, which starts at the summand of the
    /// second-to-last chain element lying between the two summands of `end`.
    pub fn invert_chain_ending_at(&self, end: usize, a_r: &SquarefreeMonomial) -> Result<(StrictChain, TreeLikeSystem)> {
        self.check_position(end)?;
        self.check_forest_support()?;
        let chain = self.chain_unchecked(end)?;
        let r = chain.len() - 1;
        let last = &self.elements[end];
        let b_r = last
            .other(a_r)
            .ok_or_else(|| Error::PreconditionViolated(format!("{a_r} is not a summand of element {end}")))?
            .clone();
        let mut a = vec![a_r.clone()];
        let mut b = vec![b_r];
        for t in (1..=r).rev() {
            let (d, _) = self.between_summand(chain.positions[t])?;
            let prev = &self.elements[chain.positions[t - 1]];
            if t > 1 {
                let other = prev
                    .other(&d)
                    .ok_or_else(|| Error::Internal("chain element lost its summand".into()))?
                    .clone();
                b.push(other);
            }
            a.push(d);
        }
        a.reverse();
        b.reverse();
        let inverted = tree_inversion(&a, &b)?;
        let inverted = TreeLikeSystem { nvars: self.nvars.max(inverted.nvars), elements: inverted.elements };
        Ok((chain, inverted))
    }

    pub fn render_text(&self, labels: &[String]) -> String {
        let mut out = String::new();
        for e in &self.elements {
            out.push_str(&e.render(labels));
            out.push('\n');
        }
        out
    }
}

/// A strict tree-like system with support `{a_0..a_r, b_1..b_r}` starting at
/// `a_{r-1}`, given quadratic squarefree monomials with `a_{i-1} | a_i b_i`.
pub fn tree_inversion(a: &[SquarefreeMonomial], b: &[SquarefreeMonomial]) -> Result<TreeLikeSystem> {
    let pre = |msg: String| Err(Error::PreconditionViolated(msg));
    if a.len() < 3 {
        return pre(format!("need r >= 2, got r = {}", a.len() as isize - 1));
    }
    let r = a.len() - 1;
    if b.len() != r {
        return pre(format!("expected {r} right summands, got {}", b.len()));
    }
    let all: Vec<&SquarefreeMonomial> = a.iter().chain(b).collect();
    if let Some(m) = all.iter().find(|m| m.degree() != 2) {
        return pre(format!("{m} is not quadratic"));
    }
    let distinct: HashSet<&SquarefreeMonomial> = all.iter().copied().collect();
    if distinct.len() != all.len() {
        return pre("monomials are not pairwise distinct".into());
    }
    for i in 1..=r {
        if !a[i - 1].divides_product(&a[i], &b[i - 1]) {
            return pre(format!("a_{} does not divide a_{i} b_{i}", i - 1));
        }
    }
    let elements = invert(a.to_vec(), b.to_vec());
    let nvars = all.iter().map(|m| m.max_var()).max().unwrap_or(0) + 1;
    Ok(TreeLikeSystem { nvars, elements })
}

/// `a` has `r + 1` entries and `b` has `r`, with `b[i - 1]` paired with `a[i]`.
fn invert(mut a: Vec<SquarefreeMonomial>, mut b: Vec<SquarefreeMonomial>) -> Vec<TlsElement> {
    let r = a.len() - 1;
    // Base step on (a_{r-2}; a_{r-1}, a_r; b_{r-1}, b_r).
    let x = *a[r - 2]
        .vars()
        .iter()
        .find(|v| a[r - 1].contains(**v))
        .expect("consecutive chain summands share a variable");
    if !a[r].contains(x) {
        std::mem::swap(&mut a[r], &mut b[r - 1]);
    }
    let head = TlsElement::isolated(a[r - 1].clone());
    let second = TlsElement { left: a[r - 2].clone(), right: Some(b[r - 1].clone()) };
    if r == 2 {
        let third = TlsElement { left: a[2].clone(), right: Some(b[0].clone()) };
        return vec![head, second, third];
    }
    // Recurse on a_0..a_{r-2}, a_r with b_1..b_{r-2}, b_{r-1}.
    let a_r = a.pop().unwrap();
    a.pop();
    a.push(a_r);
    b.pop();
    let rest = invert(a, b);
    let mut out = vec![head, second];
    out.extend(rest.into_iter().skip(1));
    out
}
