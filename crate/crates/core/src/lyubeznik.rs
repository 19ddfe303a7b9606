//! Lyubeznik resolutions of monomial ideals for a fixed generator order: the
//! subcomplex of the Taylor complex spanned by admissible symbols.
//!
//! Symbols are 0-based strictly increasing index tuples into the generator
//! list. `L^0` has the single empty symbol. The matrix of `d_t` has one row
//! per symbol of dimension `t` and one column per symbol of dimension `t-1`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::SquarefreeMonomial;

/// A monomial with arbitrary positive exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Monomial(BTreeMap<usize, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    /// Zero exponents are dropped.
    pub fn from_exponents(exps: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (x, e) in exps {
            if e > 0 {
                *m.entry(x).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn var(x: usize) -> Self {
        Monomial::from_exponents([(x, 1)])
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.0
    }

    pub fn exponent(&self, x: usize) -> u32 {
        self.0.get(&x).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_var(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().all(|(&x, &e)| other.exponent(x) >= e)
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (&x, &e) in &other.0 {
            let slot = m.entry(x).or_insert(0);
            *slot = (*slot).max(e);
        }
        Monomial(m)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_exponents(self.0.iter().chain(&other.0).map(|(&x, &e)| (x, e)))
    }

    /// `self / other`, or `None` if `other` does not divide `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        Some(Monomial::from_exponents(self.0.iter().map(|(&x, &e)| (x, e - other.exponent(x)))))
    }

    /// `x3^2*x5`, with `labels[i]` for variable `i` when available; `1` for
    /// the unit.
    pub fn render(&self, labels: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|(&x, &e)| {
                let name = labels.get(x).cloned().unwrap_or_else(|| format!("x{x}"));
                if e == 1 { name } else { format!("{name}^{e}") }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl From<&SquarefreeMonomial> for Monomial {
    fn from(m: &SquarefreeMonomial) -> Self {
        Monomial::from_exponents(m.vars().iter().map(|&x| (x, 1)))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatrixEntry {
    pub row: usize,
    pub col: usize,
    pub sign: i8,
    pub monomial: Monomial,
}

impl MatrixEntry {
    pub fn degree(&self) -> u32 {
        self.monomial.degree()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<MatrixEntry>,
}

impl SparseMatrix {
    pub fn get(&self, row: usize, col: usize) -> Option<&MatrixEntry> {
        self.entries.iter().find(|e| e.row == row && e.col == col)
    }

    /// Rows of rendered entries (`0`, `b`, `-x1`).
    pub fn render_dense(&self, labels: &[String]) -> Vec<Vec<String>> {
        let mut out = vec![vec!["0".to_string(); self.cols]; self.rows];
        for e in &self.entries {
            let m = e.monomial.render(labels);
            out[e.row][e.col] = if e.sign < 0 { format!("-{m}") } else { m };
        }
        out
    }
}

/// All admissible symbols for the given order, grouped by dimension
/// (`result[t-1]` holds dimension `t`), each group sorted lexicographically.
/// A tuple `(i_1 < ... < i_t)` is admissible when no `f_q` with `q < i_h`
/// divides `lcm(f_{i_h}, ..., f_{i_t})` for any `h < t`.
pub fn admissible_symbols(gens: &[Monomial]) -> Vec<Vec<Vec<usize>>> {
    // Admissibility only constrains suffixes, so symbols grow by prepending.
    fn grow(gens: &[Monomial], suffix: &mut Vec<usize>, lcm: &Monomial, out: &mut Vec<Vec<usize>>) {
        out.push(suffix.iter().rev().copied().collect());
        let head = *suffix.last().expect("nonempty suffix");
        for i in (0..head).rev() {
            let l = gens[i].lcm(lcm);
            if gens[..i].iter().any(|f| f.divides(&l)) {
                continue;
            }
            suffix.push(i);
            grow(gens, suffix, &l, out);
            suffix.pop();
        }
    }
    let found: Vec<Vec<usize>> = (0..gens.len())
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut out = Vec::new();
            grow(gens, &mut vec![k], &gens[k], &mut out);
            out
        })
        .collect();
    let max = found.iter().map(Vec::len).max().unwrap_or(0);
    let mut by_dim = vec![Vec::new(); max];
    for s in found {
        by_dim[s.len() - 1].push(s);
    }
    for group in &mut by_dim {
        group.sort();
    }
    by_dim
}

#[derive(Debug, Clone, Serialize)]
pub struct LyubeznikComplex {
    gens: Vec<Monomial>,
    /// `symbols[t]` for `t = 0..=max_dim`.
    symbols: Vec<Vec<Vec<usize>>>,
    /// `differentials[t-1]` is `d_t`.
    differentials: Vec<SparseMatrix>,
}

impl LyubeznikComplex {
    /// Fails on an empty list, a unit generator or a repeated generator.
    pub fn new(gens: Vec<Monomial>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::Domain("no generators".into()));
        }
        if gens.iter().any(Monomial::is_one) {
            return Err(Error::EmptyMonomial);
        }
        for (i, g) in gens.iter().enumerate() {
            if gens[..i].contains(g) {
                return Err(Error::Domain(format!("generator {g} is repeated")));
            }
        }
        let mut symbols = vec![vec![Vec::new()]];
        symbols.extend(admissible_symbols(&gens));
        let mut c = LyubeznikComplex { gens, symbols, differentials: Vec::new() };
        c.differentials = (1..c.symbols.len()).map(|t| c.build_differential(t)).collect::<Result<_>>()?;
        Ok(c)
    }

    pub fn from_squarefree(gens: &[SquarefreeMonomial]) -> Result<Self> {
        LyubeznikComplex::new(gens.iter().map(Monomial::from).collect())
    }

    fn lcm_of(&self, symbol: &[usize]) -> Monomial {
        symbol.iter().fold(Monomial::one(), |acc, &i| acc.lcm(&self.gens[i]))
    }

    fn build_differential(&self, t: usize) -> Result<SparseMatrix> {
        let index: HashMap<&[usize], usize> =
            self.symbols[t - 1].iter().enumerate().map(|(k, s)| (s.as_slice(), k)).collect();
        let mut entries = Vec::new();
        for (row, sym) in self.symbols[t].iter().enumerate() {
            let full = self.lcm_of(sym);
            for j in 0..t {
                let face: Vec<usize> = sym.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &i)| i).collect();
                let col = *index.get(face.as_slice()).ok_or_else(|| {
                    Error::Internal(format!("face {face:?} of admissible symbol {sym:?} is not admissible"))
                })?;
                let monomial = full
                    .checked_div(&self.lcm_of(&face))
                    .ok_or_else(|| Error::Internal("lcm of a face does not divide the full lcm".into()))?;
                // (-1)^{j+1} with j counted from 1.
                let sign = if j % 2 == 0 { 1 } else { -1 };
                entries.push(MatrixEntry { row, col, sign, monomial });
            }
        }
        Ok(SparseMatrix { rows: self.symbols[t].len(), cols: self.symbols[t - 1].len(), entries })
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.gens
    }

    /// Largest `t` with `L^t != 0`.
    pub fn max_dim(&self) -> usize {
        self.symbols.len() - 1
    }

    pub fn symbols(&self, t: usize) -> &[Vec<usize>] {
        self.symbols.get(t).map_or(&[], |s| s.as_slice())
    }

    /// Ranks of `L^0, L^1, ...`.
    pub fn ranks(&self) -> Vec<usize> {
        self.symbols.iter().map(Vec::len).collect()
    }

    pub fn differential(&self, t: usize) -> Result<&SparseMatrix> {
        if t == 0 || t > self.max_dim() {
            return Err(Error::Domain(format!("no differential d_{t}; dimensions run 1..={}", self.max_dim())));
        }
        Ok(&self.differentials[t - 1])
    }

    pub fn differentials(&self) -> &[SparseMatrix] {
        &self.differentials
    }

    /// First `(t, row, col)` where `d_{t-1} d_t` has a nonzero entry.
    pub fn d_squared_violation(&self) -> Option<(usize, usize, usize)> {
        for t in 2..=self.max_dim() {
            let upper = &self.differentials[t - 1];
            let lower = &self.differentials[t - 2];
            let mut by_row: HashMap<usize, Vec<&MatrixEntry>> = HashMap::new();
            for e in &lower.entries {
                by_row.entry(e.row).or_default().push(e);
            }
            let mut acc: BTreeMap<(usize, usize), BTreeMap<Monomial, i64>> = BTreeMap::new();
            for a in &upper.entries {
                for b in by_row.get(&a.col).into_iter().flatten() {
                    let slot = acc.entry((a.row, b.col)).or_default();
                    *slot.entry(a.monomial.mul(&b.monomial)).or_insert(0) += i64::from(a.sign * b.sign);
                }
            }
            for ((row, col), poly) in acc {
                if poly.values().any(|&c| c != 0) {
                    return Some((t, row, col));
                }
            }
        }
        None
    }

    pub fn is_complex(&self) -> bool {
        self.d_squared_violation().is_none()
    }

    /// No differential entry is a unit.
    pub fn is_minimal(&self) -> bool {
        self.differentials.iter().flat_map(|d| &d.entries).all(|e| !e.monomial.is_one())
    }

    /// `beta_1, beta_2, ...` up to the projective dimension.
    pub fn betti_numbers(&self) -> Result<Vec<usize>> {
        if !self.is_minimal() {
            return Err(Error::NotMinimal);
        }
        Ok(self.symbols[1..].iter().map(Vec::len).collect())
    }

    pub fn projective_dimension(&self) -> Result<usize> {
        self.betti_numbers().map(|b| b.len())
    }

    /// `sum_t (-1)^t rank L^t`, including `L^0`.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks()
            .iter()
            .enumerate()
            .map(|(t, &r)| if t % 2 == 0 { r as i64 } else { -(r as i64) })
            .sum()
    }

    /// Every generator has degree 2 and every entry of `d_t`, `t >= 2`, has
    /// degree 1.
    pub fn linearity_check(&self) -> Result<bool> {
        if !self.is_minimal() {
            return Err(Error::NotMinimal);
        }
        Ok(self.gens.iter().all(|g| g.degree() == 2)
            && self.differentials.iter().skip(1).flat_map(|d| &d.entries).all(|e| e.degree() == 1))
    }

    /// Entries of `d_t` (`t >= 2`) of degree other than 1.
    pub fn nonlinear_entries(&self) -> Vec<(usize, &MatrixEntry)> {
        self.differentials
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(k, d)| d.entries.iter().filter(|e| e.degree() != 1).map(move |e| (k + 1, e)))
            .collect()
    }

    pub fn render_symbol(&self, symbol: &[usize], labels: &[String]) -> String {
        let parts: Vec<String> = symbol.iter().map(|&i| self.gens[i].render(labels)).collect();
        format!("u({})", parts.join(", "))
    }
}

/// Largest `max(r, s)` accepted by [`double_star_resolution`]; the complex
/// has about `2^(max(r,s)+2)` symbols.
pub const DOUBLE_STAR_LIMIT: usize = 20;

/// The complex for `T_{r,s}` on the order `ab, a x_1, ..., a x_r, b y_1, ...,
/// b y_s`, with the variable layout of [`crate::graph::make_double_star`].
pub fn double_star_resolution(r: usize, s: usize) -> Result<LyubeznikComplex> {
    if r.max(s) > DOUBLE_STAR_LIMIT {
        return Err(Error::Domain(format!("double star sizes above {DOUBLE_STAR_LIMIT} are not supported")));
    }
    let (a, b) = (0, 1);
    let mut gens = vec![Monomial::from_exponents([(a, 1), (b, 1)])];
    gens.extend((1..=r).map(|i| Monomial::from_exponents([(a, 1), (1 + i, 1)])));
    gens.extend((1..=s).map(|j| Monomial::from_exponents([(b, 1), (1 + r + j, 1)])));
    LyubeznikComplex::new(gens)
}
