//! Squarefree monomial ideals and the invariants `mu`, `nu`, `rho` behind the
//! upper bound `ara I <= mu(I) - rho(I) + 1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Forest;
use crate::monomial::SquarefreeMonomial;

/// A squarefree monomial ideal given by its minimal generators, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IdealJson", into = "IdealJson")]
pub struct MonomialIdeal {
    nvars: usize,
    generators: Vec<SquarefreeMonomial>,
}

#[derive(Serialize, Deserialize)]
struct IdealJson {
    nvars: usize,
    generators: Vec<SquarefreeMonomial>,
}

impl TryFrom<IdealJson> for MonomialIdeal {
    type Error = Error;

    fn try_from(j: IdealJson) -> Result<Self> {
        MonomialIdeal::new(j.nvars, j.generators)
    }
}

impl From<MonomialIdeal> for IdealJson {
    fn from(i: MonomialIdeal) -> IdealJson {
        IdealJson { nvars: i.nvars, generators: i.generators }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AraInvariants {
    pub mu: usize,
    pub nu: usize,
    pub rho: usize,
    pub upper_bound: usize,
}

impl MonomialIdeal {
    /// Generators that are divisible by another generator are dropped, so
    /// the stored set is minimal whatever the input order.
    pub fn new(nvars: usize, generators: Vec<SquarefreeMonomial>) -> Result<Self> {
        for g in &generators {
            if g.max_var() >= nvars {
                return Err(Error::VariableOutOfRange { var: g.max_var(), nvars });
            }
        }
        let mut gens = generators;
        gens.sort();
        gens.dedup();
        let minimal: Vec<SquarefreeMonomial> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && h.divides(g)))
            .cloned()
            .collect();
        Ok(MonomialIdeal { nvars, generators: minimal })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[SquarefreeMonomial] {
        &self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    /// Number of minimal generators.
    pub fn mu(&self) -> usize {
        self.generators.len()
    }

    /// `|M_i|` for every variable: how many generators `x_i` divides.
    pub fn divisibility_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.nvars];
        for g in &self.generators {
            for &x in g.vars() {
                counts[x] += 1;
            }
        }
        counts
    }

    /// Max over generators of the min `|M_i|` over the generator's variables.
    pub fn rho(&self) -> usize {
        let counts = self.divisibility_counts();
        self.generators
            .iter()
            .map(|g| g.vars().iter().map(|&x| counts[x]).min().unwrap_or(0))
            .max()
            .unwrap_or(0)
    }

    /// Min over minimal primes of the max `|M_i|` over the prime's variables.
    pub fn nu(&self) -> usize {
        let counts = self.divisibility_counts();
        self.minimal_primes()
            .iter()
            .map(|p| p.iter().map(|&x| counts[x]).max().unwrap_or(0))
            .min()
            .unwrap_or(0)
    }

    /// Inclusion-minimal sets of variables meeting every generator, sorted.
    /// For an edge ideal these are the minimal vertex covers.
    pub fn minimal_primes(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut chosen = vec![false; self.nvars];
        let mut forbidden = vec![false; self.nvars];
        self.transversals(&mut chosen, &mut forbidden, &mut out);
        for p in &mut out {
            p.sort_unstable();
        }
        out.sort();
        out.dedup();
        out
    }

    fn transversals(&self, chosen: &mut [bool], forbidden: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let Some(open) = self
            .generators
            .iter()
            .find(|g| !g.vars().iter().any(|&x| chosen[x]))
        else {
            let set: Vec<usize> = (0..self.nvars).filter(|&x| chosen[x]).collect();
            if self.is_minimal_transversal(&set) {
                out.push(set);
            }
            return;
        };
        let mut newly_forbidden = Vec::new();
        for &x in open.vars() {
            if forbidden[x] {
                continue;
            }
            chosen[x] = true;
            self.transversals(chosen, forbidden, out);
            chosen[x] = false;
            forbidden[x] = true;
            newly_forbidden.push(x);
        }
        for x in newly_forbidden {
            forbidden[x] = false;
        }
    }

    /// Every generator is hit, and dropping any variable leaves one unhit.
    pub fn is_minimal_transversal(&self, set: &[usize]) -> bool {
        let hits = |skip: Option<usize>| {
            self.generators
                .iter()
                .all(|g| g.vars().iter().any(|x| set.contains(x) && Some(*x) != skip))
        };
        hits(None) && set.iter().all(|&x| !hits(Some(x)))
    }

    /// `mu - rho + 1`, equal to `mu - nu + 1`.
    pub fn ara_upper_bound(&self) -> usize {
        if self.is_zero() {
            return 0;
        }
        self.mu() - self.rho() + 1
    }

    pub fn invariants(&self) -> AraInvariants {
        AraInvariants {
            mu: self.mu(),
            nu: self.nu(),
            rho: self.rho(),
            upper_bound: self.ara_upper_bound(),
        }
    }
}

/// One generator `x_u x_v` per edge; isolated vertices do not contribute.
pub fn edge_ideal(forest: &Forest) -> Result<MonomialIdeal> {
    if forest.edge_count() == 0 {
        return Err(Error::NoEdges);
    }
    let gens = forest
        .edges()
        .iter()
        .map(|&(u, v)| SquarefreeMonomial::edge(u, v))
        .collect();
    MonomialIdeal::new(forest.n(), gens)
}

/// `rho` of the edge ideal computed from the graph: the largest, over all
/// edges, of the smaller endpoint degree.
pub fn edge_rho(forest: &Forest) -> usize {
    forest
        .edges()
        .iter()
        .map(|&(u, v)| forest.degree(u).min(forest.degree(v)))
        .max()
        .unwrap_or(0)
}
