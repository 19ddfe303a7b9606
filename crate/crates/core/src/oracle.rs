//! Exhaustive comparison of vanishing loci over `F_p^n`: the common zeros of
//! one polynomial list against those of another. Used as an independent
//! check that a tree-like system and its support define the same radical.
//!
//! Points are enumerated in chunks fixed by the leading coordinates; inside
//! a chunk the remaining coordinates run through a Gray code (p = 2) or an
//! odometer, and only the terms touching the changed coordinate are
//! re-evaluated.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::SquarefreeMonomial;
use crate::tls::TreeLikeSystem;

/// A polynomial over `F_p` with squarefree monomial terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensePoly {
    terms: BTreeMap<SquarefreeMonomial, u64>,
    p: u64,
}

impl DensePoly {
    pub fn zero(p: u64) -> Self {
        DensePoly { terms: BTreeMap::new(), p }
    }

    pub fn monomial(m: SquarefreeMonomial, p: u64) -> Self {
        let mut out = DensePoly::zero(p);
        out.add_term(m, 1);
        out
    }

    /// Sum of the given monomials, each with coefficient 1.
    pub fn sum<'a>(ms: impl IntoIterator<Item = &'a SquarefreeMonomial>, p: u64) -> Self {
        let mut out = DensePoly::zero(p);
        for m in ms {
            out.add_term(m.clone(), 1);
        }
        out
    }

    pub fn add_term(&mut self, m: SquarefreeMonomial, coeff: u64) {
        let p = self.p;
        let c = self.terms.entry(m.clone()).or_insert(0);
        *c = (*c + coeff % p) % p;
        if *c == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<SquarefreeMonomial, u64> {
        &self.terms
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn max_var(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.max_var()).max()
    }

    /// Direct evaluation, term by term.
    pub fn eval(&self, point: &[u64]) -> u64 {
        let p = self.p;
        self.terms.iter().fold(0, |acc, (m, c)| {
            let v = m.vars().iter().fold(1, |a, &x| a * point[x] % p);
            (acc + c * v) % p
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum WitnessKind {
    /// All of the first list vanish, some element of the second does not.
    FirstOnly,
    /// All of the second list vanish, some element of the first does not.
    SecondOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub point: Vec<u64>,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VanishingReport {
    pub prime: u64,
    pub nvars: usize,
    pub points: u64,
    pub equal: bool,
    /// Every common zero of the second list is a common zero of the first.
    pub forward_ok: bool,
    /// First disagreement in enumeration order.
    pub witness: Option<Witness>,
    /// Original variable index of each coordinate, when variables were
    /// renumbered.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variables: Vec<usize>,
}

pub fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Largest variable count enumerated over `F_p` by default: 16 for p = 2,
/// 12 for p = 3, 9 for p = 5, and about `16 log 2 / log p` beyond.
pub fn default_cap(p: u64) -> usize {
    match p {
        2 => 16,
        3 => 12,
        5 => 9,
        _ => ((16.0 * std::f64::consts::LN_2) / (p as f64).ln()).floor().max(1.0) as usize,
    }
}

/// Whether `qs` and `ps` have the same common zeros in `F_p^n`.
pub fn vanishing_equal(
    qs: &[DensePoly],
    ps: &[DensePoly],
    p: u64,
    n: usize,
    cap: Option<usize>,
) -> Result<VanishingReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let cap = cap.unwrap_or_else(|| default_cap(p));
    if n > cap {
        return Err(Error::CapExceeded { nvars: n, cap, prime: p });
    }
    for f in qs.iter().chain(ps) {
        if f.p != p {
            return Err(Error::Domain(format!("polynomial over F_{} checked over F_{p}", f.p)));
        }
        if let Some(x) = f.max_var() {
            if x >= n {
                return Err(Error::VariableOutOfRange { var: x, nvars: n });
            }
        }
    }
    let plan = Plan::new(qs, ps, p, n);
    let low = n.min(low_digits(p, n));
    let high = n - low;
    let chunks = p.pow(high as u32);
    let results: Vec<ChunkResult> = (0..chunks).into_par_iter().map(|c| plan.run_chunk(c, high, low)).collect();
    let mut witness = None;
    let mut forward_ok = true;
    for r in results {
        if witness.is_none() {
            witness = r.first;
        }
        forward_ok &= !r.forward_violation;
    }
    Ok(VanishingReport {
        prime: p,
        nvars: n,
        points: p.pow(n as u32),
        equal: witness.is_none(),
        forward_ok,
        witness,
        variables: Vec::new(),
    })
}

/// Number of trailing coordinates enumerated inside one chunk: enough for
/// about 4096 points per chunk.
fn low_digits(p: u64, n: usize) -> usize {
    let mut k = 0;
    let mut size = 1u64;
    while k < n && size < 4096 {
        size *= p;
        k += 1;
    }
    k
}

struct Plan {
    p: u64,
    n: usize,
    nq: usize,
    terms: Vec<Vec<usize>>,
    /// For each term, the polynomials it occurs in with their coefficients.
    term_polys: Vec<Vec<(usize, u64)>>,
    var_terms: Vec<Vec<usize>>,
    npolys: usize,
}

struct ChunkResult {
    first: Option<Witness>,
    forward_violation: bool,
}

impl Plan {
    fn new(qs: &[DensePoly], ps: &[DensePoly], p: u64, n: usize) -> Plan {
        let mut index: BTreeMap<&SquarefreeMonomial, usize> = BTreeMap::new();
        let mut terms = Vec::new();
        let mut term_polys: Vec<Vec<(usize, u64)>> = Vec::new();
        for (k, f) in qs.iter().chain(ps).enumerate() {
            for (m, &c) in &f.terms {
                let t = *index.entry(m).or_insert_with(|| {
                    terms.push(m.vars().to_vec());
                    term_polys.push(Vec::new());
                    terms.len() - 1
                });
                term_polys[t].push((k, c));
            }
        }
        let mut var_terms = vec![Vec::new(); n];
        for (t, vars) in terms.iter().enumerate() {
            for &x in vars {
                var_terms[x].push(t);
            }
        }
        Plan { p, n, nq: qs.len(), terms, term_polys, var_terms, npolys: qs.len() + ps.len() }
    }

    fn run_chunk(&self, chunk: u64, high: usize, low: usize) -> ChunkResult {
        let p = self.p;
        let mut st = State::new(self);
        // Leading coordinates n-1 .. n-high carry the chunk digits.
        let mut c = chunk;
        for i in 0..high {
            st.set(self, self.n - 1 - i, c % p);
            c /= p;
        }
        let mut result = ChunkResult { first: None, forward_violation: false };
        let total = p.pow(low as u32);
        let mut digits = vec![0u64; low];
        for step in 0..total {
            if step > 0 {
                if p == 2 {
                    let bit = step.trailing_zeros() as usize;
                    digits[bit] ^= 1;
                    st.set(self, bit, digits[bit]);
                } else {
                    let mut d = 0;
                    loop {
                        digits[d] = (digits[d] + 1) % p;
                        st.set(self, d, digits[d]);
                        if digits[d] != 0 {
                            break;
                        }
                        d += 1;
                    }
                }
            }
            let q_zero = st.nonzero_q == 0;
            let p_zero = st.nonzero_p == 0;
            if q_zero != p_zero {
                if p_zero {
                    result.forward_violation = true;
                }
                if result.first.is_none() {
                    let kind = if q_zero { WitnessKind::FirstOnly } else { WitnessKind::SecondOnly };
                    result.first = Some(Witness { point: st.coords.clone(), kind });
                }
                if result.forward_violation {
                    break;
                }
            }
        }
        result
    }
}

struct State {
    coords: Vec<u64>,
    term_val: Vec<u64>,
    poly_val: Vec<u64>,
    nonzero_q: usize,
    nonzero_p: usize,
}

impl State {
    /// All coordinates zero.
    fn new(plan: &Plan) -> State {
        let term_val: Vec<u64> = plan.terms.iter().map(|_| 0).collect();
        let poly_val = vec![0; plan.npolys];
        State { coords: vec![0; plan.n], term_val, poly_val, nonzero_q: 0, nonzero_p: 0 }
    }

    fn set(&mut self, plan: &Plan, x: usize, value: u64) {
        let p = plan.p;
        if self.coords[x] == value {
            return;
        }
        self.coords[x] = value;
        for &t in &plan.var_terms[x] {
            let new = plan.terms[t].iter().fold(1, |a, &y| a * self.coords[y] % p);
            let old = self.term_val[t];
            if new == old {
                continue;
            }
            self.term_val[t] = new;
            let delta = (new + p - old) % p;
            for &(k, c) in &plan.term_polys[t] {
                let before = self.poly_val[k];
                let after = (before + c * delta) % p;
                self.poly_val[k] = after;
                let counter = if k < plan.nq { &mut self.nonzero_q } else { &mut self.nonzero_p };
                match (before == 0, after == 0) {
                    (true, false) => *counter += 1,
                    (false, true) => *counter -= 1,
                    _ => {}
                }
            }
        }
    }
}

/// The elements as polynomials and the support as monomials, over the
/// variables the support actually uses (renumbered densely).
pub fn system_polynomials(s: &TreeLikeSystem, p: u64) -> (Vec<DensePoly>, Vec<DensePoly>, Vec<usize>) {
    let support = s.support();
    let mut used: Vec<usize> = support.iter().flat_map(|m| m.vars().iter().copied()).collect();
    used.sort_unstable();
    used.dedup();
    let rename = |m: &SquarefreeMonomial| {
        SquarefreeMonomial::new(m.vars().iter().map(|x| used.binary_search(x).expect("used variable")))
            .expect("renaming keeps monomials squarefree")
    };
    let qs = s
        .elements()
        .iter()
        .map(|e| DensePoly::sum(e.summands().map(rename).collect::<Vec<_>>().iter(), p))
        .collect();
    let ps = support.iter().map(|m| DensePoly::monomial(rename(m), p)).collect();
    (qs, ps, used)
}

/// [`vanishing_equal`] between the elements of `s` and its support.
pub fn tls_vanishing_check_prime(s: &TreeLikeSystem, p: u64, cap: Option<usize>) -> Result<VanishingReport> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let (qs, ps, used) = system_polynomials(s, p);
    let mut report = vanishing_equal(&qs, &ps, p, used.len(), cap)?;
    report.variables = used;
    Ok(report)
}

pub fn tls_vanishing_check(s: &TreeLikeSystem, primes: &[u64], cap: Option<usize>) -> Result<Vec<VanishingReport>> {
    primes.iter().map(|&p| tls_vanishing_check_prime(s, p, cap)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tls::TlsElement;

    fn m(vars: &[usize]) -> SquarefreeMonomial {
        SquarefreeMonomial::new(vars.iter().copied()).unwrap()
    }

    fn e(u: usize, v: usize) -> SquarefreeMonomial {
        SquarefreeMonomial::edge(u, v)
    }

    // v=0 v1=1 v2=2 w1=3 w2=4 a=5 b=6 c=7 d=8
    fn sigma_pd5() -> TreeLikeSystem {
        let iso = |u, v| TlsElement::isolated(e(u, v));
        let pair = |a: (usize, usize), b: (usize, usize)| TlsElement::pair(e(a.0, a.1), e(b.0, b.1)).unwrap();
        TreeLikeSystem::new(
            9,
            vec![iso(0, 2), pair((0, 1), (2, 3)), pair((2, 4), (3, 5)), iso(5, 7), pair((5, 6), (7, 8))],
        )
        .unwrap()
    }

    /// Every point, every polynomial, no incremental state.
    fn naive(qs: &[DensePoly], ps: &[DensePoly], p: u64, n: usize) -> bool {
        let mut point = vec![0u64; n];
        for mut idx in 0..p.pow(n as u32) {
            for c in point.iter_mut() {
                *c = idx % p;
                idx /= p;
            }
            let q0 = qs.iter().all(|f| f.eval(&point) == 0);
            let p0 = ps.iter().all(|f| f.eval(&point) == 0);
            if q0 != p0 {
                return false;
            }
        }
        true
    }

    #[test]
    fn identical_sets() {
        let q = vec![DensePoly::monomial(m(&[0, 1]), 2)];
        let r = vanishing_equal(&q, &q, 2, 2, None).unwrap();
        assert!(r.equal && r.forward_ok);
        assert_eq!(r.points, 4);
    }

    #[test]
    fn sum_of_two_edges_over_f2() {
        let q = vec![DensePoly::sum(&[m(&[0, 1]), m(&[2, 3])], 2)];
        let ps = vec![DensePoly::monomial(m(&[0, 1]), 2), DensePoly::monomial(m(&[2, 3]), 2)];
        let r = vanishing_equal(&q, &ps, 2, 4, None).unwrap();
        assert!(!r.equal);
        assert!(r.forward_ok);
        assert_eq!(r.witness, Some(Witness { point: vec![1, 1, 1, 1], kind: WitnessKind::FirstOnly }));
    }

    #[test]
    fn sample_system_over_small_fields() {
        let s = sigma_pd5();
        for p in [2, 3, 5] {
            let r = tls_vanishing_check_prime(&s, p, None).unwrap();
            assert!(r.equal, "F_{p}");
            assert_eq!(r.nvars, 9);
        }
        assert_eq!(tls_vanishing_check_prime(&s, 2, None).unwrap().points, 512);
    }

    #[test]
    fn dropping_an_element_breaks_equality() {
        let s = sigma_pd5();
        // Compare the first four elements against the full edge set, in the
        // original numbering (all nine variables are used).
        let qs: Vec<DensePoly> = s.elements()[..4]
            .iter()
            .map(|el| DensePoly::sum(el.summands(), 2))
            .collect();
        let (_, ps, used) = system_polynomials(&s, 2);
        assert_eq!(used, (0..9).collect::<Vec<_>>());
        let r = vanishing_equal(&qs, &ps, 2, 9, None).unwrap();
        assert!(!r.equal);
        assert!(r.forward_ok);
        assert_eq!(r.witness.unwrap().kind, WitnessKind::FirstOnly);
    }

    #[test]
    fn caps_and_primes() {
        let q = vec![DensePoly::monomial(m(&[0, 1]), 3)];
        assert_eq!(
            vanishing_equal(&q, &q, 3, 13, None),
            Err(Error::CapExceeded { nvars: 13, cap: 12, prime: 3 })
        );
        assert!(vanishing_equal(&q, &q, 3, 13, Some(13)).is_ok());
        assert_eq!(vanishing_equal(&q, &q, 4, 2, None), Err(Error::NotPrime(4)));
        assert_eq!(default_cap(7), 5);
        assert!(is_prime(2) && is_prime(13) && !is_prime(1) && !is_prime(9));
    }

    #[test]
    fn incremental_matches_naive_evaluation() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for p in [2u64, 3, 5] {
            for _ in 0..40 {
                let n = rng.gen_range(1..=5);
                let poly = |rng: &mut rand_chacha::ChaCha8Rng| {
                    let mut f = DensePoly::zero(p);
                    for _ in 0..rng.gen_range(1..=3) {
                        let a = rng.gen_range(0..n);
                        let b = rng.gen_range(0..n);
                        let mono = if a == b { m(&[a]) } else { m(&[a, b]) };
                        f.add_term(mono, rng.gen_range(1..p));
                    }
                    f
                };
                let qs: Vec<DensePoly> = (0..rng.gen_range(1..4)).map(|_| poly(&mut rng)).collect();
                let ps: Vec<DensePoly> = (0..rng.gen_range(1..4)).map(|_| poly(&mut rng)).collect();
                let fast = vanishing_equal(&qs, &ps, p, n, None).unwrap();
                assert_eq!(fast.equal, naive(&qs, &ps, p, n));
                if let Some(w) = &fast.witness {
                    let q0 = qs.iter().all(|f| f.eval(&w.point) == 0);
                    let p0 = ps.iter().all(|f| f.eval(&w.point) == 0);
                    assert_ne!(q0, p0);
                }
            }
        }
    }

    #[test]
    fn two_term_evaluation_is_the_field_sum() {
        let f = DensePoly::sum(&[m(&[0, 1]), m(&[2, 3])], 3);
        let point = [2, 2, 1, 2];
        let a = DensePoly::monomial(m(&[0, 1]), 3).eval(&point);
        let b = DensePoly::monomial(m(&[2, 3]), 3).eval(&point);
        assert_eq!(f.eval(&point), (a + b) % 3);
    }

    #[test]
    fn chunked_enumeration_on_larger_inputs() {
        // 14 variables over F_2 spans several chunks.
        let edges: Vec<(usize, usize)> = (0..13).map(|i| (i, i + 1)).collect();
        let s = TreeLikeSystem::isolated_edges(14, &edges);
        let r = tls_vanishing_check_prime(&s, 2, None).unwrap();
        assert!(r.equal);
        assert_eq!(r.points, 1 << 14);
    }
}
