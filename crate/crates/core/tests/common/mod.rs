//! Random instance generators shared by the integration tests.
#![allow(dead_code)]

use forest_ara::{Forest, MonomialIdeal, SquarefreeMonomial};
use rand::seq::SliceRandom;
use rand::Rng;

/// A random stretched forest on `n` vertices with shuffled vertex indices.
/// Each new vertex joins a random earlier vertex when that keeps the forest
/// stretched, and starts a new component with probability `p_new`.
pub fn random_stretched_forest<R: Rng>(rng: &mut R, n: usize, p_new: f64) -> Forest {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 1..n {
        if rng.gen_bool(p_new) {
            continue;
        }
        for _ in 0..8 {
            let p = rng.gen_range(0..i);
            let ok = deg[p] < 2 || adj[p].iter().all(|&q| deg[q] <= 2);
            if ok {
                edges.push((perm[p], perm[i]));
                deg[p] += 1;
                deg[i] += 1;
                adj[p].push(i);
                adj[i].push(p);
                break;
            }
        }
    }
    let f = Forest::new(n, &edges).expect("generated edges form a forest");
    assert!(f.is_stretched());
    f
}

/// Random squarefree monomial on at most `max_deg` of `nvars` variables.
pub fn random_monomial<R: Rng>(rng: &mut R, nvars: usize, max_deg: usize) -> SquarefreeMonomial {
    let mut vars: Vec<usize> = (0..nvars).collect();
    vars.shuffle(rng);
    let d = rng.gen_range(1..=max_deg.min(nvars));
    SquarefreeMonomial::new(vars.into_iter().take(d)).unwrap()
}

/// A uniform-attachment random forest on `n` vertices: vertex `i` joins a
/// random earlier vertex unless it starts a new component (probability
/// `p_new`).
pub fn random_forest<R: Rng>(rng: &mut R, n: usize, p_new: f64) -> Forest {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges = Vec::new();
    for i in 1..n {
        if !rng.gen_bool(p_new) {
            edges.push((perm[rng.gen_range(0..i)], perm[i]));
        }
    }
    Forest::new(n, &edges).expect("generated edges form a forest")
}

/// Largest minimal vertex cover, by checking every vertex subset. This is
/// `pd` for forests (forests are sequentially Cohen-Macaulay, where pd
/// equals the big height). Only for small `n`.
pub fn big_height_brute(forest: &Forest) -> usize {
    let n = forest.n();
    assert!(n <= 20, "brute force limited to 20 vertices");
    let edges = forest.edges();
    let covers = |mask: u32| edges.iter().all(|&(u, v)| mask >> u & 1 == 1 || mask >> v & 1 == 1);
    (0u32..1 << n)
        .filter(|&m| covers(m) && (0..n).filter(|&x| m >> x & 1 == 1).all(|x| !covers(m & !(1 << x))))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// Random divisibility chain `a_0 | a_1 b_1`, `a_1 | a_2 b_2`, ... of edge
/// monomials on a tree, with shuffled variable names in `0..nvars`.
pub fn random_chain<R: Rng>(rng: &mut R, r: usize) -> (Vec<SquarefreeMonomial>, Vec<SquarefreeMonomial>, usize) {
    let nvars = 2 * r + 2 + rng.gen_range(0..4);
    let mut names: Vec<usize> = (0..nvars).collect();
    names.shuffle(rng);
    let mut next = 0;
    let mut fresh = || {
        next += 1;
        names[next - 1]
    };
    let (x, y) = (fresh(), fresh());
    let mut a = vec![SquarefreeMonomial::edge(x, y)];
    let mut b = Vec::new();
    let mut prev = (x, y);
    for _ in 0..r {
        // One endpoint of a_{i-1} goes to a_i, the other to b_i.
        let (keep, other) = if rng.gen_bool(0.5) { prev } else { (prev.1, prev.0) };
        let (z, w) = (fresh(), fresh());
        let ai = (keep, z);
        a.push(SquarefreeMonomial::edge(ai.0, ai.1));
        b.push(SquarefreeMonomial::edge(other, w));
        prev = if rng.gen_bool(0.5) { ai } else { (z, keep) };
    }
    (a, b, nvars)
}

/// rho and nu straight from the definitions, primes by subset enumeration.
pub fn brute_rho_nu(ideal: &MonomialIdeal) -> (usize, usize) {
    let n = ideal.nvars();
    let gens: Vec<u32> = ideal.generators().iter().map(|g| g.vars().iter().map(|&x| 1 << x).sum()).collect();
    let count = |x: usize| gens.iter().filter(|&&g| g >> x & 1 == 1).count();
    let rho = gens
        .iter()
        .map(|&g| (0..n).filter(|&x| g >> x & 1 == 1).map(count).min().unwrap())
        .max()
        .unwrap();
    let hits = |p: u32| gens.iter().all(|&g| g & p != 0);
    let nu = (1u32..1 << n)
        .filter(|&p| hits(p) && (0..n).filter(|&x| p >> x & 1 == 1).all(|x| !hits(p & !(1 << x))))
        .map(|p| (0..n).filter(|&x| p >> x & 1 == 1).map(count).max().unwrap())
        .min()
        .unwrap();
    (rho, nu)
}
