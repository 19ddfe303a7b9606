mod common;

use std::collections::BTreeSet;

use forest_ara::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generators as variable masks.
fn ideal_strategy() -> impl Strategy<Value = MonomialIdeal> {
    (1usize..=10).prop_flat_map(|nvars| {
        prop::collection::vec(1u32..(1 << nvars), 1..=8).prop_map(move |masks| {
            let gens = masks
                .into_iter()
                .map(|m| SquarefreeMonomial::new((0..nvars).filter(|&x| m >> x & 1 == 1)).unwrap())
                .collect();
            MonomialIdeal::new(nvars, gens).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn nu_equals_rho(ideal in ideal_strategy()) {
        let (rho, nu) = common::brute_rho_nu(&ideal);
        prop_assert_eq!(rho, nu);
        prop_assert_eq!(ideal.rho(), rho);
        prop_assert_eq!(ideal.nu(), nu);
        prop_assert_eq!(ideal.ara_upper_bound(), ideal.mu() - rho + 1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pd_is_the_big_height(seed in any::<u64>(), n in 2usize..=16) {
        let f = common::random_forest(&mut rng(seed), n, 0.15);
        prop_assert_eq!(pd_forest(&f).value, common::big_height_brute(&f));
    }

    #[test]
    fn pd_is_additive_over_disjoint_unions(seed in any::<u64>(), n in 2usize..=20, m in 2usize..=20) {
        let mut r = rng(seed);
        let f = common::random_forest(&mut r, n, 0.1);
        let g = common::random_forest(&mut r, m, 0.1);
        let u = f.disjoint_union(&g);
        prop_assert_eq!(pd_forest(&u).value, pd_forest(&f).value + pd_forest(&g).value);
    }

    #[test]
    fn pd_does_not_depend_on_the_splitting_choice(seed in any::<u64>(), n in 2usize..=30) {
        let mut r = rng(seed);
        let f = common::random_forest(&mut r, n, 0.1);
        let mut pick = rng(seed ^ 0x5eed);
        let other = pd_forest_with(&f, |cands| pick.gen_range(0..cands.len()));
        let base = pd_forest(&f);
        prop_assert_eq!(other.value, base.value);
        prop_assert_eq!(other.replay().unwrap(), other.value);
    }

    #[test]
    fn edge_subgraphs_of_stretched_forests_are_stretched(seed in any::<u64>(), n in 2usize..=40) {
        let mut r = rng(seed);
        let f = common::random_stretched_forest(&mut r, n, 0.1);
        let kept: Vec<Edge> = f.edges().iter().copied().filter(|_| r.gen_bool(0.6)).collect();
        prop_assert!(f.with_edges(&kept).is_stretched());
    }

    #[test]
    fn validity_matches_the_element_order_partition(
        seed in any::<u64>(),
        len in 1usize..=6,
        nvars in 3usize..=7,
    ) {
        // Random systems of distinct monomials, each element one or two summands.
        let mut r = rng(seed);
        let mut used = BTreeSet::new();
        let mut elements = Vec::new();
        let mut attempts = 0;
        while elements.len() < len && attempts < 200 {
            attempts += 1;
            let k = if r.gen_bool(0.5) { 1 } else { 2 };
            let ms: Vec<SquarefreeMonomial> = (0..k).map(|_| common::random_monomial(&mut r, nvars, 3)).collect();
            if ms.iter().any(|m| used.contains(m)) || (k == 2 && ms[0] == ms[1]) {
                continue;
            }
            used.extend(ms.iter().cloned());
            elements.push(TlsElement::try_from(ms).unwrap());
        }
        let s = TreeLikeSystem::new(nvars, elements).unwrap();
        let blocks = s.elements().iter().map(|e| e.summands().cloned().collect()).collect();
        let part = SvPartition::new(s.support().into_iter().collect(), blocks);
        prop_assert_eq!(s.is_valid(), sv_check(&part).is_ok());
    }

    #[test]
    fn d_squared_vanishes(seed in any::<u64>(), m in 1usize..=6, nvars in 2usize..=5) {
        let mut r = rng(seed);
        let mut gens: Vec<Monomial> = Vec::new();
        while gens.len() < m {
            let g = Monomial::from_exponents((0..nvars).map(|x| (x, r.gen_range(0..3))));
            if !g.is_one() && !gens.contains(&g) {
                gens.push(g);
            }
        }
        let c = LyubeznikComplex::new(gens).unwrap();
        prop_assert!(c.is_complex());
        prop_assert_eq!(c.euler_characteristic(), 0);
        // Every symbol is a Taylor symbol: strictly increasing indices.
        for t in 1..=c.max_dim() {
            prop_assert!(c.symbols(t).iter().all(|s| s.len() == t && s.windows(2).all(|w| w[0] < w[1])));
        }
    }
}

#[test]
fn independent_generators_give_the_full_taylor_complex() {
    // Pairwise coprime generators: no divisibility among any sub-lcms.
    for m in 1..=7 {
        let gens: Vec<Monomial> = (0..m).map(|i| Monomial::from_exponents([(2 * i, 1), (2 * i + 1, 2)])).collect();
        let c = LyubeznikComplex::new(gens).unwrap();
        let ranks = c.ranks();
        let binom = |n: usize, k: usize| (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1));
        assert_eq!(ranks, (0..=m).map(|t| binom(m, t)).collect::<Vec<_>>());
        assert!(c.is_minimal());
    }
}

#[test]
fn family_pd_values() {
    for r in 2..=40 {
        assert_eq!(pd_forest(&make_line(r).unwrap()).value, pd_line(r).unwrap(), "L_{r}");
    }
    for r in 0..=10 {
        for s in 0..=10 {
            if r + s == 0 {
                continue;
            }
            assert_eq!(pd_forest(&make_double_star(r, s).unwrap()).value, r.max(s) + 1);
        }
    }
}

#[test]
fn double_star_with_one_empty_side_is_a_star() {
    for r in 1..=8 {
        let d = make_double_star(r, 0).unwrap();
        let s = make_star(r + 1).unwrap();
        let mut db: Vec<usize> = (0..d.n()).map(|v| d.degree(v)).collect();
        let mut sd: Vec<usize> = (0..s.n()).map(|v| s.degree(v)).collect();
        db.sort();
        sd.sort();
        assert_eq!(db, sd);
        assert_eq!(pd_forest(&d).value, pd_forest(&s).value);
    }
}

#[test]
fn double_star_complexes_are_linear() {
    for (r, s) in [(5, 5), (3, 1), (0, 4)] {
        let c = double_star_resolution(r, s).unwrap();
        assert!(c.linearity_check().unwrap(), "T_{r},{s}");
    }
}

#[test]
fn builder_on_random_stretched_forests() {
    let mut r = rng(2024);
    let mut checked_oracle = 0;
    for it in 0..300 {
        let n = 2 + it % 39;
        let f = common::random_stretched_forest(&mut r, n, if it % 3 == 0 { 0.15 } else { 0.0 });
        if f.edge_count() == 0 {
            continue;
        }
        let cert = build_stretched_tls(&f).unwrap_or_else(|e| panic!("{e}: {:?}", f.edges()));
        cert.check(f.edges()).unwrap();
        assert_eq!(cert.system.len(), pd_forest(&f).value);
        let part = tls_to_partition(&cert.system).unwrap();
        assert_eq!(sv_check(&part), Ok(()), "{:?}", f.edges());
        let used = cert.system.support().iter().flat_map(|m| m.vars().to_vec()).collect::<BTreeSet<_>>().len();
        if used <= 12 {
            for p in [2, 3] {
                assert!(tls_vanishing_check_prime(&cert.system, p, Some(12)).unwrap().equal);
            }
            checked_oracle += 1;
        }
    }
    assert!(checked_oracle >= 30, "only {checked_oracle} oracle runs");
}

#[test]
fn tree_inversion_on_random_chains() {
    let mut r = rng(99);
    for it in 0..200 {
        let len = 2 + it % 7;
        let (a, b, _) = common::random_chain(&mut r, len);
        let s = tree_inversion(&a, &b).unwrap();
        assert!(s.is_strict(), "{a:?} {b:?}");
        let want: BTreeSet<SquarefreeMonomial> = a.iter().chain(&b).cloned().collect();
        assert_eq!(s.support(), want);
        let head = &s.elements()[0];
        assert!(head.is_isolated());
        assert!(head.contains(&a[len - 1]));
        assert_eq!(s.len(), len + 1);
    }
}

#[test]
fn juxtaposition_of_disjoint_systems_stays_valid() {
    let mut r = rng(5);
    for _ in 0..50 {
        let f = common::random_stretched_forest(&mut r, 12, 0.0);
        let g = common::random_stretched_forest(&mut r, 12, 0.0);
        let u = f.disjoint_union(&g);
        let cert = build_stretched_tls(&u).unwrap();
        assert_eq!(cert.system.len(), pd_forest(&f).value + pd_forest(&g).value);
        assert!(cert.system.is_valid());
    }
}
