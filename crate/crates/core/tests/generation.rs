mod support;

use proptest::prelude::*;
use typegp::{
    check_tree, collect_sites, generate_tree, map_genotype, Genotype, Grammar, Production,
    RandomSource, Registry, SymbolRef as S, TreeNode, Value,
};

fn grammars() -> Vec<Grammar<Value>> {
    vec![
        support::vectorial(),
        support::arith(),
        support::structural(),
    ]
}

fn assert_sound(g: &Grammar<Value>, tree: &TreeNode, budget: usize) {
    check_tree(g, &g.start_symbol(), tree)
        .unwrap_or_else(|v| panic!("type violation at {:?}: {}", v.path, v.message));
    assert!(
        tree.depth() <= budget,
        "depth {} over budget {budget}",
        tree.depth()
    );
}

#[test]
fn ten_thousand_trees_per_grammar() {
    for g in grammars() {
        let lo = g.min_depth_nonterminal(g.start()).unwrap().max(3);
        let mut rng = RandomSource::seeded(11);
        for i in 0..10_000 {
            let budget = lo + i % (10 - lo + 1);
            let tree = generate_tree(&g, &g.start_symbol(), budget, &mut rng).unwrap();
            assert_sound(&g, &tree, budget);
        }
    }
}

#[test]
fn every_site_carries_a_subtree_of_its_symbol() {
    let g = support::structural();
    let mut rng = RandomSource::seeded(3);
    for _ in 0..500 {
        let tree = generate_tree(&g, &g.start_symbol(), 7, &mut rng).unwrap();
        let sites = collect_sites(&g, &g.start_symbol(), &tree);
        assert_eq!(sites[0].path, Vec::<usize>::new());
        for site in sites {
            let sub = tree.subtree(&site.path).unwrap();
            check_tree(&g, &site.symbol, sub).unwrap();
            assert!(sub.depth() <= 7 - site.path.len());
        }
    }
}

#[test]
fn weighted_alternatives_follow_their_weights() {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("S").unwrap();
    reg.register_production(Production::<Value>::new("A", "S").weight(0.9))
        .unwrap();
    reg.register_production(Production::<Value>::new("B", "S").weight(0.1))
        .unwrap();
    let g = reg.extract_grammar("S").unwrap();
    assert_eq!(g.normalized_weights("S").unwrap(), vec![0.9, 0.1]);
    let a = g.production_id("A").unwrap();
    let mut rng = RandomSource::seeded(5);
    let n = 10_000;
    let hits = (0..n)
        .filter(|_| {
            generate_tree(&g, &g.start_symbol(), 1, &mut rng)
                .unwrap()
                .production_id()
                == Some(a)
        })
        .count();
    let freq = hits as f64 / n as f64;
    assert!((freq - 0.9).abs() <= 0.02, "observed {freq}");
}

#[test]
fn ineligible_alternatives_are_never_chosen() {
    let g = support::vectorial();
    let mut rng = RandomSource::seeded(8);
    let shallow = ["FloatLiteral", "RealFeature"].map(|n| g.production_id(n).unwrap());
    for _ in 0..2_000 {
        let tree = generate_tree(&g, &g.start_symbol(), 2, &mut rng).unwrap();
        assert!(shallow.contains(&tree.production_id().unwrap()));
    }
    assert!(generate_tree(&g, &g.start_symbol(), 1, &mut rng).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn generated_trees_are_sound(seed in any::<u64>(), budget in 3usize..=10, which in 0usize..3) {
        let g = &grammars()[which];
        let tree = generate_tree(g, &g.start_symbol(), budget, &mut RandomSource::seeded(seed)).unwrap();
        prop_assert!(check_tree(g, &g.start_symbol(), &tree).is_ok());
        prop_assert!(tree.depth() <= budget);
    }

    #[test]
    fn generation_is_a_function_of_the_seed(seed in any::<u64>(), budget in 2usize..=8) {
        let g = support::vectorial();
        let a = generate_tree(&g, &g.start_symbol(), budget, &mut RandomSource::seeded(seed)).unwrap();
        let b = generate_tree(&g, &g.start_symbol(), budget, &mut RandomSource::seeded(seed)).unwrap();
        prop_assert_eq!(a.to_sexpr(&g), b.to_sexpr(&g));
    }

    #[test]
    fn mapped_genotypes_are_sound(codons in prop::collection::vec(0u64..(1 << 32), 1..60), depth in 2usize..=8) {
        let g = support::vectorial();
        let genotype = Genotype::new(codons);
        if let Ok(mapped) = map_genotype(&g, &genotype, depth, 2) {
            prop_assert!(check_tree(&g, &g.start_symbol(), &mapped.tree).is_ok());
            prop_assert!(mapped.tree.depth() <= depth);
            let again = map_genotype(&g, &genotype, depth, 2).unwrap();
            prop_assert_eq!(again.tree, mapped.tree);
        }
    }

    #[test]
    fn list_symbols_respect_the_budget(seed in any::<u64>(), budget in 2usize..=6) {
        let mut reg = Registry::<Value>::new();
        reg.register_nonterminal("T").unwrap();
        reg.register_production(Production::<Value>::new("Node", "T").field("kids", S::list(S::nt("T")))).unwrap();
        let g = reg.extract_grammar("T").unwrap();
        let tree = generate_tree(&g, &g.start_symbol(), budget, &mut RandomSource::seeded(seed)).unwrap();
        prop_assert!(tree.depth() <= budget);
        prop_assert!(check_tree(&g, &g.start_symbol(), &tree).is_ok());
    }
}
