//! Selection and variation operators.

use crate::decision::DecisionSource;
use crate::ge::Genotype;
use crate::generate::{generate_tree, GenerationError};
use crate::grammar::Grammar;
use crate::tree::{collect_sites, TreeNode};

use super::Direction;

/// Best of `k` uniform draws (with replacement) by `fitness`; ties go to the
/// lower index. Returns the winning index.
pub fn tournament_select(
    fitness: &[f64],
    k: usize,
    direction: Direction,
    decisions: &mut dyn DecisionSource,
) -> usize {
    assert!(!fitness.is_empty(), "tournament over an empty population");
    let mut best = decisions.choose(fitness.len(), None);
    for _ in 1..k {
        let c = decisions.choose(fitness.len(), None);
        if direction.is_better(fitness[c], fitness[best])
            || (fitness[c] == fitness[best] && c < best)
        {
            best = c;
        }
    }
    best
}

/// Typed subtree crossover.
///
/// A site is drawn uniformly in `a`; a site with the same governing symbol is
/// drawn in `b` and the subtrees are exchanged. With no compatible site in
/// `b`, `a`'s site is regrown instead and `b` passes through. Swaps that
/// overflow `max_depth` are redrawn up to three times; after that the
/// overflowing child has its site regrown within budget.
pub fn tree_crossover<V>(
    a: &TreeNode,
    b: &TreeNode,
    grammar: &Grammar<V>,
    max_depth: usize,
    decisions: &mut dyn DecisionSource,
) -> Result<(TreeNode, TreeNode), GenerationError> {
    let root = grammar.start_symbol();
    let sites_a = collect_sites(grammar, &root, a);
    let site = &sites_a[decisions.choose(sites_a.len(), None)];
    let budget_a = site.budget(max_depth);
    let sites_b: Vec<_> = collect_sites(grammar, &root, b)
        .into_iter()
        .filter(|s| s.symbol == site.symbol)
        .collect();

    if sites_b.is_empty() {
        let fresh = generate_tree(grammar, &site.symbol, budget_a, decisions)?;
        return Ok((
            a.with_subtree(&site.path, fresh).expect("site path"),
            b.clone(),
        ));
    }

    let sub_a = a.subtree(&site.path).expect("site path");
    let mut last = None;
    for _ in 0..3 {
        let other = &sites_b[decisions.choose(sites_b.len(), None)];
        let sub_b = b.subtree(&other.path).expect("site path");
        let a_fits = sub_b.depth() <= budget_a;
        let b_fits = sub_a.depth() <= other.budget(max_depth);
        if a_fits && b_fits {
            return Ok((
                a.with_subtree(&site.path, sub_b.clone())
                    .expect("site path"),
                b.with_subtree(&other.path, sub_a.clone())
                    .expect("site path"),
            ));
        }
        last = Some((other, a_fits, b_fits));
    }

    let (other, a_fits, b_fits) = last.expect("at least one attempt");
    let sub_b = b.subtree(&other.path).expect("site path");
    let child_a = if a_fits {
        a.with_subtree(&site.path, sub_b.clone())
    } else {
        a.with_subtree(
            &site.path,
            generate_tree(grammar, &site.symbol, budget_a, decisions)?,
        )
    }
    .expect("site path");
    let child_b = if b_fits {
        b.with_subtree(&other.path, sub_a.clone())
    } else {
        let fresh = generate_tree(grammar, &other.symbol, other.budget(max_depth), decisions)?;
        b.with_subtree(&other.path, fresh)
    }
    .expect("site path");
    Ok((child_a, child_b))
}

/// Regrows a uniformly drawn site within its remaining depth budget.
pub fn tree_mutation<V>(
    a: &TreeNode,
    grammar: &Grammar<V>,
    max_depth: usize,
    decisions: &mut dyn DecisionSource,
) -> Result<TreeNode, GenerationError> {
    let sites = collect_sites(grammar, &grammar.start_symbol(), a);
    let site = &sites[decisions.choose(sites.len(), None)];
    let fresh = generate_tree(grammar, &site.symbol, site.budget(max_depth), decisions)?;
    Ok(a.with_subtree(&site.path, fresh).expect("site path"))
}

/// Variable-length one-point crossover: independent cut points, tails
/// exchanged. Cuts are drawn in `0..len` so each child keeps at least one
/// codon from the other parent's tail.
pub fn ge_crossover(
    a: &Genotype,
    b: &Genotype,
    decisions: &mut dyn DecisionSource,
) -> (Genotype, Genotype) {
    let cut_a = decisions.choose(a.len(), None);
    let cut_b = decisions.choose(b.len(), None);
    ge_crossover_at(a, b, cut_a, cut_b)
}

pub fn ge_crossover_at(
    a: &Genotype,
    b: &Genotype,
    cut_a: usize,
    cut_b: usize,
) -> (Genotype, Genotype) {
    let (a_head, a_tail) = a.codons.split_at(cut_a);
    let (b_head, b_tail) = b.codons.split_at(cut_b);
    (
        Genotype::new([a_head, b_tail].concat()),
        Genotype::new([b_head, a_tail].concat()),
    )
}

/// Replaces each codon with a fresh one in `[0, 2^32)` with probability
/// `rate`.
pub fn ge_mutation(a: &Genotype, rate: f64, decisions: &mut dyn DecisionSource) -> Genotype {
    let codons = a
        .codons
        .iter()
        .map(|&c| {
            if rate > 0.0 && decisions.random_real() < rate {
                decisions.choose(1 << 32, None) as u64
            } else {
                c
            }
        })
        .collect();
    Genotype::new(codons)
}
