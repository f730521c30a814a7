//! A benchmark bundles a grammar, a problem and default run settings.

use typegp::{
    evolve, EngineError, Genome, GpConfig, Grammar, GrammarView, Individual, NodeValue, Problem,
    RunStats, SymbolRef, TreeNode,
};

pub struct BenchmarkSpec<V, P> {
    pub name: &'static str,
    pub grammar: Grammar<V>,
    pub problem: P,
    /// Settings used when the caller does not override them.
    pub defaults: GpConfig,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub best_fitness: f64,
    pub best_tree: String,
    pub stats: RunStats,
}

/// Object-safe view of a [`BenchmarkSpec`], whatever its value type.
pub trait Benchmark: Send + Sync {
    fn name(&self) -> &'static str;
    fn grammar_view(&self) -> &dyn GrammarView;
    fn start_symbol(&self) -> SymbolRef;
    fn bnf(&self) -> String;
    fn defaults(&self) -> GpConfig;
    /// Canonical s-expression of a derivation of this benchmark's grammar.
    fn sexpr(&self, tree: &TreeNode) -> String;
    /// Fitness of a derivation, with failures mapped to the worst value.
    fn score(&self, tree: &TreeNode) -> f64;
    fn run(&self, config: GpConfig) -> Result<Outcome, EngineError>;
}

impl<V, P> Benchmark for BenchmarkSpec<V, P>
where
    V: NodeValue + Send + Sync,
    P: Problem<V> + Send,
{
    fn name(&self) -> &'static str {
        self.name
    }

    fn grammar_view(&self) -> &dyn GrammarView {
        &self.grammar
    }

    fn start_symbol(&self) -> SymbolRef {
        self.grammar.start_symbol()
    }

    fn bnf(&self) -> String {
        self.grammar.pretty_print_bnf()
    }

    fn defaults(&self) -> GpConfig {
        self.defaults.clone()
    }

    fn sexpr(&self, tree: &TreeNode) -> String {
        tree.to_sexpr(&self.grammar)
    }

    fn score(&self, tree: &TreeNode) -> f64 {
        let mut ind = Individual::new(Genome::Tree(tree.clone()));
        ind.evaluate(&self.grammar, &self.problem, usize::MAX, 0)
    }

    fn run(&self, config: GpConfig) -> Result<Outcome, EngineError> {
        let (best, stats) = evolve(&self.grammar, &self.problem, config)?;
        Ok(Outcome {
            best_fitness: best.fitness().expect("evaluated"),
            best_tree: best
                .phenotype()
                .map_or_else(|| "invalid".into(), |t| t.to_sexpr(&self.grammar)),
            stats,
        })
    }
}
