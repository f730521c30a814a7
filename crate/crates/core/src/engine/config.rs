use thiserror::Error;

use crate::generate::GenerationError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    /// Individuals are derivation trees, varied with typed subtree operators.
    #[default]
    Tree,
    /// Individuals are codon strings decoded through the grammar.
    Ge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GpConfig {
    pub population_size: usize,
    pub max_depth: usize,
    /// `None` runs until another stop fires. Generation 0 is the initial
    /// population, so a finite value `g` yields `g + 1` evaluated
    /// generations.
    pub max_generations: Option<usize>,
    pub time_budget_seconds: Option<f64>,
    pub crossover_probability: f64,
    pub mutation_probability: f64,
    pub tournament_size: usize,
    pub elitism_count: usize,
    pub novelty_count: usize,
    pub representation: Representation,
    pub ge_codon_count_init: usize,
    pub ge_max_wraps: usize,
    pub seed: u64,
    /// Worker threads for fitness evaluation; 0 or 1 evaluates sequentially.
    pub parallel_eval: usize,
}

impl Default for GpConfig {
    fn default() -> Self {
        GpConfig {
            population_size: 200,
            max_depth: 10,
            max_generations: Some(50),
            time_budget_seconds: None,
            crossover_probability: 0.9,
            mutation_probability: 0.1,
            tournament_size: 5,
            elitism_count: 1,
            novelty_count: 0,
            representation: Representation::Tree,
            ge_codon_count_init: 100,
            ge_max_wraps: 2,
            seed: 0,
            parallel_eval: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Generation(#[from] GenerationError),
}

impl GpConfig {
    pub fn validate(&self, start_min_depth: usize) -> Result<(), EngineError> {
        let fail = |msg: String| Err(EngineError::Config(msg));
        if self.population_size == 0 {
            return fail("population_size must be positive".into());
        }
        if self.max_depth < start_min_depth {
            return fail(format!(
                "max_depth {} is below the grammar's minimum tree depth {start_min_depth}",
                self.max_depth
            ));
        }
        for (name, p) in [
            ("crossover", self.crossover_probability),
            ("mutation", self.mutation_probability),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return fail(format!("{name} probability {p} is outside [0, 1]"));
            }
        }
        if self.tournament_size == 0 {
            return fail("tournament_size must be at least 1".into());
        }
        if self.elitism_count + self.novelty_count > self.population_size {
            return fail(format!(
                "elitism ({}) plus novelty ({}) exceeds population size {}",
                self.elitism_count, self.novelty_count, self.population_size
            ));
        }
        if let Some(t) = self.time_budget_seconds {
            if !(t.is_finite() && t > 0.0) {
                return fail(format!(
                    "time budget {t} must be a positive number of seconds"
                ));
            }
        }
        if self.max_generations.is_none() && self.time_budget_seconds.is_none() {
            return fail(
                "no finite stopping criterion (set max_generations or a time budget)".into(),
            );
        }
        if self.representation == Representation::Ge && self.ge_codon_count_init == 0 {
            return fail("ge_codon_count_init must be positive".into());
        }
        Ok(())
    }
}
