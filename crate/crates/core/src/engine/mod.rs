//! The generational loop.

mod config;
pub mod operators;

use std::time::Instant;

pub use config::{EngineError, GpConfig, Representation};
pub use operators::{ge_crossover, ge_mutation, tournament_select, tree_crossover, tree_mutation};

use crate::decision::{DecisionSource, RandomSource};
use crate::eval::{evaluate, NodeValue};
use crate::ge::{map_genotype, Genotype};
use crate::generate::generate_tree;
use crate::grammar::Grammar;
use crate::par::Evaluator;
use crate::tree::TreeNode;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    #[default]
    Maximize,
    Minimize,
}

impl Direction {
    pub fn worst(self) -> f64 {
        match self {
            Direction::Maximize => f64::NEG_INFINITY,
            Direction::Minimize => f64::INFINITY,
        }
    }

    /// Strictly better.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Direction::Maximize => a > b,
            Direction::Minimize => a < b,
        }
    }

    pub fn reaches(self, fitness: f64, target: f64) -> bool {
        match self {
            Direction::Maximize => fitness >= target,
            Direction::Minimize => fitness <= target,
        }
    }
}

/// The user's side of a run.
///
/// `fitness` must be a pure function of the phenotype value: it may be called
/// from several threads and in any order. Non-finite results are replaced by
/// the direction's worst value.
pub trait Problem<V>: Sync {
    fn fitness(&self, phenotype: &V) -> f64;

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn target_fitness(&self) -> Option<f64> {
        None
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Genome {
    Tree(TreeNode),
    Codons(Genotype),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Individual {
    pub genome: Genome,
    /// Decoded tree for codon genomes; `None` until mapped or when mapping
    /// failed.
    mapped: Option<TreeNode>,
    fitness: Option<f64>,
}

impl Individual {
    pub fn new(genome: Genome) -> Self {
        Individual {
            genome,
            mapped: None,
            fitness: None,
        }
    }

    pub fn phenotype(&self) -> Option<&TreeNode> {
        match &self.genome {
            Genome::Tree(tree) => Some(tree),
            Genome::Codons(_) => self.mapped.as_ref(),
        }
    }

    pub fn fitness(&self) -> Option<f64> {
        self.fitness
    }

    /// Computes and caches the fitness. Mapping failures, evaluation errors
    /// and non-finite scores all become the worst fitness.
    pub fn evaluate<V: NodeValue, P: Problem<V> + ?Sized>(
        &mut self,
        grammar: &Grammar<V>,
        problem: &P,
        max_depth: usize,
        max_wraps: usize,
    ) -> f64 {
        if let Some(f) = self.fitness {
            return f;
        }
        if let Genome::Codons(genotype) = &self.genome {
            self.mapped = map_genotype(grammar, genotype, max_depth, max_wraps)
                .ok()
                .map(|m| m.tree);
        }
        let worst = problem.direction().worst();
        let fitness = match self.phenotype() {
            None => worst,
            Some(tree) => match evaluate(tree, grammar) {
                Ok(value) => {
                    let f = problem.fitness(&value);
                    if f.is_finite() {
                        f
                    } else {
                        worst
                    }
                }
                Err(_) => worst,
            },
        };
        self.fitness = Some(fitness);
        fitness
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenerationRecord {
    pub generation: usize,
    pub best_fitness: f64,
    /// Mean over individuals with a finite fitness; the worst value when
    /// there are none.
    pub mean_fitness: f64,
    pub elapsed_seconds: f64,
    pub best_tree: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunStats {
    pub records: Vec<GenerationRecord>,
}

pub struct Evolution<'a, V, P: ?Sized> {
    grammar: &'a Grammar<V>,
    problem: &'a P,
    config: GpConfig,
    rng: RandomSource,
    population: Vec<Individual>,
    generation: usize,
    started: Instant,
    stats: RunStats,
    best: Option<Individual>,
    evaluator: Evaluator,
}

impl<'a, V, P> Evolution<'a, V, P>
where
    V: NodeValue,
    P: Problem<V> + ?Sized,
{
    /// Validates the configuration and builds the initial population.
    pub fn new(
        grammar: &'a Grammar<V>,
        problem: &'a P,
        config: GpConfig,
    ) -> Result<Self, EngineError> {
        let start_depth = grammar
            .min_depth_nonterminal(grammar.start())
            .expect("start is registered");
        config.validate(start_depth)?;
        let mut evo = Evolution {
            grammar,
            problem,
            rng: RandomSource::seeded(config.seed),
            population: Vec::with_capacity(config.population_size),
            generation: 0,
            started: Instant::now(),
            stats: RunStats::default(),
            best: None,
            evaluator: Evaluator::new(config.parallel_eval),
            config,
        };
        for _ in 0..evo.config.population_size {
            let ind = evo.fresh_individual()?;
            evo.population.push(ind);
        }
        Ok(evo)
    }

    pub fn population(&self) -> &[Individual] {
        &self.population
    }

    pub fn generation(&self) -> usize {
        self.generation
    }

    pub fn stats(&self) -> &RunStats {
        &self.stats
    }

    pub fn best(&self) -> Option<&Individual> {
        self.best.as_ref()
    }

    /// Ramped grow for trees (depth drawn uniformly between the start
    /// symbol's min-depth and `max_depth`), uniform random codons for GE.
    fn fresh_individual(&mut self) -> Result<Individual, EngineError> {
        let genome = match self.config.representation {
            Representation::Tree => {
                let lo = self
                    .grammar
                    .min_depth_nonterminal(self.grammar.start())
                    .expect("start is registered");
                let depth = lo + self.rng.choose(self.config.max_depth - lo + 1, None);
                Genome::Tree(generate_tree(
                    self.grammar,
                    &self.grammar.start_symbol(),
                    depth,
                    &mut self.rng,
                )?)
            }
            Representation::Ge => {
                let codons = (0..self.config.ge_codon_count_init)
                    .map(|_| self.rng.codon())
                    .collect();
                Genome::Codons(Genotype::new(codons))
            }
        };
        Ok(Individual::new(genome))
    }

    /// Evaluates the current population and appends its stats record.
    pub fn evaluate_generation(&mut self) -> &GenerationRecord {
        let (grammar, problem) = (self.grammar, self.problem);
        let (max_depth, wraps) = (self.config.max_depth, self.config.ge_max_wraps);
        self.evaluator.run(&mut self.population, |ind| {
            ind.evaluate(grammar, problem, max_depth, wraps);
        });

        let direction = self.problem.direction();
        let fitness: Vec<f64> = self
            .population
            .iter()
            .map(|i| i.fitness.expect("evaluated"))
            .collect();
        let mut best_idx = 0;
        for (i, f) in fitness.iter().enumerate() {
            if direction.is_better(*f, fitness[best_idx]) {
                best_idx = i;
            }
        }
        let finite: Vec<f64> = fitness.iter().copied().filter(|f| f.is_finite()).collect();
        let mean = if finite.is_empty() {
            direction.worst()
        } else {
            finite.iter().sum::<f64>() / finite.len() as f64
        };
        let champion = &self.population[best_idx];
        let improved = match &self.best {
            None => true,
            Some(b) => direction.is_better(fitness[best_idx], b.fitness.expect("evaluated")),
        };
        if improved {
            self.best = Some(champion.clone());
        }
        let best_tree = champion
            .phenotype()
            .map_or_else(|| "invalid".to_string(), |t| t.to_sexpr(self.grammar));
        self.stats.records.push(GenerationRecord {
            generation: self.generation,
            best_fitness: fitness[best_idx],
            mean_fitness: mean,
            elapsed_seconds: self.started.elapsed().as_secs_f64(),
            best_tree,
        });
        self.stats.records.last().expect("just pushed")
    }

    /// Whether a stopping criterion holds after the latest evaluation.
    pub fn should_stop(&self) -> bool {
        let Some(record) = self.stats.records.last() else {
            return false;
        };
        if let Some(target) = self.problem.target_fitness() {
            if self
                .problem
                .direction()
                .reaches(record.best_fitness, target)
            {
                return true;
            }
        }
        if self
            .config
            .max_generations
            .is_some_and(|g| self.generation >= g)
        {
            return true;
        }
        self.config
            .time_budget_seconds
            .is_some_and(|t| self.started.elapsed().as_secs_f64() >= t)
    }

    /// Replaces the population with the next generation: elites, then fresh
    /// individuals, then offspring. Offspring come from tournament pairs
    /// (crossover with the configured probability, otherwise a copy of the
    /// first parent), followed by a mutation pass over all offspring.
    pub fn breed(&mut self) -> Result<(), EngineError> {
        let cfg = self.config.clone();
        let direction = self.problem.direction();
        let fitness: Vec<f64> = self
            .population
            .iter()
            .map(|i| i.fitness.unwrap_or(direction.worst()))
            .collect();

        let mut ranked: Vec<usize> = (0..self.population.len()).collect();
        ranked.sort_by(|&a, &b| {
            if direction.is_better(fitness[a], fitness[b]) {
                std::cmp::Ordering::Less
            } else if direction.is_better(fitness[b], fitness[a]) {
                std::cmp::Ordering::Greater
            } else {
                a.cmp(&b)
            }
        });

        let mut next: Vec<Individual> = ranked[..cfg.elitism_count]
            .iter()
            .map(|&i| self.population[i].clone())
            .collect();
        for _ in 0..cfg.novelty_count {
            let ind = self.fresh_individual()?;
            next.push(ind);
        }

        let wanted = cfg.population_size - next.len();
        let mut offspring: Vec<Individual> = Vec::with_capacity(wanted + 1);
        while offspring.len() < wanted {
            let p1 = tournament_select(&fitness, cfg.tournament_size, direction, &mut self.rng);
            if self.rng.chance(cfg.crossover_probability) {
                let p2 = tournament_select(&fitness, cfg.tournament_size, direction, &mut self.rng);
                let (c1, c2) = self.crossover(p1, p2)?;
                offspring.push(Individual::new(c1));
                if offspring.len() < wanted {
                    offspring.push(Individual::new(c2));
                }
            } else {
                offspring.push(self.population[p1].clone());
            }
        }
        for child in &mut offspring {
            if self.rng.chance(cfg.mutation_probability) {
                let genome = match &child.genome {
                    Genome::Tree(t) => Genome::Tree(tree_mutation(
                        t,
                        self.grammar,
                        cfg.max_depth,
                        &mut self.rng,
                    )?),
                    Genome::Codons(g) => {
                        let rate = 1.0 / g.len().max(1) as f64;
                        Genome::Codons(ge_mutation(g, rate, &mut self.rng))
                    }
                };
                *child = Individual::new(genome);
            }
        }
        next.extend(offspring);
        self.population = next;
        self.generation += 1;
        Ok(())
    }

    fn crossover(&mut self, p1: usize, p2: usize) -> Result<(Genome, Genome), EngineError> {
        Ok(
            match (&self.population[p1].genome, &self.population[p2].genome) {
                (Genome::Tree(a), Genome::Tree(b)) => {
                    let (x, y) =
                        tree_crossover(a, b, self.grammar, self.config.max_depth, &mut self.rng)?;
                    (Genome::Tree(x), Genome::Tree(y))
                }
                (Genome::Codons(a), Genome::Codons(b)) => {
                    let (x, y) = ge_crossover(a, b, &mut self.rng);
                    (Genome::Codons(x), Genome::Codons(y))
                }
                _ => unreachable!("a population holds a single representation"),
            },
        )
    }

    /// Runs to completion and returns the best individual seen.
    pub fn run(mut self) -> Result<(Individual, RunStats), EngineError> {
        loop {
            self.evaluate_generation();
            if self.should_stop() {
                break;
            }
            self.breed()?;
        }
        Ok((
            self.best.expect("at least one generation evaluated"),
            self.stats,
        ))
    }
}

/// Convenience wrapper around [`Evolution`].
pub fn evolve<V, P>(
    grammar: &Grammar<V>,
    problem: &P,
    config: GpConfig,
) -> Result<(Individual, RunStats), EngineError>
where
    V: NodeValue,
    P: Problem<V> + ?Sized,
{
    Evolution::new(grammar, problem, config)?.run()
}
