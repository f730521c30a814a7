mod support;

use typegp::{
    check_tree, evolve, Direction, EngineError, Evolution, GpConfig, Grammar, Problem,
    Representation, RunStats, Value,
};

/// Distance of an integer expression from a target value.
struct Hit {
    target: i64,
    direction: Direction,
    stop_at: Option<f64>,
}

impl Problem<Value> for Hit {
    fn fitness(&self, v: &Value) -> f64 {
        let d = (v.as_int().unwrap() - self.target).abs() as f64;
        match self.direction {
            Direction::Maximize => -d,
            Direction::Minimize => d,
        }
    }

    fn direction(&self) -> Direction {
        self.direction
    }

    fn target_fitness(&self) -> Option<f64> {
        self.stop_at
    }
}

struct Constant(f64);

impl Problem<Value> for Constant {
    fn fitness(&self, _: &Value) -> f64 {
        self.0
    }
}

/// Reports NaN for odd values.
struct Flaky;

impl Problem<Value> for Flaky {
    fn fitness(&self, v: &Value) -> f64 {
        let x = v.as_int().unwrap();
        if x % 2 == 0 {
            -(x as f64).abs()
        } else {
            f64::NAN
        }
    }
}

fn maximize(target: i64) -> Hit {
    Hit {
        target,
        direction: Direction::Maximize,
        stop_at: None,
    }
}

fn config(seed: u64) -> GpConfig {
    GpConfig {
        population_size: 60,
        max_depth: 6,
        max_generations: Some(15),
        seed,
        ..GpConfig::default()
    }
}

fn without_timing(stats: &RunStats) -> RunStats {
    let mut s = stats.clone();
    for r in &mut s.records {
        r.elapsed_seconds = 0.0;
    }
    s
}

#[test]
fn constant_fitness_runs_exactly_the_generation_budget() {
    let g = support::arith();
    let (best, stats) = evolve(
        &g,
        &Constant(7.0),
        GpConfig {
            max_generations: Some(5),
            ..config(1)
        },
    )
    .unwrap();
    assert_eq!(stats.records.len(), 6);
    assert_eq!(
        stats
            .records
            .iter()
            .map(|r| r.generation)
            .collect::<Vec<_>>(),
        vec![0, 1, 2, 3, 4, 5]
    );
    assert_eq!(best.fitness(), Some(7.0));
    assert!(stats
        .records
        .iter()
        .all(|r| r.best_fitness == 7.0 && r.mean_fitness == 7.0));
}

#[test]
fn zero_generations_evaluates_only_the_initial_population() {
    let g = support::arith();
    let (_, stats) = evolve(
        &g,
        &Constant(1.0),
        GpConfig {
            max_generations: Some(0),
            ..config(1)
        },
    )
    .unwrap();
    assert_eq!(stats.records.len(), 1);
}

#[test]
fn reaching_the_target_at_generation_zero_stops_immediately() {
    let g = support::arith();
    let problem = Hit {
        target: 0,
        direction: Direction::Maximize,
        stop_at: Some(-1e9),
    };
    let (_, stats) = evolve(&g, &problem, config(3)).unwrap();
    assert_eq!(stats.records.len(), 1);
}

#[test]
fn target_fitness_stops_early() {
    let g = support::arith();
    let problem = Hit {
        target: 42,
        direction: Direction::Maximize,
        stop_at: Some(0.0),
    };
    let (best, stats) = evolve(
        &g,
        &problem,
        GpConfig {
            max_generations: Some(200),
            ..config(5)
        },
    )
    .unwrap();
    assert_eq!(best.fitness(), Some(0.0));
    assert!(stats.records.len() < 201);
    assert_eq!(stats.records.last().unwrap().best_fitness, 0.0);
}

#[test]
fn same_seed_same_run() {
    let g = support::arith();
    for representation in [Representation::Tree, Representation::Ge] {
        let cfg = GpConfig {
            representation,
            ..config(77)
        };
        let (a_best, a) = evolve(&g, &maximize(42), cfg.clone()).unwrap();
        let (b_best, b) = evolve(&g, &maximize(42), cfg).unwrap();
        assert_eq!(without_timing(&a), without_timing(&b));
        assert_eq!(a_best, b_best);
    }
}

#[test]
fn different_seeds_differ() {
    let g = support::arith();
    let (_, a) = evolve(&g, &maximize(42), config(1)).unwrap();
    let (_, b) = evolve(&g, &maximize(42), config(2)).unwrap();
    assert_ne!(without_timing(&a), without_timing(&b));
}

#[test]
fn parallel_evaluation_matches_sequential() {
    let g = support::vectorial();
    struct NearPi;
    impl Problem<Value> for NearPi {
        fn fitness(&self, v: &Value) -> f64 {
            -(v.as_real().unwrap() - std::f64::consts::PI).abs()
        }
    }
    let (_, seq) = evolve(&g, &NearPi, config(9)).unwrap();
    let (_, par) = evolve(
        &g,
        &NearPi,
        GpConfig {
            parallel_eval: 4,
            ..config(9)
        },
    )
    .unwrap();
    assert_eq!(without_timing(&seq), without_timing(&par));
}

#[test]
fn elitism_keeps_the_best_fitness_monotone() {
    let g = support::arith();
    for seed in 0..20 {
        let (best, stats) = evolve(&g, &maximize(1000), config(seed)).unwrap();
        for w in stats.records.windows(2) {
            assert!(w[1].best_fitness >= w[0].best_fitness, "seed {seed}");
        }
        assert_eq!(
            best.fitness(),
            Some(stats.records.last().unwrap().best_fitness)
        );
    }
}

#[test]
fn minimisation_is_monotone_downwards() {
    let g = support::arith();
    let problem = Hit {
        target: 500,
        direction: Direction::Minimize,
        stop_at: None,
    };
    let (best, stats) = evolve(&g, &problem, config(4)).unwrap();
    for w in stats.records.windows(2) {
        assert!(w[1].best_fitness <= w[0].best_fitness);
    }
    assert!(best.fitness().unwrap() <= stats.records[0].best_fitness);
}

fn check_population(
    g: &Grammar<Value>,
    evo: &Evolution<'_, Value, impl Problem<Value>>,
    cfg: &GpConfig,
) {
    let worst = Direction::Maximize.worst();
    assert_eq!(evo.population().len(), cfg.population_size);
    for ind in evo.population() {
        match ind.phenotype() {
            Some(tree) => {
                assert!(check_tree(g, &g.start_symbol(), tree).is_ok());
                assert!(tree.depth() <= cfg.max_depth);
            }
            None => assert_eq!(ind.fitness(), Some(worst)),
        }
    }
}

#[test]
fn every_generation_is_valid_and_full_size() {
    let g = support::structural();
    for representation in [Representation::Tree, Representation::Ge] {
        let cfg = GpConfig {
            representation,
            novelty_count: 5,
            elitism_count: 2,
            ge_codon_count_init: 20,
            ..config(12)
        };
        let mut evo = Evolution::new(&g, &Constant(0.0), cfg.clone()).unwrap();
        for _ in 0..10 {
            evo.evaluate_generation();
            check_population(&g, &evo, &cfg);
            evo.breed().unwrap();
        }
        assert_eq!(evo.generation(), 10);
    }
}

#[test]
fn ge_individuals_that_fail_to_map_get_the_worst_fitness() {
    let g = support::arith();
    // three codons can rarely complete a recursive expression without wrapping
    let cfg = GpConfig {
        representation: Representation::Ge,
        ge_codon_count_init: 3,
        ge_max_wraps: 0,
        ..config(8)
    };
    let problem = maximize(3);
    let mut evo = Evolution::new(&g, &problem, cfg.clone()).unwrap();
    evo.evaluate_generation();
    let invalid = evo
        .population()
        .iter()
        .filter(|i| i.phenotype().is_none())
        .count();
    assert!(invalid > 0);
    check_population(&g, &evo, &cfg);
    let record = &evo.stats().records[0];
    assert!(record.mean_fitness.is_finite());
}

#[test]
fn evaluation_failures_become_the_worst_fitness() {
    let g = support::arith();
    let mut evo = Evolution::new(&g, &Flaky, config(6)).unwrap();
    evo.evaluate_generation();
    let mut odd = 0;
    for ind in evo.population() {
        let f = ind.fitness().unwrap();
        if f == f64::NEG_INFINITY {
            odd += 1;
        } else {
            assert!(f.is_finite());
        }
    }
    assert!(odd > 0);
}

#[test]
fn configuration_errors_surface_before_evaluation() {
    let g = support::arith();
    let bad = [
        GpConfig {
            elitism_count: 40,
            novelty_count: 30,
            ..config(0)
        },
        GpConfig {
            population_size: 0,
            ..config(0)
        },
        GpConfig {
            tournament_size: 0,
            ..config(0)
        },
        GpConfig {
            crossover_probability: 1.5,
            ..config(0)
        },
        GpConfig {
            max_generations: None,
            time_budget_seconds: None,
            ..config(0)
        },
        GpConfig {
            max_depth: 1,
            ..config(0)
        },
    ];
    for cfg in bad {
        assert!(matches!(
            evolve(&g, &Constant(0.0), cfg),
            Err(EngineError::Config(_))
        ));
    }
}

#[test]
fn time_budget_stops_at_a_generation_boundary() {
    let g = support::arith();
    let cfg = GpConfig {
        max_generations: None,
        time_budget_seconds: Some(0.2),
        ..config(2)
    };
    let started = std::time::Instant::now();
    let (_, stats) = evolve(&g, &maximize(1_000_000), cfg).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    assert!(elapsed >= 0.2);
    assert!(elapsed < 5.0);
    assert!(stats.records.last().unwrap().elapsed_seconds >= 0.2);
    for w in stats.records.windows(2) {
        assert!(w[1].elapsed_seconds >= w[0].elapsed_seconds);
    }
}
