//! Two-class classification: the class is the sign of an evolved expression
//! over five numeric features.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use typegp::handlers::{FloatRange, IntRange};
use typegp::{Direction, GpConfig, Grammar, Problem, Production, Registry, SymbolRef as S};

use crate::dataset::{Cell, Dataset, DatasetError};
use crate::node::{one, two, Node};
use crate::spec::BenchmarkSpec;

pub const FEATURES: usize = 5;
pub const ROWS: usize = 200;
/// Seed of the built-in dataset, independent of the run seed.
pub const DATA_SEED: u64 = 7;
pub const NOISE: f64 = 0.2;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Feature(usize),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

pub type Value = Node<Expr>;

impl Expr {
    pub fn eval(&self, row: &[f64]) -> f64 {
        match self {
            Expr::Const(c) => *c,
            Expr::Feature(i) => row[*i],
            Expr::Add(a, b) => a.eval(row) + b.eval(row),
            Expr::Sub(a, b) => a.eval(row) - b.eval(row),
            Expr::Mul(a, b) => a.eval(row) * b.eval(row),
        }
    }
}

/// Features uniform in [-1, 1]; the label is `f0 + f1 - f2 > 0` after adding
/// Gaussian noise with standard deviation `noise` to the score.
pub fn synthesize(seed: u64, rows: usize, noise: f64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, noise.max(f64::MIN_POSITIVE)).expect("finite deviation");
    let mut features = Vec::with_capacity(rows);
    let mut targets = Vec::with_capacity(rows);
    for _ in 0..rows {
        let f: Vec<f64> = (0..FEATURES).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        let jitter = if noise > 0.0 {
            normal.sample(&mut rng)
        } else {
            0.0
        };
        let label = f[0] + f[1] - f[2] + jitter > 0.0;
        features.push(f.into_iter().map(Cell::Scalar).collect());
        targets.push(if label { 1.0 } else { 0.0 });
    }
    Dataset::new(features, targets).expect("rectangular by construction")
}

pub struct Classification {
    rows: Vec<Vec<f64>>,
    labels: Vec<bool>,
}

impl Classification {
    /// Requires exactly five scalar features and 0/1 targets.
    pub fn from_dataset(data: &Dataset) -> Result<Self, DatasetError> {
        let mut rows = Vec::with_capacity(data.len());
        let mut labels = Vec::with_capacity(data.len());
        for (r, (cells, &t)) in data.features.iter().zip(&data.targets).enumerate() {
            let line = r as u64 + 1;
            if cells.len() != FEATURES {
                return Err(DatasetError::Shape {
                    line,
                    column: cells.len(),
                    message: format!("classification needs {FEATURES} feature columns"),
                });
            }
            let row = cells
                .iter()
                .enumerate()
                .map(|(column, c)| {
                    c.scalar().ok_or_else(|| DatasetError::Shape {
                        line,
                        column,
                        message: "features must be scalars".into(),
                    })
                })
                .collect::<Result<Vec<f64>, _>>()?;
            if t != 0.0 && t != 1.0 {
                return Err(DatasetError::Shape {
                    line,
                    column: FEATURES,
                    message: "labels must be 0 or 1".into(),
                });
            }
            rows.push(row);
            labels.push(t == 1.0);
        }
        Ok(Classification { rows, labels })
    }

    pub fn accuracy(&self, e: &Expr) -> f64 {
        let hits = self
            .rows
            .iter()
            .zip(&self.labels)
            .filter(|(row, &label)| (e.eval(row) > 0.0) == label)
            .count();
        hits as f64 / self.rows.len() as f64
    }

    pub fn prevalence(&self) -> f64 {
        self.labels.iter().filter(|&&l| l).count() as f64 / self.labels.len() as f64
    }
}

impl Problem<Value> for Classification {
    fn fitness(&self, phenotype: &Value) -> f64 {
        match phenotype {
            Node::Expr(e) => self.accuracy(e),
            _ => f64::NAN,
        }
    }

    fn direction(&self) -> Direction {
        Direction::Maximize
    }

    fn target_fitness(&self) -> Option<f64> {
        Some(1.0)
    }
}

pub fn grammar() -> Grammar<Value> {
    let mut reg = Registry::<Value>::new();
    reg.register_nonterminal("Expr").expect("fresh registry");
    let binary = |name: &str, build: fn(Box<Expr>, Box<Expr>) -> Expr| {
        Production::<Value>::new(name, "Expr")
            .field("left", S::nt("Expr"))
            .field("right", S::nt("Expr"))
            .action(move |args| {
                let (a, b) = two(args)?;
                Ok(Node::Expr(build(a, b)))
            })
    };
    let productions = [
        binary("Add", Expr::Add),
        binary("Sub", Expr::Sub),
        binary("Mul", Expr::Mul),
        Production::<Value>::new("Feature", "Expr")
            .field(
                "index",
                S::annotated(
                    S::int(),
                    IntRange::new(0, FEATURES as i64 - 1).expect("valid range"),
                ),
            )
            .action(|args| Ok(Node::Expr(Expr::Feature(one(args)?.as_int()? as usize)))),
        Production::<Value>::new("Const", "Expr")
            .field(
                "value",
                S::annotated(S::real(), FloatRange::new(-1.0, 1.0).expect("valid range")),
            )
            .action(|args| Ok(Node::Expr(Expr::Const(one(args)?.as_real()?)))),
    ];
    for p in productions {
        reg.register_production(p).expect("unique names");
    }
    reg.extract_grammar("Expr")
        .expect("classification grammar is valid")
}

/// Uses `data` when given, otherwise the built-in noisy synthetic set.
pub fn spec(data: Option<&Dataset>) -> Result<BenchmarkSpec<Value, Classification>, DatasetError> {
    let problem = match data {
        Some(d) => Classification::from_dataset(d)?,
        None => Classification::from_dataset(&synthesize(DATA_SEED, ROWS, NOISE))?,
    };
    Ok(BenchmarkSpec {
        name: "classification",
        grammar: grammar(),
        problem,
        defaults: GpConfig::default(),
    })
}
